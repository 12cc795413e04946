//! Frame-theoretic quantities and Welch-type lower bounds for discrete and
//! sampled continuous frames.
//!
//! A continuous frame over a measure space `(Ω, μ)` is represented by a
//! [`measure::QuadratureMeasure`] (weighted nodes) and one vector per node
//! ([`frames::SampledFrame`]). On top of that the crate provides
//!
//! * the frame operator, canonical duals and trace identities ([`frames`]);
//! * closed-form lower bounds and their evaluation against a frame ([`bounds`]);
//! * coherence, CRMS correlation, frame potential and equiangularity ([`metrics`]);
//! * a descent search for low-coherence and low-potential configurations ([`optimizer`]).

pub mod bounds;
pub mod error;
pub mod field;
pub mod frames;
pub mod measure;
pub mod metrics;
pub mod numerics;
pub mod optimizer;
pub mod rng;

pub use error::{Error, Result};
pub use field::FieldTag;
pub use frames::{Builtin, SampledFrame};
pub use measure::{MassSummary, QuadratureMeasure};
