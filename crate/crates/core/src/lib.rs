pub mod error;
pub mod filtration;
pub mod isometry;
pub mod lp;
pub mod matching;
pub mod metrics;
pub mod miniball;
pub mod persistence;
pub mod rational;
pub mod separation;
pub mod simplex;
pub mod z2;

pub use error::{Error, Result};
pub use metrics::{DiscreteString, GeneralizedString, Letter, Mode, StringSet};
pub use rational::Rational;
pub use simplex::Simplex;
