//! Simulation and numerics for St. Petersburg sums and semistable laws.
//!
//! * [`tailmodel`]: log-periodically modulated power tails and their quantiles.
//! * [`charfn`]: exponent-form characteristic functions, the `G_gamma` family
//!   and CDF inversion.
//! * [`sampling`]: seeded samplers, Poisson point processes, LePage series.
//! * [`coupling`]: i.i.d. sums coupled with their Poisson-randomized versions.
//! * [`empirics`]: empirical CDFs, distances and the Monte Carlo experiments.

pub mod charfn;
pub mod coupling;
pub mod empirics;
pub mod error;
pub mod quad;
pub mod rng;
pub mod sampling;
pub mod tailmodel;

pub use charfn::{CdfTable, CfExponent, CfKind};
pub use coupling::CoupledPair;
pub use empirics::{Ecdf, ExperimentReport};
pub use error::{Error, Result};
pub use rng::RngStream;
pub use sampling::{PoissonPointSet, SampleBatch};
pub use tailmodel::{Psi, TailModel};
