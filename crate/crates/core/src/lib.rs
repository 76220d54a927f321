//! Semi-analytic series for the Thomas-Fermi ion.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`expansion`] solves the coupled integral equations for the screening
//!    problem order by order in `K = 2/a^{3/2}`, producing the coefficient
//!    functions `eta_m(t)`, `xi_m(t)` on a uniform grid.
//! 2. [`expansion::KSeries`] collects the radius, ionization potential,
//!    binding energy and `e:p`-ratio as Taylor series in `K`.
//! 3. [`elimination`] removes `K` in favour of the `e:p`-ratio `N`.
//! 4. [`improved`] evaluates the ion state from the series of the fundamental
//!    function `c(N) = b^{-1/3} X^{-4/3}` using incomplete Beta functions.
//!
//! [`oracle`] integrates the Thomas-Fermi equation directly by shooting and is
//! used to cross-check every series result; [`limit`] computes the neutral-atom
//! limit of `c`.
//!
//! All numerical code is generic over [`Scalar`]; the `f64` aliases below are
//! what the command line and the tests use.

pub mod beta;
pub mod elimination;
pub mod error;
pub mod expansion;
pub mod grid;
pub mod improved;
pub mod limit;
pub mod oracle;
pub mod pipeline;
pub mod power_series;
pub mod quadrature;
pub mod scalar;

mod dopri;

pub use error::{Result, TfError};
pub use scalar::Scalar;

pub use elimination::{NSeries, RecursionReport, TransformMatrix, TransformTableau};
pub use expansion::{ExpansionConfig, ExpansionSet, KSeries, KSeriesName};
pub use grid::GridFunction;
pub use improved::{IonSeries, IonState, Method, PhysicalState};
pub use limit::{LimitConfig, LimitState};
pub use oracle::{IntegralReport, OracleSolution, Sample, ShootConfig};
pub use pipeline::{Pipeline, PipelineConfig};
pub use power_series::{TruncatedSeries, Variable};

/// Exact rational exponent used for leading powers `v^alpha`.
pub type Exponent = num_rational::Rational64;

pub type Series = TruncatedSeries<f64>;
pub type Grid = GridFunction<f64>;
pub type Expansion = ExpansionSet<f64>;
pub type KTable = KSeries<f64>;
pub type NTable = NSeries<f64>;
pub type Matrix = TransformMatrix<f64>;
pub type Ion = IonState<f64>;
pub type Model = Pipeline<f64>;
pub type Oracle = OracleSolution<f64>;
pub type Limit = LimitState<f64>;
