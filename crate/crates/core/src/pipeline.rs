//! The full chain from the grid expansion to ion states.

use num_rational::Rational64;

use crate::elimination::{NSeries, TransformMatrix};
use crate::error::Result;
use crate::expansion::{ExpansionConfig, ExpansionSet, KSeries};
use crate::improved::IonSeries;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PipelineConfig {
    pub expansion: ExpansionConfig,
}

impl PipelineConfig {
    pub fn new(order: usize, grid: usize) -> Self {
        Self {
            expansion: ExpansionConfig { order, grid },
        }
    }
}

#[derive(Debug, Clone)]
pub struct Pipeline<T> {
    pub config: PipelineConfig,
    pub expansion: ExpansionSet<T>,
    pub k_series: KSeries<T>,
    pub n_series: NSeries<T>,
    /// Transformation matrix for `alpha = -2/3`.
    pub transform: TransformMatrix<T>,
}

impl<T: Scalar> Pipeline<T> {
    pub fn run(config: PipelineConfig) -> Result<Self> {
        let expansion = ExpansionSet::compute(config.expansion)?;
        let k_series = KSeries::assemble(&expansion)?;
        let n_series = NSeries::from_k_series(&k_series)?;
        let transform = TransformMatrix::new(
            Rational64::new(-2, 3),
            &k_series.n,
            k_series.n.order() - 1,
        )?;
        Ok(Self {
            config,
            expansion,
            k_series,
            n_series,
            transform,
        })
    }

    pub fn ion_series(&self) -> IonSeries<T> {
        IonSeries::new(self.n_series.clone())
    }
}
