//! Order-by-order solution of the screening problem in powers of `K`.
//!
//! With `t = sqrt(1 - chi)`, `xi = a x / (1 - chi)` and `eta = (psi / a)^2`
//! the Thomas-Fermi equation becomes the pair of integral equations
//!
//! ```text
//! xi(t)  = 2/t^2 * int_0^t t' eta^{-1/2} dt'
//! eta(t) = 1 - 2K * int_0^t (1 - t'^2)^{3/2} xi^{-1/2} dt'
//! ```
//!
//! Writing `eta = sum_m K^m eta_m(t)`, `xi = sum_m K^m xi_m(t)` and collecting
//! powers of `K` gives
//!
//! ```text
//! xi_m(t)      = 2/t^2 * int_0^t t' [eta^{-1/2}]_m dt'
//! eta_{m+1}(t) = -2 * int_0^t (1 - t'^2)^{3/2} [xi^{-1/2}]_m dt'
//! ```
//!
//! where `[f^beta]_m` is the `m`-th coefficient of the power series of
//! `f^beta`. At every grid node the values `(f_0(t_i), f_1(t_i), ...)` form a
//! `K`-series with unit constant term, so the power coefficients are formed
//! node by node.

use std::fmt;

use num_rational::Rational64;

use crate::error::{Result, TfError};
use crate::grid::{cumulative_simpson, GridFunction};
use crate::power_series::{power_coefficients_unit, TruncatedSeries, Variable};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpansionConfig {
    /// Highest order `M` of `eta_m`, `xi_m`.
    pub order: usize,
    /// Number of grid nodes on `t in [0, 1]`; odd.
    pub grid: usize,
}

impl Default for ExpansionConfig {
    fn default() -> Self {
        Self {
            order: 6,
            grid: 20001,
        }
    }
}

/// The coefficient functions `eta_0..=eta_M` and `xi_0..=xi_M`.
#[derive(Debug, Clone)]
pub struct ExpansionSet<T> {
    eta: Vec<GridFunction<T>>,
    xi: Vec<GridFunction<T>>,
}

impl<T: Scalar> ExpansionSet<T> {
    pub fn compute(config: ExpansionConfig) -> Result<Self> {
        if config.order < 1 {
            return Err(TfError::InvalidParameter(
                "expansion order must be at least 1".into(),
            ));
        }
        let n = config.grid;
        let ones = GridFunction::constant(n, T::one())?;
        let h = ones.step();
        let t: Vec<T> = (0..n).map(|i| ones.node(i)).collect();
        let weight: Vec<T> = t
            .iter()
            .map(|&ti| {
                let s = (T::one() - ti * ti).max(T::zero());
                s * s.sqrt()
            })
            .collect();
        let minus_half = T::lit(-0.5);
        let two = T::lit(2.0);

        let mut eta: Vec<Vec<T>> = vec![vec![T::one(); n]];
        let mut xi: Vec<Vec<T>> = vec![vec![T::one(); n]];
        let mut local = vec![T::zero(); config.order + 1];
        let mut power = vec![T::zero(); config.order + 1];
        let mut integrand = vec![T::zero(); n];

        for m in 0..config.order {
            // eta_{m+1} from [xi^{-1/2}]_m.
            for i in 0..n {
                for (j, xj) in xi.iter().enumerate() {
                    local[j] = xj[i];
                }
                power_coefficients_unit(&local[..=m], minus_half, &mut power[..=m]);
                integrand[i] = weight[i] * power[m];
            }
            let next_eta: Vec<T> = cumulative_simpson(&integrand, h)
                .into_iter()
                .map(|v| -two * v)
                .collect();
            eta.push(next_eta);

            // xi_{m+1} from [eta^{-1/2}]_{m+1}.
            let k = m + 1;
            let mut at_origin = T::zero();
            for i in 0..n {
                for (j, ej) in eta.iter().enumerate() {
                    local[j] = ej[i];
                }
                power_coefficients_unit(&local[..=k], minus_half, &mut power[..=k]);
                if i == 0 {
                    at_origin = power[k];
                }
                integrand[i] = t[i] * power[k];
            }
            let q = cumulative_simpson(&integrand, h);
            let mut next_xi: Vec<T> = q
                .iter()
                .zip(&t)
                .map(|(&qi, &ti)| two * qi / (ti * ti))
                .collect();
            // Removable singularity: the limit of (2/t^2) int_0^t t' g is g(0).
            next_xi[0] = at_origin;
            xi.push(next_xi);
        }

        Ok(Self {
            eta: eta
                .into_iter()
                .map(GridFunction::new)
                .collect::<Result<_>>()?,
            xi: xi.into_iter().map(GridFunction::new).collect::<Result<_>>()?,
        })
    }

    pub fn order(&self) -> usize {
        self.eta.len() - 1
    }

    pub fn grid_size(&self) -> usize {
        self.eta[0].len()
    }

    pub fn eta(&self, m: usize) -> &GridFunction<T> {
        &self.eta[m]
    }

    pub fn xi(&self, m: usize) -> &GridFunction<T> {
        &self.xi[m]
    }

    /// `eta_m(1)` for all `m`: the coefficients of `(b/a)^2`.
    pub fn eta_at_edge(&self) -> Vec<T> {
        self.eta.iter().map(GridFunction::last).collect()
    }

    /// `xi_m(1)` for all `m`: the coefficients of `aX`.
    pub fn xi_at_edge(&self) -> Vec<T> {
        self.xi.iter().map(GridFunction::last).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KSeriesName {
    Ax,
    AxInv,
    BaSquared,
    Ba,
    BindingOverA,
    N,
}

impl KSeriesName {
    pub const ALL: [KSeriesName; 6] = [
        KSeriesName::Ax,
        KSeriesName::AxInv,
        KSeriesName::BaSquared,
        KSeriesName::Ba,
        KSeriesName::BindingOverA,
        KSeriesName::N,
    ];

    pub fn label(self) -> &'static str {
        match self {
            KSeriesName::Ax => "aX",
            KSeriesName::AxInv => "(aX)^-1",
            KSeriesName::BaSquared => "(b/a)^2",
            KSeriesName::Ba => "b/a",
            KSeriesName::BindingOverA => "B/a",
            KSeriesName::N => "N",
        }
    }
}

impl fmt::Display for KSeriesName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The `K`-series of the ion quantities in second normalization, plus the
/// auxiliary `c/a = (b/a)^{-1/3} (aX)^{-4/3}`.
#[derive(Debug, Clone)]
pub struct KSeries<T> {
    pub ax: TruncatedSeries<T>,
    pub ax_inv: TruncatedSeries<T>,
    pub ba_squared: TruncatedSeries<T>,
    pub ba: TruncatedSeries<T>,
    pub binding_over_a: TruncatedSeries<T>,
    pub n: TruncatedSeries<T>,
    pub c_over_a: TruncatedSeries<T>,
}

impl<T: Scalar> KSeries<T> {
    pub fn assemble(set: &ExpansionSet<T>) -> Result<Self> {
        let r = Rational64::new;
        let ax = TruncatedSeries::taylor(Variable::K, set.xi_at_edge())?;
        let ba_squared = TruncatedSeries::taylor(Variable::K, set.eta_at_edge())?;
        let ba = ba_squared.pow(r(1, 2))?;
        let ax_inv = ax.pow(r(-1, 1))?;
        let one = TruncatedSeries::constant(Variable::K, T::one(), ax.order());

        // B/a = (3/7) (1 - eta(1) xi(1)),  N = 1 - xi(1) eta(1)^{1/2}.
        let binding_over_a = one
            .sub(&ba_squared.mul(&ax)?)?
            .scale(T::lit(3.0) / T::lit(7.0));
        let n = one.sub(&ax.mul(&ba)?)?;
        let c_over_a = ba_squared.pow(r(-1, 6))?.mul(&ax.pow(r(-4, 3))?)?;

        Ok(Self {
            ax,
            ax_inv,
            ba_squared,
            ba,
            binding_over_a,
            n,
            c_over_a,
        })
    }

    pub fn get(&self, name: KSeriesName) -> &TruncatedSeries<T> {
        match name {
            KSeriesName::Ax => &self.ax,
            KSeriesName::AxInv => &self.ax_inv,
            KSeriesName::BaSquared => &self.ba_squared,
            KSeriesName::Ba => &self.ba,
            KSeriesName::BindingOverA => &self.binding_over_a,
            KSeriesName::N => &self.n,
        }
    }

    pub fn order(&self) -> usize {
        self.ax.order()
    }
}
