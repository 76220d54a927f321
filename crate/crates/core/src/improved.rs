//! Ion states from the `N`-series, either as plain partial sums or through
//! the fundamental function `c(N) = b^{-1/3} X^{-4/3}`.
//!
//! The improved forms carry the exact behaviour at `N -> 1`:
//!
//! ```text
//! X^-1 = (1-N)^{1/3} c(N)          b = (1-N)^{4/3} c(N)
//! B    = sum_n c_n B(N; n+1/3, 7/3)
//! a    = c_0 [N^{-2/3} (1-N)^{7/3} + 7/3 B(N; 1/3, 7/3)]
//!        + sum_{n>=1} c_n (n-2/3) B(N; n-2/3, 10/3)
//! ```
//!
//! where `B(x; p, q)` is the incomplete Beta function.

use std::fmt;
use std::str::FromStr;

use crate::beta::incomplete_beta;
use crate::elimination::NSeries;
use crate::error::{Result, TfError};
use crate::scalar::Scalar;

/// Bohr radii per unit of ion radius, times `Z^{1/3}`.
pub const RADIUS_UNIT: f64 = 1.0 / 1.1295;
/// Rydberg per unit of energy, divided by `Z^{4/3}`.
pub const ENERGY_UNIT: f64 = 2.2590;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Partial sums of the `N`-series of each quantity.
    Taylor,
    /// Closed forms built on `c(N)`.
    Improved,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Taylor => "taylor",
            Method::Improved => "improved",
        })
    }
}

impl FromStr for Method {
    type Err = TfError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "taylor" => Ok(Method::Taylor),
            "improved" => Ok(Method::Improved),
            other => Err(TfError::InvalidParameter(format!("unknown method {other:?}"))),
        }
    }
}

/// State of a Thomas-Fermi ion in normalized units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IonState<T> {
    /// `e:p`-ratio.
    pub n: T,
    /// Ion radius `X`; infinite for the neutral atom.
    pub radius: T,
    pub inv_radius: T,
    /// Ionization potential `b`.
    pub ionization: T,
    /// Binding energy per proton `B`.
    pub binding: T,
    /// Initial slope `a` of the screening function.
    pub slope: T,
    /// `K = 2 / a^{3/2}`.
    pub k: T,
}

impl<T: Scalar> IonState<T> {
    fn from_parts(n: T, inv_radius: T, ionization: T, binding: T, slope: T) -> Self {
        let radius = if inv_radius > T::zero() {
            T::one() / inv_radius
        } else {
            T::infinity()
        };
        Self {
            n,
            radius,
            inv_radius,
            ionization,
            binding,
            slope,
            k: T::lit(2.0) / slope.powf(T::lit(1.5)),
        }
    }
}

/// Ion state in atomic units for nuclear charge `Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalState<T> {
    pub z: u32,
    /// Radius in Bohr radii.
    pub radius: T,
    /// Ionization potential in Rydberg.
    pub ionization: T,
    /// Total electronic binding energy in Rydberg.
    pub binding: T,
}

pub fn convert_units<T: Scalar>(state: &IonState<T>, z: u32) -> Result<PhysicalState<T>> {
    if z == 0 {
        return Err(TfError::InvalidParameter("nuclear charge must be at least 1".into()));
    }
    let zf = T::from_u32(z).expect("u32 representable");
    let third = T::one() / T::lit(3.0);
    Ok(PhysicalState {
        z,
        radius: state.radius * T::lit(RADIUS_UNIT) / zf.powf(third),
        ionization: state.ionization * T::lit(ENERGY_UNIT) * zf.powf(T::lit(4.0) * third),
        binding: state.binding * T::lit(ENERGY_UNIT) * zf.powf(T::lit(7.0) * third),
    })
}

/// Evaluates ion states from a set of `N`-series.
#[derive(Debug, Clone)]
pub struct IonSeries<T> {
    series: NSeries<T>,
}

impl<T: Scalar> IonSeries<T> {
    pub fn new(series: NSeries<T>) -> Self {
        Self { series }
    }

    pub fn series(&self) -> &NSeries<T> {
        &self.series
    }

    pub fn max_order(&self) -> usize {
        self.series.order()
    }

    fn check(&self, n: T, order: usize) -> Result<()> {
        if !(n > T::zero() && n <= T::one()) {
            return Err(TfError::OutOfDomain {
                what: "N",
                value: n.to_f64().unwrap_or(f64::NAN),
                domain: "(0, 1]",
            });
        }
        if order > self.max_order() {
            return Err(TfError::OrderOutOfRange {
                requested: order,
                available: self.max_order(),
            });
        }
        Ok(())
    }

    /// `sum_{n <= order} c_n N^{n - 2/3}`.
    pub fn eval_c(&self, n: T, order: usize) -> Result<T> {
        self.check(n, order)?;
        self.series.c.partial_sum(n, order)
    }

    pub fn eval_state(&self, n: T, order: usize, method: Method) -> Result<IonState<T>> {
        self.check(n, order)?;
        let s = &self.series;
        match method {
            Method::Taylor => Ok(IonState::from_parts(
                n,
                s.x_inv.partial_sum(n, order)?,
                s.b.partial_sum(n, order)?,
                s.binding.partial_sum(n, order)?,
                s.a.partial_sum(n, order)?,
            )),
            Method::Improved => {
                let c = self.eval_c(n, order)?;
                let rest = T::one() - n;
                let third = T::one() / T::lit(3.0);
                let binding = self.binding_terms(n, order)?.into_iter().sum();
                let slope = self.slope_terms(n, order)?.into_iter().sum();
                Ok(IonState::from_parts(
                    n,
                    rest.powf(third) * c,
                    rest.powf(T::lit(4.0) * third) * c,
                    binding,
                    slope,
                ))
            }
        }
    }

    /// Individual terms `c_n B(N; n+1/3, 7/3)` of the improved `B`.
    pub fn binding_terms(&self, n: T, order: usize) -> Result<Vec<T>> {
        self.check(n, order)?;
        let third = T::one() / T::lit(3.0);
        let q = T::lit(7.0) * third;
        (0..=order)
            .map(|j| {
                let p = T::from_usize_lossy(j) + third;
                Ok(self.series.c.coeff(j) * incomplete_beta(n, p, q)?)
            })
            .collect()
    }

    /// Individual terms of the improved `a`: the bracketed `c_0` term first,
    /// then `c_n (n - 2/3) B(N; n-2/3, 10/3)`.
    pub fn slope_terms(&self, n: T, order: usize) -> Result<Vec<T>> {
        self.check(n, order)?;
        let third = T::one() / T::lit(3.0);
        let two_thirds = T::lit(2.0) * third;
        let c = self.series.c.coeffs();
        let rest = T::one() - n;
        let head = c[0]
            * (n.powf(-two_thirds) * rest.powf(T::lit(7.0) * third)
                + T::lit(7.0) * third * incomplete_beta(n, third, T::lit(7.0) * third)?);
        let mut terms = vec![head];
        for j in 1..=order {
            let p = T::from_usize_lossy(j) - two_thirds;
            terms.push(c[j] * p * incomplete_beta(n, p, T::lit(10.0) * third)?);
        }
        Ok(terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::power_series::{TruncatedSeries, Variable};
    use num_rational::Rational64;

    /// Hand-made N-series; only `c` matters for the improved method.
    fn sample() -> IonSeries<f64> {
        let alpha = Rational64::new(-2, 3);
        let mk = |c: &[f64], a| TruncatedSeries::new(Variable::N, a, c.to_vec()).unwrap();
        let c = [0.34, -0.12, -0.02, -0.01];
        IonSeries::new(NSeries {
            c: mk(&c, alpha),
            x_inv: mk(&[0.34, -0.23, -0.02, -0.01], alpha),
            b: mk(&[0.34, -0.57, 0.21, 0.01], alpha),
            binding: mk(&[1.0, -0.43, 0.09, 0.002], Rational64::new(1, 3)),
            a: mk(&[0.34, 1.45, -0.21, 0.01], alpha),
        })
    }

    #[test]
    fn domain_checks() {
        let s = sample();
        assert!(s.eval_c(0.0, 2).is_err());
        assert!(s.eval_c(1.01, 2).is_err());
        assert!(s.eval_c(0.5, 4).is_err());
        assert!(s.eval_state(f64::NAN, 1, Method::Improved).is_err());
    }

    #[test]
    fn c_at_one_is_coefficient_sum() {
        let s = sample();
        assert!((s.eval_c(1.0, 3).unwrap() - 0.19).abs() < 1e-15);
        assert!((s.eval_c(1.0, 0).unwrap() - 0.34).abs() < 1e-15);
    }

    #[test]
    fn neutral_limit() {
        let st = sample().eval_state(1.0, 3, Method::Improved).unwrap();
        assert_eq!(st.ionization, 0.0);
        assert_eq!(st.inv_radius, 0.0);
        assert!(st.radius.is_infinite());
    }

    #[test]
    fn binding_is_three_sevenths_slope_at_one_termwise() {
        let s = sample();
        let b = s.binding_terms(1.0, 3).unwrap();
        let a = s.slope_terms(1.0, 3).unwrap();
        for (bt, at) in b.iter().zip(&a) {
            assert!((bt - 3.0 / 7.0 * at).abs() < 1e-13, "{bt} vs {at}");
        }
    }

    #[test]
    fn ionization_relation_is_built_in() {
        let s = sample();
        for n in [0.1, 0.5, 0.9] {
            let st = s.eval_state(n, 3, Method::Improved).unwrap();
            assert!((1.0 - st.ionization * st.radius - n).abs() < 1e-14);
        }
    }

    #[test]
    fn taylor_uses_partial_sums() {
        let st = sample().eval_state(1.0, 1, Method::Taylor).unwrap();
        assert!((st.inv_radius - 0.11).abs() < 1e-15);
        assert!((st.slope - 1.79).abs() < 1e-15);
        assert!((st.k - 2.0 / 1.79f64.powf(1.5)).abs() < 1e-15);
    }

    #[test]
    fn units() {
        let st = IonState::<f64> {
            n: 0.5,
            radius: 1.0,
            inv_radius: 1.0,
            ionization: 1.0,
            binding: 1.0,
            slope: 2.0,
            k: 0.5,
        };
        let one = convert_units(&st, 1).unwrap();
        assert!((one.radius - 0.885348).abs() < 1e-6);
        assert!((one.ionization - 2.2590).abs() < 1e-12);
        let eight = convert_units(&st, 8).unwrap();
        assert!((eight.binding - 2.2590 * 8f64.powf(7.0 / 3.0)).abs() < 1e-9);
        assert!((eight.radius - 0.885348 / 2.0).abs() < 1e-6);
        assert!(convert_units(&st, 0).is_err());
    }

    #[test]
    fn method_parsing() {
        assert_eq!("taylor".parse::<Method>().unwrap(), Method::Taylor);
        assert_eq!(Method::Improved.to_string(), "improved");
        assert!("exact".parse::<Method>().is_err());
    }
}
