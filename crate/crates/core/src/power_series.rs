//! Truncated power series with a rational leading exponent.
//!
//! A [`TruncatedSeries`] of order `M` stands for
//! `sum_{m=0..M} c[m] * v^(alpha + m)` in one expansion variable `v`. The same
//! type carries the `K`-series of the screening expansion and the `N`-series
//! obtained after eliminating `K`.

use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{Result, TfError};
use crate::scalar::Scalar;

/// Expansion variable a series is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variable {
    /// `K = 2 / a^{3/2}`.
    K,
    /// The `e:p`-ratio `N`.
    N,
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variable::K => f.write_str("K"),
            Variable::N => f.write_str("N"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries<T> {
    variable: Variable,
    alpha: Rational64,
    coeffs: Vec<T>,
}

impl<T: Scalar> TruncatedSeries<T> {
    pub fn new(variable: Variable, alpha: Rational64, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(TfError::InvalidParameter(
                "a truncated series needs at least the constant coefficient".into(),
            ));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(TfError::NonFinite("series coefficients"));
        }
        Ok(Self {
            variable,
            alpha,
            coeffs,
        })
    }

    /// Series with `alpha = 0`.
    pub fn taylor(variable: Variable, coeffs: Vec<T>) -> Result<Self> {
        Self::new(variable, Rational64::zero(), coeffs)
    }

    /// The constant `value` padded with zeros up to `order`.
    pub fn constant(variable: Variable, value: T, order: usize) -> Self {
        let mut coeffs = vec![T::zero(); order + 1];
        coeffs[0] = value;
        Self {
            variable,
            alpha: Rational64::zero(),
            coeffs,
        }
    }

    pub fn variable(&self) -> Variable {
        self.variable
    }

    pub fn alpha(&self) -> Rational64 {
        self.alpha
    }

    /// Truncation order `M`; there are `M + 1` coefficients.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, m: usize) -> T {
        self.coeffs[m]
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn with_alpha(mut self, alpha: Rational64) -> Self {
        self.alpha = alpha;
        self
    }

    /// Keeps the coefficients up to `order` (no-op if already shorter).
    pub fn truncate(mut self, order: usize) -> Self {
        self.coeffs.truncate(order + 1);
        self
    }

    fn check_variable(&self, other: &Self) -> Result<()> {
        if self.variable != other.variable {
            return Err(TfError::VariableMismatch {
                left: self.variable,
                right: other.variable,
            });
        }
        Ok(())
    }

    /// Cauchy product, truncated to the smaller order. Leading exponents add.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_variable(other)?;
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|k| (0..=k).map(|i| self.coeffs[i] * other.coeffs[k - i]).sum())
            .collect();
        Ok(Self {
            variable: self.variable,
            alpha: self.alpha + other.alpha,
            coeffs,
        })
    }

    /// Coefficient-wise sum; both series must share the leading exponent.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, op: impl Fn(T, T) -> T) -> Result<Self> {
        self.check_variable(other)?;
        if self.alpha != other.alpha {
            return Err(TfError::InvalidParameter(format!(
                "cannot add series with leading exponents {} and {}",
                self.alpha, other.alpha
            )));
        }
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|k| op(self.coeffs[k], other.coeffs[k]))
            .collect();
        Ok(Self {
            variable: self.variable,
            alpha: self.alpha,
            coeffs,
        })
    }

    pub fn scale(&self, factor: T) -> Self {
        Self {
            variable: self.variable,
            alpha: self.alpha,
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
        }
    }

    /// `f^beta` for a rational exponent; the leading exponent becomes
    /// `alpha * beta`.
    pub fn pow(&self, beta: Rational64) -> Result<Self> {
        let coeffs = power_coefficients(&self.coeffs, T::from_ratio(beta))?;
        Ok(Self {
            variable: self.variable,
            alpha: self.alpha * beta,
            coeffs,
        })
    }

    /// `f^beta` for an arbitrary real exponent. Only defined for series with
    /// `alpha = 0`, since `alpha * beta` would not be rational in general.
    pub fn powf(&self, beta: T) -> Result<Self> {
        if !self.alpha.is_zero() {
            return Err(TfError::InvalidParameter(
                "real powers need a series with zero leading exponent".into(),
            ));
        }
        Ok(Self {
            variable: self.variable,
            alpha: self.alpha,
            coeffs: power_coefficients(&self.coeffs, beta)?,
        })
    }

    /// `sum_{k <= m} c[k] * v^(alpha + k)`.
    pub fn partial_sum(&self, v: T, m: usize) -> Result<T> {
        if m > self.order() {
            return Err(TfError::OrderOutOfRange {
                requested: m,
                available: self.order(),
            });
        }
        let alpha = T::from_ratio(self.alpha);
        let lead = if alpha.is_zero() { T::one() } else { v.powf(alpha) };
        // Horner on the polynomial part.
        let poly = self.coeffs[..=m]
            .iter()
            .rev()
            .fold(T::zero(), |acc, &c| acc * v + c);
        Ok(lead * poly)
    }

    /// All partial sums `S_0..=S_M` at `v`.
    pub fn partial_sums(&self, v: T) -> Vec<T> {
        let alpha = T::from_ratio(self.alpha);
        let lead = if alpha.is_zero() { T::one() } else { v.powf(alpha) };
        let mut acc = T::zero();
        let mut vk = T::one();
        self.coeffs
            .iter()
            .map(|&c| {
                acc = acc + c * vk;
                vk = vk * v;
                lead * acc
            })
            .collect()
    }

    /// Drops vanishing leading coefficients, returning the shortened series
    /// and the number of coefficients removed. The leading exponent is not
    /// touched; callers decide how to absorb the shift.
    pub fn strip_leading_zeros(&self) -> (Self, usize) {
        let skip = self
            .coeffs
            .iter()
            .take_while(|c| c.is_zero())
            .count()
            .min(self.order());
        let s = Self {
            variable: self.variable,
            alpha: self.alpha,
            coeffs: self.coeffs[skip..].to_vec(),
        };
        (s, skip)
    }
}

/// Coefficients of `f^beta` to the order of `f`.
///
/// Uses the recurrence `g_0 = f_0^beta`,
/// `g_n = 1/(n f_0) * sum_{k=1..n} ((beta + 1) k - n) f_k g_{n-k}`,
/// which follows from `f g' = beta f' g`.
pub fn power_coefficients<T: Scalar>(f: &[T], beta: T) -> Result<Vec<T>> {
    let f0 = *f.first().ok_or_else(|| {
        TfError::InvalidParameter("empty coefficient list".into())
    })?;
    if f0.is_zero() {
        return Err(TfError::ZeroConstantTerm);
    }
    if f0 < T::zero() && beta.fract() != T::zero() {
        return Err(TfError::NegativeConstantTerm(f0.to_f64().unwrap_or(f64::NAN)));
    }
    let mut g = vec![T::zero(); f.len()];
    g[0] = if f0 == T::one() { T::one() } else { f0.powf(beta) };
    let beta1 = beta + T::one();
    for n in 1..f.len() {
        let nf = T::from_usize_lossy(n);
        let mut acc = T::zero();
        for k in 1..=n {
            let w = beta1 * T::from_usize_lossy(k) - nf;
            acc = acc + w * f[k] * g[n - k];
        }
        g[n] = acc / (nf * f0);
    }
    Ok(g)
}

/// In-place variant for `f_0 = 1` used on the hot path of the grid
/// expansion; writes into `out` (same length as `f`).
pub(crate) fn power_coefficients_unit<T: Scalar>(f: &[T], beta: T, out: &mut [T]) {
    debug_assert_eq!(f.len(), out.len());
    out[0] = T::one();
    let beta1 = beta + T::one();
    for n in 1..f.len() {
        let nf = T::from_usize_lossy(n);
        let mut acc = T::zero();
        for k in 1..=n {
            acc = acc + (beta1 * T::from_usize_lossy(k) - nf) * f[k] * out[n - k];
        }
        out[n] = acc / nf;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k(c: &[f64]) -> TruncatedSeries<f64> {
        TruncatedSeries::taylor(Variable::K, c.to_vec()).unwrap()
    }

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    /// Closed-form binomial expansion of `f^beta` through fifth order, with
    /// `f_0 = 1`. Written out term by term as an independent check on the
    /// recurrence. The cubic term of the third coefficient is `f_1^3`.
    fn closed_form(f: &[f64; 6], b: f64) -> [f64; 6] {
        let [_, f1, f2, f3, f4, f5] = *f;
        let c2 = b * (b - 1.0) / 2.0;
        let c3 = b * (b - 1.0) * (b - 2.0) / 6.0;
        let c4 = b * (b - 1.0) * (b - 2.0) * (b - 3.0) / 24.0;
        let c5 = b * (b - 1.0) * (b - 2.0) * (b - 3.0) * (b - 4.0) / 120.0;
        [
            1.0,
            b * f1,
            b * f2 + c2 * f1 * f1,
            b * f3 + b * (b - 1.0) * f1 * f2 + c3 * f1.powi(3),
            b * f4 + c2 * (f2 * f2 + 2.0 * f1 * f3) + 3.0 * c3 * f1 * f1 * f2 + c4 * f1.powi(4),
            b * f5
                + b * (b - 1.0) * (f2 * f3 + f1 * f4)
                + 3.0 * c3 * (f1 * f1 * f3 + f1 * f2 * f2)
                + 4.0 * c4 * f1.powi(3) * f2
                + c5 * f1.powi(5),
        ]
    }

    #[test]
    fn binomial_square() {
        let f = k(&[1.0, 1.0, 0.0]);
        assert_eq!(f.mul(&f).unwrap().coeffs(), &[1.0, 2.0, 1.0]);
        assert_eq!(f.pow(r(2, 1)).unwrap().coeffs(), &[1.0, 2.0, 1.0]);
    }

    #[test]
    fn multiplying_by_one_is_identity() {
        let f = k(&[1.0, 0.3, -0.2, 0.7]);
        let one = TruncatedSeries::constant(Variable::K, 1.0, 3);
        assert_eq!(f.mul(&one).unwrap(), f);
    }

    #[test]
    fn mul_truncates_to_shorter_and_adds_alpha() {
        let f = k(&[1.0, 2.0, 3.0]).with_alpha(r(-2, 3));
        let g = k(&[1.0, 1.0]).with_alpha(r(1, 1));
        let h = f.mul(&g).unwrap();
        assert_eq!(h.order(), 1);
        assert_eq!(h.alpha(), r(1, 3));
        assert_eq!(h.coeffs(), &[1.0, 3.0]);
    }

    #[test]
    fn mismatched_variables_rejected() {
        let f = k(&[1.0, 1.0]);
        let g = TruncatedSeries::taylor(Variable::N, vec![1.0, 1.0]).unwrap();
        assert!(matches!(
            f.mul(&g),
            Err(TfError::VariableMismatch { .. })
        ));
    }

    #[test]
    fn zero_constant_term_rejected() {
        let f = k(&[0.0, 1.0]);
        assert_eq!(f.pow(r(1, 2)), Err(TfError::ZeroConstantTerm));
    }

    #[test]
    fn first_coefficient_is_beta_f1() {
        let f = k(&[1.0, 0.37, 0.1]);
        for beta in [r(-1, 2), r(1, 3), r(5, 1), r(-7, 3)] {
            let g = f.pow(beta).unwrap();
            let b = *beta.numer() as f64 / *beta.denom() as f64;
            assert!((g.coeff(1) - b * 0.37).abs() < 1e-15);
        }
    }

    #[test]
    fn reciprocal_of_radius_series() {
        // aX coefficients through f_3 and the (aX)^-1 column they imply.
        let ax = k(&[1.0, 0.490873, 0.339148, 0.263353]);
        let inv = ax.pow(r(-1, 1)).unwrap();
        let expected = [1.0, -0.490873, -0.098191, -0.048674];
        for (got, want) in inv.coeffs().iter().zip(expected) {
            assert!((got - want).abs() < 2e-6, "{got} vs {want}");
        }
    }

    #[test]
    fn product_reproduces_n1() {
        // (b/a) * (aX) at K^1: -0.589049 + 0.490873 = -N_1.
        let ba = k(&[1.0, -0.589049]);
        let ax = k(&[1.0, 0.490873]);
        let p = ba.mul(&ax).unwrap();
        assert!((p.coeff(1) + 0.098176).abs() < 1e-12);
    }

    #[test]
    fn partial_sum_with_leading_power() {
        let f = k(&[0.5, 1.0, 2.0]).with_alpha(r(-2, 3));
        let v: f64 = 0.3;
        let want0 = 0.5 * v.powf(-2.0 / 3.0);
        assert!((f.partial_sum(v, 0).unwrap() - want0).abs() < 1e-15);
        let want2 = v.powf(-2.0 / 3.0) * (0.5 + v + 2.0 * v * v);
        assert!((f.partial_sum(v, 2).unwrap() - want2).abs() < 1e-14);
        assert_eq!(
            f.partial_sum(v, 3),
            Err(TfError::OrderOutOfRange {
                requested: 3,
                available: 2
            })
        );
        let sums = f.partial_sums(v);
        assert!((sums[2] - want2).abs() < 1e-14);
    }

    #[test]
    fn strip_leading_zeros_counts() {
        let f = k(&[0.0, 0.0, 3.0, 4.0]);
        let (s, n) = f.strip_leading_zeros();
        assert_eq!(n, 2);
        assert_eq!(s.coeffs(), &[3.0, 4.0]);
    }

    #[test]
    fn non_unit_constant_term() {
        let f = k(&[4.0, 4.0, 1.0]); // (2 + K)^2
        let g = f.pow(r(1, 2)).unwrap();
        assert!((g.coeff(0) - 2.0).abs() < 1e-15);
        assert!((g.coeff(1) - 1.0).abs() < 1e-15);
        assert!(g.coeff(2).abs() < 1e-15);
        assert!(k(&[-1.0, 1.0]).pow(r(1, 2)).is_err());
        assert!(k(&[-1.0, 1.0]).pow(r(2, 1)).is_ok());
    }

    fn unit_series(order: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-1.0f64..1.0, order).prop_map(|mut v| {
            v.insert(0, 1.0);
            v
        })
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter()
            .zip(b)
            .all(|(x, y)| (x - y).abs() <= tol * (1.0 + x.abs().max(y.abs())))
    }

    proptest! {
        #[test]
        fn power_one_and_zero(c in unit_series(6)) {
            let f = k(&c);
            let same = f.pow(r(1, 1)).unwrap();
            for (x, y) in same.coeffs().iter().zip(f.coeffs()) {
                prop_assert!((x - y).abs() <= 1e-14 * (1.0 + y.abs()));
            }
            let z = f.pow(r(0, 1)).unwrap();
            prop_assert_eq!(z.coeff(0), 1.0);
            prop_assert!(z.coeffs()[1..].iter().all(|&x| x == 0.0));
        }

        #[test]
        fn power_round_trip(c in unit_series(6)) {
            let f = k(&c);
            for beta in [r(-2, 1), r(-1, 2), r(1, 2), r(3, 1)] {
                let back = f.pow(beta).unwrap().pow(beta.recip()).unwrap();
                prop_assert!(close(back.coeffs(), f.coeffs(), 1e-12),
                    "beta {beta}: {:?} vs {:?}", back.coeffs(), f.coeffs());
            }
        }

        #[test]
        fn powers_multiply(c in unit_series(6), b in -6i64..6, g in -6i64..6) {
            let f = k(&c);
            let (b, g) = (r(b, 3), r(g, 2));
            let lhs = f.pow(b).unwrap().mul(&f.pow(g).unwrap()).unwrap();
            let rhs = f.pow(b + g).unwrap();
            prop_assert!(close(lhs.coeffs(), rhs.coeffs(), 1e-12));
        }

        #[test]
        fn recurrence_matches_closed_form(c in unit_series(5), b in -3.0f64..3.0) {
            let f: [f64; 6] = c.clone().try_into().unwrap();
            let want = closed_form(&f, b);
            let got = k(&c).powf(b).unwrap();
            prop_assert!(close(got.coeffs(), &want, 1e-12), "{:?} vs {:?}", got.coeffs(), want);
        }
    }
}
