//! Elimination of `K` in favour of the `e:p`-ratio `N`.
//!
//! A quantity of the form `(K/2)^alpha * sum_m f_m K^m` is rewritten as
//! `sum_n ft_n N^(alpha + n)`. With `N = N_1 K (1 + h_1 K + h_2 K^2 + ...)`,
//! `h_k = N_{k+1} / N_1`, the coefficients follow from repeatedly subtracting
//! the leading term:
//!
//! ```text
//! G_{0,k} = f_k
//! G_{n,k} = G_{n-1,k+1} - G_{n-1,0} * [h^(alpha+n-1)]_{k+1}
//! g_n     = G_{n,0}
//! ft_n    = g_n / (2^alpha N_1^(alpha+n))
//! ```

use num_rational::Rational64;

use crate::error::{Result, TfError};
use crate::expansion::KSeries;
use crate::power_series::{TruncatedSeries, Variable};
use crate::scalar::Scalar;

/// `(1, h_1, h_2, ...)` with `h_k = N_{k+1} / N_1`; one order shorter than
/// the `N`-series.
pub fn h_coefficients<T: Scalar>(n_series: &TruncatedSeries<T>) -> Result<TruncatedSeries<T>> {
    check_n_series(n_series)?;
    let c = n_series.coeffs();
    let n1 = c[1];
    TruncatedSeries::taylor(Variable::K, c[1..].iter().map(|&v| v / n1).collect())
}

fn check_n_series<T: Scalar>(n_series: &TruncatedSeries<T>) -> Result<()> {
    if n_series.variable() != Variable::K {
        return Err(TfError::VariableMismatch {
            left: n_series.variable(),
            right: Variable::K,
        });
    }
    if n_series.order() < 1 {
        return Err(TfError::OrderOutOfRange {
            requested: 1,
            available: 0,
        });
    }
    if !n_series.coeff(0).is_zero() {
        return Err(TfError::InvalidParameter(
            "the N-series must vanish at K = 0".into(),
        ));
    }
    if n_series.coeff(1).is_zero() {
        return Err(TfError::InvalidParameter(
            "the N-series has a vanishing linear coefficient".into(),
        ));
    }
    Ok(())
}

/// The triangular scheme `G[n][k]` for one seed vector.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformTableau<T> {
    pub alpha: Rational64,
    pub rows: Vec<Vec<T>>,
}

impl<T: Scalar> TransformTableau<T> {
    /// Runs the scheme on `f` (coefficients of a `K`-series, any leading
    /// entry) against the `h`-series. The number of rows is
    /// `min(f.len(), h.order() + 1)`.
    pub fn build(f: &[T], alpha: Rational64, h: &TruncatedSeries<T>) -> Result<Self> {
        if f.is_empty() {
            return Err(TfError::InvalidParameter("empty seed".into()));
        }
        let len = f.len().min(h.order() + 1);
        let mut rows = Vec::with_capacity(len);
        rows.push(f[..len].to_vec());
        for n in 1..len {
            let hp = h.pow(alpha + Rational64::from_integer(n as i64 - 1))?;
            let prev: &Vec<T> = &rows[n - 1];
            let g0 = prev[0];
            let next = (0..prev.len() - 1)
                .map(|k| prev[k + 1] - g0 * hp.coeff(k + 1))
                .collect();
            rows.push(next);
        }
        Ok(Self { alpha, rows })
    }

    pub fn g(&self) -> Vec<T> {
        self.rows.iter().map(|r| r[0]).collect()
    }
}

/// Converts the raw scheme output `g_n` into `N`-series coefficients.
fn scale_to_n<T: Scalar>(g: &[T], alpha: Rational64, n1: T) -> Vec<T> {
    let a = T::from_ratio(alpha);
    let lead = T::lit(2.0).powf(a) * n1.powf(a);
    let mut p = lead;
    g.iter()
        .map(|&gn| {
            let v = gn / p;
            p = p * n1;
            v
        })
        .collect()
}

/// Rewrites `(K/2)^alpha * f(K)` as an `N`-series with leading exponent
/// `alpha`.
///
/// Vanishing leading coefficients of `f` are absorbed into the exponent:
/// each stripped `K` becomes a factor `(K/2)` and doubles the remaining
/// coefficients, so the returned series has exponent `alpha + stripped`.
pub fn eliminate<T: Scalar>(
    f: &TruncatedSeries<T>,
    alpha: Rational64,
    n_series: &TruncatedSeries<T>,
) -> Result<TruncatedSeries<T>> {
    if f.variable() != Variable::K {
        return Err(TfError::VariableMismatch {
            left: f.variable(),
            right: Variable::K,
        });
    }
    let h = h_coefficients(n_series)?;
    let (stripped, skip) = f.strip_leading_zeros();
    if stripped.coeff(0).is_zero() {
        return Err(TfError::ZeroConstantTerm);
    }
    let factor = T::lit(2.0).powi(skip as i32);
    let seed: Vec<T> = stripped.coeffs().iter().map(|&c| c * factor).collect();
    let alpha = alpha + Rational64::from_integer(skip as i64);
    let tableau = TransformTableau::build(&seed, alpha, &h)?;
    let coeffs = scale_to_n(&tableau.g(), alpha, n_series.coeff(1));
    TruncatedSeries::new(Variable::N, alpha, coeffs)
}

/// `T[m][n]`: the `g_n` produced by the unit seed `f = e_m`. Maps any seed
/// vector linearly onto its `g` vector.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformMatrix<T> {
    pub alpha: Rational64,
    entries: Vec<Vec<T>>,
    n1: T,
}

impl<T: Scalar> TransformMatrix<T> {
    /// Builds the `(order + 1) x (order + 1)` matrix; `order` may not exceed
    /// `n_series.order() - 1`.
    pub fn new(alpha: Rational64, n_series: &TruncatedSeries<T>, order: usize) -> Result<Self> {
        let h = h_coefficients(n_series)?;
        if order > h.order() {
            return Err(TfError::OrderOutOfRange {
                requested: order,
                available: h.order(),
            });
        }
        let entries = (0..=order)
            .map(|m| {
                let mut seed = vec![T::zero(); order + 1];
                seed[m] = T::one();
                TransformTableau::build(&seed, alpha, &h).map(|t| t.g())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            alpha,
            entries,
            n1: n_series.coeff(1),
        })
    }

    pub fn order(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entry(&self, m: usize, n: usize) -> T {
        self.entries[m][n]
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.entries
    }

    /// `g_n = sum_m f_m T[m][n]`.
    pub fn apply_raw(&self, f: &[T]) -> Vec<T> {
        let dim = self.entries.len();
        (0..dim)
            .map(|n| {
                (0..dim.min(f.len()))
                    .map(|m| f[m] * self.entries[m][n])
                    .sum()
            })
            .collect()
    }

    /// `N`-series of `(K/2)^alpha f(K)`; `f` must have a nonzero constant term.
    pub fn apply(&self, f: &[T]) -> Result<TruncatedSeries<T>> {
        let g = self.apply_raw(f);
        TruncatedSeries::new(Variable::N, self.alpha, scale_to_n(&g, self.alpha, self.n1))
    }
}

/// `N`-series of the ion quantities: `c`, `X^{-1}`, `b`, `B`, `a`.
#[derive(Debug, Clone)]
pub struct NSeries<T> {
    pub c: TruncatedSeries<T>,
    pub x_inv: TruncatedSeries<T>,
    pub b: TruncatedSeries<T>,
    pub binding: TruncatedSeries<T>,
    pub a: TruncatedSeries<T>,
}

impl<T: Scalar> NSeries<T> {
    pub const LABELS: [&'static str; 5] = ["c", "X^-1", "b", "B", "a"];

    /// Uses `a = (K/2)^{-2/3}`, so every quantity `q = a * (q/a)`.
    pub fn from_k_series(k: &KSeries<T>) -> Result<Self> {
        let alpha = Rational64::new(-2, 3);
        let n = &k.n;
        let unit = TruncatedSeries::constant(Variable::K, T::one(), k.order());
        Ok(Self {
            c: eliminate(&k.c_over_a, alpha, n)?,
            x_inv: eliminate(&k.ax_inv, alpha, n)?,
            b: eliminate(&k.ba, alpha, n)?,
            binding: eliminate(&k.binding_over_a, alpha, n)?,
            a: eliminate(&unit, alpha, n)?,
        })
    }

    pub fn columns(&self) -> [(&'static str, &TruncatedSeries<T>); 5] {
        [
            ("c", &self.c),
            ("X^-1", &self.x_inv),
            ("b", &self.b),
            ("B", &self.binding),
            ("a", &self.a),
        ]
    }

    pub fn order(&self) -> usize {
        self.columns()
            .iter()
            .map(|(_, s)| s.order())
            .min()
            .unwrap_or(0)
    }

    pub fn check_recursions(&self) -> RecursionReport<T> {
        check_recursions(&self.x_inv, &self.b, &self.binding, &self.a)
    }
}

/// Largest deviations from the recursions linking the `N`-series columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecursionReport<T> {
    /// `b_n - (X^-1_n - X^-1_{n-1})`.
    pub b_from_x_inv: T,
    /// `B_n - b_n / (n + 1/3)`.
    pub binding_from_b: T,
    /// `a_n - (7/3 B_{n-1} + b_n - b_{n-1})`.
    pub a_from_binding: T,
}

impl<T: Scalar> RecursionReport<T> {
    pub fn max(&self) -> T {
        self.b_from_x_inv
            .max(self.binding_from_b)
            .max(self.a_from_binding)
    }
}

pub fn check_recursions<T: Scalar>(
    x_inv: &TruncatedSeries<T>,
    b: &TruncatedSeries<T>,
    binding: &TruncatedSeries<T>,
    a: &TruncatedSeries<T>,
) -> RecursionReport<T> {
    let order = x_inv.order().min(b.order()).min(binding.order()).min(a.order());
    let prev = |s: &TruncatedSeries<T>, n: usize| if n == 0 { T::zero() } else { s.coeff(n - 1) };
    let third = T::one() / T::lit(3.0);
    let seven_thirds = T::lit(7.0) / T::lit(3.0);
    let mut report = RecursionReport {
        b_from_x_inv: T::zero(),
        binding_from_b: T::zero(),
        a_from_binding: T::zero(),
    };
    for n in 0..=order {
        let d1 = (b.coeff(n) - (x_inv.coeff(n) - prev(x_inv, n))).abs();
        let d2 = (binding.coeff(n) - b.coeff(n) / (T::from_usize_lossy(n) + third)).abs();
        let d3 = (a.coeff(n) - (seven_thirds * prev(binding, n) + b.coeff(n) - prev(b, n))).abs();
        report.b_from_x_inv = report.b_from_x_inv.max(d1);
        report.binding_from_b = report.binding_from_b.max(d2);
        report.a_from_binding = report.a_from_binding.max(d3);
    }
    report
}
