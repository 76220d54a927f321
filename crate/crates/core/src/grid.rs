//! Functions sampled on a uniform grid over `[0, 1]`.

use crate::error::{Result, TfError};
use crate::scalar::Scalar;

/// Values at the nodes `t_i = i / (n - 1)`, `i = 0..n`, with `n >= 3` odd so
/// that Simpson panels pair up exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction<T> {
    values: Vec<T>,
}

impl<T: Scalar> GridFunction<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        check_node_count(values.len())?;
        if values.iter().any(|v| !v.is_finite()) {
            return Err(TfError::NonFinite("grid values"));
        }
        Ok(Self { values })
    }

    pub fn from_fn(nodes: usize, f: impl Fn(T) -> T) -> Result<Self> {
        check_node_count(nodes)?;
        let h = T::one() / T::from_usize_lossy(nodes - 1);
        Self::new(
            (0..nodes)
                .map(|i| f(T::from_usize_lossy(i) * h))
                .collect(),
        )
    }

    pub fn constant(nodes: usize, value: T) -> Result<Self> {
        check_node_count(nodes)?;
        Self::new(vec![value; nodes])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn step(&self) -> T {
        T::one() / T::from_usize_lossy(self.values.len() - 1)
    }

    pub fn node(&self, i: usize) -> T {
        T::from_usize_lossy(i) * self.step()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn last(&self) -> T {
        self.values[self.values.len() - 1]
    }

    /// Running integral `int_0^{t_i} g dt`.
    pub fn cumulative_integral(&self) -> Self {
        Self {
            values: cumulative_simpson(&self.values, self.step()),
        }
    }

    /// Cubic Lagrange interpolation through the four nodes surrounding `t`.
    /// Exact at the nodes and for cubic polynomials.
    pub fn eval_at(&self, t: T) -> Result<T> {
        if !(t >= T::zero() && t <= T::one()) {
            return Err(TfError::OutOfDomain {
                what: "t",
                value: t.to_f64().unwrap_or(f64::NAN),
                domain: "[0, 1]",
            });
        }
        let n = self.values.len();
        let pos = t * T::from_usize_lossy(n - 1);
        let i = pos.floor().to_usize().unwrap_or(0).min(n - 1);
        let frac = pos - T::from_usize_lossy(i);
        if frac.is_zero() {
            return Ok(self.values[i]);
        }
        // Stencil start so that [start, start + width) lies inside the grid.
        let width = n.min(4);
        let start = i.saturating_sub(1).min(n - width);
        let x = pos - T::from_usize_lossy(start);
        let y = &self.values[start..start + width];
        let mut acc = T::zero();
        for j in 0..width {
            let mut w = T::one();
            for m in 0..width {
                if m != j {
                    w = w * (x - T::from_usize_lossy(m))
                        / (T::from_usize_lossy(j) - T::from_usize_lossy(m));
                }
            }
            acc = acc + w * y[j];
        }
        Ok(acc)
    }
}

fn check_node_count(n: usize) -> Result<()> {
    if n < 3 || n % 2 == 0 {
        return Err(TfError::InvalidGrid(format!(
            "node count must be odd and at least 3, got {n}"
        )));
    }
    Ok(())
}

/// Cumulative composite Simpson rule on uniformly spaced samples with spacing
/// `h`; `values.len()` must be odd and at least 3.
///
/// Even nodes get the plain composite sum (with Neumaier compensation, the
/// running sums span tens of thousands of panels). Odd node `i` adds the
/// integral over `[t_{i-1}, t_i]` from the cubic through four neighbouring
/// nodes (the last one subtracts `[t_i, t_{i+1}]` from the final node), so
/// every node carries an `O(h^4)` error.
pub fn cumulative_simpson<T: Scalar>(values: &[T], h: T) -> Vec<T> {
    let n = values.len();
    debug_assert!(n >= 3 && n % 2 == 1);
    let mut out = vec![T::zero(); n];
    let third = h / T::lit(3.0);
    let mut sum = T::zero();
    let mut comp = T::zero();
    for i in (2..n).step_by(2) {
        let panel = third * (values[i - 2] + T::lit(4.0) * values[i - 1] + values[i]);
        let t = sum + panel;
        if sum.abs() >= panel.abs() {
            comp = comp + ((sum - t) + panel);
        } else {
            comp = comp + ((panel - t) + sum);
        }
        sum = t;
        out[i] = sum + comp;
    }
    let w = h / T::lit(24.0);
    let (c9, c19, c5) = (T::lit(9.0), T::lit(19.0), T::lit(5.0));
    for i in (1..n).step_by(2) {
        out[i] = if n == 3 {
            h / T::lit(12.0) * (c5 * values[0] + T::lit(8.0) * values[1] - values[2])
        } else if i + 2 < n {
            out[i - 1]
                + w * (c9 * values[i - 1] + c19 * values[i] - c5 * values[i + 1] + values[i + 2])
        } else {
            // Last odd node: step back from the final node over [t_i, t_{i+1}].
            out[i + 1]
                - w * (values[i - 2] - c5 * values[i - 1] + c19 * values[i] + c9 * values[i + 1])
        };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    /// Antiderivative of `2 (1 - t^2)^{3/2}`.
    fn closed_form(t: f64) -> f64 {
        let s = (1.0 - t * t).sqrt();
        2.0 * (t / 8.0 * (5.0 - 2.0 * t * t) * s + 3.0 / 8.0 * t.asin())
    }

    #[test]
    fn rejects_even_or_tiny_grids() {
        assert!(GridFunction::<f64>::new(vec![0.0; 1]).is_err());
        assert!(GridFunction::<f64>::new(vec![0.0; 4]).is_err());
        assert!(GridFunction::<f64>::new(vec![0.0; 6]).is_err());
        assert!(GridFunction::new(vec![0.0, 1.0, f64::NAN, 0.0, 1.0]).is_err());
        assert!(GridFunction::<f64>::new(vec![0.0; 3]).is_ok());
        let three = GridFunction::from_fn(3, |t: f64| t * t).unwrap();
        assert!((three.cumulative_integral().last() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn integral_of_t() {
        let g = GridFunction::from_fn(11, |t: f64| t).unwrap();
        let c = g.cumulative_integral();
        assert!((c.last() - 0.5).abs() < 1e-15);
        for i in 0..11 {
            let t = g.node(i);
            assert!((c.values()[i] - t * t / 2.0).abs() < 1e-14, "{i}: {}", c.values()[i] - t * t / 2.0);
        }
    }

    #[test]
    fn integral_of_zero() {
        let g = GridFunction::constant(101, 0.0f64).unwrap();
        assert!(g.cumulative_integral().values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn quarter_circle_weight() {
        let g = GridFunction::from_fn(20001, |t: f64| 2.0 * (1.0 - t * t).powf(1.5)).unwrap();
        let c = g.cumulative_integral();
        assert!((c.last() - 3.0 * PI / 8.0).abs() < 1e-8);
        assert!((c.eval_at(1.0).unwrap() - 1.178097).abs() < 1e-6);
        for t in [0.1, 0.37, 0.5, 0.9, 0.999] {
            assert!((c.eval_at(t).unwrap() - closed_form(t)).abs() < 1e-8, "t = {t}");
        }
    }

    #[test]
    fn eval_at_nodes_and_polynomials() {
        let g = GridFunction::from_fn(21, |t: f64| t * t).unwrap();
        assert!((g.eval_at(g.node(7)).unwrap() - g.values()[7]).abs() < 1e-15);
        assert_eq!(g.eval_at(0.0).unwrap(), 0.0);
        assert!((g.eval_at(0.5).unwrap() - 0.25).abs() < 1e-10);
        let cubic = GridFunction::from_fn(21, |t: f64| 3.0 * t.powi(3) - t + 0.5).unwrap();
        for t in [0.013f64, 0.26, 0.5111, 0.987, 1.0] {
            let want = 3.0 * t.powi(3) - t + 0.5;
            assert!((cubic.eval_at(t).unwrap() - want).abs() < 1e-12);
        }
        assert!(g.eval_at(-0.01).is_err());
        assert!(g.eval_at(1.5).is_err());
    }

    #[test]
    fn fourth_order_convergence() {
        let f = |t: f64| (3.0 * t).sin() * (-t).exp();
        // int_0^1 sin(3t) e^{-t} dt
        let exact = (3.0 - (3.0f64.sin() + 3.0 * 3.0f64.cos()) * (-1.0f64).exp()) / 10.0;
        let err = |n| {
            let c = GridFunction::from_fn(n, f).unwrap().cumulative_integral();
            (c.last() - exact).abs()
        };
        let (e1, e2) = (err(41), err(81));
        assert!(e1 / e2 >= 8.0, "ratio {}", e1 / e2);
        // Odd nodes converge too.
        let mid = |n: usize| {
            let c = GridFunction::from_fn(n, f).unwrap().cumulative_integral();
            let i = (n - 1) / 4 + 1 - ((n - 1) / 4) % 2; // an odd node near t=1/4
            let t = c.node(i);
            let exact_t = (3.0 - ((3.0 * t).sin() + 3.0 * (3.0 * t).cos()) * (-t).exp()) / 10.0;
            (c.values()[i] - exact_t).abs()
        };
        assert!(mid(41) < 1e-7 && mid(81) < mid(41));
    }

    proptest! {
        #[test]
        fn monotone_for_nonnegative(a in 0.0f64..3.0, b in 0.0f64..5.0, p in 0.5f64..4.0) {
            let g = GridFunction::from_fn(101, |t: f64| a + b * t.powf(p)).unwrap();
            let c = g.cumulative_integral();
            prop_assert!(c.values().windows(2).all(|w| w[1] >= w[0]));
        }
    }
}
