//! Neutral-atom limit of the fundamental function.
//!
//! As `N -> 1` the rescaled screening problem on the semi-infinite line reads
//!
//! ```text
//! xi(t)  = 1 - (1/C) int_0^t eta^{-1/2} dt'
//! eta(t) = 1 + 2 int_0^t t'^{3/2} xi^{-1/2} dt'
//! C      = int_0^inf eta^{-1/2} dt
//! ```
//!
//! and `c(1) = C^{-5/3}`. The system is iterated from `xi = 1`.
//!
//! The grid is `t = s^2` with `s` uniform on `[0, 1]` (resolving the
//! `t^{3/2}` start) followed by a logarithmic grid up to `t_max`. Beyond
//! `t_max` the solution follows `eta ~ A t^p` with `p -> 8/3`; the tail of
//! `C` is integrated analytically with `A`, `p` fitted over the last decade.

use crate::error::{Result, TfError};
use crate::grid::cumulative_simpson;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitConfig {
    /// Stop when successive values of `C` differ by less than this.
    pub tol: f64,
    pub t_max: f64,
    /// Nodes on `[0, 1]`; odd.
    pub inner_nodes: usize,
    /// Nodes per decade of the logarithmic part.
    pub per_decade: usize,
    pub max_iterations: usize,
}

impl Default for LimitConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            t_max: 1e6,
            inner_nodes: 2001,
            per_decade: 400,
            max_iterations: 500,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LimitState<T> {
    /// `C = int_0^inf eta^{-1/2}`.
    pub big_c: T,
    /// `c(1) = C^{-5/3}`.
    pub c: T,
    pub t: Vec<T>,
    pub xi: Vec<T>,
    pub eta: Vec<T>,
    pub iterations: usize,
    /// Last change of `C`.
    pub residual: T,
    /// `C` after every iteration.
    pub history: Vec<T>,
    /// Fitted tail exponent of `eta`.
    pub tail_exponent: T,
    /// Whether the update had to be damped.
    pub damped: bool,
}

/// Two-piece grid; integrals are taken in the grid parameter with the
/// Jacobian folded into the integrand.
struct LimitGrid<T> {
    inner_t: Vec<T>,
    inner_jac: Vec<T>,
    inner_h: T,
    outer_t: Vec<T>,
    outer_h: T,
}

impl<T: Scalar> LimitGrid<T> {
    fn new(cfg: &LimitConfig) -> Result<Self> {
        if cfg.inner_nodes < 3 || cfg.inner_nodes % 2 == 0 {
            return Err(TfError::InvalidGrid(format!(
                "inner node count must be odd and at least 3, got {}",
                cfg.inner_nodes
            )));
        }
        if !(cfg.t_max > 10.0) || !cfg.t_max.is_finite() {
            return Err(TfError::InvalidParameter(format!(
                "t_max must exceed 10, got {}",
                cfg.t_max
            )));
        }
        if cfg.per_decade < 2 {
            return Err(TfError::InvalidParameter("need at least 2 nodes per decade".into()));
        }
        let n1 = cfg.inner_nodes;
        let inner_h = T::one() / T::from_usize_lossy(n1 - 1);
        let s: Vec<T> = (0..n1).map(|i| T::from_usize_lossy(i) * inner_h).collect();
        let inner_t = s.iter().map(|&v| v * v).collect();
        let inner_jac = s.iter().map(|&v| T::lit(2.0) * v).collect();

        let decades = cfg.t_max.log10();
        let mut nd = (decades * cfg.per_decade as f64).round() as usize;
        nd += nd % 2;
        let log_max = T::lit(cfg.t_max.ln());
        let outer_h = log_max / T::from_usize_lossy(nd);
        let outer_t = (0..=nd)
            .map(|i| (T::from_usize_lossy(i) * outer_h).exp())
            .collect();
        Ok(Self {
            inner_t,
            inner_jac,
            inner_h,
            outer_t,
            outer_h,
        })
    }

    /// Running integral of `f` sampled on both pieces.
    fn cumulative(&self, inner: &[T], outer: &[T]) -> (Vec<T>, Vec<T>) {
        let a: Vec<T> = inner.iter().zip(&self.inner_jac).map(|(&f, &j)| f * j).collect();
        let a = cumulative_simpson(&a, self.inner_h);
        let offset = a[a.len() - 1];
        let b: Vec<T> = outer.iter().zip(&self.outer_t).map(|(&f, &t)| f * t).collect();
        let b = cumulative_simpson(&b, self.outer_h)
            .into_iter()
            .map(|v| v + offset)
            .collect();
        (a, b)
    }
}

pub fn solve_limit<T: Scalar>(cfg: LimitConfig) -> Result<LimitState<T>> {
    if !(cfg.tol > 0.0) {
        return Err(TfError::InvalidParameter(format!("tol must be positive, got {}", cfg.tol)));
    }
    let grid = LimitGrid::<T>::new(&cfg)?;
    let one = T::one();
    let two = T::lit(2.0);
    let tol = T::lit(cfg.tol);
    let n1 = grid.inner_t.len();
    let n2 = grid.outer_t.len();
    let fit_from = n2 - 1 - cfg.per_decade.min(n2 - 1);

    let mut xi1 = vec![one; n1];
    let mut xi2 = vec![one; n2];
    let mut big_c: Option<T> = None;
    let mut history = Vec::new();
    let mut lambda = one;
    let mut damped = false;
    let mut last_step: Option<T> = None;

    for iteration in 1..=cfg.max_iterations {
        let f1: Vec<T> = grid
            .inner_t
            .iter()
            .zip(&xi1)
            .map(|(&t, &x)| two * t * t.sqrt() / x.sqrt())
            .collect();
        let f2: Vec<T> = grid
            .outer_t
            .iter()
            .zip(&xi2)
            .map(|(&t, &x)| two * t * t.sqrt() / x.sqrt())
            .collect();
        let (e1, e2) = grid.cumulative(&f1, &f2);
        let eta1: Vec<T> = e1.into_iter().map(|v| one + v).collect();
        let eta2: Vec<T> = e2.into_iter().map(|v| one + v).collect();

        let g1: Vec<T> = eta1.iter().map(|&e| one / e.sqrt()).collect();
        let g2: Vec<T> = eta2.iter().map(|&e| one / e.sqrt()).collect();
        let (i1, i2) = grid.cumulative(&g1, &g2);

        let t_end = grid.outer_t[n2 - 1];
        let t_fit = grid.outer_t[fit_from];
        let p = (eta2[n2 - 1] / eta2[fit_from]).ln() / (t_end / t_fit).ln();
        let half_p = p / two;
        if !(half_p > one) {
            return Err(TfError::NonConvergence {
                iterations: iteration,
                residual: p.to_f64().unwrap_or(f64::NAN),
            });
        }
        let amp = eta2[n2 - 1] / t_end.powf(p);
        let tail = t_end.powf(one - half_p) / (amp.sqrt() * (half_p - one));
        let raw = i2[n2 - 1] + tail;

        let new_c = match big_c {
            None => raw,
            Some(old) => {
                let step = raw - old;
                if let Some(prev) = last_step {
                    if step * prev < T::zero() && lambda == one {
                        lambda = T::lit(0.5);
                        damped = true;
                    }
                }
                last_step = Some(step);
                old + lambda * step
            }
        };
        if !new_c.is_finite() || new_c <= T::zero() {
            return Err(TfError::NonFinite("limit solver"));
        }

        let mut next1: Vec<T> = i1.iter().map(|&v| (new_c - v) / new_c).collect();
        let mut next2: Vec<T> = i2.iter().map(|&v| (new_c - v) / new_c).collect();
        if next1.iter().chain(&next2).any(|&x| x <= T::zero()) {
            // Keep xi positive by blending with the previous iterate.
            damped = true;
            for (n, o) in next1.iter_mut().zip(&xi1).chain(next2.iter_mut().zip(&xi2)) {
                *n = (*n + *o) / two;
                if *n <= T::zero() {
                    *n = *o / two;
                }
            }
        }
        xi1 = next1;
        xi2 = next2;
        history.push(new_c);

        let residual = big_c.map(|old| (new_c - old).abs());
        big_c = Some(new_c);
        if let Some(r) = residual {
            if r < tol {
                let mut t = grid.inner_t.clone();
                t.extend_from_slice(&grid.outer_t[1..]);
                let mut xi = xi1;
                xi.extend_from_slice(&xi2[1..]);
                let mut eta = eta1;
                eta.extend_from_slice(&eta2[1..]);
                return Ok(LimitState {
                    big_c: new_c,
                    c: new_c.powf(-T::lit(5.0) / T::lit(3.0)),
                    t,
                    xi,
                    eta,
                    iterations: iteration,
                    residual: r,
                    history,
                    tail_exponent: p,
                    damped,
                });
            }
        }
    }
    let residual = match history.len() {
        n if n >= 2 => (history[n - 1] - history[n - 2]).abs(),
        _ => T::infinity(),
    };
    Err(TfError::NonConvergence {
        iterations: cfg.max_iterations,
        residual: residual.to_f64().unwrap_or(f64::NAN),
    })
}
