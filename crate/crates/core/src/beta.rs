//! Non-regularized incomplete Beta function
//! `B(x; p, q) = int_0^x t^(p-1) (1-t)^(q-1) dt`.

use crate::error::{Result, TfError};
use crate::quadrature::{integrate, QuadConfig};
use crate::scalar::Scalar;

/// `B(x; p, q)` for `x in [0, 1]`, `p, q > 0`.
///
/// The integral is split at `min(x, 1/2)`. An endpoint singularity
/// `t^(p-1)` with `p < 1` is removed by `u = t^p`, and likewise
/// `(1-t)^(q-1)` by `s = (1-t)^q`; the remaining integrands are bounded.
pub fn incomplete_beta<T: Scalar>(x: T, p: T, q: T) -> Result<T> {
    if !(p > T::zero()) || !p.is_finite() {
        return Err(TfError::OutOfDomain {
            what: "p",
            value: p.to_f64().unwrap_or(f64::NAN),
            domain: "(0, inf)",
        });
    }
    if !(q > T::zero()) || !q.is_finite() {
        return Err(TfError::OutOfDomain {
            what: "q",
            value: q.to_f64().unwrap_or(f64::NAN),
            domain: "(0, inf)",
        });
    }
    if !(x >= T::zero() && x <= T::one()) {
        return Err(TfError::OutOfDomain {
            what: "x",
            value: x.to_f64().unwrap_or(f64::NAN),
            domain: "[0, 1]",
        });
    }
    if x.is_zero() {
        return Ok(T::zero());
    }
    let one = T::one();
    let half = T::lit(0.5);
    // Purely relative accuracy: B(x; p, q) ~ x^p / p can be tiny.
    let cfg = QuadConfig {
        abs_tol: 0.0,
        ..QuadConfig::default()
    };

    let x0 = x.min(half);
    let left = if p < one {
        let inv = one / p;
        let upper = x0.powf(p);
        integrate(|u: T| (one - u.powf(inv)).powf(q - one), T::zero(), upper, cfg)? / p
    } else {
        integrate(
            |t: T| t.powf(p - one) * (one - t).powf(q - one),
            T::zero(),
            x0,
            cfg,
        )?
    };
    if x <= half {
        return Ok(left);
    }

    let right = if q < one {
        let inv = one / q;
        let lower = (one - x).powf(q);
        let upper = half.powf(q);
        integrate(|s: T| (one - s.powf(inv)).powf(p - one), lower, upper, cfg)? / q
    } else {
        integrate(
            |t: T| t.powf(p - one) * (one - t).powf(q - one),
            half,
            x,
            cfg,
        )?
    };
    Ok(left + right)
}

/// Complete Beta function `B(p, q) = B(1; p, q)`.
pub fn beta<T: Scalar>(p: T, q: T) -> Result<T> {
    incomplete_beta(T::one(), p, q)
}
