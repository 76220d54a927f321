//! Direct solution of the Thomas-Fermi equation `chi'' = chi^{3/2} / x^{1/2}`
//! with `chi(0) = 1`, `chi'(0) = -a`, by shooting in the initial slope `a`.
//!
//! In `s = sqrt(x)` the system
//!
//! ```text
//! d chi / ds = -2 s psi        d psi / ds = -2 chi^{3/2}        (psi = -chi')
//! ```
//!
//! has no singular coefficient at the origin, so integration starts at
//! `s = 0`. Four moment integrals
//! `I_b(k) = int_0^x x^{k - 1/2} chi^{b + 3/2} dx` (`b, k in {0, 1}`) are
//! carried along as extra state.

use crate::dopri::{next_factor, step, Tolerance};
use crate::error::{Result, TfError};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootConfig {
    pub rtol: f64,
    pub atol: f64,
    /// Horizon beyond which the solution counts as neutral.
    pub x_max: f64,
    pub max_steps: usize,
}

impl Default for ShootConfig {
    fn default() -> Self {
        Self {
            rtol: 1e-12,
            atol: 1e-14,
            x_max: 200.0,
            max_steps: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample<T> {
    pub x: T,
    pub chi: T,
    pub psi: T,
}

impl<T: Scalar> Sample<T> {
    /// Electron density `(chi / x)^{3/2}` in normalized units.
    pub fn density(&self) -> T {
        (self.chi.max(T::zero()) / self.x).powf(T::lit(1.5))
    }

    /// Fraction of the electrons inside `x`: `1 - chi - x psi`.
    pub fn enclosed_fraction(&self) -> T {
        T::one() - self.chi - self.x * self.psi
    }
}

/// Ion solution for one initial slope.
#[derive(Debug, Clone)]
pub struct OracleSolution<T> {
    pub a: T,
    /// Accepted integrator nodes from `x = 0` up to and including `X`.
    pub samples: Vec<Sample<T>>,
    /// Ion radius: first zero of `chi`.
    pub radius: T,
    /// Ionization potential `b = psi(X)`.
    pub ionization: T,
    /// `e:p`-ratio `N = 1 - b X`.
    pub n: T,
    /// Binding energy per proton `B = 3/7 (a - b (1 - N))`.
    pub binding: T,
    /// `[I_0(0), I_0(1), I_1(0), I_1(1)]` at `X`.
    pub moments: [T; 4],
}

impl<T: Scalar> OracleSolution<T> {
    pub fn k(&self) -> T {
        T::lit(2.0) / self.a.powf(T::lit(1.5))
    }
}

/// Leading small-`x` behaviour `(chi, psi)` of the solution with slope `a`.
pub fn small_x_seed<T: Scalar>(a: T, x: T) -> (T, T) {
    let r = x.sqrt();
    let chi = T::one() - a * x + T::lit(4.0 / 3.0) * x * r - T::lit(0.4) * a * x * x * r;
    let psi = a - T::lit(2.0) * r + a * x * r;
    (chi, psi)
}

fn rhs<T: Scalar>(s: T, y: &[T; 6]) -> [T; 6] {
    let two = T::lit(2.0);
    let chi = y[0].max(T::zero());
    let c32 = chi * chi.sqrt();
    let c52 = c32 * chi;
    let s2 = s * s;
    [
        -two * s * y[1],
        -two * c32,
        two * c32,
        two * s2 * c32,
        two * c52,
        two * s2 * c52,
    ]
}

/// Integrates the trajectory for slope `a` up to the first zero of `chi`.
///
/// Fails with [`TfError::NoCrossing`] if `psi` turns non-positive while
/// `chi > 0` (the slope is below critical) or if `x_max` is reached first.
pub fn shoot<T: Scalar>(a: T, cfg: &ShootConfig) -> Result<OracleSolution<T>> {
    if !(a > T::zero()) || !a.is_finite() {
        return Err(TfError::InvalidParameter(format!("initial slope must be positive, got {a}")));
    }
    let tol = Tolerance {
        rtol: T::lit(cfg.rtol),
        atol: T::lit(cfg.atol),
    };
    let no_crossing = || TfError::NoCrossing {
        a: a.to_f64().unwrap_or(f64::NAN),
        x_max: cfg.x_max,
    };
    let s_max = T::lit(cfg.x_max).sqrt();
    let f = |s: T, y: &[T; 6]| rhs(s, y);

    let mut s = T::zero();
    let mut y = [T::one(), a, T::zero(), T::zero(), T::zero(), T::zero()];
    let mut h = T::lit(1e-3);
    let mut samples = vec![Sample {
        x: T::zero(),
        chi: T::one(),
        psi: a,
    }];

    for _ in 0..cfg.max_steps {
        if s >= s_max {
            return Err(no_crossing());
        }
        let h_try = h.min(s_max - s);
        let (y_new, err) = step(&f, s, &y, h_try, &tol);
        if !err.is_finite() {
            return Err(TfError::NonFinite("oracle integration"));
        }
        h = h_try * next_factor(err);
        if err > T::one() {
            continue;
        }
        if y_new[0] <= T::zero() {
            let (h_star, y_star) = locate_zero(&f, s, &y, h_try, &tol);
            let s_star = s + h_star;
            let radius = s_star * s_star;
            let b = y_star[1];
            samples.push(Sample {
                x: radius,
                chi: T::zero(),
                psi: b,
            });
            let n = T::one() - b * radius;
            let binding = T::lit(3.0) / T::lit(7.0) * (a - b * (T::one() - n));
            return Ok(OracleSolution {
                a,
                samples,
                radius,
                ionization: b,
                n,
                binding,
                moments: [y_star[2], y_star[3], y_star[4], y_star[5]],
            });
        }
        if y_new[1] <= T::zero() {
            return Err(no_crossing());
        }
        s = s + h_try;
        y = y_new;
        samples.push(Sample {
            x: s * s,
            chi: y[0],
            psi: y[1],
        });
    }
    Err(TfError::NonConvergence {
        iterations: cfg.max_steps,
        residual: s.to_f64().unwrap_or(f64::NAN),
    })
}

/// Step length `h* in (0, h]` at which a single step from `(s, y)` lands on
/// `chi = 0`, by the Illinois variant of regula falsi.
fn locate_zero<T: Scalar>(
    f: &impl Fn(T, &[T; 6]) -> [T; 6],
    s: T,
    y: &[T; 6],
    h: T,
    tol: &Tolerance<T>,
) -> (T, [T; 6]) {
    let eval = |hh: T| step(f, s, y, hh, tol).0;
    let (mut lo, mut f_lo) = (T::zero(), y[0]);
    let (mut hi, mut f_hi) = (h, eval(h)[0]);
    let mut side = 0i8;
    let mut best = (hi, eval(h));
    for _ in 0..200 {
        let mid = if f_lo == f_hi {
            T::lit(0.5) * (lo + hi)
        } else {
            (lo * f_hi - hi * f_lo) / (f_hi - f_lo)
        };
        let y_mid = eval(mid);
        best = (mid, y_mid);
        let fm = y_mid[0];
        if fm.is_zero() || (hi - lo) <= T::epsilon() * (s + h) {
            break;
        }
        if fm > T::zero() {
            lo = mid;
            f_lo = fm;
            if side == -1 {
                f_hi = f_hi / T::lit(2.0);
            }
            side = -1;
        } else {
            hi = mid;
            f_hi = fm;
            if side == 1 {
                f_lo = f_lo / T::lit(2.0);
            }
            side = 1;
        }
        if fm.abs() <= T::epsilon() * T::lit(4.0) {
            break;
        }
    }
    best
}

/// Slope of the neutral atom, bracketed between a slope whose trajectory
/// never crosses zero and one that does.
pub fn critical_slope<T: Scalar>(tol: T, cfg: &ShootConfig) -> Result<T> {
    if !(tol > T::zero()) {
        return Err(TfError::InvalidParameter("tolerance must be positive".into()));
    }
    let crosses = |a: T| -> Result<bool> {
        match shoot(a, cfg) {
            Ok(_) => Ok(true),
            Err(TfError::NoCrossing { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    };
    let (mut lo, mut hi) = (T::one(), T::lit(2.0));
    if crosses(lo)? || !crosses(hi)? {
        return Err(TfError::BracketFailure(format!(
            "slopes {lo} and {hi} do not bracket the neutral atom"
        )));
    }
    let target = tol * T::lit(1e-2);
    for _ in 0..200 {
        if hi - lo <= target {
            break;
        }
        let mid = T::lit(0.5) * (lo + hi);
        if crosses(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(T::lit(0.5) * (lo + hi))
}

/// Finds the slope whose ion has `e:p`-ratio `target` to within `tol`.
pub fn solve_for_n<T: Scalar>(target: T, tol: T, cfg: &ShootConfig) -> Result<OracleSolution<T>> {
    if !(target > T::zero() && target < T::one()) {
        return Err(TfError::OutOfDomain {
            what: "N",
            value: target.to_f64().unwrap_or(f64::NAN),
            domain: "(0, 1)",
        });
    }
    if !(tol > T::zero()) {
        return Err(TfError::InvalidParameter("tolerance must be positive".into()));
    }
    // N decreases with a; no crossing counts as N = 1.
    let n_of = |a: T| -> Result<(T, Option<OracleSolution<T>>)> {
        match shoot(a, cfg) {
            Ok(sol) => Ok((sol.n, Some(sol))),
            Err(TfError::NoCrossing { .. }) => Ok((T::one(), None)),
            Err(e) => Err(e),
        }
    };
    let mut lo = T::lit(1.5);
    let mut hi = T::lit(2.0);
    loop {
        let (n_hi, _) = n_of(hi)?;
        if n_hi < target {
            break;
        }
        lo = hi;
        hi = hi * T::lit(2.0);
        if hi > T::lit(1e8) {
            return Err(TfError::BracketFailure(format!("no slope gives N = {target}")));
        }
    }
    let mut last = T::infinity();
    for _ in 0..200 {
        let mid = T::lit(0.5) * (lo + hi);
        let (n_mid, sol) = n_of(mid)?;
        last = (n_mid - target).abs();
        if let Some(sol) = sol {
            if last <= tol {
                return Ok(sol);
            }
        }
        if n_mid > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= T::epsilon() * hi {
            break;
        }
    }
    Err(TfError::NonConvergence {
        iterations: 200,
        residual: last.to_f64().unwrap_or(f64::NAN),
    })
}

/// Deviations of the moment integrals from their closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralReport<T> {
    /// `|I_0(0) - (a - b)|`.
    pub i00: T,
    /// `|I_0(1) - N|`.
    pub i01: T,
    /// `|I_1(0) - 5/7 (a - b^2 X)|`.
    pub i10: T,
    /// `|I_1(1) - 5/16 (1 - b^2 X^2)|`.
    pub i11: T,
    /// `|I_1(1) - 5/16 N (2 - N)|`.
    pub i11_ratio: T,
    /// `|3/5 I_1(0) - B|`.
    pub virial: T,
}

impl<T: Scalar> IntegralReport<T> {
    pub fn max(&self) -> T {
        [self.i00, self.i01, self.i10, self.i11, self.i11_ratio, self.virial]
            .into_iter()
            .fold(T::zero(), T::max)
    }
}

pub fn verify_integrals<T: Scalar>(sol: &OracleSolution<T>) -> IntegralReport<T> {
    let [i00, i01, i10, i11] = sol.moments;
    let (a, b, x, n) = (sol.a, sol.ionization, sol.radius, sol.n);
    let five_sevenths = T::lit(5.0) / T::lit(7.0);
    let five_sixteenths = T::lit(5.0) / T::lit(16.0);
    IntegralReport {
        i00: (i00 - (a - b)).abs(),
        i01: (i01 - n).abs(),
        i10: (i10 - five_sevenths * (a - b * b * x)).abs(),
        i11: (i11 - five_sixteenths * (T::one() - b * b * x * x)).abs(),
        i11_ratio: (i11 - five_sixteenths * n * (T::lit(2.0) - n)).abs(),
        virial: (T::lit(0.6) * i10 - sol.binding).abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> ShootConfig {
        ShootConfig::default()
    }

    #[test]
    fn crossing_for_large_slope() {
        let sol = shoot(2.0f64, &cfg()).unwrap();
        assert!(sol.radius > 0.0 && sol.ionization > 0.0);
        assert!(sol.n > 0.0 && sol.n < 1.0);
        assert_eq!(sol.samples.last().unwrap().chi, 0.0);
        assert!(sol.samples.windows(2).all(|w| w[1].chi < w[0].chi));
        assert!(sol.samples.iter().all(|p| p.psi > 0.0));
    }

    #[test]
    fn no_crossing_below_critical() {
        assert!(matches!(shoot(1.5f64, &cfg()), Err(TfError::NoCrossing { .. })));
        assert!(matches!(shoot(1.588071f64, &cfg()), Err(TfError::NoCrossing { .. })));
        assert!(shoot(0.0f64, &cfg()).is_err());
    }

    #[test]
    fn matches_small_x_seed() {
        let a = 2.0f64;
        let sol = shoot(a, &cfg()).unwrap();
        for p in sol.samples.iter().filter(|p| p.x > 0.0 && p.x < 1e-2) {
            let (chi, psi) = small_x_seed(a, p.x);
            assert!((chi - p.chi).abs() < p.x.powi(3) + 1e-14, "x = {}", p.x);
            assert!((psi - p.psi).abs() < 3.0 * p.x * p.x + 1e-14, "x = {}", p.x);
        }
    }

    #[test]
    fn n_decreases_with_slope() {
        let ns: Vec<f64> = [2.0, 3.0, 5.0, 1000.0]
            .iter()
            .map(|&a| shoot(a, &cfg()).unwrap().n)
            .collect();
        assert!(ns.windows(2).all(|w| w[1] < w[0]), "{ns:?}");
        assert!(ns[3] < 0.05);
    }

    #[test]
    fn identities_hold() {
        let sol = shoot(2.5f64, &cfg()).unwrap();
        assert!(verify_integrals(&sol).max() < 1e-9);
    }

    #[test]
    fn enclosed_fraction_reaches_n() {
        let sol = shoot(2.0f64, &cfg()).unwrap();
        let edge = sol.samples.last().unwrap();
        assert!((edge.enclosed_fraction() - sol.n).abs() < 1e-14);
        assert!((sol.moments[1] - sol.n).abs() < 1e-9);
        assert_eq!(edge.density(), 0.0);
    }

    #[test]
    fn tolerance_refinement_is_consistent() {
        let coarse = ShootConfig { rtol: 1e-9, atol: 1e-11, ..cfg() };
        let a = shoot(2.0f64, &coarse).unwrap();
        let b = shoot(2.0f64, &cfg()).unwrap();
        assert!((a.radius - b.radius).abs() < 1e-7);
        assert!((a.n - b.n).abs() < 1e-8);
    }

    #[test]
    fn solve_for_n_hits_target() {
        let sol = solve_for_n(0.5f64, 1e-10, &cfg()).unwrap();
        assert!((sol.n - 0.5).abs() <= 1e-10);
        assert!(solve_for_n(1.0, 1e-8, &cfg()).is_err());
        assert!(solve_for_n(0.5, 0.0, &cfg()).is_err());
    }
}
