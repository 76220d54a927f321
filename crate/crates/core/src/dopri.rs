//! Dormand-Prince 5(4) steps with error control.

use crate::scalar::Scalar;

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;

const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// Fifth-order minus embedded fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

pub(crate) struct Tolerance<T> {
    pub rtol: T,
    pub atol: T,
}

fn combine<T: Scalar, const D: usize>(y: &[T; D], h: T, terms: &[(f64, &[T; D])]) -> [T; D] {
    let mut out = *y;
    for (w, k) in terms {
        let w = T::lit(*w) * h;
        for i in 0..D {
            out[i] = out[i] + w * k[i];
        }
    }
    out
}

/// One step of size `h` from `(s, y)`. Returns the fifth-order solution and
/// the scaled RMS error estimate (accept when `<= 1`).
pub(crate) fn step<T: Scalar, const D: usize>(
    f: &impl Fn(T, &[T; D]) -> [T; D],
    s: T,
    y: &[T; D],
    h: T,
    tol: &Tolerance<T>,
) -> ([T; D], T) {
    let k1 = f(s, y);
    let k2 = f(s + T::lit(C2) * h, &combine(y, h, &[(A21, &k1)]));
    let k3 = f(s + T::lit(C3) * h, &combine(y, h, &[(A31, &k1), (A32, &k2)]));
    let k4 = f(
        s + T::lit(C4) * h,
        &combine(y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
    );
    let k5 = f(
        s + T::lit(C5) * h,
        &combine(y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
    );
    let k6 = f(
        s + h,
        &combine(
            y,
            h,
            &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        ),
    );
    let y5 = combine(
        y,
        h,
        &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
    );
    let k7 = f(s + h, &y5);
    let mut sum = T::zero();
    for i in 0..D {
        let e = h
            * (T::lit(E1) * k1[i]
                + T::lit(E3) * k3[i]
                + T::lit(E4) * k4[i]
                + T::lit(E5) * k5[i]
                + T::lit(E6) * k6[i]
                + T::lit(E7) * k7[i]);
        let scale = tol.atol + tol.rtol * y[i].abs().max(y5[i].abs());
        let r = e / scale;
        sum = sum + r * r;
    }
    (y5, (sum / T::from_usize_lossy(D)).sqrt())
}

/// Step size factor from an error estimate, clamped to `[0.2, 5]`.
pub(crate) fn next_factor<T: Scalar>(err: T) -> T {
    if err.is_zero() {
        return T::lit(5.0);
    }
    let f = T::lit(0.9) * err.powf(T::lit(-0.2));
    f.max(T::lit(0.2)).min(T::lit(5.0))
}
