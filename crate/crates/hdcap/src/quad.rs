//! Numerical integration: adaptive Gauss–Kronrod panels and fixed
//! Gauss–Legendre rules.
//!
//! The adaptive integrator drives the decision-sector integrals of the
//! phase density and the detection-probability integrals; the fixed
//! Legendre rules drive expectation over fading in quantile space.

#[cfg(not(feature = "std"))]
use crate::math::FloatExt;
use crate::{Error, Result};
use alloc::vec::Vec;

/// 15-point Kronrod abscissae on [0, 1] side of the symmetric rule.
const XGK: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.000000000000000,
];

/// 15-point Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];

/// Embedded 7-point Gauss weights (abscissae XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

/// One Gauss–Kronrod 7/15 panel over [a, b]: returns (K15, |K15 − G7|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, (k - g).abs() * h.abs())
}

/// Adaptive integral of `f` over [a, b] to absolute tolerance `abs_tol`.
///
/// Bisects panels until each meets its share of the budget; errors out
/// (rather than silently degrading) if the subdivision depth or panel
/// count is exhausted.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("integrate requires finite endpoints"));
    }
    if a == b {
        return Ok(0.0);
    }
    let mut panels = 0usize;
    adapt(f, a, b, abs_tol.max(1e-300), 0, &mut panels)
}

fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
    panels: &mut usize,
) -> Result<f64> {
    *panels += 1;
    if depth > 60 || *panels > 100_000 {
        return Err(Error::NoConvergence {
            what: "adaptive quadrature subdivision",
            at: 0.5 * (a + b),
        });
    }
    let (k, err) = gk15(f, a, b);
    // The |K15 - G7| estimate bottoms out near eps * |panel value| however
    // far the panel is split; accept at that floor so halved budgets deep
    // in a subdivision cascade cannot starve.
    let floor = 50.0 * f64::EPSILON * k.abs();
    if err <= tol.max(floor) || !err.is_finite() {
        if !k.is_finite() {
            return Err(Error::NoConvergence {
                what: "non-finite integrand",
                at: 0.5 * (a + b),
            });
        }
        return Ok(k);
    }
    let c = 0.5 * (a + b);
    let left = adapt(f, a, c, 0.5 * tol, depth + 1, panels)?;
    let right = adapt(f, c, b, 0.5 * tol, depth + 1, panels)?;
    Ok(left + right)
}

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1],
/// by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut x = alloc::vec![0.0f64; n];
    let mut w = alloc::vec![0.0f64; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre P_n(z) and derivative by upward recurrence.
            let mut p0 = 1.0;
            let mut p1 = z;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}
