//! Scalar special functions underlying every channel computation.
//!
//! * [`gaussian_q`]: upper tail of the standard normal, Q(x) = erfc(x/√2)/2.
//! * [`log_bessel_i0`] / [`bessel_i0_inv_log`]: ln I0 and its inverse, kept
//!   in the log domain because detection thresholds involve I0 of arguments
//!   that grow like log(1/SNR) and would overflow in linear space.
//! * [`marcum_q1`]: first-order Marcum Q, the CCDF of a Rice envelope.
//! * [`binary_entropy`]: h(p) in nats.
//!
//! Everything here is deterministic, allocation-free, and accurate to the
//! tolerances asserted in the test suite (Q: 1e−12 relative for |x| ≤ 8;
//! ln I0: 1e−10 relative in exp; Marcum: 1e−10 absolute for a, b ≤ 50).

#[cfg(not(feature = "std"))]
use crate::math::FloatExt;
use crate::{Error, Result};

const SQRT_2: f64 = core::f64::consts::SQRT_2;
const LN_2PI: f64 = 1.8378770664093453;
/// 1/√π.
const FRAC_1_SQRT_PI: f64 = 0.5641895835477563;

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
///
/// Evaluated through erfc: a positive-term series below the split point
/// and a continued fraction above it, so the relative error stays near
/// machine precision over the whole tail (no `1 - cdf` cancellation).
pub fn gaussian_q(x: f64) -> f64 {
    if !x.is_finite() {
        return if x.is_nan() {
            f64::NAN
        } else if x > 0.0 {
            0.0
        } else {
            1.0
        };
    }
    0.5 * erfc(x / SQRT_2)
}

/// Series/continued-fraction split for [`erfc`].
const ERFC_SPLIT: f64 = 2.0;

/// Complementary error function, |relative error| ≲ 1e−14 everywhere.
fn erfc(t: f64) -> f64 {
    if t < 0.0 {
        return 2.0 - erfc(-t);
    }
    if t == 0.0 {
        return 1.0;
    }
    if t < ERFC_SPLIT {
        1.0 - erf_series(t)
    } else {
        erfc_cf(t)
    }
}

/// erf by the positive-term expansion erf(t) = (2/√π) t e^{−t²}
/// Σ_k (2t²)^k / (1·3···(2k+1)); no alternating cancellation.
fn erf_series(t: f64) -> f64 {
    let tt2 = 2.0 * t * t;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0u32;
    while k < 200 {
        k += 1;
        term *= tt2 / (2 * k + 1) as f64;
        sum += term;
        if term < sum * 1e-18 {
            break;
        }
    }
    2.0 * FRAC_1_SQRT_PI * t * (-t * t).exp() * sum
}

/// erfc by the Legendre continued fraction
/// erfc(t) = e^{−t²}/√π · 1/(t + (1/2)/(t + (2/2)/(t + ...))),
/// evaluated with the modified Lentz algorithm. Converges fast for t ≥ 2.
fn erfc_cf(t: f64) -> f64 {
    let tiny = 1e-300;
    let mut f = t;
    let mut c = f;
    let mut d = 0.0;
    for n in 1..400 {
        let a = n as f64 / 2.0;
        d = t + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = t + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    FRAC_1_SQRT_PI * (-t * t).exp() / f
}

/// Power-series/asymptotic split for [`log_bessel_i0`]. Above this point
/// the 8-term asymptotic correction is accurate to ~1e−13 relative; below
/// it the positive-term power series is summed directly (its value stays
/// under e^50, far from overflow).
pub const I0_ASYMPTOTIC_CUTOFF: f64 = 50.0;

/// ln I0(x) for x ≥ 0, relative error of exp(result) ≤ 1e−10 (tests pin
/// ~1e−13 in practice).
pub fn log_bessel_i0(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    let x = x.abs();
    if x < I0_ASYMPTOTIC_CUTOFF {
        // I0(x) = sum_k (x^2/4)^k / (k!)^2, all terms positive.
        let q = x * x / 4.0;
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 0u32;
        while k < 400 {
            k += 1;
            term *= q / ((k as f64) * (k as f64));
            sum += term;
            if term < sum * 1e-18 {
                break;
            }
        }
        sum.ln()
    } else {
        // I0(x) ~ e^x/sqrt(2 pi x) [1 + sum_k a_k x^{-k}],
        // a_k = ((2k-1)!!)^2 / (k! 8^k), built by recurrence.
        let mut s = 0.0;
        let mut t = 1.0;
        for k in 0..8u32 {
            let num = (2 * k + 1) as f64;
            t *= num * num / (8.0 * (k + 1) as f64 * x);
            s += t;
        }
        x - 0.5 * (LN_2PI + x.ln()) + s.ln_1p()
    }
}

/// Inverse of [`log_bessel_i0`]: the x ≥ 0 with ln I0(x) = `log_y`.
///
/// Monotone bisection; absolute tolerance 1e−12 in the log domain.
pub fn bessel_i0_inv_log(log_y: f64) -> Result<f64> {
    if !(log_y >= 0.0) {
        return Err(Error::Domain("bessel_i0_inv_log requires log_y >= 0"));
    }
    if log_y == 0.0 {
        return Ok(0.0);
    }
    let mut lo = 0.0f64;
    // ln I0(x) < x, so x = log_y underestimates the root.
    let mut hi = log_y + 0.5 * (LN_2PI + (log_y + 4.0).ln()) + 4.0;
    let mut n = 0;
    while log_bessel_i0(hi) < log_y {
        hi *= 2.0;
        n += 1;
        if n > 100 {
            return Err(Error::NoConvergence {
                what: "bessel_i0_inv_log bracket",
                at: log_y,
            });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let v = log_bessel_i0(mid);
        if (v - log_y).abs() <= 1e-13 * (1.0 + log_y) {
            return Ok(mid);
        }
        if v < log_y {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * (1.0 + hi) {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// First-order Marcum Q: Q1(a, b) = P(χ'²₂(a²) > b²), the probability that
/// a Rice(a, 1) envelope exceeds b.
///
/// Evaluated as Σ_k Poisson(k; a²/2) · P(Erlang(k+1) > b²/2) with the
/// summation windowed around the Poisson mode, so terms are representable
/// for arbitrarily large arguments and the result carries ~1e−13 absolute
/// error uniformly (no large-argument approximation branch is needed).
pub fn marcum_q1(a: f64, b: f64) -> f64 {
    debug_assert!(a >= 0.0 && b >= 0.0);
    if b <= 0.0 {
        return 1.0;
    }
    if b.is_infinite() {
        return 0.0;
    }
    let u = 0.5 * a * a; // Poisson mean
    let y = 0.5 * b * b; // Erlang threshold
    if u == 0.0 {
        return (-y).exp();
    }

    let k0 = u.floor() as i64;
    let w = (9.0 * u.sqrt() + 30.0).ceil() as i64;
    let k_lo = (k0 - w).max(0);
    let k_hi = k0 + w;

    // Single ascending pass k = k_lo..k_hi. The Poisson weight at k_lo is
    // anchored in the log domain (a recurrence from k = 0 would start at
    // e^{-u} = 0 for large u); at the window edge it is ~e^{-40} times the
    // modal weight, representable for every u. The growing recurrence
    // toward the mode is numerically stable.
    let mut p = (-u + k_lo as f64 * u.ln() - ln_factorial(k_lo as u64)).exp();
    // Erlang survival g(k) = e^{-y} sum_{j<=k} y^j/j!, advanced by the
    // term e(k) = e^{-y} y^k/k!.
    let mut g = erlang_survival(k_lo, y);
    let mut e = (-y + k_lo as f64 * y.ln() - ln_factorial(k_lo as u64)).exp();

    let mut q = 0.0;
    for k in k_lo..=k_hi {
        if k > k_lo {
            p *= u / k as f64;
            e *= y / k as f64;
            g += e;
        }
        q += p * g;
    }
    q.clamp(0.0, 1.0)
}

/// e^{-y} Σ_{j=0}^{k} y^j/j!, summed outward from the largest term.
fn erlang_survival(k: i64, y: f64) -> f64 {
    if y == 0.0 {
        return 1.0;
    }
    let j0 = (y.floor() as i64).clamp(0, k);
    let t0 = (-y + j0 as f64 * y.ln() - ln_factorial(j0 as u64)).exp();
    let mut sum = t0;
    // downward from j0
    let mut t = t0;
    let mut j = j0;
    while j > 0 {
        t *= j as f64 / y;
        j -= 1;
        sum += t;
        if t < sum * 1e-18 {
            break;
        }
    }
    // upward from j0 to k
    t = t0;
    j = j0;
    while j < k {
        j += 1;
        t *= y / j as f64;
        sum += t;
        if t < sum * 1e-18 {
            break;
        }
    }
    sum.min(1.0)
}

/// ln k!, exact products below 26, Stirling series above.
pub(crate) fn ln_factorial(k: u64) -> f64 {
    if k < 2 {
        return 0.0;
    }
    if k <= 25 {
        let mut f = 1.0f64;
        for i in 2..=k {
            f *= i as f64;
        }
        return f.ln();
    }
    let n = (k + 1) as f64;
    (n - 0.5) * n.ln() - n + 0.5 * LN_2PI + 1.0 / (12.0 * n) - 1.0 / (360.0 * n * n * n)
        + 1.0 / (1260.0 * n.powi(5))
}

/// Binary entropy h(p) = −p ln p − (1−p) ln(1−p) in nats; h(0) = h(1) = 0.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain("binary_entropy requires 0 <= p <= 1"));
    }
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    Ok(-p * p.ln() - (1.0 - p) * (-p).ln_1p())
}
