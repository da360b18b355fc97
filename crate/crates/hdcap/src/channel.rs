//! Channel models shared by every modulation scheme: unfaded AWGN and
//! Rician fading h = d + z with complex-Gaussian diffuse part z of
//! variance γ², received either coherently (h known at the receiver) or
//! noncoherently (h unknown).
//!
//! SNR throughout the crate is a linear power ratio against unit noise
//! spectral density; dB conversions happen only at the CLI boundary.

use crate::rng::RandomStream;
use crate::specfun;
use crate::{Error, Result};

#[cfg(not(feature = "std"))]
use crate::math::FloatExt;

/// Reception model for the fading coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelKind {
    /// h = d exactly; no fading.
    Awgn,
    /// Random h, known to the receiver.
    CoherentFading,
    /// Random h, unknown to both ends; detection uses only magnitudes
    /// and the line-of-sight phase reference.
    NoncoherentRician,
}

/// Channel description: kind plus the Rician parameters (d, γ²).
///
/// Constructors enforce the per-kind domain rules, so a value of this
/// type is always internally consistent.
#[derive(Clone, Copy, Debug)]
pub struct ChannelSpec {
    kind: ChannelKind,
    d: f64,
    gamma_sq: f64,
}

/// Second and fourth moments of |h|.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FadingMoments {
    /// E{|h|²} = d² + γ².
    pub m2: f64,
    /// E{|h|⁴} = d⁴ + 4d²γ² + 2γ⁴.
    pub m4: f64,
}

fn require(cond: bool, msg: &'static str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(msg))
    }
}

impl ChannelSpec {
    /// Unfaded channel with fixed gain d > 0.
    pub fn awgn(d: f64) -> Result<Self> {
        require(d.is_finite() && d > 0.0, "awgn channel needs finite d > 0")?;
        Ok(ChannelSpec { kind: ChannelKind::Awgn, d, gamma_sq: 0.0 })
    }

    /// Fading channel known at the receiver; d ≥ 0, γ² ≥ 0, not both zero.
    pub fn coherent(d: f64, gamma_sq: f64) -> Result<Self> {
        require(
            d.is_finite() && d >= 0.0 && gamma_sq.is_finite() && gamma_sq >= 0.0,
            "coherent channel needs finite d >= 0 and gamma_sq >= 0",
        )?;
        require(d > 0.0 || gamma_sq > 0.0, "coherent channel must carry power")?;
        Ok(ChannelSpec { kind: ChannelKind::CoherentFading, d, gamma_sq })
    }

    /// Fading channel unknown to both ends. With d = 0 (pure Rayleigh)
    /// phase carries no information, so phase modulation degenerates to
    /// zero capacity, but energy detection remains meaningful.
    pub fn noncoherent(d: f64, gamma_sq: f64) -> Result<Self> {
        require(
            d.is_finite() && d >= 0.0 && gamma_sq.is_finite() && gamma_sq >= 0.0,
            "noncoherent channel needs finite d >= 0 and gamma_sq >= 0",
        )?;
        require(d > 0.0 || gamma_sq > 0.0, "noncoherent channel must carry power")?;
        Ok(ChannelSpec { kind: ChannelKind::NoncoherentRician, d, gamma_sq })
    }

    /// Coherent channel from Rician factor K = d²/γ² and total power
    /// Ω = d² + γ² (pass Ω = 1 for a power-normalized channel).
    pub fn coherent_rician_k(k: f64, omega: f64) -> Result<Self> {
        let (d, g) = rician_from_k(k, omega)?;
        ChannelSpec::coherent(d, g)
    }

    /// Noncoherent channel from (K, Ω); K = 0 gives pure Rayleigh.
    pub fn noncoherent_rician_k(k: f64, omega: f64) -> Result<Self> {
        let (d, g) = rician_from_k(k, omega)?;
        ChannelSpec::noncoherent(d, g)
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    /// Line-of-sight amplitude d = |E{h}|.
    pub fn d(&self) -> f64 {
        self.d
    }

    /// Diffuse-component variance γ².
    pub fn gamma_sq(&self) -> f64 {
        self.gamma_sq
    }

    /// Rician factor K = d²/γ²; +∞ exactly when γ² = 0.
    pub fn rician_factor(&self) -> f64 {
        if self.gamma_sq == 0.0 {
            f64::INFINITY
        } else {
            self.d * self.d / self.gamma_sq
        }
    }

    /// Total channel power Ω = d² + γ².
    pub fn total_power(&self) -> f64 {
        self.d * self.d + self.gamma_sq
    }
}

fn rician_from_k(k: f64, omega: f64) -> Result<(f64, f64)> {
    require(k >= 0.0 && !k.is_nan(), "rician factor K must be >= 0")?;
    require(omega.is_finite() && omega > 0.0, "total power omega must be > 0")?;
    if k.is_infinite() {
        return Ok((omega.sqrt(), 0.0));
    }
    let d = (omega * k / (1.0 + k)).sqrt();
    let gamma_sq = omega / (1.0 + k);
    Ok((d, gamma_sq))
}

/// Moments of |h| used to rescale low-SNR expansions under fading.
/// Degenerate kinds fall out consistently (γ² = 0 gives m2 = d², m4 = d⁴).
pub fn rician_moments(spec: &ChannelSpec) -> FadingMoments {
    let d2 = spec.d * spec.d;
    let g = spec.gamma_sq;
    FadingMoments { m2: d2 + g, m4: d2 * d2 + 4.0 * d2 * g + 2.0 * g * g }
}

/// One fading realization as (re, im). AWGN returns d deterministically;
/// fading kinds return d + γ(z₁ + j z₂)/√2 with standard normal z₁, z₂.
pub fn sample_fading(spec: &ChannelSpec, stream: &mut RandomStream) -> (f64, f64) {
    match spec.kind {
        ChannelKind::Awgn => (spec.d, 0.0),
        _ => {
            let (z1, z2) = stream.normal_pair();
            let s = (spec.gamma_sq / 2.0).sqrt();
            (spec.d + s * z1, s * z2)
        }
    }
}

/// Below γ²/d² = 1e-7 the fading spread contributes less than the 1e-6
/// integration tolerance, so the expectation collapses to f(d²).
const DEGENERATE_SPREAD: f64 = 1e-7;

/// Node-doubling cap. Unbounded integrands such as f(u) = u² leave a
/// squared-log endpoint singularity in quantile space and need the full
/// 8192 nodes; bounded smooth integrands converge by 256.
const MAX_QUANTILE_NODES: usize = 8192;

/// Deterministic E{f(|h|²)} to 1e-6 relative accuracy.
///
/// |h|² follows a scaled noncentral chi-square law with two degrees of
/// freedom. The integral is taken in quantile space: Gauss-Legendre nodes
/// t ∈ (0,1) are mapped through the inverse CDF (bisection on the
/// Marcum-Q tail) and the node count doubles from 128 until two successive
/// estimates agree. Errors from `f` propagate unchanged.
pub fn expect_over_fading<F>(spec: &ChannelSpec, f: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let d2 = spec.d * spec.d;
    if spec.gamma_sq <= DEGENERATE_SPREAD * d2 {
        return f(d2);
    }
    let a = (2.0 * d2 / spec.gamma_sq).sqrt();
    let mut prev = f64::NAN;
    let mut n = 128usize;
    loop {
        let (x, w) = crate::quad::gauss_legendre(n);
        let mut sum = 0.0;
        let mut lower = 0.0;
        for i in 0..n {
            let t = 0.5 * (x[i] + 1.0);
            let u = fading_quantile(a, spec.gamma_sq, t, lower)?;
            lower = u;
            sum += 0.5 * w[i] * f(u)?;
        }
        if (sum - prev).abs() <= 1e-6 * sum.abs().max(1e-300) {
            return Ok(sum);
        }
        prev = sum;
        n *= 2;
        if n > MAX_QUANTILE_NODES {
            return Err(Error::NoConvergence {
                what: "fading expectation node doubling",
                at: n as f64,
            });
        }
    }
}

/// Solve P(|h|² > u) = 1 - t for u; `lower` is a known lower bound
/// (quantiles are requested in ascending order).
fn fading_quantile(a: f64, gamma_sq: f64, t: f64, lower: f64) -> Result<f64> {
    let target = 1.0 - t;
    let ccdf = |u: f64| specfun::marcum_q1(a, (2.0 * u / gamma_sq).sqrt());
    let mut lo = lower;
    let mut hi = (lower + gamma_sq * (1.0 + a * a / 2.0)).max(gamma_sq);
    let mut grow = 0;
    while ccdf(hi) > target {
        lo = hi;
        hi *= 2.0;
        grow += 1;
        if grow > 200 {
            return Err(Error::NoConvergence { what: "fading quantile bracket", at: t });
        }
    }
    for _ in 0..200 {
        if hi - lo <= 1e-12 * (1.0 + hi) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if ccdf(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
