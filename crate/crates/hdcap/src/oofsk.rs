//! On-off frequency-shift keying with hard-decision energy detection.
//!
//! A symbol either stays silent (probability 1 − ν) or puts all its energy
//! on one of M orthogonal tones, so the per-tone SNR while transmitting is
//! α² = snr/ν. The detector compares the largest tone energy against a MAP
//! threshold τ and outputs one of M + 1 hard symbols; the achievable rate
//! is the mutual information of that (M+1)-ary discrete channel under the
//! on-off prior. ν = 1 recovers ordinary M-ary FSK.

use crate::channel::{expect_over_fading, ChannelKind, ChannelSpec};
#[cfg(not(feature = "std"))]
use crate::math::FloatExt;
use crate::quad::integrate;
use crate::specfun::{bessel_i0_inv_log, ln_factorial, log_bessel_i0, marcum_q1};
use crate::{Error, Result};
use alloc::vec::Vec;

/// Tone count and duty cycle of the modulation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OofskConfig {
    m: u32,
    nu: f64,
}

impl OofskConfig {
    pub fn new(m: u32, nu: f64) -> Result<Self> {
        if m < 1 {
            return Err(Error::Domain("oofsk needs at least one tone"));
        }
        if !(nu > 0.0 && nu <= 1.0) {
            return Err(Error::Domain("duty cycle must satisfy 0 < nu <= 1"));
        }
        Ok(OofskConfig { m, nu })
    }

    /// Always-on signaling: plain M-ary FSK.
    pub fn fsk(m: u32) -> Result<Self> {
        OofskConfig::new(m, 1.0)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }
}

/// Operating point of the threshold detector.
#[derive(Clone, Copy, Debug)]
pub struct DetectorParams {
    /// Per-tone SNR α² = snr/ν, scaled by the squared channel gain when the
    /// receiver knows it.
    pub alpha_sq: f64,
    /// ln ξ, the prior-odds level the threshold equation solves against.
    /// −∞ when ν = 1 (silence has zero prior mass, so τ = 0).
    pub log_xi: f64,
    /// Declare "off" unless some tone energy exceeds τ. +∞ when the off
    /// hypothesis always wins, e.g. at snr = 0 with ν < 1.
    pub tau: f64,
}

/// MAP energy threshold for the channel as the detector sees it.
///
/// `h_sq` is the realized |h|²: required for coherent fading, where the
/// detector adapts τ to the known gain, and rejected otherwise.
pub fn detector_params(
    cfg: &OofskConfig,
    snr: f64,
    spec: &ChannelSpec,
    h_sq: Option<f64>,
) -> Result<DetectorParams> {
    check_snr(snr)?;
    match spec.kind() {
        ChannelKind::Awgn => {
            if h_sq.is_some() {
                return Err(Error::Usage("h_sq only applies to coherent fading"));
            }
            known_gain_detector(cfg, spec.d() * spec.d() * snr / cfg.nu)
        }
        ChannelKind::CoherentFading => {
            let u = h_sq.ok_or(Error::Usage("coherent detection needs the realized |h|^2"))?;
            if !(u.is_finite() && u >= 0.0) {
                return Err(Error::Domain("|h|^2 must be finite and >= 0"));
            }
            known_gain_detector(cfg, u * snr / cfg.nu)
        }
        ChannelKind::NoncoherentRician => {
            if h_sq.is_some() {
                return Err(Error::Usage("h_sq only applies to coherent fading"));
            }
            noncoherent_detector(cfg, snr / cfg.nu, spec.d(), spec.gamma_sq())
        }
    }
}

fn check_snr(snr: f64) -> Result<()> {
    if !(snr.is_finite() && snr >= 0.0) {
        return Err(Error::Domain("snr must be finite and >= 0"));
    }
    Ok(())
}

fn log_prior_odds(cfg: &OofskConfig) -> f64 {
    // ln(M(1-nu)/nu); -inf at nu = 1.
    (cfg.m as f64 * (1.0 - cfg.nu) / cfg.nu).ln()
}

/// Threshold when the realized amplitude is known (nonfading, or coherent
/// per gain realization): the on/off likelihood ratio at tone energy x is
/// e^{−α²} I0(2α√x), so τ inverts I0 at ξ.
fn known_gain_detector(cfg: &OofskConfig, alpha_sq: f64) -> Result<DetectorParams> {
    let log_xi = log_prior_odds(cfg) + alpha_sq;
    let tau = if log_xi <= 0.0 {
        0.0
    } else {
        let z = bessel_i0_inv_log(log_xi)?;
        if alpha_sq > 0.0 {
            z * z / (4.0 * alpha_sq)
        } else {
            f64::INFINITY
        }
    };
    Ok(DetectorParams { alpha_sq, log_xi, tau })
}

/// Threshold with the Rician fade unknown: solves
/// ln Φ(x) = γ²α²x/g + ln I0(2√(x α²d²)/g) = ln ξ, g = 1 + γ²α²,
/// by bisection on the increasing left side.
fn noncoherent_detector(
    cfg: &OofskConfig,
    alpha_sq: f64,
    d: f64,
    gamma_sq: f64,
) -> Result<DetectorParams> {
    let g = 1.0 + gamma_sq * alpha_sq;
    let lam = alpha_sq * d * d / g;
    let log_xi = log_prior_odds(cfg) + g.ln() + lam;
    if log_xi <= 0.0 {
        return Ok(DetectorParams { alpha_sq, log_xi, tau: 0.0 });
    }
    if alpha_sq == 0.0 {
        // The likelihood ratio is identically 1, below xi: always off.
        return Ok(DetectorParams { alpha_sq, log_xi, tau: f64::INFINITY });
    }
    let phi =
        |x: f64| gamma_sq * alpha_sq * x / g + log_bessel_i0(2.0 * (x * alpha_sq).sqrt() * d / g);
    let mut hi = 1.0f64;
    let mut n = 0;
    while phi(hi) < log_xi {
        hi *= 2.0;
        n += 1;
        if n > 1100 {
            return Err(Error::NoConvergence { what: "detector threshold bracket", at: log_xi });
        }
    }
    let mut lo = 0.0f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if phi(mid) < log_xi {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    Ok(DetectorParams { alpha_sq, log_xi, tau: 0.5 * (lo + hi) })
}

/// Hard-decision transition matrix of the (M+1)-ary channel. Entry
/// `(out, inp)` is P(decide `out` | sent `inp`); index 0 is the off symbol
/// and 1..=M are the tones. Columns sum to 1.
#[derive(Clone, Debug)]
pub struct TransitionMatrix {
    dim: usize,
    p: Vec<f64>,
}

impl TransitionMatrix {
    /// Builds a matrix from row-major entries (decisions as rows, sent
    /// symbols as columns), e.g. to score an externally tallied matrix
    /// with [`crate::simcheck::empirical_mi`].
    pub fn from_raw(dim: usize, p: Vec<f64>) -> Result<Self> {
        if dim == 0 || p.len() != dim * dim {
            return Err(Error::Usage("matrix entries must be dim x dim"));
        }
        Ok(TransitionMatrix { dim, p })
    }

    /// Tone symmetry leaves five distinct entries; lay them out.
    pub(crate) fn from_five(m: usize, p00: f64, pl0: f64, pll: f64, p0l: f64, plm: f64) -> Self {
        let dim = m + 1;
        let mut p = alloc::vec![0.0f64; dim * dim];
        p[0] = p00;
        for out in 1..dim {
            p[out * dim] = pl0;
        }
        for inp in 1..dim {
            p[inp] = p0l;
            for out in 1..dim {
                p[out * dim + inp] = if out == inp { pll } else { plm };
            }
        }
        TransitionMatrix { dim, p }
    }

    /// Number of symbols, M + 1.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, out: usize, inp: usize) -> f64 {
        assert!(out < self.dim && inp < self.dim, "transition index out of range");
        self.p[out * self.dim + inp]
    }

    pub fn column_sum(&self, inp: usize) -> f64 {
        (0..self.dim).map(|out| self.entry(out, inp)).sum()
    }
}

/// Transition matrix on the nonfading unit-gain channel. Gain-scaled
/// variants pass an adjusted snr: d²·snr for a fixed gain d, or |h|²·snr
/// per realization when a fading gain is tracked at the receiver.
pub fn transitions_awgn(cfg: &OofskConfig, snr: f64) -> Result<TransitionMatrix> {
    check_snr(snr)?;
    let det = known_gain_detector(cfg, snr / cfg.nu)?;
    let (p00, pl0, pll, p0l, plm) = five_probs(cfg.m, 1.0, det.alpha_sq, det.tau)?;
    Ok(TransitionMatrix::from_five(cfg.m as usize, p00, pl0, pll, p0l, plm))
}

/// Transition matrix when neither side knows the Rician fade.
pub fn transitions_noncoherent(
    cfg: &OofskConfig,
    snr: f64,
    spec: &ChannelSpec,
) -> Result<TransitionMatrix> {
    if spec.kind() != ChannelKind::NoncoherentRician {
        return Err(Error::Usage("transitions_noncoherent needs a noncoherent channel"));
    }
    check_snr(snr)?;
    let det = noncoherent_detector(cfg, snr / cfg.nu, spec.d(), spec.gamma_sq())?;
    let g = 1.0 + spec.gamma_sq() * det.alpha_sq;
    let lam = det.alpha_sq * spec.d() * spec.d() / g;
    let (p00, pl0, pll, p0l, plm) = five_probs(cfg.m, g, lam, det.tau)?;
    Ok(TransitionMatrix::from_five(cfg.m as usize, p00, pl0, pll, p0l, plm))
}

/// ln(1 − e^{−τ}); −∞ at τ = 0, 0 at τ = +∞.
fn ln_one_minus_exp_neg(tau: f64) -> f64 {
    (-(-tau).exp()).ln_1p()
}

/// The five distinct transition entries for tone count m, fading
/// normalizer g = 1 + γ²α², line-of-sight energy λ = α²d²/g and threshold
/// τ. The nonfading channel is g = 1, λ = α². Tone energies are referred
/// to unit noise power, so a silent tone is Exp(1) and P(below τ) =
/// 1 − e^{−τ}.
fn five_probs(m: u32, g: f64, lam: f64, tau: f64) -> Result<(f64, f64, f64, f64, f64)> {
    let mf = m as f64;
    let lm = ln_one_minus_exp_neg(tau);
    let p00 = (mf * lm).exp();
    let pl0 = (1.0 - p00) / mf;
    let off_others = if m == 1 { 1.0 } else { ((mf - 1.0) * lm).exp() };
    let p0l = off_others * (1.0 - marcum_q1((2.0 * lam).sqrt(), (2.0 * tau / g).sqrt()));
    let pll = pll_on_tone(m, g, lam, tau)?;
    let plm = if m >= 2 { ((1.0 - pll - p0l) / (mf - 1.0)).max(0.0) } else { 0.0 };
    Ok((p00, pl0, pll, p0l, plm))
}

/// Roundoff budget for the alternating binomial sum in [`pll_on_tone`];
/// past this the defining integral is evaluated instead.
const PLL_SUM_ERR: f64 = 1e-12;

/// P(correct tone | that tone sent): the on-tone energy clears both the
/// threshold and all M−1 noise-only tones.
///
/// Expanding (1 − e^{−u})^{M−1} binomially gives a closed alternating sum
/// of Marcum Q terms; its terms grow like C(M−1, n) and cancel, so the
/// compensated sum is trusted only while Σ|term|·ε stays small and the
/// integral form takes over otherwise (large M at low SNR).
fn pll_on_tone(m: u32, g: f64, lam: f64, tau: f64) -> Result<f64> {
    if tau.is_infinite() {
        return Ok(0.0);
    }
    let m1 = (m - 1) as u64;
    let ln_c0 = ln_factorial(m1);
    let mut terms: Vec<f64> = Vec::with_capacity(m as usize);
    for n in 0..m {
        let r = n as f64 * g + 1.0;
        let q = marcum_q1((2.0 * lam / r).sqrt(), (2.0 * r * tau / g).sqrt());
        let ln_c = ln_c0 - ln_factorial(n as u64) - ln_factorial(m1 - n as u64);
        let mag = (ln_c - r.ln() - n as f64 * lam * g / r).exp() * q;
        terms.push(if n % 2 == 0 { mag } else { -mag });
    }
    if terms.iter().all(|t| t.is_finite()) {
        // Descending magnitude keeps the compensation tight once the
        // binomial growth makes ordering matter.
        if m > 60 {
            terms.sort_unstable_by(|a, b| b.abs().partial_cmp(&a.abs()).unwrap());
        }
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        let mut abs = 0.0f64;
        for &t in &terms {
            abs += t.abs();
            let s = sum + t;
            comp += if sum.abs() >= t.abs() { (sum - s) + t } else { (t - s) + sum };
            sum = s;
        }
        sum += comp;
        if abs * f64::EPSILON <= PLL_SUM_ERR && sum.is_finite() {
            return Ok(sum.clamp(0.0, 1.0));
        }
    }
    pll_integral(m, g, lam, tau)
}

/// Same probability as the defining integral over the on-tone energy u:
/// (1/g) e^{−u/g − λ} I0(2√(λu/g)) is the Rice energy density and
/// (1 − e^{−u})^{M−1} the chance every silent tone stays below u.
fn pll_integral(m: u32, g: f64, lam: f64, tau: f64) -> Result<f64> {
    let mf1 = (m - 1) as f64;
    let f = |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        let silent = if m == 1 { 0.0 } else { mf1 * ln_one_minus_exp_neg(u) };
        (-u / g - lam + log_bessel_i0(2.0 * (lam * u / g).sqrt()) - g.ln() + silent).exp()
    };
    // Past (√λ + 9)²g the Rice tail is below e^{−40}.
    let root = lam.sqrt() + 9.0;
    let hi = g * root * root + 60.0 * g;
    if tau >= hi {
        return Ok(marcum_q1((2.0 * lam).sqrt(), (2.0 * tau / g).sqrt()));
    }
    integrate(&f, tau, hi, 1e-13)
}

fn xlnx(p: f64) -> f64 {
    if p < 1e-300 {
        0.0
    } else {
        p * p.ln()
    }
}

/// Mutual information in nats between the on-off prior {1−ν, ν/M, …} and
/// the hard decision, for a matrix with the tone symmetry of this scheme.
pub fn oofsk_rate(cfg: &OofskConfig, t: &TransitionMatrix) -> Result<f64> {
    if t.dim() != cfg.m as usize + 1 {
        return Err(Error::Usage("transition matrix size does not match config"));
    }
    let mf = cfg.m as f64;
    let nu = cfg.nu;
    let p00 = t.entry(0, 0);
    let pl0 = t.entry(1, 0);
    let p0l = t.entry(0, 1);
    let pll = t.entry(1, 1);
    let plm = if cfg.m >= 2 { t.entry(2, 1) } else { 0.0 };
    // Output marginals: off, and any one tone.
    let q0 = (1.0 - nu) * p00 + nu * p0l;
    let ql = (1.0 - nu) * pl0 + nu / mf * pll + nu * (mf - 1.0) / mf * plm;
    let mut i = -xlnx(q0) - mf * xlnx(ql);
    i += (1.0 - nu) * (xlnx(p00) + mf * xlnx(pl0));
    i += nu * (xlnx(p0l) + xlnx(pll) + (mf - 1.0) * xlnx(plm));
    Ok(i.max(0.0))
}

/// Rate when the receiver tracks the fade: conditioned on |h|² the channel
/// is the known-gain one at |h|²·snr, threshold included, and the rate is
/// its average over the fading law.
pub fn oofsk_rate_coherent(cfg: &OofskConfig, snr: f64, spec: &ChannelSpec) -> Result<f64> {
    if spec.kind() != ChannelKind::CoherentFading {
        return Err(Error::Usage("oofsk_rate_coherent needs a coherent fading channel"));
    }
    check_snr(snr)?;
    expect_over_fading(spec, |u| oofsk_rate(cfg, &transitions_awgn(cfg, u * snr)?))
}

/// Duty cycle schedule ν(snr) = snr/((1+ε) ln(1/snr)), clamped to (0, 1].
/// It pins the per-tone SNR at α² = (1+ε) ln(1/snr), which grows just fast
/// enough as snr → 0 for the detector to stay reliable.
pub fn duty_cycle_schedule(snr: f64, epsilon: f64) -> Result<f64> {
    if !(snr > 0.0 && snr < 1.0) {
        return Err(Error::Domain("schedule is defined for 0 < snr < 1"));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Domain("epsilon must be finite and > 0"));
    }
    Ok((snr / ((1.0 + epsilon) * (1.0 / snr).ln())).min(1.0))
}
