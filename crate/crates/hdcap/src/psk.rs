//! Hard-decision M-ary PSK: received-phase densities, sector transition
//! probabilities, capacity of the induced symmetric discrete channel,
//! and the closed-form zero-SNR derivative machinery behind the
//! bit-energy and wideband-slope summaries.

use crate::channel::{expect_over_fading, rician_moments, ChannelKind, ChannelSpec};
use crate::quad;
use crate::specfun::{binary_entropy, gaussian_q};
use crate::{Error, Result};
use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use crate::math::FloatExt;

/// Constellation size for phase modulation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PskConfig {
    m: u32,
}

impl PskConfig {
    /// M-ary constellation, M ≥ 2.
    pub fn new(m: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::Domain("psk constellation needs m >= 2"));
        }
        Ok(PskConfig { m })
    }

    pub fn m(&self) -> u32 {
        self.m
    }
}

/// First row of the post-detector transition matrix: p[l-1] = P(y = l | x = 1).
/// The full matrix is the circulant extension of this row.
#[derive(Clone, Debug)]
pub struct TransitionRow {
    pub p: Vec<f64>,
}

/// Curvature of capacity at zero SNR. The 3-PSK constellation has a
/// genuine SNR^{3/2} term, so its second derivative is +∞; that case is
/// carried explicitly rather than as a large float.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Curvature {
    Finite(f64),
    PlusInfinity,
}

impl Curvature {
    pub fn value(&self) -> Option<f64> {
        match self {
            Curvature::Finite(v) => Some(*v),
            Curvature::PlusInfinity => None,
        }
    }
}

/// Zero-SNR derivatives of capacity and the linear tradeoff summary they
/// induce: bit energy at vanishing spectral efficiency and wideband slope.
#[derive(Clone, Copy, Debug)]
pub struct LowSnrSummary {
    /// dC/dSNR at 0, nats per symbol per SNR.
    pub c_dot0: f64,
    /// d²C/dSNR² at 0.
    pub c_ddot0: Curvature,
    /// Received bit energy at zero spectral efficiency, dB.
    pub eb_n0_zero_se_db: f64,
    /// Wideband slope, bits/s/Hz per 3 dB; zero when the curvature is +∞.
    pub s0: f64,
}

fn summarize(c1: f64, c2: Curvature, scale: f64) -> LowSnrSummary {
    let eb = 10.0 * (scale * core::f64::consts::LN_2 / c1).log10();
    let s0 = match c2 {
        Curvature::Finite(c) if c < 0.0 => 2.0 * c1 * c1 / (-c),
        _ => 0.0,
    };
    LowSnrSummary { c_dot0: c1, c_ddot0: c2, eb_n0_zero_se_db: eb, s0 }
}

/// Received-energy normalization: the mean channel power gain E{|h|²}
/// (d² for AWGN, d²+γ² otherwise).
fn received_scale(spec: &ChannelSpec) -> f64 {
    rician_moments(spec).m2
}

fn beta_of(spec: &ChannelSpec, snr: f64, h_sq: Option<f64>) -> Result<f64> {
    if !(snr >= 0.0) || !snr.is_finite() {
        return Err(Error::Domain("snr must be finite and >= 0"));
    }
    match spec.kind() {
        ChannelKind::CoherentFading => match h_sq {
            Some(u) if u >= 0.0 => Ok(u * snr),
            Some(_) => Err(Error::Domain("realized |h|^2 must be >= 0")),
            None => Err(Error::Usage("coherent phase density needs the realized |h|^2")),
        },
        _ => {
            if h_sq.is_some() {
                return Err(Error::Usage("h_sq applies only to coherent channels"));
            }
            let d2 = spec.d() * spec.d();
            Ok(d2 * snr / (spec.gamma_sq() * snr + 1.0))
        }
    }
}

/// Density of the received phase given transmitted phase 0, as a function
/// of the concentration β (d²·SNR/(γ²·SNR+1) noncoherently, |h|²·SNR with
/// receiver side information).
fn density(beta: f64, theta: f64) -> f64 {
    let c = theta.cos();
    let s2 = {
        let s = theta.sin();
        s * s
    };
    1.0 / (2.0 * PI) * (-beta).exp()
        + (beta / PI).sqrt() * c * (-beta * s2).exp() * (1.0 - gaussian_q((2.0 * beta).sqrt() * c))
}

/// Density of the received phase at `theta` given transmitted phase 0.
///
/// Coherent channels condition on a fading realization and require
/// `h_sq`; AWGN and noncoherent channels must pass `None`.
pub fn phase_pdf(theta: f64, snr: f64, spec: &ChannelSpec, h_sq: Option<f64>) -> Result<f64> {
    let beta = beta_of(spec, snr, h_sq)?;
    Ok(density(beta, theta))
}

/// Decision-sector probabilities P(y = l | x = 1) for l = 1..M.
///
/// Each sector [(2l-3)π/M, (2l-1)π/M) is integrated adaptively to 1e-12
/// absolute; the l = 1 sector is split at the density's peak θ = 0 so no
/// panel straddles it.
pub fn psk_transition_row(
    cfg: &PskConfig,
    spec: &ChannelSpec,
    snr: f64,
    h_sq: Option<f64>,
) -> Result<TransitionRow> {
    let beta = beta_of(spec, snr, h_sq)?;
    let m = cfg.m as f64;
    let f = |theta: f64| density(beta, theta);
    let tol = 1e-12;
    let mut p = Vec::with_capacity(cfg.m as usize);
    p.push(quad::integrate(&f, -PI / m, 0.0, tol)? + quad::integrate(&f, 0.0, PI / m, tol)?);
    for l in 2..=cfg.m {
        let a = (2.0 * l as f64 - 3.0) * PI / m;
        let b = (2.0 * l as f64 - 1.0) * PI / m;
        p.push(quad::integrate(&f, a, b, tol)?);
    }
    Ok(TransitionRow { p })
}

/// Entropy convention 0·ln 0 = 0; probabilities floor at 1e-300 first.
fn capacity_from_row(m: u32, row: &[f64]) -> f64 {
    let mut c = (m as f64).ln();
    for &p in row {
        let p = p.max(1e-300);
        c += p * p.ln();
    }
    c.clamp(0.0, (m as f64).ln())
}

/// Capacity in nats per symbol of hard-decision M-PSK at linear `snr`.
///
/// The detector output is a symmetric discrete channel, so equiprobable
/// inputs achieve capacity: C = ln M + Σ_l P_{l,1} ln P_{l,1}. Coherent
/// reception averages the conditional capacity over the fading law.
pub fn psk_capacity(cfg: &PskConfig, spec: &ChannelSpec, snr: f64) -> Result<f64> {
    match spec.kind() {
        ChannelKind::CoherentFading => expect_over_fading(spec, |u| {
            let row = psk_transition_row(cfg, spec, snr, Some(u))?;
            Ok(capacity_from_row(cfg.m, &row.p))
        }),
        _ => {
            let row = psk_transition_row(cfg, spec, snr, None)?;
            Ok(capacity_from_row(cfg.m, &row.p))
        }
    }
}

fn psi(m: f64) -> f64 {
    let sp = (PI / m).sin();
    let s2p = (2.0 * PI / m).sin();
    m * m / (16.0 * PI * PI)
        * ((2.0 - PI) * s2p * s2p + (m * m - 4.0 * PI) * sp.powi(4)
            - 2.0 * m * sp * sp * s2p)
}

/// Zero-SNR capacity derivatives and the induced tradeoff summary.
///
/// Closed forms per constellation size: M = 2 and M = 4 have rational
/// coefficients, M = 3 has +∞ curvature, M ≥ 5 uses the trigonometric
/// ψ(M). Coherent reception rescales the first derivative by E{|h|²} and
/// the second by E{|h|⁴}; the bit-energy normalization is E{|h|²}.
pub fn psk_lowsnr(cfg: &PskConfig, spec: &ChannelSpec) -> LowSnrSummary {
    let mom = rician_moments(spec);
    let m = cfg.m as f64;
    let sp2 = {
        let s = (PI / m).sin();
        s * s
    };
    let coherent = spec.kind() == ChannelKind::CoherentFading;
    let (e2, e4, cross) = if coherent {
        (mom.m2, mom.m4, 0.0)
    } else {
        let d2 = spec.d() * spec.d();
        (d2, d2 * d2, d2 * spec.gamma_sq())
    };
    let c1 = if cfg.m == 2 { 2.0 * e2 / PI } else { m * m * e2 / (4.0 * PI) * sp2 };
    let c2 = match cfg.m {
        2 => Curvature::Finite(8.0 / (3.0 * PI) * (1.0 / PI - 1.0) * e4 - 4.0 * cross / PI),
        3 => Curvature::PlusInfinity,
        4 => Curvature::Finite(4.0 / (3.0 * PI) * (1.0 / PI - 1.0) * e4 - 4.0 * cross / PI),
        _ => Curvature::Finite(psi(m) * e4 - cross / (2.0 * PI) * m * m * sp2),
    };
    summarize(c1, c2, received_scale(spec))
}

/// Continuous-phase limit of `psk_lowsnr` as M grows without bound.
pub fn psk_lowsnr_asymptotic(spec: &ChannelSpec) -> LowSnrSummary {
    let mom = rician_moments(spec);
    let coherent = spec.kind() == ChannelKind::CoherentFading;
    let (e2, e4, cross) = if coherent {
        (mom.m2, mom.m4, 0.0)
    } else {
        let d2 = spec.d() * spec.d();
        (d2, d2 * d2, d2 * spec.gamma_sq())
    };
    let c1 = PI * e2 / 4.0;
    let c2 = (PI * PI - 8.0 * PI + 8.0) * e4 / 16.0 - cross * PI / 2.0;
    summarize(c1, Curvature::Finite(c2), received_scale(spec))
}

/// Coefficients of C(snr) = φ1·snr + φ2·snr^{3/2} + φ3·snr² + o(snr²),
/// as literal trigonometric sums. φ2 vanishes for every M except 3; the
/// surviving φ2(3) is what blows up the second derivative there.
pub fn psk_taylor_coeffs(cfg: &PskConfig, d: f64, gamma_sq: f64) -> (f64, f64, f64) {
    let m = cfg.m as f64;
    let n = cfg.m;
    let (mut sum_c2, mut sum_c3, mut sum_c4, mut sum_c2_of_2) = (0.0, 0.0, 0.0, 0.0);
    for i in 1..=n {
        let c = (2.0 * PI * i as f64 / m).cos();
        sum_c2 += c * c;
        sum_c3 += c * c * c;
        sum_c4 += c * c * c * c;
        let c2 = (4.0 * PI * i as f64 / m).cos();
        sum_c2_of_2 += c2 * c2;
    }
    let d2 = d * d;
    let d3 = d2 * d;
    let d4 = d2 * d2;
    let sp = (PI / m).sin();
    let s2p = (2.0 * PI / m).sin();
    let phi1 = m * d2 / (2.0 * PI) * sp * sp * sum_c2;
    let phi2 = m * d3 / (PI * PI.sqrt()) * (sp * s2p - m / 6.0 * sp.powi(3)) * sum_c3;
    let phi3 = -m * m * d4 / (16.0 * PI) * s2p * s2p
        + m * d4 * (PI + 2.0) / (16.0 * PI * PI) * s2p * s2p * sum_c2_of_2
        + d4
            * ((m.powi(3) / (12.0 * PI * PI) - m / (3.0 * PI)) * sp.powi(4)
                - m * m / (2.0 * PI * PI) * sp * sp * s2p)
            * sum_c4
        + d4 * m * m / (4.0 * PI * PI) * sp * sp * s2p * sum_c2
        - d2 * gamma_sq / (2.0 * PI) * m * sp * sp * sum_c2;
    (phi1, phi2, phi3)
}

/// Peak-limited soft-detected QPSK reference point for overlay curves:
/// (bit energy at zero spectral efficiency in dB, wideband slope).
pub fn soft_qpsk_reference(k_factor: f64) -> Result<(f64, f64)> {
    if !(k_factor > 0.0) {
        return Err(Error::Domain("rician factor must be > 0"));
    }
    if k_factor.is_infinite() {
        return Ok((10.0 * core::f64::consts::LN_2.log10(), 2.0));
    }
    let eb = 10.0 * ((1.0 + 1.0 / k_factor) * core::f64::consts::LN_2).log10();
    let s0 = 2.0 * k_factor * k_factor / ((1.0 + k_factor) * (1.0 + k_factor));
    Ok((eb, s0))
}

/// Closed-form binary capacity ln2 − h(Q(√(2d²snr/(γ²snr+1)))), used to
/// cross-check the quadrature path.
pub fn bpsk_capacity_closed_form(spec: &ChannelSpec, snr: f64) -> Result<f64> {
    let beta = beta_of(spec, snr, None)?;
    let q = gaussian_q((2.0 * beta).sqrt());
    Ok(core::f64::consts::LN_2 - binary_entropy(q)?)
}

/// Closed-form quaternary capacity 2·(ln2 − h(Q(√β))).
///
/// The quadrant decision splits into two independent binary decisions,
/// each seeing half the phase concentration β. Halving β is the same as
/// halving SNR only when γ² = 0, so on AWGN this equals
/// 2·bpsk_capacity_closed_form(snr/2); under noncoherent fading it is the
/// form that matches the quadrature path.
pub fn qpsk_capacity_closed_form(spec: &ChannelSpec, snr: f64) -> Result<f64> {
    let beta = beta_of(spec, snr, None)?;
    let q = gaussian_q(beta.sqrt());
    Ok(2.0 * (core::f64::consts::LN_2 - binary_entropy(q)?))
}
