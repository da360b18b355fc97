//! Bit-energy and spectral-efficiency bookkeeping: SNR sweeps, curve
//! points, and the search for the minimum energy per bit.
//!
//! Every rate in this crate is nats per symbol. A curve point divides by
//! the signaling dimension (1 for phase modulation, M for tone schemes) to
//! get bits/s/Hz, and refers the bit energy to the receiver through an
//! explicit power scale, so transmitted and received conventions never
//! mix silently.

use crate::channel::{rician_moments, ChannelKind, ChannelSpec};
#[cfg(not(feature = "std"))]
use crate::math::FloatExt;
use crate::oofsk::{
    oofsk_rate, oofsk_rate_coherent, transitions_awgn, transitions_noncoherent, OofskConfig,
};
use crate::psk::{psk_capacity, LowSnrSummary, PskConfig};
use crate::{Error, Result};
use alloc::vec::Vec;

const LN_2: f64 = core::f64::consts::LN_2;

/// One modulation at one duty point.
#[derive(Clone, Copy, Debug)]
pub enum Scheme {
    Psk(PskConfig),
    Oofsk(OofskConfig),
}

impl Scheme {
    /// Orthogonal dimensions the scheme occupies per symbol.
    pub fn dimension(&self) -> f64 {
        match self {
            Scheme::Psk(_) => 1.0,
            Scheme::Oofsk(cfg) => cfg.m() as f64,
        }
    }

    /// Hard-decision rate in nats per symbol at the given snr = E/N0.
    pub fn rate(&self, spec: &ChannelSpec, snr: f64) -> Result<f64> {
        match self {
            Scheme::Psk(cfg) => psk_capacity(cfg, spec, snr),
            Scheme::Oofsk(cfg) => match spec.kind() {
                ChannelKind::Awgn => {
                    let t = transitions_awgn(cfg, spec.d() * spec.d() * snr)?;
                    oofsk_rate(cfg, &t)
                }
                ChannelKind::CoherentFading => oofsk_rate_coherent(cfg, snr, spec),
                ChannelKind::NoncoherentRician => {
                    let t = transitions_noncoherent(cfg, snr, spec)?;
                    oofsk_rate(cfg, &t)
                }
            },
        }
    }
}

/// Rate and energy coordinates at one SNR.
#[derive(Clone, Copy, Debug)]
pub struct CurvePoint {
    /// E/N0, linear.
    pub snr: f64,
    pub rate_nats: f64,
    /// bits/s/Hz: rate·log2(e)/dimension.
    pub spectral_eff: f64,
    /// Received energy per bit over N0, dB.
    pub eb_n0_db: f64,
}

/// A swept curve and its refined bit-energy minimum.
#[derive(Clone, Debug)]
pub struct SweepResult {
    pub points: Vec<CurvePoint>,
    pub min_eb_db: f64,
    pub se_at_min: f64,
    pub snr_at_min: f64,
}

/// Log-spaced SNR grid in dB steps.
#[derive(Clone, Copy, Debug)]
pub struct SnrGrid {
    pub min_db: f64,
    pub max_db: f64,
    pub points: usize,
}

impl Default for SnrGrid {
    /// 60 points over [1e−5, 1e2], wide enough for every curve here.
    fn default() -> Self {
        SnrGrid { min_db: -50.0, max_db: 20.0, points: 60 }
    }
}

impl SnrGrid {
    pub fn values(&self) -> Vec<f64> {
        let n = self.points.max(2);
        let step = (self.max_db - self.min_db) / (n - 1) as f64;
        (0..n).map(|i| 10f64.powf((self.min_db + i as f64 * step) / 10.0)).collect()
    }
}

/// Energy per bit over N0 in dB: 10·log10(scale·snr·ln2/rate). `scale`
/// converts transmitted to received power (E{|h|²}, or d² without fading)
/// and is always explicit. Zero rate costs infinite energy.
pub fn bit_energy_db(snr: f64, rate_nats: f64, scale: f64) -> Result<f64> {
    if !(snr >= 0.0) || !(scale > 0.0) || !(rate_nats >= 0.0) {
        return Err(Error::Domain("bit_energy_db needs snr, rate >= 0 and scale > 0"));
    }
    if rate_nats == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (scale * snr * LN_2 / rate_nats).log10())
}

/// First-order spectral efficiency from the zero-SE expansion: the curve
/// leaves its energy intercept with slope s0 per 3.01 dB. Floored at 0
/// below the intercept.
pub fn linear_se_approx(eb_db: f64, summary: &LowSnrSummary) -> f64 {
    let slope = summary.s0 / (10.0 * 2.0f64.log10());
    (slope * (eb_db - summary.eb_n0_zero_se_db)).max(0.0)
}

/// Evaluates the scheme across the grid and refines the bit-energy
/// minimizer by golden-section search on log-SNR inside the bracketing
/// grid cell. Points are independent of one another; any rate failure is
/// reported with the offending SNR. The refined minimum is never above
/// the coarse-grid one.
pub fn sweep(scheme: &Scheme, spec: &ChannelSpec, snr_grid: &[f64]) -> Result<SweepResult> {
    if snr_grid.len() < 2 {
        return Err(Error::Usage("sweep needs at least 2 grid points"));
    }
    for w in snr_grid.windows(2) {
        if !(w[0] < w[1]) {
            return Err(Error::Usage("sweep grid must be strictly ascending"));
        }
    }
    if !(snr_grid[0] > 0.0) {
        return Err(Error::Usage("sweep grid must be positive"));
    }
    let scale = rician_moments(spec).m2;
    let dim = scheme.dimension();
    let eval = |snr: f64| -> Result<CurvePoint> {
        let rate_nats = scheme
            .rate(spec, snr)
            .map_err(|_| Error::NoConvergence { what: "rate evaluation in sweep", at: snr })?;
        Ok(CurvePoint {
            snr,
            rate_nats,
            spectral_eff: rate_nats / (LN_2 * dim),
            eb_n0_db: bit_energy_db(snr, rate_nats, scale)?,
        })
    };

    let mut points = Vec::with_capacity(snr_grid.len());
    for &snr in snr_grid {
        points.push(eval(snr)?);
    }
    let mut best = 0usize;
    for (i, p) in points.iter().enumerate() {
        if p.eb_n0_db < points[best].eb_n0_db {
            best = i;
        }
    }
    let mut min_pt = points[best];
    if min_pt.eb_n0_db.is_finite() {
        // Bracket with the neighboring cells and shrink on log-SNR far
        // past the 0.001 dB refinement target.
        let mut a = snr_grid[best.saturating_sub(1)].ln();
        let mut b = snr_grid[(best + 1).min(snr_grid.len() - 1)].ln();
        const INV_PHI: f64 = 0.6180339887498949;
        let mut c = b - INV_PHI * (b - a);
        let mut d = a + INV_PHI * (b - a);
        let mut fc = eval(c.exp())?;
        let mut fd = eval(d.exp())?;
        while b - a > 1e-6 {
            if fc.eb_n0_db < fd.eb_n0_db {
                if fc.eb_n0_db < min_pt.eb_n0_db {
                    min_pt = fc;
                }
                b = d;
                d = c;
                fd = fc;
                c = b - INV_PHI * (b - a);
                fc = eval(c.exp())?;
            } else {
                if fd.eb_n0_db < min_pt.eb_n0_db {
                    min_pt = fd;
                }
                a = c;
                c = d;
                fc = fd;
                d = a + INV_PHI * (b - a);
                fd = eval(d.exp())?;
            }
        }
        for p in [fc, fd] {
            if p.eb_n0_db < min_pt.eb_n0_db {
                min_pt = p;
            }
        }
    }
    Ok(SweepResult {
        points,
        min_eb_db: min_pt.eb_n0_db,
        se_at_min: min_pt.spectral_eff,
        snr_at_min: min_pt.snr,
    })
}
