//! Monte Carlo oracle: transmits actual symbols through sampled channels,
//! runs the same hard decisions a receiver would, and compares the tallied
//! transition frequencies against the analytic formulas.
//!
//! Every trial gets its own counter-based RNG substream keyed by (seed,
//! trial index), so tallies are reproducible bit for bit, independent of
//! how trials are chunked, and mergeable by summation.

use crate::channel::{expect_over_fading, sample_fading, ChannelKind, ChannelSpec};
#[cfg(not(feature = "std"))]
use crate::math::FloatExt;
use crate::oofsk::{
    detector_params, transitions_awgn, transitions_noncoherent, OofskConfig, TransitionMatrix,
};
use crate::psk::{psk_transition_row, PskConfig};
use crate::rng::{RandomStream, RNG_ALGORITHM};
use crate::{Error, Result};
use alloc::vec::Vec;

const FRAC_1_SQRT_2: f64 = core::f64::consts::FRAC_1_SQRT_2;

/// Tally of simulated decisions with its analytic comparison.
///
/// `counts` and `empirical` are row-major `rows`×`cols` with the decided
/// symbol as the row and the sent symbol as the column; phase modulation
/// always sends the first symbol, so it has a single column. Empirical
/// entries are counts over their column total. `max_abs_dev` and
/// `sigma_bound` belong to the entry with the worst deviation-to-bound
/// ratio, so the run is consistent with the analytic law iff
/// `max_abs_dev <= sigma_bound`.
#[derive(Clone, Debug)]
pub struct SimReport {
    pub rows: usize,
    pub cols: usize,
    pub counts: Vec<u64>,
    pub empirical: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    /// RNG algorithm identifier, for cross-platform reproducibility claims.
    pub rng: &'static str,
    pub max_abs_dev: f64,
    /// Three binomial sigmas plus a 10-count floor at the worst entry.
    pub sigma_bound: f64,
}

impl SimReport {
    pub fn passes(&self) -> bool {
        self.max_abs_dev <= self.sigma_bound
    }
}

/// Per-entry acceptance bound: three binomial standard deviations plus a
/// floor of ten counts, which keeps near-zero analytic entries (sigma ~ 0)
/// from tripping on a handful of stray decisions.
fn entry_bound(p: f64, n: f64) -> f64 {
    3.0 * (p * (1.0 - p) / n).sqrt() + 10.0 / n
}

fn finalize(
    rows: usize,
    cols: usize,
    counts: Vec<u64>,
    analytic: &[f64],
    trials: u64,
    seed: u64,
) -> SimReport {
    debug_assert_eq!(analytic.len(), rows * cols);
    let mut empirical = alloc::vec![0.0f64; rows * cols];
    let mut max_abs_dev = 0.0;
    let mut sigma_bound = f64::INFINITY;
    let mut worst_ratio = -1.0;
    for inp in 0..cols {
        let n: u64 = (0..rows).map(|out| counts[out * cols + inp]).sum();
        if n == 0 {
            continue;
        }
        for out in 0..rows {
            let idx = out * cols + inp;
            empirical[idx] = counts[idx] as f64 / n as f64;
            let dev = (empirical[idx] - analytic[idx]).abs();
            let bound = entry_bound(analytic[idx], n as f64);
            if dev / bound > worst_ratio {
                worst_ratio = dev / bound;
                max_abs_dev = dev;
                sigma_bound = bound;
            }
        }
    }
    SimReport { rows, cols, counts, empirical, trials, seed, rng: RNG_ALGORITHM, max_abs_dev, sigma_bound }
}

fn check_sim_args(snr: f64, trials: u64) -> Result<()> {
    if !(snr.is_finite() && snr >= 0.0) {
        return Err(Error::Domain("snr must be finite and >= 0"));
    }
    if trials == 0 {
        return Err(Error::Domain("need at least one trial"));
    }
    Ok(())
}

/// Simulates phase modulation: sends the zero-phase point at energy snr,
/// applies the sampled channel and unit complex noise, and sectorizes the
/// received phase. Known fades are derotated before sectorization;
/// unknown ones are not. Column = the sent symbol, rows = decisions.
pub fn simulate_psk(
    cfg: &PskConfig,
    spec: &ChannelSpec,
    snr: f64,
    trials: u64,
    seed: u64,
) -> Result<SimReport> {
    check_sim_args(snr, trials)?;
    let m = cfg.m() as usize;
    let amp = snr.sqrt();
    let coherent = spec.kind() == ChannelKind::CoherentFading;
    let mut counts = alloc::vec![0u64; m];
    for t in 0..trials {
        let mut stream = RandomStream::substream(seed, t);
        let (hr, hi) = sample_fading(spec, &mut stream);
        let (z1, z2) = stream.normal_pair();
        let mut rr = hr * amp + z1 * FRAC_1_SQRT_2;
        let mut ri = hi * amp + z2 * FRAC_1_SQRT_2;
        if coherent {
            // Rotate by h*/|h|; the positive scale cannot move the sector.
            (rr, ri) = (rr * hr + ri * hi, ri * hr - rr * hi);
        }
        counts[sectorize(rr, ri, m)] += 1;
    }
    let analytic = analytic_psk_row(cfg, spec, snr)?;
    Ok(finalize(m, 1, counts, &analytic, trials, seed))
}

/// Decision sector of a received point: sector l covers phases within
/// π/M of the l-th constellation point, with the first point at phase 0.
/// Returns l − 1.
fn sectorize(rr: f64, ri: f64, m: usize) -> usize {
    let theta = ri.atan2(rr);
    let mf = m as f64;
    let k = ((theta * mf / core::f64::consts::TAU) + 0.5).floor() as i64;
    k.rem_euclid(m as i64) as usize
}

fn analytic_psk_row(cfg: &PskConfig, spec: &ChannelSpec, snr: f64) -> Result<Vec<f64>> {
    if spec.kind() == ChannelKind::CoherentFading {
        let m = cfg.m() as usize;
        let mut row = Vec::with_capacity(m);
        for l in 0..m {
            row.push(expect_over_fading(spec, |u| {
                Ok(psk_transition_row(cfg, spec, snr, Some(u))?.p[l])
            })?);
        }
        Ok(row)
    } else {
        Ok(psk_transition_row(cfg, spec, snr, None)?.p)
    }
}

/// Simulates on-off tone keying: draws the input from the on-off prior,
/// puts energy snr/ν on the chosen tone, and energy-detects against the
/// MAP threshold (recomputed per realization when the fade is known).
/// Max-energy ties break uniformly at random.
pub fn simulate_oofsk(
    cfg: &OofskConfig,
    spec: &ChannelSpec,
    snr: f64,
    trials: u64,
    seed: u64,
) -> Result<SimReport> {
    check_sim_args(snr, trials)?;
    let m = cfg.m() as usize;
    let dim = m + 1;
    let nu = cfg.nu();
    let amp = (snr / nu).sqrt();
    let coherent = spec.kind() == ChannelKind::CoherentFading;
    let fixed_tau = if coherent { 0.0 } else { detector_params(cfg, snr, spec, None)?.tau };
    let mut counts = alloc::vec![0u64; dim * dim];
    for t in 0..trials {
        let mut stream = RandomStream::substream(seed, t);
        let inp = if stream.uniform() < 1.0 - nu { 0 } else { 1 + stream.below(m as u64) as usize };
        let (hr, hi) = sample_fading(spec, &mut stream);
        let tau = if coherent {
            detector_params(cfg, snr, spec, Some(hr * hr + hi * hi))?.tau
        } else {
            fixed_tau
        };
        let mut best = f64::NEG_INFINITY;
        let mut arg = 0usize;
        let mut ties = 0u64;
        for tone in 1..=m {
            let (z1, z2) = stream.normal_pair();
            let (mut er, mut ei) = (z1 * FRAC_1_SQRT_2, z2 * FRAC_1_SQRT_2);
            if tone == inp {
                er += hr * amp;
                ei += hi * amp;
            }
            let e = er * er + ei * ei;
            if e > best {
                best = e;
                arg = tone;
                ties = 1;
            } else if e == best {
                ties += 1;
                if stream.below(ties) == 0 {
                    arg = tone;
                }
            }
        }
        let out = if best > tau { arg } else { 0 };
        counts[out * dim + inp] += 1;
    }
    let analytic = analytic_oofsk_matrix(cfg, spec, snr)?;
    Ok(finalize(dim, dim, counts, &analytic, trials, seed))
}

fn analytic_oofsk_matrix(cfg: &OofskConfig, spec: &ChannelSpec, snr: f64) -> Result<Vec<f64>> {
    let m = cfg.m() as usize;
    let t = match spec.kind() {
        ChannelKind::Awgn => transitions_awgn(cfg, spec.d() * spec.d() * snr)?,
        ChannelKind::NoncoherentRician => transitions_noncoherent(cfg, snr, spec)?,
        ChannelKind::CoherentFading => {
            // The conditional matrix keeps the five-entry symmetry, so the
            // marginal is assembled from five scalar expectations.
            let avg = |out: usize, inp: usize| {
                expect_over_fading(spec, |u| Ok(transitions_awgn(cfg, u * snr)?.entry(out, inp)))
            };
            let p00 = avg(0, 0)?;
            let pl0 = avg(1, 0)?;
            let p0l = avg(0, 1)?;
            let pll = avg(1, 1)?;
            let plm = if m >= 2 { avg(2, 1)? } else { 0.0 };
            TransitionMatrix::from_five(m, p00, pl0, pll, p0l, plm)
        }
    };
    let dim = m + 1;
    let mut flat = alloc::vec![0.0f64; dim * dim];
    for out in 0..dim {
        for inp in 0..dim {
            flat[out * dim + inp] = t.entry(out, inp);
        }
    }
    Ok(flat)
}

fn xlnx(p: f64) -> f64 {
    if p < 1e-300 {
        0.0
    } else {
        p * p.ln()
    }
}

/// Mutual information in nats of the joint law prior × transitions.
/// Accepts any column-stochastic matrix, so it cross-checks the closed
/// rate formulas and scores empirical tallies alike.
pub fn empirical_mi(t: &TransitionMatrix, prior: &[f64]) -> Result<f64> {
    let dim = t.dim();
    if prior.len() != dim {
        return Err(Error::Usage("prior length must match the matrix dimension"));
    }
    let total: f64 = prior.iter().sum();
    if !((total - 1.0).abs() <= 1e-9) || prior.iter().any(|&p| !(p >= 0.0)) {
        return Err(Error::Domain("prior must be a probability vector"));
    }
    let mut marginal = alloc::vec![0.0f64; dim];
    for (out, m) in marginal.iter_mut().enumerate() {
        for (inp, &p) in prior.iter().enumerate() {
            *m += p * t.entry(out, inp);
        }
    }
    let mut h_out = 0.0;
    let mut h_cond = 0.0;
    for (out, &m) in marginal.iter().enumerate() {
        h_out -= xlnx(m);
        for (inp, &p) in prior.iter().enumerate() {
            h_cond -= p * xlnx(t.entry(out, inp));
        }
    }
    Ok((h_out - h_cond).max(0.0))
}

/// Empirical matrix of an OOFSK report, for feeding [`empirical_mi`].
pub fn report_matrix(report: &SimReport) -> Result<TransitionMatrix> {
    if report.rows != report.cols {
        return Err(Error::Usage("report is not a square transition matrix"));
    }
    TransitionMatrix::from_raw(report.rows, report.empirical.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oofsk::oofsk_rate;
    use crate::specfun::gaussian_q;

    #[test]
    fn psk_uniform_at_zero_snr() {
        let cfg = PskConfig::new(4).unwrap();
        let spec = ChannelSpec::awgn(1.0).unwrap();
        let r = simulate_psk(&cfg, &spec, 0.0, 1_000_000, 11).unwrap();
        assert!(r.passes());
        assert_eq!(r.counts.iter().sum::<u64>(), r.trials);
        let bound = 3.0 * (0.25f64 * 0.75 / 1e6).sqrt();
        for &e in &r.empirical {
            assert!((e - 0.25).abs() <= bound + 1e-5);
        }
    }

    // Binary phase flip probability is Q(sqrt(2 snr)) on the nonfading
    // channel; ten million trials pin it to ~4e-4.
    #[test]
    fn psk_binary_crossover_matches_gaussian_tail() {
        let cfg = PskConfig::new(2).unwrap();
        let spec = ChannelSpec::awgn(1.0).unwrap();
        let r = simulate_psk(&cfg, &spec, 1.0, 10_000_000, 12).unwrap();
        let p = gaussian_q(2.0f64.sqrt());
        let sigma = (p * (1.0 - p) / 1e7).sqrt();
        assert!((r.empirical[1] - p).abs() <= 3.0 * sigma);
        assert!(r.passes());
    }

    #[test]
    fn psk_repeats_bit_identically_and_seeds_differ() {
        let cfg = PskConfig::new(8).unwrap();
        let spec = ChannelSpec::noncoherent_rician_k(1.0, 1.0).unwrap();
        let a = simulate_psk(&cfg, &spec, 2.0, 40_000, 77).unwrap();
        let b = simulate_psk(&cfg, &spec, 2.0, 40_000, 77).unwrap();
        let c = simulate_psk(&cfg, &spec, 2.0, 40_000, 78).unwrap();
        assert_eq!(a.counts, b.counts);
        assert_ne!(a.counts, c.counts);
        assert_eq!(a.rng, "splitmix64");
    }

    #[test]
    fn psk_coherent_detection_tracks_analytic_row() {
        let cfg = PskConfig::new(4).unwrap();
        let spec = ChannelSpec::coherent_rician_k(1.0, 1.0).unwrap();
        let r = simulate_psk(&cfg, &spec, 1.0, 1_000_000, 13).unwrap();
        assert!(r.passes());
        // Known fade: the detector derotates, so sectors 2 and 4 (the
        // neighbors of the sent point) are hit symmetrically.
        assert!((r.empirical[1] - r.empirical[3]).abs() < 0.01);
    }

    #[test]
    fn oofsk_always_on_never_emits_off() {
        let cfg = OofskConfig::fsk(4).unwrap();
        let spec = ChannelSpec::awgn(1.0).unwrap();
        let r = simulate_oofsk(&cfg, &spec, 1.0, 100_000, 21).unwrap();
        assert!(r.passes());
        for inp in 0..5 {
            assert_eq!(r.counts[inp], 0); // off never decided
        }
        for out in 0..5 {
            assert_eq!(r.counts[out * 5], 0); // off never sent
        }
    }

    #[test]
    fn oofsk_reference_point_within_bounds() {
        let cfg = OofskConfig::new(8, 0.1).unwrap();
        let spec = ChannelSpec::awgn(1.0).unwrap();
        let r = simulate_oofsk(&cfg, &spec, 1.0, 1_000_000, 22).unwrap();
        assert!(r.passes());
        assert_eq!(r.counts.iter().sum::<u64>(), r.trials);
    }

    #[test]
    fn oofsk_noncoherent_rayleigh_within_bounds() {
        let cfg = OofskConfig::new(4, 0.2).unwrap();
        let spec = ChannelSpec::noncoherent(0.0, 1.0).unwrap();
        let r = simulate_oofsk(&cfg, &spec, 2.0, 1_000_000, 23).unwrap();
        assert!(r.passes());
    }

    #[test]
    fn oofsk_coherent_adapts_threshold_per_fade() {
        let cfg = OofskConfig::new(4, 0.5).unwrap();
        let spec = ChannelSpec::coherent_rician_k(1.0, 1.0).unwrap();
        let r = simulate_oofsk(&cfg, &spec, 2.0, 200_000, 24).unwrap();
        assert!(r.passes());
    }

    #[test]
    fn mi_of_identity_channel_is_log_dim() {
        let dim = 3;
        let mut p = alloc::vec![0.0f64; dim * dim];
        for i in 0..dim {
            p[i * dim + i] = 1.0;
        }
        let t = TransitionMatrix::from_raw(dim, p).unwrap();
        let prior = [1.0 / 3.0; 3];
        let mi = empirical_mi(&t, &prior).unwrap();
        assert!((mi - 3.0f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn mi_of_constant_columns_is_zero() {
        let dim = 3;
        let mut p = alloc::vec![0.0f64; dim * dim];
        for out in 0..dim {
            for inp in 0..dim {
                p[out * dim + inp] = [0.5, 0.3, 0.2][out];
            }
        }
        let t = TransitionMatrix::from_raw(dim, p).unwrap();
        let mi = empirical_mi(&t, &[0.2, 0.5, 0.3]).unwrap();
        assert!(mi < 1e-15);
    }

    // Two code paths to the same mutual information: the symmetry-reduced
    // rate formula and the generic prior x matrix computation.
    #[test]
    fn mi_agrees_with_rate_formula() {
        let cfg = OofskConfig::new(8, 0.1).unwrap();
        let t = transitions_awgn(&cfg, 1.0).unwrap();
        let mut prior = alloc::vec![0.1f64 / 8.0; 9];
        prior[0] = 0.9;
        let mi = empirical_mi(&t, &prior).unwrap();
        let rate = oofsk_rate(&cfg, &t).unwrap();
        assert!((mi - rate).abs() < 1e-12);
    }

    #[test]
    fn mi_rejects_bad_inputs() {
        let cfg = OofskConfig::new(4, 0.5).unwrap();
        let t = transitions_awgn(&cfg, 1.0).unwrap();
        assert!(empirical_mi(&t, &[0.5, 0.5]).is_err());
        assert!(empirical_mi(&t, &[0.5, 0.2, 0.1, 0.1, 0.2]).is_err());
        let bad = [0.5, 0.2, 0.1, 0.1, 0.05];
        assert!(empirical_mi(&t, &bad).is_err());
    }

    // More trials, tighter empirical mutual information.
    #[test]
    fn empirical_mi_converges_with_trials() {
        let cfg = OofskConfig::new(4, 0.3).unwrap();
        let spec = ChannelSpec::awgn(1.0).unwrap();
        let t = transitions_awgn(&cfg, 2.0).unwrap();
        let rate = oofsk_rate(&cfg, &t).unwrap();
        let mut prior = alloc::vec![0.3f64 / 4.0; 5];
        prior[0] = 0.7;
        let mut errs = [0.0f64; 2];
        for (i, trials) in [10_000u64, 1_000_000].into_iter().enumerate() {
            let r = simulate_oofsk(&cfg, &spec, 2.0, trials, 31).unwrap();
            let mi = empirical_mi(&report_matrix(&r).unwrap(), &prior).unwrap();
            errs[i] = (mi - rate).abs();
        }
        assert!(errs[1] < errs[0]);

        let cfg = PskConfig::new(4).unwrap();
        let row = psk_transition_row(&cfg, &spec, 1.0, None).unwrap().p;
        // Circulant lift of the one-column law, so the same MI helper
        // applies; uniform input keeps it equal to the symmetric capacity.
        let mut flat = alloc::vec![0.0f64; 16];
        for out in 0..4 {
            for inp in 0..4 {
                flat[out * 4 + inp] = row[(out + 4 - inp) % 4];
            }
        }
        let analytic = empirical_mi(&TransitionMatrix::from_raw(4, flat).unwrap(), &[0.25; 4]).unwrap();
        let mut errs = [0.0f64; 2];
        for (i, trials) in [10_000u64, 1_000_000].into_iter().enumerate() {
            let r = simulate_psk(&cfg, &spec, 1.0, trials, 32).unwrap();
            let mut flat = alloc::vec![0.0f64; 16];
            for out in 0..4 {
                for inp in 0..4 {
                    flat[out * 4 + inp] = r.empirical[(out + 4 - inp) % 4];
                }
            }
            let mi = empirical_mi(&TransitionMatrix::from_raw(4, flat).unwrap(), &[0.25; 4]).unwrap();
            errs[i] = (mi - analytic).abs();
        }
        assert!(errs[1] < errs[0]);
    }
}
