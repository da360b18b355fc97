//! Flag and config-file resolution. Every command accepts `--config FILE`
//! with a JSON body whose fields mirror the flags; explicit flags win over
//! file values, file values win over built-in defaults.

use hdcap::channel::ChannelSpec;
use hdcap::metrics::Scheme;
use hdcap::oofsk::OofskConfig;
use hdcap::psk::PskConfig;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// CLI failure split by exit code: usage errors exit 1, numeric failures
/// exit 2 (simulation deviations are not errors and exit 3 in main).
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
}

impl From<hdcap::Error> for CliError {
    fn from(e: hdcap::Error) -> Self {
        match e {
            hdcap::Error::NoConvergence { .. } => CliError::Numeric(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    Psk,
    Oofsk,
    Fsk,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelArg {
    /// Unfaded channel with line-of-sight gain d.
    Awgn,
    /// Rician fading known to the receiver.
    Coherent,
    /// Rician fading unknown to both ends.
    Rician,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Optional JSON config file; unknown keys are rejected so typos surface
/// as usage errors instead of silently falling back to defaults.
#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub scheme: Option<SchemeKind>,
    pub m: Option<u32>,
    pub nu: Option<f64>,
    pub channel: Option<FileChannel>,
    pub snr_grid: Option<FileGrid>,
    pub output: Option<OutputFormat>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub snr_db: Option<f64>,
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileChannel {
    pub kind: Option<ChannelArg>,
    pub k: Option<f64>,
    pub omega: Option<f64>,
    pub d: Option<f64>,
    pub gamma_sq: Option<f64>,
}

#[derive(Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileGrid {
    pub min_db: Option<f64>,
    pub max_db: Option<f64>,
    pub points: Option<usize>,
}

pub fn load_file(path: Option<&Path>) -> Result<FileConfig, CliError> {
    let Some(path) = path else { return Ok(FileConfig::default()) };
    let body = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&body)
        .map_err(|e| usage(format!("config {}: {e}", path.display())))
}

/// Channel flags after merging; `resolve` turns them into a `ChannelSpec`.
pub struct ChannelInputs {
    pub kind: Option<ChannelArg>,
    pub k: Option<f64>,
    pub omega: Option<f64>,
    pub d: Option<f64>,
    pub gamma_sq: Option<f64>,
}

impl ChannelInputs {
    pub fn merged(self, file: Option<&FileChannel>) -> Self {
        let f = file;
        ChannelInputs {
            kind: self.kind.or_else(|| f.and_then(|c| c.kind)),
            k: self.k.or_else(|| f.and_then(|c| c.k)),
            omega: self.omega.or_else(|| f.and_then(|c| c.omega)),
            d: self.d.or_else(|| f.and_then(|c| c.d)),
            gamma_sq: self.gamma_sq.or_else(|| f.and_then(|c| c.gamma_sq)),
        }
    }

    /// Builds the channel. Fading channels take either the Rician factor
    /// form (--k with optional --omega, total power defaulting to 1) or
    /// the explicit component form (--d with --gamma-sq), never both.
    pub fn resolve(self) -> Result<(ChannelArg, ChannelSpec), CliError> {
        let kind = self.kind.unwrap_or(ChannelArg::Awgn);
        match kind {
            ChannelArg::Awgn => {
                if self.k.is_some() || self.omega.is_some() || self.gamma_sq.is_some() {
                    return Err(usage("--k/--omega/--gamma-sq apply to fading channels only"));
                }
                let spec = ChannelSpec::awgn(self.d.unwrap_or(1.0))?;
                Ok((kind, spec))
            }
            ChannelArg::Coherent | ChannelArg::Rician => {
                let explicit = self.d.is_some() || self.gamma_sq.is_some();
                let spec = if explicit {
                    if self.k.is_some() || self.omega.is_some() {
                        return Err(usage(
                            "give either --k/--omega or --d/--gamma-sq, not both",
                        ));
                    }
                    let (Some(d), Some(g)) = (self.d, self.gamma_sq) else {
                        return Err(usage("--d and --gamma-sq must be given together"));
                    };
                    match kind {
                        ChannelArg::Coherent => ChannelSpec::coherent(d, g)?,
                        _ => ChannelSpec::noncoherent(d, g)?,
                    }
                } else {
                    let k = self.k.unwrap_or(1.0);
                    let omega = self.omega.unwrap_or(1.0);
                    match kind {
                        ChannelArg::Coherent => ChannelSpec::coherent_rician_k(k, omega)?,
                        _ => ChannelSpec::noncoherent_rician_k(k, omega)?,
                    }
                };
                Ok((kind, spec))
            }
        }
    }
}

/// Scheme flags after merging. `nu` is rejected for psk, required for
/// oofsk, and pinned to 1 for fsk.
pub struct SchemeInputs {
    pub scheme: Option<SchemeKind>,
    pub m: Option<u32>,
    pub nu: Option<f64>,
}

impl SchemeInputs {
    pub fn merged(self, file: &FileConfig) -> Self {
        SchemeInputs {
            scheme: self.scheme.or(file.scheme),
            m: self.m.or(file.m),
            nu: self.nu.or(file.nu),
        }
    }

    pub fn resolve(self) -> Result<(SchemeKind, u32, Option<f64>, Scheme), CliError> {
        let kind = self.scheme.ok_or_else(|| usage("missing --scheme (psk|oofsk|fsk)"))?;
        let m = self.m.ok_or_else(|| usage("missing --m"))?;
        match kind {
            SchemeKind::Psk => {
                if self.nu.is_some() {
                    return Err(usage("--nu applies to oofsk and fsk only"));
                }
                Ok((kind, m, None, Scheme::Psk(PskConfig::new(m)?)))
            }
            SchemeKind::Oofsk => {
                let nu = self.nu.ok_or_else(|| usage("oofsk needs --nu in (0,1]"))?;
                Ok((kind, m, Some(nu), Scheme::Oofsk(OofskConfig::new(m, nu)?)))
            }
            SchemeKind::Fsk => {
                if let Some(nu) = self.nu {
                    if nu != 1.0 {
                        return Err(usage("fsk fixes --nu to 1; use oofsk for other duty cycles"));
                    }
                }
                Ok((kind, m, Some(1.0), Scheme::Oofsk(OofskConfig::fsk(m)?)))
            }
        }
    }
}

/// Grid bounds in dB with their defaults applied.
#[allow(clippy::neg_cmp_op_on_partial_ord)] // the negation rejects NaN bounds
pub fn resolve_grid(
    min_db: Option<f64>,
    max_db: Option<f64>,
    points: Option<usize>,
    file: &FileConfig,
) -> Result<Vec<f64>, CliError> {
    let fg = file.snr_grid.as_ref();
    let default = hdcap::metrics::SnrGrid::default();
    let min_db = min_db.or_else(|| fg.and_then(|g| g.min_db)).unwrap_or(default.min_db);
    let max_db = max_db.or_else(|| fg.and_then(|g| g.max_db)).unwrap_or(default.max_db);
    let points = points.or_else(|| fg.and_then(|g| g.points)).unwrap_or(default.points);
    if !(min_db < max_db) {
        return Err(usage("--min-db must be below --max-db"));
    }
    if points < 2 {
        return Err(usage("--points must be at least 2"));
    }
    let step = (max_db - min_db) / (points - 1) as f64;
    Ok((0..points).map(|i| min_db + i as f64 * step).collect())
}

pub fn resolve_output(flag: Option<OutputFormat>, file: &FileConfig) -> OutputFormat {
    flag.or(file.output).unwrap_or(OutputFormat::Csv)
}
