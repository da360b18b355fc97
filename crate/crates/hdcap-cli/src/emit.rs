//! CSV and JSON emitters. CSV rows use 17-significant-digit scientific
//! notation so parsed values reproduce the binary doubles exactly; JSON
//! uses shortest-round-trip floats. Non-finite quantities (a bit energy
//! with zero rate, the 3-PSK curvature) print as `inf` in CSV and `null`
//! in JSON.

use hdcap::metrics::SweepResult;
use hdcap::psk::{Curvature, LowSnrSummary};
use hdcap::simcheck::SimReport;
use serde::Serialize;

use crate::config::{ChannelArg, SchemeKind};

pub fn fmt_f(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// Channel block echoed into every JSON document.
#[derive(Clone, Copy, Serialize)]
pub struct ChannelEcho {
    pub kind: ChannelArg,
    pub d: f64,
    pub gamma_sq: f64,
}

#[derive(Serialize)]
struct CurvePointJson {
    snr_db: f64,
    rate_nats: f64,
    spectral_eff: f64,
    eb_n0_db: Option<f64>,
}

#[derive(Serialize)]
struct CurveSummaryJson {
    min_eb_db: Option<f64>,
    se_at_min: f64,
    /// dB, like every SNR that crosses the CLI boundary.
    snr_at_min: f64,
}

#[derive(Serialize)]
struct CurveJson<'a> {
    schema: u32,
    command: &'static str,
    scheme: SchemeKind,
    m: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    nu: Option<f64>,
    channel: &'a ChannelEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<Vec<CurvePointJson>>,
    summary: CurveSummaryJson,
}

pub struct CurveEmit<'a> {
    pub scheme: SchemeKind,
    pub m: u32,
    pub nu: Option<f64>,
    pub channel: ChannelEcho,
    pub grid_db: &'a [f64],
    pub result: &'a SweepResult,
    pub quiet: bool,
}

pub fn curve_csv(out: &CurveEmit) -> String {
    let mut s = String::new();
    if !out.quiet {
        s.push_str("snr_db,rate_nats,spectral_eff,eb_n0_db\n");
        for (db, p) in out.grid_db.iter().zip(&out.result.points) {
            s.push_str(&format!(
                "{},{},{},{}\n",
                fmt_f(*db),
                fmt_f(p.rate_nats),
                fmt_f(p.spectral_eff),
                fmt_f(p.eb_n0_db)
            ));
        }
    }
    s.push_str(&curve_summary_lines(out.result));
    s
}

fn curve_summary_lines(r: &SweepResult) -> String {
    format!(
        "# min_eb_db={}\n# se_at_min={}\n# snr_at_min={}\n",
        fmt_f(r.min_eb_db),
        fmt_f(r.se_at_min),
        fmt_f(10.0 * r.snr_at_min.log10())
    )
}

pub fn curve_json(out: &CurveEmit) -> String {
    let points = (!out.quiet).then(|| {
        out.grid_db
            .iter()
            .zip(&out.result.points)
            .map(|(db, p)| CurvePointJson {
                snr_db: *db,
                rate_nats: p.rate_nats,
                spectral_eff: p.spectral_eff,
                eb_n0_db: finite(p.eb_n0_db),
            })
            .collect()
    });
    let doc = CurveJson {
        schema: 1,
        command: "curve",
        scheme: out.scheme,
        m: out.m,
        nu: out.nu,
        channel: &out.channel,
        points,
        summary: CurveSummaryJson {
            min_eb_db: finite(out.result.min_eb_db),
            se_at_min: out.result.se_at_min,
            snr_at_min: 10.0 * out.result.snr_at_min.log10(),
        },
    };
    serde_json::to_string(&doc).expect("serialization cannot fail")
}

/// One zero-SNR table row; `m: None` is the continuous-phase limit.
pub struct LowsnrRow {
    pub m: Option<u32>,
    pub summary: LowSnrSummary,
}

#[derive(Serialize)]
struct LowsnrRowJson {
    m: Option<u32>,
    c_dot0: f64,
    c_ddot0: Option<f64>,
    eb_zero_se_db: f64,
    s0: f64,
}

#[derive(Serialize)]
struct LowsnrJson<'a> {
    schema: u32,
    command: &'static str,
    channel: &'a ChannelEcho,
    rows: Vec<LowsnrRowJson>,
}

fn curvature_value(c: Curvature) -> Option<f64> {
    match c {
        Curvature::Finite(v) => Some(v),
        Curvature::PlusInfinity => None,
    }
}

pub fn lowsnr_csv(rows: &[LowsnrRow]) -> String {
    let mut s = String::from("m,c_dot0,c_ddot0,eb_zero_se_db,s0\n");
    for r in rows {
        let m = r.m.map_or("inf".into(), |m| m.to_string());
        let c2 = curvature_value(r.summary.c_ddot0).map_or("inf".into(), fmt_f);
        s.push_str(&format!(
            "{m},{},{c2},{},{}\n",
            fmt_f(r.summary.c_dot0),
            fmt_f(r.summary.eb_n0_zero_se_db),
            fmt_f(r.summary.s0)
        ));
    }
    s
}

pub fn lowsnr_json(channel: &ChannelEcho, rows: &[LowsnrRow]) -> String {
    let rows = rows
        .iter()
        .map(|r| LowsnrRowJson {
            m: r.m,
            c_dot0: r.summary.c_dot0,
            c_ddot0: curvature_value(r.summary.c_ddot0),
            eb_zero_se_db: r.summary.eb_n0_zero_se_db,
            s0: r.summary.s0,
        })
        .collect();
    let doc = LowsnrJson { schema: 1, command: "lowsnr", channel, rows };
    serde_json::to_string(&doc).expect("serialization cannot fail")
}

#[derive(Serialize)]
struct SimulateJson<'a> {
    schema: u32,
    command: &'static str,
    scheme: SchemeKind,
    m: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    nu: Option<f64>,
    channel: &'a ChannelEcho,
    snr_db: f64,
    trials: u64,
    seed: u64,
    rng: &'a str,
    rows: usize,
    cols: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    counts: Option<&'a [u64]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    empirical: Option<&'a [f64]>,
    max_abs_dev: f64,
    sigma_bound: f64,
    pass: bool,
}

pub struct SimulateEmit<'a> {
    pub scheme: SchemeKind,
    pub m: u32,
    pub nu: Option<f64>,
    pub channel: ChannelEcho,
    pub snr_db: f64,
    pub report: &'a SimReport,
    pub quiet: bool,
}

pub fn simulate_json(out: &SimulateEmit) -> String {
    let r = out.report;
    let doc = SimulateJson {
        schema: 1,
        command: "simulate",
        scheme: out.scheme,
        m: out.m,
        nu: out.nu,
        channel: &out.channel,
        snr_db: out.snr_db,
        trials: r.trials,
        seed: r.seed,
        rng: r.rng,
        rows: r.rows,
        cols: r.cols,
        counts: (!out.quiet).then_some(r.counts.as_slice()),
        empirical: (!out.quiet).then_some(r.empirical.as_slice()),
        max_abs_dev: r.max_abs_dev,
        sigma_bound: r.sigma_bound,
        pass: r.passes(),
    };
    serde_json::to_string(&doc).expect("serialization cannot fail")
}

pub fn simulate_csv(out: &SimulateEmit) -> String {
    let r = out.report;
    let mut s = String::new();
    if !out.quiet {
        s.push_str("decision,sent,count,empirical\n");
        for outp in 0..r.rows {
            for inp in 0..r.cols {
                let idx = outp * r.cols + inp;
                s.push_str(&format!(
                    "{outp},{inp},{},{}\n",
                    r.counts[idx],
                    fmt_f(r.empirical[idx])
                ));
            }
        }
    }
    s.push_str(&format!(
        "# trials={} seed={} rng={}\n# max_abs_dev={}\n# sigma_bound={}\n# pass={}\n",
        r.trials,
        r.seed,
        r.rng,
        fmt_f(r.max_abs_dev),
        fmt_f(r.sigma_bound),
        r.passes()
    ));
    s
}
