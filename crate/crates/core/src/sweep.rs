//! Parameter sweeps and cutoff studies, with CSV/JSON emission.

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closed_forms::{
    correlator_closed, dg_boson_closed, dg_boson_ub_closed, dg_fermion_closed, trace_norm_ub_closed, FermionSide,
    TraceNormVariant,
};
use crate::convergence::{study, ConvergenceSeries};
use crate::correlations::{correlator_xx, geometric_discord, quantum_discord, trace_norm_to_chi, DiscordSide};
use crate::error::{Error, Result};
use crate::optimize::OptimizerConfig;
use crate::states::{boson_rho_ar, fermion_rho_ar, tail_mass_boson, Statistics, TruncationPolicy, TruncationSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!("unknown output format {other:?}"))),
        }
    }
}

/// Which measured party's columns are filled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideSelection {
    A,
    B,
    Both,
}

impl SideSelection {
    fn a(self) -> bool {
        self != SideSelection::B
    }

    fn b(self) -> bool {
        self != SideSelection::A
    }
}

impl FromStr for SideSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(SideSelection::A),
            "b" => Ok(SideSelection::B),
            "both" => Ok(SideSelection::Both),
            other => Err(Error::Config(format!("unknown side {other:?}"))),
        }
    }
}

impl fmt::Display for SideSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SideSelection::A => "a",
            SideSelection::B => "b",
            SideSelection::Both => "both",
        })
    }
}

/// Upper end of the parameter domain for each statistics.
pub fn param_domain(statistics: Statistics) -> (f64, f64, &'static str) {
    match statistics {
        Statistics::Boson => (0.0, 1.0, "t in [0, 1)"),
        Statistics::Fermion => (0.0, FRAC_PI_4, "r in [0, pi/4]"),
    }
}

fn check_param(statistics: Statistics, p: f64) -> Result<()> {
    let (lo, hi, domain) = param_domain(statistics);
    let ok = match statistics {
        Statistics::Boson => (lo..hi).contains(&p),
        Statistics::Fermion => (lo..=hi + 1e-12).contains(&p),
    };
    if ok && p.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            name: "param",
            value: p,
            domain,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub statistics: Statistics,
    pub param_min: f64,
    pub param_max: f64,
    pub steps: usize,
    pub truncation: TruncationSpec,
    pub optimizer: OptimizerConfig,
    pub sides: SideSelection,
    pub format: OutputFormat,
    /// Largest tail mass a fixed-cutoff point may carry before it is flagged.
    pub tolerance: f64,
}

impl RunConfig {
    pub fn new(statistics: Statistics, param_min: f64, param_max: f64, steps: usize) -> Self {
        RunConfig {
            statistics,
            param_min,
            param_max,
            steps,
            truncation: TruncationSpec::fixed(128),
            optimizer: OptimizerConfig::default(),
            sides: SideSelection::Both,
            format: OutputFormat::Csv,
            tolerance: 1e-8,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::Config(format!("steps must be at least 2, got {}", self.steps)));
        }
        check_param(self.statistics, self.param_min)?;
        check_param(self.statistics, self.param_max)?;
        if self.param_min > self.param_max {
            return Err(Error::Config(format!("empty range [{}, {}]", self.param_min, self.param_max)));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::Config(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        self.truncation.validate()?;
        self.optimizer.validate()
    }

    pub fn params(&self) -> Vec<f64> {
        let span = self.param_max - self.param_min;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.param_max
                } else {
                    self.param_min + span * i as f64 / (self.steps - 1) as f64
                }
            })
            .collect()
    }
}

/// One sweep grid point. Columns that do not apply to the statistics or the
/// selected side are empty.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub statistics: Statistics,
    pub param: f64,
    /// Fock cutoff used for Rob's mode; 1 for fermions.
    pub cutoff: usize,
    pub tail_mass: f64,
    #[serde(rename = "d1_A")]
    pub d1_a: Option<f64>,
    /// Fock-basis upper bound for bosons, full minimisation for fermions.
    #[serde(rename = "d1_R")]
    pub d1_r: Option<f64>,
    #[serde(rename = "dg_A_numeric")]
    pub dg_a_numeric: Option<f64>,
    #[serde(rename = "dg_A_closed")]
    pub dg_a_closed: Option<f64>,
    #[serde(rename = "two_dg_A")]
    pub two_dg_a: Option<f64>,
    pub dg_ub: Option<f64>,
    #[serde(rename = "dg_R_numeric")]
    pub dg_r_numeric: Option<f64>,
    #[serde(rename = "dg_R_bound_or_closed")]
    pub dg_r_bound_or_closed: Option<f64>,
    #[serde(rename = "two_dg_R")]
    pub two_dg_r: Option<f64>,
    pub trace_norm_numeric: Option<f64>,
    pub trace_norm_paper_variant: Option<f64>,
    pub trace_norm_squared_variant: Option<f64>,
    pub xx_numeric: Option<f64>,
    pub xx_closed: Option<f64>,
    #[serde(rename = "delta_dg_A")]
    pub delta_dg_a: Option<f64>,
    #[serde(rename = "delta_dg_R")]
    pub delta_dg_r: Option<f64>,
    pub delta_trace_norm_paper: Option<f64>,
    pub delta_trace_norm_squared: Option<f64>,
    pub delta_xx: Option<f64>,
    pub converged: bool,
    pub abandoned_cutoff: Option<usize>,
}

fn abs_diff(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    Some((a? - b?).abs())
}

impl SweepRecord {
    fn empty(statistics: Statistics, param: f64, cutoff: usize, tail_mass: f64) -> Self {
        SweepRecord {
            statistics,
            param,
            cutoff,
            tail_mass,
            d1_a: None,
            d1_r: None,
            dg_a_numeric: None,
            dg_a_closed: None,
            two_dg_a: None,
            dg_ub: None,
            dg_r_numeric: None,
            dg_r_bound_or_closed: None,
            two_dg_r: None,
            trace_norm_numeric: None,
            trace_norm_paper_variant: None,
            trace_norm_squared_variant: None,
            xx_numeric: None,
            xx_closed: None,
            delta_dg_a: None,
            delta_dg_r: None,
            delta_trace_norm_paper: None,
            delta_trace_norm_squared: None,
            delta_xx: None,
            converged: true,
            abandoned_cutoff: None,
        }
    }

    fn numeric_fields(&self) -> Vec<Option<f64>> {
        vec![
            Some(self.param),
            Some(self.tail_mass),
            self.d1_a,
            self.d1_r,
            self.dg_a_numeric,
            self.dg_a_closed,
            self.two_dg_a,
            self.dg_ub,
            self.dg_r_numeric,
            self.dg_r_bound_or_closed,
            self.two_dg_r,
            self.trace_norm_numeric,
            self.trace_norm_paper_variant,
            self.trace_norm_squared_variant,
            self.xx_numeric,
            self.xx_closed,
            self.delta_dg_a,
            self.delta_dg_r,
            self.delta_trace_norm_paper,
            self.delta_trace_norm_squared,
            self.delta_xx,
        ]
    }

    pub fn recompute_deltas(&mut self) {
        self.delta_dg_a = abs_diff(self.dg_a_numeric, self.dg_a_closed);
        self.delta_dg_r = abs_diff(self.dg_r_numeric, self.dg_r_bound_or_closed);
        self.delta_trace_norm_paper = abs_diff(self.trace_norm_numeric, self.trace_norm_paper_variant);
        self.delta_trace_norm_squared = abs_diff(self.trace_norm_numeric, self.trace_norm_squared_variant);
        self.delta_xx = abs_diff(self.xx_numeric, self.xx_closed);
    }

    pub fn validate(&self) -> Result<()> {
        if self.numeric_fields().iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Record(format!("non-finite value in record at param {}", self.param)));
        }
        if !self.converged && self.abandoned_cutoff.is_none() {
            return Err(Error::Record(format!("unconverged record at param {} lacks its cutoff", self.param)));
        }
        Ok(())
    }
}

fn flag(record: &mut SweepRecord, cutoff: usize) {
    record.converged = false;
    record.abandoned_cutoff = Some(cutoff);
}

fn boson_record(t: f64, cfg: &RunConfig) -> Result<SweepRecord> {
    let (cutoff, exhausted) = match cfg.truncation.resolve_boson(t) {
        Ok(n) => (n, false),
        Err(Error::TruncationExhausted { cap, .. }) => (cap, true),
        Err(e) => return Err(e),
    };
    let trunc = TruncationSpec::fixed(cutoff);
    let tail = tail_mass_boson(t, cutoff);
    let mut rec = SweepRecord::empty(Statistics::Boson, t, cutoff, tail);
    let rho = boson_rho_ar(t, trunc)?;
    let opt = &cfg.optimizer;
    let mut optimizer_ok = true;

    if cfg.sides.a() {
        let d1 = quantum_discord(&rho, DiscordSide::A, opt)?;
        let dg = geometric_discord(&rho, DiscordSide::A, opt)?;
        optimizer_ok &= d1.converged && dg.converged;
        rec.d1_a = Some(d1.value);
        rec.dg_a_numeric = Some(dg.value);
        rec.dg_a_closed = Some(dg_boson_closed(t)?);
        rec.two_dg_a = Some(2.0 * dg.value);
        rec.dg_ub = Some(dg_boson_ub_closed(t)?);
    }
    if cfg.sides.b() {
        let d1 = quantum_discord(&rho, DiscordSide::BFockBound, opt)?;
        let dg = geometric_discord(&rho, DiscordSide::BFockBound, opt)?;
        rec.d1_r = Some(d1.value);
        rec.dg_r_numeric = Some(dg.value);
        rec.dg_r_bound_or_closed = Some(dg_boson_ub_closed(t)?);
        rec.two_dg_r = Some(2.0 * dg.value);
    }
    rec.trace_norm_numeric = Some(trace_norm_to_chi(t, trunc)?);
    rec.trace_norm_paper_variant = Some(trace_norm_ub_closed(t, TraceNormVariant::PaperPrefactor)?);
    rec.trace_norm_squared_variant = Some(trace_norm_ub_closed(t, TraceNormVariant::SquaredPrefactor)?);
    rec.xx_numeric = Some(correlator_xx(&rho)?);
    rec.xx_closed = Some(correlator_closed(t)?);
    rec.recompute_deltas();

    let tail_ok = match cfg.truncation.policy {
        TruncationPolicy::Fixed => tail <= cfg.tolerance,
        TruncationPolicy::Adaptive { .. } => !exhausted,
    };
    if !(tail_ok && optimizer_ok) {
        flag(&mut rec, cutoff);
    }
    Ok(rec)
}

fn fermion_record(r: f64, cfg: &RunConfig) -> Result<SweepRecord> {
    let r = r.min(FRAC_PI_4);
    let mut rec = SweepRecord::empty(Statistics::Fermion, r, 1, 0.0);
    let rho = fermion_rho_ar(r)?;
    let opt = &cfg.optimizer;
    let mut optimizer_ok = true;
    if cfg.sides.a() {
        let d1 = quantum_discord(&rho, DiscordSide::A, opt)?;
        let dg = geometric_discord(&rho, DiscordSide::A, opt)?;
        optimizer_ok &= d1.converged && dg.converged;
        rec.d1_a = Some(d1.value);
        rec.dg_a_numeric = Some(dg.value);
        rec.dg_a_closed = Some(dg_fermion_closed(r, FermionSide::A)?);
        rec.two_dg_a = Some(2.0 * dg.value);
    }
    if cfg.sides.b() {
        let d1 = quantum_discord(&rho, DiscordSide::BBloch, opt)?;
        let dg = geometric_discord(&rho, DiscordSide::BBloch, opt)?;
        optimizer_ok &= d1.converged && dg.converged;
        rec.d1_r = Some(d1.value);
        rec.dg_r_numeric = Some(dg.value);
        rec.dg_r_bound_or_closed = Some(dg_fermion_closed(r, FermionSide::R)?);
        rec.two_dg_r = Some(2.0 * dg.value);
    }
    rec.recompute_deltas();
    if !optimizer_ok {
        flag(&mut rec, 1);
    }
    Ok(rec)
}

/// Evaluates one record per grid point, in grid order.
pub fn run_sweep(cfg: &RunConfig) -> Result<Vec<SweepRecord>> {
    cfg.validate()?;
    cfg.params()
        .par_iter()
        .map(|&p| match cfg.statistics {
            Statistics::Boson => boson_record(p, cfg),
            Statistics::Fermion => fermion_record(p, cfg),
        })
        .collect()
}

pub fn count_flagged(records: &[SweepRecord]) -> usize {
    records.iter().filter(|r| !r.converged).count()
}

fn metadata_lines(meta: &impl Serialize) -> Result<String> {
    Ok(format!("# config: {}\n", serde_json::to_string(meta)?))
}

/// CSV with `#`-prefixed metadata lines, or a JSON array of records.
pub fn write_records(records: &[SweepRecord], cfg: &RunConfig, out: &mut impl Write) -> Result<()> {
    for r in records {
        r.validate()?;
    }
    match cfg.format {
        OutputFormat::Csv => {
            out.write_all(metadata_lines(cfg)?.as_bytes())?;
            let mut w = csv::Writer::from_writer(out);
            for r in records {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, records)?;
            out.write_all(b"\n")?;
        }
    }
    Ok(())
}

fn finish_read(mut records: Vec<SweepRecord>) -> Result<Vec<SweepRecord>> {
    for r in &mut records {
        r.recompute_deltas();
        r.validate()?;
    }
    Ok(records)
}

/// Reads records back, recomputing the delta columns.
pub fn read_csv(input: impl Read) -> Result<Vec<SweepRecord>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    let records = rdr.deserialize().collect::<std::result::Result<Vec<SweepRecord>, _>>()?;
    finish_read(records)
}

pub fn read_json(input: impl Read) -> Result<Vec<SweepRecord>> {
    finish_read(serde_json::from_reader(input)?)
}

/// Settings for a cutoff study at one bosonic `t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergeConfig {
    pub param: f64,
    pub cutoffs: Vec<usize>,
    pub tolerance: f64,
    pub optimizer: OptimizerConfig,
    pub sides: SideSelection,
    pub format: OutputFormat,
}

impl ConvergeConfig {
    pub const DEFAULT_CUTOFFS: [usize; 3] = [128, 256, 512];

    pub fn new(param: f64) -> Self {
        ConvergeConfig {
            param,
            cutoffs: Self::DEFAULT_CUTOFFS.to_vec(),
            tolerance: 1e-8,
            optimizer: OptimizerConfig::default(),
            sides: SideSelection::Both,
            format: OutputFormat::Csv,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_param(Statistics::Boson, self.param)?;
        if self.cutoffs.is_empty() || self.cutoffs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("cutoffs must be a non-empty ascending list".into()));
        }
        if self.cutoffs[0] == 0 {
            return Err(Error::Config("cutoff must be at least 1".into()));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::Config(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        self.optimizer.validate()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergeReport {
    pub param: f64,
    pub series: Vec<ConvergenceSeries>,
}

impl ConvergeReport {
    pub fn converged(&self) -> bool {
        self.series.iter().all(ConvergenceSeries::converged)
    }

    pub fn get(&self, name: &str) -> Option<&ConvergenceSeries> {
        self.series.iter().find(|s| s.name == name)
    }
}

/// Bosonic quantities at each cutoff, with successive differences and the
/// tail-mass extrapolation.
pub fn run_converge(cfg: &ConvergeConfig) -> Result<ConvergeReport> {
    cfg.validate()?;
    let t = cfg.param;
    let opt = cfg.optimizer;
    type Quantity = Box<dyn Fn(usize) -> Result<f64> + Sync>;
    let mut quantities: Vec<(&str, Quantity)> = Vec::new();
    if cfg.sides.a() {
        quantities.push(("d1_A", Box::new(move |n| Ok(quantum_discord(&boson_rho_ar(t, n.into())?, DiscordSide::A, &opt)?.value))));
        quantities.push(("dg_A_numeric", Box::new(move |n| Ok(geometric_discord(&boson_rho_ar(t, n.into())?, DiscordSide::A, &opt)?.value))));
    }
    if cfg.sides.b() {
        quantities.push(("d1_R", Box::new(move |n| Ok(quantum_discord(&boson_rho_ar(t, n.into())?, DiscordSide::BFockBound, &opt)?.value))));
        quantities.push(("dg_R_numeric", Box::new(move |n| Ok(geometric_discord(&boson_rho_ar(t, n.into())?, DiscordSide::BFockBound, &opt)?.value))));
    }
    quantities.push(("trace_norm_numeric", Box::new(move |n| trace_norm_to_chi(t, n.into()))));
    quantities.push(("xx_numeric", Box::new(move |n| correlator_xx(&boson_rho_ar(t, n.into())?))));

    let series = quantities
        .par_iter()
        .map(|(name, f)| study(*name, &cfg.cutoffs, cfg.tolerance, |n| Ok((tail_mass_boson(t, n), f(n)?))))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergeReport { param: t, series })
}

#[derive(Serialize)]
struct ConvergeRowOut<'a> {
    quantity: &'a str,
    cutoff: usize,
    tail_mass: f64,
    value: f64,
    difference: Option<f64>,
    converged_at: Option<usize>,
    extrapolated: Option<f64>,
}

/// Long-format table, one row per (quantity, cutoff).
pub fn write_converge(report: &ConvergeReport, cfg: &ConvergeConfig, out: &mut impl Write) -> Result<()> {
    match cfg.format {
        OutputFormat::Csv => {
            out.write_all(metadata_lines(cfg)?.as_bytes())?;
            let mut w = csv::Writer::from_writer(out);
            for s in &report.series {
                for row in &s.rows {
                    w.serialize(ConvergeRowOut {
                        quantity: &s.name,
                        cutoff: row.cutoff,
                        tail_mass: row.tail_mass,
                        value: row.value,
                        difference: row.difference,
                        converged_at: s.converged_at,
                        extrapolated: s.extrapolated,
                    })?;
                }
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, report)?;
            out.write_all(b"\n")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn quick(statistics: Statistics, lo: f64, hi: f64, steps: usize) -> RunConfig {
        let mut cfg = RunConfig::new(statistics, lo, hi, steps);
        cfg.optimizer = OptimizerConfig::default().with_grid(8, 8);
        cfg.truncation = TruncationSpec::fixed(40);
        cfg
    }

    #[test]
    fn config_validation() {
        assert!(quick(Statistics::Boson, 0.0, 0.9, 1).validate().is_err());
        assert!(quick(Statistics::Boson, 0.5, 0.2, 3).validate().is_err());
        assert!(quick(Statistics::Boson, 0.0, 1.0, 3).validate().is_err());
        assert!(quick(Statistics::Fermion, 0.0, 1.0, 3).validate().is_err());
        assert!(quick(Statistics::Fermion, 0.0, FRAC_PI_4, 3).validate().is_ok());
        let p = quick(Statistics::Fermion, 0.0, FRAC_PI_4, 5).params();
        assert_eq!(p[0], 0.0);
        assert_eq!(p[4], FRAC_PI_4);
    }

    #[test]
    fn fermion_sweep_endpoints() {
        let recs = run_sweep(&quick(Statistics::Fermion, 0.0, FRAC_PI_4, 3)).unwrap();
        assert_eq!(recs.len(), 3);
        let first = &recs[0];
        assert_abs_diff_eq!(first.d1_a.unwrap(), 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(first.dg_a_numeric.unwrap(), 0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(first.dg_r_numeric.unwrap(), 0.5, epsilon = 1e-9);
        let last = &recs[2];
        assert_abs_diff_eq!(last.dg_a_numeric.unwrap(), 0.1875, epsilon = 1e-8);
        assert_abs_diff_eq!(last.dg_r_numeric.unwrap(), 0.25, epsilon = 1e-8);
        assert_abs_diff_eq!(last.two_dg_a.unwrap(), 0.375, epsilon = 1e-8);
        assert!(recs.iter().all(|r| r.converged && r.trace_norm_numeric.is_none()));
    }

    #[test]
    fn boson_sweep_monotone_and_flagged() {
        let mut cfg = quick(Statistics::Boson, 0.0, 0.9, 4);
        cfg.sides = SideSelection::A;
        let recs = run_sweep(&cfg).unwrap();
        let dg: Vec<f64> = recs.iter().map(|r| r.dg_a_numeric.unwrap()).collect();
        assert!(dg.windows(2).all(|w| w[1] < w[0]));
        assert!(recs.iter().all(|r| r.d1_r.is_none()));
        // t = 0.9 at cutoff 40 keeps a visible tail
        let last = recs.last().unwrap();
        assert!(!last.converged);
        assert_eq!(last.abandoned_cutoff, Some(40));
        assert!(recs[0].converged);
        assert_eq!(count_flagged(&recs), recs.iter().filter(|r| r.tail_mass > cfg.tolerance).count());
    }

    #[test]
    fn adaptive_sweep_flags_at_cap() {
        let mut cfg = quick(Statistics::Boson, 0.2, 0.95, 2);
        cfg.sides = SideSelection::B;
        cfg.truncation = TruncationSpec::adaptive(8, 1e-12, 64);
        let recs = run_sweep(&cfg).unwrap();
        assert!(recs[0].converged);
        assert!(recs[0].tail_mass <= 1e-12);
        assert!(!recs[1].converged);
        assert_eq!(recs[1].abandoned_cutoff, Some(64));
    }

    #[test]
    fn csv_and_json_round_trip() {
        let mut cfg = quick(Statistics::Boson, 0.0, 0.6, 3);
        let recs = run_sweep(&cfg).unwrap();
        let mut buf = Vec::new();
        write_records(&recs, &cfg, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# config: "));
        let header = text.lines().nth(1).unwrap();
        assert!(header.starts_with("statistics,param,cutoff,tail_mass,d1_A,d1_R,dg_A_numeric"));
        assert_eq!(read_csv(buf.as_slice()).unwrap(), recs);

        cfg.format = OutputFormat::Json;
        let mut buf = Vec::new();
        write_records(&recs, &cfg, &mut buf).unwrap();
        assert_eq!(read_json(buf.as_slice()).unwrap(), recs);
    }

    #[test]
    fn read_back_recomputes_deltas() {
        let cfg = quick(Statistics::Fermion, 0.0, FRAC_PI_4, 2);
        let mut recs = run_sweep(&cfg).unwrap();
        let good = recs.clone();
        recs[0].delta_dg_a = Some(42.0);
        let mut buf = Vec::new();
        write_records(&recs, &cfg, &mut buf).unwrap();
        assert_eq!(read_csv(buf.as_slice()).unwrap(), good);
    }

    #[test]
    fn output_is_deterministic() {
        let cfg = quick(Statistics::Boson, 0.1, 0.7, 3);
        let render = || {
            let mut buf = Vec::new();
            write_records(&run_sweep(&cfg).unwrap(), &cfg, &mut buf).unwrap();
            buf
        };
        assert_eq!(render(), render());
    }

    #[test]
    fn converge_examples() {
        let mut cfg = ConvergeConfig::new(0.5);
        cfg.cutoffs = vec![20, 40, 80];
        cfg.optimizer = OptimizerConfig::default().with_grid(8, 8);
        let rep = run_converge(&cfg).unwrap();
        let dg = rep.get("dg_A_numeric").unwrap();
        assert!(dg.rows[2].difference.unwrap() < 1e-8);
        assert!(dg.rows[2].difference.unwrap() <= dg.rows[1].difference.unwrap());

        let mut zero = cfg.clone();
        zero.param = 0.0;
        let rep = run_converge(&zero).unwrap();
        assert!(rep.converged());
        for s in &rep.series {
            assert_eq!(s.converged_at, Some(20));
            assert_eq!(s.rows[0].tail_mass, 0.0);
        }

        let mut buf = Vec::new();
        write_converge(&rep, &zero, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().nth(1).unwrap().starts_with("quantity,cutoff,tail_mass,value,difference"));

        assert!(ConvergeConfig { cutoffs: vec![40, 20], ..cfg.clone() }.validate().is_err());
    }
}
