//! Single-point runs, parameter scans, CSV output and the closed-versus-oracle
//! comparison harness.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::bell::{bell_diagnostics, scenario2_m_closed, BellDiagnostics};
use crate::density::{
    assemble_rho, closed_form_rho, compute_coefficients_with, PhaseConvention, TwoQubitDensity,
};
use crate::error::{Error, Result};
use crate::oracle::{converge, converged_rho, oracle_overlaps, starting_cutoff, OracleConfig};
use crate::params::{Method, RunSpec, Scenario};

pub const CSV_HEADER: &str = "var,eps_T,lambda1,lambda2,lambda3,M,chsh_max,violates,method,cutoff";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScanVariable {
    /// Both interaction times together.
    T,
    T1,
    T2,
    /// Initial position of both packets.
    X0,
}

impl FromStr for ScanVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T" => Ok(Self::T),
            "T1" => Ok(Self::T1),
            "T2" => Ok(Self::T2),
            "x0" => Ok(Self::X0),
            other => Err(Error::Config(format!(
                "unknown scan variable `{other}` (expected T, T1, T2 or x0)"
            ))),
        }
    }
}

impl fmt::Display for ScanVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::T => "T",
            Self::T1 => "T1",
            Self::T2 => "T2",
            Self::X0 => "x0",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanSpec {
    pub variable: ScanVariable,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub base: RunSpec,
}

impl ScanSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::Config("scan bounds must be finite".into()));
        }
        if self.stop < self.start {
            return Err(Error::Config(format!(
                "scan stop {:e} below start {:e}",
                self.stop, self.start
            )));
        }
        if self.steps == 0 {
            return Err(Error::Config("scan needs at least one step".into()));
        }
        self.base.validate()
    }

    /// Uniform grid including both endpoints.
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * (i as f64 / last)
                }
            })
            .collect()
    }

    pub fn point(&self, value: f64) -> RunSpec {
        let mut spec = self.base;
        match self.variable {
            ScanVariable::T => {
                spec.t1 = value;
                spec.t2 = value;
            }
            ScanVariable::T1 => spec.t1 = value,
            ScanVariable::T2 => spec.t2 = value,
            ScanVariable::X0 => {
                spec.packet1.x0 = value;
                spec.packet2.x0 = value;
            }
        }
        spec
    }

    /// `εT` reported alongside a point: the scanned time, or `T₁` for
    /// position scans.
    pub fn eps_t(&self, value: f64) -> f64 {
        let eps = self.base.params.epsilon;
        match self.variable {
            ScanVariable::T | ScanVariable::T1 | ScanVariable::T2 => eps * value,
            ScanVariable::X0 => eps * self.base.t1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RowMethod {
    Closed,
    Oracle,
    /// Excited-atom run: λ's from the oracle density, M from the
    /// photon-in-cavity `2λ₂`.
    ClosedSurrogate,
}

impl RowMethod {
    pub fn tag(self) -> &'static str {
        match self {
            Self::Closed => "closed",
            Self::Oracle => "oracle",
            Self::ClosedSurrogate => "closed-surrogate",
        }
    }
}

impl FromStr for RowMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(Self::Closed),
            "oracle" => Ok(Self::Oracle),
            "closed-surrogate" => Ok(Self::ClosedSurrogate),
            other => Err(Error::Config(format!("unknown method tag `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanRow {
    pub var: f64,
    pub eps_t: f64,
    pub diagnostics: BellDiagnostics,
    pub method: RowMethod,
    pub cutoff: Option<usize>,
}

/// Everything computed for one point.
#[derive(Clone, Debug)]
pub struct PointResult {
    pub spec: RunSpec,
    pub closed: Option<(TwoQubitDensity, BellDiagnostics)>,
    pub oracle: Option<(TwoQubitDensity, BellDiagnostics, usize)>,
    pub surrogate_m: Option<f64>,
}

impl PointResult {
    /// Entrywise `max |ρ_closed − ρ_oracle|` when both were computed.
    pub fn max_delta_rho(&self) -> Option<f64> {
        match (&self.closed, &self.oracle) {
            (Some((a, _)), Some((b, _, _))) => Some(a.max_abs_diff(b)),
            _ => None,
        }
    }

    pub fn rows(&self, var: f64, eps_t: f64) -> Vec<ScanRow> {
        let mut rows = Vec::with_capacity(2);
        if let Some((_, d)) = &self.closed {
            rows.push(ScanRow {
                var,
                eps_t,
                diagnostics: *d,
                method: RowMethod::Closed,
                cutoff: None,
            });
        }
        if let (Some(m), Some((_, d, n))) = (self.surrogate_m, &self.oracle) {
            rows.push(ScanRow {
                var,
                eps_t,
                diagnostics: BellDiagnostics {
                    lambdas: d.lambdas,
                    m,
                    chsh_max: 2.0 * m.max(0.0).sqrt(),
                    violates: m > 1.0,
                },
                method: RowMethod::ClosedSurrogate,
                cutoff: Some(*n),
            });
        }
        if self.spec.method != Method::Closed {
            if let Some((_, d, n)) = &self.oracle {
                rows.push(ScanRow {
                    var,
                    eps_t,
                    diagnostics: *d,
                    method: RowMethod::Oracle,
                    cutoff: Some(*n),
                });
            }
        }
        rows
    }
}

/// Evaluates one point with the method selected in `spec`.
pub fn run_point(spec: &RunSpec, oracle: &OracleConfig) -> Result<PointResult> {
    spec.validate()?;
    let mut result = PointResult {
        spec: *spec,
        closed: None,
        oracle: None,
        surrogate_m: None,
    };
    let wants_closed = spec.method != Method::Oracle;
    let wants_oracle = spec.method != Method::Closed;
    let excited = spec.scenario == Scenario::ExcitedAtom;

    if wants_closed && !excited {
        let rho = closed_form_rho(spec)?;
        let diag = bell_diagnostics(&rho)?;
        result.closed = Some((rho, diag));
    }
    if wants_closed && excited {
        result.surrogate_m = Some(scenario2_m_closed(spec)?);
    }
    if wants_oracle || excited {
        let conv = converged_rho(spec, oracle)?;
        let diag = bell_diagnostics(&conv.value)?;
        result.oracle = Some((conv.value, diag, conv.cutoff));
    }
    Ok(result)
}

/// Evaluates the grid in parallel; rows come back in grid order.
pub fn run_scan(scan: &ScanSpec, oracle: &OracleConfig) -> Result<Vec<ScanRow>> {
    run_scan_points(scan, oracle).map(|points| {
        points
            .iter()
            .flat_map(|(v, p)| p.rows(*v, scan.eps_t(*v)))
            .collect()
    })
}

pub fn run_scan_points(scan: &ScanSpec, oracle: &OracleConfig) -> Result<Vec<(f64, PointResult)>> {
    scan.validate()?;
    scan.values()
        .into_par_iter()
        .enumerate()
        .map(|(index, value)| {
            run_point(&scan.point(value), oracle)
                .map(|p| (value, p))
                .map_err(|e| Error::ScanPoint {
                    index,
                    value,
                    source: Box::new(e),
                })
        })
        .collect()
}

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn emit_csv(rows: &[ScanRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let d = &r.diagnostics;
        let fields = [
            fmt_float(r.var),
            fmt_float(r.eps_t),
            fmt_float(d.lambdas[0]),
            fmt_float(d.lambdas[1]),
            fmt_float(d.lambdas[2]),
            fmt_float(d.m),
            fmt_float(d.chsh_max),
            u8::from(d.violates).to_string(),
            r.method.tag().to_string(),
            r.cutoff.map(|n| n.to_string()).unwrap_or_default(),
        ];
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<ScanRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == CSV_HEADER => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                message: "missing or unexpected CSV header".into(),
            })
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let line_no = i + 1;
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 10 {
            return Err(err(format!("expected 10 fields, found {}", f.len())));
        }
        let num = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| err(format!("bad number `{s}`: {e}")))
        };
        let violates = match f[7] {
            "0" => false,
            "1" => true,
            other => return Err(err(format!("bad violates flag `{other}`"))),
        };
        let cutoff = if f[9].is_empty() {
            None
        } else {
            Some(
                f[9].parse::<usize>()
                    .map_err(|e| err(format!("bad cutoff: {e}")))?,
            )
        };
        rows.push(ScanRow {
            var: num(f[0])?,
            eps_t: num(f[1])?,
            diagnostics: BellDiagnostics {
                lambdas: [num(f[2])?, num(f[3])?, num(f[4])?],
                m: num(f[5])?,
                chsh_max: num(f[6])?,
                violates,
            },
            method: f[8].parse().map_err(|e: Error| err(e.to_string()))?,
            cutoff,
        });
    }
    Ok(rows)
}

/// Worst closed-versus-oracle disagreement over a scan.
#[derive(Clone, Debug)]
pub struct ComparisonReport {
    pub tolerance: f64,
    pub convention: PhaseConvention,
    pub points: usize,
    pub max_delta_rho: f64,
    pub max_delta_m: f64,
    /// `|Δc|` for `c₁, c₂, c₊, c₋`; NaN in the Jaynes–Cummings limit where
    /// both sides are identically one.
    pub max_delta_coeff: [f64; 4],
    pub worst_value: f64,
    pub worst_deviation: f64,
    pub max_cutoff: usize,
}

impl ComparisonReport {
    pub fn passed(&self) -> bool {
        self.worst_deviation <= self.tolerance
    }
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "points compared     {}", self.points)?;
        writeln!(f, "phase convention    {:?}", self.convention)?;
        writeln!(f, "max |Δρ|            {:.3e}", self.max_delta_rho)?;
        writeln!(f, "max |ΔM|            {:.3e}", self.max_delta_m)?;
        let names = ["c1", "c2", "c+", "c-"];
        for (n, d) in names.iter().zip(self.max_delta_coeff) {
            writeln!(f, "max |Δ{n}|{:<10} {d:.3e}", "")?;
        }
        writeln!(f, "oracle cutoff       {}", self.max_cutoff)?;
        writeln!(
            f,
            "worst point         {:.6e} (deviation {:.3e})",
            self.worst_value, self.worst_deviation
        )?;
        write!(
            f,
            "{} (tolerance {:.0e})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.tolerance
        )
    }
}

/// Runs both methods over the grid and records the largest discrepancy.
///
/// `convention` only affects the closed side, so a wrong choice shows up as
/// a deviation from the oracle.
pub fn compare_methods(
    scan: &ScanSpec,
    convention: PhaseConvention,
    oracle: &OracleConfig,
    tolerance: f64,
) -> Result<ComparisonReport> {
    scan.validate()?;
    if scan.base.scenario != Scenario::PhotonInCavity {
        return Err(Error::UnsupportedScenario("excited-atom"));
    }
    let values = scan.values();
    let per_point: Vec<(f64, f64, f64, [f64; 4], usize)> = values
        .par_iter()
        .enumerate()
        .map(|(index, &value)| {
            let spec = scan.point(value);
            compare_point(&spec, convention, oracle)
                .map_err(|e| Error::ScanPoint {
                    index,
                    value,
                    source: Box::new(e),
                })
                .map(|(dr, dm, dc, n)| (value, dr, dm, dc, n))
        })
        .collect::<Result<_>>()?;

    let mut report = ComparisonReport {
        tolerance,
        convention,
        points: per_point.len(),
        max_delta_rho: 0.0,
        max_delta_m: 0.0,
        max_delta_coeff: [0.0; 4],
        worst_value: values[0],
        worst_deviation: f64::NEG_INFINITY,
        max_cutoff: 0,
    };
    for (value, dr, dm, dc, n) in per_point {
        report.max_delta_rho = report.max_delta_rho.max(dr);
        report.max_delta_m = report.max_delta_m.max(dm);
        for (acc, d) in report.max_delta_coeff.iter_mut().zip(dc) {
            *acc = if d.is_nan() { d } else { acc.max(d) };
        }
        report.max_cutoff = report.max_cutoff.max(n);
        let worst = dc
            .iter()
            .filter(|d| !d.is_nan())
            .fold(dr.max(dm), |a, &b| a.max(b));
        if worst > report.worst_deviation {
            report.worst_deviation = worst;
            report.worst_value = value;
        }
    }
    Ok(report)
}

fn compare_point(
    spec: &RunSpec,
    convention: PhaseConvention,
    oracle: &OracleConfig,
) -> Result<(f64, f64, [f64; 4], usize)> {
    let coeffs = compute_coefficients_with(spec, convention)?;
    let closed = assemble_rho(&coeffs)?;
    let conv = converged_rho(spec, oracle)?;
    let d_rho = closed.max_abs_diff(&conv.value);
    let d_m = (bell_diagnostics(&closed)?.m - bell_diagnostics(&conv.value)?.m).abs();

    let d_coeff = if spec.jc_limit {
        [f64::NAN; 4]
    } else {
        let start = starting_cutoff(spec, oracle)?;
        let fock = converge(start, oracle, |n| oracle_overlaps(spec, n))?;
        let a = coeffs.as_array();
        let b = fock.value.as_array();
        [0, 1, 2, 3].map(|i| (a[i] - b[i]).norm())
    };
    Ok((d_rho, d_m, d_coeff, conv.cutoff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn jc_scan(from: f64, to: f64, steps: usize) -> ScanSpec {
        let mut base = RunSpec::reference(0.0);
        base.jc_limit = true;
        base.method = Method::Closed;
        let eps = base.params.epsilon;
        ScanSpec {
            variable: ScanVariable::T,
            start: from / eps,
            stop: to / eps,
            steps,
            base,
        }
    }

    #[test]
    fn grid_includes_endpoints() {
        let s = jc_scan(0.0, PI, 5);
        let v = s.values();
        assert_eq!(v.len(), 5);
        assert_eq!(v[0], 0.0);
        assert_eq!(v[4], PI / s.base.params.epsilon);
        assert_eq!(
            jc_scan(0.3, PI, 1).values(),
            vec![0.3 / s.base.params.epsilon]
        );
    }

    #[test]
    fn invalid_scans_rejected() {
        let mut s = jc_scan(1.0, 0.5, 3);
        assert!(s.validate().is_err());
        s = jc_scan(0.0, 1.0, 0);
        assert!(s.validate().is_err());
        assert!("y".parse::<ScanVariable>().is_err());
    }

    #[test]
    fn zero_time_is_product_boundary() {
        let spec = RunSpec {
            method: Method::Closed,
            ..RunSpec::reference(0.0)
        };
        let p = run_point(&spec, &OracleConfig::default()).unwrap();
        let d = p.closed.unwrap().1;
        assert!((d.m - 1.0).abs() < 1e-12);
        assert!(!d.violates);
    }

    #[test]
    fn jc_curve_is_mirror_symmetric() {
        let rows = run_scan(&jc_scan(0.0, PI, 101), &OracleConfig::default()).unwrap();
        for i in 0..rows.len() {
            let j = rows.len() - 1 - i;
            let d = (rows[i].diagnostics.m - rows[j].diagnostics.m).abs();
            assert!(d < 1e-10, "{} vs {}", rows[i].eps_t, rows[j].eps_t);
        }
    }

    #[test]
    fn csv_round_trip_and_shape() {
        let rows = run_scan(&jc_scan(0.0, 2.0, 7), &OracleConfig::default()).unwrap();
        let text = emit_csv(&rows);
        assert!(text.starts_with(CSV_HEADER));
        assert!(!text.contains('\r'));
        assert_eq!(text.lines().count(), 8);
        let back = parse_csv(&text).unwrap();
        assert_eq!(back, rows);
        let one = emit_csv(&rows[..1]);
        assert_eq!(one.lines().count(), 2);
    }

    #[test]
    fn both_mode_tags_rows() {
        let mut spec = RunSpec::reference(1.0);
        spec.method = Method::Both;
        let p = run_point(&spec, &OracleConfig::default()).unwrap();
        let rows = p.rows(0.0, 1.0);
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].method, RowMethod::Closed);
        assert_eq!(rows[1].method, RowMethod::Oracle);
        assert!(rows[0].cutoff.is_none());
        assert_eq!(rows[1].cutoff, Some(128));
        assert!(p.max_delta_rho().unwrap() < 1e-6);
        let text = emit_csv(&rows);
        assert!(text.lines().nth(1).unwrap().ends_with(",closed,"));
        assert!(text.lines().nth(2).unwrap().ends_with(",oracle,128"));
    }

    #[test]
    fn excited_atom_closed_is_tagged_surrogate() {
        let mut spec = RunSpec::reference(1.0);
        spec.scenario = Scenario::ExcitedAtom;
        spec.method = Method::Closed;
        let p = run_point(&spec, &OracleConfig::default()).unwrap();
        let rows = p.rows(0.0, 1.0);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].method, RowMethod::ClosedSurrogate);
    }

    #[test]
    fn failing_point_is_identified() {
        let mut s = jc_scan(0.0, 1.0, 3);
        s.base.jc_limit = false;
        s.base.method = Method::Oracle;
        s.variable = ScanVariable::X0;
        let d = s.base.params.derive().unwrap();
        s.start = 0.0;
        s.stop = 40.0 * d.delta_x0;
        let err = run_scan(&s, &OracleConfig::default()).unwrap_err();
        match err {
            Error::ScanPoint { index, .. } => assert_eq!(index, 2),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn jc_comparison_is_exact() {
        let mut s = jc_scan(0.0, 2.0 * PI, 9);
        s.base.method = Method::Both;
        let r = compare_methods(
            &s,
            PhaseConvention::SecondAtom,
            &OracleConfig::default(),
            1e-6,
        )
        .unwrap();
        assert!(r.max_delta_rho <= 1e-10, "{r}");
        assert!(r.passed());
    }
}
