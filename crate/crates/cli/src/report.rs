//! Report records and their JSON, CSV and text renderings.

use serde::Serialize;

use spectral_factor::extremal::Threshold;
use spectral_factor::graph6::to_graph6;
use spectral_factor::spectra::{das_bound, hong_bound, spectral_radius, MatrixKind};
use spectral_factor::verify::Step;
use spectral_factor::{Graph, Verdict};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// JSON rendering of a float, shared by the CSV and text writers so all
/// formats print identical values.
pub fn fmt_float(x: f64) -> String {
    serde_json::to_string(&round12(x)).expect("finite float")
}

fn fmt_opt_float(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

fn fmt_list(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Params {
    pub k: Option<u64>,
    pub r: Option<u64>,
    pub delta: Option<u64>,
    pub n: Option<u64>,
    pub s: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphRecord {
    pub graph6: String,
    pub n: usize,
    pub edges: usize,
    pub min_degree: Option<usize>,
    pub connected: bool,
}

impl GraphRecord {
    pub fn of(g: &Graph) -> Result<Self, String> {
        Ok(Self {
            graph6: to_graph6(g).map_err(|e| e.to_string())?,
            n: g.order(),
            edges: g.edge_count(),
            min_degree: g.min_degree(),
            connected: g.is_connected(),
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectraRecord {
    pub rho: f64,
    pub q: f64,
    /// Absent for graphs with isolated vertices, where the bound is not valid.
    pub hong: Option<f64>,
    pub das: Option<f64>,
}

impl SpectraRecord {
    pub fn of(g: &Graph, tol: f64) -> Result<Self, String> {
        let value = |kind| {
            spectral_radius(g, kind, tol, None)
                .map(|e| round12(e.value))
                .map_err(|e| e.to_string())
        };
        Ok(Self {
            rho: value(MatrixKind::Adjacency)?,
            q: value(MatrixKind::SignlessLaplacian)?,
            hong: hong_bound(g)
                .ok()
                .filter(|h| h.applicable)
                .map(|h| round12(h.bound)),
            das: das_bound(g).ok().map(round12),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateRecord {
    #[serde(rename = "S")]
    pub s: Vec<usize>,
    pub isolated: Vec<usize>,
    pub lhs: u64,
    pub rhs: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorRecord {
    pub verdict: &'static str,
    pub certificate: Option<CertificateRecord>,
}

impl FactorRecord {
    pub fn of(v: &Verdict) -> Self {
        Self {
            verdict: if v.has_factor() { "has-factor" } else { "no-factor" },
            certificate: v.certificate().map(|c| CertificateRecord {
                s: c.s.to_vec(),
                isolated: c.isolated.to_vec(),
                lhs: c.lhs,
                rhs: c.rhs,
            }),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StepRecord {
    pub description: String,
    pub lhs: f64,
    pub relation: spectral_factor::verify::Relation,
    pub rhs: f64,
    pub tol: f64,
    pub role: spectral_factor::verify::StepRole,
    pub status: spectral_factor::verify::StepStatus,
}

impl StepRecord {
    pub fn of(step: &Step, prefix: &str) -> Self {
        Self {
            description: format!("{prefix}{}", step.description),
            lhs: round12(step.lhs),
            relation: step.relation,
            rhs: round12(step.rhs),
            tol: step.tol,
            role: step.role,
            status: step.status,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdRecord {
    pub adjacency: f64,
    pub adjacency_min_order: u64,
    pub signless: f64,
    pub signless_min_order: u64,
}

impl ThresholdRecord {
    pub fn of(a: &Threshold, q: &Threshold) -> Self {
        Self {
            adjacency: round12(a.as_f64()),
            adjacency_min_order: a.minimal_order(),
            signless: round12(q.as_f64()),
            signless_min_order: q.minimal_order(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SummaryRecord {
    pub total: usize,
    pub pass: usize,
    pub not_applicable: usize,
    pub boundary: usize,
    pub fail: usize,
    pub counterexamples: Vec<String>,
}

/// One line of a corpus scan or one enumerated tree.
#[derive(Debug, Clone, Default, Serialize)]
pub struct LineRecord {
    pub line: usize,
    pub graph6: String,
    pub n: Option<usize>,
    pub edges: Option<usize>,
    pub min_degree: Option<usize>,
    pub connected: Option<bool>,
    pub rho: Option<f64>,
    pub q: Option<f64>,
    pub hong: Option<f64>,
    pub das: Option<f64>,
    pub verdict: Option<String>,
    pub certificate: Option<CertificateRecord>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool_version: &'static str,
    pub mode: String,
    pub params: Params,
    pub graph: Option<GraphRecord>,
    pub spectra: Option<SpectraRecord>,
    pub factor: Option<FactorRecord>,
    pub steps: Vec<StepRecord>,
    pub overall: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<ThresholdRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<SummaryRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub records: Option<Vec<LineRecord>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(mode: impl Into<String>, params: Params) -> Self {
        Self {
            tool_version: TOOL_VERSION,
            mode: mode.into(),
            params,
            graph: None,
            spectra: None,
            factor: None,
            steps: Vec::new(),
            overall: "pass".into(),
            thresholds: None,
            summary: None,
            records: None,
            notes: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> Result<String, String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| e.to_string();
        if let Some(records) = &self.records {
            w.write_record(LINE_COLUMNS).map_err(err)?;
            for rec in records {
                w.write_record(line_row(rec)).map_err(err)?;
            }
        } else if !self.steps.is_empty() {
            w.write_record(["mode", "description", "lhs", "relation", "rhs", "tol", "role", "status", "overall"])
                .map_err(err)?;
            for s in &self.steps {
                w.write_record([
                    self.mode.clone(),
                    s.description.clone(),
                    fmt_float(s.lhs),
                    plain(&s.relation),
                    fmt_float(s.rhs),
                    fmt_float(s.tol),
                    plain(&s.role),
                    plain(&s.status),
                    self.overall.clone(),
                ])
                .map_err(err)?;
            }
        } else {
            w.write_record(SUMMARY_COLUMNS).map_err(err)?;
            w.write_record(self.summary_row()).map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| e.to_string())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    fn summary_row(&self) -> Vec<String> {
        let opt = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
        let p = &self.params;
        let mut row = vec![self.mode.clone(), opt(p.k), opt(p.r), opt(p.delta), opt(p.n), opt(p.s)];
        match &self.graph {
            Some(g) => row.extend([
                g.graph6.clone(),
                g.n.to_string(),
                g.edges.to_string(),
                g.min_degree.map(|d| d.to_string()).unwrap_or_default(),
                g.connected.to_string(),
            ]),
            None => row.extend(std::iter::repeat_n(String::new(), 5)),
        }
        match &self.spectra {
            Some(s) => row.extend([fmt_float(s.rho), fmt_float(s.q), fmt_opt_float(s.hong), fmt_opt_float(s.das)]),
            None => row.extend(std::iter::repeat_n(String::new(), 4)),
        }
        let cert = self.factor.as_ref().and_then(|f| f.certificate.as_ref());
        row.push(self.factor.as_ref().map(|f| f.verdict.to_string()).unwrap_or_default());
        row.extend(cert_columns(cert));
        row.push(self.overall.clone());
        row
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("mode: {}\n", self.mode);
        let p = &self.params;
        for (name, v) in [("k", p.k), ("r", p.r), ("delta", p.delta), ("n", p.n), ("s", p.s)] {
            if let Some(v) = v {
                out += &format!("{name}: {v}\n");
            }
        }
        if let Some(g) = &self.graph {
            out += &format!(
                "graph: {} (n = {}, edges = {}, min degree = {}, connected = {})\n",
                g.graph6,
                g.n,
                g.edges,
                g.min_degree.map(|d| d.to_string()).unwrap_or_else(|| "-".into()),
                g.connected
            );
        }
        if let Some(s) = &self.spectra {
            out += &format!(
                "rho: {}\nq: {}\nhong: {}\ndas: {}\n",
                fmt_float(s.rho),
                fmt_float(s.q),
                s.hong.map(fmt_float).unwrap_or_else(|| "n/a".into()),
                s.das.map(fmt_float).unwrap_or_else(|| "n/a".into())
            );
        }
        if let Some(f) = &self.factor {
            out += &format!("verdict: {}\n", f.verdict);
            if let Some(c) = &f.certificate {
                out += &format!(
                    "certificate: S = {{{}}}, isolated = {{{}}}, r*i = {} > k*|S| = {}\n",
                    fmt_list(&c.s),
                    fmt_list(&c.isolated),
                    c.lhs,
                    c.rhs
                );
            }
        }
        if let Some(t) = &self.thresholds {
            out += &format!(
                "threshold (adjacency): {} (n >= {})\nthreshold (signless): {} (n >= {})\n",
                fmt_float(t.adjacency),
                t.adjacency_min_order,
                fmt_float(t.signless),
                t.signless_min_order
            );
        }
        for s in &self.steps {
            out += &format!(
                "[{}] {}: {} {} {} ({})\n",
                plain(&s.status),
                s.description,
                fmt_float(s.lhs),
                plain(&s.relation),
                fmt_float(s.rhs),
                plain(&s.role)
            );
        }
        if let Some(s) = &self.summary {
            out += &format!(
                "total: {}, pass: {}, not applicable: {}, boundary: {}, fail: {}\n",
                s.total, s.pass, s.not_applicable, s.boundary, s.fail
            );
            for c in &s.counterexamples {
                out += &format!("counterexample: {c}\n");
            }
        }
        if let Some(records) = &self.records {
            for rec in records {
                if self.mode == "trees" {
                    // graph6 with its membership annotation
                    out += &format!("{}\t{}\n", rec.graph6, rec.verdict.as_deref().unwrap_or(""));
                } else {
                    out += &line_row(rec).join("\t");
                    out += "\n";
                }
            }
        }
        for n in &self.notes {
            out += &format!("note: {n}\n");
        }
        out += &format!("overall: {}\n", self.overall);
        out
    }
}

/// A serde enum tag as a bare string.
fn plain<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v).expect("serializable") {
        serde_json::Value::String(s) => s,
        other => other.to_string(),
    }
}

const SUMMARY_COLUMNS: [&str; 21] = [
    "mode", "k", "r", "delta", "n", "s", "graph6", "order", "edges", "min_degree", "connected", "rho", "q",
    "hong", "das", "verdict", "S", "isolated", "lhs", "rhs", "overall",
];

const LINE_COLUMNS: [&str; 16] = [
    "line", "graph6", "n", "edges", "min_degree", "connected", "rho", "q", "hong", "das", "verdict", "S",
    "isolated", "lhs", "rhs", "error",
];

fn cert_columns(c: Option<&CertificateRecord>) -> [String; 4] {
    match c {
        Some(c) => [fmt_list(&c.s), fmt_list(&c.isolated), c.lhs.to_string(), c.rhs.to_string()],
        None => Default::default(),
    }
}

fn line_row(r: &LineRecord) -> Vec<String> {
    let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
    let mut row = vec![
        r.line.to_string(),
        r.graph6.clone(),
        opt(r.n),
        opt(r.edges),
        opt(r.min_degree),
        r.connected.map(|c| c.to_string()).unwrap_or_default(),
        fmt_opt_float(r.rho),
        fmt_opt_float(r.q),
        fmt_opt_float(r.hong),
        fmt_opt_float(r.das),
        r.verdict.clone().unwrap_or_default(),
    ];
    row.extend(cert_columns(r.certificate.as_ref()));
    row.push(r.error.clone().unwrap_or_default());
    row
}
