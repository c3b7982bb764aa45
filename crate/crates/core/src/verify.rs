//! Numerical replay of the spectral sufficient conditions.
//!
//! Every check produces a [`VerificationReport`]: an ordered list of
//! comparisons with their operands, so that a report can be re-evaluated
//! without touching the graph again.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::extremal::{
    build_extremal, case_two_range, f_value, g_value, threshold_adjacency, threshold_signless,
    ExtremalError, ExtremalSpec, Threshold,
};
use crate::factor::{has_factor, Certificate, FactorError, FamilyParams};
use crate::graph::Graph;
use crate::graph6::to_graph6;
use crate::iso::find_isomorphism;
use crate::spectra::{spectral_radius, MatrixKind, SpectraError, DEFAULT_GAP_TOL, DEFAULT_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("random graph generation failed after {0} attempts")]
    RetryCapExhausted(usize),
    #[error(transparent)]
    Spectra(#[from] SpectraError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Extremal(#[from] ExtremalError),
}

/// Tolerances used by the checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    /// Residual tolerance passed to the eigensolvers.
    pub eig_tol: f64,
    /// Margin required between separated spectral radii.
    pub gap_tol: f64,
    /// Band around a real-valued comparison inside which the outcome is
    /// reported as boundary rather than decided.
    pub chain_tol: f64,
    /// Half-width of the band around `ρ(G) = ρ(G₁(δ))` in theorem instances.
    pub hypothesis_tol: f64,
    /// Order cap for the isomorphism test in theorem instances.
    pub iso_cap: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            eig_tol: DEFAULT_TOL,
            gap_tol: DEFAULT_GAP_TOL,
            chain_tol: 1e-9,
            hypothesis_tol: 1e-9,
            iso_cap: 128,
        }
    }
}

/// The parameter grid of the separation and sampling sweeps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanGrid {
    pub deltas: Vec<u64>,
    pub params: Vec<(u64, u64)>,
    /// Added to the minimal admissible order.
    pub offsets: Vec<u64>,
}

impl Default for ScanGrid {
    fn default() -> Self {
        Self {
            deltas: vec![1, 2],
            params: vec![(2, 1), (3, 2), (4, 3), (3, 1)],
            offsets: vec![0, 1, 2, 5],
        }
    }
}

impl ScanGrid {
    /// `(n, δ, params)` for every grid point, `n` measured from the larger of
    /// the two minimal admissible orders.
    pub fn points(&self) -> Result<Vec<(u64, u64, FamilyParams)>, VerifyError> {
        let mut out = Vec::new();
        for &delta in &self.deltas {
            for &(k, r) in &self.params {
                let p = FamilyParams::new(k, r)?;
                let base = joint_minimal_order(delta, p)?;
                for &off in &self.offsets {
                    out.push((base + off, delta, p));
                }
            }
        }
        Ok(out)
    }
}

/// Least `n` satisfying both order thresholds.
pub fn joint_minimal_order(delta: u64, p: FamilyParams) -> Result<u64, VerifyError> {
    Ok(threshold_adjacency(delta, p)?
        .minimal_order()
        .max(threshold_signless(delta, p)?.minimal_order()))
}

pub fn threshold_for(kind: MatrixKind, delta: u64, p: FamilyParams) -> Result<Threshold, VerifyError> {
    Ok(match kind {
        MatrixKind::Adjacency => threshold_adjacency(delta, p)?,
        MatrixKind::SignlessLaplacian => threshold_signless(delta, p)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepStatus {
    Holds,
    /// A strict comparison landed within tolerance of equality.
    Boundary,
    Fails,
}

impl StepStatus {
    pub fn holds(self) -> bool {
        self != StepStatus::Fails
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepRole {
    /// Part of the inequality chain; a failure fails the report.
    Claim,
    /// Recorded for inspection only.
    Diagnostic,
}

/// One recorded comparison `lhs relation rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Step {
    pub description: String,
    pub lhs: f64,
    pub relation: Relation,
    pub rhs: f64,
    /// Zero for exact integer comparisons.
    pub tol: f64,
    pub role: StepRole,
    pub status: StepStatus,
}

impl Step {
    pub fn new(
        description: impl Into<String>,
        lhs: f64,
        relation: Relation,
        rhs: f64,
        tol: f64,
        role: StepRole,
    ) -> Self {
        Self {
            description: description.into(),
            lhs,
            relation,
            rhs,
            tol,
            role,
            status: evaluate(lhs, relation, rhs, tol),
        }
    }

    fn exact(description: impl Into<String>, lhs: i128, relation: Relation, rhs: i128, role: StepRole) -> Self {
        debug_assert!(lhs.unsigned_abs() < 1 << 53 && rhs.unsigned_abs() < 1 << 53);
        Self::new(description, lhs as f64, relation, rhs as f64, 0.0, role)
    }
}

/// Strict relations inside the `tol` band around equality are `Boundary`;
/// non-strict relations accept the band.
pub fn evaluate(lhs: f64, relation: Relation, rhs: f64, tol: f64) -> StepStatus {
    let close = (lhs - rhs).abs() <= tol;
    let ok = match relation {
        Relation::Lt => lhs < rhs - tol,
        Relation::Gt => lhs > rhs + tol,
        Relation::Le => lhs <= rhs + tol,
        Relation::Ge => lhs >= rhs - tol,
        Relation::Eq => close,
    };
    if ok {
        StepStatus::Holds
    } else if close && matches!(relation, Relation::Lt | Relation::Gt) {
        StepStatus::Boundary
    } else {
        StepStatus::Fails
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    ChainAdjacency,
    ChainSignless,
    Separation,
    Instance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    /// The spectral hypothesis (or a precondition) does not hold.
    NotApplicable,
    /// The hypothesis sits inside the tolerance band and could not be decided.
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ParamRecord {
    pub n: u64,
    pub delta: u64,
    pub k: u64,
    pub r: u64,
    pub s: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub graph6: String,
    pub separator: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub mode: Mode,
    pub params: ParamRecord,
    pub steps: Vec<Step>,
    pub overall: Outcome,
    pub counterexample: Option<Counterexample>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    fn new(mode: Mode, params: ParamRecord) -> Self {
        Self {
            mode,
            params,
            steps: Vec::new(),
            overall: Outcome::Pass,
            counterexample: None,
            notes: Vec::new(),
        }
    }

    fn push(&mut self, step: Step) {
        self.steps.push(step);
    }

    /// `Pass` iff no claim step fails.
    fn chain_outcome(&self) -> Outcome {
        if self.claims_hold() {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    fn claims_hold(&self) -> bool {
        self.steps
            .iter()
            .filter(|s| s.role == StepRole::Claim)
            .all(|s| s.status.holds())
    }

    pub fn passed(&self) -> bool {
        self.overall == Outcome::Pass
    }

    pub fn step(&self, prefix: &str) -> Option<&Step> {
        self.steps.iter().find(|s| s.description.starts_with(prefix))
    }

    /// Re-evaluates every step from its stored operands and checks the
    /// recorded statuses and the overall outcome against them.
    pub fn revalidate(&self) -> bool {
        let steps_ok = self
            .steps
            .iter()
            .all(|s| evaluate(s.lhs, s.relation, s.rhs, s.tol) == s.status);
        let overall_ok = match self.overall {
            Outcome::Pass => self.claims_hold(),
            Outcome::Fail => !self.claims_hold(),
            Outcome::NotApplicable | Outcome::Boundary => true,
        };
        steps_ok && overall_ok
    }
}

fn record(n: u64, delta: u64, p: FamilyParams, s: Option<u64>) -> ParamRecord {
    ParamRecord {
        n,
        delta,
        k: p.k(),
        r: p.r(),
        s,
    }
}

fn radius(g: &Graph, kind: MatrixKind, cfg: &VerifyConfig) -> Result<f64, VerifyError> {
    Ok(spectral_radius(g, kind, cfg.eig_tol, None)?.value)
}

fn chain_spec(
    n: u64,
    delta: u64,
    p: FamilyParams,
    s: u64,
    threshold: Threshold,
) -> Result<ExtremalSpec, VerifyError> {
    if delta == 0 {
        return Err(VerifyError::InvalidParameters("delta must be at least 1".into()));
    }
    if s < delta + 1 {
        return Err(VerifyError::InvalidParameters(format!(
            "separator size {s} below delta + 1 = {}",
            delta + 1
        )));
    }
    if n < threshold.minimal_order() {
        return Err(VerifyError::InvalidParameters(format!(
            "order {n} below threshold {}",
            threshold.as_f64()
        )));
    }
    Ok(ExtremalSpec::new(n, s, p)?)
}

/// `rn − kδ − 2r`
fn target(n: u64, delta: u64, p: FamilyParams) -> i128 {
    let (k, r) = (p.k() as i128, p.r() as i128);
    r * n as i128 - k * delta as i128 - 2 * r
}

/// Replays the adjacency chain for `G₁(s)` with `s ≥ δ + 1`:
/// `ρ(G₁) ≤ √(2e − n + 1) ≤ √f(s)/r ≤ √f(δ+1)/r` and the final
/// `ρ(G₁) < (rn − kδ − 2r)/r`.
///
/// The step `f(δ+1) < (rn − kδ − 2r)²` and the closed-form expansion of
/// `f(δ+1)` are recorded as diagnostics: the expansion is off by `r²`, so
/// the intermediate step can fail near the threshold while the final
/// spectral inequality still holds.
pub fn chain_check_adjacency(
    n: u64,
    delta: u64,
    p: FamilyParams,
    s: u64,
    cfg: &VerifyConfig,
) -> Result<VerificationReport, VerifyError> {
    let spec = chain_spec(n, delta, p, s, threshold_adjacency(delta.max(1), p)?)?;
    let g = build_extremal(&spec);
    let rho = radius(&g, MatrixKind::Adjacency, cfg)?;
    let (k, r) = (p.k() as i128, p.r() as i128);
    let (ni, di, si) = (n as i128, delta as i128, s as i128);
    let radicand = 2 * spec.edge_count() as i128 - ni + 1;
    let f_s = f_value(si, ni, p);
    let f_top = f_value(di + 1, ni, p);
    let t = target(n, delta, p);
    let expansion = t * t - 2 * r * (k - r) * ni + 2 * k * r * di * di
        + (2 * k * k + k * r + 2 * r * r) * di
        + k * k
        + 3 * k * r
        - 2 * r * r;

    let mut rep = VerificationReport::new(Mode::ChainAdjacency, record(n, delta, p, Some(s)));
    rep.push(Step::new(
        "rho(G1(s)) <= sqrt(2e - n + 1)",
        rho,
        Relation::Le,
        (radicand as f64).sqrt(),
        cfg.chain_tol,
        StepRole::Claim,
    ));
    rep.push(Step::exact("r^2 (2e - n + 1) <= f(s)", r * r * radicand, Relation::Le, f_s, StepRole::Claim));
    rep.push(Step::exact("f(s) <= f(delta + 1)", f_s, Relation::Le, f_top, StepRole::Claim));
    rep.push(Step::exact(
        "f(delta + 1) < (rn - k delta - 2r)^2",
        f_top,
        Relation::Lt,
        t * t,
        StepRole::Diagnostic,
    ));
    rep.push(Step::exact(
        "f(delta + 1) = expanded form with constant k^2 + 3kr - 2r^2",
        f_top,
        Relation::Eq,
        expansion,
        StepRole::Diagnostic,
    ));
    rep.push(Step::new(
        "rho(G1(s)) < (rn - k delta - 2r) / r",
        rho,
        Relation::Lt,
        t as f64 / r as f64,
        cfg.chain_tol,
        StepRole::Claim,
    ));
    rep.notes.push(format!("expansion residual f(delta + 1) - expanded form = {}", f_top - expansion));
    rep.overall = rep.chain_outcome();
    Ok(rep)
}

/// Replays the signless Laplacian chain for `G₁(s)` with `s ≥ δ + 1`:
/// `q(G₁) ≤ 2e/(n−1) + n − 2 ≤ g(s)/(r²(n−1)) ≤ g(δ+1)/(r²(n−1))` and the final
/// `q(G₁) < 2(rn − kδ − 2r)/r`. Rational steps are compared after clearing
/// the denominator `r²(n − 1)`.
pub fn chain_check_q(
    n: u64,
    delta: u64,
    p: FamilyParams,
    s: u64,
    cfg: &VerifyConfig,
) -> Result<VerificationReport, VerifyError> {
    let spec = chain_spec(n, delta, p, s, threshold_signless(delta.max(1), p)?)?;
    let g = build_extremal(&spec);
    let q = radius(&g, MatrixKind::SignlessLaplacian, cfg)?;
    let (k, r) = (p.k() as i128, p.r() as i128);
    let (ni, di, si) = (n as i128, delta as i128, s as i128);
    let e = spec.edge_count() as i128;
    let das_scaled = r * r * (2 * e + (ni - 1) * (ni - 2));
    let g_s = g_value(si, ni, p);
    let g_top = g_value(di + 1, ni, p);
    let t = target(n, delta, p);
    let top_scaled = 2 * r * (ni - 1) * t;
    let expansion = top_scaled
        - (2 * r * (k - r) * ni
            - (k * k + 2 * k * r) * di * di
            - (2 * k * k + 3 * k * r + 2 * r * r) * di
            - k * k
            - 3 * k * r);

    let mut rep = VerificationReport::new(Mode::ChainSignless, record(n, delta, p, Some(s)));
    rep.push(Step::new(
        "q(G1(s)) <= 2e/(n - 1) + n - 2",
        q,
        Relation::Le,
        2.0 * e as f64 / (n - 1) as f64 + n as f64 - 2.0,
        cfg.chain_tol,
        StepRole::Claim,
    ));
    rep.push(Step::exact(
        "r^2 (2e + (n - 1)(n - 2)) <= g(s)",
        das_scaled,
        Relation::Le,
        g_s,
        StepRole::Claim,
    ));
    rep.push(Step::exact("g(s) <= g(delta + 1)", g_s, Relation::Le, g_top, StepRole::Claim));
    rep.push(Step::exact(
        "g(delta + 1) < 2r(n - 1)(rn - k delta - 2r)",
        g_top,
        Relation::Lt,
        top_scaled,
        StepRole::Diagnostic,
    ));
    rep.push(Step::exact(
        "g(delta + 1) = expanded form",
        g_top,
        Relation::Eq,
        expansion,
        StepRole::Diagnostic,
    ));
    rep.push(Step::new(
        "q(G1(s)) < 2(rn - k delta - 2r) / r",
        q,
        Relation::Lt,
        2.0 * t as f64 / r as f64,
        cfg.chain_tol,
        StepRole::Claim,
    ));
    rep.notes.push(format!("expansion residual g(delta + 1) - expanded form = {}", g_top - expansion));
    rep.overall = rep.chain_outcome();
    Ok(rep)
}

/// Checks that `G₁(δ)` has no factor with the separator as certificate, that
/// every `G₁(s)` with `δ + 1 ≤ s < rn/(k+r)` is spectrally separated from it
/// by more than `gap_tol` for both `ρ` and `q`, and that `ρ(G₁(δ))` and
/// `q(G₁(δ))` exceed those of the clique `K_{n−⌊kδ/r⌋−1}` inside it.
pub fn separation_scan(
    n: u64,
    delta: u64,
    p: FamilyParams,
    cfg: &VerifyConfig,
) -> Result<VerificationReport, VerifyError> {
    if delta == 0 {
        return Err(VerifyError::InvalidParameters("delta must be at least 1".into()));
    }
    let min = joint_minimal_order(delta, p)?;
    if n < min {
        return Err(VerifyError::InvalidParameters(format!(
            "order {n} below the minimal admissible order {min}"
        )));
    }
    let spec = ExtremalSpec::new(n, delta, p)?;
    let top = build_extremal(&spec);
    let rho_top = radius(&top, MatrixKind::Adjacency, cfg)?;
    let q_top = radius(&top, MatrixKind::SignlessLaplacian, cfg)?;
    let clique = (n - spec.floor_ks_r() - 2) as f64;

    let mut rep = VerificationReport::new(Mode::Separation, record(n, delta, p, Some(delta)));
    match has_factor(&top, p)?.certificate() {
        Some(c) => {
            rep.push(Step::exact("|S| = delta", c.s.len() as i128, Relation::Eq, delta as i128, StepRole::Claim));
            rep.push(Step::exact(
                "r i(G1 - S) > k |S|",
                c.lhs as i128,
                Relation::Gt,
                c.rhs as i128,
                StepRole::Claim,
            ));
        }
        None => {
            rep.push(Step::exact("G1(delta) has a violating set", 0, Relation::Eq, 1, StepRole::Claim));
        }
    }
    let (k, r) = (p.k() as i128, p.r() as i128);
    rep.push(Step::exact(
        "r (floor(k delta / r) + 1) > k delta",
        r * (spec.floor_ks_r() as i128 + 1),
        Relation::Gt,
        k * delta as i128,
        StepRole::Claim,
    ));
    rep.push(Step::new(
        "rho(G1(delta)) > n - floor(k delta / r) - 2",
        rho_top,
        Relation::Gt,
        clique,
        cfg.chain_tol,
        StepRole::Claim,
    ));
    rep.push(Step::new(
        "q(G1(delta)) > 2(n - floor(k delta / r) - 2)",
        q_top,
        Relation::Gt,
        2.0 * clique,
        cfg.chain_tol,
        StepRole::Claim,
    ));

    let range: Vec<u64> = case_two_range(n, delta, p).collect();
    let rows: Vec<Result<(u64, f64, f64), VerifyError>> = range
        .par_iter()
        .map(|&s| {
            let g = build_extremal(&ExtremalSpec::new(n, s, p)?);
            Ok((
                s,
                radius(&g, MatrixKind::Adjacency, cfg)?,
                radius(&g, MatrixKind::SignlessLaplacian, cfg)?,
            ))
        })
        .collect();
    for row in rows {
        let (s, rho, q) = row?;
        rep.push(Step::new(
            format!("rho(G1({s})) < rho(G1(delta))"),
            rho,
            Relation::Lt,
            rho_top,
            cfg.gap_tol,
            StepRole::Claim,
        ));
        rep.push(Step::new(
            format!("q(G1({s})) < q(G1(delta))"),
            q,
            Relation::Lt,
            q_top,
            cfg.gap_tol,
            StepRole::Claim,
        ));
    }
    rep.overall = rep.chain_outcome();
    if rep.steps.iter().any(|s| s.status == StepStatus::Boundary) {
        rep.notes.push("some separations fall inside the gap tolerance".into());
    }
    Ok(rep)
}

/// Checks one instance of the spectral sufficient condition of kind `kind`.
///
/// The condition is an implication: when `value(G) < value(G₁(δ))` the
/// instance is `NotApplicable`. When the hypothesis holds, `G` must have a
/// factor or be isomorphic to `G₁(δ)`; otherwise the report fails and carries
/// `G` and a violating set as counterexample. Instances inside the
/// `hypothesis_tol` band that have no factor and are not `G₁(δ)` are
/// reported as `Boundary`.
pub fn verify_theorem_instance(
    g: &Graph,
    delta: u64,
    p: FamilyParams,
    kind: MatrixKind,
    cfg: &VerifyConfig,
) -> Result<VerificationReport, VerifyError> {
    let n = g.order() as u64;
    let mode = Mode::Instance;
    let mut rep = VerificationReport::new(mode, record(n, delta, p, Some(delta)));

    let not_applicable = |mut rep: VerificationReport, why: String| {
        rep.notes.push(why);
        rep.overall = Outcome::NotApplicable;
        Ok(rep)
    };
    if delta == 0 {
        return not_applicable(rep, "delta must be at least 1".into());
    }
    if !g.is_connected() {
        return not_applicable(rep, "graph is not connected".into());
    }
    let min_degree = g.min_degree().unwrap_or(0) as u64;
    if min_degree != delta {
        return not_applicable(rep, format!("minimum degree is {min_degree}, not {delta}"));
    }
    let threshold = threshold_for(kind, delta, p)?;
    if n < threshold.minimal_order() {
        return not_applicable(rep, format!("order {n} below threshold {}", threshold.as_f64()));
    }
    let spec = match ExtremalSpec::new(n, delta, p) {
        Ok(s) => s,
        Err(e) => return not_applicable(rep, e.to_string()),
    };
    let extremal = build_extremal(&spec);
    let value = radius(g, kind, cfg)?;
    let value_top = radius(&extremal, kind, cfg)?;
    let name = match kind {
        MatrixKind::Adjacency => "rho",
        MatrixKind::SignlessLaplacian => "q",
    };
    let hypothesis = Step::new(
        format!("{name}(G) >= {name}(G1(delta))"),
        value,
        Relation::Ge,
        value_top,
        cfg.hypothesis_tol,
        StepRole::Diagnostic,
    );
    let hypothesis_holds = hypothesis.status.holds();
    let in_band = (value - value_top).abs() <= cfg.hypothesis_tol;
    rep.push(hypothesis);
    if !hypothesis_holds {
        rep.overall = Outcome::NotApplicable;
        return Ok(rep);
    }

    let verdict = has_factor(g, p)?;
    let isomorphic = if verdict.has_factor() || n as usize > cfg.iso_cap {
        false
    } else {
        find_isomorphism(g, &extremal).is_some()
    };
    let concluded = verdict.has_factor() || isomorphic;
    rep.push(Step::exact(
        "G has a factor or G = G1(delta)",
        i128::from(concluded),
        Relation::Eq,
        1,
        StepRole::Claim,
    ));
    if isomorphic {
        rep.notes.push("G is isomorphic to G1(delta)".into());
    }
    rep.overall = if concluded {
        Outcome::Pass
    } else if in_band {
        // equality band: cannot tell G from G1(delta) by the spectrum alone
        rep.steps.last_mut().unwrap().role = StepRole::Diagnostic;
        Outcome::Boundary
    } else {
        Outcome::Fail
    };
    if !concluded {
        rep.counterexample = Some(Counterexample {
            graph6: to_graph6(g).expect("order within graph6 range"),
            separator: verdict.certificate().map(|c: &Certificate| c.s.to_vec()),
        });
    }
    Ok(rep)
}

/// Random connected graph on `n` vertices with minimum degree exactly
/// `delta`, reproducible from `seed`.
///
/// Builds a random spanning tree, adds each remaining pair with a random
/// density, raises low degrees to `delta`, then trims one random vertex down
/// to degree `delta` while keeping the graph connected. Attempts that miss
/// the target are retried.
pub fn random_connected_graph(n: usize, delta: usize, seed: u64) -> Result<Graph, VerifyError> {
    const ATTEMPTS: usize = 64;
    if delta == 0 || delta >= n {
        return Err(VerifyError::InvalidParameters(format!(
            "need 1 <= delta < n, got delta = {delta}, n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        let mut g = Graph::empty(n);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        for i in 1..n {
            let parent = order[rng.gen_range(0..i)];
            g.set_edge(order[i], parent, true);
        }
        let u: f64 = rng.gen();
        let density = 1.0 - u * u * u;
        for a in 0..n {
            for b in a + 1..n {
                if !g.has_edge(a, b) && rng.gen_bool(density) {
                    g.set_edge(a, b, true);
                }
            }
        }
        for v in 0..n {
            let mut options: Vec<usize> = (0..n).filter(|&w| w != v && !g.has_edge(v, w)).collect();
            options.shuffle(&mut rng);
            while g.degree(v) < delta {
                let w = options.pop().expect("delta < n leaves room");
                g.set_edge(v, w, true);
            }
        }
        let target = rng.gen_range(0..n);
        let mut nbrs = g.neighbors(target).to_vec();
        nbrs.shuffle(&mut rng);
        for w in nbrs {
            if g.degree(target) == delta {
                break;
            }
            if g.degree(w) <= delta {
                continue;
            }
            g.set_edge(target, w, false);
            if !g.is_connected() {
                g.set_edge(target, w, true);
            }
        }
        if g.is_connected() && g.min_degree() == Some(delta) {
            return Ok(g);
        }
    }
    Err(VerifyError::RetryCapExhausted(ATTEMPTS))
}

/// Tally of [`random_scan`].
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ScanSummary {
    pub total: usize,
    pub pass: usize,
    pub not_applicable: usize,
    pub boundary: usize,
    pub fail: usize,
    /// Reports with `overall = Fail`, in seed order.
    pub failures: Vec<VerificationReport>,
}

/// Runs [`verify_theorem_instance`] on random graphs for seeds
/// `first_seed..first_seed + count`; results are merged in seed order.
pub fn random_scan(
    n: usize,
    delta: u64,
    p: FamilyParams,
    kind: MatrixKind,
    first_seed: u64,
    count: u64,
    cfg: &VerifyConfig,
) -> Result<ScanSummary, VerifyError> {
    let reports: Vec<Result<VerificationReport, VerifyError>> = (first_seed..first_seed + count)
        .into_par_iter()
        .map(|seed| {
            let g = random_connected_graph(n, delta as usize, seed)?;
            verify_theorem_instance(&g, delta, p, kind, cfg)
        })
        .collect();
    let mut summary = ScanSummary::default();
    for rep in reports {
        let rep = rep?;
        summary.total += 1;
        match rep.overall {
            Outcome::Pass => summary.pass += 1,
            Outcome::NotApplicable => summary.not_applicable += 1,
            Outcome::Boundary => summary.boundary += 1,
            Outcome::Fail => {
                summary.fail += 1;
                summary.failures.push(rep);
            }
        }
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(k: u64, r: u64) -> FamilyParams {
        FamilyParams::new(k, r).unwrap()
    }

    fn cfg() -> VerifyConfig {
        VerifyConfig::default()
    }

    #[test]
    fn evaluate_relations() {
        assert_eq!(evaluate(1.0, Relation::Lt, 2.0, 0.0), StepStatus::Holds);
        assert_eq!(evaluate(2.0, Relation::Lt, 2.0, 0.0), StepStatus::Boundary);
        assert_eq!(evaluate(3.0, Relation::Lt, 2.0, 0.0), StepStatus::Fails);
        assert_eq!(evaluate(2.0, Relation::Le, 2.0, 0.0), StepStatus::Holds);
        assert_eq!(evaluate(2.0 + 1e-12, Relation::Le, 2.0, 1e-9), StepStatus::Holds);
        assert_eq!(evaluate(5.0, Relation::Gt, 5.0 - 1e-7, 1e-6), StepStatus::Boundary);
        assert_eq!(evaluate(4.0, Relation::Eq, 4.0, 0.0), StepStatus::Holds);
        assert_eq!(evaluate(628.0, Relation::Eq, 624.0, 0.0), StepStatus::Fails);
    }

    #[test]
    fn adjacency_chain_with_expansion_residual() {
        let rep = chain_check_adjacency(16, 1, p(3, 2), 2, &cfg()).unwrap();
        let hong = rep.step("rho(G1(s)) <= sqrt").unwrap();
        assert!((hong.rhs - 133f64.sqrt()).abs() < 1e-12);
        assert_eq!(rep.step("f(s) <= f(delta").unwrap().lhs, 628.0);
        let diag = rep.step("f(delta + 1) < (rn").unwrap();
        assert_eq!((diag.lhs, diag.rhs), (628.0, 625.0));
        assert_eq!(diag.status, StepStatus::Fails);
        let expansion = rep.step("f(delta + 1) = expanded").unwrap();
        assert_eq!(expansion.lhs - expansion.rhs, 4.0);
        let last = rep.steps.last().unwrap();
        assert_eq!(last.rhs, 12.5);
        assert_eq!(last.status, StepStatus::Holds);
        assert_eq!(rep.overall, Outcome::Pass);
        assert!(rep.revalidate());
    }

    #[test]
    fn adjacency_chain_all_strict() {
        let rep = chain_check_adjacency(15, 1, p(2, 1), 2, &cfg()).unwrap();
        let diag = rep.step("f(delta + 1) < (rn").unwrap();
        assert_eq!((diag.lhs, diag.rhs), (116.0, 121.0));
        assert!(rep.steps.iter().filter(|s| s.relation != Relation::Eq).all(|s| s.status == StepStatus::Holds));
        assert!(rep.passed());
    }

    #[test]
    fn signless_chain_boundary() {
        let rep = chain_check_q(23, 1, p(3, 2), 2, &cfg()).unwrap();
        let diag = rep.step("g(delta + 1) < 2r").unwrap();
        assert_eq!((diag.lhs, diag.rhs), (3432.0, 3432.0));
        assert_eq!(diag.status, StepStatus::Boundary);
        assert_eq!(rep.step("g(delta + 1) = expanded").unwrap().status, StepStatus::Holds);
        let last = rep.steps.last().unwrap();
        assert_eq!(last.rhs, 39.0);
        assert!(last.lhs < 39.0);
        assert!(rep.passed());

        let rep = chain_check_q(24, 1, p(3, 2), 2, &cfg()).unwrap();
        assert!(rep.steps.iter().filter(|s| s.relation != Relation::Eq).all(|s| s.status == StepStatus::Holds));

        let rep = chain_check_q(23, 1, p(3, 2), 3, &cfg()).unwrap();
        assert_eq!(rep.step("g(s) <= g(delta").unwrap().status, StepStatus::Holds);
        assert!(rep.passed());
    }

    #[test]
    fn chain_preconditions() {
        assert!(chain_check_adjacency(15, 1, p(3, 2), 2, &cfg()).is_err());
        assert!(chain_check_adjacency(16, 1, p(3, 2), 1, &cfg()).is_err());
        assert!(chain_check_q(22, 1, p(3, 2), 2, &cfg()).is_err());
        assert!(matches!(
            chain_check_adjacency(16, 1, p(3, 2), 7, &cfg()),
            Err(VerifyError::Extremal(_))
        ));
    }

    #[test]
    fn separation_examples() {
        let rep = separation_scan(23, 1, p(3, 2), &cfg()).unwrap();
        assert!(rep.passed(), "{rep:#?}");
        assert!(rep.step("q(G1(delta)) > 2").unwrap().lhs > 40.0);
        assert!(rep.revalidate());

        let rep = separation_scan(17, 1, p(2, 1), &cfg()).unwrap();
        assert!(rep.passed());
        let clique = rep.step("rho(G1(delta)) >").unwrap();
        assert_eq!(clique.rhs, 13.0);
        assert!(clique.lhs > 13.0);
        let separated = rep
            .steps
            .iter()
            .filter(|s| s.description.starts_with("rho(G1(") && !s.description.starts_with("rho(G1(delta"))
            .count();
        // s in {2, 3, 4, 5}
        assert_eq!(separated, 4);

        assert!(separation_scan(16, 1, p(3, 2), &cfg()).is_err());
    }

    #[test]
    fn extremal_instance_takes_isomorphism_branch() {
        let params = p(2, 1);
        let g = build_extremal(&ExtremalSpec::new(15, 1, params).unwrap());
        let shuffled = g.permute(&(0..15).rev().collect::<Vec<_>>());
        for kind in [MatrixKind::Adjacency, MatrixKind::SignlessLaplacian] {
            let n = threshold_for(kind, 1, params).unwrap().minimal_order();
            if n != 15 {
                continue;
            }
            let rep = verify_theorem_instance(&shuffled, 1, params, kind, &cfg()).unwrap();
            assert_eq!(rep.overall, Outcome::Pass);
            assert!(rep.notes.iter().any(|n| n.contains("isomorphic")));
        }
    }

    #[test]
    fn complete_graph_instance() {
        let rep = verify_theorem_instance(&Graph::complete(15), 14, p(2, 1), MatrixKind::Adjacency, &cfg()).unwrap();
        assert!(matches!(rep.overall, Outcome::Pass | Outcome::NotApplicable));
        let rep = verify_theorem_instance(&Graph::complete(15), 1, p(2, 1), MatrixKind::Adjacency, &cfg()).unwrap();
        assert_eq!(rep.overall, Outcome::NotApplicable);
    }

    #[test]
    fn sparse_instance_not_applicable() {
        let g = Graph::path(15);
        let rep = verify_theorem_instance(&g, 1, p(2, 1), MatrixKind::Adjacency, &cfg()).unwrap();
        assert_eq!(rep.overall, Outcome::NotApplicable);
        assert_eq!(rep.steps[0].status, StepStatus::Fails);
    }

    #[test]
    fn random_graph_contract() {
        let a = random_connected_graph(8, 2, 1).unwrap();
        let b = random_connected_graph(8, 2, 1).unwrap();
        assert_eq!(to_graph6(&a).unwrap(), to_graph6(&b).unwrap());
        assert!(a.is_connected());
        assert_eq!(a.min_degree(), Some(2));

        for seed in 0..5 {
            assert_eq!(random_connected_graph(5, 4, seed).unwrap(), Graph::complete(5));
        }
        let g = random_connected_graph(6, 1, 7).unwrap();
        assert!(g.is_connected() && g.min_degree() == Some(1));

        assert!(random_connected_graph(5, 5, 0).is_err());
        assert!(random_connected_graph(5, 0, 0).is_err());
    }

    #[test]
    fn random_graphs_hit_every_degree() {
        for n in 2..12 {
            for delta in 1..n {
                for seed in 0..10 {
                    let g = random_connected_graph(n, delta, seed).unwrap();
                    assert_eq!(g.min_degree(), Some(delta), "n={n} delta={delta} seed={seed}");
                    assert!(g.is_connected());
                }
            }
        }
    }

    #[test]
    fn revalidation_detects_tampering() {
        let mut rep = chain_check_adjacency(15, 1, p(2, 1), 2, &cfg()).unwrap();
        assert!(rep.revalidate());
        rep.steps[0].lhs = 1e9;
        assert!(!rep.revalidate());
    }

    #[test]
    fn grid_points() {
        let pts = ScanGrid::default().points().unwrap();
        assert_eq!(pts.len(), 32);
        assert_eq!(pts[0], (17, 1, p(2, 1)));
        assert_eq!(pts[3], (22, 1, p(2, 1)));
    }
}
