//! Closed-form values of the worked examples, the indicator figures and the
//! measure-comparison table, each recomputed numerically side by side.
//!
//! Every target yields a [`ReproReport`]: a list of closed-form versus
//! computed values with absolute differences, plus boolean facts (sign
//! conditions, zeros) and, for the figure targets, a CSV table.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::entropy::LIMIT_TOL;
use crate::error::{invalid, Error, Result};
use crate::inequalities::{
    polygon_check, tau_from_marginals, tau_hat_indicator, tau_indicator, DEFAULT_TOL,
};
use crate::measures::{
    marginal_vector, measure_network, measure_pure, network_marginal_vector, reduced_density, Bipartition,
    MeasureSpec,
};
use crate::search::{fuzz_polygon, grid_scan, linspace, scan_csv, to_csv, Family, ScanQuantity, SearchConfig};
use crate::states::{
    compose_network, generalized_ghz3, generalized_ghz3_weights, ghz, star4, w_qutrit, NetworkSpec, Resource,
    ResourceKind,
};
use crate::tensor::{Dims, SiteSet};

/// A target passes when every closed-form/computed pair agrees this closely.
pub const REPRO_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Example1,
    Example2,
    Example3,
    Example4,
    Example5,
    Example6,
    Fig2,
    Fig4a,
    Fig4b,
    Table1,
}

impl Target {
    pub const ALL: [Target; 10] = [
        Target::Example1,
        Target::Example2,
        Target::Example3,
        Target::Example4,
        Target::Example5,
        Target::Example6,
        Target::Fig2,
        Target::Fig4a,
        Target::Fig4b,
        Target::Table1,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Target::Example1 => "example1",
            Target::Example2 => "example2",
            Target::Example3 => "example3",
            Target::Example4 => "example4",
            Target::Example5 => "example5",
            Target::Example6 => "example6",
            Target::Fig2 => "fig2",
            Target::Fig4a => "fig4a",
            Target::Fig4b => "fig4b",
            Target::Table1 => "table1",
        }
    }

    /// Targets whose main output is a CSV table.
    pub fn emits_csv(&self) -> bool {
        matches!(self, Target::Fig2 | Target::Fig4a | Target::Fig4b)
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Target::ALL
            .iter()
            .find(|t| t.name() == s)
            .copied()
            .ok_or_else(|| Error::InvalidInput(format!("unknown target {s:?}")))
    }
}

/// Optional overrides; unset parameters fall back to per-target defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReproOptions {
    pub grid: Option<usize>,
    pub q: Option<f64>,
    pub r: Option<f64>,
    pub s: Option<f64>,
    pub d: Option<usize>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub seed: u64,
    pub trials: Option<u64>,
    /// Worker threads for the fuzz-backed targets; 0 uses the global pool.
    pub workers: usize,
}

impl ReproOptions {
    fn qs(&self, default: &[f64]) -> Vec<f64> {
        self.q.map(|q| vec![q]).unwrap_or_else(|| default.to_vec())
    }

    fn rs_pairs(&self, default: &[(f64, f64)]) -> Vec<(f64, f64)> {
        match (self.r, self.s) {
            (None, None) => default.to_vec(),
            (r, s) => {
                let rs: Vec<f64> = r.map(|x| vec![x]).unwrap_or_else(|| default.iter().map(|p| p.0).collect());
                let ss: Vec<f64> = s.map(|x| vec![x]).unwrap_or_else(|| default.iter().map(|p| p.1).collect());
                let mut out: Vec<(f64, f64)> = rs.iter().flat_map(|&r| ss.iter().map(move |&s| (r, s))).collect();
                out.dedup();
                out
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub quantity: String,
    pub closed_form: f64,
    pub computed: f64,
    pub abs_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fact {
    pub description: String,
    pub value: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub spec: MeasureSpec,
    pub dims: Dims,
    /// `proved` where a proof is known for this measure and local dimension,
    /// `open` otherwise.
    pub status: String,
    pub trials: u64,
    pub violations: u64,
    pub violating_trials: u64,
    pub min_margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproReport {
    pub target: Target,
    pub seed: u64,
    pub rows: Vec<Comparison>,
    pub facts: Vec<Fact>,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub table: Vec<Table1Row>,
    /// Grid points compared in addition to `rows` (figure targets).
    pub grid_points: usize,
    pub max_abs_diff: f64,
    pub passed: bool,
    #[serde(skip)]
    pub csv: Option<String>,
}

impl ReproReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct Recorder {
    target: Target,
    seed: u64,
    rows: Vec<Comparison>,
    facts: Vec<Fact>,
    notes: Vec<String>,
    table: Vec<Table1Row>,
    grid_points: usize,
    grid_max: f64,
    csv: Option<String>,
}

impl Recorder {
    fn new(target: Target, seed: u64) -> Self {
        Recorder {
            target,
            seed,
            rows: Vec::new(),
            facts: Vec::new(),
            notes: Vec::new(),
            table: Vec::new(),
            grid_points: 0,
            grid_max: 0.0,
            csv: None,
        }
    }

    fn compare(&mut self, quantity: impl Into<String>, closed_form: f64, computed: f64) {
        let abs_diff = (closed_form - computed).abs();
        self.rows.push(Comparison { quantity: quantity.into(), closed_form, computed, abs_diff });
    }

    fn fact(&mut self, description: impl Into<String>, value: f64, holds: bool) {
        self.facts.push(Fact { description: description.into(), value, holds });
    }

    fn grid_diff(&mut self, closed_form: f64, computed: f64) {
        self.grid_points += 1;
        let d = (closed_form - computed).abs();
        // NaN must not hide behind max()
        self.grid_max = if d.is_nan() { f64::NAN } else { self.grid_max.max(d) };
    }

    fn finish(self) -> ReproReport {
        let mut max_abs_diff = self.grid_max;
        for r in &self.rows {
            max_abs_diff = if r.abs_diff.is_nan() { f64::NAN } else { max_abs_diff.max(r.abs_diff) };
        }
        let passed = max_abs_diff < REPRO_TOL && self.facts.iter().all(|f| f.holds);
        ReproReport {
            target: self.target,
            seed: self.seed,
            rows: self.rows,
            facts: self.facts,
            notes: self.notes,
            table: self.table,
            grid_points: self.grid_points,
            max_abs_diff,
            passed,
            csv: self.csv,
        }
    }
}

/// Closed form of a measure as a function of the flat-marginal rank `k`.
type ClosedForm = Box<dyn Fn(f64) -> f64>;

/// `1 - Tr ρ^q` for the maximally mixed state of dimension `k`.
pub fn uniform_fq(k: f64, q: f64) -> f64 {
    1.0 - k.powf(1.0 - q)
}

/// Unified-(r, s) entropy of the maximally mixed state of dimension `k`,
/// `(1 - k^{rs-s}) / ((1-r) s k^{rs-s})`, with the `ln k` limit at `r = 1`
/// or `s = 0`.
pub fn uniform_unified(k: f64, r: f64, s: f64) -> f64 {
    if (r - 1.0).abs() < LIMIT_TOL || s < LIMIT_TOL {
        return k.ln();
    }
    let e = k.powf(r * s - s);
    (1.0 - e) / ((1.0 - r) * s * e)
}

/// Shannon entropy in bits of a probability vector (`0 log 0 = 0`).
pub fn shannon_bits(p: &[f64]) -> f64 {
    -p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.log2()).sum::<f64>()
}

fn qconc(q: f64) -> MeasureSpec {
    MeasureSpec::QConcurrence { q }
}

fn unified(r: f64, s: f64) -> MeasureSpec {
    MeasureSpec::UnifiedEnt { r, s }
}

const DEFAULT_RS: [(f64, f64); 3] = [(2.0, 1.0), (3.0, 0.5), (1.5, 2.0)];

pub fn reproduce(target: Target, opts: &ReproOptions) -> Result<ReproReport> {
    let mut rec = Recorder::new(target, opts.seed);
    match target {
        Target::Example1 => example1(&mut rec)?,
        Target::Example2 => example2(&mut rec, opts)?,
        Target::Example3 => example3(&mut rec, opts)?,
        Target::Example4 => example4(&mut rec, opts)?,
        Target::Example5 => example5(&mut rec, opts)?,
        Target::Example6 => example6(&mut rec, opts)?,
        Target::Fig2 => fig2(&mut rec, opts)?,
        Target::Fig4a => fig4a(&mut rec, opts)?,
        Target::Fig4b => fig4b(&mut rec, opts)?,
        Target::Table1 => table1(&mut rec, opts)?,
    }
    Ok(rec.finish())
}

fn example1(rec: &mut Recorder) -> Result<()> {
    let angles = [(PI / 3.0, PI / 5.0), (PI / 2.0, PI / 4.0), (1.0, 2.0), (2.5, 0.3), (0.7, 4.0)];
    for (theta, phi) in angles {
        let psi = generalized_ghz3(theta, phi);
        let h = shannon_bits(&generalized_ghz3_weights(theta, phi));
        let mv = marginal_vector(&psi, &MeasureSpec::Eof)?;
        for (j, &e) in mv.values().iter().enumerate() {
            rec.compare(format!("E_f^{{{j}|rest}}(theta={theta:.6}, phi={phi:.6})"), h, e);
        }
        rec.compare(format!("tau_Ef(theta={theta:.6}, phi={phi:.6})"), h, tau_from_marginals(&mv).value);
    }
    let zeros = [(PI, 0.0), (PI, 1.0), (PI, PI), (PI / 2.0, PI / 2.0), (PI / 2.0, PI), (PI / 2.0, 1.5 * PI), (PI / 2.0, 2.0 * PI)];
    for (theta, phi) in zeros {
        let t = tau_indicator(&generalized_ghz3(theta, phi), &MeasureSpec::Eof)?.value;
        rec.fact(format!("tau_Ef vanishes at theta={theta:.6}, phi={phi:.6}"), t, t.abs() < 1e-9);
    }
    Ok(())
}

fn example2(rec: &mut Recorder, opts: &ReproOptions) -> Result<()> {
    let w = w_qutrit();
    for q in opts.qs(&[2.0, 3.0, 4.0, 5.0, 6.0]) {
        let mv = marginal_vector(&w, &qconc(q))?;
        let exact = 1.0 - (2.0f64 / 3.0).powf(q) - (1.0f64 / 3.0).powf(q);
        let quoted = 1.0 - 2f64.powf(q) / 3f64.powf(q) - 2.0 / 6f64.powf(q);
        for (j, &c) in mv.values().iter().enumerate() {
            rec.compare(format!("C_q^{{{j}|rest}}(q={q}) [1-(2/3)^q-(1/3)^q]"), exact, c);
            rec.compare(format!("C_q^{{{j}|rest}}(q={q}) [1-2^q/3^q-2/6^q]"), quoted, c);
        }
        rec.compare(format!("tau_Cq(q={q}) [= C_q]"), exact, tau_from_marginals(&mv).value);
    }
    for (r, s) in opts.rs_pairs(&DEFAULT_RS) {
        let mv = marginal_vector(&w, &unified(r, s))?;
        let exact = if (r - 1.0).abs() < LIMIT_TOL || s < LIMIT_TOL {
            // limit: entropy of {2/3, 1/3} in nats (von Neumann) or Rényi-r in nats
            let p: [f64; 2] = [2.0 / 3.0, 1.0 / 3.0];
            if (r - 1.0).abs() < LIMIT_TOL {
                shannon_bits(&p) * LN_2
            } else {
                (p[0].powf(r) + p[1].powf(r)).ln() / (1.0 - r)
            }
        } else {
            ((2f64.powf(r) + 1.0).powf(s) / 3f64.powf(r * s) - 1.0) / ((1.0 - r) * s)
        };
        for (j, &u) in mv.values().iter().enumerate() {
            rec.compare(format!("U_rs^{{{j}|rest}}(r={r}, s={s})"), exact, u);
        }
        rec.compare(format!("tau_Urs(r={r}, s={s}) [= U_rs]"), exact, tau_from_marginals(&mv).value);
    }
    rec.notes.push(
        "single-site spectrum of the W-class state is {2/3, 1/3, 0}: the |100> and |200> terms share the \
         remainder |00> and are coherent, so C_q = 1-(2/3)^q-(1/3)^q; rows labelled [1-2^q/3^q-2/6^q] \
         assume the spectrum {2/3, 1/6, 1/6} and do not match"
            .into(),
    );
    Ok(())
}

fn example3(rec: &mut Recorder, opts: &ReproOptions) -> Result<()> {
    let ds = opts.d.map(|d| vec![d]).unwrap_or_else(|| vec![2, 3, 5]);
    let ms = opts.m.map(|m| vec![m]).unwrap_or_else(|| vec![3, 4]);
    let qs = opts.qs(&[2.0, 3.0]);
    let rs = opts.rs_pairs(&DEFAULT_RS);
    for &d in &ds {
        for &m in &ms {
            let psi = ghz(d, m)?;
            let k = d as f64;
            let mut specs: Vec<(MeasureSpec, f64, String)> =
                qs.iter().map(|&q| (qconc(q), uniform_fq(k, q), format!("C_q(q={q})"))).collect();
            specs.extend(rs.iter().map(|&(r, s)| (unified(r, s), uniform_unified(k, r, s), format!("U_rs(r={r}, s={s})"))));
            for (spec, c, name) in specs {
                let tag = format!("d={d}, m={m}");
                let mv = marginal_vector(&psi, &spec)?;
                for (j, &e) in mv.values().iter().enumerate() {
                    rec.compare(format!("{name}^{{{j}|rest}} {tag}"), c, e);
                }
                rec.compare(format!("tau {name} {tag} [(m-2) C]"), (m as f64 - 2.0) * c, tau_from_marginals(&mv).value);
                let th = tau_hat_indicator(&psi, &[], &spec)?.value;
                rec.compare(format!("tau_hat {name} {tag} [C]"), c, th);
            }
        }
    }
    rec.notes.push(
        "every cut of a GHZ state has the same maximally mixed d-level reduced state, so over cuts with |A| >= 2 \
         the bipartition indicator is min (|A|-1) C = C, which equals (m-2) C only for m = 3"
            .into(),
    );
    Ok(())
}

fn example4(rec: &mut Recorder, opts: &ReproOptions) -> Result<()> {
    let ns = opts.n.map(|n| vec![n]).unwrap_or_else(|| vec![2, 3, 4]);
    let qs = opts.qs(&[2.0, 3.0]);
    let rs = opts.rs_pairs(&DEFAULT_RS);
    for &n in &ns {
        let spec = NetworkSpec::complete_graph_epr(n);
        let psi = spec.pure_state()?.expect("EPR networks are pure");
        // each party holds n-1 EPR halves: a maximally mixed 2^{n-1}-level state
        let k = 2f64.powi(n as i32 - 1);
        let dense = if psi.dims().total() <= 256 { Some(compose_network(&spec)?) } else { None };
        let mut specs: Vec<(MeasureSpec, f64, f64, String)> = qs
            .iter()
            .map(|&q| (qconc(q), uniform_fq(k, q), (n as f64 - 1.0) * uniform_fq(2.0, q), format!("C_q(q={q})")))
            .collect();
        specs.extend(rs.iter().map(|&(r, s)| {
            (unified(r, s), uniform_unified(k, r, s), (n as f64 - 1.0) * uniform_unified(2.0, r, s), format!("U_rs(r={r}, s={s})"))
        }));
        for (mspec, exact, additive, name) in specs {
            let mv = marginal_vector(&psi, &mspec)?;
            for (j, &e) in mv.values().iter().enumerate() {
                rec.compare(format!("{name}^{{{j}|rest}} n={n}"), exact, e);
                rec.fact(
                    format!("{name}^{{{j}|rest}} n={n} <= (n-1) x single-pair value {additive:.12}"),
                    additive - e,
                    e <= additive + DEFAULT_TOL,
                );
            }
            for j in 0..n {
                let p = polygon_check(&mv, j, DEFAULT_TOL)?;
                rec.fact(format!("polygon margin {name} j={j} n={n}"), p.margin, p.satisfied);
            }
            if let Some(net) = &dense {
                for j in 0..n {
                    let e = measure_network(net, &Bipartition::one_to_group(j, n)?, &mspec)?;
                    rec.compare(format!("{name}^{{{j}|rest}} n={n} (density path)"), exact, e);
                }
            }
        }
    }
    rec.notes.push(
        "each party's reduced state is the tensor product of n-1 maximally mixed qubits, so C_q = 1 - 2^{(1-q)(n-1)} \
         and U_rs is the unified entropy of a uniform 2^{n-1}-level spectrum; these are strictly below the \
         (n-1)-fold single-pair value for n > 2, equal at n = 2"
            .into(),
    );
    Ok(())
}

/// Three parties: EPR(0,1), GHZ(3,3) over all three, GHZ-diagonal δ(2) on (1,2).
pub fn example5_network() -> NetworkSpec {
    NetworkSpec {
        parties: 3,
        resources: vec![
            Resource { kind: ResourceKind::Epr, parties: vec![0, 1] },
            Resource { kind: ResourceKind::Ghz { d: 3, m: 3 }, parties: vec![0, 1, 2] },
            Resource { kind: ResourceKind::GhzDiagonal { d: 2 }, parties: vec![1, 2] },
        ],
    }
}

fn example5(rec: &mut Recorder, opts: &ReproOptions) -> Result<()> {
    let net = compose_network(&example5_network())?;
    // party marginals: I2/2 ⊗ I3/3, I2/2 ⊗ I3/3 ⊗ I2/2, I3/3 ⊗ I2/2
    let ks = [6.0, 12.0, 6.0];
    let mut specs: Vec<(MeasureSpec, ClosedForm, String)> = opts
        .qs(&[2.0, 3.0])
        .into_iter()
        .map(|q| (qconc(q), Box::new(move |k| uniform_fq(k, q)) as ClosedForm, format!("C_q(q={q})")))
        .collect();
    for (r, s) in opts.rs_pairs(&DEFAULT_RS) {
        specs.push((unified(r, s), Box::new(move |k| uniform_unified(k, r, s)), format!("U_rs(r={r}, s={s})")));
    }
    for (spec, closed, name) in specs {
        let mv = network_marginal_vector(&net, &spec)?;
        for (j, (&e, &k)) in mv.values().iter().zip(&ks).enumerate() {
            rec.compare(format!("{name}^{{A{j}|rest}}"), closed(k), e);
        }
        for j in 0..3 {
            let p = polygon_check(&mv, j, DEFAULT_TOL)?;
            rec.fact(format!("polygon margin {name} party {j}"), p.margin, p.satisfied);
        }
    }
    rec.notes.push(
        "network: EPR(0,1), GHZ(3,3) over parties 0,1,2, GHZ-diagonal d=2 on (1,2); particles grouped by party"
            .into(),
    );
    Ok(())
}

/// `(label, side_a, dimension of the maximally mixed reduced state)` for
/// the six cuts of the star network state.
fn star_cuts() -> [(&'static str, Vec<usize>, f64); 6] {
    [
        ("01|23", vec![0, 1], 4.0),
        ("0|123", vec![0], 8.0),
        ("1|023", vec![1], 2.0),
        ("23|01", vec![2, 3], 4.0),
        ("2|013", vec![2], 2.0),
        ("3|012", vec![3], 2.0),
    ]
}

fn example6(rec: &mut Recorder, opts: &ReproOptions) -> Result<()> {
    let psi = star4();
    let mut specs: Vec<(MeasureSpec, ClosedForm, String)> = opts
        .qs(&[2.0, 3.0, 4.0])
        .into_iter()
        .map(|q| (qconc(q), Box::new(move |k| uniform_fq(k, q)) as ClosedForm, format!("C_q(q={q})")))
        .collect();
    let default_rs: Vec<(f64, f64)> =
        [1.5, 2.0, 3.0].iter().flat_map(|&r| [0.5, 1.0, 2.0].into_iter().map(move |s| (r, s))).collect();
    for (r, s) in opts.rs_pairs(&default_rs) {
        specs.push((unified(r, s), Box::new(move |k| uniform_unified(k, r, s)), format!("U_rs(r={r}, s={s})")));
    }
    for (spec, closed, name) in specs {
        for (label, side_a, k) in star_cuts() {
            let cut = Bipartition::from_side_a(side_a, 4)?;
            rec.compare(format!("{name}^{{{label}}}"), closed(k), measure_pure(&psi, &cut, &spec)?);
        }
        let th = tau_hat_indicator(&psi, &[], &spec)?.value;
        rec.compare(format!("tau_hat {name} [E^2|rest + E^3|rest - E^01|23]"), 2.0 * closed(2.0) - closed(4.0), th);
    }
    let rho = reduced_density(&psi, &SiteSet::new([0, 1], 4)?)?;
    let mut spectrum = rho.spectrum().to_vec();
    spectrum.sort_by(|a, b| b.total_cmp(a));
    for (i, &l) in spectrum.iter().enumerate() {
        rec.compare(format!("rho_01 eigenvalue {i}"), if i < 4 { 0.25 } else { 0.0 }, l);
    }
    Ok(())
}

fn fig2(rec: &mut Recorder, opts: &ReproOptions) -> Result<()> {
    let grid = opts.grid.unwrap_or(100);
    let rows = grid_scan(Family::GeneralizedGhz3, grid, &MeasureSpec::Eof, ScanQuantity::Tau)?;
    let mut min = f64::INFINITY;
    for row in &rows {
        rec.grid_diff(shannon_bits(&generalized_ghz3_weights(row.param1, row.param2)), row.value);
        min = min.min(row.value);
    }
    rec.fact(format!("min tau_Ef over {grid}x{grid} grid >= -1e-9"), min, min >= -1e-9);
    for phi in linspace(0.0, 2.0 * PI, 9) {
        let t = tau_indicator(&generalized_ghz3(PI, phi), &MeasureSpec::Eof)?.value;
        rec.fact(format!("tau_Ef(theta=pi, phi={phi:.6}) < 1e-9"), t, t < 1e-9);
    }
    for phi in [PI / 2.0, PI, 1.5 * PI, 2.0 * PI] {
        let t = tau_indicator(&generalized_ghz3(PI / 2.0, phi), &MeasureSpec::Eof)?.value;
        rec.fact(format!("tau_Ef(theta=pi/2, phi={phi:.6}) < 1e-9"), t, t < 1e-9);
    }
    let t = tau_indicator(&generalized_ghz3(PI / 2.0, PI / 4.0), &MeasureSpec::Eof)?.value;
    rec.fact("tau_Ef(theta=pi/2, phi=pi/4) > 0.01", t, t > 0.01);
    rec.csv = Some(scan_csv(&rows));
    Ok(())
}

fn star_tau_hat_closed(f: impl Fn(f64) -> f64) -> f64 {
    2.0 * f(2.0) - f(4.0)
}

fn fig4a(rec: &mut Recorder, opts: &ReproOptions) -> Result<()> {
    let grid = opts.grid.unwrap_or(71);
    if grid < 2 {
        return invalid("grid needs at least 2 points");
    }
    let psi = star4();
    let mut rows = Vec::with_capacity(grid);
    let mut min = f64::INFINITY;
    for q in linspace(2.0, 9.0, grid) {
        let t = tau_hat_indicator(&psi, &[], &qconc(q))?.value;
        rec.grid_diff(star_tau_hat_closed(|k| uniform_fq(k, q)), t);
        min = min.min(t);
        rows.push(vec![q, t]);
    }
    rec.fact("min tau_hat_Cq over q in [2, 9] >= -1e-9", min, min >= -1e-9);
    rec.csv = Some(to_csv(&["param1", "value"], rows));
    Ok(())
}

fn fig4b(rec: &mut Recorder, opts: &ReproOptions) -> Result<()> {
    let grid = opts.grid.unwrap_or(41);
    if grid < 2 {
        return invalid("grid needs at least 2 points");
    }
    let psi = star4();
    let mut rows = Vec::with_capacity(grid * grid);
    let mut min = f64::INFINITY;
    for r in linspace(1.0, 9.0, grid) {
        for s in linspace(0.0, 10.0, grid) {
            let t = tau_hat_indicator(&psi, &[], &unified(r, s))?.value;
            rec.grid_diff(star_tau_hat_closed(|k| uniform_unified(k, r, s)), t);
            min = min.min(t);
            rows.push(vec![r, s, t]);
        }
    }
    rec.fact("min tau_hat_Urs over r in [1, 9], s in [0, 10] >= -1e-9", min, min >= -1e-9);
    rec.csv = Some(to_csv(&["param1", "param2", "value"], rows));
    Ok(())
}

fn table1(rec: &mut Recorder, opts: &ReproOptions) -> Result<()> {
    let trials = opts.trials.unwrap_or(1000);
    let specs = [
        MeasureSpec::Eof,
        qconc(2.0),
        unified(2.0, 1.0),
        MeasureSpec::TsallisEnt { r: 2.0 },
        MeasureSpec::Concurrence,
        MeasureSpec::Negativity,
    ];
    for d in [2, 3] {
        let dims = Dims::uniform(d, 3)?;
        for spec in specs {
            let mut cfg = SearchConfig::polygon(dims.clone(), spec, trials, opts.seed);
            cfg.workers = opts.workers;
            cfg.record_worst = 0;
            let rep = fuzz_polygon(&cfg)?;
            let status = if spec.is_entropy_based() || d == 2 { "proved" } else { "open" };
            rec.table.push(Table1Row {
                spec,
                dims: dims.clone(),
                status: status.into(),
                trials,
                violations: rep.violations,
                violating_trials: rep.violating_trials,
                min_margin: rep.min_margin,
            });
        }
    }
    rec.notes.push(
        "violation counts for rows marked open are observations from random sampling, not claims either way".into(),
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> ReproOptions {
        ReproOptions::default()
    }

    #[test]
    fn target_names_round_trip() {
        for t in Target::ALL {
            assert_eq!(t.name().parse::<Target>().unwrap(), t);
        }
        assert!("example7".parse::<Target>().is_err());
    }

    #[test]
    fn uniform_closed_forms() {
        assert!((uniform_fq(3.0, 2.0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((uniform_unified(2.0, 2.0, 1.0) - 0.5).abs() < 1e-15);
        assert_eq!(uniform_unified(4.0, 1.0, 3.0), 4f64.ln());
        assert_eq!(uniform_unified(4.0, 3.0, 0.0), 4f64.ln());
        assert!((shannon_bits(&[0.5, 0.5, 0.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn example3_passes() {
        let o = ReproOptions { d: Some(3), m: Some(4), q: Some(2.0), ..opts() };
        let rep = reproduce(Target::Example3, &o).unwrap();
        assert!(rep.passed, "{}", rep.to_json());
        let tau = rep.rows.iter().find(|r| r.quantity.starts_with("tau C_q")).unwrap();
        assert!((tau.closed_form - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn example6_passes() {
        let rep = reproduce(Target::Example6, &ReproOptions { q: Some(2.0), ..opts() }).unwrap();
        assert!(rep.passed, "{}", rep.to_json());
        let th = rep.rows.iter().find(|r| r.quantity.starts_with("tau_hat C_q")).unwrap();
        assert!((th.computed - 0.25).abs() < 1e-12);
    }

    #[test]
    fn network_examples_pass() {
        for t in [Target::Example4, Target::Example5] {
            let rep = reproduce(t, &opts()).unwrap();
            assert!(rep.passed, "{}", rep.to_json());
        }
    }

    #[test]
    fn example2_reports_mismatch_of_coherence_free_form() {
        let rep = reproduce(Target::Example2, &ReproOptions { q: Some(2.0), ..opts() }).unwrap();
        assert!(!rep.passed);
        let exact = rep.rows.iter().find(|r| r.quantity.contains("[1-(2/3)^q-(1/3)^q]")).unwrap();
        assert!(exact.abs_diff < 1e-12 && (exact.computed - 4.0 / 9.0).abs() < 1e-12);
        let quoted = rep.rows.iter().find(|r| r.quantity.contains("[1-2^q/3^q-2/6^q]")).unwrap();
        assert!((quoted.closed_form - 0.5).abs() < 1e-15);
    }

    #[test]
    fn figures_small_grid() {
        for t in [Target::Fig2, Target::Fig4a, Target::Fig4b] {
            let rep = reproduce(t, &ReproOptions { grid: Some(9), ..opts() }).unwrap();
            assert!(rep.passed, "{}", rep.to_json());
            assert!(rep.csv.is_some());
        }
    }

    #[test]
    fn example1_passes() {
        let rep = reproduce(Target::Example1, &opts()).unwrap();
        assert!(rep.passed, "{}", rep.to_json());
    }
}
