//! Seeded randomized stress tests of the inequalities over Haar-random
//! states, and deterministic parameter-grid scans of the indicators.
//!
//! Trials are evaluated in parallel but every trial draws its state from
//! its own seed and results are aggregated in trial order, so a report is
//! bit-identical for any number of workers.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::inequalities::{
    bipartition_check, default_tau_hat_cuts, polygon_check, renyi_mixed_check_ordered, tau_from_marginals,
    tau_hat_indicator, tau_indicator, triangle_check,
};
use crate::measures::{marginal_vector, MeasureSpec};
use crate::states::{generalized_ghz3, haar_random, w_interp, MultiQuditState, StateFile};
use crate::tensor::Dims;

pub const HISTOGRAM_BINS: usize = 64;
pub const HISTOGRAM_LO: f64 = -0.1;
pub const HISTOGRAM_HI: f64 = 1.0;

/// SplitMix64 finalizer applied to `master + (index + 1) · φ₆₄`.
pub fn mix64(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Every assignment of the roles `(i, j, k)` to three sites.
pub const ORDERINGS: [(usize, usize, usize); 6] = [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)];

/// Which inequality family a fuzz run exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// `E^{j|j̄} ≤ Σ_{k≠j} E^{k|k̄}` for every `j`.
    Polygon,
    /// Lower and upper triangle bounds for every `i` (three sites only).
    Triangle,
    /// `E^{A|B} ≤ Σ_{a∈A} E^{a|ā}` over every cut with `|A| ≥ 2`.
    Bipartition,
    /// Mixed Rényi/log-rank triangle bounds for every role assignment
    /// (three sites, Rényi measure only).
    RenyiMixed,
}

impl CheckKind {
    /// Label of each margin produced per trial, in evaluation order.
    pub fn labels(&self, n: usize) -> Result<Vec<String>> {
        Ok(match self {
            CheckKind::Polygon => (0..n).map(|j| format!("polygon j={j}")).collect(),
            CheckKind::Triangle | CheckKind::RenyiMixed => {
                if n != 3 {
                    return invalid(format!("{self:?} checks need 3 sites, got {n}"));
                }
                if *self == CheckKind::Triangle {
                    (0..3).flat_map(|i| [format!("triangle-lower i={i}"), format!("triangle-upper i={i}")]).collect()
                } else {
                    ORDERINGS
                        .iter()
                        .flat_map(|&(i, j, k)| {
                            [
                                format!("renyi-mixed-lower i={i} j={j} k={k}"),
                                format!("renyi-mixed-upper i={i} j={j} k={k}"),
                            ]
                        })
                        .collect()
                }
            }
            CheckKind::Bipartition => {
                default_tau_hat_cuts(n)?.iter().map(|c| format!("bipartition {c}")).collect()
            }
        })
    }

    /// All margins for one state, in [`CheckKind::labels`] order.
    pub fn margins(&self, psi: &MultiQuditState, spec: &MeasureSpec, tol: f64) -> Result<Vec<f64>> {
        match self {
            CheckKind::Polygon => {
                let mv = marginal_vector(psi, spec)?;
                (0..mv.len()).map(|j| polygon_check(&mv, j, tol).map(|r| r.margin)).collect()
            }
            CheckKind::Triangle => {
                let mv = marginal_vector(psi, spec)?;
                let mut out = Vec::with_capacity(6);
                for i in 0..3 {
                    let (lo, up) = triangle_check(&mv, i, tol)?;
                    out.extend([lo.margin, up.margin]);
                }
                Ok(out)
            }
            CheckKind::RenyiMixed => {
                let MeasureSpec::RenyiEnt { r } = *spec else {
                    return invalid(format!("mixed Renyi checks need a renyi measure, got {spec}"));
                };
                let mut out = Vec::with_capacity(2 * ORDERINGS.len());
                for &(i, j, k) in &ORDERINGS {
                    let (lo, up) = renyi_mixed_check_ordered(psi, i, j, k, r, tol)?;
                    out.extend([lo.margin, up.margin]);
                }
                Ok(out)
            }
            CheckKind::Bipartition => default_tau_hat_cuts(psi.sites())?
                .iter()
                .map(|cut| bipartition_check(psi, cut, spec, tol).map(|r| r.margin))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub dims: Dims,
    pub spec: MeasureSpec,
    pub check: CheckKind,
    pub trials: u64,
    pub seed: u64,
    pub tol: f64,
    /// Number of lowest-margin trials whose states are kept.
    pub record_worst: usize,
    /// Worker threads; 0 uses the global pool.
    #[serde(skip)]
    pub workers: usize,
}

impl SearchConfig {
    pub fn polygon(dims: Dims, spec: MeasureSpec, trials: u64, seed: u64) -> Self {
        SearchConfig {
            dims,
            spec,
            check: CheckKind::Polygon,
            trials,
            seed,
            tol: crate::inequalities::DEFAULT_TOL,
            record_worst: 5,
            workers: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return invalid("trials must be at least 1");
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return invalid(format!("tol must be positive, got {}", self.tol));
        }
        if self.dims.sites() < 2 {
            return invalid("fuzzing needs at least two sites");
        }
        self.spec.validate()?;
        if matches!(self.check, CheckKind::Bipartition | CheckKind::RenyiMixed) && !self.spec.is_entropy_based() {
            return invalid(format!("{:?} checks need an entropy-based measure, got {}", self.check, self.spec));
        }
        self.check.labels(self.dims.sites())?;
        Ok(())
    }
}

/// Margin counts over `HISTOGRAM_BINS` uniform bins on
/// `[HISTOGRAM_LO, HISTOGRAM_HI]`; out-of-range margins land in the end bins.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn new() -> Self {
        Histogram { counts: vec![0; HISTOGRAM_BINS] }
    }

    pub fn bin(margin: f64) -> usize {
        let t = (margin - HISTOGRAM_LO) / (HISTOGRAM_HI - HISTOGRAM_LO) * HISTOGRAM_BINS as f64;
        if t.is_nan() {
            return 0;
        }
        (t.floor().max(0.0) as usize).min(HISTOGRAM_BINS - 1)
    }

    pub fn add(&mut self, margin: f64) {
        self.counts[Self::bin(margin)] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

impl Default for Histogram {
    fn default() -> Self {
        Self::new()
    }
}

/// Lowest margin of one trial, with the state that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorstState {
    pub trial: u64,
    pub seed: u64,
    pub check: String,
    pub margin: f64,
    pub state: StateFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationReport {
    pub dims: Dims,
    pub spec: MeasureSpec,
    pub check: CheckKind,
    pub seed: u64,
    pub tol: f64,
    pub trials_run: u64,
    pub checks_per_trial: usize,
    /// Margins below `-tol`, counted over every check of every trial.
    pub violations: u64,
    /// Trials with at least one violated check.
    pub violating_trials: u64,
    pub min_margin: f64,
    pub worst_states: Vec<WorstState>,
    pub histogram: Histogram,
}

impl ViolationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn run_trials<T: Send>(workers: usize, trials: u64, f: impl Fn(u64) -> T + Sync + Send) -> Result<Vec<T>> {
    if workers == 0 {
        return Ok((0..trials).into_par_iter().map(f).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| crate::Error::InvalidInput(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(|| (0..trials).into_par_iter().map(f).collect()))
}

/// Samples `cfg.trials` Haar-random states and evaluates `cfg.check` on each.
pub fn fuzz(cfg: &SearchConfig) -> Result<ViolationReport> {
    cfg.validate()?;
    let labels = cfg.check.labels(cfg.dims.sites())?;
    let per_trial = run_trials(cfg.workers, cfg.trials, |t| {
        let seed = mix64(cfg.seed, t);
        let psi = haar_random(&cfg.dims, seed);
        cfg.check.margins(&psi, &cfg.spec, cfg.tol)
    })?;

    let mut violations = 0;
    let mut violating_trials = 0;
    let mut min_margin = f64::INFINITY;
    let mut histogram = Histogram::new();
    let mut lowest: Vec<(f64, u64, usize)> = Vec::with_capacity(per_trial.len());
    for (t, margins) in per_trial.into_iter().enumerate() {
        let margins = margins?;
        let mut worst = (f64::INFINITY, 0usize);
        let mut violated = false;
        for (k, &m) in margins.iter().enumerate() {
            histogram.add(m);
            if m < -cfg.tol {
                violations += 1;
                violated = true;
            }
            if m < worst.0 {
                worst = (m, k);
            }
        }
        violating_trials += violated as u64;
        min_margin = min_margin.min(worst.0);
        lowest.push((worst.0, t as u64, worst.1));
    }
    lowest.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let worst_states = lowest
        .into_iter()
        .take(cfg.record_worst)
        .map(|(margin, trial, k)| {
            let seed = mix64(cfg.seed, trial);
            WorstState {
                trial,
                seed,
                check: labels[k].clone(),
                margin,
                state: haar_random(&cfg.dims, seed).to_file(),
            }
        })
        .collect();

    Ok(ViolationReport {
        dims: cfg.dims.clone(),
        spec: cfg.spec,
        check: cfg.check,
        seed: cfg.seed,
        tol: cfg.tol,
        trials_run: cfg.trials,
        checks_per_trial: labels.len(),
        violations,
        violating_trials,
        min_margin,
        worst_states,
        histogram,
    })
}

/// [`fuzz`] with the polygon check.
pub fn fuzz_polygon(cfg: &SearchConfig) -> Result<ViolationReport> {
    fuzz(&SearchConfig { check: CheckKind::Polygon, ..cfg.clone() })
}

/// Two-angle state family scanned by [`grid_scan`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `sinθcosφ|000⟩ + sinθsinφ|111⟩ + cosθ|222⟩`
    GeneralizedGhz3,
    /// Superposition of the three-qutrit W-class and GHZ states.
    WInterp,
}

impl Family {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "generalized_ghz3" | "generalized-ghz3" | "ghz3" => Ok(Family::GeneralizedGhz3),
            "w_interp" | "w-interp" => Ok(Family::WInterp),
            other => invalid(format!("unknown family {other:?} (expected generalized_ghz3 or w_interp)")),
        }
    }

    pub fn state(&self, theta: f64, phi: f64) -> MultiQuditState {
        match self {
            Family::GeneralizedGhz3 => generalized_ghz3(theta, phi),
            Family::WInterp => w_interp(theta, phi),
        }
    }
}

/// Quantity evaluated at each grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanQuantity {
    Tau,
    TauHat,
    /// Smallest polygon margin (equal to `Tau` by definition).
    MinPolygonMargin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub param1: f64,
    pub param2: f64,
    pub value: f64,
}

/// `n` evenly spaced points covering `[lo, hi]` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Evaluates `quantity` over `θ ∈ [0, π]` × `φ ∈ [0, 2π]` with `grid`
/// points per axis. Rows are ordered θ-major.
pub fn grid_scan(family: Family, grid: usize, spec: &MeasureSpec, quantity: ScanQuantity) -> Result<Vec<ScanRow>> {
    if grid < 2 {
        return invalid(format!("grid needs at least 2 points per axis, got {grid}"));
    }
    spec.validate()?;
    let thetas = linspace(0.0, PI, grid);
    let phis = linspace(0.0, 2.0 * PI, grid);
    let points: Vec<(f64, f64)> = thetas.iter().flat_map(|&t| phis.iter().map(move |&p| (t, p))).collect();
    points
        .par_iter()
        .map(|&(theta, phi)| {
            let psi = family.state(theta, phi);
            let value = match quantity {
                ScanQuantity::Tau => tau_indicator(&psi, spec)?.value,
                ScanQuantity::TauHat => tau_hat_indicator(&psi, &[], spec)?.value,
                ScanQuantity::MinPolygonMargin => tau_from_marginals(&marginal_vector(&psi, spec)?).value,
            };
            Ok(ScanRow { param1: theta, param2: phi, value })
        })
        .collect()
}

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV with the given header and one line per row.
pub fn to_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.iter().map(|&x| fmt_f64(x)).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    out
}

/// `param1,param2,value` CSV of a scan.
pub fn scan_csv(rows: &[ScanRow]) -> String {
    to_csv(&["param1", "param2", "value"], rows.iter().map(|r| vec![r.param1, r.param2, r.value]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mix64_spreads_indices() {
        let a: Vec<u64> = (0..100).map(|i| mix64(42, i)).collect();
        let mut b = a.clone();
        b.sort_unstable();
        b.dedup();
        assert_eq!(b.len(), 100);
        assert_ne!(mix64(0, 0), mix64(1, 0));
        assert_eq!(mix64(7, 3), mix64(7, 3));
    }

    #[test]
    fn histogram_clamps() {
        assert_eq!(Histogram::bin(-5.0), 0);
        assert_eq!(Histogram::bin(5.0), HISTOGRAM_BINS - 1);
        assert_eq!(Histogram::bin(HISTOGRAM_LO), 0);
        assert_eq!(Histogram::bin(HISTOGRAM_HI), HISTOGRAM_BINS - 1);
        let mid = Histogram::bin(0.0);
        assert_eq!(mid, (0.1 / 1.1 * 64.0) as usize);
    }

    #[test]
    fn polygon_fuzz_small() {
        let cfg = SearchConfig::polygon(Dims::uniform(3, 3).unwrap(), MeasureSpec::QConcurrence { q: 2.0 }, 50, 1);
        let rep = fuzz_polygon(&cfg).unwrap();
        assert_eq!(rep.trials_run, 50);
        assert_eq!(rep.violations, 0);
        assert_eq!(rep.histogram.total(), 150);
        assert_eq!(rep.worst_states.len(), 5);
        assert!(rep.worst_states.windows(2).all(|w| w[0].margin <= w[1].margin));
        assert_eq!(rep.min_margin, rep.worst_states[0].margin);
    }

    #[test]
    fn worst_state_round_trips() {
        let cfg = SearchConfig::polygon(Dims::new(vec![2, 3, 4]).unwrap(), MeasureSpec::Eof, 20, 9);
        let rep = fuzz_polygon(&cfg).unwrap();
        let w = &rep.worst_states[0];
        let psi = w.state.clone().into_state().unwrap();
        let margins = CheckKind::Polygon.margins(&psi, &cfg.spec, cfg.tol).unwrap();
        let min = margins.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((min - w.margin).abs() < 1e-12);
    }

    #[test]
    fn worker_count_does_not_change_report() {
        let mut cfg = SearchConfig::polygon(Dims::uniform(2, 3).unwrap(), MeasureSpec::Negativity, 40, 42);
        cfg.workers = 1;
        let a = fuzz(&cfg).unwrap();
        cfg.workers = 3;
        let b = fuzz(&cfg).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }

    #[test]
    fn config_validation() {
        let mut cfg = SearchConfig::polygon(Dims::uniform(2, 4).unwrap(), MeasureSpec::Eof, 0, 0);
        assert!(cfg.validate().is_err());
        cfg.trials = 1;
        cfg.check = CheckKind::Triangle;
        assert!(cfg.validate().is_err());
        cfg.check = CheckKind::Bipartition;
        cfg.spec = MeasureSpec::Negativity;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn scan_order_and_zeros() {
        let rows = grid_scan(Family::GeneralizedGhz3, 5, &MeasureSpec::Eof, ScanQuantity::Tau).unwrap();
        assert_eq!(rows.len(), 25);
        assert_eq!((rows[1].param1, rows[1].param2), (0.0, PI / 2.0));
        // θ = π row: product state |222⟩
        assert!(rows[20..].iter().all(|r| r.value.abs() < 1e-9));
        assert!(Family::parse("nope").is_err());
    }

    #[test]
    fn csv_is_exact() {
        let csv = scan_csv(&[ScanRow { param1: 0.1, param2: PI, value: -0.0 }]);
        let line = csv.lines().nth(1).unwrap();
        let parsed: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!(parsed, vec![0.1, PI, 0.0]);
        assert!(csv.starts_with("param1,param2,value\n"));
    }
}
