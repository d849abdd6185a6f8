//! Polygon, triangle and bipartition inequalities among marginal
//! entanglements, and the indicators built from their slack.
//!
//! Violations are reported as data: every checker returns an
//! [`InequalityResult`] whether or not the inequality holds.

use serde::{Deserialize, Serialize};

use crate::entropy::{renyi, renyi0};
use crate::error::{invalid, Result};
use crate::measures::{marginal_vector, measure_pure, reduced_density, Bipartition, MarginalVector, MeasureSpec};
use crate::states::MultiQuditState;
use crate::tensor::{reduced_of_pure, trace_power, SiteSet};

pub const DEFAULT_TOL: f64 = 1e-9;

/// `lhs ≤ rhs` evaluated with slack `margin = rhs - lhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityResult {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub satisfied: bool,
    pub tol: f64,
}

impl InequalityResult {
    pub fn new(lhs: f64, rhs: f64, tol: f64) -> Self {
        let margin = rhs - lhs;
        InequalityResult { lhs, rhs, margin, satisfied: margin >= -tol, tol }
    }
}

/// Minimum slack and where it is attained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndicatorResult {
    pub value: f64,
    /// Site index for `τ`, index into the cut list for `τ̂`.
    pub argmin: usize,
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol >= 0.0 {
        Ok(())
    } else {
        invalid(format!("tolerance must be finite and nonnegative, got {tol}"))
    }
}

/// `E^{j|j̄} ≤ Σ_{k≠j} E^{k|k̄}`
pub fn polygon_check(mv: &MarginalVector, j: usize, tol: f64) -> Result<InequalityResult> {
    check_tol(tol)?;
    let v = mv.values();
    if j >= v.len() {
        return invalid(format!("site {j} out of range for {} marginals", v.len()));
    }
    let rest: f64 = v.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x).sum();
    Ok(InequalityResult::new(v[j], rest, tol))
}

fn other_two(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// `|E^j - E^k| ≤ E^i ≤ E^j + E^k` on a three-site marginal vector.
/// Returns `(lower, upper)`.
pub fn triangle_check(mv: &MarginalVector, i: usize, tol: f64) -> Result<(InequalityResult, InequalityResult)> {
    check_tol(tol)?;
    let v = mv.values();
    if v.len() != 3 {
        return invalid(format!("triangle check needs 3 marginals, got {}", v.len()));
    }
    if i >= 3 {
        return invalid(format!("site {i} out of range for 3 sites"));
    }
    let (j, k) = other_two(i);
    let lower = InequalityResult::new((v[j] - v[k]).abs(), v[i], tol);
    let upper = InequalityResult::new(v[i], v[j] + v[k], tol);
    Ok((lower, upper))
}

/// `|R_r^{j|ik} - R_0^{k|ij}| ≤ R_r^{i|jk} ≤ R_r^{j|ik} + R_0^{k|ij}` with
/// `(j, k)` the two remaining sites in ascending order.
pub fn renyi_mixed_check(
    psi: &MultiQuditState,
    i: usize,
    r: f64,
    tol: f64,
) -> Result<(InequalityResult, InequalityResult)> {
    if i >= 3 {
        return invalid(format!("site {i} out of range for 3 sites"));
    }
    let (j, k) = other_two(i);
    renyi_mixed_check_ordered(psi, i, j, k, r, tol)
}

/// As [`renyi_mixed_check`] with an explicit choice of the Rényi-`r` side `j`
/// and the log-rank side `k`.
pub fn renyi_mixed_check_ordered(
    psi: &MultiQuditState,
    i: usize,
    j: usize,
    k: usize,
    r: f64,
    tol: f64,
) -> Result<(InequalityResult, InequalityResult)> {
    check_tol(tol)?;
    if psi.sites() != 3 {
        return invalid(format!("mixed Renyi check needs 3 sites, got {}", psi.sites()));
    }
    if i >= 3 || j >= 3 || k >= 3 || i == j || j == k || i == k {
        return invalid(format!("({i}, {j}, {k}) is not a permutation of the three sites"));
    }
    MeasureSpec::RenyiEnt { r }.validate()?;
    let rho = |s: usize| reduced_density(psi, &SiteSet::single(s, 3)?);
    let ri = renyi(&rho(i)?, r)?;
    let rj = renyi(&rho(j)?, r)?;
    let r0k = renyi0(&rho(k)?);
    let lower = InequalityResult::new((rj - r0k).abs(), ri, tol);
    let upper = InequalityResult::new(ri, rj + r0k, tol);
    Ok((lower, upper))
}

/// `E^{A|B} ≤ Σ_{a ∈ A} E^{a|ā}`
pub fn bipartition_check(
    psi: &MultiQuditState,
    cut: &Bipartition,
    spec: &MeasureSpec,
    tol: f64,
) -> Result<InequalityResult> {
    check_tol(tol)?;
    if !spec.is_entropy_based() {
        return invalid(format!("bipartition check needs an entropy-based measure, got {spec}"));
    }
    let lhs = measure_pure(psi, cut, spec)?;
    let n = psi.sites();
    let rhs = cut
        .side_a()
        .iter()
        .map(|a| measure_pure(psi, &Bipartition::one_to_group(a, n)?, spec))
        .sum::<Result<f64>>()?;
    Ok(InequalityResult::new(lhs, rhs, tol))
}

/// `τ = min_j (Σ_{k≠j} E^{k|k̄} - E^{j|j̄})` from a precomputed marginal vector.
pub fn tau_from_marginals(mv: &MarginalVector) -> IndicatorResult {
    let total = mv.total();
    let mut best = IndicatorResult { value: f64::INFINITY, argmin: 0 };
    for (j, &e) in mv.values().iter().enumerate() {
        let slack = (total - e) - e;
        if slack < best.value {
            best = IndicatorResult { value: slack, argmin: j };
        }
    }
    best
}

/// Marginal-entanglement indicator `τ_E(ψ)`.
pub fn tau_indicator(psi: &MultiQuditState, spec: &MeasureSpec) -> Result<IndicatorResult> {
    if psi.sites() < 2 {
        return invalid("indicator needs at least two sites");
    }
    Ok(tau_from_marginals(&marginal_vector(psi, spec)?))
}

/// Default cut family for `τ̂`: every `A | Ā` with `2 ≤ |A| ≤ n - 1`, in
/// both orientations, ordered by `|A|` then lexicographically. For two
/// sites the only cut is `{0} | {1}`.
pub fn default_tau_hat_cuts(n: usize) -> Result<Vec<Bipartition>> {
    if n < 2 {
        return invalid("need at least two sites");
    }
    if n == 2 {
        return Ok(vec![Bipartition::one_to_group(0, 2)?]);
    }
    let mut cuts = Vec::new();
    for size in 2..n {
        for mask in 0u64..(1 << n) {
            if mask.count_ones() as usize == size {
                let side: Vec<usize> = (0..n).filter(|b| mask >> b & 1 == 1).collect();
                cuts.push(side);
            }
        }
    }
    cuts.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    cuts.into_iter().map(|a| Bipartition::from_side_a(a, n)).collect()
}

/// Bipartition indicator `τ̂_E(ψ) = min over cuts of (Σ_{a∈A} E^{a|ā} - E^{A|B})`.
///
/// An empty `cuts` slice selects [`default_tau_hat_cuts`].
pub fn tau_hat_indicator(
    psi: &MultiQuditState,
    cuts: &[Bipartition],
    spec: &MeasureSpec,
) -> Result<IndicatorResult> {
    let defaults;
    let cuts = if cuts.is_empty() {
        defaults = default_tau_hat_cuts(psi.sites())?;
        &defaults[..]
    } else {
        cuts
    };
    let mv = marginal_vector(psi, spec)?;
    let mut best = IndicatorResult { value: f64::INFINITY, argmin: 0 };
    for (idx, cut) in cuts.iter().enumerate() {
        let across = measure_pure(psi, cut, spec)?;
        let sum: f64 = cut.side_a().iter().map(|a| mv.values()[a]).sum();
        let slack = sum - across;
        if slack < best.value {
            best = IndicatorResult { value: slack, argmin: idx };
        }
    }
    Ok(best)
}

/// True when the entanglement-of-formation indicator of a three-site
/// state vanishes within `tol`.
pub fn eof_product_test(psi: &MultiQuditState, tol: f64) -> Result<bool> {
    check_tol(tol)?;
    if psi.sites() != 3 {
        return invalid(format!("product test needs 3 sites, got {}", psi.sites()));
    }
    Ok(tau_indicator(psi, &MeasureSpec::Eof)?.value < tol)
}

/// A site whose single-site marginal is pure within `tol`, i.e. a factor
/// `|φ⟩_j ⊗ |φ'⟩_{rest}` of the state. Uses purity `Tr ρ_j²` only.
pub fn product_factor_site(psi: &MultiQuditState, tol: f64) -> Result<Option<usize>> {
    let n = psi.sites();
    for j in 0..n {
        let rho = reduced_of_pure(psi.amplitudes(), psi.dims(), &SiteSet::single(j, n)?)?;
        if 1.0 - trace_power(&rho, 2)? < tol {
            return Ok(Some(j));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{generalized_ghz3, ghz, star4, w_qutrit, zero_epr};
    use crate::tensor::Dims;
    use std::f64::consts::PI;

    fn mv(v: &[f64]) -> MarginalVector {
        MarginalVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn polygon_examples() {
        let r = polygon_check(&mv(&[0.5, 0.5, 0.5]), 0, DEFAULT_TOL).unwrap();
        assert!((r.margin - 0.5).abs() < 1e-15 && r.satisfied);
        let r = polygon_check(&mv(&[1.0, 0.0, 0.0]), 0, DEFAULT_TOL).unwrap();
        assert_eq!(r.margin, -1.0);
        assert!(!r.satisfied);
        let r = polygon_check(&mv(&[7.0 / 8.0, 0.5, 0.5, 0.5]), 0, DEFAULT_TOL).unwrap();
        assert!((r.margin - 5.0 / 8.0).abs() < 1e-15);
        assert!(polygon_check(&mv(&[0.1]), 1, DEFAULT_TOL).is_err());
    }

    #[test]
    fn triangle_examples() {
        let (lo, up) = triangle_check(&mv(&[0.5, 0.5, 0.5]), 0, DEFAULT_TOL).unwrap();
        assert!((lo.margin - 0.5).abs() < 1e-15 && (up.margin - 0.5).abs() < 1e-15);

        let v = marginal_vector(&zero_epr(), &MeasureSpec::QConcurrence { q: 2.0 }).unwrap();
        let (lo, up) = triangle_check(&v, 0, DEFAULT_TOL).unwrap();
        assert!(lo.lhs.abs() < 1e-12 && lo.rhs.abs() < 1e-12 && lo.satisfied);
        assert!(up.lhs.abs() < 1e-12 && (up.rhs - 1.0).abs() < 1e-12);

        let v = marginal_vector(&generalized_ghz3(PI / 2.0, PI / 4.0), &MeasureSpec::Eof).unwrap();
        let x = v.values();
        assert!((x[0] - x[1]).abs() < 1e-12 && (x[1] - x[2]).abs() < 1e-12);
        assert!(triangle_check(&mv(&[0.1, 0.2]), 0, DEFAULT_TOL).is_err());
    }

    #[test]
    fn renyi_mixed_examples() {
        let product = MultiQuditState::basis(Dims::uniform(2, 3).unwrap(), &[0, 0, 0]).unwrap();
        let (lo, up) = renyi_mixed_check(&product, 0, 2.0, DEFAULT_TOL).unwrap();
        assert!(lo.margin.abs() < 1e-12 && up.margin.abs() < 1e-12);

        let (_, up) = renyi_mixed_check(&ghz(2, 3).unwrap(), 0, 2.0, DEFAULT_TOL).unwrap();
        assert!((up.lhs - 1.0).abs() < 1e-12 && (up.margin - 1.0).abs() < 1e-12);

        assert!(renyi_mixed_check(&product, 0, 1.0, DEFAULT_TOL).is_err());

        // |0⟩ ⊗ (√0.9|00⟩ + √0.1|11⟩): R_r(ρ_j) - R_0(ρ_k) ≤ R_r(ρ_jk) holds,
        // but the reversed difference exceeds R_r(ρ_jk) = R_r(ρ_i) = 0
        let mut amps = vec![crate::tensor::C64::new(0.0, 0.0); 8];
        amps[0] = crate::tensor::C64::new(0.9f64.sqrt(), 0.0);
        amps[3] = crate::tensor::C64::new(0.1f64.sqrt(), 0.0);
        let psi = MultiQuditState::from_amplitudes(Dims::uniform(2, 3).unwrap(), amps).unwrap();
        let (lo, up) = renyi_mixed_check(&psi, 0, 2.0, DEFAULT_TOL).unwrap();
        let r2 = -(0.81f64 + 0.01).log2();
        assert!((lo.lhs - (1.0 - r2)).abs() < 1e-12 && lo.rhs.abs() < 1e-12);
        assert!(!lo.satisfied);
        assert!(up.satisfied);
        assert!(renyi_mixed_check(&star4(), 0, 2.0, DEFAULT_TOL).is_err());
    }

    #[test]
    fn bipartition_examples() {
        let spec = MeasureSpec::QConcurrence { q: 2.0 };
        let cut = Bipartition::from_side_a([0, 1], 4).unwrap();
        let r = bipartition_check(&star4(), &cut, &spec, DEFAULT_TOL).unwrap();
        assert!((r.lhs - 0.75).abs() < 1e-12 && (r.rhs - 1.375).abs() < 1e-12);

        let psi = crate::states::haar_random(&Dims::uniform(2, 4).unwrap(), 3);
        let r = bipartition_check(&psi, &Bipartition::one_to_group(0, 4).unwrap(), &spec, DEFAULT_TOL).unwrap();
        assert!(r.margin.abs() < 1e-14);
        assert!(bipartition_check(&psi, &cut, &MeasureSpec::Negativity, DEFAULT_TOL).is_err());
    }

    #[test]
    fn tau_closed_forms() {
        for (d, m, q) in [(2usize, 3usize, 2.0), (3, 4, 3.0)] {
            let c = 1.0 - (d as f64).powf(1.0 - q);
            let t = tau_indicator(&ghz(d, m).unwrap(), &MeasureSpec::QConcurrence { q }).unwrap();
            assert!((t.value - (m as f64 - 2.0) * c).abs() < 1e-12);
        }
        let q = 3.0;
        let c = 1.0 - (2.0f64 / 3.0).powf(q) - (1.0f64 / 3.0).powf(q);
        let t = tau_indicator(&w_qutrit(), &MeasureSpec::QConcurrence { q }).unwrap();
        assert!((t.value - c).abs() < 1e-12);

        let product = MultiQuditState::basis(Dims::uniform(3, 3).unwrap(), &[1, 2, 0]).unwrap();
        assert!(tau_indicator(&product, &MeasureSpec::Eof).unwrap().value.abs() < 1e-12);
    }

    #[test]
    fn tau_hat_examples() {
        let t = tau_hat_indicator(&star4(), &[], &MeasureSpec::QConcurrence { q: 2.0 }).unwrap();
        assert!((t.value - 0.25).abs() < 1e-12);

        let psi = crate::states::haar_random(&Dims::new(vec![2, 3]).unwrap(), 8);
        let cut = Bipartition::one_to_group(0, 2).unwrap();
        let t = tau_hat_indicator(&psi, &[cut], &MeasureSpec::Eof).unwrap();
        assert!(t.value.abs() < 1e-12);
        let t = tau_hat_indicator(&psi, &[], &MeasureSpec::Eof).unwrap();
        assert!(t.value.abs() < 1e-12);
    }

    #[test]
    fn default_cut_family() {
        let cuts = default_tau_hat_cuts(4).unwrap();
        // 6 pairs + 4 triples
        assert_eq!(cuts.len(), 10);
        assert_eq!(cuts[0].to_string(), "0,1|2,3");
        assert_eq!(default_tau_hat_cuts(3).unwrap().len(), 3);
    }

    #[test]
    fn product_test_examples() {
        assert!(eof_product_test(&generalized_ghz3(PI, 0.7), DEFAULT_TOL).unwrap());
        assert!(!eof_product_test(&generalized_ghz3(PI / 2.0, PI / 4.0), DEFAULT_TOL).unwrap());
        assert!(eof_product_test(&zero_epr(), DEFAULT_TOL).unwrap());
        assert_eq!(product_factor_site(&zero_epr(), 1e-9).unwrap(), Some(0));
        assert_eq!(product_factor_site(&ghz(3, 3).unwrap(), 1e-9).unwrap(), None);
    }

    #[test]
    fn zero_indicator_without_product_factor_when_one_site_is_large() {
        // two EPR pairs sharing a four-level hub: E = (2, 1, 1), so the hub's
        // polygon slack vanishes although no site factors out
        let spec = crate::states::NetworkSpec {
            parties: 3,
            resources: vec![
                crate::states::Resource { kind: crate::states::ResourceKind::Epr, parties: vec![0, 1] },
                crate::states::Resource { kind: crate::states::ResourceKind::Epr, parties: vec![0, 2] },
            ],
        };
        let psi = spec.pure_state().unwrap().unwrap();
        assert_eq!(psi.dims().as_slice(), &[4, 2, 2]);
        let t = tau_indicator(&psi, &MeasureSpec::Eof).unwrap();
        assert!(t.value.abs() < 1e-12 && t.argmin == 0);
        assert!(eof_product_test(&psi, DEFAULT_TOL).unwrap());
        assert_eq!(product_factor_site(&psi, 1e-9).unwrap(), None);
    }
}
