//! Bipartite entanglement measures across a cut of a pure multipartite state.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::density::DensityMatrix;
use crate::entropy::{EntropyParams, LIMIT_TOL};
use crate::error::{invalid, Error, Result};
use crate::states::{MultiQuditState, NetworkState};
use crate::tensor::{hermitian_eigenvalues, partial_transpose, reduced_of_pure, trace_power, ComplexMatrix, Dims, SiteSet};

/// Split of a register into two disjoint, nonempty, covering site sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bipartition {
    side_a: SiteSet,
    side_b: SiteSet,
}

impl Bipartition {
    pub fn new(side_a: SiteSet, side_b: SiteSet, n_sites: usize) -> Result<Self> {
        if side_a.is_empty() || side_b.is_empty() {
            return invalid("both sides of a bipartition must be nonempty");
        }
        if side_a.iter().any(|s| side_b.contains(s)) {
            return invalid(format!("sides {:?} and {:?} overlap", side_a.as_slice(), side_b.as_slice()));
        }
        if side_a.len() + side_b.len() != n_sites || side_a.iter().chain(side_b.iter()).any(|s| s >= n_sites) {
            return invalid(format!("bipartition does not cover exactly {n_sites} sites"));
        }
        Ok(Bipartition { side_a, side_b })
    }

    /// `A | complement(A)`
    pub fn from_side_a(side_a: impl IntoIterator<Item = usize>, n_sites: usize) -> Result<Self> {
        let a = SiteSet::new(side_a, n_sites)?;
        let b = a.complement(n_sites);
        Self::new(a, b, n_sites)
    }

    /// The one-to-group cut `j | j̄`.
    pub fn one_to_group(j: usize, n_sites: usize) -> Result<Self> {
        Self::from_side_a([j], n_sites)
    }

    /// Parses `"0|1,2"`; whitespace is ignored.
    pub fn parse(text: &str, n_sites: usize) -> Result<Self> {
        let (a, b) = text
            .split_once('|')
            .ok_or_else(|| Error::InvalidInput(format!("cut {text:?} has no '|'")))?;
        let parse_side = |side: &str| -> Result<SiteSet> {
            let sites = side
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| Error::InvalidInput(format!("bad site {t:?} in cut"))))
                .collect::<Result<Vec<_>>>()?;
            SiteSet::new(sites, n_sites)
        };
        Self::new(parse_side(a)?, parse_side(b)?, n_sites)
    }

    pub fn side_a(&self) -> &SiteSet {
        &self.side_a
    }

    pub fn side_b(&self) -> &SiteSet {
        &self.side_b
    }

    pub fn swapped(&self) -> Bipartition {
        Bipartition { side_a: self.side_b.clone(), side_b: self.side_a.clone() }
    }

    pub fn sites(&self) -> usize {
        self.side_a.len() + self.side_b.len()
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |s: &SiteSet| s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{}|{}", join(&self.side_a), join(&self.side_b))
    }
}

/// A bipartite entanglement measure and its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MeasureSpec {
    /// `C_q = F_q(ρ_A)`, `q ≥ 2`.
    QConcurrence { q: f64 },
    /// `U_{r,s} = S_{r,s}(ρ_A)`, `r ≥ 1`, `s ≥ 0`.
    UnifiedEnt { r: f64, s: f64 },
    /// Rényi entanglement in bits, `r ≥ 0`, `r ≠ 1`.
    RenyiEnt { r: f64 },
    /// Tsallis entanglement, `r > 1`.
    TsallisEnt { r: f64 },
    /// Entanglement of formation: von Neumann entropy of `ρ_A` in bits.
    Eof,
    /// `√(2 (1 - Tr ρ_A²))`
    Concurrence,
    /// `(‖ρ^{T_B}‖₁ - 1) / 2`
    Negativity,
}

impl MeasureSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            MeasureSpec::QConcurrence { q } => q.is_finite() && q >= 2.0,
            MeasureSpec::UnifiedEnt { r, s } => r.is_finite() && s.is_finite() && r >= 1.0 && s >= 0.0,
            MeasureSpec::RenyiEnt { r } => r.is_finite() && r >= 0.0 && (r - 1.0).abs() >= LIMIT_TOL,
            MeasureSpec::TsallisEnt { r } => r.is_finite() && r > 1.0,
            MeasureSpec::Eof | MeasureSpec::Concurrence | MeasureSpec::Negativity => true,
        };
        if ok {
            Ok(())
        } else {
            invalid(format!("parameters out of range for {self}"))
        }
    }

    /// The entropy whose value on `ρ_A` defines the measure, if any.
    pub fn entropy(&self) -> Option<EntropyParams> {
        match *self {
            MeasureSpec::QConcurrence { q } => Some(EntropyParams::Fq { q }),
            MeasureSpec::UnifiedEnt { r, s } => Some(EntropyParams::Unified { r, s }),
            MeasureSpec::RenyiEnt { r } => Some(EntropyParams::Renyi { r }),
            MeasureSpec::TsallisEnt { r } => Some(EntropyParams::Tsallis { r }),
            MeasureSpec::Eof => Some(EntropyParams::VonNeumann),
            MeasureSpec::Concurrence | MeasureSpec::Negativity => None,
        }
    }

    pub fn is_entropy_based(&self) -> bool {
        self.entropy().is_some()
    }

    /// Stable command-line token.
    pub fn token(&self) -> &'static str {
        match self {
            MeasureSpec::QConcurrence { .. } => "qconc",
            MeasureSpec::UnifiedEnt { .. } => "unified",
            MeasureSpec::RenyiEnt { .. } => "renyi",
            MeasureSpec::TsallisEnt { .. } => "tsallis",
            MeasureSpec::Eof => "eof",
            MeasureSpec::Concurrence => "conc",
            MeasureSpec::Negativity => "neg",
        }
    }

    /// Builds a spec from a token and optional parameters.
    pub fn from_token(token: &str, q: Option<f64>, r: Option<f64>, s: Option<f64>) -> Result<Self> {
        let need = |name: &str, v: Option<f64>| {
            v.ok_or_else(|| Error::InvalidInput(format!("measure {token:?} needs --{name}")))
        };
        let spec = match token {
            "qconc" => MeasureSpec::QConcurrence { q: need("q", q)? },
            "unified" => MeasureSpec::UnifiedEnt { r: need("r", r)?, s: need("s", s)? },
            "renyi" => MeasureSpec::RenyiEnt { r: need("r", r)? },
            "tsallis" => MeasureSpec::TsallisEnt { r: need("r", r)? },
            "eof" => MeasureSpec::Eof,
            "conc" => MeasureSpec::Concurrence,
            "neg" => MeasureSpec::Negativity,
            other => return invalid(format!("unknown measure token {other:?}")),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MeasureSpec::QConcurrence { q } => write!(f, "qconc(q={q})"),
            MeasureSpec::UnifiedEnt { r, s } => write!(f, "unified(r={r},s={s})"),
            MeasureSpec::RenyiEnt { r } => write!(f, "renyi(r={r})"),
            MeasureSpec::TsallisEnt { r } => write!(f, "tsallis(r={r})"),
            _ => f.write_str(self.token()),
        }
    }
}

fn check_cut(psi: &MultiQuditState, cut: &Bipartition) -> Result<()> {
    if cut.sites() != psi.sites() {
        return invalid(format!("cut {cut} covers {} sites but the state has {}", cut.sites(), psi.sites()));
    }
    Ok(())
}

/// Reduced state of `psi` on `keep` as a validated density matrix.
pub fn reduced_density(psi: &MultiQuditState, keep: &SiteSet) -> Result<DensityMatrix> {
    let m = reduced_of_pure(psi.amplitudes(), psi.dims(), keep)?;
    let dims = Dims::new(keep.iter().map(|s| psi.dims().as_slice()[s]).collect())?;
    DensityMatrix::new(m, dims)
}

/// Reduced matrix on whichever side of the cut has the smaller dimension.
fn smaller_side_reduced(psi: &MultiQuditState, cut: &Bipartition) -> Result<ComplexMatrix> {
    let da = psi.dims().subsystem_dim(cut.side_a());
    let db = psi.dims().subsystem_dim(cut.side_b());
    let side = if da <= db { cut.side_a() } else { cut.side_b() };
    reduced_of_pure(psi.amplitudes(), psi.dims(), side)
}

/// Entanglement of the pure state `psi` across `cut`.
pub fn measure_pure(psi: &MultiQuditState, cut: &Bipartition, spec: &MeasureSpec) -> Result<f64> {
    spec.validate()?;
    check_cut(psi, cut)?;
    match spec.entropy() {
        Some(params) => {
            let rho = DensityMatrix::unstructured(smaller_side_reduced(psi, cut)?)?;
            params.evaluate(&rho)
        }
        None => match spec {
            MeasureSpec::Concurrence => {
                let rho = smaller_side_reduced(psi, cut)?;
                let purity = trace_power(&rho, 2)?;
                Ok((2.0 * (1.0 - purity)).max(0.0).sqrt())
            }
            MeasureSpec::Negativity => {
                let rho = ComplexMatrix::projector(psi.amplitudes());
                let pt = partial_transpose(&rho, psi.dims(), cut.side_b())?;
                let trace_norm: f64 = hermitian_eigenvalues(&pt)?.iter().map(|l| l.abs()).sum();
                Ok(((trace_norm - 1.0) / 2.0).max(0.0))
            }
            _ => unreachable!("entropy-based specs handled above"),
        },
    }
}

/// Entropy of the reduced state on the `side_a` parties of a network state.
///
/// Only entropy-based measures are available: concurrence and negativity of
/// a mixed network would require a convex-roof optimization.
pub fn measure_network(net: &NetworkState, party_cut: &Bipartition, spec: &MeasureSpec) -> Result<f64> {
    spec.validate()?;
    let params = spec.entropy().ok_or_else(|| {
        Error::UnsupportedMeasure(format!("{spec} on a network state needs a convex roof"))
    })?;
    let n = net.party_dims().sites();
    if party_cut.sites() != n {
        return invalid(format!("cut {party_cut} does not match {n} parties"));
    }
    let rho = net.density().reduce(party_cut.side_a())?;
    params.evaluate(&rho)
}

/// One-to-group marginal entanglements `E^{j|j̄}`, one per site.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginalVector(Vec<f64>);

impl MarginalVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return invalid("marginal vector is empty");
        }
        if values.iter().any(|v| !v.is_finite() || *v < -1e-12) {
            return invalid(format!("marginal values must be finite and nonnegative: {values:?}"));
        }
        Ok(MarginalVector(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }
}

pub fn marginal_vector(psi: &MultiQuditState, spec: &MeasureSpec) -> Result<MarginalVector> {
    let n = psi.sites();
    let values = (0..n)
        .map(|j| measure_pure(psi, &Bipartition::one_to_group(j, n)?, spec))
        .collect::<Result<Vec<_>>>()?;
    MarginalVector::new(values)
}

/// Marginal vector of a network over its parties.
pub fn network_marginal_vector(net: &NetworkState, spec: &MeasureSpec) -> Result<MarginalVector> {
    let n = net.party_dims().sites();
    let values = (0..n)
        .map(|j| measure_network(net, &Bipartition::one_to_group(j, n)?, spec))
        .collect::<Result<Vec<_>>>()?;
    MarginalVector::new(values)
}

/// `E^T = Σ_j E^{j|j̄}`
pub fn total_entanglement(mv: &MarginalVector) -> f64 {
    mv.total()
}

/// Entropy evaluated directly on a single-site reduced state, bypassing cuts.
pub fn marginal_entropy(psi: &MultiQuditState, site: usize, params: &EntropyParams) -> Result<f64> {
    let rho = reduced_density(psi, &SiteSet::single(site, psi.sites())?)?;
    params.evaluate(&rho)
}
