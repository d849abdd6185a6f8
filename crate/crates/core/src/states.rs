//! State families: GHZ, generalized GHZ, W-class, the four-party star
//! network, Haar-random sampling, and composite network states.

use std::f64::consts::FRAC_1_SQRT_2;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::density::DensityMatrix;
use crate::error::{invalid, Result};
use crate::tensor::{kron, kron_vec, permute_sites, permute_sites_vec, ComplexMatrix, Dims, C64};

/// Accepted deviation of the input norm from 1 before renormalizing.
pub const NORM_BAND: f64 = 1e-6;

/// Normalized pure state of a multi-qudit register.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiQuditState {
    dims: Dims,
    amps: Vec<C64>,
}

impl MultiQuditState {
    /// Validates the length and norm of `amps` and returns a renormalized copy.
    pub fn from_amplitudes(dims: Dims, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != dims.total() {
            return invalid(format!(
                "{} amplitudes given but dims {:?} require {}",
                amps.len(),
                dims.as_slice(),
                dims.total()
            ));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return invalid("amplitudes must be finite");
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return invalid("zero vector is not a state");
        }
        if (norm - 1.0).abs() > NORM_BAND {
            return invalid(format!("state norm {norm} is outside 1 ± {NORM_BAND}"));
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(MultiQuditState { dims, amps })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(dims: Dims, amps: Vec<C64>) -> Result<Self> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return invalid("cannot normalize a zero or non-finite vector");
        }
        Self::from_amplitudes(dims, amps.into_iter().map(|a| a / norm).collect())
    }

    /// Computational basis state with the given per-site digits.
    pub fn basis(dims: Dims, digits: &[usize]) -> Result<Self> {
        if digits.len() != dims.sites() || digits.iter().zip(dims.as_slice()).any(|(&x, &d)| x >= d) {
            return invalid(format!("digits {digits:?} do not fit dims {:?}", dims.as_slice()));
        }
        let idx: usize = digits.iter().zip(dims.strides()).map(|(&x, s)| x * s).sum();
        let mut amps = vec![C64::new(0.0, 0.0); dims.total()];
        amps[idx] = C64::new(1.0, 0.0);
        Ok(MultiQuditState { dims, amps })
    }

    pub fn dims(&self) -> &Dims {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn sites(&self) -> usize {
        self.dims.sites()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `self ⊗ other`, with `other`'s sites appended after `self`'s.
    pub fn tensor(&self, other: &MultiQuditState) -> MultiQuditState {
        let mut dims = self.dims.as_slice().to_vec();
        dims.extend_from_slice(other.dims.as_slice());
        MultiQuditState {
            dims: Dims::new(dims).expect("concatenated dims stay valid"),
            amps: kron_vec(&self.amps, &other.amps),
        }
    }

    /// Reorders the sites so new site `k` is old site `order[k]`.
    pub fn permute(&self, order: &[usize]) -> Result<MultiQuditState> {
        let (dims, amps) = permute_sites_vec(&self.amps, &self.dims, order)?;
        Ok(MultiQuditState { dims, amps })
    }

    /// Applies a unitary to one site.
    pub fn apply_local(&self, site: usize, u: &ComplexMatrix) -> Result<MultiQuditState> {
        let d = *self
            .dims
            .as_slice()
            .get(site)
            .ok_or_else(|| crate::Error::InvalidInput(format!("site {site} out of range")))?;
        if u.rows() != d || u.cols() != d {
            return invalid(format!("local operator must be {d}x{d}"));
        }
        let stride = self.dims.strides()[site];
        let mut out = vec![C64::new(0.0, 0.0); self.amps.len()];
        for (idx, slot) in out.iter_mut().enumerate() {
            let digit = (idx / stride) % d;
            let base = idx - digit * stride;
            *slot = (0..d).map(|k| u[(digit, k)] * self.amps[base + k * stride]).sum();
        }
        Ok(MultiQuditState { dims: self.dims.clone(), amps: out })
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(&self.amps, self.dims.clone())
            .expect("projector of a normalized state is a density matrix")
    }

    pub fn to_file(&self) -> StateFile {
        StateFile {
            dims: self.dims.as_slice().to_vec(),
            amplitudes: self.amps.iter().map(|a| [a.re, a.im]).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("state serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(text)?;
        file.into_state()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(&self.to_file())?)?;
        Ok(())
    }
}

/// On-disk form of a pure state: `{"dims": [..], "amplitudes": [[re, im], ..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn into_state(self) -> Result<MultiQuditState> {
        let dims = Dims::new(self.dims)?;
        let amps = self.amplitudes.into_iter().map(|[re, im]| C64::new(re, im)).collect();
        MultiQuditState::from_amplitudes(dims, amps)
    }
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `(|00⟩ + |11⟩)/√2`
pub fn epr() -> MultiQuditState {
    ghz(2, 2).expect("valid parameters")
}

/// `(1/√d) Σ_j |j⟩^{⊗m}`
pub fn ghz(d: usize, m: usize) -> Result<MultiQuditState> {
    if d < 2 || m < 2 {
        return invalid(format!("GHZ needs d >= 2 and m >= 2, got d={d}, m={m}"));
    }
    let dims = Dims::uniform(d, m)?;
    let step: usize = dims.strides().iter().sum();
    let mut amps = vec![real(0.0); dims.total()];
    let a = 1.0 / (d as f64).sqrt();
    for j in 0..d {
        amps[j * step] = real(a);
    }
    Ok(MultiQuditState { dims, amps })
}

/// `sinθ cosφ |000⟩ + sinθ sinφ |111⟩ + cosθ |222⟩` on three qutrits.
pub fn generalized_ghz3(theta: f64, phi: f64) -> MultiQuditState {
    let dims = Dims::uniform(3, 3).expect("valid dims");
    let mut amps = vec![real(0.0); 27];
    amps[0] = real(theta.sin() * phi.cos());
    amps[13] = real(theta.sin() * phi.sin());
    amps[26] = real(theta.cos());
    MultiQuditState { dims, amps }
}

/// The generalized-GHZ Schmidt weights `{sin²θ cos²φ, sin²θ sin²φ, cos²θ}`.
pub fn generalized_ghz3_weights(theta: f64, phi: f64) -> [f64; 3] {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * st * cp * cp, st * st * sp * sp, ct * ct]
}

/// `(1/√6) Σ_{i=1,2} (|i00⟩ + |0i0⟩ + |00i⟩)`
pub fn w_qutrit() -> MultiQuditState {
    let dims = Dims::uniform(3, 3).expect("valid dims");
    let mut amps = vec![real(0.0); 27];
    let a = 1.0 / 6f64.sqrt();
    for i in 1..3 {
        amps[i * 9] = real(a);
        amps[i * 3] = real(a);
        amps[i] = real(a);
    }
    MultiQuditState { dims, amps }
}

/// Four-party star network of three EPR pairs with the hub's three qubits
/// merged into one eight-level site: `|a b c d⟩` with `a = 4b + 2c + d`,
/// all amplitudes `1/(2√2)`, dims `[8, 2, 2, 2]`.
pub fn star4() -> MultiQuditState {
    let dims = Dims::new(vec![8, 2, 2, 2]).expect("valid dims");
    let mut amps = vec![real(0.0); 64];
    let a = 1.0 / (2.0 * 2f64.sqrt());
    for b in 0..2 {
        for c in 0..2 {
            for d in 0..2 {
                let hub = 4 * b + 2 * c + d;
                amps[hub * 8 + b * 4 + c * 2 + d] = real(a);
            }
        }
    }
    MultiQuditState { dims, amps }
}

/// `cosθ |W_c⟩ + e^{iφ} sinθ |GHZ₃⟩` on three qutrits, normalized.
///
/// Interpolates between the W-class state (θ = 0) and the three-qutrit
/// GHZ state (θ = π/2).
pub fn w_interp(theta: f64, phi: f64) -> MultiQuditState {
    let w = w_qutrit();
    let g = ghz(3, 3).expect("valid parameters");
    let phase = C64::from_polar(theta.sin(), phi);
    let amps = w
        .amps
        .iter()
        .zip(&g.amps)
        .map(|(a, b)| a * theta.cos() + b * phase)
        .collect();
    // the two states overlap, so the superposition needs renormalizing
    MultiQuditState::normalized(w.dims, amps).expect("W and GHZ are never antiparallel")
}

/// Haar-random pure state: i.i.d. standard complex Gaussian amplitudes,
/// normalized. Deterministic in `seed`.
pub fn haar_random(dims: &Dims, seed: u64) -> MultiQuditState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps: Vec<C64> = (0..dims.total())
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            C64::new(re, im)
        })
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    MultiQuditState { dims: dims.clone(), amps: amps.into_iter().map(|a| a / norm).collect() }
}

/// Haar-random `d × d` unitary via Gram–Schmidt on a complex Gaussian matrix.
pub fn haar_unitary(d: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cols: Vec<Vec<C64>> = (0..d)
        .map(|_| {
            (0..d)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    C64::new(re, im)
                })
                .collect()
        })
        .collect();
    for k in 0..d {
        for j in 0..k {
            let (done, rest) = cols.split_at_mut(k);
            let proj: C64 = done[j].iter().zip(&rest[0]).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in rest[0].iter_mut().zip(&done[j]) {
                *x -= proj * y;
            }
        }
        let n = cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols[k].iter_mut().for_each(|z| *z /= n);
    }
    ComplexMatrix::from_fn(d, d, |i, j| cols[j][i])
}

/// One entangled resource shared inside a network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ResourceKind {
    /// Two-qubit maximally entangled pair.
    Epr,
    /// `m`-particle `d`-level GHZ state.
    Ghz { d: usize, m: usize },
    /// Two-particle GHZ marginal `(1/d) Σ_j |jj⟩⟨jj|`.
    GhzDiagonal { d: usize },
}

impl ResourceKind {
    pub fn particles(&self) -> usize {
        match *self {
            ResourceKind::Epr | ResourceKind::GhzDiagonal { .. } => 2,
            ResourceKind::Ghz { m, .. } => m,
        }
    }

    fn local_dim(&self) -> usize {
        match *self {
            ResourceKind::Epr => 2,
            ResourceKind::Ghz { d, .. } | ResourceKind::GhzDiagonal { d } => d,
        }
    }

    pub fn is_pure(&self) -> bool {
        !matches!(self, ResourceKind::GhzDiagonal { .. })
    }

    fn pure_state(&self) -> Result<Option<MultiQuditState>> {
        match *self {
            ResourceKind::Epr => Ok(Some(epr())),
            ResourceKind::Ghz { d, m } => ghz(d, m).map(Some),
            ResourceKind::GhzDiagonal { .. } => Ok(None),
        }
    }

    /// Eigenvalues of the resource's density matrix.
    fn spectrum(&self) -> Vec<f64> {
        let n = self.local_dim().pow(self.particles() as u32);
        let mut out = vec![0.0; n];
        match *self {
            ResourceKind::GhzDiagonal { d } => out[..d].fill(1.0 / d as f64),
            _ => out[0] = 1.0,
        }
        out
    }

    fn density(&self) -> Result<ComplexMatrix> {
        match *self {
            ResourceKind::GhzDiagonal { d } => {
                if d < 2 {
                    return invalid(format!("GHZ-diagonal resource needs d >= 2, got {d}"));
                }
                let mut diag = vec![0.0; d * d];
                for j in 0..d {
                    diag[j * d + j] = 1.0 / d as f64;
                }
                Ok(ComplexMatrix::from_real_diag(&diag))
            }
            _ => {
                let psi = self.pure_state()?.expect("pure resource");
                Ok(ComplexMatrix::projector(psi.amplitudes()))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Resource {
    pub kind: ResourceKind,
    /// Party holding each particle of the resource, in particle order.
    pub parties: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub parties: usize,
    pub resources: Vec<Resource>,
}

impl NetworkSpec {
    /// Every pair of the `n` parties shares one EPR pair.
    pub fn complete_graph_epr(n: usize) -> Self {
        let mut resources = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                resources.push(Resource { kind: ResourceKind::Epr, parties: vec![i, j] });
            }
        }
        NetworkSpec { parties: n, resources }
    }

    fn validate(&self) -> Result<()> {
        if self.parties < 2 {
            return invalid("a network needs at least two parties");
        }
        if self.resources.is_empty() {
            return invalid("a network needs at least one resource");
        }
        let mut holds = vec![false; self.parties];
        for (k, r) in self.resources.iter().enumerate() {
            if r.parties.len() != r.kind.particles() {
                return invalid(format!(
                    "resource {k} has {} particles but {} parties assigned",
                    r.kind.particles(),
                    r.parties.len()
                ));
            }
            for &p in &r.parties {
                if p >= self.parties {
                    return invalid(format!("resource {k} references party {p} of {}", self.parties));
                }
                holds[p] = true;
            }
        }
        if let Some(p) = holds.iter().position(|h| !h) {
            return invalid(format!("party {p} holds no particle"));
        }
        Ok(())
    }

    /// Particle dims in resource order, and the party-grouped site order.
    fn layout(&self) -> Result<(Dims, Vec<usize>, Vec<usize>)> {
        let mut dims = Vec::new();
        let mut owner = Vec::new();
        for r in &self.resources {
            for &p in &r.parties {
                dims.push(r.kind.local_dim());
                owner.push(p);
            }
        }
        let mut order: Vec<usize> = (0..owner.len()).collect();
        order.sort_by_key(|&i| owner[i]); // stable: keeps resource order within a party
        let party_dims = (0..self.parties)
            .map(|p| owner.iter().zip(&dims).filter(|(&o, _)| o == p).map(|(_, &d)| d).product())
            .collect();
        Ok((Dims::new(dims)?, order, party_dims))
    }

    /// Pure party-grouped state when no resource is mixed.
    pub fn pure_state(&self) -> Result<Option<MultiQuditState>> {
        self.validate()?;
        if !self.resources.iter().all(|r| r.kind.is_pure()) {
            return Ok(None);
        }
        let mut joint: Option<MultiQuditState> = None;
        for r in &self.resources {
            let psi = r.kind.pure_state()?.expect("pure resource");
            joint = Some(match joint {
                None => psi,
                Some(j) => j.tensor(&psi),
            });
        }
        let (_, order, party_dims) = self.layout()?;
        let grouped = joint.expect("at least one resource").permute(&order)?;
        Ok(Some(MultiQuditState { dims: Dims::new(party_dims)?, amps: grouped.amps }))
    }
}

/// Density matrix of a network with each party's particles merged into one site.
#[derive(Debug, Clone)]
pub struct NetworkState {
    density: DensityMatrix,
}

impl NetworkState {
    pub fn density(&self) -> &DensityMatrix {
        &self.density
    }

    pub fn party_dims(&self) -> &Dims {
        self.density.dims()
    }
}

/// Tensor product of all resources, reordered so each party's particles are
/// contiguous (party 0 first); each party is then one composite site.
pub fn compose_network(spec: &NetworkSpec) -> Result<NetworkState> {
    spec.validate()?;
    let mut joint: Option<ComplexMatrix> = None;
    let mut spectrum = vec![1.0];
    for r in &spec.resources {
        let rho = r.kind.density()?;
        joint = Some(match joint {
            None => rho,
            Some(j) => kron(&j, &rho),
        });
        spectrum = spectrum.iter().flat_map(|a| r.kind.spectrum().into_iter().map(move |b| a * b)).collect();
    }
    let (dims, order, party_dims) = spec.layout()?;
    let (_, grouped) = permute_sites(&joint.expect("at least one resource"), &dims, &order)?;
    // a tensor product of density matrices, reordered: its spectrum is the
    // set of products of the factors' spectra
    let density = DensityMatrix::with_known_spectrum(grouped, Dims::new(party_dims)?, spectrum);
    Ok(NetworkState { density })
}

/// `|0⟩ ⊗ |ψ⟩`-style helper: a product of single-site basis state and an EPR pair.
pub fn zero_epr() -> MultiQuditState {
    let zero = MultiQuditState { dims: Dims::new(vec![2]).expect("valid"), amps: vec![real(1.0), real(0.0)] };
    zero.tensor(&epr())
}

/// `|+⟩` on one qubit.
pub fn plus() -> MultiQuditState {
    MultiQuditState {
        dims: Dims::new(vec![2]).expect("valid"),
        amps: vec![real(FRAC_1_SQRT_2), real(FRAC_1_SQRT_2)],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{hermitian_eigenvalues, reduced_of_pure, SiteSet};

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    #[test]
    fn from_amplitudes_band() {
        let dims = Dims::new(vec![2]).unwrap();
        let s = MultiQuditState::from_amplitudes(dims.clone(), vec![real(1.0), real(0.0)]).unwrap();
        assert_eq!(s.amplitudes()[0], real(1.0));
        let near = MultiQuditState::from_amplitudes(dims.clone(), vec![real(1.0 + 5e-7), real(0.0)]).unwrap();
        assert!(approx(near.norm(), 1.0, 1e-15));
        assert!(MultiQuditState::from_amplitudes(dims.clone(), vec![real(0.0), real(0.0)]).is_err());
        assert!(MultiQuditState::from_amplitudes(dims.clone(), vec![real(2.0), real(0.0)]).is_err());
        assert!(MultiQuditState::from_amplitudes(dims, vec![real(1.0)]).is_err());
    }

    #[test]
    fn epr_from_amplitudes() {
        let dims = Dims::uniform(2, 2).unwrap();
        let h = FRAC_1_SQRT_2;
        let s = MultiQuditState::from_amplitudes(dims, vec![real(h), real(0.0), real(0.0), real(h)]).unwrap();
        let g = ghz(2, 2).unwrap();
        assert_eq!(s.dims(), g.dims());
        assert!(s.amplitudes().iter().zip(g.amplitudes()).all(|(a, b)| (a - b).norm() < 1e-15));
    }

    #[test]
    fn ghz_marginals_maximally_mixed() {
        let g = ghz(3, 3).unwrap();
        for j in 0..3 {
            let r = reduced_of_pure(g.amplitudes(), g.dims(), &SiteSet::single(j, 3).unwrap()).unwrap();
            assert!(r.max_abs_diff(&ComplexMatrix::identity(3).scale(1.0 / 3.0)) < 1e-15);
        }
        assert!(ghz(1, 3).is_err());
    }

    #[test]
    fn generalized_ghz_special_points() {
        let pi = std::f64::consts::PI;
        let s = generalized_ghz3(pi, 0.3);
        assert!(approx(s.amplitudes()[26].norm(), 1.0, 1e-15));
        let s = generalized_ghz3(pi / 2.0, pi / 2.0);
        assert!(approx(s.amplitudes()[13].norm(), 1.0, 1e-15));
        assert!(s.amplitudes()[0].norm() < 1e-16 && s.amplitudes()[26].norm() < 1e-16);
        let w = generalized_ghz3_weights(pi / 2.0, pi / 4.0);
        assert!(approx(w[0], 0.5, 1e-15) && approx(w[1], 0.5, 1e-15) && w[2] < 1e-30);
    }

    #[test]
    fn w_state_marginal_purity() {
        let w = w_qutrit();
        assert!(approx(w.norm(), 1.0, 1e-15));
        for j in 0..3 {
            let r = reduced_of_pure(w.amplitudes(), w.dims(), &SiteSet::single(j, 3).unwrap()).unwrap();
            let purity: f64 = (0..3).map(|i| (0..3).map(|k| (r[(i, k)] * r[(k, i)]).re).sum::<f64>()).sum();
            assert!(approx(purity, 5.0 / 9.0, 1e-15));
        }
    }

    #[test]
    fn star4_hub_pair_spectrum() {
        let s = star4();
        assert!(approx(s.norm(), 1.0, 1e-15));
        let r = reduced_of_pure(s.amplitudes(), s.dims(), &SiteSet::new([0, 1], 4).unwrap()).unwrap();
        let vals = hermitian_eigenvalues(&r).unwrap();
        for (k, v) in vals.iter().enumerate() {
            let expected = if k < 12 { 0.0 } else { 0.25 };
            assert!(approx(*v, expected, 1e-12), "{vals:?}");
        }
    }

    #[test]
    fn haar_is_deterministic_and_normalized() {
        let dims = Dims::new(vec![3, 2, 4]).unwrap();
        let a = haar_random(&dims, 17);
        let b = haar_random(&dims, 17);
        assert_eq!(a, b);
        assert_ne!(a, haar_random(&dims, 18));
        assert!(approx(a.norm(), 1.0, 1e-12));
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let u = haar_unitary(4, 3);
        assert!(u.adjoint().matmul(&u).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-13);
    }

    #[test]
    fn state_file_round_trip() {
        let s = haar_random(&Dims::new(vec![2, 3]).unwrap(), 5);
        let back = MultiQuditState::from_json(&s.to_json()).unwrap();
        assert!(s.amplitudes().iter().zip(back.amplitudes()).all(|(a, b)| (a - b).norm() < 1e-15));
        assert!(MultiQuditState::from_json(r#"{"dims":[2],"amplitudes":[[0.5,0]]}"#).is_err());
        assert!(MultiQuditState::from_json(r#"{"dims":[2],"amplitudes":[[0.5,0],[0.5,0]]}"#).is_err());
        assert!(MultiQuditState::from_json(r#"{"dims":[1],"amplitudes":[[1,0]]}"#).is_err());
    }

    #[test]
    fn single_epr_network_is_epr() {
        let spec = NetworkSpec { parties: 2, resources: vec![Resource { kind: ResourceKind::Epr, parties: vec![0, 1] }] };
        let net = compose_network(&spec).unwrap();
        assert!(net.density().matrix().max_abs_diff(&ComplexMatrix::projector(epr().amplitudes())) < 1e-15);
        assert_eq!(net.party_dims().as_slice(), &[2, 2]);
    }

    #[test]
    fn network_validation() {
        let bad_party = NetworkSpec { parties: 2, resources: vec![Resource { kind: ResourceKind::Epr, parties: vec![0, 2] }] };
        assert!(compose_network(&bad_party).is_err());
        let bad_count = NetworkSpec { parties: 3, resources: vec![Resource { kind: ResourceKind::Ghz { d: 2, m: 3 }, parties: vec![0, 1] }] };
        assert!(compose_network(&bad_count).is_err());
        let idle = NetworkSpec { parties: 3, resources: vec![Resource { kind: ResourceKind::Epr, parties: vec![0, 1] }] };
        assert!(compose_network(&idle).is_err());
        let empty = NetworkSpec { parties: 2, resources: vec![] };
        assert!(compose_network(&empty).is_err());
    }

    #[test]
    fn pure_and_density_network_paths_agree() {
        let spec = NetworkSpec::complete_graph_epr(3);
        let pure = spec.pure_state().unwrap().unwrap();
        assert_eq!(pure.dims().as_slice(), &[4, 4, 4]);
        let net = compose_network(&spec).unwrap();
        let proj = ComplexMatrix::projector(pure.amplitudes());
        assert!(net.density().matrix().max_abs_diff(&proj) < 1e-15);
    }

    #[test]
    fn ghz_diagonal_forces_mixed() {
        let spec = NetworkSpec {
            parties: 2,
            resources: vec![Resource { kind: ResourceKind::GhzDiagonal { d: 3 }, parties: vec![0, 1] }],
        };
        assert!(spec.pure_state().unwrap().is_none());
        let net = compose_network(&spec).unwrap();
        let spec_vals = net.density().spectrum();
        assert_eq!(spec_vals.iter().filter(|&&v| v > 1e-12).count(), 3);
    }

    #[test]
    fn network_spectrum_matches_eigensolver() {
        let spec = NetworkSpec {
            parties: 3,
            resources: vec![
                Resource { kind: ResourceKind::Epr, parties: vec![0, 1] },
                Resource { kind: ResourceKind::GhzDiagonal { d: 2 }, parties: vec![2, 0] },
            ],
        };
        let net = compose_network(&spec).unwrap();
        let direct = crate::tensor::hermitian_eigenvalues(net.density().matrix()).unwrap();
        assert_eq!(direct.len(), net.density().spectrum().len());
        for (a, b) in direct.iter().zip(net.density().spectrum()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn local_unitary_preserves_norm() {
        let s = haar_random(&Dims::new(vec![3, 2]).unwrap(), 1);
        let u = haar_unitary(3, 9);
        let t = s.apply_local(0, &u).unwrap();
        assert!(approx(t.norm(), 1.0, 1e-13));
        assert!(s.apply_local(0, &haar_unitary(2, 1)).is_err());
    }

    #[test]
    fn plus_marginal() {
        let s = MultiQuditState::basis(Dims::new(vec![2]).unwrap(), &[0]).unwrap().tensor(&plus());
        let r = reduced_of_pure(s.amplitudes(), s.dims(), &SiteSet::single(1, 2).unwrap()).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::from_fn(2, 2, |_, _| real(0.5))) < 1e-15);
        assert_eq!(zero_epr().dims().as_slice(), &[2, 2, 2]);
    }
}
