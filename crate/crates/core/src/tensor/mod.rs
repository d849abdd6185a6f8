//! Dense complex linear algebra over heterogeneous multi-qudit registers.
//!
//! Site 0 is the leftmost tensor factor: a basis index is the row-major
//! flattening of the per-site digits with site 0 most significant.

mod eigen;
mod matrix;

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, HermitianEigen};
pub use matrix::ComplexMatrix;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub type C64 = Complex64;

/// Local dimensions of each site, every entry at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Dims(Vec<usize>);

impl Dims {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return invalid("dimension list is empty");
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return invalid(format!("site dimension {d} is below 2"));
        }
        dims.iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or_else(|| crate::Error::InvalidInput("total dimension overflows".into()))?;
        Ok(Dims(dims))
    }

    pub fn uniform(d: usize, sites: usize) -> Result<Self> {
        Self::new(vec![d; sites])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn sites(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> usize {
        self.0.iter().product()
    }

    /// Product of the local dimensions over `sites`.
    pub fn subsystem_dim(&self, sites: &SiteSet) -> usize {
        sites.iter().map(|s| self.0[s]).product()
    }

    /// Row-major strides: `strides[i]` is the index weight of site `i`.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.0.len()];
        for i in (0..self.0.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.0[i + 1];
        }
        strides
    }

    /// Full-register index offsets contributed by every joint configuration
    /// of `sites`, enumerated row-major over `sites` in ascending order.
    pub(crate) fn offsets(&self, sites: &SiteSet) -> Vec<usize> {
        let strides = self.strides();
        let mut out = vec![0usize];
        for s in sites.iter() {
            let d = self.0[s];
            let mut next = Vec::with_capacity(out.len() * d);
            for &base in &out {
                for digit in 0..d {
                    next.push(base + digit * strides[s]);
                }
            }
            out = next;
        }
        out
    }
}

impl TryFrom<Vec<usize>> for Dims {
    type Error = crate::Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Dims::new(v)
    }
}

impl From<Dims> for Vec<usize> {
    fn from(d: Dims) -> Self {
        d.0
    }
}

/// Sorted, duplicate-free set of site positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SiteSet(Vec<usize>);

impl SiteSet {
    /// Builds a site set for a register with `n_sites` sites. Duplicates are
    /// rejected rather than merged.
    pub fn new(indices: impl IntoIterator<Item = usize>, n_sites: usize) -> Result<Self> {
        let mut v: Vec<usize> = indices.into_iter().collect();
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return invalid(format!("duplicate site in {v:?}"));
        }
        if let Some(&bad) = v.iter().find(|&&s| s >= n_sites) {
            return invalid(format!("site {bad} out of range for {n_sites} sites"));
        }
        Ok(SiteSet(v))
    }

    pub fn single(site: usize, n_sites: usize) -> Result<Self> {
        Self::new([site], n_sites)
    }

    pub fn all(n_sites: usize) -> Self {
        SiteSet((0..n_sites).collect())
    }

    pub fn complement(&self, n_sites: usize) -> Self {
        SiteSet((0..n_sites).filter(|s| !self.0.contains(s)).collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, site: usize) -> bool {
        self.0.binary_search(&site).is_ok()
    }
}

fn check_square(rho: &ComplexMatrix, dims: &Dims) -> Result<()> {
    let n = dims.total();
    if rho.rows() != n || rho.cols() != n {
        return invalid(format!(
            "matrix is {}x{} but dims {:?} require {n}x{n}",
            rho.rows(),
            rho.cols(),
            dims.as_slice()
        ));
    }
    Ok(())
}

fn check_sites(set: &SiteSet, dims: &Dims) -> Result<()> {
    match set.iter().find(|&s| s >= dims.sites()) {
        Some(s) => invalid(format!("site {s} out of range for {} sites", dims.sites())),
        None => Ok(()),
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca, rb, cb) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            let x = a[(i, j)];
            if x == C64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    out[(i * rb + k, j * cb + l)] = x * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Kronecker product of two state vectors.
pub fn kron_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).collect()
}

/// Reduced matrix on `keep`, tracing out every other site.
pub fn partial_trace(rho: &ComplexMatrix, dims: &Dims, keep: &SiteSet) -> Result<ComplexMatrix> {
    check_square(rho, dims)?;
    check_sites(keep, dims)?;
    let traced = keep.complement(dims.sites());
    let kept_off = dims.offsets(keep);
    let traced_off = dims.offsets(&traced);
    let dk = kept_off.len();
    let mut out = ComplexMatrix::zeros(dk, dk);
    for (a, &ka) in kept_off.iter().enumerate() {
        for (b, &kb) in kept_off.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for &t in &traced_off {
                acc += rho[(ka + t, kb + t)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

/// Reduced matrix of the pure state `psi` on `keep`, computed as `M M†`
/// from the reshaped amplitude matrix without forming `|ψ⟩⟨ψ|`.
///
/// An empty `keep` gives the 1×1 matrix `[⟨ψ|ψ⟩]`.
pub fn reduced_of_pure(psi: &[C64], dims: &Dims, keep: &SiteSet) -> Result<ComplexMatrix> {
    if psi.len() != dims.total() {
        return invalid(format!(
            "state has {} amplitudes but dims {:?} require {}",
            psi.len(),
            dims.as_slice(),
            dims.total()
        ));
    }
    check_sites(keep, dims)?;
    let traced = keep.complement(dims.sites());
    let kept_off = dims.offsets(keep);
    let traced_off = dims.offsets(&traced);
    let dk = kept_off.len();
    let dt = traced_off.len();

    let mut m = vec![C64::new(0.0, 0.0); dk * dt];
    for (a, &ka) in kept_off.iter().enumerate() {
        for (t, &kt) in traced_off.iter().enumerate() {
            m[a * dt + t] = psi[ka + kt];
        }
    }

    let mut out = ComplexMatrix::zeros(dk, dk);
    for a in 0..dk {
        let row_a = &m[a * dt..(a + 1) * dt];
        for b in a..dk {
            let row_b = &m[b * dt..(b + 1) * dt];
            let v: C64 = row_a.iter().zip(row_b).map(|(x, y)| x * y.conj()).sum();
            out[(a, b)] = v;
            out[(b, a)] = v.conj();
        }
        out[(a, a)] = C64::new(out[(a, a)].re, 0.0);
    }
    Ok(out)
}

/// `Tr ρ^q` for integer `q ≥ 2` by repeated multiplication.
pub fn trace_power(rho: &ComplexMatrix, q: u32) -> Result<f64> {
    if q < 2 {
        return invalid(format!("trace_power needs q >= 2, got {q}"));
    }
    if !rho.is_square() {
        return invalid("trace_power needs a square matrix");
    }
    let half = q / 2;
    let left = rho.pow(half);
    let right = if q.is_multiple_of(2) { left.clone() } else { left.matmul(rho) };
    // Tr(L R) = Σ_ij L_ij R_ji
    let n = rho.rows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += left[(i, j)] * right[(j, i)];
        }
    }
    Ok(acc.re)
}

/// Transpose applied to the indices of `subset` only.
pub fn partial_transpose(
    rho: &ComplexMatrix,
    dims: &Dims,
    subset: &SiteSet,
) -> Result<ComplexMatrix> {
    check_square(rho, dims)?;
    check_sites(subset, dims)?;
    let rest = subset.complement(dims.sites());
    let sub_off = dims.offsets(subset);
    let rest_off = dims.offsets(&rest);
    let n = dims.total();
    let mut out = ComplexMatrix::zeros(n, n);
    for &x1 in &sub_off {
        for &y1 in &rest_off {
            for &x2 in &sub_off {
                for &y2 in &rest_off {
                    out[(x2 + y1, x1 + y2)] = rho[(x1 + y1, x2 + y2)];
                }
            }
        }
    }
    Ok(out)
}

/// Index permutation that reorders sites so new site `k` is old site `order[k]`.
fn site_permutation(dims: &Dims, order: &[usize]) -> Result<(Dims, Vec<usize>)> {
    let n = dims.sites();
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&o| o >= n || std::mem::replace(&mut seen[o], true)) {
        return invalid(format!("{order:?} is not a permutation of {n} sites"));
    }
    let new_dims = Dims::new(order.iter().map(|&o| dims.as_slice()[o]).collect())?;
    let old_strides = dims.strides();
    let new_strides = new_dims.strides();
    // map[new_index] = old_index
    let mut map = vec![0usize; dims.total()];
    for (new_idx, slot) in map.iter_mut().enumerate() {
        let mut old = 0;
        for (k, &o) in order.iter().enumerate() {
            let digit = (new_idx / new_strides[k]) % new_dims.as_slice()[k];
            old += digit * old_strides[o];
        }
        *slot = old;
    }
    Ok((new_dims, map))
}

/// Reorders the tensor factors of a state vector.
pub fn permute_sites_vec(psi: &[C64], dims: &Dims, order: &[usize]) -> Result<(Dims, Vec<C64>)> {
    if psi.len() != dims.total() {
        return invalid("state length does not match dims");
    }
    let (new_dims, map) = site_permutation(dims, order)?;
    Ok((new_dims, map.iter().map(|&o| psi[o]).collect()))
}

/// Reorders the tensor factors of a square operator.
pub fn permute_sites(rho: &ComplexMatrix, dims: &Dims, order: &[usize]) -> Result<(Dims, ComplexMatrix)> {
    check_square(rho, dims)?;
    let (new_dims, map) = site_permutation(dims, order)?;
    let n = map.len();
    let out = ComplexMatrix::from_fn(n, n, |i, j| rho[(map[i], map[j])]);
    Ok((new_dims, out))
}
