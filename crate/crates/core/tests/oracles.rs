//! Values checked against independent computations: numpy reference values
//! frozen below, brute-force index loops, and Monte Carlo estimates.

use qudit_polygon::measures::{marginal_vector, measure_network, measure_pure};
use qudit_polygon::states::{
    compose_network, generalized_ghz3, generalized_ghz3_weights, ghz, haar_random, ResourceKind,
};
use qudit_polygon::tensor::{hermitian_eigenvalues, kron, partial_trace, reduced_of_pure};
use qudit_polygon::{Bipartition, ComplexMatrix, Dims, MeasureSpec, MultiQuditState, NetworkSpec, SiteSet, C64};

fn dims(d: &[usize]) -> Dims {
    Dims::new(d.to_vec()).unwrap()
}

fn close(a: f64, b: f64, tol: f64) {
    assert!((a - b).abs() < tol, "{a} vs {b} (tol {tol})");
}

/// The fixed 2 ⊗ 3 state used for the numpy reference values.
fn fixed_pair() -> MultiQuditState {
    let amps = vec![
        C64::new(0.3, 0.1),
        C64::new(-0.2, 0.4),
        C64::new(0.5, 0.0),
        C64::new(0.1, -0.3),
        C64::new(0.0, -0.25),
        C64::new(0.35, 0.2),
    ];
    MultiQuditState::normalized(dims(&[2, 3]), amps).unwrap()
}

/// `cos(0.7k) + i sin(1.3k + 0.2)` on dims `[2, 2, 3]`, normalized.
fn fixed_triple() -> MultiQuditState {
    let amps = (0..12)
        .map(|k| {
            let k = k as f64;
            C64::new((0.7 * k).cos(), (1.3 * k + 0.2).sin())
        })
        .collect();
    MultiQuditState::normalized(dims(&[2, 2, 3]), amps).unwrap()
}

#[test]
fn fixed_pair_matches_numpy() {
    let psi = fixed_pair();
    let cut = Bipartition::from_side_a([0], 2).unwrap();
    let m = |spec: MeasureSpec| measure_pure(&psi, &cut, &spec).unwrap();
    close(m(MeasureSpec::QConcurrence { q: 2.0 }), 0.44571428571428573, 1e-12);
    close(m(MeasureSpec::QConcurrence { q: 3.5 }), 0.7386830116443732, 1e-12);
    close(m(MeasureSpec::Eof), 0.9201997042225221, 1e-12);
    close(m(MeasureSpec::RenyiEnt { r: 0.5 }), 0.9591432076667862, 1e-12);
    close(m(MeasureSpec::TsallisEnt { r: 1.5 }), 0.5278040263406705, 1e-12);
    close(m(MeasureSpec::UnifiedEnt { r: 2.0, s: 0.5 }), 0.5109926604805277, 1e-12);
    close(m(MeasureSpec::Concurrence), 0.9441549509633318, 1e-12);
    close(m(MeasureSpec::Negativity), 0.4720774754816661, 1e-10);
}

#[test]
fn fixed_triple_matches_numpy() {
    let psi = fixed_triple();
    let c2 = marginal_vector(&psi, &MeasureSpec::QConcurrence { q: 2.0 }).unwrap();
    let eof = marginal_vector(&psi, &MeasureSpec::Eof).unwrap();
    let want_c2 = [0.4735476383258339, 0.29714337949373104, 0.48522016587017036];
    let want_eof = [0.9614934815831333, 0.683395066106781, 0.9893947424915255];
    for j in 0..3 {
        close(c2.values()[j], want_c2[j], 1e-12);
        close(eof.values()[j], want_eof[j], 1e-12);
    }
    let cut = Bipartition::from_side_a([0, 2], 3).unwrap();
    close(measure_pure(&psi, &cut, &MeasureSpec::QConcurrence { q: 3.0 }).unwrap(), 0.44571506924059634, 1e-12);
}

/// Partial trace by direct index arithmetic on the full digit expansion.
fn brute_partial_trace(rho: &ComplexMatrix, d: &[usize], keep: &[usize]) -> ComplexMatrix {
    let total: usize = d.iter().product();
    let digits = |mut idx: usize| {
        let mut out = vec![0; d.len()];
        for site in (0..d.len()).rev() {
            out[site] = idx % d[site];
            idx /= d[site];
        }
        out
    };
    let sub = |dig: &[usize]| keep.iter().fold(0, |acc, &s| acc * d[s] + dig[s]);
    let kd: usize = keep.iter().map(|&s| d[s]).product();
    let mut out = ComplexMatrix::zeros(kd, kd);
    for x in 0..total {
        let dx = digits(x);
        for y in 0..total {
            let dy = digits(y);
            let traced_equal = (0..d.len()).filter(|s| !keep.contains(s)).all(|s| dx[s] == dy[s]);
            if traced_equal {
                out[(sub(&dx), sub(&dy))] += rho[(x, y)];
            }
        }
    }
    out
}

#[test]
fn partial_trace_matches_brute_force() {
    let d = [2, 3, 2];
    let psi = haar_random(&dims(&d), 11);
    let mixed = haar_random(&dims(&[2, 3, 2, 3]), 12);
    // a genuinely mixed 12-dimensional state: trace out the last site
    let rho = partial_trace(&mixed.density().matrix().clone(), mixed.dims(), &SiteSet::new([0, 1, 2], 4).unwrap())
        .unwrap();
    for keep in [vec![0], vec![1], vec![2], vec![0, 2], vec![1, 2], vec![0, 1, 2]] {
        let set = SiteSet::new(keep.clone(), 3).unwrap();
        let fast = partial_trace(&rho, &dims(&d), &set).unwrap();
        assert!(fast.max_abs_diff(&brute_partial_trace(&rho, &d, &keep)) < 1e-14);
        let pure = reduced_of_pure(psi.amplitudes(), psi.dims(), &set).unwrap();
        let dense = brute_partial_trace(psi.density().matrix(), &d, &keep);
        assert!(pure.max_abs_diff(&dense) < 1e-14);
    }
}

#[test]
fn partial_trace_undoes_kron() {
    let a = haar_random(&dims(&[3, 2]), 1);
    let b = haar_random(&dims(&[2, 2]), 2);
    let ra = partial_trace(a.density().matrix(), a.dims(), &SiteSet::single(0, 2).unwrap()).unwrap();
    let rb = partial_trace(b.density().matrix(), b.dims(), &SiteSet::single(1, 2).unwrap()).unwrap();
    let joint = kron(&ra, &rb);
    let d = dims(&[3, 2]);
    assert!(partial_trace(&joint, &d, &SiteSet::single(0, 2).unwrap()).unwrap().max_abs_diff(&ra) < 1e-15);
    assert!(partial_trace(&joint, &d, &SiteSet::single(1, 2).unwrap()).unwrap().max_abs_diff(&rb) < 1e-15);
}

#[test]
fn haar_qubit_population_averages_one_half() {
    let d = dims(&[2]);
    let n = 100_000;
    let mean = (0..n).map(|seed| haar_random(&d, seed).amplitudes()[0].norm_sqr()).sum::<f64>() / n as f64;
    // |α₀|² is uniform on [0, 1]: standard error ≈ 0.29/√n ≈ 1e-3
    close(mean, 0.5, 0.01);
}

#[test]
fn generalized_ghz3_marginals_over_grid() {
    for a in 0..50 {
        for b in 0..50 {
            let theta = std::f64::consts::PI * a as f64 / 49.0;
            let phi = 2.0 * std::f64::consts::PI * b as f64 / 49.0;
            let psi = generalized_ghz3(theta, phi);
            let mut want = generalized_ghz3_weights(theta, phi).to_vec();
            want.sort_by(f64::total_cmp);
            for site in 0..3 {
                let rho = reduced_of_pure(psi.amplitudes(), psi.dims(), &SiteSet::single(site, 3).unwrap()).unwrap();
                let got = hermitian_eigenvalues(&rho).unwrap();
                for (g, w) in got.iter().zip(&want) {
                    close(*g, *w, 1e-12);
                }
            }
        }
    }
}

#[test]
fn ghz_marginals_are_flat() {
    for (d, m) in [(2, 3), (3, 4), (5, 3)] {
        let psi = ghz(d, m).unwrap();
        for site in 0..m {
            let rho = reduced_of_pure(psi.amplitudes(), psi.dims(), &SiteSet::single(site, m).unwrap()).unwrap();
            let flat = ComplexMatrix::identity(d).scale(1.0 / d as f64);
            assert!(rho.max_abs_diff(&flat) < 1e-15);
        }
    }
}

#[test]
fn complete_graph_party_marginals() {
    // each party holds n-1 EPR halves: flat on 2^(n-1) levels
    for n in [2usize, 3, 4] {
        let net = compose_network(&NetworkSpec::complete_graph_epr(n)).unwrap();
        let k = 2f64.powi(n as i32 - 1);
        for j in 0..n {
            let cut = Bipartition::one_to_group(j, n).unwrap();
            let c = measure_network(&net, &cut, &MeasureSpec::QConcurrence { q: 2.0 }).unwrap();
            close(c, 1.0 - 1.0 / k, 1e-12);
        }
    }
}

#[test]
fn network_density_is_a_state() {
    let spec = NetworkSpec {
        parties: 3,
        resources: vec![
            qudit_polygon::states::Resource { kind: ResourceKind::Epr, parties: vec![0, 1] },
            qudit_polygon::states::Resource { kind: ResourceKind::GhzDiagonal { d: 3 }, parties: vec![1, 2] },
        ],
    };
    let net = compose_network(&spec).unwrap();
    let rho = net.density();
    close(rho.matrix().trace().re, 1.0, 1e-12);
    let eig = hermitian_eigenvalues(rho.matrix()).unwrap();
    assert!(eig.iter().all(|&l| l >= -1e-10));
    close(eig.iter().sum::<f64>(), 1.0, 1e-12);
    // the mixed two-level resource leaves party 2 classically correlated:
    // flat 3-level marginal with F_2 = 2/3
    let cut = Bipartition::one_to_group(2, 3).unwrap();
    close(measure_network(&net, &cut, &MeasureSpec::QConcurrence { q: 2.0 }).unwrap(), 2.0 / 3.0, 1e-12);
}
