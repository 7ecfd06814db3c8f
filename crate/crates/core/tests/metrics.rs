mod common;

use common::{random_matrix, rng};
use faer::Mat;
use rishm_core::linalg::{product, right_singular, singular_values};
use rishm_core::metrics::{effective_rank, mode_fields};
use rishm_core::optimizer::{objective, LinkMatrices};
use rishm_core::{c64, RisPhaseProfile, TransmitCovariance};

fn random_unitary(r: &mut rand_chacha::ChaCha8Rng, n: usize) -> Mat<c64> {
    let a = random_matrix(r, n, n, 1.0);
    right_singular(a.as_ref()).unwrap().1
}

#[test]
fn effective_rank_bounds_and_invariances() {
    let mut r = rng(1);
    for _ in 0..30 {
        let a = random_matrix(&mut r, 5, 4, 1.0);
        let e = effective_rank(a.as_ref()).unwrap();
        assert!((1.0..=4.0 + 1e-12).contains(&e));
        let u = random_unitary(&mut r, 5);
        let v = random_unitary(&mut r, 4);
        let b = product(product(u.as_ref(), a.as_ref()).as_ref(), v.as_ref());
        assert!((effective_rank(b.as_ref()).unwrap() - e).abs() < 1e-8);
        let s = Mat::from_fn(5, 4, |i, j| a[(i, j)] * c64::new(-2.5, 7.0));
        assert!((effective_rank(s.as_ref()).unwrap() - e).abs() < 1e-8);
    }
}

#[test]
fn rate_invariant_under_cell_relabelling() {
    let mut r = rng(2);
    let (m, l, n) = (3, 2, 6);
    let f1 = random_matrix(&mut r, m, l, 1.0);
    let f2 = random_matrix(&mut r, n, l, 1.0);
    let f3 = random_matrix(&mut r, m, n, 1.0);
    let theta = RisPhaseProfile::random(n, &mut r);
    let q = TransmitCovariance::isotropic(l, 1.0).unwrap();
    let perm = [3, 0, 5, 1, 4, 2];
    let f2p = Mat::from_fn(n, l, |i, j| f2[(perm[i], j)]);
    let f3p = Mat::from_fn(m, n, |i, j| f3[(i, perm[j])]);
    let thetap = RisPhaseProfile::new(perm.iter().map(|&p| theta.phases()[p]).collect());
    let a = objective(&theta, &q, LinkMatrices::new(f1.as_ref(), f2.as_ref(), f3.as_ref()).unwrap(), 0.4).unwrap();
    let b = objective(&thetap, &q, LinkMatrices::new(f1.as_ref(), f2p.as_ref(), f3p.as_ref()).unwrap(), 0.4).unwrap();
    assert!((a - b).abs() < 1e-12);
}

#[test]
fn doubling_noise_lowers_rate() {
    let mut r = rng(4);
    let f1 = random_matrix(&mut r, 2, 2, 1.0);
    let f2 = random_matrix(&mut r, 3, 2, 1.0);
    let f3 = random_matrix(&mut r, 2, 3, 1.0);
    let links = LinkMatrices::new(f1.as_ref(), f2.as_ref(), f3.as_ref()).unwrap();
    let theta = RisPhaseProfile::zeros(3);
    let q = TransmitCovariance::isotropic(2, 1.0).unwrap();
    assert!(objective(&theta, &q, links, 0.5).unwrap() > objective(&theta, &q, links, 1.0).unwrap());
    let zero = TransmitCovariance::zero(2, 1.0).unwrap();
    assert_eq!(objective(&theta, &zero, links, 0.5).unwrap(), 0.0);
}

#[test]
fn mode_fields_respect_operator_norm_and_order() {
    let mut r = rng(6);
    let h = random_matrix(&mut r, 30, 6, 1.0);
    let h_eff = random_matrix(&mut r, 5, 6, 1.0);
    let modes = mode_fields(h.as_ref(), h_eff.as_ref(), 2.0, 0.3, 5).unwrap();
    let op = singular_values(h.as_ref()).unwrap()[0];
    for w in modes.windows(2) {
        assert!(w[0].singular_value >= w[1].singular_value);
    }
    for m in &modes {
        assert_eq!(m.values.len(), 30);
        let e: f64 = m.values.iter().map(|x| x.norm_sqr()).sum();
        assert!(e <= op * op * m.power * (1.0 + 1e-12));
        assert!(m.normalized_phases().all(|p| (-1.0..=1.0).contains(&p)));
    }
    let (_, v) = right_singular(h_eff.as_ref()).unwrap();
    let gram = product(v.adjoint(), v.as_ref());
    for i in 0..gram.nrows() {
        for j in 0..gram.ncols() {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((gram[(i, j)] - c64::new(want, 0.0)).norm() < 1e-10);
        }
    }
}
