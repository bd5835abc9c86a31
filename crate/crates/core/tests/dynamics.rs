use num_complex::Complex64 as C;
use semiclassical_core::algebra::{overlap_modulus_sq, GroupKind};
use semiclassical_core::dynamics::{integrate, lyapunov_estimate, mf_overlap, propagate, IntegratorConfig, ProductState};
use semiclassical_core::model::{classical_energy, maser_hamiltonian, CouplingNormalization, MaserParams};

fn fig1_params(j: f64) -> MaserParams {
    MaserParams::new(1.0, 1.0, 0.5, 0.2, j).unwrap().with_normalization(CouplingNormalization::SqrtTwoJ)
}

fn chaotic() -> ProductState {
    ProductState::from_parts(C::new(5.7263433 / 2f64.sqrt(), 0.0), C::new(-0.24253563, 0.0)).unwrap()
}

#[test]
fn tightening_tolerances_converges() {
    let h = maser_hamiltonian(&fig1_params(4.5)).unwrap();
    let coarse = IntegratorConfig { rel_tol: 1e-8, abs_tol: 1e-10, ..Default::default() };
    let fine = IntegratorConfig { rel_tol: 1e-9, abs_tol: 1e-11, ..Default::default() };
    let a = propagate(&h, &chaotic(), 5.0, &coarse).unwrap();
    let b = propagate(&h, &chaotic(), 5.0, &fine).unwrap();
    let d = (a.x.z() - b.x.z()).norm() + (a.y.z() - b.y.z()).norm();
    assert!(d < 10.0 * 1e-8 * a.x.z().norm().max(1.0), "{d}");
}

#[test]
fn decoupled_lyapunov_vanishes() {
    let h = maser_hamiltonian(&MaserParams::new(1.0, 1.0, 0.0, 0.0, 4.5).unwrap()).unwrap();
    let s = ProductState::from_parts(C::new(2.0, 0.5), C::new(0.3, -0.2)).unwrap();
    let est = lyapunov_estimate(&h, &s, 1e-8, 200.0, 1.0, &IntegratorConfig::default()).unwrap();
    assert!(est.exponent.abs() < 1e-3, "{}", est.exponent);
    assert_eq!(est.running.len(), 200);
}

#[test]
fn scaled_trajectories_coincide_across_j() {
    let (zx, zy) = (chaotic().x.z() / 18f64.sqrt(), chaotic().y.z());
    let cfg = IntegratorConfig { dense_output_dt: 0.5, ..Default::default() };
    let run = |j: f64| {
        let h = maser_hamiltonian(&fig1_params(j)).unwrap();
        let s = ProductState::from_parts(zx * (4.0 * j).sqrt(), zy).unwrap();
        let t = integrate(&h, &s, 10.0, &cfg).unwrap();
        t.states().iter().map(|s| (s.x.z() / (4.0 * j).sqrt(), s.y.z())).collect::<Vec<_>>()
    };
    let base = run(4.5);
    for j in [9.0, 18.0] {
        for (a, b) in base.iter().zip(run(j)) {
            assert!((a.0 - b.0).norm() < 1e-7 && (a.1 - b.1).norm() < 1e-7, "J = {j}");
        }
    }
}

#[test]
fn chaotic_pair_starts_as_neighbours() {
    let a = chaotic();
    let b = ProductState::from_parts(C::new(5.7778567 / 2f64.sqrt(), 0.0), C::new(-0.26845243, 0.0)).unwrap();
    let g = GroupKind::spin(4.5).unwrap();
    let o = mf_overlap(&a, &b, GroupKind::Heisenberg, g).norm_sqr();
    assert!(o > 0.9 && o < 1.0, "{o}");
    let product = overlap_modulus_sq(GroupKind::Heisenberg, a.x, b.x) * overlap_modulus_sq(g, a.y, b.y);
    assert!((o - product).abs() < 1e-14);
    let h = maser_hamiltonian(&fig1_params(4.5)).unwrap();
    for s in [a, b] {
        assert!((classical_energy(&h, s.x, s.y).unwrap() - 8.5).abs() < 1e-5);
    }
}
