use num_complex::Complex64 as C;
use proptest::prelude::*;
use semiclassical_core::algebra::{expectation, overlap, overlap_modulus_sq, CoherentLabel, GeneratorIndex, GroupKind};
use semiclassical_core::corrections::{linear_entropy_2nd, CorrectionKernel};
use semiclassical_core::dynamics::{integrate, IntegratorConfig, ProductState};
use semiclassical_core::model::{classical_energy, maser_hamiltonian, mean_field_coeffs, BilinearHamiltonian, MaserParams};
use semiclassical_core::Error;

fn label(z: C) -> CoherentLabel {
    CoherentLabel::new(z).unwrap()
}

fn complex(r: f64) -> impl Strategy<Value = C> {
    (-r..r, -r..r).prop_map(|(a, b)| C::new(a, b))
}

fn group() -> impl Strategy<Value = GroupKind> {
    prop_oneof![
        Just(GroupKind::Heisenberg),
        (1u32..12).prop_map(|t| GroupKind::spin(t as f64 / 2.0).unwrap()),
    ]
}

fn hermitian_coeffs() -> impl Strategy<Value = ([C; 3], [C; 3], [[C; 3]; 3])> {
    let lin = || (-2.0..2.0f64, complex(2.0)).prop_map(|(r, c)| [C::new(r, 0.0), c, c.conj()]);
    let bil = (-1.0..1.0f64, complex(1.0), complex(1.0), complex(1.0), complex(1.0)).prop_map(|(g00, gpm, g0p, gp0, gpp)| {
        let (z, p, m) = (0, 1, 2);
        let mut g = [[C::new(0.0, 0.0); 3]; 3];
        g[z][z] = C::new(g00, 0.0);
        g[p][m] = gpm;
        g[m][p] = gpm.conj();
        g[z][p] = g0p;
        g[z][m] = g0p.conj();
        g[p][z] = gp0;
        g[m][z] = gp0.conj();
        g[p][p] = gpp;
        g[m][m] = gpp.conj();
        g
    });
    (lin(), lin(), bil)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn overlap_is_symmetric_and_bounded(g in group(), a in complex(4.0), b in complex(4.0)) {
        let ab = overlap_modulus_sq(g, label(a), label(b));
        let ba = overlap_modulus_sq(g, label(b), label(a));
        prop_assert!((ab - ba).abs() <= 1e-14);
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert!((overlap(g, label(a), label(b)).norm_sqr() - ab).abs() < 1e-12);
        prop_assert_eq!(overlap(g, label(a), label(a)), C::new(1.0, 0.0));
    }

    #[test]
    fn heisenberg_overlap_decreases_with_distance(z1 in complex(3.0), dir in 0.0..6.3f64, d in 0.01..3.0f64, step in 0.01..1.0f64) {
        let g = GroupKind::Heisenberg;
        let u = C::from_polar(1.0, dir);
        let near = overlap_modulus_sq(g, label(z1), label(z1 + u * d));
        let far = overlap_modulus_sq(g, label(z1), label(z1 + u * (d + step)));
        prop_assert!(far < near);
    }

    #[test]
    fn conjugate_expectations_and_spin_bounds(g in group(), z in complex(5.0)) {
        let p = expectation(g, GeneratorIndex::Plus, label(z));
        let m = expectation(g, GeneratorIndex::Minus, label(z));
        prop_assert_eq!(m, p.conj());
        if let Some(j) = g.j() {
            let jz = expectation(g, GeneratorIndex::Zero, label(z)).re;
            prop_assert!(jz.abs() <= j * (1.0 + 1e-15) && p.norm() <= j * (1.0 + 1e-15));
            // the Bloch vector sits on the radius-J sphere
            prop_assert!(((jz * jz + p.norm_sqr()).sqrt() - j).abs() < 1e-10 * j);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hermiticity_violations_are_rejected(
        (alpha, beta, gamma) in hermitian_coeffs(),
        which in 0usize..6,
        kick in prop_oneof![Just(C::new(0.0, 0.3)), Just(C::new(0.25, 0.0)), Just(C::new(-0.1, 0.2))],
    ) {
        let (ga, gb) = (GroupKind::Heisenberg, GroupKind::spin(1.5).unwrap());
        prop_assert!(BilinearHamiltonian::new(alpha, beta, gamma, ga, gb).is_ok());
        let (mut a, mut b, mut g) = (alpha, beta, gamma);
        match which {
            0 => a[0] += C::new(0.0, 0.5),
            1 => a[1] += kick,
            2 => b[2] += kick,
            3 => g[1][2] += kick,
            4 => g[0][1] += kick,
            _ => g[2][2] += kick,
        }
        prop_assert!(matches!(BilinearHamiltonian::new(a, b, g, ga, gb), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn mean_field_coeffs_are_linear(h1 in hermitian_coeffs(), h2 in hermitian_coeffs(), x in complex(3.0), y in complex(3.0)) {
        let (ga, gb) = (GroupKind::Heisenberg, GroupKind::spin(2.0).unwrap());
        let a = BilinearHamiltonian::new(h1.0, h1.1, h1.2, ga, gb).unwrap();
        let b = BilinearHamiltonian::new(h2.0, h2.1, h2.2, ga, gb).unwrap();
        let mut g = h1.2;
        for i in 0..3 {
            for j in 0..3 {
                g[i][j] += h2.2[i][j];
            }
        }
        let add3 = |u: [C; 3], v: [C; 3]| [u[0] + v[0], u[1] + v[1], u[2] + v[2]];
        let sum = BilinearHamiltonian::new(add3(h1.0, h2.0), add3(h1.1, h2.1), g, ga, gb).unwrap();
        let (ma, mb, ms) = (mean_field_coeffs(&a, label(x), label(y)), mean_field_coeffs(&b, label(x), label(y)), mean_field_coeffs(&sum, label(x), label(y)));
        for k in 0..3 {
            prop_assert!((ms.a[k] - ma.a[k] - mb.a[k]).norm() < 1e-12 * (1.0 + ms.a[k].norm()));
            prop_assert!((ms.b[k] - ma.b[k] - mb.b[k]).norm() < 1e-12 * (1.0 + ms.b[k].norm()));
            prop_assert!(ms.a[0].im.abs() < 1e-12 && (ms.a[1] - ms.a[2].conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn resonant_energy_is_invariant_under_joint_rotation(x in complex(4.0), y in complex(2.0), theta in 0.0..6.3f64, g in 0.0..1.0f64) {
        let h = maser_hamiltonian(&MaserParams::new(1.0, 1.0, g, 0.0, 4.5).unwrap()).unwrap();
        let r = C::from_polar(1.0, theta);
        let e0 = classical_energy(&h, label(x), label(y)).unwrap();
        let e1 = classical_energy(&h, label(x * r), label(y * r)).unwrap();
        prop_assert!((e0 - e1).abs() < 1e-11 * (1.0 + e0.abs()));
    }

    #[test]
    fn second_order_entropy_is_nonnegative(
        modes in proptest::collection::vec((complex(1.0), -4.0..4.0f64), 1..5),
        t_frac in 0.0..1.0f64,
    ) {
        let times: Vec<f64> = (0..=400).map(|k| 0.01 * k as f64).collect();
        let c: Vec<C> = times
            .iter()
            .map(|t| modes.iter().map(|(a, w)| a * C::from_polar(1.0, w * t)).sum())
            .collect();
        let k = CorrectionKernel::from_samples(times, c).unwrap();
        let t = 4.0 * t_frac;
        let d = linear_entropy_2nd(&k, t).unwrap();
        let identity = 2.0 * k.cum_at(t).unwrap().norm_sqr();
        prop_assert!(d >= -1e-12, "{}", d);
        prop_assert!((d - identity).abs() < 1e-3 * (1.0 + identity), "{} vs {}", d, identity);
    }
}

#[test]
fn bloch_radius_is_preserved_by_the_flow() {
    let h = maser_hamiltonian(&MaserParams::new(1.0, 1.0, 0.5, 0.2, 4.5).unwrap()).unwrap();
    let s = ProductState::from_parts(C::new(4.0, 0.0), C::new(-0.25, 0.0)).unwrap();
    let traj = integrate(&h, &s, 50.0, &IntegratorConfig::default()).unwrap();
    let g = h.group_b();
    for st in traj.states() {
        let jz = expectation(g, GeneratorIndex::Zero, st.y).re;
        let jp = expectation(g, GeneratorIndex::Plus, st.y);
        assert!(((jz * jz + jp.norm_sqr()).sqrt() - 4.5).abs() < 1e-10);
        assert!(st.x.z().re.is_finite() && st.y.z().re.is_finite());
    }
}
