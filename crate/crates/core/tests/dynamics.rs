use qds3::integrability::AcsCouplings;
use qds3::linalg::{hermitian_eigenvalues, KrylovPropagator, C64};
use qds3::qds::{
    assemble_hamiltonian, evolve, impurity_block, map_acs_to_qds, ohmic_bath, QdsParams, SystemBathState,
};
use qds3::su3::ChargeSector;
use nalgebra::DMatrix;

fn params(delta: f64, alpha: f64) -> QdsParams {
    QdsParams { eps3: 0.0, eps8: 0.0, delta, zeta: 0.0, alpha, omega_c: 2.0 }
}

#[test]
fn three_level_oscillation() {
    let q = params(0.8, 0.0);
    let b = ohmic_bath(&q, 2, 0.5, 1).unwrap();
    let h = assemble_hamiltonian(&q, &b).unwrap();
    let psi0 = SystemBathState::product(0, h.dim()).unwrap();
    let traj = evolve(&h, &psi0, 20.0 / q.delta, 0.05, &KrylovPropagator::default()).unwrap();
    let worst = traj
        .rows
        .iter()
        .map(|r| (r.p1 - (5.0 / 9.0 + 4.0 / 9.0 * (3.0 * q.delta * r.t).cos())).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-6, "worst = {worst}");
    assert!(traj.population_sum_error() <= 1e-9);
}

#[test]
fn populations_frozen_without_tunnelling() {
    let q = QdsParams { eps3: 0.3, eps8: -0.2, delta: 0.0, zeta: 0.4, alpha: 0.3, omega_c: 2.0 };
    let b = ohmic_bath(&q, 2, 0.6, 3).unwrap();
    let h = assemble_hamiltonian(&q, &b).unwrap();
    let amp = C64::from(1.0 / 3f64.sqrt());
    let mut a = vec![C64::from(0.0); h.dim()];
    for l in 0..3 {
        a[l * h.dim() / 3] = amp;
    }
    let psi0 = SystemBathState::new(a).unwrap();
    let traj = evolve(&h, &psi0, 5.0, 0.1, &KrylovPropagator::default()).unwrap();
    for r in &traj.rows {
        for p in [r.p1, r.p2, r.p3] {
            assert!((p - 1.0 / 3.0).abs() <= 1e-10);
        }
    }
}

#[test]
fn gauge_shift_keeps_qds_parameters() {
    let c = AcsCouplings { j_par: 0.2, j_perp: 0.4, zeta12: 0.3, zeta13: 1.1, zeta23: 2.0, ..Default::default() };
    let s = ChargeSector::default();
    let a = map_acs_to_qds(&c, &s).unwrap();
    let b = map_acs_to_qds(&c.gauge_shifted([0.4, -1.2, 2.5]), &s).unwrap();
    let diff = (a.zeta - b.zeta).rem_euclid(std::f64::consts::TAU);
    assert!(diff.min(std::f64::consts::TAU - diff) < 1e-12);
}

#[test]
fn impurity_spectrum_depends_on_phase_flux_only() {
    // general block with three phases versus the single-phase form
    let (delta, z12, z13, z23) = (0.7, 0.4, 1.3, -0.6);
    let e = |z: f64| C64::from_polar(delta, z);
    let general = DMatrix::from_row_slice(
        3,
        3,
        &[C64::from(0.2), e(-z12), e(-z13), e(z12), C64::from(-0.1), e(-z23), e(z13), e(z23), C64::from(0.0)],
    );
    // diagonal (0.2, −0.1, 0) = ε3 λ3 + ε8 λ8 + offset
    let offset = 0.1 / 3.0;
    let q = QdsParams { eps3: 0.15, eps8: 0.1 / (2.0 * 3f64.sqrt()), delta, zeta: z23 - z13 + z12, alpha: 0.0, omega_c: 1.0 };
    let block = impurity_block(&q);
    let reduced = DMatrix::from_fn(3, 3, |r, c| block[(r, c)] + if r == c { C64::from(offset) } else { C64::from(0.0) });
    let a = hermitian_eigenvalues(&general);
    let b = hermitian_eigenvalues(&reduced);
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() <= 1e-12, "{a:?} vs {b:?}");
    }
}

#[test]
fn drift_on_four_mode_bath() {
    let q = QdsParams { eps3: 0.1, eps8: -0.05, delta: 0.5, zeta: 0.3, alpha: 0.1, omega_c: 2.0 };
    let b = ohmic_bath(&q, 4, 0.5, 3).unwrap();
    let h = assemble_hamiltonian(&q, &b).unwrap();
    let psi0 = SystemBathState::product(0, h.dim()).unwrap();
    let traj = evolve(&h, &psi0, 1.0, 0.1, &KrylovPropagator::default()).unwrap();
    assert!(traj.norm_drift() <= 1e-9);
    assert!(traj.energy_drift() <= 1e-8);
}
