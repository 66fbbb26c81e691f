use std::sync::Arc;

use num_complex::Complex64;
use rr_collapse::spectral::{dipole_matrix, solve_eigenproblem, EigenBasis, Grid1D, PotentialSpec};
use rr_collapse::unitary::{
    ehrenfest_residual, expectation_grid, expectation_state, project, propagate_grid, reconstruct, CrankNicolson,
    GridSystem, SuperpositionState, UnitaryError, WaveFunction,
};

fn harmonic_basis(n_points: usize, n_states: usize) -> Arc<EigenBasis> {
    let grid = Grid1D::new(-10.0, 10.0, n_points).unwrap();
    Arc::new(solve_eigenproblem(&grid, &PotentialSpec::Harmonic { omega: 1.0 }, n_states, 1.0, 1.0).unwrap())
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[test]
fn project_single_and_mixed_states() {
    let basis = harmonic_basis(800, 8);
    let psi3 = reconstruct(&SuperpositionState::eigenstate(basis.clone(), 3).unwrap(), 0.0);
    let p = project(&psi3, &basis).unwrap();
    for (k, a) in p.state.coeffs().iter().enumerate() {
        let expect = if k == 3 { 1.0 } else { 0.0 };
        assert!((a - c(expect)).norm() < 1e-12);
    }

    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut coeffs = vec![c(0.0); 8];
    coeffs[0] = c(h);
    coeffs[1] = c(h);
    let mix = reconstruct(&SuperpositionState::new(basis.clone(), coeffs).unwrap(), 0.0);
    let pops = project(&mix, &basis).unwrap().state.populations();
    assert!((pops[0] - 0.5).abs() < 1e-12 && (pops[1] - 0.5).abs() < 1e-12);
}

#[test]
fn broad_gaussian_overflows_tight_basis() {
    let basis = harmonic_basis(800, 4);
    let psi = WaveFunction::gaussian(*basis.grid(), 0.0, 3.0, 0.0).unwrap();
    // oracle: ‖Ψ - Σ a_k ψ_k‖² summed directly on the grid
    let dx = basis.grid().dx();
    let mut remainder: Vec<Complex64> = psi.amplitudes().to_vec();
    for k in 0..4 {
        let row = basis.state(k);
        let a: Complex64 = row.iter().zip(psi.amplitudes()).map(|(p, z)| z * *p).sum::<Complex64>() * dx;
        remainder.iter_mut().zip(row).for_each(|(r, p)| *r -= a * *p);
    }
    let direct: f64 = remainder.iter().map(|z| z.norm_sqr()).sum::<f64>() * dx;
    assert!(direct > 0.01, "oracle residual {direct}");
    match project(&psi, &basis) {
        Err(UnitaryError::BasisTruncation { residual, threshold }) => {
            assert_eq!(threshold, 0.01);
            assert!((residual - direct).abs() < 1e-10);
        }
        other => panic!("expected truncation error, got {other:?}"),
    }
}

#[test]
fn stationary_density_is_time_independent() {
    let basis = harmonic_basis(800, 6);
    let s = SuperpositionState::eigenstate(basis, 2).unwrap();
    let rho0 = reconstruct(&s, 0.0).density();
    for t in [0.3, 1.7, 25.0] {
        let rho = reconstruct(&s, t).density();
        for (a, b) in rho0.iter().zip(&rho) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn reconstruct_at_zero_is_plain_sum() {
    let basis = harmonic_basis(400, 4);
    let coeffs = vec![c(0.5), Complex64::new(0.0, 0.5), c(-0.5), c(0.5)];
    let s = SuperpositionState::new(basis.clone(), coeffs.clone()).unwrap();
    let psi = reconstruct(&s, 0.0);
    for i in (0..400).step_by(37) {
        let direct: Complex64 = (0..4).map(|k| coeffs[k] * basis.state(k)[i]).sum();
        assert!((psi.amplitudes()[i] - direct).norm() < 1e-12);
    }
}

#[test]
fn half_beat_reflects_mean_position() {
    let grid = Grid1D::new(-8.0, 8.0, 801).unwrap();
    let pot = PotentialSpec::double_well(-2.0, 2.0, 3.0, 2.5, 1.0);
    let basis = Arc::new(solve_eigenproblem(&grid, &pot, 4, 1.0, 1.0).unwrap());
    let d = dipole_matrix(&basis);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let s = SuperpositionState::new(basis.clone(), vec![c(h), c(h), c(0.0), c(0.0)]).unwrap();
    let e = basis.energies();
    let t_half = std::f64::consts::PI / (e[1] - e[0]);
    // two-term oracle: ⟨x⟩(t) = (d00 + d11)/2 + d01 cos(ΔE t/ħ)
    let centre = 0.5 * (d[[0, 0]] + d[[1, 1]]);
    let x0 = reconstruct(&s, 0.0).mean_position();
    let x1 = reconstruct(&s, t_half).mean_position();
    assert!((x0 - (centre + d[[0, 1]])).abs() < 1e-10);
    assert!((x1 - (centre - d[[0, 1]])).abs() < 1e-10);
    assert!(((x0 + x1) / 2.0 - centre).abs() < 1e-10);
    let evolved = s.evolved(t_half);
    let rel = evolved.coeffs()[1] / evolved.coeffs()[0];
    assert!((rel - c(-1.0)).norm() < 1e-10);
}

#[test]
fn eigenstate_is_stationary_under_crank_nicolson() {
    let basis = harmonic_basis(1000, 6);
    let psi = reconstruct(&SuperpositionState::eigenstate(basis.clone(), 4).unwrap(), 0.0);
    let out = propagate_grid(&psi, &PotentialSpec::Harmonic { omega: 1.0 }, 0.01, 500, 1.0, 1.0).unwrap();
    assert!(out.fidelity(&psi) > 1.0 - 1e-9);
}

#[test]
fn coherent_state_follows_cosine() {
    // displaced ground state: ⟨x⟩(t) = x0 cos(ωt)
    let grid = Grid1D::new(-8.0, 8.0, 3199).unwrap();
    let x0 = 1.0;
    let psi = WaveFunction::gaussian(grid, x0, std::f64::consts::FRAC_1_SQRT_2, 0.0).unwrap();
    let sys = GridSystem::new(grid, &PotentialSpec::Harmonic { omega: 1.0 }, 1.0, 1.0).unwrap();
    let dt = 1e-3;
    let cn = CrankNicolson::new(sys, dt).unwrap();
    let steps = (2.0 * std::f64::consts::PI / dt).round() as usize;
    let traj = cn.trajectory(psi, steps, 50).unwrap();
    let mut worst = 0.0_f64;
    for (i, snap) in traj.iter().enumerate() {
        let t = (i * 50) as f64 * dt;
        worst = worst.max((snap.mean_position() - x0 * t.cos()).abs());
    }
    assert!(worst < 1e-4, "max deviation {worst:e}");
}

#[test]
fn free_packet_does_not_accelerate() {
    let grid = Grid1D::new(-30.0, 30.0, 3000).unwrap();
    let psi = WaveFunction::gaussian(grid, -2.0, 1.5, 0.5).unwrap();
    let sys = GridSystem::new(grid, &PotentialSpec::Box, 1.0, 1.0).unwrap();
    let dt = 1e-3;
    let traj = CrankNicolson::new(sys.clone(), dt).unwrap().trajectory(psi, 2000, 1).unwrap();
    let res = ehrenfest_residual(&traj, &sys, dt).unwrap();
    let worst = res.iter().map(|r| r.mass_accel.abs()).fold(0.0, f64::max);
    assert!(worst < 1e-6, "d²⟨x⟩/dt² reached {worst:e}");
    assert!(res.iter().all(|r| r.residual < 1e-8));
}

#[test]
fn ehrenfest_exact_for_harmonic() {
    let grid = Grid1D::new(-10.0, 10.0, 1999).unwrap();
    let sys = GridSystem::new(grid, &PotentialSpec::Harmonic { omega: 1.0 }, 1.0, 1.0).unwrap();
    // coherent state: displaced ground state, energy spread ħω|α|
    let psi = WaveFunction::gaussian(grid, 1.0, std::f64::consts::FRAC_1_SQRT_2, 0.0).unwrap();
    let dt = 1e-3;
    let traj = CrankNicolson::for_state(sys.clone(), dt, &psi).unwrap().trajectory(psi, 3000, 1).unwrap();
    let res = ehrenfest_residual(&traj, &sys, dt).unwrap();
    let worst = res.iter().map(|r| r.residual).fold(0.0, f64::max);
    assert!(worst < 1e-6, "residual {worst:e}");
}

#[test]
fn quartic_residual_is_reported() {
    let grid = Grid1D::new(-6.0, 6.0, 1199).unwrap();
    let values: Vec<f64> = grid.points().iter().map(|x| 0.1 * x.powi(4)).collect();
    let sys = GridSystem::new(grid, &PotentialSpec::Tabulated { values }, 1.0, 1.0).unwrap();
    let psi = WaveFunction::gaussian(grid, 1.0, 1.2, 0.0).unwrap();
    let dt = 1e-3;
    let traj = CrankNicolson::new(sys.clone(), dt).unwrap().trajectory(psi, 1000, 1).unwrap();
    let res = ehrenfest_residual(&traj, &sys, dt).unwrap();
    let worst = res.iter().map(|r| r.residual).fold(0.0, f64::max);
    assert!(worst.is_finite());
    println!("quartic Ehrenfest residual: {worst:e}");
}

#[test]
fn expectation_examples() {
    let grid = Grid1D::new(-8.0, 8.0, 801).unwrap();
    let pot = PotentialSpec::double_well(-2.0, 2.0, 3.0, 3.0, 1.0);
    let basis = Arc::new(solve_eigenproblem(&grid, &pot, 6, 1.0, 1.0).unwrap());
    let sys = GridSystem::from_basis(&basis).unwrap();

    let sym = WaveFunction::gaussian(grid, 0.0, 2.0, 0.0).unwrap();
    assert!(expectation_grid(&sym, &sys).x_mean.abs() < 1e-9);

    let e = basis.energies();
    for k in 0..3 {
        let s = SuperpositionState::eigenstate(basis.clone(), k).unwrap();
        let o = expectation_state(&s);
        assert_eq!(o.e_mean, e[k]);
        assert_eq!(o.e_variance, 0.0);
        let og = expectation_grid(&reconstruct(&s, 0.0), &sys);
        assert!((og.e_mean - e[k]).abs() < 1e-9);
        assert!(og.e_variance < 1e-8);
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut coeffs = vec![c(0.0); 6];
    coeffs[0] = c(h);
    coeffs[1] = c(h);
    let o = expectation_state(&SuperpositionState::new(basis.clone(), coeffs).unwrap());
    assert!((o.e_mean - 0.5 * (e[0] + e[1])).abs() < 1e-12);
}

fn presets() -> Vec<(Grid1D, PotentialSpec)> {
    vec![
        (Grid1D::new(0.0, 10.0, 1000).unwrap(), PotentialSpec::Box),
        (Grid1D::new(-10.0, 10.0, 1000).unwrap(), PotentialSpec::Harmonic { omega: 1.0 }),
        (Grid1D::new(-20.0, 20.0, 1000).unwrap(), PotentialSpec::double_well(-2.5, 2.5, 2.0, 1.5, 1.0)),
    ]
}

#[test]
fn unitarity_and_weight_constancy_over_ten_thousand_steps() {
    for (grid, pot) in presets() {
        let basis = Arc::new(solve_eigenproblem(&grid, &pot, 24, 1.0, 1.0).unwrap());
        let centre = 0.5 * (grid.x_min() + grid.x_max());
        let psi = WaveFunction::gaussian(grid, centre + 0.3, 1.2, 0.4).unwrap();
        let w0 = project(&psi, &basis).unwrap().state.populations();
        let out = propagate_grid(&psi, &pot, 1e-3, 10_000, 1.0, 1.0).unwrap();
        let drift = (out.norm_sq() - 1.0).abs();
        assert!(drift < 1e-10, "{pot:?}: norm drift {drift:e}");
        let w1 = project(&out, &basis).unwrap().state.populations();
        let worst = w0.iter().zip(&w1).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-8, "{pot:?}: weight drift {worst:e}");
    }
}

#[test]
fn grid_and_basis_routes_agree() {
    let basis = harmonic_basis(1500, 32);
    let psi = WaveFunction::gaussian(*basis.grid(), 1.0, 0.8, 0.3).unwrap();
    let p = project(&psi, &basis).unwrap();
    assert!(p.residual < 1e-6);
    let t: f64 = 1.5;
    let dt = 5e-4;
    let n = (t / dt).round() as usize;
    let grid_route = propagate_grid(&psi, &PotentialSpec::Harmonic { omega: 1.0 }, dt, n, 1.0, 1.0).unwrap();
    let basis_route = reconstruct(&p.state, t);
    let f = grid_route.fidelity(&basis_route);
    assert!(f > 1.0 - 1e-6, "fidelity {f}");
}

#[test]
fn time_reversal() {
    for (grid, pot) in presets() {
        let sys = GridSystem::new(grid, &pot, 1.0, 1.0).unwrap();
        let centre = 0.5 * (grid.x_min() + grid.x_max());
        let psi = WaveFunction::gaussian(grid, centre - 0.5, 1.0, 1.0).unwrap();
        let fwd = CrankNicolson::new(sys.clone(), 1e-3).unwrap();
        let bwd = CrankNicolson::new(sys, -1e-3).unwrap();
        let mid = fwd.run(psi.clone(), 200).unwrap();
        let back = bwd.run(mid, 200).unwrap();
        let f = back.fidelity(&psi);
        assert!(f > 1.0 - 1e-10, "{pot:?}: {f}");
    }
}
