//! Acceptance suite. Each criterion prints one PASS/FAIL line; any failure
//! makes the process exit nonzero.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rr_collapse::cli::format_trace;
use rr_collapse::dissipative::{
    decay_rates, evolve_dissipative, fermi_closed_form, DecayRateMatrix, DissipativeState, Dissipator,
    PhysicalConstants,
};
use rr_collapse::experiments::{
    run, run_cascade, run_ehrenfest, run_fermi_decay, run_preacceleration, run_runaway, run_two_well, CascadePath,
    ExperimentConfig, ExperimentName,
};
use rr_collapse::spectral::{dipole_matrix, solve_eigenproblem, Grid1D, PotentialSpec};
use rr_collapse::unitary::{project, propagate_grid, CrankNicolson, GridSystem, WaveFunction};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn config(name: ExperimentName, overrides: &[(&str, f64)]) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(name);
    for (k, v) in overrides {
        c.set(k, *v).expect("known parameter");
    }
    c
}

fn ladder(energies: &[f64], mut a: impl FnMut(usize, usize) -> f64) -> DecayRateMatrix {
    let n = energies.len();
    let rates = Array2::from_shape_fn((n, n), |(j, k)| if energies[j] > energies[k] { a(j, k) } else { 0.0 });
    DecayRateMatrix::from_rates(rates, energies.to_vec(), 1.0).unwrap()
}

fn fermi_grid() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for p2 in [0.5, 0.9, 0.99, 0.999] {
        for a in [0.1, 1.0, 10.0] {
            let rates = DecayRateMatrix::two_level(a).unwrap();
            let dt = 0.01 / a;
            let state = DissipativeState::from_populations(vec![1.0 - p2, p2]).unwrap();
            // 30 / A covers the rise, the turning point and the tail for every seed
            let (_, trace) = evolve_dissipative(&state, &rates, dt, 3000).unwrap();
            let p = trace.column("p_1").unwrap();
            for (t, v) in trace.times().iter().zip(&p) {
                worst = worst.max((v - fermi_closed_form(p2, a, *t).unwrap()).abs());
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(worst < 1e-8 && secs < 5.0, format!("max |err| {worst:.2e}, {secs:.2} s"))
}

fn fermi_tail() -> Outcome {
    let (_, s) = run_fermi_decay(&config(ExperimentName::FermiDecay, &[("p2_initial", 0.99), ("A", 1.0)])).unwrap();
    let slope = s.tail_rate_fit.ok_or("no tail fit")?;
    check((slope + 1.0).abs() < 0.01, format!("slope {slope:.10} vs -1"))
}

fn turning_points() -> Outcome {
    let mut last = f64::NEG_INFINITY;
    let mut parts = Vec::new();
    let mut ok = true;
    for q in [1e-1, 1e-2, 1e-3] {
        let (_, s) = run_fermi_decay(&config(ExperimentName::FermiDecay, &[("p2_initial", 1.0 - q)])).unwrap();
        let t = s.turning_point_t.ok_or("no crossing")?;
        let expected = ((1.0 - q) / q).ln();
        ok &= (t / expected - 1.0).abs() < 5e-3 && t > last;
        last = t;
        parts.push(format!("q={q:e}: {t:.5} (exact {expected:.5})"));
    }
    check(ok, parts.join(", "))
}

fn rate_formula() -> Outcome {
    let grid = Grid1D::new(-10.0, 10.0, 2000).unwrap();
    let basis = solve_eigenproblem(&grid, &PotentialSpec::Harmonic { omega: 1.0 }, 6, 1.0, 1.0).unwrap();
    let constants = PhysicalConstants { c: 10.0, ..PhysicalConstants::default() };
    let rates = decay_rates(&basis, &dipole_matrix(&basis), &constants).unwrap();
    let hand = 0.5 / (3.0 * std::f64::consts::PI * 1000.0);
    let rel = (rates.get(1, 0) / hand - 1.0).abs();
    let mut zeros = true;
    for j in 0..6 {
        for k in 0..6 {
            if j <= k || (j - k) % 2 == 0 {
                zeros &= rates.get(j, k) == 0.0;
            }
        }
    }
    let d = ndarray::array![[0.0, 0.4], [0.4, 0.0]];
    let degenerate = DecayRateMatrix::from_dipoles(&[1.5, 1.5], &d, &PhysicalConstants::default()).unwrap();
    zeros &= degenerate.max_rate() == 0.0;
    check(rel < 1e-3 && zeros, format!("A10 {:.6e} vs {hand:.6e} (rel {rel:.1e}), zeros exact: {zeros}", rates.get(1, 0)))
}

fn spectral_accuracy() -> Outcome {
    use std::f64::consts::PI;
    let box_exact = |k: usize| ((k + 1) as f64 * PI).powi(2) / 2.0;
    let osc_exact = |k: usize| k as f64 + 0.5;
    let cases: [(PotentialSpec, f64, f64, &dyn Fn(usize) -> f64); 2] = [
        (PotentialSpec::Box, 0.0, 1.0, &box_exact),
        (PotentialSpec::Harmonic { omega: 1.0 }, -10.0, 10.0, &osc_exact),
    ];
    let mut worst_rel: f64 = 0.0;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for (pot, a, b, exact) in cases {
        let errors = |n: usize| -> Vec<f64> {
            let basis = solve_eigenproblem(&Grid1D::new(a, b, n).unwrap(), &pot, 10, 1.0, 1.0).unwrap();
            basis.energies().iter().enumerate().map(|(k, e)| (e - exact(k)).abs()).collect()
        };
        let at_2000 = errors(2000);
        for (k, e) in at_2000.iter().enumerate() {
            worst_rel = worst_rel.max(e / exact(k));
        }
        // n + 1 doubles from 1000 to 2000 intervals, so dx halves exactly
        for (c, f) in errors(999).iter().zip(&errors(1999)) {
            lo = lo.min(c / f);
            hi = hi.max(c / f);
        }
    }
    check(
        worst_rel < 1e-3 && lo >= 3.5 && hi <= 4.5,
        format!("max rel err {worst_rel:.2e}, halving ratios in [{lo:.4}, {hi:.4}]"),
    )
}

fn unitary_integrity() -> Outcome {
    let presets = [
        (Grid1D::new(0.0, 10.0, 1000).unwrap(), PotentialSpec::Box),
        (Grid1D::new(-10.0, 10.0, 1000).unwrap(), PotentialSpec::Harmonic { omega: 1.0 }),
        (Grid1D::new(-20.0, 20.0, 1000).unwrap(), PotentialSpec::double_well(-2.5, 2.5, 2.0, 1.5, 1.0)),
    ];
    let (mut norm, mut weight, mut fidelity) = (0.0_f64, 0.0_f64, 1.0_f64);
    for (grid, pot) in presets {
        let basis = Arc::new(solve_eigenproblem(&grid, &pot, 24, 1.0, 1.0).unwrap());
        let centre = 0.5 * (grid.x_min() + grid.x_max());
        let psi = WaveFunction::gaussian(grid, centre + 0.3, 1.2, 0.4).unwrap();
        let w0 = project(&psi, &basis).unwrap().state.populations();
        let out = propagate_grid(&psi, &pot, 1e-3, 10_000, 1.0, 1.0).unwrap();
        norm = norm.max((out.norm_sq() - 1.0).abs());
        let w1 = project(&out, &basis).unwrap().state.populations();
        weight = w0.iter().zip(&w1).map(|(a, b)| (a - b).abs()).fold(weight, f64::max);

        let sys = GridSystem::new(grid, &pot, 1.0, 1.0).unwrap();
        let fwd = CrankNicolson::new(sys.clone(), 1e-3).unwrap();
        let bwd = CrankNicolson::new(sys, -1e-3).unwrap();
        let back = bwd.run(fwd.run(psi.clone(), 200).unwrap(), 200).unwrap();
        fidelity = fidelity.min(back.fidelity(&psi));
    }
    check(
        norm < 1e-10 && weight < 1e-8 && fidelity > 1.0 - 1e-10,
        format!("norm drift {norm:.1e}, weight drift {weight:.1e}, reversal 1-F {:.1e}", 1.0 - fidelity),
    )
}

fn ehrenfest() -> Outcome {
    let (_, h) = run_ehrenfest(&ExperimentConfig::new(ExperimentName::EhrenfestCheck)).unwrap();
    let free = config(
        ExperimentName::EhrenfestCheck,
        &[
            ("omega", 0.0),
            ("x0", -2.0),
            ("sigma", 1.5),
            ("k0", 0.5),
            ("x_min", -30.0),
            ("x_max", 30.0),
            ("n_points", 3000.0),
            ("t_max", 2.0),
        ],
    );
    let (_, f) = run_ehrenfest(&free).unwrap();
    check(
        h.max_residual < 1e-6 && f.max_residual < 1e-6,
        format!("harmonic {:.1e}, free {:.1e} at dt 1e-3", h.max_residual, f.max_residual),
    )
}

fn stationary_immunity() -> Outcome {
    let e: Vec<f64> = (0..8).map(|k| k as f64 + 0.1 * (k * k) as f64).collect();
    let rates = ladder(&e, |j, k| 0.2 + 0.05 * ((j * 7 + k * 3) % 5) as f64);
    let dt = 0.05 / rates.max_rate();
    let d = Dissipator::new(rates, dt).unwrap();
    let mut moved = Vec::new();
    for k in 0..8 {
        let s = DissipativeState::eigenstate(8, k).unwrap();
        let (end, _) = d.run(&s, 100_000, 100_000).unwrap();
        if end.populations() != s.populations() {
            moved.push(k);
        }
    }
    check(moved.is_empty(), format!("8 eigenstates x 1e5 steps, moved: {moved:?}"))
}

fn monotonic_dissipation() -> Outcome {
    let seeds = 0..100u64;
    let mut worst_rise = f64::NEG_INFINITY;
    let mut bad = Vec::new();
    for seed in seeds.clone() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut e: Vec<f64> = (0..8).map(|_| rng.random_range(0.0..10.0)).collect();
        e.sort_by(f64::total_cmp);
        let rates = ladder(&e, |_, _| rng.random_range(0.0..2.0));
        let w: Vec<f64> = (0..8).map(|_| rng.random_range(0.0..1.0)).collect();
        let total: f64 = w.iter().sum();
        let state = DissipativeState::from_populations(w.iter().map(|x| x / total).collect()).unwrap();
        let dt = 0.05 / rates.max_rate().max(1e-9);
        let (_, trace) = evolve_dissipative(&state, &rates, dt, 1500).unwrap();
        let energy = trace.column("E_mean").unwrap();
        let rise = energy.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
        worst_rise = worst_rise.max(rise);
        if rise > 1e-12 {
            bad.push(seed);
        }
    }
    check(
        bad.is_empty(),
        format!("seeds {}..{} (ChaCha8), largest step change {worst_rise:.1e}, failing {bad:?}", seeds.start, seeds.end),
    )
}

fn cascade_classification() -> Outcome {
    let seeds = [
        ("cascade", 1e-4, 1e-2, 1.0, CascadePath::Cascade),
        ("direct", 1e-2, 1e-4, 10.0, CascadePath::Direct),
        ("mixed", 1e-2, 1e-2, 1.0, CascadePath::Mixed),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (label, p1, p2, a31, want) in seeds {
        let mut got = Vec::new();
        for dt in [0.005, 0.0025] {
            let c = config(
                ExperimentName::ThreeLevelCascade,
                &[("p1_initial", p1), ("p2_initial", p2), ("A31", a31), ("dt", dt)],
            );
            got.push(run_cascade(&c).unwrap().1.path);
        }
        ok &= got.iter().all(|p| *p == want);
        parts.push(format!("{label}: {got:?}"));
    }
    check(ok, parts.join(", "))
}

fn two_well() -> Outcome {
    let start = Instant::now();
    let (_, s) = run_two_well(&config(ExperimentName::TwoWellLocalization, &[("delta", 0.5)])).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let localized = s.final_max_population > 0.99
        && s.final_metrics.dominant_state == 0
        && s.ground_state_prob_left > 0.5
        && secs < 60.0;

    let (out, _) =
        run_two_well(&config(ExperimentName::TwoWellLocalization, &[("delta", 0.0), ("sigma_e", 0.0)])).unwrap();
    let min_pr = out.trace.column("participation_ratio").unwrap().into_iter().fold(f64::INFINITY, f64::min);
    check(
        localized && min_pr > 1.5,
        format!(
            "delta 0.5: max p {:.5} in state {} (ground-state left weight {:.4}), {secs:.1} s; delta 0: min PR {min_pr:.3}",
            s.final_max_population, s.final_metrics.dominant_state, s.ground_state_prob_left
        ),
    )
}

fn abraham_lorentz() -> Outcome {
    let (_, r) = run_runaway(&ExperimentConfig::new(ExperimentName::RunawayDemo)).unwrap();
    let rate = r.growth_rate_fit.ok_or("no growth fit")?;
    let (_, p) = run_preacceleration(&ExperimentConfig::new(ExperimentName::PreaccelerationDemo)).unwrap();
    let ratio = p.preacceleration_ratio.ok_or("no preacceleration ratio")?;
    let (out, _) = run_preacceleration(&config(ExperimentName::PreaccelerationDemo, &[("f0", 0.0)])).unwrap();
    let zero = out.trace.column("a_reduced").unwrap().iter().all(|a| *a == 0.0);
    let e1 = (-1.0_f64).exp();
    check(
        (rate - 1.0).abs() < 1e-4 && (ratio - e1).abs() < 1e-9 && zero,
        format!(
            "growth rate {rate:.10} vs 1, ratio err {:.1e}, F=0 reduced identically zero: {zero}",
            (ratio - e1).abs()
        ),
    )
}

fn reproducibility() -> Outcome {
    let mut configs: Vec<ExperimentConfig> = ExperimentName::ALL
        .iter()
        .filter(|n| **n != ExperimentName::TwoWellLocalization)
        .map(|n| ExperimentConfig::new(*n))
        .collect();
    configs.push(config(ExperimentName::TwoWellLocalization, &[("t_max", 5000.0), ("sigma_e", 0.01)]).with_seed(7));
    let mut differing = Vec::new();
    for c in &configs {
        let a = format_trace(&run(c).unwrap().trace);
        let b = format_trace(&run(c).unwrap().trace);
        if a.as_bytes() != b.as_bytes() {
            differing.push(c.experiment.as_str());
        }
    }
    check(differing.is_empty(), format!("{} configs compared byte for byte, differing: {differing:?}", configs.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("fermi law reproduction", fermi_grid),
        ("asymptotic tail", fermi_tail),
        ("turning-point monotonicity", turning_points),
        ("decay-rate formula", rate_formula),
        ("spectral accuracy", spectral_accuracy),
        ("unitary integrity", unitary_integrity),
        ("ehrenfest", ehrenfest),
        ("stationary-state immunity", stationary_immunity),
        ("monotonic dissipation", monotonic_dissipation),
        ("cascade classification", cascade_classification),
        ("two-well localization", two_well),
        ("abraham-lorentz pathologies", abraham_lorentz),
        ("reproducibility", reproducibility),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] {:>2} {name} ({secs:.2} s): {detail}", i + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
