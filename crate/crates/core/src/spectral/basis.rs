use ndarray::{Array2, ArrayView1};

use super::eigen::{count_sign_changes, eigenvalue_tolerance, lowest_eigenpairs};
use super::hamiltonian::{check_positive, hamiltonian_from_samples};
use super::{Grid1D, PotentialSpec, Result, SpectralError};
use crate::par::Parallelism;

/// Samples below this fraction of the peak amplitude are treated as zero when
/// counting nodes and fixing signs.
pub const NODE_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, Default)]
pub struct SolverOptions {
    pub parallelism: Parallelism,
}

/// Lowest eigenstates of a discretised potential.
///
/// `states` has shape `(n_states, n_points)` and rows are normalised so that
/// `Σ_i ψ_k(x_i)² dx = 1`.
#[derive(Debug, Clone)]
pub struct EigenBasis {
    grid: Grid1D,
    energies: Vec<f64>,
    states: Array2<f64>,
    potential: Vec<f64>,
    mass: f64,
    hbar: f64,
}

impl EigenBasis {
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn states(&self) -> &Array2<f64> {
        &self.states
    }

    pub fn state(&self, k: usize) -> ArrayView1<'_, f64> {
        self.states.row(k)
    }

    pub fn n_states(&self) -> usize {
        self.energies.len()
    }

    /// Potential sampled on the interior grid points.
    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Interior sign changes of state `k`.
    pub fn node_count(&self, k: usize) -> usize {
        count_sign_changes(self.state(k).as_slice().expect("rows are contiguous"), NODE_REL_TOL)
    }

    /// `max_{j,k} |<ψ_j|ψ_k> - δ_jk|`.
    pub fn orthonormality_residual(&self) -> f64 {
        let dx = self.grid.dx();
        let n = self.n_states();
        let mut worst = 0.0_f64;
        for j in 0..n {
            for k in j..n {
                let s = self.state(j).dot(&self.state(k)) * dx;
                let target = if j == k { 1.0 } else { 0.0 };
                worst = worst.max((s - target).abs());
            }
        }
        worst
    }

    /// `<ψ_k|x|ψ_k>`.
    pub fn mean_position(&self, k: usize) -> f64 {
        let dx = self.grid.dx();
        self.state(k).iter().enumerate().map(|(i, p)| p * p * self.grid.x(i)).sum::<f64>() * dx
    }

    /// Keep only the first `n` states.
    pub fn truncated(&self, n: usize) -> EigenBasis {
        let n = n.min(self.n_states());
        EigenBasis {
            grid: self.grid,
            energies: self.energies[..n].to_vec(),
            states: self.states.slice(ndarray::s![..n, ..]).to_owned(),
            potential: self.potential.clone(),
            mass: self.mass,
            hbar: self.hbar,
        }
    }
}

/// Lowest `n_states` eigenpairs of `-ħ²/2m d²/dx² + V` on `grid`.
pub fn solve_eigenproblem(
    grid: &Grid1D,
    potential: &PotentialSpec,
    n_states: usize,
    mass: f64,
    hbar: f64,
) -> Result<EigenBasis> {
    solve_eigenproblem_with(grid, potential, n_states, mass, hbar, &SolverOptions::default())
}

pub fn solve_eigenproblem_with(
    grid: &Grid1D,
    potential: &PotentialSpec,
    n_states: usize,
    mass: f64,
    hbar: f64,
    options: &SolverOptions,
) -> Result<EigenBasis> {
    check_positive("mass", mass)?;
    check_positive("hbar", hbar)?;
    if n_states == 0 || n_states > grid.n_points() {
        return Err(SpectralError::TooManyStates { requested: n_states, available: grid.n_points() });
    }
    let v = potential.sample(grid, mass)?;
    let h = hamiltonian_from_samples(grid, &v, mass, hbar)?;
    let (energies, vectors) = lowest_eigenpairs(&h, n_states, options.parallelism)?;

    let scale = 1.0 / grid.dx().sqrt();
    let mut pairs: Vec<(f64, usize, Vec<f64>)> = energies
        .into_iter()
        .zip(vectors)
        .map(|(e, mut v)| {
            fix_sign(&mut v);
            v.iter_mut().for_each(|x| *x *= scale);
            let nodes = count_sign_changes(&v, NODE_REL_TOL);
            (e, nodes, v)
        })
        .collect();
    order_ties_by_nodes(&mut pairs, eigenvalue_tolerance(&h));

    let n_points = grid.n_points();
    let mut states = Array2::zeros((n_states, n_points));
    for (k, (_, _, v)) in pairs.iter().enumerate() {
        states.row_mut(k).assign(&ArrayView1::from(v.as_slice()));
    }
    Ok(EigenBasis {
        grid: *grid,
        energies: pairs.iter().map(|p| p.0).collect(),
        states,
        potential: v,
        mass,
        hbar,
    })
}

/// First significant sample from the left is made positive.
fn fix_sign(v: &mut [f64]) {
    let vmax = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if let Some(first) = v.iter().find(|x| x.abs() > NODE_REL_TOL * vmax) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Within runs of numerically equal energies, fewer nodes come first.
fn order_ties_by_nodes(pairs: &mut [(f64, usize, Vec<f64>)], tol: f64) {
    let mut start = 0;
    for k in 1..=pairs.len() {
        if k == pairs.len() || pairs[k].0 - pairs[k - 1].0 > tol {
            pairs[start..k].sort_by_key(|p| p.1);
            start = k;
        }
    }
}

/// Dipole (position) matrix `d_jk = Σ_i ψ_j(x_i) x_i ψ_k(x_i) dx`.
///
/// Only the upper triangle is summed; the lower one is mirrored so the result
/// is symmetric bit for bit.
pub fn dipole_matrix(basis: &EigenBasis) -> Array2<f64> {
    let grid = basis.grid();
    let dx = grid.dx();
    let x = ndarray::Array1::from(grid.points());
    let n = basis.n_states();
    let mut d = Array2::zeros((n, n));
    for j in 0..n {
        let xj = &basis.state(j) * &x;
        for k in j..n {
            let v = xj.dot(&basis.state(k)) * dx;
            d[[j, k]] = v;
            d[[k, j]] = v;
        }
    }
    d
}
