//! Lowest eigenpairs of a symmetric tridiagonal matrix.
//!
//! Eigenvalues come from Sturm-sequence bisection, eigenvectors from inverse
//! iteration on a partially pivoted LU factorisation of `T - λI`. Near-equal
//! eigenvalues are grouped into clusters that are refined together with
//! Gram–Schmidt; distinct clusters are independent and run in parallel.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Result, SpectralError, SymTridiagonal};
use crate::par::{self, Parallelism};

const MAX_BISECTION_ITER: usize = 256;
const MAX_INVERSE_ITER: usize = 12;
/// Relative gap (in units of ‖T‖) below which eigenvalues share a cluster.
const CLUSTER_REL_GAP: f64 = 1e-6;

/// Number of eigenvalues of `t` strictly below `lambda`.
pub fn sturm_count(t: &SymTridiagonal, lambda: f64) -> usize {
    let pivmin = pivot_floor(t);
    let mut count = 0;
    let mut q = t.diag[0] - lambda;
    if q.abs() <= pivmin {
        q = -pivmin;
    }
    if q < 0.0 {
        count += 1;
    }
    for i in 1..t.len() {
        let e = t.off[i - 1];
        q = (t.diag[i] - lambda) - e * e / q;
        if q.abs() <= pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn pivot_floor(t: &SymTridiagonal) -> f64 {
    let emax = t.off.iter().fold(1.0_f64, |m, e| m.max(e * e));
    f64::MIN_POSITIVE * emax
}

/// Absolute accuracy targeted by bisection.
pub(crate) fn eigenvalue_tolerance(t: &SymTridiagonal) -> f64 {
    4.0 * f64::EPSILON * t.norm_bound().max(1.0)
}

fn bisect(t: &SymTridiagonal, k: usize, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    for _ in 0..MAX_BISECTION_ITER {
        if hi - lo <= tol {
            return Ok(0.5 * (lo + hi));
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if sturm_count(t, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(SpectralError::SolverFailure { state: k, iterations: MAX_BISECTION_ITER })
}

/// The `count` smallest eigenvalues in ascending order.
pub(crate) fn lowest_eigenvalues(t: &SymTridiagonal, count: usize, mode: Parallelism) -> Result<Vec<f64>> {
    let (lo, hi) = t.gershgorin();
    let pad = f64::EPSILON * t.norm_bound().max(1.0);
    let (lo, hi) = (lo - pad, hi + pad);
    let tol = eigenvalue_tolerance(t);
    par::map_range(mode, count, |k| bisect(t, k, lo, hi, tol)).into_iter().collect()
}

/// Partially pivoted LU of `T - shift I` (LAPACK `gttrf` layout).
struct TridiagLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn factor(t: &SymTridiagonal, shift: f64, tiny: f64) -> Self {
        let n = t.len();
        let mut dl = t.off.clone();
        let mut du = t.off.clone();
        let mut d: Vec<f64> = t.diag.iter().map(|x| x - shift).collect();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swapped[i] = true;
            }
        }
        for di in d.iter_mut() {
            if di.abs() < tiny {
                *di = if *di < 0.0 { -tiny } else { tiny };
            }
        }
        Self { dl, d, du, du2, swapped }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) {
    let nrm = dot(v, v).sqrt();
    v.iter_mut().for_each(|x| *x /= nrm);
}

fn orthogonalize(v: &mut [f64], against: &[Vec<f64>]) {
    for u in against {
        let c = dot(u, v);
        v.iter_mut().zip(u).for_each(|(x, ui)| *x -= c * ui);
    }
}

fn residual(t: &SymTridiagonal, v: &[f64], lambda: f64) -> f64 {
    t.mul_vec(v).iter().zip(v).map(|(tv, x)| (tv - lambda * x).powi(2)).sum::<f64>().sqrt()
}

/// Inverse iteration for each eigenvalue of one cluster, orthogonalising
/// against the cluster members already found.
fn refine_cluster(t: &SymTridiagonal, first: usize, values: &[f64]) -> Result<Vec<Vec<f64>>> {
    let n = t.len();
    let norm = t.norm_bound().max(1.0);
    let tiny = f64::EPSILON * norm;
    let tol = 4.0 * (n as f64).sqrt() * f64::EPSILON * norm;
    let mut found: Vec<Vec<f64>> = Vec::with_capacity(values.len());
    for (offset, &lambda) in values.iter().enumerate() {
        let state = first + offset;
        // equal shifts inside a cluster would make every solve land on the same vector
        let shift = lambda + offset as f64 * tiny;
        let lu = TridiagLu::factor(t, shift, tiny);
        let mut rng = ChaCha8Rng::seed_from_u64(state as u64);
        let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        orthogonalize(&mut v, &found);
        normalize(&mut v);
        let mut converged_at = None;
        for it in 1..=MAX_INVERSE_ITER {
            lu.solve(&mut v);
            orthogonalize(&mut v, &found);
            normalize(&mut v);
            if !v.iter().all(|x| x.is_finite()) {
                break;
            }
            if converged_at.is_some() {
                break;
            }
            if residual(t, &v, lambda) <= tol {
                converged_at = Some(it);
            }
        }
        if converged_at.is_none() {
            return Err(SpectralError::SolverFailure { state, iterations: MAX_INVERSE_ITER });
        }
        found.push(v);
    }
    Ok(found)
}

/// The `count` lowest eigenpairs; vectors are unit-norm in the Euclidean sense
/// and mutually orthogonal to working precision.
pub(crate) fn lowest_eigenpairs(
    t: &SymTridiagonal,
    count: usize,
    mode: Parallelism,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let values = lowest_eigenvalues(t, count, mode)?;
    let gap = CLUSTER_REL_GAP * t.norm_bound().max(1.0);
    let mut clusters: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || values[k] - values[k - 1] > gap {
            clusters.push((start, k));
            start = k;
        }
    }
    let refined = par::map_slice(mode, &clusters, |&(a, b)| refine_cluster(t, a, &values[a..b]));
    let mut vectors = Vec::with_capacity(count);
    for block in refined {
        vectors.extend(block?);
    }
    // two passes of modified Gram–Schmidt across clusters
    for k in 0..vectors.len() {
        let (done, rest) = vectors.split_at_mut(k);
        let v = &mut rest[0];
        for _ in 0..2 {
            orthogonalize(v, done);
        }
        normalize(v);
    }
    Ok((values, vectors))
}

/// Sign changes in `v`, ignoring samples smaller than `rel_tol * max|v|`.
pub fn count_sign_changes(v: &[f64], rel_tol: f64) -> usize {
    let vmax = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let floor = rel_tol * vmax;
    let mut last = 0.0_f64;
    let mut changes = 0;
    for &x in v.iter().filter(|x| x.abs() > floor) {
        if last != 0.0 && (x > 0.0) != (last > 0.0) {
            changes += 1;
        }
        last = x;
    }
    changes
}
