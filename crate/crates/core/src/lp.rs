//! Dense two-phase simplex for programs with few equality rows and many
//! columns:
//!
//! ```text
//! minimize cᵀy  subject to  E y = f,  y ≥ 0
//! ```
//!
//! Every LP in this crate is the dual of a problem in `n + 1 ≤ 4` unknowns
//! (support values and Chebyshev centers of H-polytopes), so the tableau has
//! at most a handful of rows. The row multipliers of the optimal basis are
//! the primal solution.

use crate::prelude::*;
use nalgebra::{DMatrix, DVector};

const PIVOT_TOL: f64 = 1e-11;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: f64, y: Vec<f64>, multipliers: Vec<f64> },
    Infeasible,
    Unbounded,
    /// The pivot limit was reached.
    Stalled,
}

/// `rows[i]` is the i-th row of `E` (length = number of columns).
pub fn solve_standard_form(c: &[f64], rows: &[Vec<f64>], f: &[f64]) -> LpOutcome {
    let r = rows.len();
    let m = c.len();
    debug_assert!(rows.iter().all(|row| row.len() == m));
    // Tableau columns: m structural, r artificial, 1 rhs.
    let width = m + r + 1;
    let mut t = vec![vec![0.0; width]; r];
    for i in 0..r {
        let sign = if f[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..m {
            t[i][j] = sign * rows[i][j];
        }
        t[i][m + i] = 1.0;
        t[i][width - 1] = sign * f[i];
    }
    let mut basis: Vec<usize> = (m..m + r).collect();

    // Phase 1: minimize the sum of artificials.
    let mut cost1 = vec![0.0; m + r];
    for a in cost1.iter_mut().skip(m) {
        *a = 1.0;
    }
    if run_simplex(&mut t, &mut basis, &cost1, m + r).is_err() {
        // Phase 1 is bounded below by zero, so this is a stall.
        return LpOutcome::Stalled;
    }
    let infeas: f64 = basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= m)
        .map(|(i, _)| t[i][width - 1])
        .sum();
    let scale = 1.0 + f.iter().map(|x| x.abs()).fold(0.0, f64::max);
    if infeas > 1e-9 * scale {
        return LpOutcome::Infeasible;
    }

    // Drive remaining artificials out of the basis; drop redundant rows.
    let mut keep = vec![true; r];
    for i in 0..r {
        if basis[i] >= m {
            let col = (0..m).find(|&j| t[i][j].abs() > 1e-9);
            match col {
                Some(j) => pivot(&mut t, &mut basis, i, j),
                None => keep[i] = false,
            }
        }
    }

    // Phase 2 over structural columns only.
    let mut cost2 = c.to_vec();
    cost2.extend(core::iter::repeat_n(f64::INFINITY, r));
    let active: Vec<usize> = (0..r).filter(|&i| keep[i]).collect();
    let mut t2: Vec<Vec<f64>> = active.iter().map(|&i| t[i].clone()).collect();
    let mut basis2: Vec<usize> = active.iter().map(|&i| basis[i]).collect();
    match run_simplex(&mut t2, &mut basis2, &cost2, m) {
        Ok(()) => {}
        Err(SimplexFailure::Unbounded) => return LpOutcome::Unbounded,
        Err(SimplexFailure::Stalled) => return LpOutcome::Stalled,
    }

    let mut y = vec![0.0; m];
    for (i, &b) in basis2.iter().enumerate() {
        y[b] = t2[i][width - 1];
    }
    let value: f64 = c.iter().zip(&y).map(|(a, b)| a * b).sum();

    // Multipliers: solve B^T π = c_B using the original rows.
    let k = active.len();
    let bmat = DMatrix::from_fn(k, k, |i, j| rows[active[i]][basis2[j]]);
    let cb = DVector::from_iterator(k, basis2.iter().map(|&j| c[j]));
    let pi = bmat.transpose().lu().solve(&cb);
    let mut multipliers = vec![0.0; r];
    if let Some(pi) = pi {
        for (i, &row) in active.iter().enumerate() {
            multipliers[row] = pi[i];
        }
    }
    LpOutcome::Optimal { value, y, multipliers }
}

fn reduced_cost(t: &[Vec<f64>], basis: &[usize], cost: &[f64], j: usize) -> f64 {
    let mut z = cost[j];
    for (i, &b) in basis.iter().enumerate() {
        let cb = cost[b];
        if cb.is_finite() {
            z -= cb * t[i][j];
        }
    }
    z
}

/// Iterations allowed before a run is abandoned.
const MAX_PIVOTS: usize = 100_000;
/// Consecutive degenerate pivots after which pricing switches to Bland's
/// rule, which cannot cycle.
const BLAND_AFTER: usize = 50;

#[derive(Debug)]
enum SimplexFailure {
    Unbounded,
    Stalled,
}

/// Dantzig pricing with a fall back to Bland's rule on degenerate stretches.
fn run_simplex(t: &mut [Vec<f64>], basis: &mut [usize], cost: &[f64], ncols: usize) -> core::result::Result<(), SimplexFailure> {
    let width = t.first().map_or(0, |row| row.len());
    let mut degenerate = 0;
    for _ in 0..MAX_PIVOTS {
        let candidates = (0..ncols)
            .filter(|&j| !basis.contains(&j) && cost[j].is_finite())
            .map(|j| (j, reduced_cost(t, basis, cost, j)))
            .filter(|&(_, d)| d < -1e-10);
        let entering = if degenerate < BLAND_AFTER {
            candidates.min_by(|a, b| a.1.partial_cmp(&b.1).unwrap()).map(|(j, _)| j)
        } else {
            candidates.map(|(j, _)| j).next()
        };
        let Some(j) = entering else { return Ok(()) };
        let mut best: Option<(usize, f64)> = None;
        for i in 0..t.len() {
            let a = t[i][j];
            if a > PIVOT_TOL {
                let ratio = t[i][width - 1] / a;
                match best {
                    None => best = Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < br - 1e-14 || (ratio <= br + 1e-14 && basis[i] < basis[bi]) {
                            best = Some((i, ratio));
                        }
                    }
                }
            }
        }
        let Some((i, ratio)) = best else { return Err(SimplexFailure::Unbounded) };
        degenerate = if ratio <= 1e-14 { degenerate + 1 } else { 0 };
        pivot(t, basis, i, j);
    }
    Err(SimplexFailure::Stalled)
}

fn pivot(t: &mut [Vec<f64>], basis: &mut [usize], i: usize, j: usize) {
    let p = t[i][j];
    for v in t[i].iter_mut() {
        *v /= p;
    }
    let row = t[i].clone();
    for (k, r) in t.iter_mut().enumerate() {
        if k != i {
            let factor = r[j];
            if factor != 0.0 {
                for (v, w) in r.iter_mut().zip(&row) {
                    *v -= factor * w;
                }
            }
        }
    }
    basis[i] = j;
}

/// `max ⟨u, x⟩` subject to `⟨a_i, x⟩ ≤ b_i`. Returns the optimal value and a
/// maximizer, or `None` if the program is unbounded (or infeasible).
pub fn maximize_linear(normals: &[Vec<f64>], offsets: &[f64], u: &[f64]) -> Option<(f64, Vec<f64>)> {
    let n = u.len();
    let rows: Vec<Vec<f64>> = (0..n).map(|k| normals.iter().map(|a| a[k]).collect()).collect();
    match solve_standard_form(offsets, &rows, u) {
        LpOutcome::Optimal { value, multipliers, .. } => Some((value, multipliers)),
        _ => None,
    }
}

/// Chebyshev ball of `{x : ⟨a_i, x⟩ ≤ b_i}`: center and radius. `None` when
/// the radius is unbounded or the system is infeasible.
pub fn chebyshev_center(normals: &[Vec<f64>], offsets: &[f64]) -> Option<(Vec<f64>, f64)> {
    let n = normals.first()?.len();
    let mut rows: Vec<Vec<f64>> = (0..n).map(|k| normals.iter().map(|a| a[k]).collect()).collect();
    rows.push(normals.iter().map(|a| crate::linalg::norm(a)).collect());
    let mut rhs = vec![0.0; n];
    rhs.push(1.0);
    match solve_standard_form(offsets, &rows, &rhs) {
        LpOutcome::Optimal { value, multipliers, .. } => {
            let center = multipliers[..n].to_vec();
            Some((center, value))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> (Vec<Vec<f64>>, Vec<f64>) {
        (
            vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]],
            vec![1.0, 1.0, 2.0, 0.0],
        )
    }

    #[test]
    fn support_of_box() {
        let (a, b) = square();
        let (v, x) = maximize_linear(&a, &b, &[1.0, 1.0]).unwrap();
        assert!((v - 3.0).abs() < 1e-12);
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 2.0).abs() < 1e-12);
        let (v, _) = maximize_linear(&a, &b, &[-1.0, -1.0]).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded_detected() {
        let a = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let b = vec![1.0, 1.0];
        assert!(maximize_linear(&a, &b, &[-1.0, 0.0]).is_none());
    }

    #[test]
    fn chebyshev_of_box() {
        let (a, b) = square();
        let (c, r) = chebyshev_center(&a, &b).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
        assert!(c[0].abs() < 1e-12);
        assert!((c[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn many_tangent_planes() {
        // Tens of thousands of nearly redundant rows: Bland's rule alone
        // runs out of pivots here.
        let g = crate::SphereGrid::gauss_product(136, 272);
        let a = g.directions().to_vec();
        let b = vec![1.0; a.len()];
        let (c, r) = chebyshev_center(&a, &b).unwrap();
        assert!((r - 1.0).abs() < 1e-9);
        assert!(crate::linalg::norm(&c) < 1e-9);
    }

    #[test]
    fn infeasible_detected() {
        let a = vec![vec![1.0], vec![-1.0]];
        let b = vec![-1.0, -1.0];
        assert!(chebyshev_center(&a, &b).map_or(true, |(_, r)| r < 0.0));
    }
}
