//! Shift-invert subspace iteration for the lowest eigenpairs of a banded
//! symmetric pencil `(K, M)` with `M` positive definite.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{RealEigenpair, SolverSettings};
use crate::band::{BandLu, BandMatrix};
use crate::error::{Error, Result};
use crate::fem_beam::AssembledSystem;

/// Shift used for every real solve, `(2π · 1 Hz)²`. Keeps `K - σM`
/// nonsingular when `K` has rigid-body modes.
pub const SHIFT: f64 = 4.0 * std::f64::consts::PI * std::f64::consts::PI;

const MAX_SWEEPS: usize = 400;
/// Relative eigenvalue change between sweeps accepted as converged.
const VALUE_TOL: f64 = 1e-10;
/// Values below this fraction of the largest requested one are rigid-body.
const RIGID_FRACTION: f64 = 1e-6;
/// Relative residual `‖Kx - λMx‖ / (λ‖Mx‖)` accepted as converged.
const RESIDUAL_TOL: f64 = 1e-8;

/// Converged Ritz block. `values` ascending; `vectors` M-orthonormal.
#[derive(Debug, Clone)]
pub struct Subspace {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub sweeps: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// M-orthonormalize the columns in place (modified Gram-Schmidt, two passes).
/// Columns that collapse are replaced by fresh random vectors.
fn m_orthonormalize(cols: &mut [Vec<f64>], m: &BandMatrix<f64>, rng: &mut ChaCha8Rng) {
    let n = m.size();
    let mut mq: Vec<Vec<f64>> = Vec::with_capacity(cols.len());
    for j in 0..cols.len() {
        let mut attempts = 0;
        loop {
            let original = dot(&cols[j], &m.mul_vec(&cols[j])).sqrt();
            for _ in 0..2 {
                for (i, mqi) in mq.iter().enumerate() {
                    let c = dot(mqi, &cols[j]);
                    let (head, tail) = cols.split_at_mut(j);
                    axpy(&mut tail[0], -c, &head[i]);
                }
            }
            let mv = m.mul_vec(&cols[j]);
            let norm = dot(&cols[j], &mv).sqrt();
            if norm > 1e-10 * original && norm.is_finite() && norm > 0.0 {
                cols[j].iter_mut().for_each(|v| *v /= norm);
                mq.push(mv.into_iter().map(|v| v / norm).collect());
                break;
            }
            attempts += 1;
            assert!(attempts < 10, "cannot complete an M-orthonormal basis");
            cols[j] = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        }
    }
}

/// Lowest `count` eigenpairs of `(k, m)` by shift-invert subspace iteration.
///
/// `start` seeds the block (e.g. the block of a previous, nearby solve).
pub fn lowest_eigenpairs(
    k: &BandMatrix<f64>,
    m: &BandMatrix<f64>,
    count: usize,
    start: Option<&[Vec<f64>]>,
) -> Result<Subspace> {
    let n = k.size();
    if count == 0 || count > n {
        return Err(Error::TooFewModes {
            requested: count,
            found: n,
        });
    }
    let p = (2 * count).max(count + 8).min(n);
    let shifted = BandMatrix::combine(&[(1.0, k), (-SHIFT, m)]);
    let lu = BandLu::factor(&shifted)?;

    let mut rng = ChaCha8Rng::seed_from_u64(0x1a_3b_5c);
    let mut block: Vec<Vec<f64>> = Vec::with_capacity(p);
    if let Some(s) = start {
        block.extend(s.iter().take(p).cloned());
    }
    while block.len() < p {
        block.push((0..n).map(|_| rng.random_range(-1.0..1.0)).collect());
    }
    m_orthonormalize(&mut block, m, &mut rng);

    let mut previous: Option<Vec<f64>> = None;
    for sweep in 1..=MAX_SWEEPS {
        let mut next: Vec<Vec<f64>> = block.iter().map(|x| lu.solve(&m.mul_vec(x))).collect();
        m_orthonormalize(&mut next, m, &mut rng);

        let kx: Vec<Vec<f64>> = next.iter().map(|x| k.mul_vec(x)).collect();
        let reduced = DMatrix::from_fn(p, p, |i, j| 0.5 * (dot(&next[i], &kx[j]) + dot(&next[j], &kx[i])));
        let eig = SymmetricEigen::new(reduced);
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        block = order
            .iter()
            .map(|&c| {
                let mut v = vec![0.0; n];
                for (r, x) in next.iter().enumerate() {
                    axpy(&mut v, eig.eigenvectors[(r, c)], x);
                }
                v
            })
            .collect();

        let top = values[count - 1].abs().max(f64::MIN_POSITIVE);
        let converged = match &previous {
            None => false,
            Some(prev) => (0..count).all(|i| {
                // rigid-body values sit at roundoff level and never settle
                values[i].abs() < RIGID_FRACTION * top
                    || (values[i] - prev[i]).abs() <= VALUE_TOL * values[i].abs()
                    || residual_ok(k, m, &block[i], values[i])
            }),
        };
        if converged {
            return Ok(Subspace {
                values,
                vectors: block,
                sweeps: sweep,
            });
        }
        previous = Some(values);
    }
    Err(Error::NotConverged {
        method: "subspace iteration",
        iterations: MAX_SWEEPS,
        last_change: f64::NAN,
    })
}

fn residual_ok(k: &BandMatrix<f64>, m: &BandMatrix<f64>, x: &[f64], lambda: f64) -> bool {
    let mx = m.mul_vec(x);
    let kx = k.mul_vec(x);
    let r: f64 = kx
        .iter()
        .zip(&mx)
        .map(|(a, b)| (a - lambda * b).powi(2))
        .sum::<f64>()
        .sqrt();
    let scale = lambda.abs() * dot(&mx, &mx).sqrt();
    r <= RESIDUAL_TOL * scale
}

/// Scale to unit Euclidean norm with the largest-magnitude entry positive.
pub(crate) fn normalize_shape(v: &[f64]) -> Vec<f64> {
    let norm = dot(v, v).sqrt();
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.abs().total_cmp(&b.abs()))
        .unwrap_or(1.0);
    let s = pivot.signum() / norm;
    v.iter().map(|x| x * s).collect()
}

/// Split a converged block into rigid and elastic pairs.
pub(crate) fn elastic_pairs(sub: &Subspace, count: usize, cutoff: Option<f64>) -> Vec<RealEigenpair> {
    let top = sub.values[count - 1].abs();
    let cutoff = cutoff.unwrap_or(RIGID_FRACTION * top);
    sub.values
        .iter()
        .zip(&sub.vectors)
        .take(count)
        .filter(|(v, _)| **v >= cutoff)
        .map(|(v, x)| RealEigenpair {
            omega0_squared: *v,
            shape: normalize_shape(x),
        })
        .collect()
}

/// The `n_modes` lowest elastic eigenpairs of `(K0, M)`, ascending.
/// Rigid-body modes of a free-free system are skipped.
pub fn real_modes(system: &AssembledSystem, n_modes: usize, settings: &SolverSettings) -> Result<Vec<RealEigenpair>> {
    let rigid = system.bc.map_or(3, |bc| bc.rigid_modes());
    let count = (n_modes + rigid).min(system.size());
    let sub = lowest_eigenpairs(&system.k0, &system.m, count, None)?;
    let pairs = elastic_pairs(&sub, count, settings.rigid_mode_cutoff);
    if pairs.len() < n_modes {
        return Err(Error::TooFewModes {
            requested: n_modes,
            found: pairs.len(),
        });
    }
    Ok(pairs.into_iter().take(n_modes).collect())
}
