//! Matrix-free preconditioned conjugate gradients for the SPD systems
//! assembled by the elastic and two-scale solvers.
//!
//! The optional projection hook restricts the iteration to a linear
//! subspace (used to keep corrector fields mean-free per macro cell); all
//! reductions are sequential so results are bitwise deterministic for a
//! fixed input regardless of worker count.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Symmetric positive semi-definite operator given by its action.
pub trait LinearOperator<T>: Sync {
    fn dim(&self) -> usize;
    /// out = A x. Must not read `out`'s prior contents.
    fn apply(&self, x: &[T], out: &mut [T]);
}

#[derive(Clone, Copy, Debug)]
pub struct CgConfig<T> {
    /// Stop when ‖r‖ ≤ rel_tol·‖b‖.
    pub rel_tol: T,
    pub max_iters: usize,
}

impl<T: Real> Default for CgConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::of(1e-10),
            max_iters: 20_000,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CgOutcome<T> {
    pub iterations: usize,
    /// Final ‖r‖/‖b‖.
    pub rel_residual: T,
}

pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| *x * *y).sum()
}

fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// Preconditioned conjugate gradients with Jacobi (diagonal) preconditioner
/// and an optional subspace projection applied to residual and directions.
///
/// `x` carries the initial guess in and the solution out. `inv_diag` holds
/// the entrywise inverse of the operator diagonal (or of any SPD diagonal
/// approximation).
pub fn pcg<T: Real>(
    op: &dyn LinearOperator<T>,
    rhs: &[T],
    x: &mut [T],
    inv_diag: &[T],
    project: Option<&(dyn Fn(&mut [T]) + Sync)>,
    cfg: &CgConfig<T>,
) -> Result<CgOutcome<T>> {
    let n = op.dim();
    if rhs.len() != n || x.len() != n || inv_diag.len() != n {
        return Err(Error::Shape(format!(
            "cg size mismatch: op {n}, rhs {}, x {}, diag {}",
            rhs.len(),
            x.len(),
            inv_diag.len()
        )));
    }
    if n == 0 {
        return Ok(CgOutcome {
            iterations: 0,
            rel_residual: T::zero(),
        });
    }
    let b_norm = norm(rhs);
    if b_norm == T::zero() {
        // homogeneous SPD system: the solution on the admissible subspace is 0
        for v in x.iter_mut() {
            *v = T::zero();
        }
        return Ok(CgOutcome {
            iterations: 0,
            rel_residual: T::zero(),
        });
    }

    if let Some(p) = project {
        p(x);
    }
    let mut r = vec![T::zero(); n];
    op.apply(x, &mut r);
    for i in 0..n {
        r[i] = rhs[i] - r[i];
    }
    if let Some(p) = project {
        p(&mut r);
    }

    let mut z: Vec<T> = r.iter().zip(inv_diag).map(|(ri, d)| *ri * *d).collect();
    if let Some(p) = project {
        p(&mut z);
    }
    let mut d = z.clone();
    let mut rz = dot(&r, &z);
    let mut q = vec![T::zero(); n];

    let mut res = norm(&r) / b_norm;
    if res <= cfg.rel_tol {
        return Ok(CgOutcome {
            iterations: 0,
            rel_residual: res,
        });
    }

    for iter in 1..=cfg.max_iters {
        op.apply(&d, &mut q);
        let dq = dot(&d, &q);
        if !(dq > T::zero()) {
            // numerically semi-definite direction: converged-in-subspace or
            // breakdown; report honestly
            return Err(Error::NonConvergence {
                context: format!("cg breakdown: non-positive curvature {dq:e}"),
                iterations: iter,
                residual: res.lossy(),
            });
        }
        let alpha = rz / dq;
        for i in 0..n {
            x[i] += alpha * d[i];
            r[i] -= alpha * q[i];
        }
        if let Some(p) = project {
            p(&mut r);
        }
        res = norm(&r) / b_norm;
        if res <= cfg.rel_tol {
            return Ok(CgOutcome {
                iterations: iter,
                rel_residual: res,
            });
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        if let Some(p) = project {
            p(&mut z);
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            d[i] = z[i] + beta * d[i];
        }
    }
    Err(Error::NonConvergence {
        context: "cg exceeded max iterations".into(),
        iterations: cfg.max_iters,
        residual: res.lossy(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    struct Dense {
        a: Vec<Vec<f64>>,
    }

    impl LinearOperator<f64> for Dense {
        fn dim(&self) -> usize {
            self.a.len()
        }
        fn apply(&self, x: &[f64], out: &mut [f64]) {
            for (i, row) in self.a.iter().enumerate() {
                out[i] = dot(row, x);
            }
        }
    }

    fn random_spd(n: usize, rng: &mut impl Rng) -> Dense {
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                m[i][j] = rng.gen_range(-1.0..1.0);
            }
        }
        // A = MᵀM + I
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += m[k][i] * m[k][j];
                }
                a[i][j] = s + if i == j { 1.0 } else { 0.0 };
            }
        }
        Dense { a }
    }

    /// Gaussian elimination with partial pivoting — the independent oracle.
    fn dense_solve(a: &Dense, b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut m: Vec<Vec<f64>> = a.a.iter().cloned().collect();
        let mut rhs = b.to_vec();
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
                .unwrap();
            m.swap(col, piv);
            rhs.swap(col, piv);
            let p = m[col][col];
            for row in (col + 1)..n {
                let f = m[row][col] / p;
                for k in col..n {
                    m[row][k] -= f * m[col][k];
                }
                rhs[row] -= f * rhs[col];
            }
        }
        let mut x = vec![0.0; n];
        for row in (0..n).rev() {
            let mut s = rhs[row];
            for k in (row + 1)..n {
                s -= m[row][k] * x[k];
            }
            x[row] = s / m[row][row];
        }
        x
    }

    #[test]
    fn matches_direct_solver_on_random_spd() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0301);
        for _ in 0..20 {
            let n = rng.gen_range(3..25);
            let a = random_spd(n, &mut rng);
            let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let inv_diag: Vec<f64> = (0..n).map(|i| 1.0 / a.a[i][i]).collect();
            let mut x = vec![0.0; n];
            let out = pcg(
                &a,
                &b,
                &mut x,
                &inv_diag,
                None,
                &CgConfig {
                    rel_tol: 1e-12,
                    max_iters: 10_000,
                },
            )
            .unwrap();
            assert!(out.rel_residual <= 1e-12);
            let oracle = dense_solve(&a, &b);
            for (xi, oi) in x.iter().zip(&oracle) {
                assert_relative_eq!(*xi, *oi, max_relative = 1e-8, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn zero_rhs_returns_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0302);
        let a = random_spd(8, &mut rng);
        let inv_diag: Vec<f64> = (0..8).map(|i| 1.0 / a.a[i][i]).collect();
        let mut x = vec![1.0; 8]; // non-trivial warm start must be overridden
        let out = pcg(&a, &vec![0.0; 8], &mut x, &inv_diag, None, &CgConfig::default()).unwrap();
        assert_eq!(out.iterations, 0);
        assert!(x.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn warm_start_near_solution_converges_fast() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0303);
        let a = random_spd(12, &mut rng);
        let b: Vec<f64> = (0..12).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let inv_diag: Vec<f64> = (0..12).map(|i| 1.0 / a.a[i][i]).collect();
        let mut x = dense_solve(&a, &b);
        let out = pcg(&a, &b, &mut x, &inv_diag, None, &CgConfig::default()).unwrap();
        assert!(out.iterations <= 2, "took {} iterations", out.iterations);
    }

    #[test]
    fn max_iters_exceeded_is_reported() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0304);
        let a = random_spd(20, &mut rng);
        let b: Vec<f64> = (0..20).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let inv_diag = vec![1.0; 20];
        let mut x = vec![0.0; 20];
        let err = pcg(
            &a,
            &b,
            &mut x,
            &inv_diag,
            None,
            &CgConfig {
                rel_tol: 1e-14,
                max_iters: 1,
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }));
    }

    #[test]
    fn projected_cg_solves_singular_consistent_system() {
        // 1D periodic Laplacian: kernel = constants; project = remove mean.
        let n = 16;
        let mut a = vec![vec![0.0; n]; n];
        for i in 0..n {
            a[i][i] = 2.0;
            a[i][(i + 1) % n] = -1.0;
            a[i][(i + n - 1) % n] = -1.0;
        }
        let op = Dense { a };
        // consistent rhs: apply A to a mean-free vector
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0305);
        let mut target: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mean = target.iter().sum::<f64>() / n as f64;
        for v in &mut target {
            *v -= mean;
        }
        let mut b = vec![0.0; n];
        op.apply(&target, &mut b);
        let project = |v: &mut [f64]| {
            let m = v.iter().sum::<f64>() / v.len() as f64;
            for x in v.iter_mut() {
                *x -= m;
            }
        };
        let inv_diag = vec![0.5; n];
        let mut x = vec![0.0; n];
        let out = pcg(
            &op,
            &b,
            &mut x,
            &inv_diag,
            Some(&project),
            &CgConfig {
                rel_tol: 1e-12,
                max_iters: 1000,
            },
        )
        .unwrap();
        assert!(out.rel_residual <= 1e-12);
        let xmean = x.iter().sum::<f64>() / n as f64;
        assert!(xmean.abs() <= 1e-12);
        for (xi, ti) in x.iter().zip(&target) {
            assert_relative_eq!(*xi, *ti, max_relative = 1e-8, epsilon = 1e-10);
        }
    }

    #[test]
    fn empty_system_is_trivial() {
        struct Nil;
        impl LinearOperator<f64> for Nil {
            fn dim(&self) -> usize {
                0
            }
            fn apply(&self, _: &[f64], _: &mut [f64]) {}
        }
        let mut x: Vec<f64> = vec![];
        let out = pcg(&Nil, &[], &mut x, &[], None, &CgConfig::default()).unwrap();
        assert_eq!(out.iterations, 0);
    }
}
