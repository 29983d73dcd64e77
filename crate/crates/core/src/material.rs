//! Per-phase material law: deviatoric/volumetric split elasticity, a yield
//! ball in deviatoric space, the support-function dissipation it generates,
//! the cell-local incremental plastic update (proximal point), and the
//! inf-convolution dissipation of phase interfaces.
//!
//! The elastic law is `C ξ = C_dev ξ_dev + k tr(ξ) I` with `C_dev` either a
//! scalar 2μ (isotropic) or an SPD 5×5 matrix on the fixed orthonormal
//! deviatoric basis of [`crate::tensor::deviatoric_basis`].

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tensor::{
    from_deviatoric_coords, sym_odot, to_deviatoric_coords, Sym3, Vec3,
};
use serde::{Deserialize, Serialize};

/// Deviatoric part of the elastic law.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DevElasticity<T> {
    /// `C_dev ξ = 2μ ξ` on deviators.
    Isotropic { two_mu: T },
    /// SPD matrix on the fixed orthonormal deviatoric basis.
    Matrix { coeffs: [[T; 5]; 5] },
}

/// Yield constraint: a ball of the given radius in deviatoric space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YieldRule<T> {
    VonMises { radius: T },
}

/// One phase's constitutive data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseMaterial<T> {
    pub dev: DevElasticity<T>,
    /// Bulk modulus k > 0 multiplying tr(ξ) I.
    pub bulk: T,
    pub yield_rule: YieldRule<T>,
}

impl<T: Real> PhaseMaterial<T> {
    /// Validate parameters: k > 0, SPD deviatoric law, positive yield radius.
    pub fn validated(self) -> Result<Self> {
        if !(self.bulk > T::zero()) || !self.bulk.is_finite() {
            return Err(Error::InvalidParameter {
                name: "bulk",
                message: format!("bulk modulus must be positive, got {}", self.bulk),
            });
        }
        match &self.dev {
            DevElasticity::Isotropic { two_mu } => {
                if !(*two_mu > T::zero()) || !two_mu.is_finite() {
                    return Err(Error::InvalidParameter {
                        name: "two_mu",
                        message: format!("deviatoric modulus must be positive, got {two_mu}"),
                    });
                }
            }
            DevElasticity::Matrix { coeffs } => {
                let (lo, _hi) = sym5_eigen_bounds(coeffs);
                let sym_err = max_asymmetry(coeffs);
                if sym_err > T::of(1e-12) {
                    return Err(Error::InvalidParameter {
                        name: "coeffs",
                        message: format!("deviatoric matrix must be symmetric (asymmetry {sym_err:e})"),
                    });
                }
                if !(lo > T::zero()) {
                    return Err(Error::InvalidParameter {
                        name: "coeffs",
                        message: format!("deviatoric matrix must be positive definite (λ_min = {lo:e})"),
                    });
                }
            }
        }
        let YieldRule::VonMises { radius } = &self.yield_rule;
        if !(*radius > T::zero()) || !radius.is_finite() {
            return Err(Error::InvalidParameter {
                name: "yield_radius",
                message: format!("yield radius must be positive, got {radius}"),
            });
        }
        Ok(self)
    }

    /// Yield radius of the deviatoric ball.
    #[inline]
    pub fn yield_radius(&self) -> T {
        let YieldRule::VonMises { radius } = self.yield_rule;
        radius
    }

    /// Coercivity sandwich of the quadratic energy: `r_c |ξ|² ≤ Q(ξ) ≤ R_c |ξ|²`
    /// with `r_c = min(λ_min(C_dev), 3k)/2` and `R_c = max(λ_max(C_dev), 3k)/2`.
    pub fn coercivity_bounds(&self) -> (T, T) {
        let (dev_lo, dev_hi) = match &self.dev {
            DevElasticity::Isotropic { two_mu } => (*two_mu, *two_mu),
            DevElasticity::Matrix { coeffs } => sym5_eigen_bounds(coeffs),
        };
        let three_k = T::of(3.0) * self.bulk;
        let half = T::of(0.5);
        (half * dev_lo.min(three_k), half * dev_hi.max(three_k))
    }

    /// Apply the elastic law: `C ξ = C_dev ξ_dev + k tr(ξ) I`.
    pub fn elasticity_apply(&self, xi: Sym3<T>) -> Sym3<T> {
        let dev = xi.dev();
        let dev_stress = match &self.dev {
            DevElasticity::Isotropic { two_mu } => dev.scale(*two_mu),
            DevElasticity::Matrix { coeffs } => {
                let c = to_deviatoric_coords(dev);
                let mut out = [T::zero(); 5];
                for (i, row) in coeffs.iter().enumerate() {
                    let mut acc = T::zero();
                    for (j, m) in row.iter().enumerate() {
                        acc += *m * c[j];
                    }
                    out[i] = acc;
                }
                from_deviatoric_coords(out)
            }
        };
        let vol = self.bulk * xi.trace();
        dev_stress.add(Sym3::from_diag([vol, vol, vol]))
    }

    /// Quadratic elastic energy density `Q(ξ) = ½ C ξ : ξ`.
    #[inline]
    pub fn quadratic_energy(&self, xi: Sym3<T>) -> T {
        T::of(0.5) * self.elasticity_apply(xi).inner(xi)
    }

    /// Dissipation density `H(q) = r_y |q|` on deviatoric arguments.
    ///
    /// Errors if `q` carries a relative trace above 1e-10 (with an absolute
    /// floor of 1e-14 so that roundoff-sized arguments are not rejected).
    pub fn dissipation(&self, q: Sym3<T>) -> Result<T> {
        let n = q.norm();
        let tr = q.trace().abs();
        if tr > T::of(1e-10) * n && tr > T::of(1e-14) {
            return Err(Error::Constraint(format!(
                "dissipation argument must be deviatoric: |tr| = {:e} with |q| = {:e}",
                q.trace().abs(),
                n
            )));
        }
        Ok(self.yield_radius() * n)
    }

    /// Membership in the yield set: `|σ_dev| ≤ r_y + 1e-10`.
    #[inline]
    pub fn in_yield_set(&self, sigma: Sym3<T>) -> bool {
        sigma.dev().norm() <= self.yield_radius() + T::of(1e-10)
    }

    /// Signed yield excess `|σ_dev| − r_y` (positive = violation).
    #[inline]
    pub fn yield_excess(&self, sigma: Sym3<T>) -> T {
        sigma.dev().norm() - self.yield_radius()
    }

    /// Incremental plastic update: the deviatoric minimizer of
    /// `Q(strain − p) + H(p − p_prev)`.
    ///
    /// For the isotropic law this is the closed-form radial return on the
    /// trial stress `s = 2μ dev(strain − p_prev)`; the matrix law falls back
    /// to a proximal-gradient iteration (tolerance 1e-10).
    pub fn plastic_update(&self, strain: Sym3<T>, p_prev: Sym3<T>) -> Result<Sym3<T>> {
        let r = self.yield_radius();
        match &self.dev {
            DevElasticity::Isotropic { two_mu } => {
                let s = strain.sub(p_prev).dev().scale(*two_mu);
                let sn = s.norm();
                if sn <= r {
                    Ok(p_prev)
                } else {
                    let factor = (T::one() - r / sn) / *two_mu;
                    Ok(p_prev.add(s.scale(factor)))
                }
            }
            DevElasticity::Matrix { coeffs } => {
                self.plastic_update_matrix(coeffs, strain, p_prev)
            }
        }
    }

    /// Proximal gradient in deviatoric coordinates for the matrix law.
    fn plastic_update_matrix(
        &self,
        coeffs: &[[T; 5]; 5],
        strain: Sym3<T>,
        p_prev: Sym3<T>,
    ) -> Result<Sym3<T>> {
        let r = self.yield_radius();
        let e = to_deviatoric_coords(strain);
        let p0 = to_deviatoric_coords(p_prev);
        let (_, hi) = sym5_eigen_bounds(coeffs);
        let tau = T::one() / hi;
        let tol = T::of(1e-10);

        let matvec = |x: &[T; 5]| -> [T; 5] {
            let mut out = [T::zero(); 5];
            for (i, row) in coeffs.iter().enumerate() {
                let mut acc = T::zero();
                for (j, m) in row.iter().enumerate() {
                    acc += *m * x[j];
                }
                out[i] = acc;
            }
            out
        };

        let mut p = p0;
        let max_iters = 200_000;
        for _ in 0..max_iters {
            // gradient of ½(e − p)ᵀ M (e − p) with respect to p is −M(e − p)
            let mut diff = [T::zero(); 5];
            for i in 0..5 {
                diff[i] = e[i] - p[i];
            }
            let g = matvec(&diff);
            // forward step then shrinkage towards p0 (prox of τ·r·|·− p0|)
            let mut v = [T::zero(); 5];
            let mut vn = T::zero();
            for i in 0..5 {
                v[i] = p[i] + tau * g[i] - p0[i];
                vn += v[i] * v[i];
            }
            vn = vn.sqrt();
            let shrink = if vn > tau * r {
                T::one() - tau * r / vn
            } else {
                T::zero()
            };
            let mut p_next = [T::zero(); 5];
            let mut step = T::zero();
            for i in 0..5 {
                p_next[i] = p0[i] + shrink * v[i];
                step += (p_next[i] - p[i]) * (p_next[i] - p[i]);
            }
            p = p_next;
            if step.sqrt() <= tol {
                return Ok(from_deviatoric_coords(p));
            }
        }
        Err(Error::NonConvergence {
            context: "matrix-law plastic update (proximal gradient)".into(),
            iterations: max_iters,
            residual: f64::NAN,
        })
    }
}

/// Dissipation of a displacement jump `a` across an interface with normal
/// `ν`, defined as the infimum of `H_i(a_i ⊙ ν) + H_j(−a_j ⊙ ν)` over all
/// tangential splittings `a = a_i − a_j`.
///
/// Requires `|ν| = 1` and `a ⊥ ν`. The infimum is computed by a nested grid
/// search over the 2-dimensional tangential coordinates of `a_i` (the
/// objective is convex), refined until the grid cell is below `tol` relative
/// to `|a|`.
pub fn interface_dissipation<T: Real>(
    mat_i: &PhaseMaterial<T>,
    mat_j: &PhaseMaterial<T>,
    a: Vec3<T>,
    normal: Vec3<T>,
    tol: T,
) -> Result<T> {
    let nn = normal.norm();
    if (nn - T::one()).abs() > T::of(1e-10) {
        return Err(Error::Constraint(format!(
            "interface normal must be a unit vector, |ν| = {nn}"
        )));
    }
    let an = a.norm();
    if an == T::zero() {
        return Ok(T::zero());
    }
    if a.dot(normal).abs() > T::of(1e-10) * an {
        return Err(Error::Constraint(format!(
            "jump must be tangential: a·ν = {:e} with |a| = {:e}",
            a.dot(normal),
            an
        )));
    }
    if !(tol > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "tol",
            message: "tolerance must be positive".into(),
        });
    }

    // Orthonormal tangent frame (t1, t2) ⊥ ν.
    let seed = if normal.0[0].abs() < T::of(0.9) {
        Vec3::new(T::one(), T::zero(), T::zero())
    } else {
        Vec3::new(T::zero(), T::one(), T::zero())
    };
    let mut t1 = seed.sub(normal.scale(seed.dot(normal)));
    t1 = t1.scale(T::one() / t1.norm());
    let t2 = Vec3::new(
        normal.0[1] * t1.0[2] - normal.0[2] * t1.0[1],
        normal.0[2] * t1.0[0] - normal.0[0] * t1.0[2],
        normal.0[0] * t1.0[1] - normal.0[1] * t1.0[0],
    );

    let objective = |alpha: T, beta: T| -> T {
        let a_i = t1.scale(alpha).add(t2.scale(beta));
        let a_j_neg = a.sub(a_i); // = −a_j
        let term_i = mat_i.yield_radius() * sym_odot(a_i, normal).norm();
        let term_j = mat_j.yield_radius() * sym_odot(a_j_neg, normal).norm();
        term_i + term_j
    };

    // Nested zoom: the optimum lies in the convex hull of {0, a}, well inside
    // the initial box of half-width 2|a|.
    let grid: usize = 16;
    let mut center = (T::zero(), T::zero());
    let mut half = T::of(2.0) * an;
    let mut best = objective(center.0, center.1);
    let target = tol * an / T::of(10.0);
    for _ in 0..80 {
        let step = T::of(2.0) * half / T::of_usize(grid);
        let mut best_pt = center;
        for i in 0..=grid {
            for j in 0..=grid {
                let x = center.0 - half + step * T::of_usize(i);
                let y = center.1 - half + step * T::of_usize(j);
                let v = objective(x, y);
                if v < best {
                    best = v;
                    best_pt = (x, y);
                }
            }
        }
        center = best_pt;
        half = T::of(3.0) * step;
        if half <= target {
            break;
        }
    }
    Ok(best)
}

/// Largest absolute asymmetry of a 5×5 matrix.
fn max_asymmetry<T: Real>(m: &[[T; 5]; 5]) -> T {
    let mut worst = T::zero();
    for i in 0..5 {
        for j in (i + 1)..5 {
            worst = worst.max((m[i][j] - m[j][i]).abs());
        }
    }
    worst
}

/// Extremal eigenvalues of a symmetric 5×5 matrix via cyclic Jacobi sweeps.
pub(crate) fn sym5_eigen_bounds<T: Real>(m: &[[T; 5]; 5]) -> (T, T) {
    let mut a = *m;
    // symmetrize defensively; validation reports asymmetry separately
    for i in 0..5 {
        for j in (i + 1)..5 {
            let avg = (a[i][j] + a[j][i]) * T::of(0.5);
            a[i][j] = avg;
            a[j][i] = avg;
        }
    }
    for _sweep in 0..60 {
        let mut off = T::zero();
        for i in 0..5 {
            for j in (i + 1)..5 {
                off += a[i][j] * a[i][j];
            }
        }
        if off.sqrt() < T::of(1e-14) {
            break;
        }
        for p in 0..5 {
            for q in (p + 1)..5 {
                if a[p][q].abs() < T::of(1e-300) {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (T::of(2.0) * a[p][q]);
                let t = {
                    let sign = if theta >= T::zero() { T::one() } else { -T::one() };
                    sign / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..5 {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..5 {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut lo = a[0][0];
    let mut hi = a[0][0];
    for i in 1..5 {
        lo = lo.min(a[i][i]);
        hi = hi.max(a[i][i]);
    }
    (lo, hi)
}
