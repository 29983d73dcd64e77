//! Small fixed-size tensor types for plate kinematics.
//!
//! Symmetric 3×3 tensors are stored as six plain components in the order
//! (11, 22, 33, 12, 13, 23); the Frobenius inner product carries the explicit
//! factor 2 on the off-diagonal slots,
//!
//! ```text
//! a : b = a11 b11 + a22 b22 + a33 b33 + 2 (a12 b12 + a13 b13 + a23 b23).
//! ```
//!
//! The thickness rescaling Λ_h acts entrywise on strains: it multiplies the
//! 13/23 components by 1/h and the 33 component by 1/h².

use crate::error::{Error, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// Fixed 2-vector (in-plane displacements, tangent coordinates).
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2<T>(pub [T; 2]);

/// Fixed 3-vector (displacements, interface normals, jump directions).
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3<T>(pub [T; 3]);

/// Symmetric 2×2 tensor, components (11, 22, 12).
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Sym2<T>(pub [T; 3]);

/// Symmetric 3×3 tensor, components (11, 22, 33, 12, 13, 23).
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Sym3<T>(pub [T; 6]);

impl<T: Real> Vec2<T> {
    #[inline]
    pub fn new(x: T, y: T) -> Self {
        Vec2([x, y])
    }

    #[inline]
    pub fn zero() -> Self {
        Vec2([T::zero(); 2])
    }

    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.0[0] * o.0[0] + self.0[1] * o.0[1]
    }

    #[inline]
    pub fn norm(self) -> T {
        self.dot(self).sqrt()
    }

    #[inline]
    pub fn scale(self, s: T) -> Self {
        Vec2([self.0[0] * s, self.0[1] * s])
    }

    #[inline]
    pub fn add(self, o: Self) -> Self {
        Vec2([self.0[0] + o.0[0], self.0[1] + o.0[1]])
    }

    #[inline]
    pub fn sub(self, o: Self) -> Self {
        Vec2([self.0[0] - o.0[0], self.0[1] - o.0[1]])
    }
}

impl<T: Real> Vec3<T> {
    #[inline]
    pub fn new(x: T, y: T, z: T) -> Self {
        Vec3([x, y, z])
    }

    #[inline]
    pub fn zero() -> Self {
        Vec3([T::zero(); 3])
    }

    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    #[inline]
    pub fn norm(self) -> T {
        self.dot(self).sqrt()
    }

    #[inline]
    pub fn scale(self, s: T) -> Self {
        Vec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }

    #[inline]
    pub fn add(self, o: Self) -> Self {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }

    #[inline]
    pub fn sub(self, o: Self) -> Self {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl<T: Real> Sym2<T> {
    #[inline]
    pub fn zero() -> Self {
        Sym2([T::zero(); 3])
    }

    #[inline]
    pub fn trace(self) -> T {
        self.0[0] + self.0[1]
    }

    /// Frobenius inner product with factor 2 on the off-diagonal slot.
    #[inline]
    pub fn inner(self, o: Self) -> T {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + (self.0[2] * o.0[2] + self.0[2] * o.0[2])
    }

    #[inline]
    pub fn norm(self) -> T {
        self.inner(self).sqrt()
    }

    #[inline]
    pub fn scale(self, s: T) -> Self {
        Sym2([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }

    #[inline]
    pub fn add(self, o: Self) -> Self {
        Sym2([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }

    #[inline]
    pub fn sub(self, o: Self) -> Self {
        Sym2([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }

    /// Embed as a 3×3 symmetric tensor with zero third row and column.
    #[inline]
    pub fn embed(self) -> Sym3<T> {
        Sym3([self.0[0], self.0[1], T::zero(), self.0[2], T::zero(), T::zero()])
    }
}

impl<T: Real> Sym3<T> {
    #[inline]
    pub fn zero() -> Self {
        Sym3([T::zero(); 6])
    }

    #[inline]
    pub fn identity() -> Self {
        let o = T::one();
        let z = T::zero();
        Sym3([o, o, o, z, z, z])
    }

    #[inline]
    pub fn from_diag(d: [T; 3]) -> Self {
        let z = T::zero();
        Sym3([d[0], d[1], d[2], z, z, z])
    }

    /// Full-matrix entry access, `get(i, j) = get(j, i)`.
    #[inline]
    pub fn get(self, i: usize, j: usize) -> T {
        match (i.min(j), i.max(j)) {
            (0, 0) => self.0[0],
            (1, 1) => self.0[1],
            (2, 2) => self.0[2],
            (0, 1) => self.0[3],
            (0, 2) => self.0[4],
            (1, 2) => self.0[5],
            _ => panic!("index out of range: ({i}, {j})"),
        }
    }

    #[inline]
    pub fn trace(self) -> T {
        self.0[0] + self.0[1] + self.0[2]
    }

    /// Frobenius inner product with the factor 2 on off-diagonal components.
    #[inline]
    pub fn inner(self, o: Self) -> T {
        let two = T::of(2.0);
        self.0[0] * o.0[0]
            + self.0[1] * o.0[1]
            + self.0[2] * o.0[2]
            + two * (self.0[3] * o.0[3] + self.0[4] * o.0[4] + self.0[5] * o.0[5])
    }

    #[inline]
    pub fn norm(self) -> T {
        self.inner(self).sqrt()
    }

    #[inline]
    pub fn scale(self, s: T) -> Self {
        let mut c = self.0;
        for v in &mut c {
            *v = *v * s;
        }
        Sym3(c)
    }

    #[inline]
    pub fn add(self, o: Self) -> Self {
        let mut c = self.0;
        for (v, w) in c.iter_mut().zip(o.0) {
            *v = *v + w;
        }
        Sym3(c)
    }

    #[inline]
    pub fn sub(self, o: Self) -> Self {
        let mut c = self.0;
        for (v, w) in c.iter_mut().zip(o.0) {
            *v = *v - w;
        }
        Sym3(c)
    }

    /// Deviatoric part: subtracts the arithmetic mean of the diagonal from
    /// each diagonal entry, so equal diagonals project to exact zeros.
    #[inline]
    pub fn dev(self) -> Self {
        let m = (self.0[0] + self.0[1] + self.0[2]) / T::of(3.0);
        Sym3([
            self.0[0] - m,
            self.0[1] - m,
            self.0[2] - m,
            self.0[3],
            self.0[4],
            self.0[5],
        ])
    }

    /// Upper-left 2×2 minor.
    #[inline]
    pub fn minor(self) -> Sym2<T> {
        Sym2([self.0[0], self.0[1], self.0[3]])
    }

    /// The (13, 23, 33) column as a vector (the part killed by plate limits).
    #[inline]
    pub fn third_column(self) -> Vec3<T> {
        Vec3([self.0[4], self.0[5], self.0[2]])
    }
}

/// Symmetrized tensor product `a ⊙ b = (a ⊗ b + b ⊗ a)/2`.
///
/// Its trace equals `a · b` and its norm is sandwiched between
/// `|a||b|/√2` and `|a||b|`.
#[inline]
pub fn sym_odot<T: Real>(a: Vec3<T>, b: Vec3<T>) -> Sym3<T> {
    let half = T::of(0.5);
    Sym3([
        a.0[0] * b.0[0],
        a.0[1] * b.0[1],
        a.0[2] * b.0[2],
        half * (a.0[0] * b.0[1] + a.0[1] * b.0[0]),
        half * (a.0[0] * b.0[2] + a.0[2] * b.0[0]),
        half * (a.0[1] * b.0[2] + a.0[2] * b.0[1]),
    ])
}

fn check_h<T: Real>(h: T) -> Result<()> {
    if !(h > T::zero()) || !h.is_finite() {
        return Err(Error::InvalidParameter {
            name: "h",
            message: format!("thickness scale must be positive and finite, got {h}"),
        });
    }
    Ok(())
}

/// Entrywise thickness scaling Λ_h: multiplies the 13/23 shear components by
/// 1/h and the 33 component by 1/h²; in-plane components pass through.
pub fn lambda_h<T: Real>(xi: Sym3<T>, h: T) -> Result<Sym3<T>> {
    check_h(h)?;
    let inv = T::one() / h;
    Ok(Sym3([
        xi.0[0],
        xi.0[1],
        xi.0[2] * inv * inv,
        xi.0[3],
        xi.0[4] * inv,
        xi.0[5] * inv,
    ]))
}

/// Inverse scaling Λ_h⁻¹ (entrywise multiplication by h and h²).
pub fn lambda_h_inv<T: Real>(xi: Sym3<T>, h: T) -> Result<Sym3<T>> {
    check_h(h)?;
    Ok(Sym3([
        xi.0[0],
        xi.0[1],
        xi.0[2] * h * h,
        xi.0[3],
        xi.0[4] * h,
        xi.0[5] * h,
    ]))
}

/// Orthonormal basis of the deviatoric (trace-free) symmetric 3×3 tensors
/// under the Frobenius inner product, used for matrix-valued elastic laws and
/// for sampling deviatoric directions.
pub fn deviatoric_basis<T: Real>() -> [Sym3<T>; 5] {
    let z = T::zero();
    let s2 = T::of(2.0).sqrt();
    let s6 = T::of(6.0).sqrt();
    let inv_s2 = T::one() / s2;
    let half_s2 = inv_s2; // 1/√2
    [
        // diag(1, -1, 0)/√2
        Sym3([T::one() / s2, -T::one() / s2, z, z, z, z]),
        // diag(1, 1, -2)/√6
        Sym3([T::one() / s6, T::one() / s6, -T::of(2.0) / s6, z, z, z]),
        // off-diagonal pairs normalized to unit Frobenius norm
        Sym3([z, z, z, half_s2, z, z]),
        Sym3([z, z, z, z, half_s2, z]),
        Sym3([z, z, z, z, z, half_s2]),
    ]
}

/// Expand deviatoric coordinates on [`deviatoric_basis`] into a tensor.
pub fn from_deviatoric_coords<T: Real>(c: [T; 5]) -> Sym3<T> {
    let basis = deviatoric_basis::<T>();
    let mut out = Sym3::zero();
    for (ci, bi) in c.iter().zip(basis.iter()) {
        out = out.add(bi.scale(*ci));
    }
    out
}

/// Project a tensor onto [`deviatoric_basis`] coordinates (drops the trace).
pub fn to_deviatoric_coords<T: Real>(xi: Sym3<T>) -> [T; 5] {
    let basis = deviatoric_basis::<T>();
    let mut c = [T::zero(); 5];
    for (ci, bi) in c.iter_mut().zip(basis.iter()) {
        *ci = xi.inner(*bi);
    }
    c
}
