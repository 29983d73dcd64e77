//! Tensor-grid finite-element layer for the plate domain Ω = ω × I with
//! ω = [0,L₁]×[0,L₂] and I = (−1/2, 1/2): displacement and cell-tensor
//! fields, the scaled symmetric gradient, Kirchhoff–Love embeddings,
//! thickness moments, and time-dependent Dirichlet data on the lateral
//! boundary Γ_D = ∂ω × I.
//!
//! Cells are trilinear hexahedra with one-point (centroid) quadrature, so
//! strains, plastic fields and stresses are all cell-constant.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tensor::{lambda_h, Sym2, Sym3, Vec2, Vec3};
use serde::{Deserialize, Serialize};

/// Uniform tensor-product mesh of Ω = [0,L₁]×[0,L₂] × (−1/2, 1/2).
///
/// The mesh lives on the fixed rescaled domain; the thickness parameter `h`
/// is carried along but enters only through the scaled operators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlateMesh<T> {
    /// In-plane extent (L₁, L₂).
    pub extent: [T; 2],
    /// Cells per direction (N₁, N₂, N₃).
    pub n: [usize; 3],
    /// Thickness parameter h > 0.
    pub h: T,
}

impl<T: Real> PlateMesh<T> {
    pub fn new(extent: [T; 2], n: [usize; 3], h: T) -> Result<Self> {
        for (name, l) in [("L1", extent[0]), ("L2", extent[1])] {
            if !(l > T::zero()) || !l.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    message: format!("extent must be positive, got {l}"),
                });
            }
        }
        if n[0] < 1 || n[1] < 1 {
            return Err(Error::InvalidParameter {
                name: "resolution",
                message: format!("need at least one cell per in-plane direction, got {n:?}"),
            });
        }
        if n[2] < 2 {
            return Err(Error::InvalidParameter {
                name: "layers",
                message: format!("need N3 >= 2 thickness layers, got {}", n[2]),
            });
        }
        if !(h > T::zero()) || !h.is_finite() {
            return Err(Error::InvalidParameter {
                name: "h",
                message: format!("thickness parameter must be positive, got {h}"),
            });
        }
        Ok(Self { extent, n, h })
    }

    /// Grid spacings (Δx₁, Δx₂, Δx₃) with Δx₃ = 1/N₃.
    #[inline]
    pub fn dx(&self) -> [T; 3] {
        [
            self.extent[0] / T::of_usize(self.n[0]),
            self.extent[1] / T::of_usize(self.n[1]),
            T::one() / T::of_usize(self.n[2]),
        ]
    }

    /// Volume of one cell.
    #[inline]
    pub fn cell_volume(&self) -> T {
        let d = self.dx();
        d[0] * d[1] * d[2]
    }

    #[inline]
    pub fn node_counts(&self) -> [usize; 3] {
        [self.n[0] + 1, self.n[1] + 1, self.n[2] + 1]
    }

    #[inline]
    pub fn num_nodes(&self) -> usize {
        let c = self.node_counts();
        c[0] * c[1] * c[2]
    }

    #[inline]
    pub fn num_cells(&self) -> usize {
        self.n[0] * self.n[1] * self.n[2]
    }

    /// Nodes per ω slice.
    #[inline]
    pub fn num_omega_nodes(&self) -> usize {
        (self.n[0] + 1) * (self.n[1] + 1)
    }

    #[inline]
    pub fn node_index(&self, i: usize, j: usize, k: usize) -> usize {
        debug_assert!(i <= self.n[0] && j <= self.n[1] && k <= self.n[2]);
        (k * (self.n[1] + 1) + j) * (self.n[0] + 1) + i
    }

    #[inline]
    pub fn omega_node_index(&self, i: usize, j: usize) -> usize {
        j * (self.n[0] + 1) + i
    }

    #[inline]
    pub fn cell_index(&self, i: usize, j: usize, k: usize) -> usize {
        debug_assert!(i < self.n[0] && j < self.n[1] && k < self.n[2]);
        (k * self.n[1] + j) * self.n[0] + i
    }

    #[inline]
    pub fn cell_coords(&self, cell: usize) -> [usize; 3] {
        let i = cell % self.n[0];
        let j = (cell / self.n[0]) % self.n[1];
        let k = cell / (self.n[0] * self.n[1]);
        [i, j, k]
    }

    /// Physical coordinates of node (i, j, k); x₃ runs over [−1/2, 1/2].
    #[inline]
    pub fn node_coords(&self, i: usize, j: usize, k: usize) -> Vec3<T> {
        let d = self.dx();
        Vec3::new(
            d[0] * T::of_usize(i),
            d[1] * T::of_usize(j),
            -T::of(0.5) + d[2] * T::of_usize(k),
        )
    }

    /// Centroid of cell (i, j, k).
    #[inline]
    pub fn cell_centroid(&self, i: usize, j: usize, k: usize) -> Vec3<T> {
        let d = self.dx();
        Vec3::new(
            d[0] * (T::of_usize(i) + T::of(0.5)),
            d[1] * (T::of_usize(j) + T::of(0.5)),
            -T::of(0.5) + d[2] * (T::of_usize(k) + T::of(0.5)),
        )
    }

    /// Midpoint x₃ value of layer k ∈ 0..N₃.
    #[inline]
    pub fn layer_x3(&self, k: usize) -> T {
        -T::of(0.5) + (T::of_usize(k) + T::of(0.5)) / T::of_usize(self.n[2])
    }

    /// True on Γ_D = ∂ω × I (lateral boundary nodes; top/bottom faces are free).
    #[inline]
    pub fn is_dirichlet(&self, i: usize, j: usize, _k: usize) -> bool {
        i == 0 || i == self.n[0] || j == 0 || j == self.n[1]
    }

    /// Centroid-quadrature gradient weight of corner `(a,b,c)` ∈ {0,1}³:
    /// the trilinear shape-function gradient at the cell center.
    #[inline]
    pub fn corner_gradient(&self, a: usize, b: usize, c: usize) -> Vec3<T> {
        let d = self.dx();
        let quarter = T::of(0.25);
        let sgn = |s: usize| if s == 1 { T::one() } else { -T::one() };
        Vec3::new(
            sgn(a) * quarter / d[0],
            sgn(b) * quarter / d[1],
            sgn(c) * quarter / d[2],
        )
    }
}

/// Nodal vector field on the full (N₁+1)(N₂+1)(N₃+1) grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DisplacementField<T> {
    pub n: [usize; 3],
    pub values: Vec<Vec3<T>>,
}

impl<T: Real> DisplacementField<T> {
    pub fn zeros(mesh: &PlateMesh<T>) -> Self {
        Self {
            n: mesh.n,
            values: vec![Vec3::zero(); mesh.num_nodes()],
        }
    }

    pub fn matches(&self, mesh: &PlateMesh<T>) -> bool {
        self.n == mesh.n && self.values.len() == mesh.num_nodes()
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            n: self.n,
            values: self.values.iter().map(|v| v.scale(s)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.add(*b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.sub(*b))
                .collect(),
        }
    }
}

/// Cell-constant symmetric-tensor field over Ω.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellTensorField<T> {
    pub n: [usize; 3],
    pub values: Vec<Sym3<T>>,
    /// When set, entries are asserted deviatoric by the consumers that
    /// require it (plastic fields).
    pub deviatoric: bool,
}

impl<T: Real> CellTensorField<T> {
    pub fn zeros(mesh: &PlateMesh<T>, deviatoric: bool) -> Self {
        Self {
            n: mesh.n,
            values: vec![Sym3::zero(); mesh.num_cells()],
            deviatoric,
        }
    }

    pub fn matches(&self, mesh: &PlateMesh<T>) -> bool {
        self.n == mesh.n && self.values.len() == mesh.num_cells()
    }

    /// Largest |tr| over cells; used to enforce the deviatoric flag.
    pub fn max_trace(&self) -> T {
        self.values
            .iter()
            .map(|s| s.trace().abs())
            .fold(T::zero(), |a, b| a.max(b))
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.sub(*b))
                .collect(),
            deviatoric: self.deviatoric && other.deviatoric,
        }
    }
}

/// Discrete symmetric scaled gradient E_h u = sym[∇′u | (1/h)∂₃u] per cell,
/// trilinear shape functions with centroid quadrature.
///
/// Note: this is the operator with a single 1/h on the whole third column.
/// The solver's strain parametrization is instead Λ_h applied to the
/// unscaled gradient, i.e. `lambda_h(assemble_Eh(mesh, u, 1), h)` — the two
/// agree on fields whose third displacement component is x₃-independent
/// only in the 33 slot, and are related by E_h(diag(1,1,h)·u) = Λ_h E u.
#[allow(non_snake_case)]
pub fn assemble_Eh<T: Real>(
    mesh: &PlateMesh<T>,
    u: &DisplacementField<T>,
    h: T,
) -> Result<CellTensorField<T>> {
    if !(h > T::zero()) || !h.is_finite() {
        return Err(Error::InvalidParameter {
            name: "h",
            message: format!("scaled gradient needs h > 0, got {h}"),
        });
    }
    if !u.matches(mesh) {
        return Err(Error::Shape(format!(
            "displacement grid {:?} does not match mesh {:?}",
            u.n, mesh.n
        )));
    }
    let mut out = CellTensorField::zeros(mesh, false);
    let inv_h = T::one() / h;
    for cell in 0..mesh.num_cells() {
        let [i, j, k] = mesh.cell_coords(cell);
        // gradient matrix G[r][d] = ∂_d u_r at the centroid
        let mut g = [[T::zero(); 3]; 3];
        for corner in 0..8usize {
            let (a, b, c) = (corner & 1, (corner >> 1) & 1, (corner >> 2) & 1);
            let node = mesh.node_index(i + a, j + b, k + c);
            let w = mesh.corner_gradient(a, b, c);
            let uc = u.values[node];
            for r in 0..3 {
                for d in 0..3 {
                    g[r][d] += uc.0[r] * w.0[d];
                }
            }
        }
        for r in 0..3 {
            g[r][2] *= inv_h;
        }
        let half = T::of(0.5);
        out.values[cell] = Sym3([
            g[0][0],
            g[1][1],
            g[2][2],
            half * (g[0][1] + g[1][0]),
            half * (g[0][2] + g[2][0]),
            half * (g[1][2] + g[2][1]),
        ]);
    }
    Ok(out)
}

/// The solver-side scaled strain Λ_h E u: the unscaled discrete symmetric
/// gradient with the Λ_h entry scaling (1/h on the 13/23 slots, 1/h² on 33).
pub fn assemble_scaled_strain<T: Real>(
    mesh: &PlateMesh<T>,
    u: &DisplacementField<T>,
    h: T,
) -> Result<CellTensorField<T>> {
    let mut e = assemble_Eh(mesh, u, T::one())?;
    for v in &mut e.values {
        *v = lambda_h(*v, h)?;
    }
    Ok(e)
}

/// First-derivative stencil on a 1D node line: central differences at
/// interior nodes, second-order one-sided at the ends (first-order when the
/// line has only two nodes).
fn node_slopes_1d<T: Real>(f: &[T], dx: T) -> Vec<T> {
    let n = f.len();
    let mut out = vec![T::zero(); n];
    if n < 2 {
        return out;
    }
    let two = T::of(2.0);
    if n == 2 {
        let s = (f[1] - f[0]) / dx;
        out[0] = s;
        out[1] = s;
        return out;
    }
    for i in 1..n - 1 {
        out[i] = (f[i + 1] - f[i - 1]) / (two * dx);
    }
    out[0] = (-T::of(3.0) * f[0] + T::of(4.0) * f[1] - f[2]) / (two * dx);
    out[n - 1] = (T::of(3.0) * f[n - 1] - T::of(4.0) * f[n - 2] + f[n - 3]) / (two * dx);
    out
}

/// Nodal partial derivatives (∂₁f, ∂₂f) of an ω-grid scalar field.
pub fn omega_node_gradients<T: Real>(
    mesh: &PlateMesh<T>,
    f: &[T],
) -> Result<(Vec<T>, Vec<T>)> {
    let (m1, m2) = (mesh.n[0] + 1, mesh.n[1] + 1);
    if f.len() != m1 * m2 {
        return Err(Error::Shape(format!(
            "omega field has {} nodes, expected {}",
            f.len(),
            m1 * m2
        )));
    }
    let d = mesh.dx();
    let mut d1 = vec![T::zero(); m1 * m2];
    let mut d2 = vec![T::zero(); m1 * m2];
    let mut line = Vec::with_capacity(m1.max(m2));
    for j in 0..m2 {
        line.clear();
        line.extend((0..m1).map(|i| f[j * m1 + i]));
        let s = node_slopes_1d(&line, d[0]);
        for i in 0..m1 {
            d1[j * m1 + i] = s[i];
        }
    }
    for i in 0..m1 {
        line.clear();
        line.extend((0..m2).map(|j| f[j * m1 + i]));
        let s = node_slopes_1d(&line, d[1]);
        for j in 0..m2 {
            d2[j * m1 + i] = s[j];
        }
    }
    Ok((d1, d2))
}

/// Kirchhoff–Love embedding: from in-plane ū and deflection u₃ on the ω node
/// grid, build u(x′,x₃) = (ū₁ − x₃∂₁u₃, ū₂ − x₃∂₂u₃, u₃) on the full grid.
///
/// Derivatives of u₃ use central differences (second-order one-sided at the
/// ω boundary), so the discrete symmetric gradient of the result has
/// vanishing i3 rows at interior cells exactly for u₃ with vanishing third
/// differences (e.g. quadratic deflections), and to O(Δx²) otherwise.
pub fn kl_embed<T: Real>(
    mesh: &PlateMesh<T>,
    ubar: &[Vec2<T>],
    u3: &[T],
) -> Result<DisplacementField<T>> {
    let m = mesh.num_omega_nodes();
    if ubar.len() != m || u3.len() != m {
        return Err(Error::Shape(format!(
            "KL fields have {} / {} nodes, expected {}",
            ubar.len(),
            u3.len(),
            m
        )));
    }
    let (d1, d2) = omega_node_gradients(mesh, u3)?;
    let mut out = DisplacementField::zeros(mesh);
    for k in 0..=mesh.n[2] {
        let x3 = mesh.node_coords(0, 0, k).0[2];
        for j in 0..=mesh.n[1] {
            for i in 0..=mesh.n[0] {
                let w = mesh.omega_node_index(i, j);
                out.values[mesh.node_index(i, j, k)] = Vec3::new(
                    ubar[w].0[0] - x3 * d1[w],
                    ubar[w].0[1] - x3 * d2[w],
                    u3[w],
                );
            }
        }
    }
    Ok(out)
}

/// Zeroth/first thickness moments and the orthogonal remainder of a
/// cell-constant Sym2 field over Ω: f = f̄ + x₃ f̂ + f⊥.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentTriple<T> {
    pub n: [usize; 3],
    /// f̄ per ω cell (layer average).
    pub zeroth: Vec<Sym2<T>>,
    /// f̂ per ω cell, with the exact discrete normalizer 1/(Σ x₃ᵢ² Δx₃)
    /// replacing the continuum factor 12 so that f = x₃ g gives f̂ = g at
    /// every resolution.
    pub first: Vec<Sym2<T>>,
    /// Remainder per Ω cell.
    pub perp: Vec<Sym2<T>>,
}

/// Discrete moment normalizer 1/(Σ x₃ᵢ² Δx₃) for N₃ uniform layers; the
/// continuum value is 12 (from ∫ x₃² dx₃ = 1/12) and the discrete sum
/// converges to it from below as N₃ grows.
pub fn moment_normalizer<T: Real>(n3: usize) -> T {
    let dx3 = T::one() / T::of_usize(n3);
    let mut s = T::zero();
    for k in 0..n3 {
        let x3 = -T::of(0.5) + (T::of_usize(k) + T::of(0.5)) * dx3;
        s += x3 * x3 * dx3;
    }
    T::one() / s
}

/// Decompose a Sym2 cell field over Ω into thickness moments.
///
/// Requires an even number of layers N₃ ≥ 2 (uniform, symmetric about 0);
/// anything else is an unsupported grid.
pub fn moments<T: Real>(f: &[Sym2<T>], n: [usize; 3]) -> Result<MomentTriple<T>> {
    let n_omega = n[0] * n[1];
    let n3 = n[2];
    if f.len() != n_omega * n3 {
        return Err(Error::Shape(format!(
            "field has {} cells, expected {}",
            f.len(),
            n_omega * n3
        )));
    }
    if n3 < 2 || n3 % 2 != 0 {
        return Err(Error::UnsupportedGrid(format!(
            "moments need an even number of layers >= 2, got {n3}"
        )));
    }
    let dx3 = T::one() / T::of_usize(n3);
    let kappa = moment_normalizer::<T>(n3);
    let mut zeroth = vec![Sym2::zero(); n_omega];
    let mut first = vec![Sym2::zero(); n_omega];
    for k in 0..n3 {
        let x3 = -T::of(0.5) + (T::of_usize(k) + T::of(0.5)) * dx3;
        for c in 0..n_omega {
            let v = f[k * n_omega + c];
            zeroth[c] = zeroth[c].add(v.scale(dx3));
            first[c] = first[c].add(v.scale(x3 * dx3 * kappa));
        }
    }
    let mut perp = vec![Sym2::zero(); f.len()];
    for k in 0..n3 {
        let x3 = -T::of(0.5) + (T::of_usize(k) + T::of(0.5)) * dx3;
        for c in 0..n_omega {
            perp[k * n_omega + c] =
                f[k * n_omega + c].sub(zeroth[c]).sub(first[c].scale(x3));
        }
    }
    Ok(MomentTriple {
        n,
        zeroth,
        first,
        perp,
    })
}

/// Time-dependent Kirchhoff–Love boundary datum: nodal fields (w̄₁, w̄₂, w̄₃)
/// on the ω grid, embedded over Ω once at construction, and a piecewise-
/// linear time profile. The datum at time t is `profile(t) ×` the embedded
/// base field.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryDatum<T> {
    pub wbar1: Vec<T>,
    pub wbar2: Vec<T>,
    pub w3: Vec<T>,
    /// Nodal slopes (∂₁w̄₃, ∂₂w̄₃) used by the embedding and by clamped
    /// boundary conditions of the homogenized model.
    pub slope1: Vec<T>,
    pub slope2: Vec<T>,
    /// KL embedding of (w̄, w̄₃) over the full grid at profile value 1.
    pub base: DisplacementField<T>,
    /// Piecewise-linear profile samples (t, value); t strictly increasing,
    /// starting at 0.
    pub profile: Vec<(T, T)>,
}

impl<T: Real> BoundaryDatum<T> {
    /// Sample closures on the ω node grid and embed.
    pub fn from_functions(
        mesh: &PlateMesh<T>,
        f1: impl Fn(T, T) -> T,
        f2: impl Fn(T, T) -> T,
        f3: impl Fn(T, T) -> T,
        profile: Vec<(T, T)>,
    ) -> Result<Self> {
        let (m1, m2) = (mesh.n[0] + 1, mesh.n[1] + 1);
        let mut wbar1 = vec![T::zero(); m1 * m2];
        let mut wbar2 = vec![T::zero(); m1 * m2];
        let mut w3 = vec![T::zero(); m1 * m2];
        for j in 0..m2 {
            for i in 0..m1 {
                let p = mesh.node_coords(i, j, 0);
                let w = mesh.omega_node_index(i, j);
                wbar1[w] = f1(p.0[0], p.0[1]);
                wbar2[w] = f2(p.0[0], p.0[1]);
                w3[w] = f3(p.0[0], p.0[1]);
            }
        }
        Self::from_fields(mesh, wbar1, wbar2, w3, profile)
    }

    /// Build from explicit nodal fields.
    pub fn from_fields(
        mesh: &PlateMesh<T>,
        wbar1: Vec<T>,
        wbar2: Vec<T>,
        w3: Vec<T>,
        profile: Vec<(T, T)>,
    ) -> Result<Self> {
        let m = mesh.num_omega_nodes();
        if wbar1.len() != m || wbar2.len() != m || w3.len() != m {
            return Err(Error::Shape(format!(
                "datum fields must have {m} omega nodes"
            )));
        }
        validate_profile(&profile)?;
        let (slope1, slope2) = omega_node_gradients(mesh, &w3)?;
        let ubar: Vec<Vec2<T>> = wbar1
            .iter()
            .zip(&wbar2)
            .map(|(a, b)| Vec2::new(*a, *b))
            .collect();
        let base = kl_embed(mesh, &ubar, &w3)?;
        Ok(Self {
            wbar1,
            wbar2,
            w3,
            slope1,
            slope2,
            base,
            profile,
        })
    }

    /// Final time of the profile.
    pub fn t_end(&self) -> T {
        self.profile.last().map(|(t, _)| *t).unwrap_or(T::zero())
    }

    /// Piecewise-linear profile value; t must lie in [0, T].
    pub fn profile_at(&self, t: T) -> Result<T> {
        let t_end = self.t_end();
        let tol = T::of(1e-12) * (T::one() + t_end.abs());
        if t < -tol || t > t_end + tol {
            return Err(Error::TimeOutOfRange {
                t: t.lossy(),
                t_end: t_end.lossy(),
            });
        }
        let t = t.max(T::zero()).min(t_end);
        for w in self.profile.windows(2) {
            let (t0, v0) = w[0];
            let (t1, v1) = w[1];
            if t <= t1 {
                let s = (t - t0) / (t1 - t0);
                return Ok(v0 + s * (v1 - v0));
            }
        }
        Ok(self.profile.last().unwrap().1)
    }

    /// Datum value at a node at time t.
    pub fn eval_node(
        &self,
        mesh: &PlateMesh<T>,
        t: T,
        i: usize,
        j: usize,
        k: usize,
    ) -> Result<Vec3<T>> {
        let s = self.profile_at(t)?;
        Ok(self.base.values[mesh.node_index(i, j, k)].scale(s))
    }

    /// Full-field lifting at time t: the datum evaluated at every node.
    pub fn lift(&self, t: T) -> Result<DisplacementField<T>> {
        let s = self.profile_at(t)?;
        Ok(self.base.scale(s))
    }
}

fn validate_profile<T: Real>(profile: &[(T, T)]) -> Result<()> {
    if profile.len() < 2 {
        return Err(Error::Config(
            "time profile needs at least two samples".into(),
        ));
    }
    if profile[0].0 != T::zero() {
        return Err(Error::Config("time profile must start at t = 0".into()));
    }
    for w in profile.windows(2) {
        if !(w[1].0 > w[0].0) {
            return Err(Error::Config(
                "time profile samples must be strictly increasing in t".into(),
            ));
        }
    }
    for (t, v) in profile {
        if !t.is_finite() || !v.is_finite() {
            return Err(Error::Config("time profile has non-finite samples".into()));
        }
    }
    Ok(())
}
