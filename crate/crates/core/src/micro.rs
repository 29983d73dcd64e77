//! Periodic two-phase (or n-phase) microstructure on the unit torus.
//!
//! The unit cell Y = [0,1)² is rasterized into N_y × N_y square cells, each
//! carrying a phase id. Fine-scale phase lookups wrap coordinates around the
//! torus; the in-plane material pattern of the plate is the rescaling
//! `phase_at(x' / ε)`.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tensor::Vec3;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Rasterized periodic phase map on the unit cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseMap {
    resolution: usize,
    n_phases: usize,
    /// Row-major raster: `cells[iy2 * resolution + iy1]`.
    cells: Vec<u8>,
}

/// Generators for the shipped microstructure families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhasePattern {
    /// Stripes normal to y₁ with the given volume fractions (must sum to 1).
    /// `offset` shifts all stripe boundaries along y₁ (mod 1).
    Laminate {
        fractions: Vec<f64>,
        #[serde(default)]
        offset: f64,
    },
    /// Two-phase checkerboard: phase (i + j) mod 2.
    Checkerboard,
    /// Phase-1 disk of the given radius around `center` (periodic distance),
    /// phase 0 elsewhere.
    Inclusion { center: [f64; 2], radius: f64 },
    /// Raster file on disk; see [`PhaseMap::from_raster_file`].
    RasterFile { path: String },
}

/// One axis-aligned facet of the phase boundary inside the unit cell.
///
/// The facet separates the raster cells `cell_i` (phase `phase_i`) and
/// `cell_j` (phase `phase_j`) with `phase_i < phase_j`; the unit normal
/// `normal` points from the `phase_j` side into the `phase_i` side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterfaceFacet {
    pub cell_i: (usize, usize),
    pub cell_j: (usize, usize),
    pub phase_i: u8,
    pub phase_j: u8,
    /// In-plane unit normal embedded with zero third component.
    pub normal: Vec3<f64>,
    /// Facet midpoint in Y coordinates.
    pub midpoint: [f64; 2],
    /// Facet length (= 1/N_y on the uniform raster).
    pub length: f64,
}

/// All interior phase-boundary facets of a raster, periodic wraparound
/// included; every mixed facet appears exactly once.
#[derive(Clone, Debug, Default)]
pub struct InterfaceSet {
    pub facets: Vec<InterfaceFacet>,
}

impl PhaseMap {
    /// Build a phase map from a generator at raster resolution `resolution`.
    pub fn generate(pattern: &PhasePattern, resolution: usize) -> Result<Self> {
        if resolution < 2 {
            return Err(Error::Config(format!(
                "raster resolution must be at least 2, got {resolution}"
            )));
        }
        let n = resolution;
        let mut cells = vec![0u8; n * n];
        match pattern {
            PhasePattern::Laminate { fractions, offset } => {
                if fractions.is_empty() {
                    return Err(Error::Config("laminate needs at least one fraction".into()));
                }
                let sum: f64 = fractions.iter().sum();
                if (sum - 1.0).abs() > 1e-9 || fractions.iter().any(|&f| f <= 0.0) {
                    return Err(Error::Config(format!(
                        "laminate fractions must be positive and sum to 1, got {fractions:?}"
                    )));
                }
                if fractions.len() > u8::MAX as usize {
                    return Err(Error::Config("too many laminate phases".into()));
                }
                // Cumulative stripe boundaries along y₁, shifted by `offset`.
                let mut bounds = Vec::with_capacity(fractions.len());
                let mut acc = 0.0;
                for f in fractions {
                    acc += f;
                    bounds.push(acc);
                }
                for i1 in 0..n {
                    let y1 = wrap_unit((i1 as f64 + 0.5) / n as f64 - offset);
                    let phase = bounds.iter().position(|&b| y1 < b).unwrap_or(fractions.len() - 1);
                    for i2 in 0..n {
                        cells[i2 * n + i1] = phase as u8;
                    }
                }
            }
            PhasePattern::Checkerboard => {
                for i2 in 0..n {
                    for i1 in 0..n {
                        cells[i2 * n + i1] = ((i1 + i2) % 2) as u8;
                    }
                }
            }
            PhasePattern::Inclusion { center, radius } => {
                if !(0.0..0.5).contains(radius) {
                    return Err(Error::Config(format!(
                        "inclusion radius must lie in [0, 0.5), got {radius}"
                    )));
                }
                for i2 in 0..n {
                    for i1 in 0..n {
                        let y = [(i1 as f64 + 0.5) / n as f64, (i2 as f64 + 0.5) / n as f64];
                        let d1 = periodic_dist(y[0], center[0]);
                        let d2 = periodic_dist(y[1], center[1]);
                        if d1 * d1 + d2 * d2 <= radius * radius {
                            cells[i2 * n + i1] = 1;
                        }
                    }
                }
            }
            PhasePattern::RasterFile { path } => {
                return Self::from_raster_file(Path::new(path));
            }
        }
        Self::from_cells(resolution, cells)
    }

    /// Build from an explicit row-major raster (`cells[iy2 * resolution + iy1]`).
    pub fn from_cells(resolution: usize, cells: Vec<u8>) -> Result<Self> {
        if cells.len() != resolution * resolution {
            return Err(Error::Shape(format!(
                "raster has {} cells, expected {}²",
                cells.len(),
                resolution
            )));
        }
        let max = *cells.iter().max().unwrap_or(&0);
        let n_phases = max as usize + 1;
        // Phase ids must form a contiguous range 0..n_phases.
        let mut present = vec![false; n_phases];
        for &c in &cells {
            present[c as usize] = true;
        }
        if let Some(missing) = present.iter().position(|&p| !p) {
            return Err(Error::Config(format!(
                "phase ids must be contiguous: id {missing} is absent but {max} is used"
            )));
        }
        Ok(PhaseMap {
            resolution,
            n_phases,
            cells,
        })
    }

    /// Parse the plain-text raster format: first line `N_y`, then `N_y` rows
    /// of `N_y` whitespace-separated phase ids (row r holds the cells with
    /// y₂ ∈ [r/N_y, (r+1)/N_y)).
    pub fn from_raster_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_raster_text(&text)
    }

    /// Parse raster text; see [`PhaseMap::from_raster_file`].
    pub fn from_raster_text(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let n: usize = tokens
            .next()
            .ok_or_else(|| Error::Config("empty raster file".into()))?
            .parse()
            .map_err(|e| Error::Config(format!("bad raster resolution: {e}")))?;
        if n < 2 {
            return Err(Error::Config(format!("raster resolution must be ≥ 2, got {n}")));
        }
        let mut cells = Vec::with_capacity(n * n);
        for tok in tokens {
            let v: u8 = tok
                .parse()
                .map_err(|e| Error::Config(format!("bad raster entry {tok:?}: {e}")))?;
            cells.push(v);
        }
        if cells.len() != n * n {
            return Err(Error::Config(format!(
                "raster needs {} entries after the header, found {}",
                n * n,
                cells.len()
            )));
        }
        Self::from_cells(n, cells)
    }

    #[inline]
    pub fn resolution(&self) -> usize {
        self.resolution
    }

    #[inline]
    pub fn n_phases(&self) -> usize {
        self.n_phases
    }

    /// Phase of the raster cell with indices (i1, i2), indices taken mod N_y.
    #[inline]
    pub fn phase_of_cell(&self, i1: usize, i2: usize) -> u8 {
        let n = self.resolution;
        self.cells[(i2 % n) * n + (i1 % n)]
    }

    /// Phase at a point of the torus; coordinates wrap around periodically.
    pub fn phase_at<T: Real>(&self, y: [T; 2]) -> u8 {
        let n = self.resolution;
        let idx = |c: T| -> usize {
            let f = wrap_unit(c.lossy());
            ((f * n as f64).floor() as usize).min(n - 1)
        };
        self.phase_of_cell(idx(y[0]), idx(y[1]))
    }

    /// Phase of the ε-periodic rescaling at the plate point x' = (x₁, x₂).
    pub fn eps_phase_at<T: Real>(&self, x: [T; 2], eps: T) -> Result<u8> {
        if !(eps > T::zero()) || !eps.is_finite() {
            return Err(Error::InvalidParameter {
                name: "eps",
                message: format!("period must be positive and finite, got {eps}"),
            });
        }
        Ok(self.phase_at([x[0] / eps, x[1] / eps]))
    }

    /// Volume fraction of each phase (cell counting on the raster).
    pub fn volume_fractions(&self) -> Vec<f64> {
        let mut counts = vec![0usize; self.n_phases];
        for &c in &self.cells {
            counts[c as usize] += 1;
        }
        let total = self.cells.len() as f64;
        counts.into_iter().map(|c| c as f64 / total).collect()
    }

    /// Enumerate the phase-boundary facets, wrapping around the torus.
    pub fn interfaces(&self) -> InterfaceSet {
        let n = self.resolution;
        let dy = 1.0 / n as f64;
        let mut facets = Vec::new();
        for i2 in 0..n {
            for i1 in 0..n {
                let here = self.phase_of_cell(i1, i2);
                // facet towards the +y₁ neighbour (periodic)
                let right = self.phase_of_cell(i1 + 1, i2);
                if right != here {
                    facets.push(oriented_facet(
                        (i1, i2),
                        ((i1 + 1) % n, i2),
                        here,
                        right,
                        Vec3([1.0, 0.0, 0.0]),
                        [(i1 as f64 + 1.0) * dy, (i2 as f64 + 0.5) * dy],
                        dy,
                    ));
                }
                // facet towards the +y₂ neighbour (periodic)
                let up = self.phase_of_cell(i1, i2 + 1);
                if up != here {
                    facets.push(oriented_facet(
                        (i1, i2),
                        (i1, (i2 + 1) % n),
                        here,
                        up,
                        Vec3([0.0, 1.0, 0.0]),
                        [(i1 as f64 + 0.5) * dy, (i2 as f64 + 1.0) * dy],
                        dy,
                    ));
                }
            }
        }
        InterfaceSet { facets }
    }
}

/// Build a facet record with the normal oriented from the larger phase id
/// into the smaller one (the convention fixes which side is "phase i").
#[allow(clippy::too_many_arguments)]
fn oriented_facet(
    cell_a: (usize, usize),
    cell_b: (usize, usize),
    phase_a: u8,
    phase_b: u8,
    axis_towards_b: Vec3<f64>,
    midpoint: [f64; 2],
    length: f64,
) -> InterfaceFacet {
    if phase_a < phase_b {
        // smaller phase sits on the `a` side: normal points from b into a
        InterfaceFacet {
            cell_i: cell_a,
            cell_j: cell_b,
            phase_i: phase_a,
            phase_j: phase_b,
            normal: axis_towards_b.scale(-1.0),
            midpoint,
            length,
        }
    } else {
        InterfaceFacet {
            cell_i: cell_b,
            cell_j: cell_a,
            phase_i: phase_b,
            phase_j: phase_a,
            normal: axis_towards_b,
            midpoint,
            length,
        }
    }
}

#[inline]
fn wrap_unit(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

#[inline]
fn periodic_dist(a: f64, b: f64) -> f64 {
    let d = (wrap_unit(a) - wrap_unit(b)).abs();
    d.min(1.0 - d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laminate_half_half() {
        // 50/50 stripes at N_y = 4: y₁ ∈ [0, 0.5) is phase 0, rest phase 1.
        let pm = PhaseMap::generate(
            &PhasePattern::Laminate {
                fractions: vec![0.5, 0.5],
                offset: 0.0,
            },
            4,
        )
        .unwrap();
        assert_eq!(pm.phase_at([0.1, 0.9]), 0);
        assert_eq!(pm.phase_at([0.4, 0.2]), 0);
        assert_eq!(pm.phase_at([0.6, 0.2]), 1);
        assert_eq!(pm.phase_at([0.95, 0.5]), 1);
        assert_eq!(pm.volume_fractions(), vec![0.5, 0.5]);
    }

    #[test]
    fn laminate_offset_shifts_boundaries() {
        let pm = PhaseMap::generate(
            &PhasePattern::Laminate {
                fractions: vec![0.5, 0.5],
                offset: 0.25,
            },
            8,
        )
        .unwrap();
        // boundaries now at y₁ = 0.25 and 0.75
        assert_eq!(pm.phase_at([0.3, 0.0]), 0);
        assert_eq!(pm.phase_at([0.2, 0.0]), 1);
        assert_eq!(pm.phase_at([0.8, 0.0]), 1);
    }

    #[test]
    fn laminate_rejects_bad_fractions() {
        assert!(PhaseMap::generate(
            &PhasePattern::Laminate {
                fractions: vec![0.5, 0.6],
                offset: 0.0
            },
            4
        )
        .is_err());
    }

    #[test]
    fn checkerboard_interfaces_count() {
        // N_y = 2 checkerboard: 8 facets counting periodic wraparound.
        let pm = PhaseMap::generate(&PhasePattern::Checkerboard, 2).unwrap();
        let ifaces = pm.interfaces();
        assert_eq!(ifaces.facets.len(), 8);
        for f in &ifaces.facets {
            assert!(f.phase_i < f.phase_j);
            assert_eq!(f.normal.norm(), 1.0);
            assert_eq!(f.normal.0[2], 0.0);
            assert_eq!(f.length, 0.5);
        }
    }

    #[test]
    fn uniform_map_has_no_interfaces() {
        let pm = PhaseMap::from_cells(4, vec![0; 16]).unwrap();
        assert!(pm.interfaces().facets.is_empty());
        assert_eq!(pm.n_phases(), 1);
    }

    #[test]
    fn inclusion_volume_fraction() {
        // radius 0.25 disk: area π/16, accurate to a raster cell layer.
        let pm = PhaseMap::generate(
            &PhasePattern::Inclusion {
                center: [0.5, 0.5],
                radius: 0.25,
            },
            64,
        )
        .unwrap();
        let fractions = pm.volume_fractions();
        let expected = std::f64::consts::PI / 16.0;
        assert!(
            (fractions[1] - expected).abs() <= 2.0 / 64.0,
            "inclusion fraction {} vs {}",
            fractions[1],
            expected
        );
    }

    #[test]
    fn phase_lookup_wraps_periodically() {
        let pm = PhaseMap::generate(&PhasePattern::Checkerboard, 2).unwrap();
        assert_eq!(pm.phase_at([0.1, 0.1]), pm.phase_at([1.1, -0.9]));
        assert_eq!(pm.phase_at([-0.4, 0.1]), pm.phase_at([0.6, 0.1]));
    }

    #[test]
    fn eps_rescaling_and_errors() {
        let pm = PhaseMap::generate(
            &PhasePattern::Laminate {
                fractions: vec![0.5, 0.5],
                offset: 0.0,
            },
            8,
        )
        .unwrap();
        // ε = 0.25: the pattern repeats every 0.25 in x₁.
        assert_eq!(pm.eps_phase_at([0.05, 0.0], 0.25).unwrap(), 0);
        assert_eq!(pm.eps_phase_at([0.20, 0.0], 0.25).unwrap(), 1);
        assert_eq!(pm.eps_phase_at([0.30, 0.0], 0.25).unwrap(), 0);
        assert!(pm.eps_phase_at([0.0, 0.0], 0.0).is_err());
        assert!(pm.eps_phase_at([0.0, 0.0], -0.1).is_err());
    }

    #[test]
    fn raster_text_round_trip() {
        let text = "2\n0 1\n1 0\n";
        let pm = PhaseMap::from_raster_text(text).unwrap();
        let reference = PhaseMap::generate(&PhasePattern::Checkerboard, 2).unwrap();
        assert_eq!(pm, reference);
    }

    #[test]
    fn raster_text_rejects_gaps_and_shape() {
        // non-contiguous ids
        assert!(PhaseMap::from_raster_text("2\n0 2\n2 0\n").is_err());
        // wrong cell count
        assert!(PhaseMap::from_raster_text("2\n0 1 1\n").is_err());
        // empty
        assert!(PhaseMap::from_raster_text("").is_err());
    }
}
