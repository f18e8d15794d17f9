//! Radial grids, finite-difference discretizations of the model operators,
//! and dense complex matrix arithmetic.

pub mod matrix;
mod operators;

pub use matrix::{axpy, inner, lu_decompose, norm2, scale_vec, ComplexMatrix, LuFactors, C64};
pub use operators::{
    discretize_eta, discretize_h, discretize_h_shifted, discretize_o, discretize_o_dagger,
    first_diff, sample_psi, second_diff, write_matrix_csv, write_vector_csv, EtaMethod,
    ODaggerPair,
};

use crate::error::{Error, Result};

/// Half-line grids live on [r_min, r_max] with r_min > 0; full-line grids on
/// a symmetric [-L, L].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridMode {
    HalfLine,
    FullLine,
}

/// Uniform radial grid.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    spacing: f64,
    mode: GridMode,
}

/// Fixed number of nodes dropped from each end of residual norms; one-sided
/// boundary closure pollutes the two outermost rows.
pub const INTERIOR_MARGIN: usize = 3;

/// Residual norms for models singular at r = 0 also exclude this window
/// around the singular point: the coefficient blow-up there is not a
/// discretization artifact that refinement can remove.
pub const SINGULAR_WINDOW: f64 = 0.5;

pub fn make_grid(r_min: f64, r_max: f64, n: usize, mode: GridMode) -> Result<RadialGrid> {
    if !(r_min.is_finite() && r_max.is_finite()) || r_min >= r_max {
        return Err(Error::spec(format!(
            "grid bounds must satisfy r_min < r_max, got [{r_min}, {r_max}]"
        )));
    }
    if n < 16 {
        return Err(Error::spec(format!("grid needs at least 16 nodes, got {n}")));
    }
    match mode {
        GridMode::HalfLine => {
            if r_min <= 0.0 {
                return Err(Error::spec(format!(
                    "half-line grid needs r_min > 0, got {r_min}"
                )));
            }
        }
        GridMode::FullLine => {
            if r_min != -r_max {
                return Err(Error::spec(format!(
                    "full-line grid needs symmetric bounds, got [{r_min}, {r_max}]"
                )));
            }
        }
    }
    let spacing = (r_max - r_min) / (n - 1) as f64;
    let nodes: Vec<f64> = (0..n).map(|i| r_min + i as f64 * spacing).collect();
    Ok(RadialGrid {
        nodes,
        spacing,
        mode,
    })
}

impl RadialGrid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn node(&self, i: usize) -> f64 {
        self.nodes[i]
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn mode(&self) -> GridMode {
        self.mode
    }

    pub fn r_min(&self) -> f64 {
        self.nodes[0]
    }

    pub fn r_max(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    pub fn has_zero_node(&self) -> bool {
        self.nodes.iter().any(|&x| x == 0.0)
    }

    /// Mask of nodes that participate in interior residual norms: `margin`
    /// nodes are dropped at each end, and for singular models every node
    /// within [`SINGULAR_WINDOW`] of the origin.
    pub fn interior_mask(&self, margin: usize, exclude_singular_window: bool) -> Vec<bool> {
        let n = self.nodes.len();
        let mut mask = vec![true; n];
        for i in 0..margin.min(n) {
            mask[i] = false;
            mask[n - 1 - i] = false;
        }
        if exclude_singular_window {
            for (i, &x) in self.nodes.iter().enumerate() {
                if x.abs() <= SINGULAR_WINDOW {
                    mask[i] = false;
                }
            }
        }
        mask
    }
}

/// 2-norm over the masked entries.
pub fn masked_norm2(v: &[C64], mask: &[bool]) -> f64 {
    v.iter()
        .zip(mask.iter())
        .filter(|(_, &m)| m)
        .map(|(z, _)| z.norm_sqr())
        .sum::<f64>()
        .sqrt()
}
