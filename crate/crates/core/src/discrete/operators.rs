//! Finite-difference discretizations of the model operators on a radial
//! grid, with Dirichlet closure (off-grid values treated as zero).

use std::io::Write;

use crate::discrete::{ComplexMatrix, RadialGrid, C64};
use crate::error::Result;
use crate::generator::ConstructedModel;

/// Central 2-point first difference; exactly antisymmetric.
pub fn first_diff(grid: &RadialGrid) -> ComplexMatrix {
    let n = grid.len();
    let inv2h = 1.0 / (2.0 * grid.spacing());
    let mut d = ComplexMatrix::zeros(n);
    for i in 0..n {
        if i + 1 < n {
            d[(i, i + 1)] = C64::new(inv2h, 0.0);
        }
        if i >= 1 {
            d[(i, i - 1)] = C64::new(-inv2h, 0.0);
        }
    }
    d
}

/// 3-point second difference.
pub fn second_diff(grid: &RadialGrid) -> ComplexMatrix {
    let n = grid.len();
    let invh2 = 1.0 / (grid.spacing() * grid.spacing());
    let mut d = ComplexMatrix::zeros(n);
    for i in 0..n {
        d[(i, i)] = C64::new(-2.0 * invh2, 0.0);
        if i + 1 < n {
            d[(i, i + 1)] = C64::new(invh2, 0.0);
        }
        if i >= 1 {
            d[(i, i - 1)] = C64::new(invh2, 0.0);
        }
    }
    d
}

/// Tridiagonal fill of diag(kin) D2 + diag(drift) D1 + diag(pot).
fn assemble_tridiag(
    grid: &RadialGrid,
    kin: impl Fn(f64) -> Result<f64>,
    drift: impl Fn(f64) -> Result<f64>,
    pot: impl Fn(f64) -> Result<C64>,
) -> Result<ComplexMatrix> {
    let n = grid.len();
    let h = grid.spacing();
    let invh2 = 1.0 / (h * h);
    let inv2h = 1.0 / (2.0 * h);
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        let r = grid.node(i);
        let k = kin(r)?;
        let d = drift(r)?;
        let v = pot(r)?;
        if i >= 1 {
            m[(i, i - 1)] = C64::new(k * invh2 - d * inv2h, 0.0);
        }
        m[(i, i)] = C64::new(-2.0 * k * invh2, 0.0) + v;
        if i + 1 < n {
            m[(i, i + 1)] = C64::new(k * invh2 + d * inv2h, 0.0);
        }
    }
    Ok(m)
}

/// H = diag(-1/2m) D2 + diag(m'/2m^2) D1 + diag(V-tilde + iW), coefficients
/// from the analytic function algebra. Includes the beta shift.
pub fn discretize_h(model: &ConstructedModel, grid: &RadialGrid) -> Result<ComplexMatrix> {
    let kin = model.kinetic_coeff();
    let drift = model.drift_coeff();
    let vt = &model.v_tilde_minus_beta;
    let w = &model.w;
    let beta = model.beta;
    assemble_tridiag(
        grid,
        |r| kin.eval(r),
        |r| drift.eval(r),
        |r| Ok(C64::new(vt.eval(r)? + beta, w.eval(r)?)),
    )
}

/// H - beta I, assembled directly from the beta-free potential so the
/// residual of the eigen-check is bit-for-bit independent of beta.
pub fn discretize_h_shifted(model: &ConstructedModel, grid: &RadialGrid) -> Result<ComplexMatrix> {
    let kin = model.kinetic_coeff();
    let drift = model.drift_coeff();
    let vt = &model.v_tilde_minus_beta;
    let w = &model.w;
    assemble_tridiag(
        grid,
        |r| kin.eval(r),
        |r| drift.eval(r),
        |r| Ok(C64::new(vt.eval(r)?, w.eval(r)?)),
    )
}

/// O = diag(mu) D1 + diag(F + iG).
pub fn discretize_o(model: &ConstructedModel, grid: &RadialGrid) -> Result<ComplexMatrix> {
    let n = grid.len();
    let inv2h = 1.0 / (2.0 * grid.spacing());
    let mut m = ComplexMatrix::zeros(n);
    for i in 0..n {
        let r = grid.node(i);
        let mu = model.mu.eval(r)?;
        let z = C64::new(model.z_re.eval(r)?, model.z_im.eval(r)?);
        if i >= 1 {
            m[(i, i - 1)] = C64::new(-mu * inv2h, 0.0);
        }
        m[(i, i)] = z;
        if i + 1 < n {
            m[(i, i + 1)] = C64::new(mu * inv2h, 0.0);
        }
    }
    Ok(m)
}

/// The two discrete versions of the adjoint intertwiner.
pub struct ODaggerPair {
    /// Discretization of the closed formula -mu d/dr - mu' + conj(Z).
    pub formula: ComplexMatrix,
    /// Exact conjugate transpose of the discrete O matrix.
    pub adjoint: ComplexMatrix,
}

/// O-dagger built two ways: from the formula and as the matrix adjoint of O.
pub fn discretize_o_dagger(model: &ConstructedModel, grid: &RadialGrid) -> Result<ODaggerPair> {
    let n = grid.len();
    let inv2h = 1.0 / (2.0 * grid.spacing());
    let mut formula = ComplexMatrix::zeros(n);
    for i in 0..n {
        let r = grid.node(i);
        let mu = model.mu.eval(r)?;
        let mu_p = model.mu.d1(r)?;
        let z_conj = C64::new(model.z_re.eval(r)?, -model.z_im.eval(r)?);
        if i >= 1 {
            formula[(i, i - 1)] = C64::new(mu * inv2h, 0.0);
        }
        formula[(i, i)] = z_conj - C64::new(mu_p, 0.0);
        if i + 1 < n {
            formula[(i, i + 1)] = C64::new(-mu * inv2h, 0.0);
        }
    }
    let adjoint = discretize_o(model, grid)?.adjoint();
    Ok(ODaggerPair { formula, adjoint })
}

/// Which route produces the discrete metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaMethod {
    /// Exact matrix product adjoint(O) * O; Hermitian PSD by construction.
    Factored,
    /// Direct discretization of the closed second-order expression
    /// -mu^2 d2 - [2 mu mu' + 2i mu G] d1 - [mu Z' + mu' Z - F^2 - G^2].
    Direct,
}

/// Discrete metric operator.
pub fn discretize_eta(
    model: &ConstructedModel,
    grid: &RadialGrid,
    method: EtaMethod,
) -> Result<ComplexMatrix> {
    match method {
        EtaMethod::Factored => {
            let o = discretize_o(model, grid)?;
            o.adjoint().matmul(&o)
        }
        EtaMethod::Direct => {
            let n = grid.len();
            let h = grid.spacing();
            let invh2 = 1.0 / (h * h);
            let inv2h = 1.0 / (2.0 * h);
            let mut m = ComplexMatrix::zeros(n);
            for i in 0..n {
                let r = grid.node(i);
                let mu = model.mu.eval(r)?;
                let mu_p = model.mu.d1(r)?;
                let f = model.z_re.eval(r)?;
                let g = model.z_im.eval(r)?;
                let z = C64::new(f, g);
                let z_p = C64::new(model.z_re.d1(r)?, model.z_im.d1(r)?);
                let a = -mu * mu; // second-order coefficient
                let b = C64::new(-2.0 * mu * mu_p, -2.0 * mu * g); // first-order
                let c = C64::new(f * f + g * g, 0.0) - (z_p * mu + z * mu_p); // zeroth
                if i >= 1 {
                    m[(i, i - 1)] = C64::new(a * invh2, 0.0) - b * inv2h;
                }
                m[(i, i)] = C64::new(-2.0 * a * invh2, 0.0) + c;
                if i + 1 < n {
                    m[(i, i + 1)] = C64::new(a * invh2, 0.0) + b * inv2h;
                }
            }
            Ok(m)
        }
    }
}

/// Samples of the constructed eigenfunction on the grid nodes.
pub fn sample_psi(model: &ConstructedModel, grid: &RadialGrid) -> Result<Vec<C64>> {
    grid.nodes().iter().map(|&r| model.psi(r)).collect()
}

fn fmt_float(x: f64) -> String {
    // 17 significant digits: lossless double round-trip
    format!("{x:.16e}")
}

/// CSV dump: node coordinate column, then one re/im column pair per matrix
/// column, rows ordered by node index.
pub fn write_matrix_csv(
    m: &ComplexMatrix,
    grid: &RadialGrid,
    out: &mut impl Write,
) -> std::io::Result<()> {
    let n = m.dim();
    let mut header = vec!["r".to_string()];
    for j in 0..n {
        header.push(format!("re{j}"));
        header.push(format!("im{j}"));
    }
    writeln!(out, "{}", header.join(","))?;
    for i in 0..n {
        let mut row = vec![fmt_float(grid.node(i))];
        for j in 0..n {
            let v = m[(i, j)];
            row.push(fmt_float(v.re));
            row.push(fmt_float(v.im));
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// CSV dump of a grid vector: r, re, im.
pub fn write_vector_csv(
    v: &[C64],
    grid: &RadialGrid,
    out: &mut impl Write,
) -> std::io::Result<()> {
    writeln!(out, "r,re,im")?;
    for (i, z) in v.iter().enumerate() {
        writeln!(
            out,
            "{},{},{}",
            fmt_float(grid.node(i)),
            fmt_float(z.re),
            fmt_float(z.im)
        )?;
    }
    Ok(())
}
