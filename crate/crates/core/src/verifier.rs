//! Residual checks of the operator identities the construction guarantees,
//! plus report assembly.
//!
//! Grid-based checks use interior-margin norms (and a fixed exclusion
//! window around r = 0 for singular models); their pass thresholds scale as
//! C h^p with constants fixed from a refinement study over the example
//! catalog. Analytic checks (consistency ODE, coefficient identities) have
//! fixed thresholds.

use serde::{Deserialize, Serialize};

use crate::catalog::{CatalogEntry, NormAudit};
use crate::discrete::{
    discretize_eta, discretize_h, discretize_h_shifted, discretize_o, inner, masked_norm2,
    norm2, sample_psi, EtaMethod, GridMode, RadialGrid, C64, INTERIOR_MARGIN, SINGULAR_WINDOW,
};
use crate::eigensolve::{eigen_decomposition, hermitian_smallest_eigenpair};
use crate::error::{Error, Result};
use crate::funcspace::RadialFunction;
use crate::generator::{construct, ConstructedModel, GeneratorOptions, GeneratorSpec};

/// Divide-by-zero guard in normalized inner products.
const INNER_EPS: f64 = 1e-300;

/// Grid-aware thresholds, threshold(h) = C h^p. The constants come from a
/// refinement study over the example catalog (stiffest non-oscillatory
/// entry sets C, with a factor ~10 margin).
pub struct ThresholdLaw {
    pub c: f64,
    pub p: f64,
}

impl ThresholdLaw {
    pub fn at(&self, h: f64) -> f64 {
        self.c * h.powf(self.p)
    }
}

// Refinement study over the built-in example set (half-line [0.05, 8.05],
// full line [-6.01, 6.01], h in {0.02, 0.01, 0.005} and coarser for the
// matrix-product checks), residual / h^2 saturates at:
//
//   annihilation:  0.12 .. 4.1    (stiffest: d=3 cosh-mass, l=0)
//   eigen:         0.04 .. 3.5e3  (cosh^2 kinetic coefficient at the right
//                                  edge against the decaying psi)
//   intertwining:  0 .. 8.4e-6    (operator-norm normalized)
//   eta gap:       0 .. 0.16      (coarsest grids; decays ~h^4)
//
// Constants below carry a factor ~6-10 margin on the stiffest entry. The
// d=3, l=2 cosh-mass member is excluded from the study: its phase gradient
// reaches ~200 and no default-scale grid resolves it (see README).
pub const ANNIHILATION_LAW: ThresholdLaw = ThresholdLaw { c: 40.0, p: 2.0 };
pub const EIGEN_LAW: ThresholdLaw = ThresholdLaw { c: 2.0e4, p: 2.0 };
pub const INTERTWINING_LAW: ThresholdLaw = ThresholdLaw { c: 1.0e-4, p: 2.0 };
pub const ETA_FACTORIZATION_LAW: ThresholdLaw = ThresholdLaw { c: 1.0, p: 2.0 };

pub const CONSISTENCY_ODE_THRESHOLD: f64 = 1e-10;
pub const F_FORMULA_THRESHOLD: f64 = 1e-12;
pub const V_ROUTES_THRESHOLD: f64 = 1e-10;
pub const W_IDENTITY_THRESHOLD: f64 = 1e-10;
pub const G_ODE_THRESHOLD: f64 = 1e-10;
pub const PSI_LOG_DERIV_THRESHOLD: f64 = 1e-10;
pub const ETA_PSD_THRESHOLD: f64 = 1e-10;
pub const ETA_OVERLAP_THRESHOLD: f64 = 0.01;
pub const ETA_ORTHOGONALITY_THRESHOLD: f64 = 1e-6;

/// One executed check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl CheckRecord {
    fn new(name: &str, residual: f64, threshold: f64) -> Self {
        CheckRecord {
            name: name.to_string(),
            residual,
            threshold,
            pass: residual <= threshold,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSummary {
    pub r_min: f64,
    pub r_max: f64,
    pub n: usize,
    pub spacing: f64,
    pub mode: String,
}

impl GridSummary {
    fn of(grid: &RadialGrid) -> Self {
        GridSummary {
            r_min: grid.r_min(),
            r_max: grid.r_max(),
            n: grid.len(),
            spacing: grid.spacing(),
            mode: match grid.mode() {
                GridMode::HalfLine => "half-line".to_string(),
                GridMode::FullLine => "full-line".to_string(),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Spec fingerprint.
    pub model: String,
    pub grid: GridSummary,
    pub checks: Vec<CheckRecord>,
    pub notes: Vec<String>,
    /// Unix seconds; metadata only, never part of check data.
    pub timestamp: u64,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Batch of smooth compactly supported probe vectors: unit 2-norm bumps
/// centered at distinct interior nodes, vanishing on the margins (and on
/// the singular window when the model is singular at the origin).
pub struct TestBatch {
    pub vectors: Vec<Vec<C64>>,
}

/// cos^8 bump: compactly supported on |t| < 1 with seven continuous
/// derivatives, all of moderate size, so O(h^2) stencils reach their
/// asymptotic regime immediately. (The classic exp(-1/(1-t^2)) bump hides
/// ~1e5-sized high derivatives near its support edge and needs far finer
/// grids before refinement studies behave.)
fn bump(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (std::f64::consts::FRAC_PI_2 * t).cos().powi(8)
    }
}

impl TestBatch {
    pub fn new(grid: &RadialGrid, singular_at_zero: bool, k: usize) -> Result<TestBatch> {
        let k = k.max(1);
        // usable sub-intervals: inside the margins, outside the singular window
        let margin_span = (INTERIOR_MARGIN + 1) as f64 * grid.spacing();
        let lo = grid.r_min() + margin_span;
        let hi = grid.r_max() - margin_span;
        if !(lo < hi) {
            return Err(Error::spec("grid too small for a test batch"));
        }
        // Keep the bumps in the central part of the interval: probing the
        // identity next to the r_min coefficient blow-up measures nothing
        // but the locally unresolved truncation error.
        let span = hi - lo;
        let lo = lo + 0.15 * span;
        let hi = hi - 0.05 * span;
        let intervals: Vec<(f64, f64)> = if singular_at_zero && lo < 0.0 && hi > 0.0 {
            vec![(lo, -SINGULAR_WINDOW), (SINGULAR_WINDOW, hi)]
        } else {
            vec![(lo, hi)]
        };
        let mut centers_widths = Vec::with_capacity(k);
        let per = k.div_ceil(intervals.len());
        for (a, b) in &intervals {
            let span = b - a;
            if span <= 4.0 * grid.spacing() {
                return Err(Error::spec("usable interval too small for a test batch"));
            }
            // wide overlapping bumps: distinct centers, low derivative scale
            let width = (0.45 * span).min(span / 2.0);
            for j in 0..per {
                if centers_widths.len() == k {
                    break;
                }
                let c = a + width + (span - 2.0 * width) * (j as f64 + 0.5) / per as f64;
                centers_widths.push((c, width));
            }
        }
        let mut vectors = Vec::with_capacity(centers_widths.len());
        for (idx, (center, width)) in centers_widths.into_iter().enumerate() {
            let phase_rate = 0.4 * idx as f64;
            let mut v: Vec<C64> = grid
                .nodes()
                .iter()
                .map(|&r| {
                    let b = bump((r - center) / width);
                    C64::from_polar(b, phase_rate * (r - center))
                })
                .collect();
            let nv = norm2(&v);
            if nv == 0.0 {
                return Err(Error::spec("degenerate test-batch vector"));
            }
            for z in v.iter_mut() {
                *z /= nv;
            }
            vectors.push(v);
        }
        Ok(TestBatch { vectors })
    }
}

fn interior_mask(model: &ConstructedModel, grid: &RadialGrid) -> Vec<bool> {
    grid.interior_mask(INTERIOR_MARGIN, model.singular_at_zero())
}

/// ||O psi_h|| / ||psi_h|| over interior nodes.
pub fn check_annihilation(model: &ConstructedModel, grid: &RadialGrid) -> Result<CheckRecord> {
    let o = discretize_o(model, grid)?;
    let psi = sample_psi(model, grid)?;
    let res = o.apply(&psi)?;
    let mask = interior_mask(model, grid);
    let ratio = masked_norm2(&res, &mask) / masked_norm2(&psi, &mask).max(INNER_EPS);
    Ok(CheckRecord::new(
        "annihilation",
        ratio,
        ANNIHILATION_LAW.at(grid.spacing()),
    ))
}

/// ||(H - beta) psi_h|| / ||psi_h|| over interior nodes; bit-for-bit
/// independent of beta by construction of the shifted operator.
pub fn check_eigen(model: &ConstructedModel, grid: &RadialGrid) -> Result<CheckRecord> {
    let h_shifted = discretize_h_shifted(model, grid)?;
    let psi = sample_psi(model, grid)?;
    let res = h_shifted.apply(&psi)?;
    let mask = interior_mask(model, grid);
    let ratio = masked_norm2(&res, &mask) / masked_norm2(&psi, &mask).max(INNER_EPS);
    Ok(CheckRecord::new(
        "eigen_residual",
        ratio,
        EIGEN_LAW.at(grid.spacing()),
    ))
}

/// max over the batch of ||(eta H - H^dagger eta) v|| / (||eta H||_inf ||v||),
/// with the factored eta.
pub fn check_intertwining(
    model: &ConstructedModel,
    grid: &RadialGrid,
    batch: &TestBatch,
) -> Result<CheckRecord> {
    let h = discretize_h(model, grid)?;
    let eta = discretize_eta(model, grid, EtaMethod::Factored)?;
    let eta_h = eta.matmul(&h)?;
    let h_dag_eta = h.adjoint().matmul(&eta)?;
    let diff = eta_h.sub(&h_dag_eta)?;
    let scale = eta_h.max_row_sum().max(INNER_EPS);
    let mask = interior_mask(model, grid);
    let mut worst: f64 = 0.0;
    for v in &batch.vectors {
        let dv = diff.apply(v)?;
        let r = masked_norm2(&dv, &mask) / (scale * norm2(v).max(INNER_EPS));
        worst = worst.max(r);
    }
    Ok(CheckRecord::new(
        "intertwining",
        worst,
        INTERTWINING_LAW.at(grid.spacing()),
    ))
}

/// Action gap between the direct and factored eta discretizations on the
/// batch, normalized by ||eta||_inf.
pub fn check_eta_factorization(
    model: &ConstructedModel,
    grid: &RadialGrid,
    batch: &TestBatch,
) -> Result<CheckRecord> {
    let factored = discretize_eta(model, grid, EtaMethod::Factored)?;
    let direct = discretize_eta(model, grid, EtaMethod::Direct)?;
    let diff = direct.sub(&factored)?;
    let scale = factored.max_row_sum().max(INNER_EPS);
    let mask = interior_mask(model, grid);
    let mut worst: f64 = 0.0;
    for v in &batch.vectors {
        let dv = diff.apply(v)?;
        let r = masked_norm2(&dv, &mask) / (scale * norm2(v).max(INNER_EPS));
        worst = worst.max(r);
    }
    Ok(CheckRecord::new(
        "eta_factorization",
        worst,
        ETA_FACTORIZATION_LAW.at(grid.spacing()),
    ))
}

/// Pointwise defect of the first-order-coefficient consistency equation
/// (the alpha = 0 branch),
///   F^2 - mu' F - mu F' = (1/2)[mu^2 G''/G - mu mu''] - (mu^4/(4G^2))[(G/mu)']^2,
/// relative to the largest participating term, over a log-spaced probe set.
///
/// The quartic mu power in the last term is required for position-dependent
/// mass: with it the equation is an identity of the construction (the
/// quadratic power printed in the source derivation only covers constant
/// mass).
pub fn check_consistency_ode(model: &ConstructedModel) -> Result<CheckRecord> {
    let probes = model.probe_points(512);
    let mut worst: f64 = 0.0;
    for &r in &probes {
        let f = model.z_re.eval(r)?;
        let f_p = model.z_re.d1(r)?;
        let g = model.z_im.eval(r)?;
        let g_p = model.z_im.d1(r)?;
        let g_pp = model.z_im.d2(r)?;
        let mu = model.mu.eval(r)?;
        let mu_p = model.mu.d1(r)?;
        let mu_pp = model.mu.d2(r)?;

        let t1 = f * f;
        let t2 = -mu_p * f;
        let t3 = -mu * f_p;
        let t4 = -0.5 * mu * mu * g_pp / g;
        let t5 = 0.5 * mu * mu_pp;
        // (G/mu)' from the quotient rule on the evaluated pieces
        let ratio_p = (g_p * mu - g * mu_p) / (mu * mu);
        let t6 = mu.powi(4) / (4.0 * g * g) * ratio_p * ratio_p;

        let defect = t1 + t2 + t3 + t4 + t5 + t6;
        let scale = [t1, t2, t3, t4, t5, t6]
            .iter()
            .map(|t| t.abs())
            .fold(1.0f64, f64::max);
        worst = worst.max(defect.abs() / scale);
    }
    Ok(CheckRecord::new(
        "consistency_ode",
        worst,
        CONSISTENCY_ODE_THRESHOLD,
    ))
}

/// Pointwise defect of F = (mu' G - mu G')/(2G) (zero-imaginary-energy
/// branch), relative with an absolute floor of 1.
pub fn check_f_formula(model: &ConstructedModel) -> Result<CheckRecord> {
    let probes = model.probe_points(512);
    let mut worst: f64 = 0.0;
    for &r in &probes {
        let f = model.z_re.eval(r)?;
        let g = model.z_im.eval(r)?;
        let g_p = model.z_im.d1(r)?;
        let mu = model.mu.eval(r)?;
        let mu_p = model.mu.d1(r)?;
        let rhs = (mu_p * g - mu * g_p) / (2.0 * g);
        let scale = f.abs().max(rhs.abs()).max(1.0);
        worst = worst.max((f - rhs).abs() / scale);
    }
    Ok(CheckRecord::new("f_formula", worst, F_FORMULA_THRESHOLD))
}

/// The potential assembled along the intertwining route
/// (F^2 - G^2 - mu' F - mu F') against the term-by-term effective-potential
/// display, relative to the largest participating term.
pub fn check_v_routes(model: &ConstructedModel) -> Result<CheckRecord> {
    let alt = crate::generator::potential_from_intertwining(&model.z_re, &model.z_im, &model.mu);
    let probes = model.probe_points(512);
    let mut worst: f64 = 0.0;
    for &r in &probes {
        let a = model.v_tilde_minus_beta.eval(r)?;
        let b = alt.eval(r)?;
        let scale = model
            .v_tilde_minus_beta
            .term_scale(r)?
            .max(alt.term_scale(r)?)
            .max(1.0);
        worst = worst.max((a - b).abs() / scale);
    }
    Ok(CheckRecord::new("v_routes", worst, V_ROUTES_THRESHOLD))
}

/// The stored imaginary potential against the display it came from,
/// W = -2 mu (g mu)'. The identity is the first consequence of the
/// intertwining relation, so any tampering with W (the perturbation hook
/// included) trips this check at working precision.
pub fn check_w_identity(model: &ConstructedModel) -> Result<CheckRecord> {
    let route = crate::generator::build_w(&model.g, &model.mu);
    let probes = model.probe_points(512);
    let mut worst: f64 = 0.0;
    for &r in &probes {
        let a = model.w.eval(r)?;
        let b = route.eval(r)?;
        let scale = a.abs().max(b.abs()).max(1.0);
        worst = worst.max((a - b).abs() / scale);
    }
    Ok(CheckRecord::new(
        "intertwining_w_identity",
        worst,
        W_IDENTITY_THRESHOLD,
    ))
}

/// g'/g - 2(ell_d+1)/r + 2f = 0 on the probe set.
pub fn check_g_ode(model: &ConstructedModel) -> Result<CheckRecord> {
    let probes = model.probe_points(512);
    let lp1 = model.ell_d + 1.0;
    let mut worst: f64 = 0.0;
    for &r in &probes {
        let g = model.g.eval(r)?;
        let g_p = model.g.d1(r)?;
        let f = model.f.eval(r)?;
        let defect = g_p / g - 2.0 * lp1 / r + 2.0 * f;
        let scale = (g_p / g).abs().max((2.0 * lp1 / r).abs()).max(2.0 * f.abs()).max(1.0);
        worst = worst.max(defect.abs() / scale);
    }
    Ok(CheckRecord::new("g_ode", worst, G_ODE_THRESHOLD))
}

/// -modulus'/modulus = F/mu pointwise, and phase increments match fresh
/// quadrature of g (the cached and direct integration paths agree).
pub fn check_psi_log_derivative(model: &ConstructedModel) -> Result<CheckRecord> {
    let probes = model.probe_points(128);
    let mut worst: f64 = 0.0;
    for &r in &probes {
        let m = model.psi_modulus.eval(r)?;
        let m_p = model.psi_modulus.d1(r)?;
        let f = model.z_re.eval(r)?;
        let mu = model.mu.eval(r)?;
        let lhs = -m_p / m;
        let rhs = f / mu;
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        worst = worst.max((lhs - rhs).abs() / scale);
    }
    // phase increment vs direct quadrature across a handful of spans
    let spans = [(0.1, 1.0), (1.0, 2.5), (0.5, 4.0)];
    for (a, b) in spans {
        let (a, b) = if model.full_line() { (-a, b) } else { (a, b) };
        let inc = model.psi_phase(b)? - model.psi_phase(a)?;
        let direct = -model.g.antiderivative(a, b, 1e-13)?;
        let scale = inc.abs().max(direct.abs()).max(1.0);
        worst = worst.max((inc - direct).abs() / scale);
    }
    Ok(CheckRecord::new(
        "psi_log_derivative",
        worst,
        PSI_LOG_DERIV_THRESHOLD,
    ))
}

/// Whether the sampled eigenfunction is compatible with the Dirichlet
/// closure: the near-null correspondence between the metric kernel and psi
/// only holds when psi vanishes at the walls (non-normalizable members
/// carry O(1) boundary amplitude and the factored metric's smallest
/// eigenvector adapts to the closure instead).
pub fn psi_decays_on(model: &ConstructedModel, grid: &RadialGrid) -> Result<bool> {
    let psi = sample_psi(model, grid)?;
    let peak = psi.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    let edge = psi[0].norm().max(psi[psi.len() - 1].norm());
    Ok(edge <= 1e-3 * peak)
}

/// Positive semidefiniteness of the factored metric and overlap of its
/// near-null eigenvector with sampled psi.
pub fn check_eta_psd(
    model: &ConstructedModel,
    grid: &RadialGrid,
) -> Result<(CheckRecord, CheckRecord)> {
    let eta = discretize_eta(model, grid, EtaMethod::Factored)?;
    let (lambda_min, v) = hermitian_smallest_eigenpair(&eta)?;
    let scale = eta.max_row_sum().max(INNER_EPS);
    let psd = CheckRecord::new(
        "eta_psd_min_eig",
        (-lambda_min).max(0.0) / scale,
        ETA_PSD_THRESHOLD,
    );
    let psi = sample_psi(model, grid)?;
    let overlap = inner(&v, &psi).norm() / (norm2(&v) * norm2(&psi)).max(INNER_EPS);
    let ov = CheckRecord::new("eta_null_overlap", 1.0 - overlap, ETA_OVERLAP_THRESHOLD);
    Ok((psd, ov))
}

/// Off-diagonal eta inner products of well-separated eigenpairs of the
/// discretized H, eta-normalized. `sep_tol` is relative to the
/// classification scale.
pub fn check_eta_orthogonality(
    model: &ConstructedModel,
    grid: &RadialGrid,
    sep_tol: f64,
) -> Result<CheckRecord> {
    let h = discretize_h(model, grid)?;
    let eta = discretize_eta(model, grid, EtaMethod::Factored)?;
    let dec = eigen_decomposition(&h, 1e-12, 0)?;
    let n = dec.values.len();
    let scale = dec
        .values
        .iter()
        .map(|z| z.norm())
        .fold(1.0f64, f64::max);
    let sep = sep_tol * scale;

    let eta_vecs: Vec<Vec<C64>> = dec
        .vectors
        .iter()
        .map(|v| eta.apply(v))
        .collect::<Result<_>>()?;
    let eta_norms: Vec<f64> = dec
        .vectors
        .iter()
        .zip(eta_vecs.iter())
        .map(|(v, ev)| inner(v, ev).re.max(0.0).sqrt())
        .collect();

    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let li = dec.values[i];
            let lj = dec.values[j];
            if (li.conj() - lj).norm() <= sep || (lj.conj() - li).norm() <= sep {
                continue;
            }
            let prod = inner(&dec.vectors[i], &eta_vecs[j]).norm();
            let denom = eta_norms[i] * eta_norms[j] + INNER_EPS;
            worst = worst.max(prod / denom);
        }
    }
    Ok(CheckRecord::new(
        "eta_orthogonality",
        worst,
        ETA_ORTHOGONALITY_THRESHOLD,
    ))
}

/// Quadrature of |c psi|^2 with the printed constant c; report-only.
pub fn check_normalization(entry: &CatalogEntry, model: &ConstructedModel) -> Result<Vec<String>> {
    let mut notes = Vec::new();
    let (Some(c), Some(audit)) = (entry.psi_constant, entry.norm_audit) else {
        return Ok(notes);
    };
    let cutoff = entry.decay.cutoff();
    let lower = if model.full_line() { -cutoff } else { 1e-8 };
    let modulus = &model.psi_modulus;
    let norm_sq = c * c
        * crate::funcspace::quadrature::integrate(
            |r| Ok(modulus.eval(r)?.powi(2)),
            lower,
            cutoff,
            1e-10,
        )?;
    match audit {
        NormAudit::Unit => notes.push(format!(
            "normalization (report-only): constant {c} -> squared norm {norm_sq:.3} ({norm_sq:.6})"
        )),
        NormAudit::Flagged(expected) => notes.push(format!(
            "normalization FLAG (report-only): constant {c} -> squared norm {norm_sq:.3}, expected ~{expected:.4}, not 1"
        )),
    }
    Ok(notes)
}

/// Options for [`full_report`].
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub batch_size: usize,
    /// Run the inverse-iteration PSD/overlap checks (O(n^3) factorization).
    pub run_eta_psd: bool,
    /// Run the QR-based eta-orthogonality check on a grid of this size
    /// (same interval); `None` disables it.
    pub orthogonality_n: Option<usize>,
    /// Separation tolerance (relative to spectral scale) for orthogonality
    /// pairs.
    pub sep_tol: f64,
    /// Test hook: add this constant to W before discretizing.
    pub perturb_w: Option<f64>,
    /// Generator options (quadrature tolerance etc).
    pub generator: GeneratorOptions,
    /// Catalog context for the report-only normalization audit.
    pub entry: Option<crate::catalog::EntryId>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            batch_size: 8,
            run_eta_psd: true,
            orthogonality_n: None,
            sep_tol: 1e-3,
            perturb_w: None,
            generator: GeneratorOptions::default(),
            entry: None,
        }
    }
}

fn unix_now() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Run every enabled check and assemble the report. Deterministic for fixed
/// spec, grid and options (the timestamp is metadata only).
pub fn full_report(
    spec: &GeneratorSpec,
    grid: &RadialGrid,
    options: &VerifyOptions,
) -> Result<VerificationReport> {
    spec.validate()?;
    let mut model = construct(spec, &options.generator)?;
    let mut notes = Vec::new();
    if model.w_is_zero {
        notes.push(format!(
            "W certified zero on the probe set (sup |W| = {:.3e}) and snapped to the zero function",
            model.w_probe_sup
        ));
    }
    if let Some(dw) = options.perturb_w {
        model = model.with_w_perturbation(dw);
        notes.push(format!("W perturbed by {dw} (test hook)"));
    }

    let batch = TestBatch::new(grid, model.singular_at_zero(), options.batch_size)?;

    let mut checks = vec![
        check_consistency_ode(&model)?,
        check_f_formula(&model)?,
        check_v_routes(&model)?,
        check_w_identity(&model)?,
        check_g_ode(&model)?,
        check_psi_log_derivative(&model)?,
        check_annihilation(&model, grid)?,
        check_eigen(&model, grid)?,
        check_intertwining(&model, grid, &batch)?,
        check_eta_factorization(&model, grid, &batch)?,
    ];
    if options.run_eta_psd {
        let (psd, overlap) = check_eta_psd(&model, grid)?;
        checks.push(psd);
        if psi_decays_on(&model, grid)? {
            checks.push(overlap);
        } else {
            notes.push(
                "psi does not vanish at the grid boundary; the near-null \
                 overlap check is not applicable (reported value would \
                 track the closure, not the construction)"
                    .to_string(),
            );
        }
    }
    if let Some(n_orth) = options.orthogonality_n {
        let coarse = crate::discrete::make_grid(grid.r_min(), grid.r_max(), n_orth, grid.mode())?;
        checks.push(check_eta_orthogonality(&model, &coarse, options.sep_tol)?);
    }

    if let Some(id) = options.entry {
        let entry = crate::catalog::get_example(id);
        notes.extend(check_normalization(&entry, &model)?);
        for n in &entry.notes {
            notes.push(format!("catalog: {n}"));
        }
        if let Some(phase) = entry.phase_display {
            notes.push(format!("catalog phase display (report-only): {phase}"));
        }
    }

    Ok(VerificationReport {
        model: spec.fingerprint(),
        grid: GridSummary::of(grid),
        checks,
        notes,
        timestamp: unix_now(),
    })
}

impl ConstructedModel {
    /// Clone with W shifted by a constant; verification test hook.
    pub fn with_w_perturbation(&self, dw: f64) -> ConstructedModel {
        let mut out = self.clone();
        out.w = RadialFunction::sum(vec![out.w.clone(), RadialFunction::constant(dw)]);
        out.w_is_zero = false;
        out
    }
}







#[cfg(test)]
mod ortho_band_tests {
    use super::*;
    use crate::catalog::{get_example, EntryId};
    use crate::discrete::make_grid;
    use crate::eigensolve::eigen_decomposition;

    #[test]
    #[ignore]
    fn probe_ortho_resolved_band() {
        let model = get_example(EntryId::E2I).construct().unwrap();
        let grid = make_grid(-6.0, 6.0, 400, GridMode::FullLine).unwrap();
        let h = discretize_h(&model, &grid).unwrap();
        let o = discretize_o(&model, &grid).unwrap();
        let eta = discretize_eta(&model, &grid, EtaMethod::Factored).unwrap();
        let dec = eigen_decomposition(&h, 1e-12, 0).unwrap();
        let n = dec.values.len();
        let o_norm = o.max_row_sum();
        let eta_vecs: Vec<Vec<C64>> = dec.vectors.iter().map(|v| eta.apply(v).unwrap()).collect();
        let eta_norms: Vec<f64> = dec
            .vectors
            .iter()
            .zip(eta_vecs.iter())
            .map(|(v, ev)| inner(v, ev).re.max(0.0).sqrt())
            .collect();
        let scale = dec.values.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
        let floor = 1e-8 * o_norm;
        for band in [1e-4, 1e-3, 1e-2, 0.1] {
            for sep_abs in [1.0, 1e-3 * band * scale] {
                let mut w: f64 = 0.0;
                let mut cnt = 0usize;
                for i in 0..n {
                    if dec.values[i].norm() > band * scale || eta_norms[i] <= floor {
                        continue;
                    }
                    for j in (i + 1)..n {
                        if dec.values[j].norm() > band * scale || eta_norms[j] <= floor {
                            continue;
                        }
                        if (dec.values[i].conj() - dec.values[j]).norm() <= sep_abs {
                            continue;
                        }
                        let p = inner(&dec.vectors[i], &eta_vecs[j]).norm()
                            / (eta_norms[i] * eta_norms[j] + 1e-300);
                        cnt += 1;
                        if p > w {
                            w = p;
                        }
                    }
                }
                println!("band |lam|<={band:.0e}*scale sep>{sep_abs:.2e}: pairs={cnt} worst p={w:.3e}");
            }
        }
    }
}
