//! Construction pipeline: from (dimension, angular data, mass, generating
//! function f, beta) to the full non-Hermitian model — effective angular
//! momentum, inverse-mass scale mu, second generator g, intertwiner
//! coefficients, imaginary potential W, effective potential, and the
//! annihilated eigenfunction psi with its real eigenvalue.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::quadrature::CumulativeCache;
use crate::funcspace::{Descriptor, Domain, RadialFunction, DEFAULT_QUAD_TOL};

/// One-dimensional parity sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// Angular data: an angular momentum quantum number for dimension >= 2, a
/// parity for dimension 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Angular {
    Ell(u32),
    Parity(Parity),
}

/// Effective angular momentum: ell + (d-3)/2 for d >= 2; -1 (even) or 0
/// (odd) for d = 1. Half-integer in general, returned as f64.
pub fn effective_ell(dimension: u32, angular: Angular) -> Result<f64> {
    match (dimension, angular) {
        (0, _) => Err(Error::spec("dimension must be >= 1")),
        (1, Angular::Parity(Parity::Even)) => Ok(-1.0),
        (1, Angular::Parity(Parity::Odd)) => Ok(0.0),
        (1, Angular::Ell(_)) => Err(Error::spec(
            "dimension 1 takes a parity, not an angular momentum number",
        )),
        (_, Angular::Parity(_)) => Err(Error::spec(
            "dimension >= 2 takes an angular momentum number, not a parity",
        )),
        (d, Angular::Ell(l)) => Ok((2 * l as i64 + d as i64 - 3) as f64 / 2.0),
    }
}

/// User input defining one family member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecWire", into = "SpecWire")]
pub struct GeneratorSpec {
    pub dimension: u32,
    pub angular: Angular,
    pub beta: f64,
    pub mass: Descriptor,
    pub f: Descriptor,
}

/// Wire format: exactly one of `ell` / `parity` is present.
#[derive(Serialize, Deserialize)]
struct SpecWire {
    dimension: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    ell: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    parity: Option<Parity>,
    #[serde(default)]
    beta: f64,
    mass: Descriptor,
    f: Descriptor,
}

impl TryFrom<SpecWire> for GeneratorSpec {
    type Error = Error;
    fn try_from(w: SpecWire) -> Result<Self> {
        let angular = match (w.ell, w.parity) {
            (Some(l), None) => Angular::Ell(l),
            (None, Some(p)) => Angular::Parity(p),
            (Some(_), Some(_)) => {
                return Err(Error::spec("spec sets both 'ell' and 'parity'"))
            }
            (None, None) => {
                return Err(Error::spec("spec sets neither 'ell' nor 'parity'"))
            }
        };
        let spec = GeneratorSpec {
            dimension: w.dimension,
            angular,
            beta: w.beta,
            mass: w.mass,
            f: w.f,
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl From<GeneratorSpec> for SpecWire {
    fn from(s: GeneratorSpec) -> Self {
        let (ell, parity) = match s.angular {
            Angular::Ell(l) => (Some(l), None),
            Angular::Parity(p) => (None, Some(p)),
        };
        SpecWire {
            dimension: s.dimension,
            ell,
            parity,
            beta: s.beta,
            mass: s.mass,
            f: s.f,
        }
    }
}

impl GeneratorSpec {
    pub fn new(
        dimension: u32,
        angular: Angular,
        beta: f64,
        mass: Descriptor,
        f: Descriptor,
    ) -> Result<Self> {
        let spec = GeneratorSpec {
            dimension,
            angular,
            beta,
            mass,
            f,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        effective_ell(self.dimension, self.angular)?;
        if !self.beta.is_finite() {
            return Err(Error::spec("beta must be finite"));
        }
        Ok(())
    }

    /// The model lives on the full line exactly in dimension 1.
    pub fn full_line(&self) -> bool {
        self.dimension == 1
    }

    /// Short hex fingerprint of the canonical JSON form.
    pub fn fingerprint(&self) -> String {
        use sha2::{Digest, Sha256};
        let json = serde_json::to_string(self).expect("spec serializes");
        let hash = Sha256::digest(json.as_bytes());
        hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

/// Construction options. Defaults reproduce the closed forms of the example
/// catalog.
#[derive(Debug, Clone, Copy)]
pub struct GeneratorOptions {
    /// Absolute tolerance of quadrature-backed values (integrals of f and g).
    pub quad_tol: f64,
    /// Optional positive rescaling of g (the construction fixes the
    /// multiplicative constant to 1).
    pub g_scale: f64,
    /// If |W| stays below this bound on the probe set, W is certified as
    /// identically zero and replaced by the zero function (the model is then
    /// Hermitian to working precision).
    pub w_zero_snap: f64,
}

impl Default for GeneratorOptions {
    fn default() -> Self {
        GeneratorOptions {
            quad_tol: DEFAULT_QUAD_TOL,
            g_scale: 1.0,
            w_zero_snap: 1e-12,
        }
    }
}

/// Everything derived from a [`GeneratorSpec`].
#[derive(Debug, Clone)]
pub struct ConstructedModel {
    pub spec: GeneratorSpec,
    pub ell_d: f64,
    pub mass: RadialFunction,
    pub f: RadialFunction,
    /// mu = sqrt(1/2m)
    pub mu: RadialFunction,
    /// mu^2 = 1/(2m)
    pub mu_sq: RadialFunction,
    pub g: RadialFunction,
    /// Re Z = [-(ell_d+1)/r + f] mu
    pub z_re: RadialFunction,
    /// Im Z = g mu
    pub z_im: RadialFunction,
    /// Imaginary part of the potential, W = -2 mu (g mu)'.
    pub w: RadialFunction,
    /// Effective potential with beta removed.
    pub v_tilde_minus_beta: RadialFunction,
    pub beta: f64,
    /// E = beta + 0i; the construction fixes the imaginary part to zero.
    pub energy: Complex64,
    /// |psi| up to a constant: r^(ell_d+1) exp(-int_0^r f).
    pub psi_modulus: RadialFunction,
    /// True when W was certified zero on the probe set and snapped.
    pub w_is_zero: bool,
    /// sup |W| observed on the probe set before any snapping.
    pub w_probe_sup: f64,
    singular_at_zero: bool,
    quad_tol: f64,
    phase_cache: Arc<CumulativeCache>,
}

impl ConstructedModel {
    /// Whether any model coefficient is singular at r = 0 (the mass
    /// vanishes there, or a field cannot be evaluated at the origin).
    /// Interior residual norms then exclude a window around 0.
    pub fn singular_at_zero(&self) -> bool {
        self.singular_at_zero
    }

    pub fn full_line(&self) -> bool {
        self.spec.full_line()
    }

    /// Effective potential including beta.
    pub fn v_tilde(&self, r: f64) -> Result<f64> {
        Ok(self.v_tilde_minus_beta.eval(r)? + self.beta)
    }

    /// Phase of psi: -int_0^r g, by cached quadrature.
    pub fn psi_phase(&self, r: f64) -> Result<f64> {
        let g = &self.g;
        Ok(-self
            .phase_cache
            .eval(&|z| g.eval(z), 0.0, r, self.quad_tol)?)
    }

    /// Unnormalized psi(r) = modulus * exp(i phase).
    pub fn psi(&self, r: f64) -> Result<Complex64> {
        let m = self.psi_modulus.eval(r)?;
        let phi = self.psi_phase(r)?;
        Ok(Complex64::from_polar(m, phi))
    }

    /// L2 norm of the unnormalized psi over [lower, upper].
    pub fn psi_l2_norm(&self, lower: f64, upper: f64, tol: f64) -> Result<f64> {
        let m = &self.psi_modulus;
        let sq = crate::funcspace::quadrature::integrate(
            |r| Ok(m.eval(r)?.powi(2)),
            lower,
            upper,
            tol,
        )?;
        Ok(sq.sqrt())
    }

    /// Constant c with ||c psi|| = 1 over [lower, upper]; the optional
    /// normalization step of the construction.
    pub fn normalization_constant(&self, lower: f64, upper: f64, tol: f64) -> Result<f64> {
        let n = self.psi_l2_norm(lower, upper, tol)?;
        if n == 0.0 {
            return Err(Error::domain(lower, "psi has zero norm on the interval"));
        }
        Ok(1.0 / n)
    }

    /// Coefficient of the second-derivative term of H: -1/(2m).
    pub fn kinetic_coeff(&self) -> RadialFunction {
        RadialFunction::scale(-1.0, self.mu_sq.clone())
    }

    /// Coefficient of the first-derivative term of H: m'/(2m^2) = -(mu^2)'.
    pub fn drift_coeff(&self) -> RadialFunction {
        RadialFunction::scale(-1.0, self.mu_sq.derivative())
    }

    /// Probe points matched to the model's working interval: log-spaced on
    /// the half-line, mirrored log-spaced on the full line.
    pub fn probe_points(&self, count: usize) -> Vec<f64> {
        probe_points(self.full_line(), count)
    }
}

/// Log-spaced probe set over the default working interval: (0.01, 8] on the
/// half-line; +-(0.01, 6] mirrored on the full line (zero never included).
pub fn probe_points(full_line: bool, count: usize) -> Vec<f64> {
    let count = count.max(2);
    if full_line {
        let half = count.div_ceil(2);
        let pos = log_spaced(0.01, 6.0, half);
        let mut pts: Vec<f64> = pos.iter().map(|&x| -x).collect();
        pts.reverse();
        pts.extend(pos);
        pts
    } else {
        log_spaced(0.01, 8.0, count)
    }
}

fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let count = count.max(2);
    let (la, lb) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (la + (lb - la) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// mu = sqrt(1/2m) with derivatives propagated in closed form. The inverse
/// square root of 2m also handles |x|-type masses on the punctured line.
pub fn mu_from_mass(mass: &RadialFunction) -> RadialFunction {
    RadialFunction::powf(RadialFunction::scale(2.0, mass.clone()), -0.5)
}

/// g = r^{2(ell_d+1)} exp(-2 int_0^r f), with 2(ell_d+1) always an integer.
pub fn build_g(
    f: &RadialFunction,
    ell_d: f64,
    quad_tol: f64,
    g_scale: f64,
) -> Result<RadialFunction> {
    let pg = g_power(ell_d)?;
    let g = RadialFunction::product(
        RadialFunction::monomial(1.0, pg),
        RadialFunction::exp_integral(-2.0, f, quad_tol),
    );
    Ok(RadialFunction::scale(g_scale, g))
}

fn g_power(ell_d: f64) -> Result<i32> {
    let pg = 2.0 * (ell_d + 1.0);
    if pg.fract() != 0.0 || pg < 0.0 {
        return Err(Error::spec(format!(
            "2(ell_d + 1) must be a nonnegative integer, got {pg}"
        )));
    }
    Ok(pg as i32)
}

/// W = -2 mu (g mu)', via the symbolic derivative of the product.
pub fn build_w(g: &RadialFunction, mu: &RadialFunction) -> RadialFunction {
    let gmu = RadialFunction::product(g.clone(), mu.clone());
    RadialFunction::scale(-2.0, RadialFunction::product(mu.clone(), gmu.derivative()))
}

/// Effective potential minus beta, all six summands of the closed
/// expression built term by term:
///   ell_d(ell_d+1)/(2 m r^2) + 2 mu mu' (ell_d+1)/r + mu^2 (f^2 - g^2)
///   - 2 (ell_d+1) f mu^2 / r - 2 mu' mu f - mu^2 f'
pub fn build_v_tilde(
    f: &RadialFunction,
    g: &RadialFunction,
    mu: &RadialFunction,
    mu_sq: &RadialFunction,
    ell_d: f64,
) -> RadialFunction {
    let mu_prime = mu.derivative();
    let centrifugal = ell_d * (ell_d + 1.0);
    let lp1 = ell_d + 1.0;
    let t1 = RadialFunction::scale(
        centrifugal,
        RadialFunction::product(mu_sq.clone(), RadialFunction::monomial(1.0, -2)),
    );
    let t2 = RadialFunction::scale(
        2.0 * lp1,
        RadialFunction::product(
            RadialFunction::product(mu.clone(), mu_prime.clone()),
            RadialFunction::monomial(1.0, -1),
        ),
    );
    let t3 = RadialFunction::product(
        mu_sq.clone(),
        RadialFunction::sum(vec![
            RadialFunction::product(f.clone(), f.clone()),
            RadialFunction::scale(-1.0, RadialFunction::product(g.clone(), g.clone())),
        ]),
    );
    let t4 = RadialFunction::scale(
        -2.0 * lp1,
        RadialFunction::product(
            RadialFunction::monomial(1.0, -1),
            RadialFunction::product(f.clone(), mu_sq.clone()),
        ),
    );
    let t5 = RadialFunction::scale(
        -2.0,
        RadialFunction::product(mu_prime, RadialFunction::product(mu.clone(), f.clone())),
    );
    let t6 = RadialFunction::scale(
        -1.0,
        RadialFunction::product(mu_sq.clone(), f.derivative()),
    );
    RadialFunction::sum(vec![t1, t2, t3, t4, t5, t6])
}

/// The same potential assembled along the intertwining route,
/// F^2 - G^2 - mu' F - mu F', from the already-built coefficients. Kept as
/// an independent algebraic route for cross-checking `build_v_tilde`.
pub fn potential_from_intertwining(
    z_re: &RadialFunction,
    z_im: &RadialFunction,
    mu: &RadialFunction,
) -> RadialFunction {
    RadialFunction::sum(vec![
        RadialFunction::product(z_re.clone(), z_re.clone()),
        RadialFunction::scale(-1.0, RadialFunction::product(z_im.clone(), z_im.clone())),
        RadialFunction::scale(-1.0, RadialFunction::product(mu.derivative(), z_re.clone())),
        RadialFunction::scale(-1.0, RadialFunction::product(mu.clone(), z_re.derivative())),
    ])
}

/// Modulus of psi: r^(ell_d+1) exp(-int_0^r f). The phase is evaluated by
/// quadrature on demand (see [`ConstructedModel::psi_phase`]).
pub fn build_psi_modulus(f: &RadialFunction, ell_d: f64, quad_tol: f64) -> RadialFunction {
    RadialFunction::product(
        RadialFunction::rpow(1.0, ell_d + 1.0),
        RadialFunction::exp_integral(-1.0, f, quad_tol),
    )
}

/// Re Z = [-(ell_d+1)/r + f] mu.
fn build_z_re(f: &RadialFunction, mu: &RadialFunction, ell_d: f64) -> RadialFunction {
    let lp1 = ell_d + 1.0;
    let bracket = if lp1 == 0.0 {
        f.clone()
    } else {
        RadialFunction::sum(vec![RadialFunction::monomial(-lp1, -1), f.clone()])
    };
    RadialFunction::product(bracket, mu.clone())
}

/// Run the whole construction pipeline.
pub fn construct(spec: &GeneratorSpec, options: &GeneratorOptions) -> Result<ConstructedModel> {
    spec.validate().map_err(|e| e.in_stage("spec validation"))?;
    if !(options.quad_tol > 0.0) {
        return Err(Error::spec("quad_tol must be positive").in_stage("spec validation"));
    }
    if !(options.g_scale > 0.0) {
        return Err(Error::spec("g_scale must be positive").in_stage("spec validation"));
    }

    let mass = spec.mass.build().map_err(|e| e.in_stage("mass build"))?;
    let f = spec.f.build().map_err(|e| e.in_stage("f build"))?;
    let ell_d =
        effective_ell(spec.dimension, spec.angular).map_err(|e| e.in_stage("effective ell"))?;

    if spec.full_line() {
        for (name, fun) in [("mass", &mass), ("f", &f)] {
            if fun.domain() == Domain::HalfLine {
                return Err(Error::spec(format!(
                    "{name} is only defined on the half-line but dimension 1 needs the full line"
                ))
                .in_stage("spec validation"));
            }
        }
    }

    let probes = probe_points(spec.full_line(), 512);
    for &r in &probes {
        let m = mass.eval(r).map_err(|e| e.in_stage("mass positivity"))?;
        if m <= 0.0 {
            return Err(
                Error::domain(r, format!("mass must be positive, got {m}"))
                    .in_stage("mass positivity"),
            );
        }
    }

    let mu = mu_from_mass(&mass);
    let mu_sq = RadialFunction::powf(RadialFunction::scale(2.0, mass.clone()), -1.0);
    // g is itself integrated again (the psi phase): its own quadrature must
    // sit well below the phase tolerance, or the outer adaptive pass ends up
    // chasing the inner evaluation noise.
    let g = build_g(&f, ell_d, 1e-2 * options.quad_tol, options.g_scale)
        .map_err(|e| e.in_stage("generator g"))?;
    let z_re = build_z_re(&f, &mu, ell_d);
    let z_im = RadialFunction::product(g.clone(), mu.clone());
    let mut w = build_w(&g, &mu);
    let v_tilde_minus_beta = build_v_tilde(&f, &g, &mu, &mu_sq, ell_d);
    let psi_modulus = build_psi_modulus(&f, ell_d, options.quad_tol);

    // Probe every derived field once; any singular or non-finite value
    // surfaces here with its stage name instead of deep inside a later check.
    let mut w_probe_sup: f64 = 0.0;
    for &r in &probes {
        mu.eval(r).map_err(|e| e.in_stage("mu"))?;
        g.eval(r).map_err(|e| e.in_stage("generator g"))?;
        let wv = w.eval(r).map_err(|e| e.in_stage("potential W"))?;
        w_probe_sup = w_probe_sup.max(wv.abs());
        v_tilde_minus_beta
            .eval(r)
            .map_err(|e| e.in_stage("potential V-tilde"))?;
        psi_modulus.eval(r).map_err(|e| e.in_stage("psi modulus"))?;
    }

    let w_is_zero = w_probe_sup <= options.w_zero_snap;
    if w_is_zero {
        w = RadialFunction::zero();
    }

    // The model counts as singular at the origin when a coefficient cannot
    // be evaluated there (vanishing mass makes mu blow up, centrifugal and
    // mass-gradient terms keep negative powers of r, ...). Residual norms
    // exclude a window around r = 0 for such models, on either line mode.
    let singular_at_zero = [&mu, &w, &v_tilde_minus_beta, &psi_modulus]
        .iter()
        .any(|f| f.eval(0.0).is_err());

    Ok(ConstructedModel {
        spec: spec.clone(),
        ell_d,
        mass,
        f,
        mu,
        mu_sq,
        g,
        z_re,
        z_im,
        w,
        v_tilde_minus_beta,
        beta: spec.beta,
        energy: Complex64::new(spec.beta, 0.0),
        psi_modulus,
        w_is_zero,
        w_probe_sup,
        singular_at_zero,
        quad_tol: options.quad_tol,
        phase_cache: Arc::new(CumulativeCache::new()),
    })
}
