//! The worked examples as executable golden data: generator specs together
//! with independently coded closed forms.
//!
//! Closed forms are hand-transcribed expression trees and never share code
//! with the construction pipeline; `crosscheck` measures the two against
//! each other. Closed-form phase expressions are kept as display strings
//! only (several disagree with direct quadrature of g, so phase comparisons
//! are report-only; see the notes on the affected entries).

use std::fmt;

use crate::error::{Error, Result};
use crate::funcspace::{Descriptor, RadialFunction};
use crate::generator::{construct, ConstructedModel, GeneratorOptions, GeneratorSpec, Parity};

/// Identifier of a catalog entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntryId {
    E1A,
    E1B,
    E1C,
    E1D,
    E2I,
    E2II,
    E2III,
    E2IV,
    FityoReduction,
    Ref14Reduction,
}

impl EntryId {
    pub const ALL: [EntryId; 10] = [
        EntryId::E1A,
        EntryId::E1B,
        EntryId::E1C,
        EntryId::E1D,
        EntryId::E2I,
        EntryId::E2II,
        EntryId::E2III,
        EntryId::E2IV,
        EntryId::FityoReduction,
        EntryId::Ref14Reduction,
    ];

    /// The eight entries with closed forms.
    pub const CLOSED_FORM: [EntryId; 8] = [
        EntryId::E1A,
        EntryId::E1B,
        EntryId::E1C,
        EntryId::E1D,
        EntryId::E2I,
        EntryId::E2II,
        EntryId::E2III,
        EntryId::E2IV,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            EntryId::E1A => "1A",
            EntryId::E1B => "1B",
            EntryId::E1C => "1C",
            EntryId::E1D => "1D",
            EntryId::E2I => "2i",
            EntryId::E2II => "2ii",
            EntryId::E2III => "2iii",
            EntryId::E2IV => "2iv",
            EntryId::FityoReduction => "fityo-reduction",
            EntryId::Ref14Reduction => "ref14-reduction",
        }
    }
}

impl fmt::Display for EntryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for EntryId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_lowercase().replace('-', "");
        Ok(match norm.as_str() {
            "1a" => EntryId::E1A,
            "1b" => EntryId::E1B,
            "1c" => EntryId::E1C,
            "1d" => EntryId::E1D,
            "2i" => EntryId::E2I,
            "2ii" => EntryId::E2II,
            "2iii" => EntryId::E2III,
            "2iv" => EntryId::E2IV,
            "fityoreduction" | "fityo" => EntryId::FityoReduction,
            "ref14reduction" | "ref14" => EntryId::Ref14Reduction,
            _ => return Err(Error::spec(format!("unknown catalog id '{s}'"))),
        })
    }
}

/// How fast the entry's wavefunction decays; sets the truncation cutoff for
/// improper normalization integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decay {
    /// Gaussian-type decay; tails below double precision past r = 12.
    Gauss,
    /// sech-type (exponential) decay; cutoff 40.
    Sech,
}

impl Decay {
    pub fn cutoff(self) -> f64 {
        match self {
            Decay::Gauss => 12.0,
            Decay::Sech => 40.0,
        }
    }
}

/// What the normalization audit expects for the entry's printed psi prefactor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormAudit {
    /// The constant yields unit norm (within 2e-3).
    Unit,
    /// The constant yields this value instead of 1; flagged, not failed.
    Flagged(f64),
}

/// Closed forms transcribed from the worked examples.
#[derive(Debug, Clone)]
pub struct ClosedForms {
    pub g: RadialFunction,
    pub w: RadialFunction,
    pub v_tilde_minus_beta: RadialFunction,
    pub psi_modulus: RadialFunction,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: EntryId,
    pub title: &'static str,
    pub spec: GeneratorSpec,
    pub closed: Option<ClosedForms>,
    /// The psi prefactor printed in the worked example.
    pub psi_constant: Option<f64>,
    /// Closed-form phase as printed, for documentation only.
    pub phase_display: Option<&'static str>,
    pub decay: Decay,
    pub norm_audit: Option<NormAudit>,
    pub notes: Vec<String>,
}

impl CatalogEntry {
    pub fn construct(&self) -> Result<ConstructedModel> {
        construct(&self.spec, &GeneratorOptions::default())
    }

    pub fn construct_with(&self, options: &GeneratorOptions) -> Result<ConstructedModel> {
        construct(&self.spec, options)
    }
}

fn mono(c: f64, p: i32) -> RadialFunction {
    RadialFunction::monomial(c, p)
}

fn gauss(c: f64, a: f64) -> RadialFunction {
    RadialFunction::gauss(c, a)
}

fn sech(c: f64, p: i32) -> RadialFunction {
    RadialFunction::sech_pow(c, p)
}

fn prod(a: RadialFunction, b: RadialFunction) -> RadialFunction {
    RadialFunction::product(a, b)
}

fn sum(parts: Vec<RadialFunction>) -> RadialFunction {
    RadialFunction::sum(parts)
}

/// sinh(r) cosh(r) as tanh * cosh^2.
fn sinh_cosh() -> RadialFunction {
    prod(RadialFunction::scaled_tanh(1.0, 1.0), sech(1.0, -2))
}

fn spec(
    dimension: u32,
    angular: crate::generator::Angular,
    mass: Descriptor,
    f: Descriptor,
) -> GeneratorSpec {
    GeneratorSpec::new(dimension, angular, 0.0, mass, f).expect("catalog spec is valid")
}

fn mass_square() -> Descriptor {
    Descriptor::leaf("monomial", &[0.5, 2.0])
}

fn f_linear() -> Descriptor {
    Descriptor::leaf("monomial", &[1.0, 1.0])
}

fn mass_sech() -> Descriptor {
    Descriptor::leaf("sech_pow", &[0.5, 2.0])
}

fn f_tanh() -> Descriptor {
    Descriptor::leaf("scaled_tanh", &[0.5, 1.0])
}

use crate::generator::Angular::{Ell, Parity as Par};

/// Fetch one entry by id.
pub fn get_example(id: EntryId) -> CatalogEntry {
    match id {
        EntryId::E1A => CatalogEntry {
            id,
            title: "d=3, l=0, m = r^2/2, f = r",
            spec: spec(3, Ell(0), mass_square(), f_linear()),
            closed: Some(ClosedForms {
                g: prod(mono(1.0, 2), gauss(1.0, 1.0)),
                w: sum(vec![
                    prod(mono(-2.0, -1), gauss(1.0, 1.0)),
                    prod(mono(4.0, 1), gauss(1.0, 1.0)),
                ]),
                v_tilde_minus_beta: sum(vec![
                    mono(-1.0, -2),
                    mono(-2.0, -4),
                    prod(mono(-1.0, 2), gauss(1.0, 2.0)),
                    RadialFunction::constant(1.0),
                ]),
                psi_modulus: prod(mono(1.0, 1), gauss(1.0, 0.5)),
            }),
            psi_constant: Some(1.502251088929885), // (4/sqrt(pi))^(1/2)
            phase_display: Some("-(r/2) e^{-r^2} + (sqrt(pi)/4) erf(r)"),
            decay: Decay::Gauss,
            norm_audit: Some(NormAudit::Unit),
            notes: vec![],
        },
        EntryId::E1B => CatalogEntry {
            id,
            title: "d=3, l=1, m = r^2/2, f = r",
            spec: spec(3, Ell(1), mass_square(), f_linear()),
            closed: Some(ClosedForms {
                g: prod(mono(1.0, 4), gauss(1.0, 1.0)),
                // 2r(2r^2 - 3) e^{-r^2}
                w: sum(vec![
                    prod(mono(4.0, 3), gauss(1.0, 1.0)),
                    prod(mono(-6.0, 1), gauss(1.0, 1.0)),
                ]),
                v_tilde_minus_beta: sum(vec![
                    mono(-3.0, -2),
                    mono(-2.0, -4),
                    prod(mono(-1.0, 6), gauss(1.0, 2.0)),
                    RadialFunction::constant(1.0),
                ]),
                psi_modulus: prod(mono(1.0, 2), gauss(1.0, 0.5)),
            }),
            psi_constant: Some(1.2265828778062044), // (8/(3 sqrt(pi)))^(1/2)
            phase_display: Some("-(r^3/2) e^{-r^2} - (3r/4) e^{-r^2} + (3 sqrt(pi)/8) erf(r)"),
            decay: Decay::Gauss,
            norm_audit: Some(NormAudit::Unit),
            notes: vec![],
        },
        EntryId::E1C => CatalogEntry {
            id,
            title: "d=2, l=0, m = rho^2/2, f = rho",
            spec: spec(2, Ell(0), mass_square(), f_linear()),
            closed: Some(ClosedForms {
                g: prod(mono(1.0, 1), gauss(1.0, 1.0)),
                w: gauss(4.0, 1.0),
                v_tilde_minus_beta: sum(vec![
                    mono(-1.25, -4),
                    gauss(-1.0, 2.0),
                    RadialFunction::constant(1.0),
                ]),
                psi_modulus: prod(RadialFunction::rpow(1.0, 0.5), gauss(1.0, 0.5)),
            }),
            psi_constant: Some(std::f64::consts::SQRT_2),
            phase_display: Some("(rho/2) e^{-rho^2}  [quadrature gives (1 - e^{-rho^2})/2]"),
            decay: Decay::Gauss,
            norm_audit: Some(NormAudit::Unit),
            notes: vec![
                "phase display disagrees with direct quadrature of g; phase is report-only"
                    .to_string(),
            ],
        },
        EntryId::E1D => CatalogEntry {
            id,
            title: "d=1 even, m = x^2/2, f = x (punctured line)",
            spec: spec(1, Par(Parity::Even), mass_square(), f_linear()),
            closed: Some(ClosedForms {
                g: gauss(1.0, 1.0),
                w: sum(vec![
                    prod(mono(4.0, -1), gauss(1.0, 1.0)),
                    prod(mono(2.0, -3), gauss(1.0, 1.0)),
                ]),
                v_tilde_minus_beta: sum(vec![
                    mono(1.0, -2),
                    prod(mono(-1.0, -2), gauss(1.0, 2.0)),
                    RadialFunction::constant(1.0),
                ]),
                psi_modulus: gauss(1.0, 0.5),
            }),
            psi_constant: Some(0.7511255444649425), // pi^(-1/4)
            phase_display: Some("(x/2) sqrt(pi) erf(x)  [quadrature gives (sqrt(pi)/2) erf(x)]"),
            decay: Decay::Gauss,
            norm_audit: Some(NormAudit::Unit),
            notes: vec![
                "mass vanishes at x = 0; the model lives on the punctured line".to_string(),
                "phase display disagrees with direct quadrature of g; phase is report-only"
                    .to_string(),
            ],
        },
        EntryId::E2I => CatalogEntry {
            id,
            title: "d=1 even, m = 1/(2 cosh^2 x), f = tanh(x)/2",
            spec: spec(1, Par(Parity::Even), mass_sech(), f_tanh()),
            closed: Some(ClosedForms {
                g: sech(1.0, 1),
                w: RadialFunction::zero(),
                v_tilde_minus_beta: sum(vec![
                    sech(-0.75, -2),
                    RadialFunction::constant(-0.75),
                ]),
                psi_modulus: RadialFunction::powf(sech(1.0, 1), 0.5),
            }),
            psi_constant: Some(0.7511255444649425), // pi^(-1/4)
            phase_display: Some("2 tanh^{-1}(e^x)  [quadrature gives 2 atan(e^x) - pi/2]"),
            decay: Decay::Sech,
            norm_audit: Some(NormAudit::Flagged(1.7724538509055159)), // sqrt(pi)
            notes: vec![
                "W vanishes identically: the member is Hermitian".to_string(),
                "printed psi constant yields squared norm sqrt(pi), not 1; flagged".to_string(),
                "phase display disagrees with direct quadrature of g; phase is report-only"
                    .to_string(),
            ],
        },
        EntryId::E2II => CatalogEntry {
            id,
            title: "d=2, l=0, m = 1/(2 cosh^2 rho), f = tanh(rho)/2",
            spec: spec(2, Ell(0), mass_sech(), f_tanh()),
            closed: Some(ClosedForms {
                g: prod(mono(1.0, 1), sech(1.0, 1)),
                w: sech(-2.0, -1),
                v_tilde_minus_beta: sum(vec![
                    mono(-1.0, 2),
                    prod(mono(-0.25, -2), sech(1.0, -2)),
                    sech(-0.75, -2),
                    prod(mono(0.5, -1), sinh_cosh()),
                    RadialFunction::constant(0.25),
                ]),
                psi_modulus: RadialFunction::powf(prod(mono(1.0, 1), sech(1.0, 1)), 0.5),
            }),
            psi_constant: Some(1.0622519320271969), // (2/sqrt(pi))^(1/2)
            phase_display: Some("int_0^rho z sech(z) dz (no closed form printed)"),
            decay: Decay::Sech,
            norm_audit: Some(NormAudit::Flagged(2.0671129884916733)),
            notes: vec![
                "printed psi constant yields squared norm ~2.067, not 1; flagged".to_string(),
            ],
        },
        EntryId::E2III => CatalogEntry {
            id,
            title: "d=3, l=0, m = 1/(2 cosh^2 r), f = tanh(r)/2",
            spec: spec(3, Ell(0), mass_sech(), f_tanh()),
            closed: Some(ClosedForms {
                g: prod(mono(1.0, 2), sech(1.0, 1)),
                // The printed display drops the factor r; the construction
                // (and the neighbouring entries' pattern) give -4 r cosh(r).
                w: prod(mono(-4.0, 1), sech(1.0, -1)),
                v_tilde_minus_beta: sum(vec![
                    mono(-1.0, 4),
                    sech(-0.75, -2),
                    prod(mono(1.0, -1), sinh_cosh()),
                    RadialFunction::constant(0.25),
                ]),
                psi_modulus: prod(mono(1.0, 1), RadialFunction::powf(sech(1.0, 1), 0.5)),
            }),
            psi_constant: Some(0.5079),
            phase_display: Some("int_0^r z^2 sech(z) dz (no closed form printed)"),
            decay: Decay::Sech,
            norm_audit: Some(NormAudit::Unit),
            notes: vec![
                "printed W display reads -4 cosh(r); the r factor is restored here".to_string(),
            ],
        },
        EntryId::E2IV => CatalogEntry {
            id,
            title: "d=3, l=2, m = 1/(2 cosh^2 r), f = tanh(r)/2",
            spec: spec(3, Ell(2), mass_sech(), f_tanh()),
            closed: Some(ClosedForms {
                g: prod(mono(1.0, 6), sech(1.0, 1)),
                w: prod(mono(-12.0, 5), sech(1.0, -1)),
                v_tilde_minus_beta: sum(vec![
                    mono(-1.0, 12),
                    sech(-0.75, -2),
                    // 3 sinh(2r)/(2r) = 3 sinh(r) cosh(r)/r
                    prod(mono(3.0, -1), sinh_cosh()),
                    prod(mono(6.0, -2), sech(1.0, -2)),
                    RadialFunction::constant(0.25),
                ]),
                psi_modulus: prod(mono(1.0, 3), RadialFunction::powf(sech(1.0, 1), 0.5)),
            }),
            psi_constant: Some(0.02636),
            phase_display: Some("int_0^r z^6 sech(z) dz (no closed form printed)"),
            decay: Decay::Sech,
            norm_audit: Some(NormAudit::Unit),
            notes: vec![],
        },
        EntryId::FityoReduction => CatalogEntry {
            id,
            title: "1D reduction, m = 1/2, f = 0 (full line)",
            spec: spec(
                1,
                Par(Parity::Even),
                Descriptor::leaf("constant", &[0.5]),
                Descriptor::leaf("constant", &[0.0]),
            ),
            closed: None,
            psi_constant: None,
            phase_display: None,
            decay: Decay::Gauss,
            norm_audit: None,
            notes: vec![
                "structural checks only; no closed forms asserted".to_string(),
                "the companion reduction uses m = 1 (both are shipped; neither privileged)"
                    .to_string(),
            ],
        },
        EntryId::Ref14Reduction => CatalogEntry {
            id,
            title: "1D reduction, m = 1, f = 0 (full line)",
            spec: spec(
                1,
                Par(Parity::Even),
                Descriptor::leaf("constant", &[1.0]),
                Descriptor::leaf("constant", &[0.0]),
            ),
            closed: None,
            psi_constant: None,
            phase_display: None,
            decay: Decay::Gauss,
            norm_audit: None,
            notes: vec!["structural checks only; no closed forms asserted".to_string()],
        },
    }
}

/// The two parameterized reduction entries.
pub fn reduction_entries() -> [CatalogEntry; 2] {
    [
        get_example(EntryId::FityoReduction),
        get_example(EntryId::Ref14Reduction),
    ]
}

/// Per-field outcome of a crosscheck run.
#[derive(Debug, Clone)]
pub struct FieldDeviation {
    pub field: &'static str,
    /// max over probes of |pipeline - closed| / max(|pipeline|, |closed|,
    /// largest participating term).
    pub max_rel_dev: f64,
    /// probe where the maximum was attained
    pub at: f64,
}

#[derive(Debug, Clone)]
pub struct CrosscheckReport {
    pub id: EntryId,
    pub fields: Vec<FieldDeviation>,
    pub notes: Vec<String>,
    pub probe_count: usize,
}

impl CrosscheckReport {
    pub fn max_deviation(&self) -> f64 {
        self.fields
            .iter()
            .map(|f| f.max_rel_dev)
            .fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation() <= tol
    }
}

fn field_deviation(
    name: &'static str,
    pipeline: &RadialFunction,
    closed: &RadialFunction,
    probes: &[f64],
) -> Result<FieldDeviation> {
    let mut max_rel_dev: f64 = 0.0;
    let mut at = probes[0];
    for &r in probes {
        let a = pipeline.eval(r)?;
        let b = closed.eval(r)?;
        let scale = a
            .abs()
            .max(b.abs())
            .max(pipeline.term_scale(r)?)
            .max(closed.term_scale(r)?)
            .max(f64::MIN_POSITIVE);
        let dev = (a - b).abs() / scale;
        if dev > max_rel_dev {
            max_rel_dev = dev;
            at = r;
        }
    }
    Ok(FieldDeviation {
        field: name,
        max_rel_dev,
        at,
    })
}

/// Evaluate pipeline-constructed g, W, V-tilde-minus-beta and psi-modulus
/// against the entry's closed forms on `probe_count` log-spaced points.
pub fn crosscheck(id: EntryId, probe_count: usize) -> Result<CrosscheckReport> {
    let entry = get_example(id);
    let closed = entry.closed.as_ref().ok_or_else(|| {
        Error::spec(format!("catalog entry {id} has no closed forms to check"))
    })?;
    let model = entry.construct()?;
    let probes = model.probe_points(probe_count);

    let fields = vec![
        field_deviation("g", &model.g, &closed.g, &probes)?,
        field_deviation("W", &model.w, &closed.w, &probes)?,
        field_deviation(
            "V_tilde_minus_beta",
            &model.v_tilde_minus_beta,
            &closed.v_tilde_minus_beta,
            &probes,
        )?,
        field_deviation("psi_modulus", &model.psi_modulus, &closed.psi_modulus, &probes)?,
    ];

    let mut notes = entry.notes.clone();
    if let (Some(c), Some(audit)) = (entry.psi_constant, entry.norm_audit) {
        let cutoff = entry.decay.cutoff();
        // Half-line moduli vanish like a positive power at 0 but cannot be
        // evaluated exactly there; the clipped sliver contributes < 1e-16.
        let lower = if model.full_line() { -cutoff } else { 1e-8 };
        let norm_sq = c * c
            * crate::funcspace::quadrature::integrate(
                |r| Ok(model.psi_modulus.eval(r)?.powi(2)),
                lower,
                cutoff,
                1e-10,
            )?;
        match audit {
            NormAudit::Unit => notes.push(format!(
                "normalization: printed constant {c} -> squared norm {norm_sq:.3} ({norm_sq:.6})"
            )),
            NormAudit::Flagged(expect) => notes.push(format!(
                "normalization FLAG: printed constant {c} -> squared norm {norm_sq:.3} (expected ~{expect:.4}, not 1)"
            )),
        }
    }

    Ok(CrosscheckReport {
        id,
        fields,
        notes,
        probe_count: probes.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_w_spot_values() {
        let e = get_example(EntryId::E1A);
        let w = &e.closed.as_ref().unwrap().w;
        assert!((w.eval(1.0).unwrap() - 0.7357588823428847).abs() < 1e-15);

        let e = get_example(EntryId::E2IV);
        let w = &e.closed.as_ref().unwrap().w;
        assert!((w.eval(1.0).unwrap() - (-12.0 * 1.0f64.cosh())).abs() < 1e-13);

        let e = get_example(EntryId::E2I);
        let w = &e.closed.as_ref().unwrap().w;
        for x in [-3.0, -0.5, 0.2, 4.0] {
            assert_eq!(w.eval(x).unwrap(), 0.0);
        }
    }

    #[test]
    fn closed_v_tilde_spot_values() {
        let e = get_example(EntryId::E1A);
        let v = &e.closed.as_ref().unwrap().v_tilde_minus_beta;
        assert!((v.eval(1.0).unwrap() - (-2.0 - (-2.0f64).exp())).abs() < 1e-15);

        let e = get_example(EntryId::E2I);
        let v = &e.closed.as_ref().unwrap().v_tilde_minus_beta;
        assert!((v.eval(0.0).unwrap() + 1.5).abs() < 1e-15);
    }

    #[test]
    fn unknown_id_is_an_error() {
        assert!("nope".parse::<EntryId>().is_err());
        assert_eq!("1A".parse::<EntryId>().unwrap(), EntryId::E1A);
        assert_eq!("2-iii".parse::<EntryId>().unwrap(), EntryId::E2III);
    }

    #[test]
    fn crosscheck_1a_tight() {
        let report = crosscheck(EntryId::E1A, 512).unwrap();
        assert!(
            report.passes(1e-9),
            "1A deviations: {:?}",
            report.fields
        );
    }

    #[test]
    fn crosscheck_all_closed_entries() {
        for id in EntryId::CLOSED_FORM {
            let report = crosscheck(id, 512).unwrap();
            assert!(
                report.passes(1e-9),
                "{id} deviations: {:?}",
                report.fields
            );
        }
    }

    #[test]
    fn reductions_construct() {
        let [fityo, ref14] = reduction_entries();
        let m = fityo.construct().unwrap();
        assert_eq!(m.g.eval(0.8).unwrap(), 1.0);
        assert_eq!(m.w.eval(0.8).unwrap(), 0.0);
        assert_eq!(m.mu.eval(0.8).unwrap(), 1.0);

        let m = ref14.construct().unwrap();
        assert!((m.mu.eval(-2.0).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn normalization_audit_values() {
        // printed constants: unit norm for 1A within 1e-6, flagged values for 2i/2ii
        let report = crosscheck(EntryId::E1A, 64).unwrap();
        let note = report
            .notes
            .iter()
            .find(|n| n.starts_with("normalization"))
            .unwrap();
        assert!(note.contains("1.000000"), "{note}");

        let report = crosscheck(EntryId::E2I, 64).unwrap();
        let note = report.notes.iter().find(|n| n.contains("FLAG")).unwrap();
        assert!(note.contains("1.772"), "{note}");
    }
}
