//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).
//!
//! Criterion 7b (strict eta-orthogonality of discrete eigenpairs for the
//! Hermitian catalog member) is expected to fail; the Dirichlet-truncated
//! operators violate it at O(1) independent of the grid. The test states
//! the measured facts; `notes/decisions.md` outside the repo carries the
//! full analysis.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pseudoherm::catalog::{crosscheck, get_example, EntryId, NormAudit};
use pseudoherm::discrete::{
    discretize_eta, discretize_h, inner, make_grid, norm2, sample_psi, ComplexMatrix, EtaMethod,
    GridMode, RadialGrid, C64,
};
use pseudoherm::eigensolve::{hermitian_smallest_eigenpair, qr_eigenvalues, spectrum_classify};
use pseudoherm::funcspace::{quadrature, Descriptor};
use pseudoherm::generator::{
    construct, Angular, ConstructedModel, GeneratorOptions, GeneratorSpec, Parity,
};
use pseudoherm::verifier::{
    check_annihilation, check_consistency_ode, check_eigen, check_eta_factorization,
    check_eta_orthogonality, check_f_formula, check_intertwining, TestBatch,
};

fn model_for(id: EntryId) -> ConstructedModel {
    get_example(id).construct().expect("catalog entry constructs")
}

/// Grids for the h in {0.02, 0.01, 0.005} refinement ladder: fixed
/// intervals whose length is an exact multiple of h (even node counts on
/// the full line keep 0 off the grid).
fn ladder_grid(model: &ConstructedModel, level: u32) -> RadialGrid {
    if model.full_line() {
        let n = [602usize, 1202, 2402][level as usize];
        make_grid(-6.01, 6.01, n, GridMode::FullLine).unwrap()
    } else {
        let n = [401usize, 801, 1601][level as usize];
        make_grid(0.05, 8.05, n, GridMode::HalfLine).unwrap()
    }
}

#[test]
fn criterion_1_catalog_agreement() {
    let mut worst: f64 = 0.0;
    for id in EntryId::CLOSED_FORM {
        let report = crosscheck(id, 512).unwrap();
        assert!(
            report.passes(1e-9),
            "{id}: per-field deviations {:?}",
            report.fields
        );
        worst = worst.max(report.max_deviation());
    }
    // spot values from the worked examples, via the pipeline
    let m1a = model_for(EntryId::E1A);
    let w1 = m1a.w.eval(1.0).unwrap();
    assert!((w1 - 0.7357588823428847).abs() < 1e-10, "1A W(1) = {w1}");
    let v1 = m1a.v_tilde_minus_beta.eval(1.0).unwrap();
    assert!((v1 + 2.1353352832366128).abs() < 1e-10, "1A Vt(1) = {v1}");

    let m2i = model_for(EntryId::E2I);
    let v0 = m2i.v_tilde_minus_beta.eval(0.0).unwrap();
    assert!((v0 + 1.5).abs() < 1e-12, "2i Vt(0) = {v0}");

    let m2iv = model_for(EntryId::E2IV);
    let w1 = m2iv.w.eval(1.0).unwrap();
    // -12 cosh(1); the formula is authoritative for the spot value
    assert!(
        (w1 + 12.0 * 1.0f64.cosh()).abs() < 1e-10,
        "2iv W(1) = {w1}"
    );
    println!("ACCEPTANCE 1 (catalog agreement): PASS (worst deviation {worst:.3e})");
}

#[test]
fn criterion_2_hermiticity_byproduct() {
    let model = model_for(EntryId::E2I);
    // sup |W| over the probe set, measured before the zero snap
    assert!(
        model.w_probe_sup <= 1e-12,
        "2i sup|W| on probes = {:.3e}",
        model.w_probe_sup
    );
    // and the raw display route stays below 1e-12 at every probe point
    let route = pseudoherm::generator::build_w(&model.g, &model.mu);
    for &x in &model.probe_points(512) {
        let w = route.eval(x).unwrap();
        assert!(w.abs() <= 1e-12, "|W({x})| = {:.3e}", w.abs());
    }
    let grid = make_grid(-6.0, 6.0, 1600, GridMode::FullLine).unwrap();
    let h = discretize_h(&model, &grid).unwrap();
    assert_eq!(h.max_imag_entry(), 0.0, "discretized H has imaginary entries");
    println!(
        "ACCEPTANCE 2 (Hermiticity by-product): PASS (sup|W| = {:.3e}, max|Im H| = 0)",
        model.w_probe_sup
    );
}

fn random_spec(rng: &mut ChaCha8Rng) -> GeneratorSpec {
    let dimension = *[1u32, 2, 3, 4, 5].get(rng.gen_range(0..5)).unwrap();
    let angular = if dimension == 1 {
        Angular::Parity(if rng.gen_bool(0.5) {
            Parity::Even
        } else {
            Parity::Odd
        })
    } else {
        Angular::Ell(rng.gen_range(0..3))
    };
    // masses positive (and even, so dimension-1 members stay consistent)
    let mass = match rng.gen_range(0..4) {
        0 => Descriptor::leaf("constant", &[rng.gen_range(0.3..2.0)]),
        1 => Descriptor::leaf("sech_pow", &[rng.gen_range(0.4..1.2), 2.0]),
        2 => Descriptor::node(
            "sum",
            &[],
            vec![
                Descriptor::leaf("constant", &[rng.gen_range(0.3..1.0)]),
                Descriptor::leaf("gauss", &[rng.gen_range(0.1..0.8), rng.gen_range(0.3..1.0)]),
            ],
        ),
        _ => Descriptor::leaf("monomial", &[rng.gen_range(0.3..1.5), 2.0]),
    };
    // generating functions odd in r, so full-line members stay bounded
    let f = match rng.gen_range(0..3) {
        0 => Descriptor::leaf("monomial", &[rng.gen_range(0.2..1.2), 1.0]),
        1 => Descriptor::leaf(
            "scaled_tanh",
            &[rng.gen_range(0.2..1.0), rng.gen_range(0.5..1.5)],
        ),
        _ => Descriptor::node(
            "sum",
            &[],
            vec![
                Descriptor::leaf("monomial", &[rng.gen_range(0.1..0.6), 1.0]),
                Descriptor::leaf(
                    "scaled_tanh",
                    &[rng.gen_range(0.1..0.8), rng.gen_range(0.5..1.5)],
                ),
            ],
        ),
    };
    let beta = rng.gen_range(-1.0..1.0);
    GeneratorSpec::new(dimension, angular, beta, mass, f).unwrap()
}

#[test]
fn criterion_3_construction_identities() {
    let mut specs: Vec<(String, GeneratorSpec)> = EntryId::ALL
        .iter()
        .map(|&id| (id.to_string(), get_example(id).spec))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(20260810);
    for k in 0..20 {
        specs.push((format!("random-{k}"), random_spec(&mut rng)));
    }
    let mut worst_ode: f64 = 0.0;
    let mut worst_ff: f64 = 0.0;
    for (name, spec) in &specs {
        let model = construct(spec, &GeneratorOptions::default())
            .unwrap_or_else(|e| panic!("{name} failed to construct: {e}"));
        let ode = check_consistency_ode(&model).unwrap();
        assert!(
            ode.residual <= 1e-10,
            "{name}: consistency ODE defect {:.3e}",
            ode.residual
        );
        let ff = check_f_formula(&model).unwrap();
        assert!(
            ff.residual <= 1e-12,
            "{name}: F-formula defect {:.3e}",
            ff.residual
        );
        worst_ode = worst_ode.max(ode.residual);
        worst_ff = worst_ff.max(ff.residual);
    }
    println!(
        "ACCEPTANCE 3 (construction identities, {} specs): PASS (ODE {:.3e}, F {:.3e})",
        specs.len(),
        worst_ode,
        worst_ff
    );
}

#[test]
fn criterion_4_residual_orders() {
    for id in [EntryId::E1A, EntryId::E1B, EntryId::E2I, EntryId::E2III] {
        let model = model_for(id);
        let mut ann = Vec::new();
        let mut eig = Vec::new();
        for level in 0..3 {
            let grid = ladder_grid(&model, level);
            ann.push(check_annihilation(&model, &grid).unwrap().residual);
            eig.push(check_eigen(&model, &grid).unwrap().residual);
        }
        for window in [0, 1] {
            let order_ann = (ann[window] / ann[window + 1]).log2();
            let order_eig = (eig[window] / eig[window + 1]).log2();
            assert!(
                order_ann >= 1.8,
                "{id}: annihilation order {order_ann:.2} ({:?})",
                ann
            );
            assert!(
                order_eig >= 1.8,
                "{id}: eigen order {order_eig:.2} ({:?})",
                eig
            );
        }
        println!(
            "  {id}: annihilation {:.2e} -> {:.2e} -> {:.2e}, eigen {:.2e} -> {:.2e} -> {:.2e}",
            ann[0], ann[1], ann[2], eig[0], eig[1], eig[2]
        );
    }
    println!("ACCEPTANCE 4 (annihilation/eigen residual orders >= 1.8): PASS");
}

#[test]
fn criterion_5_metric_structure() {
    // exact Hermiticity of the factored metric (bit level)
    for id in [EntryId::E1A, EntryId::E2I] {
        let model = model_for(id);
        let grid = if model.full_line() {
            make_grid(-6.0, 6.0, 1600, GridMode::FullLine).unwrap()
        } else {
            make_grid(0.05, 8.0, 1600, GridMode::HalfLine).unwrap()
        };
        let eta = discretize_eta(&model, &grid, EtaMethod::Factored).unwrap();
        assert_eq!(eta.hermiticity_defect(), 0.0, "{id}: eta not exactly Hermitian");

        let (lambda_min, v) = hermitian_smallest_eigenpair(&eta).unwrap();
        let scale = eta.max_row_sum();
        assert!(
            lambda_min >= -1e-10 * scale,
            "{id}: min eigenvalue {lambda_min:.3e} vs scale {scale:.3e}"
        );
        let psi = sample_psi(&model, &grid).unwrap();
        let overlap = inner(&v, &psi).norm() / (norm2(&v) * norm2(&psi));
        assert!(
            overlap >= 0.99,
            "{id}: near-null eigenvector overlap with psi = {overlap:.6}"
        );
        println!("  {id}: lambda_min/||eta|| = {:.3e}, overlap = {overlap:.6}", lambda_min / scale);
    }
    // direct-vs-factored action gap decreases under refinement
    for id in [EntryId::E1A, EntryId::E2I] {
        let model = model_for(id);
        let mut prev = f64::INFINITY;
        for n in [161usize, 321, 641] {
            let grid = if model.full_line() {
                make_grid(-6.01, 6.01, n + 1, GridMode::FullLine).unwrap()
            } else {
                make_grid(0.05, 8.05, n, GridMode::HalfLine).unwrap()
            };
            let batch = TestBatch::new(&grid, model.singular_at_zero(), 8).unwrap();
            let rec = check_eta_factorization(&model, &grid, &batch).unwrap();
            assert!(
                rec.residual < prev,
                "{id}: eta gap did not decrease at n={n}: {prev:.3e} -> {:.3e}",
                rec.residual
            );
            prev = rec.residual;
        }
    }
    println!("ACCEPTANCE 5 (metric structure): PASS");
}

#[test]
fn criterion_6_intertwining() {
    for id in EntryId::ALL {
        let model = model_for(id);
        let mut residuals = Vec::new();
        for n in [161usize, 321, 641] {
            let grid = if model.full_line() {
                make_grid(-6.01, 6.01, n + 1, GridMode::FullLine).unwrap()
            } else {
                make_grid(0.05, 8.05, n, GridMode::HalfLine).unwrap()
            };
            let batch = TestBatch::new(&grid, model.singular_at_zero(), 8).unwrap();
            residuals.push(check_intertwining(&model, &grid, &batch).unwrap().residual);
        }
        for k in 0..2 {
            let (coarse, fine) = (residuals[k], residuals[k + 1]);
            if coarse == 0.0 && fine == 0.0 {
                // constant-coefficient members: margin-masked residual is
                // exactly zero on every grid
                continue;
            }
            assert!(
                fine < coarse,
                "{id}: intertwining residual did not decrease: {residuals:?}"
            );
            let order = (coarse / fine).log2();
            assert!(order >= 0.9, "{id}: intertwining order {order:.2} ({residuals:?})");
        }
    }
    // negative control: +0.1 on W must raise the residual by more than 100x
    let model = model_for(EntryId::E1A);
    let grid = make_grid(0.05, 8.05, 401, GridMode::HalfLine).unwrap();
    let batch = TestBatch::new(&grid, model.singular_at_zero(), 8).unwrap();
    let base = check_intertwining(&model, &grid, &batch).unwrap().residual;
    let perturbed = check_intertwining(&model.with_w_perturbation(0.1), &grid, &batch)
        .unwrap()
        .residual;
    assert!(
        perturbed > 100.0 * base,
        "perturbed/unperturbed = {:.1}",
        perturbed / base
    );
    println!(
        "ACCEPTANCE 6 (intertwining): PASS (negative control contrast {:.0}x)",
        perturbed / base
    );
}

#[test]
fn criterion_7_spectrum_claim() {
    // Hermitian member: unpaired fraction exactly zero at n = 400
    let model = model_for(EntryId::E2I);
    let grid = make_grid(-6.0, 6.0, 400, GridMode::FullLine).unwrap();
    let h = discretize_h(&model, &grid).unwrap();
    assert_eq!(h.max_imag_entry(), 0.0);
    let eigs = qr_eigenvalues(&h, 1e-12, 0).unwrap();
    let cls = spectrum_classify(&eigs, 1e-6);
    assert_eq!(
        cls.unpaired_fraction(),
        0.0,
        "2i unpaired: {:?}",
        cls.unpaired
    );

    // complex-W members: unpaired fraction monotone non-increasing over
    // three refinements
    for id in [EntryId::E1A, EntryId::E1C] {
        let model = model_for(id);
        let mut prev = f64::INFINITY;
        let mut trend = Vec::new();
        for n in [100usize, 200, 400] {
            let grid = make_grid(0.05, 8.05, n, GridMode::HalfLine).unwrap();
            let h = discretize_h(&model, &grid).unwrap();
            let eigs = qr_eigenvalues(&h, 1e-12, 0).unwrap();
            let frac = spectrum_classify(&eigs, 1e-6).unpaired_fraction();
            assert!(
                frac <= prev,
                "{id}: unpaired fraction increased at n={n}: {prev} -> {frac}"
            );
            trend.push(frac);
            prev = frac;
        }
        println!("  {id}: unpaired fraction trend {trend:?}");
    }
    println!("ACCEPTANCE 7 (spectrum claim: pairing and trend): PASS");
}

/// Strict eta-orthogonality of the discrete eigenpairs at the printed
/// tolerance. This criterion is unattainable for Dirichlet-truncated
/// operators and the test is expected to fail; see the notes below and the
/// decisions ledger.
///
/// Measured facts (this suite prints them on failure):
/// - eigenvector residuals are at rounding level (~6e-16), so the products
///   are not a solver artifact;
/// - the identity (lam_j - lam_i*)<v_i, eta v_j> = <v_i, (etaH - H^dag eta)v_j>
///   holds to ~1e-10 relative, so the products measure a genuine operator
///   defect;
/// - the worst normalized product is grid-converged (0.5365 at n = 400,
///   0.5364 at n = 800): a property of the truncated-interval problem, not
///   of the discretization. The member's extended states carry O(1)
///   amplitude at the wall, where the intertwining boundary terms live.
#[test]
fn criterion_7b_eta_orthogonality_strict() {
    let model = model_for(EntryId::E2I);
    let grid = make_grid(-6.0, 6.0, 400, GridMode::FullLine).unwrap();
    let rec = check_eta_orthogonality(&model, &grid, 1e-3).unwrap();
    println!(
        "ACCEPTANCE 7b (strict eta-orthogonality <= 1e-6): residual {:.3e} -> {}",
        rec.residual,
        if rec.pass { "PASS" } else { "FAIL (expected; see decisions ledger)" }
    );
    assert!(
        rec.pass,
        "eta-orthogonality residual {:.3e} exceeds 1e-6; this violation is \
         grid-converged and inherent to the Dirichlet truncation (the same \
         number at n = 400 and n = 800), not a defect of the eigensolver or \
         the metric construction",
        rec.residual
    );

    // negative control stays meaningful: a random non-pseudo-Hermitian
    // matrix fails the property outright (checked in the eigensolver tests).
}

#[test]
fn criterion_8_normalization_audit() {
    for id in EntryId::CLOSED_FORM {
        let entry = get_example(id);
        let model = entry.construct().unwrap();
        let c = entry.psi_constant.unwrap();
        let cutoff = entry.decay.cutoff();
        let lower = if model.full_line() { -cutoff } else { 1e-8 };
        let modulus = model.psi_modulus.clone();
        let norm_sq = c * c
            * quadrature::integrate(|r| Ok(modulus.eval(r)?.powi(2)), lower, cutoff, 1e-10)
                .unwrap();
        match entry.norm_audit.unwrap() {
            NormAudit::Unit => {
                assert!(
                    (norm_sq - 1.0).abs() <= 2e-3,
                    "{id}: printed constant gives squared norm {norm_sq}"
                );
            }
            NormAudit::Flagged(expected) => {
                assert!(
                    (norm_sq - expected).abs() <= 2e-3 * expected.max(1.0),
                    "{id}: flagged value {norm_sq} vs expected {expected}"
                );
                println!("  {id}: flagged discrepancy, constant gives {norm_sq:.4} (not 1)");
            }
        }
    }
    println!("ACCEPTANCE 8 (normalization audit): PASS");
}

// --- characteristic-polynomial oracle for criterion 9 ------------------

/// Characteristic polynomial coefficients by the Faddeev-LeVerrier
/// recurrence: p(z) = z^n + c[n-1] z^(n-1) + ... + c[0].
fn char_poly(a: &ComplexMatrix) -> Vec<C64> {
    let n = a.dim();
    let mut coeffs = vec![C64::new(0.0, 0.0); n];
    let mut m = ComplexMatrix::zeros(n); // M_0 = 0
    let mut c = C64::new(1.0, 0.0); // c_n = 1
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut am = a.matmul(&m).unwrap();
        for i in 0..n {
            let d = am[(i, i)] + c;
            am[(i, i)] = d;
        }
        m = am;
        let t = a.matmul(&m).unwrap().trace();
        c = -t / k as f64;
        coeffs[n - k] = c;
    }
    coeffs
}

fn eval_poly(coeffs: &[C64], z: C64) -> C64 {
    // monic: z^n + sum coeffs[k] z^k
    let n = coeffs.len();
    let mut acc = C64::new(1.0, 0.0);
    for k in (0..n).rev() {
        acc = acc * z + coeffs[k];
    }
    acc
}

/// Durand-Kerner root finding on the monic characteristic polynomial.
fn durand_kerner(coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len();
    let radius = 1.0
        + coeffs
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max);
    let seed = C64::new(0.4, 0.9);
    let mut roots: Vec<C64> = (0..n)
        .map(|k| seed.powu(k as u32 + 1) * radius)
        .collect();
    for _ in 0..500 {
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let mut denom = C64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            let delta = eval_poly(coeffs, roots[i]) / denom;
            roots[i] -= delta;
            worst = worst.max(delta.norm());
        }
        if worst < 1e-14 * radius {
            break;
        }
    }
    roots
}

/// Greedy set distance between two eigenvalue multisets.
fn set_distance(a: &[C64], b: &[C64]) -> f64 {
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let mut best = f64::INFINITY;
        let mut best_j = usize::MAX;
        for (j, y) in b.iter().enumerate() {
            if !used[j] {
                let d = (x - y).norm();
                if d < best {
                    best = d;
                    best_j = j;
                }
            }
        }
        used[best_j] = true;
        worst = worst.max(best);
    }
    worst
}

#[test]
fn criterion_9_eigensolver_correctness() {
    let mut rng = ChaCha8Rng::seed_from_u64(97);
    let mut worst: f64 = 0.0;
    for case in 0..50 {
        let n = rng.gen_range(2..=8);
        // alternate genuinely complex and real-entried instances
        let complex = case % 2 == 0;
        let mut a = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let im = if complex { rng.gen_range(-1.0..1.0) } else { 0.0 };
                a[(i, j)] = Complex64::new(rng.gen_range(-1.0..1.0), im);
            }
        }
        let qr = qr_eigenvalues(&a, 1e-13, 0).unwrap();
        let oracle = durand_kerner(&char_poly(&a));
        let dist = set_distance(&qr, &oracle);
        assert!(dist <= 1e-8, "case {case} (n={n}): set distance {dist:.3e}");
        worst = worst.max(dist);
    }

    // trace consistency on discretized catalog operators at n = 400
    for id in [EntryId::E1A, EntryId::E2I] {
        let model = model_for(id);
        let grid = if model.full_line() {
            make_grid(-6.0, 6.0, 400, GridMode::FullLine).unwrap()
        } else {
            make_grid(0.05, 8.0, 400, GridMode::HalfLine).unwrap()
        };
        let h = discretize_h(&model, &grid).unwrap();
        let eigs = qr_eigenvalues(&h, 1e-12, 0).unwrap();
        let sum: C64 = eigs.iter().sum();
        let defect = (sum - h.trace()).norm();
        let bound = 1e-8 * 400.0 * h.max_row_sum();
        assert!(defect <= bound, "{id}: trace defect {defect:.3e} vs {bound:.3e}");
    }
    println!("ACCEPTANCE 9 (eigensolver correctness): PASS (worst oracle distance {worst:.3e})");
}
