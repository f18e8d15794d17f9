//! Command-line front end: construct models, verify operator identities,
//! compute spectra, and cross-check the example catalog.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pseudoherm::catalog::{self, EntryId};
use pseudoherm::discrete::{discretize_h, make_grid, GridMode, RadialGrid};
use pseudoherm::eigensolve::{qr_eigenvalues, spectrum_classify};
use pseudoherm::error::Error;
use pseudoherm::generator::{construct, ConstructedModel, GeneratorOptions, GeneratorSpec};
use pseudoherm::verifier::{full_report, VerifyOptions};

const EXIT_VERIFICATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_CONVERGENCE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "pseudoherm",
    about = "Non-Hermitian position-dependent-mass Hamiltonians from pseudo-Hermiticity generating functions",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample every constructed field of a model on a radial grid.
    Construct(ConstructArgs),
    /// Run the verification suite and emit a JSON report.
    Verify(VerifyArgs),
    /// Eigenvalues of the discretized Hamiltonian with conjugate-pair
    /// classification.
    Spectrum(SpectrumArgs),
    /// Compare pipeline output against the catalog closed forms.
    Crosscheck(CrosscheckArgs),
    /// List or show the built-in example catalog.
    Catalog(CatalogArgs),
}

#[derive(Args)]
struct SourceArgs {
    /// Path to a generator-spec JSON file.
    #[arg(long, value_name = "PATH", conflicts_with = "catalog")]
    spec: Option<PathBuf>,
    /// Catalog entry id (1A, 1B, 1C, 1D, 2i, 2ii, 2iii, 2iv,
    /// fityo-reduction, ref14-reduction).
    #[arg(long, value_name = "ID")]
    catalog: Option<String>,
    /// Override the spec's additive potential constant.
    #[arg(long)]
    beta: Option<f64>,
}

#[derive(Args)]
struct GridArgs {
    /// Lower grid bound (default 0.05 half-line, -6 full-line).
    #[arg(long)]
    rmin: Option<f64>,
    /// Upper grid bound (default 8 half-line, 6 full-line).
    #[arg(long)]
    rmax: Option<f64>,
    /// Node count.
    #[arg(short = 'n', long = "n", default_value_t = 1600)]
    n: usize,
    /// Grid mode; defaults to the model's natural line.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Half,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Test hook: add this constant to the imaginary potential W.
    #[arg(long = "perturb-W", value_name = "X")]
    perturb_w: Option<f64>,
    /// Also run the eigensolver-based eta-orthogonality check on a coarse
    /// grid of this size.
    #[arg(long, value_name = "N")]
    orthogonality_n: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Conjugate-pair classification tolerance (relative to spectral scale).
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CrosscheckArgs {
    /// Catalog entry id; use --all for every closed-form entry.
    id: Option<String>,
    /// Check all eight closed-form entries.
    #[arg(long)]
    all: bool,
    /// Number of log-spaced probe points.
    #[arg(long, default_value_t = 512)]
    probes: usize,
}

#[derive(Args)]
struct CatalogArgs {
    #[command(subcommand)]
    action: CatalogAction,
}

#[derive(Subcommand)]
enum CatalogAction {
    /// One line per entry.
    List,
    /// Full details of one entry.
    Show { id: String },
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Stage { source, .. } => exit_code_for(source),
        Error::Spec(_) | Error::Json(_) => EXIT_USAGE,
        Error::Domain { .. } | Error::SizeGuard(_) | Error::Dimension(_) => EXIT_DOMAIN,
        Error::Accuracy { .. } | Error::Convergence(_) => EXIT_CONVERGENCE,
        Error::Io(_) => EXIT_USAGE,
    }
}

fn load_spec(source: &SourceArgs) -> Result<(GeneratorSpec, Option<EntryId>), Error> {
    let (mut spec, entry) = match (&source.spec, &source.catalog) {
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|e| {
                Error::spec(format!("cannot read spec file {}: {e}", path.display()))
            })?;
            (serde_json::from_str::<GeneratorSpec>(&text)?, None)
        }
        (None, Some(id)) => {
            let id: EntryId = id.parse()?;
            (catalog::get_example(id).spec, Some(id))
        }
        _ => {
            return Err(Error::spec(
                "exactly one of --spec PATH or --catalog ID is required",
            ))
        }
    };
    if let Some(beta) = source.beta {
        spec.beta = beta;
    }
    Ok((spec, entry))
}

fn build_grid(args: &GridArgs, model: &ConstructedModel) -> Result<RadialGrid, Error> {
    let mode = match args.mode {
        Some(ModeArg::Half) => GridMode::HalfLine,
        Some(ModeArg::Full) => GridMode::FullLine,
        None => {
            if model.full_line() {
                GridMode::FullLine
            } else {
                GridMode::HalfLine
            }
        }
    };
    let (dmin, dmax) = match mode {
        GridMode::HalfLine => (0.05, 8.0),
        GridMode::FullLine => (-6.0, 6.0),
    };
    let r_min = args.rmin.unwrap_or(dmin);
    let r_max = args.rmax.unwrap_or(dmax);
    make_grid(r_min, r_max, args.n, mode)
}

fn fmt(x: f64) -> String {
    // 17 significant digits: lossless double round-trip
    format!("{x:.16e}")
}

fn write_out(out: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => {
            fs::write(path, content)?;
            Ok(())
        }
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_construct(args: &ConstructArgs) -> Result<u8, Error> {
    let (spec, _entry) = load_spec(&args.source)?;
    let model = construct(&spec, &GeneratorOptions::default())?;
    let grid = build_grid(&args.grid, &model)?;

    const COLUMNS: [&str; 12] = [
        "r", "m", "mu", "g", "F", "G", "V_tilde", "W", "psi_re", "psi_im", "psi_abs", "phase",
    ];
    let mut rows: Vec<[f64; 12]> = Vec::with_capacity(grid.len());
    for &r in grid.nodes() {
        let psi = model.psi(r)?;
        rows.push([
            r,
            model.mass.eval(r)?,
            model.mu.eval(r)?,
            model.g.eval(r)?,
            model.z_re.eval(r)?,
            model.z_im.eval(r)?,
            model.v_tilde(r)?,
            model.w.eval(r)?,
            psi.re,
            psi.im,
            psi.norm(),
            model.psi_phase(r)?,
        ]);
    }

    let fingerprint = spec.fingerprint();
    let content = match args.format {
        FormatArg::Csv => {
            let mut s = String::new();
            s.push_str(&format!("# fingerprint={fingerprint}\n"));
            s.push_str(&format!("# beta={}\n", fmt(spec.beta)));
            s.push_str(&COLUMNS.join(","));
            s.push('\n');
            for row in &rows {
                let cells: Vec<String> = row.iter().map(|&x| fmt(x)).collect();
                s.push_str(&cells.join(","));
                s.push('\n');
            }
            s
        }
        FormatArg::Json => {
            let payload = serde_json::json!({
                "fingerprint": fingerprint,
                "beta": spec.beta,
                "columns": COLUMNS,
                "rows": rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
            });
            let mut s = serde_json::to_string_pretty(&payload)?;
            s.push('\n');
            s
        }
    };
    write_out(&args.out, &content)?;
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, Error> {
    let (spec, entry) = load_spec(&args.source)?;
    let probe_model = construct(&spec, &GeneratorOptions::default())?;
    let grid = build_grid(&args.grid, &probe_model)?;
    let options = VerifyOptions {
        perturb_w: args.perturb_w,
        orthogonality_n: args.orthogonality_n,
        entry,
        ..Default::default()
    };
    let report = full_report(&spec, &grid, &options)?;
    let mut json = serde_json::to_string_pretty(&report)?;
    json.push('\n');
    write_out(&args.out, &json)?;
    if args.out.is_some() {
        // short human summary when the full report went to a file
        for check in &report.checks {
            println!(
                "{:24} residual {:.3e}  threshold {:.3e}  {}",
                check.name,
                check.residual,
                check.threshold,
                if check.pass { "pass" } else { "FAIL" }
            );
        }
    }
    Ok(if report.all_pass() { 0 } else { EXIT_VERIFICATION })
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<u8, Error> {
    let (spec, _entry) = load_spec(&args.source)?;
    let model = construct(&spec, &GeneratorOptions::default())?;
    let grid = build_grid(&args.grid, &model)?;
    let h = discretize_h(&model, &grid)?;
    let eigs = qr_eigenvalues(&h, 1e-12, 0)?;
    let cls = spectrum_classify(&eigs, args.tol);
    let mut csv = Vec::new();
    cls.write_csv(&mut csv)?;
    write_out(&args.out, &String::from_utf8_lossy(&csv))?;
    eprintln!(
        "n={} real={} pairs={} unpaired={} unpaired_fraction={:.6} scale={:.6e} tol={:.1e}",
        cls.eigenvalues.len(),
        cls.real_set.len(),
        cls.conjugate_pairs.len(),
        cls.unpaired.len(),
        cls.unpaired_fraction(),
        cls.scale,
        cls.tol
    );
    Ok(0)
}

fn cmd_crosscheck(args: &CrosscheckArgs) -> Result<u8, Error> {
    const TOL: f64 = 1e-9;
    let ids: Vec<EntryId> = if args.all {
        EntryId::CLOSED_FORM.to_vec()
    } else {
        let id = args
            .id
            .as_deref()
            .ok_or_else(|| Error::spec("crosscheck needs an entry id or --all"))?;
        vec![id.parse()?]
    };
    let mut all_pass = true;
    for id in ids {
        let report = catalog::crosscheck(id, args.probes)?;
        let pass = report.passes(TOL);
        all_pass &= pass;
        println!(
            "{:>6}  max deviation {:.3e}  ({})",
            id.to_string(),
            report.max_deviation(),
            if pass { "pass" } else { "FAIL" }
        );
        for field in &report.fields {
            println!(
                "        {:20} {:.3e}  at r = {:.4}",
                field.field, field.max_rel_dev, field.at
            );
        }
        for note in &report.notes {
            println!("        note: {note}");
        }
    }
    Ok(if all_pass { 0 } else { EXIT_VERIFICATION })
}

fn cmd_catalog(args: &CatalogArgs) -> Result<u8, Error> {
    match &args.action {
        CatalogAction::List => {
            for id in EntryId::ALL {
                let entry = catalog::get_example(id);
                println!("{:>16}  {}", id.to_string(), entry.title);
            }
        }
        CatalogAction::Show { id } => {
            let id: EntryId = id.parse()?;
            let entry = catalog::get_example(id);
            println!("id:       {}", entry.id);
            println!("title:    {}", entry.title);
            println!("spec:     {}", serde_json::to_string_pretty(&entry.spec)?);
            if let Some(c) = entry.psi_constant {
                println!("psi constant: {c}");
            }
            if let Some(p) = entry.phase_display {
                println!("phase:    {p}");
            }
            println!(
                "decay:    {:?} (normalization cutoff {})",
                entry.decay,
                entry.decay.cutoff()
            );
            for note in &entry.notes {
                println!("note:     {note}");
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Construct(args) => cmd_construct(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Crosscheck(args) => cmd_crosscheck(args),
        Command::Catalog(args) => cmd_catalog(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
