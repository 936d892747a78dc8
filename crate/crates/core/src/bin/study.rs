use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use laminated_modal::eigen::Method;
use laminated_modal::fem_beam::{build_system, BoundaryCondition, CrossSection};
use laminated_modal::materials::MaterialDatabase;
use laminated_modal::oracle::dense_fixed_point_eig;
use laminated_modal::study::{emit, run_case, run_study, summarize, CaseSpec, StudyConfig};
use laminated_modal::{Error, Result};

#[derive(Parser)]
#[command(name = "study", version, about = "Modal analysis of laminated glass beams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a batch of cases (the built-in 63-case matrix by default).
    Run(RunArgs),
    /// Solve a single beam and print the modal table.
    Case(CaseArgs),
    /// Print or export the built-in material database.
    Materials {
        /// Write the database as JSON instead of printing a summary.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SolverArgs {
    /// Comma separated subset of cnm,mse,det,eet.
    #[arg(long)]
    methods: Option<String>,
    #[arg(long)]
    modes: Option<usize>,
    /// Elements per layer.
    #[arg(long)]
    elements: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long, default_value = "study_out")]
    out: PathBuf,
}

#[derive(Args)]
struct CaseArgs {
    /// ss, cc or ff
    #[arg(long)]
    bc: BoundaryCondition,
    /// Thicknesses h1/h2/h3 in mm.
    #[arg(long)]
    section: String,
    #[arg(long)]
    material: String,
    /// Temperature [°C].
    #[arg(long)]
    temp: f64,
    /// Width [mm].
    #[arg(long, default_value_t = 100.0)]
    width: f64,
    /// Length [m].
    #[arg(long, default_value_t = 1.0)]
    length: f64,
    /// Material database JSON replacing the built-in one.
    #[arg(long)]
    materials: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
    /// Also solve with the dense fixed-point oracle (small meshes only).
    #[arg(long)]
    oracle: bool,
    /// Write K0, Kc and M in MatrixMarket format into this directory.
    #[arg(long)]
    export_matrices: Option<PathBuf>,
}

fn apply_solver_args(cfg: &mut StudyConfig, a: &SolverArgs) -> Result<()> {
    if let Some(m) = &a.methods {
        cfg.methods = Some(Method::parse_list(m)?);
    }
    cfg.modes = a.modes.or(cfg.modes);
    cfg.elements = a.elements.or(cfg.elements);
    cfg.tolerance = a.tol.or(cfg.tolerance);
    cfg.max_iter = a.max_iter.or(cfg.max_iter);
    Ok(())
}

fn run(args: RunArgs) -> Result<()> {
    let mut cfg = match &args.config {
        Some(p) => StudyConfig::load(p)?,
        None => StudyConfig::default(),
    };
    apply_solver_args(&mut cfg, &args.solver)?;
    let db = cfg.database()?;
    let cases = cfg.cases()?;
    let options = cfg.options()?;
    let started = Instant::now();
    let results = run_study(&cases, &db, &options)?;
    let stats = summarize(&results, &cfg.grouping())?;
    emit(&results, &stats, &options, &args.out)?;
    let failed = results.iter().flat_map(|c| &c.rows).filter(|r| !r.converged).count();
    eprintln!(
        "{} cases, {} failed cells, {:.1} s; results in {}",
        results.len(),
        failed,
        started.elapsed().as_secs_f64(),
        args.out.display()
    );
    Ok(())
}

fn case(args: CaseArgs) -> Result<()> {
    let mut cfg = StudyConfig::default();
    apply_solver_args(&mut cfg, &args.solver)?;
    cfg.materials = args.materials.clone();
    let db = cfg.database()?;
    let options = cfg.options()?;
    let section = CrossSection::parse_mm(&args.section, args.width)?;
    let mut spec = CaseSpec::new(args.bc, section, &args.material, args.temp);
    spec.length = args.length;
    let beam = spec.beam(&db)?;

    if let Some(dir) = &args.export_matrices {
        build_system(&beam, options.elements)?.export_coordinate(dir)?;
        eprintln!("matrices written to {}", dir.display());
    }

    let result = run_case(&spec, &db, &options)?;
    println!("{}", spec.id);
    println!(
        "{:>4}  {:<6}  {:>12}  {:>12}  {:>5}  {:>10}  {:>10}",
        "mode", "method", "f [Hz]", "eta", "iter", "err f", "err eta"
    );
    for r in &result.rows {
        match &r.failure {
            None => println!(
                "{:>4}  {:<6}  {:>12.5}  {:>12.6}  {:>5}  {:>10.3e}  {:>10.3e}",
                r.mode, r.method, r.frequency, r.loss_factor, r.iterations, r.err_f_vs_cnm, r.err_eta_vs_cnm
            ),
            Some(reason) => println!("{:>4}  {:<6}  failed: {reason}", r.mode, r.method),
        }
    }
    if result.extrapolated_material {
        println!("note: interlayer model evaluated outside 0.01 Hz to 10 kHz");
    }

    if args.oracle {
        let system = build_system(&beam, options.elements)?;
        let chain = beam.chain()?;
        for mode in 1..=options.settings.modes {
            match dense_fixed_point_eig(&system, &chain, mode, &options.settings).and_then(|p| p.frequency_and_loss()) {
                Ok((f, eta)) => println!("{mode:>4}  {:<6}  {f:>12.5}  {eta:>12.6}", "oracle"),
                Err(e) => println!("{mode:>4}  {:<6}  failed: {e}", "oracle"),
            }
        }
    }
    Ok(())
}

fn materials(out: Option<PathBuf>) -> Result<()> {
    let db = MaterialDatabase::builtin();
    if let Some(path) = out {
        std::fs::write(&path, db.to_json()? + "\n")?;
        eprintln!("database written to {}", path.display());
        return Ok(());
    }
    for g in &db.glass {
        println!(
            "{:<8} glass       E = {} GPa, nu = {}, rho = {}",
            g.name, g.young_gpa, g.poisson, g.density
        );
    }
    for name in db.interlayers.iter().map(|i| i.name.as_str()) {
        let m = db.interlayer(name)?;
        let shift = match &m.wlf {
            Some(w) => format!("WLF T0 = {} C", w.reference_temperature),
            None => format!("reference {} C", m.reference_temperature),
        };
        println!(
            "{:<8} interlayer  G_inf = {:.4} MPa, G_0 = {:.4} MPa, {} units, {}",
            name,
            m.chain.long_term_modulus() / 1e6,
            m.chain.instantaneous_modulus() / 1e6,
            m.chain.units().len(),
            shift
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Run(a) => run(a),
        Command::Case(a) => case(a),
        Command::Materials { out } => materials(out),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidParameter(_) | Error::Config(_) | Error::UnknownMaterial(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
