//! Command-line front end: load instances, sample seeded random ones, run
//! the bound ladder, tabulate moments, verify the property battery, and
//! report estimation geometry.

mod report;
mod verify;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use report::{sig12, to_json, to_json_pretty, GeometryRecord, ReportRecord};
use skewbound::{
    arc_length, estimation_angle, expectation, ginibre_state, gue_hamiltonian,
    principal_sqrt, skew_moment_oracle, third_order_bound, uncertainty_bound, DerivativeSet,
    Error, InstanceFile, MatrixJson, SkewMomentTable, SplitMix64, ValidatedInstance,
};

const EXIT_CODE_HELP: &str = "Exit codes:
  0  success
  1  property failure (verify)
  2  input validation error
  3  degenerate instance (zero Fisher information, degenerate/invalid geometry)";

#[derive(Parser)]
#[command(
    name = "skewbound",
    version,
    about = "Uncertainty lower bounds for unitary families of mixed states",
    after_help = EXIT_CODE_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run the bound ladder on an instance file and emit a report.
    Compute {
        /// Instance JSON file.
        instance: PathBuf,
        /// Odd truncation order K (1, 3, 5 or 7).
        #[arg(long, default_value_t = 5)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Compute moments from the raw H instead of H - <H>.
        #[arg(long)]
        no_preshift: bool,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate skew moments S_2..S_2M with closed-form and oracle columns.
    Moments {
        instance: PathBuf,
        /// Largest even moment order 2M (<= 16).
        #[arg(long, default_value_t = 12)]
        max_order: usize,
        #[arg(long)]
        no_preshift: bool,
    },
    /// Write a seeded random instance (Ginibre state, GUE Hamiltonian).
    Random {
        #[arg(long)]
        dim: usize,
        /// State rank; defaults to dim (full rank).
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Also sample a GUE estimator matrix.
        #[arg(long)]
        with_estimator: bool,
        #[arg(long)]
        label: Option<String>,
    },
    /// Run the cross-module property battery on seeded random instances.
    Verify {
        #[arg(long, value_delimiter = ',', default_values_t = vec![3, 4, 5])]
        dims: Vec<usize>,
        /// Trials per dimension.
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Ladder depth exercised per trial (odd, <= 7).
        #[arg(long, default_value_t = 5)]
        depth: usize,
    },
    /// Arc length and estimation angle for an instance with an estimator.
    Geometry {
        instance: PathBuf,
        /// Parameter value used in the mean adjustment; defaults to tr(T rho).
        #[arg(long)]
        t: Option<f64>,
        /// Use the estimator as supplied instead of rescaling it to unit
        /// response d<T>/dt = 1.
        #[arg(long)]
        raw: bool,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::ZeroFisherInformation { .. }
            | Error::DegenerateSurface { .. }
            | Error::InvalidGeometry { .. }
            | Error::RankSaturated { .. } => 3,
            _ => 2,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure::validation(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute {
            instance,
            order,
            format,
            no_preshift,
            out,
        } => cmd_compute(&instance, order, format, !no_preshift, out.as_deref()),
        Command::Moments {
            instance,
            max_order,
            no_preshift,
        } => cmd_moments(&instance, max_order, !no_preshift),
        Command::Random {
            dim,
            rank,
            seed,
            out,
            with_estimator,
            label,
        } => cmd_random(dim, rank.unwrap_or(dim), seed, &out, with_estimator, label),
        Command::Verify {
            dims,
            trials,
            seed,
            depth,
        } => cmd_verify(&dims, trials, seed, depth),
        Command::Geometry { instance, t, raw } => cmd_geometry(&instance, t, raw),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn load_instance(path: &std::path::Path) -> Result<ValidatedInstance, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?;
    let file: InstanceFile = serde_json::from_str(&text)
        .map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?;
    Ok(file.validate()?)
}

fn emit(text: &str, out: Option<&std::path::Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn cmd_compute(
    path: &std::path::Path,
    order: usize,
    format: Format,
    preshift: bool,
    out: Option<&std::path::Path>,
) -> Result<ExitCode, Failure> {
    if order.is_multiple_of(2) || order > skewbound::MAX_LADDER_DEPTH {
        return Err(Failure::validation(format!(
            "--order must be odd and at most {}, got {order}",
            skewbound::MAX_LADDER_DEPTH
        )));
    }
    let inst = load_instance(path)?;
    let xi = principal_sqrt(&inst.state)?;
    let table_order = (2 * order).max(6);
    let table = SkewMomentTable::build_with_options(&inst.hamiltonian, &xi, table_order, preshift)?;
    let ladder = uncertainty_bound(&table, order)?;
    let label = inst
        .label
        .clone()
        .unwrap_or_else(|| path.display().to_string());
    let mut record =
        ReportRecord::from_ladder(label, inst.state.purity(), &table, &ladder, order);
    if order >= 3 {
        record.third_order_closed_form = match third_order_bound(&table) {
            Ok(v) => Some(v),
            Err(Error::RankSaturated { .. }) => None,
            Err(e) => return Err(e.into()),
        };
    }
    if let Some(t_op) = &inst.estimator {
        match estimation_angle(t_op, &inst.state, &inst.hamiltonian, None, true) {
            Ok(geom) => {
                record.geometry = Some(GeometryRecord {
                    arc_length: geom.arc_length,
                    angle: geom.angle,
                    direct_angle: geom.direct_angle,
                    residual: geom.residual,
                    response: geom.response,
                });
            }
            Err(Error::DegenerateSurface { .. }) | Err(Error::InvalidGeometry { .. }) => {
                eprintln!("note: estimator present but geometry is degenerate; block omitted");
            }
            Err(e) => return Err(e.into()),
        }
    }
    let text = match format {
        Format::Json => {
            let mut s = to_json(&record);
            s.push('\n');
            s
        }
        Format::Csv => record.to_csv(),
    };
    emit(&text, out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_moments(path: &std::path::Path, max_order: usize, preshift: bool) -> Result<ExitCode, Failure> {
    if !max_order.is_multiple_of(2) || !(2..=16).contains(&max_order) {
        return Err(Failure::validation(format!(
            "--max-order must be even and within 2..=16, got {max_order}"
        )));
    }
    let inst = load_instance(path)?;
    let xi = principal_sqrt(&inst.state)?;
    let table =
        SkewMomentTable::build_with_options(&inst.hamiltonian, &xi, max_order, preshift)?;
    let dset = DerivativeSet::build(&xi, &inst.hamiltonian, max_order - 1)?;
    let scale = table.scale();

    let label = inst
        .label
        .clone()
        .unwrap_or_else(|| path.display().to_string());
    println!("label: {label}");
    println!(
        "dim: {}  purity: {}  preshift: {}",
        table.dim(),
        sig12(inst.state.purity()),
        if preshift { "on" } else { "off" }
    );
    println!(
        "{:>5}  {:<22}  {:<22}  {:<12}",
        "order", "closed-form", "oracle", "rel-deviation"
    );
    let s2 = table.moment(2)?;
    let fisher_dead = s2 <= skewbound::TOL_RANK * scale * scale;
    for order in (2..=max_order).step_by(2) {
        let closed = table.moment(order)?;
        let oracle = skew_moment_oracle(&dset, order - 1, 1)?;
        let floor = scale.powi(order as i32);
        let dev = (closed - oracle).abs() / closed.abs().max(oracle.abs()).max(floor);
        println!(
            "{order:>5}  {:<22}  {:<22}  {:.1e}",
            sig12(closed),
            sig12(oracle),
            dev
        );
        if fisher_dead {
            println!("(higher orders suppressed: zero Fisher information, [H, rho] = 0)");
            break;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_random(
    dim: usize,
    rank: usize,
    seed: u64,
    out: &std::path::Path,
    with_estimator: bool,
    label: Option<String>,
) -> Result<ExitCode, Failure> {
    if !(2..=16).contains(&dim) {
        return Err(Failure::validation(format!("--dim must be in 2..=16, got {dim}")));
    }
    if rank == 0 || rank > dim {
        return Err(Failure::validation(format!(
            "--rank must be in 1..={dim}, got {rank}"
        )));
    }
    // Draw order is part of the format: state, Hamiltonian, then estimator.
    let mut rng = SplitMix64::new(seed);
    let rho = ginibre_state(dim, rank, &mut rng)?;
    let h = gue_hamiltonian(dim, &mut rng);
    let estimator = with_estimator.then(|| gue_hamiltonian(dim, &mut rng));
    let file = InstanceFile {
        label: Some(label.unwrap_or_else(|| format!("dim{dim}-rank{rank}-seed{seed}"))),
        hamiltonian: MatrixJson::from_matrix(h.matrix()),
        state: MatrixJson::from_matrix(rho.matrix()),
        estimator: estimator.map(|t| MatrixJson::from_matrix(t.matrix())),
    };
    let mut text = to_json_pretty(&file);
    text.push('\n');
    fs::write(out, text)?;
    println!("wrote {}", out.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(dims: &[usize], trials: usize, seed: u64, depth: usize) -> Result<ExitCode, Failure> {
    if dims.is_empty() {
        return Err(Failure::validation("--dims must name at least one dimension"));
    }
    for &d in dims {
        if !(2..=16).contains(&d) {
            return Err(Failure::validation(format!("dimension {d} outside 2..=16")));
        }
    }
    if depth.is_multiple_of(2) || depth > skewbound::MAX_LADDER_DEPTH {
        return Err(Failure::validation(format!(
            "--depth must be odd and at most {}, got {depth}",
            skewbound::MAX_LADDER_DEPTH
        )));
    }
    println!("verify: dims {dims:?}, {trials} trials each, depth {depth}, master seed {seed}");
    let outcome = verify::run(dims, trials, seed, depth);
    for stat in &outcome.stats {
        println!(
            "  {:<22} {:>6} checks   worst dev/tol {:>9.3e}   {}",
            stat.name,
            stat.checks,
            stat.worst,
            if stat.passed() { "PASS" } else { "FAIL" }
        );
        for failure in stat.failures.iter().take(5) {
            println!("      failed: {failure}");
        }
    }
    if outcome.passed() {
        println!("all property groups passed over {} trials", outcome.trials);
        Ok(ExitCode::SUCCESS)
    } else {
        println!("property failures detected over {} trials", outcome.trials);
        Ok(ExitCode::from(1))
    }
}

fn cmd_geometry(path: &std::path::Path, t: Option<f64>, raw: bool) -> Result<ExitCode, Failure> {
    let inst = load_instance(path)?;
    let Some(t_op) = &inst.estimator else {
        return Err(Failure::validation(
            "instance has no estimator matrix; geometry needs one",
        ));
    };
    let report = estimation_angle(t_op, &inst.state, &inst.hamiltonian, t, !raw)?;
    let xi = principal_sqrt(&inst.state)?;
    let table = SkewMomentTable::build(&inst.hamiltonian, &xi, 2)?;
    let t_used = match t {
        Some(v) => v,
        None => expectation(t_op, &inst.state)?,
    };
    let s = arc_length(&table, t_used)?;
    let label = inst
        .label
        .clone()
        .unwrap_or_else(|| path.display().to_string());
    println!("label: {label}");
    println!("t = {}", sig12(t_used));
    println!("arc length s(t) = {}", sig12(s));
    println!("estimation angle theta = {} rad", sig12(report.angle));
    println!("direct angle arccos(<n,e1>) = {} rad", sig12(report.direct_angle));
    println!("residual |theta - direct| = {:.3e}", report.residual);
    println!("estimator response d<T>/dt = {}", sig12(report.response));
    Ok(ExitCode::SUCCESS)
}
