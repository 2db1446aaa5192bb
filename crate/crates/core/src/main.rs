use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use vofham::benchmarks::{compare_series, Benchmark};
use vofham::oracle::check_power_law;
use vofham::report::{emit_curves, fmt_float, run_table, write_table, RunConfig};
use vofham::{generate_series, Error, GridConvention, Result};

#[derive(Parser)]
#[command(
    name = "vofham",
    version,
    about = "Homotopy analysis series for variable-order fractional diffusion"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    Paper,
    Full,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Reference problem: 1 (linear) or 2 (nonlinear)
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    problem: Option<u8>,
    /// Read the run configuration from a JSON file instead
    #[arg(long, conflicts_with = "problem")]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    grid_convention: Option<Convention>,
    /// Use the published spacings dx = 10/34, dt = 1/34 for problem 1
    #[arg(long)]
    paper_literal_deltas: bool,
    /// Output directory (VOFHAM_OUT takes precedence)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize hbar for several series lengths
    Table {
        #[command(flatten)]
        run: RunArgs,
        /// Comma-separated term counts; empty for none
        #[arg(long, value_parser = parse_counts)]
        terms: Option<Counts>,
    },
    /// Write residual and solution curves
    Curves {
        #[command(flatten)]
        run: RunArgs,
        /// Evaluate the solution at this hbar instead of the optimum
        #[arg(long, allow_hyphen_values = true)]
        hbar: Option<f64>,
        #[arg(long, default_value_t = 201)]
        points: usize,
        /// Number of series terms
        #[arg(long)]
        terms: Option<usize>,
    },
    /// Generate the series and compare it with the published terms
    Series {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        problem: u8,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        print: bool,
    },
    /// Check the quadrature oracle against the power rules
    ValidateOracle {
        #[arg(long, default_value_t = 4096)]
        nodes: usize,
    },
}

#[derive(Clone)]
struct Counts(Vec<usize>);

fn parse_counts(s: &str) -> std::result::Result<Counts, String> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse::<usize>()
                .map_err(|e| format!("bad term count {p:?}: {e}"))
        })
        .collect::<std::result::Result<_, _>>()
        .map(Counts)
}

fn load_config(run: &RunArgs) -> Result<RunConfig> {
    let mut cfg = match (&run.config, run.problem) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            RunConfig::from_json(&text)?
        }
        (None, Some(n)) => {
            let b = Benchmark::from_number(n).expect("range checked by clap");
            RunConfig::benchmark(b, run.paper_literal_deltas)?
        }
        (None, None) => return Err(Error::Config("pass --problem or --config".into())),
    };
    if let Some(c) = run.grid_convention {
        cfg.grid.convention = match c {
            Convention::Paper => GridConvention::PaperLiteral,
            Convention::Full => GridConvention::FullGrid,
        };
    }
    if let Some(dir) = &run.out {
        cfg.output_dir = dir.clone();
    }
    Ok(cfg)
}

fn table(run: &RunArgs, terms: Option<Counts>) -> Result<()> {
    let cfg = load_config(run)?;
    let counts = terms.map(|c| c.0).unwrap_or_else(|| {
        cfg.benchmark_kind()
            .map(|b| b.default_terms())
            .unwrap_or_else(|| vec![cfg.terms])
    });
    let report = run_table(&cfg, &counts)?;
    println!(
        "{} ({}, {} x-derivatives)",
        report.problem, report.grid_convention, report.spatial_derivative
    );
    println!("terms  E_min             hbar*");
    for r in &report.rows {
        println!(
            "{:>5}  {:<16}  {}",
            r.terms,
            fmt_float(r.e_min),
            fmt_float(r.hbar_star)
        );
    }
    println!("counting N terms as N corrections:");
    for r in &report.rows_corrections {
        println!(
            "{:>5}  {:<16}  {}",
            r.terms,
            fmt_float(r.e_min),
            fmt_float(r.hbar_star)
        );
    }
    for n in &report.notes {
        println!("note: {n}");
    }
    for p in write_table(&cfg, &report)? {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn curves(run: &RunArgs, hbar: Option<f64>, points: usize, terms: Option<usize>) -> Result<()> {
    let mut cfg = load_config(run)?;
    if hbar.is_some() {
        cfg.hbar = hbar;
    }
    if let Some(n) = terms {
        cfg.terms = n;
    }
    if points < 2 {
        return Err(Error::Config("--points must be at least 2".into()));
    }
    let (c, files) = emit_curves(&cfg, points)?;
    println!("hbar = {}", fmt_float(c.hbar));
    for p in files {
        println!("wrote {}", p.display());
    }
    Ok(())
}

fn series(problem: u8, order: usize, print: bool) -> Result<()> {
    let b = Benchmark::from_number(problem).expect("range checked by clap");
    let problem = b.problem()?;
    let s = generate_series(&problem, order)?;
    if print {
        print!("{}", s.dump());
    }
    let flags = compare_series(s.terms(), &b.printed_series(&problem), 1e-12);
    if flags.is_empty() {
        println!(
            "# agrees with the published terms up to u{}",
            order.min(b.printed_series(&problem).len() - 1)
        );
    }
    for f in flags {
        println!("# discrepancy: {f}");
    }
    Ok(())
}

fn validate_oracle(nodes: usize) -> Result<()> {
    let mut failed = 0;
    for alpha in [0.3, 0.5, 0.8] {
        for beta in [1.0, 2.0] {
            let r = check_power_law(alpha, beta, 1.0, nodes)?;
            for (name, c) in [("derivative", r.derivative), ("integral", r.integral)] {
                let ok = c.passes(1e-3);
                failed += usize::from(!ok);
                println!(
                    "{} alpha={alpha} beta={beta} {name}: rel_error={:.3e} order={:.3}",
                    if ok { "PASS" } else { "FAIL" },
                    c.rel_error,
                    c.order
                );
            }
        }
    }
    if failed > 0 {
        return Err(Error::Numerical(format!("{failed} oracle checks failed")));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Table { run, terms } => table(&run, terms),
        Command::Curves {
            run,
            hbar,
            points,
            terms,
        } => curves(&run, hbar, points, terms),
        Command::Series {
            problem,
            order,
            print,
        } => series(problem, order, print),
        Command::ValidateOracle { nodes } => validate_oracle(nodes),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
