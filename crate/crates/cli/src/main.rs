//! Command-line front end: parse graphs and graphons, evaluate densities,
//! run the necessary-condition pipeline and the certificate searches, and
//! verify persisted certificates.

mod certfile;
mod input;
mod records;
mod report;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use graphnorm::density::{
    brute_force_density, brute_force_multilinear, density_with, edge_deleted_densities_with,
    multilinear_density_with, EdgeAssignment, EvalOptions,
};
use graphnorm::norming::{
    falsify_holder, falsify_lemma, necessary_conditions_pipeline, verify_holder_certificate,
    verify_lemma_certificate,
};
use graphnorm::{catalog, selftest, tol, SearchBudget, StepGraphon64};
use input::{load_graphon, GraphInput};
use records::Records;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(
    name = "graphnorm",
    version,
    about = "Homomorphism densities on step graphons and necessary-condition \
             analysis for weakly norming graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the full necessary-condition pipeline on one graph.
    Analyze(AnalyzeArgs),
    /// Evaluate densities of a graph into one or more step graphons.
    Density(DensityArgs),
    /// Search for a violation certificate and persist it.
    Falsify(FalsifyArgs),
    /// Recheck a persisted certificate from scratch.
    Verify(VerifyArgs),
    /// List or build the named graph families.
    Catalog(CatalogArgs),
    /// Run the seeded property suites.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
struct BudgetArgs {
    /// Seeded restarts per falsifier.
    #[arg(long)]
    restarts: Option<u32>,
    /// Objective evaluations per restart.
    #[arg(long)]
    steps: Option<u32>,
    /// Largest kernel block count tried (2 or 3).
    #[arg(long)]
    q_max: Option<usize>,
    /// Kernel values are clamped to [0, cap] during the search.
    #[arg(long)]
    value_cap: Option<f64>,
    /// Violations below this (relative above unit scale) are noise.
    #[arg(long)]
    threshold: Option<f64>,
    /// Base seed for all searches.
    #[arg(long)]
    seed: Option<u64>,
    /// Global cap on objective evaluations per falsifier.
    #[arg(long)]
    max_evals: Option<u64>,
}

impl BudgetArgs {
    fn apply(&self, mut budget: SearchBudget) -> Result<SearchBudget> {
        if let Some(restarts) = self.restarts {
            budget.restarts = restarts;
        }
        if let Some(steps) = self.steps {
            budget.steps = steps;
        }
        if let Some(q_max) = self.q_max {
            if !(2..=3).contains(&q_max) {
                bail!("--q-max must be 2 or 3");
            }
            budget.block_counts = (2..=q_max).collect();
        }
        if let Some(cap) = self.value_cap {
            if !cap.is_finite() || cap <= 0.0 {
                bail!("--value-cap must be positive");
            }
            budget.value_cap = cap;
        }
        if let Some(threshold) = self.threshold {
            if !threshold.is_finite() || threshold <= 0.0 {
                bail!("--threshold must be positive");
            }
            budget.violation_threshold = threshold;
        }
        if let Some(seed) = self.seed {
            budget.seed = seed;
        }
        if self.max_evals.is_some() {
            budget.max_total_evals = self.max_evals;
        }
        Ok(budget)
    }
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    graph: GraphInput,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Emit key=value records instead of prose.
    #[arg(long)]
    records: bool,
}

#[derive(Debug, Args)]
struct DensityArgs {
    #[command(flatten)]
    graph: GraphInput,
    /// Step graphon file (text format).
    #[arg(long, conflicts_with = "constant")]
    graphon: Option<PathBuf>,
    /// Constant kernel value instead of a file.
    #[arg(long)]
    constant: Option<f64>,
    /// One graphon file per edge, in edge order.
    #[arg(long, num_args = 1.., conflicts_with_all = ["graphon", "constant"])]
    multilinear: Option<Vec<PathBuf>>,
    /// Print every edge-deleted density t_l in edge order.
    #[arg(long)]
    edge_deleted: bool,
    /// Force the brute-force path (guarded by the state-count cap).
    #[arg(long)]
    brute_force: bool,
    /// Bucket-elimination budget in table entries.
    #[arg(long, default_value_t = tol::TABLE_BUDGET)]
    table_budget: u64,
    #[arg(long)]
    records: bool,
}

#[derive(Debug, Args)]
struct FalsifyArgs {
    #[command(flatten)]
    graph: GraphInput,
    /// Which condition to attack.
    #[arg(long, value_parser = ["lemma", "holder"])]
    target: String,
    /// Certificate output path.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long)]
    records: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Certificate file written by `falsify`.
    certificate: PathBuf,
    #[arg(long)]
    records: bool,
}

#[derive(Debug, Args)]
struct CatalogArgs {
    #[command(subcommand)]
    action: CatalogAction,
}

#[derive(Debug, Subcommand)]
enum CatalogAction {
    /// List the curated families with their literature notes.
    List {
        #[arg(long)]
        records: bool,
    },
    /// Print a named graph as graph6.
    Build { name: String },
}

#[derive(Debug, Args)]
struct SelftestArgs {
    /// Reduce trial counts tenfold.
    #[arg(long)]
    quick: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    records: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Density(args) => cmd_density(args),
        Command::Falsify(args) => cmd_falsify(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Catalog(args) => cmd_catalog(args),
        Command::Selftest(args) => cmd_selftest(args),
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<u8> {
    let (source, graph) = args.graph.load()?;
    let budget = args.budget.apply(SearchBudget::auto_for(&graph))?;
    let report = necessary_conditions_pipeline::<f64>(&graph, &budget)
        .map_err(|e| anyhow!("pipeline failed: {e}"))?;
    let exit = u8::from(!report.passes());
    if args.records {
        let mut records = report::records(&source, &report);
        records.push("exit", exit);
        print!("{}", records.render());
    } else {
        print!("{}", report::human(&source, &report));
    }
    Ok(exit)
}

/// 15 significant digits, as the density output contract requires.
fn sig15(value: f64) -> String {
    format!("{value:.14e}")
}

fn cmd_density(args: DensityArgs) -> Result<u8> {
    let (source, graph) = args.graph.load()?;
    let options = EvalOptions {
        table_budget: args.table_budget,
    };
    let mut records = Records::new("density");
    records.push("graph", &source);
    records.push("graph6", graph.to_graph6());

    if let Some(files) = &args.multilinear {
        if args.edge_deleted {
            bail!("--edge-deleted applies to a single kernel, not --multilinear");
        }
        let kernels: Vec<StepGraphon64> =
            files.iter().map(load_graphon).collect::<Result<_>>()?;
        if kernels.len() != graph.edge_count() {
            bail!(
                "multilinear form needs {} kernels (one per edge), got {}",
                graph.edge_count(),
                kernels.len()
            );
        }
        let assignment = EdgeAssignment::new(graph, kernels)?;
        let value = if args.brute_force {
            brute_force_multilinear(&assignment)?
        } else {
            multilinear_density_with(&assignment, &options)?
        };
        records.push("method", value.method);
        records.push("value", sig15(value.value));
        emit(args.records, &records, || {
            format!(
                "multilinear density = {} ({})\n",
                sig15(value.value),
                value.method
            )
        });
        return Ok(0);
    }

    let kernel = match (&args.graphon, args.constant) {
        (Some(path), _) => load_graphon(path)?,
        (None, Some(c)) => StepGraphon64::constant(c).map_err(|e| anyhow!("{e}"))?,
        (None, None) => bail!("no kernel given: use --graphon, --constant, or --multilinear"),
    };

    if args.edge_deleted {
        let values = edge_deleted_densities_with(&graph, &kernel, &options)?;
        for (l, v) in values.iter().enumerate() {
            records.push(&format!("t.{l}"), sig15(*v));
        }
        emit(args.records, &records, || {
            let joined: Vec<String> = values.iter().map(|&v| sig15(v)).collect();
            format!("edge-deleted densities = {}\n", joined.join(" "))
        });
        return Ok(0);
    }

    let value = if args.brute_force {
        brute_force_density(&graph, &kernel)?
    } else {
        density_with(&graph, &kernel, &options)?
    };
    records.push("method", value.method);
    if let Some(plan) = &value.plan {
        records.push("width", plan.induced_width);
    }
    records.push("value", sig15(value.value));
    emit(args.records, &records, || {
        format!("density = {} ({})\n", sig15(value.value), value.method)
    });
    Ok(0)
}

fn cmd_falsify(args: FalsifyArgs) -> Result<u8> {
    let (source, graph) = args.graph.load()?;
    let budget = args.budget.apply(SearchBudget::default())?;
    let mut records = Records::new("falsify");
    records.push("graph", &source);
    records.push("target", &args.target);
    let output = args
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}_certificate.txt", args.target)));

    let written = match args.target.as_str() {
        "lemma" => falsify_lemma::<f64>(&graph, &budget)?.map(|cert| {
            let text = certfile::emit_lemma(&graph, &cert, budget.violation_threshold);
            records.push("gap", cert.gap);
            text
        }),
        "holder" => falsify_holder::<f64>(&graph, &budget)?.map(|cert| {
            let text = certfile::emit_holder(&graph, &cert, budget.violation_threshold);
            records.push("violation", cert.violation);
            text
        }),
        _ => unreachable!("clap restricts the target values"),
    };

    match written {
        Some(text) => {
            std::fs::write(&output, text)
                .with_context(|| format!("writing {}", output.display()))?;
            records.push("found", true);
            records.push("certificate", output.display());
            emit(args.records, &records, || {
                format!("certificate found; written to {}\n", output.display())
            });
            Ok(0)
        }
        None => {
            records.push("found", false);
            emit(args.records, &records, || {
                "none found within budget (inconclusive: weak norming is not established)\n"
                    .to_string()
            });
            Ok(3)
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<u8> {
    let text = std::fs::read_to_string(&args.certificate)
        .with_context(|| format!("reading {}", args.certificate.display()))?;
    let certificate = certfile::parse(&text)?;
    let mut records = Records::new("verify");
    records.push("file", args.certificate.display());
    let result = match &certificate {
        certfile::Certificate::Lemma {
            graph,
            cert,
            threshold,
        } => {
            records.push("kind", "lemma");
            verify_lemma_certificate(graph, cert, tol::CLI_VERIFY, *threshold)
        }
        certfile::Certificate::Holder {
            graph,
            cert,
            threshold,
        } => {
            records.push("kind", "holder");
            verify_holder_certificate(graph, cert, tol::CLI_VERIFY, *threshold)
        }
    };
    match result {
        Ok(()) => {
            records.push("valid", true);
            emit(args.records, &records, || {
                "certificate verifies: densities recomputed from scratch reproduce the claim\n"
                    .to_string()
            });
            Ok(0)
        }
        Err(reason) => {
            records.push("valid", false);
            records.push("reason", reason.replace('\n', " "));
            emit(args.records, &records, || {
                format!("certificate REJECTED: {reason}\n")
            });
            Ok(1)
        }
    }
}

fn cmd_catalog(args: CatalogArgs) -> Result<u8> {
    match args.action {
        CatalogAction::List { records: as_records } => {
            if as_records {
                let mut records = Records::new("catalog");
                for entry in catalog::listing() {
                    records.push(
                        &format!("entry.{}.graph6", entry.name),
                        entry.graph.to_graph6(),
                    );
                    records.push(&format!("entry.{}.status", entry.name), entry.known_status);
                }
                print!("{}", records.render());
            } else {
                for entry in catalog::listing() {
                    println!(
                        "{:<10} {:>3} vertices {:>3} edges  graph6 {:<12} {}",
                        entry.name,
                        entry.graph.vertex_count(),
                        entry.graph.edge_count(),
                        entry.graph.to_graph6(),
                        entry.known_status
                    );
                }
            }
            Ok(0)
        }
        CatalogAction::Build { name } => {
            let entry = catalog::build(&name)
                .ok_or_else(|| anyhow!("unknown catalog name {name:?}"))?;
            println!("{}", entry.graph.to_graph6());
            Ok(0)
        }
    }
}

fn cmd_selftest(args: SelftestArgs) -> Result<u8> {
    let started = std::time::Instant::now();
    let outcomes = selftest::run_all(args.quick, args.seed);
    let failed = outcomes.iter().any(|o| !o.passed());
    if args.records {
        let mut records = Records::new("selftest");
        records.push("seed", args.seed);
        records.push("quick", args.quick);
        for outcome in &outcomes {
            records.push(&format!("suite.{}.trials", outcome.name), outcome.trials);
            records.push(
                &format!("suite.{}.failures", outcome.name),
                outcome.failures.len(),
            );
            records.push(
                &format!("suite.{}.worst", outcome.name),
                format!("{:e}", outcome.worst),
            );
        }
        records.push("passed", !failed);
        print!("{}", records.render());
    } else {
        for outcome in &outcomes {
            println!("{}", outcome.human_line());
            for failure in outcome.failures.iter().take(5) {
                println!("    {failure}");
            }
        }
        println!(
            "selftest {} in {:?}",
            if failed { "FAILED" } else { "passed" },
            started.elapsed()
        );
    }
    Ok(u8::from(failed))
}

fn emit(as_records: bool, records: &Records, human: impl FnOnce() -> String) {
    if as_records {
        print!("{}", records.render());
    } else {
        print!("{}", human());
    }
}
