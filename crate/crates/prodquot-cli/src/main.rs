//! Command-line front end for the product-quotient classification
//! library.
//!
//! Exit codes: 0 on success, 1 on domain errors, 2 on usage errors
//! (the latter is clap's default).

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};

use prodquot::basket::{enumerate_baskets, Basket};
use prodquot::catalog::GroupCatalog;
use prodquot::classify::{
    existing_surfaces, existing_surfaces_cached, report_to_csv, ClassificationReport,
    ClassifyOptions,
};
use prodquot::data;
use prodquot::minimality::{minimality_heuristic, FilterFlags};
use prodquot::rat::parse_rat;
use prodquot::signature::enumerate_signatures;
use prodquot::singularity::SingularityType;
use prodquot::surface::SurfaceRecord;
use prodquot::tables::{load_table_csv, parse_table_csv, verify_tables};

#[derive(Parser)]
#[command(name = "prodquot", version, about = "Construct and classify product-quotient surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the invariants of one singularity type q/n.
    Sing {
        /// The type, e.g. 1/6.
        r#type: String,
    },
    /// Basket operations.
    Basket {
        #[command(subcommand)]
        command: BasketCommand,
    },
    /// Signature operations.
    Signatures {
        #[command(subcommand)]
        command: SignaturesCommand,
    },
    /// Search for all regular product-quotient surfaces with the given
    /// geometric genus and gamma.
    Classify(ClassifyArgs),
    /// Dualize surfaces from a surface or report JSON file.
    Dual {
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Minimality diagnostics for surfaces from a surface or report JSON
    /// file, recomputed numerically (no group search).
    Minimality {
        #[arg(long = "in")]
        input: PathBuf,
        /// Disable the cap e_i <= max(1, b_i - 3).
        #[arg(long)]
        no_b3_cap: bool,
        /// Disable the at-most-one-(-2)-curve rule.
        #[arg(long)]
        no_two_curve_rule: bool,
    },
    /// Check the bundled (or given) reference tables row by row.
    VerifyTables {
        /// CSV file with columns table,row,gamma,K2,SingX,t1,t2,G,expected.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// Print every row, not only the flagged ones.
        #[arg(long)]
        verbose: bool,
    },
}

#[derive(Subcommand)]
enum BasketCommand {
    /// Print the aggregated invariants of a basket such as "2x1/2,1/6,5/6".
    Invariants { basket: String },
    /// Enumerate all admissible baskets for given chi and gamma.
    Enumerate {
        #[arg(long, default_value_t = 1)]
        chi: u64,
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        max_mult: u64,
        /// Do not require gamma + p_g to be a nonnegative integer.
        #[arg(long)]
        exploratory: bool,
    },
}

#[derive(Subcommand)]
enum SignaturesCommand {
    /// Enumerate candidate signatures for given xi and basket.
    Enumerate {
        #[arg(long)]
        xi: String,
        #[arg(long, default_value = "{}")]
        basket: String,
        #[arg(long, default_value_t = 0)]
        g0: u32,
    },
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    pg: u64,
    #[arg(long)]
    gamma: i64,
    #[arg(long)]
    max_mult: u64,
    /// Catalog file; "bundled" selects the built-in catalog, omitting the
    /// flag runs with the built-in group constructions only.
    #[arg(long)]
    catalog: Option<String>,
    /// Restrict the search to these group orders, e.g. --orders 5,25.
    #[arg(long, value_delimiter = ',')]
    orders: Option<Vec<u64>>,
    /// Write the full report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the surfaces as CSV with columns K2,SingX,t1,t2,G.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Cache reports on disk keyed by every run parameter.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    /// Worker thread cap.
    #[arg(long)]
    jobs: Option<usize>,
    /// Exclude the built-in group constructions.
    #[arg(long)]
    no_builtins: bool,
    /// Deduplicate with inner automorphisms only.
    #[arg(long)]
    inner_only: bool,
    /// Candidate budget for full automorphism computation.
    #[arg(long, default_value_t = 1_000_000)]
    aut_budget: usize,
    /// Node budget per generating-vector search.
    #[arg(long, default_value_t = 20_000_000)]
    search_budget: u64,
    /// Zero out timing so identical runs produce identical JSON.
    #[arg(long)]
    deterministic: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Sing { r#type } => {
            let t: SingularityType = r#type.parse()?;
            let inv = t.invariants();
            let hj: Vec<String> = inv.hj.iter().map(|b| b.to_string()).collect();
            println!(
                "l={} gamma={} mu={} I={} hj=[{}]",
                inv.l,
                inv.gamma,
                inv.mu,
                inv.index,
                hj.join(",")
            );
        }
        Command::Basket { command } => match command {
            BasketCommand::Invariants { basket } => {
                let b: Basket = basket.parse()?;
                let inv = b.invariants();
                println!(
                    "basket={} l={} gamma={} mu={} I={} e={} k={} B={}",
                    b, inv.l, inv.gamma, inv.mu, inv.index, inv.e_legacy, inv.k_legacy,
                    inv.b_legacy
                );
                match b.admissible() {
                    Some(_) => println!("admissible=yes"),
                    None => println!("admissible=no"),
                }
            }
            BasketCommand::Enumerate {
                chi,
                gamma,
                max_mult,
                exploratory,
            } => {
                let gamma = parse_rat(&gamma)?;
                let baskets = enumerate_baskets(chi, &gamma, max_mult, !exploratory)?;
                for b in &baskets {
                    println!("{b}");
                }
                eprintln!("{} baskets", baskets.len());
            }
        },
        Command::Signatures { command } => match command {
            SignaturesCommand::Enumerate { xi, basket, g0 } => {
                let xi = parse_rat(&xi)?;
                let basket: Basket = basket.parse()?;
                let sigs = enumerate_signatures(&xi, &basket, g0);
                for s in &sigs {
                    println!("{}", s.compact());
                }
                eprintln!("{} signatures", sigs.len());
            }
        },
        Command::Classify(args) => classify(args)?,
        Command::Dual { input } => {
            let text = std::fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            for record in read_records(&text)? {
                let dual = record.dual(None).map_err(|e| anyhow!(e))?;
                println!("{}", serde_json::to_string_pretty(&dual)?);
            }
        }
        Command::Minimality {
            input,
            no_b3_cap,
            no_two_curve_rule,
        } => {
            let text = std::fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let filters = FilterFlags {
                b_minus_3_cap: !no_b3_cap,
                two_curve_rule: !no_two_curve_rule,
            };
            for record in read_records(&text)? {
                let report = minimality_heuristic(&record.numerics(), filters);
                println!(
                    "{} basket={} verdict={}",
                    record.group_id,
                    record.basket,
                    serde_json::to_string(&report.verdict)?
                );
                for c in &report.candidates {
                    println!("  candidate mu1={} mu2={} e={:?}", c.mu1, c.mu2, c.e);
                }
            }
        }
        Command::VerifyTables { fixtures, verbose } => {
            let rows = match &fixtures {
                Some(path) => load_table_csv(path)?,
                None => parse_table_csv(data::BUNDLED_TABLES)?,
            };
            let report = verify_tables(&rows);
            for r in &report.rows {
                if verbose || !r.passed() {
                    let state = if r.passed() { "pass" } else { "FLAGGED" };
                    println!("{} row {} ({}): {state}", r.table, r.row, r.group);
                    for d in &r.discrepancies {
                        println!("    {d}");
                    }
                }
            }
            println!("{}", report.summary());
            if !report.all_as_expected() {
                bail!("some rows did not match their expected outcome");
            }
        }
    }
    Ok(())
}

/// Accepts either a single surface record or a whole classification
/// report.
fn read_records(text: &str) -> anyhow::Result<Vec<SurfaceRecord>> {
    if let Ok(report) = ClassificationReport::from_json(text) {
        return Ok(report.surfaces);
    }
    let record: SurfaceRecord = serde_json::from_str(text).context(
        "input is neither a classification report nor a single surface record",
    )?;
    Ok(vec![record])
}

fn classify(args: ClassifyArgs) -> anyhow::Result<()> {
    let catalog = match args.catalog.as_deref() {
        None => None,
        Some("bundled") => Some(data::bundled_catalog()),
        Some(path) => Some(GroupCatalog::load(std::path::Path::new(path))?),
    };
    let opts = ClassifyOptions {
        max_mult: args.max_mult,
        orders: args
            .orders
            .map(|o| o.into_iter().collect::<BTreeSet<u64>>()),
        use_builtins: !args.no_builtins,
        aut_budget: args.aut_budget,
        search_budget: args.search_budget,
        full_aut: !args.inner_only,
        filters: FilterFlags::default(),
        deterministic: args.deterministic,
    };

    let run = || -> anyhow::Result<ClassificationReport> {
        Ok(match &args.cache_dir {
            Some(dir) => {
                existing_surfaces_cached(args.pg, args.gamma, catalog.as_ref(), &opts, dir)?
            }
            None => existing_surfaces(args.pg, args.gamma, catalog.as_ref(), &opts)?,
        })
    };
    let report = match args.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()?
            .install(run)?,
        None => run()?,
    };

    println!(
        "classify pg={} gamma={} M={} (exhaustive needs M up to {})",
        report.params.pg, report.params.gamma, report.params.max_mult,
        report.multiplicity_ceiling
    );
    for f in report.families() {
        println!(
            "family: K2={} basket={} t1={} t2={} |G|={} groups={} classes={}",
            f.k2,
            f.basket,
            f.t1.compact(),
            f.t2.compact(),
            f.order,
            f.group_ids.join("/"),
            f.classes
        );
    }
    for s in &report.skipped {
        println!(
            "skipped: |G|={} basket={} t1={} t2={} reason={}",
            s.order,
            s.basket,
            s.t1.compact(),
            s.t2.compact(),
            serde_json::to_string(&s.reason)?
        );
    }
    println!(
        "{} surface classes, {} families, {} skipped",
        report.surfaces.len(),
        report.families().len(),
        report.skipped.len()
    );

    if let Some(path) = &args.json {
        std::fs::write(path, report.to_json().map_err(|e| anyhow!(e))?)?;
    }
    if let Some(path) = &args.csv {
        std::fs::write(path, report_to_csv(&report))?;
    }
    Ok(())
}
