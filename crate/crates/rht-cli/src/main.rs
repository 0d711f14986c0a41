//! Command-line front end: validate simplicial-set files, compute minimal
//! models, and decide rational homotopy equivalence.
//!
//! Exit codes: 0 on success / Equivalent, 2 on NotEquivalent, 3 on Unknown,
//! 1 on any input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use rht_core::formats::{read_space, write_model, write_space, write_verdict};
use rht_core::pipeline::{
    decide_rhe_at, minimal_model_of_space, Answer, DEFAULT_BUDGET,
};
use rht_core::{fixtures, simplicial, FiniteSimplicialSet};

#[derive(Parser)]
#[command(
    name = "rht",
    about = "Exact-arithmetic rational homotopy computations on finite simplicial sets"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a simplicial-set file against the simplicial identities
    Validate {
        file: PathBuf,
        /// Emit violations as a JSON array instead of plain lines
        #[arg(long)]
        json: bool,
    },
    /// Compute the minimal model of a space up to a degree
    MinimalModel {
        file: PathBuf,
        /// Highest generator degree to compute
        #[arg(long)]
        degree: usize,
        /// Assert that the space is simply connected (required; only
        /// connectivity and H^1 = 0 can be checked from the data)
        #[arg(long)]
        assert_simply_connected: bool,
        /// Progress information on stderr
        #[arg(long)]
        verbose: bool,
    },
    /// Decide whether two spaces have the same rational homotopy type
    RhtEquiv {
        a: PathBuf,
        b: PathBuf,
        /// Search budget for the isomorphism solver
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Comparison degree (defaults to the larger input dimension)
        #[arg(long)]
        degree: Option<usize>,
        /// Assert that both spaces are simply connected (required)
        #[arg(long)]
        assert_simply_connected: bool,
        /// Progress information on stderr
        #[arg(long)]
        verbose: bool,
    },
    /// Write the bundled fixture corpus into a directory
    GenFixtures { dir: PathBuf },
}

fn load_space(path: &Path) -> Result<FiniteSimplicialSet> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    read_space(&text).with_context(|| format!("cannot parse {}", path.display()))
}

fn require_assertion(flag: bool) -> Result<()> {
    if !flag {
        bail!(
            "simple connectivity cannot be decided from the data (a perfect \
             fundamental group has H_1 = 0); pass --assert-simply-connected \
             to vouch for the input"
        );
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Validate { file, json } => {
            let text = std::fs::read_to_string(&file)
                .with_context(|| format!("cannot read {}", file.display()))?;
            let x = read_space(&text).with_context(|| format!("cannot parse {}", file.display()))?;
            let violations = x.validate();
            if json {
                let list: Vec<serde_json::Value> = violations
                    .iter()
                    .map(|v| {
                        serde_json::json!({"simplex": v.simplex, "message": v.message})
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&list)?);
            } else {
                for v in &violations {
                    println!("{v}");
                }
            }
            Ok(if violations.is_empty() { 0 } else { 1 })
        }
        Cmd::MinimalModel {
            file,
            degree,
            assert_simply_connected,
            verbose,
        } => {
            require_assertion(assert_simply_connected)?;
            let x = load_space(&file)?;
            if verbose {
                eprintln!(
                    "space: dimension {}, {} nondegenerate simplices",
                    x.dim(),
                    x.total_count()
                );
            }
            let start = std::time::Instant::now();
            let state = minimal_model_of_space(&x, degree)?;
            if verbose {
                eprintln!(
                    "model through degree {degree}: {} generators ({:.2?})",
                    state.model.generators().len(),
                    start.elapsed()
                );
            }
            println!("{}", write_model(&state.model));
            Ok(0)
        }
        Cmd::RhtEquiv {
            a,
            b,
            budget,
            degree,
            assert_simply_connected,
            verbose,
        } => {
            require_assertion(assert_simply_connected)?;
            let x = load_space(&a)?;
            let y = load_space(&b)?;
            let d = degree.unwrap_or_else(|| x.dim().max(y.dim()).max(2));
            if verbose {
                eprintln!(
                    "comparing stage-{d} models of {} (dim {}) and {} (dim {})",
                    a.display(),
                    x.dim(),
                    b.display(),
                    y.dim()
                );
            }
            let start = std::time::Instant::now();
            let verdict = decide_rhe_at(&x, &y, d, budget)?;
            if verbose {
                eprintln!("decided in {:.2?}", start.elapsed());
            }
            println!("{}", write_verdict(&verdict));
            Ok(match verdict.answer {
                Answer::Equivalent => 0,
                Answer::NotEquivalent => 2,
                Answer::Unknown => 3,
            })
        }
        Cmd::GenFixtures { dir } => {
            std::fs::create_dir_all(&dir)
                .with_context(|| format!("cannot create {}", dir.display()))?;
            let corpus: Vec<(&str, FiniteSimplicialSet)> = vec![
                ("delta2.json", simplicial::standard_simplex(2)),
                ("delta3.json", simplicial::standard_simplex(3)),
                ("sphere2.json", fixtures::sphere(2)),
                ("sphere3.json", fixtures::sphere(3)),
                ("sphere4.json", fixtures::sphere(4)),
                ("small_s2.json", fixtures::small_s2()),
                ("wedge_s2_s4.json", fixtures::wedge_of_spheres(2, 4)),
                ("cp2_9.json", fixtures::cp2_nine_vertex()),
            ];
            for (name, x) in corpus {
                let path = dir.join(name);
                std::fs::write(&path, write_space(&x) + "\n")
                    .with_context(|| format!("cannot write {}", path.display()))?;
                println!("{}", path.display());
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    // clap would exit with status 2 on a bad invocation, which is reserved
    // for NotEquivalent here
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
