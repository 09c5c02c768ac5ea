//! Command-line front end over the verification suites.  Stdout is
//! byte-identical across runs of the same configuration: report bodies
//! carry no timing, which goes to stderr instead.  Exit code 0 means
//! every check passed, 1 means some check failed, 2 means the request
//! itself was unusable.

mod checks;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mdv_core::report::{CheckReport, Envelope};

#[derive(Parser)]
#[command(name = "mdv", about = "Exact verification suites for the effective-cone toolkit")]
struct Cli {
    /// Emit the JSON report body instead of text lines.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for independent check batches (only `all` fans out).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the defining polynomial identities and memberships at m.
    GnwVerify {
        #[arg(long)]
        m: u64,
        /// Also build and check the characteristic-p witness.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Compare the 6x6 determinant with its closed form across a range.
    DeterminantTable {
        #[arg(long, default_value_t = 4)]
        m_from: u64,
        #[arg(long, default_value_t = 40)]
        m_to: u64,
    },
    /// Search level by level for sections that are not curve multiples.
    WitnessSearch {
        /// Family parameter; every section must be a multiple here.
        #[arg(long, conflicts_with = "huneke")]
        m: Option<u64>,
        /// Run on the (1, 2, 3) plane instead, where witnesses exist.
        #[arg(long)]
        huneke: bool,
        #[arg(long)]
        k_max: Option<u64>,
    },
    /// Check the symbolic-power memberships of the witness polynomials.
    SymbolicPower {
        #[arg(long)]
        m: u64,
    },
    /// Quotient the ray family by block weights (a, b, c).
    LmQuotient {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        c: usize,
    },
    /// Rebuild the fan chain up to the full family at n markings.
    LmChain {
        #[arg(long)]
        n: usize,
    },
    /// Validate a fan fixture and certify or refute projectivity.
    FanCheck {
        #[arg(long)]
        file: PathBuf,
        /// Pass when the fan has no strictly convex support function.
        #[arg(long)]
        expect_refuted: bool,
    },
    /// Check the compatibility conditions on the boundary sections.
    CompatibleSections {
        #[arg(long)]
        n: usize,
        /// Also run the full retirement transformation.
        #[arg(long)]
        transform: bool,
    },
    /// Run the whole battery over the default parameter sets.
    All {
        /// Root of the fixture corpus.
        #[arg(long, default_value = "fixtures")]
        fixtures: PathBuf,
    },
}

/// Cone-validation budget: how many cone pairs a projectivity
/// certificate or fan revalidation may touch.  Rank <= 3 fans are
/// always certified regardless.
fn budget_from_env() -> Result<u64, String> {
    match std::env::var("MDV_BUDGET") {
        Ok(text) => text
            .parse::<u64>()
            .map_err(|_| format!("MDV_BUDGET must be a nonnegative integer, got \"{text}\"")),
        Err(std::env::VarError::NotPresent) => Ok(2000),
        Err(e) => Err(format!("MDV_BUDGET is not readable: {e}")),
    }
}

fn dispatch(command: &Command, budget: u64, jobs: usize) -> Result<Vec<CheckReport>, String> {
    match command {
        Command::GnwVerify { m, p } => checks::gnw_verify(*m, *p),
        Command::DeterminantTable { m_from, m_to } => checks::determinant_table(*m_from, *m_to),
        Command::WitnessSearch { m, huneke, k_max } => match (m, huneke) {
            (Some(m), false) => checks::witness_search_gnw(*m, k_max.unwrap_or(2)),
            (None, true) => checks::witness_search_huneke(k_max.unwrap_or(6)),
            (None, false) => Err("pick a mode: --m M or --huneke".to_string()),
            (Some(_), true) => unreachable!("clap rejects the conflict"),
        },
        Command::SymbolicPower { m } => checks::symbolic_power(*m),
        Command::LmQuotient { a, b, c } => checks::lm_quotient(*a, *b, *c),
        Command::LmChain { n } => checks::lm_chain(*n, budget),
        Command::FanCheck { file, expect_refuted } => {
            checks::fan_check(file, *expect_refuted, budget)
        }
        Command::CompatibleSections { n, transform } => {
            checks::compatible_sections(*n, *transform)
        }
        Command::All { fixtures } => run_all(fixtures, budget, jobs),
    }
}

/// The full battery.  Suites are independent, so `--jobs` may fan them
/// out; the merged report keeps this declaration order either way.
fn run_all(fixtures: &std::path::Path, budget: u64, jobs: usize) -> Result<Vec<CheckReport>, String> {
    type Suite = Box<dyn Fn() -> Result<Vec<CheckReport>, String> + Send + Sync>;
    let mut suites: Vec<Suite> = Vec::new();
    for m in [4u64, 5, 7] {
        suites.push(Box::new(move || checks::gnw_verify(m, None)));
    }
    for (m, p) in [(4u64, 3u64), (4, 5), (4, 7), (5, 3), (5, 5)] {
        suites.push(Box::new(move || checks::char_p(m, p).map(|r| vec![r])));
    }
    suites.push(Box::new(|| checks::determinant_table(4, 40)));
    suites.push(Box::new(|| checks::witness_search_gnw(4, 2)));
    suites.push(Box::new(|| checks::witness_search_huneke(6)));
    for (a, b, c) in [(1usize, 1usize, 1usize), (1, 2, 4), (25, 72, 29)] {
        suites.push(Box::new(move || checks::lm_quotient(a, b, c)));
    }
    for n in [6usize, 7] {
        suites.push(Box::new(move || checks::lm_chain(n, budget)));
    }
    let fans = [
        ("fans/projective_plane.json", false),
        ("fans/p1xp1.json", false),
        ("fans/hirzebruch_3.json", false),
        ("fans/cube_twisted.json", true),
    ];
    for (rel, expect_refuted) in fans {
        let file = fixtures.join(rel);
        suites.push(Box::new(move || checks::fan_check(&file, expect_refuted, budget)));
    }
    for n in 5usize..=9 {
        suites.push(Box::new(move || checks::compatible_sections(n, true)));
    }

    let batches: Result<Vec<Vec<CheckReport>>, String> = if jobs > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| e.to_string())?;
        pool.install(|| suites.par_iter().map(|suite| suite()).collect())
    } else {
        suites.iter().map(|suite| suite()).collect()
    };
    Ok(batches?.into_iter().flatten().collect())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let budget = match budget_from_env() {
        Ok(budget) => budget,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(2);
        }
    };
    match dispatch(&cli.command, budget, cli.jobs.max(1)) {
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Ok(reports) => {
            let envelope = Envelope::new(reports);
            if cli.json {
                let body = serde_json::json!({ "reports": envelope.body_json() });
                println!("{}", serde_json::to_string_pretty(&body).expect("reports serialize"));
            } else {
                for report in &envelope.reports {
                    println!("{}", report.render_line());
                }
                let total = envelope.reports.len();
                let passed =
                    envelope.reports.iter().filter(|r| r.status == mdv_core::Status::Pass).count();
                if passed == total {
                    println!("all {total} checks passed");
                } else {
                    println!("{total} checks: {passed} passed, {} did not", total - passed);
                }
            }
            eprintln!(
                "{}",
                serde_json::to_string(&envelope.timing_json()).expect("timings serialize")
            );
            ExitCode::from(envelope.exit_code() as u8)
        }
    }
}
