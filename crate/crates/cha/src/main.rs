//! Command-line front door: load a logic program, apply the requested
//! transformations, run the polyhedral analysis, and print the results.
//!
//! Exit codes: 0 success, 1 parse error, 2 configuration error,
//! 3 non-convergence.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use cha::ast::{Clause, Program};
use cha::engine::{self, AnalysisConfig, EngineError, WpStrategy};
use cha::frontend;
use cha::parser;
use cha::report::RunReport;
use cha::transforms::{self, Norm};

#[derive(Parser)]
#[command(
    name = "cha",
    about = "Convex polyhedral analyser for constraint logic programs",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NormArg {
    TermSize,
    ListLength,
}

impl From<NormArg> for Norm {
    fn from(n: NormArg) -> Norm {
        match n {
            NormArg::TermSize => Norm::TermSize,
            NormArg::ListLength => Norm::ListLength,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Analyse a program: one convex polyhedron per predicate.
    Analyze {
        file: PathBuf,
        /// Iterations of strict growth at a widening point before widening.
        #[arg(long, default_value_t = 0)]
        delay: usize,
        /// Number of narrowing passes after stabilisation.
        #[arg(long, default_value_t = 0)]
        narrow: usize,
        /// Bound widening by the constraints of the analysed clauses.
        #[arg(long)]
        widen_up_to: bool,
        /// Widening points: `feedback`, `cutloop`, or `@file` with one
        /// `name/arity` per line.
        #[arg(long, default_value = "cutloop")]
        wp: String,
        /// Specialise for a goal (e.g. `p(X,10)`) before analysing.
        #[arg(long)]
        qa: Option<String>,
        /// Abstract symbolic terms by a size norm first.
        #[arg(long)]
        norm: Option<NormArg>,
        /// Trace every lattice operation.
        #[arg(long)]
        verbose: bool,
        /// Print constraint and iteration counts.
        #[arg(long)]
        show_counts: bool,
        /// Print the wall-clock analysis time.
        #[arg(long)]
        time: bool,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Print the transformed program instead of analysing it.
    Transform {
        file: PathBuf,
        #[arg(long)]
        qa: Option<String>,
        #[arg(long)]
        norm: Option<NormArg>,
    },
}

fn fail(code: u8, msg: &str) -> ExitCode {
    eprintln!("error: {}", msg);
    ExitCode::from(code)
}

fn load_program(file: &PathBuf) -> Result<Program, (u8, String)> {
    let src = fs::read_to_string(file)
        .map_err(|e| (1u8, format!("cannot read {}: {}", file.display(), e)))?;
    let mut prog = parser::parse_program(&src)
        .map_err(|e| (1u8, format!("{}: {}", file.display(), e)))?;
    frontend::standardise_heads(&mut prog);
    frontend::normalise_calls(&mut prog);
    Ok(prog)
}

fn parse_goal(goal: &str) -> Result<Clause, (u8, String)> {
    let text = goal.trim();
    let text = if text.ends_with('.') {
        text.to_string()
    } else {
        format!("{}.", text)
    };
    let mut c = parser::parse_clause(&text)
        .map_err(|e| (1u8, format!("goal `{}`: {}", goal, e)))?;
    // a goal may carry constraints (`main(X,Y) :- X =< 100`) but no calls
    if c.body.iter().any(|l| matches!(l, cha::ast::BodyLiteral::Call(_))) {
        return Err((2, format!("goal `{}` may only constrain its arguments", goal)));
    }
    frontend::standardise_clause_head(&mut c);
    Ok(c)
}

fn apply_transforms(
    mut prog: Program,
    qa: &Option<String>,
    norm: &Option<NormArg>,
) -> Result<Program, (u8, String)> {
    if let Some(n) = norm {
        transforms::size_abstract(&mut prog, (*n).into());
    }
    if let Some(goal) = qa {
        let goal = parse_goal(goal)?;
        prog = transforms::query_answer_transform(&prog, &goal);
    }
    Ok(prog)
}

fn parse_wp(spec: &str) -> Result<WpStrategy, (u8, String)> {
    match spec {
        "feedback" => Ok(WpStrategy::Feedback),
        "cutloop" => Ok(WpStrategy::CutLoop),
        s if s.starts_with('@') => {
            let path = &s[1..];
            let text = fs::read_to_string(path)
                .map_err(|e| (2u8, format!("cannot read widening points {}: {}", path, e)))?;
            let mut points = Vec::new();
            for line in text.lines() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('%') || line.starts_with('#') {
                    continue;
                }
                let (name, arity) = line
                    .rsplit_once('/')
                    .ok_or_else(|| (2u8, format!("bad widening point `{}`", line)))?;
                let arity: usize = arity
                    .parse()
                    .map_err(|_| (2u8, format!("bad widening point `{}`", line)))?;
                points.push((name.to_string(), arity));
            }
            Ok(WpStrategy::Explicit(points))
        }
        other => Err((
            2,
            format!("--wp must be `feedback`, `cutloop` or `@file`, got `{}`", other),
        )),
    }
}

fn run_analyze(
    file: PathBuf,
    delay: usize,
    narrow: usize,
    widen_up_to: bool,
    wp: String,
    qa: Option<String>,
    norm: Option<NormArg>,
    verbose: bool,
    show_counts: bool,
    time: bool,
    format: FormatArg,
) -> Result<(), (u8, String)> {
    let prog = load_program(&file)?;
    let prog = apply_transforms(prog, &qa, &norm)?;
    let config = AnalysisConfig {
        widen_delay: delay,
        narrow_iters: narrow,
        widen_up_to,
        wp_strategy: parse_wp(&wp)?,
        verbose,
    };
    let start = Instant::now();
    let analysis = engine::analyze(&prog, &config).map_err(|e| {
        let code = match &e {
            EngineError::NonConvergence { .. } => 3u8,
            EngineError::UncutLoops { .. } | EngineError::UnknownWideningPoint { .. } => 2,
            EngineError::Poly(_) => 2,
        };
        (code, e.to_string())
    })?;
    let duration = if time {
        Some(start.elapsed().as_millis() as u64)
    } else {
        None
    };
    let report = RunReport::new(&analysis, duration, show_counts, verbose);
    match format {
        FormatArg::Text => print!("{}", report.to_text()),
        FormatArg::Json => println!("{}", report.to_json()),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Analyze {
            file,
            delay,
            narrow,
            widen_up_to,
            wp,
            qa,
            norm,
            verbose,
            show_counts,
            time,
            format,
        } => run_analyze(
            file, delay, narrow, widen_up_to, wp, qa, norm, verbose, show_counts, time, format,
        ),
        Cmd::Transform { file, qa, norm } => load_program(&file)
            .and_then(|p| apply_transforms(p, &qa, &norm))
            .map(|p| print!("{}", p)),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => fail(code, &msg),
    }
}
