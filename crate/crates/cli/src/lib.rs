//! `davlab` command-line front end.

pub mod report;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use davlab_core::bounds::{
    construct_witness_1, construct_witness_2, lower_bound, multidim_bounds, table, upper_bound,
};
use davlab_core::davenport::{exact_davenport, exact_davenport_k, SearchBudget};
use davlab_core::metacyclic::{classify_extremal, small_davenport, GroupSpec};
use davlab_core::modring::{
    crt_split, involutions, is_squarefree, quadratic_residue_weights, Modulus, WeightSet,
};
use davlab_core::zsfree::{has_weighted_zero_sum, Weights};
use davlab_core::Error;

pub use report::{Cell, Format, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_ARGS: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "davlab", version, about = "Weighted Davenport constants and product-one-free sequences")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    #[arg(long, global = true, value_enum, default_value = "human")]
    pub format: Format,
    /// Write the report here (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: u64,
    #[arg(long, global = true)]
    pub max_nodes: Option<u64>,
    /// Wall-clock budget per search, in seconds.
    #[arg(long, global = true, env = "DAVLAB_BUDGET_SECONDS", default_value_t = 60.0)]
    pub max_seconds: f64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Nontrivial square roots of 1 mod n and their CRT splits.
    Involutions {
        #[arg(long)]
        n: u64,
    },
    /// Lower and upper bounds for D_{1,s}(Z_n) over all admissible (n, s).
    Table {
        #[arg(long, default_value_t = 30)]
        n_max: u64,
        /// Also compute the exact constant for each row.
        #[arg(long)]
        exact: bool,
    },
    /// Exact D_A(Z_n^k) by exhaustive search.
    Exact {
        #[arg(long)]
        n: u64,
        /// pm1, one, range:R, qr, onestwo:S, or a comma-separated list.
        #[arg(long)]
        weights: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// List one extremal sequence per unit-scaling orbit.
        #[arg(long)]
        witnesses: bool,
    },
    /// Explicit zero-sum-free sequences behind the lower bound.
    Witness {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        s: u64,
    },
    /// Bounds for D_{1,s}(Z_n^k).
    Multidim {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        s: u64,
        #[arg(long)]
        k: u32,
        /// Value to use for d(Z_{n2}^k); defaults to k(n2 - 1).
        #[arg(long)]
        d2k: Option<u64>,
        /// Also search for the exact constant (needs n^k <= 4096).
        #[arg(long)]
        exact: bool,
    },
    /// Product-one-free sequences of a given length in C_n x|_s C_2.
    Classify {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        s: u64,
        /// Defaults to n.
        #[arg(long)]
        length: Option<usize>,
    },
    /// Small Davenport constant d(C_n x|_s C_2).
    SmallDavenport {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        s: u64,
        #[arg(long)]
        witnesses: bool,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Args(String),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            CliError::Core(Error::BoundViolation { .. }) => EXIT_INVARIANT,
            CliError::Core(_) | CliError::Args(_) => EXIT_ARGS,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

/// A rendered run: the report, any warnings for stderr, and the exit code.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    pub warnings: Vec<String>,
    pub exit: i32,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Outcome {
            report,
            warnings: Vec::new(),
            exit: EXIT_OK,
        }
    }
}

pub fn budget(global: &Global) -> Result<SearchBudget, CliError> {
    Ok(SearchBudget::new(
        global.max_nodes.unwrap_or(u64::MAX),
        global.max_seconds,
        global.threads as usize,
    )?)
}

/// Parses the `--weights` grammar. The second value carries warnings.
pub fn parse_weights(n: Modulus, spec: &str) -> Result<(WeightSet, Vec<String>), CliError> {
    let mut warnings = Vec::new();
    let spec = spec.trim();
    let number = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|_| CliError::Args(format!("not an integer: {s:?}")))
    };
    let ws = match spec {
        "pm1" => WeightSet::plus_minus_one(n),
        "one" => WeightSet::one(n),
        "qr" => {
            if !is_squarefree(n.get()) {
                warnings.push(format!(
                    "n = {n} is not squarefree; the 2 omega(n) + 1 formula does not apply"
                ));
            }
            quadratic_residue_weights(n)?
        }
        _ => {
            if let Some(r) = spec.strip_prefix("range:") {
                let r = number(r)?;
                if r < 1 {
                    return Err(CliError::Args(format!("range:{r} needs r >= 1")));
                }
                WeightSet::range(n, r as u64)?
            } else if let Some(s) = spec.strip_prefix("onestwo:") {
                let s = n.reduce(number(s)?);
                if !involutions(n).contains(&s) {
                    return Err(Error::InvalidS { n: n.get(), s }.into());
                }
                WeightSet::one_and(n, s)?
            } else {
                let list: Vec<i64> = spec
                    .split(',')
                    .filter(|p| !p.trim().is_empty())
                    .map(number)
                    .collect::<Result<_, _>>()?;
                WeightSet::new(n, list)?
            }
        }
    };
    Ok((ws, warnings))
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let b = budget(&cli.global)?;
    match &cli.command {
        Command::Involutions { n } => cmd_involutions(*n),
        Command::Table { n_max, exact } => cmd_table(*n_max, *exact, &b),
        Command::Exact {
            n,
            weights,
            k,
            witnesses,
        } => cmd_exact(*n, weights, *k, *witnesses, &b),
        Command::Witness { n, s } => cmd_witness(*n, *s),
        Command::Multidim {
            n,
            s,
            k,
            d2k,
            exact,
        } => cmd_multidim(*n, *s, *k, *d2k, *exact, &b),
        Command::Classify { n, s, length } => cmd_classify(*n, *s, *length, &b),
        Command::SmallDavenport { n, s, witnesses } => cmd_small_davenport(*n, *s, *witnesses, &b),
    }
}

pub fn cmd_involutions(n: u64) -> Result<Outcome, CliError> {
    let md = Modulus::new(n)?;
    let mut r = Report::new(&["n", "s", "n1", "n2", "split"]);
    for s in involutions(md) {
        match crt_split(md, s) {
            Ok(sp) => r.push(vec![
                n.into(),
                s.into(),
                sp.n1().into(),
                sp.n2().into(),
                Cell::text("ok"),
            ]),
            Err(Error::NoValidSplit { .. }) => r.push(vec![
                n.into(),
                s.into(),
                Cell::Null,
                Cell::Null,
                Cell::text("no valid split"),
            ]),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Outcome::ok(r))
}

pub fn cmd_table(n_max: u64, exact: bool, b: &SearchBudget) -> Result<Outcome, CliError> {
    let mut r = Report::new(&["n", "s", "n1", "n2", "lower", "exact", "upper"]);
    let mut exit = EXIT_OK;
    for row in table(n_max) {
        let cell = if exact {
            let md = Modulus::new(row.n)?;
            match exact_davenport(&WeightSet::one_and(md, row.s)?, b) {
                Ok(res) if res.exhaustive => {
                    let d = res.constant as u64;
                    if d < row.lower || d > row.upper {
                        exit = EXIT_INVARIANT;
                    }
                    Cell::Int(d)
                }
                Ok(res) => {
                    // a free sequence of length `upper` was found
                    exit = EXIT_INVARIANT;
                    Cell::at_least(res.constant as u64)
                }
                Err(Error::BudgetExceeded { lower_bound, .. }) => {
                    exit = exit.max(EXIT_BUDGET);
                    Cell::at_least(lower_bound as u64)
                }
                Err(e) => return Err(e.into()),
            }
        } else {
            Cell::Null
        };
        r.push(vec![
            row.n.into(),
            row.s.into(),
            row.n1.into(),
            row.n2.into(),
            row.lower.into(),
            cell,
            row.upper.into(),
        ]);
    }
    if exit == EXIT_INVARIANT {
        r.note("exact value outside [lower, upper]");
    }
    Ok(Outcome {
        report: r,
        warnings: Vec::new(),
        exit,
    })
}

pub fn cmd_exact(
    n: u64,
    weights: &str,
    k: usize,
    witnesses: bool,
    b: &SearchBudget,
) -> Result<Outcome, CliError> {
    let md = Modulus::new(n)?;
    let (ws, warnings) = parse_weights(md, weights)?;
    let mut cols = vec![
        "n",
        "k",
        "weights",
        "constant",
        "exhaustive",
        "witness_orbits",
        "nodes",
    ];
    if witnesses {
        cols.push("witness");
    }
    let mut r = Report::new(&cols);
    let base = |constant: Cell, exhaustive: bool, orbits: Cell, nodes: u64| {
        vec![
            n.into(),
            k.into(),
            Cell::text(ws.to_string()),
            constant,
            exhaustive.into(),
            orbits,
            nodes.into(),
        ]
    };
    match exact_davenport_k(&ws, k, b) {
        Ok(res) => {
            let constant = if res.exhaustive {
                Cell::from(res.constant)
            } else {
                Cell::at_least(res.constant as u64)
            };
            let row = base(constant, res.exhaustive, res.witnesses.len().into(), res.nodes);
            if witnesses {
                for w in &res.witnesses {
                    let mut row = row.clone();
                    row.push(Cell::text(w.to_string()));
                    r.push(row);
                }
            } else {
                r.push(row);
            }
            Ok(Outcome {
                report: r,
                warnings,
                exit: EXIT_OK,
            })
        }
        Err(Error::BudgetExceeded { lower_bound, nodes }) => {
            let mut row = base(Cell::at_least(lower_bound as u64), false, Cell::Null, nodes);
            if witnesses {
                row.push(Cell::Null);
            }
            r.push(row);
            r.note("search budget exhausted; constant is a lower bound");
            Ok(Outcome {
                report: r,
                warnings,
                exit: EXIT_BUDGET,
            })
        }
        Err(e) => Err(e.into()),
    }
}

pub fn cmd_witness(n: u64, s: u64) -> Result<Outcome, CliError> {
    let md = Modulus::new(n)?;
    let split = crt_split(md, s)?;
    let weights = Weights::from(&WeightSet::one_and(md, s)?);
    let mut r = Report::new(&[
        "n",
        "s",
        "construction",
        "applicable",
        "length",
        "sequence",
        "zero_sum_free",
    ]);
    let w1 = construct_witness_1(&split);
    r.push(vec![
        n.into(),
        s.into(),
        Cell::text("powers"),
        true.into(),
        w1.len().into(),
        Cell::text(w1.to_string()),
        (!has_weighted_zero_sum(&w1, &weights)).into(),
    ]);
    match construct_witness_2(&split) {
        Ok(w2) => r.push(vec![
            n.into(),
            s.into(),
            Cell::text("repeated"),
            true.into(),
            w2.len().into(),
            Cell::text(w2.to_string()),
            (!has_weighted_zero_sum(&w2, &weights)).into(),
        ]),
        Err(Error::HypothesisNotMet(_)) => r.push(vec![
            n.into(),
            s.into(),
            Cell::text("repeated"),
            false.into(),
            Cell::Null,
            Cell::Null,
            Cell::Null,
        ]),
        Err(e) => return Err(e.into()),
    }
    r.note(format!(
        "split (n1, n2) = ({}, {}), bounds [{}, {}]",
        split.n1(),
        split.n2(),
        lower_bound(&split),
        upper_bound(&split)
    ));
    Ok(Outcome::ok(r))
}

pub fn cmd_multidim(
    n: u64,
    s: u64,
    k: u32,
    d2k: Option<u64>,
    exact: bool,
    b: &SearchBudget,
) -> Result<Outcome, CliError> {
    let md = Modulus::new(n)?;
    let split = crt_split(md, s)?;
    let m = multidim_bounds(&split, k, d2k)?;
    let mut exit = EXIT_OK;
    let cell = if exact {
        match exact_davenport_k(&WeightSet::one_and(md, s)?, k as usize, b) {
            Ok(res) if res.exhaustive => Cell::from(res.constant),
            Ok(res) => Cell::at_least(res.constant as u64),
            Err(Error::BudgetExceeded { lower_bound, .. }) => {
                exit = EXIT_BUDGET;
                Cell::at_least(lower_bound as u64)
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        Cell::Null
    };
    let mut r = Report::new(&["n", "s", "k", "n1", "n2", "d2k", "lower", "exact", "upper"]);
    r.push(vec![
        n.into(),
        s.into(),
        u64::from(k).into(),
        m.n1.into(),
        m.n2.into(),
        m.d2k.into(),
        m.lower.into(),
        cell,
        m.upper.into(),
    ]);
    Ok(Outcome {
        report: r,
        warnings: Vec::new(),
        exit,
    })
}

pub fn cmd_classify(
    n: u64,
    s: u64,
    length: Option<usize>,
    b: &SearchBudget,
) -> Result<Outcome, CliError> {
    let spec = GroupSpec::new(n, s)?;
    let length = length.unwrap_or(n as usize);
    let cl = classify_extremal(&spec, length, b)?;
    let mut r = Report::new(&[
        "n",
        "s",
        "length",
        "class",
        "representative",
        "orbit_size",
        "partial",
        "reduction",
    ]);
    let classes = cl
        .claimed
        .iter()
        .map(|g| ("claimed", g))
        .chain(cl.other.iter().map(|g| ("other", g)));
    for (class, rep) in classes {
        r.push(vec![
            n.into(),
            s.into(),
            length.into(),
            Cell::text(class),
            Cell::text(rep.to_string()),
            rep.orbit().len().into(),
            cl.partial.into(),
            Cell::text(cl.reduction),
        ]);
    }
    r.note(format!("group {spec}, length {length}"));
    r.note(format!("orbit reduction: {}", cl.reduction));
    r.note(format!(
        "claimed form: {} orbits, {} sequences; other: {} orbits, {} sequences",
        cl.claimed.len(),
        cl.claimed_total,
        cl.other.len(),
        cl.other_total
    ));
    if cl.partial {
        r.note("partial: search budget exhausted, lists are incomplete");
    }
    Ok(Outcome {
        report: r,
        warnings: Vec::new(),
        exit: if cl.partial { EXIT_BUDGET } else { EXIT_OK },
    })
}

pub fn cmd_small_davenport(
    n: u64,
    s: u64,
    witnesses: bool,
    b: &SearchBudget,
) -> Result<Outcome, CliError> {
    let spec = GroupSpec::new(n, s)?;
    let mut cols = vec!["n", "s", "d", "exhaustive", "witness_orbits", "nodes"];
    if witnesses {
        cols.push("witness");
    }
    let mut r = Report::new(&cols);
    match small_davenport(&spec, b) {
        Ok(d) => {
            let row: Vec<Cell> = vec![
                n.into(),
                s.into(),
                d.value.into(),
                true.into(),
                d.witnesses.len().into(),
                d.nodes.into(),
            ];
            if witnesses {
                for w in &d.witnesses {
                    let mut row = row.clone();
                    row.push(Cell::text(w.to_string()));
                    r.push(row);
                }
            } else {
                r.push(row);
            }
            Ok(Outcome::ok(r))
        }
        Err(Error::BudgetExceeded { lower_bound, nodes }) => {
            let mut row = vec![
                n.into(),
                s.into(),
                Cell::at_least(lower_bound as u64),
                false.into(),
                Cell::Null,
                nodes.into(),
            ];
            if witnesses {
                row.push(Cell::Null);
            }
            r.push(row);
            r.note("search budget exhausted; d is a lower bound");
            Ok(Outcome {
                report: r,
                warnings: Vec::new(),
                exit: EXIT_BUDGET,
            })
        }
        Err(e) => Err(e.into()),
    }
}

/// Replaces `path` in one step: write a sibling temp file, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(contents.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

/// Runs a parsed command line end to end and returns the process exit
/// code.
pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match run(cli) {
        Ok(out) => {
            for w in &out.warnings {
                let _ = writeln!(stderr, "warning: {w}");
            }
            let text = out.report.render(cli.global.format);
            match &cli.global.output {
                Some(path) => {
                    if let Err(e) = write_atomic(path, &text) {
                        let _ = writeln!(stderr, "error: {e}");
                        return e.exit_code();
                    }
                }
                None => {
                    let _ = stdout.write_all(text.as_bytes());
                }
            }
            out.exit
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
