//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 invalid input data or I/O
//! failure, 3 mismatches found under `verify --strict`.

use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::classifier::{count_cyclic, paper_predicate, ClassLabel};
use crate::constructions::build_expr;
use crate::group::Group;
use crate::oracle::{enumerate_groups_with, verify_theorem_with, EnumConfig, DEFAULT_ENUM_CAP, SLOW_ENUM_ORDER};
use crate::subgroups::{check_counting_identities, cyclic_subgroups, CountingReport};
use crate::tablefile::{read_cayley, write_cayley};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "cycgroups", version, about = "Cyclic subgroup posets of small finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Order data, cyclic subgroup counts and classification of one group.
    #[command(group(ArgGroup::new("input").required(true).args(["expr", "cayley"])))]
    Analyze {
        /// Group expression such as "C3 x C3", "Q8", "D4" (order 8) or "S3".
        expr: Option<String>,
        /// Read the group from a Cayley table file instead.
        #[arg(long)]
        cayley: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Count all groups of order n up to isomorphism.
    Enumerate {
        n: usize,
        /// Write each group as a Cayley table file into this directory.
        #[arg(long = "emit-cayley")]
        emit_cayley: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Raise the enumeration cap (at most 16).
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
        cap: usize,
    },
    /// Compare exhaustive enumeration with the classification.
    Verify {
        #[arg(long = "max-order")]
        max_order: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Exit with status 3 when mismatches exist.
        #[arg(long)]
        strict: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
        cap: usize,
    },
    /// Write the Hasse diagram of the cyclic subgroup poset as DOT.
    Poset {
        expr: String,
        #[arg(long)]
        dot: PathBuf,
    },
}

/// Runs the CLI with `args[0]` as the program name.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure { code, msg }) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

struct Failure {
    code: i32,
    msg: String,
}

fn usage(msg: impl ToString) -> Failure {
    Failure { code: EXIT_USAGE, msg: msg.to_string() }
}

fn input(msg: impl ToString) -> Failure {
    Failure { code: EXIT_INPUT, msg: msg.to_string() }
}

fn io(e: std::io::Error) -> Failure {
    input(e)
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Analyze { expr, cayley, format } => {
            let g = match (expr, cayley) {
                (Some(text), None) => build_expr(&text).map_err(usage)?,
                (None, Some(path)) => read_cayley(&path).map_err(input)?,
                _ => return Err(usage("give either an expression or --cayley <path>")),
            };
            let analysis = Analysis::of(&g);
            match format {
                Format::Json => {
                    let s = serde_json::to_string_pretty(&analysis).expect("analysis serializes");
                    writeln!(out, "{s}").map_err(io)?;
                }
                Format::Text => write!(out, "{}", analysis.to_text()).map_err(io)?,
            }
            Ok(EXIT_OK)
        }
        Command::Enumerate { n, emit_cayley, jobs, cap } => {
            let config = EnumConfig { cap, jobs };
            warn_if_slow(n, err);
            let groups = enumerate_groups_with(n, &config).map_err(usage)?;
            writeln!(out, "order {n}: {} groups", groups.len()).map_err(io)?;
            for (i, g) in groups.iter().enumerate() {
                writeln!(out, "  #{i}  |C(G)| = {}  {}", count_cyclic(g), paper_predicate(g)).map_err(io)?;
            }
            if let Some(dir) = emit_cayley {
                std::fs::create_dir_all(&dir).map_err(io)?;
                for (i, g) in groups.iter().enumerate() {
                    write_cayley(&dir.join(format!("order{n}_{i}.tbl")), g).map_err(input)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Verify { max_order, format, strict, jobs, cap } => {
            let config = EnumConfig { cap, jobs };
            warn_if_slow(max_order, err);
            let report = verify_theorem_with(max_order, &config).map_err(usage)?;
            match format {
                Format::Json => write!(out, "{}", report.to_json()).map_err(io)?,
                Format::Text => write!(out, "{}", report.to_text()).map_err(io)?,
            }
            Ok(if strict && report.has_mismatches() { EXIT_MISMATCH } else { EXIT_OK })
        }
        Command::Poset { expr, dot } => {
            let g = build_expr(&expr).map_err(usage)?;
            std::fs::write(&dot, cyclic_subgroups(&g).to_dot()).map_err(io)?;
            Ok(EXIT_OK)
        }
    }
}

fn warn_if_slow(n: usize, err: &mut dyn Write) {
    if n > SLOW_ENUM_ORDER {
        let _ = writeln!(err, "warning: exhaustive enumeration above order {SLOW_ENUM_ORDER} is slow");
    }
}

#[derive(Debug, Serialize)]
struct Analysis {
    name: Option<String>,
    order: usize,
    pi: Vec<usize>,
    pi_e: Vec<usize>,
    exponent: usize,
    c_histogram: std::collections::BTreeMap<usize, usize>,
    count_cyclic: usize,
    counting: CountingReport,
    label: ClassLabel,
    predicted_count: Option<usize>,
}

impl Analysis {
    fn of(g: &Group) -> Analysis {
        let spectrum = g.order_spectrum();
        let poset = cyclic_subgroups(g);
        let label = paper_predicate(g);
        Analysis {
            name: g.name().map(str::to_string),
            order: g.order(),
            pi: spectrum.pi.clone(),
            pi_e: spectrum.pi_e.clone(),
            exponent: spectrum.exponent,
            count_cyclic: poset.len(),
            c_histogram: poset.c_histogram,
            counting: check_counting_identities(g),
            label,
            predicted_count: label.predicted_count(),
        }
    }

    fn to_text(&self) -> String {
        let set = |v: &[usize]| format!("{{{}}}", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "));
        let verdict = |ok: bool| if ok { "ok" } else { "FAILED" };
        let hist = self.c_histogram.iter().map(|(k, c)| format!("c_{k}={c}")).collect::<Vec<_>>().join(" ");
        let mut s = String::new();
        if let Some(name) = &self.name {
            s += &format!("group            {name}\n");
        }
        s += &format!("|G|              {}\n", self.order);
        s += &format!("pi(G)            {}\n", set(&self.pi));
        s += &format!("pi_e(G)          {}\n", set(&self.pi_e));
        s += &format!("exponent         {}\n", self.exponent);
        s += &format!("c_k              {hist}\n");
        s += &format!("|C(G)|           {}\n", self.count_cyclic);
        s += &format!(
            "sum c_k*phi(k)   {} (|G| = {}) {}\n",
            self.counting.weighted_sum,
            self.order,
            verdict(self.counting.order_identity_holds)
        );
        s += &format!(
            "sum c_k          {} (|C(G)| = {}) {}\n",
            self.counting.count_sum,
            self.count_cyclic,
            verdict(self.counting.count_identity_holds)
        );
        s += &format!("label            {}\n", self.label);
        s
    }
}
