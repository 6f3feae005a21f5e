//! Command-line front end.
//!
//! Exit codes: 0 success, 1 validation or property failure, 2 degenerate
//! decoration or exhausted retries, 3 unreadable or malformed input, 64 usage.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use flagvol_core::battery::{self, BatteryConfig};
use flagvol_core::invariants::{dual_decoration, invariant_report, relation_report, tet_contribution, Involution};
use flagvol_core::triangulation::{check_decoration_consistency, gen_boundary_4simplex, gen_random_single};
use flagvol_core::{DecoratedComplex, Error};

use crate::format::{parse, serialize, FormatError};
use crate::report::{battery_line, invariants_json, invariants_text, relation_lines, Selection};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    /// Success.
    Ok = 0,
    /// Validation or property failure.
    Failure = 1,
    /// Degenerate decoration or exhausted retries.
    Degenerate = 2,
    /// Input could not be read or parsed.
    Parse = 3,
    /// Bad command line.
    Usage = 64,
}

impl Exit {
    /// Numeric code.
    pub fn code(self) -> i32 {
        self as i32
    }
}

/// Computes invariants of decorated triangulations and checks the relations
/// between them.
#[derive(Debug, Parser)]
#[command(name = "flagvol", version)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print invariants of a complex.
    Compute {
        /// Input document.
        file: PathBuf,
        /// Invariant to print.
        #[arg(long, value_enum, default_value_t = InvariantArg::All)]
        invariant: InvariantArg,
        /// Machine readable output.
        #[arg(long)]
        json: bool,
    },
    /// Write the dual decoration of a complex.
    Dual {
        /// Input document.
        file: PathBuf,
        /// Involution to apply.
        #[arg(long, value_enum)]
        involution: InvolutionArg,
        /// Output document.
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Run validations on a complex.
    Verify {
        /// Input document.
        file: PathBuf,
        /// Comma separated checks.
        #[arg(long, value_enum, value_delimiter = ',', default_value = "gluing,coset,degenerate,relations")]
        checks: Vec<CheckArg>,
    },
    /// Write a generated complex.
    Gen {
        /// Generator.
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output document.
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Run the randomized property battery.
    Selftest {
        /// Tolerance; every property tolerance scales with it.
        #[arg(long, default_value_t = battery::DEFAULT_TOL)]
        tol: f64,
        /// Random trials per property.
        #[arg(long, default_value_t = battery::DEFAULT_TRIALS)]
        trials: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InvariantArg {
    Bfg,
    Gtz,
    Cchat,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InvolutionArg {
    Cartan,
    TransposeInverse,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckArg {
    Gluing,
    Coset,
    Degenerate,
    Relations,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    #[value(name = "boundary4simplex")]
    Boundary4Simplex,
    Single,
}

struct Fail(Exit, String);

type Run = Result<Exit, Fail>;

fn core_exit(e: &Error) -> Exit {
    if e.is_degenerate() || matches!(e.root(), Error::RetriesExhausted(_)) {
        Exit::Degenerate
    } else {
        Exit::Failure
    }
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(core_exit(&e), e.to_string())
    }
}

impl From<FormatError> for Fail {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Parse(_) => Fail(Exit::Parse, e.to_string()),
            FormatError::Invalid(inner) => Fail(core_exit(&inner), format!("invalid document: {inner}")),
        }
    }
}

fn load(path: &Path) -> Result<DecoratedComplex, Fail> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Fail(Exit::Parse, format!("cannot read {}: {e}", path.display())))?;
    Ok(parse(&text)?)
}

fn store(path: &Path, c: &DecoratedComplex) -> Result<(), Fail> {
    std::fs::write(path, serialize(c)).map_err(|e| Fail(Exit::Failure, format!("cannot write {}: {e}", path.display())))
}

/// Parses `args` (program name first) and runs the command, writing the
/// report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { Exit::Usage } else { Exit::Ok };
            let rendered = e.render().to_string();
            let _ = if code == Exit::Ok { write!(out, "{rendered}") } else { write!(err, "{rendered}") };
            return code.code();
        }
    };
    match execute(cli.command, out, err) {
        Ok(exit) => exit.code(),
        Err(Fail(exit, msg)) => {
            let _ = writeln!(err, "flagvol: {msg}");
            exit.code()
        }
    }
}

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Run {
    match cmd {
        Command::Compute { file, invariant, json } => compute(&file, invariant, json, out),
        Command::Dual { file, involution, output } => dual(&file, involution, &output),
        Command::Verify { file, checks } => verify(&file, &checks, out),
        Command::Gen { kind, seed, output } => {
            let c = match kind {
                KindArg::Boundary4Simplex => gen_boundary_4simplex(seed)?,
                KindArg::Single => gen_random_single(seed)?,
            };
            store(&output, &c)?;
            Ok(Exit::Ok)
        }
        Command::Selftest { tol, trials } => selftest(tol, trials, out, err),
    }
}

fn io(e: std::io::Error) -> Fail {
    Fail(Exit::Failure, format!("cannot write report: {e}"))
}

fn compute(file: &Path, invariant: InvariantArg, json: bool, out: &mut dyn Write) -> Run {
    let c = load(file)?;
    let r = invariant_report(&c)?;
    let sel = match invariant {
        InvariantArg::Bfg => Selection { bfg: true, gtz: false, cchat: false },
        InvariantArg::Gtz => Selection { bfg: false, gtz: true, cchat: false },
        InvariantArg::Cchat => Selection { bfg: false, gtz: false, cchat: true },
        InvariantArg::All => Selection::ALL,
    };
    let text = if json { invariants_json(&r, sel) } else { invariants_text(&r, sel) };
    out.write_all(text.as_bytes()).map_err(io)?;
    Ok(Exit::Ok)
}

fn dual(file: &Path, involution: InvolutionArg, output: &Path) -> Run {
    let c = load(file)?;
    let kind = match involution {
        InvolutionArg::Cartan => Involution::Cartan,
        InvolutionArg::TransposeInverse => Involution::TransposeInverse,
    };
    let d = dual_decoration(&c, kind).map_err(|e| match e {
        Error::PtolemyPayload(_) => Fail(Exit::Degenerate, e.to_string()),
        e => Fail::from(e),
    })?;
    store(output, &d)?;
    Ok(Exit::Ok)
}

fn verify(file: &Path, checks: &[CheckArg], out: &mut dyn Write) -> Run {
    let c = match load(file) {
        Ok(c) => c,
        Err(Fail(Exit::Parse, msg)) => return Err(Fail(Exit::Parse, msg)),
        Err(Fail(_, msg)) => {
            writeln!(out, "FAIL gluing: {msg}").map_err(io)?;
            return Ok(Exit::Failure);
        }
    };
    let mut lines = Vec::new();
    let mut failed = false;
    let matrices = c.has_matrix_payloads();
    for check in [CheckArg::Gluing, CheckArg::Coset, CheckArg::Degenerate, CheckArg::Relations] {
        if !checks.contains(&check) {
            continue;
        }
        match check {
            CheckArg::Gluing => lines.push(format!(
                "PASS gluing: {} tetrahedra, {} gluings, {}",
                c.tetrahedra().len(),
                c.gluings().len(),
                if c.is_closed() {
                    "closed".to_string()
                } else {
                    format!("{} unglued faces", c.unglued_faces().len())
                }
            )),
            CheckArg::Coset if !matrices => lines.push("SKIP coset: Ptolemy payloads carry no cosets".into()),
            CheckArg::Coset => {
                let r = check_decoration_consistency(&c)?;
                if r.is_consistent() {
                    lines.push(format!("PASS coset: {} matched vertex pairs", r.checked));
                } else {
                    failed = true;
                    lines.push(format!("FAIL coset: {} of {} matched vertex pairs differ", r.violations.len(), r.checked));
                    for v in &r.violations {
                        lines.push(format!(
                            "  gluing {}: tet {} vertex {} vs tet {} vertex {}",
                            v.gluing, v.a.0, v.a.1, v.b.0, v.b.1
                        ));
                    }
                }
            }
            CheckArg::Degenerate => {
                let bad: Vec<String> = c
                    .sorted_tetrahedra()
                    .into_iter()
                    .filter_map(|t| tet_contribution(t).err().map(|e| e.to_string()))
                    .collect();
                if bad.is_empty() {
                    lines.push("PASS degenerate: every tetrahedron is generic".into());
                } else {
                    failed = true;
                    lines.push(format!("FAIL degenerate: {} tetrahedra", bad.len()));
                    lines.extend(bad.into_iter().map(|m| format!("  {m}")));
                }
            }
            CheckArg::Relations if !matrices => {
                lines.push("SKIP relations: needs matrix decorations".into())
            }
            CheckArg::Relations => match relation_report(&c) {
                Ok(r) => {
                    failed |= !r.passed();
                    lines.extend(relation_lines(&r));
                }
                Err(e) => {
                    failed = true;
                    lines.push(format!("FAIL relations: {e}"));
                }
            },
        }
    }
    for l in lines {
        writeln!(out, "{l}").map_err(io)?;
    }
    Ok(if failed { Exit::Failure } else { Exit::Ok })
}

fn selftest(tol: f64, trials: usize, out: &mut dyn Write, err: &mut dyn Write) -> Run {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Fail(Exit::Usage, format!("--tol must be a positive number, got {tol}")));
    }
    let outcomes = battery::run(&BatteryConfig { tol, trials, ..Default::default() });
    for o in &outcomes {
        writeln!(out, "{}", battery_line(o)).map_err(io)?;
    }
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.name).collect();
    writeln!(out, "{} of {} properties passed", outcomes.len() - failed.len(), outcomes.len()).map_err(io)?;
    if failed.is_empty() {
        Ok(Exit::Ok)
    } else {
        let _ = writeln!(err, "flagvol: failing properties: {}", failed.join(", "));
        Ok(Exit::Failure)
    }
}
