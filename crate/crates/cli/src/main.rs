use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use shadowlat::analytic::{self, TransformReport};
use shadowlat::arith::fmt_q;
use shadowlat::constructions::{self, construction_a_f4, construction_a_z4, AnyCode, CodeData};
use shadowlat::etafunc::{verify_identity, Identity};
use shadowlat::extremal::{self, ExtremalProblem};
use shadowlat::lattice::trials::{self, TrialReport};
use shadowlat::lattice::{self, GramLattice, LatticeData};
use shadowlat::qseries::{QSeries, GRID};

#[derive(Parser, Debug)]
#[command(name = "shadowlat", version, about = "Shadows, extremal theta series and invariants of modular lattices")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Series order in q units.
    #[arg(long, global = true, env = "SHADOWLAT_ORDER", default_value_t = extremal::DEFAULT_ORDER)]
    order: i64,
    /// Seed for every randomized check.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Residual accepted by the numeric transformation checks.
    #[arg(long, global = true, default_value_t = analytic::TOLERANCE)]
    tolerance: f64,
    /// Worker threads for scans (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Upper bound on the minimal norm of a strongly N-modular lattice of dimension n.
    Bound { level: u64, n: u64 },
    /// Solve for the extremal theta series and test it against the shadow conditions.
    Extremal {
        level: u64,
        n: u64,
        #[arg(long)]
        mu: Option<u64>,
    },
    /// Decide every dimension up to --max.
    Scan {
        level: u64,
        #[arg(long)]
        max: u64,
    },
    /// Theta series of a lattice (file path or @NAME).
    Theta { lattice: String },
    /// Theta series of the shadow.
    Shadow { lattice: String },
    /// Determinant, levels, oddity, p-excesses and Gauss sums.
    Invariants { lattice: String },
    /// Even neighbor of an odd 2-modular lattice.
    Neighbor { lattice: String },
    /// Modularity levels.
    Modularity { lattice: String },
    /// Build a lattice.
    #[command(subcommand)]
    Construct(Construct),
    /// Run a verification suite.
    #[command(subcommand)]
    Verify(Verify),
    /// List the catalog, or print one entry.
    Catalog {
        #[arg(long)]
        list: bool,
        name: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
enum Construct {
    /// C^(N) = ⊥_{d|N} √d Z for squarefree N.
    #[command(name = "cN", alias = "cn")]
    Cn { level: u64 },
    /// Construction A from an additive trace self-dual code over F4 (JSON code file).
    A4 { code: String },
    /// Construction A from a self-dual code over Z/4 (JSON code file).
    Az4 { code: String },
    /// A named catalog lattice.
    Catalog { name: String },
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// Generator identities for level N, plus the theta/eta identity.
    Identities {
        #[arg(long = "N")]
        level: u64,
        /// Only this identity (ED1 … ED14, Z4ETA).
        #[arg(long)]
        only: Option<String>,
    },
    /// Numeric transformation laws for an even lattice.
    Transforms {
        lattice: String,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Shadow congruence, on one lattice or on random odd-determinant lattices.
    ShadowLaw(TrialArgs),
    /// Gauss-sum agreement and rescaling, on one lattice or on random even lattices.
    Rescale(TrialArgs),
}

#[derive(Args, Debug)]
struct TrialArgs {
    lattice: Option<String>,
    #[arg(long, default_value_t = 200)]
    cases: usize,
    /// Largest shadow norm enumerated.
    #[arg(long, default_value_t = 12)]
    bound: i64,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
}

macro_rules! input_err {
    ($e:expr) => {
        $e.map_err(|e| CliError::Input(e.to_string()))
    };
}

/// What a command produced: text, JSON, and whether the result is a success.
struct Outcome {
    text: String,
    json: serde_json::Value,
    ok: bool,
}

fn outcome<T: Serialize>(text: String, value: &T, ok: bool) -> Result<Outcome, CliError> {
    Ok(Outcome { text, json: input_err!(serde_json::to_value(value))?, ok })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(o) => {
            let body = if cli.json { serde_json::to_string_pretty(&o.json).expect("serializable") } else { o.text.trim_end().to_string() };
            // a closed pipe is not an error of the command
            let _ = writeln!(std::io::stdout(), "{body}");
            ExitCode::from(if o.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    if cli.order < 8 {
        return Err(CliError::Usage(format!("--order must be at least 8, got {}", cli.order)));
    }
    if !(cli.tolerance > 0.0 && cli.tolerance <= 1e-4) {
        return Err(CliError::Usage(format!("--tolerance must lie in (0, 1e-4], got {}", cli.tolerance)));
    }
    if let Some(t) = cli.threads {
        input_err!(rayon::ThreadPoolBuilder::new().num_threads(t).build_global())?;
    }
    let order = cli.order;
    match &cli.cmd {
        Command::Bound { level, n } => {
            let b = input_err!(extremal::bound_mu(*level, *n))?;
            outcome(b.to_string(), &json!({"N": level, "n": n, "bound": b}), true)
        }
        Command::Extremal { level, n, mu } => {
            let p = input_err!(ExtremalProblem::new(*level, *n))?;
            let mu = match mu {
                Some(m) => *m,
                None => input_err!(extremal::bound_mu(*level, *n))?,
            };
            let s = input_err!(extremal::solve_extremal(&p, mu, order))?;
            let r = s.report();
            let mut text = format!("N={} n={} mu={} (k={}, t={})\n", level, n, mu, p.k, p.t);
            text += &format!("c = ({})\n", r.c.join(", "));
            text += &format!("theta  = {}\n", head(&s.theta, 8));
            text += &format!("shadow = {}\n", head(&s.shadow, 8));
            text += &format!("verdict: {}\n", r.verdict);
            for reason in &r.reasons {
                text += &format!("  - {reason}\n");
            }
            outcome(text, &r, s.verdict.is_feasible())
        }
        Command::Scan { level, max } => {
            let rows = input_err!(extremal::scan(*level, *max, order))?;
            let flagged = extremal::flagged(&rows);
            let mut text = format!("{:>4} {:>4} {:>4} {:>6} {:>8}  note\n", "n", "k", "t", "bound", "best_mu");
            for r in &rows {
                let best = r.best_mu.map_or("-".to_string(), |m| m.to_string());
                let mut note = Vec::new();
                if r.extremal_feasible {
                    note.push("extremal candidate".to_string());
                }
                if r.exceptional {
                    note.push("exceptional bound".to_string());
                }
                if flagged.contains(&r.n) {
                    note.push("no lattice at the bound".to_string());
                }
                if let Some(u) = r.trail.iter().find(|s| s.outcome.starts_with("undecided")) {
                    note.push(format!("mu={} {}", u.mu, u.outcome));
                }
                text += &format!("{:>4} {:>4} {:>4} {:>6} {:>8}  {}\n", r.n, r.k, r.t, r.bound, best, note.join("; "));
            }
            text += &format!("infeasible at the bound: {flagged:?}\n");
            outcome(text, &json!({"N": level, "rows": rows, "flagged": flagged}), true)
        }
        Command::Theta { lattice } => {
            let l = load_lattice(lattice)?;
            let th = input_err!(lattice::theta_series(&l, order * GRID))?;
            outcome(th.to_string(), &th, true)
        }
        Command::Shadow { lattice } => {
            let l = load_lattice(lattice)?;
            let s = input_err!(lattice::shadow(&l))?;
            let th = input_err!(lattice::theta_series(&s, order * GRID))?;
            let min = input_err!(lattice::coset_min_norm(&s))?;
            let text = format!("min norm {}\n{}", fmt_q(&min), th);
            outcome(text, &json!({"min": fmt_q(&min), "theta": th}), true)
        }
        Command::Invariants { lattice } => {
            let l = load_lattice(lattice)?;
            let g = input_err!(lattice::genus_data(&l))?;
            let min = lattice::min_norm(&l);
            let mut text = format!("dim {}\ndet {}\nmin {}\neven {}\nlevel {}\n", g.dim, fmt_q(&g.det), fmt_q(&min), l.is_even(), g.level);
            if let Some(e) = g.even_level {
                text += &format!("even level {e}\n");
            }
            text += &format!("oddity {}\n", g.oddity);
            for (p, e) in &g.p_excess {
                text += &format!("{p}-excess {e}\n");
            }
            for (p, e) in &g.gamma {
                text += &format!("gamma_{p} = xi^{e}\n");
            }
            let mut v = input_err!(serde_json::to_value(&g))?;
            v["min"] = json!(fmt_q(&min));
            v["even"] = json!(l.is_even());
            Ok(Outcome { text, json: v, ok: true })
        }
        Command::Neighbor { lattice } => {
            let l = load_lattice(lattice)?;
            let en = input_err!(lattice::even_neighbor(&l))?;
            lattice_outcome(&en, "neighbor")
        }
        Command::Modularity { lattice } => {
            let l = load_lattice(lattice)?;
            let levels: Vec<u64> = input_err!(lattice::modularity_levels(&l))?.into_iter().collect();
            let level = input_err!(lattice::level(&l))?;
            let strong = input_err!(lattice::modularity::is_strongly_modular(&l, level))?;
            let text = format!("modularity levels {levels:?}\nlevel {level}, strongly {level}-modular: {strong}");
            outcome(text, &json!({"levels": levels, "level": level, "strongly_modular": strong}), true)
        }
        Command::Construct(c) => {
            let (l, name) = match c {
                Construct::Cn { level } => (input_err!(constructions::catalog(&format!("C{level}")))?, format!("C{level}")),
                Construct::A4 { code } => match load_code(code)? {
                    AnyCode::F4(c) => (input_err!(construction_a_f4(&c))?, "A4".to_string()),
                    AnyCode::Z4(_) => return Err(CliError::Input("a4 expects an F4 code".into())),
                },
                Construct::Az4 { code } => match load_code(code)? {
                    AnyCode::Z4(c) => (input_err!(construction_a_z4(&c))?, "AZ4".to_string()),
                    AnyCode::F4(_) => return Err(CliError::Input("az4 expects a Z4 code".into())),
                },
                Construct::Catalog { name } => (input_err!(constructions::catalog(name))?, name.clone()),
            };
            lattice_outcome(&l, &name)
        }
        Command::Verify(v) => verify(v, cli),
        Command::Catalog { list, name } => match (list, name) {
            (_, Some(name)) => lattice_outcome(&input_err!(constructions::catalog(name))?, name),
            (true, None) => {
                let entries = constructions::catalog_entries();
                let mut text = format!("{:<8} {:>5} {:>4} {:>4} {:>4}\n", "name", "level", "kind", "dim", "min");
                for e in &entries {
                    text += &format!("{:<8} {:>5} {:>4} {:>4} {:>4}\n", e.name, e.level, e.kind, e.dim, e.min);
                }
                text += "C<N>: C^(N) for any squarefree N\n";
                outcome(text, &entries, true)
            }
            (false, None) => Err(CliError::Usage("catalog needs --list or a NAME".into())),
        },
    }
}

fn verify(v: &Verify, cli: &Cli) -> Result<Outcome, CliError> {
    match v {
        Verify::Identities { level, only } => {
            let ids = match only {
                Some(s) => vec![Identity::parse(s).ok_or_else(|| CliError::Usage(format!("unknown identity {s}")))?],
                None => {
                    let mut v = Identity::for_level(*level);
                    v.push(Identity::Z4Eta);
                    v
                }
            };
            let mut reports = Vec::new();
            for id in ids {
                reports.push(input_err!(verify_identity(id, *level, cli.order * GRID))?);
            }
            let ok = reports.iter().all(|r| r.holds);
            let mut text = String::new();
            for r in &reports {
                text += &format!("{:<6} N={} through q^{}: {}", r.identity, r.n, cli.order, if r.holds { "holds" } else { "FAILS" });
                if let Some((e, a, b)) = &r.discrepancy {
                    text += &format!(" (first difference at q^{}: {a} vs {b})", fmt_q(&shadowlat::qseries::Exponent(*e).value()));
                }
                text += "\n";
            }
            outcome(text, &reports, ok)
        }
        Verify::Transforms { lattice, count } => {
            let l = load_lattice(lattice)?;
            let mut reports: Vec<TransformReport> = input_err!(analytic::transform_suite(&l, *count, cli.seed))?;
            for r in reports.iter_mut() {
                r.passed = r.residual < cli.tolerance;
            }
            let ok = reports.iter().all(|r| r.passed);
            let mut text = String::new();
            for r in &reports {
                text += &format!("{:<6} {:?}  residual {:.2e}  {}\n", r.law, r.matrix, r.residual, if r.passed { "ok" } else { "FAIL" });
            }
            outcome(text, &reports, ok)
        }
        Verify::ShadowLaw(a) => match &a.lattice {
            Some(name) => {
                let l = load_lattice(name)?;
                if l.det().to_integer() % 2u32 == 0u32.into() || !l.is_integral() {
                    return Err(CliError::Input("the shadow law applies to integral lattices of odd determinant".into()));
                }
                let bad = input_err!(trials::check_shadow_law(&l, a.bound))?;
                single_trial("shadow-law", bad)
            }
            None => trial_outcome(input_err!(trials::shadow_law_trials(a.cases, a.bound, cli.seed))?),
        },
        Verify::Rescale(a) => match &a.lattice {
            Some(name) => {
                let l = load_lattice(name)?;
                let bad = input_err!(trials::gauss_sums_for(&l, cli.seed))?;
                single_trial("rescale", bad)
            }
            None => trial_outcome(input_err!(trials::gauss_sum_trials(a.cases, cli.seed))?),
        },
    }
}

fn single_trial(law: &str, bad: Option<String>) -> Result<Outcome, CliError> {
    let text = match &bad {
        None => format!("{law}: holds"),
        Some(d) => format!("{law}: FAILS ({d})"),
    };
    outcome(text, &json!({"law": law, "passed": bad.is_none(), "detail": bad}), bad.is_none())
}

fn trial_outcome(r: TrialReport) -> Result<Outcome, CliError> {
    let mut text = format!("{}: {} cases, {} failures\n", r.law, r.cases, r.failures.len());
    for f in &r.failures {
        text += &format!("  case {}: {} (gram {:?})\n", f.case, f.detail, f.gram);
    }
    let ok = r.passed();
    outcome(text, &r, ok)
}

fn lattice_outcome(l: &GramLattice, name: &str) -> Result<Outcome, CliError> {
    let d = l.to_data(name);
    let text = format!("{name}: dim {}, det {}, min {}\n{}", l.dim(), fmt_q(&l.det()), fmt_q(&lattice::min_norm(l)), l);
    outcome(text, &d, true)
}

/// The first `k` terms and the order of the remainder.
fn head(s: &QSeries, k: usize) -> String {
    match s.terms().nth(k) {
        Some((e, _)) => s.truncate(e).to_string(),
        None => s.to_string(),
    }
}

fn load_lattice(arg: &str) -> Result<GramLattice, CliError> {
    if let Some(name) = arg.strip_prefix('@') {
        return input_err!(constructions::catalog(name));
    }
    let text = read(arg)?;
    let d: LatticeData = input_err!(serde_json::from_str(&text))?;
    input_err!(GramLattice::from_data(&d))
}

fn load_code(arg: &str) -> Result<AnyCode, CliError> {
    let d: CodeData = input_err!(serde_json::from_str(&read(arg)?))?;
    input_err!(d.parse())
}

fn read(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(Path::new(path)).map_err(|e| CliError::Input(format!("{path}: {e}")))
}
