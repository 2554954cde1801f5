mod json;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use wittkit::derham_witt::{act, enumerate_basis, DrwOp};
use wittkit::local_cohomology::{check_stability, enumerate_index, generation_run};
use wittkit::proj_cech::{closed_form_lengths, sweep, witt_cohomology};
use wittkit::sampling::rng;
use wittkit::steinberg::{acyclicity_check, build_complex, Coeffs};
use wittkit::suites::{run_suite, SuiteConfig, SuiteReport};
use wittkit::weyl::{normal_form, parse_word};
use wittkit::witt_core::{teichmuller, universal_polys};
use wittkit::witt_diff::{check_relation, lift_operator, Relation, SampleShape};
use wittkit::{Error, Result};

/// Environment variable naming the directory for relative `--out` paths.
const OUT_DIR_VAR: &str = "WITTKIT_OUT_DIR";

#[derive(Parser)]
#[command(name = "wittkit", version, about = "Witt vectors, Witt differential operators and de Rham-Witt computations")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// The prime p
    #[arg(long, global = true)]
    p: Option<u64>,
    /// Length or level parameter n
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Seed for every randomized choice
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report to this file (relative paths resolve against $WITTKIT_OUT_DIR)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Witt vector arithmetic
    Witt {
        #[command(subcommand)]
        cmd: WittCmd,
    },
    /// Crystalline Weyl algebra
    Weyl {
        #[command(subcommand)]
        cmd: WeylCmd,
    },
    /// Witt differential operators
    Wdiff {
        #[command(subcommand)]
        cmd: WdiffCmd,
    },
    /// de Rham-Witt complex of affine space
    Drw {
        #[command(subcommand)]
        cmd: DrwCmd,
    },
    /// Witt line bundle cohomology on projective space
    Cohomology {
        #[command(subcommand)]
        cmd: CohCmd,
    },
    /// Local cohomology: generation and stability
    Localcoh {
        #[command(subcommand)]
        cmd: LocalCmd,
    },
    /// Induction complex of the Steinberg module of GL_dim(F_q)
    Steinberg {
        #[arg(long)]
        q: u64,
        /// Matrix size; the simple roots are 0..dim-1
        #[arg(long)]
        dim: usize,
        /// Comma-separated subset I of the simple roots
        #[arg(long = "I", default_value = "")]
        i: String,
        #[arg(long, value_enum, default_value_t = Ring::Z)]
        ring: Ring,
    },
    /// Run a verification suite
    Verify {
        /// witt-axioms, wdiff-relations, weyl, globality, drw-identities,
        /// cohomology-sweep, localgen, stability or steinberg
        suite: String,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        j: Option<usize>,
        #[arg(long)]
        bound: Option<i64>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Ring {
    #[value(name = "Z")]
    Z,
    #[value(name = "Zpn")]
    Zpn,
}

#[derive(Subcommand)]
enum WittCmd {
    /// Universal sum, product and negation polynomials
    Polys,
    /// Apply an operation to Witt vectors read from a JSON file
    Op {
        #[arg(long, value_parser = ["add", "mul", "frob", "versch", "teich"])]
        op: String,
        /// add/mul: {"x": WittVector, "y": WittVector}; frob/versch: a WittVector;
        /// teich: a LaurentElem (length from --n)
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum WeylCmd {
    /// Normal form of a word such as "d0^[2] z0^3 D0^2"
    Nf {
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 1)]
        vars: usize,
    },
    /// Apply an operator (WeylElement JSON) to a polynomial (LaurentElem JSON)
    Apply {
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        poly: PathBuf,
    },
}

#[derive(Subcommand)]
enum WdiffCmd {
    /// Canonical lift of an operator over F_p to Witt length n+1
    Lift {
        #[arg(long)]
        op: PathBuf,
    },
    /// Check one relation on random Witt vectors at Witt length n+1
    Verify {
        #[arg(long, value_parser = ["restr", "frob", "versch", "filtr"])]
        relation: String,
        #[arg(long, default_value_t = 1)]
        d: usize,
        /// Single order r; default all r <= p^2
        #[arg(long)]
        r: Option<u64>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum DrwCmd {
    /// Basis symbols of W_n Omega^i of A^d with numerators up to the bound
    Basis {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        bound: u64,
    },
    /// Apply F, V or d to an element read from JSON
    Act {
        #[arg(long, value_parser = ["F", "V", "d"])]
        which: String,
        #[arg(long)]
        elem: PathBuf,
    },
}

#[derive(Subcommand)]
enum CohCmd {
    /// H^i(P^d, W_n O(a)) as finite-length modules
    LineBundle {
        #[arg(long)]
        d: usize,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Lengths for a range of twists against the closed forms
    Sweep {
        #[arg(long)]
        d: usize,
        #[arg(long, allow_hyphen_values = true)]
        a_min: i64,
        #[arg(long, allow_hyphen_values = true)]
        a_max: i64,
    },
}

#[derive(Subcommand)]
enum LocalCmd {
    /// Run the generation algorithm (n = 1)
    Generate {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        bound: i64,
        /// Also print each step to stderr
        #[arg(long)]
        trace: bool,
    },
    /// Check N_{n,j} against the elementary generators of P_j
    Stability {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        j: usize,
    },
}

/// Command output: a JSON value, an optional table rendering, and whether
/// any check failed.
struct Output {
    value: Value,
    table: Option<String>,
    failed: bool,
}

impl Output {
    fn json(value: Value) -> Self {
        Output { value, table: None, failed: false }
    }
}

fn need_p(g: &Global) -> Result<u64> {
    let p = g.p.ok_or_else(|| Error::Parse("--p is required".into()))?;
    if !wittkit::rings::is_prime(p) {
        return Err(Error::RangeError(format!("p = {} is not prime", p)));
    }
    Ok(p)
}

fn need_n(g: &Global) -> Result<usize> {
    g.n.ok_or_else(|| Error::Parse("--n is required".into()))
}

fn read_json(path: &PathBuf) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {}", path.display(), e)))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {}", path.display(), e)))
}

fn witt_cmd(cmd: &WittCmd, g: &Global) -> Result<Output> {
    match cmd {
        WittCmd::Polys => {
            let (p, n) = (need_p(g)?, need_n(g)?);
            if n == 0 || n > 6 {
                return Err(Error::ScaleExceeded(format!("n = {} (supported 1..=6)", n)));
            }
            let u = universal_polys(p, n)?;
            let fmt = |v: &[wittkit::witt_core::IntPoly], binary: bool| -> Vec<String> {
                v[..n].iter().map(|f| json::int_poly_string(f, binary)).collect()
            };
            Ok(Output::json(json!({
                "p": p,
                "n": n,
                "sum": fmt(&u.sum_polys, true),
                "product": fmt(&u.prod_polys, true),
                "negation": fmt(&u.neg_polys, false),
                "ghost_compatible": u.verify_ghost_symbolic(),
            })))
        }
        WittCmd::Op { op, input } => {
            let v = read_json(input)?;
            let out = match op.as_str() {
                "add" | "mul" => {
                    let x = json::witt_from_json(v.get("x").ok_or_else(|| Error::Parse("missing \"x\"".into()))?)?;
                    let y = json::witt_from_json(v.get("y").ok_or_else(|| Error::Parse("missing \"y\"".into()))?)?;
                    if op == "add" {
                        x.add(&y)?
                    } else {
                        x.mul(&y)?
                    }
                }
                "frob" => json::witt_from_json(&v)?.frobenius()?,
                "versch" => json::witt_from_json(&v)?.verschiebung(),
                _ => {
                    let a = json::laurent_from_json(&v)?;
                    let n = need_n(g)?;
                    if n == 0 {
                        return Err(Error::LengthUnderflow);
                    }
                    teichmuller(a.p(), &a, n)
                }
            };
            Ok(Output::json(json::witt_to_json(&out)))
        }
    }
}

fn weyl_cmd(cmd: &WeylCmd, g: &Global) -> Result<Output> {
    match cmd {
        WeylCmd::Nf { word, vars } => {
            let p = need_p(g)?;
            let e = g.n.unwrap_or(1) as u32;
            let tokens = parse_word(word, *vars)?;
            Ok(Output::json(json::weyl_to_json(&normal_form(&tokens, p, e, *vars)?)))
        }
        WeylCmd::Apply { op, poly } => {
            let w = json::weyl_from_json(&read_json(op)?)?;
            let f = json::laurent_from_json(&read_json(poly)?)?;
            Ok(Output::json(json::laurent_to_json(&w.apply(&f)?)))
        }
    }
}

fn wdiff_cmd(cmd: &WdiffCmd, g: &Global) -> Result<Output> {
    match cmd {
        WdiffCmd::Lift { op } => {
            let base = json::weyl_from_json(&read_json(op)?)?;
            if base.e != 1 {
                return Err(Error::Mismatch("the operator to lift must be over F_p (n = 1)".into()));
            }
            let n = need_n(g)?;
            let lifted = lift_operator(&base, n);
            Ok(Output::json(json!({
                "p": lifted.p,
                "n": lifted.n,
                "witt_length": lifted.n + 1,
                "lift": json::weyl_to_json(&lifted.lift),
                "provenance": json::weyl_to_json(&lifted.provenance),
            })))
        }
        WdiffCmd::Verify { relation, d, r, samples } => {
            let (p, n) = (need_p(g)?, need_n(g)?);
            if n > 4 || *d > 3 {
                return Err(Error::ScaleExceeded("relation checks are limited to n <= 4, d <= 3".into()));
            }
            let which = Relation::parse(relation)?;
            let mut g_rng = rng(g.seed);
            let orders: Vec<u64> = match r {
                Some(r) => vec![*r],
                None => (1..=p * p).collect(),
            };
            let mut cases = 0;
            let mut failures = Vec::new();
            for r in orders {
                let rep = check_relation(which, p, n, *d, r, *samples, SampleShape::default(), &mut g_rng)?;
                cases += rep.cases;
                failures.extend(rep.failures.into_iter().map(|f| format!("r={}: {}", r, f)));
            }
            let failed = !failures.is_empty();
            Ok(Output {
                value: json!({"relation": which.name(), "p": p, "n": n, "d": d, "seed": g.seed, "cases": cases, "failures": failures}),
                table: None,
                failed,
            })
        }
    }
}

fn drw_cmd(cmd: &DrwCmd, g: &Global) -> Result<Output> {
    match cmd {
        DrwCmd::Basis { d, i, bound } => {
            let (p, n) = (need_p(g)?, need_n(g)? as u32);
            if n == 0 {
                return Err(Error::LengthUnderflow);
            }
            if *i > *d {
                return Err(Error::SupportTooSmall);
            }
            if *d > 4 {
                return Err(Error::ScaleExceeded("d <= 4".into()));
            }
            let keys = enumerate_basis(p, n, *d, *i, *bound);
            let list: Vec<Value> = keys.iter().map(json::basis_key_to_json).collect();
            Ok(Output::json(json!({"p": p, "n": n, "d": d, "i": i, "bound": bound, "count": list.len(), "basis": list})))
        }
        DrwCmd::Act { which, elem } => {
            let e = json::drw_from_json(&read_json(elem)?)?;
            let op = DrwOp::parse(which)?;
            Ok(Output::json(json::drw_to_json(&act(op, &e)?)))
        }
    }
}

fn coh_cmd(cmd: &CohCmd, g: &Global) -> Result<Output> {
    let (p, n) = (need_p(g)?, need_n(g)?);
    if n == 0 {
        return Err(Error::LengthUnderflow);
    }
    match cmd {
        CohCmd::LineBundle { d, a, degree } => {
            if *d > 4 || n > 4 {
                return Err(Error::ScaleExceeded("d, n <= 4".into()));
            }
            let mods = witt_cohomology(p, *d, n, *a)?;
            let closed = closed_form_lengths(p, *d, n, *a);
            let degrees: Vec<Value> = mods
                .iter()
                .enumerate()
                .filter(|(i, _)| degree.is_none_or(|k| k == *i))
                .map(|(i, m)| json!({"i": i, "layers": m.layers, "length": m.length(), "closed_form": closed[i]}))
                .collect();
            if degrees.is_empty() {
                return Err(Error::RangeError(format!("degree must be at most {}", d)));
            }
            let mut table = format!("H^i(P^{}, W_{} O({})) at p = {}\n{:>3}  {:>8}  layers\n", d, n, a, p, "i", "length");
            for v in &degrees {
                table.push_str(&format!("{:>3}  {:>8}  {}\n", v["i"], v["length"], v["layers"]));
            }
            Ok(Output {
                value: json!({"case": {"p": p, "n": n, "d": d, "a": a}, "degrees": degrees}),
                table: Some(table),
                failed: false,
            })
        }
        CohCmd::Sweep { d, a_min, a_max } => {
            if *d > 4 || n > 4 || a_max - a_min > 64 {
                return Err(Error::ScaleExceeded("d, n <= 4 and at most 65 twists".into()));
            }
            let rows = sweep(p, n, *d, *a_min, *a_max)?;
            let mut table = format!("p = {}, n = {}, d = {}\n{:>4}", p, n, d, "a");
            for i in 0..=*d {
                table.push_str(&format!("  {:>8}", format!("H^{}", i)));
            }
            table.push_str("  closed form\n");
            let mut list = Vec::new();
            let mut failed = false;
            for row in &rows {
                let lengths: Vec<u64> = row.modules.iter().map(|m| m.length()).collect();
                table.push_str(&format!("{:>4}", row.a));
                for l in &lengths {
                    table.push_str(&format!("  {:>8}", l));
                }
                table.push_str(&format!("  {}\n", if row.agrees() { "agrees" } else { "DIFFERS" }));
                failed |= !row.agrees();
                list.push(json!({"a": row.a, "lengths": lengths, "closed_form": row.closed_form, "agrees": row.agrees()}));
            }
            Ok(Output { value: json!({"p": p, "n": n, "d": d, "rows": list}), table: Some(table), failed })
        }
    }
}

fn localcoh_cmd(cmd: &LocalCmd, g: &Global) -> Result<Output> {
    let p = need_p(g)?;
    match cmd {
        LocalCmd::Generate { d, j, bound, trace } => {
            if *d > 4 || *bound > 40 {
                return Err(Error::ScaleExceeded("d <= 4 and bound <= 40".into()));
            }
            let rep = generation_run(p, *d, *j, *bound)?;
            if *trace {
                for s in &rep.steps {
                    eprintln!("{:?} -> {:?}  {}  (coefficient {})", s.from, s.to, s.op, s.coeff);
                }
            }
            let total = enumerate_index(*d, *j, *bound).len();
            let steps: Vec<Value> =
                rep.steps.iter().map(|s| json!({"from": s.from, "to": s.to, "op": s.op, "coeff": s.coeff})).collect();
            let failed = !rep.complete();
            Ok(Output {
                value: json!({
                    "p": p, "d": d, "j": j, "bound": bound,
                    "reached": total - rep.missing.len(),
                    "total": total,
                    "missing": rep.missing,
                    "operators_global": rep.operators_global,
                    "rounds": rep.rounds.iter().map(|(l, ok)| json!({"limit": l, "covered": ok})).collect::<Vec<_>>(),
                    "steps": steps,
                }),
                table: None,
                failed,
            })
        }
        LocalCmd::Stability { d, j } => {
            let n = need_n(g)?;
            if *d > 3 || n > 3 {
                return Err(Error::ScaleExceeded("d, n <= 3".into()));
            }
            let rep = check_stability(p, n, *d, *j)?;
            let failed = !rep.failures.is_empty();
            Ok(Output {
                value: json!({
                    "p": p, "n": n, "d": d, "j": j,
                    "generators": rep.generators,
                    "group_elements": rep.group_elements,
                    "checks": rep.checks,
                    "stable": !failed,
                    "failures": rep.failures,
                }),
                table: None,
                failed,
            })
        }
    }
}

fn steinberg_cmd(q: u64, dim: usize, i: &str, ring: Ring, g: &Global) -> Result<Output> {
    if dim < 2 {
        return Err(Error::RangeError("dim must be at least 2".into()));
    }
    let set: BTreeSet<usize> = i
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad root index {}", s))))
        .collect::<Result<_>>()?;
    let cx = build_complex(q, dim - 1, &set)?;
    let coeffs = match ring {
        Ring::Z => Coeffs::Z,
        Ring::Zpn => {
            let p = need_p(g)?;
            Coeffs::ModPn(p, need_n(g)? as u32)
        }
    };
    let rep = acyclicity_check(&cx, coeffs);
    let ring_name = match coeffs {
        Coeffs::Z => "Z".to_string(),
        Coeffs::ModPn(p, n) => format!("Z/{}^{}", p, n),
    };
    let homology: Vec<Value> =
        rep.exact.iter().enumerate().map(|(s, &e)| json!({"degree": s, "vanishes": e})).collect();
    Ok(Output {
        value: json!({
            "q": q, "dim": dim, "I": set, "ring": ring_name,
            "ranks": rep.dims,
            "homology": homology,
            "steinberg_rank": rep.cokernel_rank,
            "free": rep.cokernel_free,
            "euler": rep.euler,
            "d_squared_zero": cx.d_squared_zero,
        }),
        table: None,
        failed: !rep.acyclic() || !cx.d_squared_zero,
    })
}

fn suite_json(rep: &SuiteReport) -> Value {
    let c = &rep.config;
    let cases: Vec<Value> = rep
        .cases
        .iter()
        .map(|k| {
            json!({
                "name": k.name,
                "passed": k.passed(),
                "checks": k.checks,
                "failures": k.failures,
                "notes": k.notes,
                "millis": k.millis,
            })
        })
        .collect();
    json!({
        "suite": c.suite,
        "config": {"p": c.p, "n": c.n, "d": c.d, "j": c.j, "bound": c.bound, "samples": c.samples, "seed": c.seed},
        "passed": rep.passed(),
        "failures": rep.failures(),
        "cases": cases,
    })
}

fn suite_table(rep: &SuiteReport) -> String {
    let mut s = format!("suite {} (seed {})\n", rep.config.suite, rep.config.seed);
    for c in &rep.cases {
        s.push_str(&format!(
            "{}  {:<48} {:>9} checks {:>7} ms{}\n",
            if c.passed() { "PASS" } else { "FAIL" },
            c.name,
            c.checks,
            c.millis,
            if c.notes.is_empty() { String::new() } else { format!("  [{}]", c.notes.join("; ")) }
        ));
        for f in c.failures.iter().take(5) {
            s.push_str(&format!("      {}\n", f));
        }
    }
    s
}

fn run(cli: &Cli) -> Result<Output> {
    let g = &cli.global;
    match &cli.command {
        Command::Witt { cmd } => witt_cmd(cmd, g),
        Command::Weyl { cmd } => weyl_cmd(cmd, g),
        Command::Wdiff { cmd } => wdiff_cmd(cmd, g),
        Command::Drw { cmd } => drw_cmd(cmd, g),
        Command::Cohomology { cmd } => coh_cmd(cmd, g),
        Command::Localcoh { cmd } => localcoh_cmd(cmd, g),
        Command::Steinberg { q, dim, i, ring } => steinberg_cmd(*q, *dim, i, *ring, g),
        Command::Verify { suite, d, j, bound, samples } => {
            let mut cfg = SuiteConfig::new(suite);
            cfg.p = g.p;
            cfg.n = g.n;
            cfg.d = *d;
            cfg.j = *j;
            cfg.bound = *bound;
            cfg.samples = *samples;
            cfg.seed = g.seed;
            let rep = run_suite(&cfg)?;
            Ok(Output { value: suite_json(&rep), table: Some(suite_table(&rep)), failed: !rep.passed() })
        }
    }
}

fn out_path(path: &PathBuf) -> PathBuf {
    match std::env::var_os(OUT_DIR_VAR) {
        Some(dir) if path.is_relative() => PathBuf::from(dir).join(path),
        _ => path.clone(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(2);
        }
    };
    let default_table = matches!(cli.command, Command::Cohomology { cmd: CohCmd::Sweep { .. } });
    let format = cli.global.format.unwrap_or(if default_table { Format::Table } else { Format::Json });
    let text = match (format, &out.table) {
        (Format::Table, Some(t)) => t.clone(),
        _ => serde_json::to_string_pretty(&out.value).expect("JSON serialization") + "\n",
    };
    match &cli.global.out {
        Some(path) => {
            let path = out_path(path);
            if let Err(e) = std::fs::write(&path, &text) {
                eprintln!("error: cannot write {}: {}", path.display(), e);
                return ExitCode::from(2);
            }
        }
        None => print!("{}", text),
    }
    if out.failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
