//! The `ffframes` command line: JSON in, JSON report out.
//!
//! Exit codes: 0 success or property holds, 1 property fails, 2 invalid
//! input, 3 search budget exceeded.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::combinatorics::{
    design_extract, design_verify, etf_twograph_correspond, gamma_analyze, incoherence_number, incoherent_set,
    simplex_enumerate, srg_check, two_graph_of, two_graph_regularity,
};
use crate::equivalence::{switching_equiv, unitary_equiv, Strategy};
use crate::error::{Error, Result};
use crate::frames::{gerzon_check, gram_realize, naimark_of, FrameSystem};
use crate::gf::Elem;
use crate::json::*;
use crate::search::search_equiangular;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ffframes", version, about = "Frames and equiangular systems over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads for the search.
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Auto,
    Triples,
    General,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Describe a field.
    Field {
        #[arg(long)]
        input: String,
    },
    /// Frame status: tightness, equiangularity, Gerzon bound.
    Verify {
        #[arg(long)]
        input: String,
    },
    /// Tightness report.
    Tight {
        #[arg(long)]
        input: String,
    },
    /// Equiangular tight frame verification.
    Etf {
        #[arg(long)]
        input: String,
    },
    /// Vectors realizing a Gram matrix: {"field", "gram", "ambient_dim"?}.
    Realize {
        #[arg(long)]
        input: String,
    },
    /// Naimark complement of a tight frame.
    Naimark {
        #[arg(long)]
        input: String,
        /// Scale s of the complement Gram s(cI − G), a field element in JSON.
        #[arg(long)]
        scale: Option<String>,
    },
    /// Switching and unitary equivalence of {"a": frame, "b": frame}.
    Equiv {
        #[arg(long)]
        input: String,
        #[arg(long, value_enum, default_value = "auto")]
        strategy: StrategyArg,
    },
    /// Two-graph of a frame for a root β of b, or regularity of a given two-graph.
    Twograph {
        #[arg(long)]
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
        /// Also check the descendant of this 1-based point for strong regularity.
        #[arg(long)]
        descendant: Option<usize>,
        /// Compare SRG parameters modulo this prime.
        #[arg(long)]
        modular_p: Option<u64>,
    },
    /// Regular simplices among the vectors.
    Simplex {
        #[arg(long)]
        input: String,
        /// Comma separated simplex sizes s.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
    },
    /// Incoherence number for a root β of b.
    Incoherence {
        #[arg(long)]
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
    },
    /// t-design check of {"points", "blocks", "t"} or a bare block list.
    Design {
        #[arg(long, visible_alias = "blocks")]
        input: String,
        #[arg(long)]
        t: Option<usize>,
    },
    /// Γ analysis of a maximal incoherent set and the designs it carries.
    Gamma {
        #[arg(long)]
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: Option<String>,
    },
    /// Backtracking search for equiangular systems.
    Search {
        #[arg(long)]
        input: String,
    },
}

struct Outcome {
    report: Value,
    holds: bool,
}

fn ok(report: Value) -> Result<Outcome> {
    Ok(Outcome { report, holds: true })
}

fn read_input(path: &str, stdin: &mut dyn Read) -> Result<Value> {
    let text = if path == "-" {
        let mut s = String::new();
        stdin.read_to_string(&mut s).map_err(|e| Error::Parse(format!("standard input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?
    };
    parse(&text)
}

/// β from the flag, else from the input's "beta" key.
fn beta_of(fs: &FrameSystem, flag: &Option<String>, input: &Value) -> Result<Elem> {
    let f = fs.field();
    match flag {
        Some(s) => elem_from_json(f, &parse(s)?),
        None => match input.get("beta") {
            Some(v) => elem_from_json(f, v),
            None => Err(Error::Parse("beta is required (--beta or a \"beta\" key)".into())),
        },
    }
}

fn with_frame(fs: &FrameSystem, mut report: Value) -> Value {
    report["frame"] = frame_to_json(fs);
    report
}

fn cmd_field(input: &Value) -> Result<Outcome> {
    let f = field_from_json(input.get("field").unwrap_or(input))?;
    let mut r = field_to_json(&f);
    r["order"] = json!(f.order());
    r["case"] = json!(case_str(f.case()));
    r["fixed_order"] = json!(f.fixed_order());
    r["generator"] = elem_to_json(&f, f.generator());
    r["canonical_nonsquare"] = f.canonical_nonsquare().map_or(Value::Null, |x| elem_to_json(&f, x));
    ok(r)
}

fn gerzon_json(fs: &FrameSystem) -> Value {
    match fs.equiangular() {
        Some(p) => match gerzon_check(fs.n(), fs.d(), fs.field().case(), p, fs.field()) {
            Ok(g) => gerzon_to_json(&g),
            Err(_) => Value::Null,
        },
        None => Value::Null,
    }
}

fn cmd_verify(input: &Value) -> Result<Outcome> {
    let fs = frame_from_json(input)?;
    let f = fs.field();
    let status = fs.status();
    let r = json!({
        "n": fs.n(),
        "d": fs.d(),
        "case": case_str(f.case()),
        "status": tightness_to_json(f, &status),
        "equiangular": fs.equiangular().map(|p| params_to_json(f, p)),
        "gerzon": gerzon_json(&fs),
        "span_discriminant": fs.span_discriminant().ok().map(|d| discriminant_to_json(f, &d)),
    });
    ok(with_frame(&fs, r))
}

fn cmd_tight(input: &Value) -> Result<Outcome> {
    let fs = frame_from_json(input)?;
    let status = fs.status();
    let holds = status.tight;
    Ok(Outcome { report: with_frame(&fs, tightness_to_json(fs.field(), &status)), holds })
}

fn cmd_etf(input: &Value) -> Result<Outcome> {
    let fs = frame_from_json(input)?;
    let etf = match fs.etf_verify() {
        Err(Error::NotEquiangular) => {
            let r = json!({
                "verdict": false,
                "n": fs.n(),
                "status": tightness_to_json(fs.field(), &fs.status()),
                "failure_reasons": ["not equiangular"],
            });
            return Ok(Outcome { report: with_frame(&fs, r), holds: false });
        }
        other => other?,
    };
    let mut r = etf_to_json(fs.field(), &etf);
    r["gerzon"] = gerzon_json(&fs);
    Ok(Outcome { report: with_frame(&fs, r), holds: etf.verdict })
}

fn cmd_realize(input: &Value) -> Result<Outcome> {
    let f = field_from_json(input.get("field").ok_or_else(|| Error::Parse("missing key \"field\"".into()))?)?;
    let g = matrix_from_json(&f, input.get("gram").ok_or_else(|| Error::Parse("missing key \"gram\"".into()))?)?;
    let ambient = input.get("ambient_dim").and_then(Value::as_u64).map(|d| d as usize);
    let fs = gram_realize(&g, f.case(), ambient)?;
    let holds = fs.gram() == &g;
    let mut r = frame_to_json(&fs);
    r["gram"] = matrix_to_json(&g);
    r["gram_matches"] = json!(holds);
    Ok(Outcome { report: r, holds })
}

fn cmd_naimark(input: &Value, scale: &Option<String>) -> Result<Outcome> {
    let fs = frame_from_json(input)?;
    let s = match scale {
        Some(s) => Some(elem_from_json(fs.field(), &parse(s)?)?),
        None => input.get("scale").map(|v| elem_from_json(fs.field(), v)).transpose()?,
    };
    let rep = naimark_of(&fs, s)?;
    let holds = rep.orthogonal && rep.image_matches_kernel && rep.discriminant_law != Some(false);
    Ok(Outcome { report: with_frame(&fs, naimark_to_json(fs.field(), &rep)), holds })
}

fn cmd_equiv(input: &Value, strategy: StrategyArg) -> Result<Outcome> {
    let a = frame_from_json(input.get("a").ok_or_else(|| Error::Parse("missing key \"a\"".into()))?)?;
    let b = frame_from_json(input.get("b").ok_or_else(|| Error::Parse("missing key \"b\"".into()))?)?;
    let strategy = match strategy {
        StrategyArg::Auto => Strategy::Auto,
        StrategyArg::Triples => Strategy::Triples,
        StrategyArg::General => Strategy::General,
    };
    let cert = switching_equiv(&a, &b, strategy)?;
    let unitary = unitary_equiv(&a, &b)?;
    let mut r = switching_to_json(a.field(), &cert);
    r["unitary"] = unitary_to_json(&unitary);
    r["a"] = frame_to_json(&a);
    r["b"] = frame_to_json(&b);
    Ok(Outcome { report: r, holds: cert.equivalent })
}

fn cmd_twograph(input: &Value, beta: &Option<String>, descendant: Option<usize>, modular_p: Option<u64>) -> Result<Outcome> {
    let is_frame = input.get("vectors").is_some() || input.get("frame").is_some();
    let (tg, frame) = if is_frame {
        let fs = frame_from_json(input)?;
        let beta = beta_of(&fs, beta, input)?;
        (two_graph_of(&fs, beta)?, Some(fs))
    } else {
        (two_graph_from_json(input)?, None)
    };
    let params = two_graph_regularity(&tg)?;
    let mut r = two_graph_to_json(frame.as_ref().map(|fs| fs.field()), &tg);
    r["params"] = two_graph_params_to_json(&params);
    r["satisfies_axiom"] = json!(tg.satisfies_axiom());
    r["trivial"] = json!(tg.is_trivial());
    r["complete"] = json!(tg.is_complete());
    if let Some(x) = descendant {
        if x == 0 || x > tg.n() {
            return Err(Error::Parse(format!("descendant point {x} outside 1..={}", tg.n())));
        }
        let adj = tg.descendant(x - 1);
        r["descendant_srg"] = match srg_check(&adj, modular_p) {
            Ok(s) => srg_to_json(&s),
            Err(e) => json!({ "error": e.to_string() }),
        };
    }
    if let Some(fs) = &frame {
        r["correspondence"] = match etf_twograph_correspond(fs) {
            Ok(c) => correspondence_to_json(&c),
            Err(e) => json!({ "error": e.to_string() }),
        };
        r["frame"] = frame_to_json(fs);
    }
    Ok(Outcome { report: r, holds: params.regular })
}

fn cmd_simplex(input: &Value, sizes: &Option<Vec<usize>>) -> Result<Outcome> {
    let fs = frame_from_json(input)?;
    let recs = simplex_enumerate(&fs, sizes.as_deref())?;
    let holds = recs.iter().all(|r| r.discriminant_matches && r.criteria != Some(false));
    let mut by_size = serde_json::Map::new();
    for r in &recs {
        let e = by_size.entry(r.s.to_string()).or_insert(json!(0));
        *e = json!(e.as_u64().unwrap_or(0) + 1);
    }
    let r = json!({
        "count": recs.len(),
        "by_size": by_size,
        "simplices": recs.iter().map(|r| simplex_record_to_json(fs.field(), r)).collect::<Vec<_>>(),
    });
    Ok(Outcome { report: with_frame(&fs, r), holds })
}

fn cmd_incoherence(input: &Value, beta: &Option<String>) -> Result<Outcome> {
    let fs = frame_from_json(input)?;
    let beta = beta_of(&fs, beta, input)?;
    let rep = incoherence_number(&fs, beta)?;
    let holds = rep.bound_holds != Some(false);
    Ok(Outcome { report: with_frame(&fs, incoherence_to_json(fs.field(), &rep)), holds })
}

fn cmd_design(input: &Value, t: Option<usize>) -> Result<Outcome> {
    let (points, blocks, t) = design_input_from_json(input, t)?;
    let d = design_verify(points, &blocks, t)?;
    let holds = d.is_design;
    Ok(Outcome { report: design_to_json(&d), holds })
}

/// Input: a frame with "beta" and optionally "set" (1-based; default the
/// incoherence witness) and "outside" (1-based; default every vector outside).
fn cmd_gamma(input: &Value, beta: &Option<String>) -> Result<Outcome> {
    let fs = frame_from_json(input)?;
    let beta = beta_of(&fs, beta, input)?;
    let set = match input.get("set") {
        Some(v) => incoherent_set(&fs, &indices_from_json(v, fs.n(), "set")?, beta)?,
        None => incoherence_number(&fs, beta)?.witness,
    };
    let outside: Vec<usize> = match input.get("outside") {
        Some(v) => vec![index_from_json(v, fs.n(), "outside")?],
        None => (0..fs.n()).filter(|j| !set.indices.contains(j)).collect(),
    };
    let mut gammas = Vec::new();
    let mut holds = true;
    for j in outside {
        let g = gamma_analyze(&fs, &set, j)?;
        holds &= g.intersection_check && (!g.spans_ambient || g.root_check);
        gammas.push(gamma_to_json(fs.field(), &g));
    }
    let designs = match design_extract(&fs, &set) {
        Ok(d) => {
            holds &= d.sum_identity_holds;
            design_extraction_to_json(&d)
        }
        Err(e) => json!({ "error": e.to_string() }),
    };
    let r = json!({
        "beta": elem_to_json(fs.field(), beta),
        "set": incoherent_set_to_json(fs.field(), &set),
        "gamma": gammas,
        "designs": designs,
    });
    Ok(Outcome { report: with_frame(&fs, r), holds })
}

fn cmd_search(input: &Value, workers: Option<usize>) -> Result<Outcome> {
    let mut spec = search_spec_from_json(input)?;
    if let Ok(b) = std::env::var("FFF_BUDGET") {
        spec.budget = b.trim().parse().map_err(|_| Error::Parse(format!("FFF_BUDGET is not an integer: {b}")))?;
    }
    spec.workers = workers;
    let res = search_equiangular(&spec)?;
    Ok(Outcome { report: search_result_to_json(&spec, &res), holds: res.count > 0 })
}

fn dispatch(cli: &Cli, stdin: &mut dyn Read) -> Result<Outcome> {
    use Command::*;
    match &cli.command {
        Field { input } => cmd_field(&read_input(input, stdin)?),
        Verify { input } => cmd_verify(&read_input(input, stdin)?),
        Tight { input } => cmd_tight(&read_input(input, stdin)?),
        Etf { input } => cmd_etf(&read_input(input, stdin)?),
        Realize { input } => cmd_realize(&read_input(input, stdin)?),
        Naimark { input, scale } => cmd_naimark(&read_input(input, stdin)?, scale),
        Equiv { input, strategy } => cmd_equiv(&read_input(input, stdin)?, *strategy),
        Twograph { input, beta, descendant, modular_p } => {
            cmd_twograph(&read_input(input, stdin)?, beta, *descendant, *modular_p)
        }
        Simplex { input, sizes } => cmd_simplex(&read_input(input, stdin)?, sizes),
        Incoherence { input, beta } => cmd_incoherence(&read_input(input, stdin)?, beta),
        Design { input, t } => cmd_design(&read_input(input, stdin)?, *t),
        Gamma { input, beta } => cmd_gamma(&read_input(input, stdin)?, beta),
        Search { input } => cmd_search(&read_input(input, stdin)?, cli.workers),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_INVALID,
    }
}

/// Runs one invocation against the given streams and returns the exit code.
pub fn run_cli_with<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = write!(stderr, "{text}");
            }
            return code;
        }
    };
    let outcome = match dispatch(&cli, stdin) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let text = serde_json::to_string_pretty(&outcome.report).expect("reports serialize");
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text + "\n") {
                let _ = writeln!(stderr, "error: {}: {e}", path.display());
                return EXIT_INVALID;
            }
        }
        None => {
            let _ = writeln!(stdout, "{text}");
        }
    }
    if outcome.holds {
        EXIT_OK
    } else {
        EXIT_FAILS
    }
}

/// Runs one invocation on the process streams.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_cli_with(args, &mut std::io::stdin(), &mut std::io::stdout(), &mut std::io::stderr())
}
