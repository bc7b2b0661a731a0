use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use boxcode::acceptance;
use boxcode::code::{intersection_product, parse_word_list, EmptyWordPolicy};
use boxcode::constructions::{
    classification_by_class, classify_three_index, named_code, sunflower,
    weak_monotone_extension, GoldenTable, NAMED_CODES, THREE_INDEX_GOLDEN,
};
use boxcode::dim::{
    bdim_with, closure_with, factorizations, is_box_convex_in_dim, BdimOptions,
    ClosureOptions, Strategy,
};
use boxcode::geometry::{code_of_interiors, code_of_realization, Realization};
use boxcode::interval::{
    interval_codes, is_interval_code, needs_empty_intervals, realize_interval_code,
};
use boxcode::json::{parse_code, parse_word_set};
use boxcode::normalize::normalize_with_report;
use boxcode::{Code, Error};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "boxcode", version, about = "Combinatorial codes realized by boxes")]
struct Cli {
    /// Indent JSON output.
    #[arg(long, global = true)]
    pretty: bool,

    /// For yes/no queries: exit 1 when the answer differs.
    #[arg(long, global = true, value_name = "BOOL")]
    expect: Option<bool>,

    /// Reject codes without the empty codeword instead of adding it.
    #[arg(long, global = true)]
    strict: bool,

    /// Universe size, for text-form codes and size-driven subcommands.
    #[arg(long, global = true)]
    n: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Code of a box realization.
    CodeOf {
        realization: PathBuf,
        /// Use the interiors of the boxes.
        #[arg(long)]
        open: bool,
    },
    /// Intersection product of two or more codes.
    Product {
        #[arg(num_args = 2.., required = true)]
        codes: Vec<String>,
    },
    /// Every interval code on [n] (n <= 4).
    IntervalCodes {
        #[arg(long)]
        count_only: bool,
    },
    IsIntervalCode {
        code: String,
    },
    /// Interval realization with integer endpoints in [1, 2n].
    RealizeInterval {
        code: String,
    },
    /// Box embedding dimension.
    Bdim {
        code: String,
        #[arg(long)]
        max_dim: Option<usize>,
        /// Force the anchored search (needs [n] as a codeword).
        #[arg(long)]
        anchored: bool,
    },
    IsBoxConvex {
        code: String,
        #[arg(long)]
        dim: usize,
    },
    /// Products of interval codes, layer by layer.
    Closure {
        #[arg(long)]
        max_dim: Option<usize>,
        /// JSON file of generator codes (default: all interval codes).
        #[arg(long)]
        generators: Option<PathBuf>,
        /// Write every layer to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Integer corners in [1, 2n] with a verification report.
    Normalize {
        realization: PathBuf,
    },
    /// The sunflower code on [n] and its interval factors.
    Sunflower,
    /// Extend a code by a downward-closed set of words below it.
    MonotoneExtend {
        code: String,
        down: String,
    },
    /// Box dimension of every convex code on three indices.
    Classify3 {
        /// Compare against a reference table (use "builtin" for the bundled one).
        #[arg(long)]
        golden: Option<String>,
    },
    NamedCode {
        name: String,
    },
    /// Pairs of candidate codes whose product is the code.
    Factorize {
        code: String,
        /// JSON array of candidate codes (default: interval codes on [n]).
        #[arg(long)]
        candidates: Option<PathBuf>,
    },
    /// Run the acceptance suite.
    Selftest {
        #[arg(long)]
        criterion: Option<usize>,
    },
}

enum Failure {
    Usage(String),
    Negative,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<Option<Value>, Failure>;

fn read_input(arg: &str) -> Result<String, Failure> {
    if arg == "-" {
        return std::io::read_to_string(std::io::stdin())
            .map_err(|e| Failure::Usage(format!("stdin: {e}")));
    }
    let path = Path::new(arg);
    if path.is_file() {
        return std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())));
    }
    Ok(arg.to_string())
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

struct Ctx {
    n: Option<usize>,
    policy: EmptyWordPolicy,
    expect: Option<bool>,
}

impl Ctx {
    /// A code argument: a JSON file, `-` for stdin, a named code, or inline
    /// JSON or text.
    fn code(&self, arg: &str) -> Result<Code, Failure> {
        if let Ok(c) = named_code(arg) {
            return Ok(c);
        }
        let text = read_input(arg)?;
        let code = if text.trim_start().starts_with('{') && text.contains("codewords") {
            let (code, _) = parse_code(&text, self.policy)?;
            if let Some(n) = self.n.filter(|&n| n != code.n()) {
                return Err(Error::UniverseMismatch { left: n, right: code.n() }.into());
            }
            code
        } else {
            let words = parse_word_list(&text)?;
            let n = match self.n {
                Some(n) => n,
                None => words.iter().map(|w| w.max_index()).max().unwrap_or(0).max(1),
            };
            Code::try_new(n, words, self.policy)?.0
        };
        Ok(code)
    }

    fn codes(&self, path: &Path) -> Result<Vec<Code>, Failure> {
        let values: Vec<Value> = serde_json::from_str(&read_file(path)?)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        values
            .iter()
            .map(|v| Ok(parse_code(&v.to_string(), self.policy)?.0))
            .collect()
    }

    fn need_n(&self) -> Result<usize, Failure> {
        self.n.ok_or_else(|| Failure::Usage("missing --n".into()))
    }

    fn answer(&self, yes: bool, body: Value) -> Outcome {
        if self.expect.is_some_and(|e| e != yes) {
            println!("{body}");
            return Err(Failure::Negative);
        }
        Ok(Some(body))
    }
}

fn realization(path: &Path) -> Result<Realization, Failure> {
    serde_json::from_str(&read_file(path)?)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable output")
}

fn run(cli: Cli) -> Outcome {
    let ctx = Ctx {
        n: cli.n,
        policy: if cli.strict { EmptyWordPolicy::Strict } else { EmptyWordPolicy::Insert },
        expect: cli.expect,
    };
    match cli.command {
        Command::CodeOf { realization: path, open } => {
            let r = realization(&path)?;
            let c = if open { code_of_interiors(&r) } else { code_of_realization(&r) };
            Ok(Some(to_value(&c)))
        }
        Command::Product { codes } => {
            let codes = codes.iter().map(|c| ctx.code(c)).collect::<Result<Vec<_>, _>>()?;
            let mut acc = codes[0].clone();
            for c in &codes[1..] {
                acc = intersection_product(&acc, c)?;
            }
            Ok(Some(to_value(&acc)))
        }
        Command::IntervalCodes { count_only } => {
            let n = ctx.need_n()?;
            let codes = interval_codes(n)?;
            let mut body = json!({ "n": n, "count": codes.len() });
            if !count_only {
                body["codes"] = to_value(codes);
            }
            Ok(Some(body))
        }
        Command::IsIntervalCode { code } => {
            let c = ctx.code(&code)?;
            let yes = is_interval_code(&c);
            ctx.answer(
                yes,
                json!({ "interval_code": yes, "needs_empty_intervals": yes && needs_empty_intervals(&c) }),
            )
        }
        Command::RealizeInterval { code } => {
            let c = ctx.code(&code)?;
            match realize_interval_code(&c).assignment() {
                Some(a) => Ok(Some(to_value(&a.to_realization()))),
                None => {
                    eprintln!("error: {c} is not an interval code");
                    Err(Failure::Negative)
                }
            }
        }
        Command::Bdim { code, max_dim, anchored } => {
            let c = ctx.code(&code)?;
            let strategy = if anchored { Strategy::Anchored } else { Strategy::Auto };
            let b = bdim_with(&c, BdimOptions { strategy, max_dim })?;
            ctx.answer(b.dim().is_some(), to_value(&b))
        }
        Command::IsBoxConvex { code, dim } => {
            let c = ctx.code(&code)?;
            let yes = is_box_convex_in_dim(&c, dim)?;
            ctx.answer(yes, json!({ "box_convex": yes, "dim": dim }))
        }
        Command::Closure { max_dim, generators, emit } => {
            let n = ctx.need_n()?;
            let gens = generators.map(|p| ctx.codes(&p)).transpose()?;
            let result = closure_with(
                n,
                gens.as_deref(),
                &ClosureOptions { max_dim, within: None },
            )?;
            let layers = result.layers();
            let sizes: Vec<usize> = layers.iter().map(|l| l.len()).collect();
            if let Some(path) = emit {
                let body = json!({
                    "n": n,
                    "fixpoint_reached": result.fixpoint_reached(),
                    "layers": to_value(&layers),
                });
                std::fs::write(&path, format!("{body}\n"))
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            }
            Ok(Some(json!({
                "n": n,
                "generators": result.generators().len(),
                "fixpoint_reached": result.fixpoint_reached(),
                "layer_sizes": sizes,
            })))
        }
        Command::Normalize { realization: path } => {
            let r = realization(&path)?;
            let (out, report) = normalize_with_report(&r);
            Ok(Some(json!({ "realization": to_value(&out), "report": to_value(&report) })))
        }
        Command::Sunflower => {
            let (code, factors) = sunflower(ctx.need_n()?)?;
            Ok(Some(json!({ "code": to_value(&code), "factors": to_value(&factors) })))
        }
        Command::MonotoneExtend { code, down } => {
            let c = ctx.code(&code)?;
            let d = parse_word_set(&read_input(&down)?)?;
            let (union, extension) = weak_monotone_extension(&c, &d)?;
            Ok(Some(json!({ "union": to_value(&union), "extension": to_value(&extension) })))
        }
        Command::Classify3 { golden } => {
            let table = classify_three_index()?;
            let mut body = json!({ "codes": to_value(&table) });
            if let Some(g) = golden {
                let text = if g == "builtin" { THREE_INDEX_GOLDEN.to_string() } else { read_file(Path::new(&g))? };
                let want = GoldenTable::parse(&text)?.canonical()?;
                let matches = classification_by_class(&table) == want;
                body["matches_golden"] = json!(matches);
                if !matches {
                    println!("{body}");
                    return Err(Failure::Negative);
                }
            }
            Ok(Some(body))
        }
        Command::NamedCode { name } => match named_code(&name) {
            Ok(c) => Ok(Some(to_value(&c))),
            Err(e) => Err(Failure::Usage(format!("{e}; known: {}", NAMED_CODES.join(", ")))),
        },
        Command::Factorize { code, candidates } => {
            let c = ctx.code(&code)?;
            let cands = match candidates {
                Some(p) => ctx.codes(&p)?,
                None => interval_codes(c.n())?.iter().cloned().collect(),
            };
            let pairs: Vec<[Code; 2]> = factorizations(&c, &cands)?
                .into_iter()
                .map(|(a, b)| [a, b])
                .collect();
            Ok(Some(json!({ "count": pairs.len(), "pairs": to_value(&pairs) })))
        }
        Command::Selftest { criterion } => {
            let reports = match criterion {
                Some(k) => vec![acceptance::run_criterion(k)
                    .ok_or_else(|| Failure::Usage(format!("no criterion {k}")))?],
                None => acceptance::run_all(),
            };
            for r in &reports {
                println!("{r}");
            }
            let failed = reports.iter().filter(|r| !r.passed).count();
            println!("{} passed, {failed} failed", reports.len() - failed);
            if failed > 0 {
                return Err(Failure::Negative);
            }
            Ok(None)
        }
    }
}

fn configure_threads() {
    let Ok(v) = std::env::var("BOXCODE_THREADS") else { return };
    match v.parse::<usize>() {
        Ok(k) if k > 0 => {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
        }
        _ => eprintln!("warning: ignoring BOXCODE_THREADS={v:?}"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let pretty = cli.pretty;
    match run(cli) {
        Ok(Some(v)) => {
            let out = if pretty {
                serde_json::to_string_pretty(&v)
            } else {
                serde_json::to_string(&v)
            };
            let _ = writeln!(std::io::stdout().lock(), "{}", out.expect("serializable output"));
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(Failure::Negative) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
