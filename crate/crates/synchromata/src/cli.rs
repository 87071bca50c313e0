//! The command-line front end. One verb per analysis, deterministic output,
//! stable exit codes: 0 success, 1 usage error, 2 invalid input,
//! 3 inconclusive order, 4 budget exceeded.

use std::io::Write;
use std::path::Path;

use crate::badpairs::{bad_pairs_graph, has_circuit, minimal_bad_pairs_graph};
use crate::combine::{combine_disjoint, parse_combine_spec};
use crate::dual::dual;
use crate::error::{Error, Result};
use crate::group::{cayley_machine, GroupTable};
use crate::growth::growth_series;
use crate::levelmap::{level_map, spectrum};
use crate::minimize::minimize;
use crate::order::{decide_order, witness_from_loop, OrderBudget, OrderVerdict};
use crate::partition::letter_partition;
use crate::registry::example_registry;
use crate::splits::{splitting_length, SplitSearch};
use crate::sync::{core, sync_analysis, sync_level};
use crate::transducer::Transducer;
use crate::trn::{parse_trn, serialize_trn};
use crate::Caps;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

const USAGE: &str = "usage: synchromata <verb> [args]\n\
verbs:\n\
  info FILE                         states, levels, invertibility, letter partition\n\
  product A B -o OUT                transducer product A * B\n\
  power FILE -m M [--raw] [-o OUT]  minimized core power (raw product with --raw)\n\
  minimize FILE [-o OUT]            minimization under behavioral equivalence\n\
  core FILE [-o OUT]                sub-transducer on the forced states\n\
  dual FILE -k K -o OUT             level-k dual as a transducer\n\
  splits FILE -r R --max-len L      splitting length search at level r\n\
  badpairs FILE -r R [--minimal] [--max-len L] [--dot OUT]\n\
  order FILE [--max-power P] [--max-dual D]   JSON verdict\n\
  witness FILE -r R                 infinite-orbit witness from a level-r loop\n\
  spectrum FILE -k K                cycle-triple spectrum at level k\n\
  cayley --table CSV -o OUT         Cayley machine of a group table\n\
  combine SPECFILE -o OUT           disjoint combination from a spec file\n\
  growth FILE -m M --csv OUT        growth series of minimized core powers\n\
  example NAME [-o OUT]             a registry machine\n";

/// Runs one invocation; `argv` excludes the program name.
pub fn run(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(argv, out) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "{msg}");
            let _ = write!(err, "{USAGE}");
            EXIT_USAGE
        }
        Err(CliError::Lib(Error::BudgetExceeded(msg))) => {
            let _ = writeln!(err, "budget exceeded: {msg}");
            EXIT_BUDGET
        }
        Err(CliError::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Flag parser rejecting anything it does not know.
struct Args<'a> {
    positional: Vec<&'a str>,
    flags: Vec<(&'a str, Option<&'a str>)>,
}

impl<'a> Args<'a> {
    fn parse(argv: &'a [String], value_flags: &[&str], bool_flags: &[&str]) -> CliResult<Args<'a>> {
        let mut positional = Vec::new();
        let mut flags = Vec::new();
        let mut it = argv.iter();
        while let Some(arg) = it.next() {
            if let Some(stripped) = arg.strip_prefix('-') {
                let name: &str = stripped.strip_prefix('-').unwrap_or(stripped);
                if bool_flags.contains(&name) {
                    flags.push((name, None));
                } else if value_flags.contains(&name) {
                    let value = it
                        .next()
                        .ok_or_else(|| usage(format!("flag -{name} needs a value")))?;
                    flags.push((name, Some(value.as_str())));
                } else {
                    return Err(usage(format!("unknown flag {arg}")));
                }
            } else {
                positional.push(arg.as_str());
            }
        }
        Ok(Args { positional, flags })
    }

    fn value(&self, name: &str) -> Option<&str> {
        self.flags
            .iter()
            .find(|(n, _)| *n == name)
            .and_then(|(_, v)| *v)
    }

    fn has(&self, name: &str) -> bool {
        self.flags.iter().any(|(n, _)| *n == name)
    }

    fn usize_value(&self, name: &str) -> CliResult<Option<usize>> {
        match self.value(name) {
            None => Ok(None),
            Some(v) => v
                .parse::<usize>()
                .map(Some)
                .map_err(|_| usage(format!("flag -{name} needs an integer, found {v:?}"))),
        }
    }

    fn require_usize(&self, name: &str) -> CliResult<usize> {
        self.usize_value(name)?
            .ok_or_else(|| usage(format!("missing required flag -{name}")))
    }
}

fn load(path: &str) -> Result<Transducer> {
    let text = std::fs::read_to_string(path)?;
    parse_trn(&text)
}

fn emit(t: &Transducer, target: Option<&str>, out: &mut dyn Write) -> Result<()> {
    let text = serialize_trn(t);
    match target {
        Some(path) => std::fs::write(path, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn dispatch(argv: &[String], out: &mut dyn Write) -> CliResult<i32> {
    let Some(verb) = argv.first() else {
        return Err(usage("missing verb"));
    };
    let rest = &argv[1..];
    let caps = Caps::default();
    match verb.as_str() {
        "info" => {
            let args = Args::parse(rest, &[], &[])?;
            let [file] = args.positional[..] else {
                return Err(usage("info takes exactly one file"));
            };
            let t = load(file)?;
            writeln!(out, "alphabet: {}", t.alphabet()).ok();
            writeln!(out, "states: {}", t.state_count()).ok();
            match sync_analysis(&t, &caps) {
                Ok(info) => writeln!(out, "synchronizing level: {}", info.level).ok(),
                Err(Error::NotSynchronizing { pair, cycle }) => writeln!(
                    out,
                    "synchronizing: no (pair {{{},{}}} cycles on {})",
                    pair.0, pair.1, cycle
                )
                .ok(),
                Err(e) => return Err(e.into()),
            };
            if t.is_invertible() {
                writeln!(out, "invertible: yes").ok();
                let inv = t.inverse()?;
                match sync_level(&inv, &caps) {
                    Ok(level) => writeln!(out, "inverse synchronizing level: {level}").ok(),
                    Err(Error::NotSynchronizing { .. }) => {
                        writeln!(out, "inverse synchronizing level: none").ok()
                    }
                    Err(e) => return Err(e.into()),
                };
            } else {
                writeln!(out, "invertible: no").ok();
            }
            let partition = letter_partition(&t);
            writeln!(out, "letter partition: {}", partition.render(&t)).ok();
            Ok(EXIT_OK)
        }
        "product" => {
            let args = Args::parse(rest, &["o"], &[])?;
            let [a, b] = args.positional[..] else {
                return Err(usage("product takes two files"));
            };
            let p = load(a)?.product(&load(b)?)?;
            emit(&p, args.value("o"), out)?;
            Ok(EXIT_OK)
        }
        "power" => {
            let args = Args::parse(rest, &["m", "o"], &["raw"])?;
            let [file] = args.positional[..] else {
                return Err(usage("power takes one file"));
            };
            let m = args.require_usize("m")?;
            if m == 0 {
                return Err(usage("-m must be at least 1"));
            }
            let t = load(file)?;
            let result = if args.has("raw") {
                t.power_raw(m)?
            } else {
                crate::sync::min_core_power(&t, m, &caps)?
            };
            emit(&result, args.value("o"), out)?;
            Ok(EXIT_OK)
        }
        "minimize" => {
            let args = Args::parse(rest, &["o"], &[])?;
            let [file] = args.positional[..] else {
                return Err(usage("minimize takes one file"));
            };
            let t = minimize(&load(file)?).transducer;
            emit(&t, args.value("o"), out)?;
            Ok(EXIT_OK)
        }
        "core" => {
            let args = Args::parse(rest, &["o"], &[])?;
            let [file] = args.positional[..] else {
                return Err(usage("core takes one file"));
            };
            let t = core(&load(file)?, &caps)?;
            emit(&t, args.value("o"), out)?;
            Ok(EXIT_OK)
        }
        "dual" => {
            let args = Args::parse(rest, &["k", "o"], &[])?;
            let [file] = args.positional[..] else {
                return Err(usage("dual takes one file"));
            };
            let k = args.require_usize("k")?;
            let d = dual(&load(file)?, k, &caps)?;
            emit(d.as_transducer(), args.value("o"), out)?;
            Ok(EXIT_OK)
        }
        "splits" => {
            let args = Args::parse(rest, &["r", "max-len"], &[])?;
            let [file] = args.positional[..] else {
                return Err(usage("splits takes one file"));
            };
            let r = args.require_usize("r")?;
            let max_len = args.require_usize("max-len")?;
            let t = load(file)?;
            match splitting_length(&t, r, max_len, &caps)? {
                SplitSearch::Found(split) => {
                    writeln!(out, "splitting length: {}", split.length).ok();
                    writeln!(out, "word: {}", split.gamma).ok();
                    let names = |tuple: &[usize]| {
                        tuple
                            .iter()
                            .map(|&q| t.state_name(q))
                            .collect::<Vec<_>>()
                            .join(",")
                    };
                    writeln!(
                        out,
                        "tuples: ({}) ({})",
                        names(&split.upper),
                        names(&split.lower)
                    )
                    .ok();
                    writeln!(
                        out,
                        "top: {{{},{}}} bottom: {{{},{}}}",
                        t.state_name(split.top.0),
                        t.state_name(split.top.1),
                        t.state_name(split.bottom.0),
                        t.state_name(split.bottom.1)
                    )
                    .ok();
                    writeln!(
                        out,
                        "bottom depends only on top: {}",
                        split.bottom_depends_only_on_top
                    )
                    .ok();
                }
                SplitSearch::NoSplitUpTo { max_len, exhausted } => {
                    if exhausted {
                        writeln!(out, "no split at any length (search closed)").ok();
                    } else {
                        writeln!(out, "no split up to length {max_len}").ok();
                    }
                }
            }
            Ok(EXIT_OK)
        }
        "badpairs" => {
            let args = Args::parse(rest, &["r", "max-len", "dot"], &["minimal"])?;
            let [file] = args.positional[..] else {
                return Err(usage("badpairs takes one file"));
            };
            let r = args.require_usize("r")?;
            let t = load(file)?;
            let graph = if args.has("minimal") {
                minimal_bad_pairs_graph(&t, r, &caps)?
            } else {
                let max_len = args.usize_value("max-len")?.unwrap_or(4);
                bad_pairs_graph(&t, r, max_len, &caps)?
            };
            writeln!(
                out,
                "{} bad-pairs graph at level {}: {} vertices, {} edges",
                if graph.minimal { "minimal" } else { "general" },
                graph.level,
                graph.vertices.len(),
                graph.edges.len()
            )
            .ok();
            for e in &graph.edges {
                writeln!(
                    out,
                    "  {} -> {} [{} / {}]",
                    graph.vertex_names(&t, e.from),
                    graph.vertex_names(&t, e.to),
                    e.split.gamma,
                    e.split.length
                )
                .ok();
            }
            match has_circuit(&graph) {
                Some(circuit) => {
                    let names: Vec<String> =
                        circuit.iter().map(|&v| graph.vertex_names(&t, v)).collect();
                    writeln!(out, "circuit: {}", names.join(" -> ")).ok();
                }
                None => {
                    writeln!(out, "circuit: none").ok();
                }
            }
            if let Some(path) = args.value("dot") {
                std::fs::write(path, graph.to_dot(&t)).map_err(Error::from)?;
            }
            Ok(EXIT_OK)
        }
        "order" => {
            let args = Args::parse(rest, &["max-power", "max-dual"], &[])?;
            let [file] = args.positional[..] else {
                return Err(usage("order takes one file"));
            };
            let mut budget = OrderBudget::default();
            if let Some(p) = args.usize_value("max-power")? {
                budget.max_power = p;
            }
            if let Some(d) = args.usize_value("max-dual")? {
                budget.max_dual_levels = d;
            }
            let verdict = decide_order(&load(file)?, &budget)?;
            writeln!(out, "{}", verdict_json(&verdict, &budget)).ok();
            Ok(if matches!(verdict, OrderVerdict::Unknown { .. }) {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_OK
            })
        }
        "witness" => {
            let args = Args::parse(rest, &["r"], &[])?;
            let [file] = args.positional[..] else {
                return Err(usage("witness takes one file"));
            };
            let r = args.require_usize("r")?;
            let t = load(file)?;
            let graph = minimal_bad_pairs_graph(&t, r, &caps)?;
            let edge =
                graph
                    .edges
                    .iter()
                    .find(|e| e.from == e.to)
                    .ok_or(Error::PreconditionUnmet(format!(
                        "the minimal bad-pairs graph at level {r} has no self-loop"
                    )))?;
            let (word, case) = witness_from_loop(&t, r, &edge.split, &caps)?;
            writeln!(out, "witness: {word}").ok();
            writeln!(out, "case: {case}").ok();
            Ok(EXIT_OK)
        }
        "spectrum" => {
            let args = Args::parse(rest, &["k"], &[])?;
            let [file] = args.positional[..] else {
                return Err(usage("spectrum takes one file"));
            };
            let k = args.require_usize("k")?;
            let t = load(file)?;
            let sp = spectrum(&t, k, &caps)?;
            writeln!(out, "{sp}").ok();
            writeln!(out, "level map: {}", level_map(&t, k, &caps)?).ok();
            Ok(EXIT_OK)
        }
        "cayley" => {
            let args = Args::parse(rest, &["table", "o"], &[])?;
            if !args.positional.is_empty() {
                return Err(usage("cayley takes no positional arguments"));
            }
            let table_path = args
                .value("table")
                .ok_or_else(|| usage("missing required flag --table"))?;
            let text = std::fs::read_to_string(table_path).map_err(Error::from)?;
            let table = GroupTable::parse_csv(&text)?;
            emit(&cayley_machine(&table), args.value("o"), out)?;
            Ok(EXIT_OK)
        }
        "combine" => {
            let args = Args::parse(rest, &["o"], &[])?;
            let [file] = args.positional[..] else {
                return Err(usage("combine takes one spec file"));
            };
            let text = std::fs::read_to_string(file).map_err(Error::from)?;
            let base = Path::new(file)
                .parent()
                .map(Path::to_path_buf)
                .unwrap_or_default();
            let mut loader = |part: &str| -> Result<Transducer> {
                load(base.join(part).to_str().unwrap_or(part))
            };
            let spec = parse_combine_spec(&text, &mut loader)?;
            let combined = combine_disjoint(&spec, &caps)?;
            emit(&combined, args.value("o"), out)?;
            Ok(EXIT_OK)
        }
        "growth" => {
            let args = Args::parse(rest, &["m", "csv"], &[])?;
            let [file] = args.positional[..] else {
                return Err(usage("growth takes one file"));
            };
            let m = args.require_usize("m")?;
            let t = load(file)?;
            let series = growth_series(&t, file, m, &caps)?;
            let csv = series.to_csv();
            match args.value("csv") {
                Some(path) => std::fs::write(path, &csv).map_err(Error::from)?,
                None => out.write_all(csv.as_bytes()).map_err(Error::from)?,
            }
            writeln!(out, "classification: {}", series.classification).ok();
            if let Some(note) = &series.truncated {
                writeln!(out, "truncated: {note}").ok();
            }
            Ok(EXIT_OK)
        }
        "example" => {
            let args = Args::parse(rest, &["o"], &[])?;
            let [name] = args.positional[..] else {
                return Err(usage("example takes one name"));
            };
            let entry = example_registry(name)?;
            emit(&entry.transducer, args.value("o"), out)?;
            Ok(EXIT_OK)
        }
        other => Err(usage(format!("unknown verb {other:?}"))),
    }
}

fn json_string(s: &str) -> String {
    let mut escaped = String::with_capacity(s.len() + 2);
    escaped.push('"');
    for c in s.chars() {
        match c {
            '"' => escaped.push_str("\\\""),
            '\\' => escaped.push_str("\\\\"),
            '\n' => escaped.push_str("\\n"),
            c if (c as u32) < 0x20 => escaped.push_str(&format!("\\u{:04x}", c as u32)),
            c => escaped.push(c),
        }
    }
    escaped.push('"');
    escaped
}

/// The JSON verdict object: `{verdict, index?, period?, certificate?, budgets}`.
pub fn verdict_json(verdict: &OrderVerdict, budget: &OrderBudget) -> String {
    let budgets = format!(
        "{{\"max_power\":{},\"max_dual_levels\":{}}}",
        budget.max_power, budget.max_dual_levels
    );
    match verdict {
        OrderVerdict::Finite {
            index,
            period,
            certificate_level,
        } => {
            let certificate = match certificate_level {
                Some(level) => format!("{{\"type\":\"dual_zero\",\"level\":{level}}}"),
                None => "null".to_string(),
            };
            format!(
                "{{\"verdict\":\"finite\",\"index\":{index},\"period\":{period},\"certificate\":{certificate},\"budgets\":{budgets}}}"
            )
        }
        OrderVerdict::Infinite {
            certificate,
            witness,
        } => {
            let circuit: Vec<String> = certificate
                .circuit_names
                .iter()
                .map(|n| json_string(n))
                .collect();
            let witness_json = match witness {
                Some((word, case)) => format!(
                    "{{\"word\":{},\"case\":{}}}",
                    json_string(&word.to_string()),
                    json_string(&case.to_string())
                ),
                None => "null".to_string(),
            };
            format!(
                "{{\"verdict\":\"infinite\",\"certificate\":{{\"type\":\"circuit\",\"level\":{},\"graph\":{},\"circuit\":[{}]}},\"witness\":{},\"budgets\":{}}}",
                certificate.level,
                json_string(if certificate.minimal_graph { "minimal" } else { "general" }),
                circuit.join(","),
                witness_json,
                budgets
            )
        }
        OrderVerdict::Unknown { progress } => {
            let notes: Vec<String> = progress.iter().map(|p| json_string(p)).collect();
            format!(
                "{{\"verdict\":\"unknown\",\"progress\":[{}],\"budgets\":{}}}",
                notes.join(","),
                budgets
            )
        }
    }
}
