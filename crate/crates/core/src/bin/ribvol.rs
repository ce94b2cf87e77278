use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use ribvol::curves::MultiCurveJson;
use ribvol::enumerate::{catalog_cached, hurwitz_count, hurwitz_table};
use ribvol::identities::to_ndjson;
use ribvol::rational::{fmt_q, parse_q_list};
use ribvol::ribbon::GraphJson;
use ribvol::stable::{is_acyclic, DirectedStableGraph};
use ribvol::{decompose, suite, volumes, Error};

#[derive(Parser)]
#[command(name = "ribvol", version, about = "Volumes of moduli spaces of oriented 4-valent metric ribbon graphs")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print F_{g,n} in human form, then as JSON.
    Fpoly {
        g: u32,
        n: usize,
        /// Write the JSON here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate Z_{g,n+,n-} at a boundary point.
    Zeval {
        g: u32,
        n_plus: usize,
        n_minus: usize,
        #[arg(long = "Lplus", allow_hyphen_values = true)]
        l_plus: String,
        #[arg(long = "Lminus", allow_hyphen_values = true)]
        l_minus: String,
    },
    /// Enumerate labelled oriented 4-valent graphs of a type as catalog JSON.
    Enumerate {
        g: u32,
        n_plus: usize,
        n_minus: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Acyclic decomposition of a graph along a vertex order.
    Decompose {
        graph: PathBuf,
        /// Vertex names (from the graph's `vertices` field) or indices, comma separated.
        #[arg(long)]
        order: String,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, default_value_t = 3)]
        depth: u32,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Newline-delimited JSON findings.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Automorphism-weighted counts of one-negative-boundary graphs by positive profile.
    Hurwitz {
        g: u32,
        /// Edge counts per positive boundary; omit to list the table for `--n`.
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

#[derive(Serialize)]
struct DecompositionJson {
    order: Vec<usize>,
    acyclic: bool,
    component_vertex: Vec<usize>,
    stable: DirectedStableGraph,
    curves: MultiCurveJson,
}

enum Failure {
    Lib(Error),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Lib(e.into())
    }
}

fn say(text: &str) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => say(text)?,
    }
    Ok(())
}

fn parse_order(list: &str, gj: &GraphJson) -> Result<Vec<usize>, Error> {
    list.split(',')
        .map(|t| {
            let t = t.trim();
            if let Some(i) = gj.vertices.as_ref().and_then(|names| names.iter().position(|n| n == t)) {
                return Ok(i);
            }
            t.parse().map_err(|_| Error::Parse(format!("unknown vertex {t:?}")))
        })
        .collect()
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Fpoly { g, n, out } => {
            let p = volumes::f_polynomial(g, n)?;
            say(&format!("{p}
"))?;
            let json = serde_json::to_string(&p.to_json()).map_err(Error::from)?;
            match out {
                Some(_) => emit(&out, &(json + "\n"))?,
                None => say(&(json + "\n"))?,
            }
        }
        Cmd::Zeval { g, n_plus, n_minus, l_plus, l_minus } => {
            let (lp, lm) = (parse_q_list(&l_plus)?, parse_q_list(&l_minus)?);
            if lp.len() != n_plus || lm.len() != n_minus {
                return Err(Error::ProfileMismatch(format!("expected {n_plus} positive and {n_minus} negative lengths")).into());
            }
            say(&format!("{}\n", fmt_q(&volumes::z_evaluate(g, &lp, &lm)?)))?;
        }
        Cmd::Enumerate { g, n_plus, n_minus, out, cache_dir } => {
            let cat = catalog_cached(g, n_plus, n_minus, cache_dir.as_deref())?;
            eprintln!("{} graphs, mass {}", cat.entries.len(), fmt_q(&cat.mass()));
            emit(&out, &(serde_json::to_string_pretty(&cat.to_json()).map_err(Error::from)? + "\n"))?;
        }
        Cmd::Decompose { graph, order, format, out } => {
            let gj: GraphJson = serde_json::from_str(&std::fs::read_to_string(graph)?).map_err(Error::from)?;
            let lg = gj.to_labelled()?;
            let order = parse_order(&order, &gj)?;
            let d = decompose::acyclic_decompose(&lg, &order)?;
            let text = match format {
                Format::Dot => d.stable.to_dot(),
                Format::Json => {
                    let j = DecompositionJson {
                        order,
                        acyclic: is_acyclic(&d.stable).0,
                        component_vertex: d.component_vertex.clone(),
                        stable: d.stable.clone(),
                        curves: MultiCurveJson::from_multicurve(&d.curves),
                    };
                    serde_json::to_string_pretty(&j).map_err(Error::from)? + "\n"
                }
            };
            emit(&out, &text)?;
        }
        Cmd::Verify { depth, seed, report } => {
            let (reports, findings) = suite::run_all(depth, seed)?;
            for r in &reports {
                say(&format!("{}\n", r.line()))?;
                for f in &r.findings {
                    eprintln!("  {f}");
                }
            }
            if let Some(p) = report {
                let mut text = to_ndjson(&findings);
                for r in &reports {
                    text += &(serde_json::to_string(r).map_err(Error::from)? + "\n");
                }
                std::fs::write(p, text)?;
            }
            if reports.iter().any(|r| !r.passed) {
                return Err(Failure::Verify);
            }
        }
        Cmd::Hurwitz { g, alpha, n } => match (alpha, n) {
            (Some(a), _) => {
                let alpha = a
                    .split(',')
                    .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad entry {t:?}"))))
                    .collect::<Result<Vec<usize>, Error>>()?;
                say(&format!("{}\n", fmt_q(&hurwitz_count(g, &alpha)?)))?;
            }
            (None, Some(n)) => {
                let cat = ribvol::enumerate::enumerate_graphs(g, n, 1)?;
                for (alpha, h) in hurwitz_table(&cat) {
                    say(&format!("{} {}\n", alpha.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","), fmt_q(&h)))?;
                }
            }
            (None, None) => return Err(Error::Parse("give --alpha or --n".into()).into()),
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(3),
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
