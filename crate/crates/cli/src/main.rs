use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sdcodes::canonical::{code_cert, hadamard_cert, CodeCertOptions};
use sdcodes::catalog::{
    classify_family, fetch_published_matrices, full_pipeline, parse_index_list, reproduce_table, resolve_spec,
    CatalogStore, ClassifyOptions, CodeAnalysis, ReproduceOptions, TableId, PUBLISHED_COUNT,
};
use sdcodes::code::{CodeSpec, Family, TernaryCode};
use sdcodes::hadamard::{format_hadamard, parse_hadamard_file, HadamardMatrix};
use sdcodes::weight::{classify_extremality, sweep, SweepOptions, DEFAULT_BUDGET};
use sdcodes::Error;

#[derive(Parser)]
#[command(name = "sdcodes", version, about = "Ternary self-dual codes and the Hadamard matrices inside them")]
struct Cli {
    /// Step budget: codewords per sweep, or parameter vectors for `classify`.
    /// Accepts an integer or `3^k`.
    #[arg(long, global = true, value_parser = parse_budget)]
    budget: Option<u128>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Cache directory for downloads.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Checkpoint token printed by a suspended `classify`.
    #[arg(long, global = true)]
    resume: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

/// `CODE` is a spec line such as `family=4nc n=36 rA=... rB=... label=X`,
/// or one of `P36`, `D<i>`, `F<i>` for the bundled codes.
#[derive(Subcommand)]
enum Cmd {
    /// Build a code and print its generator matrix.
    Construct { code: String },
    /// Weight enumerator, minimum weight and extremality.
    Analyze { code: String },
    /// Find the Hadamard matrices formed by full-weight codewords.
    Search {
        code: String,
        /// Write one representative per class to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The tuple (|W10|, |W11|, N0, N1, N) of a code.
    Tuple { code: String },
    /// Canonical certificate of a code, or of the matrices in a file.
    Canon {
        /// A code, or with `--matrices` a matrix file.
        target: String,
        #[arg(long)]
        matrices: bool,
    },
    /// Automorphism group orders of the matrices in a file.
    Aut { file: PathBuf },
    /// Equivalence of two codes, or of two matrices given as `FILE[#k]`.
    Equiv {
        a: String,
        b: String,
        #[arg(long)]
        matrices: bool,
    },
    /// Exhaustive classification of one family (long running).
    Classify {
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 36)]
        length: usize,
        /// Checkpoint file (created, or resumed if present).
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Parameter vectors per checkpoint shard.
        #[arg(long, default_value_t = 1 << 20)]
        shard: u64,
    },
    /// Download the published matrices and check them.
    Fetch {
        #[arg(long)]
        url: Option<String>,
        /// Also verify that the matrices are pairwise inequivalent.
        #[arg(long)]
        check: bool,
    },
    /// Recompute a table and diff it against the bundled values.
    ReproduceTable {
        /// T1, T3, T5, T6, T7, T8, AUT, CH, CHT or PROP2.
        table: String,
        /// Row indices, e.g. `1,8,11` or `1-20`.
        #[arg(long)]
        sample: Option<String>,
        /// File holding the user-supplied matrices T1, T2, ... in order.
        #[arg(long)]
        t_matrices: Option<PathBuf>,
    },
    /// Run every stage for a code and append the record to a store.
    Pipeline {
        code: String,
        #[arg(long)]
        store: Option<PathBuf>,
    },
}

fn parse_budget(s: &str) -> Result<u128, String> {
    if let Some(k) = s.strip_prefix("3^") {
        let k: u32 = k.parse().map_err(|e| format!("{e}"))?;
        return 3u128.checked_pow(k).ok_or_else(|| "budget overflows".to_string());
    }
    s.parse().map_err(|e| format!("{e}"))
}

/// What a command prints, in each format.
struct Output {
    text: String,
    json: Value,
    csv: String,
    /// Exit code 1 when set.
    failed: bool,
}

impl Output {
    fn ok(text: String, json: Value, csv: String) -> Self {
        Self {
            text,
            json,
            csv,
            failed: false,
        }
    }
}

fn code_of(arg: &str) -> Result<(CodeSpec, TernaryCode), Error> {
    let spec = resolve_spec(arg)?;
    let code = spec.build()?;
    Ok((spec, code))
}

/// `FILE` or `FILE#k` (1-based).
fn matrix_arg(arg: &str) -> Result<HadamardMatrix, Error> {
    let (path, k) = match arg.rsplit_once('#') {
        Some((p, k)) => (
            p,
            k.parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad matrix index in {arg:?}")))?,
        ),
        None => (arg, 1),
    };
    let parsed = parse_hadamard_file(&fs::read_to_string(path)?);
    parsed
        .matrices
        .into_iter()
        .nth(k.saturating_sub(1))
        .ok_or_else(|| Error::Param(format!("{path} has no valid matrix number {k}")))
}

fn matrices_in(path: &PathBuf) -> Result<Vec<HadamardMatrix>, Error> {
    let parsed = parse_hadamard_file(&fs::read_to_string(path)?);
    for (line, msg) in &parsed.errors {
        eprintln!("{}:{line}: {msg}", path.display());
    }
    Ok(parsed.matrices)
}

fn run(cli: &Cli) -> Result<Output, Error> {
    let budget = cli.budget.unwrap_or(DEFAULT_BUDGET);
    let cert_opts = CodeCertOptions {
        budget,
        ..CodeCertOptions::default()
    };
    match &cli.cmd {
        Cmd::Construct { code } => {
            let (spec, c) = code_of(code)?;
            let rows: Vec<String> = c.construction_matrix().rows().iter().map(|r| r.to_string()).collect();
            let text = format!(
                "{spec}\n[{}, {}] self-dual: {}\n{}\n",
                c.n(),
                c.k(),
                c.is_self_dual(),
                rows.join("\n")
            );
            let json = json!({"spec": spec.to_string(), "n": c.n(), "k": c.k(),
                "self_dual": c.is_self_dual(), "generator": rows});
            Ok(Output::ok(text, json, rows.join("\n") + "\n"))
        }
        Cmd::Analyze { code } => {
            let (spec, c) = code_of(code)?;
            let s = sweep(&c, &SweepOptions::default().with_budget(budget))?;
            let e = &s.enumerator;
            let d = e.min_weight();
            let self_dual = c.is_self_dual();
            let ext = match (self_dual, d) {
                (true, Some(d)) => Some(classify_extremality(c.n(), d)?.kind),
                _ => None,
            };
            let text = format!(
                "{spec}\n[{}, {}] self-dual: {self_dual}\nminimum weight: {}\nextremality: {}\nW = {e}\n",
                c.n(),
                c.k(),
                d.map_or("-".into(), |d| d.to_string()),
                ext.map_or("-".into(), |x| x.to_string()),
            );
            let json = json!({"spec": spec.to_string(), "n": c.n(), "k": c.k(), "self_dual": self_dual,
                "min_weight": d, "extremality": ext, "enumerator": e.counts()});
            Ok(Output::ok(text, json, e.to_csv()))
        }
        Cmd::Search { code, .. } | Cmd::Tuple { code } => {
            let (spec, c) = code_of(code)?;
            let a = CodeAnalysis::run(c, budget)?;
            let s = &a.search;
            let mut text = format!("{}  T = {}\n", spec.label, s.tuple);
            let mut csv = String::from("class,aut_order,members,cert\n");
            let mut classes = Vec::new();
            if matches!(cli.cmd, Cmd::Search { .. }) {
                for (i, cl) in s.classes.iter().enumerate() {
                    text.push_str(&format!(
                        "class {}: |Aut| = {}, {} matrices, cert {}\n",
                        i + 1,
                        cl.aut_order(),
                        cl.members.len(),
                        cl.cert.digest()
                    ));
                    csv.push_str(&format!("{},{},{},{}\n", i + 1, cl.aut_order(), cl.members.len(), cl.cert.digest()));
                    classes.push(json!({"aut_order": cl.aut_order().to_string(),
                        "members": cl.members.len(), "cert": cl.cert.digest()}));
                }
                if let Cmd::Search { out: Some(path), .. } = &cli.cmd {
                    let body: Vec<String> = s
                        .classes
                        .iter()
                        .map(|cl| format_hadamard(&s.matrices[cl.representative].matrix))
                        .collect();
                    fs::write(path, body.join("\n"))?;
                }
            } else {
                csv = format!("w10,w11,n0,n1,n\n{},{},{},{},{}\n", s.tuple.w10, s.tuple.w11, s.tuple.n0, s.tuple.n1, s.tuple.neq);
            }
            let json = json!({"label": spec.label, "tuple": s.tuple, "classes": classes});
            Ok(Output::ok(text, json, csv))
        }
        Cmd::Canon { target, matrices } => {
            if *matrices {
                let ms = matrices_in(&PathBuf::from(target))?;
                let mut text = String::new();
                let mut csv = String::from("index,aut_order,cert\n");
                let mut js = Vec::new();
                for (i, h) in ms.iter().enumerate() {
                    let c = hadamard_cert(h);
                    text.push_str(&format!("{}: {} |Aut| = {}\n", i + 1, c.digest(), c.aut_order));
                    csv.push_str(&format!("{},{},{}\n", i + 1, c.aut_order, c.digest()));
                    js.push(json!({"cert": c.digest(), "aut_order": c.aut_order.to_string()}));
                }
                Ok(Output::ok(text, Value::Array(js), csv))
            } else {
                let (spec, c) = code_of(target)?;
                let cert = code_cert(&c, &cert_opts)?;
                let text = format!("{}: {} |Aut| = {}\n", spec.label, cert.digest(), cert.aut_order);
                let json = json!({"label": spec.label, "cert": cert.digest(),
                    "aut_order": cert.aut_order.to_string(), "bytes": hex_of(&cert.bytes)});
                Ok(Output::ok(text, json, format!("label,aut_order,cert\n{},{},{}\n", spec.label, cert.aut_order, cert.digest())))
            }
        }
        Cmd::Aut { file } => {
            let ms = matrices_in(file)?;
            let orders: Vec<String> = ms.iter().map(|h| hadamard_cert(h).aut_order.to_string()).collect();
            let text: String = orders.iter().enumerate().map(|(i, o)| format!("{}: {o}\n", i + 1)).collect();
            let csv = std::iter::once("index,aut_order".to_string())
                .chain(orders.iter().enumerate().map(|(i, o)| format!("{},{o}", i + 1)))
                .collect::<Vec<_>>()
                .join("\n")
                + "\n";
            Ok(Output::ok(text, json!(orders), csv))
        }
        Cmd::Equiv { a, b, matrices } => {
            let same = if *matrices {
                let (x, y) = (matrix_arg(a)?, matrix_arg(b)?);
                if x.order() != y.order() {
                    false
                } else {
                    hadamard_cert(&x) == hadamard_cert(&y)
                }
            } else {
                let (_, x) = code_of(a)?;
                let (_, y) = code_of(b)?;
                sdcodes::canonical::code_equivalent(&x, &y, &cert_opts)?
            };
            let word = if same { "equivalent" } else { "not equivalent" };
            Ok(Output {
                text: format!("{word}\n"),
                json: json!({"equivalent": same}),
                csv: format!("equivalent\n{same}\n"),
                failed: !same,
            })
        }
        Cmd::Classify {
            family,
            length,
            checkpoint,
            shard,
        } => {
            let family: Family = family.parse()?;
            let mut opts = ClassifyOptions::new(family, *length);
            opts.budget = cli.budget.unwrap_or(u128::MAX);
            opts.shard = *shard;
            opts.checkpoint = cli.resume.as_ref().map(PathBuf::from).or_else(|| checkpoint.clone());
            let c = classify_family(&opts)?;
            let mut text = format!(
                "{family} n={}: {} vectors, {} self-dual near-extremal, {} distinct codes, {} classes\n",
                c.n,
                c.vectors,
                c.survivors,
                c.distinct_codes,
                c.classes.len()
            );
            let mut csv = String::from("spec,a_min,codes,vectors,cert\n");
            for r in &c.classes {
                text.push_str(&format!("  {}  A_min = {}, {} codes\n", r.spec, r.a_min, r.codes));
                csv.push_str(&format!("\"{}\",{},{},{},{}\n", r.spec, r.a_min, r.codes, r.vectors, r.cert));
            }
            Ok(Output::ok(text, serde_json::to_value(&c)?, csv))
        }
        Cmd::Fetch { url, check } => {
            let f = fetch_published_matrices(url.as_deref(), cli.cache_dir.as_deref())?;
            let mut text = format!(
                "{}: {} matrices ({}), sha256 {}\n",
                f.url,
                f.matrices.len(),
                if f.from_cache { "cache" } else { "downloaded" },
                f.sha256
            );
            for (line, msg) in &f.errors {
                text.push_str(&format!("  rejected block at line {line}: {msg}\n"));
            }
            let mut failed = false;
            let mut classes = None;
            if *check {
                let mut certs: Vec<Vec<u8>> = f.matrices.iter().map(|h| hadamard_cert(h).bytes).collect();
                certs.sort();
                certs.dedup();
                failed = f.matrices.len() != PUBLISHED_COUNT || certs.len() != f.matrices.len();
                text.push_str(&format!(
                    "{} inequivalent of {} (expected {PUBLISHED_COUNT})\n",
                    certs.len(),
                    f.matrices.len()
                ));
                classes = Some(certs.len());
            }
            let json = json!({"url": f.url, "matrices": f.matrices.len(), "rejected": f.errors.len(),
                "from_cache": f.from_cache, "sha256": f.sha256, "classes": classes});
            let csv = format!(
                "url,matrices,rejected,from_cache,sha256\n{},{},{},{},{}\n",
                f.url,
                f.matrices.len(),
                f.errors.len(),
                f.from_cache,
                f.sha256
            );
            Ok(Output {
                text,
                json,
                csv,
                failed,
            })
        }
        Cmd::ReproduceTable {
            table,
            sample,
            t_matrices,
        } => {
            let id: TableId = table.parse()?;
            let opts = ReproduceOptions {
                sample: sample.as_deref().map(parse_index_list).transpose()?,
                budget,
                t_matrices: t_matrices.as_ref().map(matrices_in).transpose()?,
                cache: None,
            };
            let r = reproduce_table(id, &opts)?;
            Ok(Output {
                text: format!("{r}\n"),
                json: serde_json::to_value(&r)?,
                csv: r.to_csv(),
                failed: !r.pass,
            })
        }
        Cmd::Pipeline { code, store } => {
            let mut st = store.as_ref().map(CatalogStore::open).transpose()?;
            let rec = full_pipeline(code, budget, st.as_mut())?;
            let text = format!(
                "{}: [{}, {}] d = {}, T = {}, code cert {}\n",
                rec.label,
                rec.n,
                rec.k,
                rec.min_weight.map_or("-".into(), |d| d.to_string()),
                rec.tuple.map_or("-".into(), |t| t.to_string()),
                rec.code_cert.as_deref().unwrap_or("-")
            );
            let json = serde_json::to_value(&rec)?;
            let csv = format!("{}\n", serde_json::to_string(&rec)?);
            Ok(Output::ok(text, json, csv))
        }
    }
}

fn hex_of(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn exit_code(e: &Error) -> u8 {
    match e.root() {
        Error::Param(_) | Error::Parse(_) | Error::Dimension(_) | Error::Range(_) => 2,
        Error::Budget { .. } | Error::Suspended { .. } | Error::Network(_) | Error::Io(_) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot start {n} threads: {e}");
            return ExitCode::from(3);
        }
    }
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).unwrap_or_default()),
                Format::Csv => print!("{}", out.csv),
            }
            ExitCode::from(u8::from(out.failed))
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
