//! Command-line front end: Lyndon enumeration, basis dumps, relation
//! derivation, zeta reduction, regularized constants, numeric verification
//! and plain numeric estimates.  Exit codes: 0 success, 2 usage error,
//! 3 internal inconsistency.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::bases::{BasisKind, DualBases};
use crate::cache::Cache;
use crate::error::{Error, Result};
use crate::identify::Engine;
use crate::ncpoly::{NcPoly, Q};
use crate::numcheck::{euler_gamma_estimate, harmonic_sum_exact, mzv_estimate, Composition};
use crate::symbols::RewriteSystem;
use crate::words::{self, Alphabet, Word};

#[derive(Parser)]
#[command(
    name = "polyzeta",
    version,
    about = "Exact engine for multiple zeta value identities",
    long_about = "Derives confluent rewriting systems among zeta-value symbols from the \
bridge between the shuffle and quasi-shuffle generating series, and reduces \
convergent multiple zeta values to canonical form on the irreducible generators.\n\n\
Input syntaxes: compositions are comma-separated integers (\"2,1\" means zeta(2,1)); \
X-alphabet words are 0/1 strings (\"001\" means x0 x0 x1)."
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Cache directory (overrides POLYZETA_CACHE_DIR)
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    X,
    Y,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlphabetArg {
    X,
    Y,
}

impl From<AlphabetArg> for Alphabet {
    fn from(a: AlphabetArg) -> Alphabet {
        match a {
            AlphabetArg::X => Alphabet::X,
            AlphabetArg::Y => Alphabet::Y,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    P,
    S,
    Pi,
    Sigma,
}

impl From<KindArg> for BasisKind {
    fn from(k: KindArg) -> BasisKind {
        match k {
            KindArg::P => BasisKind::P,
            KindArg::S => BasisKind::S,
            KindArg::Pi => BasisKind::Pi,
            KindArg::Sigma => BasisKind::Sigma,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate Lyndon words up to a weight
    Lyndon {
        #[arg(long, value_enum)]
        alphabet: AlphabetArg,
        #[arg(long)]
        max_weight: u32,
    },
    /// Dump dual-basis tables (Lyndon rows; --all-words for full tables)
    Basis {
        #[arg(long, value_enum)]
        alphabet: AlphabetArg,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        max_weight: u32,
        #[arg(long)]
        all_words: bool,
    },
    /// Derive the rewriting systems and irreducible generators
    Relations {
        #[arg(long)]
        max_weight: u32,
        #[arg(long, value_enum, default_value_t = SideArg::Both)]
        side: SideArg,
    },
    /// Reduce a convergent zeta value to canonical form
    Reduce {
        /// Composition, e.g. 2,1
        #[arg(long, conflicts_with = "xword")]
        word: Option<String>,
        /// X-alphabet word as a 0/1 string, e.g. 0101
        #[arg(long)]
        xword: Option<String>,
        /// Derive relations up to this weight (default: the input weight)
        #[arg(long)]
        max_weight: Option<u32>,
    },
    /// Regularized constant of a (possibly divergent) harmonic sum
    Gamma {
        /// Composition, e.g. 1,1
        #[arg(long)]
        word: String,
        /// Use the shuffle-side regularization instead
        #[arg(long)]
        shuffle: bool,
        #[arg(long)]
        max_weight: Option<u32>,
    },
    /// Numerically verify every derived rule up to a weight
    Verify {
        #[arg(long)]
        max_weight: u32,
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
    },
    /// Estimate a convergent multiple zeta value from partial sums
    Numcheck {
        /// Composition, e.g. 2,1
        #[arg(long)]
        composition: String,
        #[arg(long, default_value_t = 100_000)]
        n: u64,
        /// Richardson refinement from H(n) and H(2n)
        #[arg(long)]
        refine: bool,
        /// Exact rational partial sum instead of an estimate (small n)
        #[arg(long)]
        exact: bool,
        /// Also print the Euler constant estimate at the same n
        #[arg(long)]
        gamma: bool,
    },
}

/// Run the CLI on explicit arguments; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let format = cli.format;
    match dispatch(cli) {
        Ok(output) => {
            println!("{output}");
            0
        }
        Err(err) => {
            let code = err.exit_code();
            let obj = serde_json::json!({"error": {"code": code, "message": err.to_string()}});
            if format == Format::Json {
                eprintln!("{obj}");
            } else {
                eprintln!("error: {err}");
            }
            code
        }
    }
}

fn dispatch(cli: Cli) -> Result<String> {
    let cache = Cache::from_options(cli.cache_dir.clone());
    match cli.command {
        Command::Lyndon {
            alphabet,
            max_weight,
        } => {
            if max_weight < 1 {
                return Err(Error::Parse("max-weight must be >= 1".into()));
            }
            cmd_lyndon(alphabet.into(), max_weight, cli.format)
        }
        Command::Basis {
            alphabet,
            kind,
            max_weight,
            all_words,
        } => cmd_basis(
            alphabet.into(),
            kind.into(),
            max_weight,
            all_words,
            cli.format,
            cache.as_ref(),
        ),
        Command::Relations { max_weight, side } => {
            if max_weight < 2 {
                return Err(Error::Parse("max-weight must be >= 2 for relations".into()));
            }
            cmd_relations(max_weight, side, cli.format, cache.as_ref())
        }
        Command::Reduce {
            word,
            xword,
            max_weight,
        } => cmd_reduce(word, xword, max_weight, cli.format),
        Command::Gamma {
            word,
            shuffle,
            max_weight,
        } => cmd_gamma(&word, shuffle, max_weight, cli.format),
        Command::Verify { max_weight, n, tol } => {
            if max_weight < 2 {
                return Err(Error::Parse("max-weight must be >= 2 for verify".into()));
            }
            cmd_verify(max_weight, n, tol, cli.format)
        }
        Command::Numcheck {
            composition,
            n,
            refine,
            exact,
            gamma,
        } => cmd_numcheck(&composition, n, refine, exact, gamma, cli.format),
    }
}

fn cmd_lyndon(alphabet: Alphabet, max_weight: u32, format: Format) -> Result<String> {
    let lyndon_words = words::lyndon_enumerate(alphabet, max_weight);
    match format {
        Format::Json => Ok(serde_json::json!({
            "alphabet": alphabet.to_string(),
            "max_weight": max_weight,
            "count": lyndon_words.len(),
            "words": lyndon_words,
        })
        .to_string()),
        Format::Text => {
            let mut out = String::new();
            let mut current = 0;
            for w in &lyndon_words {
                if w.weight() != current {
                    current = w.weight();
                    out.push_str(&format!("weight {current}:\n"));
                }
                out.push_str(&format!("  [{w}]\n"));
            }
            out.push_str(&format!(
                "{} Lyndon words of weight <= {max_weight}",
                lyndon_words.len()
            ));
            Ok(out)
        }
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct BasisRow {
    word: String,
    poly: Vec<(String, String)>,
}

fn poly_rows(p: &NcPoly<Q>) -> Vec<(String, String)> {
    p.terms()
        .map(|(w, c)| (w.to_string(), format!("{}/{}", c.numer(), c.denom())))
        .collect()
}

fn cmd_basis(
    alphabet: Alphabet,
    kind: BasisKind,
    max_weight: u32,
    all_words: bool,
    format: Format,
    cache: Option<&Cache>,
) -> Result<String> {
    if matches!(kind, BasisKind::Pi | BasisKind::Sigma) && alphabet != Alphabet::Y {
        return Err(Error::Parse(
            "Pi and Sigma tables live on the Y alphabet".into(),
        ));
    }
    let kind_tag = match kind {
        BasisKind::P => "p",
        BasisKind::S => "s",
        BasisKind::Pi => "pi",
        BasisKind::Sigma => "sigma",
    };
    let mut bases = DualBases::new(alphabet);
    let mut rows: Vec<BasisRow> = Vec::new();
    for weight in 1..=max_weight {
        let key = format!(
            "basis-{alphabet}-{kind_tag}-{}-w{weight}",
            if all_words { "all" } else { "lyndon" }
        );
        let cached: Option<Vec<BasisRow>> = cache.and_then(|c| c.load(&key));
        let weight_rows = match cached {
            Some(rows) => rows,
            None => {
                let table_words = if all_words {
                    words::words_of_weight(alphabet, weight)
                } else {
                    words::lyndon_of_weight(alphabet, weight)
                };
                let computed: Vec<BasisRow> = table_words
                    .iter()
                    .map(|w| BasisRow {
                        word: w.to_string(),
                        poly: poly_rows(&bases.basis_of(kind, w)),
                    })
                    .collect();
                if let Some(c) = cache {
                    c.store(&key, &computed)?;
                }
                computed
            }
        };
        rows.extend(weight_rows);
    }
    match format {
        Format::Json => Ok(serde_json::json!({
            "alphabet": alphabet.to_string(),
            "kind": kind_tag,
            "max_weight": max_weight,
            "rows": rows,
        })
        .to_string()),
        Format::Text => {
            let name = match kind {
                BasisKind::P => "P",
                BasisKind::S => "S",
                BasisKind::Pi => "Pi",
                BasisKind::Sigma => "Sigma",
            };
            let mut out = String::new();
            for row in &rows {
                let terms: Vec<String> = row
                    .poly
                    .iter()
                    .map(|(w, c)| {
                        let c = c.strip_suffix("/1").unwrap_or(c);
                        if c == "1" {
                            format!("[{w}]")
                        } else {
                            format!("{c} [{w}]")
                        }
                    })
                    .collect();
                out.push_str(&format!("{name}[{}] = {}\n", row.word, terms.join(" + ")));
            }
            out.pop();
            Ok(out)
        }
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct RelationsData {
    max_weight: u32,
    y: RewriteSystem,
    x: RewriteSystem,
    monomials: BTreeMap<u32, u64>,
    lyndon: BTreeMap<u32, usize>,
}

fn relations_data(max_weight: u32, cache: Option<&Cache>) -> Result<RelationsData> {
    let key = format!("relations-w{max_weight}");
    if let Some(hit) = cache.and_then(|c| c.load::<RelationsData>(&key)) {
        if hit.max_weight == max_weight {
            return Ok(hit);
        }
    }
    let engine = Engine::derive(max_weight)?;
    let report = engine.dimension_report();
    let data = RelationsData {
        max_weight,
        y: engine.rewrite_system(Alphabet::Y).clone(),
        x: engine.rewrite_system(Alphabet::X).clone(),
        monomials: report
            .rows
            .iter()
            .map(|r| (r.weight, r.monomials))
            .collect(),
        lyndon: report
            .rows
            .iter()
            .map(|r| (r.weight, r.lyndon_per_side))
            .collect(),
    };
    if let Some(c) = cache {
        c.store(&key, &data)?;
    }
    Ok(data)
}

fn side_blocks(data: &RelationsData, side: Alphabet) -> Vec<serde_json::Value> {
    let rs = match side {
        Alphabet::Y => &data.y,
        Alphabet::X => &data.x,
    };
    let mut blocks = Vec::new();
    for weight in 2..=data.max_weight {
        let rules: Vec<serde_json::Value> = rs
            .rules_of_weight(weight)
            .iter()
            .map(|(lhs, rhs)| serde_json::json!({"lhs": lhs.to_string(), "rhs": rhs}))
            .collect();
        let irreducibles: Vec<String> = rs
            .irreducibles_of_weight(weight)
            .iter()
            .map(|s| s.to_string())
            .collect();
        blocks.push(serde_json::json!({
            "side": side.to_string(),
            "weight": weight,
            "rules": rules,
            "irreducibles": irreducibles,
            "dims": {
                "lyndon": data.lyndon.get(&weight).copied().unwrap_or(0),
                "rules": rules.len(),
                "irreducibles": irreducibles.len(),
                "monomials": data.monomials.get(&weight).copied().unwrap_or(0),
            },
        }));
    }
    blocks
}

fn cmd_relations(
    max_weight: u32,
    side: SideArg,
    format: Format,
    cache: Option<&Cache>,
) -> Result<String> {
    let data = relations_data(max_weight, cache)?;
    let sides: Vec<Alphabet> = match side {
        SideArg::X => vec![Alphabet::X],
        SideArg::Y => vec![Alphabet::Y],
        SideArg::Both => vec![Alphabet::X, Alphabet::Y],
    };
    match format {
        Format::Json => {
            let blocks: Vec<serde_json::Value> =
                sides.iter().flat_map(|&s| side_blocks(&data, s)).collect();
            Ok(serde_json::Value::Array(blocks).to_string())
        }
        Format::Text => {
            let mut out = String::new();
            for weight in 2..=max_weight {
                out.push_str(&format!("== weight {weight} ==\n"));
                for &s in &sides {
                    let rs = match s {
                        Alphabet::Y => &data.y,
                        Alphabet::X => &data.x,
                    };
                    for (lhs, rhs) in rs.rules_of_weight(weight) {
                        out.push_str(&format!("  {lhs} -> {rhs}\n"));
                    }
                    for sym in rs.irreducibles_of_weight(weight) {
                        out.push_str(&format!("  {sym} irreducible\n"));
                    }
                }
            }
            for &s in &sides {
                let rs = match s {
                    Alphabet::Y => &data.y,
                    Alphabet::X => &data.x,
                };
                let names: Vec<String> = rs.irreducibles().map(|i| i.to_string()).collect();
                out.push_str(&format!("irreducible ({s}): {}\n", names.join(" ")));
            }
            out.pop();
            Ok(out)
        }
    }
}

fn cmd_reduce(
    word: Option<String>,
    xword: Option<String>,
    max_weight: Option<u32>,
    format: Format,
) -> Result<String> {
    let (input_desc, result) = match (word, xword) {
        (Some(comp_str), None) => {
            let comp = Composition::parse(&comp_str)?;
            if !comp.is_convergent() {
                return Err(Error::Divergent(comp.to_string()));
            }
            let weight = max_weight.unwrap_or(comp.weight()).max(2);
            let mut engine = Engine::derive(weight)?;
            let reduced = engine.reduce_composition(comp.parts())?;
            (format!("zeta({comp_str})"), reduced)
        }
        (None, Some(bits)) => {
            let w = Word::x_from_bits(&bits)?;
            if !w.is_convergent() {
                return Err(Error::Divergent(w.to_string()));
            }
            let weight = max_weight.unwrap_or(w.weight()).max(2);
            let mut engine = Engine::derive(weight)?;
            let reduced = engine.reduce_x_poly(&NcPoly::word(w))?;
            (format!("zeta(S-word {bits})"), reduced)
        }
        _ => {
            return Err(Error::Parse(
                "provide exactly one of --word or --xword".into(),
            ));
        }
    };
    match format {
        Format::Json => Ok(serde_json::json!({
            "input": input_desc,
            "canonical": result,
            "display": result.to_string(),
        })
        .to_string()),
        Format::Text => Ok(result.to_string()),
    }
}

fn cmd_gamma(word: &str, shuffle: bool, max_weight: Option<u32>, format: Format) -> Result<String> {
    let comp = Composition::parse(word)?;
    let w = comp.to_word();
    let weight = max_weight.unwrap_or(w.weight()).max(2);
    let mut engine = Engine::derive(weight)?;
    let value = if shuffle {
        engine.gamma_constant_shuffle(&w)?
    } else {
        engine.gamma_constant(&w)?
    };
    match format {
        Format::Json => Ok(serde_json::json!({
            "word": word,
            "regularization": if shuffle { "shuffle" } else { "stuffle" },
            "canonical": value,
            "display": value.to_string(),
        })
        .to_string()),
        Format::Text => Ok(value.to_string()),
    }
}

fn cmd_verify(max_weight: u32, n: u64, tol: f64, format: Format) -> Result<String> {
    let mut engine = Engine::derive(max_weight)?;
    let checks = engine.verify_rules_numeric(max_weight, n, tol)?;
    let all_pass = checks.iter().all(|c| c.pass);
    let report = match format {
        Format::Json => serde_json::json!({
            "max_weight": max_weight,
            "n": n,
            "tol": tol,
            "all_pass": all_pass,
            "checks": checks,
        })
        .to_string(),
        Format::Text => {
            let mut out = String::new();
            for c in &checks {
                out.push_str(&format!(
                    "{} {} residual {:.3e} {}\n",
                    c.side,
                    c.lhs,
                    c.residual,
                    if c.pass { "pass" } else { "FAIL" }
                ));
            }
            out.push_str(&format!(
                "{}/{} rules pass at n={n}, tol={tol:e}",
                checks.iter().filter(|c| c.pass).count(),
                checks.len()
            ));
            out
        }
    };
    if !all_pass {
        return Err(Error::Inconsistent {
            weight: max_weight,
            detail: format!("numeric verification failed:\n{report}"),
        });
    }
    Ok(report)
}

fn cmd_numcheck(
    composition: &str,
    n: u64,
    refine: bool,
    exact: bool,
    gamma: bool,
    format: Format,
) -> Result<String> {
    let comp = Composition::parse(composition)?;
    if exact {
        let value = harmonic_sum_exact(&comp, n);
        return match format {
            Format::Json => Ok(serde_json::json!({
                "composition": composition,
                "n": n,
                "exact": format!("{}/{}", value.numer(), value.denom()),
            })
            .to_string()),
            Format::Text => Ok(format!(
                "H_{{{comp}}}({n}) = {}/{}",
                value.numer(),
                value.denom()
            )),
        };
    }
    let est = mzv_estimate(&comp, n, refine)?;
    let gamma_est = gamma.then(|| euler_gamma_estimate(n));
    match format {
        Format::Json => Ok(serde_json::json!({
            "composition": composition,
            "n": n,
            "refined": est.refined,
            "value": format!("{:.15}", est.to_f64()),
            "err_est": est.err_est,
            "gamma": gamma_est.map(|g| format!("{:.15}", g.to_f64())),
        })
        .to_string()),
        Format::Text => {
            let mut out = format!(
                "zeta({comp}) ~ {:.12}  (err <= {:.2e}, n={n})",
                est.to_f64(),
                est.err_est
            );
            if let Some(g) = gamma_est {
                out.push_str(&format!("\ngamma ~ {:.12}", g.to_f64()));
            }
            Ok(out)
        }
    }
}

/// Entry point used by the binary.
pub fn main_entry() -> i32 {
    // flush stdout explicitly so exit codes never race buffered output
    let code = run(std::env::args_os());
    let _ = std::io::stdout().flush();
    code
}
