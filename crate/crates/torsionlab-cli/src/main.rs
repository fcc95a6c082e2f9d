//! torsionlab: exact torsion subgroups of full-2-torsion elliptic curves
//! over the class-number-one imaginary quadratic fields, their quadratic
//! twists and extensions, and the table-verification harness.

use clap::{Args, Parser, Subcommand};
use std::process::ExitCode;
use torsionlab::dataset::{load_embedded, load_from_str, Dataset};
use torsionlab::ecurve::{self, Curve, TorsionGroup};
use torsionlab::qfield::{parse_elem, FieldTag, QuadElem};
use torsionlab::twistlab;
use torsionlab::verify::{run_verify, summarize, CheckStatus, VerifyOptions};
use torsionlab::FieldElem;

const EXIT_PARSE: u8 = 2;
const EXIT_MATH: u8 = 3;

#[derive(Parser)]
#[command(
    name = "torsionlab",
    about = "Torsion growth over imaginary quadratic fields of class number one",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute E(K)_tor, E^d(K)_tor or E(K(sqrt(d)))_tor for
    /// E: y^2 = x(x+alpha)(x+beta).
    Torsion(TorsionArgs),
    /// Print the twist and growth classification branches for a curve.
    Classify(ClassifyArgs),
    /// Run the table-verification harness.
    #[command(name = "verify-paper")]
    VerifyPaper(VerifyArgs),
    /// Scan twist parameters and check every row against the predictions.
    Scan(ScanArgs),
}

#[derive(Args)]
struct CurveArgs {
    /// Field: one of -1, -2, -3, -7, -11, -19, -43, -67, -163.
    #[arg(short = 'D', long = "field", allow_hyphen_values = true)]
    field: i64,
    /// Curve as "alpha;beta" in the element grammar (w = sqrt(D)).
    #[arg(short = 'c', long = "curve", allow_hyphen_values = true)]
    curve: String,
}

#[derive(Args)]
struct TorsionArgs {
    #[command(flatten)]
    curve: CurveArgs,
    /// Twist parameter d (non-square).
    #[arg(short = 'd', long = "twist-param", allow_hyphen_values = true)]
    d: Option<String>,
    /// With -d: compute the twist E^d(K)_tor.
    #[arg(long)]
    twist: bool,
    /// With -d: compute the extension E(K(sqrt(d)))_tor.
    #[arg(long)]
    ext: bool,
    /// Output format: human or json-lines.
    #[arg(long, default_value = "human")]
    format: String,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    curve: CurveArgs,
    #[arg(long, default_value = "human")]
    format: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// Restrict to one table: growth, aux, lemma41, jacobians, modcurve, units.
    #[arg(long)]
    table: Option<String>,
    /// Include the slow rows (large-coefficient curves, F_25 enumeration).
    #[arg(long)]
    slow: bool,
    /// Output format: human or json-lines.
    #[arg(long, default_value = "human")]
    format: String,
    /// Override the embedded dataset with an external JSON file.
    #[arg(long)]
    dataset: Option<String>,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    curve: CurveArgs,
    /// Rational twist parameters range over squarefree |d| <= bound.
    #[arg(long = "d-bound", default_value = "30")]
    d_bound: i64,
    #[arg(long, default_value = "human")]
    format: String,
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("TORSIONLAB_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match cli.command {
        Command::Torsion(args) => cmd_torsion(args),
        Command::Classify(args) => cmd_classify(args),
        Command::VerifyPaper(args) => cmd_verify_paper(args),
        Command::Scan(args) => cmd_scan(args),
    }
}

fn parse_curve(args: &CurveArgs) -> Result<(FieldTag, Curve<QuadElem>), (u8, String)> {
    let tag = FieldTag::new(args.field).map_err(|e| (EXIT_PARSE, format!("field: {e}")))?;
    let parts: Vec<&str> = args.curve.split(';').collect();
    if parts.len() != 2 {
        return Err((EXIT_PARSE, "curve must be \"alpha;beta\"".to_string()));
    }
    let alpha =
        parse_elem(parts[0].trim(), tag).map_err(|e| (EXIT_PARSE, format!("alpha: {e}")))?;
    let beta = parse_elem(parts[1].trim(), tag).map_err(|e| (EXIT_PARSE, format!("beta: {e}")))?;
    let curve = Curve::new(alpha, beta).map_err(|e| (EXIT_MATH, format!("curve: {e}")))?;
    Ok((tag, curve))
}

fn bail(code: u8, msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn print_group(label: &str, group: &TorsionGroup<impl torsionlab::FieldElem>, json: bool) {
    if json {
        let mut v = group.to_json();
        v["label"] = serde_json::json!(label);
        println!("{v}");
    } else {
        println!("{label}: {}", group.shape);
        for (i, g) in group.gens.iter().enumerate() {
            println!("  generator {}: {}", i + 1, g.canon_string());
        }
    }
}

fn cmd_torsion(args: TorsionArgs) -> ExitCode {
    let (tag, curve) = match parse_curve(&args.curve) {
        Ok(v) => v,
        Err((code, msg)) => return bail(code, &msg),
    };
    let json = args.format == "json-lines";
    match (&args.d, args.twist, args.ext) {
        (None, false, false) => match ecurve::torsion_subgroup(&curve, tag) {
            Ok(g) => {
                print_group("E(K)_tor", &g, json);
                ExitCode::SUCCESS
            }
            Err(e) => bail(EXIT_MATH, &format!("torsion: {e}")),
        },
        (Some(ds), twist, ext) => {
            let d = match parse_elem(ds, tag) {
                Ok(d) => d,
                Err(e) => return bail(EXIT_PARSE, &format!("d: {e}")),
            };
            if twist && !ext {
                let twisted = match ecurve::twist_curve(&curve, &d) {
                    Ok(t) => t,
                    Err(e) => return bail(EXIT_MATH, &format!("twist: {e}")),
                };
                match ecurve::torsion_subgroup(&twisted, tag) {
                    Ok(g) => {
                        print_group("E^d(K)_tor", &g, json);
                        ExitCode::SUCCESS
                    }
                    Err(e) => bail(EXIT_MATH, &format!("twist torsion: {e}")),
                }
            } else if ext {
                match ecurve::torsion_subgroup_ext(&curve, tag, &d) {
                    Ok(res) => {
                        print_group("E(K(sqrt(d)))_tor", &res.ext, json);
                        if !json {
                            println!("  base E(K)_tor: {}", res.base.shape);
                            println!("  twist E^d(K)_tor: {}", res.twist.shape);
                        }
                        ExitCode::SUCCESS
                    }
                    Err(e) => bail(EXIT_MATH, &format!("extension: {e}")),
                }
            } else {
                bail(EXIT_PARSE, "-d needs --twist or --ext")
            }
        }
        _ => bail(EXIT_PARSE, "--twist/--ext need -d"),
    }
}

fn cmd_classify(args: ClassifyArgs) -> ExitCode {
    let (tag, curve) = match parse_curve(&args.curve) {
        Ok(v) => v,
        Err((code, msg)) => return bail(code, &msg),
    };
    let base = match ecurve::torsion_subgroup(&curve, tag) {
        Ok(g) => g,
        Err(e) => return bail(EXIT_MATH, &format!("torsion: {e}")),
    };
    let twists = twistlab::predicted_twist_groups(tag, base.shape);
    let growth = twistlab::predicted_growth_groups(&curve, tag, base.shape);
    let json = args.format == "json-lines";
    if json {
        let twist_set = twists
            .as_ref()
            .map(|p| {
                p.groups
                    .iter()
                    .map(|g| serde_json::json!({"m": g.m, "n": g.n}))
                    .collect::<Vec<_>>()
            })
            .unwrap_or_default();
        let growth_set = growth
            .as_ref()
            .map(|p| {
                p.set
                    .groups
                    .iter()
                    .map(|g| serde_json::json!({"m": g.m, "n": g.n}))
                    .collect::<Vec<_>>()
            })
            .unwrap_or_default();
        let crit = growth.as_ref().ok().and_then(|p| p.criterion.as_ref()).map(|c| {
            serde_json::json!({
                "holds": c.holds,
                "witness": c.witness.as_ref().map(|z| z.canon_string()),
            })
        });
        println!(
            "{}",
            serde_json::json!({
                "base": {"m": base.shape.m, "n": base.shape.n},
                "twist_groups": twist_set,
                "growth_groups": growth_set,
                "z4z4_criterion": crit,
            })
        );
        return ExitCode::SUCCESS;
    }
    println!("G = E(K)_tor: {}", base.shape);
    match twists {
        Ok(p) => {
            let names: Vec<String> = p.groups.iter().map(|g| g.to_string()).collect();
            let suffix = if p.upper_bound_only { " (upper bound)" } else { "" };
            println!("T_K(G){suffix}: {{{}}}", names.join(", "));
        }
        Err(e) => println!("T_K(G): {e}"),
    }
    match growth {
        Ok(p) => {
            if let Some(c) = &p.criterion {
                match &c.witness {
                    Some(z) => println!(
                        "criterion alpha - beta = +/- z^2: true, z = {}",
                        z.canon_string()
                    ),
                    None => println!("criterion alpha - beta = +/- z^2: false"),
                }
            }
            let names: Vec<String> = p.set.groups.iter().map(|g| g.to_string()).collect();
            let suffix = if p.set.upper_bound_only { " (upper bound)" } else { "" };
            println!("Phi_K(2, G){suffix}: {{{}}}", names.join(", "));
        }
        Err(e) => println!("Phi_K(2, G): {e}"),
    }
    ExitCode::SUCCESS
}

fn cmd_verify_paper(args: VerifyArgs) -> ExitCode {
    let dataset: Dataset = match &args.dataset {
        None => load_embedded(),
        Some(path) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => return bail(EXIT_PARSE, &format!("dataset {path}: {e}")),
            };
            match load_from_str(&text) {
                Ok(d) => d,
                Err(e) => return bail(EXIT_PARSE, &format!("dataset {path}: {e}")),
            }
        }
    };
    let opts = VerifyOptions {
        slow: args.slow,
        tables: args.table.as_ref().map(|t| vec![t.clone()]),
    };
    if let Some(t) = &args.table {
        if !torsionlab::verify::ALL_TABLES.contains(&t.as_str()) {
            return bail(
                EXIT_PARSE,
                &format!(
                    "unknown table {t}; expected one of {}",
                    torsionlab::verify::ALL_TABLES.join(", ")
                ),
            );
        }
    }
    let checks = run_verify(&dataset, &opts);
    let json = args.format == "json-lines";
    for c in &checks {
        if json {
            let status = match &c.status {
                CheckStatus::Pass => "pass".to_string(),
                CheckStatus::Fail => "fail".to_string(),
                CheckStatus::Skip(r) => format!("skip:{r}"),
            };
            println!(
                "{}",
                serde_json::json!({
                    "table": c.table,
                    "check": c.name,
                    "status": status,
                    "detail": c.detail,
                    "millis": c.millis,
                })
            );
        } else {
            let status = match &c.status {
                CheckStatus::Pass => "PASS".to_string(),
                CheckStatus::Fail => "FAIL".to_string(),
                CheckStatus::Skip(r) => format!("SKIP({r})"),
            };
            let detail = if c.detail.is_empty() {
                String::new()
            } else {
                format!(" -- {}", c.detail)
            };
            println!("[{status}] {}: {}{}", c.table, c.name, detail);
        }
    }
    let (pass, fail, skip) = summarize(&checks);
    if !json {
        println!("summary: {pass} passed, {fail} failed, {skip} skipped");
    }
    if fail > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_scan(args: ScanArgs) -> ExitCode {
    let (tag, curve) = match parse_curve(&args.curve) {
        Ok(v) => v,
        Err((code, msg)) => return bail(code, &msg),
    };
    let mut d_list: Vec<QuadElem> = Vec::new();
    if args.d_bound > 0 {
        for n in -args.d_bound..=args.d_bound {
            if n == 0 || n == 1 {
                continue;
            }
            d_list.push(tag.from_i64(n));
        }
        if args.d_bound >= 30 {
            // Full default list: include the integral elements of small norm.
            d_list = twistlab::default_d_list(tag);
        }
    }
    let report = match twistlab::scan(&curve, tag, &d_list) {
        Ok(r) => r,
        Err(e) => return bail(EXIT_MATH, &format!("scan: {e}")),
    };
    let json = args.format == "json-lines";
    if !json {
        println!("base group: {}", report.base_group);
    }
    for row in &report.rows {
        if json {
            println!(
                "{}",
                serde_json::json!({
                    "d": row.d.canon_string(),
                    "twist": row.twist_group.map(|g| format!("{g}")),
                    "ext": row.ext_group.map(|g| format!("{g}")),
                    "error": row.error,
                    "violations": row.violations,
                })
            );
        } else {
            let twist = row
                .twist_group
                .map(|g| g.to_string())
                .unwrap_or_else(|| "-".to_string());
            let ext = row
                .ext_group
                .map(|g| g.to_string())
                .unwrap_or_else(|| "-".to_string());
            let mut line = format!(
                "d = {:<12} twist: {:<12} ext: {:<12}",
                row.d.canon_string(),
                twist,
                ext
            );
            if let Some(e) = &row.error {
                line.push_str(&format!(" error: {e}"));
            }
            if !row.violations.is_empty() {
                line.push_str(&format!(" VIOLATIONS: {}", row.violations.join("; ")));
            }
            println!("{line}");
        }
    }
    let violations = report.violations();
    if !json {
        println!(
            "{} rows, {} violation(s)",
            report.rows.len(),
            violations
        );
    }
    if violations > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
