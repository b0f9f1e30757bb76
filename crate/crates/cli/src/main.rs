//! syzlab: generate, validate, tabulate and judge pure resolutions of
//! line-bundle sums on projective n-space.
//!
//! Exit codes: 0 all checks pass / all verdicts Yes; 1 some verdict No or a
//! verification failure; 2 invalid input or parameters; 3 some verdict
//! Undetermined with none No.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::io::Read;
use syzlab_core::catalog;
use syzlab_core::chase::CohomDim;
use syzlab_core::criteria::{
    check_exceptionality, check_simplicity_side, sigma_sides, Status, Verdict,
};
use syzlab_core::engine::{Engine, TwistWindow};
use syzlab_core::node::SheafNode;
use syzlab_core::resolution::{hk_betti, DegreeSequence, PureResolution, Side, SyzygyId};

#[derive(Parser)]
#[command(
    name = "syzlab",
    about = "Pure resolutions of line-bundle sums on projective space: syzygy bundle cohomology, simplicity and exceptionality",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a resolution as JSON: a catalog family or the minimal solution
    /// for a degree sequence.
    Generate {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Decide simplicity and/or exceptionality with reason chains.
    Check {
        #[command(flatten)]
        input: InputArgs,
        /// Which verdicts to compute.
        #[arg(long, value_enum, default_value_t = Which::Both)]
        which: Which,
        /// Which chain of syzygies to judge.
        #[arg(long, value_enum, default_value_t = SideArg::F)]
        side: SideArg,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
    },
    /// Tabulate cohomology of a bundle expression over a twist window.
    Cohomology {
        #[command(flatten)]
        input: InputArgs,
        /// Bundle spec: F1, G2, F1v (dual), F1xF1v (tensor), F2v(-3) (twist).
        #[arg(long)]
        bundle: String,
        /// Twist window LO:HI (defaults to SYZLAB_WINDOW or the conservative
        /// band around the resolution).
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Run the verification suite: exactness, section counts, homological
    /// dimension, Betti bounds, two-sided sums.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
    },
}

#[derive(Args)]
struct FamilyArgs {
    /// One of: koszul, gorenstein, eagon-northcott, hk.
    family: String,
    /// Projective space dimension.
    #[arg(long)]
    n: Option<u32>,
    /// Socle parameter (gorenstein).
    #[arg(long)]
    t: Option<u32>,
    /// Degree parameter (eagon-northcott).
    #[arg(long)]
    d: Option<u32>,
    /// Codimension parameter (eagon-northcott).
    #[arg(long)]
    a: Option<u32>,
    /// Comma-separated degree sequence (hk), e.g. 0,3,4,7.
    #[arg(long, allow_hyphen_values = true)]
    degrees: Option<String>,
}

#[derive(Args)]
struct InputArgs {
    /// Path to a resolution JSON file, or - for stdin.
    #[arg(long, conflicts_with = "family")]
    input: Option<String>,
    /// Inline generator instead of a file: koszul, gorenstein,
    /// eagon-northcott, or hk.
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    t: Option<u32>,
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    a: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    degrees: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Simplicity,
    Exceptional,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    F,
    G,
}

impl From<SideArg> for Side {
    fn from(side: SideArg) -> Side {
        match side {
            SideArg::F => Side::F,
            SideArg::G => Side::G,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            std::process::exit(2);
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Generate { family } => {
            let res = build_family(
                &family.family,
                family.n,
                family.t,
                family.d,
                family.a,
                family.degrees.as_deref(),
            )?;
            println!("{}", serde_json::to_string(&res.to_json())?);
            Ok(0)
        }
        Command::Check {
            input,
            which,
            side,
            format,
        } => cmd_check(&load_input(&input)?, which, side.into(), format),
        Command::Cohomology {
            input,
            bundle,
            window,
            format,
        } => cmd_cohomology(&load_input(&input)?, &bundle, window.as_deref(), format),
        Command::Verify { input, format } => cmd_verify(&load_input(&input)?, format),
    }
}

fn build_family(
    family: &str,
    n: Option<u32>,
    t: Option<u32>,
    d: Option<u32>,
    a: Option<u32>,
    degrees: Option<&str>,
) -> Result<PureResolution> {
    let need = |value: Option<u32>, name: &str| {
        value.ok_or_else(|| anyhow!("family {family:?} requires --{name}"))
    };
    let res = match family {
        "koszul" => catalog::koszul(need(n, "n")?)?,
        "gorenstein" => {
            let t = need(t, "t")?;
            if t < 1 {
                bail!("--t must be at least 1");
            }
            catalog::compressed_gorenstein(need(n, "n")?, t)?
        }
        "eagon-northcott" => {
            let (d, a) = (need(d, "d")?, need(a, "a")?);
            if d < 1 || a < 1 {
                bail!("--d and --a must be at least 1");
            }
            catalog::eagon_northcott(need(n, "n")?, d, a)?
        }
        "hk" => {
            let spec = degrees.ok_or_else(|| anyhow!("family \"hk\" requires --degrees"))?;
            let parsed: Vec<i64> = spec
                .split(',')
                .map(|s| s.trim().parse::<i64>().context("invalid degree list"))
                .collect::<Result<_>>()?;
            let n = need(n, "n")?;
            let ds = DegreeSequence::new(n, parsed)?;
            let betti = hk_betti(&ds)?;
            PureResolution::new(ds, betti)?
        }
        other => bail!("unknown family {other:?}; expected koszul, gorenstein, eagon-northcott or hk"),
    };
    Ok(res)
}

fn load_input(input: &InputArgs) -> Result<PureResolution> {
    match (&input.input, &input.family) {
        (Some(path), None) => {
            let text = if path == "-" {
                let mut buf = String::new();
                std::io::stdin().read_to_string(&mut buf)?;
                buf
            } else {
                std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?
            };
            Ok(PureResolution::from_json_str(&text)?)
        }
        (None, Some(family)) => build_family(
            family,
            input.n,
            input.t,
            input.d,
            input.a,
            input.degrees.as_deref(),
        ),
        (None, None) => bail!("exactly one input source required: --input PATH or --family NAME"),
        (Some(_), Some(_)) => bail!("exactly one input source required, got both"),
    }
}

fn parse_window(spec: &str) -> Result<TwistWindow> {
    let (lo, hi) = spec
        .split_once(':')
        .ok_or_else(|| anyhow!("window must be LO:HI, got {spec:?}"))?;
    let lo: i64 = lo.trim().parse().context("window lower bound")?;
    let hi: i64 = hi.trim().parse().context("window upper bound")?;
    Ok(TwistWindow::new(lo, hi)?)
}

fn resolve_window(explicit: Option<&str>, res: &PureResolution) -> Result<TwistWindow> {
    if let Some(spec) = explicit {
        return parse_window(spec);
    }
    if let Ok(spec) = std::env::var("SYZLAB_WINDOW") {
        return parse_window(&spec).context("SYZLAB_WINDOW");
    }
    Ok(TwistWindow::default_for(res))
}

/// The reason that carries the verdict: for a No, the first failed
/// criterion; for Undetermined, the first undecided one; otherwise the first.
fn verdict_summary(v: &Verdict) -> String {
    let pick = match v.status {
        Status::No => v
            .reasons
            .iter()
            .find(|r| r.witness.get("holds") == Some(&json!(false))),
        Status::Undetermined => v.reasons.iter().find(|r| {
            r.witness.get("holds").map_or(true, |h| h.is_null())
                || r.rule.contains("requires")
                || r.rule.contains("open")
        }),
        Status::Yes => None,
    };
    pick.or_else(|| v.reasons.first())
        .map(|r| r.criterion.clone())
        .unwrap_or_default()
}

fn status_exit_code(statuses: impl Iterator<Item = Status>) -> i32 {
    let mut code = 0;
    for status in statuses {
        match status {
            Status::No => return 1,
            Status::Undetermined => code = 3,
            Status::Yes => {}
        }
    }
    code
}

fn cmd_check(res: &PureResolution, which: Which, side: Side, format: Format) -> Result<i32> {
    res.ensure_valid()?;
    let mut checks: Vec<(&str, Vec<Verdict>)> = Vec::new();
    if matches!(which, Which::Simplicity | Which::Both) {
        checks.push(("simplicity", check_simplicity_side(res, side)?));
    }
    if matches!(which, Which::Exceptional | Which::Both) {
        checks.push(("exceptional", check_exceptionality(res, side)?));
    }

    match format {
        Format::Json => {
            let doc = json!({
                "resolution": res.to_json(),
                "side": side.to_string(),
                "checks": checks.iter().map(|(kind, verdicts)| json!({
                    "kind": kind,
                    "verdicts": verdicts.iter().map(Verdict::to_json).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string(&doc)?);
        }
        Format::Csv => {
            println!("check,bundle,status");
            for (kind, verdicts) in &checks {
                for v in verdicts {
                    println!("{kind},{},{}", v.bundle, v.status);
                }
            }
        }
        Format::Pretty => {
            for (kind, verdicts) in &checks {
                for v in verdicts {
                    println!("{} {kind}: {} ({})", v.bundle, v.status, verdict_summary(v));
                }
            }
        }
    }

    Ok(status_exit_code(
        checks.iter().flat_map(|(_, vs)| vs.iter().map(|v| v.status)),
    ))
}

fn cmd_cohomology(
    res: &PureResolution,
    bundle: &str,
    window: Option<&str>,
    format: Format,
) -> Result<i32> {
    let node = SheafNode::parse(bundle)?;
    let engine = Engine::new(res)?;
    let window = resolve_window(window, engine.resolution())?;
    let table = engine.cohom_table(&node, window)?;
    match format {
        Format::Csv => print!("{}", table.to_csv()),
        Format::Json => {
            let rows: Vec<Value> = window
                .iter()
                .map(|t| {
                    json!({
                        "t": t,
                        "h": table.column(t).unwrap().iter().map(CohomDim::to_json).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let doc = json!({
                "bundle": node.to_string(),
                "window": { "lo": window.lo, "hi": window.hi },
                "rows": rows,
            });
            println!("{}", serde_json::to_string(&doc)?);
        }
        Format::Pretty => {
            println!("h^q of {node} for t in [{}, {}]", window.lo, window.hi);
            print!("{}", table.to_csv());
        }
    }
    Ok(0)
}

struct SuiteCheck {
    name: &'static str,
    passed: Option<bool>,
    detail: String,
}

fn cmd_verify(res: &PureResolution, format: Format) -> Result<i32> {
    let report = res.validate();
    if !report.monotonicity_violations.is_empty() || !report.nonpositive_betti.is_empty() {
        bail!("invalid resolution: {report}");
    }

    let mut checks: Vec<SuiteCheck> = Vec::new();
    let defect_zero = report.defect_is_zero();
    checks.push(SuiteCheck {
        name: "exactness (zero Hilbert defect)",
        passed: Some(defect_zero),
        detail: if defect_zero {
            "all coefficients zero".into()
        } else {
            format!(
                "defect coefficients [{}]",
                report
                    .hilbert_defect
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        },
    });

    // The remaining checks presuppose exactness; skip them when it fails.
    if defect_zero {
        let work = res.normalize();
        let n = work.n();
        let top = work.top_degree();
        let engine = Engine::new(&work)?;
        let window = engine.default_window();

        let mut ok = true;
        let mut detail = Vec::new();
        for i in 2..=n {
            let col = engine.node_cohomology(
                &SheafNode::syzygy(SyzygyId::new(Side::F, i - 1)).dual(),
                work.degree(i as usize) - top,
            )?;
            let expected = CohomDim::Known(work.beta(i as usize).clone());
            if col[0] != expected {
                ok = false;
                detail.push(format!("i={i}: h0 = {} expected {}", col[0], expected));
            }
        }
        checks.push(SuiteCheck {
            name: "section counts (h0 of twisted duals equal Betti numbers)",
            passed: Some(ok),
            detail: if ok { format!("i = 2..{n}") } else { detail.join("; ") },
        });

        let mut ok = true;
        let mut detail = Vec::new();
        for i in 1..n {
            for side in [Side::F, Side::G] {
                let hd = engine.hd(SyzygyId::new(side, i), window)?;
                if hd != CohomDim::known(i) {
                    ok = false;
                    detail.push(format!("hd({side}_{i}) = {hd}"));
                }
            }
        }
        checks.push(SuiteCheck {
            name: "homological dimension (hd of the i-th syzygy is i)",
            passed: Some(ok),
            detail: if ok {
                format!("both sides, i = 1..{}", n - 1)
            } else {
                detail.join("; ")
            },
        });

        let betti_report = work.betti_inequalities();
        let failing: Vec<String> = betti_report
            .items
            .iter()
            .filter(|i| !i.holds)
            .map(|i| format!("{} ({} < {})", i.name, i.lhs, i.rhs))
            .collect();
        checks.push(SuiteCheck {
            name: "Betti lower bounds",
            passed: Some(failing.is_empty()),
            detail: if failing.is_empty() {
                format!("{} inequalities", betti_report.items.len())
            } else {
                failing.join("; ")
            },
        });

        let mut ok = true;
        let mut detail = Vec::new();
        for i in 2..n {
            let pair = sigma_sides(&work, i)?;
            if pair.sigma1_front != pair.sigma1_back || pair.sigma2_front != pair.sigma2_back {
                ok = false;
                detail.push(format!(
                    "i={i}: sigma1 {}/{} sigma2 {}/{}",
                    pair.sigma1_front, pair.sigma1_back, pair.sigma2_front, pair.sigma2_back
                ));
            }
        }
        checks.push(SuiteCheck {
            name: "two-sided closed forms (front equals back)",
            passed: Some(ok),
            detail: if ok {
                if n > 2 {
                    format!("i = 2..{}", n - 1)
                } else {
                    "vacuous for n = 2".into()
                }
            } else {
                detail.join("; ")
            },
        });
    } else {
        for name in [
            "section counts (h0 of twisted duals equal Betti numbers)",
            "homological dimension (hd of the i-th syzygy is i)",
            "Betti lower bounds",
            "two-sided closed forms (front equals back)",
        ] {
            checks.push(SuiteCheck {
                name,
                passed: None,
                detail: "skipped: exactness failed".into(),
            });
        }
    }

    let all_pass = checks.iter().all(|c| c.passed == Some(true));
    match format {
        Format::Json => {
            let doc = json!({
                "resolution": res.to_json(),
                "checks": checks.iter().map(|c| json!({
                    "name": c.name,
                    "result": match c.passed { Some(true) => "pass", Some(false) => "fail", None => "skipped" },
                    "detail": c.detail,
                })).collect::<Vec<_>>(),
                "all_pass": all_pass,
            });
            println!("{}", serde_json::to_string(&doc)?);
        }
        Format::Csv => {
            println!("check,result,detail");
            for c in &checks {
                let result = match c.passed {
                    Some(true) => "pass",
                    Some(false) => "fail",
                    None => "skipped",
                };
                println!("{},{result},{}", c.name, c.detail.replace(',', ";"));
            }
        }
        Format::Pretty => {
            for c in &checks {
                let result = match c.passed {
                    Some(true) => "PASS",
                    Some(false) => "FAIL",
                    None => "SKIP",
                };
                println!("{result} {} — {}", c.name, c.detail);
            }
        }
    }
    Ok(if all_pass { 0 } else { 1 })
}
