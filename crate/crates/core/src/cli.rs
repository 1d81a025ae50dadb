//! Command-line front end.

use std::fmt::Write as _;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::Weight;
use crate::oracle::{check_theorem1, ComparisonReport, OracleConfig};
use crate::quaternionic::{prop1_admissible, theorem1_branch, BranchingTable, QuaternionicContext};
use crate::repweights::freudenthal;
use crate::rootsystems::{compact_positive, CartanType, FormLabel, PositiveSystem, RootDatum};
use crate::selftest::run_all;
use crate::specialcases::{
    check_prop3, prop2_admissible, prop3_branch, so3_admissible, theorem4_admissible, HermitianData, Sp1qContext,
    Verdict,
};

#[derive(Parser, Debug)]
#[command(name = "branchkit", version, about = "Branching laws and admissibility for discrete series")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
    /// Coordinates used for input weights; output is always ambient.
    #[arg(long, global = true, value_enum, default_value_t = Basis::Ambient)]
    pub basis: Basis,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    Ambient,
    Simple,
    Fundamental,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List supported real-form labels.
    ListForms,
    /// Closed-form branching tables.
    Branch {
        #[command(subcommand)]
        target: BranchTarget,
    },
    /// Admissibility of a restriction.
    Admissible {
        #[command(subcommand)]
        target: AdmissibleTarget,
    },
    /// Weight multiplicities of an irreducible finite-dimensional representation.
    Weights(WeightsArgs),
    /// Compare a closed form against the coset-sum oracle.
    OracleCheck {
        #[command(subcommand)]
        target: OracleTarget,
    },
    /// Run the acceptance suite and print a scoreboard.
    Selftest,
}

#[derive(Args, Debug)]
pub struct QuatArgs {
    /// Quaternionic form label, e.g. g2_2 or su2_n:3.
    #[arg(long)]
    pub form: String,
    /// Harish-Chandra parameter, comma-separated rationals.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
    /// The table is complete for all mu with (n+d)+(m+d) <= cutoff + 2d, i.e.
    /// at most `cutoff` total steps along Lambda1 and Lambda2.
    #[arg(long, default_value_t = 8)]
    pub cutoff: u32,
}

#[derive(Args, Debug)]
pub struct Sp1qArgs {
    #[arg(long)]
    pub q: usize,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
    /// The table is complete for all levels p <= cutoff.
    #[arg(long, default_value_t = 8)]
    pub cutoff: u32,
}

#[derive(Subcommand, Debug)]
pub enum BranchTarget {
    /// Restriction of a quaternionic discrete series to the distinguished SU(2,1) or Sp(1,1) piece.
    Quat {
        #[command(flatten)]
        args: QuatArgs,
        #[arg(long)]
        check_oracle: bool,
        #[arg(long, default_value_t = 12)]
        step_bound: u32,
    },
    /// Restriction of Sp(1,q) to Sp(1,1) x Sp(q-1).
    Sp1q {
        #[command(flatten)]
        args: Sp1qArgs,
        #[arg(long)]
        check_oracle: bool,
        #[arg(long, default_value_t = 12)]
        step_bound: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum AdmissibleTarget {
    /// Hermitian form restricted to the semisimple part of K.
    Hermitian {
        #[arg(long)]
        form: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// SO(3, 2n) restricted to the SO(3) factor of K; `--p` accepts any SO(3, p).
    So3 {
        #[arg(long, conflicts_with = "p", required_unless_present = "p")]
        n: Option<u32>,
        #[arg(long)]
        p: Option<u32>,
    },
    /// Quaternionic form restricted to the distinguished subgroup.
    Quat {
        #[arg(long)]
        form: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
}

#[derive(Args, Debug)]
pub struct WeightsArgs {
    /// Cartan type and rank, e.g. B3 or G2.
    #[arg(long, conflicts_with = "form", required_unless_present = "form")]
    pub cartan: Option<String>,
    /// Use the complexified root system of a real form.
    #[arg(long)]
    pub form: Option<String>,
    /// Highest weight.
    #[arg(long, allow_hyphen_values = true)]
    pub highest_weight: String,
}

#[derive(Subcommand, Debug)]
pub enum OracleTarget {
    Quat {
        #[command(flatten)]
        args: QuatArgs,
        #[arg(long, default_value_t = 12)]
        step_bound: u32,
    },
    Sp1q {
        #[command(flatten)]
        args: Sp1qArgs,
        #[arg(long, default_value_t = 12)]
        step_bound: u32,
    },
}

/// Rendered output plus the exit status to use after printing it.
pub struct Output {
    pub stdout: String,
    pub status: i32,
    pub stderr: Option<String>,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, status: 0, stderr: None }
    }
}

fn parse_weight(rd: &RootDatum, basis: Basis, text: &str) -> Result<Weight> {
    let w: Weight = text.parse()?;
    match basis {
        Basis::Ambient => {
            if w.dim() != rd.dim() {
                return Err(Error::Structural(format!("weight has {} coordinates, expected {}", w.dim(), rd.dim())));
            }
            Ok(w)
        }
        Basis::Simple => rd.from_basis(&w.0, false),
        Basis::Fundamental => rd.from_basis(&w.0, true),
    }
}

fn parse_cartan(s: &str) -> Result<(CartanType, usize)> {
    let bad = || Error::Config(format!("bad Cartan type '{s}', expected e.g. B3"));
    let s = s.trim();
    let mut chars = s.chars();
    let head = chars.next().ok_or_else(bad)?;
    let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
    let ty = match head.to_ascii_uppercase() {
        'A' => CartanType::A,
        'B' => CartanType::B,
        'C' => CartanType::C,
        'D' => CartanType::D,
        'E' => CartanType::E,
        'F' => CartanType::F,
        'G' => CartanType::G,
        _ => return Err(bad()),
    };
    Ok((ty, rank))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn aligned(rows: &[(String, String)], header: (&str, &str)) -> String {
    let w = rows.iter().map(|r| r.0.len()).chain([header.0.len()]).max().unwrap_or(0);
    let mut s = format!("{:<w$}  {}\n", header.0, header.1);
    for (a, b) in rows {
        let _ = writeln!(s, "{a:<w$}  {b}");
    }
    s
}

fn table_text(table: &BranchingTable) -> String {
    let rows: Vec<_> = table.entries.iter().map(|(mu, m)| (mu.to_string(), m.to_string())).collect();
    format!("# complete for {}\n{}", table.complete_for, aligned(&rows, ("mu", "mult")))
}

fn verdict_out(v: &Verdict, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => pretty(&v.to_json()),
        OutputFormat::Text => format!("admissible: {}\nreason: {}\n", v.admissible, v.reason),
    }
}

fn report_out(rep: &ComparisonReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => pretty(&rep.to_json()),
        OutputFormat::Text => {
            let mut s = format!(
                "agree: {}\ncompared weights: {}\nunknown skipped: {}\n",
                rep.agree, rep.compared_weights, rep.unknown_skipped
            );
            for m in &rep.mismatches {
                let _ = writeln!(s, "mismatch at {}: closed form {}, oracle {}", m.mu, m.closed_form, m.oracle);
            }
            s
        }
    }
}

fn branch_output(
    params: Value,
    table: &BranchingTable,
    report: Option<&ComparisonReport>,
    format: OutputFormat,
) -> Output {
    let stdout = match format {
        OutputFormat::Json => {
            let mut v = table.to_json();
            v["params"] = params;
            v["oracleChecked"] = json!(report.is_some());
            if let Some(r) = report {
                v["oracle"] = r.to_json();
            }
            pretty(&v)
        }
        OutputFormat::Text => {
            let mut s = table_text(table);
            if let Some(r) = report {
                s.push_str(&report_out(r, format));
            }
            s
        }
    };
    match report {
        Some(r) if !r.agree => Output {
            stdout,
            status: 1,
            stderr: Some(format!("closed form and oracle disagree at {} weights", r.mismatches.len())),
        },
        _ => Output::ok(stdout),
    }
}

fn quat_setup(args: &QuatArgs, basis: Basis) -> Result<(QuaternionicContext, Weight)> {
    let label = FormLabel::from_str(&args.form)?;
    let ctx = QuaternionicContext::new(label)?;
    let lam = parse_weight(&ctx.rd, basis, &args.lambda)?;
    Ok((ctx, lam))
}

fn sp1q_setup(args: &Sp1qArgs, basis: Basis) -> Result<(Sp1qContext, Weight)> {
    let ctx = Sp1qContext::new(args.q)?;
    let lam = parse_weight(&ctx.rd, basis, &args.lambda)?;
    Ok((ctx, lam))
}

fn quat_params(ctx: &QuaternionicContext, lam: &Weight) -> Value {
    let (l1, l2) = ctx.decompose_parameter(lam);
    json!({
        "form": ctx.label.to_string(),
        "lambda": lam.to_string(),
        "lambda1": l1.to_string(),
        "lambda2": l2.to_string(),
        "d": ctx.d,
    })
}

fn sp1q_params(ctx: &Sp1qContext, lam: &Weight) -> Value {
    let (l1, l2) = ctx.decompose_parameter(lam);
    json!({
        "form": FormLabel::Sp1q(ctx.q).to_string(),
        "lambda": lam.to_string(),
        "lambda1": l1.to_string(),
        "lambda2": l2.to_string(),
        "q": ctx.q,
    })
}

/// Executes a parsed command.
pub fn run(cli: &Cli) -> Result<Output> {
    let format = cli.format;
    let basis = cli.basis;
    Ok(match &cli.command {
        Command::ListForms => {
            let cat = FormLabel::catalogue();
            Output::ok(match format {
                OutputFormat::Json => pretty(&json!({
                    "forms": cat.iter().map(|(l, d)| json!({ "label": l, "description": d })).collect::<Vec<_>>()
                })),
                OutputFormat::Text => {
                    let rows: Vec<_> = cat.iter().map(|(l, d)| (l.to_string(), d.to_string())).collect();
                    aligned(&rows, ("label", "description"))
                }
            })
        }
        Command::Branch { target: BranchTarget::Quat { args, check_oracle, step_bound } } => {
            let (ctx, lam) = quat_setup(args, basis)?;
            let hc = ctx.parameter(lam.clone())?;
            let table = theorem1_branch(&ctx, &hc, args.cutoff)?;
            let report = if *check_oracle {
                Some(check_theorem1(&ctx, &lam, &table, &OracleConfig::with_step_bound(*step_bound))?.1)
            } else {
                None
            };
            branch_output(quat_params(&ctx, &lam), &table, report.as_ref(), format)
        }
        Command::Branch { target: BranchTarget::Sp1q { args, check_oracle, step_bound } } => {
            let (ctx, lam) = sp1q_setup(args, basis)?;
            let hc = ctx.parameter(lam.clone())?;
            let table = prop3_branch(&ctx, &hc, args.cutoff)?;
            let report = if *check_oracle {
                Some(check_prop3(&ctx, &lam, &table, &OracleConfig::with_step_bound(*step_bound))?.1)
            } else {
                None
            };
            branch_output(sp1q_params(&ctx, &lam), &table, report.as_ref(), format)
        }
        Command::Admissible { target } => {
            let v = match target {
                AdmissibleTarget::Hermitian { form, lambda } => {
                    let hd = HermitianData::new(form.parse()?)?;
                    let lam = parse_weight(&hd.rd, basis, lambda)?;
                    let hc = crate::repweights::HCParameter::new(&hd.rd, lam, compact_positive(&hd.rd))?;
                    theorem4_admissible(&hd, &hc)?
                }
                AdmissibleTarget::So3 { n: Some(n), .. } => prop2_admissible(*n)?,
                AdmissibleTarget::So3 { p: Some(p), .. } => so3_admissible(*p)?,
                AdmissibleTarget::So3 { .. } => return Err(Error::Config("give --n or --p".into())),
                AdmissibleTarget::Quat { form, lambda } => {
                    let ctx = QuaternionicContext::new(form.parse()?)?;
                    let lam = parse_weight(&ctx.rd, basis, lambda)?;
                    let hc = crate::repweights::HCParameter::new(&ctx.rd, lam, compact_positive(&ctx.rd))?;
                    let sigma = PositiveSystem::from_chamber(ctx.form(), ctx.rd.roots(), &hc.lam)?;
                    let admissible = prop1_admissible(&ctx, &sigma)?;
                    Verdict {
                        admissible,
                        reason: if admissible {
                            "Psi_lambda is the small positive system".into()
                        } else {
                            "Psi_lambda differs from the small positive system".into()
                        },
                    }
                }
            };
            Output::ok(verdict_out(&v, format))
        }
        Command::Weights(args) => {
            let rd = match (&args.cartan, &args.form) {
                (Some(c), _) => {
                    let (ty, rank) = parse_cartan(c)?;
                    RootDatum::of_type(ty, rank)?
                }
                (None, Some(f)) => RootDatum::for_form(f.parse()?)?,
                (None, None) => return Err(Error::Config("give --cartan or --form".into())),
            };
            let hw = parse_weight(&rd, basis, &args.highest_weight)?;
            let table = freudenthal(&hw, &rd.positive_system(), rd.form())?;
            Output::ok(match format {
                OutputFormat::Json => pretty(&json!({
                    "highestWeight": table.highest_weight.to_string(),
                    "dimension": table.dimension(),
                    "weights": table.mults.iter()
                        .map(|(w, m)| json!({ "weight": w.to_string(), "mult": m }))
                        .collect::<Vec<_>>(),
                })),
                OutputFormat::Text => {
                    let mut s = String::from("weight\tmult\n");
                    for (w, m) in &table.mults {
                        let _ = writeln!(s, "{w}\t{m}");
                    }
                    s
                }
            })
        }
        Command::OracleCheck { target } => {
            let rep = match target {
                OracleTarget::Quat { args, step_bound } => {
                    let (ctx, lam) = quat_setup(args, basis)?;
                    let hc = ctx.parameter(lam.clone())?;
                    let table = theorem1_branch(&ctx, &hc, args.cutoff)?;
                    check_theorem1(&ctx, &lam, &table, &OracleConfig::with_step_bound(*step_bound))?.1
                }
                OracleTarget::Sp1q { args, step_bound } => {
                    let (ctx, lam) = sp1q_setup(args, basis)?;
                    let hc = ctx.parameter(lam.clone())?;
                    let table = prop3_branch(&ctx, &hc, args.cutoff)?;
                    check_prop3(&ctx, &lam, &table, &OracleConfig::with_step_bound(*step_bound))?.1
                }
            };
            let status = if rep.agree { 0 } else { 1 };
            Output { stdout: report_out(&rep, format), status, stderr: None }
        }
        Command::Selftest => {
            let results = run_all();
            let all = results.iter().all(|r| r.passed);
            let stdout = match format {
                OutputFormat::Json => pretty(&json!({
                    "passed": all,
                    "criteria": results.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
                })),
                OutputFormat::Text => {
                    let mut s: String = results.iter().map(|r| r.line() + "\n").collect();
                    let n = results.iter().filter(|r| r.passed).count();
                    let _ = writeln!(s, "{n}/{} criteria passed", results.len());
                    s
                }
            };
            Output { stdout, status: if all { 0 } else { 1 }, stderr: None }
        }
    })
}

/// Parses `args`, runs the command and writes to the given streams; returns the exit code.
pub fn main_with(
    args: impl IntoIterator<Item = String>,
    out: &mut impl std::io::Write,
    err: &mut impl std::io::Write,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(rendered.as_bytes());
            } else {
                let _ = err.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match run(&cli) {
        Ok(o) => {
            let _ = out.write_all(o.stdout.as_bytes());
            if let Some(m) = o.stderr {
                let _ = writeln!(err, "error: {m}");
            }
            o.status
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
