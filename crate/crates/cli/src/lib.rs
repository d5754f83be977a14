//! Argument handling and output rendering for the `permfield` binary.

use std::fmt::Write as _;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use permfield_core::analysis::{completeness_level_of_table, cycle_type, CycleType};
use permfield_core::group;
use permfield_core::suite::{run_suite, SuiteOptions};
use permfield_core::{Error, Family, FamilyParams, FieldCtx, FieldSpec, Tower, ValueTable};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Law {
    Additive,
    Multiplicative,
    Relationship,
    StarLemma,
}

#[derive(Debug, Parser)]
#[command(name = "permfield", version, about = "Complete permutation polynomial families over GF(p^m)")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Print coefficient vectors next to element indices.
    #[arg(long, global = true)]
    pub show_coeffs: bool,

    /// Field modulus override: `a0,...,am` for the command's field, or a full
    /// field spec `p^m:a0,...,am`. Repeatable for `verify-paper`.
    #[arg(long, global = true)]
    pub irr: Vec<String>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Construct a field from `p^m` or `p^m:a0,...,am` and describe it.
    Field { spec: String },
    /// Print the sparse form of a family member, e.g. `plus:p=5,s=1,n=2,c=2`.
    Gen { descriptor: String },
    /// Evaluate a family member at one element index.
    Eval {
        descriptor: String,
        #[arg(long)]
        at: u32,
    },
    /// Permutation verdict and completeness level.
    Check { descriptor: String },
    /// Cycle type of a family member.
    Cycles { descriptor: String },
    /// Full value table as input_index,output_index rows.
    Table { descriptor: String },
    /// Exhaustive check of a composition law.
    Group {
        #[arg(value_enum)]
        law: Law,
        /// Big field `p^m[:modulus]`; for star-lemma the field K itself.
        field: String,
        /// Degree of the base subfield over the prime field.
        #[arg(long, default_value_t = 1)]
        base: u32,
    },
    /// Run every stated property as an exhaustive check.
    VerifyPaper {
        #[arg(long)]
        max_q: Option<u32>,
    },
}

/// Exit code plus what goes to stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandResult {
    /// 0 success, 1 a mathematical check failed, 2 usage or parameter error.
    pub exit_code: i32,
    pub output: String,
    pub diagnostics: String,
}

impl CommandResult {
    fn ok(output: String) -> Self {
        CommandResult { exit_code: 0, output, diagnostics: String::new() }
    }

    fn checked(holds: bool, output: String) -> Self {
        CommandResult { exit_code: if holds { 0 } else { 1 }, output, diagnostics: String::new() }
    }

    fn usage(msg: impl Into<String>) -> Self {
        CommandResult { exit_code: 2, output: String::new(), diagnostics: msg.into() }
    }
}

pub fn dispatch<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                CommandResult::usage(rendered)
            } else {
                CommandResult::ok(rendered)
            };
        }
    };
    match run(&cli) {
        Ok(r) => r,
        Err(e) => CommandResult::usage(format!("error: {e}\n")),
    }
}

fn run(cli: &Cli) -> Result<CommandResult, Error> {
    let fmt = cli.format;
    match &cli.command {
        Command::Field { spec } => field_cmd(cli, spec),
        Command::Gen { descriptor } => {
            let fam = family(cli, descriptor)?;
            let member = fam.scaled();
            let poly = member.poly.to_string();
            Ok(CommandResult::ok(match fmt {
                Format::Json => to_json(&json!({
                    "descriptor": fam.params().to_string(),
                    "field": fam.ctx().spec().to_string(),
                    "polynomial": poly,
                    "terms": member.poly.terms().rev().map(|(e, c)| (e, c.index())).collect::<Vec<_>>(),
                    "degree": member.poly.degree(),
                    "maximality_guaranteed": member.maximality_guaranteed,
                })),
                Format::Csv => {
                    let mut out = String::from("exponent,coefficient_index\n");
                    for (e, c) in member.poly.terms().rev() {
                        let _ = writeln!(out, "{e},{c}");
                    }
                    out
                }
                Format::Text => {
                    let mut out = header(fam.ctx());
                    if cli.show_coeffs {
                        for (e, c) in member.poly.terms().rev() {
                            let _ = writeln!(out, "# x^{e}: {c} {:?}", fam.ctx().coeffs(c));
                        }
                    }
                    let _ = writeln!(out, "{poly}");
                    out
                }
            }))
        }
        Command::Eval { descriptor, at } => {
            let fam = family(cli, descriptor)?;
            let ctx = fam.ctx();
            let a = ctx.element(*at)?;
            let image = fam.polynomial().eval(ctx, a);
            Ok(CommandResult::ok(match fmt {
                Format::Json => {
                    let mut v = json!({
                        "descriptor": fam.params().to_string(),
                        "field": ctx.spec().to_string(),
                        "input": a.index(),
                        "output": image.index(),
                    });
                    if cli.show_coeffs {
                        v["input_coeffs"] = json!(ctx.coeffs(a));
                        v["output_coeffs"] = json!(ctx.coeffs(image));
                    }
                    to_json(&v)
                }
                Format::Csv => format!("input_index,output_index\n{},{}\n", a.index(), image.index()),
                Format::Text if cli.show_coeffs => {
                    format!("{} {:?} -> {} {:?}\n", a, ctx.coeffs(a), image, ctx.coeffs(image))
                }
                Format::Text => format!("{image}\n"),
            }))
        }
        Command::Check { descriptor } => {
            let fam = family(cli, descriptor)?;
            let ctx = fam.ctx();
            let poly = fam.polynomial();
            let table = poly.value_table(ctx);
            let report = completeness_level_of_table(ctx, &table);
            let cycles = cycle_type(&table).ok();
            let order = cycles.as_ref().map(CycleType::order).transpose()?;
            let out = match fmt {
                Format::Json => to_json(&json!({
                    "descriptor": fam.params().to_string(),
                    "field": ctx.spec().to_string(),
                    "is_permutation": report.is_permutation,
                    "level": report.level,
                    "max_level": ctx.characteristic() - 1,
                    "cycle_type": cycles,
                    "order": order.map(|o| o.to_string()),
                    "fixed_points": cycles.as_ref().map(CycleType::fixed_points),
                    "witnesses": {
                        "collision": report.collision_witness,
                        "level_failure": report.level_failure,
                    },
                })),
                Format::Csv => {
                    return Err(Error::Parameter("check has no csv form; use text or json".into()));
                }
                Format::Text => {
                    let mut out = header(ctx);
                    let _ = writeln!(out, "polynomial {poly}");
                    let _ = writeln!(out, "permutation {}", if report.is_permutation { "yes" } else { "no" });
                    if let Some([a, b]) = report.collision_witness {
                        let _ = writeln!(out, "collision {a} {b}");
                    }
                    let _ = writeln!(out, "level {} of {}", report.level, ctx.characteristic() - 1);
                    if let Some(f) = report.level_failure {
                        let [a, b] = f.collision;
                        let _ = writeln!(out, "fails at k={} with collision {a} {b}", f.k);
                    }
                    if let (Some(ct), Some(order)) = (&cycles, order) {
                        let _ = writeln!(out, "cycle type {}", cycle_text(ct));
                        let _ = writeln!(out, "order {order}");
                        let _ = writeln!(out, "fixed points {}", ct.fixed_points());
                    }
                    out
                }
            };
            Ok(CommandResult::checked(report.is_permutation, out))
        }
        Command::Cycles { descriptor } => {
            let fam = family(cli, descriptor)?;
            let ctx = fam.ctx();
            let ct = cycle_type(&fam.polynomial().value_table(ctx))?;
            let order = ct.order()?;
            Ok(CommandResult::ok(match fmt {
                Format::Json => to_json(&json!({
                    "descriptor": fam.params().to_string(),
                    "field": ctx.spec().to_string(),
                    "cycle_type": ct,
                    "order": order.to_string(),
                    "fixed_points": ct.fixed_points(),
                })),
                Format::Csv => {
                    let mut out = String::from("length,count\n");
                    for (l, c) in ct.counts() {
                        let _ = writeln!(out, "{l},{c}");
                    }
                    out
                }
                Format::Text => format!(
                    "{}cycle type {}\norder {order}\nfixed points {}\n",
                    header(ctx),
                    cycle_text(&ct),
                    ct.fixed_points()
                ),
            }))
        }
        Command::Table { descriptor } => {
            let fam = family(cli, descriptor)?;
            let ctx = fam.ctx();
            let table = fam.polynomial().value_table(ctx);
            Ok(CommandResult::ok(match fmt {
                Format::Json => to_json(&json!({
                    "descriptor": fam.params().to_string(),
                    "field": ctx.spec().to_string(),
                    "images": table,
                })),
                Format::Csv | Format::Text => table_csv(ctx, &table, cli.show_coeffs),
            }))
        }
        Command::Group { law, field, base } => group_cmd(cli, *law, field, *base),
        Command::VerifyPaper { max_q } => verify_cmd(cli, *max_q),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn header(ctx: &FieldCtx) -> String {
    format!("# field {}\n", ctx.spec())
}

fn cycle_text(ct: &CycleType) -> String {
    ct.counts()
        .iter()
        .map(|(l, c)| format!("{l}^{c}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn table_csv(ctx: &FieldCtx, table: &ValueTable, show_coeffs: bool) -> String {
    let mut out = String::from(if show_coeffs {
        "input_index,output_index,input_coeffs,output_coeffs\n"
    } else {
        "input_index,output_index\n"
    });
    for (i, &v) in table.images().iter().enumerate() {
        if show_coeffs {
            let show = |x: u32| {
                let e = ctx.element(x).expect("table entries are elements");
                ctx.coeffs(e).iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
            };
            let _ = writeln!(out, "{i},{v},{},{}", show(i as u32), show(v));
        } else {
            let _ = writeln!(out, "{i},{v}");
        }
    }
    out
}

fn parse_coeff_list(s: &str) -> Result<Vec<u32>, Error> {
    s.split(',')
        .map(|c| c.trim().parse().map_err(|_| Error::Parse(format!("bad modulus coefficient '{c}'"))))
        .collect()
}

/// Modulus override for a single-field command.
fn single_modulus(cli: &Cli) -> Result<Option<Vec<u32>>, Error> {
    match cli.irr.as_slice() {
        [] => Ok(None),
        [one] if one.contains(':') => Ok(Some(one.parse::<FieldSpec>()?.irr)),
        [one] => parse_coeff_list(one).map(Some),
        _ => Err(Error::Parameter("--irr given more than once".into())),
    }
}

fn family(cli: &Cli, descriptor: &str) -> Result<Family, Error> {
    let params: FamilyParams = descriptor.parse()?;
    match single_modulus(cli)? {
        Some(irr) => Family::with_modulus(params, irr),
        None => Family::new(params),
    }
}

fn field_from(cli: &Cli, spec: &str) -> Result<FieldCtx, Error> {
    let mut spec: FieldSpec = spec.parse()?;
    if let Some(irr) = single_modulus(cli)? {
        spec = FieldSpec::with_modulus(spec.p, irr)?;
    }
    FieldCtx::new(spec)
}

fn field_cmd(cli: &Cli, spec: &str) -> Result<CommandResult, Error> {
    let ctx = field_from(cli, spec)?;
    let degrees = ctx.subfield_degrees();
    let out = match cli.format {
        Format::Json => to_json(&json!({
            "field": ctx.spec().to_string(),
            "p": ctx.characteristic(),
            "m": ctx.degree(),
            "order": ctx.order(),
            "modulus": ctx.spec().irr,
            "subfield_degrees": degrees,
            "log_tables": ctx.has_log_tables(),
        })),
        Format::Csv => return Err(Error::Parameter("field has no csv form; use text or json".into())),
        Format::Text => {
            let mut out = header(&ctx);
            let _ = writeln!(out, "order {}", ctx.order());
            let _ = writeln!(
                out,
                "subfield degrees {}",
                degrees.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
            );
            if cli.show_coeffs && ctx.degree() > 1 {
                let t = ctx.basis(1)?;
                let _ = writeln!(out, "basis element {} = {:?}", t, ctx.coeffs(t));
            }
            out
        }
    };
    Ok(CommandResult::ok(out))
}

fn group_cmd(cli: &Cli, law: Law, field: &str, base: u32) -> Result<CommandResult, Error> {
    let ctx = Arc::new(field_from(cli, field)?);
    let label = ctx.spec().to_string();
    let (holds, report) = match law {
        Law::StarLemma => {
            let holds = group::star_lemma_holds(&ctx);
            let pairs = (ctx.order() as u64 - 1).pow(2);
            (holds, json!({
                "law": "star-lemma",
                "base_field": label,
                "pairs_checked": pairs,
                "holds": holds,
                "counterexample": null,
            }))
        }
        Law::Relationship => {
            let tower = Tower::over(ctx, base)?;
            let holds = group::verify_relationship(&tower)?;
            let mut cex = None;
            for c in tower.base_elements() {
                if group::shifted_plus(&tower, c)? != tower.f_star(c)? {
                    cex = Some(c.index());
                    break;
                }
            }
            (holds, json!({
                "law": "relationship",
                "base_field": format!("{}^{} in {}", tower.characteristic(), base, label),
                "pairs_checked": tower.base_order(),
                "holds": holds,
                "counterexample": cex,
            }))
        }
        Law::Additive | Law::Multiplicative => {
            let tower = Tower::over(ctx, base)?;
            let r = if law == Law::Additive {
                group::verify_additive_group(&tower)?
            } else {
                group::verify_multiplicative_group(&tower)?
            };
            (r.law_holds && r.iso_verified, serde_json::to_value(&r).expect("report serializes"))
        }
    };
    let out = match cli.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            return Err(Error::Parameter("group has no csv form; use text or json".into()));
        }
        Format::Text => {
            let mut out = format!("# field {label}\n");
            let _ = writeln!(out, "law {}", report["law"].as_str().unwrap_or_default());
            let _ = writeln!(out, "base field {}", report["base_field"].as_str().unwrap_or_default());
            let _ = writeln!(out, "pairs checked {}", report["pairs_checked"]);
            let _ = writeln!(out, "holds {}", if holds { "yes" } else { "no" });
            if !report["counterexample"].is_null() {
                let _ = writeln!(out, "counterexample {}", report["counterexample"]);
            }
            out
        }
    };
    Ok(CommandResult::checked(holds, out))
}

fn verify_cmd(cli: &Cli, max_q: Option<u32>) -> Result<CommandResult, Error> {
    let moduli = cli
        .irr
        .iter()
        .map(|s| {
            if !s.contains('^') {
                return Err(Error::Parameter(format!(
                    "verify-paper needs --irr as a full field spec p^m:a0,...,am, got '{s}'"
                )));
            }
            let spec: FieldSpec = s.parse()?;
            // validate now so a bad modulus fails before any work
            FieldCtx::new(spec.clone())?;
            Ok(spec)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let opts = SuiteOptions { max_q: max_q.unwrap_or(u32::MAX), moduli };
    let report = run_suite(&opts)?;
    let out = match cli.format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut out = String::from("id,passed,cases,title\n");
            for c in &report.criteria {
                let _ = writeln!(out, "{},{},{},{}", c.id, c.passed, c.cases, c.title);
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for c in &report.criteria {
                let _ = writeln!(
                    out,
                    "[{}] {:>2} {} ({}; {:.1} ms)",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.id,
                    c.title,
                    c.detail,
                    c.elapsed.as_secs_f64() * 1e3
                );
            }
            let failed: Vec<String> = report.criteria.iter().filter(|c| !c.passed).map(|c| c.id.to_string()).collect();
            if failed.is_empty() {
                out.push_str("all criteria passed\n");
            } else {
                let _ = writeln!(out, "failed criteria: {}", failed.join(", "));
            }
            out
        }
    };
    let mut result = CommandResult::checked(report.passed, out);
    if !report.passed {
        for c in report.criteria.iter().filter(|c| !c.passed) {
            let _ = writeln!(result.diagnostics, "criterion {} failed: {}", c.id, c.detail);
        }
    }
    Ok(result)
}
