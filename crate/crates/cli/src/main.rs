//! `twochar`: group data, H², 2-characters, induction and decomposition of
//! 2-representations from TOML files.
//!
//! Exit codes: 0 success, 1 verification failure, 2 parse error,
//! 3 validation error, 4 size cap exceeded.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use twochar_core::cohomology::{h2_with_cap, H2_ORDER_CAP};
use twochar_core::files::{load_group, load_two_rep, parse_subgroup_spec, write_two_rep};
use twochar_core::group::DEFAULT_GROUP_CAP;
use twochar_core::grpd_rep::hkr_induced_2class;
use twochar_core::suite::{acceptance_cases, check_invariants, property_checks, run_suite};
use twochar_core::two_rep::{induce_two_rep, verify_induction_theorem};
use twochar_core::{Error, FiniteGroup, Subgroup, TwoClassFunction, TwoRep};
use twochar_core::CycNumber;

/// Random 2-representations per group in the seeded property checks.
const PROPERTY_ROUNDS: usize = 3;

#[derive(Parser)]
#[command(name = "twochar", version, about = "Exact 2-characters of finite group 2-representations")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Seed for the randomized property checks of `verify`.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// Cap on group orders (generated groups and H² computations).
    #[arg(long, global = true)]
    cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Order, conjugacy classes and commuting pairs of a group.
    GroupInfo { group: PathBuf },
    /// H²(G, Z/M) as a product of cyclic groups.
    H2 {
        group: PathBuf,
        #[arg(long)]
        modulus: u32,
    },
    /// 2-character table over classes of commuting pairs.
    TwoChar { group: PathBuf, rep: PathBuf },
    /// Induce a 2-representation of a subgroup; `subgroup` lists generator labels.
    Induce {
        group: PathBuf,
        subgroup: String,
        rep: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Split a 2-representation into induced pieces (H_i, ω_i).
    Decompose { group: PathBuf, rep: PathBuf },
    /// Check the induction theorem for one rep, or run the built-in suite.
    Verify {
        #[arg(required_unless_present = "suite")]
        group: Option<PathBuf>,
        #[arg(required_unless_present = "suite")]
        subgroup: Option<String>,
        #[arg(required_unless_present = "suite")]
        rep: Option<PathBuf>,
        #[arg(long, conflicts_with_all = ["group", "subgroup", "rep"])]
        suite: bool,
    },
}

/// What a command prints, in both formats, and whether it verified.
struct Report {
    text: String,
    json: Value,
    passed: bool,
}

impl Report {
    fn ok(text: String, json: Value) -> Self {
        Report { text, json, passed: true }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } => 2,
        Error::SizeCap { .. } => 4,
        Error::Inconsistent(_) => 1,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let body = match cli.format {
                Format::Text => report.text,
                Format::Json => serde_json::to_string_pretty(&report.json).expect("reports serialize") + "\n",
            };
            // a closed pipe downstream is not our failure
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            ExitCode::from(if report.passed { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: &Cli) -> twochar_core::Result<Report> {
    let group = |path: &Path| -> twochar_core::Result<Arc<FiniteGroup>> {
        Ok(Arc::new(load_group(path, Some(cli.cap.unwrap_or(DEFAULT_GROUP_CAP)))?))
    };
    match &cli.command {
        Command::GroupInfo { group: path } => Ok(group_info(&group(path)?)),
        Command::H2 { group: path, modulus } => {
            let g = group(path)?;
            let coh = h2_with_cap(&g, *modulus, cli.cap.unwrap_or(H2_ORDER_CAP))?;
            let text = format!(
                "H^2({}, Z/{modulus}) = {coh}\norder {}\n",
                g.name(),
                coh.order()
            );
            let json = json!({
                "group": g.name(),
                "modulus": modulus,
                "invariant_factors": coh.invariant_factors,
                "order": coh.order(),
                "display": coh.to_string(),
            });
            Ok(Report::ok(text, json))
        }
        Command::TwoChar { group: path, rep } => {
            let g = group(path)?;
            let rho = load_two_rep(rep, &g)?;
            let chi = rho.two_character()?;
            let (text, json) = char_table(&chi);
            Ok(Report::ok(
                format!("2-character of a {}-dimensional 2-representation of {}\n{text}", rho.n(), g.name()),
                json!({ "group": g.name(), "n": rho.n(), "two_character": json }),
            ))
        }
        Command::Induce { group: path, subgroup, rep, out } => {
            let g = group(path)?;
            let h = parse_subgroup_spec(&g, subgroup)?;
            let hg = Arc::new(h.extract());
            let rho = load_two_rep(rep, &hg)?;
            let induced = induce_two_rep(&h, &rho)?;
            std::fs::write(out, write_two_rep(&induced)).map_err(|e| {
                Error::Parameter(format!("cannot write {}: {e}", out.display()))
            })?;
            let reloaded = load_two_rep(out, &g)?;
            if reloaded.coh_table() != induced.coh_table() || reloaded.unit_table() != induced.unit_table() {
                return Err(Error::Inconsistent("written file reloads to a different 2-representation".into()));
            }
            let (table, chi_json) = char_table(&induced.two_character()?);
            let text = format!(
                "induced from <{}> (order {}, index {}): dimension {}\nwrote {}\n{table}",
                generator_labels(&h).join(", "),
                h.order(),
                h.index(),
                induced.n(),
                out.display()
            );
            let json = json!({
                "group": g.name(),
                "subgroup": { "generators": generator_labels(&h), "order": h.order() },
                "n": induced.n(),
                "out": out.display().to_string(),
                "two_character": chi_json,
            });
            Ok(Report::ok(text, json))
        }
        Command::Decompose { group: path, rep } => {
            let g = group(path)?;
            decompose(&load_two_rep(rep, &g)?)
        }
        Command::Verify { suite: true, .. } => verify_suite(cli.seed),
        Command::Verify {
            group: Some(path),
            subgroup: Some(spec),
            rep: Some(rep),
            ..
        } => {
            let g = group(path)?;
            let h = parse_subgroup_spec(&g, spec)?;
            let rho = load_two_rep(rep, &Arc::new(h.extract()))?;
            verify_one(&h, &rho)
        }
        Command::Verify { .. } => Err(Error::Parameter("give GROUP SUBGROUP REP or --suite".into())),
    }
}

fn group_info(g: &Arc<FiniteGroup>) -> Report {
    let classes = &g.conjugacy_classes().classes;
    let pairs = g.commuting_pairs().len();
    let mut text = format!(
        "group {}\norder {}\nconjugacy classes {}\n",
        g.name(),
        g.order(),
        classes.len()
    );
    text.push_str(&format!("  {:<16} {:>6} {:>12}\n", "representative", "size", "centralizer"));
    let mut rows = Vec::new();
    for class in classes {
        let rep = g.label(class[0]);
        let centralizer = g.order() / class.len();
        text.push_str(&format!("  {rep:<16} {:>6} {centralizer:>12}\n", class.len()));
        rows.push(json!({ "representative": rep, "size": class.len(), "centralizer_order": centralizer }));
    }
    text.push_str(&format!("commuting pairs {pairs}\n"));
    Report::ok(
        text,
        json!({
            "group": g.name(),
            "order": g.order(),
            "classes": rows,
            "commuting_pairs": pairs,
        }),
    )
}

fn char_table(chi: &TwoClassFunction<CycNumber>) -> (String, Value) {
    let g = chi.group();
    let mut text = String::new();
    let mut rows = Vec::new();
    for ((a, b), v) in chi.class_table() {
        let (a, b) = (g.label(a), g.label(b));
        text.push_str(&format!("  ({a}, {b})  {}\n", v.to_literal()));
        rows.push(json!({ "g": a, "h": b, "value": v.to_literal() }));
    }
    (text, Value::Array(rows))
}

/// A small generating set, chosen greedily in element order.
fn generator_labels(h: &Subgroup) -> Vec<String> {
    let g = h.parent();
    let mut gens = Vec::new();
    let mut span = vec![g.identity()];
    for &x in h.members() {
        if span.contains(&x) {
            continue;
        }
        gens.push(x);
        span = Subgroup::generated_by(g, &gens)
            .expect("members of a subgroup generate a subgroup")
            .members()
            .to_vec();
    }
    gens.into_iter().map(|x| g.label(x).to_string()).collect()
}

fn decompose(rho: &TwoRep) -> twochar_core::Result<Report> {
    let g = rho.group();
    let parts = rho.decompose()?;
    let mut text = format!("{} orbit(s) on {} points\n", parts.len(), rho.n());
    let mut rows = Vec::new();
    let mut sum: Option<TwoClassFunction<CycNumber>> = None;
    for (i, part) in parts.iter().enumerate() {
        let gens = generator_labels(&part.subgroup);
        let orbit: Vec<usize> = part.orbit.iter().map(|j| j + 1).collect();
        text.push_str(&format!(
            "summand {}: H = <{}> (order {}), base point {}, orbit {:?}\n",
            i + 1,
            gens.join(", "),
            part.subgroup.order(),
            part.base_point + 1,
            orbit
        ));
        let cocycle = match &part.cocycle {
            Some(c) => {
                text.push_str(&format!("  omega mod {}: {:?}\n", c.modulus(), c.rows()));
                json!({ "modulus": c.modulus(), "table": c.rows() })
            }
            None => {
                text.push_str("  omega is not torsion; scalars kept exactly\n");
                Value::Null
            }
        };
        let local = &part.local;
        let scalars: Vec<Vec<String>> = (0..local.group().order())
            .map(|a| (0..local.group().order()).map(|b| local.coh(a, b, 0).to_literal()).collect())
            .collect();
        rows.push(json!({
            "subgroup": {
                "generators": gens,
                "members": part.subgroup.members().iter().map(|&x| g.label(x)).collect::<Vec<_>>(),
            },
            "base_point": part.base_point + 1,
            "orbit": orbit,
            "cocycle": cocycle,
            "scalars": scalars,
        }));
        let induced = hkr_induced_2class(&part.subgroup, &local.two_character()?)?;
        sum = Some(match sum {
            Some(s) => s.add(&induced)?,
            None => induced,
        });
    }
    let reconstructed = match sum {
        Some(s) => s == rho.two_character()?,
        None => rho.n() == 0,
    };
    text.push_str(if reconstructed {
        "verification: 2-character equals the sum of the induced summands\n"
    } else {
        "verification FAILED: 2-character differs from the sum of the induced summands\n"
    });
    Ok(Report {
        text,
        json: json!({ "group": g.name(), "n": rho.n(), "summands": rows, "reconstructed": reconstructed }),
        passed: reconstructed,
    })
}

fn invariants_line(what: &str, rho: &TwoRep) -> twochar_core::Result<(String, Value, bool)> {
    Ok(match check_invariants(rho)? {
        Ok(k) => (format!("{what}: {k} invariant checks passed\n"), json!({ "checks": k, "failure": null }), true),
        Err(msg) => (format!("{what}: FAILED: {msg}\n"), json!({ "failure": msg }), false),
    })
}

fn verify_one(h: &Subgroup, rho: &TwoRep) -> twochar_core::Result<Report> {
    let report = verify_induction_theorem(h, rho)?;
    let mut text = format!(
        "{} > <{}>, {}-dimensional 2-representation\n",
        report.group,
        generator_labels(h).join(", "),
        rho.n()
    );
    for (label, lhs, rhs) in &report.classes {
        text.push_str(&format!("  class {label}: {} vs {}\n", lhs.to_literal(), rhs.to_literal()));
    }
    if let Some(label) = &report.class_mismatch {
        text.push_str(&format!("characters differ on the class of {label}\n"));
    }
    if let Some((a, b)) = &report.pair_mismatch {
        text.push_str(&format!("2-characters differ at ({a}, {b})\n"));
    }
    let (local_text, local_json, local_ok) = invariants_line("local rep", rho)?;
    let (ind_text, ind_json, ind_ok) = invariants_line("induced rep", &induce_two_rep(h, rho)?)?;
    text.push_str(&local_text);
    text.push_str(&ind_text);
    let passed = report.passed() && local_ok && ind_ok;
    text.push_str(if passed { "PASS\n" } else { "FAIL\n" });
    let json = json!({
        "induction": serde_json::to_value(&report).expect("reports serialize"),
        "local_invariants": local_json,
        "induced_invariants": ind_json,
        "passed": passed,
    });
    Ok(Report { text, json, passed })
}

fn verify_suite(seed: u64) -> twochar_core::Result<Report> {
    let suite = run_suite(&acceptance_cases()?)?;
    let props = property_checks(seed, PROPERTY_ROUNDS)?;
    let mut text = String::new();
    for case in &suite.cases {
        match &case.failure {
            None => text.push_str(&format!(
                "PASS {} (witness {})\n",
                case.name,
                case.witness.as_deref().unwrap_or("-")
            )),
            Some(msg) => text.push_str(&format!("FAIL {}: {msg}\n", case.name)),
        }
    }
    match &props.failure {
        None => text.push_str(&format!(
            "PASS property checks (seed {seed}, {} checks)\n",
            props.checks
        )),
        Some(msg) => text.push_str(&format!("FAIL property checks (seed {seed}): {msg}\n")),
    }
    let passed = suite.passed && props.passed();
    let failed = suite.cases.iter().filter(|c| !c.passed()).count() + usize::from(!props.passed());
    text.push_str(&format!(
        "{} of {} checks passed\n",
        suite.cases.len() + 1 - failed,
        suite.cases.len() + 1
    ));
    let cases: Vec<Value> = suite
        .cases
        .iter()
        .map(|c| json!({ "name": c.name, "passed": c.passed(), "witness": c.witness, "failure": c.failure }))
        .collect();
    let json = json!({
        "cases": cases,
        "properties": serde_json::to_value(&props).expect("reports serialize"),
        "passed": passed,
    });
    Ok(Report { text, json, passed })
}
