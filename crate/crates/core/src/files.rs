//! Text formats (TOML) for groups, cocycles and 2-representations.
//!
//! Group file, either
//!
//! ```toml
//! builtin = "D4"          # or builtin = "dihedral" with n = 4
//! ```
//!
//! or
//!
//! ```toml
//! degree = 4
//! generators = ["(1 2 3 4)", "(1 3)"]
//! labels = [...]           # optional, one per element in generated order
//! name = "D4 on vertices"  # optional
//! ```
//!
//! Cocycle file: `modulus = M` and `table = [[e(g, h), ...], ...]`.
//!
//! 2-representation file: `group` (the name, informational), `n`, `sigma` (one cycle string per
//! element, points `1..n`), `coh[g][h][j]` and `unit[j]` as cyclotomic
//! literals (strings such as `"z6^5"` or `"-1/2"`, or plain integers).

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cohomology::Cocycle;
use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};
use crate::group::{format_cycles, parse_cycles, FiniteGroup, Subgroup, DEFAULT_GROUP_CAP};
use crate::two_rep::TwoRep;

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::parse(path.display().to_string(), format!("cannot read file: {e}")))
}

fn toml_error(location: &str, text: &str, e: toml::de::Error) -> Error {
    let at = match e.span() {
        Some(span) => {
            let before = &text[..span.start.min(text.len())];
            let line = before.matches('\n').count() + 1;
            let col = before.rsplit('\n').next().map_or(0, |s| s.chars().count()) + 1;
            format!("{location}:{line}:{col}")
        }
        None => location.to_string(),
    };
    Error::parse(at, e.message().trim().to_string())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupFile {
    builtin: Option<String>,
    n: Option<u32>,
    degree: Option<usize>,
    generators: Option<Vec<String>>,
    labels: Option<Vec<String>>,
    name: Option<String>,
}

/// Parses a group definition; `location` names the source in errors.
pub fn parse_group(text: &str, location: &str, cap: Option<usize>) -> Result<FiniteGroup> {
    let file: GroupFile = toml::from_str(text).map_err(|e| toml_error(location, text, e))?;
    let group = match (&file.builtin, file.degree) {
        (Some(name), None) => {
            let name = match (name.as_str(), file.n) {
                ("cyclic", Some(n)) => format!("C{n}"),
                ("dihedral", Some(n)) => format!("D{n}"),
                ("symmetric", Some(n)) => format!("S{n}"),
                ("alternating", Some(n)) => format!("A{n}"),
                ("quaternion", None) => "Q8".to_string(),
                (_, Some(_)) => return Err(Error::parse(location, format!("builtin {name:?} takes no parameter n"))),
                (other, None) => other.to_string(),
            };
            let g = FiniteGroup::builtin(&name).map_err(|e| match e {
                Error::Parameter(m) => Error::parse(format!("{location}: builtin"), m),
                other => other,
            })?;
            if let Some(cap) = cap {
                if g.order() > cap {
                    return Err(Error::SizeCap {
                        what: "group order".into(),
                        size: g.order(),
                        cap,
                    });
                }
            }
            g
        }
        (None, Some(degree)) => {
            let gens = file.generators.as_deref().unwrap_or_default();
            let perms = gens
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    parse_cycles(s, degree).map_err(|e| match e {
                        Error::Parse { message, .. } => {
                            Error::parse(format!("{location}: generators[{i}]"), message)
                        }
                        other => other,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            FiniteGroup::from_permutation_generators(degree, &perms, Some(cap.unwrap_or(DEFAULT_GROUP_CAP)))?
        }
        _ => {
            return Err(Error::parse(
                location,
                "give either `builtin` or `degree` with `generators`",
            ))
        }
    };
    let group = match file.labels {
        Some(labels) => group.with_labels(labels)?,
        None => group,
    };
    Ok(match file.name {
        Some(name) => group.with_name(name),
        None => group,
    })
}

pub fn load_group(path: &Path, cap: Option<usize>) -> Result<FiniteGroup> {
    parse_group(&read(path)?, &path.display().to_string(), cap)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CocycleFile {
    modulus: u32,
    table: Vec<Vec<u32>>,
}

pub fn parse_cocycle(text: &str, location: &str, group: &Arc<FiniteGroup>) -> Result<Cocycle> {
    let file: CocycleFile = toml::from_str(text).map_err(|e| toml_error(location, text, e))?;
    let n = group.order();
    if file.table.len() != n || file.table.iter().any(|r| r.len() != n) {
        return Err(Error::parse(format!("{location}: table"), format!("expected a {n}x{n} table")));
    }
    Cocycle::from_rows(group.clone(), file.modulus, &file.table)
}

pub fn load_cocycle(path: &Path, group: &Arc<FiniteGroup>) -> Result<Cocycle> {
    parse_cocycle(&read(path)?, &path.display().to_string(), group)
}

pub fn write_cocycle(c: &Cocycle) -> String {
    toml::to_string(&CocycleFile {
        modulus: c.modulus(),
        table: c.rows(),
    })
    .expect("cocycle tables serialize")
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Literal {
    Int(i64),
    Text(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TwoRepFile {
    group: String,
    n: usize,
    sigma: Vec<String>,
    coh: Vec<Vec<Vec<Literal>>>,
    unit: Vec<Literal>,
}

fn literal(x: &Literal, location: impl FnOnce() -> String) -> Result<CycNumber> {
    match x {
        Literal::Int(k) => Ok(CycNumber::from_integer(1, *k)),
        Literal::Text(s) => CycNumber::parse_literal(s).map_err(|e| match e {
            Error::Parse { message, .. } => Error::parse(location(), message),
            other => other,
        }),
    }
}

/// Parses and validates a 2-representation of `group`.
///
/// Malformed text is a parse error; well-formed data violating the axioms
/// is reported as [`Error::TwoRep`].
pub fn parse_two_rep(text: &str, location: &str, group: &Arc<FiniteGroup>) -> Result<TwoRep> {
    let file: TwoRepFile = toml::from_str(text).map_err(|e| toml_error(location, text, e))?;
    let order = group.order();
    let n = file.n;
    if file.sigma.len() != order {
        return Err(Error::parse(
            format!("{location}: sigma"),
            format!("expected {order} permutations, found {}", file.sigma.len()),
        ));
    }
    let sigma = file
        .sigma
        .iter()
        .enumerate()
        .map(|(g, s)| {
            parse_cycles(s, n).map_err(|e| match e {
                Error::Parse { message, .. } => Error::parse(format!("{location}: sigma[{g}]"), message),
                other => other,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if file.coh.len() != order
        || file.coh.iter().any(|row| row.len() != order || row.iter().any(|c| c.len() != n))
    {
        return Err(Error::parse(
            format!("{location}: coh"),
            format!("expected a {order}x{order}x{n} table"),
        ));
    }
    if file.unit.len() != n {
        return Err(Error::parse(format!("{location}: unit"), format!("expected {n} entries")));
    }
    let mut coh = Vec::with_capacity(order * order * n);
    for (g, row) in file.coh.iter().enumerate() {
        for (h, cell) in row.iter().enumerate() {
            for (j, x) in cell.iter().enumerate() {
                coh.push(literal(x, || format!("{location}: coh[{g}][{h}][{j}]"))?);
            }
        }
    }
    let unit = file
        .unit
        .iter()
        .enumerate()
        .map(|(j, x)| literal(x, || format!("{location}: unit[{j}]")))
        .collect::<Result<Vec<_>>>()?;
    TwoRep::from_parts(group.clone(), sigma, coh, unit)
}

pub fn load_two_rep(path: &Path, group: &Arc<FiniteGroup>) -> Result<TwoRep> {
    parse_two_rep(&read(path)?, &path.display().to_string(), group)
}

pub fn write_two_rep(rho: &TwoRep) -> String {
    let order = rho.group().order();
    let text = |x: &CycNumber| Literal::Text(x.to_literal());
    let file = TwoRepFile {
        group: rho.group().name().to_string(),
        n: rho.n(),
        sigma: (0..order).map(|g| format_cycles(rho.sigma(g))).collect(),
        coh: (0..order)
            .map(|g| {
                (0..order)
                    .map(|h| (0..rho.n()).map(|j| text(rho.coh(g, h, j))).collect())
                    .collect()
            })
            .collect(),
        unit: rho.unit_table().iter().map(text).collect(),
    };
    toml::to_string(&file).expect("2-representations serialize")
}

/// Splits at commas that are not inside parentheses.
fn split_top_level(spec: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in spec.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&spec[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&spec[start..]);
    parts.into_iter().map(str::trim).filter(|s| !s.is_empty()).collect()
}

/// The subgroup generated by a comma-separated list of element labels.
pub fn parse_subgroup_spec(group: &Arc<FiniteGroup>, spec: &str) -> Result<Subgroup> {
    let gens = split_top_level(spec)
        .into_iter()
        .map(|label| {
            group
                .element_by_label(label)
                .ok_or_else(|| Error::parse("subgroup", format!("no element labelled {label:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Subgroup::generated_by(group, &gens)
}
