//! The built-in verification matrix: for each pair `H ≤ G` and each of the
//! trivial class and one nontrivial class of H²(H, Z/2), check the induction
//! theorem for `ρ_ω` and recover `(H, [ω])` from `ind_H^G ρ_ω`.

use std::sync::Arc;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cohomology::{are_cohomologous, h2_generators, transport_cocycle, Cocycle};
use crate::error::{Error, Result};
use crate::files::parse_subgroup_spec;
use crate::group::{FiniteGroup, Subgroup};
use crate::two_rep::{induce_two_rep, verify_induction_theorem, InductionReport, TwoRep};

/// `(group, subgroup generators)` pairs of the built-in matrix.
pub const PAIRS: &[(&str, &str)] = &[
    ("S3", "(1 2)"),
    ("S3", "(1 2 3)"),
    ("D4", "s"),
    ("D4", "rs"),
    ("Q8", "-1"),
    ("C2xC2", "(1,0)"),
    ("S4", "(1 2), (1 2 3)"),
];

#[derive(Clone, Debug)]
pub struct SuiteCase {
    pub name: String,
    pub subgroup: Subgroup,
    pub cocycle: Cocycle,
}

impl SuiteCase {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.subgroup.parent()
    }
}

/// Cases for one pair: the zero cocycle mod 2, and the first generator of
/// H²(H, Z/2) when that group is nonzero.
pub fn cases_for(group: &Arc<FiniteGroup>, spec: &str) -> Result<Vec<SuiteCase>> {
    let subgroup = parse_subgroup_spec(group, spec)?;
    let h = Arc::new(subgroup.extract());
    let mut out = vec![SuiteCase {
        name: format!("{} > <{spec}>, trivial", group.name()),
        subgroup: subgroup.clone(),
        cocycle: Cocycle::zero(h.clone(), 2),
    }];
    if let Some((order, c)) = h2_generators(&h, 2)?.into_iter().next() {
        out.push(SuiteCase {
            name: format!("{} > <{spec}>, class of order {order}", group.name()),
            subgroup,
            cocycle: c,
        });
    }
    Ok(out)
}

pub fn acceptance_cases() -> Result<Vec<SuiteCase>> {
    let mut out = Vec::new();
    for (g, spec) in PAIRS {
        let group = Arc::new(FiniteGroup::builtin(g)?);
        out.extend(cases_for(&group, spec)?);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub name: String,
    pub induction: InductionReport,
    /// Conjugating element relating `H` to the recovered stabilizer.
    pub witness: Option<String>,
    pub round_trip: bool,
    pub failure: Option<String>,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Recovers `(H′, ω′)` from `ind_H^G ρ_ω` and checks that `H′ = sHs⁻¹` and
/// that the transported `ω` is cohomologous to `ω′`. Returns the witness.
pub fn decomposition_round_trip(h: &Subgroup, omega: &Cocycle) -> Result<std::result::Result<usize, String>> {
    let g = h.parent();
    let induced = induce_two_rep(h, &TwoRep::from_cocycle(omega))?;
    let parts = induced.decompose()?;
    let [part] = &parts[..] else {
        return Ok(Err(format!("expected one orbit, found {}", parts.len())));
    };
    let Some(s) = g.conjugate_subgroup_witness(h, &part.subgroup) else {
        return Ok(Err("recovered stabilizer is not conjugate to H".into()));
    };
    let Some(found) = &part.cocycle else {
        return Ok(Err("recovered scalars are not roots of unity".into()));
    };
    let (k, moved) = transport_cocycle(h, omega, s)?;
    if k != part.subgroup {
        return Ok(Err("transported subgroup differs from the stabilizer".into()));
    }
    let m = moved.modulus().lcm(&found.modulus());
    if are_cohomologous(&moved.lift_modulus(m)?, &found.lift_modulus(m)?)?.is_none() {
        return Ok(Err("recovered cocycle is not cohomologous to the transported one".into()));
    }
    Ok(Ok(s))
}

pub fn run_case(case: &SuiteCase) -> Result<CaseReport> {
    let g = case.group();
    let rho = TwoRep::from_cocycle(&case.cocycle);
    let induction = verify_induction_theorem(&case.subgroup, &rho)?;
    let round = decomposition_round_trip(&case.subgroup, &case.cocycle)?;
    let failure = if let Some(label) = &induction.class_mismatch {
        Some(format!("characters differ on the class of {label}"))
    } else if let Some((a, b)) = &induction.pair_mismatch {
        Some(format!("2-characters differ at ({a}, {b})"))
    } else {
        round.as_ref().err().cloned()
    };
    Ok(CaseReport {
        name: case.name.clone(),
        induction,
        witness: round.as_ref().ok().map(|&s| g.label(s).to_string()),
        round_trip: round.is_ok(),
        failure,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub cases: Vec<CaseReport>,
    pub passed: bool,
}

/// Runs every case on its own thread; reports keep the case order.
pub fn run_suite(cases: &[SuiteCase]) -> Result<SuiteReport> {
    let results: Vec<Result<CaseReport>> = std::thread::scope(|scope| {
        let handles: Vec<_> = cases.iter().map(|c| scope.spawn(move || run_case(c))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(Error::Inconsistent("suite worker panicked".into()))))
            .collect()
    });
    let cases = results.into_iter().collect::<Result<Vec<_>>>()?;
    let passed = cases.iter().all(CaseReport::passed);
    Ok(SuiteReport { cases, passed })
}

/// Groups sampled by [`property_checks`].
pub const PROPERTY_GROUPS: &[&str] = &["C4", "C2xC2", "S3", "D4", "Q8", "A4"];

#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub seed: u64,
    pub rounds: usize,
    pub checks: usize,
    /// First counterexample, if any.
    pub failure: Option<String>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// A random 2-representation: a direct sum of one or two induced `ρ_ω`,
/// each `ω` a random class mod 2 plus a random coboundary mod 4.
pub fn random_two_rep(rng: &mut ChaCha8Rng, group: &Arc<FiniteGroup>) -> Result<TwoRep> {
    let subgroups = group.all_subgroups();
    let mut out: Option<TwoRep> = None;
    for _ in 0..rng.gen_range(1..=2) {
        let h = &subgroups[rng.gen_range(0..subgroups.len())];
        let hg = Arc::new(h.extract());
        let mut omega = Cocycle::zero(hg.clone(), 4);
        for (_, c) in h2_generators(&hg, 2)? {
            if rng.gen_bool(0.5) {
                omega = omega.add(&c.lift_modulus(4)?)?;
            }
        }
        let b: Vec<u32> = (0..hg.order()).map(|_| rng.gen_range(0..4)).collect();
        omega = omega.add(&Cocycle::coboundary(hg, 4, &b)?)?;
        let part = induce_two_rep(h, &TwoRep::from_cocycle(&omega))?;
        out = Some(match out {
            Some(rho) => rho.direct_sum(&part)?,
            None => part,
        });
    }
    Ok(out.expect("at least one summand"))
}

/// Invariants of one 2-representation; returns the number of checks run or
/// the first failure.
pub fn check_invariants(rho: &TwoRep) -> Result<std::result::Result<usize, String>> {
    let g = rho.group();
    if let Some(v) = rho.check() {
        return Ok(Err(format!("axioms: {v}")));
    }
    if let Err(e) = rho.trace_rep().check_functor() {
        return Ok(Err(format!("trace is not a functor: {e}")));
    }
    let chi = rho.two_character()?;
    if let Err(e) = chi.check_invariance() {
        return Ok(Err(format!("2-character: {e}")));
    }
    let mut checks = 3;
    for (a, b) in g.commuting_pairs() {
        let eta = rho.canonical_eta(a, b)?;
        if Some(&rho.joint_trace(a, b, &eta)?) != chi.get(a, b) {
            return Ok(Err(format!(
                "joint trace differs from the 2-character at ({}, {})",
                g.label(a),
                g.label(b)
            )));
        }
        checks += 1;
    }
    let parts = rho.decompose()?;
    if parts.iter().map(|p| p.orbit.len()).sum::<usize>() != rho.n() {
        return Ok(Err("orbits do not cover the basis".into()));
    }
    Ok(Ok(checks + 1))
}

/// Runs `rounds` random 2-representations per group in
/// [`PROPERTY_GROUPS`] through the structural invariants.
pub fn property_checks(seed: u64, rounds: usize) -> Result<PropertyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = 0;
    for name in PROPERTY_GROUPS {
        let group = Arc::new(FiniteGroup::builtin(name)?);
        for round in 0..rounds {
            let rho = random_two_rep(&mut rng, &group)?;
            match check_invariants(&rho)? {
                Ok(k) => checks += k,
                Err(msg) => {
                    return Ok(PropertyReport {
                        seed,
                        rounds,
                        checks,
                        failure: Some(format!("{name}, round {round}: {msg}")),
                    })
                }
            }
        }
    }
    Ok(PropertyReport {
        seed,
        rounds,
        checks,
        failure: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_shape() {
        let cases = acceptance_cases().unwrap();
        let names: Vec<&str> = cases.iter().map(|c| c.name.as_str()).collect();
        // H²(C3, Z/2) vanishes, every other subgroup has a nontrivial class
        assert_eq!(cases.len(), 13, "{names:?}");
        assert!(cases.iter().all(|c| c.cocycle.check().is_none()));
    }

    #[test]
    fn small_cases_pass() {
        let g = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let report = run_suite(&cases_for(&g, "(1 2)").unwrap()).unwrap();
        assert!(report.passed, "{report:?}");
        assert_eq!(report.cases[0].witness.as_deref(), Some(g.label(g.identity())));
    }

    #[test]
    fn seeded_properties_pass_and_repeat() {
        let a = property_checks(7, 2).unwrap();
        assert!(a.passed(), "{a:?}");
        assert_eq!(a.checks, property_checks(7, 2).unwrap().checks);
    }
}
