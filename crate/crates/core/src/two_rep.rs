//! 2-representations of a finite group on the 2-vector space `[n]`.
//!
//! By the shape lemma for equivalences in 2Vect, `ρ(g)` is a permutation
//! pattern of lines: column `j` goes to row `σ_g(j)` through a line
//! `L_g(j)`. After fixing a basis vector in every line, all remaining data is
//! scalar:
//!
//! * `c_{g,h}(j)` is the coordinate of `φ_{g,h}: ρ(g)ρ(h) ⇒ ρ(gh)` at column
//!   `j`. The composite `ρ(g)ρ(h)` sends `j` to `σ_g(σ_h(j))` through
//!   `L_g(σ_h j) ⊗ L_h(j)`.
//! * `d(j)` is the coordinate of `φ₁: ρ(1) ⇒ id` at column `j`.
//!
//! A 2-morphism between two composites with the same pattern is read at the
//! column of the source, and horizontal composition `φ ∘₀ ρ(k)` evaluates `φ`
//! at `σ_k(j)`. Reading the associativity axiom
//! `φ_{gh,k}(φ_{g,h} ∘ ρ(k)) = φ_{g,hk}(ρ(g) ∘ φ_{h,k})` at column `j` gives
//!
//! ```text
//! c_{gh,k}(j) · c_{g,h}(σ_k j) = c_{g,hk}(j) · c_{h,k}(j)
//! ```
//!
//! and the unit axiom `φ_{1,g} = φ₁ ∘ ρ(g)` (with its mirror) gives
//! `c_{1,g}(j) = d(σ_g j)` and `c_{g,1}(j) = d(j)`.

use std::sync::Arc;

use num_integer::Integer;
use serde::Serialize;

use crate::cohomology::Cocycle;
use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result, TwoRepViolation};
use crate::group::{compose, format_cycles, FiniteGroup, Permutation, Subgroup};
use crate::groupoid::{groupoid_map_from_inclusion, FiniteGroupoid};
use crate::grpd_rep::{hkr_induced_2class, ClassFunction, GroupoidRep, TwoClassFunction};
use crate::matrix::Matrix;

#[derive(Clone, Debug)]
pub struct TwoRep {
    group: Arc<FiniteGroup>,
    n: usize,
    /// Common cyclotomic level of every scalar.
    level: u32,
    sigma: Vec<Permutation>,
    /// `c_{g,h}(j)` at `(g·|G| + h)·n + j`.
    coh: Vec<CycNumber>,
    unit: Vec<CycNumber>,
}

impl PartialEq for TwoRep {
    fn eq(&self, other: &Self) -> bool {
        *self.group == *other.group
            && self.n == other.n
            && self.sigma == other.sigma
            && self.coh == other.coh
            && self.unit == other.unit
    }
}

/// First violated axiom, or `None` for a valid 2-representation.
///
/// `coh` is indexed as `(g·|G| + h)·n + j`. Scalars must share one level.
pub fn check_two_rep(
    group: &FiniteGroup,
    sigma: &[Permutation],
    coh: &[CycNumber],
    unit: &[CycNumber],
) -> Option<TwoRepViolation> {
    let order = group.order();
    let n = unit.len();
    for (g, p) in sigma.iter().enumerate() {
        let mut seen = vec![false; n];
        if p.len() != n || p.iter().any(|&x| x >= n || std::mem::replace(&mut seen[x], true)) {
            return Some(TwoRepViolation::NotPermutation { g });
        }
    }
    for g in 0..order {
        for h in 0..order {
            let gh = &sigma[group.mul(g, h)];
            if let Some(point) = (0..n).find(|&j| sigma[g][sigma[h][j]] != gh[j]) {
                return Some(TwoRepViolation::NotHomomorphism { g, h, point });
            }
        }
    }
    if let Some(i) = coh.iter().position(CycNumber::is_zero) {
        return Some(TwoRepViolation::ZeroCoherence {
            g: i / n / order,
            h: i / n % order,
            j: i % n,
        });
    }
    if let Some(j) = unit.iter().position(CycNumber::is_zero) {
        return Some(TwoRepViolation::ZeroUnit { j });
    }
    let c = |g: usize, h: usize, j: usize| &coh[(g * order + h) * n + j];
    let e = group.identity();
    for g in 0..order {
        for j in 0..n {
            if *c(e, g, j) != unit[sigma[g][j]] {
                return Some(TwoRepViolation::LeftUnit { g, j });
            }
            if *c(g, e, j) != unit[j] {
                return Some(TwoRepViolation::RightUnit { g, j });
            }
        }
    }
    for g in 0..order {
        for h in 0..order {
            let gh = group.mul(g, h);
            for k in 0..order {
                let hk = group.mul(h, k);
                for j in 0..n {
                    let lhs = c(gh, k, j) * c(g, h, sigma[k][j]);
                    let rhs = c(g, hk, j) * c(h, k, j);
                    if lhs != rhs {
                        return Some(TwoRepViolation::Associativity { g, h, k, j });
                    }
                }
            }
        }
    }
    None
}

fn common_level<'a>(xs: impl IntoIterator<Item = &'a CycNumber>) -> u32 {
    xs.into_iter().fold(1u32, |acc, x| acc.lcm(&x.level()))
}

fn embed_all(xs: Vec<CycNumber>, level: u32) -> Vec<CycNumber> {
    xs.into_iter()
        .map(|x| x.embed(level).expect("level divides the common multiple"))
        .collect()
}

fn inv(x: &CycNumber) -> CycNumber {
    x.checked_inv().expect("coherence scalars are nonzero")
}

impl TwoRep {
    /// Builds and validates a 2-representation. `sigma[g]` lists the images
    /// of the points `0..n`; scalars may have different levels and are
    /// embedded in a common field.
    pub fn from_parts(
        group: Arc<FiniteGroup>,
        sigma: Vec<Permutation>,
        coh: Vec<CycNumber>,
        unit: Vec<CycNumber>,
    ) -> Result<Self> {
        let order = group.order();
        let n = unit.len();
        if sigma.len() != order {
            return Err(Error::Shape(format!("{} permutations for a group of order {order}", sigma.len())));
        }
        if coh.len() != order * order * n {
            return Err(Error::Shape(format!(
                "{} coherence scalars, expected {}",
                coh.len(),
                order * order * n
            )));
        }
        let level = common_level(coh.iter().chain(&unit));
        let rep = TwoRep {
            group,
            n,
            level,
            sigma,
            coh: embed_all(coh, level),
            unit: embed_all(unit, level),
        };
        match rep.check() {
            Some(v) => Err(Error::TwoRep(v)),
            None => Ok(rep),
        }
    }

    /// `σ ≡ id`, `c ≡ 1`, `d ≡ 1` on `[n]`.
    pub fn trivial(group: Arc<FiniteGroup>, n: usize) -> Self {
        let order = group.order();
        TwoRep {
            n,
            level: 1,
            sigma: vec![(0..n).collect(); order],
            coh: vec![CycNumber::one(1); order * order * n],
            unit: vec![CycNumber::one(1); n],
            group,
        }
    }

    /// The one-dimensional 2-representation `ρ_c`: `c_{g,h}(0) = ζ_M^{e(g,h)}`
    /// and `d(0) = ζ_M^{e(1,1)}`.
    pub fn from_cocycle(c: &Cocycle) -> Self {
        let g = c.group().clone();
        let order = g.order();
        let mut coh = Vec::with_capacity(order * order);
        for a in 0..order {
            for b in 0..order {
                coh.push(c.scalar(a, b));
            }
        }
        let e = g.identity();
        TwoRep {
            n: 1,
            level: c.modulus(),
            sigma: vec![vec![0]; order],
            unit: vec![c.scalar(e, e)],
            coh,
            group: g,
        }
    }

    /// One-dimensional 2-representation from a multiplicative 2-cocycle
    /// `scalars[g·|G| + h]` with arbitrary nonzero values.
    pub fn from_scalars(group: Arc<FiniteGroup>, scalars: Vec<CycNumber>) -> Result<Self> {
        let order = group.order();
        if scalars.len() != order * order {
            return Err(Error::Shape("scalar table must cover G x G".into()));
        }
        let e = group.identity();
        let unit = vec![scalars[e * order + e].clone()];
        Self::from_parts(group, vec![vec![0]; order], scalars, unit)
    }

    pub fn check(&self) -> Option<TwoRepViolation> {
        check_two_rep(&self.group, &self.sigma, &self.coh, &self.unit)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn sigma(&self, g: usize) -> &Permutation {
        &self.sigma[g]
    }

    pub fn coh(&self, g: usize, h: usize, j: usize) -> &CycNumber {
        &self.coh[(g * self.group.order() + h) * self.n + j]
    }

    pub fn unit(&self, j: usize) -> &CycNumber {
        &self.unit[j]
    }

    pub fn coh_table(&self) -> &[CycNumber] {
        &self.coh
    }

    pub fn unit_table(&self) -> &[CycNumber] {
        &self.unit
    }

    /// Dimension pattern of the 2-matrix `ρ(g)`.
    pub fn dim_matrix(&self, g: usize) -> DimMatrix {
        let mut data = vec![0; self.n * self.n];
        for j in 0..self.n {
            data[self.sigma[g][j] * self.n + j] = 1;
        }
        DimMatrix {
            rows: self.n,
            cols: self.n,
            data,
        }
    }

    pub fn fixed_points(&self, g: usize) -> Vec<usize> {
        (0..self.n).filter(|&j| self.sigma[g][j] == j).collect()
    }

    /// `𝕋r(ρ(g)) = ⊕_{σ_g(j) = j} L_g(j)`.
    pub fn categorical_trace(&self, g: usize) -> TraceSpace {
        TraceSpace {
            g,
            basis: self.fixed_points(g),
        }
    }

    /// Coordinate at column `l` of `u = φ⁻¹_{h,h⁻¹} φ₁⁻¹ : 1 ⇒ ρ(h)ρ(h⁻¹)`.
    fn unit_insertion(&self, h: usize, l: usize) -> CycNumber {
        let hi = self.group.inv(h);
        &inv(self.coh(h, hi, l)) * &inv(&self.unit[l])
    }

    /// Coordinate at column `l` of
    /// `φ_{h,g,h⁻¹} = φ_{hg,h⁻¹} ∘₁ (φ_{h,g} ∘₀ ρ(h⁻¹)) : ρ(h)ρ(g)ρ(h⁻¹) ⇒ ρ(hgh⁻¹)`.
    fn conjugation_coherence(&self, h: usize, g: usize, l: usize) -> CycNumber {
        let hi = self.group.inv(h);
        let whiskered = self.coh(h, g, self.sigma[hi][l]);
        self.coh(self.group.mul(h, g), hi, l) * whiskered
    }

    /// `ψ(h): 𝕋r(ρ(g)) → 𝕋r(ρ(hgh⁻¹))` in the fixed-point bases.
    ///
    /// A basis vector `e_j` is first placed in `ρ(h) ∘ ρ(g) ∘ ρ(h⁻¹)` by
    /// inserting `u` at the column `l = σ_h(j)` and whiskering with `ρ(h)`
    /// and `ρ(h⁻¹)` (which only moves the column), and is then carried to
    /// `ρ(hgh⁻¹)` by `φ_{h,g,h⁻¹}`.
    pub fn psi(&self, g: usize, h: usize) -> Matrix<CycNumber> {
        let source = self.fixed_points(g);
        let target = self.fixed_points(self.group.conj(h, g));
        let mut m = Matrix::zeros(target.len(), source.len(), &CycNumber::zero(self.level));
        for (col, &j) in source.iter().enumerate() {
            let l = self.sigma[h][j];
            let inserted = self.unit_insertion(h, l);
            let scalar = &self.conjugation_coherence(h, g, l) * &inserted;
            let row = target.binary_search(&l).expect("σ_h maps Fix(g) onto Fix(hgh⁻¹)");
            m.set(row, col, scalar);
        }
        m
    }

    /// The representation `g ↦ 𝕋r(ρ(g))`, `(g, h) ↦ ψ(h)` of Λ(G).
    pub fn trace_rep(&self) -> GroupoidRep<CycNumber> {
        self.trace_rep_on(&Arc::new(FiniteGroupoid::inertia(&self.group)))
    }

    /// As [`TwoRep::trace_rep`], on a prebuilt `Λ(G)`.
    pub fn trace_rep_on(&self, inertia: &Arc<FiniteGroupoid>) -> GroupoidRep<CycNumber> {
        let order = self.group.order();
        let dims = (0..order).map(|g| self.fixed_points(g).len()).collect();
        let mats = (0..order * order)
            .map(|f| self.psi(f / order, f % order))
            .collect();
        GroupoidRep::new(inertia.clone(), dims, mats, &CycNumber::zero(self.level))
            .expect("ψ has the shapes of the trace spaces")
    }

    /// `χ_ρ(g, h) = tr ψ(h)` on `𝕋r(ρ(g))` for commuting `g, h`.
    pub fn two_character(&self) -> Result<TwoClassFunction<CycNumber>> {
        let zero = CycNumber::zero(self.level);
        TwoClassFunction::from_fn(self.group.clone(), &zero, |g, h| {
            self.psi(g, h).trace().expect("ψ(h) is an endomorphism when gh = hg")
        })
    }

    /// The 2-isomorphism `φ⁻¹_{g,h} φ_{h,g} : ρ(h)ρ(g) ⇒ ρ(g)ρ(h)`, columnwise.
    pub fn canonical_eta(&self, g: usize, h: usize) -> Result<Vec<CycNumber>> {
        if !self.group.commute(g, h) {
            return Err(Error::Parameter(format!("elements {g} and {h} do not commute")));
        }
        Ok((0..self.n)
            .map(|j| self.coh(h, g, j) * &inv(self.coh(g, h, j)))
            .collect())
    }

    /// Joint trace `τ(ρ(g), ρ(h))` for a commutativity 2-isomorphism
    /// `η: ρ(h)ρ(g) ⇒ ρ(g)ρ(h)` given by its scalars at each column.
    ///
    /// This is the trace of
    /// `𝕋r(A) → 𝕋r(BAC) → 𝕋r(ABC) → 𝕋r(A)` with `A = ρ(g)`, `B = ρ(h)`,
    /// `C = ρ(h⁻¹)`: insert `u`, apply `η ∘₀ 1_C`, then remove `u` with
    /// `1_A ∘₀ u⁻¹`.
    pub fn joint_trace(&self, g: usize, h: usize, eta: &[CycNumber]) -> Result<CycNumber> {
        if eta.len() != self.n {
            return Err(Error::Shape(format!("η has {} columns, expected {}", eta.len(), self.n)));
        }
        if let Some(j) = eta.iter().position(CycNumber::is_zero) {
            return Err(Error::Parameter(format!("η vanishes at column {j}")));
        }
        if compose(&self.sigma[g], &self.sigma[h]) != compose(&self.sigma[h], &self.sigma[g]) {
            return Err(Error::Parameter(format!("ρ({g}) and ρ({h}) do not commute")));
        }
        let level = common_level(eta).lcm(&self.level);
        let eta = embed_all(eta.to_vec(), level);
        let lift = |x: CycNumber| x.embed(level).expect("level divides the common multiple");
        let hi = self.group.inv(h);
        let mut acc = CycNumber::zero(level);
        for j in self.fixed_points(g) {
            let l = self.sigma[h][j];
            let inserted = lift(self.unit_insertion(h, l));
            let swapped = &inserted * &eta[self.sigma[hi][l]];
            let removed = &swapped * &lift(self.coh(h, hi, l) * &self.unit[l]);
            if l == j {
                acc = &acc + &removed;
            }
        }
        Ok(acc)
    }

    /// Block sum on `[n + n′]`.
    pub fn direct_sum(&self, other: &TwoRep) -> Result<TwoRep> {
        if *self.group != *other.group {
            return Err(Error::Parameter("direct sum of 2-representations of different groups".into()));
        }
        let level = self.level.lcm(&other.level);
        let order = self.group.order();
        let (n1, n2) = (self.n, other.n);
        let sigma = (0..order)
            .map(|g| {
                let mut p = self.sigma[g].clone();
                p.extend(other.sigma[g].iter().map(|&x| x + n1));
                p
            })
            .collect();
        let mut coh = Vec::with_capacity(order * order * (n1 + n2));
        for i in 0..order * order {
            coh.extend_from_slice(&self.coh[i * n1..(i + 1) * n1]);
            coh.extend_from_slice(&other.coh[i * n2..(i + 1) * n2]);
        }
        let unit = self.unit.iter().chain(&other.unit).cloned().collect();
        Ok(TwoRep {
            group: self.group.clone(),
            n: n1 + n2,
            level,
            sigma,
            coh: embed_all(coh, level),
            unit: embed_all(unit, level),
        })
    }

    /// The orbit decomposition `ρ ≅ ⊕ ind_{H_i}^G ρ_{ω_i}`.
    ///
    /// For each orbit of σ the base point `j_i` is its least point, `H_i` is
    /// its stabilizer and `ω_i(h, h′) = c_{h,h′}(j_i)`. The result is checked
    /// by comparing `χ_ρ` with the sum of the 2-characters of the rebuilt
    /// inductions.
    pub fn decompose(&self) -> Result<Vec<Summand>> {
        let g = &self.group;
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for base in 0..self.n {
            if seen[base] {
                continue;
            }
            let mut orbit: Vec<usize> = (0..g.order()).map(|x| self.sigma[x][base]).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &p in &orbit {
                seen[p] = true;
            }
            let stab: Vec<usize> = (0..g.order()).filter(|&x| self.sigma[x][base] == base).collect();
            let subgroup = Subgroup::new(g, &stab)?;
            let k = stab.len();
            let mut scalars = Vec::with_capacity(k * k);
            for &a in &stab {
                for &b in &stab {
                    scalars.push(self.coh(a, b, base).clone());
                }
            }
            let h_group = Arc::new(subgroup.extract());
            let local = TwoRep::from_scalars(h_group.clone(), scalars.clone()).map_err(|e| {
                Error::Inconsistent(format!("scalars at base point {base} are not a 2-cocycle: {e}"))
            })?;
            let cocycle = exponent_cocycle(&h_group, &scalars, self.level)?;
            out.push(Summand {
                subgroup,
                base_point: base,
                orbit,
                local,
                cocycle,
            });
        }
        let mut total: Option<TwoClassFunction<CycNumber>> = None;
        for s in &out {
            let chi = induce_two_rep(&s.subgroup, &s.local)?.two_character()?;
            total = Some(match total {
                None => chi,
                Some(t) => t.add(&chi)?,
            });
        }
        let want = self.two_character()?;
        let got = match total {
            Some(t) => t,
            None => TwoClassFunction::from_fn(g.clone(), &CycNumber::zero(1), |_, _| CycNumber::zero(1))?,
        };
        if got != want {
            return Err(Error::Inconsistent(
                "2-character of the decomposition differs from the input".into(),
            ));
        }
        Ok(out)
    }
}

/// Exponent table of a scalar cocycle whose values are all roots of unity in
/// `Q(ζ_L)`; these are the `L′`-th roots with `L′ = lcm(2, L)`.
fn exponent_cocycle(group: &Arc<FiniteGroup>, scalars: &[CycNumber], level: u32) -> Result<Option<Cocycle>> {
    let modulus = level.lcm(&2);
    let mut table = Vec::with_capacity(scalars.len());
    for x in scalars {
        match x.embed(modulus)?.root_exponent() {
            Some(k) => table.push(k),
            None => return Ok(None),
        }
    }
    Cocycle::new(group.clone(), modulus, table).map(Some)
}

/// One orbit of a 2-representation.
#[derive(Clone, Debug)]
pub struct Summand {
    /// Stabilizer of the base point.
    pub subgroup: Subgroup,
    pub base_point: usize,
    pub orbit: Vec<usize>,
    /// `ρ_{ω}` on `subgroup.extract()` with the exact scalars.
    pub local: TwoRep,
    /// Exponent form of ω; `None` when some scalar is not a root of unity.
    pub cocycle: Option<Cocycle>,
}

impl Summand {
    pub fn is_torsion(&self) -> bool {
        self.cocycle.is_some()
    }
}

/// Index of the coset `r_i H` containing each element, plus the
/// decomposition `g r_i = r_{i′} h`.
struct Cosets {
    reps: Vec<usize>,
    coset_of: Vec<usize>,
}

impl Cosets {
    fn new(h: &Subgroup, reps: Vec<usize>) -> Result<Self> {
        let g = h.parent();
        if reps.len() * h.order() != g.order() {
            return Err(Error::Parameter("wrong number of coset representatives".into()));
        }
        let mut coset_of = vec![usize::MAX; g.order()];
        for (i, &r) in reps.iter().enumerate() {
            for &m in h.members() {
                let x = g.mul(r, m);
                if coset_of[x] != usize::MAX {
                    return Err(Error::Parameter(format!(
                        "representatives {} and {} lie in the same coset",
                        reps[coset_of[x]], r
                    )));
                }
                coset_of[x] = i;
            }
        }
        Ok(Cosets { reps, coset_of })
    }

    /// `(i′, position of h in H)` with `g r_i = r_{i′} h`.
    fn act(&self, h: &Subgroup, g: usize, i: usize) -> (usize, usize) {
        let parent = h.parent();
        let x = parent.mul(g, self.reps[i]);
        let j = self.coset_of[x];
        let hh = parent.mul(parent.inv(self.reps[j]), x);
        (j, h.position(hh).expect("r_j⁻¹ g r_i lies in H"))
    }
}

/// `ind_H^G ρ` with the default transversal (identity first).
pub fn induce_two_rep(h: &Subgroup, rho: &TwoRep) -> Result<TwoRep> {
    let reps = h.parent().left_coset_representatives(h)?;
    induce_two_rep_with(h, rho, &reps)
}

/// `ind_H^G ρ` on `[m] × [n]`, point `(i, a)` stored as `i·n + a`.
///
/// If `g r_i = r_{i′} h` then `σ(g)(i, a) = (i′, σ_ρ(h)(a))`. For
/// `g₂ r_k = r_j h₂` and `g₁ r_j = r_i h₁`, the coherence scalar is
/// `c_{g₁,g₂}(k, a) = c^ρ_{h₁,h₂}(a)`: the composite `ρ(h₁) ∘ ρ(h₂)` sits in
/// the block `(i, k)` and is carried to `ρ(h₁h₂)` by `φ_{h₁,h₂}`.
pub fn induce_two_rep_with(h: &Subgroup, rho: &TwoRep, reps: &[usize]) -> Result<TwoRep> {
    if rho.group.order() != h.order() || *rho.group != h.extract() {
        return Err(Error::Parameter("2-representation is not defined on the subgroup".into()));
    }
    let g = h.parent().clone();
    let cosets = Cosets::new(h, reps.to_vec())?;
    let (order, m, n) = (g.order(), reps.len(), rho.n);
    let size = m * n;
    let act: Vec<(usize, usize)> = (0..order)
        .flat_map(|x| (0..m).map(move |i| (x, i)))
        .map(|(x, i)| cosets.act(h, x, i))
        .collect();
    let sigma = (0..order)
        .map(|x| {
            let mut p = vec![0; size];
            for i in 0..m {
                let (j, hh) = act[x * m + i];
                for a in 0..n {
                    p[i * n + a] = j * n + rho.sigma[hh][a];
                }
            }
            p
        })
        .collect();
    let mut coh = Vec::with_capacity(order * order * size);
    for g1 in 0..order {
        for g2 in 0..order {
            for k in 0..m {
                let (j, h2) = act[g2 * m + k];
                let (_, h1) = act[g1 * m + j];
                for a in 0..n {
                    coh.push(rho.coh(h1, h2, a).clone());
                }
            }
        }
    }
    let unit = (0..m).flat_map(|_| rho.unit.iter().cloned()).collect();
    let out = TwoRep {
        group: g,
        n: size,
        level: rho.level,
        sigma,
        coh,
        unit,
    };
    match out.check() {
        Some(v) => Err(Error::Inconsistent(format!("induced 2-representation is invalid: {v}"))),
        None => Ok(out),
    }
}

/// Checks `φ(g)φ(h)·c(g, h) = φ(gh)` for all pairs; returns the first
/// failing pair.
pub fn check_projective_rep(c: &Cocycle, mats: &[Matrix<CycNumber>]) -> Result<Option<(usize, usize)>> {
    let g = c.group();
    let order = g.order();
    if mats.len() != order {
        return Err(Error::Shape(format!("{} matrices for a group of order {order}", mats.len())));
    }
    let size = mats[0].rows();
    if mats.iter().any(|m| m.rows() != size || m.cols() != size) {
        return Err(Error::Shape("matrices must be square of a common size".into()));
    }
    let level = mats
        .iter()
        .flat_map(|m| (0..size * size).map(move |i| m.get(i / size, i % size)))
        .fold(c.modulus(), |acc, x| acc.lcm(&x.level()));
    let lifted: Vec<Matrix<CycNumber>> = mats
        .iter()
        .map(|m| {
            let mut out = Matrix::zeros(size, size, &CycNumber::zero(level));
            for i in 0..size {
                for j in 0..size {
                    out.set(i, j, m.get(i, j).embed(level).expect("level divides"));
                }
            }
            out
        })
        .collect();
    for a in 0..order {
        for b in 0..order {
            let scalar = c.scalar(a, b).embed(level)?;
            let lhs = lifted[a].mul(&lifted[b])?.scale(&scalar);
            if lhs != lifted[g.mul(a, b)] {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

/// Outcome of comparing `𝕋r(ind ρ)` with `ind 𝕋r(ρ)`.
#[derive(Clone, Debug, Serialize)]
pub struct InductionReport {
    pub group: String,
    pub subgroup: String,
    /// `(class representative label, lhs, rhs)` for each class of Λ(G).
    pub classes: Vec<(String, CycNumber, CycNumber)>,
    /// First class of Λ(G) where the characters differ.
    pub class_mismatch: Option<String>,
    /// First commuting pair where `χ_{ind ρ}` and the averaged sum differ.
    pub pair_mismatch: Option<(String, String)>,
}

impl InductionReport {
    pub fn passed(&self) -> bool {
        self.class_mismatch.is_none() && self.pair_mismatch.is_none()
    }
}

/// Compares the character of `𝕋r(ind_H^G ρ)` with that of the groupoid
/// induction of `𝕋r(ρ)` along `Λ(H) → Λ(G)`, and `χ_{ind ρ}` with the
/// averaged conjugation sum of `χ_ρ`.
pub fn verify_induction_theorem(h: &Subgroup, rho: &TwoRep) -> Result<InductionReport> {
    let g = h.parent();
    let inertia = Arc::new(FiniteGroupoid::inertia(g));
    let induced = induce_two_rep(h, rho)?;
    let lhs = induced.trace_rep_on(&inertia).character();
    let alpha = groupoid_map_from_inclusion(&inertia, h);
    let local = rho.trace_rep_on(&alpha.source);
    let rhs = GroupoidRep::induce(&alpha, &local)?.character();
    let classes = class_rows(&lhs, &rhs);
    let class_mismatch = classes
        .iter()
        .find(|(_, a, b)| a != b)
        .map(|(label, _, _)| label.clone());
    let chi = induced.two_character()?;
    let hkr = hkr_induced_2class(h, &rho.two_character()?)?;
    let pair_mismatch = g
        .commuting_pairs()
        .into_iter()
        .find(|&(a, b)| chi.get(a, b) != hkr.get(a, b))
        .map(|(a, b)| (g.label(a).to_string(), g.label(b).to_string()));
    Ok(InductionReport {
        group: g.name().to_string(),
        subgroup: format!("{:?}", h.members().iter().map(|&x| g.label(x)).collect::<Vec<_>>()),
        classes,
        class_mismatch,
        pair_mismatch,
    })
}

fn class_rows(lhs: &ClassFunction<CycNumber>, rhs: &ClassFunction<CycNumber>) -> Vec<(String, CycNumber, CycNumber)> {
    let gpd = lhs.groupoid();
    lhs.representatives()
        .iter()
        .zip(lhs.values().iter().zip(rhs.values()))
        .map(|(&u, (a, b))| (gpd.morphism_label(u).to_string(), a.clone(), b.clone()))
        .collect()
}

/// `𝕋r(ρ(g))` with its basis of fixed points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceSpace {
    pub g: usize,
    pub basis: Vec<usize>,
}

impl TraceSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Dimensions of the entries of a 2-matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimMatrix {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl DimMatrix {
    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(DimMatrix {
            rows: r,
            cols: c,
            data: rows.concat(),
        })
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    /// The permutation `σ` with `A_{σ(j), j} = 1` and every other entry 0,
    /// if `A` has that shape (that is, if `A` is an equivalence in 2Vect).
    pub fn quasi_invertible(&self) -> Result<Option<Permutation>> {
        if self.rows != self.cols {
            return Err(Error::Shape(format!(
                "quasi-invertibility of a {}x{} 2-matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut sigma = Vec::with_capacity(n);
        let mut hit = vec![false; n];
        for j in 0..n {
            let nonzero: Vec<usize> = (0..n).filter(|&i| self.get(i, j) != 0).collect();
            match nonzero[..] {
                [i] if self.get(i, j) == 1 && !hit[i] => {
                    hit[i] = true;
                    sigma.push(i);
                }
                _ => return Ok(None),
            }
        }
        Ok(Some(sigma))
    }
}

impl Serialize for TwoRep {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json<'a> {
            group: &'a str,
            n: usize,
            level: u32,
            sigma: Vec<String>,
            coh: Vec<Vec<Vec<String>>>,
            unit: Vec<String>,
        }
        let order = self.group.order();
        let coh = (0..order)
            .map(|g| {
                (0..order)
                    .map(|h| (0..self.n).map(|j| self.coh(g, h, j).to_literal()).collect())
                    .collect()
            })
            .collect();
        Json {
            group: self.group.name(),
            n: self.n,
            level: self.level,
            sigma: self.sigma.iter().map(|p| format_cycles(p)).collect(),
            coh,
            unit: self.unit.iter().map(CycNumber::to_literal).collect(),
        }
        .serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::h2_generators;

    fn klein() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::builtin("C2xC2").unwrap())
    }

    fn bilinear() -> Cocycle {
        let table = (0..16).map(|i| ((i / 4) % 2 * ((i % 4) / 2)) as u32).collect();
        Cocycle::new(klein(), 2, table).unwrap()
    }

    fn int(n: i64) -> CycNumber {
        CycNumber::from_integer(1, n)
    }

    fn s3() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::symmetric(3).unwrap())
    }

    fn s3_transposition() -> Subgroup {
        let g = s3();
        let t = g.element_by_label("(1 2)").unwrap();
        Subgroup::generated_by(&g, &[t]).unwrap()
    }

    #[test]
    fn trivial_and_cocycle_reps_are_valid() {
        assert_eq!(TwoRep::trivial(s3(), 3).check(), None);
        let rho = TwoRep::from_cocycle(&bilinear());
        assert_eq!(rho.check(), None);
        assert_eq!(TwoRep::from_cocycle(&Cocycle::zero(klein(), 3)), TwoRep::trivial(klein(), 1));
    }

    #[test]
    fn perturbed_scalar_is_reported() {
        let rho = TwoRep::from_cocycle(&bilinear());
        let mut coh = rho.coh_table().to_vec();
        coh[3 * 4 + 2] = -coh[3 * 4 + 2].clone();
        let err = TwoRep::from_parts(klein(), vec![vec![0]; 4], coh, rho.unit_table().to_vec()).unwrap_err();
        assert!(matches!(err, Error::TwoRep(TwoRepViolation::Associativity { .. })));
        let mut unit = rho.unit_table().to_vec();
        unit[0] = int(2);
        let err = TwoRep::from_parts(klein(), vec![vec![0]; 4], rho.coh_table().to_vec(), unit).unwrap_err();
        assert!(matches!(err, Error::TwoRep(TwoRepViolation::LeftUnit { .. })));
    }

    #[test]
    fn sigma_must_be_a_homomorphism() {
        let g = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let sigma = vec![vec![1, 0], vec![1, 0]];
        let err = TwoRep::from_parts(g, sigma, vec![int(1); 8], vec![int(1); 2]).unwrap_err();
        assert!(matches!(err, Error::TwoRep(TwoRepViolation::NotHomomorphism { .. })));
    }

    #[test]
    fn quasi_invertible_patterns() {
        let id = DimMatrix::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(id.quasi_invertible().unwrap(), Some(vec![0, 1]));
        let cyc = DimMatrix::from_rows(&[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        assert_eq!(cyc.quasi_invertible().unwrap(), Some(vec![1, 2, 0]));
        let fat = DimMatrix::from_rows(&[vec![2, 0], vec![0, 1]]).unwrap();
        assert_eq!(fat.quasi_invertible().unwrap(), None);
        let wide = DimMatrix::from_rows(&[vec![1, 0]]).unwrap();
        assert!(wide.quasi_invertible().is_err());
    }

    #[test]
    fn bilinear_two_character() {
        let rho = TwoRep::from_cocycle(&bilinear());
        let chi = rho.two_character().unwrap();
        assert_eq!(*chi.get(2, 1).unwrap(), int(-1));
        assert_eq!(*chi.get(1, 2).unwrap(), int(-1));
        assert_eq!(*chi.get(0, 3).unwrap(), int(1));
    }

    /// On n = 1, ψ(ρ_c, f, g) = c(g,f) c(gf,g⁻¹) / (c(g,g⁻¹) c(1,1)); the
    /// factor c(1,1)⁻¹ comes from φ₁⁻¹ in the unit insertion.
    #[test]
    fn psi_on_one_dimensional_reps() {
        let g = klein();
        let mut count = 0;
        for bits in 0u32..1 << 16 {
            let table: Vec<u32> = (0..16).map(|i| (bits >> i) & 1).collect();
            let Ok(c) = Cocycle::new(g.clone(), 2, table) else {
                continue;
            };
            count += 1;
            let rho = TwoRep::from_cocycle(&c);
            let e = g.identity();
            for f in 0..4 {
                for x in 0..4 {
                    let xi = g.inv(x);
                    let want = c.scalar(x, f) * c.scalar(g.mul(x, f), xi);
                    let want = &want * &inv(&(c.scalar(x, xi) * c.scalar(e, e)));
                    assert_eq!(*rho.psi(f, x).get(0, 0), want);
                    if c.is_normalized() {
                        let plain = c.scalar(x, f) * c.scalar(g.mul(x, f), xi);
                        assert_eq!(*rho.psi(f, x).get(0, 0), &plain * &inv(&c.scalar(x, xi)));
                    }
                }
            }
        }
        assert_eq!(count, 32);
    }

    #[test]
    fn psi_identity_and_composition() {
        let h = s3_transposition();
        let rho = induce_two_rep(&h, &TwoRep::trivial(Arc::new(h.extract()), 2)).unwrap();
        let g = rho.group().clone();
        for x in 0..6 {
            assert!(rho.psi(x, g.identity()).is_identity());
            for a in 0..6 {
                for b in 0..6 {
                    let lhs = rho.psi(x, g.mul(a, b));
                    let rhs = rho.psi(g.conj(b, x), a).mul(&rho.psi(x, b)).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
        rho.trace_rep().check_functor().unwrap();
    }

    #[test]
    fn induced_trivial_from_transposition() {
        let h = s3_transposition();
        let rho = induce_two_rep(&h, &TwoRep::trivial(Arc::new(h.extract()), 1)).unwrap();
        assert_eq!(rho.n(), 3);
        let g = rho.group().clone();
        let dims: Vec<usize> = (0..6).map(|x| rho.categorical_trace(x).dim()).collect();
        for x in 0..6 {
            let want = match g.element_order(x) {
                1 => 3,
                2 => 1,
                _ => 0,
            };
            assert_eq!(dims[x], want);
        }
        let chi = rho.two_character().unwrap();
        let t = g.element_by_label("(1 2)").unwrap();
        let e = g.identity();
        assert_eq!(*chi.get(e, e).unwrap(), int(3));
        assert_eq!(*chi.get(t, e).unwrap(), int(1));
        assert_eq!(*chi.get(e, t).unwrap(), int(1));
        assert_eq!(*chi.get(t, t).unwrap(), int(1));
        let c = g.element_by_label("(1 2 3)").unwrap();
        assert_eq!(*chi.get(c, e).unwrap(), int(0));
        assert_eq!(*chi.get(e, c).unwrap(), int(0));
    }

    #[test]
    fn induction_from_the_whole_group_is_identity() {
        let g = klein();
        let rho = TwoRep::from_cocycle(&bilinear());
        let ind = induce_two_rep(&Subgroup::whole(&g), &rho).unwrap();
        assert_eq!(ind, rho);
    }

    #[test]
    fn induction_theorem_small_cases() {
        let h = s3_transposition();
        let report = verify_induction_theorem(&h, &TwoRep::trivial(Arc::new(h.extract()), 1)).unwrap();
        assert!(report.passed(), "{report:?}");
        let q8 = Arc::new(FiniteGroup::quaternion8());
        let center = Subgroup::generated_by(&q8, &[q8.element_by_label("-1").unwrap()]).unwrap();
        let hg = Arc::new(center.extract());
        for bits in 0u32..16 {
            let table = (0..4).map(|i| (bits >> i) & 1).collect();
            let Ok(c) = Cocycle::new(hg.clone(), 2, table) else {
                continue;
            };
            let report = verify_induction_theorem(&center, &TwoRep::from_cocycle(&c)).unwrap();
            assert!(report.passed(), "{report:?}");
        }
    }

    #[test]
    fn permuted_transversal_gives_the_same_character() {
        let g = Arc::new(FiniteGroup::dihedral(4).unwrap());
        let s = g.element_by_label("s").unwrap();
        let h = Subgroup::generated_by(&g, &[s]).unwrap();
        let mut reps = g.left_coset_representatives(&h).unwrap();
        reps.reverse();
        let reps: Vec<usize> = reps.iter().map(|&r| g.mul(r, s)).collect();
        let rho = TwoRep::trivial(Arc::new(h.extract()), 2);
        let a = induce_two_rep(&h, &rho).unwrap().two_character().unwrap();
        let b = induce_two_rep_with(&h, &rho, &reps).unwrap().two_character().unwrap();
        assert_eq!(a, b);
        assert!(induce_two_rep_with(&h, &rho, &[g.identity(), s, reps[0], reps[1]]).is_err());
    }

    #[test]
    fn joint_trace_examples() {
        let rho = TwoRep::from_cocycle(&bilinear());
        for a in 0..4 {
            for b in 0..4 {
                let eta = rho.canonical_eta(a, b).unwrap();
                let tau = rho.joint_trace(a, b, &eta).unwrap();
                assert_eq!(&tau, rho.two_character().unwrap().get(a, b).unwrap());
                let lambda = CycNumber::root_of_unity(3, 1);
                let scaled: Vec<CycNumber> = eta.iter().map(|x| x.embed(6).unwrap() * lambda.embed(6).unwrap()).collect();
                assert_eq!(rho.joint_trace(a, b, &scaled).unwrap(), &tau.embed(6).unwrap() * &lambda.embed(6).unwrap());
            }
        }
        let triv = TwoRep::trivial(s3(), 2);
        assert_eq!(triv.joint_trace(3, 0, &[int(1), int(1)]).unwrap(), int(2));
        assert!(triv.joint_trace(3, 0, &[int(1), int(0)]).is_err());
        assert!(triv.joint_trace(3, 0, &[int(1)]).is_err());
    }

    #[test]
    fn direct_sum_adds_characters() {
        let h = s3_transposition();
        let a = induce_two_rep(&h, &TwoRep::trivial(Arc::new(h.extract()), 1)).unwrap();
        let b = TwoRep::trivial(s3(), 2);
        let s = a.direct_sum(&b).unwrap();
        assert_eq!(s.check(), None);
        for x in 0..6 {
            assert_eq!(s.fixed_points(x).len(), a.fixed_points(x).len() + b.fixed_points(x).len());
        }
        let sum = a.two_character().unwrap().add(&b.two_character().unwrap()).unwrap();
        assert_eq!(s.two_character().unwrap(), sum);
        assert_eq!(a.direct_sum(&TwoRep::trivial(s3(), 0)).unwrap(), a);
    }

    #[test]
    fn decompose_examples() {
        let rho = TwoRep::from_cocycle(&bilinear());
        let parts = rho.decompose().unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].subgroup.order(), 4);
        assert_eq!(parts[0].cocycle.as_ref().unwrap().table(), bilinear().table());

        let parts = TwoRep::trivial(s3(), 3).decompose().unwrap();
        assert_eq!(parts.len(), 3);
        assert!(parts.iter().all(|p| p.subgroup.order() == 6 && p.is_torsion()));

        let g = s3();
        let h = Subgroup::whole(&g);
        let omega = h2_generators(&g, 2).unwrap().remove(0).1;
        let t = s3_transposition();
        let c = Cocycle::new(Arc::new(t.extract()), 2, vec![0, 0, 0, 1]).unwrap();
        let ind = induce_two_rep(&t, &TwoRep::from_cocycle(&c)).unwrap();
        let sum = ind.direct_sum(&TwoRep::from_cocycle(&omega)).unwrap();
        let parts = sum.decompose().unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].subgroup, t);
        assert_eq!(parts[0].orbit, vec![0, 1, 2]);
        assert_eq!(parts[1].subgroup, h);
    }

    #[test]
    fn non_torsion_scalars_are_flagged() {
        let g = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let two = int(2);
        let rho = TwoRep::from_scalars(g, vec![two.clone(), two.clone(), two.clone(), two]).unwrap();
        let parts = rho.decompose().unwrap();
        assert!(!parts[0].is_torsion());
    }

    #[test]
    fn projective_reps() {
        let g = klein();
        let q = |rows: [[i64; 2]; 2]| {
            Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect(), &int(0)).unwrap()
        };
        let i = q([[1, 0], [0, 1]]);
        let x = q([[0, 1], [1, 0]]);
        let z = q([[1, 0], [0, -1]]);
        let xz = x.mul(&z).unwrap();
        // (a₁, a₂) is element 2a₁ + a₂
        let mats = vec![i.clone(), z.clone(), x.clone(), xz];
        assert_eq!(check_projective_rep(&bilinear(), &mats).unwrap(), None);
        let honest = vec![i.clone(), i.clone(), i.clone(), i];
        assert_eq!(check_projective_rep(&Cocycle::zero(g, 2), &honest).unwrap(), None);
        assert!(check_projective_rep(&bilinear(), &honest).unwrap().is_some());
    }
}
