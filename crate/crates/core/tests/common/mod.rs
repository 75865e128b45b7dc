//! Oracles and generators shared by the integration tests. Nothing here
//! calls the library routine it is used to check.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twochar_core::cohomology::h2_generators;
use twochar_core::two_rep::induce_two_rep;
use twochar_core::{Cocycle, CycNumber, Field, FiniteGroup, FiniteGroupoid, GroupoidMap, GroupoidRep, Matrix, Subgroup, TwoRep};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const SMALL_GROUPS: &[&str] = &[
    "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C11", "C12", "C2xC2", "C2xC4", "C2xC6",
    "C3xC3", "C2xC2xC2", "S3", "D4", "D5", "D6", "Q8", "A4",
];

pub fn groups_up_to(order: usize) -> Vec<Arc<FiniteGroup>> {
    SMALL_GROUPS
        .iter()
        .map(|name| Arc::new(FiniteGroup::builtin(name).unwrap()))
        .filter(|g| g.order() <= order)
        .collect()
}

/// Additive cocycle condition, written out independently.
pub fn is_cocycle(g: &FiniteGroup, m: u32, t: &[u32]) -> bool {
    let n = g.order();
    (0..n).all(|a| {
        (0..n).all(|b| {
            (0..n).all(|c| {
                let lhs = t[g.mul(a, b) * n + c] + t[a * n + b];
                let rhs = t[a * n + g.mul(b, c)] + t[b * n + c];
                lhs % m == rhs % m
            })
        })
    })
}

/// Every table in `(Z/M)^{G×G}` passing the cocycle condition.
pub fn enumerate_cocycles(g: &FiniteGroup, m: u32) -> Vec<Vec<u32>> {
    let cells = g.order() * g.order();
    let total = (m as u64).pow(cells as u32);
    let mut out = Vec::new();
    let mut t = vec![0u32; cells];
    for mut code in 0..total {
        for cell in t.iter_mut() {
            *cell = (code % m as u64) as u32;
            code /= m as u64;
        }
        if is_cocycle(g, m, &t) {
            out.push(t.clone());
        }
    }
    out
}

/// The distinct coboundaries `b(g) + b(h) − b(gh)`.
pub fn enumerate_coboundaries(g: &FiniteGroup, m: u32) -> HashSet<Vec<u32>> {
    let n = g.order();
    let total = (m as u64).pow(n as u32);
    let mut out = HashSet::new();
    let mut b = vec![0u32; n];
    for mut code in 0..total {
        for cell in b.iter_mut() {
            *cell = (code % m as u64) as u32;
            code /= m as u64;
        }
        let t: Vec<u32> = (0..n * n)
            .map(|i| (b[i / n] + b[i % n] + m - b[g.mul(i / n, i % n)]) % m)
            .collect();
        out.insert(t);
    }
    out
}

/// Induced representation along a faithful groupoid map, computed as the
/// quotient of `⊕_{y, φ: α(y) → x} V(y)` by the relations
/// `(φ ∘ α(ψ)) ⊗ v = φ ⊗ V(ψ) v`.
///
/// Returns the dimension at every object and the character value at every
/// automorphism.
pub fn brute_force_induced<K: Field>(
    alpha: &GroupoidMap,
    rep: &GroupoidRep<K>,
) -> (Vec<usize>, HashMap<usize, K>) {
    let gamma = &alpha.target;
    let h = &alpha.source;
    let like = rep.zero_scalar();
    let mut dims = Vec::new();
    let mut chars = HashMap::new();
    for x in 0..gamma.num_objects() {
        // spanning symbols (φ, y, basis index)
        let mut symbols = Vec::new();
        let mut index = HashMap::new();
        for y in 0..h.num_objects() {
            for phi in gamma.hom(alpha.object_map[y], x) {
                for b in 0..rep.dim(y) {
                    index.insert((phi, b), symbols.len());
                    symbols.push((phi, y, b));
                }
            }
        }
        let n = symbols.len();
        let mut relations: Vec<Vec<K>> = Vec::new();
        for psi in 0..h.num_morphisms() {
            let (y1, y2) = (h.src(psi), h.tgt(psi));
            let v = rep.matrix(psi);
            for phi in gamma.hom(alpha.object_map[y2], x) {
                let moved = gamma.compose(phi, alpha.morphism_map[psi]);
                for b in 0..rep.dim(y1) {
                    let mut row = vec![like.zero_like(); n];
                    row[index[&(moved, b)]] = like.one_like();
                    for c in 0..rep.dim(y2) {
                        let k = index[&(phi, c)];
                        row[k] = row[k].minus(v.get(c, b));
                    }
                    relations.push(row);
                }
            }
        }
        let reduced = Reducer::new(relations, n);
        let free: Vec<usize> = (0..n).filter(|i| !reduced.pivots.contains_key(i)).collect();
        dims.push(free.len());
        for u in gamma.hom(x, x) {
            let mut tr = like.zero_like();
            for &q in &free {
                let (phi, _, b) = symbols[q];
                let mut vec = vec![like.zero_like(); n];
                vec[index[&(gamma.compose(u, phi), b)]] = like.one_like();
                let r = reduced.reduce(vec);
                tr = tr.plus(&r[q]);
            }
            chars.insert(u, tr);
        }
    }
    (dims, chars)
}

/// Row-reduced relation space; reduction gives coordinates in the quotient.
struct Reducer<K> {
    rows: Vec<Vec<K>>,
    pivots: HashMap<usize, usize>,
}

impl<K: Field> Reducer<K> {
    fn new(relations: Vec<Vec<K>>, n: usize) -> Self {
        let mut rows: Vec<Vec<K>> = Vec::new();
        let mut pivots: HashMap<usize, usize> = HashMap::new();
        for rel in relations {
            let mut r: Vec<K> = rel;
            for (&col, &i) in &pivots {
                let f = r[col].clone();
                if !f.is_zero() {
                    let row: &Vec<K> = &rows[i];
                    for c in 0..n {
                        r[c] = r[c].minus(&f.times(&row[c]));
                    }
                }
            }
            let Some(p) = (0..n).find(|&c| !r[c].is_zero()) else {
                continue;
            };
            let inv = r[p].inverse().unwrap();
            for c in 0..n {
                r[c] = r[c].times(&inv);
            }
            for row in rows.iter_mut() {
                let f = row[p].clone();
                if !f.is_zero() {
                    for c in 0..n {
                        row[c] = row[c].minus(&f.times(&r[c]));
                    }
                }
            }
            pivots.insert(p, rows.len());
            rows.push(r);
        }
        Reducer { rows, pivots }
    }

    fn reduce(&self, mut v: Vec<K>) -> Vec<K> {
        for (&col, &i) in &self.pivots {
            let f = v[col].clone();
            if !f.is_zero() {
                for (c, x) in self.rows[i].iter().enumerate() {
                    v[c] = v[c].minus(&f.times(x));
                }
            }
        }
        v
    }
}

/// The map `BH → BG` of one-object groupoids.
pub fn group_inclusion(h: &Subgroup) -> GroupoidMap {
    let source = Arc::new(FiniteGroupoid::from_group(&h.extract()));
    let target = Arc::new(FiniteGroupoid::from_group(h.parent()));
    GroupoidMap::new(source, target, vec![0], h.members().to_vec()).unwrap()
}

const LEVEL: u32 = 12;

pub fn random_unit(rng: &mut ChaCha8Rng) -> CycNumber {
    let q = [(1, 1), (-1, 1), (2, 1), (1, 3), (-5, 2)][rng.gen_range(0..5)];
    let r = CycNumber::root_of_unity(LEVEL, rng.gen_range(0..LEVEL as i64));
    r.scale(&BigRational::new(q.0.into(), q.1.into()))
}

/// Random element of Z²(G, Z/M): a random combination of H² generators plus
/// a random coboundary.
pub fn random_cocycle(rng: &mut ChaCha8Rng, g: &Arc<FiniteGroup>, m: u32) -> Cocycle {
    let n = g.order();
    let b: Vec<u32> = (0..n).map(|_| rng.gen_range(0..m)).collect();
    let mut c = Cocycle::coboundary(g.clone(), m, &b).unwrap();
    for (order, gen) in h2_generators(g, m).unwrap() {
        let k = rng.gen_range(0..order);
        for _ in 0..k {
            c = c.add(&gen).unwrap();
        }
    }
    c
}

/// Random valid 2-representations: direct sums of inductions of 1-dimensional
/// ones, then a gauge change of the line bases and a relabelling of points.
pub struct RepFactory {
    pub group: Arc<FiniteGroup>,
    subgroups: Vec<Subgroup>,
}

impl RepFactory {
    pub fn new(group: Arc<FiniteGroup>) -> Self {
        let subgroups = group.all_subgroups();
        RepFactory { group, subgroups }
    }

    pub fn random(&self, rng: &mut ChaCha8Rng, max_dim: usize) -> TwoRep {
        let target = rng.gen_range(1..=max_dim);
        let mut rho: Option<TwoRep> = None;
        let mut dim = 0;
        while dim < target {
            let fits: Vec<&Subgroup> = self.subgroups.iter().filter(|h| h.index() <= target - dim).collect();
            let h = *fits.choose(rng).unwrap();
            let m = [1, 2, 3, 4][rng.gen_range(0..4)];
            let omega = random_cocycle(rng, &Arc::new(h.extract()), m);
            let part = induce_two_rep(h, &TwoRep::from_cocycle(&omega)).unwrap();
            dim += part.n();
            rho = Some(match rho {
                None => part,
                Some(r) => r.direct_sum(&part).unwrap(),
            });
        }
        let rho = rho.unwrap();
        let lambda: Vec<CycNumber> = (0..self.group.order() * rho.n()).map(|_| random_unit(rng)).collect();
        let mut perm: Vec<usize> = (0..rho.n()).collect();
        perm.shuffle(rng);
        relabel(&gauge(&rho, &lambda), &perm)
    }
}

/// `c′_{g,h}(j) = c_{g,h}(j) λ_g(σ_h j) λ_h(j) / λ_{gh}(j)`,
/// `d′(j) = d(j) λ_1(j)`, with `λ_g(j)` at `g·n + j`.
pub fn gauge(rho: &TwoRep, lambda: &[CycNumber]) -> TwoRep {
    let g = rho.group();
    let (order, n) = (g.order(), rho.n());
    let level = lambda.iter().fold(rho.level(), |a, x| num_integer::lcm(a, x.level()));
    let up = |x: &CycNumber| x.embed(level).unwrap();
    let lam = |a: usize, j: usize| up(&lambda[a * n + j]);
    let mut coh = Vec::new();
    for a in 0..order {
        for b in 0..order {
            for j in 0..n {
                let num = up(rho.coh(a, b, j)) * lam(a, rho.sigma(b)[j]) * lam(b, j);
                coh.push(&num * &lam(g.mul(a, b), j).checked_inv().unwrap());
            }
        }
    }
    let unit = (0..n).map(|j| up(rho.unit(j)) * lam(g.identity(), j)).collect();
    let sigma = (0..order).map(|a| rho.sigma(a).clone()).collect();
    TwoRep::from_parts(g.clone(), sigma, coh, unit).unwrap()
}

/// Moves point `j` to `perm[j]`.
pub fn relabel(rho: &TwoRep, perm: &[usize]) -> TwoRep {
    let g = rho.group();
    let (order, n) = (g.order(), rho.n());
    let mut inv = vec![0; n];
    for (j, &p) in perm.iter().enumerate() {
        inv[p] = j;
    }
    let sigma = (0..order)
        .map(|a| (0..n).map(|p| perm[rho.sigma(a)[inv[p]]]).collect())
        .collect();
    let mut coh = Vec::new();
    for a in 0..order {
        for b in 0..order {
            for p in 0..n {
                coh.push(rho.coh(a, b, inv[p]).clone());
            }
        }
    }
    let unit = (0..n).map(|p| rho.unit(inv[p]).clone()).collect();
    TwoRep::from_parts(g.clone(), sigma, coh, unit).unwrap()
}

pub fn int(n: i64) -> CycNumber {
    CycNumber::from_integer(1, n)
}

pub fn cyc_matrix(rows: &[&[i64]]) -> Matrix<CycNumber> {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect(), &int(0)).unwrap()
}
