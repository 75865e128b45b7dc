//! Finite groups given by multiplication tables.
//!
//! Elements are indices `0..n`. Groups built from permutations keep the
//! permutation of each element; permutations compose right to left, so
//! `(ab)(x) = a(b(x))`.
//!
//! Builtin numbering:
//!
//! - `cyclic(n)`: element `k` is the residue `k`.
//! - `dihedral(n)` (order `2n`): `k < n` is `r^k`, `n + k` is `r^k s`, with
//!   `s r s = r^{-1}`.
//! - `quaternion8()`: `1, -1, i, -i, j, -j, k, -k` in that order.
//! - `symmetric(n)`, `alternating(n)`: breadth-first closure order of the
//!   standard generators, identity first; labels are cycle notation.
//! - `direct_product(G, H)`: `(g, h)` is `g * |H| + h`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Default cap on the order of groups generated from permutations.
pub const DEFAULT_GROUP_CAP: usize = 10080;

const EXHAUSTIVE_ASSOCIATIVITY_LIMIT: usize = 64;
const SAMPLED_ASSOCIATIVITY_TRIPLES: usize = 200_000;

/// A permutation of `{0, …, degree-1}` as its list of images.
pub type Permutation = Vec<usize>;

pub struct FiniteGroup {
    order: usize,
    mult: Vec<u32>,
    identity: usize,
    inverse: Vec<u32>,
    labels: Vec<String>,
    name: String,
    action: Option<(usize, Vec<Permutation>)>,
    classes: OnceLock<ConjugacyClasses>,
}

/// Conjugacy classes in order of their least element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyClasses {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
}

impl ConjugacyClasses {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn representative(&self, class: usize) -> usize {
        self.classes[class][0]
    }

    pub fn representatives(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c[0]).collect()
    }
}

impl Clone for FiniteGroup {
    fn clone(&self) -> Self {
        FiniteGroup {
            order: self.order,
            mult: self.mult.clone(),
            identity: self.identity,
            inverse: self.inverse.clone(),
            labels: self.labels.clone(),
            name: self.name.clone(),
            action: self.action.clone(),
            classes: OnceLock::new(),
        }
    }
}

impl PartialEq for FiniteGroup {
    /// Equal as labelled tables.
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.mult == other.mult
    }
}

impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.name, self.order)
    }
}

impl FiniteGroup {
    /// Validates a multiplication table, `table[a][b] = a·b`.
    pub fn from_mult_table(table: &[Vec<usize>]) -> Result<Self> {
        let labels = (0..table.len()).map(|i| i.to_string()).collect();
        Self::from_mult_table_labeled(table, labels, "G")
    }

    pub fn from_mult_table_labeled(
        table: &[Vec<usize>],
        labels: Vec<String>,
        name: &str,
    ) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::GroupAxiom("empty table".into()));
        }
        if labels.len() != n {
            return Err(Error::Shape(format!("{} labels for {n} elements", labels.len())));
        }
        let mut mult = Vec::with_capacity(n * n);
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Shape(format!("row {a} has length {}, expected {n}", row.len())));
            }
            for (b, &x) in row.iter().enumerate() {
                if x >= n {
                    return Err(Error::GroupAxiom(format!("entry ({a}, {b}) = {x} out of range")));
                }
                mult.push(x as u32);
            }
        }
        let g = Self::build(n, mult, labels, name.to_string(), None)?;
        g.check_associativity()?;
        Ok(g)
    }

    /// Finds the identity and inverses and checks that rows and columns are
    /// permutations. Associativity is checked separately.
    fn build(
        n: usize,
        mult: Vec<u32>,
        labels: Vec<String>,
        name: String,
        action: Option<(usize, Vec<Permutation>)>,
    ) -> Result<Self> {
        let at = |a: usize, b: usize| mult[a * n + b] as usize;
        for a in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for b in 0..n {
                let r = at(a, b);
                if std::mem::replace(&mut row_seen[r], true) {
                    return Err(Error::GroupAxiom(format!(
                        "row {a} repeats {r}, so left multiplication by {a} is not injective"
                    )));
                }
                let c = at(b, a);
                if std::mem::replace(&mut col_seen[c], true) {
                    return Err(Error::GroupAxiom(format!(
                        "column {a} repeats {c}, so right multiplication by {a} is not injective"
                    )));
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::GroupAxiom("no two-sided identity".into()))?;
        let mut inverse = vec![0u32; n];
        for a in 0..n {
            let b = (0..n)
                .find(|&b| at(a, b) == identity)
                .expect("rows are permutations");
            if at(b, a) != identity {
                return Err(Error::GroupAxiom(format!("element {a} has no two-sided inverse")));
            }
            inverse[a] = b as u32;
        }
        Ok(FiniteGroup {
            order: n,
            mult,
            identity,
            inverse,
            labels,
            name,
            action,
            classes: OnceLock::new(),
        })
    }

    fn check_associativity(&self) -> Result<()> {
        let n = self.order;
        let fail = |a, b, c| {
            Err(Error::GroupAxiom(format!(
                "not associative at ({a}, {b}, {c}): a(bc) != (ab)c"
            )))
        };
        if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(a, self.mul(b, c)) != self.mul(ab, c) {
                            return fail(a, b, c);
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
            for _ in 0..SAMPLED_ASSOCIATIVITY_TRIPLES {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if self.mul(a, self.mul(b, c)) != self.mul(self.mul(a, b), c) {
                    return fail(a, b, c);
                }
            }
        }
        Ok(())
    }

    /// Closure of permutations of `{0, …, degree-1}` under composition, with
    /// at most `cap` elements (default [`DEFAULT_GROUP_CAP`]).
    ///
    /// Elements are numbered in breadth-first order from the identity,
    /// multiplying on the left by each generator in turn.
    pub fn from_permutation_generators(
        degree: usize,
        generators: &[Permutation],
        cap: Option<usize>,
    ) -> Result<Self> {
        let cap = cap.unwrap_or(DEFAULT_GROUP_CAP);
        for (i, g) in generators.iter().enumerate() {
            if !is_permutation(g, degree) {
                return Err(Error::Parameter(format!(
                    "generator {i} is not a permutation of {degree} points"
                )));
            }
        }
        let identity: Permutation = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Permutation, usize> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let p = compose(g, &elements[i]);
                if !index.contains_key(&p) {
                    if elements.len() >= cap {
                        return Err(Error::SizeCap {
                            what: "group order".into(),
                            size: elements.len() + 1,
                            cap,
                        });
                    }
                    index.insert(p.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(p);
                }
            }
        }
        let n = elements.len();
        let mut mult = Vec::with_capacity(n * n);
        for a in &elements {
            for b in &elements {
                mult.push(index[&compose(a, b)] as u32);
            }
        }
        let labels = elements.iter().map(|p| format_cycles(p)).collect();
        Self::build(n, mult, labels, format!("Perm({degree})"), Some((degree, elements)))
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("cyclic(n) needs n >= 1".into()));
        }
        let mult = (0..n * n).map(|i| ((i / n + i % n) % n) as u32).collect();
        let labels = (0..n).map(|k| k.to_string()).collect();
        Self::build(n, mult, labels, format!("C{n}"), None)
    }

    /// Dihedral group of order `2n`.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Parameter("dihedral(n) needs n >= 1".into()));
        }
        let order = 2 * n;
        let mut mult = Vec::with_capacity(order * order);
        for x in 0..order {
            let (a, i) = (x % n, x / n);
            for y in 0..order {
                let (b, j) = (y % n, y / n);
                // r^a s^i · r^b s^j = r^{a ± b} s^{i+j}
                let rot = if i == 0 { (a + b) % n } else { (a + n - b) % n };
                mult.push((((i + j) % 2) * n + rot) as u32);
            }
        }
        let rot_label = |k: usize| match k {
            0 => String::new(),
            1 => "r".to_string(),
            _ => format!("r^{k}"),
        };
        let mut labels: Vec<String> = (0..n)
            .map(|k| if k == 0 { "e".to_string() } else { rot_label(k) })
            .collect();
        labels.extend((0..n).map(|k| format!("{}s", rot_label(k))));
        Self::build(order, mult, labels, format!("D{n}"), None)
    }

    /// Symmetric group on `n ≤ 5` points.
    pub fn symmetric(n: usize) -> Result<Self> {
        if !(1..=5).contains(&n) {
            return Err(Error::Parameter("symmetric(n) needs 1 <= n <= 5".into()));
        }
        let mut gens = Vec::new();
        if n >= 2 {
            let mut swap: Permutation = (0..n).collect();
            swap.swap(0, 1);
            let cycle: Permutation = (0..n).map(|i| (i + 1) % n).collect();
            gens.push(swap);
            gens.push(cycle);
        }
        let mut g = Self::from_permutation_generators(n, &gens, None)?;
        g.name = format!("S{n}");
        Ok(g)
    }

    /// Alternating group on `n ≤ 5` points, generated by the 3-cycles `(1 2 k)`.
    pub fn alternating(n: usize) -> Result<Self> {
        if !(1..=5).contains(&n) {
            return Err(Error::Parameter("alternating(n) needs 1 <= n <= 5".into()));
        }
        let gens: Vec<Permutation> = (2..n)
            .map(|k| {
                let mut p: Permutation = (0..n).collect();
                p[0] = 1;
                p[1] = k;
                p[k] = 0;
                p
            })
            .collect();
        let mut g = Self::from_permutation_generators(n, &gens, None)?;
        g.name = format!("A{n}");
        Ok(g)
    }

    pub fn quaternion8() -> Self {
        // units 1, i, j, k as 0..4; product table as (sign, unit)
        const UNIT: [[(bool, usize); 4]; 4] = [
            [(false, 0), (false, 1), (false, 2), (false, 3)],
            [(false, 1), (true, 0), (false, 3), (true, 2)],
            [(false, 2), (true, 3), (true, 0), (false, 1)],
            [(false, 3), (false, 2), (true, 1), (true, 0)],
        ];
        // element 2u + s is (-1)^s · unit u
        let decode = |x: usize| (x % 2 == 1, x / 2);
        let mut mult = Vec::with_capacity(64);
        for x in 0..8 {
            let (sx, ux) = decode(x);
            for y in 0..8 {
                let (sy, uy) = decode(y);
                let (s, u) = UNIT[ux][uy];
                mult.push((2 * u + usize::from(s ^ sx ^ sy)) as u32);
            }
        }
        let labels = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        Self::build(8, mult, labels, "Q8".into(), None).expect("Q8 table is a group")
    }

    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Self {
        let (m, n) = (g.order, h.order);
        let order = m * n;
        let mut mult = Vec::with_capacity(order * order);
        for x in 0..order {
            for y in 0..order {
                let a = g.mul(x / n, y / n);
                let b = h.mul(x % n, y % n);
                mult.push((a * n + b) as u32);
            }
        }
        let labels = (0..order)
            .map(|x| format!("({},{})", g.labels[x / n], h.labels[x % n]))
            .collect();
        Self::build(order, mult, labels, format!("{}x{}", g.name, h.name), None)
            .expect("direct product of groups is a group")
    }

    /// Parses builtin names such as `C6`, `D4`, `S3`, `A4`, `Q8` and products
    /// like `C2xC2`.
    pub fn builtin(name: &str) -> Result<Self> {
        let parts: Vec<&str> = name.split('x').map(str::trim).collect();
        let mut acc: Option<FiniteGroup> = None;
        for part in parts {
            let g = Self::builtin_factor(part)?;
            acc = Some(match acc {
                None => g,
                Some(a) => Self::direct_product(&a, &g),
            });
        }
        acc.ok_or_else(|| Error::Parameter("empty builtin name".into()))
    }

    fn builtin_factor(part: &str) -> Result<Self> {
        if part == "Q8" {
            return Ok(Self::quaternion8());
        }
        let bad = || Error::Parameter(format!("unknown builtin group {part:?}"));
        let mut chars = part.chars();
        let kind = chars.next().ok_or_else(bad)?;
        let n: usize = chars.as_str().parse().map_err(|_| bad())?;
        match kind {
            'C' => Self::cyclic(n),
            'D' => Self::dihedral(n),
            'S' => Self::symmetric(n),
            'A' => Self::alternating(n),
            _ => Err(bad()),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order {
            return Err(Error::Shape(format!(
                "{} labels for {} elements",
                labels.len(),
                self.order
            )));
        }
        self.labels = labels;
        Ok(self)
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// `s·g·s⁻¹`.
    #[inline]
    pub fn conj(&self, s: usize, g: usize) -> usize {
        self.mul(self.mul(s, g), self.inv(s))
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Element with the given label. Labels of permutation groups are also
    /// matched up to cycle-notation normalisation, so `(2 1)` finds `(1 2)`.
    pub fn element_by_label(&self, label: &str) -> Option<usize> {
        let label = label.trim();
        if let Some(i) = self.labels.iter().position(|l| l == label) {
            return Some(i);
        }
        let (degree, perms) = self.action.as_ref()?;
        let p = parse_cycles(label, *degree).ok()?;
        perms.iter().position(|q| *q == p)
    }

    /// Permutation action for groups built from permutations: degree and the
    /// permutation of each element.
    pub fn action(&self) -> Option<(usize, &[Permutation])> {
        self.action.as_ref().map(|(d, p)| (*d, p.as_slice()))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn conjugacy_classes(&self) -> &ConjugacyClasses {
        self.classes.get_or_init(|| {
            let n = self.order;
            let mut class_of = vec![usize::MAX; n];
            let mut classes = Vec::new();
            for g in 0..n {
                if class_of[g] != usize::MAX {
                    continue;
                }
                let mut members: Vec<usize> = (0..n).map(|s| self.conj(s, g)).collect();
                members.sort_unstable();
                members.dedup();
                for &m in &members {
                    class_of[m] = classes.len();
                }
                classes.push(members);
            }
            ConjugacyClasses { classes, class_of }
        })
    }

    /// All ordered pairs `(g, h)` with `gh = hg`, in lexicographic order.
    pub fn commuting_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.order;
        (0..n)
            .flat_map(|g| (0..n).map(move |h| (g, h)))
            .filter(|&(g, h)| self.commute(g, h))
            .collect()
    }

    /// Orbits of commuting pairs under simultaneous conjugation, each sorted
    /// with its lexicographically least pair first; orbits are ordered by
    /// that representative.
    pub fn commuting_pair_classes(&self) -> Vec<Vec<(usize, usize)>> {
        let n = self.order;
        let mut seen = vec![false; n * n];
        let mut out = Vec::new();
        for (g, h) in self.commuting_pairs() {
            if seen[g * n + h] {
                continue;
            }
            let mut orbit: Vec<(usize, usize)> =
                (0..n).map(|s| (self.conj(s, g), self.conj(s, h))).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &(a, b) in &orbit {
                seen[a * n + b] = true;
            }
            out.push(orbit);
        }
        out
    }

    /// Checks that a subgroup belongs to this group.
    pub fn owns(&self, h: &Subgroup) -> bool {
        std::ptr::eq(self, Arc::as_ptr(&h.parent)) || *self == *h.parent
    }

    fn require_owned(&self, h: &Subgroup) -> Result<()> {
        if self.owns(h) {
            Ok(())
        } else {
            Err(Error::NotSubgroup(format!(
                "subgroup of {} used with group {}",
                h.parent.name, self.name
            )))
        }
    }

    /// `{s : sg = gs}`.
    pub fn centralizer(self: &Arc<Self>, g: usize) -> Subgroup {
        let members = (0..self.order).filter(|&s| self.commute(s, g)).collect();
        Subgroup::from_sorted_unchecked(self.clone(), members)
    }

    /// One representative per left coset `rH`: the identity first, then the
    /// least element of each new coset in index order.
    pub fn left_coset_representatives(&self, h: &Subgroup) -> Result<Vec<usize>> {
        self.require_owned(h)?;
        let mut covered = vec![false; self.order];
        let mut reps = Vec::with_capacity(self.order / h.order());
        for g in std::iter::once(self.identity).chain(0..self.order) {
            if covered[g] {
                continue;
            }
            for &x in h.members() {
                covered[self.mul(g, x)] = true;
            }
            reps.push(g);
        }
        Ok(reps)
    }

    /// Some `s` with `s H1 s⁻¹ = H2`, trying the identity first and then
    /// elements in index order.
    pub fn conjugate_subgroup_witness(&self, h1: &Subgroup, h2: &Subgroup) -> Option<usize> {
        if h1.order() != h2.order() || !self.owns(h1) || !self.owns(h2) {
            return None;
        }
        std::iter::once(self.identity)
            .chain(0..self.order)
            .find(|&s| h1.members().iter().all(|&x| h2.contains(self.conj(s, x))))
    }

    /// Every subgroup, ordered by order and then by member list.
    pub fn all_subgroups(self: &Arc<Self>) -> Vec<Subgroup> {
        let mut found: Vec<Vec<usize>> = vec![vec![self.identity]];
        let mut frontier = found.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for members in &frontier {
                for g in 0..self.order {
                    if members.binary_search(&g).is_ok() {
                        continue;
                    }
                    let mut gens = members.clone();
                    gens.push(g);
                    let closure = closure(self, &gens);
                    if !found.contains(&closure) {
                        found.push(closure.clone());
                        next.push(closure);
                    }
                }
            }
            frontier = next;
        }
        found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        found
            .into_iter()
            .map(|m| Subgroup::from_sorted_unchecked(self.clone(), m))
            .collect()
    }
}

fn closure(g: &FiniteGroup, gens: &[usize]) -> Vec<usize> {
    let mut mask = vec![false; g.order];
    mask[g.identity] = true;
    let mut members = vec![g.identity];
    let mut i = 0;
    while i < members.len() {
        let x = members[i];
        for &s in gens {
            let y = g.mul(x, s);
            if !mask[y] {
                mask[y] = true;
                members.push(y);
            }
        }
        i += 1;
    }
    members.sort_unstable();
    members
}

/// A subgroup, stored as a sorted set of elements of its parent group.
#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members && *self.parent == *other.parent
    }
}

impl Eq for Subgroup {}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<&str> = self.members.iter().map(|&m| self.parent.label(m)).collect();
        write!(f, "Subgroup of {} {{{}}}", self.parent.name, labels.join(", "))
    }
}

impl Subgroup {
    fn from_sorted_unchecked(parent: Arc<FiniteGroup>, members: Vec<usize>) -> Self {
        let mut mask = vec![false; parent.order];
        for &m in &members {
            mask[m] = true;
        }
        Subgroup {
            parent,
            members,
            mask,
        }
    }

    /// Validates an element set as a subgroup.
    pub fn new(parent: &Arc<FiniteGroup>, members: &[usize]) -> Result<Self> {
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if let Some(&bad) = sorted.iter().find(|&&m| m >= parent.order) {
            return Err(Error::NotSubgroup(format!("element {bad} is out of range")));
        }
        let h = Self::from_sorted_unchecked(parent.clone(), sorted);
        if !h.contains(parent.identity) {
            return Err(Error::NotSubgroup("missing the identity".into()));
        }
        for &a in &h.members {
            if !h.contains(parent.inv(a)) {
                return Err(Error::NotSubgroup(format!("not closed under inverse at {a}")));
            }
            for &b in &h.members {
                if !h.contains(parent.mul(a, b)) {
                    return Err(Error::NotSubgroup(format!(
                        "not closed under multiplication at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(h)
    }

    pub fn generated_by(parent: &Arc<FiniteGroup>, gens: &[usize]) -> Result<Self> {
        if let Some(&bad) = gens.iter().find(|&&g| g >= parent.order) {
            return Err(Error::NotSubgroup(format!("generator {bad} is out of range")));
        }
        Ok(Self::from_sorted_unchecked(parent.clone(), closure(parent, gens)))
    }

    pub fn whole(parent: &Arc<FiniteGroup>) -> Self {
        Self::from_sorted_unchecked(parent.clone(), (0..parent.order).collect())
    }

    pub fn trivial(parent: &Arc<FiniteGroup>) -> Self {
        Self::from_sorted_unchecked(parent.clone(), vec![parent.identity])
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn index(&self) -> usize {
        self.parent.order / self.members.len()
    }

    #[inline]
    pub fn contains(&self, g: usize) -> bool {
        self.mask.get(g).copied().unwrap_or(false)
    }

    /// Position of a member in the sorted member list, which is also its
    /// index in [`Subgroup::extract`].
    pub fn position(&self, g: usize) -> Option<usize> {
        self.members.binary_search(&g).ok()
    }

    /// `s H s⁻¹`.
    pub fn conjugate(&self, s: usize) -> Self {
        let mut members: Vec<usize> = self.members.iter().map(|&h| self.parent.conj(s, h)).collect();
        members.sort_unstable();
        Self::from_sorted_unchecked(self.parent.clone(), members)
    }

    /// The subgroup as a standalone group; element `i` is `members()[i]`.
    pub fn extract(&self) -> FiniteGroup {
        let n = self.members.len();
        let mut mult = Vec::with_capacity(n * n);
        for &a in &self.members {
            for &b in &self.members {
                let p = self.position(self.parent.mul(a, b)).expect("closed");
                mult.push(p as u32);
            }
        }
        let labels = self.members.iter().map(|&m| self.parent.labels[m].clone()).collect();
        let action = self.parent.action.as_ref().map(|(d, perms)| {
            (*d, self.members.iter().map(|&m| perms[m].clone()).collect())
        });
        let name = if n == self.parent.order {
            self.parent.name.clone()
        } else {
            format!("{}<{}", n, self.parent.name)
        };
        FiniteGroup::build(n, mult, labels, name, action).expect("subgroup is a group")
    }
}

fn is_permutation(p: &[usize], degree: usize) -> bool {
    if p.len() != degree {
        return false;
    }
    let mut seen = vec![false; degree];
    p.iter().all(|&x| x < degree && !std::mem::replace(&mut seen[x], true))
}

/// `(a∘b)(x) = a(b(x))`.
pub fn compose(a: &[usize], b: &[usize]) -> Permutation {
    b.iter().map(|&x| a[x]).collect()
}

pub fn invert_permutation(p: &[usize]) -> Permutation {
    let mut out = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        out[x] = i;
    }
    out
}

/// Parses cycle notation with 1-based points, e.g. `(1 2)(3 4)`; `()` and
/// the empty string are the identity.
pub fn parse_cycles(s: &str, degree: usize) -> Result<Permutation> {
    let err = |msg: String| Error::parse(format!("cycle string {s:?}"), msg);
    let mut perm: Permutation = (0..degree).collect();
    let mut moved = vec![false; degree];
    let mut rest = s.trim();
    while !rest.is_empty() {
        let Some(body) = rest.strip_prefix('(') else {
            return Err(err("expected '('".into()));
        };
        let close = body.find(')').ok_or_else(|| err("missing ')'".into()))?;
        let points = body[..close]
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                let p: usize = t.parse().map_err(|_| err(format!("bad point {t:?}")))?;
                if p == 0 || p > degree {
                    return Err(err(format!("point {p} outside 1..={degree}")));
                }
                Ok(p - 1)
            })
            .collect::<Result<Vec<_>>>()?;
        for (i, &p) in points.iter().enumerate() {
            if std::mem::replace(&mut moved[p], true) {
                return Err(err(format!("point {} repeated", p + 1)));
            }
            perm[p] = points[(i + 1) % points.len()];
        }
        rest = body[close + 1..].trim_start();
    }
    Ok(perm)
}

/// Cycle notation with 1-based points, fixed points omitted; the identity is
/// `()`.
pub fn format_cycles(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push((x + 1).to_string());
            x = p[x];
        }
        out.push('(');
        out.push_str(&cycle.join(" "));
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arc(g: FiniteGroup) -> Arc<FiniteGroup> {
        Arc::new(g)
    }

    fn s3() -> Arc<FiniteGroup> {
        arc(FiniteGroup::symmetric(3).unwrap())
    }

    fn klein_table() -> Vec<Vec<usize>> {
        (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect()
    }

    #[test]
    fn z2_table_is_a_group() {
        let g = FiniteGroup::from_mult_table(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.inv(1), 1);
    }

    #[test]
    fn klein_four_is_elementary_abelian() {
        let g = FiniteGroup::from_mult_table(&klein_table()).unwrap();
        assert_eq!(g.order(), 4);
        assert!((0..4).all(|x| g.inv(x) == x));
        assert_eq!(g, FiniteGroup::builtin("C2xC2").unwrap());
    }

    #[test]
    fn non_associative_table_names_a_triple() {
        // a Latin square with identity 0 that is not associative
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        match FiniteGroup::from_mult_table(&t) {
            Err(Error::GroupAxiom(msg)) => assert!(msg.contains("not associative"), "{msg}"),
            other => panic!("expected associativity failure, got {other:?}"),
        }
        // identity need not be element 0
        let relabelled = vec![vec![1, 0], vec![0, 1]];
        assert_eq!(FiniteGroup::from_mult_table(&relabelled).unwrap().identity(), 1);
        let repeated = vec![vec![0, 0], vec![1, 0]];
        assert!(FiniteGroup::from_mult_table(&repeated).is_err());
    }

    #[test]
    fn permutation_closures() {
        let gens = vec![parse_cycles("(1 2)", 3).unwrap(), parse_cycles("(1 2 3)", 3).unwrap()];
        assert_eq!(FiniteGroup::from_permutation_generators(3, &gens, None).unwrap().order(), 6);
        let c4 = FiniteGroup::from_permutation_generators(4, &[parse_cycles("(1 2 3 4)", 4).unwrap()], None)
            .unwrap();
        assert_eq!(c4.order(), 4);
        assert!(c4.is_abelian());
        assert_eq!(FiniteGroup::from_permutation_generators(3, &[], None).unwrap().order(), 1);
        let capped = FiniteGroup::from_permutation_generators(3, &gens, Some(5));
        assert!(matches!(capped, Err(Error::SizeCap { cap: 5, .. })));
    }

    #[test]
    fn builtin_examples() {
        assert_eq!(FiniteGroup::cyclic(1).unwrap().order(), 1);
        let q8 = FiniteGroup::quaternion8();
        assert_eq!(q8.order(), 8);
        assert_eq!((0..8).filter(|&g| q8.element_order(g) == 2).count(), 1);
        assert_eq!(FiniteGroup::dihedral(4).unwrap().order(), 8);
        assert_eq!(FiniteGroup::symmetric(5).unwrap().order(), 120);
        assert_eq!(FiniteGroup::alternating(4).unwrap().order(), 12);
        assert!(FiniteGroup::symmetric(6).is_err());
        assert!(FiniteGroup::cyclic(0).is_err());
        assert!(FiniteGroup::builtin("X3").is_err());
    }

    #[test]
    fn dihedral_relations() {
        let d = FiniteGroup::dihedral(4).unwrap();
        let (r, s) = (1, 4);
        assert_eq!(d.element_order(r), 4);
        assert_eq!(d.element_order(s), 2);
        assert_eq!(d.mul(d.mul(s, r), s), d.inv(r));
        assert_eq!(d.label(5), "rs");
        assert_eq!(d.mul(r, s), 5);
    }

    #[test]
    fn class_counts() {
        let g = s3();
        let mut sizes: Vec<usize> = g.conjugacy_classes().classes.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
        assert_eq!(FiniteGroup::quaternion8().conjugacy_classes().len(), 5);
        assert_eq!(FiniteGroup::cyclic(7).unwrap().conjugacy_classes().len(), 7);
    }

    #[test]
    fn centralizer_examples() {
        let g = s3();
        let t = g.element_by_label("(1 2)").unwrap();
        assert_eq!(g.centralizer(t).order(), 2);
        assert_eq!(g.centralizer(g.identity()).order(), 6);
        let c = arc(FiniteGroup::cyclic(5).unwrap());
        assert_eq!(c.centralizer(3).order(), 5);
    }

    #[test]
    fn commuting_pair_counts() {
        assert_eq!(s3().commuting_pairs().len(), 18);
        assert_eq!(FiniteGroup::cyclic(5).unwrap().commuting_pairs().len(), 25);
        assert_eq!(FiniteGroup::quaternion8().commuting_pairs().len(), 40);
    }

    #[test]
    fn cosets_examples() {
        let g = s3();
        assert_eq!(g.left_coset_representatives(&Subgroup::whole(&g)).unwrap(), vec![0]);
        assert_eq!(
            g.left_coset_representatives(&Subgroup::trivial(&g)).unwrap(),
            (0..6).collect::<Vec<_>>()
        );
        let t = g.element_by_label("(1 2)").unwrap();
        let h = Subgroup::generated_by(&g, &[t]).unwrap();
        let reps = g.left_coset_representatives(&h).unwrap();
        assert_eq!(reps.len(), 3);
        assert_eq!(reps[0], g.identity());
        for (i, &a) in reps.iter().enumerate() {
            for &b in &reps[..i] {
                assert!(!h.contains(g.mul(g.inv(b), a)));
            }
        }
    }

    #[test]
    fn conjugate_subgroups() {
        let g = s3();
        let t12 = g.element_by_label("(1 2)").unwrap();
        let t13 = g.element_by_label("(1 3)").unwrap();
        let c3 = g.element_by_label("(1 2 3)").unwrap();
        let h1 = Subgroup::generated_by(&g, &[t12]).unwrap();
        let h2 = Subgroup::generated_by(&g, &[t13]).unwrap();
        let k = Subgroup::generated_by(&g, &[c3]).unwrap();
        assert_eq!(g.conjugate_subgroup_witness(&h1, &h1), Some(g.identity()));
        let s = g.conjugate_subgroup_witness(&h1, &h2).unwrap();
        assert_eq!(h1.conjugate(s), h2);
        // the 3-cycles mapping (1 2) to (1 3) are witnesses as well
        assert!((0..6).any(|x| g.element_order(x) == 3 && h1.conjugate(x) == h2));
        assert_eq!(g.conjugate_subgroup_witness(&h1, &k), None);
    }

    #[test]
    fn subgroup_validation() {
        let g = s3();
        let t = g.element_by_label("(1 2)").unwrap();
        let c = g.element_by_label("(1 2 3)").unwrap();
        assert!(Subgroup::new(&g, &[g.identity(), t]).is_ok());
        assert!(matches!(Subgroup::new(&g, &[g.identity(), c]), Err(Error::NotSubgroup(_))));
        assert!(matches!(Subgroup::new(&g, &[t]), Err(Error::NotSubgroup(_))));
    }

    #[test]
    fn subgroup_lattice_sizes() {
        assert_eq!(s3().all_subgroups().len(), 6);
        assert_eq!(arc(FiniteGroup::quaternion8()).all_subgroups().len(), 6);
        assert_eq!(arc(FiniteGroup::dihedral(4).unwrap()).all_subgroups().len(), 10);
        assert_eq!(arc(FiniteGroup::alternating(4).unwrap()).all_subgroups().len(), 10);
    }

    #[test]
    fn cycle_notation_round_trip() {
        let p = parse_cycles("(1 3)(2 4 5)", 5).unwrap();
        assert_eq!(p, vec![2, 3, 0, 4, 1]);
        assert_eq!(format_cycles(&p), "(1 3)(2 4 5)");
        assert_eq!(format_cycles(&[0, 1]), "()");
        assert!(parse_cycles("(1 2", 3).is_err());
        assert!(parse_cycles("(1 4)", 3).is_err());
        assert!(parse_cycles("(1 1)", 3).is_err());
        assert!(parse_cycles("1 2", 3).is_err());
    }

    #[test]
    fn labels_match_up_to_normalisation() {
        let g = s3();
        assert_eq!(g.element_by_label("(2 1)"), g.element_by_label("(1 2)"));
        assert_eq!(g.element_by_label("()"), Some(g.identity()));
    }

    #[test]
    fn extraction_preserves_structure() {
        let g = arc(FiniteGroup::symmetric(4).unwrap());
        let h = Subgroup::generated_by(
            &g,
            &[g.element_by_label("(1 2)").unwrap(), g.element_by_label("(1 2 3)").unwrap()],
        )
        .unwrap();
        let e = h.extract();
        assert_eq!(e.order(), 6);
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(h.members()[e.mul(a, b)], g.mul(h.members()[a], h.members()[b]));
            }
        }
    }
}
