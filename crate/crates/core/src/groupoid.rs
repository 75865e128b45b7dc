//! Finite groupoids, inertia groupoids and skeletons.
//!
//! Morphisms are indices with a source and a target object; `compose(f, g)`
//! is `f∘g` and is defined when `src(f) = tgt(g)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};

pub struct FiniteGroupoid {
    object_labels: Vec<String>,
    src: Vec<usize>,
    tgt: Vec<usize>,
    morphism_labels: Vec<String>,
    identity: Vec<usize>,
    inverse: Vec<usize>,
    compose: HashMap<(usize, usize), usize>,
    /// Morphisms with a given source, in index order.
    out: Vec<Vec<usize>>,
    skeleton: OnceLock<GroupoidSkeleton>,
    aut_classes: OnceLock<AutomorphismClasses>,
}

impl fmt::Debug for FiniteGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FiniteGroupoid({} objects, {} morphisms)",
            self.num_objects(),
            self.num_morphisms()
        )
    }
}

impl FiniteGroupoid {
    /// Builds and validates a groupoid. `compose` lists triples `(f, g, f∘g)`
    /// and must cover exactly the composable pairs.
    pub fn from_parts(
        object_labels: Vec<String>,
        src: Vec<usize>,
        tgt: Vec<usize>,
        morphism_labels: Vec<String>,
        compose: &[(usize, usize, usize)],
    ) -> Result<Self> {
        let m = src.len();
        let n = object_labels.len();
        if tgt.len() != m || morphism_labels.len() != m {
            return Err(Error::Shape("source, target and label lists differ in length".into()));
        }
        if let Some(f) = (0..m).find(|&f| src[f] >= n || tgt[f] >= n) {
            return Err(Error::GroupoidAxiom(format!("morphism {f} has an unknown endpoint")));
        }
        let mut table = HashMap::with_capacity(compose.len());
        for &(f, g, h) in compose {
            if f >= m || g >= m || h >= m {
                return Err(Error::GroupoidAxiom(format!("composition ({f}, {g}) out of range")));
            }
            if src[f] != tgt[g] {
                return Err(Error::GroupoidAxiom(format!(
                    "composition defined on non-composable pair ({f}, {g})"
                )));
            }
            if src[h] != src[g] || tgt[h] != tgt[f] {
                return Err(Error::GroupoidAxiom(format!(
                    "composite of ({f}, {g}) has the wrong endpoints"
                )));
            }
            if table.insert((f, g), h).is_some() {
                return Err(Error::GroupoidAxiom(format!("composition ({f}, {g}) given twice")));
            }
        }
        let mut out = vec![Vec::new(); n];
        for f in 0..m {
            out[src[f]].push(f);
        }
        let inc = incoming(&tgt, n);
        for f in 0..m {
            for &g in &inc[src[f]] {
                if !table.contains_key(&(f, g)) {
                    return Err(Error::GroupoidAxiom(format!(
                        "composition missing for composable pair ({f}, {g})"
                    )));
                }
            }
        }
        let mut gpd = FiniteGroupoid {
            object_labels,
            src,
            tgt,
            morphism_labels,
            identity: Vec::new(),
            inverse: Vec::new(),
            compose: table,
            out,
            skeleton: OnceLock::new(),
            aut_classes: OnceLock::new(),
        };
        gpd.identity = (0..n)
            .map(|x| {
                gpd.hom(x, x)
                    .into_iter()
                    .find(|&e| {
                        gpd.out[x].iter().all(|&f| gpd.compose(f, e) == f)
                            && inc[x].iter().all(|&f| gpd.compose(e, f) == f)
                    })
                    .ok_or_else(|| Error::GroupoidAxiom(format!("object {x} has no identity")))
            })
            .collect::<Result<_>>()?;
        gpd.inverse = (0..m)
            .map(|f| {
                gpd.hom(gpd.tgt[f], gpd.src[f])
                    .into_iter()
                    .find(|&g| {
                        gpd.compose(g, f) == gpd.identity[gpd.src[f]]
                            && gpd.compose(f, g) == gpd.identity[gpd.tgt[f]]
                    })
                    .ok_or_else(|| Error::GroupoidAxiom(format!("morphism {f} is not invertible")))
            })
            .collect::<Result<_>>()?;
        gpd.check_associativity()?;
        Ok(gpd)
    }

    fn check_associativity(&self) -> Result<()> {
        let inc = incoming(&self.tgt, self.num_objects());
        for f in 0..self.num_morphisms() {
            for &g in &inc[self.src[f]] {
                let fg = self.compose(f, g);
                for &h in &inc[self.src[g]] {
                    if self.compose(fg, h) != self.compose(f, self.compose(g, h)) {
                        return Err(Error::GroupoidAxiom(format!(
                            "composition not associative at ({f}, {g}, {h})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// A group as a one-object groupoid; morphism `g` is the element `g`.
    pub fn from_group(g: &FiniteGroup) -> Self {
        let n = g.order();
        let mut compose = HashMap::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                compose.insert((a, b), g.mul(a, b));
            }
        }
        FiniteGroupoid {
            object_labels: vec!["*".into()],
            src: vec![0; n],
            tgt: vec![0; n],
            morphism_labels: g.labels().to_vec(),
            identity: vec![g.identity()],
            inverse: (0..n).map(|a| g.inv(a)).collect(),
            compose,
            out: vec![(0..n).collect()],
            skeleton: OnceLock::new(),
            aut_classes: OnceLock::new(),
        }
    }

    /// The inertia groupoid Λ(G): objects are the elements of `G`, and the
    /// morphism with index `u·|G| + g` goes from `u` to `g u g⁻¹`.
    pub fn inertia(g: &FiniteGroup) -> Self {
        let n = g.order();
        let m = n * n;
        let mut src = Vec::with_capacity(m);
        let mut tgt = Vec::with_capacity(m);
        let mut labels = Vec::with_capacity(m);
        let mut inverse = Vec::with_capacity(m);
        for u in 0..n {
            for s in 0..n {
                src.push(u);
                tgt.push(g.conj(s, u));
                labels.push(format!("({}, {})", g.label(u), g.label(s)));
                inverse.push(g.conj(s, u) * n + g.inv(s));
            }
        }
        let mut compose = HashMap::with_capacity(n * m);
        for u in 0..n {
            for s in 0..n {
                let v = g.conj(s, u);
                for t in 0..n {
                    // (v, t) ∘ (u, s) = (u, ts)
                    compose.insert((v * n + t, u * n + s), u * n + g.mul(t, s));
                }
            }
        }
        let out = (0..n).map(|u| (u * n..(u + 1) * n).collect()).collect();
        FiniteGroupoid {
            object_labels: g.labels().to_vec(),
            src,
            tgt,
            morphism_labels: labels,
            identity: (0..n).map(|u| u * n + g.identity()).collect(),
            inverse,
            compose,
            out,
            skeleton: OnceLock::new(),
            aut_classes: OnceLock::new(),
        }
    }

    /// Λ(Γ): objects are the automorphisms `u` of Γ in index order; for each
    /// `u` and each morphism `φ` out of `src(u)` there is a morphism
    /// `u → φ u φ⁻¹`.
    pub fn inertia_groupoid(gamma: &FiniteGroupoid) -> Self {
        let autos: Vec<usize> = gamma.automorphisms().collect();
        let obj_of: HashMap<usize, usize> = autos.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        let mut src = Vec::new();
        let mut tgt = Vec::new();
        let mut labels = Vec::new();
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        for (i, &u) in autos.iter().enumerate() {
            for &phi in &gamma.out[gamma.src[u]] {
                index.insert((i, phi), src.len());
                src.push(i);
                tgt.push(obj_of[&gamma.conj(phi, u)]);
                labels.push(format!("({}, {})", gamma.morphism_labels[u], gamma.morphism_labels[phi]));
            }
        }
        let m = src.len();
        let mut compose = HashMap::new();
        let mut inverse = vec![0; m];
        let mut out = vec![Vec::new(); autos.len()];
        for (&(i, phi), &f) in &index {
            out[i].push(f);
            let v = tgt[f];
            inverse[f] = index[&(v, gamma.inverse[phi])];
            for &psi in &gamma.out[gamma.tgt[phi]] {
                compose.insert((index[&(v, psi)], f), index[&(i, gamma.compose(psi, phi))]);
            }
        }
        for o in &mut out {
            o.sort_unstable();
        }
        let identity = autos
            .iter()
            .enumerate()
            .map(|(i, &u)| index[&(i, gamma.identity[gamma.src[u]])])
            .collect();
        FiniteGroupoid {
            object_labels: autos.iter().map(|&u| gamma.morphism_labels[u].clone()).collect(),
            src,
            tgt,
            morphism_labels: labels,
            identity,
            inverse,
            compose,
            out,
            skeleton: OnceLock::new(),
            aut_classes: OnceLock::new(),
        }
    }

    pub fn num_objects(&self) -> usize {
        self.object_labels.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.src.len()
    }

    pub fn src(&self, f: usize) -> usize {
        self.src[f]
    }

    pub fn tgt(&self, f: usize) -> usize {
        self.tgt[f]
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identity[x]
    }

    pub fn inverse(&self, f: usize) -> usize {
        self.inverse[f]
    }

    pub fn object_label(&self, x: usize) -> &str {
        &self.object_labels[x]
    }

    pub fn morphism_label(&self, f: usize) -> &str {
        &self.morphism_labels[f]
    }

    /// `f∘g`.
    ///
    /// # Panics
    ///
    /// Panics if `src(f) != tgt(g)`.
    pub fn compose(&self, f: usize, g: usize) -> usize {
        match self.compose.get(&(f, g)) {
            Some(&h) => h,
            None => panic!("morphisms {f} and {g} are not composable"),
        }
    }

    /// `φ∘u∘φ⁻¹` for an automorphism `u` of `src(φ)`.
    pub fn conj(&self, phi: usize, u: usize) -> usize {
        self.compose(self.compose(phi, u), self.inverse[phi])
    }

    /// Morphisms out of `x`, in index order.
    pub fn out_of(&self, x: usize) -> &[usize] {
        &self.out[x]
    }

    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        self.out[x].iter().copied().filter(|&f| self.tgt[f] == y).collect()
    }

    pub fn is_automorphism(&self, f: usize) -> bool {
        self.src[f] == self.tgt[f]
    }

    pub fn automorphisms(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_morphisms()).filter(|&f| self.is_automorphism(f))
    }

    /// Re-runs the axiom checks; groupoids built by this module always pass.
    pub fn validate(&self) -> Result<()> {
        let compose: Vec<(usize, usize, usize)> =
            self.compose.iter().map(|(&(f, g), &h)| (f, g, h)).collect();
        Self::from_parts(
            self.object_labels.clone(),
            self.src.clone(),
            self.tgt.clone(),
            self.morphism_labels.clone(),
            &compose,
        )
        .map(|_| ())
    }

    pub fn skeleton(&self) -> &GroupoidSkeleton {
        self.skeleton.get_or_init(|| GroupoidSkeleton::build(self))
    }

    /// Conjugacy classes of automorphisms, i.e. isomorphism classes of
    /// objects of Λ(Γ); representatives are least morphism indices.
    pub fn automorphism_classes(&self) -> &AutomorphismClasses {
        self.aut_classes.get_or_init(|| {
            let mut class_of = HashMap::new();
            let mut reps = Vec::new();
            let mut members = Vec::new();
            for u in self.automorphisms() {
                if class_of.contains_key(&u) {
                    continue;
                }
                let mut class: Vec<usize> =
                    self.out[self.src[u]].iter().map(|&phi| self.conj(phi, u)).collect();
                class.sort_unstable();
                class.dedup();
                for &v in &class {
                    class_of.insert(v, reps.len());
                }
                reps.push(u);
                members.push(class);
            }
            AutomorphismClasses {
                reps,
                members,
                class_of,
            }
        })
    }
}

fn incoming(tgt: &[usize], n: usize) -> Vec<Vec<usize>> {
    let mut inc = vec![Vec::new(); n];
    for (f, &t) in tgt.iter().enumerate() {
        inc[t].push(f);
    }
    inc
}

/// Classes of automorphisms under conjugation.
#[derive(Debug, Clone)]
pub struct AutomorphismClasses {
    pub reps: Vec<usize>,
    pub members: Vec<Vec<usize>>,
    class_of: HashMap<usize, usize>,
}

impl AutomorphismClasses {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Class of an automorphism; `None` for morphisms that are not
    /// automorphisms.
    pub fn class_of(&self, u: usize) -> Option<usize> {
        self.class_of.get(&u).copied()
    }
}

/// One connected component of a groupoid, reduced to a group.
#[derive(Debug, Clone)]
pub struct SkeletonComponent {
    pub representative: usize,
    pub objects: Vec<usize>,
    /// Automorphisms of the representative, in index order; group element
    /// `i` of `group` is `automorphisms[i]`.
    pub automorphisms: Vec<usize>,
    pub group: Arc<FiniteGroup>,
}

impl SkeletonComponent {
    /// Group element of an automorphism of the representative.
    pub fn element_of(&self, f: usize) -> Option<usize> {
        self.automorphisms.binary_search(&f).ok()
    }
}

/// A skeleton: the groupoid as a disjoint union of groups.
#[derive(Debug, Clone)]
pub struct GroupoidSkeleton {
    pub components: Vec<SkeletonComponent>,
    pub component_of: Vec<usize>,
    /// For each object, the least-index morphism to its representative.
    pub transport: Vec<usize>,
}

impl GroupoidSkeleton {
    fn build(g: &FiniteGroupoid) -> Self {
        let n = g.num_objects();
        let mut component_of = vec![usize::MAX; n];
        let mut transport = vec![usize::MAX; n];
        let mut components = Vec::new();
        for x in 0..n {
            if component_of[x] != usize::MAX {
                continue;
            }
            let c = components.len();
            let mut objects: Vec<usize> = g.out[x].iter().map(|&f| g.tgt[f]).collect();
            objects.sort_unstable();
            objects.dedup();
            for &y in &objects {
                component_of[y] = c;
                transport[y] = g.hom(y, x)[0];
            }
            let automorphisms = g.hom(x, x);
            let pos: HashMap<usize, usize> =
                automorphisms.iter().enumerate().map(|(i, &f)| (f, i)).collect();
            let table: Vec<Vec<usize>> = automorphisms
                .iter()
                .map(|&a| automorphisms.iter().map(|&b| pos[&g.compose(a, b)]).collect())
                .collect();
            let labels = automorphisms.iter().map(|&f| g.morphism_labels[f].clone()).collect();
            let group = FiniteGroup::from_mult_table_labeled(
                &table,
                labels,
                &format!("Aut({})", g.object_labels[x]),
            )
            .expect("automorphisms of an object form a group");
            components.push(SkeletonComponent {
                representative: x,
                objects,
                automorphisms,
                group: Arc::new(group),
            });
        }
        GroupoidSkeleton {
            components,
            component_of,
            transport,
        }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// A functor between finite groupoids.
#[derive(Debug, Clone)]
pub struct GroupoidMap {
    pub source: Arc<FiniteGroupoid>,
    pub target: Arc<FiniteGroupoid>,
    pub object_map: Vec<usize>,
    pub morphism_map: Vec<usize>,
    faithful: bool,
}

impl GroupoidMap {
    /// Validates that the maps define a functor.
    pub fn new(
        source: Arc<FiniteGroupoid>,
        target: Arc<FiniteGroupoid>,
        object_map: Vec<usize>,
        morphism_map: Vec<usize>,
    ) -> Result<Self> {
        if object_map.len() != source.num_objects() || morphism_map.len() != source.num_morphisms() {
            return Err(Error::Shape("groupoid map does not cover the source".into()));
        }
        for (f, &a) in morphism_map.iter().enumerate() {
            if a >= target.num_morphisms()
                || target.src(a) != object_map[source.src(f)]
                || target.tgt(a) != object_map[source.tgt(f)]
            {
                return Err(Error::NotFunctor(format!("morphism {f} is sent to a morphism with the wrong endpoints")));
            }
        }
        for x in 0..source.num_objects() {
            if morphism_map[source.identity(x)] != target.identity(object_map[x]) {
                return Err(Error::NotFunctor(format!("identity of object {x} is not preserved")));
            }
        }
        for (&(f, g), &h) in &source.compose {
            if target.compose(morphism_map[f], morphism_map[g]) != morphism_map[h] {
                return Err(Error::NotFunctor(format!("composition ({f}, {g}) is not preserved")));
            }
        }
        let mut seen = HashMap::new();
        let faithful = (0..source.num_morphisms()).all(|f| {
            seen.insert((source.src(f), source.tgt(f), morphism_map[f]), f).is_none()
        });
        Ok(GroupoidMap {
            source,
            target,
            object_map,
            morphism_map,
            faithful,
        })
    }

    pub fn identity(g: Arc<FiniteGroupoid>) -> Self {
        let objects = (0..g.num_objects()).collect();
        let morphisms = (0..g.num_morphisms()).collect();
        GroupoidMap {
            source: g.clone(),
            target: g,
            object_map: objects,
            morphism_map: morphisms,
            faithful: true,
        }
    }

    pub fn is_faithful(&self) -> bool {
        self.faithful
    }
}

/// The map Λ(H) → Λ(G) induced by a subgroup inclusion, where Λ(H) is built
/// on the extracted group `H` (element `i` of `H` is `h.members()[i]`).
pub fn groupoid_map_from_inclusion(
    g_inertia: &Arc<FiniteGroupoid>,
    h: &Subgroup,
) -> GroupoidMap {
    let h_group = h.extract();
    let source = Arc::new(FiniteGroupoid::inertia(&h_group));
    let n = h.parent().order();
    let k = h.order();
    let object_map: Vec<usize> = h.members().to_vec();
    let morphism_map = (0..k * k)
        .map(|f| h.members()[f / k] * n + h.members()[f % k])
        .collect();
    debug_assert_eq!(g_inertia.num_objects(), n);
    GroupoidMap {
        source,
        target: g_inertia.clone(),
        object_map,
        morphism_map,
        faithful: true,
    }
}

#[derive(Serialize)]
struct GroupoidJson<'a> {
    objects: &'a [String],
    morphisms: Vec<MorphismJson<'a>>,
    composition: Vec<[usize; 3]>,
}

#[derive(Serialize)]
struct MorphismJson<'a> {
    label: &'a str,
    src: usize,
    tgt: usize,
}

impl Serialize for FiniteGroupoid {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut composition: Vec<[usize; 3]> =
            self.compose.iter().map(|(&(f, g), &h)| [f, g, h]).collect();
        composition.sort_unstable();
        GroupoidJson {
            objects: &self.object_labels,
            morphisms: (0..self.num_morphisms())
                .map(|f| MorphismJson {
                    label: &self.morphism_labels[f],
                    src: self.src[f],
                    tgt: self.tgt[f],
                })
                .collect(),
            composition,
        }
        .serialize(serializer)
    }
}
