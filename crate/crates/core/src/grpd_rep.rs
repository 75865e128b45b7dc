//! Representations of finite groupoids, their characters, and induction.
//!
//! A representation assigns a dimension to every object and a matrix of
//! shape `dim(tgt) × dim(src)` to every morphism. Its character is a
//! function on automorphisms that is constant on conjugacy classes, stored
//! as a [`ClassFunction`] with one value per class.

use std::collections::HashMap;
use std::sync::Arc;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::groupoid::{FiniteGroupoid, GroupoidMap};
use crate::matrix::Matrix;
use crate::scalar::Field;

#[derive(Clone, Debug)]
pub struct GroupoidRep<K> {
    groupoid: Arc<FiniteGroupoid>,
    dims: Vec<usize>,
    mats: Vec<Matrix<K>>,
    zero: K,
}

impl<K: Field> GroupoidRep<K> {
    /// Checks shapes only; see [`GroupoidRep::check_functor`] for the
    /// functor laws.
    pub fn new(
        groupoid: Arc<FiniteGroupoid>,
        dims: Vec<usize>,
        mats: Vec<Matrix<K>>,
        like: &K,
    ) -> Result<Self> {
        if dims.len() != groupoid.num_objects() || mats.len() != groupoid.num_morphisms() {
            return Err(Error::Shape("representation does not cover the groupoid".into()));
        }
        for (f, m) in mats.iter().enumerate() {
            let want = (dims[groupoid.tgt(f)], dims[groupoid.src(f)]);
            if (m.rows(), m.cols()) != want {
                return Err(Error::Shape(format!(
                    "matrix of morphism {f} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    want.0,
                    want.1
                )));
            }
        }
        Ok(GroupoidRep {
            groupoid,
            dims,
            mats,
            zero: like.zero_like(),
        })
    }

    /// One-dimensional representation with every morphism acting as 1.
    pub fn trivial(groupoid: Arc<FiniteGroupoid>, like: &K) -> Self {
        let dims = vec![1; groupoid.num_objects()];
        let mats = vec![Matrix::identity(1, like); groupoid.num_morphisms()];
        GroupoidRep {
            groupoid,
            dims,
            mats,
            zero: like.zero_like(),
        }
    }

    /// The representation `x ↦ k[{f : tgt(f) = x}]`, with `γ` sending the
    /// basis vector `e_f` to `e_{γ∘f}`. For a group this is the regular
    /// representation.
    pub fn regular(groupoid: Arc<FiniteGroupoid>, like: &K) -> Self {
        let n = groupoid.num_objects();
        let m = groupoid.num_morphisms();
        let mut into: Vec<Vec<usize>> = vec![Vec::new(); n];
        for f in 0..m {
            into[groupoid.tgt(f)].push(f);
        }
        let pos: HashMap<usize, usize> = into
            .iter()
            .flat_map(|list| list.iter().enumerate().map(|(i, &f)| (f, i)))
            .collect();
        let mats = (0..m)
            .map(|g| {
                let (s, t) = (groupoid.src(g), groupoid.tgt(g));
                let mut mat = Matrix::zeros(into[t].len(), into[s].len(), like);
                for (i, &f) in into[s].iter().enumerate() {
                    mat.set(pos[&groupoid.compose(g, f)], i, like.one_like());
                }
                mat
            })
            .collect();
        GroupoidRep {
            dims: into.iter().map(Vec::len).collect(),
            groupoid,
            mats,
            zero: like.zero_like(),
        }
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, x: usize) -> usize {
        self.dims[x]
    }

    pub fn matrix(&self, f: usize) -> &Matrix<K> {
        &self.mats[f]
    }

    pub fn zero_scalar(&self) -> &K {
        &self.zero
    }

    /// Replaces the matrix of one morphism.
    pub fn with_matrix(mut self, f: usize, m: Matrix<K>) -> Result<Self> {
        if (m.rows(), m.cols()) != (self.mats[f].rows(), self.mats[f].cols()) {
            return Err(Error::Shape(format!("replacement matrix for morphism {f} has the wrong shape")));
        }
        self.mats[f] = m;
        Ok(self)
    }

    /// Checks `ρ(id) = I` and `ρ(f∘g) = ρ(f)ρ(g)` on every composable pair.
    pub fn check_functor(&self) -> Result<()> {
        let g = &self.groupoid;
        for x in 0..g.num_objects() {
            if !self.mats[g.identity(x)].is_identity() {
                return Err(Error::NotFunctor(format!("identity of object {x} is not sent to I")));
            }
        }
        for f in 0..g.num_morphisms() {
            for &h in g.out_of(g.tgt(f)) {
                let lhs = &self.mats[g.compose(h, f)];
                let rhs = self.mats[h].mul(&self.mats[f])?;
                if *lhs != rhs {
                    return Err(Error::NotFunctor(format!(
                        "composition fails for the pair ({}, {}) = ({h}, {f})",
                        g.morphism_label(h),
                        g.morphism_label(f)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Traces at the representative automorphism of each class.
    pub fn character(&self) -> ClassFunction<K> {
        let classes = self.groupoid.automorphism_classes();
        let values = classes
            .reps
            .iter()
            .map(|&u| self.mats[u].trace().expect("automorphisms act by square matrices"))
            .collect();
        ClassFunction {
            groupoid: self.groupoid.clone(),
            values,
            zero: self.zero.clone(),
        }
    }

    /// Objectwise direct sum.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if !Arc::ptr_eq(&self.groupoid, &other.groupoid)
            && self.groupoid.num_morphisms() != other.groupoid.num_morphisms()
        {
            return Err(Error::Shape("direct sum of representations of different groupoids".into()));
        }
        Ok(GroupoidRep {
            groupoid: self.groupoid.clone(),
            dims: self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect(),
            mats: self.mats.iter().zip(&other.mats).map(|(a, b)| a.direct_sum(b)).collect(),
            zero: self.zero.clone(),
        })
    }

    /// Precomposition with `α`.
    pub fn restrict(&self, alpha: &GroupoidMap) -> Result<Self> {
        self.require_target(alpha)?;
        Ok(GroupoidRep {
            groupoid: alpha.source.clone(),
            dims: alpha.object_map.iter().map(|&x| self.dims[x]).collect(),
            mats: alpha.morphism_map.iter().map(|&f| self.mats[f].clone()).collect(),
            zero: self.zero.clone(),
        })
    }

    fn require_target(&self, alpha: &GroupoidMap) -> Result<()> {
        if Arc::ptr_eq(&alpha.target, &self.groupoid)
            || (alpha.target.num_objects() == self.groupoid.num_objects()
                && alpha.target.num_morphisms() == self.groupoid.num_morphisms())
        {
            Ok(())
        } else {
            Err(Error::Shape("groupoid map does not land in this representation's groupoid".into()))
        }
    }

    /// Induction along a faithful `α: H → Γ` of a representation of `H`.
    ///
    /// Both groupoids are reduced to their skeletons. Each component of `H`
    /// with representative `y` maps into the component of `Γ` containing
    /// `α(y)`, and conjugating by the transport morphism `s: α(y) → x`
    /// embeds `Aut_H(y)` into `Aut_Γ(x)`. The induced representation at `x`
    /// is the direct sum of the classical inductions along these embeddings,
    /// in the basis `r_i ⊗ v` given by left coset representatives. It is
    /// carried to the other objects of the component along the transport
    /// morphisms and is zero on components that `α` misses.
    pub fn induce(alpha: &GroupoidMap, rep: &GroupoidRep<K>) -> Result<GroupoidRep<K>> {
        if !alpha.is_faithful() {
            return Err(Error::Unsupported("induction along a non-faithful groupoid map".into()));
        }
        if rep.groupoid.num_morphisms() != alpha.source.num_morphisms() {
            return Err(Error::Shape("representation is not on the source of the map".into()));
        }
        let h = &alpha.source;
        let gamma = &alpha.target;
        let sk_h = h.skeleton();
        let sk_g = gamma.skeleton();
        let like = &rep.zero;

        // aut_mats[c][a]: matrix of the induced representation at the
        // representative of Γ-component c, for automorphism index a
        let mut aut_mats: Vec<Vec<Matrix<K>>> = sk_g
            .components
            .iter()
            .map(|c| vec![Matrix::zeros(0, 0, like); c.group.order()])
            .collect();
        for comp_h in &sk_h.components {
            let y = comp_h.representative;
            let ay = alpha.object_map[y];
            let c = sk_g.component_of[ay];
            let comp_g = &sk_g.components[c];
            let a_group = &comp_g.group;
            let s = sk_g.transport[ay];
            // image of Aut_H(y) in Aut_Γ(x_c), and its inverse
            let mut from_image: HashMap<usize, usize> = HashMap::new();
            for &b in &comp_h.automorphisms {
                let img = gamma.conj(s, alpha.morphism_map[b]);
                let e = comp_g.element_of(img).expect("conjugate lands in Aut(x)");
                from_image.insert(e, b);
            }
            let members: Vec<usize> = from_image.keys().copied().collect();
            let k = Subgroup::new(a_group, &members)?;
            let reps = a_group.left_coset_representatives(&k)?;
            let d = rep.dims[y];
            let m = reps.len();
            for (a, slot) in aut_mats[c].iter_mut().enumerate() {
                let mut block = Matrix::zeros(m * d, m * d, like);
                for (i, &r) in reps.iter().enumerate() {
                    let ar = a_group.mul(a, r);
                    let (i2, kk) = reps
                        .iter()
                        .enumerate()
                        .find_map(|(i2, &r2)| {
                            let kk = a_group.mul(a_group.inv(r2), ar);
                            k.contains(kk).then_some((i2, kk))
                        })
                        .expect("every element lies in some coset");
                    let v = &rep.mats[from_image[&kk]];
                    for p in 0..d {
                        for q in 0..d {
                            block.set(i2 * d + p, i * d + q, v.get(p, q).clone());
                        }
                    }
                }
                *slot = slot.direct_sum(&block);
            }
        }
        let dims: Vec<usize> = (0..gamma.num_objects())
            .map(|x| aut_mats[sk_g.component_of[x]][0].rows())
            .collect();
        let mats = (0..gamma.num_morphisms())
            .map(|f| {
                let (x, x2) = (gamma.src(f), gamma.tgt(f));
                let c = sk_g.component_of[x];
                // T_{x'} ∘ f ∘ T_x⁻¹ is an automorphism of the representative
                let t_inv = gamma.inverse(sk_g.transport[x]);
                let conj = gamma.compose(gamma.compose(sk_g.transport[x2], f), t_inv);
                let a = sk_g.components[c].element_of(conj).expect("automorphism of representative");
                aut_mats[c][a].clone()
            })
            .collect();
        GroupoidRep::new(gamma.clone(), dims, mats, like)
    }
}

/// A function on automorphisms of a groupoid, constant on conjugacy classes.
#[derive(Clone, Debug)]
pub struct ClassFunction<K> {
    groupoid: Arc<FiniteGroupoid>,
    values: Vec<K>,
    zero: K,
}

impl<K: Field> ClassFunction<K> {
    /// One value per class of [`FiniteGroupoid::automorphism_classes`].
    pub fn new(groupoid: Arc<FiniteGroupoid>, values: Vec<K>, like: &K) -> Result<Self> {
        let classes = groupoid.automorphism_classes().len();
        if values.len() != classes {
            return Err(Error::Shape(format!("{} values for {classes} classes", values.len())));
        }
        Ok(ClassFunction {
            groupoid,
            values,
            zero: like.zero_like(),
        })
    }

    pub fn from_fn(groupoid: Arc<FiniteGroupoid>, like: &K, f: impl Fn(usize) -> K) -> Self {
        let values = groupoid.automorphism_classes().reps.iter().map(|&u| f(u)).collect();
        ClassFunction {
            groupoid,
            values,
            zero: like.zero_like(),
        }
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    /// Values in class order.
    pub fn values(&self) -> &[K] {
        &self.values
    }

    /// Representative automorphism of each class.
    pub fn representatives(&self) -> &[usize] {
        &self.groupoid.automorphism_classes().reps
    }

    /// Value at an automorphism.
    ///
    /// # Panics
    ///
    /// Panics if `u` is not an automorphism.
    pub fn value_at(&self, u: usize) -> &K {
        let c = self
            .groupoid
            .automorphism_classes()
            .class_of(u)
            .expect("class functions are evaluated at automorphisms");
        &self.values[c]
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&K, &K) -> K) -> Result<Self> {
        if self.values.len() != other.values.len() {
            return Err(Error::Shape("class functions on different groupoids".into()));
        }
        Ok(ClassFunction {
            groupoid: self.groupoid.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| op(a, b)).collect(),
            zero: self.zero.clone(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, K::plus)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, K::times)
    }

    /// `χ ∘ α` as a class function on the source of `α`.
    pub fn pullback(&self, alpha: &GroupoidMap) -> Self {
        ClassFunction::from_fn(alpha.source.clone(), &self.zero, |u| {
            self.value_at(alpha.morphism_map[u]).clone()
        })
    }

    /// Labels of the representative automorphisms paired with the values.
    pub fn labelled_values(&self) -> Vec<(&str, &K)> {
        self.representatives()
            .iter()
            .map(|&u| self.groupoid.morphism_label(u))
            .zip(&self.values)
            .collect()
    }
}

impl<K: Field> PartialEq for ClassFunction<K> {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
    }
}

impl<K: Serialize> Serialize for ClassFunction<K> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let reps = &self.groupoid.automorphism_classes().reps;
        let mut map = serializer.serialize_map(Some(reps.len()))?;
        for (&u, v) in reps.iter().zip(&self.values) {
            map.serialize_entry(self.groupoid.morphism_label(u), v)?;
        }
        map.end()
    }
}

/// Character value of `ind_α χ` at an automorphism `g` of `x`:
///
/// ```text
/// Σ_{y ∈ H₀} 1/|[y]| · 1/|Aut_H(y)| · Σ_{s: x → α(y), s g s⁻¹ ∈ α(Aut_H(y))} χ(y, s g s⁻¹)
/// ```
///
/// where `[y]` is the isomorphism class of `y` in `H`. The sums are evaluated
/// term by term.
pub fn induced_character_value<K: Field>(
    alpha: &GroupoidMap,
    chi: &ClassFunction<K>,
    x: usize,
    g: usize,
) -> Result<K> {
    if !alpha.is_faithful() {
        return Err(Error::Unsupported("induced character along a non-faithful map".into()));
    }
    let gamma = &alpha.target;
    if gamma.src(g) != x || gamma.tgt(g) != x {
        return Err(Error::Parameter(format!("morphism {g} is not an automorphism of object {x}")));
    }
    let h = &alpha.source;
    let sk = h.skeleton();
    let mut total = chi.zero.clone();
    for y in 0..h.num_objects() {
        let ay = alpha.object_map[y];
        let auts: HashMap<usize, usize> =
            h.hom(y, y).into_iter().map(|b| (alpha.morphism_map[b], b)).collect();
        let mut inner = chi.zero.clone();
        for s in gamma.hom(x, ay) {
            if let Some(&b) = auts.get(&gamma.conj(s, g)) {
                inner = inner.plus(chi.value_at(b));
            }
        }
        if inner.is_zero() {
            continue;
        }
        let orbit = sk.components[sk.component_of[y]].objects.len();
        let weight = (orbit * auts.len()) as i64;
        total = total.plus(&inner.div_int(weight).expect("nonzero weight"));
    }
    Ok(total)
}

/// A function on commuting pairs of a group, invariant under simultaneous
/// conjugation.
#[derive(Clone, Debug)]
pub struct TwoClassFunction<K> {
    group: Arc<FiniteGroup>,
    values: Vec<Option<K>>,
    zero: K,
}

impl<K: Field> TwoClassFunction<K> {
    /// `values[g·n + h]` must be present exactly on commuting pairs; the
    /// invariance `χ(s⁻¹gs, s⁻¹hs) = χ(g, h)` is checked for every `s`.
    pub fn new(group: Arc<FiniteGroup>, values: Vec<Option<K>>, like: &K) -> Result<Self> {
        let n = group.order();
        if values.len() != n * n {
            return Err(Error::Shape(format!("{} values for {} pairs", values.len(), n * n)));
        }
        for g in 0..n {
            for h in 0..n {
                if values[g * n + h].is_some() != group.commute(g, h) {
                    return Err(Error::Shape(format!(
                        "value at ({g}, {h}) must be given exactly when the pair commutes"
                    )));
                }
            }
        }
        let f = TwoClassFunction {
            group,
            values,
            zero: like.zero_like(),
        };
        f.check_invariance()?;
        Ok(f)
    }

    /// Evaluates `f` on every commuting pair, then validates.
    pub fn from_fn(group: Arc<FiniteGroup>, like: &K, f: impl Fn(usize, usize) -> K) -> Result<Self> {
        let n = group.order();
        let values = (0..n * n)
            .map(|i| {
                let (g, h) = (i / n, i % n);
                group.commute(g, h).then(|| f(g, h))
            })
            .collect();
        Self::new(group, values, like)
    }

    pub fn check_invariance(&self) -> Result<()> {
        let n = self.group.order();
        for (g, h) in self.group.commuting_pairs() {
            let v = self.values[g * n + h].as_ref().expect("commuting pair");
            for s in 0..n {
                let si = self.group.inv(s);
                let (g2, h2) = (self.group.conj(si, g), self.group.conj(si, h));
                if self.values[g2 * n + h2].as_ref() != Some(v) {
                    return Err(Error::NotClassInvariant { g, h, s });
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn get(&self, g: usize, h: usize) -> Option<&K> {
        self.values[g * self.group.order() + h].as_ref()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.group.order() != other.group.order() {
            return Err(Error::Shape("2-class functions on different groups".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => Some(a.plus(b)),
                _ => None,
            })
            .collect();
        Ok(TwoClassFunction {
            group: self.group.clone(),
            values,
            zero: self.zero.clone(),
        })
    }

    /// The same values read as a class function on Λ(G), whose automorphisms
    /// `(u, g)` are exactly the commuting pairs.
    pub fn to_inertia_class_function(&self, inertia: Arc<FiniteGroupoid>) -> ClassFunction<K> {
        let n = self.group.order();
        ClassFunction::from_fn(inertia, &self.zero, |f| {
            self.get(f / n, f % n).expect("automorphisms of Λ(G) are commuting pairs").clone()
        })
    }

    /// Reads a class function on Λ(G) as a 2-class function.
    pub fn from_inertia_class_function(group: Arc<FiniteGroup>, cf: &ClassFunction<K>) -> Result<Self> {
        let n = group.order();
        if cf.groupoid.num_morphisms() != n * n {
            return Err(Error::Shape("class function is not on Λ(G)".into()));
        }
        let like = cf.zero.clone();
        Self::from_fn(group, &like, |g, h| cf.value_at(g * n + h).clone())
    }

    /// Values on representatives of the commuting-pair classes.
    pub fn class_table(&self) -> Vec<((usize, usize), &K)> {
        self.group
            .commuting_pair_classes()
            .iter()
            .map(|orbit| {
                let (g, h) = orbit[0];
                ((g, h), self.get(g, h).expect("commuting pair"))
            })
            .collect()
    }
}

impl<K: Field> PartialEq for TwoClassFunction<K> {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
    }
}

impl<K: Serialize> Serialize for TwoClassFunction<K> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.group.order();
        let entries: Vec<(String, &K)> = (0..n * n)
            .filter_map(|i| {
                self.values[i].as_ref().map(|v| {
                    (
                        format!("({}, {})", self.group.label(i / n), self.group.label(i % n)),
                        v,
                    )
                })
            })
            .collect();
        let mut map = serializer.serialize_map(Some(entries.len()))?;
        for (k, v) in entries {
            map.serialize_entry(&k, v)?;
        }
        map.end()
    }
}

/// The averaged conjugation sum
/// `(1/|H|) Σ_{s ∈ G: s g₁ s⁻¹, s g₂ s⁻¹ ∈ H} χ(s g₁ s⁻¹, s g₂ s⁻¹)`
/// on every commuting pair of `G`. `chi` lives on `h.extract()`.
pub fn hkr_induced_2class<K: Field>(
    h: &Subgroup,
    chi: &TwoClassFunction<K>,
) -> Result<TwoClassFunction<K>> {
    let g = h.parent();
    if chi.group.order() != h.order() || *chi.group != h.extract() {
        return Err(Error::Shape("2-class function is not defined on the subgroup".into()));
    }
    let order = h.order() as i64;
    TwoClassFunction::from_fn(g.clone(), &chi.zero, |g1, g2| {
        let mut acc = chi.zero.clone();
        for s in 0..g.order() {
            let (a, b) = (g.conj(s, g1), g.conj(s, g2));
            if let (Some(pa), Some(pb)) = (h.position(a), h.position(b)) {
                acc = acc.plus(chi.get(pa, pb).expect("conjugates of commuting elements commute"));
            }
        }
        acc.div_int(order).expect("nonzero order")
    })
}
