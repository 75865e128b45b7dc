//! 2-cocycles with values in the M-th roots of unity, and H²(G, Z/M).
//!
//! A cocycle is stored additively as an exponent table `e(g, h) ∈ Z/M`
//! standing for `c(g, h) = ζ_M^{e(g, h)}`. The multiplicative condition
//! `c(g₁g₂, g₃) c(g₁, g₂) = c(g₁, g₂g₃) c(g₂, g₃)` becomes
//!
//! ```text
//! e(g₁g₂, g₃) + e(g₁, g₂) = e(g₁, g₂g₃) + e(g₂, g₃)   (mod M)
//! ```
//!
//! Cohomology is computed from the inhomogeneous bar complex
//! `C¹ → C² → C³` over Z, diagonalised by unimodular transforms and then
//! reduced modulo M.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::Serialize;

use crate::cyclotomic::CycNumber;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup};
use crate::smith::{diagonalize, invariant_factors, IntMatrix, Track};

/// Largest group order accepted by [`h2`].
pub const H2_ORDER_CAP: usize = 16;

#[derive(Clone)]
pub struct Cocycle {
    group: Arc<FiniteGroup>,
    modulus: u32,
    table: Vec<u32>,
}

impl PartialEq for Cocycle {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.table == other.table && *self.group == *other.group
    }
}

impl Eq for Cocycle {}

impl fmt::Debug for Cocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cocycle(mod {}, {:?})", self.modulus, self.rows())
    }
}

/// First triple violating the additive cocycle condition.
pub fn check_cocycle(group: &FiniteGroup, modulus: u32, table: &[u32]) -> Option<(usize, usize, usize)> {
    let n = group.order();
    let m = modulus as u64;
    let e = |a: usize, b: usize| table[a * n + b] as u64;
    for g1 in 0..n {
        for g2 in 0..n {
            let g12 = group.mul(g1, g2);
            for g3 in 0..n {
                let lhs = e(g12, g3) + e(g1, g2);
                let rhs = e(g1, group.mul(g2, g3)) + e(g2, g3);
                if lhs % m != rhs % m {
                    return Some((g1, g2, g3));
                }
            }
        }
    }
    None
}

impl Cocycle {
    /// Validates a row-major exponent table; entries are reduced mod M.
    pub fn new(group: Arc<FiniteGroup>, modulus: u32, table: Vec<u32>) -> Result<Self> {
        let c = Self::unchecked(group, modulus, table)?;
        match check_cocycle(&c.group, modulus, &c.table) {
            Some((a, b, d)) => Err(Error::CocycleViolation(a, b, d)),
            None => Ok(c),
        }
    }

    /// Checks the shape only.
    pub fn unchecked(group: Arc<FiniteGroup>, modulus: u32, table: Vec<u32>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Parameter("modulus must be positive".into()));
        }
        let n = group.order();
        if table.len() != n * n {
            return Err(Error::Shape(format!("cocycle table has {} entries, expected {}", table.len(), n * n)));
        }
        let table = table.into_iter().map(|x| x % modulus).collect();
        Ok(Cocycle {
            group,
            modulus,
            table,
        })
    }

    pub fn from_rows(group: Arc<FiniteGroup>, modulus: u32, rows: &[Vec<u32>]) -> Result<Self> {
        let n = group.order();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(format!("cocycle table must be {n}x{n}")));
        }
        Self::new(group, modulus, rows.concat())
    }

    pub fn zero(group: Arc<FiniteGroup>, modulus: u32) -> Self {
        let n = group.order();
        Cocycle {
            group,
            modulus,
            table: vec![0; n * n],
        }
    }

    /// `δb(g, h) = b(g) + b(h) − b(gh)`.
    pub fn coboundary(group: Arc<FiniteGroup>, modulus: u32, b: &[u32]) -> Result<Self> {
        let n = group.order();
        if b.len() != n {
            return Err(Error::Shape(format!("cochain has {} entries, expected {n}", b.len())));
        }
        let m = modulus as u64;
        let mut table = Vec::with_capacity(n * n);
        for g in 0..n {
            for h in 0..n {
                let v = (b[g] as u64 % m) + (b[h] as u64 % m) + m - (b[group.mul(g, h)] as u64 % m);
                table.push((v % m) as u32);
            }
        }
        Self::unchecked(group, modulus, table)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.table.chunks(self.group.order().max(1)).map(<[u32]>::to_vec).collect()
    }

    pub fn exponent(&self, g: usize, h: usize) -> u32 {
        self.table[g * self.group.order() + h]
    }

    /// `ζ_M^{e(g, h)}` at level M.
    pub fn scalar(&self, g: usize, h: usize) -> CycNumber {
        CycNumber::root_of_unity(self.modulus, self.exponent(g, h) as i64)
    }

    pub fn check(&self) -> Option<(usize, usize, usize)> {
        check_cocycle(&self.group, self.modulus, &self.table)
    }

    pub fn is_normalized(&self) -> bool {
        let e = self.group.identity();
        self.exponent(e, e) == 0
    }

    fn require_compatible(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::Parameter(format!(
                "moduli differ: {} vs {}",
                self.modulus, other.modulus
            )));
        }
        if *self.group != *other.group {
            return Err(Error::Parameter("cocycles on different groups".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.require_compatible(other)?;
        let m = self.modulus;
        Ok(Cocycle {
            group: self.group.clone(),
            modulus: m,
            table: self.table.iter().zip(&other.table).map(|(a, b)| (a + b) % m).collect(),
        })
    }

    pub fn negate(&self) -> Self {
        let m = self.modulus;
        Cocycle {
            group: self.group.clone(),
            modulus: m,
            table: self.table.iter().map(|&a| (m - a) % m).collect(),
        }
    }

    /// The same cocycle with exponents in Z/M' for a multiple M' of M.
    pub fn lift_modulus(&self, new_modulus: u32) -> Result<Self> {
        if new_modulus == 0 || new_modulus % self.modulus != 0 {
            return Err(Error::Parameter(format!(
                "{new_modulus} is not a multiple of {}",
                self.modulus
            )));
        }
        let f = new_modulus / self.modulus;
        Ok(Cocycle {
            group: self.group.clone(),
            modulus: new_modulus,
            table: self.table.iter().map(|&a| a * f).collect(),
        })
    }

    /// Subtracts the constant coboundary `b ≡ e(1, 1)`, giving a cohomologous
    /// cocycle with `e(1, g) = e(g, 1) = 0`.
    pub fn normalize(&self) -> Self {
        let e = self.group.identity();
        let k = self.exponent(e, e);
        let m = self.modulus;
        Cocycle {
            group: self.group.clone(),
            modulus: m,
            table: self.table.iter().map(|&a| (a + m - k) % m).collect(),
        }
    }
}

impl Serialize for Cocycle {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json {
            modulus: u32,
            table: Vec<Vec<u32>>,
        }
        Json {
            modulus: self.modulus,
            table: self.rows(),
        }
        .serialize(serializer)
    }
}

pub fn normalize_cocycle(c: &Cocycle) -> Cocycle {
    c.normalize()
}

/// Moves a cocycle on `H` (given on `h.extract()`) to `sHs⁻¹`:
/// `e′(s h s⁻¹, s h′ s⁻¹) = e(h, h′)`.
pub fn transport_cocycle(h: &Subgroup, c: &Cocycle, s: usize) -> Result<(Subgroup, Cocycle)> {
    let g = h.parent();
    if c.group.order() != h.order() {
        return Err(Error::Shape("cocycle is not defined on the subgroup".into()));
    }
    if s >= g.order() {
        return Err(Error::Parameter(format!("element {s} is out of range")));
    }
    let k = h.conjugate(s);
    let n = h.order();
    let mut table = vec![0; n * n];
    let pos: Vec<usize> = h
        .members()
        .iter()
        .map(|&x| k.position(g.conj(s, x)).expect("conjugate lies in sHs⁻¹"))
        .collect();
    for i in 0..n {
        for j in 0..n {
            table[pos[i] * n + pos[j]] = c.exponent(i, j);
        }
    }
    let out = Cocycle::unchecked(Arc::new(k.extract()), c.modulus, table)?;
    Ok((k, out))
}

/// Integer matrix of `δ¹: C¹ → C²`; rows are pairs `g·n + h`.
fn coboundary_matrix_1(g: &FiniteGroup) -> IntMatrix {
    let n = g.order();
    let mut d = IntMatrix::zeros(n * n, n);
    for a in 0..n {
        for b in 0..n {
            let r = a * n + b;
            *d.at_mut(r, a) += 1;
            *d.at_mut(r, b) += 1;
            *d.at_mut(r, g.mul(a, b)) -= 1;
        }
    }
    d
}

/// Integer matrix of `δ²: C² → C³`,
/// `δc(g₁,g₂,g₃) = c(g₂,g₃) − c(g₁g₂,g₃) + c(g₁,g₂g₃) − c(g₁,g₂)`.
fn coboundary_matrix_2(g: &FiniteGroup) -> IntMatrix {
    let n = g.order();
    let mut d = IntMatrix::zeros(n * n * n, n * n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let r = (a * n + b) * n + c;
                *d.at_mut(r, b * n + c) += 1;
                *d.at_mut(r, g.mul(a, b) * n + c) -= 1;
                *d.at_mut(r, a * n + g.mul(b, c)) += 1;
                *d.at_mut(r, a * n + b) -= 1;
            }
        }
    }
    d
}

fn rem(x: i128, m: u32) -> u32 {
    x.rem_euclid(m as i128) as u32
}

/// A witness `b` with `c − c′ = δb`, if the cocycles are cohomologous.
pub fn are_cohomologous(c: &Cocycle, c2: &Cocycle) -> Result<Option<Vec<u32>>> {
    c.require_compatible(c2)?;
    let g = &c.group;
    let n = g.order();
    let m = c.modulus;
    let mut rhs = IntMatrix::zeros(n * n, 1);
    for i in 0..n * n {
        rhs.data[i] = (c.table[i] as i128 - c2.table[i] as i128).rem_euclid(m as i128);
    }
    // D y = U r with y = V⁻¹ b
    let d = diagonalize(
        coboundary_matrix_1(g),
        Some(rhs),
        Track {
            v: true,
            ..Track::default()
        },
    )?;
    let t = d.left.expect("tracked");
    let v = d.v.expect("tracked");
    let mut y = vec![0i128; n];
    for i in 0..n * n {
        let ti = rem(t.data[i], m) as i128;
        let di = d.diag.get(i).copied().unwrap_or(0);
        match solve_mod(di, ti, m as i128) {
            Some(yi) if i < n => y[i] = yi,
            Some(_) => {}
            None => return Ok(None),
        }
    }
    let b: Vec<u32> = (0..n)
        .map(|i| rem((0..n).map(|k| v.at(i, k) * y[k]).sum::<i128>(), m))
        .collect();
    let witness = Cocycle::coboundary(g.clone(), m, &b)?;
    if witness.add(c2)? != *c {
        return Err(Error::Inconsistent("coboundary solution does not check".into()));
    }
    Ok(Some(b))
}

/// Some `y` with `d·y ≡ t (mod m)`.
fn solve_mod(d: i128, t: i128, m: i128) -> Option<i128> {
    let d = d.rem_euclid(m);
    let t = t.rem_euclid(m);
    let g = d.gcd(&m);
    if t % g != 0 {
        return None;
    }
    if d == 0 {
        return Some(0);
    }
    let (d1, t1, m1) = (d / g, t / g, m / g);
    let inv = mod_inverse(d1, m1)?;
    Some((t1 * inv).rem_euclid(m1))
}

fn mod_inverse(a: i128, m: i128) -> Option<i128> {
    if m == 1 {
        return Some(0);
    }
    let e = a.extended_gcd(&m);
    (e.gcd == 1).then(|| e.x.rem_euclid(m))
}

/// H²(G, Z/M) as a list of invariant factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyGroup {
    pub invariant_factors: Vec<u64>,
}

impl CohomologyGroup {
    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }
}

impl fmt::Display for CohomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return f.write_str("trivial");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        f.write_str(&parts.join(" x "))
    }
}

/// Cyclic summands of H²(G, Z/M): each entry is the order of a summand and
/// a cocycle generating it. The orders need not form a divisibility chain.
pub struct H2Decomposition {
    pub summands: Vec<(u64, Cocycle)>,
}

/// H²(G, Z/M) with explicit generating cocycles.
///
/// Let `D = U δ² V`. In the coordinates `y = V⁻¹x` the cocycles mod M are the
/// vectors with `y_i ∈ m_i Z/M`, `m_i = M / gcd(d_i, M)` (and `m_i = 1` past
/// the rank). Substituting `y = diag(m) z` turns the quotient by coboundaries
/// and by `M·Z^{C²}` into the cokernel of one integer relation matrix, which
/// is diagonalised again.
pub fn h2_decomposition(group: &Arc<FiniteGroup>, modulus: u32, cap: usize) -> Result<H2Decomposition> {
    if modulus == 0 {
        return Err(Error::Parameter("modulus must be positive".into()));
    }
    let n = group.order();
    if n > cap {
        return Err(Error::SizeCap {
            what: "group order for H^2".into(),
            size: n,
            cap,
        });
    }
    let m = modulus as i128;
    let n2 = n * n;
    let d2 = diagonalize(
        coboundary_matrix_2(group),
        None,
        Track {
            v: true,
            v_inv: true,
            ..Track::default()
        },
    )?;
    let v = d2.v.expect("tracked");
    let v_inv = d2.v_inv.expect("tracked");
    let mult: Vec<i128> = (0..n2)
        .map(|i| match d2.diag.get(i).copied().unwrap_or(0) {
            0 => 1,
            d => m / d.gcd(&m),
        })
        .collect();
    // relation matrix in z-coordinates: [diag(m)⁻¹ V⁻¹ δ¹ | diag(M / m_i)]
    let w = v_inv.mul(&coboundary_matrix_1(group))?;
    let mut rel = IntMatrix::zeros(n2, n + n2);
    for i in 0..n2 {
        for j in 0..n {
            let x = w.at(i, j);
            if x % mult[i] != 0 {
                return Err(Error::Inconsistent("coboundary outside the cocycle lattice".into()));
            }
            *rel.at_mut(i, j) = x / mult[i];
        }
        *rel.at_mut(i, n + i) = m / mult[i];
    }
    let dr = diagonalize(
        rel,
        None,
        Track {
            u_inv: true,
            ..Track::default()
        },
    )?;
    let u_inv = dr.u_inv.expect("tracked");
    let mut summands = Vec::new();
    for (i, &d) in dr.diag.iter().enumerate() {
        if d == 0 {
            return Err(Error::Inconsistent("H^2 computation produced a free summand".into()));
        }
        if d == 1 {
            continue;
        }
        let y: Vec<i128> = (0..n2).map(|k| mult[k] * u_inv.at(k, i)).collect();
        let table: Vec<u32> = (0..n2)
            .map(|r| rem((0..n2).map(|k| v.at(r, k) * y[k]).sum::<i128>(), modulus))
            .collect();
        let c = Cocycle::new(group.clone(), modulus, table)?;
        summands.push((d as u64, c));
    }
    Ok(H2Decomposition { summands })
}

/// H²(G, Z/M) for `|G| ≤` [`H2_ORDER_CAP`].
pub fn h2(group: &Arc<FiniteGroup>, modulus: u32) -> Result<CohomologyGroup> {
    h2_with_cap(group, modulus, H2_ORDER_CAP)
}

pub fn h2_with_cap(group: &Arc<FiniteGroup>, modulus: u32, cap: usize) -> Result<CohomologyGroup> {
    let dec = h2_decomposition(group, modulus, cap)?;
    let orders: Vec<u64> = dec.summands.iter().map(|(d, _)| *d).collect();
    Ok(CohomologyGroup {
        invariant_factors: invariant_factors(&orders),
    })
}

/// Cocycles generating the cyclic summands of H²(G, Z/M), with their orders.
pub fn h2_generators(group: &Arc<FiniteGroup>, modulus: u32) -> Result<Vec<(u64, Cocycle)>> {
    Ok(h2_decomposition(group, modulus, H2_ORDER_CAP)?.summands)
}
