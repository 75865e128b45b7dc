//! Exact arithmetic in the cyclotomic field Q(ζ_N).
//!
//! A [`CycNumber`] stores its level `N` and its coordinates over the power
//! basis `1, ζ_N, …, ζ_N^{φ(N)-1}`, reduced modulo the N-th cyclotomic
//! polynomial Φ_N with fully reduced rational coefficients. The
//! representation is canonical, so equality is coefficient equality once two
//! values sit at a common level.
//!
//! Per-level data (Φ_N and the reduced powers ζ_N^k, k < N) is computed once
//! and cached process-wide.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::Matrix;


/// Euler's totient φ(n).
pub fn euler_phi(n: u32) -> usize {
    assert!(n > 0, "euler_phi: n must be positive");
    let mut m = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result as usize
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Exact quotient of integer polynomials, divisor monic. Coefficients are
/// listed from the constant term up.
fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    debug_assert_eq!(den[dn], 1);
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        if c != 0 {
            for (t, &d) in den.iter().enumerate() {
                rem[k + t] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "division was not exact");
    quot
}

fn cyclotomic_poly_i64(n: u32) -> Vec<i64> {
    if n == 1 {
        return vec![-1, 1];
    }
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in divisors(n) {
        if d < n {
            p = exact_div_monic(&p, &level_data(d).poly);
        }
    }
    p
}

/// Coefficients of the N-th cyclotomic polynomial Φ_N, constant term first.
///
/// Computed by dividing `x^N - 1` by Φ_d for every proper divisor `d` of `N`.
///
/// # Panics
///
/// Panics if `n == 0`.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n > 0, "cyclotomic_polynomial: n must be positive");
    level_data(n).poly.iter().map(|&c| BigInt::from(c)).collect()
}

/// Cached data for one level.
#[derive(Debug)]
struct LevelData {
    n: u32,
    phi: usize,
    /// Φ_N, constant term first, length φ + 1, monic.
    poly: Vec<i64>,
    /// ζ_N^k reduced to the power basis, for 0 ≤ k < N.
    powers: Vec<Vec<i64>>,
}

fn level_data(n: u32) -> Arc<LevelData> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<LevelData>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(d) = cache.lock().unwrap().get(&n) {
        return d.clone();
    }
    // Computed outside the lock: building Φ_n recurses into smaller levels.
    let poly = cyclotomic_poly_i64(n);
    let phi = poly.len() - 1;
    debug_assert_eq!(phi, euler_phi(n));
    let mut powers = Vec::with_capacity(n as usize);
    let mut cur = vec![0i64; phi];
    cur[0] = 1;
    for _ in 0..n {
        powers.push(cur.clone());
        // multiply by x and reduce the x^phi term
        let top = cur[phi - 1];
        for i in (1..phi).rev() {
            cur[i] = cur[i - 1];
        }
        cur[0] = 0;
        if top != 0 {
            for i in 0..phi {
                cur[i] -= top * poly[i];
            }
        }
    }
    let data = Arc::new(LevelData {
        n,
        phi,
        poly,
        powers,
    });
    cache.lock().unwrap().entry(n).or_insert(data).clone()
}

fn lcm(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// An exact element of Q(ζ_N).
#[derive(Clone)]
pub struct CycNumber {
    level: u32,
    coeffs: Vec<BigRational>,
}

impl CycNumber {
    pub fn zero(level: u32) -> Self {
        assert!(level > 0, "cyclotomic level must be positive");
        CycNumber {
            level,
            coeffs: vec![BigRational::zero(); euler_phi(level)],
        }
    }

    pub fn one(level: u32) -> Self {
        Self::from_rational(level, BigRational::one())
    }

    pub fn from_rational(level: u32, q: BigRational) -> Self {
        let mut x = Self::zero(level);
        x.coeffs[0] = q;
        x
    }

    pub fn from_integer(level: u32, n: i64) -> Self {
        Self::from_rational(level, rat(n))
    }

    /// Builds a value from power-basis coordinates; the vector must have
    /// length φ(level).
    pub fn from_coeffs(level: u32, coeffs: Vec<BigRational>) -> Result<Self> {
        if level == 0 {
            return Err(Error::Parameter("cyclotomic level must be positive".into()));
        }
        let phi = euler_phi(level);
        if coeffs.len() != phi {
            return Err(Error::Shape(format!(
                "level {level} needs {phi} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(CycNumber { level, coeffs })
    }

    /// Reduces an arbitrary polynomial in ζ_N (constant term first).
    pub fn from_polynomial(level: u32, poly: &[BigRational]) -> Self {
        let data = level_data(level);
        let mut out = Self::zero(level);
        for (k, c) in poly.iter().enumerate() {
            if !c.is_zero() {
                add_scaled_power(&mut out.coeffs, &data, k % level as usize, c);
            }
        }
        out
    }

    /// ζ_N^k in canonical form; `k` is reduced modulo `N`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n > 0, "root_of_unity: n must be positive");
        let data = level_data(n);
        let e = k.rem_euclid(n as i64) as usize;
        CycNumber {
            level: n,
            coeffs: data.powers[e].iter().map(|&c| rat(c)).collect(),
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Power-basis coordinates, length φ(level).
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check_level(&self, other: &Self) -> Result<()> {
        if self.level == other.level {
            Ok(())
        } else {
            Err(Error::LevelMismatch {
                left: self.level,
                right: other.level,
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_level(other)?;
        Ok(CycNumber {
            level: self.level,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_level(other)?;
        Ok(CycNumber {
            level: self.level,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_level(other)?;
        let data = level_data(self.level);
        let phi = data.phi;
        let mut acc = vec![BigRational::zero(); phi];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let p = a * b;
                let k = i + j;
                if k < phi {
                    acc[k] += p;
                } else {
                    add_scaled_power(&mut acc, &data, k % data.n as usize, &p);
                }
            }
        }
        Ok(CycNumber {
            level: self.level,
            coeffs: acc,
        })
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φ_N.
    pub fn checked_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(self.level, q.recip()));
        }
        let data = level_data(self.level);
        // c·ζ^k, the common case for coherence scalars
        let nonzero: Vec<usize> = (0..data.phi).filter(|&i| !self.coeffs[i].is_zero()).collect();
        if nonzero.len() == 1 {
            let k = nonzero[0];
            let inv_root = Self::root_of_unity(self.level, -(k as i64));
            return Ok(inv_root.scale(&self.coeffs[k].recip()));
        }
        if let Some(k) = self.root_exponent() {
            return Ok(Self::root_of_unity(self.level, -(k as i64)));
        }
        let modulus: Vec<BigRational> = data.poly.iter().map(|&c| rat(c)).collect();
        let inv = poly_inverse_mod(&self.coeffs, &modulus).ok_or_else(|| {
            Error::Inconsistent("nonzero cyclotomic number without inverse".into())
        })?;
        Ok(Self::from_polynomial(self.level, &inv))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        CycNumber {
            level: self.level,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// `self^e`; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.checked_inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = Self::one(self.level);
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.checked_mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// Image under Q(ζ_N) → Q(ζ_M), ζ_N ↦ ζ_M^{M/N}. Requires N | M.
    pub fn embed(&self, m: u32) -> Result<Self> {
        if m == 0 || m % self.level != 0 {
            return Err(Error::LevelMismatch {
                left: self.level,
                right: m,
            });
        }
        if m == self.level {
            return Ok(self.clone());
        }
        let step = (m / self.level) as usize;
        let data = level_data(m);
        let mut out = Self::zero(m);
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                add_scaled_power(&mut out.coeffs, &data, (i * step) % m as usize, c);
            }
        }
        Ok(out)
    }

    /// If `self = ζ_N^k` for some `0 ≤ k < N`, returns `k`.
    pub fn root_exponent(&self) -> Option<u32> {
        let data = level_data(self.level);
        data.powers
            .iter()
            .position(|p| p.iter().zip(&self.coeffs).all(|(&a, b)| *b == rat(a)))
            .map(|k| k as u32)
    }

    /// Parses a literal such as `z6^5`, `-1/2`, `3*z8^3 - z8 + 2`.
    ///
    /// The grammar is a flat sum of monomials; each monomial is a product of
    /// integers, fractions `a/b` and roots `zN^k` (`zN` alone means `zN^1`).
    /// The result lives at the least common multiple of the `N`s that occur
    /// (level 1 when there are none).
    pub fn parse_literal(s: &str) -> Result<Self> {
        LiteralParser::new(s).parse()
    }

    /// Human-readable literal accepted by [`CycNumber::parse_literal`].
    pub fn to_literal(&self) -> String {
        self.to_string()
    }
}

/// `acc += c · ζ^k`, with ζ^k taken from the cached reduced powers.
fn add_scaled_power(acc: &mut [BigRational], data: &LevelData, k: usize, c: &BigRational) {
    for (t, &p) in data.powers[k].iter().enumerate() {
        match p {
            0 => {}
            1 => acc[t] += c,
            -1 => acc[t] -= c,
            _ => acc[t] += c * rat(p),
        }
    }
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_divrem(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = num.to_vec();
    trim(&mut rem);
    let dn = den.len() - 1;
    let lead_inv = den[dn].recip();
    if rem.len() < den.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dn] * &lead_inv;
        if !c.is_zero() {
            for (t, d) in den.iter().enumerate() {
                rem[k + t] -= &c * d;
            }
        }
        quot[k] = c;
    }
    rem.truncate(dn);
    trim(&mut rem);
    trim(&mut quot);
    (quot, rem)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

/// Inverse of `a` modulo the irreducible `m`, by the extended Euclidean
/// algorithm over Q[x].
fn poly_inverse_mod(a: &[BigRational], m: &[BigRational]) -> Option<Vec<BigRational>> {
    let mut r0 = m.to_vec();
    let mut r1 = a.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    let mut s0: Vec<BigRational> = Vec::new();
    let mut s1: Vec<BigRational> = vec![BigRational::one()];
    while !r1.is_empty() {
        let (q, r) = poly_divrem(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    // r0 is the gcd; it must be a nonzero constant
    if r0.len() != 1 {
        return None;
    }
    let c = r0[0].recip();
    Some(s0.iter().map(|x| x * &c).collect())
}

impl PartialEq for CycNumber {
    /// Mathematical equality; values at different levels are compared at
    /// the least common multiple of the levels.
    fn eq(&self, other: &Self) -> bool {
        if self.level == other.level {
            return self.coeffs == other.coeffs;
        }
        let m = lcm(self.level, other.level);
        self.embed(m).unwrap().coeffs == other.embed(m).unwrap().coeffs
    }
}

impl Eq for CycNumber {}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNumber[{}]({})", self.level, self)
    }
}

fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return f.write_str(&format_rational(q));
        }
        let n = self.level;
        if let Some(k) = self.root_exponent() {
            return write!(f, "z{n}^{k}");
        }
        if let Some(k) = (-self.clone()).root_exponent() {
            return write!(f, "-z{n}^{k}");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let abs = c.abs();
            let body = match (i, abs.is_one()) {
                (0, _) => format_rational(&abs),
                (_, true) => format!("z{n}^{i}"),
                (_, false) => format!("{}*z{n}^{i}", format_rational(&abs)),
            };
            match (first, negative) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for CycNumber {
            type Output = CycNumber;
            fn $method(self, rhs: CycNumber) -> CycNumber {
                self.$checked(&rhs).expect("cyclotomic level mismatch")
            }
        }
        impl<'a> $trait<&'a CycNumber> for &'a CycNumber {
            type Output = CycNumber;
            fn $method(self, rhs: &'a CycNumber) -> CycNumber {
                self.$checked(rhs).expect("cyclotomic level mismatch")
            }
        }
    };
}

// The operator forms panic on mismatched levels; the `checked_*` methods
// report it as an error instead.
forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for CycNumber {
    type Output = CycNumber;
    fn neg(mut self) -> CycNumber {
        for c in &mut self.coeffs {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        -self.clone()
    }
}

impl crate::scalar::Field for CycNumber {
    fn zero_like(&self) -> Self {
        CycNumber::zero(self.level)
    }

    fn one_like(&self) -> Self {
        CycNumber::one(self.level)
    }

    fn from_int_like(&self, n: i64) -> Self {
        CycNumber::from_integer(self.level, n)
    }

    fn is_zero(&self) -> bool {
        CycNumber::is_zero(self)
    }

    fn is_one(&self) -> bool {
        CycNumber::is_one(self)
    }

    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn negated(&self) -> Self {
        -self
    }

    fn inverse(&self) -> Option<Self> {
        self.checked_inv().ok()
    }
}

/// Sum of the diagonal of a square cyclotomic matrix.
pub fn matrix_trace(m: &Matrix<CycNumber>) -> Result<CycNumber> {
    m.trace()
}

#[derive(Serialize, Deserialize)]
struct CycJson {
    level: u32,
    coeffs: Vec<(String, String)>,
}

impl Serialize for CycNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        CycJson {
            level: self.level,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| (c.numer().to_string(), c.denom().to_string()))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CycNumber {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = CycJson::deserialize(deserializer)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|(n, d)| {
                let n: BigInt = n.parse().map_err(D::Error::custom)?;
                let d: BigInt = d.parse().map_err(D::Error::custom)?;
                if d.is_zero() {
                    return Err(D::Error::custom("zero denominator"));
                }
                Ok(BigRational::new(n, d))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        CycNumber::from_coeffs(raw.level, coeffs).map_err(D::Error::custom)
    }
}

struct LiteralParser<'a> {
    src: &'a str,
    chars: Vec<char>,
    pos: usize,
}

#[derive(Debug)]
struct Monomial {
    coeff: BigRational,
    /// (N, k) pairs, one per root factor
    roots: Vec<(u32, i64)>,
}

impl<'a> LiteralParser<'a> {
    fn new(src: &'a str) -> Self {
        LiteralParser {
            src,
            chars: src.chars().collect(),
            pos: 0,
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::parse(
            format!("literal {:?}, offset {}", self.src, self.pos),
            msg,
        )
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits parse as integer"))
    }

    fn small_integer(&mut self) -> Result<i64> {
        let n = self.integer()?;
        i64::try_from(n).map_err(|_| self.err("integer too large"))
    }

    fn factor(&mut self, m: &mut Monomial) -> Result<()> {
        match self.peek() {
            Some('z') => {
                self.pos += 1;
                let n = self.small_integer()?;
                if n <= 0 || n > u32::MAX as i64 {
                    return Err(self.err("root level must be a positive integer"));
                }
                let mut k = 1;
                if self.peek() == Some('^') {
                    self.pos += 1;
                    let negative = if self.peek() == Some('-') {
                        self.pos += 1;
                        true
                    } else {
                        false
                    };
                    k = self.small_integer()?;
                    if negative {
                        k = -k;
                    }
                }
                m.roots.push((n as u32, k));
                Ok(())
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let mut q = BigRational::from_integer(num);
                if self.peek() == Some('/') {
                    self.pos += 1;
                    let den = self.integer()?;
                    if den.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    q /= BigRational::from_integer(den);
                }
                m.coeff *= q;
                Ok(())
            }
            _ => Err(self.err("expected a number or a root zN^k")),
        }
    }

    fn monomial(&mut self, negative: bool) -> Result<Monomial> {
        let mut m = Monomial {
            coeff: if negative { -BigRational::one() } else { BigRational::one() },
            roots: Vec::new(),
        };
        self.factor(&mut m)?;
        while self.peek() == Some('*') {
            self.pos += 1;
            self.factor(&mut m)?;
        }
        Ok(m)
    }

    fn parse(mut self) -> Result<CycNumber> {
        let mut terms = Vec::new();
        let mut negative = match self.peek() {
            Some('-') => {
                self.pos += 1;
                true
            }
            Some('+') => {
                self.pos += 1;
                false
            }
            None => return Err(self.err("empty literal")),
            _ => false,
        };
        loop {
            terms.push(self.monomial(negative)?);
            match self.peek() {
                None => break,
                Some('+') => negative = false,
                Some('-') => negative = true,
                Some(_) => return Err(self.err("expected '+', '-' or '*'")),
            }
            self.pos += 1;
        }
        let level = terms
            .iter()
            .flat_map(|t| t.roots.iter().map(|&(n, _)| n))
            .fold(1, lcm);
        let mut acc = CycNumber::zero(level);
        for t in terms {
            let mut v = CycNumber::from_rational(level, t.coeff);
            for (n, k) in t.roots {
                let root = CycNumber::root_of_unity(level, k * (level / n) as i64);
                v = v * root;
            }
            acc = acc + v;
        }
        Ok(acc)
    }
}
