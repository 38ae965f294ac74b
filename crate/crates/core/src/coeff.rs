//! Exact coefficient algebra for Boltzmann weights and partition functions.
//!
//! Elements live in `Q[v, v^-1][z_1^±1, ..., z_r^±1]` extended by formal
//! symbols `g(1), ..., g(n-1)` subject to `g(a) g(n-a) = v`, with `g(0)`
//! identified with `-v`. Every element is stored in a canonical form (a
//! sorted map from normal-form monomials to nonzero rationals), so equality
//! of elements is structural.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::CoeffError;

pub type Rational = BigRational;

/// The ambient ring: charge modulus `n` and number of spectral variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ring {
    modulus: u32,
    nvars: usize,
}

impl Ring {
    pub fn new(modulus: u32, nvars: usize) -> Self {
        assert!(modulus >= 1, "charge modulus must be at least 1");
        Ring { modulus, nvars }
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Reduce an integer to its representative in `[0, n)`.
    pub fn residue(&self, a: i64) -> u32 {
        a.rem_euclid(self.modulus as i64) as u32
    }
}

/// A product of g-symbols in normal form. `exps[a - 1]` is the exponent of
/// `g(a)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GMonomial {
    exps: SmallVec<[u32; 4]>,
}

impl GMonomial {
    pub fn one(modulus: u32) -> Self {
        GMonomial {
            exps: SmallVec::from_elem(0, modulus.saturating_sub(1) as usize),
        }
    }

    pub fn exponent(&self, a: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        self.exps.get(a as usize - 1).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// `(a, exponent)` pairs with nonzero exponent, ascending in `a`.
    pub fn factors(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| (i as u32 + 1, e))
    }

    /// True when no pair `g(a) g(n-a)` (or `g(n/2)^2`) can be cancelled.
    pub fn is_normal(&self, modulus: u32) -> bool {
        for a in 1..modulus {
            let b = modulus - a;
            match a.cmp(&b) {
                std::cmp::Ordering::Less => {
                    if self.exponent(a).min(self.exponent(b)) > 0 {
                        return false;
                    }
                }
                std::cmp::Ordering::Equal => {
                    if self.exponent(a) > 1 {
                        return false;
                    }
                }
                std::cmp::Ordering::Greater => {}
            }
        }
        true
    }

    /// Cancel pairs in place, returning the number of `v` factors produced.
    fn reduce(&mut self, modulus: u32) -> u32 {
        let mut extra = 0;
        for a in 1..modulus {
            let b = modulus - a;
            let (ia, ib) = (a as usize - 1, b as usize - 1);
            match a.cmp(&b) {
                std::cmp::Ordering::Less => {
                    let k = self.exps[ia].min(self.exps[ib]);
                    self.exps[ia] -= k;
                    self.exps[ib] -= k;
                    extra += k;
                }
                std::cmp::Ordering::Equal => {
                    let k = self.exps[ia] / 2;
                    self.exps[ia] -= 2 * k;
                    extra += k;
                }
                std::cmp::Ordering::Greater => {}
            }
        }
        extra
    }
}

/// Reduce a raw product of g-symbols to normal form.
///
/// `raw` lists `(index, exponent)` pairs; repeated indices accumulate. Index
/// 0 must already have been replaced by `-v`. Returns the number of `v`
/// factors split off together with the normal-form monomial.
pub fn normalize_g(raw: &[(u32, u32)], modulus: u32) -> Result<(u32, GMonomial), CoeffError> {
    let mut mono = GMonomial::one(modulus);
    for &(a, e) in raw {
        if a == 0 || a >= modulus {
            return Err(CoeffError::GIndexOutOfRange { index: a, modulus });
        }
        mono.exps[a as usize - 1] += e;
    }
    let extra = mono.reduce(modulus);
    Ok((extra, mono))
}

/// A monomial `z^zs v^v g^g`. The derived order compares `z` exponents
/// lexicographically, then the `v` power, then the g-monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    z: SmallVec<[i32; 4]>,
    v: i32,
    g: GMonomial,
}

impl Monomial {
    pub fn one(ring: Ring) -> Self {
        Monomial {
            z: SmallVec::from_elem(0, ring.nvars),
            v: 0,
            g: GMonomial::one(ring.modulus),
        }
    }

    pub fn z_exponents(&self) -> &[i32] {
        &self.z
    }

    pub fn v_exponent(&self) -> i32 {
        self.v
    }

    pub fn g_part(&self) -> &GMonomial {
        &self.g
    }

    pub fn is_one(&self) -> bool {
        self.v == 0 && self.z.iter().all(|&e| e == 0) && self.g.is_one()
    }

    fn mul(&self, other: &Monomial, modulus: u32) -> Monomial {
        let z = self.z.iter().zip(&other.z).map(|(a, b)| a + b).collect();
        let mut g = self.g.clone();
        for (x, y) in g.exps.iter_mut().zip(&other.g.exps) {
            *x += y;
        }
        let extra = g.reduce(modulus);
        Monomial {
            z,
            v: self.v + other.v + extra as i32,
            g,
        }
    }

    fn is_polynomial(&self) -> bool {
        self.v >= 0 && self.z.iter().all(|&e| e >= 0)
    }
}

/// An exact element of the coefficient algebra.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CoeffElem {
    ring: Ring,
    terms: BTreeMap<Monomial, Rational>,
}

impl fmt::Debug for CoeffElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoeffElem[n={}, r={}]({})", self.ring.modulus, self.ring.nvars, self)
    }
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl CoeffElem {
    pub fn zero(ring: Ring) -> Self {
        CoeffElem {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: Ring) -> Self {
        Self::constant(ring, Rational::one())
    }

    pub fn constant(ring: Ring, c: Rational) -> Self {
        Self::from_term(ring, Monomial::one(ring), c)
    }

    pub fn integer(ring: Ring, c: i64) -> Self {
        Self::constant(ring, rat(c))
    }

    fn from_term(ring: Ring, mono: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(mono, c);
        }
        CoeffElem { ring, terms }
    }

    /// `z_{var+1}^exp` (variables are 0-based here, 1-based in text).
    pub fn z_pow(ring: Ring, var: usize, exp: i32) -> Self {
        assert!(var < ring.nvars, "variable z{} outside ring with {} variables", var + 1, ring.nvars);
        let mut m = Monomial::one(ring);
        m.z[var] = exp;
        Self::from_term(ring, m, Rational::one())
    }

    pub fn z(ring: Ring, var: usize) -> Self {
        Self::z_pow(ring, var, 1)
    }

    pub fn v_pow(ring: Ring, exp: i32) -> Self {
        let mut m = Monomial::one(ring);
        m.v = exp;
        Self::from_term(ring, m, Rational::one())
    }

    pub fn v(ring: Ring) -> Self {
        Self::v_pow(ring, 1)
    }

    /// The Gauss-sum symbol `g(a)` for any integer `a`, reduced mod `n`;
    /// `g(0) = -v`.
    pub fn g(ring: Ring, a: i64) -> Self {
        let r = ring.residue(a);
        if r == 0 {
            return -Self::v(ring);
        }
        let mut m = Monomial::one(ring);
        m.g.exps[r as usize - 1] = 1;
        Self::from_term(ring, m, Rational::one())
    }

    /// Build a single term from raw parts; the g-part is normalized.
    pub fn monomial(
        ring: Ring,
        coeff: Rational,
        z: &[i32],
        v: i32,
        g_raw: &[(u32, u32)],
    ) -> Result<Self, CoeffError> {
        assert_eq!(z.len(), ring.nvars, "z exponent vector has wrong length");
        let (extra, g) = normalize_g(g_raw, ring.modulus)?;
        let m = Monomial {
            z: z.iter().copied().collect(),
            v: v + extra as i32,
            g,
        };
        Ok(Self::from_term(ring, m, coeff))
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_g_free(&self) -> bool {
        self.terms.keys().all(|m| m.g.is_one())
    }

    pub fn is_v_free(&self) -> bool {
        self.terms.keys().all(|m| m.v == 0)
    }

    /// Leading term under the canonical order (largest monomial).
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    fn check_ring(&self, other: &Self) -> Result<(), CoeffError> {
        if self.ring != other.ring {
            return Err(CoeffError::RingMismatch {
                left: self.ring,
                right: other.ring,
            });
        }
        Ok(())
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CoeffError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, CoeffError> {
        self.check_ring(other)?;
        let mut out = CoeffElem::zero(self.ring);
        if self.is_zero() || other.is_zero() {
            return Ok(out);
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb, self.ring.modulus), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return CoeffElem::zero(self.ring);
        }
        CoeffElem {
            ring: self.ring,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = CoeffElem::one(self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Inverse of a single g-free term, if this element is one.
    pub fn inverse_monomial(&self) -> Option<Self> {
        if !self.is_monomial() {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        if !m.g.is_one() {
            return None;
        }
        let inv = Monomial {
            z: m.z.iter().map(|e| -e).collect(),
            v: -m.v,
            g: m.g.clone(),
        };
        Some(Self::from_term(self.ring, inv, c.recip()))
    }

    /// Re-embed into `target`, sending variable `i` to `map[i]`.
    pub fn remap_vars(&self, target: Ring, map: &[usize]) -> Self {
        assert_eq!(target.modulus, self.ring.modulus, "remap cannot change the modulus");
        assert_eq!(map.len(), self.ring.nvars, "variable map has wrong length");
        let mut out = CoeffElem::zero(target);
        for (m, c) in &self.terms {
            let mut z: SmallVec<[i32; 4]> = SmallVec::from_elem(0, target.nvars);
            for (i, &e) in m.z.iter().enumerate() {
                z[map[i]] += e;
            }
            out.add_term(
                Monomial {
                    z,
                    v: m.v,
                    g: m.g.clone(),
                },
                c.clone(),
            );
        }
        out
    }

    /// Set `v = 0`. Returns `None` when a negative power of `v` occurs.
    pub fn at_v_zero(&self) -> Option<Self> {
        let mut out = CoeffElem::zero(self.ring);
        for (m, c) in &self.terms {
            if m.v < 0 {
                return None;
            }
            if m.v == 0 {
                out.add_term(m.clone(), c.clone());
            }
        }
        Some(out)
    }

    /// Exact division of polynomials (non-negative `z` and `v` exponents,
    /// no g-symbols). Returns `None` when the division leaves a remainder or
    /// either operand is outside that subring.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        self.check_ring(divisor).ok()?;
        let polynomial = |x: &Self| x.terms.keys().all(|m| m.is_polynomial() && m.g.is_one());
        if divisor.is_zero() || !polynomial(self) || !polynomial(divisor) {
            return None;
        }
        let (dm, dc) = divisor.leading_term()?;
        let (dm, dc) = (dm.clone(), dc.clone());
        let mut rem = self.clone();
        let mut quot = CoeffElem::zero(self.ring);
        while let Some((rm, rc)) = rem.leading_term() {
            let qz: SmallVec<[i32; 4]> = rm.z.iter().zip(&dm.z).map(|(a, b)| a - b).collect();
            let qv = rm.v - dm.v;
            if qv < 0 || qz.iter().any(|&e| e < 0) {
                return None;
            }
            let q = CoeffElem::from_term(
                self.ring,
                Monomial {
                    z: qz,
                    v: qv,
                    g: GMonomial::one(self.ring.modulus),
                },
                rc / &dc,
            );
            rem = &rem - &(&q * divisor);
            quot += &q;
        }
        Some(quot)
    }

    pub fn evaluate(&self, p: &EvalPoint) -> Rational {
        assert_eq!(p.modulus, self.ring.modulus, "evaluation point has the wrong modulus");
        assert!(p.z.len() >= self.ring.nvars, "evaluation point has too few z values");
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.z.iter().enumerate() {
                if e != 0 {
                    t *= rpow(&p.z[i], e);
                }
            }
            if m.v != 0 {
                t *= rpow(&p.v, m.v);
            }
            for (a, e) in m.g.factors() {
                t *= rpow(&p.g[a as usize], e as i32);
            }
            total += t;
        }
        total
    }

    /// Parse canonical text (or any expression built from rationals, `v`,
    /// `z1..zr`, `g0..g(n-1)`, `+ - *`, parentheses and integer powers).
    pub fn parse(text: &str, ring: Ring) -> Result<Self, CoeffError> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
            ring,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(e)
    }
}

fn rpow(base: &Rational, e: i32) -> Rational {
    let mut acc = Rational::one();
    let mut b = if e < 0 { base.recip() } else { base.clone() };
    let mut k = e.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            acc *= &b;
        }
        k >>= 1;
        if k > 0 {
            b = &b * &b;
        }
    }
    acc
}

impl<'a> Add<&'a CoeffElem> for &'a CoeffElem {
    type Output = CoeffElem;
    fn add(self, rhs: &'a CoeffElem) -> CoeffElem {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Add for CoeffElem {
    type Output = CoeffElem;
    fn add(mut self, rhs: CoeffElem) -> CoeffElem {
        self += &rhs;
        self
    }
}

impl AddAssign<&CoeffElem> for CoeffElem {
    fn add_assign(&mut self, rhs: &CoeffElem) {
        if let Err(e) = self.check_ring(rhs) {
            panic!("{e}");
        }
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign for CoeffElem {
    fn add_assign(&mut self, rhs: CoeffElem) {
        if let Err(e) = self.check_ring(&rhs) {
            panic!("{e}");
        }
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl Neg for &CoeffElem {
    type Output = CoeffElem;
    fn neg(self) -> CoeffElem {
        CoeffElem {
            ring: self.ring,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for CoeffElem {
    type Output = CoeffElem;
    fn neg(mut self) -> CoeffElem {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl<'a> Sub<&'a CoeffElem> for &'a CoeffElem {
    type Output = CoeffElem;
    fn sub(self, rhs: &'a CoeffElem) -> CoeffElem {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for CoeffElem {
    type Output = CoeffElem;
    fn sub(mut self, rhs: CoeffElem) -> CoeffElem {
        self -= &rhs;
        self
    }
}

impl SubAssign<&CoeffElem> for CoeffElem {
    fn sub_assign(&mut self, rhs: &CoeffElem) {
        if let Err(e) = self.check_ring(rhs) {
            panic!("{e}");
        }
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl<'a> Mul<&'a CoeffElem> for &'a CoeffElem {
    type Output = CoeffElem;
    fn mul(self, rhs: &'a CoeffElem) -> CoeffElem {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for CoeffElem {
    type Output = CoeffElem;
    fn mul(self, rhs: CoeffElem) -> CoeffElem {
        &self * &rhs
    }
}

impl MulAssign<&CoeffElem> for CoeffElem {
    fn mul_assign(&mut self, rhs: &CoeffElem) {
        *self = &*self * rhs;
    }
}

impl Serialize for CoeffElem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

// ---------------------------------------------------------------------------
// Canonical text.
//
// Terms sharing a (z, g) monomial are grouped with a polynomial-in-v
// coefficient; groups are printed in descending canonical order. A group of
// several v-powers is parenthesized, normalized so that its lowest-v
// coefficient is positive.

fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn fmt_power(name: &str, e: i32) -> String {
    if e == 1 {
        name.to_string()
    } else {
        format!("{name}^{e}")
    }
}

fn tail_factors(z: &[i32], g: &GMonomial) -> Vec<String> {
    let mut out = Vec::new();
    for (a, e) in g.factors() {
        out.push(fmt_power(&format!("g{a}"), e as i32));
    }
    for (i, &e) in z.iter().enumerate() {
        if e != 0 {
            out.push(fmt_power(&format!("z{}", i + 1), e));
        }
    }
    out
}

/// Render `|c| * v^k * tail` (sign handled by the caller).
fn fmt_product(c: &Rational, v: i32, tail: &[String]) -> String {
    let mut parts = Vec::new();
    let mag = c.abs();
    let has_factors = v != 0 || !tail.is_empty();
    if !mag.is_one() || !has_factors {
        parts.push(fmt_rational(&mag));
    }
    if v != 0 {
        parts.push(fmt_power("v", v));
    }
    parts.extend(tail.iter().cloned());
    parts.join("*")
}

impl fmt::Display for CoeffElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        type Key<'a> = (&'a [i32], &'a GMonomial);
        let mut groups: BTreeMap<Key<'_>, Vec<(i32, &Rational)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            groups.entry((&m.z[..], &m.g)).or_default().push((m.v, c));
        }
        // (negative?, body)
        let mut pieces: Vec<(bool, String)> = Vec::new();
        for ((z, g), mut vs) in groups.into_iter().rev() {
            vs.sort_by_key(|(v, _)| *v);
            let tail = tail_factors(z, g);
            if vs.len() == 1 || tail.is_empty() {
                for (v, c) in vs {
                    pieces.push((c.is_negative(), fmt_product(c, v, &tail)));
                }
                continue;
            }
            let negate = vs[0].1.is_negative();
            let mut inner = String::new();
            for (i, (v, c)) in vs.iter().enumerate() {
                let c = if negate { -(*c).clone() } else { (*c).clone() };
                if i > 0 {
                    inner.push(if c.is_negative() { '-' } else { '+' });
                } else if c.is_negative() {
                    inner.push('-');
                }
                inner.push_str(&fmt_product(&c, *v, &[]));
            }
            let mut body = format!("({inner})");
            for t in &tail {
                body.push('*');
                body.push_str(t);
            }
            pieces.push((negate, body));
        }
        for (i, (neg, body)) in pieces.iter().enumerate() {
            match (i, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: Ring,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> CoeffError {
        CoeffError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn uint(&mut self) -> Result<BigInt, CoeffError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn small_uint(&mut self) -> Result<i64, CoeffError> {
        let n = self.uint()?;
        i64::try_from(n).map_err(|_| self.err("integer too large"))
    }

    fn expr(&mut self) -> Result<CoeffElem, CoeffError> {
        let mut acc = CoeffElem::zero(self.ring);
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -1
            }
            Some(b'+') => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            if sign < 0 {
                acc -= &t;
            } else {
                acc += &t;
            }
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<CoeffElem, CoeffError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = &acc * &f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<CoeffElem, CoeffError> {
        let base = self.primary()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let e = self.small_uint()?;
        let e = u32::try_from(e).map_err(|_| self.err("exponent too large"))?;
        let p = base.pow(e);
        if neg {
            p.inverse_monomial()
                .ok_or_else(|| self.err("negative power of a non-invertible factor"))
        } else {
            Ok(p)
        }
    }

    fn primary(&mut self) -> Result<CoeffElem, CoeffError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b'v') => {
                self.pos += 1;
                Ok(CoeffElem::v(self.ring))
            }
            Some(b'z') => {
                self.pos += 1;
                let i = self.small_uint()?;
                if i < 1 || i as usize > self.ring.nvars {
                    return Err(self.err("variable index out of range"));
                }
                Ok(CoeffElem::z(self.ring, i as usize - 1))
            }
            Some(b'g') => {
                self.pos += 1;
                let a = self.small_uint()?;
                if a >= self.ring.modulus as i64 {
                    return Err(self.err("g index out of range"));
                }
                Ok(CoeffElem::g(self.ring, a))
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.uint()?;
                let mut q = Rational::from_integer(num);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self.uint()?;
                    if den.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    q /= Rational::from_integer(den);
                }
                Ok(CoeffElem::constant(self.ring, q))
            }
            _ => Err(self.err("expected a number, variable or '('")),
        }
    }
}

// ---------------------------------------------------------------------------

/// A point at which coefficient elements can be evaluated exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalPoint {
    modulus: u32,
    z: Vec<Rational>,
    v: Rational,
    g: Vec<Rational>,
}

impl EvalPoint {
    /// `g_vals` has length `n`; `g_vals[0]` must be `-v` and
    /// `g_vals[a] * g_vals[n - a] = v` for every nonzero residue.
    pub fn new(
        modulus: u32,
        z_vals: Vec<Rational>,
        v_val: Rational,
        g_vals: Vec<Rational>,
    ) -> Result<Self, CoeffError> {
        let bad = |m: &str| Err(CoeffError::InvalidPoint(m.to_string()));
        if modulus == 0 {
            return bad("modulus must be at least 1");
        }
        if g_vals.len() != modulus as usize {
            return bad("need exactly n g-values");
        }
        if v_val.is_zero() || z_vals.iter().any(Zero::is_zero) || g_vals.iter().any(Zero::is_zero) {
            return bad("all values must be nonzero");
        }
        if g_vals[0] != -v_val.clone() {
            return bad("g(0) must equal -v");
        }
        for a in 1..modulus as usize {
            if &g_vals[a] * &g_vals[modulus as usize - a] != v_val {
                return Err(CoeffError::InvalidPoint(format!(
                    "g({a}) * g({}) != v",
                    modulus as usize - a
                )));
            }
        }
        Ok(EvalPoint {
            modulus,
            z: z_vals,
            v: v_val,
            g: g_vals,
        })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn z_vals(&self) -> &[Rational] {
        &self.z
    }

    pub fn v_val(&self) -> &Rational {
        &self.v
    }

    pub fn g_val(&self, a: i64) -> &Rational {
        &self.g[a.rem_euclid(self.modulus as i64) as usize]
    }

    /// Same point with different z values.
    pub fn with_z(&self, z_vals: Vec<Rational>) -> Self {
        assert!(z_vals.iter().all(|z| !z.is_zero()), "z values must be nonzero");
        EvalPoint {
            z: z_vals,
            ..self.clone()
        }
    }
}

fn random_nonzero(rng: &mut ChaCha8Rng) -> Rational {
    let mut num: i64 = 0;
    while num == 0 {
        num = rng.gen_range(-60..=60);
    }
    let den: i64 = rng.gen_range(1..=60);
    let q = Rational::new(BigInt::from(num), BigInt::from(den));
    debug_assert!(!q.is_zero());
    q
}

/// Deterministic pseudo-random evaluation point. `v` is the square of a
/// random `t` so that `g(n/2) = t` is available for even `n`.
pub fn sample_point(modulus: u32, nvars: usize, seed: u64) -> EvalPoint {
    assert!(modulus >= 1 && nvars >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z: Vec<Rational> = (0..nvars).map(|_| random_nonzero(&mut rng)).collect();
    let t = random_nonzero(&mut rng);
    let v = &t * &t;
    let n = modulus as usize;
    let mut g = vec![Rational::zero(); n];
    g[0] = -v.clone();
    for a in 1..n {
        let b = n - a;
        if a < b {
            let ga = random_nonzero(&mut rng);
            g[b] = &v / &ga;
            g[a] = ga;
        } else if a == b {
            g[a] = t.clone();
        }
    }
    EvalPoint::new(modulus, z, v, g).expect("sampled point satisfies the g relations")
}

/// `x == y` after evaluation at `count` seeded points.
pub fn agree_at_points(x: &CoeffElem, y: &CoeffElem, count: u64, seed: u64) -> bool {
    let ring = x.ring();
    (0..count).all(|k| {
        let p = sample_point(ring.modulus(), ring.nvars().max(1), seed.wrapping_add(k));
        x.evaluate(&p) == y.evaluate(&p)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: u32, k: usize) -> Ring {
        Ring::new(n, k)
    }

    #[test]
    fn normalize_pairs_complementary_symbols() {
        let (v, m) = normalize_g(&[(1, 1), (2, 1)], 3).unwrap();
        assert_eq!(v, 1);
        assert!(m.is_one());
    }

    #[test]
    fn normalize_self_pairing_at_even_modulus() {
        let (v, m) = normalize_g(&[(1, 2)], 2).unwrap();
        assert_eq!(v, 1);
        assert!(m.is_one());
        let (v, m) = normalize_g(&[(2, 3)], 4).unwrap();
        assert_eq!(v, 1);
        assert_eq!(m.exponent(2), 1);
    }

    #[test]
    fn normalize_keeps_surplus() {
        let (v, m) = normalize_g(&[(1, 3), (4, 1)], 5).unwrap();
        assert_eq!(v, 1);
        assert_eq!(m.exponent(1), 2);
        assert_eq!(m.exponent(4), 0);
        assert!(m.is_normal(5));
    }

    #[test]
    fn normalize_rejects_bad_index() {
        assert!(matches!(
            normalize_g(&[(0, 1)], 3),
            Err(CoeffError::GIndexOutOfRange { index: 0, .. })
        ));
        assert!(normalize_g(&[(3, 1)], 3).is_err());
    }

    #[test]
    fn additive_inverse() {
        let ring = r(3, 2);
        let x = CoeffElem::parse("z1^3 - v*z2^3 + 2/3*g1*z1 - g2", ring).unwrap();
        assert!((&x + &(-&x)).is_zero());
    }

    #[test]
    fn g_squared_is_v_at_n2() {
        let ring = r(2, 2);
        let a = &CoeffElem::g(ring, 1) * &CoeffElem::z(ring, 0);
        let b = &CoeffElem::g(ring, 1) * &CoeffElem::z(ring, 1);
        let expected = &CoeffElem::v(ring) * &(&CoeffElem::z(ring, 0) * &CoeffElem::z(ring, 1));
        assert_eq!(&a * &b, expected);
    }

    #[test]
    fn multiplicative_identity() {
        let ring = r(2, 2);
        let x = CoeffElem::parse("z1^2 - v*z2^2", ring).unwrap();
        assert_eq!(&x * &CoeffElem::one(ring), x);
    }

    #[test]
    #[should_panic(expected = "ring mismatch")]
    fn mixed_rings_panic() {
        let _ = &CoeffElem::one(r(2, 1)) + &CoeffElem::one(r(3, 1));
    }

    #[test]
    fn checked_ops_report_mismatch() {
        let a = CoeffElem::one(r(2, 1));
        let b = CoeffElem::one(r(2, 2));
        assert!(matches!(a.checked_mul(&b), Err(CoeffError::RingMismatch { .. })));
    }

    #[test]
    fn g_zero_is_minus_v() {
        let ring = r(3, 1);
        let p = sample_point(3, 1, 4);
        let x = &CoeffElem::g(ring, 0) + &CoeffElem::v(ring);
        assert!(x.is_zero());
        assert_eq!(CoeffElem::g(ring, 3), -CoeffElem::v(ring));
        assert_eq!(x.evaluate(&p), Rational::zero());
    }

    #[test]
    fn defining_relation_evaluates_to_zero() {
        let ring = r(3, 1);
        let p = sample_point(3, 1, 99);
        let gg = &(&CoeffElem::g(ring, 1) * &CoeffElem::g(ring, 2)) - &CoeffElem::v(ring);
        assert!(gg.is_zero());
        // Evaluate the unreduced product directly as well.
        assert_eq!(p.g_val(1) * p.g_val(2), p.v_val().clone());
    }

    #[test]
    fn direct_substitution() {
        let ring = r(2, 2);
        let x = CoeffElem::parse("z1^2 - v*z2^2", ring).unwrap();
        let one = Rational::one();
        let p = EvalPoint::new(2, vec![one.clone(), one.clone()], one.clone(), vec![-one.clone(), one])
            .unwrap();
        assert_eq!(x.evaluate(&p), Rational::zero());
    }

    #[test]
    fn eval_point_rejects_inconsistent_g() {
        let one = Rational::one();
        let two = rat(2);
        assert!(EvalPoint::new(2, vec![one.clone()], one.clone(), vec![-one.clone(), two]).is_err());
        assert!(EvalPoint::new(1, vec![one.clone()], one.clone(), vec![one.clone()]).is_err());
    }

    #[test]
    fn sample_point_shapes() {
        let p1 = sample_point(1, 2, 5);
        assert_eq!(p1.g.len(), 1);
        assert_eq!(p1.g[0], -p1.v.clone());
        let p2 = sample_point(2, 2, 5);
        assert_eq!(&p2.g[1] * &p2.g[1], p2.v);
        assert_eq!(sample_point(4, 3, 17), sample_point(4, 3, 17));
        assert_ne!(sample_point(4, 3, 17), sample_point(4, 3, 18));
    }

    #[test]
    fn renders_grouped_v_coefficients() {
        let ring = r(2, 2);
        let x = CoeffElem::parse("z1^2*z2 - v*z1*z2^2 + (1-v)*g1*z1", ring).unwrap();
        assert_eq!(x.to_string(), "z1^2*z2 - v*z1*z2^2 + (1-v)*g1*z1");
        let y = CoeffElem::parse("(v-1)*z1 + 3 - 2*v + v^-1*z2", ring).unwrap();
        assert_eq!(y.to_string(), "-(1-v)*z1 + v^-1*z2 + 3 - 2*v");
        assert_eq!(CoeffElem::parse(&y.to_string(), ring).unwrap(), y);
        assert_eq!(CoeffElem::zero(ring).to_string(), "0");
        assert_eq!(CoeffElem::parse("0", ring).unwrap(), CoeffElem::zero(ring));
    }

    #[test]
    fn exact_division() {
        let ring = r(1, 2);
        let a = CoeffElem::parse("z1 - v*z2", ring).unwrap();
        let b = CoeffElem::parse("z1^2 + z1*z2 + 3*z2", ring).unwrap();
        assert_eq!((&a * &b).div_exact(&a).unwrap(), b);
        assert!(b.div_exact(&a).is_none());
    }

    #[test]
    fn remap_and_specialize() {
        let ring = r(1, 2);
        let x = CoeffElem::parse("z1^2*z2 - v*z2", ring).unwrap();
        let y = x.remap_vars(r(1, 3), &[2, 0]);
        assert_eq!(y, CoeffElem::parse("z1*z3^2 - v*z1", r(1, 3)).unwrap());
        assert_eq!(x.at_v_zero().unwrap(), CoeffElem::parse("z1^2*z2", ring).unwrap());
    }
}
