//! Finite fields F_(p^m) with an optional tower F_q ⊂ F_(q^n) ⊂ F_(q^2n).
//!
//! Elements are identified with their canonical integer encoding: the
//! coefficient vector (c_0, …, c_(m-1)) of the residue class modulo the
//! defining polynomial is read as the base-p number Σ c_i p^i. The defining
//! polynomial is the monic irreducible of degree m with the smallest encoding
//! and the primitive element is the smallest encoding of full order, so every
//! derived quantity is reproducible.
//!
//! Subfields are never materialised as separate fields: F_(p^d) is the set of
//! elements fixed by x ↦ x^(p^d).
//!
//! Fields up to [`TABLE_LIMIT`] elements carry exp/log (and, for odd p, Zech)
//! tables; the observable behaviour is identical to the schoolbook routines,
//! which remain available for cross-checking.

mod basis;
mod poly;

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use basis::FqBasis;
pub(crate) use poly::prime_factors;

/// Largest supported field order (exclusive bound on encodings is 2^32).
pub const MAX_ORDER: u64 = 1 << 32;

/// Fields with at most this many elements get log tables.
pub const TABLE_LIMIT: u64 = 1 << 22;

const NO_LOG: u32 = u32::MAX;

/// A field element, stored as its canonical encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn encoding(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Declares q = p^h and the chain F_q ⊂ F_(q^n) ⊂ F_(q^2n).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tower {
    pub h: u32,
    pub n: u32,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("tower (h={h}, n={n}) needs extension degree {}, got {m}", 2 * h * n)]
    TowerMismatch { h: u32, n: u32, m: u32 },
    #[error("field of order {p}^{m} exceeds 2^32")]
    TooLarge { p: u32, m: u32 },
    #[error("field has no tower metadata")]
    NoTower,
    #[error("{d} does not divide the field degree {m}")]
    NotSubfieldDegree { d: u32, m: u32 },
    #[error("operation needs odd characteristic")]
    EvenCharacteristic,
    #[error("operation needs characteristic 2")]
    OddCharacteristic,
    #[error("element must be nonzero")]
    Zero,
    #[error("element {0} does not lie in F_(q^n)")]
    NotInSubfield(u32),
    #[error("encoding {enc} out of range for a field of order {order}")]
    OutOfRange { enc: u64, order: u64 },
    #[error("cannot parse field element `{0}`")]
    Parse(String),
}

pub type Result<T, E = GfError> = std::result::Result<T, E>;

struct Tables {
    /// exp[i] = g^i for i < 2N, so sums of two logs need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    /// zech[d] = log(1 + g^d), NO_LOG when 1 + g^d = 0. Odd p only.
    zech: Vec<u32>,
}

/// Solver for r^2 + r = d over F_(2^m), kept in reduced echelon form.
struct ArtinSchreier {
    /// (pivot bit, image row, preimage combination)
    rows: Vec<(u32, u64, u64)>,
}

pub struct Field {
    p: u32,
    degree: u32,
    order: u64,
    modulus: Vec<u32>,
    tower: Option<Tower>,
    primitive: Elem,
    /// p^i for i ≤ degree
    pow_p: Vec<u64>,
    /// p^k mod (order - 1) for k < degree
    frob_exp: Vec<u64>,
    /// modulus without its leading term, as a bitmask (p = 2 only)
    low_mask: u64,
    unit_factors: Vec<u64>,
    tables: Option<Tables>,
    basis: OnceLock<Result<FqBasis>>,
    artin_schreier: OnceLock<ArtinSchreier>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("degree", &self.degree)
            .field("modulus", &self.modulus)
            .field("tower", &self.tower)
            .field("primitive", &self.primitive)
            .finish()
    }
}

/// Splits q into (p, h) with q = p^h.
pub fn prime_power(q: u64) -> Result<(u32, u32)> {
    let factors = prime_factors(q);
    if factors.len() != 1 || factors[0] > u32::MAX as u64 {
        return Err(GfError::NotPrimePower(q));
    }
    let p = factors[0];
    let mut h = 0;
    let mut rest = q;
    while rest > 1 {
        rest /= p;
        h += 1;
    }
    Ok((p as u32, h))
}

impl Field {
    /// Builds F_(p^m); `tower = Some(Tower { h, n })` requires m = 2nh.
    pub fn new(p: u32, m: u32, tower: Option<Tower>) -> Result<Arc<Field>> {
        if !poly::is_prime(p as u64) {
            return Err(GfError::NotPrime(p as u64));
        }
        if m == 0 {
            return Err(GfError::ZeroDegree);
        }
        if let Some(t) = tower {
            if t.h == 0 || t.n == 0 || 2 * t.h * t.n != m {
                return Err(GfError::TowerMismatch { h: t.h, n: t.n, m });
            }
        }
        let order = (p as u64).checked_pow(m).filter(|&o| o <= MAX_ORDER);
        let order = order.ok_or(GfError::TooLarge { p, m })?;

        let pow_p: Vec<u64> = (0..=m).map(|i| (p as u64).pow(i)).collect();
        let modulus = least_irreducible(p, m);
        let low_mask = if p == 2 {
            modulus[..m as usize]
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &c)| acc | ((c as u64) << i))
        } else {
            0
        };
        let units = order - 1;
        let frob_exp = (0..m)
            .map(|k| if units == 0 { 0 } else { pow_p[k as usize] % units })
            .collect();
        let mut field = Field {
            p,
            degree: m,
            order,
            modulus,
            tower,
            primitive: Elem::ONE,
            pow_p,
            frob_exp,
            low_mask,
            unit_factors: prime_factors(units),
            tables: None,
            basis: OnceLock::new(),
            artin_schreier: OnceLock::new(),
        };
        field.primitive = (1..order)
            .map(|e| Elem(e as u32))
            .find(|&g| field.has_full_order(g))
            .expect("the multiplicative group of a finite field is cyclic");
        if order <= TABLE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        Ok(Arc::new(field))
    }

    /// F_(q^2n) with its tower metadata, q a prime power.
    pub fn with_tower(q: u64, n: u32) -> Result<Arc<Field>> {
        let (p, h) = prime_power(q)?;
        if n == 0 {
            return Err(GfError::ZeroDegree);
        }
        Field::new(p, 2 * n * h, Some(Tower { h, n }))
    }

    fn has_full_order(&self, g: Elem) -> bool {
        let units = self.order - 1;
        self.unit_factors
            .iter()
            .all(|&r| self.pow_schoolbook(g, units / r) != Elem::ONE)
    }

    fn build_tables(&self) -> Tables {
        let units = (self.order - 1) as usize;
        let mut exp = vec![0u32; 2 * units.max(1)];
        let mut log = vec![NO_LOG; self.order as usize];
        let mut cur = Elem::ONE;
        for i in 0..units {
            exp[i] = cur.0;
            log[cur.0 as usize] = i as u32;
            cur = self.mul_schoolbook(cur, self.primitive);
        }
        debug_assert_eq!(cur, Elem::ONE);
        for i in units..exp.len() {
            exp[i] = exp[i - units];
        }
        let zech = if self.p == 2 {
            Vec::new()
        } else {
            (0..units)
                .map(|d| {
                    let s = self.add_digits(Elem::ONE, Elem(exp[d]));
                    if s.is_zero() {
                        NO_LOG
                    } else {
                        log[s.0 as usize]
                    }
                })
                .collect()
        };
        Tables { exp, log, zech }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Extension degree over F_p.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Defining polynomial, little-endian, monic of length degree + 1.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn modulus_encoding(&self) -> u64 {
        self.modulus
            .iter()
            .enumerate()
            .map(|(i, &c)| c as u64 * self.p_pow(i as u32))
            .sum()
    }

    pub fn primitive(&self) -> Elem {
        self.primitive
    }

    pub fn tower(&self) -> Option<Tower> {
        self.tower
    }

    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    fn require_tower(&self) -> Result<Tower> {
        self.tower.ok_or(GfError::NoTower)
    }

    /// q = p^h of the tower.
    pub fn q(&self) -> Result<u64> {
        let t = self.require_tower()?;
        Ok(self.p_pow(t.h))
    }

    /// n of the tower.
    pub fn n(&self) -> Result<u32> {
        Ok(self.require_tower()?.n)
    }

    /// Order of the middle field F_(q^n).
    pub fn half_order(&self) -> Result<u64> {
        let t = self.require_tower()?;
        Ok(self.p_pow(t.h * t.n))
    }

    fn p_pow(&self, i: u32) -> u64 {
        self.pow_p[i as usize]
    }

    pub fn elem(&self, enc: u64) -> Result<Elem> {
        if enc >= self.order {
            return Err(GfError::OutOfRange { enc, order: self.order });
        }
        Ok(Elem(enc as u32))
    }

    /// All elements in increasing encoding order, zero first.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.order).map(|e| Elem(e as u32))
    }

    /// Image of the integer c in the prime field.
    pub fn small(&self, c: i64) -> Elem {
        Elem(c.rem_euclid(self.p as i64) as u32)
    }

    pub fn coeffs(&self, x: Elem) -> Vec<u32> {
        let mut e = x.0;
        (0..self.degree)
            .map(|_| {
                let d = e % self.p;
                e /= self.p;
                d
            })
            .collect()
    }

    /// Encodes a coefficient vector (reduced mod p, at most `degree` entries).
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elem> {
        if coeffs.len() > self.degree as usize {
            // allow trailing zeros only
            if coeffs[self.degree as usize..].iter().any(|&c| c % self.p != 0) {
                return Err(GfError::Parse(format!("{coeffs:?}")));
            }
        }
        let enc = coeffs
            .iter()
            .take(self.degree as usize)
            .enumerate()
            .map(|(i, &c)| (c % self.p) as u64 * self.p_pow(i as u32))
            .sum::<u64>();
        Ok(Elem(enc as u32))
    }

    /// Accepts a decimal encoding or a polynomial in `t` such as `1+2*t+t^3`.
    pub fn parse(&self, s: &str) -> Result<Elem> {
        let s = s.trim();
        if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) {
            let enc: u64 = s.parse().map_err(|_| GfError::Parse(s.into()))?;
            return self.elem(enc);
        }
        let mut coeffs = vec![0u32; self.degree as usize];
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(GfError::Parse(s.into()));
        }
        for term in compact.split('+') {
            let bad = || GfError::Parse(s.into());
            let (coef, power) = match term.find('t') {
                None => (term.parse::<u64>().map_err(|_| bad())?, 0u32),
                Some(pos) => {
                    let head = term[..pos].trim_end_matches('*');
                    let coef = if head.is_empty() {
                        1
                    } else {
                        head.parse::<u64>().map_err(|_| bad())?
                    };
                    let tail = &term[pos + 1..];
                    let power = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')
                            .ok_or_else(bad)?
                            .parse::<u32>()
                            .map_err(|_| bad())?
                    };
                    (coef, power)
                }
            };
            if power >= self.degree {
                return Err(bad());
            }
            let c = &mut coeffs[power as usize];
            *c = ((*c as u64 + coef) % self.p as u64) as u32;
        }
        self.from_coeffs(&coeffs)
    }

    // ----- arithmetic -------------------------------------------------------

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        match &self.tables {
            Some(t) => {
                if a.is_zero() {
                    return b;
                }
                if b.is_zero() {
                    return a;
                }
                let units = self.order as u32 - 1;
                let la = t.log[a.0 as usize];
                let lb = t.log[b.0 as usize];
                let d = if lb >= la { lb - la } else { lb + units - la };
                let z = t.zech[d as usize];
                if z == NO_LOG {
                    Elem::ZERO
                } else {
                    Elem(t.exp[(la + z) as usize])
                }
            }
            None => self.add_digits(a, b),
        }
    }

    fn add_digits(&self, a: Elem, b: Elem) -> Elem {
        let (mut x, mut y) = (a.0 as u64, b.0 as u64);
        let p = self.p as u64;
        let mut out = 0u64;
        let mut place = 1u64;
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        Elem(out as u32)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 || a.is_zero() {
            return a;
        }
        match &self.tables {
            Some(t) => {
                let half = (self.order as u32 - 1) / 2;
                Elem(t.exp[(t.log[a.0 as usize] + half) as usize])
            }
            None => {
                let mut x = a.0 as u64;
                let p = self.p as u64;
                let mut out = 0u64;
                let mut place = 1u64;
                while x > 0 {
                    out += ((p - x % p) % p) * place;
                    x /= p;
                    place *= p;
                }
                Elem(out as u32)
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.tables {
            Some(t) => {
                if a.is_zero() || b.is_zero() {
                    Elem::ZERO
                } else {
                    Elem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize])
                }
            }
            None => self.mul_schoolbook(a, b),
        }
    }

    #[inline]
    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a.is_zero() {
            return None;
        }
        Some(match &self.tables {
            Some(t) => {
                let units = self.order as u32 - 1;
                let l = t.log[a.0 as usize];
                Elem(t.exp[if l == 0 { 0 } else { (units - l) as usize }])
            }
            None => self.pow_schoolbook(a, self.order - 2),
        })
    }

    /// a / b; `None` when b is zero.
    #[inline]
    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let units = self.order - 1;
                let l = t.log[a.0 as usize] as u64 * (e % units) % units;
                Elem(t.exp[l as usize])
            }
            None => self.pow_schoolbook(a, e),
        }
    }

    /// Discrete logarithm to the primitive element (table fields only).
    pub fn log(&self, a: Elem) -> Option<u64> {
        let t = self.tables.as_ref()?;
        if a.is_zero() {
            return None;
        }
        Some(t.log[a.0 as usize] as u64)
    }

    /// x^(p^k), k taken modulo the degree.
    #[inline]
    pub fn frob(&self, x: Elem, k: u32) -> Elem {
        let k = k % self.degree;
        if k == 0 || x.is_zero() || x == Elem::ONE {
            return x;
        }
        match &self.tables {
            Some(t) => {
                let units = self.order - 1;
                let l = t.log[x.0 as usize] as u64 * self.frob_exp[k as usize] % units;
                Elem(t.exp[l as usize])
            }
            None => self.pow_schoolbook(x, self.frob_exp[k as usize]),
        }
    }

    /// x^(q^k) for the tower's q; k is reduced modulo 2n (negative allowed).
    pub fn pow_q(&self, x: Elem, k: i64) -> Result<Elem> {
        let t = self.require_tower()?;
        let k = k.rem_euclid(2 * t.n as i64) as u32;
        Ok(self.frob(x, t.h * k))
    }

    /// Multiplication by reduction of the coefficient product modulo the
    /// defining polynomial.
    pub fn mul_schoolbook(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return self.mul_f2_bits(a, b);
        }
        let prod = poly::mul(&self.coeffs(a), &self.coeffs(b), self.p);
        let r = poly::rem(&prod, &self.modulus, self.p);
        self.from_coeffs(&r).expect("reduced product fits")
    }

    fn mul_f2_bits(&self, a: Elem, b: Elem) -> Elem {
        let m = self.degree;
        let top = 1u64 << m;
        let mut acc = 0u64;
        let mut x = a.0 as u64;
        let mut y = b.0 as u64;
        while y != 0 {
            if y & 1 == 1 {
                acc ^= x;
            }
            y >>= 1;
            x <<= 1;
            if x & top != 0 {
                x ^= top | self.low_mask;
            }
        }
        Elem(acc as u32)
    }

    pub fn pow_schoolbook(&self, a: Elem, mut e: u64) -> Elem {
        let mut acc = Elem::ONE;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_schoolbook(acc, b);
            }
            b = self.mul_schoolbook(b, b);
            e >>= 1;
        }
        acc
    }

    // ----- subfields, norms, traces -----------------------------------------

    /// True iff x lies in F_(p^d); d must divide the field degree.
    pub fn in_subfield(&self, x: Elem, d: u32) -> Result<bool> {
        if d == 0 || !self.degree.is_multiple_of(d) {
            return Err(GfError::NotSubfieldDegree { d, m: self.degree });
        }
        Ok(self.frob(x, d) == x)
    }

    /// Elements of F_(p^d) in increasing encoding order.
    pub fn subfield_elements(&self, d: u32) -> Result<Vec<Elem>> {
        if d == 0 || !self.degree.is_multiple_of(d) {
            return Err(GfError::NotSubfieldDegree { d, m: self.degree });
        }
        let mut out = match &self.tables {
            Some(t) => {
                let sub_units = self.p_pow(d) - 1;
                let step = (self.order - 1) / sub_units;
                let mut v: Vec<Elem> = (0..sub_units)
                    .map(|k| Elem(t.exp[(k * step) as usize]))
                    .collect();
                v.push(Elem::ZERO);
                v
            }
            None => self.elements().filter(|&x| self.frob(x, d) == x).collect(),
        };
        out.sort_unstable();
        Ok(out)
    }

    /// Σ_(i < big/small) x^(p^(small·i)): the trace from F_(p^big) down to F_(p^small).
    pub fn trace_down(&self, x: Elem, big: u32, small: u32) -> Elem {
        debug_assert!(big.is_multiple_of(small) && self.degree.is_multiple_of(big));
        (0..big / small).fold(Elem::ZERO, |acc, i| self.add(acc, self.frob(x, small * i)))
    }

    /// Π_(i < big/small) x^(p^(small·i)).
    pub fn norm_down(&self, x: Elem, big: u32, small: u32) -> Elem {
        debug_assert!(big.is_multiple_of(small) && self.degree.is_multiple_of(big));
        (0..big / small).fold(Elem::ONE, |acc, i| self.mul(acc, self.frob(x, small * i)))
    }

    /// N_(q^2n/q^n)(x) = x^(1+q^n).
    pub fn norm_rel(&self, x: Elem) -> Result<Elem> {
        let t = self.require_tower()?;
        Ok(self.mul(x, self.frob(x, t.h * t.n)))
    }

    /// Tr_(q^2n/q^n)(x) = x + x^(q^n).
    pub fn trace_rel(&self, x: Elem) -> Result<Elem> {
        let t = self.require_tower()?;
        Ok(self.add(x, self.frob(x, t.h * t.n)))
    }

    /// Membership in F_(q^n).
    pub fn in_half(&self, x: Elem) -> Result<bool> {
        let t = self.require_tower()?;
        Ok(self.frob(x, t.h * t.n) == x)
    }

    /// Membership in F_q.
    pub fn in_base(&self, x: Elem) -> Result<bool> {
        let t = self.require_tower()?;
        Ok(self.frob(x, t.h) == x)
    }

    /// Quadratic character within F_(q^n): x^((q^n-1)/2) = 1.
    pub fn is_square(&self, x: Elem) -> Result<bool> {
        if self.p == 2 {
            return Err(GfError::EvenCharacteristic);
        }
        if x.is_zero() {
            return Err(GfError::Zero);
        }
        if !self.in_half(x)? {
            return Err(GfError::NotInSubfield(x.0));
        }
        let half = self.half_order()?;
        Ok(self.pow(x, (half - 1) / 2) == Elem::ONE)
    }

    /// Least-encoding nonsquare of F_(q^n), q odd.
    pub fn pick_nonsquare(&self) -> Result<Elem> {
        if self.p == 2 {
            return Err(GfError::EvenCharacteristic);
        }
        let t = self.require_tower()?;
        for x in self.subfield_elements(t.h * t.n)? {
            if !x.is_zero() && !self.is_square(x)? {
                return Ok(x);
            }
        }
        unreachable!("F_(q^n) with q odd has nonsquares")
    }

    /// Absolute trace Tr_(q^n/2) of an element of F_(q^n), q even.
    pub fn abs_trace_half(&self, x: Elem) -> Result<Elem> {
        if self.p != 2 {
            return Err(GfError::OddCharacteristic);
        }
        let t = self.require_tower()?;
        Ok(self.trace_down(x, t.h * t.n, 1))
    }

    /// Least-encoding element of F_(q^n) with absolute trace 1, q even.
    pub fn pick_trace_one(&self) -> Result<Elem> {
        if self.p != 2 {
            return Err(GfError::OddCharacteristic);
        }
        let t = self.require_tower()?;
        for x in self.subfield_elements(t.h * t.n)? {
            if self.abs_trace_half(x)? == Elem::ONE {
                return Ok(x);
            }
        }
        unreachable!("the absolute trace is onto F_2")
    }

    // ----- square roots and quadratics --------------------------------------

    /// A square root of x in the whole field, the smaller encoding of the two.
    pub fn sqrt(&self, x: Elem) -> Option<Elem> {
        if x.is_zero() {
            return Some(x);
        }
        if self.p == 2 {
            return Some(self.frob(x, self.degree - 1));
        }
        let w = match &self.tables {
            Some(t) => {
                let l = t.log[x.0 as usize];
                if l % 2 == 1 {
                    return None;
                }
                Elem(t.exp[(l / 2) as usize])
            }
            None => self.tonelli_shanks(x)?,
        };
        Some(w.min(self.neg(w)))
    }

    fn tonelli_shanks(&self, x: Elem) -> Option<Elem> {
        if x.is_zero() {
            return Some(x);
        }
        let units = self.order - 1;
        if self.pow(x, units / 2) != Elem::ONE {
            return None;
        }
        let mut q = units;
        let mut s = 0;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        // the primitive element is a nonsquare
        let mut c = self.pow(self.primitive, q);
        let mut r = self.pow(x, q.div_ceil(2));
        let mut t = self.pow(x, q);
        let mut m = s;
        while t != Elem::ONE {
            let mut i = 0;
            let mut tt = t;
            while tt != Elem::ONE {
                tt = self.square(tt);
                i += 1;
            }
            let b = self.pow(c, 1u64 << (m - i - 1));
            r = self.mul(r, b);
            c = self.square(b);
            t = self.mul(t, c);
            m = i;
        }
        Some(r)
    }

    /// Roots of X^2 + bX + c in the whole field, sorted by encoding.
    pub fn quadratic_roots(&self, b: Elem, c: Elem) -> Vec<Elem> {
        let mut roots = if self.p == 2 {
            if b.is_zero() {
                vec![self.sqrt(c).expect("every element of F_(2^m) is a square")]
            } else {
                let b2 = self.square(b);
                let d = self.div(c, b2).expect("b nonzero");
                match self.solve_artin_schreier(d) {
                    Some(r) => vec![self.mul(b, r), self.mul(b, self.add(r, Elem::ONE))],
                    None => Vec::new(),
                }
            }
        } else {
            let two = self.small(2);
            let four = self.small(4);
            let disc = self.sub(self.square(b), self.mul(four, c));
            match self.sqrt(disc) {
                None => Vec::new(),
                Some(w) => {
                    let half = self.inv(two).expect("p odd");
                    let nb = self.neg(b);
                    vec![
                        self.mul(self.add(nb, w), half),
                        self.mul(self.sub(nb, w), half),
                    ]
                }
            }
        };
        roots.sort_unstable();
        roots.dedup();
        roots
    }

    /// A root r of r^2 + r = d (p = 2), the smaller of r and r + 1.
    pub fn solve_artin_schreier(&self, d: Elem) -> Option<Elem> {
        assert_eq!(self.p, 2, "Artin-Schreier solver is for characteristic 2");
        let solver = self.artin_schreier.get_or_init(|| {
            let mut rows: Vec<(u32, u64, u64)> = Vec::new();
            for i in 0..self.degree {
                let e = Elem(1 << i);
                let mut img = self.add(self.square(e), e).0 as u64;
                let mut comb = 1u64 << i;
                for &(pivot, r_img, r_comb) in &rows {
                    if img >> pivot & 1 == 1 {
                        img ^= r_img;
                        comb ^= r_comb;
                    }
                }
                if img != 0 {
                    let pivot = 63 - img.leading_zeros();
                    for row in rows.iter_mut() {
                        if row.1 >> pivot & 1 == 1 {
                            row.1 ^= img;
                            row.2 ^= comb;
                        }
                    }
                    rows.push((pivot, img, comb));
                }
            }
            ArtinSchreier { rows }
        });
        let mut target = d.0 as u64;
        let mut pre = 0u64;
        for &(pivot, img, comb) in &solver.rows {
            if target >> pivot & 1 == 1 {
                target ^= img;
                pre ^= comb;
            }
        }
        if target != 0 {
            return None;
        }
        let r = Elem(pre as u32);
        Some(r.min(Elem(r.0 ^ 1)))
    }

    /// The F_q-basis of the field used for coordinates and ranks.
    pub fn fq_basis(&self) -> Result<&FqBasis> {
        self.basis
            .get_or_init(|| FqBasis::new(self))
            .as_ref()
            .map_err(Clone::clone)
    }
}

/// Monic irreducible of degree m over F_p with the least base-p encoding.
fn least_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    for enc in 0..count {
        let mut f = Vec::with_capacity(m as usize + 1);
        let mut e = enc;
        for _ in 0..m {
            f.push((e % p as u64) as u32);
            e /= p as u64;
        }
        f.push(1);
        // a zero constant term means t divides f
        if m > 1 && f[0] == 0 {
            continue;
        }
        if poly::is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_modulus_and_elements() {
        let f = Field::new(2, 2, None).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        assert_eq!(f.modulus_encoding(), 7);
        assert_eq!(f.elements().count(), 4);
        // t * t = t + 1
        assert_eq!(f.mul(Elem(2), Elem(2)), Elem(3));
    }

    #[test]
    fn f3_prime_field() {
        let f = Field::new(3, 1, None).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.primitive(), Elem(2));
        assert_eq!(f.mul(Elem(2), Elem(2)), Elem(1));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(Field::new(4, 2, None).unwrap_err(), GfError::NotPrime(4));
        assert_eq!(Field::new(2, 0, None).unwrap_err(), GfError::ZeroDegree);
        assert!(matches!(
            Field::new(2, 6, Some(Tower { h: 1, n: 2 })),
            Err(GfError::TowerMismatch { .. })
        ));
        assert!(matches!(Field::new(2, 33, None), Err(GfError::TooLarge { .. })));
        assert_eq!(prime_power(12).unwrap_err(), GfError::NotPrimePower(12));
        assert_eq!(prime_power(81).unwrap(), (3, 4));
    }

    #[test]
    fn f1024_modulus_is_least_irreducible() {
        let f = Field::with_tower(2, 5).unwrap();
        // brute force: smallest degree-10 encoding with no factor of degree <= 5
        let enc = f.modulus_encoding();
        let divides = |g: &[u32], h: &[u32]| poly::rem(h, g, 2).is_empty();
        for cand in 1024u64..enc {
            let c: Vec<u32> = (0..11).map(|i| ((cand >> i) & 1) as u32).collect();
            let reducible = (2u64..64).any(|g| {
                let deg = 63 - g.leading_zeros();
                if deg == 0 || deg > 5 {
                    return false;
                }
                let gv: Vec<u32> = (0..=deg).map(|i| ((g >> i) & 1) as u32).collect();
                divides(&gv, &c)
            });
            assert!(reducible, "{cand} would be a smaller irreducible");
        }
        assert_eq!(enc, 1024 + 8 + 1); // t^10 + t^3 + 1
    }

    #[test]
    fn table_and_schoolbook_agree() {
        for (p, m) in [(2u32, 6u32), (3, 4), (5, 3), (7, 2)] {
            let f = Field::new(p, m, None).unwrap();
            assert!(f.has_tables());
            for a in f.elements() {
                for b in f.elements().step_by(7) {
                    assert_eq!(f.mul(a, b), f.mul_schoolbook(a, b));
                    assert_eq!(f.add(a, b), f.add_digits(a, b));
                }
            }
        }
    }

    #[test]
    fn parse_forms() {
        let f = Field::new(3, 4, None).unwrap();
        assert_eq!(f.parse("17").unwrap(), Elem(17));
        // 2 + t + t^2 = 2 + 3 + 9
        assert_eq!(f.parse("2+t+t^2").unwrap(), Elem(14));
        assert_eq!(f.parse("2 + 1*t + 1*t^2").unwrap(), Elem(14));
        assert_eq!(f.parse("t+t+t").unwrap(), Elem(0));
        assert!(f.parse("81").is_err());
        assert!(f.parse("t^4").is_err());
        assert!(f.parse("x").is_err());
    }

    #[test]
    fn frobenius_examples() {
        let f = Field::with_tower(2, 2).unwrap();
        let t = Elem(2);
        assert_eq!(f.pow_q(t, 1).unwrap(), f.mul_schoolbook(t, t));
        let g = f.primitive();
        assert_eq!(f.pow_q(g, 4).unwrap(), g);
        assert_eq!(f.pow_q(g, -1).unwrap(), f.pow_q(g, 3).unwrap());
        assert_eq!(f.pow_q(Elem::ZERO, 3).unwrap(), Elem::ZERO);
        let plain = Field::new(2, 4, None).unwrap();
        assert_eq!(plain.pow_q(t, 1), Err(GfError::NoTower));
    }

    #[test]
    fn norm_trace_on_f4() {
        let f = Field::with_tower(2, 1).unwrap();
        let t = Elem(2);
        assert_eq!(f.norm_rel(t).unwrap(), Elem::ONE);
        assert_eq!(f.trace_rel(t).unwrap(), Elem::ONE);
        assert_eq!(f.norm_rel(Elem::ONE).unwrap(), Elem::ONE);
        assert_eq!(f.trace_rel(Elem::ZERO).unwrap(), Elem::ZERO);
    }

    #[test]
    fn subfield_counts() {
        let f = Field::with_tower(2, 5).unwrap();
        let fixed = f.elements().filter(|&x| f.in_subfield(x, 5).unwrap()).count();
        assert_eq!(fixed, 32);
        assert_eq!(f.subfield_elements(5).unwrap().len(), 32);
        assert!(!f.in_subfield(f.primitive(), 5).unwrap());
        assert!(f.in_subfield(Elem::ONE, 2).unwrap());
        assert!(f.in_subfield(Elem::ONE, 3).is_err());
    }

    #[test]
    fn squares_and_special_elements() {
        let f = Field::with_tower(3, 1).unwrap();
        assert!(f.is_square(Elem::ONE).unwrap());
        assert!(!f.is_square(Elem(2)).unwrap());
        assert_eq!(f.is_square(Elem::ZERO), Err(GfError::Zero));
        assert_eq!(f.pick_nonsquare().unwrap(), Elem(2));
        // an element of F_9 outside F_3
        assert_eq!(f.is_square(f.primitive()), Err(GfError::NotInSubfield(f.primitive().0)));

        let f = Field::with_tower(2, 1).unwrap();
        assert_eq!(f.pick_trace_one().unwrap(), Elem::ONE);
        assert_eq!(f.pick_nonsquare(), Err(GfError::EvenCharacteristic));

        let f = Field::with_tower(2, 5).unwrap();
        let eps = f.pick_trace_one().unwrap();
        let expected = f
            .subfield_elements(5)
            .unwrap()
            .into_iter()
            .find(|&x| (0..5).fold(Elem::ZERO, |a, i| f.add(a, f.frob(x, i))) == Elem::ONE)
            .unwrap();
        assert_eq!(eps, expected);
    }

    #[test]
    fn nonsquare_count_in_half_field() {
        let f = Field::with_tower(5, 2).unwrap();
        let half = f.subfield_elements(2).unwrap();
        let nonsq = half
            .iter()
            .filter(|x| !x.is_zero() && !f.is_square(**x).unwrap())
            .count();
        assert_eq!(nonsq, 12);
    }

    #[test]
    fn sqrt_and_quadratics() {
        for f in [Field::new(3, 4, None).unwrap(), Field::new(2, 6, None).unwrap()] {
            for x in f.elements() {
                let sq = f.square(x);
                let r = f.sqrt(sq).unwrap();
                assert_eq!(f.square(r), sq);
            }
            for b in f.elements().step_by(5) {
                for c in f.elements().step_by(3) {
                    let brute: Vec<Elem> = f
                        .elements()
                        .filter(|&x| f.add(f.add(f.square(x), f.mul(b, x)), c).is_zero())
                        .collect();
                    assert_eq!(f.quadratic_roots(b, c), brute, "b={b} c={c}");
                }
            }
        }
    }

    #[test]
    fn tonelli_shanks_matches_table_sqrt() {
        let f = Field::new(5, 3, None).unwrap();
        for x in f.elements() {
            let sq = f.square(x);
            let r = f.tonelli_shanks(sq).unwrap();
            assert_eq!(f.square(r), sq);
            assert_eq!(r.min(f.neg(r)), f.sqrt(sq).unwrap());
        }
    }
}
