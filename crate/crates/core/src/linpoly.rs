//! q-polynomials Σ a_i x^(q^i) over F_(q^m), reduced modulo x^(q^m) - x, viewed
//! as F_q-linear maps of F_(q^m). Here F_(q^m) is the top field of a tower, so
//! m = 2n.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::gf::{Elem, Field, GfError};
use crate::par;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinError {
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error("polynomials live over different fields")]
    FieldMismatch,
    #[error("bucket of {size} vectors is not of the form q^w - 1 (q = {q})")]
    BadBucket { size: u64, q: u64 },
    #[error("cannot parse q-polynomial: {0}")]
    Parse(String),
}

pub type Result<T, E = LinError> = std::result::Result<T, E>;

#[derive(Clone)]
pub struct QPolynomial {
    field: Arc<Field>,
    coeffs: Vec<Elem>,
    /// (i, a_i, h·i) for the nonzero coefficients
    terms: Vec<(usize, Elem, u32)>,
}

impl fmt::Debug for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPolynomial[{}]", self.to_text())
    }
}

impl PartialEq for QPolynomial {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.field, &other.field) && self.coeffs == other.coeffs
    }
}

impl QPolynomial {
    /// Coefficient i multiplies x^(q^i); indices are folded modulo m.
    pub fn new(field: &Arc<Field>, coeffs: &[Elem]) -> Result<QPolynomial> {
        let tower = field.tower().ok_or(GfError::NoTower)?;
        let m = 2 * tower.n as usize;
        let mut folded = vec![Elem::ZERO; m];
        for (i, &c) in coeffs.iter().enumerate() {
            if c.0 as u64 >= field.order() {
                return Err(GfError::OutOfRange { enc: c.0 as u64, order: field.order() }.into());
            }
            folded[i % m] = field.add(folded[i % m], c);
        }
        Ok(Self::from_folded(field.clone(), folded))
    }

    fn from_folded(field: Arc<Field>, coeffs: Vec<Elem>) -> QPolynomial {
        let h = field.tower().expect("checked by constructors").h;
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| (i, c, h * i as u32))
            .collect();
        QPolynomial { field, coeffs, terms }
    }

    pub fn zero(field: &Arc<Field>) -> Result<QPolynomial> {
        Self::new(field, &[])
    }

    pub fn identity(field: &Arc<Field>) -> Result<QPolynomial> {
        Self::new(field, &[Elem::ONE])
    }

    /// a·x^(q^i)
    pub fn monomial(field: &Arc<Field>, a: Elem, i: usize) -> Result<QPolynomial> {
        let mut c = vec![Elem::ZERO; i + 1];
        c[i] = a;
        Self::new(field, &c)
    }

    /// x + a·x^(q^s) + b·x^(q^(s+n))
    pub fn binomial(field: &Arc<Field>, a: Elem, b: Elem, s: u32) -> Result<QPolynomial> {
        let n = field.n()? as usize;
        let s = s as usize;
        let mut c = vec![Elem::ZERO; s + n + 1];
        c[0] = Elem::ONE;
        c[s] = field.add(c[s], a);
        c[s + n] = field.add(c[s + n], b);
        Self::new(field, &c)
    }

    /// x^(q^s) + δ·x^(q^(s+n))
    pub fn scattered_binomial(field: &Arc<Field>, delta: Elem, s: u32) -> Result<QPolynomial> {
        let n = field.n()? as usize;
        let s = s as usize;
        let mut c = vec![Elem::ZERO; s + n + 1];
        c[s] = Elem::ONE;
        c[s + n] = field.add(c[s + n], delta);
        Self::new(field, &c)
    }

    /// Parses "a0,a1,…" (each entry an encoding or polynomial string).
    pub fn parse(field: &Arc<Field>, text: &str) -> Result<QPolynomial> {
        let coeffs = text
            .split(',')
            .map(|s| field.parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        let m = 2 * field.n()? as usize;
        if coeffs.len() > m {
            return Err(LinError::Parse(format!("{} coefficients for m = {m}", coeffs.len())));
        }
        Self::new(field, &coeffs)
    }

    pub fn to_text(&self) -> String {
        self.coeffs.iter().map(|c| c.0.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// Dimension m of F_(q^m) over F_q.
    pub fn m(&self) -> usize {
        self.coeffs.len()
    }

    /// Largest i with a_i ≠ 0.
    pub fn q_degree(&self) -> Option<usize> {
        self.terms.last().map(|t| t.0)
    }

    pub fn is_zero_map(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when f(x) = c·x for a constant c (possibly zero).
    pub fn is_scalar(&self) -> bool {
        self.terms.iter().all(|t| t.0 == 0)
    }

    fn check_same(&self, other: &QPolynomial) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) {
            Ok(())
        } else {
            Err(LinError::FieldMismatch)
        }
    }

    #[inline]
    pub fn evaluate(&self, x: Elem) -> Elem {
        let f = &*self.field;
        self.terms
            .iter()
            .fold(Elem::ZERO, |acc, &(_, a, k)| f.add(acc, f.mul(a, f.frob(x, k))))
    }

    pub fn add(&self, other: &QPolynomial) -> Result<QPolynomial> {
        self.check_same(other)?;
        let f = &*self.field;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Self::from_folded(self.field.clone(), coeffs))
    }

    /// c·f(x)
    pub fn scale(&self, c: Elem) -> QPolynomial {
        let f = &*self.field;
        let coeffs = self.coeffs.iter().map(|&a| f.mul(c, a)).collect();
        Self::from_folded(self.field.clone(), coeffs)
    }

    /// f(x) - λx
    pub fn minus_scalar(&self, lambda: Elem) -> QPolynomial {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] = self.field.sub(coeffs[0], lambda);
        Self::from_folded(self.field.clone(), coeffs)
    }

    /// (self ∘ other)(x) = self(other(x)), exponents reduced mod m.
    pub fn compose(&self, other: &QPolynomial) -> Result<QPolynomial> {
        self.check_same(other)?;
        let f = &*self.field;
        let m = self.m();
        let mut coeffs = vec![Elem::ZERO; m];
        for &(i, a, k) in &self.terms {
            for &(j, b, _) in &other.terms {
                let idx = (i + j) % m;
                coeffs[idx] = f.add(coeffs[idx], f.mul(a, f.frob(b, k)));
            }
        }
        Ok(Self::from_folded(self.field.clone(), coeffs))
    }

    /// λ^(-1)·f(λx), i.e. coefficients a_i λ^(q^i - 1).
    pub fn conjugate(&self, lambda: Elem) -> Result<QPolynomial> {
        let f = &*self.field;
        let inv = f.inv(lambda).ok_or(GfError::Zero)?;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                let h = f.tower().expect("tower").h;
                f.mul(a, f.mul(f.frob(lambda, h * i as u32), inv))
            })
            .collect();
        Ok(Self::from_folded(self.field.clone(), coeffs))
    }

    /// Adjoint with respect to (x, y) ↦ Tr_(q^m/q)(xy): the coefficient of
    /// x^(q^(m-i)) is a_i^(q^(m-i)).
    pub fn adjoint(&self) -> QPolynomial {
        let f = &*self.field;
        let m = self.m();
        let mut coeffs = vec![Elem::ZERO; m];
        for &(i, a, _) in &self.terms {
            let j = (m - i) % m;
            let h = f.tower().expect("tower").h;
            coeffs[j] = f.frob(a, h * j as u32);
        }
        Self::from_folded(self.field.clone(), coeffs)
    }

    /// dim_(F_q) ker f, from the rank of f on the fixed F_q-basis.
    pub fn kernel_dimension(&self) -> usize {
        let f = &*self.field;
        let basis = f.fq_basis().expect("tower fields have a basis");
        let m = self.m();
        let images: Vec<Elem> = (0..m)
            .map(|j| {
                self.terms.iter().fold(Elem::ZERO, |acc, &(i, a, _)| {
                    f.add(acc, f.mul(a, basis.frob(i, j)))
                })
            })
            .collect();
        m - basis.rank_of_images(f, &images)
    }

    /// f(x)/x for x ≠ 0.
    #[inline]
    fn ratio(&self, x: Elem) -> Elem {
        let f = &*self.field;
        f.mul(self.evaluate(x), f.inv(x).expect("x nonzero"))
    }

    /// Weight of every point ⟨(1, λ)⟩ of L_f, keyed by λ and sorted by its
    /// encoding. The weight of ⟨(1, λ)⟩ is dim ker(f - λx); λ = 0 is the
    /// kernel of f itself.
    pub fn point_weights(&self) -> Result<Vec<(Elem, u32)>> {
        let f = &*self.field;
        let order = f.order();
        let ratios = par::map_range(1..order, |x| self.ratio(Elem(x as u32)).0);
        let mut counts = vec![0u64; order as usize];
        for r in ratios {
            counts[r as usize] += 1;
        }
        let q = f.q()?;
        counts
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c > 0)
            .map(|(lambda, c)| Ok((Elem(lambda as u32), bucket_weight(c, q)?)))
            .collect()
    }

    pub fn weight_spectrum(&self) -> Result<WeightSpectrum> {
        let weights = self.point_weights()?;
        let q = self.field.q()?;
        let mut entries = BTreeMap::new();
        let mut kernel_weight = 0;
        for (lambda, w) in weights {
            *entries.entry(w).or_insert(0u64) += 1;
            if lambda.is_zero() {
                kernel_weight = w;
            }
        }
        Ok(WeightSpectrum { q, m: self.m() as u32, entries, kernel_weight })
    }

    /// Every point of L_f has weight one, i.e. dim ker(f - λx) ≤ 1 for all λ.
    /// Stops at the first bucket that outgrows q - 1.
    pub fn is_scattered(&self) -> Result<bool> {
        let f = &*self.field;
        let limit = f.q()? as u32 - 1;
        let mut counts = vec![0u32; f.order() as usize];
        for x in 1..f.order() {
            let r = self.ratio(Elem(x as u32));
            let c = &mut counts[r.0 as usize];
            *c += 1;
            if *c > limit {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn bucket_weight(size: u64, q: u64) -> Result<u32> {
    let mut w = 0;
    let mut qw = 1u64;
    while qw - 1 < size {
        qw *= q;
        w += 1;
    }
    if qw - 1 == size {
        Ok(w)
    } else {
        Err(LinError::BadBucket { size, q })
    }
}

/// Number of points of L_f of each weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightSpectrum {
    pub q: u64,
    pub m: u32,
    /// weight → number of points
    pub entries: BTreeMap<u32, u64>,
    /// weight of ⟨(1, 0)⟩, i.e. dim ker f (0 when f is injective)
    pub kernel_weight: u32,
}

impl WeightSpectrum {
    pub fn max_weight(&self) -> u32 {
        self.entries.keys().next_back().copied().unwrap_or(0)
    }

    pub fn num_points(&self) -> u64 {
        self.entries.values().sum()
    }

    /// Σ_w count(w)·(q^w - 1); equals q^m - 1 for any F_q-linear f.
    pub fn mass(&self) -> u64 {
        self.entries.iter().map(|(&w, &c)| c * (self.q.pow(w) - 1)).sum()
    }

    pub fn is_scattered(&self) -> bool {
        self.max_weight() <= 1
    }
}
