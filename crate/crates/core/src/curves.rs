//! Affine point counts on the auxiliary plane curves over F_(q^n), checked
//! against a widened Hasse-Weil window, and the passage from a curve point
//! back to a kernel witness.
//!
//! Odd q: -(S^(q^s) - S)² + ηZ² + η^(q^s)Z^(2q^s) - 2βη^((q^s+1)/2)Z^(q^s+1) = 0.
//! Even q: F(S, Z) = G'(S, Z² + Z + ε) with
//! G'(S, Y) = S^(2(q^s-1))Y^(q^s) + S^(q^s-1)(β + Tr_(q^s/2)(Y)) + Y.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::binomial::{
    self, check_conditions, fq, normalize_s, BinomialError, ConditionReport, ConditionSystem,
    WitnessCertificate,
};
use crate::gf::{Elem, Field, GfError};
use crate::par;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error(transparent)]
    Gf(#[from] GfError),
    #[error(transparent)]
    Binomial(#[from] BinomialError),
    #[error("invalid curve parameters: {0}")]
    InvalidSpec(String),
    #[error("point ({0}, {1}) is not on the curve")]
    NotOnCurve(u32, u32),
    #[error("point ({0}, {1}) is not a good point")]
    NotGood(u32, u32),
    #[error("condition system failed: {0:?}")]
    Conditions(ConditionReport),
}

pub type Result<T, E = CurveError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CurveSpec {
    pub parity: Parity,
    pub q: u64,
    pub n: u32,
    pub s: u32,
    pub beta: Elem,
    /// η (odd q, a nonsquare of F_(q^n)) or ε (even q, absolute trace 1)
    pub aux: Elem,
    /// ±1 for odd q, 0 for even q
    pub sign: i8,
}

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(CurveError::InvalidSpec(msg.into()))
}

impl CurveSpec {
    pub fn odd(field: &Field, s: u32, beta: Elem, eta: Elem, sign: i8) -> Result<CurveSpec> {
        if field.characteristic() == 2 {
            return invalid("odd curve over a field of characteristic 2");
        }
        let n = field.n()?;
        let s = normalize_s(s, n)?;
        if !field.in_half(beta)? || !field.in_half(eta)? {
            return invalid("beta and eta must lie in F_(q^n)");
        }
        let minus_one = field.neg(Elem::ONE);
        if beta == Elem::ONE || beta == minus_one {
            return invalid("beta must avoid 1 and -1");
        }
        if eta.is_zero() || field.is_square(eta)? {
            return invalid("eta must be a nonsquare of F_(q^n)");
        }
        if sign != 1 && sign != -1 {
            return invalid("sign must be +1 or -1");
        }
        Ok(CurveSpec { parity: Parity::Odd, q: field.q()?, n, s, beta, aux: eta, sign })
    }

    pub fn even(field: &Field, s: u32, beta: Elem, eps: Elem) -> Result<CurveSpec> {
        if field.characteristic() != 2 {
            return invalid("even curve over a field of odd characteristic");
        }
        let n = field.n()?;
        let s = normalize_s(s, n)?;
        if !field.in_half(beta)? || !field.in_half(eps)? {
            return invalid("beta and eps must lie in F_(q^n)");
        }
        if beta == Elem::ZERO || beta == Elem::ONE {
            return invalid("beta must avoid 0 and 1");
        }
        if field.abs_trace_half(eps)? != Elem::ONE {
            return invalid("eps must have absolute trace 1");
        }
        Ok(CurveSpec { parity: Parity::Even, q: field.q()?, n, s, beta, aux: eps, sign: 0 })
    }

    fn qs(&self) -> u64 {
        self.q.pow(self.s)
    }

    /// q^(2s) - q^s - 1
    pub fn genus(&self) -> u64 {
        let qs = self.qs();
        qs * qs - qs - 1
    }

    /// [Q + 1 - 2g√Q, Q + 1 + 2g√Q] with Q = q^n.
    pub fn window(&self) -> (f64, f64) {
        let big_q = self.q.pow(self.n) as f64;
        let r = 2.0 * self.genus() as f64 * big_q.sqrt();
        (big_q + 1.0 - r, big_q + 1.0 + r)
    }

    /// Points the place count may lose to bad places: 4 (odd) or 2q^s + 2 (even).
    pub fn base_slack(&self) -> u64 {
        match self.parity {
            Parity::Odd => 4,
            Parity::Even => 2 * self.qs() + 2,
        }
    }

    /// The lower window end exceeds the bad-place allowance, so a good point
    /// must exist.
    pub fn good_point_forced(&self) -> bool {
        self.window().0 > self.base_slack() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveCount {
    pub parity: Parity,
    pub q: u64,
    pub n: u32,
    pub s: u32,
    pub beta: Elem,
    pub aux: Elem,
    pub sign: i8,
    pub affine: u64,
    pub good: u64,
    pub singular: u64,
    pub slack: u64,
    pub hw_low: f64,
    pub hw_high: f64,
    pub ok: bool,
}

impl CurveCount {
    fn new(spec: &CurveSpec, affine: u64, good: u64, singular: u64) -> CurveCount {
        let (lo, hi) = spec.window();
        let slack = spec.base_slack() + singular;
        let in_window = affine as f64 >= lo - slack as f64 && affine as f64 <= hi + slack as f64;
        let ok = in_window && good <= affine && (good > 0 || !spec.good_point_forced());
        CurveCount {
            parity: spec.parity,
            q: spec.q,
            n: spec.n,
            s: spec.s,
            beta: spec.beta,
            aux: spec.aux,
            sign: spec.sign,
            affine,
            good,
            singular,
            slack,
            hw_low: lo,
            hw_high: hi,
            ok,
        }
    }
}

/// Tr_(q^s/2)(Y) as the polynomial Σ_(i < sh) Y^(2^i), evaluated anywhere.
pub fn trace_poly(field: &Field, y: Elem, terms: u32) -> Elem {
    (0..terms).fold(Elem::ZERO, |acc, i| field.add(acc, field.frob(y, i)))
}

/// Per-(field, s) tables shared by every odd curve: the map S ↦ (S^(q^s) - S)².
pub struct OddCounter {
    field: Arc<Field>,
    s: u32,
    half: Vec<Elem>,
    by_u2: HashMap<Elem, Vec<Elem>>,
}

impl OddCounter {
    pub fn new(field: &Arc<Field>, s: u32) -> Result<OddCounter> {
        if field.characteristic() == 2 {
            return invalid("odd counter over characteristic 2");
        }
        let t = field.tower().ok_or(GfError::NoTower)?;
        let s = normalize_s(s, t.n)?;
        let half = field.subfield_elements(t.h * t.n)?;
        let mut by_u2: HashMap<Elem, Vec<Elem>> = HashMap::new();
        for &x in &half {
            let u = field.sub(fq(field, x, s), x);
            by_u2.entry(field.square(u)).or_default().push(x);
        }
        Ok(OddCounter { field: field.clone(), s, half, by_u2 })
    }

    fn check(&self, spec: &CurveSpec) -> Result<()> {
        if spec.parity != Parity::Odd || spec.s != self.s || spec.n != self.field.n()? {
            return invalid("spec does not match the counter");
        }
        Ok(())
    }

    fn g_coeffs(&self, spec: &CurveSpec) -> (Elem, Elem, u64) {
        let f = &*self.field;
        let eta = spec.aux;
        let qs = spec.qs();
        let eta_qs = fq(f, eta, spec.s);
        let c = f.mul(f.small(2), f.mul(spec.beta, f.pow(eta, qs.div_ceil(2))));
        (eta_qs, c, qs)
    }

    /// G(Z) = ηZ² + η^(q^s)Z^(2q^s) - 2βη^((q^s+1)/2)Z^(q^s+1)
    fn g(&self, spec: &CurveSpec, coeffs: (Elem, Elem, u64), z: Elem) -> Elem {
        let f = &*self.field;
        let (eta_qs, c, _) = coeffs;
        let zq = fq(f, z, spec.s);
        let t1 = f.mul(spec.aux, f.square(z));
        let t2 = f.mul(eta_qs, f.square(zq));
        let t3 = f.mul(c, f.mul(zq, z));
        f.sub(f.add(t1, t2), t3)
    }

    /// (∂/∂S, ∂/∂Z) = (2(S^(q^s) - S), 2ηZ - 2βη^((q^s+1)/2)Z^(q^s)).
    fn is_singular(&self, spec: &CurveSpec, coeffs: (Elem, Elem, u64), s_: Elem, z: Elem) -> bool {
        let f = &*self.field;
        let u = f.sub(fq(f, s_, spec.s), s_);
        let dz = f.sub(f.mul(f.small(2), f.mul(spec.aux, z)), f.mul(coeffs.1, fq(f, z, spec.s)));
        u.is_zero() && dz.is_zero()
    }

    /// A point is good when t̄ = (ηZ² - S²)/4 ≠ 0 and Δ = ηZ² ≠ 0, so that
    /// X² - SX - T is irreducible.
    fn is_good(&self, spec: &CurveSpec, s_: Elem, z: Elem) -> bool {
        let f = &*self.field;
        let ez2 = f.mul(spec.aux, f.square(z));
        !z.is_zero() && ez2 != f.square(s_)
    }

    pub fn count(&self, spec: &CurveSpec) -> Result<CurveCount> {
        self.check(spec)?;
        let coeffs = self.g_coeffs(spec);
        let (mut affine, mut good, mut singular) = (0u64, 0u64, 0u64);
        for &z in &self.half {
            let Some(ss) = self.by_u2.get(&self.g(spec, coeffs, z)) else { continue };
            affine += ss.len() as u64;
            for &s_ in ss {
                good += self.is_good(spec, s_, z) as u64;
                singular += self.is_singular(spec, coeffs, s_, z) as u64;
            }
        }
        Ok(CurveCount::new(spec, affine, good, singular))
    }

    /// All affine points (S, Z), sorted by (Z, S) encodings.
    pub fn points(&self, spec: &CurveSpec) -> Result<Vec<(Elem, Elem)>> {
        self.check(spec)?;
        let coeffs = self.g_coeffs(spec);
        let mut out = Vec::new();
        for &z in &self.half {
            if let Some(ss) = self.by_u2.get(&self.g(spec, coeffs, z)) {
                out.extend(ss.iter().map(|&s_| (s_, z)));
            }
        }
        Ok(out)
    }

    pub fn good_points(&self, spec: &CurveSpec) -> Result<Vec<(Elem, Elem)>> {
        Ok(self.points(spec)?.into_iter().filter(|&(s_, z)| self.is_good(spec, s_, z)).collect())
    }
}

/// Evaluates the even curve on the F_(q^n) grid.
pub struct EvenCounter {
    field: Arc<Field>,
    s: u32,
    half: Vec<Elem>,
    trace_terms: u32,
}

impl EvenCounter {
    pub fn new(field: &Arc<Field>, s: u32) -> Result<EvenCounter> {
        if field.characteristic() != 2 {
            return invalid("even counter over odd characteristic");
        }
        let t = field.tower().ok_or(GfError::NoTower)?;
        let s = normalize_s(s, t.n)?;
        let half = field.subfield_elements(t.h * t.n)?;
        Ok(EvenCounter { field: field.clone(), s, half, trace_terms: s * t.h })
    }

    fn check(&self, spec: &CurveSpec) -> Result<()> {
        if spec.parity != Parity::Even || spec.s != self.s || spec.n != self.field.n()? {
            return invalid("spec does not match the counter");
        }
        Ok(())
    }

    /// G'(S, Y) with β replaced by `beta`.
    pub fn g_prime(&self, beta: Elem, s_: Elem, y: Elem) -> Elem {
        let f = &*self.field;
        let qs = self.field.q().expect("tower").pow(self.s);
        let sq = f.pow(s_, qs - 1);
        let t1 = f.mul(f.square(sq), fq(f, y, self.s));
        let t2 = f.mul(sq, f.add(beta, trace_poly(f, y, self.trace_terms)));
        f.add(f.add(t1, t2), y)
    }

    fn y_of(&self, spec: &CurveSpec, z: Elem) -> Elem {
        let f = &*self.field;
        f.add(f.add(f.square(z), z), spec.aux)
    }

    pub fn is_on_curve(&self, spec: &CurveSpec, s_: Elem, z: Elem) -> bool {
        self.g_prime(spec.beta, s_, self.y_of(spec, z)).is_zero()
    }

    /// ∂F/∂Z = S^(q^s-1) + 1 and ∂F/∂S = S^(q^s-2)(β + Tr_(q^s/2)(Y)).
    fn is_singular(&self, spec: &CurveSpec, s_: Elem, z: Elem) -> bool {
        let f = &*self.field;
        let qs = spec.qs();
        let dz = f.add(f.pow(s_, qs - 1), Elem::ONE);
        let tr = trace_poly(f, self.y_of(spec, z), self.trace_terms);
        let ds = f.mul(f.pow(s_, qs - 2), f.add(spec.beta, tr));
        dz.is_zero() && ds.is_zero()
    }

    fn is_good(&self, spec: &CurveSpec, s_: Elem, z: Elem) -> bool {
        !s_.is_zero() && !self.y_of(spec, z).is_zero()
    }

    pub fn points(&self, spec: &CurveSpec) -> Result<Vec<(Elem, Elem)>> {
        self.check(spec)?;
        let rows = par::map_slice(&self.half, |&z| {
            self.half
                .iter()
                .filter(|&&s_| self.is_on_curve(spec, s_, z))
                .map(|&s_| (s_, z))
                .collect::<Vec<_>>()
        });
        Ok(rows.into_iter().flatten().collect())
    }

    pub fn count(&self, spec: &CurveSpec) -> Result<CurveCount> {
        let pts = self.points(spec)?;
        let good = pts.iter().filter(|&&(s_, z)| self.is_good(spec, s_, z)).count() as u64;
        let singular = pts.iter().filter(|&&(s_, z)| self.is_singular(spec, s_, z)).count() as u64;
        Ok(CurveCount::new(spec, pts.len() as u64, good, singular))
    }

    pub fn good_points(&self, spec: &CurveSpec) -> Result<Vec<(Elem, Elem)>> {
        Ok(self.points(spec)?.into_iter().filter(|&(s_, z)| self.is_good(spec, s_, z)).collect())
    }
}

pub fn count_odd(field: &Arc<Field>, spec: &CurveSpec) -> Result<CurveCount> {
    OddCounter::new(field, spec.s)?.count(spec)
}

pub fn count_even(field: &Arc<Field>, spec: &CurveSpec) -> Result<CurveCount> {
    EvenCounter::new(field, spec.s)?.count(spec)
}

pub fn count(field: &Arc<Field>, spec: &CurveSpec) -> Result<CurveCount> {
    match spec.parity {
        Parity::Odd => count_odd(field, spec),
        Parity::Even => count_even(field, spec),
    }
}

/// Every valid odd spec (β, η, sign) in encoding order.
pub fn odd_specs(field: &Field, s: u32) -> Result<Vec<CurveSpec>> {
    let t = field.tower().ok_or(GfError::NoTower)?;
    let half = field.subfield_elements(t.h * t.n)?;
    let minus_one = field.neg(Elem::ONE);
    let etas: Vec<Elem> = half
        .iter()
        .copied()
        .filter(|&x| !x.is_zero() && !field.is_square(x).unwrap_or(true))
        .collect();
    let mut out = Vec::new();
    for &beta in half.iter().filter(|&&b| b != Elem::ONE && b != minus_one) {
        for &eta in &etas {
            for sign in [1i8, -1] {
                out.push(CurveSpec::odd(field, s, beta, eta, sign)?);
            }
        }
    }
    Ok(out)
}

/// Every valid even spec (β, ε) in encoding order.
pub fn even_specs(field: &Field, s: u32) -> Result<Vec<CurveSpec>> {
    let t = field.tower().ok_or(GfError::NoTower)?;
    let half = field.subfield_elements(t.h * t.n)?;
    let epss: Vec<Elem> = half
        .iter()
        .copied()
        .filter(|&x| field.abs_trace_half(x).map(|t| t == Elem::ONE).unwrap_or(false))
        .collect();
    let mut out = Vec::new();
    for &beta in half.iter().filter(|&&b| b != Elem::ZERO && b != Elem::ONE) {
        for &eps in &epss {
            out.push(CurveSpec::even(field, s, beta, eps)?);
        }
    }
    Ok(out)
}

/// H(S, Y) of the even-q reduction, term by term.
pub fn h_poly(field: &Field, beta: Elem, s: u32, s_: Elem, y: Elem) -> Elem {
    let f = field;
    let qs = f.q().expect("tower").pow(s);
    let x = f.pow(s_, qs - 1);
    let x2 = f.square(x);
    let x3 = f.mul(x2, x);
    let x4 = f.square(x2);
    let yq = fq(f, y, s);
    [
        f.square(y),
        f.mul(x4, f.square(yq)),
        f.mul(f.square(beta), x2),
        f.mul(x, y),
        f.mul(x3, yq),
        f.mul(beta, x2),
        f.mul(x2, y),
        f.mul(x2, yq),
    ]
    .into_iter()
    .fold(Elem::ZERO, |acc, t| f.add(acc, t))
}

/// Checks H = G·G' at every (S, Y) ∈ F_(q^n)².
pub fn split_check_even(field: &Arc<Field>, beta: Elem, s: u32) -> Result<bool> {
    if field.characteristic() != 2 {
        return invalid("split check needs even q");
    }
    let counter = EvenCounter::new(field, s)?;
    let f = &**field;
    let one_plus_beta = f.add(beta, Elem::ONE);
    let rows = par::map_slice(&counter.half, |&y| {
        counter.half.iter().all(|&s_| {
            let g = counter.g_prime(one_plus_beta, s_, y);
            let gp = counter.g_prime(beta, s_, y);
            h_poly(f, beta, counter.s, s_, y) == f.mul(g, gp)
        })
    });
    Ok(rows.into_iter().all(|ok| ok))
}

/// Result of walking a good curve point back to a kernel witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RoundTrip {
    pub system: ConditionSystem,
    pub xi: Elem,
    pub certificate: WitnessCertificate,
    /// N(δ) of the certificate. For odd q this is α when the chosen sign
    /// agrees with the B of ξ itself, and 1/α otherwise.
    pub class: Elem,
    pub norm_matches: bool,
}

/// T, S, A, B, α from a good point; checks the four conditions.
pub fn system_from_point(field: &Field, spec: &CurveSpec, s_: Elem, z: Elem) -> Result<ConditionSystem> {
    let f = field;
    let qs = spec.qs();
    let sys = match spec.parity {
        Parity::Odd => {
            let eta = spec.aux;
            let delta = f.mul(eta, f.square(z));
            let four = f.small(4);
            let t = f.div(f.sub(delta, f.square(s_)), four).expect("p odd");
            if t.is_zero() || delta.is_zero() {
                return Err(CurveError::NotGood(s_.0, z.0));
            }
            let sign = f.small(spec.sign as i64);
            let b = f.mul(sign, f.pow(delta, (qs - 1) / 2));
            let half = f.inv(f.small(2)).expect("p odd");
            let a = f.mul(half, f.sub(fq(f, s_, spec.s), f.mul(b, s_)));
            let den = f.add(spec.beta, sign);
            let alpha = f
                .div(f.sub(spec.beta, sign), den)
                .ok_or(CurveError::InvalidSpec("beta + sign = 0".into()))?;
            ConditionSystem { t, sigma: s_, a, b, alpha }
        }
        Parity::Even => {
            let y = f.add(f.add(f.square(z), z), spec.aux);
            let t = f.mul(f.square(s_), y);
            if t.is_zero() {
                return Err(CurveError::NotGood(s_.0, z.0));
            }
            let b = f.pow(s_, qs - 1);
            let tt = f.add(t, fq(f, t, spec.s));
            let a = f.add(f.mul(spec.beta, fq(f, s_, spec.s)), f.div(tt, s_).expect("S nonzero"));
            let alpha = f.div(spec.beta, f.add(Elem::ONE, spec.beta)).expect("beta != 1");
            ConditionSystem { t, sigma: s_, a, b, alpha }
        }
    };
    let report = check_conditions(f, &sys, spec.s)?;
    if !report.all() {
        return Err(CurveError::Conditions(report));
    }
    Ok(sys)
}

/// Good point → condition system → ξ (least root of X² - SX - T) →
/// certificate. With `full`, the certificate is also rank-checked.
pub fn params_from_curve_point(
    field: &Arc<Field>,
    spec: &CurveSpec,
    s_: Elem,
    z: Elem,
    full: bool,
) -> Result<RoundTrip> {
    let f = &**field;
    let sys = system_from_point(f, spec, s_, z)?;
    let roots = f.quadratic_roots(f.neg(sys.sigma), f.neg(sys.t));
    let xi = *roots.first().ok_or(CurveError::NotGood(s_.0, z.0))?;
    let certificate = binomial::witness_from_xi_scan(field, xi, spec.s, full)?;
    let class = f.norm_rel(certificate.delta)?;
    Ok(RoundTrip { system: sys, xi, certificate, class, norm_matches: class == sys.alpha })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct evaluation of the odd curve polynomial.
    fn odd_brute(field: &Field, spec: &CurveSpec) -> u64 {
        let f = field;
        let half = f.subfield_elements(f.tower().unwrap().h * spec.n).unwrap();
        let qs = spec.qs();
        let eta = spec.aux;
        let mut count = 0;
        for &s_ in &half {
            for &z in &half {
                let u = f.sub(f.pow(s_, qs), s_);
                let val = [
                    f.neg(f.square(u)),
                    f.mul(eta, f.square(z)),
                    f.mul(f.pow(eta, qs), f.pow(z, 2 * qs)),
                    f.neg(f.mul(f.small(2), f.mul(spec.beta, f.mul(f.pow(eta, qs.div_ceil(2)), f.pow(z, qs + 1))))),
                ]
                .into_iter()
                .fold(Elem::ZERO, |a, t| f.add(a, t));
                count += val.is_zero() as u64;
            }
        }
        count
    }

    #[test]
    fn odd_counts_match_brute_force_over_f9() {
        let f = Field::with_tower(3, 2).unwrap();
        let counter = OddCounter::new(&f, 1).unwrap();
        for spec in odd_specs(&f, 1).unwrap() {
            let c = counter.count(&spec).unwrap();
            assert_eq!(c.affine, odd_brute(&f, &spec), "{spec:?}");
            assert!(c.good <= c.affine);
            // (0, 0) lies on every curve and is never good
            assert!(counter.points(&spec).unwrap().contains(&(Elem::ZERO, Elem::ZERO)));
        }
    }

    #[test]
    fn odd_spec_validation() {
        let f = Field::with_tower(3, 2).unwrap();
        let eta = f.pick_nonsquare().unwrap();
        assert!(CurveSpec::odd(&f, 1, Elem::ONE, eta, 1).is_err());
        assert!(CurveSpec::odd(&f, 1, Elem(2), eta, 1).is_err());
        assert!(CurveSpec::odd(&f, 1, Elem::ZERO, Elem::ONE, 1).is_err());
        assert!(CurveSpec::odd(&f, 1, Elem::ZERO, eta, 0).is_err());
        let spec = CurveSpec::odd(&f, 1, Elem::ZERO, eta, 1).unwrap();
        assert_eq!(spec.genus(), 5);
    }

    #[test]
    fn window_for_f243() {
        let f = Field::with_tower(3, 5).unwrap();
        let eta = f.pick_nonsquare().unwrap();
        let spec = CurveSpec::odd(&f, 1, Elem::ZERO, eta, 1).unwrap();
        let (lo, hi) = spec.window();
        assert_eq!((lo.ceil(), hi.floor()), (89.0, 399.0));
        assert!(spec.good_point_forced());
    }

    #[test]
    fn even_curve_has_no_points_with_zero_s() {
        let f = Field::with_tower(2, 3).unwrap();
        let counter = EvenCounter::new(&f, 1).unwrap();
        for spec in even_specs(&f, 1).unwrap() {
            let pts = counter.points(&spec).unwrap();
            assert!(pts.iter().all(|&(s_, _)| !s_.is_zero()));
            let c = counter.count(&spec).unwrap();
            assert_eq!(c.good, c.affine);
        }
    }

    #[test]
    fn split_lemma_small() {
        let f = Field::with_tower(2, 3).unwrap();
        for beta in f.subfield_elements(3).unwrap() {
            assert!(split_check_even(&f, beta, 1).unwrap());
            // Y = 0 reduces both sides to (β² + β)S^(2(q^s - 1))
            for s_ in f.subfield_elements(3).unwrap() {
                let lhs = h_poly(&f, beta, 1, s_, Elem::ZERO);
                let x2 = f.square(s_);
                assert_eq!(lhs, f.mul(f.add(f.square(beta), beta), x2));
            }
        }
    }

    #[test]
    fn h_differs_from_a_wrong_factorization() {
        let f = Field::with_tower(2, 3).unwrap();
        let counter = EvenCounter::new(&f, 1).unwrap();
        let beta = f.subfield_elements(3).unwrap()[3];
        let mismatch = f.subfield_elements(3).unwrap().iter().any(|&s_| {
            f.subfield_elements(3).unwrap().iter().any(|&y| {
                let g = counter.g_prime(beta, s_, y);
                h_poly(&f, beta, 1, s_, y) != f.mul(g, g)
            })
        });
        assert!(mismatch);
    }

    #[test]
    fn odd_round_trip_class_follows_the_sign_of_b() {
        let f = Field::with_tower(3, 2).unwrap();
        let counter = OddCounter::new(&f, 1).unwrap();
        let (mut same, mut flipped) = (0, 0);
        for spec in odd_specs(&f, 1).unwrap() {
            for (s_, z) in counter.good_points(&spec).unwrap() {
                let rt = params_from_curve_point(&f, &spec, s_, z, true).unwrap();
                let own = binomial::ab_relations_from_xi(&f, rt.xi, 1).unwrap();
                if own.b == rt.system.b {
                    assert_eq!(rt.class, rt.system.alpha);
                    same += 1;
                } else {
                    assert_eq!(own.b, f.neg(rt.system.b));
                    assert_eq!(f.mul(rt.class, rt.system.alpha), Elem::ONE);
                    flipped += 1;
                }
            }
        }
        assert!(same > 0 && flipped > 0);
    }

    #[test]
    fn round_trips_over_f32() {
        let f = Field::with_tower(2, 5).unwrap();
        let counter = EvenCounter::new(&f, 1).unwrap();
        let spec = even_specs(&f, 1).unwrap()[0];
        let pts = counter.good_points(&spec).unwrap();
        assert!(!pts.is_empty());
        for (s_, z) in pts {
            let rt = params_from_curve_point(&f, &spec, s_, z, true).unwrap();
            assert!(rt.certificate.verified);
            assert!(rt.norm_matches);
        }
    }
}
