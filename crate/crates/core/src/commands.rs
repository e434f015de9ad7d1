//! Batch commands behind the `linkern` binary. Each returns a [`Report`]:
//! JSON rows plus a summary row, with rows in input-encoding order so that
//! repeated runs are byte-identical.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::binomial::{self, BinomialError, Verdict, WitnessIndex};
use crate::curves::{self, CurveError, CurveSpec, EvenCounter, OddCounter, Parity};
use crate::gf::{Elem, Field, GfError};
use crate::linpoly::{LinError, QPolynomial};
use crate::par;
use crate::rmcode::{self, CodeError, RankCode};

/// Enumerations beyond this many field operations are refused.
pub const OP_LIMIT: u128 = 1 << 30;

/// Rough field-operation costs used by the size guard.
const EVAL_COST: u128 = 4;
const WITNESS_COST: u128 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CommandError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("assertion failed: {0}")]
    Assertion(String),
    #[error("about {ops} field operations needed, above the limit of 2^30")]
    SizeGuard { ops: u128 },
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Assertion(_) => 1,
            CommandError::Invalid(_) => 2,
            CommandError::SizeGuard { .. } => 3,
        }
    }
}

macro_rules! invalid_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CommandError {
            fn from(e: $t) -> Self {
                CommandError::Invalid(e.to_string())
            }
        }
    )*};
}
invalid_from!(GfError, LinError, CodeError);

impl From<BinomialError> for CommandError {
    fn from(e: BinomialError) -> Self {
        match e {
            BinomialError::Verification(_) | BinomialError::NoLambda { .. } => {
                CommandError::Assertion(e.to_string())
            }
            other => CommandError::Invalid(other.to_string()),
        }
    }
}

impl From<CurveError> for CommandError {
    fn from(e: CurveError) -> Self {
        match e {
            CurveError::Binomial(b) => b.into(),
            CurveError::Conditions(_) => CommandError::Assertion(e.to_string()),
            other => CommandError::Invalid(other.to_string()),
        }
    }
}

pub type Result<T, E = CommandError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub rows: Vec<Value>,
    pub summary: Value,
    pub pass: bool,
}

impl Report {
    fn new(command: &str, rows: Vec<Value>, mut summary: Value, pass: bool) -> Report {
        summary["command"] = json!(command);
        summary["rows"] = json!(rows.len());
        summary["pass"] = json!(pass);
        Report { rows, summary, pass }
    }

    /// One JSON object per line, the summary last.
    pub fn write_to(&self, w: &mut dyn Write) -> io::Result<()> {
        for row in self.rows.iter().chain(std::iter::once(&self.summary)) {
            serde_json::to_writer(&mut *w, row)?;
            w.write_all(b"\n")?;
        }
        Ok(())
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

fn guard(ops: u128) -> Result<()> {
    if ops > OP_LIMIT {
        Err(CommandError::SizeGuard { ops })
    } else {
        Ok(())
    }
}

pub fn field(q: u64, n: u32) -> Result<Arc<Field>> {
    Ok(Field::with_tower(q, n)?)
}

fn parse_elem(field: &Field, text: &str, what: &str) -> Result<Elem> {
    field
        .parse(text)
        .map_err(|e| CommandError::Invalid(format!("{what}: {e}")))
}

/// Kernel dimension of f_{a,b,s} and the bound for nonzero a, b: at most 1
/// when N(a) = N(b), at most 2 otherwise.
pub fn kernel(q: u64, n: u32, s: u32, a: &str, b: &str) -> Result<Report> {
    let f = field(q, n)?;
    let a = parse_elem(&f, a, "a")?;
    let b = parse_elem(&f, b, "b")?;
    let p = binomial::BinomialParams::new(&f, a, b, s)?;
    let dim = p.kernel_dimension();
    let (na, nb) = (f.norm_rel(a)?, f.norm_rel(b)?);
    let bound = (!a.is_zero() && !b.is_zero()).then_some(if na == nb { 1 } else { 2 });
    let bound_ok = bound.is_none_or(|bd| dim <= bd);
    let row = json!({"dim": dim, "norm_a": na, "norm_b": nb, "bound": bound, "bound_ok": bound_ok});
    let summary = json!({"q": q, "n": n, "s": p.s});
    Ok(Report::new("kernel", vec![row], summary, bound_ok))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessMode {
    /// a single δ (encoding or polynomial string)
    Delta(String),
    /// every δ with N(δ) ∉ {0, 1}
    All,
    /// the least δ of every norm class ∉ {0, 1}
    PerClass,
}

fn certificate_row(index: &WitnessIndex, f: &Arc<Field>, delta: Elem) -> Result<(Value, bool)> {
    match index.witness_for(f, delta)? {
        Some(c) => {
            let ok = c.verified && c.verify(f);
            Ok((serde_json::to_value(c).expect("serializable"), ok))
        }
        None => Ok((json!({"delta": delta, "status": "NOT_FOUND"}), false)),
    }
}

/// ξ-scan plus transport: verified certificates for the requested δ values.
pub fn witness(q: u64, n: u32, s: u32, mode: WitnessMode) -> Result<Report> {
    let f = field(q, n)?;
    let s = binomial::normalize_s(s, n)?;
    let order = f.order() as u128;
    let targets: Vec<Elem> = match &mode {
        WitnessMode::Delta(text) => {
            let d = parse_elem(&f, text, "delta")?;
            let nd = f.norm_rel(d)?;
            if nd == Elem::ZERO || nd == Elem::ONE {
                return Err(BinomialError::NormExcluded(nd.0).into());
            }
            vec![d]
        }
        WitnessMode::All => f
            .elements()
            .filter(|&d| {
                let nd = f.norm_rel(d).expect("tower");
                nd != Elem::ZERO && nd != Elem::ONE
            })
            .collect(),
        WitnessMode::PerClass => {
            let mut least: BTreeMap<Elem, Elem> = BTreeMap::new();
            for d in f.elements() {
                let nd = f.norm_rel(d)?;
                if nd != Elem::ZERO && nd != Elem::ONE {
                    least.entry(nd).or_insert(d);
                }
            }
            least.into_values().collect()
        }
    };
    guard(order * WITNESS_COST + targets.len() as u128 * order * EVAL_COST)?;
    let index = WitnessIndex::build(&f, s)?;
    let results = par::map_slice(&targets, |&d| certificate_row(&index, &f, d));
    let mut rows = Vec::with_capacity(results.len());
    let (mut found, mut missing) = (0usize, 0usize);
    for r in results {
        let (row, ok) = r?;
        if ok {
            found += 1;
        } else {
            missing += 1;
        }
        rows.push(row);
    }
    let summary = json!({
        "q": q, "n": n, "s": s,
        "xi_scanned": index.scanned,
        "xi_skipped": index.skipped.len(),
        "classes_hit": index.by_class.len(),
        "certificates": found,
        "not_found": missing,
        "threshold": binomial::threshold(q, s),
    });
    // below the threshold a missing class is possible and not a failure
    let pass = missing == 0 || n < binomial::threshold(q, s);
    Ok(Report::new("witness", rows, summary, pass))
}

/// Classification of L_{δ,s} for one δ or for every nonzero δ.
pub fn classify(q: u64, n: u32, s: u32, delta: Option<&str>, exhaustive: bool) -> Result<Report> {
    let f = field(q, n)?;
    let s = binomial::normalize_s(s, n)?;
    let targets: Vec<Elem> = match delta {
        Some(text) => vec![parse_elem(&f, text, "delta")?],
        None => f.elements().skip(1).collect(),
    };
    if exhaustive {
        guard(targets.len() as u128 * f.order() as u128 * EVAL_COST)?;
    }
    let results = par::map_slice(&targets, |&d| binomial::classify(&f, s, d, exhaustive));
    let mut rows = Vec::with_capacity(targets.len());
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for (&d, r) in targets.iter().zip(results) {
        let c = r?;
        let verdict = serde_json::to_value(c.verdict).expect("serializable");
        *counts.entry(verdict.as_str().unwrap_or("?").to_string()).or_insert(0) += 1;
        rows.push(json!({"delta": d, "norm": f.norm_rel(d)?, "verdict": verdict, "rule": c.rule}));
    }
    let summary = json!({"q": q, "n": n, "s": s, "counts": counts});
    Ok(Report::new("classify", rows, summary, true))
}

fn curve_spec(f: &Field, s: u32, beta: &str, aux: Option<&str>, sign: i8) -> Result<CurveSpec> {
    let beta = parse_elem(f, beta, "beta")?;
    if f.characteristic() == 2 {
        let eps = match aux {
            Some(t) => parse_elem(f, t, "eps")?,
            None => f.pick_trace_one()?,
        };
        Ok(CurveSpec::even(f, s, beta, eps)?)
    } else {
        let eta = match aux {
            Some(t) => parse_elem(f, t, "eta")?,
            None => f.pick_nonsquare()?,
        };
        Ok(CurveSpec::odd(f, s, beta, eta, sign)?)
    }
}

/// Point count of one curve; the parity follows from q. `aux` is η or ε and
/// defaults to the least valid element.
pub fn curve(q: u64, n: u32, s: u32, beta: &str, aux: Option<&str>, sign: i8) -> Result<Report> {
    let f = field(q, n)?;
    let half = f.half_order()? as u128;
    guard(half * half * EVAL_COST)?;
    let spec = curve_spec(&f, s, beta, aux, sign)?;
    let count = curves::count(&f, &spec)?;
    let summary = json!({"q": q, "n": n, "s": spec.s});
    let row = serde_json::to_value(count).expect("serializable");
    Ok(Report::new("curve", vec![row], summary, count.ok))
}

/// Aggregate of a sweep over all valid curve parameters.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepTotals {
    pub curves: u64,
    pub window_failures: u64,
    /// curves without a good point, forced or not
    pub no_good_point: u64,
    pub round_trips: u64,
    pub round_trip_failures: u64,
    /// round trips whose certificate landed in the class 1/α instead of α
    pub inverted_class: u64,
}

/// Every valid (β, η, sign) or (β, ε); with `roundtrip`, each good point is
/// walked back to a certificate checked by evaluation.
pub fn curve_sweep(q: u64, n: u32, s: u32, roundtrip: bool) -> Result<Report> {
    let f = field(q, n)?;
    let s = binomial::normalize_s(s, n)?;
    let half = f.half_order()? as u128;
    let specs = if f.characteristic() == 2 {
        curves::even_specs(&f, s)?
    } else {
        curves::odd_specs(&f, s)?
    };
    let per_curve = if f.characteristic() == 2 { half * half * EVAL_COST } else { half * EVAL_COST };
    let rt = if roundtrip { half * WITNESS_COST } else { 0 };
    guard(specs.len() as u128 * (per_curve + rt))?;
    let (rows, totals) = sweep(&f, &specs, roundtrip)?;
    let pass = totals.window_failures == 0
        && totals.no_good_point == 0
        && totals.round_trip_failures == 0;
    let summary = json!({
        "q": q, "n": n, "s": s,
        "curves": totals.curves,
        "window_failures": totals.window_failures,
        "no_good_point": totals.no_good_point,
        "round_trips": totals.round_trips,
        "round_trip_failures": totals.round_trip_failures,
        "inverted_class": totals.inverted_class,
    });
    Ok(Report::new("curve-sweep", rows, summary, pass))
}

/// Counts (and optionally round-trips) every spec; rows in spec order.
pub fn sweep(f: &Arc<Field>, specs: &[CurveSpec], roundtrip: bool) -> Result<(Vec<Value>, SweepTotals)> {
    let Some(first) = specs.first() else {
        return Ok((Vec::new(), SweepTotals::default()));
    };
    let s = first.s;
    enum Counter {
        Odd(OddCounter),
        Even(EvenCounter),
    }
    let counter = match first.parity {
        Parity::Odd => Counter::Odd(OddCounter::new(f, s)?),
        Parity::Even => Counter::Even(EvenCounter::new(f, s)?),
    };
    let per_spec = |spec: &CurveSpec| -> Result<(Value, SweepTotals)> {
        let (count, good) = match &counter {
            Counter::Odd(c) => (c.count(spec)?, if roundtrip { c.good_points(spec)? } else { Vec::new() }),
            // the even count is a full grid scan; run it on this thread
            Counter::Even(c) => par::sequential(|| -> Result<_> {
                Ok((c.count(spec)?, if roundtrip { c.good_points(spec)? } else { Vec::new() }))
            })?,
        };
        let mut t = SweepTotals { curves: 1, ..Default::default() };
        let (lo, hi) = (count.hw_low - count.slack as f64, count.hw_high + count.slack as f64);
        if (count.affine as f64) < lo || (count.affine as f64) > hi {
            t.window_failures += 1;
        }
        if count.good == 0 {
            t.no_good_point += 1;
        }
        for (s_, z) in good {
            t.round_trips += 1;
            match curves::params_from_curve_point(f, spec, s_, z, false) {
                Ok(r) if r.certificate.verified => {
                    if !r.norm_matches {
                        t.inverted_class += 1;
                    }
                }
                _ => t.round_trip_failures += 1,
            }
        }
        Ok((serde_json::to_value(count).expect("serializable"), t))
    };
    let results = par::map_slice(specs, per_spec);
    let mut rows = Vec::with_capacity(specs.len());
    let mut totals = SweepTotals::default();
    for r in results {
        let (row, t) = r?;
        rows.push(row);
        totals.curves += t.curves;
        totals.window_failures += t.window_failures;
        totals.no_good_point += t.no_good_point;
        totals.round_trips += t.round_trips;
        totals.round_trip_failures += t.round_trip_failures;
        totals.inverted_class += t.inverted_class;
    }
    Ok((rows, totals))
}

/// Rank-metric code of f_{δ,s}, with the minimum distance set against both
/// candidate values and checked against scatteredness.
pub fn mrd(q: u64, n: u32, s: u32, delta: &str) -> Result<Report> {
    let f = field(q, n)?;
    let s = binomial::normalize_s(s, n)?;
    guard(2 * f.order() as u128 * EVAL_COST)?;
    let d = parse_elem(&f, delta, "delta")?;
    let poly = QPolynomial::scattered_binomial(&f, d, s)?;
    let code = RankCode::new(&poly)?;
    let scattered = poly.is_scattered()?;
    let cand = rmcode::distance_candidates(&code);
    let mut row = serde_json::to_value(&code).expect("serializable");
    row["delta"] = json!(d);
    row["scattered"] = json!(scattered);
    row["candidates"] = serde_json::to_value(cand).expect("serializable");
    let pass = code.mrd == scattered && cand.equals_m_minus_max_weight;
    let summary = json!({"q": q, "n": n, "s": s});
    Ok(Report::new("mrd", vec![row], summary, pass))
}

/// Distinct norms N(δ̄(ξ)) over the ξ-scan.
pub fn norms(q: u64, n: u32, s: u32) -> Result<Report> {
    let f = field(q, n)?;
    guard(f.order() as u128 * EVAL_COST * 4)?;
    let img = binomial::norm_image_count(&f, s)?;
    let half = f.half_order()?;
    let row = serde_json::to_value(&img).expect("serializable");
    let summary = json!({"q": q, "n": n, "s": s, "count": img.count, "nonzero_norms": half - 1});
    Ok(Report::new("norms", vec![row], summary, (img.count as u64) < half))
}

/// Outcome of one sampled property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyResult {
    pub name: &'static str,
    pub checked: u64,
    pub violations: u64,
}

fn valid_shifts(n: u32) -> Vec<u32> {
    (1..2 * n).filter(|&s| binomial::normalize_s(s, n).is_ok()).collect()
}

/// Seeded property checks on one field.
pub fn property_suite(q: u64, n: u32, seed: u64, samples: u64) -> Result<Vec<PropertyResult>> {
    let f = field(q, n)?;
    let order = f.order();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rand_elem = |rng: &mut ChaCha8Rng| Elem(rng.gen_range(0..order) as u32);
    let mut out = Vec::new();
    let mut record = |name, checked, violations| out.push(PropertyResult { name, checked, violations });
    let m = 2 * n as usize;
    let shifts = valid_shifts(n);
    let trace_q = |x: Elem| {
        let h = f.tower().expect("tower").h;
        f.trace_down(x, f.degree(), h)
    };

    // field axioms
    let mut bad = 0;
    for _ in 0..samples {
        let (x, y, z) = (rand_elem(&mut rng), rand_elem(&mut rng), rand_elem(&mut rng));
        bad += (f.mul(f.mul(x, y), z) != f.mul(x, f.mul(y, z))) as u64;
        bad += (f.add(f.add(x, y), z) != f.add(x, f.add(y, z))) as u64;
        bad += (f.mul(x, f.add(y, z)) != f.add(f.mul(x, y), f.mul(x, z))) as u64;
        if let Some(inv) = f.inv(x) {
            bad += (f.mul(x, inv) != Elem::ONE) as u64;
        }
    }
    record("field_axioms", samples, bad);

    // Frobenius is an automorphism
    let mut bad = 0;
    for _ in 0..samples {
        let (x, y) = (rand_elem(&mut rng), rand_elem(&mut rng));
        let k = rng.gen_range(-(m as i64)..2 * m as i64);
        let fr = |e: Elem| f.pow_q(e, k).expect("tower");
        bad += (fr(f.add(x, y)) != f.add(fr(x), fr(y))) as u64;
        bad += (fr(f.mul(x, y)) != f.mul(fr(x), fr(y))) as u64;
    }
    record("frobenius_automorphism", samples, bad);

    // adjoint: same kernel dimension, trace duality, involution
    let mut bad = 0;
    for i in 0..samples {
        let poly = if i % 2 == 0 {
            let coeffs: Vec<Elem> = (0..m).map(|_| rand_elem(&mut rng)).collect();
            QPolynomial::new(&f, &coeffs)?
        } else {
            let s = shifts[rng.gen_range(0..shifts.len())];
            QPolynomial::binomial(&f, rand_elem(&mut rng), rand_elem(&mut rng), s)?
        };
        let adj = poly.adjoint();
        bad += (adj.kernel_dimension() != poly.kernel_dimension()) as u64;
        bad += (adj.adjoint() != poly) as u64;
        let (x, y) = (rand_elem(&mut rng), rand_elem(&mut rng));
        bad += (trace_q(f.mul(y, poly.evaluate(x))) != trace_q(f.mul(x, adj.evaluate(y)))) as u64;
    }
    record("adjoint_kernel", samples, bad);

    // λ-conjugation keeps the kernel dimension
    let mut bad = 0;
    for _ in 0..samples {
        let s = shifts[rng.gen_range(0..shifts.len())];
        let poly = QPolynomial::binomial(&f, rand_elem(&mut rng), rand_elem(&mut rng), s)?;
        let lambda = Elem(rng.gen_range(1..order) as u32);
        bad += (poly.conjugate(lambda)?.kernel_dimension() != poly.kernel_dimension()) as u64;
    }
    record("conjugation_invariance", samples, bad);

    // weight spectra: mass identity, and scattered ⇔ max weight 1
    let spectra = samples.min(if order <= 1 << 12 { 40 } else { 8 });
    let mut bad = 0;
    for _ in 0..spectra {
        let s = shifts[rng.gen_range(0..shifts.len())];
        let poly = QPolynomial::scattered_binomial(&f, rand_elem(&mut rng), s)?;
        let spec = poly.weight_spectrum()?;
        bad += (spec.mass() != order - 1) as u64;
        bad += (spec.is_scattered() != poly.is_scattered()?) as u64;
        let q = f.q()?;
        bad += (spec.is_scattered() != (spec.num_points() == (order - 1) / (q - 1))) as u64;
    }
    record("spectrum_mass", spectra, bad);

    // rank-based kernel dimension against enumeration
    if order <= 1 << 12 {
        let mut bad = 0;
        for _ in 0..spectra {
            let s = shifts[rng.gen_range(0..shifts.len())];
            let p = binomial::BinomialParams::new(&f, rand_elem(&mut rng), rand_elem(&mut rng), s)?;
            let zeros = f.elements().filter(|&x| p.evaluate(x).is_zero()).count() as u64;
            bad += (f.q()?.pow(p.kernel_dimension() as u32) != zeros) as u64;
        }
        record("kernel_enumeration", spectra, bad);
    }

    // relative norm and trace: exhaustive fibre sizes
    if order <= 1 << 16 {
        let half = f.half_order()?;
        let mut norm_hits: BTreeMap<Elem, u64> = BTreeMap::new();
        let mut trace_hits: BTreeMap<Elem, u64> = BTreeMap::new();
        for x in f.elements() {
            *norm_hits.entry(f.norm_rel(x)?).or_insert(0) += 1;
            *trace_hits.entry(f.trace_rel(x)?).or_insert(0) += 1;
        }
        let mut bad = 0;
        bad += (norm_hits.len() as u64 != half) as u64;
        bad += (trace_hits.len() as u64 != half) as u64;
        for (&v, &c) in &norm_hits {
            bad += (!f.in_half(v)?) as u64;
            bad += (c != if v.is_zero() { 1 } else { half + 1 }) as u64;
        }
        bad += trace_hits.values().filter(|&&c| c != half).count() as u64;
        for _ in 0..samples {
            let (x, y) = (rand_elem(&mut rng), rand_elem(&mut rng));
            bad += (f.norm_rel(f.mul(x, y))? != f.mul(f.norm_rel(x)?, f.norm_rel(y)?)) as u64;
        }
        record("norm_trace_surjectivity", order + samples, bad);
    }

    if f.characteristic() != 2 && order <= 1 << 16 {
        let half = f.subfield_elements(f.tower().expect("tower").h * n)?;
        let nonsquares = half.iter().filter(|&&x| !x.is_zero() && !f.is_square(x).unwrap_or(true)).count() as u64;
        record("nonsquare_count", half.len() as u64, (nonsquares != (half.len() as u64 - 1) / 2) as u64);
    }

    // relations among A, B, S, T, and the two norms attached to ξ
    let mut bad = 0;
    let mut checked = 0;
    while checked < samples {
        let xi = rand_elem(&mut rng);
        if f.in_half(xi)? {
            continue;
        }
        checked += 1;
        let s = shifts[rng.gen_range(0..shifts.len())];
        bad += (!binomial::ab_relations_from_xi(&f, xi, s)?.all()) as u64;
        if let (Ok(d), Ok(c)) = (
            binomial::delta_from_xi(&f, xi, s),
            binomial::witness_from_xi_scan(&f, xi, s, false),
        ) {
            bad += (f.norm_rel(d)? != f.norm_rel(c.delta)?) as u64;
        }
    }
    record("xi_relations", checked, bad);
    Ok(out)
}

pub fn selfcheck(q: u64, n: u32, seed: u64, samples: u64) -> Result<Report> {
    guard(samples as u128 * 2048 + field(q, n)?.order() as u128 * 64)?;
    let results = property_suite(q, n, seed, samples)?;
    let rows: Vec<Value> = results
        .iter()
        .map(|r| json!({"property": r.name, "checked": r.checked, "violations": r.violations}))
        .collect();
    let violations: u64 = results.iter().map(|r| r.violations).sum();
    let summary = json!({"q": q, "n": n, "seed": seed, "samples": samples, "violations": violations});
    Ok(Report::new("selfcheck", rows, summary, violations == 0))
}

/// Verdict counts of a classification report, for callers that only need
/// the tally.
pub fn verdict_of(row: &Value) -> Option<Verdict> {
    match row["verdict"].as_str()? {
        "SCATTERED" => Some(Verdict::Scattered),
        "NOT_SCATTERED" => Some(Verdict::NotScattered),
        "UNKNOWN" => Some(Verdict::Unknown),
        _ => None,
    }
}
