//! One PASS/FAIL line per acceptance criterion. Exits nonzero when any
//! criterion fails.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use linkern::binomial::{self, BinomialKernels};
use linkern::commands::{self, WitnessMode};
use linkern::curves;
use linkern::gf::{Elem, Field};
use linkern::linpoly::QPolynomial;
use linkern::rmcode::{self, RankCode};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

type Check = fn() -> Result<Outcome, String>;

fn field(q: u64, n: u32) -> Result<Arc<Field>, String> {
    Field::with_tower(q, n).map_err(|e| e.to_string())
}

fn s_values(n: u32) -> Vec<u32> {
    (1..2 * n).filter(|&s| binomial::normalize_s(s, n).is_ok()).collect()
}

fn norm_excluded(f: &Field, d: Elem) -> bool {
    let nd = f.norm_rel(d).expect("tower field");
    nd == Elem::ZERO || nd == Elem::ONE
}

/// Every δ with N(δ) ∉ {0, 1} at (2, 5, 1) gets a verified certificate.
fn c1() -> Result<Outcome, String> {
    let f = field(2, 5)?;
    let expected = f.elements().filter(|&d| !norm_excluded(&f, d)).count();
    let r = commands::witness(2, 5, 1, WitnessMode::All).map_err(|e| e.to_string())?;
    let certs = r.summary["certificates"].as_u64().unwrap_or(0) as usize;
    let missing = r.summary["not_found"].as_u64().unwrap_or(u64::MAX);
    // re-verify independently of the command
    let mut failures = 0;
    for row in &r.rows {
        let d = Elem(row["delta"].as_u64().unwrap_or(0) as u32);
        let a = Elem(row["a"].as_u64().unwrap_or(0) as u32);
        let x0 = Elem(row["x0"].as_u64().unwrap_or(0) as u32);
        let xi = Elem(row["xi"].as_u64().unwrap_or(0) as u32);
        let p = binomial::BinomialParams::new(&f, a, f.mul(d, a), 1).map_err(|e| e.to_string())?;
        let ok = p.evaluate(x0).is_zero() && p.evaluate(f.mul(xi, x0)).is_zero() && p.kernel_dimension() == 2;
        failures += (!ok) as usize;
    }
    Ok(outcome(
        certs == expected && missing == 0 && failures == 0 && expected == 990,
        format!("{certs}/{expected} certificates, {missing} not found, {failures} re-check failures"),
    ))
}

/// One certificate per norm class at (3, 5, 1).
fn c2() -> Result<Outcome, String> {
    let r = commands::witness(3, 5, 1, WitnessMode::PerClass).map_err(|e| e.to_string())?;
    let certs = r.summary["certificates"].as_u64().unwrap_or(0);
    let missing = r.summary["not_found"].as_u64().unwrap_or(u64::MAX);
    let f = field(3, 5)?;
    let classes: BTreeSet<Elem> = r
        .rows
        .iter()
        .map(|row| f.norm_rel(Elem(row["delta"].as_u64().unwrap_or(0) as u32)).expect("tower"))
        .collect();
    Ok(outcome(
        certs == 241 && missing == 0 && classes.len() == 241,
        format!("{certs} certificates over {} norm classes, {missing} not found", classes.len()),
    ))
}

/// Norm bounds on kernel dimension, exhaustive on four field sizes.
fn c3() -> Result<Outcome, String> {
    let towers = [(2u64, 3u32), (8, 1), (3, 2), (9, 1), (2, 4), (4, 2), (16, 1), (2, 5), (32, 1)];
    let mut checked = 0u64;
    let mut violations = 0u64;
    for (q, n) in towers {
        let f = field(q, n)?;
        let nonzero: Vec<Elem> = f.elements().skip(1).collect();
        let norms: Vec<Elem> = nonzero.iter().map(|&x| f.norm_rel(x).expect("tower")).collect();
        for s in s_values(n) {
            let k = BinomialKernels::new(&f, s).map_err(|e| e.to_string())?;
            for (i, &a) in nonzero.iter().enumerate() {
                for (j, &b) in nonzero.iter().enumerate() {
                    let bound = if norms[i] == norms[j] { 1 } else { 2 };
                    violations += (k.dim(a, b) > bound) as u64;
                }
            }
            checked += (nonzero.len() * nonzero.len()) as u64;
        }
    }
    Ok(outcome(violations == 0, format!("{checked} binomials over 9 towers, {violations} violations")))
}

/// The n = 3 criterion agrees with enumeration for every nonzero δ.
fn c4() -> Result<Outcome, String> {
    let mut parts = Vec::new();
    let mut pass = true;
    for (q, expected) in [(5u64, 15_624usize), (4, 4_095)] {
        let f = field(q, 3)?;
        let deltas: Vec<Elem> = f.elements().skip(1).collect();
        let mut mismatches = 0;
        let mut scattered = 0;
        let mut norm_one = 0;
        for &d in &deltas {
            let poly = QPolynomial::scattered_binomial(&f, d, 2).map_err(|e| e.to_string())?;
            let enumerated = poly.is_scattered().map_err(|e| e.to_string())?;
            // the criterion needs N(δ) ≠ 1; those δ go through the norm-one rule
            let predicted = if f.norm_rel(d).map_err(|e| e.to_string())? == Elem::ONE {
                norm_one += 1;
                binomial::classify(&f, 2, d, false).map_err(|e| e.to_string())?.verdict
                    == binomial::Verdict::Scattered
            } else {
                binomial::lp_criterion_n3(&f, d).map_err(|e| e.to_string())?
            };
            mismatches += (predicted != enumerated) as usize;
            scattered += enumerated as usize;
        }
        pass &= mismatches == 0 && deltas.len() == expected;
        parts.push(format!(
            "q={q}: {} δ ({norm_one} with N(δ) = 1), {scattered} scattered, {mismatches} mismatches",
            deltas.len()
        ));
    }
    Ok(outcome(pass, parts.join("; ")))
}

/// δ² = -1 at n = 4 gives a scattered binomial and an MRD code with d = 7.
fn c5() -> Result<Outcome, String> {
    let mut parts = Vec::new();
    let mut pass = true;
    for q in [3u64, 5] {
        let f = field(q, 4)?;
        let minus_one = f.neg(Elem::ONE);
        let roots: Vec<Elem> = f.elements().filter(|&d| f.square(d) == minus_one).collect();
        for &d in &roots {
            let poly = QPolynomial::scattered_binomial(&f, d, 1).map_err(|e| e.to_string())?;
            let scattered = poly.is_scattered().map_err(|e| e.to_string())?;
            let code = RankCode::new(&poly).map_err(|e| e.to_string())?;
            let verdict = binomial::classify(&f, 1, d, false).map_err(|e| e.to_string())?;
            let ok = scattered
                && code.mrd
                && code.min_distance() == 7
                && verdict.verdict == binomial::Verdict::Scattered;
            pass &= ok;
            parts.push(format!("q={q} δ={d}: scattered={scattered} mrd={} d={}", code.mrd, code.min_distance()));
        }
        pass &= roots.len() == 2;
    }
    Ok(outcome(pass, parts.join("; ")))
}

/// Curve counts in the widened window, good points, round trips.
fn c6() -> Result<Outcome, String> {
    let mut parts = Vec::new();
    let mut pass = true;
    for (q, n) in [(3u64, 5u32), (2, 5)] {
        let r = commands::curve_sweep(q, n, 1, true).map_err(|e| e.to_string())?;
        let s = &r.summary;
        let curves = s["curves"].as_u64().unwrap_or(0);
        let min_good = r.rows.iter().filter_map(|row| row["good"].as_u64()).min().unwrap_or(0);
        pass &= r.pass && curves > 0 && min_good > 0;
        parts.push(format!(
            "q={q}: {curves} curves, {} outside window, min good {min_good}, {} round trips, {} failed, {} in class 1/α",
            s["window_failures"], s["round_trips"], s["round_trip_failures"], s["inverted_class"]
        ));
    }
    Ok(outcome(pass, parts.join("; ")))
}

/// H = G·G' on the full grid for every β.
fn c7() -> Result<Outcome, String> {
    let mut parts = Vec::new();
    let mut pass = true;
    for (q, s, n) in [(2u64, 1u32, 3u32), (2, 2, 3), (4, 1, 3)] {
        let f = field(q, n)?;
        let t = f.tower().ok_or("no tower")?;
        let half = f.subfield_elements(t.h * t.n).map_err(|e| e.to_string())?;
        let mut bad = 0;
        for &beta in &half {
            bad += (!curves::split_check_even(&f, beta, s).map_err(|e| e.to_string())?) as usize;
        }
        pass &= bad == 0;
        parts.push(format!("(q,s,n)=({q},{s},{n}): {} β, {bad} failures", half.len()));
    }
    Ok(outcome(pass, parts.join("; ")))
}

/// No δ gives an MRD code at (2, 5, 1); the distance is set against both
/// candidates.
fn c8() -> Result<Outcome, String> {
    let f = field(2, 5)?;
    let mut mrd = 0;
    let mut identity_failures = 0;
    let mut by_norm_one: [BTreeSet<u32>; 2] = [BTreeSet::new(), BTreeSet::new()];
    let mut last = None;
    for d in f.elements().skip(1) {
        let poly = QPolynomial::scattered_binomial(&f, d, 1).map_err(|e| e.to_string())?;
        let code = RankCode::new(&poly).map_err(|e| e.to_string())?;
        let cand = rmcode::distance_candidates(&code);
        let spectrum = poly.weight_spectrum().map_err(|e| e.to_string())?;
        mrd += code.mrd as usize;
        identity_failures += (!cand.equals_m_minus_max_weight || cand.computed != 10 - spectrum.max_weight()) as usize;
        let n1 = f.norm_rel(d).map_err(|e| e.to_string())? == Elem::ONE;
        by_norm_one[n1 as usize].insert(cand.computed);
        last = Some(cand);
    }
    let cand = last.ok_or("no δ")?;
    Ok(outcome(
        mrd == 0 && identity_failures == 0,
        format!(
            "{mrd} MRD codes; d = {:?} when N(δ) ≠ 1 and {:?} when N(δ) = 1, vs n-2 = {} and 2n-2 = {}; \
             d = 2n - max weight failed {identity_failures} times",
            by_norm_one[0], by_norm_one[1], cand.n_minus_2, cand.two_n_minus_2
        ),
    ))
}

/// Seeded property suites on several fields.
fn c9() -> Result<Outcome, String> {
    let fields = [(2u64, 2u32), (3, 2), (2, 3), (4, 2), (2, 5), (5, 2), (3, 3), (8, 2), (3, 5)];
    let mut checked = 0;
    let mut violations = 0;
    let mut failing = Vec::new();
    for (i, (q, n)) in fields.into_iter().enumerate() {
        for r in commands::property_suite(q, n, 0x5eed + i as u64, 1000).map_err(|e| e.to_string())? {
            checked += r.checked;
            violations += r.violations;
            if r.violations > 0 {
                failing.push(format!("{}@({q},{n})", r.name));
            }
        }
    }
    Ok(outcome(
        violations == 0,
        format!("{checked} checks over {} fields, {violations} violations {failing:?}", fields.len()),
    ))
}

fn main() {
    let criteria: [(&str, &str, Check); 9] = [
        ("C1", "certificates for every admissible δ at (2,5,1)", c1),
        ("C2", "one certificate per norm class at (3,5,1)", c2),
        ("C3", "norm bounds on kernel dimension", c3),
        ("C4", "n = 3 criterion against enumeration", c4),
        ("C5", "δ² = -1 at n = 4 is scattered and MRD", c5),
        ("C6", "curve windows, good points, round trips", c6),
        ("C7", "H = G·G' factorization", c7),
        ("C8", "non-MRD codes at (2,5,1)", c8),
        ("C9", "property suites", c9),
    ];
    let mut failed = 0;
    for (id, title, check) in criteria {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        let (pass, detail) = match result {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += (!pass) as usize;
        let tag = if pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {id} {title}: {detail} ({secs:.1}s)");
    }
    if failed > 0 {
        println!("{failed} of 9 criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}
