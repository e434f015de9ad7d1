use std::sync::{Arc, OnceLock};

use linkern::binomial::{self, BinomialParams};
use linkern::gf::{Elem, Field};
use linkern::linpoly::QPolynomial;
use proptest::prelude::*;

const TOWERS: [(u64, u32); 7] = [(2, 2), (3, 2), (2, 3), (4, 2), (5, 2), (2, 5), (3, 3)];

fn fields() -> &'static [Arc<Field>] {
    static F: OnceLock<Vec<Arc<Field>>> = OnceLock::new();
    F.get_or_init(|| TOWERS.iter().map(|&(q, n)| Field::with_tower(q, n).unwrap()).collect())
}

/// A field index plus raw values reduced into that field.
fn field_and<const K: usize>() -> impl Strategy<Value = (usize, [u32; K])> {
    (0..TOWERS.len(), prop::array::uniform::<_, K>(any::<u32>())).prop_map(|(i, raw)| {
        let order = fields()[i].order() as u32;
        (i, raw.map(|r| r % order))
    })
}

fn shift(f: &Field, raw: u32) -> u32 {
    let n = f.n().unwrap();
    let valid: Vec<u32> = (1..2 * n).filter(|&s| binomial::normalize_s(s, n).is_ok()).collect();
    valid[raw as usize % valid.len()]
}

fn trace_to_base(f: &Field, x: Elem) -> Elem {
    let t = f.tower().unwrap();
    f.trace_down(x, f.degree(), t.h)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, max_global_rejects: 1 << 20, ..ProptestConfig::default() })]

    #[test]
    fn field_axioms((i, [x, y, z]) in field_and::<3>()) {
        let f = &fields()[i];
        let (x, y, z) = (Elem(x), Elem(y), Elem(z));
        prop_assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
        prop_assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
        prop_assert_eq!(f.sub(f.add(x, y), y), x);
        if let Some(inv) = f.inv(x) {
            prop_assert_eq!(f.mul(x, inv), Elem::ONE);
        }
    }

    #[test]
    fn frobenius_is_an_automorphism_of_order_2n((i, [x, y, k]) in field_and::<3>()) {
        let f = &fields()[i];
        let m = 2 * f.n().unwrap() as i64;
        let k = k as i64 % m;
        let fr = |e| f.pow_q(e, k).unwrap();
        let (x, y) = (Elem(x), Elem(y));
        prop_assert_eq!(fr(f.mul(x, y)), f.mul(fr(x), fr(y)));
        prop_assert_eq!(fr(f.add(x, y)), f.add(fr(x), fr(y)));
        prop_assert_eq!(f.pow_q(x, m).unwrap(), x);
        prop_assert_eq!(f.pow_q(fr(x), -k).unwrap(), x);
    }

    #[test]
    fn norm_and_trace_land_in_the_half_field((i, [x, y]) in field_and::<2>()) {
        let f = &fields()[i];
        let (x, y) = (Elem(x), Elem(y));
        let nx = f.norm_rel(x).unwrap();
        let q = f.q().unwrap();
        let n = f.n().unwrap();
        prop_assert!(f.in_half(nx).unwrap());
        prop_assert!(f.in_half(f.trace_rel(x).unwrap()).unwrap());
        prop_assert_eq!(nx, f.pow(x, q.pow(n) + 1));
        prop_assert_eq!(f.norm_rel(f.mul(x, y)).unwrap(), f.mul(nx, f.norm_rel(y).unwrap()));
        prop_assert_eq!(f.trace_rel(f.add(x, y)).unwrap(), f.add(f.trace_rel(x).unwrap(), f.trace_rel(y).unwrap()));
    }

    #[test]
    fn adjoint_preserves_kernel_and_pairs_under_trace((i, [a, b, s, x, y]) in field_and::<5>()) {
        let f = &fields()[i];
        let s = shift(f, s);
        let poly = QPolynomial::binomial(f, Elem(a), Elem(b), s).unwrap();
        let adj = poly.adjoint();
        prop_assert_eq!(adj.kernel_dimension(), poly.kernel_dimension());
        prop_assert_eq!(adj.adjoint(), poly.clone());
        let (x, y) = (Elem(x), Elem(y));
        prop_assert_eq!(
            trace_to_base(f, f.mul(y, poly.evaluate(x))),
            trace_to_base(f, f.mul(x, adj.evaluate(y)))
        );
        // the binomial adjoint stays a binomial
        let p = BinomialParams::new(f, Elem(a), Elem(b), s).unwrap();
        let padj = p.adjoint().unwrap();
        for z in [x, y] {
            prop_assert_eq!(padj.evaluate(z), adj.evaluate(z));
        }
    }

    #[test]
    fn conjugation_preserves_kernel((i, [a, b, s, l]) in field_and::<4>()) {
        let f = &fields()[i];
        prop_assume!(l != 0);
        let poly = QPolynomial::binomial(f, Elem(a), Elem(b), shift(f, s)).unwrap();
        let conj = poly.conjugate(Elem(l)).unwrap();
        prop_assert_eq!(conj.kernel_dimension(), poly.kernel_dimension());
        let x = Elem(b);
        let direct = f.div(poly.evaluate(f.mul(Elem(l), x)), Elem(l)).unwrap();
        prop_assert_eq!(conj.evaluate(x), direct);
    }

    #[test]
    fn xi_relations_hold((i, [xi, s]) in field_and::<2>()) {
        let f = &fields()[i];
        let xi = Elem(xi);
        prop_assume!(!f.in_half(xi).unwrap());
        let rel = binomial::ab_relations_from_xi(f, xi, shift(f, s)).unwrap();
        prop_assert!(rel.all(), "{:?}", rel);
    }

    #[test]
    fn xi_certificates_verify((i, [xi, s]) in field_and::<2>()) {
        let f = &fields()[i];
        let xi = Elem(xi);
        prop_assume!(!f.in_base(xi).unwrap());
        let s = shift(f, s);
        if let Ok(cert) = binomial::witness_from_xi_scan(f, xi, s, true) {
            prop_assert!(cert.verified && cert.verify(f));
            prop_assert!(cert.params(f).unwrap().kernel_dimension() >= 2);
        }
    }

    #[test]
    fn transport_reaches_the_whole_norm_class((i, [xi, u]) in field_and::<2>()) {
        let f = &fields()[i];
        let (xi, u) = (Elem(xi), Elem(u));
        prop_assume!(!f.in_base(xi).unwrap() && !u.is_zero());
        let n = f.n().unwrap();
        let s = 1;
        let Ok(cert) = binomial::witness_from_xi_scan(f, xi, s, true) else { return Ok(()) };
        prop_assume!(!cert.delta.is_zero());
        // δ·u^(q^s (q^n - 1)) has the same norm
        let us = f.pow_q(u, s as i64).unwrap();
        let factor = f.div(f.pow_q(us, n as i64).unwrap(), us).unwrap();
        let target = f.mul(cert.delta, factor);
        let moved = binomial::transport_witness(f, &cert, target).unwrap();
        prop_assert_eq!(moved.delta, target);
        prop_assert!(moved.verify(f));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn spectrum_mass_and_scatteredness((i, [d, s]) in field_and::<2>()) {
        let f = &fields()[i];
        let poly = QPolynomial::scattered_binomial(f, Elem(d), shift(f, s)).unwrap();
        let spec = poly.weight_spectrum().unwrap();
        let q = f.q().unwrap();
        let order = f.order();
        prop_assert_eq!(spec.mass(), order - 1);
        prop_assert_eq!(spec.is_scattered(), poly.is_scattered().unwrap());
        prop_assert_eq!(spec.is_scattered(), spec.num_points() == (order - 1) / (q - 1));
        prop_assert_eq!(spec.is_scattered(), spec.max_weight() == 1);
    }

    #[test]
    fn kernel_dimension_matches_enumeration((i, [a, b, c, s]) in field_and::<4>()) {
        let f = &fields()[i];
        let s = shift(f, s);
        let coeffs = [Elem(a), Elem(b), Elem(c)];
        let poly = QPolynomial::new(f, &coeffs)
            .unwrap()
            .add(&QPolynomial::binomial(f, Elem(b), Elem(a), s).unwrap())
            .unwrap();
        let zeros = f.elements().filter(|&x| poly.evaluate(x).is_zero()).count() as u64;
        prop_assert_eq!(f.q().unwrap().pow(poly.kernel_dimension() as u32), zeros);
    }
}
