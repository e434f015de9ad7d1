//! The rayon path and the sequential path must give identical results.

use linkern::binomial::WitnessIndex;
use linkern::commands::{self, WitnessMode};
use linkern::gf::Field;
use linkern::linpoly::QPolynomial;
use linkern::par;

#[test]
fn spectra_agree() {
    let f = Field::with_tower(3, 3).unwrap();
    for d in f.elements().step_by(97) {
        let poly = QPolynomial::scattered_binomial(&f, d, 1).unwrap();
        let a = poly.weight_spectrum().unwrap();
        let b = par::sequential(|| poly.weight_spectrum()).unwrap();
        assert_eq!(a, b);
        assert_eq!(poly.point_weights().unwrap(), par::sequential(|| poly.point_weights()).unwrap());
    }
}

#[test]
fn witness_index_agrees() {
    let f = Field::with_tower(2, 5).unwrap();
    let a = WitnessIndex::build(&f, 1).unwrap();
    let b = par::sequential(|| WitnessIndex::build(&f, 1)).unwrap();
    assert_eq!(a.by_class, b.by_class);
    assert_eq!(a.skipped, b.skipped);
    assert_eq!(a.scanned, b.scanned);
}

#[test]
fn reports_are_identical() {
    let runs = [
        || commands::witness(2, 5, 1, WitnessMode::PerClass),
        || commands::curve_sweep(2, 5, 1, true),
        || commands::classify(2, 3, 2, None, true),
        || commands::selfcheck(3, 2, 11, 100),
    ];
    for run in runs {
        let a = run().unwrap();
        let b = par::sequential(run).unwrap();
        assert_eq!(a, b);
        let (mut wa, mut wb) = (Vec::new(), Vec::new());
        a.write_to(&mut wa).unwrap();
        b.write_to(&mut wb).unwrap();
        assert_eq!(wa, wb);
    }
}
