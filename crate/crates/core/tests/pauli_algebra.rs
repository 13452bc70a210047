use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use qmix_core::simulate::pauli_matrix;
use qmix_core::{PauliString, PauliSum, Phase};

fn p(s: &str) -> PauliString {
    PauliString::from_label(s).unwrap()
}

fn arb_string(n: usize) -> impl Strategy<Value = PauliString> {
    let m = (1u64 << n) - 1;
    (0..=m, 0..=m).prop_map(move |(x, z)| PauliString::from_masks(n, x, z).unwrap())
}

#[test]
fn commutation_examples() {
    assert!(p("XXI").commutes(&p("YYI")).unwrap());
    assert!(!p("XXI").commutes(&p("IYY")).unwrap());
    assert!(p("XYZ").commutes(&p("XYZ")).unwrap());
    assert!(p("XX").commutes(&p("XXI")).is_err());
}

#[test]
fn product_examples() {
    assert_eq!(p("X").multiply(&p("Y")).unwrap(), (Phase::I, p("Z")));
    assert_eq!(p("Y").multiply(&p("X")).unwrap(), (Phase::MINUS_I, p("Z")));
    assert_eq!(p("XX").multiply(&p("YY")).unwrap(), (Phase::MINUS_ONE, p("ZZ")));
    assert_eq!(p("XYZ").multiply(&p("XYZ")).unwrap(), (Phase::ONE, p("III")));
    assert_eq!(p("XYZ").multiply(&p("III")).unwrap(), (Phase::ONE, p("XYZ")));
}

#[test]
fn weight_examples() {
    assert_eq!(p("IXIIY").weight(), 2);
    assert_eq!(p("IIII").weight(), 0);
    assert_eq!(p("XYZ").weight(), 3);
}

#[test]
fn json_round_trip() {
    let s = PauliSum::from_labels(&[("XXI", 0.5), ("YYI", 0.5), ("IIZ", -0.25)]).unwrap();
    let j = serde_json::to_string(&s.to_json()).unwrap();
    assert!(j.starts_with(r#"{"n":3,"terms":[{"label":"IIZ""#));
    let back = PauliSum::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
    assert_eq!(back, s);
}

fn commutator_vanishes(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> bool {
    (a * b - b * a).iter().all(|v| v.norm() < 1e-12)
}

proptest! {
    #[test]
    fn label_round_trip(q in (1usize..=12).prop_flat_map(arb_string)) {
        prop_assert_eq!(PauliString::from_label(&q.to_label()).unwrap(), q);
        prop_assert_eq!(q.weight(), q.to_label().chars().filter(|&c| c != 'I').count());
    }

    #[test]
    fn commutation_is_symmetric((a, b) in (1usize..=8).prop_flat_map(|n| (arb_string(n), arb_string(n)))) {
        prop_assert_eq!(a.commutes(&b).unwrap(), b.commutes(&a).unwrap());
    }

    #[test]
    fn commutation_matches_products((a, b) in (1usize..=8).prop_flat_map(|n| (arb_string(n), arb_string(n)))) {
        let (pab, ab) = a.multiply(&b).unwrap();
        let (pba, ba) = b.multiply(&a).unwrap();
        prop_assert_eq!(ab, ba);
        prop_assert_eq!(a.commutes(&b).unwrap(), pab == pba);
    }

    #[test]
    fn dense_oracle((a, b) in (1usize..=4).prop_flat_map(|n| (arb_string(n), arb_string(n)))) {
        let (ma, mb) = (pauli_matrix(&a).unwrap(), pauli_matrix(&b).unwrap());
        prop_assert_eq!(a.commutes(&b).unwrap(), commutator_vanishes(&ma, &mb));
        let (ph, prod) = a.multiply(&b).unwrap();
        let want = pauli_matrix(&prod).unwrap() * ph.to_complex::<f64>();
        prop_assert!((ma * mb - want).iter().all(|v| v.norm() < 1e-12));
    }
}

#[test]
fn dense_matrices_are_kronecker_products() {
    // XZ = X ⊗ Z with qubit 0 as the most significant index bit.
    let m = pauli_matrix(&p("XZ")).unwrap();
    let one = Complex64::new(1.0, 0.0);
    assert_eq!(m[(2, 0)], one);
    assert_eq!(m[(3, 1)], -one);
    assert_eq!(m[(0, 2)], one);
    assert_eq!(m[(1, 3)], -one);
}
