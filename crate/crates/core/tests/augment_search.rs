mod common;

use common::*;
use qmix_core::augment::*;
use qmix_core::cost::{cx_cost, xy_pair_cost};
use qmix_core::decompose::{flatten, recursive_decompose};
use qmix_core::subspace::{t_all, t_pair};
use qmix_core::{Error, FeasibleSet, PauliSum, TransitionMatrix};

#[test]
fn example1_cells() {
    let b = example1();
    assert_eq!(augmented_pair_cost(&b, (1, 2), Some((0b000, 0b001))).unwrap(), 2);
    assert_eq!(augmented_pair_cost(&b, (0, 1), Some((0b000, 0b110))).unwrap(), 6);
    assert_eq!(augmented_pair_cost(&b, (0, 1), None).unwrap(), 12);
    assert_eq!(augmented_pair_cost(&b, (1, 2), None).unwrap(), 8);
    assert_eq!(augmented_pair_cost(&b, (0, 2), None).unwrap(), 16);
}

#[test]
fn overlap_and_degenerate_pairs_are_rejected() {
    let b = example1();
    assert!(matches!(augmented_pair_cost(&b, (0, 1), Some((0b100, 0b000))), Err(Error::Overlap(_))));
    assert!(augmented_pair_cost(&b, (0, 1), Some((0b000, 0b000))).is_err());
    assert!(augmented_pair_cost(&b, (0, 3), None).is_err());
}

#[test]
fn example1_search() {
    let b = example1();
    let table = search_pairwise(&b, &t_all::<f64>(3)).unwrap();
    assert_eq!(table.columns, vec![(0, 1), (0, 2), (1, 2)]);
    assert_eq!(table.unaugmented, vec![12, 16, 8]);
    assert_eq!(table.rows.len(), 10);
    let best: Vec<u64> = table.best.iter().map(|c| c.cost).collect();
    assert_eq!(best, vec![6, 8, 2]);
    assert_eq!(table.row((0b001, 0b000)).unwrap().per_pair_costs[2], 2);
    let csv = table.to_csv();
    assert!(csv.starts_with("C,T1<->2,T1<->3,T2<->3\n\"{}\",12,16,8\n"), "{csv}");
    assert!(table.to_markdown().contains("2*"));
}

#[test]
fn full_space_has_no_candidates() {
    let b = FeasibleSet::full(2).unwrap();
    let table = search_pairwise(&b, &t_all::<f64>(4)).unwrap();
    assert!(table.rows.is_empty());
    assert_eq!(table.total_best(), table.total_unaugmented());
}

#[test]
fn example2_aggregates() {
    let b = example2();
    let table = search_pairwise(&b, &t_all::<f64>(6)).unwrap();
    assert_eq!(table.rows.len(), 325);
    assert_eq!(table.total_unaugmented(), 1360);
    assert_eq!(table.total_best(), 568);
    // row {00010, 00011}, column T_{1<->3}
    let col = table.columns.iter().position(|&p| p == (0, 2)).unwrap();
    assert_eq!(table.row((0b00010, 0b00011)).unwrap().per_pair_costs[col], 24);
}

#[test]
fn greedy_is_no_worse_than_one_pair() {
    let b = example1();
    let t = t_all::<f64>(3);
    let greedy = greedy_multi_add(&b, &t, 3).unwrap();
    let table = search_pairwise(&b, &t).unwrap();
    for (g, best) in greedy.iter().zip(&table.best) {
        assert!(g.cost <= best.cost, "{g:?}");
        assert!(g.added.len() <= 3);
        let mut sum = augmented_pair_sum(&b, g.pair, None, &1.0).unwrap();
        for &(c1, c2) in &g.added {
            let fb = FeasibleSet::new(3, vec![c1, c2]).unwrap();
            sum = sum.add(&flatten(3, &recursive_decompose(&fb, &t_pair::<f64>(1, 2, 2).unwrap()).unwrap())).unwrap();
        }
        assert_eq!(cx_cost(&sum), g.cost);
    }
    let none = greedy_multi_add(&b, &t, 0).unwrap();
    assert_eq!(none.iter().map(|g| g.cost).collect::<Vec<_>>(), vec![12, 16, 8]);
}

#[test]
fn one_hot_three() {
    let groups = one_hot_mixer(3, &t_all::<f64>(3)).unwrap();
    let want = PauliSum::from_labels(&[
        ("IXX", 0.5),
        ("IYY", 0.5),
        ("XIX", 0.5),
        ("YIY", 0.5),
        ("XXI", 0.5),
        ("YYI", 0.5),
    ])
    .unwrap();
    let h = flatten(3, &groups);
    assert_eq!(h, want);
    assert_eq!(cx_cost(&h), 12);
    assert!(one_hot_mixer(3, &TransitionMatrix::<f64>::zeros(3)).unwrap().is_empty());
}

#[test]
fn two_qubit_xx_mixer() {
    let b = FeasibleSet::one_hot(2).unwrap();
    let s = augmented_pair_sum(&b, (0, 1), Some((0b00, 0b11)), &1.0).unwrap();
    assert_eq!(s, PauliSum::from_labels(&[("XX", 1.0)]).unwrap());
    assert_eq!(augmented_pair_cost(&b, (0, 1), Some((0b00, 0b11))).unwrap(), 2);
    // the only completing pair of a two-qubit one-hot pair is the pair itself
    let s = one_hot_full_augmentation(2, 0, 1, &1.0).unwrap();
    assert_eq!(s, PauliSum::from_labels(&[("XX", 0.5), ("YY", 0.5)]).unwrap());
}

#[test]
fn one_hot_costs() {
    for n in 2..=12 {
        let groups = one_hot_mixer(n, &t_pair::<f64>(1, 2, n).unwrap()).unwrap();
        assert_eq!(cx_cost(&groups[0].strings), 4, "n = {n}");
        let b = FeasibleSet::one_hot(n).unwrap();
        assert_eq!(augmented_pair_cost(&b, (0, 1), None).unwrap(), xy_pair_cost(n).unwrap());
    }
}

#[test]
fn closed_form_equals_full_augmentation() {
    for n in 2..=8 {
        for (j, k) in [(0, 1), (0, n - 1), (n / 2, n - 1)] {
            if j == k {
                continue;
            }
            let groups = one_hot_mixer(n, &t_pair::<f64>(j + 1, k + 1, n).unwrap()).unwrap();
            let full = one_hot_full_augmentation(n, j, k, &1.0).unwrap();
            assert!(groups[0].strings.max_abs_diff(&full) < 1e-12, "n = {n} ({j}, {k})");
        }
    }
}

#[test]
fn augmentation_never_changes_action_on_b() {
    assert!(augmentation_gap(&example1(), &t_all(3)) < 1e-9);
    assert!(augmentation_gap(&example2(), &t_all(6)) < 1e-9);
    let mut r = rng(5);
    for _ in 0..10 {
        let (b, t) = random_case(&mut r);
        if b.n_qubits() >= 2 {
            assert!(augmentation_gap(&b, &t.to_f64()) < 1e-9);
        }
    }
}
