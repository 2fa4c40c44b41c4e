mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use common::*;
use hyperarr::cells::chambers;
use hyperarr::cw_posets::{df_poset, sal_to_df, salvetti_poset};
use hyperarr::flag::{flag_partition, generic_flag};
use hyperarr::gallery::ChamberGraph;
use hyperarr::linalg::{rat, rat_frac, AffineSubspace};
use hyperarr::local_system::{degree_map, direct_twisted_complex, fox_h1, twisted_complex_with_flag};
use hyperarr::os_algebra::betti_numbers;
use hyperarr::pi1::{
    abelianization, minimal_presentation, minimal_presentation_with_flag, randell_falk_presentation,
    ConjugationStyle,
};
use hyperarr::poset::intersection_poset;
use hyperarr::{Arrangement, CoefficientField, Flag, LocalSystem};

fn random_field(rng: &mut ChaCha8Rng) -> CoefficientField {
    match rng.gen_range(0..4) {
        0 => CoefficientField::Rationals,
        1 => CoefficientField::prime(101).unwrap(),
        2 => CoefficientField::prime(7).unwrap(),
        _ => CoefficientField::cyclotomic(6).unwrap(),
    }
}

fn random_system(rng: &mut ChaCha8Rng, field: CoefficientField, n: usize) -> LocalSystem {
    let values = (0..n)
        .map(|_| match &field {
            CoefficientField::Cyclotomic { .. } => {
                let s = ["1", "-1", "z", "z^2", "-z", "1+z", "2"].choose(rng).unwrap();
                field.parse_element(s).unwrap()
            }
            CoefficientField::Prime(p) => field.from_int(rng.gen_range(1..*p as i64)),
            CoefficientField::Rationals => {
                let v = [-3, -1, 1, 2, 3][rng.gen_range(0..5)];
                field.from_rat(&rat_frac(v, rng.gen_range(1..=2))).unwrap()
            }
        })
        .collect();
    LocalSystem::new(field, values).unwrap()
}

fn alternating(v: &[usize]) -> i64 {
    v.iter()
        .enumerate()
        .map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum()
}

fn padded(mut v: Vec<usize>, len: usize) -> Vec<usize> {
    v.resize(len.max(v.len()), 0);
    v
}

fn small_suite() -> Vec<Arrangement> {
    let mut list = suite(11, 12, &[2], 6);
    list.extend(suite(12, 4, &[3], 5));
    list.extend(suite(13, 3, &[1], 4));
    list.push(data("a3.arr"));
    list.push(data("fig4.arr"));
    list.push(data("boolean3.arr"));
    list
}

#[test]
fn df_axioms_and_order_preservation() {
    for a in small_suite() {
        let sal = salvetti_poset(&a).unwrap();
        let df = df_poset(&a).unwrap();
        sal.order.check_axioms().unwrap();
        df.order.check_axioms().unwrap();
        let image: Vec<usize> = (0..sal.elements.len()).map(|e| sal_to_df(&sal, e, &df).unwrap()).collect();
        for x in 0..image.len() {
            for y in 0..image.len() {
                if sal.order.le(x, y) {
                    assert!(df.order.le(image[x], image[y]), "on\n{}", a.to_text());
                }
            }
        }
    }
}

#[test]
fn salvetti_cell_counts_and_euler_characteristic() {
    for a in small_suite().into_iter().filter(|a| a.len() <= 6) {
        let brute = brute_faces(&a);
        let ch: Vec<&String> = brute.iter().filter(|(_, d)| *d == a.dim()).map(|(s, _)| s).collect();
        let mut expected = vec![0usize; a.dim() + 1];
        for (x, d) in &brute {
            let incident = ch
                .iter()
                .filter(|c| x.chars().zip(c.chars()).all(|(u, v)| u == '0' || u == v))
                .count();
            expected[a.dim() - d] += incident;
        }
        while expected.last() == Some(&0) {
            expected.pop();
        }
        let sal = salvetti_poset(&a).unwrap();
        assert_eq!(sal.f_vector(), expected, "on\n{}", a.to_text());
        let b = betti_numbers(&a).unwrap();
        assert_eq!(sal.euler_characteristic(), alternating(&b));
    }
}

fn vertex_multiplicities(a: &Arrangement) -> Vec<usize> {
    intersection_poset(a).flats_of_dim(0).map(|v| v.containing.len()).collect()
}

#[test]
fn presentations_have_the_expected_shape() {
    let mut list = suite(21, 15, &[2], 7);
    list.push(data("fig4.arr"));
    list.push(data("a3.arr"));
    for a in list {
        let n = a.len();
        let b = betti_numbers(&a).unwrap();
        let b2 = b.get(2).copied().unwrap_or(0);
        let (p, norm) = minimal_presentation(&a).unwrap();
        assert_eq!(p.relations.len(), b2);
        let identity: Vec<i64> = (1..=n as i64).collect();
        for r in &p.relations {
            assert_eq!(r.lhs, identity);
            let mut sorted = r.rhs.clone();
            sorted.sort();
            assert_eq!(sorted, identity);
        }
        let mut perm = norm.permutation.clone();
        perm.sort();
        assert_eq!(perm, (0..n).collect::<Vec<_>>());
        let ab = abelianization(&p);
        assert_eq!((ab.rank, ab.torsion.len()), (n, 0));

        let mult = vertex_multiplicities(&a);
        let rf = randell_falk_presentation(&a, ConjugationStyle::TrailingCommute).unwrap();
        assert_eq!(rf.full.generator_count(), n + mult.iter().sum::<usize>());
        assert_eq!(rf.edge_lines.len(), rf.full.generator_count());
        assert_eq!(rf.full.relations.len(), mult.iter().map(|m| 2 * m - 1).sum::<usize>());
        assert_eq!(rf.reduced.generator_count(), n);
        assert_eq!(rf.reduced.relations.len(), mult.iter().map(|m| m - 1).sum::<usize>());
        assert_eq!(rf.reduced.relations.len(), b2);
        for q in [&rf.full, &rf.reduced] {
            let ab = abelianization(q);
            assert_eq!((ab.rank, ab.torsion.len()), (n, 0));
        }
    }
}

#[test]
fn sections_of_space_arrangements_keep_b2() {
    for a in suite(22, 6, &[3], 5) {
        let b = betti_numbers(&a).unwrap();
        let (p, _) = minimal_presentation(&a).unwrap();
        assert_eq!(p.relations.len(), b[2], "on\n{}", a.to_text());
        assert_eq!(abelianization(&p).rank, a.len());
    }
}

#[test]
fn literal_and_trailing_elimination_agree() {
    let mut r = rng(23);
    let mut list = suite(24, 10, &[2], 6);
    list.push(data("fig4.arr"));
    for a in list {
        let lit = randell_falk_presentation(&a, ConjugationStyle::Literal).unwrap();
        let tc = randell_falk_presentation(&a, ConjugationStyle::TrailingCommute).unwrap();
        assert_eq!(lit.full.generator_count(), tc.full.generator_count());
        assert_eq!(abelianization(&lit.full), abelianization(&tc.full));
        assert_eq!(abelianization(&lit.reduced), abelianization(&tc.reduced));
        for _ in 0..3 {
            let f = random_field(&mut r);
            let ls = random_system(&mut r, f, a.len());
            let ls = ls.permuted(&tc.normalized.permutation);
            let h = fox_h1(&tc.reduced, &ls).unwrap();
            assert_eq!(fox_h1(&lit.reduced, &ls).unwrap(), h);
            let (p, _) = minimal_presentation_with_flag(&a, &tc.normalized.flag).unwrap();
            assert_eq!(fox_h1(&p, &ls).unwrap(), h);
        }
    }
}

#[test]
fn a3_two_flags_agree_on_invariants() {
    let a = data("a3.arr");
    let f1 = generic_flag(&a).unwrap();
    let p0 = vec![rat(0), rat(-1)];
    let f2 = Flag::new(vec![
        AffineSubspace { point: p0.clone(), directions: vec![] },
        AffineSubspace { point: p0, directions: vec![vec![rat(1), rat(3)]] },
    ])
    .unwrap();
    f2.certify(&a).unwrap();
    let (p1, n1) = minimal_presentation_with_flag(&a, &f1).unwrap();
    let (p2, n2) = minimal_presentation_with_flag(&a, &f2).unwrap();
    for p in [&p1, &p2] {
        assert_eq!(p.relations.len(), 6);
        let ab = abelianization(p);
        assert_eq!((ab.rank, ab.torsion.len()), (5, 0));
    }
    let mut r = rng(25);
    for _ in 0..10 {
        let f = random_field(&mut r);
        let ls = random_system(&mut r, f, 5);
        assert_eq!(
            fox_h1(&p1, &ls.permuted(&n1.permutation)).unwrap(),
            fox_h1(&p2, &ls.permuted(&n2.permutation)).unwrap()
        );
    }
}

#[test]
fn geodesics_form_one_flip_class() {
    for a in suite(31, 10, &[2], 5) {
        let g = ChamberGraph::new(&a).unwrap();
        for c in 0..g.len() {
            for d in 0..g.len() {
                let geos = g.geodesics(c, d);
                assert!(geos.iter().all(|p| p.len() == g.distance(c, d) + 1));
                assert_eq!(g.flip_class(&geos[0]).unwrap(), geos);
            }
        }
    }
}

#[test]
fn flip_classes_preserve_length_and_endpoints() {
    for a in suite(32, 6, &[2], 4) {
        let g = ChamberGraph::new(&a).unwrap();
        let (c, d) = (0, g.len() - 1);
        let k = g.distance(c, d) + 2;
        let classes = g.flip_classes(c, d, k).unwrap();
        let all = g.paths(c, d, k).unwrap();
        let mut union = BTreeSet::new();
        for cl in &classes {
            for p in cl {
                assert_eq!(p.len(), k + 1);
                assert_eq!((p[0], p[k]), (c, d));
                g.validate_path(p).unwrap();
                assert!(union.insert(p.clone()));
            }
        }
        assert_eq!(union, all.into_iter().collect());
    }
}

#[test]
fn twisted_complexes() {
    let mut r = rng(41);
    let mut list = suite(42, 25, &[2], 6);
    list.extend(suite(43, 5, &[1], 5));
    list.push(data("fig4.arr"));
    list.push(data("a3.arr"));
    for a in list {
        let flag = generic_flag(&a).unwrap();
        let part = flag_partition(&a, &flag).unwrap();
        let f = random_field(&mut r);
        let ls = random_system(&mut r, f.clone(), a.len());
        let cx = twisted_complex_with_flag(&a, &ls, &flag).unwrap();
        assert!(cx.is_cochain_complex(), "on\n{}", a.to_text());
        for (k, m) in cx.matrices.iter().enumerate() {
            assert_eq!(m.len(), part.sizes()[k]);
            assert!(m.iter().all(|row| row.len() == part.sizes()[k + 1]));
        }
        let dims = cx.cohomology();
        assert_eq!(alternating(&dims), alternating(&part.sizes()));
        if a.len() <= 6 {
            let direct = direct_twisted_complex(&a, &ls, &flag).unwrap();
            assert_eq!(direct.matrices, cx.matrices);
        }
        let trivial = LocalSystem::trivial(f, a.len());
        let h = twisted_complex_with_flag(&a, &trivial, &flag).unwrap().cohomology();
        let b = betti_numbers(&a).unwrap();
        assert_eq!(padded(h, a.dim() + 1), padded(b, a.dim() + 1));
        if a.dim() == 2 {
            let (p, norm) = minimal_presentation(&a).unwrap();
            assert_eq!(fox_h1(&p, &ls.permuted(&norm.permutation)).unwrap(), dims[1]);
            for &c in &part.levels[1] {
                for &d in &part.levels[2] {
                    let deg = degree_map(&a, &flag, &part, c, d).unwrap();
                    assert!((-1..=1).contains(&deg));
                }
            }
        }
    }
}

#[test]
fn one_dimensional_cohomology() {
    let mut r = rng(44);
    for a in suite(45, 8, &[1], 6) {
        let n = a.len();
        let f = CoefficientField::prime(101).unwrap();
        let mut values: Vec<_> = (0..n).map(|_| f.from_int(r.gen_range(1..101))).collect();
        values[0] = f.from_int(2);
        let ls = LocalSystem::new(f, values).unwrap();
        let flag = generic_flag(&a).unwrap();
        let h = twisted_complex_with_flag(&a, &ls, &flag).unwrap().cohomology();
        assert_eq!(h, vec![0, n - 1]);
        assert_eq!(chambers(&a).unwrap().len(), n + 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fox_matches_twisted_over_f101(a in arb_arrangement(2, 6), seed in any::<u64>()) {
        let mut r = rng(seed);
        let ls = random_system(&mut r, CoefficientField::prime(101).unwrap(), a.len());
        let (p, norm) = minimal_presentation(&a).unwrap();
        let flag = generic_flag(&a).unwrap();
        let h = twisted_complex_with_flag(&a, &ls, &flag).unwrap().cohomology();
        prop_assert_eq!(fox_h1(&p, &ls.permuted(&norm.permutation)).unwrap(), h[1]);
    }
}
