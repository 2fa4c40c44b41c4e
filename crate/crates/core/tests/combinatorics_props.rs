mod common;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use common::*;
use hyperarr::arrangement::is_prime;
use hyperarr::cells::{adjacency_graph, bounded_chambers, chambers, faces, sep};
use hyperarr::flag::{flag_partition, generic_flag};
use hyperarr::linalg::Rat;
use hyperarr::os_algebra::{betti_numbers, hilbert_series};
use hyperarr::poset::{
    char_poly, char_poly_delres, char_poly_whitney, chromatic_poly, count_colorings_brute_force,
    count_points_mod_q, intersection_poset,
};
use hyperarr::{Arrangement, SignVector, SimpleGraph};

fn arb_any(max_n: usize) -> impl Strategy<Value = Arrangement> {
    (1usize..=3).prop_flat_map(move |d| arb_arrangement(d, max_n))
}

fn unsigned_coeffs(a: &Arrangement) -> Vec<BigInt> {
    let chi = char_poly(a);
    (0..=a.dim()).map(|k| chi.coeff(a.dim() - k).abs()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn operations_leave_input_untouched(a in arb_any(6), i in 0usize..6) {
        let before = a.clone();
        let i = i % a.len();
        let d = a.delete(i).unwrap();
        let mut expected = a.labels().to_vec();
        expected.remove(i);
        prop_assert_eq!(d.labels(), &expected[..]);
        let l = intersection_poset(&a);
        for x in l.flats() {
            let loc = a.localize(x);
            let labels: Vec<String> = x.containing.iter().map(|&k| a.labels()[k].clone()).collect();
            prop_assert_eq!(loc.labels(), &labels[..]);
            if x.dim() > 0 {
                let r = a.restrict(x).unwrap();
                for (trace, fiber) in r.arrangement.hyperplanes().iter().zip(&r.fibers) {
                    for &k in fiber {
                        // every source hyperplane pulls back to this trace
                        let (c, b) = x.subspace.pullback(a.hyperplane(k).coeffs(), a.hyperplane(k).offset());
                        let t = hyperarr::Hyperplane::new(c, b).unwrap();
                        prop_assert!(t.same_set(trace));
                    }
                }
            }
        }
        prop_assert_eq!(a, before);
    }

    #[test]
    fn central_and_essential_tests(a in arb_any(5)) {
        let eqs: Vec<(Vec<Rat>, Rat)> =
            a.hyperplanes().iter().map(|h| (h.coeffs().to_vec(), -h.offset().clone())).collect();
        prop_assert_eq!(a.is_central(), fm_feasible(a.dim(), &[], &eqs));
        prop_assert_eq!(a.is_essential(), rank(&a.coefficient_rows()) == a.dim());
        let l = intersection_poset(&a);
        prop_assert_eq!(a.is_essential(), l.flats_of_dim(0).next().is_some());
    }

    #[test]
    fn restriction_is_the_upper_interval(a in arb_any(6)) {
        let l = intersection_poset(&a);
        for x in l.flats().iter().filter(|x| x.dim() > 0) {
            let r = a.restrict(x).unwrap();
            let lr = intersection_poset(&r.arrangement);
            // explicit map: restriction flat ↦ flat of `a` with the same points
            let image: Vec<usize> = lr
                .flats()
                .iter()
                .map(|y| {
                    let p = x.subspace.map(&y.subspace.point);
                    let origin = x.subspace.map(&vec![Rat::zero(); x.dim()]);
                    let dirs: Vec<Vec<Rat>> = y
                        .subspace
                        .directions
                        .iter()
                        .map(|d| x.subspace.map(d).iter().zip(&origin).map(|(u, v)| u - v).collect())
                        .collect();
                    let containing: Vec<usize> = (0..a.len())
                        .filter(|&k| {
                            let h = a.hyperplane(k);
                            h.eval(&p).is_zero()
                                && dirs.iter().all(|d| {
                                    h.coeffs().iter().zip(d).map(|(c, v)| c * v).sum::<Rat>().is_zero()
                                })
                        })
                        .collect();
                    l.flat_by_containing(&containing).expect("image is a flat").id
                })
                .collect();
            let interval: BTreeSet<usize> = l.flats().iter().filter(|y| l.le(x.id, y.id)).map(|y| y.id).collect();
            prop_assert_eq!(image.iter().copied().collect::<BTreeSet<_>>(), interval);
            prop_assert_eq!(image.len(), lr.len());
            for y in lr.flats() {
                for z in lr.flats() {
                    prop_assert_eq!(lr.le(y.id, z.id), l.le(image[y.id], image[z.id]));
                }
            }
        }
    }

    #[test]
    fn three_routes_to_chi(a in arb_any(9)) {
        let m = char_poly(&a);
        prop_assert_eq!(&m, &char_poly_whitney(&a).unwrap());
        prop_assert_eq!(&m, &char_poly_delres(&a));
        prop_assert_eq!(&m, &whitney_oracle(&a));
    }

    #[test]
    fn intersection_poset_is_graded(a in arb_any(8)) {
        let l = intersection_poset(&a);
        for &(x, y) in l.covers() {
            prop_assert_eq!(l.flat(x).dim(), l.flat(y).dim() + 1);
        }
        prop_assert_eq!(l.mobius(l.flats()[0].id), 1);
    }

    #[test]
    fn finite_field_counts(a in arb_any(5), qi in 0usize..4) {
        let q = [5u64, 7, 11, 13][qi];
        prop_assume!(q.pow(a.dim() as u32) <= 3000);
        match count_points_mod_q(&a, q) {
            Ok(c) => {
                prop_assert_eq!(BigInt::from(c), char_poly(&a).eval_i64(q as i64));
                prop_assert_eq!(c, brute_count_fq(&a, q));
            }
            Err(e) => prop_assert!(matches!(e, hyperarr::Error::Validation(_)), "{e}"),
        }
    }

    #[test]
    fn chambers_match_brute_force(a in arb_any(6)) {
        let ch = chambers(&a).unwrap();
        let got: BTreeSet<String> = ch.iter().map(|c| c.sign.to_string()).collect();
        prop_assert_eq!(got.len(), ch.len());
        prop_assert_eq!(&got, &brute_chambers(&a));
        for c in &ch {
            prop_assert_eq!(&hyperarr::cells::sign_vector(&a, &c.witness), &c.sign);
        }
    }

    #[test]
    fn bounded_chambers_match_recession_oracle(a in (1usize..=3).prop_flat_map(|d| arb_essential(d, 6))) {
        let got: BTreeSet<String> = bounded_chambers(&a).unwrap().iter().map(|c| c.sign.to_string()).collect();
        let oracle: BTreeSet<String> = brute_chambers(&a)
            .into_iter()
            .filter(|s| fm_chamber_bounded(&a, &SignVector::parse(s).unwrap()))
            .collect();
        prop_assert_eq!(got, oracle);
    }

    #[test]
    fn zaslavsky(a in arb_any(8)) {
        let chi = char_poly(&a);
        let sign = if a.dim() % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(BigInt::from(chambers(&a).unwrap().len()), chi.eval_i64(-1) * sign);
        if a.is_essential() {
            prop_assert_eq!(BigInt::from(bounded_chambers(&a).unwrap().len()), chi.eval_i64(1) * sign);
        } else {
            prop_assert!(bounded_chambers(&a).is_err());
        }
    }

    #[test]
    fn faces_match_brute_force(a in arb_any(5)) {
        let fp = faces(&a).unwrap();
        let got: BTreeMap<String, usize> = fp.cells.iter().map(|c| (c.sign.to_string(), c.dim)).collect();
        let oracle: BTreeMap<String, usize> = brute_faces(&a).into_iter().collect();
        prop_assert_eq!(got, oracle);
        let top = fp.cells.iter().filter(|c| c.dim == a.dim()).count();
        prop_assert_eq!(top, chambers(&a).unwrap().len());
        prop_assert_eq!(fp.chambers().count(), top);
    }

    #[test]
    fn chamber_graph_and_metric(a in arb_any(7)) {
        let g = adjacency_graph(&a).unwrap();
        prop_assert!(g.is_connected());
        let s: Vec<&SignVector> = g.chambers.iter().map(|c| &c.sign).collect();
        let d = |i: usize, j: usize| sep(s[i], s[j]).unwrap().len();
        for i in 0..s.len() {
            for j in 0..s.len() {
                prop_assert_eq!(d(i, j), d(j, i));
                prop_assert_eq!(d(i, j) == 0, i == j);
                for k in 0..s.len() {
                    prop_assert!(d(i, k) <= d(i, j) + d(j, k));
                }
            }
        }
    }

    #[test]
    fn flag_sizes_are_unsigned_chi_coefficients(a in arb_any(7)) {
        let f = generic_flag(&a).unwrap();
        f.certify(&a).unwrap();
        let sizes: Vec<BigInt> = flag_partition(&a, &f).unwrap().sizes().into_iter().map(BigInt::from).collect();
        prop_assert_eq!(sizes, unsigned_coeffs(&a));
    }

    #[test]
    fn hilbert_series_identity(a in arb_any(7)) {
        let h = hilbert_series(&a).unwrap();
        let expected = unsigned_coeffs(&a);
        for (k, c) in expected.iter().enumerate() {
            prop_assert_eq!(&h.coeff(k), c);
        }
    }

    #[test]
    fn betti_sums(a in (1usize..=3).prop_flat_map(|d| arb_essential(d, 7))) {
        let b = betti_numbers(&a).unwrap();
        let l = a.dim();
        prop_assert_eq!(b.iter().sum::<usize>(), chambers(&a).unwrap().len());
        let alt: i64 = b
            .iter()
            .enumerate()
            .map(|(k, &x)| if (l - k) % 2 == 0 { x as i64 } else { -(x as i64) })
            .sum();
        prop_assert_eq!(alt, bounded_chambers(&a).unwrap().len() as i64);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn chromatic_equals_graphical_chi(v in 1usize..=6, mask in any::<u16>()) {
        let pairs: Vec<(usize, usize)> = (0..v).flat_map(|i| (i + 1..v).map(move |j| (i, j))).collect();
        let edges: Vec<_> = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect();
        let g = SimpleGraph::new(v, &edges).unwrap();
        let p = chromatic_poly(&g);
        prop_assert_eq!(&p, &char_poly(&Arrangement::graphical(&g).unwrap()));
        for t in 2..=3u64 {
            prop_assert_eq!(p.eval_i64(t as i64), BigInt::from(count_colorings_brute_force(&g, t)));
        }
    }
}

/// Generic position: every `k ≤ ℓ` hyperplanes meet in codimension `k`, no `ℓ+1` share a point.
fn generic_position(a: &Arrangement) -> bool {
    let n = a.len();
    let l = a.dim();
    (0u32..(1 << n)).all(|mask| {
        let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let lin: Vec<Vec<Rat>> = set.iter().map(|&i| a.hyperplane(i).coeffs().to_vec()).collect();
        let aug: Vec<Vec<Rat>> = set
            .iter()
            .map(|&i| {
                let mut r = a.hyperplane(i).coeffs().to_vec();
                r.push(a.hyperplane(i).offset().clone());
                r
            })
            .collect();
        if set.len() <= l {
            rank(&lin) == set.len()
        } else {
            rank(&aug) > rank(&lin)
        }
    })
}

#[test]
fn generic_arrangements_have_binomial_os_dimensions() {
    let mut rng = rng(77);
    let mut checked = 0;
    while checked < 12 {
        let l = 2 + checked % 2;
        let a = random_arrangement(&mut rng, l, 6);
        if !generic_position(&a) {
            continue;
        }
        checked += 1;
        let b = betti_numbers(&a).unwrap();
        for (k, &bk) in b.iter().enumerate() {
            assert_eq!(bk, binomial(a.len(), k), "degree {k} of\n{}", a.to_text());
        }
        let w = whitney_oracle(&a);
        for k in 0..=l {
            assert_eq!(w.coeff(l - k).abs(), BigInt::from(binomial(a.len(), k)));
        }
    }
}

#[test]
fn braid_chamber_counts() {
    for (l, f) in [(2, 2), (3, 6), (4, 24)] {
        let b = Arrangement::braid(l).unwrap();
        assert_eq!(chambers(&b).unwrap().len(), f);
    }
}

#[test]
fn prime_helper() {
    let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
    assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
}
