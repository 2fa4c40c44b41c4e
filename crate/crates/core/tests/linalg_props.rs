mod common;

use num_traits::{Signed, Zero};
use proptest::prelude::*;

use common::{fm_feasible, rank, Ineq};
use hyperarr::linalg::{
    feasible_point, rank_of_rows, rat, solve_affine, Rat, RatMatrix, Relation, StrictSystem,
};

fn arb_rows(max_rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, cols), 0..=max_rows)
}

fn to_rat(rows: &[Vec<i64>]) -> Vec<Vec<Rat>> {
    rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn feasible_point_agrees_with_fourier_motzkin(
        dim in 1usize..=4,
        raw in prop::collection::vec((prop::collection::vec(-3i64..=3, 4), -3i64..=3, any::<bool>()), 1..=12),
    ) {
        let mut sys = StrictSystem::new(dim);
        let mut ineqs = Vec::new();
        for (c, b, greater) in raw {
            let coeffs: Vec<Rat> = c[..dim].iter().map(|&x| rat(x)).collect();
            if coeffs.iter().all(Zero::is_zero) {
                continue;
            }
            let rel = if greater { Relation::Greater } else { Relation::Less };
            sys.push_strict(coeffs.clone(), rat(b), rel).unwrap();
            // coeffs·x > b  ⇔  coeffs·x − b > 0
            let (a, off) = if greater {
                (coeffs, -rat(b))
            } else {
                (coeffs.iter().map(|x| -x).collect(), rat(b))
            };
            ineqs.push(Ineq { a, b: off, strict: true });
        }
        let p = feasible_point(&sys);
        prop_assert_eq!(p.is_some(), fm_feasible(dim, &ineqs, &[]));
        if let Some(p) = p {
            for q in sys.strict() {
                let v: Rat = q.coeffs.iter().zip(&p).map(|(c, x)| c * x).sum();
                match q.relation {
                    Relation::Greater => prop_assert!(v > q.offset),
                    Relation::Less => prop_assert!(v < q.offset),
                }
            }
            prop_assert!(sys.satisfied_by(&p));
        }
    }

    #[test]
    fn equalities_with_strict_constraints(
        eq in (prop::collection::vec(-3i64..=3, 3), -3i64..=3),
        raw in prop::collection::vec((prop::collection::vec(-3i64..=3, 3), -3i64..=3), 1..=6),
    ) {
        let mut sys = StrictSystem::new(3);
        let ec: Vec<Rat> = eq.0.iter().map(|&x| rat(x)).collect();
        prop_assume!(!ec.iter().all(Zero::is_zero));
        sys.push_equality(ec.clone(), rat(eq.1)).unwrap();
        let mut ineqs = Vec::new();
        for (c, b) in raw {
            let coeffs: Vec<Rat> = c.iter().map(|&x| rat(x)).collect();
            if coeffs.iter().all(Zero::is_zero) {
                continue;
            }
            sys.push_strict(coeffs.clone(), rat(b), Relation::Greater).unwrap();
            ineqs.push(Ineq { a: coeffs, b: -rat(b), strict: true });
        }
        let p = feasible_point(&sys);
        prop_assert_eq!(p.is_some(), fm_feasible(3, &ineqs, &[(ec, -rat(eq.1))]));
        if let Some(p) = p {
            prop_assert!(sys.satisfied_by(&p));
        }
    }

    #[test]
    fn rank_is_transpose_invariant(rows in arb_rows(5, 4)) {
        let m = to_rat(&rows);
        let cols = 4;
        let mat = RatMatrix::from_rows(&m, cols).unwrap();
        prop_assert_eq!(mat.rank(), mat.transpose().rank());
        prop_assert_eq!(rank_of_rows(&m), rank(&m));
    }

    #[test]
    fn affine_solution_dimension(rows in arb_rows(4, 4), rhs in prop::collection::vec(-3i64..=3, 4)) {
        let mut sys = StrictSystem::new(3);
        let mut coeff_rows = Vec::new();
        for (r, b) in rows.iter().zip(&rhs) {
            let c: Vec<Rat> = r[..3].iter().map(|&x| rat(x)).collect();
            if c.iter().all(Zero::is_zero) {
                continue;
            }
            sys.push_equality(c.clone(), rat(*b)).unwrap();
            coeff_rows.push(c);
        }
        match solve_affine(&sys).unwrap() {
            Some(s) => {
                prop_assert_eq!(s.dim(), 3 - rank(&coeff_rows));
                for e in sys.equalities() {
                    let v: Rat = e.coeffs.iter().zip(&s.point).map(|(c, x)| c * x).sum();
                    prop_assert_eq!(&v, &e.offset);
                    for d in &s.directions {
                        let w: Rat = e.coeffs.iter().zip(d).map(|(c, x)| c * x).sum();
                        prop_assert!(w.is_zero());
                    }
                }
            }
            None => {
                // inconsistent: the augmented rank exceeds the coefficient rank
                let aug: Vec<Vec<Rat>> = sys
                    .equalities()
                    .iter()
                    .map(|e| {
                        let mut r = e.coeffs.clone();
                        r.push(e.offset.clone());
                        r
                    })
                    .collect();
                prop_assert!(rank(&aug) > rank(&coeff_rows));
            }
        }
    }
}

#[test]
fn feasible_points_are_not_on_boundaries() {
    let sys = StrictSystem::new(2)
        .with_strict(vec![rat(1), rat(0)], rat(0), Relation::Greater)
        .unwrap()
        .with_strict(vec![rat(1), rat(0)], rat(1), Relation::Less)
        .unwrap();
    let p = feasible_point(&sys).unwrap();
    assert!(p[0].is_positive() && p[0] < rat(1));
}
