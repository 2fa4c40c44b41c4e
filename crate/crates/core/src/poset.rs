//! The intersection poset, its Möbius function, and characteristic polynomials.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arrangement::{is_prime, Arrangement, Hyperplane, SimpleGraph};
use crate::error::{validation, Error, Result};
use crate::linalg::rat::integer_row;
use crate::linalg::{rank_mod_p, rank_of_rows, solve_equations, AffineSubspace, EchelonBasis, Rat};
use crate::polynomial::IntegerPolynomial;

/// A nonempty intersection of hyperplanes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flat {
    pub id: usize,
    pub subspace: AffineSubspace,
    /// Indices of all hyperplanes containing the subspace, ascending.
    pub containing: Vec<usize>,
}

impl Flat {
    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    /// The flat `⋂_{i ∈ indices} H_i`, or `None` if the intersection is empty.
    pub fn of(a: &Arrangement, indices: &[usize]) -> Option<Flat> {
        let eqs: Vec<_> = indices
            .iter()
            .map(|&i| {
                let h = a.hyperplane(i);
                (h.coeffs().to_vec(), h.offset().clone())
            })
            .collect();
        let subspace = solve_equations(a.dim(), &eqs)?;
        Some(Self::from_subspace(a, subspace))
    }

    pub fn from_subspace(a: &Arrangement, subspace: AffineSubspace) -> Flat {
        let containing = a
            .hyperplanes()
            .iter()
            .enumerate()
            .filter(|(_, h)| h.contains_subspace(&subspace))
            .map(|(i, _)| i)
            .collect();
        Flat {
            id: 0,
            subspace,
            containing,
        }
    }

    pub fn whole(a: &Arrangement) -> Flat {
        Self::from_subspace(a, AffineSubspace::whole(a.dim()))
    }

    /// The hyperplanes containing the flat as (coefficients, offset) pairs.
    pub fn equations(&self, a: &Arrangement) -> Vec<(Vec<Rat>, Rat)> {
        self.containing
            .iter()
            .map(|&i| {
                let h = a.hyperplane(i);
                (h.coeffs().to_vec(), h.offset().clone())
            })
            .collect()
    }
}

/// L(𝒜) ordered by reverse inclusion, top flat V first.
#[derive(Clone, Debug)]
pub struct IntersectionPoset {
    flats: Vec<Flat>,
    /// Pairs `(x, y)` where `y` covers `x`.
    covers: Vec<(usize, usize)>,
    mobius: Vec<i64>,
    index: HashMap<Vec<usize>, usize>,
}

/// Builds L(𝒜) by closing {V} under intersection with single hyperplanes.
pub fn intersection_poset(a: &Arrangement) -> IntersectionPoset {
    let top = Flat::whole(a);
    let mut found: Vec<Flat> = vec![top];
    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    seen.insert(found[0].containing.clone(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for h in 0..a.len() {
            if found[x].containing.binary_search(&h).is_ok() {
                continue;
            }
            let mut idx = found[x].containing.clone();
            idx.push(h);
            let Some(f) = Flat::of(a, &idx) else {
                continue;
            };
            if !seen.contains_key(&f.containing) {
                seen.insert(f.containing.clone(), found.len());
                queue.push_back(found.len());
                found.push(f);
            }
        }
    }
    found.sort_by(|x, y| {
        y.dim()
            .cmp(&x.dim())
            .then_with(|| x.containing.cmp(&y.containing))
    });
    for (i, f) in found.iter_mut().enumerate() {
        f.id = i;
    }
    let index: HashMap<Vec<usize>, usize> = found
        .iter()
        .map(|f| (f.containing.clone(), f.id))
        .collect();

    let sets: Vec<BTreeSet<usize>> = found
        .iter()
        .map(|f| f.containing.iter().copied().collect())
        .collect();
    let below = |x: usize, y: usize| x != y && sets[x].is_subset(&sets[y]);
    let n = found.len();
    let mut covers = Vec::new();
    for x in 0..n {
        let ups: Vec<usize> = (0..n).filter(|&y| below(x, y)).collect();
        for &y in &ups {
            if !ups.iter().any(|&z| z != y && below(z, y)) {
                assert_eq!(
                    found[x].dim(),
                    found[y].dim() + 1,
                    "intersection poset is not graded"
                );
                covers.push((x, y));
            }
        }
    }
    let mut mobius = vec![0i64; n];
    for x in 0..n {
        mobius[x] = if x == 0 {
            1
        } else {
            -(0..x).filter(|&z| below(z, x)).map(|z| mobius[z]).sum::<i64>()
        };
    }
    IntersectionPoset {
        flats: found,
        covers,
        mobius,
        index,
    }
}

impl IntersectionPoset {
    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn top(&self) -> &Flat {
        &self.flats[0]
    }

    pub fn flat(&self, id: usize) -> &Flat {
        &self.flats[id]
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn mobius(&self, id: usize) -> i64 {
        self.mobius[id]
    }

    /// The flat with exactly this containing set.
    pub fn flat_by_containing(&self, containing: &[usize]) -> Option<&Flat> {
        self.index.get(containing).map(|&i| &self.flats[i])
    }

    /// The intersection of the given hyperplanes, if nonempty.
    pub fn flat_with(&self, indices: &[usize]) -> Option<&Flat> {
        self.flats
            .iter()
            .filter(|f| indices.iter().all(|i| f.containing.binary_search(i).is_ok()))
            .max_by_key(|f| f.dim())
    }

    /// `x ≤ y` in reverse inclusion.
    pub fn le(&self, x: usize, y: usize) -> bool {
        let sy = &self.flats[y].containing;
        self.flats[x]
            .containing
            .iter()
            .all(|i| sy.binary_search(i).is_ok())
    }

    pub fn flats_of_dim(&self, k: usize) -> impl Iterator<Item = &Flat> {
        self.flats.iter().filter(move |f| f.dim() == k)
    }

    /// Σ μ(X) t^{dim X}.
    pub fn char_poly(&self) -> IntegerPolynomial {
        let mut p = IntegerPolynomial::zero();
        for f in &self.flats {
            p.add_term(f.dim(), &BigInt::from(self.mobius[f.id]));
        }
        p
    }
}

/// χ(𝒜, t) as the Möbius sum over L(𝒜).
pub fn char_poly(a: &Arrangement) -> IntegerPolynomial {
    intersection_poset(a).char_poly()
}

/// χ(𝒜, t) = Σ_{I : H_I ≠ ∅} (-1)^{|I|} t^{dim H_I}.
pub fn char_poly_whitney(a: &Arrangement) -> Result<IntegerPolynomial> {
    if a.len() > 20 {
        return Err(Error::Resource(format!(
            "Whitney sum over 2^{} subsets exceeds the limit of 2^20",
            a.len()
        )));
    }
    let rows: Vec<Vec<Rat>> = a
        .hyperplanes()
        .iter()
        .map(|h| {
            let mut r = h.coeffs().to_vec();
            r.push(h.offset().clone());
            r
        })
        .collect();
    let mut counts = vec![BigInt::zero(); a.dim() + 1];
    whitney_rec(&rows, 0, &EchelonBasis::new(), true, a.dim(), &mut counts);
    Ok(IntegerPolynomial::new(counts))
}

fn whitney_rec(
    rows: &[Vec<Rat>],
    next: usize,
    basis: &EchelonBasis,
    even: bool,
    dim: usize,
    counts: &mut [BigInt],
) {
    if next == rows.len() {
        let d = dim - basis.rank();
        if even {
            counts[d] += 1;
        } else {
            counts[d] -= 1;
        }
        return;
    }
    whitney_rec(rows, next + 1, basis, even, dim, counts);
    let mut b = basis.clone();
    if b.insert(&rows[next]) && b.pivots().last() == Some(&dim) {
        return;
    }
    whitney_rec(rows, next + 1, &b, !even, dim, counts);
}

type DelResKey = (usize, Vec<(Vec<Rat>, Rat)>);

/// χ(𝒜, t) = χ(𝒜 ∖ H, t) − χ(𝒜^H, t), deleting the last hyperplane of the canonical order.
pub fn char_poly_delres(a: &Arrangement) -> IntegerPolynomial {
    let mut memo = HashMap::new();
    delres(a.dim(), a.canonical_key(), &mut memo)
}

fn delres(
    dim: usize,
    key: Vec<(Vec<Rat>, Rat)>,
    memo: &mut HashMap<DelResKey, IntegerPolynomial>,
) -> IntegerPolynomial {
    if key.is_empty() {
        return IntegerPolynomial::monomial(dim);
    }
    let memo_key = (dim, key);
    if let Some(p) = memo.get(&memo_key) {
        return p.clone();
    }
    let mut rest = memo_key.1.clone();
    let (c, b) = rest.pop().expect("nonempty");
    let deleted = delres(dim, rest.clone(), memo);
    let restricted = if dim == 1 {
        IntegerPolynomial::one()
    } else {
        let hs: Vec<Hyperplane> = rest
            .iter()
            .map(|(c, b)| Hyperplane::new(c.clone(), b.clone()).expect("canonical forms are nonzero"))
            .collect();
        let sub = Arrangement::new(dim, hs).expect("canonical forms are distinct");
        let line = solve_equations(dim, &[(c, b)]).expect("a hyperplane is nonempty");
        let induced = sub.induced_on(&line).expect("hyperplane has dimension at least 1");
        let r = induced.restriction.arrangement;
        delres(r.dim(), r.canonical_key(), memo)
    };
    let p = &deleted - &restricted;
    memo.insert(memo_key, p.clone());
    p
}

/// Chromatic polynomial by deletion–contraction on the graph.
pub fn chromatic_poly(g: &SimpleGraph) -> IntegerPolynomial {
    let edges: Vec<(usize, usize)> = g.edges().iter().copied().collect();
    let mut memo = HashMap::new();
    chromatic_rec(g.vertex_count(), edges, &mut memo)
}

fn chromatic_rec(
    n: usize,
    edges: Vec<(usize, usize)>,
    memo: &mut HashMap<(usize, Vec<(usize, usize)>), IntegerPolynomial>,
) -> IntegerPolynomial {
    if edges.is_empty() {
        return IntegerPolynomial::monomial(n);
    }
    let key = (n, edges);
    if let Some(p) = memo.get(&key) {
        return p.clone();
    }
    let mut deleted = key.1.clone();
    let (u, v) = deleted.pop().expect("nonempty");
    // Contract v into u, then shift vertices above v down by one.
    let shift = |w: usize| if w > v { w - 1 } else { w };
    let contracted: BTreeSet<(usize, usize)> = deleted
        .iter()
        .map(|&(x, y)| {
            let x = if x == v { u } else { x };
            let y = if y == v { u } else { y };
            (shift(x.min(y)), shift(x.max(y)))
        })
        .filter(|(x, y)| x != y)
        .collect();
    let p = &chromatic_rec(n, deleted, memo)
        - &chromatic_rec(n - 1, contracted.into_iter().collect(), memo);
    memo.insert(key, p.clone());
    p
}

/// Number of points of F_q^ℓ off every hyperplane, after checking that reduction
/// mod q preserves the intersection lattice.
pub fn count_points_mod_q(a: &Arrangement, q: u64) -> Result<u64> {
    if !is_prime(q) {
        return Err(validation(format!("q = {q} is not prime")));
    }
    let total = (q as u128).checked_pow(a.dim() as u32);
    if total.is_none_or(|t| t > 100_000_000) {
        return Err(Error::Resource(format!(
            "{q}^{} points exceeds the scan limit of 10^8",
            a.dim()
        )));
    }
    let rows: Vec<Vec<BigInt>> = a
        .hyperplanes()
        .iter()
        .map(|h| {
            let mut r = h.coeffs().to_vec();
            r.push(h.offset().clone());
            integer_row(&r)
        })
        .collect();
    check_prime_not_degenerate(a, &rows, q)?;
    let qb = BigInt::from(q);
    let reduced: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| u64::try_from(((x % &qb) + &qb) % &qb).expect("reduced"))
                .collect()
        })
        .collect();
    let l = a.dim();
    let mut x = vec![0u64; l];
    let mut count = 0u64;
    loop {
        let off = reduced.iter().all(|r| {
            let mut s = 0u64;
            for j in 0..l {
                s = (s + r[j] * x[j]) % q;
            }
            s != r[l]
        });
        if off {
            count += 1;
        }
        let mut j = 0;
        loop {
            if j == l {
                return Ok(count);
            }
            x[j] += 1;
            if x[j] < q {
                break;
            }
            x[j] = 0;
            j += 1;
        }
    }
}

fn check_prime_not_degenerate(a: &Arrangement, rows: &[Vec<BigInt>], q: u64) -> Result<()> {
    let poset = intersection_poset(a);
    let l = a.dim();
    let ranks = |idx: &[usize]| -> (usize, usize, usize, usize) {
        let aug: Vec<Vec<BigInt>> = idx.iter().map(|&i| rows[i].clone()).collect();
        let coef: Vec<Vec<BigInt>> = aug.iter().map(|r| r[..l].to_vec()).collect();
        let to_rat = |m: &[Vec<BigInt>]| -> Vec<Vec<Rat>> {
            m.iter()
                .map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect())
                .collect()
        };
        (
            rank_of_rows(&to_rat(&coef)),
            rank_of_rows(&to_rat(&aug)),
            rank_mod_p(&coef, q),
            rank_mod_p(&aug, q),
        )
    };
    for f in poset.flats() {
        let mut sets = vec![f.containing.clone()];
        for h in 0..a.len() {
            if f.containing.binary_search(&h).is_err() {
                let mut s = f.containing.clone();
                s.push(h);
                sets.push(s);
            }
        }
        for s in sets {
            let (c, ag, cq, aq) = ranks(&s);
            if c != cq || ag != aq {
                return Err(validation(format!(
                    "degenerate prime {q}: reduction changes the intersection of hyperplanes {:?}",
                    s.iter().map(|i| i + 1).collect::<Vec<_>>()
                )));
            }
        }
    }
    Ok(())
}

/// Number of proper colorings of `g` with `t` colors, by exhaustive search.
#[doc(hidden)]
pub fn count_colorings_brute_force(g: &SimpleGraph, t: u64) -> u64 {
    let n = g.vertex_count();
    let mut colors = vec![0u64; n];
    let mut count = 0;
    if t == 0 {
        return u64::from(n == 0);
    }
    loop {
        if g.edges().iter().all(|&(i, j)| colors[i] != colors[j]) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == n {
                return count;
            }
            colors[k] += 1;
            if colors[k] < t {
                break;
            }
            colors[k] = 0;
            k += 1;
        }
    }
}

/// Betti numbers read off χ: unsigned coefficients, b_0 first.
pub fn betti_from_char_poly(chi: &IntegerPolynomial, dim: usize) -> Vec<BigInt> {
    (0..=dim)
        .map(|k| {
            let c = chi.coeff(dim - k);
            if k % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a3() -> Arrangement {
        Arrangement::parse("dim 2\n1 -1 0\n1 0 2\n1 0 4\n0 1 2\n0 1 4\n").unwrap()
    }

    #[test]
    fn empty_arrangement_poset() {
        let e = Arrangement::empty(3).unwrap();
        let p = intersection_poset(&e);
        assert_eq!(p.len(), 1);
        assert_eq!(p.mobius(0), 1);
        assert_eq!(char_poly(&e), IntegerPolynomial::monomial(3));
    }

    #[test]
    fn a3_poset_and_mobius() {
        let a = a3();
        let p = intersection_poset(&a);
        assert_eq!(p.len(), 10);
        assert_eq!(p.flats_of_dim(1).count(), 5);
        assert_eq!(p.flats_of_dim(0).count(), 4);
        let mu = |idx: &[usize]| p.mobius(p.flat_by_containing(idx).unwrap().id);
        assert_eq!(mu(&[0, 1, 3]), 2);
        assert_eq!(mu(&[0, 2, 4]), 2);
        assert_eq!(mu(&[1, 4]), 1);
        assert_eq!(mu(&[2, 3]), 1);
        assert_eq!(char_poly(&a), IntegerPolynomial::from_i64s(&[6, -5, 1]));
    }

    #[test]
    fn braid3_poset() {
        let b = Arrangement::braid(3).unwrap();
        let p = intersection_poset(&b);
        assert_eq!(p.len(), 5);
        assert_eq!(p.flats_of_dim(0).count(), 0);
        assert_eq!(p.flats_of_dim(1).count(), 1);
        assert_eq!(char_poly(&b), IntegerPolynomial::from_i64s(&[0, 2, -3, 1]));
    }

    #[test]
    fn three_routes_agree_on_examples() {
        let one = Arrangement::parse("dim 2\n1 0 0\n").unwrap();
        for a in [a3(), one, Arrangement::braid(4).unwrap(), Arrangement::empty(2).unwrap()] {
            let m = char_poly(&a);
            assert_eq!(char_poly_whitney(&a).unwrap(), m);
            assert_eq!(char_poly_delres(&a), m);
        }
        let one = Arrangement::parse("dim 2\n1 0 0\n").unwrap();
        assert_eq!(char_poly(&one), IntegerPolynomial::from_i64s(&[0, -1, 1]));
    }

    #[test]
    fn chromatic_examples() {
        assert_eq!(
            chromatic_poly(&SimpleGraph::complete(3)),
            IntegerPolynomial::from_i64s(&[0, 2, -3, 1])
        );
        assert_eq!(
            chromatic_poly(&SimpleGraph::new(4, &[]).unwrap()),
            IntegerPolynomial::monomial(4)
        );
        let c4 = SimpleGraph::new(4, &[(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        let p = chromatic_poly(&c4);
        assert_eq!(p, IntegerPolynomial::from_i64s(&[0, -3, 6, -4, 1]));
        assert_eq!(p.eval_i64(3), BigInt::from(18));
        assert_eq!(count_colorings_brute_force(&c4, 3), 18);
    }

    #[test]
    fn point_counts() {
        assert_eq!(count_points_mod_q(&Arrangement::braid(3).unwrap(), 5).unwrap(), 60);
        assert_eq!(count_points_mod_q(&Arrangement::empty(2).unwrap(), 7).unwrap(), 49);
        assert_eq!(count_points_mod_q(&a3(), 7).unwrap(), 20);
    }

    #[test]
    fn degenerate_primes_rejected() {
        // x = 2 and x = 4 coincide mod 2
        assert!(matches!(count_points_mod_q(&a3(), 2), Err(Error::Validation(_))));
        // parallel lines y = 0 and y = 5 coincide mod 5
        let a = Arrangement::parse("dim 2\n0 1 0\n0 1 5\n").unwrap();
        assert!(count_points_mod_q(&a, 5).is_err());
        assert_eq!(count_points_mod_q(&a, 7).unwrap(), 35);
        assert!(count_points_mod_q(&a, 4).is_err());
    }

    #[test]
    fn point_count_resource_limit() {
        let a = Arrangement::empty(4).unwrap();
        assert!(matches!(count_points_mod_q(&a, 101), Err(Error::Resource(_))));
    }

    #[test]
    fn whitney_resource_limit() {
        let hs: Vec<Hyperplane> = (0..21)
            .map(|k| Hyperplane::from_ints(&[1], k).unwrap())
            .collect();
        let a = Arrangement::new(1, hs).unwrap();
        assert!(matches!(char_poly_whitney(&a), Err(Error::Resource(_))));
    }

    #[test]
    fn betti_from_chi() {
        let b = betti_from_char_poly(&IntegerPolynomial::from_i64s(&[6, -5, 1]), 2);
        assert_eq!(b, vec![BigInt::from(1), BigInt::from(5), BigInt::from(6)]);
    }
}
