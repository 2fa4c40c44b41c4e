//! Orlik–Solomon algebras over ℚ, degree by degree.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::arrangement::Arrangement;
use crate::error::{validation, Result};
use crate::linalg::{rank_of_rows, rref, solve_equations, Rat};
use crate::polynomial::IntegerPolynomial;

/// Strictly increasing 0-based hyperplane indices.
pub type Monomial = Vec<usize>;

/// One graded piece of OS(𝒜).
#[derive(Clone, Debug)]
pub struct OsDegree {
    pub k: usize,
    /// All k-subsets, lexicographic.
    pub ambient: Vec<Monomial>,
    /// Reduced relation rows, coordinates indexed like `ambient`.
    relations: Vec<Vec<Rat>>,
    /// For each relation row, the ambient index of its leading monomial.
    pivots: Vec<usize>,
    /// Surviving monomials, lexicographic.
    pub basis: Vec<Monomial>,
}

impl OsDegree {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn relation_rank(&self) -> usize {
        self.relations.len()
    }

    /// Normal form of a degree-k element given in ambient coordinates,
    /// returned as coordinates over `basis`.
    pub fn normal_form(&self, v: &[Rat]) -> Vec<Rat> {
        let mut v = v.to_vec();
        for (row, &p) in self.relations.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &f * y;
                }
            }
        }
        let index = monomial_index(&self.ambient);
        self.basis.iter().map(|m| v[index[m]].clone()).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.k,
            "dim": self.dim(),
            "basis": self
                .basis
                .iter()
                .map(|m| m.iter().map(|i| i + 1).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }
}

fn monomial_index(ms: &[Monomial]) -> HashMap<Monomial, usize> {
    ms.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect()
}

/// All k-subsets of 0..n in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Monomial>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

fn intersection_rank(a: &Arrangement, idx: &[usize]) -> Option<usize> {
    let eqs: Vec<(Vec<Rat>, Rat)> = idx
        .iter()
        .map(|&i| (a.hyperplane(i).coeffs().to_vec(), a.hyperplane(i).offset().clone()))
        .collect();
    solve_equations(a.dim(), &eqs)?;
    let rows: Vec<Vec<Rat>> = eqs.into_iter().map(|(c, _)| c).collect();
    Some(rank_of_rows(&rows))
}

/// All `I` with `|I| = k`, `H_I ≠ ∅` and `codim H_I < |I|`.
pub fn dependent_sets(a: &Arrangement, k: usize) -> Vec<Monomial> {
    subsets(a.len(), k)
        .into_iter()
        .filter(|s| intersection_rank(a, s).is_some_and(|r| r < k))
        .collect()
}

/// Preference order for the quotient basis: largest index ascending, then the
/// remaining indices compared as descending sequences, larger first.
fn basis_order(x: &Monomial, y: &Monomial) -> Ordering {
    let (mx, my) = (x.last(), y.last());
    mx.cmp(&my).then_with(|| {
        let rx: Vec<usize> = x[..x.len().saturating_sub(1)].iter().rev().copied().collect();
        let ry: Vec<usize> = y[..y.len().saturating_sub(1)].iter().rev().copied().collect();
        ry.cmp(&rx)
    })
}

/// Sign of sorting the concatenation `x ++ y`, or `None` on a repeated index.
fn merge_sign(x: &[usize], y: &[usize]) -> Option<(i32, Monomial)> {
    let mut inversions = 0usize;
    for &a in x {
        for &b in y {
            match a.cmp(&b) {
                Ordering::Equal => return None,
                Ordering::Greater => inversions += 1,
                Ordering::Less => {}
            }
        }
    }
    let mut m: Monomial = x.iter().chain(y).copied().collect();
    m.sort_unstable();
    Some((if inversions % 2 == 0 { 1 } else { -1 }, m))
}

/// Degree-k part of OS(𝒜).
pub fn os_degree(a: &Arrangement, k: usize) -> Result<OsDegree> {
    if k > a.dim() {
        return Err(validation(format!(
            "degree {k} exceeds the ambient dimension {}",
            a.dim()
        )));
    }
    let n = a.len();
    let ambient = subsets(n, k);
    let index = monomial_index(&ambient);
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let unit = |m: &Monomial, s: i32| -> Vec<Rat> {
        let mut r = vec![Rat::zero(); ambient.len()];
        r[index[m]] = Rat::from_integer(BigInt::from(s));
        r
    };
    for m in &ambient {
        if intersection_rank(a, m).is_none() {
            rows.push(unit(m, 1));
        }
    }
    for p in 3..=(k + 1).min(n) {
        for dep in dependent_sets(a, p) {
            let boundary: Vec<(i32, Monomial)> = (0..p)
                .map(|t| {
                    let mut m = dep.clone();
                    m.remove(t);
                    (if t % 2 == 0 { 1 } else { -1 }, m)
                })
                .collect();
            for j in subsets(n, k + 1 - p) {
                let mut r = vec![Rat::zero(); ambient.len()];
                let mut any = false;
                for (s, m) in &boundary {
                    if let Some((s2, prod)) = merge_sign(&j, m) {
                        r[index[&prod]] += Rat::from_integer(BigInt::from(s * s2));
                        any = true;
                    }
                }
                if any && r.iter().any(|x| !x.is_zero()) {
                    rows.push(r);
                }
            }
        }
    }
    // Columns least preferred first: the pivots of the reduced form are then the
    // monomials eliminated by a greedy scan in preference order.
    let mut order: Vec<usize> = (0..ambient.len()).collect();
    order.sort_by(|&x, &y| basis_order(&ambient[y], &ambient[x]));
    let permuted: Vec<Vec<Rat>> = rows
        .iter()
        .map(|r| order.iter().map(|&c| r[c].clone()).collect())
        .collect();
    let red = rref(permuted, ambient.len());
    let pivots: Vec<usize> = red.pivots.iter().map(|&p| order[p]).collect();
    let relations: Vec<Vec<Rat>> = red
        .rows
        .iter()
        .map(|r| {
            let mut out = vec![Rat::zero(); ambient.len()];
            for (pos, &c) in order.iter().enumerate() {
                out[c] = r[pos].clone();
            }
            out
        })
        .collect();
    let basis = (0..ambient.len())
        .filter(|i| !pivots.contains(i))
        .map(|i| ambient[i].clone())
        .collect();
    Ok(OsDegree {
        k,
        ambient,
        relations,
        pivots,
        basis,
    })
}

/// All graded pieces up to the ambient dimension.
pub fn os_algebra(a: &Arrangement) -> Result<Vec<OsDegree>> {
    (0..=a.dim()).map(|k| os_degree(a, k)).collect()
}

/// Σ_k dim OS^k · t^k.
pub fn hilbert_series(a: &Arrangement) -> Result<IntegerPolynomial> {
    Ok(IntegerPolynomial::new(
        betti_numbers(a)?.into_iter().map(BigInt::from).collect(),
    ))
}

pub fn betti_numbers(a: &Arrangement) -> Result<Vec<usize>> {
    Ok(os_algebra(a)?.iter().map(OsDegree::dim).collect())
}

/// Product of two quotient elements, each given over its degree's basis.
pub fn os_product(x: (&OsDegree, &[Rat]), y: (&OsDegree, &[Rat]), target: &OsDegree) -> Result<Vec<Rat>> {
    let (dx, cx) = x;
    let (dy, cy) = y;
    if target.k != dx.k + dy.k {
        return Err(validation("target degree is not the sum of the factor degrees"));
    }
    let index = monomial_index(&target.ambient);
    let mut v = vec![Rat::zero(); target.ambient.len()];
    for (mx, ax) in dx.basis.iter().zip(cx) {
        for (my, ay) in dy.basis.iter().zip(cy) {
            if let Some((s, m)) = merge_sign(mx, my) {
                let c = ax * ay;
                if s == 1 {
                    v[index[&m]] += c;
                } else {
                    v[index[&m]] -= c;
                }
            }
        }
    }
    Ok(target.normal_form(&v))
}

/// The basis element `e_m` as coordinates over `d.basis`.
pub fn basis_vector(d: &OsDegree, m: &[usize]) -> Option<Vec<Rat>> {
    let pos = d.basis.iter().position(|b| b == m)?;
    let mut v = vec![Rat::zero(); d.basis.len()];
    v[pos] = Rat::one();
    Some(v)
}
