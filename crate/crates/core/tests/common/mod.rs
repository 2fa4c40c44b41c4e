//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperarr::linalg::{rat, Rat};
use hyperarr::{Arrangement, Hyperplane, IntegerPolynomial, Sign, SignVector};

pub fn data(name: &str) -> Arrangement {
    let path = format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap();
    Arrangement::parse_named(&text, name).unwrap()
}

pub fn ints(coeffs: &[&[i64]]) -> Arrangement {
    let dim = coeffs[0].len() - 1;
    let hs = coeffs
        .iter()
        .map(|r| Hyperplane::from_ints(&r[..dim], r[dim]).unwrap())
        .collect();
    Arrangement::new(dim, hs).unwrap()
}

pub fn point(x: &[i64]) -> Vec<Rat> {
    x.iter().map(|&v| rat(v)).collect()
}

// ---------------------------------------------------------------------------
// Fourier–Motzkin

/// `a·x + b > 0` when `strict`, `a·x + b ≥ 0` otherwise.
#[derive(Clone, Debug)]
pub struct Ineq {
    pub a: Vec<Rat>,
    pub b: Rat,
    pub strict: bool,
}

/// Decides `{ineqs} ∩ {a·x + b = 0 : eqs}` ≠ ∅ by substitution and elimination.
pub fn fm_feasible(dim: usize, ineqs: &[Ineq], eqs: &[(Vec<Rat>, Rat)]) -> bool {
    let mut ineqs = ineqs.to_vec();
    let mut eqs = eqs.to_vec();
    while let Some((a, b)) = eqs.pop() {
        let Some(j) = (0..dim).find(|&j| !a[j].is_zero()) else {
            if b.is_zero() {
                continue;
            }
            return false;
        };
        // x_j = -(b + Σ_{k≠j} a_k x_k) / a_j
        let sub = |c: &mut Vec<Rat>, d: &mut Rat| {
            if c[j].is_zero() {
                return;
            }
            let f = &c[j] / &a[j];
            for k in 0..dim {
                let t = &f * &a[k];
                c[k] -= t;
            }
            *d -= &f * &b;
        };
        for e in eqs.iter_mut() {
            sub(&mut e.0, &mut e.1);
        }
        for q in ineqs.iter_mut() {
            sub(&mut q.a, &mut q.b);
        }
    }
    for j in 0..dim {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for q in ineqs {
            if q.a[j].is_positive() {
                pos.push(q);
            } else if q.a[j].is_negative() {
                neg.push(q);
            } else {
                rest.push(q);
            }
        }
        for p in &pos {
            for n in &neg {
                let (fp, fnn) = (-n.a[j].clone(), p.a[j].clone());
                let a: Vec<Rat> = (0..dim).map(|k| &fp * &p.a[k] + &fnn * &n.a[k]).collect();
                rest.push(Ineq {
                    a,
                    b: &fp * &p.b + &fnn * &n.b,
                    strict: p.strict || n.strict,
                });
            }
        }
        ineqs = dedup(rest);
    }
    ineqs
        .iter()
        .all(|q| if q.strict { q.b.is_positive() } else { !q.b.is_negative() })
}

/// Scales each inequality so its first nonzero coefficient is ±1 and drops repeats.
fn dedup(ineqs: Vec<Ineq>) -> Vec<Ineq> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mut q in ineqs {
        if let Some(lead) = q.a.iter().find(|x| !x.is_zero()).map(|x| x.abs()) {
            q.a.iter_mut().for_each(|x| *x /= &lead);
            q.b /= &lead;
        }
        if seen.insert((q.a.clone(), q.b.clone(), q.strict)) {
            out.push(q);
        }
    }
    out
}

fn sign_constraints(a: &Arrangement, s: &SignVector) -> (Vec<Ineq>, Vec<(Vec<Rat>, Rat)>) {
    let mut ineqs = Vec::new();
    let mut eqs = Vec::new();
    for (i, h) in a.hyperplanes().iter().enumerate() {
        // the hyperplane is coeffs·x = offset
        let c = h.coeffs().to_vec();
        let b = -h.offset().clone();
        match s.get(i) {
            Sign::Zero => eqs.push((c, b)),
            Sign::Pos => ineqs.push(Ineq { a: c, b, strict: true }),
            Sign::Neg => ineqs.push(Ineq {
                a: c.iter().map(|x| -x).collect(),
                b: -b,
                strict: true,
            }),
        }
    }
    (ineqs, eqs)
}

pub fn fm_cell_nonempty(a: &Arrangement, s: &SignVector) -> bool {
    let (ineqs, eqs) = sign_constraints(a, s);
    fm_feasible(a.dim(), &ineqs, &eqs)
}

fn all_sign_vectors(n: usize, with_zero: bool) -> Vec<SignVector> {
    let alphabet: &[Sign] = if with_zero {
        &[Sign::Neg, Sign::Zero, Sign::Pos]
    } else {
        &[Sign::Neg, Sign::Pos]
    };
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v: Vec<Sign>| {
                alphabet.iter().map(move |&s| {
                    let mut w = v.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(SignVector::new).collect()
}

/// Chambers by testing every sign vector in `{+,-}^n`.
pub fn brute_chambers(a: &Arrangement) -> BTreeSet<String> {
    all_sign_vectors(a.len(), false)
        .into_iter()
        .filter(|s| fm_cell_nonempty(a, s))
        .map(|s| s.to_string())
        .collect()
}

/// Faces by testing every sign vector in `{+,0,-}^n`, with their dimensions.
pub fn brute_faces(a: &Arrangement) -> Vec<(String, usize)> {
    all_sign_vectors(a.len(), true)
        .into_iter()
        .filter(|s| fm_cell_nonempty(a, s))
        .map(|s| {
            let rows: Vec<Vec<Rat>> = s.zero_set().iter().map(|&i| a.hyperplane(i).coeffs().to_vec()).collect();
            (s.to_string(), a.dim() - rank(&rows))
        })
        .collect()
}

/// Whether the chamber's closure is compact: its recession cone is `{0}`.
pub fn fm_chamber_bounded(a: &Arrangement, s: &SignVector) -> bool {
    let cone: Vec<Ineq> = a
        .hyperplanes()
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let sign = if s.get(i) == Sign::Pos { rat(1) } else { rat(-1) };
            Ineq {
                a: h.coeffs().iter().map(|c| c * &sign).collect(),
                b: Rat::zero(),
                strict: false,
            }
        })
        .collect();
    for j in 0..a.dim() {
        for sign in [1, -1] {
            let mut sys = cone.clone();
            let mut e = vec![Rat::zero(); a.dim()];
            e[j] = rat(sign);
            sys.push(Ineq { a: e, b: rat(-1), strict: false });
            if fm_feasible(a.dim(), &sys, &[]) {
                return false;
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Linear algebra and counting

/// Rank by plain Gaussian elimination.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for k in 0..cols {
                    let t = &f * &m[r][k];
                    m[i][k] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

/// `χ(t) = Σ_{S, ∩S ≠ ∅} (−1)^{|S|} t^{ℓ − rank S}` over all subsets.
pub fn whitney_oracle(a: &Arrangement) -> IntegerPolynomial {
    let l = a.dim();
    let n = a.len();
    let mut coeffs = vec![BigInt::zero(); l + 1];
    for mask in 0u32..(1 << n) {
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
        let r = rank(&lin);
        if set.is_empty() || r == rank(&aug) {
            let s = if set.len() % 2 == 0 { 1 } else { -1 };
            coeffs[l - r] += s;
        }
    }
    IntegerPolynomial::new(coeffs)
}

/// Points of `F_q^ℓ` off every hyperplane, by exhaustive scan.
pub fn brute_count_fq(a: &Arrangement, q: u64) -> u64 {
    let l = a.dim();
    let rows: Vec<(Vec<i64>, i64)> = a
        .hyperplanes()
        .iter()
        .map(|h| {
            let m = |r: &Rat| -> i64 {
                let inv = mod_inverse(r.denom(), q);
                let n = (r.numer() % BigInt::from(q) + BigInt::from(q)) % BigInt::from(q);
                (n * inv % BigInt::from(q)).to_i64().unwrap()
            };
            (h.coeffs().iter().map(m).collect(), m(h.offset()))
        })
        .collect();
    let total = q.pow(l as u32);
    (0..total)
        .filter(|&idx| {
            let x: Vec<i64> = (0..l).map(|k| ((idx / q.pow(k as u32)) % q) as i64).collect();
            rows.iter().all(|(c, b)| {
                let v: i64 = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum::<i64>() - b;
                v.rem_euclid(q as i64) != 0
            })
        })
        .count() as u64
}

fn mod_inverse(d: &BigInt, q: u64) -> BigInt {
    let q = BigInt::from(q);
    let e = d.mod_floor(&q).extended_gcd(&q);
    assert!(e.gcd.is_one(), "denominator not invertible");
    e.x.mod_floor(&q)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

// ---------------------------------------------------------------------------
// Generators

fn build(dim: usize, rows: Vec<(Vec<i64>, i64)>) -> Arrangement {
    let mut seen = BTreeSet::new();
    let hs: Vec<Hyperplane> = rows
        .into_iter()
        .filter(|(c, _)| c.iter().any(|&x| x != 0))
        .map(|(c, b)| Hyperplane::from_ints(&c, b).unwrap())
        .filter(|h| seen.insert(h.canonical()))
        .collect();
    Arrangement::new(dim, hs).unwrap()
}

/// Seeded random arrangement with small integer coefficients and at least one hyperplane.
pub fn random_arrangement(rng: &mut ChaCha8Rng, dim: usize, max_n: usize) -> Arrangement {
    loop {
        let n = rng.gen_range(1..=max_n);
        let rows = (0..n)
            .map(|_| ((0..dim).map(|_| rng.gen_range(-3..=3)).collect(), rng.gen_range(-4..=4)))
            .collect();
        let a = build(dim, rows);
        if !a.is_empty() {
            return a;
        }
    }
}

pub fn random_essential(rng: &mut ChaCha8Rng, dim: usize, max_n: usize) -> Arrangement {
    loop {
        let a = random_arrangement(rng, dim, max_n);
        if a.is_essential() {
            return a;
        }
    }
}

pub fn suite(seed: u64, count: usize, dims: &[usize], max_n: usize) -> Vec<Arrangement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| random_arrangement(&mut rng, dims[i % dims.len()], max_n))
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Proptest strategy for arrangements in dimension `dim` with up to `max_n` hyperplanes.
pub fn arb_arrangement(dim: usize, max_n: usize) -> impl Strategy<Value = Arrangement> {
    prop::collection::vec(
        (prop::collection::vec(-3i64..=3, dim), -4i64..=4),
        1..=max_n,
    )
    .prop_map(move |rows| build(dim, rows))
    .prop_filter("at least one hyperplane", |a| !a.is_empty())
}

pub fn arb_essential(dim: usize, max_n: usize) -> impl Strategy<Value = Arrangement> {
    arb_arrangement(dim, max_n).prop_filter("essential", Arrangement::is_essential)
}
