//! Exact coefficient fields: ℚ, F_p and cyclotomic fields ℚ(ζ_m).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arrangement::is_prime;
use crate::error::{validation, Result};
use crate::linalg::{format_rat, parse_rat, Rat};

/// The coefficient field of a local system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoefficientField {
    Rationals,
    Prime(u64),
    /// `ℚ[z]/Φ_m(z)`; `modulus` holds the coefficients of `Φ_m`, lowest first.
    Cyclotomic { m: u64, modulus: Vec<BigInt> },
}

/// An element of a [`CoefficientField`]. Cyclotomic elements are reduced
/// polynomials of length `φ(m)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(Rat),
    Modular(u64),
    Cyclotomic(Vec<Rat>),
}

impl CoefficientField {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(validation(format!("{p} is not prime")));
        }
        if p >= 1 << 32 {
            return Err(validation(format!("prime {p} is too large (limit 2^32)")));
        }
        Ok(CoefficientField::Prime(p))
    }

    pub fn cyclotomic(m: u64) -> Result<Self> {
        if m == 0 || m > 200 {
            return Err(validation(format!("cyclotomic order {m} must be in 1..=200")));
        }
        Ok(CoefficientField::Cyclotomic {
            m,
            modulus: cyclotomic_polynomial(m),
        })
    }

    /// Parses `Q`, `Fp:<p>` or `cyclo:<m>`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" || s == "q" {
            return Ok(CoefficientField::Rationals);
        }
        if let Some(p) = s.strip_prefix("Fp:").or_else(|| s.strip_prefix("fp:")) {
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| validation(format!("bad prime in field spec {s:?}")))?;
            return Self::prime(p);
        }
        if let Some(m) = s.strip_prefix("cyclo:") {
            let m: u64 = m
                .trim()
                .parse()
                .map_err(|_| validation(format!("bad order in field spec {s:?}")))?;
            return Self::cyclotomic(m);
        }
        Err(validation(format!(
            "unknown field {s:?} (expected Q, Fp:<p> or cyclo:<m>)"
        )))
    }

    fn degree(&self) -> usize {
        match self {
            CoefficientField::Cyclotomic { modulus, .. } => modulus.len() - 1,
            _ => 1,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.from_rat(&Rat::zero()).expect("zero embeds")
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        self.from_rat(&Rat::from_integer(BigInt::from(n)))
            .expect("integers embed in every field")
    }

    /// Image of a rational; fails in F_p when the denominator vanishes.
    pub fn from_rat(&self, r: &Rat) -> Result<FieldElement> {
        Ok(match self {
            CoefficientField::Rationals => FieldElement::Rational(r.clone()),
            CoefficientField::Prime(p) => {
                let pb = BigInt::from(*p);
                let num = r.numer().mod_floor(&pb).to_u64().expect("reduced");
                let den = r.denom().mod_floor(&pb).to_u64().expect("reduced");
                if den == 0 {
                    return Err(validation(format!(
                        "{} has a denominator divisible by {p}",
                        format_rat(r)
                    )));
                }
                FieldElement::Modular(mul_mod(num, inv_mod(den, *p), *p))
            }
            CoefficientField::Cyclotomic { .. } => {
                let mut v = vec![Rat::zero(); self.degree()];
                v[0] = r.clone();
                FieldElement::Cyclotomic(v)
            }
        })
    }

    /// Parses an element. Cyclotomic elements are sums of terms like
    /// `3`, `-z`, `2*z^3` or `1/2z^2`.
    pub fn parse_element(&self, s: &str) -> Result<FieldElement> {
        let s = s.trim();
        match self {
            CoefficientField::Cyclotomic { .. } => {
                let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
                if compact.is_empty() {
                    return Err(validation("empty field element"));
                }
                let mut terms = Vec::new();
                let mut start = 0;
                for (i, c) in compact.char_indices() {
                    if i > 0 && (c == '+' || c == '-') && !compact[..i].ends_with('^') {
                        terms.push(&compact[start..i]);
                        start = i;
                    }
                }
                terms.push(&compact[start..]);
                let mut poly: Vec<Rat> = Vec::new();
                for t in terms {
                    let (coef, power) = parse_term(t)
                        .ok_or_else(|| validation(format!("bad cyclotomic element {s:?}")))?;
                    if poly.len() <= power {
                        poly.resize(power + 1, Rat::zero());
                    }
                    poly[power] += coef;
                }
                Ok(FieldElement::Cyclotomic(self.reduce(poly)))
            }
            _ => {
                let r = parse_rat(s)
                    .ok_or_else(|| validation(format!("bad field element {s:?}")))?;
                self.from_rat(&r)
            }
        }
    }

    fn reduce(&self, mut poly: Vec<Rat>) -> Vec<Rat> {
        let CoefficientField::Cyclotomic { modulus, .. } = self else {
            unreachable!("reduce is only used for cyclotomic fields")
        };
        let d = modulus.len() - 1;
        for top in (d..poly.len()).rev() {
            let c = poly[top].clone();
            if c.is_zero() {
                continue;
            }
            for (j, mj) in modulus.iter().enumerate() {
                poly[top - d + j] -= &c * Rat::from_integer(mj.clone());
            }
        }
        poly.resize(d, Rat::zero());
        poly
    }

    pub fn is_zero(&self, a: &FieldElement) -> bool {
        match a {
            FieldElement::Rational(r) => r.is_zero(),
            FieldElement::Modular(x) => *x == 0,
            FieldElement::Cyclotomic(v) => v.iter().all(Zero::is_zero),
        }
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (self, a, b) {
            (_, FieldElement::Rational(x), FieldElement::Rational(y)) => FieldElement::Rational(x + y),
            (CoefficientField::Prime(p), FieldElement::Modular(x), FieldElement::Modular(y)) => {
                FieldElement::Modular((x + y) % p)
            }
            (_, FieldElement::Cyclotomic(x), FieldElement::Cyclotomic(y)) => {
                FieldElement::Cyclotomic(x.iter().zip(y).map(|(u, v)| u + v).collect())
            }
            _ => panic!("mismatched field elements"),
        }
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        match (self, a) {
            (_, FieldElement::Rational(x)) => FieldElement::Rational(-x),
            (CoefficientField::Prime(p), FieldElement::Modular(x)) => FieldElement::Modular((p - x) % p),
            (_, FieldElement::Cyclotomic(x)) => FieldElement::Cyclotomic(x.iter().map(|u| -u).collect()),
            _ => panic!("mismatched field elements"),
        }
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        match (self, a, b) {
            (_, FieldElement::Rational(x), FieldElement::Rational(y)) => FieldElement::Rational(x * y),
            (CoefficientField::Prime(p), FieldElement::Modular(x), FieldElement::Modular(y)) => {
                FieldElement::Modular(mul_mod(*x, *y, *p))
            }
            (_, FieldElement::Cyclotomic(x), FieldElement::Cyclotomic(y)) => {
                let mut prod = vec![Rat::zero(); x.len() + y.len()];
                for (i, u) in x.iter().enumerate() {
                    if u.is_zero() {
                        continue;
                    }
                    for (j, v) in y.iter().enumerate() {
                        prod[i + j] += u * v;
                    }
                }
                FieldElement::Cyclotomic(self.reduce(prod))
            }
            _ => panic!("mismatched field elements"),
        }
    }

    pub fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        if self.is_zero(a) {
            return None;
        }
        Some(match (self, a) {
            (_, FieldElement::Rational(x)) => FieldElement::Rational(x.recip()),
            (CoefficientField::Prime(p), FieldElement::Modular(x)) => FieldElement::Modular(inv_mod(*x, *p)),
            (CoefficientField::Cyclotomic { modulus, .. }, FieldElement::Cyclotomic(x)) => {
                let m: Vec<Rat> = modulus.iter().map(|c| Rat::from_integer(c.clone())).collect();
                FieldElement::Cyclotomic(self.reduce(poly_inverse_mod(x, &m)))
            }
            _ => panic!("mismatched field elements"),
        })
    }

    /// `a^e` for any integer `e`; `a` must be nonzero when `e < 0`.
    pub fn pow(&self, a: &FieldElement, e: i64) -> FieldElement {
        let base = if e < 0 {
            self.inv(a).expect("negative power of zero")
        } else {
            a.clone()
        };
        let mut out = self.one();
        for _ in 0..e.unsigned_abs() {
            out = self.mul(&out, &base);
        }
        out
    }

    pub fn format(&self, a: &FieldElement) -> String {
        match a {
            FieldElement::Rational(r) => format_rat(r),
            FieldElement::Modular(x) => x.to_string(),
            FieldElement::Cyclotomic(v) => {
                let mut parts = Vec::new();
                for (i, c) in v.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mono = match i {
                        0 => String::new(),
                        1 => "z".to_string(),
                        _ => format!("z^{i}"),
                    };
                    let term = if i == 0 {
                        format_rat(c)
                    } else if c.is_one() {
                        mono
                    } else if (-c).is_one() {
                        format!("-{mono}")
                    } else {
                        format!("{}*{mono}", format_rat(c))
                    };
                    parts.push(term);
                }
                if parts.is_empty() {
                    "0".to_string()
                } else {
                    parts.join("+").replace("+-", "-")
                }
            }
        }
    }

    /// Rank of a matrix by Gaussian elimination.
    pub fn rank(&self, rows: &[Vec<FieldElement>]) -> usize {
        let mut m: Vec<Vec<FieldElement>> = rows.to_vec();
        let cols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..m.len()).find(|&r| !self.is_zero(&m[r][c])) else {
                continue;
            };
            m.swap(rank, p);
            let inv = self.inv(&m[rank][c]).expect("pivot is nonzero");
            for r in rank + 1..m.len() {
                if self.is_zero(&m[r][c]) {
                    continue;
                }
                let factor = self.mul(&m[r][c], &inv);
                for j in c..cols {
                    let t = self.mul(&factor, &m[rank][j]);
                    m[r][j] = self.sub(&m[r][j], &t);
                }
            }
            rank += 1;
        }
        rank
    }
}

impl fmt::Display for CoefficientField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoefficientField::Rationals => write!(f, "Q"),
            CoefficientField::Prime(p) => write!(f, "Fp:{p}"),
            CoefficientField::Cyclotomic { m, .. } => write!(f, "cyclo:{m}"),
        }
    }
}

fn parse_term(t: &str) -> Option<(Rat, usize)> {
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, t.strip_prefix('+').unwrap_or(t)),
    };
    if body.is_empty() || body.starts_with(['+', '-']) {
        return None;
    }
    let (coef, power) = match body.find('z') {
        None => (parse_rat(body)?, 0),
        Some(i) => {
            let c = body[..i].strip_suffix('*').unwrap_or(&body[..i]);
            let coef = if c.is_empty() { Rat::one() } else { parse_rat(c)? };
            let rest = &body[i + 1..];
            let power = if rest.is_empty() {
                1
            } else {
                let digits = rest.strip_prefix('^')?;
                if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return None;
                }
                digits.parse().ok()?
            };
            (coef, power)
        }
    };
    Some((if sign < 0 { -coef } else { coef }, power))
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut result = 1;
    let (mut base, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(result, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    result
}

/// Coefficients of the m-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    // x^m - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = BigInt::from(-1);
    num[m as usize] = BigInt::one();
    for d in 1..m {
        if m % d == 0 {
            num = exact_div(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut q = vec![BigInt::zero(); num.len() - dd];
    for i in (0..q.len()).rev() {
        let c = rem[i + dd].clone();
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    q
}

fn trim(mut v: Vec<Rat>) -> Vec<Rat> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn poly_divmod(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead = b.last().expect("nonzero divisor").clone();
    let mut q = vec![Rat::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().expect("nonempty").clone() / &lead;
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &c * bj;
        }
        q[shift] = c;
        r = trim(r);
    }
    (q, r)
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

/// Inverse of `a` modulo the irreducible `m` by the extended Euclidean algorithm.
fn poly_inverse_mod(a: &[Rat], m: &[Rat]) -> Vec<Rat> {
    let (mut r0, mut r1) = (trim(m.to_vec()), trim(a.to_vec()));
    let (mut t0, mut t1): (Vec<Rat>, Vec<Rat>) = (Vec::new(), vec![Rat::one()]);
    while !r1.is_empty() {
        let (q, r) = poly_divmod(&r0, &r1);
        let t = poly_sub(&t0, &poly_mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t);
    }
    assert_eq!(r0.len(), 1, "element is not invertible modulo the cyclotomic polynomial");
    let c = r0[0].clone();
    t0.iter().map(|x| x / &c).collect()
}
