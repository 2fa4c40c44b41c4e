use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p` or `p/q` with optional sign.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num: BigInt = parse_int(num)?;
    let den: BigInt = match den {
        Some(d) if !d.starts_with(['+', '-']) => parse_int(d)?,
        Some(_) => return None,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return None;
    }
    Some(Rat::new(num, den))
}

fn parse_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_zero_vec(v: &[Rat]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Scales `v` so that its first nonzero entry is 1.
pub fn normalize_leading(v: &mut [Rat]) {
    if let Some(lead) = v.iter().find(|x| !x.is_zero()).cloned() {
        for x in v.iter_mut() {
            *x = &*x / &lead;
        }
    }
}

/// Least common multiple of all denominators.
pub fn common_denominator(v: &[Rat]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Clears denominators, returning the integer vector `lcm(den) * v`.
pub fn integer_row(v: &[Rat]) -> Vec<BigInt> {
    let l = common_denominator(v);
    v.iter()
        .map(|x| (x * Rat::from_integer(l.clone())).to_integer())
        .collect()
}

pub fn sign_of(x: &Rat) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}
