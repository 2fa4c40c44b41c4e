//! Rank-one local systems and the twisted minimal cochain complex for ℓ ≤ 2.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::arrangement::Arrangement;
use crate::cells::{sep, Sign, SignVector};
use crate::error::{validation, Error, Result};
use crate::field::{CoefficientField, FieldElement};
use crate::flag::{flag_partition, generic_flag, Flag, FlagPartition};
use crate::linalg::rat::dot;
use crate::linalg::Rat;
use crate::pi1::GroupPresentation;

/// Monodromy `a_i = ρ(γ_i)` around each hyperplane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalSystem {
    pub field: CoefficientField,
    pub monodromy: Vec<FieldElement>,
}

impl LocalSystem {
    pub fn new(field: CoefficientField, monodromy: Vec<FieldElement>) -> Result<Self> {
        if let Some(i) = monodromy.iter().position(|a| field.is_zero(a)) {
            return Err(validation(format!("monodromy a{} is not invertible", i + 1)));
        }
        Ok(LocalSystem { field, monodromy })
    }

    pub fn trivial(field: CoefficientField, n: usize) -> Self {
        let one = field.one();
        LocalSystem {
            field,
            monodromy: vec![one; n],
        }
    }

    /// Comma-separated field elements, e.g. `2,3,5` or `z,1+z^2`.
    pub fn parse(field: CoefficientField, s: &str) -> Result<Self> {
        let monodromy = if s.trim().is_empty() {
            Vec::new()
        } else {
            s.split(',')
                .map(|t| field.parse_element(t))
                .collect::<Result<Vec<_>>>()?
        };
        Self::new(field, monodromy)
    }

    pub fn len(&self) -> usize {
        self.monodromy.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monodromy.is_empty()
    }

    /// Monodromy reindexed so that position `k` holds `a_{perm[k]}`.
    pub fn permuted(&self, perm: &[usize]) -> LocalSystem {
        LocalSystem {
            field: self.field.clone(),
            monodromy: perm.iter().map(|&i| self.monodromy[i].clone()).collect(),
        }
    }

    fn product(&self, indices: impl Iterator<Item = usize>, exponent: i64) -> FieldElement {
        let f = &self.field;
        indices.fold(f.one(), |acc, i| f.mul(&acc, &f.pow(&self.monodromy[i], exponent)))
    }
}

/// An element `Σ c_S x_S` of `R̃ = R[x_a]/(x_a² − a)`, with `x_S = Π_{i∈S} x_{a_i}`
/// and `S` encoded as a bitmask.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExtendedRingElement {
    pub terms: BTreeMap<u64, FieldElement>,
}

impl ExtendedRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(ls: &LocalSystem, set: &[usize]) -> Result<Self> {
        let mask = mask_of(set)?;
        Ok(Self::term(ls, mask, ls.field.one()))
    }

    fn term(ls: &LocalSystem, mask: u64, c: FieldElement) -> Self {
        let mut out = Self::zero();
        if !ls.field.is_zero(&c) {
            out.terms.insert(mask, c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, ls: &LocalSystem, set: &[usize]) -> Result<FieldElement> {
        let mask = mask_of(set)?;
        Ok(self.terms.get(&mask).cloned().unwrap_or_else(|| ls.field.zero()))
    }

    pub fn add(&self, ls: &LocalSystem, other: &Self) -> Self {
        let f = &ls.field;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            let s = match out.terms.get(m) {
                Some(x) => f.add(x, c),
                None => c.clone(),
            };
            if f.is_zero(&s) {
                out.terms.remove(m);
            } else {
                out.terms.insert(*m, s);
            }
        }
        out
    }

    pub fn scale(&self, ls: &LocalSystem, c: &FieldElement) -> Self {
        let f = &ls.field;
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            let y = f.mul(x, c);
            if !f.is_zero(&y) {
                out.terms.insert(*m, y);
            }
        }
        out
    }

    pub fn sub(&self, ls: &LocalSystem, other: &Self) -> Self {
        self.add(ls, &other.scale(ls, &ls.field.from_int(-1)))
    }

    /// `x_S · x_T = x_{S△T} · Π_{i∈S∩T} a_i`.
    pub fn mul(&self, ls: &LocalSystem, other: &Self) -> Self {
        let f = &ls.field;
        let mut out = Self::zero();
        for (s, x) in &self.terms {
            for (t, y) in &other.terms {
                let both = ls.product(bits(s & t), 1);
                let c = f.mul(&f.mul(x, y), &both);
                out = out.add(ls, &Self::term(ls, s ^ t, c));
            }
        }
        out
    }

    /// `x_S⁻¹ = x_S · Π_{i∈S} a_i⁻¹`.
    pub fn monomial_inverse(ls: &LocalSystem, set: &[usize]) -> Result<Self> {
        let mask = mask_of(set)?;
        Ok(Self::term(ls, mask, ls.product(set.iter().copied(), -1)))
    }

    pub fn format(&self, ls: &LocalSystem) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(m, c)| {
                let vars: Vec<String> = bits(*m).map(|i| format!("x{}", i + 1)).collect();
                let c = ls.field.format(c);
                if vars.is_empty() {
                    c
                } else {
                    format!("({c})*{}", vars.join("*"))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn mask_of(set: &[usize]) -> Result<u64> {
    set.iter().try_fold(0u64, |m, &i| {
        if i >= 64 {
            Err(Error::Resource("R̃ supports at most 64 hyperplanes".into()))
        } else {
            Ok(m | 1 << i)
        }
    })
}

fn bits(m: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| m >> i & 1 == 1)
}

/// `Δ(C, C′) = x_S − x_S⁻¹` with `S = Sep(C, C′)`.
pub fn delta(c1: &SignVector, c2: &SignVector, ls: &LocalSystem) -> Result<ExtendedRingElement> {
    if c1.len() != ls.len() {
        return Err(validation("local system and chambers have different sizes"));
    }
    let s = sep(c1, c2)?;
    Ok(ExtendedRingElement::monomial(ls, &s)?.sub(ls, &ExtendedRingElement::monomial_inverse(ls, &s)?))
}

/// `deg(C, C′)` for `C ∈ ch^k`, `C′ ∈ ch^{k+1}` (chamber indices into `part.chambers`).
pub fn degree_map(
    a: &Arrangement,
    flag: &Flag,
    part: &FlagPartition,
    c: usize,
    c2: usize,
) -> Result<i64> {
    if a.dim() > 2 {
        return Err(Error::Unsupported(format!(
            "degree maps are implemented for dimension at most 2, got {}",
            a.dim()
        )));
    }
    let k = part.level_of[c];
    if part.level_of[c2] != k + 1 {
        return Err(validation("degree map needs chambers in consecutive flag levels"));
    }
    if k == 0 {
        return Ok(1);
    }
    let p0 = flag.base_point();
    let d = flag.direction().expect("two-dimensional flag");
    let target = &part.chambers[c2].sign;
    let mut crossings: Vec<(Rat, usize)> = a
        .hyperplanes()
        .iter()
        .enumerate()
        .map(|(i, h)| ((h.offset() - dot(h.coeffs(), p0)) / dot(h.coeffs(), d), i))
        .collect();
    crossings.sort();
    // the F¹-interval of `c` lies between crossings `j-1` and `j`
    let sign = &part.chambers[c].sign;
    let j = (1..=crossings.len())
        .find(|&j| {
            (0..a.len()).all(|i| {
                let s = sign.get(i);
                let crossed = crossings[..j].iter().any(|&(_, h)| h == i);
                let start = Sign::of(&(a.hyperplane(i).eval(p0)));
                s == if crossed { start.negate() } else { start }
            })
        })
        .ok_or_else(|| validation("chamber does not meet F¹"))?;
    let f = |i: usize| -> i64 {
        let entering = Sign::of(&dot(a.hyperplane(i).coeffs(), d));
        if target.get(i) == entering {
            1
        } else {
            -1
        }
    };
    let left = f(crossings[j - 1].1);
    let right = match crossings.get(j) {
        Some(&(_, i)) => f(i),
        None => -1,
    };
    Ok((left - right) / 2)
}

/// The cochain complex `𝒞^k = ⊕_{C∈ch^k} ρ(C)` in the basis `X_C = x_{Sep(C₀,C)}`.
#[derive(Clone, Debug)]
pub struct TwistedComplex {
    pub field: CoefficientField,
    pub flag: Flag,
    /// Chamber sign vectors of `ch^k`, ascending.
    pub bases: Vec<Vec<SignVector>>,
    /// `matrices[k]` is `|ch^k| × |ch^{k+1}|`.
    pub matrices: Vec<Vec<Vec<FieldElement>>>,
}

impl TwistedComplex {
    pub fn to_json(&self) -> Value {
        json!({
            "field": self.field.to_string(),
            "bases": self
                .bases
                .iter()
                .map(|b| b.iter().map(ToString::to_string).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "matrices": self
                .matrices
                .iter()
                .map(|m| {
                    m.iter()
                        .map(|r| r.iter().map(|x| self.field.format(x)).collect::<Vec<_>>())
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>(),
        })
    }

    /// Ranks of consecutive products `∇_{k+1} ∘ ∇_k`; zero for a cochain complex.
    pub fn is_cochain_complex(&self) -> bool {
        let f = &self.field;
        self.matrices.windows(2).all(|w| {
            let (m0, m1) = (&w[0], &w[1]);
            m0.iter().all(|row| {
                (0..m1.first().map_or(0, Vec::len)).all(|j| {
                    let s = row
                        .iter()
                        .zip(m1)
                        .fold(f.zero(), |acc, (x, r)| f.add(&acc, &f.mul(x, &r[j])));
                    f.is_zero(&s)
                })
            })
        })
    }

    pub fn cohomology(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.matrices.iter().map(|m| self.field.rank(m)).collect();
        (0..self.bases.len())
            .map(|k| {
                let out = ranks.get(k).copied().unwrap_or(0);
                let inc = if k == 0 { 0 } else { ranks[k - 1] };
                self.bases[k].len() - out - inc
            })
            .collect()
    }
}

fn check_inputs(a: &Arrangement, ls: &LocalSystem) -> Result<()> {
    if a.dim() > 2 {
        return Err(Error::Unsupported(format!(
            "twisted complexes are implemented for dimension at most 2, got {}",
            a.dim()
        )));
    }
    if ls.len() != a.len() {
        return Err(validation(format!(
            "local system has {} values for {} hyperplanes",
            ls.len(),
            a.len()
        )));
    }
    Ok(())
}

pub fn twisted_complex(a: &Arrangement, ls: &LocalSystem) -> Result<TwistedComplex> {
    check_inputs(a, ls)?;
    twisted_complex_with_flag(a, ls, &generic_flag(a)?)
}

/// Scalar form: entry `deg(C,C′)·(Π_{S∩A} a − Π_{S∖A} a⁻¹)`, `S = Sep(C,C′)`, `A = Sep(C₀,C)`.
pub fn twisted_complex_with_flag(a: &Arrangement, ls: &LocalSystem, flag: &Flag) -> Result<TwistedComplex> {
    check_inputs(a, ls)?;
    build_complex(a, ls, flag, |c0, c, c2, deg| {
        let f = &ls.field;
        if deg == 0 {
            return Ok(f.zero());
        }
        let s = sep(c, c2)?;
        let base = sep(c0, c)?;
        let plus = ls.product(s.iter().copied().filter(|i| base.contains(i)), 1);
        let minus = ls.product(s.iter().copied().filter(|i| !base.contains(i)), -1);
        Ok(f.mul(&f.from_int(deg), &f.sub(&plus, &minus)))
    })
}

/// The same matrices computed by multiplying out `X_C · Δ(C,C′)` in `R̃`.
pub fn direct_twisted_complex(a: &Arrangement, ls: &LocalSystem, flag: &Flag) -> Result<TwistedComplex> {
    check_inputs(a, ls)?;
    build_complex(a, ls, flag, |c0, c, c2, deg| {
        let f = &ls.field;
        let x_c = ExtendedRingElement::monomial(ls, &sep(c0, c)?)?;
        let prod = x_c.mul(ls, &delta(c, c2, ls)?);
        let target = sep(c0, c2)?;
        let coeff = prod.coefficient(ls, &target)?;
        let rest = prod.sub(ls, &ExtendedRingElement::term(ls, mask_of(&target)?, coeff.clone()));
        if !rest.is_zero() {
            return Err(crate::error::internal(
                "X_C·Δ(C,C′) is not a multiple of X_{C′}",
            ));
        }
        Ok(f.mul(&f.from_int(deg), &coeff))
    })
}

fn build_complex(
    a: &Arrangement,
    ls: &LocalSystem,
    flag: &Flag,
    entry: impl Fn(&SignVector, &SignVector, &SignVector, i64) -> Result<FieldElement>,
) -> Result<TwistedComplex> {
    let part = flag_partition(a, flag)?;
    let c0 = &part.chambers[part.base_chamber()].sign;
    let l = a.dim();
    let mut matrices = Vec::with_capacity(l);
    for k in 0..l {
        let mut m = Vec::with_capacity(part.levels[k].len());
        for &c in &part.levels[k] {
            let mut row = Vec::with_capacity(part.levels[k + 1].len());
            for &c2 in &part.levels[k + 1] {
                let deg = degree_map(a, flag, &part, c, c2)?;
                row.push(entry(c0, &part.chambers[c].sign, &part.chambers[c2].sign, deg)?);
            }
            m.push(row);
        }
        matrices.push(m);
    }
    Ok(TwistedComplex {
        field: ls.field.clone(),
        flag: flag.clone(),
        bases: part
            .levels
            .iter()
            .map(|lv| lv.iter().map(|&c| part.chambers[c].sign.clone()).collect())
            .collect(),
        matrices,
    })
}

/// `dim H^k(M(𝒜), 𝓛_ρ)` for `k = 0..ℓ`.
pub fn twisted_cohomology(a: &Arrangement, ls: &LocalSystem) -> Result<Vec<usize>> {
    Ok(twisted_complex(a, ls)?.cohomology())
}

/// `dim H¹` of the presentation complex `F^m → F^n → F` twisted by `ρ(γ_i) = a_i`.
pub fn fox_h1(p: &GroupPresentation, ls: &LocalSystem) -> Result<usize> {
    let f = &ls.field;
    let n = p.generator_count();
    if ls.len() != n {
        return Err(validation(format!(
            "local system has {} values for {n} generators",
            ls.len()
        )));
    }
    let jacobian: Vec<Vec<FieldElement>> = p
        .relators()
        .iter()
        .map(|w| {
            let mut row = vec![f.zero(); n];
            let mut prefix = f.one();
            for &g in w {
                let i = (g.unsigned_abs() - 1) as usize;
                let a = &ls.monodromy[i];
                if g > 0 {
                    row[i] = f.add(&row[i], &prefix);
                    prefix = f.mul(&prefix, a);
                } else {
                    let inv = f.inv(a).expect("monodromy is invertible");
                    prefix = f.mul(&prefix, &inv);
                    row[i] = f.sub(&row[i], &prefix);
                }
            }
            row
        })
        .collect();
    let boundary1 = usize::from(ls.monodromy.iter().any(|a| *a != f.one()));
    Ok(n - boundary1 - f.rank(&jacobian))
}
