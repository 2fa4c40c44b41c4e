//! Presentations of the fundamental group of a line arrangement complement.
//!
//! Words are sequences of signed 1-based generator indices: `3` is `γ₃` and
//! `-3` is `γ₃⁻¹`.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::arrangement::Arrangement;
use crate::cells::{Sign, SignVector};
use crate::error::{internal, validation, Result};
use crate::flag::{flag_partition, generic_flag, relative_subspace, Flag};
use crate::linalg::rat::dot;
use crate::linalg::{AffineSubspace, Rat};
use crate::poset::intersection_poset;

pub type Word = Vec<i64>;

/// An equality `lhs = rhs` between words.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupRelation {
    pub lhs: Word,
    pub rhs: Word,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPresentation {
    pub generator_names: Vec<String>,
    pub relations: Vec<GroupRelation>,
}

impl GroupPresentation {
    pub fn new(generator_names: Vec<String>, relations: Vec<GroupRelation>) -> Result<Self> {
        let n = generator_names.len() as i64;
        for r in &relations {
            if let Some(&g) = r.lhs.iter().chain(&r.rhs).find(|&&g| g == 0 || g.abs() > n) {
                return Err(validation(format!("word letter {g} does not name a generator")));
            }
        }
        Ok(GroupPresentation {
            generator_names,
            relations,
        })
    }

    pub fn generator_count(&self) -> usize {
        self.generator_names.len()
    }

    /// `lhs · rhs⁻¹` for each relation, freely reduced.
    pub fn relators(&self) -> Vec<Word> {
        self.relations
            .iter()
            .map(|r| {
                let mut w = r.lhs.clone();
                w.extend(inverse(&r.rhs));
                free_reduce(&w)
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "generators": self.generator_names,
            "relations": self
                .relations
                .iter()
                .map(|r| json!({"lhs": r.lhs, "rhs": r.rhs}))
                .collect::<Vec<_>>(),
        })
    }

    /// GAP input defining the group as a quotient of a free group.
    pub fn to_gap(&self) -> String {
        let names: Vec<String> = self.generator_names.iter().map(|s| format!("\"{s}\"")).collect();
        let mut s = format!("F := FreeGroup({});\n", names.join(", "));
        let gens: Vec<String> = (1..=self.generator_count()).map(|i| format!("F.{i}")).collect();
        let relators: Vec<String> = self
            .relations
            .iter()
            .map(|r| format!("{}*({})^-1", gap_word(&r.lhs), gap_word(&r.rhs)))
            .collect();
        if gens.is_empty() {
            s.push_str("G := F;\n");
        } else {
            s.push_str(&format!("G := F / [ {} ];\n", relators.join(", ")));
        }
        s
    }

    /// Human-readable relation lines such as `123456 = 132456` or `g1*g2^-1 = …`.
    pub fn to_text(&self) -> String {
        let mut s = format!("generators: {}\n", self.generator_names.join(" "));
        for r in &self.relations {
            s.push_str(&format!(
                "{} = {}\n",
                self.render(&r.lhs),
                self.render(&r.rhs)
            ));
        }
        s
    }

    fn render(&self, w: &[i64]) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.iter()
            .map(|&g| {
                let name = &self.generator_names[(g.unsigned_abs() - 1) as usize];
                if g > 0 {
                    name.clone()
                } else {
                    format!("{name}^-1")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

fn gap_word(w: &[i64]) -> String {
    if w.is_empty() {
        return "One(F)".to_string();
    }
    w.iter()
        .map(|&g| {
            if g > 0 {
                format!("F.{g}")
            } else {
                format!("F.{}^-1", -g)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

pub fn inverse(w: &[i64]) -> Word {
    w.iter().rev().map(|g| -g).collect()
}

pub fn free_reduce(w: &[i64]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &g in w {
        if out.last() == Some(&-g) {
            out.pop();
        } else {
            out.push(g);
        }
    }
    out
}

/// A line arrangement renumbered and reoriented for a flag: `F⁰` lies on the
/// negative side of every line and, along `F¹`, `F⁰ < H_n ∩ F¹ < … < H_1 ∩ F¹`.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub arrangement: Arrangement,
    pub flag: Flag,
    /// Position `k` holds the original index of the new `H_{k+1}`.
    pub permutation: Vec<usize>,
    /// Whether the original hyperplane `i` was reoriented.
    pub flipped: Vec<bool>,
}

pub fn normalize_for_flag(a: &Arrangement) -> Result<Normalized> {
    if a.dim() != 2 {
        return Err(validation(format!(
            "flag normalization needs a line arrangement, got dimension {}",
            a.dim()
        )));
    }
    let flag = generic_flag(a)?;
    normalize_with_flag(a, &flag)
}

pub fn normalize_with_flag(a: &Arrangement, flag: &Flag) -> Result<Normalized> {
    if a.dim() != 2 {
        return Err(validation(format!(
            "flag normalization needs a line arrangement, got dimension {}",
            a.dim()
        )));
    }
    flag.certify(a)?;
    let p0 = flag.base_point();
    let d = flag.direction().expect("two-dimensional flag");
    let mut flipped = Vec::with_capacity(a.len());
    let mut oriented = a.clone();
    let mut crossing = Vec::with_capacity(a.len());
    for (i, h) in a.hyperplanes().iter().enumerate() {
        let v = h.eval(p0);
        let flip = v.is_positive();
        if flip {
            oriented = oriented.flip(i);
        }
        flipped.push(flip);
        crossing.push(-v / dot(h.coeffs(), d));
    }
    if crossing.iter().any(|t| !t.is_positive()) {
        return Err(internal("F⁰ is not before every crossing along F¹"));
    }
    let mut permutation: Vec<usize> = (0..a.len()).collect();
    permutation.sort_by(|&i, &j| crossing[j].cmp(&crossing[i]));
    Ok(Normalized {
        arrangement: oriented.permuted(&permutation)?,
        flag: flag.clone(),
        permutation,
        flipped,
    })
}

fn generator_names(a: &Arrangement) -> Vec<String> {
    a.labels().iter().map(|l| format!("g{l}")).collect()
}

/// The line arrangement cut out by `F²` with the restricted flag, in the
/// intrinsic coordinates of `F²`. Hyperplane order is preserved.
pub fn generic_section(a: &Arrangement, flag: &Flag) -> Result<(Arrangement, Flag)> {
    if a.dim() < 3 {
        return Err(validation("a generic plane section needs dimension at least 3"));
    }
    flag.certify(a)?;
    let plane = flag.level(2);
    let induced = a.induced_on(plane)?;
    if induced.restriction.fibers.iter().any(|f| f.len() != 1)
        || induced.restriction.arrangement.len() != a.len()
    {
        return Err(internal("generic plane section merged or lost hyperplanes"));
    }
    let levels: Vec<AffineSubspace> = (0..2)
        .map(|k| relative_subspace(plane, flag.level(k)))
        .collect::<Result<_>>()?;
    Ok((induced.restriction.arrangement, Flag::new(levels)?))
}

/// `⟨γ₁,…,γ_n ∣ γ₁⋯γ_n = R(D), D ∈ ch²⟩` with the canonical flag.
pub fn minimal_presentation(a: &Arrangement) -> Result<(GroupPresentation, Normalized)> {
    match a.dim() {
        1 => {
            let p = GroupPresentation::new(generator_names(a), Vec::new())?;
            let flag = generic_flag(a)?;
            let n = Normalized {
                arrangement: a.clone(),
                flag,
                permutation: (0..a.len()).collect(),
                flipped: vec![false; a.len()],
            };
            Ok((p, n))
        }
        2 => minimal_presentation_with_flag(a, &generic_flag(a)?),
        _ => {
            let (section, flag) = generic_section(a, &generic_flag(a)?)?;
            minimal_presentation_with_flag(&section, &flag)
        }
    }
}

/// The minimal presentation for a line arrangement and a certified flag.
pub fn minimal_presentation_with_flag(
    a: &Arrangement,
    flag: &Flag,
) -> Result<(GroupPresentation, Normalized)> {
    let norm = normalize_with_flag(a, flag)?;
    let b = &norm.arrangement;
    let part = flag_partition(b, &norm.flag)?;
    let lhs: Word = (1..=b.len() as i64).collect();
    let mut relations = Vec::new();
    for &d in &part.levels[2] {
        let sign = &part.chambers[d].sign;
        relations.push(GroupRelation {
            lhs: lhs.clone(),
            rhs: chamber_word(sign),
        });
    }
    Ok((GroupPresentation::new(generator_names(b), relations)?, norm))
}

/// Negative indices ascending, then positive indices ascending.
pub fn chamber_word(sign: &SignVector) -> Word {
    let pick = |s: Sign| {
        (0..sign.len())
            .filter(move |&i| sign.get(i) == s)
            .map(|i| i as i64 + 1)
    };
    pick(Sign::Neg).chain(pick(Sign::Pos)).collect()
}

/// How the last upper edge at a vertex is expressed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConjugationStyle {
    /// `γ_{Y_i} = P γ_{X_i} P⁻¹` for every `i`, with `P = γ_{X_1}⋯γ_{X_{i−1}}`.
    Literal,
    /// As `Literal`, except `γ_{Y_m} = γ_{X_m}`, which follows from the
    /// commutator relation `[γ_{X_1}⋯γ_{X_{m−1}}, γ_{X_m}] = 1`.
    TrailingCommute,
}

/// Both forms of the edge presentation.
#[derive(Clone, Debug)]
pub struct RandellFalk {
    /// One generator per edge; conjugation and commutator relations at every vertex.
    pub full: GroupPresentation,
    /// Upper edges eliminated: generators `γ₁…γ_n`, commutator relations only.
    pub reduced: GroupPresentation,
    pub normalized: Normalized,
    /// Normalized line index of each generator of `full`.
    pub edge_lines: Vec<usize>,
}

struct Vertex {
    height: Rat,
    /// Lower edges `X₁…X_m` and matching upper edges `Y₁…Y_m`, as edge ids.
    lower: Vec<usize>,
    upper: Vec<usize>,
}

pub fn randell_falk_presentation(a: &Arrangement, style: ConjugationStyle) -> Result<RandellFalk> {
    let flag = generic_flag(a)?;
    match a.dim() {
        2 => randell_falk_with_flag(a, &flag, style),
        d if d >= 3 => {
            let (section, f) = generic_section(a, &flag)?;
            randell_falk_with_flag(&section, &f, style)
        }
        _ => Err(validation("the edge presentation needs dimension at least 2")),
    }
}

pub fn randell_falk_with_flag(
    a: &Arrangement,
    flag: &Flag,
    style: ConjugationStyle,
) -> Result<RandellFalk> {
    let norm = normalize_with_flag(a, flag)?;
    let b = &norm.arrangement;
    let n = b.len();
    let p0 = norm.flag.base_point().to_vec();
    let d = norm.flag.direction().expect("two-dimensional flag").to_vec();
    let mut nu = vec![-d[1].clone(), d[0].clone()];
    let poset = intersection_poset(b);
    let points: Vec<Vec<Rat>> = poset.flats_of_dim(0).map(|f| f.subspace.point.clone()).collect();
    if let Some(v) = points.first() {
        let diff: Vec<Rat> = v.iter().zip(&p0).map(|(x, y)| x - y).collect();
        if dot(&nu, &diff).is_negative() {
            nu = nu.iter().map(|x| -x).collect();
        }
    }
    let height = |x: &[Rat]| dot(&nu, x);

    // vertices on each line, bottom to top
    let mut on_line: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut vertices: Vec<(Vec<Rat>, Vec<usize>)> = poset
        .flats_of_dim(0)
        .map(|f| (f.subspace.point.clone(), f.containing.clone()))
        .collect();
    vertices.sort_by(|x, y| height(&x.0).cmp(&height(&y.0)).then_with(|| x.0.cmp(&y.0)));
    for (vi, (_, lines)) in vertices.iter().enumerate() {
        for &i in lines {
            on_line[i].push(vi);
        }
    }
    // edge (i, k): k-th edge of line i from the bottom; edge (i, 0) meets F¹
    let mut edge_id: HashMap<(usize, usize), usize> = HashMap::new();
    let mut names = Vec::new();
    let mut edge_lines = Vec::new();
    for i in 0..n {
        edge_id.insert((i, 0), names.len());
        names.push(format!("g{}", b.labels()[i]));
        edge_lines.push(i);
    }
    for i in 0..n {
        for k in 1..=on_line[i].len() {
            edge_id.insert((i, k), names.len());
            names.push(format!("g{}_{k}", b.labels()[i]));
            edge_lines.push(i);
        }
    }
    let mut local: Vec<Vertex> = Vec::new();
    for (vi, (p, lines)) in vertices.iter().enumerate() {
        let mut lower: Vec<(Rat, usize)> = lines
            .iter()
            .map(|&i| {
                let c = b.hyperplane(i).coeffs();
                let mut e = vec![-c[1].clone(), c[0].clone()];
                if dot(&nu, &e).is_positive() {
                    e = e.iter().map(|x| -x).collect();
                }
                // horizontal travel per unit of descent
                let key = dot(&e, &d) / -dot(&nu, &e);
                (key, i)
            })
            .collect();
        lower.sort_by(|x, y| y.0.cmp(&x.0));
        let pos = |i: usize| on_line[i].iter().position(|&w| w == vi).expect("vertex on line");
        local.push(Vertex {
            height: height(p),
            lower: lower.iter().map(|&(_, i)| edge_id[&(i, pos(i))]).collect(),
            upper: lower.iter().map(|&(_, i)| edge_id[&(i, pos(i) + 1)]).collect(),
        });
    }
    debug_assert!(local.windows(2).all(|w| w[0].height.cmp(&w[1].height) != Ordering::Greater));

    let word = |ids: &[usize]| -> Word { ids.iter().map(|&e| e as i64 + 1).collect() };
    let mut full_rel = Vec::new();
    let mut reduced_rel = Vec::new();
    let mut expr: HashMap<usize, Word> = (0..n).map(|i| (i, vec![i as i64 + 1])).collect();
    let concat = |expr: &HashMap<usize, Word>, ids: &[usize]| -> Word {
        free_reduce(&ids.iter().flat_map(|e| expr[e].clone()).collect::<Word>())
    };
    for v in &local {
        let m = v.lower.len();
        for i in 0..m {
            let prefix = &v.lower[..i];
            let trailing = style == ConjugationStyle::TrailingCommute && i == m - 1;
            let rhs_ids: Word = if trailing {
                word(&v.lower[i..=i])
            } else {
                let mut w = word(prefix);
                w.push(v.lower[i] as i64 + 1);
                w.extend(inverse(&word(prefix)));
                w
            };
            full_rel.push(GroupRelation {
                lhs: vec![v.upper[i] as i64 + 1],
                rhs: rhs_ids,
            });
            let y = if trailing {
                expr[&v.lower[i]].clone()
            } else {
                let p = concat(&expr, prefix);
                let mut w = p.clone();
                w.extend(expr[&v.lower[i]].clone());
                w.extend(inverse(&p));
                free_reduce(&w)
            };
            expr.insert(v.upper[i], y);
        }
        for i in 1..m {
            let (left, right) = v.lower.split_at(i);
            let (l, r) = (word(left), word(right));
            full_rel.push(GroupRelation {
                lhs: [l.clone(), r.clone()].concat(),
                rhs: [r, l].concat(),
            });
            let (l, r) = (concat(&expr, left), concat(&expr, right));
            reduced_rel.push(GroupRelation {
                lhs: free_reduce(&[l.clone(), r.clone()].concat()),
                rhs: free_reduce(&[r, l].concat()),
            });
        }
    }
    Ok(RandellFalk {
        full: GroupPresentation::new(names.clone(), full_rel)?,
        reduced: GroupPresentation::new(names[..n].to_vec(), reduced_rel)?,
        normalized: norm,
        edge_lines,
    })
}

/// Free rank and torsion coefficients of the abelianization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abelianization {
    pub rank: usize,
    /// Invariant factors greater than one.
    pub torsion: Vec<BigInt>,
}

pub fn abelianization(p: &GroupPresentation) -> Abelianization {
    let g = p.generator_count();
    let mut m: Vec<Vec<BigInt>> = p
        .relators()
        .iter()
        .map(|w| {
            let mut row = vec![BigInt::zero(); g];
            for &x in w {
                let i = (x.unsigned_abs() - 1) as usize;
                row[i] += if x > 0 { 1 } else { -1 };
            }
            row
        })
        .collect();
    let diag = smith_diagonal(&mut m, g);
    let nonzero = diag.iter().filter(|x| !x.is_zero()).count();
    Abelianization {
        rank: g - nonzero,
        torsion: diag.into_iter().filter(|x| x > &BigInt::one()).collect(),
    }
}

/// Diagonal of the Smith normal form (absolute values).
pub fn smith_diagonal(m: &mut [Vec<BigInt>], cols: usize) -> Vec<BigInt> {
    let rows = m.len();
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let Some((pr, pc)) = (t..rows)
                .flat_map(|r| (t..cols).map(move |c| (r, c)))
                .filter(|&(r, c)| !m[r][c].is_zero())
                .min_by(|&(r1, c1), &(r2, c2)| m[r1][c1].abs().cmp(&m[r2][c2].abs()))
            else {
                return diag;
            };
            m.swap(t, pr);
            for row in m.iter_mut() {
                row.swap(t, pc);
            }
            let pivot = m[t][t].clone();
            let mut clean = true;
            for r in t + 1..rows {
                let q = &m[r][t] / &pivot;
                if !q.is_zero() {
                    for c in t..cols {
                        let s = &q * &m[t][c];
                        m[r][c] -= s;
                    }
                }
                clean &= m[r][t].is_zero();
            }
            for c in t + 1..cols {
                let q = &m[t][c] / &pivot;
                if !q.is_zero() {
                    for row in m.iter_mut() {
                        let s = &q * &row[t];
                        row[c] -= s;
                    }
                }
                clean &= m[t][c].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| !(&m[r][c] % &pivot).is_zero()));
            match bad {
                Some(r) => {
                    for c in t..cols {
                        let s = m[r][c].clone();
                        m[t][c] += s;
                    }
                }
                None => {
                    diag.push(pivot.abs());
                    break;
                }
            }
        }
    }
    diag
}
