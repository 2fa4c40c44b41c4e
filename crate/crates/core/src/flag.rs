//! Generic flags near infinity and the induced partition of chambers.

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::arrangement::Arrangement;
use crate::cells::{cell_system, chambers, Cell};
use crate::error::{internal, validation, Result};
use crate::linalg::rat::{dot, format_rat};
use crate::linalg::{feasible_point, solve_equations, AffineSubspace, Rat};
use crate::poset::intersection_poset;

/// Nested affine subspaces `F⁰ ⊂ F¹ ⊂ … ⊂ F^{ℓ−1}` of ℝ^ℓ with `dim F^k = k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    levels: Vec<AffineSubspace>,
}

impl Flag {
    pub fn new(levels: Vec<AffineSubspace>) -> Result<Flag> {
        let l = levels.len();
        if l == 0 {
            return Err(validation("a flag needs at least one level"));
        }
        for (k, s) in levels.iter().enumerate() {
            if s.ambient_dim() != l {
                return Err(validation(format!(
                    "flag level {k} lives in dimension {}, expected {l}",
                    s.ambient_dim()
                )));
            }
            if s.dim() != k || crate::linalg::rank_of_rows(&s.directions) != k {
                return Err(validation(format!("flag level {k} does not have dimension {k}")));
            }
            if k > 0 && !levels[k - 1].is_subset_of(s) {
                return Err(validation(format!("flag level {} is not inside level {k}", k - 1)));
            }
        }
        Ok(Flag { levels })
    }

    pub fn ambient_dim(&self) -> usize {
        self.levels.len()
    }

    /// `F^k` for `k < ℓ`.
    pub fn level(&self, k: usize) -> &AffineSubspace {
        &self.levels[k]
    }

    pub fn levels(&self) -> &[AffineSubspace] {
        &self.levels
    }

    /// The point `F⁰`.
    pub fn base_point(&self) -> &[Rat] {
        &self.levels[0].point
    }

    /// The direction of `F¹`, if `ℓ ≥ 2`.
    pub fn direction(&self) -> Option<&[Rat]> {
        self.levels.get(1).map(|s| s.directions[0].as_slice())
    }

    /// Checks genericity and the near-infinity condition at every level.
    pub fn certify(&self, a: &Arrangement) -> Result<()> {
        if a.dim() != self.ambient_dim() {
            return Err(validation("flag and arrangement live in different dimensions"));
        }
        let mut outer = AffineSubspace::whole(a.dim());
        let mut induced = a.clone();
        for k in (0..a.dim()).rev() {
            let inner = &self.levels[k];
            let local = relative_subspace(&outer, inner)?;
            let (normal, c) = hyperplane_of(&local);
            let poset = intersection_poset(&induced);
            let mut side: Option<bool> = None;
            for f in poset.flats() {
                if f.dim() >= 1 {
                    if f.subspace.directions.iter().all(|d| dot(&normal, d).is_zero()) {
                        return Err(validation(format!(
                            "F^{k} is not transversal to a flat of dimension {} of the induced arrangement",
                            f.dim()
                        )));
                    }
                } else {
                    let v = dot(&normal, &f.subspace.point) - &c;
                    if v.is_zero() {
                        return Err(validation(format!("F^{k} passes through a vertex")));
                    }
                    let pos = v.is_positive();
                    if side.is_some_and(|s| s != pos) {
                        return Err(validation(format!(
                            "F^{k} separates vertices of the induced arrangement"
                        )));
                    }
                    side = Some(pos);
                }
            }
            if k > 0 {
                let ind = induced.induced_on(&local)?;
                if !ind.containing.is_empty()
                    || !ind.disjoint.is_empty()
                    || ind.restriction.arrangement.len() != induced.len()
                {
                    return Err(validation(format!("F^{k} is not generic")));
                }
                induced = ind.restriction.arrangement;
                outer = inner.clone();
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let levels: Vec<Value> = self
            .levels
            .iter()
            .enumerate()
            .map(|(k, s)| {
                json!({
                    "dim": k,
                    "point": s.point.iter().map(format_rat).collect::<Vec<_>>(),
                    "directions": s
                        .directions
                        .iter()
                        .map(|d| d.iter().map(format_rat).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({ "levels": levels })
    }
}

/// `inner` in the intrinsic coordinates of `outer`.
pub(crate) fn relative_subspace(outer: &AffineSubspace, inner: &AffineSubspace) -> Result<AffineSubspace> {
    let y0 = outer
        .coordinates_of(&inner.point)
        .ok_or_else(|| validation("flag levels are not nested"))?;
    let mut dirs = Vec::new();
    for d in &inner.directions {
        let p: Vec<Rat> = inner.point.iter().zip(d).map(|(a, b)| a + b).collect();
        let y = outer
            .coordinates_of(&p)
            .ok_or_else(|| validation("flag levels are not nested"))?;
        dirs.push(y.iter().zip(&y0).map(|(a, b)| a - b).collect());
    }
    Ok(AffineSubspace {
        point: y0,
        directions: dirs,
    })
}

/// Normal and offset of a hyperplane given parametrically.
fn hyperplane_of(s: &AffineSubspace) -> (Vec<Rat>, Rat) {
    let m = s.ambient_dim();
    let eqs: Vec<(Vec<Rat>, Rat)> = s.directions.iter().map(|d| (d.clone(), Rat::zero())).collect();
    let normals = solve_equations(m, &eqs).expect("homogeneous system is consistent");
    let normal = normals.directions[0].clone();
    let c = dot(&normal, &s.point);
    (normal, c)
}

/// A deterministic certified generic flag.
pub fn generic_flag(a: &Arrangement) -> Result<Flag> {
    let flag = Flag::new(build_levels(a)?)?;
    flag.certify(a)
        .map_err(|e| internal(format!("constructed flag failed certification: {e}")))?;
    Ok(flag)
}

fn build_levels(b: &Arrangement) -> Result<Vec<AffineSubspace>> {
    let m = b.dim();
    if m == 1 {
        let p = b
            .hyperplanes()
            .iter()
            .map(|h| h.offset() / &h.coeffs()[0])
            .min()
            .map_or_else(Rat::zero, |t| t - Rat::one());
        return Ok(vec![AffineSubspace {
            point: vec![p],
            directions: Vec::new(),
        }]);
    }
    let poset = intersection_poset(b);
    let normal = candidate_normals(m)
        .find(|nu| {
            poset
                .flats()
                .iter()
                .filter(|f| f.dim() >= 1)
                .all(|f| f.subspace.directions.iter().any(|d| !dot(nu, d).is_zero()))
        })
        .expect("candidate normals are eventually generic");
    let c = poset
        .flats_of_dim(0)
        .map(|f| dot(&normal, &f.subspace.point))
        .min()
        .map_or_else(Rat::zero, |v| v - Rat::one());
    let top = solve_equations(m, &[(normal, c)]).expect("a hyperplane is nonempty");
    let induced = b.induced_on(&top)?.restriction.arrangement;
    let mut levels: Vec<AffineSubspace> = build_levels(&induced)?
        .into_iter()
        .map(|s| AffineSubspace {
            point: top.map(&s.point),
            directions: s
                .directions
                .iter()
                .map(|d| {
                    let origin = top.map(&vec![Rat::zero(); top.dim()]);
                    top.map(d).iter().zip(&origin).map(|(x, o)| x - o).collect()
                })
                .collect(),
        })
        .collect();
    levels.push(top);
    Ok(levels)
}

/// `e_m`, then moment-curve vectors `(1, t, …, t^{m−1})` for `t = 1, −1, 2, −2, …`.
fn candidate_normals(m: usize) -> impl Iterator<Item = Vec<Rat>> {
    let mut last = vec![Rat::zero(); m];
    last[m - 1] = Rat::one();
    let moment = (1i64..).flat_map(|t| [t, -t]).map(move |t| {
        (0..m)
            .map(|i| Rat::from_integer(t.pow(i as u32).into()))
            .collect::<Vec<Rat>>()
    });
    std::iter::once(last).chain(moment)
}

/// Chambers grouped by the least `k` with `C ∩ F^k ≠ ∅`.
#[derive(Clone, Debug)]
pub struct FlagPartition {
    pub chambers: Vec<Cell>,
    /// `level_of[i]` is the level of `chambers[i]`.
    pub level_of: Vec<usize>,
    /// `levels[k]` lists the chambers in `ch^k`, ascending.
    pub levels: Vec<Vec<usize>>,
}

impl FlagPartition {
    pub fn sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// The chamber containing `F⁰`.
    pub fn base_chamber(&self) -> usize {
        self.levels[0][0]
    }
}

pub fn flag_partition(a: &Arrangement, f: &Flag) -> Result<FlagPartition> {
    f.certify(a)?;
    let ch = chambers(a)?;
    let l = a.dim();
    let mut level_of = Vec::with_capacity(ch.len());
    let mut levels = vec![Vec::new(); l + 1];
    for (i, c) in ch.iter().enumerate() {
        let sys = cell_system(a, &c.sign);
        let k = (0..l)
            .find(|&k| {
                sys.pullback(f.level(k))
                    .is_some_and(|s| feasible_point(&s).is_some())
            })
            .unwrap_or(l);
        level_of.push(k);
        levels[k].push(i);
    }
    if levels[0].len() != 1 {
        return Err(internal("F⁰ is not in exactly one chamber"));
    }
    Ok(FlagPartition {
        chambers: ch,
        level_of,
        levels,
    })
}
