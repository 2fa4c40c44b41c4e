//! Exact linear feasibility via a two-phase simplex method with Bland's rule.

use num_traits::{One, Signed, Zero};

use super::matrix::AffineSubspace;
use super::rat::{dot, is_zero_vec, Rat};
use crate::error::{validation, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Less,
    Greater,
}

/// `coeffs·x < offset` or `coeffs·x > offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictConstraint {
    pub coeffs: Vec<Rat>,
    pub offset: Rat,
    pub relation: Relation,
}

/// `coeffs·x = offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equality {
    pub coeffs: Vec<Rat>,
    pub offset: Rat,
}

/// A conjunction of strict inequalities and equalities over ℚ^dim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrictSystem {
    dim: usize,
    strict: Vec<StrictConstraint>,
    equalities: Vec<Equality>,
}

impl StrictSystem {
    pub fn new(dim: usize) -> Self {
        StrictSystem {
            dim,
            strict: Vec::new(),
            equalities: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn strict(&self) -> &[StrictConstraint] {
        &self.strict
    }

    pub fn equalities(&self) -> &[Equality] {
        &self.equalities
    }

    fn check(&self, coeffs: &[Rat]) -> Result<()> {
        if coeffs.len() != self.dim {
            return Err(validation(format!(
                "constraint has {} coefficients, system dimension is {}",
                coeffs.len(),
                self.dim
            )));
        }
        if is_zero_vec(coeffs) {
            return Err(validation("constraint has a zero coefficient vector"));
        }
        Ok(())
    }

    pub fn push_strict(&mut self, coeffs: Vec<Rat>, offset: Rat, relation: Relation) -> Result<()> {
        self.check(&coeffs)?;
        self.strict.push(StrictConstraint {
            coeffs,
            offset,
            relation,
        });
        Ok(())
    }

    pub fn push_equality(&mut self, coeffs: Vec<Rat>, offset: Rat) -> Result<()> {
        self.check(&coeffs)?;
        self.equalities.push(Equality { coeffs, offset });
        Ok(())
    }

    pub fn with_strict(mut self, coeffs: Vec<Rat>, offset: Rat, relation: Relation) -> Result<Self> {
        self.push_strict(coeffs, offset, relation)?;
        Ok(self)
    }

    pub fn with_equality(mut self, coeffs: Vec<Rat>, offset: Rat) -> Result<Self> {
        self.push_equality(coeffs, offset)?;
        Ok(self)
    }

    pub fn satisfied_by(&self, x: &[Rat]) -> bool {
        x.len() == self.dim
            && self.strict.iter().all(|c| {
                let v = dot(&c.coeffs, x);
                match c.relation {
                    Relation::Less => v < c.offset,
                    Relation::Greater => v > c.offset,
                }
            })
            && self.equalities.iter().all(|e| dot(&e.coeffs, x) == e.offset)
    }

    /// Restricts the system to an affine subspace, in its intrinsic coordinates.
    ///
    /// Constraints that become constant are evaluated; `None` means one of them fails.
    pub fn pullback(&self, s: &AffineSubspace) -> Option<StrictSystem> {
        let mut out = StrictSystem::new(s.dim());
        for c in &self.strict {
            let (coeffs, offset) = s.pullback(&c.coeffs, &c.offset);
            if is_zero_vec(&coeffs) {
                let ok = match c.relation {
                    Relation::Less => offset.is_positive(),
                    Relation::Greater => offset.is_negative(),
                };
                if !ok {
                    return None;
                }
            } else {
                out.strict.push(StrictConstraint {
                    coeffs,
                    offset,
                    relation: c.relation,
                });
            }
        }
        for e in &self.equalities {
            let (coeffs, offset) = s.pullback(&e.coeffs, &e.offset);
            if is_zero_vec(&coeffs) {
                if !offset.is_zero() {
                    return None;
                }
            } else {
                out.equalities.push(Equality { coeffs, offset });
            }
        }
        Some(out)
    }
}

/// Returns a point satisfying every constraint exactly, or `None` if there is none.
pub fn feasible_point(sys: &StrictSystem) -> Option<Vec<Rat>> {
    let n = sys.dim;
    // Variables x_1..x_n, t. Maximize t subject to each strict constraint with slack t, t <= 1.
    let mut lp = LinearProgram::new(n + 1);
    for c in &sys.strict {
        let mut row: Vec<Rat> = match c.relation {
            Relation::Greater => c.coeffs.clone(),
            Relation::Less => c.coeffs.iter().map(|x| -x).collect(),
        };
        row.push(-Rat::one());
        let rhs = match c.relation {
            Relation::Greater => c.offset.clone(),
            Relation::Less => -c.offset.clone(),
        };
        lp.push(row, Cmp::Ge, rhs);
    }
    for e in &sys.equalities {
        let mut row = e.coeffs.clone();
        row.push(Rat::zero());
        lp.push(row, Cmp::Eq, e.offset.clone());
    }
    let mut t_row = vec![Rat::zero(); n + 1];
    t_row[n] = Rat::one();
    lp.push(t_row.clone(), Cmp::Le, Rat::one());
    lp.objective = t_row;
    match lp.solve() {
        LpOutcome::Optimal { value, mut point } if value.is_positive() => {
            point.truncate(n);
            debug_assert!(sys.satisfied_by(&point));
            Some(point)
        }
        _ => None,
    }
}

/// True iff the closure of the (feasible) open polyhedron has a trivial recession cone.
pub fn is_bounded(sys: &StrictSystem) -> Result<bool> {
    if feasible_point(sys).is_none() {
        return Err(validation("boundedness is undefined for an infeasible system"));
    }
    let n = sys.dim;
    let mut cone = LinearProgram::new(n);
    for c in &sys.strict {
        let cmp = match c.relation {
            Relation::Greater => Cmp::Ge,
            Relation::Less => Cmp::Le,
        };
        cone.push(c.coeffs.clone(), cmp, Rat::zero());
    }
    for e in &sys.equalities {
        cone.push(e.coeffs.clone(), Cmp::Eq, Rat::zero());
    }
    for j in 0..n {
        for sign in [Rat::one(), -Rat::one()] {
            let mut lp = cone.clone();
            let mut row = vec![Rat::zero(); n];
            row[j] = sign.clone();
            lp.push(row, Cmp::Ge, Rat::one());
            if !matches!(lp.solve(), LpOutcome::Infeasible) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Cmp {
    Le,
    Ge,
    Eq,
}

/// Maximize `objective·x` over free variables subject to linear constraints.
#[derive(Clone, Debug)]
pub(crate) struct LinearProgram {
    num_vars: usize,
    constraints: Vec<(Vec<Rat>, Cmp, Rat)>,
    pub(crate) objective: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum LpOutcome {
    Optimal { value: Rat, point: Vec<Rat> },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub(crate) fn new(num_vars: usize) -> Self {
        LinearProgram {
            num_vars,
            constraints: Vec::new(),
            objective: vec![Rat::zero(); num_vars],
        }
    }

    pub(crate) fn push(&mut self, coeffs: Vec<Rat>, cmp: Cmp, rhs: Rat) {
        debug_assert_eq!(coeffs.len(), self.num_vars);
        self.constraints.push((coeffs, cmp, rhs));
    }

    pub(crate) fn solve(&self) -> LpOutcome {
        // Free variable x_j = u_j - v_j; every constraint becomes one or two `<=` rows.
        let n = self.num_vars;
        let split = |c: &[Rat], s: bool| -> Vec<Rat> {
            let mut row = Vec::with_capacity(2 * n);
            for x in c {
                row.push(if s { x.clone() } else { -x });
            }
            for x in c {
                row.push(if s { -x } else { x.clone() });
            }
            row
        };
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (c, cmp, rhs) in &self.constraints {
            if matches!(cmp, Cmp::Le | Cmp::Eq) {
                a.push(split(c, true));
                b.push(rhs.clone());
            }
            if matches!(cmp, Cmp::Ge | Cmp::Eq) {
                a.push(split(c, false));
                b.push(-rhs.clone());
            }
        }
        let c = split(&self.objective, true);
        match Tableau::solve_standard(a, b, c) {
            StandardOutcome::Infeasible => LpOutcome::Infeasible,
            StandardOutcome::Unbounded => LpOutcome::Unbounded,
            StandardOutcome::Optimal(value, x) => {
                let point = (0..n).map(|j| &x[j] - &x[n + j]).collect();
                LpOutcome::Optimal { value, point }
            }
        }
    }
}

enum StandardOutcome {
    Optimal(Rat, Vec<Rat>),
    Infeasible,
    Unbounded,
}

/// Slack form: basic[i] = b[i] - Σ_j a[i][j]·nonbasic[j]; objective z = v + Σ_j c[j]·nonbasic[j].
struct Tableau {
    a: Vec<Vec<Rat>>,
    b: Vec<Rat>,
    c: Vec<Rat>,
    v: Rat,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
}

impl Tableau {
    /// Maximize c·x subject to a·x <= b, x >= 0.
    fn solve_standard(a: Vec<Vec<Rat>>, b: Vec<Rat>, c: Vec<Rat>) -> StandardOutcome {
        let m = a.len();
        let n = c.len();
        let mut t = Tableau {
            a,
            b,
            c: c.clone(),
            v: Rat::zero(),
            basic: (n..n + m).collect(),
            nonbasic: (0..n).collect(),
        };
        let min_row = (0..m).min_by(|&i, &j| t.b[i].cmp(&t.b[j]));
        if let Some(k) = min_row.filter(|&k| t.b[k].is_negative()) {
            let x0 = n + m;
            for row in t.a.iter_mut() {
                row.push(-Rat::one());
            }
            t.nonbasic.push(x0);
            t.c = vec![Rat::zero(); n + 1];
            t.c[n] = -Rat::one();
            t.pivot(k, n);
            t.optimize();
            if t.v.is_negative() {
                return StandardOutcome::Infeasible;
            }
            if let Some(row) = t.basic.iter().position(|&x| x == x0) {
                match (0..t.nonbasic.len()).find(|&j| !t.a[row][j].is_zero()) {
                    Some(col) => t.pivot(row, col),
                    None => {
                        t.a.remove(row);
                        t.b.remove(row);
                        t.basic.remove(row);
                    }
                }
            }
            let col = t.nonbasic.iter().position(|&x| x == x0).expect("x0 is nonbasic");
            for row in t.a.iter_mut() {
                row.remove(col);
            }
            t.nonbasic.remove(col);
            t.c = vec![Rat::zero(); t.nonbasic.len()];
            t.v = Rat::zero();
            for (k, ck) in c.iter().enumerate() {
                if ck.is_zero() {
                    continue;
                }
                if let Some(j) = t.nonbasic.iter().position(|&x| x == k) {
                    t.c[j] += ck;
                } else if let Some(i) = t.basic.iter().position(|&x| x == k) {
                    t.v += ck * &t.b[i];
                    for j in 0..t.nonbasic.len() {
                        let d = ck * &t.a[i][j];
                        t.c[j] -= d;
                    }
                }
            }
        }
        if !t.optimize() {
            return StandardOutcome::Unbounded;
        }
        let mut x = vec![Rat::zero(); n];
        for (i, &var) in t.basic.iter().enumerate() {
            if var < n {
                x[var] = t.b[i].clone();
            }
        }
        StandardOutcome::Optimal(t.v, x)
    }

    fn pivot(&mut self, l: usize, e: usize) {
        let piv = self.a[l][e].clone();
        let width = self.nonbasic.len();
        self.b[l] = &self.b[l] / &piv;
        for j in 0..width {
            if j == e {
                self.a[l][j] = Rat::one() / &piv;
            } else {
                self.a[l][j] = &self.a[l][j] / &piv;
            }
        }
        let pivot_row = self.a[l].clone();
        let pivot_b = self.b[l].clone();
        for i in 0..self.a.len() {
            if i == l || self.a[i][e].is_zero() {
                continue;
            }
            let f = self.a[i][e].clone();
            self.b[i] -= &f * &pivot_b;
            for j in 0..width {
                if j == e {
                    self.a[i][j] = -(&f * &pivot_row[e]);
                } else if !pivot_row[j].is_zero() {
                    let d = &f * &pivot_row[j];
                    self.a[i][j] -= d;
                }
            }
        }
        if !self.c[e].is_zero() {
            let f = self.c[e].clone();
            self.v += &f * &pivot_b;
            for j in 0..width {
                if j == e {
                    self.c[j] = -(&f * &pivot_row[e]);
                } else if !pivot_row[j].is_zero() {
                    let d = &f * &pivot_row[j];
                    self.c[j] -= d;
                }
            }
        }
        std::mem::swap(&mut self.basic[l], &mut self.nonbasic[e]);
    }

    /// Runs simplex iterations; false means the objective is unbounded.
    fn optimize(&mut self) -> bool {
        loop {
            let entering = (0..self.nonbasic.len())
                .filter(|&j| self.c[j].is_positive())
                .min_by_key(|&j| self.nonbasic[j]);
            let Some(e) = entering else {
                return true;
            };
            let mut leaving: Option<(usize, Rat)> = None;
            for i in 0..self.a.len() {
                if !self.a[i][e].is_positive() {
                    continue;
                }
                let ratio = &self.b[i] / &self.a[i][e];
                let better = match &leaving {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basic[i] < self.basic[*li])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let Some((l, _)) = leaving else {
                return false;
            };
            self.pivot(l, e);
        }
    }
}
