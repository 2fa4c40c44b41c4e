use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::rat::{dot, integer_row, Rat};
use crate::error::{validation, Result};

/// Dense row-major matrix of rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rat>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rat>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(validation(format!(
                "matrix of shape {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(RatMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Rat::one();
        }
        m
    }

    /// Builds a matrix from rows of equal length; `cols` is used when there are no rows.
    pub fn from_rows(rows: &[Vec<Rat>], cols: usize) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(validation("rows have unequal lengths"));
            }
            entries.extend(r.iter().cloned());
        }
        Self::new(rows.len(), cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Rat>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        RatMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(&self.to_rows())
    }
}

/// Rank of a list of rational rows, by fraction-free (Bareiss) elimination.
pub fn rank_of_rows(rows: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| integer_row(r)).collect();
    bareiss_rank(&mut m)
}

pub fn rank(m: &RatMatrix) -> usize {
    m.rank()
}

fn bareiss_rank(m: &mut [Vec<BigInt>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub rows: Vec<Vec<Rat>>,
    pub pivots: Vec<usize>,
}

pub fn rref(mut rows: Vec<Vec<Rat>>, cols: usize) -> Rref {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = &*x / &lead;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * y;
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    Rref { rows, pivots }
}

/// An affine subspace `point + span(directions)`; directions are linearly independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSubspace {
    pub point: Vec<Rat>,
    pub directions: Vec<Vec<Rat>>,
}

impl AffineSubspace {
    pub fn whole(ambient: usize) -> Self {
        let directions = (0..ambient)
            .map(|i| {
                let mut e = vec![Rat::zero(); ambient];
                e[i] = Rat::one();
                e
            })
            .collect();
        AffineSubspace {
            point: vec![Rat::zero(); ambient],
            directions,
        }
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.point.len()
    }

    /// The point with intrinsic coordinates `y`.
    pub fn map(&self, y: &[Rat]) -> Vec<Rat> {
        let mut x = self.point.clone();
        for (d, c) in self.directions.iter().zip(y) {
            for (xi, di) in x.iter_mut().zip(d) {
                *xi += c * di;
            }
        }
        x
    }

    /// Pulls back the affine form `coeffs·x - offset` to intrinsic coordinates.
    pub fn pullback(&self, coeffs: &[Rat], offset: &Rat) -> (Vec<Rat>, Rat) {
        let c = self.directions.iter().map(|d| dot(coeffs, d)).collect();
        (c, offset - dot(coeffs, &self.point))
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        let diff: Vec<Rat> = x.iter().zip(&self.point).map(|(a, b)| a - b).collect();
        let mut rows = self.directions.clone();
        let base = rank_of_rows(&rows);
        rows.push(diff);
        rank_of_rows(&rows) == base
    }

    /// True if `self` is contained in `other`.
    pub fn is_subset_of(&self, other: &AffineSubspace) -> bool {
        if !other.contains(&self.point) {
            return false;
        }
        let mut rows = other.directions.clone();
        let base = rank_of_rows(&rows);
        rows.extend(self.directions.iter().cloned());
        rank_of_rows(&rows) == base
    }

    /// Coordinates `y` with `map(y) == x`, if `x` lies in the subspace.
    pub fn coordinates_of(&self, x: &[Rat]) -> Option<Vec<Rat>> {
        let k = self.dim();
        let eqs: Vec<(Vec<Rat>, Rat)> = (0..self.ambient_dim())
            .map(|i| {
                let coeffs = self.directions.iter().map(|d| d[i].clone()).collect();
                (coeffs, &x[i] - &self.point[i])
            })
            .collect();
        let sol = solve_equations(k, &eqs)?;
        Some(sol.point)
    }
}

/// Solves `coeffs·x = rhs` for all given equations in `dim` unknowns.
pub fn solve_equations(dim: usize, eqs: &[(Vec<Rat>, Rat)]) -> Option<AffineSubspace> {
    let rows: Vec<Vec<Rat>> = eqs
        .iter()
        .map(|(c, b)| {
            let mut r = c.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let red = rref(rows, dim + 1);
    if red.pivots.last() == Some(&dim) {
        return None;
    }
    let mut point = vec![Rat::zero(); dim];
    for (row, &p) in red.rows.iter().zip(&red.pivots) {
        point[p] = row[dim].clone();
    }
    let free: Vec<usize> = (0..dim).filter(|c| !red.pivots.contains(c)).collect();
    let directions = free
        .iter()
        .map(|&f| {
            let mut d = vec![Rat::zero(); dim];
            d[f] = Rat::one();
            for (row, &p) in red.rows.iter().zip(&red.pivots) {
                d[p] = -row[f].clone();
            }
            d
        })
        .collect();
    Some(AffineSubspace { point, directions })
}

/// Incrementally maintained reduced echelon basis of a row space.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    rows: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the basis.
    pub fn reduce(&self, v: &[Rat]) -> Vec<Rat> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    *x -= &f * y;
                }
            }
        }
        v
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: &[Rat]) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let lead = v[p].clone();
        for x in v.iter_mut() {
            *x = &*x / &lead;
        }
        for row in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(&v) {
                    *x -= &f * y;
                }
            }
        }
        self.rows.push(v);
        self.pivots.push(p);
        true
    }

    pub fn contains(&self, v: &[Rat]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }
}

/// Rank of an integer matrix over F_p (p < 2^32).
pub fn rank_mod_p(rows: &[Vec<BigInt>], p: u64) -> usize {
    let pb = BigInt::from(p);
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    let v = ((x % &pb) + &pb) % &pb;
                    u64::try_from(&v).expect("reduced value fits")
                })
                .collect()
        })
        .collect();
    let Some(cols) = m.first().map(Vec::len) else {
        return 0;
    };
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, piv);
        let inv = pow_mod(m[r][c], p - 2, p);
        for x in m[r].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let f = row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}
