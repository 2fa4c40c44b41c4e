use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use crate::error::{validation, Error, Result};
use crate::linalg::rat::{dot, format_rat, is_zero_vec, normalize_leading, parse_rat};
use crate::linalg::{rank_of_rows, solve_equations, AffineSubspace, Rat};
use crate::poset::Flat;

/// The affine hyperplane `coeffs·x = offset`, positive side `coeffs·x > offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    coeffs: Vec<Rat>,
    offset: Rat,
}

impl Hyperplane {
    pub fn new(coeffs: Vec<Rat>, offset: Rat) -> Result<Self> {
        if is_zero_vec(&coeffs) {
            return Err(validation("hyperplane has a zero linear form"));
        }
        Ok(Hyperplane { coeffs, offset })
    }

    pub fn from_ints(coeffs: &[i64], offset: i64) -> Result<Self> {
        Self::new(
            coeffs.iter().map(|&c| Rat::from_integer(c.into())).collect(),
            Rat::from_integer(offset.into()),
        )
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn offset(&self) -> &Rat {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// `coeffs·x - offset`.
    pub fn eval(&self, x: &[Rat]) -> Rat {
        dot(&self.coeffs, x) - &self.offset
    }

    /// Scaled copy with first nonzero coefficient equal to 1.
    pub fn canonical(&self) -> (Vec<Rat>, Rat) {
        let lead = self
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .cloned()
            .expect("nonzero form");
        (
            self.coeffs.iter().map(|c| c / &lead).collect(),
            &self.offset / &lead,
        )
    }

    pub fn same_set(&self, other: &Hyperplane) -> bool {
        self.canonical() == other.canonical()
    }

    pub fn negated(&self) -> Hyperplane {
        Hyperplane {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            offset: -self.offset.clone(),
        }
    }

    pub fn contains_subspace(&self, s: &AffineSubspace) -> bool {
        self.eval(&s.point).is_zero() && s.directions.iter().all(|d| dot(&self.coeffs, d).is_zero())
    }
}

/// A finite ordered set of distinct affine hyperplanes in ℝ^dim.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    dim: usize,
    hyperplanes: Vec<Hyperplane>,
    labels: Vec<String>,
}

/// The arrangement induced on a flat, with the source hyperplanes behind each trace.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub arrangement: Arrangement,
    pub fibers: Vec<Vec<usize>>,
    pub subspace: AffineSubspace,
}

/// Traces of an arrangement on an arbitrary affine subspace.
#[derive(Clone, Debug)]
pub struct Induced {
    pub restriction: Restriction,
    /// Hyperplanes containing the subspace.
    pub containing: Vec<usize>,
    /// Hyperplanes disjoint from the subspace.
    pub disjoint: Vec<usize>,
}

impl Arrangement {
    pub fn new(dim: usize, hyperplanes: Vec<Hyperplane>) -> Result<Self> {
        let labels = (1..=hyperplanes.len()).map(|i| i.to_string()).collect();
        Self::with_labels(dim, hyperplanes, labels)
    }

    pub fn with_labels(dim: usize, hyperplanes: Vec<Hyperplane>, labels: Vec<String>) -> Result<Self> {
        if dim == 0 {
            return Err(validation("ambient dimension must be at least 1"));
        }
        if labels.len() != hyperplanes.len() {
            return Err(validation("label count differs from hyperplane count"));
        }
        let mut seen = BTreeSet::new();
        for (i, h) in hyperplanes.iter().enumerate() {
            if h.dim() != dim {
                return Err(validation(format!(
                    "hyperplane {} has {} coefficients, expected {dim}",
                    i + 1,
                    h.dim()
                )));
            }
            if !seen.insert(h.canonical()) {
                return Err(validation(format!("hyperplane {} duplicates an earlier one", i + 1)));
            }
        }
        Ok(Arrangement {
            dim,
            hyperplanes,
            labels,
        })
    }

    pub fn empty(dim: usize) -> Result<Self> {
        Self::new(dim, Vec::new())
    }

    /// `{x_i - x_j = 0 : i < j}` in ℝ^ℓ, lexicographic order.
    pub fn braid(l: usize) -> Result<Self> {
        if l < 2 {
            return Err(validation("braid arrangement needs dimension at least 2"));
        }
        Self::graphical(&SimpleGraph::complete(l))
    }

    /// The hyperplanes `x_i = x_j` for the edges of `g`.
    pub fn graphical(g: &SimpleGraph) -> Result<Self> {
        let l = g.vertex_count();
        let mut hs = Vec::new();
        let mut labels = Vec::new();
        for &(i, j) in g.edges() {
            let mut c = vec![Rat::zero(); l];
            c[i] = Rat::one();
            c[j] = -Rat::one();
            hs.push(Hyperplane::new(c, Rat::zero())?);
            labels.push(format!("{}{}", i + 1, j + 1));
        }
        Self::with_labels(l, hs, labels)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    pub fn hyperplane(&self, i: usize) -> &Hyperplane {
        &self.hyperplanes[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn relabeled(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(validation("label count differs from hyperplane count"));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn coefficient_rows(&self) -> Vec<Vec<Rat>> {
        self.hyperplanes.iter().map(|h| h.coeffs.clone()).collect()
    }

    /// Removes hyperplane `i` (0-based).
    pub fn delete(&self, i: usize) -> Result<Arrangement> {
        if i >= self.len() {
            return Err(validation(format!("hyperplane index {} out of range", i + 1)));
        }
        let mut out = self.clone();
        out.hyperplanes.remove(i);
        out.labels.remove(i);
        Ok(out)
    }

    /// The sub-arrangement of hyperplanes containing `x`, labels preserved.
    pub fn localize(&self, x: &Flat) -> Arrangement {
        self.select(&x.containing)
    }

    /// The sub-arrangement with the given indices, in the given order.
    pub fn select(&self, indices: &[usize]) -> Arrangement {
        Arrangement {
            dim: self.dim,
            hyperplanes: indices.iter().map(|&i| self.hyperplanes[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i].clone()).collect(),
        }
    }

    /// The arrangement induced on `x` in the intrinsic coordinates of its direction basis.
    pub fn restrict(&self, x: &Flat) -> Result<Restriction> {
        if x.dim() == 0 {
            return Err(validation("cannot restrict to a point"));
        }
        Ok(self.induced_on(&x.subspace)?.restriction)
    }

    /// Traces on `s`: hyperplanes containing or missing `s` are dropped, coincident traces merged.
    pub fn induced_on(&self, s: &AffineSubspace) -> Result<Induced> {
        if s.ambient_dim() != self.dim {
            return Err(validation("subspace lives in a different ambient space"));
        }
        if s.dim() == 0 {
            return Err(validation("cannot induce on a point"));
        }
        let mut traces: Vec<Hyperplane> = Vec::new();
        let mut keys: Vec<(Vec<Rat>, Rat)> = Vec::new();
        let mut fibers: Vec<Vec<usize>> = Vec::new();
        let mut containing = Vec::new();
        let mut disjoint = Vec::new();
        for (i, h) in self.hyperplanes.iter().enumerate() {
            let (c, b) = s.pullback(&h.coeffs, &h.offset);
            if is_zero_vec(&c) {
                if b.is_zero() {
                    containing.push(i);
                } else {
                    disjoint.push(i);
                }
                continue;
            }
            let t = Hyperplane::new(c, b)?;
            let key = t.canonical();
            match keys.iter().position(|k| *k == key) {
                Some(j) => fibers[j].push(i),
                None => {
                    keys.push(key);
                    traces.push(t);
                    fibers.push(vec![i]);
                }
            }
        }
        let labels = fibers
            .iter()
            .map(|f| {
                f.iter()
                    .map(|&i| self.labels[i].as_str())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        let arrangement = Arrangement::with_labels(s.dim(), traces, labels)?;
        Ok(Induced {
            restriction: Restriction {
                arrangement,
                fibers,
                subspace: s.clone(),
            },
            containing,
            disjoint,
        })
    }

    /// Homogenization in ℝ^{ℓ+1}: `α(x) - b·x₀ = 0` with `x₀` the last coordinate, plus `x₀ = 0`.
    pub fn cone(&self) -> Arrangement {
        let mut hs: Vec<Hyperplane> = self
            .hyperplanes
            .iter()
            .map(|h| {
                let mut c = h.coeffs.clone();
                c.push(-h.offset.clone());
                Hyperplane {
                    coeffs: c,
                    offset: Rat::zero(),
                }
            })
            .collect();
        let mut c = vec![Rat::zero(); self.dim + 1];
        c[self.dim] = Rat::one();
        hs.push(Hyperplane {
            coeffs: c,
            offset: Rat::zero(),
        });
        let mut labels = self.labels.clone();
        labels.push("0".to_string());
        Arrangement {
            dim: self.dim + 1,
            hyperplanes: hs,
            labels,
        }
    }

    /// The common intersection of all hyperplanes, if nonempty.
    pub fn center(&self) -> Option<AffineSubspace> {
        let eqs: Vec<_> = self
            .hyperplanes
            .iter()
            .map(|h| (h.coeffs.clone(), h.offset.clone()))
            .collect();
        solve_equations(self.dim, &eqs)
    }

    /// True if all hyperplanes share a common point.
    pub fn is_central(&self) -> bool {
        self.center().is_some()
    }

    pub fn contains_origin(&self) -> bool {
        self.hyperplanes.iter().all(|h| h.offset.is_zero())
    }

    /// True if the normals span the dual space.
    pub fn is_essential(&self) -> bool {
        rank_of_rows(&self.coefficient_rows()) == self.dim
    }

    /// The same arrangement with hyperplane `i` oriented the other way.
    pub fn flip(&self, i: usize) -> Arrangement {
        let mut out = self.clone();
        out.hyperplanes[i] = out.hyperplanes[i].negated();
        out
    }

    /// Hyperplanes reordered so that position `k` holds old hyperplane `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Arrangement> {
        let mut check = perm.to_vec();
        check.sort_unstable();
        if check != (0..self.len()).collect::<Vec<_>>() {
            return Err(validation("not a permutation of the hyperplane indices"));
        }
        Ok(self.select(perm))
    }

    /// Sorted canonical forms; equal exactly when the arrangements are equal as sets.
    pub fn canonical_key(&self) -> Vec<(Vec<Rat>, Rat)> {
        let mut k: Vec<_> = self.hyperplanes.iter().map(Hyperplane::canonical).collect();
        k.sort();
        k
    }

    pub fn parse(text: &str) -> Result<Arrangement> {
        Self::parse_named(text, "<input>")
    }

    /// Parses the `.arr` format; errors carry `name` and the line number.
    pub fn parse_named(text: &str, name: &str) -> Result<Arrangement> {
        let err = |line: usize, message: String| Error::Parse {
            source_name: name.to_string(),
            line,
            message,
        };
        let mut dim: Option<usize> = None;
        let mut hs = Vec::new();
        let mut lines_of = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            match dim {
                None => {
                    if tokens.len() != 2 || tokens[0] != "dim" {
                        return Err(err(lineno, "expected header `dim <l>`".into()));
                    }
                    let l: usize = tokens[1]
                        .parse()
                        .map_err(|_| err(lineno, format!("bad dimension `{}`", tokens[1])))?;
                    if l == 0 {
                        return Err(err(lineno, "dimension must be at least 1".into()));
                    }
                    dim = Some(l);
                }
                Some(l) => {
                    if tokens.len() != l + 1 {
                        return Err(err(
                            lineno,
                            format!("expected {} numbers, found {}", l + 1, tokens.len()),
                        ));
                    }
                    let mut vals = Vec::with_capacity(l + 1);
                    for t in &tokens {
                        vals.push(
                            parse_rat(t).ok_or_else(|| err(lineno, format!("bad rational `{t}`")))?,
                        );
                    }
                    let b = vals.pop().expect("nonempty");
                    let h = Hyperplane::new(vals, b).map_err(|e| err(lineno, strip(e)))?;
                    hs.push(h);
                    lines_of.push(lineno);
                }
            }
        }
        let l = dim.ok_or_else(|| err(1, "missing header `dim <l>`".into()))?;
        let mut seen = BTreeSet::new();
        for (h, &lineno) in hs.iter().zip(&lines_of) {
            if !seen.insert(h.canonical()) {
                return Err(err(lineno, "duplicate hyperplane".into()));
            }
        }
        Arrangement::new(l, hs)
    }

    /// The `.arr` text form.
    pub fn to_text(&self) -> String {
        let mut s = format!("dim {}\n", self.dim);
        for h in &self.hyperplanes {
            let parts: Vec<String> = h
                .coeffs
                .iter()
                .chain(std::iter::once(&h.offset))
                .map(format_rat)
                .collect();
            let _ = writeln!(s, "{}", parts.join(" "));
        }
        s
    }

    /// A point where every hyperplane is nonzero, from reciprocals of consecutive primes
    /// or, failing that, points on the moment curve.
    pub fn generic_point(&self) -> Vec<Rat> {
        let primes = primes_from(2, 64 + self.dim);
        for start in 0..64 {
            let x: Vec<Rat> = (0..self.dim)
                .map(|i| Rat::new(One::one(), primes[start + i].into()))
                .collect();
            if self.hyperplanes.iter().all(|h| !h.eval(&x).is_zero()) {
                return x;
            }
        }
        let mut t = 1i64;
        loop {
            let x: Vec<Rat> = (0..self.dim)
                .map(|i| Rat::from_integer(t.pow(i as u32 + 1).into()))
                .collect();
            if self.hyperplanes.iter().all(|h| !h.eval(&x).is_zero()) {
                return x;
            }
            t += 1;
        }
    }

    /// Hyperplane orientations as seen from `x`: +1, 0, -1.
    pub fn signs_at(&self, x: &[Rat]) -> Vec<i32> {
        self.hyperplanes
            .iter()
            .map(|h| {
                let v = h.eval(x);
                if v.is_positive() {
                    1
                } else if v.is_negative() {
                    -1
                } else {
                    0
                }
            })
            .collect()
    }
}

fn strip(e: Error) -> String {
    match e {
        Error::Validation(m) => m,
        other => other.to_string(),
    }
}

fn primes_from(start: u64, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut n = start.max(2);
    while out.len() < count {
        if is_prime(n) {
            out.push(n);
        }
        n += 1;
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A simple graph on vertices `0..vertex_count`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    vertex_count: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl SimpleGraph {
    /// Edges are 0-based unordered pairs; loops and repeated edges are rejected.
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for &(i, j) in edges {
            if i >= vertex_count || j >= vertex_count {
                return Err(validation(format!("edge {}-{} out of range", i + 1, j + 1)));
            }
            if i == j {
                return Err(validation(format!("loop at vertex {}", i + 1)));
            }
            if !set.insert((i.min(j), i.max(j))) {
                return Err(validation(format!("repeated edge {}-{}", i + 1, j + 1)));
            }
        }
        Ok(SimpleGraph {
            vertex_count,
            edges: set,
        })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        SimpleGraph {
            vertex_count: n,
            edges,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn parse(text: &str) -> Result<SimpleGraph> {
        Self::parse_named(text, "<input>")
    }

    /// Parses the `.graph` format (1-based vertex numbers).
    pub fn parse_named(text: &str, name: &str) -> Result<SimpleGraph> {
        let err = |line: usize, message: String| Error::Parse {
            source_name: name.to_string(),
            line,
            message,
        };
        let mut n: Option<usize> = None;
        let mut set = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            match n {
                None => {
                    if tokens.len() != 2 || tokens[0] != "vertices" {
                        return Err(err(lineno, "expected header `vertices <l>`".into()));
                    }
                    n = Some(
                        tokens[1]
                            .parse()
                            .map_err(|_| err(lineno, format!("bad vertex count `{}`", tokens[1])))?,
                    );
                }
                Some(count) => {
                    if tokens.len() != 2 {
                        return Err(err(lineno, "expected an edge `i j`".into()));
                    }
                    let mut ends = [0usize; 2];
                    for (k, t) in tokens.iter().enumerate() {
                        let v: usize = t
                            .parse()
                            .map_err(|_| err(lineno, format!("bad vertex `{t}`")))?;
                        if v == 0 || v > count {
                            return Err(err(lineno, format!("vertex {v} out of range")));
                        }
                        ends[k] = v - 1;
                    }
                    let (i, j) = (ends[0], ends[1]);
                    if i == j {
                        return Err(err(lineno, "loop edge".into()));
                    }
                    if !set.insert((i.min(j), i.max(j))) {
                        return Err(err(lineno, "repeated edge".into()));
                    }
                }
            }
        }
        let n = n.ok_or_else(|| err(1, "missing header `vertices <l>`".into()))?;
        Ok(SimpleGraph {
            vertex_count: n,
            edges: set,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("vertices {}\n", self.vertex_count);
        for (i, j) in &self.edges {
            let _ = writeln!(s, "{} {}", i + 1, j + 1);
        }
        s
    }
}

/// Normalizes a flat's equations so that equal subspaces give equal echelon forms.
pub fn canonical_equations(rows: &[(Vec<Rat>, Rat)], dim: usize) -> Vec<Vec<Rat>> {
    let aug: Vec<Vec<Rat>> = rows
        .iter()
        .map(|(c, b)| {
            let mut r = c.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let mut red = crate::linalg::rref(aug, dim + 1).rows;
    for r in red.iter_mut() {
        normalize_leading(r);
    }
    red
}
