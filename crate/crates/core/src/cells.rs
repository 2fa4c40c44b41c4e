//! Sign vectors, chambers, faces, the adjacency graph and the sphere criterion.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_traits::Signed;
use serde_json::{json, Value};

use crate::arrangement::Arrangement;
use crate::error::{internal, validation, Error, Result};
use crate::linalg::rat::format_rat;
use crate::linalg::{feasible_point, is_bounded, Rat, Relation, StrictSystem};
use crate::poset::intersection_poset;

/// Declaration order gives `Neg < Zero < Pos`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of(x: &Rat) -> Sign {
        if x.is_positive() {
            Sign::Pos
        } else if x.is_negative() {
            Sign::Neg
        } else {
            Sign::Zero
        }
    }

    pub fn negate(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
            Sign::Pos => Sign::Neg,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Neg => '-',
            Sign::Zero => '0',
            Sign::Pos => '+',
        }
    }

    pub fn from_char(c: char) -> Option<Sign> {
        match c {
            '-' => Some(Sign::Neg),
            '0' => Some(Sign::Zero),
            '+' => Some(Sign::Pos),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(Vec<Sign>);

impl SignVector {
    pub fn new(signs: Vec<Sign>) -> Self {
        SignVector(signs)
    }

    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| Sign::from_char(c).ok_or_else(|| validation(format!("bad sign character `{c}`"))))
            .collect::<Result<Vec<_>>>()
            .map(SignVector)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Sign {
        self.0[i]
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0
    }

    pub fn zero_set(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] == Sign::Zero).collect()
    }

    pub fn is_chamber(&self) -> bool {
        !self.0.contains(&Sign::Zero)
    }

    pub fn negated(&self) -> SignVector {
        SignVector(self.0.iter().map(|s| s.negate()).collect())
    }

    pub fn with(&self, i: usize, s: Sign) -> SignVector {
        let mut v = self.0.clone();
        v[i] = s;
        SignVector(v)
    }

    /// `(x∘y)_i = x_i` if nonzero, else `y_i`.
    pub fn compose(&self, y: &SignVector) -> Result<SignVector> {
        if self.len() != y.len() {
            return Err(validation("sign vectors have different lengths"));
        }
        Ok(SignVector(
            self.0
                .iter()
                .zip(&y.0)
                .map(|(&a, &b)| if a == Sign::Zero { b } else { a })
                .collect(),
        ))
    }

    /// True if `self` is a face of `other`: every entry is zero or agrees.
    pub fn is_face_of(&self, other: &SignVector) -> bool {
        self.len() == other.len()
            && self
                .0
                .iter()
                .zip(&other.0)
                .all(|(&a, &b)| a == Sign::Zero || a == b)
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

/// A relatively open cell with a witness point in it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub sign: SignVector,
    pub witness: Vec<Rat>,
    pub dim: usize,
}

impl Cell {
    pub fn to_json(&self) -> Value {
        json!({
            "sign": self.sign.to_string(),
            "witness": self.witness.iter().map(format_rat).collect::<Vec<_>>(),
            "dim": self.dim,
        })
    }
}

pub fn sign_vector(a: &Arrangement, x: &[Rat]) -> SignVector {
    SignVector(a.hyperplanes().iter().map(|h| Sign::of(&h.eval(x))).collect())
}

/// The system `σ_i α_i > 0` (equality where `σ_i = 0`).
pub fn cell_system(a: &Arrangement, sign: &SignVector) -> StrictSystem {
    let mut sys = StrictSystem::new(a.dim());
    for (h, &s) in a.hyperplanes().iter().zip(sign.signs()) {
        let (c, b) = (h.coeffs().to_vec(), h.offset().clone());
        let r = match s {
            Sign::Pos => sys.push_strict(c, b, Relation::Greater),
            Sign::Neg => sys.push_strict(c, b, Relation::Less),
            Sign::Zero => sys.push_equality(c, b),
        };
        r.expect("hyperplane forms are nonzero and of the right length");
    }
    sys
}

pub const MAX_CHAMBER_HYPERPLANES: usize = 24;

/// All chambers, sorted by sign vector.
pub fn chambers(a: &Arrangement) -> Result<Vec<Cell>> {
    if a.len() > MAX_CHAMBER_HYPERPLANES {
        return Err(Error::Resource(format!(
            "{} hyperplanes exceeds the chamber enumeration limit of {MAX_CHAMBER_HYPERPLANES}",
            a.len()
        )));
    }
    let seed = a.generic_point();
    let start = sign_vector(a, &seed);
    let mut found: HashMap<SignVector, Vec<Rat>> = HashMap::new();
    found.insert(start.clone(), seed);
    let mut queue = VecDeque::from([start]);
    while let Some(sigma) = queue.pop_front() {
        for i in 0..a.len() {
            let flipped = sigma.with(i, sigma.get(i).negate());
            if found.contains_key(&flipped) {
                continue;
            }
            if feasible_point(&cell_system(a, &sigma.with(i, Sign::Zero))).is_none() {
                continue;
            }
            let w = feasible_point(&cell_system(a, &flipped))
                .ok_or_else(|| internal(format!("chamber {flipped} behind a facet is empty")))?;
            found.insert(flipped.clone(), w);
            queue.push_back(flipped);
        }
    }
    let mut out: Vec<Cell> = found
        .into_iter()
        .map(|(sign, witness)| Cell {
            sign,
            witness,
            dim: a.dim(),
        })
        .collect();
    out.sort_by(|x, y| x.sign.cmp(&y.sign));
    Ok(out)
}

/// Chambers with compact closure.
pub fn bounded_chambers(a: &Arrangement) -> Result<Vec<Cell>> {
    if !a.is_essential() {
        return Err(validation("bounded chambers are only counted for essential arrangements"));
    }
    let mut out = Vec::new();
    for c in chambers(a)? {
        if is_bounded(&cell_system(a, &c.sign))? {
            out.push(c);
        }
    }
    Ok(out)
}

/// Indices where the two sign vectors are strictly opposite.
pub fn sep(c1: &SignVector, c2: &SignVector) -> Result<Vec<usize>> {
    if c1.len() != c2.len() {
        return Err(validation("sign vectors have different lengths"));
    }
    Ok((0..c1.len())
        .filter(|&i| {
            let (x, y) = (c1.get(i), c2.get(i));
            x != Sign::Zero && x == y.negate()
        })
        .collect())
}

/// Lookup from sign vector to position in a sorted chamber list.
#[derive(Clone, Debug)]
pub struct ChamberIndex {
    map: HashMap<SignVector, usize>,
}

impl ChamberIndex {
    pub fn new(chambers: &[Cell]) -> Self {
        ChamberIndex {
            map: chambers
                .iter()
                .enumerate()
                .map(|(i, c)| (c.sign.clone(), i))
                .collect(),
        }
    }

    pub fn get(&self, s: &SignVector) -> Option<usize> {
        self.map.get(s).copied()
    }
}

/// All faces, sorted by dimension and then sign vector.
#[derive(Clone, Debug)]
pub struct FacePoset {
    pub cells: Vec<Cell>,
}

impl FacePoset {
    /// Closure order: `cells[i]` is a face of `cells[j]`.
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.cells[i].sign.is_face_of(&self.cells[j].sign)
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let top = self.cells.iter().map(|c| c.dim).max().unwrap_or(0);
        let mut f = vec![0; top + 1];
        for c in &self.cells {
            f[c.dim] += 1;
        }
        f
    }

    pub fn chambers(&self) -> impl Iterator<Item = &Cell> {
        let top = self.cells.iter().map(|c| c.dim).max().unwrap_or(0);
        self.cells.iter().filter(move |c| c.dim == top)
    }
}

/// Enumerates chambers of every restriction and lifts them.
pub fn faces(a: &Arrangement) -> Result<FacePoset> {
    let poset = intersection_poset(a);
    let mut cells = Vec::new();
    for flat in poset.flats() {
        if flat.dim() == 0 {
            cells.push(Cell {
                sign: sign_vector(a, &flat.subspace.point),
                witness: flat.subspace.point.clone(),
                dim: 0,
            });
            continue;
        }
        let r = a.restrict(flat)?;
        for c in chambers(&r.arrangement)? {
            let x = flat.subspace.map(&c.witness);
            cells.push(Cell {
                sign: sign_vector(a, &x),
                witness: x,
                dim: flat.dim(),
            });
        }
    }
    cells.sort_by(|x, y| x.dim.cmp(&y.dim).then_with(|| x.sign.cmp(&y.sign)));
    Ok(FacePoset { cells })
}

/// Chambers joined when they differ across exactly one hyperplane.
#[derive(Clone, Debug)]
pub struct AdjacencyGraph {
    pub chambers: Vec<Cell>,
    pub edges: Vec<(usize, usize)>,
}

pub fn adjacency_graph(a: &Arrangement) -> Result<AdjacencyGraph> {
    let ch = chambers(a)?;
    let mut edges = Vec::new();
    for i in 0..ch.len() {
        for j in i + 1..ch.len() {
            if sep(&ch[i].sign, &ch[j].sign)?.len() == 1 {
                edges.push((i, j));
            }
        }
    }
    Ok(AdjacencyGraph {
        chambers: ch,
        edges,
    })
}

impl AdjacencyGraph {
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.chambers.len()];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        if self.chambers.is_empty() {
            return true;
        }
        let adj = self.neighbors();
        let mut seen = vec![false; adj.len()];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph chambers {\n");
        for (i, c) in self.chambers.iter().enumerate() {
            s.push_str(&format!("  c{i} [label=\"{}\"];\n", c.sign));
        }
        for (i, j) in &self.edges {
            s.push_str(&format!("  c{i} -- c{j};\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// True iff the open cone `⋂ H_i^{ε_i}` is nonempty.
pub fn sphere_is_trivial(a: &Arrangement, eps: &SignVector) -> Result<bool> {
    if a.dim() < 3 {
        return Err(validation("the sphere criterion needs dimension at least 3"));
    }
    if !a.is_central() {
        return Err(validation("the sphere criterion needs a central arrangement"));
    }
    if !a.is_essential() {
        return Err(validation("the sphere criterion needs an essential arrangement"));
    }
    if eps.len() != a.len() || !eps.is_chamber() {
        return Err(validation(format!(
            "expected {} signs from {{+,-}}, got `{eps}`",
            a.len()
        )));
    }
    Ok(feasible_point(&cell_system(a, eps)).is_some())
}

/// Dimension of a cell from its zero set.
pub fn cell_dim(a: &Arrangement, sign: &SignVector) -> usize {
    let rows: Vec<Vec<Rat>> = sign
        .zero_set()
        .iter()
        .map(|&i| a.hyperplane(i).coeffs().to_vec())
        .collect();
    a.dim() - crate::linalg::rank_of_rows(&rows)
}
