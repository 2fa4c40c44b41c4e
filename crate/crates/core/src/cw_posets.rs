//! Salvetti and Delucchi–Falk posets, order complexes, and the map between them.

use serde_json::{json, Value};

use crate::arrangement::Arrangement;
use crate::cells::{chambers, faces, sep, Cell, ChamberIndex, FacePoset, SignVector};
use crate::error::{internal, Error, Result};

/// A finite poset stored as up-set bitsets.
#[derive(Clone, Debug)]
pub struct FinitePoset {
    n: usize,
    words: usize,
    up: Vec<Vec<u64>>,
}

impl FinitePoset {
    pub fn from_relation(n: usize, le: impl Fn(usize, usize) -> bool) -> Self {
        let words = n.div_ceil(64).max(1);
        let mut up = vec![vec![0u64; words]; n];
        for (i, row) in up.iter_mut().enumerate() {
            for j in 0..n {
                if le(i, j) {
                    row[j / 64] |= 1 << (j % 64);
                }
            }
        }
        FinitePoset { n, words, up }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.up[i][j / 64] >> (j % 64) & 1 == 1
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.le(i, j)
    }

    /// Reflexivity, antisymmetry and transitivity.
    pub fn check_axioms(&self) -> Result<()> {
        for i in 0..self.n {
            if !self.le(i, i) {
                return Err(internal(format!("order is not reflexive at {i}")));
            }
            for j in 0..self.n {
                if i != j && self.le(i, j) {
                    if self.le(j, i) {
                        return Err(internal(format!("order is not antisymmetric at {i}, {j}")));
                    }
                    let closed = (0..self.words).all(|w| self.up[j][w] & !self.up[i][w] == 0);
                    if !closed {
                        return Err(internal(format!("order is not transitive through {i} <= {j}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Pairs `(i, j)` where `j` covers `i`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if self.lt(i, j) && !(0..self.n).any(|k| self.lt(i, k) && self.lt(k, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn to_json(&self, labels: &[String]) -> Value {
        json!({
            "elements": labels,
            "covers": self.covers().iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>(),
        })
    }

    pub fn to_dot(&self, name: &str, labels: &[String]) -> String {
        let mut s = format!("digraph {name} {{\n  rankdir=BT;\n");
        for (i, l) in labels.iter().enumerate() {
            s.push_str(&format!("  n{i} [label=\"{l}\"];\n"));
        }
        for (i, j) in self.covers() {
            s.push_str(&format!("  n{i} -> n{j};\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// Simplicial complex of chains of a finite poset.
#[derive(Clone, Debug)]
pub struct OrderComplex {
    pub simplices: Vec<Vec<usize>>,
}

impl OrderComplex {
    pub fn f_vector(&self) -> Vec<usize> {
        let top = self.simplices.iter().map(Vec::len).max().unwrap_or(0);
        let mut f = vec![0; top];
        for s in &self.simplices {
            f[s.len() - 1] += 1;
        }
        f
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }
}

pub const MAX_CHAINS: usize = 1_000_000;

/// All nonempty chains, each listed in increasing order.
pub fn order_complex(p: &FinitePoset) -> Result<OrderComplex> {
    let mut simplices = Vec::new();
    let mut chain = Vec::new();
    fn rec(p: &FinitePoset, chain: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) -> Result<()> {
        let last = *chain.last().expect("nonempty chain");
        for j in 0..p.len() {
            if p.lt(last, j) {
                chain.push(j);
                out.push(chain.clone());
                if out.len() > MAX_CHAINS {
                    return Err(Error::Resource(format!(
                        "order complex has more than {MAX_CHAINS} simplices"
                    )));
                }
                rec(p, chain, out)?;
                chain.pop();
            }
        }
        Ok(())
    }
    for i in 0..p.len() {
        chain.push(i);
        simplices.push(chain.clone());
        rec(p, &mut chain, &mut simplices)?;
        chain.pop();
    }
    Ok(OrderComplex { simplices })
}

/// Sal(𝒜): pairs (X, C) with X a face of the chamber C.
#[derive(Clone, Debug)]
pub struct SalvettiPoset {
    pub faces: FacePoset,
    /// `(face index, chamber face index)` into `faces.cells`.
    pub elements: Vec<(usize, usize)>,
    pub order: FinitePoset,
    ambient: usize,
}

impl SalvettiPoset {
    /// `codim X`.
    pub fn cell_dim(&self, e: usize) -> usize {
        self.ambient - self.faces.cells[self.elements[e].0].dim
    }

    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.ambient + 1];
        for e in 0..self.elements.len() {
            f[self.cell_dim(e)] += 1;
        }
        while f.len() > 1 && f.last() == Some(&0) {
            f.pop();
        }
        f
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    pub fn face(&self, e: usize) -> &Cell {
        &self.faces.cells[self.elements[e].0]
    }

    pub fn chamber(&self, e: usize) -> &Cell {
        &self.faces.cells[self.elements[e].1]
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.elements.len())
            .map(|e| format!("({},{})", self.face(e).sign, self.chamber(e).sign))
            .collect()
    }
}

pub fn salvetti_poset(a: &Arrangement) -> Result<SalvettiPoset> {
    let fp = faces(a)?;
    let l = a.dim();
    let chamber_ids: Vec<usize> = (0..fp.cells.len()).filter(|&i| fp.cells[i].dim == l).collect();
    let mut elements = Vec::new();
    for x in 0..fp.cells.len() {
        for &c in &chamber_ids {
            if fp.le(x, c) {
                elements.push((x, c));
            }
        }
    }
    let order = FinitePoset::from_relation(elements.len(), |i, j| {
        // (X', C') <= (X, C) iff X <= X' and X'∘C = C'
        let (xp, cp) = elements[i];
        let (x, c) = elements[j];
        fp.le(x, xp)
            && fp.cells[xp]
                .sign
                .compose(&fp.cells[c].sign)
                .is_ok_and(|s| s == fp.cells[cp].sign)
    });
    Ok(SalvettiPoset {
        faces: fp,
        elements,
        order,
        ambient: l,
    })
}

/// DF(𝒜): ordered chamber pairs, `(C,D) ≤ (C′,D′)` iff `d(C′,D′) = d(C′,C)+d(C,D)+d(D,D′)`.
#[derive(Clone, Debug)]
pub struct DfPoset {
    pub chambers: Vec<Cell>,
    /// `(C, D)` as indices into `chambers`; element `i·m + j` is `(i, j)`.
    pub elements: Vec<(usize, usize)>,
    pub order: FinitePoset,
}

impl DfPoset {
    pub fn element(&self, c: usize, d: usize) -> usize {
        c * self.chambers.len() + d
    }

    pub fn labels(&self) -> Vec<String> {
        self.elements
            .iter()
            .map(|&(c, d)| format!("({},{})", self.chambers[c].sign, self.chambers[d].sign))
            .collect()
    }
}

pub fn df_poset(a: &Arrangement) -> Result<DfPoset> {
    let ch = chambers(a)?;
    let m = ch.len();
    let mut dist = vec![vec![0usize; m]; m];
    for i in 0..m {
        for j in 0..m {
            dist[i][j] = sep(&ch[i].sign, &ch[j].sign)?.len();
        }
    }
    let elements: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).collect();
    let order = FinitePoset::from_relation(elements.len(), |x, y| {
        let (c, d) = elements[x];
        let (cp, dp) = elements[y];
        dist[cp][dp] == dist[cp][c] + dist[c][d] + dist[d][dp]
    });
    Ok(DfPoset {
        chambers: ch,
        elements,
        order,
    })
}

/// `(X, C) ↦ (C′, C)` with `C′ = X ∘ (−C)` the chamber opposite to `C` across `X`.
pub fn sal_to_df(sal: &SalvettiPoset, e: usize, df: &DfPoset) -> Result<usize> {
    let x = &sal.face(e).sign;
    let c = &sal.chamber(e).sign;
    let opposite: SignVector = x.compose(&c.negated())?;
    let index = ChamberIndex::new(&df.chambers);
    let ci = index
        .get(&opposite)
        .ok_or_else(|| internal(format!("opposite chamber {opposite} does not exist")))?;
    let cj = index
        .get(c)
        .ok_or_else(|| internal(format!("chamber {c} missing from the DF poset")))?;
    Ok(df.element(ci, cj))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a3() -> Arrangement {
        Arrangement::parse("dim 2\n1 -1 0\n1 0 2\n1 0 4\n0 1 2\n0 1 4\n").unwrap()
    }

    #[test]
    fn salvetti_a3() {
        let s = salvetti_poset(&a3()).unwrap();
        assert_eq!(s.f_vector(), vec![12, 30, 20]);
        assert_eq!(s.euler_characteristic(), 2);
        s.order.check_axioms().unwrap();
    }

    #[test]
    fn salvetti_single_point() {
        let a = Arrangement::parse("dim 1\n1 0\n").unwrap();
        let s = salvetti_poset(&a).unwrap();
        assert_eq!(s.f_vector(), vec![2, 2]);
        let zero_cells: Vec<usize> = (0..4).filter(|&e| s.cell_dim(e) == 0).collect();
        for e in 0..4 {
            if s.cell_dim(e) == 1 {
                for &v in &zero_cells {
                    assert!(s.order.le(v, e));
                }
            }
        }
    }

    #[test]
    fn df_single_point() {
        let a = Arrangement::parse("dim 1\n1 0\n").unwrap();
        let df = df_poset(&a).unwrap();
        // chambers sorted: "-" = L, "+" = R
        let (l, r) = (0, 1);
        let top = df.element(l, r);
        let below: Vec<(usize, usize)> = (0..4)
            .filter(|&x| df.order.le(x, top))
            .map(|x| df.elements[x])
            .collect();
        assert_eq!(below, vec![(l, l), (l, r), (r, r)]);
        df.order.check_axioms().unwrap();
    }

    #[test]
    fn df_a3_size_and_reflexivity() {
        let df = df_poset(&a3()).unwrap();
        assert_eq!(df.elements.len(), 144);
        df.order.check_axioms().unwrap();
    }

    #[test]
    fn sal_to_df_examples() {
        let a = Arrangement::parse("dim 1\n1 0\n").unwrap();
        let s = salvetti_poset(&a).unwrap();
        let df = df_poset(&a).unwrap();
        for e in 0..s.elements.len() {
            let (c_opp, c) = df.elements[sal_to_df(&s, e, &df).unwrap()];
            if s.cell_dim(e) == 0 {
                assert_eq!(c_opp, c);
            } else {
                assert_ne!(c_opp, c);
            }
        }
    }

    #[test]
    fn sal_to_df_at_triple_point_is_antipodal() {
        let a = a3();
        let s = salvetti_poset(&a).unwrap();
        let df = df_poset(&a).unwrap();
        let mut seen = 0;
        for e in 0..s.elements.len() {
            if s.face(e).sign.zero_set() != vec![0, 1, 3] {
                continue;
            }
            seen += 1;
            let (c_opp, c) = df.elements[sal_to_df(&s, e, &df).unwrap()];
            let separated = sep(&df.chambers[c_opp].sign, &df.chambers[c].sign).unwrap();
            assert_eq!(separated, vec![0, 1, 3]);
        }
        assert_eq!(seen, 6);
    }

    #[test]
    fn sal_to_df_preserves_order() {
        let a = a3();
        let s = salvetti_poset(&a).unwrap();
        let df = df_poset(&a).unwrap();
        let img: Vec<usize> = (0..s.elements.len())
            .map(|e| sal_to_df(&s, e, &df).unwrap())
            .collect();
        for i in 0..img.len() {
            for j in 0..img.len() {
                if s.order.le(i, j) {
                    assert!(df.order.le(img[i], img[j]));
                }
            }
        }
    }

    #[test]
    fn order_complex_examples() {
        let chain = FinitePoset::from_relation(3, |i, j| i <= j);
        let oc = order_complex(&chain).unwrap();
        assert_eq!(oc.f_vector(), vec![3, 3, 1]);
        let empty = FinitePoset::from_relation(0, |_, _| false);
        assert!(order_complex(&empty).unwrap().simplices.is_empty());
        let s = salvetti_poset(&a3()).unwrap();
        assert_eq!(order_complex(&s.order).unwrap().euler_characteristic(), 2);
    }
}
