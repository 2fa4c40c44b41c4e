//! Galleries of chambers and the positive category Gal⁺ modulo geodesic flips.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::arrangement::Arrangement;
use crate::cells::{chambers, sep, Cell, ChamberIndex, SignVector};
use crate::error::{validation, Error, Result};

pub const MAX_PATHS: usize = 1_000_000;

/// Chambers with adjacency and the gallery metric `d = |Sep|`.
#[derive(Clone, Debug)]
pub struct ChamberGraph {
    pub chambers: Vec<Cell>,
    adj: Vec<Vec<usize>>,
    dist: Vec<Vec<usize>>,
    index: ChamberIndex,
}

impl ChamberGraph {
    pub fn new(a: &Arrangement) -> Result<Self> {
        let ch = chambers(a)?;
        let m = ch.len();
        let mut dist = vec![vec![0; m]; m];
        let mut adj = vec![Vec::new(); m];
        for i in 0..m {
            for j in 0..m {
                dist[i][j] = sep(&ch[i].sign, &ch[j].sign)?.len();
                if dist[i][j] == 1 {
                    adj[i].push(j);
                }
            }
        }
        Ok(ChamberGraph {
            index: ChamberIndex::new(&ch),
            chambers: ch,
            adj,
            dist,
        })
    }

    pub fn len(&self) -> usize {
        self.chambers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chambers.is_empty()
    }

    pub fn neighbors(&self, c: usize) -> &[usize] {
        &self.adj[c]
    }

    pub fn distance(&self, c: usize, d: usize) -> usize {
        self.dist[c][d]
    }

    pub fn chamber_of(&self, s: &SignVector) -> Result<usize> {
        self.index
            .get(s)
            .ok_or_else(|| validation(format!("{s} is not a chamber")))
    }

    /// Checks that consecutive chambers are adjacent.
    pub fn validate_path(&self, path: &[usize]) -> Result<()> {
        if path.is_empty() {
            return Err(validation("a path needs at least one chamber"));
        }
        if let Some(&c) = path.iter().find(|&&c| c >= self.len()) {
            return Err(validation(format!("chamber index {c} out of range")));
        }
        for w in path.windows(2) {
            if self.dist[w[0]][w[1]] != 1 {
                return Err(validation(format!(
                    "chambers {} and {} are not adjacent",
                    self.chambers[w[0]].sign, self.chambers[w[1]].sign
                )));
            }
        }
        Ok(())
    }

    /// `#Sep(C₀, C_k) = k`.
    pub fn is_geodesic(&self, path: &[usize]) -> Result<bool> {
        self.validate_path(path)?;
        Ok(self.is_geodesic_unchecked(path))
    }

    fn is_geodesic_unchecked(&self, path: &[usize]) -> bool {
        self.dist[path[0]][path[path.len() - 1]] == path.len() - 1
    }

    /// All geodesics from `from` to `to`, in lexicographic order.
    pub fn geodesics(&self, from: usize, to: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut path = vec![from];
        self.extend_geodesics(to, &mut path, &mut out);
        out
    }

    fn extend_geodesics(&self, to: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().expect("nonempty");
        if last == to {
            out.push(path.clone());
            return;
        }
        for &n in &self.adj[last] {
            if self.dist[n][to] + 1 == self.dist[last][to] {
                path.push(n);
                self.extend_geodesics(to, path, out);
                path.pop();
            }
        }
    }

    /// All paths of length `k` from `from` to `to`, in lexicographic order.
    pub fn paths(&self, from: usize, to: usize, k: usize) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        let mut path = vec![from];
        self.extend_paths(to, k, &mut path, &mut out)?;
        Ok(out)
    }

    fn extend_paths(
        &self,
        to: usize,
        k: usize,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        let last = *path.last().expect("nonempty");
        let remaining = k + 1 - path.len();
        if remaining == 0 {
            if last == to {
                out.push(path.clone());
                if out.len() > MAX_PATHS {
                    return Err(Error::Resource(format!("more than {MAX_PATHS} paths")));
                }
            }
            return Ok(());
        }
        for &n in &self.adj[last] {
            // prune when `to` is out of reach
            if self.dist[n][to] <= remaining - 1 {
                path.push(n);
                self.extend_paths(to, k, path, out)?;
                path.pop();
            }
        }
        Ok(())
    }

    /// Paths obtained from `path` by one geodesic flip.
    pub fn flips(&self, path: &[usize]) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        for i in 0..path.len() {
            for j in i + 2..path.len() {
                if !self.is_geodesic_unchecked(&path[i..=j]) {
                    continue;
                }
                for g in self.geodesics(path[i], path[j]) {
                    if g[..] != path[i..=j] {
                        let mut q = path[..i].to_vec();
                        q.extend_from_slice(&g);
                        q.extend_from_slice(&path[j + 1..]);
                        out.insert(q);
                    }
                }
            }
        }
        out
    }

    /// The flip class of `path`, sorted; the first entry is the class representative.
    pub fn flip_class(&self, path: &[usize]) -> Result<Vec<Vec<usize>>> {
        self.validate_path(path)?;
        let mut seen = BTreeSet::from([path.to_vec()]);
        let mut queue = VecDeque::from([path.to_vec()]);
        while let Some(p) = queue.pop_front() {
            for q in self.flips(&p) {
                if seen.insert(q.clone()) {
                    if seen.len() > MAX_PATHS {
                        return Err(Error::Resource(format!(
                            "flip class exceeds {MAX_PATHS} paths"
                        )));
                    }
                    queue.push_back(q);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// Partition of all length-`k` paths from `from` to `to` into flip classes,
    /// ordered by representative.
    pub fn flip_classes(&self, from: usize, to: usize, k: usize) -> Result<Vec<Vec<Vec<usize>>>> {
        let all = self.paths(from, to, k)?;
        let pos: HashMap<&[usize], usize> = all.iter().enumerate().map(|(i, p)| (&p[..], i)).collect();
        let mut parent: Vec<usize> = (0..all.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (i, p) in all.iter().enumerate() {
            for q in self.flips(p) {
                let j = pos[&q[..]];
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
        let mut classes: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for (i, p) in all.iter().enumerate() {
            let r = find(&mut parent, i);
            let s = *slot.entry(r).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[s].push(p.clone());
        }
        Ok(classes)
    }
}
