//! Simple-cycle enumeration (Johnson's algorithm) with a budget.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sft::{recurrent_components, LocPotential, Sft};
use crate::tol;

/// A simple cycle, rotated to start at its smallest vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Cycle {
    vertices: Vec<usize>,
    #[serde(skip)]
    edges: Vec<usize>,
}

impl Cycle {
    /// Cycle through `vertices` in order, closing back to the first.
    pub fn from_vertices(sft: &Sft, vertices: &[usize]) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidInput("empty cycle".into()));
        }
        let start = (0..vertices.len())
            .min_by_key(|&i| vertices[i])
            .expect("non-empty");
        let mut rotated: Vec<usize> = vertices[start..].to_vec();
        rotated.extend_from_slice(&vertices[..start]);
        let mut seen = rotated.clone();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("cycle repeats a vertex".into()));
        }
        let edges = (0..rotated.len())
            .map(|k| {
                let (i, j) = (rotated[k], rotated[(k + 1) % rotated.len()]);
                sft.edge_index(i, j)
                    .ok_or_else(|| Error::InvalidInput(format!("no edge {i} -> {j}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            vertices: rotated,
            edges,
        })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Edge indices, `edges()[k]` leaving `vertices()[k]`.
    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn sum(&self, phi: &LocPotential) -> f64 {
        self.edges.iter().map(|&e| phi.weight(e)).sum()
    }

    pub fn mean(&self, phi: &LocPotential) -> f64 {
        self.sum(phi) / self.len() as f64
    }
}

/// All simple cycles of a system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleSet {
    cycles: Vec<Cycle>,
}

impl CycleSet {
    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.cycles.iter().map(Cycle::len).collect()
    }

    pub fn means(&self, phi: &LocPotential) -> Vec<f64> {
        self.cycles.iter().map(|c| c.mean(phi)).collect()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Cycle> {
        self.cycles.iter()
    }
}

impl<'a> IntoIterator for &'a CycleSet {
    type Item = &'a Cycle;
    type IntoIter = std::slice::Iter<'a, Cycle>;

    fn into_iter(self) -> Self::IntoIter {
        self.cycles.iter()
    }
}

pub fn enumerate_simple_cycles(sft: &Sft) -> Result<CycleSet> {
    enumerate_simple_cycles_with_cap(sft, tol::CYCLE_BUDGET)
}

/// Fails with [`Error::CycleBudgetExceeded`] as soon as more than `cap`
/// cycles have been found.
pub fn enumerate_simple_cycles_with_cap(sft: &Sft, cap: usize) -> Result<CycleSet> {
    let n = sft.vertex_count();
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|v| sft.out_edges(v).iter().map(|&e| sft.edge(e).1).collect())
        .collect();
    let mut search = Johnson {
        sft,
        succ: &succ,
        allowed: vec![false; n],
        blocked: vec![false; n],
        block_map: vec![Vec::new(); n],
        stack: Vec::new(),
        out: Vec::new(),
        cap,
    };
    for s in 0..n {
        // Strong component of s among vertices >= s.
        let sub = recurrent_components(
            n,
            sft.edges()
                .iter()
                .copied()
                .filter(|&(i, j)| i >= s && j >= s),
        );
        let Some(comp) = sub.into_iter().find(|c| c.binary_search(&s).is_ok()) else {
            continue;
        };
        search.allowed.iter_mut().for_each(|a| *a = false);
        for &v in &comp {
            search.allowed[v] = true;
            search.blocked[v] = false;
            search.block_map[v].clear();
        }
        search.circuit(s, s)?;
    }
    Ok(CycleSet { cycles: search.out })
}

struct Johnson<'a> {
    sft: &'a Sft,
    succ: &'a [Vec<usize>],
    allowed: Vec<bool>,
    blocked: Vec<bool>,
    block_map: Vec<Vec<usize>>,
    stack: Vec<usize>,
    out: Vec<Cycle>,
    cap: usize,
}

impl Johnson<'_> {
    fn circuit(&mut self, v: usize, s: usize) -> Result<bool> {
        let mut found = false;
        self.stack.push(v);
        self.blocked[v] = true;
        for k in 0..self.succ[v].len() {
            let w = self.succ[v][k];
            if !self.allowed[w] {
                continue;
            }
            if w == s {
                if self.out.len() == self.cap {
                    return Err(Error::CycleBudgetExceeded { cap: self.cap });
                }
                let cycle = Cycle::from_vertices(self.sft, &self.stack)?;
                self.out.push(cycle);
                found = true;
            } else if !self.blocked[w] && self.circuit(w, s)? {
                found = true;
            }
        }
        if found {
            self.unblock(v);
        } else {
            for k in 0..self.succ[v].len() {
                let w = self.succ[v][k];
                if self.allowed[w] && !self.block_map[w].contains(&v) {
                    self.block_map[w].push(v);
                }
            }
        }
        self.stack.pop();
        Ok(found)
    }

    fn unblock(&mut self, u: usize) {
        let mut work = vec![u];
        while let Some(x) = work.pop() {
            if self.blocked[x] {
                self.blocked[x] = false;
                work.append(&mut self.block_map[x]);
            }
        }
    }
}
