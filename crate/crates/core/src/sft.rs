//! Vertex-shift representation of a subshift of finite type and the
//! locally constant potentials living on it.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, VecDeque};
use std::hash::{Hash, Hasher};

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::error::{Error, Result};

/// A subshift of finite type given by a finite directed graph.
///
/// The graph is always essential: every vertex has at least one incoming
/// and one outgoing edge. Vertices that fail this are pruned on
/// construction and listed in [`Sft::removed`]. Surviving vertices are
/// renumbered `0..vertex_count()` in their original order.
#[derive(Debug, Clone, PartialEq)]
pub struct Sft {
    n: usize,
    edges: Vec<(usize, usize)>,
    out_edges: Vec<Vec<usize>>,
    in_edges: Vec<Vec<usize>>,
    labels: Vec<String>,
    original: Vec<usize>,
    removed: Vec<usize>,
    components: Vec<Vec<usize>>,
    component_of: Vec<Option<usize>>,
    fingerprint: u64,
}

impl Sft {
    /// Builds the essential part of the graph on `vertex_count` vertices.
    pub fn build(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::build_labeled(vertex_count, edges, None)
    }

    pub fn build_labeled(
        vertex_count: usize,
        edges: &[(usize, usize)],
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::InvalidInput(
                "vertex_count must be at least 1".into(),
            ));
        }
        if let Some(labels) = &labels {
            if labels.len() != vertex_count {
                return Err(Error::InvalidInput(format!(
                    "{} labels for {} vertices",
                    labels.len(),
                    vertex_count
                )));
            }
        }
        for &(i, j) in edges {
            if i >= vertex_count || j >= vertex_count {
                return Err(Error::InvalidInput(format!(
                    "edge ({i}, {j}) references a vertex outside 0..{vertex_count}"
                )));
            }
        }
        let mut edges = edges.to_vec();
        edges.sort_unstable();
        edges.dedup();

        let mut alive = vec![true; vertex_count];
        let mut outdeg = vec![0usize; vertex_count];
        let mut indeg = vec![0usize; vertex_count];
        for &(i, j) in &edges {
            outdeg[i] += 1;
            indeg[j] += 1;
        }
        let mut outs: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
        let mut ins: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
        for &(i, j) in &edges {
            outs[i].push(j);
            ins[j].push(i);
        }
        let mut queue: VecDeque<usize> = (0..vertex_count)
            .filter(|&v| outdeg[v] == 0 || indeg[v] == 0)
            .collect();
        while let Some(v) = queue.pop_front() {
            if !alive[v] {
                continue;
            }
            alive[v] = false;
            for &j in &outs[v] {
                if alive[j] && j != v {
                    indeg[j] -= 1;
                    if indeg[j] == 0 {
                        queue.push_back(j);
                    }
                }
            }
            for &i in &ins[v] {
                if alive[i] && i != v {
                    outdeg[i] -= 1;
                    if outdeg[i] == 0 {
                        queue.push_back(i);
                    }
                }
            }
        }

        let original: Vec<usize> = (0..vertex_count).filter(|&v| alive[v]).collect();
        if original.is_empty() {
            return Err(Error::EmptySystem);
        }
        let removed: Vec<usize> = (0..vertex_count).filter(|&v| !alive[v]).collect();
        let mut renumber = vec![usize::MAX; vertex_count];
        for (new, &old) in original.iter().enumerate() {
            renumber[old] = new;
        }
        let edges: Vec<(usize, usize)> = edges
            .into_iter()
            .filter(|&(i, j)| alive[i] && alive[j])
            .map(|(i, j)| (renumber[i], renumber[j]))
            .collect();
        let labels = match labels {
            Some(l) => original.iter().map(|&v| l[v].clone()).collect(),
            None => original.iter().map(|v| v.to_string()).collect(),
        };
        Ok(Self::from_essential(
            original.len(),
            edges,
            labels,
            original,
            removed,
        ))
    }

    fn from_essential(
        n: usize,
        edges: Vec<(usize, usize)>,
        labels: Vec<String>,
        original: Vec<usize>,
        removed: Vec<usize>,
    ) -> Self {
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        for (e, &(i, j)) in edges.iter().enumerate() {
            out_edges[i].push(e);
            in_edges[j].push(e);
        }
        let components = recurrent_components(n, edges.iter().copied());
        let mut component_of = vec![None; n];
        for (c, comp) in components.iter().enumerate() {
            for &v in comp {
                component_of[v] = Some(c);
            }
        }
        let mut hasher = DefaultHasher::new();
        n.hash(&mut hasher);
        edges.hash(&mut hasher);
        let fingerprint = hasher.finish();
        Self {
            n,
            edges,
            out_edges,
            in_edges,
            labels,
            original,
            removed,
            components,
            component_of,
            fingerprint,
        }
    }

    /// Full shift on `symbols` symbols.
    pub fn full_shift(symbols: usize) -> Result<Self> {
        let edges: Vec<_> = (0..symbols)
            .flat_map(|i| (0..symbols).map(move |j| (i, j)))
            .collect();
        Self::build(symbols, &edges)
    }

    /// Golden-mean shift: two symbols, no `1 -> 1` transition.
    pub fn golden_mean() -> Self {
        Self::build(2, &[(0, 0), (0, 1), (1, 0)]).expect("golden mean is essential")
    }

    /// Single vertex with a loop.
    pub fn fixed_point() -> Self {
        Self::build(1, &[(0, 0)]).expect("loop is essential")
    }

    /// Disjoint union; vertex blocks appear in argument order.
    pub fn disjoint_union(parts: &[&Sft]) -> Result<Self> {
        let mut edges = Vec::new();
        let mut labels = Vec::new();
        let mut offset = 0;
        for (p, part) in parts.iter().enumerate() {
            edges.extend(part.edges.iter().map(|&(i, j)| (i + offset, j + offset)));
            labels.extend(part.labels.iter().map(|l| format!("{p}:{l}")));
            offset += part.n;
        }
        if offset == 0 {
            return Err(Error::EmptySystem);
        }
        Self::build_labeled(offset, &edges, Some(labels))
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges sorted lexicographically; an edge's position is its index.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn edge_index(&self, i: usize, j: usize) -> Option<usize> {
        self.edges.binary_search(&(i, j)).ok()
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Original (pre-pruning) index of each surviving vertex.
    pub fn original_indices(&self) -> &[usize] {
        &self.original
    }

    pub fn vertex_of_original(&self, original: usize) -> Option<usize> {
        self.original.binary_search(&original).ok()
    }

    /// Original indices of vertices removed by pruning.
    pub fn removed(&self) -> &[usize] {
        &self.removed
    }

    /// Strongly connected components that carry at least one cycle, each
    /// sorted, ordered by smallest vertex.
    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component_of(&self, v: usize) -> Option<usize> {
        self.component_of[v]
    }

    /// Edge indices with both endpoints in component `c`.
    pub fn component_edges(&self, c: usize) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| {
                let (i, j) = self.edges[e];
                self.component_of[i] == Some(c) && self.component_of[j] == Some(c)
            })
            .collect()
    }

    /// Identity used to detect potentials and measures built on another system.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn is_irreducible(&self) -> bool {
        self.components.len() == 1 && self.components[0].len() == self.n
    }

    /// Period of component `c`: gcd of its cycle lengths.
    pub fn period(&self, c: usize) -> usize {
        let comp = &self.components[c];
        let root = comp[0];
        let mut level = vec![usize::MAX; self.n];
        level[root] = 0;
        let mut queue = VecDeque::from([root]);
        let mut g = 0usize;
        while let Some(v) = queue.pop_front() {
            for &e in &self.out_edges[v] {
                let w = self.edges[e].1;
                if self.component_of[w] != Some(c) {
                    continue;
                }
                if level[w] == usize::MAX {
                    level[w] = level[v] + 1;
                    queue.push_back(w);
                } else {
                    g = gcd(g, (level[v] + 1).abs_diff(level[w]));
                }
            }
        }
        g
    }

    /// Irreducible and aperiodic.
    pub fn is_mixing(&self) -> bool {
        self.is_irreducible() && self.period(0) == 1
    }

    /// Dense 0-1 adjacency matrix.
    pub fn adjacency(&self) -> Vec<Vec<f64>> {
        let mut a = vec![vec![0.0; self.n]; self.n];
        for &(i, j) in &self.edges {
            a[i][j] = 1.0;
        }
        a
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Strongly connected components of a graph on `n` vertices that contain a
/// cycle (more than one vertex, or a loop).
pub(crate) fn recurrent_components(
    n: usize,
    edges: impl IntoIterator<Item = (usize, usize)>,
) -> Vec<Vec<usize>> {
    let mut graph = DiGraph::<(), ()>::with_capacity(n, 0);
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    let mut has_loop = vec![false; n];
    for (i, j) in edges {
        if i == j {
            has_loop[i] = true;
        }
        graph.add_edge(nodes[i], nodes[j], ());
    }
    let mut comps: Vec<Vec<usize>> = tarjan_scc(&graph)
        .into_iter()
        .map(|c| {
            let mut c: Vec<usize> = c.into_iter().map(|v| v.index()).collect();
            c.sort_unstable();
            c
        })
        .filter(|c| c.len() > 1 || has_loop[c[0]])
        .collect();
    comps.sort_unstable_by_key(|c| c[0]);
    comps
}

/// Locally constant potential: one real weight per edge.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocPotential {
    weights: Vec<f64>,
    window: usize,
    #[serde(skip)]
    system: u64,
}

impl LocPotential {
    pub fn new(sft: &Sft, weights: Vec<f64>) -> Result<Self> {
        Self::with_window(sft, weights, 1)
    }

    /// `window` records the cylinder depth the weights were recoded from.
    pub fn with_window(sft: &Sft, weights: Vec<f64>, window: usize) -> Result<Self> {
        if weights.len() != sft.edge_count() {
            return Err(Error::InvalidInput(format!(
                "{} weights for {} edges",
                weights.len(),
                sft.edge_count()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite weight {w}")));
        }
        if window == 0 {
            return Err(Error::InvalidInput("window must be positive".into()));
        }
        Ok(Self {
            weights,
            window,
            system: sft.fingerprint(),
        })
    }

    pub fn constant(sft: &Sft, c: f64) -> Self {
        Self::new(sft, vec![c; sft.edge_count()]).expect("constant potential")
    }

    pub fn zero(sft: &Sft) -> Self {
        Self::constant(sft, 0.0)
    }

    pub fn from_fn(sft: &Sft, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        Self::new(sft, sft.edges().iter().map(|&(i, j)| f(i, j)).collect())
    }

    /// `value` on every edge entering vertex `symbol`: the window-1
    /// indicator `value * 1[x_0 = symbol]` read along edges.
    pub fn on_symbol(sft: &Sft, symbol: usize, value: f64) -> Result<Self> {
        Self::from_fn(sft, |_, j| if j == symbol { value } else { 0.0 })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, e: usize) -> f64 {
        self.weights[e]
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn system(&self) -> u64 {
        self.system
    }

    pub fn check_system(&self, sft: &Sft) -> Result<()> {
        if self.system == sft.fingerprint() {
            Ok(())
        } else {
            Err(Error::SystemMismatch)
        }
    }

    pub fn max(&self) -> f64 {
        self.weights
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.weights.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Sup norm.
    pub fn sup_norm(&self) -> f64 {
        self.weights.iter().fold(0.0, |m, w| m.max(w.abs()))
    }

    pub fn scaled(&self, a: f64) -> Self {
        self.map(|w| a * w)
    }

    pub fn shifted(&self, c: f64) -> Self {
        self.map(|w| w + c)
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if self.system != other.system {
            return Err(Error::SystemMismatch);
        }
        Ok(Self {
            weights: self
                .weights
                .iter()
                .zip(&other.weights)
                .map(|(x, y)| a * x + b * y)
                .collect(),
            window: self.window.max(other.window),
            system: self.system,
        })
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            weights: self.weights.iter().map(|&w| f(w)).collect(),
            window: self.window,
            system: self.system,
        }
    }

    /// Replaces single weights; keeps the system binding.
    pub fn with_weights(&self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.weights.len() {
            return Err(Error::InvalidInput("weight count changed".into()));
        }
        Ok(Self {
            weights,
            window: self.window,
            system: self.system,
        })
    }

    /// Potential on a disjoint union built from per-part potentials, in the
    /// same order as [`Sft::disjoint_union`].
    pub fn concat(union: &Sft, parts: &[&LocPotential]) -> Result<Self> {
        let weights: Vec<f64> = parts
            .iter()
            .flat_map(|p| p.weights.iter().copied())
            .collect();
        Self::new(union, weights)
    }
}

/// Values of a potential on cylinders of a fixed word length, keyed by
/// vertex sequences.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CylinderTable {
    values: BTreeMap<Vec<usize>, f64>,
    default: Option<f64>,
}

impl CylinderTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Value used for words that are not listed.
    pub fn with_default(default: f64) -> Self {
        Self {
            values: BTreeMap::new(),
            default: Some(default),
        }
    }

    pub fn insert(&mut self, word: Vec<usize>, value: f64) -> &mut Self {
        self.values.insert(word, value);
        self
    }

    pub fn get(&self, word: &[usize]) -> Option<f64> {
        self.values.get(word).copied().or(self.default)
    }
}

impl FromIterator<(Vec<usize>, f64)> for CylinderTable {
    fn from_iter<T: IntoIterator<Item = (Vec<usize>, f64)>>(iter: T) -> Self {
        Self {
            values: iter.into_iter().collect(),
            default: None,
        }
    }
}

/// Recodes a window-`k` potential as an edge-weight potential.
///
/// For `k = 1` the graph is unchanged and the edge `i -> j` carries the
/// value of the word `[j]`. For `k >= 2` the new vertices are the allowed
/// words of length `k - 1`, the edges are the allowed words of length `k`,
/// and each edge carries the value of its word.
pub fn higher_block(sft: &Sft, table: &CylinderTable, k: usize) -> Result<(Sft, LocPotential)> {
    if k == 0 {
        return Err(Error::InvalidInput("window must be positive".into()));
    }
    if k == 1 {
        let weights = sft
            .edges()
            .iter()
            .map(|&(_, j)| table.get(&[j]).ok_or_else(|| Error::InvalidTable(vec![j])))
            .collect::<Result<Vec<_>>>()?;
        return Ok((sft.clone(), LocPotential::with_window(sft, weights, 1)?));
    }

    let words = allowed_words(sft, k);
    let mut prefixes: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for w in &words {
        for part in [&w[..k - 1], &w[1..]] {
            let next = prefixes.len();
            prefixes.entry(part.to_vec()).or_insert(next);
        }
    }
    // Vertex ids in lexicographic word order.
    for (idx, v) in prefixes.values_mut().enumerate() {
        *v = idx;
    }
    let mut edge_values = BTreeMap::new();
    for w in &words {
        let value = table.get(w).ok_or_else(|| Error::InvalidTable(w.clone()))?;
        edge_values.insert((prefixes[&w[..k - 1]], prefixes[&w[1..]]), value);
    }
    let labels: Vec<String> = prefixes
        .keys()
        .map(|w| {
            w.iter()
                .map(|&v| sft.labels()[v].as_str())
                .collect::<Vec<_>>()
                .join(".")
        })
        .collect();
    let edges: Vec<(usize, usize)> = edge_values.keys().copied().collect();
    let recoded = Sft::build_labeled(prefixes.len(), &edges, Some(labels))?;
    let weights = recoded
        .edges()
        .iter()
        .map(|&(i, j)| {
            let (oi, oj) = (recoded.original_indices()[i], recoded.original_indices()[j]);
            edge_values[&(oi, oj)]
        })
        .collect();
    let potential = LocPotential::with_window(&recoded, weights, k)?;
    Ok((recoded, potential))
}

/// All vertex paths with `k` vertices.
pub fn allowed_words(sft: &Sft, k: usize) -> Vec<Vec<usize>> {
    let mut words: Vec<Vec<usize>> = (0..sft.vertex_count()).map(|v| vec![v]).collect();
    for _ in 1..k {
        words = words
            .into_iter()
            .flat_map(|w| {
                let last = *w.last().expect("non-empty word");
                sft.out_edges(last)
                    .iter()
                    .map(|&e| {
                        let mut next = w.clone();
                        next.push(sft.edge(e).1);
                        next
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    words
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_two_shift() {
        let s = Sft::full_shift(2).unwrap();
        assert_eq!(s.vertex_count(), 2);
        assert_eq!(s.edge_count(), 4);
        assert!(s.is_mixing());
    }

    #[test]
    fn golden_mean_has_no_one_one() {
        let s = Sft::golden_mean();
        assert_eq!(s.edge_count(), 3);
        assert_eq!(s.edge_index(1, 1), None);
        assert!(s.is_mixing());
    }

    #[test]
    fn lone_edge_prunes_to_nothing() {
        assert_eq!(Sft::build(3, &[(0, 1)]), Err(Error::EmptySystem));
    }

    #[test]
    fn pruning_reports_removed_and_renumbers() {
        // 0 -> 1 -> 1 loop, 2 -> 0 feeds in, 3 isolated.
        let s = Sft::build(4, &[(0, 1), (1, 1), (2, 0)]).unwrap();
        assert_eq!(s.vertex_count(), 1);
        assert_eq!(s.original_indices(), &[1]);
        assert_eq!(s.removed(), &[0, 2, 3]);
        assert_eq!(s.edges(), &[(0, 0)]);
    }

    #[test]
    fn transient_vertex_survives_but_is_not_a_component() {
        // loops at 0 and 2, 0 -> 1 -> 2 path.
        let s = Sft::build(3, &[(0, 0), (0, 1), (1, 2), (2, 2)]).unwrap();
        assert_eq!(s.vertex_count(), 3);
        assert_eq!(s.components(), &[vec![0], vec![2]]);
        assert_eq!(s.component_of(1), None);
    }

    #[test]
    fn bad_index_rejected() {
        assert!(matches!(
            Sft::build(2, &[(0, 2)]),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn period_of_two_cycle() {
        let s = Sft::build(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(s.period(0), 2);
        assert!(!s.is_mixing());
    }

    #[test]
    fn window_one_recoding_keeps_graph() {
        let s = Sft::full_shift(2).unwrap();
        let table: CylinderTable = [(vec![0], 0.0), (vec![1], 0.7)].into_iter().collect();
        let (r, phi) = higher_block(&s, &table, 1).unwrap();
        assert_eq!(r, s);
        for (e, &(_, j)) in r.edges().iter().enumerate() {
            assert_eq!(phi.weight(e), if j == 1 { 0.7 } else { 0.0 });
        }
    }

    #[test]
    fn window_two_recoding_puts_weight_on_one_one() {
        let s = Sft::full_shift(2).unwrap();
        let mut table = CylinderTable::with_default(0.0);
        table.insert(vec![1, 1], -1.0);
        let (r, phi) = higher_block(&s, &table, 2).unwrap();
        assert_eq!(r.vertex_count(), 2);
        assert_eq!(r.edge_count(), 4);
        assert_eq!(phi.window(), 2);
        let e11 = r.edge_index(1, 1).unwrap();
        for e in 0..r.edge_count() {
            assert_eq!(phi.weight(e), if e == e11 { -1.0 } else { 0.0 });
        }
    }

    #[test]
    fn golden_mean_window_two() {
        let s = Sft::golden_mean();
        let (r, _) = higher_block(&s, &CylinderTable::with_default(0.0), 2).unwrap();
        assert_eq!(r.vertex_count(), 2);
        assert_eq!(r.edge_count(), 3);
    }

    #[test]
    fn missing_word_is_reported() {
        let s = Sft::full_shift(2).unwrap();
        let table: CylinderTable = [(vec![0, 0], 1.0)].into_iter().collect();
        assert!(matches!(
            higher_block(&s, &table, 2),
            Err(Error::InvalidTable(_))
        ));
    }

    #[test]
    fn potential_length_checked() {
        let s = Sft::full_shift(2).unwrap();
        assert!(LocPotential::new(&s, vec![0.0; 3]).is_err());
        assert!(LocPotential::new(&s, vec![0.0, f64::NAN, 0.0, 0.0]).is_err());
    }

    #[test]
    fn union_orders_blocks() {
        let a = Sft::full_shift(2).unwrap();
        let b = Sft::fixed_point();
        let u = Sft::disjoint_union(&[&a, &b]).unwrap();
        assert_eq!(u.vertex_count(), 3);
        assert_eq!(u.components().len(), 2);
        assert_eq!(u.edges()[4], (2, 2));
    }
}
