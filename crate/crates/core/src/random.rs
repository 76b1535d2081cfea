//! Seeded generators for random systems, potentials and measures.

use nalgebra::DMatrix;
use rand::Rng;

use crate::cycles::Cycle;
use crate::error::Result;
use crate::linalg;
use crate::measure::MarkovMeasure;
use crate::sft::{allowed_words, CylinderTable, LocPotential, Sft};

/// Random essential graph on at most `max_vertices` vertices; each ordered
/// pair is an edge with probability `density`. Redraws until something
/// survives pruning.
pub fn sft<R: Rng + ?Sized>(rng: &mut R, max_vertices: usize, density: f64) -> Sft {
    loop {
        let n = rng.gen_range(1..=max_vertices.max(1));
        let edges: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|_| rng.gen_bool(density))
            .collect();
        if let Ok(s) = Sft::build(n, &edges) {
            return s;
        }
    }
}

/// Random strongly connected and aperiodic system: a Hamiltonian cycle
/// with a loop at vertex 0, plus random extra edges.
pub fn mixing_sft<R: Rng + ?Sized>(rng: &mut R, vertices: usize, density: f64) -> Sft {
    let n = vertices.max(1);
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    edges.push((0, 0));
    for i in 0..n {
        for j in 0..n {
            if rng.gen_bool(density) {
                edges.push((i, j));
            }
        }
    }
    Sft::build(n, &edges).expect("cycle keeps every vertex")
}

/// Independent uniform weights in `[lo, hi)`.
pub fn potential<R: Rng + ?Sized>(rng: &mut R, sft: &Sft, lo: f64, hi: f64) -> LocPotential {
    let weights = (0..sft.edge_count())
        .map(|_| rng.gen_range(lo..hi))
        .collect();
    LocPotential::new(sft, weights).expect("finite weights")
}

/// Uniform values in `[lo, hi)` on every allowed word of length `k`.
pub fn cylinder_table<R: Rng + ?Sized>(
    rng: &mut R,
    sft: &Sft,
    k: usize,
    lo: f64,
    hi: f64,
) -> CylinderTable {
    allowed_words(sft, k)
        .into_iter()
        .map(|w| (w, rng.gen_range(lo..hi)))
        .collect()
}

/// Random ergodic Markov measure supported on one component: either
/// diffuse (exponential weights), peaked (high powers of uniforms), or the
/// orbit of a random simple cycle.
pub fn markov_measure<R: Rng + ?Sized>(sft: &Sft, rng: &mut R) -> Result<MarkovMeasure> {
    let c = rng.gen_range(0..sft.components().len());
    let verts = &sft.components()[c];
    let edges = sft.component_edges(c);
    let mode = rng.gen_range(0..3);
    if mode == 2 {
        return MarkovMeasure::uniform_on_cycle(sft, &random_cycle(sft, rng, c)?);
    }
    let raw: Vec<f64> = edges
        .iter()
        .map(|_| {
            let u: f64 = 1.0 - rng.gen::<f64>();
            if mode == 0 {
                -u.ln() + 1e-3
            } else {
                u.powi(8) + 1e-12
            }
        })
        .collect();
    let local = |v: usize| verts.binary_search(&v).expect("vertex in component");
    let k = verts.len();
    let mut p = DMatrix::zeros(k, k);
    for (&e, &x) in edges.iter().zip(&raw) {
        let (i, j) = sft.edge(e);
        p[(local(i), local(j))] = x;
    }
    let sums: Vec<f64> = (0..k).map(|i| p.row(i).sum()).collect();
    for (i, s) in sums.iter().enumerate() {
        p.row_mut(i).scale_mut(1.0 / s);
    }
    let pi = linalg::stationary(&p)?;
    let mut stationary = vec![0.0; sft.vertex_count()];
    for (a, &v) in verts.iter().enumerate() {
        stationary[v] = pi[a];
    }
    let probs = edges
        .iter()
        .zip(&raw)
        .map(|(&e, &x)| (e, x / sums[local(sft.edge(e).0)]));
    MarkovMeasure::from_parts(sft, probs, stationary)
}

/// Random walk inside component `c` until a vertex repeats.
fn random_cycle<R: Rng + ?Sized>(sft: &Sft, rng: &mut R, c: usize) -> Result<Cycle> {
    let verts = &sft.components()[c];
    let mut path = vec![verts[rng.gen_range(0..verts.len())]];
    loop {
        let v = *path.last().expect("non-empty");
        let inside: Vec<usize> = sft
            .out_edges(v)
            .iter()
            .map(|&e| sft.edge(e).1)
            .filter(|&w| sft.component_of(w) == Some(c))
            .collect();
        let next = inside[rng.gen_range(0..inside.len())];
        if let Some(pos) = path.iter().position(|&x| x == next) {
            return Cycle::from_vertices(sft, &path[pos..]);
        }
        path.push(next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_are_reproducible() {
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = sft(&mut rng, 6, 0.4);
            let phi = potential(&mut rng, &s, -1.0, 1.0);
            let m = markov_measure(&s, &mut rng).unwrap();
            (s, phi, m)
        };
        assert_eq!(draw(3), draw(3));
    }

    #[test]
    fn random_measures_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let s = sft(&mut rng, 7, 0.35);
            let m = markov_measure(&s, &mut rng).unwrap();
            assert!(m.entropy() <= (s.vertex_count() as f64).ln() + 1e-12);
        }
    }

    #[test]
    fn mixing_generator_mixes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 1..8 {
            assert!(mixing_sft(&mut rng, n, 0.2).is_mixing());
        }
    }
}
