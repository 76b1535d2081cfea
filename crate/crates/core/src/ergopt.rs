//! Zero-temperature quantities: maximal ergodic averages, the maximizing
//! subgraph, residual entropy, the slant asymptote and freezing.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::cycles::{enumerate_simple_cycles_with_cap, Cycle};
use crate::error::{Error, Result};
use crate::linalg;
use crate::measure::MarkovMeasure;
use crate::sft::{recurrent_components, LocPotential, Sft};
use crate::tol;
use crate::transfer::{self, component_pressures};

/// Below this the asymptote gap is recomputed by perturbation instead of
/// by subtracting two nearly equal pressures.
const REFINE_BELOW: f64 = 1e-6;

/// Karp's maximum cycle mean of a strongly connected graph on `n` vertices.
pub(crate) fn karp(n: usize, arcs: &[(usize, usize, f64)]) -> f64 {
    let mut d = vec![vec![f64::NEG_INFINITY; n]; n + 1];
    d[0][0] = 0.0;
    for k in 1..=n {
        let (prev, cur) = d.split_at_mut(k);
        let (prev, cur) = (&prev[k - 1], &mut cur[0]);
        for &(i, j, w) in arcs {
            if prev[i] > f64::NEG_INFINITY {
                cur[j] = cur[j].max(prev[i] + w);
            }
        }
    }
    (0..n)
        .filter(|&v| d[n][v] > f64::NEG_INFINITY)
        .map(|v| {
            (0..n)
                .filter(|&k| d[k][v] > f64::NEG_INFINITY)
                .map(|k| (d[n][v] - d[k][v]) / (n - k) as f64)
                .fold(f64::INFINITY, f64::min)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Longest-path potentials from a virtual source for weights `w - lambda`:
/// `w_ij - lambda + u_i - u_j <= 0` on every arc once no cycle has mean
/// above `lambda`.
pub(crate) fn longest_path_potentials(
    n: usize,
    arcs: &[(usize, usize, f64)],
    lambda: f64,
) -> Vec<f64> {
    let mut u = vec![0.0; n];
    for _ in 0..n {
        let mut changed = false;
        for &(i, j, w) in arcs {
            let cand = u[i] + w - lambda;
            if cand > u[j] {
                u[j] = cand;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    u
}

fn scale(phi: &LocPotential) -> f64 {
    phi.sup_norm().max(1.0)
}

/// Best cycle among one cycle per tight piece of a component.
fn component_witness(sft: &Sft, phi: &LocPotential, c: usize) -> Result<Cycle> {
    let verts = &sft.components()[c];
    let local = |v: usize| verts.binary_search(&v).expect("vertex in component");
    let arcs: Vec<(usize, usize, f64)> = sft
        .component_edges(c)
        .into_iter()
        .map(|e| {
            let (i, j) = sft.edge(e);
            (local(i), local(j), phi.weight(e))
        })
        .collect();
    let lambda = karp(verts.len(), &arcs);
    let u = longest_path_potentials(verts.len(), &arcs, lambda);
    let slack = tol::TIGHT * scale(phi);
    let tight: Vec<(usize, usize)> = arcs
        .iter()
        .filter(|&&(i, j, w)| w - lambda + u[i] - u[j] >= -slack)
        .map(|&(i, j, _)| (i, j))
        .collect();
    let mut best: Option<(f64, Cycle)> = None;
    for piece in recurrent_components(verts.len(), tight.iter().copied()) {
        let cycle = walk_cycle(&piece, &tight);
        let cycle =
            Cycle::from_vertices(sft, &cycle.iter().map(|&v| verts[v]).collect::<Vec<_>>())?;
        let mean = cycle.mean(phi);
        if best.as_ref().is_none_or(|b| mean > b.0) {
            best = Some((mean, cycle));
        }
    }
    best.map(|b| b.1)
        .ok_or_else(|| Error::InvariantViolation(format!("no tight cycle in component {c}")))
}

/// Follows arcs inside `piece` from its first vertex until a vertex repeats.
fn walk_cycle(piece: &[usize], arcs: &[(usize, usize)]) -> Vec<usize> {
    let inside = |v: usize| piece.binary_search(&v).is_ok();
    let mut path = vec![piece[0]];
    loop {
        let v = *path.last().expect("non-empty");
        let next = arcs
            .iter()
            .find(|&&(i, j)| i == v && inside(j))
            .map(|&(_, j)| j)
            .expect("piece is strongly connected");
        if let Some(pos) = path.iter().position(|&x| x == next) {
            return path.split_off(pos);
        }
        path.push(next);
    }
}

/// Maximal ergodic average with a witness cycle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErgodicMax {
    pub value: f64,
    pub witness: Cycle,
    /// Per-component maximal cycle means.
    pub component_means: Vec<f64>,
    /// Components whose mean is within `tol::TIGHT` of `value`.
    pub tied_components: Vec<usize>,
}

/// `Max(phi)`: the largest mean weight of a cycle, component by component.
/// The value is the witness cycle's own mean, so it agrees bit for bit
/// with a direct evaluation over that cycle.
pub fn max_ergodic_average(sft: &Sft, phi: &LocPotential) -> Result<ErgodicMax> {
    phi.check_system(sft)?;
    let witnesses = (0..sft.components().len())
        .map(|c| component_witness(sft, phi, c))
        .collect::<Result<Vec<_>>>()?;
    let component_means: Vec<f64> = witnesses.iter().map(|c| c.mean(phi)).collect();
    let (best, &value) =
        component_means
            .iter()
            .enumerate()
            .fold((0, &f64::NEG_INFINITY), |acc, (c, m)| {
                if *m > *acc.1 {
                    (c, m)
                } else {
                    acc
                }
            });
    let slack = tol::TIGHT * scale(phi);
    let tied_components = (0..component_means.len())
        .filter(|&c| component_means[c] >= value - slack)
        .collect();
    Ok(ErgodicMax {
        value,
        witness: witnesses[best].clone(),
        component_means,
        tied_components,
    })
}

/// Global calibration: reduced weights `w - Max + u_i - u_j <= 0`, with
/// tight edges snapped to exactly zero.
#[derive(Debug, Clone)]
struct Calibration {
    max: ErgodicMax,
    potentials: Vec<f64>,
    reduced: Vec<f64>,
    tight: Vec<bool>,
}

fn calibrate(sft: &Sft, phi: &LocPotential) -> Result<Calibration> {
    let max = max_ergodic_average(sft, phi)?;
    let arcs: Vec<(usize, usize, f64)> = sft
        .edges()
        .iter()
        .zip(phi.weights())
        .map(|(&(i, j), &w)| (i, j, w))
        .collect();
    let u = longest_path_potentials(sft.vertex_count(), &arcs, max.value);
    let slack = tol::TIGHT * scale(phi);
    let mut reduced = Vec::with_capacity(arcs.len());
    let mut tight = Vec::with_capacity(arcs.len());
    for &(i, j, w) in &arcs {
        let r = (w - max.value + u[i] - u[j]).min(0.0);
        let t = r >= -slack;
        tight.push(t);
        reduced.push(if t { 0.0 } else { r });
    }
    Ok(Calibration {
        max,
        potentials: u,
        reduced,
        tight,
    })
}

/// Edges that are tight and lie on a cycle of tight edges.
fn tight_cycle_edges(sft: &Sft, cal: &Calibration) -> Vec<usize> {
    let tight: Vec<(usize, usize)> = sft
        .edges()
        .iter()
        .zip(&cal.tight)
        .filter(|(_, &t)| t)
        .map(|(&e, _)| e)
        .collect();
    let pieces = recurrent_components(sft.vertex_count(), tight.iter().copied());
    let mut piece_of = vec![usize::MAX; sft.vertex_count()];
    for (p, piece) in pieces.iter().enumerate() {
        for &v in piece {
            piece_of[v] = p;
        }
    }
    (0..sft.edge_count())
        .filter(|&e| {
            let (i, j) = sft.edge(e);
            cal.tight[e] && piece_of[i] != usize::MAX && piece_of[i] == piece_of[j]
        })
        .collect()
}

/// The subsystem carrying every `phi`-maximizing measure.
#[derive(Debug, Clone, PartialEq)]
pub struct MaximizingSubgraph {
    pub sub_sft: Sft,
    /// Calibration `u`, one value per vertex of the parent.
    pub vertex_potentials: Vec<f64>,
    pub max_mean: f64,
    /// Parent edge index of each edge of `sub_sft`.
    pub parent_edges: Vec<usize>,
    /// Parent vertex index of each vertex of `sub_sft`.
    pub parent_vertices: Vec<usize>,
}

pub fn maximizing_subgraph(sft: &Sft, phi: &LocPotential) -> Result<MaximizingSubgraph> {
    phi.check_system(sft)?;
    let cal = calibrate(sft, phi)?;
    Ok(subgraph_of(sft, &cal))
}

fn subgraph_of(sft: &Sft, cal: &Calibration) -> MaximizingSubgraph {
    let edges: Vec<(usize, usize)> = tight_cycle_edges(sft, cal)
        .into_iter()
        .map(|e| sft.edge(e))
        .collect();
    let sub_sft = Sft::build_labeled(sft.vertex_count(), &edges, Some(sft.labels().to_vec()))
        .expect("a maximal cycle is always tight");
    let parent_vertices = sub_sft.original_indices().to_vec();
    let parent_edges = sub_sft
        .edges()
        .iter()
        .map(|&(i, j)| {
            sft.edge_index(parent_vertices[i], parent_vertices[j])
                .expect("sub edge exists in parent")
        })
        .collect();
    MaximizingSubgraph {
        sub_sft,
        vertex_potentials: cal.potentials.clone(),
        max_mean: cal.max.value,
        parent_edges,
        parent_vertices,
    }
}

/// Topological entropy of an unweighted system.
fn topological_entropy(sft: &Sft) -> Result<f64> {
    Ok(transfer::pressure(sft, &LocPotential::zero(sft), 0.0)?.max(0.0))
}

/// `h_inf(phi)`: the entropy of the maximizing subgraph.
pub fn residual_entropy(sft: &Sft, phi: &LocPotential) -> Result<f64> {
    topological_entropy(&maximizing_subgraph(sft, phi)?.sub_sft)
}

/// The slant asymptote `f(beta) = beta * max_mean + residual_entropy`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoteData {
    pub max_mean: f64,
    pub residual_entropy: f64,
}

impl AsymptoteData {
    pub fn at(&self, beta: f64) -> f64 {
        beta * self.max_mean + self.residual_entropy
    }

    pub fn gap_at(&self, sft: &Sft, phi: &LocPotential, beta: f64) -> Result<f64> {
        asymptote_gap(sft, phi, beta)
    }
}

pub fn asymptote(sft: &Sft, phi: &LocPotential) -> Result<AsymptoteData> {
    let sub = maximizing_subgraph(sft, phi)?;
    Ok(AsymptoteData {
        max_mean: sub.max_mean,
        residual_entropy: topological_entropy(&sub.sub_sft)?,
    })
}

/// Perturbative evaluation of the gap for the component holding the
/// unique entropy-maximal tight piece `C`.
///
/// With calibrated entries `M = exp(beta * reduced)`, the restriction of
/// `M` to `C` is `A + E` where `A` is the 0-1 tight adjacency (Perron data
/// `rho0, l, r`) and `E` holds the non-tight chords. Eliminating the rest
/// `R` of the component gives the effective matrix
/// `K(lambda) = A + E + M_CR (lambda - M_RR)^-1 M_RC`, and the root is
/// `rho0 + delta` with `delta = l^T (K - A) x` for the perturbed vector
/// `x`. Every term is non-negative, so `delta` keeps full relative
/// precision long after `ln rho - ln rho0` has cancelled to zero.
#[derive(Debug, Clone)]
struct Refiner {
    component: usize,
    c: Vec<usize>,
    r: Vec<usize>,
    rho0: f64,
    left: DVector<f64>,
    right: DVector<f64>,
    bordered: nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    /// `(local row, local col, reduced weight)` per block.
    cc: Vec<(usize, usize, f64)>,
    cr: Vec<(usize, usize, f64)>,
    rc: Vec<(usize, usize, f64)>,
    rr: Vec<(usize, usize, f64)>,
}

impl Refiner {
    fn new(sft: &Sft, cal: &Calibration, sub: &MaximizingSubgraph) -> Result<Option<Self>> {
        let pieces = sub.sub_sft.components();
        let mut entropies = Vec::with_capacity(pieces.len());
        for piece in pieces {
            let k = piece.len();
            let mut a = DMatrix::zeros(k, k);
            for &(i, j) in sub.sub_sft.edges() {
                if let (Ok(x), Ok(y)) = (piece.binary_search(&i), piece.binary_search(&j)) {
                    a[(x, y)] = 1.0;
                }
            }
            entropies.push((linalg::perron(&a)?, a));
        }
        let best = (0..pieces.len())
            .max_by(|&x, &y| entropies[x].0.root.total_cmp(&entropies[y].0.root))
            .expect("maximizing subgraph is non-empty");
        let top = entropies[best].0.root;
        let ties = entropies
            .iter()
            .filter(|(p, _)| p.root.ln() >= top.ln() - tol::TIE)
            .count();
        if ties > 1 {
            return Ok(None);
        }
        let (perron, a) = entropies.swap_remove(best);
        let c: Vec<usize> = pieces[best]
            .iter()
            .map(|&v| sub.parent_vertices[v])
            .collect();
        let component = sft
            .component_of(c[0])
            .expect("tight cycle lies in a component");
        let r: Vec<usize> = sft.components()[component]
            .iter()
            .copied()
            .filter(|v| c.binary_search(v).is_err())
            .collect();
        let norm = perron.left.dot(&perron.right);
        let (left, right) = (perron.left / norm, perron.right);
        let k = c.len();
        let mut bordered = DMatrix::zeros(k + 1, k + 1);
        bordered
            .view_mut((0, 0), (k, k))
            .copy_from(&(a - DMatrix::identity(k, k) * perron.root));
        for i in 0..k {
            bordered[(i, k)] = right[i];
            bordered[(k, i)] = left[i];
        }
        let mut cc = Vec::new();
        let mut cr = Vec::new();
        let mut rc = Vec::new();
        let mut rr = Vec::new();
        for e in sft.component_edges(component) {
            let (i, j) = sft.edge(e);
            let w = cal.reduced[e];
            match (c.binary_search(&i), c.binary_search(&j)) {
                (Ok(x), Ok(y)) => {
                    if w < 0.0 {
                        cc.push((x, y, w));
                    }
                }
                (Ok(x), Err(_)) => cr.push((x, r.binary_search(&j).expect("in R"), w)),
                (Err(_), Ok(y)) => rc.push((r.binary_search(&i).expect("in R"), y, w)),
                (Err(_), Err(_)) => rr.push((
                    r.binary_search(&i).expect("in R"),
                    r.binary_search(&j).expect("in R"),
                    w,
                )),
            }
        }
        Ok(Some(Self {
            component,
            c,
            r,
            rho0: perron.root,
            left,
            right,
            bordered: bordered.lu(),
            cc,
            cr,
            rc,
            rr,
        }))
    }

    fn block(rows: usize, cols: usize, entries: &[(usize, usize, f64)], beta: f64) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(rows, cols);
        for &(i, j, w) in entries {
            m[(i, j)] = (beta * w).exp();
        }
        m
    }

    /// `ln(rho / rho0)`, or `None` if the expansion is not trustworthy.
    fn log_ratio(&self, beta: f64) -> Option<f64> {
        let (kc, kr) = (self.c.len(), self.r.len());
        let e = Self::block(kc, kc, &self.cc, beta);
        let m_cr = Self::block(kc, kr, &self.cr, beta);
        let m_rc = Self::block(kr, kc, &self.rc, beta);
        let m_rr = Self::block(kr, kr, &self.rr, beta);
        let mut x = self.right.clone();
        let mut delta = 0.0f64;
        for _ in 0..100 {
            let lambda = self.rho0 + delta;
            let mut b = e.clone();
            if kr > 0 {
                let resolvent = (DMatrix::identity(kr, kr) * lambda - &m_rr).lu();
                let t = resolvent.solve(&m_rc)?;
                if t.iter().any(|&v| v < 0.0 || !v.is_finite()) {
                    return None;
                }
                b += &m_cr * t;
            }
            let bx = &b * &x;
            let next = self.left.dot(&bx);
            let mut rhs = DVector::zeros(kc + 1);
            rhs.rows_mut(0, kc).copy_from(&(&x * next - bx));
            let sol = self.bordered.solve(&rhs)?;
            x = &self.right + sol.rows(0, kc);
            let done = (next - delta).abs() <= 1e-14 * next.abs();
            delta = next;
            if done {
                return (delta >= 0.0 && delta.is_finite()).then(|| (delta / self.rho0).ln_1p());
            }
        }
        None
    }
}

/// Evaluates `P_phi(beta) - f(beta)` with the perturbative refinement when
/// the direct difference is small.
#[derive(Debug, Clone)]
pub(crate) struct GapGauge {
    pub asymptote: AsymptoteData,
    cal: Calibration,
    refiner: Option<Refiner>,
}

impl GapGauge {
    pub fn new(sft: &Sft, phi: &LocPotential) -> Result<Self> {
        phi.check_system(sft)?;
        let cal = calibrate(sft, phi)?;
        let sub = subgraph_of(sft, &cal);
        let refiner = Refiner::new(sft, &cal, &sub)?;
        let asymptote = AsymptoteData {
            max_mean: cal.max.value,
            residual_entropy: topological_entropy(&sub.sub_sft)?,
        };
        Ok(Self {
            asymptote,
            cal,
            refiner,
        })
    }

    /// Per-component `P_c(beta) - f(beta)`.
    fn component_gaps(&self, sft: &Sft, phi: &LocPotential, beta: f64) -> Result<Vec<f64>> {
        let f = self.asymptote.at(beta);
        Ok(component_pressures(sft, phi, beta)?
            .into_iter()
            .map(|p| p - f)
            .collect())
    }

    pub fn gap(&self, sft: &Sft, phi: &LocPotential, beta: f64) -> Result<f64> {
        let mut gaps = self.component_gaps(sft, phi, beta)?;
        let direct = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if direct >= REFINE_BELOW || beta <= 0.0 {
            return Ok(direct);
        }
        let Some(refiner) = &self.refiner else {
            return Ok(direct);
        };
        let Some(log_ratio) = refiner.log_ratio(beta) else {
            return Ok(direct);
        };
        let slot = &mut gaps[refiner.component];
        if (log_ratio - *slot).abs() > tol::VARIATIONAL {
            return Ok(direct);
        }
        *slot = log_ratio;
        Ok(gaps.into_iter().fold(f64::NEG_INFINITY, f64::max))
    }
}

/// `P_phi(beta) - (beta * Max(phi) + h_inf(phi))`, resolved to full
/// relative precision as it decays.
pub fn asymptote_gap(sft: &Sft, phi: &LocPotential, beta: f64) -> Result<f64> {
    GapGauge::new(sft, phi)?.gap(sft, phi, beta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapPoint {
    pub beta: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FreezingReport {
    pub frozen: bool,
    pub beta0: Option<f64>,
    pub max_mean: f64,
    pub residual_entropy: f64,
    /// Components on which `phi` is cohomologous to `Max(phi)` and whose
    /// entropy equals `h_inf`: they sit exactly on the asymptote.
    pub flat_components: Vec<usize>,
    pub gap_profile: Vec<GapPoint>,
}

/// Number of gap samples in [`FreezingReport::gap_profile`].
const PROFILE_POINTS: usize = 51;

/// Decides whether `P_phi` meets its asymptote on `[0, beta_max]`.
///
/// On a finite system the asymptote is met only through a component whose
/// every edge is tight (so its pressure is exactly `beta Max + h_inf`);
/// every other component approaches it strictly from above or stays below.
/// `beta0` is the least `beta` at which all such competitors are within
/// `tol` of the asymptote, found by bisection on their (convex,
/// non-increasing) excess.
pub fn detect_freezing(
    sft: &Sft,
    phi: &LocPotential,
    beta_max: f64,
    tol: f64,
) -> Result<FreezingReport> {
    if !(beta_max > 0.0 && beta_max.is_finite()) || !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "need beta_max > 0 and tol > 0, got {beta_max}, {tol}"
        )));
    }
    let gauge = GapGauge::new(sft, phi)?;
    let h_inf = gauge.asymptote.residual_entropy;
    let mut flat = Vec::new();
    for (c, _) in sft.components().iter().enumerate() {
        let edges = sft.component_edges(c);
        if edges.iter().all(|&e| gauge.cal.tight[e]) {
            let piece = Sft::build(
                sft.vertex_count(),
                &edges.iter().map(|&e| sft.edge(e)).collect::<Vec<_>>(),
            )?;
            if topological_entropy(&piece)? >= h_inf - tol::TIE {
                flat.push(c);
            }
        }
    }
    let competitor = |beta: f64| -> Result<f64> {
        Ok(gauge
            .component_gaps(sft, phi, beta)?
            .into_iter()
            .enumerate()
            .filter(|(c, _)| flat.binary_search(c).is_err())
            .map(|(_, g)| g)
            .fold(f64::NEG_INFINITY, f64::max))
    };
    let beta0 = if flat.is_empty() || competitor(beta_max)? > tol {
        None
    } else if competitor(0.0)? <= tol {
        Some(0.0)
    } else {
        let (mut lo, mut hi) = (0.0, beta_max);
        while hi - lo > tol::BISECTION_BETA {
            let mid = 0.5 * (lo + hi);
            if competitor(mid)? <= tol {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Some(hi)
    };
    let gap_profile = (0..PROFILE_POINTS)
        .map(|k| {
            let beta = beta_max * k as f64 / (PROFILE_POINTS - 1) as f64;
            Ok(GapPoint {
                beta,
                gap: gauge.gap(sft, phi, beta)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FreezingReport {
        frozen: beta0.is_some(),
        beta0,
        max_mean: gauge.asymptote.max_mean,
        residual_entropy: h_inf,
        flat_components: flat,
        gap_profile,
    })
}

/// Ground states: the measures of maximal entropy on the maximizing
/// subgraph, one per entropy-maximal piece.
///
/// For locally constant potentials on a finite system these are the limits
/// of the equilibrium states as `beta -> infinity`.
pub fn zero_temp_limit(sft: &Sft, phi: &LocPotential) -> Result<Vec<MarkovMeasure>> {
    let sub = maximizing_subgraph(sft, phi)?;
    let inner = transfer::gibbs_measure(&sub.sub_sft, &LocPotential::zero(&sub.sub_sft), 0.0)?;
    inner
        .iter()
        .map(|m| {
            let mut stationary = vec![0.0; sft.vertex_count()];
            for (v, &p) in m.stationary().iter().enumerate() {
                stationary[sub.parent_vertices[v]] = p;
            }
            let probs = sub
                .parent_edges
                .iter()
                .zip(m.transition())
                .filter(|(&e, _)| stationary[sft.edge(e).0] > 0.0)
                .map(|(&e, &p)| (e, p))
                .collect::<Vec<_>>();
            MarkovMeasure::from_parts(sft, probs, stationary)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BowenReport {
    pub mixing: bool,
    /// Two cycles with different means, certifying that `phi` is not
    /// cohomologous to a constant.
    pub witnesses: Option<(Cycle, Cycle)>,
    pub gaps: Vec<GapPoint>,
    pub all_positive: bool,
    pub non_increasing: bool,
    pub passed: bool,
}

/// Checks that the gap stays strictly positive and non-increasing along
/// `grid` for a non-constant potential on a mixing system.
pub fn bowen_gap_check(
    sft: &Sft,
    phi: &LocPotential,
    grid: &[f64],
    cycle_budget: usize,
) -> Result<BowenReport> {
    transfer::check_grid(grid)?;
    let cycles = enumerate_simple_cycles_with_cap(sft, cycle_budget)?;
    let witnesses = cycles.cycles().first().and_then(|first| {
        let m0 = first.mean(phi);
        cycles
            .iter()
            .find(|c| (c.mean(phi) - m0).abs() > tol::TIE)
            .map(|c| (first.clone(), c.clone()))
    });
    let gauge = GapGauge::new(sft, phi)?;
    let gaps = grid
        .iter()
        .map(|&beta| {
            Ok(GapPoint {
                beta,
                gap: gauge.gap(sft, phi, beta)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_positive = gaps.iter().all(|g| g.gap > 0.0);
    let non_increasing = gaps.windows(2).all(|w| w[1].gap <= w[0].gap);
    let mixing = sft.is_mixing();
    Ok(BowenReport {
        mixing,
        passed: mixing && witnesses.is_some() && all_positive && non_increasing,
        witnesses,
        gaps,
        all_positive,
        non_increasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sft::{higher_block, CylinderTable};

    fn full2() -> Sft {
        Sft::full_shift(2).unwrap()
    }

    fn no_eleven() -> (Sft, LocPotential) {
        let mut table = CylinderTable::with_default(0.0);
        table.insert(vec![1, 1], -1.0);
        higher_block(&full2(), &table, 2).unwrap()
    }

    #[test]
    fn karp_on_small_graphs() {
        assert_eq!(karp(1, &[(0, 0, 2.5)]), 2.5);
        let arcs = [(0, 1, 1.0), (1, 0, 3.0), (0, 0, 1.5)];
        assert_eq!(karp(2, &arcs), 2.0);
    }

    #[test]
    fn symbol_indicator_maximized_on_one_loop() {
        let s = full2();
        let phi = LocPotential::on_symbol(&s, 1, 1.0).unwrap();
        let m = max_ergodic_average(&s, &phi).unwrap();
        assert_eq!(m.value, 1.0);
        assert_eq!(m.witness.vertices(), &[1]);
    }

    #[test]
    fn negative_indicator_keeps_zero_loop() {
        let s = full2();
        let phi = LocPotential::on_symbol(&s, 1, -1.0).unwrap();
        let sub = maximizing_subgraph(&s, &phi).unwrap();
        assert_eq!(sub.sub_sft.vertex_count(), 1);
        assert_eq!(sub.parent_vertices, vec![0]);
        assert_eq!(residual_entropy(&s, &phi).unwrap(), 0.0);
        let ground = zero_temp_limit(&s, &phi).unwrap();
        assert_eq!(ground.len(), 1);
        assert_eq!(ground[0].stationary(), &[1.0, 0.0]);
    }

    #[test]
    fn zero_potential_keeps_everything() {
        let s = full2();
        let phi = LocPotential::zero(&s);
        let sub = maximizing_subgraph(&s, &phi).unwrap();
        assert_eq!(sub.sub_sft.edges(), s.edges());
        assert!((residual_entropy(&s, &phi).unwrap() - 2f64.ln()).abs() < 1e-13);
    }

    #[test]
    fn forbidding_eleven_leaves_golden_mean() {
        let (s, phi) = no_eleven();
        let sub = maximizing_subgraph(&s, &phi).unwrap();
        assert_eq!(sub.sub_sft.edge_count(), 3);
        assert!(sub.sub_sft.edge_index(1, 1).is_none());
        let golden = ((1.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((residual_entropy(&s, &phi).unwrap() - golden).abs() < 1e-13);
        let g = zero_temp_limit(&s, &phi).unwrap();
        assert_eq!(g.len(), 1);
        assert!((g[0].entropy() - golden).abs() < 1e-12);
    }

    #[test]
    fn symbol_gap_closed_form_survives_cancellation() {
        let s = full2();
        let phi = LocPotential::on_symbol(&s, 1, 1.0).unwrap();
        for beta in [0.5, 3.0, 20.0, 50.0] {
            let gap = asymptote_gap(&s, &phi, beta).unwrap();
            let exact = (-beta).exp().ln_1p();
            assert!(
                ((gap - exact) / exact).abs() < 1e-10,
                "{beta}: {gap} vs {exact}"
            );
        }
    }

    #[test]
    fn constants_freeze_at_zero() {
        let s = full2();
        let r = detect_freezing(&s, &LocPotential::constant(&s, -1.0), 10.0, 1e-9).unwrap();
        assert!(r.frozen);
        assert_eq!(r.beta0, Some(0.0));
        assert!(r.gap_profile.iter().all(|g| g.gap.abs() < 1e-12));
    }

    #[test]
    fn symbol_indicator_never_freezes() {
        let s = full2();
        let phi = LocPotential::on_symbol(&s, 1, 1.0).unwrap();
        let r = detect_freezing(&s, &phi, 50.0, 1e-9).unwrap();
        assert!(!r.frozen);
        let last = r.gap_profile.last().unwrap();
        assert_eq!(last.beta, 50.0);
        assert!((last.gap / (-50f64).exp().ln_1p() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn two_component_switch_freezes_near_one() {
        let a = full2();
        let b = Sft::fixed_point();
        let u = Sft::disjoint_union(&[&a, &b]).unwrap();
        let phi = LocPotential::from_fn(&u, |i, _| if i < 2 { -(2f64.ln()) } else { 0.0 }).unwrap();
        let r = detect_freezing(&u, &phi, 5.0, 1e-9).unwrap();
        assert!(r.frozen);
        assert_eq!(r.flat_components, vec![1]);
        assert!((r.beta0.unwrap() - 1.0).abs() < 1e-8);
    }
}
