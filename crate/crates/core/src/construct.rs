//! Potentials that freeze on a prescribed face of equilibrium states.
//!
//! Given `phi` whose equilibrium states form a face `F` of equal-entropy
//! ergodic measures, we find edge weights `F` (an affine functional on the
//! cycle polytope) with `|mean_phi(c)| <= mean_F(c) <= |phi|` on every
//! simple cycle and `mean_F = 0` on cycles carrying the face. Then
//! `psi = phi - F` has the face as its equilibrium set for every
//! `beta >= 1`. Affine functionals and the concave minorant `|mean_phi|`
//! are both extremal on simple cycles, so checking the cycle vertices of the
//! polytope is enough and the separation is a finite linear program.

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cycles::{enumerate_simple_cycles_with_cap, Cycle};
use crate::ergopt::max_ergodic_average;
use crate::error::{Error, Result};
use crate::measure::{integrate, MarkovMeasure};
use crate::random;
use crate::sft::{LocPotential, Sft};
use crate::tol;
use crate::transfer::{self, equilibrium, pressure, ComponentSpectrum};

/// Ergodic extreme points of a target face.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Face {
    extremes: Vec<MarkovMeasure>,
    support_components: Vec<usize>,
    entropies: Vec<f64>,
}

impl Face {
    /// Each extreme must be carried by a single component. Entropies are
    /// recorded but not compared here; [`normalize_on_face`] reports a
    /// mismatch.
    pub fn new(sft: &Sft, extremes: Vec<MarkovMeasure>) -> Result<Self> {
        if extremes.is_empty() {
            return Err(Error::InvalidInput(
                "face needs at least one extreme".into(),
            ));
        }
        let mut support_components = Vec::with_capacity(extremes.len());
        for m in &extremes {
            m.check_system(sft)?;
            let mut comps: Vec<Option<usize>> =
                m.support().iter().map(|&v| sft.component_of(v)).collect();
            comps.dedup();
            match comps.as_slice() {
                [Some(c)] => support_components.push(*c),
                _ => {
                    return Err(Error::InvalidInput(
                        "face extreme is not carried by one component".into(),
                    ))
                }
            }
        }
        let mut sorted = support_components.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != support_components.len() {
            return Err(Error::InvalidInput(
                "two face extremes share a component".into(),
            ));
        }
        let entropies = extremes.iter().map(MarkovMeasure::entropy).collect();
        Ok(Self {
            extremes,
            support_components,
            entropies,
        })
    }

    /// The equilibrium state of `phi` restricted to each listed component.
    pub fn from_components(sft: &Sft, phi: &LocPotential, components: &[usize]) -> Result<Self> {
        phi.check_system(sft)?;
        let extremes = components
            .iter()
            .map(|&c| {
                if c >= sft.components().len() {
                    return Err(Error::InvalidInput(format!("no component {c}")));
                }
                ComponentSpectrum::of(sft, phi, 1.0, c)?.measure(sft)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(sft, extremes)
    }

    pub fn extremes(&self) -> &[MarkovMeasure] {
        &self.extremes
    }

    pub fn support_components(&self) -> &[usize] {
        &self.support_components
    }

    pub fn entropies(&self) -> &[f64] {
        &self.entropies
    }

    /// Common entropy, or `None` when extremes differ by more than
    /// `tol::FACE_ENTROPY`.
    pub fn entropy(&self) -> Option<f64> {
        let lo = self.entropies.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self
            .entropies
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        (hi - lo <= tol::FACE_ENTROPY).then_some(0.5 * (lo + hi))
    }

    fn contains_component(&self, c: usize) -> bool {
        self.support_components.contains(&c)
    }
}

/// `phi - c` with `int (phi - c) dmu = 0` on every face extreme.
pub fn normalize_on_face(sft: &Sft, phi: &LocPotential, face: &Face) -> Result<LocPotential> {
    phi.check_system(sft)?;
    let integrals = face
        .extremes
        .iter()
        .map(|m| integrate(phi, m))
        .collect::<Result<Vec<_>>>()?;
    let lo = integrals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = integrals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo > tol::FACE {
        return Err(Error::FaceIntegralMismatch {
            integrals,
            entropies: face.entropies.clone(),
        });
    }
    let mean = integrals.iter().sum::<f64>() / integrals.len() as f64;
    Ok(phi.shifted(-mean))
}

/// Constraint report for one simple cycle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleBound {
    pub cycle: Vec<usize>,
    pub on_face: bool,
    pub mean_phi: f64,
    pub mean_f: f64,
    /// `mean_F - |mean_phi|`, or `-|mean_F|` on face cycles.
    pub lower_slack: f64,
    /// `|phi| - mean_F`.
    pub upper_slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffineSeparator {
    pub edge_weights: Vec<f64>,
    pub achieved_bounds: Vec<CycleBound>,
    pub min_lower_slack: f64,
    pub min_upper_slack: f64,
    #[serde(skip)]
    system: u64,
}

impl AffineSeparator {
    pub fn potential(&self, sft: &Sft) -> Result<LocPotential> {
        if sft.fingerprint() != self.system {
            return Err(Error::SystemMismatch);
        }
        LocPotential::new(sft, self.edge_weights.clone())
    }

    /// Mean of the separator along a cycle.
    pub fn mean(&self, cycle: &Cycle) -> f64 {
        cycle
            .edges()
            .iter()
            .map(|&e| self.edge_weights[e])
            .sum::<f64>()
            / cycle.len() as f64
    }
}

/// Finds the L1-smallest edge weights `x` with, for every simple cycle `c`,
/// `sum_c x = 0` if `c` carries the face and
/// `len(c) |mean_phi(c)| <= sum_c x <= len(c) |phi|` otherwise.
/// Edges between components carry no invariant mass and get weight 0.
pub fn build_separator(sft: &Sft, phi: &LocPotential, face: &Face) -> Result<AffineSeparator> {
    build_separator_with_cap(sft, phi, face, tol::CYCLE_BUDGET)
}

pub fn build_separator_with_cap(
    sft: &Sft,
    phi: &LocPotential,
    face: &Face,
    cycle_budget: usize,
) -> Result<AffineSeparator> {
    phi.check_system(sft)?;
    for m in &face.extremes {
        m.check_system(sft)?;
    }
    let cycles = enumerate_simple_cycles_with_cap(sft, cycle_budget)?;
    let on_face = |c: &Cycle| {
        sft.component_of(c.vertices()[0])
            .is_some_and(|k| face.contains_component(k))
    };
    if let Some(c) = cycles
        .iter()
        .find(|c| on_face(c) && c.mean(phi).abs() > tol::FACE)
    {
        return Err(Error::Infeasible {
            certificate: format!(
                "cycle {:?} lies on the face but has mean {:.12} != 0, so no separator can vanish on it while bounding |mean_phi| from above",
                c.vertices(),
                c.mean(phi)
            ),
        });
    }
    let norm = phi.sup_norm();
    let longest = cycles.iter().map(Cycle::len).max().unwrap_or(1) as f64;
    let bound = longest * norm + 1.0;

    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let mut vars = vec![None; sft.edge_count()];
    for c in 0..sft.components().len() {
        for e in sft.component_edges(c) {
            let x = lp.add_var(0.0, (-bound, bound));
            let t = lp.add_var(1.0, (0.0, f64::INFINITY));
            lp.add_constraint([(t, 1.0), (x, -1.0)], ComparisonOp::Ge, 0.0);
            lp.add_constraint([(t, 1.0), (x, 1.0)], ComparisonOp::Ge, 0.0);
            vars[e] = Some(x);
        }
    }
    for c in cycles.iter() {
        let terms: Vec<_> = c
            .edges()
            .iter()
            .map(|&e| (vars[e].expect("cycle edge inside a component"), 1.0))
            .collect();
        let len = c.len() as f64;
        if on_face(c) {
            lp.add_constraint(terms.as_slice(), ComparisonOp::Eq, 0.0);
        } else {
            lp.add_constraint(terms.as_slice(), ComparisonOp::Ge, len * c.mean(phi).abs());
            lp.add_constraint(terms.as_slice(), ComparisonOp::Le, len * norm);
        }
    }
    let solution = lp.solve().map_err(|e| Error::Infeasible {
        certificate: format!("linear program over {} cycles: {e}", cycles.len()),
    })?;
    let edge_weights: Vec<f64> = vars
        .iter()
        .map(|v| v.map_or(0.0, |v| *solution.var_value(v)))
        .collect();

    let achieved_bounds: Vec<CycleBound> = cycles
        .iter()
        .map(|c| {
            let mean_f = c.edges().iter().map(|&e| edge_weights[e]).sum::<f64>() / c.len() as f64;
            let mean_phi = c.mean(phi);
            let face_cycle = on_face(c);
            CycleBound {
                cycle: c.vertices().to_vec(),
                on_face: face_cycle,
                mean_phi,
                mean_f,
                lower_slack: if face_cycle {
                    -mean_f.abs()
                } else {
                    mean_f - mean_phi.abs()
                },
                upper_slack: norm - mean_f,
            }
        })
        .collect();
    let min_lower_slack = achieved_bounds
        .iter()
        .map(|b| b.lower_slack)
        .fold(f64::INFINITY, f64::min);
    let min_upper_slack = achieved_bounds
        .iter()
        .map(|b| b.upper_slack)
        .fold(f64::INFINITY, f64::min);
    if min_lower_slack < -tol::FACE || min_upper_slack < -tol::FACE {
        return Err(Error::InvariantViolation(format!(
            "solver output misses the cycle bounds (slacks {min_lower_slack:e}, {min_upper_slack:e})"
        )));
    }
    Ok(AffineSeparator {
        edge_weights,
        achieved_bounds,
        min_lower_slack,
        min_upper_slack,
        system: sft.fingerprint(),
    })
}

/// Everything produced on the way from `phi` to `psi`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Construction {
    pub normalized: LocPotential,
    pub separator: AffineSeparator,
    pub psi: LocPotential,
}

pub fn construct(sft: &Sft, phi: &LocPotential, face: &Face) -> Result<Construction> {
    let normalized = normalize_on_face(sft, phi, face)?;
    let separator = build_separator(sft, &normalized, face)?;
    let psi = normalized.combine(1.0, &separator.potential(sft)?, -1.0)?;
    Ok(Construction {
        normalized,
        separator,
        psi,
    })
}

/// `psi = phi' - F` for the face-normalized `phi'`.
pub fn freezing_potential(sft: &Sft, phi: &LocPotential, face: &Face) -> Result<LocPotential> {
    Ok(construct(sft, phi, face)?.psi)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma31Row {
    pub beta: f64,
    /// Whether `beta >= 1`; rows below are reported but not asserted.
    pub in_range: bool,
    pub pressure: f64,
    /// `h(face) + beta * Max(psi)`.
    pub predicted: f64,
    pub tied_components: Vec<usize>,
    /// Largest distance from a face extreme to its nearest equilibrium state.
    pub face_distance: f64,
    /// Equilibrium states farther than `tol::MEASURE_MATCH` from every extreme.
    pub extra_states: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma31Report {
    pub face_entropy: f64,
    pub max_psi: f64,
    /// `max |int psi dmu - Max(psi)|` over face extremes.
    pub condition2_error: f64,
    pub condition2: bool,
    pub rows: Vec<Lemma31Row>,
    pub passed: bool,
}

impl Lemma31Report {
    pub fn first_failure(&self) -> Option<&Lemma31Row> {
        self.rows.iter().find(|r| r.in_range && !r.passed)
    }
}

/// Tabulates both conditions without failing.
pub fn lemma31_report(
    sft: &Sft,
    psi: &LocPotential,
    face: &Face,
    betas: &[f64],
) -> Result<Lemma31Report> {
    psi.check_system(sft)?;
    if betas.iter().any(|&b| !(b > 0.0 && b.is_finite())) {
        return Err(Error::InvalidInput(
            "betas must be positive and finite".into(),
        ));
    }
    let face_entropy = face.entropy().ok_or_else(|| {
        Error::HypothesisViolated(format!("face entropies differ: {:?}", face.entropies))
    })?;
    let max_psi = max_ergodic_average(sft, psi)?.value;
    let condition2_error = face
        .extremes
        .iter()
        .map(|m| Ok((integrate(psi, m)? - max_psi).abs()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let condition2 = condition2_error <= tol::VARIATIONAL;
    let rows = betas
        .par_iter()
        .map(|&beta| {
            let eq = equilibrium(sft, psi, beta)?;
            let nearest = |m: &MarkovMeasure, set: &[MarkovMeasure]| -> Result<f64> {
                set.iter()
                    .map(|x| m.distance(x))
                    .try_fold(f64::INFINITY, |a, d| d.map(|d| a.min(d)))
            };
            let face_distance = face
                .extremes
                .iter()
                .map(|m| nearest(m, &eq.measures))
                .try_fold(0.0f64, |a, d| d.map(|d| a.max(d)))?;
            let mut extra_states = 0;
            for m in &eq.measures {
                if nearest(m, &face.extremes)? > tol::MEASURE_MATCH {
                    extra_states += 1;
                }
            }
            let predicted = face_entropy + beta * max_psi;
            let in_range = beta >= 1.0;
            let passed = face_distance <= tol::MEASURE_MATCH
                && extra_states == 0
                && (eq.pressure - predicted).abs() <= tol::GIBBS;
            Ok(Lemma31Row {
                beta,
                in_range,
                pressure: eq.pressure,
                predicted,
                tied_components: eq.tied,
                face_distance,
                extra_states,
                passed,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = condition2 && rows.iter().all(|r| !r.in_range || r.passed);
    Ok(Lemma31Report {
        face_entropy,
        max_psi,
        condition2_error,
        condition2,
        rows,
        passed,
    })
}

/// Checks that the face is exactly the equilibrium set of `beta * psi` for
/// each `beta >= 1` listed, with `P = h(face) + beta Max(psi)`, and that
/// `int psi dmu = Max(psi)` on the face.
pub fn verify_lemma31(
    sft: &Sft,
    psi: &LocPotential,
    face: &Face,
    betas: &[f64],
) -> Result<Lemma31Report> {
    let report = lemma31_report(sft, psi, face, betas)?;
    if let Some(row) = report.first_failure() {
        return Err(Error::VerificationFailed {
            beta: row.beta,
            detail: format!(
                "pressure {} vs predicted {}, face distance {:e}, {} extra states, tied {:?}",
                row.pressure,
                row.predicted,
                row.face_distance,
                row.extra_states,
                row.tied_components
            ),
        });
    }
    if !report.condition2 {
        return Err(Error::VerificationFailed {
            beta: 1.0,
            detail: format!(
                "face integrals miss Max(psi) = {} by {:e}",
                report.max_psi, report.condition2_error
            ),
        });
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConverseReport {
    pub max_psi: f64,
    pub integral: f64,
    /// `Max(psi) - int psi dmu`.
    pub deficit: f64,
    pub topological_entropy: f64,
    /// `(h_top + 1) / deficit`.
    pub beta_bound: f64,
    /// First grid point at which the extreme is no longer an equilibrium state.
    pub beta_lost: Option<f64>,
    pub passed: bool,
}

/// For a face extreme with `int psi dmu < Max(psi)`, scans `[1, bound]` for
/// the first `beta` at which it stops being an equilibrium state.
pub fn converse_probe(
    sft: &Sft,
    psi: &LocPotential,
    extreme: &MarkovMeasure,
) -> Result<ConverseReport> {
    let max_psi = max_ergodic_average(sft, psi)?.value;
    let integral = integrate(psi, extreme)?;
    let deficit = max_psi - integral;
    if deficit <= tol::VARIATIONAL {
        return Err(Error::HypothesisViolated(format!(
            "extreme already maximizes psi (deficit {deficit:e})"
        )));
    }
    let topological_entropy = pressure(sft, &LocPotential::zero(sft), 1.0)?;
    let beta_bound = (topological_entropy + 1.0) / deficit;
    let steps = 2000;
    let hi = beta_bound.max(1.0);
    let mut beta_lost = None;
    for k in 0..=steps {
        let beta = 1.0 + (hi - 1.0) * k as f64 / steps as f64;
        let eq = equilibrium(sft, psi, beta)?;
        let kept = eq
            .measures
            .iter()
            .map(|m| m.distance(extreme))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .any(|d| d <= tol::MEASURE_MATCH);
        if !kept {
            beta_lost = Some(beta);
            break;
        }
    }
    Ok(ConverseReport {
        max_psi,
        integral,
        deficit,
        topological_entropy,
        beta_bound,
        beta_lost,
        passed: beta_lost.is_some_and(|b| b <= beta_bound),
    })
}

/// A labelled test system with a target face.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub name: String,
    pub seed: Option<u64>,
    #[serde(skip)]
    pub sft: Sft,
    #[serde(skip)]
    pub phi: LocPotential,
    pub face_components: Vec<usize>,
}

impl Scenario {
    pub fn face(&self) -> Result<Face> {
        Face::from_components(&self.sft, &self.phi, &self.face_components)
    }

    /// Builds from component systems and their potentials; `face` indexes
    /// `parts`.
    pub fn assemble(
        name: &str,
        parts: &[(Sft, LocPotential)],
        face: &[usize],
        seed: Option<u64>,
    ) -> Result<Self> {
        let systems: Vec<&Sft> = parts.iter().map(|(s, _)| s).collect();
        let sft = Sft::disjoint_union(&systems)?;
        let potentials: Vec<&LocPotential> = parts.iter().map(|(_, p)| p).collect();
        let phi = LocPotential::concat(&sft, &potentials)?;
        let mut offsets = Vec::with_capacity(parts.len());
        let mut offset = 0;
        for (s, _) in parts {
            offsets.push(offset);
            offset += s.vertex_count();
        }
        let face_components = face
            .iter()
            .map(|&p| {
                let v = *offsets
                    .get(p)
                    .ok_or_else(|| Error::InvalidInput(format!("no part {p}")))?;
                sft.component_of(v).ok_or_else(|| {
                    Error::InvalidInput(format!("part {p} is not a single recurrent component"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            name: name.into(),
            seed,
            sft,
            phi,
            face_components,
        })
    }
}

fn part(sft: Sft, value: f64) -> (Sft, LocPotential) {
    let phi = LocPotential::constant(&sft, value);
    (sft, phi)
}

/// Two full 2-shifts with `phi = 0` and a fixed point with `phi = -1`; the
/// face is the pair of measures of maximal entropy.
pub fn abc_scenario() -> Scenario {
    let two = Sft::full_shift(2).expect("two symbols");
    Scenario::assemble(
        "abc",
        &[
            part(two.clone(), 0.0),
            part(two, 0.0),
            part(Sft::fixed_point(), -1.0),
        ],
        &[0, 1],
        None,
    )
    .expect("fixed scenario")
}

/// [`abc_scenario`] plus a fixed point `D` with `phi = -0.1`.
pub fn abcd_scenario() -> Scenario {
    let two = Sft::full_shift(2).expect("two symbols");
    Scenario::assemble(
        "abcd",
        &[
            part(two.clone(), 0.0),
            part(two, 0.0),
            part(Sft::fixed_point(), -1.0),
            part(Sft::fixed_point(), -0.1),
        ],
        &[0, 1],
        None,
    )
    .expect("fixed scenario")
}

/// Gibbs state of `1[symbol 1]` on the full 2-shift: interior to the cycle
/// polytope, so no separator exists.
pub fn interior_face_scenario() -> Scenario {
    let two = Sft::full_shift(2).expect("two symbols");
    let phi = LocPotential::on_symbol(&two, 1, 1.0).expect("symbol 1 exists");
    Scenario::assemble("interior", &[(two, phi)], &[0], None).expect("fixed scenario")
}

/// Full 2-shift with `psi' = -0.5` and a fixed point with
/// `psi' = log 2 - 0.5`: both are equilibrium states at `beta = 1`, but the
/// shift's measure falls short of `Max(psi')` by `log 2`.
pub fn converse_scenario() -> Scenario {
    let two = Sft::full_shift(2).expect("two symbols");
    Scenario::assemble(
        "converse",
        &[
            part(two, -0.5),
            part(Sft::fixed_point(), std::f64::consts::LN_2 - 0.5),
        ],
        &[0, 1],
        None,
    )
    .expect("fixed scenario")
}

/// `psi` from the A/B/C construction with `bump` added on the C loop.
pub fn corrupted_psi(scenario: &Scenario, psi: &LocPotential, bump: f64) -> Result<LocPotential> {
    let c = scenario
        .sft
        .components()
        .iter()
        .position(|comp| {
            comp.len() == 1
                && !scenario
                    .face_components
                    .contains(&scenario.sft.component_of(comp[0]).unwrap_or(usize::MAX))
        })
        .ok_or_else(|| Error::InvalidInput("scenario has no fixed-point distractor".into()))?;
    let e = scenario.sft.component_edges(c)[0];
    let mut w = psi.weights().to_vec();
    w[e] += bump;
    psi.with_weights(w)
}

/// Seeded multi-component scenario: a pair of isomorphic mixing components
/// whose potential is a constant plus a coboundary (so both carry the
/// measure of maximal entropy with equal integrals), plus `distractors`
/// random components shifted to lose by a margin in `[0.1, 1)`.
pub fn random_scenario<R: Rng + ?Sized>(
    rng: &mut R,
    seed: u64,
    max_vertices: usize,
    distractors: usize,
) -> Result<Scenario> {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let a = random::mixing_sft(rng, n, 0.3);
    let level = rng.gen_range(-1.0..1.0);
    let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let phi_a = LocPotential::from_fn(&a, |i, j| level + u[i] - u[j])?;

    // Same graph with vertices relabelled.
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let edges: Vec<(usize, usize)> = a.edges().iter().map(|&(i, j)| (perm[i], perm[j])).collect();
    let b = Sft::build(n, &edges)?;
    let w: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let phi_b = LocPotential::from_fn(&b, |i, j| level + w[i] - w[j])?;

    let face_pressure = pressure(&a, &phi_a, 1.0)?;
    let mut parts = vec![(a, phi_a), (b, phi_b)];
    for _ in 0..distractors {
        let d = random::sft(rng, max_vertices, 0.4);
        let raw = random::potential(rng, &d, -1.0, 1.0);
        let margin = rng.gen_range(0.1..1.0);
        let shift = face_pressure - margin - pressure(&d, &raw, 1.0)?;
        // A distractor may split into several components; all of them lose.
        parts.push((d, raw.shifted(shift)));
    }
    Scenario::assemble(&format!("random-{seed}"), &parts, &[0, 1], Some(seed))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwitchingRow {
    pub beta: f64,
    pub pressure: f64,
    /// `max((1 - beta) h_A, 0)`.
    pub predicted: f64,
    pub pressure_a: f64,
    pub pressure_b: f64,
    /// `"A"`, `"B"` or `"tie"`.
    pub winner: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SwitchingReport {
    pub entropy_a: f64,
    pub rows: Vec<SwitchingRow>,
    pub step: f64,
    pub left_slope: f64,
    pub right_slope: f64,
    /// `right_slope - left_slope`, expected to equal `h_A`.
    pub slope_jump: f64,
    pub jump_error: f64,
    pub passed: bool,
}

/// `A` plus a fixed point `B`, with `phi = -h_A` on `A` and `0` on `B`.
/// Returns the system, the potential and the component indices of `A` and `B`.
pub fn switching_system(a: &Sft) -> Result<(Sft, LocPotential, usize, usize)> {
    if !a.is_irreducible() {
        return Err(Error::InvalidInput(
            "component A must be irreducible".into(),
        ));
    }
    let h = pressure(a, &LocPotential::zero(a), 1.0)?;
    let scenario = Scenario::assemble(
        "switching",
        &[part(a.clone(), -h), part(Sft::fixed_point(), 0.0)],
        &[0, 1],
        None,
    )?;
    let [ca, cb] = scenario.face_components[..] else {
        unreachable!("two parts")
    };
    Ok((scenario.sft, scenario.phi, ca, cb))
}

/// Tabulates winners of `P(beta phi) = max((1 - beta) h_A, 0)` and the slope
/// jump at `beta = 1`.
pub fn switching_scenario(a: &Sft, betas: &[f64]) -> Result<SwitchingReport> {
    let (sft, phi, ca, cb) = switching_system(a)?;
    let entropy_a = pressure(a, &LocPotential::zero(a), 1.0)?;
    let rows = betas
        .par_iter()
        .map(|&beta| {
            let eq = equilibrium(&sft, &phi, beta)?;
            let winner = match (eq.tied.contains(&ca), eq.tied.contains(&cb)) {
                (true, true) => "tie",
                (true, false) => "A",
                _ => "B",
            };
            let expected = if (beta - 1.0).abs() <= tol::TIE {
                "tie"
            } else if beta < 1.0 {
                "A"
            } else {
                "B"
            };
            let predicted = ((1.0 - beta) * entropy_a).max(0.0);
            Ok(SwitchingRow {
                beta,
                pressure: eq.pressure,
                predicted,
                pressure_a: eq.component_pressures[ca],
                pressure_b: eq.component_pressures[cb],
                winner: winner.into(),
                passed: winner == expected && (eq.pressure - predicted).abs() <= tol::GIBBS,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let step = 1e-4;
    let at = |b: f64| pressure(&sft, &phi, b);
    let p1 = at(1.0)?;
    let left_slope = (p1 - at(1.0 - step)?) / step;
    let right_slope = (at(1.0 + step)? - p1) / step;
    let slope_jump = right_slope - left_slope;
    let jump_error = (slope_jump - entropy_a).abs();
    let passed = rows.iter().all(|r| r.passed) && jump_error <= 1e-6;
    Ok(SwitchingReport {
        entropy_a,
        rows,
        step,
        left_slope,
        right_slope,
        slope_jump,
        jump_error,
        passed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetRow {
    pub beta: f64,
    pub in_range: bool,
    pub pressure: f64,
    /// `h(mu) + beta int phi dmu`.
    pub value: f64,
    pub error: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetReport {
    pub entropy: f64,
    pub integral: f64,
    pub rows: Vec<SubsetRow>,
    pub passed: bool,
}

/// A zero-entropy equilibrium state of `phi` stays an equilibrium state of
/// `beta phi` for every `beta >= 1`.
pub fn freezing_subset_check(
    sft: &Sft,
    phi: &LocPotential,
    mu: &MarkovMeasure,
    betas: &[f64],
) -> Result<SubsetReport> {
    let entropy = mu.entropy();
    if entropy > tol::FACE_ENTROPY {
        return Err(Error::HypothesisViolated(format!(
            "measure has entropy {entropy}, not 0"
        )));
    }
    let integral = integrate(phi, mu)?;
    let p1 = pressure(sft, phi, 1.0)?;
    if (entropy + integral - p1).abs() > tol::GIBBS {
        return Err(Error::HypothesisViolated(format!(
            "measure is not an equilibrium state of phi: h + int phi = {} vs P = {p1}",
            entropy + integral
        )));
    }
    let rows = betas
        .iter()
        .map(|&beta| {
            let p = transfer::pressure(sft, phi, beta)?;
            let value = entropy + beta * integral;
            let error = (p - value).abs();
            let in_range = beta >= 1.0;
            Ok(SubsetRow {
                beta,
                in_range,
                pressure: p,
                value,
                error,
                passed: !in_range || error <= tol::GIBBS,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SubsetReport {
        entropy,
        integral,
        passed: rows.iter().all(|r| r.passed),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const BETAS: [f64; 4] = [1.0, 2.0, 5.0, 10.0];

    fn fixed_edge(s: &Scenario, part_vertex: usize) -> usize {
        s.sft.out_edges(part_vertex)[0]
    }

    #[test]
    fn abc_separator_is_pinned() {
        let s = abc_scenario();
        let face = s.face().unwrap();
        let c = construct(&s.sft, &s.phi, &face).unwrap();
        let c_loop = fixed_edge(&s, 4);
        for (e, &w) in c.separator.edge_weights.iter().enumerate() {
            let expected = if e == c_loop { 1.0 } else { 0.0 };
            assert!((w - expected).abs() < 1e-8, "edge {e}: {w}");
        }
        assert!((c.psi.weight(c_loop) + 2.0).abs() < 1e-8);
        verify_lemma31(&s.sft, &c.psi, &face, &BETAS).unwrap();
    }

    #[test]
    fn distractor_gets_margin() {
        let s = abcd_scenario();
        let face = s.face().unwrap();
        let c = construct(&s.sft, &s.phi, &face).unwrap();
        let d_loop = fixed_edge(&s, 5);
        assert!((c.separator.edge_weights[d_loop] - 0.1).abs() < 1e-8);
        assert!((c.psi.weight(d_loop) + 0.2).abs() < 1e-8);
        verify_lemma31(&s.sft, &c.psi, &face, &BETAS).unwrap();
    }

    #[test]
    fn interior_face_is_infeasible() {
        let s = interior_face_scenario();
        let face = s.face().unwrap();
        let phi = normalize_on_face(&s.sft, &s.phi, &face).unwrap();
        match build_separator(&s.sft, &phi, &face) {
            Err(Error::Infeasible { certificate }) => assert!(certificate.contains("cycle")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn constant_potential_normalizes_to_zero() {
        let two = Sft::full_shift(2).unwrap();
        let phi = LocPotential::constant(&two, 5.0);
        let face = Face::from_components(&two, &phi, &[0]).unwrap();
        let n = normalize_on_face(&two, &phi, &face).unwrap();
        assert!(n.weights().iter().all(|w| w.abs() < 1e-12));
        let psi = freezing_potential(&two, &phi, &face).unwrap();
        assert!(psi.weights().iter().all(|w| w.abs() < 1e-12));
        verify_lemma31(&two, &psi, &face, &[1.0, 7.0]).unwrap();
    }

    #[test]
    fn unequal_entropies_mismatch() {
        let s = Scenario::assemble(
            "mismatch",
            &[
                part(Sft::full_shift(2).unwrap(), 0.0),
                part(Sft::fixed_point(), std::f64::consts::LN_2),
            ],
            &[0, 1],
            None,
        )
        .unwrap();
        let face = s.face().unwrap();
        assert!(face.entropy().is_none());
        assert!(matches!(
            normalize_on_face(&s.sft, &s.phi, &face),
            Err(Error::FaceIntegralMismatch { .. })
        ));
    }

    #[test]
    fn corrupted_psi_fails() {
        let s = abc_scenario();
        let face = s.face().unwrap();
        let psi = freezing_potential(&s.sft, &s.phi, &face).unwrap();
        let bad = corrupted_psi(&s, &psi, 2.5).unwrap();
        assert!(matches!(
            verify_lemma31(&s.sft, &bad, &face, &BETAS),
            Err(Error::VerificationFailed { .. })
        ));
        let report = lemma31_report(&s.sft, &bad, &face, &BETAS).unwrap();
        assert!(!report.rows.last().unwrap().passed);
    }

    #[test]
    fn converse_extreme_is_lost() {
        let s = converse_scenario();
        let face = s.face().unwrap();
        let r = converse_probe(&s.sft, &s.phi, &face.extremes()[0]).unwrap();
        assert!(r.passed, "{r:?}");
        assert!((r.deficit - std::f64::consts::LN_2).abs() < 1e-9);
    }

    #[test]
    fn switching_on_full_shift() {
        let two = Sft::full_shift(2).unwrap();
        let r = switching_scenario(&two, &[0.5, 0.9, 1.0, 1.1, 3.0]).unwrap();
        assert!(r.passed, "{r:?}");
        assert!((r.rows[1].pressure - 0.1 * std::f64::consts::LN_2).abs() < 1e-10);
        assert_eq!(r.rows[2].winner, "tie");
        assert_eq!(r.rows[3].winner, "B");
    }

    #[test]
    fn subset_lemma() {
        let two = Sft::full_shift(2).unwrap();
        let (sft, phi, ca, cb) = switching_system(&two).unwrap();
        let eq = equilibrium(&sft, &phi, 1.0).unwrap();
        let pick = |c: usize| {
            let i = eq.tied.iter().position(|&x| x == c).unwrap();
            eq.measures[i].clone()
        };
        let r = freezing_subset_check(&sft, &phi, &pick(cb), &[0.5, 1.0, 3.0, 10.0]).unwrap();
        assert!(r.passed);
        assert!(!r.rows[0].in_range);
        assert!(matches!(
            freezing_subset_check(&sft, &phi, &pick(ca), &[1.0]),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn random_scenarios_freeze() {
        for seed in 0..8 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = random_scenario(&mut rng, seed, 4, 2).unwrap();
            let face = s.face().unwrap();
            let c = construct(&s.sft, &s.phi, &face).unwrap();
            verify_lemma31(&s.sft, &c.psi, &face, &[1.0, 3.0, 20.0]).unwrap();
        }
    }
}
