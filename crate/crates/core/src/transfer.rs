//! Pressure and equilibrium states of locally constant potentials through
//! Perron eigendata of transfer matrices.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ergopt::{self, karp, longest_path_potentials};
use crate::error::{Error, Result};
use crate::linalg::{self, Perron};
use crate::measure::{integrate, MarkovMeasure};
use crate::random;
use crate::sft::{recurrent_components, LocPotential, Sft};
use crate::tol;

/// Exponents beyond this magnitude trigger the offset in [`transfer_matrix`].
const SAFE_EXPONENT: f64 = 600.0;
/// Largest spread of `beta * w` representable without underflow.
const MAX_SPREAD: f64 = 700.0;

/// `M_ij = exp(beta * w_ij - offset)` on edges, zero elsewhere.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferMatrix {
    pub entries: Vec<Vec<f64>>,
    /// Subtracted from every exponent; `log rho(M) + offset` is the pressure.
    pub offset: f64,
}

pub fn transfer_matrix(sft: &Sft, phi: &LocPotential, beta: f64) -> Result<TransferMatrix> {
    phi.check_system(sft)?;
    check_beta(beta)?;
    let scaled: Vec<f64> = phi.weights().iter().map(|w| beta * w).collect();
    let hi = scaled.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = scaled.iter().copied().fold(f64::INFINITY, f64::min);
    if hi - lo > MAX_SPREAD {
        return Err(Error::Overflow {
            beta,
            spread: hi - lo,
        });
    }
    let offset = if hi.abs().max(lo.abs()) > SAFE_EXPONENT {
        hi
    } else {
        0.0
    };
    let n = sft.vertex_count();
    let mut entries = vec![vec![0.0; n]; n];
    for (&(i, j), s) in sft.edges().iter().zip(&scaled) {
        entries[i][j] = (s - offset).exp();
    }
    Ok(TransferMatrix { entries, offset })
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "beta must be finite, got {beta}"
        )))
    }
}

/// Perron data of one strongly connected component at one `beta`.
///
/// The component matrix is conjugated by its Karp calibration: entries are
/// `exp(beta w_ij - level + u_i - u_j) <= 1` with every maximal-mean cycle
/// having product 1, so the root lies in `[1, size]` whatever `beta` is.
/// Entries that underflow to zero may split the component; `vertices`
/// holds the piece with the largest root.
#[derive(Debug, Clone)]
pub(crate) struct ComponentSpectrum {
    pub component: usize,
    pub pressure: f64,
    pub vertices: Vec<usize>,
    /// `(edge, local i, local j, calibrated entry)`.
    pub entries: Vec<(usize, usize, usize, f64)>,
    pub perron: Perron,
}

impl ComponentSpectrum {
    pub fn of(sft: &Sft, phi: &LocPotential, beta: f64, c: usize) -> Result<Self> {
        let verts = &sft.components()[c];
        let local = |v: usize| verts.binary_search(&v).expect("vertex in component");
        let edges = sft.component_edges(c);
        let arcs: Vec<(usize, usize, f64)> = edges
            .iter()
            .map(|&e| {
                let (i, j) = sft.edge(e);
                (local(i), local(j), beta * phi.weight(e))
            })
            .collect();
        let level = karp(verts.len(), &arcs);
        let u = longest_path_potentials(verts.len(), &arcs, level);
        let calibrated: Vec<(usize, usize, usize, f64)> = edges
            .iter()
            .zip(&arcs)
            .map(|(&e, &(i, j, w))| (e, i, j, (w - level + u[i] - u[j]).min(0.0).exp()))
            .filter(|t| t.3 > 0.0)
            .collect();
        let pieces = recurrent_components(verts.len(), calibrated.iter().map(|t| (t.1, t.2)));
        let mut best: Option<Self> = None;
        for piece in pieces {
            let pos = |v: usize| piece.binary_search(&v).ok();
            let entries: Vec<_> = calibrated
                .iter()
                .filter_map(|&(e, i, j, x)| Some((e, pos(i)?, pos(j)?, x)))
                .collect();
            let perron = linalg::perron(&dense(piece.len(), &entries))?;
            if best.as_ref().is_none_or(|b| perron.root > b.perron.root) {
                best = Some(Self {
                    component: c,
                    pressure: level + perron.root.ln(),
                    vertices: piece.iter().map(|&v| verts[v]).collect(),
                    entries,
                    perron,
                });
            }
        }
        best.ok_or_else(|| Error::InvariantViolation(format!("component {c} has no cycle")))
    }

    /// Equilibrium Markov measure carried by this component:
    /// `p_ij = M_ij r_j / (rho r_i)`.
    pub fn measure(&self, sft: &Sft) -> Result<MarkovMeasure> {
        perron_measure(sft, &self.vertices, &self.entries, &self.perron)
    }
}

pub(crate) fn dense(n: usize, entries: &[(usize, usize, usize, f64)]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for &(_, i, j, x) in entries {
        m[(i, j)] = x;
    }
    m
}

/// Markov measure from the Perron data of an irreducible piece given by
/// global `vertices` and local `entries`.
pub(crate) fn perron_measure(
    sft: &Sft,
    vertices: &[usize],
    entries: &[(usize, usize, usize, f64)],
    perron: &Perron,
) -> Result<MarkovMeasure> {
    let k = vertices.len();
    let r = &perron.right;
    let mut p = DMatrix::zeros(k, k);
    let mut probs = Vec::with_capacity(entries.len());
    for &(e, i, j, x) in entries {
        let q = x * r[j] / (perron.root * r[i]);
        p[(i, j)] = q;
        probs.push((e, q));
    }
    for i in 0..k {
        let s: f64 = p.row(i).sum();
        p.row_mut(i).scale_mut(1.0 / s);
    }
    let pi = linalg::stationary(&p)?;
    let mut stationary = vec![0.0; sft.vertex_count()];
    for (a, &v) in vertices.iter().enumerate() {
        stationary[v] = pi[a];
    }
    MarkovMeasure::from_parts(sft, probs, stationary)
}

pub(crate) fn component_spectra(
    sft: &Sft,
    phi: &LocPotential,
    beta: f64,
) -> Result<Vec<ComponentSpectrum>> {
    phi.check_system(sft)?;
    check_beta(beta)?;
    (0..sft.components().len())
        .map(|c| ComponentSpectrum::of(sft, phi, beta, c))
        .collect()
}

/// `P(beta * phi)`: the largest log Perron root over components.
pub fn pressure(sft: &Sft, phi: &LocPotential, beta: f64) -> Result<f64> {
    Ok(component_pressures(sft, phi, beta)?
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Pressure of each strongly connected component, in component order.
pub fn component_pressures(sft: &Sft, phi: &LocPotential, beta: f64) -> Result<Vec<f64>> {
    Ok(component_spectra(sft, phi, beta)?
        .into_iter()
        .map(|s| s.pressure)
        .collect())
}

/// Pressure together with the components attaining it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Equilibrium {
    pub beta: f64,
    pub pressure: f64,
    pub component_pressures: Vec<f64>,
    /// Components within `tol::TIE` of the maximum.
    pub tied: Vec<usize>,
    /// One ergodic equilibrium state per tied component.
    pub measures: Vec<MarkovMeasure>,
}

pub fn equilibrium(sft: &Sft, phi: &LocPotential, beta: f64) -> Result<Equilibrium> {
    let spectra = component_spectra(sft, phi, beta)?;
    let pressure = spectra
        .iter()
        .map(|s| s.pressure)
        .fold(f64::NEG_INFINITY, f64::max);
    let winners: Vec<&ComponentSpectrum> = spectra
        .iter()
        .filter(|s| s.pressure >= pressure - tol::TIE)
        .collect();
    let measures = winners
        .iter()
        .map(|s| s.measure(sft))
        .collect::<Result<Vec<_>>>()?;
    Ok(Equilibrium {
        beta,
        pressure,
        component_pressures: spectra.iter().map(|s| s.pressure).collect(),
        tied: winners.iter().map(|s| s.component).collect(),
        measures,
    })
}

/// Ergodic equilibrium states of `beta * phi`, one per maximizing component.
pub fn gibbs_measure(sft: &Sft, phi: &LocPotential, beta: f64) -> Result<Vec<MarkovMeasure>> {
    Ok(equilibrium(sft, phi, beta)?.measures)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub beta: f64,
    pub pressure: f64,
    pub asymptote: f64,
    pub gap: f64,
    /// Entropy and integral of the equilibrium state when it is unique.
    pub entropy: Option<f64>,
    pub integral: Option<f64>,
    pub n_components_tied: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PressureCurve {
    pub max_mean: f64,
    pub residual_entropy: f64,
    pub points: Vec<CurvePoint>,
}

pub const CURVE_COLUMNS: &str = "beta,pressure,asymptote,gap,entropy,integral,n_components_tied";

impl PressureCurve {
    pub fn betas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.beta).collect()
    }

    pub fn pressures(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.pressure).collect()
    }

    /// Most negative normalized second difference (zero for fewer than
    /// three points).
    pub fn min_second_difference(&self) -> f64 {
        self.points
            .windows(3)
            .map(|w| {
                let (h1, h2) = (w[1].beta - w[0].beta, w[2].beta - w[1].beta);
                let s1 = (w[1].pressure - w[0].pressure) / h1;
                let s2 = (w[2].pressure - w[1].pressure) / h2;
                (s2 - s1) * h1.min(h2)
            })
            .fold(0.0, f64::min)
    }

    /// Checks convexity and the asymptote lower bound.
    pub fn check(&self) -> Result<()> {
        let d2 = self.min_second_difference();
        if d2 < -tol::GIBBS {
            return Err(Error::InvariantViolation(format!(
                "pressure curve not convex: second difference {d2}"
            )));
        }
        if let Some(p) = self.points.iter().find(|p| p.gap < -tol::GIBBS) {
            return Err(Error::InvariantViolation(format!(
                "pressure below asymptote at beta = {}: gap {}",
                p.beta, p.gap
            )));
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
        let mut out = String::from(CURVE_COLUMNS);
        out.push('\n');
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                p.beta,
                p.pressure,
                p.asymptote,
                p.gap,
                opt(p.entropy),
                opt(p.integral),
                p.n_components_tied
            ));
        }
        out
    }
}

/// `beta -> P(beta * phi)` on an increasing non-negative grid, evaluated in
/// parallel.
pub fn pressure_curve(sft: &Sft, phi: &LocPotential, grid: &[f64]) -> Result<PressureCurve> {
    phi.check_system(sft)?;
    check_grid(grid)?;
    let asym = ergopt::asymptote(sft, phi)?;
    let points = grid
        .par_iter()
        .map(|&beta| {
            let eq = equilibrium(sft, phi, beta)?;
            let gap = ergopt::asymptote_gap(sft, phi, beta)?;
            let (entropy, integral) = match eq.measures.as_slice() {
                [m] => (Some(m.entropy()), Some(integrate(phi, m)?)),
                _ => (None, None),
            };
            Ok(CurvePoint {
                beta,
                pressure: eq.pressure,
                asymptote: asym.at(beta),
                gap,
                entropy,
                integral,
                n_components_tied: eq.tied.len(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PressureCurve {
        max_mean: asym.max_mean,
        residual_entropy: asym.residual_entropy,
        points,
    })
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("empty beta grid".into()));
    }
    if grid.iter().any(|b| !b.is_finite() || *b < 0.0) {
        return Err(Error::InvalidInput(
            "beta grid must be finite and non-negative".into(),
        ));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("beta grid must be increasing".into()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariationalReport {
    pub beta: f64,
    pub pressure: f64,
    pub trials: usize,
    pub seed: u64,
    /// Largest `h(m) + beta * int phi dm - P` over the random measures.
    pub max_violation: f64,
    /// Largest `P - h(m) - beta * int phi dm` over the random measures.
    pub max_gap: f64,
    /// Largest `|h + beta * int phi - P|` over the Gibbs measures.
    pub gibbs_error: f64,
    pub passed: bool,
}

/// Tests the variational principle against `trials` seeded random Markov
/// measures and the computed equilibrium states.
pub fn variational_check(
    sft: &Sft,
    phi: &LocPotential,
    beta: f64,
    trials: usize,
    seed: u64,
) -> Result<VariationalReport> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let eq = equilibrium(sft, phi, beta)?;
    let free_energy =
        |m: &MarkovMeasure| -> Result<f64> { Ok(m.entropy() + beta * integrate(phi, m)?) };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_violation = f64::NEG_INFINITY;
    let mut max_gap = f64::NEG_INFINITY;
    for _ in 0..trials {
        let m = random::markov_measure(sft, &mut rng)?;
        let d = free_energy(&m)? - eq.pressure;
        max_violation = max_violation.max(d);
        max_gap = max_gap.max(-d);
    }
    let mut gibbs_error = 0.0f64;
    for m in &eq.measures {
        gibbs_error = gibbs_error.max((free_energy(m)? - eq.pressure).abs());
    }
    Ok(VariationalReport {
        beta,
        pressure: eq.pressure,
        trials,
        seed,
        max_violation,
        max_gap,
        gibbs_error,
        passed: max_violation <= tol::VARIATIONAL && gibbs_error <= tol::GIBBS,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivativeReport {
    pub beta0: f64,
    pub step: f64,
    pub finite_difference: f64,
    pub integral: f64,
    pub error: f64,
    pub bound: f64,
    pub passed: bool,
}

/// Compares the central difference of `P_phi` at `beta0` with the integral
/// of `phi` against the equilibrium state.
pub fn derivative_check(
    sft: &Sft,
    phi: &LocPotential,
    beta0: f64,
    step: f64,
) -> Result<DerivativeReport> {
    if !(step > 0.0 && beta0 > step && beta0.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "need beta0 > step > 0, got beta0 = {beta0}, step = {step}"
        )));
    }
    let eq = equilibrium(sft, phi, beta0)?;
    if eq.tied.len() > 1 {
        return Err(Error::NondifferentiablePoint {
            beta: beta0,
            components: eq.tied,
        });
    }
    let side = |beta: f64| -> Result<(f64, usize)> {
        let ps = component_pressures(sft, phi, beta)?;
        let (c, p) = ps
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (c, p)| if p > acc.1 { (c, p) } else { acc },
            );
        Ok((p, c))
    };
    let (lo, c_lo) = side(beta0 - step)?;
    let (hi, c_hi) = side(beta0 + step)?;
    if c_lo != eq.tied[0] || c_hi != eq.tied[0] {
        let mut components = vec![c_lo, eq.tied[0], c_hi];
        components.sort_unstable();
        components.dedup();
        return Err(Error::NondifferentiablePoint {
            beta: beta0,
            components,
        });
    }
    let finite_difference = (hi - lo) / (2.0 * step);
    let integral = integrate(phi, &eq.measures[0])?;
    let error = (finite_difference - integral).abs();
    let bound = tol::DERIVATIVE_FLOOR.max(tol::DERIVATIVE_C * step * step);
    Ok(DerivativeReport {
        beta0,
        step,
        finite_difference,
        integral,
        error,
        bound,
        passed: error <= bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn symbol_one(t: f64) -> (Sft, LocPotential) {
        let s = Sft::full_shift(2).unwrap();
        let phi = LocPotential::on_symbol(&s, 1, t).unwrap();
        (s, phi)
    }

    #[test]
    fn zero_potential_gives_adjacency() {
        let (s, phi) = symbol_one(3.0);
        let m = transfer_matrix(&s, &phi, 0.0).unwrap();
        assert_eq!(m.entries, s.adjacency());
        let z = transfer_matrix(&s, &LocPotential::zero(&s), 7.0).unwrap();
        assert_eq!(z.entries, s.adjacency());
    }

    #[test]
    fn rows_are_one_and_e_to_the_t() {
        let (s, phi) = symbol_one(0.3);
        let m = transfer_matrix(&s, &phi, 1.0).unwrap();
        for row in &m.entries {
            assert_eq!(row[0], 1.0);
            assert_eq!(row[1], 0.3f64.exp());
        }
    }

    #[test]
    fn huge_exponents_are_offset_or_rejected() {
        let (s, phi) = symbol_one(1.0);
        let m = transfer_matrix(&s, &LocPotential::constant(&s, 1.0), 1000.0).unwrap();
        assert_eq!(m.offset, 1000.0);
        assert!(matches!(
            transfer_matrix(&s, &phi, 1000.0),
            Err(Error::Overflow { .. })
        ));
        // The calibrated pressure path has no such limit.
        let p = pressure(&s, &phi, 1000.0).unwrap();
        assert!((p - 1000.0).abs() < 1e-12);
    }

    #[test]
    fn closed_forms() {
        let s = Sft::full_shift(2).unwrap();
        assert!((pressure(&s, &LocPotential::zero(&s), 1.0).unwrap() - 2f64.ln()).abs() < 1e-13);
        let g = Sft::golden_mean();
        let golden = ((1.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((pressure(&g, &LocPotential::zero(&g), 1.0).unwrap() - golden).abs() < 1e-13);
        let c = LocPotential::constant(&s, -0.7);
        assert!((pressure(&s, &c, 3.0).unwrap() - (2f64.ln() - 2.1)).abs() < 1e-13);
        let (s, phi) = symbol_one(1.3);
        for beta in [0.0f64, 0.5, 2.0, 17.0] {
            let exact = (1.0 + (1.3 * beta).exp()).ln();
            assert!((pressure(&s, &phi, beta).unwrap() - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn gibbs_of_symbol_potential_is_bernoulli() {
        let t = 0.8f64;
        let (s, phi) = symbol_one(t);
        let ms = gibbs_measure(&s, &phi, 1.0).unwrap();
        assert_eq!(ms.len(), 1);
        let p1 = t.exp() / (1.0 + t.exp());
        for (e, &(_, j)) in s.edges().iter().enumerate() {
            let expect = if j == 1 { p1 } else { 1.0 - p1 };
            assert!((ms[0].transition()[e] - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn disjoint_copies_tie() {
        let a = Sft::full_shift(2).unwrap();
        let u = Sft::disjoint_union(&[&a, &a]).unwrap();
        let eq = equilibrium(&u, &LocPotential::zero(&u), 1.0).unwrap();
        assert_eq!(eq.tied, vec![0, 1]);
        assert_eq!(eq.measures.len(), 2);
    }

    #[test]
    fn constant_potential_curve_is_a_line() {
        let s = Sft::full_shift(2).unwrap();
        let phi = LocPotential::constant(&s, -1.0);
        let grid: Vec<f64> = (0..=10).map(f64::from).collect();
        let curve = pressure_curve(&s, &phi, &grid).unwrap();
        curve.check().unwrap();
        for p in &curve.points {
            assert!((p.pressure - (2f64.ln() - p.beta)).abs() < 1e-12);
            assert!(p.gap.abs() < 1e-12);
        }
        assert!(curve.to_csv().starts_with(CURVE_COLUMNS));
    }

    #[test]
    fn point_mass_respects_variational_bound() {
        let s = Sft::full_shift(2).unwrap();
        let report = variational_check(&s, &LocPotential::zero(&s), 1.0, 200, 7).unwrap();
        assert!(report.passed, "{report:?}");
        assert!(report.max_gap > 0.0);
    }

    #[test]
    fn derivative_of_symbol_potential() {
        let (s, phi) = symbol_one(1.0);
        let r = derivative_check(&s, &phi, 1.0, 1e-3).unwrap();
        let e = 1f64.exp();
        assert!((r.integral - e / (1.0 + e)).abs() < 1e-12);
        assert!(r.passed);
    }

    #[test]
    fn derivative_of_constant_is_the_constant() {
        let s = Sft::golden_mean();
        let phi = LocPotential::constant(&s, 2.5);
        let r = derivative_check(&s, &phi, 2.0, 1e-2).unwrap();
        assert!((r.finite_difference - 2.5).abs() < 1e-9);
        assert!((r.integral - 2.5).abs() < 1e-12);
    }
}
