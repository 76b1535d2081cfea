//! Stationary Markov measures on an [`Sft`], the computable stand-ins for
//! shift-invariant probability measures.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::cycles::Cycle;
use crate::error::{Error, Result};
use crate::linalg;
use crate::sft::{recurrent_components, LocPotential, Sft};
use crate::tol;

/// A stationary Markov measure: transition probabilities on the edges of an
/// [`Sft`] plus a stationary vertex distribution.
///
/// Rows of vertices outside the support carry the uniform distribution over
/// out-edges so that the transition matrix is stochastic everywhere; those
/// rows have no influence on the measure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarkovMeasure {
    #[serde(skip)]
    system: u64,
    #[serde(skip)]
    edges: Vec<(usize, usize)>,
    transition: Vec<f64>,
    stationary: Vec<f64>,
}

impl MarkovMeasure {
    /// Validates the row sums and stationarity.
    pub fn new(sft: &Sft, transition: Vec<f64>, stationary: Vec<f64>) -> Result<Self> {
        if transition.len() != sft.edge_count() || stationary.len() != sft.vertex_count() {
            return Err(Error::InvalidInput(
                "measure dimensions do not match system".into(),
            ));
        }
        let m = Self {
            system: sft.fingerprint(),
            edges: sft.edges().to_vec(),
            transition,
            stationary,
        };
        m.validate()?;
        Ok(m)
    }

    /// Builds a measure from edge probabilities whose support has a single
    /// recurrent class; the stationary vector is solved for.
    pub fn from_transition(sft: &Sft, transition: Vec<f64>) -> Result<Self> {
        if transition.len() != sft.edge_count() {
            return Err(Error::InvalidInput(
                "one probability per edge required".into(),
            ));
        }
        let n = sft.vertex_count();
        let support = sft
            .edges()
            .iter()
            .zip(&transition)
            .filter(|(_, &p)| p > 0.0)
            .map(|(&e, _)| e);
        let classes = recurrent_components(n, support);
        // A recurrent class has no positive-probability edge leaving it.
        let closed: Vec<&Vec<usize>> = classes
            .iter()
            .filter(|class| {
                class.iter().all(|&v| {
                    sft.out_edges(v).iter().all(|&e| {
                        transition[e] <= 0.0 || class.binary_search(&sft.edge(e).1).is_ok()
                    })
                })
            })
            .collect();
        let [class] = closed.as_slice() else {
            return Err(Error::InvalidInput(format!(
                "{} closed classes; stationary distribution is not unique",
                closed.len()
            )));
        };
        let pos = |v: usize| class.binary_search(&v).ok();
        let k = class.len();
        let mut p = DMatrix::zeros(k, k);
        for (e, &(i, j)) in sft.edges().iter().enumerate() {
            if let (Some(a), Some(b)) = (pos(i), pos(j)) {
                p[(a, b)] = transition[e];
            }
        }
        let pi = linalg::stationary(&p)?;
        let mut stationary = vec![0.0; n];
        for (a, &v) in class.iter().enumerate() {
            stationary[v] = pi[a];
        }
        Self::new(sft, transition, stationary)
    }

    /// Uniform measure on a simple cycle (the periodic orbit it spells).
    pub fn uniform_on_cycle(sft: &Sft, cycle: &Cycle) -> Result<Self> {
        let mut transition = default_rows(sft);
        let mut stationary = vec![0.0; sft.vertex_count()];
        let len = cycle.len() as f64;
        for (&v, &e) in cycle.vertices().iter().zip(cycle.edges()) {
            if sft.edge(e).0 != v {
                return Err(Error::InvalidInput(
                    "cycle does not belong to this system".into(),
                ));
            }
            for &f in sft.out_edges(v) {
                transition[f] = 0.0;
            }
            transition[e] = 1.0;
            stationary[v] = 1.0 / len;
        }
        Self::new(sft, transition, stationary)
    }

    /// Assembles a measure from per-vertex rows given on a support set; all
    /// other rows get the default.
    pub(crate) fn from_parts(
        sft: &Sft,
        edge_probs: impl IntoIterator<Item = (usize, f64)>,
        stationary: Vec<f64>,
    ) -> Result<Self> {
        let mut transition = default_rows(sft);
        let mut touched = vec![false; sft.vertex_count()];
        let probs: Vec<(usize, f64)> = edge_probs.into_iter().collect();
        for &(e, _) in &probs {
            touched[sft.edge(e).0] = true;
        }
        for (v, t) in touched.iter().enumerate() {
            if *t {
                for &f in sft.out_edges(v) {
                    transition[f] = 0.0;
                }
            }
        }
        for (e, p) in probs {
            transition[e] = p;
        }
        // Exact row normalization on the touched rows.
        for (v, t) in touched.iter().enumerate() {
            if *t {
                let s: f64 = sft.out_edges(v).iter().map(|&f| transition[f]).sum();
                for &f in sft.out_edges(v) {
                    transition[f] /= s;
                }
            }
        }
        let total: f64 = stationary.iter().sum();
        let stationary = stationary.into_iter().map(|x| x / total).collect();
        Self::new(sft, transition, stationary)
    }

    /// `t * self + (1 - t) * other`. Supports must be disjoint so the
    /// mixture is again a Markov measure.
    pub fn mix(&self, other: &Self, t: f64) -> Result<Self> {
        if self.system != other.system {
            return Err(Error::SystemMismatch);
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidInput(format!(
                "mixing weight {t} outside [0, 1]"
            )));
        }
        if self
            .stationary
            .iter()
            .zip(&other.stationary)
            .any(|(a, b)| *a > 0.0 && *b > 0.0)
        {
            return Err(Error::InvalidInput(
                "mixture of overlapping supports".into(),
            ));
        }
        let mut transition = self.transition.clone();
        for (e, &(i, _)) in self.edges.iter().enumerate() {
            if other.stationary[i] > 0.0 {
                transition[e] = other.transition[e];
            }
        }
        let stationary = self
            .stationary
            .iter()
            .zip(&other.stationary)
            .map(|(a, b)| t * a + (1.0 - t) * b)
            .collect();
        Ok(Self {
            system: self.system,
            edges: self.edges.clone(),
            transition,
            stationary,
        })
    }

    fn validate(&self) -> Result<()> {
        let n = self.stationary.len();
        let mut row = vec![0.0; n];
        let mut flow = vec![0.0; n];
        for (e, &(i, j)) in self.edges.iter().enumerate() {
            let p = self.transition[e];
            if !(p >= 0.0) {
                return Err(Error::InvariantViolation(format!(
                    "negative probability on edge {e}"
                )));
            }
            row[i] += p;
            flow[j] += self.stationary[i] * p;
        }
        if let Some(v) = row.iter().position(|s| (s - 1.0).abs() > tol::ROW_SUM) {
            return Err(Error::InvariantViolation(format!(
                "row {v} sums to {}",
                row[v]
            )));
        }
        if self.stationary.iter().any(|&x| !(x >= 0.0)) {
            return Err(Error::InvariantViolation("negative stationary mass".into()));
        }
        let total: f64 = self.stationary.iter().sum();
        if (total - 1.0).abs() > tol::STATIONARY {
            return Err(Error::InvariantViolation(format!(
                "stationary mass {total}"
            )));
        }
        if let Some(v) = (0..n).find(|&v| (flow[v] - self.stationary[v]).abs() > tol::STATIONARY) {
            return Err(Error::InvariantViolation(format!(
                "not stationary at vertex {v}: {} vs {}",
                flow[v], self.stationary[v]
            )));
        }
        Ok(())
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

    /// Transition probability of each edge.
    pub fn transition(&self) -> &[f64] {
        &self.transition
    }

    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    /// Dense row-stochastic matrix.
    pub fn transition_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.stationary.len();
        let mut p = vec![vec![0.0; n]; n];
        for (e, &(i, j)) in self.edges.iter().enumerate() {
            p[i][j] = self.transition[e];
        }
        p
    }

    /// Stationary mass of each edge, `pi_i p_ij`.
    pub fn edge_marginals(&self) -> Vec<f64> {
        self.edges
            .iter()
            .zip(&self.transition)
            .map(|(&(i, _), &p)| self.stationary[i] * p)
            .collect()
    }

    /// Vertices with positive stationary mass.
    pub fn support(&self) -> Vec<usize> {
        (0..self.stationary.len())
            .filter(|&v| self.stationary[v] > 0.0)
            .collect()
    }

    /// Kolmogorov–Sinai entropy in nats.
    pub fn entropy(&self) -> f64 {
        let h: f64 = self
            .edges
            .iter()
            .zip(&self.transition)
            .filter(|(_, &p)| p > 0.0)
            .map(|(&(i, _), &p)| -self.stationary[i] * p * p.ln())
            .sum();
        h.max(0.0)
    }

    /// Distance between two measures on the same system: largest
    /// difference of stationary masses, or of transition probabilities on
    /// rows in either support.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        if self.system != other.system {
            return Err(Error::SystemMismatch);
        }
        let mut d = self
            .stationary
            .iter()
            .zip(&other.stationary)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        for (e, &(i, _)) in self.edges.iter().enumerate() {
            if self.stationary[i] > 0.0 || other.stationary[i] > 0.0 {
                d = d.max((self.transition[e] - other.transition[e]).abs());
            }
        }
        Ok(d)
    }
}

fn default_rows(sft: &Sft) -> Vec<f64> {
    sft.edges()
        .iter()
        .map(|&(i, _)| 1.0 / sft.out_edges(i).len() as f64)
        .collect()
}

/// Entropy of a Markov measure, `-sum_i pi_i sum_j p_ij ln p_ij`.
pub fn markov_entropy(m: &MarkovMeasure) -> f64 {
    m.entropy()
}

/// `sum_{edges} pi_i p_ij w_ij`.
pub fn integrate(phi: &LocPotential, m: &MarkovMeasure) -> Result<f64> {
    if phi.system() != m.system {
        return Err(Error::SystemMismatch);
    }
    Ok(m.edges
        .iter()
        .zip(&m.transition)
        .zip(phi.weights())
        .map(|((&(i, _), &p), &w)| m.stationary[i] * p * w)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::enumerate_simple_cycles;

    fn bernoulli(s: &Sft, p1: f64) -> MarkovMeasure {
        let t = s
            .edges()
            .iter()
            .map(|&(_, j)| if j == 1 { p1 } else { 1.0 - p1 })
            .collect();
        MarkovMeasure::from_transition(s, t).unwrap()
    }

    #[test]
    fn uniform_bernoulli_entropy_is_log_two() {
        let s = Sft::full_shift(2).unwrap();
        let m = bernoulli(&s, 0.5);
        assert!((m.entropy() - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn loop_point_mass_has_zero_entropy() {
        let s = Sft::full_shift(2).unwrap();
        let cycles = enumerate_simple_cycles(&s).unwrap();
        let m = MarkovMeasure::uniform_on_cycle(&s, &cycles.cycles()[0]).unwrap();
        assert_eq!(m.entropy(), 0.0);
    }

    #[test]
    fn parry_measure_of_golden_mean() {
        // Parry measure: p_00 = 1/g, p_01 = 1/g^2, p_10 = 1.
        let g = (1.0 + 5f64.sqrt()) / 2.0;
        let s = Sft::golden_mean();
        let m = MarkovMeasure::from_transition(&s, vec![1.0 / g, 1.0 / (g * g), 1.0]).unwrap();
        assert!((m.entropy() - g.ln()).abs() < 1e-14);
        assert!((g.ln() - 0.4812118250596034).abs() < 1e-15);
    }

    #[test]
    fn integral_of_symbol_indicator_is_frequency() {
        let s = Sft::full_shift(2).unwrap();
        let phi = LocPotential::on_symbol(&s, 1, 1.0).unwrap();
        let m = bernoulli(&s, 0.3);
        assert!((integrate(&phi, &m).unwrap() - 0.3).abs() < 1e-15);
        let c = LocPotential::constant(&s, -2.5);
        assert!((integrate(&c, &m).unwrap() + 2.5).abs() < 1e-15);
    }

    #[test]
    fn mismatch_is_detected() {
        let s = Sft::full_shift(2).unwrap();
        let g = Sft::golden_mean();
        let m = bernoulli(&s, 0.3);
        assert_eq!(
            integrate(&LocPotential::zero(&g), &m),
            Err(Error::SystemMismatch)
        );
    }

    #[test]
    fn bad_rows_rejected() {
        let s = Sft::full_shift(2).unwrap();
        assert!(matches!(
            MarkovMeasure::new(&s, vec![0.5, 0.6, 0.5, 0.5], vec![0.5, 0.5]),
            Err(Error::InvariantViolation(_))
        ));
        assert!(matches!(
            MarkovMeasure::new(&s, vec![0.5, 0.5, 0.5, 0.5], vec![0.9, 0.2]),
            Err(Error::InvariantViolation(_))
        ));
    }

    #[test]
    fn two_closed_classes_rejected() {
        let s = Sft::build(2, &[(0, 0), (1, 1)]).unwrap();
        assert!(MarkovMeasure::from_transition(&s, vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn every_cycle_measure_is_invariant() {
        let s = Sft::full_shift(3).unwrap();
        for c in enumerate_simple_cycles(&s).unwrap().cycles() {
            let m = MarkovMeasure::uniform_on_cycle(&s, c).unwrap();
            assert_eq!(m.entropy(), 0.0);
        }
    }
}
