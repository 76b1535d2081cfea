//! Renewal-class potentials on the full 2-shift.
//!
//! The potential takes the value `a_k` on the cylinder `[1^k 0]` and `0` at
//! the fixed point `1^inf`. Inducing on `[0]`, the first-return loop
//! `0 1^k` carries the Birkhoff sum `L_k = a_0 + ... + a_k`, and the
//! pressure of `beta * phi` is `log z` for the root of
//! `G_beta(z) = sum_k e^(beta L_k) z^-(k+1) = 1` when `G_beta(1) > 1`, and
//! `0` otherwise. All series are evaluated as certified [`Bracket`]s.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma_ur, ln_gamma};

use crate::ergopt::{FreezingReport, GapPoint};
use crate::error::{Error, Result};
use crate::series::{power_exp_tail, Bracket, Neumaier, MIN_START};
use crate::tol;

/// Closed-form values of `a_k` beyond the explicit table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase")]
pub enum TailRule {
    /// `a_k = scale * ln((k+1)/(k+2))`.
    Log { scale: f64 },
    /// `a_k = coeff * ratio^k`.
    Geometric { coeff: f64, ratio: f64 },
    /// `a_k = coeff * (k+1)^-exponent`.
    Power { coeff: f64, exponent: f64 },
}

impl TailRule {
    fn validate(&self) -> Result<()> {
        let ok = match *self {
            TailRule::Log { scale } => scale.is_finite() && scale >= 0.0,
            TailRule::Geometric { coeff, ratio } => {
                coeff.is_finite() && coeff <= 0.0 && ratio > 0.0 && ratio <= 1.0
            }
            TailRule::Power { coeff, exponent } => {
                coeff.is_finite() && coeff <= 0.0 && exponent.is_finite() && exponent > 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvariantViolation(format!(
                "tail rule {self:?} does not give a_k <= 0"
            )))
        }
    }

    fn value(&self, k: usize) -> f64 {
        let x = k as f64;
        match *self {
            TailRule::Log { scale } => scale * (-1.0 / (x + 2.0)).ln_1p(),
            TailRule::Geometric { coeff, ratio } => coeff * ratio.powf(x),
            TailRule::Power { coeff, exponent } => coeff * (x + 1.0).powf(-exponent),
        }
    }

    /// `sup_{j >= T} |a_j|`.
    fn bound(&self) -> f64 {
        match *self {
            TailRule::Log { scale } => scale * std::f64::consts::LN_2,
            TailRule::Geometric { coeff, .. } | TailRule::Power { coeff, .. } => coeff.abs(),
        }
    }

    fn scaled(&self, eps: f64) -> Self {
        match *self {
            TailRule::Log { scale } => TailRule::Log { scale: eps * scale },
            TailRule::Geometric { coeff, ratio } => TailRule::Geometric {
                coeff: eps * coeff,
                ratio,
            },
            TailRule::Power { coeff, exponent } => TailRule::Power {
                coeff: eps * coeff,
                exponent,
            },
        }
    }

    /// The rule keeps `L_k` bounded below, so `G_beta(1)` diverges.
    fn bounded_below(&self) -> bool {
        match *self {
            TailRule::Log { scale } => scale == 0.0,
            TailRule::Geometric { coeff, ratio } => coeff == 0.0 || ratio < 1.0,
            TailRule::Power { coeff, exponent } => coeff == 0.0 || exponent > 1.0,
        }
    }
}

/// `a_k` for `k < table.len()` from the table, then from the tail rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenewalPotential {
    table: Vec<f64>,
    tail: TailRule,
}

impl RenewalPotential {
    pub fn new(table: Vec<f64>, tail: TailRule) -> Result<Self> {
        if let Some(a) = table.iter().find(|a| !a.is_finite() || **a > 0.0) {
            return Err(Error::InvariantViolation(format!(
                "table entry {a} violates a_k <= 0"
            )));
        }
        tail.validate()?;
        Ok(Self { table, tail })
    }

    /// `L_k = -log(k+2)`: freezes where `zeta(beta) = 2`.
    pub fn zeta_family() -> Self {
        Self::new(vec![-std::f64::consts::LN_2], TailRule::Log { scale: 1.0 }).expect("valid")
    }

    /// `a_k = -1` for every `k`: freezes at `log 2`.
    pub fn constant_family() -> Self {
        Self::new(
            Vec::new(),
            TailRule::Geometric {
                coeff: -1.0,
                ratio: 1.0,
            },
        )
        .expect("valid")
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn tail(&self) -> TailRule {
        self.tail
    }

    /// Value at the fixed point `1^inf`.
    pub fn fixed_point_value(&self) -> f64 {
        0.0
    }

    pub fn a(&self, k: usize) -> f64 {
        self.table
            .get(k)
            .copied()
            .unwrap_or_else(|| self.tail.value(k))
    }

    /// Whether `a_k -> 0`, i.e. the potential is continuous at `1^inf`.
    pub fn is_continuous(&self) -> bool {
        !matches!(self.tail, TailRule::Geometric { coeff, ratio } if ratio == 1.0 && coeff != 0.0)
    }

    /// `sup |a_k|`.
    pub fn sup_norm(&self) -> f64 {
        self.table
            .iter()
            .fold(self.tail.bound(), |m, a| m.max(a.abs()))
    }

    /// `eps * self`.
    pub fn scaled(&self, eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "scale must be positive, got {eps}"
            )));
        }
        Self::new(
            self.table.iter().map(|a| eps * a).collect(),
            self.tail.scaled(eps),
        )
    }

    fn anchor(&self) -> (usize, f64) {
        let mut s = Neumaier::default();
        for &a in &self.table {
            s.add(a);
        }
        (self.table.len(), s.value())
    }

    /// `L_0 .. L_{count-1}`, closed form on the tail where one exists.
    fn sums(&self, count: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(count);
        let mut s = Neumaier::default();
        for &a in self.table.iter().take(count) {
            s.add(a);
            out.push(s.value());
        }
        let (t, base) = self.anchor();
        let tf = t as f64;
        for k in t..count {
            let kf = k as f64;
            let l = match self.tail {
                TailRule::Log { scale } => base + scale * ((tf + 1.0) / (kf + 2.0)).ln(),
                TailRule::Geometric { coeff, ratio: 1.0 } => base + coeff * (kf - tf + 1.0),
                TailRule::Geometric { coeff, ratio } => {
                    let m = kf - tf + 1.0;
                    base + coeff * ratio.powf(tf) * -(m * ratio.ln()).exp_m1() / (1.0 - ratio)
                }
                TailRule::Power { .. } => {
                    s.add(self.tail.value(k));
                    s.value()
                }
            };
            out.push(l);
        }
        out
    }
}

/// Loop sums `L_k = a_0 + ... + a_k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoopData {
    pub sums: Vec<f64>,
}

/// The first `count` loop sums.
pub fn loop_sums(p: &RenewalPotential, count: usize) -> Result<LoopData> {
    if count == 0 {
        return Err(Error::InvalidInput("need at least one loop sum".into()));
    }
    Ok(LoopData {
        sums: p.sums(count),
    })
}

/// Truncation indices tried before giving up on a tail.
const MAX_TERMS: usize = 1 << 24;
const FIRST_TERMS: usize = 64;

/// Tail `sum_{k >= K} e^(beta L_k - t(k+1))` given `sums = L_0..L_{K-1}`.
fn tail(p: &RenewalPotential, beta: f64, t: f64, sums: &[f64]) -> Bracket {
    let k = sums.len();
    let kf = k as f64;
    let last = sums[k - 1];
    let geo = |from: f64| {
        if t == 0.0 {
            f64::INFINITY
        } else {
            (-t * (from + 1.0)).exp() / -(-t).exp_m1()
        }
    };
    // L_k is non-increasing; a lower bound on L gives an enclosure.
    let bounded = |floor: f64, first: f64| Bracket {
        lo: (beta * floor).exp() * geo(kf),
        hi: (beta * first).exp() * geo(kf),
    };
    let first = last + p.tail.value(k);
    match p.tail {
        _ if p.tail.bounded_below() => {
            let floor = match p.tail {
                TailRule::Geometric { coeff, ratio } if ratio < 1.0 => {
                    last + coeff * ratio.powf(kf) / (1.0 - ratio)
                }
                TailRule::Power { coeff, exponent } if coeff != 0.0 => {
                    last + coeff * kf.powf(1.0 - exponent) / (exponent - 1.0)
                }
                _ => last,
            };
            bounded(floor, first)
        }
        TailRule::Log { scale } => {
            // e^{beta L_j} = e^{beta L_K} ((K+2)/(j+2))^{beta s}.
            let pexp = beta * scale;
            let lead = (beta * first - t * (kf + 1.0)).exp();
            power_exp_tail(pexp, t, kf + 2.0).scale(lead)
        }
        TailRule::Geometric { coeff, .. } => {
            let q = (beta * coeff - t).exp();
            if q >= 1.0 {
                Bracket::infinite()
            } else {
                Bracket::exact((beta * first - t * (kf + 1.0)).exp() / (1.0 - q))
            }
        }
        TailRule::Power {
            coeff,
            exponent: 1.0,
        } => {
            // H_{j+1} - H_K = ln((j+1.5)/(K+0.5)) + e with |e| < 1/(24 K^2).
            let pexp = beta * coeff.abs();
            let slack = pexp / (24.0 * kf * kf);
            let log_lead = beta * last + pexp * ((kf + 0.5) / (kf + 1.5)).ln() - t * (kf + 1.0);
            let core = power_exp_tail(pexp, t, kf + 1.5);
            Bracket {
                lo: core.lo * (log_lead - slack).exp(),
                hi: core.hi * (log_lead + slack).exp(),
            }
        }
        TailRule::Power { coeff, exponent } => {
            // Stretched exponential: L_j <= L_{K-1} - q ((j+2)^g - (K+1)^g) / ...
            let g = 1.0 - exponent;
            let q = beta * coeff.abs() / g;
            let a = kf + 1.0;
            let x = q * a.powf(g);
            let integral =
                (ln_gamma(1.0 / g) - (1.0 / g) * q.ln() - g.ln()).exp() * gamma_ur(1.0 / g, x);
            Bracket {
                lo: 0.0,
                hi: (beta * last + x).exp() * integral,
            }
        }
    }
}

/// Encloses `G_beta(e^t)` to absolute width `target`, or as tightly as
/// needed to decide its position relative to 1 when `decide` is set.
fn generating(
    p: &RenewalPotential,
    beta: f64,
    t: f64,
    target: f64,
    decide: bool,
) -> Result<Bracket> {
    let mut k = FIRST_TERMS.max(p.table.len() + 1).max(MIN_START as usize);
    loop {
        let sums = p.sums(k);
        let mut head = Neumaier::default();
        for (j, &l) in sums.iter().enumerate() {
            head.add((beta * l - t * (j as f64 + 1.0)).exp());
        }
        let head = head.value();
        let total = Bracket::exact(head).add(tail(p, beta, t, &sums));
        let total = Bracket {
            lo: total.lo - 1e-15 * head,
            hi: total.hi + 1e-15 * head,
        };
        if total.is_infinite() || total.lo > 1e300 {
            return Ok(Bracket::infinite());
        }
        if total.width() <= target || (decide && (total.lo > 1.0 || total.hi < 1.0)) {
            return Ok(total);
        }
        if k >= MAX_TERMS {
            return Err(Error::TailBoundFailure {
                tol: target,
                bound: total.width(),
            });
        }
        k *= 4;
    }
}

/// Sign of `G_beta(e^t) - 1`, or `None` when it is within `target` of 1.
fn compare_to_one(
    p: &RenewalPotential,
    beta: f64,
    t: f64,
    target: f64,
) -> Result<Option<Ordering>> {
    let g = generating(p, beta, t, target, true)?;
    Ok(if g.lo > 1.0 {
        Some(Ordering::Greater)
    } else if g.hi < 1.0 {
        Some(Ordering::Less)
    } else {
        None
    })
}

/// Certified enclosure of `G_beta(1)`.
pub fn generating_at_one(p: &RenewalPotential, beta: f64, tol: f64) -> Result<Bracket> {
    generating(p, beta, 0.0, tol, false)
}

/// `P(beta * phi)`.
pub fn renewal_pressure(p: &RenewalPotential, beta: f64, tol: f64) -> Result<f64> {
    if !(beta > 0.0 && beta.is_finite()) || !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "need beta > 0 and tol > 0, got {beta}, {tol}"
        )));
    }
    let target = tol / 10.0;
    if compare_to_one(p, beta, 0.0, target)? != Some(Ordering::Greater) {
        return Ok(0.0);
    }
    // G_beta(2) <= sum 2^-(k+1) = 1, so the root lies in (0, ln 2].
    let (mut lo, mut hi) = (0.0, std::f64::consts::LN_2);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        match compare_to_one(p, beta, mid, target)? {
            Some(Ordering::Greater) => lo = mid,
            Some(_) => hi = mid,
            None => return Ok(mid),
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Largest `beta` tried when looking for the frozen side.
const BETA_CEILING: f64 = 1e6;
/// Smallest `beta` tried when looking for the unfrozen side.
const BETA_FLOOR: f64 = 1e-9;

/// The least `beta0` with `G_beta0(1) = 1`: pressure vanishes from `beta0` on.
pub fn freezing_point(p: &RenewalPotential, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tol must be positive, got {tol}"
        )));
    }
    if p.tail.bounded_below() {
        return Err(Error::NeverFreezes(format!(
            "tail {:?} keeps the loop sums bounded below, so G_beta(1) diverges for every beta",
            p.tail
        )));
    }
    let (t, _) = p.anchor();
    if let Some(k) = p.sums(t.max(1)).iter().position(|&l| l == 0.0) {
        return Err(Error::NeverFreezes(format!(
            "L_{k} = 0, so G_beta(1) >= 1 plus positive terms for every beta"
        )));
    }
    let target = tol / 10.0;
    let above = |beta: f64| -> Result<bool> {
        Ok(compare_to_one(p, beta, 0.0, target)? == Some(Ordering::Greater))
    };
    if !above(BETA_FLOOR)? {
        return Err(Error::AlwaysFrozen {
            beta_min: BETA_FLOOR,
        });
    }
    let mut hi = 1.0;
    while above(hi)? {
        hi *= 2.0;
        if hi > BETA_CEILING {
            return Err(Error::NeverFreezes(format!(
                "G_beta(1) > 1 up to beta = {BETA_CEILING}"
            )));
        }
    }
    let mut lo = if hi > 1.0 { hi / 2.0 } else { BETA_FLOOR };
    while hi - lo > tol::BISECTION_BETA {
        let mid = 0.5 * (lo + hi);
        if above(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbramovReport {
    pub beta: f64,
    pub pressure: f64,
    /// `sum q_k`, 1 at the root.
    pub mass: f64,
    pub entropy: f64,
    pub integral: f64,
    pub mean_return: f64,
    /// `(entropy + beta * integral) / mean_return`.
    pub identity: f64,
    pub error: f64,
    pub passed: bool,
}

/// Checks the induced-system identity
/// `(H(q) + beta sum q_k L_k) / sum q_k (k+1) = P` for the return-time law
/// `q_k = e^(beta L_k) e^-(P(k+1))`.
pub fn abramov_check(p: &RenewalPotential, beta: f64) -> Result<AbramovReport> {
    let pressure = renewal_pressure(p, beta, tol::RENEWAL)?;
    if pressure == 0.0 {
        let g = generating(p, beta, 0.0, tol::RENEWAL, true)?;
        if g.hi < 1.0 {
            return Err(Error::InvalidInput(format!(
                "beta = {beta} is in the frozen regime; no renewal measure"
            )));
        }
        return Err(Error::InfiniteMeanReturn { beta });
    }
    let t = pressure;
    let growth = beta * p.tail.bound();
    let geo0 = |k: f64| (-t * (k + 1.0)).exp() / -(-t).exp_m1();
    let geo1 = |k: f64| {
        let e = (-t).exp();
        (-t * (k + 1.0)).exp() * ((k + 1.0) - k * e) / (e - 1.0).powi(2)
    };
    let mut k = FIRST_TERMS.max(p.table.len() + 1);
    let sums = loop {
        let sums = p.sums(k);
        let kf = k as f64;
        let last = sums[k - 1];
        // Weight 1 + (k+1) + beta |L_k| + t (k+1) <= c0 + c1 (k+1).
        let c0 = 1.0 + beta * last.abs();
        let c1 = 1.0 + growth + t;
        let bound = (beta * last).exp() * (c0 * geo0(kf) + c1 * geo1(kf));
        if bound <= 1e-13 {
            break sums;
        }
        if k >= MAX_TERMS {
            return Err(Error::InfiniteMeanReturn { beta });
        }
        k *= 2;
    };
    let (mut mass, mut entropy, mut integral, mut mean) = (
        Neumaier::default(),
        Neumaier::default(),
        Neumaier::default(),
        Neumaier::default(),
    );
    for (j, &l) in sums.iter().enumerate() {
        let n = j as f64 + 1.0;
        let log_q = beta * l - t * n;
        let q = log_q.exp();
        mass.add(q);
        entropy.add(-q * log_q);
        integral.add(q * l);
        mean.add(q * n);
    }
    let (entropy, integral, mean_return) = (entropy.value(), integral.value(), mean.value());
    let identity = (entropy + beta * integral) / mean_return;
    let error = (identity - pressure).abs();
    Ok(AbramovReport {
        beta,
        pressure,
        mass: mass.value(),
        entropy,
        integral,
        mean_return,
        identity,
        error,
        passed: error <= tol::GIBBS,
    })
}

/// `phi + eps * psi` for `phi = c 1[x_0 = 1]` and `psi = p`, renormalized so
/// the fixed point carries 0: `a'_0 = eps a_0 - c`, `a'_k = eps a_k`.
pub fn perturb_density(c: f64, p: &RenewalPotential, eps: f64) -> Result<RenewalPotential> {
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "c must be non-negative, got {c}"
        )));
    }
    let mut q = p.scaled(eps)?;
    if q.table.is_empty() {
        q.table.push(q.tail.value(0));
    }
    q.table[0] -= c;
    RenewalPotential::new(q.table, q.tail)
}

/// Freezing analysis on `[0, beta_max]`. The asymptote is `f = 0`, so the
/// gap profile is the pressure itself.
pub fn detect_freezing(p: &RenewalPotential, beta_max: f64, tol: f64) -> Result<FreezingReport> {
    if !(beta_max > 0.0 && beta_max.is_finite()) || !(tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "need beta_max > 0 and tol > 0, got {beta_max}, {tol}"
        )));
    }
    let beta0 = match freezing_point(p, tol::RENEWAL) {
        Ok(b) if b <= beta_max => Some(b),
        Ok(_) | Err(Error::NeverFreezes(_)) => None,
        Err(Error::AlwaysFrozen { .. }) => Some(0.0),
        Err(e) => return Err(e),
    };
    let gap_profile = (1..=50)
        .map(|k| {
            let beta = beta_max * k as f64 / 50.0;
            Ok(GapPoint {
                beta,
                gap: renewal_pressure(p, beta, tol::RENEWAL.min(tol))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FreezingReport {
        frozen: beta0.is_some(),
        beta0,
        max_mean: 0.0,
        residual_entropy: 0.0,
        flat_components: Vec::new(),
        gap_profile,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KinkReport {
    pub beta0: f64,
    pub step: f64,
    pub left_slope: f64,
    pub right_slope: f64,
    /// Ten times the worst slope error coming from the pressure tolerance.
    pub threshold: f64,
    pub passed: bool,
}

/// One-sided slopes of the pressure at the freezing point.
pub fn kink_check(p: &RenewalPotential, step: f64) -> Result<KinkReport> {
    let beta0 = freezing_point(p, tol::RENEWAL)?;
    if !(step > 0.0 && step < beta0) {
        return Err(Error::InvalidInput(format!(
            "step must lie in (0, {beta0})"
        )));
    }
    let at = |b: f64| renewal_pressure(p, b, tol::RENEWAL);
    let p0 = at(beta0)?;
    let left_slope = (p0 - at(beta0 - step)?) / step;
    let right_slope = (at(beta0 + step)? - p0) / step;
    let threshold = 10.0 * 2.0 * (tol::RENEWAL + tol::BISECTION_BETA) / step;
    Ok(KinkReport {
        beta0,
        step,
        left_slope,
        right_slope,
        threshold,
        passed: (right_slope - left_slope).abs() > threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Riemann zeta by alternating eta series with Borwein acceleration.
    fn zeta(s: f64) -> f64 {
        let n = 40usize;
        let mut d = vec![0.0; n + 1];
        let mut term = 1.0;
        d[0] = term;
        for i in 1..=n {
            term *= (4 * (n + i - 1) * (n - i + 1)) as f64 / ((2 * i - 1) * 2 * i) as f64;
            d[i] = d[i - 1] + term;
        }
        let mut eta = 0.0;
        for k in 0..n {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            eta += sign * (d[n] - d[k]) / ((k + 1) as f64).powf(s);
        }
        eta /= d[n];
        eta / (1.0 - 2f64.powf(1.0 - s))
    }

    #[test]
    fn zeta_oracle_sanity() {
        assert!((zeta(2.0) - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-13);
        assert!((zeta(4.0) - std::f64::consts::PI.powi(4) / 90.0).abs() < 1e-13);
    }

    #[test]
    fn loop_sums_telescope() {
        let z = RenewalPotential::zeta_family();
        let l = loop_sums(&z, 500).unwrap();
        for (k, &x) in l.sums.iter().enumerate() {
            assert!((x + ((k + 2) as f64).ln()).abs() < 1e-13, "{k}");
        }
        let g = RenewalPotential::new(
            Vec::new(),
            TailRule::Geometric {
                coeff: -1.0,
                ratio: 0.5,
            },
        )
        .unwrap();
        for (k, &x) in loop_sums(&g, 40).unwrap().sums.iter().enumerate() {
            assert!((x + 2.0 * (1.0 - 0.5f64.powi(k as i32 + 1))).abs() < 1e-14);
        }
        let zero = RenewalPotential::new(vec![0.0], TailRule::Log { scale: 0.0 }).unwrap();
        assert!(loop_sums(&zero, 10).unwrap().sums.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn zero_potential_recovers_log_two() {
        let zero = RenewalPotential::new(vec![0.0], TailRule::Log { scale: 0.0 }).unwrap();
        for beta in [0.5, 3.0] {
            let p = renewal_pressure(&zero, beta, 1e-10).unwrap();
            assert!((p - 2f64.ln()).abs() < 1e-10);
        }
        assert!(matches!(
            freezing_point(&zero, 1e-10),
            Err(Error::NeverFreezes(_))
        ));
    }

    #[test]
    fn zeta_family_series_at_two() {
        let z = RenewalPotential::zeta_family();
        let g = generating_at_one(&z, 2.0, 1e-12).unwrap();
        let exact = std::f64::consts::PI.powi(2) / 6.0 - 1.0;
        assert!(g.lo <= exact + 1e-15 && exact <= g.hi + 1e-15, "{g:?}");
        assert_eq!(renewal_pressure(&z, 2.0, 1e-10).unwrap(), 0.0);
        assert!(renewal_pressure(&z, 1.0, 1e-10).unwrap() > 0.0);
    }

    #[test]
    fn zeta_family_freezing_point() {
        let z = RenewalPotential::zeta_family();
        let b = freezing_point(&z, 1e-10).unwrap();
        assert!((zeta(b) - 2.0).abs() < 1e-9, "{b}");
    }

    #[test]
    fn constant_family_freezes_at_log_two() {
        let g = RenewalPotential::constant_family();
        assert!(!g.is_continuous());
        let b = freezing_point(&g, 1e-10).unwrap();
        assert!((b - 2f64.ln()).abs() < 1e-10);
        let p = renewal_pressure(&g, 0.3, 1e-12).unwrap();
        assert!((p - (2f64.ln() - 0.3)).abs() < 1e-11);
    }

    #[test]
    fn abramov_on_closed_forms() {
        let zero = RenewalPotential::new(vec![0.0], TailRule::Log { scale: 0.0 }).unwrap();
        let r = abramov_check(&zero, 1.0).unwrap();
        assert!(r.passed && (r.pressure - 2f64.ln()).abs() < 1e-10);
        let g = RenewalPotential::constant_family();
        assert!(abramov_check(&g, 0.5).unwrap().passed);
        let z = RenewalPotential::zeta_family();
        assert!(abramov_check(&z, 1.2).unwrap().passed);
    }

    #[test]
    fn density_scaling() {
        let z = RenewalPotential::zeta_family();
        assert_eq!(perturb_density(0.0, &z, 1.0).unwrap(), z);
        let half = perturb_density(0.0, &z, 0.5).unwrap();
        let b1 = freezing_point(&z, 1e-10).unwrap();
        let b2 = freezing_point(&half, 1e-10).unwrap();
        assert!((b2 - 2.0 * b1).abs() < 1e-9);
        let g = perturb_density(0.0, &RenewalPotential::constant_family(), 2.0).unwrap();
        assert!((freezing_point(&g, 1e-10).unwrap() - 2f64.ln() / 2.0).abs() < 1e-10);
        assert!(perturb_density(-1.0, &z, 1.0).is_err());
        assert!(perturb_density(0.0, &z, 0.0).is_err());
    }

    #[test]
    fn positive_entries_rejected() {
        assert!(RenewalPotential::new(vec![0.1], TailRule::Log { scale: 1.0 }).is_err());
        assert!(RenewalPotential::new(
            vec![],
            TailRule::Power {
                coeff: 1.0,
                exponent: 2.0
            }
        )
        .is_err());
    }

    #[test]
    fn power_tails() {
        // a_k = -2/(k+1): L_k = -2 H_{k+1}, G_beta(1) = sum e^{-2 beta H_{k+1}}.
        let h = RenewalPotential::new(
            Vec::new(),
            TailRule::Power {
                coeff: -2.0,
                exponent: 1.0,
            },
        )
        .unwrap();
        let mut direct = 0.0;
        let mut harmonic = 0.0;
        for k in 0..2_000_000u64 {
            harmonic += 1.0 / (k + 1) as f64;
            direct += (-2.0 * 1.5 * harmonic).exp();
        }
        let g = generating_at_one(&h, 1.5, 1e-9).unwrap();
        // The direct sum misses a tail of order n^-2.
        assert!(
            g.lo <= direct + 1e-6 && direct <= g.hi + 1e-12,
            "{g:?} vs {direct}"
        );
        let stretched = RenewalPotential::new(
            Vec::new(),
            TailRule::Power {
                coeff: -1.0,
                exponent: 0.5,
            },
        )
        .unwrap();
        assert!(freezing_point(&stretched, 1e-10).is_ok());
        let summable = RenewalPotential::new(
            vec![-1.0],
            TailRule::Power {
                coeff: -1.0,
                exponent: 2.0,
            },
        )
        .unwrap();
        assert!(matches!(
            freezing_point(&summable, 1e-10),
            Err(Error::NeverFreezes(_))
        ));
        assert!(renewal_pressure(&summable, 3.0, 1e-10).unwrap() > 0.0);
    }

    #[test]
    fn kink_on_constant_family() {
        let r = kink_check(&RenewalPotential::constant_family(), 1e-3).unwrap();
        assert!(r.passed, "{r:?}");
        assert!((r.left_slope + 1.0).abs() < 1e-6);
        assert!(r.right_slope.abs() < 1e-6);
    }
}
