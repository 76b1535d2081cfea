//! Enclosures for tails of positive series.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use serde::Serialize;

/// A closed interval known to contain a quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn exact(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn infinite() -> Self {
        Self {
            lo: f64::INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn around(x: f64, err: f64) -> Self {
        Self {
            lo: x - err,
            hi: x + err,
        }
    }

    pub fn width(&self) -> f64 {
        if self.lo.is_infinite() {
            0.0
        } else {
            self.hi - self.lo
        }
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn is_infinite(&self) -> bool {
        self.lo == f64::INFINITY
    }

    pub fn add(self, other: Self) -> Self {
        Self {
            lo: self.lo + other.lo,
            hi: self.hi + other.hi,
        }
    }

    /// Multiplies by a non-negative factor.
    pub fn scale(self, k: f64) -> Self {
        if k == 0.0 {
            return Self::exact(0.0);
        }
        Self {
            lo: self.lo * k,
            hi: self.hi * k,
        }
    }
}

/// Compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Neumaier {
    sum: f64,
    carry: f64,
}

impl Neumaier {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `B_2, B_4, B_6, B_8`.
const BERNOULLI: [f64; 4] = [1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0];

fn rules() -> &'static (GaussLegendre, GaussLegendre) {
    static RULES: OnceLock<(GaussLegendre, GaussLegendre)> = OnceLock::new();
    RULES.get_or_init(|| {
        (
            GaussLegendre::new(NonZeroUsize::new(20).expect("non-zero")),
            GaussLegendre::new(NonZeroUsize::new(30).expect("non-zero")),
        )
    })
}

/// Smallest start point accepted by [`power_exp_tail`].
pub(crate) const MIN_START: f64 = 32.0;

/// Encloses `sum_{m >= 0} f(n + m) / f(n)` for `f(x) = x^-p e^-(t x)`,
/// `p >= 0`, `t >= 0`, `n >= MIN_START`.
///
/// Euler–Maclaurin to fourth order: `f` is completely monotone, so the
/// remainder is at most `2 |B_8| / 8! * |f'''''''(n)|`. The integral term
/// is closed form when `t = 0` and otherwise computed after `x = n e^s` by
/// composite Gauss–Legendre; its error is taken as the spread between two
/// rule orders plus a rigorous bound on the truncated range.
pub(crate) fn power_exp_tail(p: f64, t: f64, n: f64) -> Bracket {
    debug_assert!(n >= MIN_START && p >= 0.0 && t >= 0.0);
    if t == 0.0 && p <= 1.0 {
        return Bracket::infinite();
    }
    if t >= DIRECT_BELOW_RATE {
        return direct_tail(p, t, n);
    }
    // d[k] = f^(k)(n) / f(n) for k = 1, 3, 5, 7.
    let rising = |i: usize| (0..i).map(|j| p + j as f64).product::<f64>();
    let deriv = |k: usize| {
        let mut s = 0.0;
        let mut binom = 1.0;
        for i in 0..=k {
            s += binom * rising(i) * n.powi(-(i as i32)) * t.powi((k - i) as i32);
            binom = binom * (k - i) as f64 / (i + 1) as f64;
        }
        if k % 2 == 1 {
            -s
        } else {
            s
        }
    };
    let (integral, integral_err) = integral_term(p, t, n);
    let mut value = integral + 0.5;
    let mut factorial = 1.0;
    for (j, b) in BERNOULLI.iter().enumerate() {
        let order = 2 * j + 2;
        factorial *= ((order - 1) * order) as f64;
        value -= b / factorial * deriv(order - 1);
    }
    let remainder = 2.0 * BERNOULLI[3].abs() / factorial * deriv(7).abs();
    let rounding = 1e-15 * value.abs();
    Bracket::around(value, remainder + integral_err + rounding)
}

/// Decay rate above which the series is summed term by term.
const DIRECT_BELOW_RATE: f64 = 0.05;

/// Terms decay at least as fast as `e^-t`, so after `m` terms the rest is at
/// most `f(n + m) / (1 - e^-t)`.
fn direct_tail(p: f64, t: f64, n: f64) -> Bracket {
    let mut s = Neumaier::default();
    let mut m = 0.0;
    loop {
        let term = (-p * (m / n).ln_1p() - t * m).exp();
        if term < 1e-18 {
            let rest = term / -(-t).exp_m1();
            let v = s.value();
            return Bracket {
                lo: v * (1.0 - 1e-15),
                hi: v * (1.0 + 1e-15) + rest,
            };
        }
        s.add(term);
        m += 1.0;
    }
}

/// `int_n^inf (x/n)^-p e^-(t (x - n)) dx` and an error estimate.
fn integral_term(p: f64, t: f64, n: f64) -> (f64, f64) {
    if t == 0.0 {
        return (n / (p - 1.0), 0.0);
    }
    let tn = t * n;
    let ell = |s: f64| (1.0 - p) * s - tn * s.exp_m1();
    let slope = |s: f64| (1.0 - p) - tn * s.exp();
    let peak = if p < 1.0 {
        ((1.0 - p) / tn).ln().max(0.0)
    } else {
        0.0
    };
    let top = ell(peak);
    let mut end = peak;
    while ell(end) > top - 60.0 || slope(end) > -1.0 {
        end += 0.5;
    }
    // ell is concave, so beyond `end` the integrand sits under a decaying
    // exponential.
    let cut = ell(end).exp() / -slope(end);
    let (coarse, fine) = rules();
    let panels = (end / 0.5).ceil().max(1.0) as usize;
    let width = end / panels as f64;
    let mut a = Neumaier::default();
    let mut b = Neumaier::default();
    for k in 0..panels {
        let (s0, s1) = (k as f64 * width, (k + 1) as f64 * width);
        a.add(coarse.integrate(s0, s1, |s| ell(s).exp()));
        b.add(fine.integrate(s0, s1, |s| ell(s).exp()));
    }
    let value = n * (b.value() + 0.5 * cut);
    let err = n * ((a.value() - b.value()).abs() + 0.5 * cut + 1e-15 * b.value());
    (value, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn direct(p: f64, t: f64, n: f64, terms: usize) -> f64 {
        let f = |x: f64| (-p * (x / n).ln() - t * (x - n)).exp();
        let mut s = Neumaier::default();
        for m in 0..terms {
            s.add(f(n + m as f64));
        }
        s.value()
    }

    #[test]
    fn geometric_case_matches_closed_form() {
        // p = 0: sum of e^{-t m} = 1 / (1 - e^{-t}).
        for t in [0.01, 0.3, 2.0] {
            let b = power_exp_tail(0.0, t, 40.0);
            let exact = 1.0 / -(-t).exp_m1();
            assert!(b.lo <= exact && exact <= b.hi, "{t}: {b:?} vs {exact}");
            assert!(b.width() < 1e-12 * exact);
        }
    }

    #[test]
    fn pure_power_against_direct_sum() {
        // Geometric decay makes a direct sum exact enough to compare.
        for (p, t) in [(1.5, 0.05), (0.5, 0.2), (3.0, 0.01), (1.0, 0.5)] {
            let b = power_exp_tail(p, t, 64.0);
            let d = direct(p, t, 64.0, 20_000);
            assert!(
                b.lo - 1e-12 * d <= d && d <= b.hi + 1e-12 * d,
                "{p},{t}: {b:?} vs {d}"
            );
            assert!(b.width() < 1e-11 * d, "{b:?}");
        }
    }

    #[test]
    fn divergent_and_zero_t() {
        assert!(power_exp_tail(1.0, 0.0, 32.0).is_infinite());
        // p = 2, t = 0: sum_{m>=0} (32/(32+m))^2 = 32^2 * psi'(32).
        let b = power_exp_tail(2.0, 0.0, 32.0);
        let trigamma_32 = 0.031_743_366_520_302_09;
        let exact = 1024.0 * trigamma_32;
        assert!((b.mid() - exact).abs() < 1e-9, "{b:?} vs {exact}");
    }
}
