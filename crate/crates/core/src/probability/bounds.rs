use serde::{Deserialize, Serialize};

use super::pmf::poisson_pmf;
use crate::error::{Error, Result};

/// Transfer of a Poisson-process tail bound to the fixed-`n` process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DepoissonizationCheck {
    /// `D1 = √n · e^{−n} nⁿ / n!`, so that `P(N_P = n) = D1/√n`.
    pub d1: f64,
    /// `1 − D√n · q` with `D = 1/D1`, clamped to `[0, 1]`.
    pub bound: f64,
    /// Whether the supplied fixed-`n` probability respects the bound.
    pub satisfied: bool,
}

/// Lower bound on `P(A)` for `n` nodes from the complement probability
/// `q = P(A_P^c)` under the Poisson process with mean `n`:
/// `P(A^c) ≤ P(A_P^c) / P(N_P = n)`.
pub fn depoissonization_check(event_prob_binomial: f64, event_prob_poisson_complement: f64, n: u64) -> Result<DepoissonizationCheck> {
    for (name, v) in [("binomial event probability", event_prob_binomial), ("Poisson complement probability", event_prob_poisson_complement)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::param(format!("{name} must lie in [0, 1], got {v}")));
        }
    }
    if n == 0 {
        return Err(Error::param("need n >= 1"));
    }
    let at_n = poisson_pmf(n, n as f64)?;
    let d1 = (n as f64).sqrt() * at_n;
    let bound = (1.0 - event_prob_poisson_complement / at_n).clamp(0.0, 1.0);
    Ok(DepoissonizationCheck { d1, bound, satisfied: event_prob_binomial >= bound })
}

/// `(1 − λ)² E[X]² / E[X²]`, a lower bound on `P(X ≥ λ E[X])` for `X ≥ 0`.
pub fn paley_zygmund_bound(mean: f64, second_moment: f64, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::param(format!("need 0 < lambda < 1, got {lambda}")));
    }
    if !(mean > 0.0) || !(second_moment >= mean * mean) {
        return Err(Error::param(format!("need E[X^2] >= E[X]^2 > 0, got mean={mean}, second={second_moment}")));
    }
    Ok((1.0 - lambda).powi(2) * mean * mean / second_moment)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_complement_gives_one() {
        let c = depoissonization_check(0.3, 0.0, 50).unwrap();
        assert_eq!(c.bound, 1.0);
        assert!(!c.satisfied);
    }

    #[test]
    fn d1_at_ten_matches_factorial() {
        let fact10: f64 = (1..=10).map(|i| i as f64).product();
        let exact = 10f64.sqrt() * (-10f64).exp() * 1e10 / fact10;
        let c = depoissonization_check(1.0, 1e-4, 10).unwrap();
        assert!(((c.d1 - exact) / exact).abs() < 1e-13);
        let mut last = 1.0;
        for q in [0.0, 1e-4, 1e-3, 1e-2, 0.1, 0.5, 1.0] {
            let b = depoissonization_check(1.0, q, 10).unwrap().bound;
            assert!((0.0..=1.0).contains(&b));
            assert!(b <= last);
            last = b;
        }
    }

    #[test]
    fn paley_zygmund_values() {
        assert!((paley_zygmund_bound(2.0, 4.0, 0.5).unwrap() - 0.25).abs() < 1e-15);
        assert!((paley_zygmund_bound(1.0, 2.0, 0.5).unwrap() - 0.125).abs() < 1e-15);
        assert!(paley_zygmund_bound(1.0, 0.5, 0.5).is_err());
        assert!(paley_zygmund_bound(1.0, 2.0, 1.0).is_err());
    }
}
