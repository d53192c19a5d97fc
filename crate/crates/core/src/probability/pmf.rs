// Binomial and Poisson probabilities in log space via Loader's saddle-point
// expansion ("Fast and Accurate Computation of Binomial Probabilities",
// 2000): log-pmfs are assembled from the Stirling remainder and the
// deviance term bd0, both of which are computed without cancellation.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// `ln k! − ((k + ½) ln k − k + ½ ln 2π)`, the error of Stirling's formula.
fn stirlerr(k: u64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if k <= 15 {
        // k! is exact in f64 here
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        let kf = k as f64;
        return fact.ln() - (kf + 0.5) * kf.ln() + kf - 0.5 * LN_2PI;
    }
    let n = k as f64;
    let nn = n * n;
    if k > 500 {
        (S0 - S1 / nn) / n
    } else if k > 80 {
        (S0 - (S1 - S2 / nn) / nn) / n
    } else if k > 35 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
    }
}

/// Deviance `x ln(x/m) + m − x`, accurate when `x ≈ m`.
fn bd0(x: f64, m: f64) -> f64 {
    if (x - m).abs() < 0.1 * (x + m) {
        let mut v = (x - m) / (x + m);
        let mut s = (x - m) * v;
        let mut ej = 2.0 * x * v;
        v *= v;
        for j in 1..1000 {
            ej *= v;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        s
    } else {
        x * (x / m).ln() + m - x
    }
}

fn check_prob(p: f64, what: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!("{what} must lie in [0, 1], got {p}")));
    }
    Ok(())
}

fn ln_binomial_raw(k: u64, n: u64, p: f64, q: f64) -> f64 {
    if p == 0.0 {
        return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if q == 0.0 {
        return if k == n { 0.0 } else { f64::NEG_INFINITY };
    }
    let nf = n as f64;
    if k == 0 {
        if n == 0 {
            return 0.0;
        }
        return if p < 0.1 { -bd0(nf, nf * q) - nf * p } else { nf * q.ln() };
    }
    if k == n {
        return if q < 0.1 { -bd0(nf, nf * p) - nf * q } else { nf * p.ln() };
    }
    let kf = k as f64;
    let lc = stirlerr(n) - stirlerr(k) - stirlerr(n - k) - bd0(kf, nf * p) - bd0(nf - kf, nf * q);
    let lf = LN_2PI + kf.ln() + (-kf / nf).ln_1p();
    lc - 0.5 * lf
}

/// `ln B(k; n, p)`.
pub fn ln_binomial_pmf(k: u64, n: u64, p: f64) -> Result<f64> {
    check_prob(p, "p")?;
    if k > n {
        return Err(Error::param(format!("need k <= n, got k={k}, n={n}")));
    }
    Ok(ln_binomial_raw(k, n, p, 1.0 - p))
}

/// `B(k; n, p) = C(n, k) p^k (1 − p)^{n−k}`. Returns exactly `0` when the value
/// underflows; use [`ln_binomial_pmf`] to keep the magnitude.
pub fn binomial_pmf(k: u64, n: u64, p: f64) -> Result<f64> {
    ln_binomial_pmf(k, n, p).map(f64::exp)
}

/// `ln Poi(k; λ)`.
pub fn ln_poisson_pmf(k: u64, lambda: f64) -> Result<f64> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::param(format!("Poisson mean must be positive, got {lambda}")));
    }
    if k == 0 {
        return Ok(-lambda);
    }
    let kf = k as f64;
    Ok(-stirlerr(k) - bd0(kf, lambda) - 0.5 * (2.0 * PI * kf).ln())
}

/// `Poi(k; λ) = e^{−λ} λ^k / k!`.
pub fn poisson_pmf(k: u64, lambda: f64) -> Result<f64> {
    ln_poisson_pmf(k, lambda).map(f64::exp)
}

/// `ln` of the trinomial probability of `k1` nodes in cell 1 and `k2` in cell 2.
pub fn ln_multinomial_two_cell_pmf(k1: u64, k2: u64, n: u64, p1: f64, p2: f64) -> Result<f64> {
    check_prob(p1, "p1")?;
    check_prob(p2, "p2")?;
    if p1 + p2 > 1.0 {
        return Err(Error::param(format!("need p1 + p2 <= 1, got {}", p1 + p2)));
    }
    if k1 + k2 > n {
        return Err(Error::param(format!("need k1 + k2 <= n, got {k1} + {k2} > {n}")));
    }
    // Multinomial(k1, k2) = Bin(k1; n, p1) · Bin(k2; n − k1, p2 / (1 − p1)).
    let first = ln_binomial_raw(k1, n, p1, 1.0 - p1);
    let rest = 1.0 - p1;
    let second = if rest == 0.0 {
        if k2 == 0 && k1 == n {
            0.0
        } else {
            f64::NEG_INFINITY
        }
    } else {
        let cond = (p2 / rest).min(1.0);
        let cond_q = ((rest - p2) / rest).max(0.0);
        ln_binomial_raw(k2, n - k1, cond, cond_q)
    };
    Ok(first + second)
}

/// `n!/(k1! k2! (n−k1−k2)!) p1^k1 p2^k2 (1−p1−p2)^{n−k1−k2}`.
pub fn multinomial_two_cell_pmf(k1: u64, k2: u64, n: u64, p1: f64, p2: f64) -> Result<f64> {
    ln_multinomial_two_cell_pmf(k1, k2, n, p1, p2).map(f64::exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn small_binomials() {
        assert!(rel(binomial_pmf(1, 2, 0.5).unwrap(), 0.5) < 1e-14);
        for (n, p) in [(10u64, 0.3), (1000, 0.01), (7, 0.95)] {
            assert!(rel(binomial_pmf(0, n, p).unwrap(), (1.0 - p).powi(n as i32)) < 1e-13);
        }
        assert_eq!(binomial_pmf(3, 3, 0.0).unwrap(), 0.0);
        assert_eq!(binomial_pmf(0, 3, 0.0).unwrap(), 1.0);
        assert!(binomial_pmf(4, 3, 0.5).is_err());
        assert!(binomial_pmf(1, 3, 1.5).is_err());
    }

    #[test]
    fn binomial_sums_to_one() {
        for (n, p) in [(1u64, 0.4), (50, 0.2), (1000, 0.003), (10_000, 0.5), (10_000, 0.01)] {
            let total: f64 = (0..=n).map(|k| binomial_pmf(k, n, p).unwrap()).sum();
            assert!((total - 1.0).abs() < 1e-10, "n={n} p={p} total={total}");
        }
    }

    #[test]
    fn poisson_values() {
        assert!(rel(poisson_pmf(0, 1.0).unwrap(), (-1.0f64).exp()) < 1e-15);
        assert!(rel(poisson_pmf(3, 0.5).unwrap(), (-0.5f64).exp() * 0.125 / 6.0) < 1e-13);
        assert!(poisson_pmf(1, 0.0).is_err());
        for lambda in [0.3, 4.0, 37.5, 800.0] {
            for k in [1u64, 5, 20, 40, 600, 900] {
                let ratio = poisson_pmf(k + 1, lambda).unwrap() / poisson_pmf(k, lambda).unwrap();
                if ratio.is_finite() && ratio > 0.0 {
                    assert!(rel(ratio, lambda / (k + 1) as f64) < 1e-12, "k={k} lambda={lambda}");
                }
            }
        }
    }

    #[test]
    fn two_cell_trivial_cases() {
        assert!(rel(multinomial_two_cell_pmf(1, 1, 2, 0.5, 0.5).unwrap(), 0.5) < 1e-14);
        assert!(rel(multinomial_two_cell_pmf(0, 0, 30, 0.1, 0.2).unwrap(), 0.7f64.powi(30)) < 1e-13);
        assert!(multinomial_two_cell_pmf(2, 2, 3, 0.1, 0.1).is_err());
        assert!(multinomial_two_cell_pmf(1, 1, 3, 0.6, 0.6).is_err());
    }

    #[test]
    fn stirlerr_continuity_at_switch() {
        let direct = |k: u64| {
            let kf = k as f64;
            let lnfact: f64 = (1..=k).map(|i| (i as f64).ln()).sum();
            lnfact - (kf + 0.5) * kf.ln() + kf - 0.5 * LN_2PI
        };
        for k in [16u64, 20, 36, 81] {
            assert!((stirlerr(k) - direct(k)).abs() < 1e-12, "k={k}");
        }
    }
}
