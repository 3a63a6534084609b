//! Closed-form predictions: Poisson means of short-cycle counts, the
//! limiting products `θ(c, ℓ)` / `θ′(c, ℓ)` with a certified truncation
//! error, and explicit probability bounds.
//!
//! `θ(c, ℓ)` is meaningful for every `c > 1`; the statements it is compared
//! against hold only for `c` above a threshold that is not explicit, so any
//! comparison at moderate `c` is a heuristic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest truncation index tried before giving up.
pub const MAX_TRUNCATION: usize = 10_000_000;

/// Poisson mean of the `k`-cycle count: `base^k / (2k)`, or `base^k / k`
/// for directed graphs. `base` is `d − 1` for `d`-regular graphs and `c`
/// for `p = c/n`.
pub fn lambda_k(k: usize, base: f64, directed: bool) -> f64 {
    ln_lambda(k, base, directed).exp()
}

fn ln_lambda(k: usize, base: f64, directed: bool) -> f64 {
    let k = k as f64;
    let denom = if directed { k } else { 2.0 * k };
    k * base.ln() - denom.ln()
}

/// `1 − e^{−λ_k}`: limiting probability that a `k`-cycle exists.
pub fn per_length_probability(k: usize, base: f64, directed: bool) -> f64 {
    -(-lambda_k(k, base, directed)).exp_m1()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaResult {
    pub value: f64,
    /// Last factor included in the product.
    pub truncation_k: usize,
    /// Upper bound on `|θ − value|`.
    pub tail_bound: f64,
    pub c: f64,
    pub ell: usize,
    pub directed: bool,
}

/// `∏_{k ≥ ℓ} (1 − e^{−λ_k})` with `λ_k = c^k/(2k)` (or `c^k/k` directed).
///
/// The product is truncated at the first `K` past which `λ_k` is
/// increasing, `e^{−λ_{K+1}} ≤ ½`, and the certified tail `2S` is within
/// `tol`, where `S = Σ_{k>K} e^{−λ_k}`. Since `λ` is convex in `k`, the
/// ratios `e^{−λ_{k+1}}/e^{−λ_k}` decrease, so
/// `S ≤ e^{−λ_{K+1}} / (1 − e^{−(λ_{K+2} − λ_{K+1})})`, and
/// `|log ∏_{k>K}(1 − x_k)| ≤ 2S` because every `x_k ≤ ½`.
pub fn theta(c: f64, ell: usize, directed: bool, tol: f64) -> Result<ThetaResult> {
    if !(c > 1.0 && c.is_finite()) {
        return Err(Error::param("c", format!("c = {c} must be finite and > 1")));
    }
    if ell < 3 {
        return Err(Error::param("ell", "ℓ must be at least 3"));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::param("tol", format!("tol = {tol} must be positive")));
    }
    let x = |k: usize| (-lambda_k(k, c, directed)).exp();
    let mut log_prod = 0.0f64;
    let mut k = ell;
    loop {
        log_prod += (-x(k)).ln_1p();
        let next = x(k + 1);
        let tail = if next == 0.0 {
            0.0
        } else {
            let rise = lambda_k(k + 2, c, directed) - lambda_k(k + 1, c, directed);
            if rise > 0.0 && next <= 0.5 {
                // rounded up against accumulated floating error
                2.0 * next / -(-rise).exp_m1() * (1.0 + 1e-12)
            } else {
                f64::INFINITY
            }
        };
        if tail <= tol {
            return Ok(ThetaResult {
                value: log_prod.exp(),
                truncation_k: k,
                tail_bound: tail,
                c,
                ell,
                directed,
            });
        }
        if k >= MAX_TRUNCATION {
            return Err(Error::param(
                "c",
                format!("tail not certified by k = {k}; c too close to 1"),
            ));
        }
        k += 1;
    }
}

/// `∏ (1 − e^{−λ})`: probability that independent Poisson variables with
/// the given means are all nonzero.
pub fn poisson_joint_all_nonzero(lambdas: &[f64]) -> Result<f64> {
    let mut log_prod = 0.0f64;
    for &l in lambdas {
        if l.is_nan() || l < 0.0 {
            return Err(Error::param("lambdas", format!("mean {l} is negative or NaN")));
        }
        log_prod += (-(-l).exp()).ln_1p();
    }
    Ok(log_prod.exp())
}

/// `max(0, 1 − 2e^{−(d−1)^ℓ/(2ℓ)})`.
pub fn regular_lower_bound(d: usize, ell: usize) -> f64 {
    if d < 2 || ell == 0 {
        return 0.0;
    }
    let l = lambda_k(ell, (d - 1) as f64, false);
    (1.0 - 2.0 * (-l).exp()).max(0.0)
}

pub const GAMMA0: f64 = 4.0 / 3.0;

/// `γ₁ = (4/3)(1 + ln(3/2))`.
pub fn gamma1() -> f64 {
    GAMMA0 * (1.0 + 1.5f64.ln())
}

/// Integer window `[⌈γ₀ε²n⌉, ⌊γ₁ε²n⌋]` for the circumference of the giant
/// component at `p = (1 + ε)/n`. Values within `1e−9` (relative) of an
/// integer are snapped to it before rounding.
pub fn supercritical_window(epsilon: f64, n: u64) -> Result<(u64, u64)> {
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::param("epsilon", format!("ε = {epsilon} must be finite and ≥ 0")));
    }
    let base = epsilon * epsilon * n as f64;
    let snap = |x: f64| {
        let r = x.round();
        if (x - r).abs() <= 1e-9 * x.max(1.0) {
            r
        } else {
            x
        }
    };
    let lo = snap(GAMMA0 * base).ceil() as u64;
    let hi = snap(gamma1() * base).floor() as u64;
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    // 50-digit evaluations of the products truncated at k = 200
    const THETA_2_3: f64 = 0.607_772_639_454_503_9;
    const THETA_PRIME_2_3: f64 = 0.911_934_487_773_414_1;

    #[test]
    fn lambda_examples() {
        assert!((lambda_k(3, 2.0, false) - 4.0 / 3.0).abs() < 1e-14);
        assert!((lambda_k(4, 2.0, false) - 2.0).abs() < 1e-14);
        assert!((lambda_k(3, 2.0, true) - 8.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn theta_reference_values() {
        let t = theta(2.0, 3, false, 1e-12).unwrap();
        assert!((t.value - THETA_2_3).abs() < 1e-10, "{t:?}");
        assert!(t.tail_bound <= 1e-12);
        let t = theta(2.0, 3, true, 1e-12).unwrap();
        assert!((t.value - THETA_PRIME_2_3).abs() < 1e-10, "{t:?}");
    }

    #[test]
    fn theta_errors() {
        assert!(theta(1.0, 3, false, 1e-12).is_err());
        assert!(theta(0.5, 3, false, 1e-12).is_err());
        assert!(theta(2.0, 2, false, 1e-12).is_err());
        assert!(theta(2.0, 3, false, 0.0).is_err());
    }

    #[test]
    fn theta_drops_a_factor() {
        let a = theta(2.0, 3, false, 1e-12).unwrap().value;
        let b = theta(2.0, 4, false, 1e-12).unwrap().value;
        assert!(b > a);
    }

    #[test]
    fn tolerance_stability() {
        for c in [1.5, 2.0, 5.0] {
            for ell in [3, 6] {
                let a = theta(c, ell, false, 1e-8).unwrap().value;
                let b = theta(c, ell, false, 1e-12).unwrap().value;
                assert!((a - b).abs() <= 1e-8, "c={c} ℓ={ell}");
            }
        }
    }

    #[test]
    fn near_one_dips_before_rising() {
        // λ_k decreases until k ≈ 1/(c − 1) before growing
        let t = theta(1.05, 3, false, 1e-10).unwrap();
        assert!(t.truncation_k > 20);
        assert!(t.value > 0.0 && t.value < 1.0);
    }

    #[test]
    fn partial_products_decrease_to_theta() {
        let t = theta(2.0, 3, false, 1e-13).unwrap();
        let mut prev = 1.0;
        for kmax in 3..=40 {
            let ls: Vec<f64> = (3..=kmax).map(|k| lambda_k(k, 2.0, false)).collect();
            let p = poisson_joint_all_nonzero(&ls).unwrap();
            assert!(p <= prev);
            assert!(p >= t.value - t.tail_bound);
            prev = p;
        }
        assert!((prev - t.value).abs() < 1e-12);
    }

    #[test]
    fn poisson_joint_examples() {
        assert_eq!(poisson_joint_all_nonzero(&[]).unwrap(), 1.0);
        assert_eq!(poisson_joint_all_nonzero(&[0.0]).unwrap(), 0.0);
        assert!(poisson_joint_all_nonzero(&[-1.0]).is_err());
    }

    #[test]
    fn regular_bound_examples() {
        assert!((regular_lower_bound(3, 4) - 0.729_329_433_526_774_6).abs() < 1e-12);
        assert!((regular_lower_bound(3, 3) - 0.472_805_723_768_546_5).abs() < 1e-12);
        for ell in 3..30 {
            assert!(regular_lower_bound(3, ell + 1) >= regular_lower_bound(3, ell));
        }
    }

    #[test]
    fn window_examples() {
        assert_eq!(supercritical_window(0.1, 1_000_000).unwrap().0, 13334);
        assert!(gamma1() / GAMMA0 < 1.41);
        assert!((gamma1() / GAMMA0 - 1.405_465_108_108_164_4).abs() < 1e-15);
        assert_eq!(supercritical_window(0.0, 1000).unwrap(), (0, 0));
        // 4/3 · 0.09 · 300 = 36 exactly
        assert_eq!(supercritical_window(0.3, 300).unwrap().0, 36);
        assert!(supercritical_window(-0.1, 10).is_err());
    }
}
