use crate::arith::is_prime;
use crate::error::{param_err, resource_err, Result};

/// `N = #{x ∈ {0..p-1}^n : Σ x_i ≤ (p-1)n/3}` and `min(3N, p^n)`.
///
/// Exact in `u128`, so `p^n` may be as large as `2^127`.
pub fn clp_count(p: u64, n: u32) -> Result<(u128, u128)> {
    if p < 3 || !is_prime(p) {
        return Err(param_err!("p must be an odd prime, got {p}"));
    }
    if n == 0 {
        return Err(param_err!("n must be at least 1"));
    }
    let total = (p as u128)
        .checked_pow(n)
        .filter(|&t| t <= 1u128 << 127)
        .ok_or_else(|| resource_err!("{p}^{n} exceeds 2^127"))?;
    let threshold = ((p - 1) * n as u64 / 3) as usize;
    // dp[s] = number of prefixes with coordinate sum s (capped at threshold)
    let mut dp = vec![0u128; threshold + 1];
    dp[0] = 1;
    for _ in 0..n {
        let mut next = vec![0u128; threshold + 1];
        for (s, &c) in dp.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for x in 0..p as usize {
                if s + x > threshold {
                    break;
                }
                next[s + x] += c;
            }
        }
        dp = next;
    }
    let count: u128 = dp.iter().sum();
    Ok((count, (3 * count).min(total)))
}

fn clp_objective(p: u64, t: f64) -> f64 {
    let geometric: f64 = (0..p).map(|i| t.powi(i as i32)).sum();
    geometric * t.powf(-((p - 1) as f64) / 3.0)
}

/// `inf_{0<t<1} (1 + t + ... + t^(p-1)) t^(-(p-1)/3)`, by a coarse scan
/// followed by golden-section refinement of the bracketing interval until
/// it is narrower than `tol`.
pub fn c_p(p: u64, tol: f64) -> Result<f64> {
    if p < 3 || !is_prime(p) {
        return Err(param_err!("p must be an odd prime, got {p}"));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(param_err!("tolerance must be positive"));
    }
    const GRID: usize = 1000;
    let f = |t: f64| clp_objective(p, t);
    let step = 1.0 / GRID as f64;
    let best = (1..GRID)
        .min_by(|&a, &b| f(a as f64 * step).total_cmp(&f(b as f64 * step)))
        .expect("nonempty grid");
    let (mut lo, mut hi) = ((best - 1) as f64 * step, ((best + 1) as f64 * step).min(1.0));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2);
        }
    }
    Ok(f((lo + hi) / 2.0))
}
