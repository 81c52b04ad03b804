//! Exact integer binomials and compositions used by the multinomial
//! expansions in `optics` and the ladder-vector formulas in `gyni`.

/// Exact binomial coefficient, `None` on `u128` overflow.
pub fn binomial_exact(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc.checked_mul(u128::from(n - i))? / u128::from(i + 1);
    }
    Some(acc)
}

/// Binomial coefficient as `f64`; exact integers converted once, with a
/// log-gamma fallback beyond `u128` range.
pub fn binomial(n: usize, k: usize) -> f64 {
    match binomial_exact(n as u64, k as u64) {
        Some(v) => v as f64,
        None => (ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)).exp(),
    }
}

/// Multinomial coefficient `n! / (k_1! ... k_m!)` with `n = sum k_i`.
pub fn multinomial(parts: &[usize]) -> f64 {
    let mut total = 0u64;
    let mut acc: Option<u128> = Some(1);
    for &k in parts {
        total += k as u64;
        acc = acc.and_then(|a| binomial_exact(total, k as u64).and_then(|b| a.checked_mul(b)));
    }
    match acc {
        Some(v) => v as f64,
        None => {
            let n: usize = parts.iter().sum();
            let ln = ln_factorial(n) - parts.iter().map(|&k| ln_factorial(k)).sum::<f64>();
            ln.exp()
        }
    }
}

pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

/// All compositions of `total` into `parts` non-negative integers, in
/// lexicographic order.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut current = vec![0usize; parts];
    fill(total, 0, &mut current, &mut out);
    out
}

fn fill(remaining: usize, idx: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if idx + 1 == current.len() {
        current[idx] = remaining;
        out.push(current.clone());
        return;
    }
    for k in 0..=remaining {
        current[idx] = k;
        fill(remaining - k, idx + 1, current, out);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials_match_pascal() {
        for n in 0..60usize {
            for k in 1..n {
                let lhs = binomial_exact(n as u64, k as u64).unwrap();
                let rhs = binomial_exact(n as u64 - 1, k as u64 - 1).unwrap()
                    + binomial_exact(n as u64 - 1, k as u64).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        assert_eq!(binomial_exact(5, 7), Some(0));
        assert_eq!(binomial(10, 3), 120.0);
    }

    #[test]
    fn multinomial_small_cases() {
        assert_eq!(multinomial(&[1, 1]), 2.0);
        assert_eq!(multinomial(&[2, 1, 1]), 12.0);
        assert_eq!(multinomial(&[0, 0, 0]), 1.0);
        // 40! / (10!)^4, beyond f64-exact factorials but inside u128
        let v = multinomial(&[10, 10, 10, 10]);
        assert!((v / 4.705360871073570e21 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn composition_count() {
        // C(n + m - 1, m - 1)
        assert_eq!(compositions(5, 3).len(), 21);
        assert_eq!(compositions(0, 4).len(), 1);
        assert!(compositions(4, 4).iter().all(|c| c.iter().sum::<usize>() == 4));
    }
}
