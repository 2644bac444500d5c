//! Exact binomial arithmetic.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// `C(n, k)` as an arbitrary-precision integer (zero when `k > n`).
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` in `u128`, `None` on overflow.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        // acc * (n - i) / (i + 1) stays integral at every step
        let g = num_integer::gcd(acc, i + 1);
        let num = (n as u128 - i) / ((i + 1) / g);
        acc = (acc / g).checked_mul(num)?;
    }
    Some(acc)
}

/// `sum_{m=0}^{upper} (-1)^m C(n, m)`, via `(-1)^M C(n-1, M)` for `n >= 1`.
pub fn alternating_binomial_sum(n: u64, upper: u64) -> BigInt {
    let upper = upper.min(n);
    if n == 0 {
        return BigInt::one();
    }
    let magnitude = BigInt::from(binomial(n - 1, upper));
    if upper % 2 == 0 {
        magnitude
    } else {
        -magnitude
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials() {
        assert_eq!(binomial(5, 2), BigUint::from(10u32));
        assert_eq!(binomial(3, 4), BigUint::zero());
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(binomial_u128(60, 30), Some(118264581564861424));
        assert_eq!(binomial_u128(200, 100), None);
        assert_eq!(
            binomial(200, 100).to_string(),
            "90548514656103281165404177077484163874504589675413336841320"
        );
    }

    #[test]
    fn alternating_sum_matches_direct() {
        for n in 0..12u64 {
            for upper in 0..14u64 {
                let mut direct = BigInt::zero();
                for m in 0..=upper.min(n) {
                    let c = BigInt::from(binomial(n, m));
                    if m % 2 == 0 {
                        direct += c;
                    } else {
                        direct -= c;
                    }
                }
                assert_eq!(alternating_binomial_sum(n, upper), direct, "n={n} M={upper}");
            }
        }
    }
}
