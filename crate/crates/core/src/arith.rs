//! Integer helpers shared across modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact binomial coefficient C(n, k); zero when k > n.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Binomial coefficient allowing negative upper argument conventions used by
/// the Wu formula: C(a, j) with a possibly negative, j >= 0.
pub fn binomial_signed(a: i64, j: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..j {
        acc *= a - i as i64;
    }
    let mut fact = BigInt::one();
    for i in 1..=j {
        fact *= i;
    }
    acc / fact
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization in increasing prime order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(p: u64, x: &BigInt) -> u32 {
    assert!(!x.is_zero(), "valuation of zero");
    let mut v = 0;
    let mut y = x.abs();
    let pb = BigInt::from(p);
    loop {
        let (q, r) = y.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        y = q;
        v += 1;
    }
}

/// Split n = p^r * n' with gcd(p, n') = 1.
pub fn split_prime_power(n: u64, p: u64) -> (u32, u64) {
    let mut r = 0;
    let mut m = n;
    while m % p == 0 {
        m /= p;
        r += 1;
    }
    (r, m)
}

/// Residue of x in [0, p).
pub fn mod_u32(x: &BigInt, p: u32) -> u32 {
    x.mod_floor(&BigInt::from(p)).to_u32().expect("residue fits")
}

pub fn inv_mod(a: u32, p: u32) -> u32 {
    let mut t = (0i64, 1i64);
    let mut r = (p as i64, (a % p) as i64);
    while r.1 != 0 {
        let q = r.0 / r.1;
        t = (t.1, t.0 - q * t.1);
        r = (r.1, r.0 - q * r.1);
    }
    assert_eq!(r.0, 1, "{a} not invertible mod {p}");
    t.0.rem_euclid(p as i64) as u32
}

pub fn gcd_all<'a, I: IntoIterator<Item = &'a BigInt>>(xs: I) -> BigInt {
    xs.into_iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

pub fn pow_u64(b: u64, e: u32) -> u64 {
    b.checked_pow(e).expect("power overflows u64")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(8, 4), BigInt::from(70));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial_signed(-1, 3), BigInt::from(-1));
        assert_eq!(binomial_signed(4, 2), BigInt::from(6));
    }

    #[test]
    fn factor_and_valuation() {
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(valuation(2, &BigInt::from(56)), 3);
        assert_eq!(split_prime_power(24, 2), (3, 3));
        assert_eq!(inv_mod(2, 3), 2);
        assert!(is_prime(1_000_003));
    }
}
