//! Word-sized modular arithmetic and primality testing.

/// `a * b mod m` for 64-bit moduli.
#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

pub fn pow_mod(mut base: u64, mut exp: u128, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i128 % m as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(m as i128) as u64)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    (old_r, old_s, old_t)
}

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Least common multiple; `None` on overflow.
pub fn lcm(a: u128, b: u128) -> Option<u128> {
    if a == 0 || b == 0 {
        return Some(0);
    }
    (a / gcd(a, b)).checked_mul(b)
}

/// `a * b mod m` for 128-bit moduli.
pub fn mul_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    let (a, b) = (a % m, b % m);
    if m <= u64::MAX as u128 {
        return (a * b) % m;
    }
    // 256-bit product reduced by shift-and-add; only hit for moduli beyond 64 bits.
    let mut acc: u128 = 0;
    let mut x = a;
    let mut y = b;
    while y > 0 {
        if y & 1 == 1 {
            acc = add_mod_u128(acc, x, m);
        }
        x = add_mod_u128(x, x, m);
        y >>= 1;
    }
    acc
}

#[inline]
pub fn add_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

pub fn pow_mod_u128(mut base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u128(acc, base, m);
        }
        base = mul_mod_u128(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a 128-bit modulus.
pub fn inv_mod_u128(a: u128, m: u128) -> Option<u128> {
    // Extended Euclid tracking coefficients modulo m to stay unsigned.
    let (mut old_r, mut r) = (a % m, m);
    let (mut old_s, mut s) = (1u128, 0u128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        let qs = mul_mod_u128(q, s, m);
        (old_s, s) = (s, (old_s + m - qs) % m);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s % m)
}

const SMALL_PRIMES: [u64; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

/// Deterministic Miller-Rabin for the full 64-bit range.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &SMALL_PRIMES[..12] {
        if n % p == 0 {
            return n == p;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'witness: for &a in &SMALL_PRIMES[..12] {
        let mut x = pow_mod(a, d as u128, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin over 128-bit integers. Deterministic below 3.3e24 (first 13 prime
/// bases); above that it is a strong probable-prime test with 20 bases.
pub fn is_prime_u128(n: u128) -> bool {
    if n <= u64::MAX as u128 {
        return is_prime(n as u64);
    }
    for &p in &SMALL_PRIMES {
        if n % p as u128 == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &SMALL_PRIMES {
        let mut x = pow_mod_u128(a as u128, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u128(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Ceiling of the square root.
pub fn ceil_sqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x.saturating_mul(x) > n {
        x -= 1;
    }
    while (x + 1).saturating_mul(x + 1) <= n {
        x += 1;
    }
    if x * x == n {
        x
    } else {
        x + 1
    }
}

/// Number of bits needed to write `n` (at least 1).
pub fn bit_length(n: u128) -> u32 {
    (128 - n.leading_zeros()).max(1)
}

/// `ceil(log2(n))` for `n >= 1`.
pub fn ceil_log2(n: u128) -> u32 {
    if n <= 1 {
        0
    } else {
        128 - (n - 1).leading_zeros()
    }
}

/// Integer power with overflow detection.
pub fn checked_pow(base: u128, exp: u32) -> Option<u128> {
    base.checked_pow(exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_matches_trial_division() {
        for n in 0u64..5000 {
            let trial = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), trial, "n = {n}");
        }
        assert!(is_prime(65537));
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(3215031751)); // strong pseudoprime to bases 2,3,5,7
    }

    #[test]
    fn wide_mul_mod_agrees_with_narrow() {
        let m = (1u128 << 64) + 13;
        let a = (1u128 << 70) + 12345;
        let b = (1u128 << 66) + 999;
        // Reduce by splitting b into halves to get an independent check.
        let lo = b & 0xffff_ffff;
        let hi = b >> 32;
        let expect = add_mod_u128(
            mul_mod_u128(mul_mod_u128(a, hi, m), 1 << 32, m),
            mul_mod_u128(a, lo, m),
            m,
        );
        assert_eq!(mul_mod_u128(a, b, m), expect);
        assert_eq!(inv_mod_u128(3, 7), Some(5));
        let x = inv_mod_u128(a, m).unwrap();
        assert_eq!(mul_mod_u128(a, x, m), 1);
    }

    #[test]
    fn sqrt_and_logs() {
        assert_eq!(ceil_sqrt(0), 0);
        assert_eq!(ceil_sqrt(16), 4);
        assert_eq!(ceil_sqrt(17), 5);
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2(9), 4);
        assert_eq!(bit_length(0), 1);
        assert_eq!(bit_length(255), 8);
    }
}
