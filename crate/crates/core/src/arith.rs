//! Integer arithmetic: gcd, roots, primality, factorization, sieves,
//! Kronecker symbol and square-class bookkeeping.

use crate::error::{Error, Result};

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a as i128
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

pub fn is_square(n: u128) -> bool {
    let r = isqrt(n);
    r * r == n
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(mut n: u128, p: u64) -> u32 {
    let p = p as u128;
    if n == 0 {
        return u32::MAX;
    }
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
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

fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization as (p, e) pairs in increasing p.
/// Trial division to 10^6, then Pollard rho on the cofactor.
pub fn factor(n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut n = n;
    if n <= 1 {
        return out;
    }
    let mut p = 2u64;
    while p * p <= n && p <= 1_000_000 {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        let mut stack = vec![n];
        let mut big = Vec::new();
        while let Some(m) = stack.pop() {
            if m == 1 {
                continue;
            }
            if is_prime(m) {
                big.push(m);
            } else {
                let d = pollard_rho(m);
                stack.push(d);
                stack.push(m / d);
            }
        }
        big.sort_unstable();
        for q in big {
            match out.last_mut() {
                Some((lp, e)) if *lp == q => *e += 1,
                _ => out.push((q, 1)),
            }
        }
    }
    out
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut comp = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !comp[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                comp[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Smallest-prime-factor table; 0 marks a prime (or 0/1).
/// Entries fit in u16 because a composite's smallest factor is below sqrt(limit).
pub struct SpfSieve {
    spf: Vec<u16>,
}

impl SpfSieve {
    pub const MAX_LIMIT: u64 = 1 << 32;

    pub fn new(limit: u64) -> Self {
        assert!(limit < Self::MAX_LIMIT, "sieve limit too large");
        let n = limit as usize;
        let mut spf = vec![0u16; n + 1];
        let mut i = 2usize;
        while i * i <= n {
            if spf[i] == 0 {
                let mut j = i * i;
                while j <= n {
                    if spf[j] == 0 {
                        spf[j] = i as u16;
                    }
                    j += i;
                }
            }
            i += 1;
        }
        SpfSieve { spf }
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && self.spf[n as usize] == 0
    }

    pub fn factor(&self, mut n: u64) -> Vec<(u64, u32)> {
        let mut out: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let s = self.spf[n as usize];
            let p = if s == 0 { n } else { s as u64 };
            n /= p;
            match out.last_mut() {
                Some((lp, e)) if *lp == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

/// Factorizer that uses a sieve when the argument is in range.
pub struct Factorizer {
    sieve: Option<SpfSieve>,
}

impl Factorizer {
    /// Sieve up to `limit` if that is cheap enough, otherwise factor on demand.
    pub fn new(limit: u64) -> Self {
        let sieve = if limit <= 200_000_000 { Some(SpfSieve::new(limit.max(2))) } else { None };
        Factorizer { sieve }
    }

    pub fn none() -> Self {
        Factorizer { sieve: None }
    }

    pub fn factor(&self, n: u64) -> Vec<(u64, u32)> {
        match &self.sieve {
            Some(s) if n <= s.limit() => s.factor(n),
            _ => factor(n),
        }
    }
}

pub fn radical(n: u64) -> u64 {
    factor(n).iter().map(|&(p, _)| p).product()
}

/// Kronecker symbol (m/n).
pub fn kronecker(m: i64, n: i64) -> Result<i32> {
    if m == 0 && n == 0 {
        return Err(Error::Domain("kronecker(0,0) is undefined".into()));
    }
    let mut a = m as i128;
    let mut n = n as i128;
    let mut sign = 1i32;
    if n == 0 {
        return Ok(if a.abs() == 1 { 1 } else { 0 });
    }
    if n < 0 {
        n = -n;
        if a < 0 {
            sign = -sign;
        }
    }
    let mut v = 0;
    while n % 2 == 0 {
        n /= 2;
        v += 1;
    }
    if v > 0 {
        if a % 2 == 0 {
            return Ok(0);
        }
        if v % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            sign = -sign;
        }
    }
    // Jacobi symbol (a/n), n odd positive
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    Ok(if n == 1 { sign } else { 0 })
}

/// Kronecker symbol restricted to a prime second argument (always defined).
pub fn kron_p(m: i64, p: u64) -> i32 {
    kronecker(m, p as i64).expect("p > 0")
}

pub fn is_fundamental(d: i64) -> bool {
    if d == 1 {
        return true;
    }
    if d == 0 {
        return false;
    }
    let r = d.rem_euclid(4);
    if r == 1 {
        return is_squarefree(d.unsigned_abs());
    }
    if r == 0 {
        let m = d / 4;
        return matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs());
    }
    false
}

pub fn is_squarefree(n: u64) -> bool {
    factor(n).iter().all(|&(_, e)| e == 1)
}

/// Split a nonzero integer as D·F² with D the fundamental discriminant of its
/// square class (D = 1 for squares). Fails if the class holds no discriminant
/// of the right shape (i.e. n is not ≡ 0,1 mod 4 with an integral F).
pub fn fundamental_split(n: i64, fac: &[(u64, u32)]) -> Result<(i64, u64)> {
    if n == 0 {
        return Err(Error::Integrity("zero discriminant".into()));
    }
    let mut kernel: i64 = if n < 0 { -1 } else { 1 };
    for &(p, e) in fac {
        if e % 2 == 1 {
            kernel *= p as i64;
        }
    }
    let d = if kernel.rem_euclid(4) == 1 { kernel } else { 4 * kernel };
    if n % d != 0 {
        return Err(Error::Integrity(format!("{n} has no fundamental discriminant in its square class")));
    }
    let q = (n / d) as u128;
    let f = isqrt(q);
    if f * f != q {
        return Err(Error::Integrity(format!("{n}/{d} is not a square")));
    }
    Ok((d, f as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_values() {
        assert_eq!(kronecker(-3, 7).unwrap(), 1);
        assert_eq!(kronecker(-3, 5).unwrap(), -1);
        assert_eq!(kronecker(17, 1).unwrap(), 1);
        assert_eq!(kronecker(5, 2).unwrap(), -1);
        assert_eq!(kronecker(-7, 2).unwrap(), 1);
        assert_eq!(kronecker(12, 3).unwrap(), 0);
        assert!(kronecker(0, 0).is_err());
    }

    #[test]
    fn kronecker_matches_euler_criterion() {
        for p in primes_up_to(200).into_iter().filter(|&p| p > 2) {
            for m in -60i64..60 {
                let e = pow_mod(m.rem_euclid(p as i64) as u64, (p - 1) / 2, p);
                let want = if e == 0 {
                    0
                } else if e == 1 {
                    1
                } else {
                    -1
                };
                assert_eq!(kron_p(m, p), want, "m={m} p={p}");
            }
        }
    }

    #[test]
    fn factor_agrees_with_sieve() {
        let s = SpfSieve::new(100_000);
        for n in 1..100_000u64 {
            assert_eq!(s.factor(n), factor(n));
        }
        let big = 999_999_000_001u64 * 3;
        let f = factor(big);
        assert_eq!(f.iter().map(|&(p, e)| p.pow(e)).product::<u64>(), big);
        assert!(f.iter().all(|&(p, _)| is_prime(p)));
    }

    #[test]
    fn fundamental_split_examples() {
        let f = |n: i64| fundamental_split(n, &factor(n.unsigned_abs())).unwrap();
        assert_eq!(f(-23), (-23, 1));
        assert_eq!(f(49), (1, 7));
        assert_eq!(f(-108), (-3, 6));
        assert_eq!(f(148), (37, 2));
        assert_eq!(f(-152), (-152, 1));
        assert_eq!(f(-44), (-11, 2));
        assert!(fundamental_split(-2, &factor(2)).is_err());
    }

    #[test]
    fn fundamentals() {
        let fd: Vec<i64> = (-30..=30).filter(|&d| is_fundamental(d)).collect();
        assert_eq!(fd, vec![-24, -23, -20, -19, -15, -11, -8, -7, -4, -3, 1, 5, 8, 12, 13, 17, 21, 24, 28, 29]);
    }
}
