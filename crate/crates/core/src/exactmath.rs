//! Exact integer and rational utilities.
//!
//! Integers are `i128`: every quantity the rest of the crate feeds in here
//! (coordinates, discriminants, raw quadratic-pair images) is bounded well
//! below `2¹²⁷`, and all arithmetic on them is checked. Rationals that can grow
//! without bound (the p-adic density series) are [`Rat`] over big integers.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::bail;
use crate::Result;

/// Exact rational number with big-integer numerator and denominator.
pub type Rat = BigRational;

/// Trial division bound used before switching to Pollard rho.
const TRIAL_LIMIT: u128 = 1_000_000;

pub fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Greatest common divisor of the absolute values; `0` iff every entry is `0`.
pub fn gcd_all(values: &[i128]) -> Result<u128> {
    if values.is_empty() {
        bail!(Usage, "gcd of an empty list");
    }
    Ok(values.iter().fold(0, |g, v| gcd(g, v.unsigned_abs())))
}

/// Floor of the square root.
pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = libm::sqrt(n as f64) as u128;
    while x.checked_mul(x).map_or(true, |sq| sq > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|sq| sq <= n) {
        x += 1;
    }
    x
}

/// Floor of the cube root.
pub fn icbrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let cube = |x: u128| x.checked_mul(x).and_then(|s| s.checked_mul(x));
    let mut x = libm::cbrt(n as f64) as u128;
    while cube(x).map_or(true, |c| c > n) {
        x -= 1;
    }
    while cube(x + 1).is_some_and(|c| c <= n) {
        x += 1;
    }
    x
}

/// Integer square root of `n` if `n` is a perfect square (negative numbers never are).
pub fn is_perfect_square(n: i128) -> Option<u128> {
    if n < 0 {
        return None;
    }
    let n = n as u128;
    let r = isqrt(n);
    (r * r == n).then_some(r)
}

/// The squarefree kernel of `n ≠ 0`: the squarefree `d` with `n = d·m²`, `m > 0`.
///
/// The sign of `d` is the sign of `n`, so `-4 ↦ -1` and `±1 ↦ ±1`.
pub fn squarefree_kernel(n: i128) -> Result<i128> {
    squarefree_decompose(n).map(|(d, _)| d)
}

/// Splits `n ≠ 0` as `n = d·m²` with `d` squarefree; returns `(d, m)`.
pub fn squarefree_decompose(n: i128) -> Result<(i128, u128)> {
    if n == 0 {
        bail!(Domain, "squarefree kernel of zero");
    }
    let sign: i128 = if n < 0 { -1 } else { 1 };
    let mut m = n.unsigned_abs();
    let mut kernel: u128 = 1;
    let mut root: u128 = 1;

    let mut take = |m: &mut u128, p: u128| {
        let mut e = 0u32;
        while *m % p == 0 {
            *m /= p;
            e += 1;
        }
        if e % 2 == 1 {
            kernel *= p;
        }
        root *= p.pow(e / 2);
    };

    take(&mut m, 2);
    let mut d: u128 = 3;
    while d <= TRIAL_LIMIT && d * d * d <= m {
        if m % d == 0 {
            take(&mut m, d);
        }
        d += 2;
    }

    if m > 1 {
        if d * d * d > m {
            // every prime factor of m is >= d, so m is q, q² or q·r
            match is_perfect_square(m as i128) {
                Some(r) => root *= r,
                None => kernel *= m,
            }
        } else {
            let mut primes = factor(m);
            primes.sort_unstable();
            let mut i = 0;
            while i < primes.len() {
                let p = primes[i];
                let e = primes[i..].iter().take_while(|&&q| q == p).count() as u32;
                if e % 2 == 1 {
                    kernel *= p;
                }
                root *= p.pow(e / 2);
                i += e as usize;
            }
        }
    }
    Ok((sign * kernel as i128, root))
}

/// Whether `n` is squarefree (`±1` included, `0` excluded).
pub fn is_squarefree(n: i128) -> bool {
    n != 0 && squarefree_kernel(n).is_ok_and(|d| d == n)
}

/// `v_p(n)`, with `None` standing for `+∞` at `n = 0`.
pub fn padic_valuation(n: i128, p: u64) -> Result<Option<u32>> {
    if !is_prime(p) {
        bail!(Usage, "{p} is not prime");
    }
    if n == 0 {
        return Ok(None);
    }
    let p = p as u128;
    let mut m = n.unsigned_abs();
    let mut v = 0;
    while m % p == 0 {
        m /= p;
        v += 1;
    }
    Ok(Some(v))
}

/// `v_p` of a nonzero big integer (used by the brute-force p-adic checks).
pub fn padic_valuation_big(n: &BigInt, p: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    while (&m % &p).is_zero() {
        m /= &p;
        v += 1;
    }
    Some(v)
}

fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return (a % m) * (b % m) % m;
    }
    // m < 2^127 here, so a + b never overflows
    let (mut a, mut b) = (a % m, b % m);
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc = (acc + a) % m;
        }
        a = (a + a) % m;
        b >>= 1;
    }
    acc
}

fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1 % m;
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

/// Miller–Rabin; deterministic below 3.3·10²⁴ and overwhelmingly reliable above.
pub fn is_prime_u128(n: u128) -> bool {
    const BASES: [u128; 20] = [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
    ];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
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

pub fn is_prime(n: u64) -> bool {
    is_prime_u128(n as u128)
}

/// Brent's variant of Pollard rho; returns a nontrivial factor of composite `n`.
fn rho(n: u128) -> u128 {
    if n % 2 == 0 {
        return 2;
    }
    for c in 1u128.. {
        let f = |x: u128| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut ys) = (2u128, 2u128, 2u128);
        let mut q = 1u128;
        let mut g = 1u128;
        let mut r = 1u64;
        const BATCH: u64 = 128;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

/// Prime factors of `n > 1` with multiplicity, unordered.
fn factor(n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u128(m) {
            out.push(m);
            continue;
        }
        if let Some(r) = is_perfect_square(m as i128) {
            stack.push(r);
            stack.push(r);
            continue;
        }
        let f = rho(m);
        stack.push(f);
        stack.push(m / f);
    }
    out
}

/// Least positive quadratic nonresidue modulo an odd prime `p`.
pub fn least_nonresidue(p: u64) -> Result<u64> {
    if p == 2 || !is_prime(p) {
        bail!(Usage, "least nonresidue needs an odd prime, got {p}");
    }
    let half = (p as u128 - 1) / 2;
    (2..p)
        .find(|&u| pow_mod(u as u128, half, p as u128) == p as u128 - 1)
        .ok_or_else(|| crate::Error::Inconsistent(alloc::format!("no nonresidue mod {p}")))
}

/// Primes up to `limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// `p^e` as an exact rational; `e` may be negative.
pub fn rat_pow(p: u64, e: i64) -> Rat {
    let base = BigInt::from(p).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        Rat::from_integer(base)
    } else {
        Rat::new(BigInt::one(), base)
    }
}

/// `|x|_p` of a nonzero rational as an exponent: `|x|_p = p^(-v)`; `None` for zero.
pub fn rat_valuation(x: &Rat, p: u64) -> Option<i64> {
    let vn = padic_valuation_big(x.numer(), p)? as i64;
    let vd = padic_valuation_big(x.denom(), p).unwrap_or(0) as i64;
    Some(vn - vd)
}

/// Element `a + b·√d` of `ℤ[√d]` for squarefree `d ∉ {0, 1}`.
///
/// Arithmetic is checked; elements with different `d` never mix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadInt {
    pub a: i128,
    pub b: i128,
    d: i64,
}

impl QuadInt {
    pub fn new(a: i128, b: i128, d: i64) -> Result<Self> {
        if d == 0 || d == 1 || !is_squarefree(d as i128) {
            bail!(Domain, "{d} is not a squarefree integer other than 0 and 1");
        }
        Ok(Self { a, b, d })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn conjugate(&self) -> Self {
        Self { b: -self.b, ..*self }
    }

    /// `a² − d·b²`.
    pub fn norm(&self) -> Result<i128> {
        let aa = self.a.checked_mul(self.a);
        let dbb = self.b.checked_mul(self.b).and_then(|bb| bb.checked_mul(self.d as i128));
        match (aa, dbb) {
            (Some(x), Some(y)) => x.checked_sub(y).ok_or_else(overflow),
            _ => Err(overflow()),
        }
    }

    /// `2a`.
    pub fn trace(&self) -> Result<i128> {
        self.a.checked_mul(2).ok_or_else(overflow)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(Self {
            a: self.a.checked_add(other.a).ok_or_else(overflow)?,
            b: self.b.checked_add(other.b).ok_or_else(overflow)?,
            d: self.d,
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let m = |x: i128, y: i128| x.checked_mul(y).ok_or_else(overflow);
        let dbb = m(m(self.b, other.b)?, self.d as i128)?;
        let a = m(self.a, other.a)?.checked_add(dbb).ok_or_else(overflow)?;
        let b = m(self.a, other.b)?
            .checked_add(m(self.b, other.a)?)
            .ok_or_else(overflow)?;
        Ok(Self { a, b, d: self.d })
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.d != other.d {
            bail!(Usage, "mixing Z[sqrt({})] and Z[sqrt({})]", self.d, other.d);
        }
        Ok(())
    }
}

fn overflow() -> crate::Error {
    crate::Error::Overflow("quadratic integer arithmetic".into())
}

/// Sieved squarefree decompositions `n = kernel·root²` for `1 ≤ n ≤ limit`.
///
/// The enumeration engines look up discriminants here instead of factoring
/// them one at a time.
pub struct SquarefreeTable {
    kernel: Vec<u32>,
    root: Vec<u32>,
}

impl SquarefreeTable {
    pub fn new(limit: u32) -> Self {
        let n = limit as usize;
        let mut kernel: Vec<u32> = (0..=limit).collect();
        let mut root = vec![1u32; n + 1];
        let mut i = 2usize;
        while i * i <= n {
            let sq = i * i;
            // divide out i² repeatedly; composite i are harmless since their
            // prime squares were already removed
            let mut j = sq;
            while j <= n {
                while kernel[j] as usize % sq == 0 {
                    kernel[j] /= sq as u32;
                    root[j] *= i as u32;
                }
                j += sq;
            }
            i += 1;
        }
        Self { kernel, root }
    }

    pub fn limit(&self) -> i64 {
        self.kernel.len() as i64 - 1
    }

    /// `(d, m)` with `n = d·m²`, `d` squarefree carrying the sign of `n`.
    #[inline]
    pub fn decompose(&self, n: i64) -> (i64, i64) {
        debug_assert!(n != 0 && n.abs() <= self.limit());
        let a = n.unsigned_abs() as usize;
        let d = self.kernel[a] as i64;
        (if n < 0 { -d } else { d }, self.root[a] as i64)
    }
}
