//! Exact p-adic local densities.
//!
//! Everything here works on valuation patterns rather than p-adic
//! expansions. The closed forms and the series evaluation are two
//! independent routes to the same rationals.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::bail;
use crate::exactmath::{
    is_prime, least_nonresidue, padic_valuation, primes_up_to, rat, rat_pow, rat_valuation, Rat,
};
use crate::{Error, Result};

/// Representatives of `ℚp^×/ℚp^×²`: `{1,3,5,7,2,6,10,14}` for `p = 2`,
/// and `{1, u, p, u·p}` for odd `p` with `u` the least positive nonresidue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicClassSet {
    p: u64,
    reps: Vec<i64>,
}

impl PadicClassSet {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            bail!(Usage, "{p} is not prime");
        }
        let reps = if p == 2 {
            vec![1, 3, 5, 7, 2, 6, 10, 14]
        } else {
            let u = least_nonresidue(p)? as i64;
            let p = p as i64;
            vec![1, u, p, u * p]
        };
        Ok(Self { p, reps })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn reps(&self) -> &[i64] {
        &self.reps
    }

    pub fn contains(&self, eps: i64) -> bool {
        self.reps.contains(&eps)
    }

    fn require(&self, eps: i64) -> Result<()> {
        if !self.contains(eps) {
            bail!(Usage, "{eps} is not a class representative for p = {}", self.p);
        }
        Ok(())
    }
}

fn vp(eps: i64, p: u64) -> i64 {
    padic_valuation(eps as i128, p).expect("p checked prime").expect("eps nonzero") as i64
}

/// `|n|_p` for nonzero `n`.
fn abs_p(n: i64, p: u64) -> Rat {
    rat_pow(p, -vp(n, p))
}

/// `1 + 1/p + 1/p²`.
fn cyclotomic3(p: u64) -> Rat {
    Rat::one() + rat_pow(p, -1) + rat_pow(p, -2)
}

/// The closed-form value of `ω_p^(ε)`.
pub fn omega_p_closed(p: u64, eps: i64) -> Result<Rat> {
    let set = PadicClassSet::new(p)?;
    set.require(eps)?;
    let half = rat(1, 2);
    if eps == 1 {
        let c = cyclotomic3(p);
        return Ok(half * &c * &c);
    }
    let pre = abs_p(4 * eps, p) * half;
    let body = if vp(eps, p) == 1 {
        cyclotomic3(p)
    } else if p != 2 {
        Rat::one() + rat_pow(p, -2) + rat_pow(p, -4)
    } else if eps == 5 {
        rat(21, 4)
    } else {
        rat(7, 4)
    };
    Ok(pre * body)
}

/// `Σ_ε ω_p^(ε)` from the closed forms.
pub fn omega_p_total(p: u64) -> Result<Rat> {
    let set = PadicClassSet::new(p)?;
    set.reps().iter().try_fold(Rat::zero(), |acc, &e| Ok(acc + omega_p_closed(p, e)?))
}

/// `(1 − 1/p)²·ω_p`, which should be `(1 − 1/p³)²`.
pub fn euler_factor(p: u64) -> Result<Rat> {
    let c = Rat::one() - rat_pow(p, -1);
    Ok(&c * &c * omega_p_total(p)?)
}

/// `∏_{p ≤ p_max} (1 − 1/p)²·ω_p` in floating point.
pub fn euler_factor_product(p_max: u64) -> Result<f64> {
    if p_max < 2 {
        bail!(Usage, "p_max must be at least 2");
    }
    primes_up_to(p_max).into_iter().try_fold(1.0, |acc, p| {
        let f = euler_factor(p)?
            .to_f64()
            .ok_or_else(|| Error::Overflow("Euler factor to f64".into()))?;
        Ok(acc * f)
    })
}

/// Which coordinate of a pair attains the minimal valuation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pattern {
    First,
    Second,
    Equal,
}

impl Pattern {
    pub const ALL: [Pattern; 3] = [Pattern::First, Pattern::Second, Pattern::Equal];

    /// A representative valuation pair with minimum `m`.
    fn sample(self, m: i64) -> [Option<i64>; 2] {
        match self {
            Pattern::First => [Some(m), Some(m + 1)],
            Pattern::Second => [Some(m + 1), Some(m)],
            Pattern::Equal => [Some(m), Some(m)],
        }
    }

    /// Haar measure of `{v(x1) = m, pattern}` divided by `p^(−2m)`.
    fn weight(self, p: u64) -> Rat {
        let q = Rat::one() - rat_pow(p, -1);
        match self {
            Pattern::Equal => &q * &q,
            _ => q * rat_pow(p, -1),
        }
    }
}

const INF: i64 = i64::MAX / 4;

fn finite(v: [Option<i64>; 2]) -> [i64; 2] {
    v.map(|x| x.unwrap_or(INF))
}

/// `F_ε` (or `F_1` for `ε = 1`) as a power of `p`, from the valuations of
/// the first pair (`y` or `a`) and the second pair (`z` or `b`); `None`
/// stands for a zero coordinate.
pub fn padic_f_value(p: u64, eps: i64, first: [Option<i64>; 2], second: [Option<i64>; 2]) -> Result<Rat> {
    Ok(rat_pow(p, padic_f_exponent(p, eps, first, second)?))
}

fn padic_f_exponent(p: u64, eps: i64, first: [Option<i64>; 2], second: [Option<i64>; 2]) -> Result<i64> {
    let set = PadicClassSet::new(p)?;
    set.require(eps)?;
    let (u, w) = (finite(first), finite(second));
    let alpha = u[0].min(u[1]);
    let beta = w[0].min(w[1]);
    if eps == 1 {
        return Ok((-alpha).max(0) + (-beta).max(0));
    }
    Ok(if alpha >= 0 && beta >= 0 {
        0
    } else if alpha < beta {
        -2 * alpha
    } else if alpha == beta {
        -2 * alpha - delta(p, eps, u, w)
    } else {
        -2 * beta - vp(eps, p)
    })
}

/// The 2-adic correction when `a_i` and `b_i` share the minimal valuation.
fn delta(p: u64, eps: i64, a: [i64; 2], b: [i64; 2]) -> i64 {
    if p != 2 {
        return 0;
    }
    let shift = match eps {
        3 | 7 => 1,
        5 => 2,
        _ => return 0,
    };
    let hit = (a[0] == b[0] && a[0] < a[1].min(b[1]))
        || (a[1] == b[1] && a[1] < a[0].min(b[0]))
        || (a[0] == a[1] && a[1] == b[0] && b[0] == b[1]);
    if hit {
        shift
    } else {
        0
    }
}

/// `Σ_{n ≥ 0} p^(c·n)`.
fn geo_nonneg(p: u64, c: i64) -> Result<Rat> {
    if c >= 0 {
        bail!(Inconsistent, "divergent series (ratio p^{c})");
    }
    Ok(Rat::one() / (Rat::one() - rat_pow(p, c)))
}

/// `Σ_{n ≤ −1} p^(c·n)`.
fn geo_neg(p: u64, c: i64) -> Result<Rat> {
    if c <= 0 {
        bail!(Inconsistent, "divergent series (ratio p^{})", -c);
    }
    let r = rat_pow(p, -c);
    Ok(&r / (Rat::one() - &r))
}

/// Regions of the `(α, β)` plane on which the F-value is one affine form.
#[derive(Clone, Copy, Debug)]
enum Region {
    /// `α ≥ 0`, `β ≥ 0`.
    Integral,
    /// `α ≤ −1`, `β ≥ α + 1`.
    FirstDominant,
    /// `α = β ≤ −1`.
    Balanced,
    /// `β ≤ −1`, `α ≥ β + 1`.
    SecondDominant,
    /// `α ≤ −1`, `β ≥ 0`.
    FirstOnly,
    /// `α ≥ 0`, `β ≤ −1`.
    SecondOnly,
    /// `α ≤ −1`, `β ≤ −1`.
    BothNegative,
}

/// Valuation pairs `(α, β)`.
type Points = &'static [(i64, i64)];

impl Region {
    /// Points that span the region's affine hull, then extra checkpoints.
    fn fit_points(self) -> (Points, Points) {
        match self {
            Region::Integral => (&[(0, 0), (1, 0), (0, 1)], &[(2, 3), (5, 1), (3, 3), (0, 4)]),
            Region::FirstDominant => (&[(-1, 0), (-2, 0), (-1, 1)], &[(-3, 5), (-4, -3), (-2, -1), (-5, 0)]),
            Region::Balanced => (&[(-1, -1), (-2, -2)], &[(-3, -3), (-6, -6)]),
            Region::SecondDominant => (&[(0, -1), (0, -2), (1, -1)], &[(5, -3), (-3, -4), (-1, -2), (0, -5)]),
            Region::FirstOnly => (&[(-1, 0), (-2, 0), (-1, 1)], &[(-4, 3), (-3, 0), (-5, 7)]),
            Region::SecondOnly => (&[(0, -1), (0, -2), (1, -1)], &[(3, -4), (0, -3), (7, -5)]),
            Region::BothNegative => (&[(-1, -1), (-2, -1), (-1, -2)], &[(-3, -3), (-5, -2), (-2, -6)]),
        }
    }

    /// `Σ p^(c1·α + c2·β)` over the region.
    fn sum(self, p: u64, c1: i64, c2: i64) -> Result<Rat> {
        Ok(match self {
            Region::Integral => geo_nonneg(p, c1)? * geo_nonneg(p, c2)?,
            Region::FirstDominant => rat_pow(p, c2) * geo_nonneg(p, c2)? * geo_neg(p, c1 + c2)?,
            Region::Balanced => geo_neg(p, c1 + c2)?,
            Region::SecondDominant => rat_pow(p, c1) * geo_nonneg(p, c1)? * geo_neg(p, c1 + c2)?,
            Region::FirstOnly => geo_neg(p, c1)? * geo_nonneg(p, c2)?,
            Region::SecondOnly => geo_nonneg(p, c1)? * geo_neg(p, c2)?,
            Region::BothNegative => geo_neg(p, c1)? * geo_neg(p, c2)?,
        })
    }
}

/// Fits `k(α, β) = k0 + k1·α + k2·β` to the F-exponent on a region and
/// checks it at further points.
fn fit_exponent(p: u64, eps: i64, pa: Pattern, pb: Pattern, region: Region) -> Result<(i64, i64, i64)> {
    let k = |(a, b): (i64, i64)| padic_f_exponent(p, eps, pa.sample(a), pb.sample(b));
    let (base, checks) = region.fit_points();
    let (k0, k1, k2) = if let [(a0, b0), (a1, b1)] = base {
        // the diagonal: only k1 + k2 is determined, put it all in k1
        let slope = (k((*a1, *b1))? - k((*a0, *b0))?) / (a1 - a0);
        (k((*a0, *b0))? - slope * a0, slope, 0)
    } else {
        let [(a0, b0), (a1, b1), (a2, b2)] = [base[0], base[1], base[2]];
        let k0v = k((a0, b0))?;
        let (dk1, dk2) = (k((a1, b1))? - k0v, k((a2, b2))? - k0v);
        let (u, v) = ((a1 - a0, b1 - b0), (a2 - a0, b2 - b0));
        let det = u.0 * v.1 - u.1 * v.0;
        let k1 = (dk1 * v.1 - dk2 * u.1) / det;
        let k2 = (u.0 * dk2 - v.0 * dk1) / det;
        (k0v - k1 * a0 - k2 * b0, k1, k2)
    };
    for &(a, b) in checks.iter().chain(base) {
        if k((a, b))? != k0 + k1 * a + k2 * b {
            bail!(Inconsistent, "F-value is not affine on {region:?} at ({a}, {b}) for p = {p}, eps = {eps}");
        }
    }
    Ok((k0, k1, k2))
}

/// `ω_p^(ε)` by summing the measure-weighted geometric series over every
/// valuation pattern and region of the F-value table.
pub fn omega_p_series(p: u64, eps: i64) -> Result<Rat> {
    let set = PadicClassSet::new(p)?;
    set.require(eps)?;
    let (prefactor, regions): (Rat, &[Region]) = if eps == 1 {
        (
            rat(1, 2),
            &[Region::Integral, Region::FirstOnly, Region::SecondOnly, Region::BothNegative],
        )
    } else {
        (
            abs_p(4 * eps, p) * rat(1, 2),
            &[Region::Integral, Region::FirstDominant, Region::Balanced, Region::SecondDominant],
        )
    };
    let mut total = Rat::zero();
    for pa in Pattern::ALL {
        for pb in Pattern::ALL {
            let weight = pa.weight(p) * pb.weight(p);
            for &region in regions {
                let (k0, k1, k2) = fit_exponent(p, eps, pa, pb, region)?;
                // measure p^(−2α−2β) against F⁻³ = p^(−3k)
                let s = region.sum(p, -2 - 3 * k1, -2 - 3 * k2)?;
                total += &weight * rat_pow(p, -3 * k0) * s;
            }
        }
    }
    Ok(prefactor * total)
}

/// `|x|_p` of a rational, `0` at zero.
fn abs_p_rat(x: &Rat, p: u64) -> Rat {
    match rat_valuation(x, p) {
        Some(v) => rat_pow(p, -v),
        None => Rat::zero(),
    }
}

/// The defining maximum of `F_1` or `F_ε`, evaluated with exact p-adic
/// absolute values.
pub fn brute_f(p: u64, eps: i64, first: &[Rat; 2], second: &[Rat; 2]) -> Rat {
    let e = Rat::from_integer(BigInt::from(eps));
    let two = Rat::from_integer(BigInt::from(2));
    let terms: [Rat; 5] = if eps == 1 {
        let (y, z) = (first, second);
        [
            &y[0] * &z[0],
            &y[1] * &z[1],
            &z[0] + &y[0],
            &z[1] + &y[1],
            &y[0] * &z[1] + &y[1] * &z[0],
        ]
    } else {
        let (a, b) = (first, second);
        [
            &a[0] * &a[0] - &e * &b[0] * &b[0],
            &a[1] * &a[1] - &e * &b[1] * &b[1],
            &two * &a[0],
            &two * &a[1],
            &two * (&a[0] * &a[1] - &e * &b[0] * &b[1]),
        ]
    };
    terms.iter().map(|t| abs_p_rat(t, p)).fold(Rat::one(), |m, v| if v > m { v } else { m })
}

/// A random truncated p-adic number `±p^k·m`, or zero one time in eight.
fn random_padic(p: u64, rng: &mut ChaCha8Rng) -> Rat {
    let r = rng.next_u64();
    if r % 8 == 0 {
        return Rat::zero();
    }
    let k = ((r >> 3) % 7) as i64 - 3;
    let m = ((r >> 6) % p.pow(5)) as i64 + 1;
    let sign = if (r >> 40) & 1 == 1 { -1 } else { 1 };
    Rat::from_integer(BigInt::from(sign * m)) * rat_pow(p, k)
}

/// Compares [`padic_f_value`] with [`brute_f`] on `samples` random inputs;
/// returns the number of disagreements.
pub fn brute_check_f(p: u64, eps: i64, samples: u64, seed: u64) -> Result<u64> {
    PadicClassSet::new(p)?.require(eps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(p << 32 | (eps as u64 & 0xffff_ffff));
    let mut bad = 0;
    for _ in 0..samples {
        let first = [random_padic(p, &mut rng), random_padic(p, &mut rng)];
        let second = [random_padic(p, &mut rng), random_padic(p, &mut rng)];
        let val = |x: &[Rat; 2]| [rat_valuation(&x[0], p), rat_valuation(&x[1], p)];
        let table = padic_f_value(p, eps, val(&first), val(&second))?;
        if table != brute_f(p, eps, &first, &second) {
            bad += 1;
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_sets() {
        assert_eq!(PadicClassSet::new(2).unwrap().reps(), &[1, 3, 5, 7, 2, 6, 10, 14]);
        assert_eq!(PadicClassSet::new(3).unwrap().reps(), &[1, 2, 3, 6]);
        assert_eq!(PadicClassSet::new(7).unwrap().reps(), &[1, 3, 7, 21]);
        assert!(PadicClassSet::new(9).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(omega_p_closed(2, 1).unwrap(), rat(49, 32));
        assert_eq!(omega_p_closed(2, 5).unwrap(), rat(21, 32));
        assert_eq!(omega_p_closed(3, 2).unwrap(), rat(91, 162));
        assert_eq!(omega_p_closed(5, 5).unwrap(), rat(31, 250));
        assert_eq!(omega_p_closed(7, 3).unwrap(), rat(2451, 4802));
        assert!(matches!(omega_p_closed(3, 5), Err(Error::Usage(_))));
    }

    #[test]
    fn p2_parts() {
        let parts: Vec<Rat> = [1, 5, 3, 7, 2, 6, 10, 14].iter().map(|&e| omega_p_closed(2, e).unwrap()).collect();
        let expect = [rat(49, 32), rat(21, 32), rat(7, 32), rat(7, 32), rat(7, 64), rat(7, 64), rat(7, 64), rat(7, 64)];
        assert_eq!(parts, expect);
        assert_eq!(omega_p_total(2).unwrap(), rat(49, 16));
        assert_eq!(omega_p_total(3).unwrap(), rat(169, 81));
        assert_eq!(omega_p_total(5).unwrap(), rat(961, 625));
    }

    #[test]
    fn series_matches_closed_forms() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            for &e in PadicClassSet::new(p).unwrap().reps() {
                assert_eq!(omega_p_series(p, e).unwrap(), omega_p_closed(p, e).unwrap(), "p={p} eps={e}");
            }
        }
    }

    #[test]
    fn euler_factors() {
        assert_eq!(euler_factor(2).unwrap(), rat(49, 64));
        for p in primes_up_to(200) {
            let c = Rat::one() - rat_pow(p, -3);
            assert_eq!(euler_factor(p).unwrap(), &c * &c);
        }
        assert!(euler_factor_product(3).unwrap() < euler_factor_product(2).unwrap());
    }

    #[test]
    fn f_value_examples() {
        // F1 with α = −2, β ≥ 0
        assert_eq!(padic_f_value(5, 1, [Some(-2), Some(0)], [Some(0), None]).unwrap(), rat(25, 1));
        // p = 3, ε = u, α = −1 < β
        assert_eq!(padic_f_value(3, 2, [Some(-1), Some(3)], [Some(0), Some(1)]).unwrap(), rat(9, 1));
        // p = 2, ε = 5, v(a1) = v(b1) = −1 below the second pair
        assert_eq!(padic_f_value(2, 5, [Some(-1), Some(2)], [Some(-1), Some(0)]).unwrap(), rat(1, 1));
        assert_eq!(padic_f_value(2, 3, [Some(-1), Some(2)], [Some(-1), Some(0)]).unwrap(), rat(2, 1));
        // same α = β but split across the pairs: no correction
        assert_eq!(padic_f_value(2, 5, [Some(-1), Some(2)], [Some(0), Some(-1)]).unwrap(), rat(4, 1));
        assert!(matches!(padic_f_value(2, 9, [None, None], [None, None]), Err(Error::Usage(_))));
        assert!(matches!(padic_f_value(4, 1, [None, None], [None, None]), Err(Error::Usage(_))));
    }

    #[test]
    fn f_table_agrees_with_brute_force() {
        for p in [2u64, 3, 5] {
            for &e in PadicClassSet::new(p).unwrap().reps() {
                assert_eq!(brute_check_f(p, e, 2000, 7).unwrap(), 0, "p={p} eps={e}");
            }
        }
    }
}
