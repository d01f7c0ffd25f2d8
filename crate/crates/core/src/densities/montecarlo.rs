//! Monte Carlo estimators for the archimedean densities and volumes.
//!
//! Every estimator is a mean of independent per-sample values. Samples are
//! split over a fixed number of shards, each driven by its own ChaCha8
//! stream derived from `(seed, integrand, shard)`, so results do not depend
//! on how shards are scheduled.

use alloc::vec::Vec;
use core::f64::consts::{E, PI};

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::real::{bilinear_max, f1_real, feps_real};
use crate::error::{bail, Result};

/// Smallest accepted sample count.
pub const MIN_SAMPLES: u64 = 10_000;
/// Shard count used unless a caller picks another.
pub const DEFAULT_SHARDS: u32 = 64;
/// Half-width of the rejection box for the `S₁⁺(e)` cross-check.
pub const REJECTION_HALF_WIDTH: f64 = 4.0;

/// A Monte Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub n_samples: u64,
    pub seed: u64,
}

impl Estimate {
    /// `k·self`, error scaled alike.
    pub fn scale(self, k: f64) -> Self {
        Estimate { value: k * self.value, stderr: k.abs() * self.stderr, ..self }
    }
}

/// Running first and second moments.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    pub n: u64,
    pub sum: f64,
    pub sumsq: f64,
}

impl Moments {
    pub fn push(&mut self, v: f64) {
        self.n += 1;
        self.sum += v;
        self.sumsq += v * v;
    }

    pub fn merge(&mut self, other: &Moments) {
        self.n += other.n;
        self.sum += other.sum;
        self.sumsq += other.sumsq;
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.n as f64
    }

    /// Standard error of the mean (sample variance with `n − 1`).
    pub fn stderr(&self) -> f64 {
        if self.n < 2 {
            return f64::INFINITY;
        }
        let n = self.n as f64;
        let var = ((self.sumsq - self.sum * self.sum / n) / (n - 1.0)).max(0.0);
        libm::sqrt(var / n)
    }
}

/// What a plan integrates.
#[derive(Clone, Debug, PartialEq)]
pub enum Integrand {
    /// `vol S₁⁺(e)` in radial coordinates on the cube surface.
    VolPlus,
    /// `vol S₁⁺(e)` by uniform rejection over `[−K, K]⁶`.
    VolPlusRejection { half_width: f64 },
    /// `vol S₁⁻` over the product of three unit disks.
    VolMinus,
    /// `ω∞` for the split class.
    OmegaPlus,
    /// `ω∞` for the class `−1`.
    OmegaMinus,
    /// Slope of `vol T(X)/X³` against `log X` over a grid of `X`.
    C18 { grid: Vec<f64> },
}

impl Integrand {
    fn tag(&self) -> u64 {
        match self {
            Integrand::VolPlus => 1,
            Integrand::VolPlusRejection { .. } => 2,
            Integrand::VolMinus => 3,
            Integrand::OmegaPlus => 4,
            Integrand::OmegaMinus => 5,
            Integrand::C18 { .. } => 6,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Integrand::VolPlusRejection { half_width } if half_width.is_nan() || *half_width <= 1.0 => {
                bail!(Usage, "rejection box half-width must exceed 1, got {half_width}")
            }
            Integrand::C18 { grid } => {
                if grid.len() < 4 {
                    bail!(Usage, "need at least 4 X values, got {}", grid.len());
                }
                if let Some(x) = grid.iter().find(|x| !x.is_finite() || **x < 10.0) {
                    bail!(Usage, "X values must be finite and at least 10, got {x}");
                }
                let first = grid[0];
                if grid.iter().all(|x| *x == first) {
                    bail!(Usage, "degenerate fit: fewer than 2 distinct X values");
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Result<f64> {
        Ok(match self {
            Integrand::VolPlus => {
                let f = bilinear_max(cube_surface(rng), cube_surface(rng));
                96.0 / (f * f * f)
            }
            Integrand::VolPlusRejection { half_width } => rejection_draw(rng, *half_width)?,
            Integrand::VolMinus => {
                let w = [unit_disk(rng), unit_disk(rng), unit_disk(rng)];
                let ok = (0..3).all(|j| {
                    (j + 1..3).all(|k| 2.0 * (w[j].0 * w[k].0 + w[j].1 * w[k].1).abs() <= 1.0)
                });
                if ok {
                    PI * PI * PI
                } else {
                    0.0
                }
            }
            Integrand::OmegaPlus => {
                let (y, my) = heavy_plane(rng);
                let (z, mz) = heavy_plane(rng);
                let f = f1_real(y[0], y[1], z[0], z[1]);
                0.5 * 144.0 * cube(my) * cube(mz) / cube(f)
            }
            Integrand::OmegaMinus => {
                let (a, ma) = heavy_complex(rng);
                let (b, mb) = heavy_complex(rng);
                let f = feps_real(a.0, a.1, b.0, b.1, -1.0);
                2.0 * 9.0 * PI * PI * cube(ma) * cube(mb) / cube(f)
            }
            Integrand::C18 { grid } => {
                let f = bilinear_max(cube_surface(rng), cube_surface(rng));
                slope(grid, |x| 192.0 * expanding_profile(x / f) / cube(x))
            }
        })
    }
}

/// A sharded Monte Carlo run.
#[derive(Clone, Debug)]
pub struct McPlan {
    integrand: Integrand,
    samples: u64,
    seed: u64,
    shards: u32,
}

impl McPlan {
    pub fn new(integrand: Integrand, samples: u64, seed: u64) -> Result<Self> {
        Self::with_shards(integrand, samples, seed, DEFAULT_SHARDS)
    }

    pub fn with_shards(integrand: Integrand, samples: u64, seed: u64, shards: u32) -> Result<Self> {
        if samples < MIN_SAMPLES {
            bail!(Usage, "need at least {MIN_SAMPLES} samples, got {samples}");
        }
        if shards == 0 || u64::from(shards) > samples {
            bail!(Usage, "shard count {shards} out of range for {samples} samples");
        }
        integrand.validate()?;
        Ok(McPlan { integrand, samples, seed, shards })
    }

    pub fn shard_count(&self) -> u32 {
        self.shards
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    fn shard_len(&self, shard: u32) -> u64 {
        let s = u64::from(self.shards);
        self.samples / s + u64::from(u64::from(shard) < self.samples % s)
    }

    /// Runs one shard.
    pub fn run_shard(&self, shard: u32) -> Result<Moments> {
        if shard >= self.shards {
            bail!(Usage, "shard {shard} out of range");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.integrand.tag() << 32 | u64::from(shard));
        let mut m = Moments::default();
        for _ in 0..self.shard_len(shard) {
            m.push(self.integrand.draw(&mut rng)?);
        }
        Ok(m)
    }

    /// Combines shard results, which must be given in shard order.
    pub fn finish(&self, shards: &[Moments]) -> Result<Estimate> {
        if shards.len() != self.shards as usize {
            bail!(Usage, "expected {} shard results, got {}", self.shards, shards.len());
        }
        let mut total = Moments::default();
        for m in shards {
            total.merge(m);
        }
        if total.n != self.samples {
            bail!(Inconsistent, "shards hold {} samples, expected {}", total.n, self.samples);
        }
        Ok(Estimate {
            value: total.mean(),
            stderr: total.stderr(),
            n_samples: total.n,
            seed: self.seed,
        })
    }

    /// Runs every shard in order on the current thread.
    pub fn run(&self) -> Result<Estimate> {
        let shards = (0..self.shards).map(|s| self.run_shard(s)).collect::<Result<Vec<_>>>()?;
        self.finish(&shards)
    }
}

/// `vol S₁⁺(e)`.
pub fn mc_vol_s1_plus(samples: u64, seed: u64) -> Result<Estimate> {
    McPlan::new(Integrand::VolPlus, samples, seed)?.run()
}

/// `vol S₁⁺(e)` by plain rejection from `[−K, K]⁶`.
pub fn mc_vol_s1_plus_rejection(samples: u64, seed: u64, half_width: f64) -> Result<Estimate> {
    McPlan::new(Integrand::VolPlusRejection { half_width }, samples, seed)?.run()
}

/// `vol S₁⁻`.
pub fn mc_vol_s1_minus(samples: u64, seed: u64) -> Result<Estimate> {
    McPlan::new(Integrand::VolMinus, samples, seed)?.run()
}

/// The `X³ log X` coefficient of `vol T(X)`.
pub fn mc_c18(grid: &[f64], samples: u64, seed: u64) -> Result<Estimate> {
    McPlan::new(Integrand::C18 { grid: grid.to_vec() }, samples, seed)?.run()
}

/// `ω∞` for `ε = 1` (`plus = true`) or `ε = −1`.
pub fn mc_omega_inf(plus: bool, samples: u64, seed: u64) -> Result<Estimate> {
    let integrand = if plus { Integrand::OmegaPlus } else { Integrand::OmegaMinus };
    McPlan::new(integrand, samples, seed)?.run()
}

/// `vol T(X)` for one `X`, by the same radial sampler as the slope fit.
pub fn mc_vol_expanding(x: f64, samples: u64, seed: u64) -> Result<Estimate> {
    if x.is_nan() || x < 1.0 {
        bail!(Usage, "X must be at least 1, got {x}");
    }
    if samples < MIN_SAMPLES {
        bail!(Usage, "need at least {MIN_SAMPLES} samples, got {samples}");
    }
    let mut m = Moments::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(7 << 32);
    for _ in 0..samples {
        let f = bilinear_max(cube_surface(&mut rng), cube_surface(&mut rng));
        m.push(192.0 * expanding_profile(x / f));
    }
    Ok(Estimate { value: m.mean(), stderr: m.stderr(), n_samples: samples, seed })
}

fn cube(x: f64) -> f64 {
    x * x * x
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn symmetric(rng: &mut ChaCha8Rng) -> f64 {
    2.0 * uniform(rng) - 1.0
}

/// Uniform on the surface of `[−1, 1]³`.
fn cube_surface(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let face = (uniform(rng) * 6.0) as usize;
    let mut v = [symmetric(rng), symmetric(rng), symmetric(rng)];
    v[face / 2] = if face % 2 == 0 { 1.0 } else { -1.0 };
    v
}

fn unit_disk(rng: &mut ChaCha8Rng) -> (f64, f64) {
    loop {
        let (a, b) = (symmetric(rng), symmetric(rng));
        if a * a + b * b <= 1.0 {
            return (a, b);
        }
    }
}

/// Draws from density `max(1, |y|∞)⁻³/12` on `ℝ²`; returns the point and
/// `max(1, |y|∞)`.
fn heavy_plane(rng: &mut ChaCha8Rng) -> ([f64; 2], f64) {
    if uniform(rng) * 3.0 < 1.0 {
        return ([symmetric(rng), symmetric(rng)], 1.0);
    }
    let r = 1.0 / (1.0 - uniform(rng));
    let side = (uniform(rng) * 4.0) as usize;
    let t = r * symmetric(rng);
    let edge = if side % 2 == 0 { r } else { -r };
    let y = if side < 2 { [edge, t] } else { [t, edge] };
    (y, r)
}

/// Draws from density `max(1, |w|)⁻³/(3π)` on `ℂ`; returns the point and
/// `max(1, |w|)`.
fn heavy_complex(rng: &mut ChaCha8Rng) -> ((f64, f64), f64) {
    if uniform(rng) * 3.0 < 1.0 {
        return (unit_disk(rng), 1.0);
    }
    let r = 1.0 / (1.0 - uniform(rng));
    let theta = 2.0 * PI * uniform(rng);
    ((r * libm::cos(theta), r * libm::sin(theta)), r)
}

fn rejection_draw(rng: &mut ChaCha8Rng, k: f64) -> Result<f64> {
    let v: [f64; 6] = core::array::from_fn(|_| k * symmetric(rng));
    let y = [v[0], v[1], v[2]];
    let z = [v[3], v[4], v[5]];
    let my = y.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mz = z.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let inside = bilinear_max(y, z) <= 1.0 && my <= mz && my * E > mz;
    if !inside {
        return Ok(0.0);
    }
    if my.max(mz) >= 0.99 * k {
        bail!(Inconsistent, "accepted sample within 1% of the box boundary [-{k}, {k}]^6");
    }
    let side = 2.0 * k;
    Ok(side * side * side * side * side * side)
}

/// `∫∫ s²t² ds dt` over `s, t ≥ 1`, `st ≤ T`, times 3.
fn expanding_profile(t: f64) -> f64 {
    if t <= 1.0 {
        return 0.0;
    }
    let t3 = cube(t);
    t3 * libm::log(t) - (t3 - 1.0) / 3.0
}

/// Least-squares slope of `h(X)` against `log X` over `grid`.
fn slope(grid: &[f64], h: impl Fn(f64) -> f64) -> f64 {
    let n = grid.len() as f64;
    let lx: Vec<f64> = grid.iter().map(|x| libm::log(*x)).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let ys: Vec<f64> = grid.iter().map(|x| h(*x)).collect();
    let my = ys.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (l, y) in lx.iter().zip(&ys) {
        sxy += (l - mx) * (y - my);
        sxx += (l - mx) * (l - mx);
    }
    sxy / sxx
}

/// `ζ(3)` by summing `n⁻³` backwards up to `terms` with an Euler–Maclaurin
/// tail.
pub fn zeta3_series(terms: u64) -> Result<f64> {
    if terms < 10 {
        bail!(Usage, "need at least 10 terms, got {terms}");
    }
    let n = terms as f64;
    let mut s = 1.0 / (2.0 * n * n) - 1.0 / (2.0 * n * n * n) + 1.0 / (4.0 * n * n * n * n);
    for k in (1..=terms).rev() {
        let k = k as f64;
        s += 1.0 / (k * k * k);
    }
    Ok(s)
}

/// Default term count for [`zeta3_series`].
pub const ZETA3_TERMS: u64 = 100_000_000;

#[cfg(test)]
mod tests {
    use super::*;

    const ZETA3: f64 = 1.202_056_903_159_594_2;

    fn combined(a: &Estimate, b: &Estimate) -> f64 {
        libm::sqrt(a.stderr * a.stderr + b.stderr * b.stderr)
    }

    #[test]
    fn rejects_small_or_degenerate_inputs() {
        assert!(mc_vol_s1_plus(9_999, 0).is_err());
        assert!(mc_c18(&[10.0, 30.0, 100.0], 20_000, 0).is_err());
        assert!(mc_c18(&[10.0; 4], 20_000, 0).is_err());
        assert!(mc_c18(&[5.0, 30.0, 100.0, 300.0], 20_000, 0).is_err());
        assert!(McPlan::with_shards(Integrand::VolMinus, 20_000, 0, 0).is_err());
    }

    #[test]
    fn deterministic_and_shard_independent_of_scheduling() {
        let plan = McPlan::new(Integrand::VolPlus, 40_000, 11).unwrap();
        let a = plan.run().unwrap();
        let mut parts: Vec<_> = (0..plan.shard_count()).rev().map(|s| plan.run_shard(s).unwrap()).collect();
        parts.reverse();
        let b = plan.finish(&parts).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, mc_vol_s1_plus(40_000, 11).unwrap());
        assert_ne!(a.value, mc_vol_s1_plus(40_000, 12).unwrap().value);
    }

    #[test]
    fn doubling_samples_halves_variance() {
        let a = mc_vol_s1_minus(100_000, 3).unwrap();
        let b = mc_vol_s1_minus(200_000, 3).unwrap();
        let ratio = (a.stderr * a.stderr) / (b.stderr * b.stderr);
        assert!((ratio - 2.0).abs() < 0.2, "ratio {ratio}");
    }

    #[test]
    fn minus_volume_is_inside_disk_product() {
        let v = mc_vol_s1_minus(50_000, 1).unwrap();
        assert!(v.value > 0.0 && v.value <= PI * PI * PI);
    }

    #[test]
    fn omega_identities_hold_at_modest_size() {
        let n = 400_000;
        let vp = mc_vol_s1_plus(n, 5).unwrap().scale(0.75);
        let op = mc_omega_inf(true, n, 6).unwrap();
        assert!((vp.value - op.value).abs() <= 4.0 * combined(&vp, &op), "{vp:?} {op:?}");
        let vm = mc_vol_s1_minus(n, 7).unwrap().scale(6.0 / PI);
        let om = mc_omega_inf(false, n, 8).unwrap();
        assert!((vm.value - om.value).abs() <= 4.0 * combined(&vm, &om), "{vm:?} {om:?}");
    }

    #[test]
    fn rejection_agrees_with_radial() {
        let r = mc_vol_s1_plus_rejection(2_000_000, 2, REJECTION_HALF_WIDTH).unwrap();
        let v = mc_vol_s1_plus(200_000, 2).unwrap();
        assert!(r.value > 0.0);
        assert!((r.value - v.value).abs() <= 4.0 * combined(&r, &v), "{r:?} {v:?}");
    }

    #[test]
    fn slope_is_twice_the_plus_volume() {
        let grid = [10.0, 30.0, 100.0, 300.0, 1000.0];
        let c = mc_c18(&grid, 100_000, 9).unwrap();
        let v = mc_vol_s1_plus(100_000, 9).unwrap();
        assert!(c.value > 0.0);
        // same stream tag differs, so compare within error bars
        assert!((c.value - 2.0 * v.value).abs() <= 4.0 * (c.stderr + 2.0 * v.stderr), "{c:?} {v:?}");
        let shifted = mc_c18(&[20.0, 60.0, 200.0, 600.0, 2000.0], 100_000, 9).unwrap();
        assert!((c.value - shifted.value).abs() <= 4.0 * combined(&c, &shifted));
    }

    #[test]
    fn expanding_volume_increases() {
        let mut last = 0.0;
        for x in [2.0, 10.0, 50.0] {
            let v = mc_vol_expanding(x, 20_000, 4).unwrap().value;
            assert!(v > last);
            last = v;
        }
    }

    #[test]
    fn zeta3_oracle() {
        let z = zeta3_series(1_000_000).unwrap();
        assert!((z - ZETA3).abs() < 1e-15, "{z}");
    }
}
