//! The `verify` suites. Each returns one record per check; a suite passes
//! when every check does.

use std::collections::BTreeSet;

use chordal_core::densities::montecarlo::zeta3_series;
use chordal_core::densities::padic::{brute_check_f, euler_factor, euler_factor_product, PadicClassSet};
use chordal_core::densities::report::PrimeDensities;
use chordal_core::enumerate::{
    plane_points, Bucket, DirectEngine, Engine, PairsEngine, Tally, VeroneseEngine,
};
use chordal_core::exactmath::{icbrt, isqrt, primes_up_to, rat};
use chordal_core::sym2::{check_gluing, point_to_pair, veronese};
use chordal_core::variety::{classify, deltas, eval_cubic, eval_det, height, is_singular, Point6};
use num_bigint::BigInt;
use serde::Serialize;

use crate::parallel::Runner;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub suite: &'static str,
    pub check: String,
    pub passed: bool,
    pub checked: u64,
    pub failures: u64,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub checks: Vec<Check>,
}

#[derive(Serialize)]
struct Summary<'a> {
    suite: &'a str,
    passed: bool,
    checks: usize,
    failed: usize,
}

impl SuiteReport {
    fn new(suite: &'static str) -> Self {
        SuiteReport { suite, checks: Vec::new() }
    }

    fn push(&mut self, check: impl Into<String>, checked: u64, failures: u64, detail: impl Into<String>) {
        self.checks.push(Check {
            suite: self.suite,
            check: check.into(),
            passed: failures == 0,
            checked,
            failures,
            detail: detail.into(),
        });
    }

    fn flag(&mut self, check: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.push(check, 1, u64::from(!ok), detail);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// One JSON object per check, then a summary line.
    pub fn json_lines(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s += &serde_json::to_string(c).expect("check serializes");
            s.push('\n');
        }
        let summary = Summary {
            suite: self.suite,
            passed: self.passed(),
            checks: self.checks.len(),
            failed: self.failed().count(),
        };
        s += &serde_json::to_string(&summary).expect("summary serializes");
        s.push('\n');
        s
    }
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// `Δ_ik·Δ_jk = (x_ik·x_jk − 2·x_ij·x_k)²` for each `k`, in exact arithmetic.
pub fn delta_square_identity(x: &Point6) -> bool {
    let [x0, x1, x2, x01, x02, x12] = x.coords().map(big);
    let d01 = &x01 * &x01 - 4 * &x0 * &x1;
    let d02 = &x02 * &x02 - 4 * &x0 * &x2;
    let d12 = &x12 * &x12 - 4 * &x1 * &x2;
    let sq = |v: BigInt| &v * &v;
    &d01 * &d02 == sq(&x01 * &x02 - 2 * &x12 * &x0)
        && &d01 * &d12 == sq(&x01 * &x12 - 2 * &x02 * &x1)
        && &d02 * &d12 == sq(&x02 * &x12 - 2 * &x01 * &x2)
}

/// Geometry identities on an evenly spread sample of the points of height
/// at most `bound`.
pub fn geometry(runner: &Runner, bound: u64, slack: u32, samples: u64) -> Result<SuiteReport> {
    let store = runner.collect(&PairsEngine::new(bound, slack)?, bound)?;
    let total = store.len() as u64;
    let stride = (total / samples).max(1) as usize;
    let points: Vec<Point6> = store.iter().step_by(stride).take(samples as usize).copied().collect();
    let n = points.len() as u64;

    let mut r = SuiteReport::new("geometry");
    r.flag(
        "sample_size",
        n >= samples,
        format!("{n} of {total} points of height <= {bound}, stride {stride}"),
    );

    let mut fails = [0u64; 7];
    let mut glued = 0u64;
    let mut buckets = [0u64; 4];
    for x in &points {
        let p = eval_cubic(x);
        fails[0] += u64::from(p != 0);
        fails[1] += u64::from(eval_det(x) != -2 * p);
        fails[2] += u64::from(!delta_square_identity(x));
        match classify(x) {
            Ok(c) => buckets[Bucket::of(c).index()] += 1,
            Err(_) => fails[3] += 1,
        }
        fails[4] += u64::from(is_singular(x).map_or(true, |s| s != deltas(x).all_zero()));
        fails[5] += u64::from(!point_to_pair(x).and_then(|w| w.to_point()).is_ok_and(|y| y == *x));
        match check_gluing(x) {
            Ok(None) => {}
            Ok(Some(true)) => glued += 1,
            Ok(Some(false)) | Err(_) => {
                glued += 1;
                fails[6] += 1;
            }
        }
    }
    let classes = format!(
        "split {}, plus {}, minus {}, diagonal {}",
        buckets[0], buckets[1], buckets[2], buckets[3]
    );
    r.push("cubic_vanishes", n, fails[0], classes);
    r.push("determinant_is_minus_twice_cubic", n, fails[1], "");
    r.push("delta_square_identity", n, fails[2], "");
    r.push("kernel_agreement", n, fails[3], "");
    r.push("singular_iff_all_deltas_vanish", n, fails[4], "");
    r.push("sym2_round_trip", n, fails[5], "");
    r.push("gluing_consistency", glued, fails[6], format!("{glued} applicable"));
    Ok(r)
}

const P2_PARTS: [(i64, i64, i64); 8] =
    [(1, 49, 32), (5, 21, 32), (3, 7, 32), (7, 7, 32), (2, 7, 64), (6, 7, 64), (10, 7, 64), (14, 7, 64)];

/// Exact local density identities, the Euler product, and the F table
/// against brute-force evaluation.
pub fn densities(primes: &[u64], zeta_terms: u64, brute_samples: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("densities");
    for &p in primes {
        match PrimeDensities::compute(p) {
            Ok(d) => r.flag(
                format!("exact_identities_p{p}"),
                true,
                format!("{} classes, total {}", d.parts.len(), d.total),
            ),
            Err(e) => r.flag(format!("exact_identities_p{p}"), false, e.to_string()),
        }
        if p == 2 {
            let d = PrimeDensities::compute(2)?;
            let bad = P2_PARTS
                .iter()
                .filter(|(e, n, m)| !d.parts.iter().any(|(eps, w)| eps == e && *w == rat(*n, *m)))
                .count() as u64;
            r.push("p2_parts", P2_PARTS.len() as u64, bad, format!("total {}", d.total));
        }
    }

    let limit = 100_000;
    let mut bad = 0;
    let all = primes_up_to(limit);
    for &p in &all {
        let q = rat(1, 1) - rat(1, p as i64).pow(3);
        if euler_factor(p)? != &q * &q {
            bad += 1;
        }
    }
    r.push("euler_factor_exact", all.len() as u64, bad, format!("primes up to {limit}"));

    let zeta3 = zeta3_series(zeta_terms)?;
    let target = 1.0 / (zeta3 * zeta3);
    let product = euler_factor_product(limit)?;
    let gap = (product - target).abs();
    r.flag(
        "euler_product_vs_zeta3",
        gap <= 1e-4,
        format!("product {product:.10}, 1/zeta(3)^2 {target:.10}, gap {gap:.3e}"),
    );

    for p in [2u64, 3, 5] {
        for &eps in PadicClassSet::new(p)?.reps() {
            let bad = brute_check_f(p, eps, brute_samples, 0)?;
            r.push(format!("f_table_brute_p{p}_eps{eps}"), brute_samples, bad, "");
        }
    }
    Ok(r)
}

/// Cross-engine set equality per bound, plus the Veronese rate.
pub fn counting(runner: &Runner, bounds: &[u64], slack: u32, direct_cap: u64) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("counting");
    for &b in bounds {
        let pairs = runner.collect(&PairsEngine::new(b, slack)?, b)?;
        let direct = runner.collect(&DirectEngine::new(b, direct_cap)?, b)?;
        r.push(format!("pairs_no_repeats_B{b}"), pairs.len() as u64, pairs.repeats(), "");
        let (pb, db) = (pairs.buckets()?, direct.buckets()?);
        for bucket in Bucket::ALL {
            let (p, d) = (&pb[bucket.index()], &db[bucket.index()]);
            let diff = p.symmetric_difference(d).count() as u64;
            r.push(
                format!("point_sets_equal_B{b}_{}", bucket_name(bucket)),
                d.len() as u64,
                diff,
                format!("pairs {}, direct {}", p.len(), d.len()),
            );
        }
        let streamed = runner.tally(&PairsEngine::new(b, slack)?, b)?;
        r.flag(
            format!("streamed_counts_equal_B{b}"),
            streamed == direct.counts()?,
            format!("{streamed:?}"),
        );
    }
    let rate = veronese_rate(&VERONESE_BOUNDS)?;
    r.flag(
        "veronese_rate_stable",
        rate.stable(),
        rate.normalized.iter().map(|(b, v)| format!("{b}:{v:.4}")).collect::<Vec<_>>().join(" "),
    );
    r.push("veronese_height_bracket", rate.images, rate.bracket_failures, "");
    Ok(r)
}

fn bucket_name(b: Bucket) -> &'static str {
    match b {
        Bucket::Split => "split",
        Bucket::Plus => "plus",
        Bucket::Minus => "minus",
        Bucket::Delta => "diagonal",
    }
}

pub const VERONESE_BOUNDS: [u64; 7] =
    [1_000, 10_000, 100_000, 1_000_000, 10_000_000, 100_000_000, 1_000_000_000];

pub struct VeroneseRate {
    /// `(B, N_Δ(B)/√B)`.
    pub normalized: Vec<(u64, f64)>,
    pub images: u64,
    pub bracket_failures: u64,
}

impl VeroneseRate {
    /// Whether the normalized counts stay within a factor 2 of each other.
    pub fn stable(&self) -> bool {
        let lo = self.normalized.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
        let hi = self.normalized.iter().map(|v| v.1).fold(0.0, f64::max);
        lo > 0.0 && hi <= 2.0 * lo
    }
}

/// Diagonal counts from the Veronese engine, and the height bracket
/// `m⁶ ≤ H(v(t)) ≤ 8m⁶` for every image at the largest bound.
pub fn veronese_rate(bounds: &[u64]) -> Result<VeroneseRate> {
    let mut normalized = Vec::new();
    for &b in bounds {
        let mut tally = Tally::new(b);
        VeroneseEngine::new(b).run_all(&mut tally)?;
        let n = tally.counts().get(Bucket::Delta);
        normalized.push((b, n as f64 / (b as f64).sqrt()));
    }
    let top = bounds.iter().copied().max().unwrap_or(1);
    let r = isqrt(icbrt(u128::from(top))) as i64;
    let mut images = 0;
    let mut bracket_failures = 0;
    let mut seen = BTreeSet::new();
    for t in plane_points(r) {
        let x = veronese(&t)?;
        let m = t.max_norm() as i128;
        let m6 = m.pow(6);
        let h = height(&x);
        images += 1;
        bracket_failures += u64::from(!(m6 <= h && h <= 8 * m6) || !seen.insert(x));
    }
    Ok(VeroneseRate { normalized, images, bracket_failures })
}
