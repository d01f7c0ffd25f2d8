//! Counting points of bounded height by class.
//!
//! Three independent producers of points are provided:
//!
//! * [`DirectEngine`] solves the cubic for one coordinate over a box of the
//!   other five (it is linear in each of `x0`, `x1`, `x2`), then adds the
//!   Veronese surface separately. Exhaustive and slow; the reference oracle.
//! * [`RationalPairs`] walks unordered pairs of rational plane points.
//! * [`QuadPairs`] walks conjugate pairs over quadratic fields, organized by
//!   the leading diagonal coordinate and the square class of the
//!   discriminants.
//!
//! Every engine splits its work into deterministic tasks. Running all tasks
//! in any order, on any number of workers, into sinks that are merged
//! afterwards gives the same result.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use num_integer::gcd;

use crate::error::bail;
use crate::exactmath::{icbrt, isqrt, SquarefreeTable};
use crate::sym2::{pair_image, permute_point, quad_to_point, veronese, PlanePoint, QuadPlanePoint};
use crate::variety::{classify, eval_cubic, height, normalize, Point6, PointClass};
use crate::Result;

/// Default slack for the rational pair engine; provably sufficient.
pub const DEFAULT_SLACK: u32 = 4;

/// Default largest bound the direct engine accepts.
pub const DEFAULT_DIRECT_CAP: u64 = 30_000;

/// `⌊B^(1/3)⌋`, the coordinate bound for height `B`.
pub fn coord_bound(bound: u64) -> i64 {
    icbrt(bound as u128) as i64
}

/// The counting buckets: nondiagonal split points, real and imaginary
/// quadratic points, and the diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bucket {
    Split,
    Plus,
    Minus,
    Delta,
}

impl Bucket {
    pub const ALL: [Bucket; 4] = [Bucket::Split, Bucket::Plus, Bucket::Minus, Bucket::Delta];

    pub fn of(class: PointClass) -> Self {
        match (class.is_diagonal, class.epsilon) {
            (true, _) => Bucket::Delta,
            (false, 1) => Bucket::Split,
            (false, e) if e > 1 => Bucket::Plus,
            _ => Bucket::Minus,
        }
    }

    /// Position in [`Bucket::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }
}

/// Class labels as written to count tables. `Zero` includes the diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CountClass {
    Zero,
    Plus,
    Minus,
    Delta,
}

impl CountClass {
    pub const ALL: [CountClass; 4] =
        [CountClass::Zero, CountClass::Plus, CountClass::Minus, CountClass::Delta];

    pub fn label(self) -> &'static str {
        match self {
            CountClass::Zero => "0",
            CountClass::Plus => "+",
            CountClass::Minus => "-",
            CountClass::Delta => "delta",
        }
    }

    pub fn from_label(s: &str) -> Result<Self> {
        Ok(match s {
            "0" => CountClass::Zero,
            "+" => CountClass::Plus,
            "-" => CountClass::Minus,
            "delta" => CountClass::Delta,
            _ => bail!(Usage, "unknown class label {s:?}"),
        })
    }
}

impl fmt::Display for CountClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EngineKind {
    Pairs,
    Direct,
}

impl EngineKind {
    pub fn label(self) -> &'static str {
        match self {
            EngineKind::Pairs => "pairs",
            EngineKind::Direct => "direct",
        }
    }

    pub fn from_label(s: &str) -> Result<Self> {
        match s {
            "pairs" => Ok(EngineKind::Pairs),
            "direct" => Ok(EngineKind::Direct),
            _ => bail!(Usage, "unknown engine {s:?}"),
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn admits(self, d: i64) -> bool {
        match self {
            Sign::Plus => d > 1,
            Sign::Minus => d < 0,
        }
    }
}

/// One row of a count table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CountRecord {
    pub bound: u64,
    pub class: CountClass,
    pub count: u64,
    pub engine: EngineKind,
    pub elapsed_ms: u64,
}

/// Per-bucket counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassCounts([u64; 4]);

impl ClassCounts {
    pub fn get(&self, b: Bucket) -> u64 {
        self.0[b.index()]
    }

    pub fn class(&self, c: CountClass) -> u64 {
        match c {
            CountClass::Zero => self.get(Bucket::Split) + self.get(Bucket::Delta),
            CountClass::Plus => self.get(Bucket::Plus),
            CountClass::Minus => self.get(Bucket::Minus),
            CountClass::Delta => self.get(Bucket::Delta),
        }
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    fn bump(&mut self, b: Bucket) {
        self.0[b.index()] += 1;
    }

    pub fn merge(&mut self, other: &Self) {
        for (a, b) in self.0.iter_mut().zip(other.0) {
            *a += b;
        }
    }

    pub fn records(&self, bound: u64, engine: EngineKind, elapsed_ms: u64) -> [CountRecord; 4] {
        CountClass::ALL.map(|class| CountRecord {
            bound,
            class,
            count: self.class(class),
            engine,
            elapsed_ms,
        })
    }
}

/// Receives points from an engine, with the class the engine claims for
/// them when it knows it.
pub trait PointSink {
    fn accept(&mut self, x: Point6, claimed: Option<PointClass>) -> Result<()>;
}

fn check_member(x: &Point6, bound: u64) -> Result<()> {
    let p = eval_cubic(x);
    if p != 0 {
        bail!(Inconsistent, "engine produced {x} off the variety (P = {p})");
    }
    if height(x) > bound as i128 {
        bail!(Inconsistent, "engine produced {x} above the bound {bound}");
    }
    Ok(())
}

fn check_claim(x: &Point6, claimed: Option<PointClass>) -> Result<PointClass> {
    let class = classify(x)?;
    if let Some(c) = claimed {
        if c != class {
            bail!(
                Inconsistent,
                "engine class (eps {}, diagonal {}) differs from classify (eps {}, diagonal {}) at {x}",
                c.epsilon,
                c.is_diagonal,
                class.epsilon,
                class.is_diagonal
            );
        }
    }
    Ok(class)
}

/// A deduplicating set of points of height at most `bound`.
#[derive(Clone, Debug)]
pub struct PointStore {
    bound: u64,
    points: BTreeSet<Point6>,
    repeats: u64,
}

impl PointStore {
    pub fn new(bound: u64) -> Self {
        Self { bound, points: BTreeSet::new(), repeats: 0 }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Inserts after checking membership; returns whether the point was new.
    pub fn insert(&mut self, x: Point6) -> Result<bool> {
        check_member(&x, self.bound)?;
        let fresh = self.points.insert(x);
        if !fresh {
            self.repeats += 1;
        }
        Ok(fresh)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: &Point6) -> bool {
        self.points.contains(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Point6> {
        self.points.iter()
    }

    /// How many insertions hit an existing point.
    pub fn repeats(&self) -> u64 {
        self.repeats
    }

    pub fn merge(&mut self, other: PointStore) {
        let before = self.points.len() + other.points.len();
        self.repeats += other.repeats;
        self.points.extend(other.points);
        self.repeats += (before - self.points.len()) as u64;
    }

    /// The points split by bucket.
    pub fn buckets(&self) -> Result<[BTreeSet<Point6>; 4]> {
        let mut out: [BTreeSet<Point6>; 4] = Default::default();
        for x in &self.points {
            out[Bucket::of(classify(x)?).index()].insert(*x);
        }
        Ok(out)
    }

    pub fn counts(&self) -> Result<ClassCounts> {
        Ok(ClassCounts(self.buckets()?.map(|s| s.len() as u64)))
    }
}

impl PointSink for PointStore {
    fn accept(&mut self, x: Point6, claimed: Option<PointClass>) -> Result<()> {
        if claimed.is_some() {
            check_claim(&x, claimed)?;
        }
        self.insert(x).map(|_| ())
    }
}

/// Streaming per-bucket counters for engines that emit each point once.
///
/// Every point is checked for membership and its claimed class is compared
/// with [`classify`].
#[derive(Clone, Debug)]
pub struct Tally {
    bound: u64,
    counts: ClassCounts,
}

impl Tally {
    pub fn new(bound: u64) -> Self {
        Self { bound, counts: ClassCounts::default() }
    }

    pub fn counts(&self) -> ClassCounts {
        self.counts
    }

    pub fn merge(&mut self, other: &Tally) {
        self.counts.merge(&other.counts);
    }
}

impl PointSink for Tally {
    fn accept(&mut self, x: Point6, claimed: Option<PointClass>) -> Result<()> {
        check_member(&x, self.bound)?;
        let class = check_claim(&x, claimed)?;
        self.counts.bump(Bucket::of(class));
        Ok(())
    }
}

/// A point producer split into independent tasks `0..task_count()`.
pub trait Engine: Sync {
    fn task_count(&self) -> usize;
    fn run_task<S: PointSink>(&self, task: usize, sink: &mut S) -> Result<()>;

    /// Runs every task in order into one sink.
    fn run_all<S: PointSink>(&self, sink: &mut S) -> Result<()> {
        (0..self.task_count()).try_for_each(|t| self.run_task(t, sink))
    }
}

fn floor_div(a: i64, b: i64) -> i64 {
    let q = a / b;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q - 1
    } else {
        q
    }
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -floor_div(-a, b)
}

/// Integers `v` with `|c·v + e| ≤ m`, as a closed interval (possibly empty).
/// `c = 0` yields everything or nothing.
fn solve_abs(c: i64, e: i64, m: i64) -> (i64, i64) {
    match c.signum() {
        0 if e.abs() <= m => (i64::MIN / 4, i64::MAX / 4),
        0 => (1, 0),
        1 => (ceil_div(-m - e, c), floor_div(m - e, c)),
        _ => (ceil_div(-m + e, -c), floor_div(m + e, -c)),
    }
}

fn intersect(a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
    (a.0.max(b.0), a.1.min(b.1))
}

fn first_nonzero_positive(c: &[i64]) -> bool {
    c.iter().find(|&&v| v != 0).is_some_and(|&v| v > 0)
}

fn gcd6(c: &[i64; 6]) -> i64 {
    c.iter().fold(0, |g, &v| gcd(g, v))
}

/// Normalized primitive plane points with max-norm at most `r`, in
/// lexicographic order.
pub fn plane_points(r: i64) -> Vec<PlanePoint> {
    let mut out = Vec::new();
    for a in -r..=r {
        for b in -r..=r {
            for c in -r..=r {
                let t = [a, b, c];
                if first_nonzero_positive(&t) && gcd(gcd(a, b), c) == 1 {
                    out.push(PlanePoint::new(t.map(i128::from)).expect("nonzero triple"));
                }
            }
        }
    }
    out
}

/// Exhaustive search in the box `|coords| ≤ ⌊B^(1/3)⌋`.
pub struct DirectEngine {
    bound: u64,
    m: i64,
    veronese: VeroneseEngine,
}

impl DirectEngine {
    /// Refuses bounds above `cap`: the search costs `O(B^(5/3))`.
    pub fn new(bound: u64, cap: u64) -> Result<Self> {
        if bound > cap {
            bail!(
                Refused,
                "direct enumeration at B = {bound} exceeds the cap {cap}; raise the cap or use the pair engines"
            );
        }
        Ok(Self { bound, m: coord_bound(bound), veronese: VeroneseEngine::new(bound) })
    }

    fn width(&self) -> usize {
        (2 * self.m + 1) as usize
    }

    /// Solves for `x0` over one slice `x1 = outer`, with `Δ12 ≠ 0`, and
    /// emits the results with coordinates moved by the swap `0 ↔ solve`.
    fn solve_slice<S: PointSink>(&self, solve: usize, x1: i64, sink: &mut S) -> Result<()> {
        let m = self.m;
        for x2 in -m..=m {
            for x12 in -m..=m {
                let disc = x12 * x12 - 4 * x1 * x2;
                if disc == 0 {
                    continue;
                }
                let limit = m * disc.abs();
                for x01 in -m..=m {
                    for x02 in -m..=m {
                        let num = x1 * x02 * x02 + x2 * x01 * x01 - x01 * x02 * x12;
                        if num.abs() > limit || num % disc != 0 {
                            continue;
                        }
                        let x0 = -num / disc;
                        let c = [x0, x1, x2, x01, x02, x12];
                        if gcd6(&c) != 1 {
                            continue;
                        }
                        let raw = permute_point(c.map(i128::from), solve);
                        sink.accept(normalize(raw)?, None)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl Engine for DirectEngine {
    fn task_count(&self) -> usize {
        if self.bound == 0 {
            return 0;
        }
        3 * self.width() + self.veronese.task_count()
    }

    fn run_task<S: PointSink>(&self, task: usize, sink: &mut S) -> Result<()> {
        let w = self.width();
        if task < 3 * w {
            let x1 = (task % w) as i64 - self.m;
            self.solve_slice(task / w, x1, sink)
        } else {
            self.veronese.run_task(task - 3 * w, sink)
        }
    }
}

/// Images of the Veronese surface: `{t, t}` for plane points `t`.
pub struct VeroneseEngine {
    bound: u64,
    r: i64,
}

impl VeroneseEngine {
    pub fn new(bound: u64) -> Self {
        // H(veronese(t)) ≥ |t|⁶
        let r = isqrt(icbrt(bound as u128)) as i64;
        Self { bound, r }
    }
}

impl Engine for VeroneseEngine {
    fn task_count(&self) -> usize {
        if self.bound == 0 {
            0
        } else {
            self.r as usize + 1
        }
    }

    /// Task `t` covers plane points whose first coordinate is `t`.
    fn run_task<S: PointSink>(&self, task: usize, sink: &mut S) -> Result<()> {
        let r = self.r;
        let t0 = task as i64;
        let diag = Some(PointClass { epsilon: 1, is_diagonal: true });
        for t1 in -r..=r {
            for t2 in -r..=r {
                let t = [t0, t1, t2];
                if !first_nonzero_positive(&t) || gcd(gcd(t0, t1), t2) != 1 {
                    continue;
                }
                let x = veronese(&PlanePoint::new(t.map(i128::from))?)?;
                if height(&x) <= self.bound as i128 {
                    sink.accept(x, diag)?;
                }
            }
        }
        Ok(())
    }
}

/// Unordered pairs `{y, z}` of rational plane points, `y ≤ z`, with
/// `|y|·|z| ≤ slack·⌊B^(1/3)⌋`.
///
/// For each `y` the `z` range is the exact integer polytope cut out by the
/// six bilinear image coordinates, so every pair of height at most `B` inside
/// the slack window is visited once. The image of a primitive pair is
/// primitive and `|y|·|z| ≤ √6·max|image|`, so any slack of at least 3 is
/// complete.
pub struct RationalPairs {
    m: i64,
    limit: i64,
    ys: Vec<PlanePoint>,
}

impl RationalPairs {
    pub fn new(bound: u64, slack: u32) -> Result<Self> {
        if slack == 0 {
            bail!(Usage, "slack must be positive");
        }
        let m = coord_bound(bound);
        let limit = slack as i64 * m;
        let ys = if bound == 0 { Vec::new() } else { plane_points(isqrt(limit as u128) as i64) };
        Ok(Self { m, limit, ys })
    }

    fn pairs_for<S: PointSink>(&self, y: PlanePoint, sink: &mut S) -> Result<()> {
        let m = self.m;
        let yc = y.coords();
        let ny = y.max_norm();
        let i = (0..3).find(|&i| yc[i].abs() == ny).expect("nonzero");
        let (j, k) = match i {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let (yi, yj, yk) = (yc[i], yc[j], yc[k]);
        let own = |c: i64| if c == 0 { solve_abs(0, 0, m) } else { solve_abs(c, 0, m) };

        let zi_range = solve_abs(yi, 0, m);
        for zi in zi_range.0..=zi_range.1 {
            let zj_range = intersect(solve_abs(yi, yj * zi, m), own(yj));
            for zj in zj_range.0..=zj_range.1 {
                // |yj·zk + yk·zj| ≤ m
                let mut zk_range = intersect(solve_abs(yi, yk * zi, m), own(yk));
                zk_range = intersect(zk_range, solve_abs(yj, yk * zj, m));
                for zk in zk_range.0..=zk_range.1 {
                    let mut zc = [0i64; 3];
                    zc[i] = zi;
                    zc[j] = zj;
                    zc[k] = zk;
                    if !first_nonzero_positive(&zc) || gcd(gcd(zc[0], zc[1]), zc[2]) != 1 {
                        continue;
                    }
                    let z = PlanePoint::new(zc.map(i128::from))?;
                    if z < y || ny * z.max_norm() > self.limit {
                        continue;
                    }
                    let raw = pair_image(yc.map(i128::from), zc.map(i128::from));
                    let x = normalize(raw)?;
                    let class = PointClass { epsilon: 1, is_diagonal: z == y };
                    sink.accept(x, Some(class))?;
                }
            }
        }
        Ok(())
    }
}

impl Engine for RationalPairs {
    fn task_count(&self) -> usize {
        self.ys.len()
    }

    fn run_task<S: PointSink>(&self, task: usize, sink: &mut S) -> Result<()> {
        self.pairs_for(self.ys[task], sink)
    }
}

/// One column `(x0j, xj)` of a slice with fixed `x0`, with its discriminant
/// `x0j² − 4·x0·xj = d·s²`.
#[derive(Clone, Copy, Debug)]
struct Entry {
    d: i64,
    s: i64,
    cross: i64,
    diag: i64,
}

/// Conjugate pairs over `ℚ(√d)` for squarefree `d` of one sign.
///
/// With `x0 > 0` the point is determined by the columns `(x01, x1)`,
/// `(x02, x2)` and the sign of `√Δ01·√Δ02`, which fixes
/// `x12 = (x01·x02 ∓ d·s1·s2)/(2·x0)`. Both discriminants must lie in the
/// class `d` (or vanish). Points with `x0 = 0` force `x01 = x02 = 0` and
/// are listed separately; points with `x0 = x1 = 0` are always split.
pub struct QuadPairs {
    bound: u64,
    m: i64,
    sign: Sign,
    table: SquarefreeTable,
}

impl QuadPairs {
    pub fn new(bound: u64, sign: Sign) -> Self {
        let m = coord_bound(bound);
        let table = SquarefreeTable::new((5 * m * m).max(1) as u32);
        Self { bound, m, sign, table }
    }

    fn emit<S: PointSink>(&self, d: i64, a: [i64; 3], b: [i64; 3], sink: &mut S) -> Result<()> {
        let w = QuadPlanePoint::canonical(d, a.map(i128::from), b.map(i128::from))?;
        let x = quad_to_point(&w)?;
        sink.accept(x, Some(PointClass { epsilon: d, is_diagonal: false }))
    }

    fn chart0<S: PointSink>(&self, x0: i64, sink: &mut S) -> Result<()> {
        let m = self.m;
        let mut zeros = Vec::new();
        let mut entries = Vec::new();
        for cross in -m..=m {
            for diag in -m..=m {
                let disc = cross * cross - 4 * x0 * diag;
                if disc == 0 {
                    zeros.push(Entry { d: 0, s: 0, cross, diag });
                    continue;
                }
                let (d, s) = self.table.decompose(disc);
                if self.sign.admits(d) {
                    entries.push(Entry { d, s, cross, diag });
                }
            }
        }
        entries.sort_by_key(|e| e.d);

        let mut start = 0;
        while start < entries.len() {
            let d = entries[start].d;
            let end = start + entries[start..].iter().take_while(|e| e.d == d).count();
            let group = &entries[start..end];
            for e1 in group {
                for e2 in group {
                    self.close(x0, d, e1, e2, sink)?;
                }
                for z in &zeros {
                    self.close(x0, d, e1, z, sink)?;
                    self.close(x0, d, z, e1, sink)?;
                }
            }
            start = end;
        }
        Ok(())
    }

    /// Completes columns `e1 = (x01, x1)`, `e2 = (x02, x2)` to points.
    fn close<S: PointSink>(&self, x0: i64, d: i64, e1: &Entry, e2: &Entry, sink: &mut S) -> Result<()> {
        let (x01, x02) = (e1.cross, e2.cross);
        let signs: &[i64] = if e1.s == 0 || e2.s == 0 { &[1] } else { &[1, -1] };
        for &sg in signs {
            let b2 = sg * e2.s;
            let num = x01 * x02 - d * e1.s * b2;
            if num % (2 * x0) != 0 {
                continue;
            }
            let x12 = num / (2 * x0);
            if x12.abs() > self.m {
                continue;
            }
            if gcd6(&[x0, e1.diag, e2.diag, x01, x02, x12]) != 1 {
                continue;
            }
            self.emit(d, [2 * x0, x01, x02], [0, e1.s, b2], sink)?;
        }
        Ok(())
    }

    /// Points `(0, x1, x2, 0, 0, x12)` with `x1 > 0`.
    fn chart1<S: PointSink>(&self, x1: i64, sink: &mut S) -> Result<()> {
        let m = self.m;
        for x2 in -m..=m {
            for x12 in -m..=m {
                let disc = x12 * x12 - 4 * x1 * x2;
                if disc == 0 {
                    continue;
                }
                let (d, s) = self.table.decompose(disc);
                if !self.sign.admits(d) || gcd(gcd(x1, x2), x12) != 1 {
                    continue;
                }
                self.emit(d, [0, 2 * x1, x12], [0, 0, s], sink)?;
            }
        }
        Ok(())
    }
}

impl Engine for QuadPairs {
    fn task_count(&self) -> usize {
        if self.bound == 0 {
            0
        } else {
            2 * self.m as usize
        }
    }

    fn run_task<S: PointSink>(&self, task: usize, sink: &mut S) -> Result<()> {
        let m = self.m as usize;
        if task < m {
            self.chart0(task as i64 + 1, sink)
        } else {
            self.chart1((task - m) as i64 + 1, sink)
        }
    }
}

/// All pair engines together: rational pairs, then both quadratic signs.
pub struct PairsEngine {
    rational: RationalPairs,
    plus: QuadPairs,
    minus: QuadPairs,
}

impl PairsEngine {
    pub fn new(bound: u64, slack: u32) -> Result<Self> {
        Ok(Self {
            rational: RationalPairs::new(bound, slack)?,
            plus: QuadPairs::new(bound, Sign::Plus),
            minus: QuadPairs::new(bound, Sign::Minus),
        })
    }
}

impl Engine for PairsEngine {
    fn task_count(&self) -> usize {
        self.rational.task_count() + self.plus.task_count() + self.minus.task_count()
    }

    fn run_task<S: PointSink>(&self, task: usize, sink: &mut S) -> Result<()> {
        let r = self.rational.task_count();
        let p = self.plus.task_count();
        if task < r {
            self.rational.run_task(task, sink)
        } else if task < r + p {
            self.plus.run_task(task - r, sink)
        } else {
            self.minus.run_task(task - r - p, sink)
        }
    }
}

pub fn enumerate_direct(bound: u64, cap: u64) -> Result<PointStore> {
    let mut store = PointStore::new(bound);
    DirectEngine::new(bound, cap)?.run_all(&mut store)?;
    Ok(store)
}

pub fn enumerate_rational_pairs(bound: u64, slack: u32) -> Result<PointStore> {
    let mut store = PointStore::new(bound);
    RationalPairs::new(bound, slack)?.run_all(&mut store)?;
    Ok(store)
}

pub fn enumerate_quad_pairs(bound: u64, sign: Sign) -> Result<PointStore> {
    let mut store = PointStore::new(bound);
    QuadPairs::new(bound, sign).run_all(&mut store)?;
    Ok(store)
}

pub fn enumerate_veronese(bound: u64) -> Result<PointStore> {
    let mut store = PointStore::new(bound);
    VeroneseEngine::new(bound).run_all(&mut store)?;
    Ok(store)
}

/// Sequential counting at each bound. `clock` returns milliseconds and is
/// read around each bound; pass `|| 0` where no clock is available.
pub fn count(
    bounds: &[u64],
    engine: EngineKind,
    slack: u32,
    direct_cap: u64,
    mut clock: impl FnMut() -> u64,
) -> Result<Vec<CountRecord>> {
    if bounds.windows(2).any(|w| w[0] > w[1]) {
        bail!(Usage, "bounds must be nondecreasing");
    }
    let mut out = Vec::new();
    for &bound in bounds {
        let start = clock();
        let counts = match engine {
            EngineKind::Pairs => {
                let mut tally = Tally::new(bound);
                PairsEngine::new(bound, slack)?.run_all(&mut tally)?;
                tally.counts()
            }
            EngineKind::Direct => enumerate_direct(bound, direct_cap)?.counts()?,
        };
        let elapsed = clock().saturating_sub(start);
        out.extend(counts.records(bound, engine, elapsed));
    }
    Ok(out)
}
