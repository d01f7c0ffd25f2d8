//! The isomorphism between unordered pairs of plane points and the cubic
//! fourfold, in both directions, plus the Veronese map and chart checks.

use core::cmp::Ordering;
use core::fmt;

use num_traits::{One, Zero};

use crate::error::bail;
use crate::exactmath::{gcd_all, is_perfect_square, is_squarefree, Rat};
use crate::variety::{classify, eval_cubic, normalize, Point6};
use crate::{Error, Result};

/// A primitive integer triple with positive first nonzero entry.
///
/// Ordered by max-norm first and then lexicographically from the largest
/// tuple down, so `(1,1,0) < (1,0,1) < (1,0,0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PlanePoint([i64; 3]);

impl PlanePoint {
    pub fn new(raw: [i128; 3]) -> Result<Self> {
        let g = gcd_all(&raw)?;
        if g == 0 {
            bail!(Domain, "the zero triple is not a plane point");
        }
        let g = g as i128;
        let sign = if raw.iter().find(|&&v| v != 0).is_some_and(|&v| v < 0) { -1 } else { 1 };
        let mut out = [0i64; 3];
        for (o, &r) in out.iter_mut().zip(&raw) {
            *o = i64::try_from(sign * (r / g))
                .map_err(|_| Error::Overflow("plane point coordinate".into()))?;
        }
        Ok(PlanePoint(out))
    }

    pub fn coords(&self) -> [i64; 3] {
        self.0
    }

    pub fn max_norm(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }
}

impl Ord for PlanePoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.max_norm()
            .cmp(&other.max_norm())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for PlanePoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{}:{})", self.0[0], self.0[1], self.0[2])
    }
}

/// A plane point over `ℚ(√d)` with components `aᵢ + bᵢ·√d`.
///
/// Canonical form: content 1, first nonzero `bᵢ` positive (replacing the
/// triple by its conjugate if needed), then first nonzero `aᵢ` positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadPlanePoint {
    d: i64,
    a: [i64; 3],
    b: [i64; 3],
}

impl QuadPlanePoint {
    pub fn new(d: i64, a: [i128; 3], b: [i128; 3]) -> Result<Self> {
        if d == 0 || d == 1 || !is_squarefree(d as i128) {
            bail!(Domain, "{d} is not a squarefree integer other than 0 and 1");
        }
        Self::canonical(d, a, b)
    }

    /// Canonicalizes without checking that `d` is squarefree.
    pub(crate) fn canonical(d: i64, a: [i128; 3], b: [i128; 3]) -> Result<Self> {
        if b == [0; 3] {
            bail!(Domain, "a triple with b = 0 is a rational plane point");
        }
        let all = [a[0], a[1], a[2], b[0], b[1], b[2]];
        let g = gcd_all(&all)? as i128;
        let first_sign = |t: &[i128; 3]| t.iter().find(|&&v| v != 0).map_or(1, |v| v.signum());
        let sb = first_sign(&b);
        let sa = first_sign(&a);
        let conv = |t: [i128; 3], s: i128| -> Result<[i64; 3]> {
            let mut out = [0i64; 3];
            for (o, v) in out.iter_mut().zip(t) {
                *o = i64::try_from(s * v / g)
                    .map_err(|_| Error::Overflow("quadratic plane point coordinate".into()))?;
            }
            Ok(out)
        };
        Ok(Self { d, a: conv(a, sa)?, b: conv(b, sb)? })
    }

    pub fn d(&self) -> i64 {
        self.d
    }
    pub fn a(&self) -> [i64; 3] {
        self.a
    }
    pub fn b(&self) -> [i64; 3] {
        self.b
    }

    /// Whether the triple is a `ℚ(√d)`-multiple of its conjugate, i.e. the
    /// pair it spans is really a rational point counted twice.
    pub fn is_degenerate(&self) -> bool {
        let (a, b) = (self.a.map(i128::from), self.b.map(i128::from));
        // w ∥ w̄ iff all 2×2 minors of the rows a, b vanish
        (0..3).all(|i| (i + 1..3).all(|j| a[i] * b[j] == a[j] * b[i]))
    }
}

impl fmt::Display for QuadPlanePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.d;
        let comp = |i: usize| alloc::format!("{}{:+}√{}", self.a[i], self.b[i], d);
        write!(f, "({}:{}:{})", comp(0), comp(1), comp(2))
    }
}

/// The preimage of a point: an unordered rational pair with `y ≤ z`, or a
/// conjugate pair represented by one of its members.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PreimagePair {
    Rational(PlanePoint, PlanePoint),
    Quadratic(QuadPlanePoint),
}

impl PreimagePair {
    pub fn rational(y: PlanePoint, z: PlanePoint) -> Self {
        if y <= z {
            PreimagePair::Rational(y, z)
        } else {
            PreimagePair::Rational(z, y)
        }
    }

    pub fn to_point(&self) -> Result<Point6> {
        match self {
            PreimagePair::Rational(y, z) => pair_to_point(y, z),
            PreimagePair::Quadratic(w) => quad_to_point(w),
        }
    }
}

impl fmt::Display for PreimagePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PreimagePair::Rational(y, z) => write!(f, "{{{y}, {z}}}"),
            PreimagePair::Quadratic(w) => write!(f, "{{w, conj(w)}} with w = {w}, d = {}", w.d),
        }
    }
}

/// The raw (unnormalized) image of a pair of integer triples.
pub(crate) fn pair_image(y: [i128; 3], z: [i128; 3]) -> [i128; 6] {
    [
        y[0] * z[0],
        y[1] * z[1],
        y[2] * z[2],
        y[0] * z[1] + y[1] * z[0],
        y[0] * z[2] + y[2] * z[0],
        y[1] * z[2] + y[2] * z[1],
    ]
}

pub fn pair_to_point(y: &PlanePoint, z: &PlanePoint) -> Result<Point6> {
    normalize(pair_image(y.0.map(i128::from), z.0.map(i128::from)))
}

/// Image of the conjugate pair `{w, w̄}`: `xᵢ = N(wᵢ)`, `xᵢⱼ = Tr(wᵢ·w̄ⱼ)`.
pub fn quad_to_point(w: &QuadPlanePoint) -> Result<Point6> {
    let d = w.d as i128;
    let (a, b) = (w.a.map(i128::from), w.b.map(i128::from));
    let ovf = || Error::Overflow("quadratic pair image".into());
    let form = |i: usize, j: usize| -> Result<i128> {
        let aa = a[i].checked_mul(a[j]).ok_or_else(ovf)?;
        let bb = b[i].checked_mul(b[j]).and_then(|v| v.checked_mul(d)).ok_or_else(ovf)?;
        aa.checked_sub(bb).ok_or_else(ovf)
    };
    let twice = |v: i128| v.checked_mul(2).ok_or_else(ovf);
    normalize([
        form(0, 0)?,
        form(1, 1)?,
        form(2, 2)?,
        twice(form(0, 1)?)?,
        twice(form(0, 2)?)?,
        twice(form(1, 2)?)?,
    ])
}

/// The diagonal embedding `t ↦ {t, t}`.
pub fn veronese(t: &PlanePoint) -> Result<Point6> {
    pair_to_point(t, t)
}

/// Swaps index 0 with index `i` in a point's coordinates (an involution).
pub(crate) fn permute_point(c: [i128; 6], i: usize) -> [i128; 6] {
    let [x0, x1, x2, x01, x02, x12] = c;
    match i {
        1 => [x1, x0, x2, x01, x12, x02],
        2 => [x2, x1, x0, x12, x02, x01],
        _ => c,
    }
}

fn permute_triple(mut t: [i128; 3], i: usize) -> [i128; 3] {
    t.swap(0, i);
    t
}

/// Recovers the unordered preimage of an on-variety point.
pub fn point_to_pair(x: &Point6) -> Result<PreimagePair> {
    let p = eval_cubic(x);
    if p != 0 {
        bail!(Precondition, "{x} is not on the variety (P = {p})");
    }
    let c = x.coords().map(i128::from);
    let Some(i) = (0..3).find(|&i| c[i] != 0) else {
        return case_b(c);
    };
    let [x0, x1, x2, x01, x02, x12] = permute_point(c, i);
    let d01 = x01 * x01 - 4 * x0 * x1;
    let d02 = x02 * x02 - 4 * x0 * x2;
    let coupling = x01 * x02 - 2 * x0 * x12;
    let eps = classify(x)?.epsilon as i128;

    let root = |v: i128| {
        is_perfect_square(v)
            .map(|r| r as i128)
            .ok_or_else(|| Error::Inconsistent(alloc::format!("square root failure at {x}")))
    };
    let exact_div = |v: i128| {
        if v % eps != 0 {
            return Err(Error::Inconsistent(alloc::format!("square class mismatch at {x}")));
        }
        Ok(v / eps)
    };

    // square roots with √Δ01·√Δ02 matching the coupling term (scaled by ε)
    let s2 = root(exact_div(d02)?)?;
    let mut s1 = root(exact_div(d01)?)?;
    if eps * s1 * s2 != coupling {
        s1 = -s1;
    }
    if eps * s1 * s2 != coupling {
        bail!(Inconsistent, "square-root coupling fails at {x}");
    }

    if eps == 1 {
        let y = permute_triple([2 * x0, x01 + s1, x02 + s2], i);
        let z = permute_triple([2 * x0, x01 - s1, x02 - s2], i);
        Ok(PreimagePair::rational(PlanePoint::new(y)?, PlanePoint::new(z)?))
    } else {
        let a = permute_triple([2 * x0, x01, x02], i);
        let b = permute_triple([0, s1, s2], i);
        Ok(PreimagePair::Quadratic(QuadPlanePoint::new(eps as i64, a, b)?))
    }
}

/// All diagonal coordinates vanish, so one cross coordinate does too and the
/// quadratic form factors over ℚ.
fn case_b(c: [i128; 6]) -> Result<PreimagePair> {
    let [_, _, _, x01, x02, x12] = c;
    let (y, z) = if x12 == 0 {
        ([1, 0, 0], [0, x01, x02])
    } else if x02 == 0 {
        ([0, 1, 0], [x01, 0, x12])
    } else if x01 == 0 {
        ([0, 0, 1], [x02, x12, 0])
    } else {
        bail!(Inconsistent, "no vanishing cross coordinate on an on-variety point");
    };
    Ok(PreimagePair::rational(PlanePoint::new(y)?, PlanePoint::new(z)?))
}

/// `a + b·√d` over ℚ, just enough arithmetic for the gluing check.
#[derive(Clone, Debug, PartialEq)]
struct QuadRat {
    a: Rat,
    b: Rat,
    d: i64,
}

impl QuadRat {
    fn new(a: Rat, b: Rat, d: i64) -> Self {
        Self { a, b, d }
    }

    fn d_rat(&self) -> Rat {
        Rat::from_integer(self.d.into())
    }

    fn add(&self, o: &Self) -> Self {
        Self::new(&self.a + &o.a, &self.b + &o.b, self.d)
    }

    fn mul(&self, o: &Self) -> Self {
        Self::new(
            &self.a * &o.a + &self.b * &o.b * self.d_rat(),
            &self.a * &o.b + &self.b * &o.a,
            self.d,
        )
    }

    fn recip(&self) -> Option<Self> {
        let n = &self.a * &self.a - &self.b * &self.b * self.d_rat();
        if n.is_zero() {
            return None;
        }
        Some(Self::new(&self.a / &n, -&self.b / &n, self.d))
    }

    fn conj(&self) -> Self {
        Self::new(self.a.clone(), -self.b.clone(), self.d)
    }
}

/// Compares the two ways of moving a point from the chart `x0 ≠ 0` to the
/// chart `x0 + x1 + x01 ≠ 0` of the quotient.
///
/// Returns `None` when the point is outside the overlap. Otherwise returns
/// whether three evaluations of the five target coordinates agree exactly:
/// the quotient-side formula, the coordinate change on the variety followed
/// by the inverse chart map, and the change of chart applied to the
/// preimage plane points themselves.
pub fn check_gluing(x: &Point6) -> Result<Option<bool>> {
    let p = eval_cubic(x);
    if p != 0 {
        bail!(Precondition, "{x} is not on the variety (P = {p})");
    }
    if x.x0() == 0 {
        return Ok(None);
    }
    let c = x.coords().map(|v| Rat::from_integer(v.into()));
    let [x1, x2, x01, x02, x12] = [1, 2, 3, 4, 5].map(|i| &c[i] / &c[0]);
    let denom = Rat::one() + &x1 + &x01;
    if denom.is_zero() {
        return Ok(None);
    }

    // order: U01', U02', U1', U2', U12'
    let via_quotient = [
        (&x01 + &x1 * Rat::from_integer(2.into())) / &denom,
        (&x02 + &x12) / &denom,
        &x1 / &denom,
        &x2 / &denom,
        &x12 / &denom,
    ];

    let [v1, v2, v01, v02, v12] = [&x1, &x2, &x01, &x02, &x12].map(|v| v / &denom);
    let via_variety = [
        &v01 + &v1 * Rat::from_integer(2.into()),
        &v02 + &v12,
        v1.clone(),
        v2.clone(),
        v12.clone(),
    ];

    let via_planes = match plane_route(x)? {
        Some(v) => v,
        None => return Ok(Some(false)),
    };

    Ok(Some(via_quotient == via_variety && via_quotient == via_planes))
}

/// Coordinates `U'` computed from affine plane points `(1:Y1:Y2)`, `(1:Z1:Z2)`
/// sent to `(1−Y1':Y1':Y2')` with `Y1' = Y1/(1+Y1)`, `Y2' = Y2/(1+Y1)`.
fn plane_route(x: &Point6) -> Result<Option<[Rat; 5]>> {
    let to_rat = |v: i64| Rat::from_integer(v.into());
    let (y, z) = match point_to_pair(x)? {
        PreimagePair::Rational(y, z) => {
            let lift = |t: PlanePoint| {
                let c = t.coords();
                [1, 2].map(|i| QuadRat::new(to_rat(c[i]) / to_rat(c[0]), Rat::zero(), 2))
            };
            (lift(y), lift(z))
        }
        PreimagePair::Quadratic(w) => {
            let d = w.d();
            let comp = |i: usize| QuadRat::new(to_rat(w.a()[i]), to_rat(w.b()[i]), d);
            let Some(inv0) = comp(0).recip() else {
                return Ok(None);
            };
            let y = [comp(1).mul(&inv0), comp(2).mul(&inv0)];
            let z = [y[0].conj(), y[1].conj()];
            (y, z)
        }
    };
    let one = QuadRat::new(Rat::one(), Rat::zero(), y[0].d);
    let shift = |t: &[QuadRat; 2]| -> Option<[QuadRat; 2]> {
        let inv = one.add(&t[0]).recip()?;
        Some([t[0].mul(&inv), t[1].mul(&inv)])
    };
    let (Some(y), Some(z)) = (shift(&y), shift(&z)) else {
        return Ok(None);
    };
    let coords = [
        y[0].add(&z[0]),
        y[1].add(&z[1]),
        y[0].mul(&z[0]),
        y[1].mul(&z[1]),
        y[0].mul(&z[1]).add(&y[1].mul(&z[0])),
    ];
    if coords.iter().any(|q| !q.b.is_zero()) {
        return Ok(None);
    }
    Ok(Some(coords.map(|q| q.a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variety::{height, is_singular};
    use proptest::prelude::*;

    fn pp(c: [i128; 3]) -> PlanePoint {
        PlanePoint::new(c).unwrap()
    }

    fn p6(c: [i128; 6]) -> Point6 {
        normalize(c).unwrap()
    }

    #[test]
    fn forward_examples() {
        assert_eq!(pair_to_point(&pp([1, 1, 0]), &pp([1, 0, 1])).unwrap().coords(), [1, 0, 0, 1, 1, 1]);
        assert_eq!(pair_to_point(&pp([1, 1, 1]), &pp([1, 1, 1])).unwrap().coords(), [1, 1, 1, 2, 2, 2]);
        assert_eq!(pair_to_point(&pp([1, 0, 0]), &pp([0, 1, 1])).unwrap().coords(), [0, 0, 0, 1, 1, 0]);
    }

    #[test]
    fn quad_examples() {
        let w = QuadPlanePoint::new(-1, [1, 0, 0], [0, 1, 1]).unwrap();
        let x = quad_to_point(&w).unwrap();
        assert_eq!(x.coords(), [1, 1, 1, 0, 0, 2]);
        assert_eq!(classify(&x).unwrap().epsilon, -1);

        let w = QuadPlanePoint::new(5, [1, 0, 0], [0, 1, 0]).unwrap();
        let x = quad_to_point(&w).unwrap();
        assert_eq!(x.coords(), [1, -5, 0, 0, 0, 0]);
        assert_eq!(classify(&x).unwrap().epsilon, 5);

        let w = QuadPlanePoint::new(5, [1, 1, 1], [1, 1, 1]).unwrap();
        assert!(w.is_degenerate());
        assert_eq!(quad_to_point(&w).unwrap().coords(), [1, 1, 1, 2, 2, 2]);

        assert!(QuadPlanePoint::new(4, [1, 0, 0], [0, 1, 0]).is_err());
        assert!(QuadPlanePoint::new(5, [1, 0, 0], [0, 0, 0]).is_err());
    }

    #[test]
    fn veronese_examples() {
        assert_eq!(veronese(&pp([1, 0, 0])).unwrap().coords(), [1, 0, 0, 0, 0, 0]);
        assert_eq!(veronese(&pp([1, 1, 1])).unwrap().coords(), [1, 1, 1, 2, 2, 2]);
        assert_eq!(veronese(&pp([1, 2, 0])).unwrap().coords(), [1, 4, 0, 4, 0, 0]);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(
            point_to_pair(&p6([1, 0, 0, 1, 1, 1])).unwrap(),
            PreimagePair::Rational(pp([1, 1, 0]), pp([1, 0, 1]))
        );
        assert_eq!(
            point_to_pair(&p6([1, 1, 1, 0, 0, 2])).unwrap(),
            PreimagePair::Quadratic(QuadPlanePoint::new(-1, [1, 0, 0], [0, 1, 1]).unwrap())
        );
        assert_eq!(
            point_to_pair(&p6([0, 0, 0, 1, 1, 0])).unwrap(),
            PreimagePair::Rational(pp([1, 0, 0]), pp([0, 1, 1]))
        );
        assert!(matches!(point_to_pair(&p6([1, 1, 1, 1, 1, 1])), Err(Error::Precondition(_))));
    }

    #[test]
    fn plane_order() {
        assert!(pp([1, 1, 0]) < pp([1, 0, 1]));
        assert!(pp([1, 0, 0]) < pp([0, 1, 1]));
        assert!(pp([1, 0, 0]) < pp([2, 0, 1]));
    }

    #[test]
    fn gluing_examples() {
        assert_eq!(check_gluing(&p6([1, 0, 0, 1, 1, 1])).unwrap(), Some(true));
        assert_eq!(check_gluing(&p6([1, 1, 1, 0, 0, 2])).unwrap(), Some(true));
        // 1 + x1 + x01 = 0
        let y = pp([1, -1, 0]);
        let x = pair_to_point(&y, &y).unwrap();
        assert_eq!(x.coords(), [1, 1, 0, -2, 0, 0]);
        assert_eq!(check_gluing(&x).unwrap(), None);
        assert_eq!(check_gluing(&p6([0, 0, 0, 1, 1, 0])).unwrap(), None);
    }

    fn primitive_triples(r: i128) -> alloc::vec::Vec<PlanePoint> {
        let mut out = alloc::vec::Vec::new();
        for a in -r..=r {
            for b in -r..=r {
                for c in -r..=r {
                    let t = [a, b, c];
                    if gcd_all(&t).unwrap() == 1 && t.iter().find(|&&v| v != 0).unwrap() > &0 {
                        out.push(pp(t));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn raw_images_are_primitive() {
        let pts = primitive_triples(5);
        for y in &pts {
            for z in &pts {
                let raw = pair_image(y.0.map(i128::from), z.0.map(i128::from));
                assert_eq!(gcd_all(&raw).unwrap(), 1, "{y} {z}");
            }
        }
    }

    #[test]
    fn veronese_heights_bracket() {
        for t in primitive_triples(6) {
            let m = t.max_norm() as i128;
            let h = height(&veronese(&t).unwrap());
            assert!(m.pow(6) <= h && h <= 8 * m.pow(6));
            assert!(is_singular(&veronese(&t).unwrap()).unwrap());
        }
    }

    fn triple() -> impl Strategy<Value = PlanePoint> {
        prop::array::uniform3(-40i128..=40)
            .prop_filter("nonzero", |t| *t != [0; 3])
            .prop_map(pp)
    }

    fn squarefree_d() -> impl Strategy<Value = i64> {
        (-60i64..=60).prop_filter("squarefree, not 0 or 1", |&d| d != 1 && is_squarefree(d as i128))
    }

    proptest! {
        #[test]
        fn rational_round_trip(y in triple(), z in triple()) {
            let x = pair_to_point(&y, &z).unwrap();
            prop_assert_eq!(eval_cubic(&x), 0);
            let back = point_to_pair(&x).unwrap();
            prop_assert_eq!(back, PreimagePair::rational(y, z));
            prop_assert_eq!(back.to_point().unwrap(), x);
            prop_assert_ne!(check_gluing(&x).unwrap(), Some(false));
        }

        #[test]
        fn quadratic_round_trip(
            d in squarefree_d(),
            a in prop::array::uniform3(-30i128..=30),
            b in prop::array::uniform3(-30i128..=30),
        ) {
            prop_assume!(b != [0; 3]);
            let w = QuadPlanePoint::new(d, a, b).unwrap();
            let x = quad_to_point(&w).unwrap();
            prop_assert_eq!(eval_cubic(&x), 0);
            let class = classify(&x).unwrap();
            if w.is_degenerate() {
                prop_assert_eq!(class.epsilon, 1);
                prop_assert!(class.is_diagonal);
            } else {
                prop_assert_eq!(class.epsilon, d);
            }
            prop_assert_eq!(point_to_pair(&x).unwrap().to_point().unwrap(), x);
            prop_assert_ne!(check_gluing(&x).unwrap(), Some(false));
        }
    }
}
