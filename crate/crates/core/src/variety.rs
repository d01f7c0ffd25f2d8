//! The cubic fourfold as data: the cubic and determinant forms, the three
//! discriminants, height, projective normalization, and classification.
//!
//! Coordinates are always ordered `(x0, x1, x2, x01, x02, x12)`.

use core::fmt;
use core::str::FromStr;

use crate::error::bail;
use crate::exactmath::{gcd_all, is_perfect_square, squarefree_kernel};
use crate::{Error, Result};

/// Largest coordinate magnitude a [`Point6`] may carry. Keeps every cubic
/// expression in the coordinates inside `i128`.
pub const COORD_LIMIT: i64 = 1 << 40;

/// A primitive integer representative of a point of `ℙ⁵`, sign-normalized so
/// the first nonzero coordinate is positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point6([i64; 6]);

impl Point6 {
    pub fn coords(&self) -> [i64; 6] {
        self.0
    }
    pub fn x0(&self) -> i64 {
        self.0[0]
    }
    pub fn x1(&self) -> i64 {
        self.0[1]
    }
    pub fn x2(&self) -> i64 {
        self.0[2]
    }
    pub fn x01(&self) -> i64 {
        self.0[3]
    }
    pub fn x02(&self) -> i64 {
        self.0[4]
    }
    pub fn x12(&self) -> i64 {
        self.0[5]
    }

    /// Largest absolute coordinate.
    pub fn max_norm(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }

    fn wide(&self) -> [i128; 6] {
        self.0.map(i128::from)
    }
}

impl fmt::Display for Point6 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.0;
        write!(f, "{}:{}:{}:{}:{}:{}", c[0], c[1], c[2], c[3], c[4], c[5])
    }
}

/// Parses `"x0:x1:x2:x01:x02:x12"` without normalizing.
pub fn parse_raw(s: &str) -> Result<[i128; 6]> {
    let mut out = [0i128; 6];
    let mut parts = s.trim().split(':');
    for slot in out.iter_mut() {
        let Some(tok) = parts.next() else {
            bail!(Usage, "expected six colon-separated integers in {s:?}");
        };
        *slot = tok
            .trim()
            .parse()
            .map_err(|_| Error::Usage(alloc::format!("not an integer: {tok:?}")))?;
    }
    if parts.next().is_some() {
        bail!(Usage, "expected six colon-separated integers in {s:?}");
    }
    Ok(out)
}

impl FromStr for Point6 {
    type Err = Error;

    /// Parses and normalizes; the all-zero tuple is a usage error here.
    fn from_str(s: &str) -> Result<Self> {
        let raw = parse_raw(s)?;
        normalize(raw).map_err(|e| match e {
            Error::Domain(m) => Error::Usage(m),
            other => other,
        })
    }
}

/// The discriminants `(Δ01, Δ02, Δ12)` with `Δij = xij² − 4·xi·xj`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DiscTriple {
    pub d01: i128,
    pub d02: i128,
    pub d12: i128,
}

impl DiscTriple {
    pub fn as_array(&self) -> [i128; 3] {
        [self.d01, self.d02, self.d12]
    }

    pub fn all_zero(&self) -> bool {
        self.as_array() == [0; 3]
    }
}

/// Square class of a point together with its diagonal flag.
///
/// `epsilon = 1` for points whose preimage pair is rational, `> 1` for real
/// quadratic pairs and `< 0` for imaginary ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PointClass {
    pub epsilon: i64,
    pub is_diagonal: bool,
}

/// Divides by the content and fixes the sign of the first nonzero coordinate.
pub fn normalize(raw: [i128; 6]) -> Result<Point6> {
    let g = gcd_all(&raw)?;
    if g == 0 {
        bail!(Domain, "the zero tuple is not a projective point");
    }
    let g = g as i128;
    let sign = if raw.iter().find(|&&v| v != 0).is_some_and(|&v| v < 0) { -1 } else { 1 };
    let mut out = [0i64; 6];
    for (o, &r) in out.iter_mut().zip(&raw) {
        let v = sign * (r / g);
        if v.abs() > COORD_LIMIT as i128 {
            bail!(Overflow, "coordinate {v} exceeds the supported range");
        }
        *o = v as i64;
    }
    Ok(Point6(out))
}

/// `x0·x12² + x1·x02² + x2·x01² − x01·x02·x12 − 4·x0·x1·x2`.
pub fn eval_cubic(x: &Point6) -> i128 {
    let [x0, x1, x2, x01, x02, x12] = x.wide();
    x0 * x12 * x12 + x1 * x02 * x02 + x2 * x01 * x01 - x01 * x02 * x12 - 4 * x0 * x1 * x2
}

/// Determinant of `[[2x0, x01, x02], [x01, 2x1, x12], [x02, x12, 2x2]]`.
pub fn eval_det(x: &Point6) -> i128 {
    let [x0, x1, x2, x01, x02, x12] = x.wide();
    2 * x0 * (4 * x1 * x2 - x12 * x12) - x01 * (2 * x01 * x2 - x12 * x02)
        + x02 * (x01 * x12 - 2 * x1 * x02)
}

pub fn deltas(x: &Point6) -> DiscTriple {
    let [x0, x1, x2, x01, x02, x12] = x.wide();
    DiscTriple {
        d01: x01 * x01 - 4 * x0 * x1,
        d02: x02 * x02 - 4 * x0 * x2,
        d12: x12 * x12 - 4 * x1 * x2,
    }
}

/// Cube of the max-norm.
pub fn height(x: &Point6) -> i128 {
    let m = x.max_norm() as i128;
    m * m * m
}

pub fn is_on_variety(x: &Point6) -> bool {
    eval_cubic(x) == 0
}

fn require_on_variety(x: &Point6) -> Result<()> {
    let p = eval_cubic(x);
    if p != 0 {
        bail!(Precondition, "{x} is not on the variety (P = {p})");
    }
    Ok(())
}

/// Square class of an on-variety point.
///
/// Every nonzero discriminant must have the same squarefree kernel; a
/// disagreement is reported as an internal inconsistency.
pub fn classify(x: &Point6) -> Result<PointClass> {
    require_on_variety(x)?;
    let ds = deltas(x).as_array();
    let Some(&first) = ds.iter().find(|&&d| d != 0) else {
        return Ok(PointClass { epsilon: 1, is_diagonal: true });
    };
    let eps = squarefree_kernel(first)?;
    for &d in ds.iter().filter(|&&d| d != 0) {
        if d % eps != 0 || is_perfect_square(d / eps).is_none() {
            bail!(Inconsistent, "discriminants of {x} lie in different square classes");
        }
    }
    Ok(PointClass { epsilon: eps as i64, is_diagonal: false })
}

/// The six 2×2 minors of the symmetric matrix, up to sign and factor:
/// the three discriminants followed by the three off-diagonal minors.
pub fn minors(x: &Point6) -> [i128; 6] {
    let [x0, x1, x2, x01, x02, x12] = x.wide();
    let d = deltas(x);
    [
        d.d01,
        d.d02,
        d.d12,
        x02 * x12 - 2 * x2 * x01,
        x01 * x12 - 2 * x1 * x02,
        x01 * x02 - 2 * x0 * x12,
    ]
}

/// Whether `x` lies on the singular locus (the Veronese surface).
pub fn is_singular(x: &Point6) -> Result<bool> {
    require_on_variety(x)?;
    let all_minors = minors(x).iter().all(|&m| m == 0);
    if all_minors != deltas(x).all_zero() {
        bail!(Inconsistent, "singular-locus tests disagree at {x}");
    }
    Ok(all_minors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(c: [i128; 6]) -> Point6 {
        normalize(c).unwrap()
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(pt([2, 2, 2, 4, 4, 4]).coords(), [1, 1, 1, 2, 2, 2]);
        assert_eq!(pt([-1, 0, 0, 0, 0, 0]).coords(), [1, 0, 0, 0, 0, 0]);
        assert_eq!(pt([0, 0, 0, -3, -3, 0]).coords(), [0, 0, 0, 1, 1, 0]);
        assert!(matches!(normalize([0; 6]), Err(Error::Domain(_))));
    }

    #[test]
    fn cubic_and_det_examples() {
        assert_eq!(eval_cubic(&pt([1, 0, 0, 1, 1, 1])), 0);
        assert_eq!(eval_cubic(&pt([1, 1, 1, 2, 2, 2])), 0);
        assert_eq!(eval_cubic(&pt([1, 1, 1, 1, 1, 1])), -2);
        assert_eq!(eval_det(&pt([1, 1, 1, 2, 2, 2])), 0);
        assert_eq!(eval_det(&pt([1, 1, 1, 1, 1, 1])), 4);
        assert_eq!(eval_det(&pt([1, 0, 0, 0, 0, 0])), 0);
    }

    #[test]
    fn delta_and_height_examples() {
        let t = |c| deltas(&pt(c)).as_array();
        assert_eq!(t([1, 0, 0, 1, 1, 1]), [1, 1, 1]);
        assert_eq!(t([1, 1, 1, 0, 0, 2]), [-4, -4, 0]);
        assert_eq!(t([1, 1, 1, 2, 2, 2]), [0, 0, 0]);
        assert_eq!(height(&pt([1, 1, 1, 0, 0, 2])), 8);
        assert_eq!(height(&pt([1, 0, 0, 0, 0, 0])), 1);
        assert_eq!(height(&pt([1, -5, 0, 0, 0, 0])), 125);
    }

    #[test]
    fn classify_examples() {
        let c = |v| classify(&pt(v)).unwrap();
        assert_eq!(c([1, 0, 0, 1, 1, 1]), PointClass { epsilon: 1, is_diagonal: false });
        assert_eq!(c([1, 1, 1, 0, 0, 2]), PointClass { epsilon: -1, is_diagonal: false });
        assert_eq!(c([1, 1, 1, 2, 2, 2]), PointClass { epsilon: 1, is_diagonal: true });
        assert!(matches!(classify(&pt([1, 1, 1, 1, 1, 1])), Err(Error::Precondition(_))));
    }

    #[test]
    fn singular_examples() {
        assert!(is_singular(&pt([1, 1, 1, 2, 2, 2])).unwrap());
        assert!(!is_singular(&pt([1, 0, 0, 1, 1, 1])).unwrap());
        assert!(is_singular(&pt([1, 4, 0, 4, 0, 0])).unwrap());
        assert!(matches!(is_singular(&pt([1, 1, 1, 1, 1, 1])), Err(Error::Precondition(_))));
    }

    #[test]
    fn parse_and_display() {
        let p: Point6 = "2:2:2:4:4:4".parse().unwrap();
        assert_eq!(alloc::format!("{p}"), "1:1:1:2:2:2");
        assert!(matches!("1:2:3".parse::<Point6>(), Err(Error::Usage(_))));
        assert!(matches!("1:2:3:4:5:x".parse::<Point6>(), Err(Error::Usage(_))));
        assert!(matches!("0:0:0:0:0:0".parse::<Point6>(), Err(Error::Usage(_))));
        assert!(matches!("1:2:3:4:5:6:7".parse::<Point6>(), Err(Error::Usage(_))));
    }

    fn coord() -> impl Strategy<Value = i128> {
        -1000i128..=1000
    }

    fn sym_image() -> impl Strategy<Value = Point6> {
        (prop::array::uniform3(-30i128..=30), prop::array::uniform3(-30i128..=30))
            .prop_filter("nonzero", |(y, z)| *y != [0; 3] && *z != [0; 3])
            .prop_map(|(y, z)| {
                pt([
                    y[0] * z[0],
                    y[1] * z[1],
                    y[2] * z[2],
                    y[0] * z[1] + y[1] * z[0],
                    y[0] * z[2] + y[2] * z[0],
                    y[1] * z[2] + y[2] * z[1],
                ])
            })
    }

    proptest! {
        #[test]
        fn det_is_minus_twice_cubic(c in prop::array::uniform6(coord())) {
            prop_assume!(c != [0; 6]);
            let x = pt(c);
            prop_assert_eq!(eval_det(&x), -2 * eval_cubic(&x));
        }

        #[test]
        fn normalize_is_idempotent(c in prop::array::uniform6(coord())) {
            prop_assume!(c != [0; 6]);
            let x = pt(c);
            prop_assert_eq!(normalize(x.wide()).unwrap(), x);
        }

        #[test]
        fn delta_products_are_squares(x in sym_image()) {
            let [x0, x1, x2, x01, x02, x12] = x.wide();
            let d = deltas(&x);
            // (i, j, k) = (0, 1, 2), (0, 2, 1), (1, 2, 0)
            prop_assert_eq!(d.d02 * d.d12, (x02 * x12 - 2 * x01 * x2).pow(2));
            prop_assert_eq!(d.d01 * d.d12, (x01 * x12 - 2 * x02 * x1).pow(2));
            prop_assert_eq!(d.d01 * d.d02, (x01 * x02 - 2 * x12 * x0).pow(2));
        }

        #[test]
        fn rational_images_classify_as_split(x in sym_image()) {
            let c = classify(&x).unwrap();
            prop_assert_eq!(c.epsilon, 1);
            prop_assert_eq!(is_singular(&x).unwrap(), c.is_diagonal);
        }
    }
}
