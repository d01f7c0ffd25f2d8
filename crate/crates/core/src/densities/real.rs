//! The archimedean height functions.

/// `max{1, |y1·z1|, |y2·z2|, |z1+y1|, |z2+y2|, |y1·z2+y2·z1|}`.
pub fn f1_real(y1: f64, y2: f64, z1: f64, z2: f64) -> f64 {
    bilinear_max([1.0, y1, y2], [1.0, z1, z2]).max(1.0)
}

/// `max{1, |a1²−ε·b1²|, |a2²−ε·b2²|, |2a1|, |2a2|, |2(a1·a2−ε·b1·b2)|}`.
pub fn feps_real(a1: f64, b1: f64, a2: f64, b2: f64, eps: f64) -> f64 {
    [
        1.0,
        (a1 * a1 - eps * b1 * b1).abs(),
        (a2 * a2 - eps * b2 * b2).abs(),
        (2.0 * a1).abs(),
        (2.0 * a2).abs(),
        (2.0 * (a1 * a2 - eps * b1 * b2)).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

/// The six bilinear image coordinates of `(y, z)`, largest absolute value.
/// Homogeneous: scaling `y` by `λ` and `z` by `μ` scales it by `|λμ|`.
pub fn bilinear_max(y: [f64; 3], z: [f64; 3]) -> f64 {
    [
        y[0] * z[0],
        y[1] * z[1],
        y[2] * z[2],
        y[0] * z[1] + y[1] * z[0],
        y[0] * z[2] + y[2] * z[0],
        y[1] * z[2] + y[2] * z[1],
    ]
    .into_iter()
    .fold(0.0, |m, v| m.max(v.abs()))
}

/// The conjugate-pair analogue for `w ∈ ℂ³` given as `(re, im)`:
/// `max{|wj|², |wj·w̄k + wk·w̄j|}`.
pub fn hermitian_max(w: [(f64, f64); 3]) -> f64 {
    let mut m: f64 = 0.0;
    for j in 0..3 {
        m = m.max(w[j].0 * w[j].0 + w[j].1 * w[j].1);
        for k in j + 1..3 {
            m = m.max((2.0 * (w[j].0 * w[k].0 + w[j].1 * w[k].1)).abs());
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(f1_real(0.0, 0.0, 0.0, 0.0), 1.0);
        assert_eq!(f1_real(2.0, 0.0, 3.0, 0.0), 6.0);
        assert_eq!(f1_real(1.0, 1.0, 1.0, 1.0), 2.0);
        assert_eq!(feps_real(0.0, 0.0, 0.0, 0.0, -1.0), 1.0);
        assert_eq!(feps_real(0.0, 1.0, 0.0, 1.0, -1.0), 2.0);
        assert_eq!(feps_real(2.0, 0.0, 0.0, 0.0, -1.0), 4.0);
    }

    proptest! {
        #[test]
        fn at_least_one(v in prop::array::uniform4(-50.0f64..50.0), e in -20.0f64..20.0) {
            prop_assert!(f1_real(v[0], v[1], v[2], v[3]) >= 1.0);
            prop_assert!(feps_real(v[0], v[1], v[2], v[3], e) >= 1.0);
        }

        #[test]
        fn bilinear_is_homogeneous(
            y in prop::array::uniform3(-10.0f64..10.0),
            z in prop::array::uniform3(-10.0f64..10.0),
            l in -5.0f64..5.0,
            m in -5.0f64..5.0,
        ) {
            let lhs = bilinear_max(y.map(|v| l * v), z.map(|v| m * v));
            let rhs = (l * m).abs() * bilinear_max(y, z);
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + rhs));
        }

        #[test]
        fn f1_is_clamped_chart_of_bilinear(v in prop::array::uniform4(-50.0f64..50.0)) {
            let h = bilinear_max([1.0, v[0], v[1]], [1.0, v[2], v[3]]);
            prop_assert_eq!(f1_real(v[0], v[1], v[2], v[3]), h.max(1.0));
        }

        #[test]
        fn feps_minus_one_matches_hermitian(v in prop::array::uniform4(-50.0f64..50.0)) {
            let h = hermitian_max([(1.0, 0.0), (v[0], v[1]), (v[2], v[3])]);
            let f = feps_real(v[0], v[1], v[2], v[3], -1.0);
            prop_assert!((f - h.max(1.0)).abs() <= 1e-9 * f);
        }
    }
}
