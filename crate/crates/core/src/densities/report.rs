//! Assembly of the leading constants from exact and sampled densities.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_traits::ToPrimitive;

use super::montecarlo::Estimate;
use super::padic::{euler_factor, omega_p_closed, omega_p_series, omega_p_total, PadicClassSet};
use crate::error::bail;
use crate::exactmath::{rat, Rat};
use crate::Result;

/// Exact densities at one prime.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimeDensities {
    pub p: u64,
    /// `(ε, ω_p^(ε))` over the class representatives.
    pub parts: Vec<(i64, Rat)>,
    pub total: Rat,
}

impl PrimeDensities {
    /// Computes every class density twice, by closed form and by summing
    /// over valuation patterns, and checks both against the total.
    pub fn compute(p: u64) -> Result<Self> {
        let classes = PadicClassSet::new(p)?;
        let mut parts = Vec::with_capacity(classes.reps().len());
        let mut sum = Rat::from_integer(0.into());
        for &eps in classes.reps() {
            let closed = omega_p_closed(p, eps)?;
            let series = omega_p_series(p, eps)?;
            if closed != series {
                bail!(Inconsistent, "p={p}, eps={eps}: closed form {closed} but series {series}");
            }
            sum += &closed;
            parts.push((eps, closed));
        }
        let total = omega_p_total(p)?;
        if sum != total {
            bail!(Inconsistent, "p={p}: class sum {sum} differs from {total}");
        }
        let q = rat(1, 1) - rat(1, p as i64).pow(3);
        if euler_factor(p)? != &q * &q {
            bail!(Inconsistent, "p={p}: Euler factor is not (1-1/p^3)^2");
        }
        Ok(PrimeDensities { p, parts, total })
    }
}

/// The sampled archimedean inputs; all are needed for assembly.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ArchimedeanInputs {
    pub vol_s1_plus: Option<Estimate>,
    pub vol_s1_minus: Option<Estimate>,
    pub c18: Option<Estimate>,
    pub omega_inf_plus1: Option<Estimate>,
    pub omega_inf_minus1: Option<Estimate>,
}

/// A derived constant with linearly propagated error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Derived {
    pub value: f64,
    pub stderr: f64,
}

impl Derived {
    fn from_estimate(e: &Estimate, k: f64) -> Self {
        Derived { value: k * e.value, stderr: k.abs() * e.stderr }
    }
}

/// Comparison of the Peyre constant with `c₊ + c₋`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaCheck {
    pub theta: f64,
    pub sum: f64,
    pub difference: f64,
    /// Combined standard error of the difference.
    pub sigma: f64,
    /// Whether the difference is within three sigma.
    pub consistent: bool,
}

/// Everything the density stage produces.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityReport {
    pub primes: Vec<PrimeDensities>,
    pub zeta3: f64,
    pub vol_s1_plus: Estimate,
    pub vol_s1_minus: Estimate,
    pub c18: Estimate,
    pub omega_inf_plus1: Estimate,
    pub omega_inf_minus1: Estimate,
    pub c0: Derived,
    pub cplus: Derived,
    pub cminus: Derived,
    pub tau: Derived,
    pub theta: Derived,
}

impl DensityReport {
    pub fn theta_check(&self) -> ThetaCheck {
        let sum = self.cplus.value + self.cminus.value;
        let difference = self.theta.value - sum;
        // θ and c± come from independent samples
        let sigma = libm::sqrt(
            self.theta.stderr * self.theta.stderr
                + self.cplus.stderr * self.cplus.stderr
                + self.cminus.stderr * self.cminus.stderr,
        );
        ThetaCheck {
            theta: self.theta.value,
            sum,
            difference,
            sigma,
            consistent: difference.abs() <= 3.0 * sigma,
        }
    }

    /// Whether every leading constant is strictly positive.
    pub fn constants_positive(&self) -> bool {
        [self.c0, self.cplus, self.cminus, self.tau, self.theta].iter().all(|c| c.value > 0.0)
    }
}

/// Builds the report. `zeta3` is `ζ(3)`; exact densities are recomputed
/// and cross-checked for each listed prime.
pub fn assemble_constants(primes: &[u64], zeta3: f64, inputs: &ArchimedeanInputs) -> Result<DensityReport> {
    let need = |e: Option<Estimate>, name: &str| match e {
        Some(e) => Ok(e),
        None => Err(crate::Error::Usage(alloc::format!("missing input {name}"))),
    };
    let vol_s1_plus = need(inputs.vol_s1_plus, "vol_S1_plus")?;
    let vol_s1_minus = need(inputs.vol_s1_minus, "vol_S1_minus")?;
    let c18 = need(inputs.c18, "c18")?;
    let omega_inf_plus1 = need(inputs.omega_inf_plus1, "omega_inf_plus1")?;
    let omega_inf_minus1 = need(inputs.omega_inf_minus1, "omega_inf_minus1")?;
    if zeta3.is_nan() || zeta3 <= 1.0 {
        bail!(Usage, "zeta(3) must exceed 1, got {zeta3}");
    }
    let primes = primes.iter().map(|&p| PrimeDensities::compute(p)).collect::<Result<Vec<_>>>()?;

    let z2 = zeta3 * zeta3;
    let c0 = Derived::from_estimate(&c18, 1.0 / (24.0 * z2));
    let cplus = Derived::from_estimate(&vol_s1_plus, 0.75 / (9.0 * z2));
    let cminus = Derived::from_estimate(&vol_s1_minus, 6.0 / PI / (9.0 * z2));
    let tau = Derived {
        value: (omega_inf_plus1.value + omega_inf_minus1.value) / z2,
        stderr: (omega_inf_plus1.stderr + omega_inf_minus1.stderr) / z2,
    };
    let theta = Derived { value: tau.value / 9.0, stderr: tau.stderr / 9.0 };
    Ok(DensityReport {
        primes,
        zeta3,
        vol_s1_plus,
        vol_s1_minus,
        c18,
        omega_inf_plus1,
        omega_inf_minus1,
        c0,
        cplus,
        cminus,
        tau,
        theta,
    })
}

/// `ω_p` as a float, for display.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn est(value: f64, stderr: f64) -> Estimate {
        Estimate { value, stderr, n_samples: 10_000, seed: 0 }
    }

    fn inputs() -> ArchimedeanInputs {
        let vp = est(82.7, 0.02);
        let vm = est(18.53, 0.008);
        ArchimedeanInputs {
            vol_s1_plus: Some(vp),
            vol_s1_minus: Some(vm),
            c18: Some(est(165.4, 0.05)),
            omega_inf_plus1: Some(vp.scale(0.75)),
            omega_inf_minus1: Some(vm.scale(6.0 / PI)),
        }
    }

    #[test]
    fn identity_inputs_give_exact_theta() {
        let r = assemble_constants(&[2, 3, 5], 1.202_056_903_159_594_2, &inputs()).unwrap();
        let c = r.theta_check();
        assert!(c.difference.abs() <= 1e-12 * c.sum, "{c:?}");
        assert!(c.consistent);
        assert!(r.constants_positive());
        assert_eq!(r.primes.len(), 3);
        assert_eq!(r.primes[0].total, rat(49, 16));
    }

    #[test]
    fn missing_input_is_usage_error() {
        let mut i = inputs();
        i.c18 = None;
        assert!(matches!(
            assemble_constants(&[2], 1.2, &i),
            Err(crate::Error::Usage(_))
        ));
    }

    #[test]
    fn prime_parts() {
        let d = PrimeDensities::compute(3).unwrap();
        assert_eq!(d.parts.len(), 4);
        assert!(PrimeDensities::compute(4).is_err());
    }
}
