//! Analytic expressions used as oracles for the numeric routes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{check_domain, Error, Result};
use crate::states::check_fermion_r;

fn check_closed_t(t: f64) -> Result<()> {
    check_domain("t", t, "[0, 1]", (0.0..=1.0).contains(&t))
}

fn check_open_t(t: f64) -> Result<()> {
    check_domain("t", t, "[0, 1)", (0.0..1.0).contains(&t))
}

/// Bosonic geometric discord with Alice measuring:
/// `(1-t²)(2+t²) / (4(1+t²)³)`.
pub fn dg_boson_closed(t: f64) -> Result<f64> {
    dg_boson_objective_closed(t, 0.0)
}

/// Hilbert–Schmidt objective for the Bloch measurement with third
/// component `x3`: `(1-t²)(2 + t² + x3² t²) / (4(1+t²)³)`.
/// It does not depend on `x1`, `x2`.
pub fn dg_boson_objective_closed(t: f64, x3: f64) -> Result<f64> {
    check_closed_t(t)?;
    check_domain("x3", x3, "[-1, 1]", (-1.0..=1.0).contains(&x3))?;
    let t2 = t * t;
    let p = 1.0 + t2;
    Ok((1.0 - t2) * (2.0 + t2 + x3 * x3 * t2) / (4.0 * p * p * p))
}

/// Upper bound from the `{|0⟩⟨0|, |1⟩⟨1|}` measurement: `(1-t²) / (2(1+t²)²)`.
pub fn dg_boson_ub_closed(t: f64) -> Result<f64> {
    check_closed_t(t)?;
    let t2 = t * t;
    Ok((1.0 - t2) / (2.0 * (1.0 + t2) * (1.0 + t2)))
}

/// Which party measures, for the fermionic closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FermionSide {
    A,
    R,
}

/// Fermionic geometric discord.
///
/// Alice measuring: `(cos²r + cos⁴r)/4`.
/// Rob measuring: `(1 + cos²r (2cos²r - 1))/4`.
pub fn dg_fermion_closed(r: f64, side: FermionSide) -> Result<f64> {
    check_fermion_r(r)?;
    let c2 = r.cos().powi(2);
    Ok(match side {
        FermionSide::A => 0.25 * (c2 + c2 * c2),
        FermionSide::R => 0.25 * (1.0 + c2 * (2.0 * c2 - 1.0)),
    })
}

/// Alice-side fermionic objective before minimising over `x3`:
/// `((cos²r + cos⁴r) + x3²(cos²r - cos⁴r))/4`.
pub fn dg_fermion_objective_closed(r: f64, x3: f64) -> Result<f64> {
    check_fermion_r(r)?;
    check_domain("x3", x3, "[-1, 1]", (-1.0..=1.0).contains(&x3))?;
    let c2 = r.cos().powi(2);
    let c4 = c2 * c2;
    Ok(0.25 * ((c2 + c4) + x3 * x3 * (c2 - c4)))
}

/// Partial sum of the polylogarithm series with an a-posteriori error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolylogSum {
    pub value: f64,
    pub terms: usize,
    /// Bound on the magnitude of the neglected tail.
    pub tail_bound: f64,
    /// False when the term cap was hit before the tolerance was met.
    pub accurate: bool,
}

pub const POLYLOG_TOL: f64 = 1e-15;
pub const POLYLOG_MAX_TERMS: usize = 10_000_000;

/// `Li_s(x) = Σ_{n≥1} xⁿ / nˢ` for `|x| < 1`.
pub fn polylog(s: f64, x: f64) -> Result<PolylogSum> {
    polylog_with(s, x, POLYLOG_TOL, POLYLOG_MAX_TERMS)
}

/// Series evaluation stopping once the tail bound drops below
/// `tol · |partial sum|` or after `max_terms` terms.
///
/// For `0 < x < 1` the tail after term `n` is bounded by
/// `termₙ q/(1-q)` with `q = max(termₙ₊₁/termₙ, x)`, since the term ratio
/// moves monotonically towards `x`. For `x < 0` the series alternates and
/// the next term bounds the tail once magnitudes decrease.
pub fn polylog_with(s: f64, x: f64, tol: f64, max_terms: usize) -> Result<PolylogSum> {
    check_domain("s", s, "finite", true)?;
    check_domain("x", x, "(-1, 1)", x > -1.0 && x < 1.0)?;
    if x == 0.0 {
        return Ok(PolylogSum {
            value: 0.0,
            terms: 0,
            tail_bound: 0.0,
            accurate: true,
        });
    }
    let ln_ax = x.abs().ln();
    let term = |n: usize| {
        let nf = n as f64;
        let mag = (nf * ln_ax - s * nf.ln()).exp();
        if x < 0.0 && n % 2 == 1 {
            -mag
        } else {
            mag
        }
    };
    let mut sum = 0.0;
    let mut tail_bound = f64::INFINITY;
    let mut n = 0;
    while n < max_terms {
        n += 1;
        let current = term(n);
        sum += current;
        let next = term(n + 1);
        let q = (next / current).abs();
        if q >= 1.0 {
            continue;
        }
        tail_bound = if x > 0.0 {
            let q = q.max(x);
            current.abs() * q / (1.0 - q)
        } else {
            next.abs()
        };
        if tail_bound <= tol * sum.abs() {
            return Ok(PolylogSum {
                value: sum,
                terms: n,
                tail_bound,
                accurate: true,
            });
        }
    }
    Ok(PolylogSum {
        value: sum,
        terms: n,
        tail_bound,
        accurate: false,
    })
}

/// Leading behaviour `Γ(1-s)(1-x)^{s-1}` of `Li_s(x)` as `x → 1⁻`, for `s < 1`.
pub fn polylog_asymptote(s: f64, x: f64) -> Result<f64> {
    check_domain("s", s, "(-∞, 1)", s < 1.0)?;
    check_domain("x", x, "(0, 1)", x > 0.0 && x < 1.0)?;
    Ok(gamma(1.0 - s) * (1.0 - x).powf(s - 1.0))
}

/// The two candidate prefactors of the trace-norm distance to `χ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceNormVariant {
    /// `(1-t)^{3/2}`, as printed alongside the `≈ 0.31` limit.
    PaperPrefactor,
    /// `(1-t²)^{3/2}`, what the singular values of `ρ - χ` give.
    SquaredPrefactor,
}

impl TraceNormVariant {
    pub const ALL: [TraceNormVariant; 2] = [TraceNormVariant::PaperPrefactor, TraceNormVariant::SquaredPrefactor];

    pub fn prefactor(self, t: f64) -> f64 {
        match self {
            TraceNormVariant::PaperPrefactor => (1.0 - t).powf(1.5),
            TraceNormVariant::SquaredPrefactor => (1.0 - t * t).powf(1.5),
        }
    }

    /// `t → 1` limit via the polylogarithm asymptote.
    pub fn limit(self) -> f64 {
        let g = gamma(1.5);
        match self {
            TraceNormVariant::PaperPrefactor => g / 2f64.powf(1.5),
            TraceNormVariant::SquaredPrefactor => g,
        }
    }
}

impl fmt::Display for TraceNormVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceNormVariant::PaperPrefactor => "paper_prefactor",
            TraceNormVariant::SquaredPrefactor => "squared_prefactor",
        })
    }
}

impl FromStr for TraceNormVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper_prefactor" | "paper" => Ok(TraceNormVariant::PaperPrefactor),
            "squared_prefactor" | "squared" => Ok(TraceNormVariant::SquaredPrefactor),
            other => Err(Error::Config(format!("unknown trace-norm variant {other:?}"))),
        }
    }
}

/// `prefactor · t⁻² · Li_{-1/2}(t²) = prefactor · Σ_{n≥0} t^{2n} √(n+1)`.
///
/// At `t = 0` the sum is 1, which is returned directly.
pub fn trace_norm_ub_closed(t: f64, variant: TraceNormVariant) -> Result<f64> {
    check_open_t(t)?;
    if t == 0.0 {
        return Ok(variant.prefactor(0.0));
    }
    let li = polylog(-0.5, t * t)?;
    if !li.accurate {
        return Err(Error::OutOfDomain {
            name: "t",
            value: t,
            domain: "range where the polylogarithm series converges within the term cap",
        });
    }
    Ok(variant.prefactor(t) * li.value / (t * t))
}

/// `⟨X_A X_R⟩` on `ρ_AR`: `(1-t²)^{3/2} cosh⁴r / 2 = 1 / (2√(1-t²))`.
pub fn correlator_closed(t: f64) -> Result<f64> {
    check_open_t(t)?;
    let e = 1.0 - t * t;
    let cosh4 = 1.0 / (e * e);
    Ok(e.powf(1.5) * cosh4 / 2.0)
}

/// `Tr(X_R M₀₁) = √((1-t²)/2) · cosh⁴r`.
pub fn trace_identity_xr(t: f64) -> Result<f64> {
    check_open_t(t)?;
    let e = 1.0 - t * t;
    Ok((e / 2.0).sqrt() / (e * e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, LN_2, PI};

    #[test]
    fn boson_closed_values() {
        assert_abs_diff_eq!(dg_boson_closed(0.0).unwrap(), 0.5);
        assert_eq!(dg_boson_closed(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(dg_boson_closed(0.5).unwrap(), 0.75 * 2.25 / (4.0 * 1.953125), epsilon = 1e-15);
        assert_abs_diff_eq!(dg_boson_closed(0.5).unwrap(), 0.216, epsilon = 1e-15);
        assert!(dg_boson_closed(1.2).is_err());

        assert_abs_diff_eq!(dg_boson_ub_closed(0.0).unwrap(), 0.5);
        assert_eq!(dg_boson_ub_closed(1.0).unwrap(), 0.0);
        assert_abs_diff_eq!(dg_boson_ub_closed(0.5).unwrap(), 0.24, epsilon = 1e-15);
    }

    #[test]
    fn boson_objective() {
        for k in 0..=10 {
            let t = 0.1 * k as f64;
            assert_eq!(dg_boson_objective_closed(t, 0.0).unwrap(), dg_boson_closed(t).unwrap());
            assert_abs_diff_eq!(
                dg_boson_objective_closed(t, 1.0).unwrap(),
                dg_boson_ub_closed(t).unwrap(),
                epsilon = 1e-15
            );
            assert!(dg_boson_closed(t).unwrap() <= dg_boson_ub_closed(t).unwrap());
            let mut prev = -1.0;
            for j in 0..=20 {
                let v = dg_boson_objective_closed(t, j as f64 / 20.0).unwrap();
                assert!(v >= prev);
                prev = v;
            }
        }
        assert_abs_diff_eq!(dg_boson_objective_closed(0.5, 1.0).unwrap(), 0.24, epsilon = 1e-15);
        for &x3 in &[-1.0, -0.3, 0.0, 0.7] {
            assert_abs_diff_eq!(dg_boson_objective_closed(0.0, x3).unwrap(), 0.5);
        }
        assert!(dg_boson_objective_closed(0.5, 1.5).is_err());
    }

    #[test]
    fn fermion_closed_values() {
        for side in [FermionSide::A, FermionSide::R] {
            assert_abs_diff_eq!(dg_fermion_closed(0.0, side).unwrap(), 0.5, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(dg_fermion_closed(FRAC_PI_4, FermionSide::A).unwrap(), 3.0 / 16.0, epsilon = 1e-15);
        assert_abs_diff_eq!(dg_fermion_closed(FRAC_PI_4, FermionSide::R).unwrap(), 0.25, epsilon = 1e-15);
        assert!(dg_fermion_closed(1.0, FermionSide::A).is_err());

        let mut prev = (f64::INFINITY, f64::INFINITY);
        for k in 0..=100 {
            let r = FRAC_PI_4 * k as f64 / 100.0;
            let a = dg_fermion_closed(r, FermionSide::A).unwrap();
            let b = dg_fermion_closed(r, FermionSide::R).unwrap();
            assert!(b >= a - 1e-15);
            assert!(a <= prev.0 && b <= prev.1 + 1e-15);
            prev = (a, b);
            assert_abs_diff_eq!(dg_fermion_objective_closed(r, 0.0).unwrap(), a, epsilon = 1e-15);
        }
        let _ = FRAC_PI_8;
    }

    #[test]
    fn polylog_known_values() {
        let z = polylog(-0.5, 0.0).unwrap();
        assert_eq!(z.value, 0.0);
        let li1 = polylog(1.0, 0.5).unwrap();
        assert!(li1.accurate);
        assert_abs_diff_eq!(li1.value, LN_2, epsilon = 1e-14);
        // Li_2(1/2) = π²/12 - ln²2/2
        let li2 = polylog(2.0, 0.5).unwrap();
        assert_abs_diff_eq!(li2.value, PI * PI / 12.0 - LN_2 * LN_2 / 2.0, epsilon = 1e-14);
        // Li_1(-1/2) = -ln(3/2)
        assert_abs_diff_eq!(polylog(1.0, -0.5).unwrap().value, -(1.5f64).ln(), epsilon = 1e-14);
        assert!(polylog(-0.5, 1.0).is_err());
    }

    #[test]
    fn polylog_matches_direct_sum_identity() {
        let t = 0.7_f64;
        let x = t * t;
        let direct: f64 = (0..100_000).map(|n| x.powi(n) * ((n + 1) as f64).sqrt()).sum();
        let li = polylog(-0.5, x).unwrap();
        assert_abs_diff_eq!(li.value / x, direct, epsilon = 1e-12);
    }

    #[test]
    fn polylog_sandwich() {
        for &x in &[0.3, 0.81, 0.98, 0.9995] {
            let full = polylog(-0.5, x).unwrap();
            assert!(full.accurate);
            // stop early: the bound must still bracket the converged value
            for &cap in &[10usize, 100, 1000] {
                let partial = polylog_with(-0.5, x, 0.0, cap).unwrap();
                assert!(partial.value <= full.value + 1e-12 * full.value);
                if partial.tail_bound.is_finite() {
                    assert!(full.value <= partial.value + partial.tail_bound * (1.0 + 1e-12) + 1e-12 * full.value);
                }
            }
        }
    }

    #[test]
    fn polylog_asymptote_tracks_series() {
        let x = 0.9999;
        let series = polylog(-0.5, x).unwrap().value;
        let asym = polylog_asymptote(-0.5, x).unwrap();
        assert!((series / asym - 1.0).abs() < 0.01);
    }

    #[test]
    fn trace_norm_variants_match_direct_sums() {
        for &t in &[0.1_f64, 0.5, 0.9] {
            let x = t * t;
            let direct: f64 = (0..20_000).map(|n| x.powi(n) * ((n + 1) as f64).sqrt()).sum();
            for v in TraceNormVariant::ALL {
                let closed = trace_norm_ub_closed(t, v).unwrap();
                assert_abs_diff_eq!(closed, v.prefactor(t) * direct, epsilon = 1e-10);
            }
        }
        assert_eq!(trace_norm_ub_closed(0.0, TraceNormVariant::PaperPrefactor).unwrap(), 1.0);
    }

    #[test]
    fn trace_norm_limits() {
        let paper = trace_norm_ub_closed(0.9999, TraceNormVariant::PaperPrefactor).unwrap();
        assert!((paper - 0.31).abs() < 0.01, "{paper}");
        assert_abs_diff_eq!(TraceNormVariant::SquaredPrefactor.limit(), PI.sqrt() / 2.0, epsilon = 1e-12);
        let squared = trace_norm_ub_closed(0.9999, TraceNormVariant::SquaredPrefactor).unwrap();
        assert!((squared - PI.sqrt() / 2.0).abs() < 0.01, "{squared}");
    }

    #[test]
    fn correlator_and_trace_identity() {
        assert_abs_diff_eq!(correlator_closed(0.0).unwrap(), 0.5);
        assert_abs_diff_eq!(correlator_closed(0.9).unwrap(), 1.0 / (2.0 * 0.19f64.sqrt()), epsilon = 1e-14);
        assert_abs_diff_eq!(correlator_closed(0.9).unwrap(), 1.147, epsilon = 1e-3);
        assert!(correlator_closed(0.99).unwrap() > correlator_closed(0.9).unwrap());
        assert!(correlator_closed(1.0).is_err());

        assert_abs_diff_eq!(trace_identity_xr(0.0).unwrap(), 1.0 / 2f64.sqrt(), epsilon = 1e-15);
        let e = 1.0 - 0.99f64 * 0.99;
        assert_abs_diff_eq!(trace_identity_xr(0.99).unwrap() * e.powf(1.5), (0.5f64).sqrt(), epsilon = 1e-12);
        assert!(trace_identity_xr(1.0).is_err());
    }
}
