//! Entropic and geometric discord, trace distance to the dephased state, and
//! the position–position correlator.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{entropy_vn, hs_dist_sq, trace_norm, DensityOperator, Subsystem};
use crate::measurement::{apply_measurement, bloch_projector_pair, conditional_decomposition, fock_projectors, BlochVector, ProjectorSet};
use crate::optimize::{minimize_over_bloch, ObjectiveSample, OptimizerConfig};
use crate::states::{boson_rho_ar, check_t, dephased_chi, TruncationSpec};

/// Which party is measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscordSide {
    /// Alice's qubit, minimised over Bloch measurements.
    A,
    /// Rob's mode when it is a qubit, minimised over Bloch measurements.
    BBloch,
    /// Rob's mode measured in the Fock basis: an upper bound, not the discord.
    BFockBound,
}

impl DiscordSide {
    pub fn measured(self) -> Subsystem {
        match self {
            DiscordSide::A => Subsystem::A,
            DiscordSide::BBloch | DiscordSide::BFockBound => Subsystem::B,
        }
    }

    pub fn is_upper_bound(self) -> bool {
        self == DiscordSide::BFockBound
    }
}

impl fmt::Display for DiscordSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiscordSide::A => "a",
            DiscordSide::BBloch => "b-bloch",
            DiscordSide::BFockBound => "b-fock-bound",
        })
    }
}

impl FromStr for DiscordSide {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(DiscordSide::A),
            "b-bloch" => Ok(DiscordSide::BBloch),
            "b-fock-bound" | "b-fock" => Ok(DiscordSide::BFockBound),
            other => Err(Error::Config(format!("unknown side {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Argmin {
    Bloch(BlochVector),
    FockBasis,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscordResult {
    pub value: f64,
    pub argmin: Argmin,
    pub upper_bound: bool,
    /// False when local refinement ran out of rounds while still improving.
    pub converged: bool,
    pub evaluations: usize,
    pub objective_samples: Option<Vec<ObjectiveSample>>,
}

impl DiscordResult {
    pub fn bloch(&self) -> Option<&BlochVector> {
        match &self.argmin {
            Argmin::Bloch(x) => Some(x),
            Argmin::FockBasis => None,
        }
    }

    fn fixed(value: f64) -> Self {
        DiscordResult {
            value,
            argmin: Argmin::FockBasis,
            upper_bound: true,
            converged: true,
            evaluations: 1,
            objective_samples: None,
        }
    }
}

fn check_side(rho: &DensityOperator, side: DiscordSide) -> Result<()> {
    let dims = rho.dims();
    let need_qubit = match side {
        DiscordSide::A => Some(dims.dim_a),
        DiscordSide::BBloch => Some(dims.dim_b),
        DiscordSide::BFockBound => None,
    };
    match need_qubit {
        Some(2) | None => Ok(()),
        Some(d) => Err(Error::DimensionMismatch(format!("side {side} needs a qubit, measured party has dimension {d}"))),
    }
}

fn bloch_on(x: &BlochVector, side: DiscordSide) -> ProjectorSet {
    bloch_projector_pair(x, side.measured())
}

/// `Σ_a p_a S(ρ_{other|a})` in bits, for a normalised `rho`.
pub fn conditional_entropy(rho: &DensityOperator, p: &ProjectorSet) -> Result<f64> {
    let ens = conditional_decomposition(rho, p)?;
    ens.entries.iter().map(|e| Ok(e.probability * entropy_vn(&e.state)?)).sum()
}

/// `S(ρ_measured) - S(ρ_AB)`, the measurement-independent part of D₁.
fn discord_offset(rho: &DensityOperator, measured: Subsystem) -> Result<f64> {
    let reduced = rho.reduced(measured.other())?;
    Ok(entropy_vn(&reduced)? - entropy_vn(rho)?)
}

/// D₁ evaluated for one Bloch measurement on the given side. The state is
/// renormalised first.
pub fn d1_objective(rho: &DensityOperator, x: &BlochVector, side: DiscordSide) -> Result<f64> {
    if side == DiscordSide::BFockBound {
        return Err(Error::Config("Fock-basis bound has no Bloch parameter".into()));
    }
    check_side(rho, side)?;
    let rho = rho.normalized();
    Ok(discord_offset(&rho, side.measured())? + conditional_entropy(&rho, &bloch_on(x, side))?)
}

/// Entropic discord `S(ρ_m) + min Σ p S(ρ_{other|a}) - S(ρ_AB)` in bits,
/// with `m` the measured party. Truncated states are renormalised.
pub fn quantum_discord(rho: &DensityOperator, side: DiscordSide, cfg: &OptimizerConfig) -> Result<DiscordResult> {
    check_side(rho, side)?;
    let rho = rho.normalized();
    let offset = discord_offset(&rho, side.measured())?;
    if side == DiscordSide::BFockBound {
        let p = fock_projectors(rho.dims().dim_b)?;
        return Ok(DiscordResult::fixed(offset + conditional_entropy(&rho, &p)?));
    }
    let m = minimize_over_bloch(|x| conditional_entropy(&rho, &bloch_on(x, side)), cfg, false)?;
    Ok(DiscordResult {
        value: offset + m.value,
        argmin: Argmin::Bloch(m.x),
        upper_bound: false,
        converged: m.converged,
        evaluations: m.evaluations,
        objective_samples: None,
    })
}

fn hs_objective(rho: &DensityOperator, p: &ProjectorSet) -> Result<f64> {
    let post = apply_measurement(rho, p)?;
    hs_dist_sq(rho.matrix(), post.matrix())
}

/// `Tr((ρ - ρ')²)` for the Bloch measurement `x` on Alice.
pub fn objective_hs(rho: &DensityOperator, x: &BlochVector) -> Result<f64> {
    objective_hs_on(rho, x, DiscordSide::A)
}

pub fn objective_hs_on(rho: &DensityOperator, x: &BlochVector, side: DiscordSide) -> Result<f64> {
    if side == DiscordSide::BFockBound {
        return Err(Error::Config("Fock-basis bound has no Bloch parameter".into()));
    }
    check_side(rho, side)?;
    hs_objective(rho, &bloch_on(x, side))
}

/// Hilbert–Schmidt geometric discord. Truncated states enter as given, so
/// the value is a partial sum of the untruncated one.
pub fn geometric_discord(rho: &DensityOperator, side: DiscordSide, cfg: &OptimizerConfig) -> Result<DiscordResult> {
    check_side(rho, side)?;
    if side == DiscordSide::BFockBound {
        let p = fock_projectors(rho.dims().dim_b)?;
        return Ok(DiscordResult::fixed(hs_objective(rho, &p)?));
    }
    let m = minimize_over_bloch(|x| hs_objective(rho, &bloch_on(x, side)), cfg, true)?;
    Ok(DiscordResult {
        value: m.value,
        argmin: Argmin::Bloch(m.x),
        upper_bound: false,
        converged: m.converged,
        evaluations: m.evaluations,
        objective_samples: m.samples,
    })
}

/// Full two-parameter minimisation with Rob's qubit measured.
pub fn geometric_discord_fermion_b(rho: &DensityOperator, cfg: &OptimizerConfig) -> Result<DiscordResult> {
    let dims = rho.dims();
    if dims.dim_a != 2 || dims.dim_b != 2 {
        return Err(Error::DimensionMismatch(format!("expected a 2x2 fermionic state, got {}x{}", dims.dim_a, dims.dim_b)));
    }
    geometric_discord(rho, DiscordSide::BBloch, cfg)
}

/// `‖ρ_AR - χ‖₁` at the given truncation.
pub fn trace_norm_to_chi(t: f64, trunc: TruncationSpec) -> Result<f64> {
    check_t(t)?;
    if t >= 1.0 {
        return Err(Error::OutOfDomain {
            name: "t",
            value: t,
            domain: "[0, 1)",
        });
    }
    let rho = boson_rho_ar(t, trunc)?;
    let chi = dephased_chi(t, trunc)?;
    trace_norm(&rho.matrix().checked_sub(chi.matrix())?)
}

/// Tolerance on the imaginary part of `Tr(ρ X_A⊗X_R)`.
pub const CORRELATOR_IMAG_TOL: f64 = 1e-10;

/// `Tr(ρ · X_A ⊗ X_R)` with `X = (a + a†)/√2` truncated to each party's
/// dimension (`X_A = σ_x/√2` on the qubit).
pub fn correlator_xx(rho: &DensityOperator) -> Result<f64> {
    let dims = rho.dims();
    if dims.dim_a != 2 {
        return Err(Error::DimensionMismatch(format!("correlator needs Alice's qubit, got dim_a = {}", dims.dim_a)));
    }
    let db = dims.dim_b;
    let m = rho.matrix();
    let xa = std::f64::consts::FRAC_1_SQRT_2;
    // Σ ρ[(i,k),(j,l)] X_A[j,i] X_R[l,k]; X_A only links i ≠ j, X_R only |k-l| = 1.
    let mut acc = num_complex::Complex64::new(0.0, 0.0);
    for (i, j) in [(0, 1), (1, 0)] {
        for k in 0..db {
            for l in [k.wrapping_sub(1), k + 1] {
                if l >= db {
                    continue;
                }
                let xr = (k.max(l) as f64 / 2.0).sqrt();
                acc += m[(i * db + k, j * db + l)] * (xa * xr);
            }
        }
    }
    if acc.im.abs() > CORRELATOR_IMAG_TOL {
        return Err(Error::NotHermitian { deviation: acc.im.abs() });
    }
    Ok(acc.re)
}
