//! Alice–Rob field states in a truncated Fock basis.
//!
//! The bosonic state is
//! `ρ_AR = (1-t²)/2 (|0⟩⟨0|⊗M₀₀ + |1⟩⟨1|⊗M₁₁ + |0⟩⟨1|⊗M₀₁ + |1⟩⟨0|⊗M₁₀)`
//! with `t = tanh r`. Rob's space is cut at Fock index `N + 1` (dimension
//! `N + 2`) so that every `|n⟩⟨n+1|` term with `n ≤ N` fits, and all four
//! blocks share one dimension.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_domain, Error, Result};
use crate::linalg::{BipartiteDims, Complex64, ComplexMatrix, DensityOperator};

/// Slack allowed on the fermionic upper bound `r ≤ π/4`.
const FERMION_R_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    Boson,
    Fermion,
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Statistics::Boson => "boson",
            Statistics::Fermion => "fermion",
        })
    }
}

impl FromStr for Statistics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "boson" | "bosonic" => Ok(Statistics::Boson),
            "fermion" | "fermionic" => Ok(Statistics::Fermion),
            other => Err(Error::Config(format!("unknown statistics {other:?}"))),
        }
    }
}

/// Acceleration-derived squeezing parameter `r`.
///
/// Bosons: `t = tanh r ∈ [0, 1)`. Fermions: `r ∈ [0, π/4]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqueezingParam {
    statistics: Statistics,
    r: f64,
}

impl SqueezingParam {
    pub fn boson(r: f64) -> Result<Self> {
        check_domain("r", r, "[0, ∞)", r >= 0.0)?;
        Ok(Self {
            statistics: Statistics::Boson,
            r,
        })
    }

    /// Bosonic parameter from `t = tanh r`.
    pub fn from_tanh(t: f64) -> Result<Self> {
        check_t(t)?;
        Self::boson(t.atanh())
    }

    pub fn fermion(r: f64) -> Result<Self> {
        check_fermion_r(r)?;
        Ok(Self {
            statistics: Statistics::Fermion,
            r: r.min(FRAC_PI_4),
        })
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn tanh(&self) -> f64 {
        self.r.tanh()
    }

    pub fn cos_r(&self) -> f64 {
        self.r.cos()
    }

    pub fn sin_r(&self) -> f64 {
        self.r.sin()
    }
}

/// Rob's proper acceleration and the Rindler frequency of his mode.
///
/// Only the combination `π c ω / a` enters; `c` defaults to 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AccelerationSpec {
    pub acceleration: f64,
    pub omega: f64,
    pub c: f64,
}

impl AccelerationSpec {
    pub fn new(acceleration: f64, omega: f64) -> Result<Self> {
        let spec = Self {
            acceleration,
            omega,
            c: 1.0,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        check_domain("acceleration", self.acceleration, "(0, ∞)", self.acceleration > 0.0)?;
        check_domain("omega", self.omega, "(0, ∞)", self.omega > 0.0)?;
        check_domain("c", self.c, "(0, ∞)", self.c > 0.0)
    }

    /// `e^{-π c ω / a}`.
    pub fn boltzmann_factor(&self) -> f64 {
        (-PI * self.c * self.omega / self.acceleration).exp()
    }
}

/// `tanh r = e^{-πcω/a}` for bosons, `r = atan(e^{-πcω/a})` for fermions.
pub fn accel_to_squeezing(spec: &AccelerationSpec, statistics: Statistics) -> Result<SqueezingParam> {
    spec.validate()?;
    let x = spec.boltzmann_factor();
    match statistics {
        Statistics::Boson => SqueezingParam::from_tanh(x),
        Statistics::Fermion => SqueezingParam::fermion(x.atan()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TruncationPolicy {
    Fixed,
    /// Double the cutoff until the dropped probability is below
    /// `tail_target`; exceeding `cutoff_cap` is an error.
    Adaptive { tail_target: f64, cutoff_cap: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationSpec {
    /// Largest Fock index `N` in the sums; Rob's dimension is `N + 2`.
    pub cutoff: usize,
    pub policy: TruncationPolicy,
}

impl TruncationSpec {
    pub const DEFAULT_TAIL_TARGET: f64 = 1e-12;
    pub const DEFAULT_CAP: usize = 512;

    pub fn fixed(cutoff: usize) -> Self {
        Self {
            cutoff,
            policy: TruncationPolicy::Fixed,
        }
    }

    pub fn adaptive(start: usize, tail_target: f64, cutoff_cap: usize) -> Self {
        Self {
            cutoff: start,
            policy: TruncationPolicy::Adaptive {
                tail_target,
                cutoff_cap,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.cutoff < 1 {
            return Err(Error::Config("cutoff must be at least 1".into()));
        }
        if let TruncationPolicy::Adaptive {
            tail_target,
            cutoff_cap,
        } = self.policy
        {
            check_domain("tail_target", tail_target, "(0, 1)", tail_target > 0.0 && tail_target < 1.0)?;
            if cutoff_cap < self.cutoff {
                return Err(Error::Config(format!(
                    "cutoff cap {cutoff_cap} below starting cutoff {}",
                    self.cutoff
                )));
            }
        }
        Ok(())
    }

    /// Picks the cutoff for a state whose dropped mass at cutoff `n` is `tail(n)`.
    pub fn resolve_with(&self, tail: impl Fn(usize) -> f64) -> Result<usize> {
        self.validate()?;
        match self.policy {
            TruncationPolicy::Fixed => Ok(self.cutoff),
            TruncationPolicy::Adaptive {
                tail_target,
                cutoff_cap,
            } => {
                let mut n = self.cutoff;
                loop {
                    let mass = tail(n);
                    if mass < tail_target {
                        return Ok(n);
                    }
                    if n >= cutoff_cap {
                        return Err(Error::TruncationExhausted {
                            cap: cutoff_cap,
                            tail_mass: mass,
                        });
                    }
                    n = (2 * n).min(cutoff_cap);
                }
            }
        }
    }

    /// Cutoff for the bosonic Alice–Rob state at `t`.
    pub fn resolve_boson(&self, t: f64) -> Result<usize> {
        check_t(t)?;
        self.resolve_with(|n| tail_mass_boson(t, n))
    }
}

impl From<usize> for TruncationSpec {
    fn from(cutoff: usize) -> Self {
        Self::fixed(cutoff)
    }
}

pub(crate) fn check_t(t: f64) -> Result<()> {
    check_domain("t", t, "[0, 1)", (0.0..1.0).contains(&t))
}

pub(crate) fn check_fermion_r(r: f64) -> Result<()> {
    check_domain("r", r, "[0, π/4]", (0.0..=FRAC_PI_4 + FERMION_R_SLACK).contains(&r))
}

/// Rob's Hilbert-space dimension for cutoff `N`.
pub fn rob_dim(cutoff: usize) -> usize {
    cutoff + 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MKind {
    M00,
    M11,
    M01,
    M10,
}

/// Truncation of the Rob-side matrix `M_kind` on a space of dimension `N + 2`.
pub fn m_matrix(kind: MKind, t: f64, trunc: TruncationSpec) -> Result<ComplexMatrix> {
    let cutoff = trunc.resolve_boson(t)?;
    Ok(m_matrix_at(kind, t, cutoff))
}

fn m_matrix_at(kind: MKind, t: f64, cutoff: usize) -> ComplexMatrix {
    let d = rob_dim(cutoff);
    let x = t * t;
    let e = 1.0 - x;
    let mut m = ComplexMatrix::zeros(d, d);
    for n in 0..=cutoff {
        let w = x.powi(n as i32);
        let k = (n + 1) as f64;
        match kind {
            MKind::M00 => m[(n, n)] = re(w),
            MKind::M11 => m[(n + 1, n + 1)] = re(e * k * w),
            MKind::M01 => m[(n, n + 1)] = re(e.sqrt() * k.sqrt() * w),
            MKind::M10 => m[(n + 1, n)] = re(e.sqrt() * k.sqrt() * w),
        }
    }
    m
}

/// Closed-form infinite-sum trace `Tr(M_a M_b)`.
///
/// Only `00·00`, `11·11`, `00·11` (either order) and `01·10` (either order)
/// are non-zero; every other product of the four matrices is traceless.
pub fn m_trace_closed(a: MKind, b: MKind, t: f64) -> Result<f64> {
    check_t(t)?;
    use MKind::*;
    let t2 = t * t;
    let t4 = t2 * t2;
    let one_minus_t4 = 1.0 - t4;
    let one_plus_t2 = 1.0 + t2;
    Ok(match (a, b) {
        (M00, M00) => 1.0 / one_minus_t4,
        (M11, M11) => (1.0 + t4) / (one_plus_t2 * one_plus_t2 * one_minus_t4),
        (M00, M11) | (M11, M00) => t2 / (one_plus_t2 * one_minus_t4),
        (M01, M10) | (M10, M01) => 1.0 / (one_plus_t2 * one_minus_t4),
        _ => 0.0,
    })
}

/// Probability the cutoff-`N` truncation of the bosonic `ρ_AR` drops:
/// `½ t^{2(N+1)} (2 + (N+1)(1-t²))`.
pub fn tail_mass_boson(t: f64, cutoff: usize) -> f64 {
    let x = t * t;
    let np1 = (cutoff + 1) as f64;
    0.5 * x.powi(cutoff as i32 + 1) * (2.0 + np1 * (1.0 - x))
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn boson_blocks(t: f64, trunc: TruncationSpec, coherent: bool) -> Result<DensityOperator> {
    let cutoff = trunc.resolve_boson(t)?;
    let d = rob_dim(cutoff);
    let x = t * t;
    let e = 1.0 - x;
    let pref = 0.5 * e;
    let mut m = ComplexMatrix::zeros(2 * d, 2 * d);
    for n in 0..=cutoff {
        let w = pref * x.powi(n as i32);
        let k = (n + 1) as f64;
        m[(n, n)] = re(w);
        m[(d + n + 1, d + n + 1)] = re(w * e * k);
        if coherent {
            let off = re(w * (e * k).sqrt());
            m[(n, d + n + 1)] = off;
            m[(d + n + 1, n)] = off;
        }
    }
    let dims = BipartiteDims { dim_a: 2, dim_b: d };
    Ok(DensityOperator::from_parts(m, dims, tail_mass_boson(t, cutoff)))
}

/// The bosonic Alice–Rob state, truncated, with exact tail accounting.
pub fn boson_rho_ar(t: f64, trunc: TruncationSpec) -> Result<DensityOperator> {
    boson_blocks(t, trunc, true)
}

/// `ρ_AR` with the Alice-side coherences removed, i.e. after the
/// `{|0⟩⟨0|, |1⟩⟨1|}` measurement channel. Diagonal in the product Fock basis.
pub fn dephased_chi(t: f64, trunc: TruncationSpec) -> Result<DensityOperator> {
    boson_blocks(t, trunc, false)
}

/// The 4×4 fermionic Alice–Rob state in the basis `|00⟩, |01⟩, |10⟩, |11⟩`.
pub fn fermion_rho_ar(r: f64) -> Result<DensityOperator> {
    let p = SqueezingParam::fermion(r)?;
    let (c, s) = (p.cos_r(), p.sin_r());
    let mut m = ComplexMatrix::zeros(4, 4);
    m[(0, 0)] = re(0.5 * c * c);
    m[(1, 1)] = re(0.5 * s * s);
    m[(0, 3)] = re(0.5 * c);
    m[(3, 0)] = re(0.5 * c);
    m[(3, 3)] = re(0.5);
    Ok(DensityOperator::from_parts(m, BipartiteDims { dim_a: 2, dim_b: 2 }, 0.0))
}

/// A pure state on the Rindler wedges `I ⊗ II`, amplitudes row-major in
/// `(n_I, n_II)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoModeState {
    pub dim_i: usize,
    pub dim_ii: usize,
    amplitudes: Vec<Complex64>,
}

impl TwoModeState {
    fn zeros(dim_i: usize, dim_ii: usize) -> Self {
        Self {
            dim_i,
            dim_ii,
            amplitudes: vec![re(0.0); dim_i * dim_ii],
        }
    }

    pub fn amplitude(&self, n_i: usize, n_ii: usize) -> Complex64 {
        if n_i < self.dim_i && n_ii < self.dim_ii {
            self.amplitudes[n_i * self.dim_ii + n_ii]
        } else {
            re(0.0)
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`, treating components outside either truncation as zero.
    pub fn inner(&self, other: &Self) -> Complex64 {
        let mut acc = re(0.0);
        for i in 0..self.dim_i.min(other.dim_i) {
            for k in 0..self.dim_ii.min(other.dim_ii) {
                acc += self.amplitude(i, k).conj() * other.amplitude(i, k);
            }
        }
        acc
    }

    /// Reduced state of wedge I (wedge II traced out).
    pub fn reduced_wedge_i(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.dim_i, self.dim_i, |i, j| {
            (0..self.dim_ii)
                .map(|k| self.amplitude(i, k) * self.amplitude(j, k).conj())
                .sum()
        })
    }
}

/// Two-mode squeezed vacuum `(1/cosh r) Σ tanhⁿ r |n⟩_I |n⟩_II`, `n ≤ N`.
pub fn vacuum_two_mode(r: f64, trunc: TruncationSpec) -> Result<TwoModeState> {
    let p = SqueezingParam::boson(r)?;
    let t = p.tanh();
    let x = t * t;
    let cutoff = trunc.resolve_with(|n| x.powi(n as i32 + 1))?;
    let mut state = TwoModeState::zeros(cutoff + 1, cutoff + 1);
    let inv_cosh = 1.0 / r.cosh();
    for n in 0..=cutoff {
        state.amplitudes[n * state.dim_ii + n] = re(inv_cosh * t.powi(n as i32));
    }
    Ok(state)
}

/// One-particle Unruh mode `(1/cosh² r) Σ tanhⁿ r √(n+1) |n+1⟩_I |n⟩_II`, `n ≤ N`.
pub fn unruh_one_particle(r: f64, trunc: TruncationSpec) -> Result<TwoModeState> {
    let p = SqueezingParam::boson(r)?;
    let t = p.tanh();
    let x = t * t;
    let cutoff =
        trunc.resolve_with(|n| x.powi(n as i32 + 1) * (1.0 + (n + 1) as f64 * (1.0 - x)))?;
    let mut state = TwoModeState::zeros(cutoff + 2, cutoff + 1);
    let inv_cosh2 = 1.0 / (r.cosh() * r.cosh());
    for n in 0..=cutoff {
        state.amplitudes[(n + 1) * state.dim_ii + n] =
            re(inv_cosh2 * t.powi(n as i32) * ((n + 1) as f64).sqrt());
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eig_hermitian, hs_dist_sq, partial_trace, Subsystem};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn acceleration_limits() {
        let inertial = AccelerationSpec::new(1e-3, 1.0).unwrap();
        let b = accel_to_squeezing(&inertial, Statistics::Boson).unwrap();
        assert_eq!(b.r(), 0.0);
        assert_eq!(b.tanh(), 0.0);

        let huge = AccelerationSpec::new(1e7, 1.0).unwrap();
        let b = accel_to_squeezing(&huge, Statistics::Boson).unwrap();
        assert!(b.tanh() > 0.999_999 && b.tanh() < 1.0);
        let f = accel_to_squeezing(&huge, Statistics::Fermion).unwrap();
        assert_abs_diff_eq!(f.r(), FRAC_PI_4, epsilon = 1e-6);

        // π c ω / a = ln 2  ⇒  t = 1/2
        let half = AccelerationSpec::new(PI / 2f64.ln(), 1.0).unwrap();
        let b = accel_to_squeezing(&half, Statistics::Boson).unwrap();
        assert_abs_diff_eq!(b.tanh(), 0.5, epsilon = 1e-15);

        assert!(AccelerationSpec::new(0.0, 1.0).is_err());
        assert!(AccelerationSpec::new(1.0, -1.0).is_err());
    }

    #[test]
    fn squeezing_param_domains() {
        assert!(SqueezingParam::from_tanh(1.0).is_err());
        assert!(SqueezingParam::fermion(1.0).is_err());
        let p = SqueezingParam::from_tanh(0.3).unwrap();
        assert_abs_diff_eq!(p.tanh(), 0.3, epsilon = 1e-15);
    }

    #[test]
    fn m_matrices() {
        let m00 = m_matrix(MKind::M00, 0.0, 5.into()).unwrap();
        assert_eq!(m00, ComplexMatrix::ket_bra(7, 0, 0));

        let (t, n) = (0.7_f64, 10usize);
        let x = t * t;
        let tr = m_matrix(MKind::M00, t, n.into()).unwrap().trace().re;
        assert_abs_diff_eq!(tr, (1.0 - x.powi(n as i32 + 1)) / (1.0 - x), epsilon = 1e-14);

        let m01 = m_matrix(MKind::M01, t, n.into()).unwrap();
        let m10 = m_matrix(MKind::M10, t, n.into()).unwrap();
        assert_eq!(m10, m01.adjoint());
        assert!(m_matrix(MKind::M00, 1.0, n.into()).is_err());
    }

    #[test]
    fn closed_m_traces() {
        assert_eq!(m_trace_closed(MKind::M00, MKind::M00, 0.0).unwrap(), 1.0);
        let v = m_trace_closed(MKind::M01, MKind::M10, 0.5).unwrap();
        assert_abs_diff_eq!(v, 1.0 / (1.25 * 0.9375), epsilon = 1e-15);
        assert_abs_diff_eq!(v, 0.853_333, epsilon = 1e-6);
        assert_eq!(m_trace_closed(MKind::M00, MKind::M01, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn truncated_traces_converge_to_closed_forms() {
        let pairs = [
            (MKind::M00, MKind::M00),
            (MKind::M11, MKind::M11),
            (MKind::M00, MKind::M11),
            (MKind::M01, MKind::M10),
            (MKind::M10, MKind::M01),
        ];
        for &cutoff in &[20usize, 40, 80] {
            for k in 1..=9 {
                let t = 0.1 * k as f64;
                for &(a, b) in &pairs {
                    let ma = m_matrix(a, t, cutoff.into()).unwrap();
                    let mb = m_matrix(b, t, cutoff.into()).unwrap();
                    let truncated = ma.checked_mul(&mb).unwrap().trace().re;
                    let exact = m_trace_closed(a, b, t).unwrap();
                    let deficit = exact - truncated;
                    assert!(deficit > -1e-13, "{a:?}{b:?} t={t} N={cutoff}: {deficit}");
                    assert!(deficit < t.powi(2 * cutoff as i32) * 10.0 + 1e-13, "{a:?}{b:?} t={t} N={cutoff}: {deficit}");
                }
            }
        }
    }

    #[test]
    fn inertial_boson_state_is_bell() {
        let rho = boson_rho_ar(0.0, 3.into()).unwrap();
        let d = rob_dim(3);
        let m = rho.matrix();
        for &(i, j) in &[(0, 0), (0, d + 1), (d + 1, 0), (d + 1, d + 1)] {
            assert_abs_diff_eq!(m[(i, j)].re, 0.5);
        }
        assert_abs_diff_eq!(m.trace().re, 1.0);
        assert_eq!(rho.tail_mass(), 0.0);
    }

    #[test]
    fn boson_full_trace_is_one() {
        let t = 0.8_f64;
        let x = t * t;
        // (1-t²)/2 · (Tr M00 + Tr M11) with both infinite traces 1/(1-t²)
        let full = 0.5 * (1.0 - x) * (1.0 / (1.0 - x) + 1.0 / (1.0 - x));
        assert_abs_diff_eq!(full, 1.0, epsilon = 1e-15);
        let rho = boson_rho_ar(t, 400.into()).unwrap();
        assert_abs_diff_eq!(rho.trace(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn boson_state_is_mixture_of_orthogonal_pure_states() {
        let (t, cutoff) = (0.6_f64, 40usize);
        let x = t * t;
        let rho = boson_rho_ar(t, cutoff.into()).unwrap();
        let mut expected: Vec<f64> = (0..=cutoff)
            .map(|n| 0.5 * (1.0 - x) * x.powi(n as i32) * (1.0 + (n + 1) as f64 * (1.0 - x)))
            .collect();
        expected.resize(2 * rob_dim(cutoff), 0.0);
        expected.sort_by(f64::total_cmp);
        let ev = rho.eigenvalues().unwrap();
        for (a, b) in ev.iter().zip(&expected) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn dephased_state() {
        let chi = dephased_chi(0.0, 1.into()).unwrap();
        let d = rob_dim(1);
        let mut expected = vec![0.0; 2 * d];
        expected[0] = 0.5;
        expected[d + 1] = 0.5;
        assert_eq!(chi.matrix(), &ComplexMatrix::from_real_diagonal(&expected));

        for &t in &[0.1, 0.5, 0.9] {
            let chi = dephased_chi(t, 30.into()).unwrap();
            let m = chi.matrix();
            let off: f64 = (0..m.rows())
                .flat_map(|i| (0..m.cols()).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|ij| m[ij].norm())
                .sum();
            assert_eq!(off, 0.0);
        }

        let rho = boson_rho_ar(0.5, 60.into()).unwrap();
        let chi = dephased_chi(0.5, 60.into()).unwrap();
        assert_abs_diff_eq!(hs_dist_sq(rho.matrix(), chi.matrix()).unwrap(), 0.24, epsilon = 1e-6);
    }

    #[test]
    fn fermion_state() {
        let rho = fermion_rho_ar(0.0).unwrap();
        let bell = ComplexMatrix::from_real(
            4,
            4,
            &[0.5, 0., 0., 0.5, 0., 0., 0., 0., 0., 0., 0., 0., 0.5, 0., 0., 0.5],
        )
        .unwrap();
        assert!(rho.matrix().max_abs_diff(&bell).unwrap() < 1e-15);

        for k in 0..=8 {
            let r = FRAC_PI_4 * k as f64 / 8.0;
            let rho = fermion_rho_ar(r).unwrap();
            assert_abs_diff_eq!(rho.trace(), 1.0, epsilon = 1e-15);
            rho.check_invariants().unwrap();
            let ra = partial_trace(rho.matrix(), rho.dims(), Subsystem::B).unwrap();
            assert!(ra.max_abs_diff(&ComplexMatrix::identity(2).scaled(0.5)).unwrap() < 1e-15);
        }

        let ev = fermion_rho_ar(FRAC_PI_4).unwrap().eigenvalues().unwrap();
        for (a, b) in ev.iter().zip(&[0.0, 0.0, 0.25, 0.75]) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
        assert!(fermion_rho_ar(-0.1).is_err());
        assert!(fermion_rho_ar(0.8).is_err());
    }

    #[test]
    fn two_mode_vacuum() {
        let v = vacuum_two_mode(0.0, 4.into()).unwrap();
        assert_eq!(v.amplitude(0, 0), re(1.0));
        assert_abs_diff_eq!(v.norm_sqr(), 1.0);

        let (r, n) = (0.9_f64, 12usize);
        let t = r.tanh();
        let v = vacuum_two_mode(r, n.into()).unwrap();
        assert_abs_diff_eq!(v.norm_sqr(), 1.0 - t.powi(2 * (n as i32 + 1)), epsilon = 1e-14);

        let reduced = v.reduced_wedge_i();
        for i in 0..=n {
            for j in 0..=n {
                let expected = if i == j { (1.0 - t * t) * t.powi(2 * i as i32) } else { 0.0 };
                assert_abs_diff_eq!(reduced[(i, j)].re, expected, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn unruh_particle() {
        let u = unruh_one_particle(0.0, 4.into()).unwrap();
        assert_eq!(u.amplitude(1, 0), re(1.0));
        assert_abs_diff_eq!(u.norm_sqr(), 1.0);

        let r = 0.7_f64;
        let mut last = 0.0;
        for &n in &[2usize, 5, 10, 20] {
            let norm = unruh_one_particle(r, n.into()).unwrap().norm_sqr();
            assert!(norm > last && norm <= 1.0 + 1e-15);
            last = norm;
        }
        let norm = unruh_one_particle(r, 160.into()).unwrap().norm_sqr();
        assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);

        for &n in &[1usize, 5, 30] {
            let u = unruh_one_particle(r, n.into()).unwrap();
            let v = vacuum_two_mode(r, n.into()).unwrap();
            assert_eq!(u.inner(&v), re(0.0));
        }
    }

    #[test]
    fn tail_mass() {
        assert_eq!(tail_mass_boson(0.0, 1), 0.0);
        assert_eq!(tail_mass_boson(0.0, 17), 0.0);
        let mut prev = 1.0;
        for n in 1..200 {
            let m = tail_mass_boson(0.95, n);
            assert!(m <= prev);
            prev = m;
        }
        let rho = boson_rho_ar(0.9, 80.into()).unwrap();
        assert_abs_diff_eq!(tail_mass_boson(0.9, 80), 1.0 - rho.trace(), epsilon = 1e-12);
    }

    #[test]
    fn adaptive_truncation() {
        let spec = TruncationSpec::adaptive(4, 1e-12, 512);
        let n = spec.resolve_boson(0.5).unwrap();
        assert!(tail_mass_boson(0.5, n) < 1e-12);
        assert!(tail_mass_boson(0.5, n / 2) >= 1e-12);
        assert!(matches!(
            TruncationSpec::adaptive(4, 1e-12, 64).resolve_boson(0.99),
            Err(Error::TruncationExhausted { cap: 64, .. })
        ));
        assert!(TruncationSpec::fixed(0).validate().is_err());
    }

    #[test]
    fn states_psd_on_grid() {
        for &cutoff in &[20usize, 40, 80] {
            for k in 0..=10 {
                let t = if k == 10 { 0.99 } else { 0.1 * k as f64 };
                for rho in [boson_rho_ar(t, cutoff.into()).unwrap(), dephased_chi(t, cutoff.into()).unwrap()] {
                    assert!(rho.matrix().is_hermitian(1e-12));
                    let min = eig_hermitian(rho.matrix()).unwrap()[0];
                    assert!(min >= -1e-10, "t={t} N={cutoff}: {min}");
                    let ra = partial_trace(rho.matrix(), rho.dims(), Subsystem::B).unwrap();
                    let dev = ra.max_abs_diff(&ComplexMatrix::identity(2).scaled(0.5)).unwrap();
                    assert!(dev <= rho.tail_mass() + 1e-12, "t={t} N={cutoff}: {dev}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn trace_plus_tail_is_one(t in 0.0f64..0.995, cutoff in 1usize..120) {
            let rho = boson_rho_ar(t, cutoff.into()).unwrap();
            prop_assert!((rho.trace() + rho.tail_mass() - 1.0).abs() < 1e-12);
            let chi = dephased_chi(t, cutoff.into()).unwrap();
            prop_assert!((chi.trace() - rho.trace()).abs() < 1e-14);
        }
    }
}
