//! Projective measurements on one side of a bipartite state.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{BipartiteDims, Complex64, ComplexMatrix, DensityOperator, Subsystem};

/// Outcomes with probability below this are dropped from ensembles.
pub const ZERO_PROBABILITY: f64 = 1e-14;

/// Unit vector `x` labelling the qubit measurement `Π± = ½(I ± x·σ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    x: [f64; 3],
}

impl BlochVector {
    /// Norm slack accepted (and renormalised away) by [`BlochVector::new`].
    pub const UNIT_TOL: f64 = 1e-12;

    pub fn new(x1: f64, x2: f64, x3: f64) -> Result<Self> {
        let norm = (x1 * x1 + x2 * x2 + x3 * x3).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > Self::UNIT_TOL {
            return Err(Error::NonUnitBloch { norm });
        }
        Ok(Self {
            x: [x1 / norm, x2 / norm, x3 / norm],
        })
    }

    /// Polar angle `theta` from the `x3` axis, azimuth `phi`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let s = theta.sin();
        Self {
            x: [s * phi.cos(), s * phi.sin(), theta.cos()],
        }
    }

    pub fn z() -> Self {
        Self { x: [0.0, 0.0, 1.0] }
    }

    pub fn components(&self) -> [f64; 3] {
        self.x
    }

    pub fn x1(&self) -> f64 {
        self.x[0]
    }

    pub fn x2(&self) -> f64 {
        self.x[1]
    }

    pub fn x3(&self) -> f64 {
        self.x[2]
    }
}

#[derive(Clone, Debug, PartialEq)]
enum ProjectorKind {
    Dense(Vec<ComplexMatrix>),
    /// `{|n⟩⟨n|}` for `n < dim`, kept implicit so large Fock spaces stay cheap.
    Basis { dim: usize },
}

/// A complete set of orthogonal projectors acting on one side.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectorSet {
    side: Subsystem,
    kind: ProjectorKind,
}

impl ProjectorSet {
    pub const TOL: f64 = 1e-12;

    /// Validates idempotence, pairwise orthogonality and completeness.
    pub fn dense(side: Subsystem, projectors: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = projectors
            .first()
            .map(|p| p.rows())
            .ok_or_else(|| Error::Config("empty projector set".into()))?;
        let mut total = ComplexMatrix::zeros(dim, dim);
        for (a, p) in projectors.iter().enumerate() {
            if !p.is_square() || p.rows() != dim {
                return Err(Error::DimensionMismatch(format!("projector {a} has the wrong shape")));
            }
            let dev = p.hermitian_deviation();
            if dev > Self::TOL {
                return Err(Error::NotHermitian { deviation: dev });
            }
            let sq = p.checked_mul(p)?;
            if sq.max_abs_diff(p)? > Self::TOL {
                return Err(Error::Config(format!("projector {a} is not idempotent")));
            }
            for (b, q) in projectors.iter().enumerate().skip(a + 1) {
                if p.checked_mul(q)?.max_abs() > Self::TOL {
                    return Err(Error::Config(format!("projectors {a} and {b} overlap")));
                }
            }
            total.axpy(Complex64::new(1.0, 0.0), p)?;
        }
        if total.max_abs_diff(&ComplexMatrix::identity(dim))? > Self::TOL {
            return Err(Error::Config("projectors do not sum to the identity".into()));
        }
        Ok(Self {
            side,
            kind: ProjectorKind::Dense(projectors),
        })
    }

    pub fn side(&self) -> Subsystem {
        self.side
    }

    /// The same projectors acting on the other tensor factor.
    pub fn on(mut self, side: Subsystem) -> Self {
        self.side = side;
        self
    }

    pub fn len(&self) -> usize {
        match &self.kind {
            ProjectorKind::Dense(ps) => ps.len(),
            ProjectorKind::Basis { dim } => *dim,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Dimension of the space the projectors act on.
    pub fn dim(&self) -> usize {
        match &self.kind {
            ProjectorKind::Dense(ps) => ps[0].rows(),
            ProjectorKind::Basis { dim } => *dim,
        }
    }

    pub fn is_basis(&self) -> bool {
        matches!(self.kind, ProjectorKind::Basis { .. })
    }

    pub fn projector(&self, a: usize) -> ComplexMatrix {
        match &self.kind {
            ProjectorKind::Dense(ps) => ps[a].clone(),
            ProjectorKind::Basis { dim } => ComplexMatrix::ket_bra(*dim, a, a),
        }
    }

    pub fn projectors(&self) -> Vec<ComplexMatrix> {
        (0..self.len()).map(|a| self.projector(a)).collect()
    }

    fn check_dims(&self, dims: BipartiteDims) -> Result<()> {
        if dims.dim(self.side) != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}-dimensional projectors on side {:?} of a {}x{} state",
                self.dim(),
                self.side,
                dims.dim_a,
                dims.dim_b
            )));
        }
        Ok(())
    }
}

/// `{Π₊, Π₋}` with `Π± = ½(I ± x·σ)`, acting on Alice.
pub fn bloch_projectors(x: &BlochVector) -> ProjectorSet {
    bloch_projector_pair(x, Subsystem::A)
}

pub(crate) fn bloch_projector_pair(x: &BlochVector, side: Subsystem) -> ProjectorSet {
    let [x1, x2, x3] = x.components();
    let make = |sign: f64| {
        let mut p = ComplexMatrix::zeros(2, 2);
        p[(0, 0)] = Complex64::new(0.5 * (1.0 + sign * x3), 0.0);
        p[(1, 1)] = Complex64::new(0.5 * (1.0 - sign * x3), 0.0);
        p[(0, 1)] = Complex64::new(0.5 * sign * x1, -0.5 * sign * x2);
        p[(1, 0)] = Complex64::new(0.5 * sign * x1, 0.5 * sign * x2);
        p
    };
    ProjectorSet {
        side,
        kind: ProjectorKind::Dense(vec![make(1.0), make(-1.0)]),
    }
}

/// `{|n⟩⟨n|}` for `n < dim`, acting on Rob.
pub fn fock_projectors(dim: usize) -> Result<ProjectorSet> {
    if dim == 0 {
        return Err(Error::Config("Fock projectors need dim >= 1".into()));
    }
    Ok(ProjectorSet {
        side: Subsystem::B,
        kind: ProjectorKind::Basis { dim },
    })
}

#[inline]
fn at(dims: BipartiteDims, i: usize, k: usize) -> usize {
    i * dims.dim_b + k
}

/// Post-measurement state `Σ_a (Π_a ⊗ I) ρ (Π_a ⊗ I)` (or `I ⊗ Π_a` on Rob).
pub fn apply_measurement(rho: &DensityOperator, p: &ProjectorSet) -> Result<DensityOperator> {
    let dims = rho.dims();
    p.check_dims(dims)?;
    let m = rho.matrix();
    let (da, db) = (dims.dim_a, dims.dim_b);
    let mut out = ComplexMatrix::zeros(dims.total(), dims.total());
    match (&p.kind, p.side) {
        (ProjectorKind::Basis { .. }, Subsystem::A) => {
            for i in 0..da {
                for k in 0..db {
                    for l in 0..db {
                        out[(at(dims, i, k), at(dims, i, l))] = m[(at(dims, i, k), at(dims, i, l))];
                    }
                }
            }
        }
        (ProjectorKind::Basis { .. }, Subsystem::B) => {
            for i in 0..da {
                for j in 0..da {
                    for k in 0..db {
                        out[(at(dims, i, k), at(dims, j, k))] = m[(at(dims, i, k), at(dims, j, k))];
                    }
                }
            }
        }
        (ProjectorKind::Dense(ps), Subsystem::A) => {
            // out_(i,j) block = Σ_{i',j'} C[i,j,i',j'] ρ_(i',j') block
            for i in 0..da {
                for j in 0..da {
                    for ip in 0..da {
                        for jp in 0..da {
                            let c: Complex64 = ps.iter().map(|pa| pa[(i, ip)] * pa[(jp, j)]).sum();
                            if c == Complex64::new(0.0, 0.0) {
                                continue;
                            }
                            for k in 0..db {
                                let src = at(dims, ip, k);
                                let dst = at(dims, i, k);
                                for l in 0..db {
                                    out[(dst, at(dims, j, l))] += c * m[(src, at(dims, jp, l))];
                                }
                            }
                        }
                    }
                }
            }
        }
        (ProjectorKind::Dense(ps), Subsystem::B) => {
            for i in 0..da {
                for j in 0..da {
                    let block = ComplexMatrix::from_fn(db, db, |k, l| m[(at(dims, i, k), at(dims, j, l))]);
                    let mut acc = ComplexMatrix::zeros(db, db);
                    for pa in ps {
                        let s = pa.checked_mul(&block)?.checked_mul(pa)?;
                        acc.axpy(Complex64::new(1.0, 0.0), &s)?;
                    }
                    for k in 0..db {
                        for l in 0..db {
                            out[(at(dims, i, k), at(dims, j, l))] = acc[(k, l)];
                        }
                    }
                }
            }
        }
    }
    out.hermitize();
    Ok(DensityOperator::from_parts(out, dims, rho.tail_mass()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalEntry {
    pub outcome: usize,
    pub probability: f64,
    /// Normalised state of the unmeasured side given this outcome.
    pub state: DensityOperator,
}

/// Outcome probabilities and conditional states of a measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionalEnsemble {
    pub entries: Vec<ConditionalEntry>,
    /// Outcomes whose probability fell below [`ZERO_PROBABILITY`].
    pub dropped: Vec<usize>,
}

impl ConditionalEnsemble {
    pub fn total_probability(&self) -> f64 {
        self.entries.iter().map(|e| e.probability).sum()
    }
}

/// Unnormalised `Tr_measured((Π_a ⊗ I) ρ (Π_a ⊗ I))` on the other side.
fn conditional_block(m: &ComplexMatrix, dims: BipartiteDims, p: &ProjectorSet, a: usize) -> ComplexMatrix {
    let (da, db) = (dims.dim_a, dims.dim_b);
    match (&p.kind, p.side) {
        (ProjectorKind::Basis { .. }, Subsystem::A) => {
            ComplexMatrix::from_fn(db, db, |k, l| m[(at(dims, a, k), at(dims, a, l))])
        }
        (ProjectorKind::Basis { .. }, Subsystem::B) => {
            ComplexMatrix::from_fn(da, da, |i, j| m[(at(dims, i, a), at(dims, j, a))])
        }
        (ProjectorKind::Dense(ps), Subsystem::A) => {
            let pa = &ps[a];
            ComplexMatrix::from_fn(db, db, |k, l| {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..da {
                    for ip in 0..da {
                        let c = pa[(ip, i)];
                        if c != Complex64::new(0.0, 0.0) {
                            acc += c * m[(at(dims, i, k), at(dims, ip, l))];
                        }
                    }
                }
                acc
            })
        }
        (ProjectorKind::Dense(ps), Subsystem::B) => {
            let pa = &ps[a];
            ComplexMatrix::from_fn(da, da, |i, j| {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..db {
                    for kp in 0..db {
                        let c = pa[(kp, k)];
                        if c != Complex64::new(0.0, 0.0) {
                            acc += c * m[(at(dims, i, k), at(dims, j, kp))];
                        }
                    }
                }
                acc
            })
        }
    }
}

/// Splits `ρ` into `(p_a, ρ_{other|a})` for each outcome of `p`.
pub fn conditional_decomposition(rho: &DensityOperator, p: &ProjectorSet) -> Result<ConditionalEnsemble> {
    let dims = rho.dims();
    p.check_dims(dims)?;
    let other_dim = dims.dim(p.side.other());
    let mut entries = Vec::new();
    let mut dropped = Vec::new();
    for a in 0..p.len() {
        let mut block = conditional_block(rho.matrix(), dims, p, a);
        let prob = block.trace().re;
        if prob < ZERO_PROBABILITY {
            dropped.push(a);
            continue;
        }
        block = block.scaled(1.0 / prob);
        block.hermitize();
        entries.push(ConditionalEntry {
            outcome: a,
            probability: prob,
            state: DensityOperator::from_parts(block, BipartiteDims::single(other_dim), 0.0),
        });
    }
    if entries.is_empty() {
        return Err(Error::AllOutcomesVanish);
    }
    Ok(ConditionalEnsemble { entries, dropped })
}
