//! Dense complex matrix algebra for bipartite density operators.
//!
//! Matrices are stored row-major. Bipartite indices follow the `A ⊗ B`
//! convention: the joint basis state `|i⟩_A |k⟩_B` sits at row
//! `i * dim_b + k`.

use std::fmt;
use std::ops::{Index, IndexMut};

pub use num_complex::Complex64;

use crate::error::{Error, Result};

/// Entrywise tolerance for Hermiticity checks.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Eigenvalues in `[-PSD_FLOOR, 0)` are clipped to zero; anything lower is an error.
pub const PSD_FLOOR: f64 = 1e-10;
/// Allowed slack in `trace + tail_mass = 1`.
pub const TRACE_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(8) {
            write!(f, " ")?;
            for j in 0..self.cols.min(8) {
                let z = self[(i, j)];
                write!(f, " {:+.4}{:+.4}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row-major entries, rejecting wrong lengths and
    /// non-finite values.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite {
                row: pos / cols.max(1),
                col: pos % cols.max(1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Real matrix from row-major entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_row_major(rows, cols, data.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// The matrix unit `|i⟩⟨j|` of dimension `dim`.
    pub fn ket_bra(dim: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        m[(i, j)] = ONE;
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scaled_complex(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    fn same_shape(&self, other: &Self, what: &str) -> Result<()> {
        if self.rows == other.rows && self.cols == other.cols {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "add")?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "sub")?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "mul: {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Accumulates `factor * other` into `self`.
    pub fn axpy(&mut self, factor: Complex64, other: &Self) -> Result<()> {
        self.same_shape(other, "axpy")?;
        for (d, s) in self.data.iter_mut().zip(&other.data) {
            *d += factor * s;
        }
        Ok(())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal_real(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].re).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.same_shape(other, "compare")?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Largest entrywise deviation `|m_ij - conj(m_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// Symmetrises in place: `m ← (m + m†)/2`.
    pub fn hermitize(&mut self) {
        let n = self.rows;
        for i in 0..n {
            self[(i, i)].im = 0.0;
            for j in i + 1..n {
                let avg = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
                self[(i, j)] = avg;
                self[(j, i)] = avg.conj();
            }
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Pauli matrix `σ_k` for `k ∈ {1, 2, 3}` (x, y, z).
pub fn pauli(k: usize) -> ComplexMatrix {
    let i = Complex64::new(0.0, 1.0);
    match k {
        1 => ComplexMatrix::from_fn(2, 2, |r, c| if r != c { ONE } else { ZERO }),
        2 => ComplexMatrix::from_fn(2, 2, |r, c| match (r, c) {
            (0, 1) => -i,
            (1, 0) => i,
            _ => ZERO,
        }),
        3 => ComplexMatrix::from_real_diagonal(&[1.0, -1.0]),
        _ => panic!("Pauli index must be 1, 2 or 3"),
    }
}

/// Which tensor factor of a bipartite space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Subsystem {
    A,
    B,
}

impl Subsystem {
    pub fn other(self) -> Self {
        match self {
            Subsystem::A => Subsystem::B,
            Subsystem::B => Subsystem::A,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BipartiteDims {
    pub dim_a: usize,
    pub dim_b: usize,
}

impl BipartiteDims {
    pub fn new(dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::DimensionMismatch(format!(
                "subsystem dimensions must be positive, got {dim_a}x{dim_b}"
            )));
        }
        Ok(Self { dim_a, dim_b })
    }

    /// A single system of dimension `dim`, viewed as `dim ⊗ 1`.
    pub fn single(dim: usize) -> Self {
        Self { dim_a: dim, dim_b: 1 }
    }

    pub fn total(&self) -> usize {
        self.dim_a * self.dim_b
    }

    pub fn dim(&self, side: Subsystem) -> usize {
        match side {
            Subsystem::A => self.dim_a,
            Subsystem::B => self.dim_b,
        }
    }

    fn check(&self, m: &ComplexMatrix) -> Result<()> {
        if !m.is_square() || m.rows() != self.total() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for bipartite dims {}x{}",
                m.rows(),
                m.cols(),
                self.dim_a,
                self.dim_b
            )));
        }
        Ok(())
    }
}

/// A Hermitian positive semidefinite operator with bipartite structure.
///
/// Truncated states are stored without renormalisation; `tail_mass` records
/// the probability that the truncation dropped, so `trace + tail_mass = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    dims: BipartiteDims,
    tail_mass: f64,
}

impl DensityOperator {
    /// Validates every invariant, including positivity (one eigen-solve).
    pub fn new(matrix: ComplexMatrix, dims: BipartiteDims, tail_mass: f64) -> Result<Self> {
        let rho = Self {
            matrix,
            dims,
            tail_mass,
        };
        rho.check_invariants()?;
        Ok(rho)
    }

    /// Skips validation; for states that are valid by construction.
    pub(crate) fn from_parts(matrix: ComplexMatrix, dims: BipartiteDims, tail_mass: f64) -> Self {
        debug_assert_eq!(matrix.rows(), dims.total());
        Self {
            matrix,
            dims,
            tail_mass,
        }
    }

    pub fn check_invariants(&self) -> Result<()> {
        self.dims.check(&self.matrix)?;
        if let Some(pos) = self
            .matrix
            .as_slice()
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            let n = self.matrix.cols();
            return Err(Error::NonFinite {
                row: pos / n,
                col: pos % n,
            });
        }
        let deviation = self.matrix.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        if !(0.0..=1.0).contains(&self.tail_mass) {
            return Err(Error::OutOfDomain {
                name: "tail_mass",
                value: self.tail_mass,
                domain: "[0, 1]",
            });
        }
        let trace = self.trace();
        if (trace + self.tail_mass - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceDeficit {
                trace,
                tail_mass: self.tail_mass,
            });
        }
        let min = self.min_eigenvalue()?;
        if min < -PSD_FLOOR {
            return Err(Error::NegativeEigenvalue { value: min });
        }
        Ok(())
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        eig_hermitian(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?.first().copied().unwrap_or(0.0))
    }

    /// Rescales to unit trace and discards the tail bookkeeping.
    pub fn normalized(&self) -> Self {
        let tr = self.trace();
        Self {
            matrix: self.matrix.scaled(1.0 / tr),
            dims: self.dims,
            tail_mass: 0.0,
        }
    }

    /// Reduced state after tracing out `traced`. Tail mass carries over.
    pub fn reduced(&self, traced: Subsystem) -> Result<Self> {
        let m = partial_trace(&self.matrix, self.dims, traced)?;
        let dim = self.dims.dim(traced.other());
        Ok(Self::from_parts(m, BipartiteDims::single(dim), self.tail_mass))
    }
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

/// Traces out the `traced` factor of a bipartite matrix.
pub fn partial_trace(m: &ComplexMatrix, dims: BipartiteDims, traced: Subsystem) -> Result<ComplexMatrix> {
    dims.check(m)?;
    let (da, db) = (dims.dim_a, dims.dim_b);
    Ok(match traced {
        Subsystem::B => ComplexMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|k| m[(i * db + k, j * db + k)]).sum()
        }),
        Subsystem::A => ComplexMatrix::from_fn(db, db, |k, l| {
            (0..da).map(|i| m[(i * db + k, i * db + l)]).sum()
        }),
    })
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Index sets of the blocks of `h` once permuted to block-diagonal form.
fn coupled_components(h: &ComplexMatrix) -> Vec<Vec<usize>> {
    let n = h.rows();
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in i + 1..n {
            if h[(i, j)] != ZERO || h[(j, i)] != ZERO {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        let r = find(&mut parent, i);
        groups[r].push(i);
    }
    groups.retain(|g| !g.is_empty());
    groups
}

fn dense_eigenvalues(h: &ComplexMatrix, idx: &[usize]) -> Result<Vec<f64>> {
    match idx.len() {
        1 => Ok(vec![h[(idx[0], idx[0])].re]),
        2 => {
            let a = h[(idx[0], idx[0])].re;
            let d = h[(idx[1], idx[1])].re;
            let b = h[(idx[0], idx[1])];
            let mean = 0.5 * (a + d);
            let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            Ok(vec![mean - radius, mean + radius])
        }
        k => {
            let sub = faer::Mat::<Complex64>::from_fn(k, k, |i, j| h[(idx[i], idx[j])]);
            sub.self_adjoint_eigenvalues(faer::Side::Lower)
                .map_err(|_| Error::Eigensolver)
        }
    }
}

/// Real spectrum of a Hermitian matrix in ascending order.
///
/// The matrix is first split into its decoupled blocks (connected
/// components of the non-zero pattern); each block is diagonalised on its
/// own. Truncated field states are direct sums of tiny blocks, so this keeps
/// large cutoffs cheap.
pub fn eig_hermitian(h: &ComplexMatrix) -> Result<Vec<f64>> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigenvalues of a {}x{} matrix",
            h.rows(),
            h.cols()
        )));
    }
    let deviation = h.hermitian_deviation();
    if deviation > HERMITIAN_TOL * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian { deviation });
    }
    let mut spectrum = Vec::with_capacity(h.rows());
    for block in coupled_components(h) {
        spectrum.extend(dense_eigenvalues(h, &block)?);
    }
    spectrum.sort_by(f64::total_cmp);
    Ok(spectrum)
}

/// Shannon entropy in bits of a spectrum, with PSD clipping.
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &lambda in eigenvalues {
        if lambda < -PSD_FLOOR {
            return Err(Error::NegativeEigenvalue { value: lambda });
        }
        if lambda > 0.0 {
            s -= lambda * lambda.log2();
        }
    }
    Ok(s)
}

/// Von Neumann entropy `-Tr ρ log₂ ρ` in bits.
pub fn entropy_vn(rho: &DensityOperator) -> Result<f64> {
    entropy_of_spectrum(&rho.eigenvalues()?)
}

/// Squared Hilbert–Schmidt distance `Tr((a - b)²)`.
pub fn hs_dist_sq(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    a.same_shape(b, "hs_dist_sq")?;
    if !a.is_square() {
        return Err(Error::DimensionMismatch("hs_dist_sq needs square matrices".into()));
    }
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let dij = a[(i, j)] - b[(i, j)];
            let dji = a[(j, i)] - b[(j, i)];
            acc += (dij * dji).re;
        }
    }
    Ok(acc.max(0.0))
}

/// Trace norm (sum of singular values).
///
/// Hermitian inputs use `Σ|λ|` over the eigenvalues, which lets the block
/// splitting in [`eig_hermitian`] apply; anything else goes through an SVD.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "trace norm of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    if a.hermitian_deviation() <= HERMITIAN_TOL * a.max_abs().max(1.0) {
        return Ok(eig_hermitian(a)?.iter().map(|x| x.abs()).sum());
    }
    let n = a.rows();
    let m = faer::Mat::<Complex64>::from_fn(n, n, |i, j| a[(i, j)]);
    let sv = m.singular_values().map_err(|_| Error::Eigensolver)?;
    Ok(sv.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bell() -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(4, 4);
        for &(i, j) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
            m[(i, j)] = c(0.5);
        }
        m
    }

    #[test]
    fn kron_identities_and_blocks() {
        assert_eq!(kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2)), ComplexMatrix::identity(4));

        let m = ComplexMatrix::from_fn(3, 3, |i, j| Complex64::new(i as f64, j as f64));
        let k = kron(&ComplexMatrix::ket_bra(2, 0, 0), &m);
        for i in 0..6 {
            for j in 0..6 {
                let expected = if i < 3 && j < 3 { m[(i, j)] } else { ZERO };
                assert_eq!(k[(i, j)], expected);
            }
        }

        let xx = kron(&pauli(1), &pauli(1));
        assert_eq!(xx[(0, 3)], ONE);
        assert_eq!(xx[(0, 0)], ZERO);
    }

    #[test]
    fn partial_trace_of_bell_state_is_maximally_mixed() {
        let dims = BipartiteDims::new(2, 2).unwrap();
        let ra = partial_trace(&bell(), dims, Subsystem::B).unwrap();
        assert_abs_diff_eq!(ra.max_abs_diff(&ComplexMatrix::identity(2).scaled(0.5)).unwrap(), 0.0);
    }

    #[test]
    fn partial_trace_of_product() {
        let rho = ComplexMatrix::from_real(2, 2, &[0.7, 0.1, 0.1, 0.3]).unwrap();
        let sigma = ComplexMatrix::from_real_diagonal(&[0.2, 0.5, 0.3]);
        let rho2 = rho.scaled(2.0);
        let prod = kron(&rho2, &sigma);
        let dims = BipartiteDims::new(2, 3).unwrap();
        let rb = partial_trace(&prod, dims, Subsystem::A).unwrap();
        assert!(rb.max_abs_diff(&sigma.scaled(2.0)).unwrap() < 1e-15);
        let ra = partial_trace(&prod, dims, Subsystem::B).unwrap();
        assert!((ra.trace() - prod.trace()).norm() < 1e-15);
    }

    #[test]
    fn partial_trace_rejects_wrong_dims() {
        let dims = BipartiteDims::new(2, 3).unwrap();
        assert!(matches!(
            partial_trace(&ComplexMatrix::identity(4), dims, Subsystem::A),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn spectra() {
        assert_eq!(eig_hermitian(&ComplexMatrix::identity(2)).unwrap(), vec![1.0, 1.0]);
        let sx = eig_hermitian(&pauli(1)).unwrap();
        assert_abs_diff_eq!(sx[0], -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sx[1], 1.0, epsilon = 1e-15);
        assert_eq!(eig_hermitian(&ComplexMatrix::from_real_diagonal(&[0.75, 0.25])).unwrap(), vec![0.25, 0.75]);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eig_dense_block_matches_trace() {
        // a coupled 5x5 block goes through the dense solver
        let m = ComplexMatrix::from_fn(5, 5, |i, j| {
            if i == j {
                c(i as f64)
            } else if i < j {
                Complex64::new(0.1 * (i + j) as f64, 0.05)
            } else {
                Complex64::new(0.1 * (i + j) as f64, -0.05)
            }
        });
        let ev = eig_hermitian(&m).unwrap();
        assert_abs_diff_eq!(ev.iter().sum::<f64>(), 10.0, epsilon = 1e-12);
        assert!(ev.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn entropies() {
        let pure = DensityOperator::new(ComplexMatrix::ket_bra(2, 0, 0), BipartiteDims::single(2), 0.0).unwrap();
        assert_abs_diff_eq!(entropy_vn(&pure).unwrap(), 0.0);
        let mixed = DensityOperator::new(ComplexMatrix::identity(2).scaled(0.5), BipartiteDims::single(2), 0.0).unwrap();
        assert_abs_diff_eq!(entropy_vn(&mixed).unwrap(), 1.0, epsilon = 1e-15);
        let four = DensityOperator::new(
            ComplexMatrix::identity(4).scaled(0.25),
            BipartiteDims::new(2, 2).unwrap(),
            0.0,
        )
        .unwrap();
        assert_abs_diff_eq!(entropy_vn(&four).unwrap(), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn entropy_clips_only_tiny_negativity() {
        assert_abs_diff_eq!(entropy_of_spectrum(&[-5e-11, 0.5, 0.5]).unwrap(), 1.0);
        assert!(matches!(
            entropy_of_spectrum(&[-1e-8, 1.0]),
            Err(Error::NegativeEigenvalue { .. })
        ));
    }

    #[test]
    fn density_operator_validation() {
        let dims = BipartiteDims::single(2);
        let bad_trace = ComplexMatrix::identity(2);
        assert!(matches!(
            DensityOperator::new(bad_trace, dims, 0.0),
            Err(Error::TraceDeficit { .. })
        ));
        let not_psd = ComplexMatrix::from_real_diagonal(&[1.5, -0.5]);
        assert!(matches!(
            DensityOperator::new(not_psd, dims, 0.0),
            Err(Error::NegativeEigenvalue { .. })
        ));
        let truncated = ComplexMatrix::from_real_diagonal(&[0.5, 0.25]);
        assert!(DensityOperator::new(truncated, dims, 0.25).is_ok());
    }

    #[test]
    fn hs_distances() {
        let m = bell();
        assert_eq!(hs_dist_sq(&m, &m).unwrap(), 0.0);
        let p0 = ComplexMatrix::ket_bra(2, 0, 0);
        let p1 = ComplexMatrix::ket_bra(2, 1, 1);
        assert_abs_diff_eq!(hs_dist_sq(&p0, &p1).unwrap(), 2.0);
        assert!(hs_dist_sq(&p0, &ComplexMatrix::identity(3)).is_err());
    }

    #[test]
    fn trace_norms() {
        assert_abs_diff_eq!(trace_norm(&ComplexMatrix::identity(2)).unwrap(), 2.0);
        assert_abs_diff_eq!(trace_norm(&pauli(1).scaled(0.5)).unwrap(), 1.0, epsilon = 1e-15);
        // non-Hermitian: |0⟩⟨1| has a single singular value 1
        assert_abs_diff_eq!(trace_norm(&ComplexMatrix::ket_bra(3, 0, 1)).unwrap(), 1.0, epsilon = 1e-12);
    }
}
