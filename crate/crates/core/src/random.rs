//! Seeded random matrices and states for property checks and benchmarks.

use std::f64::consts::PI;

use rand::Rng;

use crate::linalg::{BipartiteDims, Complex64, ComplexMatrix, DensityOperator};
use crate::measurement::BlochVector;

fn gaussian(rng: &mut impl Rng) -> f64 {
    // Box–Muller; one sample per call is plenty here.
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

/// Complex Ginibre matrix with standard normal real and imaginary parts.
pub fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| Complex64::new(gaussian(rng), gaussian(rng)))
}

pub fn hermitian(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let g = ginibre(n, n, rng);
    let mut h = g.checked_add(&g.adjoint()).expect("square").scaled(0.5);
    h.hermitize();
    h
}

/// Random full-rank density operator `G G† / Tr(G G†)`.
pub fn density(dims: BipartiteDims, rng: &mut impl Rng) -> DensityOperator {
    let n = dims.total();
    let g = ginibre(n, n, rng);
    let mut m = g.checked_mul(&g.adjoint()).expect("square");
    let tr = m.trace().re;
    m = m.scaled(1.0 / tr);
    m.hermitize();
    DensityOperator::new(m, dims, 0.0).expect("Ginibre states are valid")
}

/// Uniformly distributed point on the Bloch sphere.
pub fn bloch_vector(rng: &mut impl Rng) -> BlochVector {
    let z: f64 = rng.gen_range(-1.0..=1.0);
    let phi: f64 = rng.gen_range(0.0..2.0 * PI);
    BlochVector::from_angles(z.acos(), phi)
}
