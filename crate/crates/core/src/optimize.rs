//! Minimisation of an objective over projective qubit measurements.
//!
//! `Π(-x)` is `Π(x)` with the outcomes swapped, so only the hemisphere
//! `θ ∈ [0, π/2]` is searched. The coarse grid starts at the equator and
//! ends at the pole; ties keep the earliest grid point.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measurement::BlochVector;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub theta_samples: usize,
    pub phi_samples: usize,
    /// Alternating θ/φ line-search rounds after the grid.
    pub refine_iterations: usize,
    /// A candidate replaces the incumbent only if it is lower by more than this.
    pub tolerance: f64,
    /// Extra refinements from seeded random starting points.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            theta_samples: 16,
            phi_samples: 32,
            refine_iterations: 8,
            tolerance: 1e-12,
            restarts: 0,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub const MIN_SAMPLES: usize = 8;

    pub fn with_grid(mut self, theta_samples: usize, phi_samples: usize) -> Self {
        self.theta_samples = theta_samples;
        self.phi_samples = phi_samples;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.theta_samples < Self::MIN_SAMPLES || self.phi_samples < Self::MIN_SAMPLES {
            return Err(Error::Config(format!(
                "coarse grid must be at least {m}x{m}, got {}x{}",
                self.theta_samples,
                self.phi_samples,
                m = Self::MIN_SAMPLES
            )));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::Config(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        Ok(())
    }

    /// Grid angles in evaluation order. The pole appears once.
    pub fn grid(&self) -> Vec<(f64, f64)> {
        let nt = self.theta_samples;
        let np = self.phi_samples;
        let mut points = Vec::with_capacity((nt - 1) * np + 1);
        for i in 0..nt - 1 {
            let theta = FRAC_PI_2 * (1.0 - i as f64 / (nt - 1) as f64);
            for j in 0..np {
                points.push((theta, 2.0 * PI * j as f64 / np as f64));
            }
        }
        points.push((0.0, 0.0));
        points
    }

    fn steps(&self) -> (f64, f64) {
        (FRAC_PI_2 / (self.theta_samples - 1) as f64, 2.0 * PI / self.phi_samples as f64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveSample {
    pub theta: f64,
    pub phi: f64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochMinimum {
    pub x: BlochVector,
    pub theta: f64,
    pub phi: f64,
    pub value: f64,
    /// False when the last refinement round still improved the value.
    pub converged: bool,
    pub evaluations: usize,
    pub samples: Option<Vec<ObjectiveSample>>,
}

/// Grid search followed by alternating Brent line searches in θ and φ.
pub fn minimize_over_bloch<F>(objective: F, cfg: &OptimizerConfig, keep_samples: bool) -> Result<BlochMinimum>
where
    F: Fn(&BlochVector) -> Result<f64> + Sync,
{
    cfg.validate()?;
    let eval = |theta: f64, phi: f64| -> Result<f64> {
        let v = objective(&BlochVector::from_angles(theta, phi))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { row: 0, col: 0 })
        }
    };

    let grid = cfg.grid();
    let values: Vec<f64> = grid.par_iter().map(|&(th, ph)| eval(th, ph)).collect::<Result<_>>()?;
    let mut evaluations = grid.len();

    let mut best = 0;
    for (k, &v) in values.iter().enumerate() {
        if v < values[best] - cfg.tolerance {
            best = k;
        }
    }
    let (theta, phi) = grid[best];
    let mut incumbent = Point {
        theta,
        phi,
        value: values[best],
    };

    let (converged, n) = refine(&eval, cfg, &mut incumbent)?;
    evaluations += n;
    let mut all_converged = converged;

    if cfg.restarts > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for _ in 0..cfg.restarts {
            let z: f64 = rng.gen_range(0.0..=1.0);
            let phi: f64 = rng.gen_range(0.0..2.0 * PI);
            let theta = z.acos();
            let mut start = Point {
                theta,
                phi,
                value: eval(theta, phi)?,
            };
            evaluations += 1;
            let (converged, n) = refine(&eval, cfg, &mut start)?;
            evaluations += n;
            if start.value < incumbent.value - cfg.tolerance {
                incumbent = start;
                all_converged = converged;
            }
        }
    }

    let samples = keep_samples.then(|| {
        grid.iter()
            .zip(&values)
            .map(|(&(theta, phi), &value)| ObjectiveSample { theta, phi, value })
            .collect()
    });
    Ok(BlochMinimum {
        x: BlochVector::from_angles(incumbent.theta, incumbent.phi),
        theta: incumbent.theta,
        phi: incumbent.phi,
        value: incumbent.value,
        converged: all_converged,
        evaluations,
        samples,
    })
}

#[derive(Clone, Copy, Debug)]
struct Point {
    theta: f64,
    phi: f64,
    value: f64,
}

fn refine(eval: &impl Fn(f64, f64) -> Result<f64>, cfg: &OptimizerConfig, p: &mut Point) -> Result<(bool, usize)> {
    let (dt, dp) = cfg.steps();
    let mut evaluations = 0;
    for _ in 0..cfg.refine_iterations {
        let mut improved = false;

        let phi = p.phi;
        let line = brent(|th| eval(th, phi), p.theta - dt, p.theta, p.theta + dt, p.value)?;
        evaluations += line.evaluations;
        if line.fx < p.value - cfg.tolerance {
            p.theta = line.x;
            p.value = line.fx;
            improved = true;
        }

        let theta = p.theta;
        let line = brent(|ph| eval(theta, ph), p.phi - dp, p.phi, p.phi + dp, p.value)?;
        evaluations += line.evaluations;
        if line.fx < p.value - cfg.tolerance {
            p.phi = line.x;
            p.value = line.fx;
            improved = true;
        }

        if !improved {
            return Ok((true, evaluations));
        }
    }
    Ok((false, evaluations))
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct LineMinimum {
    pub x: f64,
    pub fx: f64,
    pub evaluations: usize,
}

const BRENT_MAX_ITER: usize = 100;
const BRENT_REL_TOL: f64 = 1e-9;
const BRENT_ABS_TOL: f64 = 1e-12;

/// Brent's parabolic/golden-section minimiser on `[a, c]` started from `b`
/// with known value `fb`.
pub(crate) fn brent(mut f: impl FnMut(f64) -> Result<f64>, a: f64, b: f64, c: f64, fb: f64) -> Result<LineMinimum> {
    const CGOLD: f64 = 0.381_966_011_250_105_1;
    let (mut lo, mut hi) = if a < c { (a, c) } else { (c, a) };
    let (mut x, mut w, mut v) = (b, b, b);
    let (mut fx, mut fw, mut fv) = (fb, fb, fb);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    let mut evaluations = 0;

    for _ in 0..BRENT_MAX_ITER {
        let xm = 0.5 * (lo + hi);
        let tol1 = BRENT_REL_TOL * x.abs() + BRENT_ABS_TOL;
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (hi - lo) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let etemp = e;
            if !(p.abs() >= (0.5 * q * etemp).abs() || p <= q * (lo - x) || p >= q * (hi - x)) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - lo < tol2 || hi - u < tol2 {
                    d = tol1.copysign(xm - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { lo - x } else { hi - x };
            d = CGOLD * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = f(u)?;
        evaluations += 1;
        if fu <= fx {
            if u >= x {
                lo = x;
            } else {
                hi = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                lo = u;
            } else {
                hi = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    Ok(LineMinimum { x, fx, evaluations })
}
