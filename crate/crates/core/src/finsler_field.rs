//! Fields of asymmetric norms over an open chart domain.
//!
//! Three families are implemented: the quasi-hyperbolic plane
//! F(x, y) = F_base(y) / x² on the upper half-plane, fields constant in x,
//! and Riemannian fields F(x, y) = √(yᵀ g(x) y) whose metrics carry closed
//! form first partials. All evaluation is single-chart: domains are open
//! boxes with a small safety margin so nothing is evaluated on a boundary.

use nalgebra::DMatrix;

use crate::asym_norm::AsymNorm;
use crate::error::Error;
use crate::vector::{euclidean, Covector, Vector};
use crate::{tol, Result};

/// Open box domain of a chart, with optional infinite sides.
#[derive(Clone, Debug, PartialEq)]
pub struct ChartDomain {
    bounds: Vec<(f64, f64)>,
    margin: f64,
}

impl ChartDomain {
    pub fn new_box(bounds: Vec<(f64, f64)>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::InvalidField("domain needs at least one axis".into()));
        }
        for &(lo, hi) in &bounds {
            if !(lo < hi) {
                return Err(Error::InvalidField(format!(
                    "empty interval ({lo}, {hi}) in domain box"
                )));
            }
        }
        Ok(Self {
            bounds,
            margin: tol::DOMAIN_MARGIN,
        })
    }

    /// The quasi-hyperbolic chart: x¹ free, x² > 0.
    pub fn upper_half_plane() -> Self {
        Self {
            bounds: vec![(f64::NEG_INFINITY, f64::INFINITY), (0.0, f64::INFINITY)],
            margin: tol::DOMAIN_MARGIN,
        }
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    /// Strict membership with the safety margin.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.bounds.len()
            && x.iter().zip(&self.bounds).all(|(&c, &(lo, hi))| {
                c.is_finite() && c > lo + self.margin && c < hi - self.margin
            })
    }

    /// Signed clearance from the nearest boundary (negative outside); used
    /// by the integrator to bisect domain exits.
    pub fn clearance(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(&self.bounds)
            .map(|(&c, &(lo, hi))| {
                let lo_c = if lo.is_finite() { c - lo } else { f64::INFINITY };
                let hi_c = if hi.is_finite() { hi - c } else { f64::INFINITY };
                lo_c.min(hi_c) - self.margin
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// True when the closed `window` box sits strictly inside the domain.
    pub fn contains_box(&self, window: &[(f64, f64)]) -> bool {
        window.len() == self.bounds.len()
            && window.iter().zip(&self.bounds).all(|(&(wl, wh), &(lo, hi))| {
                wl < wh && wl > lo + self.margin && wh < hi - self.margin
            })
    }
}

/// Metric families with closed-form first partials.
#[derive(Clone, Debug)]
pub enum RiemannianMetric {
    /// g = I.
    Identity { dim: usize },
    /// The upper half-plane metric g = I / (x²)², n = 2.
    HalfPlaneHyperbolic,
}

impl RiemannianMetric {
    pub fn dim(&self) -> usize {
        match self {
            RiemannianMetric::Identity { dim } => *dim,
            RiemannianMetric::HalfPlaneHyperbolic => 2,
        }
    }

    /// g(x).
    pub fn matrix(&self, x: &[f64]) -> DMatrix<f64> {
        match self {
            RiemannianMetric::Identity { dim } => DMatrix::identity(*dim, *dim),
            RiemannianMetric::HalfPlaneHyperbolic => {
                DMatrix::identity(2, 2) / (x[1] * x[1])
            }
        }
    }

    /// g⁻¹(x).
    pub fn inverse_matrix(&self, x: &[f64]) -> DMatrix<f64> {
        match self {
            RiemannianMetric::Identity { dim } => DMatrix::identity(*dim, *dim),
            RiemannianMetric::HalfPlaneHyperbolic => {
                DMatrix::identity(2, 2) * (x[1] * x[1])
            }
        }
    }

    /// ∂g/∂xⁱ for each axis i.
    pub fn matrix_partials(&self, x: &[f64]) -> Vec<DMatrix<f64>> {
        match self {
            RiemannianMetric::Identity { dim } => vec![DMatrix::zeros(*dim, *dim); *dim],
            RiemannianMetric::HalfPlaneHyperbolic => {
                let h = x[1];
                vec![
                    DMatrix::zeros(2, 2),
                    DMatrix::identity(2, 2) * (-2.0 / (h * h * h)),
                ]
            }
        }
    }

    /// ∂g⁻¹/∂xⁱ for each axis i.
    pub fn inverse_partials(&self, x: &[f64]) -> Vec<DMatrix<f64>> {
        match self {
            RiemannianMetric::Identity { dim } => vec![DMatrix::zeros(*dim, *dim); *dim],
            RiemannianMetric::HalfPlaneHyperbolic => {
                vec![DMatrix::zeros(2, 2), DMatrix::identity(2, 2) * (2.0 * x[1])]
            }
        }
    }
}

/// A chart-domain field x ↦ F(x, ·) of asymmetric norms.
#[derive(Clone, Debug)]
pub enum FinslerField {
    /// F(x, y) = base(y) / x² on the upper half-plane.
    QuasiHyperbolic { base: AsymNorm, domain: ChartDomain },
    /// F(x, y) = norm(y).
    Constant { norm: AsymNorm, domain: ChartDomain },
    /// F(x, y) = √(yᵀ g(x) y).
    Riemannian {
        metric: RiemannianMetric,
        domain: ChartDomain,
    },
}

/// Empirical suprema backing the dual-norm Lipschitz estimates: C1 bounds
/// the horizontal variation ‖d_hF‖/F², C2 the fiber variation 1/F, both over
/// a window × the Euclidean unit sphere.
#[derive(Clone, Copy, Debug)]
pub struct LipschitzConstants {
    pub c1: f64,
    pub c2: f64,
}

impl FinslerField {
    pub fn quasi_hyperbolic(base: AsymNorm) -> Result<Self> {
        if base.dim() != 2 {
            return Err(Error::InvalidField(
                "quasi-hyperbolic fields are planar".into(),
            ));
        }
        Ok(FinslerField::QuasiHyperbolic {
            base,
            domain: ChartDomain::upper_half_plane(),
        })
    }

    pub fn constant(norm: AsymNorm, domain: ChartDomain) -> Result<Self> {
        if norm.dim() != domain.dim() {
            return Err(Error::InvalidField(
                "norm and domain dimensions differ".into(),
            ));
        }
        Ok(FinslerField::Constant { norm, domain })
    }

    pub fn riemannian(metric: RiemannianMetric, domain: ChartDomain) -> Result<Self> {
        if metric.dim() != domain.dim() {
            return Err(Error::InvalidField(
                "metric and domain dimensions differ".into(),
            ));
        }
        Ok(FinslerField::Riemannian { metric, domain })
    }

    pub fn domain(&self) -> &ChartDomain {
        match self {
            FinslerField::QuasiHyperbolic { domain, .. }
            | FinslerField::Constant { domain, .. }
            | FinslerField::Riemannian { domain, .. } => domain,
        }
    }

    pub fn dim(&self) -> usize {
        self.domain().dim()
    }

    /// Whether every fiber norm is strictly convex (so the extended field is
    /// single-valued).
    pub fn is_strictly_convex(&self) -> bool {
        match self {
            FinslerField::QuasiHyperbolic { base, .. } => base.is_strictly_convex(),
            FinslerField::Constant { norm, .. } => norm.is_strictly_convex(),
            FinslerField::Riemannian { .. } => true,
        }
    }

    pub(crate) fn check_domain(&self, x: &[f64]) -> Result<()> {
        if self.domain().contains(x) {
            Ok(())
        } else {
            Err(Error::OutOfDomain { point: x.to_vec() })
        }
    }

    /// F(x, y).
    pub fn field_eval(&self, x: &Vector, y: &Vector) -> Result<f64> {
        self.check_domain(x.as_slice())?;
        Ok(self.eval_unchecked(x.as_slice(), y.as_slice()))
    }

    pub(crate) fn eval_unchecked(&self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            FinslerField::QuasiHyperbolic { base, .. } => base.eval_slice(y) / x[1],
            FinslerField::Constant { norm, .. } => norm.eval_slice(y),
            FinslerField::Riemannian { metric, .. } => {
                let g = metric.matrix(x);
                let mut acc = 0.0;
                for i in 0..y.len() {
                    for j in 0..y.len() {
                        acc += y[i] * g[(i, j)] * y[j];
                    }
                }
                acc.max(0.0).sqrt()
            }
        }
    }

    /// The fiber norm F(x, ·) as a standalone value.
    pub fn fiber_norm(&self, x: &Vector) -> Result<AsymNorm> {
        self.check_domain(x.as_slice())?;
        Ok(match self {
            FinslerField::QuasiHyperbolic { base, .. } => {
                AsymNorm::scaled(base.clone(), x[1]).expect("x² is positive inside the domain")
            }
            FinslerField::Constant { norm, .. } => norm.clone(),
            FinslerField::Riemannian { metric, .. } => {
                let g = metric.matrix(x.as_slice());
                let n = g.nrows();
                let rows = (0..n)
                    .map(|i| (0..n).map(|j| g[(i, j)]).collect())
                    .collect();
                AsymNorm::quadratic(rows).expect("metric is SPD inside the domain")
            }
        })
    }

    /// X_u(x) = u / F(x, u), the unit control vector in the direction u.
    pub fn unit_vector(&self, x: &Vector, u: &Vector) -> Result<Vector> {
        self.check_domain(x.as_slice())?;
        if u.is_zero() {
            return Err(Error::ZeroControl);
        }
        let f = self.eval_unchecked(x.as_slice(), u.as_slice());
        Ok(u.scaled(1.0 / f))
    }

    /// d_hF(x, y): the covector of horizontal partials ∂F/∂xⁱ.
    pub fn horizontal_derivative(&self, x: &Vector, y: &Vector) -> Result<Covector> {
        self.check_domain(x.as_slice())?;
        Ok(Covector::new(self.horizontal_derivative_unchecked(
            x.as_slice(),
            y.as_slice(),
        )))
    }

    pub(crate) fn horizontal_derivative_unchecked(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        match self {
            FinslerField::QuasiHyperbolic { base, .. } => {
                vec![0.0, -base.eval_slice(y) / (x[1] * x[1])]
            }
            FinslerField::Constant { .. } => vec![0.0; x.len()],
            FinslerField::Riemannian { metric, .. } => {
                let f = self.eval_unchecked(x, y);
                if f == 0.0 {
                    return vec![0.0; x.len()];
                }
                metric
                    .matrix_partials(x)
                    .iter()
                    .map(|dg| {
                        let mut acc = 0.0;
                        for i in 0..y.len() {
                            for j in 0..y.len() {
                                acc += y[i] * dg[(i, j)] * y[j];
                            }
                        }
                        acc / (2.0 * f)
                    })
                    .collect()
            }
        }
    }

    /// g_ij(x) and g^ij(x) for Riemannian fields.
    pub fn fundamental_tensor(&self, x: &Vector) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
        self.check_domain(x.as_slice())?;
        match self {
            FinslerField::Riemannian { metric, .. } => Ok((
                metric.matrix(x.as_slice()),
                metric.inverse_matrix(x.as_slice()),
            )),
            _ => Err(Error::InvalidField(
                "fundamental tensor requires a Riemannian field".into(),
            )),
        }
    }

    /// The geodesic spray on the slit cotangent bundle of a Riemannian
    /// field: dxⁱ = g^{ik} α_k, dα_i = −½ α_j α_k ∂g^{jk}/∂xⁱ.
    pub fn spray_cotangent(&self, x: &Vector, alpha: &Covector) -> Result<(Vector, Covector)> {
        self.check_domain(x.as_slice())?;
        if alpha.is_zero() {
            return Err(Error::ZeroCovector);
        }
        let metric = match self {
            FinslerField::Riemannian { metric, .. } => metric,
            _ => {
                return Err(Error::InvalidField(
                    "cotangent spray requires a Riemannian field".into(),
                ))
            }
        };
        let n = x.dim();
        let ginv = metric.inverse_matrix(x.as_slice());
        let a = alpha.as_slice();
        let dx: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|k| ginv[(i, k)] * a[k]).sum())
            .collect();
        let dginv = metric.inverse_partials(x.as_slice());
        let dalpha: Vec<f64> = (0..n)
            .map(|i| {
                let mut acc = 0.0;
                for j in 0..n {
                    for k in 0..n {
                        acc += a[j] * a[k] * dginv[i][(j, k)];
                    }
                }
                -0.5 * acc
            })
            .collect();
        Ok((Vector::new(dx), Covector::new(dalpha)))
    }

    /// Empirical suprema of ‖d_hF‖/F² (C1) and 1/F (C2) over a compact
    /// window × the Euclidean unit sphere, by dense sampling.
    pub fn lipschitz_constants_report(&self, window: &[(f64, f64)]) -> Result<LipschitzConstants> {
        if !self.domain().contains_box(window) {
            let probe: Vec<f64> = window.iter().map(|&(lo, _)| lo).collect();
            return Err(Error::OutOfDomain { point: probe });
        }
        assert_eq!(self.dim(), 2, "the report samples planar windows");
        const GRID: usize = 41;
        const ANGLES: usize = 128;
        let mut c1: f64 = 0.0;
        let mut c2: f64 = 0.0;
        for i in 0..GRID {
            for j in 0..GRID {
                let x = [
                    window[0].0 + (window[0].1 - window[0].0) * i as f64 / (GRID - 1) as f64,
                    window[1].0 + (window[1].1 - window[1].0) * j as f64 / (GRID - 1) as f64,
                ];
                for k in 0..ANGLES {
                    let t = std::f64::consts::TAU * k as f64 / ANGLES as f64;
                    let y = [t.cos(), t.sin()];
                    let f = self.eval_unchecked(&x, &y);
                    let dh = self.horizontal_derivative_unchecked(&x, &y);
                    c1 = c1.max(euclidean(&dh) / (f * f));
                    c2 = c2.max(1.0 / f);
                }
            }
        }
        Ok(LipschitzConstants { c1, c2 })
    }

    /// Left-invariance of a quasi-hyperbolic field under the group action
    /// x ↦ (b·x¹ + a, b·x²), y ↦ b·y, checked on random samples.
    pub fn invariance_check(&self, g: (f64, f64), samples: usize, seed: u64) -> Result<bool> {
        use rand::{Rng, SeedableRng};
        let (a, b) = g;
        if b <= 0.0 {
            return Err(Error::InvalidGroupElement { b });
        }
        if !matches!(self, FinslerField::QuasiHyperbolic { .. }) {
            return Err(Error::InvalidField(
                "the group action belongs to quasi-hyperbolic fields".into(),
            ));
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let x = [rng.random_range(-3.0..3.0), rng.random_range(0.1..4.0)];
            let y = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
            if euclidean(&y) < 1e-6 {
                continue;
            }
            let gx = [b * x[0] + a, b * x[1]];
            let gy = [b * y[0], b * y[1]];
            let f = self.eval_unchecked(&x, &y);
            let fg = self.eval_unchecked(&gx, &gy);
            if (f - fg).abs() > 1e-12 * f.max(1.0) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
