//! Asymmetric norms with their duals, conjugates, support sets and
//! strong-convexity checks.
//!
//! Three concrete unit-ball representations are supported:
//!
//! * [`AsymNorm::Polyhedral`] — the ball is a convex polygon given by its
//!   boundary vertices in counterclockwise order (n = 2). Evaluation is a
//!   gauge maximum over precomputed face functionals, the dual norm is an
//!   exact maximum over vertices.
//! * [`AsymNorm::Quadratic`] — F(y) = √(yᵀAy) for a symmetric positive
//!   definite A (any dimension). Dual and conjugate gradients are closed
//!   forms through A⁻¹.
//! * [`AsymNorm::ArcComposite`] — the boundary is a chain of circular arcs
//!   forming a closed strictly convex curve around the origin (n = 2).
//!   Evaluation is exact ray–arc intersection; the conjugate gradient goes
//!   through a one-dimensional boundary maximization so it stays a route
//!   independent of the normal-cone support queries.
//!
//! [`AsymNorm::Scaled`] wraps any of the above with a positive factor,
//! F = inner / factor, which is how a field of norms varies over a chart.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::vector::{dot, euclidean, Covector, Vector};
use crate::{tol, Result};

const TAU: f64 = std::f64::consts::TAU;

/// One circular piece of an arc-composite unit sphere.
///
/// `polar_from`/`polar_to` delimit the piece by the polar angle of the
/// boundary as seen from the origin, counterclockwise; the piece may wrap
/// past 2π. The origin must lie strictly inside the supporting circle so the
/// outgoing ray meets the arc in exactly one point.
#[derive(Clone, Copy, Debug, serde::Deserialize, serde::Serialize)]
pub struct ArcSpec {
    pub center: [f64; 2],
    pub radius: f64,
    pub polar_from: f64,
    pub polar_to: f64,
}

#[derive(Clone, Debug)]
struct ArcSegment {
    center: [f64; 2],
    radius: f64,
    /// Polar interval [lo, hi] with lo in [0, 2π) and hi in (lo, lo + 2π].
    polar_lo: f64,
    polar_hi: f64,
    /// Boundary points at the interval ends.
    start: [f64; 2],
    end: [f64; 2],
    /// Circle angles (normal directions) at the interval ends, unwrapped so
    /// that psi_hi >= psi_lo.
    psi_lo: f64,
    psi_hi: f64,
}

/// Polyhedral unit ball: counterclockwise vertices plus the face functionals
/// a_i with a_i · y = 1 along face (v_i, v_{i+1}).
#[derive(Clone, Debug)]
pub struct PolyhedralNorm {
    vertices: Vec<[f64; 2]>,
    faces: Vec<[f64; 2]>,
}

#[derive(Clone, Debug)]
pub struct QuadraticNorm {
    matrix: nalgebra::DMatrix<f64>,
    inverse: nalgebra::DMatrix<f64>,
}

#[derive(Clone, Debug)]
pub struct ArcCompositeNorm {
    arcs: Vec<ArcSegment>,
}

/// An asymmetric norm, tagged by its unit-ball representation.
#[derive(Clone, Debug)]
pub enum AsymNorm {
    Polyhedral(PolyhedralNorm),
    Quadratic(QuadraticNorm),
    ArcComposite(ArcCompositeNorm),
    Scaled { inner: Box<AsymNorm>, factor: f64 },
}

/// The unit-sphere points attaining F*(α): a single point for strictly
/// convex balls, a closed face segment when α is an outward normal to a flat
/// polyhedral face. Face endpoints are in counterclockwise boundary order.
#[derive(Clone, Debug, PartialEq)]
pub enum SupportSet {
    Point(Vector),
    Face { endpoints: (Vector, Vector) },
}

impl SupportSet {
    /// The support point, or the face endpoints' midpoint direction is not
    /// well defined — callers that need a single vector must handle faces.
    pub fn point(&self) -> Option<&Vector> {
        match self {
            SupportSet::Point(v) => Some(v),
            SupportSet::Face { .. } => None,
        }
    }
}

/// Outcome of a sampled strong-convexity check.
#[derive(Clone, Debug)]
pub struct StrongConvexityReport {
    pub pass: bool,
    /// Smallest observed slack of F²(z) − F²(y) − α(z−y) − c²‖z−y‖².
    pub worst_margin: f64,
    /// Triple attaining the worst margin.
    pub witness: Option<(Vector, Vector, Covector)>,
    /// The constant c the check ran with (for bisected reports, the largest
    /// passing constant).
    pub constant: f64,
    pub triples: usize,
}

/// Sampled difference quotients of the conjugate-square gradient.
#[derive(Clone, Debug)]
pub struct LipschitzReport {
    pub max_quotient: f64,
    pub pairs: usize,
}

fn normalize_angle(a: f64) -> f64 {
    let mut a = a % TAU;
    if a < 0.0 {
        a += TAU;
    }
    a
}

/// Counterclockwise gap from angle `a` to angle `b`, in [0, 2π).
fn ccw_gap(a: f64, b: f64) -> f64 {
    normalize_angle(b - a)
}

impl PolyhedralNorm {
    fn new(vertices: Vec<[f64; 2]>) -> Result<Self> {
        let k = vertices.len();
        if k < 3 {
            return Err(Error::InvalidNorm(format!(
                "polyhedral ball needs at least 3 vertices, got {k}"
            )));
        }
        for v in &vertices {
            if !v[0].is_finite() || !v[1].is_finite() {
                return Err(Error::InvalidNorm("non-finite vertex".into()));
            }
        }
        // Strict convexity of the vertex polygon, counterclockwise order.
        for i in 0..k {
            let a = vertices[i];
            let b = vertices[(i + 1) % k];
            let c = vertices[(i + 2) % k];
            let cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
            if cross <= 0.0 {
                return Err(Error::InvalidNorm(format!(
                    "vertices are not in strictly convex counterclockwise position near index {i}"
                )));
            }
        }
        let mut faces = Vec::with_capacity(k);
        for i in 0..k {
            let p = vertices[i];
            let q = vertices[(i + 1) % k];
            // Solve a·p = a·q = 1.
            let det = p[0] * q[1] - p[1] * q[0];
            if det.abs() < 1e-14 {
                return Err(Error::InvalidNorm(
                    "origin lies on a face line; it must be strictly interior".into(),
                ));
            }
            let a = [(q[1] - p[1]) / det, (p[0] - q[0]) / det];
            faces.push(a);
        }
        // Origin strictly inside: every vertex satisfies a_i·v <= 1 and the
        // gauge of every vertex is exactly 1, which the face solve already
        // guarantees; check boundedness instead (each face functional must
        // be attained positively somewhere).
        for (i, a) in faces.iter().enumerate() {
            for (j, v) in vertices.iter().enumerate() {
                if dot(a, v) > 1.0 + 1e-9 {
                    return Err(Error::InvalidNorm(format!(
                        "vertex {j} lies outside face {i}: polygon is not convex"
                    )));
                }
            }
        }
        Ok(Self { vertices, faces })
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    fn eval(&self, y: &[f64]) -> f64 {
        self.faces
            .iter()
            .map(|a| dot(a, y))
            .fold(0.0, f64::max)
    }

    fn dual_eval(&self, alpha: &[f64]) -> f64 {
        self.vertices
            .iter()
            .map(|v| dot(alpha, v))
            .fold(0.0, f64::max)
    }

    pub(crate) fn vertex(&self, i: usize) -> [f64; 2] {
        self.vertices[i]
    }

    pub(crate) fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Largest α·v over the vertices minus the value at `cur`: positive when
    /// some other vertex overtakes the current one.
    pub(crate) fn switch_margin(&self, alpha: &[f64], cur: usize) -> f64 {
        let here = dot(alpha, &self.vertices[cur]);
        self.vertices
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != cur)
            .map(|(_, v)| dot(alpha, v) - here)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Tie tolerance for vertex-maximum comparisons at this covector scale.
    pub(crate) fn tie_tolerance(&self, alpha: &[f64]) -> f64 {
        let vmax = self
            .vertices
            .iter()
            .map(|v| euclidean(v))
            .fold(0.0, f64::max);
        1e-12 * (euclidean(alpha) * vmax).max(1e-300)
    }

    /// The maximizing vertices as a cyclically contiguous run in
    /// counterclockwise order.
    pub(crate) fn argmax_run(&self, alpha: &[f64]) -> Vec<usize> {
        let arg = self.argmax_vertices(alpha);
        let k = self.vertices.len();
        if arg.len() >= k {
            return arg;
        }
        let in_set = |i: usize| arg.contains(&(i % k));
        let mut first = arg[0];
        let mut guard = 0;
        while in_set((first + k - 1) % k) && guard <= k {
            first = (first + k - 1) % k;
            guard += 1;
        }
        (0..arg.len()).map(|d| (first + d) % k).collect()
    }

    /// Indices of the vertices attaining the dual maximum, within a relative
    /// tie tolerance.
    fn argmax_vertices(&self, alpha: &[f64]) -> Vec<usize> {
        let scale = euclidean(alpha)
            * self
                .vertices
                .iter()
                .map(|v| euclidean(v))
                .fold(0.0, f64::max);
        let tie = 1e-12 * scale.max(1e-300);
        let best = self
            .vertices
            .iter()
            .map(|v| dot(alpha, v))
            .fold(f64::NEG_INFINITY, f64::max);
        (0..self.vertices.len())
            .filter(|&i| dot(alpha, &self.vertices[i]) >= best - tie)
            .collect()
    }
}

impl QuadraticNorm {
    fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidNorm("matrix must be square".into()));
        }
        let matrix = nalgebra::DMatrix::from_fn(n, n, |i, j| rows[i][j]);
        if !matrix.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidNorm("non-finite matrix entry".into()));
        }
        let asym = (&matrix - matrix.transpose()).abs().max();
        if asym > 1e-10 * matrix.abs().max().max(1.0) {
            return Err(Error::InvalidNorm("matrix is not symmetric".into()));
        }
        let chol = nalgebra::Cholesky::new(matrix.clone())
            .ok_or_else(|| Error::InvalidNorm("matrix is not positive definite".into()))?;
        let inverse = chol.inverse();
        Ok(Self { matrix, inverse })
    }

    pub fn matrix(&self) -> &nalgebra::DMatrix<f64> {
        &self.matrix
    }

    fn quad(m: &nalgebra::DMatrix<f64>, v: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..v.len() {
            for j in 0..v.len() {
                acc += v[i] * m[(i, j)] * v[j];
            }
        }
        acc
    }

    fn apply(m: &nalgebra::DMatrix<f64>, v: &[f64]) -> Vec<f64> {
        (0..v.len())
            .map(|i| (0..v.len()).map(|j| m[(i, j)] * v[j]).sum())
            .collect()
    }

    fn eval(&self, y: &[f64]) -> f64 {
        Self::quad(&self.matrix, y).max(0.0).sqrt()
    }

    fn dual_eval(&self, alpha: &[f64]) -> f64 {
        Self::quad(&self.inverse, alpha).max(0.0).sqrt()
    }
}

impl ArcCompositeNorm {
    fn new(specs: Vec<ArcSpec>) -> Result<Self> {
        if specs.is_empty() {
            return Err(Error::InvalidNorm("arc list is empty".into()));
        }
        let mut arcs = Vec::with_capacity(specs.len());
        let mut span_total = 0.0;
        for (i, s) in specs.iter().enumerate() {
            if !(s.radius > 0.0) || !s.radius.is_finite() {
                return Err(Error::InvalidNorm(format!("arc {i}: radius must be positive")));
            }
            if euclidean(&s.center) >= s.radius - 1e-12 {
                return Err(Error::InvalidNorm(format!(
                    "arc {i}: origin must lie strictly inside the supporting circle"
                )));
            }
            let lo = normalize_angle(s.polar_from);
            let mut span = normalize_angle(s.polar_to - s.polar_from);
            if span == 0.0 {
                span = TAU; // a single full circle
            }
            span_total += span;
            let hi = lo + span;
            let start = ray_hit(s.center, s.radius, lo);
            let end = ray_hit(s.center, s.radius, hi);
            let psi_lo = normalize_angle((start[1] - s.center[1]).atan2(start[0] - s.center[0]));
            let mut psi_hi = normalize_angle((end[1] - s.center[1]).atan2(end[0] - s.center[0]));
            if psi_hi < psi_lo - 1e-12 {
                psi_hi += TAU;
            }
            arcs.push(ArcSegment {
                center: s.center,
                radius: s.radius,
                polar_lo: lo,
                polar_hi: hi,
                start,
                end,
                psi_lo,
                psi_hi,
            });
        }
        if (span_total - TAU).abs() > 1e-9 {
            return Err(Error::InvalidNorm(format!(
                "polar intervals cover {span_total} instead of 2π"
            )));
        }
        let k = arcs.len();
        for i in 0..k {
            let cur = &arcs[i];
            let next = &arcs[(i + 1) % k];
            if ccw_gap(cur.polar_hi, next.polar_lo).min(ccw_gap(next.polar_lo, cur.polar_hi))
                > 1e-9
            {
                return Err(Error::InvalidNorm(format!(
                    "polar interval of arc {} does not continue arc {i}",
                    (i + 1) % k
                )));
            }
            let gap = [cur.end[0] - next.start[0], cur.end[1] - next.start[1]];
            if euclidean(&gap) > 1e-9 {
                return Err(Error::InvalidNorm(format!(
                    "boundary jumps between arc {i} and arc {}",
                    (i + 1) % k
                )));
            }
            // Convexity across the junction: the outward normal may only
            // rotate counterclockwise (a corner), never clockwise.
            let exit_normal = normalize_angle(cur.psi_hi);
            let enter_normal = normalize_angle(next.psi_lo);
            let turn = ccw_gap(exit_normal, enter_normal);
            if turn > std::f64::consts::PI + 1e-9 {
                return Err(Error::InvalidNorm(format!(
                    "junction between arc {i} and arc {} is re-entrant",
                    (i + 1) % k
                )));
            }
        }
        Ok(Self { arcs })
    }

    fn arc_for_polar(&self, phi: f64) -> &ArcSegment {
        let phi = normalize_angle(phi);
        for arc in &self.arcs {
            if (arc.polar_lo - 1e-12..=arc.polar_hi + 1e-12).contains(&phi)
                || (arc.polar_lo - 1e-12..=arc.polar_hi + 1e-12).contains(&(phi + TAU))
            {
                return arc;
            }
        }
        // Coverage is validated at construction; fall back to the closest.
        &self.arcs[0]
    }

    fn eval(&self, y: &[f64]) -> f64 {
        let r = euclidean(y);
        if r == 0.0 {
            return 0.0;
        }
        let phi = y[1].atan2(y[0]);
        let arc = self.arc_for_polar(phi);
        let t = ray_root(arc.center, arc.radius, [y[0] / r, y[1] / r]);
        r / t
    }

    /// Boundary point in direction of polar angle `phi`.
    fn boundary(&self, phi: f64) -> [f64; 2] {
        let arc = self.arc_for_polar(phi);
        ray_hit(arc.center, arc.radius, phi)
    }

    /// Exact support data: the maximizing boundary point and the maximum of
    /// α over the unit ball, via per-arc normal-cone tests.
    fn support(&self, alpha: &[f64]) -> ([f64; 2], f64) {
        let na = euclidean(alpha);
        let psi_star = alpha[1].atan2(alpha[0]);
        let mut best = f64::NEG_INFINITY;
        let mut best_point = [0.0, 0.0];
        for arc in &self.arcs {
            // Interior maximum: normal direction matches α.
            let mut psi = normalize_angle(psi_star);
            if psi < arc.psi_lo {
                psi += TAU;
            }
            let candidates: [[f64; 2]; 3] = if psi <= arc.psi_hi + 1e-15 {
                let p = [
                    arc.center[0] + arc.radius * psi.cos(),
                    arc.center[1] + arc.radius * psi.sin(),
                ];
                [p, arc.start, arc.end]
            } else {
                [arc.start, arc.start, arc.end]
            };
            for p in candidates {
                let v = dot(alpha, &p);
                if v > best {
                    best = v;
                    best_point = p;
                }
            }
        }
        let _ = na;
        (best_point, best)
    }

    /// 1-D maximization of q(θ) = α(b(θ)) over the boundary polar angle:
    /// coarse scan, golden-section, then bisection on the finite-difference
    /// derivative. Independent of the normal-cone support queries.
    fn boundary_argmax(&self, alpha: &[f64]) -> (f64, f64) {
        let q = |theta: f64| dot(alpha, &self.boundary(theta));
        const COARSE: usize = 256;
        let mut best_i = 0;
        let mut best_q = f64::NEG_INFINITY;
        for i in 0..COARSE {
            let theta = TAU * i as f64 / COARSE as f64;
            let v = q(theta);
            if v > best_q {
                best_q = v;
                best_i = i;
            }
        }
        let mut lo = TAU * (best_i as f64 - 1.0) / COARSE as f64;
        let mut hi = TAU * (best_i as f64 + 1.0) / COARSE as f64;
        // Golden-section shrink.
        let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
        let mut c = hi - inv_phi * (hi - lo);
        let mut d = lo + inv_phi * (hi - lo);
        let mut qc = q(c);
        let mut qd = q(d);
        while hi - lo > tol::BOUNDARY_ANGLE {
            if qc >= qd {
                hi = d;
                d = c;
                qd = qc;
                c = hi - inv_phi * (hi - lo);
                qc = q(c);
            } else {
                lo = c;
                c = d;
                qc = qd;
                d = lo + inv_phi * (hi - lo);
                qd = q(d);
            }
        }
        // Derivative-sign bisection polish on the final bracket.
        let h = 1e-7;
        let dq = |theta: f64| (q(theta + h) - q(theta - h)) / (2.0 * h);
        let (mut a, mut b) = (lo, hi);
        if dq(a) > 0.0 && dq(b) < 0.0 {
            for _ in 0..60 {
                let m = 0.5 * (a + b);
                if dq(m) > 0.0 {
                    a = m;
                } else {
                    b = m;
                }
                if b - a <= tol::BOUNDARY_ANGLE {
                    break;
                }
            }
        }
        let theta = 0.5 * (a + b);
        (theta, q(theta))
    }

    /// Subgradient rays of F at a boundary direction; two rays at corners.
    fn gradient_rays(&self, y: &[f64], f: f64) -> Vec<[f64; 2]> {
        let phi = normalize_angle(y[1].atan2(y[0]));
        let mut rays = Vec::new();
        for arc in &self.arcs {
            let inside = (arc.polar_lo - 1e-9..=arc.polar_hi + 1e-9).contains(&phi)
                || (arc.polar_lo - 1e-9..=arc.polar_hi + 1e-9).contains(&(phi + TAU));
            if inside {
                // dF(y) = (y − F·c) / (c·(y − F·c) + F·r²); exact for the
                // smooth piece, one-sided limit at corners.
                let w = [y[0] - f * arc.center[0], y[1] - f * arc.center[1]];
                let denom = dot(&arc.center, &w) + f * arc.radius * arc.radius;
                rays.push([w[0] / denom, w[1] / denom]);
            }
        }
        rays
    }
}

/// Positive ray parameter t with |t·d − c| = r for a unit direction d and a
/// circle whose interior contains the origin.
fn ray_root(center: [f64; 2], radius: f64, d: [f64; 2]) -> f64 {
    let dc = dot(&d, &center);
    let disc = dc * dc + radius * radius - dot(&center, &center);
    dc + disc.max(0.0).sqrt()
}

fn ray_hit(center: [f64; 2], radius: f64, phi: f64) -> [f64; 2] {
    let d = [phi.cos(), phi.sin()];
    let t = ray_root(center, radius, d);
    [t * d[0], t * d[1]]
}

impl AsymNorm {
    /// Polyhedral norm from unit-ball boundary vertices in counterclockwise
    /// order (n = 2).
    pub fn polyhedral(vertices: Vec<[f64; 2]>) -> Result<Self> {
        Ok(AsymNorm::Polyhedral(PolyhedralNorm::new(vertices)?))
    }

    /// Quadratic norm F(y) = √(yᵀAy) from the rows of a symmetric positive
    /// definite matrix.
    pub fn quadratic(rows: Vec<Vec<f64>>) -> Result<Self> {
        Ok(AsymNorm::Quadratic(QuadraticNorm::new(rows)?))
    }

    /// Euclidean norm in `dim` dimensions.
    pub fn euclidean(dim: usize) -> Self {
        let rows = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        AsymNorm::Quadratic(QuadraticNorm::new(rows).expect("identity is SPD"))
    }

    /// Arc-composite norm from circular pieces (n = 2).
    pub fn arc_composite(arcs: Vec<ArcSpec>) -> Result<Self> {
        Ok(AsymNorm::ArcComposite(ArcCompositeNorm::new(arcs)?))
    }

    /// F = inner / factor: the unit ball is the inner ball scaled by factor.
    pub fn scaled(inner: AsymNorm, factor: f64) -> Result<Self> {
        if !(factor > 0.0) || !factor.is_finite() {
            return Err(Error::InvalidNorm(format!(
                "scale factor must be positive, got {factor}"
            )));
        }
        Ok(AsymNorm::Scaled {
            inner: Box::new(inner),
            factor,
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            AsymNorm::Polyhedral(_) | AsymNorm::ArcComposite(_) => 2,
            AsymNorm::Quadratic(q) => q.matrix.nrows(),
            AsymNorm::Scaled { inner, .. } => inner.dim(),
        }
    }

    pub fn is_strictly_convex(&self) -> bool {
        match self {
            AsymNorm::Polyhedral(_) => false,
            AsymNorm::Quadratic(_) | AsymNorm::ArcComposite(_) => true,
            AsymNorm::Scaled { inner, .. } => inner.is_strictly_convex(),
        }
    }

    /// F(y). Total on finite inputs: zero exactly at y = 0.
    pub fn eval(&self, y: &Vector) -> f64 {
        self.eval_slice(y.as_slice())
    }

    pub(crate) fn eval_slice(&self, y: &[f64]) -> f64 {
        match self {
            AsymNorm::Polyhedral(p) => p.eval(y),
            AsymNorm::Quadratic(q) => q.eval(y),
            AsymNorm::ArcComposite(a) => a.eval(y),
            AsymNorm::Scaled { inner, factor } => inner.eval_slice(y) / factor,
        }
    }

    /// F*(α) = sup of α over the F-unit ball.
    pub fn dual_eval(&self, alpha: &Covector) -> f64 {
        self.dual_eval_slice(alpha.as_slice())
    }

    pub(crate) fn dual_eval_slice(&self, alpha: &[f64]) -> f64 {
        match self {
            AsymNorm::Polyhedral(p) => p.dual_eval(alpha),
            AsymNorm::Quadratic(q) => q.dual_eval(alpha),
            AsymNorm::ArcComposite(a) => a.support(alpha).1.max(0.0),
            AsymNorm::Scaled { inner, factor } => factor * inner.dual_eval_slice(alpha),
        }
    }

    /// (F²)*(α) = sup_y { α(y) − F²(y) }, computed by maximizing over the
    /// ray direction and then the radius. Equals ¼ F*²(α).
    pub fn fenchel_conjugate_sq(&self, alpha: &Covector) -> f64 {
        match self {
            AsymNorm::Polyhedral(p) => {
                // Directional maximum is attained at a vertex; along the ray
                // s·v the maximum of s·α(v) − s² is α(v)²/4.
                let m = p
                    .vertices
                    .iter()
                    .map(|v| dot(alpha.as_slice(), v))
                    .fold(0.0, f64::max);
                m * m / 4.0
            }
            AsymNorm::Quadratic(q) => {
                QuadraticNorm::quad(&q.inverse, alpha.as_slice()).max(0.0) / 4.0
            }
            AsymNorm::ArcComposite(a) => {
                if alpha.is_zero() {
                    return 0.0;
                }
                let (_, q_max) = a.boundary_argmax(alpha.as_slice());
                let m = q_max.max(0.0);
                m * m / 4.0
            }
            AsymNorm::Scaled { inner, factor } => {
                factor * factor * inner.fenchel_conjugate_sq(alpha)
            }
        }
    }

    /// The set of unit-sphere points attaining F*(α).
    pub fn support_set(&self, alpha: &Covector) -> Result<SupportSet> {
        if alpha.is_zero() {
            return Err(Error::ZeroCovector);
        }
        Ok(match self {
            AsymNorm::Polyhedral(p) => {
                let run = p.argmax_run(alpha.as_slice());
                if run.len() >= 2 {
                    // A flat face: report the counterclockwise extremes of
                    // the maximizing run.
                    SupportSet::Face {
                        endpoints: (
                            Vector::new(p.vertices[run[0]].to_vec()),
                            Vector::new(p.vertices[*run.last().unwrap()].to_vec()),
                        ),
                    }
                } else {
                    SupportSet::Point(Vector::new(p.vertices[run[0]].to_vec()))
                }
            }
            AsymNorm::Quadratic(q) => {
                let w = QuadraticNorm::apply(&q.inverse, alpha.as_slice());
                let f = q.dual_eval(alpha.as_slice());
                SupportSet::Point(Vector::new(w.iter().map(|c| c / f).collect()))
            }
            AsymNorm::ArcComposite(a) => {
                let (p, _) = a.support(alpha.as_slice());
                SupportSet::Point(Vector::new(p.to_vec()))
            }
            AsymNorm::Scaled { inner, factor } => match inner.support_set(alpha)? {
                SupportSet::Point(v) => SupportSet::Point(v.scaled(*factor)),
                SupportSet::Face { endpoints: (a, b) } => SupportSet::Face {
                    endpoints: (a.scaled(*factor), b.scaled(*factor)),
                },
            },
        })
    }

    /// dF*²(α) for strictly convex norms. Satisfies F(dF*²(α)) = 2F*(α) and
    /// α(dF*²(α)) = 2F*²(α); the support point is dF*²(α)/F(dF*²(α)).
    pub fn grad_dual_sq(&self, alpha: &Covector) -> Result<Vector> {
        if alpha.is_zero() {
            return Err(Error::ZeroCovector);
        }
        match self {
            AsymNorm::Polyhedral(_) => Err(Error::NotStrictlyConvex),
            AsymNorm::Quadratic(q) => {
                let w = QuadraticNorm::apply(&q.inverse, alpha.as_slice());
                Ok(Vector::new(w.iter().map(|c| 2.0 * c).collect()))
            }
            AsymNorm::ArcComposite(a) => {
                let (theta, q_max) = a.boundary_argmax(alpha.as_slice());
                let b = a.boundary(theta);
                Ok(Vector::new(vec![2.0 * q_max * b[0], 2.0 * q_max * b[1]]))
            }
            AsymNorm::Scaled { inner, factor } => {
                let g = inner.grad_dual_sq(alpha)?;
                Ok(g.scaled(factor * factor))
            }
        }
    }

    /// The polyhedral representation underneath any Scaled wrappers.
    pub(crate) fn base_polyhedral(&self) -> Option<&PolyhedralNorm> {
        match self {
            AsymNorm::Polyhedral(p) => Some(p),
            AsymNorm::Scaled { inner, .. } => inner.base_polyhedral(),
            _ => None,
        }
    }

    /// Unit-sphere support point as raw coordinates; None for polyhedral
    /// norms whose support may be a face.
    pub(crate) fn support_point_slice(&self, alpha: &[f64]) -> Option<Vec<f64>> {
        match self {
            AsymNorm::Polyhedral(_) => None,
            AsymNorm::Quadratic(q) => {
                let w = QuadraticNorm::apply(&q.inverse, alpha);
                let f = q.dual_eval(alpha);
                Some(w.iter().map(|c| c / f).collect())
            }
            AsymNorm::ArcComposite(a) => Some(a.support(alpha).0.to_vec()),
            AsymNorm::Scaled { inner, factor } => inner
                .support_point_slice(alpha)
                .map(|v| v.iter().map(|c| c * factor).collect()),
        }
    }

    /// Boundary point of the unit sphere at polar angle θ (n = 2 only).
    pub fn boundary_point(&self, theta: f64) -> Vector {
        assert_eq!(self.dim(), 2, "boundary_point is a planar helper");
        let d = [theta.cos(), theta.sin()];
        let f = self.eval_slice(&d);
        Vector::new(vec![d[0] / f, d[1] / f])
    }

    /// Tested subgradients of F² at y: the exact gradient at smooth points;
    /// at corners the two extreme normal-cone rays plus 8 interior samples.
    pub(crate) fn subgradients_sq(&self, y: &Vector) -> Vec<Covector> {
        let ys = y.as_slice();
        let f = self.eval_slice(ys);
        if f == 0.0 {
            return vec![Covector::zeros(self.dim())];
        }
        let rays: Vec<Vec<f64>> = match self {
            AsymNorm::Polyhedral(p) => {
                let scale = euclidean(ys);
                let tie = 1e-12 * scale.max(1e-300);
                p.faces
                    .iter()
                    .filter(|a| dot(a.as_slice(), ys) >= f - tie)
                    .map(|a| a.to_vec())
                    .collect()
            }
            AsymNorm::Quadratic(q) => {
                // dF(y) = A y / F(y); handled below through the common 2F·ray
                // scaling with ray = A y / F².
                vec![QuadraticNorm::apply(&q.matrix, ys)
                    .iter()
                    .map(|c| c / (f * f))
                    .collect()]
            }
            AsymNorm::ArcComposite(a) => a
                .gradient_rays(ys, f)
                .iter()
                .map(|r| r.to_vec())
                .collect(),
            AsymNorm::Scaled { inner, factor } => {
                // ∂F²(y) = ∂inner²(y) / factor².
                return inner
                    .subgradients_sq(y)
                    .into_iter()
                    .map(|a| a.scaled(1.0 / (factor * factor)))
                    .collect();
            }
        };
        // Each ray is a subgradient of F (so dF(y)·y = F); lift to F² via
        // ∂F² = 2F·∂F and fill the cone interior when two extremes meet.
        let lift = |r: &[f64]| Covector::new(r.iter().map(|c| 2.0 * f * c).collect());
        if rays.len() < 2 {
            rays.iter().map(|r| lift(r)).collect()
        } else {
            let mut out = vec![lift(&rays[0]), lift(&rays[1])];
            for k in 1..=8 {
                let s = k as f64 / 9.0;
                let mix: Vec<f64> = rays[0]
                    .iter()
                    .zip(&rays[1])
                    .map(|(a, b)| (1.0 - s) * a + s * b)
                    .collect();
                out.push(lift(&mix));
            }
            out
        }
    }

    /// Sampled check of F²(z) ≥ F²(y) + α(z−y) + c²‖z−y‖² for α ∈ ∂F²(y),
    /// with ‖·‖ the Euclidean reference norm.
    pub fn check_strong_convexity(&self, c: f64, triples: usize, seed: u64) -> StrongConvexityReport {
        let samples = self.sample_convexity_triples(triples, seed);
        let mut worst = f64::INFINITY;
        let mut witness = None;
        for (y, z, alpha, base, d2) in &samples {
            let margin = base - c * c * d2;
            if margin < worst {
                worst = margin;
                witness = Some((y.clone(), z.clone(), alpha.clone()));
            }
        }
        let pass = worst >= -self.convexity_slack();
        StrongConvexityReport {
            pass,
            worst_margin: worst,
            witness,
            constant: c,
            triples: samples.len(),
        }
    }

    /// Largest constant in [1e-6, 1] passing the sampled check, located by
    /// bisection over the same sample set.
    pub fn strong_convexity_constant(&self, triples: usize, seed: u64) -> StrongConvexityReport {
        let samples = self.sample_convexity_triples(triples, seed);
        let slack = self.convexity_slack();
        let worst_at = |c: f64| {
            let mut worst = f64::INFINITY;
            let mut wit = None;
            for (y, z, alpha, base, d2) in &samples {
                let margin = base - c * c * d2;
                if margin < worst {
                    worst = margin;
                    wit = Some((y.clone(), z.clone(), alpha.clone()));
                }
            }
            (worst, wit)
        };
        let (mut lo, mut hi) = (1e-6, 1.0);
        let (w_lo, wit_lo) = worst_at(lo);
        if w_lo < -slack {
            return StrongConvexityReport {
                pass: false,
                worst_margin: w_lo,
                witness: wit_lo,
                constant: lo,
                triples: samples.len(),
            };
        }
        let (w_hi, _) = worst_at(hi);
        if w_hi >= -slack {
            lo = hi;
        } else {
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if worst_at(mid).0 >= -slack {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        let (worst, witness) = worst_at(lo);
        StrongConvexityReport {
            pass: true,
            worst_margin: worst,
            witness,
            constant: lo,
            triples: samples.len(),
        }
    }

    fn convexity_slack(&self) -> f64 {
        1e-12
    }

    /// Shared sampler: (y, z, α, base, ‖z−y‖²) with base the c-free part of
    /// the margin. One in eight samples is structured to land y and z in the
    /// same boundary sector, which is where flat faces fail.
    #[allow(clippy::type_complexity)]
    fn sample_convexity_triples(
        &self,
        triples: usize,
        seed: u64,
    ) -> Vec<(Vector, Vector, Covector, f64, f64)> {
        assert_eq!(self.dim(), 2, "convexity sampling is planar");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(triples);
        let mut produced = 0usize;
        while produced < triples {
            let structured = produced % 8 == 0;
            let (y, z) = if structured {
                match self {
                    AsymNorm::Polyhedral(p) => {
                        let k = p.vertices.len();
                        let fidx = rng.random_range(0..k);
                        let a = p.vertices[fidx];
                        let b = p.vertices[(fidx + 1) % k];
                        let r = rng.random_range(0.5..1.5);
                        let (s1, s2) = (rng.random_range(0.0..1.0), rng.random_range(0.0..1.0));
                        let pnt = |s: f64| {
                            Vector::new(vec![
                                r * ((1.0 - s) * a[0] + s * b[0]),
                                r * ((1.0 - s) * a[1] + s * b[1]),
                            ])
                        };
                        (pnt(s1), pnt(s2))
                    }
                    _ => {
                        let theta = rng.random_range(0.0..TAU);
                        let delta = rng.random_range(-0.2..0.2);
                        let r = rng.random_range(0.5..1.5);
                        (
                            self.boundary_point(theta).scaled(r),
                            self.boundary_point(theta + delta).scaled(r),
                        )
                    }
                }
            } else {
                let mut draw = || {
                    let theta = rng.random_range(0.0..TAU);
                    let r = rng.random_range(0.2..2.0);
                    Vector::new(vec![r * theta.cos(), r * theta.sin()])
                };
                (draw(), draw())
            };
            let fy2 = self.eval(&y).powi(2);
            let fz2 = self.eval(&z).powi(2);
            let diff = z.sub(&y);
            let d2 = diff.euclidean_norm().powi(2);
            for alpha in self.subgradients_sq(&y) {
                let base = fz2 - fy2 - alpha.pairing(&diff);
                out.push((y.clone(), z.clone(), alpha, base, d2));
            }
            produced += 1;
        }
        out
    }

    /// Max difference quotient ‖dF*²(α₁) − dF*²(α₂)‖ / ‖α₁ − α₂‖ over
    /// sampled covector pairs on an annulus.
    pub fn lipschitz_report_grad_dual(&self, pairs: usize, seed: u64) -> Result<LipschitzReport> {
        if !self.is_strictly_convex() {
            return Err(Error::NotStrictlyConvex);
        }
        assert_eq!(self.dim(), 2, "lipschitz sampling is planar");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut max_q: f64 = 0.0;
        for _ in 0..pairs {
            let mut draw = || {
                let theta = rng.random_range(0.0..TAU);
                let r = rng.random_range(0.5..2.0);
                Covector::new(vec![r * theta.cos(), r * theta.sin()])
            };
            let a1 = draw();
            let a2 = draw();
            let denom = a1.sub(&a2).euclidean_norm();
            if denom < 1e-9 {
                continue;
            }
            let g1 = self.grad_dual_sq(&a1)?;
            let g2 = self.grad_dual_sq(&a2)?;
            max_q = max_q.max(g1.sub(&g2).euclidean_norm() / denom);
        }
        Ok(LipschitzReport {
            max_quotient: max_q,
            pairs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::{c2, v2};
    use approx::assert_relative_eq;

    pub(crate) fn hexagon() -> AsymNorm {
        let s = 3.0_f64.sqrt() / 2.0;
        AsymNorm::polyhedral(vec![
            [s, -0.5],
            [s, 0.5],
            [0.0, 1.0],
            [-s, 0.5],
            [-s, -0.5],
            [0.0, -1.0],
        ])
        .unwrap()
    }

    fn se_norm() -> AsymNorm {
        let r = 5.0_f64.sqrt();
        let pi = std::f64::consts::PI;
        AsymNorm::arc_composite(vec![
            ArcSpec { center: [-1.0, -1.0], radius: r, polar_from: 0.0, polar_to: pi / 2.0 },
            ArcSpec { center: [1.0, -1.0], radius: r, polar_from: pi / 2.0, polar_to: pi },
            ArcSpec { center: [1.0, 1.0], radius: r, polar_from: pi, polar_to: 3.0 * pi / 2.0 },
            ArcSpec { center: [-1.0, 1.0], radius: r, polar_from: 3.0 * pi / 2.0, polar_to: TAU },
        ])
        .unwrap()
    }

    #[test]
    fn hexagon_eval_vertex_and_homogeneity() {
        let h = hexagon();
        let s = 3.0_f64.sqrt() / 2.0;
        assert_relative_eq!(h.eval(&v2(s, 0.5)), 1.0, epsilon = 1e-14);
        assert_eq!(h.eval(&v2(0.0, 0.0)), 0.0);
        assert_relative_eq!(h.eval(&v2(3.0_f64.sqrt(), 1.0)), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn euclidean_eval() {
        let e = AsymNorm::euclidean(2);
        assert_relative_eq!(e.eval(&v2(3.0, 4.0)), 5.0, epsilon = 1e-14);
    }

    #[test]
    fn hexagon_dual_is_vertex_max() {
        let h = hexagon();
        assert_relative_eq!(
            h.dual_eval(&c2(1.0, 0.0)),
            3.0_f64.sqrt() / 2.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn quadratic_dual_closed_form() {
        let q = AsymNorm::quadratic(vec![vec![4.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_relative_eq!(q.dual_eval(&c2(1.0, 0.0)), 0.5, epsilon = 1e-14);
        assert_relative_eq!(AsymNorm::euclidean(2).dual_eval(&c2(1.0, 0.0)), 1.0);
    }

    #[test]
    fn fenchel_conjugate_examples() {
        let e = AsymNorm::euclidean(2);
        assert_relative_eq!(e.fenchel_conjugate_sq(&c2(2.0, 0.0)), 1.0, epsilon = 1e-14);
        assert_eq!(hexagon().fenchel_conjugate_sq(&c2(0.0, 0.0)), 0.0);
        assert_relative_eq!(
            hexagon().fenchel_conjugate_sq(&c2(1.0, 0.0)),
            3.0 / 16.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn support_point_euclidean() {
        let e = AsymNorm::euclidean(2);
        assert_eq!(
            e.support_set(&c2(0.0, 1.0)).unwrap(),
            SupportSet::Point(v2(0.0, 1.0))
        );
    }

    #[test]
    fn support_face_of_hexagon() {
        let h = hexagon();
        let s = 3.0_f64.sqrt() / 2.0;
        match h.support_set(&c2(1.0, 0.0)).unwrap() {
            SupportSet::Face { endpoints: (a, b) } => {
                assert_relative_eq!(a[0], s, epsilon = 1e-14);
                assert_relative_eq!(a[1], -0.5, epsilon = 1e-14);
                assert_relative_eq!(b[0], s, epsilon = 1e-14);
                assert_relative_eq!(b[1], 0.5, epsilon = 1e-14);
            }
            other => panic!("expected a face, got {other:?}"),
        }
    }

    #[test]
    fn support_vertex_of_hexagon_off_face() {
        let h = hexagon();
        let a = c2((std::f64::consts::PI / 6.0).cos(), (std::f64::consts::PI / 6.0).sin());
        match h.support_set(&a).unwrap() {
            SupportSet::Point(v) => {
                assert_relative_eq!(v[0], 3.0_f64.sqrt() / 2.0, epsilon = 1e-12);
                assert_relative_eq!(v[1], 0.5, epsilon = 1e-12);
            }
            other => panic!("expected a point, got {other:?}"),
        }
    }

    #[test]
    fn support_invariant_under_positive_scaling() {
        let h = hexagon();
        let a = c2(0.3, -1.7);
        assert_eq!(
            h.support_set(&a).unwrap(),
            h.support_set(&a.scaled(37.5)).unwrap()
        );
        assert!(matches!(h.support_set(&c2(0.0, 0.0)), Err(Error::ZeroCovector)));
    }

    #[test]
    fn grad_dual_closed_forms() {
        let e = AsymNorm::euclidean(2);
        let g = e.grad_dual_sq(&c2(1.0, 0.0)).unwrap();
        assert_relative_eq!(g[0], 2.0, epsilon = 1e-14);
        assert_relative_eq!(g[1], 0.0, epsilon = 1e-14);

        let g = e.grad_dual_sq(&c2(3.0, 4.0)).unwrap();
        assert_relative_eq!(e.eval(&g), 10.0, epsilon = 1e-12);

        let q = AsymNorm::quadratic(vec![vec![4.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let g = q.grad_dual_sq(&c2(1.0, 0.0)).unwrap();
        assert_relative_eq!(g[0], 0.5, epsilon = 1e-12);
        assert_relative_eq!(g[1], 0.0, epsilon = 1e-12);

        assert!(matches!(
            hexagon().grad_dual_sq(&c2(1.0, 0.0)),
            Err(Error::NotStrictlyConvex)
        ));
    }

    /// Central finite differences of the numerically evaluated F*², the
    /// independent oracle for conjugate gradients.
    fn grad_dual_sq_fd(n: &AsymNorm, alpha: &Covector) -> Vector {
        let h = 1e-6;
        let mut out = Vec::with_capacity(alpha.dim());
        for i in 0..alpha.dim() {
            let mut up = alpha.as_slice().to_vec();
            let mut dn = alpha.as_slice().to_vec();
            up[i] += h;
            dn[i] -= h;
            let fu = n.dual_eval_slice(&up).powi(2);
            let fd = n.dual_eval_slice(&dn).powi(2);
            out.push((fu - fd) / (2.0 * h));
        }
        Vector::new(out)
    }

    #[test]
    fn grad_dual_matches_finite_differences() {
        let q = AsymNorm::quadratic(vec![vec![4.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let a = c2(1.0, 0.0);
        let g = q.grad_dual_sq(&a).unwrap();
        let fd = grad_dual_sq_fd(&q, &a);
        assert_relative_eq!(g[0], fd[0], epsilon = 1e-8);
        assert_relative_eq!(g[1], fd[1], epsilon = 1e-8);

        let se = se_norm();
        for a in [c2(1.0, 0.3), c2(-0.7, 1.1), c2(0.2, -1.9)] {
            let g = se.grad_dual_sq(&a).unwrap();
            let fd = grad_dual_sq_fd(&se, &a);
            assert_relative_eq!(g[0], fd[0], epsilon = 1e-5);
            assert_relative_eq!(g[1], fd[1], epsilon = 1e-5);
        }
    }

    #[test]
    fn se_norm_corners_and_eval() {
        let se = se_norm();
        for p in [v2(0.0, 1.0), v2(1.0, 0.0), v2(0.0, -1.0), v2(-1.0, 0.0)] {
            assert_relative_eq!(se.eval(&p), 1.0, epsilon = 1e-12);
        }
        // Interior of the first-quadrant arc: |y|/t with t = −√2 + √5.
        let expected = 2.0_f64.sqrt() / (5.0_f64.sqrt() - 2.0_f64.sqrt());
        assert_relative_eq!(se.eval(&v2(1.0, 1.0)), expected, epsilon = 1e-12);
    }

    #[test]
    fn fundamental_identity_on_se() {
        let se = se_norm();
        for a in [c2(1.0, 2.0), c2(-1.3, 0.4), c2(0.0, -2.0), c2(5.0, 5.0)] {
            let g = se.grad_dual_sq(&a).unwrap();
            assert_relative_eq!(se.eval(&g), 2.0 * se.dual_eval(&a), epsilon = 1e-8);
            assert_relative_eq!(
                a.pairing(&g),
                2.0 * se.dual_eval(&a).powi(2),
                epsilon = 1e-8
            );
        }
    }

    #[test]
    fn euclidean_strongly_convex_wrt_itself() {
        let e = AsymNorm::euclidean(2);
        let report = e.check_strong_convexity(1.0, 2000, 7);
        assert!(report.pass, "worst margin {}", report.worst_margin);
    }

    #[test]
    fn hexagon_fails_with_same_face_witness() {
        let h = hexagon();
        let report = h.check_strong_convexity(1e-3, 2000, 7);
        assert!(!report.pass);
        let (y, z, _) = report.witness.expect("failing check carries a witness");
        // Witness points lie on a common flat face: same face functional
        // attains the gauge at both.
        let hp = match &h {
            AsymNorm::Polyhedral(p) => p,
            _ => unreachable!(),
        };
        let fy = h.eval(&y);
        let fz = h.eval(&z);
        let shared = hp.faces.iter().any(|a| {
            (dot(a, y.as_slice()) - fy).abs() < 1e-9 * fy
                && (dot(a, z.as_slice()) - fz).abs() < 1e-9 * fz
        });
        assert!(shared, "witness {y:?} {z:?} not on a shared face");
    }

    #[test]
    fn se_constant_found_by_bisection() {
        let report = se_norm().strong_convexity_constant(2000, 7);
        assert!(report.pass);
        assert!(report.constant > 0.0);
    }

    #[test]
    fn lipschitz_quotients() {
        let e = AsymNorm::euclidean(2);
        let r = e.lipschitz_report_grad_dual(500, 11).unwrap();
        assert_relative_eq!(r.max_quotient, 2.0, epsilon = 1e-9);

        let q = AsymNorm::quadratic(vec![vec![4.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let r = q.lipschitz_report_grad_dual(500, 11).unwrap();
        assert!(r.max_quotient <= 2.0 + 1e-9, "got {}", r.max_quotient);

        assert!(hexagon().lipschitz_report_grad_dual(10, 0).is_err());
    }

    #[test]
    fn se_lipschitz_bounded_by_strong_convexity() {
        let se = se_norm();
        let conv = se.strong_convexity_constant(2000, 7);
        let lip = se.lipschitz_report_grad_dual(500, 11).unwrap();
        let c = conv.constant;
        assert!(
            lip.max_quotient <= 2.0 / (c * c),
            "quotient {} exceeds 2/c² = {}",
            lip.max_quotient,
            2.0 / (c * c)
        );
    }

    #[test]
    fn scaled_norm_consistency() {
        let s = AsymNorm::scaled(AsymNorm::euclidean(2), 2.0).unwrap();
        assert_relative_eq!(s.eval(&v2(3.0, 4.0)), 2.5, epsilon = 1e-14);
        assert_relative_eq!(s.dual_eval(&c2(1.0, 0.0)), 2.0, epsilon = 1e-14);
        let g = s.grad_dual_sq(&c2(1.0, 0.0)).unwrap();
        assert_relative_eq!(g[0], 8.0, epsilon = 1e-12);
        assert_relative_eq!(
            s.fenchel_conjugate_sq(&c2(1.0, 0.0)),
            s.dual_eval(&c2(1.0, 0.0)).powi(2) / 4.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn rejects_bad_constructions() {
        assert!(AsymNorm::polyhedral(vec![[1.0, 0.0], [0.0, 1.0]]).is_err());
        // Clockwise square.
        assert!(AsymNorm::polyhedral(vec![
            [1.0, 1.0],
            [1.0, -1.0],
            [-1.0, -1.0],
            [-1.0, 1.0]
        ])
        .is_err());
        assert!(AsymNorm::quadratic(vec![vec![1.0, 0.0], vec![0.0, -1.0]]).is_err());
        assert!(AsymNorm::quadratic(vec![vec![1.0, 0.5]]).is_err());
        // Origin outside the supporting circle.
        assert!(AsymNorm::arc_composite(vec![ArcSpec {
            center: [5.0, 0.0],
            radius: 1.0,
            polar_from: 0.0,
            polar_to: TAU,
        }])
        .is_err());
        assert!(AsymNorm::scaled(AsymNorm::euclidean(2), 0.0).is_err());
    }

    #[test]
    fn circle_as_single_arc_matches_euclidean() {
        let circle = AsymNorm::arc_composite(vec![ArcSpec {
            center: [0.0, 0.0],
            radius: 1.0,
            polar_from: 0.0,
            polar_to: TAU,
        }])
        .unwrap();
        let e = AsymNorm::euclidean(2);
        for (a, b) in [(0.3, 0.4), (-1.0, 2.0), (0.0, -3.0)] {
            assert_relative_eq!(circle.eval(&v2(a, b)), e.eval(&v2(a, b)), epsilon = 1e-12);
            assert_relative_eq!(
                circle.dual_eval(&c2(a, b)),
                e.dual_eval(&c2(a, b)),
                epsilon = 1e-12
            );
        }
    }
}
