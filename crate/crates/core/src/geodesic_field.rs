//! The extended geodesic field on the slit cotangent bundle and its
//! event-driven integrator.
//!
//! For a phase point (x, α) the field maximizes the control Hamiltonian
//! H_u = α(X_u(x)) over the unit controls; the maximizer is the support
//! point of the fiber norm at α. Where the fiber ball is strictly convex
//! the field is single-valued and integrated as a smooth ODE. For
//! polyhedral balls the control is a vertex and integration is bang-bang:
//! a switching event fires when α crosses a normal-cone boundary, the event
//! time is bisected, and a new piece starts with the next vertex.
//!
//! The fiberwise-scaled field F*·ℰ reproduces the geodesic spray of smooth
//! Finsler geometry; [`integrate_spray_product`] integrates it and
//! [`reparameterize_to_unit`] undoes the constant time dilation between the
//! two flows.

use crate::asym_norm::{AsymNorm, SupportSet};
use crate::error::Error;
use crate::finsler_field::FinslerField;
use crate::vector::{dot, Covector, Vector};
use crate::{tol, Result};

/// A point of the slit cotangent bundle.
#[derive(Clone, Debug)]
pub struct CotangentState {
    pub x: Vector,
    pub alpha: Covector,
}

impl CotangentState {
    pub fn new(x: Vector, alpha: Covector) -> Result<Self> {
        if alpha.is_zero() {
            return Err(Error::ZeroCovector);
        }
        assert_eq!(x.dim(), alpha.dim(), "dimension mismatch");
        Ok(Self { x, alpha })
    }
}

/// Phase-space velocity (dx/dt, dα/dt).
#[derive(Clone, Debug)]
pub struct PhaseVelocity {
    pub dx: Vector,
    pub dalpha: Covector,
}

/// Value of the extended field at a phase point: a single velocity, or the
/// face descriptor with both extreme-vertex velocities where the field is
/// set-valued.
#[derive(Clone, Debug)]
pub enum ExtendedFieldValue {
    Single(PhaseVelocity),
    Face {
        endpoints: (Vector, Vector),
        extremes: (PhaseVelocity, PhaseVelocity),
    },
}

/// Active control of a trajectory piece.
#[derive(Clone, Debug, PartialEq)]
pub enum ControlDescriptor {
    /// A vertex of the (base) polyhedral unit ball.
    Vertex { index: usize, direction: Vector },
    /// Strictly convex fiber: the support point is recomputed pointwise.
    Smooth,
}

impl ControlDescriptor {
    /// Integer id used in exports: vertex index, or −1 for smooth control.
    pub fn id(&self) -> i64 {
        match self {
            ControlDescriptor::Vertex { index, .. } => *index as i64,
            ControlDescriptor::Smooth => -1,
        }
    }
}

/// One recorded phase point with its velocity and Hamiltonian value.
#[derive(Clone, Debug)]
pub struct PhaseSample {
    pub t: f64,
    pub x: Vector,
    pub alpha: Covector,
    pub velocity: Vector,
    pub hamiltonian: f64,
}

/// A maximal time interval with a constant control descriptor.
#[derive(Clone, Debug)]
pub struct TrajectoryPiece {
    pub control: ControlDescriptor,
    pub samples: Vec<PhaseSample>,
}

impl TrajectoryPiece {
    pub fn t_start(&self) -> f64 {
        self.samples.first().map_or(0.0, |s| s.t)
    }

    pub fn t_end(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.t)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EventKind {
    Switch { from: usize, to: usize },
    DomainExit,
}

#[derive(Clone, Debug)]
pub struct TrajectoryEvent {
    pub t: f64,
    pub kind: EventKind,
}

/// A piecewise record of an integrated (or analytic) phase curve.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub pieces: Vec<TrajectoryPiece>,
    pub events: Vec<TrajectoryEvent>,
    /// The Hamiltonian constant recorded at the initial state.
    pub c0: f64,
    /// Largest observed |H − C₀| / C₀ over the samples.
    pub max_drift: f64,
}

impl Trajectory {
    pub fn first_sample(&self) -> &PhaseSample {
        self.pieces
            .first()
            .and_then(|p| p.samples.first())
            .expect("a trajectory has at least one sample")
    }

    pub fn last_sample(&self) -> &PhaseSample {
        self.pieces
            .last()
            .and_then(|p| p.samples.last())
            .expect("a trajectory has at least one sample")
    }

    /// All samples in traversal order (piece boundaries repeat their shared
    /// state, once per adjacent piece).
    pub fn samples(&self) -> impl Iterator<Item = &PhaseSample> {
        self.pieces.iter().flat_map(|p| p.samples.iter())
    }

    pub fn duration(&self) -> f64 {
        (self.last_sample().t - self.first_sample().t).abs()
    }

    /// Linear interpolation of (x, α) at time t along the traversal.
    pub fn state_at(&self, t: f64) -> (Vector, Covector) {
        let samples: Vec<&PhaseSample> = self.samples().collect();
        let forward = samples.last().unwrap().t >= samples[0].t;
        let mut prev = samples[0];
        for s in &samples[1..] {
            let passed = if forward { s.t >= t } else { s.t <= t };
            if passed {
                let span = s.t - prev.t;
                let w = if span.abs() < 1e-300 {
                    0.0
                } else {
                    (t - prev.t) / span
                };
                let lerp = |a: &[f64], b: &[f64]| -> Vec<f64> {
                    a.iter().zip(b).map(|(p, q)| p + w * (q - p)).collect()
                };
                return (
                    Vector::new(lerp(prev.x.as_slice(), s.x.as_slice())),
                    Covector::new(lerp(prev.alpha.as_slice(), s.alpha.as_slice())),
                );
            }
            prev = s;
        }
        let last = samples.last().unwrap();
        (last.x.clone(), last.alpha.clone())
    }

    /// Recompute c0/drift bookkeeping from the recorded samples.
    pub(crate) fn finish(mut self) -> Self {
        let c0 = self.first_sample().hamiltonian;
        let mut drift: f64 = 0.0;
        for s in self.samples() {
            drift = drift.max((s.hamiltonian - c0).abs() / c0.abs().max(1e-300));
        }
        self.c0 = c0;
        self.max_drift = drift;
        self
    }
}

/// Vertex choice when the support set is a face.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum FacePolicy {
    /// Take the extreme the covector rotates into: the clockwise end of the
    /// face forward in time, the counterclockwise end backward.
    #[default]
    ClockwiseNext,
    /// Caller-selected vertex index of the base polyhedral ball.
    Vertex(usize),
    /// Refuse face starts.
    Forbid,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct IntegrateOpts {
    pub face_policy: FacePolicy,
}

/// H_u(x, α) = α(X_u(x)) for a fixed control direction u.
pub fn hamiltonian(ff: &FinslerField, x: &Vector, alpha: &Covector, u: &Vector) -> Result<f64> {
    let xu = ff.unit_vector(x, u)?;
    Ok(alpha.pairing(&xu))
}

/// The maximized Hamiltonian and its maximizer set.
#[derive(Clone, Debug)]
pub struct MaxHamiltonian {
    pub value: f64,
    pub support: SupportSet,
}

/// max_u H_u(x, α) = F*(x, α), together with the support set attaining it.
pub fn max_hamiltonian(ff: &FinslerField, x: &Vector, alpha: &Covector) -> Result<MaxHamiltonian> {
    let fiber = ff.fiber_norm(x)?;
    let support = fiber.support_set(alpha)?;
    Ok(MaxHamiltonian {
        value: fiber.dual_eval(alpha),
        support,
    })
}

/// Unit support vector of the fiber norm for strictly convex fibers.
fn smooth_support(ff: &FinslerField, x: &[f64], alpha: &[f64]) -> Option<Vec<f64>> {
    match ff {
        FinslerField::QuasiHyperbolic { base, .. } => base
            .support_point_slice(alpha)
            .map(|v| v.iter().map(|c| c * x[1]).collect()),
        FinslerField::Constant { norm, .. } => norm.support_point_slice(alpha),
        FinslerField::Riemannian { metric, .. } => {
            let ginv = metric.inverse_matrix(x);
            let n = alpha.len();
            let w: Vec<f64> = (0..n)
                .map(|i| (0..n).map(|k| ginv[(i, k)] * alpha[k]).sum())
                .collect();
            let fstar = dot(alpha, &w).max(0.0).sqrt();
            Some(w.iter().map(|c| c / fstar).collect())
        }
    }
}

/// Phase velocity for a frozen control direction u (any positive multiple
/// of the intended unit vector): dx = u / F(x, u), dα = α(dx)·d_hF(x,u)/F(x,u).
fn frozen_velocity(ff: &FinslerField, x: &[f64], alpha: &[f64], u: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let f = ff.eval_unchecked(x, u);
    let dx: Vec<f64> = u.iter().map(|c| c / f).collect();
    let h = dot(alpha, &dx);
    let dh = ff.horizontal_derivative_unchecked(x, u);
    let dalpha: Vec<f64> = dh.iter().map(|d| h * d / f).collect();
    (dx, dalpha)
}

/// ℰ(x, α): the phase velocity, or the face descriptor with both extremes.
pub fn extended_field(ff: &FinslerField, state: &CotangentState) -> Result<ExtendedFieldValue> {
    ff.check_domain(state.x.as_slice())?;
    if state.alpha.is_zero() {
        return Err(Error::ZeroCovector);
    }
    let x = state.x.as_slice();
    let a = state.alpha.as_slice();
    if let Some(v) = smooth_support(ff, x, a) {
        let (dx, da) = frozen_velocity(ff, x, a, &v);
        return Ok(ExtendedFieldValue::Single(PhaseVelocity {
            dx: Vector::new(dx),
            dalpha: Covector::new(da),
        }));
    }
    let base = ff
        .base_norm()
        .and_then(|n| n.base_polyhedral())
        .expect("non-smooth support implies a polyhedral base");
    let run = base.argmax_run(a);
    if run.len() == 1 {
        let u = base.vertex(run[0]);
        let (dx, da) = frozen_velocity(ff, x, a, &u);
        return Ok(ExtendedFieldValue::Single(PhaseVelocity {
            dx: Vector::new(dx),
            dalpha: Covector::new(da),
        }));
    }
    let (i, j) = (run[0], *run.last().unwrap());
    let make = |idx: usize| {
        let (dx, da) = frozen_velocity(ff, x, a, &base.vertex(idx));
        PhaseVelocity {
            dx: Vector::new(dx),
            dalpha: Covector::new(da),
        }
    };
    let scale = fiber_scale(ff, x);
    let endpoint = |idx: usize| {
        let v = base.vertex(idx);
        Vector::new(vec![v[0] * scale, v[1] * scale])
    };
    Ok(ExtendedFieldValue::Face {
        endpoints: (endpoint(i), endpoint(j)),
        extremes: (make(i), make(j)),
    })
}

fn fiber_scale(ff: &FinslerField, x: &[f64]) -> f64 {
    match ff {
        FinslerField::QuasiHyperbolic { .. } => x[1],
        _ => 1.0,
    }
}

impl FinslerField {
    pub(crate) fn base_norm(&self) -> Option<&AsymNorm> {
        match self {
            FinslerField::QuasiHyperbolic { base, .. } => Some(base),
            FinslerField::Constant { norm, .. } => Some(norm),
            FinslerField::Riemannian { .. } => None,
        }
    }
}

type Phase = (Vec<f64>, Vec<f64>);

fn rk4_step<F>(x: &[f64], a: &[f64], h: f64, rhs: &F) -> Option<Phase>
where
    F: Fn(&[f64], &[f64]) -> Option<Phase>,
{
    let shift = |base: &[f64], k: &[f64], s: f64| -> Vec<f64> {
        base.iter().zip(k).map(|(b, kv)| b + s * kv).collect()
    };
    let (k1x, k1a) = rhs(x, a)?;
    let (k2x, k2a) = rhs(&shift(x, &k1x, h / 2.0), &shift(a, &k1a, h / 2.0))?;
    let (k3x, k3a) = rhs(&shift(x, &k2x, h / 2.0), &shift(a, &k2a, h / 2.0))?;
    let (k4x, k4a) = rhs(&shift(x, &k3x, h), &shift(a, &k3a, h))?;
    let combine = |base: &[f64], k1: &[f64], k2: &[f64], k3: &[f64], k4: &[f64]| -> Vec<f64> {
        base.iter()
            .enumerate()
            .map(|(i, b)| b + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect()
    };
    Some((
        combine(x, &k1x, &k2x, &k3x, &k4x),
        combine(a, &k1a, &k2a, &k3a, &k4a),
    ))
}

struct Integrator<'a> {
    ff: &'a FinslerField,
    /// Scale the extended field by F*(x, α) (the spray product) when true.
    spray_product: bool,
}

impl<'a> Integrator<'a> {
    /// Right-hand side under a frozen vertex control.
    fn vertex_rhs(&self, u: [f64; 2]) -> impl Fn(&[f64], &[f64]) -> Option<Phase> + '_ {
        move |x: &[f64], a: &[f64]| {
            if !self.ff.domain().contains(x) {
                return None;
            }
            Some(frozen_velocity(self.ff, x, a, &u))
        }
    }

    /// Right-hand side with pointwise support recomputation (strictly
    /// convex fibers), optionally scaled by F*.
    fn smooth_rhs(&self) -> impl Fn(&[f64], &[f64]) -> Option<Phase> + '_ {
        move |x: &[f64], a: &[f64]| {
            if !self.ff.domain().contains(x) {
                return None;
            }
            let v = smooth_support(self.ff, x, a)?;
            let (dx, da) = frozen_velocity(self.ff, x, a, &v);
            if self.spray_product {
                let h = dot(a, &dx);
                Some((
                    dx.iter().map(|c| c * h).collect(),
                    da.iter().map(|c| c * h).collect(),
                ))
            } else {
                Some((dx, da))
            }
        }
    }
}

fn sample(t: f64, x: &[f64], a: &[f64], velocity: Vec<f64>, hamiltonian: f64) -> PhaseSample {
    PhaseSample {
        t,
        x: Vector::new(x.to_vec()),
        alpha: Covector::new(a.to_vec()),
        velocity: Vector::new(velocity),
        hamiltonian,
    }
}

fn resolve_face(run: &[usize], policy: FacePolicy, forward: bool) -> Result<usize> {
    match policy {
        FacePolicy::ClockwiseNext => Ok(if forward { run[0] } else { *run.last().unwrap() }),
        FacePolicy::Vertex(i) => Ok(i),
        FacePolicy::Forbid => Err(Error::NoProgress),
    }
}

/// Integrates the extended geodesic field from `state0` over `t_span` with
/// fixed-step RK4. Polyhedral bases run bang-bang with bisected switching
/// events; leaving the chart domain truncates the trajectory and records a
/// domain-exit event.
pub fn integrate_e(
    ff: &FinslerField,
    state0: &CotangentState,
    t_span: (f64, f64),
    step: f64,
    opts: IntegrateOpts,
) -> Result<Trajectory> {
    integrate_impl(ff, state0, t_span, step, opts, false)
}

/// Integrates F*(x, α) · ℰ(x, α), the geodesic-spray generalization. The
/// projected curve runs at constant speed F = C₀ instead of unit speed.
pub fn integrate_spray_product(
    ff: &FinslerField,
    state0: &CotangentState,
    t_span: (f64, f64),
    step: f64,
) -> Result<Trajectory> {
    if !ff.is_strictly_convex() {
        return Err(Error::NotStrictlyConvex);
    }
    integrate_impl(ff, state0, t_span, step, IntegrateOpts::default(), true)
}

fn integrate_impl(
    ff: &FinslerField,
    state0: &CotangentState,
    t_span: (f64, f64),
    step: f64,
    opts: IntegrateOpts,
    spray_product: bool,
) -> Result<Trajectory> {
    if !(step > 0.0) {
        return Err(Error::Config(format!("step must be positive, got {step}")));
    }
    ff.check_domain(state0.x.as_slice())?;
    if state0.alpha.is_zero() {
        return Err(Error::ZeroCovector);
    }

    let (t0, t1) = t_span;
    let forward = t1 >= t0;
    let dir = if forward { 1.0 } else { -1.0 };
    let total = (t1 - t0).abs();

    let integrator = Integrator { ff, spray_product };
    let base_poly = ff.base_norm().and_then(|n| n.base_polyhedral());

    let mut t = t0;
    let mut x = state0.x.as_slice().to_vec();
    let mut a = state0.alpha.as_slice().to_vec();

    let mut pieces: Vec<TrajectoryPiece> = Vec::new();
    let mut events: Vec<TrajectoryEvent> = Vec::new();

    // Resolve the initial control.
    let mut cur_vertex: Option<usize> = match base_poly {
        Some(p) => {
            let run = p.argmax_run(&a);
            Some(if run.len() == 1 {
                run[0]
            } else {
                resolve_face(&run, opts.face_policy, forward)?
            })
        }
        None => None,
    };

    let eval_state = |x: &[f64], a: &[f64], cur: Option<usize>| -> Option<(Vec<f64>, f64)> {
        let (dx, _) = match cur {
            Some(k) => {
                let p = base_poly.expect("vertex control implies polyhedral base");
                (integrator.vertex_rhs(p.vertex(k)))(x, a)?
            }
            None => (integrator.smooth_rhs())(x, a)?,
        };
        // Report the unit-control Hamiltonian even for the spray product,
        // where dx is already scaled by it.
        let h = dot(a, &dx);
        let h_unit = if spray_product { h.sqrt() } else { h };
        Some((dx, h_unit))
    };

    let (v0, h0) = eval_state(&x, &a, cur_vertex).ok_or(Error::OutOfDomain {
        point: x.clone(),
    })?;
    let control_of = |cur: Option<usize>| match cur {
        Some(k) => ControlDescriptor::Vertex {
            index: k,
            direction: Vector::new(base_poly.unwrap().vertex(k).to_vec()),
        },
        None => ControlDescriptor::Smooth,
    };
    let mut piece = TrajectoryPiece {
        control: control_of(cur_vertex),
        samples: vec![sample(t, &x, &a, v0, h0)],
    };

    let mut remaining = total;
    while remaining > tol::EVENT_TIME {
        let h_step = dir * step.min(remaining);
        let stepped = match cur_vertex {
            Some(k) => {
                let rhs = integrator.vertex_rhs(base_poly.unwrap().vertex(k));
                rk4_step(&x, &a, h_step, &rhs)
            }
            None => rk4_step(&x, &a, h_step, &integrator.smooth_rhs()),
        }
        .filter(|(xn, _)| ff.domain().contains(xn));

        let (xn, an) = match stepped {
            Some(v) => v,
            None => {
                // Bisect the exit fraction and truncate at the boundary.
                let advance = |s: f64| -> Option<Phase> {
                    match cur_vertex {
                        Some(k) => {
                            let rhs = integrator.vertex_rhs(base_poly.unwrap().vertex(k));
                            rk4_step(&x, &a, s * h_step, &rhs)
                        }
                        None => rk4_step(&x, &a, s * h_step, &integrator.smooth_rhs()),
                    }
                    .filter(|(xn, _)| ff.domain().contains(xn))
                };
                let mut lo = 0.0;
                let mut hi = 1.0;
                while (hi - lo) * step > tol::EVENT_TIME {
                    let mid = 0.5 * (lo + hi);
                    if advance(mid).is_some() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                if lo > 0.0 {
                    let (xe, ae) = advance(lo).expect("lo fraction stays inside");
                    let te = t + lo * h_step;
                    if let Some((v, hh)) = eval_state(&xe, &ae, cur_vertex) {
                        piece.samples.push(sample(te, &xe, &ae, v, hh));
                    }
                    events.push(TrajectoryEvent {
                        t: te,
                        kind: EventKind::DomainExit,
                    });
                } else {
                    events.push(TrajectoryEvent {
                        t,
                        kind: EventKind::DomainExit,
                    });
                }
                pieces.push(piece);
                return Ok(Trajectory {
                    pieces,
                    events,
                    c0: 0.0,
                    max_drift: 0.0,
                }
                .finish());
            }
        };

        // Switching event: the frozen vertex stops being the maximizer.
        if let (Some(k), Some(p)) = (cur_vertex, base_poly) {
            let tie = p.tie_tolerance(&an);
            if p.switch_margin(&an, k) > tie {
                let rhs = integrator.vertex_rhs(p.vertex(k));
                let margin_at = |s: f64| -> Option<f64> {
                    rk4_step(&x, &a, s * h_step, &rhs).map(|(_, am)| p.switch_margin(&am, k))
                };
                let mut lo = 0.0;
                let mut hi = 1.0;
                while (hi - lo) * step > tol::EVENT_TIME {
                    let mid = 0.5 * (lo + hi);
                    match margin_at(mid) {
                        Some(m) if m <= 0.0 => lo = mid,
                        _ => hi = mid,
                    }
                }
                let s_event = 0.5 * (lo + hi);
                let (xe, ae) =
                    rk4_step(&x, &a, s_event * h_step, &rhs).expect("event fraction is valid");
                let te = t + s_event * h_step;
                if let Some((v, hh)) = eval_state(&xe, &ae, cur_vertex) {
                    piece.samples.push(sample(te, &xe, &ae, v, hh));
                }

                // One-sided probe a little past the event decides the next
                // vertex; a face there falls back to the face policy.
                let eps = 10.0 * step * 1e-3;
                let probe = rk4_step(&xe, &ae, dir * eps, &rhs);
                let next = match probe {
                    Some((_, ap)) => {
                        let run = p.argmax_run(&ap);
                        if run.len() == 1 {
                            run[0]
                        } else {
                            resolve_face(&run, opts.face_policy, forward)?
                        }
                    }
                    None => resolve_face(&p.argmax_run(&ae), opts.face_policy, forward)?,
                };
                events.push(TrajectoryEvent {
                    t: te,
                    kind: EventKind::Switch { from: k, to: next },
                });

                pieces.push(piece);
                cur_vertex = Some(next);
                t = te;
                x = xe;
                a = ae;
                let (v, hh) = eval_state(&x, &a, cur_vertex).ok_or(Error::OutOfDomain {
                    point: x.clone(),
                })?;
                piece = TrajectoryPiece {
                    control: control_of(cur_vertex),
                    samples: vec![sample(t, &x, &a, v, hh)],
                };
                remaining = total - (t - t0).abs();
                continue;
            }
        }

        t += h_step;
        x = xn;
        a = an;
        remaining = total - (t - t0).abs();
        let (v, hh) = eval_state(&x, &a, cur_vertex).ok_or(Error::OutOfDomain {
            point: x.clone(),
        })?;
        piece.samples.push(sample(t, &x, &a, v, hh));
    }
    pieces.push(piece);
    Ok(Trajectory {
        pieces,
        events,
        c0: 0.0,
        max_drift: 0.0,
    }
    .finish())
}

/// Rescales a constant-speed trajectory of F*·ℰ into the unit-speed
/// parameterization of ℰ: timestamps dilate by C₀ and velocities shrink by
/// it, so the projected curve satisfies F(x, x′) = 1.
pub fn reparameterize_to_unit(traj: &Trajectory) -> Result<Trajectory> {
    let drift_tol = tol::HAMILTONIAN_DRIFT * 10.0;
    if traj.max_drift > drift_tol {
        return Err(Error::NonConstantHamiltonian {
            drift: traj.max_drift,
            tol: drift_tol,
        });
    }
    let c = traj.c0;
    let t0 = traj.first_sample().t;
    let pieces = traj
        .pieces
        .iter()
        .map(|p| TrajectoryPiece {
            control: p.control.clone(),
            samples: p
                .samples
                .iter()
                .map(|s| PhaseSample {
                    t: t0 + (s.t - t0) * c,
                    x: s.x.clone(),
                    alpha: s.alpha.clone(),
                    velocity: s.velocity.scaled(1.0 / c),
                    hamiltonian: s.hamiltonian,
                })
                .collect(),
        })
        .collect();
    let events = traj
        .events
        .iter()
        .map(|e| TrajectoryEvent {
            t: t0 + (e.t - t0) * c,
            kind: e.kind.clone(),
        })
        .collect();
    Ok(Trajectory {
        pieces,
        events,
        c0: traj.c0,
        max_drift: traj.max_drift,
    })
}

/// ∫ F(x(t), x′(t)) dt over the recorded samples: composite Simpson on the
/// uniform runs, trapezoid on the leftover interval of each piece.
pub fn path_length(ff: &FinslerField, traj: &Trajectory) -> f64 {
    let mut total = 0.0;
    for piece in &traj.pieces {
        let s = &piece.samples;
        if s.len() < 2 {
            continue;
        }
        let integrand: Vec<f64> = s
            .iter()
            .map(|p| ff.eval_unchecked(p.x.as_slice(), p.velocity.as_slice()))
            .collect();
        let mut i = 0;
        while i + 2 < s.len() {
            let h1 = s[i + 1].t - s[i].t;
            let h2 = s[i + 2].t - s[i + 1].t;
            if (h1 - h2).abs() <= 1e-9 * h1.abs().max(h2.abs()) {
                // Uniform pair: Simpson.
                total += (integrand[i] + 4.0 * integrand[i + 1] + integrand[i + 2]).abs()
                    * h1.abs()
                    / 3.0;
                i += 2;
            } else {
                total += 0.5 * (integrand[i] + integrand[i + 1]) * h1.abs();
                i += 1;
            }
        }
        while i + 1 < s.len() {
            let h1 = s[i + 1].t - s[i].t;
            total += 0.5 * (integrand[i] + integrand[i + 1]) * h1.abs();
            i += 1;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finsler_field::{ChartDomain, RiemannianMetric};
    use crate::vector::{c2, v2};
    use approx::assert_relative_eq;

    fn hexagon() -> AsymNorm {
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

    fn qh_hexagon() -> FinslerField {
        FinslerField::quasi_hyperbolic(hexagon()).unwrap()
    }

    fn euclidean_plane() -> FinslerField {
        FinslerField::constant(
            AsymNorm::euclidean(2),
            ChartDomain::new_box(vec![(-100.0, 100.0), (-100.0, 100.0)]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn hamiltonian_examples() {
        let f = qh_hexagon();
        assert_relative_eq!(
            hamiltonian(&f, &v2(0.0, 1.0), &c2(0.0, 1.0), &v2(0.0, 1.0)).unwrap(),
            1.0,
            epsilon = 1e-14
        );
        // F_e(1, 0) = 2/√3 by ray–hexagon intersection, so H = 2/(2/√3) = √3.
        assert_relative_eq!(
            hamiltonian(&f, &v2(0.0, 2.0), &c2(1.0, 0.0), &v2(1.0, 0.0)).unwrap(),
            3.0_f64.sqrt(),
            epsilon = 1e-14
        );
        // α orthogonal to X_u.
        assert_relative_eq!(
            hamiltonian(&f, &v2(0.0, 1.0), &c2(1.0, 0.0), &v2(0.0, 1.0)).unwrap(),
            0.0
        );
    }

    #[test]
    fn max_hamiltonian_examples() {
        let f = qh_hexagon();
        let m = max_hamiltonian(&f, &v2(0.0, 1.0), &c2(1.0, 0.0)).unwrap();
        assert_relative_eq!(m.value, 3.0_f64.sqrt() / 2.0, epsilon = 1e-14);
        assert!(matches!(m.support, SupportSet::Face { .. }));

        let m = max_hamiltonian(&f, &v2(0.0, 2.0), &c2(1.0, 0.0)).unwrap();
        assert_relative_eq!(m.value, 3.0_f64.sqrt(), epsilon = 1e-14);

        let e = euclidean_plane();
        let m = max_hamiltonian(&e, &v2(0.0, 0.0), &c2(3.0, 4.0)).unwrap();
        assert_relative_eq!(m.value, 5.0, epsilon = 1e-14);
        match m.support {
            SupportSet::Point(v) => {
                assert_relative_eq!(v[0], 0.6, epsilon = 1e-14);
                assert_relative_eq!(v[1], 0.8, epsilon = 1e-14);
            }
            other => panic!("expected point, got {other:?}"),
        }
    }

    #[test]
    fn extended_field_point_cases() {
        let e = euclidean_plane();
        let st = CotangentState::new(v2(0.0, 0.0), c2(1.0, 0.0)).unwrap();
        match extended_field(&e, &st).unwrap() {
            ExtendedFieldValue::Single(v) => {
                assert_relative_eq!(v.dx[0], 1.0);
                assert_relative_eq!(v.dx[1], 0.0);
                assert_relative_eq!(v.dalpha[0], 0.0);
                assert_relative_eq!(v.dalpha[1], 0.0);
            }
            other => panic!("expected single velocity, got {other:?}"),
        }

        let f = qh_hexagon();
        let st = CotangentState::new(v2(0.0, 1.0), c2(0.0, 1.0)).unwrap();
        match extended_field(&f, &st).unwrap() {
            ExtendedFieldValue::Single(v) => {
                assert_relative_eq!(v.dx[0], 0.0);
                assert_relative_eq!(v.dx[1], 1.0, epsilon = 1e-14);
                assert_relative_eq!(v.dalpha[0], 0.0);
                assert_relative_eq!(v.dalpha[1], -1.0, epsilon = 1e-14);
            }
            other => panic!("expected single velocity, got {other:?}"),
        }
    }

    #[test]
    fn extended_field_face_case() {
        let f = qh_hexagon();
        let st = CotangentState::new(v2(0.0, 1.0), c2(1.0, 0.0)).unwrap();
        match extended_field(&f, &st).unwrap() {
            ExtendedFieldValue::Face {
                endpoints: (ea, eb),
                extremes: (va, vb),
            } => {
                let s = 3.0_f64.sqrt() / 2.0;
                assert_relative_eq!(ea[0], s, epsilon = 1e-14);
                assert_relative_eq!(ea[1], -0.5, epsilon = 1e-14);
                assert_relative_eq!(eb[1], 0.5, epsilon = 1e-14);
                // Extreme velocities project to the unit face endpoints.
                assert_relative_eq!(va.dx[1], -0.5, epsilon = 1e-14);
                assert_relative_eq!(vb.dx[1], 0.5, epsilon = 1e-14);
            }
            other => panic!("expected face, got {other:?}"),
        }
    }

    #[test]
    fn integrates_vertical_exponential() {
        let f = qh_hexagon();
        let st = CotangentState::new(v2(0.0, 1.0), c2(0.0, 1.0)).unwrap();
        let traj = integrate_e(&f, &st, (0.0, 1.0), 1e-3, IntegrateOpts::default()).unwrap();
        let end = traj.last_sample();
        assert_relative_eq!(end.x[0], 0.0, epsilon = 1e-12);
        assert_relative_eq!(end.x[1], std::f64::consts::E, epsilon = 1e-6);
        assert_relative_eq!(end.alpha[1], 1.0 / std::f64::consts::E, epsilon = 1e-6);
        assert!(traj.max_drift <= tol::HAMILTONIAN_DRIFT);
        assert!(traj.events.is_empty());
    }

    #[test]
    fn integrates_straight_line() {
        let e = euclidean_plane();
        let st = CotangentState::new(v2(0.0, 0.0), c2(1.0, 0.0)).unwrap();
        let traj = integrate_e(&e, &st, (0.0, 2.0), 1e-3, IntegrateOpts::default()).unwrap();
        let end = traj.last_sample();
        assert_relative_eq!(end.x[0], 2.0, epsilon = 1e-10);
        assert_relative_eq!(end.x[1], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn hexagon_switching_at_2ln2() {
        let f = qh_hexagon();
        // Starts on the cone boundary: t₂ = 0, the side piece runs to
        // t₃ = 2 ln 2 where α₂ reaches zero.
        let st = CotangentState::new(v2(0.0, 1.0), c2(1.0, 3.0_f64.sqrt())).unwrap();
        let traj = integrate_e(&f, &st, (0.0, 2.5), 1e-3, IntegrateOpts::default()).unwrap();
        let switches: Vec<&TrajectoryEvent> = traj
            .events
            .iter()
            .filter(|e| matches!(e.kind, EventKind::Switch { .. }))
            .collect();
        assert!(!switches.is_empty(), "no switch recorded");
        let t3 = 2.0 * 2.0_f64.ln();
        assert_relative_eq!(switches[0].t, t3, epsilon = 1e-6);
        // First piece follows the (√3/2, 1/2) vertex.
        match &traj.pieces[0].control {
            ControlDescriptor::Vertex { direction, .. } => {
                assert_relative_eq!(direction[0], 3.0_f64.sqrt() / 2.0, epsilon = 1e-14);
                assert_relative_eq!(direction[1], 0.5, epsilon = 1e-14);
            }
            other => panic!("expected vertex control, got {other:?}"),
        }
        // At the event, α lies on the normal-cone boundary between the two
        // vertices involved.
        let ev_state = traj.pieces[1].samples.first().unwrap();
        let va = v2(3.0_f64.sqrt() / 2.0, 0.5);
        let vb = v2(3.0_f64.sqrt() / 2.0, -0.5);
        assert_relative_eq!(
            ev_state.alpha.pairing(&va),
            ev_state.alpha.pairing(&vb),
            epsilon = 1e-8
        );
    }

    #[test]
    fn face_policy_forbid_errors() {
        let f = qh_hexagon();
        let st = CotangentState::new(v2(0.0, 1.0), c2(1.0, 0.0)).unwrap();
        let opts = IntegrateOpts {
            face_policy: FacePolicy::Forbid,
        };
        assert!(matches!(
            integrate_e(&f, &st, (0.0, 1.0), 1e-3, opts),
            Err(Error::NoProgress)
        ));
    }

    #[test]
    fn domain_exit_truncates() {
        let e = FinslerField::constant(
            AsymNorm::euclidean(2),
            ChartDomain::new_box(vec![(-1.0, 1.0), (-1.0, 1.0)]).unwrap(),
        )
        .unwrap();
        let st = CotangentState::new(v2(0.0, 0.0), c2(1.0, 0.0)).unwrap();
        let traj = integrate_e(&e, &st, (0.0, 5.0), 1e-3, IntegrateOpts::default()).unwrap();
        assert!(matches!(
            traj.events.last().map(|e| &e.kind),
            Some(EventKind::DomainExit)
        ));
        let end = traj.last_sample();
        assert!(end.x[0] <= 1.0);
        assert!(end.x[0] > 1.0 - 1e-6);
    }

    #[test]
    fn spray_product_scales_straight_line() {
        let e = euclidean_plane();
        let st = CotangentState::new(v2(0.0, 0.0), c2(2.0, 0.0)).unwrap();
        let traj = integrate_spray_product(&e, &st, (0.0, 1.0), 1e-3).unwrap();
        let end = traj.last_sample();
        assert_relative_eq!(end.x[0], 2.0, epsilon = 1e-10);
        assert_relative_eq!(traj.c0, 2.0, epsilon = 1e-12);

        // Reparameterize back to unit speed: half the time scale.
        let unit = reparameterize_to_unit(&traj).unwrap();
        assert_relative_eq!(unit.duration(), 2.0, epsilon = 1e-10);
        let end = unit.last_sample();
        assert_relative_eq!(
            e.eval_unchecked(end.x.as_slice(), end.velocity.as_slice()),
            1.0,
            epsilon = 1e-10
        );

        assert!(matches!(
            integrate_spray_product(&qh_hexagon(), &st, (0.0, 1.0), 1e-3),
            Err(Error::NotStrictlyConvex)
        ));
    }

    #[test]
    fn reparameterize_identity_at_unit_hamiltonian() {
        let e = euclidean_plane();
        let st = CotangentState::new(v2(0.0, 0.0), c2(1.0, 0.0)).unwrap();
        let traj = integrate_spray_product(&e, &st, (0.0, 1.5), 1e-3).unwrap();
        let unit = reparameterize_to_unit(&traj).unwrap();
        assert_relative_eq!(unit.duration(), traj.duration(), epsilon = 1e-12);
    }

    #[test]
    fn path_length_examples() {
        let f = qh_hexagon();
        let st = CotangentState::new(v2(0.0, 1.0), c2(0.0, 1.0)).unwrap();
        let traj = integrate_e(&f, &st, (0.0, 3.0), 1e-3, IntegrateOpts::default()).unwrap();
        // Unit-speed trajectory over [0, 3].
        assert_relative_eq!(path_length(&f, &traj), 3.0, epsilon = 1e-8);
        // Vertical segment from x² = 1 to x² = e³ has length ln(e³/1) = 3.
        assert_relative_eq!(traj.last_sample().x[1], 3.0_f64.exp(), epsilon = 1e-5);

        let e = euclidean_plane();
        let st = CotangentState::new(v2(0.0, 0.0), c2(0.6, 0.8)).unwrap();
        let traj = integrate_e(&e, &st, (0.0, 5.0), 1e-3, IntegrateOpts::default()).unwrap();
        let end = traj.last_sample();
        assert_relative_eq!(end.x[0], 3.0, epsilon = 1e-9);
        assert_relative_eq!(end.x[1], 4.0, epsilon = 1e-9);
        assert_relative_eq!(path_length(&e, &traj), 5.0, epsilon = 1e-9);
    }

    #[test]
    fn fiber_scaling_invariance() {
        let f = qh_hexagon();
        let st = CotangentState::new(v2(0.2, 1.1), c2(1.0, 0.7)).unwrap();
        let base = integrate_e(&f, &st, (0.0, 1.0), 1e-3, IntegrateOpts::default()).unwrap();
        for lambda in [0.1, 3.0, 10.0] {
            let st_l =
                CotangentState::new(v2(0.2, 1.1), c2(lambda, 0.7 * lambda)).unwrap();
            let scaled = integrate_e(&f, &st_l, (0.0, 1.0), 1e-3, IntegrateOpts::default())
                .unwrap();
            let bs: Vec<&PhaseSample> = base.samples().collect();
            let ss: Vec<&PhaseSample> = scaled.samples().collect();
            assert_eq!(bs.len(), ss.len());
            for (b, s) in bs.iter().zip(&ss) {
                assert!((b.t - s.t).abs() <= 1e-8);
                for i in 0..2 {
                    assert!((b.x[i] - s.x[i]).abs() <= tol::FIBER_SCALING);
                    assert!((lambda * b.alpha[i] - s.alpha[i]).abs() <= tol::FIBER_SCALING * lambda);
                }
            }
        }
    }

    #[test]
    fn smooth_field_unit_speed_and_alpha1_constant() {
        let hy = FinslerField::riemannian(
            RiemannianMetric::HalfPlaneHyperbolic,
            ChartDomain::upper_half_plane(),
        )
        .unwrap();
        let st = CotangentState::new(v2(0.0, 1.0), c2(1.0, 0.3)).unwrap();
        let traj = integrate_e(&hy, &st, (0.0, 2.0), 1e-3, IntegrateOpts::default()).unwrap();
        assert!(traj.max_drift <= tol::HAMILTONIAN_DRIFT);
        for s in traj.samples() {
            assert_relative_eq!(
                hy.eval_unchecked(s.x.as_slice(), s.velocity.as_slice()),
                1.0,
                epsilon = 1e-9
            );
            assert_relative_eq!(s.alpha[0], 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn zero_covector_rejected() {
        assert!(matches!(
            CotangentState::new(v2(0.0, 1.0), c2(0.0, 0.0)),
            Err(Error::ZeroCovector)
        ));
    }
}
