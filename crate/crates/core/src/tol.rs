//! Engine-wide tolerance constants.
//!
//! Every acceptance threshold is pinned here so tests and the CLI verify
//! scenarios agree on the numbers.

/// Identities evaluated through closed forms (polyhedral vertex maxima,
/// quadratic inverses): rounding only.
pub const CLOSED_FORM: f64 = 1e-8;

/// Identities that go through an iterative 1-D maximization (arc-composite
/// conjugate gradients).
pub const ITERATIVE: f64 = 1e-4;

/// Relative Hamiltonian drift allowed along an integrated trajectory at the
/// default step.
pub const HAMILTONIAN_DRIFT: f64 = 1e-6;

/// Default integrator step.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Bisection window for switching events and domain exits, in time units.
pub const EVENT_TIME: f64 = 1e-10;

/// Angular tolerance for the 1-D boundary maximization.
pub const BOUNDARY_ANGLE: f64 = 1e-10;

/// Open-domain safety margin: points closer than this to the boundary count
/// as outside.
pub const DOMAIN_MARGIN: f64 = 1e-9;

/// Closed-form vs. numeric trajectory deviation (sup over samples).
pub const TRAJECTORY_DEVIATION: f64 = 1e-5;

/// Switch-time agreement between the integrator and the closed forms.
pub const SWITCH_TIME: f64 = 1e-6;

/// Fiber-scaling reproduction of trajectories.
pub const FIBER_SCALING: f64 = 1e-8;

/// Circle-fit residual for hyperbolic-plane geodesics.
pub const CIRCLE_FIT: f64 = 1e-4;

/// Oracle certification window: the grid distance may exceed the geodesic
/// length by the stencil quantization and undershoot only by snapping error.
pub const ORACLE_GAP_ABOVE: f64 = 0.03;
pub const ORACLE_GAP_BELOW: f64 = 1e-3;
