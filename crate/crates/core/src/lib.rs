//! Numerical engine for geodesics of C⁰-Finsler structures of Pontryagin type.
//!
//! The engine works on the slit cotangent bundle: a field of asymmetric norms
//! over a chart domain induces a maximized control Hamiltonian whose
//! (set-valued) Hamiltonian field is integrated with event-driven control
//! switching. Closed-form solutions for the quasi-hyperbolic plane examples
//! and a grid shortest-path oracle certify the integrated geodesics.
//!
//! Modules mirror the layers of the engine:
//!
//! * [`asym_norm`] — asymmetric norms, dual norms, conjugates, support sets,
//!   strong-convexity checks;
//! * [`finsler_field`] — fields of norms over a chart domain, unit control
//!   vectors, horizontal derivatives, the Riemannian fundamental tensor and
//!   cotangent spray;
//! * [`geodesic_field`] — the extended geodesic field, its event-driven
//!   integrator, the spray-product integrator and reparameterization;
//! * [`qh_plane`] — closed-form geodesics for the quasi-hyperbolic plane
//!   examples (hexagonal and arc-composite base norms) and the hyperbolic
//!   reference case;
//! * [`metric_oracle`] — brute-force shortest-path certification on a grid;
//! * [`config`] — structured text definitions of norms and fields;
//! * [`export`] — CSV and SVG trajectory output.

pub mod asym_norm;
pub mod config;
pub mod error;
pub mod export;
pub mod finsler_field;
pub mod geodesic_field;
pub mod metric_oracle;
pub mod qh_plane;
pub mod tol;
pub mod vector;

pub use asym_norm::{AsymNorm, StrongConvexityReport, SupportSet};
pub use error::Error;
pub use finsler_field::{ChartDomain, FinslerField};
pub use geodesic_field::{CotangentState, PhaseVelocity, Trajectory};
pub use vector::{Covector, Vector};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
