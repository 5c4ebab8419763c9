//! Elastic curves in the hyperbolic upper half-plane.
//!
//! The crate evaluates the explicit theta-function parametrizations of
//! orbitlike and wavelike elasticae (the generating curves of Willmore
//! surfaces of revolution), enumerates the closed curves and their
//! self-intersections, applies a monochromatic instability criterion, and
//! solves the Dirichlet boundary-value problem for positively oriented
//! orbitlike curves by reduction to a two-unknown nonlinear system.
//!
//! Layering, bottom to top:
//! - [`special`]: elliptic integrals, Jacobi elliptic functions, theta series.
//! - [`fundamental`]: fundamental systems of the Lamé-type equation
//!   w'' + 2 dn² w = 0 for both curve families, the angle function ϑ, and the
//!   rotation number Δθ(k).
//! - [`elastica`]: closed-form curve evaluation, coefficient fitting, the
//!   conformal distance function Z, enclosure geometry, Möbius maps.
//! - [`closed`]: closed-curve records, self-intersections, winding numbers,
//!   instability reports.
//! - [`dirichlet`]: boundary-value solving and symmetry classification.
//! - [`ode`] / [`oracle`]: an independent Runge–Kutta backend used to
//!   cross-validate every closed form.

pub mod closed;
pub mod dirichlet;
pub mod elastica;
pub mod error;
pub mod fundamental;
pub mod ode;
pub mod oracle;
pub mod special;

pub use error::{Error, Result};
