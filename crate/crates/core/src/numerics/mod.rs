//! Numerical backbone: adaptive quadrature, principal values, bracketed
//! roots and damped oscillatory integrals.

mod oscillatory;
mod parallel;
mod principal_value;
mod quadrature;
mod roots;

pub use oscillatory::{
    neville_to_zero, oscillatory_integral_damped, DampedIntegral, DEFAULT_EPS_SCHEDULE,
};
pub use parallel::ordered_map;
pub use principal_value::{
    principal_value_integral, principal_value_with, subtracted_integrand, PoleSubtraction,
    POLE_SEPARATION_GUARD,
};
pub use quadrature::{integrate_adaptive, Integrator, QuadValue, QuadratureResult, GK21_POINTS};
pub use roots::{find_root_bracketed, DEFAULT_ROOT_TOL};

/// Default absolute quadrature tolerance.
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;
