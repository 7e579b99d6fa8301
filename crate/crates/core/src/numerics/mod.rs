//! Small numerical building blocks shared by the solvers.

pub mod gamma;
pub mod ode;
pub mod quad;
pub mod spline;
