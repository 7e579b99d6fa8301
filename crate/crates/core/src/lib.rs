//! Inverse scattering transform and long-time asymptotics for the Camassa–Holm
//! equation on the constant background κ = 1,
//!
//! m_t + 2q_x + 3q q_x = 2q_x q_xx + q q_xxx,   m = q − q_xx + 1,
//!
//! together with a pseudo-spectral reference solver used to check the asymptotic
//! formulas.

pub mod asymptotics;
pub mod error;
pub mod io;
pub mod numerics;
pub mod pde_oracle;
pub mod phase;
pub mod scattering;
pub mod soliton;
pub mod spectral;
pub mod verify;
pub mod weightfn;

pub use error::{Error, Result};
pub use num_complex::Complex64;
