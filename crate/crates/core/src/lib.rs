pub mod coeff;
pub mod checks;
pub mod connecting;
pub mod error;
pub mod exact;
pub mod matrix_coeffs;
pub mod modular_forms;
pub mod period_cocycles;
pub mod numeric;
pub mod poly_rep;
pub mod principal_series;
pub mod report;

pub use error::{Error, Result};

pub use numeric::{Complex, Mpf, Real};

pub type BigFloat = numeric::Mpf;
pub type BigComplex = numeric::Complex<numeric::Mpf>;
pub type Complex64 = numeric::Complex<f64>;
