//! Weight-truncated sparse polynomial algebra in the odd time variables.
//!
//! Every tau-function and operator computation runs on [`Poly`]: a sparse map
//! from [`Monomial`] to coefficient, truncated by total weight (`deg t_k = k`).
//! [`HbarSeries`] stacks polynomials by ħ-exponent and [`LaurentZ`] by powers
//! of the spectral parameter `z` used in the bilinear identities.

mod laurent;
mod monomial;
mod poly;
mod series;

pub use laurent::LaurentZ;
pub use monomial::{var_weight, Monomial, PRIMED};
pub use poly::{OddPolynomial, Poly, TwoSetPolynomial};
pub use series::HbarSeries;
