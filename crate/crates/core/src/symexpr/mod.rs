//! Exact scalar expressions: rational functions over Q extended by
//! exponentials of linear forms.

mod expr;
mod gcd;
mod monomial;
mod poly;

pub type Rational = num_rational::BigRational;

pub(crate) use expr::leading_negative;
pub use expr::{Binding, Bindings, Expr};
pub use gcd::{gcd, lcm};
pub use monomial::{ExpMonomial, Monomial, PowerProduct, Var};
pub use poly::Poly;
