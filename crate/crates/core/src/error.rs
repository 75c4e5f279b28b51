use thiserror::Error;

/// Errors raised by the symbolic engine.
///
/// Mathematical *outcomes* (a field that is not a symmetry, a system that is
/// not linearized) are reported in result values, not through this type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("undeclared identifier `{name}` at {pos}")]
    Undeclared { name: String, pos: usize },
    #[error("argument of exp(...) must be a homogeneous linear form, got `{0}`")]
    NonLinearExp(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator `{0}` mixes several exponential factors and cannot be inverted")]
    NonUnitDenominator(String),
    #[error("fractional exponent {exponent} on substituted exponential exp({var})")]
    FractionalExponent { var: String, exponent: String },
    #[error("cannot substitute into exp({var}): binding `{value}` is not a homogeneous linear form")]
    NonLinearExpBinding { var: String, value: String },
    #[error("variable `{0}` occurs polynomially but only exp({0}) is bound")]
    UnboundVariable(String),
    #[error("denominator vanishes at the evaluation point")]
    SingularPoint,
    #[error("chart mismatch: {0}")]
    ChartMismatch(String),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("point map is not invertible: {0}")]
    NotInvertible(String),
    #[error("closure exceeded the dimension budget of {0}")]
    BudgetExceeded(usize),
    #[error("generator `{0}` is zero or linearly dependent on earlier generators")]
    DependentGenerator(String),
    #[error("field is not in the span of the basis (residual: {0})")]
    NotInSpan(String),
    #[error("basis is not closed under the bracket: {0}")]
    NotClosed(String),
    #[error("not an eigenvector: {0}")]
    NotEigenvector(String),
    #[error("root space of {0} has multiplicity greater than one")]
    RootMultiplicity(String),
    #[error("root decomposition failed: {0}")]
    Roots(String),
    #[error("all samples hit singular points after {0} retries")]
    SamplingFailed(usize),
    #[error("abelian chain check failed: {0}")]
    Chain(String),
    #[error("field outside the supported exponential class: {0}")]
    UnsupportedField(String),
    #[error("canonical coordinate ansatz has no solution: {0}")]
    AnsatzUnsolvable(String),
    #[error("rank deficiency: expected {expected}, found {found}")]
    RankDeficient { expected: usize, found: usize },
    #[error("independent variable degenerates: {0}")]
    DegenerateIndependent(String),
    #[error("transformed system cannot be solved for the top derivatives: {0}")]
    NotSolvable(String),
    #[error("polynomial system: {0}")]
    PolySystem(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
