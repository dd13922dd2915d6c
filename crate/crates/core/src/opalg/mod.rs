//! Exact algebra of normal-ordered ladder-operator polynomials and the
//! order-by-order eigenoperator construction for the quartic oscillator.

pub mod coeff;
pub mod eigenop;
pub mod fock;
pub mod linsolve;
pub mod poly;

pub use coeff::{rational, rational_to_f64, CouplingPoly, Rational};
pub use eigenop::{solve_tilde_a, AlgebraError, Constraint, ConstraintDiagnostics, Discrepancy, TildeASolution};
pub use fock::{fock_matrix_element, fock_matrix_element_exact, FockElement};
pub use poly::OperatorPoly;

/// Free-function form of [`OperatorPoly::normal_order_product`].
pub fn normal_order_product(p: &OperatorPoly, q: &OperatorPoly) -> OperatorPoly {
    p.normal_order_product(q)
}

/// Free-function form of [`OperatorPoly::commutator`].
pub fn commutator(p: &OperatorPoly, q: &OperatorPoly) -> OperatorPoly {
    p.commutator(q)
}

/// Free-function form of [`OperatorPoly::dagger`].
pub fn dagger(p: &OperatorPoly) -> OperatorPoly {
    p.dagger()
}
