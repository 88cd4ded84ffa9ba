//! Exact arithmetic for the coefficient rings F_p, Q and Z, sparse
//! multivariate polynomials under the lexicographic order with x1 greatest,
//! and the certified ideal machinery (Groebner bases with cofactors,
//! lex-monic witnesses, radical containment, Bezout combinations,
//! resultants and the normalization change of variables).

pub mod coeff;
pub mod groebner;
pub mod ideals;
pub mod monomial;
pub mod poly;
pub mod resultant;
pub mod subst;
pub mod zlattice;

pub use coeff::{Coeff, CoeffKind, CoeffRing};
pub use groebner::{groebner_basis, groebner_basis_in, GroebnerBasis};
pub use ideals::{
    bezout_combination, ideal_contains_lex_monic, radical_contains, MonicWitness,
    RabinowitschData, RadicalCertificate,
};
pub use monomial::{lex_compare, Monomial};
pub use poly::{Poly, Ring};
pub use resultant::{resultant, resultant_with_cofactors};
pub use subst::{normalize_variables, normalize_variables_in, shift_last_variable, Direction, VariableChange};
