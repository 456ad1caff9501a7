//! Exact integer and rational matrix machinery: Smith normal form, reduced
//! forms `t = A B^{-1}`, coset enumeration, signature and evenness.

pub mod matrix;
pub mod quadratic;
pub mod reduced;
pub mod snf;

pub use matrix::{
    int_matrix_from_json_str, int_matrix_to_json, rat_matrix_from_json, rat_matrix_from_json_str, rat_matrix_to_json,
    sym_matrix_from_json_str, IntMatrix, Matrix, RatMatrix, RatSymMatrix,
};
pub use quadratic::{evenness_check, evenness_check_dual, integrality_criteria, signature, validate_half_integers};
pub use reduced::{class_key, class_key_data, coset_reps, reduced_form, reduced_form_sym, ReducedForm};
pub use snf::{smith_normal_form, SmithForm};
