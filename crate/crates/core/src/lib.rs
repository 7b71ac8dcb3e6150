//! Exact continued fractions of quadratic integers, the inverse problem of
//! prescribing the start of the symmetric part of the period, and the same
//! machinery over polynomial rings `F[X]` for `F = ℚ` or `ℚ(s)`.

pub mod arith;
pub mod error;
pub mod funcfield;
pub mod prescribe;
pub mod quad;
pub mod words;

pub use arith::{Degree, Field, Int, Poly, Rat, RatFunc};
pub use error::{Error, Result};
pub use funcfield::{
    family_m5, family_m7, ff_expand, ff_prefix_identities_hold, ff_step, ff_verify_family,
    regulator_of, FFCompleteQuotient, FFExpansion, FFSpec, FFStatus, FamilyTag, QuarticFamily,
};
pub use prescribe::{
    classical_family, classical_instantiate, general_solve, special_p_eq_pprime,
    special_q_eq_qprime, verify_instance, ClassicalFamily, GeneralInstance, Inadmissible, Outcome,
    PrefixData, TPolicy,
};
pub use quad::{
    check_norm_identity, cq_step, expand, expand_default, fundamental_unit, is_reduced,
    norm_identity_through_period, symmetry_midpoint, CompleteQuotient, FundamentalUnit, Midpoint,
    MidpointKind, PeriodicExpansion, QuadraticSpec, TableauRow,
};
pub use words::{
    convergents, is_palindrome, periodic_word_to_quadratic, unit_to_period, word_to_matrix, CfWord,
    Mat2, Ring,
};
