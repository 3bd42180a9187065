//! Stabilizer states: tableaux, canonical forms, affine computational-basis
//! forms and exact inner products.

mod affine;
mod canonical;
mod gates;
mod gauss;
mod synth;
mod tableau;
mod zblock;

pub use affine::{inner_product, to_affine_form, AffineForm};
pub use canonical::{canonicalize, CanonicalTableau};
pub use gates::{conjugate_by_word, conjugate_by_word_dagger, invert_word, CliffordGate};
pub use gauss::{quadratic_gauss_sum, ExactValue, QuadForm};
pub use synth::synthesize_clifford;
pub use tableau::{symplectic_rank, CliffordTableau, StabilizerTableau};
pub use zblock::{zblock_to_affine, ZBlockAffine};
