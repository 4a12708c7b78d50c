//! Excess coverage arrays and their links to sequence covering arrays.
//!
//! An excess coverage array CA_X(N;t,k,v) covers every t-way interaction `T`
//! at least `μ(T) = ∏_σ |τ_σ(T)|!` times, where `τ_σ(T)` is the set of
//! columns of `T` carrying symbol `σ`. Arrays derived from a sequence
//! covering array by deleting symbols are of this kind, so small excess
//! coverage arrays bound the size of sequence covering arrays from below.

pub mod analyse;
pub mod array;
pub mod binary;
pub mod canon;
pub mod derive;
pub mod dlx;
pub mod enumerate;
pub mod error;
pub mod format;
pub mod sequence;
pub mod verify;

pub use array::{coverage_count, mu_of_symbols, Array, Interaction, Symbol};
pub use canon::{
    are_isomorphic, automorphisms, canonical_form, fingerprint, CanonicalForm, Transform,
};
pub use enumerate::{base_array, catalogue, extend, placements, Catalogue, EnumerateOptions};
pub use error::{Error, Result};
pub use sequence::{MultiplicityVector, Permutation, ScaSet, Sequence};
pub use verify::{verify_ca, verify_cax, verify_oa, verify_psca, verify_sca, VerifyReport};
