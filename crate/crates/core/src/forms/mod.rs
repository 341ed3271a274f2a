//! Concrete modular objects: q-expansions and their products, Eisenstein
//! coset sums built from translation-invariant seeds, and evaluation through
//! the standard fundamental domain.

mod eisenstein;
mod family;
mod object;
mod qexp;
mod reduce;

pub use eisenstein::{
    coprime_rows, harmonic_seed, holomorphic_seed, homogeneous_lattice_sum, real_analytic_seed, EisensteinObject,
    SumMethod,
};
pub use family::{product_form, Family, FamilyParams, FamilySpec};
pub use object::{Evaluator, ModularObject, Operator};
pub use qexp::{divisor_sigma, QExpansion};
pub use reduce::{fd_reduce, mobius};
