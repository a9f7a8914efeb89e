//! Exact arithmetic in F_q, F_q[T] and its residue fields.

mod fq;
mod poly;
mod residue;
pub mod text;

pub use fq::{Fe, FieldSpec, Fq, MAX_Q};
pub use poly::{Poly, PolyDisplay};
pub use residue::{
    crt, hilbert_symbol, is_irreducible, legendre, monic_irreducibles, monic_polys, sqrt_mod_irreducible,
    MonicPolys, ResidueElem,
};
pub use text::{format_poly, parse_poly};

pub(crate) use fq::prime_factors;
pub(crate) use residue::{legendre_unchecked, sqrt_mod_irreducible_unchecked};
