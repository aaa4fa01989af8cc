pub mod ck;
pub mod classify;
pub mod multiplier;
pub mod ncpoly;
pub mod parse;
pub mod perm;
pub mod presentation;
pub mod reference;
pub mod rewrite;
pub mod scalar;
pub mod sphere;
