//! Exact Kazhdan-Lusztig combinatorics for finite Coxeter groups and the
//! layer dimensions of Andersen filtrations on `Hom(Delta, K)`.

pub mod andersen;
pub mod characters;
pub mod coxeter;
pub mod filtration;
pub mod hecke;
pub mod laurent;
pub mod parabolic;
