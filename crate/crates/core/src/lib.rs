//! Finite Moufang loops, their alternative loop algebras `F[Q] = FQ/I(Q)`,
//! augmentation ideals, radicals and circle loops, computed exactly over
//! `GF(p)` or the rationals.

pub mod algebra;
pub mod cli;
pub mod constructions;
pub mod gf;
pub mod linalg;
pub mod loopcore;
pub mod radical;

/// Seed used by every sampled check unless one is given.
pub const DEFAULT_SEED: u64 = 0xA17E41;
