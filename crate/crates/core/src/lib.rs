//! Combinatorial group theory of local wild mapping class groups: ranked
//! fission trees of irregular types, Weyl-group stabilizers of kernel flags,
//! and generating sets for cabled braid groups, with brute-force oracles for
//! small rank.

pub mod braid;
pub mod cli;
pub mod fission;
pub mod linalg;
pub mod permgroup;
pub mod rootsys;
pub mod selftest;
pub mod wmcg;
