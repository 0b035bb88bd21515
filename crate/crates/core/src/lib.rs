//! Combinatorial covering-space toolkit: subgroup graphs of the free group
//! `F(x,h)`, normal forms in the doubled group, branched-cover accounting and
//! the polygon combinatorics of the fiber surface.

pub mod amalgam;
pub mod cover;
pub mod pipeline;
pub mod selftest;
pub mod snf;
pub mod surface;
pub mod stallings;
pub mod word;
