//! Oracles and fixture generators shared by the integration tests.
#![allow(dead_code)]

pub mod charpoly;
pub mod lam_oracle;
pub mod marking;
pub mod nullspace;
pub mod planted;
pub mod polymult;
pub mod trees;
