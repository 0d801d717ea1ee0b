//! Random case generators and brute-force oracles shared by the property
//! suites.
#![allow(dead_code)]

pub mod graphs;
pub mod matcher;
pub mod segment;
