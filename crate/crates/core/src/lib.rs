//! Weak harmonic labelings of finite graphs and multigraphs.

pub mod cli;
pub mod correspondence;
pub mod dot;
pub mod enumeration;
pub mod families;
pub mod graph;
pub mod harmonic;
pub mod io;
pub mod linalg;
pub mod notation;
pub mod total;
