//! Search, extension and verification of two-colorings of complete graphs
//! that witness lower bounds on two-color Ramsey numbers.
//!
//! * [`graph`]: colorings, z-vectors and their text formats.
//! * [`clique`]: monochromatic clique search and witness certification.
//! * [`cnf`]: Ramsey, distance and residual clause streams, DIMACS.
//! * [`solver`]: conflict-driven SAT search with penalized soft clauses.
//! * [`relax`]: the relax-and-restart loop over soft distance clauses.
//! * [`circulant`]: direct search over distance vectors.
//! * [`extension`]: growing a witness from a smaller one.
//! * [`witness`]: the bundled (4,8)-coloring of `K_57`.

pub mod circulant;
pub mod clique;
pub mod cnf;
pub mod extension;
pub mod graph;
pub mod relax;
pub mod solver;
pub mod witness;
