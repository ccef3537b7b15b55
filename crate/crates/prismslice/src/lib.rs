//! Exact arithmetic for q-analogues, Witt vectors and prisms, together with
//! the combinatorics of the regular slice filtration of THH over a perfectoid
//! base: circle-representation decompositions, gold-element rewriting, cyclic
//! Mackey towers, and spectral-sequence chart data.
//!
//! Everything here is integer-exact. Ring elements live in truncated local
//! models `Z[u]/(p^M, (u-1)^N)` with precision tracked per element, or in the
//! exact global ring `Z[q]`; no floating point is used anywhere.

pub mod chart;
pub mod combinatorics;
pub mod gold;
pub mod mackey;
pub mod prism;
pub mod reps;
pub mod rings;
pub mod slice;
pub mod witt;
