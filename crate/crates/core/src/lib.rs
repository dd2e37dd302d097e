//! Linear network coding over finite fields: field and matrix arithmetic,
//! network models, global-code verification, the generalized Fano and
//! non-Fano families with their explicit codes, and solvability search.

pub mod cli;
pub mod code;
pub mod families;
pub mod gf;
pub mod network;
pub mod search;
pub mod solutions;
