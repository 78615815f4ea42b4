//! Exact decision procedures for discreteness of two-generator subgroups of
//! PSL(2,R).

pub mod exactnum;
pub mod gmengine;
pub mod hypgeo;
pub mod moebius;
pub mod semialg;
