//! Symbolic-numeric workbench for the deformed current algebra `A_{hbar,eta}(g^)`.

pub mod boson;
pub mod check;
pub mod evalrep;
pub mod hopf;
pub mod intertwine;
pub mod liealg;
pub mod params;
pub mod quad;
pub mod report;
pub mod ser;
pub mod special;
pub mod structfn;
pub mod trigcalc;
