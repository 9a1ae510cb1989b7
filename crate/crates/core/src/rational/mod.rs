//! Discriminants, S_m certificates, Table 1 and the group 𝔖 ⊂ GSp_4(Z/4).

pub mod intpoly;
pub mod table1;
pub mod sfield;
