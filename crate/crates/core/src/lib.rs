pub mod bernoulli;
pub mod cache;
pub mod cycring;
pub mod error;
pub mod jacobi;
pub mod modarith;
pub mod par;
pub mod residue_symbols;
pub mod spectra;
pub mod vandiver;
