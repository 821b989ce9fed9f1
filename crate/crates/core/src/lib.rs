pub mod analytics;
pub mod construct312;
pub mod containment;
pub mod error;
pub mod extremal;
pub mod matching;
pub mod matrix;
pub mod oracle;
pub mod permutation;
pub mod zigzag;
