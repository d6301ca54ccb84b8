//! A DNA-encoding / logistic-map RGB image cipher together with the tools
//! that break it.
//!
//! - [`dna`]: bases, digits, the eight map rules, DNA addition.
//! - [`keystream`]: secret keys and the logistic-map keystreams.
//! - [`cipher`]: encryption and decryption.
//! - [`attack`]: equivalent-key recovery from one known plaintext.
//! - [`analysis`]: plaintext- and key-sensitivity measurements.
//! - [`ppm`]: binary PPM input/output.

pub mod analysis;
pub mod attack;
pub mod cipher;
pub mod cli;
pub mod dna;
pub mod error;
pub mod image;
pub mod keystream;
pub mod ppm;
pub mod synth;

pub use attack::{
    equivalent_decrypt, recover_equivalent_key, AttackFailure, AttackReport, EquivalentKey,
};
pub use cipher::{decrypt, encrypt};
pub use dna::{Digit, DnaBase, MapRule, RuleClass};
pub use error::{Error, Result};
pub use image::{DigitImage, RgbImage};
pub use keystream::{Keystreams, LogisticParams, SecretKey};
