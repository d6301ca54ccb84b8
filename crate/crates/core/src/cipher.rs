//! The encryption pipeline and its exact reversal.
//!
//! Encryption composes, per digit position `i`:
//!
//! 1. encode the plaintext digit triple with rule `k1`,
//! 2. add: `N^r = D^r + D^g`, `N^g = D^g + D^b`, `N^b = N^g + D^b`,
//! 3. complement all three bases when `z_i = 1`,
//! 4. decode with rule `k2`,
//! 5. XOR every channel digit with the mask digit `t_i`.
//!
//! Positions never interact, so the pipeline has no diffusion at all.

use crate::dna::{complement, dna_add, dna_sub, Digit, DnaBase, MapRule};
use crate::error::{Error, Result};
use crate::image::{image_to_digits, DigitImage, RgbImage};
use crate::keystream::{Keystreams, SecretKey};

/// A base triple per digit position, `4L` entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DnaTriples {
    width: usize,
    height: usize,
    pub entries: Vec<[DnaBase; 3]>,
}

impl DnaTriples {
    pub fn new(width: usize, height: usize, entries: Vec<[DnaBase; 3]>) -> Result<DnaTriples> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage);
        }
        if entries.len() != 4 * width * height {
            return Err(Error::LengthMismatch {
                expected: 4 * width * height,
                actual: entries.len(),
            });
        }
        Ok(DnaTriples {
            width,
            height,
            entries,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn map(&self, f: impl Fn([DnaBase; 3]) -> [DnaBase; 3]) -> DnaTriples {
        DnaTriples {
            width: self.width,
            height: self.height,
            entries: self.entries.iter().map(|e| f(*e)).collect(),
        }
    }
}

#[inline]
pub fn add_triple([dr, dg, db]: [DnaBase; 3]) -> [DnaBase; 3] {
    let ng = dna_add(dg, db);
    [dna_add(dr, dg), ng, dna_add(ng, db)]
}

#[inline]
pub fn sub_triple([nr, ng, nb]: [DnaBase; 3]) -> [DnaBase; 3] {
    let db = dna_sub(nb, ng);
    let dg = dna_sub(ng, db);
    [dna_sub(nr, dg), dg, db]
}

#[inline]
fn complement_triple(t: [DnaBase; 3]) -> [DnaBase; 3] {
    t.map(complement)
}

/// Encode each channel digit with `k1`.
pub fn encode_image(d: &DigitImage, k1: MapRule) -> DnaTriples {
    let entries = (0..d.len())
        .map(|i| d.triple(i).map(|x| k1.encode(x)))
        .collect();
    DnaTriples {
        width: d.width(),
        height: d.height(),
        entries,
    }
}

/// Decode each base with `rule`.
pub fn decode_triples(t: &DnaTriples, rule: MapRule) -> DigitImage {
    let n = t.len();
    let mut r = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for e in &t.entries {
        r.push(rule.decode(e[0]));
        g.push(rule.decode(e[1]));
        b.push(rule.decode(e[2]));
    }
    DigitImage::new(t.width, t.height, r, g, b).expect("decoding preserves geometry")
}

/// Channel mixing: `N^r = D^r + D^g`, `N^g = D^g + D^b`, `N^b = N^g + D^b`.
pub fn addition_step(d: &DnaTriples) -> DnaTriples {
    d.map(add_triple)
}

/// Inverse of [`addition_step`].
pub fn inverse_addition_step(n: &DnaTriples) -> DnaTriples {
    n.map(sub_triple)
}

/// Complement all three bases where `z_i` is set. Self-inverse.
pub fn complement_step(n: &DnaTriples, z: &[bool]) -> Result<DnaTriples> {
    if z.len() != n.len() {
        return Err(Error::LengthMismatch {
            expected: n.len(),
            actual: z.len(),
        });
    }
    let entries = n
        .entries
        .iter()
        .zip(z)
        .map(|(e, &bit)| if bit { complement_triple(*e) } else { *e })
        .collect();
    Ok(DnaTriples {
        width: n.width,
        height: n.height,
        entries,
    })
}

/// XOR every channel digit at position `i` with `t_i`. Self-inverse.
pub fn mask_step(d: &DigitImage, t: &[Digit]) -> Result<DigitImage> {
    if t.len() != d.len() {
        return Err(Error::LengthMismatch {
            expected: d.len(),
            actual: t.len(),
        });
    }
    let xor = |ch: &[Digit]| -> Vec<Digit> { ch.iter().zip(t).map(|(a, b)| a.xor(*b)).collect() };
    DigitImage::new(d.width(), d.height(), xor(&d.r), xor(&d.g), xor(&d.b))
}

/// The whole pipeline at a single position.
#[inline]
pub fn encrypt_triple(p: [Digit; 3], k1: MapRule, k2: MapRule, z: bool, t: Digit) -> [Digit; 3] {
    let mut n = add_triple(p.map(|x| k1.encode(x)));
    if z {
        n = complement_triple(n);
    }
    n.map(|x| k2.decode(x).xor(t))
}

#[inline]
pub fn decrypt_triple(c: [Digit; 3], k1: MapRule, k2: MapRule, z: bool, t: Digit) -> [Digit; 3] {
    let mut n = c.map(|x| k2.encode(x.xor(t)));
    if z {
        n = complement_triple(n);
    }
    sub_triple(n).map(|x| k1.decode(x))
}

fn check_streams(img: &RgbImage, ks: &Keystreams) -> Result<()> {
    if ks.pixel_count() != img.len() {
        return Err(Error::LengthMismatch {
            expected: 4 * img.len(),
            actual: ks.z().len(),
        });
    }
    Ok(())
}

/// Encrypt with pre-supplied keystreams.
pub fn encrypt_with_keystreams(
    img: &RgbImage,
    k1: MapRule,
    k2: MapRule,
    ks: &Keystreams,
) -> Result<RgbImage> {
    check_streams(img, ks)?;
    let digits = image_to_digits(img);
    let added = addition_step(&encode_image(&digits, k1));
    let flipped = complement_step(&added, ks.z())?;
    let masked = mask_step(&decode_triples(&flipped, k2), ks.t())?;
    Ok(masked.to_image())
}

/// Decrypt with pre-supplied keystreams.
pub fn decrypt_with_keystreams(
    img: &RgbImage,
    k1: MapRule,
    k2: MapRule,
    ks: &Keystreams,
) -> Result<RgbImage> {
    check_streams(img, ks)?;
    let unmasked = mask_step(&image_to_digits(img), ks.t())?;
    let flipped = complement_step(&encode_image(&unmasked, k2), ks.z())?;
    let plain = decode_triples(&inverse_addition_step(&flipped), k1);
    Ok(plain.to_image())
}

pub fn encrypt(img: &RgbImage, key: &SecretKey) -> Result<RgbImage> {
    let ks = Keystreams::generate(key, img.len())?;
    encrypt_with_keystreams(img, key.k1, key.k2, &ks)
}

pub fn decrypt(img: &RgbImage, key: &SecretKey) -> Result<RgbImage> {
    let ks = Keystreams::generate(key, img.len())?;
    decrypt_with_keystreams(img, key.k1, key.k2, &ks)
}
