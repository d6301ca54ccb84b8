//! One-known-plaintext recovery of an equivalent key.
//!
//! Steps (c)–(e) of the cipher collapse, at every position `i`, into a single
//! map rule `h_i` applied to the added triple `(N^r, N^g, N^b)`. Knowing `k1`
//! and every `h_i` is therefore enough to decrypt anything encrypted under the
//! same key at the same image size. The recovery runs four scans:
//!
//! 1. a position with `g' = b'` forces `D^b = C`, which reveals `Map(C)`;
//! 2. `Map(C)` leaves two candidates for `k1` that differ by swapping `A` and
//!    `T`; a position where their added triples have different equality
//!    patterns picks the right one, since `h_i` preserves equality;
//! 3. a position where two added bases are distinct and not complementary
//!    exposes, through the XOR of their cipher digits, the rule class shared by
//!    every `h_i`;
//! 4. within that class, `N^r_i` and `r'_i` pin down `h_i` uniquely.
//!
//! The attack never guesses: a missing witness ends it with a failure tagged
//! by stage.

use std::fmt::{self, Write as _};
use std::fs;
use std::path::Path;

use crate::cipher::{add_triple, sub_triple};
use crate::dna::{rule_class, rule_from_pair, Digit, DnaBase, MapRule, RuleClass};
use crate::error::{Error, Result};
use crate::image::{check_geometry, image_to_digits, DigitImage, RgbImage};
use crate::keystream::{Keystreams, SecretKey};

/// The rule `h` with `h.decode(X) = k2.decode(X') ⊕ t`, where `X'` is the
/// complement of `X` when `z` is set.
pub fn composed_rule(z: bool, k2: MapRule, t: Digit) -> MapRule {
    let f = |x: DnaBase| {
        let x = if z { x.complement() } else { x };
        k2.decode(x).xor(t)
    };
    MapRule::ALL
        .into_iter()
        .find(|h| DnaBase::ALL.iter().all(|&x| h.decode(x) == f(x)))
        .expect("composition of Watson-Crick bijections is a map rule")
}

/// The two `k1` candidates consistent with a given `Map(C)`.
pub fn k1_candidates(map_c: Digit) -> [MapRule; 2] {
    let mut out = MapRule::ALL
        .into_iter()
        .filter(|r| r.decode(DnaBase::C) == map_c);
    let a = out.next().expect("two rules per Map(C)");
    let b = out.next().expect("two rules per Map(C)");
    [a, b]
}

/// Which component pairs are equal: `(r=g, g=b, r=b)`.
#[inline]
pub fn equality_pattern<T: PartialEq>(t: &[T; 3]) -> [bool; 3] {
    [t[0] == t[1], t[1] == t[2], t[0] == t[2]]
}

const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Whether a pair of added bases can reveal the rule class: distinct and not
/// complementary.
#[inline]
fn class_revealing(x: DnaBase, y: DnaBase) -> bool {
    x != y && x.complement() != y
}

/// Why an attack stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttackFailure {
    /// No position with `g' = b'`.
    NoStep1Witness,
    /// No position separating the two `k1` candidates.
    NoStep2Witness,
    /// Every added triple is made of equal or complementary bases.
    NoStep3Witness,
    /// The cipher contradicts every hypothesis at this position, so it was not
    /// produced from this plaintext by the cipher.
    InconsistentPair { position: usize },
}

impl AttackFailure {
    pub fn label(&self) -> &'static str {
        match self {
            AttackFailure::NoStep1Witness => "NoStep1Witness",
            AttackFailure::NoStep2Witness => "NoStep2Witness",
            AttackFailure::NoStep3Witness => "NoStep3Witness",
            AttackFailure::InconsistentPair { .. } => "InconsistentPair",
        }
    }
}

impl fmt::Display for AttackFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttackFailure::InconsistentPair { position } => {
                write!(f, "InconsistentPair at position {position}")
            }
            other => f.write_str(other.label()),
        }
    }
}

impl std::error::Error for AttackFailure {}

/// A plaintext/ciphertext pair in digit form with matching geometry.
#[derive(Debug, Clone)]
pub struct KnownPair {
    plain: DigitImage,
    cipher: DigitImage,
}

impl KnownPair {
    pub fn new(plain: DigitImage, cipher: DigitImage) -> Result<KnownPair> {
        plain.same_geometry(&cipher)?;
        Ok(KnownPair { plain, cipher })
    }

    pub fn from_images(plain: &RgbImage, cipher: &RgbImage) -> Result<KnownPair> {
        KnownPair::new(image_to_digits(plain), image_to_digits(cipher))
    }

    pub fn len(&self) -> usize {
        self.plain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.plain.is_empty()
    }

    /// Step 1: `Map(C)` from the first position with `g' = b'`.
    pub fn recover_map_c(&self) -> Result<(Digit, usize), AttackFailure> {
        (0..self.len())
            .find(|&i| self.cipher.g[i] == self.cipher.b[i])
            .map(|i| (self.plain.b[i], i))
            .ok_or(AttackFailure::NoStep1Witness)
    }

    /// Step 2: choose between the two `k1` candidates by comparing equality
    /// patterns of their added triples against the cipher's.
    pub fn recover_k1(&self, map_c: Digit) -> Result<(MapRule, usize), AttackFailure> {
        let [first, second] = k1_candidates(map_c);
        for i in 0..self.len() {
            let p = self.plain.triple(i);
            let pa = equality_pattern(&add_triple(p.map(|x| first.encode(x))));
            let pb = equality_pattern(&add_triple(p.map(|x| second.encode(x))));
            if pa == pb {
                continue;
            }
            let observed = equality_pattern(&self.cipher.triple(i));
            return if observed == pa {
                Ok((first, i))
            } else if observed == pb {
                Ok((second, i))
            } else {
                Err(AttackFailure::InconsistentPair { position: i })
            };
        }
        Err(AttackFailure::NoStep2Witness)
    }

    /// Added triples under `k1`.
    pub fn added_triples(&self, k1: MapRule) -> Vec<[DnaBase; 3]> {
        (0..self.len())
            .map(|i| add_triple(self.plain.triple(i).map(|x| k1.encode(x))))
            .collect()
    }

    /// Step 3: the rule class of `k2` (and of every `h_i`).
    pub fn recover_k2_class(&self, k1: MapRule) -> Result<(RuleClass, usize), AttackFailure> {
        class_from_added(&self.added_triples(k1), &self.cipher)
    }

    /// Step 4: `h_i` from `N^r_i` and `r'_i`.
    pub fn recover_rules(&self, added: &[[DnaBase; 3]], class: RuleClass) -> Vec<MapRule> {
        added
            .iter()
            .zip(&self.cipher.r)
            .map(|(n, r)| rule_from_pair(class, n[0], *r))
            .collect()
    }
}

fn class_from_added(
    added: &[[DnaBase; 3]],
    cipher: &DigitImage,
) -> Result<(RuleClass, usize), AttackFailure> {
    // Any rule of a class serves as its representative: the XOR of two digits
    // decoded from a fixed base pair is class-invariant.
    let rep_a = RuleClass::ClassA.rules()[0];
    let rep_b = RuleClass::ClassB.rules()[0];
    for (i, n) in added.iter().enumerate() {
        let Some(&(a, b)) = PAIRS.iter().find(|(a, b)| class_revealing(n[*a], n[*b])) else {
            continue;
        };
        let c = cipher.triple(i);
        let observed = c[a].xor(c[b]);
        return if observed == rep_a.decode(n[a]).xor(rep_a.decode(n[b])) {
            Ok((RuleClass::ClassA, i))
        } else if observed == rep_b.decode(n[a]).xor(rep_b.decode(n[b])) {
            Ok((RuleClass::ClassB, i))
        } else {
            Err(AttackFailure::InconsistentPair { position: i })
        };
    }
    Err(AttackFailure::NoStep3Witness)
}

/// `k1` plus one composed rule per digit position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalentKey {
    width: usize,
    height: usize,
    k1: MapRule,
    h: Vec<MapRule>,
}

pub const EQK_MAGIC: &[u8; 4] = b"EQK1";

impl EquivalentKey {
    pub fn new(width: usize, height: usize, k1: MapRule, h: Vec<MapRule>) -> Result<EquivalentKey> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage);
        }
        let expected = width
            .checked_mul(height)
            .and_then(|l| l.checked_mul(4))
            .ok_or(Error::EmptyImage)?;
        if h.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: h.len(),
            });
        }
        if let Some(first) = h.first() {
            let class = rule_class(*first);
            if let Some(bad) = h.iter().position(|r| rule_class(*r) != class) {
                return Err(Error::EquivalentKeyFile(format!(
                    "rule at position {bad} leaves class {class}"
                )));
            }
        }
        Ok(EquivalentKey {
            width,
            height,
            k1,
            h,
        })
    }

    /// The equivalent key a secret key induces at a given image size.
    pub fn from_secret_key(key: &SecretKey, width: usize, height: usize) -> Result<EquivalentKey> {
        let ks = Keystreams::generate(key, width * height)?;
        Ok(EquivalentKey::from_keystreams(
            key.k2, &ks, key.k1, width, height,
        ))
    }

    pub(crate) fn from_keystreams(
        k2: MapRule,
        ks: &Keystreams,
        k1: MapRule,
        width: usize,
        height: usize,
    ) -> EquivalentKey {
        let h = ks
            .z()
            .iter()
            .zip(ks.t())
            .map(|(z, t)| composed_rule(*z, k2, *t))
            .collect();
        EquivalentKey {
            width,
            height,
            k1,
            h,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn k1(&self) -> MapRule {
        self.k1
    }

    pub fn rules(&self) -> &[MapRule] {
        &self.h
    }

    pub fn class(&self) -> RuleClass {
        rule_class(self.h[0])
    }

    /// `EQK1`, width and height as u32 LE, `k1`, then one rule byte per position.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(13 + self.h.len());
        out.extend_from_slice(EQK_MAGIC);
        out.extend_from_slice(&(self.width as u32).to_le_bytes());
        out.extend_from_slice(&(self.height as u32).to_le_bytes());
        out.push(self.k1.index());
        out.extend(self.h.iter().map(|r| r.index()));
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<EquivalentKey> {
        let bad = |m: &str| Error::EquivalentKeyFile(m.to_string());
        if bytes.len() < 13 {
            return Err(bad("shorter than the 13-byte header"));
        }
        if &bytes[..4] != EQK_MAGIC {
            return Err(bad("missing EQK1 magic"));
        }
        let width = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
        let height = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
        let k1 = MapRule::new(bytes[12]).ok_or_else(|| bad("k1 out of range"))?;
        let body = &bytes[13..];
        let expected = width
            .checked_mul(height)
            .and_then(|l| l.checked_mul(4))
            .ok_or_else(|| bad("dimensions overflow"))?;
        if body.len() != expected {
            return Err(Error::EquivalentKeyFile(format!(
                "expected {expected} rule bytes for {width}x{height}, found {}",
                body.len()
            )));
        }
        let h = body
            .iter()
            .map(|b| MapRule::new(*b).ok_or_else(|| bad("rule byte out of range")))
            .collect::<Result<Vec<_>>>()?;
        EquivalentKey::new(width, height, k1, h)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<EquivalentKey> {
        EquivalentKey::from_bytes(&fs::read(path)?)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Witnesses {
    pub step1: Option<usize>,
    pub step2: Option<usize>,
    pub step3: Option<usize>,
}

/// Everything the attack learned, successful or not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackReport {
    pub recovered: Option<EquivalentKey>,
    pub map_c: Option<Digit>,
    pub k1_candidates: Vec<MapRule>,
    pub k2_class: Option<RuleClass>,
    pub failure: Option<AttackFailure>,
    pub witnesses: Witnesses,
}

impl AttackReport {
    pub fn succeeded(&self) -> bool {
        self.recovered.is_some()
    }

    /// `name=value` lines with stable field names.
    pub fn to_text(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "none".into());
        let mut s = String::new();
        let _ = writeln!(
            s,
            "status={}",
            if self.succeeded() { "ok" } else { "failed" }
        );
        let _ = writeln!(
            s,
            "failure_stage={}",
            opt(self.failure.map(|f| f.label().to_string()))
        );
        if let Some(AttackFailure::InconsistentPair { position }) = self.failure {
            let _ = writeln!(s, "inconsistent_position={position}");
        }
        let _ = writeln!(s, "map_c={}", opt(self.map_c.map(|d| d.to_string())));
        let cands: Vec<String> = self.k1_candidates.iter().map(|r| r.to_string()).collect();
        let _ = writeln!(
            s,
            "k1_candidates={}",
            if cands.is_empty() {
                "none".into()
            } else {
                cands.join(",")
            }
        );
        let _ = writeln!(
            s,
            "k1={}",
            opt(self.recovered.as_ref().map(|k| k.k1.to_string()))
        );
        let _ = writeln!(s, "k2_class={}", opt(self.k2_class.map(|c| c.to_string())));
        let _ = writeln!(
            s,
            "step1_witness={}",
            opt(self.witnesses.step1.map(|i| i.to_string()))
        );
        let _ = writeln!(
            s,
            "step2_witness={}",
            opt(self.witnesses.step2.map(|i| i.to_string()))
        );
        let _ = writeln!(
            s,
            "step3_witness={}",
            opt(self.witnesses.step3.map(|i| i.to_string()))
        );
        if let Some(k) = &self.recovered {
            let _ = writeln!(s, "width={}", k.width);
            let _ = writeln!(s, "height={}", k.height);
            let _ = writeln!(s, "positions={}", k.h.len());
        }
        s
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AttackOptions {
    /// Also check that `h_i` decodes `N^g_i` and `N^b_i` to `g'_i` and `b'_i`.
    pub cross_check: bool,
}

/// Run all four steps on a known pair. Only a geometry mismatch is an `Err`;
/// a missing witness is reported inside the [`AttackReport`].
pub fn recover_equivalent_key(plain: &RgbImage, cipher: &RgbImage) -> Result<AttackReport> {
    recover_equivalent_key_with(plain, cipher, AttackOptions::default())
}

pub fn recover_equivalent_key_with(
    plain: &RgbImage,
    cipher: &RgbImage,
    options: AttackOptions,
) -> Result<AttackReport> {
    let pair = KnownPair::from_images(plain, cipher)?;
    Ok(run(&pair, options))
}

pub fn run(pair: &KnownPair, options: AttackOptions) -> AttackReport {
    let mut report = AttackReport {
        recovered: None,
        map_c: None,
        k1_candidates: Vec::new(),
        k2_class: None,
        failure: None,
        witnesses: Witnesses::default(),
    };
    macro_rules! stage {
        ($e:expr) => {
            match $e {
                Ok(v) => v,
                Err(f) => {
                    report.failure = Some(f);
                    return report;
                }
            }
        };
    }

    let (map_c, w1) = stage!(pair.recover_map_c());
    report.map_c = Some(map_c);
    report.witnesses.step1 = Some(w1);
    report.k1_candidates = k1_candidates(map_c).to_vec();

    let (k1, w2) = stage!(pair.recover_k1(map_c));
    report.witnesses.step2 = Some(w2);

    let added = pair.added_triples(k1);
    let (class, w3) = stage!(class_from_added(&added, &pair.cipher));
    report.k2_class = Some(class);
    report.witnesses.step3 = Some(w3);

    let h = pair.recover_rules(&added, class);
    if options.cross_check {
        for (i, (rule, n)) in h.iter().zip(&added).enumerate() {
            let c = pair.cipher.triple(i);
            if n.map(|x| rule.decode(x)) != c {
                report.failure = Some(AttackFailure::InconsistentPair { position: i });
                return report;
            }
        }
    }
    report.recovered = Some(EquivalentKey {
        width: pair.plain.width(),
        height: pair.plain.height(),
        k1,
        h,
    });
    report
}

/// Decrypt with an equivalent key: invert `h_i`, undo the addition, decode
/// with `k1`.
pub fn equivalent_decrypt(cipher: &RgbImage, ek: &EquivalentKey) -> Result<RgbImage> {
    check_geometry((cipher.width(), cipher.height()), (ek.width, ek.height))?;
    let c = image_to_digits(cipher);
    let n = c.len();
    let mut r = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for (i, h) in ek.h.iter().enumerate() {
        let d = sub_triple(c.triple(i).map(|x| h.encode(x)));
        r.push(ek.k1.decode(d[0]));
        g.push(ek.k1.decode(d[1]));
        b.push(ek.k1.decode(d[2]));
    }
    Ok(DigitImage::new(ek.width, ek.height, r, g, b)?.to_image())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cipher::{encrypt, encrypt_with_keystreams};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use DnaBase::{A, C, G, T};

    fn d(v: u8) -> Digit {
        Digit::new(v).unwrap()
    }

    fn rule(v: u8) -> MapRule {
        MapRule::new(v).unwrap()
    }

    fn random_image(rng: &mut ChaCha8Rng, w: usize, h: usize) -> RgbImage {
        let data: Vec<u8> = (0..w * h * 3).map(|_| rng.gen()).collect();
        RgbImage::from_interleaved(w, h, &data).unwrap()
    }

    #[test]
    fn composed_rule_spot_values() {
        assert_eq!(composed_rule(false, rule(1), d(0)), rule(1));
        assert_eq!(composed_rule(true, rule(7), d(2)), rule(4));
        for k2 in MapRule::ALL {
            assert_eq!(composed_rule(false, k2, d(0)), k2);
        }
    }

    #[test]
    fn k1_scope_by_map_c() {
        let scope = |v| {
            let mut c = k1_candidates(d(v)).map(|r| r.index());
            c.sort();
            c
        };
        assert_eq!(scope(0), [3, 4]);
        assert_eq!(scope(1), [1, 7]);
        assert_eq!(scope(2), [2, 8]);
        assert_eq!(scope(3), [5, 6]);
    }

    #[test]
    fn step1_witnesses_are_exactly_map_c_positions() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let img = random_image(&mut rng, 8, 8);
            let key = SecretKey::random(&mut rng);
            let pair = KnownPair::from_images(&img, &encrypt(&img, &key).unwrap()).unwrap();
            let map_c = key.k1.decode(C);
            for i in 0..pair.len() {
                assert_eq!(
                    pair.cipher.g[i] == pair.cipher.b[i],
                    pair.plain.b[i] == map_c
                );
            }
            assert_eq!(pair.recover_map_c().unwrap().0, map_c);
        }
        // k1 = 1 maps C to 1.
        let img = random_image(&mut rng, 8, 8);
        let mut key = SecretKey::random(&mut rng);
        key.k1 = rule(1);
        let pair = KnownPair::from_images(&img, &encrypt(&img, &key).unwrap()).unwrap();
        assert_eq!(pair.recover_map_c().unwrap().0, d(1));
    }

    #[test]
    fn step1_fails_without_map_c_digit() {
        // Blue channel all zero, k1 = 1 maps C to 1, so no blue digit hits Map(C).
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut img = random_image(&mut rng, 6, 6);
        for p in img.pixels_mut() {
            p[2] = 0;
        }
        let mut key = SecretKey::random(&mut rng);
        key.k1 = rule(1);
        let cipher = encrypt(&img, &key).unwrap();
        let report = recover_equivalent_key(&img, &cipher).unwrap();
        assert_eq!(report.failure, Some(AttackFailure::NoStep1Witness));
        assert!(report.recovered.is_none());
    }

    #[test]
    fn step2_distinguishes_at_table3_form() {
        // Plaintext triple (Map(C), x, x) with k1 = 1: x = 0 encodes (C, A, A).
        // Under candidate 7, the same digits encode (C, T, T).
        for true_k1 in [rule(1), rule(7)] {
            let r = vec![d(1); 4];
            let g = vec![d(0); 4];
            let b = vec![d(0); 4];
            let plain = DigitImage::new(1, 1, r, g, b).unwrap();
            let ks = Keystreams::constant(1, true, d(3));
            let cipher = encrypt_with_keystreams(&plain.to_image(), true_k1, rule(5), &ks).unwrap();
            let pair = KnownPair::new(plain, cipher.to_digits()).unwrap();
            let (k1, at) = pair.recover_k1(d(1)).unwrap();
            assert_eq!((k1, at), (true_k1, 0));
            let c = pair.cipher.triple(0);
            // r' = b' exactly when x = Map(T), i.e. under rule 7.
            assert_eq!(c[0] == c[2], true_k1 == rule(7));
        }
    }

    #[test]
    fn step3_class_from_xor() {
        // {N^g, N^b} = {A, C} at the witness; class A gives XOR 1.
        let cipher = DigitImage::new(1, 1, vec![d(0); 4], vec![d(0); 4], vec![d(1); 4]).unwrap();
        let added = vec![[A, A, C]; 4];
        assert_eq!(
            class_from_added(&added, &cipher).unwrap(),
            (RuleClass::ClassA, 0)
        );
        let cipher = DigitImage::new(1, 1, vec![d(3); 4], vec![d(2); 4], vec![d(1); 4]).unwrap();
        assert_eq!(
            class_from_added(&added, &cipher).unwrap(),
            (RuleClass::ClassB, 0)
        );
        // {N^r, N^g} = {A, G} with r' xor g' = 1 is class B.
        let cipher = DigitImage::new(1, 1, vec![d(3); 4], vec![d(2); 4], vec![d(2); 4]).unwrap();
        let added = vec![[A, G, G]; 4];
        assert_eq!(
            class_from_added(&added, &cipher).unwrap(),
            (RuleClass::ClassB, 0)
        );
        // Only equal-or-complementary triples: no witness.
        let added = vec![[A, T, T]; 4];
        assert_eq!(
            class_from_added(&added, &cipher),
            Err(AttackFailure::NoStep3Witness)
        );
    }

    #[test]
    fn forced_identity_keystream_recovers_k2_everywhere() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let img = random_image(&mut rng, 8, 8);
        for k in MapRule::ALL {
            let ks = Keystreams::constant(img.len(), false, Digit::ZERO);
            let cipher = encrypt_with_keystreams(&img, k, k, &ks).unwrap();
            let report = recover_equivalent_key(&img, &cipher).unwrap();
            let ek = report.recovered.expect("random image has witnesses");
            assert_eq!(ek.k1(), k);
            assert!(ek.rules().iter().all(|h| *h == k));
        }
    }

    #[test]
    fn recovered_rules_match_the_true_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let img = random_image(&mut rng, 16, 8);
            let key = SecretKey::random(&mut rng);
            let cipher = encrypt(&img, &key).unwrap();
            let opts = AttackOptions { cross_check: true };
            let report = recover_equivalent_key_with(&img, &cipher, opts).unwrap();
            let ek = report.recovered.clone().expect("success");
            assert_eq!(ek, EquivalentKey::from_secret_key(&key, 16, 8).unwrap());
            assert_eq!(report.k2_class, Some(rule_class(key.k2)));
            let other = random_image(&mut rng, 16, 8);
            let c2 = encrypt(&other, &key).unwrap();
            assert_eq!(equivalent_decrypt(&c2, &ek).unwrap(), other);
        }
    }

    #[test]
    fn one_by_one_round_trip() {
        // Pixel chosen so all three stages find a witness.
        let img = RgbImage::new(1, 1, vec![[0b01_00_11_10, 0b00_00_10_01, 0b00_01_00_11]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut hits = 0;
        for _ in 0..50 {
            let mut key = SecretKey::random(&mut rng);
            key.k1 = rule(1);
            let cipher = encrypt(&img, &key).unwrap();
            let report = recover_equivalent_key(&img, &cipher).unwrap();
            if let Some(ek) = report.recovered {
                hits += 1;
                assert_eq!(equivalent_decrypt(&cipher, &ek).unwrap(), img);
            }
        }
        assert!(hits > 0);
    }

    #[test]
    fn mismatched_pair_is_never_accepted_silently() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let img = random_image(&mut rng, 8, 8);
        let noise = random_image(&mut rng, 8, 8);
        let report =
            recover_equivalent_key_with(&img, &noise, AttackOptions { cross_check: true }).unwrap();
        assert!(report.failure.is_some());
        assert!(recover_equivalent_key(&img, &random_image(&mut rng, 4, 4)).is_err());
    }

    #[test]
    fn report_text_has_stable_fields() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let img = random_image(&mut rng, 4, 4);
        let key = SecretKey::new(1, 7, (0.501, 3.81), (0.401, 3.68)).unwrap();
        let report = recover_equivalent_key(&img, &encrypt(&img, &key).unwrap()).unwrap();
        let text = report.to_text();
        assert!(text.starts_with(
            "status=ok\nfailure_stage=none\nmap_c=1\nk1_candidates=1,7\nk1=1\nk2_class=B\n"
        ));
        let constant = RgbImage::filled(4, 4, [0, 0, 0]).unwrap();
        let report = recover_equivalent_key(&constant, &encrypt(&constant, &key).unwrap()).unwrap();
        assert!(report
            .to_text()
            .contains("status=failed\nfailure_stage=NoStep"));
    }

    #[test]
    fn equivalent_key_file_round_trip_and_validation() {
        let key = SecretKey::new(1, 7, (0.501, 3.81), (0.401, 3.68)).unwrap();
        let ek = EquivalentKey::from_secret_key(&key, 3, 2).unwrap();
        let bytes = ek.to_bytes();
        assert_eq!(&bytes[..4], b"EQK1");
        assert_eq!(&bytes[4..13], &[3, 0, 0, 0, 2, 0, 0, 0, 1]);
        assert_eq!(bytes.len(), 13 + 24);
        assert_eq!(EquivalentKey::from_bytes(&bytes).unwrap(), ek);

        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(EquivalentKey::from_bytes(&bad).is_err());
        assert!(EquivalentKey::from_bytes(&bytes[..bytes.len() - 1]).is_err());
        let mut bad = bytes.clone();
        bad[12] = 9;
        assert!(EquivalentKey::from_bytes(&bad).is_err());
        let mut bad = bytes.clone();
        bad[13] = 0;
        assert!(EquivalentKey::from_bytes(&bad).is_err());
        // Mixing classes is not an equivalent key of any secret key.
        let mut bad = bytes.clone();
        bad[13] = if rule_class(ek.rules()[0]) == RuleClass::ClassA {
            2
        } else {
            1
        };
        assert!(EquivalentKey::from_bytes(&bad).is_err());
    }

    #[test]
    fn equivalent_decrypt_checks_geometry() {
        let key = SecretKey::new(1, 7, (0.501, 3.81), (0.401, 3.68)).unwrap();
        let ek = EquivalentKey::from_secret_key(&key, 3, 2).unwrap();
        assert!(equivalent_decrypt(&RgbImage::filled(2, 3, [0; 3]).unwrap(), &ek).is_err());
        assert!(equivalent_decrypt(&RgbImage::filled(3, 2, [0; 3]).unwrap(), &ek).is_ok());
    }

    #[test]
    fn contradictory_pattern_is_inconsistent() {
        // Plain (1, 0, 0) adds to (A, T, G) under rule 1 and (T, C, T) under
        // rule 7; a cipher triple with all digits equal fits neither.
        let plain = DigitImage::new(1, 1, vec![d(1); 4], vec![d(0); 4], vec![d(0); 4]).unwrap();
        let cipher = DigitImage::new(1, 1, vec![d(2); 4], vec![d(2); 4], vec![d(2); 4]).unwrap();
        let pair = KnownPair::new(plain, cipher).unwrap();
        assert_eq!(
            pair.recover_k1(d(1)),
            Err(AttackFailure::InconsistentPair { position: 0 })
        );
        let added = vec![[A, G, T]; 4];
        let cipher = DigitImage::new(1, 1, vec![d(0); 4], vec![d(0); 4], vec![d(0); 4]).unwrap();
        assert_eq!(
            class_from_added(&added, &cipher),
            Err(AttackFailure::InconsistentPair { position: 0 })
        );
    }
}
