//! Secret keys and the two logistic-map keystreams.
//!
//! Orbits are evaluated in binary64 as `(mu * x) * (1 - x)`. Rust never
//! contracts that into a fused multiply-add, so the keystreams are
//! bit-identical across platforms.

use std::fmt::Write as _;

use rand::Rng;

use crate::dna::{Digit, MapRule};
use crate::error::{Error, Result};
use crate::image::byte_to_digits;

/// Lower (exclusive) bound of the control parameter.
pub const MU_MIN: f64 = 3.569945;
/// Upper (exclusive) bound of the control parameter.
pub const MU_MAX: f64 = 4.0;

/// Initial condition and control parameter of one logistic map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticParams {
    x0: f64,
    mu: f64,
}

impl LogisticParams {
    /// Requires `0 < x0 < 1` and `3.569945 < mu < 4`, both strict.
    pub fn new(x0: f64, mu: f64) -> Result<LogisticParams> {
        if !(x0 > 0.0 && x0 < 1.0) {
            return Err(Error::InvalidParams(format!("x0={x0} is not in (0, 1)")));
        }
        if !(mu > MU_MIN && mu < MU_MAX) {
            return Err(Error::InvalidParams(format!(
                "mu={mu} is not in ({MU_MIN}, {MU_MAX})"
            )));
        }
        Ok(LogisticParams { x0, mu })
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Uniform draw from the open parameter box.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> LogisticParams {
        let x0 = open_uniform(rng, 0.0, 1.0);
        let mu = open_uniform(rng, MU_MIN, MU_MAX);
        LogisticParams { x0, mu }
    }
}

fn open_uniform<R: Rng + ?Sized>(rng: &mut R, low: f64, high: f64) -> f64 {
    loop {
        let v = rng.gen_range(low..high);
        if v > low {
            return v;
        }
    }
}

/// One step of the logistic map with the fixed association `(mu * x) * (1 - x)`.
#[inline]
pub fn logistic_step(mu: f64, x: f64) -> f64 {
    (mu * x) * (1.0 - x)
}

/// The first `n` iterates `S_1..S_n` of `x0` (the seed itself is not emitted).
pub fn logistic_orbit(params: &LogisticParams, n: usize) -> Result<Vec<f64>> {
    // Re-validate: the fields are private, but this keeps the contract local.
    let params = LogisticParams::new(params.x0, params.mu)?;
    let mut out = Vec::with_capacity(n);
    let mut x = params.x0;
    for step in 1..=n {
        x = logistic_step(params.mu, x);
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::KeystreamDegenerate { step, value: x });
        }
        out.push(x);
    }
    Ok(out)
}

/// Complement selector for one orbit value: `false` iff `s <= 0.5`.
#[inline]
pub fn z_bit(s: f64) -> bool {
    s > 0.5
}

/// `floor(s * 10^5) mod 256`.
#[inline]
pub fn mask_byte(s: f64) -> u8 {
    let scaled = (s * 1e5).floor();
    (scaled as u64 % 256) as u8
}

/// The 4-digit mask block for one orbit value, most significant digit first.
#[inline]
pub fn mask_block(s: f64) -> [Digit; 4] {
    byte_to_digits(mask_byte(s))
}

/// Complement-selector stream: `4 * pixels` bits from `4 * pixels` iterates.
pub fn z_sequence(params: &LogisticParams, pixels: usize) -> Result<Vec<bool>> {
    Ok(logistic_orbit(params, 4 * pixels)?
        .into_iter()
        .map(z_bit)
        .collect())
}

/// Mask-digit stream: `4 * pixels` digits from `pixels` iterates.
pub fn t_sequence(params: &LogisticParams, pixels: usize) -> Result<Vec<Digit>> {
    Ok(logistic_orbit(params, pixels)?
        .into_iter()
        .flat_map(mask_block)
        .collect())
}

/// The cipher's secret key.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecretKey {
    pub k1: MapRule,
    pub k2: MapRule,
    /// `(x0, mu0)`, drives the complement selector.
    pub primary: LogisticParams,
    /// `(x0', mu0')`, drives the mask digits.
    pub mask: LogisticParams,
}

const KEY_FIELDS: [&str; 6] = ["k1", "k2", "x0", "mu0", "x0p", "mu0p"];

impl SecretKey {
    pub fn new(
        k1: u8,
        k2: u8,
        (x0, mu0): (f64, f64),
        (x0p, mu0p): (f64, f64),
    ) -> Result<SecretKey> {
        Ok(SecretKey {
            k1: MapRule::try_from(k1)?,
            k2: MapRule::try_from(k2)?,
            primary: LogisticParams::new(x0, mu0)?,
            mask: LogisticParams::new(x0p, mu0p)?,
        })
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> SecretKey {
        let k1 = MapRule::ALL[rng.gen_range(0..8)];
        let k2 = MapRule::ALL[rng.gen_range(0..8)];
        SecretKey {
            k1,
            k2,
            primary: LogisticParams::random(rng),
            mask: LogisticParams::random(rng),
        }
    }

    /// Six `name=value` lines; floats use the shortest round-trip form.
    pub fn to_key_file(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "k1={}", self.k1);
        let _ = writeln!(s, "k2={}", self.k2);
        let _ = writeln!(s, "x0={:?}", self.primary.x0);
        let _ = writeln!(s, "mu0={:?}", self.primary.mu);
        let _ = writeln!(s, "x0p={:?}", self.mask.x0);
        let _ = writeln!(s, "mu0p={:?}", self.mask.mu);
        s
    }

    /// Parses the six-line key file. Every field must appear exactly once.
    pub fn from_key_file(text: &str) -> Result<SecretKey> {
        let mut values: [Option<&str>; 6] = [None; 6];
        let mut lines = 0;
        for raw in text.lines() {
            let line = raw.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            lines += 1;
            let (name, value) = line
                .split_once('=')
                .ok_or_else(|| Error::KeyFile(format!("line without '=': {line:?}")))?;
            let slot = KEY_FIELDS
                .iter()
                .position(|f| *f == name.trim())
                .ok_or_else(|| Error::KeyFile(format!("unknown field {name:?}")))?;
            if values[slot].replace(value.trim()).is_some() {
                return Err(Error::KeyFile(format!("duplicate field {name:?}")));
            }
        }
        if lines != 6 {
            return Err(Error::KeyFile(format!("expected 6 lines, found {lines}")));
        }
        let get = |i: usize| values[i].expect("all six fields present");
        let rule = |i: usize| -> Result<u8> {
            let v: i64 = get(i)
                .parse()
                .map_err(|_| Error::KeyFile(format!("{} is not an integer", KEY_FIELDS[i])))?;
            u8::try_from(v)
                .ok()
                .and_then(MapRule::new)
                .map(MapRule::index)
                .ok_or(Error::InvalidRule(v))
        };
        let real = |i: usize| -> Result<f64> {
            get(i)
                .parse()
                .map_err(|_| Error::KeyFile(format!("{} is not a decimal", KEY_FIELDS[i])))
        };
        SecretKey::new(
            rule(0)?,
            rule(1)?,
            (real(2)?, real(3)?),
            (real(4)?, real(5)?),
        )
    }
}

/// Complement selectors `z` and mask digits `t`, `4L` of each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Keystreams {
    z: Vec<bool>,
    t: Vec<Digit>,
}

impl Keystreams {
    /// Pre-supplied streams, bypassing the logistic maps.
    pub fn new(z: Vec<bool>, t: Vec<Digit>) -> Result<Keystreams> {
        if z.len() != t.len() {
            return Err(Error::LengthMismatch {
                expected: z.len(),
                actual: t.len(),
            });
        }
        if z.is_empty() || !z.len().is_multiple_of(4) {
            return Err(Error::LengthMismatch {
                expected: 4 * z.len().div_ceil(4).max(1),
                actual: z.len(),
            });
        }
        Ok(Keystreams { z, t })
    }

    /// Constant streams for `pixels` pixels.
    pub fn constant(pixels: usize, z: bool, t: Digit) -> Keystreams {
        Keystreams {
            z: vec![z; 4 * pixels],
            t: vec![t; 4 * pixels],
        }
    }

    pub fn generate(key: &SecretKey, pixels: usize) -> Result<Keystreams> {
        if pixels == 0 {
            return Err(Error::EmptyImage);
        }
        Ok(Keystreams {
            z: z_sequence(&key.primary, pixels)?,
            t: t_sequence(&key.mask, pixels)?,
        })
    }

    pub fn z(&self) -> &[bool] {
        &self.z
    }

    pub fn t(&self) -> &[Digit] {
        &self.t
    }

    pub fn pixel_count(&self) -> usize {
        self.z.len() / 4
    }
}
