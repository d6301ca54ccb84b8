//! RGB images and their base-4 digit representation.
//!
//! Each channel byte expands to four digits, most significant first, so the
//! digit block `(d0, d1, d2, d3)` of a byte satisfies
//! `byte = d0·64 + d1·16 + d2·4 + d3`.

use crate::dna::Digit;
use crate::error::{Error, Result};

/// Expand a byte to its base-4 digits, most significant first.
#[inline]
pub fn byte_to_digits(byte: u8) -> [Digit; 4] {
    [
        Digit::from_low_bits(byte >> 6),
        Digit::from_low_bits(byte >> 4),
        Digit::from_low_bits(byte >> 2),
        Digit::from_low_bits(byte),
    ]
}

#[inline]
pub fn digits_to_byte(block: [Digit; 4]) -> u8 {
    block.iter().fold(0u8, |acc, d| (acc << 2) | d.value())
}

/// An 8-bit RGB image in raster order (row-major, top-left first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    pixels: Vec<[u8; 3]>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize, pixels: Vec<[u8; 3]>) -> Result<RgbImage> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage);
        }
        let expected = width
            .checked_mul(height)
            .ok_or_else(|| Error::Ppm(format!("{width}x{height} overflows")))?;
        if pixels.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: pixels.len(),
            });
        }
        Ok(RgbImage {
            width,
            height,
            pixels,
        })
    }

    /// From interleaved `RGBRGB...` bytes.
    pub fn from_interleaved(width: usize, height: usize, data: &[u8]) -> Result<RgbImage> {
        if !data.len().is_multiple_of(3) {
            return Err(Error::LengthMismatch {
                expected: data.len() / 3 * 3,
                actual: data.len(),
            });
        }
        let pixels = data.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
        RgbImage::new(width, height, pixels)
    }

    pub fn filled(width: usize, height: usize, color: [u8; 3]) -> Result<RgbImage> {
        RgbImage::new(width, height, vec![color; width.saturating_mul(height)])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Pixel count `L`.
    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[[u8; 3]] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [[u8; 3]] {
        &mut self.pixels
    }

    pub fn to_interleaved(&self) -> Vec<u8> {
        self.pixels.iter().flatten().copied().collect()
    }

    /// One channel (0 = R, 1 = G, 2 = B) as a byte plane.
    pub fn channel(&self, c: usize) -> Vec<u8> {
        self.pixels.iter().map(|p| p[c]).collect()
    }

    pub fn same_geometry(&self, other: &RgbImage) -> Result<()> {
        check_geometry((self.width, self.height), (other.width, other.height))
    }

    pub fn to_digits(&self) -> DigitImage {
        image_to_digits(self)
    }
}

pub(crate) fn check_geometry(left: (usize, usize), right: (usize, usize)) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::GeometryMismatch {
            left_w: left.0,
            left_h: left.1,
            right_w: right.0,
            right_h: right.1,
        })
    }
}

/// Per-channel digit sequences of length `4L` plus the image geometry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitImage {
    width: usize,
    height: usize,
    pub r: Vec<Digit>,
    pub g: Vec<Digit>,
    pub b: Vec<Digit>,
}

impl DigitImage {
    pub fn new(
        width: usize,
        height: usize,
        r: Vec<Digit>,
        g: Vec<Digit>,
        b: Vec<Digit>,
    ) -> Result<DigitImage> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage);
        }
        let expected = 4 * width * height;
        for ch in [&r, &g, &b] {
            if ch.len() != expected {
                return Err(Error::LengthMismatch {
                    expected,
                    actual: ch.len(),
                });
            }
        }
        Ok(DigitImage {
            width,
            height,
            r,
            g,
            b,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Number of digit positions, `4L`.
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    #[inline]
    pub fn triple(&self, i: usize) -> [Digit; 3] {
        [self.r[i], self.g[i], self.b[i]]
    }

    pub fn same_geometry(&self, other: &DigitImage) -> Result<()> {
        check_geometry((self.width, self.height), (other.width, other.height))
    }

    pub fn to_image(&self) -> RgbImage {
        digits_to_image(self)
    }
}

/// Expand every channel byte into its four-digit block.
pub fn image_to_digits(img: &RgbImage) -> DigitImage {
    let n = 4 * img.len();
    let mut r = Vec::with_capacity(n);
    let mut g = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for px in img.pixels() {
        r.extend(byte_to_digits(px[0]));
        g.extend(byte_to_digits(px[1]));
        b.extend(byte_to_digits(px[2]));
    }
    DigitImage {
        width: img.width,
        height: img.height,
        r,
        g,
        b,
    }
}

/// Reassemble bytes from four-digit blocks; inverse of [`image_to_digits`].
pub fn digits_to_image(d: &DigitImage) -> RgbImage {
    let block = |ch: &[Digit], i: usize| -> u8 {
        digits_to_byte(ch[4 * i..4 * i + 4].try_into().expect("4-digit block"))
    };
    let pixels = (0..d.len() / 4)
        .map(|i| [block(&d.r, i), block(&d.g, i), block(&d.b, i)])
        .collect();
    RgbImage {
        width: d.width,
        height: d.height,
        pixels,
    }
}
