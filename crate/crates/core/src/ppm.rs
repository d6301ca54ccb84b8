//! Binary PPM (P6) with `maxval = 255`.
//!
//! Header comments are accepted on read and never written. Output is always
//! the canonical `P6\n<w> <h>\n255\n` followed by raw RGB triples.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::RgbImage;

struct Header<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Header<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&c) = self.data.get(self.pos) {
            if c.is_ascii_whitespace() {
                self.pos += 1;
            } else if c == b'#' {
                while let Some(&c) = self.data.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Ppm(format!("expected {what}")));
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Ppm(format!("{what} out of range")))
    }
}

pub fn read_ppm(bytes: &[u8]) -> Result<RgbImage> {
    if bytes.len() < 2 || &bytes[..2] != b"P6" {
        return Err(Error::Ppm("missing P6 magic".into()));
    }
    let mut h = Header {
        data: bytes,
        pos: 2,
    };
    if !h
        .data
        .get(2)
        .is_some_and(|c| c.is_ascii_whitespace() || *c == b'#')
    {
        return Err(Error::Ppm("missing P6 magic".into()));
    }
    let width = h.number("width")?;
    let height = h.number("height")?;
    let maxval = h.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::EmptyImage);
    }
    if maxval != 255 {
        return Err(Error::Ppm(format!(
            "maxval {maxval} unsupported (need 255)"
        )));
    }
    // Exactly one whitespace byte separates the header from the raster.
    if !h.data.get(h.pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(Error::Ppm("missing whitespace after maxval".into()));
    }
    let start = h.pos + 1;
    let need = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(3))
        .ok_or_else(|| Error::Ppm("dimensions overflow".into()))?;
    let raster = bytes
        .get(start..)
        .filter(|r| r.len() >= need)
        .ok_or_else(|| {
            Error::Ppm(format!(
                "truncated pixel data: need {need} bytes, have {}",
                bytes.len().saturating_sub(start)
            ))
        })?;
    RgbImage::from_interleaved(width, height, &raster[..need])
}

pub fn write_ppm(img: &RgbImage) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.reserve(3 * img.len());
    out.extend(img.pixels().iter().flatten());
    out
}

pub fn load(path: impl AsRef<Path>) -> Result<RgbImage> {
    read_ppm(&fs::read(path)?)
}
