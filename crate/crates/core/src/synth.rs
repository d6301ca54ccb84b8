//! Deterministic synthetic images with natural-image statistics: smooth
//! low-frequency structure, soft-edged objects, correlated channels and a
//! little sensor noise. Used for test fixtures and demos where real
//! photographs are not available.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::image::RgbImage;

struct Wave {
    fx: f64,
    fy: f64,
    phase: f64,
    amp: f64,
}

struct Blob {
    cx: f64,
    cy: f64,
    radius: f64,
    color: [f64; 3],
}

/// A `width`×`height` image drawn from `seed`. Panics on zero dimensions.
pub fn natural_image(width: usize, height: usize, seed: u64) -> RgbImage {
    assert!(width > 0 && height > 0, "image dimensions must be non-zero");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Shared luminance field plus weaker per-channel fields.
    let waves = |n: usize, amp: f64, rng: &mut ChaCha8Rng| -> Vec<Wave> {
        (0..n)
            .map(|_| Wave {
                fx: rng.gen_range(0.2..3.0),
                fy: rng.gen_range(0.2..3.0),
                phase: rng.gen_range(0.0..TAU),
                amp: amp * rng.gen_range(0.3..1.0),
            })
            .collect()
    };
    let luminance = waves(5, 45.0, &mut rng);
    let chroma: Vec<Vec<Wave>> = (0..3).map(|_| waves(3, 18.0, &mut rng)).collect();
    let tint: [f64; 3] = [
        rng.gen_range(90.0..170.0),
        rng.gen_range(80.0..160.0),
        rng.gen_range(60.0..150.0),
    ];
    let blobs: Vec<Blob> = (0..rng.gen_range(3..8))
        .map(|_| Blob {
            cx: rng.gen_range(0.0..1.0),
            cy: rng.gen_range(0.0..1.0),
            radius: rng.gen_range(0.08..0.3),
            color: [
                rng.gen_range(-70.0..70.0),
                rng.gen_range(-70.0..70.0),
                rng.gen_range(-70.0..70.0),
            ],
        })
        .collect();
    let noise = Normal::new(0.0, 3.0).expect("valid sigma");

    let eval = |ws: &[Wave], u: f64, v: f64| -> f64 {
        ws.iter()
            .map(|w| w.amp * (TAU * (w.fx * u + w.fy * v) + w.phase).sin())
            .sum()
    };

    let mut pixels = Vec::with_capacity(width * height);
    for y in 0..height {
        let v = y as f64 / height as f64;
        for x in 0..width {
            let u = x as f64 / width as f64;
            let lum = eval(&luminance, u, v);
            let mut px = [0u8; 3];
            for c in 0..3 {
                let mut value = tint[c] + lum + eval(&chroma[c], u, v);
                for b in &blobs {
                    let d2 = (u - b.cx).powi(2) + (v - b.cy).powi(2);
                    // Soft edge: logistic falloff around the radius.
                    let inside = 1.0 / (1.0 + ((d2.sqrt() - b.radius) * 60.0).exp());
                    value += b.color[c] * inside;
                }
                value += noise.sample(&mut rng);
                px[c] = value.round().clamp(0.0, 255.0) as u8;
            }
            pixels.push(px);
        }
    }
    RgbImage::new(width, height, pixels).expect("dimensions checked above")
}

/// Uniform random bytes in every channel.
pub fn noise_image(width: usize, height: usize, seed: u64) -> RgbImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data: Vec<u8> = (0..width * height * 3).map(|_| rng.gen()).collect();
    RgbImage::from_interleaved(width, height, &data).expect("non-empty geometry")
}
