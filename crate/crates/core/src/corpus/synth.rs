//! Deterministic synthetic test images.
//!
//! These stand in for the usual natural test photographs, which cannot be
//! bundled. Every generator is a pure function of its arguments.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::GrayImage;
use crate::error::{arg_err, Error, Result};

pub const MIN_SYNTH_SIZE: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SynthKind {
    /// Slowly varying ramp with one-level grain; horizontal neighbours differ by at most 2.
    SmoothGradient,
    /// Multi-octave value noise with per-pixel grain.
    Texture,
    /// One-pixel checkerboard alternating between two levels by parity of `i + j`.
    Checker { even: u8, odd: u8 },
}

impl SynthKind {
    pub const CHECKER: SynthKind = SynthKind::Checker { even: 64, odd: 192 };
}

impl fmt::Display for SynthKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SynthKind::SmoothGradient => f.write_str("smooth-gradient"),
            SynthKind::Texture => f.write_str("texture"),
            SynthKind::Checker { .. } => f.write_str("checker"),
        }
    }
}

impl FromStr for SynthKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "smooth-gradient" | "smooth" | "gradient" => Ok(SynthKind::SmoothGradient),
            "texture" => Ok(SynthKind::Texture),
            "checker" => Ok(SynthKind::CHECKER),
            other => arg_err(format!("unknown synthetic image kind {other:?}")),
        }
    }
}

/// Generates a `size` x `size` synthetic image.
pub fn synth_image(kind: SynthKind, size: usize, seed: u64) -> Result<GrayImage> {
    if size < MIN_SYNTH_SIZE {
        return arg_err(format!("synthetic image size {size} below {MIN_SYNTH_SIZE}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(match kind {
        SynthKind::Checker { even, odd } => {
            GrayImage::from_fn(size, size, |i, j| if (i + j) % 2 == 0 { even } else { odd })
        }
        SynthKind::SmoothGradient => smooth_gradient(size, &mut rng),
        SynthKind::Texture => texture(size, &mut rng),
    })
}

fn smooth_gradient(size: usize, rng: &mut ChaCha8Rng) -> GrayImage {
    // The continuous surface changes by at most 0.5 per pixel, so its rounded
    // steps are at most 1; one-level sensor grain adds at most 1 more.
    let span = (150.0 / size as f64).min(1.0);
    let gx = rng.gen_range(-0.25..0.25) * span;
    let gy = rng.gen_range(-0.25..0.25) * span;
    let amp = rng.gen_range(4.0..16.0);
    let wx = 0.25 / amp * rng.gen_range(0.3..1.0);
    let wy = rng.gen_range(0.01..0.08);
    let (px, py) = (rng.gen_range(0.0..TAU), rng.gen_range(0.0..TAU));
    let half = size as f64 / 2.0;
    let center = 128.0 + rng.gen_range(-30.0..30.0);
    GrayImage::from_fn(size, size, |i, j| {
        let (x, y) = (j as f64 - half, i as f64 - half);
        let v = center + gx * x + gy * y + amp * (wx * x + px).sin() * (wy * y + py).sin();
        let grain = rng.gen_bool(0.5) as u8 as f64;
        (v.round() + grain).clamp(0.0, 255.0) as u8
    })
}

fn texture(size: usize, rng: &mut ChaCha8Rng) -> GrayImage {
    let octaves: [(usize, f64); 4] = [(32, 60.0), (16, 30.0), (8, 16.0), (4, 8.0)];
    let mut field = vec![0.0f64; size * size];
    for (cell, amp) in octaves {
        let n = size / cell + 2;
        let lattice: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0) * amp).collect();
        for i in 0..size {
            for j in 0..size {
                let (fy, fx) = (i as f64 / cell as f64, j as f64 / cell as f64);
                let (y0, x0) = (fy.floor() as usize, fx.floor() as usize);
                let (ty, tx) = (smoothstep(fy - y0 as f64), smoothstep(fx - x0 as f64));
                let at = |y: usize, x: usize| lattice[y * n + x];
                let top = at(y0, x0) * (1.0 - tx) + at(y0, x0 + 1) * tx;
                let bottom = at(y0 + 1, x0) * (1.0 - tx) + at(y0 + 1, x0 + 1) * tx;
                field[i * size + j] += top * (1.0 - ty) + bottom * ty;
            }
        }
    }
    let grain = 6.0;
    GrayImage::from_fn(size, size, |i, j| {
        let v = 128.0 + field[i * size + j] + rng.gen_range(-grain..grain);
        v.round().clamp(0.0, 255.0) as u8
    })
}

fn smoothstep(t: f64) -> f64 {
    t * t * (3.0 - 2.0 * t)
}

/// The bundled experiment corpus: named synthetic images of equal size.
pub fn bundled_corpus(size: usize) -> Vec<(String, GrayImage)> {
    const MEMBERS: [(SynthKind, u64); 8] = [
        (SynthKind::Texture, 1),
        (SynthKind::Texture, 2),
        (SynthKind::Texture, 3),
        (SynthKind::Texture, 4),
        (SynthKind::Texture, 5),
        (SynthKind::SmoothGradient, 1),
        (SynthKind::SmoothGradient, 2),
        (SynthKind::SmoothGradient, 3),
    ];
    MEMBERS
        .iter()
        .map(|&(kind, seed)| {
            let img = synth_image(kind, size, seed).expect("bundled corpus size is valid");
            (format!("{kind}-{seed}"), img)
        })
        .collect()
}
