//! Lossy core of baseline JPEG used as an attack channel.
//!
//! Each 8x8 block is level shifted by -128, transformed with the orthonormal
//! 2-D DCT-II, quantized with a luminance table scaled to the quality factor,
//! dequantized, inverse transformed, shifted back, rounded half-up and
//! clamped to `[0, 255]`. Entropy coding is lossless and therefore omitted.

#![allow(clippy::needless_range_loop)]

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::corpus::GrayImage;
use crate::error::{arg_err, Result};

pub type Block = [[f64; 8]; 8];

/// The standard JPEG luminance quantization table (quality 50).
pub const BASE_LUMINANCE: [[u16; 8]; 8] = [
    [16, 11, 10, 16, 24, 40, 51, 61],
    [12, 12, 14, 19, 26, 58, 60, 55],
    [14, 13, 16, 24, 40, 57, 69, 56],
    [14, 17, 22, 29, 51, 87, 80, 62],
    [18, 22, 37, 56, 68, 109, 103, 77],
    [24, 35, 55, 64, 81, 104, 113, 92],
    [49, 64, 78, 87, 103, 121, 120, 101],
    [72, 92, 95, 98, 112, 100, 103, 99],
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantTable {
    pub qf: u8,
    pub steps: [[u16; 8]; 8],
}

pub fn check_quality(qf: u8) -> Result<()> {
    if !(1..=100).contains(&qf) {
        return arg_err(format!("quality factor {qf} outside [1,100]"));
    }
    Ok(())
}

/// Luminance table for quality `qf` using the conventional IJG scaling.
pub fn quant_table(qf: u8) -> Result<QuantTable> {
    check_quality(qf)?;
    let qf = qf as u32;
    let scale = if qf < 50 { 5000 / qf } else { 200 - 2 * qf };
    let mut steps = [[0u16; 8]; 8];
    for (row, base_row) in steps.iter_mut().zip(&BASE_LUMINANCE) {
        for (step, &base) in row.iter_mut().zip(base_row) {
            *step = ((base as u32 * scale + 50) / 100).clamp(1, 255) as u16;
        }
    }
    Ok(QuantTable {
        qf: qf as u8,
        steps,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DctBlock {
    pub coeffs: Block,
}

/// `basis[u][i] = alpha(u) / 2 * cos((2i + 1) u pi / 16)`.
fn basis() -> &'static Block {
    static BASIS: OnceLock<Block> = OnceLock::new();
    BASIS.get_or_init(|| {
        let mut c = [[0.0; 8]; 8];
        for (u, row) in c.iter_mut().enumerate() {
            let alpha = if u == 0 { std::f64::consts::FRAC_1_SQRT_2 } else { 1.0 };
            for (i, value) in row.iter_mut().enumerate() {
                let angle = (2 * i + 1) as f64 * u as f64 * std::f64::consts::PI / 16.0;
                *value = 0.5 * alpha * angle.cos();
            }
        }
        c
    })
}

/// Forward 2-D DCT of an already level-shifted block.
pub fn dct2_block(block: &Block) -> DctBlock {
    let c = basis();
    // rows first: tmp[i][v] = sum_j block[i][j] c[v][j]
    let mut tmp = [[0.0; 8]; 8];
    for i in 0..8 {
        for v in 0..8 {
            tmp[i][v] = (0..8).map(|j| block[i][j] * c[v][j]).sum();
        }
    }
    let mut coeffs = [[0.0; 8]; 8];
    for u in 0..8 {
        for v in 0..8 {
            coeffs[u][v] = (0..8).map(|i| c[u][i] * tmp[i][v]).sum();
        }
    }
    DctBlock { coeffs }
}

/// Inverse of [`dct2_block`] (the transpose of the orthonormal transform).
pub fn idct2_block(coeffs: &DctBlock) -> Block {
    let c = basis();
    let o = &coeffs.coeffs;
    let mut tmp = [[0.0; 8]; 8];
    for u in 0..8 {
        for j in 0..8 {
            tmp[u][j] = (0..8).map(|v| o[u][v] * c[v][j]).sum();
        }
    }
    let mut block = [[0.0; 8]; 8];
    for i in 0..8 {
        for j in 0..8 {
            block[i][j] = (0..8).map(|u| c[u][i] * tmp[u][j]).sum();
        }
    }
    block
}

/// `round(o / q)` with halves rounded away from zero.
pub fn quantize(coeffs: &DctBlock, table: &QuantTable) -> [[i32; 8]; 8] {
    let mut r = [[0; 8]; 8];
    for u in 0..8 {
        for v in 0..8 {
            r[u][v] = (coeffs.coeffs[u][v] / table.steps[u][v] as f64).round() as i32;
        }
    }
    r
}

pub fn dequantize(r: &[[i32; 8]; 8], table: &QuantTable) -> DctBlock {
    let mut coeffs = [[0.0; 8]; 8];
    for u in 0..8 {
        for v in 0..8 {
            coeffs[u][v] = r[u][v] as f64 * table.steps[u][v] as f64;
        }
    }
    DctBlock { coeffs }
}

fn roundtrip_block(pixels: &Block, table: &QuantTable) -> [[u8; 8]; 8] {
    let mut shifted = *pixels;
    shifted.iter_mut().flatten().for_each(|p| *p -= 128.0);
    let restored = idct2_block(&dequantize(&quantize(&dct2_block(&shifted), table), table));
    let mut out = [[0u8; 8]; 8];
    for (out_row, row) in out.iter_mut().zip(&restored) {
        for (o, &x) in out_row.iter_mut().zip(row) {
            *o = (x + 128.0 + 0.5).floor().clamp(0.0, 255.0) as u8;
        }
    }
    out
}

/// Quantize/dequantize roundtrip of the whole image at quality `qf`.
///
/// Dimensions that are not multiples of 8 are padded by edge replication and
/// the result is cropped back. Blocks are processed in parallel; the output
/// does not depend on scheduling.
pub fn compress_roundtrip(image: &GrayImage, qf: u8) -> Result<GrayImage> {
    let table = quant_table(qf)?;
    let (w, h) = (image.width(), image.height());
    if w == 0 || h == 0 {
        return Ok(image.clone());
    }
    let (bw, bh) = (w.div_ceil(8), h.div_ceil(8));
    let fetch = |i: usize, j: usize| image.get(i.min(h - 1), j.min(w - 1)) as f64;

    let blocks: Vec<[[u8; 8]; 8]> = (0..bw * bh)
        .into_par_iter()
        .map(|b| {
            let (bi, bj) = (b / bw * 8, b % bw * 8);
            let mut block = [[0.0; 8]; 8];
            for (y, row) in block.iter_mut().enumerate() {
                for (x, p) in row.iter_mut().enumerate() {
                    *p = fetch(bi + y, bj + x);
                }
            }
            roundtrip_block(&block, &table)
        })
        .collect();

    let mut out = image.clone();
    for (b, block) in blocks.iter().enumerate() {
        let (bi, bj) = (b / bw * 8, b % bw * 8);
        for (y, row) in block.iter().enumerate() {
            for (x, &p) in row.iter().enumerate() {
                if bi + y < h && bj + x < w {
                    out.set(bi + y, bj + x, p);
                }
            }
        }
    }
    Ok(out)
}
