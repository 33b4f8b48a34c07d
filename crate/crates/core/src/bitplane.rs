//! MSB/LSB decomposition of 8-bit pixels and bit-plane comparison.
//!
//! A pixel `p` split at `n` LSB planes becomes a working value
//! `v = p >> n` and a remainder `l = p & (2^n - 1)`; `p = v * 2^n + l`.
//! The working value is what the embedding arithmetic operates on.

use crate::corpus::GrayImage;
use crate::error::{arg_err, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MsbLsbSplit {
    n: u8,
    width: usize,
    height: usize,
    msb: Vec<u8>,
    lsb: Vec<u8>,
}

impl MsbLsbSplit {
    /// Builds a split from raw parts. Values are checked against their plane bounds.
    pub fn from_parts(n: u8, width: usize, height: usize, msb: Vec<u8>, lsb: Vec<u8>) -> Result<Self> {
        check_plane_count(n)?;
        if msb.len() != width * height || lsb.len() != width * height {
            return arg_err("split buffers do not match the image dimensions");
        }
        let lsb_max = lsb_max(n);
        if lsb.iter().any(|&l| l as u32 > lsb_max) {
            return arg_err(format!("LSB remainder exceeds {lsb_max}"));
        }
        Ok(Self {
            n,
            width,
            height,
            msb,
            lsb,
        })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    /// Largest working value, `2^(8-n) - 1`.
    pub fn vmax(&self) -> i32 {
        msb_max(self.n)
    }

    pub fn msb(&self) -> &[u8] {
        &self.msb
    }

    pub fn msb_mut(&mut self) -> &mut [u8] {
        &mut self.msb
    }

    pub fn lsb(&self) -> &[u8] {
        &self.lsb
    }

    #[inline]
    pub fn v(&self, i: usize, j: usize) -> i32 {
        self.msb[i * self.width + j] as i32
    }

    /// Stores a working value; it must lie in `[0, vmax]`.
    pub fn set_v(&mut self, i: usize, j: usize, v: i32) -> Result<()> {
        let max = self.vmax();
        if v < 0 {
            return Err(Error::Underflow { value: v });
        }
        if v > max {
            return Err(Error::Overflow { value: v, max });
        }
        self.msb[i * self.width + j] = v as u8;
        Ok(())
    }

    #[inline]
    pub fn l(&self, i: usize, j: usize) -> u8 {
        self.lsb[i * self.width + j]
    }

    /// The unshifted MSB part `x = v * 2^n`.
    pub fn x(&self, i: usize, j: usize) -> u32 {
        (self.v(i, j) as u32) << self.n
    }
}

fn check_plane_count(n: u8) -> Result<()> {
    if !(1..=8).contains(&n) {
        return arg_err(format!("LSB plane count {n} outside [1,8]"));
    }
    Ok(())
}

pub fn msb_max(n: u8) -> i32 {
    (1i32 << (8 - n as u32)) - 1
}

fn lsb_max(n: u8) -> u32 {
    (1u32 << n) - 1
}

pub fn split(image: &GrayImage, n: u8) -> Result<MsbLsbSplit> {
    check_plane_count(n)?;
    let mask = lsb_max(n) as u8;
    let px = image.pixels();
    Ok(MsbLsbSplit {
        n,
        width: image.width(),
        height: image.height(),
        // n = 8 shifts a u8 out entirely; widen first
        msb: px.iter().map(|&p| ((p as u32) >> n) as u8).collect(),
        lsb: px.iter().map(|&p| p & mask).collect(),
    })
}

pub fn combine(s: &MsbLsbSplit) -> Result<GrayImage> {
    let pixels = s
        .msb
        .iter()
        .zip(&s.lsb)
        .map(|(&v, &l)| {
            let p = ((v as u32) << s.n) + l as u32;
            if p > 255 {
                Err(Error::Overflow {
                    value: v as i32,
                    max: s.vmax(),
                })
            } else {
                Ok(p as u8)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    GrayImage::new(s.width, s.height, pixels)
}

/// One bit plane; `k = 1` is the least significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitPlane {
    pub k: u8,
    pub width: usize,
    pub height: usize,
    pub bits: Vec<u8>,
}

fn check_plane_index(k: u8) -> Result<()> {
    if !(1..=8).contains(&k) {
        return arg_err(format!("bit plane index {k} outside [1,8]"));
    }
    Ok(())
}

pub fn extract_plane(image: &GrayImage, k: u8) -> Result<BitPlane> {
    check_plane_index(k)?;
    Ok(BitPlane {
        k,
        width: image.width(),
        height: image.height(),
        bits: image.pixels().iter().map(|&p| (p >> (k - 1)) & 1).collect(),
    })
}

/// Number of bit changes in plane `k` between `a` and `b`.
pub fn plane_diff_count(a: &GrayImage, b: &GrayImage, k: u8) -> Result<usize> {
    check_plane_index(k)?;
    if !a.same_dimensions(b) {
        return arg_err("bit plane comparison of images with different dimensions");
    }
    let mask = 1u8 << (k - 1);
    Ok(a.pixels()
        .iter()
        .zip(b.pixels())
        .filter(|&(&x, &y)| (x ^ y) & mask != 0)
        .count())
}

/// Percentage of plane-`k` bits that differ between `a` and `b`.
pub fn nbcr(a: &GrayImage, b: &GrayImage, k: u8) -> Result<f64> {
    let changed = plane_diff_count(a, b, k)?;
    let total = a.pixels().len();
    if total == 0 {
        return Ok(0.0);
    }
    Ok(100.0 * changed as f64 / total as f64)
}
