use crate::error::{arg_err, Result};

/// An 8-bit grayscale raster stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl std::fmt::Debug for GrayImage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GrayImage")
            .field("width", &self.width)
            .field("height", &self.height)
            .finish_non_exhaustive()
    }
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if pixels.len() != width * height {
            return arg_err(format!(
                "pixel buffer has {} entries, expected {}x{}={}",
                pixels.len(),
                width,
                height,
                width * height
            ));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Self {
            width,
            height,
            pixels: vec![value; width * height],
        }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut pixels = Vec::with_capacity(width * height);
        for i in 0..height {
            for j in 0..width {
                pixels.push(f(i, j));
            }
        }
        Self {
            width,
            height,
            pixels,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    /// Pixel at row `i`, column `j`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.pixels[i * self.width + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: u8) {
        self.pixels[i * self.width + j] = value;
    }

    pub fn same_dimensions(&self, other: &GrayImage) -> bool {
        self.width == other.width && self.height == other.height
    }

    /// Copy of the `rows` x `cols` window whose top-left corner is `(i0, j0)`.
    pub fn crop(&self, i0: usize, j0: usize, rows: usize, cols: usize) -> Result<GrayImage> {
        if i0 + rows > self.height || j0 + cols > self.width {
            return arg_err(format!(
                "window {rows}x{cols} at ({i0},{j0}) exceeds {}x{} image",
                self.height, self.width
            ));
        }
        Ok(GrayImage::from_fn(cols, rows, |i, j| self.get(i0 + i, j0 + j)))
    }

    /// Peak signal-to-noise ratio in dB; infinite for identical images.
    pub fn psnr(&self, other: &GrayImage) -> Result<f64> {
        if !self.same_dimensions(other) {
            return arg_err("PSNR of images with different dimensions");
        }
        let sse: u64 = self
            .pixels
            .iter()
            .zip(&other.pixels)
            .map(|(&a, &b)| {
                let d = a as i64 - b as i64;
                (d * d) as u64
            })
            .sum();
        if sse == 0 {
            return Ok(f64::INFINITY);
        }
        let mse = sse as f64 / self.pixels.len() as f64;
        Ok(10.0 * (255.0 * 255.0 / mse).log10())
    }
}
