//! Auxiliary information carried in bit plane `n + 1` of the border.
//!
//! Layout (66 bits, big-endian): predictor number (2), payload length in
//! bits (32), last carrier row (16), last carrier column (16). With
//! repetition `r` the 66 bits are spread over `66 * r` border pixels, taken
//! in raster order.

use serde::{Deserialize, Serialize};

use super::cells::{classify_cells, Coord};
use crate::corpus::{BitStream, GrayImage};
use crate::error::{arg_err, Error, Result};
use crate::hardening::{majority_aux, spread_aux};

pub const AUX_BITS: usize = 66;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxInfo {
    pub predictor: u8,
    pub payload_len: u32,
    /// Last pixel that carried payload, `(row, column)`.
    pub c_end: (u16, u16),
}

impl AuxInfo {
    pub fn to_bits(&self) -> BitStream {
        let mut bits = BitStream::new();
        bits.push_uint(self.predictor as u64, 2);
        bits.push_uint(self.payload_len as u64, 32);
        bits.push_uint(self.c_end.0 as u64, 16);
        bits.push_uint(self.c_end.1 as u64, 16);
        bits
    }

    /// Decodes 66 bits without semantic validation.
    pub fn from_bits(bits: &BitStream) -> Result<Self> {
        if bits.len() != AUX_BITS {
            return Err(Error::CorruptAux(format!("expected {AUX_BITS} bits, got {}", bits.len())));
        }
        let field = |offset, width| bits.read_uint(offset, width).expect("length checked");
        Ok(Self {
            predictor: field(0, 2) as u8,
            payload_len: field(2, 32) as u32,
            c_end: (field(34, 16) as u16, field(50, 16) as u16),
        })
    }

    /// Checks the fields against an image of the given size.
    pub fn validate(&self, height: usize, width: usize) -> Result<()> {
        if !(1..=3).contains(&self.predictor) {
            return Err(Error::CorruptAux(format!("predictor number {}", self.predictor)));
        }
        let (i, j) = (self.c_end.0 as usize, self.c_end.1 as usize);
        if i == 0 || j == 0 || i + 1 >= height || j + 1 >= width {
            return Err(Error::CorruptAux(format!(
                "last carrier ({i},{j}) is not an interior pixel of a {height}x{width} image"
            )));
        }
        Ok(())
    }
}

/// The first `AUX_BITS * r` border pixels in raster order.
pub fn aux_region(height: usize, width: usize, repetition: u32) -> Result<Vec<Coord>> {
    let cells = classify_cells(height, width)?;
    let need = AUX_BITS * repetition as usize;
    if cells.border.len() < need {
        return Err(Error::Capacity {
            required: need,
            available: cells.border.len(),
        });
    }
    Ok(cells.border[..need].to_vec())
}

fn check_plane(n: u8) -> Result<()> {
    if !(1..=7).contains(&n) {
        return arg_err(format!("auxiliary plane n+1 requires n in [1,7], got {n}"));
    }
    Ok(())
}

/// Substitutes the aux bits into plane `n + 1` of the aux region and returns
/// the overwritten original bits in the same order.
pub fn write_aux(image: &GrayImage, aux: &AuxInfo, n: u8, repetition: u32) -> Result<(GrayImage, BitStream)> {
    check_plane(n)?;
    let region = aux_region(image.height(), image.width(), repetition)?;
    let bits = spread_aux(&aux.to_bits(), repetition)?;
    let mask = 1u8 << n;
    let mut out = image.clone();
    let mut saved = BitStream::new();
    for (&(i, j), &bit) in region.iter().zip(bits.bits()) {
        let p = image.get(i, j);
        saved.push(p & mask != 0);
        out.set(i, j, if bit { p | mask } else { p & !mask });
    }
    Ok((out, saved))
}

/// Reads the (possibly repeated) aux bits and majority-decodes them, without
/// validating the result.
pub fn read_aux_raw(image: &GrayImage, n: u8, repetition: u32) -> Result<AuxInfo> {
    check_plane(n)?;
    let region = aux_region(image.height(), image.width(), repetition)?;
    let received: BitStream = region.iter().map(|&(i, j)| (image.get(i, j) >> n) & 1 == 1).collect();
    AuxInfo::from_bits(&majority_aux(&received, repetition)?)
}

pub fn read_aux(image: &GrayImage, n: u8, repetition: u32) -> Result<AuxInfo> {
    let aux = read_aux_raw(image, n, repetition)?;
    aux.validate(image.height(), image.width())?;
    Ok(aux)
}

/// Writes `bits` back into plane `n + 1` of the aux region.
pub fn restore_aux_region(image: &mut GrayImage, saved: &BitStream, n: u8, repetition: u32) -> Result<()> {
    check_plane(n)?;
    let region = aux_region(image.height(), image.width(), repetition)?;
    if saved.len() != region.len() {
        return Err(Error::Payload(format!(
            "{} saved border bits for an aux region of {}",
            saved.len(),
            region.len()
        )));
    }
    let mask = 1u8 << n;
    for (&(i, j), &bit) in region.iter().zip(saved.bits()) {
        let p = image.get(i, j);
        image.set(i, j, if bit { p | mask } else { p & !mask });
    }
    Ok(())
}
