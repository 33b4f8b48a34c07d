//! Boundary-value preprocessing and its run-length coded location map.
//!
//! Before embedding, every interior working value within `reserve` of either
//! end of `[0, vmax]` is moved inward by `reserve` and flagged, so that
//! neither layer can leave the valid range. The flags (one per interior pixel,
//! raster order) are stored run-length coded inside the payload.
//!
//! # Map format
//!
//! A packed bit stream of 17-bit records, each a 16-bit big-endian run
//! length (1..=65535) followed by the run's bit value. The stream is zero
//! padded to a whole byte. Runs longer than 65535 are split.

use super::cells::CellMap;
use crate::bitplane::MsbLsbSplit;
use crate::corpus::BitStream;
use crate::error::{arg_err, Error, Result};

const RUN_BITS: u32 = 16;
const RECORD_BITS: usize = RUN_BITS as usize + 1;
const MAX_RUN: usize = (1 << RUN_BITS) - 1;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LocationMap {
    /// One flag per interior pixel in raster order; `true` = preprocessed.
    pub flags: Vec<bool>,
}

impl LocationMap {
    pub fn compressed(&self) -> Vec<u8> {
        compress_map(&self.flags)
    }

    pub fn flagged_count(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }
}

fn check_reserve(vmax: i32, reserve: i32) -> Result<()> {
    if reserve < 1 || vmax < 4 * reserve - 1 {
        return arg_err(format!(
            "MSB range [0,{vmax}] too narrow for a shift reserve of {reserve}"
        ));
    }
    Ok(())
}

/// Moves boundary values inward by `reserve` and records which pixels moved.
/// With `reserve = 1` this maps `vmax -> vmax-1` and `0 -> 1`.
pub fn preprocess(msb: &MsbLsbSplit, cells: &CellMap, reserve: i32) -> Result<(MsbLsbSplit, LocationMap)> {
    let vmax = msb.vmax();
    check_reserve(vmax, reserve)?;
    let mut out = msb.clone();
    let mut flags = Vec::with_capacity(cells.interior_count());
    for (i, j) in cells.interior() {
        let v = msb.v(i, j);
        let moved = if v > vmax - reserve {
            Some(v - reserve)
        } else if v < reserve {
            Some(v + reserve)
        } else {
            None
        };
        if let Some(m) = moved {
            out.set_v(i, j, m)?;
        }
        flags.push(moved.is_some());
    }
    Ok((out, LocationMap { flags }))
}

/// Inverse of [`preprocess`] for the same `reserve`.
pub fn undo_preprocess(msb: &MsbLsbSplit, cells: &CellMap, map: &LocationMap, reserve: i32) -> Result<MsbLsbSplit> {
    let vmax = msb.vmax();
    check_reserve(vmax, reserve)?;
    if map.flags.len() != cells.interior_count() {
        return Err(Error::MapDecode(format!(
            "location map has {} flags for {} interior pixels",
            map.flags.len(),
            cells.interior_count()
        )));
    }
    let mut out = msb.clone();
    for ((i, j), &flag) in cells.interior().zip(&map.flags) {
        if flag {
            let v = msb.v(i, j);
            // shifted-down top values sit above every shifted-up bottom value
            let orig = if v > vmax - 2 * reserve { v + reserve } else { v - reserve };
            out.set_v(i, j, orig)?;
        }
    }
    Ok(out)
}

pub fn compress_map(flags: &[bool]) -> Vec<u8> {
    let mut stream = BitStream::new();
    let mut k = 0;
    while k < flags.len() {
        let value = flags[k];
        let mut run = 1;
        while k + run < flags.len() && flags[k + run] == value && run < MAX_RUN {
            run += 1;
        }
        stream.push_uint(run as u64, RUN_BITS);
        stream.push(value);
        k += run;
    }
    stream.to_bytes()
}

pub fn decompress_map(bytes: &[u8]) -> Result<Vec<bool>> {
    let stream = BitStream::from_bytes(bytes);
    let records = stream.len() / RECORD_BITS;
    let mut flags = Vec::new();
    for r in 0..records {
        let at = r * RECORD_BITS;
        let run = stream.read_uint(at, RUN_BITS).expect("record within stream") as usize;
        if run == 0 {
            return Err(Error::MapDecode(format!("zero-length run in record {r}")));
        }
        let value = stream.bits()[at + RUN_BITS as usize];
        flags.extend(std::iter::repeat_n(value, run));
    }
    let tail = &stream.bits()[records * RECORD_BITS..];
    if tail.len() >= 8 || tail.iter().any(|&b| b) {
        return Err(Error::MapDecode("trailing garbage after the last run".into()));
    }
    Ok(flags)
}
