//! Unit-shift two-layer prediction-error expansion on MSB working values.
//!
//! Layer 1 expands the error `e1 = v - p1` at `e1 = 1` and shifts larger
//! errors up by one; layer 2 expands `e2 = v' - p2` at `e2 = -1` and shifts
//! smaller errors down by one. Each layer consumes at most one bit.

use crate::error::{Error, Result};

fn bounded(v: i32, vmax: i32) -> Result<i32> {
    if v > vmax {
        Err(Error::Overflow { value: v, max: vmax })
    } else if v < 0 {
        Err(Error::Underflow { value: v })
    } else {
        Ok(v)
    }
}

/// Returns the marked value and how many bits of `next_bit` were consumed.
/// An expandable pixel with no bit left carries an implicit 0.
pub fn embed_layer1(v: i32, p1: i32, next_bit: Option<bool>, vmax: i32) -> Result<(i32, usize)> {
    let (out, used) = match v - p1 {
        1 => (v + next_bit.unwrap_or(false) as i32, next_bit.is_some() as usize),
        e if e > 1 => (v + 1, 0),
        _ => (v, 0),
    };
    Ok((bounded(out, vmax)?, used))
}

pub fn embed_layer2(v: i32, p2: i32, next_bit: Option<bool>, vmax: i32) -> Result<(i32, usize)> {
    let (out, used) = match v - p2 {
        -1 => (v - next_bit.unwrap_or(false) as i32, next_bit.is_some() as usize),
        e if e < -1 => (v - 1, 0),
        _ => (v, 0),
    };
    Ok((bounded(out, vmax)?, used))
}

pub fn extract_layer1(v: i32, p1: i32) -> (i32, Option<bool>) {
    match v - p1 {
        d if d <= 0 => (v, None),
        1 => (v, Some(false)),
        2 => (v - 1, Some(true)),
        _ => (v - 1, None),
    }
}

pub fn extract_layer2(v: i32, p2: i32) -> (i32, Option<bool>) {
    match v - p2 {
        d if d >= 0 => (v, None),
        -1 => (v, Some(false)),
        -2 => (v + 1, Some(true)),
        _ => (v + 1, None),
    }
}
