//! Robustness variants of the two-layer scheme.
//!
//! * Auxiliary information can be written `r` times (interleaved) and read
//!   back by majority vote.
//! * Embedding can follow plain raster order instead of complexity order, so
//!   the visiting sequence does not depend on pixel values.
//! * The prediction-error expansion can use a wider shift quantity `T`,
//!   which separates the decision bins so that a perturbation of up to
//!   `floor(T/2)` on a marked working value still decodes correctly.
//!
//! # Shift kernel
//!
//! With tolerance `t = floor(T/2)` and bin width `W = 2t + 1`, the first
//! layer maps the prediction error `e = v - p1` as
//!
//! | `e`   | marked value          | bit |
//! |-------|-----------------------|-----|
//! | `<= 0`| `v`                   | -   |
//! | `1`   | `v + (W - 1) + s * W` | `s` |
//! | `>= 2`| `v + 3W - 2`          | -   |
//!
//! so the marked error lands at `<= 0`, `W`, `2W` or `>= 3W`, each class at
//! least `W` apart. Decoding splits the line halfway between the classes.
//! The second layer is the mirror image around `e = -1`. `T = 1` gives
//! `W = 1`, which is exactly the unit-shift expansion of the base scheme.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::BitStream;
use crate::error::{arg_err, Error, Result};

/// Order in which carrier pixels are visited.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanOrder {
    /// Ascending local complexity, ties in raster order.
    #[default]
    Complexity,
    /// Left to right, top to bottom.
    Raster,
}

impl fmt::Display for ScanOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScanOrder::Complexity => "complexity",
            ScanOrder::Raster => "raster",
        })
    }
}

impl FromStr for ScanOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complexity" => Ok(ScanOrder::Complexity),
            "raster" => Ok(ScanOrder::Raster),
            other => arg_err(format!("unknown scan order {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HardeningConfig {
    /// Copies of each auxiliary bit; odd, 1 disables repetition.
    pub aux_repetition: u32,
    pub ordering: ScanOrder,
    /// Histogram shift quantity `T`; 1 is the base scheme.
    pub shift: u32,
}

impl Default for HardeningConfig {
    fn default() -> Self {
        Self {
            aux_repetition: 1,
            ordering: ScanOrder::Complexity,
            shift: 1,
        }
    }
}

impl HardeningConfig {
    pub fn validate(&self) -> Result<()> {
        if self.aux_repetition == 0 || self.aux_repetition.is_multiple_of(2) {
            return arg_err(format!(
                "aux repetition must be odd and at least 1, got {}",
                self.aux_repetition
            ));
        }
        if self.shift == 0 {
            return arg_err("shift quantity must be at least 1");
        }
        Ok(())
    }

    pub fn is_baseline(&self) -> bool {
        *self == Self::default()
    }
}

/// Repeats every bit `r` times; copy `j` of bit `i` lands at `j * len + i`.
pub fn spread_aux(aux_bits: &BitStream, r: u32) -> Result<BitStream> {
    if r == 0 || r.is_multiple_of(2) {
        return arg_err(format!("repetition {r} must be odd and at least 1"));
    }
    let bits = aux_bits.bits();
    Ok((0..r).flat_map(|_| bits.iter().copied()).collect())
}

/// Majority decision over the `r` interleaved copies written by [`spread_aux`].
pub fn majority_aux(received: &BitStream, r: u32) -> Result<BitStream> {
    if r == 0 || r.is_multiple_of(2) {
        return arg_err(format!("repetition {r} must be odd and at least 1"));
    }
    let r = r as usize;
    if !received.len().is_multiple_of(r) {
        return Err(Error::CorruptAux(format!(
            "{} received bits are not a multiple of repetition {r}",
            received.len()
        )));
    }
    let len = received.len() / r;
    let bits = received.bits();
    Ok((0..len)
        .map(|i| (0..r).filter(|&j| bits[j * len + i]).count() * 2 > r)
        .collect())
}

/// Derived quantities of a shift `T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RobustShift {
    t: u32,
}

impl RobustShift {
    pub fn new(t: u32) -> Result<Self> {
        if t == 0 {
            return arg_err("shift quantity must be at least 1");
        }
        Ok(Self { t })
    }

    pub fn t(&self) -> u32 {
        self.t
    }

    /// Largest perturbation that still decodes correctly.
    pub fn tolerance(&self) -> i32 {
        (self.t / 2) as i32
    }

    /// Distance between adjacent decision classes.
    pub fn bin_width(&self) -> i32 {
        2 * self.tolerance() + 1
    }

    /// Largest change either layer applies to a working value.
    pub fn max_shift(&self) -> i32 {
        3 * self.bin_width() - 2
    }

    /// Smallest MSB maximum for which boundary preprocessing stays unambiguous.
    pub fn min_vmax(&self) -> i32 {
        4 * self.max_shift() - 1
    }
}

fn bounded(v: i32, vmax: i32) -> Result<i32> {
    if v > vmax {
        Err(Error::Overflow { value: v, max: vmax })
    } else if v < 0 {
        Err(Error::Underflow { value: v })
    } else {
        Ok(v)
    }
}

/// First-layer expansion with shift `t`. Returns the marked value and the
/// number of bits consumed from `next_bit`.
pub fn shifted_embed_layer1(v: i32, p1: i32, next_bit: Option<bool>, t: u32, vmax: i32) -> Result<(i32, usize)> {
    let w = RobustShift::new(t)?.bin_width();
    let (out, used) = match v - p1 {
        1 => {
            let s = next_bit.unwrap_or(false) as i32;
            (v + (w - 1) + s * w, next_bit.is_some() as usize)
        }
        e if e > 1 => (v + 3 * w - 2, 0),
        _ => (v, 0),
    };
    Ok((bounded(out, vmax)?, used))
}

/// Second-layer expansion with shift `t`, mirroring the first around `e = -1`.
pub fn shifted_embed_layer2(v: i32, p2: i32, next_bit: Option<bool>, t: u32, vmax: i32) -> Result<(i32, usize)> {
    let w = RobustShift::new(t)?.bin_width();
    let (out, used) = match v - p2 {
        -1 => {
            let s = next_bit.unwrap_or(false) as i32;
            (v - (w - 1) - s * w, next_bit.is_some() as usize)
        }
        e if e < -1 => (v - (3 * w - 2), 0),
        _ => (v, 0),
    };
    Ok((bounded(out, vmax)?, used))
}

/// Nearest-class decoding of the first layer.
pub fn shifted_extract_layer1(v: i32, p1: i32, t: u32) -> Result<(i32, Option<bool>)> {
    let shift = RobustShift::new(t)?;
    let tol = shift.tolerance();
    let d = v - p1;
    Ok(if d <= tol {
        (v, None)
    } else if d <= 3 * tol + 1 {
        (p1 + 1, Some(false))
    } else if d <= 5 * tol + 2 {
        (p1 + 1, Some(true))
    } else {
        (v - shift.max_shift(), None)
    })
}

/// Nearest-class decoding of the second layer.
pub fn shifted_extract_layer2(v: i32, p2: i32, t: u32) -> Result<(i32, Option<bool>)> {
    let shift = RobustShift::new(t)?;
    let tol = shift.tolerance();
    let d = v - p2;
    Ok(if d >= -tol {
        (v, None)
    } else if d >= -3 * tol - 1 {
        (p2 - 1, Some(false))
    } else if d >= -5 * tol - 2 {
        (p2 - 1, Some(true))
    } else {
        (v + shift.max_shift(), None)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdh_core::{embed_layer1, embed_layer2, extract_layer1, extract_layer2};

    const BIG: i32 = 1 << 20;

    #[test]
    fn spread_layout() {
        let bits = BitStream::from(vec![true, false]);
        assert_eq!(spread_aux(&bits, 1).unwrap(), bits);
        assert_eq!(spread_aux(&bits, 3).unwrap().to_text(), "101010");
        assert!(spread_aux(&bits, 2).is_err());
        assert_eq!(majority_aux(&spread_aux(&bits, 5).unwrap(), 5).unwrap(), bits);
    }

    #[test]
    fn majority_examples() {
        assert_eq!(majority_aux(&BitStream::from_text("110").unwrap(), 3).unwrap().to_text(), "1");
        assert!(majority_aux(&BitStream::from_text("1101").unwrap(), 3).is_err());

        // r = 3, two flipped copies of bit 0 => that bit is wrong
        let bits = BitStream::from_text("10").unwrap();
        let mut spread = spread_aux(&bits, 3).unwrap().bits().to_vec();
        spread[0] = !spread[0];
        spread[2] = !spread[2];
        let decoded = majority_aux(&BitStream::from(spread), 3).unwrap();
        assert_eq!(decoded.to_text(), "00");
    }

    #[test]
    fn two_flips_survive_five_copies() {
        let bits = BitStream::from_text("1100101").unwrap();
        let mut spread = spread_aux(&bits, 5).unwrap().bits().to_vec();
        for i in 0..bits.len() {
            spread[i] = !spread[i];
            spread[3 * bits.len() + i] = !spread[3 * bits.len() + i];
        }
        assert_eq!(majority_aux(&BitStream::from(spread), 5).unwrap(), bits);
    }

    #[test]
    fn config_validation() {
        assert!(HardeningConfig::default().validate().is_ok());
        assert!(HardeningConfig::default().is_baseline());
        let bad_r = HardeningConfig { aux_repetition: 4, ..Default::default() };
        assert!(bad_r.validate().is_err());
        let bad_t = HardeningConfig { shift: 0, ..Default::default() };
        assert!(bad_t.validate().is_err());
    }

    #[test]
    fn shift_quantities() {
        let s1 = RobustShift::new(1).unwrap();
        assert_eq!((s1.tolerance(), s1.bin_width(), s1.max_shift(), s1.min_vmax()), (0, 1, 1, 3));
        let s4 = RobustShift::new(4).unwrap();
        assert_eq!((s4.tolerance(), s4.bin_width(), s4.max_shift(), s4.min_vmax()), (2, 5, 13, 51));
        assert!(RobustShift::new(0).is_err());
    }

    #[test]
    fn unit_shift_is_the_base_kernel() {
        for v in 0..32 {
            for p in 0..32 {
                for bit in [None, Some(false), Some(true)] {
                    assert_eq!(
                        shifted_embed_layer1(v, p, bit, 1, 31).ok(),
                        embed_layer1(v, p, bit, 31).ok()
                    );
                    assert_eq!(
                        shifted_embed_layer2(v, p, bit, 1, 31).ok(),
                        embed_layer2(v, p, bit, 31).ok()
                    );
                }
                assert_eq!(shifted_extract_layer1(v, p, 1).unwrap(), extract_layer1(v, p));
                assert_eq!(shifted_extract_layer2(v, p, 1).unwrap(), extract_layer2(v, p));
            }
        }
    }

    #[test]
    fn wide_shift_examples() {
        // T = 4: bit 0 lands at error 5, bit 1 at 10, non-carriers move by 13
        assert_eq!(shifted_embed_layer1(12, 11, Some(false), 4, BIG).unwrap(), (16, 1));
        assert_eq!(shifted_embed_layer1(12, 11, Some(true), 4, BIG).unwrap(), (21, 1));
        assert_eq!(shifted_embed_layer1(14, 11, None, 4, BIG).unwrap(), (27, 0));
        assert_eq!(shifted_embed_layer1(10, 11, Some(true), 4, BIG).unwrap(), (10, 0));
        assert_eq!(shifted_embed_layer2(10, 11, Some(true), 4, BIG).unwrap(), (1, 1));
        assert!(matches!(
            shifted_embed_layer1(20, 11, None, 4, 31),
            Err(Error::Overflow { .. })
        ));
        assert!(matches!(
            shifted_embed_layer2(5, 11, None, 4, 31),
            Err(Error::Underflow { .. })
        ));

        // received errors within +-2 of a class centre decode to that class
        for (d, want) in [(5, Some(false)), (3, Some(false)), (7, Some(false)), (8, Some(true)), (10, Some(true)), (12, Some(true))] {
            assert_eq!(shifted_extract_layer1(11 + d, 11, 4).unwrap(), (12, want), "d = {d}");
        }
        assert_eq!(shifted_extract_layer1(13, 11, 4).unwrap(), (13, None));
        assert_eq!(shifted_extract_layer1(11 + 13, 11, 4).unwrap(), (11, None));
    }

    #[test]
    fn shifted_layers_invert_without_noise() {
        // offset keeps shifted values inside the range for every t
        for t in [1, 2, 3, 4, 5, 8] {
            for v in 40..72 {
                for p in 40..72 {
                    for s in [false, true] {
                        let (m, used) = shifted_embed_layer1(v, p, Some(s), t, BIG).unwrap();
                        let (back, bit) = shifted_extract_layer1(m, p, t).unwrap();
                        assert_eq!(back, v);
                        assert_eq!(bit, (used == 1).then_some(s));

                        let (m, used) = shifted_embed_layer2(v, p, Some(s), t, BIG).unwrap();
                        let (back, bit) = shifted_extract_layer2(m, p, t).unwrap();
                        assert_eq!(back, v);
                        assert_eq!(bit, (used == 1).then_some(s));
                    }
                }
            }
        }
    }

    #[test]
    fn shifted_classes_tolerate_bounded_noise() {
        for t in [2, 4, 6] {
            let tol = RobustShift::new(t).unwrap().tolerance();
            for e in -6..8 {
                let p = 100;
                for s in [false, true] {
                    let (m, used) = shifted_embed_layer1(p + e, p, Some(s), t, BIG).unwrap();
                    for noise in -tol..=tol {
                        let (_, bit) = shifted_extract_layer1(m + noise, p, t).unwrap();
                        assert_eq!(bit, (used == 1).then_some(s), "t {t} e {e} noise {noise}");
                    }
                    let (m, used) = shifted_embed_layer2(p + e, p, Some(s), t, BIG).unwrap();
                    for noise in -tol..=tol {
                        let (_, bit) = shifted_extract_layer2(m + noise, p, t).unwrap();
                        assert_eq!(bit, (used == 1).then_some(s), "t {t} e {e} noise {noise}");
                    }
                }
            }
        }
    }
}
