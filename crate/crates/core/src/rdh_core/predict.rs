//! Cross-neighbourhood statistics: local complexity, visiting order and the
//! low/high predictor pair.

use super::cells::Coord;
use crate::bitplane::MsbLsbSplit;
use crate::error::{arg_err, Result};

/// The four cross neighbours of an interior pixel, sorted ascending.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Neighborhood {
    pub sorted: [i32; 4],
}

impl Neighborhood {
    pub fn new(mut values: [i32; 4]) -> Self {
        values.sort_unstable();
        Self { sorted: values }
    }

    /// Neighbours `(i, j-1)`, `(i-1, j)`, `(i, j+1)`, `(i+1, j)` of an interior pixel.
    pub fn at(msb: &MsbLsbSplit, i: usize, j: usize) -> Result<Self> {
        if i == 0 || j == 0 || i + 1 >= msb.height() || j + 1 >= msb.width() {
            return arg_err(format!("({i},{j}) is not an interior pixel"));
        }
        Ok(Self::new([
            msb.v(i, j - 1),
            msb.v(i - 1, j),
            msb.v(i, j + 1),
            msb.v(i + 1, j),
        ]))
    }

    pub fn mean(&self) -> f64 {
        self.sorted.iter().sum::<i32>() as f64 / 4.0
    }

    /// Sixteen times the variance, `4 * sum(v^2) - (sum v)^2`, as an exact integer.
    pub fn complexity_key(&self) -> i64 {
        let sum: i64 = self.sorted.iter().map(|&v| v as i64).sum();
        let sq: i64 = self.sorted.iter().map(|&v| (v as i64).pow(2)).sum();
        4 * sq - sum * sum
    }

    /// Population variance of the four neighbours.
    pub fn complexity(&self) -> f64 {
        self.complexity_key() as f64 / 16.0
    }
}

pub fn local_complexity(msb: &MsbLsbSplit, i: usize, j: usize) -> Result<f64> {
    Ok(Neighborhood::at(msb, i, j)?.complexity())
}

/// Sorts by ascending local complexity; equal complexities keep raster order.
pub fn sort_by_complexity(coords: &[Coord], msb: &MsbLsbSplit) -> Result<Vec<Coord>> {
    let mut keyed = coords
        .iter()
        .map(|&(i, j)| Ok((Neighborhood::at(msb, i, j)?.complexity_key(), (i, j))))
        .collect::<Result<Vec<_>>>()?;
    keyed.sort_unstable();
    Ok(keyed.into_iter().map(|(_, c)| c).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PredictorPair {
    pub n: u8,
    /// Mean of the `n` smallest neighbours, floored.
    pub p1: i32,
    /// Mean of the `n` largest neighbours, floored.
    pub p2: i32,
}

pub fn check_predictor(n: u8) -> Result<()> {
    if !(1..=3).contains(&n) {
        return arg_err(format!("predictor number {n} outside [1,3]"));
    }
    Ok(())
}

pub fn predictor_pair(nb: &Neighborhood, n: u8) -> Result<PredictorPair> {
    check_predictor(n)?;
    let k = n as usize;
    let low: i32 = nb.sorted[..k].iter().sum();
    let high: i32 = nb.sorted[4 - k..].iter().sum();
    Ok(PredictorPair {
        n,
        p1: low.div_euclid(n as i32),
        p2: high.div_euclid(n as i32),
    })
}
