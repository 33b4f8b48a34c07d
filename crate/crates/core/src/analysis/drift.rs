use serde::{Deserialize, Serialize};

use crate::bitplane::split;
use crate::corpus::GrayImage;
use crate::error::{arg_err, Result};
use crate::jpeg_sim::{check_quality, compress_roundtrip};
use crate::rdh_core::{classify_cells, local_complexity, sort_by_complexity, Coord};

const BLOCK: usize = 8;

/// One grey pixel of the block, labelled `A1..A18` in raster order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftEntry {
    pub label: String,
    /// Block-relative coordinate.
    pub coord: Coord,
    pub mu_orig: f64,
    /// `mu` after each attack, aligned with [`DriftReport::per_qf`].
    pub mu_qf: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QfOrder {
    pub qf: u8,
    pub order: Vec<Coord>,
    pub in_place: usize,
    pub kendall: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    pub origin: Coord,
    pub n: u8,
    pub entries: Vec<DriftEntry>,
    pub order_original: Vec<Coord>,
    pub per_qf: Vec<QfOrder>,
}

/// CSV row `label,mu_orig,mu_qf,qf,rank_orig,rank_qf`; ranks start at 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftRow {
    pub label: String,
    pub mu_orig: f64,
    pub mu_qf: f64,
    pub qf: u8,
    pub rank_orig: usize,
    pub rank_qf: usize,
}

impl DriftReport {
    pub fn label_of(&self, c: Coord) -> &str {
        &self.entries.iter().find(|e| e.coord == c).expect("grey coordinate").label
    }

    pub fn rows(&self) -> Vec<DriftRow> {
        let rank = |order: &[Coord], c: Coord| order.iter().position(|&x| x == c).expect("permutation") + 1;
        let mut rows = Vec::new();
        for (k, q) in self.per_qf.iter().enumerate() {
            for e in &self.entries {
                rows.push(DriftRow {
                    label: e.label.clone(),
                    mu_orig: e.mu_orig,
                    mu_qf: e.mu_qf[k],
                    qf: q.qf,
                    rank_orig: rank(&self.order_original, e.coord),
                    rank_qf: rank(&q.order, e.coord),
                });
            }
        }
        rows
    }
}

/// Number of pairs ordered differently by two permutations of one set.
pub fn kendall_distance(a: &[Coord], b: &[Coord]) -> usize {
    let pos: Vec<usize> = a
        .iter()
        .map(|c| b.iter().position(|x| x == c).expect("same coordinate set"))
        .collect();
    let mut d = 0;
    for x in 0..pos.len() {
        for y in x + 1..pos.len() {
            d += (pos[x] > pos[y]) as usize;
        }
    }
    d
}

/// Complexity order of the grey pixels of one 8x8 block before and after
/// each attack, working on MSB values at `n` planes.
pub fn ordering_drift(image: &GrayImage, origin: Coord, n: u8, qfs: &[u8]) -> Result<DriftReport> {
    let (i0, j0) = origin;
    if i0 + BLOCK > image.height() || j0 + BLOCK > image.width() {
        return arg_err(format!("8x8 block at {origin:?} exceeds the image"));
    }
    for &qf in qfs {
        check_quality(qf)?;
    }
    let grey = classify_cells(BLOCK, BLOCK)?.grey;
    let msb_orig = split(&image.crop(i0, j0, BLOCK, BLOCK)?, n)?;
    let order_original = sort_by_complexity(&grey, &msb_orig)?;

    let mut entries: Vec<DriftEntry> = grey
        .iter()
        .enumerate()
        .map(|(k, &(i, j))| {
            Ok(DriftEntry {
                label: format!("A{}", k + 1),
                coord: (i, j),
                mu_orig: local_complexity(&msb_orig, i, j)?,
                mu_qf: Vec::with_capacity(qfs.len()),
            })
        })
        .collect::<Result<_>>()?;

    let mut per_qf = Vec::with_capacity(qfs.len());
    for &qf in qfs {
        let attacked = compress_roundtrip(image, qf)?;
        let msb = split(&attacked.crop(i0, j0, BLOCK, BLOCK)?, n)?;
        for e in &mut entries {
            e.mu_qf.push(local_complexity(&msb, e.coord.0, e.coord.1)?);
        }
        let order = sort_by_complexity(&grey, &msb)?;
        per_qf.push(QfOrder {
            qf,
            in_place: order.iter().zip(&order_original).filter(|(a, b)| a == b).count(),
            kendall: kendall_distance(&order_original, &order),
            order,
        });
    }
    Ok(DriftReport {
        origin,
        n,
        entries,
        order_original,
        per_qf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{synth_image, SynthKind};

    #[test]
    fn kendall_counts_discordant_pairs() {
        let a = [(0, 0), (0, 1), (0, 2), (0, 3)];
        assert_eq!(kendall_distance(&a, &a), 0);
        let rev: Vec<_> = a.iter().rev().copied().collect();
        assert_eq!(kendall_distance(&a, &rev), 6);
        assert_eq!(kendall_distance(&a, &[(0, 1), (0, 0), (0, 2), (0, 3)]), 1);
    }

    #[test]
    fn constant_block_does_not_drift() {
        let flat = GrayImage::filled(16, 16, 128);
        let r = ordering_drift(&flat, (0, 0), 3, &[85]).unwrap();
        assert_eq!(r.entries.len(), 18);
        assert_eq!(r.per_qf[0].kendall, 0);
        assert_eq!(r.per_qf[0].in_place, 18);
    }

    #[test]
    fn orders_are_permutations_and_rows_line_up() {
        let img = synth_image(SynthKind::Texture, 64, 2).unwrap();
        let r = ordering_drift(&img, (16, 24), 2, &[70, 85, 100]).unwrap();
        let mut base = r.order_original.clone();
        base.sort();
        for q in &r.per_qf {
            let mut o = q.order.clone();
            o.sort();
            assert_eq!(o, base);
        }
        let rows = r.rows();
        assert_eq!(rows.len(), 18 * 3);
        assert_eq!(rows[0].label, "A1");
        assert_eq!(r.label_of((1, 1)), "A1");
        assert_eq!(r.label_of((6, 6)), "A18");
    }

    #[test]
    fn mu_values_are_quarter_sixteenths() {
        // 16 * mu is an integer for integer neighbourhoods
        let img = synth_image(SynthKind::Texture, 64, 3).unwrap();
        let r = ordering_drift(&img, (8, 8), 3, &[85]).unwrap();
        for e in &r.entries {
            for mu in std::iter::once(e.mu_orig).chain(e.mu_qf.iter().copied()) {
                assert_eq!((mu * 16.0).fract(), 0.0);
            }
        }
    }

    #[test]
    fn block_must_fit() {
        let img = GrayImage::filled(16, 16, 0);
        assert!(ordering_drift(&img, (9, 0), 3, &[85]).is_err());
    }
}
