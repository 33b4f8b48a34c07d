use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitplane::nbcr;
use crate::corpus::GrayImage;
use crate::error::{arg_err, Result};
use crate::jpeg_sim::{check_quality, compress_roundtrip};

pub const DEFAULT_QF_SWEEP: [u8; 7] = [70, 75, 80, 85, 90, 95, 100];

/// CSV row `image,qf,plane,nbcr_pct`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NbcrRow {
    pub image: String,
    pub qf: u8,
    pub plane: u8,
    pub nbcr_pct: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NbcrReport {
    pub rows: Vec<NbcrRow>,
    /// One row per `(qf, plane)` with image name `"average"`.
    pub averages: Vec<NbcrRow>,
}

impl NbcrReport {
    pub fn average(&self, qf: u8, plane: u8) -> Option<f64> {
        self.averages
            .iter()
            .find(|r| r.qf == qf && r.plane == plane)
            .map(|r| r.nbcr_pct)
    }

    /// Per-image rows followed by the average rows.
    pub fn all_rows(&self) -> Vec<NbcrRow> {
        self.rows.iter().chain(&self.averages).cloned().collect()
    }
}

pub fn nbcr_report(images: &[(String, GrayImage)], qfs: &[u8]) -> Result<NbcrReport> {
    if images.is_empty() {
        return arg_err("NBCR report needs at least one image");
    }
    if qfs.is_empty() {
        return arg_err("NBCR report needs at least one quality factor");
    }
    for &qf in qfs {
        check_quality(qf)?;
    }
    let cells: Vec<(&String, &GrayImage, u8)> = images
        .iter()
        .flat_map(|(name, img)| qfs.iter().map(move |&qf| (name, img, qf)))
        .collect();
    let per_cell: Vec<Vec<NbcrRow>> = cells
        .par_iter()
        .map(|&(name, img, qf)| {
            let attacked = compress_roundtrip(img, qf)?;
            (1..=8)
                .map(|plane| {
                    Ok(NbcrRow {
                        image: name.clone(),
                        qf,
                        plane,
                        nbcr_pct: nbcr(img, &attacked, plane)?,
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let rows: Vec<NbcrRow> = per_cell.into_iter().flatten().collect();

    let mut averages = Vec::new();
    for &qf in qfs {
        for plane in 1..=8 {
            let sum: f64 = rows
                .iter()
                .filter(|r| r.qf == qf && r.plane == plane)
                .map(|r| r.nbcr_pct)
                .sum();
            averages.push(NbcrRow {
                image: "average".into(),
                qf,
                plane,
                nbcr_pct: sum / images.len() as f64,
            });
        }
    }
    Ok(NbcrReport { rows, averages })
}

/// `|original - attacked|` over the 8x8 block at `origin`. The whole image
/// is attacked so the block sees the same grid alignment as in use.
pub fn block_diff_map(image: &GrayImage, qf: u8, origin: (usize, usize)) -> Result<[[u8; 8]; 8]> {
    let (i0, j0) = origin;
    if i0 + 8 > image.height() || j0 + 8 > image.width() {
        return arg_err(format!(
            "8x8 block at {origin:?} exceeds {}x{} image",
            image.height(),
            image.width()
        ));
    }
    let attacked = compress_roundtrip(image, qf)?;
    let mut map = [[0u8; 8]; 8];
    for (u, row) in map.iter_mut().enumerate() {
        for (v, cell) in row.iter_mut().enumerate() {
            *cell = image.get(i0 + u, j0 + v).abs_diff(attacked.get(i0 + u, j0 + v));
        }
    }
    Ok(map)
}
