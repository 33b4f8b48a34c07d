use crate::error::{arg_err, Result};

/// `(row, column)`.
pub type Coord = (usize, usize);

/// Chessboard partition of an image into grey cells, white cells and the
/// one-pixel border frame. All lists are in raster order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellMap {
    pub height: usize,
    pub width: usize,
    /// Interior pixels with `i + j` even.
    pub grey: Vec<Coord>,
    /// Interior pixels with `i + j` odd.
    pub white: Vec<Coord>,
    pub border: Vec<Coord>,
}

impl CellMap {
    pub fn is_interior(&self, (i, j): Coord) -> bool {
        i > 0 && j > 0 && i + 1 < self.height && j + 1 < self.width
    }

    /// All interior coordinates in raster order.
    pub fn interior(&self) -> impl Iterator<Item = Coord> + '_ {
        (1..self.height - 1).flat_map(move |i| (1..self.width - 1).map(move |j| (i, j)))
    }

    pub fn interior_count(&self) -> usize {
        self.grey.len() + self.white.len()
    }
}

pub fn is_grey((i, j): Coord) -> bool {
    (i + j) % 2 == 0
}

pub fn classify_cells(h: usize, w: usize) -> Result<CellMap> {
    if h < 3 || w < 3 {
        return arg_err(format!("image {h}x{w} has no interior; need at least 3x3"));
    }
    let mut cells = CellMap {
        height: h,
        width: w,
        grey: Vec::with_capacity((h - 2) * (w - 2) / 2 + 1),
        white: Vec::with_capacity((h - 2) * (w - 2) / 2 + 1),
        border: Vec::with_capacity(2 * (h + w)),
    };
    for i in 0..h {
        for j in 0..w {
            if i == 0 || j == 0 || i == h - 1 || j == w - 1 {
                cells.border.push((i, j));
            } else if is_grey((i, j)) {
                cells.grey.push((i, j));
            } else {
                cells.white.push((i, j));
            }
        }
    }
    Ok(cells)
}
