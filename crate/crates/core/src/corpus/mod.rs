//! Images, bit streams, file I/O and the reproducible synthetic corpus.

mod bits;
mod image;
mod pgm;
mod synth;

use std::path::Path;

pub use bits::{gen_secret, BitStream};
pub use image::GrayImage;
pub use pgm::{decode_pgm, encode_pgm, load_pgm, save_pgm};
pub use synth::{bundled_corpus, synth_image, SynthKind, MIN_SYNTH_SIZE};

use crate::error::Result;

/// Loads every `*.pgm` file in `dir`, sorted by file name.
pub fn load_corpus_dir(dir: impl AsRef<Path>) -> Result<Vec<(String, GrayImage)>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            p.extension()
                .is_some_and(|ext| ext.eq_ignore_ascii_case("pgm"))
        })
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let name = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok((name, load_pgm(&p)?))
        })
        .collect()
}
