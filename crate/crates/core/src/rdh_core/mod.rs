//! The two-layer MSB reversible data hiding scheme.

mod aux;
mod cells;
mod location_map;
mod pee;
mod predict;
mod scheme;

pub use aux::{aux_region, read_aux, read_aux_raw, restore_aux_region, write_aux, AuxInfo, AUX_BITS};
pub use cells::{classify_cells, is_grey, CellMap, Coord};
pub use location_map::{compress_map, decompress_map, preprocess, undo_preprocess, LocationMap};
pub use pee::{embed_layer1, embed_layer2, extract_layer1, extract_layer2};
pub use predict::{check_predictor, local_complexity, predictor_pair, sort_by_complexity, Neighborhood, PredictorPair};
pub use scheme::{
    embed, estimate_secret_capacity, extract, max_plane_count, visit_order, CarrierLayout, EmbedConfig,
    EmbedMetadata, EmbedRecord, ExtractConfig, ExtractFailure, Extraction, PartialExtraction, PayloadLayout,
    PredictorChoice,
};
