use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ber;
use crate::corpus::{gen_secret, GrayImage};
use crate::error::{arg_err, Error, Result};
use crate::hardening::{HardeningConfig, ScanOrder};
use crate::jpeg_sim::{check_quality, compress_roundtrip};
use crate::rdh_core::{
    aux_region, embed, estimate_secret_capacity, extract, max_plane_count, read_aux_raw, EmbedConfig,
    PredictorChoice, AUX_BITS,
};

/// Channel applied between embedding and extraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Attack {
    None,
    Jpeg(u8),
    /// Flip the first `k` stored copies of every aux bit.
    AuxFlip(u32),
}

impl fmt::Display for Attack {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Attack::None => f.write_str("none"),
            Attack::Jpeg(qf) => write!(f, "{qf}"),
            Attack::AuxFlip(k) => write!(f, "auxflip{k}"),
        }
    }
}

impl FromStr for Attack {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "none" {
            return Ok(Attack::None);
        }
        if let Some(k) = s.strip_prefix("auxflip") {
            return k
                .parse()
                .map(Attack::AuxFlip)
                .map_err(|_| Error::Argument(format!("bad flip count in {s:?}")));
        }
        let qf: u8 = s
            .parse()
            .map_err(|_| Error::Argument(format!("expected none, auxflipK or a quality factor, got {s:?}")))?;
        check_quality(qf)?;
        Ok(Attack::Jpeg(qf))
    }
}

impl Attack {
    fn apply(&self, marked: &GrayImage, n: u8, r: u32) -> Result<GrayImage> {
        match *self {
            Attack::None => Ok(marked.clone()),
            Attack::Jpeg(qf) => compress_roundtrip(marked, qf),
            Attack::AuxFlip(k) => {
                if k > r {
                    return arg_err(format!("cannot flip {k} of {r} aux copies"));
                }
                let region = aux_region(marked.height(), marked.width(), r)?;
                let mut out = marked.clone();
                for &(i, j) in &region[..k as usize * AUX_BITS] {
                    out.set(i, j, out.get(i, j) ^ (1 << n));
                }
                Ok(out)
            }
        }
    }
}

/// One grid column: a named embedding configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub name: String,
    pub embed: EmbedConfig,
}

/// Parses a grid token such as `baseline`, `raster`, `shift4`, `rep5`,
/// `n2`, `N1`, `Nauto`, or a `+`-joined combination (`raster+rep3+shift4`).
///
/// When a shift is requested without an explicit `nK`, the plane count is
/// lowered to the largest one the shift supports.
pub fn parse_grid_token(token: &str, default_n: u8, default_predictor: PredictorChoice) -> Result<BenchConfig> {
    let mut cfg = EmbedConfig {
        n: default_n,
        predictor: default_predictor,
        hardening: HardeningConfig::default(),
    };
    let mut explicit_n = false;
    for part in token.trim().split('+') {
        let num = |prefix: &str| -> Result<u32> {
            part[prefix.len()..]
                .parse()
                .map_err(|_| Error::Argument(format!("bad number in grid token {part:?}")))
        };
        match part {
            "baseline" => {}
            "raster" => cfg.hardening.ordering = ScanOrder::Raster,
            "complexity" => cfg.hardening.ordering = ScanOrder::Complexity,
            "Nauto" => cfg.predictor = PredictorChoice::Auto,
            p if p.starts_with("shift") => cfg.hardening.shift = num("shift")?,
            p if p.starts_with("rep") => cfg.hardening.aux_repetition = num("rep")?,
            p if p.starts_with('N') => cfg.predictor = PredictorChoice::Fixed(num("N")? as u8),
            p if p.starts_with('n') => {
                cfg.n = num("n")? as u8;
                explicit_n = true;
            }
            other => return arg_err(format!("unknown grid token {other:?}")),
        }
    }
    cfg.hardening.validate()?;
    if !explicit_n {
        if let Some(max_n) = max_plane_count(cfg.hardening.shift) {
            cfg.n = cfg.n.min(max_n);
        }
    }
    Ok(BenchConfig {
        name: token.trim().to_string(),
        embed: cfg,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BenchOptions {
    /// Fraction of the estimated secret capacity to fill.
    pub secret_fraction: f64,
    pub seed: u64,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            secret_fraction: 0.5,
            seed: 1,
        }
    }
}

/// CSV row `image,n,N,ordering,r,T,qf,ber,aux_intact,status`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BerResult {
    pub image: String,
    pub n: u8,
    /// Predictor used, or the requested choice when embedding failed.
    #[serde(rename = "N")]
    pub predictor: String,
    pub ordering: ScanOrder,
    pub r: u32,
    #[serde(rename = "T")]
    pub shift: u32,
    /// Attack label: `none`, a quality factor, or `auxflipK`.
    pub qf: String,
    /// Secret bit error rate; empty when nothing was embedded.
    pub ber: Option<f64>,
    pub aux_intact: bool,
    /// `ok` (exact restore), `lossy`, `capacity`, `config`, `corrupt-aux`,
    /// `map-decode`, `payload` or `error`.
    pub status: String,
}

fn status_of(e: &Error) -> &'static str {
    match e {
        Error::Capacity { .. } => "capacity",
        Error::Argument(_) => "config",
        Error::CorruptAux(_) => "corrupt-aux",
        Error::MapDecode(_) => "map-decode",
        Error::Payload(_) => "payload",
        _ => "error",
    }
}

fn run_cell(name: &str, image: &GrayImage, cfg: &BenchConfig, attack: Attack, opts: &BenchOptions) -> BerResult {
    let e = &cfg.embed;
    let mut row = BerResult {
        image: name.to_string(),
        n: e.n,
        predictor: match e.predictor {
            PredictorChoice::Fixed(p) => p.to_string(),
            PredictorChoice::Auto => "auto".into(),
        },
        ordering: e.hardening.ordering,
        r: e.hardening.aux_repetition,
        shift: e.hardening.shift,
        qf: attack.to_string(),
        ber: None,
        aux_intact: false,
        status: String::new(),
    };

    let embedded = estimate_secret_capacity(image, e).and_then(|cap| {
        let bits = (cap as f64 * opts.secret_fraction).floor() as usize;
        if bits == 0 {
            return Err(Error::Capacity { required: 1, available: cap });
        }
        // random secrets can need slightly more room than the probe
        let mut attempt = bits;
        loop {
            let secret = gen_secret(opts.seed, attempt);
            match embed(image, &secret, e) {
                Err(Error::Capacity { .. }) if attempt > 1 => attempt = attempt * 9 / 10,
                res => return res.map(|rec| (secret, rec)),
            }
        }
    });
    let (secret, rec) = match embedded {
        Ok(v) => v,
        Err(err) => {
            row.status = status_of(&err).into();
            return row;
        }
    };
    row.predictor = rec.aux.predictor.to_string();

    let received = match attack.apply(&rec.marked, e.n, e.hardening.aux_repetition) {
        Ok(img) => img,
        Err(err) => {
            row.status = status_of(&err).into();
            return row;
        }
    };
    row.aux_intact = read_aux_raw(&received, e.n, e.hardening.aux_repetition).is_ok_and(|a| a == rec.aux);
    let extracted = extract(&received, &e.extract_config());
    let recovered = match &extracted {
        Ok(out) => &out.secret,
        Err(f) => &f.partial.secret,
    };
    row.ber = ber(&secret, recovered).ok();
    row.status = match &extracted {
        Ok(out) if out.restored == *image => "ok".into(),
        Ok(_) => "lossy".into(),
        Err(f) => status_of(&f.error).into(),
    };
    row
}

/// Runs every `(image, config, attack)` cell. Cells are independent and run
/// in parallel; rows come back grouped by image, then config, then attack,
/// in input order. Per-cell failures are recorded in `status`.
pub fn robustness_bench(
    images: &[(String, GrayImage)],
    grid: &[BenchConfig],
    attacks: &[Attack],
    opts: &BenchOptions,
) -> Result<Vec<BerResult>> {
    if images.is_empty() || grid.is_empty() || attacks.is_empty() {
        return arg_err("benchmark needs at least one image, one config and one attack");
    }
    let cells: Vec<_> = images
        .iter()
        .flat_map(|(name, img)| grid.iter().flat_map(move |cfg| attacks.iter().map(move |&a| (name, img, cfg, a))))
        .collect();
    Ok(cells
        .par_iter()
        .map(|&(name, img, cfg, attack)| run_cell(name, img, cfg, attack, opts))
        .collect())
}
