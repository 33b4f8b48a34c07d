use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use rrdh::analysis::{
    nbcr_report, ordering_drift, parse_grid_token, robustness_bench, write_csv, write_json, Attack,
    BenchOptions,
};
use rrdh::corpus::{bundled_corpus, gen_secret, load_corpus_dir, load_pgm, save_pgm, BitStream, GrayImage};
use rrdh::hardening::HardeningConfig;
use rrdh::jpeg_sim::compress_roundtrip;
use rrdh::rdh_core::{embed, extract, EmbedConfig, EmbedMetadata, ExtractConfig};
use rrdh::Error;
use serde::Serialize;

use crate::args::{BenchArgs, Command, CorpusArgs, DriftArgs, EmbedArgs, ExtractArgs, NbcrArgs, OutputArgs, SchemeArgs};

pub const EXIT_IO: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INTEGRITY: u8 = 3;

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Argument(_) | Error::Capacity { .. } | Error::UndefinedRate => EXIT_USAGE,
            Error::CorruptAux(_) | Error::MapDecode(_) | Error::Payload(_) => EXIT_INTEGRITY,
            _ => EXIT_IO,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    }
}

type CmdResult = Result<(), Failure>;

pub fn run(command: Command) -> CmdResult {
    match command {
        Command::Embed(a) => cmd_embed(a),
        Command::Extract(a) => cmd_extract(a),
        Command::Attack(a) => {
            let img = load(&a.input)?;
            save(&compress_roundtrip(&img, a.qf)?, &a.out)
        }
        Command::Nbcr(a) => cmd_nbcr(a),
        Command::Drift(a) => cmd_drift(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

fn load(path: &Path) -> Result<GrayImage, Failure> {
    load_pgm(path).map_err(|e| Failure {
        message: format!("{}: {e}", path.display()),
        ..Failure::from(e)
    })
}

fn save(img: &GrayImage, path: &Path) -> CmdResult {
    save_pgm(img, path).map_err(|e| Failure {
        message: format!("{}: {e}", path.display()),
        ..Failure::from(e)
    })
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> CmdResult {
    fs::write(path, contents).map_err(|e| io_failure(path, e))
}

fn hardening(s: &SchemeArgs) -> HardeningConfig {
    HardeningConfig {
        aux_repetition: s.rep,
        ordering: s.ordering,
        shift: s.shift,
    }
}

fn cmd_embed(a: EmbedArgs) -> CmdResult {
    let cover = load(&a.input)?;
    let secret = match &a.secret {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
            BitStream::from_text(&text)?
        }
        None => gen_secret(a.seed, a.bits.unwrap_or(0)),
    };
    let cfg = EmbedConfig {
        n: a.scheme.n,
        predictor: a.predictor,
        hardening: hardening(&a.scheme),
    };
    let rec = embed(&cover, &secret, &cfg)?;
    save(&rec.marked, &a.out)?;
    let meta_path = a.meta.unwrap_or_else(|| a.out.with_extension("json"));
    let meta = serde_json::to_string_pretty(&rec.metadata()).expect("metadata serializes");
    write_file(&meta_path, meta + "\n")?;
    println!(
        "embedded {} secret bits ({} payload bits) with N={} into {}; PSNR {}; metadata in {}",
        secret.len(),
        rec.capacity_used,
        rec.aux.predictor,
        a.out.display(),
        if rec.psnr.is_finite() { format!("{:.2} dB", rec.psnr) } else { "inf".into() },
        meta_path.display()
    );
    Ok(())
}

fn cmd_extract(a: ExtractArgs) -> CmdResult {
    let marked = load(&a.input)?;
    let cfg = match &a.meta {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
            let meta: EmbedMetadata = serde_json::from_str(&text).map_err(|e| Failure {
                code: EXIT_USAGE,
                message: format!("{}: {e}", path.display()),
            })?;
            meta.extract_config()
        }
        None => ExtractConfig {
            n: a.scheme.n,
            hardening: hardening(&a.scheme),
        },
    };
    match extract(&marked, &cfg) {
        Ok(out) => {
            write_file(&a.secret_out, out.secret.to_text() + "\n")?;
            save(&out.restored, &a.restored_out)?;
            println!("recovered {} secret bits; restored image in {}", out.secret.len(), a.restored_out.display());
            Ok(())
        }
        Err(failure) => {
            let integrity = failure.is_integrity();
            // partial results are still written for inspection
            let partial = &failure.partial;
            write_file(&a.secret_out, partial.secret.to_text() + "\n")?;
            if let Some(img) = &partial.restored {
                save(img, &a.restored_out)?;
            }
            let mut f = Failure::from(failure.error);
            if integrity {
                f.message = format!("{} ({} partial secret bits written)", f.message, partial.secret.len());
            }
            Err(f)
        }
    }
}

fn load_corpus(c: &CorpusArgs) -> Result<Vec<(String, GrayImage)>, Failure> {
    if c.corpus == "synth" {
        if c.size < rrdh::corpus::MIN_SYNTH_SIZE {
            return Err(Error::Argument(format!("synthetic size {} too small", c.size)).into());
        }
        return Ok(bundled_corpus(c.size));
    }
    let dir = PathBuf::from(&c.corpus);
    let images = load_corpus_dir(&dir).map_err(|e| Failure {
        message: format!("{}: {e}", dir.display()),
        ..Failure::from(e)
    })?;
    if images.is_empty() {
        return Err(Failure {
            code: EXIT_USAGE,
            message: format!("no .pgm images in {}", dir.display()),
        });
    }
    Ok(images)
}

fn emit<T: Serialize>(rows: &[T], out: &OutputArgs) -> CmdResult {
    match &out.out {
        Some(path) => {
            let file = fs::File::create(path).map_err(|e| io_failure(path, e))?;
            write_csv(rows, io::BufWriter::new(file))?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write_csv(rows, &mut lock)?;
            lock.flush().map_err(|e| io_failure(Path::new("<stdout>"), e))?;
        }
    }
    if let Some(path) = &out.json {
        let file = fs::File::create(path).map_err(|e| io_failure(path, e))?;
        write_json(rows, io::BufWriter::new(file))?;
    }
    Ok(())
}

fn cmd_nbcr(a: NbcrArgs) -> CmdResult {
    let corpus = load_corpus(&a.corpus)?;
    let report = nbcr_report(&corpus, &a.qf)?;
    emit(&report.all_rows(), &a.output)
}

fn cmd_drift(a: DriftArgs) -> CmdResult {
    let img = load(&a.input)?;
    let report = ordering_drift(&img, a.block, a.n, &a.qf)?;
    emit(&report.rows(), &a.output)
}

fn cmd_bench(a: BenchArgs) -> CmdResult {
    if !(a.fill > 0.0 && a.fill <= 1.0) {
        return Err(Error::Argument(format!("--fill {} outside (0, 1]", a.fill)).into());
    }
    let corpus = load_corpus(&a.corpus)?;
    let grid = a
        .grid
        .iter()
        .map(|t| parse_grid_token(t, a.n, a.predictor))
        .collect::<rrdh::Result<Vec<_>>>()?;
    let attacks = a.qf.iter().map(|s| s.parse()).collect::<rrdh::Result<Vec<Attack>>>()?;
    let opts = BenchOptions {
        secret_fraction: a.fill,
        seed: a.seed,
    };
    let rows = robustness_bench(&corpus, &grid, &attacks, &opts)?;
    emit(&rows, &a.output)
}
