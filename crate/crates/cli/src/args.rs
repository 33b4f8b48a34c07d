use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use rrdh::hardening::ScanOrder;
use rrdh::rdh_core::PredictorChoice;

#[derive(Parser, Debug)]
#[command(name = "rrdh", version, about = "Two-layer MSB reversible data hiding and JPEG robustness experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Hide a secret bit stream in a PGM image
    Embed(EmbedArgs),
    /// Recover the secret and the original image from a marked PGM
    Extract(ExtractArgs),
    /// Apply the simulated JPEG quantization round trip
    Attack(AttackArgs),
    /// Bit-plane change rates after JPEG compression
    Nbcr(NbcrArgs),
    /// Complexity-order drift of one 8x8 block after JPEG compression
    Drift(DriftArgs),
    /// Bit error rates of embedding configurations under attacks
    Bench(BenchArgs),
}

pub fn parse_predictor(s: &str) -> Result<PredictorChoice, String> {
    match s {
        "auto" => Ok(PredictorChoice::Auto),
        "1" | "2" | "3" => Ok(PredictorChoice::Fixed(s.parse().unwrap())),
        other => Err(format!("expected 1, 2, 3 or auto, got {other:?}")),
    }
}

fn parse_block(s: &str) -> Result<(usize, usize), String> {
    let (i, j) = s.split_once(',').ok_or("expected ROW,COL")?;
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok((num(i)?, num(j)?))
}

#[derive(Args, Debug)]
pub struct SchemeArgs {
    /// Number of LSB planes left untouched
    #[arg(long, default_value_t = 3)]
    pub n: u8,
    /// Visiting order of carrier pixels
    #[arg(long, default_value_t = ScanOrder::Complexity)]
    pub ordering: ScanOrder,
    /// Aux repetition factor (odd)
    #[arg(long, default_value_t = 1)]
    pub rep: u32,
    /// Histogram shift quantity
    #[arg(long, default_value_t = 1)]
    pub shift: u32,
}

#[derive(Args, Debug)]
pub struct EmbedArgs {
    /// Cover image (binary PGM)
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Marked image to write
    #[arg(long)]
    pub out: PathBuf,
    /// Secret as a text file of 0/1 characters
    #[arg(long, conflicts_with = "bits")]
    pub secret: Option<PathBuf>,
    /// Length of a generated pseudorandom secret
    #[arg(long, required_unless_present = "secret")]
    pub bits: Option<usize>,
    /// Seed of the generated secret
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Predictor: 1, 2, 3 or auto
    #[arg(long = "N", value_parser = parse_predictor, default_value = "auto")]
    pub predictor: PredictorChoice,
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// Sidecar metadata JSON (defaults to the output path with a .json extension)
    #[arg(long)]
    pub meta: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExtractArgs {
    /// Marked image (binary PGM)
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Sidecar JSON written by embed; overrides the scheme flags
    #[arg(long)]
    pub meta: Option<PathBuf>,
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// Where to write the recovered secret bits
    #[arg(long)]
    pub secret_out: PathBuf,
    /// Where to write the restored image
    #[arg(long)]
    pub restored_out: PathBuf,
}

#[derive(Args, Debug)]
pub struct AttackArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// JPEG quality factor, 1..=100
    #[arg(long)]
    pub qf: u8,
}

#[derive(Args, Debug)]
pub struct CorpusArgs {
    /// `synth` for the bundled synthetic corpus, or a directory of PGM files
    #[arg(long, env = "RRDH_CORPUS_DIR", default_value = "synth")]
    pub corpus: String,
    /// Side length of the synthetic images
    #[arg(long, default_value_t = 128)]
    pub size: usize,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// CSV output path (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the rows as JSON
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct NbcrArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Quality factors
    #[arg(long, value_delimiter = ',', default_values_t = rrdh::analysis::DEFAULT_QF_SWEEP)]
    pub qf: Vec<u8>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct DriftArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Top-left corner of the 8x8 block as ROW,COL
    #[arg(long, value_parser = parse_block)]
    pub block: (usize, usize),
    #[arg(long, default_value_t = 3)]
    pub n: u8,
    #[arg(long, value_delimiter = ',', default_values_t = [85u8, 90, 100])]
    pub qf: Vec<u8>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Configurations: baseline, raster, shiftT, repR, nK, NK, Nauto, joined with '+'
    #[arg(long, value_delimiter = ',', default_value = "baseline,raster,shift4,rep5")]
    pub grid: Vec<String>,
    /// Attacks: none, a quality factor, or auxflipK
    #[arg(long, value_delimiter = ',', default_value = "none,95")]
    pub qf: Vec<String>,
    /// Plane count for tokens without nK
    #[arg(long, default_value_t = 3)]
    pub n: u8,
    /// Predictor for tokens without NK
    #[arg(long = "N", value_parser = parse_predictor, default_value = "auto")]
    pub predictor: PredictorChoice,
    /// Fraction of estimated capacity filled with secret bits
    #[arg(long, default_value_t = 0.5)]
    pub fill: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}
