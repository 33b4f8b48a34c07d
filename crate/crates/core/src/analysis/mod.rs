//! Experiments: bit-plane change rates, block distortion, complexity-order
//! drift and robustness benchmarks, with CSV/JSON report writers.

mod bench;
mod drift;
mod nbcr;

use std::io::Write;

use serde::Serialize;

pub use bench::{parse_grid_token, robustness_bench, Attack, BenchConfig, BenchOptions, BerResult};
pub use drift::{kendall_distance, ordering_drift, DriftEntry, DriftReport, DriftRow, QfOrder};
pub use nbcr::{block_diff_map, nbcr_report, NbcrReport, NbcrRow, DEFAULT_QF_SWEEP};

use crate::corpus::BitStream;
use crate::error::{Error, Result};

/// Bit error rate of `received` against `sent`. Missing or surplus bits
/// count as errors, normalized by the sent length.
pub fn ber(sent: &BitStream, received: &BitStream) -> Result<f64> {
    if sent.is_empty() {
        return Err(Error::UndefinedRate);
    }
    let common = sent.len().min(received.len());
    let flips = sent.bits()[..common]
        .iter()
        .zip(&received.bits()[..common])
        .filter(|(a, b)| a != b)
        .count();
    let penalty = sent.len().abs_diff(received.len());
    Ok(((flips + penalty) as f64 / sent.len() as f64).min(1.0))
}

pub fn write_csv<T: Serialize>(rows: &[T], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(rows: &[T], out: impl Write) -> Result<()> {
    serde_json::to_writer_pretty(out, rows)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits(s: &str) -> BitStream {
        BitStream::from_text(s).unwrap()
    }

    #[test]
    fn ber_cases() {
        assert_eq!(ber(&bits("10110"), &bits("10110")).unwrap(), 0.0);
        assert_eq!(ber(&bits("10110"), &bits("01001")).unwrap(), 1.0);
        assert_eq!(ber(&bits("10110011"), &BitStream::new()).unwrap(), 1.0);
        assert_eq!(ber(&bits("1011"), &bits("10")).unwrap(), 0.5);
        assert_eq!(ber(&bits("1011"), &bits("101101")).unwrap(), 0.5);
        assert!(matches!(ber(&BitStream::new(), &bits("1")), Err(Error::UndefinedRate)));
    }

    #[test]
    fn csv_header_follows_field_names() {
        #[derive(Serialize)]
        struct Row {
            a: u8,
            #[serde(rename = "B")]
            b: f64,
        }
        let mut buf = Vec::new();
        write_csv(&[Row { a: 1, b: 0.5 }], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,B\n1,0.5\n");
    }
}
