use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::{BerRecord, SimConfig};
use crate::Result;

pub const CSV_HEADER: &str = "mode,code,delta_pct,rate_native,rate_punctured,ebn0_db,esn0_db,frames,bit_errors,frame_errors,ber,fer,mean_global_iters,mean_local_iters,seed";

/// One CSV row, without the trailing newline.
pub fn csv_row(r: &BerRecord) -> String {
    format!(
        "{},{},{},{:.6},{:.6},{:.4},{:.4},{},{},{},{:.6e},{:.6e},{:.4},{:.4},{}",
        r.mode,
        r.code,
        r.delta_pct,
        r.rate_native,
        r.rate_punctured,
        r.ebn0_db,
        r.esn0_db,
        r.frames,
        r.bit_errors,
        r.frame_errors,
        r.ber,
        r.fer,
        r.mean_global_iters,
        r.mean_local_iters,
        r.seed
    )
}

pub fn write_csv<W: Write>(mut w: W, records: &[BerRecord]) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        writeln!(w, "{}", csv_row(r))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Sidecar<'a> {
    config: &'a SimConfig,
    code: CodeInfo<'a>,
    notes: Notes,
    records: &'a [BerRecord],
}

#[derive(Serialize)]
struct CodeInfo<'a> {
    name: &'a str,
    n: usize,
    k: usize,
    m: usize,
}

#[derive(Serialize)]
struct Notes {
    stop_rule: String,
    local_iters: usize,
    global_iters: usize,
    ber_counts: &'static str,
    snr_normalization: &'static str,
}

/// Write the JSON sidecar: config echo, effective defaults and all records.
pub fn write_json(
    path: &Path,
    cfg: &SimConfig,
    code: &crate::LdpcCode,
    records: &[BerRecord],
) -> Result<()> {
    let sidecar = Sidecar {
        config: cfg,
        code: CodeInfo {
            name: code.name(),
            n: code.n(),
            k: code.k(),
            m: code.h().n_rows(),
        },
        notes: Notes {
            stop_rule: format!(
                "stop at {} frame errors or {} frames, whichever comes first",
                cfg.min_frame_errors, cfg.max_frames
            ),
            local_iters: cfg.local_iters(),
            global_iters: cfg.effective_global_iters(),
            ber_counts: "ber counts information bits; coded_ber counts all N code bits",
            snr_normalization: if cfg.include_asm_in_snr {
                "Eb/N0 per information bit, ASM and tail counted as overhead"
            } else {
                "Eb/N0 per information bit at rate R_p * log2(q); ASM energy not counted"
            },
        },
        records,
    };
    let text = serde_json::to_string_pretty(&sidecar).map_err(|e| crate::Error::Io(e.to_string()))?;
    std::fs::write(path, text)?;
    Ok(())
}
