//! Built-in codes.
//!
//! The two `standin-*` entries are deterministic QC-LDPC codes of length 1024
//! built by [`standin_qc_table`] with a fixed seed. They have the shape of the
//! rate-2/3 and rate-4/5 telemetry codes but are not those codes; real
//! matrices can be loaded from alist files instead.

use super::{expand_circulants, standin_qc_table, LdpcCode, ParityCheckMatrix};
use crate::{Error, Result};

/// Seed shared by the QC stand-in constructions.
pub const STANDIN_SEED: u64 = 0x4152_5430;

const STANDIN_LIFT: usize = 16;
const STANDIN_BASE_COLS: usize = 64;
const STANDIN_COL_WEIGHT: usize = 3;

/// `(name, n, k)` for every registry entry.
pub const STANDARD_CODES: &[(&str, usize, usize)] = &[
    ("standin-artm0-r23-n1024", 1024, 688),
    ("standin-r45-n1024", 1024, 816),
    ("hamming-7-4", 7, 4),
    ("toy-tree", 10, 5),
];

pub fn build_standard_code(name: &str) -> Result<LdpcCode> {
    let h = match name {
        "standin-artm0-r23-n1024" => standin(21)?,
        "standin-r45-n1024" => standin(13)?,
        "hamming-7-4" => ParityCheckMatrix::from_dense(&[
            vec![1, 1, 0, 1, 1, 0, 0],
            vec![1, 0, 1, 1, 0, 1, 0],
            vec![0, 1, 1, 1, 0, 0, 1],
        ])?,
        // Cycle-free Tanner graph: 10 variables, 5 checks, 14 edges.
        "toy-tree" => ParityCheckMatrix::from_positions(
            5,
            10,
            [
                (0, 0),
                (0, 1),
                (0, 2),
                (1, 2),
                (1, 3),
                (1, 4),
                (2, 4),
                (2, 5),
                (2, 6),
                (3, 1),
                (3, 7),
                (3, 8),
                (4, 6),
                (4, 9),
            ],
        )?,
        _ => return Err(Error::UnknownCode(name.to_string())),
    };
    LdpcCode::new(name, h)
}

fn standin(base_rows: usize) -> Result<ParityCheckMatrix> {
    let table = standin_qc_table(
        base_rows,
        STANDIN_BASE_COLS,
        STANDIN_LIFT,
        STANDIN_COL_WEIGHT,
        STANDIN_SEED,
    )?;
    expand_circulants(&table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn registry_dimensions() {
        for &(name, n, k) in STANDARD_CODES {
            let code = build_standard_code(name).unwrap();
            assert_eq!((code.n(), code.k()), (n, k), "{name}");
        }
    }

    #[test]
    fn hamming_rate() {
        let code = build_standard_code("hamming-7-4").unwrap();
        assert_eq!(code.rate(), Ratio::new(4, 7));
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(
            build_standard_code("artm0"),
            Err(Error::UnknownCode(_))
        ));
    }

    #[test]
    fn standins_have_girth_six() {
        for name in ["standin-artm0-r23-n1024", "standin-r45-n1024"] {
            let code = build_standard_code(name).unwrap();
            assert!(!code.h().has_four_cycle(), "{name}");
            assert!(code.h().max_row_weight() <= 64);
        }
    }
}
