//! Quasi-cyclic structure: circulant tables and their expansion.

use rand::seq::SliceRandom;
use rand::Rng;

use super::ParityCheckMatrix;
use crate::{rng, Error, Result};

/// Protograph of circulant shifts. `cells[r * base_cols + c]` is `None` for an
/// all-zero block, otherwise the right-shift of a `lift × lift` identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CirculantTable {
    pub base_rows: usize,
    pub base_cols: usize,
    pub lift: usize,
    pub cells: Vec<Option<usize>>,
}

impl CirculantTable {
    pub fn empty(base_rows: usize, base_cols: usize, lift: usize) -> Self {
        Self {
            base_rows,
            base_cols,
            lift,
            cells: vec![None; base_rows * base_cols],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Option<usize> {
        self.cells[r * self.base_cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, shift: Option<usize>) {
        self.cells[r * self.base_cols + c] = shift;
    }

    pub fn occupied(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }
}

/// Expand a circulant table: a cell with shift `s` at `(r, c)` contributes
/// `(r·Q + i, c·Q + (i + s) mod Q)` for `i` in `0..Q`.
pub fn expand_circulants(table: &CirculantTable) -> Result<ParityCheckMatrix> {
    let q = table.lift;
    if let Some(&Some(s)) = table.cells.iter().find(|c| matches!(c, Some(s) if *s >= q)) {
        return Err(Error::ShiftOutOfRange { shift: s, lift: q });
    }
    let mut positions = Vec::with_capacity(table.occupied() * q);
    for r in 0..table.base_rows {
        for c in 0..table.base_cols {
            if let Some(s) = table.get(r, c) {
                positions.extend((0..q).map(|i| (r * q + i, c * q + (i + s) % q)));
            }
        }
    }
    ParityCheckMatrix::from_positions(table.base_rows * q, table.base_cols * q, positions)
}

/// Seeded progressive-edge-growth construction of a column-regular QC table.
///
/// Base columns are filled left to right. Each new edge goes to a least-loaded
/// base row not yet used by the column (ties broken by the generator), and its
/// shift is drawn uniformly from the shifts that close no length-4 cycle, so
/// the expanded matrix has girth at least 6.
pub fn standin_qc_table(
    base_rows: usize,
    base_cols: usize,
    lift: usize,
    col_weight: usize,
    seed: u64,
) -> Result<CirculantTable> {
    if col_weight == 0 || col_weight > base_rows || lift == 0 {
        return Err(Error::Config(format!(
            "cannot place {col_weight} edges per column in {base_rows} base rows"
        )));
    }
    let mut rng = rng::seeded(seed);
    let mut table = CirculantTable::empty(base_rows, base_cols, lift);
    let mut row_deg = vec![0usize; base_rows];

    for c in 0..base_cols {
        for _ in 0..col_weight {
            let mut candidates: Vec<usize> = (0..base_rows)
                .filter(|&r| table.get(r, c).is_none())
                .collect();
            candidates.shuffle(&mut rng);
            candidates.sort_by_key(|&r| row_deg[r]);

            let mut placed = false;
            for &r in &candidates {
                let allowed = cycle_free_shifts(&table, r, c);
                if allowed.is_empty() {
                    continue;
                }
                let s = allowed[rng.random_range(0..allowed.len() as u64) as usize];
                table.set(r, c, Some(s));
                row_deg[r] += 1;
                placed = true;
                break;
            }
            if !placed {
                return Err(Error::Config(format!(
                    "no 4-cycle-free shift left for base column {c}; increase the lift size"
                )));
            }
        }
    }
    Ok(table)
}

/// Shifts for a new cell `(r, c)` that close no 4-cycle with existing cells.
fn cycle_free_shifts(table: &CirculantTable, r: usize, c: usize) -> Vec<usize> {
    let q = table.lift;
    let mut forbidden = vec![false; q];
    for r2 in (0..table.base_rows).filter(|&r2| r2 != r) {
        let Some(s_r2c) = table.get(r2, c) else {
            continue;
        };
        for c2 in (0..table.base_cols).filter(|&c2| c2 != c) {
            if let (Some(s_rc2), Some(s_r2c2)) = (table.get(r, c2), table.get(r2, c2)) {
                // s(r,c) - s(r,c2) + s(r2,c2) - s(r2,c) == 0 (mod Q) closes a 4-cycle.
                forbidden[(s_rc2 + s_r2c + q - s_r2c2) % q] = true;
            }
        }
    }
    (0..q).filter(|&s| !forbidden[s]).collect()
}
