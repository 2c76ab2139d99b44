//! LDPC block codes: sparse parity-check matrices, generator derivation,
//! encoding and the built-in code registry.

mod alist;
mod qc;
mod registry;

pub use alist::{emit_alist, parse_alist};
pub use qc::{expand_circulants, standin_qc_table, CirculantTable};
pub use registry::{build_standard_code, STANDARD_CODES};

use num_rational::Ratio;

use crate::gf2::{self, BitMatrix};
use crate::{Error, Result};

/// Largest row weight accepted for a code used by the decoder.
pub const MAX_ROW_WEIGHT: usize = 64;

/// Sparse parity-check matrix over GF(2), with both row and column adjacency.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<Vec<usize>>,
    cols: Vec<Vec<usize>>,
}

impl ParityCheckMatrix {
    /// Build from `(row, col)` positions. Positions must be in bounds and unique.
    pub fn from_positions(
        n_rows: usize,
        n_cols: usize,
        positions: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut rows = vec![Vec::new(); n_rows];
        let mut cols = vec![Vec::new(); n_cols];
        for (r, c) in positions {
            if r >= n_rows || c >= n_cols {
                return Err(Error::PositionOutOfBounds {
                    row: r,
                    col: c,
                    rows: n_rows,
                    cols: n_cols,
                });
            }
            rows[r].push(c);
            cols[c].push(r);
        }
        for (r, row) in rows.iter_mut().enumerate() {
            row.sort_unstable();
            if let Some(w) = row.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicatePosition { row: r, col: w[0] });
            }
        }
        for col in &mut cols {
            col.sort_unstable();
        }
        Ok(Self {
            n_rows,
            n_cols,
            rows,
            cols,
        })
    }

    pub fn from_dense(rows: &[Vec<u8>]) -> Result<Self> {
        let n_cols = rows.first().map_or(0, Vec::len);
        let positions = rows.iter().enumerate().flat_map(|(r, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, &b)| b != 0)
                .map(move |(c, _)| (r, c))
        });
        Self::from_positions(rows.len(), n_cols, positions)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Column indices of row `r`, ascending.
    pub fn row(&self, r: usize) -> &[usize] {
        &self.rows[r]
    }

    /// Row indices of column `c`, ascending.
    pub fn col(&self, c: usize) -> &[usize] {
        &self.cols[c]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn max_row_weight(&self) -> usize {
        self.rows.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_col_weight(&self) -> usize {
        self.cols.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Positions in row-major order.
    pub fn positions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |&c| (r, c)))
    }

    pub fn to_bit_matrix(&self) -> BitMatrix {
        let mut m = BitMatrix::zeros(self.n_rows, self.n_cols);
        for (r, c) in self.positions() {
            m.set(r, c, true);
        }
        m
    }

    pub fn rank(&self) -> usize {
        self.to_bit_matrix().rank()
    }

    /// `H · bitsᵀ` over GF(2).
    pub fn syndrome(&self, bits: &[u8]) -> Result<Vec<u8>> {
        check_len(self.n_cols, bits.len())?;
        Ok(self
            .rows
            .iter()
            .map(|row| row.iter().fold(0u8, |acc, &c| acc ^ (bits[c] & 1)))
            .collect())
    }

    pub fn is_codeword(&self, bits: &[u8]) -> Result<bool> {
        Ok(self.syndrome(bits)?.iter().all(|&s| s == 0))
    }

    /// Whether any two columns share more than one row (a length-4 cycle).
    pub fn has_four_cycle(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        for row in &self.rows {
            for (i, &a) in row.iter().enumerate() {
                for &b in &row[i + 1..] {
                    if !seen.insert((a, b)) {
                        return true;
                    }
                }
            }
        }
        false
    }
}

/// Generator matrix in the original column order, with the column permutation
/// that made it systematic.
///
/// `col_permutation[j]` is the original column index placed at position `j` of
/// the systematic form; the first `k` entries are the information positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMatrix {
    k: usize,
    n: usize,
    rows: BitMatrix,
    col_permutation: Vec<usize>,
}

impl GeneratorMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &BitMatrix {
        &self.rows
    }

    pub fn col_permutation(&self) -> &[usize] {
        &self.col_permutation
    }

    /// Codeword positions carrying the information bits, in input order.
    pub fn systematic_positions(&self) -> &[usize] {
        &self.col_permutation[..self.k]
    }

    /// `x · G`.
    pub fn encode(&self, x: &[u8]) -> Result<Vec<u8>> {
        check_len(self.k, x.len())?;
        let mut acc = vec![0u64; gf2::words_for(self.n)];
        for (j, _) in x.iter().enumerate().filter(|(_, &b)| b & 1 == 1) {
            for (a, &g) in acc.iter_mut().zip(self.rows.row(j)) {
                *a ^= g;
            }
        }
        Ok(gf2::unpack_bits(&acc, self.n))
    }
}

/// Systematic generator for `h` by Gauss-Jordan elimination.
///
/// Pivots are searched from the last column backwards, so for matrices of the
/// form `[A | I]` the information positions come out as the leading columns.
/// Rank deficiency in `h` simply raises `k`.
pub fn derive_generator(h: &ParityCheckMatrix) -> GeneratorMatrix {
    let n = h.n_cols();
    let mut reduced = h.to_bit_matrix();
    let pivots = reduced.rref_with_order((0..n).rev());
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    let k = free.len();

    let mut rows = BitMatrix::zeros(k, n);
    for (j, &f) in free.iter().enumerate() {
        rows.set(j, f, true);
        for (i, &p) in pivots.iter().enumerate() {
            if reduced.get(i, f) {
                rows.set(j, p, true);
            }
        }
    }
    let mut col_permutation = free;
    col_permutation.extend_from_slice(&pivots);
    GeneratorMatrix {
        k,
        n,
        rows,
        col_permutation,
    }
}

/// Variable/check adjacency flattened into edge arrays for message passing.
///
/// Edges are numbered row-major: row `r` owns edges
/// `check_ptr[r]..check_ptr[r + 1]`.
#[derive(Clone, Debug)]
pub struct TannerGraph {
    pub check_ptr: Vec<usize>,
    pub edge_var: Vec<usize>,
    pub var_ptr: Vec<usize>,
    pub var_edges: Vec<usize>,
}

impl TannerGraph {
    fn new(h: &ParityCheckMatrix) -> Self {
        let mut check_ptr = Vec::with_capacity(h.n_rows() + 1);
        let mut edge_var = Vec::with_capacity(h.nnz());
        check_ptr.push(0);
        for r in 0..h.n_rows() {
            edge_var.extend_from_slice(h.row(r));
            check_ptr.push(edge_var.len());
        }
        let mut per_var = vec![Vec::new(); h.n_cols()];
        for (e, &v) in edge_var.iter().enumerate() {
            per_var[v].push(e);
        }
        let mut var_ptr = Vec::with_capacity(h.n_cols() + 1);
        let mut var_edges = Vec::with_capacity(edge_var.len());
        var_ptr.push(0);
        for edges in per_var {
            var_edges.extend(edges);
            var_ptr.push(var_edges.len());
        }
        Self {
            check_ptr,
            edge_var,
            var_ptr,
            var_edges,
        }
    }

    pub fn n_edges(&self) -> usize {
        self.edge_var.len()
    }
}

/// An LDPC code: parity-check matrix, derived generator and exact rate.
#[derive(Clone, Debug)]
pub struct LdpcCode {
    name: String,
    h: ParityCheckMatrix,
    g: GeneratorMatrix,
    graph: TannerGraph,
}

impl LdpcCode {
    pub fn new(name: impl Into<String>, h: ParityCheckMatrix) -> Result<Self> {
        if h.n_cols() == 0 || h.n_rows() == 0 {
            return Err(Error::EmptyMatrix);
        }
        let w = h.max_row_weight();
        if w > MAX_ROW_WEIGHT {
            return Err(Error::RowWeightTooLarge {
                weight: w,
                max: MAX_ROW_WEIGHT,
            });
        }
        let g = derive_generator(&h);
        let graph = TannerGraph::new(&h);
        Ok(Self {
            name: name.into(),
            h,
            g,
            graph,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn h(&self) -> &ParityCheckMatrix {
        &self.h
    }

    pub fn g(&self) -> &GeneratorMatrix {
        &self.g
    }

    pub fn graph(&self) -> &TannerGraph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.h.n_cols()
    }

    pub fn k(&self) -> usize {
        self.g.k()
    }

    /// Exact rate `K / N` with `K = N - rank(H)`.
    pub fn rate(&self) -> Ratio<i128> {
        Ratio::new(self.k() as i128, self.n() as i128)
    }

    pub fn systematic_positions(&self) -> &[usize] {
        self.g.systematic_positions()
    }

    pub fn encode(&self, x: &[u8]) -> Result<Vec<u8>> {
        self.g.encode(x)
    }

    /// Information bits read back from a codeword's systematic positions.
    pub fn extract_info(&self, codeword: &[u8]) -> Vec<u8> {
        self.systematic_positions()
            .iter()
            .map(|&p| codeword[p])
            .collect()
    }

    pub fn syndrome(&self, bits: &[u8]) -> Result<Vec<u8>> {
        self.h.syndrome(bits)
    }
}

pub(crate) fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, actual })
    }
}
