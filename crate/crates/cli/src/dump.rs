//! Serialization of differential matrices with their block structure and basis labels.

use std::fmt::Write as _;

use anyhow::{bail, Context, Result};
use hookext::resolution::{BlockInfo, DifferentialMatrix};
use hookext::SparseMatrix;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::record::{asciify, Family};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockLabel {
    pub composition: Vec<usize>,
    pub offset: usize,
    pub len: usize,
}

impl From<BlockInfo> for BlockLabel {
    fn from(b: BlockInfo) -> Self {
        BlockLabel { composition: b.weight.0, offset: b.offset, len: b.len }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
    /// Decimal, so that entries of any size survive JSON.
    pub value: String,
}

/// `e^{(i)}(a, b, M)`: rows index `Hom(P_i, M)`, columns `Hom(P_{i-1}, M)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDump {
    pub a: usize,
    pub b: usize,
    pub k: usize,
    pub i: usize,
    pub target: Family,
    pub module: String,
    pub rows: usize,
    pub cols: usize,
    pub row_blocks: Vec<BlockLabel>,
    pub col_blocks: Vec<BlockLabel>,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub entries: Vec<Entry>,
}

fn composition(c: &[usize]) -> String {
    let parts: Vec<String> = c.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

impl MatrixDump {
    pub fn new(d: &DifferentialMatrix, k: usize, family: Family) -> Self {
        MatrixDump {
            a: d.a,
            b: d.b,
            k,
            i: d.i,
            target: family,
            module: d.target.to_string(),
            rows: d.matrix.rows(),
            cols: d.matrix.cols(),
            row_blocks: d.codomain.block_info().into_iter().map(Into::into).collect(),
            col_blocks: d.domain.block_info().into_iter().map(Into::into).collect(),
            row_labels: d.codomain.labels(),
            col_labels: d.domain.labels(),
            entries: d.matrix.iter().map(|(row, col, v)| Entry { row, col, value: v.to_string() }).collect(),
        }
    }

    pub fn to_sparse(&self) -> Result<SparseMatrix> {
        let mut m = SparseMatrix::new(self.rows, self.cols);
        for e in &self.entries {
            if e.row >= self.rows || e.col >= self.cols {
                bail!("entry ({}, {}) outside a {}x{} matrix", e.row, e.col, self.rows, self.cols);
            }
            let v: BigInt = e.value.parse().with_context(|| format!("bad entry value {:?}", e.value))?;
            m.add(e.row, e.col, v);
        }
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("dump serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// `row,col,value` triplets.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["row", "col", "value"])?;
        for e in &self.entries {
            w.write_record([e.row.to_string(), e.col.to_string(), e.value.clone()])?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    /// Dense layout with `|` between column blocks and a rule between row blocks,
    /// preceded by the block and basis legends.
    pub fn to_text(&self, ascii: bool) -> Result<String> {
        let m = self.to_sparse()?;
        let mut out = String::new();
        writeln!(
            out,
            "e^({})(a={}, b={}) into {}: {} x {}",
            self.i,
            self.a,
            self.b,
            asciify(&self.module, ascii),
            self.rows,
            self.cols
        )?;
        let legend = |out: &mut String, name: &str, blocks: &[BlockLabel], labels: &[String]| -> std::fmt::Result {
            writeln!(out, "{name}:")?;
            for bl in blocks {
                let names: Vec<String> =
                    labels[bl.offset..bl.offset + bl.len].iter().map(|l| asciify(l, ascii)).collect();
                writeln!(out, "  {} [{}..{}): {}", composition(&bl.composition), bl.offset, bl.offset + bl.len, names.join(" "))?;
            }
            Ok(())
        };
        legend(&mut out, "column blocks", &self.col_blocks, &self.col_labels)?;
        legend(&mut out, "row blocks", &self.row_blocks, &self.row_labels)?;

        let cells: Vec<Vec<String>> =
            (0..self.rows).map(|r| (0..self.cols).map(|c| m.get(r, c).to_string()).collect()).collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        let label_width = self.row_labels.iter().map(|l| asciify(l, ascii).chars().count()).max().unwrap_or(0);
        let col_starts: Vec<usize> = self.col_blocks.iter().skip(1).map(|b| b.offset).collect();
        let row_starts: Vec<usize> = self.row_blocks.iter().skip(1).map(|b| b.offset).collect();
        for (r, row) in cells.iter().enumerate() {
            if row_starts.contains(&r) {
                writeln!(out, "{}", "-".repeat(label_width + 2 + self.cols * (width + 1) + 2 * col_starts.len()))?;
            }
            let label = asciify(&self.row_labels[r], ascii);
            let pad = label_width - label.chars().count();
            write!(out, "{label}{}  ", " ".repeat(pad))?;
            for (c, x) in row.iter().enumerate() {
                if col_starts.contains(&c) {
                    out.push_str("| ");
                }
                write!(out, "{x:>width$} ")?;
            }
            out.truncate(out.trim_end().len());
            out.push('\n');
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use hookext::resolution::differential_matrix;
    use hookext::Target;

    #[test]
    fn json_round_trip() {
        let d = differential_matrix(2, 3, 2, &Target::hook_shift(2, 3, 2).unwrap()).unwrap();
        let dump = MatrixDump::new(&d, 2, Family::Hook);
        let back = MatrixDump::from_json(&dump.to_json()).unwrap();
        assert_eq!(back, dump);
        assert_eq!(back.to_sparse().unwrap(), d.matrix);
    }

    #[test]
    fn text_layout() {
        let d = differential_matrix(2, 3, 1, &Target::tensor_shift(2, 3, 1).unwrap()).unwrap();
        let text = MatrixDump::new(&d, 1, Family::Tensor).to_text(false).unwrap();
        assert!(text.starts_with("e^(1)(a=2, b=3) into D_3⊗∧^2: 9 x 6"));
        assert!(text.contains("(3,1,1) [0..3)"));
        let csv = MatrixDump::new(&d, 1, Family::Tensor).to_csv().unwrap();
        assert!(csv.starts_with("row,col,value\n"));
    }
}
