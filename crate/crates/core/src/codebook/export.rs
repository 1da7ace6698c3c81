//! Plain-text codebook export.
//!
//! ```text
//! # n_bs=<N> rows=<count>
//! id,layer,k,b[,re_0,im_0,...,re_{N-1},im_{N-1}]
//! ```
//! One row per codeword. Entries, when present, are the stored template
//! `w` in array order `n = -N/2+1 .. N/2`.

use std::io::{self, Write};

use num_complex::Complex64;

use super::Codeword;

/// A parsed export row.
#[derive(Clone, Debug, PartialEq)]
pub struct CodebookRow {
    pub id: u64,
    pub layer: usize,
    pub k: f64,
    pub b: f64,
    pub entries: Vec<Complex64>,
}

impl CodebookRow {
    pub fn parse(line: &str) -> Option<CodebookRow> {
        let mut fields = line.trim().split(',');
        let id = fields.next()?.parse().ok()?;
        let layer = fields.next()?.parse().ok()?;
        let k = fields.next()?.parse().ok()?;
        let b = fields.next()?.parse().ok()?;
        let rest: Vec<f64> = fields.map(|f| f.parse().ok()).collect::<Option<_>>()?;
        if !rest.len().is_multiple_of(2) {
            return None;
        }
        let entries = rest.chunks(2).map(|c| Complex64::new(c[0], c[1])).collect();
        Some(CodebookRow { id, layer, k, b, entries })
    }
}

/// Writes `codewords` in the export format and returns the row count.
pub fn write_codebook<W: Write>(out: &mut W, n_bs: usize, codewords: &[Codeword], with_entries: bool) -> io::Result<usize> {
    writeln!(out, "# n_bs={} rows={}", n_bs, codewords.len())?;
    write!(out, "id,layer,k,b")?;
    if with_entries {
        for n in 0..n_bs {
            write!(out, ",re_{n},im_{n}")?;
        }
    }
    writeln!(out)?;
    for cw in codewords {
        write!(out, "{},{},{:e},{}", cw.id, cw.layer, cw.point.k, cw.point.b)?;
        if with_entries {
            for z in cw.vector.iter() {
                write!(out, ",{},{}", z.re, z.im)?;
            }
        }
        writeln!(out)?;
    }
    Ok(codewords.len())
}
