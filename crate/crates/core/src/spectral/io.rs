//! On-disk formats for [`RealField`].
//!
//! Binary layout, all little-endian:
//!
//! | offset | size | content                        |
//! |--------|------|--------------------------------|
//! | 0      | 4    | magic `PFL1`                   |
//! | 4      | 4    | `n` as u32                     |
//! | 8      | 8    | `N` as u64                     |
//! | 16     | 8    | `L` as f64                     |
//! | 24     | 8    | reserved, zero                 |
//! | 32     | 8·Nⁿ | values as f64, row-major       |

use std::io::{self, Read, Write};

use super::field::RealField;
use super::grid::GridSpec;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"PFL1";
pub const HEADER_LEN: usize = 32;

pub fn write_binary<W: Write>(field: &RealField, mut out: W) -> io::Result<()> {
    let grid = field.grid();
    let mut header = [0u8; HEADER_LEN];
    header[0..4].copy_from_slice(MAGIC);
    header[4..8].copy_from_slice(&(grid.dim() as u32).to_le_bytes());
    header[8..16].copy_from_slice(&(grid.points() as u64).to_le_bytes());
    header[16..24].copy_from_slice(&grid.length().to_le_bytes());
    out.write_all(&header)?;
    let mut body = Vec::with_capacity(8 * field.values().len());
    for v in field.values() {
        body.extend_from_slice(&v.to_le_bytes());
    }
    out.write_all(&body)
}

pub fn to_binary(field: &RealField) -> Vec<u8> {
    let mut buf = Vec::with_capacity(HEADER_LEN + 8 * field.values().len());
    write_binary(field, &mut buf).expect("writing to a Vec cannot fail");
    buf
}

pub fn read_binary<R: Read>(mut input: R) -> Result<RealField> {
    let mut header = [0u8; HEADER_LEN];
    input
        .read_exact(&mut header)
        .map_err(|e| Error::Format(format!("header: {e}")))?;
    if &header[0..4] != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let dim = u32::from_le_bytes(header[4..8].try_into().unwrap()) as usize;
    let points = u64::from_le_bytes(header[8..16].try_into().unwrap()) as usize;
    let length = f64::from_le_bytes(header[16..24].try_into().unwrap());
    let grid = GridSpec::new(dim, points, length)?;
    let mut body = vec![0u8; 8 * grid.len()];
    input
        .read_exact(&mut body)
        .map_err(|e| Error::Format(format!("body: {e}")))?;
    let values = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    RealField::new(grid, values)
}

/// CSV with one index column per axis followed by the value.
pub fn write_csv<W: Write>(field: &RealField, mut out: W) -> io::Result<()> {
    let grid = field.grid();
    let names = ["i", "j", "k"];
    writeln!(out, "{},value", names[..grid.dim()].join(","))?;
    for (flat, v) in field.values().iter().enumerate() {
        let idx = grid.unravel(flat);
        for i in &idx[..grid.dim()] {
            write!(out, "{i},")?;
        }
        writeln!(out, "{}", fmt_f64(*v))?;
    }
    Ok(())
}

/// 17 significant digits: enough to round-trip any f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}
