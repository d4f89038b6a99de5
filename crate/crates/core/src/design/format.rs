//! Plain-text block lists and JSON design certificates.
//!
//! A block list starts with `D t v k b`, followed by one line per block
//! (repeated blocks repeated) giving its points in ascending order,
//! blocks in lexicographic order.

use std::io::{BufRead, Write};

use serde::Serialize;

use super::{DesignCertificate, IncidenceStructure};
use crate::error::{Error, Result};

/// Writes the block list of `d`, declared as a t-design.
pub fn write_block_list<W: Write>(d: &IncidenceStructure, t: usize, mut out: W) -> Result<()> {
    let k = match d.k() {
        Some(k) => k,
        None if d.distinct_blocks() == 0 => 0,
        None => return Err(Error::invalid("block list needs blocks of uniform size")),
    };
    writeln!(out, "D {t} {} {k} {}", d.v(), d.b())?;
    for i in 0..d.distinct_blocks() {
        let line = d
            .block(i)
            .points()
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(" ");
        for _ in 0..d.multiplicity(i) {
            writeln!(out, "{line}")?;
        }
    }
    Ok(())
}

/// Reads a block list, returning the declared t and the structure.
pub fn read_block_list<R: BufRead>(input: R) -> Result<(usize, IncidenceStructure)> {
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| Error::parse(1, "empty block list"))??;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 5 || fields[0] != "D" {
        return Err(Error::parse(1, format!("expected header `D t v k b`, got {header:?}")));
    }
    let num = |s: &str| s.parse::<usize>().map_err(|_| Error::parse(1, format!("bad header field {s:?}")));
    let (t, v, k, b) = (num(fields[1])?, num(fields[2])?, num(fields[3])?, num(fields[4])?);
    let mut blocks = Vec::with_capacity(b);
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let lineno = i + 2;
        let pts = line
            .split_whitespace()
            .map(|s| s.parse::<usize>().map_err(|_| Error::parse(lineno, format!("bad point {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if pts.len() != k {
            return Err(Error::parse(lineno, format!("block has {} points, header says {k}", pts.len())));
        }
        if pts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::parse(lineno, "points must be strictly ascending"));
        }
        blocks.push(pts);
    }
    if blocks.len() != b {
        return Err(Error::parse(blocks.len() + 1, format!("found {} blocks, header says {b}", blocks.len())));
    }
    Ok((t, IncidenceStructure::from_blocks(v, blocks)?))
}

#[derive(Serialize)]
struct CertificateJson {
    t: usize,
    v: usize,
    k: usize,
    lambda: u64,
    b: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    rank3: Option<usize>,
}

/// `{"t":..,"v":..,"k":..,"lambda":..,"b":..}` plus `"rank3"` when known.
pub fn write_certificate_json(cert: &DesignCertificate, rank3: Option<usize>) -> String {
    serde_json::to_string(&CertificateJson {
        t: cert.t,
        v: cert.v,
        k: cert.k,
        lambda: cert.lambda,
        b: cert.b,
        rank3,
    })
    .expect("certificates always serialise")
}
