//! Model file: `C2GM`, a little-endian `u32` header length, a JSON header, then every
//! parameter as a little-endian `f32` (per layer: weights row-major `fan_in × fan_out`,
//! then biases).

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{C2gModel, Mlp};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &[u8; 4] = b"C2GM";

#[derive(Debug, Serialize, Deserialize)]
struct Header {
    format_version: u32,
    /// Layer widths, input first.
    shapes: Vec<usize>,
    n_params: usize,
    workspace_id: String,
    rho: f64,
    extent: f64,
}

pub fn write_model<T: Scalar, W: Write>(m: &C2gModel<T>, mut out: W) -> Result<()> {
    let header = Header {
        format_version: FORMAT_VERSION,
        shapes: m.mlp.sizes(),
        n_params: m.mlp.n_params(),
        workspace_id: m.workspace_id.clone(),
        rho: m.rho.as_f64(),
        extent: m.extent.as_f64(),
    };
    let json = serde_json::to_vec(&header)?;
    out.write_all(MAGIC)?;
    out.write_all(&(json.len() as u32).to_le_bytes())?;
    out.write_all(&json)?;
    for v in m.mlp.flat_params() {
        out.write_all(&v.cast::<f32>().to_le_bytes())?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_model<T: Scalar, R: Read>(mut inp: R) -> Result<C2gModel<T>> {
    let bad = |m: String| Error::ModelFormat(m);
    let mut magic = [0u8; 4];
    inp.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(bad("missing magic bytes".into()));
    }
    let mut len = [0u8; 4];
    inp.read_exact(&mut len)?;
    let len = u32::from_le_bytes(len) as usize;
    if len > 1 << 20 {
        return Err(bad(format!("header length {len} is implausible")));
    }
    let mut json = vec![0u8; len];
    inp.read_exact(&mut json)?;
    let header: Header = serde_json::from_slice(&json).map_err(|e| bad(format!("header: {e}")))?;
    if header.format_version != FORMAT_VERSION {
        return Err(bad(format!("format version {}", header.format_version)));
    }
    if header.shapes.len() < 2 || header.shapes[0] != 8 || *header.shapes.last().unwrap() != 1 {
        return Err(bad(format!("shapes {:?}", header.shapes)));
    }
    let expected: usize = header.shapes.windows(2).map(|s| s[0] * s[1] + s[1]).sum();
    if expected != header.n_params {
        return Err(bad(format!(
            "shapes {:?} imply {expected} parameters, header says {}",
            header.shapes, header.n_params
        )));
    }
    let mut raw = Vec::with_capacity(expected * 4);
    inp.read_to_end(&mut raw)?;
    if raw.len() != expected * 4 {
        return Err(bad(format!("parameter block holds {} bytes, expected {}", raw.len(), expected * 4)));
    }
    let flat: Vec<T> = raw
        .chunks_exact(4)
        .map(|c| T::of(f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64))
        .collect();
    if flat.iter().any(|v| !v.is_finite()) {
        return Err(bad("non-finite parameter".into()));
    }
    let mlp = Mlp::from_flat(&header.shapes, &flat).ok_or_else(|| bad("parameter block does not fit shapes".into()))?;
    Ok(C2gModel {
        mlp,
        workspace_id: header.workspace_id,
        rho: T::of(header.rho),
        extent: T::of(header.extent),
    })
}

pub fn save_model<T: Scalar>(m: &C2gModel<T>, path: impl AsRef<Path>) -> Result<()> {
    write_model(m, BufWriter::new(File::create(path)?))
}

pub fn load_model<T: Scalar>(path: impl AsRef<Path>) -> Result<C2gModel<T>> {
    read_model(BufReader::new(File::open(path)?))
}
