//! JSON Lines instance files.
//!
//! ```text
//! {"k":3,"frames":2,"name":"demo","meta":{}}
//! {"phase":0,"arrivals":[{"frame":1,"j":1},{"frame":2,"j":1}]}
//! {"phase":4,"arrivals":[{"frame":1,"j":2},{"frame":2,"j":2}]}
//! ```
//!
//! Phases without arrivals may be omitted; phase records must appear in
//! strictly increasing phase order. Arrival order inside a record is kept.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::{Instance, PacketId};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    k: u32,
    frames: u32,
    #[serde(default)]
    name: String,
    #[serde(default)]
    meta: Map<String, Value>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PhaseRecord {
    phase: u32,
    arrivals: Vec<PacketId>,
}

pub fn write_instance(instance: &Instance, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_instance_to(instance, &mut w).map_err(|e| match e {
        Error::Json(j) if j.is_io() => Error::io(path, j.into()),
        other => other,
    })?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_instance_to<W: Write>(instance: &Instance, mut w: W) -> Result<()> {
    let header = Header {
        k: instance.k(),
        frames: instance.n_frames(),
        name: instance.name().to_string(),
        meta: instance.meta().clone(),
    };
    serde_json::to_writer(&mut w, &header)?;
    writeln!(w).map_err(serde_json::Error::io)?;
    for (t, arrivals) in instance.phases().iter().enumerate() {
        if arrivals.is_empty() {
            continue;
        }
        let rec = PhaseRecord {
            phase: t as u32,
            arrivals: arrivals.clone(),
        };
        serde_json::to_writer(&mut w, &rec)?;
        writeln!(w).map_err(serde_json::Error::io)?;
    }
    Ok(())
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_instance_from(BufReader::new(file), path)
}

/// Parses an instance; `origin` is only used in error messages.
pub fn read_instance_from<R: BufRead>(reader: R, origin: impl AsRef<Path>) -> Result<Instance> {
    let origin = origin.as_ref();
    let parse_err = |line: usize, message: String| Error::Parse {
        path: origin.to_path_buf(),
        line,
        message,
    };

    let mut header: Option<(Header, usize)> = None;
    let mut phases: Vec<Vec<PacketId>> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(origin, e))?;
        if line.trim().is_empty() {
            continue;
        }
        if header.is_none() {
            let h: Header =
                serde_json::from_str(&line).map_err(|e| parse_err(lineno, format!("bad header record: {e}")))?;
            header = Some((h, lineno));
            continue;
        }
        let rec: PhaseRecord =
            serde_json::from_str(&line).map_err(|e| parse_err(lineno, format!("bad phase record: {e}")))?;
        let t = rec.phase as usize;
        if t < phases.len() {
            return Err(parse_err(
                lineno,
                format!("phase {} is not after the previous phase record", rec.phase),
            ));
        }
        phases.resize(t, Vec::new());
        phases.push(rec.arrivals);
    }
    let (h, _) = header.ok_or_else(|| parse_err(1, "missing header record".into()))?;
    let inst = Instance::new(h.k, h.frames, phases)?;
    Ok(inst.with_name(h.name).with_meta(h.meta))
}
