//! Decision and delivery traces, and their CSV form.
//!
//! ```text
//! phase,seq,frame,j,actor,action,case,block
//! 0,0,1,1,GR1,accept,,1
//! 0,0,1,1,MF,accept,1.2.1,1
//! 0,D,1,1,MF,transmit,,1
//! ```
//!
//! `seq` is the decision number inside the arrival subphase, or `D` for the
//! delivery subphase. `case` and `block` are empty when not applicable.

use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{EventTime, PacketId, Slot};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Actor {
    Mf,
    Gr1,
    Sp,
    Greedy,
    Other(String),
}

impl Actor {
    pub fn as_str(&self) -> &str {
        match self {
            Actor::Mf => "MF",
            Actor::Gr1 => "GR1",
            Actor::Sp => "SP",
            Actor::Greedy => "GREEDY",
            Actor::Other(s) => s,
        }
    }
}

impl fmt::Display for Actor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl From<&str> for Actor {
    fn from(s: &str) -> Self {
        match s {
            "MF" => Actor::Mf,
            "GR1" => Actor::Gr1,
            "SP" => Actor::Sp,
            "GREEDY" => Actor::Greedy,
            other => Actor::Other(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Action {
    Accept,
    Reject,
    Preempt,
    Flush,
    Transmit,
}

impl Action {
    pub fn as_str(self) -> &'static str {
        match self {
            Action::Accept => "accept",
            Action::Reject => "reject",
            Action::Preempt => "preempt",
            Action::Flush => "flush",
            Action::Transmit => "transmit",
        }
    }

    /// Whether the packet leaves (or never enters) the buffer without being sent.
    pub fn is_drop(self) -> bool {
        matches!(self, Action::Reject | Action::Preempt | Action::Flush)
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Action {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "accept" => Action::Accept,
            "reject" => Action::Reject,
            "preempt" => Action::Preempt,
            "flush" => Action::Flush,
            "transmit" => Action::Transmit,
            other => return Err(format!("unknown action `{other}`")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TraceEvent {
    pub time: EventTime,
    pub packet: PacketId,
    pub actor: Actor,
    pub action: Action,
    pub case_label: String,
    pub block: Option<u32>,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {} {} {}", self.time, self.actor, self.action, self.packet)?;
        if !self.case_label.is_empty() {
            write!(f, " case {}", self.case_label)?;
        }
        if let Some(b) = self.block {
            write!(f, " block {b}")?;
        }
        Ok(())
    }
}

const HEADER: [&str; 8] = ["phase", "seq", "frame", "j", "actor", "action", "case", "block"];

pub fn write_trace_csv(trace: &[TraceEvent], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_trace_csv_to(trace, file)
}

pub fn write_trace_csv_to<W: Write>(trace: &[TraceEvent], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(HEADER)?;
    for ev in trace {
        let seq = match ev.time.slot {
            Slot::Decision(s) => s.to_string(),
            Slot::Delivery => "D".to_string(),
        };
        out.write_record([
            ev.time.phase.to_string(),
            seq,
            ev.packet.frame.to_string(),
            ev.packet.j.to_string(),
            ev.actor.to_string(),
            ev.action.to_string(),
            ev.case_label.clone(),
            ev.block.map(|b| b.to_string()).unwrap_or_default(),
        ])?;
    }
    out.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn read_trace_csv(path: impl AsRef<Path>) -> Result<Vec<TraceEvent>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_trace_csv_from(file, path)
}

pub fn read_trace_csv_from<R: Read>(r: R, origin: impl AsRef<Path>) -> Result<Vec<TraceEvent>> {
    let origin = origin.as_ref();
    let mut rdr = csv::Reader::from_reader(r);
    let mut out = Vec::new();
    for (idx, rec) in rdr.records().enumerate() {
        // header is line 1
        let line = idx + 2;
        let rec = rec?;
        let bad = |message: String| Error::Parse {
            path: origin.to_path_buf(),
            line,
            message,
        };
        if rec.len() != HEADER.len() {
            return Err(bad(format!("expected {} fields, got {}", HEADER.len(), rec.len())));
        }
        let num = |i: usize| -> Result<u32> {
            rec[i]
                .parse::<u32>()
                .map_err(|e| bad(format!("field `{}`: {e}", HEADER[i])))
        };
        let phase = num(0)?;
        let time = if &rec[1] == "D" {
            EventTime::delivery(phase)
        } else {
            EventTime::decision(phase, num(1)?)
        };
        let block = if rec[7].is_empty() { None } else { Some(num(7)?) };
        out.push(TraceEvent {
            time,
            packet: PacketId::new(num(2)?, num(3)?),
            actor: Actor::from(&rec[4]),
            action: rec[5].parse().map_err(bad)?,
            case_label: rec[6].to_string(),
            block,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout_is_fixed() {
        let trace = vec![
            TraceEvent {
                time: EventTime::decision(120, 3),
                packet: PacketId::new(85, 2),
                actor: Actor::Mf,
                action: Action::Accept,
                case_label: "2.2.2".into(),
                block: Some(3),
            },
            TraceEvent {
                time: EventTime::delivery(120),
                packet: PacketId::new(49, 2),
                actor: Actor::Sp,
                action: Action::Transmit,
                case_label: String::new(),
                block: None,
            },
        ];
        let mut buf = Vec::new();
        write_trace_csv_to(&trace, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "phase,seq,frame,j,actor,action,case,block\n\
             120,3,85,2,MF,accept,2.2.2,3\n\
             120,D,49,2,SP,transmit,,\n"
        );
        assert_eq!(read_trace_csv_from(text.as_bytes(), "mem").unwrap(), trace);
    }

    #[test]
    fn bad_rows_report_line() {
        let text = "phase,seq,frame,j,actor,action,case,block\n0,0,1,1,MF,explode,,\n";
        match read_trace_csv_from(text.as_bytes(), "mem") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }
}
