use std::fmt;

use serde::Serialize;

use crate::algorithms::{Action, TraceEvent};

/// Which rows take part in a trace comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompareScope {
    /// Everything except transmissions.
    #[default]
    Decisions,
    All,
}

/// One position where the traces disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiffEntry {
    pub index: usize,
    pub expected: Option<TraceEvent>,
    pub actual: Option<TraceEvent>,
}

impl fmt::Display for DiffEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |e: &Option<TraceEvent>| e.as_ref().map_or_else(|| "(none)".to_string(), ToString::to_string);
        write!(
            f,
            "#{}: expected {} | actual {}",
            self.index,
            show(&self.expected),
            show(&self.actual)
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TraceDiff {
    pub compared: usize,
    pub entries: Vec<DiffEntry>,
}

impl TraceDiff {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl fmt::Display for TraceDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "traces match ({} rows)", self.compared);
        }
        writeln!(f, "{} of {} rows differ", self.entries.len(), self.compared)?;
        for e in self.entries.iter().take(20) {
            writeln!(f, "  {e}")?;
        }
        if self.entries.len() > 20 {
            writeln!(f, "  ...")?;
        }
        Ok(())
    }
}

/// Row-by-row comparison of `actual` against `golden` on time, packet,
/// actor, action, case label and block number.
pub fn compare_trace(actual: &[TraceEvent], golden: &[TraceEvent], scope: CompareScope) -> TraceDiff {
    let keep = |e: &&TraceEvent| scope == CompareScope::All || e.action != Action::Transmit;
    let a: Vec<&TraceEvent> = actual.iter().filter(keep).collect();
    let g: Vec<&TraceEvent> = golden.iter().filter(keep).collect();
    let n = a.len().max(g.len());
    let entries = (0..n)
        .filter_map(|i| {
            let (x, y) = (g.get(i).copied(), a.get(i).copied());
            (x != y).then(|| DiffEntry {
                index: i,
                expected: x.cloned(),
                actual: y.cloned(),
            })
        })
        .collect();
    TraceDiff { compared: n, entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::Actor;
    use crate::model::{EventTime, PacketId};

    fn ev(seq: u32, action: Action) -> TraceEvent {
        TraceEvent {
            time: EventTime::decision(0, seq),
            packet: PacketId::new(seq + 1, 1),
            actor: Actor::Mf,
            action,
            case_label: String::new(),
            block: None,
        }
    }

    #[test]
    fn transmissions_ignored_by_default() {
        let mut send = ev(0, Action::Transmit);
        send.time = EventTime::delivery(0);
        let a = vec![ev(0, Action::Accept), send];
        let g = vec![ev(0, Action::Accept)];
        assert!(compare_trace(&a, &g, CompareScope::Decisions).is_empty());
        assert_eq!(compare_trace(&a, &g, CompareScope::All).entries.len(), 1);
    }

    #[test]
    fn reports_mismatch_and_length() {
        let a = vec![ev(0, Action::Accept), ev(1, Action::Reject)];
        let g = vec![ev(0, Action::Reject)];
        let d = compare_trace(&a, &g, CompareScope::Decisions);
        assert_eq!(d.entries.iter().map(|e| e.index).collect::<Vec<_>>(), vec![0, 1]);
        assert!(d.entries[1].expected.is_none());
    }
}
