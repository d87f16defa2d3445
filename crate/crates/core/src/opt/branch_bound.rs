use super::{result_for, CompactInstance, FrameSubset, OptResult};
use crate::error::{Error, Result};
use crate::model::Instance;

#[derive(Debug, Clone, Copy, Default)]
pub struct BranchBoundConfig {
    /// Abort with [`Error::NodeBudget`] after this many search nodes.
    pub max_nodes: Option<u64>,
}

/// Exact optimum by depth-first branch and bound.
///
/// Frames are branched on in order of first arrival, include-branch first.
/// A node is pruned when the chosen frames overflow the buffer (feasible
/// subsets are downward closed) or when its bound cannot beat the incumbent.
/// The bound assigns each remaining frame to one of its arrival phases and
/// counts how many assigned frames could still fit into the free space the
/// current choice leaves at that phase.
pub fn opt_branch_bound(instance: &Instance, b: usize) -> Result<OptResult> {
    opt_branch_bound_with(instance, b, BranchBoundConfig::default())
}

pub fn opt_branch_bound_with(instance: &Instance, b: usize, config: BranchBoundConfig) -> Result<OptResult> {
    let compact = CompactInstance::new(instance, b);
    let n_phases = compact.n_phases();

    // frames that cannot be accepted even alone never help
    let mut scratch = vec![0usize; n_phases];
    let mut order: Vec<usize> = (0..compact.frames.len())
        .filter(|&f| {
            let mut load = vec![0usize; n_phases];
            for &(e, c) in &compact.frames[f] {
                load[e] += c;
            }
            compact.occupancy(&load, &mut scratch)
        })
        .collect();
    order.sort_by_key(|&f| (compact.frames[f][0].0, f));

    let max_c = compact
        .frames
        .iter()
        .flat_map(|fr| fr.iter().map(|&(_, c)| c))
        .max()
        .unwrap_or(1);

    let mut search = Search {
        compact: &compact,
        order,
        load: vec![0; n_phases],
        occ: vec![0; n_phases],
        chosen: Vec::new(),
        best: Vec::new(),
        nodes: 0,
        max_nodes: config.max_nodes,
        max_c,
        buckets: vec![0; n_phases * (max_c + 1)],
        touched: Vec::new(),
    };
    search.greedy_incumbent();
    search.descend(0)?;

    let witness: FrameSubset = search.best.iter().map(|&f| f as u32 + 1).collect();
    Ok(result_for(instance, witness, b))
}

struct Search<'a> {
    compact: &'a CompactInstance,
    order: Vec<usize>,
    load: Vec<usize>,
    occ: Vec<usize>,
    chosen: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    max_nodes: Option<u64>,
    max_c: usize,
    // buckets[e * (max_c + 1) + c]: remaining frames assigned to phase e with c packets there
    buckets: Vec<usize>,
    touched: Vec<usize>,
}

impl Search<'_> {
    fn add(&mut self, f: usize) {
        for &(e, c) in &self.compact.frames[f] {
            self.load[e] += c;
        }
    }

    fn remove(&mut self, f: usize) {
        for &(e, c) in &self.compact.frames[f] {
            self.load[e] -= c;
        }
    }

    fn refresh(&mut self) -> bool {
        self.compact.occupancy(&self.load, &mut self.occ)
    }

    fn greedy_incumbent(&mut self) {
        for i in 0..self.order.len() {
            let f = self.order[i];
            self.add(f);
            if self.refresh() {
                self.chosen.push(f);
            } else {
                self.remove(f);
            }
        }
        self.best = self.chosen.clone();
        for f in std::mem::take(&mut self.chosen) {
            self.remove(f);
        }
        self.refresh();
    }

    /// Upper bound on how many of `order[from..]` can join the current choice.
    fn remaining_bound(&mut self, from: usize) -> usize {
        let b = self.compact.b;
        let width = self.max_c + 1;
        for &f in &self.order[from..] {
            let mut pick: Option<(usize, usize, usize)> = None;
            let mut fits = true;
            for &(e, c) in &self.compact.frames[f] {
                let cap = b - self.occ[e].min(b);
                if c > cap {
                    fits = false;
                    break;
                }
                let slots = cap / c;
                if pick.is_none_or(|(s, _, _)| slots < s) {
                    pick = Some((slots, e, c));
                }
            }
            if !fits {
                continue;
            }
            let (_, e, c) = pick.expect("frames have packets");
            let idx = e * width + c;
            if self.buckets[idx] == 0 {
                self.touched.push(idx);
            }
            self.buckets[idx] += 1;
        }

        self.touched.sort_unstable();
        let mut bound = 0;
        let mut i = 0;
        while i < self.touched.len() {
            let e = self.touched[i] / width;
            let mut cap = b - self.occ[e].min(b);
            // smallest packet counts first maximizes how many frames fit
            while i < self.touched.len() && self.touched[i] / width == e {
                let idx = self.touched[i];
                let c = idx % width;
                let take = self.buckets[idx].min(cap / c);
                bound += take;
                cap -= take * c;
                self.buckets[idx] = 0;
                i += 1;
            }
        }
        self.touched.clear();
        bound
    }

    fn descend(&mut self, i: usize) -> Result<()> {
        self.nodes += 1;
        if let Some(max) = self.max_nodes {
            if self.nodes > max {
                return Err(Error::NodeBudget(max));
            }
        }
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        if i == self.order.len() {
            return Ok(());
        }
        if self.chosen.len() + self.remaining_bound(i) <= self.best.len() {
            return Ok(());
        }
        let f = self.order[i];
        self.add(f);
        if self.refresh() {
            self.chosen.push(f);
            self.descend(i + 1)?;
            self.chosen.pop();
        }
        self.remove(f);
        self.refresh();
        self.descend(i + 1)
    }
}
