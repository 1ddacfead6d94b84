//! Exact LRU reuse distances over access traces.
//!
//! The reuse distance of an access is the number of *distinct* elements
//! accessed since the previous access to the same element — 0 for an
//! immediate re-access, cold (`None`) for a first access. Cold accesses are
//! excluded from quantiles, means and windowed means; they surface separately
//! as compulsory misses in the cache model.
//!
//! [`reuse_distances`] runs in `O(N log M)` (`N` accesses, `M` distinct
//! elements): a Fenwick tree over last-access timestamps counts the distinct
//! elements in the window since the previous access, and the timestamp space
//! is compacted whenever it fills so the tree never grows beyond a small
//! multiple of `M`. [`reuse_distances_oracle`] recomputes the same contract
//! by direct set-counting between occurrences and exists as an independent
//! cross-check.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Per-access reuse distances plus the summary data the analyses need.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReuseProfile {
    /// One entry per access; `None` marks a cold (first) access.
    pub distances: Vec<Option<u64>>,
    pub n_accesses: usize,
    /// Number of cold accesses == number of distinct elements in the trace.
    pub n_cold: usize,
    /// All finite distances, ascending.
    pub finite_sorted: Vec<u64>,
}

impl ReuseProfile {
    fn from_distances(distances: Vec<Option<u64>>) -> Self {
        let n_accesses = distances.len();
        let mut finite_sorted: Vec<u64> = distances.iter().filter_map(|d| *d).collect();
        finite_sorted.sort_unstable();
        let n_cold = n_accesses - finite_sorted.len();
        ReuseProfile {
            distances,
            n_accesses,
            n_cold,
            finite_sorted,
        }
    }

    pub fn finite_count(&self) -> usize {
        self.finite_sorted.len()
    }

    /// Smallest finite distance `v` such that at least a proportion `q` of
    /// the finite population is `<= v`; `q = 1.0` returns the maximum.
    pub fn quantile(&self, q: f64) -> Result<u64> {
        if !(q > 0.0 && q <= 1.0) {
            return Err(Error::Domain(format!("quantile level must lie in (0, 1], got {q}")));
        }
        if self.finite_sorted.is_empty() {
            return Err(Error::Domain(
                "profile has no finite distances; quantile undefined".into(),
            ));
        }
        let n = self.finite_sorted.len();
        let rank = (q * n as f64).ceil() as usize;
        Ok(self.finite_sorted[rank.clamp(1, n) - 1])
    }

    pub fn max_distance(&self) -> Result<u64> {
        self.finite_sorted.last().copied().ok_or_else(|| {
            Error::Domain("profile has no finite distances; maximum undefined".into())
        })
    }

    /// Arithmetic mean of the finite distances.
    pub fn mean_distance(&self) -> Result<f64> {
        if self.finite_sorted.is_empty() {
            return Err(Error::Domain(
                "profile has no finite distances; mean undefined".into(),
            ));
        }
        let sum: u128 = self.finite_sorted.iter().map(|&d| d as u128).sum();
        Ok(sum as f64 / self.finite_sorted.len() as f64)
    }

    /// Splits the trace into `window_count` contiguous windows (the last
    /// window absorbs the remainder) and reports the mean finite distance per
    /// window, 0.0 for windows with no finite access.
    pub fn windowed_means(&self, window_count: usize) -> Result<Vec<f64>> {
        windowed_means(&self.distances, window_count)
    }

    /// CSV export `position,distance`; cold accesses encode as `-1`.
    pub fn write_csv<W: Write>(&self, mut writer: W) -> std::io::Result<()> {
        writeln!(writer, "position,distance")?;
        for (position, d) in self.distances.iter().enumerate() {
            match d {
                Some(d) => writeln!(writer, "{position},{d}")?,
                None => writeln!(writer, "{position},-1")?,
            }
        }
        Ok(())
    }
}

/// Windowed means over any distance slice: `window_count` contiguous windows
/// (the last absorbs the remainder), each reporting the mean of its finite
/// distances, 0.0 when a window holds none.
pub fn windowed_means(distances: &[Option<u64>], window_count: usize) -> Result<Vec<f64>> {
    if window_count == 0 {
        return Err(Error::Domain("window count must be positive".into()));
    }
    let n = distances.len();
    if n < window_count {
        return Err(Error::Domain(format!(
            "trace has {n} accesses, fewer than {window_count} windows"
        )));
    }
    let base = n / window_count;
    let mut out = Vec::with_capacity(window_count);
    for w in 0..window_count {
        let start = w * base;
        let end = if w + 1 == window_count { n } else { start + base };
        let mut sum = 0u128;
        let mut count = 0usize;
        for d in distances[start..end].iter().flatten() {
            sum += *d as u128;
            count += 1;
        }
        out.push(if count == 0 { 0.0 } else { sum as f64 / count as f64 });
    }
    Ok(out)
}

/// Fenwick tree over timestamp slots; 1 marks "this slot is currently the
/// last access of some element".
struct Fenwick {
    tree: Vec<i64>,
}

impl Fenwick {
    fn new(slots: usize) -> Self {
        Fenwick {
            tree: vec![0; slots + 1],
        }
    }

    fn add(&mut self, slot: usize, delta: i64) {
        let mut i = slot + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    /// Sum of marks in slots `0..=slot`.
    fn prefix(&self, slot: usize) -> i64 {
        let mut i = slot + 1;
        let mut sum = 0;
        while i > 0 {
            sum += self.tree[i];
            i -= i & i.wrapping_neg();
        }
        sum
    }
}

const INITIAL_SLOTS: usize = 1024;

/// Exact reuse distances for a trace.
pub fn reuse_distances(trace: &[u64]) -> ReuseProfile {
    let mut capacity = INITIAL_SLOTS.min(trace.len().max(1));
    let mut fenwick = Fenwick::new(capacity);
    let mut slot_elem: Vec<u64> = vec![0; capacity];
    let mut last_slot: HashMap<u64, usize> = HashMap::new();
    let mut time = 0usize;
    let mut distances = Vec::with_capacity(trace.len());

    for &element in trace {
        if time == capacity {
            // Compact: keep only the live slots (one per distinct element),
            // renumbered in order, and size the new tree so at least as many
            // accesses again fit before the next compaction.
            let live = last_slot.len();
            let new_capacity = 2 * live + INITIAL_SLOTS;
            let mut new_fenwick = Fenwick::new(new_capacity);
            let mut new_slots: Vec<u64> = vec![0; new_capacity];
            let mut next = 0usize;
            for (old_slot, &e) in slot_elem[..time].iter().enumerate() {
                if last_slot.get(&e) == Some(&old_slot) {
                    new_slots[next] = e;
                    new_fenwick.add(next, 1);
                    last_slot.insert(e, next);
                    next += 1;
                }
            }
            debug_assert_eq!(next, live);
            capacity = new_capacity;
            fenwick = new_fenwick;
            slot_elem = new_slots;
            time = live;
        }

        let distance = match last_slot.get(&element).copied() {
            Some(previous) => {
                // marks strictly after `previous` = distinct elements touched
                // since the last access of `element`
                let distinct = last_slot.len() as i64 - fenwick.prefix(previous);
                fenwick.add(previous, -1);
                Some(distinct as u64)
            }
            None => None,
        };
        fenwick.add(time, 1);
        slot_elem[time] = element;
        last_slot.insert(element, time);
        distances.push(distance);
        time += 1;
    }

    ReuseProfile::from_distances(distances)
}

/// Brute-force reuse distances: for each access, scan backwards to the
/// previous occurrence collecting the distinct elements in between. Quadratic
/// in the worst case; intended for traces up to ~10^5 accesses.
pub fn reuse_distances_oracle(trace: &[u64]) -> ReuseProfile {
    use std::collections::HashSet;

    let mut distances = Vec::with_capacity(trace.len());
    for (i, &element) in trace.iter().enumerate() {
        let mut between: HashSet<u64> = HashSet::new();
        let mut found = None;
        for j in (0..i).rev() {
            if trace[j] == element {
                found = Some(between.len() as u64);
                break;
            }
            between.insert(trace[j]);
        }
        distances.push(found);
    }
    ReuseProfile::from_distances(distances)
}

/// Writes a trace as one decimal identifier per line.
pub fn write_trace<W: Write>(trace: &[u64], mut writer: W) -> std::io::Result<()> {
    for id in trace {
        writeln!(writer, "{id}")?;
    }
    Ok(())
}

/// Reads a trace written by [`write_trace`]. Blank lines are skipped.
pub fn read_trace<R: BufRead>(reader: R) -> Result<Vec<u64>> {
    let mut trace = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let id: u64 = trimmed
            .parse()
            .map_err(|_| Error::parse(i + 1, format!("invalid identifier: {trimmed:?}")))?;
        trace.push(id);
    }
    Ok(trace)
}
