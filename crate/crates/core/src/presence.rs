//! Compressed per-edge presence over the step axis.
//!
//! Lifetimes are at least quadratic in the vertex count, so patterns are
//! stored in whichever of four forms is compact for the generator that
//! produced them. Every form answers membership, next-presence and
//! next-toggle queries without expanding to a per-step table.

/// A set of steps stored as a bitset.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StepSet {
    words: Vec<u64>,
    count: usize,
}

impl StepSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(steps: usize) -> Self {
        Self {
            words: Vec::with_capacity(steps.div_ceil(64)),
            count: 0,
        }
    }

    pub fn insert(&mut self, step: usize) -> bool {
        let (w, b) = (step / 64, step % 64);
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        let mask = 1u64 << b;
        if self.words[w] & mask != 0 {
            return false;
        }
        self.words[w] |= mask;
        self.count += 1;
        true
    }

    pub fn contains(&self, step: usize) -> bool {
        self.words
            .get(step / 64)
            .is_some_and(|w| w & (1u64 << (step % 64)) != 0)
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn max(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    /// Smallest member `>= step`.
    pub fn next_member(&self, step: usize) -> Option<usize> {
        let mut w = step / 64;
        if w >= self.words.len() {
            return None;
        }
        let mut word = self.words[w] & (!0u64 << (step % 64));
        loop {
            if word != 0 {
                return Some(w * 64 + word.trailing_zeros() as usize);
            }
            w += 1;
            if w >= self.words.len() {
                return None;
            }
            word = self.words[w];
        }
    }

    /// Smallest non-member `>= step` (always exists).
    pub fn next_gap(&self, step: usize) -> usize {
        let mut w = step / 64;
        if w >= self.words.len() {
            return step;
        }
        let mut word = !self.words[w] & (!0u64 << (step % 64));
        loop {
            if word != 0 {
                return w * 64 + word.trailing_zeros() as usize;
            }
            w += 1;
            if w >= self.words.len() {
                return w * 64;
            }
            word = !self.words[w];
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut word = w;
            std::iter::from_fn(move || {
                if word == 0 {
                    return None;
                }
                let b = word.trailing_zeros() as usize;
                word &= word - 1;
                Some(i * 64 + b)
            })
        })
    }
}

impl FromIterator<usize> for StepSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = StepSet::new();
        for t in iter {
            s.insert(t);
        }
        s
    }
}

/// When an edge is present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PresencePattern {
    Always,
    Steps(StepSet),
    /// Sorted, disjoint, inclusive `[a, b]` ranges.
    Intervals(Vec<(usize, usize)>),
    /// Present when `(t - offset) mod (present + absent) < present`, extended
    /// to all `t >= 0` by taking the residue.
    Periodic {
        offset: usize,
        present: usize,
        absent: usize,
    },
}

impl PresencePattern {
    pub fn never() -> Self {
        PresencePattern::Steps(StepSet::new())
    }

    pub fn steps<I: IntoIterator<Item = usize>>(steps: I) -> Self {
        PresencePattern::Steps(steps.into_iter().collect())
    }

    /// Checks internal consistency against a lifetime.
    pub fn check(&self, lifetime: usize) -> Result<(), String> {
        match self {
            PresencePattern::Always => Ok(()),
            PresencePattern::Steps(s) => match s.max() {
                Some(m) if m > lifetime => Err(format!("step {m} beyond lifetime {lifetime}")),
                _ => Ok(()),
            },
            PresencePattern::Intervals(iv) => {
                let mut prev_end: Option<usize> = None;
                for &(a, b) in iv {
                    if a > b {
                        return Err(format!("interval [{a}, {b}] is reversed"));
                    }
                    if b > lifetime {
                        return Err(format!("interval [{a}, {b}] beyond lifetime {lifetime}"));
                    }
                    if let Some(p) = prev_end {
                        if a <= p {
                            return Err(format!("interval [{a}, {b}] overlaps or is unsorted"));
                        }
                    }
                    prev_end = Some(b);
                }
                Ok(())
            }
            PresencePattern::Periodic { present, .. } => {
                if *present == 0 {
                    Err("periodic present run must be at least 1".into())
                } else {
                    Ok(())
                }
            }
        }
    }

    fn phase(offset: usize, period: usize, t: usize) -> usize {
        (t % period + period - offset % period) % period
    }

    pub fn contains(&self, t: usize) -> bool {
        match self {
            PresencePattern::Always => true,
            PresencePattern::Steps(s) => s.contains(t),
            PresencePattern::Intervals(iv) => {
                let i = iv.partition_point(|&(a, _)| a <= t);
                i > 0 && iv[i - 1].1 >= t
            }
            PresencePattern::Periodic {
                offset,
                present,
                absent,
            } => {
                let period = present + absent;
                Self::phase(*offset, period, t) < *present
            }
        }
    }

    /// First step `>= t` (and `<= lifetime`) at which the edge is present.
    pub fn next_present(&self, t: usize, lifetime: usize) -> Option<usize> {
        if t > lifetime {
            return None;
        }
        let found = match self {
            PresencePattern::Always => Some(t),
            PresencePattern::Steps(s) => s.next_member(t),
            PresencePattern::Intervals(iv) => {
                let i = iv.partition_point(|&(_, b)| b < t);
                iv.get(i).map(|&(a, _)| a.max(t))
            }
            PresencePattern::Periodic {
                offset,
                present,
                absent,
            } => {
                let period = present + absent;
                let ph = Self::phase(*offset, period, t);
                Some(if ph < *present { t } else { t + (period - ph) })
            }
        };
        found.filter(|&s| s <= lifetime)
    }

    /// Smallest `t' > t` whose membership differs from that of `t' - 1`.
    pub fn next_toggle(&self, t: usize) -> Option<usize> {
        match self {
            PresencePattern::Always => None,
            PresencePattern::Steps(s) => {
                let from = t + 1;
                if s.contains(t) {
                    Some(s.next_gap(from))
                } else {
                    s.next_member(from)
                }
            }
            PresencePattern::Intervals(iv) => {
                // Toggle points are every `a` and every `b + 1`.
                let from = t + 1;
                let i = iv.partition_point(|&(_, b)| b + 1 < from);
                let (a, b) = *iv.get(i)?;
                Some(if a >= from { a } else { b + 1 })
            }
            PresencePattern::Periodic {
                offset,
                present,
                absent,
            } => {
                if *absent == 0 {
                    return None;
                }
                let period = present + absent;
                let ph = Self::phase(*offset, period, t);
                Some(if ph < *present {
                    t + (present - ph)
                } else {
                    t + (period - ph)
                })
            }
        }
    }

    /// For explicit patterns, the first step after which membership never
    /// changes again. `None` for patterns with no explicit tail.
    pub fn settle_point(&self) -> Option<usize> {
        match self {
            PresencePattern::Steps(s) => Some(s.max().map_or(0, |m| m + 1)),
            PresencePattern::Intervals(iv) => Some(iv.last().map_or(0, |&(_, b)| b + 1)),
            _ => None,
        }
    }

    /// Period of the eventual behaviour (1 for patterns that settle).
    pub fn period(&self) -> usize {
        match self {
            PresencePattern::Periodic {
                present, absent, ..
            } if *absent > 0 => present + absent,
            _ => 1,
        }
    }

    /// Pattern present whenever either input is present, restricted to
    /// `[0, lifetime]`.
    pub fn union(&self, other: &PresencePattern, lifetime: usize) -> PresencePattern {
        if matches!(self, PresencePattern::Always) || matches!(other, PresencePattern::Always) {
            return PresencePattern::Always;
        }
        if self == other {
            return self.clone();
        }
        let mut out: Vec<(usize, usize)> = Vec::new();
        let mut t = 0;
        loop {
            let a = self.next_present(t, lifetime);
            let b = other.next_present(t, lifetime);
            let start = match (a, b) {
                (None, None) => break,
                (Some(x), None) | (None, Some(x)) => x,
                (Some(x), Some(y)) => x.min(y),
            };
            // Extend while either is present.
            let mut end = start;
            loop {
                let ea = if self.contains(end) {
                    self.next_toggle(end).map_or(lifetime, |x| x - 1)
                } else {
                    end
                };
                let eb = if other.contains(end) {
                    other.next_toggle(end).map_or(lifetime, |x| x - 1)
                } else {
                    end
                };
                let next = ea.max(eb).min(lifetime);
                if next == end {
                    break;
                }
                end = next;
            }
            match out.last_mut() {
                Some(last) if last.1 + 1 == start => last.1 = end,
                _ => out.push((start, end)),
            }
            if end >= lifetime {
                break;
            }
            t = end + 1;
        }
        PresencePattern::Intervals(out)
    }

    /// Maximal absence runs inside `[0, lifetime]` as `(start, length)`.
    /// A run starting at 0 or ending at `lifetime` may be truncated.
    pub fn absence_runs(&self, lifetime: usize) -> Vec<(usize, usize)> {
        let mut runs = Vec::new();
        let mut t = 0;
        while t <= lifetime {
            if self.contains(t) {
                match self.next_toggle(t) {
                    Some(x) => t = x,
                    None => break,
                }
            } else {
                let end = self
                    .next_present(t, lifetime)
                    .unwrap_or(lifetime + 1);
                runs.push((t, end - t));
                t = end;
            }
        }
        runs
    }
}
