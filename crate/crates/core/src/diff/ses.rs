//! Shortest edit scripts (Myers' O((N+M)·D) algorithm).
//!
//! [`ses`] uses the linear-space divide-and-conquer refinement: find the
//! middle snake of an optimal path, recurse on both halves. [`ses_traced`]
//! additionally replays the greedy forward search and records the
//! furthest-reaching point of every diagonal per round, for rendering.

use std::ops::{Index, IndexMut};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Edit {
    /// `before[i]` and `after[j]` are equal.
    Keep(usize, usize),
    /// `after[j]` is inserted.
    Insert(usize),
    /// `before[i]` is deleted.
    Delete(usize),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EditScript {
    pub edits: Vec<Edit>,
}

impl EditScript {
    /// Number of inserts plus deletes.
    pub fn distance(&self) -> usize {
        self.edits.iter().filter(|e| !matches!(e, Edit::Keep(..))).count()
    }

    /// Replays the script over `before`, taking inserted elements from
    /// `after`.
    pub fn apply<T: Clone>(&self, before: &[T], after: &[T]) -> Vec<T> {
        self.edits
            .iter()
            .filter_map(|e| match *e {
                Edit::Keep(i, _) => Some(before[i].clone()),
                Edit::Insert(j) => Some(after[j].clone()),
                Edit::Delete(_) => None,
            })
            .collect()
    }
}

/// Diagonal-indexed vector (`k` ranges over negative values too).
struct V {
    offset: isize,
    data: Vec<usize>,
}

impl V {
    fn new(max_d: usize) -> Self {
        Self { offset: max_d as isize + 1, data: vec![0; 2 * max_d + 3] }
    }
}

impl Index<isize> for V {
    type Output = usize;
    fn index(&self, k: isize) -> &usize {
        &self.data[(k + self.offset) as usize]
    }
}

impl IndexMut<isize> for V {
    fn index_mut(&mut self, k: isize) -> &mut usize {
        &mut self.data[(k + self.offset) as usize]
    }
}

fn max_d(n: usize, m: usize) -> usize {
    (n + m).div_ceil(2) + 1
}

/// Minimum-length edit script from `before` to `after` under `eq`. Within a
/// run of changes, deletions precede insertions.
pub fn ses<A, B>(before: &[A], after: &[B], eq: impl Fn(&A, &B) -> bool) -> EditScript {
    let mut out = Vec::with_capacity(before.len().max(after.len()));
    let d = max_d(before.len(), after.len());
    let mut vf = V::new(d);
    let mut vb = V::new(d);
    let mut search = Search { a: before, b: after, eq: &eq, vf: &mut vf, vb: &mut vb };
    search.conquer(0, before.len(), 0, after.len(), &mut out);
    EditScript { edits: out }
}

struct Search<'s, A, B, F> {
    a: &'s [A],
    b: &'s [B],
    eq: &'s F,
    vf: &'s mut V,
    vb: &'s mut V,
}

impl<A, B, F: Fn(&A, &B) -> bool> Search<'_, A, B, F> {
    fn prefix(&self, mut a_lo: usize, a_hi: usize, mut b_lo: usize, b_hi: usize) -> usize {
        let start = a_lo;
        while a_lo < a_hi && b_lo < b_hi && (self.eq)(&self.a[a_lo], &self.b[b_lo]) {
            a_lo += 1;
            b_lo += 1;
        }
        a_lo - start
    }

    fn suffix(&self, a_lo: usize, mut a_hi: usize, b_lo: usize, mut b_hi: usize) -> usize {
        let start = a_hi;
        while a_lo < a_hi && b_lo < b_hi && (self.eq)(&self.a[a_hi - 1], &self.b[b_hi - 1]) {
            a_hi -= 1;
            b_hi -= 1;
        }
        start - a_hi
    }

    fn conquer(&mut self, mut a_lo: usize, mut a_hi: usize, mut b_lo: usize, mut b_hi: usize, out: &mut Vec<Edit>) {
        let p = self.prefix(a_lo, a_hi, b_lo, b_hi);
        out.extend((0..p).map(|i| Edit::Keep(a_lo + i, b_lo + i)));
        a_lo += p;
        b_lo += p;
        let s = self.suffix(a_lo, a_hi, b_lo, b_hi);
        a_hi -= s;
        b_hi -= s;

        if a_lo == a_hi {
            out.extend((b_lo..b_hi).map(Edit::Insert));
        } else if b_lo == b_hi {
            out.extend((a_lo..a_hi).map(Edit::Delete));
        } else {
            let (x, y) = self.middle_snake(a_lo, a_hi, b_lo, b_hi);
            self.conquer(a_lo, x, b_lo, y, out);
            self.conquer(x, a_hi, y, b_hi, out);
        }
        out.extend((0..s).map(|i| Edit::Keep(a_hi + i, b_hi + i)));
    }

    /// A point (x, y) that some optimal path passes through, strictly inside
    /// the box for non-trivial inputs.
    fn middle_snake(&mut self, a_lo: usize, a_hi: usize, b_lo: usize, b_hi: usize) -> (usize, usize) {
        let n = a_hi - a_lo;
        let m = b_hi - b_lo;
        let delta = n as isize - m as isize;
        let odd = delta & 1 == 1;
        self.vf[1] = 0;
        self.vb[1] = 0;
        let d_max = max_d(n, m) as isize;
        for d in 0..d_max {
            for k in (-d..=d).rev().step_by(2) {
                let mut x = if k == -d || (k != d && self.vf[k - 1] < self.vf[k + 1]) {
                    self.vf[k + 1]
                } else {
                    self.vf[k - 1] + 1
                };
                let y = (x as isize - k) as usize;
                let (x0, y0) = (x, y);
                if x < n && y < m {
                    x += self.prefix(a_lo + x, a_hi, b_lo + y, b_hi);
                }
                self.vf[k] = x;
                if odd && (k - delta).abs() < d && self.vf[k] + self.vb[-(k - delta)] >= n {
                    return (a_lo + x0, b_lo + y0);
                }
            }
            for k in (-d..=d).rev().step_by(2) {
                let mut x = if k == -d || (k != d && self.vb[k - 1] < self.vb[k + 1]) {
                    self.vb[k + 1]
                } else {
                    self.vb[k - 1] + 1
                };
                let mut y = (x as isize - k) as usize;
                if x < n && y < m {
                    let s = self.suffix(a_lo, a_hi - x, b_lo, b_hi - y);
                    x += s;
                    y += s;
                }
                self.vb[k] = x;
                if !odd && (k - delta).abs() <= d && self.vb[k] + self.vf[-(k - delta)] >= n {
                    return (a_lo + n - x, b_lo + m - y);
                }
            }
        }
        unreachable!("an optimal path always has a middle snake")
    }
}

/// Default bound on recorded frontier states.
pub const DEFAULT_TRACE_CAP: usize = 10_000;

/// One diagonal's furthest-reaching point in a round of the forward search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrontierState {
    pub k: isize,
    /// Endpoint on the neighbouring diagonal this round extended from
    /// (`None` in round 0).
    pub from: Option<(usize, usize)>,
    /// Where the snake along diagonal `k` begins.
    pub snake_start: (usize, usize),
    /// Furthest-reaching point on diagonal `k` after following the snake.
    pub end: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Round {
    pub d: usize,
    pub frontier: Vec<FrontierState>,
}

/// A recorded forward search over a `before` of length `n` and an `after`
/// of length `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub n: usize,
    pub m: usize,
    /// Rounds `d = 0..=D`. Round 0 is the initial snake; every later round is
    /// one frontier expansion.
    pub rounds: Vec<Round>,
    /// The edit distance found by the search.
    pub distance: usize,
    /// Set when recording stopped at the state cap.
    pub truncated: bool,
    /// Matching cells `(x, y)` where `before[x] == after[y]`, for drawing
    /// the edit graph. Empty when the grid is too large to draw.
    pub matches: Vec<(usize, usize)>,
    pub before_labels: Vec<String>,
    pub after_labels: Vec<String>,
}

impl Trace {
    pub fn state_count(&self) -> usize {
        self.rounds.iter().map(|r| r.frontier.len()).sum()
    }

    /// Rounds with `d >= 1`.
    pub fn frontier_expansions(&self) -> usize {
        self.rounds.iter().filter(|r| r.d > 0).count()
    }
}

/// Grid cells above which match markers are not recorded.
const MAX_MATCH_GRID: usize = 250_000;

/// Like [`ses`], and also records the greedy forward search, keeping at
/// most `cap` frontier states.
pub fn ses_traced<A, B>(
    before: &[A],
    after: &[B],
    eq: impl Fn(&A, &B) -> bool,
    cap: usize,
) -> (EditScript, Trace) {
    let script = ses(before, after, &eq);
    let n = before.len();
    let m = after.len();
    let mut trace = Trace {
        n,
        m,
        rounds: Vec::new(),
        distance: script.distance(),
        truncated: false,
        matches: Vec::new(),
        before_labels: Vec::new(),
        after_labels: Vec::new(),
    };
    if n.saturating_mul(m) <= MAX_MATCH_GRID {
        for (x, a) in before.iter().enumerate() {
            for (y, b) in after.iter().enumerate() {
                if eq(a, b) {
                    trace.matches.push((x, y));
                }
            }
        }
    }
    let max = n + m;
    let mut v = V::new(max);
    let mut recorded = 0usize;
    'rounds: for d in 0..=max as isize {
        let mut round = Round { d: d as usize, frontier: Vec::new() };
        let mut done = false;
        for k in (-d..=d).step_by(2) {
            let (from, mut x) = if d == 0 {
                (None, 0)
            } else if k == -d || (k != d && v[k - 1] < v[k + 1]) {
                let px = v[k + 1];
                (Some((px, (px as isize - (k + 1)) as usize)), px)
            } else {
                let px = v[k - 1];
                (Some((px, (px as isize - (k - 1)) as usize)), px + 1)
            };
            let mut y = (x as isize - k) as usize;
            let snake_start = (x, y);
            while x < n && y < m && eq(&before[x], &after[y]) {
                x += 1;
                y += 1;
            }
            v[k] = x;
            if recorded >= cap {
                trace.truncated = true;
                if !round.frontier.is_empty() {
                    trace.rounds.push(round);
                }
                break 'rounds;
            }
            round.frontier.push(FrontierState { k, from, snake_start, end: (x, y) });
            recorded += 1;
            if x >= n && y >= m {
                done = true;
                break;
            }
        }
        trace.rounds.push(round);
        if done {
            break;
        }
    }
    (script, trace)
}
