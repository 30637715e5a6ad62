//! Unified diffs derived from patch-tree spans.
//!
//! Copied leaves whose bytes are identical on both sides anchor the two
//! sources to each other. A chain of anchors that increases on both sides
//! partitions each file into anchored stretches and gaps; gaps whose bytes
//! differ are the changes. Changes are widened to whole lines and grouped
//! into hunks. Anchors are byte-identical, so replacing every changed gap
//! turns the old source into the new one exactly.

use std::fmt::Write as _;

use super::patch::{Patch, PatchTree, Projection};
use crate::span::SourceSpan;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GitPatchOptions {
    pub old_label: String,
    pub new_label: String,
    /// Unchanged lines shown around each change.
    pub context: usize,
}

impl Default for GitPatchOptions {
    fn default() -> Self {
        Self { old_label: "a".into(), new_label: "b".into(), context: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("span {span} of `{kind}` lies outside the {side} source ({len} bytes)")]
pub struct SpanOutOfBounds {
    pub kind: String,
    pub span: SourceSpan,
    pub side: &'static str,
    pub len: usize,
}

/// A changed stretch: `before[b0..b1]` becomes `after[a0..a1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Region {
    b0: usize,
    b1: usize,
    a0: usize,
    a1: usize,
}

/// Renders `patch` as a unified diff from `before` to `after`. Identical
/// sources give an empty output (no headers, no hunks).
pub fn render_git_patch(
    patch: &PatchTree,
    before: &[u8],
    after: &[u8],
    opts: &GitPatchOptions,
) -> Result<Vec<u8>, SpanOutOfBounds> {
    check_bounds(patch, before.len(), after.len())?;
    let regions = widen_to_lines(&change_regions(patch, before, after), before, after);
    if regions.is_empty() {
        return Ok(Vec::new());
    }
    let lb = Lines::new(before);
    let la = Lines::new(after);
    let mut out = Vec::new();
    out.extend_from_slice(format!("--- {}\n+++ {}\n", opts.old_label, opts.new_label).as_bytes());
    let line_regions: Vec<Region> = regions
        .iter()
        .map(|r| Region { b0: lb.index(r.b0), b1: lb.index(r.b1), a0: la.index(r.a0), a1: la.index(r.a1) })
        .collect();
    let ctx = opts.context;
    let mut start = 0;
    while start < line_regions.len() {
        let mut end = start + 1;
        while end < line_regions.len() && line_regions[end].b0 - line_regions[end - 1].b1 <= 2 * ctx {
            end += 1;
        }
        write_hunk(&mut out, &line_regions[start..end], &lb, &la, ctx);
        start = end;
    }
    Ok(out)
}

fn check_bounds(patch: &PatchTree, before_len: usize, after_len: usize) -> Result<(), SpanOutOfBounds> {
    for p in patch.root.positions() {
        for (side, name, len) in [(Projection::Before, "old", before_len), (Projection::After, "new", after_len)] {
            if let Some(span) = p.span(side) {
                if span.end_byte > len || span.start_byte > span.end_byte {
                    return Err(SpanOutOfBounds { kind: p.kind().to_string(), span, side: name, len });
                }
            }
        }
    }
    Ok(())
}

fn change_regions(patch: &PatchTree, before: &[u8], after: &[u8]) -> Vec<Region> {
    // (before range, after range) of every byte-identical copied leaf.
    let mut anchors: Vec<(usize, usize, usize, usize)> = patch
        .root
        .positions()
        .filter_map(|p| match p {
            Patch::Copy(c) if c.fields.is_empty() && c.children.is_empty() && !c.before_span.is_empty() => {
                let (b, a) = (c.before_span.byte_range(), c.after_span.byte_range());
                (before[b.clone()] == after[a.clone()]).then_some((b.start, b.end, a.start, a.end))
            }
            _ => None,
        })
        .collect();
    anchors.sort_unstable();
    let mut disjoint: Vec<(usize, usize, usize, usize)> = Vec::with_capacity(anchors.len());
    for a in anchors {
        if disjoint.last().is_none_or(|l| a.0 >= l.1) {
            disjoint.push(a);
        }
    }
    let mut chain: Vec<(usize, usize, usize, usize)> = Vec::new();
    for a in longest_increasing(&disjoint) {
        if chain.last().is_none_or(|l| a.2 >= l.3) {
            chain.push(a);
        }
    }
    let mut regions = Vec::new();
    let (mut pb, mut pa) = (0, 0);
    for &(bs, be, as_, ae) in chain.iter().chain(std::iter::once(&(before.len(), before.len(), after.len(), after.len()))) {
        let (gb, ga) = (&before[pb..bs], &after[pa..as_]);
        if gb != ga {
            let prefix = gb.iter().zip(ga).take_while(|(x, y)| x == y).count();
            let suffix = gb[prefix..].iter().rev().zip(ga[prefix..].iter().rev()).take_while(|(x, y)| x == y).count();
            regions.push(Region { b0: pb + prefix, b1: bs - suffix, a0: pa + prefix, a1: as_ - suffix });
        }
        (pb, pa) = (be, ae);
    }
    regions
}

/// Longest chain with strictly increasing after-side starts, in input
/// order (O(n log n) patience method).
fn longest_increasing(items: &[(usize, usize, usize, usize)]) -> Vec<(usize, usize, usize, usize)> {
    let mut tails: Vec<usize> = Vec::new();
    let mut prev: Vec<Option<usize>> = vec![None; items.len()];
    for (i, it) in items.iter().enumerate() {
        let pos = tails.partition_point(|&t| items[t].2 < it.2);
        prev[i] = pos.checked_sub(1).map(|p| tails[p]);
        if pos == tails.len() {
            tails.push(i);
        } else {
            tails[pos] = i;
        }
    }
    let mut out = Vec::with_capacity(tails.len());
    let mut cur = tails.last().copied();
    while let Some(i) = cur {
        out.push(items[i]);
        cur = prev[i];
    }
    out.reverse();
    out
}

fn at_line_start(src: &[u8], p: usize) -> bool {
    p == 0 || src[p - 1] == b'\n'
}

/// Widens every region to whole lines on both sides, merging regions that
/// come to share a line. Bytes between regions are equal on both sides, so
/// widening moves both ends by the same amount.
fn widen_to_lines(regions: &[Region], before: &[u8], after: &[u8]) -> Vec<Region> {
    let mut out: Vec<Region> = Vec::new();
    let mut k = 0;
    while k < regions.len() {
        let mut r = regions[k];
        k += 1;
        let lower = out.last().map_or(0, |l| l.b1);
        let mut p = r.b0;
        while p > lower && before[p - 1] != b'\n' {
            p -= 1;
        }
        r.a0 -= r.b0 - p;
        r.b0 = p;
        loop {
            let done = (r.b1 == r.b0 || before[r.b1 - 1] == b'\n') && (r.a1 == r.a0 || after[r.a1 - 1] == b'\n');
            if done {
                break;
            }
            let upper = regions.get(k).map_or(before.len(), |n| n.b0);
            match before[r.b1..upper].iter().position(|&c| c == b'\n') {
                Some(off) => {
                    r.a1 += off + 1;
                    r.b1 += off + 1;
                    break;
                }
                None if k >= regions.len() => {
                    r.a1 += before.len() - r.b1;
                    r.b1 = before.len();
                    break;
                }
                None => {
                    r.b1 = regions[k].b1;
                    r.a1 = regions[k].a1;
                    k += 1;
                }
            }
        }
        debug_assert!(at_line_start(before, r.b0) && at_line_start(after, r.a0));
        match out.last_mut() {
            Some(last) if last.b1 == r.b0 => {
                last.b1 = r.b1;
                last.a1 = r.a1;
            }
            _ => out.push(r),
        }
    }
    out
}

struct Lines<'s> {
    src: &'s [u8],
    starts: Vec<usize>,
}

impl<'s> Lines<'s> {
    fn new(src: &'s [u8]) -> Self {
        let mut starts = Vec::new();
        if !src.is_empty() {
            starts.push(0);
        }
        starts.extend(src.iter().enumerate().filter(|&(i, &c)| c == b'\n' && i + 1 < src.len()).map(|(i, _)| i + 1));
        Self { src, starts }
    }

    fn len(&self) -> usize {
        self.starts.len()
    }

    /// Line number of a byte offset at a line start (or at the end).
    fn index(&self, offset: usize) -> usize {
        if offset >= self.src.len() {
            return self.starts.len();
        }
        self.starts.partition_point(|&s| s < offset)
    }

    fn line(&self, i: usize) -> &'s [u8] {
        let end = self.starts.get(i + 1).copied().unwrap_or(self.src.len());
        &self.src[self.starts[i]..end]
    }
}

fn emit_line(out: &mut Vec<u8>, marker: u8, line: &[u8]) {
    out.push(marker);
    out.extend_from_slice(line);
    if !line.ends_with(b"\n") {
        out.extend_from_slice(b"\n\\ No newline at end of file\n");
    }
}

fn write_hunk(out: &mut Vec<u8>, group: &[Region], lb: &Lines<'_>, la: &Lines<'_>, ctx: usize) {
    let first = group[0];
    let last = group[group.len() - 1];
    let hb0 = first.b0.saturating_sub(ctx);
    let ha0 = first.a0 - (first.b0 - hb0);
    let hb1 = (last.b1 + ctx).min(lb.len());
    let ha1 = last.a1 + (hb1 - last.b1);
    let start = |l0: usize, count: usize| if count == 0 { l0 } else { l0 + 1 };
    let mut header = String::new();
    let _ = writeln!(
        header,
        "@@ -{},{} +{},{} @@",
        start(hb0, hb1 - hb0),
        hb1 - hb0,
        start(ha0, ha1 - ha0),
        ha1 - ha0
    );
    out.extend_from_slice(header.as_bytes());
    let mut line = hb0;
    for r in group {
        for l in line..r.b0 {
            emit_line(out, b' ', lb.line(l));
        }
        for l in r.b0..r.b1 {
            emit_line(out, b'-', lb.line(l));
        }
        for l in r.a0..r.a1 {
            emit_line(out, b'+', la.line(l));
        }
        line = r.b1;
    }
    for l in line..hb1 {
        emit_line(out, b' ', lb.line(l));
    }
}
