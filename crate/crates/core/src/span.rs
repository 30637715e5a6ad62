//! Source positions.
//!
//! Columns count **bytes**, not characters or grapheme clusters. A tab or a
//! multi-byte UTF-8 sequence advances the column by its encoded length, the
//! same convention tree-sitter uses.

use std::fmt;

/// A zero-based (row, column) position. Ordered lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Point {
    pub row: usize,
    pub column: usize,
}

impl Point {
    pub const fn new(row: usize, column: usize) -> Self {
        Self { row, column }
    }

    /// Position reached after consuming `bytes` starting from `self`.
    pub fn advance(self, bytes: &[u8]) -> Point {
        let mut p = self;
        for &b in bytes {
            if b == b'\n' {
                p.row += 1;
                p.column = 0;
            } else {
                p.column += 1;
            }
        }
        p
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.row + 1, self.column + 1)
    }
}

/// A byte range plus the matching row/column endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct SourceSpan {
    pub start_byte: usize,
    pub end_byte: usize,
    pub start_point: Point,
    pub end_point: Point,
}

impl SourceSpan {
    pub const fn new(start_byte: usize, end_byte: usize, start_point: Point, end_point: Point) -> Self {
        Self { start_byte, end_byte, start_point, end_point }
    }

    /// Span of `source[start..end]`, computing points by scanning the source.
    pub fn from_bytes(source: &[u8], start: usize, end: usize) -> Self {
        let start_point = Point::default().advance(&source[..start]);
        let end_point = start_point.advance(&source[start..end]);
        Self::new(start, end, start_point, end_point)
    }

    /// The zero-width span at the origin.
    pub const fn empty() -> Self {
        Self::new(0, 0, Point::new(0, 0), Point::new(0, 0))
    }

    pub fn len(&self) -> usize {
        self.end_byte.saturating_sub(self.start_byte)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_well_formed(&self) -> bool {
        self.start_byte <= self.end_byte && self.start_point <= self.end_point
    }

    /// Whether `other` lies within `self`, by bytes and by points.
    pub fn contains(&self, other: &SourceSpan) -> bool {
        self.start_byte <= other.start_byte
            && other.end_byte <= self.end_byte
            && self.start_point <= other.start_point
            && other.end_point <= self.end_point
    }

    /// The six-integer form used by the interchange formats:
    /// `[start_byte, end_byte, start_row, start_col, end_row, end_col]`.
    pub fn to_array(&self) -> [usize; 6] {
        [
            self.start_byte,
            self.end_byte,
            self.start_point.row,
            self.start_point.column,
            self.end_point.row,
            self.end_point.column,
        ]
    }

    pub fn from_array(a: [usize; 6]) -> Self {
        Self::new(a[0], a[1], Point::new(a[2], a[3]), Point::new(a[4], a[5]))
    }

    pub fn byte_range(&self) -> std::ops::Range<usize> {
        self.start_byte..self.end_byte
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.start_point, self.end_point)
    }
}
