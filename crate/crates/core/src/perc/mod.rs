//! Percolation primitives on finite boxes of the infinite configuration:
//! vertical crossings, extremal crossing paths, last passage and 0-squares.
//!
//! A box `z + (-m, m] x (-n, n]` holds `m` lattice vertices in each of its
//! `2n` rows. A vertical crossing runs from the lowest to the highest row
//! using open edges whose endpoints both lie inside the box.

mod bits;
mod zero;

use std::fmt;

use thiserror::Error;

pub(crate) use bits::RowBits;
pub use zero::{find_zero_chain, is_zero_square, Face, SquareChain, ZeroFaceMap};

use crate::lattice::{is_vertex, EdgeField, EdgeId, Vertex};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PercError {
    #[error("box half-width and half-height must be at least 1 (got {0} x {1})")]
    DegenerateBox(u32, u32),
    #[error("box dimension {0} is not a finite number >= 1")]
    InvalidDimension(f64),
    #[error("source {0} is not in the bottom row of the box")]
    SourceNotInBottomRow(Vertex),
    #[error("({0}, {1}) is not a face center: coordinate sum must be odd")]
    NotAFaceCenter(i64, i64),
    #[error("vertices {0} and {1} are not joined by an upward edge")]
    BrokenPath(Vertex, Vertex),
    #[error("a vertical path needs at least one vertex")]
    EmptyPath,
    #[error("path length must be at least 1")]
    ZeroLength,
}

/// The half-open box `center + (-m, m] x (-n, n]`.
///
/// The center is normally a lattice vertex; [`BoxSpec::anchored`] accepts
/// any integer point for tessellations whose centers leave the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoxSpec {
    cx: i64,
    cy: i64,
    half_width: u32,
    half_height: u32,
}

impl BoxSpec {
    pub fn new(center: Vertex, half_width: u32, half_height: u32) -> Result<Self, PercError> {
        Self::anchored(center.x, center.y, half_width, half_height)
    }

    pub fn anchored(cx: i64, cy: i64, half_width: u32, half_height: u32) -> Result<Self, PercError> {
        if half_width == 0 || half_height == 0 {
            return Err(PercError::DegenerateBox(half_width, half_height));
        }
        Ok(BoxSpec {
            cx,
            cy,
            half_width,
            half_height,
        })
    }

    /// Non-integer dimensions are floored.
    pub fn from_real(center: Vertex, half_width: f64, half_height: f64) -> Result<Self, PercError> {
        let floor = |v: f64| -> Result<u32, PercError> {
            if v.is_finite() && v >= 1.0 && v < u32::MAX as f64 {
                Ok(v.floor() as u32)
            } else {
                Err(PercError::InvalidDimension(v))
            }
        };
        Self::new(center, floor(half_width)?, floor(half_height)?)
    }

    pub fn center(&self) -> (i64, i64) {
        (self.cx, self.cy)
    }

    pub fn half_width(&self) -> u32 {
        self.half_width
    }

    pub fn half_height(&self) -> u32 {
        self.half_height
    }

    pub fn x_min(&self) -> i64 {
        self.cx - self.half_width as i64 + 1
    }

    pub fn x_max(&self) -> i64 {
        self.cx + self.half_width as i64
    }

    pub fn bottom_row(&self) -> i64 {
        self.cy - self.half_height as i64 + 1
    }

    pub fn top_row(&self) -> i64 {
        self.cy + self.half_height as i64
    }

    pub fn contains(&self, v: Vertex) -> bool {
        (self.x_min()..=self.x_max()).contains(&v.x)
            && (self.bottom_row()..=self.top_row()).contains(&v.y)
    }

    /// Vertices of row `y`, left to right; empty outside the box.
    pub fn row_vertices(&self, y: i64) -> impl Iterator<Item = Vertex> {
        let inside = (self.bottom_row()..=self.top_row()).contains(&y);
        let lo = self.x_min();
        let hi = if inside { self.x_max() } else { lo - 1 };
        (lo..=hi).filter(move |&x| is_vertex(x, y)).map(move |x| Vertex { x, y })
    }

    pub fn translate(&self, dx: i64, dy: i64) -> BoxSpec {
        BoxSpec {
            cx: self.cx + dx,
            cy: self.cy + dy,
            ..*self
        }
    }

    pub(crate) fn region(&self) -> Region {
        Region {
            x_min: self.x_min(),
            x_max: self.x_max(),
            y_min: self.bottom_row(),
            y_max: self.top_row(),
        }
    }
}

impl fmt::Display for BoxSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}) + (-{m}, {m}] x (-{n}, {n}]",
            self.cx,
            self.cy,
            m = self.half_width,
            n = self.half_height
        )
    }
}

/// Closed integer rectangle; the working shape of the sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Region {
    pub x_min: i64,
    pub x_max: i64,
    pub y_min: i64,
    pub y_max: i64,
}

impl Region {
    fn width(&self) -> usize {
        (self.x_max - self.x_min + 1).max(0) as usize
    }

    fn height(&self) -> usize {
        (self.y_max - self.y_min + 1).max(0) as usize
    }

    fn col(&self, x: i64) -> Option<usize> {
        (self.x_min..=self.x_max)
            .contains(&x)
            .then(|| (x - self.x_min) as usize)
    }

    fn full_row(&self, y: i64) -> RowBits {
        let mut bits = RowBits::new(self.width());
        for x in self.x_min..=self.x_max {
            if is_vertex(x, y) {
                bits.set((x - self.x_min) as usize);
            }
        }
        bits
    }

    /// Row `y + 1` reachable from `cur` (row `y`) through open edges.
    fn step_up<F: EdgeField + ?Sized>(&self, field: &F, y: i64, cur: &RowBits) -> RowBits {
        let w = self.width();
        let mut right = RowBits::new(w);
        let mut left = RowBits::new(w);
        for c in cur.iter_ones() {
            let lower = Vertex {
                x: self.x_min + c as i64,
                y,
            };
            if c + 1 < w && field.is_open(EdgeId::up_from(lower, 1)) {
                right.set(c);
            }
            if c > 0 && field.is_open(EdgeId::up_from(lower, -1)) {
                left.set(c);
            }
        }
        let mut next = right.shl1();
        next.or_with(&left.shr1());
        next
    }

    /// Row `y - 1` vertices with an open edge into `cur` (row `y`).
    fn step_down<F: EdgeField + ?Sized>(&self, field: &F, y: i64, cur: &RowBits) -> RowBits {
        let w = self.width();
        let via_right = cur.shr1(); // bit c: c + 1 is in cur
        let via_left = cur.shl1(); // bit c: c - 1 is in cur
        let mut cand = via_right.clone();
        cand.or_with(&via_left);
        let mut out = RowBits::new(w);
        for c in cand.iter_ones() {
            let lower = Vertex {
                x: self.x_min + c as i64,
                y: y - 1,
            };
            if (via_right.get(c) && field.is_open(EdgeId::up_from(lower, 1)))
                || (via_left.get(c) && field.is_open(EdgeId::up_from(lower, -1)))
            {
                out.set(c);
            }
        }
        out
    }

    fn crosses<F: EdgeField + ?Sized>(&self, field: &F) -> bool {
        if self.width() == 0 || self.height() == 0 {
            return false;
        }
        let mut cur = self.full_row(self.y_min);
        for y in self.y_min..self.y_max {
            if cur.is_empty() {
                return false;
            }
            cur = self.step_up(field, y, &cur);
        }
        !cur.is_empty()
    }

    /// Per row, the vertices from which the top row is reachable.
    fn coreach<F: EdgeField + ?Sized>(&self, field: &F) -> Option<Vec<RowBits>> {
        let h = self.height();
        if self.width() == 0 || h == 0 {
            return None;
        }
        let mut rows = vec![RowBits::new(self.width()); h];
        rows[h - 1] = self.full_row(self.y_max);
        for i in (1..h).rev() {
            let y = self.y_min + i as i64;
            let below = self.step_down(field, y, &rows[i]);
            if below.is_empty() {
                return None;
            }
            rows[i - 1] = below;
        }
        Some(rows)
    }

    /// The crossing that is extremal on `side`, chosen greedily from the
    /// bottom: the first vertex and each successor is the one furthest to
    /// that side that can still reach the top.
    pub(crate) fn extremal_crossing<F: EdgeField + ?Sized>(
        &self,
        field: &F,
        side: Side,
    ) -> Option<VerticalPath> {
        let co = self.coreach(field)?;
        let start = match side {
            Side::Left => co[0].first_one()?,
            Side::Right => co[0].last_one()?,
        };
        let mut x = self.x_min + start as i64;
        let mut vertices = Vec::with_capacity(co.len());
        vertices.push(Vertex { x, y: self.y_min });
        let (first, second) = match side {
            Side::Left => (-1, 1),
            Side::Right => (1, -1),
        };
        for (i, row) in co.iter().enumerate().skip(1) {
            let y = self.y_min + i as i64;
            let lower = Vertex { x, y: y - 1 };
            let ok = |dx: i64| {
                self.col(x + dx).is_some_and(|c| row.get(c))
                    && field.is_open(EdgeId::up_from(lower, dx))
            };
            let dx = if ok(first) {
                first
            } else {
                debug_assert!(ok(second));
                second
            };
            x += dx;
            vertices.push(Vertex { x, y });
        }
        Some(VerticalPath { vertices })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    Left,
    Right,
}

/// A path whose height increases by one at every step, stored bottom-up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerticalPath {
    vertices: Vec<Vertex>,
}

impl VerticalPath {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self, PercError> {
        if vertices.is_empty() {
            return Err(PercError::EmptyPath);
        }
        for w in vertices.windows(2) {
            if w[1].y != w[0].y + 1 || (w[1].x - w[0].x).abs() != 1 {
                return Err(PercError::BrokenPath(w[0], w[1]));
            }
        }
        Ok(VerticalPath { vertices })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn bottom(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn top(&self) -> Vertex {
        self.vertices[self.vertices.len() - 1]
    }

    /// The path's vertex in row `y`.
    pub fn at_row(&self, y: i64) -> Option<Vertex> {
        let i = y - self.bottom().y;
        if i < 0 {
            return None;
        }
        self.vertices.get(i as usize).copied()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.at_row(v.y) == Some(v)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.vertices
            .windows(2)
            .map(|w| EdgeId::up_from(w[0], w[1].x - w[0].x))
    }

    pub fn is_open_in<F: EdgeField + ?Sized>(&self, field: &F) -> bool {
        self.edges().all(|e| field.is_open(e))
    }
}

/// Forward reachability table of one box: row `i` holds the vertices of row
/// `bottom + i` reachable from the sources inside the box.
#[derive(Debug, Clone)]
pub struct ReachTable {
    region: Region,
    rows: Vec<RowBits>,
}

impl ReachTable {
    pub fn is_reachable(&self, v: Vertex) -> bool {
        let Some(c) = self.region.col(v.x) else {
            return false;
        };
        let i = v.y - self.region.y_min;
        i >= 0 && (i as usize) < self.rows.len() && self.rows[i as usize].get(c)
    }

    /// Reachable vertices of row `y`, left to right.
    pub fn row(&self, y: i64) -> Vec<Vertex> {
        let i = y - self.region.y_min;
        if i < 0 || i as usize >= self.rows.len() {
            return Vec::new();
        }
        self.rows[i as usize]
            .iter_ones()
            .map(|c| Vertex {
                x: self.region.x_min + c as i64,
                y,
            })
            .collect()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn top_row_nonempty(&self) -> bool {
        self.rows.last().is_some_and(|r| !r.is_empty())
    }

    /// An open path from a source to `v` traced back through the table,
    /// preferring the left predecessor.
    pub fn witness<F: EdgeField + ?Sized>(&self, field: &F, v: Vertex) -> Option<VerticalPath> {
        if !self.is_reachable(v) {
            return None;
        }
        let mut rev = vec![v];
        let mut cur = v;
        while cur.y > self.region.y_min {
            let prev = [-1i64, 1].into_iter().find_map(|dx| {
                let p = Vertex {
                    x: cur.x + dx,
                    y: cur.y - 1,
                };
                (self.is_reachable(p) && field.is_open(EdgeId::up_from(p, -dx))).then_some(p)
            })?;
            rev.push(prev);
            cur = prev;
        }
        rev.reverse();
        Some(VerticalPath { vertices: rev })
    }
}

/// Vertices reachable from `sources` (bottom row of `bx`) by open upward
/// edges inside the box, row by row.
pub fn reach_up<F: EdgeField + ?Sized>(
    field: &F,
    bx: &BoxSpec,
    sources: &[Vertex],
) -> Result<ReachTable, PercError> {
    let region = bx.region();
    let mut first = RowBits::new(region.width());
    for &s in sources {
        match region.col(s.x) {
            Some(c) if s.y == region.y_min && is_vertex(s.x, s.y) => first.set(c),
            _ => return Err(PercError::SourceNotInBottomRow(s)),
        }
    }
    let mut rows = Vec::with_capacity(region.height());
    rows.push(first);
    for y in region.y_min..region.y_max {
        let next = region.step_up(field, y, rows.last().expect("non-empty"));
        rows.push(next);
    }
    Ok(ReachTable { region, rows })
}

/// Whether an open vertical path joins the bottom and top rows of `bx`.
pub fn has_vertical_crossing<F: EdgeField + ?Sized>(field: &F, bx: &BoxSpec) -> bool {
    bx.region().crosses(field)
}

/// The left-most vertical crossing of `bx`: its x-sequence, read from the
/// bottom, is lexicographically minimal (and in fact pointwise minimal)
/// among all crossings.
pub fn leftmost_crossing_path<F: EdgeField + ?Sized>(field: &F, bx: &BoxSpec) -> Option<VerticalPath> {
    bx.region().extremal_crossing(field, Side::Left)
}

/// Mirror image of [`leftmost_crossing_path`].
pub fn rightmost_crossing_path<F: EdgeField + ?Sized>(field: &F, bx: &BoxSpec) -> Option<VerticalPath> {
    bx.region().extremal_crossing(field, Side::Right)
}

/// Largest number of open edges on an upward path of `length` edges from
/// `start` (last-passage value over the light cone).
pub fn max_oriented_path_cost<F: EdgeField + ?Sized>(
    field: &F,
    start: Vertex,
    length: u32,
) -> Result<u64, PercError> {
    if length == 0 {
        return Err(PercError::ZeroLength);
    }
    let len = length as usize;
    // best[j]: vertex at height k, x = start.x - k + 2j
    let mut best = vec![0u64];
    for k in 0..len {
        let y = start.y + k as i64;
        let mut next = vec![0u64; k + 2];
        for (j, &b) in best.iter().enumerate() {
            let x = start.x - k as i64 + 2 * j as i64;
            let lower = Vertex { x, y };
            let left = b + field.cost(EdgeId::up_from(lower, -1)) as u64;
            let right = b + field.cost(EdgeId::up_from(lower, 1)) as u64;
            next[j] = next[j].max(left);
            next[j + 1] = next[j + 1].max(right);
        }
        best = next;
    }
    Ok(best.into_iter().max().unwrap_or(0))
}

#[cfg(test)]
mod tests;
