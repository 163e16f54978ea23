use std::collections::VecDeque;

use super::{BoxSpec, PercError, Region};
use crate::lattice::{is_vertex, EdgeField, EdgeId, Vertex};

/// Center of a unit face of the lattice (odd coordinate sum).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub x: i64,
    pub y: i64,
}

impl Face {
    pub fn new(x: i64, y: i64) -> Result<Self, PercError> {
        if is_vertex(x, y) {
            Err(PercError::NotAFaceCenter(x, y))
        } else {
            Ok(Face { x, y })
        }
    }

    pub fn left(&self) -> Vertex {
        Vertex { x: self.x - 1, y: self.y }
    }

    pub fn right(&self) -> Vertex {
        Vertex { x: self.x + 1, y: self.y }
    }

    pub fn top(&self) -> Vertex {
        Vertex { x: self.x, y: self.y + 1 }
    }

    pub fn bottom(&self) -> Vertex {
        Vertex { x: self.x, y: self.y - 1 }
    }

    /// The four boundary edges, counter-clockwise from the lower-left one.
    pub fn edges(&self) -> [EdgeId; 4] {
        [
            EdgeId::up_from(self.bottom(), -1),
            EdgeId::up_from(self.bottom(), 1),
            EdgeId::up_from(self.right(), -1),
            EdgeId::up_from(self.left(), 1),
        ]
    }

    /// Faces sharing a vertex horizontally or an edge.
    pub const NEIGHBOR_OFFSETS: [(i64, i64); 6] = [(2, 0), (1, -1), (1, 1), (-1, -1), (-1, 1), (-2, 0)];

    pub fn is_adjacent(&self, other: &Face) -> bool {
        Self::NEIGHBOR_OFFSETS.contains(&(other.x - self.x, other.y - self.y))
    }
}

/// Whether all four edges around `center` are closed.
pub fn is_zero_square<F: EdgeField + ?Sized>(field: &F, center: (i64, i64)) -> Result<bool, PercError> {
    let face = Face::new(center.0, center.1)?;
    Ok(face.edges().iter().all(|&e| !field.is_open(e)))
}

/// Consecutive 0-squares, each adjacent to the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareChain {
    centers: Vec<Face>,
}

impl SquareChain {
    pub fn centers(&self) -> &[Face] {
        &self.centers
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    pub fn is_valid_in<F: EdgeField + ?Sized>(&self, field: &F) -> bool {
        self.centers
            .iter()
            .all(|f| f.edges().iter().all(|&e| !field.is_open(e)))
            && self.centers.windows(2).all(|w| w[0].is_adjacent(&w[1]))
    }
}

/// The 0-squares of a window, evaluated once.
#[derive(Debug, Clone)]
pub struct ZeroFaceMap {
    region: Region,
    zero: Vec<bool>,
}

impl ZeroFaceMap {
    pub fn new<F: EdgeField + ?Sized>(field: &F, window: &BoxSpec) -> Self {
        let region = window.region();
        let w = region.width();
        let mut zero = vec![false; w * region.height()];
        for y in region.y_min..=region.y_max {
            for x in region.x_min..=region.x_max {
                if !is_vertex(x, y) {
                    let f = Face { x, y };
                    zero[(y - region.y_min) as usize * w + (x - region.x_min) as usize] =
                        f.edges().iter().all(|&e| !field.is_open(e));
                }
            }
        }
        ZeroFaceMap { region, zero }
    }

    pub fn x_min(&self) -> i64 {
        self.region.x_min
    }

    pub fn x_max(&self) -> i64 {
        self.region.x_max
    }

    pub fn y_min(&self) -> i64 {
        self.region.y_min
    }

    pub fn y_max(&self) -> i64 {
        self.region.y_max
    }

    fn index(&self, x: i64, y: i64) -> Option<usize> {
        let r = &self.region;
        if x < r.x_min || x > r.x_max || y < r.y_min || y > r.y_max {
            return None;
        }
        Some((y - r.y_min) as usize * r.width() + (x - r.x_min) as usize)
    }

    pub fn in_window(&self, x: i64, y: i64) -> bool {
        self.index(x, y).is_some()
    }

    /// False for points outside the window or with even parity.
    pub fn is_zero(&self, x: i64, y: i64) -> bool {
        self.index(x, y).is_some_and(|i| self.zero[i])
    }

    pub fn zero_faces(&self) -> impl Iterator<Item = Face> + '_ {
        let r = self.region;
        (r.y_min..=r.y_max)
            .flat_map(move |y| (r.x_min..=r.x_max).map(move |x| (x, y)))
            .filter(|&(x, y)| self.is_zero(x, y))
            .map(|(x, y)| Face { x, y })
    }

    /// Breadth-first search from the left-most face column to the right-most
    /// one over adjacent 0-squares. Deterministic: sources bottom to top,
    /// neighbours in [`Face::NEIGHBOR_OFFSETS`] order.
    pub fn chain(&self) -> Option<SquareChain> {
        let r = self.region;
        let mut parent: Vec<usize> = vec![usize::MAX; self.zero.len()];
        let mut queue = VecDeque::new();
        for y in r.y_min..=r.y_max {
            for x in r.x_min..=(r.x_min + 1).min(r.x_max) {
                if let Some(i) = self.index(x, y).filter(|&i| self.zero[i]) {
                    parent[i] = i;
                    queue.push_back((x, y));
                }
            }
        }
        while let Some((x, y)) = queue.pop_front() {
            let i = self.index(x, y).expect("queued faces are inside");
            if x >= r.x_max - 1 {
                let mut centers = vec![Face { x, y }];
                let mut cur = i;
                while parent[cur] != cur {
                    cur = parent[cur];
                    let w = r.width();
                    centers.push(Face {
                        x: r.x_min + (cur % w) as i64,
                        y: r.y_min + (cur / w) as i64,
                    });
                }
                centers.reverse();
                return Some(SquareChain { centers });
            }
            for (dx, dy) in Face::NEIGHBOR_OFFSETS {
                if let Some(j) = self.index(x + dx, y + dy) {
                    if self.zero[j] && parent[j] == usize::MAX {
                        parent[j] = i;
                        queue.push_back((x + dx, y + dy));
                    }
                }
            }
        }
        None
    }
}

/// A chain of adjacent 0-squares from the left face column of `window` to
/// its right face column, if one exists.
pub fn find_zero_chain<F: EdgeField + ?Sized>(field: &F, window: &BoxSpec) -> Option<SquareChain> {
    ZeroFaceMap::new(field, window).chain()
}
