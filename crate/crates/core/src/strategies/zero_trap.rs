use std::collections::VecDeque;

use super::greedy::{worst_cost, GreedyMin};
use super::{GameView, Player1};
use crate::lattice::{Vertex, Vertical};
use crate::lattice::EdgeField;
use crate::perc::BoxSpec;

/// Player 1 that confines the token to a horizontal band of closed edges
/// around the start, the finite-window form of a 0-path.
///
/// The trap is the largest set `S` of window vertices such that from each
/// `v` in `S` some vertical move crosses only closed edges and lands in `S`
/// whatever Player 2 answers. It contains the vertices of every chain of
/// 0-squares in the window and is found by peeling vertices that violate
/// the rule until none do. Vertices beyond the lateral ends of the window
/// count as trapped; the window is made wide enough that the token cannot
/// reach them within the horizon. A trap is accepted when every interior
/// column of the window holds one of its vertices; otherwise the window is
/// made taller, up to a cap.
///
/// Off the trap, Player 1 moves vertically towards the nearest trap vertex
/// of the column the token lands in, breaking ties by the cheaper worst-case
/// edge and then `T`. Without a trap it falls back to [`GreedyMin`].
#[derive(Debug, Clone)]
pub struct ZeroPathTrap {
    half_width: u32,
    half_height: u32,
    max_half_height: u32,
    trap: Option<Option<Trap>>,
}

#[derive(Debug, Clone)]
struct Trap {
    x_min: i64,
    x_max: i64,
    y_min: i64,
    y_max: i64,
    safe: Vec<bool>,
    /// The move keeping a trap vertex inside the trap.
    keep: Vec<Option<Vertical>>,
    /// Safe rows per column, ascending.
    columns: Vec<Vec<i64>>,
}

impl Trap {
    fn index(&self, x: i64, y: i64) -> Option<usize> {
        if x < self.x_min || x > self.x_max || y < self.y_min || y > self.y_max {
            return None;
        }
        Some((y - self.y_min) as usize * (self.x_max - self.x_min + 1) as usize + (x - self.x_min) as usize)
    }

    fn is_safe(&self, v: Vertex) -> bool {
        if v.x < self.x_min || v.x > self.x_max {
            return true;
        }
        self.index(v.x, v.y).is_some_and(|i| self.safe[i])
    }

    /// Distance from row `y` to the nearest safe vertex in column `x`.
    fn column_distance(&self, x: i64, y: i64) -> u64 {
        if x < self.x_min || x > self.x_max {
            return 0;
        }
        let col = &self.columns[(x - self.x_min) as usize];
        let i = col.partition_point(|&r| r < y);
        [i.checked_sub(1), Some(i)]
            .into_iter()
            .flatten()
            .filter_map(|j| col.get(j))
            .map(|&r| r.abs_diff(y))
            .min()
            .unwrap_or(u64::MAX)
    }

    fn build(field: &dyn EdgeField, window: &BoxSpec) -> Option<Trap> {
        let (x_min, x_max) = (window.x_min(), window.x_max());
        let (y_min, y_max) = (window.bottom_row(), window.top_row());
        let w = (x_max - x_min + 1) as usize;
        let h = (y_max - y_min + 1) as usize;
        let vertex = |i: usize| Vertex {
            x: x_min + (i % w) as i64,
            y: y_min + (i / w) as i64,
        };
        const DIRS: [Vertical; 2] = [Vertical::Top, Vertical::Bottom];
        // bit k: both edges of DIRS[k] closed
        let closed: Vec<u8> = (0..w * h)
            .map(|i| {
                let v = vertex(i);
                if (v.x + v.y).rem_euclid(2) != 0 {
                    return 0;
                }
                DIRS.iter()
                    .enumerate()
                    .filter(|(_, &d)| worst_cost(field, v, d) == 0)
                    .fold(0, |acc, (k, _)| acc | 1 << k)
            })
            .collect();
        let mut safe: Vec<bool> = closed.iter().map(|&c| c != 0).collect();
        let is_safe = |safe: &[bool], x: i64, y: i64| {
            if x < x_min || x > x_max {
                true
            } else if y < y_min || y > y_max {
                false
            } else {
                safe[(y - y_min) as usize * w + (x - x_min) as usize]
            }
        };
        let keep = |safe: &[bool], i: usize| {
            let v = vertex(i);
            DIRS.iter().enumerate().find_map(|(k, &d)| {
                let y = v.y + d.dy();
                (closed[i] >> k & 1 == 1 && is_safe(safe, v.x - 1, y) && is_safe(safe, v.x + 1, y)).then_some(d)
            })
        };
        let mut queue: VecDeque<usize> = (0..w * h).filter(|&i| safe[i]).collect();
        while let Some(i) = queue.pop_front() {
            if !safe[i] || keep(&safe, i).is_some() {
                continue;
            }
            safe[i] = false;
            let v = vertex(i);
            for (dx, dy) in [(-1, -1), (1, -1), (-1, 1), (1, 1)] {
                let (x, y) = (v.x + dx, v.y + dy);
                if (x_min..=x_max).contains(&x) && (y_min..=y_max).contains(&y) {
                    let j = (y - y_min) as usize * w + (x - x_min) as usize;
                    if safe[j] {
                        queue.push_back(j);
                    }
                }
            }
        }
        let columns: Vec<Vec<i64>> = (0..w)
            .map(|c| (0..h).filter(|&r| safe[r * w + c]).map(|r| y_min + r as i64).collect())
            .collect();
        // columns strictly inside the window must hold trap vertices
        let inner = 2..w.saturating_sub(2);
        if inner.is_empty() || inner.into_iter().any(|c| columns[c].is_empty()) {
            return None;
        }
        let keep = (0..w * h).map(|i| if safe[i] { keep(&safe, i) } else { None }).collect();
        Some(Trap {
            x_min,
            x_max,
            y_min,
            y_max,
            safe,
            keep,
            columns,
        })
    }

    fn preferred(&self, v: Vertex) -> Option<Vertical> {
        if v.x < self.x_min || v.x > self.x_max {
            return Some(Vertical::Top);
        }
        self.index(v.x, v.y).and_then(|i| self.keep[i])
    }
}

impl ZeroPathTrap {
    /// A trap searched for in windows of the given half-width around the
    /// start, with half-height doubling from `half_height` up to
    /// `max_half_height`.
    pub fn new(half_width: u32, half_height: u32, max_half_height: u32) -> Self {
        let half_height = half_height.max(1);
        ZeroPathTrap {
            half_width: half_width.max(1),
            half_height,
            max_half_height: max_half_height.max(half_height),
            trap: None,
        }
    }

    /// Window sizes suited to a game of `horizon` stages: the token cannot
    /// reach the lateral ends of the window.
    pub fn for_horizon(horizon: u64) -> Self {
        let root = (horizon as f64).sqrt().ceil() as u32;
        let half_width = u32::try_from(horizon).unwrap_or(u32::MAX / 2).saturating_add(10 * root.max(1));
        Self::new(half_width, 10, 10 * root.max(2))
    }

    /// Window half-width, initial half-height and largest half-height.
    pub fn dimensions(&self) -> (u32, u32, u32) {
        (self.half_width, self.half_height, self.max_half_height)
    }

    /// Whether the current game found a trap.
    pub fn has_trap(&self) -> bool {
        matches!(self.trap, Some(Some(_)))
    }

    /// Whether `v` belongs to the trap of the current game.
    pub fn is_trap_vertex(&self, v: Vertex) -> bool {
        match &self.trap {
            Some(Some(t)) => t.is_safe(v),
            _ => false,
        }
    }

    fn locate(&self, view: &GameView<'_>) -> Option<Trap> {
        let mut heights = vec![self.half_height];
        while let Some(&hh) = heights.last().filter(|&&hh| hh < self.max_half_height) {
            heights.push((hh * 2).min(self.max_half_height));
        }
        let build = |hh: u32| {
            let window = BoxSpec::new(view.start, self.half_width, hh).ok()?;
            Trap::build(view.field, &window)
        };
        if let Some(trap) = build(heights[0]) {
            return Some(trap);
        }
        // traps only grow with the window height, so the tallest decides
        let (&last, middle) = heights[1..].split_last()?;
        let tallest = build(last)?;
        middle.iter().find_map(|&hh| build(hh)).or(Some(tallest))
    }
}

impl Player1 for ZeroPathTrap {
    fn name(&self) -> String {
        format!(
            "zero_trap:width={}:height={}:max_height={}",
            self.half_width, self.half_height, self.max_half_height
        )
    }

    fn act(&mut self, view: &GameView<'_>) -> Vertical {
        if view.stage == 1 || self.trap.is_none() {
            self.trap = Some(self.locate(view));
        }
        let Some(Some(trap)) = &self.trap else {
            return GreedyMin::choose(view);
        };
        let v = view.current;
        if let Some(d) = trap.preferred(v) {
            return d;
        }
        let score = |d: Vertical| {
            let y = v.y + d.dy();
            let far = trap
                .column_distance(v.x - 1, y)
                .max(trap.column_distance(v.x + 1, y));
            (far, worst_cost(view.field, v, d), d == Vertical::Bottom)
        };
        if score(Vertical::Bottom) < score(Vertical::Top) {
            Vertical::Bottom
        } else {
            Vertical::Top
        }
    }

    fn clone_box(&self) -> Box<dyn Player1> {
        Box::new(self.clone())
    }
}
