//! Strategy contracts for both players and the concrete constructions:
//! crossing followers, the multiscale chaser, the good-box navigator, the
//! 0-square trap and greedy baselines.
//!
//! Player 1 sees the history and picks `T`/`B`; Player 2 additionally sees
//! the announced action before picking `L`/`R`. Strategies may cache
//! per-game structures (paths, traps); the cache is rebuilt whenever they
//! are asked to play stage 1, and an instance must not be shared between
//! concurrently running games. Clone one per game.

mod follower;
mod goodbox;
mod greedy;
mod multiscale;
mod spec;
mod zero_trap;

use thiserror::Error;

pub use follower::CrossingFollower;
pub use goodbox::{BoxVisit, GoodBoxNavigator};
pub use greedy::{AlwaysTop, GreedyMax, GreedyMin};
pub use multiscale::{multiscale_schedule, MultiscaleChaser};
pub use spec::{P1Spec, P2Spec, Portfolio};
pub use zero_trap::ZeroPathTrap;

use crate::lattice::{EdgeField, EdgeId, Lateral, Vertex, Vertical};
use crate::perc::VerticalPath;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StrategyError {
    #[error("{0} is not on the path")]
    NotOnPath(Vertex),
    #[error("the path has no neighbour of {0} in the announced direction")]
    PathEnds(Vertex),
    #[error("unknown strategy `{0}`")]
    UnknownStrategy(String),
    #[error("strategy `{name}`: {reason}")]
    BadParameter { name: String, reason: String },
}

/// One played stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub stage: u64,
    pub vertical: Vertical,
    pub lateral: Lateral,
    pub edge: EdgeId,
    pub cost: u8,
    pub position_after: Vertex,
}

/// What a player knows when it is asked to move at `stage`.
#[derive(Clone, Copy)]
pub struct GameView<'a> {
    pub field: &'a dyn EdgeField,
    pub start: Vertex,
    pub current: Vertex,
    pub stage: u64,
    /// The `stage - 1` steps played so far.
    pub history: &'a [Step],
}

pub trait Player1: Send {
    fn name(&self) -> String;

    fn act(&mut self, view: &GameView<'_>) -> Vertical;

    fn clone_box(&self) -> Box<dyn Player1>;
}

pub trait Player2: Send {
    fn name(&self) -> String;

    fn respond(&mut self, view: &GameView<'_>, announced: Vertical) -> Lateral;

    fn clone_box(&self) -> Box<dyn Player2>;
}

impl Clone for Box<dyn Player1> {
    fn clone(&self) -> Self {
        self.clone_box()
    }
}

impl Clone for Box<dyn Player2> {
    fn clone(&self) -> Self {
        self.clone_box()
    }
}

/// The lateral action keeping the token on `path` when Player 1 announced
/// `announced`.
pub fn follow_path_response(
    path: &VerticalPath,
    current: Vertex,
    announced: Vertical,
) -> Result<Lateral, StrategyError> {
    if !path.contains(current) {
        return Err(StrategyError::NotOnPath(current));
    }
    let next = path
        .at_row(current.y + announced.dy())
        .ok_or(StrategyError::PathEnds(current))?;
    Ok(if next.x > current.x {
        Lateral::Right
    } else {
        Lateral::Left
    })
}

/// The lateral action bringing the token closest to the path vertex in the
/// row it is about to enter. Rows beyond the path use its nearest end.
/// Ties go right. On the path this agrees with [`follow_path_response`].
pub(crate) fn toward_path(path: &VerticalPath, current: Vertex, announced: Vertical) -> Lateral {
    let y = current.y + announced.dy();
    let target = match path.at_row(y) {
        Some(v) => v.x,
        None if y < path.bottom().y => path.bottom().x,
        None => path.top().x,
    };
    let left = (current.x - 1 - target).abs();
    let right = (current.x + 1 - target).abs();
    if left < right {
        Lateral::Left
    } else {
        Lateral::Right
    }
}

/// `σ[h]`: plays from the vertex reached after `prefix` as `inner` would
/// after having seen `prefix` from `origin`.
pub struct ShiftedP1 {
    inner: Box<dyn Player1>,
    origin: Vertex,
    prefix: Vec<Step>,
    history: Vec<Step>,
}

/// `τ[h]`, the Player 2 counterpart of [`ShiftedP1`].
pub struct ShiftedP2 {
    inner: Box<dyn Player2>,
    origin: Vertex,
    prefix: Vec<Step>,
    history: Vec<Step>,
}

fn position_after(origin: Vertex, prefix: &[Step], k: usize) -> Vertex {
    if k == 0 {
        origin
    } else {
        prefix[k - 1].position_after
    }
}

/// Keeps `history` = prefix followed by the shifted game's own steps.
fn sync_history(history: &mut Vec<Step>, prefix_len: usize, seen: &[Step]) {
    history.truncate(prefix_len + seen.len());
    for s in &seen[history.len() - prefix_len..] {
        history.push(Step {
            stage: prefix_len as u64 + s.stage,
            ..*s
        });
    }
}

impl ShiftedP1 {
    pub fn new(inner: Box<dyn Player1>, origin: Vertex, prefix: Vec<Step>) -> Self {
        ShiftedP1 {
            inner,
            origin,
            prefix,
            history: Vec::new(),
        }
    }
}

impl Player1 for ShiftedP1 {
    fn name(&self) -> String {
        format!("{}[+{}]", self.inner.name(), self.prefix.len())
    }

    fn act(&mut self, view: &GameView<'_>) -> Vertical {
        if view.stage == 1 {
            for k in 0..self.prefix.len() {
                let past = GameView {
                    field: view.field,
                    start: self.origin,
                    current: position_after(self.origin, &self.prefix, k),
                    stage: k as u64 + 1,
                    history: &self.prefix[..k],
                };
                self.inner.act(&past);
            }
            self.history = self.prefix.clone();
        }
        sync_history(&mut self.history, self.prefix.len(), view.history);
        let full = GameView {
            field: view.field,
            start: self.origin,
            current: view.current,
            stage: self.prefix.len() as u64 + view.stage,
            history: &self.history,
        };
        self.inner.act(&full)
    }

    fn clone_box(&self) -> Box<dyn Player1> {
        Box::new(ShiftedP1 {
            inner: self.inner.clone_box(),
            origin: self.origin,
            prefix: self.prefix.clone(),
            history: self.history.clone(),
        })
    }
}

impl ShiftedP2 {
    pub fn new(inner: Box<dyn Player2>, origin: Vertex, prefix: Vec<Step>) -> Self {
        ShiftedP2 {
            inner,
            origin,
            prefix,
            history: Vec::new(),
        }
    }
}

impl Player2 for ShiftedP2 {
    fn name(&self) -> String {
        format!("{}[+{}]", self.inner.name(), self.prefix.len())
    }

    fn respond(&mut self, view: &GameView<'_>, announced: Vertical) -> Lateral {
        if view.stage == 1 {
            for k in 0..self.prefix.len() {
                let past = GameView {
                    field: view.field,
                    start: self.origin,
                    current: position_after(self.origin, &self.prefix, k),
                    stage: k as u64 + 1,
                    history: &self.prefix[..k],
                };
                self.inner.respond(&past, self.prefix[k].vertical);
            }
            self.history = self.prefix.clone();
        }
        sync_history(&mut self.history, self.prefix.len(), view.history);
        let full = GameView {
            field: view.field,
            start: self.origin,
            current: view.current,
            stage: self.prefix.len() as u64 + view.stage,
            history: &self.history,
        };
        self.inner.respond(&full, announced)
    }

    fn clone_box(&self) -> Box<dyn Player2> {
        Box::new(ShiftedP2 {
            inner: self.inner.clone_box(),
            origin: self.origin,
            prefix: self.prefix.clone(),
            history: self.history.clone(),
        })
    }
}

#[cfg(test)]
mod tests;
