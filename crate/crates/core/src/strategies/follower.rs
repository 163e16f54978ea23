use super::greedy::GreedyMax;
use super::{toward_path, GameView, Player2};
use crate::lattice::{Lateral, Vertical};
use crate::perc::{leftmost_crossing_path, BoxSpec, VerticalPath};

/// Player 2 rides the left-most vertical crossing of a tall box around the
/// start, steering onto it first when the token is off it.
///
/// With no fixed half-width the box is widened 1, 2, 4, ... up to its
/// half-height and the narrowest crossing box is used, which keeps the
/// path close to the start. Without any crossing it plays [`GreedyMax`].
#[derive(Debug, Clone)]
pub struct CrossingFollower {
    half_height: u32,
    half_width: Option<u32>,
    path: Option<Option<VerticalPath>>,
}

impl CrossingFollower {
    pub fn new(half_height: u32) -> Self {
        CrossingFollower {
            half_height: half_height.max(1),
            half_width: None,
            path: None,
        }
    }

    pub fn with_half_width(mut self, half_width: u32) -> Self {
        self.half_width = Some(half_width.max(1));
        self
    }

    /// The path in use for the current game, once stage 1 has been played.
    pub fn path(&self) -> Option<&VerticalPath> {
        self.path.as_ref().and_then(|p| p.as_ref())
    }

    fn locate(&self, view: &GameView<'_>) -> Option<VerticalPath> {
        let crossing = |w: u32| {
            BoxSpec::new(view.start, w, self.half_height)
                .ok()
                .and_then(|bx| leftmost_crossing_path(view.field, &bx))
        };
        match self.half_width {
            Some(w) => crossing(w),
            None => std::iter::successors(Some(1u32), |w| w.checked_mul(2))
                .take_while(|&w| w <= self.half_height.max(1))
                .find_map(crossing),
        }
    }
}

impl Player2 for CrossingFollower {
    fn name(&self) -> String {
        match self.half_width {
            Some(w) => format!("follower:height={}:width={}", self.half_height, w),
            None => format!("follower:height={}", self.half_height),
        }
    }

    fn respond(&mut self, view: &GameView<'_>, announced: Vertical) -> Lateral {
        if view.stage == 1 || self.path.is_none() {
            self.path = Some(self.locate(view));
        }
        match self.path() {
            Some(path) => toward_path(path, view.current, announced),
            None => GreedyMax::choose(view, announced),
        }
    }

    fn clone_box(&self) -> Box<dyn Player2> {
        Box::new(self.clone())
    }
}
