use super::{GameView, Player1, Player2};
use crate::lattice::{step, ActionPair, EdgeField, Lateral, Vertex, Vertical};

/// Plays `T` forever; the token then follows an upward path.
#[derive(Debug, Clone, Default)]
pub struct AlwaysTop;

impl Player1 for AlwaysTop {
    fn name(&self) -> String {
        "always_top".into()
    }

    fn act(&mut self, _: &GameView<'_>) -> Vertical {
        Vertical::Top
    }

    fn clone_box(&self) -> Box<dyn Player1> {
        Box::new(self.clone())
    }
}

/// Worst case over Player 2's replies of the edge cost after announcing `d`.
pub(crate) fn worst_cost(field: &dyn EdgeField, at: Vertex, d: Vertical) -> u8 {
    [Lateral::Left, Lateral::Right]
        .into_iter()
        .map(|l| field.cost(step(at, ActionPair::new(d, l)).0))
        .max()
        .unwrap_or(0)
}

/// The vertical move towards the start row; `T` on it.
pub(crate) fn toward_start_row(view: &GameView<'_>) -> Vertical {
    if view.current.y > view.start.y {
        Vertical::Bottom
    } else {
        Vertical::Top
    }
}

/// One-step minimizer: announce the direction whose worse edge is cheaper.
#[derive(Debug, Clone, Default)]
pub struct GreedyMin;

impl GreedyMin {
    pub(crate) fn choose(view: &GameView<'_>) -> Vertical {
        let top = worst_cost(view.field, view.current, Vertical::Top);
        let bottom = worst_cost(view.field, view.current, Vertical::Bottom);
        match top.cmp(&bottom) {
            std::cmp::Ordering::Less => Vertical::Top,
            std::cmp::Ordering::Greater => Vertical::Bottom,
            std::cmp::Ordering::Equal => toward_start_row(view),
        }
    }
}

impl Player1 for GreedyMin {
    fn name(&self) -> String {
        "greedy".into()
    }

    fn act(&mut self, view: &GameView<'_>) -> Vertical {
        Self::choose(view)
    }

    fn clone_box(&self) -> Box<dyn Player1> {
        Box::new(self.clone())
    }
}

/// One-step maximizer: take the open edge in the announced direction if
/// there is one; ties go right.
#[derive(Debug, Clone, Default)]
pub struct GreedyMax;

impl GreedyMax {
    pub(crate) fn choose(view: &GameView<'_>, announced: Vertical) -> Lateral {
        let cost = |l| view.field.cost(step(view.current, ActionPair::new(announced, l)).0);
        if cost(Lateral::Left) > cost(Lateral::Right) {
            Lateral::Left
        } else {
            Lateral::Right
        }
    }
}

impl Player2 for GreedyMax {
    fn name(&self) -> String {
        "greedy".into()
    }

    fn respond(&mut self, view: &GameView<'_>, announced: Vertical) -> Lateral {
        Self::choose(view, announced)
    }

    fn clone_box(&self) -> Box<dyn Player2> {
        Box::new(self.clone())
    }
}
