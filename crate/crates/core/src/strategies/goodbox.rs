use super::{toward_path, GameView, Player2};
use crate::lattice::{Lateral, Vertex, Vertical};
use crate::perc::{BoxSpec, Region, Side, VerticalPath};

/// One box the navigator has been in charge of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoxVisit {
    pub center: (i64, i64),
    /// Stage at which the box was entered.
    pub stage: u64,
    pub good: bool,
}

/// Player 2 that tiles the plane with boxes of half-width `floor(n^sigma)`
/// and half-height `n` centred on `(m Z) x (n Z)`.
///
/// In a box with a vertical crossing it steers to the nearest crossing and
/// rides it until the token leaves; in a box without one it plays `R`
/// until the token leaves. On leaving, the next box is the one whose
/// centre row is nearest the token (so the token is at least `n / 2` rows
/// from its top and bottom), in the nearest centre column, skipping
/// centres already found bad when another candidate exists. Ties go up
/// and right.
#[derive(Debug, Clone)]
pub struct GoodBoxNavigator {
    n: u32,
    sigma: f64,
    state: Option<State>,
}

#[derive(Debug, Clone)]
struct State {
    current: BoxSpec,
    path: Option<VerticalPath>,
    visits: Vec<BoxVisit>,
}

impl GoodBoxNavigator {
    pub fn new(n: u32, sigma: f64) -> Self {
        GoodBoxNavigator {
            n: n.max(1),
            sigma,
            state: None,
        }
    }

    pub fn half_width(&self) -> u32 {
        ((self.n as f64).powf(self.sigma).floor() as u32).max(1)
    }

    pub fn half_height(&self) -> u32 {
        self.n
    }

    /// Boxes visited in the current game, in order.
    pub fn visits(&self) -> &[BoxVisit] {
        self.state.as_ref().map_or(&[], |s| &s.visits)
    }

    fn grid_box(&self, cx: i64, cy: i64) -> BoxSpec {
        BoxSpec::anchored(cx, cy, self.half_width(), self.n).expect("positive dimensions")
    }

    /// The box to use for a token at `v`.
    fn choose_box(&self, v: Vertex, bad: &[(i64, i64)]) -> BoxSpec {
        let m = self.half_width() as i64;
        let n = self.n as i64;
        // centre indices whose box contains the coordinate: c - h < t <= c + h
        let span = |t: i64, h: i64| {
            let k = t.div_euclid(h);
            (k - 1..=k + 1).filter(move |j| j * h - h < t && t <= j * h + h)
        };
        let mut cands: Vec<(i64, i64)> = Vec::with_capacity(4);
        for j in span(v.y, n) {
            for i in span(v.x, m) {
                cands.push((i * m, j * n));
            }
        }
        cands.sort_by_key(|&(cx, cy)| ((v.y - cy).abs(), (v.x - cx).abs(), -cy, -cx));
        let pick = cands
            .iter()
            .find(|c| !bad.contains(c))
            .unwrap_or(&cands[0]);
        self.grid_box(pick.0, pick.1)
    }

    /// The crossing of `bx` nearest the token in its row; ties go right.
    fn nearest_crossing(view: &GameView<'_>, bx: &BoxSpec) -> Option<VerticalPath> {
        let whole = bx.region();
        let x = view.current.x.clamp(whole.x_min, whole.x_max);
        let left = Region { x_max: x, ..whole }.extremal_crossing(view.field, Side::Right);
        let right = Region { x_min: x, ..whole }.extremal_crossing(view.field, Side::Left);
        let fallback = whole.extremal_crossing(view.field, Side::Left);
        let y = view.current.y.clamp(whole.y_min, whole.y_max);
        let dist = |p: &VerticalPath| (p.at_row(y).expect("spans the box").x - view.current.x).abs();
        [right, left, fallback]
            .into_iter()
            .flatten()
            .min_by_key(|p| dist(p))
    }

    fn enter(&self, view: &GameView<'_>, state: Option<State>) -> State {
        let mut visits = state.map(|s| s.visits).unwrap_or_default();
        let bad: Vec<_> = visits.iter().filter(|b| !b.good).map(|b| b.center).collect();
        let current = self.choose_box(view.current, &bad);
        let path = Self::nearest_crossing(view, &current);
        visits.push(BoxVisit {
            center: current.center(),
            stage: view.stage,
            good: path.is_some(),
        });
        State {
            current,
            path,
            visits,
        }
    }
}

impl Player2 for GoodBoxNavigator {
    fn name(&self) -> String {
        format!("goodbox:n={}:sigma={}", self.n, self.sigma)
    }

    fn respond(&mut self, view: &GameView<'_>, announced: Vertical) -> Lateral {
        let state = match self.state.take() {
            Some(s) if view.stage != 1 && s.current.contains(view.current) => s,
            Some(s) if view.stage != 1 => self.enter(view, Some(s)),
            _ => self.enter(view, None),
        };
        let action = match &state.path {
            Some(path) => toward_path(path, view.current, announced),
            None => Lateral::Right,
        };
        self.state = Some(state);
        action
    }

    fn clone_box(&self) -> Box<dyn Player2> {
        Box::new(self.clone())
    }
}
