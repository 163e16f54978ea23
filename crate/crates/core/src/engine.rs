//! Plays the game: sequencing of announcements and replies, cost
//! accounting and trajectory records.

use std::io::{self, Write};

use num_rational::Ratio;
use thiserror::Error;

use crate::lattice::{step, ActionPair, EdgeField, Vertex};
use crate::strategies::{GameView, Player1, Player2, Step};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("stage {index} is outside 1..={len}")]
    OutOfRange { index: u64, len: u64 },
}

/// A finished game of some horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    start: Vertex,
    steps: Vec<Step>,
    /// `cumulative[k]` is the total cost of the first `k` stages.
    cumulative: Vec<u64>,
}

/// Plays `horizon` stages from `start`. At each stage Player 1 announces a
/// vertical action, then Player 2 answers with a lateral one knowing it.
pub fn play(
    field: &dyn EdgeField,
    start: Vertex,
    p1: &mut dyn Player1,
    p2: &mut dyn Player2,
    horizon: u64,
) -> Trajectory {
    let mut steps: Vec<Step> = Vec::with_capacity(horizon as usize);
    let mut cumulative = Vec::with_capacity(horizon as usize + 1);
    cumulative.push(0u64);
    let mut current = start;
    for stage in 1..=horizon {
        let view = GameView {
            field,
            start,
            current,
            stage,
            history: &steps,
        };
        let vertical = p1.act(&view);
        let lateral = p2.respond(&view, vertical);
        let (edge, next) = step(current, ActionPair::new(vertical, lateral));
        let cost = field.cost(edge);
        steps.push(Step {
            stage,
            vertical,
            lateral,
            edge,
            cost,
            position_after: next,
        });
        cumulative.push(cumulative[stage as usize - 1] + cost as u64);
        current = next;
    }
    Trajectory {
        start,
        steps,
        cumulative,
    }
}

impl Trajectory {
    pub fn start(&self) -> Vertex {
        self.start
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn horizon(&self) -> u64 {
        self.steps.len() as u64
    }

    /// Position after `k` stages (`k = 0` is the start).
    pub fn position(&self, k: usize) -> Vertex {
        if k == 0 {
            self.start
        } else {
            self.steps[k - 1].position_after
        }
    }

    pub fn costs(&self) -> impl Iterator<Item = u8> + '_ {
        self.steps.iter().map(|s| s.cost)
    }

    pub fn total_cost(&self) -> u64 {
        *self.cumulative.last().expect("cumulative starts at 0")
    }

    /// `(1/n) sum_{t<=n} g_t`, exactly.
    pub fn average_cost(&self, n: u64) -> Result<Ratio<u64>, EngineError> {
        if n == 0 || n > self.horizon() {
            return Err(EngineError::OutOfRange {
                index: n,
                len: self.horizon(),
            });
        }
        Ok(Ratio::new(self.cumulative[n as usize], n))
    }

    /// The running average after every stage.
    pub fn running_averages(&self) -> impl Iterator<Item = f64> + '_ {
        self.cumulative
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &c)| c as f64 / n as f64)
    }

    /// Average over the whole horizon as a float; 0 for an empty game.
    pub fn mean_cost(&self) -> f64 {
        if self.steps.is_empty() {
            0.0
        } else {
            self.total_cost() as f64 / self.horizon() as f64
        }
    }

    /// Largest running average over the final quarter of the stages, a
    /// crude stand-in for the lim sup.
    pub fn limsup_proxy(&self) -> f64 {
        let n = self.steps.len();
        if n == 0 {
            return 0.0;
        }
        let from = n - (n / 4).max(1);
        self.running_averages().skip(from).fold(f64::MIN, f64::max)
    }

    /// Costs of stages `from..=horizon`.
    pub fn suffix_costs(&self, from: u64) -> Result<Vec<u8>, EngineError> {
        if from == 0 || from > self.horizon() {
            return Err(EngineError::OutOfRange {
                index: from,
                len: self.horizon(),
            });
        }
        Ok(self.steps[from as usize - 1..].iter().map(|s| s.cost).collect())
    }

    /// One row per stage: `stage,a1,a2,edge_lower_x,edge_lower_y,dx,cost,avg_num,avg_den`,
    /// where `avg_num` is the cost so far and `avg_den` the stage.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "stage,a1,a2,edge_lower_x,edge_lower_y,dx,cost,avg_num,avg_den")?;
        for s in &self.steps {
            let lower = s.edge.lower();
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                s.stage,
                s.vertical.symbol(),
                s.lateral.symbol(),
                lower.x,
                lower.y,
                s.edge.dx(),
                s.cost,
                self.cumulative[s.stage as usize],
                s.stage
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{Configuration, ConstantField, Lateral, Vertical};
    use crate::strategies::{AlwaysTop, GreedyMax, GreedyMin};

    /// Records what it was shown and plays a fixed reply.
    #[derive(Clone, Default)]
    struct Probe {
        seen: Vec<(u64, usize, Option<Vertical>)>,
    }

    impl Player1 for Probe {
        fn name(&self) -> String {
            "probe".into()
        }

        fn act(&mut self, view: &GameView<'_>) -> Vertical {
            self.seen.push((view.stage, view.history.len(), None));
            if view.stage.is_multiple_of(3) {
                Vertical::Bottom
            } else {
                Vertical::Top
            }
        }

        fn clone_box(&self) -> Box<dyn Player1> {
            Box::new(self.clone())
        }
    }

    impl Player2 for Probe {
        fn name(&self) -> String {
            "probe".into()
        }

        fn respond(&mut self, view: &GameView<'_>, announced: Vertical) -> Lateral {
            self.seen.push((view.stage, view.history.len(), Some(announced)));
            Lateral::Left
        }

        fn clone_box(&self) -> Box<dyn Player2> {
            Box::new(self.clone())
        }
    }

    #[test]
    fn information_order() {
        let (mut a, mut b) = (Probe::default(), Probe::default());
        let t = play(&ConstantField(true), Vertex::ORIGIN, &mut a, &mut b, 6);
        for (k, ((s1, h1, none), (s2, h2, ann))) in a.seen.iter().zip(&b.seen).enumerate() {
            let stage = k as u64 + 1;
            assert_eq!((*s1, *s2), (stage, stage));
            // both see exactly the past, Player 2 also sees the announcement
            assert_eq!((*h1, *h2), (k, k));
            assert!(none.is_none());
            assert_eq!(*ann, Some(t.steps()[k].vertical));
        }
        assert_eq!(t.position(6), Vertex { x: -6, y: 2 });
    }

    #[test]
    fn accounting_is_exact() {
        let c = Configuration::new(5, 0.5).unwrap();
        let t = play(&c, Vertex::ORIGIN, &mut GreedyMin, &mut GreedyMax, 300);
        let mut total = 0u64;
        for (k, s) in t.steps().iter().enumerate() {
            assert_eq!(s.stage, k as u64 + 1);
            let (edge, next) = step(t.position(k), ActionPair::new(s.vertical, s.lateral));
            assert_eq!((edge, next), (s.edge, s.position_after));
            assert_eq!(s.cost, c.cost(edge));
            total += s.cost as u64;
            assert_eq!(t.average_cost(k as u64 + 1).unwrap(), Ratio::new(total, k as u64 + 1));
        }
        assert_eq!(t.total_cost(), total);
        assert!(t.average_cost(0).is_err());
        assert_eq!(t.average_cost(301), Err(EngineError::OutOfRange { index: 301, len: 300 }));
        assert_eq!(t.suffix_costs(1).unwrap(), t.costs().collect::<Vec<_>>());
        assert_eq!(t.suffix_costs(300).unwrap().len(), 1);
        // suffix of a suffix composes
        let s = t.suffix_costs(40).unwrap();
        assert_eq!(&s[9..], t.suffix_costs(49).unwrap().as_slice());
        assert!(t.suffix_costs(301).is_err());
    }

    #[test]
    fn constant_fields() {
        for (open, want) in [(true, 1u64), (false, 0)] {
            let t = play(&ConstantField(open), Vertex::ORIGIN, &mut AlwaysTop, &mut GreedyMax, 50);
            assert_eq!(t.average_cost(50).unwrap(), Ratio::from_integer(want));
            assert_eq!(t.limsup_proxy(), want as f64);
        }
    }

    #[test]
    fn csv_rows() {
        let t = play(&ConstantField(true), Vertex::ORIGIN, &mut AlwaysTop, &mut GreedyMax, 3);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1], "1,T,R,0,0,1,1,1,1");
        assert_eq!(lines[3], "3,T,R,2,2,1,1,3,3");
    }
}
