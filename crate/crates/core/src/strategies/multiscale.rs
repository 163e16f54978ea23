use super::follower::CrossingFollower;
use super::{toward_path, GameView, Player2};
use crate::lattice::{Lateral, Vertical};
use crate::perc::{leftmost_crossing_path, BoxSpec, VerticalPath};

/// Largest scale exponent considered; boxes then have height `2^15`.
pub const MAX_SCALE: u32 = 14;

/// First stage at which the chaser targets scale `n0 + k`:
/// `m_k = 1 + sum_{l = n0}^{n0 + k - 1} 2^(l - 1)`.
pub fn multiscale_schedule(n0: u32, k: u32) -> u64 {
    1 + (n0..n0 + k).map(|l| 1u64 << (l.max(1) - 1)).sum::<u64>()
}

/// Player 2 that chases crossings of the boxes
/// `(start, 2^(n sigma), 2^n)` for `n = n0, n0 + 1, ...`, switching to the
/// next scale at the stages given by [`multiscale_schedule`].
///
/// `n0` is the smallest exponent for which every scale needed to cover
/// the horizon has a crossing. When no `n0` works the chaser follows the
/// largest crossing scale, and failing that behaves like a default
/// [`CrossingFollower`].
#[derive(Debug, Clone)]
pub struct MultiscaleChaser {
    sigma: f64,
    horizon: u64,
    plan: Option<Plan>,
}

#[derive(Debug, Clone)]
enum Plan {
    Scales { n0: u32, paths: Vec<VerticalPath> },
    Fallback(CrossingFollower),
}

impl MultiscaleChaser {
    pub fn new(sigma: f64, horizon: u64) -> Self {
        MultiscaleChaser {
            sigma,
            horizon: horizon.max(1),
            plan: None,
        }
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// The scale box at exponent `n` around the start.
    pub fn scale_box(&self, view: &GameView<'_>, n: u32) -> Option<BoxSpec> {
        let w = (2f64.powf(n as f64 * self.sigma)).floor().max(1.0) as u32;
        BoxSpec::new(view.start, w, 1 << n).ok()
    }

    /// The chosen `n0`, once stage 1 has been played and a full ladder of
    /// crossings was found.
    pub fn base_scale(&self) -> Option<u32> {
        match &self.plan {
            Some(Plan::Scales { n0, .. }) => Some(*n0),
            _ => None,
        }
    }

    /// Number of scales after `n0` needed so that the last one is entered
    /// before the horizon ends.
    fn scales_needed(&self, n0: u32) -> u32 {
        (0..)
            .find(|&k| multiscale_schedule(n0, k + 1) > self.horizon)
            .expect("the schedule grows without bound")
    }

    fn plan(&self, view: &GameView<'_>) -> Plan {
        let cap = MAX_SCALE.min((4 * self.horizon).ilog2());
        let mut paths: Vec<Option<Option<VerticalPath>>> = vec![None; cap as usize + 1];
        let mut crossing = |n: u32| -> Option<VerticalPath> {
            paths[n as usize]
                .get_or_insert_with(|| {
                    self.scale_box(view, n)
                        .and_then(|bx| leftmost_crossing_path(view.field, &bx))
                })
                .clone()
        };
        for n0 in 1..=cap {
            let last = n0 + self.scales_needed(n0);
            if last > cap {
                break;
            }
            let ladder: Option<Vec<_>> = (n0..=last).map(&mut crossing).collect();
            if let Some(paths) = ladder {
                return Plan::Scales { n0, paths };
            }
        }
        let largest = (1..=cap).rev().find_map(|n| crossing(n).map(|_| n));
        let follower = match largest {
            Some(n) => {
                let bx = self.scale_box(view, n).expect("valid scale box");
                CrossingFollower::new(bx.half_height()).with_half_width(bx.half_width())
            }
            None => CrossingFollower::new(u32::try_from(2 * self.horizon).unwrap_or(u32::MAX)),
        };
        Plan::Fallback(follower)
    }
}

impl Player2 for MultiscaleChaser {
    fn name(&self) -> String {
        format!("multiscale:sigma={}", self.sigma)
    }

    fn respond(&mut self, view: &GameView<'_>, announced: Vertical) -> Lateral {
        if view.stage == 1 || self.plan.is_none() {
            self.plan = Some(self.plan(view));
        }
        match self.plan.as_mut().expect("planned above") {
            Plan::Scales { n0, paths } => {
                let k = (0..paths.len() as u32)
                    .take_while(|&k| multiscale_schedule(*n0, k) <= view.stage)
                    .last()
                    .unwrap_or(0);
                toward_path(&paths[k as usize], view.current, announced)
            }
            Plan::Fallback(f) => f.respond(view, announced),
        }
    }

    fn clone_box(&self) -> Box<dyn Player2> {
        Box::new(self.clone())
    }
}
