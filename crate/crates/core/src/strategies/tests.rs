use super::*;
use crate::engine::play;
use crate::lattice::{step, ActionPair, Configuration, ConstantField, ExplicitField};
use crate::perc::{find_zero_chain, BoxSpec};
use proptest::prelude::*;

fn v(x: i64, y: i64) -> Vertex {
    Vertex::new(x, y).unwrap()
}

fn view<'a>(field: &'a dyn EdgeField, current: Vertex) -> GameView<'a> {
    GameView {
        field,
        start: Vertex::ORIGIN,
        current,
        stage: 2,
        history: &[],
    }
}

#[test]
fn follow_straight_and_bent_paths() {
    let straight = VerticalPath::new(vec![v(-1, -1), v(0, 0), v(1, 1)]).unwrap();
    assert_eq!(follow_path_response(&straight, v(0, 0), Vertical::Top), Ok(Lateral::Right));
    assert_eq!(follow_path_response(&straight, v(0, 0), Vertical::Bottom), Ok(Lateral::Left));
    let bent = VerticalPath::new(vec![v(1, -1), v(0, 0), v(-1, 1)]).unwrap();
    assert_eq!(follow_path_response(&bent, v(0, 0), Vertical::Top), Ok(Lateral::Left));
    assert_eq!(
        follow_path_response(&bent, v(2, 0), Vertical::Top),
        Err(StrategyError::NotOnPath(v(2, 0)))
    );
    assert_eq!(
        follow_path_response(&bent, v(-1, 1), Vertical::Top),
        Err(StrategyError::PathEnds(v(-1, 1)))
    );
}

#[test]
fn steering_toward_a_path() {
    let path = VerticalPath::new(vec![v(4, 0), v(5, 1), v(4, 2)]).unwrap();
    assert_eq!(toward_path(&path, v(0, 0), Vertical::Top), Lateral::Right);
    assert_eq!(toward_path(&path, v(9, 1), Vertical::Top), Lateral::Left);
    // beyond the path the nearest end is the target
    assert_eq!(toward_path(&path, v(8, 2), Vertical::Top), Lateral::Left);
    // equidistant: right
    assert_eq!(toward_path(&path, v(4, 0), Vertical::Bottom), Lateral::Right);
}

#[test]
fn greedy_rules() {
    let mut f = ExplicitField::new();
    // at the origin: both upward edges closed, one downward edge open
    f.open(EdgeId::new(v(-1, -1), 1).unwrap());
    assert_eq!(GreedyMin::choose(&view(&f, Vertex::ORIGIN)), Vertical::Top);
    let mut g = ExplicitField::new();
    g.open(EdgeId::new(Vertex::ORIGIN, 1).unwrap());
    assert_eq!(GreedyMin::choose(&view(&g, Vertex::ORIGIN)), Vertical::Bottom);
    // ties: towards the start row, T on it
    let tie = ConstantField(true);
    assert_eq!(GreedyMin::choose(&view(&tie, Vertex::ORIGIN)), Vertical::Top);
    let above = GameView { current: v(0, 4), ..view(&tie, Vertex::ORIGIN) };
    assert_eq!(GreedyMin::choose(&above), Vertical::Bottom);

    assert_eq!(GreedyMax::choose(&view(&g, Vertex::ORIGIN), Vertical::Top), Lateral::Right);
    let mut h = ExplicitField::new();
    h.open(EdgeId::new(Vertex::ORIGIN, -1).unwrap());
    assert_eq!(GreedyMax::choose(&view(&h, Vertex::ORIGIN), Vertical::Top), Lateral::Left);
    assert_eq!(GreedyMax::choose(&view(&tie, Vertex::ORIGIN), Vertical::Bottom), Lateral::Right);

    let t = play(&ConstantField(true), Vertex::ORIGIN, &mut GreedyMin, &mut GreedyMax, 40);
    assert_eq!(t.total_cost(), 40);
}

#[test]
fn always_top_climbs() {
    let c = Configuration::new(3, 0.5).unwrap();
    let t = play(&c, v(2, 4), &mut AlwaysTop, &mut GreedyMax, 30);
    for k in 0..30 {
        assert_eq!(t.position(k + 1).y, 4 + k as i64 + 1);
    }
}

#[test]
fn schedule_values() {
    assert_eq!(multiscale_schedule(3, 0), 1);
    assert_eq!(multiscale_schedule(3, 1), 5);
    assert_eq!(multiscale_schedule(3, 2), 13);
    assert_eq!(multiscale_schedule(3, 3), 29);
    // direct evaluation
    for n0 in 1..8 {
        for k in 0..10 {
            let mut m = 1u64;
            for l in n0..n0 + k {
                m += 2u64.pow(l - 1);
            }
            assert_eq!(multiscale_schedule(n0, k), m);
        }
    }
}

#[test]
fn followers_on_full_field() {
    let field = ConstantField(true);
    let players: Vec<Box<dyn Player2>> = vec![
        Box::new(CrossingFollower::new(100)),
        Box::new(MultiscaleChaser::new(0.75, 50)),
        Box::new(GoodBoxNavigator::new(8, 0.75)),
    ];
    for mut p2 in players {
        for mut p1 in [Box::new(AlwaysTop) as Box<dyn Player1>, Box::new(GreedyMin)] {
            let t = play(&field, Vertex::ORIGIN, p1.as_mut(), p2.as_mut(), 50);
            assert_eq!(t.total_cost(), 50, "{}", p2.name());
        }
    }
}

#[test]
fn follower_falls_back_to_greedy() {
    let c = Configuration::new(11, 0.3).unwrap();
    let mut f = CrossingFollower::new(200);
    let a = play(&c, Vertex::ORIGIN, &mut GreedyMin, &mut f, 100);
    assert!(f.path().is_none());
    let b = play(&c, Vertex::ORIGIN, &mut GreedyMin, &mut GreedyMax, 100);
    assert_eq!(a, b);
}

#[test]
fn follower_stays_on_its_path() {
    let c = Configuration::new(2, 0.85).unwrap();
    let mut f = CrossingFollower::new(400);
    let t = play(&c, Vertex::ORIGIN, &mut GreedyMin, &mut f, 200);
    let path = f.path().expect("supercritical box crosses").clone();
    let first = (0..=200).find(|&k| path.contains(t.position(k))).expect("reaches the path");
    for k in first..=200 {
        assert!(path.contains(t.position(k)));
    }
    assert!(t.costs().skip(first).all(|c| c == 1));
}

#[test]
fn empty_field_navigation_drifts_right() {
    let mut nav = GoodBoxNavigator::new(4, 0.75);
    let t = play(&ConstantField(false), Vertex::ORIGIN, &mut AlwaysTop, &mut nav, 60);
    assert_eq!(t.total_cost(), 0);
    assert!(t.steps().iter().all(|s| s.lateral == Lateral::Right));
    assert!(nav.visits().iter().all(|b| !b.good));
}

#[test]
fn navigator_never_reenters_bad_boxes() {
    for seed in 0..40u64 {
        let c = Configuration::new(seed, 0.6).unwrap();
        for p1 in [Box::new(AlwaysTop) as Box<dyn Player1>, Box::new(GreedyMin)] {
            let mut nav = GoodBoxNavigator::new(16, 0.75);
            let mut p1 = p1;
            play(&c, Vertex::ORIGIN, p1.as_mut(), &mut nav, 1500);
            let visits = nav.visits();
            for (i, a) in visits.iter().enumerate() {
                if !a.good {
                    assert!(
                        visits[i + 1..].iter().all(|b| b.center != a.center),
                        "seed {seed}: bad box {:?} revisited",
                        a.center
                    );
                }
            }
        }
    }
}

#[test]
fn navigator_boxes_contain_token_with_vertical_slack() {
    let c = Configuration::new(7, 0.55).unwrap();
    let mut nav = GoodBoxNavigator::new(10, 0.75);
    let t = play(&c, Vertex::ORIGIN, &mut GreedyMin, &mut nav, 800);
    for b in nav.visits() {
        let at = t.position(b.stage as usize - 1);
        let (m, n) = (nav.half_width() as i64, nav.half_height() as i64);
        assert!(at.x > b.center.0 - m && at.x <= b.center.0 + m);
        assert!((at.y - b.center.1).abs() <= n / 2 + 1, "{at} in {:?}", b.center);
    }
}

#[test]
fn trap_holds_cost_at_zero() {
    let mut arrivals = 0;
    for seed in 0..20u64 {
        let c = Configuration::new(seed, 0.02).unwrap();
        for mut p2 in [
            Box::new(GreedyMax) as Box<dyn Player2>,
            Box::new(CrossingFollower::new(800)),
            Box::new(GoodBoxNavigator::new(20, 0.75)),
        ] {
            let mut trap = ZeroPathTrap::for_horizon(400);
            let t = play(&c, Vertex::ORIGIN, &mut trap, p2.as_mut(), 400);
            if !trap.has_trap() {
                continue;
            }
            let arrival = (0..=400).find(|&k| trap.is_trap_vertex(t.position(k)));
            let k = arrival.expect("token reaches the trap");
            arrivals += 1;
            assert!(t.costs().skip(k).all(|c| c == 0), "seed {seed} vs {}", p2.name());
            for j in k..=400 {
                assert!(trap.is_trap_vertex(t.position(j)));
            }
        }
    }
    assert!(arrivals >= 30);
}

#[test]
fn trap_on_empty_field() {
    let mut trap = ZeroPathTrap::new(50, 3, 3);
    let t = play(&ConstantField(false), v(1, 5), &mut trap, &mut GreedyMax, 50);
    assert!(trap.has_trap());
    assert!(trap.is_trap_vertex(v(1, 5)));
    assert_eq!(t.total_cost(), 0);
}

#[test]
fn trap_absent_on_full_field_plays_greedy() {
    let mut trap = ZeroPathTrap::new(30, 2, 8);
    let a = play(&ConstantField(true), Vertex::ORIGIN, &mut trap, &mut GreedyMax, 20);
    assert!(!trap.has_trap());
    let b = play(&ConstantField(true), Vertex::ORIGIN, &mut GreedyMin, &mut GreedyMax, 20);
    assert_eq!(a, b);
}

#[test]
fn trap_found_with_chain() {
    let window = BoxSpec::new(Vertex::ORIGIN, 60, 10).unwrap();
    let mut with_chain = 0;
    for seed in 0..30u64 {
        let c = Configuration::new(seed, 0.02).unwrap();
        if find_zero_chain(&c, &window).is_some() {
            with_chain += 1;
            let mut trap = ZeroPathTrap::new(60, 10, 10);
            play(&c, Vertex::ORIGIN, &mut trap, &mut GreedyMax, 1);
            assert!(trap.has_trap(), "seed {seed}");
        }
    }
    assert!(with_chain > 20);
}

#[test]
fn spec_round_trip() {
    for s in [
        "always_top",
        "greedy",
        "zero_trap",
        "zero_trap:width=300:height=10",
        "zero_trap:width=5:height=2:max_height=9",
    ] {
        let p: P1Spec = s.parse().unwrap();
        assert_eq!(p.to_string(), s);
    }
    for s in [
        "follower",
        "follower:height=10000",
        "follower:height=50:width=4",
        "multiscale:sigma=0.75",
        "goodbox:n=64:sigma=0.75",
        "greedy",
    ] {
        let p: P2Spec = s.parse().unwrap();
        assert_eq!(p.to_string(), s);
    }
    assert_eq!("goodbox:n=64".parse::<P2Spec>().unwrap(), P2Spec::GoodBox { n: 64, sigma: 0.75 });
    let port: Portfolio<P2Spec> = "follower:height=10000,multiscale:sigma=0.75,goodbox:n=64,greedy"
        .parse()
        .unwrap();
    assert_eq!(port.0.len(), 4);
    assert_eq!(port.to_string().parse::<Portfolio<P2Spec>>().unwrap(), port);
    let p1: Portfolio<P1Spec> = "always_top,zero_trap,greedy".parse().unwrap();
    assert_eq!(p1, Portfolio::default_p1());
    for bad in ["", "nope", "multiscale:sigma=1.5", "goodbox", "goodbox:n=1", "follower:height=0", "greedy:x=1"] {
        assert!(bad.parse::<Portfolio<P2Spec>>().is_err(), "{bad}");
    }
    assert!("zero_trap:width".parse::<P1Spec>().is_err());
}

#[test]
fn strategies_are_deterministic() {
    let c = Configuration::new(99, 0.6).unwrap();
    for p2 in Portfolio::default_p2(300).0 {
        for p1 in Portfolio::default_p1().0 {
            let run = || {
                let (mut a, mut b) = (p1.build(300), p2.build(300));
                play(&c, Vertex::ORIGIN, a.as_mut(), b.as_mut(), 300)
            };
            assert_eq!(run(), run(), "{p1} vs {p2}");
            // a used instance replays identically too
            let (mut a, mut b) = (p1.build(300), p2.build(300));
            let first = play(&c, Vertex::ORIGIN, a.as_mut(), b.as_mut(), 300);
            let again = play(&c, Vertex::ORIGIN, a.as_mut(), b.as_mut(), 300);
            assert_eq!(first, again);
        }
    }
}

#[test]
fn shifted_replay_matches_suffix() {
    for seed in 0..6u64 {
        let c = Configuration::new(seed, 0.55).unwrap();
        for p2 in Portfolio::default_p2(120).0 {
            for p1 in Portfolio::default_p1().0 {
                let (mut a, mut b) = (p1.build(120), p2.build(120));
                let t = play(&c, Vertex::ORIGIN, a.as_mut(), b.as_mut(), 120);
                let m = 1 + (seed as usize * 17) % 100;
                let prefix = t.steps()[..m - 1].to_vec();
                let mut sa = ShiftedP1::new(p1.build(120), Vertex::ORIGIN, prefix.clone());
                let mut sb = ShiftedP2::new(p2.build(120), Vertex::ORIGIN, prefix);
                let rest = play(&c, t.position(m - 1), &mut sa, &mut sb, 120 - m as u64 + 1);
                assert_eq!(
                    rest.costs().collect::<Vec<_>>(),
                    t.suffix_costs(m as u64).unwrap(),
                    "{p1} vs {p2} seed {seed} M {m}"
                );
            }
        }
    }
}

proptest! {
    #[test]
    fn following_keeps_the_token_on_the_path(moves in proptest::collection::vec(any::<bool>(), 3..40),
                                             at in 1usize..38, up in any::<bool>()) {
        let mut vs = vec![Vertex::ORIGIN];
        for &r in &moves {
            let last = *vs.last().unwrap();
            vs.push(Vertex { x: last.x + if r { 1 } else { -1 }, y: last.y + 1 });
        }
        let path = VerticalPath::new(vs.clone()).unwrap();
        let i = 1 + at % (vs.len() - 2);
        let d = if up { Vertical::Top } else { Vertical::Bottom };
        let l = follow_path_response(&path, vs[i], d).unwrap();
        let (_, next) = step(vs[i], ActionPair::new(d, l));
        prop_assert!(path.contains(next));
        prop_assert_eq!(toward_path(&path, vs[i], d), l);
    }

    #[test]
    fn always_top_trajectory_is_a_vertical_path(seed in any::<u64>(), p in 0.0f64..1.0, k in 0usize..4) {
        let c = Configuration::new(seed, p).unwrap();
        let p2 = Portfolio::default_p2(60).0[k];
        let mut b = p2.build(60);
        let t = play(&c, Vertex::ORIGIN, &mut AlwaysTop, b.as_mut(), 60);
        let vs: Vec<_> = (0..=60).map(|j| t.position(j)).collect();
        prop_assert!(VerticalPath::new(vs).is_ok());
    }
}
