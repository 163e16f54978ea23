use super::*;
use crate::lattice::{Configuration, ConstantField, ExplicitField};
use proptest::prelude::*;

fn v(x: i64, y: i64) -> Vertex {
    Vertex::new(x, y).unwrap()
}

/// Edges with both endpoints inside the box.
fn box_edges(bx: &BoxSpec) -> Vec<EdgeId> {
    let mut out = Vec::new();
    for y in bx.bottom_row()..bx.top_row() {
        for lower in bx.row_vertices(y) {
            for dx in [-1, 1] {
                let e = EdgeId::new(lower, dx).unwrap();
                if bx.contains(e.upper()) {
                    out.push(e);
                }
            }
        }
    }
    out
}

/// Every open upward path from `from` to the top row, by enumeration of
/// all left/right sequences.
fn enumerate_paths<F: EdgeField>(field: &F, bx: &BoxSpec, from: Vertex) -> Vec<Vec<Vertex>> {
    fn go<F: EdgeField>(field: &F, bx: &BoxSpec, path: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        let cur = *path.last().unwrap();
        if cur.y == bx.top_row() {
            out.push(path.clone());
            return;
        }
        for dx in [-1, 1] {
            let next = Vertex { x: cur.x + dx, y: cur.y + 1 };
            if bx.contains(next) && field.is_open(EdgeId::new(cur, dx).unwrap()) {
                path.push(next);
                go(field, bx, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(field, bx, &mut vec![from], &mut out);
    out
}

fn brute_crossings<F: EdgeField>(field: &F, bx: &BoxSpec) -> Vec<Vec<Vertex>> {
    bx.row_vertices(bx.bottom_row())
        .flat_map(|s| enumerate_paths(field, bx, s))
        .collect()
}

fn small_boxes() -> Vec<BoxSpec> {
    let mut out = Vec::new();
    for (m, n) in [(1, 1), (1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (2, 1), (3, 1), (4, 1), (5, 1), (6, 1), (2, 2)] {
        out.push(BoxSpec::new(v(0, 0), m, n).unwrap());
        out.push(BoxSpec::anchored(1, 0, m, n).unwrap());
    }
    out
}

#[test]
fn small_boxes_have_at_most_twelve_edges() {
    for bx in small_boxes() {
        let k = box_edges(&bx).len();
        assert!(k <= 12, "{bx}: {k}");
        assert_eq!(k, (2 * bx.half_width() as usize - 1) * (2 * bx.half_height() as usize - 1));
    }
}

#[test]
fn crossing_matches_enumeration_for_every_assignment() {
    for bx in small_boxes() {
        let edges = box_edges(&bx);
        for mask in 0u32..(1 << edges.len()) {
            let field: ExplicitField = edges
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let brute = !brute_crossings(&field, &bx).is_empty();
            assert_eq!(has_vertical_crossing(&field, &bx), brute, "{bx} mask {mask:b}");
            assert_eq!(leftmost_crossing_path(&field, &bx).is_some(), brute);
        }
    }
}

#[test]
fn box_geometry() {
    let bx = BoxSpec::new(v(0, 0), 2, 3).unwrap();
    assert_eq!((bx.x_min(), bx.x_max()), (-1, 2));
    assert_eq!((bx.bottom_row(), bx.top_row()), (-2, 3));
    assert_eq!(bx.row_vertices(-2).collect::<Vec<_>>(), vec![v(0, -2), v(2, -2)]);
    assert_eq!(bx.row_vertices(-1).collect::<Vec<_>>(), vec![v(-1, -1), v(1, -1)]);
    assert_eq!(bx.row_vertices(4).count(), 0);
    assert!(BoxSpec::new(v(0, 0), 0, 3).is_err());
    let r = BoxSpec::from_real(v(0, 0), 2.9, 3.1).unwrap();
    assert_eq!((r.half_width(), r.half_height()), (2, 3));
    assert!(BoxSpec::from_real(v(0, 0), 0.5, 3.0).is_err());
}

#[test]
fn reach_full_and_empty() {
    let bx = BoxSpec::new(v(0, 0), 4, 4).unwrap();
    let src = [v(1, -3)];
    let t = reach_up(&ConstantField(true), &bx, &src).unwrap();
    for y in bx.bottom_row()..=bx.top_row() {
        let k = y - bx.bottom_row();
        let want: Vec<_> = bx.row_vertices(y).filter(|u| (u.x - 1).abs() <= k).collect();
        assert_eq!(t.row(y), want, "row {y}");
    }
    let t = reach_up(&ConstantField(false), &bx, &src).unwrap();
    assert_eq!(t.row(-3), vec![v(1, -3)]);
    for y in -2..=4 {
        assert!(t.row(y).is_empty());
    }
    assert!(!t.top_row_nonempty());
    assert_eq!(
        reach_up(&ConstantField(true), &bx, &[v(0, 0)]).unwrap_err(),
        PercError::SourceNotInBottomRow(v(0, 0))
    );
}

#[test]
fn reach_on_hand_built_field() {
    let bx = BoxSpec::new(v(0, 0), 2, 2).unwrap();
    let mut f = ExplicitField::new();
    f.open(EdgeId::new(v(-1, -1), 1).unwrap())
        .open(EdgeId::new(v(0, 0), 1).unwrap())
        .open(EdgeId::new(v(1, 1), -1).unwrap())
        .open(EdgeId::new(v(1, -1), -1).unwrap());
    let t = reach_up(&f, &bx, &[v(-1, -1), v(1, -1)]).unwrap();
    assert_eq!(t.row(0), vec![v(0, 0)]);
    assert_eq!(t.row(1), vec![v(1, 1)]);
    assert_eq!(t.row(2), vec![v(0, 2)]);
    let w = t.witness(&f, v(0, 2)).unwrap();
    assert_eq!(w.bottom(), v(-1, -1)); // left predecessor preferred
    assert!(w.is_open_in(&f));
}

#[test]
fn leftmost_on_open_two_by_two() {
    let bx = BoxSpec::new(v(0, 0), 2, 2).unwrap();
    let path = leftmost_crossing_path(&ConstantField(true), &bx).unwrap();
    assert_eq!(path.vertices(), &[v(-1, -1), v(0, 0), v(-1, 1), v(0, 2)]);
    let right = rightmost_crossing_path(&ConstantField(true), &bx).unwrap();
    assert_eq!(right.vertices(), &[v(1, -1), v(2, 0), v(1, 1), v(2, 2)]);
    assert!(leftmost_crossing_path(&ConstantField(false), &bx).is_none());
}

#[test]
fn vertical_path_validation() {
    assert!(VerticalPath::new(vec![]).is_err());
    assert!(VerticalPath::new(vec![v(0, 0), v(2, 0)]).is_err());
    let p = VerticalPath::new(vec![v(0, 0), v(1, 1), v(0, 2)]).unwrap();
    assert_eq!(p.at_row(1), Some(v(1, 1)));
    assert_eq!(p.at_row(3), None);
    assert_eq!(p.at_row(-1), None);
    assert!(p.contains(v(0, 2)));
    assert!(!p.contains(v(2, 2)));
    assert_eq!(p.edges().count(), 2);
}

#[test]
fn crossing_extremes() {
    for (m, n) in [(1, 1), (3, 7), (10, 2)] {
        let bx = BoxSpec::new(v(4, 2), m, n).unwrap();
        assert!(has_vertical_crossing(&ConstantField(true), &bx));
        assert!(!has_vertical_crossing(&ConstantField(false), &bx));
    }
}

fn brute_lpp<F: EdgeField>(field: &F, start: Vertex, len: u32) -> u64 {
    (0u32..1 << len)
        .map(|mask| {
            let mut cur = start;
            let mut total = 0;
            for k in 0..len {
                let dx = if mask >> k & 1 == 1 { 1 } else { -1 };
                total += field.cost(EdgeId::new(cur, dx).unwrap()) as u64;
                cur = Vertex { x: cur.x + dx, y: cur.y + 1 };
            }
            total
        })
        .max()
        .unwrap()
}

#[test]
fn lpp_matches_enumeration() {
    for seed in 0..6u64 {
        let c = Configuration::new(seed, 0.5).unwrap();
        for len in 1..=14 {
            assert_eq!(
                max_oriented_path_cost(&c, v(3, -7), len).unwrap(),
                brute_lpp(&c, v(3, -7), len),
                "seed {seed} len {len}"
            );
        }
    }
    assert_eq!(max_oriented_path_cost(&ConstantField(true), v(0, 0), 37).unwrap(), 37);
    assert_eq!(max_oriented_path_cost(&ConstantField(false), v(0, 0), 37).unwrap(), 0);
    assert_eq!(max_oriented_path_cost(&ConstantField(true), v(0, 0), 0), Err(PercError::ZeroLength));
}

#[test]
fn lpp_monotone_and_superadditive() {
    for seed in 0..5u64 {
        let c = Configuration::new(seed, 0.4).unwrap();
        let start = v(0, 0);
        let mut prev = 0;
        for len in 1..=40u32 {
            let cur = max_oriented_path_cost(&c, start, len).unwrap();
            assert!(cur >= prev);
            prev = cur;
        }
        // cost(a + b) >= cost(a to some endpoint) + cost(b from there), maximized
        for (a, b) in [(5u32, 7u32), (10, 10), (3, 20)] {
            let whole = max_oriented_path_cost(&c, start, a + b).unwrap();
            let best_split = (0..=a as i64)
                .map(|j| {
                    let mid = Vertex { x: -(a as i64) + 2 * j, y: a as i64 };
                    // first segment restricted to end at mid: brute force for small a
                    let first = (0u32..1 << a)
                        .filter(|mask| mask.count_ones() as i64 == j)
                        .map(|mask| {
                            let mut cur = start;
                            let mut t = 0;
                            for k in 0..a {
                                let dx = if mask >> k & 1 == 1 { 1 } else { -1 };
                                t += c.cost(EdgeId::new(cur, dx).unwrap()) as u64;
                                cur = Vertex { x: cur.x + dx, y: cur.y + 1 };
                            }
                            t
                        })
                        .max()
                        .unwrap();
                    first + max_oriented_path_cost(&c, mid, b).unwrap()
                })
                .max()
                .unwrap();
            assert_eq!(whole, best_split);
        }
    }
}

#[test]
fn zero_square_checks() {
    assert!(is_zero_square(&ConstantField(false), (1, 0)).unwrap());
    assert!(!is_zero_square(&ConstantField(true), (0, 3)).unwrap());
    assert_eq!(is_zero_square(&ConstantField(false), (0, 0)), Err(PercError::NotAFaceCenter(0, 0)));
    let face = Face::new(1, 0).unwrap();
    for e in face.edges() {
        let mut f = ExplicitField::new();
        f.open(e);
        assert!(!is_zero_square(&f, (1, 0)).unwrap());
        let ends = e.endpoints();
        for u in ends {
            assert!([face.left(), face.right(), face.top(), face.bottom()].contains(&u));
        }
    }
}

#[test]
fn zero_chain_extremes() {
    let window = BoxSpec::new(v(0, 0), 10, 3).unwrap();
    let chain = find_zero_chain(&ConstantField(false), &window).unwrap();
    assert!(chain.is_valid_in(&ConstantField(false)));
    assert!(chain.centers()[0].x <= window.x_min() + 1);
    assert!(chain.centers().last().unwrap().x >= window.x_max() - 1);
    assert!(find_zero_chain(&ConstantField(true), &window).is_none());
}

/// Union-find oracle over the 0-square adjacency graph.
fn oracle_chain_exists<F: EdgeField>(field: &F, window: &BoxSpec) -> bool {
    let faces: Vec<(i64, i64)> = (window.bottom_row()..=window.top_row())
        .flat_map(|y| (window.x_min()..=window.x_max()).map(move |x| (x, y)))
        .filter(|&(x, y)| !is_vertex(x, y) && is_zero_square(field, (x, y)).unwrap())
        .collect();
    let mut parent: Vec<usize> = (0..faces.len()).collect();
    fn find(p: &mut Vec<usize>, i: usize) -> usize {
        if p[i] != i {
            let r = find(p, p[i]);
            p[i] = r;
        }
        p[i]
    }
    for i in 0..faces.len() {
        for j in 0..i {
            let (a, b) = (faces[i], faces[j]);
            let d = (a.0 - b.0, a.1 - b.1);
            if Face::NEIGHBOR_OFFSETS.contains(&d) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    for i in 0..faces.len() {
        for j in 0..faces.len() {
            if faces[i].0 <= window.x_min() + 1
                && faces[j].0 >= window.x_max() - 1
                && find(&mut parent, i) == find(&mut parent, j)
            {
                return true;
            }
        }
    }
    false
}

#[test]
fn zero_chain_matches_union_find() {
    let windows = [
        BoxSpec::new(v(0, 0), 4, 2).unwrap(),
        BoxSpec::new(v(0, 0), 5, 2).unwrap(),
        BoxSpec::new(v(2, 0), 3, 3).unwrap(),
        BoxSpec::anchored(1, 0, 5, 2).unwrap(),
    ];
    let mut found = 0;
    for window in windows {
        let faces = (window.bottom_row()..=window.top_row())
            .flat_map(|y| (window.x_min()..=window.x_max()).map(move |x| (x, y)))
            .filter(|&(x, y)| !is_vertex(x, y))
            .count();
        assert!(faces <= 20);
        for seed in 0..400u64 {
            let c = Configuration::new(seed, 0.15).unwrap();
            let got = find_zero_chain(&c, &window);
            assert_eq!(got.is_some(), oracle_chain_exists(&c, &window), "{window} seed {seed}");
            if let Some(chain) = got {
                found += 1;
                assert!(chain.is_valid_in(&c));
            }
        }
    }
    assert!(found > 100 && found < 1500, "found {found}");
}

fn lattice_offset() -> impl Strategy<Value = (i64, i64)> {
    (-50i64..50, -50i64..50).prop_map(|(a, b)| (a + b, a - b))
}

proptest! {
    #[test]
    fn crossing_is_translation_equivariant(seed in any::<u64>(), (dx, dy) in lattice_offset(),
                                           m in 1u32..6, n in 1u32..6, p in 0.3f64..0.9) {
        let c = Configuration::new(seed, p).unwrap();
        let shifted = c.translated(dx, dy).unwrap();
        let bx = BoxSpec::new(v(0, 0), m, n).unwrap();
        let moved = bx.translate(dx, dy);
        prop_assert_eq!(has_vertical_crossing(&shifted, &bx), has_vertical_crossing(&c, &moved));
        let a = leftmost_crossing_path(&shifted, &bx).map(|p| p.vertices().to_vec());
        let b = leftmost_crossing_path(&c, &moved)
            .map(|p| p.vertices().iter().map(|u| Vertex { x: u.x - dx, y: u.y - dy }).collect::<Vec<_>>());
        prop_assert_eq!(a, b);
        prop_assert_eq!(
            max_oriented_path_cost(&shifted, v(0, 0), 8).unwrap(),
            max_oriented_path_cost(&c, v(dx, dy), 8).unwrap()
        );
    }

    #[test]
    fn leftmost_is_pointwise_left_of_all_crossings(seed in any::<u64>(), m in 1u32..4, n in 1u32..4,
                                                   p in 0.4f64..0.9) {
        let c = Configuration::new(seed, p).unwrap();
        let bx = BoxSpec::new(v(0, 0), m, n).unwrap();
        let all = brute_crossings(&c, &bx);
        match leftmost_crossing_path(&c, &bx) {
            None => prop_assert!(all.is_empty()),
            Some(path) => {
                prop_assert!(path.is_open_in(&c));
                prop_assert_eq!(path.bottom().y, bx.bottom_row());
                prop_assert_eq!(path.top().y, bx.top_row());
                prop_assert!(path.vertices().iter().all(|u| bx.contains(*u)));
                prop_assert!(all.iter().any(|q| q.as_slice() == path.vertices()));
                for q in &all {
                    for (a, b) in path.vertices().iter().zip(q) {
                        prop_assert!(a.x <= b.x);
                    }
                }
                let right = rightmost_crossing_path(&c, &bx).unwrap();
                for q in &all {
                    for (a, b) in right.vertices().iter().zip(q) {
                        prop_assert!(a.x >= b.x);
                    }
                }
            }
        }
    }

    #[test]
    fn reach_is_sound_and_complete(seed in any::<u64>(), m in 1u32..4, n in 1u32..4, p in 0.3f64..0.9,
                                   pick in any::<u64>()) {
        let c = Configuration::new(seed, p).unwrap();
        let bx = BoxSpec::new(v(0, 0), m, n).unwrap();
        let bottom: Vec<_> = bx.row_vertices(bx.bottom_row()).collect();
        let sources: Vec<_> = bottom.iter().enumerate()
            .filter(|(i, _)| pick >> i & 1 == 1).map(|(_, &u)| u).collect();
        let table = reach_up(&c, &bx, &sources).unwrap();
        // completeness: every vertex on an enumerated open path is reported
        let mut seen = std::collections::HashSet::new();
        for &s in &sources {
            seen.insert(s);
            fn walk<F: EdgeField>(f: &F, bx: &BoxSpec, u: Vertex, seen: &mut std::collections::HashSet<Vertex>) {
                for dx in [-1, 1] {
                    let w = Vertex { x: u.x + dx, y: u.y + 1 };
                    if bx.contains(w) && f.is_open(EdgeId::new(u, dx).unwrap()) && seen.insert(w) {
                        walk(f, bx, w, seen);
                    }
                }
            }
            walk(&c, &bx, s, &mut seen);
        }
        for y in bx.bottom_row()..=bx.top_row() {
            for u in bx.row_vertices(y) {
                prop_assert_eq!(table.is_reachable(u), seen.contains(&u));
                if table.is_reachable(u) {
                    let w = table.witness(&c, u).unwrap();
                    prop_assert!(w.is_open_in(&c));
                    prop_assert!(sources.contains(&w.bottom()));
                    prop_assert_eq!(w.top(), u);
                }
            }
        }
    }

    #[test]
    fn crossing_monotone_in_p(seed in any::<u64>(), m in 1u32..8, n in 1u32..8) {
        let bx = BoxSpec::new(v(0, 0), m, n).unwrap();
        let mut prev = false;
        for k in 0..=10 {
            let c = Configuration::new(seed, k as f64 / 10.0).unwrap();
            let now = has_vertical_crossing(&c, &bx);
            prop_assert!(!prev || now);
            prev = now;
        }
    }
}
