//! Planarity witnesses: a K5 subgraph, or a checked straight-line drawing.

use super::brute::adjacent;

/// Five pairwise adjacent vertices, searched among 0 and its neighbors
/// (the units).
pub fn k5_witness(n: u64) -> Option<[u64; 5]> {
    let candidates: Vec<u64> = (0..n).filter(|&a| a == 0 || adjacent(0, a, n)).collect();
    let mut chosen = Vec::with_capacity(5);
    fn grow(n: u64, cands: &[u64], start: usize, chosen: &mut Vec<u64>) -> bool {
        if chosen.len() == 5 {
            return true;
        }
        for i in start..cands.len() {
            let v = cands[i];
            if chosen.iter().all(|&u| adjacent(u, v, n)) {
                chosen.push(v);
                if grow(n, cands, i + 1, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    grow(n, &candidates, 0, &mut chosen)
        .then(|| [chosen[0], chosen[1], chosen[2], chosen[3], chosen[4]])
}

/// Hand-placed vertex coordinates for the small planar cases.
pub fn fixture(n: u64) -> Option<&'static [(i64, i64)]> {
    match n {
        2 => Some(&[(0, 0), (1, 0)]),
        3 => Some(&[(0, 0), (2, 0), (1, 2)]),
        4 => Some(&[(0, 0), (1, 0), (1, 1), (0, 1)]),
        // Units 1 and 5 above and below a row holding 0, 2, 3, 4.
        6 => Some(&[(-3, 0), (0, 10), (1, 0), (3, 0), (5, 0), (0, -10)]),
        _ => None,
    }
}

fn orient(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> i64 {
    ((b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)).signum()
}

fn on_segment(a: (i64, i64), b: (i64, i64), p: (i64, i64)) -> bool {
    orient(a, b, p) == 0
        && p.0 >= a.0.min(b.0)
        && p.0 <= a.0.max(b.0)
        && p.1 >= a.1.min(b.1)
        && p.1 <= a.1.max(b.1)
}

/// Whether two closed segments meet anywhere besides a shared endpoint.
fn segments_conflict(s: ((i64, i64), (i64, i64)), t: ((i64, i64), (i64, i64))) -> bool {
    let (a, b) = s;
    let (c, d) = t;
    let shared = [a, b].iter().filter(|p| **p == c || **p == d).count();
    if shared == 2 {
        return true;
    }
    if shared == 1 {
        // Touching at the common endpoint is fine unless the segments overlap.
        let common = if a == c || a == d { a } else { b };
        let s_other = if common == a { b } else { a };
        let t_other = if common == c { d } else { c };
        return orient(common, s_other, t_other) == 0
            && (on_segment(common, s_other, t_other) || on_segment(common, t_other, s_other));
    }
    let (o1, o2, o3, o4) = (
        orient(a, b, c),
        orient(a, b, d),
        orient(c, d, a),
        orient(c, d, b),
    );
    if o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 {
        return true;
    }
    on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b)
}

/// Checks the fixture drawing against the gcd edges: distinct points, no
/// edge through a vertex, no crossings, and `|E| <= 3n - 6`. `None` when
/// there is no fixture for `n`.
pub fn fixture_embedding_ok(n: u64) -> Option<bool> {
    let pts = fixture(n)?;
    if pts.len() as u64 != n {
        return Some(false);
    }
    let mut edges = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            if adjacent(a, b, n) {
                edges.push((pts[a as usize], pts[b as usize]));
            }
        }
    }
    let distinct = (0..pts.len()).all(|i| (i + 1..pts.len()).all(|j| pts[i] != pts[j]));
    let bound = n < 3 || edges.len() as u64 <= 3 * n - 6;
    let through_vertex = edges
        .iter()
        .any(|&(a, b)| pts.iter().any(|&p| p != a && p != b && on_segment(a, b, p)));
    let crossing = (0..edges.len())
        .any(|i| (i + 1..edges.len()).any(|j| segments_conflict(edges[i], edges[j])));
    Some(distinct && bound && !through_vertex && !crossing)
}
