//! Exact searches on graphs of at most 64 vertices, one bitmask per vertex.

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

/// Maximum clique size by Bron–Kerbosch with pivoting and a size bound.
pub fn max_clique(adj: &[u64]) -> u64 {
    fn expand(adj: &[u64], size: u32, p: u64, mut x: u64, best: &mut u32) {
        if p == 0 {
            if x == 0 {
                *best = (*best).max(size);
            }
            return;
        }
        if size + p.count_ones() <= *best {
            return;
        }
        let pivot = bits(p | x)
            .max_by_key(|&u| (p & adj[u]).count_ones())
            .expect("p is nonempty");
        let mut p = p;
        for v in bits(p & !adj[pivot]) {
            expand(adj, size + 1, p & adj[v], x & adj[v], best);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }
    let all = full_mask(adj.len());
    let mut best = 0;
    expand(adj, 0, all, 0, &mut best);
    u64::from(best)
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Maximum independent set size, as the clique number of the complement.
pub fn independence_number(adj: &[u64]) -> u64 {
    let all = full_mask(adj.len());
    let complement: Vec<u64> = adj
        .iter()
        .enumerate()
        .map(|(v, &m)| !m & all & !(1 << v))
        .collect();
    max_clique(&complement)
}

/// Exact chromatic number by DSATUR branch and bound, seeded with the
/// clique number as a lower bound.
pub fn chromatic_number(adj: &[u64]) -> u64 {
    let n = adj.len();
    if n == 0 {
        return 0;
    }
    let lower = max_clique(adj) as usize;
    let mut best = n;
    let mut colors = vec![usize::MAX; n];
    // used[c] is the set of vertices with color c.
    let mut used = vec![0u64; n];
    dsatur(adj, &mut colors, &mut used, 0, 0, lower, &mut best);
    best as u64
}

fn dsatur(
    adj: &[u64],
    colors: &mut [usize],
    used: &mut [u64],
    colored: usize,
    ncolors: usize,
    lower: usize,
    best: &mut usize,
) -> bool {
    let n = adj.len();
    if colored == n {
        *best = ncolors;
        return ncolors <= lower;
    }
    // Uncolored vertex with the most distinct neighbor colors, ties broken
    // by uncolored degree.
    let uncolored: u64 = (0..n)
        .filter(|&v| colors[v] == usize::MAX)
        .fold(0, |m, v| m | 1 << v);
    let v = bits(uncolored)
        .max_by_key(|&v| {
            let sat = (0..ncolors).filter(|&c| used[c] & adj[v] != 0).count();
            (sat, (adj[v] & uncolored).count_ones(), std::cmp::Reverse(v))
        })
        .expect("an uncolored vertex remains");
    for c in 0..=ncolors {
        let next = ncolors.max(c + 1);
        if next >= *best {
            break;
        }
        if used[c] & adj[v] != 0 {
            continue;
        }
        colors[v] = c;
        used[c] |= 1 << v;
        let done = dsatur(adj, colors, used, colored + 1, next, lower, best);
        used[c] &= !(1 << v);
        colors[v] = usize::MAX;
        if done {
            return true;
        }
    }
    false
}

/// Some Hamiltonian cycle starting at vertex 0, by depth-first search
/// preferring neighbors with the fewest unvisited neighbors.
pub fn hamiltonian_cycle(adj: &[u64]) -> Option<Vec<usize>> {
    let n = adj.len();
    if n < 3 {
        return None;
    }
    fn extend(adj: &[u64], path: &mut Vec<usize>, visited: u64, budget: &mut u64) -> bool {
        let n = adj.len();
        let last = *path.last().expect("nonempty path");
        if path.len() == n {
            return adj[last] & 1 != 0;
        }
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let open = adj[last] & !visited;
        let mut next: Vec<usize> = bits(open).collect();
        next.sort_by_key(|&w| ((adj[w] & !visited).count_ones(), w));
        for w in next {
            path.push(w);
            if extend(adj, path, visited | 1 << w, budget) {
                return true;
            }
            path.pop();
        }
        false
    }
    let mut path = vec![0];
    let mut budget = 5_000_000;
    extend(adj, &mut path, 1, &mut budget).then_some(path)
}
