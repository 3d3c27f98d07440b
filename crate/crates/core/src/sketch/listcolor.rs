//! List coloring of small conflict graphs: randomized greedy restarts, then
//! bounded backtracking.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::Graph;

/// Assigns each vertex a color from its list so that adjacent vertices
/// differ. `orders` yields the vertex order for each greedy attempt.
///
/// Returns `None` when `retries` greedy passes and `budget` backtracking
/// expansions all fail.
pub fn list_color(
    g: &Graph,
    lists: &[&[u32]],
    retries: usize,
    budget: u64,
    mut orders: impl FnMut(usize) -> Vec<u32>,
) -> Option<Vec<u32>> {
    let n = g.n();
    assert_eq!(lists.len(), n);
    let mut color = vec![0u32; n];
    for attempt in 0..retries {
        color.iter_mut().for_each(|c| *c = 0);
        let order = orders(attempt);
        if greedy_pass(g, lists, &order, &mut color) {
            return Some(color);
        }
    }
    backtrack(g, lists, budget)
}

fn greedy_pass(g: &Graph, lists: &[&[u32]], order: &[u32], color: &mut [u32]) -> bool {
    for &v in order {
        let v = v as usize;
        let pick = lists[v].iter().copied().find(|&c| g.neighbors(v).iter().all(|&w| color[w as usize] != c));
        match pick {
            Some(c) => color[v] = c,
            None => return false,
        }
    }
    // Vertices the order skipped.
    for v in 0..g.n() {
        if color[v] == 0 {
            match lists[v].iter().copied().find(|&c| g.neighbors(v).iter().all(|&w| color[w as usize] != c)) {
                Some(c) => color[v] = c,
                None => return false,
            }
        }
    }
    true
}

fn backtrack(g: &Graph, lists: &[&[u32]], budget: u64) -> Option<Vec<u32>> {
    let n = g.n();
    let mut color = vec![0u32; n];
    // Isolated vertices are free; the rest are searched by descending degree.
    let mut active: Vec<usize> = Vec::new();
    for v in 0..n {
        if g.degree(v) == 0 {
            color[v] = *lists[v].first()?;
        } else {
            active.push(v);
        }
    }
    active.sort_by_key(|&v| (core::cmp::Reverse(g.degree(v)), v));
    let cands: Vec<Vec<u32>> = active
        .iter()
        .map(|&v| {
            let mut l = lists[v].to_vec();
            l.sort_unstable();
            l.dedup();
            l
        })
        .collect();
    // next[i] is the index of the next candidate to try at depth i.
    let mut next = vec![0usize; active.len()];
    let mut depth = 0usize;
    let mut spent = 0u64;
    while depth < active.len() {
        let v = active[depth];
        let mut placed = false;
        while next[depth] < cands[depth].len() {
            let c = cands[depth][next[depth]];
            next[depth] += 1;
            spent += 1;
            if spent > budget {
                return None;
            }
            if g.neighbors(v).iter().all(|&w| color[w as usize] != c) {
                color[v] = c;
                placed = true;
                break;
            }
        }
        if placed {
            depth += 1;
        } else {
            color[v] = 0;
            next[depth] = 0;
            if depth == 0 {
                return None;
            }
            depth -= 1;
            color[active[depth]] = 0;
        }
    }
    Some(color)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn ascending(n: usize) -> impl FnMut(usize) -> Vec<u32> {
        move |_| (0..n as u32).collect()
    }

    #[test]
    fn greedy_succeeds_when_lists_are_roomy() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let l: [&[u32]; 3] = [&[1, 2, 3], &[1, 2, 3], &[1, 2, 3]];
        let c = list_color(&g, &l, 1, 0, ascending(3)).unwrap();
        assert_eq!(c, vec![1, 2, 3]);
    }

    #[test]
    fn backtracking_rescues_bad_greedy_order() {
        // Path 0-1-2: greedy in ascending order gives 0 color 1, 1 color 2, then 2 is stuck.
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let l: [&[u32]; 3] = [&[1, 2], &[1, 2], &[2]];
        assert!(list_color(&g, &l, 0, 0, ascending(3)).is_none());
        let c = list_color(&g, &l, 1, 100, ascending(3)).unwrap();
        assert_eq!(c, vec![2, 1, 2]);
    }

    #[test]
    fn infeasible_instance_fails() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let l: [&[u32]; 2] = [&[4], &[4]];
        assert!(list_color(&g, &l, 4, 1000, ascending(2)).is_none());
    }

    #[test]
    fn budget_is_respected() {
        // K4 with 3-color lists is infeasible; a tiny budget gives up early.
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let l: [&[u32]; 4] = [&[1, 2, 3]; 4];
        assert!(list_color(&g, &l, 0, 5, ascending(4)).is_none());
        assert!(list_color(&g, &l, 0, 1_000_000, ascending(4)).is_none());
    }
}
