//! Reverse Cuthill-McKee ordering for bandwidth reduction.

use std::collections::VecDeque;

use super::SparseMatrix;

fn adjacency(a: &SparseMatrix) -> Vec<Vec<usize>> {
    let n = a.rows();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        let (idx, _) = a.row(i);
        for &j in idx {
            if i != j {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    for list in adj.iter_mut() {
        list.sort_unstable();
        list.dedup();
    }
    adj
}

fn bfs_levels(adj: &[Vec<usize>], start: usize, seen: &mut [bool]) -> Vec<usize> {
    let mut order = vec![start];
    seen[start] = true;
    let mut head = 0;
    while head < order.len() {
        let v = order[head];
        head += 1;
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                order.push(w);
            }
        }
    }
    order
}

/// `perm[new] = old`.
pub fn reverse_cuthill_mckee(a: &SparseMatrix) -> Vec<usize> {
    let n = a.rows();
    let adj = adjacency(a);
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);

    while order.len() < n {
        // lowest-degree unplaced vertex, then hop to the far end of its component
        let seed = (0..n)
            .filter(|&v| !placed[v])
            .min_by_key(|&v| (degree[v], v))
            .unwrap();
        let mut scratch = placed.clone();
        let component = bfs_levels(&adj, seed, &mut scratch);
        let start = *component.last().unwrap();

        let mut queue = VecDeque::from([start]);
        placed[start] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = adj[v].iter().copied().filter(|&w| !placed[w]).collect();
            next.sort_by_key(|&w| (degree[w], w));
            for w in next {
                placed[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

/// Lower and upper bandwidth of `a` after symmetric permutation `perm`.
pub fn bandwidths(a: &SparseMatrix, perm: &[usize]) -> (usize, usize) {
    let mut inverse = vec![0usize; perm.len()];
    for (new, &old) in perm.iter().enumerate() {
        inverse[old] = new;
    }
    let (mut lower, mut upper) = (0usize, 0usize);
    for i in 0..a.rows() {
        let (idx, _) = a.row(i);
        let pi = inverse[i];
        for &j in idx {
            let pj = inverse[j];
            if pi > pj {
                lower = lower.max(pi - pj);
            } else {
                upper = upper.max(pj - pi);
            }
        }
    }
    (lower, upper)
}
