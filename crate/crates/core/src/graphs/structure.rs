use std::collections::VecDeque;

use super::Multigraph;

/// Maximal sub-multigraph of minimum degree at least 2 (loops count 2),
/// found by repeatedly deleting vertices of degree at most 1.
pub fn two_core(g: &Multigraph) -> Multigraph {
    let n = g.vertex_count();
    let adj = g.adjacency();
    let mut deg = g.degrees();
    let mut alive = vec![true; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut queued: Vec<bool> = deg.iter().map(|&d| d <= 1).collect();
    while let Some(v) = queue.pop_front() {
        alive[v] = false;
        for &(w, _) in adj.at(v) {
            if w != v && alive[w] {
                deg[w] -= 1;
                if deg[w] <= 1 && !queued[w] {
                    queued[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    g.induced(&alive)
}

/// Component id for every vertex, and the number of components.
fn components(g: &Multigraph) -> (Vec<usize>, usize) {
    let n = g.vertex_count();
    let adj = g.adjacency();
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    let mut stack = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = count;
        stack.push(s);
        while let Some(v) = stack.pop() {
            for &(w, _) in adj.at(v) {
                if comp[w] == usize::MAX {
                    comp[w] = count;
                    stack.push(w);
                }
            }
        }
        count += 1;
    }
    (comp, count)
}

/// The 2-core with every cycle component (all degrees exactly 2) removed.
pub fn pre_kernel(g: &Multigraph) -> Multigraph {
    let core = two_core(g);
    let deg = core.degrees();
    let (comp, count) = components(&core);
    let mut has_branch = vec![false; count];
    for (v, &d) in deg.iter().enumerate() {
        if d != 2 {
            has_branch[comp[v]] = true;
        }
    }
    let keep: Vec<bool> = comp.iter().map(|&c| has_branch[c]).collect();
    core.induced(&keep)
}

/// The pre-kernel with each maximal path of degree-2 vertices contracted
/// to a single edge. Output degrees are all at least 3; loops arise from
/// paths that return to their start and parallel edges from distinct
/// paths between the same pair.
pub fn kernel(g: &Multigraph) -> Multigraph {
    let pk = pre_kernel(g);
    let deg = pk.degrees();
    let adj = pk.adjacency();
    let n = pk.vertex_count();

    let mut remap = vec![usize::MAX; n];
    let mut labels = Vec::new();
    for v in 0..n {
        if deg[v] >= 3 {
            remap[v] = labels.len();
            labels.push(pk.label(v));
        }
    }

    let mut used = vec![false; pk.edge_count()];
    let mut edges = Vec::new();
    for v in 0..n {
        if deg[v] < 3 {
            continue;
        }
        for &(first, e0) in adj.at(v) {
            if used[e0] {
                continue;
            }
            used[e0] = true;
            let (mut cur, mut via) = (first, e0);
            while deg[cur] == 2 {
                let &(next, e) = adj
                    .at(cur)
                    .iter()
                    .find(|&&(_, e)| e != via)
                    .expect("degree-2 vertex has two incidences");
                used[e] = true;
                cur = next;
                via = e;
            }
            let (a, b) = (remap[v], remap[cur]);
            edges.push((a.min(b), a.max(b)));
        }
    }
    Multigraph::from_parts(labels, edges)
}
