use super::{Adjacency, Multigraph};

struct LowLink {
    components: usize,
    has_cut_vertex: bool,
    has_bridge: bool,
}

/// Iterative Tarjan low-link over edge ids. Skipping the parent *edge*
/// rather than the parent vertex makes parallel edges count as back edges,
/// so they are never reported as bridges. Loops are ignored.
fn low_link(adj: &Adjacency) -> LowLink {
    let n = adj.len();
    const UNSEEN: usize = usize::MAX;
    let mut disc = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut out = LowLink { components: 0, has_cut_vertex: false, has_bridge: false };
    let mut timer = 0;
    // (vertex, edge id used to enter it, next incidence index)
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();

    for root in 0..n {
        if disc[root] != UNSEEN {
            continue;
        }
        out.components += 1;
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        let mut root_children = 0;
        stack.push((root, usize::MAX, 0));

        while let Some(&mut (v, via, ref mut next)) = stack.last_mut() {
            let inc = adj.at(v);
            if *next < inc.len() {
                let (w, e) = inc[*next];
                *next += 1;
                if w == v || e == via {
                    continue;
                }
                if disc[w] == UNSEEN {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w, e, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(parent, _, _)) = stack.last() {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] > disc[parent] {
                        out.has_bridge = true;
                    }
                    if parent != root && low[v] >= disc[parent] {
                        out.has_cut_vertex = true;
                    }
                }
            }
        }
        if root_children >= 2 {
            out.has_cut_vertex = true;
        }
    }
    out
}

pub fn is_connected(g: &Multigraph) -> bool {
    g.vertex_count() > 0 && low_link(&g.adjacency()).components == 1
}

/// At least three vertices, connected and without a cut-vertex.
/// Loops and edge multiplicities play no role.
pub fn is_two_connected(g: &Multigraph) -> bool {
    if g.vertex_count() < 3 {
        return false;
    }
    let ll = low_link(&g.adjacency());
    ll.components == 1 && !ll.has_cut_vertex
}

/// Connected and bridgeless. A single vertex counts as 2-edge-connected
/// (vacuously); the empty graph does not. Parallel edges and loops are
/// never bridges.
pub fn is_two_edge_connected(g: &Multigraph) -> bool {
    match g.vertex_count() {
        0 => false,
        1 => true,
        _ => {
            let ll = low_link(&g.adjacency());
            ll.components == 1 && !ll.has_bridge
        }
    }
}

/// No loops and no parallel edges.
pub fn is_simple(g: &Multigraph) -> bool {
    if g.edges().iter().any(|&(u, v)| u == v) {
        return false;
    }
    let mut keys: Vec<u64> = g.edges().iter().map(|&(u, v)| ((u as u64) << 32) | v as u64).collect();
    keys.sort_unstable();
    keys.windows(2).all(|w| w[0] != w[1])
}
