use serde::{Deserialize, Serialize};

use crate::graph::{NodeId, WeightedDigraph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentSummary {
    pub scc_count: usize,
    pub largest_scc_size: usize,
    pub wcc_count: usize,
    pub largest_wcc_size: usize,
    /// SCC index per node, numbered in completion order.
    pub scc_membership: Vec<usize>,
    /// WCC index per node, numbered by smallest member.
    pub wcc_membership: Vec<usize>,
}

impl ComponentSummary {
    /// Members of the largest weakly connected component; ties go to the
    /// component with the smallest node id.
    pub fn largest_wcc_nodes(&self) -> Vec<NodeId> {
        largest_members(&self.wcc_membership, self.wcc_count)
    }

    pub fn largest_scc_nodes(&self) -> Vec<NodeId> {
        largest_members(&self.scc_membership, self.scc_count)
    }
}

pub(crate) fn largest_members(membership: &[usize], count: usize) -> Vec<NodeId> {
    if count == 0 {
        return Vec::new();
    }
    let mut sizes = vec![0usize; count];
    let mut first = vec![usize::MAX; count];
    for (v, &c) in membership.iter().enumerate() {
        sizes[c] += 1;
        first[c] = first[c].min(v);
    }
    let best = (0..count)
        .max_by(|&a, &b| sizes[a].cmp(&sizes[b]).then(first[b].cmp(&first[a])))
        .unwrap();
    membership
        .iter()
        .enumerate()
        .filter(|(_, &c)| c == best)
        .map(|(v, _)| NodeId::from(v))
        .collect()
}

/// Tarjan's strongly connected components, iterative so deep graphs do not
/// overflow the stack.
pub(crate) fn strongly_connected(g: &WeightedDigraph) -> (Vec<usize>, usize) {
    const UNVISITED: u32 = u32::MAX;
    let n = g.node_count();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<NodeId> = Vec::new();
    let mut component = vec![usize::MAX; n];
    let mut count = 0usize;
    let mut next_index = 0u32;
    // (node, position in its out-neighbor list)
    let mut call: Vec<(NodeId, usize)> = Vec::new();

    for root in g.nodes() {
        if index[root.index()] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root.index()] = next_index;
        low[root.index()] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root.index()] = true;

        while let Some(&(v, pos)) = call.last() {
            let neighbors = g.out_neighbors(v);
            if pos < neighbors.len() {
                let w = neighbors[pos];
                call.last_mut().unwrap().1 += 1;
                if index[w.index()] == UNVISITED {
                    index[w.index()] = next_index;
                    low[w.index()] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w.index()] = true;
                    call.push((w, 0));
                } else if on_stack[w.index()] {
                    low[v.index()] = low[v.index()].min(index[w.index()]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent.index()] = low[parent.index()].min(low[v.index()]);
            }
            if low[v.index()] == index[v.index()] {
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w.index()] = false;
                    component[w.index()] = count;
                    if w == v {
                        break;
                    }
                }
                count += 1;
            }
        }
    }
    (component, count)
}

fn find(parent: &mut [u32], mut v: u32) -> u32 {
    while parent[v as usize] != v {
        let up = parent[parent[v as usize] as usize];
        parent[v as usize] = up;
        v = up;
    }
    v
}

/// Weak components by union-find over edges in both directions. Component
/// numbers follow the smallest member id.
pub(crate) fn weakly_connected(g: &WeightedDigraph) -> (Vec<usize>, usize) {
    let n = g.node_count();
    let mut parent: Vec<u32> = (0..n as u32).collect();
    for e in g.edges() {
        let a = find(&mut parent, e.src.0);
        let b = find(&mut parent, e.dst.0);
        if a != b {
            // Smaller id becomes the root.
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            parent[hi as usize] = lo;
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    let membership = (0..n)
        .map(|v| {
            let r = find(&mut parent, v as u32) as usize;
            if label[r] == usize::MAX {
                label[r] = count;
                count += 1;
            }
            label[r]
        })
        .collect();
    (membership, count)
}

pub fn connected_components(g: &WeightedDigraph) -> ComponentSummary {
    let (scc_membership, scc_count) = strongly_connected(g);
    let (wcc_membership, wcc_count) = weakly_connected(g);
    let largest = |membership: &[usize], count: usize| {
        let mut sizes = vec![0usize; count];
        for &c in membership {
            sizes[c] += 1;
        }
        sizes.into_iter().max().unwrap_or(0)
    };
    ComponentSummary {
        scc_count,
        largest_scc_size: largest(&scc_membership, scc_count),
        wcc_count,
        largest_wcc_size: largest(&wcc_membership, wcc_count),
        scc_membership,
        wcc_membership,
    }
}
