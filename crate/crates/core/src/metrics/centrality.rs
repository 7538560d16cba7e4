use rand::seq::index;
use serde::{Deserialize, Serialize};

use super::{fold_sources, Bfs, CentralityMode, EXACT_NODE_LIMIT, UNREACHED};
use crate::error::{Error, Result};
use crate::graph::{NodeId, WeightedDigraph};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosenessVariant {
    Standard,
    WassermanFaust,
}

/// Sources to run from and the factor that scales their partial sums up to
/// all `N` sources.
fn sources_for(
    g: &WeightedDigraph,
    mode: CentralityMode,
    what: &'static str,
) -> Result<(Vec<NodeId>, f64)> {
    let n = g.node_count();
    match mode {
        CentralityMode::Exact => {
            if n > EXACT_NODE_LIMIT {
                return Err(Error::GraphTooLargeForExact {
                    what,
                    node_count: n,
                    limit: EXACT_NODE_LIMIT,
                });
            }
            Ok((g.nodes().collect(), 1.0))
        }
        CentralityMode::Pivot { sources, seed } => {
            if sources == 0 {
                return Err(Error::InvalidConfig(
                    "pivot mode needs at least one source".into(),
                ));
            }
            if sources >= n {
                return Ok((g.nodes().collect(), 1.0));
            }
            let mut rng = rng::seeded(seed, rng::stream::PIVOTS);
            let mut picked: Vec<usize> = index::sample(&mut rng, n, sources).into_vec();
            picked.sort_unstable();
            Ok((
                picked.into_iter().map(NodeId::from).collect(),
                n as f64 / sources as f64,
            ))
        }
    }
}

/// Closeness over incoming distances: node `i` is scored from the nodes
/// that can reach it. Nodes reached by nobody score 0.
pub fn closeness(
    g: &WeightedDigraph,
    variant: ClosenessVariant,
    mode: CentralityMode,
) -> Result<Vec<f64>> {
    let n = g.node_count();
    let (sources, scale) = sources_for(g, mode, "closeness")?;
    // (distance sums, reacher counts) per target node
    let (dist_sum, reachers, _) = fold_sources(
        &sources,
        || (vec![0u64; n], vec![0u64; n], Bfs::new(n)),
        |acc, s| {
            acc.2.run(s, |v| g.out_neighbors(v));
            for &v in &acc.2.order[1..] {
                acc.0[v.index()] += acc.2.dist[v.index()] as u64;
                acc.1[v.index()] += 1;
            }
        },
        |total, part| {
            for (t, p) in total.0.iter_mut().zip(part.0) {
                *t += p;
            }
            for (t, p) in total.1.iter_mut().zip(part.1) {
                *t += p;
            }
        },
    );
    Ok((0..n)
        .map(|i| {
            if reachers[i] == 0 {
                return 0.0;
            }
            let standard = reachers[i] as f64 / dist_sum[i] as f64;
            match variant {
                ClosenessVariant::Standard => standard,
                ClosenessVariant::WassermanFaust => {
                    let reach = reachers[i] as f64 * scale;
                    standard * reach / (n - 1) as f64
                }
            }
        })
        .collect())
}

/// Unnormalized shortest-path betweenness by dependency accumulation over
/// directed hop distances.
pub fn betweenness(g: &WeightedDigraph, mode: CentralityMode) -> Result<Vec<f64>> {
    let n = g.node_count();
    let (sources, scale) = sources_for(g, mode, "betweenness")?;
    struct State {
        score: Vec<f64>,
        bfs: Bfs,
        sigma: Vec<f64>,
        delta: Vec<f64>,
    }
    let state = fold_sources(
        &sources,
        || State {
            score: vec![0.0; n],
            bfs: Bfs::new(n),
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
        },
        |st, s| {
            st.bfs.run(s, |v| g.out_neighbors(v));
            for &v in &st.bfs.order {
                st.sigma[v.index()] = 0.0;
                st.delta[v.index()] = 0.0;
            }
            st.sigma[s.index()] = 1.0;
            for &v in &st.bfs.order {
                let dv = st.bfs.dist[v.index()];
                let sv = st.sigma[v.index()];
                for &w in g.out_neighbors(v) {
                    if st.bfs.dist[w.index()] == dv + 1 {
                        st.sigma[w.index()] += sv;
                    }
                }
            }
            for &w in st.bfs.order.iter().rev() {
                let dw = st.bfs.dist[w.index()];
                let coeff = (1.0 + st.delta[w.index()]) / st.sigma[w.index()];
                for &v in g.in_neighbors(w) {
                    let dv = st.bfs.dist[v.index()];
                    if dv != UNREACHED && dv + 1 == dw {
                        st.delta[v.index()] += st.sigma[v.index()] * coeff;
                    }
                }
                if w != s {
                    st.score[w.index()] += st.delta[w.index()];
                }
            }
        },
        |total, part| {
            for (t, p) in total.score.iter_mut().zip(part.score) {
                *t += p;
            }
        },
    );
    let mut score = state.score;
    if scale != 1.0 {
        for x in &mut score {
            *x *= scale;
        }
    }
    Ok(score)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bidirected(n: usize, pairs: &[(usize, usize)]) -> WeightedDigraph {
        WeightedDigraph::from_index_edges(
            n,
            pairs.iter().flat_map(|&(a, b)| [(a, b, 1.0), (b, a, 1.0)]),
        )
    }

    #[test]
    fn path_closeness() {
        let g = WeightedDigraph::from_index_edges(2, [(0, 1, 1.0)]);
        let wf = closeness(&g, ClosenessVariant::WassermanFaust, CentralityMode::Exact).unwrap();
        assert_eq!(wf, vec![0.0, 1.0]);
    }

    #[test]
    fn isolated_and_complete() {
        let g = WeightedDigraph::from_index_edges(3, [(0, 1, 1.0)]);
        let c = closeness(&g, ClosenessVariant::Standard, CentralityMode::Exact).unwrap();
        assert_eq!(c[2], 0.0);
        let k3 = bidirected(3, &[(0, 1), (1, 2), (0, 2)]);
        for v in [ClosenessVariant::Standard, ClosenessVariant::WassermanFaust] {
            assert_eq!(
                closeness(&k3, v, CentralityMode::Exact).unwrap(),
                vec![1.0; 3]
            );
        }
    }

    #[test]
    fn betweenness_examples() {
        let path = WeightedDigraph::from_index_edges(3, [(0, 1, 1.0), (1, 2, 1.0)]);
        assert_eq!(
            betweenness(&path, CentralityMode::Exact).unwrap(),
            vec![0.0, 1.0, 0.0]
        );
        let k3 = bidirected(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(
            betweenness(&k3, CentralityMode::Exact).unwrap(),
            vec![0.0; 3]
        );
        let star = bidirected(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert_eq!(betweenness(&star, CentralityMode::Exact).unwrap()[0], 12.0);
    }

    #[test]
    fn split_paths_share_credit() {
        // 0 -> {1, 2} -> 3: each middle node lies on one of two shortest paths.
        let g = WeightedDigraph::from_index_edges(
            4,
            [(0, 1, 1.0), (0, 2, 1.0), (1, 3, 1.0), (2, 3, 1.0)],
        );
        assert_eq!(
            betweenness(&g, CentralityMode::Exact).unwrap(),
            vec![0.0, 0.5, 0.5, 0.0]
        );
    }

    #[test]
    fn full_pivot_set_matches_exact() {
        let n = 150;
        let g = WeightedDigraph::from_index_edges(
            n,
            (0..n).flat_map(|i| [(i, (i * 7 + 3) % n, 1.0), (i, (i * 13 + 1) % n, 1.0)]),
        );
        let pivot = CentralityMode::Pivot {
            sources: n,
            seed: 9,
        };
        assert_eq!(
            betweenness(&g, CentralityMode::Exact).unwrap(),
            betweenness(&g, pivot).unwrap()
        );
        assert_eq!(
            closeness(&g, ClosenessVariant::WassermanFaust, CentralityMode::Exact).unwrap(),
            closeness(&g, ClosenessVariant::WassermanFaust, pivot).unwrap()
        );
    }
}
