//! Acceptance suite. Each criterion prints one PASS or FAIL line with its
//! runtime against its budget; any failure makes the binary exit nonzero.
//! Arguments, if given, select criteria by number.

mod cli;
mod oracles;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use txnet::evaluation::{
    kernel_normalized, p_sweep, sp_graph_kernel, BaseKernel, FidelityScore, KernelParams,
    MetricProfile,
};
use txnet::graph::UNITS_PER_COIN;
use txnet::metrics::{
    avg_shortest_path, betweenness, closeness, clustering, connected_components,
    fit_power_law_samples, normalized_rich_club, pearson_assortativity, rich_club,
    small_world_omega, CentralityMode, ClosenessVariant, PathMode,
};
use txnet::reference::{er_random, ring_lattice, synthetic_scale_free};
use txnet::sampling::{sample, SamplerConfig, SamplerMethod};
use txnet::{expand_transaction, rng, Error, TransactionRecord, WeightedDigraph};

use oracles::{Rho, Tiny};

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn vectors_match(name: &str, got: &[f64], want: &[f64], tol: f64) -> Result<(), String> {
    check(
        got.len() == want.len() && got.iter().zip(want).all(|(&a, &b)| close(a, b, tol)),
        || format!("{name}: got {got:?}, oracle {want:?}"),
    )
}

fn edge_weight_rule() -> Outcome {
    let tx = TransactionRecord {
        tx_id: "t".into(),
        inputs: vec![
            ("A".into(), 2 * UNITS_PER_COIN),
            ("B".into(), 8 * UNITS_PER_COIN),
        ],
        outputs: vec![
            ("C".into(), 2 * UNITS_PER_COIN),
            ("D".into(), 3 * UNITS_PER_COIN),
            ("E".into(), 4 * UNITS_PER_COIN),
        ],
    };
    let edges = expand_transaction(&tx).map_err(|e| e.to_string())?;
    let ad = edges
        .iter()
        .find(|e| e.src == "A" && e.dst == "D")
        .ok_or("no A->D edge")?;
    check(ad.weight == 0.6, || format!("A->D = {:?}", ad.weight))?;

    let mut rng = rng::seeded(1, 0);
    let mut worst = 0f64;
    for t in 0..10_000 {
        use rand::Rng;
        let side = |rng: &mut rng::Rng, tag: &str| -> Vec<(String, u64)> {
            (0..rng.random_range(1..=6))
                .map(|i| {
                    (
                        format!("{tag}{i}"),
                        rng.random_range(1..=50 * UNITS_PER_COIN),
                    )
                })
                .collect()
        };
        let tx = TransactionRecord {
            tx_id: t.to_string(),
            inputs: side(&mut rng, "i"),
            outputs: side(&mut rng, "o"),
        };
        let edges = expand_transaction(&tx).map_err(|e| e.to_string())?;
        for (addr, amount) in &tx.outputs {
            let received: f64 = edges
                .iter()
                .filter(|e| &e.dst == addr)
                .map(|e| e.weight)
                .sum();
            let expected = *amount as f64 / UNITS_PER_COIN as f64;
            worst = worst.max((received - expected).abs() / expected);
        }
    }
    check(worst <= 1e-9, || format!("conservation error {worst:e}"))?;
    Ok(format!(
        "A->D = 0.6, worst relative conservation error {worst:.1e}"
    ))
}

fn oracle_self_check() -> Result<(), String> {
    let path = Tiny::from_arcs(3, vec![(0, 1), (1, 2)]);
    vectors_match(
        "oracle path betweenness",
        &oracles::betweenness(&path),
        &[0.0, 1.0, 0.0],
        0.0,
    )?;
    check(
        oracles::average_path_length(&path) == Some(4.0 / 3.0),
        || "oracle path L".into(),
    )?;
    let star = Tiny::from_arcs(5, (1..5).flat_map(|i| [(0, i), (i, 0)]).collect());
    check(oracles::betweenness(&star)[0] == 12.0, || {
        "oracle star betweenness".into()
    })
}

fn oracle_equivalence() -> Outcome {
    oracle_self_check()?;
    let mut rng = rng::seeded(2, 0);
    let mut counts = [0usize; 3];
    for instance in 0..1000 {
        let tiny = Tiny::random(&mut rng, 8);
        let g = tiny.to_graph();
        let fail = |e: String| format!("instance {instance} {:?}: {e}", tiny.raw);

        let b = betweenness(&g, CentralityMode::Exact).map_err(|e| fail(e.to_string()))?;
        vectors_match("betweenness", &b, &oracles::betweenness(&tiny), 1e-9).map_err(fail)?;
        for (variant, wf) in [
            (ClosenessVariant::Standard, false),
            (ClosenessVariant::WassermanFaust, true),
        ] {
            let c =
                closeness(&g, variant, CentralityMode::Exact).map_err(|e| fail(e.to_string()))?;
            vectors_match("closeness", &c, &oracles::closeness(&tiny, wf), 1e-9).map_err(fail)?;
        }
        let (local, mean) = oracles::clustering(&tiny);
        let cl = clustering(&g);
        vectors_match("clustering", &cl.per_node, &local, 1e-9).map_err(fail)?;
        check(close(cl.average, mean, 1e-9), || {
            fail(format!("average clustering {} vs {mean}", cl.average))
        })?;

        match (
            avg_shortest_path(&g, PathMode::Exact, true),
            oracles::average_path_length(&tiny),
        ) {
            (Ok(est), Some(want)) => check(close(est.mean, want, 1e-9), || {
                fail(format!("L {} vs {want}", est.mean))
            })?,
            (Err(Error::InsufficientData(_)), None) => {}
            (got, want) => return Err(fail(format!("L {got:?} vs {want:?}"))),
        }

        let ((scc, big_scc), (wcc, big_wcc)) = oracles::components(&tiny);
        let comp = connected_components(&g);
        check(
            (
                comp.scc_count,
                comp.largest_scc_size,
                comp.wcc_count,
                comp.largest_wcc_size,
            ) == (scc, big_scc, wcc, big_wcc),
            || {
                fail(format!(
                    "components {comp:?} vs scc {scc}/{big_scc} wcc {wcc}/{big_wcc}"
                ))
            },
        )?;

        match (pearson_assortativity(&g), oracles::assortativity(&tiny)) {
            (Ok(r), Rho::Value(want)) => {
                counts[0] += 1;
                check(close(r, want, 1e-9), || fail(format!("rho {r} vs {want}")))?
            }
            (Err(Error::InsufficientData(_)), Rho::TooFewEdges) => counts[1] += 1,
            (Err(Error::DegenerateVariance(_)), Rho::Degenerate) => counts[2] += 1,
            (got, want) => return Err(fail(format!("rho {got:?} vs {want:?}"))),
        }

        let phi = rich_club(&g, None);
        let want = oracles::rich_club(&tiny);
        check(
            phi.len() == want.len()
                && phi
                    .iter()
                    .zip(&want)
                    .all(|(a, b)| a.0 == b.0 && close(a.1, b.1, 1e-9)),
            || fail(format!("phi {phi:?} vs {want:?}")),
        )?;
        check(g.edge_count() == tiny.arc_count(), || {
            fail("edge count".into())
        })?;
    }
    Ok(format!(
        "1000 digraphs agree (rho defined {}, too few edges {}, degenerate {})",
        counts[0], counts[1], counts[2]
    ))
}

fn gaussian(sigma: f64) -> impl Fn(usize, usize) -> f64 {
    move |a, b| {
        let d = a as f64 - b as f64;
        (-d * d / (2.0 * sigma * sigma)).exp()
    }
}

fn kernel_correctness() -> Outcome {
    let mut rng = rng::seeded(3, 0);
    let delta = |a: usize, b: usize| (a == b) as u8 as f64;
    let gauss = KernelParams {
        vertex: BaseKernel::Gaussian { sigma: 1.5 },
        length: BaseKernel::Gaussian { sigma: 0.7 },
        ..KernelParams::default()
    };
    for pair in 0..200 {
        let (a, b) = (Tiny::random(&mut rng, 6), Tiny::random(&mut rng, 6));
        let (ga, gb) = (a.to_graph(), b.to_graph());
        let got = sp_graph_kernel(&ga, &gb, &KernelParams::default()).map_err(|e| e.to_string())?;
        let want = oracles::sp_kernel(&a, &b, delta, delta);
        check(got == want, || {
            format!("pair {pair}: delta kernel {got} vs {want}")
        })?;
        let got = sp_graph_kernel(&ga, &gb, &gauss).map_err(|e| e.to_string())?;
        let want = oracles::sp_kernel(&a, &b, gaussian(1.5), gaussian(0.7));
        check(close(got, want, 1e-9), || {
            format!("pair {pair}: gaussian kernel {got} vs {want}")
        })?;
    }
    let mut worst = 0f64;
    for i in 0..100u64 {
        use rand::Rng;
        let n = rng.random_range(2..=500);
        let max_m = n * (n - 1) / 2;
        let m = rng.random_range(1..=max_m.min(4 * n));
        let g = er_random(n, m, i).map_err(|e| e.to_string())?;
        for params in [KernelParams::default(), gauss] {
            let k = kernel_normalized(&g, &g, &params).map_err(|e| e.to_string())?;
            worst = worst.max((k - 1.0).abs());
        }
    }
    check(worst <= 1e-9, || {
        format!("self-normalization off by {worst:e}")
    })?;
    Ok(format!(
        "200 pairs match the oracle; self-normalization within {worst:.1e}"
    ))
}

fn power_law_recovery() -> Outcome {
    let mut lines = Vec::new();
    for (i, truth) in [1.4, 2.5].into_iter().enumerate() {
        let mut rng = rng::seeded(4, i as u64);
        let samples = oracles::zipf_samples(&mut rng, truth, 100_000, 1e15);
        let fit = fit_power_law_samples(&samples).map_err(|e| e.to_string())?;
        let line = format!("alpha {truth}: fitted {:.4} (xmin {})", fit.alpha, fit.xmin);
        check((fit.alpha - truth).abs() <= 0.1, || line.clone())?;
        lines.push(line);
    }
    Ok(lines.join("; "))
}

fn small_world_direction() -> Outcome {
    let lattice = ring_lattice(2000, 10).map_err(|e| e.to_string())?;
    let m = lattice.undirected_edge_count();
    let er = er_random(2000, m, 5).map_err(|e| e.to_string())?;
    let lat = small_world_omega(&lattice, 5, 5, PathMode::Exact).map_err(|e| e.to_string())?;
    let rnd = small_world_omega(&er, 5, 5, PathMode::Exact).map_err(|e| e.to_string())?;
    let line = format!(
        "omega lattice {:.4}, omega ER {:.4} (m = {m})",
        lat.omega, rnd.omega
    );
    check(lat.omega < 0.0 && rnd.omega > 0.0, || line.clone())?;
    Ok(line)
}

/// Synthetic scale-free graph shared by the sampler criteria.
fn desk_graph() -> WeightedDigraph {
    synthetic_scale_free(10_000, 3, 1).expect("generator parameters are valid")
}

fn sampler_ordering() -> Outcome {
    let g = desk_graph();
    let profile = MetricProfile::compute(&g, None, 0).map_err(|e| e.to_string())?;
    let methods = [SamplerMethod::Rwfb, SamplerMethod::Rn, SamplerMethod::Re];
    let mut held = 0;
    let mut summary = Vec::new();
    for batch in 0..5u64 {
        let mut avg = [0.0; 3];
        let mut degree = [0.0; 3];
        for (k, &method) in methods.iter().enumerate() {
            for s in 0..20 {
                let cfg = SamplerConfig::new(method, 1000, batch * 20 + s);
                let sub = sample(&g, &cfg).map_err(|e| e.to_string())?.subgraph;
                let f = FidelityScore::against(&profile, None, &sub).map_err(|e| e.to_string())?;
                avg[k] += f.d_avg / 20.0;
                degree[k] += f.d_degree / 20.0;
            }
        }
        let ok = avg[0] < avg[1] && avg[0] < avg[2] && degree[1] > degree[0];
        held += ok as usize;
        summary.push(format!(
            "[avg rwfb {:.3} rn {:.3} re {:.3}; degree rn {:.3} rwfb {:.3}]",
            avg[0], avg[1], avg[2], degree[1], degree[0]
        ));
    }
    let line = format!("ordering held in {held}/5 batches {}", summary.join(" "));
    check(held >= 4, || line.clone())?;
    Ok(line)
}

fn p_sweep_shape() -> Outcome {
    let g = desk_graph();
    let grid: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).collect();
    let template = SamplerConfig::new(SamplerMethod::Rwfb, 1000, 0);
    let mut interior = 0;
    let mut peaks = Vec::new();
    for batch in 0..5u64 {
        let seeds: Vec<u64> = (0..10).map(|s| 1000 + batch * 10 + s).collect();
        let result = p_sweep(&g, &grid, &seeds, &template, &KernelParams::default())
            .map_err(|e| e.to_string())?;
        let peak = result.peak().ok_or("empty sweep")?;
        interior += (peak.p > 0.0 && peak.p < 0.9) as usize;
        peaks.push(format!("{:.1}", peak.p));
    }
    let line = format!(
        "interior peak in {interior}/5 batches, peaks at p = {}",
        peaks.join(", ")
    );
    check(interior >= 4, || line.clone())?;
    Ok(line)
}

fn rich_club_null() -> Outcome {
    let er = er_random(1000, 10_000, 8).map_err(|e| e.to_string())?;
    let points = normalized_rich_club(&er, None, 10, 8);
    let judged: Vec<_> = points.iter().filter(|p| p.club_size >= 20).collect();
    check(!judged.is_empty(), || {
        "no threshold with 20 or more club members".into()
    })?;
    let outside: Vec<_> = judged
        .iter()
        .filter(|p| !(0.85..=1.15).contains(&p.phi_norm))
        .map(|p| (p.k, p.phi_norm))
        .collect();
    let (lo, hi) = judged
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
            (lo.min(p.phi_norm), hi.max(p.phi_norm))
        });
    check(outside.is_empty(), || {
        format!("phi_norm outside [0.85, 1.15]: {outside:?}")
    })?;
    Ok(format!(
        "{} thresholds, phi_norm in [{lo:.3}, {hi:.3}]",
        judged.len()
    ))
}

const CRITERIA: [Criterion; 9] = [
    Criterion {
        id: 1,
        name: "edge-weight rule",
        budget: Duration::from_secs(1),
        run: edge_weight_rule,
    },
    Criterion {
        id: 2,
        name: "oracle equivalence",
        budget: Duration::from_secs(30),
        run: oracle_equivalence,
    },
    Criterion {
        id: 3,
        name: "kernel correctness",
        budget: Duration::from_secs(60),
        run: kernel_correctness,
    },
    Criterion {
        id: 4,
        name: "power-law fit recovery",
        budget: Duration::from_secs(30),
        run: power_law_recovery,
    },
    Criterion {
        id: 5,
        name: "small-world direction",
        budget: Duration::from_secs(120),
        run: small_world_direction,
    },
    Criterion {
        id: 6,
        name: "sampler-fidelity ordering",
        budget: Duration::from_secs(300),
        run: sampler_ordering,
    },
    Criterion {
        id: 7,
        name: "p-sweep shape",
        budget: Duration::from_secs(300),
        run: p_sweep_shape,
    },
    Criterion {
        id: 8,
        name: "rich-club null consistency",
        budget: Duration::from_secs(120),
        run: rich_club_null,
    },
    Criterion {
        id: 9,
        name: "CLI determinism",
        budget: Duration::from_secs(300),
        run: cli::determinism,
    },
];

fn main() -> ExitCode {
    let selected: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    for c in CRITERIA
        .iter()
        .filter(|c| selected.is_empty() || selected.contains(&c.id))
    {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > c.budget => Err(format!("over time budget; {detail}")),
            other => other,
        };
        let (status, detail) = match outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "{status} {} {} ({:.2}s of {}s): {detail}",
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} acceptance criteria failed");
        ExitCode::FAILURE
    }
}
