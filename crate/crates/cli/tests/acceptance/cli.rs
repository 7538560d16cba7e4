//! Runs the installed binary twice per command and compares every output
//! byte for byte. The second run uses a different worker count.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::Rng;
use txnet::rng;

fn txnet(args: &[&str], threads: usize) -> Output {
    Command::new(env!("CARGO_BIN_EXE_txnet"))
        .args(args)
        .env("TXNET_THREADS", threads.to_string())
        .output()
        .expect("txnet binary runs")
}

fn succeed(args: &[&str], threads: usize) -> Result<Vec<u8>, String> {
    let out = txnet(args, threads);
    if out.status.success() {
        Ok(out.stdout)
    } else {
        Err(format!(
            "`txnet {}` exited {:?}: {}",
            args.join(" "),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr).trim()
        ))
    }
}

fn manifest(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn snapshot(files: &[PathBuf]) -> Result<Vec<Vec<u8>>, String> {
    files
        .iter()
        .map(|f| fs::read(f).map_err(|e| format!("{}: {e}", f.display())))
        .collect()
}

/// Run `args` twice; stdout and every listed file must repeat exactly.
fn twice(name: &str, args: &[&str], files: &[PathBuf]) -> Result<(), String> {
    let stdout = succeed(args, 1)?;
    let first = snapshot(files)?;
    let again = succeed(args, 3)?;
    let second = snapshot(files)?;
    if stdout != again {
        return Err(format!("{name}: stdout differs between runs"));
    }
    for ((a, b), f) in first.iter().zip(&second).zip(files) {
        if a != b {
            return Err(format!("{name}: {} differs between runs", f.display()));
        }
        if a.is_empty() {
            return Err(format!("{name}: {} is empty", f.display()));
        }
    }
    Ok(())
}

fn write_transactions(path: &Path) -> Result<(), String> {
    let mut rng = rng::seeded(9, 0);
    let mut lines = String::new();
    for t in 0..600 {
        // skewed address popularity
        let mut side = |n: usize| -> Vec<String> {
            (0..n)
                .map(|_| {
                    let a = (rng.random::<f64>().powi(2) * 300.0) as usize;
                    let amount = rng.random_range(1..=400_000_000u64);
                    format!(
                        "[\"addr{a}\",{}.{:08}]",
                        amount / 100_000_000,
                        amount % 100_000_000
                    )
                })
                .collect()
        };
        let ins = side(1 + t % 3);
        let outs = side(1 + t % 4);
        lines.push_str(&format!(
            "{{\"tx\":\"t{t}\",\"in\":[{}],\"out\":[{}]}}\n",
            ins.join(","),
            outs.join(",")
        ));
    }
    fs::write(path, lines).map_err(|e| e.to_string())
}

pub fn determinism() -> Result<String, String> {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let at = |name: &str| dir.path().join(name);
    let s = |p: &PathBuf| p.to_str().expect("utf-8 temp path").to_owned();
    let (tx, graph, sampled, report, series, compare, sweep) = (
        at("tx.jsonl"),
        at("graph.tsv"),
        at("sample.tsv"),
        at("report.json"),
        at("series.csv"),
        at("compare.csv"),
        at("sweep.csv"),
    );
    write_transactions(&tx)?;

    twice(
        "ingest",
        &["ingest", "--tx-file", &s(&tx), "--out", &s(&graph)],
        &[graph.clone(), manifest(&graph)],
    )?;
    twice(
        "sample",
        &[
            "sample",
            "--graph",
            &s(&graph),
            "--method",
            "rwfb",
            "--p",
            "0.3",
            "--seed",
            "7",
            "--nodes",
            "60",
            "--out",
            &s(&sampled),
        ],
        &[sampled.clone(), manifest(&sampled)],
    )?;
    twice(
        "metrics",
        &[
            "metrics",
            "--graph",
            &s(&graph),
            "--report",
            &s(&report),
            "--series-csv",
            &s(&series),
        ],
        &[report.clone(), series.clone(), manifest(&report)],
    )?;
    twice(
        "compare",
        &[
            "compare",
            "--graph",
            &s(&graph),
            "--nodes",
            "40",
            "--seeds",
            "0..3",
            "--kernel",
            "--out",
            &s(&compare),
        ],
        &[compare.clone(), manifest(&compare)],
    )?;
    twice(
        "psweep",
        &[
            "psweep",
            "--graph",
            &s(&graph),
            "--p-grid",
            "0:0.3:0.9",
            "--nodes",
            "40",
            "--seeds",
            "0..3",
            "--out",
            &s(&sweep),
        ],
        &[sweep.clone(), manifest(&sweep)],
    )?;

    let node_count = txnet::ingest::read_edge_list(&graph)
        .map_err(|e| e.to_string())?
        .node_count();
    let missing = txnet(
        &[
            "metrics",
            "--graph",
            &s(&at("absent.tsv")),
            "--report",
            &s(&report),
        ],
        1,
    );
    if missing.status.code() != Some(2) {
        return Err(format!(
            "missing input exited {:?}, expected 2",
            missing.status.code()
        ));
    }
    let oversize = (node_count + 1).to_string();
    let too_big = txnet(
        &[
            "sample",
            "--graph",
            &s(&graph),
            "--method",
            "rn",
            "--nodes",
            &oversize,
            "--out",
            &s(&sampled),
        ],
        1,
    );
    if too_big.status.code() != Some(2) {
        return Err(format!(
            "oversize target exited {:?}, expected 2",
            too_big.status.code()
        ));
    }
    let everything = at("all.tsv");
    let all = node_count.to_string();
    succeed(
        &[
            "sample",
            "--graph",
            &s(&graph),
            "--method",
            "rn",
            "--nodes",
            &all,
            "--out",
            &s(&everything),
        ],
        1,
    )?;
    if fs::read(&everything).map_err(|e| e.to_string())?
        != fs::read(&graph).map_err(|e| e.to_string())?
    {
        return Err("RN sample of every node differs from the input graph".into());
    }
    Ok(format!(
        "ingest, sample, metrics, compare, psweep byte-identical across runs ({node_count}-node graph); exit codes and full RN sample as expected"
    ))
}
