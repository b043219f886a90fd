use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::Context;
use serde::Serialize;
use serde_json::json;
use tar1_core::io::{read_series_csv, write_json, write_path_csv, write_path_json, write_samples_csv};
use tar1_core::monte_carlo::{hash_json, run_and_compare, sample_limit_law, summarize, SUMMARY_PROBS};
use tar1_core::unit_root::{unit_root_test as run_unit_root_test, DfQuantileTable, TableGenerator};
use tar1_core::{classify_regime, lse, simulate_path, RngStream};

use crate::config::RunConfig;
use crate::manifest::RunManifest;
use crate::CliError;

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    Ok(())
}

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).context("serializing output")?;
    println!("{text}");
    Ok(())
}

fn write_manifest(dir: &Path, mut manifest: RunManifest) -> Result<(), CliError> {
    manifest.finish();
    let path = dir.join("manifest.json");
    write_json(&manifest, create(&path)?)?;
    Ok(())
}

pub fn simulate(config_path: &Path, out: &Path) -> Result<(), CliError> {
    let (mut manifest, _) = RunManifest::start("simulate", Some(config_path));
    let cfg = RunConfig::load(config_path)?;
    let params = cfg.params()?;
    let sim = cfg.simulate_section()?;
    if sim.n == 0 {
        return Err(CliError::Config("[simulate] n must be >= 1".into()));
    }
    let path = simulate_path(&params, sim.n, &mut RngStream::new(sim.seed, sim.stream))?;

    ensure_dir(out)?;
    let csv_path = out.join("path.csv");
    let json_path = out.join("path.json");
    let cfg_path = out.join("config.json");
    write_path_csv(&path, create(&csv_path)?)?;
    write_path_json(&path, create(&json_path)?)?;
    write_json(&cfg, create(&cfg_path)?)?;

    manifest.config_hash = Some(hash_json(&cfg));
    manifest.master_seed = Some(sim.seed);
    manifest.outputs = vec![csv_path, json_path, cfg_path];
    write_manifest(out, manifest)
}

pub fn experiment(config_path: &Path, out: &Path) -> Result<(), CliError> {
    let (mut manifest, started) = RunManifest::start("experiment", Some(config_path));
    let clock = Instant::now();
    let cfg = RunConfig::load(config_path)?;
    let exp = cfg.experiment_config()?;
    for w in exp.warnings() {
        eprintln!("tar1: warning: {w}");
    }
    let report = run_and_compare(&exp)?;
    let hash = exp.hash();

    ensure_dir(out)?;
    let mut outputs: Vec<PathBuf> = Vec::new();

    let config_out = out.join("config.json");
    write_json(&json!({ "file": cfg, "experiment": exp, "hash": hash }), create(&config_out)?)?;
    outputs.push(config_out);

    for (n, dist) in &report.distributions {
        let p = out.join(format!("samples_n{n}.csv"));
        write_samples_csv("statistic", dist.samples(), create(&p)?)?;
        outputs.push(p);
    }
    let limit_summary = match &report.limit {
        Some(limit) => {
            let p = out.join("limit_samples.csv");
            write_samples_csv("limit", limit.samples(), create(&p)?)?;
            outputs.push(p);
            Some(summarize(limit, 0, None)?)
        }
        None => None,
    };

    let summary = json!({
        "config_hash": hash,
        "stat": exp.stat,
        "replications": exp.replications,
        "master_seed": exp.master_seed,
        "quantile_probs": SUMMARY_PROBS,
        "per_n": report.summaries,
        "limit": limit_summary.map(|s| json!({
            "spec": exp.limit_law,
            "kept": s.kept,
            "n_dropped": s.n_dropped,
            "quantiles": s.quantiles,
        })),
        "convergence": report.convergence,
        "warnings": report.warnings,
        "started_at": crate::manifest::stamp(started),
        "wall_clock_seconds": clock.elapsed().as_secs_f64(),
    });
    let summary_path = out.join("summary.json");
    write_json(&summary, create(&summary_path)?)?;
    outputs.push(summary_path);

    manifest.config_hash = Some(hash);
    manifest.master_seed = Some(exp.master_seed);
    manifest.outputs = outputs;
    write_manifest(out, manifest)
}

pub fn sample_limit(config_path: &Path, out: &Path) -> Result<(), CliError> {
    let (mut manifest, _) = RunManifest::start("sample-limit", Some(config_path));
    let cfg = RunConfig::load(config_path)?;
    let params = cfg.params()?;
    let law = cfg.limit_law()?;
    let dist = sample_limit_law(&law, &params)?;
    let summary = summarize(&dist, 0, None)?;

    ensure_dir(out)?;
    let samples_path = out.join("limit_samples.csv");
    let quantiles_path = out.join("limit_quantiles.json");
    write_samples_csv("limit", dist.samples(), create(&samples_path)?)?;
    write_json(
        &json!({
            "spec": law,
            "kept": summary.kept,
            "n_dropped": summary.n_dropped,
            "quantiles": summary.quantiles,
            "mean": dist.mean()?,
        }),
        create(&quantiles_path)?,
    )?;
    manifest.config_hash = Some(hash_json(&cfg));
    manifest.master_seed = Some(law.seed());
    manifest.outputs = vec![samples_path, quantiles_path];
    write_manifest(out, manifest)
}

pub fn classify(config_path: &Path) -> Result<(), CliError> {
    let cfg = RunConfig::load(config_path)?;
    let params = cfg.params()?;
    print_json(&json!({ "flags": classify_regime(&params) }))
}

fn load_series(path: &Path) -> Result<Vec<f64>, CliError> {
    let file = File::open(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    read_series_csv(file).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn estimate(series: &Path, r: f64, gamma: f64) -> Result<(), CliError> {
    let values = load_series(series)?;
    print_json(&lse(&values, r, gamma)?)
}

pub fn unit_root_test(series: &Path, r: f64, level: f64, table: Option<&Path>) -> Result<(), CliError> {
    let values = load_series(series)?;
    let table = match table {
        Some(p) => {
            let f = File::open(p).map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_reader(f).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?
        }
        None => DfQuantileTable::shipped(),
    };
    let decision = run_unit_root_test(&values, r, level, &table)?;
    print_json(&decision)
}

pub fn df_table(out: &Path, m: usize, draws: usize, seed: u64) -> Result<(), CliError> {
    let table = DfQuantileTable::generate(TableGenerator { m, draws, seed })?;
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        ensure_dir(dir)?;
    }
    let mut text = serde_json::to_string_pretty(&table).context("serializing table")?;
    text.push('\n');
    fs::write(out, text).with_context(|| format!("cannot write {}", out.display()))?;
    Ok(())
}
