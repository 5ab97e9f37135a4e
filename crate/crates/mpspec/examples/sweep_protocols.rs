// Runs a full sweep protocol through the pipeline and writes the result
// table, the trend report, and the three chart families.
//
// Run:
//   cargo run --release --example sweep_protocols [SF-FREQ|DF-FREQ|SF-AMP|DF-AMP]
//
// Defaults to SF-AMP (the fastest protocol). SF-FREQ takes ~15 s in release;
// the dual-frequency protocols take a few minutes.
//
// Output:
//   out/sweep_protocols/<protocol>/result.csv
//   out/sweep_protocols/<protocol>/report.json
//   out/sweep_protocols/<protocol>/{a3,a5,delta}.svg

use std::fs;

use mpspec::catalog::Catalog;
use mpspec::dynamics::SolverOptions;
use mpspec::orchestrator::{export_csv, protocol_catalog, render_plots, run_sweep, trend_report};

fn main() -> mpspec::Result<()> {
    let protocol = std::env::args().nth(1).unwrap_or_else(|| "SF-AMP".into());
    let catalog = Catalog::builtin();
    let plan = protocol_catalog(&protocol)?;
    let out_dir = std::path::Path::new("out")
        .join("sweep_protocols")
        .join(&protocol);
    fs::create_dir_all(&out_dir).map_err(|source| mpspec::Error::IoFailure {
        path: out_dir.display().to_string(),
        source,
    })?;

    let started = std::time::Instant::now();
    let result = run_sweep(&plan, &catalog, &SolverOptions::default())?;
    println!(
        "{protocol}: {} rows in {:.1} s",
        result.rows.len(),
        started.elapsed().as_secs_f64()
    );

    let csv_path = out_dir.join("result.csv");
    export_csv(&result, &csv_path)?;
    println!("table  -> {}", csv_path.display());

    let report = trend_report(&result, &catalog);
    let report_path = out_dir.join("report.json");
    fs::write(&report_path, report.to_json()).map_err(|source| mpspec::Error::IoFailure {
        path: report_path.display().to_string(),
        source,
    })?;
    println!("report -> {}", report_path.display());

    let set = render_plots(&result);
    for warning in &set.warnings {
        eprintln!("warning: {warning}");
    }
    for doc in &set.documents {
        let path = out_dir.join(&doc.name);
        fs::write(&path, &doc.svg).map_err(|source| mpspec::Error::IoFailure {
            path: path.display().to_string(),
            source,
        })?;
        println!("chart  -> {}", path.display());
    }

    for ordering in &report.delta_orderings {
        println!(
            "Δ{} ordering: {} > {} at {}/{} grid points",
            ordering.harmonic,
            ordering.first_particle,
            ordering.second_particle,
            ordering.points_first_greater,
            ordering.points_compared
        );
    }
    Ok(())
}
