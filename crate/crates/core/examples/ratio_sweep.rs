//! A small parameter sweep: the deterministic adversary over a `(k, B)` grid
//! plus seeded random instances, emitted as CSV.

use kftm::harness::{sweep, SweepConfig, SweepReport};

pub fn run_example() -> kftm::Result<SweepReport> {
    let config: SweepConfig = serde_json::from_str(
        r#"{
            "grids": [
                { "family": "det-lb", "k": [2, 3], "b": { "min": 2, "max": 6, "min_from_k": -1 }, "policies": ["mf"] },
                { "family": "random", "k": [2], "b": [4], "seeds": 20, "frames": 8 }
            ]
        }"#,
    )?;
    let report = sweep(&config)?;
    report.write_csv_to(std::io::stdout().lock())?;
    eprintln!("{} rows, {} failed", report.rows.len(), report.failures().count());
    Ok(report)
}

fn main() -> kftm::Result<()> {
    run_example()?;
    Ok(())
}
