//! Writes the oracle fixtures as `datetime,value` CSV files so an external
//! reference implementation can recompute the test statistics.
//!
//! cargo run -p tsdiag-core --example dump_fixtures -- <out-dir>

use std::collections::BTreeMap;
use std::path::PathBuf;

use tsdiag_core::{generate, SynthSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| ".".into()));
    let specs: BTreeMap<String, SynthSpec> =
        serde_json::from_str(include_str!("../tests/fixtures/oracle_specs.json"))?;
    std::fs::create_dir_all(&out)?;
    for (name, spec) in specs {
        let ts = generate(&spec)?;
        let mut w = csv::Writer::from_path(out.join(format!("{name}.csv")))?;
        w.write_record(["timestamp", "value"])?;
        for (t, v) in ts.timestamps().iter().zip(ts.values()) {
            w.write_record([t.to_string(), format!("{v:?}")])?;
        }
        w.flush()?;
    }
    Ok(())
}
