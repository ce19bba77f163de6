//! Drive a scan from a JSON configuration, as the CLI does, and print CSV.

use floquet_tunneling::config::{self, OutputFormat};
use floquet_tunneling::scan::run_scan;

const CONFIG: &str = r#"{
    "device": {"builder": "triple_barrier", "well_width": 70, "barrier_width": 20,
               "barrier_height": 237, "well_mass": 0.0667, "barrier_mass": 0.0918},
    "waveform": {"kind": "monochromatic", "omega_mev": 70, "xi": 0.05},
    "field_profile": "confined",
    "scan": {"energy_mev": {"start": 40, "stop": 60, "step": 2.5}},
    "report_width": 1
}"#;

fn main() -> floquet_tunneling::Result<()> {
    let cfg = config::parse(CONFIG)?;
    let table = run_scan(&cfg, None)?;
    print!("{}", table.to_string(OutputFormat::Csv, false)?);
    eprintln!("{} of {} points ok", table.ok_count(), table.rows.len());
    Ok(())
}
