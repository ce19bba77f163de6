//! Loading run configurations from disk.

use std::io::Write;

use floquet_tunneling::config::{self, OutputFormat};
use floquet_tunneling::Error;

const BASE: &str = r#"{
    "device": {"builder": "single_barrier", "width": 30, "height": 237, "lead_mass": 0.0667, "barrier_mass": 0.0918},
    "scan": {"energy_mev": {"start": 10, "stop": 50, "step": 10}},
    "output": {"path": "out.jsonl", "format": "jsonl"}
}"#;

fn write(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn pointer(text: &str) -> String {
    match config::load(write(text).path()) {
        Err(Error::Config { pointer, .. }) => pointer,
        other => panic!("expected a config error, got {other:?}"),
    }
}

#[test]
fn loads_from_disk() {
    let cfg = config::load(write(BASE).path()).unwrap();
    assert_eq!(cfg.energies_mev(), vec![10.0, 20.0, 30.0, 40.0, 50.0]);
    assert_eq!(cfg.output_format(), OutputFormat::Jsonl);
    assert_eq!(cfg.base_device().unwrap().regions().len(), 3);
}

#[test]
fn errors_point_into_the_document() {
    assert_eq!(pointer(&BASE.replace("\"width\": 30", "\"width\": \"thick\"")), "/device/width");
    assert_eq!(pointer(&BASE.replace("\"width\": 30", "\"width\": 30, \"colour\": 1")), "/device/colour");
    assert_eq!(pointer(&BASE.replace("\"step\": 10", "\"step\": -1")), "/scan/energy_mev/step");
    assert_eq!(pointer(&BASE.replace("\"format\": \"jsonl\"", "\"format\": \"xml\"")), "/output/format");
}

#[test]
fn missing_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    assert!(matches!(config::load(&dir.path().join("absent.json")), Err(Error::Io(_))));
}
