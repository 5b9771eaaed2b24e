//! Replays the fuzz corpus through the properties the fuzz targets assert.

use std::path::PathBuf;

use qfhsp::hsp::OracleSpec;
use qfhsp::sampling::{Fraction, SampleBatch};

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn oracle_file_seeds_round_trip() {
    for (path, text) in seeds("oracle_file") {
        let spec = OracleSpec::parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(OracleSpec::parse(&spec.to_text()).unwrap(), spec, "{}", path.display());
        spec.build().unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}

#[test]
fn sample_batch_seeds_round_trip() {
    for (path, text) in seeds("sample_batch") {
        let b = SampleBatch::parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(SampleBatch::parse(&b.to_text()).unwrap(), b);
    }
}

#[test]
fn fraction_seeds_round_trip() {
    let mut parsed = 0;
    for (_, text) in seeds("fraction") {
        if let Ok(x) = text.parse::<Fraction>() {
            assert_eq!(x.to_string().parse::<Fraction>().unwrap(), x);
            parsed += 1;
        }
    }
    assert!(parsed >= 4);
    assert_eq!("-14/6".parse::<Fraction>().unwrap().to_string(), "-7/3");
}

#[test]
fn cli_config_seeds_parse() {
    for (path, text) in seeds("cli_config") {
        let args = std::iter::once("qfhsp").chain(text.split(['\n', ' ']).filter(|s| !s.is_empty()));
        qfhsp_cli::parse_config(args).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}
