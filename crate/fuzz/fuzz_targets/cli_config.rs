#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let args = std::iter::once("qfhsp").chain(text.split(['\n', ' ']).filter(|s| !s.is_empty()));
    let _ = qfhsp_cli::parse_config(args);
});
