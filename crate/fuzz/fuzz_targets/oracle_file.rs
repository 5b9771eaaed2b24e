#![no_main]

use libfuzzer_sys::fuzz_target;

use qfhsp::hsp::OracleSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = OracleSpec::parse(text) {
        let again = OracleSpec::parse(&spec.to_text()).expect("printed spec parses");
        assert_eq!(spec, again);
    }
});
