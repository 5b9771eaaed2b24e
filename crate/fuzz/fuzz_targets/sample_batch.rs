#![no_main]

use libfuzzer_sys::fuzz_target;

use qfhsp::sampling::SampleBatch;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(batch) = SampleBatch::parse(text) {
        assert_eq!(SampleBatch::parse(&batch.to_text()).as_ref(), Ok(&batch));
    }
});
