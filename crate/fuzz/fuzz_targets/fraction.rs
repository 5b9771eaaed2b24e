#![no_main]

use libfuzzer_sys::fuzz_target;

use qfhsp::sampling::Fraction;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(x) = text.parse::<Fraction>() {
        // Printed form is reduced with a positive denominator.
        assert!(x.den() > &0.into());
        assert_eq!(x.to_string().parse::<Fraction>().as_ref(), Ok(&x));
    }
});
