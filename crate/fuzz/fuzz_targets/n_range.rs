#![no_main]

use helly_core::constants::DimRange;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(r) = text.parse::<DimRange>() {
            assert!(2 <= r.start && r.start <= r.end);
            assert_eq!(r.to_string().parse::<DimRange>(), Ok(r));
        }
    }
});
