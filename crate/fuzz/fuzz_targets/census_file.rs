#![no_main]

use helly_core::census::parse_census_file;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(f) = parse_census_file(text) {
            // anything accepted must render back to the same bytes
            assert_eq!(f.render(), text);
        }
    }
});
