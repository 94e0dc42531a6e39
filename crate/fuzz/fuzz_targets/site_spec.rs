#![no_main]

use helly_core::engine::SiteSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(spec) = text.parse::<SiteSpec>() {
            let again: SiteSpec = spec.to_string().parse().expect("display parses");
            assert_eq!(again, spec);
        }
    }
});
