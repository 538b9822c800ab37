#![no_main]
use libfuzzer_sys::fuzz_target;
use torus_weyl::report::analyze;
use torus_weyl::schema::load_spec;
use torus_weyl::torus::Limits;

// Small caps keep each input cheap; errors are fine, panics are not.
const LIMITS: Limits = Limits { distinct_cap: 8, group_cap: 48, enumeration_cap: 10_000 };

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = load_spec(text, LIMITS) {
        let _ = analyze(&spec);
    }
});
