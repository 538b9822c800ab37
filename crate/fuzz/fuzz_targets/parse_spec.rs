#![no_main]
use libfuzzer_sys::fuzz_target;
use torus_weyl::schema::parse_spec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(doc) = parse_spec(text) {
        let again = serde_json::to_string(&doc).unwrap();
        assert_eq!(parse_spec(&again).unwrap(), doc);
    }
});
