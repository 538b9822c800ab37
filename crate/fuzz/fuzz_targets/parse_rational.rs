#![no_main]
use libfuzzer_sys::fuzz_target;
use torus_weyl::rational::{format, parse};

fuzz_target!(|data: String| {
    if let Ok(x) = parse(&data) {
        assert_eq!(parse(&format(&x)).unwrap(), x);
    }
});
