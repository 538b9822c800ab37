#![no_main]
use libfuzzer_sys::fuzz_target;
use torus_weyl::matroid::{b_infinity, LinearMatroid};
use torus_weyl::schema::parse_rational_matrix;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok((cols, rows)) = parse_rational_matrix(text) else { return };
    assert!(rows.iter().all(|r| r.len() == cols));
    if rows.len() <= 8 {
        if let Ok(m) = LinearMatroid::new(cols, &rows) {
            if m.is_full_rank() {
                b_infinity(&m).unwrap();
            }
        }
    }
});
