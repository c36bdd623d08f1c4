#![no_main]

use kreinpoly::Scalar;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(v) = text.parse::<Scalar>() {
        let back: Scalar = v.to_string().parse().expect("printed scalar re-parses");
        assert_eq!(back.is_exact(), v.is_exact());
        if v.is_exact() {
            assert_eq!(back, v);
        }
    }
});
