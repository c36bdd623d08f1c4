#![no_main]

use kreinpoly::ExactValue;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(v) = text.parse::<ExactValue>() {
        // the printed form is canonical and re-parses to the same value
        let printed = v.to_string();
        let back: ExactValue = printed.parse().expect("printed value re-parses");
        assert_eq!(back, v);
        assert_eq!(back.to_string(), printed);
    }
});
