#![no_main]

use kreinpoly::krein::{Backend, Route};
use kreinpoly::poly::FamilyKind;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = text.parse::<Route>() {
        assert_eq!(r.name().parse::<Route>().ok(), Some(r));
    }
    if let Ok(b) = text.parse::<Backend>() {
        assert_eq!(b.name().parse::<Backend>().ok(), Some(b));
    }
    if let Ok(f) = text.parse::<FamilyKind>() {
        assert_eq!(f.name().parse::<FamilyKind>().ok(), Some(f));
    }
});
