#![no_main]

use kreinpoly::jobs::ResultRecord;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(rec) = serde_json::from_slice::<ResultRecord>(data) {
        let _ = rec.csv_row();
        let _ = rec.value_scalar();
    }
});
