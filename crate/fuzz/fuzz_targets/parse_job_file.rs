#![no_main]

use kreinpoly::jobs::{parse_job_file, JobFile};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let tasks = parse_job_file(text);
    if let Ok(file) = JobFile::parse(text) {
        // an accepted file re-serializes to an equivalent one
        let again = serde_json::to_string(&file).expect("serializable");
        assert_eq!(JobFile::parse(&again).expect("re-parses").tasks().map(|t| t.len()).ok(), tasks.map(|t| t.len()).ok());
    }
});
