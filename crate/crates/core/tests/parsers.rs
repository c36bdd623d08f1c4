//! The parser invariants checked by the fuzz targets, replayed over the
//! checked-in corpus and over generated inputs on stable.

use std::fs;
use std::path::PathBuf;

use kreinpoly::jobs::{parse_job_file, JobFile, ResultRecord};
use kreinpoly::krein::{Backend, Route};
use kreinpoly::poly::FamilyKind;
use kreinpoly::{ExactValue, Scalar};
use proptest::prelude::*;

fn corpus(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut paths: Vec<_> = fs::read_dir(&dir).unwrap_or_else(|e| panic!("{}: {e}", dir.display())).map(|e| e.unwrap().path()).collect();
    paths.sort();
    assert!(!paths.is_empty(), "{target} corpus is empty");
    paths.into_iter().map(|p| fs::read(p).unwrap()).collect()
}

fn exact_value(text: &str) {
    if let Ok(v) = text.parse::<ExactValue>() {
        let printed = v.to_string();
        let back: ExactValue = printed.parse().expect("printed value re-parses");
        assert_eq!(back, v, "{text:?}");
        assert_eq!(back.to_string(), printed);
    }
}

fn scalar(text: &str) {
    if let Ok(v) = text.parse::<Scalar>() {
        let back: Scalar = v.to_string().parse().expect("printed scalar re-parses");
        assert_eq!(back.is_exact(), v.is_exact(), "{text:?}");
        if v.is_exact() {
            assert_eq!(back, v);
        }
    }
}

fn job_file(text: &str) {
    let tasks = parse_job_file(text);
    if let Ok(file) = JobFile::parse(text) {
        let again = serde_json::to_string(&file).unwrap();
        assert_eq!(JobFile::parse(&again).unwrap().tasks().map(|t| t.len()).ok(), tasks.map(|t| t.len()).ok());
    }
}

fn names(text: &str) {
    if let Ok(r) = text.parse::<Route>() {
        assert_eq!(r.name().parse::<Route>().ok(), Some(r));
    }
    if let Ok(b) = text.parse::<Backend>() {
        assert_eq!(b.name().parse::<Backend>().ok(), Some(b));
    }
    if let Ok(f) = text.parse::<FamilyKind>() {
        assert_eq!(f.name().parse::<FamilyKind>().ok(), Some(f));
    }
}

#[test]
fn corpus_replay() {
    for seed in corpus("parse_exact_value") {
        exact_value(&String::from_utf8_lossy(&seed));
    }
    for seed in corpus("parse_scalar") {
        scalar(&String::from_utf8_lossy(&seed));
    }
    for seed in corpus("parse_job_file") {
        job_file(&String::from_utf8_lossy(&seed));
    }
    for seed in corpus("decode_result_record") {
        let rec: ResultRecord = serde_json::from_slice(&seed).expect("corpus records are valid");
        let _ = rec.csv_row();
        if let Some(v) = rec.value_scalar() {
            v.unwrap();
        }
    }
    for seed in corpus("parse_names") {
        names(&String::from_utf8_lossy(&seed));
    }
}

#[test]
fn corpus_seeds_are_accepted_where_expected() {
    let ok = corpus("parse_exact_value").iter().filter(|s| String::from_utf8_lossy(s).parse::<ExactValue>().is_ok()).count();
    assert!(ok >= 10);
    let jobs = corpus("parse_job_file");
    assert!(parse_job_file(&String::from_utf8_lossy(&jobs[1])).is_ok());
    assert!(parse_job_file(&String::from_utf8_lossy(&jobs[jobs.len() - 1])).is_err());
}

proptest! {
    #[test]
    fn exact_value_parser_never_panics(text in "[-0-9/*()a-z^. ]{0,24}") {
        exact_value(&text);
        scalar(&text);
    }

    #[test]
    fn structured_values_roundtrip(p in -999i64..=999, q in 1u32..=99, d in 1u64..=30, e in -4i32..=4) {
        let text = format!("{p}/{q}*sqrt({d})*pi^({e}/2)");
        exact_value(&text);
        scalar(&text);
        scalar(&format!("{}.{}", p, q));
    }

    #[test]
    fn job_parser_never_panics(text in r#"\{"schema":"kreinpoly/1","jobs":\[\{"family":"(hermite|laguerre|jacobi)","degrees":\[[0-9,]{0,5}\](,"[a-z]{1,6}":("[-0-9/.]{0,4}"|[-0-9.]{1,4}|true))*\}\]\}"#) {
        job_file(&text);
    }

    #[test]
    fn name_parsers_never_panic(text in "[a-zA-Z ]{0,12}") {
        names(&text);
    }
}
