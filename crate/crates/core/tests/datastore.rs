use std::fs;

use cubicfields::datastore::{self, CacheLock};
use cubicfields::forms::{enumerate_fields, SignatureFilter};
use cubicfields::Error;

const BOUND: u64 = 20_000;

#[test]
fn cache_shards_partition_and_reload() {
    let dir = tempfile::tempdir().unwrap();
    let m = datastore::build_cache(dir.path(), BOUND, 3_000).unwrap();
    assert_eq!(m.ceiling, BOUND);
    assert_eq!(m.shards.len(), 2 * 7);
    let (m2, recs) = datastore::load_cache(dir.path()).unwrap();
    assert_eq!(m2.checksum(), m.checksum());
    assert_eq!(recs, enumerate_fields(BOUND, SignatureFilter::Both).unwrap());
    assert!(!dir.path().join(datastore::LOCK_FILE).exists());
}

#[test]
fn tampered_shard_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let m = datastore::build_cache(dir.path(), BOUND, 5_000).unwrap();
    let shard = dir.path().join(&m.shards[1].file);
    let mut text = fs::read_to_string(&shard).unwrap();
    let dup = text.lines().nth(1).unwrap().to_owned();
    text.push_str(&dup);
    text.push('\n');
    fs::write(&shard, text).unwrap();
    let e = datastore::load_cache(dir.path()).unwrap_err();
    assert!(e.to_string().contains("checksum"), "{e}");
}

#[test]
fn tampered_manifest_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    datastore::build_cache(dir.path(), BOUND, 5_000).unwrap();
    let path = dir.path().join(datastore::MANIFEST_FILE);
    let text = fs::read_to_string(&path).unwrap().replacen("20000", "20001", 1);
    fs::write(&path, text).unwrap();
    assert!(matches!(datastore::load_cache(dir.path()), Err(Error::Load { .. })));
}

#[test]
fn second_writer_is_locked_out() {
    let dir = tempfile::tempdir().unwrap();
    let held = CacheLock::acquire(dir.path()).unwrap();
    assert!(matches!(datastore::build_cache(dir.path(), 1_000, 500), Err(Error::Locked(_))));
    drop(held);
    datastore::build_cache(dir.path(), 1_000, 500).unwrap();
}

#[test]
fn external_list_cross_validation() {
    let recs = enumerate_fields(BOUND, SignatureFilter::Both).unwrap();
    let mut list = datastore::external_from_records(&recs, BOUND, "self");
    assert!(datastore::cross_validate(&list, &recs, BOUND).is_empty());

    let dropped = list.records.remove(10);
    list.records.push(datastore::ExternalRecord { poly: [1, 0, 0, -2], disc: -108 });
    let diff = datastore::cross_validate(&list, &recs, BOUND);
    assert_eq!(diff.missing, vec![dropped.disc]);
    // counts are compared as multisets, so a second field of disc −108 is extra
    assert_eq!(diff.extra, vec![-108]);
    assert_eq!(diff.size(), 2);
}

#[test]
fn external_rejects_and_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let good = "# bound: 100\nx^3 - x^2 - 2x + 1, 49\nx^3 + x + 1, -31\nx^3 - x - 1, -23\n";
    let path = dir.path().join("ok.txt");
    fs::write(&path, good).unwrap();
    let l = datastore::ingest_external(&path).unwrap();
    assert_eq!((l.records.len(), l.bound), (3, Some(100)));

    let bad = format!("{good}x^3 + 1, -27\nx^3 - 2, -106\nnot a line\n");
    let l = datastore::parse_external(&bad, "bad");
    assert_eq!(l.records.len(), 3);
    let reasons: Vec<&str> = l.rejects.iter().map(|r| r.reason.as_str()).collect();
    assert_eq!(l.rejects.iter().map(|r| r.line).collect::<Vec<_>>(), vec![5, 6, 7], "{reasons:?}");
    assert!(reasons[0].contains("reducible"));
    assert!(reasons[1].contains("0 or 1 mod 4"));
    fs::write(&path, bad).unwrap();
    assert!(datastore::ingest_external(&path).is_err());
}
