mod oracle;

#[test]
fn cover_matches_exhaustive_search_on_small_binary_datasets() {
    let checked = oracle::exhaustive_check().unwrap();
    assert!(checked > 60_000);
}
