use weaklabel::enumeration::{enumerate, EnumOptions};

fn stored(n: usize) -> String {
    let path = format!("{}/data/v1/catalog_n{n}.json", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn catalogs_match_stored_files_byte_for_byte() {
    for n in 3..=10 {
        let fresh = enumerate(&EnumOptions::new(n)).unwrap().to_json();
        assert_eq!(fresh, stored(n), "catalog for n = {n}");
    }
}

#[test]
fn worker_count_does_not_change_output() {
    for threads in [1, 3] {
        let fresh = enumerate(&EnumOptions::new(9).threads(threads)).unwrap().to_json();
        assert_eq!(fresh, stored(9));
    }
}
