use std::path::Path;

const BOOK: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../book/src");

fn chapters() -> Vec<String> {
    let summary = std::fs::read_to_string(Path::new(BOOK).join("SUMMARY.md")).unwrap();
    summary
        .lines()
        .filter_map(|l| {
            l.split_once("](")
                .map(|(_, rest)| rest.trim_end_matches(')').to_string())
        })
        .collect()
}

#[test]
fn every_chapter_exists() {
    let list = chapters();
    assert!(!list.is_empty());
    for ch in list {
        assert!(Path::new(BOOK).join(&ch).is_file(), "missing {ch}");
    }
}

#[test]
fn every_chapter_runs_as_a_doc_test() {
    let lib = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    for ch in chapters() {
        let include = format!("book/src/{ch}\")]");
        assert!(
            lib.contains(&include),
            "{ch} is not wired into the doc-tests"
        );
    }
}
