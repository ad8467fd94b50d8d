use seismotext_core::textpipe::stem;

const VECTORS: &str = include_str!("fixtures/snowball_english.tsv");

#[test]
fn snowball_english_vectors() {
    let mut n = 0;
    let mut mismatches = Vec::new();
    for line in VECTORS.lines().filter(|l| !l.starts_with('#') && !l.is_empty()) {
        let (word, expected) = line.split_once('\t').expect("two columns");
        let got = stem(word);
        if got != expected {
            mismatches.push(format!("{word}: expected {expected}, got {got}"));
        }
        n += 1;
    }
    assert!(n > 3000, "fixture has {n} entries");
    assert!(
        mismatches.is_empty(),
        "{} mismatches:\n{}",
        mismatches.len(),
        mismatches.join("\n")
    );
}
