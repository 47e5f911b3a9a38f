mod common;

use coherence_atlas::corpus::{export_csv, load_corpus, merge_coders, parse_corpus, validate, Corpus, CorpusError};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn random_corpus(seed: u64, n: usize) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Corpus::new((0..n).map(|i| random_strategy(&mut rng, &format!("Country {i:02}"), 30)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn json_round_trip_is_canonical(seed in any::<u64>(), n in 1usize..8) {
        let corpus = random_corpus(seed, n);
        let json = corpus.to_json();
        let back = load_corpus(json.as_bytes()).unwrap();
        prop_assert_eq!(&back, &corpus.canonical());
        prop_assert_eq!(back.to_json(), json);
        prop_assert!(!validate(&back).has_errors());
    }

    #[test]
    fn merging_a_corpus_with_itself_is_identity(seed in any::<u64>(), n in 1usize..6) {
        let corpus = random_corpus(seed, n);
        prop_assert_eq!(merge_coders(&corpus, &corpus, &[]).unwrap(), corpus);
    }

    #[test]
    fn csv_rows_match_content(seed in any::<u64>(), n in 1usize..6) {
        let corpus = random_corpus(seed, n);
        let csv = export_csv(&corpus);
        let codings = csv.codings.lines().count() - 1;
        let cells = csv.cells.lines().count() - 1;
        prop_assert_eq!(codings, corpus.strategies.iter().map(|s| s.codings.len()).sum::<usize>());
        prop_assert_eq!(cells, corpus.strategies.iter().map(|s| s.cells.len()).sum::<usize>());
    }
}

#[test]
fn fixture_csv_is_deterministic_and_order_independent() {
    let corpus = reference_corpus();
    let first = export_csv(&corpus);
    assert_eq!(first, export_csv(&corpus));
    let mut shuffled = corpus.clone();
    shuffled.strategies.reverse();
    for s in &mut shuffled.strategies {
        s.codings.reverse();
        s.cells.reverse();
    }
    assert_eq!(first, export_csv(&shuffled));

    let mut reader = csv::Reader::from_reader(first.codings.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(str::to_string).collect();
    assert_eq!(header[0], "country");
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), corpus.strategies.iter().map(|s| s.codings.len()).sum::<usize>());
    let countries: Vec<&str> = rows.iter().map(|r| r.get(0).unwrap()).collect();
    let mut sorted = countries.clone();
    sorted.sort();
    assert_eq!(countries, sorted);
}

#[test]
fn fixture_is_clean() {
    let corpus = reference_corpus();
    assert_eq!(corpus.len(), 20);
    let report = validate(&corpus);
    assert!(report.is_clean(), "{:?}", report.findings);
}

#[test]
fn fixture_json_round_trips() {
    let corpus = reference_corpus();
    let json = corpus.to_json();
    assert_eq!(load_corpus(json.as_bytes()).unwrap().to_json(), json);
}

#[test]
fn parse_errors_name_the_location() {
    let bad = br#"{"schema_version":"1","strategies":[{"meta":{"country":"X","strategy_title":"t","publication_year":"2019","governance_model":"hybrid","region":"europe"},"codings":[],"cells":[]}]}"#;
    let err = parse_corpus(bad).unwrap_err();
    assert!(matches!(err, CorpusError::Parse { .. }), "{err:?}");
    assert!(err.to_string().contains("publication_year"), "{err}");
}

#[test]
fn load_rejects_invalid_codes() {
    let corpus = reference_corpus();
    let json = corpus.to_json().replacen("OBJ.ECON_COMP", "OBJ.ECON_COMPP", 1);
    let err = load_corpus(json.as_bytes()).unwrap_err();
    assert!(err.to_string().contains("OBJ.ECON_COMP"), "{err}");
}
