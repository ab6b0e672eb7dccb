use std::path::Path;

use kirbykit::corpus;
use kirbykit::moves::{self, load_script};
use kirbykit::{HandleStructure, KnotDiagram, SwInvariant};

fn dir() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

#[test]
fn checked_in_corpus_is_current() {
    let stale = corpus::stale_files(&dir()).unwrap();
    assert!(stale.is_empty(), "regenerate with `kirbykit write-corpus corpus`: {:?}", stale);
}

#[test]
fn every_file_parses() {
    for (name, _) in corpus::files().unwrap() {
        let path = dir().join(&name);
        let text = std::fs::read_to_string(&path).unwrap();
        match path.extension().and_then(|e| e.to_str()) {
            Some("kby") => drop(HandleStructure::from_json(&text).unwrap()),
            Some("knot") => drop(KnotDiagram::from_json(&text).unwrap()),
            Some("sw") => drop(SwInvariant::from_json(&text).unwrap()),
            Some("script") => {
                let (script, x0) = load_script(&path).unwrap();
                let cert = moves::verify_script(&x0, &script).unwrap();
                assert!(cert.passed, "{}", name);
            }
            _ => panic!("unexpected corpus file {}", name),
        }
    }
}

#[test]
fn writing_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    corpus::write_corpus(a.path()).unwrap();
    corpus::write_corpus(b.path()).unwrap();
    for (name, _) in corpus::files().unwrap() {
        let x = std::fs::read(a.path().join(&name)).unwrap();
        let y = std::fs::read(b.path().join(&name)).unwrap();
        assert_eq!(x, y, "{}", name);
    }
    assert!(corpus::stale_files(a.path()).unwrap().is_empty());
}

#[test]
fn certificates_are_deterministic() {
    let path = dir().join("figure9_to_figure7.script");
    let (script, x0) = load_script(&path).unwrap();
    let one = moves::verify_script(&x0, &script).unwrap().to_json();
    let two = moves::verify_script(&x0, &script).unwrap().to_json();
    assert_eq!(one, two);
}
