use kirbykit::corpus;
use kirbykit::knot::{self, normalize_alexander};
use kirbykit::surgery::{
    self, epsilon_of, is_fake_pair, knot_surgery_diagram, mark_torus, sw_knot_surgery, sw_symmetry_check,
    ComplementPresentation, BETA_HANDLE,
};
use kirbykit::{Error, Handle, HandleKind, HandleStructure, LaurentPoly, SwInvariant, TorusMarking};

fn p(s: &str) -> LaurentPoly {
    s.parse().unwrap()
}

fn delta(name: &str) -> LaurentPoly {
    knot::catalog(name).unwrap().alexander().unwrap()
}

fn marking(file: &str) -> TorusMarking {
    corpus::markings().into_iter().find(|(f, _)| *f == file).unwrap().1
}

#[test]
fn torus_marking_is_accepted() {
    let m = mark_torus(&corpus::torus(), TorusMarking::new("a", "b", "t")).unwrap();
    assert!(!m.is_cusp());
    let c = mark_torus(&corpus::cusp_nbhd(), marking("cusp_nbhd.kby")).unwrap();
    assert!(c.is_cusp());
    let f = mark_torus(&corpus::fishtail_nbhd(), marking("fishtail_nbhd.kby")).unwrap();
    assert!(!f.is_cusp());
}

#[test]
fn marking_rejects_a_zero_framed_vanishing_cycle() {
    let mut hs = corpus::cusp_nbhd().handles().to_vec();
    hs.iter_mut().find(|h| h.id == "delta").unwrap().kind = HandleKind::Framed { framing: 0 };
    let x = HandleStructure::new(hs, 0, 0).unwrap();
    match mark_torus(&x, marking("cusp_nbhd.kby")) {
        Err(Error::Marking(msg)) => assert!(msg.contains("delta"), "{}", msg),
        other => panic!("{:?}", other),
    }
}

#[test]
fn marking_reports_every_failure() {
    let x = HandleStructure::new(vec![Handle::dotted("a"), Handle::framed("t", 1)], 0, 0).unwrap();
    match mark_torus(&x, TorusMarking::new("a", "b", "t")) {
        Err(Error::Marking(msg)) => assert!(msg.contains("b") && msg.contains("t"), "{}", msg),
        other => panic!("{:?}", other),
    }
}

#[test]
fn knot_surgery_preserves_invariants() {
    let k = ComplementPresentation::builtin("trefoil").unwrap();
    for (file, m) in corpus::markings() {
        let x = corpus::structures().unwrap().into_iter().find(|(f, _)| *f == file).unwrap().1;
        let y = knot_surgery_diagram(&x, &m, &k).unwrap();
        assert_eq!(y.invariants().unwrap(), x.invariants().unwrap(), "{}", file);
        assert_eq!(y.three_handles(), x.three_handles() + 1);
        assert_eq!(
            y.handle(&m.dotted_a).unwrap().kind,
            HandleKind::SliceDotted { knot: "trefoil#-trefoil".into() }
        );
        assert!(y.handle(BETA_HANDLE).is_some());
        assert_eq!(HandleStructure::from_json(&y.to_json()).unwrap(), y);
    }
}

#[test]
fn knot_surgery_needs_a_stored_presentation() {
    assert!(matches!(ComplementPresentation::builtin("figure-eight"), Err(Error::UnsupportedKnot(_))));
    assert!(matches!(ComplementPresentation::builtin("stevedore"), Err(Error::UnsupportedKnot(_))));
    let k = ComplementPresentation::builtin("trefoil").unwrap();
    let y = knot_surgery_diagram(&corpus::torus(), &TorusMarking::new("a", "b", "t"), &k).unwrap();
    assert!(matches!(knot_surgery_diagram(&y, &TorusMarking::new("a", "b", "t"), &k), Err(Error::Marking(_))));
}

#[test]
fn undo_dual_turns_a_cusp_into_a_fishtail() {
    let x = corpus::cusp_nbhd();
    let y = surgery::undo_dual_handle(&x, "delta").unwrap();
    assert_eq!(y.euler_characteristic(), x.euler_characteristic() - 1);
    assert_eq!(y, corpus::fishtail_nbhd());
    assert!(matches!(surgery::undo_dual_handle(&y, "delta"), Err(Error::IllegalMove { .. })));
    assert!(matches!(surgery::undo_dual_handle(&x, "t"), Err(Error::IllegalMove { .. })));
}

#[test]
fn k3_with_trefoil() {
    let sw = sw_knot_surgery(&corpus::k3(), &[1], &delta("trefoil")).unwrap();
    assert_eq!(sw.poly, p("T^2 - 1 + T^-2"));
    assert_eq!(sw.display_poly(), "exp(2T) - 1 + exp(-2T)");
    let classes: Vec<String> = sw.basic_classes().iter().map(|(c, _)| sw.class_name(c)).collect();
    assert_eq!(classes, ["2T", "0", "-2T"]);
    assert!(is_fake_pair(&corpus::k3(), &sw).unwrap());
}

#[test]
fn unknot_surgery_is_trivial() {
    let sw = sw_knot_surgery(&corpus::k3(), &[1], &delta("unknot")).unwrap();
    assert_eq!(sw, corpus::k3());
    assert!(!is_fake_pair(&corpus::k3(), &sw).unwrap());
}

#[test]
fn figure_eight_surgery() {
    let sw = sw_knot_surgery(&corpus::k3(), &[1], &delta("figure-eight")).unwrap();
    assert_eq!(sw.display_poly(), "-exp(2T) + 3 - exp(-2T)");
}

#[test]
fn surgeries_commute_and_compose() {
    let k3 = corpus::k3();
    let (a, b) = (delta("trefoil"), delta("figure-eight"));
    let ab = sw_knot_surgery(&sw_knot_surgery(&k3, &[1], &a).unwrap(), &[1], &b).unwrap();
    let ba = sw_knot_surgery(&sw_knot_surgery(&k3, &[1], &b).unwrap(), &[1], &a).unwrap();
    assert_eq!(ab, ba);
    // two parallel trefoil surgeries agree with one surgery on the granny
    let twice = sw_knot_surgery(&sw_knot_surgery(&k3, &[1], &a).unwrap(), &[1], &a).unwrap();
    assert_eq!(twice, sw_knot_surgery(&k3, &[1], &delta("granny")).unwrap());
}

#[test]
fn surgery_input_checks() {
    let k3 = corpus::k3();
    assert!(sw_knot_surgery(&k3, &[0], &delta("trefoil")).is_err());
    assert!(sw_knot_surgery(&k3, &[1, 0], &delta("trefoil")).is_err());
    assert!(sw_knot_surgery(&k3, &[1], &p("t - 1")).is_err());
    assert!(sw_knot_surgery(&k3, &[1], &p("2t - 2 + 2t^-1")).is_err());
    assert!(sw_knot_surgery(&k3, &[1], &p("s - 1 + s^-1")).is_err());
    let two = SwInvariant::new("X", &["A", "B"], 0, LaurentPoly::one()).unwrap();
    let sw = sw_knot_surgery(&two, &[1, -1], &delta("trefoil")).unwrap();
    assert_eq!(sw.poly, p("A^2 B^-2 - 1 + A^-2 B^2"));
    assert_eq!(sw.class_name(&[2, -2]), "2A - 2B");
}

#[test]
fn symmetry_check() {
    let lopsided = SwInvariant { manifold: String::new(), basis: vec!["T".into()], epsilon: 0, poly: p("T^2 + 2T^-2") };
    assert!(!sw_symmetry_check(&lopsided));
    assert!(SwInvariant::from_json(&lopsided.to_json()).is_err());
    let odd = SwInvariant { epsilon: 1, poly: p("T^2 - T^-2"), ..lopsided };
    assert!(sw_symmetry_check(&odd));
}

#[test]
fn sw_json_round_trip_and_variable_check() {
    let k3 = corpus::k3();
    assert_eq!(SwInvariant::from_json(&k3.to_json()).unwrap(), k3);
    assert!(SwInvariant::from_json(r#"{"basis":["T"],"epsilon":0,"sw":"S + S^-1"}"#).is_err());
    assert!(SwInvariant::from_json(r#"{"basis":["T"],"epsilon":0,"sw":"1","extra":1}"#).is_err());
}

#[test]
fn epsilon_examples() {
    assert_eq!(epsilon_of(4, 0).unwrap(), 1);
    assert_eq!(epsilon_of(24, -16).unwrap(), 2);
    assert!(epsilon_of(3, 0).is_err());
}

#[test]
fn fake_pair_needs_matching_bases() {
    let other = SwInvariant::new("Y", &["S"], 2, LaurentPoly::one()).unwrap();
    assert!(is_fake_pair(&corpus::k3(), &other).is_err());
}

#[test]
fn alexander_is_normalized_before_substitution() {
    let raw = p("-t^3 + t^2 - t");
    assert!(sw_knot_surgery(&corpus::k3(), &[1], &raw).is_err());
    let ok = sw_knot_surgery(&corpus::k3(), &[1], &normalize_alexander(&raw).unwrap()).unwrap();
    assert_eq!(ok.poly, p("T^2 - 1 + T^-2"));
}
