use kirbykit::knot::{self, braid_word, seifert_circles, KnotDiagram};
use kirbykit::{Error, LaurentPoly};
use proptest::prelude::*;

/// Δ of the (p, q) torus knot from (t^pq - 1)(t - 1) / ((t^p - 1)(t^q - 1)),
/// by integer long division, centred at degree zero.
fn torus_alexander(p: usize, q: usize) -> LaurentPoly {
    let mul = |a: &[i64], b: &[i64]| {
        let mut out = vec![0i64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    };
    let binom = |n: usize| {
        let mut v = vec![0i64; n + 1];
        v[0] = -1;
        v[n] = 1;
        v
    };
    let mut num = mul(&binom(p * q), &binom(1));
    let den = mul(&binom(p), &binom(q));
    let deg = num.len() - den.len();
    let mut quot = vec![0i64; deg + 1];
    for k in (0..=deg).rev() {
        let c = num[k + den.len() - 1] / den[den.len() - 1];
        quot[k] = c;
        for (i, d) in den.iter().enumerate() {
            num[k + i] -= c * d;
        }
    }
    assert!(num.iter().all(|&c| c == 0), "division is exact");
    let shift = deg as i64 / 2;
    let terms: Vec<(i64, i64)> = quot.iter().enumerate().map(|(e, &c)| (e as i64 - shift, c)).collect();
    LaurentPoly::univariate("t", &terms)
}

/// Signature of the positive (p, q) torus knot by lattice-point count.
fn torus_signature(p: usize, q: usize) -> i64 {
    let mut s = 0;
    for i in 1..p {
        for j in 1..q {
            let x = 2 * (i * q + j * p);
            assert!(x != p * q && x != 3 * p * q);
            s += if p * q < x && x < 3 * p * q { -1 } else { 1 };
        }
    }
    s
}

fn torus_braid(p: usize, q: usize) -> KnotDiagram {
    let word: Vec<i32> = (0..q).flat_map(|_| 1..p as i32).collect();
    KnotDiagram::from_braid(p, &word).unwrap()
}

#[test]
fn torus_knots_match_the_closed_formula() {
    for (p, q) in [(2, 3), (2, 5), (2, 7), (3, 4), (3, 5), (2, 9), (4, 5)] {
        let k = torus_braid(p, q);
        let expected = torus_alexander(p, q);
        assert_eq!(k.alexander().unwrap(), expected, "T({},{})", p, q);
        assert_eq!(k.alexander_fox().unwrap(), expected, "T({},{})", p, q);
        let v = k.seifert_matrix().unwrap();
        assert_eq!(v.genus(), (p - 1) * (q - 1) / 2);
        assert_eq!(v.signature(), torus_signature(p, q), "T({},{})", p, q);
        assert_eq!(k.mirror().seifert_matrix().unwrap().signature(), -torus_signature(p, q));
    }
}

#[test]
fn catalog_polynomials() {
    let p = |s: &str| s.parse::<LaurentPoly>().unwrap();
    let cases = [
        ("unknot", "1"),
        ("trefoil", "t - 1 + t^-1"),
        ("right-trefoil", "t - 1 + t^-1"),
        ("figure-eight", "-t + 3 - t^-1"),
        ("granny", "t^2 - 2t + 3 - 2t^-1 + t^-2"),
        ("square", "t^2 - 2t + 3 - 2t^-1 + t^-2"),
    ];
    for (name, poly) in cases {
        let k = knot::catalog(name).unwrap();
        assert_eq!(k.alexander().unwrap(), p(poly), "{}", name);
        assert_eq!(k.alexander_fox().unwrap(), p(poly), "{}", name);
    }
    assert_eq!(knot::catalog("granny").unwrap().alexander().unwrap().to_string(), "t^2 - 2*t + 3 - 2*t^-1 + t^-2");
    assert!(matches!(knot::catalog("stevedore"), Err(Error::UnsupportedKnot(_))));
}

#[test]
fn granny_and_square_differ_by_signature() {
    let sig = |n: &str| knot::catalog(n).unwrap().seifert_matrix().unwrap().signature();
    assert_eq!(sig("granny"), -4);
    assert_eq!(sig("square"), 0);
    assert_eq!(sig("trefoil"), 2);
}

#[test]
fn braid_words_of_closures() {
    let k = KnotDiagram::from_braid(3, &[1, -2, 1, -2]).unwrap();
    assert_eq!(seifert_circles(&k), 3);
    let (n, w) = braid_word(&k).unwrap();
    assert_eq!(n, 3);
    assert_eq!(w.len(), 4);
}

#[test]
fn braid_closure_errors() {
    assert!(KnotDiagram::from_braid(2, &[1, 1]).is_err());
    assert!(KnotDiagram::from_braid(2, &[]).is_err());
    assert!(KnotDiagram::from_braid(2, &[2]).is_err());
    assert_eq!(KnotDiagram::from_braid(1, &[]).unwrap(), KnotDiagram::unknot());
}

#[test]
fn diagram_json() {
    let k = knot::figure_eight();
    assert_eq!(KnotDiagram::from_json(&k.to_json()).unwrap(), k);
    assert!(KnotDiagram::from_json(r#"[{"arcs":[1,2,3,4],"sign":1}]"#).is_err());
    assert!(KnotDiagram::from_json("{").is_err());
}

fn arb_knot() -> impl Strategy<Value = KnotDiagram> {
    (2usize..5)
        .prop_flat_map(|n| {
            let letter = (1..n as i32, any::<bool>()).prop_map(|(g, s)| if s { g } else { -g });
            (Just(n), proptest::collection::vec(letter, 1..12))
        })
        .prop_filter_map("closure is a link", |(n, w)| KnotDiagram::from_braid(n, &w).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn seifert_and_fox_agree(k in arb_knot()) {
        let a = k.alexander().unwrap();
        prop_assert_eq!(&a, &k.alexander_fox().unwrap());
        prop_assert!(a.is_symmetric(0));
        prop_assert_eq!(a.eval_at_one(), 1.into());
        let g = k.seifert_matrix().unwrap().genus() as i64;
        prop_assert!(a.max_exponent("t").unwrap_or(0) <= g);
    }

    #[test]
    fn mirrors_and_sums(k in arb_knot(), l in arb_knot()) {
        let (ak, al) = (k.alexander().unwrap(), l.alexander().unwrap());
        prop_assert_eq!(k.mirror().alexander().unwrap(), ak.clone());
        let s = k.connected_sum(&l);
        prop_assert_eq!(s.alexander().unwrap(), &ak * &al);
        prop_assert_eq!(s.alexander_fox().unwrap(), &ak * &al);
        let sig = |d: &KnotDiagram| d.seifert_matrix().unwrap().signature();
        prop_assert_eq!(sig(&s), sig(&k) + sig(&l));
        prop_assert_eq!(sig(&k.mirror()), -sig(&k));
    }
}
