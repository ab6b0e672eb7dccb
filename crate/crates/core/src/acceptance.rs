//! End-to-end acceptance checks over a corpus directory.

use std::fmt;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::handlebody::{AbelianGroup, Handle, HandleStructure, Invariants};
use crate::knot::{self, KnotDiagram};
use crate::laurent::{LaurentPoly, Monomial};
use crate::moves::{self, Move, PairKind};
use crate::surgery::{self, ComplementPresentation, SwInvariant};
use crate::{corpus, Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {}. {}: {} ({} ms)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed_ms
        )
    }
}

type Outcome = Result<String>;

fn timed(id: u8, name: &'static str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> CriterionResult {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match out {
        Ok(d) => (true, d),
        Err(e) => (false, e.to_string()),
    };
    if let Some(limit) = limit {
        if elapsed > limit {
            passed = false;
            detail = format!("{}; exceeded the {} ms budget", detail, limit.as_millis());
        }
    }
    CriterionResult { id, name, passed, detail, elapsed_ms: elapsed.as_millis() }
}

fn fail(msg: String) -> Error {
    Error::Contract(msg)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(fail(msg()))
    }
}

/// Runs every criterion against the corpus in `dir`.
pub fn run(dir: &Path) -> Vec<CriterionResult> {
    vec![
        timed(1, "Alexander suite", Some(Duration::from_secs(1)), alexander_suite),
        timed(2, "SW transform", Some(Duration::from_secs(1)), || sw_transform(dir)),
        timed(3, "invariant table", None, || invariant_table(dir)),
        timed(4, "move scripts", None, || scripts(dir)),
        timed(5, "knot-surgery invariance", None, || surgery_invariance(dir)),
        timed(6, "randomized move invariance", Some(Duration::from_secs(30)), || random_moves(1000, 0x6b69)),
        timed(7, "Laurent ring properties", Some(Duration::from_secs(10)), || ring_properties(10_000, 0x7269)),
    ]
}

fn parse(s: &str) -> LaurentPoly {
    s.parse().expect("literal polynomial")
}

fn alexander_suite() -> Outcome {
    let cases = [
        ("unknot", "1"),
        ("trefoil", "t - 1 + t^-1"),
        ("figure-eight", "-t + 3 - t^-1"),
        ("granny", "t^2 - 2*t + 3 - 2*t^-1 + t^-2"),
    ];
    for (name, want) in cases {
        let k = knot::catalog(name)?;
        let seifert = k.alexander()?;
        let fox = k.alexander_fox()?;
        let want = parse(want);
        ensure(seifert == want && fox == want, || {
            format!("{}: Seifert gives {}, Fox gives {}, expected {}", name, seifert, fox, want)
        })?;
    }
    ensure(parse("t^2 - 2*t + 3 - 2*t^-1 + t^-2") == parse("t - 1 + t^-1").pow(2), || {
        "granny is not the square of the trefoil".into()
    })?;
    Ok("4 knots, both algorithms agree exactly".into())
}

fn load_sw(dir: &Path) -> Result<SwInvariant> {
    let p = dir.join("k3.sw");
    let text = std::fs::read_to_string(&p).map_err(|e| Error::Io(format!("{}: {}", p.display(), e)))?;
    SwInvariant::from_json(&text)
}

fn sw_transform(dir: &Path) -> Outcome {
    let k3 = load_sw(dir)?;
    ensure(surgery::epsilon_of(24, -16)? == k3.epsilon, || "K3 epsilon is not (24 - 16)/4".into())?;
    let trefoil = knot::catalog("trefoil")?.alexander()?;
    let out = surgery::sw_knot_surgery(&k3, &[1], &trefoil)?;
    ensure(out.poly == parse("T^2 - 1 + T^-2"), || format!("got {}", out.display_poly()))?;
    ensure(out.display_poly() == "exp(2T) - 1 + exp(-2T)", || format!("printed as {}", out.display_poly()))?;
    let mut classes: Vec<i64> = out.basic_classes().into_iter().map(|(c, _)| c[0]).collect();
    classes.sort();
    ensure(classes == [-2, 0, 2], || format!("basic classes {:?}", classes))?;
    ensure(surgery::sw_symmetry_check(&out) && out.epsilon == 2, || "symmetry check failed".into())?;
    ensure(surgery::is_fake_pair(&k3, &out)?, || "trefoil surgery not detected".into())?;
    let unknot = surgery::sw_knot_surgery(&k3, &[1], &knot::catalog("unknot")?.alexander()?)?;
    ensure(!surgery::is_fake_pair(&k3, &unknot)?, || "unknot surgery changed SW".into())?;
    Ok(format!("SW(K3_trefoil) = {}, basic classes 0, ±2T", out.display_poly()))
}

fn load(dir: &Path, name: &str) -> Result<HandleStructure> {
    HandleStructure::load(&dir.join(name))
}

/// Expected rows of the invariant table, as (file, chi, sigma, H1 rank, H2 rank, H1(boundary) rank).
pub const INVARIANT_TABLE: [(&str, i64, i64, usize, usize, usize); 3] = [
    ("cusp.kby", 2, 0, 0, 1, 1),
    ("fishtail.kby", 1, 0, 1, 1, 2),
    ("torus.kby", 0, 0, 2, 1, 3),
];

fn invariant_table(dir: &Path) -> Outcome {
    let mut shown = Vec::new();
    for (file, chi, sigma, h1, h2, b) in INVARIANT_TABLE {
        let inv = load(dir, file)?.invariants()?;
        let want = Invariants {
            chi,
            sigma,
            h1: AbelianGroup::free(h1),
            h2: AbelianGroup::free(h2),
            boundary_h1: Some(AbelianGroup::free(b)),
        };
        ensure(inv == want, || format!("{}: computed {}, expected {}", file, inv, want))?;
        shown.push(format!("{} [{}]", file, inv));
    }
    Ok(shown.join("; "))
}

fn scripts(dir: &Path) -> Outcome {
    let mut passed = 0;
    let mut asserted = 0;
    for (name, _) in corpus::scripts() {
        let (script, x0) = moves::load_script(&dir.join(name))?;
        let cert = moves::verify_script(&x0, &script).map_err(|e| fail(format!("{}: {}", name, e)))?;
        asserted += cert.asserted.len();
        passed += 1;
    }
    Ok(format!("{} scripts pass ({} asserted conditions listed)", passed, asserted))
}

fn surgery_invariance(dir: &Path) -> Outcome {
    let trefoil = ComplementPresentation::builtin("trefoil")?;
    let mut out = Vec::new();
    for (file, marking) in corpus::markings() {
        let x = load(dir, file)?;
        let y = surgery::knot_surgery_diagram(&x, &marking, &trefoil)?;
        let (a, b) = (x.invariants()?, y.invariants()?);
        ensure(a == b, || format!("{}: {} became {}", file, a, b))?;
        out.push(file);
    }
    Ok(format!("five invariants preserved on {}", out.join(", ")))
}

/// A random valid structure with `n` handles and no 3-handles.
pub fn random_structure(rng: &mut impl Rng, n: usize) -> HandleStructure {
    let dotted = rng.gen_range(0..=n / 2);
    let mut handles: Vec<Handle> = (0..dotted).map(|i| Handle::dotted(&format!("d{}", i))).collect();
    for i in 0..n - dotted {
        let mut h = Handle::framed(&format!("h{}", i), rng.gen_range(-3..=3));
        for other in &handles {
            if rng.gen_bool(0.5) {
                h = h.with_link(&other.id.clone(), rng.gen_range(-2..=2));
            }
        }
        handles.push(h);
    }
    HandleStructure::new(handles, 0, 0).expect("random structure is valid")
}

fn random_move(rng: &mut impl Rng, x: &HandleStructure, fresh: &mut usize) -> Move {
    let framed: Vec<String> = x.framed_ids().into_iter().map(String::from).collect();
    let dotted: Vec<String> = x.dotted_ids().into_iter().map(String::from).collect();
    let any = |v: &[String], rng: &mut dyn rand::RngCore| v.choose(rng).cloned().unwrap_or_default();
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    *fresh += 1;
    let id = format!("r{}", fresh);
    match rng.gen_range(0..9) {
        0..=2 => Move::Slide { handle: any(&framed, rng), over: any(&framed, rng), sign, half_twist: false },
        3 => Move::BlowUp { id, sign },
        4 => Move::BlowDown { target: any(&framed, rng) },
        5 => Move::AddCancellingPair { kind: if rng.gen_bool(0.5) { PairKind::OneTwo } else { PairKind::TwoThree }, id },
        6 => Move::Cancel12 { dotted: any(&dotted, rng), framed: any(&framed, rng) },
        7 => Move::Cancel23 { target: any(&framed, rng) },
        _ => {
            if rng.gen_bool(0.5) {
                Move::SurgerDot { target: any(&dotted, rng) }
            } else {
                Move::AddDot { target: any(&framed, rng), knot: None }
            }
        }
    }
}

/// Random legal move sequences: H₁(∂) is preserved by every move, blow-ups
/// shift (χ, σ) by (1, ±1) and add a free summand to H₂, other moves keep what they should, and every
/// slide is undone exactly by the opposite slide.
pub fn random_moves(sequences: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut applied = 0usize;
    let mut fresh = 0usize;
    let mut by_op: std::collections::BTreeMap<String, usize> = Default::default();
    for seq in 0..sequences {
        let mut x = random_structure(&mut rng, 8);
        let mut inv = x.invariants()?;
        let mut legal = 0;
        let mut attempts = 0;
        while legal < 6 && attempts < 200 {
            attempts += 1;
            let mv = random_move(&mut rng, &x, &mut fresh);
            let Ok((y, _)) = mv.apply(&x) else { continue };
            let after = y.invariants()?;
            let ctx = || format!("sequence {}: {} took {} to {}", seq, mv, inv, after);
            ensure(after.boundary_h1 == inv.boundary_h1, ctx)?;
            match &mv {
                // The new ±1 sphere also adds a free summand to H₂.
                Move::BlowUp { sign, .. } => {
                    let h2 = AbelianGroup { free_rank: inv.h2.free_rank + 1, ..inv.h2.clone() };
                    let shifted = Invariants { chi: inv.chi + 1, sigma: inv.sigma + *sign as i64, h2, ..inv.clone() };
                    ensure(after == shifted, ctx)?;
                }
                Move::BlowDown { .. } => {
                    let h2 = AbelianGroup { free_rank: after.h2.free_rank + 1, ..after.h2.clone() };
                    ensure(after.chi == inv.chi - 1 && (after.sigma - inv.sigma).abs() == 1, ctx)?;
                    ensure(after.h1 == inv.h1 && h2 == inv.h2, ctx)?;
                }
                Move::SurgerDot { .. } => ensure(after.chi == inv.chi + 2, ctx)?,
                Move::AddDot { .. } => ensure(after.chi == inv.chi - 2, ctx)?,
                Move::Slide { handle, over, sign, .. } => {
                    ensure(after == inv, ctx)?;
                    let back = moves::slide(&y, handle, over, -sign)?;
                    ensure(
                        back.linking_matrix() == x.linking_matrix() && back.d3() == x.d3(),
                        || format!("sequence {}: {} is not undone by the opposite slide", seq, mv),
                    )?;
                }
                _ => ensure(after == inv, ctx)?,
            }
            x = y;
            inv = after;
            legal += 1;
            applied += 1;
            *by_op.entry(mv.to_string().split(' ').next().unwrap_or_default().to_string()).or_default() += 1;
        }
    }
    let ops: Vec<String> = by_op.iter().map(|(k, v)| format!("{} {}", k, v)).collect();
    Ok(format!("{} sequences, {} legal moves checked ({})", sequences, applied, ops.join(", ")))
}

fn random_poly(rng: &mut impl Rng) -> LaurentPoly {
    let terms = rng.gen_range(0..=4);
    LaurentPoly::from_terms((0..terms).map(|_| {
        let m = Monomial::from_exponents([("t", rng.gen_range(-3..=3)), ("x", rng.gen_range(-2..=2))]);
        (m, rng.gen_range(-5i64..=5).into())
    }))
}

/// Ring axioms on random bivariate Laurent polynomials.
pub fn ring_properties(checks: usize, seed: u64) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..checks {
        let (a, b, c) = (random_poly(&mut rng), random_poly(&mut rng), random_poly(&mut rng));
        let ok = &(&a + &b) + &c == &a + &(&b + &c)
            && &(&a * &b) * &c == &a * &(&b * &c)
            && &a + &b == &b + &a
            && &a * &b == &b * &a
            && &a * &(&b + &c) == &(&a * &b) + &(&a * &c)
            && &(&a - &b) + &b == a;
        ensure(ok, || format!("check {} failed on a = {}, b = {}, c = {}", k, a, b, c))?;
    }
    Ok(format!("{} triples, six identities each", checks))
}

/// Alexander polynomials of a diagram by both algorithms.
pub fn alexander_both(k: &KnotDiagram) -> Result<(LaurentPoly, LaurentPoly)> {
    Ok((k.alexander()?, k.alexander_fox()?))
}
