//! The shipped corpus: handle structures for the cusp, the fishtail, the
//! torus neighbourhood and their knot-surgered versions, capping files for
//! closed unions, move scripts for each checked diagram equivalence, and the
//! SW catalog.
//!
//! Everything is generated here; the files under `corpus/` are the output of
//! [`write_corpus`] and a test keeps the two in sync.

use std::path::{Path, PathBuf};

use crate::handlebody::{AbelianGroup, Handle, HandleStructure};
use crate::knot::{self, KnotDiagram};
use crate::laurent::LaurentPoly;
use crate::moves::{self, Assertion, Expectation, Move, MoveScript, PairKind};
use crate::surgery::{self, ComplementPresentation, SwInvariant, TorusMarking};
use crate::{Error, Result};

pub const ENV_VAR: &str = "KIRBYKIT_CORPUS";

/// `$KIRBYKIT_CORPUS`, else `./corpus` if present, else the in-repo corpus.
pub fn corpus_dir() -> PathBuf {
    if let Some(p) = std::env::var_os(ENV_VAR) {
        return PathBuf::from(p);
    }
    let local = PathBuf::from("corpus");
    if local.join("cusp.kby").exists() {
        return local;
    }
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

pub fn cusp() -> HandleStructure {
    HandleStructure::new(vec![Handle::framed("h1", 0).with_unknot(false)], 0, 0).expect("valid")
}

pub fn fishtail() -> HandleStructure {
    HandleStructure::new(vec![Handle::dotted("d1"), Handle::framed("h1", 0).with_runs("d1", 2)], 0, 0)
        .expect("valid")
}

fn torus_handles() -> Vec<Handle> {
    vec![
        Handle::dotted("a"),
        Handle::dotted("b"),
        Handle::framed("t", 0).with_runs("a", 2).with_runs("b", 2),
    ]
}

fn vanishing(id: &str, over: &str) -> Handle {
    Handle::framed(id, -1).with_link(over, 1).with_runs(over, 1).with_unknot(true)
}

/// `T²×B²`.
pub fn torus() -> HandleStructure {
    HandleStructure::new(torus_handles(), 0, 0).expect("valid")
}

/// The cusp drawn as `T²×B²` plus two −1-framed vanishing cycles.
pub fn cusp_nbhd() -> HandleStructure {
    let mut h = torus_handles();
    h.push(vanishing("gamma", "a"));
    h.push(vanishing("delta", "b"));
    HandleStructure::new(h, 0, 0).expect("valid")
}

/// The fishtail drawn as `T²×B²` plus one vanishing cycle.
pub fn fishtail_nbhd() -> HandleStructure {
    let mut h = torus_handles();
    h.push(vanishing("gamma", "a"));
    HandleStructure::new(h, 0, 0).expect("valid")
}

/// Fishtail glued to its mirror: a homotopy 4-sphere.
pub fn s4_two_fishtails() -> HandleStructure {
    HandleStructure::new(
        vec![
            Handle::dotted("d1"),
            Handle::framed("h1", 0).with_runs("d1", 2),
            Handle::framed("k", 0).with_link("d1", 1).with_runs("d1", 1),
        ],
        1,
        1,
    )
    .and_then(|s| s.closed(true).with_d3(vec![vec![1, 0]]))
    .expect("valid")
}

/// Cusp glued to its mirror.
pub fn s2xs2_two_cusps() -> HandleStructure {
    HandleStructure::new(
        vec![
            Handle::framed("h1", 0).with_unknot(false),
            Handle::framed("m", 0).with_link("h1", 1).with_unknot(true),
        ],
        0,
        1,
    )
    .map(|s| s.closed(true))
    .and_then(|s| s.validate().map(|_| s))
    .expect("valid")
}

/// Corpus files with a torus marking, by file name.
pub fn markings() -> Vec<(&'static str, TorusMarking)> {
    let plain = TorusMarking::new("a", "b", "t");
    vec![
        ("torus.kby", plain.clone()),
        ("cusp_nbhd.kby", plain.clone().with_vanishing(Some("gamma"), Some("delta"))),
        ("fishtail_nbhd.kby", plain.with_vanishing(Some("gamma"), None)),
    ]
}

fn surgered(x: &HandleStructure, file: &str) -> Result<HandleStructure> {
    let (_, m) = markings().into_iter().find(|(f, _)| *f == file).expect("marked file");
    surgery::knot_surgery_diagram(x, &m, &ComplementPresentation::builtin("trefoil")?)
}

/// Every structure file, in a fixed order.
pub fn structures() -> Result<Vec<(&'static str, HandleStructure)>> {
    let torus = torus();
    let cusp_nbhd = cusp_nbhd();
    let fishtail_nbhd = fishtail_nbhd();
    let figure7 = surgered(&torus, "torus.kby")?;
    let cusp_star = surgered(&cusp_nbhd, "cusp_nbhd.kby")?;
    let fishtail_star = surgered(&fishtail_nbhd, "fishtail_nbhd.kby")?;
    let cusp_star_expanded = moves::expand_slice(&cusp_star, "a")?;
    Ok(vec![
        ("cusp.kby", cusp()),
        ("fishtail.kby", fishtail()),
        ("torus.kby", torus),
        ("cusp_nbhd.kby", cusp_nbhd),
        ("fishtail_nbhd.kby", fishtail_nbhd),
        ("figure7.kby", figure7),
        ("cusp_star.kby", cusp_star),
        ("fishtail_star.kby", fishtail_star),
        ("cusp_star_expanded.kby", cusp_star_expanded),
        ("s4_two_fishtails.kby", s4_two_fishtails()),
        ("s2xs2_two_cusps.kby", s2xs2_two_cusps()),
    ])
}

fn script(start: &str, moves: Vec<Move>, expect: Expectation) -> MoveScript {
    MoveScript { start: start.into(), moves, expect_start: None, expect: Some(expect), assertions: Vec::new() }
}

fn unchanged() -> Expectation {
    Expectation { unchanged: true, ..Expectation::default() }
}

fn boundary(rank: usize) -> Option<AbelianGroup> {
    Some(AbelianGroup::free(rank))
}

/// Every script file, in a fixed order.
pub fn scripts() -> Vec<(&'static str, MoveScript)> {
    let target = |t: &str| t.to_string();
    let cusp_to_fishtail = Expectation {
        chi: Some(1),
        h1: Some(AbelianGroup::free(1)),
        boundary_h1: boundary(2),
        ..Expectation::default()
    };
    let cusp_start = Expectation {
        chi: Some(2),
        h1: Some(AbelianGroup::trivial()),
        boundary_h1: boundary(1),
        ..Expectation::default()
    };
    let mut figure7_to_t3 = script(
        "figure7.kby",
        vec![
            Move::SurgerDot { target: target("a") },
            Move::Slide { handle: target(surgery::BETA_HANDLE), over: target("t"), sign: 1, half_twist: false },
            Move::Cancel23 { target: target(surgery::BETA_HANDLE) },
        ],
        Expectation { chi: Some(2), boundary_h1: boundary(3), ..Expectation::default() },
    );
    figure7_to_t3.assertions.push(Assertion {
        handle: surgery::BETA_HANDLE.into(),
        unknot: Some(true),
        geometric_runs: Default::default(),
    });
    let mut figure9_to_figure7 = script(
        "torus.kby",
        vec![
            Move::SurgerDot { target: target("a") },
            Move::AddCancellingPair { kind: PairKind::TwoThree, id: target(surgery::BETA_HANDLE) },
            Move::Slide { handle: target("a"), over: target(surgery::BETA_HANDLE), sign: 1, half_twist: true },
            Move::AddDot { target: target("a"), knot: Some("trefoil#-trefoil".into()) },
        ],
        unchanged(),
    );
    figure9_to_figure7.expect = Some(Expectation {
        chi: Some(0),
        h1: Some(AbelianGroup::free(2)),
        h2: Some(AbelianGroup::free(1)),
        boundary_h1: boundary(3),
        ..unchanged()
    });
    let mut c_to_f = script("cusp_nbhd.kby", vec![Move::UndoDual { target: target("delta") }], cusp_to_fishtail.clone());
    c_to_f.expect_start = Some(cusp_start.clone());
    let mut cs_to_fs = script("cusp_star.kby", vec![Move::UndoDual { target: target("delta") }], cusp_to_fishtail);
    cs_to_fs.expect_start = Some(cusp_start);
    vec![
        ("figure7_to_T3.script", figure7_to_t3),
        ("figure9_to_figure7.script", figure9_to_figure7),
        ("fig11_to_fig12.script", script("cusp_star.kby", vec![Move::ExpandSlice { target: target("a") }], unchanged())),
        (
            "fig12_to_fig11.script",
            script(
                "cusp_star_expanded.kby",
                vec![Move::Cancel12 { dotted: target("a_p2"), framed: target("a_mid") }],
                unchanged(),
            ),
        ),
        ("cusp_to_fishtail.script", c_to_f),
        ("cstar_to_fstar.script", cs_to_fs),
        (
            "fishtail_surger.script",
            script(
                "fishtail.kby",
                vec![Move::SurgerDot { target: target("d1") }],
                Expectation { chi: Some(3), boundary_h1: boundary(2), ..Expectation::default() },
            ),
        ),
        (
            "capping_fishtails.script",
            script(
                "s4_two_fishtails.kby",
                vec![],
                Expectation {
                    chi: Some(2),
                    h1: Some(AbelianGroup::trivial()),
                    h2: Some(AbelianGroup::trivial()),
                    ..Expectation::default()
                },
            ),
        ),
        (
            "capping_cusps.script",
            script(
                "s2xs2_two_cusps.kby",
                vec![],
                Expectation {
                    chi: Some(4),
                    sigma: Some(0),
                    h1: Some(AbelianGroup::trivial()),
                    h2: Some(AbelianGroup::free(2)),
                    ..Expectation::default()
                },
            ),
        ),
    ]
}

pub fn k3() -> SwInvariant {
    SwInvariant::new("K3", &["T"], 2, LaurentPoly::one()).expect("valid")
}

/// Knot diagram files.
pub fn knots() -> Vec<(&'static str, KnotDiagram)> {
    vec![
        ("trefoil.knot", knot::catalog("trefoil").expect("catalog")),
        ("figure-eight.knot", knot::figure_eight()),
        ("granny.knot", knot::catalog("granny").expect("catalog")),
    ]
}

/// Every corpus file as (name, contents).
pub fn files() -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (name, s) in structures()? {
        out.push((name.to_string(), s.to_json()));
    }
    for (name, s) in scripts() {
        out.push((name.to_string(), s.to_json()));
    }
    for (name, k) in knots() {
        out.push((name.to_string(), k.to_json() + "\n"));
    }
    out.push(("k3.sw".to_string(), k3().to_json() + "\n"));
    Ok(out)
}

pub fn write_corpus(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {}", dir.display(), e)))?;
    for (name, text) in files()? {
        let p = dir.join(&name);
        std::fs::write(&p, text).map_err(|e| Error::Io(format!("{}: {}", p.display(), e)))?;
    }
    Ok(())
}

/// Files under `dir` that are missing or differ from the generated corpus.
pub fn stale_files(dir: &Path) -> Result<Vec<String>> {
    Ok(files()?
        .into_iter()
        .filter(|(name, text)| std::fs::read_to_string(dir.join(name)).ok().as_deref() != Some(text.as_str()))
        .map(|(name, _)| name)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn start_of(s: &MoveScript) -> HandleStructure {
        let all = structures().unwrap();
        all.into_iter().find(|(n, _)| *n == s.start).unwrap().1
    }

    #[test]
    fn every_script_passes() {
        for (name, s) in scripts() {
            let cert = moves::run_script(&start_of(&s), &s).unwrap_or_else(|e| panic!("{}: {}", name, e));
            let failed: Vec<_> = cert.checks.iter().filter(|c| !c.ok).collect();
            assert!(failed.is_empty(), "{}: {:?}", name, failed);
        }
    }

    #[test]
    fn files_round_trip() {
        for (name, s) in structures().unwrap() {
            let back = HandleStructure::from_json(&s.to_json()).unwrap();
            assert_eq!(back, s, "{}", name);
        }
        for (name, s) in scripts() {
            assert_eq!(MoveScript::from_json(&s.to_json()).unwrap(), s, "{}", name);
        }
        assert_eq!(SwInvariant::from_json(&k3().to_json()).unwrap(), k3());
    }

    #[test]
    fn figure9_script_reaches_figure7() {
        let (_, s) = scripts().into_iter().find(|(n, _)| *n == "figure9_to_figure7.script").unwrap();
        let end = moves::replay(&torus(), &s.moves).unwrap();
        let fig7 = structures().unwrap().into_iter().find(|(n, _)| *n == "figure7.kby").unwrap().1;
        assert_eq!(end.linking_matrix(), fig7.linking_matrix());
        assert_eq!(end.d3(), fig7.d3());
        assert_eq!(end.handles()[0].kind, fig7.handles()[0].kind);
    }
}
