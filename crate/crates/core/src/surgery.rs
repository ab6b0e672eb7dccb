//! Knot surgery along a c-embedded torus.
//!
//! On handle data, surgery swaps the `T²×B²` inside a marked structure for
//! `(S³−N(K))×S¹`: one 1-handle of the torus nbhd becomes the slice 1-handle
//! of `K#(−K)` and a new 2-handle identifies the remaining core circle of the
//! two knot complements. On Seiberg-Witten data it multiplies by `Δ_K`
//! evaluated at `exp(2[T])`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::handlebody::{Handle, HandleKind, HandleStructure};
use crate::knot::{self, ALEXANDER_VAR};
use crate::laurent::{write_terms, LaurentPoly, Monomial};
use crate::moves::Conditions;
use crate::{Error, Result};

/// Handles of an embedded `T²×B²`, optionally inside a cusp or fishtail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusMarking {
    pub dotted_a: String,
    pub dotted_b: String,
    pub framed_t: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<String>,
}

impl TorusMarking {
    pub fn new(a: &str, b: &str, t: &str) -> Self {
        TorusMarking { dotted_a: a.into(), dotted_b: b.into(), framed_t: t.into(), gamma: None, delta: None }
    }

    pub fn with_vanishing(mut self, gamma: Option<&str>, delta: Option<&str>) -> Self {
        self.gamma = gamma.map(Into::into);
        self.delta = delta.map(Into::into);
        self
    }

    /// Both −1-framed vanishing-cycle handles are present.
    pub fn is_cusp(&self) -> bool {
        self.gamma.is_some() && self.delta.is_some()
    }
}

/// Checks the `T²×B²` pattern and any vanishing-cycle handles, listing
/// every failed condition.
pub fn mark_torus(x: &HandleStructure, m: TorusMarking) -> Result<TorusMarking> {
    let mut failed = Vec::new();
    for d in [&m.dotted_a, &m.dotted_b] {
        match x.handle(d).map(|h| &h.kind) {
            Some(HandleKind::Dotted) => {}
            Some(_) => failed.push(format!("{} is not a plain dotted circle", d)),
            None => failed.push(format!("no handle '{}'", d)),
        }
    }
    if m.dotted_a == m.dotted_b {
        failed.push("the two 1-handles must differ".to_string());
    }
    let t = &m.framed_t;
    match x.handle(t) {
        None => failed.push(format!("no handle '{}'", t)),
        Some(h) => {
            if h.kind.framing() != Some(0) {
                failed.push(format!("{} must be a 0-framed 2-handle", t));
            }
            for d in [&m.dotted_a, &m.dotted_b] {
                if h.link(d) != 0 {
                    failed.push(format!("link({}, {}) = {} must be 0", t, d, h.link(d)));
                }
                if h.flags.geometric_runs.get(d.as_str()) != Some(&2) {
                    failed.push(format!("{} must be flagged as running twice over {}", t, d));
                }
            }
        }
    }
    for v in m.gamma.iter().chain(&m.delta) {
        match x.handle(v) {
            None => failed.push(format!("no handle '{}'", v)),
            Some(h) => {
                if h.kind.framing() != Some(-1) {
                    failed.push(format!("{} must be a -1-framed 2-handle", v));
                }
                let dotted: Vec<(&String, i64)> = h
                    .links
                    .iter()
                    .filter(|(k, _)| x.handle(k).is_some_and(|o| o.kind.is_dotted()))
                    .map(|(k, &l)| (k, l))
                    .collect();
                let once = dotted.len() == 1
                    && dotted[0].1.abs() == 1
                    && [&m.dotted_a, &m.dotted_b].contains(&dotted[0].0);
                if !once {
                    failed.push(format!("{} must link exactly one of the torus 1-handles once", v));
                }
            }
        }
    }
    if m.gamma.is_some() && m.gamma == m.delta {
        failed.push("gamma and delta must differ".to_string());
    }
    if failed.is_empty() {
        Ok(m)
    } else {
        Err(Error::Marking(failed.join("; ")))
    }
}

/// Core circles of the 1-handles of a knot complement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplementPresentation {
    pub knot: String,
    pub core_circles: Vec<String>,
}

impl ComplementPresentation {
    /// Built-in presentations; only the genus-one two-circle case is stored.
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "trefoil" | "left-trefoil" | "right-trefoil" => Ok(ComplementPresentation {
                knot: name.to_string(),
                core_circles: vec!["alpha".into(), "beta".into()],
            }),
            _ => {
                knot::catalog(name)?;
                Err(Error::UnsupportedKnot(format!("no complement presentation stored for '{}'", name)))
            }
        }
    }

    pub fn genus(&self) -> usize {
        self.core_circles.len()
    }

    pub fn slice_label(&self) -> String {
        format!("{}#-{}", self.knot, self.knot)
    }
}

/// Id of the 2-handle that identifies the second core circle.
pub const BETA_HANDLE: &str = "ks_beta";

/// Rewrites `x` into `x_K`. The τ-handle stays as the first identification
/// circle; `b` stays; `a` becomes the slice 1-handle of `K#(−K)`; a 0-framed
/// `ks_beta` identifies the second core circle and is paired with a new
/// 3-handle. Invariant equality is checked before returning.
pub fn knot_surgery_diagram(x: &HandleStructure, m: &TorusMarking, k: &ComplementPresentation) -> Result<HandleStructure> {
    let m = mark_torus(x, m.clone())?;
    if k.genus() != 2 {
        return Err(Error::UnsupportedKnot(format!(
            "template needs a two-circle complement presentation, '{}' has {}",
            k.knot,
            k.genus()
        )));
    }
    if x.handle(BETA_HANDLE).is_some() {
        return Err(Error::Marking(format!("id '{}' is reserved for the surgery template", BETA_HANDLE)));
    }
    let mut y = x.clone();
    y.set_kind(&m.dotted_a, HandleKind::SliceDotted { knot: k.slice_label() });
    y.d3_mut();
    y.push_handle(Handle::framed(BETA_HANDLE, 0));
    let col = y.framed_index(BETA_HANDLE).expect("just added");
    let mut row = vec![0; y.framed_ids().len()];
    row[col] = 1;
    y.d3.as_mut().expect("materialized").push(row);
    y.three_handles += 1;
    y.validate()?;

    let before = x.invariants()?;
    let after = y.invariants()?;
    if before != after {
        return Err(Error::Contract(format!("surgery template changed invariants: {} vs {}", before, after)));
    }
    Ok(y)
}

pub fn undo_dual_handle(x: &HandleStructure, delta: &str) -> Result<HandleStructure> {
    let mut c = Conditions::default();
    undo_dual_handle_with(x, delta, &mut c)
}

/// Removes a cusp's −1-framed vanishing-cycle handle.
pub(crate) fn undo_dual_handle_with(x: &HandleStructure, delta: &str, c: &mut Conditions) -> Result<HandleStructure> {
    let h = x.handle(delta).ok_or_else(|| Error::illegal(format!("no handle '{}' to remove", delta)))?;
    c.check(h.kind.framing() == Some(-1), format!("{} is -1-framed", delta))?;
    let dotted: Vec<(&String, i64)> = h.links.iter().map(|(k, &l)| (k, l)).collect();
    let ok = dotted.len() == 1
        && dotted[0].1.abs() == 1
        && x.handle(dotted[0].0).is_some_and(|d| d.kind.is_dotted());
    c.check(ok, format!("{} links exactly one 1-handle, once, and nothing else", delta))?;
    let col = x.framed_index(delta).expect("framed");
    c.check(x.d3().is_none_or(|d3| d3.iter().all(|r| r[col] == 0)), format!("no 3-handle meets {}", delta))?;
    let mut y = x.clone();
    y.remove_handle(delta);
    Ok(y)
}

/// A Seiberg-Witten polynomial over a declared H² basis. The variable `T`
/// stands for `exp([T])`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwInvariant {
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub manifold: String,
    pub basis: Vec<String>,
    pub epsilon: i64,
    #[serde(rename = "sw")]
    pub poly: LaurentPoly,
}

impl SwInvariant {
    pub fn new(manifold: &str, basis: &[&str], epsilon: i64, poly: LaurentPoly) -> Result<Self> {
        let sw = SwInvariant {
            manifold: manifold.into(),
            basis: basis.iter().map(|s| s.to_string()).collect(),
            epsilon,
            poly,
        };
        sw.validate()?;
        Ok(sw)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let sw: SwInvariant = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        sw.validate()?;
        Ok(sw)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("sw serializes")
    }

    fn validate(&self) -> Result<()> {
        if let Some(v) = self.poly.variables().into_iter().find(|v| !self.basis.contains(v)) {
            return Err(Error::validation("sw", format!("variable '{}' is not in the basis", v)));
        }
        if !sw_symmetry_check(self) {
            return Err(Error::validation("sw", format!("SW is not symmetric with epsilon = {}", self.epsilon)));
        }
        Ok(())
    }

    /// Classes with nonzero invariant, as (coordinates, coefficient).
    pub fn basic_classes(&self) -> Vec<(Vec<i64>, num_bigint::BigInt)> {
        self.poly
            .terms_desc()
            .map(|(m, c)| (self.basis.iter().map(|b| m.exponent(b)).collect(), c.clone()))
            .collect()
    }

    pub fn class_name(&self, coords: &[i64]) -> String {
        let parts: Vec<String> = self
            .basis
            .iter()
            .zip(coords)
            .filter(|(_, &k)| k != 0)
            .map(|(b, &k)| match k {
                1 => b.clone(),
                -1 => format!("-{}", b),
                k => format!("{}{}", k, b),
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ").replace("+ -", "- ")
        }
    }

    /// The polynomial written in `exp(...)` notation.
    pub fn display_poly(&self) -> String {
        ExpForm(&self.poly).to_string()
    }
}

struct ExpForm<'a>(&'a LaurentPoly);

impl fmt::Display for ExpForm<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.0.terms_desc(), |f, m: &Monomial| {
            let mut first = true;
            write!(f, "exp(")?;
            for (v, k) in m.iter() {
                let sep = match (first, k < 0) {
                    (true, true) => "-",
                    (true, false) => "",
                    (false, true) => " - ",
                    (false, false) => " + ",
                };
                first = false;
                if k.abs() == 1 {
                    write!(f, "{}{}", sep, v)?;
                } else {
                    write!(f, "{}{}{}", sep, k.abs(), v)?;
                }
            }
            write!(f, ")")
        })
    }
}

/// `SW(−a) = (−1)^ε SW(a)`.
pub fn sw_symmetry_check(sw: &SwInvariant) -> bool {
    sw.poly.is_symmetric(sw.epsilon)
}

/// `(e + σ) / 4`.
pub fn epsilon_of(e: i64, sigma: i64) -> Result<i64> {
    if (e + sigma) % 4 != 0 {
        return Err(Error::Contract(format!("e + sigma = {} is not divisible by 4", e + sigma)));
    }
    Ok((e + sigma) / 4)
}

/// `SW_{X_K} = SW_X · Δ_K(exp(2[T]))` for a torus in class `torus_class`.
pub fn sw_knot_surgery(sw: &SwInvariant, torus_class: &[i64], delta: &LaurentPoly) -> Result<SwInvariant> {
    if torus_class.len() != sw.basis.len() {
        return Err(Error::validation("torus class", format!("needs {} coordinates", sw.basis.len())));
    }
    if torus_class.iter().all(|&k| k == 0) {
        return Err(Error::validation("torus class", "must be nonzero"));
    }
    if delta.variables().iter().any(|v| v != ALEXANDER_VAR) {
        return Err(Error::Contract(format!("Alexander polynomial must be in {}", ALEXANDER_VAR)));
    }
    if !delta.is_symmetric(0) || delta.eval_at_one() != 1.into() {
        return Err(Error::Contract(format!("{} is not a normalized Alexander polynomial", delta)));
    }
    let t = Monomial::from_exponents(sw.basis.iter().map(String::as_str).zip(torus_class.iter().map(|k| 2 * k)));
    let poly = &sw.poly * &delta.substitute(ALEXANDER_VAR, &t);
    let out = SwInvariant { poly, ..sw.clone() };
    if !sw_symmetry_check(&out) {
        return Err(Error::Contract("surgered SW lost its symmetry".into()));
    }
    Ok(out)
}

/// True when the polynomials differ, which rules out a diffeomorphism.
/// False is inconclusive.
pub fn is_fake_pair(a: &SwInvariant, b: &SwInvariant) -> Result<bool> {
    if a.basis != b.basis {
        return Err(Error::validation("sw", format!("bases differ: {:?} vs {:?}", a.basis, b.basis)));
    }
    Ok(a.poly != b.poly)
}
