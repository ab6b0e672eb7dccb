//! Kirby moves on handle structures and a certifying script checker.
//!
//! Every move checks what it can from the algebraic data and lists it as
//! verified. Geometric preconditions the data cannot see (an attaching
//! circle being unknotted, a circle running once over a 1-handle) are listed
//! as asserted, whether they come from a flag or are simply assumed. A flag
//! that contradicts a precondition makes the move illegal.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::handlebody::{AbelianGroup, Flags, Handle, HandleKind, HandleStructure, Invariants, SliceRestore};
use crate::{knot, surgery, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairKind {
    #[serde(rename = "1-2")]
    OneTwo,
    #[serde(rename = "2-3")]
    TwoThree,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum Move {
    /// Slide framed `handle` over framed `over`. `half_twist` records a
    /// band drawn with a half twist; it has no algebraic effect.
    Slide {
        handle: String,
        over: String,
        sign: i8,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        half_twist: bool,
    },
    BlowUp { id: String, sign: i8 },
    BlowDown { target: String },
    #[serde(rename = "cancel_12")]
    Cancel12 { dotted: String, framed: String },
    #[serde(rename = "cancel_23")]
    Cancel23 { target: String },
    SurgerDot { target: String },
    /// Put a dot on a 0-framed circle; with `knot`, the result is a slice
    /// 1-handle with that label.
    AddDot {
        target: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        knot: Option<String>,
    },
    ExpandSlice { target: String },
    /// Adds `id` (and, for a 1-2 pair, its partner `{id}_h`).
    AddCancellingPair { kind: PairKind, id: String },
    /// Remove a cusp's dual handle, turning a cusp into a fishtail.
    UndoDual { target: String },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Slide { handle, over, sign, half_twist } => {
                write!(f, "slide {} over {} ({:+})", handle, over, sign)?;
                if *half_twist {
                    write!(f, " with half twist")?;
                }
                Ok(())
            }
            Move::BlowUp { id, sign } => write!(f, "blow_up {} ({:+})", id, sign),
            Move::BlowDown { target } => write!(f, "blow_down {}", target),
            Move::Cancel12 { dotted, framed } => write!(f, "cancel_12 {} {}", dotted, framed),
            Move::Cancel23 { target } => write!(f, "cancel_23 {}", target),
            Move::SurgerDot { target } => write!(f, "surger_dot {}", target),
            Move::AddDot { target, knot: None } => write!(f, "add_dot {}", target),
            Move::AddDot { target, knot: Some(k) } => write!(f, "add_dot {} as {}", target, k),
            Move::ExpandSlice { target } => write!(f, "expand_slice {}", target),
            Move::AddCancellingPair { kind, id } => {
                let k = if *kind == PairKind::OneTwo { "1-2" } else { "2-3" };
                write!(f, "add_cancelling_pair {} {}", k, id)
            }
            Move::UndoDual { target } => write!(f, "undo_dual {}", target),
        }
    }
}

/// Preconditions met while applying one move.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conditions {
    pub verified: Vec<String>,
    pub asserted: Vec<String>,
}

impl Conditions {
    pub(crate) fn check(&mut self, ok: bool, what: impl Into<String>) -> Result<()> {
        let what = what.into();
        if ok {
            self.verified.push(what);
            Ok(())
        } else {
            Err(Error::illegal(format!("requires {}", what)))
        }
    }

    pub(crate) fn assume(&mut self, what: impl Into<String>) {
        self.asserted.push(what.into());
    }

    pub(crate) fn unknot(&mut self, x: &HandleStructure, id: &str) -> Result<()> {
        match x.handle(id).and_then(|h| h.flags.unknot) {
            Some(true) => self.assume(format!("{} is an unknot (flag)", id)),
            Some(false) => return Err(Error::illegal(format!("{} is flagged as knotted", id))),
            None => self.assume(format!("{} is an unknot (no flag)", id)),
        }
        Ok(())
    }

    fn runs_once(&mut self, x: &HandleStructure, h: &str, d: &str) -> Result<()> {
        match x.handle(h).and_then(|k| k.flags.geometric_runs.get(d)) {
            Some(1) => self.assume(format!("{} runs once over {} (flag)", h, d)),
            Some(n) => return Err(Error::illegal(format!("{} is flagged as running {} times over {}", h, n, d))),
            None => self.assume(format!("{} runs once over {} (no flag)", h, d)),
        }
        Ok(())
    }
}

fn kind_of<'a>(x: &'a HandleStructure, id: &str) -> Result<&'a HandleKind> {
    x.handle(id)
        .map(|h| &h.kind)
        .ok_or_else(|| Error::illegal(format!("no handle '{}'", id)))
}

fn framing_of(x: &HandleStructure, id: &str) -> Result<i64> {
    kind_of(x, id)?
        .framing()
        .ok_or_else(|| Error::illegal(format!("'{}' is dotted, not framed", id)))
}

fn fresh(c: &mut Conditions, x: &HandleStructure, id: &str) -> Result<()> {
    c.check(x.handle(id).is_none() && !id.is_empty(), format!("'{}' is a new id", id))
}

fn check_sign(c: &mut Conditions, sign: i8) -> Result<()> {
    c.check(sign == 1 || sign == -1, format!("sign {} is ±1", sign))
}

/// Splits a slice label `K#-K` and resolves `K` in the knot catalog.
pub(crate) fn slice_template(label: &str) -> Result<String> {
    let unsupported = || Error::UnsupportedKnot(format!("no expansion template for slice label '{}'", label));
    let (k, rest) = label.split_once('#').ok_or_else(unsupported)?;
    let mirror = rest.strip_prefix('-').ok_or_else(unsupported)?;
    let mirror = mirror.strip_prefix('(').and_then(|m| m.strip_suffix(')')).unwrap_or(mirror);
    if k != mirror || knot::catalog(k).is_err() {
        return Err(unsupported());
    }
    Ok(k.to_string())
}

/// Slides `i` over `j` once; the caller has checked both are framed.
fn slide_once(x: &mut HandleStructure, i: &str, j: &str, s: i64) {
    let lk = x.link(i, j);
    let fj = x.handle(j).unwrap().kind.framing().unwrap();
    let fi = x.handle(i).unwrap().kind.framing().unwrap();
    let others: Vec<(String, i64)> = x
        .handle(j)
        .unwrap()
        .links
        .iter()
        .filter(|(k, _)| k.as_str() != i)
        .map(|(k, &v)| (k.clone(), v))
        .collect();
    for (k, ljk) in others {
        let v = x.link(i, &k) + s * ljk;
        x.set_link(i, &k, v);
    }
    x.set_link(i, j, lk + s * fj);
    let h = x.handle_mut(i).unwrap();
    h.kind = HandleKind::Framed { framing: fi + fj + 2 * s * lk };
    h.flags = Flags::default();
    // i becomes i + s j, so a 3-handle meeting a i + b j now meets a i' + (b - s a) j.
    if let (Some(ci), Some(cj)) = (x.framed_index(i), x.framed_index(j)) {
        if let Some(d3) = x.d3.as_mut() {
            for row in d3.iter_mut() {
                row[cj] -= s * row[ci];
            }
        }
    }
}

impl Move {
    /// Applies the move, returning the new structure and the conditions it
    /// relied on.
    pub fn apply(&self, x: &HandleStructure) -> Result<(HandleStructure, Conditions)> {
        let mut c = Conditions::default();
        let y = self.apply_with(x, &mut c)?;
        y.validate().map_err(|e| Error::illegal(format!("move leaves an invalid structure: {}", e)))?;
        Ok((y, c))
    }

    fn apply_with(&self, x: &HandleStructure, c: &mut Conditions) -> Result<HandleStructure> {
        let mut y = x.clone();
        match self {
            Move::Slide { handle: i, over: j, sign, .. } => {
                c.check(i != j, format!("{} and {} are distinct", i, j))?;
                framing_of(x, i)?;
                framing_of(x, j)?;
                c.verified.push(format!("{} and {} are framed", i, j));
                check_sign(c, *sign)?;
                slide_once(&mut y, i, j, *sign as i64);
            }
            Move::BlowUp { id, sign } => {
                check_sign(c, *sign)?;
                fresh(c, x, id)?;
                y.push_handle(Handle::framed(id, *sign as i64).with_unknot(true));
            }
            Move::BlowDown { target: h } => {
                let f = framing_of(x, h)?;
                c.check(f.abs() == 1, format!("framing({}) = {} is ±1", h, f))?;
                c.check(x.handle(h).unwrap().links.is_empty(), format!("{} is unlinked from all handles", h))?;
                let col = x.framed_index(h).unwrap();
                c.check(
                    x.d3().is_none_or(|d3| d3.iter().all(|r| r[col] == 0)),
                    format!("no 3-handle meets {}", h),
                )?;
                c.unknot(x, h)?;
                y.remove_handle(h);
            }
            Move::Cancel12 { dotted: d, framed: h } => {
                c.check(
                    matches!(kind_of(x, d)?, HandleKind::Dotted),
                    format!("{} is a plain dotted circle", d),
                )?;
                framing_of(x, h)?;
                let eps = x.link(h, d);
                c.check(eps.abs() == 1, format!("link({}, {}) = {} is ±1", h, d, eps))?;
                c.runs_once(x, h, d)?;
                let spectators: Vec<(String, i64)> = x
                    .framed_ids()
                    .into_iter()
                    .filter(|&k| k != h)
                    .map(|k| (k.to_string(), x.link(k, d)))
                    .filter(|&(_, l)| l != 0)
                    .collect();
                for (k, l) in spectators {
                    let s = -l.signum() * eps;
                    for _ in 0..l.abs() {
                        slide_once(&mut y, &k, h, s);
                    }
                    c.verified.push(format!("{} slid {} times over {} ({:+}) to clear {}", k, l.abs(), h, s, d));
                }
                let restore = y.handle(h).unwrap().flags.slice_restore.clone();
                y.remove_handle(h);
                y.remove_handle(d);
                if let Some(SliceRestore { handle, knot }) = restore {
                    if matches!(y.handle(&handle).map(|p| &p.kind), Some(HandleKind::Dotted)) {
                        y.set_kind(&handle, HandleKind::SliceDotted { knot: knot.clone() });
                        c.verified.push(format!("{} restored as the slice 1-handle of {}", handle, knot));
                    }
                }
            }
            Move::Cancel23 { target: h } => {
                let f = framing_of(x, h)?;
                c.check(f == 0, format!("framing({}) = {} is 0", h, f))?;
                c.check(x.handle(h).unwrap().links.is_empty(), format!("{} is unlinked from all handles", h))?;
                c.check(x.three_handles() >= 1, "a 3-handle is present")?;
                c.unknot(x, h)?;
                let col = x.framed_index(h).unwrap();
                match y.d3.as_mut() {
                    Some(d3) => {
                        let r = d3.iter().position(|row| row[col].abs() == 1).ok_or_else(|| {
                            Error::illegal(format!("requires a 3-handle meeting {} algebraically once", h))
                        })?;
                        c.verified.push(format!("3-handle {} meets {} algebraically once", r + 1, h));
                        let pivot = d3[r].clone();
                        for (k, row) in d3.iter_mut().enumerate() {
                            if k != r && row[col] != 0 {
                                let m = row[col] * pivot[col];
                                for (v, p) in row.iter_mut().zip(&pivot) {
                                    *v -= m * p;
                                }
                            }
                        }
                        d3.remove(r);
                    }
                    None => c.assume(format!("a 3-handle cancels {} (d3 not recorded)", h)),
                }
                y.three_handles -= 1;
                y.remove_handle(h);
                if y.three_handles == 0 {
                    y.d3 = None;
                }
            }
            Move::SurgerDot { target: d } => {
                let kind = kind_of(x, d)?.clone();
                c.check(kind.is_dotted(), format!("{} is dotted", d))?;
                y.set_kind(d, HandleKind::Framed { framing: 0 });
                y.handle_mut(d).unwrap().flags.unknot = Some(matches!(kind, HandleKind::Dotted));
            }
            Move::AddDot { target: h, knot: label } => {
                let f = framing_of(x, h)?;
                c.check(f == 0, format!("framing({}) = {} is 0", h, f))?;
                let handle = x.handle(h).unwrap();
                c.check(
                    handle.links.keys().all(|k| !x.handle(k).unwrap().kind.is_dotted()),
                    format!("{} is unlinked from every dotted circle", h),
                )?;
                let col = x.framed_index(h).unwrap();
                c.check(
                    x.d3().is_none_or(|d3| d3.iter().all(|r| r[col] == 0)),
                    format!("no 3-handle meets {}", h),
                )?;
                let kind = match label {
                    None => {
                        c.unknot(x, h)?;
                        HandleKind::Dotted
                    }
                    Some(l) => {
                        slice_template(l)?;
                        if handle.flags.unknot == Some(true) {
                            return Err(Error::illegal(format!("{} is flagged as an unknot, not {}", h, l)));
                        }
                        c.assume(format!("{} is the knot {} (no check)", h, l));
                        HandleKind::SliceDotted { knot: l.clone() }
                    }
                };
                y.set_kind(h, kind);
                y.handle_mut(h).unwrap().flags = Flags::default();
            }
            Move::ExpandSlice { target: s } => {
                let label = match kind_of(x, s)? {
                    HandleKind::SliceDotted { knot } => knot.clone(),
                    _ => return Err(Error::illegal(format!("requires {} to be a slice 1-handle", s))),
                };
                slice_template(&label)?;
                c.verified.push(format!("{} is the slice 1-handle of {}", s, label));
                let p2 = format!("{}_p2", s);
                let mid = format!("{}_mid", s);
                fresh(c, x, &p2)?;
                fresh(c, x, &mid)?;
                y.set_kind(s, HandleKind::Dotted);
                y.push_handle(Handle::dotted(&p2));
                let mut m = Handle::framed(&mid, 0).with_link(&p2, 1).with_runs(&p2, 1);
                m.flags.slice_restore = Some(SliceRestore { handle: s.clone(), knot: label.clone() });
                y.push_handle(m);
                c.assume(format!("expansion template for {} (stored data)", label));
            }
            Move::AddCancellingPair { kind: PairKind::OneTwo, id } => {
                let h = format!("{}_h", id);
                fresh(c, x, id)?;
                fresh(c, x, &h)?;
                y.push_handle(Handle::dotted(id));
                y.push_handle(Handle::framed(&h, 0).with_link(id, 1).with_runs(id, 1).with_unknot(true));
            }
            Move::AddCancellingPair { kind: PairKind::TwoThree, id } => {
                fresh(c, x, id)?;
                y.d3_mut();
                y.push_handle(Handle::framed(id, 0).with_unknot(true));
                let col = y.framed_index(id).unwrap();
                let width = y.framed_ids().len();
                let mut row = vec![0; width];
                row[col] = 1;
                y.d3.as_mut().unwrap().push(row);
                y.three_handles += 1;
            }
            Move::UndoDual { target } => {
                y = surgery::undo_dual_handle_with(x, target, c)?;
            }
        }
        Ok(y)
    }
}

pub fn slide(x: &HandleStructure, i: &str, j: &str, sign: i8) -> Result<HandleStructure> {
    Move::Slide { handle: i.into(), over: j.into(), sign, half_twist: false }.apply(x).map(|r| r.0)
}

pub fn blow_up(x: &HandleStructure, id: &str, sign: i8) -> Result<HandleStructure> {
    Move::BlowUp { id: id.into(), sign }.apply(x).map(|r| r.0)
}

pub fn blow_down(x: &HandleStructure, h: &str) -> Result<HandleStructure> {
    Move::BlowDown { target: h.into() }.apply(x).map(|r| r.0)
}

pub fn cancel_12(x: &HandleStructure, d: &str, h: &str) -> Result<HandleStructure> {
    Move::Cancel12 { dotted: d.into(), framed: h.into() }.apply(x).map(|r| r.0)
}

pub fn cancel_23(x: &HandleStructure, h: &str) -> Result<HandleStructure> {
    Move::Cancel23 { target: h.into() }.apply(x).map(|r| r.0)
}

pub fn surger_dot(x: &HandleStructure, d: &str) -> Result<HandleStructure> {
    Move::SurgerDot { target: d.into() }.apply(x).map(|r| r.0)
}

pub fn add_dot(x: &HandleStructure, h: &str) -> Result<HandleStructure> {
    Move::AddDot { target: h.into(), knot: None }.apply(x).map(|r| r.0)
}

pub fn expand_slice(x: &HandleStructure, d: &str) -> Result<HandleStructure> {
    Move::ExpandSlice { target: d.into() }.apply(x).map(|r| r.0)
}

pub fn add_cancelling_pair(x: &HandleStructure, kind: PairKind, id: &str) -> Result<HandleStructure> {
    Move::AddCancellingPair { kind, id: id.into() }.apply(x).map(|r| r.0)
}

/// A script-level geometric assertion about one handle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Assertion {
    pub handle: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unknot: Option<bool>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub geometric_runs: BTreeMap<String, u64>,
}

/// Expected invariant values; absent fields are not checked.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h1: Option<AbelianGroup>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h2: Option<AbelianGroup>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_h1: Option<AbelianGroup>,
    /// Require the final invariants to equal the initial ones.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub unchanged: bool,
}

impl Expectation {
    /// Every field of `inv`.
    pub fn exactly(inv: &Invariants) -> Self {
        Expectation {
            chi: Some(inv.chi),
            sigma: Some(inv.sigma),
            h1: Some(inv.h1.clone()),
            h2: Some(inv.h2.clone()),
            boundary_h1: inv.boundary_h1.clone(),
            unchanged: false,
        }
    }

    fn compare(&self, label: &str, inv: &Invariants, initial: &Invariants, out: &mut Vec<Check>) {
        let show = |g: &Option<AbelianGroup>| g.as_ref().map_or("n/a".to_string(), |g| g.to_string());
        let mut push = |name: &str, expected: String, computed: String| {
            out.push(Check { name: format!("{}{}", label, name), ok: expected == computed, expected, computed })
        };
        if let Some(v) = self.chi {
            push("chi", v.to_string(), inv.chi.to_string());
        }
        if let Some(v) = self.sigma {
            push("sigma", v.to_string(), inv.sigma.to_string());
        }
        if let Some(g) = &self.h1 {
            push("h1", g.to_string(), inv.h1.to_string());
        }
        if let Some(g) = &self.h2 {
            push("h2", g.to_string(), inv.h2.to_string());
        }
        if let Some(g) = &self.boundary_h1 {
            push("boundary_h1", g.to_string(), show(&inv.boundary_h1));
        }
        if self.unchanged {
            push("unchanged", initial.to_string(), inv.to_string());
        }
    }
}

/// A move sequence with expectations, as stored in `.script` files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MoveScript {
    /// Path of the starting `.kby`, relative to the script.
    pub start: String,
    #[serde(default)]
    pub moves: Vec<Move>,
    /// Checked against the starting structure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_start: Option<Expectation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expectation>,
    #[serde(default, rename = "assert", skip_serializing_if = "Vec::is_empty")]
    pub assertions: Vec<Assertion>,
}

impl MoveScript {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("script serializes");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    #[serde(rename = "move")]
    pub mv: Move,
    pub verified: Vec<String>,
    pub asserted: Vec<String>,
    pub invariants: Invariants,
}

/// The outcome of checking a script. Steps are numbered from 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub start: String,
    pub initial: Invariants,
    pub steps: Vec<StepRecord>,
    #[serde(rename = "final")]
    pub final_invariants: Invariants,
    pub checks: Vec<Check>,
    pub verified: Vec<String>,
    pub asserted: Vec<String>,
    pub passed: bool,
    #[serde(skip)]
    script: Option<MoveScript>,
}

impl Certificate {
    /// The script that reproduces this certificate.
    pub fn replay_script(&self) -> MoveScript {
        self.script.clone().expect("certificate built by run_script")
    }

    /// First failed check as an error.
    pub fn ensure_passed(&self) -> Result<()> {
        match self.checks.iter().find(|c| !c.ok) {
            Some(c) => Err(Error::InvariantMismatch {
                name: c.name.clone(),
                expected: c.expected.clone(),
                computed: c.computed.clone(),
            }),
            None => Ok(()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

fn apply_assertions(x: &mut HandleStructure, script: &MoveScript, out: &mut Vec<String>) -> Result<()> {
    for a in &script.assertions {
        let Some(h) = x.handle_mut(&a.handle) else { continue };
        if let Some(u) = a.unknot {
            match h.flags.unknot {
                Some(prev) if prev != u => {
                    return Err(Error::validation(
                        "assert",
                        format!("script asserts unknot({}) = {} against its flag", a.handle, u),
                    ))
                }
                Some(_) => {}
                None => {
                    h.flags.unknot = Some(u);
                    out.push(format!("script: unknot({}) = {}", a.handle, u));
                }
            }
        }
        for (d, &n) in &a.geometric_runs {
            if h.flags.geometric_runs.insert(d.clone(), n) != Some(n) {
                out.push(format!("script: {} runs {} times over {}", a.handle, n, d));
            }
        }
    }
    Ok(())
}

/// Runs a script from `x0`, failing fast on the first illegal move.
/// Expectation mismatches are recorded in the certificate, not raised.
pub fn run_script(x0: &HandleStructure, script: &MoveScript) -> Result<Certificate> {
    let initial = x0.invariants()?;
    let mut checks = Vec::new();
    if let Some(e) = &script.expect_start {
        e.compare("start.", &initial, &initial, &mut checks);
    }
    let mut x = x0.clone();
    let mut steps = Vec::with_capacity(script.moves.len());
    let mut verified = Vec::new();
    let mut asserted = Vec::new();
    for (k, mv) in script.moves.iter().enumerate() {
        let step = k + 1;
        let mut script_asserts = Vec::new();
        apply_assertions(&mut x, script, &mut script_asserts)?;
        asserted.extend(script_asserts.iter().map(|a| format!("step {}: {}", step, a)));
        let (y, c) = mv.apply(&x).map_err(|e| match e {
            Error::IllegalMove { reason, .. } => Error::IllegalMove { step, reason: format!("{}: {}", mv, reason) },
            other => other,
        })?;
        x = y;
        verified.extend(c.verified.iter().map(|v| format!("step {} ({}): {}", step, mv, v)));
        asserted.extend(c.asserted.iter().map(|a| format!("step {} ({}): {}", step, mv, a)));
        let invariants = x.invariants().map_err(|e| Error::IllegalMove { step, reason: e.to_string() })?;
        steps.push(StepRecord { step, mv: mv.clone(), verified: c.verified, asserted: c.asserted, invariants });
    }
    let final_invariants = x.invariants()?;
    if let Some(e) = &script.expect {
        e.compare("", &final_invariants, &initial, &mut checks);
    }
    let passed = checks.iter().all(|c| c.ok);
    Ok(Certificate {
        start: script.start.clone(),
        initial,
        steps,
        final_invariants,
        checks,
        verified,
        asserted,
        passed,
        script: Some(script.clone()),
    })
}

/// [`run_script`], raising the first expectation mismatch as an error.
pub fn verify_script(x0: &HandleStructure, script: &MoveScript) -> Result<Certificate> {
    let cert = run_script(x0, script)?;
    cert.ensure_passed()?;
    Ok(cert)
}

/// Loads a script file and its start structure (relative to the script).
pub fn load_script(path: &Path) -> Result<(MoveScript, HandleStructure)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {}", path.display(), e)))?;
    let script = MoveScript::from_json(&text).map_err(|e| Error::Parse(format!("{}: {}", path.display(), e)))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let x0 = HandleStructure::load(&base.join(&script.start))?;
    Ok((script, x0))
}

/// Final structure after a script, for callers that need the result.
pub fn replay(x0: &HandleStructure, moves: &[Move]) -> Result<HandleStructure> {
    let mut x = x0.clone();
    for (k, mv) in moves.iter().enumerate() {
        x = mv
            .apply(&x)
            .map_err(|e| match e {
                Error::IllegalMove { reason, .. } => Error::IllegalMove { step: k + 1, reason },
                other => other,
            })?
            .0;
    }
    Ok(x)
}
