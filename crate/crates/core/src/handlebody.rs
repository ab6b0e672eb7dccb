//! Handle structures of compact 4-manifolds and their invariants.
//!
//! A structure is a single 0-handle with dotted circles (1-handles), framed
//! attaching circles (2-handles) and counts of 3- and 4-handles. Only
//! algebraic data is stored: framings, pairwise linking numbers, and
//! asserted geometric flags that the algebra cannot see.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::validation;
use crate::snf::{smith_normal_form, Matrix};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HandleKind {
    Dotted,
    /// Slice 1-handle: the complement of the standard slice disc of `knot`.
    SliceDotted { knot: String },
    Framed { framing: i64 },
}

impl HandleKind {
    pub fn is_dotted(&self) -> bool {
        !matches!(self, HandleKind::Framed { .. })
    }

    pub fn framing(&self) -> Option<i64> {
        match self {
            HandleKind::Framed { framing } => Some(*framing),
            _ => None,
        }
    }
}

/// Records which slice 1-handle a framed handle came from when a slice
/// handle was expanded, so that cancelling it restores the label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceRestore {
    pub handle: String,
    pub knot: String,
}

/// Geometric assertions about an attaching circle.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flags {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unknot: Option<bool>,
    /// Number of times the circle passes through each named dotted circle.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub geometric_runs: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slice_restore: Option<SliceRestore>,
}

impl Flags {
    pub fn is_empty(&self) -> bool {
        *self == Flags::default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Handle {
    pub id: String,
    pub kind: HandleKind,
    /// Nonzero linking numbers with other handles, kept symmetric by the
    /// owning structure.
    pub links: BTreeMap<String, i64>,
    pub flags: Flags,
}

impl Handle {
    pub fn dotted(id: &str) -> Self {
        Handle { id: id.to_string(), kind: HandleKind::Dotted, links: BTreeMap::new(), flags: Flags::default() }
    }

    pub fn slice_dotted(id: &str, knot: &str) -> Self {
        Handle {
            kind: HandleKind::SliceDotted { knot: knot.to_string() },
            ..Handle::dotted(id)
        }
    }

    pub fn framed(id: &str, framing: i64) -> Self {
        Handle { kind: HandleKind::Framed { framing }, ..Handle::dotted(id) }
    }

    pub fn with_link(mut self, other: &str, lk: i64) -> Self {
        self.links.insert(other.to_string(), lk);
        self
    }

    pub fn with_runs(mut self, other: &str, runs: u64) -> Self {
        self.flags.geometric_runs.insert(other.to_string(), runs);
        self
    }

    pub fn with_unknot(mut self, unknot: bool) -> Self {
        self.flags.unknot = Some(unknot);
        self
    }

    pub fn link(&self, other: &str) -> i64 {
        self.links.get(other).copied().unwrap_or(0)
    }
}

/// A finitely generated abelian group `Z^free_rank ⊕ Z/t1 ⊕ ... ⊕ Z/tk`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    #[serde(default)]
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    pub fn free(rank: usize) -> Self {
        AbelianGroup { free_rank: rank, torsion: Vec::new() }
    }

    pub fn trivial() -> Self {
        AbelianGroup::free(0)
    }

    /// Cokernel of `m`, viewed as a map `Z^cols -> Z^rows`.
    pub fn cokernel(m: &Matrix) -> Self {
        let snf = smith_normal_form(m);
        let rank = snf.rank();
        let torsion = snf
            .diagonal
            .iter()
            .filter(|d| d.abs() > 1)
            .map(|d| d.unsigned_abs() as u64)
            .collect();
        AbelianGroup { free_rank: m.rows() - rank, torsion }
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{}", r)),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{}", t)));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// The five invariants tracked through moves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invariants {
    pub chi: i64,
    pub sigma: i64,
    pub h1: AbelianGroup,
    pub h2: AbelianGroup,
    /// Absent for closed manifolds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_h1: Option<AbelianGroup>,
}

impl fmt::Display for Invariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi={} sigma={} H1={} H2={}", self.chi, self.sigma, self.h1, self.h2)?;
        match &self.boundary_h1 {
            Some(b) => write!(f, " H1(boundary)={}", b),
            None => write!(f, " H1(boundary)=n/a (closed)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HandleStructure {
    pub(crate) handles: Vec<Handle>,
    pub(crate) three_handles: usize,
    pub(crate) four_handles: usize,
    /// Rows are 3-handles, columns framed handles in list order.
    pub(crate) d3: Option<Vec<Vec<i64>>>,
    pub(crate) closed: bool,
}

impl HandleStructure {
    /// Builds and validates a structure. Links may be given on either side of
    /// each pair (or both, if they agree).
    pub fn new(handles: Vec<Handle>, three_handles: usize, four_handles: usize) -> Result<Self> {
        let mut s = HandleStructure { handles, three_handles, four_handles, d3: None, closed: false };
        s.symmetrize()?;
        s.validate()?;
        Ok(s)
    }

    pub fn with_d3(mut self, d3: Vec<Vec<i64>>) -> Result<Self> {
        self.d3 = Some(d3);
        self.validate()?;
        Ok(self)
    }

    pub fn closed(mut self, closed: bool) -> Self {
        self.closed = closed;
        self
    }

    pub fn ball() -> Self {
        HandleStructure { handles: Vec::new(), three_handles: 0, four_handles: 0, d3: None, closed: false }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawStructure = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        raw.into_structure()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {}", path.display(), e)))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Parse(m) => Error::Parse(format!("{}: {}", path.display(), m)),
            Error::Validation { what, reason } => Error::Validation { what, reason: format!("{}: {}", path.display(), reason) },
            other => other,
        })
    }

    /// Canonical pretty JSON; each linked pair is written once, on the
    /// handle that comes first.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&RawStructure::from(self)).expect("structure serializes");
        s.push('\n');
        s
    }

    pub fn handles(&self) -> &[Handle] {
        &self.handles
    }

    pub fn handle(&self, id: &str) -> Option<&Handle> {
        self.handles.iter().find(|h| h.id == id)
    }

    pub(crate) fn index_of(&self, id: &str) -> Option<usize> {
        self.handles.iter().position(|h| h.id == id)
    }

    pub(crate) fn handle_mut(&mut self, id: &str) -> Option<&mut Handle> {
        self.handles.iter_mut().find(|h| h.id == id)
    }

    pub fn three_handles(&self) -> usize {
        self.three_handles
    }

    pub fn four_handles(&self) -> usize {
        self.four_handles
    }

    pub fn d3(&self) -> Option<&Vec<Vec<i64>>> {
        self.d3.as_ref()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn link(&self, a: &str, b: &str) -> i64 {
        self.handle(a).map_or(0, |h| h.link(b))
    }

    /// Sets a linking number on both handles. Both must exist.
    pub(crate) fn set_link(&mut self, a: &str, b: &str, lk: i64) {
        for (x, y) in [(a, b), (b, a)] {
            let h = self.handle_mut(x).expect("link endpoint exists");
            if lk == 0 {
                h.links.remove(y);
            } else {
                h.links.insert(y.to_string(), lk);
            }
        }
    }

    pub fn dotted_ids(&self) -> Vec<&str> {
        self.handles.iter().filter(|h| h.kind.is_dotted()).map(|h| h.id.as_str()).collect()
    }

    pub fn framed_ids(&self) -> Vec<&str> {
        self.handles.iter().filter(|h| !h.kind.is_dotted()).map(|h| h.id.as_str()).collect()
    }

    /// Column of `id` in `d3`.
    pub(crate) fn framed_index(&self, id: &str) -> Option<usize> {
        self.framed_ids().iter().position(|&f| f == id)
    }

    pub fn euler_characteristic(&self) -> i64 {
        let dotted = self.dotted_ids().len() as i64;
        let framed = self.framed_ids().len() as i64;
        1 - dotted + framed - self.three_handles as i64 + self.four_handles as i64
    }

    /// `∂₂`: rows dotted, columns framed, entries algebraic linking.
    pub fn boundary_map(&self) -> Matrix {
        let dotted = self.dotted_ids();
        let framed = self.framed_ids();
        let mut m = Matrix::zeros(dotted.len(), framed.len());
        for (i, d) in dotted.iter().enumerate() {
            for (j, f) in framed.iter().enumerate() {
                m[(i, j)] = self.link(f, d) as i128;
            }
        }
        m
    }

    /// Symmetric linking matrix of all handles in list order, with framings
    /// on the diagonal and 0 for dotted handles.
    pub fn linking_matrix(&self) -> Matrix {
        let n = self.handles.len();
        let mut m = Matrix::zeros(n, n);
        for (i, a) in self.handles.iter().enumerate() {
            for (j, b) in self.handles.iter().enumerate() {
                m[(i, j)] = if i == j { a.kind.framing().unwrap_or(0) as i128 } else { a.link(&b.id) as i128 };
            }
        }
        m
    }

    /// Linking form on the framed handles.
    pub fn framed_linking_matrix(&self) -> Matrix {
        let framed: Vec<usize> = (0..self.handles.len()).filter(|&i| !self.handles[i].kind.is_dotted()).collect();
        let full = self.linking_matrix();
        let mut m = Matrix::zeros(framed.len(), framed.len());
        for (a, &i) in framed.iter().enumerate() {
            for (b, &j) in framed.iter().enumerate() {
                m[(a, b)] = full[(i, j)];
            }
        }
        m
    }

    /// `d3` as a map `Z^{#3} -> Z^{#framed}` (columns are images); zero when
    /// absent.
    pub fn d3_map(&self) -> Matrix {
        let framed = self.framed_ids().len();
        let mut m = Matrix::zeros(framed, self.three_handles);
        if let Some(d3) = &self.d3 {
            for (r, row) in d3.iter().enumerate() {
                for (c, &v) in row.iter().enumerate() {
                    m[(c, r)] = v as i128;
                }
            }
        }
        m
    }

    /// `(H₁, H₂)` of the chain complex `Z^{#3} → Z^{#framed} → Z^{#dotted}`.
    pub fn homology(&self) -> (AbelianGroup, AbelianGroup) {
        let d2 = self.boundary_map();
        let h1 = AbelianGroup::cokernel(&d2);
        let snf = smith_normal_form(&d2);
        let kernel_dim = d2.cols() - snf.rank();
        let d3 = self.d3_map();
        let mut coords = Matrix::zeros(kernel_dim, d3.cols());
        for c in 0..d3.cols() {
            for (r, v) in snf.kernel_coordinates(&d3.column(c)).into_iter().enumerate() {
                coords[(r, c)] = v;
            }
        }
        (h1, AbelianGroup::cokernel(&coords))
    }

    /// Signature of the linking form restricted to `ker ∂₂`.
    pub fn signature(&self) -> i64 {
        let d2 = self.boundary_map();
        let basis = smith_normal_form(&d2).kernel_basis();
        let q = self.framed_linking_matrix();
        let k = basis.len();
        let mut b = Matrix::zeros(q.rows(), k);
        for (j, v) in basis.iter().enumerate() {
            for (i, &x) in v.iter().enumerate() {
                b[(i, j)] = x;
            }
        }
        let restricted = b.transpose().mul(&q).mul(&b);
        form_signature(&restricted.to_rows())
    }

    /// `H₁(∂X)` from the surgery picture with every dot replaced by 0.
    ///
    /// Each 3-handle is attached along a 2-sphere that is non-separating in
    /// that picture and kills one free generator. `None` when closed.
    pub fn boundary_h1(&self) -> Result<Option<AbelianGroup>> {
        if self.closed {
            return Ok(None);
        }
        let mut g = AbelianGroup::cokernel(&self.linking_matrix());
        if g.free_rank < self.three_handles {
            return Err(validation(
                "3-handles",
                format!(
                    "{} 3-handles but the dot-to-zero boundary has free rank {}",
                    self.three_handles, g.free_rank
                ),
            ));
        }
        g.free_rank -= self.three_handles;
        Ok(Some(g))
    }

    pub fn invariants(&self) -> Result<Invariants> {
        let (h1, h2) = self.homology();
        Ok(Invariants {
            chi: self.euler_characteristic(),
            sigma: self.signature(),
            h1,
            h2,
            boundary_h1: self.boundary_h1()?,
        })
    }

    /// Mirrors one-sided link entries and rejects disagreeing pairs.
    fn symmetrize(&mut self) -> Result<()> {
        let mut pairs: BTreeMap<(String, String), i64> = BTreeMap::new();
        for h in &self.handles {
            for (other, &lk) in &h.links {
                let key = if h.id <= *other { (h.id.clone(), other.clone()) } else { (other.clone(), h.id.clone()) };
                if let Some(&prev) = pairs.get(&key) {
                    if prev != lk {
                        return Err(validation(
                            "links",
                            format!("link({}, {}) given as both {} and {}", key.0, key.1, prev, lk),
                        ));
                    }
                }
                pairs.insert(key, lk);
            }
        }
        for h in &mut self.handles {
            h.links.clear();
        }
        let ids: BTreeSet<String> = self.handles.iter().map(|h| h.id.clone()).collect();
        for ((a, b), lk) in pairs {
            for (x, y) in [(&a, &b), (&b, &a)] {
                if !ids.contains(y) {
                    return Err(validation("links", format!("handle '{}' links unknown handle '{}'", x, y)));
                }
            }
            if a == b {
                return Err(validation("links", format!("handle '{}' links itself; use framing", a)));
            }
            if lk != 0 {
                self.set_link(&a, &b, lk);
            }
        }
        Ok(())
    }

    /// Checks every structural invariant.
    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for h in &self.handles {
            if h.id.is_empty() {
                return Err(validation("handles", "empty handle id"));
            }
            if !seen.insert(h.id.as_str()) {
                return Err(validation("handles", format!("duplicate handle id '{}'", h.id)));
            }
        }
        for h in &self.handles {
            for (other, &lk) in &h.links {
                let o = self
                    .handle(other)
                    .ok_or_else(|| validation("links", format!("handle '{}' links unknown handle '{}'", h.id, other)))?;
                if o.link(&h.id) != lk {
                    return Err(validation("links", format!("link({}, {}) is not symmetric", h.id, other)));
                }
                if lk == 0 {
                    return Err(validation("links", format!("zero link({}, {}) stored", h.id, other)));
                }
                if h.kind.is_dotted() && o.kind.is_dotted() {
                    return Err(validation(
                        "links",
                        format!("dotted circles '{}' and '{}' must be unlinked", h.id, other),
                    ));
                }
            }
            for (other, &runs) in &h.flags.geometric_runs {
                if self.handle(other).is_none() {
                    return Err(validation(
                        "flags",
                        format!("handle '{}' has runs through unknown handle '{}'", h.id, other),
                    ));
                }
                let lk = h.link(other).unsigned_abs();
                if runs < lk || (runs - lk) % 2 != 0 {
                    return Err(validation(
                        "flags",
                        format!(
                            "handle '{}' runs {} times through '{}' but links it {} times",
                            h.id,
                            runs,
                            other,
                            h.link(other)
                        ),
                    ));
                }
            }
        }
        if let Some(d3) = &self.d3 {
            let framed = self.framed_ids().len();
            if d3.len() != self.three_handles || d3.iter().any(|r| r.len() != framed) {
                return Err(validation(
                    "d3",
                    format!(
                        "expected {} rows of length {} (3-handles by framed handles)",
                        self.three_handles, framed
                    ),
                ));
            }
            if !self.boundary_map().mul(&self.d3_map()).is_zero() {
                return Err(validation("d3", "∂₂ ∘ d3 is not zero"));
            }
        }
        if self.closed && self.four_handles != 1 {
            return Err(validation("closed", "a closed structure has exactly one 4-handle"));
        }
        Ok(())
    }

    /// Removes a handle together with its links and `d3` column.
    pub(crate) fn remove_handle(&mut self, id: &str) -> Handle {
        if let (Some(col), Some(d3)) = (self.framed_index(id), self.d3.as_mut()) {
            for row in d3.iter_mut() {
                row.remove(col);
            }
        }
        let i = self.index_of(id).expect("handle exists");
        let h = self.handles.remove(i);
        for other in &mut self.handles {
            other.links.remove(id);
            other.flags.geometric_runs.remove(id);
        }
        h
    }

    /// Appends a handle (links must point at existing handles) and gives it
    /// a zero `d3` column.
    pub(crate) fn push_handle(&mut self, h: Handle) {
        let links: Vec<(String, i64)> = h.links.iter().map(|(k, &v)| (k.clone(), v)).collect();
        let framed = !h.kind.is_dotted();
        let id = h.id.clone();
        self.handles.push(Handle { links: BTreeMap::new(), ..h });
        for (other, lk) in links {
            self.set_link(&id, &other, lk);
        }
        if framed {
            if let Some(d3) = self.d3.as_mut() {
                for row in d3.iter_mut() {
                    row.push(0);
                }
            }
        }
    }

    /// Changes a handle's kind in place, keeping `d3` columns aligned.
    pub(crate) fn set_kind(&mut self, id: &str, kind: HandleKind) {
        let was = self.framed_index(id);
        self.handle_mut(id).expect("handle exists").kind = kind;
        let now = self.framed_index(id);
        if let Some(d3) = self.d3.as_mut() {
            match (was, now) {
                (Some(c), None) => d3.iter_mut().for_each(|r| {
                    r.remove(c);
                }),
                (None, Some(c)) => d3.iter_mut().for_each(|r| r.insert(c, 0)),
                _ => {}
            }
        }
    }

    /// Materializes `d3` as a zero matrix if absent.
    pub(crate) fn d3_mut(&mut self) -> &mut Vec<Vec<i64>> {
        let framed = self.framed_ids().len();
        let rows = self.three_handles;
        self.d3.get_or_insert_with(|| vec![vec![0; framed]; rows])
    }
}

/// Signature of a symmetric integer matrix by exact congruence
/// diagonalization over Q.
#[allow(clippy::needless_range_loop)]
pub fn form_signature(rows: &[Vec<i128>]) -> i64 {
    let n = rows.len();
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let mut sig = 0i64;
    for k in 0..n {
        if a[k][k].is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !a[i][i].is_zero()) {
                a.swap(k, i);
                for row in a.iter_mut() {
                    row.swap(k, i);
                }
            } else if let Some((i, j)) = (k..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_zero())
            {
                // a[i][i] = a[j][j] = 0, so adding j to i makes a[i][i] = 2 a[i][j].
                for c in 0..n {
                    let v = a[j][c].clone();
                    a[i][c] += v;
                }
                for row in a.iter_mut() {
                    let v = row[j].clone();
                    row[i] += v;
                }
                a.swap(k, i);
                for row in a.iter_mut() {
                    row.swap(k, i);
                }
            } else {
                break;
            }
        }
        let pivot = a[k][k].clone();
        sig += if pivot.is_positive() { 1 } else { -1 };
        for r in k + 1..n {
            if a[r][k].is_zero() {
                continue;
            }
            let f = &a[r][k] / &pivot;
            for c in k..n {
                let v = &f * &a[k][c];
                a[r][c] -= v;
            }
            for row in a.iter_mut() {
                let v = &f * &row[k];
                row[r] -= v;
            }
        }
    }
    sig
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHandle {
    id: String,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    knot: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    framing: Option<i64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    links: BTreeMap<String, i64>,
    #[serde(default, skip_serializing_if = "Flags::is_empty")]
    flags: Flags,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStructure {
    handles: Vec<RawHandle>,
    #[serde(default)]
    three_handles: usize,
    #[serde(default)]
    four_handles: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d3: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    closed: bool,
}

impl RawStructure {
    fn into_structure(self) -> Result<HandleStructure> {
        let mut handles = Vec::with_capacity(self.handles.len());
        for h in self.handles {
            let kind = match (h.kind.as_str(), h.framing, h.knot) {
                ("dotted", None, None) => HandleKind::Dotted,
                ("slice-dotted", None, Some(knot)) => HandleKind::SliceDotted { knot },
                ("framed", Some(framing), None) => HandleKind::Framed { framing },
                ("dotted" | "slice-dotted", Some(_), _) => {
                    return Err(validation("handles", format!("dotted handle '{}' carries a framing", h.id)))
                }
                ("framed", None, _) => {
                    return Err(validation("handles", format!("framed handle '{}' has no framing", h.id)))
                }
                ("slice-dotted", None, None) => {
                    return Err(validation("handles", format!("slice handle '{}' has no knot label", h.id)))
                }
                ("dotted" | "framed", _, Some(_)) => {
                    return Err(validation("handles", format!("only slice-dotted handles take a knot: '{}'", h.id)))
                }
                (other, _, _) => {
                    return Err(validation("handles", format!("unknown kind '{}' for handle '{}'", other, h.id)))
                }
            };
            handles.push(Handle { id: h.id, kind, links: h.links, flags: h.flags });
        }
        let mut s = HandleStructure {
            handles,
            three_handles: self.three_handles,
            four_handles: self.four_handles,
            d3: self.d3,
            closed: self.closed,
        };
        s.symmetrize()?;
        s.validate()?;
        Ok(s)
    }
}

impl From<&HandleStructure> for RawStructure {
    fn from(s: &HandleStructure) -> Self {
        let handles = s
            .handles
            .iter()
            .enumerate()
            .map(|(i, h)| {
                let later: BTreeSet<&str> = s.handles[i + 1..].iter().map(|o| o.id.as_str()).collect();
                let (kind, knot, framing) = match &h.kind {
                    HandleKind::Dotted => ("dotted", None, None),
                    HandleKind::SliceDotted { knot } => ("slice-dotted", Some(knot.clone()), None),
                    HandleKind::Framed { framing } => ("framed", None, Some(*framing)),
                };
                RawHandle {
                    id: h.id.clone(),
                    kind: kind.to_string(),
                    knot,
                    framing,
                    links: h
                        .links
                        .iter()
                        .filter(|(k, _)| later.contains(k.as_str()))
                        .map(|(k, &v)| (k.clone(), v))
                        .collect(),
                    flags: h.flags.clone(),
                }
            })
            .collect();
        RawStructure {
            handles,
            three_handles: s.three_handles,
            four_handles: s.four_handles,
            d3: s.d3.clone(),
            closed: s.closed,
        }
    }
}
