//! Knot diagrams as crossing codes, and the Alexander polynomial.
//!
//! A crossing lists four edge labels counterclockwise, starting with the
//! incoming under-strand. Edges are numbered `1..=2c` along the orientation,
//! so the under-strand leaves on label `a + 1` and the over-strand runs
//! between two consecutive labels. The sign is `+1` when the over-strand
//! enters on the fourth slot (the usual right-handed crossing).
//!
//! The Alexander polynomial is computed twice: from a Seifert matrix (see
//! [`seifert`]) and from Fox derivatives of the Wirtinger presentation.

mod seifert;
mod upoly;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::laurent::{LaurentPoly, Monomial};
use crate::snf::Matrix;
use crate::{Error, Result};

pub use seifert::{braid_word, seifert_circles, SeifertMatrix};
use upoly::UPoly;

/// The variable used for Alexander polynomials.
pub const ALEXANDER_VAR: &str = "t";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Crossing {
    pub arcs: [u32; 4],
    pub sign: i8,
}

impl Crossing {
    /// Slot of the incoming over-strand: 3 for positive crossings, 1 for
    /// negative ones.
    pub(crate) fn over_in_slot(&self) -> usize {
        if self.sign > 0 {
            3
        } else {
            1
        }
    }

    pub(crate) fn over_out_slot(&self) -> usize {
        4 - self.over_in_slot()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KnotDiagram {
    crossings: Vec<Crossing>,
}

impl KnotDiagram {
    pub fn unknot() -> Self {
        KnotDiagram::default()
    }

    /// Builds a diagram and checks it encodes a single oriented component.
    pub fn new(crossings: Vec<Crossing>) -> Result<Self> {
        let d = KnotDiagram { crossings };
        d.validate()?;
        Ok(d)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let d: KnotDiagram =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("knot diagram: {}", e)))?;
        d.validate()?;
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("diagram serializes")
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign as i64).sum()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| Err(Error::validation("knot diagram", reason));
        let n = self.crossings.len() as u32 * 2;
        if n == 0 {
            return Ok(());
        }
        let succ = |a: u32| a % n + 1;
        let mut seen: BTreeMap<u32, usize> = BTreeMap::new();
        let mut incoming = vec![0usize; n as usize + 1];
        let mut outgoing = vec![0usize; n as usize + 1];
        for (k, x) in self.crossings.iter().enumerate() {
            if x.sign != 1 && x.sign != -1 {
                return bad(format!("crossing {}: sign must be +1 or -1", k));
            }
            for &a in &x.arcs {
                if a < 1 || a > n {
                    return bad(format!("crossing {}: arc {} outside 1..={}", k, a, n));
                }
                *seen.entry(a).or_default() += 1;
            }
            let [a, b, c, d] = x.arcs;
            if c != succ(a) {
                return bad(format!(
                    "crossing {}: under-strand must leave on arc {} after entering on {}",
                    k,
                    succ(a),
                    a
                ));
            }
            let b_to_d = succ(b) == d;
            let d_to_b = succ(d) == b;
            match (b_to_d, d_to_b) {
                (false, false) => {
                    return bad(format!("crossing {}: over-strand arcs {} and {} are not consecutive", k, b, d))
                }
                (true, false) if x.sign != -1 => {
                    return bad(format!("crossing {}: over-strand runs {}->{} so the sign is -1", k, b, d))
                }
                (false, true) if x.sign != 1 => {
                    return bad(format!("crossing {}: over-strand runs {}->{} so the sign is +1", k, d, b))
                }
                _ => {}
            }
            incoming[x.arcs[0] as usize] += 1;
            incoming[x.arcs[x.over_in_slot()] as usize] += 1;
            outgoing[x.arcs[2] as usize] += 1;
            outgoing[x.arcs[x.over_out_slot()] as usize] += 1;
        }
        for a in 1..=n {
            match seen.get(&a) {
                Some(2) => {}
                Some(k) => return bad(format!("arc {} appears {} times, expected 2", a, k)),
                None => return bad(format!("arc {} never appears", a)),
            }
            if incoming[a as usize] != 1 || outgoing[a as usize] != 1 {
                return bad(format!("arc {} is not entered exactly once and left exactly once", a));
            }
        }
        Ok(())
    }

    /// Switches every crossing. The under-strand of each new crossing is the
    /// old over-strand, so the slots are rotated to keep the
    /// incoming-under-first convention.
    pub fn mirror(&self) -> KnotDiagram {
        let crossings = self
            .crossings
            .iter()
            .map(|x| {
                let [a, b, c, d] = x.arcs;
                let arcs = if x.sign > 0 { [d, a, b, c] } else { [b, c, d, a] };
                Crossing {
                    arcs,
                    sign: -x.sign,
                }
            })
            .collect();
        KnotDiagram { crossings }
    }

    /// Connected sum, splicing the last edge of `self` into the last edge of
    /// `other`. Both edges are cut and reconnected tail-to-head, which keeps
    /// the orientations compatible and the diagram planar.
    pub fn connected_sum(&self, other: &KnotDiagram) -> KnotDiagram {
        if self.crossings.is_empty() {
            return other.clone();
        }
        if other.crossings.is_empty() {
            return self.clone();
        }
        let na = self.crossings.len() as u32 * 2;
        let nb = other.crossings.len() as u32 * 2;
        let mut crossings = Vec::with_capacity(self.crossings.len() + other.crossings.len());
        for x in &self.crossings {
            let mut arcs = x.arcs;
            for slot in [0, x.over_in_slot()] {
                if arcs[slot] == na {
                    arcs[slot] = na + nb;
                }
            }
            crossings.push(Crossing { arcs, sign: x.sign });
        }
        for x in &other.crossings {
            let mut arcs = x.arcs;
            let incoming = [0, x.over_in_slot()];
            for (slot, arc) in arcs.iter_mut().enumerate() {
                *arc = if *arc == nb {
                    if incoming.contains(&slot) {
                        na
                    } else {
                        na + nb
                    }
                } else {
                    *arc + na
                };
            }
            crossings.push(Crossing { arcs, sign: x.sign });
        }
        KnotDiagram { crossings }
    }

    /// Closure of a braid on `strands` strands. Letters are `±i` for the
    /// generator `σ_i^{±1}`, `1 <= i < strands`; a positive letter is a
    /// positive crossing. Fails if the closure has more than one component.
    pub fn from_braid(strands: usize, word: &[i32]) -> Result<KnotDiagram> {
        let bad = |r: String| Err(Error::validation("braid word", r));
        if strands == 0 {
            return bad("a braid needs at least one strand".into());
        }
        for &g in word {
            if g == 0 || g.unsigned_abs() as usize >= strands {
                return bad(format!("letter {} out of range for {} strands", g, strands));
            }
        }
        let mut next_id = strands;
        let initial: Vec<usize> = (0..strands).collect();
        let mut current = initial.clone();
        let mut raw: Vec<([usize; 4], i8)> = Vec::new();
        for &g in word {
            let i = g.unsigned_abs() as usize - 1;
            let (ei, ej) = (current[i], current[i + 1]);
            let (fi, fj) = (next_id, next_id + 1);
            next_id += 2;
            if g > 0 {
                raw.push(([ej, fj, fi, ei], 1));
            } else {
                raw.push(([ei, ej, fj, fi], -1));
            }
            current[i] = fi;
            current[i + 1] = fj;
        }
        // Closing the braid identifies the top edge at each position with the
        // bottom edge at the same position.
        let mut alias: Vec<usize> = (0..next_id).collect();
        for p in 0..strands {
            alias[current[p]] = initial[p];
        }
        if raw.is_empty() {
            return if strands == 1 {
                Ok(KnotDiagram::unknot())
            } else {
                bad(format!("closure of the empty braid on {} strands is a link", strands))
            };
        }
        let xs: Vec<([usize; 4], i8)> = raw
            .iter()
            .map(|(arcs, s)| (arcs.map(|e| alias[e]), *s))
            .collect();
        relabel_along_orientation(&xs).ok_or_else(|| {
            Error::validation("braid word", "closure has more than one component")
        })
    }

    pub fn seifert_matrix(&self) -> Result<SeifertMatrix> {
        self.validate()?;
        seifert::seifert_matrix(self)
    }

    /// Alexander polynomial as `det(V - t V^T)`, normalised.
    pub fn alexander(&self) -> Result<LaurentPoly> {
        let v = self.seifert_matrix()?;
        let m = v.matrix();
        let n = m.rows();
        let entries = (0..n)
            .map(|i| (0..n).map(|j| UPoly::linear(m[(i, j)], -m[(j, i)])).collect())
            .collect();
        normalize_alexander(&upoly::determinant(entries).to_laurent(ALEXANDER_VAR))
    }

    /// Alexander polynomial from the Fox Jacobian of the Wirtinger
    /// presentation, with one row and one column deleted.
    pub fn alexander_fox(&self) -> Result<LaurentPoly> {
        self.validate()?;
        let c = self.crossings.len();
        if c == 0 {
            return Ok(LaurentPoly::one());
        }
        let generator = wirtinger_arcs(self);
        let mut jac: Vec<Vec<UPoly>> = vec![vec![UPoly::zero(); c]; c];
        for (row, x) in self.crossings.iter().enumerate() {
            let z = generator[x.arcs[x.over_in_slot()] as usize];
            let a = generator[x.arcs[0] as usize];
            let b = generator[x.arcs[2] as usize];
            // Relation b = z a z^-1 (positive) or b = z^-1 a z (negative),
            // abelianised; the negative row is the positive one times -t^-1
            // up to a unit, written here without negative powers.
            let (fa, fb) = if x.sign > 0 {
                (UPoly::linear(0, 1), UPoly::constant(-1))
            } else {
                (UPoly::constant(-1), UPoly::linear(0, 1))
            };
            jac[row][z] = jac[row][z].add(&UPoly::linear(1, -1));
            jac[row][a] = jac[row][a].add(&fa);
            jac[row][b] = jac[row][b].add(&fb);
        }
        let minor: Vec<Vec<UPoly>> = jac[..c - 1].iter().map(|r| r[..c - 1].to_vec()).collect();
        normalize_alexander(&upoly::determinant(minor).to_laurent(ALEXANDER_VAR))
    }
}

/// Maps every edge label to the index of its Wirtinger arc (maximal
/// over-passing segment); indices are assigned in order of the smallest
/// edge label in each arc.
#[allow(clippy::needless_range_loop)]
fn wirtinger_arcs(d: &KnotDiagram) -> Vec<usize> {
    let n = d.crossings.len() * 2;
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    for x in &d.crossings {
        let a = find(&mut parent, x.arcs[1] as usize);
        let b = find(&mut parent, x.arcs[3] as usize);
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut index: BTreeMap<usize, usize> = BTreeMap::new();
    let mut out = vec![0; n + 1];
    for e in 1..=n {
        let r = find(&mut parent, e);
        let next = index.len();
        out[e] = *index.entry(r).or_insert(next);
    }
    out
}

/// Renumbers arbitrary edge ids `1..=2c` along the orientation, starting at
/// the incoming under-strand of the first crossing. Returns `None` if the
/// edges do not form a single cycle.
pub(crate) fn relabel_along_orientation(xs: &[([usize; 4], i8)]) -> Option<KnotDiagram> {
    let over_in = |s: i8| if s > 0 { 3 } else { 1 };
    // successor edge: entering crossing k on slot p leaves on slot p+2
    let mut next: BTreeMap<usize, usize> = BTreeMap::new();
    for (arcs, s) in xs {
        next.insert(arcs[0], arcs[2]);
        let oi = over_in(*s);
        next.insert(arcs[oi], arcs[(oi + 2) % 4]);
    }
    let total = xs.len() * 2;
    if next.len() != total {
        return None;
    }
    let start = xs[0].0[0];
    let mut label: BTreeMap<usize, u32> = BTreeMap::new();
    let mut e = start;
    for i in 1..=total {
        if label.insert(e, i as u32).is_some() {
            return None;
        }
        e = *next.get(&e)?;
    }
    if e != start {
        return None;
    }
    let crossings = xs
        .iter()
        .map(|(arcs, s)| Crossing {
            arcs: arcs.map(|a| label[&a]),
            sign: *s,
        })
        .collect();
    let d = KnotDiagram { crossings };
    d.validate().ok()?;
    Some(d)
}

/// Normalises an Alexander polynomial representative to the symmetric one
/// with value 1 at t = 1.
pub fn normalize_alexander(p: &LaurentPoly) -> Result<LaurentPoly> {
    let fail = || {
        Err(Error::Contract(format!(
            "{} is not an Alexander polynomial of a knot",
            p
        )))
    };
    let (Some(lo), Some(hi)) = (p.min_exponent(ALEXANDER_VAR), p.max_exponent(ALEXANDER_VAR)) else {
        return fail();
    };
    if (lo + hi) % 2 != 0 || p.variables().iter().any(|v| v != ALEXANDER_VAR) {
        return fail();
    }
    let mut q = p.scale_monomial(&Monomial::var(ALEXANDER_VAR, -(lo + hi) / 2));
    let at_one = q.eval_at_one();
    if at_one == (-1).into() {
        q = -q;
    } else if at_one != 1.into() {
        return fail();
    }
    if !q.is_symmetric(0) {
        return fail();
    }
    Ok(q)
}

/// Names accepted by [`catalog`].
pub const CATALOG: &[&str] = &[
    "unknot",
    "trefoil",
    "left-trefoil",
    "right-trefoil",
    "figure-eight",
    "granny",
    "square",
];

/// Right-handed trefoil, writhe +3.
pub fn right_trefoil() -> KnotDiagram {
    diagram(&[([1, 5, 2, 4], 1), ([3, 1, 4, 6], 1), ([5, 3, 6, 2], 1)])
}

pub fn figure_eight() -> KnotDiagram {
    diagram(&[
        ([4, 2, 5, 1], 1),
        ([8, 6, 1, 5], 1),
        ([6, 3, 7, 4], -1),
        ([2, 7, 3, 8], -1),
    ])
}

fn diagram(rows: &[([u32; 4], i8)]) -> KnotDiagram {
    KnotDiagram::new(
        rows.iter()
            .map(|&(arcs, sign)| Crossing { arcs, sign })
            .collect(),
    )
    .expect("built-in diagram is valid")
}

/// Built-in knots. `trefoil` is the left-handed one.
pub fn catalog(name: &str) -> Result<KnotDiagram> {
    Ok(match name {
        "unknot" => KnotDiagram::unknot(),
        "trefoil" | "left-trefoil" => right_trefoil().mirror(),
        "right-trefoil" => right_trefoil(),
        "figure-eight" | "figure8" | "4_1" => figure_eight(),
        "granny" => right_trefoil().connected_sum(&right_trefoil()),
        "square" => right_trefoil().connected_sum(&right_trefoil().mirror()),
        other => return Err(Error::UnsupportedKnot(format!("{} is not in the catalog", other))),
    })
}

/// `det(V - V^T)` for a square integer matrix.
pub(crate) fn skew_determinant(v: &Matrix) -> i128 {
    let mut s = v.clone();
    let t = v.transpose();
    for i in 0..v.rows() {
        for j in 0..v.cols() {
            s[(i, j)] -= t[(i, j)];
        }
    }
    s.determinant()
}
