//! Seifert matrices via braid form.
//!
//! Vogel moves (Reidemeister II moves across defect faces) turn any diagram
//! into a closed braid without changing the knot. On a closed braid the
//! Seifert surface is a stack of disks joined by twisted bands, one per
//! letter, and its Seifert form has a closed combinatorial description.

use std::collections::{BTreeMap, BTreeSet};

use super::KnotDiagram;
use crate::snf::Matrix;
use crate::{Error, Result};

/// A Seifert matrix of a knot: square, even-sized, with `det(V - V^T) = ±1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeifertMatrix(Matrix);

impl SeifertMatrix {
    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.rows()
    }

    pub fn genus(&self) -> usize {
        self.size() / 2
    }

    /// Signature of `V + V^T`.
    pub fn signature(&self) -> i64 {
        let v = &self.0;
        let rows: Vec<Vec<i128>> = (0..v.rows())
            .map(|i| (0..v.rows()).map(|j| v[(i, j)] + v[(j, i)]).collect())
            .collect();
        crate::handlebody::form_signature(&rows)
    }
}

/// Working copy of a diagram with free edge ids, for rewriting.
struct Planar {
    xs: Vec<[usize; 4]>,
    signs: Vec<i8>,
    edges: usize,
}

type Slot = (usize, usize);

impl Planar {
    fn new(d: &KnotDiagram) -> Self {
        Planar {
            xs: d.crossings.iter().map(|x| x.arcs.map(|a| a as usize - 1)).collect(),
            signs: d.crossings.iter().map(|x| x.sign).collect(),
            edges: d.crossings.len() * 2,
        }
    }

    fn over_in(&self, x: usize) -> usize {
        if self.signs[x] > 0 {
            3
        } else {
            1
        }
    }

    fn is_incoming(&self, x: usize, slot: usize) -> bool {
        slot == 0 || slot == self.over_in(x)
    }

    /// (tail, head) end of every edge.
    fn ends(&self) -> (Vec<Slot>, Vec<Slot>) {
        let mut tail = vec![(usize::MAX, 0); self.edges];
        let mut head = vec![(usize::MAX, 0); self.edges];
        for (x, arcs) in self.xs.iter().enumerate() {
            for (s, &e) in arcs.iter().enumerate() {
                if self.is_incoming(x, s) {
                    head[e] = (x, s);
                } else {
                    tail[e] = (x, s);
                }
            }
        }
        (tail, head)
    }

    /// Edge following `e` on its Seifert circle.
    fn smoothing_successor(&self, head: &[Slot], e: usize) -> usize {
        let (x, p) = head[e];
        if p == 0 {
            self.xs[x][4 - self.over_in(x)]
        } else {
            self.xs[x][2]
        }
    }

    /// Seifert circle index of every edge, numbered by smallest edge.
    fn circles(&self) -> (Vec<usize>, usize) {
        let (_, head) = self.ends();
        let mut circle = vec![usize::MAX; self.edges];
        let mut count = 0;
        for start in 0..self.edges {
            if circle[start] != usize::MAX {
                continue;
            }
            let mut e = start;
            while circle[e] == usize::MAX {
                circle[e] = count;
                e = self.smoothing_successor(&head, e);
            }
            count += 1;
        }
        (circle, count)
    }

    /// Faces as cyclic lists of (edge, traversed along its orientation),
    /// each with the face on the left.
    fn faces(&self) -> Vec<Vec<(usize, bool)>> {
        let (tail, head) = self.ends();
        let mut visited = BTreeSet::new();
        let mut faces = Vec::new();
        for x in 0..self.xs.len() {
            for q in 0..4 {
                if visited.contains(&(x, q)) {
                    continue;
                }
                let mut face = Vec::new();
                let mut dart = (x, q);
                while visited.insert(dart) {
                    let e = self.xs[dart.0][dart.1];
                    let forward = tail[e] == dart;
                    face.push((e, forward));
                    let (nx, np) = if forward { head[e] } else { tail[e] };
                    dart = (nx, (np + 3) % 4);
                }
                faces.push(face);
            }
        }
        faces
    }

    /// Finds a face holding two edges of distinct Seifert circles that run
    /// the same way around it, and pushes one over the other there.
    fn vogel_step(&mut self) -> bool {
        let (circle, _) = self.circles();
        let faces = self.faces();
        for face in &faces {
            for (i, &(e1, f1)) in face.iter().enumerate() {
                for &(e2, f2) in &face[i + 1..] {
                    if f1 == f2 && circle[e1] != circle[e2] {
                        self.push_over(e1, e2, f1);
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Reidemeister II: `over` is pushed across the shared face and over
    /// `under`. Each edge is cut into three; the new crossings X and Y are
    /// met in the order X, Y along `over` and Y, X along `under`.
    fn push_over(&mut self, over: usize, under: usize, forward: bool) {
        let (_, head) = self.ends();
        let (o_mid, o_end, u_mid, u_end) = (self.edges, self.edges + 1, self.edges + 2, self.edges + 3);
        self.edges += 4;
        let (hx, hp) = head[over];
        self.xs[hx][hp] = o_end;
        let (hx, hp) = head[under];
        self.xs[hx][hp] = u_end;
        if forward {
            self.xs.push([u_mid, o_mid, u_end, over]);
            self.signs.push(1);
            self.xs.push([under, o_mid, u_mid, o_end]);
            self.signs.push(-1);
        } else {
            self.xs.push([u_mid, over, u_end, o_mid]);
            self.signs.push(-1);
            self.xs.push([under, o_end, u_mid, o_mid]);
            self.signs.push(1);
        }
    }
}

pub fn seifert_circles(d: &KnotDiagram) -> usize {
    if d.crossings.is_empty() {
        return 1;
    }
    Planar::new(d).circles().1
}

/// A braid word whose closure is the knot of `d`, as (strands, letters).
pub fn braid_word(d: &KnotDiagram) -> Result<(usize, Vec<i32>)> {
    d.validate()?;
    if d.crossings.is_empty() {
        return Ok((1, Vec::new()));
    }
    let internal = |r: &str| Error::Contract(format!("braiding failed: {}", r));
    let mut p = Planar::new(d);
    let cap = 4 * (d.crossings.len() + 2).pow(2);
    let mut steps = 0;
    while p.vogel_step() {
        steps += 1;
        if steps > cap {
            return Err(internal("Vogel moves did not terminate"));
        }
        if p.faces().len() != p.xs.len() + 2 {
            return Err(internal("rewrite broke planarity"));
        }
    }

    let (circle, s) = p.circles();
    let (_, head) = p.ends();
    let sides: Vec<(usize, usize)> = (0..p.xs.len())
        .map(|x| (circle[p.xs[x][0]], circle[p.xs[x][p.over_in(x)]]))
        .collect();

    // Seifert circles of a braided diagram are nested in a chain.
    let mut nbrs: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for &(a, b) in &sides {
        if a == b {
            return Err(internal("crossing joins a Seifert circle to itself"));
        }
        nbrs.entry(a).or_default().insert(b);
        nbrs.entry(b).or_default().insert(a);
    }
    if nbrs.len() != s || nbrs.values().any(|n| n.len() > 2) {
        return Err(internal("Seifert circles are not a chain"));
    }
    let start = *nbrs
        .iter()
        .find(|(_, n)| n.len() == 1)
        .ok_or_else(|| internal("Seifert circles form a cycle"))?
        .0;
    let mut level = vec![usize::MAX; s];
    let (mut prev, mut cur) = (usize::MAX, start);
    for l in 0..s {
        level[cur] = l;
        let next = nbrs[&cur].iter().copied().find(|&n| n != prev);
        prev = cur;
        match next {
            Some(n) => cur = n,
            None if l + 1 == s => {}
            None => return Err(internal("Seifert circles are not connected")),
        }
    }
    let generator: Vec<usize> = sides
        .iter()
        .map(|&(a, b)| level[a].min(level[b]))
        .collect();

    // Crossings met along each circle, in travel order.
    let mut along: Vec<Vec<usize>> = vec![Vec::new(); s];
    let mut done = vec![false; s];
    for e0 in 0..p.edges {
        let l = level[circle[e0]];
        if done[l] {
            continue;
        }
        done[l] = true;
        let mut e = e0;
        loop {
            along[l].push(head[e].0);
            e = p.smoothing_successor(&head, e);
            if e == e0 {
                break;
            }
        }
    }

    // Cut every circle along one ray: circle l+1 starts at the first crossing
    // of generator l in circle l's linear order.
    let mut linear: Vec<Vec<usize>> = Vec::with_capacity(s);
    linear.push(along[0].clone());
    for l in 1..s {
        let first = *linear[l - 1]
            .iter()
            .find(|&&x| generator[x] == l - 1)
            .ok_or_else(|| internal("adjacent circles share no crossing"))?;
        let seq = &along[l];
        let at = seq.iter().position(|&x| x == first).ok_or_else(|| internal("inconsistent circle order"))?;
        linear.push(seq[at..].iter().chain(&seq[..at]).copied().collect());
    }

    let n = p.xs.len();
    let mut indeg = vec![0usize; n];
    let mut out: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for seq in &linear {
        for w in seq.windows(2) {
            if out[w[0]].insert(w[1]) {
                indeg[w[1]] += 1;
            }
        }
    }
    let mut ready: BTreeSet<usize> = (0..n).filter(|&x| indeg[x] == 0).collect();
    let mut word = Vec::with_capacity(n);
    while let Some(x) = ready.pop_first() {
        word.push((generator[x] as i32 + 1) * p.signs[x] as i32);
        for &y in &out[x] {
            indeg[y] -= 1;
            if indeg[y] == 0 {
                ready.insert(y);
            }
        }
    }
    if word.len() != n {
        return Err(internal("angular order of crossings is cyclic"));
    }
    Ok((s, word))
}

/// Seifert form of the standard surface of a closed braid.
///
/// Basis: one loop per pair of consecutive occurrences of the same
/// generator, running up one band and down the next. Loops on the same
/// pair of disks that share a band, and loops on adjacent pairs whose bands
/// interleave, link once; everything else is local to a loop's own bands.
pub(crate) fn braid_seifert_form(word: &[i32]) -> Matrix {
    let n = word.len();
    let next: Vec<Option<usize>> = (0..n)
        .map(|i| (i + 1..n).find(|&j| word[j].abs() == word[i].abs()))
        .collect();
    let loops: Vec<usize> = (0..n).filter(|&i| next[i].is_some()).collect();
    let idx: BTreeMap<usize, usize> = loops.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let mut v = Matrix::zeros(loops.len(), loops.len());
    let sgn = |k: usize| word[k].signum() as i128;
    let gen = |k: usize| word[k].abs();
    for &i in &loops {
        let hi = next[i].unwrap();
        let a = idx[&i];
        v[(a, a)] = -(sgn(i) + sgn(hi)) / 2;
        for &j in loops.iter().filter(|&&j| j > i && j <= hi) {
            let b = idx[&j];
            let hj = next[j].unwrap();
            if j == hi {
                if sgn(j) > 0 {
                    v[(b, a)] = 1;
                } else {
                    v[(a, b)] = -1;
                }
            } else if hj > hi {
                if gen(i) == gen(j) + 1 {
                    v[(b, a)] = -1;
                } else if gen(j) == gen(i) + 1 {
                    v[(a, b)] = 1;
                }
            }
        }
    }
    v
}

pub(crate) fn seifert_matrix(d: &KnotDiagram) -> Result<SeifertMatrix> {
    let (_, word) = braid_word(d)?;
    let v = braid_seifert_form(&word);
    if !v.rows().is_multiple_of(2) || super::skew_determinant(&v).abs() != 1 {
        return Err(Error::Contract(format!(
            "Seifert form {:?} does not present a unimodular pairing",
            v
        )));
    }
    Ok(SeifertMatrix(v))
}
