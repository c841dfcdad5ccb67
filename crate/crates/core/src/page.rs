//! Pages, the standard cut system, embedded arcs and curves in normal
//! form, and the Dehn twist action.
//!
//! A page with genus `k` and `n` boundary components is modelled as one
//! polygon `P` (the page cut open along its `m = 2k+n-1` cut arcs) with
//! `m` bands re-gluing pairs of polygon sides. The boundary of `P`
//! alternates between *sides* (copies of cut arcs) and *segments*
//! (pieces of the page boundary). A path is stored as the sequence of
//! sides through which it leaves `P`; this is its normal form with respect
//! to the cut system, and free reduction of that sequence is bigon
//! removal.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::picture::Picture;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }
}

/// Crossing of cut arc `arc`, leaving the polygon through the `side`
/// copy of that arc and re-entering through the opposite copy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub arc: usize,
    pub side: Sign,
}

impl Letter {
    pub fn new(arc: usize, side: Sign) -> Self {
        Letter { arc, side }
    }

    pub fn inverse(self) -> Letter {
        Letter { arc: self.arc, side: self.side.flip() }
    }
}

impl std::fmt::Display for Letter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self.side {
            Sign::Plus => '+',
            Sign::Minus => '-',
        };
        write!(f, "{}{}", self.arc, s)
    }
}

/// A point on a boundary segment of the cut polygon. `offset` orders
/// points within the segment, counted from the corner where the segment
/// starts; offset 0 is reserved for that corner.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub segment: usize,
    pub offset: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Page {
    genus: usize,
    boundary_components: usize,
    /// Sides of the cut polygon in counterclockwise order.
    sides: Vec<(usize, Sign)>,
    /// `side_at[arc][sign]` is the position of that side in `sides`.
    side_at: Vec<[usize; 2]>,
}

impl Page {
    /// Standard page of genus `k` with `n` boundary components. Each
    /// handle contributes two interleaved bands, each extra boundary
    /// component one band.
    pub fn standard(k: usize, n: usize) -> Result<Page> {
        if n == 0 || (k == 0 && n == 1) {
            return Err(Error::DegeneratePage { genus: k, boundary: n });
        }
        let m = 2 * k + n - 1;
        let mut sides = Vec::with_capacity(2 * m);
        for h in 0..k {
            let (a, b) = (2 * h, 2 * h + 1);
            sides.extend([(a, Sign::Plus), (b, Sign::Plus), (a, Sign::Minus), (b, Sign::Minus)]);
        }
        for j in 2 * k..m {
            sides.extend([(j, Sign::Plus), (j, Sign::Minus)]);
        }
        let mut side_at = vec![[0; 2]; m];
        for (pos, &(arc, s)) in sides.iter().enumerate() {
            side_at[arc][s.index()] = pos;
        }
        let page = Page { genus: k, boundary_components: n, sides, side_at };
        page.verify_cut_system()?;
        Ok(page)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary_components
    }

    pub fn arc_count(&self) -> usize {
        self.side_at.len()
    }

    pub fn side_count(&self) -> usize {
        self.sides.len()
    }

    /// Genus of the closed Heegaard surface built from this page.
    pub fn closed_genus(&self) -> usize {
        self.arc_count()
    }

    pub fn side(&self, pos: usize) -> (usize, Sign) {
        self.sides[pos]
    }

    pub fn side_of(&self, arc: usize, s: Sign) -> usize {
        self.side_at[arc][s.index()]
    }

    /// Segment reached along the page boundary after segment `seg`.
    pub fn next_segment(&self, seg: usize) -> usize {
        let next_side = (seg + 1) % self.side_count();
        let (arc, s) = self.sides[next_side];
        self.side_of(arc, s.flip())
    }

    /// Boundary components as cycles of segments, in boundary order.
    pub fn boundary_cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.side_count()];
        let mut cycles = Vec::new();
        for start in 0..self.side_count() {
            if seen[start] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut s = start;
            while !seen[s] {
                seen[s] = true;
                cyc.push(s);
                s = self.next_segment(s);
            }
            cycles.push(cyc);
        }
        cycles
    }

    pub fn boundary_component_of(&self, seg: usize) -> usize {
        self.boundary_cycles()
            .iter()
            .position(|c| c.contains(&seg))
            .expect("every segment lies on a boundary cycle")
    }

    /// One polygon plus `m` bands: Euler characteristic `1 - m` must
    /// match `2 - 2k - n`, and the boundary cycles must number `n`.
    pub fn verify_cut_system(&self) -> Result<()> {
        let m = self.arc_count() as i64;
        let chi = 1 - m;
        let expected = 2 - 2 * self.genus as i64 - self.boundary_components as i64;
        let cycles = self.boundary_cycles().len();
        if chi != expected || cycles != self.boundary_components {
            return Err(Error::Internal(format!(
                "cut system mismatch: chi {chi} vs {expected}, {cycles} boundary cycles"
            )));
        }
        Ok(())
    }

    /// Core curve of the band dual to cut arc `arc`.
    pub fn band_core(&self, arc: usize) -> EmbeddedPath {
        EmbeddedPath::closed(vec![Letter::new(arc, Sign::Plus)])
    }

    pub fn cut_arc(&self, arc: usize) -> EmbeddedPath {
        EmbeddedPath { kind: PathKind::Cut(arc), letters: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PathKind {
    /// One of the cut arcs itself.
    Cut(usize),
    Arc { start: BoundaryPoint, end: BoundaryPoint },
    Closed,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EmbeddedPath {
    pub kind: PathKind,
    pub letters: Vec<Letter>,
}

impl EmbeddedPath {
    pub fn arc(start: BoundaryPoint, end: BoundaryPoint, letters: Vec<Letter>) -> Self {
        let mut p = EmbeddedPath { kind: PathKind::Arc { start, end }, letters };
        p.reduce();
        p
    }

    pub fn closed(letters: Vec<Letter>) -> Self {
        let mut p = EmbeddedPath { kind: PathKind::Closed, letters };
        p.reduce();
        p
    }

    pub fn is_closed(&self) -> bool {
        matches!(self.kind, PathKind::Closed)
    }

    pub fn is_cut(&self) -> Option<usize> {
        match self.kind {
            PathKind::Cut(i) => Some(i),
            _ => None,
        }
    }

    /// Bigon removal: free reduction, cyclic for closed curves.
    pub fn reduce(&mut self) {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        if self.is_closed() {
            let mut lo = 0;
            let mut hi = out.len();
            while hi - lo >= 2 && out[lo] == out[hi - 1].inverse() {
                lo += 1;
                hi -= 1;
            }
            out = out[lo..hi].to_vec();
        }
        self.letters = out;
    }

    pub fn is_reduced(&self) -> bool {
        let mut c = self.clone();
        c.reduce();
        c.letters == self.letters
    }

    /// Number of crossings with cut arc `arc`.
    pub fn crossings_with_cut(&self, arc: usize) -> usize {
        self.letters.iter().filter(|l| l.arc == arc).count()
    }

    /// Equality of closed curves up to rotation and reversal.
    pub fn same_curve(&self, other: &EmbeddedPath) -> bool {
        if !self.is_closed() || !other.is_closed() {
            return self == other;
        }
        let n = self.letters.len();
        if n != other.letters.len() {
            return false;
        }
        if n == 0 {
            return true;
        }
        let rev: Vec<Letter> = other.letters.iter().rev().map(|l| l.inverse()).collect();
        (0..n).any(|r| {
            (0..n).all(|i| self.letters[(i + r) % n] == other.letters[i])
                || (0..n).all(|i| self.letters[(i + r) % n] == rev[i])
        })
    }
}

impl std::fmt::Display for EmbeddedPath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if let PathKind::Cut(i) = self.kind {
            return write!(f, "a{i}");
        }
        write!(f, "[")?;
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "]")
    }
}

/// Slides the endpoints of a cut arc (or of an earlier push-off) one step
/// further along the boundary in its positive direction.
pub fn push_off(page: &Page, src: &EmbeddedPath) -> Result<EmbeddedPath> {
    match &src.kind {
        PathKind::Cut(i) => {
            let start = BoundaryPoint { segment: page.side_of(*i, Sign::Minus), offset: 1 };
            let end = BoundaryPoint { segment: page.side_of(*i, Sign::Plus), offset: 1 };
            Ok(EmbeddedPath::arc(start, end, vec![Letter::new(*i, Sign::Minus)]))
        }
        PathKind::Arc { start, end } => {
            let bump = |p: &BoundaryPoint| BoundaryPoint { segment: p.segment, offset: p.offset + 1 };
            Ok(EmbeddedPath::arc(bump(start), bump(end), src.letters.clone()))
        }
        PathKind::Closed => Err(Error::InvalidPath("push-off of a closed curve".into())),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistLetter {
    pub curve: EmbeddedPath,
    /// +1 for a right-handed twist, -1 for a left-handed one.
    pub exponent: i32,
}

/// A word in Dehn twists, applied left to right: the word of `hg` is the
/// word of `g` followed by the word of `h`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MappingClassWord {
    pub letters: Vec<TwistLetter>,
}

impl MappingClassWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn new(letters: Vec<TwistLetter>) -> Self {
        let mut w = MappingClassWord { letters };
        w.reduce();
        w
    }

    pub fn twist(curve: EmbeddedPath, power: i32) -> Self {
        let e = power.signum();
        let letters = (0..power.unsigned_abs())
            .map(|_| TwistLetter { curve: curve.clone(), exponent: e })
            .collect();
        MappingClassWord { letters }
    }

    pub fn reduce(&mut self) {
        let mut out: Vec<TwistLetter> = Vec::with_capacity(self.letters.len());
        for l in self.letters.drain(..) {
            match out.last() {
                Some(prev) if prev.exponent == -l.exponent && prev.curve.same_curve(&l.curve) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        self.letters = out;
    }

    /// `self` followed by `then`, i.e. the composite `then ∘ self`.
    pub fn then(&self, then: &MappingClassWord) -> MappingClassWord {
        let mut letters = self.letters.clone();
        letters.extend(then.letters.iter().cloned());
        MappingClassWord::new(letters)
    }

    pub fn inverse(&self) -> MappingClassWord {
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| TwistLetter { curve: l.curve.clone(), exponent: -l.exponent })
            .collect();
        MappingClassWord { letters }
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

impl std::fmt::Display for MappingClassWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "id");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "t({})^{}", l.curve, l.exponent)?;
        }
        Ok(())
    }
}

/// Checks that a closed curve can serve as a twist curve: nonempty,
/// primitive, and realizable without self-crossings.
pub fn check_twist_curve(page: &Page, curve: &EmbeddedPath) -> Result<()> {
    if !curve.is_closed() {
        return Err(Error::NonEmbeddedCurve(format!("{curve} is not a closed curve")));
    }
    if curve.letters.is_empty() {
        return Err(Error::NonEmbeddedCurve(format!("{curve} is null-homotopic")));
    }
    if !curve.is_reduced() {
        return Err(Error::NonEmbeddedCurve(format!("{curve} is not cyclically reduced")));
    }
    let n = curve.letters.len();
    for d in 1..n {
        if n % d == 0 && (0..n).all(|i| curve.letters[i] == curve.letters[(i + d) % n]) {
            return Err(Error::NonEmbeddedCurve(format!("{curve} is a proper power")));
        }
    }
    check_arc_indices(page, curve)?;
    let pic = Picture::realize(page, std::slice::from_ref(curve))?;
    if pic.self_crossings(0) > 0 {
        return Err(Error::NonEmbeddedCurve(format!("{curve} has self-crossings")));
    }
    Ok(())
}

fn check_arc_indices(page: &Page, path: &EmbeddedPath) -> Result<()> {
    if let Some(l) = path.letters.iter().find(|l| l.arc >= page.arc_count()) {
        return Err(Error::InvalidPath(format!("letter {l} refers to a missing cut arc")));
    }
    if let PathKind::Arc { start, end } = path.kind {
        if start.segment >= page.side_count() || end.segment >= page.side_count() {
            return Err(Error::InvalidPath("endpoint on a missing boundary segment".into()));
        }
    }
    Ok(())
}

/// Image of `path` under the twist `t_curve^exponent` (`exponent` = ±1),
/// in reduced form.
///
/// The curve and the path are drawn jointly in the cut polygon; at every
/// crossing the path is rerouted once around the curve, turning right for
/// a right-handed twist and left for a left-handed one.
pub fn dehn_twist(page: &Page, curve: &EmbeddedPath, exponent: i32, path: &EmbeddedPath) -> Result<EmbeddedPath> {
    check_twist_curve(page, curve)?;
    check_arc_indices(page, path)?;
    if path.is_cut().is_some() {
        return Err(Error::InvalidPath("cut arcs are fixed by the monodromy model; twist a push-off".into()));
    }
    let pic = Picture::realize(page, &[curve.clone(), path.clone()])?;
    let c_len = curve.letters.len();
    let d_chords = pic.chord_count(1);
    let mut inserts: Vec<Vec<Letter>> = vec![Vec::new(); d_chords];
    for (j, ins) in inserts.iter_mut().enumerate() {
        let (q1, q2) = pic.chord_keys(1, j);
        let mut hits: Vec<(crate::picture::CcwRank, Vec<Letter>)> = Vec::new();
        for k in 0..c_len {
            let (p1, p2) = pic.chord_keys(0, k);
            if !crate::picture::chords_cross(q1, q2, p1, p2) {
                continue;
            }
            let p2_right = crate::picture::in_ccw_interval(q1, q2, p2);
            let along = if p2_right { p2 } else { p1 };
            // Right-handed: follow the curve toward its end on the right.
            let forward = if exponent > 0 { p2_right } else { !p2_right };
            let loop_letters: Vec<Letter> = if forward {
                (0..c_len).map(|t| curve.letters[(k + t) % c_len]).collect()
            } else {
                (0..c_len)
                    .map(|t| curve.letters[(k + c_len - 1 - t) % c_len].inverse())
                    .collect()
            };
            let rank = crate::picture::ccw_offset(q1, along);
            hits.push((rank, loop_letters));
        }
        hits.sort_by(|a, b| a.0.cmp(&b.0));
        for (_, l) in hits {
            ins.extend(l);
        }
    }
    let mut letters = Vec::new();
    for (j, ins) in inserts.into_iter().enumerate() {
        letters.extend(ins);
        if j < path.letters.len() {
            letters.push(path.letters[j]);
        }
    }
    let mut out = EmbeddedPath { kind: path.kind.clone(), letters };
    out.reduce();
    Ok(out)
}

pub fn apply_mapping_class(page: &Page, word: &MappingClassWord, path: &EmbeddedPath) -> Result<EmbeddedPath> {
    let mut cur = path.clone();
    for l in &word.letters {
        cur = dehn_twist(page, &l.curve, l.exponent, &cur)?;
    }
    Ok(cur)
}

/// Minimal intersection count of two paths on the same page.
pub fn geometric_intersection(page: &Page, x: &EmbeddedPath, y: &EmbeddedPath) -> Result<usize> {
    check_arc_indices(page, x)?;
    check_arc_indices(page, y)?;
    match (x.is_cut(), y.is_cut()) {
        (Some(_), Some(_)) => Ok(0),
        (Some(i), None) => Ok(y.crossings_with_cut(i)),
        (None, Some(j)) => Ok(x.crossings_with_cut(j)),
        (None, None) => {
            let (mut x, mut y) = (x.clone(), y.clone());
            x.reduce();
            y.reduce();
            if x.is_closed() && y.is_closed() && x.same_curve(&y) {
                return Ok(0);
            }
            let pic = Picture::realize(page, &[x, y])?;
            Ok(pic.crossings_between(0, 1))
        }
    }
}

/// Number of self-crossings of `path` when drawn in normal form.
pub fn self_intersection(page: &Page, path: &EmbeddedPath) -> Result<usize> {
    if path.is_cut().is_some() {
        return Ok(0);
    }
    let pic = Picture::realize(page, std::slice::from_ref(path))?;
    Ok(pic.self_crossings(0))
}
