//! Explicit drawings of paths in the cut polygon.
//!
//! Every crossing of a path with a cut arc is a point with a definite
//! position along that arc, and every path endpoint has a definite
//! position along its boundary segment. Straight chords between
//! consecutive positions then determine the drawing completely: two
//! chords cross exactly when their endpoints interleave on the polygon
//! boundary.

use crate::error::{Error, Result};
use crate::page::{BoundaryPoint, EmbeddedPath, Letter, Page, PathKind, Sign};

/// Position on the polygon boundary: `(2*side, rank)` on a side or
/// `(2*segment+1, rank)` on a segment. Keys compare in counterclockwise
/// order starting at the first corner of side 0.
pub type Key = (usize, usize);

/// Sort key for counterclockwise order starting just after a base key.
pub type CcwRank = (bool, Key);

pub fn in_ccw_interval(a: Key, b: Key, x: Key) -> bool {
    if a < b {
        a < x && x < b
    } else {
        x > a || x < b
    }
}

pub fn chords_cross(a1: Key, a2: Key, b1: Key, b2: Key) -> bool {
    in_ccw_interval(a1, a2, b1) != in_ccw_interval(a1, a2, b2)
}

pub fn ccw_offset(base: Key, x: Key) -> CcwRank {
    (x < base, x)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strand {
    pub closed: bool,
    pub start: Option<BoundaryPoint>,
    pub end: Option<BoundaryPoint>,
    pub letters: Vec<Letter>,
    /// Point ids, one per letter.
    pub points: Vec<usize>,
}

impl Strand {
    pub fn chord_count(&self) -> usize {
        if self.closed {
            self.letters.len()
        } else {
            self.letters.len() + 1
        }
    }

    pub fn to_path(&self) -> EmbeddedPath {
        let kind = match (self.start, self.end) {
            (Some(start), Some(end)) => PathKind::Arc { start, end },
            _ => PathKind::Closed,
        };
        EmbeddedPath { kind, letters: self.letters.clone() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Point {
    pub strand: usize,
    pub arc: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ChordEnd {
    /// A crossing point seen from the `side` copy of its arc.
    Cross { point: usize, side: Sign },
    Start(usize),
    End(usize),
}

#[derive(Clone, Debug)]
pub struct Picture {
    pub page: Page,
    pub strands: Vec<Strand>,
    pub points: Vec<Point>,
    /// Point ids along each cut arc in increasing arc parameter.
    pub arc_order: Vec<Vec<usize>>,
    /// Endpoints `(strand, is_start)` along each segment, counterclockwise.
    pub seg_order: Vec<Vec<(usize, bool)>>,
    point_rank: Vec<usize>,
    point_index: Vec<usize>,
    end_rank: Vec<[usize; 2]>,
}

#[derive(Clone, Copy)]
struct Ray {
    strand: usize,
    chord: usize,
    forward: bool,
}

impl Picture {
    /// Draws the given paths jointly. Positions along each cut arc are
    /// chosen by comparing the rays leaving each crossing, which puts
    /// reduced paths in minimal position with one another.
    pub fn realize(page: &Page, paths: &[EmbeddedPath]) -> Result<Picture> {
        let mut pic = Picture {
            page: page.clone(),
            strands: Vec::new(),
            points: Vec::new(),
            arc_order: vec![Vec::new(); page.arc_count()],
            seg_order: vec![Vec::new(); page.side_count()],
            point_rank: Vec::new(),
            point_index: Vec::new(),
            end_rank: Vec::new(),
        };
        for path in paths {
            let (closed, start, end) = match path.kind {
                PathKind::Cut(_) => return Err(Error::InvalidPath("cut arcs are polygon sides".into())),
                PathKind::Closed => {
                    if path.letters.is_empty() {
                        return Err(Error::NonEmbeddedCurve("empty closed curve".into()));
                    }
                    (true, None, None)
                }
                PathKind::Arc { start, end } => (false, Some(start), Some(end)),
            };
            let s = pic.strands.len();
            let mut pts = Vec::with_capacity(path.letters.len());
            for l in &path.letters {
                if l.arc >= page.arc_count() {
                    return Err(Error::InvalidPath(format!("letter {l} refers to a missing cut arc")));
                }
                pts.push(pic.points.len());
                pic.points.push(Point { strand: s, arc: l.arc });
            }
            pic.strands.push(Strand { closed, start, end, letters: path.letters.clone(), points: pts });
        }
        pic.order_segments()?;
        pic.refresh_indices();
        for arc in 0..page.arc_count() {
            let mut ids: Vec<usize> = (0..pic.points.len()).filter(|&p| pic.points[p].arc == arc).collect();
            insertion_sort(&mut ids, |&a, &b| pic.compare_on_arc(arc, a, b));
            pic.arc_order[arc] = ids;
        }
        pic.refresh_indices();
        Ok(pic)
    }

    fn order_segments(&mut self) -> Result<()> {
        let mut per_seg: Vec<Vec<(u32, usize, bool)>> = vec![Vec::new(); self.page.side_count()];
        for (s, st) in self.strands.iter().enumerate() {
            for (p, is_start) in [(st.start, true), (st.end, false)] {
                if let Some(p) = p {
                    if p.segment >= self.page.side_count() || p.offset == 0 {
                        return Err(Error::InvalidPath(format!("bad endpoint {p:?}")));
                    }
                    per_seg[p.segment].push((p.offset, s, is_start));
                }
            }
        }
        for (seg, v) in per_seg.iter_mut().enumerate() {
            v.sort();
            if v.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::InvalidPath(format!("two endpoints share a position on segment {seg}")));
            }
            self.seg_order[seg] = v.iter().map(|&(_, s, st)| (s, st)).collect();
        }
        Ok(())
    }

    /// Recomputes cached ranks after any change to the drawing.
    pub fn refresh_indices(&mut self) {
        self.point_rank = vec![0; self.points.len()];
        for ids in &self.arc_order {
            for (r, &p) in ids.iter().enumerate() {
                self.point_rank[p] = r;
            }
        }
        self.point_index = vec![0; self.points.len()];
        for st in &self.strands {
            for (k, &p) in st.points.iter().enumerate() {
                self.point_index[p] = k;
            }
        }
        self.end_rank = vec![[0; 2]; self.strands.len()];
        for ids in &self.seg_order {
            for (r, &(s, is_start)) in ids.iter().enumerate() {
                self.end_rank[s][if is_start { 0 } else { 1 }] = r;
            }
        }
    }

    pub fn point_rank(&self, p: usize) -> usize {
        self.point_rank[p]
    }

    pub fn point_index(&self, p: usize) -> usize {
        self.point_index[p]
    }

    pub fn letter_of(&self, p: usize) -> Letter {
        let pt = self.points[p];
        self.strands[pt.strand].letters[self.point_index[p]]
    }

    pub fn chord_count(&self, s: usize) -> usize {
        self.strands[s].chord_count()
    }

    /// Ends of chord `k` of strand `s`, in the strand's direction.
    pub fn chord_ends(&self, s: usize, k: usize) -> (ChordEnd, ChordEnd) {
        let st = &self.strands[s];
        let n = st.letters.len();
        let from = if st.closed {
            let j = (k + n - 1) % n;
            ChordEnd::Cross { point: st.points[j], side: st.letters[j].side.flip() }
        } else if k == 0 {
            ChordEnd::Start(s)
        } else {
            ChordEnd::Cross { point: st.points[k - 1], side: st.letters[k - 1].side.flip() }
        };
        let to = if !st.closed && k == n {
            ChordEnd::End(s)
        } else {
            ChordEnd::Cross { point: st.points[k], side: st.letters[k].side }
        };
        (from, to)
    }

    pub fn key(&self, end: ChordEnd) -> Key {
        match end {
            ChordEnd::Cross { point, side } => {
                let arc = self.points[point].arc;
                let j = self.page.side_of(arc, side);
                let n = self.arc_order[arc].len();
                let r = self.point_rank[point];
                let ccw = match side {
                    Sign::Plus => r,
                    Sign::Minus => n - 1 - r,
                };
                (2 * j, ccw + 1)
            }
            ChordEnd::Start(s) => {
                let seg = self.strands[s].start.expect("arc strand").segment;
                (2 * seg + 1, self.end_rank[s][0])
            }
            ChordEnd::End(s) => {
                let seg = self.strands[s].end.expect("arc strand").segment;
                (2 * seg + 1, self.end_rank[s][1])
            }
        }
    }

    pub fn chord_keys(&self, s: usize, k: usize) -> (Key, Key) {
        let (a, b) = self.chord_ends(s, k);
        (self.key(a), self.key(b))
    }

    fn slot(&self, end: ChordEnd) -> Key {
        match end {
            ChordEnd::Cross { point, side } => (2 * self.page.side_of(self.points[point].arc, side), 0),
            other => self.key(other),
        }
    }

    fn plus_ray(&self, p: usize) -> Ray {
        let pt = self.points[p];
        let st = &self.strands[pt.strand];
        let k = self.point_index[p];
        match st.letters[k].side {
            Sign::Minus => {
                let chord = if st.closed { (k + 1) % st.letters.len() } else { k + 1 };
                Ray { strand: pt.strand, chord, forward: true }
            }
            Sign::Plus => Ray { strand: pt.strand, chord: k, forward: false },
        }
    }

    fn ray_exit(&self, r: Ray) -> ChordEnd {
        let (a, b) = self.chord_ends(r.strand, r.chord);
        if r.forward {
            b
        } else {
            a
        }
    }

    fn ray_advance(&self, r: Ray) -> Ray {
        let st = &self.strands[r.strand];
        let n = st.chord_count();
        let chord = if r.forward {
            if st.closed {
                (r.chord + 1) % n
            } else {
                r.chord + 1
            }
        } else if st.closed {
            (r.chord + n - 1) % n
        } else {
            r.chord - 1
        };
        Ray { chord, ..r }
    }

    fn minus_ray(&self, p: usize) -> Ray {
        let r = self.plus_ray(p);
        let st = &self.strands[r.strand];
        let n = st.chord_count();
        let chord = if r.forward {
            (r.chord + n - 1) % n
        } else if st.closed {
            (r.chord + 1) % n
        } else {
            r.chord + 1
        };
        Ray { strand: r.strand, chord, forward: !r.forward }
    }

    /// Order of `p` and `q` read off where their rays into the `side` copy
    /// of `arc` first diverge, or `None` if they never do.
    fn end_verdict(&self, arc: usize, p: usize, q: usize, side: Sign) -> Option<std::cmp::Ordering> {
        let total: usize = self.strands.iter().map(|s| s.letters.len()).sum();
        let limit = 4 * total + 8;
        let period = 2 * self.page.side_count();
        let (mut rx, mut ry) = match side {
            Sign::Plus => (self.plus_ray(p), self.plus_ray(q)),
            Sign::Minus => (self.minus_ray(p), self.minus_ray(q)),
        };
        let mut entry = 2 * self.page.side_of(arc, side);
        for _ in 0..limit {
            let ex = self.ray_exit(rx);
            let ey = self.ray_exit(ry);
            let kx = self.slot(ex);
            let ky = self.slot(ey);
            if kx == ky {
                if let (ChordEnd::Cross { point, side }, ChordEnd::Cross { .. }) = (ex, ey) {
                    let a = self.points[point].arc;
                    entry = 2 * self.page.side_of(a, side.flip());
                    rx = self.ray_advance(rx);
                    ry = self.ray_advance(ry);
                    continue;
                }
            }
            let dist = |k: Key| ((k.0 + period - entry) % period, k.1);
            // Nested chords: the one exiting earlier counterclockwise sits
            // later counterclockwise along the entry side.
            return Some(match side {
                Sign::Plus => dist(ky).cmp(&dist(kx)),
                Sign::Minus => dist(kx).cmp(&dist(ky)),
            });
        }
        None
    }

    /// Order of two crossing points of the same arc along that arc.
    ///
    /// When the two ends of a parallel run disagree the strands must cross
    /// once; the crossing is put at the forward end of the lower strand so
    /// that every pair in the run agrees.
    fn compare_on_arc(&self, arc: usize, p: usize, q: usize) -> std::cmp::Ordering {
        if p == q {
            return std::cmp::Ordering::Equal;
        }
        let (sp, sq) = (self.points[p].strand, self.points[q].strand);
        let plus = self.end_verdict(arc, p, q, Sign::Plus);
        let minus = if sp == sq { None } else { self.end_verdict(arc, p, q, Sign::Minus) };
        match (plus, minus) {
            (Some(a), Some(b)) if a != b => {
                let m = if sp < sq { p } else { q };
                if self.plus_ray(m).forward {
                    b
                } else {
                    a
                }
            }
            (Some(a), _) => a,
            (None, Some(b)) => b,
            (None, None) => (sp, p).cmp(&(sq, q)),
        }
    }

    pub fn chords_of(&self, s: usize) -> Vec<(Key, Key)> {
        (0..self.chord_count(s)).map(|k| self.chord_keys(s, k)).collect()
    }

    pub fn crossings_between(&self, s1: usize, s2: usize) -> usize {
        let a = self.chords_of(s1);
        let b = self.chords_of(s2);
        a.iter()
            .map(|&(a1, a2)| b.iter().filter(|&&(b1, b2)| chords_cross(a1, a2, b1, b2)).count())
            .sum()
    }

    pub fn self_crossings(&self, s: usize) -> usize {
        let a = self.chords_of(s);
        let mut n = 0;
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                if chords_cross(a[i].0, a[i].1, a[j].0, a[j].1) {
                    n += 1;
                }
            }
        }
        n
    }
}

/// Stable insertion sort that tolerates comparators that are not total
/// orders (non-embedded input must not abort the program).
fn insertion_sort<T: Copy>(v: &mut [T], mut cmp: impl FnMut(&T, &T) -> std::cmp::Ordering) {
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && cmp(&v[j - 1], &v[j]) == std::cmp::Ordering::Greater {
            v.swap(j - 1, j);
            j -= 1;
        }
    }
}

/// Label of a polygon edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeLabel {
    /// Part of cut arc `arc` between consecutive crossing points; gap 0
    /// starts at the arc's initial endpoint. Forward is increasing arc
    /// parameter.
    Alpha { arc: usize, gap: usize },
    /// Part of boundary segment `seg`; forward is counterclockwise.
    Seam { seg: usize, piece: usize },
    /// Part of chord `chord` of strand `strand` between consecutive
    /// chord crossings; forward is the strand direction.
    Chord { strand: usize, chord: usize, piece: usize },
}

/// A vertex of the drawing, identified across the two copies of a side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    /// Polygon corner at the start (`end = false`) or end of a side.
    Corner { side: usize, end: bool },
    Point(usize),
    StrandEnd { strand: usize, start: bool },
    Crossing(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChordCrossing {
    /// `(strand, chord)` of the two chords.
    pub first: (usize, usize),
    pub second: (usize, usize),
}

/// One edge of a face boundary, traversed with the face on the left
/// (for the polygon's own orientation).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FaceEdge {
    pub label: EdgeLabel,
    /// Whether the traversal agrees with the label's forward direction.
    pub forward: bool,
    /// Vertex where this edge starts.
    pub from: Vertex,
}

#[derive(Clone, Debug)]
pub struct Faces {
    pub faces: Vec<Vec<FaceEdge>>,
    pub crossings: Vec<ChordCrossing>,
    /// Crossing ids along each chord `(strand, chord)`, in chord order.
    pub along_chord: std::collections::BTreeMap<(usize, usize), Vec<usize>>,
}

struct HalfEdge {
    origin: usize,
    twin: usize,
    label: EdgeLabel,
    forward: bool,
}

impl Picture {
    /// Which chord of the owning strand meets point `p` on its `side` copy.
    pub fn chord_at_point(&self, p: usize, side: Sign) -> usize {
        let pt = self.points[p];
        let st = &self.strands[pt.strand];
        let k = self.point_index[p];
        if st.letters[k].side == side {
            k
        } else if st.closed {
            (k + 1) % st.letters.len()
        } else {
            k + 1
        }
    }

    /// Face structure of the polygon cut by all chords of the given
    /// strands.
    pub fn faces(&self, strands: &[usize]) -> Faces {
        let page = &self.page;
        // Boundary marks in counterclockwise order, with attached chord end.
        let mut marks: Vec<(Vertex, Option<(usize, usize, bool)>)> = Vec::new();
        let included = |s: usize| strands.contains(&s);
        for j in 0..page.side_count() {
            let (arc, side) = page.side(j);
            marks.push((Vertex::Corner { side: j, end: false }, None));
            let ids = &self.arc_order[arc];
            let n = ids.len();
            for r in 0..n {
                let p = match side {
                    Sign::Plus => ids[r],
                    Sign::Minus => ids[n - 1 - r],
                };
                let s = self.points[p].strand;
                let attach = if included(s) {
                    let c = self.chord_at_point(p, side);
                    let (_, to) = self.chord_ends(s, c);
                    let at_end = to == ChordEnd::Cross { point: p, side };
                    Some((s, c, at_end))
                } else {
                    None
                };
                marks.push((Vertex::Point(p), attach));
            }
            marks.push((Vertex::Corner { side: j, end: true }, None));
            for &(s, is_start) in &self.seg_order[j] {
                let attach = if included(s) {
                    let c = if is_start { 0 } else { self.chord_count(s) - 1 };
                    Some((s, c, !is_start))
                } else {
                    None
                };
                marks.push((Vertex::StrandEnd { strand: s, start: is_start }, attach));
            }
        }
        let nm = marks.len();
        let mut mark_of: std::collections::HashMap<(usize, usize, bool), usize> = Default::default();
        for (i, m) in marks.iter().enumerate() {
            if let Some(a) = m.1 {
                mark_of.insert(a, i);
            }
        }

        // Chords and their crossings.
        let chords: Vec<(usize, usize)> = strands
            .iter()
            .flat_map(|&s| (0..self.chord_count(s)).map(move |k| (s, k)))
            .collect();
        let keys: Vec<(Key, Key)> = chords.iter().map(|&(s, k)| self.chord_keys(s, k)).collect();
        let mut crossings = Vec::new();
        let mut per_chord: Vec<Vec<(CcwRank, usize)>> = vec![Vec::new(); chords.len()];
        for a in 0..chords.len() {
            for b in a + 1..chords.len() {
                let (a1, a2) = keys[a];
                let (b1, b2) = keys[b];
                if chords_cross(a1, a2, b1, b2) {
                    let id = crossings.len();
                    crossings.push(ChordCrossing { first: chords[a], second: chords[b] });
                    let ra = if in_ccw_interval(a1, a2, b1) { b1 } else { b2 };
                    let rb = if in_ccw_interval(b1, b2, a1) { a1 } else { a2 };
                    per_chord[a].push((ccw_offset(a1, ra), id));
                    per_chord[b].push((ccw_offset(b1, rb), id));
                }
            }
        }
        let mut along_chord = std::collections::BTreeMap::new();
        for (ci, v) in per_chord.iter_mut().enumerate() {
            v.sort();
            along_chord.insert(chords[ci], v.iter().map(|x| x.1).collect::<Vec<_>>());
        }

        // Half-edges.
        let nv = nm + crossings.len();
        let mut hes: Vec<HalfEdge> = Vec::new();
        let add = |hes: &mut Vec<HalfEdge>, u: usize, v: usize, label: EdgeLabel, fwd: bool| -> (usize, usize) {
            let h = hes.len();
            hes.push(HalfEdge { origin: u, twin: h + 1, label, forward: fwd });
            hes.push(HalfEdge { origin: v, twin: h, label, forward: !fwd });
            (h, h + 1)
        };
        let mut to_next = vec![0; nm];
        let mut to_prev = vec![0; nm];
        for i in 0..nm {
            let j = (i + 1) % nm;
            let (label, fwd) = self.boundary_label(&marks, i);
            let (h, t) = add(&mut hes, i, j, label, fwd);
            to_next[i] = h;
            to_prev[j] = t;
        }
        let mut chord_out = vec![None; nm];
        // crossing id -> [toward first end, toward first start, toward second end, toward second start]
        let mut cross_he = vec![[usize::MAX; 4]; crossings.len()];
        for (ci, &(s, k)) in chords.iter().enumerate() {
            let from = mark_of[&(s, k, false)];
            let to = mark_of[&(s, k, true)];
            let xs = &along_chord[&(s, k)];
            let mut seq = vec![from];
            seq.extend(xs.iter().map(|&x| nm + x));
            seq.push(to);
            for piece in 0..seq.len() - 1 {
                let (u, v) = (seq[piece], seq[piece + 1]);
                let (h, t) = add(&mut hes, u, v, EdgeLabel::Chord { strand: s, chord: k, piece }, true);
                let slot_u = |x: usize| if crossings[x].first == chords[ci] { 0 } else { 2 };
                if u < nm {
                    chord_out[u] = Some(h);
                } else {
                    cross_he[u - nm][slot_u(u - nm)] = h;
                }
                if v < nm {
                    chord_out[v] = Some(t);
                } else {
                    cross_he[v - nm][slot_u(v - nm) + 1] = t;
                }
            }
        }
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for i in 0..nm {
            out[i].push(to_next[i]);
            if let Some(h) = chord_out[i] {
                out[i].push(h);
            }
            out[i].push(to_prev[i]);
        }
        for (x, c) in crossings.iter().enumerate() {
            let ka = keys[chords.iter().position(|&ch| ch == c.first).unwrap()];
            let kb = keys[chords.iter().position(|&ch| ch == c.second).unwrap()];
            let [a_end, a_start, b_end, b_start] = cross_he[x];
            out[nm + x] = if in_ccw_interval(ka.0, ka.1, kb.0) {
                vec![b_start, a_end, b_end, a_start]
            } else {
                vec![b_end, a_end, b_start, a_start]
            };
        }
        let mut pos = vec![0; hes.len()];
        for v in &out {
            for (i, &h) in v.iter().enumerate() {
                pos[h] = i;
            }
        }
        let next = |h: usize| -> usize {
            let t = hes[h].twin;
            let v = hes[t].origin;
            let l = out[v].len();
            out[v][(pos[t] + l - 1) % l]
        };
        let outer_start = to_prev[0];
        let mut seen = vec![false; hes.len()];
        let mut h = outer_start;
        while !seen[h] {
            seen[h] = true;
            h = next(h);
        }
        let vertex_of = |v: usize| if v < nm { marks[v].0 } else { Vertex::Crossing(v - nm) };
        let mut faces = Vec::new();
        for start in 0..hes.len() {
            if seen[start] {
                continue;
            }
            let mut face = Vec::new();
            let mut h = start;
            while !seen[h] {
                seen[h] = true;
                face.push(FaceEdge { label: hes[h].label, forward: hes[h].forward, from: vertex_of(hes[h].origin) });
                h = next(h);
            }
            faces.push(face);
        }
        Faces { faces, crossings, along_chord }
    }

    fn boundary_label(&self, marks: &[(Vertex, Option<(usize, usize, bool)>)], i: usize) -> (EdgeLabel, bool) {
        let nm = marks.len();
        let (u, v) = (marks[i].0, marks[(i + 1) % nm].0);
        let side_of_mark = |m: Vertex| match m {
            Vertex::Corner { side, .. } => Some(side),
            _ => None,
        };
        // On a side iff the edge does not start at an end corner or a strand end.
        match u {
            Vertex::Corner { end: true, side } => {
                let piece = 0;
                (EdgeLabel::Seam { seg: side, piece }, true)
            }
            Vertex::StrandEnd { strand, start } => {
                let seg = if start {
                    self.strands[strand].start.unwrap().segment
                } else {
                    self.strands[strand].end.unwrap().segment
                };
                let r = self.end_rank[strand][if start { 0 } else { 1 }];
                (EdgeLabel::Seam { seg, piece: r + 1 }, true)
            }
            _ => {
                // Edge along a side: find which side by scanning back to its start corner.
                let mut k = i;
                let side = loop {
                    if let Some(s) = side_of_mark(marks[k].0) {
                        break s;
                    }
                    k = (k + nm - 1) % nm;
                };
                let (arc, sign) = self.page.side(side);
                let n = self.arc_order[arc].len() as isize;
                let t_of = |m: Vertex| -> isize {
                    match m {
                        Vertex::Point(p) => self.point_rank[p] as isize,
                        Vertex::Corner { end, .. } => match (sign, end) {
                            (Sign::Plus, false) | (Sign::Minus, true) => -1,
                            _ => n,
                        },
                        _ => unreachable!("side edges join points and corners"),
                    }
                };
                let (tu, tv) = (t_of(u), t_of(v));
                let gap = (tu.max(tv)) as usize;
                (EdgeLabel::Alpha { arc, gap }, tv > tu)
            }
        }
    }
}


impl Picture {
    /// Deletes a strand and its crossing points.
    pub fn remove_strand(&mut self, s: usize) {
        let keep: Vec<usize> = (0..self.points.len()).filter(|&p| self.points[p].strand != s).collect();
        let mut new_id = vec![usize::MAX; self.points.len()];
        for (i, &p) in keep.iter().enumerate() {
            new_id[p] = i;
        }
        let fix_strand = |t: usize| if t > s { t - 1 } else { t };
        self.points = keep
            .iter()
            .map(|&p| Point { strand: fix_strand(self.points[p].strand), arc: self.points[p].arc })
            .collect();
        self.strands.remove(s);
        for st in &mut self.strands {
            for p in &mut st.points {
                *p = new_id[*p];
            }
        }
        for ids in &mut self.arc_order {
            *ids = ids.iter().filter(|&&p| new_id[p] != usize::MAX).map(|&p| new_id[p]).collect();
        }
        for ids in &mut self.seg_order {
            *ids = ids.iter().filter(|e| e.0 != s).map(|&(t, b)| (fix_strand(t), b)).collect();
        }
        self.refresh_indices();
    }

    /// Whether `p` lies to the left of strand `ghost` at one of its points
    /// `q` on the same arc, given `p` is adjacent to `q` on the t-after side.
    fn left_is_after(&self, q: usize) -> bool {
        self.letter_of(q).side == Sign::Plus
    }

    /// Winds strand `s` around the closed strand `ghost`, which it must
    /// cross exactly once: the crossing is slid `laps` times around the
    /// ghost, so the result is isotopic to the original strand.
    pub fn wind(&mut self, s: usize, ghost: usize, laps: usize) -> Result<()> {
        if !self.strands[ghost].closed {
            return Err(Error::Internal("winding curve must be closed".into()));
        }
        let mut hit = None;
        for kb in 0..self.chord_count(s) {
            let (b1, b2) = self.chord_keys(s, kb);
            for kd in 0..self.chord_count(ghost) {
                let (d1, d2) = self.chord_keys(ghost, kd);
                if chords_cross(b1, b2, d1, d2) {
                    if hit.is_some() {
                        return Err(Error::Internal("winding curve meets the strand more than once".into()));
                    }
                    hit = Some((kb, kd));
                }
            }
        }
        let Some((kb, kd)) = hit else {
            return Err(Error::Internal("winding curve misses the strand".into()));
        };
        if laps == 0 {
            return Ok(());
        }
        let (d1, d2) = self.chord_keys(ghost, kd);
        let e1 = self.chord_keys(s, kb).0;
        let first_right = in_ccw_interval(d1, d2, e1);
        let dl = self.strands[ghost].letters.clone();
        let dp = self.strands[ghost].points.clone();
        let len = dl.len();
        // (anchor, right side, distance rank) for each new point, in strand order.
        let mut plan: Vec<(Letter, usize, bool, usize)> = Vec::new();
        for lap in 1..=laps {
            for t in 0..len {
                let i = (kd + t) % len;
                plan.push((dl[i], dp[i], first_right, laps - lap));
            }
        }
        for lap in 1..=laps {
            for t in 0..len {
                let i = (kd + 2 * len - 1 - t) % len;
                plan.push((dl[i].inverse(), dp[i], !first_right, lap - 1));
            }
        }
        let mut after: std::collections::HashMap<usize, Vec<(usize, usize)>> = Default::default();
        let mut before: std::collections::HashMap<usize, Vec<(usize, usize)>> = Default::default();
        let mut new_points = Vec::new();
        for &(letter, anchor, right, dist) in &plan {
            let id = self.points.len();
            self.points.push(Point { strand: s, arc: letter.arc });
            new_points.push(id);
            let is_after = self.left_is_after(anchor) != right;
            let bucket = if is_after { &mut after } else { &mut before };
            bucket.entry(anchor).or_default().push((dist, id));
        }
        for ids in &mut self.arc_order {
            let mut out = Vec::with_capacity(ids.len());
            for &p in ids.iter() {
                if let Some(b) = before.get_mut(&p) {
                    b.sort();
                    out.extend(b.iter().rev().map(|x| x.1));
                }
                out.push(p);
                if let Some(a) = after.get_mut(&p) {
                    a.sort();
                    out.extend(a.iter().map(|x| x.1));
                }
            }
            *ids = out;
        }
        let st = &mut self.strands[s];
        let at = kb.min(st.letters.len());
        let tail_l = st.letters.split_off(at);
        let tail_p = st.points.split_off(at);
        st.letters.extend(plan.iter().map(|x| x.0));
        st.points.extend(new_points);
        st.letters.extend(tail_l);
        st.points.extend(tail_p);
        self.refresh_indices();
        Ok(())
    }

    /// Pushes a finger of chord `k` of strand `s` across the edge of arc
    /// `arc` between t-ranks `gap - 1` and `gap`, seen from side copy `side`.
    /// Returns the index of the new tip chord.
    pub fn finger(&mut self, s: usize, k: usize, arc: usize, side: Sign, gap: usize) -> usize {
        let p1 = self.points.len();
        let p2 = p1 + 1;
        self.points.push(Point { strand: s, arc });
        self.points.push(Point { strand: s, arc });
        let st = &mut self.strands[s];
        st.letters.splice(k..k, [Letter::new(arc, side), Letter::new(arc, side.flip())]);
        st.points.splice(k..k, [p1, p2]);
        self.arc_order[arc].splice(gap..gap, [p1, p2]);
        self.refresh_indices();
        let (a1, a2) = self.chord_keys(s, k);
        let (b1, b2) = self.chord_keys(s, k + 2);
        if chords_cross(a1, a2, b1, b2) {
            self.arc_order[arc].swap(gap, gap + 1);
            self.refresh_indices();
        }
        k + 1
    }
}
