//! Pointed Heegaard diagrams and triple diagrams of an open book.
//!
//! The surface is `S_{1/2} ∪ −S_0`. Each half is drawn on its own copy of
//! the cut polygon; the α curves are the polygon sides and every other
//! curve is a strand of the half's [`Picture`]. Regions are faces of the
//! two polygons glued across the boundary of the page.

use std::collections::HashMap;

use serde::Serialize;

use crate::page::{apply_mapping_class, push_off, EmbeddedPath, MappingClassWord, Page};
use crate::picture::{EdgeLabel, Faces, Picture, Vertex};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    Alpha,
    Beta,
    Gamma,
}

impl Family {
    pub fn symbol(self) -> char {
        match self {
            Family::Alpha => 'a',
            Family::Beta => 'b',
            Family::Gamma => 'c',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Half {
    Top,
    Bottom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttachingCurve {
    pub family: Family,
    pub index: usize,
    pub top: EmbeddedPath,
    pub bottom: EmbeddedPath,
}

/// A ray leaving a vertex along a polygon edge.
pub type Ray = (EdgeLabel, bool);

/// One of the four corners at a crossing, from ray `from` counterclockwise
/// (on the surface) to ray `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Corner {
    pub region: usize,
    pub from: Ray,
    pub to: Ray,
}

#[derive(Clone, Debug)]
pub struct Crossing {
    pub half: Half,
    pub vertex: Vertex,
    /// Curve ids, ordered by family.
    pub curves: [usize; 2],
    /// Corners in counterclockwise order around the crossing.
    pub corners: Vec<Corner>,
}

/// A piece of a curve between consecutive crossings, oriented along the curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Segment {
    pub curve: usize,
    pub from: Option<usize>,
    pub to: Option<usize>,
    pub left: usize,
    pub right: usize,
}

#[derive(Clone, Debug)]
pub struct Region {
    /// Euler measure in quarter units.
    pub euler_q: i64,
    /// Number of crossing corners on the region.
    pub corners: usize,
    pub faces: Vec<(Half, usize)>,
}

impl Region {
    pub fn euler_characteristic(&self) -> i64 {
        (self.euler_q + self.corners as i64) / 4
    }
}

#[derive(Clone, Debug)]
pub struct Diagram {
    pub page: Page,
    pub curves: Vec<AttachingCurve>,
    pub top: Picture,
    pub bottom: Picture,
    /// Curve of each strand, per half.
    pub top_curve: Vec<usize>,
    pub bottom_curve: Vec<usize>,
    pub crossings: Vec<Crossing>,
    pub segments: Vec<Segment>,
    /// Segment ids of each curve, in curve order.
    pub curve_segments: Vec<Vec<usize>>,
    pub regions: Vec<Region>,
    pub z: usize,
    /// Monodromy words: `[g]` for a Heegaard diagram, `[g, h]` for a triple.
    pub words: Vec<MappingClassWord>,
    pub top_faces: Faces,
    pub bottom_faces: Faces,
    pub crossing_index: HashMap<(Half, Vertex), usize>,
    /// Boundary piece `(segment, piece)` of the top half whose region holds `z`.
    pub z_seam: (usize, usize),
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

impl Diagram {
    pub fn families(&self) -> Vec<Family> {
        let mut f: Vec<Family> = self.curves.iter().map(|c| c.family).collect();
        f.dedup();
        f
    }

    pub fn has_family(&self, f: Family) -> bool {
        self.curves.iter().any(|c| c.family == f)
    }

    pub fn curve_id(&self, family: Family, index: usize) -> Option<usize> {
        self.curves.iter().position(|c| c.family == family && c.index == index)
    }

    pub fn closed_genus(&self) -> usize {
        self.page.closed_genus()
    }

    pub fn euler_characteristic(&self) -> i64 {
        let v = self.crossings.len() as i64;
        let e = self.segments.iter().filter(|s| s.from.is_some()).count() as i64;
        let f: i64 = self.regions.iter().map(|r| r.euler_characteristic()).sum();
        v - e + f
    }

    pub fn picture(&self, half: Half) -> &Picture {
        match half {
            Half::Top => &self.top,
            Half::Bottom => &self.bottom,
        }
    }

    fn faces_of(&self, half: Half) -> &Faces {
        match half {
            Half::Top => &self.top_faces,
            Half::Bottom => &self.bottom_faces,
        }
    }

    /// Builds the combinatorial map from the two drawings. Every strand of
    /// each picture must belong to a curve.
    pub fn assemble(
        page: Page,
        curves: Vec<AttachingCurve>,
        top: Picture,
        bottom: Picture,
        top_curve: Vec<usize>,
        bottom_curve: Vec<usize>,
        words: Vec<MappingClassWord>,
    ) -> Result<Diagram> {
        let seams = |p: &Picture| p.seg_order.iter().map(|v| v.len()).collect::<Vec<_>>();
        if seams(&top) != seams(&bottom) {
            return Err(Error::Internal("the two halves disagree along the boundary".into()));
        }
        let top_faces = top.faces(&(0..top.strands.len()).collect::<Vec<_>>());
        let bottom_faces = bottom.faces(&(0..bottom.strands.len()).collect::<Vec<_>>());
        let mut d = Diagram {
            page,
            curves,
            top,
            bottom,
            top_curve,
            bottom_curve,
            crossings: Vec::new(),
            segments: Vec::new(),
            curve_segments: Vec::new(),
            regions: Vec::new(),
            z: 0,
            words,
            top_faces,
            bottom_faces,
            crossing_index: HashMap::new(),
            z_seam: (0, usize::MAX),
        };
        d.build_regions();
        d.build_crossings();
        d.build_segments();
        Ok(d)
    }

    fn face_count(&self, half: Half) -> usize {
        self.faces_of(half).faces.len()
    }

    fn global_face(&self, half: Half, f: usize) -> usize {
        match half {
            Half::Top => f,
            Half::Bottom => self.face_count(Half::Top) + f,
        }
    }

    /// Face index containing the given directed edge.
    fn edge_faces(&self, half: Half) -> HashMap<Ray, usize> {
        let mut m = HashMap::new();
        for (i, face) in self.faces_of(half).faces.iter().enumerate() {
            for e in face {
                m.insert((e.label, e.forward), i);
            }
        }
        m
    }

    fn build_regions(&mut self) {
        let nt = self.face_count(Half::Top);
        let n = nt + self.face_count(Half::Bottom);
        let mut uf = UnionFind((0..n).collect());
        let et = self.edge_faces(Half::Top);
        let eb = self.edge_faces(Half::Bottom);
        for (&(label, fwd), &f) in &et {
            if let EdgeLabel::Seam { .. } = label {
                if fwd {
                    if let Some(&g) = eb.get(&(label, true)) {
                        uf.union(f, nt + g);
                    }
                }
            }
        }
        if !self.has_family(Family::Alpha) {
            for (half, em, off) in [(Half::Top, &et, 0), (Half::Bottom, &eb, nt)] {
                let _ = half;
                for (&(label, fwd), &f) in em.iter() {
                    if let (EdgeLabel::Alpha { .. }, true) = (label, fwd) {
                        if let Some(&g) = em.get(&(label, false)) {
                            uf.union(off + f, off + g);
                        }
                    }
                }
            }
        }
        let mut id_of_root: HashMap<usize, usize> = HashMap::new();
        let mut regions: Vec<Region> = Vec::new();
        let mut face_region = vec![0; n];
        for (g, slot) in face_region.iter_mut().enumerate() {
            let r = uf.find(g);
            let id = *id_of_root.entry(r).or_insert_with(|| {
                regions.push(Region { euler_q: 0, corners: 0, faces: Vec::new() });
                regions.len() - 1
            });
            *slot = id;
            let (half, f) = if g < nt { (Half::Top, g) } else { (Half::Bottom, g - nt) };
            let len = self.faces_of(half).faces[f].len() as i64;
            regions[id].euler_q += 4 - len;
            regions[id].faces.push((half, f));
        }
        self.regions = regions;
        let (seg, piece) = self.z_seam;
        let piece = piece.min(self.top.seg_order[seg].len());
        self.z_seam = (seg, piece);
        let zf = et[&(EdgeLabel::Seam { seg, piece }, true)];
        self.z = face_region[zf];
    }

    /// Region containing face `f` of `half`.
    pub fn region_of_face(&self, half: Half, f: usize) -> usize {
        let g = self.global_face(half, f);
        self.face_regions()[g]
    }

    fn face_regions(&self) -> Vec<usize> {
        let n = self.face_count(Half::Top) + self.face_count(Half::Bottom);
        let mut v = vec![0; n];
        for (r, reg) in self.regions.iter().enumerate() {
            for &(h, f) in &reg.faces {
                v[self.global_face(h, f)] = r;
            }
        }
        v
    }

    fn strand_curve(&self, half: Half, s: usize) -> usize {
        match half {
            Half::Top => self.top_curve[s],
            Half::Bottom => self.bottom_curve[s],
        }
    }

    /// Curve pair meeting at a picture vertex, if it is a crossing.
    fn crossing_curves(&self, half: Half, v: Vertex) -> Option<[usize; 2]> {
        let pic = self.picture(half);
        let pair = match v {
            Vertex::Point(p) => {
                let a = self.curve_id(Family::Alpha, pic.points[p].arc)?;
                [a, self.strand_curve(half, pic.points[p].strand)]
            }
            Vertex::Crossing(x) => {
                let c = self.faces_of(half).crossings[x];
                [self.strand_curve(half, c.first.0), self.strand_curve(half, c.second.0)]
            }
            _ => return None,
        };
        let key = |c: usize| (self.curves[c].family, self.curves[c].index);
        let mut pair = pair;
        if key(pair[0]) > key(pair[1]) {
            pair.swap(0, 1);
        }
        Some(pair)
    }

    fn build_crossings(&mut self) {
        let fr = self.face_regions();
        let mut index: HashMap<(Half, Vertex), usize> = HashMap::new();
        let mut crossings = Vec::new();
        for half in [Half::Top, Half::Bottom] {
            let pic = self.picture(half);
            let mut verts: Vec<Vertex> = Vec::new();
            for ids in &pic.arc_order {
                verts.extend(ids.iter().map(|&p| Vertex::Point(p)));
            }
            verts.extend((0..self.faces_of(half).crossings.len()).map(Vertex::Crossing));
            for v in verts {
                if let Some(curves) = self.crossing_curves(half, v) {
                    index.insert((half, v), crossings.len());
                    crossings.push(Crossing { half, vertex: v, curves, corners: Vec::new() });
                }
            }
        }
        for half in [Half::Top, Half::Bottom] {
            for (fi, face) in self.faces_of(half).faces.iter().enumerate() {
                let region = fr[self.global_face(half, fi)];
                let n = face.len();
                for i in 0..n {
                    let e_out = face[i];
                    let e_in = face[(i + n - 1) % n];
                    if let Some(&x) = index.get(&(half, e_out.from)) {
                        let a = (e_out.label, e_out.forward);
                        let b = (e_in.label, !e_in.forward);
                        let c = match half {
                            Half::Top => Corner { region, from: a, to: b },
                            Half::Bottom => Corner { region, from: b, to: a },
                        };
                        crossings[x].corners.push(c);
                    }
                }
            }
        }
        for c in &mut crossings {
            let mut sorted = vec![c.corners[0]];
            while sorted.len() < c.corners.len() {
                let last = sorted.last().unwrap().to;
                match c.corners.iter().find(|k| k.from == last) {
                    Some(k) => sorted.push(*k),
                    None => break,
                }
            }
            c.corners = sorted;
        }
        for r in &mut self.regions {
            r.corners = 0;
        }
        for c in &crossings {
            for k in &c.corners {
                self.regions[k.region].corners += 1;
            }
        }
        self.crossings = crossings;
        self.crossing_index = index;
    }

    /// Fine edges of a curve in curve order, each followed by the vertex it
    /// ends at.
    fn curve_walk(&self, curve: usize) -> Vec<(Half, EdgeLabel, Vertex)> {
        let c = &self.curves[curve];
        let mut walk = Vec::new();
        if c.family == Family::Alpha {
            let i = c.index;
            let top = &self.top.arc_order[i];
            for g in 0..=top.len() {
                let v = if g < top.len() { Vertex::Point(top[g]) } else { Vertex::Corner { side: usize::MAX, end: true } };
                walk.push((Half::Top, EdgeLabel::Alpha { arc: i, gap: g }, v));
            }
            let bot = &self.bottom.arc_order[i];
            for g in (0..=bot.len()).rev() {
                let v = if g > 0 { Vertex::Point(bot[g - 1]) } else { Vertex::Corner { side: usize::MAX, end: false } };
                walk.push((Half::Bottom, EdgeLabel::Alpha { arc: i, gap: g }, v));
            }
            return walk;
        }
        for half in [Half::Top, Half::Bottom] {
            let pic = self.picture(half);
            let curve_map = match half {
                Half::Top => &self.top_curve,
                Half::Bottom => &self.bottom_curve,
            };
            let Some(s) = curve_map.iter().position(|&x| x == curve) else { continue };
            let faces = self.faces_of(half);
            let n = pic.chord_count(s);
            let st = &pic.strands[s];
            let mut part = Vec::new();
            for k in 0..n {
                let xs = &faces.along_chord[&(s, k)];
                for (piece, &x) in xs.iter().enumerate() {
                    part.push((half, EdgeLabel::Chord { strand: s, chord: k, piece }, Vertex::Crossing(x)));
                }
                let end = if k < st.points.len() { Vertex::Point(st.points[k]) } else { Vertex::StrandEnd { strand: s, start: false } };
                part.push((half, EdgeLabel::Chord { strand: s, chord: k, piece: xs.len() }, end));
            }
            if half == Half::Bottom {
                // Reverse: each edge now ends at the vertex that preceded it.
                let mut rev = Vec::new();
                for i in (0..part.len()).rev() {
                    let v = if i > 0 { part[i - 1].2 } else { Vertex::StrandEnd { strand: s, start: true } };
                    rev.push((part[i].0, part[i].1, v));
                }
                part = rev;
            }
            walk.extend(part);
        }
        walk
    }

    fn build_segments(&mut self) {
        let et = self.edge_faces(Half::Top);
        let eb = self.edge_faces(Half::Bottom);
        let fr = self.face_regions();
        let side_regions = |half: Half, label: EdgeLabel| -> (usize, usize) {
            let (m, off) = match half {
                Half::Top => (&et, 0),
                Half::Bottom => (&eb, self.face_count(Half::Top)),
            };
            (fr[off + m[&(label, true)]], fr[off + m[&(label, false)]])
        };
        let mut segments = Vec::new();
        let mut curve_segments = Vec::new();
        for c in 0..self.curves.len() {
            let walk = self.curve_walk(c);
            let cross: Vec<Option<usize>> = walk
                .iter()
                .map(|&(h, _, v)| self.crossing_index.get(&(h, v)).copied().filter(|&x| self.crossings[x].curves.contains(&c)))
                .collect();
            let mut ids = Vec::new();
            match cross.iter().position(|x| x.is_some()) {
                None => {
                    let (l, r) = side_regions(walk[0].0, walk[0].1);
                    ids.push(segments.len());
                    segments.push(Segment { curve: c, from: None, to: None, left: l, right: r });
                }
                Some(first) => {
                    let n = walk.len();
                    let mut from = cross[first];
                    let mut i = (first + 1) % n;
                    let mut start_edge = i;
                    loop {
                        if let Some(x) = cross[i] {
                            let (h, label, _) = walk[start_edge];
                            let (l, r) = side_regions(h, label);
                            ids.push(segments.len());
                            segments.push(Segment { curve: c, from, to: Some(x), left: l, right: r });
                            from = Some(x);
                            start_edge = (i + 1) % n;
                            if i == first {
                                break;
                            }
                        }
                        i = (i + 1) % n;
                    }
                }
            }
            curve_segments.push(ids);
        }
        self.segments = segments;
        self.curve_segments = curve_segments;
    }
}

fn alpha_curves(page: &Page) -> Vec<AttachingCurve> {
    (0..page.arc_count())
        .map(|i| AttachingCurve { family: Family::Alpha, index: i, top: page.cut_arc(i), bottom: page.cut_arc(i) })
        .collect()
}

fn push_offs(page: &Page, depth: usize) -> Result<Vec<EmbeddedPath>> {
    (0..page.arc_count())
        .map(|i| {
            let mut p = push_off(page, &page.cut_arc(i))?;
            for _ in 1..depth {
                p = push_off(page, &p)?;
            }
            Ok(p)
        })
        .collect()
}

/// Pointed Heegaard diagram of the open book `(page, g)`.
pub fn build_heegaard(page: &Page, g: &MappingClassWord) -> Result<Diagram> {
    let m = page.arc_count();
    let b = push_offs(page, 1)?;
    let gb: Vec<EmbeddedPath> = b.iter().map(|p| apply_mapping_class(page, g, p)).collect::<Result<_>>()?;
    let mut curves = alpha_curves(page);
    for i in 0..m {
        curves.push(AttachingCurve { family: Family::Beta, index: i, top: b[i].clone(), bottom: gb[i].clone() });
    }
    let top = Picture::realize(page, &b)?;
    let bottom = Picture::realize(page, &gb)?;
    let map: Vec<usize> = (m..2 * m).collect();
    Diagram::assemble(page.clone(), curves, top, bottom, map.clone(), map, vec![g.clone()])
}

/// Pointed triple diagram for the pair of monodromies `(g, h)`.
pub fn build_triple(page: &Page, g: &MappingClassWord, h: &MappingClassWord) -> Result<Diagram> {
    let m = page.arc_count();
    let b = push_offs(page, 1)?;
    let c = push_offs(page, 2)?;
    let hg = g.then(h);
    let gb: Vec<EmbeddedPath> = b.iter().map(|p| apply_mapping_class(page, g, p)).collect::<Result<_>>()?;
    let hgc: Vec<EmbeddedPath> = c.iter().map(|p| apply_mapping_class(page, &hg, p)).collect::<Result<_>>()?;
    let mut curves = alpha_curves(page);
    for i in 0..m {
        curves.push(AttachingCurve { family: Family::Beta, index: i, top: b[i].clone(), bottom: gb[i].clone() });
    }
    for i in 0..m {
        curves.push(AttachingCurve { family: Family::Gamma, index: i, top: c[i].clone(), bottom: hgc[i].clone() });
    }
    let top_paths: Vec<EmbeddedPath> = b.iter().chain(&c).cloned().collect();
    let bottom_paths: Vec<EmbeddedPath> = gb.iter().chain(&hgc).cloned().collect();
    let top = Picture::realize(page, &top_paths)?;
    let bottom = Picture::realize(page, &bottom_paths)?;
    let map: Vec<usize> = (m..3 * m).collect();
    Diagram::assemble(page.clone(), curves, top, bottom, map.clone(), map, vec![g.clone(), h.clone()])
}

impl Diagram {
    /// The same curves with the basepoint in the region of a different
    /// top boundary piece.
    pub fn with_basepoint(&self, seam: (usize, usize)) -> Result<Diagram> {
        if seam.0 >= self.page.side_count() || seam.1 > self.top.seg_order[seam.0].len() {
            return Err(Error::Internal(format!("no boundary piece {seam:?}")));
        }
        let mut d = self.clone();
        d.z_seam = seam;
        d.build_regions();
        d.build_crossings();
        d.build_segments();
        Ok(d)
    }

    /// The sub-diagram on two of the curve families.
    pub fn restrict(&self, keep: [Family; 2]) -> Result<Diagram> {
        let kept: Vec<usize> = (0..self.curves.len()).filter(|&c| keep.contains(&self.curves[c].family)).collect();
        let new_id = |c: usize| kept.iter().position(|&k| k == c);
        let mut top = self.top.clone();
        let mut bottom = self.bottom.clone();
        let mut top_curve = self.top_curve.clone();
        let mut bottom_curve = self.bottom_curve.clone();
        for (pic, map) in [(&mut top, &mut top_curve), (&mut bottom, &mut bottom_curve)] {
            for s in (0..map.len()).rev() {
                match new_id(map[s]) {
                    Some(n) => map[s] = n,
                    None => {
                        pic.remove_strand(s);
                        map.remove(s);
                    }
                }
            }
        }
        let curves = kept.iter().map(|&c| self.curves[c].clone()).collect();
        let words = match (keep, self.words.as_slice()) {
            ([Family::Alpha, Family::Beta], [g, ..]) => vec![g.clone()],
            ([Family::Beta, Family::Gamma], [_, h]) => vec![h.clone()],
            ([Family::Alpha, Family::Gamma], [g, h]) => vec![g.then(h)],
            _ => Vec::new(),
        };
        Diagram::assemble(self.page.clone(), curves, top, bottom, top_curve, bottom_curve, words)
    }

    /// The distinguished top-half generator for a pair of families: the
    /// unique crossing of the `i`-th curves of the two families on `S_{1/2}`.
    pub fn contact_generator(&self, pair: [Family; 2]) -> Result<Vec<usize>> {
        let m = self.page.arc_count();
        let mut out = Vec::with_capacity(m);
        for i in 0..m {
            let a = self.curve_id(pair[0], i).ok_or_else(|| Error::Internal("missing family".into()))?;
            let b = self.curve_id(pair[1], i).ok_or_else(|| Error::Internal("missing family".into()))?;
            let hits: Vec<usize> = (0..self.crossings.len())
                .filter(|&x| {
                    let c = &self.crossings[x];
                    c.half == Half::Top && (c.curves == [a, b] || c.curves == [b, a])
                })
                .collect();
            match hits.as_slice() {
                [x] => out.push(*x),
                _ => return Err(Error::Internal(format!("expected one top crossing of curves {a} and {b}"))),
            }
        }
        Ok(out)
    }
}

pub const DEFAULT_WINDING_BUDGET: usize = 8;

/// Winds every β curve around the image under the monodromy of the core
/// of its band, inside the bottom half. The core meets `b_i` once and the
/// other push-offs not at all, so each β curve crosses its winding curve
/// exactly once.
/// `reverse[i]` spirals β_i the other way around.
pub fn wind(diag: &Diagram, laps: usize, reverse: &[bool]) -> Result<Diagram> {
    if diag.families() != [Family::Alpha, Family::Beta] {
        return Err(Error::Internal("winding applies to two-family diagrams".into()));
    }
    let page = &diag.page;
    let m = page.arc_count();
    let g = diag.words.first().cloned().unwrap_or_default();
    let mut paths: Vec<EmbeddedPath> = (0..m).map(|i| diag.curves[diag.curve_id(Family::Beta, i).unwrap()].bottom.clone()).collect();
    for i in 0..m {
        let mut core = apply_mapping_class(page, &g, &page.band_core(i))?;
        if reverse.get(i).copied().unwrap_or(false) {
            core.letters = core.letters.iter().rev().map(|l| l.inverse()).collect();
        }
        paths.push(core);
    }
    let mut bottom = Picture::realize(page, &paths)?;
    for i in 0..m {
        bottom.wind(i, m + i, laps)?;
    }
    for i in (0..m).rev() {
        bottom.remove_strand(m + i);
    }
    let mut curves = diag.curves.clone();
    for i in 0..m {
        let c = diag.curve_id(Family::Beta, i).unwrap();
        curves[c].bottom = bottom.strands[i].to_path();
    }
    let map: Vec<usize> = (0..m).map(|i| diag.curve_id(Family::Beta, i).unwrap()).collect();
    let d = Diagram::assemble(page.clone(), curves, diag.top.clone(), bottom, map.clone(), map, diag.words.clone())?;
    d.with_basepoint(diag.z_seam)
}

/// Returns an isotopic weakly admissible diagram, winding with 1, 2, 4, …
/// laps (in every combination of directions) until admissible.
pub fn wind_for_admissibility(diag: &Diagram, budget: usize) -> Result<Diagram> {
    if crate::domain::is_weakly_admissible(diag).admissible {
        return Ok(diag.clone());
    }
    let m = diag.page.arc_count();
    for attempt in 0..budget {
        for mask in 0..1usize << m {
            let reverse: Vec<bool> = (0..m).map(|i| mask >> i & 1 == 1).collect();
            let d = wind(diag, 1 << attempt, &reverse)?;
            if crate::domain::is_weakly_admissible(&d).admissible {
                return Ok(d);
            }
        }
    }
    Err(Error::WindingBudgetExceeded(budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::page::TwistLetter;

    #[test]
    fn winding_repairs_a_misplaced_basepoint() {
        let (page, w) = annulus_twist(0);
        let d = build_heegaard(&page, &w).unwrap();
        let same = wind_for_admissibility(&d, DEFAULT_WINDING_BUDGET).unwrap();
        assert_eq!(same.crossings.len(), d.crossings.len());
        let thin = d.with_basepoint((0, 0)).unwrap();
        assert!(!crate::domain::is_weakly_admissible(&thin).admissible);
        let wound = wind_for_admissibility(&thin, DEFAULT_WINDING_BUDGET).unwrap();
        assert!(crate::domain::is_weakly_admissible(&wound).admissible);
        check_invariants(&wound);
        let x = thin.contact_generator([Family::Alpha, Family::Beta]).unwrap();
        let y = wound.contact_generator([Family::Alpha, Family::Beta]).unwrap();
        assert_eq!(thin.crossings[x[0]].vertex, wound.crossings[y[0]].vertex);
    }

    fn annulus_twist(p: i32) -> (Page, MappingClassWord) {
        let page = Page::standard(0, 2).unwrap();
        let w = MappingClassWord::twist(page.band_core(0), p);
        (page, w)
    }

    fn check_invariants(d: &Diagram) {
        let chi = 2 - 2 * d.closed_genus() as i64;
        assert_eq!(d.regions.iter().map(|r| r.euler_q).sum::<i64>(), 4 * chi);
        assert_eq!(d.euler_characteristic(), chi);
        for c in &d.crossings {
            assert_eq!(c.corners.len(), 4, "crossing {c:?}");
        }
    }

    #[test]
    fn annulus_identity_has_two_crossings() {
        let (page, w) = annulus_twist(0);
        let d = build_heegaard(&page, &w).unwrap();
        assert_eq!(d.crossings.len(), 2);
        assert_eq!(d.closed_genus(), 1);
        check_invariants(&d);
        assert_eq!(d.contact_generator([Family::Alpha, Family::Beta]).unwrap().len(), 1);
    }

    #[test]
    fn annulus_twists_have_expected_crossing_counts() {
        for (p, n) in [(1, 1), (2, 2), (3, 3), (-1, 3), (-2, 4)] {
            let (page, w) = annulus_twist(p);
            let d = build_heegaard(&page, &w).unwrap();
            assert_eq!(d.crossings.len(), n, "t^{p}");
            check_invariants(&d);
        }
    }

    #[test]
    fn torus_diagrams_satisfy_invariants() {
        let page = Page::standard(1, 1).unwrap();
        let x0 = page.band_core(0);
        let x1 = page.band_core(1);
        let g = MappingClassWord::new(vec![TwistLetter { curve: x0, exponent: 1 }, TwistLetter { curve: x1, exponent: -1 }]);
        let d = build_heegaard(&page, &g).unwrap();
        assert_eq!(d.closed_genus(), 2);
        check_invariants(&d);
        let t = build_triple(&page, &g, &g).unwrap();
        check_invariants(&t);
        for pair in [[Family::Alpha, Family::Beta], [Family::Beta, Family::Gamma], [Family::Alpha, Family::Gamma]] {
            let r = t.restrict(pair).unwrap();
            check_invariants(&r);
            assert_eq!(t.contact_generator(pair).unwrap().len(), 2);
        }
    }
}
