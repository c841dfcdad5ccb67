//! Hat Heegaard Floer homology over GF(2) from nice diagrams.

use std::collections::{HashMap, VecDeque};

use crate::diagram::{build_heegaard, wind_for_admissibility, Diagram, Family, Half, DEFAULT_WINDING_BUDGET};
use crate::domain::{enumerate_generators, is_weakly_admissible, maslov_q, spin_c_classes, BoundarySpec, DomainConstraints, DomainSolver, Generator};
use crate::gf2::Gf2Matrix;
use crate::page::{MappingClassWord, Page, Sign};
use crate::picture::EdgeLabel;
use crate::{Error, Result};

pub const DEFAULT_NICE_BUDGET: usize = 200;
const AB: [Family; 2] = [Family::Alpha, Family::Beta];

fn is_good_region(d: &Diagram, r: usize) -> bool {
    let reg = &d.regions[r];
    r == d.z || (reg.euler_characteristic() == 1 && (reg.corners == 2 || reg.corners == 4))
}

/// Every region other than the basepoint region is a bigon or a square.
pub fn is_nice(d: &Diagram) -> bool {
    (0..d.regions.len()).all(|r| is_good_region(d, r))
}

/// Distances from the basepoint region among bottom faces, moving only
/// across α edges.
fn bottom_distances(d: &Diagram) -> Vec<usize> {
    let faces = &d.bottom_faces.faces;
    let mut owner: HashMap<(EdgeLabel, bool), usize> = HashMap::new();
    for (i, f) in faces.iter().enumerate() {
        for e in f {
            owner.insert((e.label, e.forward), i);
        }
    }
    let mut dist = vec![usize::MAX; faces.len()];
    let mut q = VecDeque::new();
    for (i, dv) in dist.iter_mut().enumerate() {
        if d.region_of_face(Half::Bottom, i) == d.z {
            *dv = 0;
            q.push_back(i);
        }
    }
    while let Some(f) = q.pop_front() {
        for e in &faces[f] {
            if let EdgeLabel::Alpha { .. } = e.label {
                if let Some(&g) = owner.get(&(e.label, !e.forward)) {
                    if dist[g] == usize::MAX {
                        dist[g] = dist[f] + 1;
                        q.push_back(g);
                    }
                }
            }
        }
    }
    dist
}

/// α edges of bottom face `f` leading one step closer to the basepoint,
/// or with `any`, to any face from which the basepoint is reachable.
fn exit_edges(d: &Diagram, dist: &[usize], f: usize, any: bool) -> Vec<usize> {
    let faces = &d.bottom_faces.faces;
    let mut owner: HashMap<(EdgeLabel, bool), usize> = HashMap::new();
    for (i, face) in faces.iter().enumerate() {
        for e in face {
            owner.insert((e.label, e.forward), i);
        }
    }
    (0..faces[f].len())
        .filter(|&i| {
            let e = faces[f][i];
            matches!(e.label, EdgeLabel::Alpha { .. })
                && owner.get(&(e.label, !e.forward)).is_some_and(|&g| dist[g] != usize::MAX && (any || dist[g] + 1 == dist[f]))
        })
        .collect()
}

fn rebuild(d: &Diagram, bottom: crate::picture::Picture) -> Result<Diagram> {
    let mut curves = d.curves.clone();
    for (s, &c) in d.bottom_curve.iter().enumerate() {
        curves[c].bottom = bottom.strands[s].to_path();
    }
    let nd = Diagram::assemble(d.page.clone(), curves, d.top.clone(), bottom, d.top_curve.clone(), d.bottom_curve.clone(), d.words.clone())?;
    nd.with_basepoint(d.z_seam)
}

/// Pushes chord `chord` of bottom strand `strand` across α edge `ei` of
/// bottom face `face`, then keeps pushing the tip toward the basepoint.
/// Returns the new diagram and the number of α arcs crossed.
fn push_finger(d: &Diagram, mut face: usize, mut ei: usize, strand: usize, mut chord: usize, limit: usize) -> Option<(Diagram, usize)> {
    let mut d = d.clone();
    let mut moves = 0;
    loop {
        if moves >= limit {
            return None;
        }
        moves += 1;
        let e = d.bottom_faces.faces[face][ei];
        let EdgeLabel::Alpha { arc, gap } = e.label else { return None };
        let side = if e.forward { Sign::Plus } else { Sign::Minus };
        let mut bottom = d.bottom.clone();
        let tip = bottom.finger(strand, chord, arc, side, gap);
        d = rebuild(&d, bottom).ok()?;
        chord = tip;
        let tf = d
            .bottom_faces
            .faces
            .iter()
            .position(|f| f.len() > 2 && f.iter().any(|x| x.label == EdgeLabel::Chord { strand, chord: tip, piece: 0 }))?;
        if d.region_of_face(Half::Bottom, tf) == d.z {
            return Some((d, moves));
        }
        let dist = bottom_distances(&d);
        ei = *exit_edges(&d, &dist, tf, false).first()?;
        face = tf;
    }
}

/// Excess corners and missing Euler characteristic over regions other than `z`.
fn badness(d: &Diagram) -> (i64, usize) {
    let b = (0..d.regions.len())
        .filter(|&r| !is_good_region(d, r))
        .map(|r| {
            let reg = &d.regions[r];
            (reg.corners as i64 - 4).max(0) + 4 * (1 - reg.euler_characteristic()).max(0) + 1
        })
        .sum();
    (b, d.crossings.len())
}

fn bad_profile(d: &Diagram) -> Vec<(i64, usize)> {
    let mut v: Vec<(i64, usize)> = (0..d.regions.len())
        .filter(|&r| !is_good_region(d, r))
        .map(|r| (d.regions[r].euler_characteristic(), d.regions[r].corners))
        .collect();
    v.sort();
    v
}

/// Every finger from a β edge of a bad region, pushed toward the basepoint.
fn finger_candidates(d: &Diagram, limit: usize) -> Vec<(Diagram, usize)> {
    let dist = bottom_distances(d);
    let mut out = Vec::new();
    for f in 0..dist.len() {
        let r = d.region_of_face(Half::Bottom, f);
        if is_good_region(d, r) || dist[f] == usize::MAX {
            continue;
        }
        let edges = &d.bottom_faces.faces[f];
        for ei in exit_edges(d, &dist, f, true) {
            for e in edges {
                let EdgeLabel::Chord { strand, chord, .. } = e.label else { continue };
                if let Some(x) = push_finger(d, f, ei, strand, chord, limit) {
                    out.push(x);
                }
            }
        }
    }
    out
}

/// Finger moves of bottom curves across α arcs toward the basepoint until
/// the diagram is nice.
///
/// A finger started at a β edge of a bad region splits that region, but
/// its interior joins the region across the β edge, which gains two
/// corners; single moves need not reduce badness. The search is best
/// first on badness, expanding at most `budget` diagrams.
pub fn make_nice(diag: &Diagram, budget: usize) -> Result<Diagram> {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;
    let mut heap = BinaryHeap::new();
    let mut pool: Vec<Diagram> = vec![diag.clone()];
    heap.push(Reverse((badness(diag), 0usize, 0usize)));
    let mut expanded = 0;
    while let Some(Reverse((score, moves, id))) = heap.pop() {
        let d = std::mem::replace(&mut pool[id], diag.clone());
        if is_nice(&d) {
            log::debug!("nice after {moves} finger crossings, {expanded} expansions");
            return Ok(d);
        }
        if expanded >= budget {
            break;
        }
        expanded += 1;
        log::trace!("expand {id}: badness {score:?}, {moves} moves");
        let profile = bad_profile(&d);
        for (nd, k) in finger_candidates(&d, budget) {
            if bad_profile(&nd) == profile {
                continue;
            }
            let s = badness(&nd);
            pool.push(nd);
            heap.push(Reverse((s, moves + k, pool.len() - 1)));
        }
    }
    Err(Error::NiceificationBudgetExceeded(budget))
}

/// Hat Floer chain complex over GF(2).
#[derive(Clone, Debug)]
pub struct FloerComplex {
    pub generators: Vec<Generator>,
    /// `boundary[y][x]` is the coefficient of `y` in `∂x`.
    pub boundary: Gf2Matrix,
    pub classes: Vec<Vec<usize>>,
    pub distinguished: Option<usize>,
    pub dual: bool,
}

/// Mod-2 count of empty embedded bigons and rectangles avoiding `z`.
pub fn differential(d: &Diagram) -> Result<FloerComplex> {
    if !is_nice(d) {
        return Err(Error::NotNice);
    }
    if !is_weakly_admissible(d).admissible {
        return Err(Error::NotAdmissible);
    }
    let gens = enumerate_generators(d, AB);
    let classes = spin_c_classes(d, AB, &gens);
    let index: HashMap<Vec<usize>, usize> = gens.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
    let mut class_of = vec![0; gens.len()];
    for (c, cl) in classes.iter().enumerate() {
        for &g in cl {
            class_of[g] = c;
        }
    }
    let solver = DomainSolver::new(d, true);
    let cons = DomainConstraints { n_z: Some(0), positive: true, cap: Some(1), limit: 10_000 };
    let m = d.page.arc_count();
    // crossings by (alpha index, beta index)
    let mut by_pair: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (x, c) in d.crossings.iter().enumerate() {
        let (a, b) = (d.curves[c.curves[0]].index, d.curves[c.curves[1]].index);
        if d.curves[c.curves[0]].family == Family::Alpha && d.curves[c.curves[1]].family == Family::Beta {
            by_pair.entry((a, b)).or_default().push(x);
        }
    }
    let beta_of = |x: usize| d.curves[d.crossings[x].curves[1]].index;
    let mut bd = Gf2Matrix::zeros(gens.len(), gens.len());
    for (xi, x) in gens.iter().enumerate() {
        let mut targets: Vec<Vec<usize>> = Vec::new();
        for i in 0..m {
            for &c in &by_pair[&(i, beta_of(x[i]))] {
                if c != x[i] {
                    let mut y = x.clone();
                    y[i] = c;
                    targets.push(y);
                }
            }
            for j in i + 1..m {
                let (bi, bj) = (beta_of(x[i]), beta_of(x[j]));
                let (Some(ci), Some(cj)) = (by_pair.get(&(i, bj)), by_pair.get(&(j, bi))) else { continue };
                for &p in ci {
                    for &q in cj {
                        let mut y = x.clone();
                        y[i] = p;
                        y[j] = q;
                        targets.push(y);
                    }
                }
            }
        }
        for y in targets {
            let Some(&yi) = index.get(&y) else { continue };
            if class_of[yi] != class_of[xi] {
                continue;
            }
            let doms = solver.all(&BoundarySpec::bigon(AB, x, &y), &cons)?;
            let count = doms.iter().filter(|dm| maslov_q(d, dm, x, &y) == 4).count();
            if count % 2 == 1 {
                bd.flip(yi, xi);
            }
        }
    }
    if !bd.mul(&bd).is_zero() {
        return Err(Error::Internal("the differential does not square to zero".into()));
    }
    let distinguished = d.contact_generator(AB).ok().and_then(|x| index.get(&x).copied());
    Ok(FloerComplex { generators: gens, boundary: bd, classes, distinguished, dual: false })
}

impl FloerComplex {
    /// The complex of `−Y`: the transposed differential.
    pub fn dualize(&self) -> FloerComplex {
        FloerComplex { boundary: self.boundary.transpose(), dual: !self.dual, ..self.clone() }
    }

    pub fn homology_rank(&self) -> usize {
        self.generators.len() - 2 * self.boundary.rank()
    }

    /// Homology rank within each class.
    pub fn class_ranks(&self) -> Vec<usize> {
        self.classes
            .iter()
            .map(|cl| {
                let mut sub = Gf2Matrix::zeros(cl.len(), cl.len());
                for (i, &a) in cl.iter().enumerate() {
                    for (j, &b) in cl.iter().enumerate() {
                        sub.set(i, j, self.boundary.get(a, b));
                    }
                }
                cl.len() - 2 * sub.rank()
            })
            .collect()
    }

    pub fn is_cycle(&self, v: &[bool]) -> bool {
        (0..self.generators.len()).all(|y| (0..v.len()).filter(|&x| v[x] && self.boundary.get(y, x)).count() % 2 == 0)
    }

    /// Whether the cycle `v` is a boundary.
    pub fn is_boundary(&self, v: &[bool]) -> Result<bool> {
        if !self.is_cycle(v) {
            return Err(Error::NotACycle);
        }
        // v ∈ image(∂) ⇔ v in the row space of ∂ᵀ.
        Ok(self.boundary.transpose().row_space_contains(v))
    }

    pub fn generator_vector(&self, i: usize) -> Vec<bool> {
        (0..self.generators.len()).map(|j| j == i).collect()
    }
}

/// Options for the full pipeline.
#[derive(Clone, Copy, Debug)]
pub struct PipelineOptions {
    pub winding_budget: usize,
    pub nice_budget: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { winding_budget: DEFAULT_WINDING_BUDGET, nice_budget: DEFAULT_NICE_BUDGET }
    }
}

#[derive(Clone, Debug)]
pub struct FloerResult {
    pub diagram: Diagram,
    pub complex: FloerComplex,
    pub rank: usize,
    pub class_ranks: Vec<usize>,
    /// Contact class of `x_g` in the homology of the dual complex, over GF(2).
    pub contact_nonzero: bool,
}

/// Build, wind, make nice, and compute.
pub fn compute(page: &Page, g: &MappingClassWord, opts: &PipelineOptions) -> Result<FloerResult> {
    let d = build_heegaard(page, g)?;
    log::debug!("built {g}: {} crossings, {} regions", d.crossings.len(), d.regions.len());
    let d = wind_for_admissibility(&d, opts.winding_budget)?;
    log::debug!("wound: {} crossings", d.crossings.len());
    let d = make_nice(&d, opts.nice_budget)?;
    log::debug!("nice: {} crossings, {} regions", d.crossings.len(), d.regions.len());
    let complex = differential(&d)?;
    log::debug!("complex: {} generators, boundary rank {}", complex.generators.len(), complex.boundary.rank());
    let dual = complex.dualize();
    let xg = complex.distinguished.ok_or_else(|| Error::Internal("contact generator missing".into()))?;
    let v = dual.generator_vector(xg);
    let contact_nonzero = !dual.is_boundary(&v)?;
    Ok(FloerResult { rank: complex.homology_rank(), class_ranks: complex.class_ranks(), contact_nonzero, complex, diagram: d })
}

pub fn contact_class_is_nonzero(page: &Page, g: &MappingClassWord) -> Result<bool> {
    Ok(compute(page, g, &PipelineOptions::default())?.contact_nonzero)
}
