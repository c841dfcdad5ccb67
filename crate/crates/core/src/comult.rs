//! Comultiplication of contact classes through the triple diagram of a
//! pair of monodromies.

use serde::Serialize;

use crate::diagram::{build_triple, Diagram, Family, Ray};
use crate::domain::{enumerate_generators, is_weakly_admissible, periodic_basis, BoundarySpec, Domain, DomainConstraints, DomainSolver};
use crate::floer::{compute, PipelineOptions};
use crate::page::{MappingClassWord, Page};
use crate::picture::EdgeLabel;
use crate::{Error, Result};

pub const DEFAULT_TRIANGLE_CAP: i64 = 4;

/// The six regions around the `i`-th components of `x_g`, `x_h` and `x_hg`,
/// with `regions[j]` holding `D_{j+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cluster {
    pub index: usize,
    pub x_g: usize,
    pub x_h: usize,
    pub x_hg: usize,
    pub regions: [usize; 6],
}

fn ray_family(d: &Diagram, r: &Ray) -> Family {
    match r.0 {
        EdgeLabel::Alpha { .. } | EdgeLabel::Seam { .. } => Family::Alpha,
        EdgeLabel::Chord { strand, .. } => d.curves[d.top_curve[strand]].family,
    }
}

fn corner_with(d: &Diagram, x: usize, region: usize) -> Result<usize> {
    let cs = &d.crossings[x].corners;
    let hits: Vec<usize> = (0..cs.len()).filter(|&j| cs[j].region == region).collect();
    match hits.as_slice() {
        [j] => Ok(*j),
        _ => Err(Error::Internal(format!("region {region} is not a single corner at crossing {x}"))),
    }
}

/// Locates `D_1, …, D_6` at every component of the contact generators.
///
/// `D_3` is the small triangle with corners at all three points. The
/// other regions are read off the corners around it: `D_6` is opposite
/// `D_3` at `x_hg`, `D_2` and `D_4` share its γ and α edges there, and
/// `D_1`, `D_5` are opposite `D_3` at `x_h` and `x_g`.
pub fn clusters(d: &Diagram) -> Result<Vec<Cluster>> {
    let xg = d.contact_generator([Family::Alpha, Family::Beta])?;
    let xh = d.contact_generator([Family::Beta, Family::Gamma])?;
    let xhg = d.contact_generator([Family::Alpha, Family::Gamma])?;
    let mut out = Vec::new();
    for i in 0..xg.len() {
        let (g, h, hg) = (xg[i], xh[i], xhg[i]);
        let regions_at = |x: usize| d.crossings[x].corners.iter().map(|c| c.region).collect::<Vec<_>>();
        let (rg, rh) = (regions_at(g), regions_at(h));
        let tri: Vec<usize> = d.crossings[hg]
            .corners
            .iter()
            .map(|c| c.region)
            .filter(|r| rg.contains(r) && rh.contains(r) && d.regions[*r].corners == 3 && d.regions[*r].euler_characteristic() == 1)
            .collect();
        let &[d3] = tri.as_slice() else {
            return Err(Error::Internal(format!("no unique small triangle at cluster {i}")));
        };
        let cs = &d.crossings[hg].corners;
        let j = corner_with(d, hg, d3)?;
        let next = cs[(j + 1) % 4].region;
        let prev = cs[(j + 3) % 4].region;
        let (d2, d4) = if ray_family(d, &cs[j].to) == Family::Gamma { (next, prev) } else { (prev, next) };
        let d6 = cs[(j + 2) % 4].region;
        let d1 = d.crossings[h].corners[(corner_with(d, h, d3)? + 2) % 4].region;
        let d5 = d.crossings[g].corners[(corner_with(d, g, d3)? + 2) % 4].region;
        out.push(Cluster { index: i, x_g: g, x_h: h, x_hg: hg, regions: [d1, d2, d3, d4, d5, d6] });
    }
    Ok(out)
}

/// Coefficients of `D_1..D_6` in a domain.
pub fn cluster_coefficients(c: &Cluster, dom: &[i64]) -> [i64; 6] {
    c.regions.map(|r| dom[r])
}

/// `p_2 = p_3 − p_4 = −p_5`, `p_1 = p_2 − p_3`, `p_6 = 0`; so `p_1 = −p_3`
/// once `p_2 = 0`.
pub fn local_relations_hold(p: [i64; 6]) -> bool {
    let [p1, p2, p3, p4, p5, p6] = p;
    p2 == p3 - p4 && p3 - p4 == -p5 && p1 == p2 - p3 && p6 == 0
}

/// Every periodic basis element satisfies the local relations at every cluster.
pub fn check_local_relations(d: &Diagram) -> Result<Vec<(usize, usize)>> {
    let cl = clusters(d)?;
    let mut bad = Vec::new();
    for (k, psi) in periodic_basis(d).iter().enumerate() {
        for c in &cl {
            if !local_relations_hold(cluster_coefficients(c, psi)) {
                bad.push((k, c.index));
            }
        }
    }
    Ok(bad)
}

/// `Σ coeffs·p ∈ values`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalConstraint {
    pub coeffs: [i64; 6],
    pub values: Vec<i64>,
}

impl LocalConstraint {
    pub fn holds(&self, p: &[i64; 6]) -> bool {
        let s: i64 = self.coeffs.iter().zip(p).map(|(a, b)| a * b).sum();
        self.values.contains(&s)
    }
}

/// Corner and pass-through equations on `p_1..p_6` for one cluster of a
/// triangle with corner `x_hg`.
pub fn local_constraint_system(x_h_corner: bool, x_g_corner: bool) -> Vec<LocalConstraint> {
    let pm = |corner: bool| if corner { vec![-1, 1] } else { vec![0] };
    vec![
        // enter x_hg along α, leave along γ: p6 + p3 = p2 + p4 + 1
        LocalConstraint { coeffs: [0, -1, 1, -1, 0, 1], values: vec![1] },
        // at x_h: p3 + p1 − p2 − p6
        LocalConstraint { coeffs: [1, -1, 1, 0, 0, -1], values: pm(x_h_corner) },
        // at x_g: p5 + p3 − p4 − p6
        LocalConstraint { coeffs: [0, 0, 1, -1, 1, -1], values: pm(x_g_corner) },
        LocalConstraint { coeffs: [0, 0, 0, 0, 0, 1], values: vec![0] },
    ]
}

/// Nonnegative solutions with entries at most `cap`.
pub fn solve_local_system(system: &[LocalConstraint], cap: i64) -> Vec<[i64; 6]> {
    let mut out = Vec::new();
    let n = cap + 1;
    for code in 0..n.pow(6) {
        let mut p = [0i64; 6];
        let mut c = code;
        for v in p.iter_mut() {
            *v = c % n;
            c /= n;
        }
        if system.iter().all(|e| e.holds(&p)) {
            out.push(p);
        }
    }
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangleDomain {
    pub coefficients: Domain,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub x: Vec<usize>,
}

/// Nonnegative triangle domains with `n_z = 0` and corner `x`, over all
/// `(a, b)` in lexicographic order.
pub fn enumerate_positive_triangles(d: &Diagram, x: &[usize], cap: i64) -> Result<Vec<TriangleDomain>> {
    let solver = DomainSolver::new(d, true);
    let cons = DomainConstraints { n_z: Some(0), positive: true, cap: Some(cap), limit: 10_000 };
    let aa = enumerate_generators(d, [Family::Alpha, Family::Beta]);
    let bb = enumerate_generators(d, [Family::Beta, Family::Gamma]);
    let mut out = Vec::new();
    for a in &aa {
        for b in &bb {
            let spec = BoundarySpec::triangle(a, b, x);
            if !solver.exists(&spec) {
                continue;
            }
            for dom in solver.all(&spec, &cons)? {
                out.push(TriangleDomain { coefficients: dom, a: a.clone(), b: b.clone(), x: x.to_vec() });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct NaturalityCertificate {
    pub g: String,
    pub h: String,
    pub regions: usize,
    pub clusters: Vec<Cluster>,
    pub x_g: Vec<usize>,
    pub x_h: Vec<usize>,
    pub x_hg: Vec<usize>,
    pub witness: TriangleDomain,
    pub checks: Vec<String>,
}

/// Builds the triple diagram and certifies that the only nonnegative
/// `n_z = 0` triangle out of `x_hg` is the union of the small triangles,
/// with corners `x_g` and `x_h`.
pub fn verify_naturality(page: &Page, g: &MappingClassWord, h: &MappingClassWord, cap: i64) -> Result<NaturalityCertificate> {
    let fail = |m: String| Error::NaturalityCheckFailed(m);
    let d = build_triple(page, g, h)?;
    let mut checks = Vec::new();
    if !is_weakly_admissible(&d).admissible {
        return Err(fail("triple is not weakly admissible".into()));
    }
    checks.push("weakly admissible".to_string());
    let cl = clusters(&d)?;
    let bad = check_local_relations(&d)?;
    if !bad.is_empty() {
        return Err(fail(format!("local relations fail at {bad:?}")));
    }
    checks.push("local relations".to_string());
    let xg = d.contact_generator([Family::Alpha, Family::Beta])?;
    let xh = d.contact_generator([Family::Beta, Family::Gamma])?;
    let xhg = d.contact_generator([Family::Alpha, Family::Gamma])?;
    let found = enumerate_positive_triangles(&d, &xhg, cap)?;
    let [t] = found.as_slice() else {
        return Err(fail(format!("{} triangle domains out of x_hg", found.len())));
    };
    checks.push("unique triangle".to_string());
    if t.a != xg || t.b != xh {
        return Err(fail(format!("triangle corners {:?}, {:?}", t.a, t.b)));
    }
    checks.push("corners x_g and x_h".to_string());
    let mut indicator = vec![0i64; d.regions.len()];
    for c in &cl {
        indicator[c.regions[2]] = 1;
    }
    if t.coefficients != indicator {
        return Err(fail("triangle is not the union of the small triangles".into()));
    }
    let shaped = (0..d.regions.len())
        .filter(|&r| t.coefficients[r] != 0)
        .all(|r| t.coefficients[r] == 1 && d.regions[r].euler_characteristic() == 1 && d.regions[r].corners == 3);
    if !shaped {
        return Err(fail("a region of the triangle is not an embedded triangle".into()));
    }
    checks.push("disjoint embedded triangles, count 1".to_string());
    Ok(NaturalityCertificate {
        g: g.to_string(),
        h: h.to_string(),
        regions: d.regions.len(),
        clusters: cl,
        x_g: xg,
        x_h: xh,
        x_hg: xhg,
        witness: t.clone(),
        checks,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct MonoidEntry {
    pub g: String,
    pub h: String,
    pub c_g: Option<bool>,
    pub c_h: Option<bool>,
    pub c_hg: Option<bool>,
    pub violation: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MonoidReport {
    pub entries: Vec<MonoidEntry>,
    pub violations: usize,
}

/// For every ordered pair of words, nonzero classes of `g` and `h` force a
/// nonzero class of `hg`.
pub fn monoid_check(page: &Page, words: &[MappingClassWord], opts: &PipelineOptions) -> MonoidReport {
    let class = |w: &MappingClassWord| compute(page, w, opts).map(|r| r.contact_nonzero);
    let single: Vec<Result<bool>> = words.iter().map(class).collect();
    let mut entries = Vec::new();
    for (i, g) in words.iter().enumerate() {
        for (j, h) in words.iter().enumerate() {
            let hg = class(&g.then(h));
            let err = [&single[i], &single[j], &hg].iter().find_map(|r| r.as_ref().err().map(|e| e.to_string()));
            let (cg, ch, chg) = (single[i].as_ref().ok().copied(), single[j].as_ref().ok().copied(), hg.ok());
            let violation = cg == Some(true) && ch == Some(true) && chg == Some(false);
            entries.push(MonoidEntry { g: g.to_string(), h: h.to_string(), c_g: cg, c_h: ch, c_hg: chg, violation, error: err });
        }
    }
    let violations = entries.iter().filter(|e| e.violation).count();
    MonoidReport { entries, violations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corner_system_has_the_small_triangle_as_only_solution() {
        let sols = solve_local_system(&local_constraint_system(true, true), 4);
        assert_eq!(sols, vec![[0, 0, 1, 0, 0, 0]]);
    }

    #[test]
    fn excluding_a_corner_is_infeasible() {
        for (h, g) in [(false, true), (true, false), (false, false)] {
            assert!(solve_local_system(&local_constraint_system(h, g), 4).is_empty());
        }
    }

    #[test]
    fn annulus_triples_certify() {
        let page = Page::standard(0, 2).unwrap();
        let t = |p| MappingClassWord::twist(page.band_core(0), p);
        for (g, h) in [(t(1), t(1)), (MappingClassWord::identity(), MappingClassWord::identity()), (t(-1), t(2))] {
            let cert = verify_naturality(&page, &g, &h, DEFAULT_TRIANGLE_CAP).unwrap();
            assert_eq!(cert.clusters.len(), 1);
            assert_eq!(cert.witness.coefficients.iter().sum::<i64>(), 1);
        }
    }

    #[test]
    fn cancelling_pair_does_not_change_the_certificate() {
        let page = Page::standard(0, 2).unwrap();
        let t = |p| MappingClassWord::twist(page.band_core(0), p);
        let a = verify_naturality(&page, &t(1), &t(1), 4).unwrap();
        let b = verify_naturality(&page, &t(1).then(&t(1)).then(&t(-1)), &t(1), 4).unwrap();
        assert_eq!(a.checks, b.checks);
        assert_eq!(a.witness.a, b.witness.a);
    }
}
