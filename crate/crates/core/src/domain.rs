//! Domains: integer combinations of regions, their boundaries, periodic
//! domains, weak admissibility and connecting domains between generators.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::diagram::{Diagram, Family, Region};
use crate::lattice::{column_echelon, enumerate_box, nonnegative_combination, row_reduce_basis, EnumerateError};
use crate::{Error, Result};

/// Region coefficients.
pub type Domain = Vec<i64>;

/// Crossing ids, one per curve of the first family, in curve-index order.
pub type Generator = Vec<usize>;

pub const DEFAULT_CAP: i64 = 8;

pub fn compute_regions(diag: &Diagram) -> &[Region] {
    &diag.regions
}

/// All generators for a pair of families, by permutation search.
pub fn enumerate_generators(diag: &Diagram, pair: [Family; 2]) -> Vec<Generator> {
    let m = diag.page.arc_count();
    let first: Vec<usize> = (0..m).filter_map(|i| diag.curve_id(pair[0], i)).collect();
    let second: Vec<usize> = (0..m).filter_map(|i| diag.curve_id(pair[1], i)).collect();
    // options[i] = (crossing, index of second-family curve)
    let mut options: Vec<Vec<(usize, usize)>> = vec![Vec::new(); first.len()];
    for (x, c) in diag.crossings.iter().enumerate() {
        if let (Some(i), Some(j)) = (first.iter().position(|&a| a == c.curves[0]), second.iter().position(|&b| b == c.curves[1])) {
            options[i].push((x, j));
        }
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    let mut used = vec![false; second.len()];
    fn go(options: &[Vec<(usize, usize)>], cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Generator>) {
        let i = cur.len();
        if i == options.len() {
            out.push(cur.clone());
            return;
        }
        for &(x, j) in &options[i] {
            if !used[j] {
                used[j] = true;
                cur.push(x);
                go(options, cur, used, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    if first.len() == second.len() && !first.is_empty() {
        go(&options, &mut cur, &mut used, &mut out);
    }
    out
}

/// Multiplicity of `∂D` along each segment.
pub fn segment_multiplicities(diag: &Diagram, d: &[i64]) -> Vec<i64> {
    diag.segments.iter().map(|s| d[s.left] - d[s.right]).collect()
}

/// Prescribed boundary behaviour: for each family, where its part of the
/// boundary starts and where it ends.
#[derive(Clone, Debug, Default)]
pub struct BoundarySpec {
    pub starts: Vec<(Family, Vec<usize>)>,
    pub ends: Vec<(Family, Vec<usize>)>,
}

impl BoundarySpec {
    /// A Whitney disk from `x` to `y` for the families `pair`.
    pub fn bigon(pair: [Family; 2], x: &[usize], y: &[usize]) -> Self {
        BoundarySpec {
            starts: vec![(pair[0], x.to_vec()), (pair[1], y.to_vec())],
            ends: vec![(pair[0], y.to_vec()), (pair[1], x.to_vec())],
        }
    }

    /// A triangle with vertices `a ∈ T_α∩T_β`, `b ∈ T_β∩T_γ`, `x ∈ T_α∩T_γ`.
    pub fn triangle(a: &[usize], b: &[usize], x: &[usize]) -> Self {
        BoundarySpec {
            starts: vec![(Family::Alpha, a.to_vec()), (Family::Beta, b.to_vec()), (Family::Gamma, x.to_vec())],
            ends: vec![(Family::Alpha, x.to_vec()), (Family::Beta, a.to_vec()), (Family::Gamma, b.to_vec())],
        }
    }

    fn count(list: &[(Family, Vec<usize>)], f: Family, x: usize) -> i64 {
        list.iter().filter(|(g, _)| *g == f).map(|(_, v)| v.iter().filter(|&&y| y == x).count() as i64).sum()
    }
}

/// Linear constraint system on region coefficients: one row per
/// (curve, crossing on it) giving the jump of the boundary multiplicity,
/// plus optionally a row for `n_z`.
struct System {
    rows: Vec<Vec<BigInt>>,
    keys: Vec<(usize, usize)>,
    with_nz: bool,
}

fn system(diag: &Diagram, with_nz: bool) -> System {
    let n = diag.regions.len();
    let mut rows = Vec::new();
    let mut keys = Vec::new();
    for (c, segs) in diag.curve_segments.iter().enumerate() {
        for (k, &s) in segs.iter().enumerate() {
            let out = diag.segments[s];
            let Some(x) = out.from else { continue };
            let inn = diag.segments[segs[(k + segs.len() - 1) % segs.len()]];
            let mut row = vec![0i64; n];
            row[out.left] += 1;
            row[out.right] -= 1;
            row[inn.left] -= 1;
            row[inn.right] += 1;
            rows.push(row.into_iter().map(BigInt::from).collect());
            keys.push((c, x));
        }
    }
    if with_nz {
        let mut row = vec![BigInt::zero(); n];
        row[diag.z] = BigInt::from(1);
        rows.push(row);
        keys.push((usize::MAX, usize::MAX));
    }
    System { rows, keys, with_nz }
}

impl System {
    fn rhs(&self, diag: &Diagram, spec: &BoundarySpec, nz: i64) -> Vec<BigInt> {
        self.keys
            .iter()
            .map(|&(c, x)| {
                if c == usize::MAX {
                    return BigInt::from(nz);
                }
                let f = diag.curves[c].family;
                BigInt::from(BoundarySpec::count(&spec.starts, f, x) - BoundarySpec::count(&spec.ends, f, x))
            })
            .collect()
    }
}

fn to_i64(v: &[BigInt]) -> Result<Domain> {
    v.iter().map(|x| x.to_i64().ok_or_else(|| Error::Internal("coefficient overflow".into()))).collect()
}

/// Integer basis of the periodic domains (boundary a sum of whole curves, `n_z = 0`),
/// in row echelon form.
pub fn periodic_basis(diag: &Diagram) -> Vec<Domain> {
    let sys = system(diag, true);
    let e = column_echelon(&sys.rows, diag.regions.len());
    let mut k = e.kernel();
    row_reduce_basis(&mut k);
    k.iter().map(|v| to_i64(v).expect("small periodic domain")).collect()
}

/// Boundary jumps of a domain, keyed by `(curve, crossing)`.
pub fn boundary_jumps(diag: &Diagram, d: &[i64]) -> Vec<((usize, usize), i64)> {
    let sys = system(diag, false);
    sys.rows
        .iter()
        .zip(&sys.keys)
        .map(|(r, &k)| (k, r.iter().zip(d).map(|(a, b)| a.to_i64().unwrap() * b).sum()))
        .collect()
}

pub fn is_periodic(diag: &Diagram, d: &[i64]) -> bool {
    d[diag.z] == 0 && boundary_jumps(diag, d).iter().all(|(_, j)| *j == 0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Admissibility {
    pub admissible: bool,
    /// A nonzero nonnegative periodic domain when not admissible.
    pub witness: Option<Domain>,
    pub rank: usize,
}

pub fn is_weakly_admissible(diag: &Diagram) -> Admissibility {
    let basis = periodic_basis(diag);
    let big: Vec<Vec<BigInt>> = basis.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let witness = nonnegative_combination(&big).map(|w| to_i64(&w).expect("small witness"));
    Admissibility { admissible: witness.is_none(), witness, rank: basis.len() }
}

/// Searches all combinations of the basis with coefficients in
/// `[-bound, bound]` for a nonzero nonnegative periodic domain. Returns
/// `None` when the search space exceeds `limit`.
pub fn brute_force_witness(basis: &[Domain], bound: i64, limit: u64) -> Option<Option<Domain>> {
    let r = basis.len() as u32;
    let size = (2 * bound as u64 + 1).checked_pow(r)?;
    if size > limit {
        return None;
    }
    let n = basis.first().map_or(0, |v| v.len());
    let mut lam = vec![-bound; basis.len()];
    loop {
        if lam.iter().any(|&l| l != 0) {
            let v: Domain = (0..n).map(|j| (0..basis.len()).map(|i| lam[i] * basis[i][j]).sum()).collect();
            if v.iter().all(|&x| x >= 0) && v.iter().any(|&x| x > 0) {
                return Some(Some(v));
            }
        }
        let mut i = 0;
        loop {
            if i == lam.len() {
                return Some(None);
            }
            lam[i] += 1;
            if lam[i] > bound {
                lam[i] = -bound;
                i += 1;
            } else {
                break;
            }
        }
    }
}

/// Constraints for [`connecting_domains`].
#[derive(Clone, Copy, Debug)]
pub struct DomainConstraints {
    pub n_z: Option<i64>,
    pub positive: bool,
    pub cap: Option<i64>,
    /// Maximum number of domains to return.
    pub limit: usize,
}

impl Default for DomainConstraints {
    fn default() -> Self {
        DomainConstraints { n_z: Some(0), positive: true, cap: Some(DEFAULT_CAP), limit: 100_000 }
    }
}

/// A solver for domains with prescribed boundary, reusing one
/// factorization of the constraint system.
pub struct DomainSolver<'a> {
    diag: &'a Diagram,
    sys: System,
    echelon: crate::lattice::ColumnEchelon,
    basis: Vec<Vec<BigInt>>,
}

impl<'a> DomainSolver<'a> {
    pub fn new(diag: &'a Diagram, with_nz: bool) -> Self {
        let sys = system(diag, with_nz);
        let echelon = column_echelon(&sys.rows, diag.regions.len());
        let mut basis = echelon.kernel();
        row_reduce_basis(&mut basis);
        DomainSolver { diag, sys, echelon, basis }
    }

    pub fn lattice_rank(&self) -> usize {
        self.basis.len()
    }

    /// One domain with the given boundary, if any.
    pub fn particular(&self, spec: &BoundarySpec, nz: i64) -> Option<Vec<BigInt>> {
        self.echelon.solve(&self.sys.rhs(self.diag, spec, nz))
    }

    pub fn exists(&self, spec: &BoundarySpec) -> bool {
        self.particular(spec, 0).is_some()
    }

    /// All domains with the given boundary satisfying the constraints.
    pub fn all(&self, spec: &BoundarySpec, c: &DomainConstraints) -> Result<Vec<Domain>> {
        if c.n_z.is_some() != self.sys.with_nz {
            return Err(Error::Internal("solver built for a different n_z mode".into()));
        }
        let Some(base) = self.particular(spec, c.n_z.unwrap_or(0)) else {
            return Ok(Vec::new());
        };
        let n = base.len();
        let lo: Vec<Option<BigInt>> = (0..n)
            .map(|_| match (c.positive, c.cap) {
                (true, _) => Some(BigInt::zero()),
                (false, Some(k)) => Some(BigInt::from(-k)),
                (false, None) => None,
            })
            .collect();
        let hi: Vec<Option<BigInt>> = (0..n).map(|_| c.cap.map(BigInt::from)).collect();
        match enumerate_box(&base, &self.basis, &lo, &hi, c.limit) {
            Ok(v) => {
                let mut out: Vec<Domain> = v.iter().map(|d| to_i64(d)).collect::<Result<_>>()?;
                out.sort();
                Ok(out)
            }
            Err(EnumerateError::Unbounded) => Err(Error::CapExceeded(c.cap.unwrap_or(-1))),
            Err(EnumerateError::TooMany) => Err(Error::CapExceeded(c.limit as i64)),
        }
    }
}

/// All Whitney domains from `x` to `y` meeting the constraints.
pub fn connecting_domains(diag: &Diagram, pair: [Family; 2], x: &[usize], y: &[usize], c: &DomainConstraints) -> Result<Vec<Domain>> {
    let solver = DomainSolver::new(diag, c.n_z.is_some());
    solver.all(&BoundarySpec::bigon(pair, x, y), c)
}

/// Partition of generators by existence of a connecting domain.
pub fn spin_c_classes(diag: &Diagram, pair: [Family; 2], gens: &[Generator]) -> Vec<Vec<usize>> {
    let solver = DomainSolver::new(diag, false);
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        match classes.iter_mut().find(|cl| solver.exists(&BoundarySpec::bigon(pair, &gens[cl[0]], g))) {
            Some(cl) => cl.push(i),
            None => classes.push(vec![i]),
        }
    }
    classes
}

/// Maslov index of a Whitney domain from `x` to `y`, times four.
pub fn maslov_q(diag: &Diagram, d: &[i64], x: &[usize], y: &[usize]) -> i64 {
    let e: i64 = diag.regions.iter().zip(d).map(|(r, &c)| r.euler_q * c).sum();
    e + point_measure_q(diag, d, x) + point_measure_q(diag, d, y)
}

/// Sum over the points of `x` of the average corner multiplicity, times four.
pub fn point_measure_q(diag: &Diagram, d: &[i64], x: &[usize]) -> i64 {
    x.iter().map(|&p| diag.crossings[p].corners.iter().map(|k| d[k.region]).sum::<i64>()).sum()
}

pub fn is_nonnegative(d: &[i64]) -> bool {
    d.iter().all(|&x| x >= 0)
}

pub fn is_zero(d: &[i64]) -> bool {
    d.iter().all(|&x| x == 0)
}

/// Sign pattern helper for reports.
pub fn has_both_signs(d: &[i64]) -> bool {
    d.iter().any(|&x| x > 0) && d.iter().any(|&x| x < 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::build_heegaard;
    use crate::page::{MappingClassWord, Page};

    const AB: [Family; 2] = [Family::Alpha, Family::Beta];

    fn annulus(p: i32) -> Diagram {
        let page = Page::standard(0, 2).unwrap();
        build_heegaard(&page, &MappingClassWord::twist(page.band_core(0), p)).unwrap()
    }

    #[test]
    fn annulus_identity_admissibility_depends_on_basepoint() {
        let d = annulus(0);
        let gens = enumerate_generators(&d, AB);
        assert_eq!(gens.len(), 2);
        let a = is_weakly_admissible(&d);
        assert!(a.admissible);
        assert_eq!(a.rank, 1);
        assert!(has_both_signs(&periodic_basis(&d)[0]));
        let thin = d.with_basepoint((0, 0)).unwrap();
        let a = is_weakly_admissible(&thin);
        assert!(!a.admissible);
        let w = a.witness.unwrap();
        assert!(is_periodic(&thin, &w));
        assert!(is_nonnegative(&w) && !is_zero(&w));
        let c = DomainConstraints { n_z: None, positive: true, cap: Some(1), limit: 100 };
        let doms = connecting_domains(&d, AB, &gens[0], &gens[1], &c).unwrap();
        assert_eq!(doms.len(), 2);
        assert!(doms.iter().all(|x| x[d.z] == 0));
    }

    #[test]
    fn annulus_twists_are_admissible_lens_spaces() {
        for p in 1..=4 {
            let d = annulus(p);
            assert_eq!(periodic_basis(&d).len(), 0);
            assert!(is_weakly_admissible(&d).admissible);
            let gens = enumerate_generators(&d, AB);
            assert_eq!(gens.len(), p as usize);
            assert_eq!(spin_c_classes(&d, AB, &gens).len(), p as usize);
        }
    }

    #[test]
    fn zero_domain_connects_a_generator_to_itself() {
        let d = annulus(2);
        let x = &enumerate_generators(&d, AB)[0];
        let doms = connecting_domains(&d, AB, x, x, &DomainConstraints::default()).unwrap();
        assert!(doms.iter().any(|v| is_zero(v)));
    }
}
