//! Exact integer lattice tools: kernels and integer solutions through a
//! column Hermite form, and Fourier–Motzkin elimination for rational
//! cone feasibility and bounded integer enumeration.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Matrix = Vec<Vec<BigInt>>;

pub fn to_big(rows: &[Vec<i64>]) -> Matrix {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// Column echelon form `A·U = H` with `U` unimodular.
pub struct ColumnEchelon {
    pub h: Matrix,
    pub u: Matrix,
    /// Pivot row of each of the leading nonzero columns.
    pub pivots: Vec<usize>,
    pub cols: usize,
}

fn col_sub(m: &mut Matrix, dst: usize, src: usize, q: &BigInt) {
    for row in m.iter_mut() {
        let t = &row[src] * q;
        row[dst] -= t;
    }
}

fn col_swap(m: &mut Matrix, a: usize, b: usize) {
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

pub fn column_echelon(a: &Matrix, cols: usize) -> ColumnEchelon {
    let mut h = a.clone();
    let mut u: Matrix = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut c = 0;
    let mut pivots = Vec::new();
    for r in 0..h.len() {
        if c == cols {
            break;
        }
        loop {
            let best = (c..cols)
                .filter(|&j| !h[r][j].is_zero())
                .min_by(|&x, &y| h[r][x].abs().cmp(&h[r][y].abs()));
            let Some(j) = best else { break };
            col_swap(&mut h, c, j);
            col_swap(&mut u, c, j);
            let mut done = true;
            for j in c + 1..cols {
                if !h[r][j].is_zero() {
                    let q = h[r][j].div_floor(&h[r][c]);
                    col_sub(&mut h, j, c, &q);
                    col_sub(&mut u, j, c, &q);
                    if !h[r][j].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if c < cols && !h[r][c].is_zero() {
            pivots.push(r);
            c += 1;
        }
    }
    ColumnEchelon { h, u, pivots, cols }
}

impl ColumnEchelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Integer basis of `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<BigInt>> {
        (self.rank()..self.cols).map(|j| self.u.iter().map(|row| row[j].clone()).collect()).collect()
    }

    /// An integer solution of `A x = b`, if one exists.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let r = self.rank();
        let mut y: Vec<BigInt> = vec![BigInt::zero(); self.cols];
        for (j, &pr) in self.pivots.iter().enumerate() {
            let mut rhs = b[pr].clone();
            for (i, yi) in y.iter().enumerate().take(j) {
                rhs -= &self.h[pr][i] * yi;
            }
            let (q, rem) = rhs.div_rem(&self.h[pr][j]);
            if !rem.is_zero() {
                return None;
            }
            y[j] = q;
        }
        for (row, bi) in self.h.iter().zip(b) {
            let v: BigInt = (0..r).map(|i| &row[i] * &y[i]).sum();
            if &v != bi {
                return None;
            }
        }
        Some(self.u.iter().map(|row| (0..r).map(|i| &row[i] * &y[i]).sum()).collect())
    }
}

/// Reduces an integer basis to row echelon form with content-free rows.
pub fn row_reduce_basis(basis: &mut Vec<Vec<BigInt>>) {
    if basis.is_empty() {
        return;
    }
    let n = basis[0].len();
    let mut t: Matrix = Vec::new();
    // Lattice vectors become columns.
    let a: Matrix = (0..n).map(|i| basis.iter().map(|v| v[i].clone()).collect()).collect();
    let e = column_echelon(&a, basis.len());
    let r = e.rank();
    for j in 0..r {
        t.push((0..n).map(|i| e.h[i][j].clone()).collect());
    }
    *basis = t;
}

/// Linear inequality `coef · λ ≥ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Ineq {
    coef: Vec<BigRational>,
    rhs: BigRational,
}

impl Ineq {
    fn normalize(mut self) -> Ineq {
        let lead = self.coef.iter().find(|c| !c.is_zero()).cloned();
        if let Some(l) = lead {
            let s = l.abs();
            for c in &mut self.coef {
                *c /= &s;
            }
            self.rhs /= &s;
        }
        self
    }

    fn is_trivial(&self) -> bool {
        self.coef.iter().all(|c| c.is_zero())
    }
}

fn dedup(v: Vec<Ineq>) -> Vec<Ineq> {
    let mut seen = std::collections::HashMap::<Vec<BigRational>, BigRational>::new();
    let mut order = Vec::new();
    for q in v {
        let q = q.normalize();
        match seen.get_mut(&q.coef) {
            Some(r) => {
                if q.rhs > *r {
                    *r = q.rhs;
                }
            }
            None => {
                order.push(q.coef.clone());
                seen.insert(q.coef, q.rhs);
            }
        }
    }
    order
        .into_iter()
        .map(|c| {
            let rhs = seen[&c].clone();
            Ineq { coef: c, rhs }
        })
        .collect()
}

/// Eliminates the last variable.
fn eliminate(sys: &[Ineq], var: usize) -> Vec<Ineq> {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out = Vec::new();
    for q in sys {
        let c = &q.coef[var];
        if c.is_positive() {
            pos.push(q);
        } else if c.is_negative() {
            neg.push(q);
        } else {
            out.push(q.clone());
        }
    }
    for p in &pos {
        for n in &neg {
            let a = p.coef[var].clone();
            let b = -n.coef[var].clone();
            let coef: Vec<BigRational> = p.coef.iter().zip(&n.coef).map(|(x, y)| x * &b + y * &a).collect();
            let rhs = &p.rhs * &b + &n.rhs * &a;
            out.push(Ineq { coef, rhs });
        }
    }
    dedup(out)
}

/// Fourier–Motzkin projection chain: `chain[k]` involves only variables `0..=k`.
struct Projection {
    chain: Vec<Vec<Ineq>>,
    infeasible: bool,
}

fn project(sys: Vec<Ineq>, vars: usize) -> Projection {
    let mut chain = vec![Vec::new(); vars];
    let mut cur = dedup(sys);
    for k in (0..vars).rev() {
        chain[k] = cur.clone();
        cur = eliminate(&cur, k);
    }
    let infeasible = cur.iter().any(|q| q.is_trivial() && q.rhs.is_positive());
    Projection { chain, infeasible }
}

/// Bounds on variable `k` implied by `sys` once variables `0..k` are fixed.
fn bounds(sys: &[Ineq], k: usize, fixed: &[BigRational]) -> Option<(Option<BigRational>, Option<BigRational>)> {
    let mut lo: Option<BigRational> = None;
    let mut hi: Option<BigRational> = None;
    for q in sys {
        let mut rest = q.rhs.clone();
        for (i, v) in fixed.iter().enumerate() {
            rest -= &q.coef[i] * v;
        }
        let c = &q.coef[k];
        if c.is_zero() {
            if q.coef[k + 1..].iter().all(|x| x.is_zero()) && rest.is_positive() {
                return None;
            }
            continue;
        }
        let b = rest / c;
        if c.is_positive() {
            if lo.as_ref().is_none_or(|l| &b > l) {
                lo = Some(b);
            }
        } else if hi.as_ref().is_none_or(|h| &b < h) {
            hi = Some(b);
        }
    }
    if let (Some(l), Some(h)) = (&lo, &hi) {
        if l > h {
            return None;
        }
    }
    Some((lo, hi))
}

fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// Finds a nonzero combination of `basis` whose entries are all
/// nonnegative, scaled to a primitive integer vector.
pub fn nonnegative_combination(basis: &[Vec<BigInt>]) -> Option<Vec<BigInt>> {
    let r = basis.len();
    if r == 0 {
        return None;
    }
    let n = basis[0].len();
    let mut sys = Vec::new();
    for j in 0..n {
        sys.push(Ineq { coef: basis.iter().map(|v| rat(&v[j])).collect(), rhs: BigRational::zero() });
    }
    sys.push(Ineq {
        coef: basis.iter().map(|v| rat(&v.iter().sum::<BigInt>())).collect(),
        rhs: BigRational::one(),
    });
    let proj = project(sys, r);
    if proj.infeasible {
        return None;
    }
    let mut fixed: Vec<BigRational> = Vec::new();
    for k in 0..r {
        let (lo, hi) = bounds(&proj.chain[k], k, &fixed)?;
        let v = match (lo, hi) {
            (Some(l), _) => l,
            (None, Some(h)) => h.min(BigRational::zero()),
            (None, None) => BigRational::zero(),
        };
        fixed.push(v);
    }
    let den = fixed.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let lam: Vec<BigInt> = fixed.iter().map(|x| (x * rat(&den)).to_integer()).collect();
    let mut w: Vec<BigInt> = (0..n).map(|j| (0..r).map(|i| &lam[i] * &basis[i][j]).sum()).collect();
    let g = w.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || w.iter().any(|x| x.is_negative()) {
        return None;
    }
    for x in &mut w {
        *x /= &g;
    }
    Some(w)
}

/// All integer vectors `base + Σ λ_i basis_i` with every entry in
/// `[lo, hi]`. Returns `None` when the set exceeds `limit` elements.
pub fn enumerate_box(
    base: &[BigInt],
    basis: &[Vec<BigInt>],
    lo: &[Option<BigInt>],
    hi: &[Option<BigInt>],
    limit: usize,
) -> Result<Vec<Vec<BigInt>>, EnumerateError> {
    let r = basis.len();
    let n = base.len();
    let mut inside = |v: &[BigInt]| (0..n).all(|j| lo[j].as_ref().is_none_or(|l| &v[j] >= l) && hi[j].as_ref().is_none_or(|h| &v[j] <= h));
    if r == 0 {
        return Ok(if inside(base) { vec![base.to_vec()] } else { Vec::new() });
    }
    let mut sys = Vec::new();
    for j in 0..n {
        let coef: Vec<BigRational> = basis.iter().map(|v| rat(&v[j])).collect();
        if let Some(l) = &lo[j] {
            sys.push(Ineq { coef: coef.clone(), rhs: rat(&(l - &base[j])) });
        }
        if let Some(h) = &hi[j] {
            sys.push(Ineq { coef: coef.iter().map(|c| -c).collect(), rhs: rat(&(&base[j] - h)) });
        }
    }
    let proj = project(sys, r);
    let mut out = Vec::new();
    if proj.infeasible {
        return Ok(out);
    }
    let mut fixed: Vec<BigRational> = Vec::new();
    dfs(&proj, basis, base, &mut fixed, &mut out, limit, &mut inside)?;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnumerateError {
    Unbounded,
    TooMany,
}

fn dfs(
    proj: &Projection,
    basis: &[Vec<BigInt>],
    base: &[BigInt],
    fixed: &mut Vec<BigRational>,
    out: &mut Vec<Vec<BigInt>>,
    limit: usize,
    inside: &mut impl FnMut(&[BigInt]) -> bool,
) -> Result<(), EnumerateError> {
    let k = fixed.len();
    if k == basis.len() {
        let v: Vec<BigInt> = (0..base.len())
            .map(|j| &base[j] + (0..k).map(|i| fixed[i].to_integer() * &basis[i][j]).sum::<BigInt>())
            .collect();
        if inside(&v) {
            if out.len() >= limit {
                return Err(EnumerateError::TooMany);
            }
            out.push(v);
        }
        return Ok(());
    }
    let Some((lo, hi)) = bounds(&proj.chain[k], k, fixed) else {
        return Ok(());
    };
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return Err(EnumerateError::Unbounded);
    };
    let mut x = lo.ceil().to_integer();
    let top = hi.floor().to_integer();
    while x <= top {
        fixed.push(rat(&x));
        dfs(proj, basis, base, fixed, out, limit, inside)?;
        fixed.pop();
        x += 1;
    }
    Ok(())
}
