//! Absolute period lattices, the optimal torus cover and its branch data.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intmat::{hermite_basis, int_vec};
use crate::origami::Origami;

/// A full-rank sublattice of `Z[i]` in the reduced form
/// `span{(width, 0), (offset, height)}` with `0 <= offset < width`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PeriodLattice {
    pub width: i64,
    pub offset: i64,
    pub height: i64,
}

impl PeriodLattice {
    pub const GAUSSIAN: PeriodLattice = PeriodLattice { width: 1, offset: 0, height: 1 };

    /// Reduced generators as `(re, im)` pairs.
    pub fn generators(&self) -> [(i64, i64); 2] {
        [(self.width, 0), (self.offset, self.height)]
    }

    pub fn covolume(&self) -> i64 {
        self.width * self.height
    }

    /// Hermite-reduced lattice spanned by integer vectors (at least rank 2).
    pub fn from_vectors(vectors: &[(i64, i64)]) -> Option<PeriodLattice> {
        // Pivot on the imaginary part first so the horizontal vector is last.
        let rows: Vec<_> = vectors.iter().map(|&(x, y)| int_vec(&[y, x])).collect();
        let hnf = hermite_basis(&rows);
        if hnf.len() != 2 {
            return None;
        }
        let big = |x: &BigInt| x.to_i64().expect("lattice entry fits in i64");
        Some(PeriodLattice { width: big(&hnf[1][1]), offset: big(&hnf[0][1]), height: big(&hnf[0][0]) })
    }

    /// Representative of `z` in the fundamental domain `[0, width) x [0, height)`.
    pub fn reduce(&self, (x, y): (i64, i64)) -> (i64, i64) {
        let k = y.div_euclid(self.height);
        let (x, y) = (x - k * self.offset, y - k * self.height);
        (x.rem_euclid(self.width), y)
    }

    pub fn contains(&self, z: (i64, i64)) -> bool {
        self.reduce(z) == (0, 0)
    }

    /// Whether `z` is a 2-torsion point of the quotient torus.
    pub fn is_two_torsion(&self, (x, y): (i64, i64)) -> bool {
        self.contains((2 * x, 2 * y))
    }
}

/// Developing map of the 1-skeleton: corner vertices, their positions in a
/// spanning tree, and the periods of the fundamental cycles.
struct Development {
    vertex_of: Vec<usize>,
    zero_vertices: Vec<usize>,
    position: Vec<(i64, i64)>,
    cycle_periods: Vec<(i64, i64)>,
}

fn develop(o: &Origami) -> Development {
    let n = o.n();
    let comm = o.commutator();
    let mut vertex_of = vec![0usize; n];
    let mut zero_vertices = Vec::new();
    let cycles = comm.cycles();
    for (k, cyc) in cycles.iter().enumerate() {
        for &j in cyc {
            vertex_of[j as usize] = k;
        }
        if cyc.len() > 1 {
            zero_vertices.push(k);
        }
    }
    let vcount = cycles.len();
    // Edges (tail, head, period).
    let edges: Vec<(usize, usize, (i64, i64))> = (0..n)
        .map(|i| (vertex_of[i], vertex_of[o.h().apply(i)], (1, 0)))
        .chain((0..n).map(|i| (vertex_of[i], vertex_of[o.v().apply(i)], (0, 1))))
        .collect();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); vcount];
    for (e, &(a, b, _)) in edges.iter().enumerate() {
        adj[a].push(e);
        adj[b].push(e);
    }
    let mut position: Vec<Option<(i64, i64)>> = vec![None; vcount];
    let mut in_tree = vec![false; edges.len()];
    position[vertex_of[0]] = Some((0, 0));
    let mut queue = VecDeque::from([vertex_of[0]]);
    while let Some(u) = queue.pop_front() {
        let pu = position[u].unwrap();
        for &e in &adj[u] {
            let (a, b, (dx, dy)) = edges[e];
            let (w, pw) = if a == u { (b, (pu.0 + dx, pu.1 + dy)) } else { (a, (pu.0 - dx, pu.1 - dy)) };
            if position[w].is_none() {
                position[w] = Some(pw);
                in_tree[e] = true;
                queue.push_back(w);
            }
        }
    }
    let position: Vec<(i64, i64)> = position.into_iter().map(|p| p.expect("connected")).collect();
    let cycle_periods = edges
        .iter()
        .zip(&in_tree)
        .filter(|(_, &t)| !t)
        .map(|(&(a, b, (dx, dy)), _)| (dx + position[a].0 - position[b].0, dy + position[a].1 - position[b].1))
        .collect();
    Development { vertex_of, zero_vertices, position, cycle_periods }
}

/// Lattice of absolute periods.
pub fn period_lattice(o: &Origami) -> PeriodLattice {
    let dev = develop(o);
    PeriodLattice::from_vectors(&dev.cycle_periods).expect("absolute periods span a lattice")
}

/// Position of each square's lower-left corner relative to square 0's.
pub fn corner_positions(o: &Origami) -> Vec<(i64, i64)> {
    let dev = develop(o);
    dev.vertex_of.iter().map(|&v| dev.position[v]).collect()
}

/// `n / covolume`.
pub fn optimal_degree(o: &Origami) -> Result<u64> {
    let lattice = period_lattice(o);
    let area = o.n() as u64;
    let covolume = lattice.covolume() as u64;
    if !area.is_multiple_of(covolume) {
        return Err(Error::NonIntegerDegree { area, covolume });
    }
    Ok(area / covolume)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CoverCase {
    I,
    II,
    III,
    Other,
}

impl std::fmt::Display for CoverCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CoverCase::I => "I",
            CoverCase::II => "II",
            CoverCase::III => "III",
            CoverCase::Other => "other",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub lattice: PeriodLattice,
    pub d_opt: u64,
    /// Images of the zeros in `[0, width) x [0, height)`, the first zero at 0.
    pub branch_points: Vec<(i64, i64)>,
    pub branch_in_two_torsion: bool,
    /// Bottom heights of the horizontal cylinders of the punctured quotient.
    pub band_heights: Vec<i64>,
    /// Number of cylinders over each band.
    pub preimage_counts: Vec<usize>,
    /// First of II, III, I that holds.
    pub case: CoverCase,
    /// Every case whose conditions hold.
    pub cases: Vec<CoverCase>,
    /// `n <= 4 d_opt`.
    pub at_most_4dopt_squares: bool,
    /// `n <= 4 d_opt` when case II or III holds.
    pub bound_4dopt_ok: Option<bool>,
}

pub fn classify_cover(o: &Origami) -> Result<CoverReport> {
    let dev = develop(o);
    let lattice = PeriodLattice::from_vectors(&dev.cycle_periods).expect("absolute periods span a lattice");
    let area = o.n() as u64;
    let covolume = lattice.covolume() as u64;
    if !area.is_multiple_of(covolume) {
        return Err(Error::NonIntegerDegree { area, covolume });
    }
    let d_opt = area / covolume;

    let base = dev.zero_vertices.first().map(|&z| dev.position[z]).unwrap_or((0, 0));
    let mut branch_points: Vec<(i64, i64)> = dev
        .zero_vertices
        .iter()
        .map(|&z| lattice.reduce((dev.position[z].0 - base.0, dev.position[z].1 - base.1)))
        .collect();
    branch_points.sort_unstable();
    branch_points.dedup();
    let branch_in_two_torsion = branch_points.iter().all(|&b| lattice.is_two_torsion(b));

    let mut band_heights: Vec<i64> = branch_points.iter().map(|b| b.1).collect();
    band_heights.sort_unstable();
    band_heights.dedup();
    if band_heights.is_empty() {
        band_heights.push(0);
    }
    // Rows of the cover sitting on the bottom of each band.
    let mut preimage_counts = vec![0usize; band_heights.len()];
    for row in o.rows() {
        let y = dev.position[dev.vertex_of[row[0] as usize]].1 - base.1;
        let y = y.rem_euclid(lattice.height);
        if let Ok(k) = band_heights.binary_search(&y) {
            preimage_counts[k] += 1;
        }
    }

    // The three cases are not exclusive; report all that hold.
    let mut cases = Vec::new();
    if branch_points.len() == 1 && preimage_counts.iter().all(|&k| (2..=4).contains(&k)) {
        cases.push(CoverCase::II);
    }
    if !branch_points.is_empty() && branch_in_two_torsion && preimage_counts.iter().all(|&k| k == 2) {
        cases.push(CoverCase::III);
    }
    if preimage_counts.iter().all(|&k| k == 1) {
        cases.push(CoverCase::I);
    }
    let case = cases.first().copied().unwrap_or(CoverCase::Other);
    let small = area <= 4 * d_opt;
    let bound_4dopt_ok = cases.iter().any(|c| matches!(c, CoverCase::II | CoverCase::III)).then_some(small);
    Ok(CoverReport {
        lattice,
        d_opt,
        branch_points,
        branch_in_two_torsion,
        band_heights,
        preimage_counts,
        case,
        cases,
        at_most_4dopt_squares: small,
        bound_4dopt_ok,
    })
}

/// Lattice recovered from linear constraints on a period vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintLattice {
    /// Two generators, as rational `(re, im)` pairs.
    pub generators: [(BigRational, BigRational); 2],
    /// Least common denominator of the coefficients expressing each period
    /// in terms of the two free ones.
    pub p: BigInt,
}

impl ConstraintLattice {
    /// As a Gaussian-integer lattice, when the generators are integral.
    pub fn to_period_lattice(&self) -> Option<PeriodLattice> {
        let mut v = Vec::new();
        for (x, y) in &self.generators {
            if !x.is_integer() || !y.is_integer() {
                return None;
            }
            v.push((x.to_integer().to_i64()?, y.to_integer().to_i64()?));
        }
        PeriodLattice::from_vectors(&v)
    }
}

/// Lattice spanned by all coordinates of period vectors satisfying the
/// constraints (rows of a reduced echelon matrix), pinned down by a sample.
pub fn lattice_from_constraints(
    constraints: &[Vec<BigRational>],
    sample: &[(BigRational, BigRational)],
) -> Result<ConstraintLattice> {
    let cols = sample.len();
    let rows: Vec<&Vec<BigRational>> = constraints.iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    let mut pivots = Vec::new();
    for r in &rows {
        if r.len() != cols {
            return Err(Error::InvalidArgument("constraint width differs from the sample".into()));
        }
        let p = r.iter().position(|x| !x.is_zero()).unwrap();
        if !r[p].is_one() || pivots.contains(&p) {
            return Err(Error::InvalidArgument("constraints are not in reduced echelon form".into()));
        }
        pivots.push(p);
    }
    for (k, r) in rows.iter().enumerate() {
        let re: BigRational = r.iter().zip(sample).map(|(c, s)| c * &s.0).sum();
        let im: BigRational = r.iter().zip(sample).map(|(c, s)| c * &s.1).sum();
        if !re.is_zero() || !im.is_zero() {
            return Err(Error::SampleViolatesConstraints(k));
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    if free.len() != 2 {
        return Err(Error::KernelNotDim2(free.len()));
    }
    // Coefficients of each coordinate in terms of the two free ones.
    let mut coeffs: Vec<[BigRational; 2]> = Vec::with_capacity(cols);
    for c in 0..cols {
        if let Some(k) = free.iter().position(|&f| f == c) {
            let mut e = [BigRational::zero(), BigRational::zero()];
            e[k] = BigRational::one();
            coeffs.push(e);
        } else {
            let r = rows[pivots.iter().position(|&p| p == c).unwrap()];
            coeffs.push([-r[free[0]].clone(), -r[free[1]].clone()]);
        }
    }
    let p = coeffs.iter().flatten().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let scaled: Vec<Vec<BigInt>> =
        coeffs.iter().map(|[a, b]| vec![(a * &p).to_integer(), (b * &p).to_integer()]).collect();
    let hnf = hermite_basis(&scaled);
    if hnf.len() != 2 {
        return Err(Error::KernelNotDim2(hnf.len()));
    }
    let (z1, z2) = (&sample[free[0]], &sample[free[1]]);
    let pr = BigRational::from_integer(p.clone());
    let gen = |row: &Vec<BigInt>| {
        let a = BigRational::from_integer(row[0].clone()) / &pr;
        let b = BigRational::from_integer(row[1].clone()) / &pr;
        (&a * &z1.0 + &b * &z2.0, &a * &z1.1 + &b * &z2.1)
    };
    Ok(ConstraintLattice { generators: [gen(&hnf[0]), gen(&hnf[1])], p })
}

/// Reduced row echelon form over the rationals.
pub fn rref(mut m: Vec<Vec<BigRational>>) -> Vec<Vec<BigRational>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    m
}

/// Constraints cutting out the plane spanned by the real and imaginary
/// parts of `periods`, in reduced echelon form.
pub fn tautological_constraints(periods: &[(i64, i64)]) -> Vec<Vec<BigRational>> {
    let q = |x: i64| BigRational::from_integer(BigInt::from(x));
    let span = rref(vec![periods.iter().map(|p| q(p.0)).collect(), periods.iter().map(|p| q(p.1)).collect()]);
    // Null space of `span`, one vector per free column.
    let cols = periods.len();
    let pivots: Vec<usize> = span.iter().map(|r| r.iter().position(|x| !x.is_zero()).unwrap()).collect();
    let mut null = Vec::new();
    for f in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); cols];
        v[f] = BigRational::one();
        for (r, &p) in span.iter().zip(&pivots) {
            v[p] = -r[f].clone();
        }
        null.push(v);
    }
    rref(null)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShearSide {
    Upper,
    Lower,
}

/// Integer shear `[[1, m], [0, 1]]` or `[[1, 0], [m, 1]]`.
pub fn shear(o: &Origami, m: i64, side: ShearSide) -> Origami {
    match side {
        ShearSide::Upper => o.shear_upper(m),
        ShearSide::Lower => o.shear_lower(m),
    }
}

impl CoverReport {
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("serializable");
        v["covolume"] = serde_json::Value::String(format!("{}/1", self.lattice.covolume()));
        v["case"] = serde_json::Value::String(self.case.to_string());
        v["cases"] = self.cases.iter().map(|c| serde_json::Value::String(c.to_string())).collect();
        v
    }
}
