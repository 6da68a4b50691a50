//! Absolute homology of square-tiled surfaces and the integer symplectic
//! action of affine moves on it.
//!
//! The cell structure has one vertex per corner point (cycle of the
//! commutator), two edges per square (`x_i` = bottom edge pointing right,
//! `y_i` = left edge pointing up) and the squares as faces, with boundary
//! `x_i + y_{h(i)} - x_{v(i)} - y_i`. A tree/cotree decomposition yields
//! `2g` fundamental cycles (a Z-basis of homology) and `2g` dual cycles
//! whose crossing counts are cocycles; the two families pair diagonally,
//! which turns coordinate extraction into one dot product per cycle.
//!
//! Matrices follow the row convention of [`crate::intmat`]: row `k` of a
//! monodromy matrix is the image of basis cycle `k`.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::cylinder::{check_rank_one_configuration, horizontal_cylinders};
use crate::error::{Error, Result};
use crate::intmat::{IntMatrix, IntVec};
use crate::origami::{Generator, Origami};
use crate::perm::Permutation;

/// A chain: coefficient of `x_i` at index `i`, of `y_i` at `n + i`.
pub type Chain = Vec<i64>;

/// Affine moves that have an explicit chain map.
#[derive(Clone, Debug)]
pub enum Move {
    /// `[[1, m], [0, 1]]`.
    Upper(i64),
    /// `[[1, 0], [m, 1]]`.
    Lower(i64),
    /// Quarter turn `S`.
    Rotate,
    /// `S^-1`.
    RotateInv,
    /// Square `i` becomes square `sigma(i)`.
    Relabel(Permutation),
}

impl Move {
    pub fn from_generator(g: Generator) -> Move {
        match g {
            Generator::T => Move::Upper(1),
            Generator::TInv => Move::Upper(-1),
            Generator::S => Move::Rotate,
            Generator::SInv => Move::RotateInv,
        }
    }

    /// The labelled image surface.
    pub fn apply(&self, o: &Origami) -> Origami {
        match self {
            Move::Upper(m) => o.shear_upper(*m),
            Move::Lower(m) => o.shear_lower(*m),
            Move::Rotate => o.act(Generator::S),
            Move::RotateInv => o.act(Generator::SInv),
            Move::Relabel(s) => o.relabel(s),
        }
    }

    /// Pushes a chain on `o` forward to the image surface.
    pub fn push(&self, o: &Origami, chain: &[i64]) -> Chain {
        let n = o.n();
        let (h, v) = (o.h(), o.v());
        let mut out = vec![0i64; 2 * n];
        match self {
            Move::Upper(m) => {
                for i in 0..n {
                    out[i] += chain[i];
                    let c = chain[n + i];
                    if c != 0 {
                        let end = walk(h, i, *m);
                        out[n + end] += c;
                        add_run(&mut out, 0, h, i, *m, c);
                    }
                }
            }
            Move::Lower(m) => {
                for i in 0..n {
                    out[n + i] += chain[n + i];
                    let c = chain[i];
                    if c != 0 {
                        let end = walk(v, i, *m);
                        out[end] += c;
                        add_run(&mut out, n, v, i, *m, c);
                    }
                }
            }
            Move::Rotate => {
                let vinv = v.inverse();
                for i in 0..n {
                    out[n + vinv.apply(i)] += chain[i];
                    out[i] -= chain[n + i];
                }
            }
            Move::RotateInv => {
                let hinv = h.inverse();
                for i in 0..n {
                    out[n + i] -= chain[i];
                    out[hinv.apply(i)] += chain[n + i];
                }
            }
            Move::Relabel(s) => {
                for i in 0..n {
                    out[s.apply(i)] += chain[i];
                    out[n + s.apply(i)] += chain[n + i];
                }
            }
        }
        out
    }
}

fn walk(p: &Permutation, i: usize, m: i64) -> usize {
    let mut cycle_len = 1;
    let mut x = p.apply(i);
    while x != i {
        cycle_len += 1;
        x = p.apply(x);
    }
    let steps = m.rem_euclid(cycle_len);
    for _ in 0..steps {
        x = p.apply(x);
    }
    x
}

/// Adds `c * sum_{j=0}^{m-1} e_{p^j(i)}` (or `-c * sum_{j=1}^{|m|} e_{p^-j(i)}`
/// for negative `m`) to the block starting at `offset`, folding full cycles.
fn add_run(out: &mut [i64], offset: usize, p: &Permutation, i: usize, m: i64, c: i64) {
    let mut cycle = vec![i];
    let mut x = p.apply(i);
    while x != i {
        cycle.push(x);
        x = p.apply(x);
    }
    let len = cycle.len() as i64;
    let (q, r) = (m.abs() / len, m.abs() % len);
    let sign = m.signum();
    if q != 0 {
        for &s in &cycle {
            out[offset + s] += sign * c * q;
        }
    }
    for j in 0..r {
        let idx = if m >= 0 { cycle[j as usize] } else { cycle[(len - 1 - j) as usize] };
        out[offset + idx] += sign * c;
    }
}

/// Absolute homology of one labelled origami.
#[derive(Clone, Debug)]
pub struct ChainModel {
    origami: Origami,
    genus: usize,
    vertex_of: Vec<usize>,
    vertex_count: usize,
    cycles: Vec<Chain>,
    cocycles: Vec<Chain>,
    signs: Vec<i64>,
    intersection: IntMatrix,
}

impl ChainModel {
    pub fn origami(&self) -> &Origami {
        &self.origami
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// `2g`.
    pub fn rank(&self) -> usize {
        self.cycles.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Corner point at the lower-left corner of square `i`.
    pub fn vertex_of(&self, i: usize) -> usize {
        self.vertex_of[i]
    }

    /// Basis cycles as edge chains.
    pub fn basis_chains(&self) -> &[Chain] {
        &self.cycles
    }

    /// Intersection matrix of the basis, `<basis_i, basis_j>`.
    pub fn intersection_form(&self) -> &IntMatrix {
        &self.intersection
    }

    pub fn boundary(&self, chain: &[i64]) -> Vec<i64> {
        let n = self.origami.n();
        let mut b = vec![0i64; self.vertex_count];
        for i in 0..n {
            let (hx, vy) = (self.origami.h().apply(i), self.origami.v().apply(i));
            b[self.vertex_of[hx]] += chain[i];
            b[self.vertex_of[i]] -= chain[i];
            b[self.vertex_of[vy]] += chain[n + i];
            b[self.vertex_of[i]] -= chain[n + i];
        }
        b
    }

    pub fn is_cycle(&self, chain: &[i64]) -> bool {
        self.boundary(chain).iter().all(|&x| x == 0)
    }

    /// Coordinates of a cycle in the basis.
    pub fn coords(&self, chain: &[i64]) -> Vec<i64> {
        debug_assert!(self.is_cycle(chain));
        self.cocycles
            .iter()
            .zip(&self.signs)
            .map(|(phi, s)| s * phi.iter().zip(chain).map(|(a, b)| a * b).sum::<i64>())
            .collect()
    }

    pub fn coords_big(&self, chain: &[i64]) -> IntVec {
        self.coords(chain).into_iter().map(BigInt::from).collect()
    }

    /// Algebraic intersection of two cycles.
    pub fn intersect(&self, a: &[i64], b: &[i64]) -> BigInt {
        self.intersection.pair(&self.coords_big(a), &self.coords_big(b))
    }

    /// Holonomy `(dx, dy)` of a chain: `x_i -> 1`, `y_i -> i`.
    pub fn chain_period(&self, chain: &[i64]) -> (i64, i64) {
        let n = self.origami.n();
        (chain[..n].iter().sum(), chain[n..].iter().sum())
    }

    /// Periods of the basis cycles.
    pub fn basis_periods(&self) -> Vec<(i64, i64)> {
        self.cycles.iter().map(|c| self.chain_period(c)).collect()
    }

    /// Chain of the row (cycle of `h`) through square `i`, along bottom edges.
    pub fn row_chain(&self, i: usize) -> Chain {
        let n = self.origami.n();
        let mut c = vec![0i64; 2 * n];
        let mut x = i;
        loop {
            c[x] += 1;
            x = self.origami.h().apply(x);
            if x == i {
                break;
            }
        }
        c
    }

    /// Chain of the column (cycle of `v`) through square `i`, along left edges.
    pub fn column_chain(&self, i: usize) -> Chain {
        let n = self.origami.n();
        let mut c = vec![0i64; 2 * n];
        let mut x = i;
        loop {
            c[n + x] += 1;
            x = self.origami.v().apply(x);
            if x == i {
                break;
            }
        }
        c
    }
}

/// Builds the chain model: cell structure, tree/cotree basis, intersection form.
pub fn absolute_homology(o: &Origami) -> ChainModel {
    let n = o.n();
    let (h, v) = (o.h(), o.v());
    // Vertices: cycles of the commutator.
    let comm = o.commutator();
    let mut vertex_of = vec![usize::MAX; n];
    let mut vertex_count = 0;
    for cyc in comm.cycles() {
        for &j in &cyc {
            vertex_of[j as usize] = vertex_count;
        }
        vertex_count += 1;
    }
    let edge_ends = |e: usize| -> (usize, usize) {
        if e < n {
            (vertex_of[e], vertex_of[h.apply(e)])
        } else {
            let i = e - n;
            (vertex_of[i], vertex_of[v.apply(i)])
        }
    };
    let (hinv, vinv) = (h.inverse(), v.inverse());
    // Dual edge e* runs from the square below/left of e to the square owning e.
    let dual_ends = |e: usize| -> (usize, usize) {
        if e < n {
            (vinv.apply(e), e)
        } else {
            let i = e - n;
            (hinv.apply(i), i)
        }
    };

    // Spanning tree of the 1-skeleton.
    let mut vadj: Vec<Vec<usize>> = vec![Vec::new(); vertex_count];
    for e in 0..2 * n {
        let (a, b) = edge_ends(e);
        vadj[a].push(e);
        if b != a {
            vadj[b].push(e);
        }
    }
    let mut in_tree = vec![false; 2 * n];
    let mut vparent: Vec<Option<usize>> = vec![None; vertex_count];
    bfs_tree(vertex_count, &vadj, &edge_ends, &mut in_tree, &mut vparent);

    // Spanning tree of the dual graph avoiding primal tree edges.
    let mut sadj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in 0..2 * n {
        if in_tree[e] {
            continue;
        }
        let (a, b) = dual_ends(e);
        if a == b {
            continue;
        }
        sadj[a].push(e);
        sadj[b].push(e);
    }
    let mut in_cotree = vec![false; 2 * n];
    let mut sparent: Vec<Option<usize>> = vec![None; n];
    bfs_tree(n, &sadj, &dual_ends, &mut in_cotree, &mut sparent);

    let leftover: Vec<usize> = (0..2 * n).filter(|&e| !in_tree[e] && !in_cotree[e]).collect();
    let genus = o.genus();
    assert_eq!(leftover.len(), 2 * genus, "tree/cotree count disagrees with the genus");

    let mut cycles = Vec::with_capacity(leftover.len());
    let mut cocycles = Vec::with_capacity(leftover.len());
    let mut signs = Vec::with_capacity(leftover.len());
    for &e in &leftover {
        // Primal: e, then back from its head to its tail through the tree.
        let mut chain = vec![0i64; 2 * n];
        chain[e] += 1;
        let (tail, head) = edge_ends(e);
        add_tree_path(&mut chain, head, 1, &vparent, &edge_ends);
        add_tree_path(&mut chain, tail, -1, &vparent, &edge_ends);
        // Dual: e*, then back through the cotree.
        let mut dual = vec![0i64; 2 * n];
        dual[e] += 1;
        let (dt, dh) = dual_ends(e);
        add_tree_path(&mut dual, dh, 1, &sparent, &dual_ends);
        add_tree_path(&mut dual, dt, -1, &sparent, &dual_ends);
        // Crossing count as a cochain: +1 across x edges, -1 across y edges.
        let phi: Chain = dual.iter().enumerate().map(|(k, &d)| if k < n { d } else { -d }).collect();
        signs.push(phi[e]);
        cycles.push(chain);
        cocycles.push(phi);
    }

    // Cup product of the cocycles, via the diagonal subdivision of each square.
    let r = leftover.len();
    let mut cup = IntMatrix::zeros(r, r);
    for a in 0..r {
        for b in 0..r {
            let (pa, pb) = (&cocycles[a], &cocycles[b]);
            let mut s = 0i64;
            for i in 0..n {
                s += pa[i] * pb[n + h.apply(i)] - pa[n + i] * pb[v.apply(i)];
            }
            cup[(a, b)] = BigInt::from(s);
        }
    }
    // Intersection form on the cycles: E * cup^{-T} * E with E = diag(signs).
    let intersection = if r == 0 {
        IntMatrix::zeros(0, 0)
    } else {
        let inv = cup.inverse_rational().expect("cup product form is nondegenerate");
        let mut m = IntMatrix::zeros(r, r);
        for i in 0..r {
            for j in 0..r {
                let x = &inv[j][i] * BigRational::from_integer(BigInt::from(signs[i] * signs[j]));
                assert!(x.is_integer(), "intersection form is not integral");
                m[(i, j)] = x.to_integer();
            }
        }
        m
    };
    ChainModel { origami: o.clone(), genus, vertex_of, vertex_count, cycles, cocycles, signs, intersection }
}

fn bfs_tree(
    nodes: usize,
    adj: &[Vec<usize>],
    ends: &dyn Fn(usize) -> (usize, usize),
    in_tree: &mut [bool],
    parent: &mut [Option<usize>],
) {
    if nodes == 0 {
        return;
    }
    let mut seen = vec![false; nodes];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for &e in &adj[u] {
            let (a, b) = ends(e);
            let w = if a == u { b } else { a };
            if !seen[w] {
                seen[w] = true;
                in_tree[e] = true;
                parent[w] = Some(e);
                queue.push_back(w);
            }
        }
    }
    debug_assert!(seen.iter().all(|&s| s), "graph is disconnected");
}

/// Adds `sign *` (path from `node` to the root).
fn add_tree_path(
    chain: &mut [i64],
    mut node: usize,
    sign: i64,
    parent: &[Option<usize>],
    ends: &dyn Fn(usize) -> (usize, usize),
) {
    while let Some(e) = parent[node] {
        let (a, b) = ends(e);
        // Moving from `node` towards its parent along e.
        if b == node {
            chain[e] -= sign;
            node = a;
        } else {
            chain[e] += sign;
            node = b;
        }
    }
}

/// Matrix of a sequence of moves from `src`'s basis to `dst`'s basis.
/// `dst` must be the chain model of the surface the moves produce.
pub fn move_matrix(src: &ChainModel, moves: &[Move], dst: &ChainModel) -> IntMatrix {
    let rows: Vec<IntVec> = src
        .basis_chains()
        .iter()
        .map(|c| {
            let mut o = src.origami().clone();
            let mut chain = c.clone();
            for m in moves {
                chain = m.push(&o, &chain);
                o = m.apply(&o);
            }
            debug_assert_eq!(&o, dst.origami());
            dst.coords_big(&chain)
        })
        .collect();
    IntMatrix::from_rows(rows)
}

/// Which basis a monodromy matrix is written in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BasisTag {
    /// Tree/cotree basis of the source and target chain models.
    Chain,
    /// A basis adapted to a cyclic cylinder configuration.
    Cyclic,
}

#[derive(Clone, Debug)]
pub struct MonodromyMatrix {
    pub entries: IntMatrix,
    pub basis: BasisTag,
}

impl MonodromyMatrix {
    pub fn dim(&self) -> usize {
        self.entries.rows()
    }
}

/// The homology action of one generator, with the labelled image surface.
pub fn monodromy_generator(o: &Origami, gen: Generator) -> (MonodromyMatrix, Origami) {
    let src = absolute_homology(o);
    let image = o.act(gen);
    let dst = absolute_homology(&image);
    let m = move_matrix(&src, &[Move::from_generator(gen)], &dst);
    (MonodromyMatrix { entries: m, basis: BasisTag::Chain }, image)
}

/// `(m - I)^{dim} = 0`.
pub fn check_unipotent(m: &IntMatrix) -> bool {
    let n = m.rows();
    if n == 0 {
        return true;
    }
    m.sub(&IntMatrix::identity(n)).pow(n as u64).is_zero()
}

/// A symplectic basis `a_1..a_g, b_1..b_g` in chain-model coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyBasis {
    pub a_cycles: Vec<IntVec>,
    pub b_cycles: Vec<IntVec>,
}

impl HomologyBasis {
    pub fn genus(&self) -> usize {
        self.a_cycles.len()
    }

    /// Rows `a_1..a_g, b_1..b_g`.
    pub fn matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.a_cycles.iter().chain(&self.b_cycles).cloned().collect())
    }

    /// Intersection matrix of the basis under `omega`.
    pub fn gram(&self, omega: &IntMatrix) -> IntMatrix {
        let b = self.matrix();
        b.mul(omega).mul(&b.transpose())
    }

    /// Rewrites a matrix given in chain coordinates into this basis.
    pub fn conjugate(&self, m: &IntMatrix) -> IntMatrix {
        let b = self.matrix();
        let inv = b.inverse_unimodular().expect("basis is unimodular");
        b.mul(m).mul(&inv)
    }
}

/// Result of the horocycle loop computation.
#[derive(Clone, Debug)]
pub struct HorocycleMonodromy {
    pub matrix: MonodromyMatrix,
    /// `c`: the shear `T^c` used, the least one fixing the labelled surface.
    pub return_time: u64,
    /// Least `c` with `T^c` fixing the surface up to relabeling.
    pub canonical_return_time: u64,
    /// Full Dehn twists per horizontal cylinder, `c * height / width`.
    pub twists: Vec<u64>,
    /// Sum of the twists.
    pub rho: u64,
}

impl HorocycleMonodromy {
    /// Lower-left block `M` of `[[Id, 0], [M, Id]]`.
    pub fn lower_block(&self) -> IntMatrix {
        let g = self.matrix.dim() / 2;
        let e = &self.matrix.entries;
        let mut m = IntMatrix::zeros(g, g);
        for i in 0..g {
            for j in 0..g {
                m[(i, j)] = e[(g + i, j)].clone();
            }
        }
        m
    }

    /// Exact block shape `[[Id, 0], [M, Id]]`.
    pub fn has_block_form(&self) -> bool {
        let g = self.matrix.dim() / 2;
        let e = &self.matrix.entries;
        (0..2 * g).all(|i| {
            (0..2 * g).all(|j| {
                let want_identity = i == j;
                let in_lower_left = i >= g && j < g;
                if in_lower_left {
                    true
                } else if want_identity {
                    e[(i, j)].is_one()
                } else {
                    e[(i, j)].is_zero()
                }
            })
        })
    }

    /// Entry `M[0][0]`.
    pub fn m11(&self) -> BigInt {
        let g = self.matrix.dim() / 2;
        self.matrix.entries[(g, 0)].clone()
    }
}

/// Upper bound on the return time before we declare a bug.
pub const TWIST_CAP: u64 = 1 << 40;

/// The matrix of the horizontal multi-twist returning the surface to itself,
/// written in `basis` (normally the output of
/// [`crate::cylinder::homology_basis_cyclic`]).
pub fn monodromy_horocycle(model: &ChainModel, basis: &HomologyBasis) -> Result<HorocycleMonodromy> {
    let o = model.origami();
    let decomposition = horizontal_cylinders(o);
    if !check_rank_one_configuration(&decomposition).holds() {
        return Err(Error::NotCyclicConfiguration);
    }
    // T^c fixes the labels iff h^c = id.
    let c = o.rows().iter().fold(1u64, |acc, r| acc.lcm(&(r.len() as u64)));
    if c > TWIST_CAP {
        return Err(Error::NonPeriodicTwist { cap: TWIST_CAP });
    }
    let base = o.canonical_form();
    let mut canonical_return = 0;
    let mut cur = o.clone();
    for k in 1..=c {
        cur = cur.shear_upper(1);
        if cur.canonical_form() == base {
            canonical_return = k;
            break;
        }
    }
    debug_assert!(canonical_return > 0 && c % canonical_return == 0);
    let twists: Vec<u64> = decomposition.cylinders.iter().map(|cyl| c * cyl.height as u64 / cyl.width as u64).collect();
    let rho = twists.iter().sum();
    let chain_matrix = move_matrix(model, &[Move::Upper(c as i64)], model);
    let entries = basis.conjugate(&chain_matrix);
    Ok(HorocycleMonodromy {
        matrix: MonodromyMatrix { entries, basis: BasisTag::Cyclic },
        return_time: c,
        canonical_return_time: canonical_return,
        twists,
        rho,
    })
}
