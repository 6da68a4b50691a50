//! Surfaces whose horizontal direction is a single cycle of equal-width
//! cylinders. Every member of a degenerate orbit has this shape, so these
//! candidates meet every such orbit.
//!
//! Layout for width `w` and heights `h_0..h_{r-1}`: cylinder `k` holds rows
//! `0..h_k` of `w` squares, `h` moves right within a row, `v` moves up
//! within a cylinder, and the top row of cylinder `k` is glued to the bottom
//! row of cylinder `k + 1 (mod r)` by a permutation `pi_k` of `0..w`.

use crate::origami::Origami;
use crate::perm::Permutation;

/// One cylinder shape: width and the cyclic list of heights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shape {
    pub width: usize,
    pub heights: Vec<usize>,
}

impl Shape {
    pub fn area(&self) -> usize {
        self.width * self.heights.iter().sum::<usize>()
    }
}

/// Shapes of area `n`, more cylinders first. Height lists are taken up to
/// rotation (the lexicographically largest rotation is kept).
pub fn shapes(n: usize) -> Vec<Shape> {
    let mut out = Vec::new();
    for width in (1..=n).filter(|w| n.is_multiple_of(*w)) {
        let total = n / width;
        let mut comps = Vec::new();
        compositions(total, &mut Vec::new(), &mut comps);
        for heights in comps {
            let best = (0..heights.len())
                .map(|s| heights[s..].iter().chain(&heights[..s]).copied().collect::<Vec<_>>())
                .max()
                .unwrap();
            if best == heights {
                out.push(Shape { width, heights });
            }
        }
    }
    out.sort_by(|a, b| {
        b.heights.len().cmp(&a.heights.len()).then(a.width.cmp(&b.width)).then(b.heights.cmp(&a.heights))
    });
    out
}

fn compositions(total: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if total == 0 {
        out.push(prefix.clone());
        return;
    }
    for first in (1..=total).rev() {
        prefix.push(first);
        compositions(total - first, prefix, out);
        prefix.pop();
    }
}

/// Builds the gluing data of a shape and enumerates the top permutations.
pub struct ShapeSurfaces {
    shape: Shape,
    base: Vec<usize>,
    h: Vec<u32>,
    v: Vec<u32>,
    pis: Vec<Vec<u32>>,
    used: Vec<Vec<bool>>,
}

impl ShapeSurfaces {
    pub fn new(shape: Shape) -> Self {
        let n = shape.area();
        let w = shape.width;
        let r = shape.heights.len();
        let mut base = Vec::with_capacity(r);
        let mut acc = 0;
        for &hk in &shape.heights {
            base.push(acc);
            acc += hk * w;
        }
        let mut h = vec![0u32; n];
        let mut v = vec![u32::MAX; n];
        for (k, &hk) in shape.heights.iter().enumerate() {
            for row in 0..hk {
                for x in 0..w {
                    let sq = base[k] + row * w + x;
                    h[sq] = (base[k] + row * w + (x + 1) % w) as u32;
                    if row + 1 < hk {
                        v[sq] = (sq + w) as u32;
                    }
                }
            }
        }
        ShapeSurfaces { base, h, v, pis: vec![vec![0; w]; r], used: vec![vec![false; w]; r], shape }
    }

    /// Number of leading gluing choices (cylinder 0, position 1) used to
    /// split the work into stripes.
    pub fn branch_count(&self) -> usize {
        self.shape.width
    }

    /// Visits every surface of this shape whose branch index is selected
    /// by `take_branch`. The first gluing of every cylinder but the last
    /// is normalized to fix 0; for one cylinder, the displacement at 0 is
    /// the least one.
    pub fn for_each(&mut self, take_branch: &dyn Fn(usize) -> bool, visit: &mut dyn FnMut(&[u32], &[u32])) {
        let has_branch_level = self.shape.heights.len() == 1 || self.shape.width >= 2;
        if has_branch_level {
            self.rec(0, 0, None, take_branch, visit);
        } else if take_branch(0) {
            self.rec(0, 0, None, &|_| true, visit);
        }
    }

    fn rec(
        &mut self,
        k: usize,
        x: usize,
        min_disp: Option<usize>,
        take_branch: &dyn Fn(usize) -> bool,
        visit: &mut dyn FnMut(&[u32], &[u32]),
    ) {
        let w = self.shape.width;
        let r = self.shape.heights.len();
        if k == r {
            visit(&self.h, &self.v);
            return;
        }
        if x == w {
            self.rec(k + 1, 0, None, take_branch, visit);
            return;
        }
        let top = self.base[k] + (self.shape.heights[k] - 1) * w + x;
        let next_base = self.base[(k + 1) % r];
        for y in 0..w {
            if self.used[k][y] {
                continue;
            }
            if x == 0 && r > 1 && k + 1 < r && y != 0 {
                continue;
            }
            let disp = (y + w - x) % w;
            if r == 1 {
                if let Some(m) = min_disp {
                    if disp < m {
                        continue;
                    }
                }
            }
            // Striping on the first free choice.
            let branch_level = if r == 1 { x == 0 } else { k == 0 && x == 1 };
            if branch_level && !take_branch(y) {
                continue;
            }
            self.used[k][y] = true;
            self.pis[k][x] = y as u32;
            self.v[top] = (next_base + y) as u32;
            let md = if r == 1 && x == 0 { Some(disp) } else { min_disp };
            self.rec(k, x + 1, md, take_branch, visit);
            self.used[k][y] = false;
        }
        self.v[top] = u32::MAX;
    }
}

/// Materializes a visited pair.
pub fn to_origami(h: &[u32], v: &[u32]) -> Option<Origami> {
    Origami::new(Permutation::from_images_unchecked(h.to_vec()), Permutation::from_images_unchecked(v.to_vec())).ok()
}

/// Whether all cycles of `p` have the same length (the columns of a
/// vertically rank-one surface all have the same height).
pub(crate) fn cycles_equal_length(p: &[u32], seen: &mut Vec<bool>) -> bool {
    let n = p.len();
    seen.clear();
    seen.resize(n, false);
    let mut common = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            len += 1;
            x = p[x] as usize;
        }
        if common == 0 {
            common = len;
        } else if len != common {
            return false;
        }
    }
    true
}
