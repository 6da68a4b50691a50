//! Cylinder decompositions in rational directions and the cyclic
//! configuration test.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{ChainModel, HomologyBasis};
use crate::intmat::complete_symplectic;
use crate::origami::{Origami, SL2Matrix};

/// A maximal horizontal cylinder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cylinder {
    pub width: usize,
    pub height: usize,
    /// Rows bottom to top, aligned so that `rows[k + 1][j] = v(rows[k][j])`.
    pub rows: Vec<Vec<u32>>,
}

impl Cylinder {
    pub fn bottom(&self) -> &[u32] {
        &self.rows[0]
    }

    pub fn top(&self) -> &[u32] {
        &self.rows[self.rows.len() - 1]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CylinderDecomposition {
    pub cylinders: Vec<Cylinder>,
    /// For each cylinder, `(cylinder above, glued length)` pairs, sorted.
    pub adjacency: Vec<Vec<(usize, usize)>>,
    /// Cylinder index of each square.
    #[serde(skip)]
    pub cylinder_of: Vec<usize>,
}

impl CylinderDecomposition {
    pub fn len(&self) -> usize {
        self.cylinders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cylinders.is_empty()
    }

    pub fn area(&self) -> usize {
        self.cylinders.iter().map(|c| c.width * c.height).sum()
    }

    pub fn widths(&self) -> Vec<usize> {
        self.cylinders.iter().map(|c| c.width).collect()
    }

    pub fn heights(&self) -> Vec<usize> {
        self.cylinders.iter().map(|c| c.height).collect()
    }
}

/// Horizontal cylinders: rows (cycles of `h`) stacked while `v` commutes
/// with `h` along the row.
pub fn horizontal_cylinders(o: &Origami) -> CylinderDecomposition {
    let n = o.n();
    let (h, v) = (o.h(), o.v());
    let rows = o.rows();
    let mut row_of = vec![0usize; n];
    for (r, row) in rows.iter().enumerate() {
        for &i in row {
            row_of[i as usize] = r;
        }
    }
    let rigid: Vec<bool> = rows
        .iter()
        .map(|row| row.iter().all(|&i| v.apply(h.apply(i as usize)) == h.apply(v.apply(i as usize))))
        .collect();
    let mut has_rigid_below = vec![false; rows.len()];
    for (r, row) in rows.iter().enumerate() {
        if rigid[r] {
            has_rigid_below[row_of[v.apply(row[0] as usize)]] = true;
        }
    }
    let mut cylinder_of = vec![usize::MAX; n];
    let mut cylinders = Vec::new();
    let mut visited = vec![false; rows.len()];
    // Bottom rows first; leftover rows form closed stacks (genus one only).
    let starts: Vec<usize> = (0..rows.len()).filter(|&r| !has_rigid_below[r]).chain(0..rows.len()).collect();
    for r0 in starts {
        if visited[r0] {
            continue;
        }
        let mut stack = Vec::new();
        let mut r = r0;
        let mut start = rows[r0][0] as usize;
        loop {
            visited[r] = true;
            let mut row = Vec::with_capacity(rows[r].len());
            let mut x = start;
            loop {
                row.push(x as u32);
                x = h.apply(x);
                if x == start {
                    break;
                }
            }
            stack.push(row);
            if !rigid[r] {
                break;
            }
            start = v.apply(start);
            r = row_of[start];
            if visited[r] {
                break;
            }
        }
        let index = cylinders.len();
        for row in &stack {
            for &i in row {
                cylinder_of[i as usize] = index;
            }
        }
        cylinders.push(Cylinder { width: stack[0].len(), height: stack.len(), rows: stack });
    }
    // Order cylinders by their least square.
    let mut order: Vec<usize> = (0..cylinders.len()).collect();
    let least = |c: &Cylinder| c.rows.iter().flatten().min().copied().unwrap_or(0);
    order.sort_by_key(|&k| least(&cylinders[k]));
    let mut rename = vec![0usize; cylinders.len()];
    for (new, &old) in order.iter().enumerate() {
        rename[old] = new;
    }
    let cylinders: Vec<Cylinder> = order.iter().map(|&k| cylinders[k].clone()).collect();
    for c in cylinder_of.iter_mut() {
        *c = rename[*c];
    }
    let adjacency = cylinders
        .iter()
        .map(|c| {
            let mut counts = std::collections::BTreeMap::new();
            for &i in c.top() {
                *counts.entry(cylinder_of[v.apply(i as usize)]).or_insert(0usize) += 1;
            }
            counts.into_iter().collect()
        })
        .collect();
    CylinderDecomposition { cylinders, adjacency, cylinder_of }
}

/// The word taking direction `(q, p)` (run `q`, rise `p`) to the horizontal.
pub fn direction_word(p: i64, q: i64) -> Result<Vec<crate::origami::Generator>> {
    Ok(SL2Matrix::to_horizontal(q, p)?.word())
}

/// Cylinders in the direction of slope `p / q`.
pub fn direction_cylinders(o: &Origami, p: i64, q: i64) -> Result<CylinderDecomposition> {
    let word = direction_word(p, q)?;
    Ok(horizontal_cylinders(&o.act_word(&word)))
}

/// Why a decomposition is not a single cycle of equal-width cylinders.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConfigurationWitness {
    WidthMismatch {
        first: usize,
        second: usize,
        widths: (usize, usize),
    },
    /// The top of `cylinder` meets more than one cylinder.
    SplitTop {
        cylinder: usize,
        above: Vec<usize>,
    },
    /// Following tops from cylinder 0 closes up before visiting all.
    ShortCycle {
        cycle: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfigurationVerdict {
    /// Cylinder indices in cyclic order starting at 0, when the test passes.
    pub cycle: Option<Vec<usize>>,
    pub witness: Option<ConfigurationWitness>,
}

impl ConfigurationVerdict {
    pub fn holds(&self) -> bool {
        self.cycle.is_some()
    }
}

pub fn check_rank_one_configuration(d: &CylinderDecomposition) -> ConfigurationVerdict {
    let fail = |w| ConfigurationVerdict { cycle: None, witness: Some(w) };
    let Some(first) = d.cylinders.first() else {
        return fail(ConfigurationWitness::ShortCycle { cycle: vec![] });
    };
    if let Some(k) = d.cylinders.iter().position(|c| c.width != first.width) {
        return fail(ConfigurationWitness::WidthMismatch {
            first: 0,
            second: k,
            widths: (first.width, d.cylinders[k].width),
        });
    }
    for (k, adj) in d.adjacency.iter().enumerate() {
        if adj.len() != 1 {
            return fail(ConfigurationWitness::SplitTop { cylinder: k, above: adj.iter().map(|&(c, _)| c).collect() });
        }
    }
    let mut cycle = vec![0];
    let mut k = d.adjacency[0][0].0;
    while k != 0 {
        cycle.push(k);
        k = d.adjacency[k][0].0;
    }
    if cycle.len() != d.len() {
        return fail(ConfigurationWitness::ShortCycle { cycle });
    }
    ConfigurationVerdict { cycle: Some(cycle), witness: None }
}

/// A symplectic basis with `a_1` the core curve class and `b_1` crossing
/// every cylinder once, completed over the integers.
pub fn homology_basis_cyclic(model: &ChainModel, d: &CylinderDecomposition) -> Result<HomologyBasis> {
    let verdict = check_rank_one_configuration(d);
    let Some(cycle) = verdict.cycle else {
        return Err(Error::NotCyclicConfiguration);
    };
    let o = model.origami();
    let n = o.n();
    let c1 = &d.cylinders[cycle[0]];
    let bottom = c1.bottom();
    let s = bottom[0] as usize;
    let a1 = model.row_chain(s);

    let mut b1 = vec![0i64; 2 * n];
    let mut in_bottom = vec![false; n];
    for &i in bottom {
        in_bottom[i as usize] = true;
    }
    let mut x = s;
    loop {
        b1[n + x] += 1;
        x = o.v().apply(x);
        if in_bottom[x] {
            break;
        }
    }
    while x != s {
        b1[x] += 1;
        x = o.h().apply(x);
    }
    let omega = model.intersection_form();
    let a1 = model.coords_big(&a1);
    let mut b1 = model.coords_big(&b1);
    if omega.pair(&a1, &b1) < num_bigint::BigInt::from(0) {
        b1 = b1.into_iter().map(|t| -t).collect();
    }
    let (a_cycles, b_cycles) = complete_symplectic(omega, a1, b1)
        .map_err(|e| Error::InvalidArgument(format!("symplectic completion failed: {e}")))?;
    Ok(HomologyBasis { a_cycles, b_cycles })
}
