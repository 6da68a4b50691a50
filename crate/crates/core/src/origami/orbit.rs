use rustc_hash::FxHashMap as HashMap;

use super::canonical::{from_key, Canonicalizer};
use super::{Generator, Origami};
use crate::error::{Error, Result};

pub const DEFAULT_ORBIT_CAP: usize = 1_000_000;

/// The SL2(Z)-orbit of a square-tiled surface on canonical forms.
///
/// Nodes are numbered in breadth-first order from the canonical form of the
/// base point, exploring `T` before `S`. Edges are labelled by generator.
#[derive(Clone, Debug)]
pub struct OrbitGraph {
    nodes: Vec<Origami>,
    /// Interleaved canonical key to node.
    index: HashMap<Vec<u32>, usize>,
    t_edge: Vec<usize>,
    s_edge: Vec<usize>,
}

impl OrbitGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Origami] {
        &self.nodes
    }

    pub fn node(&self, k: usize) -> &Origami {
        &self.nodes[k]
    }

    /// Index of a surface (any labeling) in the orbit.
    pub fn position(&self, o: &Origami) -> Option<usize> {
        let mut c = Canonicalizer::new(o.n());
        self.index.get(c.key(o.h().images(), o.v().images()).1).copied()
    }

    pub fn contains(&self, o: &Origami) -> bool {
        self.position(o).is_some()
    }

    /// Target of the edge labelled `gen` leaving node `k`.
    pub fn step(&self, k: usize, gen: Generator) -> usize {
        match gen {
            Generator::T => self.t_edge[k],
            Generator::S => self.s_edge[k],
            Generator::TInv => self.t_edge.iter().position(|&j| j == k).expect("T is a bijection"),
            Generator::SInv => self.s_edge.iter().position(|&j| j == k).expect("S is a bijection"),
        }
    }

    /// All labelled edges `(from, generator, to)` for `T` and `S`.
    pub fn edges(&self) -> Vec<(usize, Generator, usize)> {
        let mut e = Vec::with_capacity(2 * self.len());
        for k in 0..self.len() {
            e.push((k, Generator::T, self.t_edge[k]));
            e.push((k, Generator::S, self.s_edge[k]));
        }
        e
    }

    /// The lexicographically smallest member; used as the orbit's key.
    pub fn min_member(&self) -> &Origami {
        self.nodes.iter().min().expect("orbit is non-empty")
    }
}

pub fn orbit(o: &Origami) -> Result<OrbitGraph> {
    orbit_with_cap(o, DEFAULT_ORBIT_CAP)
}

pub fn orbit_with_cap(o: &Origami, cap: usize) -> Result<OrbitGraph> {
    let n = o.n();
    let mut canon = Canonicalizer::new(n);
    let start = canon.key(o.h().images(), o.v().images()).1.to_vec();
    let mut nodes = vec![from_key(&start)];
    let mut index = HashMap::default();
    index.insert(start, 0usize);
    let mut t_edge = Vec::new();
    let mut s_edge = Vec::new();
    let (mut h_inv, mut img_h, mut img_v) = (vec![0u32; n], vec![0u32; n], vec![0u32; n]);
    let mut k = 0;
    while k < nodes.len() {
        for gen in [Generator::T, Generator::S] {
            let (h, v) = (nodes[k].h().images(), nodes[k].v().images());
            match gen {
                // T: rows kept, top neighbour of i becomes v(h^-1(i)).
                Generator::T => {
                    for (i, &x) in h.iter().enumerate() {
                        h_inv[x as usize] = i as u32;
                    }
                    img_h.copy_from_slice(h);
                    for i in 0..n {
                        img_v[i] = v[h_inv[i] as usize];
                    }
                }
                // S: (h, v) becomes (v^-1, h).
                _ => {
                    for (i, &x) in v.iter().enumerate() {
                        img_h[x as usize] = i as u32;
                    }
                    img_v.copy_from_slice(h);
                }
            }
            let key = canon.key(&img_h, &img_v).1;
            let j = match index.get(key) {
                Some(&j) => j,
                None => {
                    if nodes.len() >= cap {
                        return Err(Error::OrbitTooLarge { cap });
                    }
                    let j = nodes.len();
                    index.insert(key.to_vec(), j);
                    nodes.push(from_key(key));
                    j
                }
            };
            match gen {
                Generator::T => t_edge.push(j),
                _ => s_edge.push(j),
            }
        }
        k += 1;
    }
    Ok(OrbitGraph { nodes, index, t_edge, s_edge })
}
