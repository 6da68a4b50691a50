//! Canonical representatives under simultaneous relabeling.
//!
//! Origamis are compared through the interleaved key
//! `(h(0), v(0), h(1), v(1), ..)`. For a fixed choice of the square that
//! becomes label 0, the minimal key is obtained greedily: visit labels in
//! order and give every unseen image the next free label. The canonical form
//! is the minimum over all n choices of that first square.

use std::cmp::Ordering;

use super::Origami;
use crate::perm::Permutation;

const UNSEEN: u32 = u32::MAX;

/// An origami together with the relabeling that produced it.
#[derive(Clone, Debug)]
pub struct Relabeled {
    pub origami: Origami,
    /// `sigma(old) = new`.
    pub sigma: Permutation,
}

/// Scratch buffers reused across starts.
pub(crate) struct Labeler {
    label: Vec<u32>,
    order: Vec<u32>,
}

impl Labeler {
    pub(crate) fn new(n: usize) -> Self {
        Labeler { label: vec![UNSEEN; n], order: Vec::with_capacity(n) }
    }

    /// Runs the greedy labeling from `start`, comparing against `bound`
    /// entry by entry. Returns `Greater` as soon as the key exceeds the
    /// bound (the key is then incomplete). On `Less`/`Equal`, `key` holds
    /// the full key.
    pub(crate) fn run(
        &mut self,
        h: &[u32],
        v: &[u32],
        start: usize,
        bound: Option<&[u32]>,
        key: &mut Vec<u32>,
    ) -> Ordering {
        let n = h.len();
        self.label.iter_mut().for_each(|l| *l = UNSEEN);
        self.order.clear();
        key.clear();
        self.label[start] = 0;
        self.order.push(start as u32);
        let mut next = 1u32;
        let mut state = Ordering::Equal;
        for k in 0..n {
            let s = self.order[k] as usize;
            for img in [h[s], v[s]] {
                let img = img as usize;
                if self.label[img] == UNSEEN {
                    self.label[img] = next;
                    self.order.push(img as u32);
                    next += 1;
                }
                let value = self.label[img];
                let pos = key.len();
                key.push(value);
                if state == Ordering::Equal {
                    if let Some(b) = bound {
                        match value.cmp(&b[pos]) {
                            Ordering::Greater => return Ordering::Greater,
                            Ordering::Less => state = Ordering::Less,
                            Ordering::Equal => {}
                        }
                    }
                }
            }
        }
        if bound.is_none() {
            Ordering::Less
        } else {
            state
        }
    }

    pub(crate) fn order(&self) -> &[u32] {
        &self.order
    }
}

/// Reusable buffers for computing many canonical keys of one size.
pub(crate) struct Canonicalizer {
    lab: Labeler,
    best: Vec<u32>,
    key: Vec<u32>,
}

impl Canonicalizer {
    pub(crate) fn new(n: usize) -> Self {
        Canonicalizer { lab: Labeler::new(n), best: Vec::with_capacity(2 * n), key: Vec::with_capacity(2 * n) }
    }

    /// Minimal key and the square labeled 0 in it.
    pub(crate) fn key(&mut self, h: &[u32], v: &[u32]) -> (usize, &[u32]) {
        if self.lab.label.len() != h.len() {
            *self = Canonicalizer::new(h.len());
        }
        self.lab.run(h, v, 0, None, &mut self.best);
        let mut best_start = 0;
        for s in 1..h.len() {
            if self.lab.run(h, v, s, Some(&self.best), &mut self.key) == Ordering::Less {
                std::mem::swap(&mut self.best, &mut self.key);
                best_start = s;
            }
        }
        (best_start, &self.best)
    }
}

/// Minimal key and the square labeled 0 in it.
pub(crate) fn canonical_key(h: &[u32], v: &[u32]) -> (usize, Vec<u32>) {
    let mut c = Canonicalizer::new(h.len());
    let (start, key) = c.key(h, v);
    (start, key.to_vec())
}

/// True iff the greedy labeling from square 0 is already the minimum.
pub(crate) fn is_canonical_key(h: &[u32], v: &[u32]) -> bool {
    let n = h.len();
    let mut lab = Labeler::new(n);
    let mut own = Vec::with_capacity(2 * n);
    lab.run(h, v, 0, None, &mut own);
    let mut key = Vec::with_capacity(2 * n);
    (1..n).all(|s| lab.run(h, v, s, Some(&own), &mut key) != Ordering::Less)
}

pub(crate) fn from_key(key: &[u32]) -> Origami {
    let h: Vec<u32> = key.iter().step_by(2).copied().collect();
    let v: Vec<u32> = key.iter().skip(1).step_by(2).copied().collect();
    Origami::new_unchecked(Permutation::from_images_unchecked(h), Permutation::from_images_unchecked(v))
}

impl Origami {
    /// Lexicographically minimal relabeling (interleaved key order).
    pub fn canonical_form(&self) -> Origami {
        let (_, key) = canonical_key(self.h().images(), self.v().images());
        from_key(&key)
    }

    /// Canonical form plus the relabeling `old -> new` realizing it.
    pub fn canonical_with_map(&self) -> Relabeled {
        let (h, v) = (self.h().images(), self.v().images());
        let (start, key) = canonical_key(h, v);
        let mut lab = Labeler::new(self.n());
        let mut scratch = Vec::new();
        lab.run(h, v, start, None, &mut scratch);
        let mut sigma = vec![0u32; self.n()];
        for (new, &old) in lab.order().iter().enumerate() {
            sigma[old as usize] = new as u32;
        }
        Relabeled { origami: from_key(&key), sigma: Permutation::from_images_unchecked(sigma) }
    }

    pub fn is_canonical(&self) -> bool {
        is_canonical_key(self.h().images(), self.v().images())
    }
}
