//! Exhaustive enumeration of origamis up to relabeling by orderly
//! generation: only keys that are the greedy labeling from square 0 are
//! built, and a leaf is kept when no other start gives a smaller key.

use crate::origami::canonical::is_canonical_key;
use crate::origami::{Origami, Stratum};
use crate::perm::Permutation;

const UNSET: u32 = u32::MAX;

/// Reusable buffers for the commutator cycle type.
pub(crate) struct StratumTest {
    kappa: Vec<u32>,
    hinv: Vec<u32>,
    vinv: Vec<u32>,
    seen: Vec<bool>,
    orders: Vec<u32>,
}

impl StratumTest {
    pub(crate) fn new(s: &Stratum, n: usize) -> Self {
        StratumTest {
            kappa: s.kappa.clone(),
            hinv: vec![0; n],
            vinv: vec![0; n],
            seen: vec![false; n],
            orders: Vec::with_capacity(n),
        }
    }

    /// Whether the commutator of `(h, v)` has the cycle type of the stratum.
    pub(crate) fn matches(&mut self, h: &[u32], v: &[u32]) -> bool {
        let n = h.len();
        for i in 0..n {
            self.hinv[h[i] as usize] = i as u32;
            self.vinv[v[i] as usize] = i as u32;
            self.seen[i] = false;
        }
        self.orders.clear();
        let budget: u32 = self.kappa.iter().sum();
        let mut used = 0u32;
        for s in 0..n {
            if self.seen[s] {
                continue;
            }
            let mut len = 0u32;
            let mut x = s;
            while !self.seen[x] {
                self.seen[x] = true;
                len += 1;
                let a = self.vinv[x] as usize;
                let b = self.hinv[a] as usize;
                let c = v[b] as usize;
                x = h[c] as usize;
            }
            if len > 1 {
                used += len - 1;
                if used > budget {
                    return false;
                }
                self.orders.push(len - 1);
            }
        }
        if used != budget || self.orders.len() != self.kappa.len() {
            return false;
        }
        self.orders.sort_unstable_by(|a, b| b.cmp(a));
        self.orders == self.kappa
    }
}

struct Orderly<'a, F: FnMut(&Origami)> {
    n: usize,
    h: Vec<u32>,
    v: Vec<u32>,
    h_used: Vec<bool>,
    v_used: Vec<bool>,
    test: Option<StratumTest>,
    emit: &'a mut F,
}

impl<F: FnMut(&Origami)> Orderly<'_, F> {
    fn go(&mut self, pos: usize, next: usize) {
        if pos == 2 * self.n {
            if let Some(t) = self.test.as_mut() {
                if !t.matches(&self.h, &self.v) {
                    return;
                }
            }
            if is_canonical_key(&self.h, &self.v) {
                let o = Origami::new_unchecked(
                    Permutation::from_images_unchecked(self.h.clone()),
                    Permutation::from_images_unchecked(self.v.clone()),
                );
                (self.emit)(&o);
            }
            return;
        }
        let square = pos / 2;
        if square >= next {
            return; // square not reachable: the pair would be disconnected
        }
        let vertical = pos % 2 == 1;
        let limit = if next < self.n { next + 1 } else { next };
        for label in 0..limit {
            let used = if vertical { &mut self.v_used } else { &mut self.h_used };
            if used[label] {
                continue;
            }
            used[label] = true;
            if vertical {
                self.v[square] = label as u32;
            } else {
                self.h[square] = label as u32;
            }
            let next2 = if label == next { next + 1 } else { next };
            self.go(pos + 1, next2);
            let used = if vertical { &mut self.v_used } else { &mut self.h_used };
            used[label] = false;
        }
        if vertical {
            self.v[square] = UNSET;
        } else {
            self.h[square] = UNSET;
        }
    }
}

/// Calls `emit` once per connected origami with `n` squares, up to
/// relabeling, in canonical form and deterministic order; restricted to a
/// stratum when one is given.
pub fn for_each_origami<F: FnMut(&Origami)>(n: usize, stratum: Option<&Stratum>, mut emit: F) {
    if n == 0 {
        return;
    }
    let mut state = Orderly {
        n,
        h: vec![UNSET; n],
        v: vec![UNSET; n],
        h_used: vec![false; n],
        v_used: vec![false; n],
        test: stratum.map(|s| StratumTest::new(s, n)),
        emit: &mut emit,
    };
    state.go(0, 1);
}

/// Collected form of [`for_each_origami`].
pub fn enumerate_origamis(n: usize, stratum: Option<&Stratum>) -> Vec<Origami> {
    let mut out = Vec::new();
    for_each_origami(n, stratum, |o| out.push(o.clone()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::origami::parse_origami;

    #[test]
    fn small_counts() {
        // Conjugacy classes of transitive pairs: 1, 3, 7, 26.
        let counts: Vec<usize> = (1..=4).map(|n| enumerate_origamis(n, None).len()).collect();
        assert_eq!(counts, vec![1, 3, 7, 26]);
    }

    #[test]
    fn outputs_are_canonical_and_distinct() {
        let all = enumerate_origamis(4, None);
        for o in &all {
            assert_eq!(&o.canonical_form(), o);
        }
        let mut sorted = all.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), all.len());
    }

    #[test]
    fn stratum_filter() {
        let h2 = Stratum::parse("2").unwrap();
        let l = parse_origami("h=(1 2); v=(1 3)").unwrap().canonical_form();
        let found = enumerate_origamis(3, Some(&h2));
        assert!(found.contains(&l));
        assert!(found.iter().all(|o| o.stratum() == h2));
        assert_eq!(enumerate_origamis(1, Some(&Stratum::torus())).len(), 1);
    }
}
