//! Square-tiled surfaces given by a pair of gluing permutations.
//!
//! Square `i` has its right neighbour at `h(i)` and its top neighbour at
//! `v(i)`. Labels are 0-based in memory and 1-based in every text format.

mod action;
pub(crate) mod canonical;
mod orbit;
mod parse;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

pub use action::{sl2z_act, Generator, SL2Matrix};
pub use canonical::Relabeled;
pub use orbit::{orbit, orbit_with_cap, OrbitGraph, DEFAULT_ORBIT_CAP};
pub use parse::parse_origami;

/// A connected square-tiled surface.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Origami {
    h: Permutation,
    v: Permutation,
}

impl Origami {
    /// Validates bijectivity (already guaranteed by the types) and transitivity.
    pub fn new(h: Permutation, v: Permutation) -> Result<Self> {
        if h.len() != v.len() {
            return Err(Error::Parse(format!("h acts on {} squares but v on {}", h.len(), v.len())));
        }
        if h.is_empty() {
            return Err(Error::Parse("an origami needs at least one square".into()));
        }
        let o = Origami { h, v };
        let components = o.component_count();
        if components != 1 {
            return Err(Error::NotTransitive { components });
        }
        Ok(o)
    }

    pub(crate) fn new_unchecked(h: Permutation, v: Permutation) -> Self {
        Origami { h, v }
    }

    /// From 0-based one-line images.
    pub fn from_images(h: Vec<u32>, v: Vec<u32>) -> Result<Self> {
        Origami::new(Permutation::from_images(h)?, Permutation::from_images(v)?)
    }

    /// The one-square torus.
    pub fn torus() -> Self {
        Origami::new_unchecked(Permutation::identity(1), Permutation::identity(1))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.h.len()
    }

    #[inline]
    pub fn h(&self) -> &Permutation {
        &self.h
    }

    #[inline]
    pub fn v(&self) -> &Permutation {
        &self.v
    }

    fn component_count(&self) -> usize {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut components = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            components += 1;
            seen[s] = true;
            stack.push(s);
            while let Some(i) = stack.pop() {
                for j in [self.h.apply(i), self.v.apply(i)] {
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        components
    }

    /// The commutator `v^-1 h^-1 v h`, applied left to right. Its cycles are
    /// the corner points of the surface: the lower-left corner of square `j`
    /// and of `c(j)` coincide.
    pub fn commutator(&self) -> Permutation {
        self.v.inverse().then(&self.h.inverse()).then(&self.v).then(&self.h)
    }

    /// Zero orders and genus.
    pub fn stratum(&self) -> Stratum {
        let mut kappa: Vec<u32> =
            self.commutator().cycle_type().into_iter().filter(|&l| l > 1).map(|l| (l - 1) as u32).collect();
        kappa.sort_unstable_by(|a, b| b.cmp(a));
        let total: u32 = kappa.iter().sum();
        debug_assert!(total.is_multiple_of(2));
        Stratum { kappa, genus: total / 2 + 1 }
    }

    pub fn genus(&self) -> usize {
        self.stratum().genus as usize
    }

    /// Rows: the cycles of `h`.
    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.h.cycles()
    }

    /// Simultaneous relabeling: square `i` becomes `sigma(i)`.
    pub fn relabel(&self, sigma: &Permutation) -> Origami {
        Origami::new_unchecked(self.h.relabel(sigma), self.v.relabel(sigma))
    }
}

impl fmt::Debug for Origami {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

impl fmt::Display for Origami {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

/// The stratum `H(kappa)` a surface lives in.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Stratum {
    /// Zero orders, sorted descending.
    pub kappa: Vec<u32>,
    pub genus: u32,
}

impl Stratum {
    /// Accepts any multiset of positive orders with even sum.
    pub fn from_kappa(mut kappa: Vec<u32>) -> Result<Self> {
        if kappa.contains(&0) {
            return Err(Error::InvalidArgument("zero orders must be positive".into()));
        }
        let total: u32 = kappa.iter().sum();
        if !total.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!("zero orders sum to {total}, which is not of the form 2g-2")));
        }
        kappa.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Stratum { kappa, genus: total / 2 + 1 })
    }

    /// `"1,1,1,1"`, `"H(2)"`, or `"0"` / `""` for the torus stratum.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let t = t.strip_prefix("H(").and_then(|s| s.strip_suffix(')')).unwrap_or(t);
        let mut kappa = Vec::new();
        for part in t.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let m: u32 = part.parse().map_err(|_| Error::InvalidArgument(format!("bad zero order {part:?}")))?;
            if m > 0 {
                kappa.push(m);
            }
        }
        Stratum::from_kappa(kappa)
    }

    pub fn torus() -> Self {
        Stratum { kappa: vec![], genus: 1 }
    }

    /// Number of zeros.
    pub fn zero_count(&self) -> usize {
        self.kappa.len()
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kappa.is_empty() {
            return write!(f, "H(0)");
        }
        let parts: Vec<String> = self.kappa.iter().map(u32::to_string).collect();
        write!(f, "H({})", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_stratum() {
        let s = Origami::torus().stratum();
        assert_eq!(s, Stratum { kappa: vec![], genus: 1 });
    }

    #[test]
    fn l_shape_is_in_h2() {
        let o = parse_origami("h=(1 2); v=(1 3)").unwrap();
        assert_eq!(o.stratum(), Stratum { kappa: vec![2], genus: 2 });
    }

    #[test]
    fn stratum_from_kappa() {
        let s = Stratum::from_kappa(vec![1, 1, 1, 1]).unwrap();
        assert_eq!(s.genus, 3);
        assert!(Stratum::from_kappa(vec![1]).is_err());
        assert_eq!(Stratum::parse("H(2,2,2)").unwrap().genus, 4);
        assert_eq!(Stratum::parse("0").unwrap(), Stratum::torus());
        assert_eq!(Stratum::parse("1,1").unwrap().to_string(), "H(1,1)");
    }

    #[test]
    fn disconnected_pair_is_rejected() {
        let h = Permutation::from_cycles(4, &[vec![0, 1]]).unwrap();
        let v = Permutation::from_cycles(4, &[vec![2, 3]]).unwrap();
        assert_eq!(Origami::new(h, v).unwrap_err(), Error::NotTransitive { components: 2 });
    }
}
