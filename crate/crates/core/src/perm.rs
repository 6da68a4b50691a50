use std::fmt;

use crate::error::{Error, Result};

/// A bijection of `{0, .., n-1}` stored as its one-line image.
///
/// Composition reads left to right: `a.then(&b)` sends `i` to `b(a(i))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n as u32).collect() }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n {
                return Err(Error::NotBijection(format!("image {} out of range 1..={}", x + 1, n)));
            }
            if seen[x] {
                return Err(Error::NotBijection(format!("image {} repeated", x + 1)));
            }
            seen[x] = true;
        }
        Ok(Permutation { images })
    }

    /// Caller guarantees bijectivity.
    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Permutation::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    /// Builds a permutation from disjoint cycles over `{0, .., n-1}`.
    pub fn from_cycles(n: usize, cycles: &[Vec<u32>]) -> Result<Self> {
        let mut images: Vec<Option<u32>> = vec![None; n];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                let y = cycle[(k + 1) % cycle.len()];
                if x as usize >= n {
                    return Err(Error::NotBijection(format!("label {} out of range", x + 1)));
                }
                if images[x as usize].is_some() {
                    return Err(Error::NotBijection(format!("label {} appears twice", x + 1)));
                }
                images[x as usize] = Some(y);
            }
        }
        let images = images.into_iter().enumerate().map(|(i, y)| y.unwrap_or(i as u32)).collect();
        Permutation::from_images(images)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// `i -> other(self(i))`.
    pub fn then(&self, other: &Permutation) -> Self {
        Permutation { images: self.images.iter().map(|&x| other.images[x as usize]).collect() }
    }

    /// Integer power, negative exponents allowed.
    pub fn pow(&self, e: i64) -> Self {
        let n = self.len();
        let mut images = vec![0u32; n];
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let cycle = self.cycle_from(start);
            let len = cycle.len() as i64;
            let shift = e.rem_euclid(len) as usize;
            for (k, &x) in cycle.iter().enumerate() {
                seen[x as usize] = true;
                images[x as usize] = cycle[(k + shift) % cycle.len()];
            }
        }
        Permutation { images }
    }

    fn cycle_from(&self, start: usize) -> Vec<u32> {
        let mut cycle = vec![start as u32];
        let mut x = self.apply(start);
        while x != start {
            cycle.push(x as u32);
            x = self.apply(x);
        }
        cycle
    }

    /// Cycles in order of their smallest element, each starting there.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let cycle = self.cycle_from(start);
            for &x in &cycle {
                seen[x as usize] = true;
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths, sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `sigma^-1 . self . sigma` in the left-to-right sense, i.e. the permutation
    /// that acts on relabeled points: `sigma(i) -> sigma(self(i))`.
    pub fn relabel(&self, sigma: &Permutation) -> Self {
        let mut images = vec![0u32; self.len()];
        for i in 0..self.len() {
            images[sigma.apply(i)] = sigma.images[self.apply(i)];
        }
        Permutation { images }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in self.cycles() {
            write!(f, "(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}
