//! The action of SL2(Z) on square-tiled surfaces.
//!
//! `T = [[1,1],[0,1]]` shears horizontally, `S = [[0,-1],[1,0]]` rotates by a
//! quarter turn. Square labels are carried along: square `i` of the image is
//! the cell whose lower-left corner and bottom edge come from square `i`
//! (for `T`, `T^-1`) or the rotated copy of square `i` (for `S`, `S^-1`).

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use super::Origami;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    T,
    S,
    TInv,
    SInv,
}

impl Generator {
    pub fn matrix(self) -> SL2Matrix {
        match self {
            Generator::T => SL2Matrix::new(1, 1, 0, 1),
            Generator::TInv => SL2Matrix::new(1, -1, 0, 1),
            Generator::S => SL2Matrix::new(0, -1, 1, 0),
            Generator::SInv => SL2Matrix::new(0, 1, -1, 0),
        }
    }

    pub fn inverse(self) -> Generator {
        match self {
            Generator::T => Generator::TInv,
            Generator::TInv => Generator::T,
            Generator::S => Generator::SInv,
            Generator::SInv => Generator::S,
        }
    }

    pub fn parse(s: &str) -> Result<Generator> {
        match s {
            "T" | "t" => Ok(Generator::T),
            "S" | "s" => Ok(Generator::S),
            "T-1" | "Tinv" | "t-1" => Ok(Generator::TInv),
            "S-1" | "Sinv" | "s-1" => Ok(Generator::SInv),
            other => Err(Error::InvalidArgument(format!("unknown generator {other:?}"))),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Generator::T => "T",
            Generator::S => "S",
            Generator::TInv => "T-1",
            Generator::SInv => "S-1",
        };
        f.write_str(s)
    }
}

/// A 2x2 integer matrix of determinant one, `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SL2Matrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl SL2Matrix {
    pub const IDENTITY: SL2Matrix = SL2Matrix { a: 1, b: 0, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        SL2Matrix { a, b, c, d }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    /// Matrix of a word whose first letter is applied first.
    pub fn of_word(word: &[Generator]) -> SL2Matrix {
        word.iter().fold(SL2Matrix::IDENTITY, |acc, g| g.matrix() * acc)
    }

    /// A word (first letter applied first) whose matrix is `self`.
    pub fn word(&self) -> Vec<Generator> {
        assert_eq!(self.det(), 1, "not in SL2(Z)");
        let mut m = *self;
        // Letters X_1, X_2, .. with X_k .. X_1 * self = I.
        let mut reducers: Vec<Generator> = Vec::new();
        let push_shear = |reducers: &mut Vec<Generator>, m: &mut SL2Matrix, k: i64| {
            // left-multiply by T^-k
            let g = if k > 0 { Generator::TInv } else { Generator::T };
            for _ in 0..k.unsigned_abs() {
                reducers.push(g);
                *m = g.matrix() * *m;
            }
        };
        while m.c != 0 {
            let k = m.a / m.c;
            push_shear(&mut reducers, &mut m, k);
            reducers.push(Generator::S);
            m = Generator::S.matrix() * m;
        }
        if m.a == -1 {
            for _ in 0..2 {
                reducers.push(Generator::S);
                m = Generator::S.matrix() * m;
            }
        }
        let k = m.b;
        push_shear(&mut reducers, &mut m, k);
        debug_assert_eq!(m, SL2Matrix::IDENTITY);
        reducers.iter().rev().map(|g| g.inverse()).collect()
    }

    /// A matrix sending the primitive vector `(x, y)` to `(1, 0)`.
    pub fn to_horizontal(x: i64, y: i64) -> Result<SL2Matrix> {
        let (g, s, t) = ext_gcd(x, y);
        if g.abs() != 1 {
            return Err(Error::InvalidArgument(format!("direction ({x}, {y}) is not primitive")));
        }
        // s*x + t*y = g = +-1; rows (s, t)*g and (-y, x) give det = 1.
        Ok(SL2Matrix::new(s * g, t * g, -y, x))
    }
}

impl Mul for SL2Matrix {
    type Output = SL2Matrix;
    fn mul(self, r: SL2Matrix) -> SL2Matrix {
        SL2Matrix {
            a: self.a * r.a + self.b * r.c,
            b: self.a * r.b + self.b * r.d,
            c: self.c * r.a + self.d * r.c,
            d: self.c * r.b + self.d * r.d,
        }
    }
}

/// `(g, s, t)` with `s*a + t*b = g`, `g` a gcd (sign follows the algorithm).
pub(crate) fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, s, t) = ext_gcd(b, a % b);
        (g, t, s - (a / b) * t)
    }
}

/// Applies one generator.
pub fn sl2z_act(gen: Generator, o: &Origami) -> Origami {
    match gen {
        Generator::T => o.shear_upper(1),
        Generator::TInv => o.shear_upper(-1),
        Generator::S => Origami::new_unchecked(o.v().inverse(), o.h().clone()),
        Generator::SInv => Origami::new_unchecked(o.v().clone(), o.h().inverse()),
    }
}

impl Origami {
    /// `T^m`: rows are kept, the top neighbour of square `i` becomes
    /// `v(h^-m(i))`.
    pub fn shear_upper(&self, m: i64) -> Origami {
        Origami::new_unchecked(self.h().clone(), self.h().pow(-m).then(self.v()))
    }

    /// `[[1,0],[m,1]]` computed directly: columns are kept, the right
    /// neighbour of square `i` becomes `h(v^-m(i))`.
    pub fn shear_lower(&self, m: i64) -> Origami {
        Origami::new_unchecked(self.v().pow(-m).then(self.h()), self.v().clone())
    }

    pub fn act(&self, gen: Generator) -> Origami {
        sl2z_act(gen, self)
    }

    /// Applies a word, first letter first.
    pub fn act_word(&self, word: &[Generator]) -> Origami {
        word.iter().fold(self.clone(), |o, &g| sl2z_act(g, &o))
    }
}
