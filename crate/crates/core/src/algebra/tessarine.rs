//! Scalar tessarines and their complex-pair image.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// The three non-trivial tessarine conjugations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Conjugation {
    /// `(r, -i, j, -k)`
    Star,
    /// `(r, i, -j, -k)`
    Iota,
    /// `(r, -i, -j, k)`
    Kappa,
}

impl Conjugation {
    pub const ALL: [Conjugation; 3] = [Conjugation::Star, Conjugation::Iota, Conjugation::Kappa];
}

/// Real part labels in storage order `r, ι, ȷ, κ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    R,
    I,
    J,
    K,
}

impl Part {
    pub const ALL: [Part; 4] = [Part::R, Part::I, Part::J, Part::K];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Part::R => "r",
            Part::I => "ι",
            Part::J => "ȷ",
            Part::K => "κ",
        }
    }
}

/// A tessarine `r + ι i + ȷ j + κ k` with `ȷ² = 1`, `ι² = κ² = -1`, `ιȷ = κ`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Tessarine {
    pub r: f64,
    pub i: f64,
    pub j: f64,
    pub k: f64,
}

/// Image of a tessarine under the idempotent basis `e± = (1 ± ȷ)/2`.
///
/// With `x = a + ȷ b`, `a = r + ι i`, `b = j + ι k`, the components are
/// `plus = a + b` and `minus = a - b`, where `ι` is identified with the complex unit.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexPair {
    pub plus: Complex64,
    pub minus: Complex64,
}

impl Tessarine {
    pub const ZERO: Tessarine = Tessarine::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Tessarine = Tessarine::new(1.0, 0.0, 0.0, 0.0);
    pub const IOTA: Tessarine = Tessarine::new(0.0, 1.0, 0.0, 0.0);
    pub const JOTA: Tessarine = Tessarine::new(0.0, 0.0, 1.0, 0.0);
    pub const KAPPA: Tessarine = Tessarine::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(r: f64, i: f64, j: f64, k: f64) -> Self {
        Tessarine { r, i, j, k }
    }

    pub const fn real(r: f64) -> Self {
        Tessarine::new(r, 0.0, 0.0, 0.0)
    }

    pub fn from_parts(parts: [f64; 4]) -> Self {
        Tessarine::new(parts[0], parts[1], parts[2], parts[3])
    }

    pub fn parts(&self) -> [f64; 4] {
        [self.r, self.i, self.j, self.k]
    }

    pub fn part(&self, p: Part) -> f64 {
        self.parts()[p.index()]
    }

    pub fn conjugate(&self, kind: Conjugation) -> Self {
        let Tessarine { r, i, j, k } = *self;
        match kind {
            Conjugation::Star => Tessarine::new(r, -i, j, -k),
            Conjugation::Iota => Tessarine::new(r, i, -j, -k),
            Conjugation::Kappa => Tessarine::new(r, -i, -j, k),
        }
    }

    pub fn star(&self) -> Self {
        self.conjugate(Conjugation::Star)
    }

    pub fn to_pair(&self) -> ComplexPair {
        let a = Complex64::new(self.r, self.i);
        let b = Complex64::new(self.j, self.k);
        ComplexPair { plus: a + b, minus: a - b }
    }

    pub fn from_pair(p: ComplexPair) -> Self {
        let a = (p.plus + p.minus) * 0.5;
        let b = (p.plus - p.minus) * 0.5;
        Tessarine::new(a.re, a.im, b.re, b.im)
    }

    /// Sum of the squared real parts; equals `Re(x x*)`.
    pub fn norm_sqr(&self) -> f64 {
        self.r * self.r + self.i * self.i + self.j * self.j + self.k * self.k
    }

    pub fn abs_max(&self) -> f64 {
        self.parts().iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn scale(&self, c: f64) -> Self {
        Tessarine::new(self.r * c, self.i * c, self.j * c, self.k * c)
    }

    /// True when the tessarine has no multiplicative inverse.
    pub fn is_zero_divisor(&self) -> bool {
        let p = self.to_pair();
        p.plus == Complex64::new(0.0, 0.0) || p.minus == Complex64::new(0.0, 0.0)
    }
}

/// Ring product by the multiplication table.
pub fn tmul(a: Tessarine, b: Tessarine) -> Tessarine {
    Tessarine::new(
        (a.r * b.r + a.j * b.j) - (a.i * b.i + a.k * b.k),
        (a.r * b.i + a.i * b.r) + (a.j * b.k + a.k * b.j),
        (a.r * b.j + a.j * b.r) - (a.i * b.k + a.k * b.i),
        (a.r * b.k + a.k * b.r) + (a.i * b.j + a.j * b.i),
    )
}

impl ComplexPair {
    pub fn new(plus: Complex64, minus: Complex64) -> Self {
        ComplexPair { plus, minus }
    }
}

impl Add for ComplexPair {
    type Output = ComplexPair;
    fn add(self, o: ComplexPair) -> ComplexPair {
        ComplexPair::new(self.plus + o.plus, self.minus + o.minus)
    }
}

impl Mul for ComplexPair {
    type Output = ComplexPair;
    fn mul(self, o: ComplexPair) -> ComplexPair {
        ComplexPair::new(self.plus * o.plus, self.minus * o.minus)
    }
}

impl Add for Tessarine {
    type Output = Tessarine;
    fn add(self, o: Tessarine) -> Tessarine {
        Tessarine::new(self.r + o.r, self.i + o.i, self.j + o.j, self.k + o.k)
    }
}

impl Sub for Tessarine {
    type Output = Tessarine;
    fn sub(self, o: Tessarine) -> Tessarine {
        Tessarine::new(self.r - o.r, self.i - o.i, self.j - o.j, self.k - o.k)
    }
}

impl Neg for Tessarine {
    type Output = Tessarine;
    fn neg(self) -> Tessarine {
        self.scale(-1.0)
    }
}

impl Mul for Tessarine {
    type Output = Tessarine;
    fn mul(self, o: Tessarine) -> Tessarine {
        tmul(self, o)
    }
}

impl Mul<f64> for Tessarine {
    type Output = Tessarine;
    fn mul(self, c: f64) -> Tessarine {
        self.scale(c)
    }
}

impl AddAssign for Tessarine {
    fn add_assign(&mut self, o: Tessarine) {
        *self = *self + o;
    }
}

impl SubAssign for Tessarine {
    fn sub_assign(&mut self, o: Tessarine) {
        *self = *self - o;
    }
}

impl From<f64> for Tessarine {
    fn from(r: f64) -> Self {
        Tessarine::real(r)
    }
}

impl fmt::Display for Tessarine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}ι{:+}ȷ{:+}κ", self.r, self.i, self.j, self.k)
    }
}
