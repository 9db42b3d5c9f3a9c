//! Dense bivariate polynomials `Σ c[a][b] x^a y^b`.

use crate::scalar::{factorial, Scalar};

#[derive(Clone, Debug)]
pub struct Poly2<T> {
    /// `coeffs[a][b]` multiplies `x^a y^b`; all inner vectors share a length.
    coeffs: Vec<Vec<T>>,
}

impl<T: Scalar> Poly2<T> {
    pub fn zero() -> Self {
        Self { coeffs: vec![vec![T::zero()]] }
    }

    pub fn constant(c: T) -> Self {
        Self { coeffs: vec![vec![c]] }
    }

    pub fn monomial(a: usize, b: usize, c: T) -> Self {
        let mut p = Self::with_degrees(a, b);
        p.coeffs[a][b] = c;
        p
    }

    /// `x`.
    pub fn x() -> Self {
        Self::monomial(1, 0, T::one())
    }

    /// `y`.
    pub fn y() -> Self {
        Self::monomial(0, 1, T::one())
    }

    pub fn with_degrees(dx: usize, dy: usize) -> Self {
        Self { coeffs: vec![vec![T::zero(); dy + 1]; dx + 1] }
    }

    pub fn from_coeffs(coeffs: Vec<Vec<T>>) -> Self {
        let dy = coeffs.iter().map(Vec::len).max().unwrap_or(1).max(1);
        let mut coeffs = if coeffs.is_empty() { vec![vec![T::zero()]] } else { coeffs };
        for row in &mut coeffs {
            row.resize(dy, T::zero());
        }
        Self { coeffs }
    }

    pub fn degree_x(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn degree_y(&self) -> usize {
        self.coeffs[0].len() - 1
    }

    pub fn coeff(&self, a: usize, b: usize) -> T {
        self.coeffs.get(a).and_then(|r| r.get(b)).cloned().unwrap_or_else(T::zero)
    }

    pub fn coeffs(&self) -> &[Vec<T>] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, a: usize, b: usize, c: T) {
        if a > self.degree_x() || b > self.degree_y() {
            self.grow(a.max(self.degree_x()), b.max(self.degree_y()));
        }
        self.coeffs[a][b] = c;
    }

    fn grow(&mut self, dx: usize, dy: usize) {
        for row in &mut self.coeffs {
            row.resize(dy + 1, T::zero());
        }
        self.coeffs.resize(dx + 1, vec![T::zero(); dy + 1]);
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(|c| c.is_negligible(1.0))
    }

    /// Largest `a + b` with a nonzero coefficient, `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<usize> {
        let mut best = None;
        for (a, row) in self.coeffs.iter().enumerate() {
            for (b, c) in row.iter().enumerate() {
                if !c.is_negligible(1.0) {
                    best = Some(best.map_or(a + b, |d: usize| d.max(a + b)));
                }
            }
        }
        best
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = Self::with_degrees(self.degree_x().max(rhs.degree_x()), self.degree_y().max(rhs.degree_y()));
        for (a, row) in out.coeffs.iter_mut().enumerate() {
            for (b, c) in row.iter_mut().enumerate() {
                *c = self.coeff(a, b) + rhs.coeff(a, b);
            }
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&-T::one()))
    }

    pub fn scale(&self, k: &T) -> Self {
        Self { coeffs: self.coeffs.iter().map(|r| r.iter().map(|c| c.clone() * k.clone()).collect()).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::with_degrees(self.degree_x() + rhs.degree_x(), self.degree_y() + rhs.degree_y());
        for (a1, r1) in self.coeffs.iter().enumerate() {
            for (b1, c1) in r1.iter().enumerate() {
                if c1.is_zero() {
                    continue;
                }
                for (a2, r2) in rhs.coeffs.iter().enumerate() {
                    for (b2, c2) in r2.iter().enumerate() {
                        if !c2.is_zero() {
                            let slot = &mut out.coeffs[a1 + a2][b1 + b2];
                            *slot = slot.clone() + c1.clone() * c2.clone();
                        }
                    }
                }
            }
        }
        out
    }

    pub fn powi(&self, n: usize) -> Self {
        (0..n).fold(Self::constant(T::one()), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: &T, y: &T) -> T {
        // Horner in x over Horner-in-y rows.
        self.coeffs.iter().rev().fold(T::zero(), |acc, row| {
            let ry = row.iter().rev().fold(T::zero(), |a, c| a * y.clone() + c.clone());
            acc * x.clone() + ry
        })
    }

    /// `∂^{dx+dy} / ∂x^dx ∂y^dy`.
    pub fn derivative(&self, dx: usize, dy: usize) -> Self {
        if dx > self.degree_x() || dy > self.degree_y() {
            return Self::zero();
        }
        let mut out = Self::with_degrees(self.degree_x() - dx, self.degree_y() - dy);
        for a in dx..=self.degree_x() {
            for b in dy..=self.degree_y() {
                let fa = falling(a, dx) * falling(b, dy);
                out.coeffs[a - dx][b - dy] = self.coeffs[a][b].clone() * T::from_i64(fa as i64);
            }
        }
        out
    }

    /// Value of `∂^{dx+dy}` at the origin.
    pub fn derivative_at_origin(&self, dx: usize, dy: usize) -> T {
        self.coeff(dx, dy) * factorial::<T>(dx) * factorial::<T>(dy)
    }

    /// `p(U(s,t), V(s,t))`.
    pub fn compose(&self, u: &Self, v: &Self) -> Self {
        let upow: Vec<Self> = (0..=self.degree_x()).scan(Self::constant(T::one()), |acc, i| {
            let cur = acc.clone();
            if i < self.degree_x() {
                *acc = acc.mul(u);
            }
            Some(cur)
        }).collect();
        let vpow: Vec<Self> = (0..=self.degree_y()).scan(Self::constant(T::one()), |acc, i| {
            let cur = acc.clone();
            if i < self.degree_y() {
                *acc = acc.mul(v);
            }
            Some(cur)
        }).collect();
        let mut out = Self::zero();
        for (a, row) in self.coeffs.iter().enumerate() {
            for (b, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    out = out.add(&upow[a].mul(&vpow[b]).scale(c));
                }
            }
        }
        out
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly2<U> {
        Poly2 { coeffs: self.coeffs.iter().map(|r| r.iter().map(&f).collect()).collect() }
    }
}

/// Equality of the polynomials, independent of storage size.
impl<T: Scalar> PartialEq for Poly2<T> {
    fn eq(&self, other: &Self) -> bool {
        let dx = self.degree_x().max(other.degree_x());
        let dy = self.degree_y().max(other.degree_y());
        (0..=dx).all(|a| (0..=dy).all(|b| self.coeff(a, b) == other.coeff(a, b)))
    }
}

fn falling(n: usize, k: usize) -> u64 {
    (0..k).map(|i| (n - i) as u64).product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int, Rational};

    #[test]
    fn compose_with_collapse_map() {
        // u^2 v under (s, t) -> (s, s t) is s^3 t.
        let p: Poly2<Rational> = Poly2::monomial(2, 1, rat_int(1));
        let u = Poly2::x();
        let v = Poly2::x().mul(&Poly2::y());
        let c = p.compose(&u, &v);
        assert_eq!(c.coeff(3, 1), rat_int(1));
        assert_eq!(c.total_degree(), Some(4));
    }

    #[test]
    fn derivative_matches_manual() {
        // 3 x^2 y^3 -> d/dx d2/dy2 = 36 x y
        let p: Poly2<Rational> = Poly2::monomial(2, 3, rat_int(3));
        let d = p.derivative(1, 2);
        assert_eq!(d.coeff(1, 1), rat_int(36));
        assert_eq!(d.eval(&rat(1, 2), &rat(1, 3)), rat(6, 1));
    }
}
