//! Dense real polynomials in one variable (ℏ or x) and in two variables (ℏ, x).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Relative threshold below which a sum of coefficients is treated as an
/// exact cancellation.
pub const CANCEL_TOL: f64 = 1e-14;

/// Dense polynomial; `coeffs[i]` multiplies `z^i`. Trailing zeros are stripped,
/// so the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<f64>,
}

/// A polynomial in the convergence-control parameter ℏ.
pub type HbarPoly = Poly;

fn cancel_sum(a: f64, b: f64) -> f64 {
    let s = a + b;
    if s.abs() <= CANCEL_TOL * a.abs().max(b.abs()) {
        0.0
    } else {
        s
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    /// The monomial `c·z^n`.
    pub fn monomial(c: f64, n: usize) -> Self {
        let mut v = vec![0.0; n + 1];
        v[n] = c;
        Self::new(v)
    }

    /// `z`
    pub fn var() -> Self {
        Self::monomial(1.0, 1)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Lowest power with a nonzero coefficient.
    pub fn min_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0.0)
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * z + c)
    }

    pub fn scale(&self, s: f64) -> Self {
        if s == 0.0 {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Coefficients agree to `tol` relative to the larger coefficient norm.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let scale = self.max_abs().max(other.max_abs());
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n).all(|i| (self.coeff(i) - other.coeff(i)).abs() <= tol * scale)
    }

    /// Exact division by `(z + 1)` when it divides evenly (within `tol`).
    pub fn div_by_z_plus_one(&self, tol: f64) -> Option<Self> {
        let n = self.coeffs.len();
        if n < 2 {
            return None;
        }
        // synthetic division by (z - r) with r = -1
        let mut q = vec![0.0; n - 1];
        let mut carry = 0.0;
        for i in (0..n).rev() {
            let v = self.coeffs[i] + carry;
            if i == 0 {
                if v.abs() > tol * self.max_abs() {
                    return None;
                }
            } else {
                q[i - 1] = v;
                carry = -v;
            }
        }
        Some(Self::new(q))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| cancel_sum(self.coeff(i), rhs.coeff(i)))
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

/// Formats with a single-letter variable, e.g. `2x^3-3x^2-7x+3`.
pub struct PolyDisplay<'a> {
    pub poly: &'a Poly,
    pub var: &'a str,
}

pub(crate) fn fmt_coeff(c: f64) -> String {
    if c.fract() == 0.0 && c.abs() < 1e15 {
        format!("{}", c as i64)
    } else {
        let r: f64 = format!("{c:.9e}").parse().unwrap_or(c);
        format!("{r}")
    }
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.poly.coeffs.iter().enumerate().rev() {
            if c == 0.0 {
                continue;
            }
            let sign = if c < 0.0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.abs();
            let body = match i {
                0 => fmt_coeff(mag),
                _ => {
                    let mono = if i == 1 {
                        self.var.to_string()
                    } else {
                        format!("{}^{}", self.var, i)
                    };
                    if mag == 1.0 {
                        mono
                    } else {
                        format!("{}{}", fmt_coeff(mag), mono)
                    }
                }
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        Ok(())
    }
}

/// Polynomial in (ℏ, x); `rows[i][p]` multiplies `ℏ^i x^p`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BiPoly {
    rows: Vec<Poly>,
}

impl BiPoly {
    pub fn new(mut rows: Vec<Poly>) -> Self {
        while rows.last().is_some_and(Poly::is_zero) {
            rows.pop();
        }
        Self { rows }
    }

    pub fn zero() -> Self {
        Self { rows: Vec::new() }
    }

    /// `hbar(ℏ) · space(x)`
    pub fn outer(hbar: &Poly, space: &Poly) -> Self {
        Self::new(hbar.coeffs().iter().map(|&c| space.scale(c)).collect())
    }

    pub fn constant(c: f64) -> Self {
        Self::outer(&Poly::one(), &Poly::constant(c))
    }

    pub fn rows(&self) -> &[Poly] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Highest ℏ power present.
    pub fn hbar_degree(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    /// Lowest ℏ power present.
    pub fn hbar_min_degree(&self) -> Option<usize> {
        self.rows.iter().position(|r| !r.is_zero())
    }

    pub fn x_degree(&self) -> Option<usize> {
        self.rows.iter().filter_map(Poly::degree).max()
    }

    pub fn max_abs(&self) -> f64 {
        self.rows.iter().fold(0.0, |m, r| m.max(r.max_abs()))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.rows.iter().map(|r| r.scale(s)).collect())
    }

    pub fn mul_hbar(&self, p: &Poly) -> Self {
        let other = Self::outer(p, &Poly::one());
        self * &other
    }

    pub fn d_x(&self) -> Self {
        Self::new(self.rows.iter().map(Poly::derivative).collect())
    }

    /// Substitutes a numeric x, leaving a polynomial in ℏ.
    pub fn at_x(&self, x: f64) -> Poly {
        Poly::new(self.rows.iter().map(|r| r.eval(x)).collect())
    }

    pub fn eval(&self, hbar: f64, x: f64) -> f64 {
        self.at_x(x).eval(hbar)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let scale = self.max_abs().max(other.max_abs());
        let n = self.rows.len().max(other.rows.len());
        let zero = Poly::zero();
        (0..n).all(|i| {
            let a = self.rows.get(i).unwrap_or(&zero);
            let b = other.rows.get(i).unwrap_or(&zero);
            let m = a.coeffs().len().max(b.coeffs().len());
            (0..m).all(|p| (a.coeff(p) - b.coeff(p)).abs() <= tol * scale)
        })
    }

    /// Splits into `hbar(ℏ) · space(x)` when the coefficient matrix has rank one.
    ///
    /// The ℏ factor is scaled so its highest coefficient is 1; the numeric
    /// prefactor is carried by the spatial factor.
    pub fn factor(&self, tol: f64) -> Option<(Poly, Poly)> {
        if self.is_zero() {
            return None;
        }
        let top = self.rows.last()?.clone();
        let (pivot, &pc) = top
            .coeffs()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))?;
        let hbar = Poly::new(self.rows.iter().map(|r| r.coeff(pivot) / pc).collect());
        let candidate = Self::outer(&hbar, &top);
        if candidate.approx_eq(self, tol) {
            Some((hbar, top))
        } else {
            None
        }
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let n = self.rows.len().max(rhs.rows.len());
        let zero = Poly::zero();
        BiPoly::new(
            (0..n)
                .map(|i| {
                    let a = self.rows.get(i).unwrap_or(&zero);
                    let b = rhs.rows.get(i).unwrap_or(&zero);
                    a + b
                })
                .collect(),
        )
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        if self.is_zero() || rhs.is_zero() {
            return BiPoly::zero();
        }
        let mut out = vec![Poly::zero(); self.rows.len() + rhs.rows.len() - 1];
        for (i, a) in self.rows.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.rows.iter().enumerate() {
                let prod = a * b;
                out[i + j] = &out[i + j] + &prod;
            }
        }
        BiPoly::new(out)
    }
}
