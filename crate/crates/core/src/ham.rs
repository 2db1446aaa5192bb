//! Homotopy series generation for time-fractional diffusion problems of the form
//!
//! ```text
//! D^α u = a·u_xx + b·(u_x)² + c·u·u_xx + d·u − e·u²
//! ```
//!
//! The linear operator is the Caputo derivative itself, so the m-th order
//! deformation equation reads
//! `u_m = χ_m·u_{m-1} + ℏ·J^α R_m(u_0, …, u_{m-1})`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::alpha::AlphaField;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::term::Expression;

/// Coefficients of the nonlinear operator
/// `N[u] = D^α u − a·u_xx − b·(u_x)² − c_nl·u·u_xx − d_lin·u + e_quad·u²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorCoeffs {
    pub a: f64,
    pub b: f64,
    pub c_nl: f64,
    pub d_lin: f64,
    pub e_quad: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub field: AlphaField,
    pub ops: OperatorCoeffs,
    /// Initial guess, equal to the initial condition.
    pub u0: Expression,
    /// Homogeneous Dirichlet values at x = 0 and x = L.
    pub boundary: (f64, f64),
}

impl ProblemSpec {
    pub fn new(field: AlphaField, ops: OperatorCoeffs, u0: Expression) -> Result<Self> {
        if u0.length() != field.length {
            return Err(Error::Structural(format!(
                "initial guess defined on length {} but the field on {}",
                u0.length(),
                field.length
            )));
        }
        if u0.terms().iter().any(|t| t.k > 0) {
            return Err(Error::Structural(
                "initial guess must be time-independent".into(),
            ));
        }
        Ok(Self {
            field,
            ops,
            u0,
            boundary: (0.0, 0.0),
        })
    }

    /// `D^α u = K u_xx`, `u(x, 0) = sin(πx/L)`, α = 0.8 + 0.2·xt/(LT).
    pub fn linear_benchmark(k: f64, length: f64, horizon: f64) -> Result<Self> {
        let field = AlphaField::affine(0.8, 0.2, length, horizon)?;
        Self::new(
            field,
            OperatorCoeffs {
                a: k,
                b: 0.0,
                c_nl: 0.0,
                d_lin: 0.0,
                e_quad: 0.0,
            },
            Expression::sine(length, 1.0),
        )
    }

    /// `D^α u = (u u_x)_x + u(1 − u)`, `u(x, 0) = x`, α = xt on [0, 1] × [0, T].
    pub fn nonlinear_benchmark(horizon: f64) -> Result<Self> {
        let field = AlphaField::product_xt(1.0, horizon)?;
        Self::new(
            field,
            OperatorCoeffs {
                a: 0.0,
                b: 1.0,
                c_nl: 1.0,
                d_lin: 1.0,
                e_quad: 1.0,
            },
            Expression::polynomial(1.0, &Poly::var()),
        )
    }

    pub fn length(&self) -> f64 {
        self.field.length
    }

    pub fn horizon(&self) -> f64 {
        self.field.horizon
    }

    /// `N[u]` applied to a whole expression.
    pub fn apply_operator(&self, u: &Expression) -> Result<Expression> {
        let ops = &self.ops;
        let mut r = u.caputo_d();
        if ops.a != 0.0 {
            r = r.sub(&u.d_space2()?.scale_by(ops.a))?;
        }
        if ops.b != 0.0 {
            let ux = u.d_space()?;
            r = r.sub(&ux.multiply(&ux)?.scale_by(ops.b))?;
        }
        if ops.c_nl != 0.0 {
            r = r.sub(&u.multiply(&u.d_space2()?)?.scale_by(ops.c_nl))?;
        }
        if ops.d_lin != 0.0 {
            r = r.sub(&u.scale_by(ops.d_lin))?;
        }
        if ops.e_quad != 0.0 {
            r = r.add(&u.multiply(u)?.scale_by(ops.e_quad))?;
        }
        Ok(r)
    }
}

/// Σ_{i+j=n} f(u_i)·g(u_j)
fn cauchy(
    terms: &[Expression],
    n: usize,
    f: impl Fn(&Expression) -> Result<Expression>,
    g: impl Fn(&Expression) -> Result<Expression>,
) -> Result<Expression> {
    let length = terms[0].length();
    let mut acc = Expression::zero(length);
    for i in 0..=n {
        let prod = f(&terms[i])?.multiply(&g(&terms[n - i])?)?;
        acc = acc.add(&prod)?;
    }
    Ok(acc)
}

/// The homotopy terms `u_0, …, u_M`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSolution {
    pub problem: ProblemSpec,
    terms: Vec<Expression>,
    /// Integration constants `c` of each deformation step (always 0 here).
    pub constants: Vec<f64>,
}

impl SeriesSolution {
    pub fn new(problem: ProblemSpec) -> Self {
        let u0 = problem.u0.clone();
        Self {
            problem,
            terms: vec![u0],
            constants: vec![0.0],
        }
    }

    pub fn terms(&self) -> &[Expression] {
        &self.terms
    }

    /// Highest order `M` available.
    pub fn order(&self) -> usize {
        self.terms.len() - 1
    }

    /// `R_m` built from the Cauchy products of `u_0 … u_{m-1}`.
    pub fn r_m(&self, m: usize) -> Result<Expression> {
        if m == 0 || m > self.terms.len() {
            return Err(Error::OutOfRange(format!(
                "R_{m} needs u_0..u_{} but the series has {} terms",
                m.saturating_sub(1),
                self.terms.len()
            )));
        }
        let ops = &self.problem.ops;
        let prev = &self.terms[m - 1];
        let n = m - 1;
        let mut r = prev.caputo_d();
        if ops.a != 0.0 {
            r = r.sub(&prev.d_space2()?.scale_by(ops.a))?;
        }
        if ops.b != 0.0 {
            let conv = cauchy(&self.terms, n, Expression::d_space, Expression::d_space)?;
            r = r.sub(&conv.scale_by(ops.b))?;
        }
        if ops.c_nl != 0.0 {
            let conv = cauchy(&self.terms, n, |u| Ok(u.clone()), Expression::d_space2)?;
            r = r.sub(&conv.scale_by(ops.c_nl))?;
        }
        if ops.d_lin != 0.0 {
            r = r.sub(&prev.scale_by(ops.d_lin))?;
        }
        if ops.e_quad != 0.0 {
            let conv = cauchy(&self.terms, n, |u| Ok(u.clone()), |u| Ok(u.clone()))?;
            r = r.add(&conv.scale_by(ops.e_quad))?;
        }
        Ok(r)
    }

    /// `u_m = χ_m·u_{m-1} + ℏ·J^α R_m` with `c = 0`.
    pub fn next_term(&self, m: usize) -> Result<Expression> {
        let correction = self.r_m(m)?.riemann_j().scale(&Poly::var());
        if m > 1 {
            self.terms[m - 1].add(&correction)
        } else {
            Ok(correction)
        }
    }

    /// Appends terms until the series reaches order `order`.
    pub fn extend_to(&mut self, order: usize) -> Result<()> {
        while self.terms.len() <= order {
            let m = self.terms.len();
            let u = self.next_term(m)?;
            self.terms.push(u);
            self.constants.push(0.0);
        }
        Ok(())
    }

    /// `φ_N = u_0 + … + u_{N-1}`.
    pub fn partial_sum(&self, n: usize) -> Result<Expression> {
        if n == 0 || n > self.terms.len() {
            return Err(Error::OutOfRange(format!(
                "partial sum of {n} terms from a series with {} terms",
                self.terms.len()
            )));
        }
        self.terms[..n]
            .iter()
            .try_fold(Expression::zero(self.problem.length()), |acc, u| acc.add(u))
    }

    /// One line per (m, term) in the pretty-printer notation.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (m, u) in self.terms.iter().enumerate() {
            if u.is_zero() {
                out.push_str(&format!("u{m}: 0\n"));
            }
            for t in u.terms() {
                out.push_str(&format!("u{m}: {t}\n"));
            }
        }
        out
    }
}

/// Builds `u_0 … u_M`.
pub fn generate_series(problem: &ProblemSpec, order: usize) -> Result<SeriesSolution> {
    if order == 0 {
        return Err(Error::OutOfRange("series order must be at least 1".into()));
    }
    let mut s = SeriesSolution::new(problem.clone());
    s.extend_to(order)?;
    Ok(s)
}

/// `π²K/L²`, the decay rate of the sine mode in the linear benchmark.
pub fn sine_decay_rate(k: f64, length: f64) -> f64 {
    k * (PI / length).powi(2)
}
