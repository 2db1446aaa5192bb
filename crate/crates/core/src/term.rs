//! Symbolic algebra for homotopy series terms.
//!
//! Every term has the shape
//!
//! ```text
//! C(ℏ, x) · sin(πx/L)^s · ∏Γ(1+nᵢα) / ∏Γ(1+dⱼα) · t^{kα}
//! ```
//!
//! with `C` a polynomial in ℏ and x, `s ∈ {0, 1}` and α = α(x, t). The order
//! field is treated as a pointwise parameter: time operators act on
//! `t^{kα}` by the constant-order power rules and spatial derivatives do not
//! differentiate through α.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use crate::alpha::AlphaField;
use crate::error::{Error, Result};
use crate::gammafn::{digamma, gamma_ratio, trigamma};
use crate::poly::{fmt_coeff, BiPoly, HbarPoly, Poly, PolyDisplay};

/// Formal ratio `∏Γ(1+nᵢα) / ∏Γ(1+dⱼα)` over positive integer multipliers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct GammaSignature {
    num: Vec<u32>,
    den: Vec<u32>,
}

impl GammaSignature {
    /// Sorts both multisets, cancels common factors and drops `Γ(1) = 1`.
    pub fn new(mut num: Vec<u32>, mut den: Vec<u32>) -> Self {
        num.retain(|&n| n != 0);
        den.retain(|&n| n != 0);
        num.sort_unstable();
        den.sort_unstable();
        let (mut n_out, mut d_out) = (Vec::new(), Vec::new());
        let (mut i, mut j) = (0, 0);
        while i < num.len() && j < den.len() {
            match num[i].cmp(&den[j]) {
                Ordering::Less => {
                    n_out.push(num[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    d_out.push(den[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        n_out.extend_from_slice(&num[i..]);
        d_out.extend_from_slice(&den[j..]);
        Self {
            num: n_out,
            den: d_out,
        }
    }

    pub fn one() -> Self {
        Self::default()
    }

    /// `1/Γ(1+kα)`, the signature of `t^{kα}/Γ(1+kα)`.
    pub fn phi(k: u32) -> Self {
        Self::new(vec![], vec![k])
    }

    pub fn numerator(&self) -> &[u32] {
        &self.num
    }

    pub fn denominator(&self) -> &[u32] {
        &self.den
    }

    pub fn times(&self, other: &Self) -> Self {
        let num = self.num.iter().chain(&other.num).copied().collect();
        let den = self.den.iter().chain(&other.den).copied().collect();
        Self::new(num, den)
    }

    pub fn value(&self, alpha: f64) -> Result<f64> {
        if self.num.is_empty() && self.den.is_empty() {
            return Ok(1.0);
        }
        let arg = |n: &u32| 1.0 + *n as f64 * alpha;
        let num: Vec<f64> = self.num.iter().map(arg).collect();
        let den: Vec<f64> = self.den.iter().map(arg).collect();
        gamma_ratio(&num, &den)
    }

    /// First and second α-derivatives of the log of the ratio.
    pub fn log_derivatives(&self, alpha: f64) -> Result<(f64, f64)> {
        let (mut d1, mut d2) = (0.0, 0.0);
        for (ms, sign) in [(&self.num, 1.0), (&self.den, -1.0)] {
            for &n in ms.iter() {
                let n = n as f64;
                d1 += sign * n * digamma(1.0 + n * alpha)?;
                d2 += sign * n * n * trigamma(1.0 + n * alpha)?;
            }
        }
        Ok((d1, d2))
    }
}

fn gamma_factor(n: u32) -> String {
    match n {
        1 => "G(1+a)".to_string(),
        _ => format!("G(1+{n}a)"),
    }
}

fn grouped(ms: &[u32]) -> Vec<String> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < ms.len() {
        let j = i + ms[i..].iter().take_while(|&&m| m == ms[i]).count();
        let base = gamma_factor(ms[i]);
        out.push(if j - i > 1 {
            format!("{base}^{}", j - i)
        } else {
            base
        });
        i = j;
    }
    out
}

/// One additive atom of a series term.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    /// Coefficient polynomial in (ℏ, x).
    pub coeff: BiPoly,
    /// Carries the factor `sin(πx/L)`.
    pub sine: bool,
    pub gamma: GammaSignature,
    /// Time factor `t^{kα}`.
    pub k: u32,
}

impl Term {
    pub fn new(coeff: BiPoly, sine: bool, gamma: GammaSignature, k: u32) -> Self {
        Self {
            coeff,
            sine,
            gamma,
            k,
        }
    }

    /// `hbar(ℏ) · space(x) · sin^s · t^{kα}/Γ(1+kα)`
    pub fn phi(hbar: &HbarPoly, space: &Poly, sine: bool, k: u32) -> Self {
        Self::new(BiPoly::outer(hbar, space), sine, GammaSignature::phi(k), k)
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    fn key_cmp(&self, other: &Self) -> Ordering {
        self.k
            .cmp(&other.k)
            .then_with(|| self.gamma.cmp(&other.gamma))
            .then_with(|| self.sine.cmp(&other.sine))
    }

    fn same_key(&self, other: &Self) -> bool {
        self.key_cmp(other) == Ordering::Equal
    }

    fn time_part(&self) -> Option<String> {
        let mut s = String::new();
        match self.k {
            0 => {}
            1 => s.push_str("t^a"),
            k => s.push_str(&format!("t^{{{k}a}}")),
        }
        if !self.gamma.num.is_empty() {
            if !s.is_empty() {
                s.push('*');
            }
            s.push_str(&grouped(&self.gamma.num).join("*"));
        }
        if !self.gamma.den.is_empty() {
            if s.is_empty() {
                s.push('1');
            }
            let den = grouped(&self.gamma.den);
            if den.len() == 1 {
                s.push_str(&format!("/{}", den[0]));
            } else {
                s.push_str(&format!("/({})", den.join("*")));
            }
        }
        (!s.is_empty()).then_some(s)
    }
}

/// Writes an ℏ polynomial as `h^b(h+1)^a·rest`.
fn render_hbar(p: &Poly) -> String {
    let shift = p.min_degree().unwrap_or(0);
    let mut rest = Poly::new(p.coeffs()[shift..].to_vec());
    let mut plus_one = 0;
    while let Some(q) = rest.div_by_z_plus_one(1e-12) {
        rest = q;
        plus_one += 1;
    }
    let mut parts = Vec::new();
    match shift {
        0 => {}
        1 => parts.push("h".to_string()),
        b => parts.push(format!("h^{b}")),
    }
    match plus_one {
        0 => {}
        1 => parts.push("(h+1)".to_string()),
        a => parts.push(format!("(h+1)^{a}")),
    }
    if rest.degree().unwrap_or(0) > 0 {
        parts.push(format!(
            "({})",
            PolyDisplay {
                poly: &rest,
                var: "h"
            }
        ));
    } else if rest.coeff(0) != 1.0 {
        parts.insert(0, fmt_coeff(rest.coeff(0)));
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.concat()
    }
}

fn render_space(p: &Poly) -> String {
    if p.degree() == Some(0) {
        fmt_coeff(p.coeff(0))
    } else {
        format!("({})", PolyDisplay { poly: p, var: "x" })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors: Vec<String> = Vec::new();
        match self.coeff.factor(1e-12) {
            Some((h, x)) => {
                let hs = render_hbar(&h);
                if hs != "1" {
                    factors.push(hs);
                }
                let xs = render_space(&x);
                if xs != "1" || factors.is_empty() {
                    factors.push(xs);
                }
            }
            None => {
                let pieces: Vec<String> = self
                    .coeff
                    .rows()
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| !r.is_zero())
                    .map(|(i, r)| {
                        let h = match i {
                            0 => String::new(),
                            1 => "h*".to_string(),
                            _ => format!("h^{i}*"),
                        };
                        format!("{h}{}", render_space(r))
                    })
                    .collect();
                factors.push(format!("[{}]", pieces.join(" + ")));
            }
        }
        if self.sine {
            factors.push("sin(pi x/L)".to_string());
        }
        if let Some(tp) = self.time_part() {
            factors.push(tp);
        }
        write!(f, "{}", factors.join(" * "))
    }
}

/// A canonical sum of [`Term`]s over a spatial interval of length `L`.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    length: f64,
    terms: Vec<Term>,
}

/// `sin(π r)` with exact zeros at integer `r`.
fn sin_pi(r: f64) -> f64 {
    if r.fract() == 0.0 {
        0.0
    } else {
        (PI * r).sin()
    }
}

impl Expression {
    /// Builds a canonical expression.
    pub fn new(length: f64, terms: Vec<Term>) -> Self {
        Self::raw(length, terms).canonicalize()
    }

    /// Keeps the terms as given, without merging or sorting.
    pub fn raw(length: f64, terms: Vec<Term>) -> Self {
        Self { length, terms }
    }

    pub fn zero(length: f64) -> Self {
        Self::raw(length, Vec::new())
    }

    /// The time-independent constant `c`.
    pub fn constant(length: f64, c: f64) -> Self {
        Self::new(
            length,
            vec![Term::new(
                BiPoly::constant(c),
                false,
                GammaSignature::one(),
                0,
            )],
        )
    }

    /// A time-independent polynomial in x.
    pub fn polynomial(length: f64, p: &Poly) -> Self {
        Self::new(
            length,
            vec![Term::new(
                BiPoly::outer(&Poly::one(), p),
                false,
                GammaSignature::one(),
                0,
            )],
        )
    }

    /// `c·sin(πx/L)`
    pub fn sine(length: f64, c: f64) -> Self {
        Self::new(
            length,
            vec![Term::new(
                BiPoly::constant(c),
                true,
                GammaSignature::one(),
                0,
            )],
        )
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Merges terms with equal (k, signature, sine) keys, drops zero terms and
    /// sorts.
    pub fn canonicalize(self) -> Self {
        let mut terms: Vec<Term> = self.terms.into_iter().filter(|t| !t.is_zero()).collect();
        terms.sort_by(Term::key_cmp);
        let mut merged: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(last) if last.same_key(&t) => last.coeff = &last.coeff + &t.coeff,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| !t.is_zero());
        Self {
            length: self.length,
            terms: merged,
        }
    }

    fn check_length(&self, other: &Self) -> Result<()> {
        if self.length != other.length {
            return Err(Error::Structural(format!(
                "expressions over different lengths {} and {}",
                self.length, other.length
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_length(other)?;
        let terms = self.terms.iter().chain(&other.terms).cloned().collect();
        Ok(Self::new(self.length, terms))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale_by(-1.0))
    }

    /// Multiplies every coefficient by a polynomial in ℏ.
    pub fn scale(&self, p: &HbarPoly) -> Self {
        self.map_terms(|t| Term {
            coeff: t.coeff.mul_hbar(p),
            ..t.clone()
        })
    }

    /// Multiplies by a real constant.
    pub fn scale_by(&self, s: f64) -> Self {
        self.map_terms(|t| Term {
            coeff: t.coeff.scale(s),
            ..t.clone()
        })
    }

    fn map_terms(&self, f: impl Fn(&Term) -> Term) -> Self {
        Self::new(self.length, self.terms.iter().map(f).collect())
    }

    fn try_map_terms(&self, f: impl Fn(&Term) -> Result<Option<Term>>) -> Result<Self> {
        let mut out = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            if let Some(nt) = f(t)? {
                out.push(nt);
            }
        }
        Ok(Self::new(self.length, out))
    }

    /// Distributed product. Fails if two sine-carrying terms meet.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_length(other)?;
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                if a.sine && b.sine {
                    return Err(Error::UnsupportedBasis(
                        "product of two sin(pi x/L) factors".into(),
                    ));
                }
                out.push(Term {
                    coeff: &a.coeff * &b.coeff,
                    sine: a.sine || b.sine,
                    gamma: a.gamma.times(&b.gamma),
                    k: a.k + b.k,
                });
            }
        }
        Ok(Self::new(self.length, out))
    }

    /// ∂/∂x of polynomial terms.
    pub fn d_space(&self) -> Result<Self> {
        self.try_map_terms(|t| {
            if t.sine {
                return Err(Error::UnsupportedBasis(
                    "first x-derivative of a sin(pi x/L) term".into(),
                ));
            }
            Ok(Some(Term {
                coeff: t.coeff.d_x(),
                ..t.clone()
            }))
        })
    }

    /// ∂²/∂x². Sine terms must have an x-independent coefficient.
    pub fn d_space2(&self) -> Result<Self> {
        let wave = -(PI / self.length).powi(2);
        self.try_map_terms(|t| {
            if t.sine {
                if t.coeff.x_degree().unwrap_or(0) > 0 {
                    return Err(Error::UnsupportedBasis(
                        "second x-derivative of a polynomial times sin(pi x/L)".into(),
                    ));
                }
                return Ok(Some(Term {
                    coeff: t.coeff.scale(wave),
                    ..t.clone()
                }));
            }
            Ok(Some(Term {
                coeff: t.coeff.d_x().d_x(),
                ..t.clone()
            }))
        })
    }

    /// Caputo derivative in time: `D t^{kα} = Γ(1+kα)/Γ(1+(k-1)α) t^{(k-1)α}`.
    pub fn caputo_d(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.k > 0)
            .map(|t| Term {
                gamma: t
                    .gamma
                    .times(&GammaSignature::new(vec![t.k], vec![t.k - 1])),
                k: t.k - 1,
                ..t.clone()
            })
            .collect();
        Self::new(self.length, terms)
    }

    /// Riemann-Liouville integral in time: `J t^{kα} = Γ(1+kα)/Γ(1+(k+1)α) t^{(k+1)α}`.
    pub fn riemann_j(&self) -> Self {
        self.map_terms(|t| Term {
            gamma: t
                .gamma
                .times(&GammaSignature::new(vec![t.k], vec![t.k + 1])),
            k: t.k + 1,
            ..t.clone()
        })
    }

    /// Value at `(x, t)` as a polynomial in ℏ, with α taken from the field.
    pub fn evaluate(&self, field: &AlphaField, x: f64, t: f64) -> Result<HbarPoly> {
        let alpha = field.eval(x, t)?;
        self.evaluate_with_alpha(alpha, x, t)
    }

    /// Value at `(x, t)` for a given order α.
    ///
    /// At `t = 0` the time factor `t^{kα}` is 1 for `k = 0`, 0 for `k ≥ 1`
    /// with `α > 0`, and 1 for `k ≥ 1` with `α = 0` (the limit along
    /// `t^{k·xt}`).
    pub fn evaluate_with_alpha(&self, alpha: f64, x: f64, t: f64) -> Result<HbarPoly> {
        if !(alpha.is_finite() && alpha >= 0.0) || t < 0.0 || !x.is_finite() || !t.is_finite() {
            return Err(Error::Domain(format!(
                "cannot evaluate at x = {x}, t = {t}, alpha = {alpha}"
            )));
        }
        let wave = sin_pi(x / self.length);
        let mut acc = Poly::zero();
        for term in &self.terms {
            let time = match (term.k, t == 0.0) {
                (0, _) => 1.0,
                (_, false) => t.powf(term.k as f64 * alpha),
                (_, true) if alpha > 0.0 => 0.0,
                (_, true) => 1.0,
            };
            let mut factor = time * term.gamma.value(alpha)?;
            if term.sine {
                factor *= wave;
            }
            if factor == 0.0 {
                continue;
            }
            acc = &acc + &term.coeff.at_x(x).scale(factor);
        }
        Ok(acc)
    }

    /// Value and first two x-derivatives at `(x, t)`, with the order allowed
    /// to vary in x: `alpha_x` is ∂α/∂x and ∂²α/∂x² is taken as zero. With
    /// `alpha_x = 0` this is the frozen-exponent convention.
    pub fn evaluate_jet(&self, alpha: f64, alpha_x: f64, x: f64, t: f64) -> Result<[HbarPoly; 3]> {
        if !(alpha.is_finite() && alpha >= 0.0 && alpha_x.is_finite())
            || t < 0.0
            || !x.is_finite()
            || !t.is_finite()
        {
            return Err(Error::Domain(format!(
                "cannot evaluate at x = {x}, t = {t}, alpha = {alpha}"
            )));
        }
        let w = PI / self.length;
        let (s0, s1, s2) = {
            let s = sin_pi(x / self.length);
            (s, w * (w * x).cos(), -w * w * s)
        };
        // t ln t -> 0, and every supported field has alpha_x = 0 at t = 0
        let ln_t = if t > 0.0 { t.ln() } else { 0.0 };
        let mut out = [Poly::zero(), Poly::zero(), Poly::zero()];
        for term in &self.terms {
            let time = match (term.k, t == 0.0) {
                (0, _) => 1.0,
                (_, false) => t.powf(term.k as f64 * alpha),
                (_, true) if alpha > 0.0 => 0.0,
                (_, true) => 1.0,
            };
            let g0 = time * term.gamma.value(alpha)?;
            if g0 == 0.0 {
                continue;
            }
            let (l1, l2) = term.gamma.log_derivatives(alpha)?;
            let rate = (l1 + term.k as f64 * ln_t) * alpha_x;
            let g1 = g0 * rate;
            let g2 = g0 * (rate * rate + l2 * alpha_x * alpha_x);
            let (f0, f1, f2) = if term.sine {
                (
                    s0 * g0,
                    s1 * g0 + s0 * g1,
                    s2 * g0 + 2.0 * s1 * g1 + s0 * g2,
                )
            } else {
                (g0, g1, g2)
            };
            let c0 = term.coeff.at_x(x);
            let dc = term.coeff.d_x();
            let c1 = dc.at_x(x);
            let c2 = dc.d_x().at_x(x);
            out[0] = &out[0] + &c0.scale(f0);
            out[1] = &out[1] + &(&c1.scale(f0) + &c0.scale(f1));
            out[2] = &out[2] + &(&(&c2.scale(f0) + &c1.scale(2.0 * f1)) + &c0.scale(f2));
        }
        Ok(out)
    }

    /// Term-by-term comparison with relative tolerance on the coefficients.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.length == other.length
            && self.terms.len() == other.terms.len()
            && self
                .terms
                .iter()
                .zip(&other.terms)
                .all(|(a, b)| a.same_key(b) && a.coeff.approx_eq(&b.coeff, tol))
    }

    /// Largest ℏ power over all terms.
    pub fn hbar_degree(&self) -> Option<usize> {
        self.terms
            .iter()
            .filter_map(|t| t.coeff.hbar_degree())
            .max()
    }

    /// Smallest ℏ power over all terms.
    pub fn hbar_min_degree(&self) -> Option<usize> {
        self.terms
            .iter()
            .filter_map(|t| t.coeff.hbar_min_degree())
            .min()
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(Term::to_string).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gammafn::gamma;

    const L: f64 = 1.0;

    fn phi_term(c: f64, sine: bool, k: u32) -> Term {
        Term::phi(&Poly::one(), &Poly::constant(c), sine, k)
    }

    fn phi(k: u32) -> Expression {
        Expression::new(L, vec![phi_term(1.0, false, k)])
    }

    fn hbar() -> Poly {
        Poly::var()
    }

    #[test]
    fn signature_canonical() {
        let g = GammaSignature::new(vec![3, 0, 1], vec![1, 2, 0, 2]);
        assert_eq!(g.numerator(), &[3]);
        assert_eq!(g.denominator(), &[2, 2]);
        assert_eq!(GammaSignature::new(vec![2], vec![2]), GammaSignature::one());
    }

    #[test]
    fn canonicalize_merges_like_terms() {
        let e = Expression::raw(L, vec![phi_term(2.0, true, 1), phi_term(3.0, true, 1)]);
        let c = e.canonicalize();
        assert_eq!(c.terms().len(), 1);
        assert!(c.approx_eq(&Expression::new(L, vec![phi_term(5.0, true, 1)]), 0.0));
    }

    #[test]
    fn canonicalize_drops_zero_and_is_idempotent() {
        let e = Expression::raw(L, vec![phi_term(0.0, false, 2)]).canonicalize();
        assert!(e.is_zero());
        let mixed = Expression::raw(
            L,
            vec![
                phi_term(1.0, false, 2),
                phi_term(2.0, true, 0),
                phi_term(-1.0, false, 1),
            ],
        );
        let once = mixed.clone().canonicalize();
        assert_eq!(once.clone().canonicalize(), once);
        assert_eq!(once.terms()[0].k, 0);
    }

    #[test]
    fn add_identity_and_inverse() {
        let a = Expression::new(L, vec![phi_term(1.5, true, 1), phi_term(-2.0, false, 3)]);
        assert_eq!(a.add(&Expression::zero(L)).unwrap(), a);
        assert!(a.add(&a.scale_by(-1.0)).unwrap().is_zero());
        assert!(matches!(
            a.add(&Expression::zero(2.0)),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn scale_examples() {
        let u0 = Expression::sine(L, 1.0);
        let s = u0.scale(&hbar());
        assert_eq!(s.terms()[0].coeff, BiPoly::outer(&hbar(), &Poly::one()));
        assert_eq!(u0.scale(&Poly::one()), u0);
    }

    #[test]
    fn multiply_examples() {
        let p = phi(1).multiply(&phi(1)).unwrap();
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.terms()[0].k, 2);
        assert_eq!(p.terms()[0].gamma, GammaSignature::new(vec![], vec![1, 1]));

        let one = Expression::constant(L, 1.0);
        let e = Expression::new(L, vec![phi_term(2.0, true, 1)]);
        assert_eq!(e.multiply(&one).unwrap(), e);

        let x = Expression::polynomial(L, &Poly::var());
        let q = Expression::polynomial(L, &Poly::new(vec![-1.0, -1.0, 1.0]));
        let prod = x.multiply(&q).unwrap();
        let expected = Expression::polynomial(L, &Poly::new(vec![0.0, -1.0, -1.0, 1.0]));
        assert_eq!(prod, expected);
    }

    #[test]
    fn multiply_sine_by_sine_fails() {
        let s = Expression::sine(L, 1.0);
        assert!(matches!(s.multiply(&s), Err(Error::UnsupportedBasis(_))));
    }

    #[test]
    fn d_space_examples() {
        let q = Expression::polynomial(L, &Poly::new(vec![-1.0, -1.0, 1.0]));
        assert_eq!(
            q.d_space().unwrap(),
            Expression::polynomial(L, &Poly::new(vec![-1.0, 2.0]))
        );
        assert!(Expression::constant(L, 4.0).d_space().unwrap().is_zero());
        assert!(Expression::sine(L, 1.0).d_space().is_err());
    }

    #[test]
    fn d_space2_examples() {
        let s = Expression::sine(2.0, 1.0).d_space2().unwrap();
        assert!(s.approx_eq(&Expression::sine(2.0, -(PI / 2.0).powi(2)), 1e-15));
        let cube = Expression::polynomial(L, &Poly::monomial(1.0, 3));
        assert_eq!(
            cube.d_space2().unwrap(),
            Expression::polynomial(L, &Poly::monomial(6.0, 1))
        );
        let u0 = Expression::sine(1.0, 1.0).d_space2().unwrap();
        assert!((u0.terms()[0].coeff.rows()[0].coeff(0) + PI * PI).abs() < 1e-14);

        let bad = Expression::new(
            L,
            vec![Term::new(
                BiPoly::outer(&Poly::one(), &Poly::var()),
                true,
                GammaSignature::one(),
                0,
            )],
        );
        assert!(matches!(bad.d_space2(), Err(Error::UnsupportedBasis(_))));
    }

    #[test]
    fn caputo_examples() {
        assert_eq!(phi(1).caputo_d(), Expression::constant(L, 1.0));
        assert!(Expression::constant(L, 3.0).caputo_d().is_zero());
        assert_eq!(phi(2).caputo_d(), phi(1));
    }

    #[test]
    fn riemann_examples() {
        assert_eq!(Expression::constant(L, 1.0).riemann_j(), phi(1));
        assert_eq!(phi(1).riemann_j(), phi(2));
        let sq = phi(1).multiply(&phi(1)).unwrap().riemann_j();
        assert_eq!(sq.terms()[0].k, 3);
        assert_eq!(
            sq.terms()[0].gamma,
            GammaSignature::new(vec![2], vec![1, 1, 3])
        );
    }

    #[test]
    fn evaluate_examples() {
        let field1 = AlphaField::affine(0.8, 0.2, 1.0, 10.0).unwrap();
        let u0 = Expression::sine(1.0, 1.0);
        let v = u0.evaluate(&field1, 0.5, 3.0).unwrap();
        assert_eq!(v, Poly::one());

        // u1 of the linear benchmark: ℏ·(π²K/L²)·sin·φ1
        let c = PI * PI * 0.01;
        let u1 = Expression::new(1.0, vec![Term::phi(&hbar(), &Poly::constant(c), true, 1)]);
        let v = u1.evaluate(&field1, 0.5, 1.0).unwrap();
        assert_eq!(v.coeff(0), 0.0);
        assert!((v.coeff(1) - c / gamma(1.81).unwrap()).abs() < 1e-15);
        assert!((v.coeff(1) - 0.105_661_655_688_517).abs() < 1e-12);

        // u1 of the nonlinear benchmark: ℏ(x²-x-1)·φ1 at α = 0.25
        let field2 = AlphaField::product_xt(1.0, 1.0).unwrap();
        let u1 = Expression::new(
            1.0,
            vec![Term::phi(
                &hbar(),
                &Poly::new(vec![-1.0, -1.0, 1.0]),
                false,
                1,
            )],
        );
        let v = u1.evaluate(&field2, 0.5, 0.5).unwrap();
        assert!((v.coeff(1) - (-1.159_662_010_723_750_7)).abs() < 1e-12);
        assert!((v.eval(-0.134256) - 0.155_691_582_911_727_85).abs() < 1e-12);
    }

    #[test]
    fn evaluate_at_time_zero() {
        let field1 = AlphaField::affine(0.8, 0.2, 1.0, 10.0).unwrap();
        let field2 = AlphaField::product_xt(1.0, 1.0).unwrap();
        let e = phi(2).add(&Expression::constant(L, 2.0)).unwrap();
        assert_eq!(e.evaluate(&field1, 0.3, 0.0).unwrap(), Poly::constant(2.0));
        // α(x, 0) = 0: t^{kα} → 1 and Γ(1) = 1
        assert_eq!(e.evaluate(&field2, 0.3, 0.0).unwrap(), Poly::constant(3.0));
    }

    #[test]
    fn evaluate_outside_domain() {
        let field1 = AlphaField::affine(0.8, 0.2, 1.0, 10.0).unwrap();
        assert!(phi(1).evaluate(&field1, 2.0, 1.0).is_err());
    }

    #[test]
    fn horner_at_hbar() {
        let p = Poly::new(vec![0.0, 1.0, 1.0]);
        assert_eq!(p.eval(-1.0), 0.0);
        let q = Poly::new(vec![2.5, 1.0, -4.0]);
        assert_eq!(q.eval(0.0), 2.5);
    }

    #[test]
    fn pretty_printer() {
        let t = Term::phi(
            &Poly::new(vec![0.0, 1.0, 1.0]),
            &Poly::new(vec![-1.0, -1.0, 1.0]),
            false,
            1,
        );
        assert_eq!(t.to_string(), "h(h+1) * (x^2-x-1) * t^a/G(1+a)");
        let g = Term::new(
            BiPoly::outer(
                &Poly::monomial(1.0, 3),
                &Poly::new(vec![2.0, 8.0, -7.0, -2.0, 1.0]),
            ),
            false,
            GammaSignature::new(vec![2], vec![1, 1, 3]),
            3,
        );
        assert_eq!(
            g.to_string(),
            "h^3 * (x^4-2x^3-7x^2+8x+2) * t^{3a}*G(1+2a)/(G(1+a)^2*G(1+3a))"
        );
        let s = Term::phi(
            &Poly::new(vec![0.0, 1.0, 2.0, 1.0]),
            &Poly::constant(0.5),
            true,
            2,
        );
        assert_eq!(
            s.to_string(),
            "h(h+1)^2 * 0.5 * sin(pi x/L) * t^{2a}/G(1+2a)"
        );
    }

    fn mixed_expression() -> Expression {
        let space = Poly::new(vec![1.0, -2.0, 0.5]);
        let h = Poly::new(vec![0.0, 1.0, 1.0]);
        Expression::new(
            L,
            vec![
                Term::phi(&h, &space, false, 2),
                Term::phi(&hbar(), &Poly::constant(0.7), true, 1),
                Term::new(
                    BiPoly::outer(&Poly::one(), &Poly::new(vec![0.0, 3.0])),
                    false,
                    GammaSignature::new(vec![2], vec![1, 1, 3]),
                    3,
                ),
            ],
        )
    }

    #[test]
    fn frozen_jet_matches_symbolic_derivatives() {
        let e = Expression::new(
            L,
            vec![Term::phi(
                &hbar(),
                &Poly::new(vec![1.0, -1.0, 2.0]),
                false,
                2,
            )],
        );
        let (x, t, a) = (0.3, 0.8, 0.6);
        let [u, ux, uxx] = e.evaluate_jet(a, 0.0, x, t).unwrap();
        assert!(u.approx_eq(&e.evaluate_with_alpha(a, x, t).unwrap(), 1e-14));
        let d1 = e.d_space().unwrap().evaluate_with_alpha(a, x, t).unwrap();
        let d2 = e.d_space2().unwrap().evaluate_with_alpha(a, x, t).unwrap();
        assert!(ux.approx_eq(&d1, 1e-13));
        assert!(uxx.approx_eq(&d2, 1e-13));
    }

    #[test]
    fn jet_matches_finite_differences_through_alpha() {
        let field = AlphaField::product_xt(1.0, 1.0).unwrap();
        let e = mixed_expression();
        let at = |x: f64, t: f64| e.evaluate(&field, x, t).unwrap();
        let (x, t, h) = (0.45, 0.7, 1e-4);
        let [u, ux, uxx] = e
            .evaluate_jet(field.eval(x, t).unwrap(), field.d_dx(x, t), x, t)
            .unwrap();
        let (up, um) = (at(x + h, t), at(x - h, t));
        let fd1 = (&up - &um).scale(0.5 / h);
        let fd2 = (&(&up + &um) - &u.scale(2.0)).scale(1.0 / (h * h));
        assert!(u.approx_eq(&at(x, t), 1e-14));
        assert!((&ux - &fd1).max_abs() < 1e-7);
        assert!((&uxx - &fd2).max_abs() < 1e-5);
    }
}
