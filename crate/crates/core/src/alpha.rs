//! Variable fractional order fields α(x, t) on a rectangle [0, L] × [0, T].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed-form shape of the order field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlphaKind {
    /// α = a
    Constant { a: f64 },
    /// α = a + b·x·t/(L·T)
    Affine { a: f64, b: f64 },
    /// α = x·t
    ProductXt,
}

/// The order field together with the domain it is defined on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaField {
    #[serde(flatten)]
    pub kind: AlphaKind,
    pub length: f64,
    pub horizon: f64,
}

/// Outcome of [`AlphaField::validate_range`].
#[derive(Debug, Clone, PartialEq)]
pub struct RangeReport {
    /// `0 < α < 1` holds on the open interior.
    pub interior_valid: bool,
    pub min: f64,
    pub max: f64,
    /// Closed-boundary points where α touches 0 or 1.
    pub boundary_flags: Vec<BoundaryFlag>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFlag {
    pub x: f64,
    pub t: f64,
    pub alpha: f64,
    pub description: String,
}

impl AlphaField {
    pub fn new(kind: AlphaKind, length: f64, horizon: f64) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) || !(horizon > 0.0 && horizon.is_finite()) {
            return Err(Error::Domain(format!(
                "domain lengths must be positive, got L = {length}, T = {horizon}"
            )));
        }
        Ok(Self {
            kind,
            length,
            horizon,
        })
    }

    pub fn constant(a: f64, length: f64, horizon: f64) -> Result<Self> {
        Self::new(AlphaKind::Constant { a }, length, horizon)
    }

    pub fn affine(a: f64, b: f64, length: f64, horizon: f64) -> Result<Self> {
        Self::new(AlphaKind::Affine { a, b }, length, horizon)
    }

    pub fn product_xt(length: f64, horizon: f64) -> Result<Self> {
        Self::new(AlphaKind::ProductXt, length, horizon)
    }

    pub fn contains(&self, x: f64, t: f64) -> bool {
        (0.0..=self.length).contains(&x) && (0.0..=self.horizon).contains(&t)
    }

    /// α(x, t), rejecting points outside the closed domain.
    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        if !self.contains(x, t) {
            return Err(Error::Domain(format!(
                "point ({x}, {t}) outside [0, {}] x [0, {}]",
                self.length, self.horizon
            )));
        }
        Ok(self.formula(x, t))
    }

    /// α(x, t) without the domain check. Used when a residual grid is allowed
    /// to extend past the nominal rectangle.
    pub fn formula(&self, x: f64, t: f64) -> f64 {
        match self.kind {
            AlphaKind::Constant { a } => a,
            AlphaKind::Affine { a, b } => a + b * x * t / (self.length * self.horizon),
            AlphaKind::ProductXt => x * t,
        }
    }

    /// ∂α/∂x; every supported kind is affine in x, so ∂²α/∂x² = 0.
    pub fn d_dx(&self, _x: f64, t: f64) -> f64 {
        match self.kind {
            AlphaKind::Constant { .. } => 0.0,
            AlphaKind::Affine { b, .. } => b * t / (self.length * self.horizon),
            AlphaKind::ProductXt => t,
        }
    }

    /// Lipschitz constant of α with respect to the Euclidean norm on the domain.
    pub fn lipschitz(&self) -> f64 {
        match self.kind {
            AlphaKind::Constant { .. } => 0.0,
            AlphaKind::Affine { b, .. } => {
                let (l, t) = (self.length, self.horizon);
                b.abs() * (t * t + l * l).sqrt() / (l * t)
            }
            AlphaKind::ProductXt => (self.length.powi(2) + self.horizon.powi(2)).sqrt(),
        }
    }

    /// Checks `0 < α < 1` on the open domain and flags boundary points where
    /// α reaches 0 or 1.
    ///
    /// All three field kinds are monotone in `x·t` (or constant), so the range
    /// is attained at the corners `(0, 0)` and `(L, T)`, plus the axes for the
    /// product field.
    pub fn validate_range(&self) -> RangeReport {
        let (l, t) = (self.length, self.horizon);
        let lo = self.formula(0.0, 0.0);
        let hi = self.formula(l, t);
        let (min, max) = if lo <= hi { (lo, hi) } else { (hi, lo) };

        let mut flags = Vec::new();
        match self.kind {
            AlphaKind::Constant { a } => {
                let valid = a > 0.0 && a < 1.0;
                return RangeReport {
                    interior_valid: valid,
                    min: a,
                    max: a,
                    boundary_flags: flags,
                };
            }
            AlphaKind::Affine { .. } => {
                // α on the axes equals the offset; the far corner carries the other extreme
                let a = self.formula(l, t);
                if a == 0.0 || a == 1.0 {
                    flags.push(BoundaryFlag {
                        x: l,
                        t,
                        alpha: a,
                        description: format!("alpha = {a} at corner ({l}, {t})"),
                    });
                }
                let axis = self.formula(0.0, 0.0);
                if axis == 0.0 || axis == 1.0 {
                    flags.push(BoundaryFlag {
                        x: 0.0,
                        t: 0.0,
                        alpha: axis,
                        description: format!("alpha = {axis} along the axes x = 0 and t = 0"),
                    });
                }
            }
            AlphaKind::ProductXt => {
                flags.push(BoundaryFlag {
                    x: 0.0,
                    t: 0.0,
                    alpha: 0.0,
                    description: "alpha = 0 along the axes x = 0 and t = 0".to_string(),
                });
                if hi >= 1.0 {
                    flags.push(BoundaryFlag {
                        x: l,
                        t,
                        alpha: hi,
                        description: format!("alpha = {hi} at corner ({l}, {t})"),
                    });
                }
            }
        }
        // the extremes sit on the closed boundary, so the open interior is valid
        // when the closed range stays within [0, 1]
        RangeReport {
            interior_valid: min >= 0.0 && max <= 1.0 && max > 0.0 && min < 1.0,
            min,
            max,
            boundary_flags: flags,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn problem1_field() -> AlphaField {
        AlphaField::affine(0.8, 0.2, 1.0, 10.0).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert!((problem1_field().eval(0.5, 1.0).unwrap() - 0.81).abs() < 1e-15);
        let p = AlphaField::product_xt(1.0, 1.0).unwrap();
        assert_eq!(p.eval(0.0, 0.7).unwrap(), 0.0);
        assert_eq!(p.eval(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(
            AlphaField::constant(0.4, 1.0, 1.0)
                .unwrap()
                .eval(0.3, 0.2)
                .unwrap(),
            0.4
        );
    }

    #[test]
    fn eval_outside_domain_is_error() {
        let f = problem1_field();
        assert!(matches!(f.eval(1.5, 1.0), Err(Error::Domain(_))));
        assert!(f.eval(0.5, -0.1).is_err());
        assert!(f.eval(0.5, 10.5).is_err());
    }

    #[test]
    fn bad_domain_rejected() {
        assert!(AlphaField::product_xt(0.0, 1.0).is_err());
        assert!(AlphaField::product_xt(1.0, -2.0).is_err());
    }

    #[test]
    fn range_affine() {
        let r = problem1_field().validate_range();
        assert!(r.interior_valid);
        assert!((r.min - 0.8).abs() < 1e-15);
        assert!((r.max - 1.0).abs() < 1e-15);
        assert_eq!(r.boundary_flags.len(), 1);
        assert_eq!((r.boundary_flags[0].x, r.boundary_flags[0].t), (1.0, 10.0));
    }

    #[test]
    fn range_product() {
        let r = AlphaField::product_xt(1.0, 1.0).unwrap().validate_range();
        assert!(r.interior_valid);
        assert_eq!(r.boundary_flags.len(), 2);
        assert!(r.boundary_flags.iter().any(|f| f.alpha == 0.0));
        assert!(r.boundary_flags.iter().any(|f| f.alpha == 1.0));
    }

    #[test]
    fn range_constant_out_of_bounds() {
        assert!(
            !AlphaField::constant(1.2, 1.0, 1.0)
                .unwrap()
                .validate_range()
                .interior_valid
        );
        assert!(
            AlphaField::constant(0.5, 1.0, 1.0)
                .unwrap()
                .validate_range()
                .interior_valid
        );
    }

    #[test]
    fn serde_shape() {
        let f = problem1_field();
        let v = serde_json::to_value(f).unwrap();
        assert_eq!(v["kind"], "affine");
        assert_eq!(v["a"], 0.8);
        let back: AlphaField = serde_json::from_value(v).unwrap();
        assert_eq!(back, f);
    }

    proptest! {
        #[test]
        fn lipschitz_bound(x1 in 0.0..1.0f64, t1 in 0.0..10.0f64, x2 in 0.0..1.0f64, t2 in 0.0..10.0f64) {
            for f in [problem1_field(), AlphaField::product_xt(1.0, 10.0).unwrap()] {
                let d = ((x1 - x2).powi(2) + (t1 - t2).powi(2)).sqrt();
                let gap = (f.eval(x1, t1).unwrap() - f.eval(x2, t2).unwrap()).abs();
                prop_assert!(gap <= f.lipschitz() * d + 1e-12);
            }
        }

        #[test]
        fn affine_monotone(x in 0.0..0.99f64, t in 0.0..9.9f64, dx in 0.0..0.01f64, dt in 0.0..0.1f64) {
            let f = problem1_field();
            let base = f.eval(x, t).unwrap();
            prop_assert!(f.eval(x + dx, t).unwrap() >= base);
            prop_assert!(f.eval(x, t + dt).unwrap() >= base);
        }
    }
}
