//! Generalized monomials and polynomials: finite sums of real-coefficient
//! monomials with real nonnegative exponents in named variables.
//!
//! The class is closed under the fractional power rule, which is what makes
//! every bracket and algebroid assembly in this crate exact. Canonical form
//! merges terms whose exponent maps agree within [`EXP_TOL`] and orders terms
//! lexicographically, so symbolic equality is decidable by structural
//! comparison ([`GenPolynomial::approx_eq`] for the drift-tolerant variant).

use super::FieldError;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

/// Exponents closer than this are considered the same exponent; exponents
/// this close to zero are dropped. Gamma-ratio arithmetic drifts at the
/// 1e-16 scale, far below this threshold, while distinct exponents in the
/// supported systems differ by at least a fraction of an order.
pub const EXP_TOL: f64 = 1e-9;

/// Default absolute coefficient tolerance for symbolic comparisons.
pub const COEFF_TOL: f64 = 1e-10;

/// A single term: `coeff * prod_v v^{exp_v}` with every exponent > 0.
#[derive(Debug, Clone, PartialEq)]
pub struct GenMonomial {
    coeff: f64,
    exponents: BTreeMap<String, f64>,
}

impl GenMonomial {
    /// Builds a term, dropping exponents within [`EXP_TOL`] of zero and
    /// rejecting negative ones.
    pub fn new(
        coeff: f64,
        exponents: impl IntoIterator<Item = (String, f64)>,
    ) -> Result<Self, FieldError> {
        let mut map = BTreeMap::new();
        for (var, exp) in exponents {
            if exp < -EXP_TOL {
                return Err(FieldError::NegativeExponent {
                    var,
                    gamma: exp,
                    order: 0.0,
                });
            }
            if exp > EXP_TOL {
                *map.entry(var).or_insert(0.0) += exp;
            }
        }
        Ok(GenMonomial {
            coeff,
            exponents: map,
        })
    }

    pub fn coeff(&self) -> f64 {
        self.coeff
    }

    /// Exponent on `var`, zero when absent.
    pub fn exponent(&self, var: &str) -> f64 {
        self.exponents.get(var).copied().unwrap_or(0.0)
    }

    pub fn exponents(&self) -> impl Iterator<Item = (&str, f64)> {
        self.exponents.iter().map(|(v, e)| (v.as_str(), *e))
    }

    pub fn is_constant(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Lexicographic order on the flattened (variable, exponent) sequence.
    fn key_cmp(&self, other: &Self) -> Ordering {
        let mut a = self.exponents.iter();
        let mut b = other.exponents.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((va, ea)), Some((vb, eb))) => {
                    let ord = va.cmp(vb).then(ea.total_cmp(eb));
                    if ord != Ordering::Equal {
                        return ord;
                    }
                }
            }
        }
    }

    /// Same variable set with exponents within [`EXP_TOL`].
    fn key_close(&self, other: &Self) -> bool {
        self.exponents.len() == other.exponents.len()
            && self
                .exponents
                .iter()
                .zip(other.exponents.iter())
                .all(|((va, ea), (vb, eb))| va == vb && (ea - eb).abs() <= EXP_TOL)
    }

    fn mul(&self, other: &Self) -> Self {
        let mut exponents = self.exponents.clone();
        for (v, e) in &other.exponents {
            *exponents.entry(v.clone()).or_insert(0.0) += e;
        }
        exponents.retain(|_, e| *e > EXP_TOL);
        GenMonomial {
            coeff: self.coeff * other.coeff,
            exponents,
        }
    }
}

/// Canonical finite sum of [`GenMonomial`] terms.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GenPolynomial {
    terms: Vec<GenMonomial>,
}

impl GenPolynomial {
    pub fn zero() -> Self {
        GenPolynomial { terms: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        GenPolynomial::from_terms(vec![GenMonomial {
            coeff: c,
            exponents: BTreeMap::new(),
        }])
    }

    pub fn one() -> Self {
        GenPolynomial::constant(1.0)
    }

    pub fn var(name: &str) -> Self {
        Self::var_pow(name, 1.0).expect("unit exponent is valid")
    }

    /// `name^exp` with `exp >= 0`.
    pub fn var_pow(name: &str, exp: f64) -> Result<Self, FieldError> {
        let m = GenMonomial::new(1.0, [(name.to_string(), exp)])?;
        Ok(GenPolynomial::from_terms(vec![m]))
    }

    pub fn monomial(
        coeff: f64,
        exponents: impl IntoIterator<Item = (String, f64)>,
    ) -> Result<Self, FieldError> {
        Ok(GenPolynomial::from_terms(vec![GenMonomial::new(
            coeff, exponents,
        )?]))
    }

    /// Canonicalizes: merges terms with matching exponent maps, drops zero
    /// coefficients, sorts deterministically.
    pub fn from_terms(terms: Vec<GenMonomial>) -> Self {
        let mut merged: Vec<GenMonomial> = Vec::with_capacity(terms.len());
        for term in terms {
            if term.coeff == 0.0 {
                continue;
            }
            match merged.iter_mut().find(|t| t.key_close(&term)) {
                Some(existing) => existing.coeff += term.coeff,
                None => merged.push(term),
            }
        }
        merged.retain(|t| t.coeff != 0.0);
        merged.sort_by(|a, b| a.key_cmp(b));
        GenPolynomial { terms: merged }
    }

    pub fn terms(&self) -> &[GenMonomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.iter().fold(0.0, |m, t| m.max(t.coeff.abs()))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        GenPolynomial::from_terms(terms)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(-1.0)
    }

    pub fn scale(&self, factor: f64) -> Self {
        GenPolynomial::from_terms(
            self.terms
                .iter()
                .map(|t| GenMonomial {
                    coeff: t.coeff * factor,
                    exponents: t.exponents.clone(),
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.mul(b));
            }
        }
        GenPolynomial::from_terms(terms)
    }

    /// Variables appearing with nonzero exponent.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut set = BTreeSet::new();
        for t in &self.terms {
            for (v, _) in &t.exponents {
                set.insert(v.clone());
            }
        }
        set
    }

    /// Largest exponent on `var` across all terms (zero for absent).
    pub fn degree_in(&self, var: &str) -> f64 {
        self.terms
            .iter()
            .fold(0.0, |m: f64, t| m.max(t.exponent(var)))
    }

    /// Evaluates at a point of the closed positive orthant; `0^0 = 1`.
    /// Negative coordinates are admitted only under integer exponents.
    pub fn eval(&self, point: &BTreeMap<String, f64>) -> Result<f64, FieldError> {
        let mut sum = 0.0;
        for term in &self.terms {
            let mut value = term.coeff;
            for (var, &exp) in &term.exponents {
                let x = *point
                    .get(var)
                    .ok_or_else(|| FieldError::UnboundVariable { var: var.clone() })?;
                if x < 0.0 {
                    let rounded = exp.round();
                    if (exp - rounded).abs() <= EXP_TOL {
                        value *= x.powi(rounded as i32);
                    } else {
                        return Err(FieldError::NegativeCoordinate {
                            var: var.clone(),
                            value: x,
                            exponent: exp,
                        });
                    }
                } else {
                    value *= x.powf(exp);
                }
            }
            sum += value;
        }
        Ok(sum)
    }

    /// True when every coefficient is within `abs_tol` of zero (term keys
    /// that fail to merge count as nonzero).
    pub fn is_zero_within(&self, abs_tol: f64) -> bool {
        self.terms.iter().all(|t| t.coeff.abs() <= abs_tol)
    }

    /// Drift-tolerant symbolic equality: the difference must vanish within
    /// `tol` relative to the larger coefficient scale of the operands.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let scale = self.max_abs_coeff().max(other.max_abs_coeff()).max(1.0);
        self.sub(other).is_zero_within(tol * scale)
    }
}

impl std::ops::Add for &GenPolynomial {
    type Output = GenPolynomial;
    fn add(self, rhs: Self) -> GenPolynomial {
        GenPolynomial::add(self, rhs)
    }
}

impl std::ops::Sub for &GenPolynomial {
    type Output = GenPolynomial;
    fn sub(self, rhs: Self) -> GenPolynomial {
        GenPolynomial::sub(self, rhs)
    }
}

impl std::ops::Mul for &GenPolynomial {
    type Output = GenPolynomial;
    fn mul(self, rhs: Self) -> GenPolynomial {
        GenPolynomial::mul(self, rhs)
    }
}

impl std::ops::Neg for &GenPolynomial {
    type Output = GenPolynomial;
    fn neg(self) -> GenPolynomial {
        GenPolynomial::neg(self)
    }
}

impl std::fmt::Display for GenPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, term) in self.terms.iter().enumerate() {
            let coeff = term.coeff;
            if i == 0 {
                if coeff < 0.0 {
                    write!(f, "-")?;
                }
            } else if coeff < 0.0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = coeff.abs();
            let mut wrote_factor = false;
            if (mag - 1.0).abs() > f64::EPSILON || term.exponents.is_empty() {
                write!(f, "{mag}")?;
                wrote_factor = true;
            }
            for (var, &exp) in &term.exponents {
                if wrote_factor {
                    write!(f, "*")?;
                }
                wrote_factor = true;
                if (exp - 1.0).abs() <= EXP_TOL {
                    write!(f, "{var}")?;
                } else {
                    write!(f, "{var}^{exp}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
        pairs.iter().map(|(v, x)| (v.to_string(), *x)).collect()
    }

    #[test]
    fn canonical_merge() {
        let p = GenPolynomial::from_terms(vec![
            GenMonomial::new(2.0, [("x1".into(), 1.0)]).unwrap(),
            GenMonomial::new(3.0, [("x1".into(), 1.0 + 1e-12)]).unwrap(),
            GenMonomial::new(-5.0, [("x1".into(), 1.0)]).unwrap(),
        ]);
        assert!(p.is_zero());
    }

    #[test]
    fn zero_coeff_never_stored() {
        let p = GenPolynomial::monomial(0.0, [("x1".to_string(), 2.0)]).unwrap();
        assert!(p.is_zero());
        assert!(p.terms().is_empty());
    }

    #[test]
    fn negative_exponent_rejected() {
        assert!(matches!(
            GenPolynomial::var_pow("x1", -0.5),
            Err(FieldError::NegativeExponent { .. })
        ));
    }

    #[test]
    fn eval_products() {
        let p = GenPolynomial::var("x1").mul(&GenPolynomial::var("x2"));
        assert_eq!(p.eval(&point(&[("x1", 2.0), ("x2", 3.0)])).unwrap(), 6.0);

        let sqrt = GenPolynomial::var_pow("x1", 0.5).unwrap();
        assert_eq!(sqrt.eval(&point(&[("x1", 4.0)])).unwrap(), 2.0);
    }

    #[test]
    fn eval_zero_to_zero_is_one() {
        // 0^0 = 1 by convention: a constant term evaluated anywhere.
        let p = GenPolynomial::constant(7.0);
        assert_eq!(p.eval(&point(&[("x1", 0.0)])).unwrap(), 7.0);
        let q = GenPolynomial::var_pow("x1", 0.5).unwrap();
        assert_eq!(q.eval(&point(&[("x1", 0.0)])).unwrap(), 0.0);
    }

    #[test]
    fn eval_errors() {
        let p = GenPolynomial::var("x1");
        assert!(matches!(
            p.eval(&point(&[("x2", 1.0)])),
            Err(FieldError::UnboundVariable { .. })
        ));
        let q = GenPolynomial::var_pow("x1", 0.5).unwrap();
        assert!(matches!(
            q.eval(&point(&[("x1", -1.0)])),
            Err(FieldError::NegativeCoordinate { .. })
        ));
        // Integer exponents admit negative coordinates.
        let r = GenPolynomial::var_pow("x1", 2.0).unwrap();
        assert_eq!(r.eval(&point(&[("x1", -3.0)])).unwrap(), 9.0);
    }

    #[test]
    fn arithmetic_and_equality() {
        let x = GenPolynomial::var("x1");
        let y = GenPolynomial::var("x2");
        let lhs = (&x + &y).mul(&(&x - &y));
        let rhs = x.mul(&x).sub(&y.mul(&y));
        assert!(lhs.approx_eq(&rhs, 1e-14));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn display_round_trip_shape() {
        let p = GenPolynomial::from_terms(vec![
            GenMonomial::new(-2.0, [("x1".into(), 0.5), ("x2".into(), 1.0)]).unwrap(),
            GenMonomial::new(1.0, [("x1".into(), 2.0)]).unwrap(),
            GenMonomial::new(3.5, []).unwrap(),
        ]);
        assert_eq!(p.to_string(), "3.5 - 2*x1^0.5*x2 + x1^2");
        assert_eq!(GenPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn term_order_is_deterministic() {
        let a = GenPolynomial::var("x2").add(&GenPolynomial::var("x1"));
        let b = GenPolynomial::var("x1").add(&GenPolynomial::var("x2"));
        assert_eq!(a, b);
        assert_eq!(a.to_string(), b.to_string());
    }
}
