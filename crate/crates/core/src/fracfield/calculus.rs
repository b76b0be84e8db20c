//! Exact fractional partial derivatives on generalized polynomials.
//!
//! The derivative is the left modified Riemann-Liouville operator with lower
//! limit 0, acting per axis. On a monomial `c * v^gamma * R` it is the power
//! rule `c * Γ(1+gamma)/Γ(1+gamma-order) * v^{gamma-order} * R`; terms
//! constant in the axis are annihilated. The same formula with negative
//! order is the fractional integral of a power, which the product series
//! needs for its `D^{alpha-k}` factors.

use super::poly::{GenMonomial, GenPolynomial, EXP_TOL};
use super::special::{gamma, gen_binomial};
use super::{FieldError, FractionalOrder};

/// Fractional partial derivative of order `alpha` along `axis`.
///
/// Terms with exponent `gamma` on the axis satisfying `0 < gamma < alpha`
/// would leave the nonnegative-exponent class and are rejected.
pub fn frac_partial(
    p: &GenPolynomial,
    axis: &str,
    alpha: FractionalOrder,
) -> Result<GenPolynomial, FieldError> {
    frac_deriv_order(p, axis, alpha.value())
}

/// Power-rule operator of arbitrary real order along `axis`.
///
/// Positive order: derivative (annihilates terms constant in the axis).
/// Zero order: identity. Negative order: fractional integral of each power;
/// constants integrate to `v^{-order} / Γ(1-order)` rather than dying.
pub fn frac_deriv_order(
    p: &GenPolynomial,
    axis: &str,
    order: f64,
) -> Result<GenPolynomial, FieldError> {
    if order == 0.0 {
        return Ok(p.clone());
    }
    let mut out = Vec::with_capacity(p.terms().len());
    for term in p.terms() {
        let g = term.exponent(axis);
        if order > 0.0 && g <= EXP_TOL {
            continue;
        }
        let new_exp = g - order;
        if new_exp < -EXP_TOL {
            return Err(FieldError::NegativeExponent {
                var: axis.to_string(),
                gamma: g,
                order,
            });
        }
        let ratio = gamma(1.0 + g)? / gamma(1.0 + g - order)?;
        let mut exps: Vec<(String, f64)> = term
            .exponents()
            .filter(|(v, _)| *v != axis)
            .map(|(v, e)| (v.to_string(), e))
            .collect();
        exps.push((axis.to_string(), new_exp.max(0.0)));
        out.push(GenMonomial::new(term.coeff() * ratio, exps)?);
    }
    Ok(GenPolynomial::from_terms(out))
}

/// Classical first partial derivative along `axis`.
pub fn classical_partial(p: &GenPolynomial, axis: &str) -> Result<GenPolynomial, FieldError> {
    let mut out = Vec::with_capacity(p.terms().len());
    for term in p.terms() {
        let g = term.exponent(axis);
        if g <= EXP_TOL {
            continue;
        }
        let new_exp = g - 1.0;
        if new_exp < -EXP_TOL {
            return Err(FieldError::NegativeExponent {
                var: axis.to_string(),
                gamma: g,
                order: 1.0,
            });
        }
        let mut exps: Vec<(String, f64)> = term
            .exponents()
            .filter(|(v, _)| *v != axis)
            .map(|(v, e)| (v.to_string(), e))
            .collect();
        exps.push((axis.to_string(), new_exp.max(0.0)));
        out.push(GenMonomial::new(term.coeff() * g, exps)?);
    }
    Ok(GenPolynomial::from_terms(out))
}

/// Result of the fractional product series.
#[derive(Debug, Clone)]
pub struct ProductSeries {
    pub poly: GenPolynomial,
    /// True when the series was cut at the term cap with a nonzero last term.
    pub truncated: bool,
    pub terms_used: usize,
}

/// Fractional derivative of a product through the binomial series
/// `sum_k C(alpha,k) * D^{alpha-k} f * (d/d axis)^k h`.
///
/// For `h` with integer exponents on the axis the classical-derivative
/// factor vanishes beyond the degree and the series terminates exactly;
/// otherwise `max_terms` bounds the truncation and the result is flagged.
///
/// The series is advertised only for `f` non-constant in the axis wherever
/// the corresponding contribution survives: the direct derivative kills
/// constants while the `D^{alpha-k}` factors of a constant are nonzero
/// fractional integrals, so a constant first factor makes the series and
/// the direct derivative disagree by design of the underlying operator.
pub fn frac_product_series(
    f: &GenPolynomial,
    h: &GenPolynomial,
    axis: &str,
    alpha: FractionalOrder,
    max_terms: usize,
) -> Result<ProductSeries, FieldError> {
    let a = alpha.value();
    let mut acc = GenPolynomial::zero();
    let mut h_k = h.clone();
    let mut last_nonzero = false;
    let mut terms_used = 0;
    for k in 0..max_terms {
        if h_k.is_zero() {
            return Ok(ProductSeries {
                poly: acc,
                truncated: false,
                terms_used,
            });
        }
        let coeff = gen_binomial(a, k);
        let df = frac_deriv_order(f, axis, a - k as f64)?;
        let contribution = df.mul(&h_k).scale(coeff);
        last_nonzero = !contribution.is_zero();
        acc = acc.add(&contribution);
        terms_used = k + 1;
        h_k = classical_partial(&h_k, axis)?;
    }
    Ok(ProductSeries {
        truncated: last_nonzero && !h_k.is_zero(),
        poly: acc,
        terms_used,
    })
}

/// Coefficients `c_h = (D^{alpha h} f)|_0` for `h = 0..=h_max`, by repeated
/// fractional differentiation of a single-variable polynomial whose
/// exponents are multiples of `alpha`.
pub fn fractional_taylor(
    f: &GenPolynomial,
    alpha: FractionalOrder,
    h_max: usize,
) -> Result<Vec<f64>, FieldError> {
    let vars = f.vars();
    if vars.len() > 1 {
        return Err(FieldError::NotUnivariate { count: vars.len() });
    }
    let a = alpha.value();
    for term in f.terms() {
        for (_, exp) in term.exponents() {
            let m = (exp / a).round();
            if (exp - m * a).abs() > EXP_TOL || m < 0.0 || m > h_max as f64 {
                return Err(FieldError::NotMultipleOfOrder {
                    exponent: exp,
                    alpha: a,
                });
            }
        }
    }
    let origin: std::collections::BTreeMap<String, f64> =
        vars.iter().map(|v| (v.clone(), 0.0)).collect();
    let axis = vars.iter().next().cloned().unwrap_or_default();
    let mut current = f.clone();
    let mut coeffs = Vec::with_capacity(h_max + 1);
    for _ in 0..=h_max {
        coeffs.push(current.eval(&origin)?);
        current = if axis.is_empty() {
            GenPolynomial::zero()
        } else {
            frac_partial(&current, &axis, alpha)?
        };
    }
    Ok(coeffs)
}

/// Rebuilds `sum_h c_h * var^{alpha h} / Γ(1 + alpha h)` from Taylor data.
pub fn taylor_reconstruct(
    coeffs: &[f64],
    alpha: FractionalOrder,
    var: &str,
) -> Result<GenPolynomial, FieldError> {
    let a = alpha.value();
    let mut acc = GenPolynomial::zero();
    for (h, &c) in coeffs.iter().enumerate() {
        if c == 0.0 {
            continue;
        }
        let scale = c / gamma(1.0 + a * h as f64)?;
        let term = GenPolynomial::monomial(scale, [(var.to_string(), a * h as f64)])?;
        acc = acc.add(&term);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fracfield::parse_expr;

    fn order(a: f64) -> FractionalOrder {
        FractionalOrder::new(a).unwrap()
    }

    #[test]
    fn power_rule_on_triple_product() {
        // D^a_{x1}(x1 x2 x3) = Γ(2)/Γ(2-a) x1^{1-a} x2 x3.
        let h = parse_expr("x1*x2*x3").unwrap();
        let a = 0.5;
        let d = frac_partial(&h, "x1", order(a)).unwrap();
        let ratio = gamma(2.0).unwrap() / gamma(2.0 - a).unwrap();
        let expected = GenPolynomial::monomial(
            ratio,
            [
                ("x1".to_string(), 1.0 - a),
                ("x2".to_string(), 1.0),
                ("x3".to_string(), 1.0),
            ],
        )
        .unwrap();
        assert!(d.approx_eq(&expected, 1e-14));
        // Frozen: Γ(2)/Γ(1.5) = 1.1283791670955126.
        assert!((ratio - 1.128_379_167_095_512_6).abs() < 1e-14);
    }

    #[test]
    fn constants_die() {
        let c = GenPolynomial::constant(5.0);
        assert!(frac_partial(&c, "x1", order(0.3)).unwrap().is_zero());
        // Terms constant in the axis die as well.
        let p = parse_expr("x2^2").unwrap();
        assert!(frac_partial(&p, "x1", order(0.3)).unwrap().is_zero());
    }

    #[test]
    fn alpha_power_gives_gamma_constant() {
        let a = 0.7;
        let p = GenPolynomial::var_pow("x1", a).unwrap();
        let d = frac_partial(&p, "x1", order(a)).unwrap();
        let expected = GenPolynomial::constant(gamma(1.0 + a).unwrap());
        assert!(d.approx_eq(&expected, 1e-14));
    }

    #[test]
    fn small_exponent_rejected() {
        let p = GenPolynomial::var_pow("x1", 0.25).unwrap();
        assert!(matches!(
            frac_partial(&p, "x1", order(0.5)),
            Err(FieldError::NegativeExponent { .. })
        ));
    }

    #[test]
    fn order_one_is_classical() {
        let p = parse_expr("3*x1^2 + x1*x2").unwrap();
        let d = frac_partial(&p, "x1", FractionalOrder::ONE).unwrap();
        let classical = classical_partial(&p, "x1").unwrap();
        assert!(d.approx_eq(&classical, 1e-14));
    }

    #[test]
    fn antiderivative_of_constant() {
        // D^{-0.5} 1 = t^{0.5} / Γ(1.5).
        let one = GenPolynomial::one();
        let d = frac_deriv_order(&one, "t", -0.5).unwrap();
        let expected =
            GenPolynomial::monomial(1.0 / gamma(1.5).unwrap(), [("t".to_string(), 0.5)]).unwrap();
        assert!(d.approx_eq(&expected, 1e-14));
    }

    #[test]
    fn antiderivative_classical_power() {
        // D^{-1} t = t^2 / 2.
        let t = GenPolynomial::var("t");
        let d = frac_deriv_order(&t, "t", -1.0).unwrap();
        let expected = GenPolynomial::monomial(0.5, [("t".to_string(), 2.0)]).unwrap();
        assert!(d.approx_eq(&expected, 1e-14));
    }

    #[test]
    fn zero_order_is_identity() {
        let p = parse_expr("x1^0.5 + 2*x2").unwrap();
        assert_eq!(frac_deriv_order(&p, "x1", 0.0).unwrap(), p);
    }

    #[test]
    fn product_series_terminates_exactly() {
        // f = t, h = t: series equals D^a(t^2) directly.
        let t = GenPolynomial::var("t");
        let a = order(0.5);
        let series = frac_product_series(&t, &t, "t", a, 50).unwrap();
        assert!(!series.truncated);
        assert_eq!(series.terms_used, 2);
        let direct = frac_partial(&t.mul(&t), "t", a).unwrap();
        assert!(series.poly.approx_eq(&direct, 1e-13));
    }

    #[test]
    fn product_series_unit_second_factor() {
        let f = parse_expr("x1^1.5 + x1*x2").unwrap();
        let a = order(0.8);
        let series = frac_product_series(&f, &GenPolynomial::one(), "x1", a, 10).unwrap();
        let direct = frac_partial(&f, "x1", a).unwrap();
        assert!(series.poly.approx_eq(&direct, 1e-13));
        assert_eq!(series.terms_used, 1);
    }

    #[test]
    fn product_series_constant_first_factor_discrepancy() {
        // With f = 1, h = t the series yields a * D^a t, not D^a t: the
        // direct derivative kills the constant while the integral terms of
        // the series survive. Pin the exact factor.
        let one = GenPolynomial::one();
        let t = GenPolynomial::var("t");
        for a in [0.3, 0.5, 0.8] {
            let series = frac_product_series(&one, &t, "t", order(a), 50)
                .unwrap()
                .poly;
            let direct = frac_partial(&t, "t", order(a)).unwrap();
            assert!(series.approx_eq(&direct.scale(a), 1e-13), "alpha = {a}");
            if a < 1.0 {
                assert!(!series.approx_eq(&direct, 1e-6));
            }
        }
        // At the classical order the series is the product rule and agrees.
        let series = frac_product_series(&one, &t, "t", FractionalOrder::ONE, 50)
            .unwrap()
            .poly;
        let direct = frac_partial(&t, "t", FractionalOrder::ONE).unwrap();
        assert!(series.approx_eq(&direct, 1e-13));
    }

    #[test]
    fn product_series_truncation_flag() {
        // Non-integer exponent on the axis: cut after one term.
        let f = GenPolynomial::var("t");
        let h = GenPolynomial::var_pow("t", 2.5).unwrap();
        let series = frac_product_series(&f, &h, "t", order(0.5), 1).unwrap();
        assert!(series.truncated);
    }

    #[test]
    fn taylor_round_trip_single_power() {
        let a = order(0.6);
        let f = GenPolynomial::var_pow("t", 0.6).unwrap();
        let coeffs = fractional_taylor(&f, a, 3).unwrap();
        assert!((coeffs[0]).abs() < 1e-14);
        assert!((coeffs[1] - gamma(1.6).unwrap()).abs() < 1e-12);
        let rebuilt = taylor_reconstruct(&coeffs, a, "t").unwrap();
        assert!(rebuilt.approx_eq(&f, 1e-12));
    }

    #[test]
    fn taylor_constant() {
        let f = GenPolynomial::constant(4.0);
        let coeffs = fractional_taylor(&f, order(0.5), 2).unwrap();
        assert_eq!(coeffs, vec![4.0, 0.0, 0.0]);
    }

    #[test]
    fn taylor_round_trip_scaled_power() {
        let a = order(0.5);
        let f = GenPolynomial::monomial(3.0, [("t".to_string(), 1.0)]).unwrap(); // 3 t^{2a}
        let coeffs = fractional_taylor(&f, a, 2).unwrap();
        let rebuilt = taylor_reconstruct(&coeffs, a, "t").unwrap();
        assert!(rebuilt.approx_eq(&f, 1e-12));
    }

    #[test]
    fn taylor_rejects_non_multiples() {
        let f = GenPolynomial::var_pow("t", 0.7).unwrap();
        assert!(matches!(
            fractional_taylor(&f, order(0.5), 4),
            Err(FieldError::NotMultipleOfOrder { .. })
        ));
        let g = parse_expr("x1*x2").unwrap();
        assert!(matches!(
            fractional_taylor(&g, order(0.5), 4),
            Err(FieldError::NotUnivariate { .. })
        ));
    }

    #[test]
    fn linearity() {
        let a = order(0.5);
        let p = parse_expr("x1^2 + x2").unwrap();
        let q = parse_expr("x1^0.5*x2").unwrap();
        let lhs = frac_partial(&p.scale(2.5).add(&q.scale(-1.5)), "x1", a).unwrap();
        let rhs = frac_partial(&p, "x1", a)
            .unwrap()
            .scale(2.5)
            .add(&frac_partial(&q, "x1", a).unwrap().scale(-1.5));
        assert!(lhs.approx_eq(&rhs, 1e-13));
    }
}
