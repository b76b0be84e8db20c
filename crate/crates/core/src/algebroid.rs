//! Fractional Leibniz algebroid structures: section brackets with two
//! anchors, the induced linear 2-contravariant tensor on the dual bundle,
//! sampled correspondence checks between the two presentations, and
//! assembly of mixed-order dynamical systems.
//!
//! Base coordinates are `x1..xn`, fibre (dual) coordinates `xi1..xim`.
//! The dual-bundle tensor carries the fibre-fibre block `A_ab = C_ab^d xi_d`,
//! a positive `rho1` block and a negative `rho2` block; its bracket of
//! functions differentiates fractionally along the base and classically
//! along the fibre, matching the componentwise coordinate equations.

use crate::brackets::base_var;
use crate::fracfield::{
    classical_partial, frac_partial, FieldError, FractionalOrder, GenPolynomial, EXP_TOL,
};
use std::collections::BTreeMap;

/// Fibre coordinate name for index `a` (zero-indexed): `xi1`, `xi2`, ...
pub fn fibre_var(a: usize) -> String {
    format!("xi{}", a + 1)
}

/// Optional verified properties of the structure functions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StructureTags {
    /// `C_ab^d = -C_ba^d`.
    pub pre_lie: bool,
    /// `C_ab^d = C_ba^d`.
    pub symmetric: bool,
}

/// Structure functions `C_ab^d(x)` plus left/right anchor matrices over the
/// base coordinates.
#[derive(Debug, Clone)]
pub struct AlgebroidStructure {
    base_dim: usize,
    fibre_dim: usize,
    /// Indexed `c[a][b][d]`.
    c: Vec<Vec<Vec<GenPolynomial>>>,
    /// Indexed `rho[a][i]`: base components of the anchor of the a-th
    /// basis section.
    rho1: Vec<Vec<GenPolynomial>>,
    rho2: Vec<Vec<GenPolynomial>>,
    tags: StructureTags,
}

const TAG_TOL: f64 = 1e-12;

impl AlgebroidStructure {
    pub fn new(
        base_dim: usize,
        fibre_dim: usize,
        c: Vec<Vec<Vec<GenPolynomial>>>,
        rho1: Vec<Vec<GenPolynomial>>,
        rho2: Vec<Vec<GenPolynomial>>,
        tags: StructureTags,
    ) -> Result<Self, FieldError> {
        check_shape3(&c, fibre_dim)?;
        check_shape2(&rho1, fibre_dim, base_dim)?;
        check_shape2(&rho2, fibre_dim, base_dim)?;
        if tags.pre_lie || tags.symmetric {
            for a in 0..fibre_dim {
                for b in 0..fibre_dim {
                    for d in 0..fibre_dim {
                        if tags.pre_lie && !c[a][b][d].approx_eq(&c[b][a][d].neg(), TAG_TOL) {
                            return Err(FieldError::SymmetryViolation {
                                tag: "preLie".into(),
                                i: a,
                                j: b,
                            });
                        }
                        if tags.symmetric && !c[a][b][d].approx_eq(&c[b][a][d], TAG_TOL) {
                            return Err(FieldError::SymmetryViolation {
                                tag: "symmetric".into(),
                                i: a,
                                j: b,
                            });
                        }
                    }
                }
            }
        }
        Ok(AlgebroidStructure {
            base_dim,
            fibre_dim,
            c,
            rho1,
            rho2,
            tags,
        })
    }

    /// Structure with zero bracket and zero anchors.
    pub fn zero(base_dim: usize, fibre_dim: usize) -> Self {
        let c = vec![vec![vec![GenPolynomial::zero(); fibre_dim]; fibre_dim]; fibre_dim];
        let rho = vec![vec![GenPolynomial::zero(); base_dim]; fibre_dim];
        AlgebroidStructure::new(base_dim, fibre_dim, c, rho.clone(), rho, StructureTags::default())
            .expect("zero structure is well formed")
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn fibre_dim(&self) -> usize {
        self.fibre_dim
    }

    pub fn structure_fn(&self, a: usize, b: usize, d: usize) -> &GenPolynomial {
        &self.c[a][b][d]
    }

    pub fn rho1(&self, a: usize, i: usize) -> &GenPolynomial {
        &self.rho1[a][i]
    }

    pub fn rho2(&self, a: usize, i: usize) -> &GenPolynomial {
        &self.rho2[a][i]
    }

    pub fn tags(&self) -> StructureTags {
        self.tags
    }

    /// Anchor (left or right) of a section applied to a base function:
    /// `sum_a sigma^a sum_i rho_a^i D^alpha_{x^i} f`.
    pub fn anchor_apply(
        &self,
        rho: AnchorSide,
        section: &Section,
        f: &GenPolynomial,
        alpha: FractionalOrder,
    ) -> Result<GenPolynomial, FieldError> {
        let matrix = match rho {
            AnchorSide::Left => &self.rho1,
            AnchorSide::Right => &self.rho2,
        };
        let mut acc = GenPolynomial::zero();
        for a in 0..self.fibre_dim {
            for i in 0..self.base_dim {
                let df = frac_partial(f, &base_var(i), alpha)?;
                acc = acc.add(&section.component(a).mul(&matrix[a][i]).mul(&df));
            }
        }
        Ok(acc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnchorSide {
    Left,
    Right,
}

fn check_shape2(
    m: &[Vec<GenPolynomial>],
    rows: usize,
    cols: usize,
) -> Result<(), FieldError> {
    if m.len() != rows {
        return Err(FieldError::DimensionMismatch {
            expected: rows,
            got: m.len(),
        });
    }
    for row in m {
        if row.len() != cols {
            return Err(FieldError::DimensionMismatch {
                expected: cols,
                got: row.len(),
            });
        }
    }
    Ok(())
}

fn check_shape3(c: &[Vec<Vec<GenPolynomial>>], m: usize) -> Result<(), FieldError> {
    if c.len() != m {
        return Err(FieldError::DimensionMismatch {
            expected: m,
            got: c.len(),
        });
    }
    for plane in c {
        check_shape2(plane, m, m)?;
    }
    Ok(())
}

/// A section of the bundle: `m` coefficient polynomials over the base.
#[derive(Debug, Clone)]
pub struct Section {
    components: Vec<GenPolynomial>,
}

impl Section {
    pub fn new(components: Vec<GenPolynomial>) -> Self {
        Section { components }
    }

    /// The a-th constant basis section.
    pub fn basis(fibre_dim: usize, a: usize) -> Self {
        let mut components = vec![GenPolynomial::zero(); fibre_dim];
        components[a] = GenPolynomial::one();
        Section { components }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, a: usize) -> &GenPolynomial {
        &self.components[a]
    }

    pub fn scale_by(&self, f: &GenPolynomial) -> Self {
        Section::new(self.components.iter().map(|c| c.mul(f)).collect())
    }

    /// The fibre-linear function `sigma^a xi_a` on the dual bundle.
    pub fn pairing_function(&self) -> GenPolynomial {
        let mut acc = GenPolynomial::zero();
        for (a, c) in self.components.iter().enumerate() {
            acc = acc.add(&c.mul(&GenPolynomial::var(&fibre_var(a))));
        }
        acc
    }

    pub fn approx_eq(&self, other: &Section, tol: f64) -> bool {
        self.components.len() == other.components.len()
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a.approx_eq(b, tol))
    }
}

/// Section bracket in coordinates: component `d` is
/// `sum_a s1^a sum_i rho1_a^i D^a_i(s2^d) - sum_a s2^a sum_i rho2_a^i D^a_i(s1^d)
///  + sum_{a,b} s1^a s2^b C_ab^d`.
pub fn section_bracket(
    structure: &AlgebroidStructure,
    s1: &Section,
    s2: &Section,
    alpha: FractionalOrder,
) -> Result<Section, FieldError> {
    let m = structure.fibre_dim();
    let n = structure.base_dim();
    if s1.dim() != m || s2.dim() != m {
        return Err(FieldError::DimensionMismatch {
            expected: m,
            got: s1.dim().max(s2.dim()),
        });
    }
    let mut out = Vec::with_capacity(m);
    for d in 0..m {
        let mut acc = GenPolynomial::zero();
        for a in 0..m {
            for i in 0..n {
                let d2 = frac_partial(s2.component(d), &base_var(i), alpha)?;
                acc = acc.add(&s1.component(a).mul(structure.rho1(a, i)).mul(&d2));
                let d1 = frac_partial(s1.component(d), &base_var(i), alpha)?;
                acc = acc.sub(&s2.component(a).mul(structure.rho2(a, i)).mul(&d1));
            }
        }
        for a in 0..m {
            for b in 0..m {
                acc = acc.add(
                    &s1.component(a)
                        .mul(s2.component(b))
                        .mul(structure.structure_fn(a, b, d)),
                );
            }
        }
        out.push(acc);
    }
    Ok(Section::new(out))
}

/// 2-contravariant tensor on the dual bundle, stored blockwise. The fibre
/// block lives in `(x, xi)`, the anchor blocks in `x` alone; the `rho2`
/// block enters bracket evaluation with a minus sign.
#[derive(Debug, Clone)]
pub struct LambdaTensor {
    base_dim: usize,
    fibre_dim: usize,
    a_block: Vec<Vec<GenPolynomial>>,
    rho1_block: Vec<Vec<GenPolynomial>>,
    rho2_block: Vec<Vec<GenPolynomial>>,
}

impl LambdaTensor {
    pub fn new(
        base_dim: usize,
        fibre_dim: usize,
        a_block: Vec<Vec<GenPolynomial>>,
        rho1_block: Vec<Vec<GenPolynomial>>,
        rho2_block: Vec<Vec<GenPolynomial>>,
    ) -> Result<Self, FieldError> {
        check_shape2(&a_block, fibre_dim, fibre_dim)?;
        check_shape2(&rho1_block, fibre_dim, base_dim)?;
        check_shape2(&rho2_block, fibre_dim, base_dim)?;
        Ok(LambdaTensor {
            base_dim,
            fibre_dim,
            a_block,
            rho1_block,
            rho2_block,
        })
    }

    pub fn a_entry(&self, a: usize, b: usize) -> &GenPolynomial {
        &self.a_block[a][b]
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn fibre_dim(&self) -> usize {
        self.fibre_dim
    }
}

/// Builds the dual-bundle tensor of a structure: fibre block
/// `A_ab = sum_d C_ab^d xi_d`, anchor blocks copied through.
pub fn assemble_lambda(structure: &AlgebroidStructure) -> LambdaTensor {
    let m = structure.fibre_dim();
    let n = structure.base_dim();
    let mut a_block = vec![vec![GenPolynomial::zero(); m]; m];
    for a in 0..m {
        for b in 0..m {
            let mut acc = GenPolynomial::zero();
            for d in 0..m {
                acc = acc.add(
                    &structure
                        .structure_fn(a, b, d)
                        .mul(&GenPolynomial::var(&fibre_var(d))),
                );
            }
            a_block[a][b] = acc;
        }
    }
    let rho1_block = (0..m)
        .map(|a| (0..n).map(|i| structure.rho1(a, i).clone()).collect())
        .collect();
    let rho2_block = (0..m)
        .map(|a| (0..n).map(|i| structure.rho2(a, i).clone()).collect())
        .collect();
    LambdaTensor::new(n, m, a_block, rho1_block, rho2_block).expect("shapes preserved")
}

/// Tests fibre-linearity of the tensor: every fibre-block entry must be
/// homogeneous of degree exactly one in the `xi` coordinates. On success
/// returns the extracted structure functions `C_ab^d(x)`.
pub fn is_linear(tensor: &LambdaTensor) -> Option<Vec<Vec<Vec<GenPolynomial>>>> {
    let m = tensor.fibre_dim();
    let mut c = vec![vec![vec![GenPolynomial::zero(); m]; m]; m];
    let fibre_names: Vec<String> = (0..m).map(fibre_var).collect();
    for a in 0..m {
        for b in 0..m {
            for term in tensor.a_block[a][b].terms() {
                let mut fibre_hits: Vec<(usize, f64)> = Vec::new();
                let mut x_part: Vec<(String, f64)> = Vec::new();
                for (var, exp) in term.exponents() {
                    match fibre_names.iter().position(|f| f == var) {
                        Some(d) => fibre_hits.push((d, exp)),
                        None => x_part.push((var.to_string(), exp)),
                    }
                }
                // Degree exactly one in xi: a single fibre variable with
                // unit exponent.
                if fibre_hits.len() != 1 || (fibre_hits[0].1 - 1.0).abs() > EXP_TOL {
                    return None;
                }
                let d = fibre_hits[0].0;
                let piece = GenPolynomial::monomial(term.coeff(), x_part)
                    .expect("exponents already validated");
                c[a][b][d] = c[a][b][d].add(&piece);
            }
        }
    }
    Some(c)
}

/// Bracket of two functions on the dual bundle through the tensor:
/// fractional derivatives along the base, classical (componentwise delta
/// rule) derivatives along the fibre.
pub fn lambda_bracket(
    tensor: &LambdaTensor,
    u: &GenPolynomial,
    v: &GenPolynomial,
    alpha: FractionalOrder,
) -> Result<GenPolynomial, FieldError> {
    let m = tensor.fibre_dim();
    let n = tensor.base_dim();
    let du_xi: Vec<GenPolynomial> = (0..m)
        .map(|a| classical_partial(u, &fibre_var(a)))
        .collect::<Result<_, _>>()?;
    let dv_xi: Vec<GenPolynomial> = (0..m)
        .map(|a| classical_partial(v, &fibre_var(a)))
        .collect::<Result<_, _>>()?;
    let du_x: Vec<GenPolynomial> = (0..n)
        .map(|i| frac_partial(u, &base_var(i), alpha))
        .collect::<Result<_, _>>()?;
    let dv_x: Vec<GenPolynomial> = (0..n)
        .map(|i| frac_partial(v, &base_var(i), alpha))
        .collect::<Result<_, _>>()?;

    let mut acc = GenPolynomial::zero();
    for a in 0..m {
        for b in 0..m {
            acc = acc.add(&tensor.a_block[a][b].mul(&du_xi[a]).mul(&dv_xi[b]));
        }
    }
    for a in 0..m {
        for i in 0..n {
            acc = acc.add(&tensor.rho1_block[a][i].mul(&du_xi[a]).mul(&dv_x[i]));
            acc = acc.sub(&tensor.rho2_block[a][i].mul(&du_x[i]).mul(&dv_xi[a]));
        }
    }
    Ok(acc)
}

/// Residuals of the three correspondence identities between a structure and
/// a dual-bundle tensor, evaluated at sample points.
#[derive(Debug, Clone, Copy)]
pub struct Theorem41Report {
    /// Pairing of the section bracket vs the tensor bracket of the
    /// fibre-linear functions.
    pub bracket_residual: f64,
    /// Left anchor vs `[i(sigma), f]`.
    pub anchor1_residual: f64,
    /// Right anchor vs `-[f, i(sigma)]` (the tensor's negative block).
    pub anchor2_residual: f64,
}

impl Theorem41Report {
    pub fn max_residual(&self) -> f64 {
        self.bracket_residual
            .max(self.anchor1_residual)
            .max(self.anchor2_residual)
    }
}

/// Evaluates the correspondence identities at each sample point of the dual
/// bundle, with the two sides computed by independent code paths
/// ([`section_bracket`]/[`AlgebroidStructure::anchor_apply`] vs
/// [`lambda_bracket`] contraction).
#[allow(clippy::too_many_arguments)]
pub fn theorem41_check(
    structure: &AlgebroidStructure,
    tensor: &LambdaTensor,
    s1: &Section,
    s2: &Section,
    f: &GenPolynomial,
    alpha: FractionalOrder,
    points: &[BTreeMap<String, f64>],
) -> Result<Theorem41Report, FieldError> {
    let bracket_lhs = section_bracket(structure, s1, s2, alpha)?.pairing_function();
    let bracket_rhs = lambda_bracket(
        tensor,
        &s1.pairing_function(),
        &s2.pairing_function(),
        alpha,
    )?;

    let mut report = Theorem41Report {
        bracket_residual: 0.0,
        anchor1_residual: 0.0,
        anchor2_residual: 0.0,
    };
    for section in [s1, s2] {
        let iu = section.pairing_function();
        let a1_lhs = structure.anchor_apply(AnchorSide::Left, section, f, alpha)?;
        let a1_rhs = lambda_bracket(tensor, &iu, f, alpha)?;
        let a2_lhs = structure.anchor_apply(AnchorSide::Right, section, f, alpha)?;
        let a2_rhs = lambda_bracket(tensor, f, &iu, alpha)?.neg();
        for point in points {
            report.anchor1_residual = report
                .anchor1_residual
                .max((a1_lhs.eval(point)? - a1_rhs.eval(point)?).abs());
            report.anchor2_residual = report
                .anchor2_residual
                .max((a2_lhs.eval(point)? - a2_rhs.eval(point)?).abs());
        }
    }
    for point in points {
        report.bracket_residual = report
            .bracket_residual
            .max((bracket_lhs.eval(point)? - bracket_rhs.eval(point)?).abs());
    }
    Ok(report)
}

/// Mixed-order dynamical system on the dual bundle: base coordinates evolve
/// at order `alpha`, fibre coordinates at order `beta`. Keeps the assembly
/// inputs so order specializations can rebuild the right-hand sides.
#[derive(Debug, Clone)]
pub struct MixedOrderSystem {
    pub base_dim: usize,
    pub fibre_dim: usize,
    pub alpha: FractionalOrder,
    pub beta: FractionalOrder,
    pub rhs_x: Vec<GenPolynomial>,
    pub rhs_xi: Vec<GenPolynomial>,
    pub x0: Vec<f64>,
    pub xi0: Vec<f64>,
    structure: AlgebroidStructure,
    hamiltonian: GenPolynomial,
}

impl MixedOrderSystem {
    pub fn with_initial(mut self, x0: Vec<f64>, xi0: Vec<f64>) -> Result<Self, FieldError> {
        if x0.len() != self.base_dim {
            return Err(FieldError::DimensionMismatch {
                expected: self.base_dim,
                got: x0.len(),
            });
        }
        if xi0.len() != self.fibre_dim {
            return Err(FieldError::DimensionMismatch {
                expected: self.fibre_dim,
                got: xi0.len(),
            });
        }
        self.x0 = x0;
        self.xi0 = xi0;
        Ok(self)
    }

    pub fn structure(&self) -> &AlgebroidStructure {
        &self.structure
    }

    pub fn hamiltonian(&self) -> &GenPolynomial {
        &self.hamiltonian
    }

    /// State layout: base coordinates first, then fibre coordinates.
    pub fn state_vars(&self) -> Vec<String> {
        (0..self.base_dim)
            .map(base_var)
            .chain((0..self.fibre_dim).map(fibre_var))
            .collect()
    }

    /// Orders per state component, matching [`Self::state_vars`].
    pub fn state_orders(&self) -> Vec<FractionalOrder> {
        std::iter::repeat(self.alpha)
            .take(self.base_dim)
            .chain(std::iter::repeat(self.beta).take(self.fibre_dim))
            .collect()
    }

    /// Right-hand sides in state order.
    pub fn state_rhs(&self) -> Vec<&GenPolynomial> {
        self.rhs_x.iter().chain(self.rhs_xi.iter()).collect()
    }

    pub fn initial_state(&self) -> Vec<f64> {
        self.x0.iter().chain(self.xi0.iter()).copied().collect()
    }

    pub fn rhs_approx_eq(&self, other: &MixedOrderSystem, tol: f64) -> bool {
        self.base_dim == other.base_dim
            && self.fibre_dim == other.fibre_dim
            && self
                .rhs_x
                .iter()
                .zip(&other.rhs_x)
                .all(|(a, b)| a.approx_eq(b, tol))
            && self
                .rhs_xi
                .iter()
                .zip(&other.rhs_xi)
                .all(|(a, b)| a.approx_eq(b, tol))
    }
}

/// Assembles the coordinate equations of motion for a potential on the dual
/// bundle:
///
/// ```text
/// D^beta  xi_a = sum_{b,d} C_ab^d xi_d D^beta_{xi_b} h + sum_i rho1_a^i D^alpha_{x^i} h
/// D^alpha x^i  = -sum_a rho2_a^i D^beta_{xi_a} h
/// ```
///
/// Initial state defaults to all ones.
pub fn dynamical_system(
    structure: &AlgebroidStructure,
    h: &GenPolynomial,
    alpha: FractionalOrder,
    beta: FractionalOrder,
) -> Result<MixedOrderSystem, FieldError> {
    let n = structure.base_dim();
    let m = structure.fibre_dim();
    let dh_xi: Vec<GenPolynomial> = (0..m)
        .map(|b| frac_partial(h, &fibre_var(b), beta))
        .collect::<Result<_, _>>()?;
    let dh_x: Vec<GenPolynomial> = (0..n)
        .map(|i| frac_partial(h, &base_var(i), alpha))
        .collect::<Result<_, _>>()?;

    let mut rhs_xi = Vec::with_capacity(m);
    for a in 0..m {
        let mut acc = GenPolynomial::zero();
        for b in 0..m {
            for d in 0..m {
                let xi_d = GenPolynomial::var(&fibre_var(d));
                acc = acc.add(&structure.structure_fn(a, b, d).mul(&xi_d).mul(&dh_xi[b]));
            }
        }
        for i in 0..n {
            acc = acc.add(&structure.rho1(a, i).mul(&dh_x[i]));
        }
        rhs_xi.push(acc);
    }

    let mut rhs_x = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = GenPolynomial::zero();
        for a in 0..m {
            acc = acc.sub(&structure.rho2(a, i).mul(&dh_xi[a]));
        }
        rhs_x.push(acc);
    }

    Ok(MixedOrderSystem {
        base_dim: n,
        fibre_dim: m,
        alpha,
        beta,
        rhs_x,
        rhs_xi,
        x0: vec![1.0; n],
        xi0: vec![1.0; m],
        structure: structure.clone(),
        hamiltonian: h.clone(),
    })
}

/// Which order group to send to one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderSpecialization {
    AlphaToOne,
    BetaToOne,
}

/// Rebuilds the system with the indicated fractional partials replaced by
/// classical ones (gamma factors collapse, exponents shift by one); the
/// corresponding order component is set to one. The stored potential is
/// reused as-is, so its exponents must admit the classical derivative.
pub fn specialize_order(
    sys: &MixedOrderSystem,
    which: OrderSpecialization,
) -> Result<MixedOrderSystem, FieldError> {
    let (alpha, beta) = match which {
        OrderSpecialization::AlphaToOne => (FractionalOrder::ONE, sys.beta),
        OrderSpecialization::BetaToOne => (sys.alpha, FractionalOrder::ONE),
    };
    dynamical_system(&sys.structure, &sys.hamiltonian, alpha, beta)?
        .with_initial(sys.x0.clone(), sys.xi0.clone())
}
