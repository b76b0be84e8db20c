//! Fractional Leibniz, metriplectic and two-potential bracket structures on
//! `R^n`, producing fractional vector fields and coordinate equations of
//! motion.
//!
//! Coordinate equations use the componentwise rule `X^i = sum_j B^{ij} D^a_j h`
//! directly. Bracketing the coordinate function itself instead would insert a
//! factor `Γ(2)/Γ(2-a) (x^i)^{1-a}`; that evaluation stays available through
//! [`leibniz_bracket`] for study, but every assembled system follows the
//! componentwise rule. No pairing normalization factor is inserted.

use crate::fracfield::{frac_partial, FieldError, FractionalOrder, GenPolynomial};

/// Declared symmetry of a 2-contravariant tensor field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    None,
    Skew,
    Symmetric,
}

impl std::fmt::Display for Symmetry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Symmetry::None => "none",
            Symmetry::Skew => "skew",
            Symmetry::Symmetric => "symmetric",
        };
        write!(f, "{s}")
    }
}

/// Square matrix of polynomial entries representing a fractional
/// 2-contravariant tensor field. Symmetry tags are verified eagerly at
/// construction; violations are hard errors.
#[derive(Debug, Clone)]
pub struct TensorField2 {
    dim: usize,
    entries: Vec<Vec<GenPolynomial>>,
    symmetry: Symmetry,
}

/// Tolerance for eager symmetry verification.
const SYM_TOL: f64 = 1e-12;

impl TensorField2 {
    pub fn new(
        entries: Vec<Vec<GenPolynomial>>,
        symmetry: Symmetry,
    ) -> Result<Self, FieldError> {
        let dim = entries.len();
        for row in &entries {
            if row.len() != dim {
                return Err(FieldError::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                let ok = match symmetry {
                    Symmetry::None => true,
                    Symmetry::Skew => entries[i][j].approx_eq(&entries[j][i].neg(), SYM_TOL),
                    Symmetry::Symmetric => entries[i][j].approx_eq(&entries[j][i], SYM_TOL),
                };
                if !ok {
                    return Err(FieldError::SymmetryViolation {
                        tag: symmetry.to_string(),
                        i,
                        j,
                    });
                }
            }
        }
        Ok(TensorField2 {
            dim,
            entries,
            symmetry,
        })
    }

    /// Diagonal tensor from scalar entries.
    pub fn diagonal(values: &[f64]) -> Self {
        let dim = values.len();
        let entries = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        if i == j {
                            GenPolynomial::constant(values[i])
                        } else {
                            GenPolynomial::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        TensorField2::new(entries, Symmetry::Symmetric).expect("diagonal is symmetric")
    }

    pub fn zero(dim: usize, symmetry: Symmetry) -> Self {
        let entries = vec![vec![GenPolynomial::zero(); dim]; dim];
        TensorField2::new(entries, symmetry).expect("zero satisfies any tag")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn entry(&self, i: usize, j: usize) -> &GenPolynomial {
        &self.entries[i][j]
    }

    /// Entrywise sum; the result carries no symmetry claim unless both
    /// operands share one.
    pub fn add(&self, other: &TensorField2) -> Result<TensorField2, FieldError> {
        if self.dim != other.dim {
            return Err(FieldError::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let entries = (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| self.entries[i][j].add(&other.entries[i][j]))
                    .collect()
            })
            .collect();
        let tag = if self.symmetry == other.symmetry {
            self.symmetry
        } else {
            Symmetry::None
        };
        TensorField2::new(entries, tag)
    }
}

/// Fractional vector field: coefficients with respect to the per-axis
/// fractional derivative basis.
#[derive(Debug, Clone)]
pub struct FracVectorField {
    dim: usize,
    components: Vec<GenPolynomial>,
}

impl FracVectorField {
    pub fn new(components: Vec<GenPolynomial>) -> Self {
        FracVectorField {
            dim: components.len(),
            components,
        }
    }

    pub fn zero(dim: usize) -> Self {
        FracVectorField::new(vec![GenPolynomial::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn component(&self, i: usize) -> &GenPolynomial {
        &self.components[i]
    }

    pub fn components(&self) -> &[GenPolynomial] {
        &self.components
    }

    pub fn approx_eq(&self, other: &FracVectorField, tol: f64) -> bool {
        self.dim == other.dim
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a.approx_eq(b, tol))
    }
}

/// A first-order fractional system `D^alpha x = X(x)` on `R^n`.
#[derive(Debug, Clone)]
pub struct FractionalSystemSpec {
    pub dim: usize,
    pub alpha: FractionalOrder,
    pub rhs: FracVectorField,
    pub label: String,
}

impl FractionalSystemSpec {
    pub fn new(alpha: FractionalOrder, rhs: FracVectorField, label: impl Into<String>) -> Self {
        FractionalSystemSpec {
            dim: rhs.dim(),
            alpha,
            rhs,
            label: label.into(),
        }
    }
}

/// Base coordinate name for axis `i` (zero-indexed): `x1`, `x2`, ...
pub fn base_var(i: usize) -> String {
    format!("x{}", i + 1)
}

fn frac_gradient(
    h: &GenPolynomial,
    dim: usize,
    alpha: FractionalOrder,
) -> Result<Vec<GenPolynomial>, FieldError> {
    (0..dim)
        .map(|j| frac_partial(h, &base_var(j), alpha))
        .collect()
}

/// Fractional Leibniz bracket `[f, g] = sum_{ij} B^{ij} D^a_i f D^a_j g`.
pub fn leibniz_bracket(
    tensor: &TensorField2,
    f: &GenPolynomial,
    g: &GenPolynomial,
    alpha: FractionalOrder,
) -> Result<GenPolynomial, FieldError> {
    let df = frac_gradient(f, tensor.dim(), alpha)?;
    let dg = frac_gradient(g, tensor.dim(), alpha)?;
    let mut acc = GenPolynomial::zero();
    for i in 0..tensor.dim() {
        for j in 0..tensor.dim() {
            let term = tensor.entry(i, j).mul(&df[i]).mul(&dg[j]);
            acc = acc.add(&term);
        }
    }
    Ok(acc)
}

/// Vector field of the bracket dynamics: component `i` is
/// `sum_j B^{ij} D^a_j h`.
pub fn hamiltonian_field(
    tensor: &TensorField2,
    h: &GenPolynomial,
    alpha: FractionalOrder,
) -> Result<FracVectorField, FieldError> {
    let dh = frac_gradient(h, tensor.dim(), alpha)?;
    let components = (0..tensor.dim())
        .map(|i| {
            let mut acc = GenPolynomial::zero();
            for (j, d) in dh.iter().enumerate() {
                acc = acc.add(&tensor.entry(i, j).mul(d));
            }
            acc
        })
        .collect();
    Ok(FracVectorField::new(components))
}

/// Combined conservative/dissipative dynamics from a skew tensor and a
/// symmetric tensor driven by one potential: `(P + g) D^a h`.
pub fn metriplectic_field(
    p: &TensorField2,
    g: &TensorField2,
    h: &GenPolynomial,
    alpha: FractionalOrder,
) -> Result<FracVectorField, FieldError> {
    if p.symmetry() != Symmetry::Skew {
        return Err(FieldError::SymmetryViolation {
            tag: "skew".into(),
            i: 0,
            j: 0,
        });
    }
    if g.symmetry() != Symmetry::Symmetric {
        return Err(FieldError::SymmetryViolation {
            tag: "symmetric".into(),
            i: 0,
            j: 0,
        });
    }
    hamiltonian_field(&p.add(g)?, h, alpha)
}

/// Two-potential dynamics: `P D^a h1 + g D^a h2` componentwise.
pub fn two_potential_field(
    p: &TensorField2,
    g: &TensorField2,
    h1: &GenPolynomial,
    h2: &GenPolynomial,
    alpha: FractionalOrder,
) -> Result<FracVectorField, FieldError> {
    if p.dim() != g.dim() {
        return Err(FieldError::DimensionMismatch {
            expected: p.dim(),
            got: g.dim(),
        });
    }
    let f1 = hamiltonian_field(p, h1, alpha)?;
    let f2 = hamiltonian_field(g, h2, alpha)?;
    let components = f1
        .components()
        .iter()
        .zip(f2.components())
        .map(|(a, b)| a.add(b))
        .collect();
    Ok(FracVectorField::new(components))
}

/// Outcome of the product-rule identity check.
#[derive(Debug, Clone)]
pub struct ProductIdentityReport {
    /// `[f h, g] - sum_k C(a,k) B^{ij} D^{a-k}_i f (d_i)^k h D^a_j g`,
    /// zero on success.
    pub residual: GenPolynomial,
    pub truncated: bool,
}

/// Compares the bracket of a product `[f h, g]` against its binomial-series
/// expansion, returning the residual polynomial.
pub fn verify_product_identity(
    tensor: &TensorField2,
    f: &GenPolynomial,
    h: &GenPolynomial,
    g: &GenPolynomial,
    alpha: FractionalOrder,
    max_terms: usize,
) -> Result<ProductIdentityReport, FieldError> {
    use crate::fracfield::frac_product_series;
    let direct = leibniz_bracket(tensor, &f.mul(h), g, alpha)?;
    let dg = frac_gradient(g, tensor.dim(), alpha)?;
    let mut series_side = GenPolynomial::zero();
    let mut truncated = false;
    for i in 0..tensor.dim() {
        let series = frac_product_series(f, h, &base_var(i), alpha, max_terms)?;
        truncated |= series.truncated;
        for j in 0..tensor.dim() {
            series_side = series_side.add(&tensor.entry(i, j).mul(&series.poly).mul(&dg[j]));
        }
    }
    Ok(ProductIdentityReport {
        residual: direct.sub(&series_side),
        truncated,
    })
}
