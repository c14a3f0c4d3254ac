//! Splitting `F` into linear factors `ā_i = s̄_i·G⁻¹`, one per distinct
//! characteristic root, raised to the root's multiplicity.

use serde::{Deserialize, Serialize};

use crate::algebra::{
    all_monomials, form_expand_product, rat_to_f64, superscript, ComplexApprox, Form,
    HomogeneousForm, Rat, RatMatrix, Scalar,
};
use crate::error::{Error, Result};
use crate::form_builder::build_form;
use crate::recurrence::{RecurrenceRelation, SequenceFamily};

use super::roots::{char_roots, RootDatum, RootValue};

/// Largest accepted relative coefficient deviation of the expanded product.
pub const CERTIFICATION_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum FactorCoeffs {
    Exact(#[serde(with = "crate::algebra::rat_serde::vec")] Vec<Rat>),
    Approx(Vec<ComplexApprox>),
}

impl FactorCoeffs {
    pub fn len(&self) -> usize {
        match self {
            FactorCoeffs::Exact(v) => v.len(),
            FactorCoeffs::Approx(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_complex(&self) -> Vec<ComplexApprox> {
        match self {
            FactorCoeffs::Exact(v) => v.iter().map(ComplexApprox::from_rat).collect(),
            FactorCoeffs::Approx(v) => v.clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, FactorCoeffs::Exact(_))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFactor {
    pub coefficients: FactorCoeffs,
    pub multiplicity: usize,
    pub source_root: RootDatum,
}

impl LinearFactor {
    /// The factor as a linear form, e.g. `(-1/2·x1 + 1/2·x2)²` or `x1`.
    pub fn render(&self) -> String {
        let parts: Vec<String> = match &self.coefficients {
            FactorCoeffs::Exact(v) => v
                .iter()
                .enumerate()
                .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                .map(|(i, c)| {
                    if num_traits::One::is_one(c) {
                        format!("x{}", i + 1)
                    } else if num_traits::One::is_one(&-c) {
                        format!("-x{}", i + 1)
                    } else {
                        format!("{}·x{}", c, i + 1)
                    }
                })
                .collect(),
            FactorCoeffs::Approx(v) => v
                .iter()
                .enumerate()
                .map(|(i, c)| format!("{}·x{}", c, i + 1))
                .collect(),
        };
        let body = match parts.len() {
            0 => "0".to_string(),
            _ => parts.join(" + ").replace("+ -", "- "),
        };
        let exp = superscript(self.multiplicity as u32);
        if parts.len() > 1 || (!exp.is_empty() && body.starts_with('-')) {
            format!("({body}){exp}")
        } else {
            format!("{body}{exp}")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub factors: Vec<LinearFactor>,
    pub residual: f64,
}

impl Decomposition {
    /// Factors joined by ` · `, e.g. `x1 · x2`.
    pub fn render(&self) -> String {
        self.factors
            .iter()
            .map(LinearFactor::render)
            .collect::<Vec<_>>()
            .join(" · ")
    }

    pub fn is_exact(&self) -> bool {
        self.factors.iter().all(|f| f.coefficients.is_exact())
    }

    pub fn total_multiplicity(&self) -> usize {
        self.factors.iter().map(|f| f.multiplicity).sum()
    }

    /// The product of the factors, exact when every factor is.
    pub fn expand_exact(&self) -> Option<HomogeneousForm> {
        let factors: Option<Vec<(Vec<Rat>, u32)>> = self
            .factors
            .iter()
            .map(|f| match &f.coefficients {
                FactorCoeffs::Exact(v) => Some((v.clone(), f.multiplicity as u32)),
                FactorCoeffs::Approx(_) => None,
            })
            .collect();
        form_expand_product(&factors?).ok()
    }

    pub fn expand(&self) -> Result<Form<ComplexApprox>> {
        let factors: Vec<(Vec<ComplexApprox>, u32)> = self
            .factors
            .iter()
            .map(|f| (f.coefficients.to_complex(), f.multiplicity as u32))
            .collect();
        form_expand_product(&factors)
    }
}

/// Largest `|expanded_e - F_e| / max(1, |F_e|)` over all monomials.
pub fn expansion_residual(expanded: &Form<ComplexApprox>, f: &HomogeneousForm) -> f64 {
    all_monomials(f.arity(), f.degree())
        .into_iter()
        .map(|m| {
            let target = rat_to_f64(&f.coeff(&m.0));
            let got = expanded.coeff(&m.0).value();
            (got - num_complex::Complex64::new(target, 0.0)).norm() / target.abs().max(1.0)
        })
        .fold(0.0, f64::max)
}

fn powers<T: Scalar>(alpha: &T, k: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(k);
    let mut p = T::one_elem();
    for _ in 0..k {
        out.push(p.clone());
        p = p.times(alpha);
    }
    out
}

fn factors_for(roots: &[RootDatum], k: usize, g_inv: &RatMatrix) -> Result<Vec<LinearFactor>> {
    roots
        .iter()
        .map(|root| {
            let coefficients = match &root.value {
                RootValue::Exact(a) => FactorCoeffs::Exact(g_inv.left_mul_vec(&powers(a, k))?),
                RootValue::Approx(a) => {
                    FactorCoeffs::Approx(g_inv.to_complex().left_mul_vec(&powers(a, k))?)
                }
            };
            Ok(LinearFactor {
                coefficients,
                multiplicity: root.multiplicity,
                source_root: root.clone(),
            })
        })
        .collect()
}

pub(crate) fn certify(
    factors: Vec<LinearFactor>,
    f: &HomogeneousForm,
    tolerance: f64,
) -> Result<Decomposition> {
    let mut d = Decomposition {
        factors,
        residual: 0.0,
    };
    if let Some(product) = d.expand_exact() {
        if &product != f {
            return Err(Error::Invariant(format!(
                "exact factor product {} differs from {}",
                product, f
            )));
        }
        return Ok(d);
    }
    d.residual = expansion_residual(&d.expand()?, f);
    if d.residual > tolerance {
        return Err(Error::Certification {
            residual: d.residual,
            tolerance,
        });
    }
    Ok(d)
}

/// Factors `F` of the family, certified at [`CERTIFICATION_TOLERANCE`].
pub fn decompose_form(family: &SequenceFamily, precision: f64) -> Result<Decomposition> {
    decompose_form_with_tolerance(family, precision, CERTIFICATION_TOLERANCE)
}

pub fn decompose_form_with_tolerance(
    family: &SequenceFamily,
    precision: f64,
    tolerance: f64,
) -> Result<Decomposition> {
    family.require_independent()?;
    let pkg = build_form(family)?;
    let roots = char_roots(family.relation(), precision)?;
    let factors = factors_for(&roots, family.order(), &family.g().inverse()?)?;
    certify(factors, &pkg.form_f, tolerance)
}

/// Factorization for the family whose initial matrix is the identity; the
/// factors are the rows `(1, α, …, α^(k-1))` themselves.
pub fn orthonormal_factorization(
    relation: &RecurrenceRelation,
    roots: &[RootDatum],
) -> Result<Decomposition> {
    let k = relation.order();
    let total: usize = roots.iter().map(|r| r.multiplicity).sum();
    if total != k {
        return Err(Error::Dimension(format!(
            "root multiplicities sum to {} for an order {} relation",
            total, k
        )));
    }
    let family = SequenceFamily::orthonormal(relation.clone());
    let pkg = build_form(&family)?;
    certify(
        factors_for(roots, k, &RatMatrix::identity(k))?,
        &pkg.form_f,
        CERTIFICATION_TOLERANCE,
    )
}
