//! Closed forms for pairs of second-order sequences `x_n = A·x_{n-1} + B·x_{n-2}`.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::algebra::{rat, rat_pow, ComplexApprox, HomogeneousForm, Rat, Scalar};
use crate::error::{Error, Result};
use crate::factorization::{
    certify, char_roots, Decomposition, FactorCoeffs, LinearFactor, RootValue,
    CERTIFICATION_TOLERANCE,
};
use crate::form_builder::FormPackage;
use crate::recurrence::Sequence;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinaryInvariants {
    #[serde(with = "crate::algebra::rat_serde")]
    pub c_g: Rat,
    #[serde(with = "crate::algebra::rat_serde")]
    pub c_h: Rat,
    #[serde(with = "crate::algebra::rat_serde")]
    pub c_gh: Rat,
    #[serde(with = "crate::algebra::rat_serde")]
    pub e10: Rat,
    #[serde(with = "crate::algebra::rat_serde")]
    pub e01: Rat,
    #[serde(with = "crate::algebra::rat_serde")]
    pub delta: Rat,
    #[serde(with = "crate::algebra::rat_serde")]
    pub discriminant: Rat,
}

/// `(A, B)` of a second-order relation.
fn coefficients(seq: &Sequence) -> Result<(Rat, Rat)> {
    let r = seq.relation();
    if r.order() != 2 {
        return Err(Error::Arity {
            expected: 2,
            found: r.order(),
        });
    }
    Ok((r.gammas()[1].clone(), r.gammas()[0].clone()))
}

fn same_relation(g: &Sequence, h: &Sequence) -> Result<(Rat, Rat)> {
    let ab = coefficients(g)?;
    if coefficients(h)? != ab {
        return Err(Error::Invariant(format!(
            "sequences follow different relations: {} and {}",
            g.relation(),
            h.relation()
        )));
    }
    Ok(ab)
}

/// `x_1² - A·x_0·x_1 - B·x_0²`
fn characteristic_value(a: &Rat, b: &Rat, x0: &Rat, x1: &Rat) -> Rat {
    x1 * x1 - a * x0 * x1 - b * x0 * x0
}

pub fn binary_invariants(g: &Sequence, h: &Sequence) -> Result<BinaryInvariants> {
    let (a, b) = same_relation(g, h)?;
    let (g0, g1) = (&g.initials()[0], &g.initials()[1]);
    let (h0, h1) = (&h.initials()[0], &h.initials()[1]);
    let e10 = g1 * h1 - &a * g1 * h0 - &b * g0 * h0;
    let e01 = g1 * h1 - &a * g0 * h1 - &b * g0 * h0;
    Ok(BinaryInvariants {
        c_g: characteristic_value(&a, &b, g0, g1),
        c_h: characteristic_value(&a, &b, h0, h1),
        c_gh: -(&e10 + &e01),
        e10,
        e01,
        delta: g0 * h1 - g1 * h0,
        discriminant: &a * &a + rat(4) * &b,
    })
}

/// `C_GH` through the associated sequences: `(G_0·Ĥ_1 - G_1·Ĥ_0, H_0·Ĝ_1 - H_1·Ĝ_0)`.
pub fn c_gh_via_associated(g: &Sequence, h: &Sequence) -> Result<(Rat, Rat)> {
    same_relation(g, h)?;
    let (gh, hh) = (g.associated()?, h.associated()?);
    let (g0, g1) = (&g.initials()[0], &g.initials()[1]);
    let (h0, h1) = (&h.initials()[0], &h.initials()[1]);
    Ok((
        g0 * &hh.initials()[1] - g1 * &hh.initials()[0],
        h0 * &gh.initials()[1] - h1 * &gh.initials()[0],
    ))
}

/// `F̃ = C_H·x² + C_GH·x·y + C_G·y²` with `F̃(G_n, H_n) = Δ²·(-B)^n`.
pub fn binary_form(g: &Sequence, h: &Sequence) -> Result<FormPackage> {
    let inv = binary_invariants(g, h)?;
    let (_, b) = coefficients(g)?;
    if num_traits::Zero::is_zero(&inv.delta) {
        return Err(Error::DependentInitials {
            delta: inv.delta,
            detail: "the two sequences have proportional initial values".into(),
        });
    }
    let d2 = &inv.delta * &inv.delta;
    let f = HomogeneousForm::from_terms(
        2,
        2,
        vec![
            (vec![2, 0], &inv.c_h / &d2),
            (vec![1, 1], &inv.c_gh / &d2),
            (vec![0, 2], &inv.c_g / &d2),
        ],
    )?;
    Ok(FormPackage::from_form(f, inv.delta, -b))
}

/// Factors `(H_1 - α·H_0)·x - (G_1 - α·G_0)·y`, one per distinct root,
/// whose product is `F̃`.
pub fn binary_decomposition(g: &Sequence, h: &Sequence, precision: f64) -> Result<Decomposition> {
    let pkg = binary_form(g, h)?;
    let roots = char_roots(g.relation(), precision)?;
    let (g0, g1) = (&g.initials()[0], &g.initials()[1]);
    let (h0, h1) = (&h.initials()[0], &h.initials()[1]);
    let factors = roots
        .iter()
        .map(|root| {
            let coefficients = match &root.value {
                RootValue::Exact(al) => FactorCoeffs::Exact(vec![h1 - al * h0, -(g1 - al * g0)]),
                RootValue::Approx(al) => {
                    let c = |x0: &Rat, x1: &Rat| {
                        ComplexApprox::from_rat(x1).minus(&al.times(&ComplexApprox::from_rat(x0)))
                    };
                    FactorCoeffs::Approx(vec![c(h0, h1), c(g0, g1).negated()])
                }
            };
            LinearFactor {
                coefficients,
                multiplicity: root.multiplicity,
                source_root: root.clone(),
            }
        })
        .collect();
    certify(factors, &pkg.form_f_tilde, CERTIFICATION_TOLERANCE)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassicalIdentity {
    /// `Ĝ_n² - D·G_n² = 4·C_G·(-B)^n`
    AssociatedSquare,
    /// `(G_{n+1} - α·G_n)(G_{n+1} - β·G_n) = C_G·(-B)^n`
    CharacteristicProduct,
    /// `G_{n-1}·G_{n+1} - G_n² = -C_G·(-B)^(n-1)`
    Cassini,
    /// `C_Ĝ = -D·C_G`
    AssociatedCharacteristic,
    /// `C_GĜ = 0`
    AssociatedMixed,
    /// `Δ(G, Ĝ) = -2·C_G`
    AssociatedDeterminant,
}

impl ClassicalIdentity {
    pub fn name(&self) -> &'static str {
        match self {
            Self::AssociatedSquare => "associated-square",
            Self::CharacteristicProduct => "characteristic-product",
            Self::Cassini => "cassini",
            Self::AssociatedCharacteristic => "associated-characteristic",
            Self::AssociatedMixed => "associated-mixed",
            Self::AssociatedDeterminant => "associated-determinant",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityFailure {
    pub identity: ClassicalIdentity,
    /// `None` for the identities that do not depend on `n`.
    pub n: Option<i64>,
    #[serde(with = "crate::algebra::rat_serde")]
    pub lhs: Rat,
    #[serde(with = "crate::algebra::rat_serde")]
    pub rhs: Rat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub from: i64,
    pub to: i64,
    pub checks: usize,
    pub failures: Vec<IdentityFailure>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the classical second-order identities by direct evaluation of
/// the terms, without going through the form builder.
pub fn classical_identity_suite(
    g: &Sequence,
    range: RangeInclusive<i64>,
) -> Result<IdentityReport> {
    let (a, b) = coefficients(g)?;
    let gh = g.associated()?;
    let inv = binary_invariants(g, g)?;
    let (c_g, d) = (inv.c_g.clone(), inv.discriminant.clone());
    let minus_b = -b.clone();
    let mut report = IdentityReport {
        from: *range.start(),
        to: *range.end(),
        checks: 0,
        failures: Vec::new(),
    };
    let mut check = |identity, n, lhs: Rat, rhs: Rat| {
        report.checks += 1;
        if lhs != rhs {
            report.failures.push(IdentityFailure {
                identity,
                n,
                lhs,
                rhs,
            });
        }
    };

    let pair = binary_invariants(g, &gh)?;
    let hat = binary_invariants(&gh, &gh)?;
    check(
        ClassicalIdentity::AssociatedCharacteristic,
        None,
        hat.c_g,
        -&d * &c_g,
    );
    check(ClassicalIdentity::AssociatedMixed, None, pair.c_gh, rat(0));
    check(
        ClassicalIdentity::AssociatedDeterminant,
        None,
        pair.delta,
        rat(-2) * &c_g,
    );

    for n in range {
        let (prev, cur, next) = (g.eval(n - 1), g.eval(n), g.eval(n + 1));
        let hat_n = gh.eval(n);
        check(
            ClassicalIdentity::AssociatedSquare,
            Some(n),
            &hat_n * &hat_n - &d * &cur * &cur,
            rat(4) * &c_g * rat_pow(&minus_b, n),
        );
        // (x - α y)(x - β y) = x² - A·x·y - B·y² since α + β = A, αβ = -B
        check(
            ClassicalIdentity::CharacteristicProduct,
            Some(n),
            characteristic_value(&a, &b, &cur, &next),
            &c_g * rat_pow(&minus_b, n),
        );
        check(
            ClassicalIdentity::Cassini,
            Some(n),
            &prev * &next - &cur * &cur,
            -&c_g * rat_pow(&minus_b, n - 1),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::DEFAULT_PRECISION;
    use crate::form_builder::build_form;
    use crate::recurrence::{RecurrenceRelation, SequenceFamily};

    fn pair(a: i64, b: i64, g: [i64; 2], h: [i64; 2]) -> (Sequence, Sequence) {
        let r = RecurrenceRelation::from_i64(&[b, a]).unwrap();
        (
            Sequence::from_i64(r.clone(), &g).unwrap(),
            Sequence::from_i64(r, &h).unwrap(),
        )
    }

    #[test]
    fn fibonacci_lucas_invariants() {
        let (f, l) = pair(1, 1, [0, 1], [2, 1]);
        let inv = binary_invariants(&f, &l).unwrap();
        assert_eq!(
            (inv.c_g, inv.c_h, inv.c_gh, inv.delta, inv.discriminant),
            (rat(1), rat(-5), rat(0), rat(-2), rat(5))
        );
        let pkg = binary_form(&f, &l).unwrap();
        assert_eq!(pkg.form_f_tilde.render(false), "-5·x1² + 1·x2²");
        assert_eq!(pkg.rhs_tilde(3), rat(-4));
    }

    #[test]
    fn table_rows() {
        let (g, h) = pair(0, 4, [1, 2], [2, 3]);
        let inv = binary_invariants(&g, &h).unwrap();
        assert_eq!(
            (inv.c_g, inv.c_h, inv.c_gh, inv.delta),
            (rat(0), rat(-7), rat(4), rat(-1))
        );

        let (g, h) = pair(7, -10, [0, 1], [2, 7]);
        let pkg = binary_form(&g, &h).unwrap();
        assert_eq!(pkg.form_f_tilde.render(false), "-9·x1² + 1·x2²");
        assert_eq!(pkg.rhs_tilde(2), rat(400));

        let (g, h) = pair(4, -1, [1, 2], [3, 4]);
        let pkg = binary_form(&g, &h).unwrap();
        assert_eq!(pkg.form_f_tilde.render(false), "-23·x1² + 18·x1·x2 - 3·x2²");
        let fam = SequenceFamily::from_i64(&[-1, 4], &[&[1, 2], &[3, 4]]).unwrap();
        assert_eq!(build_form(&fam).unwrap(), pkg);
    }

    #[test]
    fn coincident_sequences() {
        let (g, h) = pair(1, 1, [3, 4], [3, 4]);
        let inv = binary_invariants(&g, &h).unwrap();
        assert_eq!(inv.delta, rat(0));
        assert_eq!(inv.c_g, inv.c_h);
        assert_eq!(inv.c_gh, rat(-2) * &inv.c_g);
        assert!(matches!(
            binary_form(&g, &h),
            Err(Error::DependentInitials { .. })
        ));
    }

    #[test]
    fn decompositions() {
        let (f, l) = pair(1, 1, [0, 1], [2, 1]);
        let d = binary_decomposition(&f, &l, DEFAULT_PRECISION).unwrap();
        assert_eq!(d.factors.len(), 2);
        let c = d.factors[0].coefficients.to_complex();
        assert!((c[0].value().re.abs() - 5f64.sqrt()).abs() < 1e-12);
        assert!((c[1].value().re + 1.0).abs() < 1e-12);
        assert!(d.residual < 1e-12);

        let (g, h) = pair(7, -10, [1, 2], [1, 5]);
        let d = binary_decomposition(&g, &h, DEFAULT_PRECISION).unwrap();
        assert_eq!(d.residual, 0.0);
        assert_eq!(d.expand_exact().unwrap().render(false), "9·x1·x2");

        let (g, h) = pair(2, -1, [2, 3], [4, 5]);
        let d = binary_decomposition(&g, &h, DEFAULT_PRECISION).unwrap();
        assert_eq!(d.factors.len(), 1);
        assert_eq!(d.factors[0].multiplicity, 2);
        assert_eq!(
            d.expand_exact().unwrap().render(false),
            "1·x1² - 2·x1·x2 + 1·x2²"
        );
    }

    #[test]
    fn fibonacci_identities_hold() {
        let (f, _) = pair(1, 1, [0, 1], [2, 1]);
        let report = classical_identity_suite(&f, -5..=15).unwrap();
        assert!(report.passed(), "{:?}", report.failures);
        assert_eq!(report.checks, 3 + 3 * 21);
        assert_eq!(f.eval(1) * f.eval(3) - f.eval(2) * f.eval(2), rat(1));
    }

    #[test]
    fn zero_sequence_is_trivial() {
        let (z, _) = pair(3, 2, [0, 0], [0, 0]);
        assert!(classical_identity_suite(&z, -3..=3).unwrap().passed());
    }

    #[test]
    fn associated_c_gh_agrees() {
        let (g, h) = pair(4, -1, [1, 2], [3, 4]);
        let inv = binary_invariants(&g, &h).unwrap();
        let (x, y) = c_gh_via_associated(&g, &h).unwrap();
        assert_eq!(x, inv.c_gh);
        assert_eq!(y, inv.c_gh);
    }
}
