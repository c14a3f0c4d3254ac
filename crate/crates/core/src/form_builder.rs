//! The form `F` with `F(ḡ_n) = δ^n`, built two independent ways.
//!
//! [`build_form`] writes every entry of `M^n` as a linear combination of the
//! family terms `G_n^(u)` (coefficients obtained by solving against the
//! initial vectors of the sequences) and takes the determinant symbolically.
//! [`build_form_via_companion`] instead expands `det(G·T^n) / Δ`, where the
//! columns of `G·T^n` are `ḡ_n, M·ḡ_n, …, M^{k-1}·ḡ_n`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{rat_pow, rat_serde, HomogeneousForm, Rat, RatMatrix, Scalar};
use crate::algebra::{Form, Monomial};
use crate::error::{Error, Result};
use crate::recurrence::{Sequence, SequenceFamily};

/// `F`, `F̃ = Δ^k·F`, `Δ` and `δ` for one family.
#[derive(Clone, Debug, PartialEq)]
pub struct FormPackage {
    pub form_f: HomogeneousForm,
    pub form_f_tilde: HomogeneousForm,
    pub delta: Rat,
    pub base: Rat,
    pub arity: usize,
}

impl FormPackage {
    /// Assembles a package from `F`, deriving `F̃ = Δ^k·F`.
    pub fn from_form(form_f: HomogeneousForm, delta: Rat, base: Rat) -> Self {
        let arity = form_f.arity();
        let scale = rat_pow(&delta, arity as i64);
        let form_f_tilde = form_f.scale(&scale);
        Self {
            form_f,
            form_f_tilde,
            delta,
            base,
            arity,
        }
    }

    /// `Δ^k`, the constant on the right of `F̃(ḡ_n) = Δ^k·δ^n`.
    pub fn tilde_scale(&self) -> Rat {
        rat_pow(&self.delta, self.arity as i64)
    }

    /// `δ^n`
    pub fn rhs(&self, n: i64) -> Rat {
        rat_pow(&self.base, n)
    }

    /// `Δ^k·δ^n`
    pub fn rhs_tilde(&self, n: i64) -> Rat {
        self.tilde_scale() * self.rhs(n)
    }
}

/// `c[i][j][u]` with `m_{i,j}^{(n)} = Σ_u c[i][j][u]·G_n^(u)` (all 0-based).
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTensor {
    k: usize,
    c: Vec<Rat>,
}

impl CoefficientTensor {
    pub fn order(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize, u: usize) -> &Rat {
        &self.c[(i * self.k + j) * self.k + u]
    }

    /// The slice `(c[i][j][0], …, c[i][j][k-1])`.
    pub fn slice(&self, i: usize, j: usize) -> &[Rat] {
        let start = (i * self.k + j) * self.k;
        &self.c[start..start + self.k]
    }

    /// `Σ_u c[i][j][u]·x_u` as a linear form.
    pub fn linear_form(&self, i: usize, j: usize) -> HomogeneousForm {
        Form::linear(self.slice(i, j))
    }
}

/// Solves the `k²` systems `m̄_{i,j} = Σ_u c[i][j][u]·r̄_u`, where `r̄_u`
/// are the initial vectors of the sequences and `m̄_{i,j}` collects the
/// `(i,j)` entries of `M^0, …, M^{k-1}`.
pub fn linear_coefficients(family: &SequenceFamily) -> Result<CoefficientTensor> {
    let k = family.order();
    let m = family.step_matrix()?;
    let powers = (0..k as u32)
        .map(|p| m.pow(p))
        .collect::<Result<Vec<_>>>()?;
    // columns r̄_1, …, r̄_k
    let basis_inv = family.g().transpose().inverse()?;
    let mut c = Vec::with_capacity(k * k * k);
    for i in 0..k {
        for j in 0..k {
            let rhs: Vec<Rat> = powers.iter().map(|p| p.get(i, j).clone()).collect();
            c.extend(basis_inv.mul_vec(&rhs)?);
        }
    }
    Ok(CoefficientTensor { k, c })
}

/// Determinant of a square matrix of forms, expanded by cofactors. Minors
/// are shared across the expansion through a table indexed by column set.
pub fn symbolic_det<T: Scalar>(entries: &[Vec<Form<T>>], arity: usize) -> Form<T> {
    let k = entries.len();
    debug_assert!(entries.iter().all(|r| r.len() == k));
    // minors[mask]: det of rows 0..|mask| restricted to the columns in mask
    let mut minors: Vec<Option<Form<T>>> = vec![None; 1 << k];
    minors[0] = Some(Form::constant(arity, T::one_elem()));
    for mask in 1usize..(1 << k) {
        let row = mask.count_ones() as usize - 1;
        let mut acc: Option<Form<T>> = None;
        for col in 0..k {
            if mask & (1 << col) == 0 {
                continue;
            }
            let entry = &entries[row][col];
            if entry.is_zero() {
                continue;
            }
            let rest = minors[mask & !(1 << col)]
                .as_ref()
                .expect("filled in order");
            if rest.is_zero() {
                continue;
            }
            let mut term = entry.mul(rest);
            // sign (-1)^{row + position of col in mask}
            let above = (mask >> (col + 1)).count_ones();
            if above % 2 == 1 {
                term = term.neg();
            }
            acc = Some(match acc {
                Some(a) => a.add(&term),
                None => term,
            });
        }
        let degree = (row + 1) as u32;
        minors[mask] = Some(acc.unwrap_or_else(|| Form::zero(arity, degree)));
    }
    minors[(1 << k) - 1].take().expect("full minor")
}

/// [`symbolic_det`] for rational forms, computed over the integers on rows
/// scaled to integer coefficients and divided back at the end.
pub fn rational_symbolic_det(entries: &[Vec<HomogeneousForm>], arity: usize) -> HomogeneousForm {
    let mut scale = BigInt::one();
    let integral: Vec<Vec<Form<BigInt>>> = entries
        .iter()
        .map(|row| {
            let l = row
                .iter()
                .flat_map(|f| f.terms().map(|(_, c)| c.denom().clone()))
                .fold(BigInt::one(), |acc, d| acc.lcm(&d));
            scale *= &l;
            row.iter()
                .map(|f| f.map_coeffs(|c| (c * &l).to_integer()))
                .collect()
        })
        .collect();
    symbolic_det(&integral, arity).map_coeffs(|c| Rat::new(c.clone(), scale.clone()))
}

fn check_base(family: &SequenceFamily, m: &RatMatrix) -> Result<Rat> {
    let base = family.relation().base();
    let det_m = m.det()?;
    if det_m != base {
        return Err(Error::Invariant(format!(
            "det(M) = {det_m} but (-1)^(k+1)·γ_0 = {base}"
        )));
    }
    Ok(base)
}

/// `F = det[Σ_u c[i][j][u]·x_u]`, so that `F(ḡ_n) = det(M^n) = δ^n`.
pub fn build_form(family: &SequenceFamily) -> Result<FormPackage> {
    let delta = family.require_independent()?;
    let k = family.order();
    let tensor = linear_coefficients(family)?;
    let base = check_base(family, &family.step_matrix()?)?;
    let entries: Vec<Vec<HomogeneousForm>> = (0..k)
        .map(|i| (0..k).map(|j| tensor.linear_form(i, j)).collect())
        .collect();
    let form_f = rational_symbolic_det(&entries, k);
    Ok(FormPackage::from_form(form_f, delta, base))
}

/// Same package along the companion-matrix route: `M = G·T·G⁻¹`, the
/// `(i,j)` entry of `G·T^n` is `(M^j·ḡ_n)_i = Σ_u (M^j)_{i,u}·G_n^(u)`, and
/// `F = det(G·T^n)·det(G⁻¹)`.
pub fn build_form_via_companion(family: &SequenceFamily) -> Result<FormPackage> {
    let delta = family.require_independent()?;
    let k = family.order();
    let g = family.g();
    let t = family.relation().companion_matrix();
    let m = g.mul(&t)?.mul(&g.inverse()?)?;
    let base = check_base(family, &m)?;
    let powers = (0..k as u32)
        .map(|p| m.pow(p))
        .collect::<Result<Vec<_>>>()?;
    let entries: Vec<Vec<HomogeneousForm>> = (0..k)
        .map(|i| (0..k).map(|j| Form::linear(powers[j].row(i))).collect())
        .collect();
    let det_gtn = rational_symbolic_det(&entries, k);
    let form_f = det_gtn.scale(&delta.recip());
    Ok(FormPackage::from_form(form_f, delta, base))
}

/// Cassini-like form of one sequence: [`build_form`] on its shift family
/// `(G_n, G_{n+1}, …, G_{n+k-1})`.
pub fn cassini_form(seq: &Sequence) -> Result<FormPackage> {
    let family = seq.shifted_family();
    build_form(&family).map_err(|e| match e {
        Error::DependentInitials { delta, detail } => Error::DependentInitials {
            delta,
            detail: format!(
                "shift family of ({}): {detail}",
                seq.initials()
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        },
        other => other,
    })
}

/// Wire form of a [`FormPackage`]: rationals as strings, terms listed in
/// canonical order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormPackageRecord {
    pub arity: usize,
    #[serde(with = "rat_serde")]
    pub delta: Rat,
    #[serde(with = "rat_serde")]
    pub base: Rat,
    pub form_f: Vec<TermRecord>,
    pub form_f_tilde: Vec<TermRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exponents: Vec<u32>,
    #[serde(with = "rat_serde")]
    pub coefficient: Rat,
}

fn terms_of(f: &HomogeneousForm, dense: bool) -> Vec<TermRecord> {
    let pairs: Vec<(Monomial, Rat)> = if dense {
        f.dense_terms()
    } else {
        f.terms().map(|(m, c)| (m.clone(), c.clone())).collect()
    };
    pairs
        .into_iter()
        .map(|(m, c)| TermRecord {
            exponents: m.0,
            coefficient: c,
        })
        .collect()
}

impl FormPackage {
    pub fn to_record(&self, dense: bool) -> FormPackageRecord {
        FormPackageRecord {
            arity: self.arity,
            delta: self.delta.clone(),
            base: self.base.clone(),
            form_f: terms_of(&self.form_f, dense),
            form_f_tilde: terms_of(&self.form_f_tilde, dense),
        }
    }

    pub fn from_record(rec: &FormPackageRecord) -> Result<Self> {
        let build = |terms: &[TermRecord]| {
            Form::from_terms(
                rec.arity,
                rec.arity as u32,
                terms
                    .iter()
                    .map(|t| (t.exponents.clone(), t.coefficient.clone())),
            )
        };
        let form_f = build(&rec.form_f)?;
        let form_f_tilde = build(&rec.form_f_tilde)?;
        let pkg = Self {
            form_f,
            form_f_tilde,
            delta: rec.delta.clone(),
            base: rec.base.clone(),
            arity: rec.arity,
        };
        if pkg.base.is_zero() || pkg.form_f.scale(&pkg.tilde_scale()) != pkg.form_f_tilde {
            return Err(Error::Invariant(
                "record violates F̃ = Δ^k·F or δ ≠ 0".into(),
            ));
        }
        Ok(pkg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{all_monomials, rat, ratio};
    use crate::recurrence::RecurrenceRelation;

    fn binary(rows: &[&[i64]], gammas: &[i64]) -> SequenceFamily {
        SequenceFamily::from_i64(gammas, rows).unwrap()
    }

    fn quad(a: i64, b: i64, c: i64) -> HomogeneousForm {
        Form::from_terms(
            2,
            2,
            vec![
                (vec![2, 0], rat(a)),
                (vec![1, 1], rat(b)),
                (vec![0, 2], rat(c)),
            ],
        )
        .unwrap()
    }

    fn narayana() -> SequenceFamily {
        SequenceFamily::from_i64(&[1, 0, 1], &[&[0, 1, 1], &[3, 1, 1], &[3, 0, 2]]).unwrap()
    }

    #[test]
    fn coefficient_tensor_invariant() {
        let fam = binary(&[&[0, 1], &[2, 1]], &[1, 1]);
        let c = linear_coefficients(&fam).unwrap();
        let m = fam.step_matrix().unwrap();
        for n in 0..2u32 {
            let mn = m.pow(n).unwrap();
            let g = fam.eval(n as i64);
            for i in 0..2 {
                for j in 0..2 {
                    let v = c
                        .slice(i, j)
                        .iter()
                        .zip(&g)
                        .fold(Rat::zero(), |acc, (a, b)| acc + a * b);
                    assert_eq!(&v, mn.get(i, j));
                }
            }
        }
        // m̄_{1,1} = (1, 1/2)
        let mbar = vec![rat(1), ratio(1, 2)];
        let back = fam.g().transpose().mul_vec(c.slice(0, 0)).unwrap();
        assert_eq!(back, mbar);
    }

    #[test]
    fn orthonormal_tensor_reads_powers_directly() {
        let fam = SequenceFamily::orthonormal(RecurrenceRelation::from_i64(&[1, 0, 1]).unwrap());
        let c = linear_coefficients(&fam).unwrap();
        let m = fam.step_matrix().unwrap();
        for u in 0..3 {
            let mu = m.pow(u as u32).unwrap();
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(c.get(i, j, u), mu.get(i, j));
                }
            }
        }
    }

    #[test]
    fn diagonal_step_matrix_kills_off_diagonal_slices() {
        let fam = binary(&[&[1, 2], &[1, 5]], &[-10, 7]);
        let c = linear_coefficients(&fam).unwrap();
        assert!(c.slice(0, 1).iter().all(Zero::is_zero));
        assert!(c.slice(1, 0).iter().all(Zero::is_zero));
    }

    #[test]
    fn fibonacci_lucas() {
        let pkg = build_form(&binary(&[&[0, 1], &[2, 1]], &[1, 1])).unwrap();
        assert_eq!(pkg.form_f_tilde, quad(-5, 0, 1));
        assert_eq!(pkg.delta, rat(-2));
        assert_eq!(pkg.base, rat(-1));
        let alt = build_form_via_companion(&binary(&[&[0, 1], &[2, 1]], &[1, 1])).unwrap();
        assert_eq!(alt, pkg);
    }

    #[test]
    fn narayana_coefficients() {
        let pkg = build_form(&narayana()).unwrap();
        let want = [-187, 159, -45, -189, 306, -117, 1, -45, 63, -27];
        let got: Vec<Rat> = pkg
            .form_f_tilde
            .dense_terms()
            .into_iter()
            .map(|(_, c)| c)
            .collect();
        assert_eq!(got, want.iter().map(|&c| rat(c)).collect::<Vec<_>>());
        assert_eq!(pkg.delta, rat(-6));
        assert_eq!(pkg.base, rat(1));
        assert_eq!(build_form_via_companion(&narayana()).unwrap(), pkg);
        assert_eq!(all_monomials(3, 3).len(), pkg.form_f_tilde.len());
    }

    #[test]
    fn table_one_rows() {
        let pkg = build_form(&binary(&[&[2, 3], &[4, 5]], &[-1, 2])).unwrap();
        assert_eq!(pkg.form_f_tilde, quad(1, -2, 1));
        assert_eq!((pkg.delta.clone(), pkg.base.clone()), (rat(-2), rat(1)));
        let pkg = build_form_via_companion(&binary(&[&[1, 2], &[3, 4]], &[-1, 4])).unwrap();
        assert_eq!(pkg.form_f_tilde, quad(-23, 18, -3));
        assert_eq!((pkg.delta.clone(), pkg.base.clone()), (rat(-2), rat(1)));
    }

    #[test]
    fn cassini_fibonacci() {
        let fib =
            Sequence::from_i64(RecurrenceRelation::from_i64(&[1, 1]).unwrap(), &[0, 1]).unwrap();
        let pkg = cassini_form(&fib).unwrap();
        assert_eq!(pkg.form_f_tilde, quad(-1, -1, 1));
        assert_eq!(pkg.form_f, quad(-1, -1, 1));
        assert_eq!(pkg.delta, rat(-1));
        assert_eq!(pkg.base, rat(-1));
    }

    #[test]
    fn cassini_degenerate_names_shift_family() {
        let zero =
            Sequence::from_i64(RecurrenceRelation::from_i64(&[1, 1]).unwrap(), &[0, 0]).unwrap();
        match cassini_form(&zero) {
            Err(Error::DependentInitials { detail, .. }) => {
                assert!(detail.contains("shift family"))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn symbolic_det_of_constants_matches_bareiss() {
        let m = RatMatrix::from_i64_rows(&[
            &[2, -1, 0, 3],
            &[1, 4, 2, 0],
            &[0, 1, -3, 5],
            &[7, 0, 1, 1],
        ])
        .unwrap();
        let entries: Vec<Vec<HomogeneousForm>> = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| Form::constant(1, m.get(i, j).clone()))
                    .collect()
            })
            .collect();
        let d = symbolic_det(&entries, 1);
        assert_eq!(d.coeff(&[0]), m.det().unwrap());
    }

    #[test]
    fn record_round_trip() {
        let pkg = build_form(&narayana()).unwrap();
        let rec = pkg.to_record(false);
        assert_eq!(FormPackage::from_record(&rec).unwrap(), pkg);
        let dense = pkg.to_record(true);
        assert_eq!(FormPackage::from_record(&dense).unwrap(), pkg);
    }
}
