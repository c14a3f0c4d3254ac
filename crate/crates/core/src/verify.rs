//! Exact checks of `F(ḡ_n) = δ^n` over ranges of `n`, integer solution
//! streams, and a form-fitting oracle that does not use the matrix method.

use std::ops::RangeInclusive;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{all_monomials, rat_pow, HomogeneousForm, Rat, RatMatrix};
use crate::error::{Error, Result};
use crate::form_builder::FormPackage;
use crate::recurrence::SequenceFamily;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FormSide {
    /// `F(ḡ_n) = δ^n`
    Normalized,
    /// `F̃(ḡ_n) = Δ^k·δ^n`
    Scaled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationFailure {
    pub n: i64,
    pub side: FormSide,
    #[serde(with = "crate::algebra::rat_serde")]
    pub lhs: Rat,
    #[serde(with = "crate::algebra::rat_serde")]
    pub rhs: Rat,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub from: i64,
    pub to: i64,
    /// Number of values of `n` checked.
    pub checked: u64,
    pub failures: Vec<VerificationFailure>,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Combines reports of disjoint ranges; the result does not depend on
    /// the grouping or order of the merges.
    pub fn merge(mut self, other: Self) -> Self {
        if other.checked == 0 {
            return self;
        }
        if self.checked == 0 {
            return other;
        }
        self.from = self.from.min(other.from);
        self.to = self.to.max(other.to);
        self.checked += other.checked;
        self.failures.extend(other.failures);
        self.failures.sort_by_key(|f| (f.n, f.side));
        self.elapsed = self.elapsed.max(other.elapsed);
        self
    }
}

fn check_range(
    family: &SequenceFamily,
    pkg: &FormPackage,
    range: RangeInclusive<i64>,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let (from, to) = (*range.start(), *range.end());
    let mut failures = Vec::new();
    let mut checked = 0;
    let scale = pkg.tilde_scale();
    for n in range {
        let point = family.eval(n);
        let rhs = pkg.rhs(n);
        let lhs = pkg.form_f.eval(&point)?;
        if lhs != rhs {
            failures.push(VerificationFailure {
                n,
                side: FormSide::Normalized,
                lhs,
                rhs: rhs.clone(),
            });
        }
        let lhs = pkg.form_f_tilde.eval(&point)?;
        let rhs = &scale * rhs;
        if lhs != rhs {
            failures.push(VerificationFailure {
                n,
                side: FormSide::Scaled,
                lhs,
                rhs,
            });
        }
        checked += 1;
    }
    Ok(VerificationReport {
        from,
        to,
        checked,
        failures,
        elapsed: start.elapsed(),
    })
}

fn check_package(family: &SequenceFamily, pkg: &FormPackage) -> Result<()> {
    if pkg.arity != family.order() {
        return Err(Error::Arity {
            expected: family.order(),
            found: pkg.arity,
        });
    }
    Ok(())
}

/// Evaluates both sides of the identity exactly for every `n` in `range`.
pub fn verify_identity(
    family: &SequenceFamily,
    pkg: &FormPackage,
    range: RangeInclusive<i64>,
) -> Result<VerificationReport> {
    check_package(family, pkg)?;
    check_range(family, pkg, range)
}

/// Like [`verify_identity`], with the range split into contiguous chunks
/// checked on `workers` threads.
pub fn verify_identity_parallel(
    family: &SequenceFamily,
    pkg: &FormPackage,
    range: RangeInclusive<i64>,
    workers: usize,
) -> Result<VerificationReport> {
    check_package(family, pkg)?;
    let (from, to) = (*range.start(), *range.end());
    if to < from || workers <= 1 {
        return check_range(family, pkg, range);
    }
    let start = Instant::now();
    let len = (to - from + 1) as u64;
    let chunk = len.div_ceil(workers as u64) as i64;
    let chunks: Vec<RangeInclusive<i64>> = (0..workers as i64)
        .map(|w| from + w * chunk..=(from + (w + 1) * chunk - 1).min(to))
        .filter(|r| r.start() <= r.end())
        .collect();
    let results: Vec<Result<VerificationReport>> = std::thread::scope(|s| {
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|r| {
                // each worker gets its own term cache
                let fam = family.clone();
                s.spawn(move || check_range(&fam, pkg, r))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("verification worker panicked"))
            .collect()
    });
    let mut report = results
        .into_iter()
        .try_fold(None::<VerificationReport>, |acc, r| {
            let r = r?;
            Ok::<_, Error>(Some(match acc {
                Some(a) => a.merge(r),
                None => r,
            }))
        })?
        .expect("at least one chunk");
    report.elapsed = start.elapsed();
    Ok(report)
}

/// An integer point on `F̃(x) = Δ^k·δ^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiophantineSolution {
    pub n: i64,
    pub point: Vec<BigInt>,
    pub rhs: BigInt,
}

/// Iterator over the family points `ḡ_n`, each checked against `F̃` before
/// it is yielded. Points that are not integral (possible for `n < 0`) are
/// reported as errors.
pub struct DiophantineSolutions<'a> {
    family: &'a SequenceFamily,
    pkg: FormPackage,
    range: RangeInclusive<i64>,
}

impl Iterator for DiophantineSolutions<'_> {
    type Item = Result<DiophantineSolution>;

    fn next(&mut self) -> Option<Self::Item> {
        let n = self.range.next()?;
        Some(self.solution(n))
    }
}

impl DiophantineSolutions<'_> {
    pub fn package(&self) -> &FormPackage {
        &self.pkg
    }

    fn solution(&self, n: i64) -> Result<DiophantineSolution> {
        let values = self.family.eval(n);
        let rhs = self.pkg.rhs_tilde(n);
        let lhs = self.pkg.form_f_tilde.eval(&values)?;
        if lhs != rhs {
            return Err(Error::Invariant(format!(
                "F̃ at n = {n} evaluates to {lhs}, expected {rhs}"
            )));
        }
        if !rhs.is_integer() || values.iter().any(|v| !v.is_integer()) {
            return Err(Error::NonIntegral(format!("family point at n = {n}")));
        }
        Ok(DiophantineSolution {
            n,
            point: values.into_iter().map(|v| v.to_integer()).collect(),
            rhs: rhs.to_integer(),
        })
    }
}

/// Solutions `(G_n^(1), …, G_n^(k))` of the integer equation `F̃(x) = Δ^k·δ^n`.
pub fn diophantine_solutions(
    family: &SequenceFamily,
    range: RangeInclusive<i64>,
) -> Result<DiophantineSolutions<'_>> {
    if family.relation().gammas().iter().any(|g| !g.is_integer()) {
        return Err(Error::NonIntegral("recurrence coefficients".into()));
    }
    let g = family.g();
    if (0..g.rows()).any(|i| g.row(i).iter().any(|v| !v.is_integer())) {
        return Err(Error::NonIntegral("initial values".into()));
    }
    family.require_independent()?;
    let pkg = crate::form_builder::build_form(family)?;
    Ok(DiophantineSolutions { family, pkg, range })
}

/// Fits `F` directly: one linear equation `Σ_e c_e·∏_u (G_n^(u))^(e_u) = δ^n`
/// per sample `n`, over all degree-`k` exponent vectors `e`.
pub fn oracle_fit_form(family: &SequenceFamily, sample_ns: &[i64]) -> Result<HomogeneousForm> {
    family.require_independent()?;
    let k = family.order();
    let monomials = all_monomials(k, k as u32);
    let base = family.relation().base();
    let mut rows = Vec::with_capacity(sample_ns.len());
    let mut rhs = Vec::with_capacity(sample_ns.len());
    for &n in sample_ns {
        let point = family.eval(n);
        rows.push(
            monomials
                .iter()
                .map(|m| {
                    point
                        .iter()
                        .zip(&m.0)
                        .fold(Rat::from_integer(1.into()), |acc, (x, &e)| {
                            acc * rat_pow(x, e as i64)
                        })
                })
                .collect(),
        );
        rhs.push(rat_pow(&base, n));
    }
    if rows.is_empty() {
        return Err(Error::Underdetermined {
            rank: 0,
            unknowns: monomials.len(),
        });
    }
    let coeffs = RatMatrix::from_rows(rows)?.solve_unique(&rhs)?;
    HomogeneousForm::from_terms(
        k,
        k as u32,
        monomials
            .into_iter()
            .zip(coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, c)| (m.0, c)),
    )
}

/// [`oracle_fit_form`] starting from `sample_ns`, appending the next integers
/// after the largest sample while the system stays rank-deficient, up to
/// `max_extra` additional samples. Returns the form and the samples used.
pub fn oracle_fit_form_extending(
    family: &SequenceFamily,
    sample_ns: &[i64],
    max_extra: usize,
) -> Result<(HomogeneousForm, Vec<i64>)> {
    let mut ns = sample_ns.to_vec();
    let mut next = ns.iter().max().map_or(0, |m| m + 1);
    loop {
        match oracle_fit_form(family, &ns) {
            Err(Error::Underdetermined { .. }) if ns.len() < sample_ns.len() + max_extra => {
                ns.push(next);
                next += 1;
            }
            other => return other.map(|f| (f, ns)),
        }
    }
}

/// The minimum number of samples, `C(2k-1, k)`.
pub fn minimum_samples(k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc * (2 * k - 1 - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, ratio};
    use crate::form_builder::{build_form, cassini_form};
    use crate::recurrence::{RecurrenceRelation, Sequence};

    fn narayana() -> SequenceFamily {
        SequenceFamily::from_i64(&[1, 0, 1], &[&[0, 1, 1], &[3, 1, 1], &[3, 0, 2]]).unwrap()
    }

    fn fib_lucas() -> SequenceFamily {
        SequenceFamily::from_i64(&[1, 1], &[&[0, 1], &[2, 1]]).unwrap()
    }

    #[test]
    fn narayana_identity_holds() {
        let fam = narayana();
        let pkg = build_form(&fam).unwrap();
        let report = verify_identity(&fam, &pkg, 0..=30).unwrap();
        assert!(report.passed());
        assert_eq!(report.checked, 31);
        assert_eq!(pkg.rhs_tilde(17), rat(-216));
    }

    #[test]
    fn fibonacci_lucas_negative_range() {
        let fam = fib_lucas();
        let pkg = build_form(&fam).unwrap();
        assert!(verify_identity(&fam, &pkg, -10..=10).unwrap().passed());
        assert_eq!(fam.eval(-1), vec![rat(1), rat(-1)]);
        assert_eq!(pkg.form_f_tilde.eval(&fam.eval(-1)).unwrap(), rat(-4));
        assert_eq!(pkg.form_f.eval(&fam.eval(0)).unwrap(), rat(1));
    }

    #[test]
    fn wrong_package_is_reported() {
        let fam = fib_lucas();
        let mut pkg = build_form(&fam).unwrap();
        pkg.base = rat(1);
        let report = verify_identity(&fam, &pkg, 0..=3).unwrap();
        assert_eq!(
            report.failures.iter().map(|f| f.n).collect::<Vec<_>>(),
            vec![1, 1, 3, 3]
        );
    }

    #[test]
    fn parallel_matches_sequential() {
        let fam = narayana();
        let pkg = build_form(&fam).unwrap();
        let mut pkg_bad = pkg.clone();
        pkg_bad.base = rat(-1);
        for p in [&pkg, &pkg_bad] {
            let a = verify_identity(&fam, p, -7..=40).unwrap();
            let b = verify_identity_parallel(&fam, p, -7..=40, 4).unwrap();
            assert_eq!((a.from, a.to, a.checked), (b.from, b.to, b.checked));
            assert_eq!(a.failures, b.failures);
        }
    }

    #[test]
    fn narayana_solutions() {
        let fam = narayana();
        let sols: Vec<_> = diophantine_solutions(&fam, 0..=50)
            .unwrap()
            .collect::<Result<_>>()
            .unwrap();
        assert_eq!(sols.len(), 51);
        let big = |v: i64| BigInt::from(v);
        assert_eq!(sols[0].point, vec![big(0), big(3), big(3)]);
        assert_eq!(sols[0].rhs, big(-216));
        assert_eq!(sols[1].point, vec![big(1), big(1), big(0)]);
    }

    #[test]
    fn fibonacci_lucas_solution() {
        let fam = fib_lucas();
        let s = diophantine_solutions(&fam, 2..=2)
            .unwrap()
            .next()
            .unwrap()
            .unwrap();
        assert_eq!(s.point, vec![BigInt::from(1), BigInt::from(3)]);
        assert_eq!(s.rhs, BigInt::from(4));
    }

    #[test]
    fn rational_family_is_rejected() {
        let r = RecurrenceRelation::new(vec![ratio(1, 2), rat(1)]).unwrap();
        let fam = SequenceFamily::new(r, RatMatrix::identity(2)).unwrap();
        assert!(matches!(
            diophantine_solutions(&fam, 0..=3),
            Err(Error::NonIntegral(_))
        ));
    }

    #[test]
    fn negative_index_points_may_be_fractional() {
        let fam = SequenceFamily::from_i64(&[2, 1], &[&[1, 0], &[0, 1]]).unwrap();
        let mut it = diophantine_solutions(&fam, -1..=0).unwrap();
        assert!(matches!(it.next(), Some(Err(Error::NonIntegral(_)))));
        assert!(it.next().unwrap().is_ok());
    }

    #[test]
    fn oracle_recovers_golden_forms() {
        let fam = fib_lucas();
        let f = oracle_fit_form(&fam, &[0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(f.coeff(&[2, 0]), ratio(-5, 4));
        assert_eq!(f.coeff(&[0, 2]), ratio(1, 4));
        assert_eq!(f, build_form(&fam).unwrap().form_f);

        let fam = narayana();
        let f = oracle_fit_form(&fam, &(0..=14).collect::<Vec<_>>()).unwrap();
        assert_eq!(f.scale(&rat(-216)), build_form(&fam).unwrap().form_f_tilde);
    }

    #[test]
    fn oracle_matches_tribonacci_cassini() {
        let r = RecurrenceRelation::from_i64(&[1, 1, 1]).unwrap();
        let seq = Sequence::from_i64(r, &[0, 0, 1]).unwrap();
        let fam = seq.shifted_family();
        let (f, _) = oracle_fit_form_extending(&fam, &(0..=14).collect::<Vec<_>>(), 20).unwrap();
        assert_eq!(f, cassini_form(&seq).unwrap().form_f);
    }

    #[test]
    fn oracle_reports_rank_deficiency() {
        // roots ±2 make the monomials G², GH, H² linearly dependent along the family
        let fam = SequenceFamily::from_i64(&[4, 0], &[&[1, 2], &[2, 3]]).unwrap();
        let err = oracle_fit_form_extending(&fam, &[0, 1, 2], 10).unwrap_err();
        assert_eq!(
            err,
            Error::Underdetermined {
                rank: 2,
                unknowns: 3
            }
        );
        assert_eq!(
            oracle_fit_form(&fam, &[0]).unwrap_err(),
            Error::Underdetermined {
                rank: 1,
                unknowns: 3
            }
        );
    }

    #[test]
    fn sample_counts() {
        assert_eq!(minimum_samples(2), 3);
        assert_eq!(minimum_samples(3), 10);
        assert_eq!(minimum_samples(4), 35);
    }
}
