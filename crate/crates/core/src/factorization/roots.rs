//! Roots of the characteristic polynomial with exact multiplicities.
//!
//! Multiplicities come from the square-free decomposition, rational roots
//! from the rational root test, and the rest from Aberth-Ehrlich iteration
//! on each square-free part. The number of real roots of a part is counted
//! exactly with a Sturm sequence, which decides which approximations are
//! snapped onto the real axis; non-real roots are then paired into exact
//! conjugates.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{rat_to_f64, ComplexApprox, Rat, Scalar, UniPoly};
use crate::error::{Error, Result};
use crate::recurrence::RecurrenceRelation;

/// Default target for root error bounds, relative to `max(1, |α|)`.
pub const DEFAULT_PRECISION: f64 = 1e-12;

/// Sweep budget for the simultaneous iteration.
pub const MAX_SWEEPS: usize = 200;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum RootValue {
    Exact(#[serde(with = "crate::algebra::rat_serde")] Rat),
    Approx(ComplexApprox),
}

impl RootValue {
    pub fn to_complex(&self) -> ComplexApprox {
        match self {
            RootValue::Exact(r) => ComplexApprox::from_rat(r),
            RootValue::Approx(c) => *c,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, RootValue::Exact(_))
    }
}

/// A root of the characteristic polynomial and its multiplicity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootDatum {
    pub value: RootValue,
    pub multiplicity: usize,
}

/// All roots of the relation's characteristic polynomial.
pub fn char_roots(relation: &RecurrenceRelation, precision: f64) -> Result<Vec<RootDatum>> {
    poly_roots(&relation.char_poly(), precision)
}

/// Roots of any nonzero rational polynomial, grouped by multiplicity.
pub fn poly_roots(p: &UniPoly, precision: f64) -> Result<Vec<RootDatum>> {
    let mut exact = Vec::new();
    let mut approx = Vec::new();
    for (part, mult) in p.squarefree_decompose()? {
        let mut rest = part.clone();
        for r in part.rational_roots() {
            rest = rest.div_exact(&UniPoly::linear_root(&r))?;
            exact.push(RootDatum {
                value: RootValue::Exact(r),
                multiplicity: mult,
            });
        }
        if rest.degree().unwrap_or(0) > 0 {
            for z in squarefree_complex_roots(&rest, precision)? {
                approx.push(RootDatum {
                    value: RootValue::Approx(z),
                    multiplicity: mult,
                });
            }
        }
    }
    exact.sort_by(|a, b| match (&a.value, &b.value) {
        (RootValue::Exact(x), RootValue::Exact(y)) => x.cmp(y),
        _ => unreachable!(),
    });
    approx.sort_by(|a, b| {
        let (x, y) = (a.value.to_complex(), b.value.to_complex());
        let key = |c: &ComplexApprox| (c.imag != 0.0, c.real, -c.imag);
        key(&x)
            .partial_cmp(&key(&y))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    exact.extend(approx);
    Ok(exact)
}

/// Number of distinct real roots, by Sturm's theorem.
pub fn count_real_roots(p: &UniPoly) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]).expect("nonzero");
        if r.is_zero() {
            break;
        }
        chain.push(r.scale(&Rat::from_integer((-1).into())));
    }
    let changes = |signs: Vec<i8>| {
        let nz: Vec<i8> = signs.into_iter().filter(|&s| s != 0).collect();
        nz.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let sign = |r: &Rat| -> i8 {
        if r.is_positive() {
            1
        } else if r.is_negative() {
            -1
        } else {
            0
        }
    };
    let at_pos: Vec<i8> = chain.iter().map(|q| sign(&q.leading())).collect();
    let at_neg: Vec<i8> = chain
        .iter()
        .map(|q| {
            let s = sign(&q.leading());
            if q.degree().unwrap_or(0) % 2 == 1 {
                -s
            } else {
                s
            }
        })
        .collect();
    changes(at_neg) - changes(at_pos)
}

/// Horner value and a bound on its rounding plus coefficient-conversion error.
fn eval_with_bound(coeffs: &[f64], z: Complex64) -> (Complex64, f64) {
    let d = coeffs.len().saturating_sub(1) as f64;
    let r = z.norm();
    let mut v = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    for &c in coeffs.iter().rev() {
        v = v * z + c;
        mag = mag * r + c.abs();
    }
    (v, (2.0 * d + 4.0) * f64::EPSILON * mag)
}

/// Aberth-Ehrlich on a square-free rational polynomial without rational
/// roots. Each returned value carries an inclusion radius.
fn squarefree_complex_roots(p: &UniPoly, precision: f64) -> Result<Vec<ComplexApprox>> {
    let d = p.degree().expect("nonzero");
    let monic = p.monic();
    let coeffs: Vec<f64> = monic.coeffs().iter().map(rat_to_f64).collect();
    let dcoeffs: Vec<f64> = monic.derivative().coeffs().iter().map(rat_to_f64).collect();

    if d == 1 {
        let z = -coeffs[0];
        let bound = f64::EPSILON * z.abs();
        return Ok(vec![ComplexApprox::new(z, 0.0, bound)]);
    }

    let cauchy = 1.0 + coeffs[..d].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut zs: Vec<Complex64> = (0..d)
        .map(|j| {
            let angle = 2.0 * PI * j as f64 / d as f64 + 0.4;
            Complex64::from_polar(cauchy * (1.0 + 0.01 * j as f64), angle)
        })
        .collect();

    let bounds_for = |zs: &[Complex64]| -> Vec<f64> {
        zs.iter()
            .map(|&z| {
                let (pv, pe) = eval_with_bound(&coeffs, z);
                let (dv, de) = eval_with_bound(&dcoeffs, z);
                let denom = dv.norm() - de;
                if denom <= 0.0 {
                    f64::INFINITY
                } else {
                    d as f64 * (pv.norm() + pe) / denom
                }
            })
            .collect()
    };
    let within = |zs: &[Complex64], bounds: &[f64]| {
        zs.iter()
            .zip(bounds)
            .all(|(z, b)| *b <= precision * z.norm().max(1.0))
    };

    let mut sweeps = 0;
    loop {
        let mut max_step: f64 = 0.0;
        for j in 0..d {
            let z = zs[j];
            let pv = eval_with_bound(&coeffs, z).0;
            if pv == Complex64::zero() {
                continue;
            }
            let dv = eval_with_bound(&dcoeffs, z).0;
            let ratio = pv / dv;
            let s: Complex64 = (0..d)
                .filter(|&l| l != j)
                .map(|l| Complex64::new(1.0, 0.0) / (z - zs[l]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if step.is_finite() {
                zs[j] = z - step;
                max_step = max_step.max(step.norm() / z.norm().max(1.0));
            }
        }
        sweeps += 1;
        if max_step <= 4.0 * f64::EPSILON || sweeps >= MAX_SWEEPS {
            break;
        }
    }

    let mut roots = close_under_conjugation(&monic, zs);
    let bounds = bounds_for(&roots.iter().map(|r| r.value()).collect::<Vec<_>>());
    for (r, b) in roots.iter_mut().zip(&bounds) {
        r.error_bound = r.error_bound.max(*b);
    }
    let centers: Vec<Complex64> = roots.iter().map(|r| r.value()).collect();
    let all_bounds: Vec<f64> = roots.iter().map(|r| r.error_bound).collect();
    if !within(&centers, &all_bounds) {
        let achieved = roots
            .iter()
            .map(|r| r.error_bound / r.abs().max(1.0))
            .fold(0.0, f64::max);
        return Err(Error::Precision {
            target: precision,
            achieved,
        });
    }
    Ok(roots)
}

/// Snaps the Sturm-counted real roots onto the real axis and pairs the rest
/// into exact conjugates. Returned bounds account for the moves.
fn close_under_conjugation(p: &UniPoly, zs: Vec<Complex64>) -> Vec<ComplexApprox> {
    let real_count = count_real_roots(p);
    let mut order: Vec<usize> = (0..zs.len()).collect();
    order.sort_by(|&a, &b| zs[a].im.abs().partial_cmp(&zs[b].im.abs()).unwrap());
    let mut out = Vec::with_capacity(zs.len());
    for &i in &order[..real_count] {
        out.push(ComplexApprox::new(zs[i].re, 0.0, zs[i].im.abs()));
    }
    let mut upper: Vec<Complex64> = Vec::new();
    let mut lower: Vec<Complex64> = Vec::new();
    for &i in &order[real_count..] {
        if zs[i].im >= 0.0 {
            upper.push(zs[i]);
        } else {
            lower.push(zs[i]);
        }
    }
    // an unbalanced split means iteration failed; leave the values as they are
    if upper.len() != lower.len() {
        out.extend(upper.into_iter().chain(lower).map(ComplexApprox::exact));
        return out;
    }
    for u in upper {
        let (idx, _) = lower
            .iter()
            .enumerate()
            .map(|(i, l)| (i, (l.conj() - u).norm()))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .expect("balanced");
        let l = lower.swap_remove(idx);
        let mid = (u + l.conj()) * 0.5;
        let shift = (u - mid).norm();
        let z = ComplexApprox::from_complex(mid, shift);
        out.push(z);
        out.push(z.conj());
    }
    out
}
