//! The basis `S_n^(i,j) = n^j·α_i^n` of the solution space, its initial
//! matrix `G_S` and the block matrix `B` with `G_S* = B·G_S`.

use crate::algebra::{rat, ComplexApprox, Matrix, Rat, RatMatrix, Scalar};
use crate::error::Result;
use crate::recurrence::RecurrenceRelation;

use super::roots::{RootDatum, RootValue};

/// A matrix that is exact when every root involved is rational.
#[derive(Clone, Debug, PartialEq)]
pub enum MixedMatrix {
    Exact(RatMatrix),
    Approx(Matrix<ComplexApprox>),
}

impl MixedMatrix {
    pub fn to_complex(&self) -> Matrix<ComplexApprox> {
        match self {
            MixedMatrix::Exact(m) => m.to_complex(),
            MixedMatrix::Approx(m) => m.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(match (self, other) {
            (MixedMatrix::Exact(a), MixedMatrix::Exact(b)) => MixedMatrix::Exact(a.mul(b)?),
            _ => MixedMatrix::Approx(self.to_complex().mul(&other.to_complex())?),
        })
    }

    /// Exact equality for two exact matrices; otherwise every pair of
    /// entries must have intersecting error disks.
    pub fn agrees_with(&self, other: &Self) -> bool {
        match (self, other) {
            (MixedMatrix::Exact(a), MixedMatrix::Exact(b)) => a == b,
            _ => {
                let (a, b) = (self.to_complex(), other.to_complex());
                a.rows() == b.rows()
                    && a.cols() == b.cols()
                    && (0..a.rows())
                        .all(|i| (0..a.cols()).all(|j| a.get(i, j).overlaps(b.get(i, j))))
            }
        }
    }

    /// Product of the diagonal; the determinant of a triangular matrix.
    pub fn diagonal_product(&self) -> RootValue {
        match self {
            MixedMatrix::Exact(m) => {
                RootValue::Exact((0..m.rows()).fold(rat(1), |acc, i| acc * m.get(i, i)))
            }
            MixedMatrix::Approx(m) => RootValue::Approx(
                (0..m.rows()).fold(ComplexApprox::one_elem(), |acc, i| acc.times(m.get(i, i))),
            ),
        }
    }
}

fn all_exact(roots: &[RootDatum]) -> Option<Vec<(Rat, usize)>> {
    roots
        .iter()
        .map(|r| match &r.value {
            RootValue::Exact(v) => Some((v.clone(), r.multiplicity)),
            RootValue::Approx(_) => None,
        })
        .collect()
}

/// Rows `(n^j·α_i^n)` for `n` in `offset..offset+k`, stripe by stripe.
fn striped<T: Scalar>(roots: &[(T, usize)], k: usize, offset: usize) -> Matrix<T> {
    let mut rows = Vec::with_capacity(k);
    for (alpha, m) in roots {
        for j in 0..*m {
            let row: Vec<T> = (offset..offset + k)
                .map(|n| {
                    let mut v = T::one_elem();
                    for _ in 0..n {
                        v = v.times(alpha);
                    }
                    // n^j with 0^0 = 1
                    let nj = Rat::from_integer((n as i64).pow(j as u32).into());
                    v.times(&T::from_rat(&nj))
                })
                .collect();
            rows.push(row);
        }
    }
    Matrix::from_rows(rows).expect("rectangular by construction")
}

fn with_roots<F, G>(roots: &[RootDatum], exact: F, approx: G) -> MixedMatrix
where
    F: Fn(&[(Rat, usize)]) -> RatMatrix,
    G: Fn(&[(ComplexApprox, usize)]) -> Matrix<ComplexApprox>,
{
    match all_exact(roots) {
        Some(rs) => MixedMatrix::Exact(exact(&rs)),
        None => {
            let cs: Vec<(ComplexApprox, usize)> = roots
                .iter()
                .map(|r| (r.value.to_complex(), r.multiplicity))
                .collect();
            MixedMatrix::Approx(approx(&cs))
        }
    }
}

/// `G_S`: initial values (`n = 0…k-1`) of the basis sequences.
pub fn special_basis_matrix(relation: &RecurrenceRelation, roots: &[RootDatum]) -> MixedMatrix {
    let k = relation.order();
    with_roots(roots, |r| striped(r, k, 0), |r| striped(r, k, 0))
}

/// `G_S*`: the basis sequences at `n = 1…k`.
pub fn special_basis_shifted(relation: &RecurrenceRelation, roots: &[RootDatum]) -> MixedMatrix {
    let k = relation.order();
    with_roots(roots, |r| striped(r, k, 1), |r| striped(r, k, 1))
}

fn block<T: Scalar>(roots: &[(T, usize)]) -> Matrix<T> {
    let k: usize = roots.iter().map(|(_, m)| m).sum();
    let mut b = Matrix::zeros(k, k);
    let mut offset = 0;
    for (alpha, m) in roots {
        for u in 0..*m {
            for v in 0..=u {
                let c = Rat::from_integer(binomial(u, v).into());
                b.set(offset + u, offset + v, alpha.times(&T::from_rat(&c)));
            }
        }
        offset += m;
    }
    b
}

/// Block-diagonal `B` with lower-triangular blocks `b_{u,v} = C(u,v)·α_i`.
pub fn block_matrix_b(roots: &[RootDatum]) -> MixedMatrix {
    with_roots(roots, block, block)
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::roots::{char_roots, DEFAULT_PRECISION};

    fn exact_root(v: i64, m: usize) -> RootDatum {
        RootDatum {
            value: RootValue::Exact(rat(v)),
            multiplicity: m,
        }
    }

    #[test]
    fn double_root_basis() {
        let r = RecurrenceRelation::from_i64(&[-4, 4]).unwrap();
        let roots = vec![exact_root(2, 2)];
        assert_eq!(
            special_basis_matrix(&r, &roots),
            MixedMatrix::Exact(RatMatrix::from_i64_rows(&[&[1, 2], &[0, 2]]).unwrap())
        );
        let b = block_matrix_b(&roots);
        assert_eq!(
            b,
            MixedMatrix::Exact(RatMatrix::from_i64_rows(&[&[2, 0], &[2, 2]]).unwrap())
        );
        assert_eq!(b.diagonal_product(), RootValue::Exact(rat(4)));
        assert_eq!(r.base(), rat(4));
        let shifted = special_basis_shifted(&r, &roots);
        assert!(shifted.agrees_with(&b.mul(&special_basis_matrix(&r, &roots)).unwrap()));
    }

    #[test]
    fn simple_roots_give_vandermonde_and_diagonal_b() {
        let r = RecurrenceRelation::from_i64(&[-10, 7]).unwrap();
        let roots = vec![exact_root(2, 1), exact_root(5, 1)];
        assert_eq!(
            special_basis_matrix(&r, &roots),
            MixedMatrix::Exact(RatMatrix::from_i64_rows(&[&[1, 2], &[1, 5]]).unwrap())
        );
        assert_eq!(
            block_matrix_b(&roots),
            MixedMatrix::Exact(RatMatrix::from_i64_rows(&[&[2, 0], &[0, 5]]).unwrap())
        );
    }

    #[test]
    fn narayana_shift_identity_within_bounds() {
        let r = RecurrenceRelation::from_i64(&[1, 0, 1]).unwrap();
        let roots = char_roots(&r, DEFAULT_PRECISION).unwrap();
        let gs = special_basis_matrix(&r, &roots);
        let gsc = gs.to_complex();
        for (i, root) in roots.iter().enumerate() {
            let a = root.value.to_complex();
            assert!(gsc.get(i, 2).overlaps(&a.times(&a)));
        }
        let b = block_matrix_b(&roots);
        assert!(special_basis_shifted(&r, &roots).agrees_with(&b.mul(&gs).unwrap()));
        let RootValue::Approx(det) = b.diagonal_product() else {
            panic!("approximate roots");
        };
        assert!(det.overlaps(&ComplexApprox::from_rat(&r.base())));
    }
}
