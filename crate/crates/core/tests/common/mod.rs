#![allow(dead_code)]

use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use recform_core::algebra::{Rat, RatMatrix};
use recform_core::recurrence::{RecurrenceRelation, Sequence, SequenceFamily};

pub const HEIGHT: i64 = 20;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational `p/q` with `|p| <= height` and `1 <= q <= height`.
pub fn rat_of_height<R: Rng>(rng: &mut R, height: i64) -> Rat {
    Rat::new(
        rng.gen_range(-height..=height).into(),
        rng.gen_range(1..=height).into(),
    )
}

pub fn nonzero_rat<R: Rng>(rng: &mut R, height: i64) -> Rat {
    loop {
        let r = rat_of_height(rng, height);
        if !r.is_zero() {
            return r;
        }
    }
}

pub fn random_relation<R: Rng>(rng: &mut R, k: usize, height: i64) -> RecurrenceRelation {
    let mut gammas = vec![nonzero_rat(rng, height)];
    gammas.extend((1..k).map(|_| rat_of_height(rng, height)));
    RecurrenceRelation::new(gammas).unwrap()
}

pub fn random_integer_relation<R: Rng>(rng: &mut R, k: usize, bound: i64) -> RecurrenceRelation {
    let mut gammas = vec![0i64; k];
    while gammas[0] == 0 {
        gammas[0] = rng.gen_range(-bound..=bound);
    }
    for g in gammas.iter_mut().skip(1) {
        *g = rng.gen_range(-bound..=bound);
    }
    RecurrenceRelation::from_i64(&gammas).unwrap()
}

/// A family with `Δ ≠ 0` under the given relation.
pub fn random_family_for<R: Rng>(
    rng: &mut R,
    relation: RecurrenceRelation,
    height: i64,
) -> SequenceFamily {
    let k = relation.order();
    loop {
        let rows: Vec<Vec<Rat>> = (0..k)
            .map(|_| (0..k).map(|_| rat_of_height(rng, height)).collect())
            .collect();
        let g = RatMatrix::from_rows(rows).unwrap();
        if !g.det().unwrap().is_zero() {
            return SequenceFamily::new(relation, g).unwrap();
        }
    }
}

pub fn random_family<R: Rng>(rng: &mut R, k: usize, height: i64) -> SequenceFamily {
    let relation = random_relation(rng, k, height);
    random_family_for(rng, relation, height)
}

pub fn random_integer_family<R: Rng>(rng: &mut R, k: usize, bound: i64) -> SequenceFamily {
    let relation = random_integer_relation(rng, k, bound);
    loop {
        let rows: Vec<Vec<i64>> = (0..k)
            .map(|_| (0..k).map(|_| rng.gen_range(-bound..=bound)).collect())
            .collect();
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let g = RatMatrix::from_i64_rows(&refs).unwrap();
        if !g.det().unwrap().is_zero() {
            return SequenceFamily::new(relation, g).unwrap();
        }
    }
}

pub fn random_second_order<R: Rng>(rng: &mut R, height: i64) -> Sequence {
    let relation = random_relation(rng, 2, height);
    let initials = vec![rat_of_height(rng, height), rat_of_height(rng, height)];
    Sequence::new(relation, initials).unwrap()
}

/// `(A, B)` as the relation `x_n = A·x_{n-1} + B·x_{n-2}`.
pub fn binary(a: i64, b: i64, rows: &[&[i64]]) -> SequenceFamily {
    SequenceFamily::from_i64(&[b, a], rows).unwrap()
}

pub fn fibonacci_lucas() -> SequenceFamily {
    binary(1, 1, &[&[0, 1], &[2, 1]])
}

pub fn narayana() -> SequenceFamily {
    SequenceFamily::from_i64(&[1, 0, 1], &[&[0, 1, 1], &[3, 1, 1], &[3, 0, 2]]).unwrap()
}

pub struct TableRow {
    pub a: i64,
    pub b: i64,
    pub g: [i64; 2],
    pub h: [i64; 2],
    /// Step matrix as `[[num, den]; 4]` in row-major order.
    pub m: [[i64; 2]; 4],
    /// `F̃` coefficients of `x², xy, y²`.
    pub f_tilde: [i64; 3],
    pub delta: i64,
}

pub fn table_rows() -> Vec<TableRow> {
    vec![
        TableRow {
            a: 0,
            b: 4,
            g: [1, 2],
            h: [2, 3],
            m: [[2, 1], [0, 1], [7, 1], [-2, 1]],
            f_tilde: [-7, 4, 0],
            delta: -1,
        },
        TableRow {
            a: 2,
            b: -1,
            g: [2, 3],
            h: [4, 5],
            m: [[1, 2], [1, 2], [-1, 2], [3, 2]],
            f_tilde: [1, -2, 1],
            delta: -2,
        },
        TableRow {
            a: 7,
            b: -10,
            g: [0, 1],
            h: [2, 7],
            m: [[7, 2], [1, 2], [9, 2], [7, 2]],
            f_tilde: [-9, 0, 1],
            delta: -2,
        },
        TableRow {
            a: 7,
            b: -10,
            g: [1, 2],
            h: [1, 5],
            m: [[2, 1], [0, 1], [0, 1], [5, 1]],
            f_tilde: [0, 9, 0],
            delta: 3,
        },
        TableRow {
            a: 4,
            b: -1,
            g: [1, 2],
            h: [3, 4],
            m: [[13, 2], [-3, 2], [23, 2], [-5, 2]],
            f_tilde: [-23, 18, -3],
            delta: -2,
        },
    ]
}

impl TableRow {
    pub fn family(&self) -> SequenceFamily {
        binary(self.a, self.b, &[&self.g, &self.h])
    }
}

pub fn shifted(gammas: &[i64], initials: &[i64]) -> Sequence {
    Sequence::from_i64(RecurrenceRelation::from_i64(gammas).unwrap(), initials).unwrap()
}

/// Every hand-checked family: Fibonacci/Lucas, the five table rows,
/// Narayana, and the Fibonacci and Tribonacci shift families.
pub fn golden_families() -> Vec<(String, SequenceFamily)> {
    let mut out = vec![("fibonacci-lucas".to_string(), fibonacci_lucas())];
    for (i, row) in table_rows().iter().enumerate() {
        out.push((format!("table1-row{}", i + 1), row.family()));
    }
    out.push(("narayana".into(), narayana()));
    out.push((
        "fibonacci-cassini".into(),
        shifted(&[1, 1], &[0, 1]).shifted_family(),
    ));
    out.push((
        "tribonacci-cassini".into(),
        shifted(&[1, 1, 1], &[0, 0, 1]).shifted_family(),
    ));
    out
}
