//! Recurrence relations, two-sided sequences and sequence families.
//!
//! Orientation: in a [`SequenceFamily`] the *rows* of `g` hold the initial
//! values of the individual sequences. The vectors `ḡ_j = (G_j^(1), …,
//! G_j^(k))ᵀ` are the columns of `g`, and [`SequenceFamily::eval`] returns
//! `ḡ_n` for any integer `n`.

use std::fmt;
use std::sync::Mutex;

use num_traits::{One, Zero};

use crate::algebra::{rat, Rat, RatMatrix, UniPoly};
use crate::error::{Error, Result};

/// `G_{n+k} = γ_{k-1} G_{n+k-1} + … + γ_0 G_n` with `γ_0 ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RecurrenceRelation {
    gammas: Vec<Rat>,
}

impl RecurrenceRelation {
    /// `gammas` lists `γ_0, …, γ_{k-1}`.
    pub fn new(gammas: Vec<Rat>) -> Result<Self> {
        if gammas.len() < 2 {
            return Err(Error::OrderTooSmall(gammas.len()));
        }
        if gammas[0].is_zero() {
            return Err(Error::ZeroGamma);
        }
        Ok(Self { gammas })
    }

    pub fn from_i64(gammas: &[i64]) -> Result<Self> {
        Self::new(gammas.iter().map(|&g| rat(g)).collect())
    }

    pub fn order(&self) -> usize {
        self.gammas.len()
    }

    pub fn gammas(&self) -> &[Rat] {
        &self.gammas
    }

    /// `x^k - γ_{k-1} x^{k-1} - … - γ_0`
    pub fn char_poly(&self) -> UniPoly {
        let mut c: Vec<Rat> = self.gammas.iter().map(|g| -g.clone()).collect();
        c.push(Rat::one());
        UniPoly::new(c)
    }

    /// `δ = (-1)^{k+1} γ_0`, the determinant of the step matrix.
    pub fn base(&self) -> Rat {
        if self.order() % 2 == 1 {
            self.gammas[0].clone()
        } else {
            -self.gammas[0].clone()
        }
    }

    /// Subdiagonal ones with `(γ_0, …, γ_{k-1})ᵀ` in the last column, so that
    /// `G·T` shifts every sequence of a family by one step.
    pub fn companion_matrix(&self) -> RatMatrix {
        let k = self.order();
        let mut t = RatMatrix::zeros(k, k);
        for i in 1..k {
            t.set(i, i - 1, Rat::one());
        }
        for (i, g) in self.gammas.iter().enumerate() {
            t.set(i, k - 1, g.clone());
        }
        t
    }

    /// Next term from the `k` preceding ones (`window[0]` oldest).
    fn forward(&self, window: &[Rat]) -> Rat {
        self.gammas
            .iter()
            .zip(window)
            .fold(Rat::zero(), |acc, (g, x)| acc + g * x)
    }

    /// Previous term from the `k` following ones (`window[0]` nearest).
    fn backward(&self, window: &[Rat]) -> Rat {
        // G_n = (G_{n+k} - γ_{k-1}G_{n+k-1} - … - γ_1 G_{n+1}) / γ_0
        let k = self.order();
        let mut acc = window[k - 1].clone();
        for j in 1..k {
            acc -= &self.gammas[j] * &window[j - 1];
        }
        acc / &self.gammas[0]
    }
}

impl fmt::Display for RecurrenceRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.order();
        write!(f, "x_n =")?;
        let mut first = true;
        for j in (0..k).rev() {
            let g = &self.gammas[j];
            if g.is_zero() {
                continue;
            }
            let lag = k - j;
            if first {
                write!(f, " {g}·x_(n-{lag})")?;
            } else {
                write!(f, " + {g}·x_(n-{lag})")?;
            }
            first = false;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default)]
struct TermCache {
    /// G_0, G_1, …
    forward: Vec<Rat>,
    /// G_{-1}, G_{-2}, …
    backward: Vec<Rat>,
}

/// A two-sided sequence determined by a relation and `k` initial values.
/// Terms are memoized; the cache only ever grows and never changes a value
/// already computed, so results do not depend on call order.
pub struct Sequence {
    relation: RecurrenceRelation,
    initials: Vec<Rat>,
    cache: Mutex<TermCache>,
}

impl Sequence {
    pub fn new(relation: RecurrenceRelation, initials: Vec<Rat>) -> Result<Self> {
        if initials.len() != relation.order() {
            return Err(Error::Dimension(format!(
                "order-{} relation needs {} initial values, got {}",
                relation.order(),
                relation.order(),
                initials.len()
            )));
        }
        let cache = TermCache {
            forward: initials.clone(),
            backward: Vec::new(),
        };
        Ok(Self {
            relation,
            initials,
            cache: Mutex::new(cache),
        })
    }

    pub fn from_i64(relation: RecurrenceRelation, initials: &[i64]) -> Result<Self> {
        Self::new(relation, initials.iter().map(|&v| rat(v)).collect())
    }

    pub fn relation(&self) -> &RecurrenceRelation {
        &self.relation
    }

    pub fn initials(&self) -> &[Rat] {
        &self.initials
    }

    /// `G_n` for any integer `n`.
    pub fn eval(&self, n: i64) -> Rat {
        let mut cache = self.cache.lock().unwrap_or_else(|p| p.into_inner());
        let k = self.relation.order();
        if n >= 0 {
            let idx = n as usize;
            if idx >= cache.forward.len() {
                let target = (idx + 1).max(2 * cache.forward.len());
                while cache.forward.len() < target {
                    let len = cache.forward.len();
                    let next = self.relation.forward(&cache.forward[len - k..]);
                    cache.forward.push(next);
                }
            }
            cache.forward[idx].clone()
        } else {
            let idx = (-(n + 1)) as usize;
            if idx >= cache.backward.len() {
                let target = (idx + 1).max(2 * cache.backward.len());
                while cache.backward.len() < target {
                    // window of the k terms just after the one being produced
                    let have = cache.backward.len();
                    let window: Vec<Rat> = (0..k)
                        .map(|j| {
                            // term index -(have+1) + 1 + j
                            let t = j as i64 - have as i64;
                            if t >= 0 {
                                cache.forward[t as usize].clone()
                            } else {
                                cache.backward[(-t - 1) as usize].clone()
                            }
                        })
                        .collect();
                    let prev = self.relation.backward(&window);
                    cache.backward.push(prev);
                }
            }
            cache.backward[idx].clone()
        }
    }

    /// Terms `G_a, …, G_b` inclusive.
    pub fn eval_range(&self, from: i64, to: i64) -> Vec<Rat> {
        (from..=to).map(|n| self.eval(n)).collect()
    }

    /// Associated sequence of a second-order sequence:
    /// `Ĝ_0 = 2G_1 - A·G_0`, `Ĝ_1 = A·G_1 + 2B·G_0` with `A = γ_1`, `B = γ_0`.
    pub fn associated(&self) -> Result<Sequence> {
        if self.relation.order() != 2 {
            return Err(Error::Arity {
                expected: 2,
                found: self.relation.order(),
            });
        }
        let a = &self.relation.gammas[1];
        let b = &self.relation.gammas[0];
        let (g0, g1) = (&self.initials[0], &self.initials[1]);
        let two = rat(2);
        let h0 = &two * g1 - a * g0;
        let h1 = a * g1 + &two * b * g0;
        Sequence::new(self.relation.clone(), vec![h0, h1])
    }

    /// Family whose row `j` (0-based) holds the initials of `(G_{n+j})`.
    pub fn shifted_family(&self) -> SequenceFamily {
        let k = self.relation.order();
        let rows: Vec<Vec<Rat>> = (0..k)
            .map(|j| (0..k).map(|i| self.eval((i + j) as i64)).collect())
            .collect();
        let g = RatMatrix::from_rows(rows).expect("square by construction");
        SequenceFamily::new(self.relation.clone(), g).expect("dimensions match by construction")
    }
}

impl Clone for Sequence {
    fn clone(&self) -> Self {
        let cache = self.cache.lock().unwrap_or_else(|p| p.into_inner()).clone();
        Self {
            relation: self.relation.clone(),
            initials: self.initials.clone(),
            cache: Mutex::new(cache),
        }
    }
}

impl fmt::Debug for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Sequence")
            .field("relation", &self.relation)
            .field("initials", &self.initials)
            .finish()
    }
}

impl PartialEq for Sequence {
    fn eq(&self, other: &Self) -> bool {
        self.relation == other.relation && self.initials == other.initials
    }
}

/// `k` sequences sharing one relation; row `i` of `g` holds the initials of
/// sequence `i`.
#[derive(Clone, Debug)]
pub struct SequenceFamily {
    relation: RecurrenceRelation,
    g: RatMatrix,
    sequences: Vec<Sequence>,
}

impl SequenceFamily {
    pub fn new(relation: RecurrenceRelation, g: RatMatrix) -> Result<Self> {
        let k = relation.order();
        if g.rows() != k || g.cols() != k {
            return Err(Error::Dimension(format!(
                "order-{k} family needs a {k}x{k} initial matrix, got {}x{}",
                g.rows(),
                g.cols()
            )));
        }
        let sequences = (0..k)
            .map(|i| Sequence::new(relation.clone(), g.row(i).to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            relation,
            g,
            sequences,
        })
    }

    pub fn from_i64(gammas: &[i64], rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            RecurrenceRelation::from_i64(gammas)?,
            RatMatrix::from_i64_rows(rows)?,
        )
    }

    /// The family with `g = I` (orthonormal initial vectors).
    pub fn orthonormal(relation: RecurrenceRelation) -> Self {
        let k = relation.order();
        Self::new(relation, RatMatrix::identity(k)).expect("identity is k x k")
    }

    pub fn relation(&self) -> &RecurrenceRelation {
        &self.relation
    }

    pub fn order(&self) -> usize {
        self.relation.order()
    }

    pub fn g(&self) -> &RatMatrix {
        &self.g
    }

    pub fn sequences(&self) -> &[Sequence] {
        &self.sequences
    }

    /// `Δ = det(g)`.
    pub fn delta(&self) -> Rat {
        self.g.det().expect("g is square")
    }

    /// Returns `Δ`, or an error naming a dependent set of rows when `Δ = 0`.
    pub fn require_independent(&self) -> Result<Rat> {
        let delta = self.delta();
        if !delta.is_zero() {
            return Ok(delta);
        }
        let detail = match self.g.left_null_vector() {
            Some(v) => {
                let rows: Vec<String> = v
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, _)| (i + 1).to_string())
                    .collect();
                format!("rows {} are linearly dependent", rows.join(", "))
            }
            None => "rows are linearly dependent".into(),
        };
        Err(Error::DependentInitials { delta, detail })
    }

    /// `ḡ_n = (G_n^(1), …, G_n^(k))`.
    pub fn eval(&self, n: i64) -> Vec<Rat> {
        self.sequences.iter().map(|s| s.eval(n)).collect()
    }

    /// `G*`: columns `ḡ_1, …, ḡ_k`.
    pub fn g_star(&self) -> RatMatrix {
        let k = self.order();
        let rows: Vec<Vec<Rat>> = self
            .sequences
            .iter()
            .map(|s| (1..=k as i64).map(|n| s.eval(n)).collect())
            .collect();
        RatMatrix::from_rows(rows).expect("square by construction")
    }

    /// `M = G*·G⁻¹`, the matrix with `M·ḡ_n = ḡ_{n+1}`.
    pub fn step_matrix(&self) -> Result<RatMatrix> {
        self.require_independent()?;
        let inv = self.g.inverse()?;
        self.g_star().mul(&inv)
    }
}
