//! Ising problem representation and exact evaluation.
//!
//! The Hamiltonian is the ordered double sum
//!
//! ```text
//! H(σ) = Σ_i Σ_{j≠i} J_ij σ_i σ_j + Σ_i h_i σ_i
//! ```
//!
//! so every unordered pair contributes twice. The cut value of the partition
//! induced by the sign of σ is `(Σ_ij J_ij − Σ_ij J_ij σ_i σ_j) / 4`, which
//! makes minimising `H` (with `h = 0`) the same as maximising the cut.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance for comparing energies of real-valued problems.
pub const ENERGY_TOLERANCE: f64 = 1e-9;

/// Default size guard for [`brute_force_ground_state`].
pub const BRUTE_FORCE_LIMIT: usize = 26;

/// Edge density below which a neighbour list is built next to the dense matrix.
pub const SPARSE_DENSITY_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
struct Adjacency {
    offsets: Vec<usize>,
    columns: Vec<usize>,
    weights: Vec<f64>,
}

impl Adjacency {
    fn from_dense(n: usize, couplings: &[f64]) -> Self {
        let mut offsets = Vec::with_capacity(n + 1);
        let mut columns = Vec::new();
        let mut weights = Vec::new();
        offsets.push(0);
        for i in 0..n {
            for (j, &w) in couplings[i * n..(i + 1) * n].iter().enumerate() {
                if w != 0.0 {
                    columns.push(j);
                    weights.push(w);
                }
            }
            offsets.push(columns.len());
        }
        Adjacency {
            offsets,
            columns,
            weights,
        }
    }
}

/// A symmetric coupling matrix with zero diagonal plus an external field.
///
/// Immutable after construction; share it freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingProblem {
    n: usize,
    couplings: Vec<f64>,
    field: Vec<f64>,
    adjacency: Option<Adjacency>,
    integer_valued: bool,
}

impl IsingProblem {
    /// Builds a problem from a row-major `n × n` coupling matrix.
    pub fn from_dense(n: usize, couplings: Vec<f64>, field: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidProblem(
                "a problem needs at least one spin".into(),
            ));
        }
        if couplings.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                actual: couplings.len(),
            });
        }
        if field.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: field.len(),
            });
        }
        if let Some(pos) = couplings.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidProblem(format!(
                "coupling ({}, {}) is not finite",
                pos / n,
                pos % n
            )));
        }
        if let Some(i) = field.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidProblem(format!(
                "field entry {i} is not finite"
            )));
        }
        for i in 0..n {
            if couplings[i * n + i] != 0.0 {
                return Err(Error::InvalidProblem(format!(
                    "diagonal coupling ({i}, {i}) must be zero"
                )));
            }
            for j in (i + 1)..n {
                if couplings[i * n + j] != couplings[j * n + i] {
                    return Err(Error::InvalidProblem(format!(
                        "couplings are not symmetric at ({i}, {j})"
                    )));
                }
            }
        }

        let integer_valued = couplings
            .iter()
            .chain(field.iter())
            .all(|v| v.fract() == 0.0);
        let nonzero = couplings.iter().filter(|&&w| w != 0.0).count();
        let density = if n > 1 {
            nonzero as f64 / (n * (n - 1)) as f64
        } else {
            0.0
        };
        let adjacency =
            (density < SPARSE_DENSITY_THRESHOLD).then(|| Adjacency::from_dense(n, &couplings));

        Ok(IsingProblem {
            n,
            couplings,
            field,
            adjacency,
            integer_valued,
        })
    }

    /// Builds a problem from nested rows.
    pub fn from_rows(rows: Vec<Vec<f64>>, field: Vec<f64>) -> Result<Self> {
        let n = rows.len();
        let mut flat = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: row.len(),
                });
            }
            flat.extend(row);
        }
        Self::from_dense(n, flat, field)
    }

    /// Builds a zero-field problem from 0-based undirected edges.
    ///
    /// Each edge sets both `J_uv` and `J_vu`. Repeated pairs and self loops are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut couplings = vec![0.0; n * n];
        let mut seen = std::collections::HashSet::with_capacity(edges.len());
        for &(u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::IndexOutOfRange { index: u.max(v), n });
            }
            if u == v {
                return Err(Error::InvalidProblem(format!("self loop on spin {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidProblem(format!("duplicate edge ({u}, {v})")));
            }
            couplings[u * n + v] = w;
            couplings[v * n + u] = w;
        }
        Self::from_dense(n, couplings, vec![0.0; n])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        self.couplings[i * self.n + j]
    }

    /// Row `i` of the dense coupling matrix.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.couplings[i * self.n..(i + 1) * self.n]
    }

    /// Row-major dense coupling matrix.
    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn field(&self) -> &[f64] {
        &self.field
    }

    pub fn has_field(&self) -> bool {
        self.field.iter().any(|&h| h != 0.0)
    }

    /// True when every coupling and field entry is an integer.
    pub fn is_integer_valued(&self) -> bool {
        self.integer_valued
    }

    /// True when a neighbour list backs the row products.
    pub fn is_sparse(&self) -> bool {
        self.adjacency.is_some()
    }

    /// Iterates the nonzero couplings of row `i` as `(j, J_ij)` in ascending `j`.
    pub fn neighbors(&self, i: usize) -> Box<dyn Iterator<Item = (usize, f64)> + '_> {
        match &self.adjacency {
            Some(adj) => {
                let range = adj.offsets[i]..adj.offsets[i + 1];
                Box::new(
                    adj.columns[range.clone()]
                        .iter()
                        .copied()
                        .zip(adj.weights[range].iter().copied()),
                )
            }
            None => Box::new(
                self.row(i)
                    .iter()
                    .copied()
                    .enumerate()
                    .filter(|&(_, w)| w != 0.0),
            ),
        }
    }

    /// `Σ_j J_ij v_j`, summed in ascending `j`.
    ///
    /// The dense and sparse paths produce bit-identical sums: skipped terms are
    /// exact zeros.
    #[inline]
    pub fn coupling_dot<T: Copy + Into<f64>>(&self, i: usize, values: &[T]) -> f64 {
        debug_assert_eq!(values.len(), self.n);
        match &self.adjacency {
            Some(adj) => {
                let range = adj.offsets[i]..adj.offsets[i + 1];
                let mut acc = 0.0;
                for (&j, &w) in adj.columns[range.clone()].iter().zip(&adj.weights[range]) {
                    acc += w * values[j].into();
                }
                acc
            }
            None => {
                let mut acc = 0.0;
                for (&w, &v) in self.row(i).iter().zip(values) {
                    acc += w * v.into();
                }
                acc
            }
        }
    }

    /// `Σ_{i,j} J_ij` over all ordered pairs.
    pub fn total_coupling(&self) -> f64 {
        self.couplings.iter().sum()
    }

    /// Root-mean-square of the row norms `sqrt(Σ_j J_ij²)`; the typical magnitude
    /// of a local field at a random configuration.
    pub fn typical_field(&self) -> f64 {
        let sum_sq: f64 = self.couplings.iter().map(|w| w * w).sum();
        (sum_sq / self.n as f64).sqrt()
    }

    /// Equality test used for hit counting: exact for integer-valued problems,
    /// [`ENERGY_TOLERANCE`] otherwise.
    pub fn energies_equal(&self, a: f64, b: f64) -> bool {
        if self.integer_valued {
            a == b
        } else {
            (a - b).abs() <= ENERGY_TOLERANCE
        }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: len,
            });
        }
        Ok(())
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange {
                index: i,
                n: self.n,
            });
        }
        Ok(())
    }
}

/// A discrete ±1 spin assignment.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SpinConfig(Vec<i8>);

impl SpinConfig {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if let Some(i) = spins.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidParameter(format!(
                "spin {i} is {}, expected -1 or +1",
                spins[i]
            )));
        }
        Ok(SpinConfig(spins))
    }

    pub fn uniform(n: usize, value: i8) -> Self {
        assert!(value == 1 || value == -1);
        SpinConfig(vec![value; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    pub fn flip(&mut self, i: usize) {
        self.0[i] = -self.0[i];
    }

    pub fn flipped(&self, i: usize) -> Self {
        let mut out = self.clone();
        out.flip(i);
        out
    }

    /// The global spin flip `−σ`.
    pub fn negated(&self) -> Self {
        SpinConfig(self.0.iter().map(|s| -s).collect())
    }

    pub(crate) fn from_raw(spins: Vec<i8>) -> Self {
        debug_assert!(spins.iter().all(|&s| s == 1 || s == -1));
        SpinConfig(spins)
    }
}

impl TryFrom<Vec<i8>> for SpinConfig {
    type Error = Error;

    fn try_from(v: Vec<i8>) -> Result<Self> {
        SpinConfig::new(v)
    }
}

impl From<SpinConfig> for Vec<i8> {
    fn from(s: SpinConfig) -> Self {
        s.0
    }
}

/// Per-spin real values in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ContinuousState(Vec<f64>);

impl ContinuousState {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(i) = values
            .iter()
            .position(|v| !(-1.0..=1.0).contains(v) || v.is_nan())
        {
            return Err(Error::InvalidParameter(format!(
                "continuous spin {i} = {} lies outside [-1, 1]",
                values[i]
            )));
        }
        Ok(ContinuousState(values))
    }

    pub fn zeros(n: usize) -> Self {
        ContinuousState(vec![0.0; n])
    }

    /// Clamps every value into `[-1, 1]`; NaN becomes 0.
    pub fn clamped(values: Vec<f64>) -> Self {
        ContinuousState(
            values
                .into_iter()
                .map(|v| if v.is_nan() { 0.0 } else { v.clamp(-1.0, 1.0) })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| (-1.0..=1.0).contains(v)));
        ContinuousState(values)
    }
}

impl TryFrom<Vec<f64>> for ContinuousState {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        ContinuousState::new(v)
    }
}

impl From<ContinuousState> for Vec<f64> {
    fn from(s: ContinuousState) -> Self {
        s.0
    }
}

impl From<&SpinConfig> for ContinuousState {
    fn from(s: &SpinConfig) -> Self {
        ContinuousState(s.as_slice().iter().map(|&v| v as f64).collect())
    }
}

/// An exact ground state found by enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub energy: f64,
    pub spins: SpinConfig,
}

/// `H(σ)` with the ordered double sum.
pub fn energy(problem: &IsingProblem, spins: &SpinConfig) -> Result<f64> {
    problem.check_len(spins.len())?;
    Ok(energy_unchecked(problem, spins.as_slice()))
}

pub(crate) fn energy_unchecked(problem: &IsingProblem, spins: &[i8]) -> f64 {
    let mut pair = 0.0;
    for (i, &s) in spins.iter().enumerate() {
        pair += s as f64 * problem.coupling_dot(i, spins);
    }
    let mut field = 0.0;
    for (&h, &s) in problem.field.iter().zip(spins) {
        field += h * s as f64;
    }
    pair + field
}

/// `Σ_{i,j} J_ij σ_i σ_j` over ordered pairs (the coupling part of the energy).
pub fn coupling_energy(problem: &IsingProblem, spins: &SpinConfig) -> Result<f64> {
    problem.check_len(spins.len())?;
    let s = spins.as_slice();
    let mut pair = 0.0;
    for (i, &si) in s.iter().enumerate() {
        pair += si as f64 * problem.coupling_dot(i, s);
    }
    Ok(pair)
}

/// Weight of the edges crossing the partition induced by the sign of σ.
pub fn cut_value(problem: &IsingProblem, spins: &SpinConfig) -> Result<f64> {
    let pair = coupling_energy(problem, spins)?;
    Ok(0.25 * (problem.total_coupling() - pair))
}

/// `Φ_i = Σ_j J_ij s_j`; the external field is not included.
pub fn local_field(problem: &IsingProblem, state: &ContinuousState, i: usize) -> Result<f64> {
    problem.check_len(state.len())?;
    problem.check_index(i)?;
    Ok(problem.coupling_dot(i, state.values()))
}

/// Energy change from negating spin `i`, in O(N).
pub fn flip_delta(problem: &IsingProblem, spins: &SpinConfig, i: usize) -> Result<f64> {
    problem.check_len(spins.len())?;
    problem.check_index(i)?;
    Ok(flip_delta_unchecked(problem, spins.as_slice(), i))
}

#[inline]
pub(crate) fn flip_delta_unchecked(problem: &IsingProblem, spins: &[i8], i: usize) -> f64 {
    let s = spins[i] as f64;
    -2.0 * s * (2.0 * problem.coupling_dot(i, spins) + problem.field[i])
}

/// Sign rounding; exact zeros (of either sign) map to `+1`.
pub fn round_spins(state: &ContinuousState) -> SpinConfig {
    SpinConfig(
        state
            .values()
            .iter()
            .map(|&v| if v < 0.0 { -1 } else { 1 })
            .collect(),
    )
}

/// Exhaustive minimum over all `2^n` configurations, refusing `n > 26`.
pub fn brute_force_ground_state(problem: &IsingProblem) -> Result<GroundState> {
    brute_force_ground_state_with_limit(problem, BRUTE_FORCE_LIMIT)
}

/// Exhaustive minimum with an explicit size guard.
///
/// Ties are broken towards the lexicographically smallest pattern, with `-1`
/// ordered before `+1`.
pub fn brute_force_ground_state_with_limit(
    problem: &IsingProblem,
    limit: usize,
) -> Result<GroundState> {
    let n = problem.n;
    if n > limit || n >= 63 {
        return Err(Error::TooLarge { n, limit });
    }

    // Gray-code walk with incremental row sums. Candidates within a slack of
    // the running minimum are kept and re-evaluated exactly at the end, so
    // accumulated round-off cannot change the answer.
    let mut spins = vec![-1i8; n];
    let mut row_sums: Vec<f64> = (0..n).map(|i| problem.coupling_dot(i, &spins)).collect();
    let mut current = energy_unchecked(problem, &spins);
    let slack = |e: f64| 1e-6 * (1.0 + e.abs());

    let mut best = current;
    let mut candidates: Vec<Vec<i8>> = vec![spins.clone()];

    let total: u64 = 1u64 << n;
    for step in 1..total {
        let k = step.trailing_zeros() as usize;
        let old = spins[k] as f64;
        current += -2.0 * old * (2.0 * row_sums[k] + problem.field[k]);
        spins[k] = -spins[k];
        let change = -2.0 * old;
        for (j, w) in problem.neighbors(k) {
            row_sums[j] += w * change;
        }

        if current < best - slack(best) {
            best = current;
            candidates.clear();
            candidates.push(spins.clone());
        } else if current <= best + slack(best) {
            if current < best {
                best = current;
            }
            candidates.push(spins.clone());
        }
    }

    let evaluated: Vec<(f64, Vec<i8>)> = candidates
        .into_iter()
        .map(|c| (energy_unchecked(problem, &c), c))
        .collect();
    let min = evaluated
        .iter()
        .map(|(e, _)| *e)
        .fold(f64::INFINITY, f64::min);
    let (energy, spins) = evaluated
        .into_iter()
        .filter(|(e, _)| problem.energies_equal(*e, min))
        .min_by(|a, b| a.1.cmp(&b.1))
        .expect("at least one candidate attains the minimum");

    Ok(GroundState {
        energy,
        spins: SpinConfig(spins),
    })
}
