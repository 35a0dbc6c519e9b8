//! Step graphons: block partitions of `[0,1]` with a symmetric block-value
//! matrix. These are the computable stand-in for bounded symmetric kernels;
//! every density integral over them is a finite sum.

use crate::{real, to_f64, tol, CompensatedSum, Real};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphonError {
    #[error("graphon value is not finite")]
    NonFinite,
    #[error("a step graphon needs at least one block")]
    EmptyPartition,
    #[error("block weight {index} is not positive")]
    NonPositiveWeight { index: usize },
    #[error("block weights sum to {sum}, not 1")]
    WeightSum { sum: f64 },
    #[error("expected {expected} values for {q} blocks, got {got}")]
    ValueCount {
        q: usize,
        expected: usize,
        got: usize,
    },
    #[error("value matrix is asymmetric at ({row}, {col}): |difference| = {diff:e}")]
    Asymmetric { row: usize, col: usize, diff: f64 },
    #[error("invalid sampling range: lo must be finite and <= hi")]
    InvalidRange,
    #[error("graphon text line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A kernel that is constant on the blocks of a finite partition of
/// `[0,1]`. Block `a` has Lebesgue measure `weights[a]`; the kernel value
/// on block pair `(a, b)` is `values[a * q + b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepGraphon<F> {
    weights: Vec<F>,
    values: Vec<F>,
}

/// Witness that a kernel is separated from zero: a `delta > 0` bounding
/// every entry from below. Shifting by any `|eps| <= delta` in either
/// direction keeps the kernel nonnegative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationCertificate<F> {
    pub delta: F,
}

impl<F: Real> StepGraphon<F> {
    /// Validates weights (positive, summing to one) and the symmetric
    /// `q x q` value matrix given in row-major order.
    pub fn new(weights: Vec<F>, values: Vec<F>) -> Result<Self, GraphonError> {
        let q = weights.len();
        if q == 0 {
            return Err(GraphonError::EmptyPartition);
        }
        if values.len() != q * q {
            return Err(GraphonError::ValueCount {
                q,
                expected: q * q,
                got: values.len(),
            });
        }
        for (index, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w <= F::zero() {
                return Err(GraphonError::NonPositiveWeight { index });
            }
        }
        let sum: CompensatedSum<F> = weights.iter().copied().collect();
        let sum = to_f64(sum.value());
        if (sum - 1.0).abs() > tol::WEIGHT_SUM {
            return Err(GraphonError::WeightSum { sum });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(GraphonError::NonFinite);
        }
        for a in 0..q {
            for b in (a + 1)..q {
                if values[a * q + b] != values[b * q + a] {
                    return Err(GraphonError::Asymmetric {
                        row: a,
                        col: b,
                        diff: to_f64((values[a * q + b] - values[b * q + a]).abs()),
                    });
                }
            }
        }
        Ok(Self { weights, values })
    }

    /// For internally computed data that already satisfies the invariants.
    pub(crate) fn new_unchecked(weights: Vec<F>, values: Vec<F>) -> Self {
        debug_assert_eq!(weights.len() * weights.len(), values.len());
        Self { weights, values }
    }

    /// Convenience constructor from matrix rows.
    pub fn from_rows(weights: Vec<F>, rows: Vec<Vec<F>>) -> Result<Self, GraphonError> {
        let values = rows.into_iter().flatten().collect();
        Self::new(weights, values)
    }

    /// The constant kernel `c` on the trivial partition.
    pub fn constant(c: F) -> Result<Self, GraphonError> {
        if !c.is_finite() {
            return Err(GraphonError::NonFinite);
        }
        Ok(Self {
            weights: vec![F::one()],
            values: vec![c],
        })
    }

    /// The constant one function.
    pub fn one() -> Self {
        Self::constant(F::one()).expect("1 is finite")
    }

    /// Equal-weight blocks with i.i.d. uniform symmetric values on
    /// `[lo, hi]`, deterministic for a fixed seed.
    pub fn random(q: usize, lo: F, hi: F, seed: u64) -> Result<Self, GraphonError> {
        if q == 0 {
            return Err(GraphonError::EmptyPartition);
        }
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(GraphonError::InvalidRange);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values = vec![F::zero(); q * q];
        for a in 0..q {
            for b in a..q {
                let u: f64 = rng.gen();
                let v = lo + (hi - lo) * real::<F>(u);
                values[a * q + b] = v;
                values[b * q + a] = v;
            }
        }
        let weight = F::one() / real::<F>(q as f64);
        Ok(Self {
            weights: vec![weight; q],
            values,
        })
    }

    pub fn block_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[F] {
        &self.weights
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    #[inline]
    pub fn value(&self, a: usize, b: usize) -> F {
        self.values[a * self.weights.len() + b]
    }

    pub fn min_value(&self) -> F {
        self.values
            .iter()
            .copied()
            .fold(F::infinity(), F::min)
    }

    pub fn max_value(&self) -> F {
        self.values
            .iter()
            .copied()
            .fold(F::neg_infinity(), F::max)
    }

    /// Membership in the nonnegative class.
    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= F::zero())
    }

    /// Adds `eps` to every value; the partition is unchanged.
    pub fn shift(&self, eps: F) -> Self {
        Self {
            weights: self.weights.clone(),
            values: self.values.iter().map(|&v| v + eps).collect(),
        }
    }

    /// Entrywise absolute value.
    pub fn pointwise_abs(&self) -> Self {
        Self {
            weights: self.weights.clone(),
            values: self.values.iter().map(|&v| v.abs()).collect(),
        }
    }

    /// `Some(delta)` with `delta` the minimum entry, iff that minimum is
    /// strictly positive.
    pub fn separation_from_zero(&self) -> Option<SeparationCertificate<F>> {
        let delta = self.min_value();
        (delta > F::zero()).then_some(SeparationCertificate { delta })
    }

    /// The mean `∫∫ h`, a weighted sum over block pairs.
    pub fn mean(&self) -> F {
        let q = self.block_count();
        let mut acc = CompensatedSum::new();
        for a in 0..q {
            for b in 0..q {
                acc.add(self.weights[a] * self.weights[b] * self.value(a, b));
            }
        }
        acc.value()
    }

    /// Expresses the same function on the partition described by
    /// `assignment`, which maps each refined block to its source block.
    fn expand(&self, refined_weights: &[F], assignment: &[usize]) -> Self {
        let q = refined_weights.len();
        let mut values = vec![F::zero(); q * q];
        for r in 0..q {
            for s in 0..q {
                values[r * q + s] = self.value(assignment[r], assignment[s]);
            }
        }
        Self {
            weights: refined_weights.to_vec(),
            values,
        }
    }
}

/// Re-expresses every input on one shared partition: the sorted union of
/// all cumulative cut points, points closer than the merge tolerance
/// collapsed. Each output equals its input as a function on `[0,1]^2`.
pub fn common_refinement<F: Real>(inputs: &[StepGraphon<F>]) -> Vec<StepGraphon<F>> {
    assert!(!inputs.is_empty(), "common_refinement needs an input");
    if inputs
        .iter()
        .all(|h| h.weights == inputs[0].weights)
    {
        return inputs.to_vec();
    }
    let merge_tol = real::<F>(tol::CUT_MERGE);
    let mut cuts: Vec<F> = Vec::new();
    for h in inputs {
        let mut cumulative = F::zero();
        for &w in &h.weights[..h.weights.len() - 1] {
            cumulative = cumulative + w;
            cuts.push(cumulative);
        }
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).expect("cut points are finite"));
    let mut boundaries = vec![F::zero()];
    for c in cuts {
        if c - *boundaries.last().expect("nonempty") > merge_tol && F::one() - c > merge_tol {
            boundaries.push(c);
        }
    }
    boundaries.push(F::one());
    let refined_weights: Vec<F> = boundaries.windows(2).map(|w| w[1] - w[0]).collect();

    inputs
        .iter()
        .map(|h| {
            // Walk the refined blocks, advancing through h's own blocks.
            let mut assignment = Vec::with_capacity(refined_weights.len());
            let mut own_block = 0;
            let mut own_right = h.weights[0];
            for window in boundaries.windows(2) {
                let right = window[1];
                while own_block + 1 < h.weights.len() && right > own_right + merge_tol {
                    own_block += 1;
                    own_right = own_right + h.weights[own_block];
                }
                assignment.push(own_block);
            }
            h.expand(&refined_weights, &assignment)
        })
        .collect()
}

/// `∫∫ |h1 - h2|` evaluated on the common refinement.
pub fn l1_distance<F: Real>(h1: &StepGraphon<F>, h2: &StepGraphon<F>) -> F {
    let refined = common_refinement(&[h1.clone(), h2.clone()]);
    let (a, b) = (&refined[0], &refined[1]);
    let q = a.block_count();
    let mut acc = CompensatedSum::new();
    for r in 0..q {
        for s in 0..q {
            acc.add(a.weights[r] * a.weights[s] * (a.value(r, s) - b.value(r, s)).abs());
        }
    }
    acc.value()
}

impl<F: Real> StepGraphon<F> {
    /// Parses the graphon text format: a block count line, a weights line,
    /// then the rows of the value matrix; `#` starts a comment. Asymmetry
    /// up to the parse tolerance is averaged away; more is an error.
    pub fn parse(text: &str) -> Result<Self, GraphonError> {
        let mut lines = text.lines().enumerate().filter_map(|(num, raw)| {
            let content = raw.split('#').next().unwrap_or("").trim();
            (!content.is_empty()).then(|| (num + 1, content))
        });
        let (line, header) = lines.next().ok_or(GraphonError::Parse {
            line: 1,
            message: "missing block count".into(),
        })?;
        let q: usize = header.parse().map_err(|_| GraphonError::Parse {
            line,
            message: format!("invalid block count {header:?}"),
        })?;
        if q == 0 {
            return Err(GraphonError::EmptyPartition);
        }
        let parse_row = |line: usize, content: &str, expected: usize| {
            let row: Result<Vec<F>, _> = content
                .split_whitespace()
                .map(|token| {
                    token
                        .parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .map(real::<F>)
                        .ok_or(GraphonError::Parse {
                            line,
                            message: format!("invalid number {token:?}"),
                        })
                })
                .collect();
            let row = row?;
            if row.len() != expected {
                return Err(GraphonError::Parse {
                    line,
                    message: format!("expected {expected} numbers, got {}", row.len()),
                });
            }
            Ok(row)
        };
        let (line, content) = lines.next().ok_or(GraphonError::Parse {
            line,
            message: "missing weights line".into(),
        })?;
        let weights = parse_row(line, content, q)?;
        let mut values = Vec::with_capacity(q * q);
        let mut last_line = line;
        for _ in 0..q {
            let (line, content) = lines.next().ok_or(GraphonError::Parse {
                line: last_line,
                message: format!("expected {q} matrix rows"),
            })?;
            values.extend(parse_row(line, content, q)?);
            last_line = line;
        }
        if let Some((line, content)) = lines.next() {
            return Err(GraphonError::Parse {
                line,
                message: format!("unexpected extra line {content:?}"),
            });
        }
        // Enforce symmetry within tolerance, then average the halves.
        let sym_tol = tol::PARSE_SYMMETRY;
        for a in 0..q {
            for b in (a + 1)..q {
                let diff = to_f64((values[a * q + b] - values[b * q + a]).abs());
                if diff > sym_tol {
                    return Err(GraphonError::Asymmetric { row: a, col: b, diff });
                }
                let avg = (values[a * q + b] + values[b * q + a]) / real::<F>(2.0);
                values[a * q + b] = avg;
                values[b * q + a] = avg;
            }
        }
        Self::new(weights, values)
    }

    /// Emits the text format; numbers use the shortest round-trip decimal
    /// form, so parsing the output reproduces the graphon exactly.
    pub fn emit(&self) -> String {
        let q = self.block_count();
        let mut out = format!("{q}\n");
        let join = |xs: &[F]| {
            xs.iter()
                .map(|&x| format!("{}", to_f64(x)))
                .collect::<Vec<_>>()
                .join(" ")
        };
        out.push_str(&join(&self.weights));
        out.push('\n');
        for a in 0..q {
            out.push_str(&join(&self.values[a * q..(a + 1) * q]));
            out.push('\n');
        }
        out
    }
}
