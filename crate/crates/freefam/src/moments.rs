//! Moment-cumulant transforms via the block recursion, a brute-force
//! non-crossing-partition oracle, and Hankel positivity utilities.

use crate::cumulants::CumulantSequence;
use crate::series::TruncatedSeries;
use crate::{Error, Result};

/// Hard guard for the partition enumeration (Catalan growth).
pub const MAX_ENUMERATION: usize = 14;

/// Raw moments `m_1..m_N` of a measure; `m_0 = 1` is implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    m: Vec<f64>,
}

impl MomentSequence {
    pub fn new(m: Vec<f64>) -> Result<Self> {
        if m.is_empty() || m.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { m })
    }

    pub fn order(&self) -> usize {
        self.m.len()
    }

    /// 1-based access: `get(k)` is `m_k`; `get(0)` is 1.
    pub fn get(&self, k: usize) -> f64 {
        if k == 0 {
            return 1.0;
        }
        self.m.get(k - 1).copied().unwrap_or(0.0)
    }

    pub fn values(&self) -> &[f64] {
        &self.m
    }
}

/// Moments from free cumulants by the recursion over the size `s` of the
/// block containing the first element:
/// `m_n = sum_s c_s * [x^{n-s}] M(x)^s` with `M(x) = 1 + m_1 x + ...`.
pub fn moments_from_cumulants(c: &CumulantSequence, n: usize) -> Result<MomentSequence> {
    if n > c.order() {
        return Err(Error::InvalidArgument(
            "moment order exceeds cumulant order".into(),
        ));
    }
    let mut m = vec![0.0; n + 1];
    m[0] = 1.0;
    for nn in 1..=n {
        let prefix = TruncatedSeries::new(m[..nn].to_vec())?.resized(nn - 1);
        let mut power = TruncatedSeries::one(nn - 1);
        let mut total = 0.0;
        for s in 1..=nn {
            power = power.mul(&prefix)?;
            total += c.get(s) * power.coeff(nn - s);
        }
        m[nn] = total;
    }
    MomentSequence::new(m[1..].to_vec())
}

/// Inverse of [`moments_from_cumulants`]: the unique cumulant sequence whose
/// moments match `m` to order `n`.
pub fn cumulants_from_moments(m: &MomentSequence, n: usize) -> Result<CumulantSequence> {
    if n > m.order() {
        return Err(Error::InvalidArgument(
            "cumulant order exceeds moment order".into(),
        ));
    }
    let mut full = vec![1.0];
    full.extend_from_slice(&m.values()[..n]);
    let series = TruncatedSeries::new(full)?;
    let mut c = vec![0.0; n];
    for nn in 1..=n {
        let prefix = series.resized(nn - 1);
        let mut power = TruncatedSeries::one(nn - 1);
        let mut rest = 0.0;
        for s in 1..nn {
            power = power.mul(&prefix)?;
            rest += c[s - 1] * power.coeff(nn - s);
        }
        c[nn - 1] = m.get(nn) - rest;
    }
    CumulantSequence::new(c)
}

/// A non-crossing partition of `{1, .., n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct NonCrossingPartition {
    blocks: Vec<Vec<usize>>,
}

impl NonCrossingPartition {
    /// Blocks with 1-based elements, each block sorted.
    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().map(|b| b.len())
    }
}

// Partitions of a contiguous range of the given length (0-based, relative).
// The block containing element 0 is chosen by bitmask; the gaps between its
// members are filled independently.
fn generate(len: usize, memo: &mut Vec<Option<Vec<Vec<Vec<usize>>>>>) -> Vec<Vec<Vec<usize>>> {
    if let Some(cached) = &memo[len] {
        return cached.clone();
    }
    let mut out = Vec::new();
    if len == 0 {
        out.push(Vec::new());
    } else {
        for mask in 0u32..(1 << (len - 1)) {
            let mut first_block = vec![0usize];
            for bit in 0..len - 1 {
                if mask >> bit & 1 == 1 {
                    first_block.push(bit + 1);
                }
            }
            // Gap segments between consecutive members and after the last.
            let mut gaps = Vec::new();
            for w in first_block.windows(2) {
                gaps.push((w[0] + 1, w[1]));
            }
            gaps.push((first_block[first_block.len() - 1] + 1, len));
            // Cartesian product of the gap partitions.
            let mut partials: Vec<Vec<Vec<usize>>> = vec![vec![first_block.clone()]];
            for &(start, end) in &gaps {
                let sub = generate(end - start, memo);
                let mut next = Vec::with_capacity(partials.len() * sub.len());
                for partial in &partials {
                    for sub_part in &sub {
                        let mut combined = partial.clone();
                        for block in sub_part {
                            combined.push(block.iter().map(|e| e + start).collect());
                        }
                        next.push(combined);
                    }
                }
                partials = next;
            }
            out.extend(partials);
        }
    }
    memo[len] = Some(out.clone());
    out
}

/// All non-crossing partitions of `{1, .., n}`; the count is the n-th
/// Catalan number. `n` is capped at [`MAX_ENUMERATION`].
pub fn enumerate_nc_partitions(n: usize) -> Result<Vec<NonCrossingPartition>> {
    if n > MAX_ENUMERATION {
        return Err(Error::EnumerationBound);
    }
    let mut memo = vec![None; n + 1];
    let raw = generate(n, &mut memo);
    Ok(raw
        .into_iter()
        .map(|blocks| NonCrossingPartition {
            blocks: blocks
                .into_iter()
                .map(|b| b.into_iter().map(|e| e + 1).collect())
                .collect(),
        })
        .collect())
}

/// Literal partition-sum moment `sum over NC partitions of prod c_{|B|}`.
/// Test oracle for [`moments_from_cumulants`].
pub fn moments_via_nc_oracle(c: &CumulantSequence, n: usize) -> Result<f64> {
    let partitions = enumerate_nc_partitions(n)?;
    Ok(partitions
        .iter()
        .map(|p| p.block_sizes().map(|s| c.get(s)).product::<f64>())
        .sum())
}

/// Leading principal minors of the Hankel matrix of a raw sequence
/// `seq = (s_0, s_1, ...)`, sizes 1..=k. Passes when every determinant is
/// `>= -tol * scale` with `scale` the largest entry magnitude involved.
pub fn hankel_minors(seq: &[f64], k: usize, tol: f64) -> Result<(Vec<f64>, bool)> {
    if seq.len() < 2 * k - 1 {
        return Err(Error::HankelEntries(k));
    }
    let scale = seq[..2 * k - 1]
        .iter()
        .fold(1.0f64, |acc, x| acc.max(x.abs()));
    let mut dets = Vec::with_capacity(k);
    let mut passed = true;
    for size in 1..=k {
        let mut mat: Vec<Vec<f64>> = (0..size)
            .map(|i| (0..size).map(|j| seq[i + j]).collect())
            .collect();
        let det = determinant(&mut mat);
        if det < -tol * scale.powi(size as i32) {
            passed = false;
        }
        dets.push(det);
    }
    Ok((dets, passed))
}

/// Hankel positivity of a moment sequence (`m_0 = 1` prepended).
pub fn hankel_psd(seq: &MomentSequence, k: usize, tol: f64) -> Result<(Vec<f64>, bool)> {
    let mut full = vec![1.0];
    full.extend_from_slice(seq.values());
    hankel_minors(&full, k, tol)
}

fn determinant(mat: &mut [Vec<f64>]) -> f64 {
    let n = mat.len();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| mat[a][col].abs().total_cmp(&mat[b][col].abs()))
            .unwrap();
        if mat[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            mat.swap(pivot, col);
            det = -det;
        }
        det *= mat[col][col];
        for row in col + 1..n {
            let factor = mat[row][col] / mat[col][col];
            for cc in col..n {
                let sub = factor * mat[col][cc];
                mat[row][cc] -= sub;
            }
        }
    }
    det
}

/// Outer bound `4 max_k |c_k|^{1/k} + |c_1|` on the support radius of a
/// measure with cumulants `c` (Catalan-count estimate).
pub fn support_bound(c: &CumulantSequence) -> f64 {
    let m = (2..=c.order())
        .map(|k| c.get(k).abs().powf(1.0 / k as f64))
        .fold(0.0f64, f64::max);
    4.0 * m + c.get(1).abs()
}
