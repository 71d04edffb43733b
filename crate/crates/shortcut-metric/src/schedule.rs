//! Greedy selection of disjoint index blocks `(I_n)` from a positive sequence.
//!
//! Group `n` consists of `N_n = ceil(2^(n / ((p - 1) sigma)))` targets of size
//! `1/N_n`. Indices are scanned once in increasing order; an index whose value
//! exceeds the current target is skipped, and a sub-block `J_k` is closed as
//! soon as its sum reaches half its target. `I_n` is the union of the
//! sub-blocks of group `n`. Then every group sums to at least `1/2`, while
//! `(sum_{I_n} alpha^p)^sigma <= (3/2)^(p sigma) 2^-n`.

use crate::error::{Result, ShortcutError};

#[derive(Clone, Debug, PartialEq)]
pub struct Checkpoint {
    pub prefix: usize,
    pub block_sum: f64,
    pub power_series: f64,
    pub groups: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScheduleReport {
    /// One-based indices of each block `I_n`.
    pub blocks: Vec<Vec<usize>>,
    pub block_sums: Vec<f64>,
    /// `sum_{i in I_n} alpha_i^p`.
    pub block_power_sums: Vec<f64>,
    /// `sum_n sum_{I_n} alpha_i`.
    pub total_sum: f64,
    /// `sum_n (sum_{I_n} alpha_i^p)^sigma`.
    pub power_series: f64,
    /// `(3/2)^(p sigma) sum_n 2^-n` over the groups formed.
    pub power_bound: f64,
    /// Part of `total_sum` coming from indices at least `sqrt(prefix)`.
    pub tail_sum: f64,
    /// The selected mass keeps growing late in the prefix: `tail_sum >= 1/2`.
    pub diverging: bool,
    pub checkpoints: Vec<Checkpoint>,
}

fn group_size(n: usize, p: f64, sigma: f64) -> f64 {
    (2f64.powf(n as f64 / ((p - 1.0) * sigma))).ceil()
}

pub fn schedule_blocks(alpha: &[f64], p: f64, sigma: f64) -> Result<ScheduleReport> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(ShortcutError::Param(format!("p = {p} must exceed 1")));
    }
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(ShortcutError::Param(format!("sigma = {sigma} must lie in (0, 1]")));
    }
    if alpha.is_empty() {
        return Err(ShortcutError::Param("empty sequence".into()));
    }
    if let Some(i) = alpha.iter().position(|a| !(a.is_finite() && *a > 0.0)) {
        return Err(ShortcutError::Param(format!("alpha_{} = {} is not positive", i + 1, alpha[i])));
    }
    let len = alpha.len();
    let tail_start = (len as f64).sqrt().ceil() as usize;
    let mut checkpoints_at: Vec<usize> = std::iter::successors(Some(10usize), |c| c.checked_mul(10)).take_while(|&c| c < len).collect();
    checkpoints_at.push(len);

    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut block_sums = Vec::new();
    let mut block_power_sums = Vec::new();
    let mut checkpoints = Vec::new();
    let (mut total, mut tail, mut series_done) = (0.0, 0.0, 0.0);

    let mut group = 1usize;
    let mut targets_left = group_size(group, p, sigma);
    let mut target = 1.0 / targets_left;
    let mut group_idx: Vec<usize> = Vec::new();
    let (mut group_sum, mut group_pow) = (0.0, 0.0);
    let mut cur: Vec<usize> = Vec::new();
    let (mut cur_sum, mut cur_pow) = (0.0, 0.0);
    let mut next_cp = 0;

    for (k, &a) in alpha.iter().enumerate() {
        let idx = k + 1;
        if a <= target {
            cur.push(idx);
            cur_sum += a;
            cur_pow += a.powf(p);
            if cur_sum >= target / 2.0 {
                for &j in &cur {
                    if j >= tail_start {
                        tail += alpha[j - 1];
                    }
                }
                total += cur_sum;
                group_sum += cur_sum;
                group_pow += cur_pow;
                group_idx.append(&mut cur);
                cur_sum = 0.0;
                cur_pow = 0.0;
                targets_left -= 1.0;
                if targets_left < 0.5 {
                    series_done += group_pow.powf(sigma);
                    blocks.push(std::mem::take(&mut group_idx));
                    block_sums.push(group_sum);
                    block_power_sums.push(group_pow);
                    group_sum = 0.0;
                    group_pow = 0.0;
                    group += 1;
                    targets_left = group_size(group, p, sigma);
                    if !targets_left.is_finite() || targets_left > 1e15 {
                        break;
                    }
                    target = 1.0 / targets_left;
                }
            }
        }
        if next_cp < checkpoints_at.len() && idx == checkpoints_at[next_cp] {
            let partial = if group_idx.is_empty() { 0.0 } else { group_pow.powf(sigma) };
            checkpoints.push(Checkpoint {
                prefix: idx,
                block_sum: total,
                power_series: series_done + partial,
                groups: blocks.len() + usize::from(!group_idx.is_empty()),
            });
            next_cp += 1;
        }
    }
    if !group_idx.is_empty() {
        series_done += group_pow.powf(sigma);
        blocks.push(group_idx);
        block_sums.push(group_sum);
        block_power_sums.push(group_pow);
    }
    // The greedy ends inside an unfilled target. If even the late values all exceed
    // it, the sequence does not have small values off a summable set.
    let second_half_min = alpha[len / 2..].iter().cloned().fold(f64::INFINITY, f64::min);
    if second_half_min > target {
        return Err(ShortcutError::Schedule(format!(
            "values stay above the target {target}: tail minimum {second_half_min} does not tend to 0"
        )));
    }
    let groups = blocks.len();
    let power_bound = 1.5f64.powf(p * sigma) * (1.0 - 0.5f64.powi(groups as i32));
    Ok(ScheduleReport {
        blocks,
        block_sums,
        block_power_sums,
        total_sum: total,
        power_series: series_done,
        power_bound,
        tail_sum: tail,
        diverging: tail >= 0.5,
        checkpoints,
    })
}
