//! Weighted pool-adjacent-violators for non-increasing fits.

use alloc::vec::Vec;

/// Least-squares non-increasing fit of `values` under `weights`.
///
/// Adjacent blocks that violate the ordering are merged into their weighted
/// mean until the sequence is non-increasing. Output has the input length.
pub fn isotonic_non_increasing(values: &[f64], weights: &[f64]) -> Vec<f64> {
    assert_eq!(values.len(), weights.len(), "one weight per value");

    // (weighted mean, total weight, member count)
    let mut blocks: Vec<(f64, f64, usize)> = Vec::with_capacity(values.len());
    for (&v, &w) in values.iter().zip(weights) {
        blocks.push((v, w, 1));
        while blocks.len() >= 2 {
            let (m1, w1, n1) = blocks[blocks.len() - 1];
            let (m0, w0, n0) = blocks[blocks.len() - 2];
            if m0 >= m1 {
                break;
            }
            let w = w0 + w1;
            blocks.truncate(blocks.len() - 2);
            blocks.push(((m0 * w0 + m1 * w1) / w, w, n0 + n1));
        }
    }

    let mut out = Vec::with_capacity(values.len());
    for (mean, _, n) in blocks {
        out.extend(core::iter::repeat_n(mean, n));
    }
    out
}
