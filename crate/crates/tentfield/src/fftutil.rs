//! Thin helpers over rustfft: cached plans, centered-grid transforms, and
//! frequency indexing.
//!
//! Discrete transforms approximate the continuous transform with kernel
//! `e^{-2 pi i x xi}` on a uniform grid `x_n = x0 + n dx`:
//! `F(xi_k) = dx e^{-2 pi i xi_k x0} sum_n f_n e^{-2 pi i k n / N}` with
//! `xi_k = k / (N dx)` and `k` read as a signed index.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

thread_local! {
    static PLANS: RefCell<(FftPlanner<f64>, HashMap<(usize, bool), Arc<dyn Fft<f64>>>)> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn plan(n: usize, forward: bool) -> Arc<dyn Fft<f64>> {
    PLANS.with(|cell| {
        let (planner, cache) = &mut *cell.borrow_mut();
        cache
            .entry((n, forward))
            .or_insert_with(|| {
                if forward {
                    planner.plan_fft_forward(n)
                } else {
                    planner.plan_fft_inverse(n)
                }
            })
            .clone()
    })
}

/// In-place DFT. Forward uses kernel `e^{-2 pi i nk/N}`; the inverse is
/// unnormalized (apply `1/N` yourself where the formulas require it).
pub fn dft_1d(data: &mut [Complex64], forward: bool) {
    plan(data.len(), forward).process(data);
}

/// In-place 2-D DFT of a row-major `rows x cols` array.
pub fn dft_2d(data: &mut [Complex64], rows: usize, cols: usize, forward: bool) {
    assert_eq!(data.len(), rows * cols);
    let row_plan = plan(cols, forward);
    for r in 0..rows {
        row_plan.process(&mut data[r * cols..(r + 1) * cols]);
    }
    let col_plan = plan(rows, forward);
    let mut buf = vec![Complex64::default(); rows];
    for c in 0..cols {
        for r in 0..rows {
            buf[r] = data[r * cols + c];
        }
        col_plan.process(&mut buf);
        for r in 0..rows {
            data[r * cols + c] = buf[r];
        }
    }
}

/// Signed frequency index of DFT bin `i` out of `n`.
pub fn signed_index(i: usize, n: usize) -> i64 {
    let i = i as i64;
    let n = n as i64;
    if i <= (n - 1) / 2 {
        i
    } else {
        i - n
    }
}

/// Frequency of DFT bin `i` for grid spacing `dx`.
pub fn freq_of_index(i: usize, n: usize, dx: f64) -> f64 {
    signed_index(i, n) as f64 / (n as f64 * dx)
}

/// DFT bin holding signed frequency index `k` (must satisfy `-n/2 <= k < n/2`).
pub fn bin_of_signed(k: i64, n: usize) -> usize {
    let n = n as i64;
    debug_assert!(k >= -(n / 2) && k < (n + 1) / 2 + (1 - n % 2));
    ((k % n + n) % n) as usize
}
