//! FFT helpers for uniform periodic grids `x_j = 2 pi j / M`.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// In-place `X_k = sum_j x_j e^{-2 pi i jk/M}` (unnormalized).
pub fn forward(buf: &mut [Complex64]) {
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
    fft.process(buf);
}

/// In-place `x_j = sum_k X_k e^{2 pi i jk/M}` (unnormalized).
pub fn inverse(buf: &mut [Complex64]) {
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()));
    fft.process(buf);
}

/// Signed Fourier mode carried by FFT bin `k` of an `m`-point transform;
/// `None` for the unpaired Nyquist bin of an even grid.
#[inline]
pub fn bin_mode(k: usize, m: usize) -> Option<i64> {
    let (k, m) = (k as i64, m as i64);
    if 2 * k < m {
        Some(k)
    } else if 2 * k == m {
        None
    } else {
        Some(k - m)
    }
}

/// FFT bin holding mode `n` on an `m`-point grid.
#[inline]
pub fn mode_bin(n: i64, m: usize) -> usize {
    n.rem_euclid(m as i64) as usize
}

/// Grid abscissae `2 pi j / M`.
pub fn abscissae(m: usize) -> impl Iterator<Item = f64> {
    (0..m).map(move |j| 2.0 * std::f64::consts::PI * j as f64 / m as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bins_and_modes() {
        assert_eq!(bin_mode(0, 8), Some(0));
        assert_eq!(bin_mode(3, 8), Some(3));
        assert_eq!(bin_mode(4, 8), None);
        assert_eq!(bin_mode(5, 8), Some(-3));
        assert_eq!(bin_mode(4, 9), Some(4));
        assert_eq!(bin_mode(5, 9), Some(-4));
        for n in -3..=3 {
            assert_eq!(bin_mode(mode_bin(n, 8), 8), Some(n));
        }
    }

    #[test]
    fn transform_pair_is_identity_up_to_m() {
        let mut v: Vec<Complex64> = (0..16).map(|j| Complex64::new(j as f64, -(j as f64).sin())).collect();
        let orig = v.clone();
        forward(&mut v);
        inverse(&mut v);
        for (a, b) in v.iter().zip(&orig) {
            assert!((a / 16.0 - b).norm() < 1e-13);
        }
    }
}
