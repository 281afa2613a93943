//! Iterative radix-2 FFT.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

/// In-place forward transform `X_k = Σ_n x_n e^{-2πi kn/N}`; `N` must be a power of two.
pub fn fft_in_place(data: &mut [Complex64]) {
    let n = data.len();
    assert!(n.is_power_of_two(), "FFT length must be a power of two");
    if n <= 1 {
        return;
    }
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            data.swap(i, j);
        }
    }
    // Twiddles computed directly rather than by repeated multiplication,
    // which drifts by O(N ε) over a stage.
    let twiddles: Vec<Complex64> = (0..n / 2)
        .map(|k| {
            let a = -2.0 * PI * k as f64 / n as f64;
            Complex64::new(a.cos(), a.sin())
        })
        .collect();
    let mut len = 2;
    while len <= n {
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..len / 2 {
                let w = twiddles[k * stride];
                let u = data[start + k];
                let v = data[start + k + len / 2] * w;
                data[start + k] = u + v;
                data[start + k + len / 2] = u - v;
            }
        }
        len <<= 1;
    }
}

/// Forward 2D transform of a row-major `n × n` array.
pub fn fft2_in_place(data: &mut [Complex64], n: usize) {
    assert_eq!(data.len(), n * n);
    for row in data.chunks_mut(n) {
        fft_in_place(row);
    }
    let mut column = alloc::vec![Complex64::new(0.0, 0.0); n];
    for c in 0..n {
        for r in 0..n {
            column[r] = data[r * n + c];
        }
        fft_in_place(&mut column);
        for r in 0..n {
            data[r * n + c] = column[r];
        }
    }
}
