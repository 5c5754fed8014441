//! Complex discrete Fourier transforms.
//!
//! Power-of-two lengths use an iterative radix-2 decimation-in-time
//! transform; every other length falls back to the direct O(n²) sum.

use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

pub(crate) struct Fft {
    n: usize,
    // e^{-2πik/n} for k in 0..n (direct) or 0..n/2 (radix-2)
    twiddles: Vec<Complex64>,
    bitrev: Option<Vec<usize>>,
}

impl Fft {
    pub(crate) fn new(n: usize) -> Self {
        assert!(n > 0, "transform length must be positive");
        if n.is_power_of_two() {
            let bits = n.trailing_zeros();
            let bitrev = (0..n).map(|i| if bits == 0 { 0 } else { i.reverse_bits() >> (usize::BITS - bits) }).collect();
            Self { n, twiddles: twiddles(n, n / 2), bitrev: Some(bitrev) }
        } else {
            Self { n, twiddles: twiddles(n, n), bitrev: None }
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.n
    }

    /// Forward transform, X[k] = Σ x[n] e^{-2πikn/N}.
    pub(crate) fn forward(&self, buf: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        self.run(buf, scratch, false);
    }

    /// Inverse transform including the 1/N factor.
    pub(crate) fn inverse(&self, buf: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        self.run(buf, scratch, true);
        let scale = 1.0 / self.n as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }

    fn run(&self, buf: &mut [Complex64], scratch: &mut Vec<Complex64>, inverse: bool) {
        assert_eq!(buf.len(), self.n);
        match &self.bitrev {
            Some(rev) => self.radix2(buf, rev, inverse),
            None => self.direct(buf, scratch, inverse),
        }
    }

    fn radix2(&self, buf: &mut [Complex64], rev: &[usize], inverse: bool) {
        let n = self.n;
        for (i, &j) in rev.iter().enumerate() {
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let stride = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..half {
                    let mut w = self.twiddles[k * stride];
                    if inverse {
                        w = w.conj();
                    }
                    let a = buf[start + k];
                    let b = buf[start + k + half] * w;
                    buf[start + k] = a + b;
                    buf[start + k + half] = a - b;
                }
            }
            len <<= 1;
        }
    }

    fn direct(&self, buf: &mut [Complex64], scratch: &mut Vec<Complex64>, inverse: bool) {
        let n = self.n;
        scratch.clear();
        scratch.extend_from_slice(buf);
        for (k, out) in buf.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (m, x) in scratch.iter().enumerate() {
                let mut w = self.twiddles[(k * m) % n];
                if inverse {
                    w = w.conj();
                }
                acc += x * w;
            }
            *out = acc;
        }
    }
}

fn twiddles(n: usize, count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|k| {
            let angle = -2.0 * PI * k as f64 / n as f64;
            Complex64::new(libm::cos(angle), libm::sin(angle))
        })
        .collect()
}
