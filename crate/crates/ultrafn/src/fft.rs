//! Complex fast Fourier transforms for arbitrary sizes.
//!
//! The forward transform computes X_k = sum_j x_j exp(-2 pi i j k / N) with
//! no normalization; the inverse uses the conjugate kernel. Power-of-two
//! sizes take an iterative radix-2 path, other smooth sizes a recursive
//! mixed-radix decomposition with generic odd butterflies, and sizes with a
//! large prime factor fall back to Bluestein's chirp-z algorithm on a
//! power-of-two convolution.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Largest prime factor handled by the generic mixed-radix butterfly.
const MAX_BUTTERFLY_PRIME: usize = 64;

enum Engine {
    Trivial,
    Pow2 {
        // twiddles[j] = exp(-2 pi i j / N) for j < N/2
        twiddles: Vec<Complex64>,
    },
    MixedRadix {
        factors: Vec<usize>,
        // full table of exp(-2 pi i j / N), j < N
        table: Vec<Complex64>,
    },
    Bluestein {
        inner: Arc<Fft>,
        // chirp[j] = exp(-pi i j^2 / N)
        chirp: Vec<Complex64>,
        // forward FFT of the padded conjugate chirp
        kernel_fwd: Vec<Complex64>,
        kernel_inv: Vec<Complex64>,
    },
}

/// A reusable transform plan for one size.
pub struct Fft {
    size: usize,
    engine: Engine,
}

fn root_table(n: usize, count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|j| {
            let angle = -2.0 * std::f64::consts::PI * j as f64 / n as f64;
            Complex64::new(angle.cos(), angle.sin())
        })
        .collect()
}

fn factorize(mut n: usize) -> Vec<usize> {
    let mut factors = Vec::new();
    let mut p = 2;
    while p * p <= n {
        while n.is_multiple_of(p) {
            factors.push(p);
            n /= p;
        }
        p += 1;
    }
    if n > 1 {
        factors.push(n);
    }
    factors
}

impl Fft {
    pub fn new(size: usize) -> Self {
        assert!(size >= 1);
        if size == 1 {
            return Fft {
                size,
                engine: Engine::Trivial,
            };
        }
        if size.is_power_of_two() {
            return Fft {
                size,
                engine: Engine::Pow2 {
                    twiddles: root_table(size, size / 2),
                },
            };
        }
        let factors = factorize(size);
        if factors.iter().all(|&p| p <= MAX_BUTTERFLY_PRIME) {
            return Fft {
                size,
                engine: Engine::MixedRadix {
                    factors,
                    table: root_table(size, size),
                },
            };
        }
        // Bluestein: X_k = c_k * sum_j (x_j c_j) b_{k-j}, b_m = conj(c_m),
        // with c_j = exp(-pi i j^2 / N); the convolution runs on a
        // power-of-two length >= 2N-1.
        let m = (2 * size - 1).next_power_of_two();
        let inner = Arc::new(Fft::new(m));
        let chirp: Vec<Complex64> = (0..size)
            .map(|j| {
                // j^2 reduced mod 2N keeps the angle within one turn
                let j2 = (j * j) % (2 * size);
                let angle = -std::f64::consts::PI * j2 as f64 / size as f64;
                Complex64::new(angle.cos(), angle.sin())
            })
            .collect();
        let mut kernel = vec![ZERO; m];
        for j in 0..size {
            let b = chirp[j].conj();
            kernel[j] = b;
            if j > 0 {
                kernel[m - j] = b;
            }
        }
        let mut kernel_fwd = vec![ZERO; m];
        inner.process(&kernel, &mut kernel_fwd, false);
        let kernel_conj: Vec<Complex64> = kernel.iter().map(|z| z.conj()).collect();
        let mut kernel_inv = vec![ZERO; m];
        inner.process(&kernel_conj, &mut kernel_inv, false);
        Fft {
            size,
            engine: Engine::Bluestein {
                inner,
                chirp,
                kernel_fwd,
                kernel_inv,
            },
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Unnormalized transform of `input` into `output`.
    pub fn process(&self, input: &[Complex64], output: &mut [Complex64], inverse: bool) {
        assert_eq!(input.len(), self.size);
        assert_eq!(output.len(), self.size);
        match &self.engine {
            Engine::Trivial => output[0] = input[0],
            Engine::Pow2 { twiddles } => {
                output.copy_from_slice(input);
                pow2_in_place(output, twiddles, inverse);
            }
            Engine::MixedRadix { factors, table } => {
                mixed_radix(input, 1, output, self.size, factors, table, self.size, inverse);
            }
            Engine::Bluestein {
                inner,
                chirp,
                kernel_fwd,
                kernel_inv,
            } => {
                let m = inner.size();
                let kernel = if inverse { kernel_inv } else { kernel_fwd };
                let mut a = vec![ZERO; m];
                for j in 0..self.size {
                    let c = if inverse { chirp[j].conj() } else { chirp[j] };
                    a[j] = input[j] * c;
                }
                let mut fa = vec![ZERO; m];
                inner.process(&a, &mut fa, false);
                for (x, k) in fa.iter_mut().zip(kernel) {
                    *x *= k;
                }
                let mut conv = vec![ZERO; m];
                inner.process(&fa, &mut conv, true);
                let scale = 1.0 / m as f64;
                for k in 0..self.size {
                    let c = if inverse { chirp[k].conj() } else { chirp[k] };
                    output[k] = conv[k] * c * scale;
                }
            }
        }
    }

    /// Convenience forward transform.
    pub fn forward(&self, input: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.size];
        self.process(input, &mut out, false);
        out
    }

    /// Convenience inverse transform, scaled by 1/N so that
    /// `inverse(forward(x)) == x`.
    #[cfg(test)]
    pub fn inverse_normalized(&self, input: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![ZERO; self.size];
        self.process(input, &mut out, true);
        let scale = 1.0 / self.size as f64;
        for x in out.iter_mut() {
            *x *= scale;
        }
        out
    }
}

fn pow2_in_place(data: &mut [Complex64], twiddles: &[Complex64], inverse: bool) {
    let n = data.len();
    // bit reversal permutation
    let mut j = 0usize;
    for i in 0..n {
        if i < j {
            data.swap(i, j);
        }
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
    }
    let mut len = 2;
    while len <= n {
        let stride = n / len;
        let half = len / 2;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let mut w = twiddles[k * stride];
                if inverse {
                    w = w.conj();
                }
                let a = data[start + k];
                let b = data[start + k + half] * w;
                data[start + k] = a + b;
                data[start + k + half] = a - b;
            }
        }
        len <<= 1;
    }
}

/// Recursive decimation-in-time over the remaining factor list. `table` holds
/// the roots of the top-level size `top`; the current sub-transform of size
/// `n` uses every (top/n)-th entry.
#[allow(clippy::too_many_arguments)]
fn mixed_radix(
    input: &[Complex64],
    in_stride: usize,
    output: &mut [Complex64],
    n: usize,
    factors: &[usize],
    table: &[Complex64],
    top: usize,
    inverse: bool,
) {
    if n == 1 {
        output[0] = input[0];
        return;
    }
    let p = factors[0];
    let m = n / p;
    for q in 0..p {
        mixed_radix(
            &input[q * in_stride..],
            in_stride * p,
            &mut output[q * m..(q + 1) * m],
            m,
            &factors[1..],
            table,
            top,
            inverse,
        );
    }
    let root_stride = top / n;
    let mut scratch = vec![ZERO; n];
    let mut col = vec![ZERO; p];
    for k1 in 0..m {
        for q in 0..p {
            // pre-twiddle by w_n^{q k1}
            let idx = (root_stride * q * k1) % top;
            let mut w = table[idx];
            if inverse {
                w = w.conj();
            }
            col[q] = output[q * m + k1] * w;
        }
        for q2 in 0..p {
            // p-point DFT across the columns
            let mut acc = ZERO;
            for (q, &v) in col.iter().enumerate() {
                let idx = ((q * q2) % p) * (top / p);
                let mut w = table[idx];
                if inverse {
                    w = w.conj();
                }
                acc += v * w;
            }
            scratch[k1 + q2 * m] = acc;
        }
    }
    output.copy_from_slice(&scratch);
}

static PLANS: OnceLock<Mutex<HashMap<usize, Arc<Fft>>>> = OnceLock::new();

/// Shared plan cache; plans are immutable and cheap to reuse.
pub fn plan(size: usize) -> Arc<Fft> {
    let cache = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("plan cache lock");
    map.entry(size).or_insert_with(|| Arc::new(Fft::new(size))).clone()
}

/// Direct O(N^2) reference transform.
#[cfg(test)]
pub fn dft_direct(input: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let n = input.len();
    let sign = if inverse { 1.0 } else { -1.0 };
    (0..n)
        .map(|k| {
            let mut acc = ZERO;
            for (j, &x) in input.iter().enumerate() {
                let angle = sign * 2.0 * std::f64::consts::PI * ((j * k) % n) as f64 / n as f64;
                acc += x * Complex64::new(angle.cos(), angle.sin());
            }
            acc
        })
        .collect()
}
