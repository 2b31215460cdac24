//! Discrete Fourier transforms: iterative radix-2 for power-of-two lengths,
//! Bluestein's chirp-z reduction for everything else.

use std::f64::consts::PI;

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `X_k = sum_n x_n exp(-2 pi j k n / N)`
    Forward,
    /// `x_n = (1/N) sum_k X_k exp(+2 pi j k n / N)`
    Inverse,
}

/// In-place radix-2 transform. Panics if the length is not a power of two.
pub fn fft_radix2(buf: &mut [Complex64], direction: Direction) {
    let n = buf.len();
    if n <= 1 {
        return;
    }
    assert!(
        n.is_power_of_two(),
        "radix-2 FFT needs a power-of-two length, got {n}"
    );

    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            buf.swap(i, j);
        }
    }

    let sign = match direction {
        Direction::Forward => -1.0,
        Direction::Inverse => 1.0,
    };
    // twiddles for the largest stage; smaller stages stride through them
    let twiddles: Vec<Complex64> = (0..n / 2)
        .map(|k| {
            let (s, c) = (2.0 * PI * k as f64 / n as f64).sin_cos();
            Complex64::new(c, sign * s)
        })
        .collect();

    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let w = twiddles[k * stride];
                let a = buf[start + k];
                let b = buf[start + k + half] * w;
                buf[start + k] = a + b;
                buf[start + k + half] = a - b;
            }
        }
        len <<= 1;
    }

    if direction == Direction::Inverse {
        let scale = 1.0 / n as f64;
        buf.iter_mut().for_each(|z| *z *= scale);
    }
}

/// Transform of arbitrary length.
pub fn dft(input: &[Complex64], direction: Direction) -> Vec<Complex64> {
    let n = input.len();
    if n.is_power_of_two() || n <= 1 {
        let mut buf = input.to_vec();
        fft_radix2(&mut buf, direction);
        return buf;
    }
    bluestein(input, direction)
}

fn bluestein(input: &[Complex64], direction: Direction) -> Vec<Complex64> {
    let n = input.len();
    let m = (2 * n - 1).next_power_of_two();
    let sign = match direction {
        Direction::Forward => -1.0,
        Direction::Inverse => 1.0,
    };
    // chirp w_k = exp(sign * j pi k^2 / n); k^2 reduced mod 2n keeps the angle small
    let chirp: Vec<Complex64> = (0..n)
        .map(|k| {
            let k2 = (k as u128 * k as u128 % (2 * n as u128)) as f64;
            let (s, c) = (PI * k2 / n as f64).sin_cos();
            Complex64::new(c, sign * s)
        })
        .collect();

    let mut a = vec![Complex64::new(0.0, 0.0); m];
    for k in 0..n {
        a[k] = input[k] * chirp[k];
    }
    let mut b = vec![Complex64::new(0.0, 0.0); m];
    b[0] = chirp[0].conj();
    for k in 1..n {
        b[k] = chirp[k].conj();
        b[m - k] = chirp[k].conj();
    }
    fft_radix2(&mut a, Direction::Forward);
    fft_radix2(&mut b, Direction::Forward);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    fft_radix2(&mut a, Direction::Inverse);

    let scale = match direction {
        Direction::Forward => 1.0,
        Direction::Inverse => 1.0 / n as f64,
    };
    (0..n).map(|k| a[k] * chirp[k] * scale).collect()
}
