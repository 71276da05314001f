//! In-place discrete Fourier transforms along the axes of row-major arrays.

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

/// Transforms along `axis` of an array with the given `shape`. The inverse is
/// normalized by `1/len`, so a forward/inverse pair is the identity.
pub(crate) fn fft_axis(values: &mut [Complex64], shape: &[usize], axis: usize, inverse: bool) {
    let len = shape[axis];
    let direction = if inverse {
        FftDirection::Inverse
    } else {
        FftDirection::Forward
    };
    let fft = FftPlanner::new().plan_fft(len, direction);
    let stride: usize = shape[axis + 1..].iter().product();
    if stride == 1 {
        fft.process(values);
    } else {
        let outer: usize = shape[..axis].iter().product();
        let mut column = vec![Complex64::default(); len];
        for o in 0..outer {
            for s in 0..stride {
                let base = o * len * stride + s;
                for (i, c) in column.iter_mut().enumerate() {
                    *c = values[base + i * stride];
                }
                fft.process(&mut column);
                for (i, c) in column.iter().enumerate() {
                    values[base + i * stride] = *c;
                }
            }
        }
    }
    if inverse {
        let scale = 1.0 / len as f64;
        values.iter_mut().for_each(|v| *v *= scale);
    }
}

pub(crate) fn fft_all(values: &mut [Complex64], shape: &[usize], inverse: bool) {
    for axis in 0..shape.len() {
        fft_axis(values, shape, axis, inverse);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_two_dimensional() {
        let shape = [6, 5];
        let orig: Vec<Complex64> = (0..30)
            .map(|i| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos()))
            .collect();
        let mut v = orig.clone();
        fft_all(&mut v, &shape, false);
        fft_all(&mut v, &shape, true);
        for (a, b) in v.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn column_transform_matches_direct_sum() {
        let shape = [4, 3];
        let orig: Vec<Complex64> = (0..12).map(|i| Complex64::new(i as f64, 0.0)).collect();
        let mut v = orig.clone();
        fft_axis(&mut v, &shape, 0, false);
        for k in 0..4 {
            for c in 0..3 {
                let direct: Complex64 = (0..4)
                    .map(|j| {
                        orig[j * 3 + c]
                            * Complex64::from_polar(
                                1.0,
                                -2.0 * std::f64::consts::PI * (j * k) as f64 / 4.0,
                            )
                    })
                    .sum();
                assert!((v[k * 3 + c] - direct).norm() < 1e-12);
            }
        }
    }
}
