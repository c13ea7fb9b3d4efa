//! Independent oracles and reference data shared by the
//! integration tests.

#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// One reference row: `(eta, Omega t1, C11, C12, C33, C34)`.
pub type ReferenceRow = (f64, f64, f64, f64, f64, f64);

pub const REFERENCE_TABLE: [ReferenceRow; 41] = [
    (0.18, 267.75, 0.97520, -0.22135, -0.21954, 0.97560),
    (0.20, 243.65, 0.99948, 0.03218, 0.03193, 0.99949),
    (0.22, 179.76, 0.97284, -0.23146, -0.23053, 0.97306),
    (0.24, 168.13, 1.00000, 0.00000, 0.00000, 1.00000),
    (0.26, 129.49, 0.97165, -0.23640, -0.24006, 0.97076),
    (0.28, 130.92, 0.99376, 0.11153, 0.11041, 0.99389),
    (0.30, 104.95, 0.99505, -0.09935, -0.09778, 0.99521),
    (0.32, 92.35, 0.99374, -0.11172, -0.10790, 0.99416),
    (0.34, 79.49, 0.98271, -0.18517, -0.18852, 0.98207),
    (0.36, 80.64, 0.99586, 0.09088, 0.09407, 0.99557),
    (0.38, 67.33, 0.99541, -0.09572, -0.09377, 0.99559),
    (0.40, 68.44, 0.98505, 0.17225, 0.16794, 0.98580),
    (0.42, 54.57, 0.98859, -0.15063, -0.15383, 0.98810),
    (0.44, 55.56, 0.99646, 0.08411, 0.08530, 0.99636),
    (0.46, 111.30, 0.97957, -0.20111, -0.19843, 0.98012),
    (0.48, 41.83, 0.97796, -0.20881, -0.20607, 0.97854),
    (0.50, 42.72, 1.00000, 0.00000, 0.00000, 1.00000),
    (0.52, 43.67, 0.97497, 0.22234, 0.21915, 0.97570),
    (0.54, 87.23, 1.00000, 0.00000, 0.00000, 1.00000),
    (0.56, 132.93, 0.96361, 0.26731, 0.26592, 0.96400),
    (0.58, 118.42, 0.97544, -0.22027, -0.22025, 0.97544),
    (0.60, 29.81, 0.99320, -0.11640, -0.11358, 0.99353),
    (0.62, 30.64, 0.99720, 0.07473, 0.07201, 0.99740),
    (0.64, 31.52, 0.96241, 0.27158, 0.26906, 0.96312),
    (0.66, 62.42, 0.99952, -0.03096, -0.03027, 0.99954),
    (0.68, 95.26, 0.99509, 0.09898, 0.09985, 0.99500),
    (0.70, 353.53, 0.99224, 0.12437, 0.12458, 0.99221),
    (0.72, 178.61, 0.97983, -0.19981, -0.20082, 0.97963),
    (0.74, 82.49, 0.99876, -0.04974, -0.05286, 0.99860),
    (0.76, 50.12, 0.99715, -0.07548, -0.07608, 0.99710),
    (0.78, 186.67, 0.96719, -0.25406, -0.25835, 0.96605),
    (0.80, 155.88, 0.99888, 0.04737, 0.04576, 0.99895),
    (0.82, 175.54, 0.99258, -0.12162, -0.12311, 0.99239),
    (0.84, 17.27, 0.97693, -0.21356, -0.21395, 0.97685),
    (0.86, 18.04, 0.99867, -0.05149, -0.05191, 0.99865),
    (0.88, 18.88, 0.99205, 0.12582, 0.12453, 0.99221),
    (0.90, 19.79, 0.95031, 0.31129, 0.31157, 0.95022),
    (0.92, 153.85, 0.99324, 0.11610, 0.11507, 0.99336),
    (0.94, 39.40, 0.99517, 0.09817, 0.09647, 0.99534),
    (0.96, 60.04, 0.99627, 0.08632, 0.08611, 0.99629),
    (0.98, 122.12, 0.99709, 0.07617, 0.07482, 0.99720),
];

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `L_m^k(x)` from the finite sum `sum_j (-x)^j (m+k)! / ((m-j)! (k+j)! j!)`
/// evaluated in exact rational arithmetic (any finite `f64` is a dyadic
/// rational), rounded to `f64` once at the end.
pub fn laguerre_exact(m: u64, k: u64, x: f64) -> f64 {
    let x = BigRational::from_float(x).expect("finite argument");
    let mut total = BigRational::zero();
    let mut power = BigRational::one();
    let top = factorial(m + k);
    for j in 0..=m {
        let denom = factorial(m - j) * factorial(k + j) * factorial(j);
        total += &power * BigRational::new(top.clone(), denom);
        power *= -&x;
    }
    total.to_f64().expect("representable")
}

/// `exp[i eta (a + a^dag)]` on the first `size` Fock states, computed by
/// diagonalizing the position quadrature truncated at `size + padding`.
pub fn displacement_by_diagonalization(
    eta: f64,
    size: usize,
    padding: usize,
) -> DMatrix<Complex64> {
    let n = size + padding;
    let x = DMatrix::from_fn(n, n, |r, c| {
        if r + 1 == c {
            (c as f64).sqrt()
        } else if c + 1 == r {
            (r as f64).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(x);
    DMatrix::from_fn(size, size, |r, c| {
        (0..n)
            .map(|j| {
                Complex64::from_polar(1.0, eta * eig.eigenvalues[j])
                    * eig.eigenvectors[(r, j)]
                    * eig.eigenvectors[(c, j)]
            })
            .sum()
    })
}
