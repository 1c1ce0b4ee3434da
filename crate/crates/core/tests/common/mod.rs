// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use redfield_core::matrix::CMat;
use redfield_core::{tensor_product, Bath, Complex64, Mat2, Mat4, Pair, Qubit, XState64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn gaussian_complex(rng: &mut impl Rng) -> Complex64 {
    // Box-Muller; two independent normals.
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen();
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, co) = (std::f64::consts::TAU * u2).sin_cos();
    c(r * co, r * s)
}

/// Valid weak-coupling bath with `omega = 1`.
pub fn random_bath(rng: &mut impl Rng) -> Bath {
    let a = rng.gen_range(0.001..0.05);
    let b = rng.gen_range(-0.05..0.05);
    let theta: f64 = rng.gen_range(0.0..=1.0);
    Bath::new(1.0, a, b, a * theta).unwrap()
}

/// Uniform point of the Bloch ball.
pub fn random_qubit(rng: &mut impl Rng) -> Qubit {
    loop {
        let v: [f64; 3] = [
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        ];
        if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            return Qubit::from_bloch(v);
        }
    }
}

pub fn random_matrix<const N: usize>(rng: &mut impl Rng) -> CMat<f64, N> {
    CMat::from_fn(|_, _| gaussian_complex(rng))
}

pub fn random_hermitian<const N: usize>(rng: &mut impl Rng) -> CMat<f64, N> {
    let g = random_matrix::<N>(rng);
    (g + g.adjoint()).scale_real(0.5)
}

/// Ginibre-distributed full-rank density matrix.
pub fn random_pair(rng: &mut impl Rng) -> Pair {
    let g = random_matrix::<4>(rng);
    let m = g * g.adjoint();
    let tr = m.trace().re;
    Pair::new(m.scale_real(1.0 / tr), 1e-12).unwrap()
}

/// Random positive X-state.
pub fn random_xstate(rng: &mut impl Rng) -> XState64 {
    let w: [f64; 4] = [rng.gen(), rng.gen(), rng.gen(), rng.gen()];
    let s: f64 = w.iter().sum();
    let p = w.map(|x| x / s);
    let phase = |rng: &mut dyn rand::RngCore| {
        let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        c(t.cos(), t.sin())
    };
    let m14 = (p[0] * p[3]).sqrt() * rng.gen_range(0.0..1.0);
    let m23 = (p[1] * p[2]).sqrt() * rng.gen_range(0.0..1.0);
    XState64 {
        rho11: p[0],
        rho22: p[1],
        rho33: p[2],
        rho44: p[3],
        rho14: phase(rng) * m14,
        rho23: phase(rng) * m23,
    }
}

/// Haar-ish random 2x2 unitary from a QR-free parametrization.
pub fn random_unitary2(rng: &mut impl Rng) -> Mat2 {
    let (x, y): (f64, f64) = (
        rng.gen_range(0.0..std::f64::consts::TAU),
        rng.gen_range(0.0..std::f64::consts::TAU),
    );
    let z: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let th: f64 = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
    let (s, co) = th.sin_cos();
    let e = |t: f64| c(t.cos(), t.sin());
    CMat([[e(x) * co, e(y) * s], [-e(-y + z) * s, e(-x + z) * co]])
}

pub fn random_local_unitary(rng: &mut impl Rng) -> Mat4 {
    tensor_product(&random_unitary2(rng), &random_unitary2(rng))
}

/// Random separable mixture of `k` product states.
pub fn random_separable(rng: &mut impl Rng, k: usize) -> Pair {
    let mut m = Mat4::zeros();
    let mut total = 0.0;
    for _ in 0..k {
        let w: f64 = rng.gen_range(0.05..1.0);
        let (a, b) = (random_qubit(rng), random_qubit(rng));
        m = m + tensor_product(&a.to_matrix(), &b.to_matrix()).scale_real(w);
        total += w;
    }
    Pair::new(m.scale_real(1.0 / total), 1e-12).unwrap()
}
