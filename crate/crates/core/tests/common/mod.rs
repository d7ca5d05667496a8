#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use starcorr::qmath::{
    bloch_to_observable, ComplexMatrix, DensityMatrix, Observable, C64,
};

pub fn gaussian_c64(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state of dimension `d`.
pub fn random_ket(rng: &mut ChaCha8Rng, d: usize) -> Vec<C64> {
    let raw: Vec<C64> = (0..d).map(|_| gaussian_c64(rng)).collect();
    let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    raw.into_iter().map(|z| z / norm).collect()
}

/// Mixed state `G G† / Tr(G G†)` with Gaussian `G`.
pub fn random_density(rng: &mut ChaCha8Rng, d: usize) -> DensityMatrix {
    let g = ComplexMatrix::from_fn(d, d, |_, _| gaussian_c64(rng));
    let gg = &g * &g.dagger();
    let tr = gg.trace().re;
    let herm = ComplexMatrix::from_fn(d, d, |r, c| (gg[(r, c)] + gg[(c, r)].conj()) * (0.5 / tr));
    DensityMatrix::new(herm).expect("positive by construction")
}

pub fn random_unit_vector(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            return v.map(|x| x / n);
        }
    }
}

pub fn random_qubit_observable(rng: &mut ChaCha8Rng) -> Observable {
    bloch_to_observable(random_unit_vector(rng)).expect("unit vector")
}

/// Tetrahedron directions: columns of the elegant matrix over √3.
pub fn tetrahedron() -> Vec<Observable> {
    let s = 1.0 / 3f64.sqrt();
    [[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]]
        .into_iter()
        .map(|v| bloch_to_observable(v).unwrap())
        .collect()
}

/// Concurrence-free entanglement check for a two-qubit pure state:
/// `|a d − b c|` is half the concurrence.
pub fn entanglement_witness(ket: &[C64]) -> f64 {
    (ket[0] * ket[3] - ket[1] * ket[2]).norm()
}
