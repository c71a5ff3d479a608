//! Reference computations written straight from the definitions, sharing no
//! code with the library beyond reading couplings.

#![allow(dead_code)]

use mars_ising::IsingProblem;

/// `Σ_i Σ_{j≠i} J_ij σ_i σ_j + Σ_i h_i σ_i`.
pub fn naive_energy(p: &IsingProblem, s: &[i8]) -> f64 {
    let n = p.n();
    let mut e = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                e += p.coupling(i, j) * s[i] as f64 * s[j] as f64;
            }
        }
        e += p.field()[i] * s[i] as f64;
    }
    e
}

/// Total weight `Σ_{i<j} J_ij` of pairs on opposite sides.
pub fn naive_cut(p: &IsingProblem, s: &[i8]) -> f64 {
    let n = p.n();
    let mut c = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            if s[i] != s[j] {
                c += p.coupling(i, j);
            }
        }
    }
    c
}

pub fn spins_of(mask: u64, n: usize) -> Vec<i8> {
    (0..n)
        .map(|i| if mask >> i & 1 == 1 { -1 } else { 1 })
        .collect()
}

/// Minimum energy by plain enumeration of all `2^n` configurations.
pub fn naive_ground_energy(p: &IsingProblem) -> f64 {
    let n = p.n();
    assert!(n <= 20);
    (0..1u64 << n)
        .map(|m| naive_energy(p, &spins_of(m, n)))
        .fold(f64::INFINITY, f64::min)
}
