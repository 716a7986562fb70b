//! Named laws used by the examples, the CLI fixtures and the test suites.

use crate::constructions::{normal_mixture, variance_mixture, MixingDistribution};
use crate::density::DensityDescriptor;
use crate::distribution::{Atom, Distribution};

/// `0.001 δ_0 + 0.999 N(1, 1)`: index 2.
pub fn paper_example() -> Distribution {
    Distribution::atom_plus(0.0, 0.001, DensityDescriptor::normal(1.0, 1.0)).unwrap()
}

/// `0.5 δ_0 + 0.5 Exp(1)`, with `g(x) = (e^{-x} − e^{-2x}) / x` on `x > 0`.
pub fn exponential_atom() -> Distribution {
    Distribution::atom_plus(0.0, 0.5, DensityDescriptor::exponential(1.0)).unwrap()
}

/// `p δ_0 + (1 − p) U[−1, 1]`.
pub fn atom_uniform(p: f64) -> Distribution {
    Distribution::atom_plus(0.0, p, DensityDescriptor::uniform(-1.0, 1.0)).unwrap()
}

/// `p_0 δ_0 + p_1 δ_1`.
pub fn two_point(p0: f64) -> Distribution {
    Distribution::new(vec![Atom { x: 0.0, p: p0 }, Atom { x: 1.0, p: 1.0 - p0 }], None, 0.0, None).unwrap()
}

/// `0.4 δ_0 + 0.1 δ_1 + 0.5 N(0, 1)`.
pub fn lattice_gaussian() -> Distribution {
    Distribution::new(
        vec![Atom { x: 0.0, p: 0.4 }, Atom { x: 1.0, p: 0.1 }],
        None,
        0.5,
        Some(DensityDescriptor::normal(0.0, 1.0)),
    )
    .unwrap()
}

/// `0.5 N(0, 1) + 0.5 N(0, 2)`.
pub fn gaussian_pair() -> Distribution {
    normal_mixture(&[0.5, 0.5], &[0.0, 0.0], &[1.0, 2.0]).unwrap()
}

/// `∫ N(0, t) ϱ(dt)` with `ϱ = 0.5 δ_1 + 0.5 δ_2`.
pub fn variance_mixture_atoms() -> Distribution {
    let rho = MixingDistribution::new(vec![(1.0, 0.5), (2.0, 0.5)], 0.0, None).unwrap();
    variance_mixture(&rho).unwrap().distribution
}

/// `∫ N(0, t) ϱ(dt)` with `ϱ = 0.25 δ_1 + 0.75 U(1, 2)`.
pub fn variance_mixture_uniform() -> Distribution {
    let rho = MixingDistribution::new(vec![(1.0, 0.25)], 0.75, Some(DensityDescriptor::uniform(1.0, 2.0))).unwrap();
    variance_mixture(&rho).unwrap().distribution
}

/// QID laws with their names.
pub fn qid_laws() -> Vec<(&'static str, Distribution)> {
    vec![
        ("dirac", Distribution::dirac(0.3)),
        ("exponential_atom", exponential_atom()),
        ("paper_example", paper_example()),
        ("lattice_gaussian", lattice_gaussian()),
        ("variance_mixture_atoms", variance_mixture_atoms()),
        ("variance_mixture_uniform", variance_mixture_uniform()),
    ]
}
