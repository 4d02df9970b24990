//! Shannon entropies (bits) and conditional mutual information.
//!
//! Atoms stay rational until the final `log2`; the exact per-slice profile
//! lets callers check slice weights without touching floats at all.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::dist::{to_f64, Rational, TripartiteDistribution};
use crate::error::{Error, Result};

/// Absolute tolerance for every float comparison in the classical half.
pub const ENTROPY_TOL: f64 = 1e-12;

fn plogp(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

/// `−Σ p log2 p` over rational atoms; zero atoms contribute nothing.
pub fn shannon_entropy<'a>(atoms: impl IntoIterator<Item = &'a Rational>) -> f64 {
    atoms.into_iter().map(|p| plogp(to_f64(p))).sum()
}

pub fn binary_entropy(lambda: &Rational) -> Result<f64> {
    if *lambda < Rational::zero() || *lambda > Rational::one() {
        return Err(Error::ProbabilityOutOfRange(lambda.clone()));
    }
    if lambda.is_zero() || lambda.is_one() {
        return Ok(0.0);
    }
    let rest = Rational::one() - lambda;
    Ok(shannon_entropy([lambda, &rest]))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyReport {
    pub value_bits: f64,
    #[serde(with = "crate::serde_fraction::vec")]
    pub exact_atom_multiset: Vec<Rational>,
}

impl EntropyReport {
    pub fn new(mut atoms: Vec<Rational>) -> Self {
        atoms.retain(|p| !p.is_zero());
        atoms.sort();
        let value_bits = shannon_entropy(&atoms);
        Self { value_bits, exact_atom_multiset: atoms }
    }
}

/// Conditional weights `p(x, y | z)` of each slice, sorted ascending.
pub fn exact_slice_entropy_profile(d: &TripartiteDistribution) -> BTreeMap<usize, Vec<Rational>> {
    d.slices()
        .keys()
        .map(|&z| {
            let mut w: Vec<Rational> = d.slice_conditional(z).into_iter().map(|(_, _, p)| p).collect();
            w.sort();
            (z, w)
        })
        .collect()
}

/// `I(X:Y|Z) = Σ_z p_z [H(X|z) + H(Y|z) − H(XY|z)]` in bits.
pub fn conditional_mutual_information(d: &TripartiteDistribution) -> f64 {
    let mut total = 0.0;
    for (z, pz) in d.marginal(crate::dist::Var::Z) {
        let slice = d.slice_conditional(z);
        let mut px: BTreeMap<usize, Rational> = BTreeMap::new();
        let mut py: BTreeMap<usize, Rational> = BTreeMap::new();
        for (x, y, p) in &slice {
            *px.entry(*x).or_insert_with(Rational::zero) += p;
            *py.entry(*y).or_insert_with(Rational::zero) += p;
        }
        let hxy = shannon_entropy(slice.iter().map(|(_, _, p)| p));
        let value = shannon_entropy(px.values()) + shannon_entropy(py.values()) - hxy;
        total += to_f64(&pz) * value;
    }
    total
}

/// `I(X:Y) = H(X) + H(Y) − H(XY)` in bits.
pub fn mutual_information_xy(d: &TripartiteDistribution) -> f64 {
    let mut pxy: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
    for (e, p) in d.events() {
        *pxy.entry((e.x, e.y)).or_insert_with(Rational::zero) += p;
    }
    shannon_entropy(d.marginal(crate::dist::Var::X).values())
        + shannon_entropy(d.marginal(crate::dist::Var::Y).values())
        - shannon_entropy(pxy.values())
}
