//! Structural suite for origami distributions: common-function shape,
//! recursive self-similarity under conditioning, and slice weights.

use crate::common::{common_function, conditional_common_function, CommonFunction};
use crate::dist::{
    build_origami, find_relabeling, origami_sizes, ratio, Event, OrigamiParams, RelabelOutcome,
    Rational, TripartiteDistribution, Var,
};
use crate::error::Result;
use crate::info::{binary_entropy, conditional_mutual_information, exact_slice_entropy_profile, ENTROPY_TOL};
use crate::report::{format_decimal, VerificationReport, Verdict};
use num_traits::One;

/// Which pair carries the binary common function at level `n`, and which
/// variable of that pair is split into halves.
pub fn binary_pair(n: u32) -> (Var, Var) {
    if n % 2 == 1 {
        (Var::Y, Var::Z)
    } else {
        (Var::X, Var::Z)
    }
}

/// The pair whose common function is trivial at level `n`.
pub fn trivial_pair(n: u32) -> (Var, Var) {
    if n % 2 == 1 {
        (Var::X, Var::Z)
    } else {
        (Var::Y, Var::Z)
    }
}

fn describe(cf: &CommonFunction) -> String {
    format!("{} component(s)", cf.component_count())
}

/// Condition `d` on each component of the binary common function of the
/// announcing party. Returns `(component index, conditioned, mass)`.
pub fn split_on_binary(
    d: &TripartiteDistribution,
    n: u32,
) -> Result<Vec<(usize, TripartiteDistribution, Rational)>> {
    let (first, second) = binary_pair(n);
    let cf = common_function(d, first, second);
    let mut out = Vec::new();
    for (k, comp) in cf.components().into_iter().enumerate() {
        let members: std::collections::BTreeSet<usize> = comp.first.into_iter().collect();
        let (cond, mass) = d.condition(|e: &Event| members.contains(&first.of(e)))?;
        out.push((k, cond, mass));
    }
    Ok(out)
}

pub fn verify_structure(params: &OrigamiParams) -> Result<VerificationReport> {
    let n = params.rounds;
    let lambda = &params.bias;
    let d = build_origami(params)?;
    let mut rep = VerificationReport::new(format!("structure r={n} bias={lambda}"));

    rep.check("sizes", d.sizes() == origami_sizes(n), format!("{:?}", d.sizes()));

    let jxy = common_function(&d, Var::X, Var::Y);
    rep.check("J_XY trivial", jxy.is_trivial(), describe(&jxy));

    let (tf, ts) = trivial_pair(n);
    let triv = common_function(&d, tf, ts);
    rep.check(format!("J_{tf}{ts} trivial"), triv.is_trivial(), describe(&triv));

    let (bf, bs) = binary_pair(n);
    let bin = common_function(&d, bf, bs);
    rep.check(format!("J_{bf}{bs} binary"), bin.is_binary(), describe(&bin));

    if n == 1 {
        rep.push("conditioning onto previous level", Verdict::Pass, "no previous level at r=1");
    } else if bin.is_binary() {
        let prev = build_origami(&OrigamiParams::new(n - 1, lambda.clone())?)?;
        for (k, cond, mass) in split_on_binary(&d, n)? {
            let name = format!("component {k} relabels onto level {}", n - 1);
            let mass_ok = mass == ratio(1, 2);
            match find_relabeling(&cond, &prev) {
                RelabelOutcome::Found(r) => {
                    rep.check(name, mass_ok && r.carries(&cond, &prev), format!("mass {mass}"))
                }
                RelabelOutcome::NotEquivalent => rep.check(name, false, "no relabeling exists"),
                RelabelOutcome::Undecided(why) => rep.push(name, Verdict::Inconclusive, why),
            }
        }
    } else {
        rep.check("conditioning onto previous level", false, "no binary common function");
    }

    let expected = {
        let mut w = vec![lambda.clone(), Rational::one() - lambda];
        w.sort();
        w
    };
    let profile = exact_slice_entropy_profile(&d);
    let bad: Vec<usize> = profile.iter().filter(|(_, w)| **w != expected).map(|(z, _)| *z).collect();
    rep.check(
        "slice profiles {λ, 1−λ}",
        bad.is_empty() && profile.len() == d.z_size(),
        if bad.is_empty() { String::new() } else { format!("slices {bad:?} differ") },
    );

    let ccf = conditional_common_function(&d);
    let all_binary = ccf.per_condition.values().all(|cf| cf.is_binary());
    rep.check("J_XY|Z binary on every slice", all_binary, "");

    let cmi = conditional_mutual_information(&d);
    let h = binary_entropy(lambda)?;
    rep.check(
        "I(X:Y|Z) = h(λ)",
        (cmi - h).abs() <= ENTROPY_TOL,
        format!("I = {}, h = {}", format_decimal(cmi), format_decimal(h)),
    );
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_levels_pass() {
        for r in 1..=5 {
            for lam in [ratio(1, 3), ratio(1, 2)] {
                let rep = verify_structure(&OrigamiParams::new(r, lam).unwrap()).unwrap();
                assert_eq!(rep.verdict, Verdict::Pass, "{}", rep.to_json());
            }
        }
    }

    #[test]
    fn splits_are_halves() {
        let d = build_origami(&OrigamiParams::new(2, ratio(1, 3)).unwrap()).unwrap();
        let parts = split_on_binary(&d, 2).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(parts[0].1.events().keys().all(|e| e.x < 4));
        assert!(parts[1].1.events().keys().all(|e| e.x >= 4));
    }
}
