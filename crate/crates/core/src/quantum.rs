//! Pure-state embedding of origami distributions and LOCC simulation.
//!
//! A bipartite state is kept as its coefficient matrix `C[x][y]`, so Alice's
//! operator acts as `A·C`, Bob's as `C·Bᵀ`, and the Schmidt coefficients are
//! the squared singular values of `C`.

use std::collections::BTreeMap;

use nalgebra::{Complex, DMatrix};
use num_traits::{One, Zero};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::channel::Party;
use crate::common::common_function;
use crate::dist::{build_base, build_origami, format_fraction, to_f64, OrigamiParams, Rational, TripartiteDistribution, Var};
use crate::error::{Error, Result};
use crate::lopc::{make_achievability_protocol, make_bias_adjust, transcript_label, OutputMaps, ProtocolTree, RoundChannels, TargetKey, Transcript};
use crate::rank::trial_rng;

pub type C64 = Complex<f64>;

/// Squared norms below this mark a member as eliminated.
pub const ELIMINATION_TOL: f64 = 1e-14;
/// Default relative singular-value threshold for Schmidt ranks.
pub const RANK_TOL: f64 = 1e-9;

fn c(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    coeffs: DMatrix<C64>,
}

impl StateVector {
    /// Amplitudes over `|x⟩|y⟩` in row-major order (`index = x·d_B + y`).
    pub fn from_amplitudes(dim_a: usize, dim_b: usize, amps: &[C64]) -> Result<Self> {
        if amps.len() != dim_a * dim_b {
            return Err(Error::DimensionMismatch { op: amps.len(), local: dim_a * dim_b });
        }
        Ok(Self { coeffs: DMatrix::from_row_slice(dim_a, dim_b, amps) })
    }

    pub fn from_coefficients(coeffs: DMatrix<C64>) -> Self {
        Self { coeffs }
    }

    pub fn coefficients(&self) -> &DMatrix<C64> {
        &self.coeffs
    }

    pub fn dims(&self) -> (usize, usize) {
        self.coeffs.shape()
    }

    pub fn norm_squared(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_squared().sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Self { coeffs: self.coeffs.map(|a| a / n) })
    }

    /// `|Φ_λ⟩ = √λ|00⟩ + √(1−λ)|11⟩`.
    pub fn phi(lambda: f64) -> Self {
        let mut m = DMatrix::zeros(2, 2);
        m[(0, 0)] = c(lambda.sqrt());
        m[(1, 1)] = c((1.0 - lambda).sqrt());
        Self { coeffs: m }
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.coeffs.iter().zip(other.coeffs.iter()).map(|(a, b)| a.conj() * b).sum()
    }
}

/// Singular values of the coefficient matrix restricted to its nonzero rows
/// and columns, descending.
fn singular_values(s: &StateVector) -> Vec<f64> {
    let m = s.coefficients();
    let rows: Vec<usize> = (0..m.nrows()).filter(|&i| m.row(i).iter().any(|a| *a != C64::zero())).collect();
    let cols: Vec<usize> = (0..m.ncols()).filter(|&j| m.column(j).iter().any(|a| *a != C64::zero())).collect();
    if rows.is_empty() {
        return Vec::new();
    }
    let sub = DMatrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows[i], cols[j])]);
    let mut sv: Vec<f64> = sub.svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    sv
}

pub fn schmidt_rank(s: &StateVector, tol: f64) -> Result<usize> {
    if !(1e-12..=1e-6).contains(&tol) {
        return Err(Error::ToleranceOutOfRange(tol));
    }
    let sv = singular_values(s);
    let Some(&top) = sv.first().filter(|v| **v > 0.0) else {
        return Err(Error::ZeroVector);
    };
    Ok(sv.iter().filter(|v| **v > tol * top).count())
}

/// Schmidt coefficients (squared singular values, normalized), descending.
pub fn schmidt_coefficients(s: &StateVector) -> Vec<f64> {
    let sv = singular_values(s);
    let total: f64 = sv.iter().map(|v| v * v).sum();
    sv.iter().map(|v| v * v / total).collect()
}

/// Von Neumann entropy of either reduced state, in bits.
pub fn entanglement_entropy(s: &StateVector) -> f64 {
    schmidt_coefficients(s).into_iter().filter(|p| *p > 0.0).map(|p| -p * p.log2()).sum()
}

/// Fidelity of two Schmidt spectra, `(Σ √s_i √t_i)²` after sorting both.
pub fn spectrum_fidelity(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| y.partial_cmp(x).expect("finite"));
    b.sort_by(|x, y| y.partial_cmp(x).expect("finite"));
    let s: f64 = a.iter().zip(&b).map(|(x, y)| (x.max(0.0) * y.max(0.0)).sqrt()).sum();
    s * s
}

#[derive(Clone, Debug, PartialEq)]
pub struct Member {
    pub z: usize,
    pub weight: f64,
    /// Present while the weight is still an exact rational.
    pub exact_weight: Option<Rational>,
    pub state: StateVector,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumEnsemble {
    pub members: Vec<Member>,
}

impl QuantumEnsemble {
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct MemberFile {
            z: usize,
            weight: String,
            dims: (usize, usize),
            amplitudes: Vec<String>,
        }
        let files: Vec<MemberFile> = self
            .members
            .iter()
            .map(|m| {
                let (da, db) = m.state.dims();
                let coeffs = m.state.coefficients();
                MemberFile {
                    z: m.z,
                    weight: m
                        .exact_weight
                        .as_ref()
                        .map(format_fraction)
                        .unwrap_or_else(|| crate::report::format_decimal(m.weight)),
                    dims: (da, db),
                    amplitudes: (0..da)
                        .flat_map(|x| (0..db).map(move |y| (x, y)))
                        .map(|(x, y)| format_complex(coeffs[(x, y)]))
                        .collect(),
                }
            })
            .collect();
        serde_json::to_string_pretty(&files).expect("ensemble serializes")
    }
}

pub fn format_complex(a: C64) -> String {
    if a.im == 0.0 {
        crate::report::format_decimal(a.re)
    } else {
        format!("{:.12}{:+.12}i", a.re, a.im)
    }
}

/// One member per `z`: weight `p_z`, state `Σ √p(x,y|z) |x⟩|y⟩`.
pub fn embed_distribution(d: &TripartiteDistribution) -> QuantumEnsemble {
    let members = d
        .marginal(Var::Z)
        .into_iter()
        .map(|(z, pz)| {
            let mut m = DMatrix::zeros(d.x_size(), d.y_size());
            for (x, y, p) in d.slice_conditional(z) {
                m[(x, y)] = c(to_f64(&p).sqrt());
            }
            Member { z, weight: to_f64(&pz), exact_weight: Some(pz), state: StateVector { coeffs: m } }
        })
        .collect();
    QuantumEnsemble { members }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalOperator {
    pub side: Party,
    pub matrix: DMatrix<C64>,
}

impl LocalOperator {
    pub fn new(side: Party, matrix: DMatrix<C64>) -> Self {
        Self { side, matrix }
    }

    fn act(&self, s: &StateVector) -> Result<StateVector> {
        let (da, db) = s.dims();
        let local = if self.side == Party::Alice { da } else { db };
        let (r, k) = self.matrix.shape();
        if r != k || k != local {
            return Err(Error::DimensionMismatch { op: r.max(k), local });
        }
        let coeffs = match self.side {
            Party::Alice => &self.matrix * &s.coeffs,
            Party::Bob => &s.coeffs * self.matrix.transpose(),
        };
        Ok(StateVector { coeffs })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MemberOutcome {
    pub z: usize,
    pub rank_before: usize,
    pub rank_after: Option<usize>,
    pub norm_squared: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EliminationReport {
    pub outcome_probability: f64,
    pub members: Vec<MemberOutcome>,
}

impl EliminationReport {
    pub fn eliminated(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().filter(|m| m.rank_after.is_none()).map(|m| m.z)
    }

    /// Members that survived with a smaller Schmidt rank.
    pub fn rank_drops(&self) -> Vec<usize> {
        self.members
            .iter()
            .filter(|m| m.rank_after.is_some_and(|r| r < m.rank_before))
            .map(|m| m.z)
            .collect()
    }
}

/// Apply `K` to every member; the result is the ensemble conditioned on
/// this Kraus outcome, with weights renormalized.
pub fn apply_local_operator(e: &QuantumEnsemble, k: &LocalOperator) -> Result<(QuantumEnsemble, EliminationReport)> {
    let mut report = EliminationReport { outcome_probability: 0.0, members: Vec::new() };
    let mut survivors = Vec::new();
    for m in &e.members {
        let before = schmidt_rank(&m.state, RANK_TOL)?;
        let out = k.act(&m.state)?;
        let n2 = out.norm_squared();
        if n2 < ELIMINATION_TOL {
            report.members.push(MemberOutcome { z: m.z, rank_before: before, rank_after: None, norm_squared: n2 });
            continue;
        }
        let state = out.normalized()?;
        let after = schmidt_rank(&state, RANK_TOL)?;
        report.members.push(MemberOutcome { z: m.z, rank_before: before, rank_after: Some(after), norm_squared: n2 });
        report.outcome_probability += m.weight * n2;
        survivors.push(Member { z: m.z, weight: m.weight * n2, exact_weight: None, state });
    }
    if survivors.is_empty() {
        return Err(Error::AllEliminated);
    }
    for s in &mut survivors {
        s.weight /= report.outcome_probability;
    }
    Ok((QuantumEnsemble { members: survivors }, report))
}

/// A complete set of Kraus operators on one side.
#[derive(Clone, Debug, PartialEq)]
pub struct Instrument {
    pub side: Party,
    pub operators: Vec<DMatrix<C64>>,
}

impl Instrument {
    /// Frobenius norm of `Σ K†K − I`.
    pub fn completeness_residual(&self) -> f64 {
        let d = self.operators[0].ncols();
        let mut acc = DMatrix::<C64>::zeros(d, d);
        for k in &self.operators {
            acc += k.adjoint() * k;
        }
        (acc - DMatrix::<C64>::identity(d, d)).norm()
    }

    /// `K_m = Σ_v √W(m|v) |v⟩⟨v|`: projective for deterministic channels.
    pub fn from_channel(side: Party, ch: &crate::channel::Channel) -> Self {
        let operators = (0..ch.messages())
            .map(|m| {
                DMatrix::from_fn(ch.inputs(), ch.inputs(), |i, j| {
                    if i == j {
                        c(to_f64(&ch.prob(i, m)).sqrt())
                    } else {
                        C64::zero()
                    }
                })
            })
            .collect();
        Self { side, operators }
    }
}

/// Two-outcome step taking `|Φ_λ⟩` to `|Φ_λ′⟩` on either outcome; on
/// outcome 1 the other party applies a bit flip.
#[derive(Clone, Debug, PartialEq)]
pub struct NielsenStep {
    /// `q_0, q_1`: squared diagonal of `M0`.
    pub q: [Rational; 2],
    pub m0: DMatrix<C64>,
    pub m1: DMatrix<C64>,
}

impl NielsenStep {
    /// `M0†M0 + M1†M1 = diag(q0 + (1−q0), q1 + (1−q1))`, checked in rationals.
    pub fn completeness_exact(&self) -> bool {
        self.q.iter().all(|q| (q + (Rational::one() - q)).is_one())
            && self.q.iter().all(|q| *q >= Rational::zero() && *q <= Rational::one())
    }

    pub fn instrument(&self, side: Party) -> Instrument {
        Instrument { side, operators: vec![self.m0.clone(), self.m1.clone()] }
    }
}

pub fn make_nielsen_step(source: &Rational, target: &Rational) -> Result<NielsenStep> {
    let half = crate::dist::ratio(1, 2);
    let q = if *source == half {
        crate::dist::check_bias(target)?;
        [target.clone(), Rational::one() - target]
    } else {
        let adj = make_bias_adjust(source, target)?;
        [adj.q[0].clone(), adj.q[1].clone()]
    };
    let s0 = to_f64(&q[0]).sqrt();
    let s1 = to_f64(&q[1]).sqrt();
    let r0 = to_f64(&(Rational::one() - &q[0])).sqrt();
    let r1 = to_f64(&(Rational::one() - &q[1])).sqrt();
    let m0 = DMatrix::from_row_slice(2, 2, &[c(s0), C64::zero(), C64::zero(), c(s1)]);
    // Bit flip after diag(√(1−q0), √(1−q1)).
    let m1 = DMatrix::from_row_slice(2, 2, &[C64::zero(), c(r1), c(r0), C64::zero()]);
    Ok(NielsenStep { q, m0, m1 })
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumRound {
    pub party: Party,
    pub instruments: BTreeMap<Transcript, Instrument>,
}

/// Per-transcript instruments plus the leaf key-extraction tables.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementSchedule {
    pub rounds: Vec<QuantumRound>,
    pub outputs: OutputMaps,
    pub target: Rational,
}

impl MeasurementSchedule {
    pub fn max_completeness_residual(&self) -> f64 {
        self.rounds
            .iter()
            .flat_map(|r| r.instruments.values())
            .map(Instrument::completeness_residual)
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct RoundFile {
            party: Party,
            instruments: BTreeMap<String, Vec<Vec<Vec<String>>>>,
        }
        let rounds: Vec<RoundFile> = self
            .rounds
            .iter()
            .map(|r| RoundFile {
                party: r.party,
                instruments: r
                    .instruments
                    .iter()
                    .map(|(t, ins)| {
                        let mats = ins
                            .operators
                            .iter()
                            .map(|k| (0..k.nrows()).map(|i| (0..k.ncols()).map(|j| format_complex(k[(i, j)])).collect()).collect())
                            .collect();
                        (transcript_label(t), mats)
                    })
                    .collect(),
            })
            .collect();
        serde_json::to_string_pretty(&rounds).expect("schedule serializes")
    }
}

fn schedule_from_protocol(p: &ProtocolTree, target: &Rational) -> Result<MeasurementSchedule> {
    let rounds = p
        .rounds
        .iter()
        .map(|r| {
            let instruments = match &r.channels {
                RoundChannels::PerTranscript(m) => {
                    m.iter().map(|(t, ch)| (t.clone(), Instrument::from_channel(r.party, ch))).collect()
                }
                RoundChannels::Fixed(_) => {
                    return Err(Error::Protocol("schedules need per-transcript channels".into()));
                }
            };
            Ok(QuantumRound { party: r.party, instruments })
        })
        .collect::<Result<Vec<_>>>()?;
    let outputs = p.outputs.clone().ok_or_else(|| Error::Protocol("protocol has no outputs".into()))?;
    Ok(MeasurementSchedule { rounds, outputs, target: target.clone() })
}

/// Projective block measurements in the classical announcement order, the
/// last one composed with the Nielsen diagonal on the key.
pub fn make_locc_achievability(p: &OrigamiParams, target: &Rational) -> Result<MeasurementSchedule> {
    let proto = make_achievability_protocol(p, &TargetKey::new(target.clone())?)?;
    schedule_from_protocol(&proto, target)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeafState {
    pub transcript: String,
    pub probability: f64,
    pub fidelity: f64,
    /// Whether the transcript-dependent correction swaps both key bits.
    pub swapped: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LoccRun {
    pub leaves: Vec<LeafState>,
    pub reports: Vec<Vec<EliminationReport>>,
    pub rank_drop_events: usize,
    pub min_fidelity: f64,
    pub completeness_residual: f64,
}

/// Key-qubit fidelity with `|Φ_λ′⟩` after the local isometries
/// `|x⟩ → |x̂(x)⟩|J_XZ(x)⟩` and `|y⟩ → |ŷ(y)⟩|J_YZ(y)⟩`.
fn leaf_fidelity(
    ens: &QuantumEnsemble,
    kx: &[usize],
    ky: &[usize],
    target: f64,
    swap: bool,
) -> Result<f64> {
    let phi = StateVector::phi(target);
    let mut support: BTreeMap<(usize, usize), ()> = BTreeMap::new();
    for m in &ens.members {
        let cm = m.state.coefficients();
        for x in 0..cm.nrows() {
            for y in 0..cm.ncols() {
                if cm[(x, y)].norm_sqr() > 0.0 {
                    support.insert((x, y), ());
                }
            }
        }
    }
    // Junk labels from the support graph of the leaf.
    let classical = TripartiteDistribution::from_weights(
        kx.len(),
        ky.len(),
        ens.members.iter().map(|m| m.z).max().unwrap_or(0) + 1,
        ens.members.iter().flat_map(|m| {
            let cm = m.state.coefficients().clone();
            (0..cm.nrows())
                .flat_map(move |x| (0..cm.ncols()).map(move |y| (x, y)))
                .filter(|&(x, y)| m.state.coefficients()[(x, y)].norm_sqr() > 0.0)
                .map(move |(x, y)| (crate::dist::Event::new(x, y, m.z), Rational::one()))
                .collect::<Vec<_>>()
        }),
    )
    .ok_or(Error::AllEliminated)?
    .0;
    let jx = common_function(&classical, Var::X, Var::Z);
    let jy = common_function(&classical, Var::Y, Var::Z);
    let mut seen_a: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut seen_b: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &(x, y) in support.keys() {
        let ka = (kx[x], jx.first_labels()[&x]);
        let kb = (ky[y], jy.first_labels()[&y]);
        if *seen_a.entry(ka).or_insert(x) != x || *seen_b.entry(kb).or_insert(y) != y {
            return Err(Error::Protocol("key extraction is not an isometry on the support".into()));
        }
    }
    let flip = |k: usize| if swap { k ^ 1 } else { k };
    let mut total = 0.0;
    for m in &ens.members {
        let cm = m.state.coefficients();
        // Overlap with ⟨Φ| on the key qubits, left as a vector over junk pairs.
        let mut junk: BTreeMap<(usize, usize), C64> = BTreeMap::new();
        for x in 0..cm.nrows() {
            for y in 0..cm.ncols() {
                let a = cm[(x, y)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let (kxv, kyv) = (flip(kx[x]), flip(ky[y]));
                if kxv > 1 || kyv > 1 {
                    continue;
                }
                let amp = phi.coefficients()[(kxv, kyv)].conj() * a;
                *junk.entry((jx.first_labels()[&x], jy.first_labels()[&y])).or_insert(C64::zero()) += amp;
            }
        }
        total += m.weight * junk.values().map(|v| v.norm_sqr()).sum::<f64>();
    }
    Ok(total)
}

pub fn run_locc(p: &OrigamiParams, schedule: &MeasurementSchedule) -> Result<LoccRun> {
    let d = build_origami(p)?;
    let mut level: Vec<(Transcript, f64, QuantumEnsemble)> = vec![(vec![], 1.0, embed_distribution(&d))];
    let mut reports = Vec::new();
    let mut drops = 0;
    for round in &schedule.rounds {
        let mut next = Vec::new();
        let mut round_reports = Vec::new();
        for (t, prob, ens) in &level {
            let ins = round
                .instruments
                .get(t)
                .ok_or_else(|| Error::Protocol(format!("no instrument for {}", transcript_label(t))))?;
            for (m, k) in ins.operators.iter().enumerate() {
                let op = LocalOperator::new(round.party, k.clone());
                match apply_local_operator(ens, &op) {
                    Ok((post, rep)) => {
                        drops += rep.rank_drops().len();
                        let mut ct = t.clone();
                        ct.push(m);
                        next.push((ct, prob * rep.outcome_probability, post));
                        round_reports.push(rep);
                    }
                    Err(Error::AllEliminated) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        reports.push(round_reports);
        level = next;
    }
    let target = to_f64(&schedule.target);
    let mut leaves = Vec::new();
    for (t, prob, ens) in &level {
        let miss = || Error::Protocol(format!("no output table for {}", transcript_label(t)));
        let kx = schedule.outputs.alice.get(t).ok_or_else(miss)?;
        let ky = schedule.outputs.bob.get(t).ok_or_else(miss)?;
        let plain = leaf_fidelity(ens, kx, ky, target, false)?;
        let swapped = leaf_fidelity(ens, kx, ky, target, true)?;
        leaves.push(LeafState {
            transcript: transcript_label(t),
            probability: *prob,
            fidelity: plain.max(swapped),
            swapped: swapped > plain,
        });
    }
    let min_fidelity = leaves.iter().map(|l| l.fidelity).fold(f64::INFINITY, f64::min);
    Ok(LoccRun {
        leaves,
        reports,
        rank_drop_events: drops,
        min_fidelity,
        completeness_residual: schedule.max_completeness_residual(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prop4Report {
    pub trials: usize,
    pub seed: u64,
    pub best_min_fidelity: f64,
    pub best_trial: usize,
    pub eliminated_trials: usize,
}

/// Score of one pair `(A, B)`: 0 if any state is eliminated, otherwise the
/// smallest Schmidt-spectrum fidelity to `Φ_λ′` over the four states.
pub fn prop4_score(states: &[StateVector], a: &DMatrix<C64>, b: &DMatrix<C64>, target: f64) -> Result<f64> {
    let t = [1.0 - target, target];
    let mut worst = f64::INFINITY;
    for s in states {
        let out = LocalOperator::new(Party::Bob, b.clone()).act(&LocalOperator::new(Party::Alice, a.clone()).act(s)?)?;
        if out.norm_squared() < ELIMINATION_TOL {
            return Ok(0.0);
        }
        let spec = schmidt_coefficients(&out.normalized()?);
        worst = worst.min(spectrum_fidelity(&spec, &t));
    }
    Ok(worst)
}

fn gaussian_contraction(rng: &mut impl Rng, d: usize) -> DMatrix<C64> {
    let m = DMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(re, im)
    });
    let top = m.clone().svd(false, false).singular_values.max();
    if top > 0.0 {
        m / c(top)
    } else {
        m
    }
}

/// Random local operator pairs on the four `b^(1,λ)` states, no communication.
pub fn prop4_random_search(lambda: &Rational, target: &Rational, trials: usize, seed: u64) -> Result<Prop4Report> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    crate::dist::check_bias(target)?;
    let ens = embed_distribution(&build_base(lambda)?);
    let states: Vec<StateVector> = ens.members.into_iter().map(|m| m.state).collect();
    let t = to_f64(target);
    let mut best = (f64::NEG_INFINITY, 0);
    let mut eliminated = 0;
    for i in 0..trials {
        let mut rng = trial_rng(seed, i);
        let a = gaussian_contraction(&mut rng, 4);
        let b = gaussian_contraction(&mut rng, 4);
        let s = prop4_score(&states, &a, &b, t)?;
        if s == 0.0 {
            eliminated += 1;
        }
        if s > best.0 {
            best = (s, i);
        }
    }
    Ok(Prop4Report { trials, seed, best_min_fidelity: best.0, best_trial: best.1, eliminated_trials: eliminated })
}
