//! Public-discussion (LOPC) protocols on tripartite distributions.
//!
//! A protocol is a list of rounds; in each round one party emits a message
//! drawn from a channel of its current value, possibly chosen as a function of
//! the transcript so far. Branches are enumerated exactly: every transcript
//! with positive probability carries its mass and the posterior, with Eve
//! holding the transcript. Leaf output tables turn the posterior into the
//! joint distribution of `(X̂, Ŷ, Z)`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::channel::{announce, Channel, Party};
use crate::common::common_function;
use crate::dist::{
    build_origami, check_bias, format_fraction, parse_fraction, ratio, Event, OrigamiParams, Rational,
    TripartiteDistribution, Var,
};
use crate::error::{Error, Result};
use crate::report::{VerificationReport, Verdict};

pub type Transcript = Vec<usize>;

pub fn transcript_label(t: &[usize]) -> String {
    if t.is_empty() {
        "m=()".to_string()
    } else {
        format!("m={}", t.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(","))
    }
}

fn transcript_key(t: &[usize]) -> String {
    t.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_transcript_key(s: &str) -> Result<Transcript> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Protocol(format!("bad transcript key {s:?}"))))
        .collect()
}

/// Target `Φ_λ′`: a perfectly correlated bit with bias `λ′`, independent of Eve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetKey {
    #[serde(with = "crate::serde_fraction")]
    pub bias: Rational,
}

impl TargetKey {
    pub fn new(bias: Rational) -> Result<Self> {
        check_bias(&bias)?;
        Ok(Self { bias })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RoundChannels {
    Fixed(Channel),
    PerTranscript(BTreeMap<Transcript, Channel>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Round {
    pub party: Party,
    pub channels: RoundChannels,
}

impl Round {
    pub fn fixed(party: Party, channel: Channel) -> Self {
        Self { party, channels: RoundChannels::Fixed(channel) }
    }

    fn channel_for(&self, t: &[usize]) -> Result<&Channel> {
        match &self.channels {
            RoundChannels::Fixed(c) => Ok(c),
            RoundChannels::PerTranscript(map) => map
                .get(t)
                .ok_or_else(|| Error::Protocol(format!("no channel for transcript {}", transcript_label(t)))),
        }
    }
}

/// Leaf output tables `x̂(x, t)` and `ŷ(y, t)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OutputMaps {
    pub alice: BTreeMap<Transcript, Vec<usize>>,
    pub bob: BTreeMap<Transcript, Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProtocolTree {
    pub rounds: Vec<Round>,
    pub outputs: Option<OutputMaps>,
}

impl ProtocolTree {
    pub fn empty() -> Self {
        Self { rounds: Vec::new(), outputs: None }
    }

    pub fn parties(&self) -> Vec<Party> {
        self.rounds.iter().map(|r| r.party).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ProtocolFile::from(self)).expect("protocol serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: ProtocolFile = serde_json::from_str(s)?;
        f.try_into()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoundFile {
    pub party: Party,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub channels: BTreeMap<String, Vec<Vec<String>>>,
    pub depends_on_transcript: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsFile {
    pub alice: BTreeMap<String, Vec<usize>>,
    pub bob: BTreeMap<String, Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolFile {
    pub rounds: Vec<RoundFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outputs: Option<OutputsFile>,
}

fn channel_text(c: &Channel) -> Vec<Vec<String>> {
    c.rows().iter().map(|r| r.iter().map(format_fraction).collect()).collect()
}

fn channel_parse(rows: &[Vec<String>]) -> Result<Channel> {
    Channel::new(
        rows.iter()
            .map(|r| r.iter().map(|s| parse_fraction(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?,
    )
}

impl From<&ProtocolTree> for ProtocolFile {
    fn from(p: &ProtocolTree) -> Self {
        let rounds = p
            .rounds
            .iter()
            .map(|r| match &r.channels {
                RoundChannels::Fixed(c) => RoundFile {
                    party: r.party,
                    channel: Some(channel_text(c)),
                    channels: BTreeMap::new(),
                    depends_on_transcript: false,
                },
                RoundChannels::PerTranscript(m) => RoundFile {
                    party: r.party,
                    channel: None,
                    channels: m.iter().map(|(t, c)| (transcript_key(t), channel_text(c))).collect(),
                    depends_on_transcript: true,
                },
            })
            .collect();
        let keyed = |m: &BTreeMap<Transcript, Vec<usize>>| m.iter().map(|(t, v)| (transcript_key(t), v.clone())).collect();
        let outputs = p.outputs.as_ref().map(|o| OutputsFile { alice: keyed(&o.alice), bob: keyed(&o.bob) });
        ProtocolFile { rounds, outputs }
    }
}

impl TryFrom<ProtocolFile> for ProtocolTree {
    type Error = Error;

    fn try_from(f: ProtocolFile) -> Result<Self> {
        let mut rounds = Vec::new();
        for (i, r) in f.rounds.into_iter().enumerate() {
            let channels = match (r.depends_on_transcript, r.channel) {
                (false, Some(c)) => RoundChannels::Fixed(channel_parse(&c)?),
                (true, None) => RoundChannels::PerTranscript(
                    r.channels
                        .iter()
                        .map(|(k, c)| Ok((parse_transcript_key(k)?, channel_parse(c)?)))
                        .collect::<Result<_>>()?,
                ),
                _ => {
                    return Err(Error::Protocol(format!(
                        "round {i}: give \"channel\" when independent of the transcript, \"channels\" otherwise"
                    )))
                }
            };
            rounds.push(Round { party: r.party, channels });
        }
        let outputs = match f.outputs {
            None => None,
            Some(o) => {
                let parse = |m: BTreeMap<String, Vec<usize>>| {
                    m.into_iter()
                        .map(|(k, v)| Ok((parse_transcript_key(&k)?, v)))
                        .collect::<Result<BTreeMap<_, _>>>()
                };
                Some(OutputMaps { alice: parse(o.alice)?, bob: parse(o.bob)? })
            }
        };
        Ok(ProtocolTree { rounds, outputs })
    }
}

/// One transcript of a protocol run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Branch {
    pub transcript: Transcript,
    pub mass: Rational,
    pub posterior: TripartiteDistribution,
    /// Joint distribution of `(X̂, Ŷ, Z)` on this branch, when outputs exist.
    pub output: Option<TripartiteDistribution>,
}

impl Branch {
    /// A branch given directly by its output distribution.
    pub fn from_output(transcript: Transcript, mass: Rational, output: TripartiteDistribution) -> Self {
        Self { transcript, mass, posterior: output.clone(), output: Some(output) }
    }

    pub fn label(&self) -> String {
        transcript_label(&self.transcript)
    }
}

fn apply_outputs(post: &TripartiteDistribution, t: &[usize], outs: &OutputMaps) -> Result<TripartiteDistribution> {
    let missing = || Error::Protocol(format!("no output table for transcript {}", transcript_label(t)));
    let xa = outs.alice.get(t).ok_or_else(missing)?;
    let yb = outs.bob.get(t).ok_or_else(missing)?;
    let mut kx = 2;
    let mut ky = 2;
    for e in post.events().keys() {
        let (Some(a), Some(b)) = (xa.get(e.x), yb.get(e.y)) else {
            return Err(Error::Protocol(format!("output table too short on transcript {}", transcript_label(t))));
        };
        kx = kx.max(a + 1);
        ky = ky.max(b + 1);
    }
    Ok(post
        .map_events((kx, ky, post.z_size()), |e| Event::new(xa[e.x], yb[e.y], e.z))
        .expect("posterior has positive mass"))
}

/// All branches after each round: level `k` holds the transcripts of length `k`.
pub fn trace_protocol(d: &TripartiteDistribution, p: &ProtocolTree) -> Result<Vec<Vec<Branch>>> {
    let mut levels = vec![vec![Branch { transcript: vec![], mass: Rational::one(), posterior: d.clone(), output: None }]];
    for round in &p.rounds {
        let mut next = Vec::new();
        for b in levels.last().expect("nonempty") {
            let ch = round.channel_for(&b.transcript)?;
            for (m, post, w) in announce(&b.posterior, round.party, ch)? {
                let mut t = b.transcript.clone();
                t.push(m);
                next.push(Branch { transcript: t, mass: &b.mass * w, posterior: post, output: None });
            }
        }
        levels.push(next);
    }
    if let Some(outs) = &p.outputs {
        for b in levels.last_mut().expect("nonempty") {
            b.output = Some(apply_outputs(&b.posterior, &b.transcript, outs)?);
        }
    }
    Ok(levels)
}

pub fn run_protocol(d: &TripartiteDistribution, p: &ProtocolTree) -> Result<Vec<Branch>> {
    Ok(trace_protocol(d, p)?.pop().expect("level 0 always exists"))
}

/// The bias-adjust step turning a key of bias `λ` into one of bias `λ′`.
///
/// The announcer holding key bit `K` sends `M = 0` with probability `q_K`;
/// on `M = 1` both parties flip their bit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BiasAdjust {
    #[serde(with = "crate::serde_fraction")]
    pub p0: Rational,
    #[serde(with = "crate::serde_fraction::vec")]
    pub q: Vec<Rational>,
}

impl BiasAdjust {
    pub fn is_identity(&self) -> bool {
        self.p0.is_one()
    }

    /// Row `K -> (q_K, 1 − q_K)`.
    pub fn channel(&self) -> Channel {
        Channel::new(self.q.iter().map(|q| vec![q.clone(), Rational::one() - q]).collect())
            .expect("q in [0, 1]")
    }

    fn q_of(&self, k: usize) -> &Rational {
        &self.q[k.min(1)]
    }
}

pub fn make_bias_adjust(lambda: &Rational, target: &Rational) -> Result<BiasAdjust> {
    check_bias(lambda)?;
    check_bias(target)?;
    if target > lambda {
        return Err(Error::BiasOrdering { have: Box::new(lambda.clone()), target: Box::new(target.clone()) });
    }
    let one = Rational::one();
    if lambda == target {
        return Ok(BiasAdjust { p0: one.clone(), q: vec![one.clone(), one] });
    }
    let two = ratio(2, 1);
    let p0 = (&one - lambda - target) / (&one - &two * target);
    let q0 = target * &p0 / lambda;
    let q1 = (&one - target) * &p0 / (&one - lambda);
    Ok(BiasAdjust { p0, q: vec![q0, q1] })
}

/// Starter required for `r` rounds: Alice when `r` is even, Bob when odd.
pub fn mandated_starter(rounds: u32) -> Party {
    if rounds.is_multiple_of(2) {
        Party::Alice
    } else {
        Party::Bob
    }
}

#[derive(Clone, Debug)]
enum Step {
    /// Announce the current common-function label shared with Eve.
    Label(Party),
    /// Label plus the bias adjust on the key fixed by that label.
    LabelAdjust(Party, BiasAdjust),
    /// Alice announces `parity(x) ⊕ K`, then the bias adjust on the new key.
    Align(BiasAdjust),
}

impl Step {
    fn party(&self) -> Party {
        match self {
            Step::Label(p) | Step::LabelAdjust(p, _) => *p,
            Step::Align(_) => Party::Alice,
        }
    }
}

#[derive(Clone, Debug)]
struct KeyMaps {
    x: Vec<usize>,
    y: Vec<usize>,
}

fn key_maps(post: &TripartiteDistribution) -> KeyMaps {
    let cf = common_function(post, Var::X, Var::Y);
    KeyMaps {
        x: (0..post.x_size()).map(|v| cf.index_of_first(v).unwrap_or(0)).collect(),
        y: (0..post.y_size()).map(|v| cf.index_of_second(v).unwrap_or(0)).collect(),
    }
}

/// Component index of each value of `party` in its common function with Eve.
fn label_table(post: &TripartiteDistribution, party: Party) -> (Vec<usize>, usize) {
    let cf = common_function(post, party.var(), Var::Z);
    let table = (0..post.size_of(party.var())).map(|v| cf.index_of_first(v).unwrap_or(0)).collect();
    (table, cf.component_count().max(1))
}

fn adjust_row(adj: &BiasAdjust, base: usize, k: usize, width: usize) -> Vec<Rational> {
    let mut row = vec![Rational::zero(); width];
    if adj.is_identity() {
        row[base] = Rational::one();
    } else {
        let q = adj.q_of(k).clone();
        row[2 * base + 1] = Rational::one() - &q;
        row[2 * base] = q;
    }
    row
}

struct Builder<'a> {
    steps: &'a [Step],
    key_after: usize,
    channels: Vec<BTreeMap<Transcript, Channel>>,
    outputs: OutputMaps,
}

impl Builder<'_> {
    fn visit(
        &mut self,
        depth: usize,
        t: Transcript,
        post: TripartiteDistribution,
        key: Option<KeyMaps>,
        flip: usize,
    ) -> Result<()> {
        if depth == self.steps.len() {
            let (kx, ky) = match &key {
                Some(k) => (k.x.clone(), k.y.clone()),
                None => (vec![0; post.x_size()], vec![0; post.y_size()]),
            };
            self.outputs.alice.insert(t.clone(), kx.into_iter().map(|v| v ^ flip).collect());
            self.outputs.bob.insert(t, ky.into_iter().map(|v| v ^ flip).collect());
            return Ok(());
        }
        let step = self.steps[depth].clone();
        let party = step.party();
        let sets_key = depth + 1 == self.key_after;
        // Per message: (key maps after it, extra flip).
        let (channel, effects): (Channel, Vec<(Option<KeyMaps>, usize)>) = match &step {
            Step::Label(_) => {
                let (table, n) = label_table(&post, party);
                let ch = Channel::deterministic(table.len(), n, |v| table[v])?;
                (ch, vec![(key.clone(), 0); n])
            }
            Step::LabelAdjust(_, adj) => {
                let (table, n) = label_table(&post, party);
                let per_label: Vec<KeyMaps> = (0..n)
                    .map(|l| {
                        let cond = post
                            .condition(|e| table[party.value(e)] == l)
                            .map(|(c, _)| c)
                            .unwrap_or_else(|_| post.clone());
                        key_maps(&cond)
                    })
                    .collect();
                let width = if adj.is_identity() { n } else { 2 * n };
                let rows = (0..table.len())
                    .map(|v| {
                        let l = table[v];
                        let km = &per_label[l];
                        let k = if party == Party::Alice { km.x[v] } else { km.y[v] };
                        adjust_row(adj, l, k ^ flip, width)
                    })
                    .collect();
                let effects = (0..width)
                    .map(|m| {
                        let (l, a) = if adj.is_identity() { (m, 0) } else { (m / 2, m % 2) };
                        (Some(per_label[l].clone()), a)
                    })
                    .collect();
                (Channel::new(rows)?, effects)
            }
            Step::Align(adj) => {
                let km = key
                    .clone()
                    .ok_or_else(|| Error::Protocol("alignment announced before any key exists".into()))?;
                let width = if adj.is_identity() { 2 } else { 4 };
                let rows = (0..post.x_size())
                    .map(|x| {
                        let k = (km.x[x] ^ flip) & 1;
                        let a = (x & 1) ^ k;
                        adjust_row(adj, a, k ^ a, width)
                    })
                    .collect();
                let effects = (0..width)
                    .map(|m| {
                        let (a, b) = if adj.is_identity() { (m, 0) } else { (m / 2, m % 2) };
                        (Some(km.clone()), a ^ b)
                    })
                    .collect();
                (Channel::new(rows)?, effects)
            }
        };
        self.channels[depth].insert(t.clone(), channel.clone());
        for (m, child, _) in announce(&post, party, &channel)? {
            let (mut child_key, extra) = effects[m].clone();
            if sets_key && matches!(step, Step::Label(_)) {
                child_key = Some(key_maps(&child));
            }
            let mut ct = t.clone();
            ct.push(m);
            self.visit(depth + 1, ct, child, child_key, flip ^ extra)?;
        }
        Ok(())
    }
}

fn build_protocol(d: &TripartiteDistribution, steps: &[Step]) -> Result<ProtocolTree> {
    let key_after = steps
        .iter()
        .rposition(|s| matches!(s, Step::Label(_) | Step::LabelAdjust(..)))
        .map_or(0, |i| i + 1);
    let mut b = Builder { steps, key_after, channels: vec![BTreeMap::new(); steps.len()], outputs: OutputMaps::default() };
    b.visit(0, vec![], d.clone(), None, 0)?;
    let rounds = steps
        .iter()
        .zip(b.channels)
        .map(|(s, ch)| Round { party: s.party(), channels: RoundChannels::PerTranscript(ch) })
        .collect();
    Ok(ProtocolTree { rounds, outputs: Some(b.outputs) })
}

fn alternating(starter: Party, rounds: u32) -> Vec<Party> {
    (0..rounds).map(|i| if i % 2 == 0 { starter } else { starter.other() }).collect()
}

/// `r` alternating common-information announcements starting with `starter`;
/// the last announcer also runs the bias adjust `λ → λ′`.
pub fn make_label_protocol(p: &OrigamiParams, starter: Party, target: &TargetKey) -> Result<ProtocolTree> {
    let adj = make_bias_adjust(&p.bias, &target.bias)?;
    let parties = alternating(starter, p.rounds);
    let last = parties.len() - 1;
    let steps: Vec<Step> = parties
        .into_iter()
        .enumerate()
        .map(|(i, party)| if i == last { Step::LabelAdjust(party, adj.clone()) } else { Step::Label(party) })
        .collect();
    build_protocol(&build_origami(p)?, &steps)
}

/// The `r`-round protocol with the required starter.
pub fn make_achievability_protocol(p: &OrigamiParams, target: &TargetKey) -> Result<ProtocolTree> {
    make_label_protocol(p, mandated_starter(p.rounds), target)
}

/// `r` label rounds, then Alice announces the alignment bit `parity(x) ⊕ K`
/// (a function of `z`) together with the bias adjust on the aligned key.
pub fn make_alignment_extension(p: &OrigamiParams, target: &TargetKey) -> Result<ProtocolTree> {
    let adj = make_bias_adjust(&p.bias, &target.bias)?;
    let mut steps: Vec<Step> = alternating(mandated_starter(p.rounds), p.rounds).into_iter().map(Step::Label).collect();
    steps.push(Step::Align(adj));
    build_protocol(&build_origami(p)?, &steps)
}

struct KeyStats {
    agree: bool,
    binary: bool,
    p0: Rational,
    per_z: BTreeMap<usize, Rational>,
}

fn key_stats(o: &TripartiteDistribution) -> KeyStats {
    let agree = o.events().keys().all(|e| e.x == e.y);
    let binary = o.events().keys().all(|e| e.x < 2 && e.y < 2);
    let p0: Rational = o.events().iter().filter(|(e, _)| e.x == 0).map(|(_, p)| p).sum();
    let mut num: BTreeMap<usize, Rational> = BTreeMap::new();
    let mut den: BTreeMap<usize, Rational> = BTreeMap::new();
    for (e, p) in o.events() {
        *den.entry(e.z).or_insert_with(Rational::zero) += p;
        let n = num.entry(e.z).or_insert_with(Rational::zero);
        if e.x == 0 {
            *n += p;
        }
    }
    let per_z = den.iter().map(|(z, d)| (*z, &num[z] / d)).collect();
    KeyStats { agree, binary, p0, per_z }
}

/// Strict check of one output distribution; `Err` carries the diagnostic.
pub fn strict_key_check(o: &TripartiteDistribution, target: &Rational, branch: &str) -> std::result::Result<String, String> {
    let s = key_stats(o);
    if !s.agree {
        return Err(format!("outputs disagree on branch {branch}"));
    }
    if !s.binary {
        return Err(format!("non-binary key on branch {branch}"));
    }
    if let Some((z, q)) = s.per_z.iter().find(|(_, q)| **q != s.p0) {
        return Err(format!(
            "key–Z dependence on branch {branch}: P(K=0|z={z}) = {q}, P(K=0) = {}",
            s.p0
        ));
    }
    let flipped = Rational::one() - target;
    if s.p0 == *target {
        Ok("identity relabeling".into())
    } else if s.p0 == flipped {
        Ok("relabel 0↔1".into())
    } else {
        Err(format!("key bias {} on branch {branch}, expected {target}", s.p0))
    }
}

pub fn verify_strict_key(branches: &[Branch], target: &TargetKey) -> VerificationReport {
    let mut rep = VerificationReport::new(format!("strict key, target bias {}", target.bias));
    if branches.is_empty() {
        rep.check("branches", false, "no branches");
    }
    for b in branches {
        let label = b.label();
        match &b.output {
            None => rep.check(label.clone(), false, format!("no output maps on branch {label}")),
            Some(o) => match strict_key_check(o, &target.bias, &label) {
                Ok(how) => rep.check(label, true, how),
                Err(why) => rep.check(label, false, why),
            },
        }
    }
    rep
}

/// Per branch: outputs agree and, for every `z`, the key is `(λ, 1−λ)` or `(1−λ, λ)`.
pub fn verify_blockwise_key(branches: &[Branch], lambda: &Rational) -> VerificationReport {
    let mut rep = VerificationReport::new(format!("blockwise key, bias {lambda}"));
    if branches.is_empty() {
        rep.check("branches", false, "no branches");
    }
    let flipped = Rational::one() - lambda;
    for b in branches {
        let label = b.label();
        let Some(o) = &b.output else {
            rep.check(label.clone(), false, format!("no output maps on branch {label}"));
            continue;
        };
        let s = key_stats(o);
        if !s.agree {
            rep.check(label.clone(), false, format!("outputs disagree on branch {label}"));
        } else if !s.binary {
            rep.check(label.clone(), false, format!("non-binary key on branch {label}"));
        } else if let Some((z, q)) = s.per_z.iter().find(|(_, q)| **q != *lambda && **q != flipped) {
            rep.check(label.clone(), false, format!("P(K=0|z={z}) = {q} on branch {label}, expected {lambda} or {flipped}"));
        } else {
            rep.check(label, true, "");
        }
    }
    rep
}

/// Nested partition of Eve's alphabet into the supports of sub-origami blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockTree {
    pub rounds: u32,
    /// `levels[k]` lists the `2^k` blocks at depth `k` as `(path, first z, len)`.
    pub levels: Vec<Vec<BlockSet>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockSet {
    pub path: Vec<u8>,
    pub start: usize,
    pub len: usize,
}

impl BlockSet {
    pub fn contains(&self, z: usize) -> bool {
        (self.start..self.start + self.len).contains(&z)
    }

    pub fn name(&self) -> String {
        if self.path.is_empty() {
            "root".into()
        } else {
            self.path.iter().map(|j| j.to_string()).collect()
        }
    }
}

/// Depth `k` blocks have `2^(r−k+1)` consecutive Eve values; block
/// `j_1..j_k` starts at `Σ j_i 2^(r−i+1)`.
pub fn block_tree(rounds: u32) -> BlockTree {
    let r = rounds as usize;
    let levels = (0..=r)
        .map(|k| {
            let len = 1usize << (r - k + 1);
            (0..1usize << k)
                .map(|idx| BlockSet {
                    path: (0..k).map(|i| (idx >> (k - 1 - i) & 1) as u8).collect(),
                    start: idx * len,
                    len,
                })
                .collect()
        })
        .collect();
    BlockTree { rounds, levels }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchAudit {
    pub transcript: String,
    pub intact_blocks: Vec<String>,
    /// Eve values whose slice lost some but not all of its events.
    pub rank_drops: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockAudit {
    pub per_round: Vec<Vec<BranchAudit>>,
    pub rank_drop_events: usize,
    pub branches_without_intact_block: usize,
    pub verdict: Verdict,
}

/// Round-by-round survival of the block structure along a protocol trace.
pub fn audit_block_survival(p: &OrigamiParams, trace: &[Vec<Branch>]) -> Result<BlockAudit> {
    let d = build_origami(p)?;
    let tree = block_tree(p.rounds);
    let original: BTreeMap<usize, BTreeSet<(usize, usize)>> = d
        .slices()
        .into_iter()
        .map(|(z, evs)| (z, evs.iter().map(|(e, _)| (e.x, e.y)).collect()))
        .collect();
    let mut per_round = Vec::new();
    let (mut drops, mut orphan) = (0, 0);
    for (k, level) in trace.iter().enumerate() {
        let depth = k.min(p.rounds as usize);
        let mut audits = Vec::new();
        for b in level {
            if b.posterior.sizes() != d.sizes() {
                return Err(Error::ShapeMismatch { expected: d.sizes(), found: b.posterior.sizes() });
            }
            let now: BTreeMap<usize, BTreeSet<(usize, usize)>> = b
                .posterior
                .slices()
                .into_iter()
                .map(|(z, evs)| (z, evs.iter().map(|(e, _)| (e.x, e.y)).collect()))
                .collect();
            let rank_drops: Vec<usize> = now
                .iter()
                .filter(|(z, s)| original.get(z).is_some_and(|o| s.len() < o.len()))
                .map(|(z, _)| *z)
                .collect();
            let intact_blocks: Vec<String> = tree.levels[depth]
                .iter()
                .filter(|blk| (blk.start..blk.start + blk.len).all(|z| now.get(&z) == original.get(&z)))
                .map(BlockSet::name)
                .collect();
            drops += rank_drops.len();
            if intact_blocks.is_empty() {
                orphan += 1;
            }
            audits.push(BranchAudit { transcript: b.label(), intact_blocks, rank_drops });
        }
        per_round.push(audits);
    }
    Ok(BlockAudit {
        per_round,
        rank_drop_events: drops,
        branches_without_intact_block: orphan,
        verdict: Verdict::from_bool(drops == 0),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub starter: Party,
    pub msg_cap: usize,
    pub protocols_enumerated: usize,
    pub output_maps_enumerated: usize,
    /// Message tables (value -> message) of every strictly passing protocol.
    pub passing: Vec<Vec<usize>>,
    pub complete: bool,
}

const SEARCH_BUDGET: usize = 5_000_000;
const MAX_COMPONENTS: usize = 16;

/// Restricted-growth strings: every partition of `n` values into at most
/// `k` labelled blocks, each exactly once up to message renaming.
fn message_tables(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, n: usize, k: usize, used: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for m in 0..(used + 1).min(k) {
            cur.push(m);
            rec(cur, n, k, used.max(m + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), n, k, 0, &mut out);
    out
}

/// Every deterministic one-message protocol from `starter` (message alphabet
/// at most `msg_cap`) followed by every tied deterministic output map.
pub fn exhaustive_one_round_search(
    d: &TripartiteDistribution,
    starter: Party,
    msg_cap: usize,
    target: &TargetKey,
) -> Result<SearchReport> {
    for s in [d.x_size(), d.y_size()] {
        if s > 8 {
            return Err(Error::AlphabetTooLarge(s));
        }
    }
    if msg_cap == 0 || msg_cap > 4 {
        return Err(Error::AlphabetTooLarge(msg_cap));
    }
    let n = d.size_of(starter.var());
    let mut report = SearchReport {
        starter,
        msg_cap,
        protocols_enumerated: 0,
        output_maps_enumerated: 0,
        passing: Vec::new(),
        complete: true,
    };
    for table in message_tables(n, msg_cap) {
        report.protocols_enumerated += 1;
        let msgs = table.iter().max().map_or(1, |m| m + 1);
        let ch = Channel::deterministic(n, msgs, |v| table[v])?;
        let mut all_branches_pass = true;
        for (m, post, _) in announce(d, starter, &ch)? {
            // Tied outputs are constant on the components of J_XY.
            let cf = common_function(&post, Var::X, Var::Y);
            let comps = cf.component_count();
            if comps > MAX_COMPONENTS || report.output_maps_enumerated > SEARCH_BUDGET {
                report.complete = false;
                return Ok(report);
            }
            let mut branch_ok = false;
            for bits in 0u32..(1 << comps) {
                report.output_maps_enumerated += 1;
                let bit = |i: Option<usize>| (bits >> i.unwrap_or(0) & 1) as usize;
                let o = post
                    .map_events((2, 2, post.z_size()), |e| {
                        Event::new(bit(cf.index_of_first(e.x)), bit(cf.index_of_second(e.y)), e.z)
                    })
                    .expect("posterior has mass");
                if strict_key_check(&o, &target.bias, &transcript_label(&[m])).is_ok() {
                    branch_ok = true;
                    break;
                }
            }
            if !branch_ok {
                all_branches_pass = false;
                break;
            }
        }
        if all_branches_pass {
            report.passing.push(table);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::build_base;

    fn params(r: u32, num: i64, den: i64) -> OrigamiParams {
        OrigamiParams::new(r, ratio(num, den)).unwrap()
    }

    #[test]
    fn zero_round_tree() {
        let b = build_base(&ratio(1, 3)).unwrap();
        let br = run_protocol(&b, &ProtocolTree::empty()).unwrap();
        assert_eq!(br.len(), 1);
        assert_eq!(br[0].mass, ratio(1, 1));
        assert_eq!(br[0].posterior, b);
    }

    #[test]
    fn bob_label_on_base() {
        let p = params(1, 1, 3);
        let t = make_label_protocol(&p, Party::Bob, &TargetKey::new(ratio(1, 3)).unwrap()).unwrap();
        let br = run_protocol(&build_origami(&p).unwrap(), &t).unwrap();
        assert_eq!(br.len(), 2);
        for b in &br {
            assert_eq!(b.mass, ratio(1, 2));
            assert_eq!(b.posterior.len(), 4);
            assert_eq!(b.posterior.used_values(Var::Z).len(), 2);
        }
    }

    #[test]
    fn two_rounds_four_branches() {
        let p = params(2, 1, 3);
        let t = make_achievability_protocol(&p, &TargetKey::new(ratio(1, 3)).unwrap()).unwrap();
        assert_eq!(t.parties(), vec![Party::Alice, Party::Bob]);
        let br = run_protocol(&build_origami(&p).unwrap(), &t).unwrap();
        assert_eq!(br.len(), 4);
        assert!(br.iter().all(|b| b.mass == ratio(1, 4)));
    }

    #[test]
    fn bias_adjust_values() {
        let id = make_bias_adjust(&ratio(1, 3), &ratio(1, 3)).unwrap();
        assert!(id.is_identity());
        assert!(make_bias_adjust(&ratio(1, 2), &ratio(1, 2)).unwrap().is_identity());
        let a = make_bias_adjust(&ratio(1, 2), &ratio(1, 4)).unwrap();
        assert_eq!(a.p0, ratio(1, 2));
        assert_eq!(a.q, vec![ratio(1, 4), ratio(3, 4)]);
        assert!(matches!(make_bias_adjust(&ratio(1, 4), &ratio(1, 3)), Err(Error::BiasOrdering { .. })));
    }

    #[test]
    fn bias_adjust_by_enumeration() {
        // Oracle: joint of (K, M) for a fair key, then flip on M = 1.
        let a = make_bias_adjust(&ratio(1, 2), &ratio(1, 4)).unwrap();
        for m in 0..2 {
            let joint: Vec<Rational> = (0..2)
                .map(|k| ratio(1, 2) * if m == 0 { a.q[k].clone() } else { ratio(1, 1) - &a.q[k] })
                .collect();
            let pm = &joint[0] + &joint[1];
            let key0 = if m == 0 { &joint[0] / &pm } else { &joint[1] / &pm };
            assert_eq!(key0, ratio(1, 4), "message {m}");
        }
    }

    #[test]
    fn strict_fails_at_one_third() {
        let p = params(1, 1, 3);
        let target = TargetKey::new(ratio(1, 3)).unwrap();
        let br = run_protocol(&build_origami(&p).unwrap(), &make_achievability_protocol(&p, &target).unwrap()).unwrap();
        let strict = verify_strict_key(&br, &target);
        assert_eq!(strict.verdict, Verdict::Fail);
        assert!(strict.checks.iter().any(|c| c.detail.starts_with("key–Z dependence on branch m=0")), "{}", strict.to_json());
        assert_eq!(verify_blockwise_key(&br, &ratio(1, 3)).verdict, Verdict::Pass);
    }

    #[test]
    fn strict_passes_at_one_half() {
        for r in 1..=3 {
            let p = params(r, 1, 2);
            for t in [ratio(1, 2), ratio(1, 4)] {
                let target = TargetKey::new(t).unwrap();
                let br = run_protocol(&build_origami(&p).unwrap(), &make_achievability_protocol(&p, &target).unwrap()).unwrap();
                let rep = verify_strict_key(&br, &target);
                assert_eq!(rep.verdict, Verdict::Pass, "{}", rep.to_json());
            }
        }
    }

    #[test]
    fn alignment_extension_is_strict() {
        for r in 1..=3 {
            let p = params(r, 1, 3);
            for t in [ratio(1, 3), ratio(1, 4)] {
                let target = TargetKey::new(t).unwrap();
                let proto = make_alignment_extension(&p, &target).unwrap();
                assert_eq!(proto.rounds.len(), r as usize + 1);
                let br = run_protocol(&build_origami(&p).unwrap(), &proto).unwrap();
                let rep = verify_strict_key(&br, &target);
                assert_eq!(rep.verdict, Verdict::Pass, "{}", rep.to_json());
            }
        }
    }

    #[test]
    fn phi_quarter_with_uniform_eve() {
        let ev = |x, z, p| (Event::new(x, x, z), p);
        let o = TripartiteDistribution::new(
            2,
            2,
            2,
            vec![ev(0, 0, ratio(1, 8)), ev(1, 0, ratio(3, 8)), ev(0, 1, ratio(1, 8)), ev(1, 1, ratio(3, 8))],
        )
        .unwrap();
        let br = vec![Branch::from_output(vec![], ratio(1, 1), o)];
        assert_eq!(verify_strict_key(&br, &TargetKey::new(ratio(1, 4)).unwrap()).verdict, Verdict::Pass);
        assert_eq!(verify_blockwise_key(&br, &ratio(1, 4)).verdict, Verdict::Pass);
    }

    #[test]
    fn blockwise_rejects_fair_slice() {
        let ev = |x, z, p| (Event::new(x, x, z), p);
        let o = TripartiteDistribution::new(
            2,
            2,
            2,
            vec![ev(0, 0, ratio(1, 6)), ev(1, 0, ratio(1, 3)), ev(0, 1, ratio(1, 4)), ev(1, 1, ratio(1, 4))],
        )
        .unwrap();
        let br = vec![Branch::from_output(vec![0], ratio(1, 1), o)];
        assert_eq!(verify_blockwise_key(&br, &ratio(1, 3)).verdict, Verdict::Fail);
    }

    #[test]
    fn block_tree_shape() {
        let t = block_tree(3);
        assert_eq!(t.levels.len(), 4);
        assert_eq!(t.levels[1][1].start, 8);
        assert_eq!(t.levels[2][3].start, 12);
        assert_eq!(t.levels[3][5].len, 2);
        assert_eq!(t.levels[2][2].name(), "10");
    }

    #[test]
    fn announcing_x_drops_rank_everywhere() {
        let p = params(1, 1, 3);
        let d = build_origami(&p).unwrap();
        let proto = ProtocolTree { rounds: vec![Round::fixed(Party::Alice, Channel::deterministic(4, 4, |x| x).unwrap())], outputs: None };
        let trace = trace_protocol(&d, &proto).unwrap();
        let audit = audit_block_survival(&p, &trace).unwrap();
        assert_eq!(audit.verdict, Verdict::Fail);
        assert!(audit.per_round[1].iter().all(|b| !b.rank_drops.is_empty()));
    }

    #[test]
    fn canonical_trace_keeps_single_blocks() {
        let p = params(3, 1, 3);
        let target = TargetKey::new(ratio(1, 3)).unwrap();
        let trace = trace_protocol(&build_origami(&p).unwrap(), &make_achievability_protocol(&p, &target).unwrap()).unwrap();
        let audit = audit_block_survival(&p, &trace).unwrap();
        assert_eq!(audit.rank_drop_events, 0);
        for (k, level) in audit.per_round.iter().enumerate() {
            for b in level {
                assert_eq!(b.intact_blocks.len(), 1, "depth {k} {}", b.transcript);
            }
        }
        assert_eq!(audit.per_round[0][0].intact_blocks, vec!["root".to_string()]);
    }

    #[test]
    fn one_round_search() {
        let b3 = build_base(&ratio(1, 3)).unwrap();
        let rep = exhaustive_one_round_search(&b3, Party::Alice, 4, &TargetKey::new(ratio(1, 3)).unwrap()).unwrap();
        assert!(rep.complete);
        assert_eq!(rep.protocols_enumerated, 15);
        assert!(rep.passing.is_empty());
        let b2 = build_base(&ratio(1, 2)).unwrap();
        let rep = exhaustive_one_round_search(&b2, Party::Bob, 2, &TargetKey::new(ratio(1, 2)).unwrap()).unwrap();
        assert_eq!(rep.passing, vec![vec![0, 0, 1, 1]]);
        let none = exhaustive_one_round_search(&b2, Party::Bob, 1, &TargetKey::new(ratio(1, 2)).unwrap()).unwrap();
        assert!(none.passing.is_empty());
    }

    #[test]
    fn protocol_json_roundtrip() {
        let p = params(2, 1, 2);
        let t = make_achievability_protocol(&p, &TargetKey::new(ratio(1, 4)).unwrap()).unwrap();
        let json = t.to_json();
        assert!(json.contains("\"party\": \"A\""));
        assert!(json.contains("\"depends_on_transcript\": true"));
        assert_eq!(ProtocolTree::from_json(&json).unwrap(), t);
    }
}
