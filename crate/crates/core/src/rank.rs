//! Nonnegative rank of slice matrices and the secrecy rank built on it.
//!
//! The nonnegative rank is bracketed exactly:
//! * lower bounds: linear rank over the rationals, and the minimum number of
//!   all-positive rectangles covering the support;
//! * upper bounds: explicit decompositions — `k` rows (or columns) that
//!   generate every other row with nonnegative coefficients, or an exact
//!   partition of the support into rank-one rectangles.
//!
//! Zero rows and columns are dropped first and the support graph is split
//! into connected blocks, over which the rank is additive. When the bounds
//! do not meet (or exceed the cap) the answer is `ExceedsCap`, never a guess.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{announce, Channel, Party};
use crate::dist::{Event, Rational, TripartiteDistribution};
use crate::error::{Error, Result};
use crate::report::Verdict;

pub const MAX_CAP: usize = 6;
pub const MAX_DIM: usize = 8;
const COVER_BUDGET: usize = 2_000_000;
const PARTITION_BUDGET: usize = 200_000;

/// `p(x, y | z)` laid out with rows `y` and columns `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceMatrix {
    entries: Vec<Vec<Rational>>,
}

impl SliceMatrix {
    pub fn new(entries: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = entries.first().map(Vec::len).unwrap_or(0);
        if entries.is_empty() || cols == 0 {
            return Err(Error::EmptyAlphabet);
        }
        if entries.iter().any(|r| r.len() != cols) {
            return Err(Error::Protocol("ragged slice matrix".into()));
        }
        if let Some(p) = entries.iter().flatten().find(|p| p.is_negative()) {
            return Err(Error::ProbabilityOutOfRange(p.clone()));
        }
        let total: Rational = entries.iter().flatten().sum();
        if !total.is_one() {
            return Err(Error::NotNormalized(total));
        }
        Ok(Self { entries })
    }

    pub fn from_slice(d: &TripartiteDistribution, z: usize) -> Result<Self> {
        let mut m = vec![vec![Rational::zero(); d.x_size()]; d.y_size()];
        let slice = d.slice_conditional(z);
        if slice.is_empty() {
            return Err(Error::EmptyCondition);
        }
        for (x, y, p) in slice {
            m[y][x] = p;
        }
        Self::new(m)
    }

    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries[0].len()
    }

    pub fn entries(&self) -> &[Vec<Rational>] {
        &self.entries
    }
}

/// One product component `weight · row_dist ⊗ col_dist`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductTerm {
    #[serde(with = "crate::serde_fraction")]
    pub weight: Rational,
    #[serde(with = "crate::serde_fraction::vec")]
    pub row_dist: Vec<Rational>,
    #[serde(with = "crate::serde_fraction::vec")]
    pub col_dist: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonnegDecomposition {
    pub components: Vec<ProductTerm>,
}

impl NonnegDecomposition {
    pub fn reconstruct(&self, rows: usize, cols: usize) -> Vec<Vec<Rational>> {
        let mut m = vec![vec![Rational::zero(); cols]; rows];
        for t in &self.components {
            for (i, a) in t.row_dist.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in t.col_dist.iter().enumerate() {
                    m[i][j] += &t.weight * a * b;
                }
            }
        }
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RankOutcome {
    Exact { rank: usize },
    ExceedsCap { lower: usize, upper: usize },
}

impl RankOutcome {
    pub fn exact(self) -> Option<usize> {
        match self {
            RankOutcome::Exact { rank } => Some(rank),
            RankOutcome::ExceedsCap { .. } => None,
        }
    }

    pub fn bounds(self) -> (usize, usize) {
        match self {
            RankOutcome::Exact { rank } => (rank, rank),
            RankOutcome::ExceedsCap { lower, upper } => (lower, upper),
        }
    }

    fn from_bounds(lower: usize, upper: usize, cap: usize) -> Self {
        if lower == upper && upper <= cap {
            RankOutcome::Exact { rank: upper }
        } else {
            RankOutcome::ExceedsCap { lower, upper }
        }
    }
}

impl std::fmt::Display for RankOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RankOutcome::Exact { rank } => write!(f, "{rank}"),
            RankOutcome::ExceedsCap { lower, upper } => write!(f, "exceeds cap (bounds {lower}..={upper})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankResult {
    pub outcome: RankOutcome,
    pub linear_rank: usize,
    pub rectangle_cover: usize,
    /// A decomposition attaining the upper bound.
    pub decomposition: NonnegDecomposition,
}

type Mat = Vec<Vec<Rational>>;

/// Rank over the rationals by exact Gaussian elimination.
pub fn linear_rank(m: &[Vec<Rational>]) -> usize {
    let mut a: Mat = m.to_vec();
    let rows = a.len();
    let cols = a.first().map(Vec::len).unwrap_or(0);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pivot = a[rank][c].clone();
        for r in 0..rows {
            if r != rank && !a[r][c].is_zero() {
                let f = &a[r][c] / &pivot;
                for k in c..cols {
                    let delta = &f * &a[rank][k];
                    a[r][k] -= delta;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Unique `c` with `Σ_j c_j basis[j] = target`, if the system is consistent.
/// `basis` must be linearly independent.
fn solve_combination(basis: &[&Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let k = basis.len();
    let n = target.len();
    // Augmented n x (k+1) system.
    let mut a: Mat = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::with_capacity(k);
    let mut r = 0;
    for c in 0..k {
        let p = (r..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(r, p);
        let pivot = a[r][c].clone();
        for v in a[r].iter_mut() {
            *v /= &pivot;
        }
        for i in 0..n {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..=k {
                    let delta = &f * &a[r][j];
                    a[i][j] -= delta;
                }
            }
        }
        pivots.push(r);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    Some(pivots.iter().map(|&i| a[i][k].clone()).collect())
}

fn transpose(m: &[Vec<Rational>]) -> Mat {
    let cols = m.first().map(Vec::len).unwrap_or(0);
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// A term as (weight, unnormalized row vector, unnormalized column vector)
/// over block-local indices; normalized when mapped back.
type RawTerm = (Vec<Rational>, Vec<Rational>);

/// `k` rows of `m` generating all rows with nonnegative coefficients.
fn row_generators(m: &[Vec<Rational>], k: usize) -> Option<Vec<RawTerm>> {
    for subset in combinations(m.len(), k) {
        let basis: Vec<&Vec<Rational>> = subset.iter().map(|&i| &m[i]).collect();
        let owned: Mat = basis.iter().map(|r| (*r).clone()).collect();
        if linear_rank(&owned) != k {
            continue;
        }
        let mut coeffs: Mat = Vec::with_capacity(m.len());
        let mut ok = true;
        for row in m {
            match solve_combination(&basis, row) {
                Some(c) if c.iter().all(|v| !v.is_negative()) => coeffs.push(c),
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            return Some(
                (0..k)
                    .map(|j| (coeffs.iter().map(|c| c[j].clone()).collect(), basis[j].clone()))
                    .collect(),
            );
        }
    }
    None
}

fn support_mask(m: &[Vec<Rational>]) -> u64 {
    let cols = m[0].len();
    let mut mask = 0u64;
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if !v.is_zero() {
                mask |= 1 << (i * cols + j);
            }
        }
    }
    mask
}

fn rect_mask(rows: u32, cols_mask: u32, ncols: usize) -> u64 {
    let mut mask = 0u64;
    for i in 0..32 {
        if rows >> i & 1 == 1 {
            mask |= (cols_mask as u64) << (i * ncols);
        }
    }
    mask
}

/// Maximal all-positive rectangles (closed row/column pairs), as cell masks.
fn maximal_rectangles(m: &[Vec<Rational>]) -> Vec<u64> {
    let (r, c) = (m.len(), m[0].len());
    let row_supp: Vec<u32> = m
        .iter()
        .map(|row| row.iter().enumerate().filter(|(_, v)| !v.is_zero()).fold(0, |a, (j, _)| a | 1 << j))
        .collect();
    let mut out = Vec::new();
    for s in 1u32..(1 << r) {
        let cols = (0..r).filter(|i| s >> i & 1 == 1).fold((1u32 << c) - 1, |a, i| a & row_supp[i]);
        if cols == 0 {
            continue;
        }
        let closure = (0..r).filter(|&i| row_supp[i] & cols == cols).fold(0u32, |a, i| a | 1 << i);
        if closure == s {
            out.push(rect_mask(s, cols, c));
        }
    }
    out.sort_by(|a, b| b.count_ones().cmp(&a.count_ones()).then(a.cmp(b)));
    out
}

struct CoverSearch<'a> {
    rects: &'a [u64],
    best: usize,
    nodes: usize,
    exhausted: bool,
}

impl CoverSearch<'_> {
    fn dfs(&mut self, uncovered: u64, used: usize) {
        if uncovered == 0 {
            self.best = self.best.min(used);
            return;
        }
        if used + 1 >= self.best {
            return;
        }
        self.nodes += 1;
        if self.nodes > COVER_BUDGET {
            self.exhausted = true;
            return;
        }
        let cell = uncovered & uncovered.wrapping_neg();
        for i in 0..self.rects.len() {
            let r = self.rects[i];
            if r & cell != 0 {
                self.dfs(uncovered & !r, used + 1);
                if self.exhausted {
                    return;
                }
            }
        }
    }
}

/// Minimum number of all-positive rectangles covering the support, or
/// `None` when the search budget runs out.
pub fn rectangle_cover(m: &[Vec<Rational>]) -> Option<usize> {
    let support = support_mask(m);
    if support == 0 {
        return Some(0);
    }
    let rects = maximal_rectangles(m);
    let mut s = CoverSearch { rects: &rects, best: support.count_ones() as usize + 1, nodes: 0, exhausted: false };
    s.dfs(support, 0);
    (!s.exhausted).then_some(s.best)
}

/// Exact partition of the support into rank-one rectangles with fewer than
/// `limit` pieces.
fn rank_one_partition(m: &[Vec<Rational>], limit: usize) -> Option<Vec<RawTerm>> {
    let (r, c) = (m.len(), m[0].len());
    let support = support_mask(m);
    let mut cands: Vec<(u64, u32, u32)> = Vec::new();
    for s in 1u32..(1 << r) {
        let rows: Vec<usize> = (0..r).filter(|i| s >> i & 1 == 1).collect();
        for t in 1u32..(1 << c) {
            let cols: Vec<usize> = (0..c).filter(|j| t >> j & 1 == 1).collect();
            if rows.iter().any(|&i| cols.iter().any(|&j| m[i][j].is_zero())) {
                continue;
            }
            let sub: Mat = rows.iter().map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect()).collect();
            if linear_rank(&sub) == 1 {
                cands.push((rect_mask(s, t, c), s, t));
            }
        }
    }
    cands.sort_by(|a, b| b.0.count_ones().cmp(&a.0.count_ones()).then(a.0.cmp(&b.0)));

    fn dfs(
        cands: &[(u64, u32, u32)],
        left: u64,
        chosen: &mut Vec<usize>,
        best: &mut Option<Vec<usize>>,
        limit: &mut usize,
        nodes: &mut usize,
    ) {
        if left == 0 {
            *limit = chosen.len();
            *best = Some(chosen.clone());
            return;
        }
        if chosen.len() + 1 >= *limit || *nodes > PARTITION_BUDGET {
            return;
        }
        *nodes += 1;
        let cell = left & left.wrapping_neg();
        for (i, (mask, _, _)) in cands.iter().enumerate() {
            if mask & cell != 0 && mask & !left == 0 {
                chosen.push(i);
                dfs(cands, left & !mask, chosen, best, limit, nodes);
                chosen.pop();
            }
        }
    }
    let mut best = None;
    let mut lim = limit;
    let mut nodes = 0;
    dfs(&cands, support, &mut Vec::new(), &mut best, &mut lim, &mut nodes);
    best.map(|idx| {
        idx.into_iter()
            .map(|i| {
                let (_, s, t) = cands[i];
                let mut u = vec![Rational::zero(); r];
                let mut v = vec![Rational::zero(); c];
                let mut total = Rational::zero();
                for (a, row) in m.iter().enumerate() {
                    for (b, val) in row.iter().enumerate() {
                        if s >> a & 1 == 1 && t >> b & 1 == 1 {
                            u[a] += val;
                            v[b] += val;
                            total += val;
                        }
                    }
                }
                for x in v.iter_mut() {
                    *x /= &total;
                }
                (u, v)
            })
            .collect()
    })
}

struct Block {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

/// Connected blocks of the bipartite support graph on nonzero rows/columns.
fn blocks(m: &[Vec<Rational>]) -> Vec<Block> {
    let (r, c) = (m.len(), m[0].len());
    let mut parent: Vec<usize> = (0..r + c).collect();
    fn find(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    for i in 0..r {
        for j in 0..c {
            if !m[i][j].is_zero() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, r + j));
                parent[a] = b;
            }
        }
    }
    let mut groups: BTreeMap<usize, Block> = BTreeMap::new();
    for i in 0..r {
        if m[i].iter().any(|v| !v.is_zero()) {
            let root = find(&mut parent, i);
            groups.entry(root).or_insert_with(|| Block { rows: vec![], cols: vec![] }).rows.push(i);
        }
    }
    for j in 0..c {
        if m.iter().any(|row| !row[j].is_zero()) {
            let root = find(&mut parent, r + j);
            groups.entry(root).or_insert_with(|| Block { rows: vec![], cols: vec![] }).cols.push(j);
        }
    }
    let mut out: Vec<Block> = groups.into_values().collect();
    out.sort_by_key(|b| (b.rows[0], b.cols[0]));
    out
}

fn check_cap(cap: usize) -> Result<()> {
    if cap == 0 || cap > MAX_CAP {
        return Err(Error::CapOutOfRange(cap));
    }
    Ok(())
}

pub fn nonnegative_rank(m: &SliceMatrix, cap: usize) -> Result<RankResult> {
    check_cap(cap)?;
    let full = m.entries();
    let (nr, nc) = (m.rows(), m.cols());
    let used_rows = full.iter().filter(|r| r.iter().any(|v| !v.is_zero())).count();
    let used_cols = (0..nc).filter(|&j| full.iter().any(|r| !r[j].is_zero())).count();
    if used_rows > MAX_DIM || used_cols > MAX_DIM {
        return Err(Error::MatrixTooLarge { rows: used_rows, cols: used_cols });
    }

    let (mut lower, mut upper, mut lin, mut cover) = (0, 0, 0, 0);
    let mut components = Vec::new();
    for b in blocks(full) {
        let sub: Mat = b.rows.iter().map(|&i| b.cols.iter().map(|&j| full[i][j].clone()).collect()).collect();
        let k = linear_rank(&sub);
        let rc = rectangle_cover(&sub);
        let lo = k.max(rc.unwrap_or(0));

        // Upper bound candidates, best first.
        let trivial = sub.len().min(sub[0].len());
        let mut terms: Option<Vec<RawTerm>> = row_generators(&sub, k).or_else(|| {
            row_generators(&transpose(&sub), k)
                .map(|ts| ts.into_iter().map(|(u, v)| (v, u)).collect())
        });
        if terms.as_ref().map_or(trivial, Vec::len) > lo {
            let limit = terms.as_ref().map_or(trivial, Vec::len);
            if let Some(p) = rank_one_partition(&sub, limit) {
                terms = Some(p);
            }
        }
        let terms = terms.unwrap_or_else(|| {
            if sub.len() <= sub[0].len() {
                // Each row as its own component.
                (0..sub.len())
                    .map(|i| {
                        let mut u = vec![Rational::zero(); sub.len()];
                        u[i] = Rational::one();
                        (u, sub[i].clone())
                    })
                    .collect()
            } else {
                let t = transpose(&sub);
                (0..t.len())
                    .map(|j| {
                        let mut v = vec![Rational::zero(); t.len()];
                        v[j] = Rational::one();
                        (t[j].clone(), v)
                    })
                    .collect()
            }
        });
        lower += lo;
        upper += terms.len();
        lin += k;
        cover += rc.unwrap_or(0);
        for (u, v) in terms {
            let su: Rational = u.iter().sum();
            let sv: Rational = v.iter().sum();
            let mut row_dist = vec![Rational::zero(); nr];
            let mut col_dist = vec![Rational::zero(); nc];
            for (i, a) in b.rows.iter().zip(&u) {
                row_dist[*i] = a / &su;
            }
            for (j, a) in b.cols.iter().zip(&v) {
                col_dist[*j] = a / &sv;
            }
            components.push(ProductTerm { weight: su * sv, row_dist, col_dist });
        }
    }
    let decomposition = NonnegDecomposition { components };
    debug_assert_eq!(decomposition.reconstruct(nr, nc), full.to_vec());
    Ok(RankResult {
        outcome: RankOutcome::from_bounds(lower, upper, cap),
        linear_rank: lin,
        rectangle_cover: cover,
        decomposition,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SecrecyRank {
    pub outcome: RankOutcome,
    pub per_slice: BTreeMap<usize, RankOutcome>,
}

/// `max_z` of the nonnegative rank of `p(x, y | z)`.
pub fn secrecy_rank(d: &TripartiteDistribution, cap: usize) -> Result<SecrecyRank> {
    check_cap(cap)?;
    let mut per_slice = BTreeMap::new();
    let (mut lo, mut hi) = (0, 0);
    let mut all_exact = true;
    for &z in d.slices().keys() {
        let r = nonnegative_rank(&SliceMatrix::from_slice(d, z)?, cap)?.outcome;
        let (l, u) = r.bounds();
        all_exact &= r.exact().is_some();
        lo = lo.max(l);
        hi = hi.max(u);
        per_slice.insert(z, r);
    }
    let outcome = if all_exact {
        RankOutcome::Exact { rank: hi }
    } else {
        RankOutcome::ExceedsCap { lower: lo, upper: hi }
    };
    Ok(SecrecyRank { outcome, per_slice })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MessageRank {
    pub message: usize,
    #[serde(with = "crate::serde_fraction")]
    pub mass: Rational,
    pub rank: RankOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonotoneTrial {
    pub party: Party,
    pub prior: RankOutcome,
    pub conditioned: Vec<MessageRank>,
    pub verdict: Verdict,
}

/// One public announcement by `party`: the secrecy rank given each message
/// (Eve holding `(Z, M)`) must not exceed the prior rank.
pub fn slopc_monotone_trial(
    d: &TripartiteDistribution,
    party: Party,
    channel: &Channel,
    cap: usize,
) -> Result<MonotoneTrial> {
    if channel.messages() > 4 {
        return Err(Error::AlphabetTooLarge(channel.messages()));
    }
    let prior = secrecy_rank(d, cap)?.outcome;
    let (prior_lo, prior_hi) = prior.bounds();
    let mut verdict = Verdict::Pass;
    let mut conditioned = Vec::new();
    for (m, post, mass) in announce(d, party, channel)? {
        let rank = secrecy_rank(&post, cap)?.outcome;
        let (lo, hi) = rank.bounds();
        let v = if lo > prior_hi {
            Verdict::Fail
        } else if hi <= prior_lo {
            Verdict::Pass
        } else {
            Verdict::Inconclusive
        };
        verdict = verdict.and(v);
        conditioned.push(MessageRank { message: m, mass, rank });
    }
    Ok(MonotoneTrial { party, prior, conditioned, verdict })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub trials: usize,
    pub seed: u64,
    pub x_size: usize,
    pub y_size: usize,
    pub z_size: usize,
    pub msg_size: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub passed: usize,
    pub inconclusive: Vec<usize>,
    pub violations: Vec<usize>,
    pub verdict: Verdict,
}

/// Small-denominator random distribution: integer weights in `0..=3`.
pub fn random_distribution(rng: &mut impl Rng, sizes: (usize, usize, usize)) -> TripartiteDistribution {
    loop {
        let mut w = Vec::new();
        for x in 0..sizes.0 {
            for y in 0..sizes.1 {
                for z in 0..sizes.2 {
                    w.push((Event::new(x, y, z), Rational::from_integer(rng.random_range(0..=3).into())));
                }
            }
        }
        if let Some((d, _)) = TripartiteDistribution::from_weights(sizes.0, sizes.1, sizes.2, w) {
            return d;
        }
    }
}

/// Random row-stochastic channel with rational entries.
pub fn random_channel(rng: &mut impl Rng, inputs: usize, messages: usize) -> Channel {
    let rows = (0..inputs)
        .map(|_| {
            let mut w: Vec<i64> = (0..messages).map(|_| rng.random_range(0..=2)).collect();
            if w.iter().all(|v| *v == 0) {
                w[rng.random_range(0..messages)] = 1;
            }
            let total: i64 = w.iter().sum();
            w.into_iter().map(|v| Rational::new(v.into(), total.into())).collect()
        })
        .collect();
    Channel::new(rows).expect("rows normalized by construction")
}

/// Per-trial generator: one ChaCha stream per trial index.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

pub fn monotone_suite(cfg: &SuiteConfig, cap: usize) -> Result<SuiteReport> {
    if cfg.trials == 0 {
        return Err(Error::NoTrials);
    }
    for s in [cfg.x_size, cfg.y_size, cfg.z_size] {
        if s == 0 {
            return Err(Error::EmptyAlphabet);
        }
        if s > MAX_DIM {
            return Err(Error::AlphabetTooLarge(s));
        }
    }
    if cfg.msg_size == 0 || cfg.msg_size > 4 {
        return Err(Error::AlphabetTooLarge(cfg.msg_size));
    }
    let sizes = (cfg.x_size, cfg.y_size, cfg.z_size);
    let (mut passed, mut inconclusive, mut violations) = (0, Vec::new(), Vec::new());
    for t in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, t);
        let d = random_distribution(&mut rng, sizes);
        let party = if rng.random_bool(0.5) { Party::Alice } else { Party::Bob };
        let ch = random_channel(&mut rng, d.size_of(party.var()), cfg.msg_size);
        match slopc_monotone_trial(&d, party, &ch, cap)?.verdict {
            Verdict::Pass => passed += 1,
            Verdict::Inconclusive => inconclusive.push(t),
            Verdict::Fail => violations.push(t),
        }
    }
    let verdict = if !violations.is_empty() {
        Verdict::Fail
    } else if !inconclusive.is_empty() {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    Ok(SuiteReport { config: cfg.clone(), passed, inconclusive, violations, verdict })
}
