//! Brute-force verification at desk scale.
//!
//! Each routine enumerates the construction for one small `k` and checks a
//! claim exhaustively. Routines refuse `k` above their configured cap
//! instead of silently skipping work.

pub mod rank;
pub mod search;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::arith::{binomial, ratio_string, ExactInt, ExactRatio};
use crate::bounds::{q_value, spectrum_analytic};
use crate::construction::{
    complement, cross_set, dist_sq_closed, dist_sq_direct, enumerate_blocks, enumerate_points,
    intersection_size, make_params, Block, CrossVector, Params, DEFAULT_ENUMERATION_CAP,
};
use crate::error::{Error, Result};
use crate::report::VerificationReport;

pub use rank::affine_rank_of;
pub use search::{ConflictGraph, SearchOutcome};

/// Per-suite limits on `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Point enumeration and count-only identity checks.
    pub enumeration: u64,
    /// Suites that visit every pair of blocks or points.
    pub pairwise: u64,
    /// Exact affine rank.
    pub rank: u64,
    /// Exact conflict-free family search; above this (up to `pairwise`) the
    /// search only reports a lower bound.
    pub exact_search: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration: DEFAULT_ENUMERATION_CAP,
            pairwise: 3,
            rank: 2,
            exact_search: 2,
        }
    }
}

/// Default node budget for the conflict-free family search.
pub const DEFAULT_SEARCH_BUDGET: u64 = 2_000_000;

fn check_cap(what: &'static str, k: u64, cap: u64) -> Result<Params> {
    if k > cap {
        return Err(Error::CapExceeded { what, k, cap });
    }
    make_params(k)
}

/// Identity checks over the whole construction.
///
/// With `k` within the pairwise cap every ordered block pair is visited;
/// between that and the enumeration cap only the per-block and counting
/// identities run.
pub fn verify_identities(k: u64, caps: &Caps) -> Result<VerificationReport> {
    if k > caps.pairwise {
        let params = check_cap("count-only identity", k, caps.enumeration)?;
        return Ok(verify_counts(&params));
    }
    let params = make_params(k)?;
    let mut report = VerificationReport::new("identities")
        .param("k", k)
        .param("mode", "pairwise");

    let blocks: Vec<Block> = enumerate_blocks(&params)?.collect();
    let crosses: Vec<CrossVector> = blocks
        .iter()
        .map(|&b| cross_set(b, &params))
        .collect::<Result<_>>()?;
    let two_k = 2 * k;
    let diameter = params.diameter_sq();
    check_blocks(&params, &blocks, &crosses, &mut report)?;

    let mut pairs = 0u64;
    let mut max_dist = 0u64;
    let mut at_max = 0u64;
    let mut at_max_with_p_k = 0u64;
    let mut with_p_k = 0u64;
    for (&a, xa) in blocks.iter().zip(&crosses) {
        let na = complement(a, &params);
        for (&b, xb) in blocks.iter().zip(&crosses) {
            pairs += 1;
            let p = intersection_size(a, b) as u64;
            let nb = complement(b, &params);
            if intersection_size(a, nb) as u64 != two_k - p {
                report.fail(format!("|A ∩ N(B)| != 2k - p for A={a}, B={b}"));
            }
            // |a ∩ b| = p^2 + (2k-p)^2 = 2k^2 + 2(p-k)^2
            let overlap = xa.and_count(xb)?;
            let v = p.abs_diff(k);
            if overlap != p * p + (two_k - p) * (two_k - p) || overlap != 2 * k * k + 2 * v * v {
                report.fail(format!(
                    "|S(A) ∩ S(B)| = {overlap} off the closed form, A={a}, B={b}"
                ));
            }
            let dist = dist_sq_direct(xa, xb)?;
            if dist != 2 * two_k * two_k - 2 * overlap || dist != dist_sq_closed(k, p)? {
                report.fail(format!("dist^2 = {dist} off the closed form, A={a}, B={b}"));
            }
            let same_point = xa == xb;
            if same_point != (b == a || b == na) {
                report.fail(format!("S(A) = S(B) is {same_point} for A={a}, B={b}"));
            }
            if dist > max_dist {
                max_dist = dist;
                at_max = 0;
                at_max_with_p_k = 0;
            }
            if dist == max_dist {
                at_max += 1;
                at_max_with_p_k += (p == k) as u64;
            }
            with_p_k += (p == k) as u64;
        }
    }

    if max_dist != diameter {
        report.fail(format!(
            "observed diameter^2 {max_dist}, expected 4k^2 = {diameter}"
        ));
    }
    if at_max != at_max_with_p_k || at_max != with_p_k {
        report.fail(format!(
            "diameter pairs {at_max}, of which p = k: {at_max_with_p_k}; pairs with p = k: {with_p_k}"
        ));
    }
    report.counter("ordered_pairs", pairs);
    report.counter("diameter_sq", max_dist);
    report.counter("diameter_pairs", at_max);
    Ok(report)
}

fn verify_counts(params: &Params) -> VerificationReport {
    let mut report = VerificationReport::new("identities")
        .param("k", params.k)
        .param("mode", "count-only");
    let blocks: Vec<Block> = enumerate_blocks(params)
        .expect("k is within the enumeration cap")
        .collect();
    let crosses: Vec<CrossVector> = blocks
        .iter()
        .map(|&b| cross_set(b, params).expect("enumerated blocks are valid"))
        .collect();
    check_blocks(params, &blocks, &crosses, &mut report).expect("lengths agree");
    report
}

// Per-block identities plus |K| = |H| / 2 and |R(K)| = 2 |K|.
fn check_blocks(
    params: &Params,
    blocks: &[Block],
    crosses: &[CrossVector],
    report: &mut VerificationReport,
) -> Result<()> {
    let expected_blocks = binomial(params.m, 2 * params.k);
    if ExactInt::from(blocks.len()) != expected_blocks {
        report.fail(format!(
            "|H| = {}, expected {expected_blocks}",
            blocks.len()
        ));
    }
    let mut preimages: BTreeMap<&CrossVector, u32> = BTreeMap::new();
    for (&a, x) in blocks.iter().zip(crosses) {
        if x.popcount() != params.cross_size() {
            report.fail(format!("|S({a})| = {}", x.popcount()));
        }
        let na = complement(a, params);
        if na.bits().count_ones() != params.block_size() {
            report.fail(format!("N({a}) has the wrong size"));
        }
        if cross_set(na, params)? != *x {
            report.fail(format!("S(N(A)) != S(A) for A={a}"));
        }
        *preimages.entry(x).or_default() += 1;
    }
    if let Some((x, n)) = preimages.iter().find(|(_, &n)| n != 2) {
        report.fail(format!("point {x:?} has {n} preimages, expected 2"));
    }
    let points = enumerate_points(params, u64::MAX)?.count();
    if points != preimages.len() || 2 * points != blocks.len() {
        report.fail(format!(
            "|K| = {points} canonical, {} distinct; |H| = {}",
            preimages.len(),
            blocks.len()
        ));
    }
    report.counter("blocks", blocks.len());
    report.counter("points", points);
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiameterCensus {
    pub k: u64,
    pub diameter_sq: u64,
    /// First pair in enumeration order attaining the diameter.
    pub witness: (Block, Block),
    pub point_pairs: u64,
    pub diameter_pairs: u64,
    /// Every diameter pair has `p = k`.
    pub max_implies_p_k: bool,
    /// Every pair with `p = k` attains the diameter.
    pub p_k_implies_max: bool,
}

impl DiameterCensus {
    pub fn passed(&self) -> bool {
        self.diameter_sq == 4 * self.k * self.k
            && self.max_implies_p_k
            && self.p_k_implies_max
            && intersection_size(self.witness.0, self.witness.1) as u64 == self.k
    }

    pub fn to_report(&self) -> VerificationReport {
        let mut report = VerificationReport::new("diameter").param("k", self.k);
        report.counter("diameter_sq", self.diameter_sq);
        report.counter("point_pairs", self.point_pairs);
        report.counter("diameter_pairs", self.diameter_pairs);
        report.witness(format!("A={} B={}", self.witness.0, self.witness.1));
        if !self.passed() {
            report.fail(format!(
                "diameter^2 {} (expected {}), max => p=k: {}, p=k => max: {}",
                self.diameter_sq,
                4 * self.k * self.k,
                self.max_implies_p_k,
                self.p_k_implies_max
            ));
        }
        report
    }
}

/// Squared diameter of `K` over all point pairs.
pub fn diameter_bruteforce(k: u64, caps: &Caps) -> Result<DiameterCensus> {
    let params = check_cap("pairwise", k, caps.pairwise)?;
    let points: Vec<(Block, CrossVector)> = enumerate_points(&params, caps.enumeration)?.collect();
    if points.len() < 2 {
        return Err(Error::InvalidInput("need at least two points".into()));
    }

    let mut best: Option<(u64, usize, usize)> = None;
    let mut dists = Vec::with_capacity(points.len() * (points.len() - 1) / 2);
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let d = dist_sq_direct(&points[i].1, &points[j].1)?;
            dists.push((d, intersection_size(points[i].0, points[j].0) as u64 == k));
            if best.is_none_or(|(bd, _, _)| d > bd) {
                best = Some((d, i, j));
            }
        }
    }
    let (diameter_sq, wi, wj) = best.expect("at least one pair");
    let diameter_pairs = dists.iter().filter(|(d, _)| *d == diameter_sq).count() as u64;
    Ok(DiameterCensus {
        k,
        diameter_sq,
        witness: (points[wi].0, points[wj].0),
        point_pairs: dists.len() as u64,
        diameter_pairs,
        max_implies_p_k: dists.iter().all(|&(d, pk)| d != diameter_sq || pk),
        p_k_implies_max: dists.iter().all(|&(d, pk)| !pk || d == diameter_sq),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exact,
    LowerBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    /// Exact search finished; the size is the true maximum.
    Optimal,
    /// Exact search ran out of budget; the size is only a lower bound.
    Inconclusive,
    /// Lower-bound mode; no optimality claim.
    BestFound,
}

impl fmt::Display for SearchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchStatus::Optimal => "optimal",
            SearchStatus::Inconclusive => "inconclusive",
            SearchStatus::BestFound => "best-found",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySearch {
    pub k: u64,
    pub mode: SearchMode,
    pub status: SearchStatus,
    pub family: Vec<Block>,
    /// `2 C(4k-1, k-1)`.
    pub bound: ExactInt,
    pub vertices: usize,
    pub edges: usize,
    pub nodes: u64,
    /// The family avoids intersection size `k` pairwise (rechecked).
    pub family_valid: bool,
}

impl FamilySearch {
    pub fn size(&self) -> usize {
        self.family.len()
    }

    pub fn within_bound(&self) -> bool {
        ExactInt::from(self.size()) <= self.bound
    }

    /// Inconclusive exact runs do not pass: they prove nothing.
    pub fn passed(&self) -> bool {
        self.family_valid && self.within_bound() && self.status != SearchStatus::Inconclusive
    }

    pub fn to_report(&self) -> VerificationReport {
        let mode = match self.mode {
            SearchMode::Exact => "exact",
            SearchMode::LowerBound => "lower-bound",
        };
        let mut report = VerificationReport::new("fw")
            .param("k", self.k)
            .param("mode", mode);
        report.counter("status", self.status);
        report.counter("family_size", self.size());
        report.counter("bound", &self.bound);
        report.counter("vertices", self.vertices);
        report.counter("edges", self.edges);
        report.counter("search_nodes", self.nodes);
        let listing: Vec<String> = self.family.iter().map(|b| format!("{b}")).collect();
        report.witness(format!("family: {}", listing.join(" ")));
        if !self.family_valid {
            report.fail("reported family contains a pair meeting in k elements");
        }
        if !self.within_bound() {
            report.fail(format!(
                "family of {} exceeds bound {}",
                self.size(),
                self.bound
            ));
        }
        if self.status == SearchStatus::Inconclusive {
            report.fail("search budget exhausted before optimality was proven");
        }
        report
    }
}

/// Largest family of blocks (all of `H`, not just canonical ones) with no
/// two members meeting in exactly `k` elements.
pub fn max_conflict_free_family(k: u64, caps: &Caps, budget: u64) -> Result<FamilySearch> {
    let params = check_cap(
        "conflict-free search",
        k,
        caps.pairwise.max(caps.exact_search),
    )?;
    let mode = if k <= caps.exact_search {
        SearchMode::Exact
    } else {
        SearchMode::LowerBound
    };
    let blocks: Vec<Block> = enumerate_blocks(&params)?.collect();
    let graph = ConflictGraph::forbidden_intersection(blocks, k);
    let outcome = search::maximum_independent_set(&graph, budget);
    let status = match (mode, outcome.complete) {
        (SearchMode::Exact, true) => SearchStatus::Optimal,
        (SearchMode::Exact, false) => SearchStatus::Inconclusive,
        (SearchMode::LowerBound, _) => SearchStatus::BestFound,
    };
    let family: Vec<Block> = outcome.members.iter().map(|&i| graph.blocks()[i]).collect();
    let family_valid = family.iter().enumerate().all(|(i, &a)| {
        family[i + 1..]
            .iter()
            .all(|&b| a != b && intersection_size(a, b) as u64 != k)
    });
    Ok(FamilySearch {
        k,
        mode,
        status,
        bound: binomial(params.m - 1, k - 1) * 2u32,
        vertices: graph.vertex_count(),
        edges: graph.edge_count(),
        nodes: outcome.nodes,
        family,
        family_valid,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineRank {
    pub k: u64,
    pub points: usize,
    pub rank: usize,
    pub d: u64,
}

impl AffineRank {
    pub fn passed(&self) -> bool {
        self.rank as u64 <= self.d
    }

    pub fn to_report(&self) -> VerificationReport {
        let mut report = VerificationReport::new("rank").param("k", self.k);
        report.counter("points", self.points);
        report.counter("affine_rank", self.rank);
        report.counter("d", self.d);
        if !self.passed() {
            report.fail(format!("affine rank {} exceeds d = {}", self.rank, self.d));
        }
        report
    }
}

/// Exact dimension of the affine hull of `K`.
pub fn affine_rank(k: u64, caps: &Caps) -> Result<AffineRank> {
    let params = check_cap("rank", k, caps.rank)?;
    let points: Vec<CrossVector> = enumerate_points(&params, caps.enumeration)?
        .map(|(_, x)| x)
        .collect();
    Ok(AffineRank {
        k,
        points: points.len(),
        rank: affine_rank_of(&points),
        d: params.d,
    })
}

/// First-fit partition: each point joins the lowest-indexed part holding no
/// point at squared distance `forbidden_dist_sq` from it.
pub fn first_fit_parts(points: &[CrossVector], forbidden_dist_sq: u64) -> Result<Vec<Vec<usize>>> {
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for (i, x) in points.iter().enumerate() {
        let mut home = None;
        for (pi, part) in parts.iter().enumerate() {
            let mut clash = false;
            for &j in part {
                if dist_sq_direct(x, &points[j])? == forbidden_dist_sq {
                    clash = true;
                    break;
                }
            }
            if !clash {
                home = Some(pi);
                break;
            }
        }
        match home {
            Some(pi) => parts[pi].push(i),
            None => parts.push(alloc::vec![i]),
        }
    }
    Ok(parts)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyCover {
    pub k: u64,
    pub parts: Vec<Vec<Block>>,
    /// Squared diameter inside each part, recomputed from scratch.
    pub part_diameters: Vec<u64>,
    pub diameter_sq: u64,
    pub q: ExactRatio,
}

impl GreedyCover {
    pub fn parts_valid(&self) -> bool {
        self.part_diameters.iter().all(|&d| d < self.diameter_sq)
    }

    pub fn meets_lower_bound(&self) -> bool {
        ExactRatio::from_integer(self.parts.len().into()) >= self.q
    }

    pub fn passed(&self) -> bool {
        self.parts_valid() && self.meets_lower_bound()
    }

    pub fn to_report(&self) -> VerificationReport {
        let mut report = VerificationReport::new("cover").param("k", self.k);
        report.counter("parts", self.parts.len());
        report.counter("q", ratio_string(&self.q));
        report.counter(
            "max_part_diameter_sq",
            self.part_diameters.iter().max().copied().unwrap_or(0),
        );
        for (i, part) in self.parts.iter().enumerate() {
            let listing: Vec<String> = part.iter().map(|b| format!("{b}")).collect();
            report.witness(format!("part {i}: {}", listing.join(" ")));
        }
        if let Some(i) = self
            .part_diameters
            .iter()
            .position(|&d| d >= self.diameter_sq)
        {
            report.fail(format!(
                "part {i} has diameter^2 {}",
                self.part_diameters[i]
            ));
        }
        if !self.meets_lower_bound() {
            report.fail(format!(
                "{} parts is below the lower bound q = {}",
                self.parts.len(),
                ratio_string(&self.q)
            ));
        }
        report
    }
}

/// Greedy covering of `K` by parts of smaller diameter.
pub fn greedy_cover(k: u64, caps: &Caps) -> Result<GreedyCover> {
    let params = check_cap("pairwise", k, caps.pairwise)?;
    let points: Vec<(Block, CrossVector)> = enumerate_points(&params, caps.enumeration)?.collect();
    let vectors: Vec<CrossVector> = points.iter().map(|(_, x)| x.clone()).collect();
    let diameter_sq = params.diameter_sq();
    let parts = first_fit_parts(&vectors, diameter_sq)?;

    let mut part_diameters = Vec::with_capacity(parts.len());
    for part in &parts {
        let mut widest = 0;
        for (x, &i) in part.iter().enumerate() {
            for &j in &part[x + 1..] {
                widest = widest.max(dist_sq_direct(&vectors[i], &vectors[j])?);
            }
        }
        part_diameters.push(widest);
    }
    Ok(GreedyCover {
        k,
        parts: parts
            .iter()
            .map(|part| part.iter().map(|&i| points[i].0).collect())
            .collect(),
        part_diameters,
        diameter_sq,
        q: q_value(k)?,
    })
}

/// Squared distance -> number of unordered point pairs, over all of `K`.
pub fn spectrum_bruteforce(k: u64, caps: &Caps) -> Result<BTreeMap<u64, u64>> {
    let params = check_cap("pairwise", k, caps.pairwise)?;
    let points: Vec<CrossVector> = enumerate_points(&params, caps.enumeration)?
        .map(|(_, x)| x)
        .collect();
    let mut census = BTreeMap::new();
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            *census
                .entry(dist_sq_direct(&points[i], &points[j])?)
                .or_insert(0) += 1;
        }
    }
    Ok(census)
}

/// Runs both spectrum routes and compares them entry by entry.
pub fn verify_spectrum(k: u64, caps: &Caps) -> Result<VerificationReport> {
    let brute = spectrum_bruteforce(k, caps)?;
    let analytic: BTreeMap<u64, ExactInt> = spectrum_analytic(k)?
        .into_iter()
        .map(|e| (e.dist_sq, e.count))
        .collect();
    let mut report = VerificationReport::new("spectrum").param("k", k);
    let keys: BTreeSet<u64> = brute.keys().chain(analytic.keys()).copied().collect();
    for key in keys {
        let b = brute.get(&key).copied().unwrap_or(0);
        let a = analytic.get(&key).cloned().unwrap_or_default();
        report.counter(&format!("dist_sq_{key}"), b);
        if ExactInt::from(b) != a {
            report.fail(format!(
                "dist^2 {key}: brute force {b}, counting formula {a}"
            ));
        }
    }
    let allowed: BTreeSet<u64> = (0..k).map(|v| 4 * (k * k - v * v)).collect();
    if let Some(d) = brute.keys().find(|d| !allowed.contains(d)) {
        report.fail(format!("unexpected squared distance {d}"));
    }
    Ok(report)
}

/// Verification suites addressable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Diameter,
    Fw,
    Rank,
    Cover,
    Spectrum,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Identities,
        Suite::Diameter,
        Suite::Fw,
        Suite::Rank,
        Suite::Cover,
        Suite::Spectrum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Identities => "identities",
            Suite::Diameter => "diameter",
            Suite::Fw => "fw",
            Suite::Rank => "rank",
            Suite::Cover => "cover",
            Suite::Spectrum => "spectrum",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown suite {s:?}")))
    }
}

pub fn run_suite(suite: Suite, k: u64, caps: &Caps, budget: u64) -> Result<VerificationReport> {
    match suite {
        Suite::Identities => verify_identities(k, caps),
        Suite::Diameter => Ok(diameter_bruteforce(k, caps)?.to_report()),
        Suite::Fw => Ok(max_conflict_free_family(k, caps, budget)?.to_report()),
        Suite::Rank => Ok(affine_rank(k, caps)?.to_report()),
        Suite::Cover => Ok(greedy_cover(k, caps)?.to_report()),
        Suite::Spectrum => verify_spectrum(k, caps),
    }
}
