//! Classification search: the table of rank-one Gorenstein del Pezzo surfaces
//! with simply connected smooth locus, arithmetic filters on finite covers,
//! enumeration of quotients of a given top, and the final status report.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::fpgroups::{abelianization, hom_count_cyclic, mumford_presentation};
use crate::lattice::{surface_from_ii_star, types_with_order, DynkinType, SingularityConfig};
use crate::plane_action::{
    builtin_actions, close_group, fixed_locus, quotient_profile, stabilizer, ActionError, FiniteActionGroup,
    QuotientProfile, DEFAULT_GROUP_CAP,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceProfile {
    pub name: String,
    pub d: u32,
    pub config: SingularityConfig,
    pub chi: i64,
    pub smooth_locus_simply_connected: bool,
}

impl SurfaceProfile {
    pub fn new(name: &str, d: u32, config: SingularityConfig) -> Self {
        Self { name: name.to_string(), d, config, chi: 3, smooth_locus_simply_connected: true }
    }

    /// Orders of the local fundamental groups at the singular points.
    pub fn local_orders(&self) -> Vec<u64> {
        self.config.orders()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "d": self.d,
            "config": self.config.labels(),
            "chi": self.chi,
            "smooth_locus_simply_connected": self.smooth_locus_simply_connected,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma1Table {
    pub rows: Vec<SurfaceProfile>,
    /// Degrees in 1..=9 with no surface.
    pub impossible_degrees: Vec<u32>,
}

impl Lemma1Table {
    pub fn to_json(&self) -> Value {
        json!({
            "rows": self.rows.iter().map(SurfaceProfile::to_json).collect::<Vec<_>>(),
            "impossible_degrees": self.impossible_degrees,
            "consistent": self.rows.iter().all(|r| consistency(r).pass),
        })
    }
}

fn cfg(s: &str) -> SingularityConfig {
    s.parse().expect("static configuration")
}

/// Rank-one Gorenstein log del Pezzo surfaces whose smooth locus is simply
/// connected. The E8 degree carries two surfaces, V8 and V8'.
pub fn lemma1_table() -> Lemma1Table {
    let mut rows = vec![SurfaceProfile::new("P2", 9, SingularityConfig::empty()), SurfaceProfile::new("Q", 8, cfg("A1"))];
    for i in 3..=8 {
        let (d, config) = surface_from_ii_star(i).expect("index in range");
        rows.push(SurfaceProfile::new(&format!("V{i}"), d, config));
    }
    rows.push(SurfaceProfile::new("V8'", 1, cfg("E8")));
    let present: BTreeSet<u32> = rows.iter().map(|r| r.d).collect();
    let impossible_degrees = (1..=9).filter(|d| !present.contains(d)).collect();
    Lemma1Table { rows, impossible_degrees }
}

/// Looks up a row by name (`P2`, `Q`, `V5`, `V8'`), optionally prefixed by
/// `lemma1:`, or by configuration (`A1+A2`). A configuration shared by two
/// rows resolves to the first.
pub fn find_top(key: &str) -> Option<SurfaceProfile> {
    let key = key.trim();
    let key = key.strip_prefix("lemma1:").unwrap_or(key);
    let rows = lemma1_table().rows;
    let alias = match key {
        "P^2" | "p2" => "P2",
        "q" => "Q",
        other => other,
    };
    if let Some(r) = rows.iter().find(|r| r.name == alias) {
        return Some(r.clone());
    }
    let c: SingularityConfig = key.parse().ok()?;
    rows.into_iter().find(|r| r.config == c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Contradiction {
    K2NotInteger,
    RankMismatch,
    LocalOrderUnrealizable,
    EulerMismatch,
    NonGorensteinForced,
}

impl fmt::Display for Contradiction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Contradiction::K2NotInteger => "K2NotInteger",
            Contradiction::RankMismatch => "RankMismatch",
            Contradiction::LocalOrderUnrealizable => "LocalOrderUnrealizable",
            Contradiction::EulerMismatch => "EulerMismatch",
            Contradiction::NonGorensteinForced => "NonGorensteinForced",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FilterVerdict {
    Ok,
    Contradiction { reason: Contradiction, detail: String },
}

impl FilterVerdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, FilterVerdict::Ok)
    }

    pub fn reason(&self) -> Option<Contradiction> {
        match self {
            FilterVerdict::Ok => None,
            FilterVerdict::Contradiction { reason, .. } => Some(*reason),
        }
    }
}

fn contradiction(reason: Contradiction, detail: String) -> FilterVerdict {
    FilterVerdict::Contradiction { reason, detail }
}

// ---------------------------------------------------------------------------
// Consistency
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConsistencyFailure {
    DegreeOutOfRange,
    RankMismatch,
    EulerMismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub degree_in_range: bool,
    pub rank: u32,
    pub expected_rank: i64,
    /// `12 - d - rank`
    pub euler: i64,
    pub pass: bool,
    pub failure: Option<ConsistencyFailure>,
}

impl ConsistencyReport {
    pub fn to_json(&self) -> Value {
        json!({
            "degree_in_range": self.degree_in_range,
            "rank": self.rank,
            "expected_rank": self.expected_rank,
            "euler": self.euler,
            "pass": self.pass,
            "failure": self.failure.map(|f| format!("{f:?}")),
        })
    }
}

pub fn consistency(p: &SurfaceProfile) -> ConsistencyReport {
    let d = p.d as i64;
    let rank = p.config.rank();
    let degree_in_range = (1..=9).contains(&d);
    let expected_rank = 9 - d;
    let euler = 12 - d - rank as i64;
    let failure = if !degree_in_range {
        Some(ConsistencyFailure::DegreeOutOfRange)
    } else if rank as i64 != expected_rank {
        Some(ConsistencyFailure::RankMismatch)
    } else if euler != 3 || p.chi != 3 {
        Some(ConsistencyFailure::EulerMismatch)
    } else {
        None
    };
    ConsistencyReport { degree_in_range, rank, expected_rank, euler, pass: failure.is_none(), failure }
}

// ---------------------------------------------------------------------------
// Cover hypotheses
// ---------------------------------------------------------------------------

/// One preimage of a bottom singular point: local degree `n_j` of the cover
/// there and local order `m_j` of the top surface (1 for a smooth point).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Part {
    pub local_degree: u64,
    pub top_order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BottomPoint {
    pub kind: DynkinType,
    pub parts: Vec<Part>,
}

impl BottomPoint {
    fn to_json(&self) -> Value {
        json!({
            "type": self.kind.to_string(),
            "parts": self.parts.iter().map(|p| json!([p.local_degree, p.top_order])).collect::<Vec<_>>(),
        })
    }
}

/// A degree-`n` cover `top -> bottom`, étale over the smooth locus of the
/// bottom, with the fibre over every bottom singular point spelled out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverHypothesis {
    pub top: SurfaceProfile,
    pub degree: u64,
    pub bottom: Vec<BottomPoint>,
}

impl CoverHypothesis {
    pub fn bottom_config(&self) -> SingularityConfig {
        SingularityConfig::new(self.bottom.iter().map(|b| b.kind).collect())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "top": self.top.name,
            "degree": self.degree,
            "bottom": self.bottom.iter().map(BottomPoint::to_json).collect::<Vec<_>>(),
        })
    }
}

pub fn cover_filter(h: &CoverHypothesis) -> FilterVerdict {
    let n = h.degree;
    let d_top = h.top.d as u64;
    if n == 0 || d_top % n != 0 {
        return contradiction(Contradiction::K2NotInteger, format!("K2 = {d_top}/{n} is not an integer"));
    }
    let d = d_top / n;

    let config = h.bottom_config();
    let rank = config.rank() as u64;
    if rank + d != 9 {
        return contradiction(
            Contradiction::RankMismatch,
            format!("rank({config}) = {rank} but a degree {d} surface needs rank {}", 9 - d as i64),
        );
    }

    for b in &h.bottom {
        let t = b.kind.local_pi1_order();
        if let Some(p) = b.parts.iter().find(|p| p.local_degree * p.top_order != t) {
            return contradiction(
                Contradiction::LocalOrderUnrealizable,
                format!("{} has order {t} but a preimage gives {}*{}", b.kind, p.local_degree, p.top_order),
            );
        }
        if !types_with_order(t).contains(&b.kind) {
            return contradiction(Contradiction::LocalOrderUnrealizable, format!("no type of order {t} is {}", b.kind));
        }
        let sum: u64 = b.parts.iter().map(|p| p.local_degree).sum();
        if sum != n {
            return contradiction(
                Contradiction::LocalOrderUnrealizable,
                format!("local degrees over {} sum to {sum}, not {n}", b.kind),
            );
        }
    }
    let mut upstairs: Vec<u64> = h.bottom.iter().flat_map(|b| b.parts.iter().map(|p| p.top_order)).filter(|&m| m > 1).collect();
    let mut expected = h.top.local_orders();
    upstairs.sort_unstable();
    expected.sort_unstable();
    if upstairs != expected {
        return contradiction(
            Contradiction::LocalOrderUnrealizable,
            format!("singular preimages have orders {upstairs:?}, the top has {expected:?}"),
        );
    }

    let preimages: i64 = h.bottom.iter().map(|b| b.parts.len() as i64).sum();
    let s = h.bottom.len() as i64;
    let lhs = h.top.chi - preimages;
    let rhs = n as i64 * (3 - s);
    if lhs != rhs {
        return contradiction(Contradiction::EulerMismatch, format!("{} - {preimages} = {lhs} but {n}*(3 - {s}) = {rhs}", h.top.chi));
    }
    FilterVerdict::Ok
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

/// Case label for a (top, degree) pair, as numbered in the classification.
pub fn paper_case(top: &SurfaceProfile, degree: u64) -> Option<&'static str> {
    match (top.name.as_str(), degree) {
        ("P2", 3) => Some("1.1"),
        ("P2", 9) => Some("1.2"),
        ("Q", 2) => Some("2.1"),
        ("Q", 4) => Some("2.2"),
        ("Q", 8) => Some("2.3"),
        ("V3", 2) => Some("A1+A2.1"),
        ("V3", 3) => Some("A1+A2.2"),
        ("V3", 6) => Some("A1+A2.3"),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Survivor {
    pub degree: u64,
    pub k2: u64,
    pub config: SingularityConfig,
    pub paper_case: Option<&'static str>,
    pub hypothesis: CoverHypothesis,
}

impl Survivor {
    pub fn bottom_profile(&self) -> SurfaceProfile {
        SurfaceProfile {
            name: format!("{}/{}", self.hypothesis.top.name, self.degree),
            d: self.k2 as u32,
            config: self.config.clone(),
            chi: 3,
            smooth_locus_simply_connected: false,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "k2": self.k2,
            "config": self.config.labels(),
            "paper_case": self.paper_case,
            "assignment": self.hypothesis.to_json()["bottom"],
        })
    }
}

/// A rejected hypothesis. For contradictions detected before the bottom is
/// complete, `config` holds only the forced points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exclusion {
    pub degree: u64,
    pub config: SingularityConfig,
    pub reason: Contradiction,
    pub detail: String,
    pub paper_case: Option<&'static str>,
}

impl Exclusion {
    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "config": self.config.labels(),
            "reason": self.reason.to_string(),
            "detail": self.detail,
            "paper_case": self.paper_case,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub top: SurfaceProfile,
    pub degrees: Vec<u64>,
    pub survivors: Vec<Survivor>,
    pub exclusions: Vec<Exclusion>,
}

impl Enumeration {
    pub fn survivor_pairs(&self) -> Vec<(u64, SingularityConfig)> {
        self.survivors.iter().map(|s| (s.degree, s.config.clone())).collect()
    }

    pub fn exclusions_for(&self, degree: u64) -> impl Iterator<Item = &Exclusion> {
        self.exclusions.iter().filter(move |e| e.degree == degree)
    }

    pub fn to_json(&self, degree: Option<u64>) -> Value {
        let keep = |d: u64| degree.map_or(true, |x| x == d);
        json!({
            "top": self.top.name,
            "top_config": self.top.config.labels(),
            "top_k2": self.top.d,
            "degree": degree,
            "survivors": self.survivors.iter().filter(|s| keep(s.degree)).map(Survivor::to_json).collect::<Vec<_>>(),
            "exclusions": self.exclusions.iter().filter(|e| keep(e.degree)).map(Exclusion::to_json).collect::<Vec<_>>(),
        })
    }
}

fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    match items.split_first() {
        None => vec![vec![]],
        Some((&first, rest)) => {
            let mut out = Vec::new();
            for p in set_partitions(rest) {
                for i in 0..p.len() {
                    let mut q = p.clone();
                    q[i].insert(0, first);
                    out.push(q);
                }
                let mut q = p;
                q.insert(0, vec![first]);
                out.push(q);
            }
            out
        }
    }
}

/// Ways to place the top points with local orders `ms` over a single bottom
/// point of a degree-`n` cover: `(T, k)` with `Σ T/m_j + k T = n`, where `k`
/// counts the extra smooth preimages.
fn block_options(ms: &[u64], n: u64) -> Vec<(u64, u64)> {
    let lcm = ms.iter().fold(1u64, |a, &b| num_integer::lcm(a, b));
    let max_t = n * ms.iter().copied().min().unwrap_or(1);
    let mut out = Vec::new();
    let mut t = lcm;
    while t <= max_t {
        let s: u64 = ms.iter().map(|m| t / m).sum();
        if s <= n && (n - s) % t == 0 {
            out.push((t, (n - s) / t));
        }
        t += lcm;
    }
    out
}

fn multisets_of_rank(cands: &[DynkinType], rank: u32, from: usize, acc: &mut Vec<DynkinType>, out: &mut Vec<Vec<DynkinType>>) {
    if rank == 0 {
        out.push(acc.clone());
        return;
    }
    for i in from..cands.len() {
        let r = cands[i].rank();
        if r <= rank {
            acc.push(cands[i]);
            multisets_of_rank(cands, rank - r, i, acc, out);
            acc.pop();
        }
    }
}

fn cartesian<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    lists.iter().fold(vec![vec![]], |acc, l| {
        acc.iter()
            .flat_map(|prefix| {
                l.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect()
    })
}

struct Collector {
    survivors: Vec<Survivor>,
    exclusions: Vec<Exclusion>,
    seen_survivors: BTreeSet<(u64, SingularityConfig)>,
    seen_exclusions: BTreeSet<(u64, SingularityConfig, Contradiction)>,
}

impl Collector {
    fn exclude(&mut self, top: &SurfaceProfile, degree: u64, config: SingularityConfig, verdict: FilterVerdict) {
        if let FilterVerdict::Contradiction { reason, detail } = verdict {
            if self.seen_exclusions.insert((degree, config.clone(), reason)) {
                self.exclusions.push(Exclusion { degree, config, reason, detail, paper_case: paper_case(top, degree) });
            }
        }
    }
}

/// All hypotheses of degree `n` over `top`, filtered.
fn enumerate_degree(top: &SurfaceProfile, n: u64, out: &mut Collector) {
    let d_top = top.d as u64;
    if d_top % n != 0 {
        let verdict = cover_filter(&CoverHypothesis { top: top.clone(), degree: n, bottom: vec![] });
        out.exclude(top, n, SingularityConfig::empty(), verdict);
        return;
    }
    let target_rank = 9 - (d_top / n) as u32;
    let orders = top.local_orders();
    let idx: Vec<usize> = (0..orders.len()).collect();
    let space = DynkinType::search_space();

    for blocks in set_partitions(&idx) {
        let options: Vec<Vec<(u64, u64)>> =
            blocks.iter().map(|b| block_options(&b.iter().map(|&i| orders[i]).collect::<Vec<_>>(), n)).collect();
        if options.iter().any(Vec::is_empty) {
            continue;
        }
        for choice in cartesian(&options) {
            // Every forced point needs a du Val type of the right order.
            let mut type_lists = Vec::new();
            let mut unrealizable = None;
            for &(t, _) in &choice {
                let ts = types_with_order(t);
                if ts.is_empty() {
                    unrealizable = Some(t);
                    break;
                }
                type_lists.push(ts);
            }
            if let Some(t) = unrealizable {
                let detail = format!("a top point is forced over a point of local order {t}, which no du Val type in range has");
                let forced: Vec<DynkinType> = type_lists.iter().map(|l| l[0]).collect();
                out.exclude(
                    top,
                    n,
                    SingularityConfig::new(forced),
                    contradiction(Contradiction::NonGorensteinForced, detail),
                );
                continue;
            }
            for kinds in cartesian(&type_lists) {
                let forced: Vec<BottomPoint> = blocks
                    .iter()
                    .zip(&choice)
                    .zip(&kinds)
                    .map(|((block, &(t, k)), &kind)| {
                        let mut parts: Vec<Part> =
                            block.iter().map(|&i| Part { local_degree: t / orders[i], top_order: orders[i] }).collect();
                        parts.extend((0..k).map(|_| Part { local_degree: t, top_order: 1 }));
                        parts.sort();
                        BottomPoint { kind, parts }
                    })
                    .collect();
                let forced_rank: u32 = forced.iter().map(|b| b.kind.rank()).sum();
                if forced_rank > target_rank {
                    let h = CoverHypothesis { top: top.clone(), degree: n, bottom: forced };
                    let cfg = h.bottom_config();
                    out.exclude(top, n, cfg, cover_filter(&h));
                    continue;
                }
                // Remaining bottom points only have smooth preimages, so T | n.
                let extras: Vec<DynkinType> = space
                    .iter()
                    .copied()
                    .filter(|t| {
                        let o = t.local_pi1_order();
                        n % o == 0 && t.rank() <= target_rank - forced_rank
                    })
                    .collect();
                let mut fills = Vec::new();
                multisets_of_rank(&extras, target_rank - forced_rank, 0, &mut vec![], &mut fills);
                for fill in fills {
                    let mut bottom = forced.clone();
                    for kind in fill {
                        let t = kind.local_pi1_order();
                        bottom.push(BottomPoint { kind, parts: vec![Part { local_degree: t, top_order: 1 }; (n / t) as usize] });
                    }
                    bottom.sort();
                    let h = CoverHypothesis { top: top.clone(), degree: n, bottom };
                    let config = h.bottom_config();
                    match cover_filter(&h) {
                        FilterVerdict::Ok => {
                            if out.seen_survivors.insert((n, config.clone())) {
                                out.survivors.push(Survivor {
                                    degree: n,
                                    k2: d_top / n,
                                    config,
                                    paper_case: paper_case(top, n),
                                    hypothesis: h,
                                });
                            }
                        }
                        v => out.exclude(top, n, config, v),
                    }
                }
            }
        }
    }
}

/// Covers of every degree `2..=max(d, 2)` over `top`.
pub fn enumerate_quotients(top: &SurfaceProfile) -> Enumeration {
    let degrees: Vec<u64> = (2..=(top.d as u64).max(2)).collect();
    enumerate_quotients_of_degrees(top, &degrees)
}

pub fn enumerate_quotients_of_degrees(top: &SurfaceProfile, degrees: &[u64]) -> Enumeration {
    let mut c = Collector {
        survivors: vec![],
        exclusions: vec![],
        seen_survivors: BTreeSet::new(),
        seen_exclusions: BTreeSet::new(),
    };
    for &n in degrees {
        if n >= 2 {
            enumerate_degree(top, n, &mut c);
        }
    }
    c.survivors.sort_by(|a, b| (a.degree, &a.config).cmp(&(b.degree, &b.config)));
    c.exclusions.sort_by(|a, b| (a.degree, &a.config, a.reason).cmp(&(b.degree, &b.config, b.reason)));
    Enumeration { top: top.clone(), degrees: degrees.to_vec(), survivors: c.survivors, exclusions: c.exclusions }
}

// ---------------------------------------------------------------------------
// Ramification
// ---------------------------------------------------------------------------

/// Branch data `(e, δ)`: ramification index and the class `δ(-K_V)` of the
/// branch curve.
pub type BranchDatum = (u64, u64);

/// `Σ (e-1)/e · δ`
pub fn branch_weight(data: &[BranchDatum]) -> Ratio<i64> {
    data.iter().map(|&(e, delta)| Ratio::new((e as i64 - 1) * delta as i64, e as i64)).sum()
}

/// The pullback of `-K_V` minus the ramification divisor has to stay ample.
pub fn branch_data_feasible(data: &[BranchDatum]) -> bool {
    data.iter().all(|&(e, delta)| e >= 2 && delta >= 1) && branch_weight(data) < Ratio::from_integer(1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RamificationReport {
    pub d: u32,
    pub max_index: u64,
    pub feasible: Vec<Vec<BranchDatum>>,
    pub conclusion: String,
}

impl RamificationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "d": self.d,
            "max_index": self.max_index,
            "feasible": self.feasible.iter().map(|m| m.iter().map(|&(e, delta)| json!({"e": e, "delta": delta})).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "conclusion": self.conclusion,
        })
    }
}

pub const DEFAULT_MAX_RAMIFICATION: u64 = 12;

fn branch_multisets(max_e: u64, from: (u64, u64), acc: &mut Vec<BranchDatum>, out: &mut Vec<Vec<BranchDatum>>) {
    out.push(acc.clone());
    for e in from.0..=max_e {
        let start = if e == from.0 { from.1 } else { 1 };
        let mut delta = start;
        loop {
            acc.push((e, delta));
            let ok = branch_data_feasible(acc);
            if ok {
                branch_multisets(max_e, (e, delta), acc, out);
            }
            acc.pop();
            if !ok {
                break;
            }
            delta += 1;
        }
    }
}

/// Feasible multisets of branch data with indices up to `max_e`. The bound
/// on δ comes from the inequality itself.
pub fn ramification_constraints(d: u32, max_e: u64) -> Result<RamificationReport, String> {
    if d == 0 {
        return Err("bottom degree must be at least 1".into());
    }
    let mut feasible = Vec::new();
    branch_multisets(max_e, (2, 1), &mut vec![], &mut feasible);
    feasible.sort();
    let only_simple = feasible.iter().all(|m| m.len() <= 1 && m.iter().all(|&(_, delta)| delta == 1));
    let conclusion = if only_simple {
        "any branch curve is irreducible and lies in |-K_V|".to_string()
    } else {
        "branch data with several components survive".to_string()
    };
    Ok(RamificationReport { d, max_index: max_e, feasible, conclusion })
}

// ---------------------------------------------------------------------------
// Built-in actions against the enumeration
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionCheck {
    pub action: String,
    pub group_order: usize,
    pub k2: Ratio<i64>,
    pub config: SingularityConfig,
    /// Row of the table that `P²/R` matches, `R` the subgroup generated by reflections.
    pub top: Option<String>,
    pub degree: usize,
    pub agrees: bool,
    /// `(3 - #points of P²/R over singular points, |G/R| (3 - s))`.
    pub quasi_etale_euler: (i64, i64),
}

impl ActionCheck {
    pub fn to_json(&self) -> Value {
        let k2 = if self.k2.is_integer() { json!(self.k2.to_integer()) } else { json!(self.k2.to_string()) };
        json!({
            "action": self.action,
            "group_order": self.group_order,
            "k2": k2,
            "config": self.config.labels(),
            "top": self.top,
            "degree": self.degree,
            "agrees": self.agrees,
            "quasi_etale_euler": [self.quasi_etale_euler.0, self.quasi_etale_euler.1],
        })
    }
}

/// Subgroup generated by the elements fixing a line pointwise.
pub fn reflection_subgroup(g: &FiniteActionGroup) -> Result<FiniteActionGroup, ActionError> {
    let mut refl = Vec::new();
    for x in g.elements().iter().filter(|x| !x.is_identity()) {
        if fixed_locus(x)?.line.is_some() {
            refl.push(*x);
        }
    }
    close_group(&refl, DEFAULT_GROUP_CAP)
}

/// Euler count for `P²/R -> P²/G`, which is étale off finitely many points.
pub fn quasi_etale_euler(prof: &QuotientProfile, r: &FiniteActionGroup) -> Result<(i64, i64), ActionError> {
    let mut upstairs = 0i64;
    for o in prof.singular_orbits() {
        let r_p = stabilizer(r, &o.representative)?.len();
        upstairs += (o.size * r_p / r.order()) as i64;
    }
    let s = prof.singular_orbits().count() as i64;
    Ok((3 - upstairs, (prof.group_order / r.order()) as i64 * (3 - s)))
}

fn matches_row(k2: Ratio<i64>, config: &SingularityConfig) -> Option<SurfaceProfile> {
    lemma1_table().rows.into_iter().find(|r| Ratio::from_integer(r.d as i64) == k2 && &r.config == config)
}

/// For every built-in action, factor `P² -> P²/R -> P²/G` and look up the
/// quotient among the survivors over `P²/R` (or the row itself when `R = G`).
pub fn builtin_cross_check() -> Result<Vec<ActionCheck>, ActionError> {
    let mut out = Vec::new();
    for a in builtin_actions() {
        let g = close_group(&a.generators, DEFAULT_GROUP_CAP)?;
        let prof = quotient_profile(&g)?;
        let r = reflection_subgroup(&g)?;
        let top_prof = quotient_profile(&r)?;
        let top = matches_row(top_prof.k2, &top_prof.config);
        let degree = g.order() / r.order();
        let quasi_etale_euler = quasi_etale_euler(&prof, &r)?;
        let agrees = match &top {
            None => false,
            Some(t) if degree == 1 => Ratio::from_integer(t.d as i64) == prof.k2 && t.config == prof.config,
            Some(t) => enumerate_quotients_of_degrees(t, &[degree as u64])
                .survivors
                .iter()
                .any(|s| Ratio::from_integer(s.k2 as i64) == prof.k2 && s.config == prof.config),
        };
        out.push(ActionCheck {
            action: a.name,
            group_order: g.order(),
            k2: prof.k2,
            config: prof.config,
            top: top.map(|t| t.name),
            degree,
            agrees,
            quasi_etale_euler,
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Final report
// ---------------------------------------------------------------------------

pub const STATUS_REALIZED: &str = "quotient realized";
pub const STATUS_NOT_DOMINATED: &str = "not dominated";
pub const STATUS_OPEN: &str = "not a quotient, domination open";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceStatus {
    pub name: String,
    pub d: u32,
    pub config: SingularityConfig,
    pub status: &'static str,
    pub actions: Vec<String>,
    pub certificate: String,
}

#[derive(Clone, Debug)]
pub struct Theorem1Report {
    pub candidates: Vec<String>,
    pub statuses: Vec<SurfaceStatus>,
    pub enumerations: Vec<Enumeration>,
    pub quotients: Vec<ActionCheck>,
    pub ramification: RamificationReport,
    pub assumptions: Vec<String>,
}

impl Theorem1Report {
    pub fn status_of(&self, name: &str) -> Option<&str> {
        self.statuses.iter().find(|s| s.name == name).map(|s| s.status)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "candidates": self.candidates,
            "surfaces": self.statuses.iter().map(|s| json!({
                "name": s.name,
                "d": s.d,
                "config": s.config.labels(),
                "status": s.status,
                "actions": s.actions,
                "certificate": s.certificate,
            })).collect::<Vec<_>>(),
            "covers": self.enumerations.iter().map(|e| json!({
                "top": e.top.name,
                "degrees": e.degrees,
                "survivors": e.survivors.iter().map(Survivor::to_json).collect::<Vec<_>>(),
                "exclusions": e.exclusions.iter().map(Exclusion::to_json).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "quotients": self.quotients.iter().map(ActionCheck::to_json).collect::<Vec<_>>(),
            "ramification": self.ramification.to_json(),
            "assumptions": self.assumptions,
        })
    }
}

fn hom_certificate(i: u32) -> String {
    let p = mumford_presentation(i as i64).expect("index in range");
    let d = 9 - i as u64;
    let ab = abelianization(&p);
    let homs = hom_count_cyclic(&p, d);
    format!("boundary group has abelianization {ab}; |Hom(G, Z/{d})| = {homs}, so the class group has {d}-torsion")
}

pub fn theorem1_report() -> Result<Theorem1Report, ActionError> {
    let table = lemma1_table();
    let enumerations: Vec<Enumeration> = table.rows.iter().map(enumerate_quotients).collect();
    let quotients = builtin_cross_check()?;
    let ramification = ramification_constraints(1, DEFAULT_MAX_RAMIFICATION).expect("d >= 1");

    let mut statuses = Vec::new();
    for row in &table.rows {
        let actions: Vec<String> = quotients
            .iter()
            .filter(|q| q.degree == 1 && q.top.as_deref() == Some(row.name.as_str()))
            .map(|q| q.action.clone())
            .collect();
        let (status, actions, certificate) = match row.name.as_str() {
            "P2" => (STATUS_REALIZED, vec!["trivial".to_string()], "P2 = P2/1".to_string()),
            "Q" | "V3" => (STATUS_REALIZED, actions, "quotient profile of the action equals the row".to_string()),
            "V8" => (
                STATUS_NOT_DOMINATED,
                vec![],
                "an E8 top admits no cover of degree >= 2 (n*1 = 1), so a dominating P2 would be an isomorphism".to_string(),
            ),
            "V8'" => (
                STATUS_OPEN,
                vec![],
                format!(
                    "no cover of degree >= 2; branch data restricted to {}; complement of the anticanonical curve assumed simply connected",
                    ramification.conclusion
                ),
            ),
            name => {
                let i: u32 = name[1..].parse().expect("V<i>");
                (STATUS_NOT_DOMINATED, vec![], hom_certificate(i))
            }
        };
        statuses.push(SurfaceStatus { name: row.name.clone(), d: row.d, config: row.config.clone(), status, actions, certificate });
    }
    for q in quotients.iter().filter(|q| q.degree > 1) {
        statuses.push(SurfaceStatus {
            name: format!("{}/{}", q.top.clone().unwrap_or_default(), q.action),
            d: q.k2.to_integer() as u32,
            config: q.config.clone(),
            status: STATUS_REALIZED,
            actions: vec![q.action.clone()],
            certificate: format!("survivor of degree {} over {}", q.degree, q.top.clone().unwrap_or_default()),
        });
    }

    Ok(Theorem1Report {
        candidates: ["P2", "Q", "V3", "V8", "V8'"].map(String::from).to_vec(),
        statuses,
        enumerations,
        quotients,
        ramification,
        assumptions: vec![
            "every surface considered has a quasi-universal cover".to_string(),
            "for V8' the complement of the cuspidal anticanonical curve is simply connected".to_string(),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairs(e: &Enumeration) -> Vec<(u64, String)> {
        e.survivors.iter().map(|s| (s.degree, s.config.to_string())).collect()
    }

    #[test]
    fn table_rows() {
        let t = lemma1_table();
        let got: Vec<(String, u32)> = t.rows.iter().map(|r| (r.config.to_string(), r.d)).collect();
        assert_eq!(got[1], ("A1".to_string(), 8));
        assert_eq!(got[2], ("A2+A1".to_string(), 6));
        assert_eq!(got.last().unwrap(), &("E8".to_string(), 1));
        assert_eq!(t.impossible_degrees, vec![7]);
        assert!(t.rows.iter().all(|r| consistency(r).pass));
        let bad = SurfaceProfile::new("x", 6, cfg("2A1"));
        assert_eq!(consistency(&bad).failure, Some(ConsistencyFailure::RankMismatch));
    }

    #[test]
    fn plane_and_cone() {
        let p2 = enumerate_quotients(&find_top("P2").unwrap());
        assert_eq!(pairs(&p2), vec![(3, "3A2".into()), (9, "4A2".into())]);
        let a8 = p2.exclusions.iter().find(|e| e.config == cfg("A8")).unwrap();
        assert_eq!(a8.reason, Contradiction::EulerMismatch);
        assert_eq!(a8.paper_case, Some("1.2"));

        let q = enumerate_quotients(&find_top("Q").unwrap());
        assert_eq!(pairs(&q), vec![(2, "A3+2A1".into()), (4, "D4+3A1".into())]);
        let d6 = q.exclusions.iter().find(|e| e.config == cfg("D6+2A1")).unwrap();
        assert_eq!((d6.degree, d6.reason, d6.paper_case), (8, Contradiction::EulerMismatch, Some("2.3")));
    }

    #[test]
    fn a1_a2_top_has_no_quotient() {
        let e = enumerate_quotients(&find_top("A1+A2").unwrap());
        assert!(e.survivors.is_empty());
        // The order-3 point forces A5, A8, A17 below it; every exclusion
        // carrying that type is a rank failure.
        for (n, t) in [(2, DynkinType::A(5)), (3, DynkinType::A(8)), (6, DynkinType::A(17))] {
            let xs: Vec<_> = e.exclusions_for(n).filter(|x| x.config.count(t) > 0).collect();
            assert!(!xs.is_empty(), "{n}");
            assert!(xs.iter().all(|x| x.reason == Contradiction::RankMismatch));
            assert!(xs.iter().all(|x| x.paper_case.is_some()));
        }
        let case1 = e.exclusions_for(2).find(|x| x.config == cfg("A5+A3")).unwrap();
        assert_eq!(case1.reason, Contradiction::RankMismatch);
    }

    #[test]
    fn filter_examples() {
        let p2 = find_top("P2").unwrap();
        let h = CoverHypothesis {
            top: p2,
            degree: 9,
            bottom: vec![BottomPoint { kind: DynkinType::A(8), parts: vec![Part { local_degree: 9, top_order: 1 }] }],
        };
        assert_eq!(cover_filter(&h).reason(), Some(Contradiction::EulerMismatch));
    }

    #[test]
    fn ramification() {
        let r = ramification_constraints(3, 6).unwrap();
        let mut expected = vec![vec![]];
        expected.extend((2..=6).map(|e| vec![(e, 1)]));
        assert_eq!(r.feasible, expected);
        assert!(!branch_data_feasible(&[(2, 1), (2, 1)]));
        assert!(!branch_data_feasible(&[(3, 2)]));
    }

    #[test]
    fn builtins_agree() {
        let checks = builtin_cross_check().unwrap();
        assert!(checks.iter().all(|c| c.agrees), "{checks:?}");
        assert!(checks.iter().all(|c| c.quasi_etale_euler.0 == c.quasi_etale_euler.1), "{checks:?}");
    }

    #[test]
    fn statuses() {
        let r = theorem1_report().unwrap();
        assert_eq!(r.status_of("V8"), Some(STATUS_NOT_DOMINATED));
        assert_eq!(r.status_of("V8'"), Some(STATUS_OPEN));
        assert_eq!(r.status_of("V3"), Some(STATUS_REALIZED));
    }
}
