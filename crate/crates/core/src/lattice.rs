//! ADE Dynkin types, curve configurations and the blow-down calculus.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest `A_n` considered by searches over ADE types.
pub const MAX_A_RANK: u32 = 24;
/// Largest `D_n` considered by searches over ADE types.
pub const MAX_D_RANK: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("invalid Dynkin type `{0}`")]
    InvalidType(String),
    #[error("malformed curve configuration: {0}")]
    Malformed(String),
    #[error("curve {label} has self-intersection {value}, only (-1)-curves can be blown down")]
    NotExceptional { label: String, value: i64 },
    #[error("curve index {0} out of range")]
    NoSuchCurve(usize),
}

/// A simply-laced Dynkin type: `A_n (n>=1)`, `D_n (n>=4)` or `E_6, E_7, E_8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DynkinType {
    A(u32),
    D(u32),
    E(u32),
}

impl DynkinType {
    pub fn checked(self) -> Result<Self, LatticeError> {
        let ok = match self {
            DynkinType::A(n) => n >= 1,
            DynkinType::D(n) => n >= 4,
            DynkinType::E(n) => (6..=8).contains(&n),
        };
        if ok {
            Ok(self)
        } else {
            Err(LatticeError::InvalidType(self.to_string()))
        }
    }

    pub fn rank(&self) -> u32 {
        match *self {
            DynkinType::A(n) | DynkinType::D(n) | DynkinType::E(n) => n,
        }
    }

    /// Edges of the Dynkin diagram on vertices `0..rank` (Bourbaki numbering).
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.rank() as usize;
        match *self {
            DynkinType::A(_) => (1..n).map(|i| (i - 1, i)).collect(),
            DynkinType::D(_) => {
                let mut e: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
                e.push((n - 3, n - 1));
                e
            }
            DynkinType::E(_) => {
                // chain 1-3-4-...-n, node 2 attached to node 4
                let mut e = vec![(0, 2), (1, 3)];
                e.extend((3..n).map(|i| (i - 1, i)));
                e
            }
        }
    }

    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.rank() as usize;
        let mut m = vec![vec![0i64; n]; n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 2;
        }
        for (a, b) in self.edges() {
            m[a][b] = -1;
            m[b][a] = -1;
        }
        m
    }

    /// Configuration of `(-2)`-curves whose dual graph is this diagram.
    pub fn dual_graph(&self) -> CurveConfig {
        let matrix = self
            .cartan_matrix()
            .into_iter()
            .map(|row| row.into_iter().map(|x| -x).collect())
            .collect();
        let labels = (1..=self.rank()).map(|i| format!("{self}_{i}")).collect();
        CurveConfig { labels, matrix, multiplicities: None }
    }

    /// Order of the binary polyhedral group of the singularity.
    pub fn local_pi1_order(&self) -> u64 {
        match *self {
            DynkinType::A(n) => n as u64 + 1,
            DynkinType::D(n) => 4 * (n as u64 - 2),
            DynkinType::E(6) => 24,
            DynkinType::E(7) => 48,
            DynkinType::E(_) => 120,
        }
    }

    /// All types inside the search bounds, in canonical order.
    pub fn search_space() -> Vec<DynkinType> {
        let mut v: Vec<_> = (1..=MAX_A_RANK).map(DynkinType::A).collect();
        v.extend((4..=MAX_D_RANK).map(DynkinType::D));
        v.extend((6..=8).map(DynkinType::E));
        v
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinType::A(n) => write!(f, "A{n}"),
            DynkinType::D(n) => write!(f, "D{n}"),
            DynkinType::E(n) => write!(f, "E{n}"),
        }
    }
}

impl FromStr for DynkinType {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || LatticeError::InvalidType(s.to_string());
        let mut chars = s.chars();
        let family = chars.next().ok_or_else(bad)?;
        let n: u32 = chars.as_str().parse().map_err(|_| bad())?;
        let t = match family.to_ascii_uppercase() {
            'A' => DynkinType::A(n),
            'D' => DynkinType::D(n),
            'E' => DynkinType::E(n),
            _ => return Err(bad()),
        };
        t.checked()
    }
}

impl Serialize for DynkinType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for DynkinType {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Determinant of a square integer matrix by fraction-free (Bareiss) elimination.
pub fn integer_determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Determinant of the Cartan matrix, computed from the matrix itself.
pub fn cartan_determinant(t: DynkinType) -> i64 {
    integer_determinant(&t.cartan_matrix()) as i64
}

pub fn local_pi1_order(t: DynkinType) -> u64 {
    t.local_pi1_order()
}

/// Every ADE type in the search space whose local fundamental group has order `n`.
pub fn types_with_order(n: u64) -> Vec<DynkinType> {
    DynkinType::search_space().into_iter().filter(|t| t.local_pi1_order() == n).collect()
}

// ---------------------------------------------------------------------------
// Singularity configurations
// ---------------------------------------------------------------------------

/// A multiset of Dynkin types, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SingularityConfig(Vec<DynkinType>);

impl SingularityConfig {
    pub fn new(mut types: Vec<DynkinType>) -> Self {
        types.sort();
        Self(types)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn types(&self) -> &[DynkinType] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn rank(&self) -> u32 {
        self.0.iter().map(DynkinType::rank).sum()
    }

    pub fn orders(&self) -> Vec<u64> {
        self.0.iter().map(DynkinType::local_pi1_order).collect()
    }

    pub fn with(&self, t: DynkinType) -> Self {
        let mut v = self.0.clone();
        v.push(t);
        Self::new(v)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self::new(v)
    }

    /// Type names, largest first (`["D4", "A1", "A1", "A1"]`).
    pub fn labels(&self) -> Vec<String> {
        self.0.iter().rev().map(|t| t.to_string()).collect()
    }

    pub fn count(&self, t: DynkinType) -> usize {
        self.0.iter().filter(|&&x| x == t).count()
    }
}

pub fn config_rank(s: &SingularityConfig) -> u32 {
    s.rank()
}

pub fn config_order(s: &SingularityConfig) -> Vec<u64> {
    s.orders()
}

/// Compact form such as `A1+A2`, `D4+3A1`; the empty configuration prints as `smooth`.
impl fmt::Display for SingularityConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("smooth");
        }
        let mut counts: BTreeMap<DynkinType, usize> = BTreeMap::new();
        for t in &self.0 {
            *counts.entry(*t).or_default() += 1;
        }
        // Larger types first, the way configurations are usually written.
        let parts: Vec<String> = counts
            .iter()
            .rev()
            .map(|(t, &c)| if c == 1 { t.to_string() } else { format!("{c}{t}") })
            .collect();
        f.write_str(&parts.join("+"))
    }
}

impl FromStr for SingularityConfig {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "smooth" {
            return Ok(Self::empty());
        }
        let mut v = Vec::new();
        for part in s.split('+') {
            let part = part.trim();
            let split = part.find(|c: char| c.is_ascii_alphabetic()).ok_or_else(|| LatticeError::InvalidType(part.into()))?;
            let count: usize = if split == 0 {
                1
            } else {
                part[..split].parse().map_err(|_| LatticeError::InvalidType(part.into()))?
            };
            let t: DynkinType = part[split..].parse()?;
            v.extend(std::iter::repeat_n(t, count));
        }
        Ok(Self::new(v))
    }
}

impl Serialize for SingularityConfig {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SingularityConfig {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Self::new(Vec::<DynkinType>::deserialize(d)?))
    }
}

// ---------------------------------------------------------------------------
// Curve configurations
// ---------------------------------------------------------------------------

/// Named curves with their intersection matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveConfig {
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicities: Option<Vec<i64>>,
}

impl CurveConfig {
    pub fn new(labels: Vec<String>, matrix: Vec<Vec<i64>>, multiplicities: Option<Vec<i64>>) -> Result<Self, LatticeError> {
        let c = Self { labels, matrix, multiplicities };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), LatticeError> {
        let n = self.labels.len();
        if self.matrix.len() != n || self.matrix.iter().any(|r| r.len() != n) {
            return Err(LatticeError::Malformed(format!("matrix must be {n}x{n}")));
        }
        if let Some(m) = &self.multiplicities {
            if m.len() != n {
                return Err(LatticeError::Malformed("multiplicities length differs from labels".into()));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if self.matrix[i][j] != self.matrix[j][i] {
                    return Err(LatticeError::Malformed(format!("matrix not symmetric at ({i},{j})")));
                }
                if i != j && self.matrix[i][j] < 0 {
                    return Err(LatticeError::Malformed(format!("negative intersection at ({i},{j})")));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn self_intersection(&self, i: usize) -> i64 {
        self.matrix[i][i]
    }

    /// Configuration restricted to the given curve indices (in the given order).
    pub fn restrict(&self, keep: &[usize]) -> CurveConfig {
        CurveConfig {
            labels: keep.iter().map(|&i| self.labels[i].clone()).collect(),
            matrix: keep.iter().map(|&i| keep.iter().map(|&j| self.matrix[i][j]).collect()).collect(),
            multiplicities: self.multiplicities.as_ref().map(|m| keep.iter().map(|&i| m[i]).collect()),
        }
    }

    /// Connected components of the dual graph, each a sorted list of indices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![];
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for w in 0..n {
                    if w != v && !seen[w] && self.matrix[v][w] > 0 {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Why a configuration is not the dual graph of an ADE singularity.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NotAde {
    #[error("empty configuration")]
    Empty,
    #[error("curve {label} has self-intersection {value}, expected -2")]
    WrongSelfIntersection { label: String, value: i64 },
    #[error("curves {a} and {b} meet with multiplicity {value}")]
    MultipleIntersection { a: String, b: String, value: i64 },
    #[error("dual graph is disconnected")]
    Disconnected,
    #[error("dual graph contains a cycle")]
    Cycle,
    #[error("curve {label} meets {degree} other curves")]
    BranchDegree { label: String, degree: usize },
    #[error("dual graph has more than one branch curve")]
    MultipleBranches,
    #[error("branch arms {arms:?} do not form a finite Dynkin diagram")]
    NotFinite { arms: Vec<usize> },
}

fn check_minus_two_simple(c: &CurveConfig) -> Result<(), NotAde> {
    let n = c.len();
    for i in 0..n {
        if c.matrix[i][i] != -2 {
            return Err(NotAde::WrongSelfIntersection { label: c.labels[i].clone(), value: c.matrix[i][i] });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if c.matrix[i][j] > 1 {
                return Err(NotAde::MultipleIntersection {
                    a: c.labels[i].clone(),
                    b: c.labels[j].clone(),
                    value: c.matrix[i][j],
                });
            }
        }
    }
    Ok(())
}

/// Recognizes a connected configuration of `(-2)`-curves as an ADE diagram.
pub fn recognize_dynkin(c: &CurveConfig) -> Result<DynkinType, NotAde> {
    let n = c.len();
    if n == 0 {
        return Err(NotAde::Empty);
    }
    check_minus_two_simple(c)?;
    if c.components().len() > 1 {
        return Err(NotAde::Disconnected);
    }
    let adj: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| j != i && c.matrix[i][j] > 0).collect()).collect();
    let edges: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
    if edges >= n {
        return Err(NotAde::Cycle);
    }
    if let Some(v) = (0..n).find(|&v| adj[v].len() > 3) {
        return Err(NotAde::BranchDegree { label: c.labels[v].clone(), degree: adj[v].len() });
    }
    let branches: Vec<usize> = (0..n).filter(|&v| adj[v].len() == 3).collect();
    match branches.as_slice() {
        [] => Ok(DynkinType::A(n as u32)),
        [center] => {
            let mut arms: Vec<usize> = adj[*center]
                .iter()
                .map(|&start| {
                    // walk away from the center along a chain
                    let (mut prev, mut cur, mut len) = (*center, start, 1);
                    while let Some(&next) = adj[cur].iter().find(|&&w| w != prev) {
                        prev = cur;
                        cur = next;
                        len += 1;
                    }
                    len
                })
                .collect();
            arms.sort_unstable();
            match arms.as_slice() {
                [1, 1, r] => Ok(DynkinType::D(*r as u32 + 3)),
                [1, 2, 2] => Ok(DynkinType::E(6)),
                [1, 2, 3] => Ok(DynkinType::E(7)),
                [1, 2, 4] => Ok(DynkinType::E(8)),
                _ => Err(NotAde::NotFinite { arms }),
            }
        }
        _ => Err(NotAde::MultipleBranches),
    }
}

/// Recognizes every connected component of a `(-2)`-configuration.
pub fn recognize_components(c: &CurveConfig) -> Result<SingularityConfig, NotAde> {
    let mut types = Vec::new();
    for comp in c.components() {
        types.push(recognize_dynkin(&c.restrict(&comp))?);
    }
    Ok(SingularityConfig::new(types))
}

/// Contracts the `(-1)`-curve with index `i`.
///
/// For the remaining curves `C, D`: `C·D ↦ C·D + (C·E)(D·E)`.
pub fn blow_down(c: &CurveConfig, i: usize) -> Result<CurveConfig, LatticeError> {
    if i >= c.len() {
        return Err(LatticeError::NoSuchCurve(i));
    }
    if c.matrix[i][i] != -1 {
        return Err(LatticeError::NotExceptional { label: c.labels[i].clone(), value: c.matrix[i][i] });
    }
    let keep: Vec<usize> = (0..c.len()).filter(|&j| j != i).collect();
    let mut out = c.restrict(&keep);
    for (a, &ca) in keep.iter().enumerate() {
        for (b, &cb) in keep.iter().enumerate() {
            out.matrix[a][b] += c.matrix[ca][i] * c.matrix[cb][i];
        }
    }
    Ok(out)
}

/// Blows down the curve with the given label.
pub fn blow_down_label(c: &CurveConfig, label: &str) -> Result<CurveConfig, LatticeError> {
    let i = c.index_of(label).ok_or_else(|| LatticeError::Malformed(format!("no curve labelled {label}")))?;
    blow_down(c, i)
}

// ---------------------------------------------------------------------------
// The II* fibre of a rational elliptic surface
// ---------------------------------------------------------------------------

/// Labels of the II* fibre plus its section, in order.
pub const II_STAR_LABELS: [&str; 10] = ["E", "C1", "C2", "C3", "C4", "C5", "C6", "C4'", "C2'", "C3'"];

/// A section `E` (a `(-1)`-curve) meeting the multiplicity-one component of a
/// type II* fibre `C1 + 2C2 + … + 6C6 + 4C4' + 2C2' + 3C3'`, where
/// `C1, …, C6, C4', C2'` is a chain and `C3'` meets `C6`.
pub fn ii_star_with_section() -> CurveConfig {
    let n = II_STAR_LABELS.len();
    let mut m = vec![vec![0i64; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = if i == 0 { -1 } else { -2 };
    }
    // E-C1-C2-C3-C4-C5-C6-C4'-C2' chain, C3' on C6
    let mut edges: Vec<(usize, usize)> = (0..8).map(|i| (i, i + 1)).collect();
    edges.push((6, 9));
    for (a, b) in edges {
        m[a][b] = 1;
        m[b][a] = 1;
    }
    CurveConfig {
        labels: II_STAR_LABELS.iter().map(|s| s.to_string()).collect(),
        matrix: m,
        multiplicities: Some(vec![0, 1, 2, 3, 4, 5, 6, 4, 2, 3]),
    }
}

/// Surface of degree `9 - i` built from the II* fibre (`3 <= i <= 8`).
///
/// Blows down `E, C1, …, C_{8-i}` in turn and contracts every remaining
/// fibre component except `C_{9-i}`. Returns the degree `K²` and the
/// singularity configuration of the contracted `(-2)`-curves.
pub fn surface_from_ii_star(i: u32) -> Result<(u32, SingularityConfig), LatticeError> {
    if !(3..=8).contains(&i) {
        return Err(LatticeError::Malformed(format!("surface index {i} outside 3..=8")));
    }
    let mut c = ii_star_with_section();
    let mut k2 = 0u32; // K² of a rational elliptic surface
    let mut to_contract = vec!["E".to_string()];
    to_contract.extend((1..=(8 - i)).map(|j| format!("C{j}")));
    for label in &to_contract {
        c = blow_down_label(&c, label)?;
        k2 += 1;
    }
    let kept = format!("C{}", 9 - i);
    let rest: Vec<usize> = (0..c.len()).filter(|&j| c.labels[j] != kept).collect();
    let config = recognize_components(&c.restrict(&rest))
        .map_err(|e| LatticeError::Malformed(format!("contracted curves are not ADE: {e}")))?;
    Ok((k2, config))
}

#[cfg(test)]
mod tests {
    use super::*;
    use DynkinType::*;

    fn chain(selfs: &[i64]) -> CurveConfig {
        let n = selfs.len();
        let mut m = vec![vec![0; n]; n];
        for i in 0..n {
            m[i][i] = selfs[i];
            if i + 1 < n {
                m[i][i + 1] = 1;
                m[i + 1][i] = 1;
            }
        }
        CurveConfig::new((0..n).map(|i| format!("C{i}")).collect(), m, None).unwrap()
    }

    #[test]
    fn cartan_determinants() {
        assert_eq!(cartan_determinant(A(2)), 3);
        assert_eq!(cartan_determinant(E(8)), 1);
        assert_eq!(cartan_determinant(D(4)), 4);
        assert_eq!(cartan_determinant(E(6)), 3);
        assert_eq!(cartan_determinant(E(7)), 2);
    }

    #[test]
    fn local_orders() {
        assert_eq!(local_pi1_order(E(8)), 120);
        assert_eq!(local_pi1_order(D(4)), 8);
        assert_eq!(local_pi1_order(A(3)), 4);
    }

    #[test]
    fn inverse_order_lookup() {
        assert_eq!(types_with_order(12), vec![A(11), D(5)]);
        assert_eq!(types_with_order(18), vec![A(17)]);
        assert_eq!(types_with_order(16), vec![A(15), D(6)]);
        assert_eq!(types_with_order(1), vec![]);
    }

    #[test]
    fn recognize_small_cases() {
        assert_eq!(recognize_dynkin(&chain(&[-2, -2, -2])), Ok(A(3)));
        assert!(matches!(recognize_dynkin(&chain(&[-1])), Err(NotAde::WrongSelfIntersection { .. })));
        assert_eq!(recognize_dynkin(&D(4).dual_graph()), Ok(D(4)));
    }

    #[test]
    fn recognize_rejects_cycles_and_stars() {
        let mut cyc = chain(&[-2, -2, -2]);
        cyc.matrix[0][2] = 1;
        cyc.matrix[2][0] = 1;
        assert_eq!(recognize_dynkin(&cyc), Err(NotAde::Cycle));

        let mut star = vec![vec![0; 5]; 5];
        for i in 0..5 {
            star[i][i] = -2;
        }
        for j in 1..5 {
            star[0][j] = 1;
            star[j][0] = 1;
        }
        let star = CurveConfig::new((0..5).map(|i| i.to_string()).collect(), star, None).unwrap();
        assert!(matches!(recognize_dynkin(&star), Err(NotAde::BranchDegree { degree: 4, .. })));

        let two = chain(&[-2, -2]).restrict(&[0]);
        let both = CurveConfig::new(
            vec!["a".into(), "b".into()],
            vec![vec![-2, 0], vec![0, -2]],
            None,
        )
        .unwrap();
        assert_eq!(recognize_dynkin(&both), Err(NotAde::Disconnected));
        assert_eq!(recognize_dynkin(&two), Ok(A(1)));
    }

    #[test]
    fn ii_star_fibre_minus_c1_is_e8() {
        let c = ii_star_with_section();
        let fibre: Vec<usize> = (1..10).collect();
        let fibre_cfg = c.restrict(&fibre);
        assert_eq!(recognize_dynkin(&fibre_cfg), Err(NotAde::NotFinite { arms: vec![1, 2, 5] }));
        let without_c1: Vec<usize> = (2..10).collect();
        assert_eq!(recognize_dynkin(&c.restrict(&without_c1)), Ok(E(8)));
        // removing the multiplicity-3 component leaves the long chain
        let without_c3p: Vec<usize> = (1..9).collect();
        assert_eq!(recognize_dynkin(&c.restrict(&without_c3p)), Ok(A(8)));
    }

    #[test]
    fn blow_down_rules() {
        let c = CurveConfig::new(vec!["E".into(), "C".into()], vec![vec![-1, 1], vec![1, -2]], None).unwrap();
        let d = blow_down(&c, 0).unwrap();
        assert_eq!(d.matrix, vec![vec![-1]]);

        let c = CurveConfig::new(
            vec!["E".into(), "C".into(), "D".into()],
            vec![vec![-1, 1, 1], vec![1, -2, 0], vec![1, 0, -2]],
            None,
        )
        .unwrap();
        let d = blow_down(&c, 0).unwrap();
        assert_eq!(d.matrix, vec![vec![-1, 1], vec![1, -1]]);

        assert!(matches!(blow_down(&c, 1), Err(LatticeError::NotExceptional { value: -2, .. })));
        assert_eq!(blow_down(&c, 7), Err(LatticeError::NoSuchCurve(7)));
    }

    #[test]
    fn first_seven_contractions_are_forced() {
        let mut c = ii_star_with_section();
        for label in ["E", "C1", "C2", "C3", "C4", "C5", "C6"] {
            let i = c.index_of(label).unwrap();
            assert_eq!(c.self_intersection(i), -1, "{label}");
            c = blow_down(&c, i).unwrap();
        }
        // two more contractions reach the plane, C3' becoming a line
        c = blow_down_label(&c, "C4'").unwrap();
        c = blow_down_label(&c, "C2'").unwrap();
        assert_eq!(c.labels, vec!["C3'"]);
        assert_eq!(c.matrix, vec![vec![1]]);
    }

    #[test]
    fn degree_surfaces_from_fibre() {
        let expected = [
            (3, "A1+A2"),
            (4, "A4"),
            (5, "D5"),
            (6, "E6"),
            (7, "E7"),
            (8, "E8"),
        ];
        for (i, cfg) in expected {
            let (d, config) = surface_from_ii_star(i).unwrap();
            assert_eq!(d, 9 - i);
            assert_eq!(config, cfg.parse().unwrap(), "i = {i}");
        }
    }

    #[test]
    fn config_parsing_and_rank() {
        let s: SingularityConfig = "D4+3A1".parse().unwrap();
        assert_eq!(s.rank(), 7);
        assert_eq!(s.to_string(), "D4+3A1");
        assert_eq!("A1+A2".parse::<SingularityConfig>().unwrap().rank(), 3);
        assert_eq!(SingularityConfig::empty().rank(), 0);
        assert!("D3".parse::<DynkinType>().is_err());
        assert!("E9".parse::<DynkinType>().is_err());
        assert!("A0".parse::<DynkinType>().is_err());
    }

    #[test]
    fn malformed_configs_rejected() {
        assert!(CurveConfig::new(vec!["a".into()], vec![vec![-2, 0]], None).is_err());
        assert!(CurveConfig::new(
            vec!["a".into(), "b".into()],
            vec![vec![-2, 1], vec![0, -2]],
            None
        )
        .is_err());
        assert!(CurveConfig::new(
            vec!["a".into(), "b".into()],
            vec![vec![-2, -1], vec![-1, -2]],
            None
        )
        .is_err());
    }
}
