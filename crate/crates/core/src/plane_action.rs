//! Finite monomial group actions on the projective plane and the singularities
//! of their quotients.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde_json::{json, Value};
use thiserror::Error;

use crate::cyclotomic::{CyclotomicError, CyclotomicNumber, RootOfUnity};
use crate::lattice::{DynkinType, SingularityConfig};

pub const DEFAULT_GROUP_CAP: usize = 720;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error("action parse error at {location}: {msg}")]
    Parse { location: String, msg: String },
    #[error("group closure exceeds the cap of {0} elements")]
    CapExceeded(usize),
    #[error("the identity has no isolated fixed locus")]
    Identity,
    #[error("point {0} is not fixed")]
    NotFixed(String),
    #[error("point {0} has trivial stabilizer")]
    TrivialStabilizer(String),
    #[error("unsupported stabilizer at {point}: {reason}")]
    Unsupported { point: String, reason: String },
    #[error("cyclic type 1/{0}({1},{2}) is not faithful")]
    Unfaithful(u32, u32, u32),
    #[error("the zero vector is not a projective point")]
    ZeroPoint,
    #[error("unknown built-in action `{0}`")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Cyclotomic(#[from] CyclotomicError),
}

fn parse_err(location: impl Into<String>, msg: impl Into<String>) -> ActionError {
    ActionError::Parse { location: location.into(), msg: msg.into() }
}

// ---------------------------------------------------------------------------
// Points
// ---------------------------------------------------------------------------

/// A point of P² (or the normal vector of a line), scaled so that its first
/// nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ProjectivePoint {
    coords: [CyclotomicNumber; 3],
}

impl ProjectivePoint {
    pub fn new(coords: [CyclotomicNumber; 3]) -> Result<Self, ActionError> {
        let lead = coords.iter().find(|c| !c.is_zero()).ok_or(ActionError::ZeroPoint)?.inv()?;
        let coords = [coords[0].try_mul(&lead)?, coords[1].try_mul(&lead)?, coords[2].try_mul(&lead)?];
        Ok(Self { coords })
    }

    pub fn from_ints(v: [i64; 3]) -> Result<Self, ActionError> {
        Self::new(v.map(CyclotomicNumber::from_int))
    }

    /// Coordinate point `e_i`.
    pub fn unit(i: usize) -> Self {
        let mut v = [0; 3];
        v[i] = 1;
        Self::from_ints(v).expect("nonzero")
    }

    pub fn coords(&self) -> &[CyclotomicNumber; 3] {
        &self.coords
    }

    /// Same point with every coordinate written in `Q(ζ_m)`.
    pub fn lift(&self, m: u32) -> Result<Self, ActionError> {
        let c = &self.coords;
        Ok(Self { coords: [c[0].lift(m)?, c[1].lift(m)?, c[2].lift(m)?] })
    }

    pub fn dot(&self, other: &Self) -> Result<CyclotomicNumber, ActionError> {
        let mut s = CyclotomicNumber::zero();
        for i in 0..3 {
            s = s.try_add(&self.coords[i].try_mul(&other.coords[i])?)?;
        }
        Ok(s)
    }

    /// Cross product, i.e. the line through two points or the meet of two
    /// lines. `None` when the inputs coincide.
    pub fn cross(&self, other: &Self) -> Result<Option<Self>, ActionError> {
        let (a, b) = (&self.coords, &other.coords);
        let c = |i: usize, j: usize| -> Result<CyclotomicNumber, ActionError> {
            Ok(a[i].try_mul(&b[j])?.try_sub(&a[j].try_mul(&b[i])?)?)
        };
        let v = [c(1, 2)?, c(2, 0)?, c(0, 1)?];
        if v.iter().all(CyclotomicNumber::is_zero) {
            return Ok(None);
        }
        Self::new(v).map(Some)
    }

    fn render(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.to_string()).collect()
    }

    pub fn to_json(&self) -> Value {
        json!(self.render())
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.render().join(", "))
    }
}

// ---------------------------------------------------------------------------
// Monomial matrices
// ---------------------------------------------------------------------------

/// `x ↦ (s₀ x_{π(0)}, s₁ x_{π(1)}, s₂ x_{π(2)})`, so row `i` holds `sᵢ` in
/// column `π(i)`. With `π = [2,0,1]` and unit scalars this is `[Z, X, Y]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonomialMatrix {
    perm: [usize; 3],
    scalars: [RootOfUnity; 3],
}

impl MonomialMatrix {
    pub fn new(perm: [usize; 3], scalars: [RootOfUnity; 3]) -> Result<Self, ActionError> {
        let mut seen = [false; 3];
        for &p in &perm {
            if p > 2 || seen[p] {
                return Err(parse_err("perm", format!("{perm:?} is not a permutation of 0,1,2")));
            }
            seen[p] = true;
        }
        Ok(Self { perm, scalars })
    }

    pub fn identity() -> Self {
        Self { perm: [0, 1, 2], scalars: [RootOfUnity::one(); 3] }
    }

    pub fn diagonal(scalars: [RootOfUnity; 3]) -> Self {
        Self { perm: [0, 1, 2], scalars }
    }

    pub fn perm(&self) -> [usize; 3] {
        self.perm
    }

    pub fn scalars(&self) -> [RootOfUnity; 3] {
        self.scalars
    }

    /// Representative with the entry in column 0 equal to 1.
    pub fn normalized(&self) -> Self {
        let row = self.perm.iter().position(|&p| p == 0).expect("permutation");
        let s = self.scalars[row];
        Self { perm: self.perm, scalars: self.scalars.map(|x| x.div(&s)) }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut perm = [0; 3];
        let mut scalars = [RootOfUnity::one(); 3];
        for i in 0..3 {
            perm[i] = other.perm[self.perm[i]];
            scalars[i] = self.scalars[i].mul(&other.scalars[self.perm[i]]);
        }
        Self { perm, scalars }
    }

    pub fn inverse(&self) -> Self {
        let mut perm = [0; 3];
        let mut scalars = [RootOfUnity::one(); 3];
        for i in 0..3 {
            perm[self.perm[i]] = i;
            scalars[self.perm[i]] = self.scalars[i].inv();
        }
        Self { perm, scalars }
    }

    /// Identity in PGL(3).
    pub fn is_identity(&self) -> bool {
        self.perm == [0, 1, 2] && self.scalars[0] == self.scalars[1] && self.scalars[1] == self.scalars[2]
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::identity(), |acc, _| acc.compose(self))
    }

    /// Order in PGL(3).
    pub fn order(&self) -> u32 {
        let mut acc = *self;
        let mut k = 1;
        while !acc.is_identity() {
            acc = acc.compose(self);
            k += 1;
        }
        k
    }

    /// Largest denominator needed to write the eigenvalues and eigenvectors.
    pub fn conductor(&self) -> u32 {
        eigen_pairs_raw(&self.normalized())
            .iter()
            .flat_map(|(l, v)| std::iter::once(l.denominator()).chain(v.iter().flatten().map(|r| r.denominator())))
            .fold(1, |a, b| a.lcm(&b))
    }

    pub fn apply_raw(&self, x: &[CyclotomicNumber; 3]) -> Result<[CyclotomicNumber; 3], ActionError> {
        let f = |i: usize| CyclotomicNumber::from_root(&self.scalars[i]).try_mul(&x[self.perm[i]]);
        Ok([f(0)?, f(1)?, f(2)?])
    }

    pub fn apply(&self, p: &ProjectivePoint) -> Result<ProjectivePoint, ActionError> {
        ProjectivePoint::new(self.apply_raw(p.coords())?)
    }

    /// Image of the line with normal vector `n`.
    pub fn apply_to_line(&self, n: &ProjectivePoint) -> Result<ProjectivePoint, ActionError> {
        let inv = self.inverse();
        let mut out = [CyclotomicNumber::zero(), CyclotomicNumber::zero(), CyclotomicNumber::zero()];
        for i in 0..3 {
            out[inv.perm[i]] = n.coords()[i].try_mul(&CyclotomicNumber::from_root(&inv.scalars[i]))?;
        }
        ProjectivePoint::new(out)
    }

    /// Eigenvalue of the normalized matrix at `p`, or `None` if `p` is not fixed.
    pub fn eigenvalue_at(&self, p: &ProjectivePoint) -> Result<Option<RootOfUnity>, ActionError> {
        let n = self.normalized();
        let img = n.apply_raw(p.coords())?;
        let lead = p.coords().iter().position(|c| !c.is_zero()).expect("nonzero point");
        let ratio = img[lead].try_div(&p.coords()[lead])?;
        for i in 0..3 {
            if img[i] != p.coords()[i].try_mul(&ratio)? {
                return Ok(None);
            }
        }
        Ok(ratio.as_root_of_unity())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "perm": self.perm,
            "scalars": self.scalars.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Bracket notation, e.g. `[x0, e(1/3)*x1, e(2/3)*x2]`.
impl fmt::Display for MonomialMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = (0..3)
            .map(|i| {
                if self.scalars[i].is_one() {
                    format!("x{}", self.perm[i])
                } else {
                    format!("e({})*x{}", self.scalars[i], self.perm[i])
                }
            })
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// A named list of generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedAction {
    pub name: String,
    pub generators: Vec<MonomialMatrix>,
}

fn parse_generator(v: &Value, loc: &str) -> Result<MonomialMatrix, ActionError> {
    let obj = v.as_object().ok_or_else(|| parse_err(loc, "generator must be an object"))?;
    let perm_v = obj.get("perm").ok_or_else(|| parse_err(loc, "missing `perm`"))?;
    let perm_a = perm_v.as_array().ok_or_else(|| parse_err(format!("{loc}.perm"), "must be an array"))?;
    if perm_a.len() != 3 {
        return Err(parse_err(format!("{loc}.perm"), format!("expected 3 entries, got {}", perm_a.len())));
    }
    let mut perm = [0usize; 3];
    for (i, p) in perm_a.iter().enumerate() {
        perm[i] = p
            .as_u64()
            .filter(|&x| x <= 2)
            .ok_or_else(|| parse_err(format!("{loc}.perm[{i}]"), "expected 0, 1 or 2"))? as usize;
    }
    let sc_v = obj.get("scalars").ok_or_else(|| parse_err(loc, "missing `scalars`"))?;
    let sc_a = sc_v.as_array().ok_or_else(|| parse_err(format!("{loc}.scalars"), "must be an array"))?;
    if sc_a.len() != 3 {
        return Err(parse_err(format!("{loc}.scalars"), format!("expected 3 entries, got {}", sc_a.len())));
    }
    let mut scalars = [RootOfUnity::one(); 3];
    for (i, s) in sc_a.iter().enumerate() {
        let at = format!("{loc}.scalars[{i}]");
        let text = s.as_str().ok_or_else(|| parse_err(&at, "expected a string `k/m`"))?;
        if text.trim() == "0" {
            return Err(parse_err(&at, "zero scalar"));
        }
        scalars[i] = text.parse().map_err(|_| parse_err(&at, format!("`{text}` is not a root of unity `k/m`")))?;
    }
    MonomialMatrix::new(perm, scalars).map_err(|_| parse_err(format!("{loc}.perm"), format!("{perm:?} is not a permutation")))
}

/// Reads `{"name": …, "generators": [{"perm": [..], "scalars": ["k/m", ..]}, ..]}`.
/// A bare generator object or an array of generators is also accepted.
pub fn parse_action(text: &str) -> Result<NamedAction, ActionError> {
    let v: Value = serde_json::from_str(text).map_err(|e| parse_err(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    let (name, gens) = match &v {
        Value::Object(o) if o.contains_key("generators") => {
            let name = match o.get("name") {
                None => "action".to_string(),
                Some(Value::String(s)) => s.clone(),
                Some(_) => return Err(parse_err("name", "must be a string")),
            };
            let g = o["generators"].as_array().ok_or_else(|| parse_err("generators", "must be an array"))?;
            (name, g.clone())
        }
        Value::Object(_) => ("action".to_string(), vec![v.clone()]),
        Value::Array(a) => ("action".to_string(), a.clone()),
        _ => return Err(parse_err("top level", "expected an object or array")),
    };
    let generators = gens
        .iter()
        .enumerate()
        .map(|(i, g)| parse_generator(g, &format!("generators[{i}]")))
        .collect::<Result<_, _>>()?;
    Ok(NamedAction { name, generators })
}

// ---------------------------------------------------------------------------
// Groups
// ---------------------------------------------------------------------------

/// A finite subgroup of PGL(3), elements normalized and sorted (identity first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteActionGroup {
    generators: Vec<MonomialMatrix>,
    elements: Vec<MonomialMatrix>,
}

impl FiniteActionGroup {
    pub fn generators(&self) -> &[MonomialMatrix] {
        &self.generators
    }

    pub fn elements(&self) -> &[MonomialMatrix] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: &MonomialMatrix) -> bool {
        self.elements.binary_search(&g.normalized()).is_ok()
    }

    /// Conductor in which every eigenvalue, eigenvector and fixed point lives.
    pub fn conductor(&self) -> u32 {
        self.elements.iter().map(MonomialMatrix::conductor).fold(1, |a, b| a.lcm(&b))
    }
}

pub fn close_group(gens: &[MonomialMatrix], cap: usize) -> Result<FiniteActionGroup, ActionError> {
    let gens: Vec<MonomialMatrix> = gens.iter().map(MonomialMatrix::normalized).collect();
    let mut seen: BTreeSet<MonomialMatrix> = BTreeSet::new();
    let id = MonomialMatrix::identity();
    seen.insert(id);
    let mut frontier = vec![id];
    while let Some(x) = frontier.pop() {
        for g in &gens {
            let y = x.compose(g).normalized();
            if seen.insert(y) {
                if seen.len() > cap {
                    return Err(ActionError::CapExceeded(cap));
                }
                frontier.push(y);
            }
        }
    }
    Ok(FiniteActionGroup { generators: gens, elements: seen.into_iter().collect() })
}

// ---------------------------------------------------------------------------
// Eigen data and fixed loci
// ---------------------------------------------------------------------------

/// Eigenvalues with eigenvectors whose coordinates are zero or roots of unity.
fn eigen_pairs_raw(m: &MonomialMatrix) -> Vec<(RootOfUnity, [Option<RootOfUnity>; 3])> {
    let mut out = Vec::new();
    let mut visited = [false; 3];
    for start in 0..3 {
        if visited[start] {
            continue;
        }
        let mut cycle = vec![start];
        visited[start] = true;
        let mut i = m.perm[start];
        while i != start {
            visited[i] = true;
            cycle.push(i);
            i = m.perm[i];
        }
        let rho = cycle.iter().fold(RootOfUnity::one(), |acc, &i| acc.mul(&m.scalars[i]));
        for lambda in rho.roots(cycle.len() as u32) {
            // s_i v_{π(i)} = λ v_i
            let mut v = [None; 3];
            v[start] = Some(RootOfUnity::one());
            let mut i = start;
            for _ in 1..cycle.len() {
                let next = m.perm[i];
                v[next] = Some(lambda.mul(&v[i].expect("set")).div(&m.scalars[i]));
                i = next;
            }
            out.push((lambda, v));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenPair {
    pub value: RootOfUnity,
    pub vector: ProjectivePoint,
}

/// Eigenvalues of the normalized representative, found cycle by cycle, with
/// one eigenvector each. The three vectors always form a basis.
pub fn eigen_data(m: &MonomialMatrix) -> Vec<EigenPair> {
    eigen_pairs_raw(&m.normalized())
        .into_iter()
        .map(|(value, v)| {
            let coords = v.map(|c| c.map_or_else(CyclotomicNumber::zero, |r| CyclotomicNumber::from_root(&r)));
            EigenPair { value, vector: ProjectivePoint::new(coords).expect("eigenvector is nonzero") }
        })
        .collect()
}

/// Isolated fixed points and, for a pseudo-reflection, the fixed line (as a
/// normal vector).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedLocus {
    pub points: Vec<ProjectivePoint>,
    pub line: Option<ProjectivePoint>,
}

pub fn fixed_locus(g: &MonomialMatrix) -> Result<FixedLocus, ActionError> {
    if g.is_identity() {
        return Err(ActionError::Identity);
    }
    let pairs = eigen_data(g);
    for i in 0..3 {
        for j in i + 1..3 {
            if pairs[i].value == pairs[j].value {
                let k = 3 - i - j;
                let line = pairs[i].vector.cross(&pairs[j].vector)?.expect("independent eigenvectors");
                return Ok(FixedLocus { points: vec![pairs[k].vector.clone()], line: Some(line) });
            }
        }
    }
    let mut points: Vec<ProjectivePoint> = pairs.into_iter().map(|p| p.vector).collect();
    points.sort();
    Ok(FixedLocus { points, line: None })
}

/// Eigenvalues of `g` on the tangent plane at the fixed point `p`: the ratios
/// `μ/λ` where `λ` is the eigenvalue at `p` and `μ` runs over the other two.
pub fn tangent_eigenvalues(g: &MonomialMatrix, p: &ProjectivePoint) -> Result<(RootOfUnity, RootOfUnity), ActionError> {
    let lambda = g.eigenvalue_at(p)?.ok_or_else(|| ActionError::NotFixed(p.to_string()))?;
    let mut values: Vec<RootOfUnity> = eigen_data(g).into_iter().map(|e| e.value).collect();
    let pos = values.iter().position(|v| *v == lambda).expect("eigenvalue of a fixed point");
    values.remove(pos);
    Ok((values[0].div(&lambda), values[1].div(&lambda)))
}

/// Removes the pseudo-reflections from a cyclic action of type `1/r(a,b)`.
pub fn hj_normalize(r: u32, a: u32, b: u32) -> Result<(u32, u32, u32), ActionError> {
    if r == 0 || r.gcd(&a).gcd(&b) != 1 {
        return Err(ActionError::Unfaithful(r, a, b));
    }
    let (mut r, mut a, mut b) = (r, a % r, b % r);
    loop {
        let g = r.gcd(&a);
        if g > 1 {
            r /= g;
            a /= g;
            continue;
        }
        let g = r.gcd(&b);
        if g > 1 {
            r /= g;
            b /= g;
            continue;
        }
        break;
    }
    if r == 1 {
        return Ok((1, 0, 0));
    }
    Ok((r, a % r, b % r))
}

/// Type of the cyclic quotient singularity `1/r(a,b)`.
pub fn classify_cyclic(r: u32, a: u32, b: u32) -> Result<StabilizerType, ActionError> {
    let (r, a, b) = hj_normalize(r, a, b)?;
    Ok(if r == 1 {
        StabilizerType::Smooth
    } else if (a + b) % r == 0 {
        StabilizerType::DuVal(DynkinType::A(r - 1))
    } else {
        StabilizerType::NonGorensteinCyclic { r, a, b }
    })
}

// ---------------------------------------------------------------------------
// Stabilizers
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum StabilizerType {
    Smooth,
    DuVal(DynkinType),
    NonGorensteinCyclic { r: u32, a: u32, b: u32 },
    Unsupported(String),
}

impl fmt::Display for StabilizerType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StabilizerType::Smooth => f.write_str("smooth"),
            StabilizerType::DuVal(t) => write!(f, "{t}"),
            StabilizerType::NonGorensteinCyclic { r, a, b } => write!(f, "1/{r}({a},{b})"),
            StabilizerType::Unsupported(why) => write!(f, "unsupported: {why}"),
        }
    }
}

pub fn stabilizer(group: &FiniteActionGroup, p: &ProjectivePoint) -> Result<Vec<MonomialMatrix>, ActionError> {
    let mut out = Vec::new();
    for g in group.elements() {
        if g.eigenvalue_at(p)?.is_some() {
            out.push(*g);
        }
    }
    Ok(out)
}

fn subgroup_closure(gens: &[MonomialMatrix]) -> BTreeSet<MonomialMatrix> {
    let mut seen = BTreeSet::from([MonomialMatrix::identity()]);
    let mut frontier = vec![MonomialMatrix::identity()];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.compose(g).normalized();
            if seen.insert(y) {
                frontier.push(y);
            }
        }
    }
    seen
}

/// Order of `H^ab` and whether it is cyclic.
fn abelianization_shape(h: &[MonomialMatrix]) -> (usize, bool) {
    let comms: Vec<MonomialMatrix> = h
        .iter()
        .flat_map(|x| h.iter().map(move |y| x.compose(y).compose(&x.inverse()).compose(&y.inverse()).normalized()))
        .collect();
    let derived = subgroup_closure(&comms);
    let q = h.len() / derived.len();
    let cyclic = h.iter().any(|x| {
        let mut acc = *x;
        let mut k = 1;
        while !derived.contains(&acc.normalized()) {
            acc = acc.compose(x);
            k += 1;
        }
        k == q
    });
    (q, cyclic)
}

fn is_abelian(h: &[MonomialMatrix]) -> bool {
    h.iter().all(|x| h.iter().all(|y| x.compose(y).normalized() == y.compose(x).normalized()))
}

/// Type of the image of `p` in the quotient, from the action of its stabilizer
/// on the tangent plane.
pub fn classify_stabilizer(group: &FiniteActionGroup, p: &ProjectivePoint) -> Result<StabilizerType, ActionError> {
    let h = stabilizer(group, p)?;
    let n = h.len();
    if n == 1 {
        return Err(ActionError::TrivialStabilizer(p.to_string()));
    }
    if let Some(gen) = h.iter().find(|g| g.order() as usize == n) {
        let (t1, t2) = tangent_eigenvalues(gen, p)?;
        let r = t1.denominator().lcm(&t2.denominator());
        let a = t1.exponent_mod(r).expect("divides");
        let b = t2.exponent_mod(r).expect("divides");
        return classify_cyclic(r, a, b);
    }
    if is_abelian(&h) {
        return Ok(StabilizerType::Unsupported(format!("non-cyclic abelian stabilizer of order {n}")));
    }
    for g in &h {
        let (t1, t2) = tangent_eigenvalues(g, p)?;
        if !t1.mul(&t2).is_one() {
            return Ok(StabilizerType::Unsupported(format!(
                "non-abelian stabilizer of order {n} not contained in SL(2)"
            )));
        }
    }
    let (ab, cyclic) = abelianization_shape(&h);
    let t = match (n, ab, cyclic) {
        (24, 3, true) => Some(DynkinType::E(6)),
        (48, 2, true) => Some(DynkinType::E(7)),
        (120, 1, _) => Some(DynkinType::E(8)),
        (n, 4, _) if n % 4 == 0 && n >= 8 => Some(DynkinType::D(n as u32 / 4 + 2)),
        _ => None,
    };
    Ok(t.map(StabilizerType::DuVal).unwrap_or_else(|| {
        StabilizerType::Unsupported(format!("SL(2) stabilizer of order {n} with abelianization of order {ab}"))
    }))
}

// ---------------------------------------------------------------------------
// Quotient profiles
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointOrbit {
    pub representative: ProjectivePoint,
    pub size: usize,
    pub stabilizer_order: usize,
    pub classification: StabilizerType,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchLine {
    /// Normal vector of a representative line.
    pub line: ProjectivePoint,
    /// Order of the pointwise stabilizer of the line.
    pub ramification: usize,
    pub orbit_size: usize,
    /// Number of special points on the representative line.
    pub special_points: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientProfile {
    pub group_order: usize,
    pub k2: Ratio<i64>,
    pub config: SingularityConfig,
    pub orbits: Vec<PointOrbit>,
    pub branch_lines: Vec<BranchLine>,
}

impl QuotientProfile {
    pub fn singular_orbits(&self) -> impl Iterator<Item = &PointOrbit> {
        self.orbits.iter().filter(|o| o.classification != StabilizerType::Smooth)
    }

    pub fn is_gorenstein(&self) -> bool {
        self.singular_orbits().all(|o| matches!(o.classification, StabilizerType::DuVal(_)))
    }

    /// `(3 - #points over singular images, |G| (3 - #singular points))`.
    /// The two agree when the quotient map is unramified off the singular points.
    pub fn euler_multiplicativity(&self) -> (i64, i64) {
        let upstairs: usize = self.singular_orbits().map(|o| o.size).sum();
        let s = self.singular_orbits().count() as i64;
        (3 - upstairs as i64, self.group_order as i64 * (3 - s))
    }

    /// Euler number of the quotient assembled stratum by stratum: the free
    /// part contributes `χ/|G|`, each branch-line orbit contributes its
    /// punctured line divided by the effective action, and each special point
    /// orbit contributes 1. Always 3 for a correct profile.
    pub fn orbifold_euler(&self) -> Ratio<i64> {
        let g = self.group_order as i64;
        let special: i64 = self.orbits.iter().map(|o| o.size as i64).sum();
        let mut on_lines = 0i64;
        let mut down = Ratio::from_integer(self.orbits.len() as i64);
        for l in &self.branch_lines {
            let punctured = 2 - l.special_points as i64;
            on_lines += punctured * l.orbit_size as i64;
            down += Ratio::new(punctured * (l.ramification * l.orbit_size) as i64, g);
        }
        let free = 3 - special - on_lines;
        down + Ratio::new(free, g)
    }

    pub fn to_json(&self) -> Value {
        let k2 = if self.k2.is_integer() { json!(self.k2.to_integer()) } else { json!(self.k2.to_string()) };
        json!({
            "group_order": self.group_order,
            "k2": k2,
            "config": self.config.labels(),
            "gorenstein": self.is_gorenstein(),
            "orbits": self.orbits.iter().map(|o| json!({
                "representative": o.representative.to_json(),
                "size": o.size,
                "stabilizer_order": o.stabilizer_order,
                "type": o.classification.to_string(),
            })).collect::<Vec<_>>(),
            "branch_lines": self.branch_lines.iter().map(|l| json!({
                "line": l.line.to_json(),
                "ramification": l.ramification,
                "orbit_size": l.orbit_size,
            })).collect::<Vec<_>>(),
        })
    }
}

fn push_unique(v: &mut Vec<ProjectivePoint>, p: ProjectivePoint) {
    if !v.contains(&p) {
        v.push(p);
    }
}

pub fn quotient_profile(group: &FiniteActionGroup) -> Result<QuotientProfile, ActionError> {
    let m = group.conductor();
    let loci: Vec<(MonomialMatrix, FixedLocus)> = group
        .elements()
        .iter()
        .filter(|g| !g.is_identity())
        .map(|g| {
            let f = fixed_locus(g)?;
            let points = f.points.iter().map(|p| p.lift(m)).collect::<Result<_, _>>()?;
            let line = f.line.map(|l| l.lift(m)).transpose()?;
            Ok((*g, FixedLocus { points, line }))
        })
        .collect::<Result<_, ActionError>>()?;

    // pointwise-fixed lines with their pointwise stabilizer orders
    let mut lines: Vec<(ProjectivePoint, usize)> = Vec::new();
    for (_, f) in &loci {
        if let Some(l) = &f.line {
            match lines.iter_mut().find(|(x, _)| x == l) {
                Some((_, e)) => *e += 1,
                None => lines.push((l.clone(), 2)),
            }
        }
    }

    let mut candidates: Vec<ProjectivePoint> = Vec::new();
    for (_, f) in &loci {
        for p in &f.points {
            push_unique(&mut candidates, p.clone());
        }
    }
    for (l, _) in &lines {
        for (_, f) in &loci {
            if let Some(other) = &f.line {
                if other != l {
                    if let Some(p) = l.cross(other)? {
                        push_unique(&mut candidates, p.lift(m)?);
                    }
                }
            }
        }
    }
    candidates.sort();

    let mut orbits = Vec::new();
    let mut assigned: Vec<ProjectivePoint> = Vec::new();
    for p in &candidates {
        if assigned.contains(p) {
            continue;
        }
        let mut orbit: Vec<ProjectivePoint> = Vec::new();
        for g in group.elements() {
            push_unique(&mut orbit, g.apply(p)?.lift(m)?);
        }
        orbit.sort();
        let rep = orbit[0].clone();
        let stab = stabilizer(group, &rep)?.len();
        let classification = classify_stabilizer(group, &rep)?;
        if let StabilizerType::Unsupported(reason) = &classification {
            return Err(ActionError::Unsupported { point: rep.to_string(), reason: reason.clone() });
        }
        assigned.extend(orbit.iter().cloned());
        orbits.push(PointOrbit { representative: rep, size: orbit.len(), stabilizer_order: stab, classification });
    }
    orbits.sort_by(|a, b| a.representative.cmp(&b.representative));

    let mut branch_lines = Vec::new();
    let mut seen_lines: Vec<ProjectivePoint> = Vec::new();
    let mut sorted_lines = lines.clone();
    sorted_lines.sort();
    for (l, e) in &sorted_lines {
        if seen_lines.contains(l) {
            continue;
        }
        let mut orbit: Vec<ProjectivePoint> = Vec::new();
        for g in group.elements() {
            push_unique(&mut orbit, g.apply_to_line(l)?.lift(m)?);
        }
        orbit.sort();
        let rep = orbit[0].clone();
        let special_points = {
            let mut k = 0;
            for o in &assigned {
                if rep.dot(o)?.is_zero() {
                    k += 1;
                }
            }
            k
        };
        seen_lines.extend(orbit.iter().cloned());
        branch_lines.push(BranchLine { line: rep, ramification: *e, orbit_size: orbit.len(), special_points });
    }

    let ramified: i64 = branch_lines.iter().map(|l| ((l.ramification - 1) * l.orbit_size) as i64).sum();
    let k2 = Ratio::new((3 + ramified).pow(2), group.order() as i64);
    let config = SingularityConfig::new(
        orbits
            .iter()
            .filter_map(|o| match o.classification {
                StabilizerType::DuVal(t) => Some(t),
                _ => None,
            })
            .collect(),
    );
    Ok(QuotientProfile { group_order: group.order(), k2, config, orbits, branch_lines })
}

// ---------------------------------------------------------------------------
// Built-in actions
// ---------------------------------------------------------------------------

fn mono(perm: [usize; 3], scalars: [&str; 3]) -> MonomialMatrix {
    MonomialMatrix::new(perm, scalars.map(|s| s.parse().expect("valid root"))).expect("valid permutation")
}

pub const BUILTIN_NAMES: [&str; 6] = ["z2_cone", "z6", "z3", "z3xz3", "z4", "quaternion8"];

pub fn builtin_actions() -> Vec<NamedAction> {
    let z3 = mono([0, 1, 2], ["0/1", "1/3", "2/3"]);
    let shift = mono([2, 0, 1], ["0/1", "0/1", "0/1"]);
    let z4 = mono([0, 1, 2], ["0/1", "1/4", "3/4"]);
    let swap = mono([0, 2, 1], ["0/1", "1/4", "1/4"]);
    let named = |name: &str, generators: Vec<MonomialMatrix>| NamedAction { name: name.into(), generators };
    vec![
        named("z2_cone", vec![mono([0, 1, 2], ["1/2", "1/2", "0/1"])]),
        named("z6", vec![mono([0, 1, 2], ["0/1", "1/3", "1/2"])]),
        named("z3", vec![z3]),
        named("z3xz3", vec![z3, shift]),
        named("z4", vec![z4]),
        named("quaternion8", vec![z4, swap]),
    ]
}

pub fn builtin_action(name: &str) -> Result<NamedAction, ActionError> {
    builtin_actions()
        .into_iter()
        .find(|a| a.name == name)
        .ok_or_else(|| ActionError::UnknownBuiltin(name.to_string()))
}
