//! Weighted projective hypersurfaces, plane curve germs and elliptic fibre
//! bookkeeping.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::cyclotomic::{conductor_cap, cyclotomic_polynomial, euler_phi, CyclotomicNumber, RootOfUnity};
use crate::lattice::SingularityConfig;

type CN = CyclotomicNumber;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurfaceError {
    #[error("polynomial parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("polynomial is not quasi-homogeneous")]
    NotQuasiHomogeneous,
    #[error("{0} variables given, at most {1} supported")]
    TooManyVariables(usize, usize),
    #[error("expected {expected} variables, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("point is not on the curve: f(p) = {0}")]
    NotOnCurve(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("degree must lie in 1..=9, got {0}")]
    DegreeRange(i64),
    #[error("unknown fibre type `{0}`")]
    UnknownFiber(String),
}

// ---------------------------------------------------------------------------
// Multivariate polynomials
// ---------------------------------------------------------------------------

/// A polynomial in a fixed number of variables with cyclotomic coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, CN>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: CN) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, CN::one())
    }

    pub fn monomial(exps: Vec<u32>, c: CN) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, CN> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<CN> {
        match self.terms.len() {
            0 => Some(CN::zero()),
            1 => self.terms.get(&vec![0; self.nvars]).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, exps: Vec<u32>, c: CN) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn scale(&self, k: &CN) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(self.nvars, CN::one()), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(e2, c * &CN::from_int(e[i] as i64));
            }
        }
        out
    }

    pub fn eval(&self, x: &[CN]) -> CN {
        assert_eq!(x.len(), self.nvars, "arity");
        let mut s = CN::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t = &t * &xi.pow(k as i64).expect("power of a nonzero or positive exponent");
                }
            }
            s = &s + &t;
        }
        s
    }

    /// Substitutes `x_i = v`; the variable stays in the signature with degree 0.
    pub fn substitute(&self, i: usize, v: &CN) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = std::mem::take(&mut e2[i]);
            let factor = if k == 0 { CN::one() } else { v.pow(k as i64).expect("positive exponent") };
            out.add_term(e2, c * &factor);
        }
        out
    }

    /// Removes a variable of degree 0, renumbering the rest.
    pub fn drop_var(&self, i: usize) -> Self {
        assert_eq!(self.degree_in(i), 0, "variable still present");
        let mut out = Self::zero(self.nvars - 1);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2.remove(i);
            out.add_term(e2, c.clone());
        }
        out
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn vars_used(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.degree_in(i) > 0).collect()
    }

    /// Coefficients of `x_i^k` for `k = 0..=deg`, as polynomials without `x_i`.
    pub fn coeffs_in(&self, i: usize) -> Vec<Poly> {
        let mut out = vec![Self::zero(self.nvars); self.degree_in(i) as usize + 1];
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = std::mem::take(&mut e2[i]) as usize;
            out[k].add_term(e2, c.clone());
        }
        out
    }

    /// Divides by the largest monomial dividing every term.
    pub fn remove_monomial_content(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let min: Vec<u32> = (0..self.nvars).map(|i| self.terms.keys().map(|e| e[i]).min().unwrap()).collect();
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(&min).map(|(a, b)| a - b).collect(), c.clone()))
                .collect(),
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (lead_e, lead_c) = d.terms.iter().next_back()?;
        let lead_inv = lead_c.inv().ok()?;
        let mut r = self.clone();
        let mut q = Self::zero(self.nvars);
        while let Some((e, c)) = r.terms.iter().next_back() {
            if e.iter().zip(lead_e).any(|(a, b)| a < b) {
                return None;
            }
            let te: Vec<u32> = e.iter().zip(lead_e).map(|(a, b)| a - b).collect();
            let t = Self::monomial(te, c * &lead_inv);
            r = r.sub(&t.mul(d));
            q = q.add(&t);
        }
        Some(q)
    }

    /// `f(x + p)`.
    pub fn translate(&self, p: &[CN]) -> Self {
        let shifted: Vec<Poly> =
            (0..self.nvars).map(|i| Self::var(self.nvars, i).add(&Self::constant(self.nvars, p[i].clone()))).collect();
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut t = Self::constant(self.nvars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&shifted[i].pow(k));
                }
            }
            out = out.add(&t);
        }
        out
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(e, _)| e.iter().sum::<u32>() == d).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    /// Coefficients (low to high) when only `x_i` occurs.
    fn univariate(&self, i: usize) -> Vec<CN> {
        let mut v = vec![CN::zero(); self.degree_in(i) as usize + 1];
        for (e, c) in &self.terms {
            v[e[i] as usize] = c.clone();
        }
        v
    }

    pub fn format_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{}", names[i], k) })
                .collect();
            let (neg, coeff) = match c.to_rational() {
                Some(q) => (q.is_negative(), Some(q.abs())),
                None => (false, None),
            };
            if k > 0 {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            let coeff_str = match coeff {
                Some(q) if q.is_one() && !mono.is_empty() => String::new(),
                Some(q) if q.is_integer() => q.numer().to_string(),
                Some(q) => format!("{}/{}", q.numer(), q.denom()),
                None => format!("({c})"),
            };
            let mut parts = Vec::new();
            if !coeff_str.is_empty() {
                parts.push(coeff_str);
            }
            parts.extend(mono);
            out.push_str(&parts.join("*"));
        }
        out
    }
}

fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("x{i}")).collect()
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&default_names(self.nvars)))
    }
}

/// Determinant of a square matrix of polynomials by fraction-free elimination.
fn poly_determinant(mut a: Vec<Vec<Poly>>, nvars: usize) -> Poly {
    let n = a.len();
    if n == 0 {
        return Poly::constant(nvars, CN::one());
    }
    let mut negate = false;
    let mut prev = Poly::constant(nvars, CN::one());
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Poly::zero(nvars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

/// Sylvester resultant of `p` and `q` with respect to `x_v`.
pub fn resultant(p: &Poly, q: &Poly, v: usize) -> Poly {
    let n = p.nvars();
    let (cp, cq) = (p.coeffs_in(v), q.coeffs_in(v));
    let (m, k) = (cp.len() - 1, cq.len() - 1);
    if m == 0 {
        return p.pow(k as u32);
    }
    if k == 0 {
        return q.pow(m as u32);
    }
    let size = m + k;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..k {
        let mut row = vec![Poly::zero(n); size];
        for (j, c) in cp.iter().rev().enumerate() {
            row[shift + j] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![Poly::zero(n); size];
        for (j, c) in cq.iter().rev().enumerate() {
            row[shift + j] = c.clone();
        }
        rows.push(row);
    }
    poly_determinant(rows, n)
}

// ---------------------------------------------------------------------------
// Univariate root finding
// ---------------------------------------------------------------------------

fn trim(v: &mut Vec<CN>) {
    while v.len() > 1 && v.last().is_some_and(CN::is_zero) {
        v.pop();
    }
}

/// Quotient and remainder of univariate polynomials (low to high).
fn udivrem(a: &[CN], b: &[CN]) -> (Vec<CN>, Vec<CN>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = b[db].inv().expect("nonzero leading coefficient");
    if r.len() < b.len() {
        return (vec![CN::zero()], r);
    }
    let mut q = vec![CN::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] * &lead_inv;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[i + j] = &r[i + j] - &(&c * bj);
            }
        }
        q[i] = c;
    }
    r.truncate(db.max(1));
    trim(&mut r);
    (q, r)
}

fn is_zero_poly(v: &[CN]) -> bool {
    v.iter().all(CN::is_zero)
}

fn format_univariate(v: &[CN]) -> String {
    let mut p = Poly::zero(1);
    for (k, c) in v.iter().enumerate() {
        p.add_term(vec![k as u32], c.clone());
    }
    p.format_with(&["t".to_string()])
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

/// Nonzero roots of a univariate polynomial, without multiplicity.
///
/// Recognizes rational roots, roots of unity and a final linear factor;
/// anything else is returned as an unresolved factor.
pub fn univariate_roots(coeffs: &[CN]) -> Result<Vec<CN>, String> {
    let mut f = coeffs.to_vec();
    trim(&mut f);
    while f.len() > 1 && f[0].is_zero() {
        f.remove(0);
    }
    let mut roots: Vec<CN> = Vec::new();
    fn take(f: &mut Vec<CN>, r: CN, roots: &mut Vec<CN>) {
        let lin = vec![-&r, CN::one()];
        loop {
            let (q, rem) = udivrem(f, &lin);
            if !is_zero_poly(&rem) || f.len() < 2 {
                break;
            }
            *f = q;
        }
        if !roots.contains(&r) {
            roots.push(r);
        }
    }

    let rational: Option<Vec<BigRational>> = f.iter().map(CN::to_rational).collect();
    if let Some(q) = rational.filter(|_| f.len() > 2) {
        let den = q.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = q.iter().map(|c| (c * BigRational::from_integer(den.clone())).to_integer()).collect();
        if let (Some(ps), Some(qs)) = (divisors(&ints[0]), divisors(ints.last().unwrap())) {
            for p in &ps {
                for d in &qs {
                    for sign in [1, -1] {
                        let cand = BigRational::new(p * sign, d.clone());
                        let c = CN::from_rational(cand);
                        if f.len() > 1 && Poly::univariate_eval(&f, &c).is_zero() {
                            take(&mut f, c, &mut roots);
                        }
                    }
                }
            }
        }
        // cyclotomic factors
        let mut n = 3u32;
        while f.len() > 2 && n <= conductor_cap() {
            if euler_phi(n) as usize <= f.len() - 1 {
                let phi: Vec<CN> = cyclotomic_polynomial(n).into_iter().map(CN::from_int).collect();
                let (_, rem) = udivrem(&f, &phi);
                if is_zero_poly(&rem) {
                    for k in (1..n).filter(|k| k.gcd(&n) == 1) {
                        let z = CN::zeta_pow(n, k as i64).map_err(|_| format_univariate(&f))?;
                        take(&mut f, z, &mut roots);
                    }
                }
            }
            n += 1;
        }
    } else if f.len() > 2 {
        // roots of unity inside the coefficient field
        let m = f.iter().fold(1u32, |acc, c| acc.lcm(&c.conductor())).lcm(&2);
        for k in 0..m {
            if f.len() <= 2 {
                break;
            }
            let z = CN::zeta_pow(m, k as i64).map_err(|_| format_univariate(&f))?;
            if Poly::univariate_eval(&f, &z).is_zero() {
                take(&mut f, z, &mut roots);
            }
        }
    }
    match f.len() {
        0 | 1 => Ok(roots),
        2 => {
            let r = (-&f[0]).try_div(&f[1]).expect("nonzero leading coefficient");
            if !roots.contains(&r) {
                roots.push(r);
            }
            Ok(roots)
        }
        _ => Err(format_univariate(&f)),
    }
}

impl Poly {
    fn univariate_eval(f: &[CN], x: &CN) -> CN {
        f.iter().rev().fold(CN::zero(), |acc, c| &(&acc * x) + c)
    }
}

// ---------------------------------------------------------------------------
// Polynomial systems
// ---------------------------------------------------------------------------

/// Outcome of an exact solve: either every solution, or the solutions found
/// together with what could not be resolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Complete(Vec<Vec<CN>>),
    Indeterminate { found: Vec<Vec<CN>>, residual: Vec<String> },
}

impl SolveOutcome {
    pub fn points(&self) -> &[Vec<CN>] {
        match self {
            SolveOutcome::Complete(p) => p,
            SolveOutcome::Indeterminate { found, .. } => found,
        }
    }

    pub fn is_complete(&self) -> bool {
        matches!(self, SolveOutcome::Complete(_))
    }
}

struct Solver {
    residual: Vec<String>,
}

impl Solver {
    /// Common zeros with every active coordinate nonzero. Returned vectors
    /// assign a value to each active variable, in order.
    fn torus(&mut self, polys: &[Poly], active: &[usize]) -> Vec<Vec<(usize, CN)>> {
        let mut sys: Vec<Poly> = Vec::new();
        for p in polys {
            let p = p.remove_monomial_content();
            if p.is_zero() {
                continue;
            }
            if p.as_constant().is_some() {
                return Vec::new();
            }
            if !sys.contains(&p) {
                sys.push(p);
            }
        }
        if active.is_empty() {
            return vec![Vec::new()];
        }
        if sys.is_empty() {
            self.residual.push(format!("positive-dimensional solution set in {} variables", active.len()));
            return Vec::new();
        }
        sys.sort_by_key(|p| (p.vars_used().len(), p.total_degree()));

        let (v, candidates_for_v) = if sys[0].vars_used().len() == 1 {
            let v = sys[0].vars_used()[0];
            match univariate_roots(&sys[0].univariate(v)) {
                Ok(r) => (v, Some(r)),
                Err(residual) => {
                    self.residual.push(residual);
                    return Vec::new();
                }
            }
        } else {
            let p = &sys[0];
            let shared = p.vars_used().into_iter().find(|&v| sys[1..].iter().any(|q| q.degree_in(v) > 0));
            let Some(v) = shared else {
                self.residual.push(format!("underdetermined system near {p}"));
                return Vec::new();
            };
            (v, None)
        };

        let rest: Vec<usize> = active.iter().copied().filter(|&x| x != v).collect();
        let mut out = Vec::new();
        match candidates_for_v {
            Some(roots) => {
                for r in roots {
                    let reduced: Vec<Poly> = sys.iter().map(|q| q.substitute(v, &r)).collect();
                    for mut sol in self.torus(&reduced, &rest) {
                        sol.push((v, r.clone()));
                        out.push(sol);
                    }
                }
            }
            None => {
                let p = &sys[0];
                let eliminated: Vec<Poly> = sys[1..]
                    .iter()
                    .map(|q| if q.degree_in(v) > 0 { resultant(p, q, v) } else { q.clone() })
                    .collect();
                for partial in self.torus(&eliminated, &rest) {
                    let reduced: Vec<Poly> = sys
                        .iter()
                        .map(|q| partial.iter().fold(q.clone(), |acc, (i, x)| acc.substitute(*i, x)))
                        .collect();
                    let nonzero: Vec<&Poly> = reduced.iter().filter(|q| !q.is_zero()).collect();
                    let Some(first) = nonzero.first() else {
                        self.residual.push("free variable after back-substitution".into());
                        continue;
                    };
                    let roots = match univariate_roots(&first.univariate(v)) {
                        Ok(r) => r,
                        Err(residual) => {
                            self.residual.push(residual);
                            continue;
                        }
                    };
                    for r in roots {
                        if nonzero.iter().all(|q| q.substitute(v, &r).is_zero()) {
                            let mut sol = partial.clone();
                            sol.push((v, r));
                            out.push(sol);
                        }
                    }
                }
            }
        }
        out
    }

    /// Common zeros in affine space, stratified by which coordinates vanish.
    fn affine(&mut self, polys: &[Poly], nvars: usize) -> Vec<Vec<CN>> {
        let mut out = Vec::new();
        for mask in 0..(1u32 << nvars) {
            let zero: Vec<usize> = (0..nvars).filter(|i| mask & (1 << i) != 0).collect();
            let active: Vec<usize> = (0..nvars).filter(|i| mask & (1 << i) == 0).collect();
            let reduced: Vec<Poly> =
                polys.iter().map(|p| zero.iter().fold(p.clone(), |acc, &i| acc.substitute(i, &CN::zero()))).collect();
            for sol in self.torus(&reduced, &active) {
                let mut point = vec![CN::zero(); nvars];
                for (i, x) in sol {
                    point[i] = x;
                }
                out.push(point);
            }
        }
        out
    }
}

/// All common zeros of `polys` in affine `n`-space.
pub fn solve_affine(polys: &[Poly], nvars: usize) -> SolveOutcome {
    let mut s = Solver { residual: Vec::new() };
    let mut pts = s.affine(polys, nvars);
    sort_points(&mut pts);
    if s.residual.is_empty() {
        SolveOutcome::Complete(pts)
    } else {
        SolveOutcome::Indeterminate { found: pts, residual: s.residual }
    }
}

fn common_conductor(points: &[Vec<CN>]) -> u32 {
    points.iter().flatten().fold(1, |acc, c| acc.lcm(&c.conductor()))
}

fn sort_points(points: &mut Vec<Vec<CN>>) {
    let m = common_conductor(points);
    for p in points.iter_mut() {
        for c in p.iter_mut() {
            *c = c.lift(m).expect("within cap");
        }
    }
    points.sort();
    points.dedup();
}

// ---------------------------------------------------------------------------
// Weighted polynomials
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedPoly {
    pub names: Vec<String>,
    pub weights: Vec<u32>,
    pub poly: Poly,
}

impl WeightedPoly {
    pub fn new(names: Vec<String>, weights: Vec<u32>, poly: Poly) -> Self {
        assert_eq!(names.len(), weights.len());
        assert_eq!(names.len(), poly.nvars());
        Self { names, weights, poly }
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn var_index(&self, name: &str) -> Result<usize, SurfaceError> {
        self.names.iter().position(|n| n == name).ok_or_else(|| SurfaceError::UnknownVariable(name.into()))
    }

    pub fn weighted_degree(&self, exps: &[u32]) -> u32 {
        exps.iter().zip(&self.weights).map(|(e, w)| e * w).sum()
    }

    /// `x_i = value` with the variable removed.
    pub fn restrict(&self, i: usize, value: &CN) -> WeightedPoly {
        let mut names = self.names.clone();
        let mut weights = self.weights.clone();
        names.remove(i);
        weights.remove(i);
        WeightedPoly { names, weights, poly: self.poly.substitute(i, value).drop_var(i) }
    }

    pub fn eval(&self, x: &[CN]) -> CN {
        self.poly.eval(x)
    }

    pub fn gradient(&self) -> Vec<Poly> {
        (0..self.nvars()).map(|i| self.poly.derivative(i)).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "vars": self.names.iter().zip(&self.weights).map(|(n, w)| json!({"name": n, "weight": w})).collect::<Vec<_>>(),
            "poly": self.to_string(),
        })
    }
}

impl fmt::Display for WeightedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.poly.format_with(&self.names))
    }
}

/// Weighted degree shared by all terms, if there is one.
pub fn is_quasi_homogeneous(f: &WeightedPoly) -> Option<u32> {
    let mut degs = f.poly.terms().keys().map(|e| f.weighted_degree(e));
    let d = degs.next()?;
    degs.all(|x| x == d).then_some(d)
}

/// Checks `Σ wᵢ xᵢ ∂f/∂xᵢ = d·f` as a polynomial identity.
pub fn euler_identity(f: &WeightedPoly, d: u32) -> bool {
    let n = f.nvars();
    let lhs = (0..n).fold(Poly::zero(n), |acc, i| {
        acc.add(&Poly::var(n, i).mul(&f.poly.derivative(i)).scale(&CN::from_int(f.weights[i] as i64)))
    });
    lhs == f.poly.scale(&CN::from_int(d as i64))
}

/// `W² + Z³ + X⁵Y + aX⁴Z` on `P(1,1,2,3)` with coordinates `X, Y, Z, W`.
pub fn za_surface(a: &BigRational) -> WeightedPoly {
    let n = 4;
    let mut p = Poly::zero(n);
    p.add_term(vec![0, 0, 0, 2], CN::one());
    p.add_term(vec![0, 0, 3, 0], CN::one());
    p.add_term(vec![5, 1, 0, 0], CN::one());
    p.add_term(vec![4, 0, 1, 0], CN::from_rational(a.clone()));
    WeightedPoly::new(["X", "Y", "Z", "W"].map(String::from).to_vec(), vec![1, 1, 2, 3], p)
}

/// Canonical representative of a point under `xᵢ ↦ ζ^{wᵢ} xᵢ`, `ζ ∈ μ_w`.
fn weighted_canonical(p: &[CN], weights: &[u32], w: u32) -> Vec<CN> {
    let base = p.iter().fold(1u32, |acc, c| acc.lcm(&c.conductor()));
    let m = base.lcm(&w);
    let mut best: Option<Vec<CN>> = None;
    for k in 0..w {
        let q: Vec<CN> = p
            .iter()
            .zip(weights)
            .map(|(c, &wi)| {
                let z = CN::zeta_pow(w, (k * wi) as i64).expect("small conductor");
                (c * &z).lift(m).expect("within cap")
            })
            .collect();
        if best.as_ref().is_none_or(|b| q < *b) {
            best = Some(q);
        }
    }
    best.expect("w >= 1")
}

/// Singular points of the affine cone over a quasi-homogeneous hypersurface,
/// up to the weighted scaling, each normalized with first nonzero coordinate 1.
pub fn cone_singular_points(f: &WeightedPoly) -> Result<SolveOutcome, SurfaceError> {
    let n = f.nvars();
    if n > 4 {
        return Err(SurfaceError::TooManyVariables(n, 4));
    }
    is_quasi_homogeneous(f).ok_or(SurfaceError::NotQuasiHomogeneous)?;
    let mut system = vec![f.poly.clone()];
    system.extend(f.gradient());

    let mut solver = Solver { residual: Vec::new() };
    let mut points = Vec::new();
    for lead in 0..n {
        // coordinates before `lead` vanish, x_lead = 1
        let fixed: Vec<Poly> = system
            .iter()
            .map(|p| {
                let q = (0..lead).fold(p.clone(), |acc, i| acc.substitute(i, &CN::zero()));
                q.substitute(lead, &CN::one())
            })
            .collect();
        let rest = n - lead - 1;
        for mask in 0..(1u32 << rest) {
            let zero: Vec<usize> = (0..rest).filter(|j| mask & (1 << j) != 0).map(|j| lead + 1 + j).collect();
            let active: Vec<usize> = (0..rest).filter(|j| mask & (1 << j) == 0).map(|j| lead + 1 + j).collect();
            let reduced: Vec<Poly> =
                fixed.iter().map(|p| zero.iter().fold(p.clone(), |acc, &i| acc.substitute(i, &CN::zero()))).collect();
            for sol in solver.torus(&reduced, &active) {
                let mut point = vec![CN::zero(); n];
                point[lead] = CN::one();
                for (i, x) in sol {
                    point[i] = x;
                }
                points.push(weighted_canonical(&point, &f.weights, f.weights[lead]));
            }
        }
    }
    for p in &points {
        debug_assert!(system.iter().all(|q| q.eval(p).is_zero()));
    }
    sort_points(&mut points);
    Ok(if solver.residual.is_empty() {
        SolveOutcome::Complete(points)
    } else {
        SolveOutcome::Indeterminate { found: points, residual: solver.residual }
    })
}

// ---------------------------------------------------------------------------
// Plane curve germs
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GermClass {
    Smooth,
    Node,
    Cusp,
    Other,
}

impl fmt::Display for GermClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GermClass::Smooth => "smooth",
            GermClass::Node => "node",
            GermClass::Cusp => "cusp",
            GermClass::Other => "other",
        })
    }
}

/// Classifies the germ of `{f = 0}` at `p` from its 3-jet.
pub fn germ_classify(f: &Poly, p: &[CN]) -> Result<GermClass, SurfaceError> {
    if f.nvars() != 2 || p.len() != 2 {
        return Err(SurfaceError::Arity { expected: 2, got: f.nvars().max(p.len()) });
    }
    let value = f.eval(p);
    if !value.is_zero() {
        return Err(SurfaceError::NotOnCurve(value.to_string()));
    }
    let g = f.translate(p);
    if !g.homogeneous_part(1).is_zero() {
        return Ok(GermClass::Smooth);
    }
    let q = g.homogeneous_part(2);
    if q.is_zero() {
        return Ok(GermClass::Other);
    }
    let coeff = |e: [u32; 2]| q.terms().get(&e.to_vec()).cloned().unwrap_or_else(CN::zero);
    let (a, b, c) = (coeff([2, 0]), coeff([1, 1]), coeff([0, 2]));
    let disc = &(&b * &b) - &(&(&a * &c) * &CN::from_int(4));
    if !disc.is_zero() {
        return Ok(GermClass::Node);
    }
    // kernel of the Hessian of a u² + b uv + c v²
    let kernel = if !a.is_zero() { [-&b, &a * &CN::from_int(2)] } else { [&c * &CN::from_int(2), -&b] };
    let cubic = g.homogeneous_part(3);
    Ok(if cubic.eval(&kernel).is_zero() { GermClass::Other } else { GermClass::Cusp })
}

/// A singular point of a curve in a weighted projective plane, found in the
/// chart where `chart` is the first nonzero coordinate (set to 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSingularity {
    pub chart: String,
    pub point: Vec<CN>,
    pub germ: GermClass,
}

/// Singular points of a curve `{f = 0}` in a weighted plane (three variables),
/// each classified in the affine chart of its first nonzero coordinate.
pub fn curve_singularities(f: &WeightedPoly) -> Result<(Vec<CurveSingularity>, bool), SurfaceError> {
    if f.nvars() != 3 {
        return Err(SurfaceError::Arity { expected: 3, got: f.nvars() });
    }
    let mut out = Vec::new();
    let mut complete = true;
    for lead in 0..3 {
        let local = f.restrict(lead, &CN::one());
        let mut system = vec![local.poly.clone()];
        system.extend(local.gradient());
        let outcome = solve_affine(&system, 2);
        complete &= outcome.is_complete();
        for pt in outcome.points() {
            // a point belongs to the chart of its first nonzero coordinate
            if pt[..lead].iter().any(|c| !c.is_zero()) {
                continue;
            }
            let germ = germ_classify(&local.poly, pt)?;
            let mut full = pt.clone();
            full.insert(lead, CN::one());
            out.push(CurveSingularity {
                chart: f.names[lead].clone(),
                point: weighted_canonical(&full, &f.weights, f.weights[lead]),
                germ,
            });
        }
    }
    Ok((out, complete))
}

/// The chart `Y = 1` of `Z_a` around the cone point `[0,1,0,0]`.
pub fn za_cone_chart(a: &BigRational) -> WeightedPoly {
    let z = za_surface(a);
    z.restrict(1, &CN::one())
}

// ---------------------------------------------------------------------------
// Polynomial text format
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn tokenize(s: &str, offset: usize) -> Result<Vec<(usize, Tok)>, SurfaceError> {
    let b = s.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < b.len() {
        let c = b[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((start, Tok::Plus)),
            b'-' => out.push((start, Tok::Minus)),
            b'*' => out.push((start, Tok::Star)),
            b'/' => out.push((start, Tok::Slash)),
            b'^' => out.push((start, Tok::Caret)),
            b'0'..=b'9' => {
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Num(s[start..i].parse().expect("digits"))));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_' || b[i] == b'\'') {
                    i += 1;
                }
                out.push((start, Tok::Ident(s[start..i].to_string())));
                continue;
            }
            _ => return Err(SurfaceError::Parse { pos: offset + start, msg: format!("unexpected `{}`", c as char) }),
        }
        i += 1;
    }
    Ok(out.into_iter().map(|(p, t)| (p + offset, t)).collect())
}

/// Parses `vars X:1 Y:1 Z:2 W:3; W^2 + Z^3 + X^5*Y + a*X^4*Z`.
///
/// Identifiers listed in `params` are replaced by their values. Without a
/// `vars` section the remaining identifiers become weight-1 variables in
/// order of first appearance.
pub fn parse_weighted(text: &str, params: &HashMap<String, BigRational>) -> Result<WeightedPoly, SurfaceError> {
    let (decl, body, body_offset) = match text.split_once(';') {
        Some((d, b)) if d.trim_start().starts_with("vars") => (Some(d), b, d.len() + 1),
        _ => (None, text, 0),
    };
    let toks = tokenize(body, body_offset)?;
    let (names, weights) = match decl {
        Some(d) => {
            let mut names = Vec::new();
            let mut weights = Vec::new();
            for item in d.trim_start()["vars".len()..].split_whitespace() {
                let (n, w) = item.split_once(':').unwrap_or((item, "1"));
                let w: u32 = w
                    .parse()
                    .ok()
                    .filter(|&w| w > 0)
                    .ok_or_else(|| SurfaceError::Parse { pos: 0, msg: format!("bad weight in `{item}`") })?;
                if names.iter().any(|x| x == n) {
                    return Err(SurfaceError::Parse { pos: 0, msg: format!("variable `{n}` declared twice") });
                }
                names.push(n.to_string());
                weights.push(w);
            }
            (names, weights)
        }
        None => {
            let mut names: Vec<String> = Vec::new();
            for (_, t) in &toks {
                if let Tok::Ident(n) = t {
                    if !params.contains_key(n) && !names.contains(n) {
                        names.push(n.clone());
                    }
                }
            }
            let w = vec![1; names.len()];
            (names, w)
        }
    };
    let n = names.len();
    let mut pos = 0;
    let err = |toks: &[(usize, Tok)], pos: usize, msg: &str| SurfaceError::Parse {
        pos: toks.get(pos).map_or(text.len(), |t| t.0),
        msg: msg.to_string(),
    };
    let mut poly = Poly::zero(n);
    if toks.is_empty() {
        return Err(err(&toks, 0, "empty polynomial"));
    }
    loop {
        let mut sign = BigRational::one();
        while let Some((_, t @ (Tok::Plus | Tok::Minus))) = toks.get(pos) {
            if *t == Tok::Minus {
                sign = -sign;
            }
            pos += 1;
        }
        let mut coeff = sign;
        let mut exps = vec![0u32; n];
        loop {
            match toks.get(pos) {
                Some((_, Tok::Num(a))) => {
                    pos += 1;
                    let mut q = BigRational::from_integer(a.clone());
                    if let Some((_, Tok::Slash)) = toks.get(pos) {
                        match toks.get(pos + 1) {
                            Some((_, Tok::Num(d))) if !d.is_zero() => {
                                q /= BigRational::from_integer(d.clone());
                                pos += 2;
                            }
                            _ => return Err(err(&toks, pos + 1, "expected a nonzero denominator")),
                        }
                    }
                    coeff *= q;
                }
                Some((_, Tok::Ident(name))) => {
                    pos += 1;
                    let mut e = 1u32;
                    if let Some((_, Tok::Caret)) = toks.get(pos) {
                        match toks.get(pos + 1) {
                            Some((_, Tok::Num(k))) => {
                                e = k.to_u32().filter(|&k| k <= 1000).ok_or_else(|| err(&toks, pos + 1, "exponent too large"))?;
                                pos += 2;
                            }
                            _ => return Err(err(&toks, pos + 1, "expected an exponent")),
                        }
                    }
                    if let Some(v) = params.get(name) {
                        coeff *= num_traits::pow(v.clone(), e as usize);
                    } else if let Some(i) = names.iter().position(|x| x == name) {
                        exps[i] += e;
                    } else {
                        return Err(SurfaceError::UnknownVariable(name.clone()));
                    }
                }
                _ => return Err(err(&toks, pos, "expected a number or a variable")),
            }
            match toks.get(pos) {
                Some((_, Tok::Star)) => pos += 1,
                _ => break,
            }
        }
        poly.add_term(exps, CN::from_rational(coeff));
        match toks.get(pos) {
            None => break,
            Some((_, Tok::Plus | Tok::Minus)) => {}
            Some(_) => return Err(err(&toks, pos, "expected `+`, `-` or `*`")),
        }
    }
    Ok(WeightedPoly::new(names, weights, poly))
}

/// Parses one coordinate: a rational `p/q`, or `[c*][-]e(k/m)`.
pub fn parse_value(s: &str) -> Result<CN, SurfaceError> {
    let s = s.trim();
    let bad = || SurfaceError::Parse { pos: 0, msg: format!("bad value `{s}`") };
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, s),
    };
    let value = if let Some(idx) = body.find("e(") {
        let scale = match body[..idx].trim().trim_end_matches('*').trim() {
            "" => BigRational::one(),
            c => c.parse::<BigRational>().map_err(|_| bad())?,
        };
        let inner = body[idx + 2..].strip_suffix(')').ok_or_else(bad)?;
        let root: RootOfUnity = inner.parse().map_err(|_| bad())?;
        CN::from_root(&root).scale(&scale)
    } else {
        CN::from_rational(body.parse::<BigRational>().map_err(|_| bad())?)
    };
    Ok(if neg { -value } else { value })
}

/// Parses `0,0`, `[1, e(1/4)]` and similar.
pub fn parse_point(s: &str) -> Result<Vec<CN>, SurfaceError> {
    let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
    inner.split(',').map(parse_value).collect()
}

// ---------------------------------------------------------------------------
// Kodaira fibres
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KodairaFiber {
    I(u32),
    II,
    III,
    IV,
    IStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaFiber {
    pub fn euler(&self) -> u32 {
        match *self {
            KodairaFiber::I(n) => n,
            KodairaFiber::II => 2,
            KodairaFiber::III => 3,
            KodairaFiber::IV => 4,
            KodairaFiber::IStar(n) => n + 6,
            KodairaFiber::IVStar => 8,
            KodairaFiber::IIIStar => 9,
            KodairaFiber::IIStar => 10,
        }
    }

    pub fn is_reducible(&self) -> bool {
        !matches!(self, KodairaFiber::I(0) | KodairaFiber::I(1) | KodairaFiber::II)
    }

    /// Singular fibre types with Euler number at most `e`.
    pub fn singular_types_up_to(e: u32) -> Vec<KodairaFiber> {
        let mut v: Vec<KodairaFiber> = (1..=e).map(KodairaFiber::I).collect();
        v.extend([KodairaFiber::II, KodairaFiber::III, KodairaFiber::IV]);
        v.extend((0..=e.saturating_sub(6)).map(KodairaFiber::IStar));
        v.extend([KodairaFiber::IVStar, KodairaFiber::IIIStar, KodairaFiber::IIStar]);
        v.retain(|t| t.euler() <= e && t.euler() > 0);
        v
    }
}

impl fmt::Display for KodairaFiber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaFiber::I(n) => write!(f, "I{n}"),
            KodairaFiber::II => f.write_str("II"),
            KodairaFiber::III => f.write_str("III"),
            KodairaFiber::IV => f.write_str("IV"),
            KodairaFiber::IStar(n) => write!(f, "I{n}*"),
            KodairaFiber::IVStar => f.write_str("IV*"),
            KodairaFiber::IIIStar => f.write_str("III*"),
            KodairaFiber::IIStar => f.write_str("II*"),
        }
    }
}

impl FromStr for KodairaFiber {
    type Err = SurfaceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || SurfaceError::UnknownFiber(s.to_string());
        Ok(match t {
            "II" => KodairaFiber::II,
            "III" => KodairaFiber::III,
            "IV" => KodairaFiber::IV,
            "IV*" => KodairaFiber::IVStar,
            "III*" => KodairaFiber::IIIStar,
            "II*" => KodairaFiber::IIStar,
            _ => {
                let rest = t.strip_prefix('I').ok_or_else(bad)?;
                match rest.strip_suffix('*') {
                    Some(n) => KodairaFiber::IStar(n.parse().map_err(|_| bad())?),
                    None => KodairaFiber::I(rest.parse().map_err(|_| bad())?),
                }
            }
        })
    }
}

pub fn kodaira_euler(t: KodairaFiber) -> u32 {
    t.euler()
}

pub fn kodaira_reducible(t: KodairaFiber) -> bool {
    t.is_reducible()
}

/// Multisets of singular fibres containing `must_contain` with Euler numbers
/// summing to `total_euler`; with `others_irreducible` the remaining fibres
/// are restricted to `I1` and `II`. Shorter lists come first, members are
/// listed by decreasing Euler number.
pub fn fiber_configurations(must_contain: KodairaFiber, total_euler: u32, others_irreducible: bool) -> Vec<Vec<KodairaFiber>> {
    let Some(rest) = total_euler.checked_sub(must_contain.euler()) else {
        return Vec::new();
    };
    let mut pool = KodairaFiber::singular_types_up_to(rest);
    if others_irreducible {
        pool.retain(|t| !t.is_reducible());
    }
    pool.sort_by(|a, b| b.euler().cmp(&a.euler()).then(a.cmp(b)));

    fn go(pool: &[KodairaFiber], start: usize, rest: u32, cur: &mut Vec<KodairaFiber>, out: &mut Vec<Vec<KodairaFiber>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for i in start..pool.len() {
            if pool[i].euler() <= rest {
                cur.push(pool[i]);
                go(pool, i, rest - pool[i].euler(), cur, out);
                cur.pop();
            }
        }
    }
    let mut tails = Vec::new();
    go(&pool, 0, rest, &mut Vec::new(), &mut tails);
    let mut out: Vec<Vec<KodairaFiber>> = tails
        .into_iter()
        .map(|t| {
            let mut v = vec![must_contain];
            v.extend(t);
            v.sort_by(|a, b| b.euler().cmp(&a.euler()).then(a.cmp(b)));
            v
        })
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

// ---------------------------------------------------------------------------
// Noether bookkeeping
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoetherReport {
    pub degree: u32,
    /// Second Betti number of the minimal resolution, `10 - d`.
    pub b2: u32,
    pub exceptional_rank: u32,
    pub expected_rank: u32,
    pub euler: i64,
    pub pass: bool,
}

impl NoetherReport {
    pub fn to_json(&self) -> Value {
        json!({
            "degree": self.degree,
            "b2": self.b2,
            "exceptional_rank": self.exceptional_rank,
            "expected_rank": self.expected_rank,
            "euler": self.euler,
            "pass": self.pass,
        })
    }
}

/// For a rank-one Gorenstein surface of degree `d` whose resolution is a
/// smooth rational surface: `b₂ = 10 - d`, the exceptional rank is `9 - d`
/// and the Euler number of the singular surface is 3.
pub fn noether_check(d: i64, config: &SingularityConfig) -> Result<NoetherReport, SurfaceError> {
    if !(1..=9).contains(&d) {
        return Err(SurfaceError::DegreeRange(d));
    }
    let d = d as u32;
    let rank = config.rank();
    let euler = 12 - d as i64 - rank as i64;
    Ok(NoetherReport {
        degree: d,
        b2: 10 - d,
        exceptional_rank: rank,
        expected_rank: 9 - d,
        euler,
        pass: rank == 9 - d && euler == 3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn parse(s: &str) -> WeightedPoly {
        parse_weighted(s, &HashMap::new()).unwrap()
    }

    #[test]
    fn quasi_homogeneity() {
        let z = za_surface(&q(1));
        assert_eq!(is_quasi_homogeneous(&z), Some(6));
        assert!(euler_identity(&z, 6));
        let f = parse("vars X:1 Y:1 Z:2 W:3; W^2 + Z^3 + X^4*Z");
        assert_eq!(is_quasi_homogeneous(&f), Some(6));
        let g = parse("vars W:3 Z:2; W^2 + Z^2");
        assert_eq!(is_quasi_homogeneous(&g), None);
        assert!(!euler_identity(&g, 6));
    }

    #[test]
    fn parse_with_parameter() {
        let params = HashMap::from([("a".to_string(), q(1))]);
        let f = parse_weighted("vars X:1 Y:1 Z:2 W:3; W^2 + Z^3 + X^5*Y + a*X^4*Z", &params).unwrap();
        assert_eq!(f, za_surface(&q(1)));
        assert!(matches!(
            parse_weighted("vars X:1; X + b", &HashMap::new()),
            Err(SurfaceError::UnknownVariable(ref v)) if v == "b"
        ));
        assert!(parse_weighted("vars X:1; X +", &HashMap::new()).is_err());
        assert!(parse_weighted("vars X:1; X ^", &HashMap::new()).is_err());
        let f = parse("w^2 - 1/2*z^3 + 3");
        assert_eq!(f.names, vec!["w", "z"]);
        assert_eq!(f.to_string(), "w^2 - 1/2*z^3 + 3");
    }

    #[test]
    fn za_chart_at_cone_point() {
        let chart = za_cone_chart(&q(0));
        assert_eq!(chart.to_string(), parse("vars X:1 Z:2 W:3; W^2 + Z^3 + X^5").to_string());
    }

    #[test]
    fn za_singular_locus() {
        for a in [0, 1] {
            let out = cone_singular_points(&za_surface(&q(a))).unwrap();
            let expected = vec![vec![CN::zero(), CN::one(), CN::zero(), CN::zero()]];
            assert_eq!(out, SolveOutcome::Complete(expected), "a = {a}");
        }
        let quadric = parse("vars X:1 Y:1 Z:1 W:1; X^2 + Y^2 + Z^2 + W^2");
        assert_eq!(cone_singular_points(&quadric).unwrap(), SolveOutcome::Complete(vec![]));
        let bad = parse("vars X:1 Y:1; X^2 + Y");
        assert_eq!(cone_singular_points(&bad), Err(SurfaceError::NotQuasiHomogeneous));
    }

    #[test]
    fn cone_over_nodal_cubic() {
        // Y²Z = X³ + X²Z is singular at [0,0,1]
        let f = parse("vars X:1 Y:1 Z:1; Y^2*Z - X^3 - X^2*Z");
        let out = cone_singular_points(&f).unwrap();
        assert_eq!(out, SolveOutcome::Complete(vec![vec![CN::zero(), CN::zero(), CN::one()]]));
    }

    #[test]
    fn torus_system_with_roots_of_unity() {
        let f = parse("x^2 - y");
        let g = Poly::var(2, 1).pow(2).sub(&Poly::var(2, 0));
        let out = solve_affine(&[f.poly.clone(), g], 2);
        let pts = out.points();
        assert!(out.is_complete());
        assert_eq!(pts.len(), 4); // origin and three torus points
        for p in pts {
            assert!(f.poly.eval(p).is_zero());
        }
    }

    #[test]
    fn unresolved_factor_is_reported() {
        let f = parse("x^3 - 2");
        let out = solve_affine(&[f.poly.clone()], 1);
        assert!(matches!(out, SolveOutcome::Indeterminate { ref residual, .. } if residual[0].contains("t^3")));
    }

    #[test]
    fn resultant_of_linear_forms() {
        let p = parse("x + y - 3").poly;
        let q = parse("x - y - 1").poly;
        let r = resultant(&p, &q, 0);
        // eliminating x: (3 - y) - (1 + y) up to sign
        let y = r.univariate(1);
        assert_eq!(univariate_roots(&y).unwrap(), vec![CN::one()]);
    }

    #[test]
    fn germs() {
        let origin = [CN::zero(), CN::zero()];
        assert_eq!(germ_classify(&parse("w^2 + z^3").poly, &origin).unwrap(), GermClass::Cusp);
        assert_eq!(germ_classify(&parse("w^2 - z^2").poly, &origin).unwrap(), GermClass::Node);
        assert_eq!(germ_classify(&parse("w^2 + z^4").poly, &origin).unwrap(), GermClass::Other);
        assert_eq!(germ_classify(&parse("w^3 + z^3").poly, &origin).unwrap(), GermClass::Other);
        assert_eq!(germ_classify(&parse("w^2 + z^3 + z").poly, &origin).unwrap(), GermClass::Smooth);
        assert!(matches!(germ_classify(&parse("w^2 + 1 + z").poly, &origin), Err(SurfaceError::NotOnCurve(_))));
        // points of w² + z³ + z on the line w = 0
        let curve = parse("w^2 + z^3 + z").poly;
        for z in ["e(1/4)", "e(3/4)"] {
            let p = [CN::zero(), parse_value(z).unwrap()];
            assert_eq!(germ_classify(&curve, &p).unwrap(), GermClass::Smooth);
        }
    }

    #[test]
    fn boundary_curves_of_za() {
        for a in [0, 1] {
            let z = za_surface(&q(a));
            let x_curve = z.restrict(0, &CN::zero());
            let (sing, complete) = curve_singularities(&x_curve).unwrap();
            assert!(complete);
            assert_eq!(sing.len(), 1);
            assert_eq!(sing[0].germ, GermClass::Cusp);
            assert_eq!(sing[0].chart, "Y");

            let y_curve = z.restrict(1, &CN::zero());
            let (sing, complete) = curve_singularities(&y_curve).unwrap();
            assert!(complete);
            if a == 0 {
                assert_eq!(sing.iter().map(|s| s.germ).collect::<Vec<_>>(), vec![GermClass::Cusp]);
            } else {
                assert!(sing.is_empty());
            }
        }
    }

    #[test]
    fn orbifold_points_not_on_za() {
        for a in [0, 1] {
            let z = za_surface(&q(a));
            for p in [[0, 0, 1, 0], [0, 0, 0, 1]] {
                assert!(z.eval(&p.map(CN::from_int)).is_one());
            }
        }
    }

    #[test]
    fn kodaira_table() {
        assert_eq!(kodaira_euler(KodairaFiber::IIStar), 10);
        assert!(kodaira_reducible(KodairaFiber::IIStar));
        assert_eq!(kodaira_euler(KodairaFiber::I(1)), 1);
        assert!(!kodaira_reducible(KodairaFiber::I(1)));
        assert!(!kodaira_reducible(KodairaFiber::II));
        assert_eq!(kodaira_euler(KodairaFiber::IStar(2)), 8);
        for s in ["I0", "I7", "II", "III", "IV", "I0*", "I3*", "IV*", "III*", "II*"] {
            assert_eq!(s.parse::<KodairaFiber>().unwrap().to_string(), s);
        }
        assert!("V".parse::<KodairaFiber>().is_err());
    }

    #[test]
    fn fibre_enumeration() {
        use KodairaFiber::*;
        assert_eq!(fiber_configurations(IIStar, 12, true), vec![vec![IIStar, II], vec![IIStar, I(1), I(1)]]);
        assert_eq!(fiber_configurations(IIStar, 11, true), vec![vec![IIStar, I(1)]]);
        assert_eq!(fiber_configurations(IIStar, 10, true), vec![vec![IIStar]]);
        assert_eq!(fiber_configurations(IIStar, 9, true), Vec::<Vec<KodairaFiber>>::new());
        let all = fiber_configurations(IIStar, 12, false);
        assert!(all.contains(&vec![IIStar, I(2)]));
        assert!(all.contains(&vec![IIStar, I(1), I(1)]));
        assert!(!all.contains(&vec![IIStar, III]));
    }

    #[test]
    fn noether() {
        assert!(noether_check(6, &"A1+A2".parse().unwrap()).unwrap().pass);
        assert!(noether_check(1, &"E8".parse().unwrap()).unwrap().pass);
        assert!(!noether_check(6, &"A4".parse().unwrap()).unwrap().pass);
        assert_eq!(noether_check(0, &SingularityConfig::empty()), Err(SurfaceError::DegreeRange(0)));
    }
}
