//! Finitely presented groups: coset enumeration, Smith normal form and
//! abelianization.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_COSET_BOUND: usize = 10_000;
pub const COSET_BOUND_ENV: &str = "DELPEZZO_COSET_BOUND";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FpError {
    #[error("presentation parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid presentation: {0}")]
    Invalid(String),
    #[error("coset enumeration exceeded the bound of {0} cosets")]
    Exceeded(usize),
    #[error("Mumford presentation needs 4 <= i <= 8, got {0}")]
    MumfordRange(i64),
}

/// Coset bound from `DELPEZZO_COSET_BOUND`, falling back to the default.
pub fn default_coset_bound() -> usize {
    std::env::var(COSET_BOUND_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&b| b >= 1)
        .unwrap_or(DEFAULT_COSET_BOUND)
}

/// Generators `1..=generators`; a relator is a word of signed generator indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: usize,
    pub relators: Vec<Vec<i32>>,
}

impl Presentation {
    pub fn new(generators: usize, relators: Vec<Vec<i32>>) -> Result<Self, FpError> {
        let p = Self { generators, relators };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), FpError> {
        for (k, r) in self.relators.iter().enumerate() {
            if r.is_empty() {
                return Err(FpError::Invalid(format!("relator {} is empty", k + 1)));
            }
            if let Some(&g) = r.iter().find(|&&g| g == 0 || g.unsigned_abs() as usize > self.generators) {
                return Err(FpError::Invalid(format!("relator {} uses unknown generator {g}", k + 1)));
            }
        }
        Ok(())
    }

    /// Relator exponent sums, one row per relator.
    pub fn exponent_matrix(&self) -> IntegerMatrix {
        let rows = self
            .relators
            .iter()
            .map(|r| {
                let mut row = vec![BigInt::zero(); self.generators];
                for &g in r {
                    row[g.unsigned_abs() as usize - 1] += g.signum();
                }
                row
            })
            .collect();
        IntegerMatrix::from_rows(rows, self.generators)
    }
}

fn write_word(f: &mut fmt::Formatter<'_>, w: &[i32]) -> fmt::Result {
    // group runs of the same letter into syllables
    let mut syllables: Vec<(i32, i32)> = Vec::new();
    for &g in w {
        match syllables.last_mut() {
            Some((gen, e)) if *gen == g.abs() && (*e).signum() == g.signum() => *e += g.signum(),
            _ => syllables.push((g.abs(), g.signum())),
        }
    }
    for (k, (g, e)) in syllables.iter().enumerate() {
        if k > 0 {
            f.write_str(" * ")?;
        }
        if *e == 1 {
            write!(f, "{g}")?;
        } else {
            write!(f, "{g}^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gens={}", self.generators)?;
        for r in &self.relators {
            f.write_str("; rel=")?;
            write_word(f, r)?;
        }
        Ok(())
    }
}

struct WordParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> WordParser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, FpError> {
        Err(FpError::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), FpError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{}`", c as char))
        }
    }

    fn int(&mut self) -> Result<i64, FpError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .or_else(|_| self.err("integer too large"))
    }

    fn signed_int(&mut self) -> Result<i64, FpError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            Ok(-self.int()?)
        } else {
            self.int()
        }
    }

    // exponent := '-'? (INT | '(' INT (('+'|'-') INT)* ')')
    fn exponent(&mut self) -> Result<i64, FpError> {
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let v = if self.peek() == Some(b'(') {
            self.pos += 1;
            let mut v = self.signed_int()?;
            loop {
                match self.peek() {
                    Some(b'+') => {
                        self.pos += 1;
                        v += self.int()?;
                    }
                    Some(b'-') => {
                        self.pos += 1;
                        v -= self.int()?;
                    }
                    _ => break,
                }
            }
            self.expect(b')')?;
            v
        } else {
            self.int()?
        };
        Ok(if neg { -v } else { v })
    }

    fn factor(&mut self) -> Result<Vec<i32>, FpError> {
        let base = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(b')')?;
                w
            }
            Some(c) if c.is_ascii_digit() => {
                let g = self.int()?;
                vec![i32::try_from(g).or_else(|_| self.err("generator index too large"))?]
            }
            _ => return self.err("expected a generator or `(`"),
        };
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let e = self.exponent()?;
        if e.unsigned_abs() > 1_000_000 {
            return self.err("exponent too large");
        }
        let unit: Vec<i32> = if e < 0 { base.iter().rev().map(|g| -g).collect() } else { base };
        Ok(unit.repeat(e.unsigned_abs() as usize))
    }

    fn word(&mut self) -> Result<Vec<i32>, FpError> {
        let mut w = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    w.extend(self.factor()?);
                }
                Some(c) if c == b'(' || c.is_ascii_digit() => w.extend(self.factor()?),
                _ => return Ok(w),
            }
        }
    }
}

/// Parses a single word such as `(1 2)^2 * 1^-3`.
pub fn parse_word(s: &str) -> Result<Vec<i32>, FpError> {
    let mut p = WordParser { src: s.as_bytes(), pos: 0 };
    let w = p.word()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(w)
}

/// Text format: `gens=2; rel=(1 2)^2 * 1^-3; rel=1^3 * 2^-(8-3)`.
impl FromStr for Presentation {
    type Err = FpError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut gens = None;
        let mut rels = Vec::new();
        let mut offset = 0;
        for item in s.split(';') {
            let here = offset;
            offset += item.len() + 1;
            let trimmed = item.trim();
            if trimmed.is_empty() {
                continue;
            }
            let (key, value) = trimmed
                .split_once('=')
                .ok_or(FpError::Parse { pos: here, msg: format!("expected `key=value`, got `{trimmed}`") })?;
            match key.trim() {
                "gens" => {
                    let n = value
                        .trim()
                        .parse::<usize>()
                        .map_err(|_| FpError::Parse { pos: here, msg: "bad generator count".into() })?;
                    gens = Some(n);
                }
                "rel" => {
                    let w = parse_word(value).map_err(|e| match e {
                        FpError::Parse { pos, msg } => FpError::Parse { pos: pos + here, msg },
                        other => other,
                    })?;
                    rels.push(w);
                }
                other => return Err(FpError::Parse { pos: here, msg: format!("unknown key `{other}`") }),
            }
        }
        let gens = gens.ok_or(FpError::Parse { pos: 0, msg: "missing `gens=`".into() })?;
        Presentation::new(gens, rels)
    }
}

/// `⟨e2, e3 | (e2 e3)² = e2³ = e3^(i-3)⟩` for `4 <= i <= 8`.
pub fn mumford_presentation(i: i64) -> Result<Presentation, FpError> {
    if !(4..=8).contains(&i) {
        return Err(FpError::MumfordRange(i));
    }
    let first = vec![1, 2, 1, 2, -1, -1, -1];
    let mut second = vec![1, 1, 1];
    second.extend(std::iter::repeat_n(-2, (i - 3) as usize));
    Presentation::new(2, vec![first, second])
}

// ---------------------------------------------------------------------------
// Todd-Coxeter
// ---------------------------------------------------------------------------

const UNDEF: usize = usize::MAX;

/// Column of a signed generator: `2(g-1)` for `g`, `2(g-1)+1` for `g⁻¹`.
fn column(g: i32) -> usize {
    let base = 2 * (g.unsigned_abs() as usize - 1);
    if g > 0 {
        base
    } else {
        base + 1
    }
}

fn inverse_column(c: usize) -> usize {
    c ^ 1
}

/// A complete coset table over the trivial subgroup; coset 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CosetTable {
    generators: usize,
    rows: Vec<Vec<usize>>,
}

impl CosetTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    /// Image of a coset under a signed generator.
    pub fn act(&self, coset: usize, g: i32) -> usize {
        self.rows[coset][column(g)]
    }

    pub fn act_word(&self, coset: usize, w: &[i32]) -> usize {
        w.iter().fold(coset, |c, &g| self.act(c, g))
    }

    /// Checks that generator columns are permutations and that every relator
    /// fixes every coset.
    pub fn verify(&self, p: &Presentation) -> bool {
        let n = self.len();
        for g in 1..=self.generators as i32 {
            let mut seen = vec![false; n];
            for c in 0..n {
                let d = self.act(c, g);
                if d >= n || seen[d] || self.act(d, -g) != c {
                    return false;
                }
                seen[d] = true;
            }
        }
        p.relators.iter().all(|r| (0..n).all(|c| self.act_word(c, r) == c))
    }
}

struct Enumerator {
    cols: usize,
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    live: usize,
    bound: usize,
    queue: Vec<usize>,
}

impl Enumerator {
    fn new(cols: usize, bound: usize) -> Self {
        Self { cols, table: vec![vec![UNDEF; cols]], parent: vec![0], live: 1, bound, queue: Vec::new() }
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut k = c;
        while self.parent[k] != r {
            let next = self.parent[k];
            self.parent[k] = r;
            k = next;
        }
        r
    }

    fn define(&mut self, c: usize, x: usize) -> Result<(), FpError> {
        if self.table.len() >= self.bound {
            return Err(FpError::Exceeded(self.bound));
        }
        let n = self.table.len();
        self.table.push(vec![UNDEF; self.cols]);
        self.parent.push(n);
        self.live += 1;
        self.table[c][x] = n;
        self.table[n][inverse_column(x)] = c;
        Ok(())
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        self.parent[hi] = lo;
        self.live -= 1;
        self.queue.push(hi);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let e = self.queue[i];
            i += 1;
            for x in 0..self.cols {
                let f = self.table[e][x];
                if f == UNDEF {
                    continue;
                }
                let xi = inverse_column(x);
                if self.table[f][xi] == e {
                    self.table[f][xi] = UNDEF;
                }
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                if self.table[e1][x] != UNDEF {
                    let t = self.table[e1][x];
                    self.merge(f1, t);
                } else if self.table[f1][xi] != UNDEF {
                    let t = self.table[f1][xi];
                    self.merge(e1, t);
                } else {
                    self.table[e1][x] = f1;
                    self.table[f1][xi] = e1;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<(), FpError> {
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len() as isize - 1);
        loop {
            while (i as isize) <= j && self.table[f][w[i]] != UNDEF {
                f = self.table[f][w[i]];
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i as isize && self.table[b][inverse_column(w[j as usize])] != UNDEF {
                b = self.table[b][inverse_column(w[j as usize])];
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i as isize {
                self.table[f][w[i]] = b;
                self.table[b][inverse_column(w[i])] = f;
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }

    fn compact(&self, generators: usize) -> CosetTable {
        let mut index = vec![UNDEF; self.table.len()];
        let mut next = 0;
        for c in 0..self.table.len() {
            if self.is_live(c) {
                index[c] = next;
                next += 1;
            }
        }
        let rows = (0..self.table.len())
            .filter(|&c| self.is_live(c))
            .map(|c| self.table[c].iter().map(|&d| index[d]).collect())
            .collect();
        CosetTable { generators, rows }
    }
}

/// Enumerates the cosets of the trivial subgroup (HLT strategy, no lookahead).
///
/// The bound caps the total number of cosets ever defined.
pub fn coset_enumerate(p: &Presentation, bound: usize) -> Result<CosetTable, FpError> {
    p.validate()?;
    if bound == 0 {
        return Err(FpError::Invalid("coset bound must be at least 1".into()));
    }
    let cols = 2 * p.generators;
    let words: Vec<Vec<usize>> = p.relators.iter().map(|r| r.iter().map(|&g| column(g)).collect()).collect();
    let mut e = Enumerator::new(cols, bound);
    let mut c = 0;
    while c < e.table.len() {
        if e.is_live(c) {
            for w in &words {
                e.scan_and_fill(c, w)?;
                if !e.is_live(c) {
                    break;
                }
            }
            if e.is_live(c) {
                for x in 0..cols {
                    if e.table[c][x] == UNDEF {
                        e.define(c, x)?;
                    }
                }
            }
        }
        c += 1;
    }
    debug_assert_eq!(e.live, e.table.iter().enumerate().filter(|(i, _)| e.is_live(*i)).count());
    Ok(e.compact(p.generators))
}

/// Order of the group, or `Exceeded` if enumeration does not finish within the bound.
pub fn group_order(p: &Presentation, bound: usize) -> Result<usize, FpError> {
    coset_enumerate(p, bound).map(|t| t.len())
}

// ---------------------------------------------------------------------------
// Integer matrices and Smith normal form
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![vec![BigInt::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` fixes the width when there are no rows.
    pub fn from_rows(data: Vec<Vec<BigInt>>, cols: usize) -> Self {
        assert!(data.iter().all(|r| r.len() == cols), "ragged matrix");
        Self { rows: data.len(), cols, data }
    }

    pub fn from_i64(data: &[Vec<i64>]) -> Self {
        let cols = data.first().map_or(0, Vec::len);
        Self::from_rows(data.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(), cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i][j]
    }

    pub fn to_i64(&self) -> Option<Vec<Vec<i64>>> {
        self.data.iter().map(|r| r.iter().map(|x| x.to_i64()).collect()).collect()
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntegerMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i][j] += &self.data[i][k] * &other.data[k][j];
                }
            }
        }
        out
    }

    /// Determinant of a square matrix (Bareiss).
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.data.swap(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for r in &mut self.data {
            r.swap(a, b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = &self.data[src][j] * q;
            self.data[dst][j] += v;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for r in &mut self.data {
            let v = &r[src] * q;
            r[dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.data[i] {
            *x = -&*x;
        }
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .data
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// `(U, D, V)` with `U·M·V = D`, `U` and `V` unimodular, `D` diagonal with
/// nonnegative entries `d₁ | d₂ | …`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntegerMatrix,
    pub d: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.data[i][i].clone()).collect()
    }
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let (r, c) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntegerMatrix::identity(r);
    let mut v = IntegerMatrix::identity(c);

    for t in 0..r.min(c) {
        loop {
            // pivot: smallest nonzero absolute value in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = &d.data[i][j];
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d.data[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(u, d, v);
            };
            if pi != t {
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
            }
            if pj != t {
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);
            }

            let mut clean = true;
            for i in t + 1..r {
                if d.data[i][t].is_zero() {
                    continue;
                }
                let q = -d.data[i][t].div_floor(&d.data[t][t]);
                d.add_row(i, t, &q);
                u.add_row(i, t, &q);
                clean &= d.data[i][t].is_zero();
            }
            for j in t + 1..c {
                if d.data[t][j].is_zero() {
                    continue;
                }
                let q = -d.data[t][j].div_floor(&d.data[t][t]);
                d.add_col(j, t, &q);
                v.add_col(j, t, &q);
                clean &= d.data[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // enforce divisibility by the pivot in the trailing block
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !d.data[i][j].is_multiple_of(&d.data[t][t])));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d.data[t][t].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(u, d, v)
}

fn finish(u: IntegerMatrix, d: IntegerMatrix, v: IntegerMatrix) -> SmithForm {
    SmithForm { u, d, v }
}

/// Invariant factors of `G^ab ≅ Z^free_rank ⊕ ⨁ Z/torsion[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Abelianization {
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

impl Abelianization {
    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }

    pub fn is_cyclic(&self) -> bool {
        self.torsion.len() + self.free_rank <= 1
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }
}

impl fmt::Display for Abelianization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("trivial");
        }
        let mut parts: Vec<String> = self.torsion.iter().map(|t| format!("Z/{t}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            n => parts.push(format!("Z^{n}")),
        }
        f.write_str(&parts.join(" + "))
    }
}

pub fn abelianization(p: &Presentation) -> Abelianization {
    let snf = smith_normal_form(&p.exponent_matrix());
    let diag = snf.diagonal();
    let nonzero = diag.iter().filter(|x| !x.is_zero()).count();
    Abelianization {
        torsion: diag.into_iter().filter(|x| !x.is_zero() && !x.is_one()).collect(),
        free_rank: p.generators - nonzero,
    }
}

/// `|Hom(G, Z/d)|`, computed from the invariant factors of `G^ab`.
pub fn hom_count_cyclic(p: &Presentation, d: u64) -> BigInt {
    assert!(d >= 1, "d must be positive");
    let ab = abelianization(p);
    let d = BigInt::from(d);
    let mut count = num_traits::pow(d.clone(), ab.free_rank);
    for t in &ab.torsion {
        count *= t.gcd(&d);
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn mumford_range() {
        assert_eq!(mumford_presentation(3), Err(FpError::MumfordRange(3)));
        assert_eq!(mumford_presentation(9), Err(FpError::MumfordRange(9)));
        let p = mumford_presentation(4).unwrap();
        assert_eq!(p.relators[1], vec![1, 1, 1, -2]);
    }

    #[test]
    fn mumford_orders() {
        let expected = [(4, 5), (5, 12), (6, 24), (7, 48), (8, 120)];
        for (i, n) in expected {
            let p = mumford_presentation(i).unwrap();
            let t = coset_enumerate(&p, 1000).unwrap();
            assert_eq!(t.len(), n, "i = {i}");
            assert!(t.verify(&p));
        }
    }

    #[test]
    fn small_groups() {
        let p: Presentation = "gens=1; rel=1^3".parse().unwrap();
        assert_eq!(group_order(&p, 10).unwrap(), 3);
        // S3 = <a, b | a^2, b^3, (ab)^2>
        let p: Presentation = "gens=2; rel=1^2; rel=2^3; rel=(1 2)^2".parse().unwrap();
        assert_eq!(group_order(&p, 100).unwrap(), 6);
        // trivial group with a redundant-looking presentation
        let p: Presentation = "gens=2; rel=1*2^-1; rel=1^2*2^-3".parse().unwrap();
        assert_eq!(group_order(&p, 100).unwrap(), 1);
        let p = Presentation::new(0, vec![]).unwrap();
        assert_eq!(group_order(&p, 1).unwrap(), 1);
    }

    #[test]
    fn exceeded_bound() {
        let p: Presentation = "gens=1; rel=1^50".parse().unwrap();
        assert_eq!(group_order(&p, 10), Err(FpError::Exceeded(10)));
        let free: Presentation = "gens=2".parse().unwrap();
        assert_eq!(group_order(&free, 500), Err(FpError::Exceeded(500)));
    }

    #[test]
    fn parse_and_print() {
        let p: Presentation = "gens=2; rel=(1 2)^2 * 1^-3; rel=1^3 * 2^-(8-3)".parse().unwrap();
        assert_eq!(p, mumford_presentation(8).unwrap());
        assert_eq!(p.to_string(), "gens=2; rel=1 * 2 * 1 * 2 * 1^-3; rel=1^3 * 2^-5");
        assert_eq!(p.to_string().parse::<Presentation>().unwrap(), p);
        assert_eq!(parse_word("(1 2^-1)^-2").unwrap(), vec![2, -1, 2, -1]);
        assert!("gens=2; rel=3".parse::<Presentation>().is_err());
        assert!("gens=2; rel=1^0".parse::<Presentation>().is_err());
        assert!("rel=1".parse::<Presentation>().is_err());
        assert!("gens=1; rel=(1".parse::<Presentation>().is_err());
        assert!("gens=1; foo=1".parse::<Presentation>().is_err());
    }

    #[test]
    fn snf_examples() {
        let s = smith_normal_form(&IntegerMatrix::from_i64(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diagonal(), big(&[1, 6]));
        let s = smith_normal_form(&IntegerMatrix::identity(3));
        assert_eq!(s.d, IntegerMatrix::identity(3));
        let s = smith_normal_form(&IntegerMatrix::from_i64(&[vec![0]]));
        assert_eq!(s.diagonal(), big(&[0]));
        let m = IntegerMatrix::from_i64(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.diagonal(), big(&[2, 6, 12]));
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
    }

    #[test]
    fn mumford_abelianizations() {
        for i in 4..=8 {
            let ab = abelianization(&mumford_presentation(i).unwrap());
            assert!(ab.is_cyclic());
            assert_eq!(ab.order(), Some(BigInt::from(9 - i)), "i = {i}");
        }
        let ab = abelianization(&mumford_presentation(8).unwrap());
        assert!(ab.is_trivial());
        assert_eq!(ab.to_string(), "trivial");
        assert_eq!(abelianization(&mumford_presentation(6).unwrap()).to_string(), "Z/3");
    }

    #[test]
    fn hom_counts() {
        assert_eq!(hom_count_cyclic(&mumford_presentation(6).unwrap(), 3), BigInt::from(3));
        assert_eq!(hom_count_cyclic(&mumford_presentation(8).unwrap(), 5), BigInt::from(1));
        assert_eq!(hom_count_cyclic(&mumford_presentation(5).unwrap(), 1), BigInt::from(1));
        let free: Presentation = "gens=2".parse().unwrap();
        assert_eq!(hom_count_cyclic(&free, 3), BigInt::from(9));
        assert_eq!(abelianization(&free).to_string(), "Z^2");
    }
}
