//! Exact permutations and finitely generated permutation groups.
//!
//! Permutations compose right-to-left: `a.compose(&b)` is `a ∘ b`, so `b`
//! acts first. Indices are 0-based internally; cycle notation (parsing and
//! `Display`) is 1-based.
//!
//! Besides the group closure this module carries the two block constructions
//! everything else is built from: [`block_permutation`] (moving contiguous
//! blocks as units) and [`gamma_s`], the operadic composition of symmetric
//! groups. [`GroupExpr`] gives symbolic names such as `S2 x (S2 wr S3)`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::Mul;
use std::sync::{Arc, OnceLock};

use itertools::Itertools;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("images do not form a bijection of 0..{degree}")]
    NotABijection { degree: usize },
    #[error("permutations must have positive degree")]
    ZeroDegree,
    #[error("expected {expected} widths/inner permutations, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("block widths must be positive")]
    ZeroWidth,
    #[error("brute-force bound exceeded: group has more than {limit} elements (max n = {max_n})")]
    BruteForceBound { max_n: usize, limit: u128 },
    #[error("cannot parse {what}: {message}")]
    Parse { what: &'static str, message: String },
}

pub type Result<T> = std::result::Result<T, PermError>;

/// Upper limit for exhaustive enumeration, stated as the largest `n` such
/// that groups of size up to `n!` may be enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BruteForceBound {
    pub max_n: usize,
}

impl BruteForceBound {
    pub const DEFAULT_MAX_N: usize = 8;

    pub fn new(max_n: usize) -> Self {
        Self { max_n }
    }

    /// Effectively unbounded; only for groups known to be small.
    pub fn unbounded() -> Self {
        Self { max_n: 30 }
    }

    pub fn max_order(&self) -> u128 {
        factorial(self.max_n).unwrap_or(u128::MAX)
    }

    pub fn allows_degree(&self, n: usize) -> bool {
        n <= self.max_n
    }
}

impl Default for BruteForceBound {
    fn default() -> Self {
        Self::new(Self::DEFAULT_MAX_N)
    }
}

pub fn factorial(n: usize) -> Option<u128> {
    (1..=n as u128).try_fold(1u128, |acc, k| acc.checked_mul(k))
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..degree).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let degree = images.len();
        if degree == 0 {
            return Err(PermError::ZeroDegree);
        }
        let mut seen = vec![false; degree];
        for &i in &images {
            if i >= degree || std::mem::replace(&mut seen[i], true) {
                return Err(PermError::NotABijection { degree });
            }
        }
        Ok(Self { images })
    }

    /// The transposition of `i` and `j` (0-based).
    pub fn transposition(degree: usize, i: usize, j: usize) -> Self {
        let mut images: Vec<usize> = (0..degree).collect();
        images.swap(i, j);
        Self { images }
    }

    /// Builds a permutation from 0-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a >= degree || std::mem::replace(&mut touched[a], true) {
                    return Err(PermError::NotABijection { degree });
                }
                images[a] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::from_images(images)
    }

    /// Parses 1-based cycle notation such as `(1 2)(3 4 5)`; `()` is the identity.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self> {
        let err = |message: String| PermError::Parse {
            what: "cycle notation",
            message,
        };
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| err(format!("expected '(' at {rest:?}")))?;
            let close = body.find(')').ok_or_else(|| err("unclosed cycle".into()))?;
            let cycle = body[..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|s| match s.parse::<usize>() {
                    Ok(v) if v >= 1 => Ok(v - 1),
                    _ => Err(err(format!("bad point {s:?}"))),
                })
                .collect::<Result<Vec<_>>>()?;
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = body[close + 1..].trim_start();
        }
        Self::from_cycles(degree, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`: `other` acts first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    /// `self ∘ other ∘ self⁻¹`.
    pub fn conjugate(&self, other: &Permutation) -> Permutation {
        &(self * other) * &self.inverse()
    }

    /// Nontrivial cycles, each starting at its smallest point, 0-based.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut next = self.images[start];
            while next != start {
                seen[next] = true;
                cycle.push(next);
                next = self.images[next];
            }
            out.push(cycle);
        }
        out
    }

    /// Restricts to a union of blocks and relabels: `positions` lists the
    /// points of the new domain in order. The permutation must map the
    /// chosen point set to itself.
    pub fn restrict(&self, positions: &[usize]) -> Option<Permutation> {
        let mut index = vec![usize::MAX; self.degree()];
        for (k, &p) in positions.iter().enumerate() {
            index[p] = k;
        }
        let images = positions
            .iter()
            .map(|&p| match index[self.images[p]] {
                usize::MAX => None,
                k => Some(k),
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Permutation { images })
    }

    /// Relabels points through a bijection `relabel: old → new`, returning
    /// `relabel ∘ self ∘ relabel⁻¹`.
    pub fn relabel(&self, relabel: &Permutation) -> Permutation {
        relabel.conjugate(self)
    }
}

impl Mul for &Permutation {
    type Output = Permutation;

    /// Panics on degree mismatch; use [`Permutation::compose`] for a checked product.
    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs).expect("permutation degrees differ")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "({})", cycle.iter().map(|i| i + 1).join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation[{}]{}", self.degree(), self)
    }
}

/// Places `perms[i]` on the `i`-th contiguous block.
pub fn juxtapose(perms: &[Permutation]) -> Result<Permutation> {
    let mut images = Vec::with_capacity(perms.iter().map(|p| p.degree()).sum());
    let mut offset = 0;
    for p in perms {
        images.extend(p.images.iter().map(|&i| i + offset));
        offset += p.degree();
    }
    Permutation::from_images(images)
}

/// `σ⟨k₁,…,kₙ⟩`: block `i` (width `widths[i]`) moves as a unit, order
/// preserved inside, to the slot `σ(i)`.
pub fn block_permutation(sigma: &Permutation, widths: &[usize]) -> Result<Permutation> {
    let n = sigma.degree();
    if widths.len() != n {
        return Err(PermError::ArityMismatch {
            expected: n,
            got: widths.len(),
        });
    }
    if widths.contains(&0) {
        return Err(PermError::ZeroWidth);
    }
    let inv = sigma.inverse();
    // new_offset[slot] = starting point of the block landing in `slot`.
    let mut new_offset = vec![0; n];
    let mut acc = 0;
    for slot in 0..n {
        new_offset[slot] = acc;
        acc += widths[inv.apply(slot)];
    }
    let mut images = Vec::with_capacity(acc);
    for (block, &w) in widths.iter().enumerate() {
        let target = new_offset[sigma.apply(block)];
        images.extend(target..target + w);
    }
    Permutation::from_images(images)
}

/// Operadic composition in the symmetric-group operad:
/// `γ(σ; τ₁,…,τₙ) = σ⟨k₁,…,kₙ⟩ · (τ₁ ⊔ … ⊔ τₙ)` with `kᵢ = deg τᵢ`.
pub fn gamma_s(sigma: &Permutation, inner: &[Permutation]) -> Result<Permutation> {
    if inner.len() != sigma.degree() {
        return Err(PermError::ArityMismatch {
            expected: sigma.degree(),
            got: inner.len(),
        });
    }
    let widths: Vec<usize> = inner.iter().map(|p| p.degree()).collect();
    let blocks = block_permutation(sigma, &widths)?;
    blocks.compose(&juxtapose(inner)?)
}

/// Adjacent transpositions generating `S_n` (empty for `n ≤ 1`).
pub fn symmetric_generators(n: usize) -> Vec<Permutation> {
    (0..n.saturating_sub(1))
        .map(|i| Permutation::transposition(n, i, i + 1))
        .collect()
}

/// A subgroup of `S_degree` given by generators, with its element set
/// enumerated on demand and cached.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: OnceLock<Arc<Vec<Permutation>>>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.degree)
            .field("generators", &self.generators.len())
            .field("order", &self.elements.get().map(|e| e.len()))
            .finish()
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if degree == 0 {
            return Err(PermError::ZeroDegree);
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(PermError::DegreeMismatch {
                left: degree,
                right: g.degree(),
            });
        }
        let mut generators = generators;
        generators.retain(|g| !g.is_identity());
        generators.sort();
        generators.dedup();
        Ok(Self {
            degree,
            generators,
            elements: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        Self::new(degree, Vec::new()).expect("positive degree")
    }

    pub fn symmetric(degree: usize) -> Self {
        Self::new(degree, symmetric_generators(degree)).expect("positive degree")
    }

    /// A group given by its complete element list (caller guarantees closure).
    pub fn from_elements(degree: usize, elements: Vec<Permutation>) -> Result<Self> {
        let group = Self::new(degree, elements.clone())?;
        let mut elements = elements;
        elements.push(Permutation::identity(degree));
        elements.sort();
        elements.dedup();
        let _ = group.elements.set(Arc::new(elements));
        Ok(group)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// All elements, sorted. Breadth-first closure under left
    /// multiplication by generators.
    pub fn closure(&self, bound: BruteForceBound) -> Result<Arc<Vec<Permutation>>> {
        if let Some(elements) = self.elements.get() {
            return Ok(elements.clone());
        }
        let limit = bound.max_order();
        let identity = Permutation::identity(self.degree);
        let mut seen: HashSet<Permutation> = HashSet::from([identity.clone()]);
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = g * &x;
                if !seen.contains(&y) {
                    if seen.len() as u128 >= limit {
                        return Err(PermError::BruteForceBound {
                            max_n: bound.max_n,
                            limit,
                        });
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_iter().collect();
        elements.sort();
        Ok(self.elements.get_or_init(|| Arc::new(elements)).clone())
    }

    pub fn order(&self, bound: BruteForceBound) -> Result<usize> {
        Ok(self.closure(bound)?.len())
    }

    pub fn contains(&self, p: &Permutation, bound: BruteForceBound) -> Result<bool> {
        Ok(self.closure(bound)?.binary_search(p).is_ok())
    }

    /// Element-for-element equality of the generated groups.
    pub fn same_elements(&self, other: &PermGroup, bound: BruteForceBound) -> Result<bool> {
        Ok(self.degree == other.degree && self.closure(bound)? == other.closure(bound)?)
    }

    pub fn is_subgroup_of(&self, other: &PermGroup, bound: BruteForceBound) -> Result<bool> {
        let big = other.closure(bound)?;
        Ok(self.degree == other.degree
            && self.generators.iter().all(|g| big.binary_search(g).is_ok()))
    }

    pub fn intersection(&self, other: &PermGroup, bound: BruteForceBound) -> Result<PermGroup> {
        let big = other.closure(bound)?;
        let common = self
            .closure(bound)?
            .iter()
            .filter(|p| big.binary_search(p).is_ok())
            .cloned()
            .collect();
        PermGroup::from_elements(self.degree, common)
    }

    /// Subgroup generated by both generator sets.
    pub fn join(&self, other: &PermGroup) -> Result<PermGroup> {
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        PermGroup::new(self.degree, gens)
    }

    /// `self` is normal in `ambient`: every generator of `ambient`
    /// conjugates every generator of `self` back into `self`.
    pub fn is_normal_in(&self, ambient: &PermGroup, bound: BruteForceBound) -> Result<bool> {
        let mine = self.closure(bound)?;
        for g in ambient.generators() {
            for h in &self.generators {
                if mine.binary_search(&g.conjugate(h)).is_err() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Image under a relabelling of points (`relabel: old → new`).
    pub fn relabel(&self, relabel: &Permutation) -> PermGroup {
        let gens = self.generators.iter().map(|g| g.relabel(relabel)).collect();
        PermGroup::new(self.degree, gens).expect("relabel preserves degree")
    }
}

/// `S_n ≀ S_m ↪ S_{n·m}`: the top `S_n` permutes `n` blocks of width `m`,
/// the base `S_m` acts inside the first block (its conjugates fill the rest).
pub fn wreath_embed(top_degree: usize, base_degree: usize) -> Result<PermGroup> {
    if top_degree == 0 || base_degree == 0 {
        return Err(PermError::ZeroDegree);
    }
    let ids = vec![Permutation::identity(base_degree); top_degree];
    let mut gens = Vec::new();
    for sigma in symmetric_generators(top_degree) {
        gens.push(gamma_s(&sigma, &ids)?);
    }
    for tau in symmetric_generators(base_degree) {
        let mut inner = ids.clone();
        inner[0] = tau;
        gens.push(gamma_s(&Permutation::identity(top_degree), &inner)?);
    }
    PermGroup::new(top_degree * base_degree, gens)
}

/// Symbolic group built from symmetric groups by direct and wreath
/// products. `Wreath { top, base }` is `top ≀ base`: `top` permutes
/// `top.degree()` copies of `base`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupExpr {
    Trivial,
    Symmetric(usize),
    Product(Vec<GroupExpr>),
    Wreath {
        top: Box<GroupExpr>,
        base: Box<GroupExpr>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Notation {
    #[default]
    Ascii,
    Unicode,
}

impl GroupExpr {
    pub fn wreath(top: GroupExpr, base: GroupExpr) -> Self {
        GroupExpr::Wreath {
            top: Box::new(top),
            base: Box::new(base),
        }
    }

    pub fn product(factors: impl IntoIterator<Item = GroupExpr>) -> Self {
        GroupExpr::Product(factors.into_iter().collect())
    }

    /// Size of the set the group naturally permutes.
    pub fn degree(&self) -> usize {
        match self {
            GroupExpr::Trivial => 1,
            GroupExpr::Symmetric(k) => *k,
            GroupExpr::Product(fs) => fs.iter().map(GroupExpr::degree).sum(),
            GroupExpr::Wreath { top, base } => top.degree() * base.degree(),
        }
    }

    pub fn checked_order(&self) -> Option<u128> {
        match self {
            GroupExpr::Trivial => Some(1),
            GroupExpr::Symmetric(k) => factorial(*k),
            GroupExpr::Product(fs) => fs
                .iter()
                .try_fold(1u128, |acc, f| acc.checked_mul(f.checked_order()?)),
            GroupExpr::Wreath { top, base } => {
                let b = base.checked_order()?;
                let copies = u32::try_from(top.degree()).ok()?;
                top.checked_order()?.checked_mul(b.checked_pow(copies)?)
            }
        }
    }

    /// Group order. Panics if it does not fit in `u128`.
    pub fn order(&self) -> u128 {
        self.checked_order().expect("group order overflows u128")
    }

    pub fn is_trivial(&self) -> bool {
        self.canonical() == GroupExpr::Trivial
    }

    /// Drops trivial factors, collapses `S₁`, flattens and sorts direct
    /// products by (order, rendering), and right-associates wreath chains.
    pub fn canonical(&self) -> GroupExpr {
        match self {
            GroupExpr::Trivial | GroupExpr::Symmetric(0) | GroupExpr::Symmetric(1) => {
                GroupExpr::Trivial
            }
            GroupExpr::Symmetric(k) => GroupExpr::Symmetric(*k),
            GroupExpr::Product(fs) => {
                let mut flat = Vec::new();
                for f in fs {
                    match f.canonical() {
                        GroupExpr::Trivial => {}
                        GroupExpr::Product(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                match flat.len() {
                    0 => GroupExpr::Trivial,
                    1 => flat.pop().unwrap(),
                    _ => {
                        flat.sort_by_cached_key(|f| {
                            (
                                f.checked_order().unwrap_or(u128::MAX),
                                f.render(Notation::Ascii),
                            )
                        });
                        GroupExpr::Product(flat)
                    }
                }
            }
            GroupExpr::Wreath { top, base } => {
                let top = top.canonical();
                let base = base.canonical();
                match (top, base) {
                    (GroupExpr::Trivial, base) => base,
                    (top, GroupExpr::Trivial) => top,
                    (GroupExpr::Wreath { top: a, base: b }, c) => {
                        GroupExpr::wreath(*a, GroupExpr::wreath(*b, c)).canonical()
                    }
                    (top, base) => GroupExpr::wreath(top, base),
                }
            }
        }
    }

    pub fn canonically_equal(&self, other: &GroupExpr) -> bool {
        self.canonical() == other.canonical()
    }

    /// Renders with `x`/`wr` (ASCII) or `×`/`≀` (Unicode). Runs of equal
    /// adjacent factors print as powers.
    pub fn render(&self, notation: Notation) -> String {
        let (times, wr) = match notation {
            Notation::Ascii => (" x ", " wr "),
            Notation::Unicode => (" × ", " ≀ "),
        };
        match self {
            GroupExpr::Trivial => "1".to_string(),
            GroupExpr::Symmetric(k) => format!("S{k}"),
            GroupExpr::Product(fs) if fs.is_empty() => "1".to_string(),
            GroupExpr::Product(fs) => fs
                .iter()
                .chunk_by(|f| *f)
                .into_iter()
                .map(|(f, run)| {
                    let count = run.count();
                    let body = f.render_operand(notation);
                    if count == 1 {
                        body
                    } else {
                        format!("{body}{}", power_suffix(count, notation))
                    }
                })
                .join(times),
            GroupExpr::Wreath { top, base } => {
                let top = top.render_operand(notation);
                let base = match **base {
                    GroupExpr::Wreath { .. } => base.render(notation),
                    _ => base.render_operand(notation),
                };
                format!("{top}{wr}{base}")
            }
        }
    }

    fn render_operand(&self, notation: Notation) -> String {
        let text = self.render(notation);
        let needs_parens = match self {
            GroupExpr::Product(fs) => fs.len() > 1,
            GroupExpr::Wreath { .. } => true,
            _ => false,
        };
        if needs_parens {
            format!("({text})")
        } else {
            text
        }
    }

    /// Parses `S<k>`, `1`, `A x B`, `A wr B`, `A^k` and parentheses
    /// (`×`, `≀` and superscript exponents are accepted too). `wr` binds
    /// tighter than `x` and associates to the right.
    pub fn parse(text: &str) -> Result<GroupExpr> {
        let tokens = tokenize(text)?;
        let mut parser = ExprParser { tokens, pos: 0 };
        let expr = parser.product()?;
        if parser.pos != parser.tokens.len() {
            return Err(parse_error(format!(
                "trailing input at token {}",
                parser.pos
            )));
        }
        Ok(expr)
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Notation::Ascii))
    }
}

fn power_suffix(count: usize, notation: Notation) -> String {
    match notation {
        Notation::Ascii => format!("^{count}"),
        Notation::Unicode => count
            .to_string()
            .chars()
            .map(|c| {
                "⁰¹²³⁴⁵⁶⁷⁸⁹"
                    .chars()
                    .nth(c.to_digit(10).unwrap() as usize)
                    .unwrap()
            })
            .collect(),
    }
}

fn parse_error(message: String) -> PermError {
    PermError::Parse {
        what: "group expression",
        message,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Sym(usize),
    One,
    Times,
    Wr,
    Pow(usize),
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    const SUPERSCRIPTS: &str = "⁰¹²³⁴⁵⁶⁷⁸⁹";
    const SUBSCRIPTS: &str = "₀₁₂₃₄₅₆₇₈₉";
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    let digit_run = |i: &mut usize, table: Option<&str>| -> Option<usize> {
        let start = *i;
        let mut value: usize = 0;
        while *i < chars.len() {
            let d = match table {
                None => chars[*i].to_digit(10),
                Some(t) => t.chars().position(|c| c == chars[*i]).map(|d| d as u32),
            };
            match d {
                Some(d) => {
                    value = value.checked_mul(10)?.checked_add(d as usize)?;
                    *i += 1;
                }
                None => break,
            }
        }
        (*i > start).then_some(value)
    };
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                tokens.push(Token::Open);
                i += 1;
            }
            ')' => {
                tokens.push(Token::Close);
                i += 1;
            }
            'x' | '×' | '*' => {
                tokens.push(Token::Times);
                i += 1;
            }
            '≀' => {
                tokens.push(Token::Wr);
                i += 1;
            }
            'w' if chars.get(i + 1) == Some(&'r') => {
                tokens.push(Token::Wr);
                i += 2;
            }
            '^' => {
                i += 1;
                let k = digit_run(&mut i, None)
                    .ok_or_else(|| parse_error("expected exponent".into()))?;
                tokens.push(Token::Pow(k));
            }
            '1' => {
                tokens.push(Token::One);
                i += 1;
            }
            'S' => {
                i += 1;
                let k = digit_run(&mut i, None)
                    .or_else(|| digit_run(&mut i, Some(SUBSCRIPTS)))
                    .ok_or_else(|| parse_error("expected degree after 'S'".into()))?;
                tokens.push(Token::Sym(k));
            }
            c if SUPERSCRIPTS.contains(c) => {
                let k = digit_run(&mut i, Some(SUPERSCRIPTS)).unwrap();
                tokens.push(Token::Pow(k));
            }
            other => return Err(parse_error(format!("unexpected character {other:?}"))),
        }
    }
    Ok(tokens)
}

struct ExprParser {
    tokens: Vec<Token>,
    pos: usize,
}

impl ExprParser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn product(&mut self) -> Result<GroupExpr> {
        let mut factors = vec![self.wreath()?];
        while self.peek() == Some(&Token::Times) {
            self.pos += 1;
            factors.push(self.wreath()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            GroupExpr::Product(factors)
        })
    }

    fn wreath(&mut self) -> Result<GroupExpr> {
        let top = self.power()?;
        if self.peek() == Some(&Token::Wr) {
            self.pos += 1;
            let base = self.wreath()?;
            return Ok(GroupExpr::wreath(top, base));
        }
        Ok(top)
    }

    fn power(&mut self) -> Result<GroupExpr> {
        let atom = self.atom()?;
        if let Some(&Token::Pow(k)) = self.peek() {
            self.pos += 1;
            return Ok(GroupExpr::Product(vec![atom; k]));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<GroupExpr> {
        let token = self.peek().cloned();
        self.pos += 1;
        match token {
            Some(Token::Sym(k)) => Ok(GroupExpr::Symmetric(k)),
            Some(Token::One) => Ok(GroupExpr::Trivial),
            Some(Token::Open) => {
                let inner = self.product()?;
                if self.peek() != Some(&Token::Close) {
                    return Err(parse_error("missing ')'".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            other => Err(parse_error(format!("unexpected token {other:?}"))),
        }
    }
}
