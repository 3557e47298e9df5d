//! Root systems, irregular types and Weyl-group stabilizers.
//!
//! Supported families are type `A` in the `gl_n` convention (roots
//! `e_a - e_b` on `ℚⁿ`, Weyl group `S_n` permuting coordinates) and the rank-2
//! systems `B2` and `G2`. For rank 2 the Cartan subalgebra is written in the
//! fundamental-coweight basis and roots in simple-root coordinates, so the
//! pairing `⟨α, A⟩` is an integer dot product; the Weyl group is the
//! permutation group on roots generated by simple reflections.
//!
//! Everything is exact. Stabilizers are computed by enumerating the Weyl
//! group, which is why every such call takes a [`BruteForceBound`].

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{CheckedMul, CheckedSub, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::linalg::{Rational, Subspace};
use crate::permgroup::{BruteForceBound, PermError, PermGroup, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootSysError {
    #[error("invalid irregular type: {0}")]
    Invalid(String),
    #[error("arithmetic overflow while pairing roots with coefficients")]
    Overflow,
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Perm(#[from] PermError),
}

pub type Result<T> = std::result::Result<T, RootSysError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B2,
    G2,
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    family: Family,
    /// Dimension of the Cartan coordinates (`n` for type A, 2 otherwise).
    dim: usize,
    roots: Vec<Vec<i64>>,
    simple: Vec<usize>,
    index: HashMap<Vec<i64>, usize>,
    /// Type A: `(a, b)` for each root `e_a - e_b`.
    pairs: Vec<(usize, usize)>,
    weyl: PermGroup,
}

impl RootSystem {
    /// Type `A_{n-1}` inside `gl_n`.
    pub fn type_a(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(RootSysError::Invalid("n must be positive".into()));
        }
        let mut roots = Vec::new();
        let mut pairs = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    let mut v = vec![0; n];
                    v[a] = 1;
                    v[b] = -1;
                    roots.push(v);
                    pairs.push((a, b));
                }
            }
        }
        let simple = (0..n.saturating_sub(1)).map(|a| a * (n - 1) + a).collect();
        let index = roots
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, r)| (r, i))
            .collect();
        Ok(Self {
            family: Family::A,
            dim: n,
            roots,
            simple,
            index,
            pairs,
            weyl: PermGroup::symmetric(n),
        })
    }

    pub fn b2() -> Self {
        // α1 long, α2 short.
        Self::rank_two(Family::B2, [[2, -1], [-1, 1]])
    }

    pub fn g2() -> Self {
        // α1 short, α2 long.
        Self::rank_two(Family::G2, [[2, -3], [-3, 6]])
    }

    fn rank_two(family: Family, gram: [[i64; 2]; 2]) -> Self {
        let inner = |x: &[i64], y: &[i64]| -> i64 {
            (0..2)
                .map(|i| (0..2).map(|j| x[i] * gram[i][j] * y[j]).sum::<i64>())
                .sum()
        };
        let reflect = |beta: &[i64], alpha: &[i64]| -> Vec<i64> {
            let c = 2 * inner(beta, alpha) / inner(alpha, alpha);
            vec![beta[0] - c * alpha[0], beta[1] - c * alpha[1]]
        };
        let simple_vecs = [vec![1, 0], vec![0, 1]];
        let mut roots: Vec<Vec<i64>> = simple_vecs.to_vec();
        let mut k = 0;
        while k < roots.len() {
            for s in &simple_vecs {
                let r = reflect(&roots[k], s);
                if !roots.contains(&r) {
                    roots.push(r);
                }
            }
            k += 1;
        }
        roots.sort_by_key(|r| (r[0] + r[1] < 0, (r[0] + r[1]).abs(), r[0].abs(), r[0] < 0));
        let index: HashMap<Vec<i64>, usize> = roots
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, r)| (r, i))
            .collect();
        let simple = simple_vecs.iter().map(|s| index[s]).collect::<Vec<_>>();
        let gens = simple_vecs
            .iter()
            .map(|s| {
                let images = roots.iter().map(|r| index[&reflect(r, s)]).collect();
                Permutation::from_images(images).expect("reflection permutes roots")
            })
            .collect();
        let weyl = PermGroup::new(roots.len(), gens).expect("nonempty root set");
        Self {
            family,
            dim: 2,
            roots,
            simple,
            index,
            pairs: Vec::new(),
            weyl,
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn root_count(&self) -> usize {
        self.roots.len()
    }

    pub fn simple_roots(&self) -> &[usize] {
        &self.simple
    }

    /// Type A only: the index pair `(a, b)` of `e_a - e_b`.
    pub fn root_pair(&self, k: usize) -> Option<(usize, usize)> {
        self.pairs.get(k).copied()
    }

    pub fn root_index(&self, coords: &[i64]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    pub fn negative(&self, k: usize) -> usize {
        let neg: Vec<i64> = self.roots[k].iter().map(|x| -x).collect();
        self.index[&neg]
    }

    pub fn weyl(&self) -> &PermGroup {
        &self.weyl
    }

    pub fn classical_weyl_order(&self) -> u128 {
        match self.family {
            Family::A => crate::permgroup::factorial(self.dim).unwrap_or(u128::MAX),
            Family::B2 => 8,
            Family::G2 => 12,
        }
    }

    pub fn weyl_elements(&self, bound: BruteForceBound) -> Result<Arc<Vec<Permutation>>> {
        let within = match self.family {
            Family::A => bound.allows_degree(self.dim),
            Family::B2 | Family::G2 => true,
        };
        if !within {
            return Err(PermError::BruteForceBound {
                max_n: bound.max_n,
                limit: bound.max_order(),
            }
            .into());
        }
        let bound = match self.family {
            Family::A => bound,
            _ => BruteForceBound::unbounded(),
        };
        Ok(self.weyl.closure(bound)?)
    }

    /// Index of `w(α_k)`.
    pub fn root_image(&self, w: &Permutation, k: usize) -> usize {
        match self.family {
            Family::A => {
                let (a, b) = self.pairs[k];
                let (a, b) = (w.apply(a), w.apply(b));
                a * (self.dim - 1) + if b < a { b } else { b - 1 }
            }
            Family::B2 | Family::G2 => w.apply(k),
        }
    }

    /// Action of `w` on the Cartan coordinates, with `⟨wα, w·v⟩ = ⟨α, v⟩`.
    pub fn act(&self, w: &Permutation, v: &[Rational]) -> Vec<Rational> {
        match self.family {
            Family::A => {
                let mut out = vec![Rational::zero(); self.dim];
                for (a, x) in v.iter().enumerate() {
                    out[w.apply(a)] = *x;
                }
                out
            }
            Family::B2 | Family::G2 => {
                let inv = w.inverse();
                self.simple
                    .iter()
                    .map(|&s| {
                        let r = &self.roots[inv.apply(s)];
                        r.iter().zip(v).map(|(&m, x)| *x * m).sum()
                    })
                    .collect()
            }
        }
    }

    /// Weyl element of the reflection in root `k`.
    pub fn reflection(&self, k: usize) -> Permutation {
        match self.family {
            Family::A => {
                let (a, b) = self.pairs[k];
                Permutation::transposition(self.dim, a, b)
            }
            Family::B2 | Family::G2 => {
                // The unique involution fixing ker α_k pointwise and negating α_k.
                let neg = self.negative(k);
                self.weyl
                    .closure(BruteForceBound::unbounded())
                    .expect("rank-2 Weyl groups are small")
                    .iter()
                    .find(|w| {
                        w.apply(k) == neg
                            && !w.is_identity()
                            && (&**w * &**w).is_identity()
                            && self.roots.iter().enumerate().all(|(j, r)| {
                                // s_α(β) - β is a multiple of α
                                let img = &self.roots[w.apply(j)];
                                let d = [img[0] - r[0], img[1] - r[1]];
                                d[0] * self.roots[k][1] == d[1] * self.roots[k][0]
                            })
                    })
                    .cloned()
                    .expect("every root has a reflection")
            }
        }
    }

    pub fn linear_form(&self, k: usize) -> Vec<Rational> {
        self.roots[k]
            .iter()
            .map(|&x| Rational::from_integer(x))
            .collect()
    }

    /// `⟨α_k, v⟩` with overflow checking.
    pub fn pairing(&self, k: usize, v: &[Rational]) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (&m, x) in self.roots[k].iter().zip(v) {
            if m == 0 {
                continue;
            }
            let term = x
                .checked_mul(&Rational::from_integer(m))
                .ok_or(RootSysError::Overflow)?;
            acc = acc.checked_sub(&-term).ok_or(RootSysError::Overflow)?;
        }
        Ok(acc)
    }
}

/// Which Lie algebra an irregular type lives in. `Sl` computes exactly
/// like `Gl`; only the echoed label differs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algebra {
    #[serde(rename = "gl")]
    Gl,
    #[serde(rename = "sl")]
    Sl,
    B2,
    G2,
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algebra::Gl => "gl",
            Algebra::Sl => "sl",
            Algebra::B2 => "B2",
            Algebra::G2 => "G2",
        })
    }
}

/// Exact rational that reads from a JSON integer or a `"p/q"` string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalValue(pub Rational);

impl Serialize for RationalValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            s.serialize_i64(*self.0.numer())
        } else {
            s.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom()))
        }
    }
}

impl<'de> Deserialize<'de> for RationalValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct Visitor;
        impl de::Visitor<'_> for Visitor {
            type Value = RationalValue;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a rational string \"p/q\"")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                Ok(RationalValue(Rational::from_integer(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                i64::try_from(v)
                    .map(|v| RationalValue(Rational::from_integer(v)))
                    .map_err(|_| E::custom("integer out of range"))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Self::Value, E> {
                Err(E::custom(format!(
                    "floating-point value {v} is not an exact rational; use \"p/q\""
                )))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                parse_rational(v)
                    .map(RationalValue)
                    .ok_or_else(|| E::custom(format!("not a rational: {v:?}")))
            }
        }
        d.deserialize_any(Visitor)
    }
}

pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().ok()?;
            let q: i64 = q.trim().parse().ok()?;
            (q != 0).then(|| Rational::new(p, q))
        }
        None => text.parse::<i64>().ok().map(Rational::from_integer),
    }
}

/// The JSON input document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrregularTypeDoc {
    pub algebra: Algebra,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// `A₁` (coefficient of `z⁻¹`) first, leading coefficient last.
    pub coefficients: Vec<Vec<RationalValue>>,
}

/// `Q = Σᵢ Aᵢ z⁻ⁱ` with `coefficients[i-1] = Aᵢ`.
#[derive(Debug, Clone)]
pub struct IrregularType {
    algebra: Algebra,
    root_system: Arc<RootSystem>,
    coefficients: Vec<Vec<Rational>>,
}

impl IrregularType {
    pub fn new(
        algebra: Algebra,
        root_system: Arc<RootSystem>,
        coefficients: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        let expected = match (algebra, root_system.family()) {
            (Algebra::Gl | Algebra::Sl, Family::A)
            | (Algebra::B2, Family::B2)
            | (Algebra::G2, Family::G2) => root_system.dim(),
            _ => {
                return Err(RootSysError::Invalid(format!(
                    "algebra {algebra} does not match root system"
                )))
            }
        };
        if coefficients.is_empty() {
            return Err(RootSysError::Invalid(
                "need at least one coefficient (p >= 1)".into(),
            ));
        }
        for (i, c) in coefficients.iter().enumerate() {
            if c.len() != expected {
                return Err(RootSysError::Invalid(format!(
                    "coefficient A{} has {} entries, expected {expected}",
                    i + 1,
                    c.len()
                )));
            }
        }
        Ok(Self {
            algebra,
            root_system,
            coefficients,
        })
    }

    /// Type A in `gl_n` from diagonal entries.
    pub fn gl(coefficients: Vec<Vec<Rational>>) -> Result<Self> {
        let n = coefficients.first().map_or(0, Vec::len);
        Self::new(Algebra::Gl, Arc::new(RootSystem::type_a(n)?), coefficients)
    }

    /// Convenience for integer diagonal entries.
    pub fn gl_integers(coefficients: &[&[i64]]) -> Result<Self> {
        Self::gl(
            coefficients
                .iter()
                .map(|c| c.iter().map(|&x| Rational::from_integer(x)).collect())
                .collect(),
        )
    }

    pub fn from_doc(doc: &IrregularTypeDoc) -> Result<Self> {
        let coefficients: Vec<Vec<Rational>> = doc
            .coefficients
            .iter()
            .map(|c| c.iter().map(|r| r.0).collect())
            .collect();
        let rs = match doc.algebra {
            Algebra::Gl | Algebra::Sl => {
                let n = doc
                    .n
                    .ok_or_else(|| RootSysError::Invalid("type A input needs \"n\"".into()))?;
                RootSystem::type_a(n)?
            }
            Algebra::B2 | Algebra::G2 if doc.n.is_some() => {
                return Err(RootSysError::Invalid(
                    "\"n\" is only meaningful for gl/sl".into(),
                ))
            }
            Algebra::B2 => RootSystem::b2(),
            Algebra::G2 => RootSystem::g2(),
        };
        Self::new(doc.algebra, Arc::new(rs), coefficients)
    }

    pub fn to_doc(&self) -> IrregularTypeDoc {
        IrregularTypeDoc {
            algebra: self.algebra,
            n: matches!(self.algebra, Algebra::Gl | Algebra::Sl).then_some(self.root_system.dim()),
            coefficients: self
                .coefficients
                .iter()
                .map(|c| c.iter().map(|&x| RationalValue(x)).collect())
                .collect(),
        }
    }

    pub fn algebra(&self) -> Algebra {
        self.algebra
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.root_system
    }

    pub fn root_system_arc(&self) -> Arc<RootSystem> {
        self.root_system.clone()
    }

    pub fn p(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[Vec<Rational>] {
        &self.coefficients
    }

    pub fn is_type_a(&self) -> bool {
        self.root_system.family() == Family::A
    }

    /// The same type with every coefficient moved by the Weyl element `w`.
    pub fn act(&self, w: &Permutation) -> IrregularType {
        let coefficients = self
            .coefficients
            .iter()
            .map(|c| self.root_system.act(w, c))
            .collect();
        Self {
            algebra: self.algebra,
            root_system: self.root_system.clone(),
            coefficients,
        }
    }
}

/// `d_α = max{ i : ⟨α, Aᵢ⟩ ≠ 0 }`, or 0 when every pairing vanishes.
pub fn pole_order(q: &IrregularType, alpha: usize) -> Result<usize> {
    let rs = q.root_system();
    for i in (0..q.p()).rev() {
        if !rs.pairing(alpha, &q.coefficients[i])?.is_zero() {
            return Ok(i + 1);
        }
    }
    Ok(0)
}

pub fn pole_orders(q: &IrregularType) -> Result<Vec<usize>> {
    (0..q.root_system().root_count())
        .map(|k| pole_order(q, k))
        .collect()
}

/// Nested root subsets `Φ_{h₁} ⊆ … ⊆ Φ_{h_{p+1}} = Φ`, with
/// `Φ_{hᵢ} = { α : d_α < i }`. Each level is a sorted list of root indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FissionFiltration {
    pub levels: Vec<Vec<usize>>,
}

impl FissionFiltration {
    pub fn p(&self) -> usize {
        self.levels.len() - 1
    }

    /// `Φ_{hᵢ}` for `i` in `1..=p+1`.
    pub fn level(&self, i: usize) -> &[usize] {
        &self.levels[i - 1]
    }
}

pub fn fission_filtration(q: &IrregularType) -> Result<FissionFiltration> {
    let orders = pole_orders(q)?;
    let levels = (1..=q.p() + 1)
        .map(|i| (0..orders.len()).filter(|&k| orders[k] < i).collect())
        .collect();
    Ok(FissionFiltration { levels })
}

/// `U₁ ⊇ … ⊇ U_p` with `Uᵢ = ⋂_{α ∈ Φ_{hᵢ}} Ker α`; in type A also the
/// partitions of `{0..n-1}` cut out by each level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelFlag {
    pub subspaces: Vec<Subspace>,
    pub partitions: Option<Vec<Vec<Vec<usize>>>>,
}

impl KernelFlag {
    pub fn is_nested(&self) -> bool {
        self.subspaces
            .windows(2)
            .all(|w| w[0].contains_subspace(&w[1]))
    }
}

pub fn kernel_flag(rs: &RootSystem, f: &FissionFiltration) -> KernelFlag {
    let p = f.p();
    let subspaces = (1..=p)
        .map(|i| {
            let forms: Vec<_> = f.level(i).iter().map(|&k| rs.linear_form(k)).collect();
            Subspace::kernel_of(rs.dim(), &forms)
        })
        .collect();
    let partitions = (rs.family() == Family::A).then(|| {
        (1..=p)
            .map(|i| {
                // Each level is a closed subsystem, so every point is joined
                // directly to the smallest point of its block.
                let level = f.level(i);
                let mut parts: Vec<Vec<usize>> = Vec::new();
                for a in 0..rs.dim() {
                    let first = (0..a)
                        .find(|&b| level.binary_search(&pair_index(rs.dim(), a, b)).is_ok())
                        .unwrap_or(a);
                    match parts.iter_mut().find(|part| part[0] == first) {
                        Some(part) => part.push(a),
                        None => parts.push(vec![a]),
                    }
                }
                parts
            })
            .collect()
    });
    KernelFlag {
        subspaces,
        partitions,
    }
}

fn pair_index(n: usize, a: usize, b: usize) -> usize {
    a * (n - 1) + if b < a { b } else { b - 1 }
}

fn preserves_subspace(rs: &RootSystem, w: &Permutation, u: &Subspace) -> bool {
    u.basis().iter().all(|v| u.contains(&rs.act(w, v)))
}

fn fixes_subspace(rs: &RootSystem, w: &Permutation, u: &Subspace) -> bool {
    u.basis().iter().all(|v| rs.act(w, v) == *v)
}

fn weyl_filter(
    rs: &RootSystem,
    bound: BruteForceBound,
    keep: impl Fn(&Permutation) -> bool,
) -> Result<PermGroup> {
    let elements = rs.weyl_elements(bound)?;
    let kept = elements.iter().filter(|w| keep(w)).cloned().collect();
    Ok(PermGroup::from_elements(rs.weyl().degree(), kept)?)
}

/// `Stab_W(𝐔) = ⋂ᵢ Stab_W(Uᵢ)` by exact subspace checks on every Weyl element.
pub fn setwise_stabilizer_bruteforce(
    rs: &RootSystem,
    flag: &KernelFlag,
    bound: BruteForceBound,
) -> Result<PermGroup> {
    weyl_filter(rs, bound, |w| {
        flag.subspaces.iter().all(|u| preserves_subspace(rs, w, u))
    })
}

/// Weyl elements mapping the root subset onto itself.
pub fn root_subset_stabilizer(
    rs: &RootSystem,
    roots: &[usize],
    bound: BruteForceBound,
) -> Result<PermGroup> {
    let mut member = vec![false; rs.root_count()];
    for &k in roots {
        member[k] = true;
    }
    weyl_filter(rs, bound, |w| {
        roots.iter().all(|&k| member[rs.root_image(w, k)])
    })
}

/// Type A: permutations sending every block of every level partition to a block.
pub fn partition_stabilizer_bruteforce(
    rs: &RootSystem,
    flag: &KernelFlag,
    bound: BruteForceBound,
) -> Result<PermGroup> {
    let partitions = flag
        .partitions
        .as_ref()
        .ok_or_else(|| RootSysError::Invalid("partition stabilizers need type A".into()))?;
    let labelings: Vec<Vec<usize>> = partitions
        .iter()
        .map(|parts| {
            let mut label = vec![0; rs.dim()];
            for (k, part) in parts.iter().enumerate() {
                for &a in part {
                    label[a] = k;
                }
            }
            label
        })
        .collect();
    weyl_filter(rs, bound, |w| {
        labelings.iter().all(|label| {
            (0..rs.dim()).all(|a| {
                (0..rs.dim())
                    .all(|b| (label[a] == label[b]) == (label[w.apply(a)] == label[w.apply(b)]))
            })
        })
    })
}

/// `W_p = Stab_W(U_p)`, then `W_{i-1} = Stab_{Wᵢ}(U_{i-1})`, using the
/// root-subsystem form of each stabilizer.
pub fn recursive_stabilizer(
    rs: &RootSystem,
    f: &FissionFiltration,
    bound: BruteForceBound,
) -> Result<PermGroup> {
    let mut current: Vec<Permutation> = rs.weyl_elements(bound)?.to_vec();
    for i in (1..=f.p()).rev() {
        let level = f.level(i);
        let mut member = vec![false; rs.root_count()];
        for &k in level {
            member[k] = true;
        }
        current.retain(|w| level.iter().all(|&k| member[rs.root_image(w, k)]));
    }
    Ok(PermGroup::from_elements(rs.weyl().degree(), current)?)
}

/// Weyl elements fixing `U₁` pointwise.
pub fn pointwise_stabilizer(
    rs: &RootSystem,
    flag: &KernelFlag,
    bound: BruteForceBound,
) -> Result<PermGroup> {
    match flag.subspaces.first() {
        Some(u1) => weyl_filter(rs, bound, |w| fixes_subspace(rs, w, u1)),
        None => Ok(PermGroup::trivial(rs.weyl().degree())),
    }
}

/// Subgroup generated by the reflections in the given roots.
pub fn reflection_subgroup(rs: &RootSystem, roots: &[usize]) -> PermGroup {
    let gens = roots.iter().map(|&k| rs.reflection(k)).collect();
    PermGroup::new(rs.weyl().degree(), gens).expect("degree matches")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientOrder {
    pub stabilizer: usize,
    pub pointwise: usize,
    pub quotient: usize,
}

/// `|Stab_W(𝐔)| / |W_{h₁}|`, the number of sheets of the covering.
pub fn fission_quotient_order(
    rs: &RootSystem,
    f: &FissionFiltration,
    bound: BruteForceBound,
) -> Result<QuotientOrder> {
    let flag = kernel_flag(rs, f);
    let stabilizer = setwise_stabilizer_bruteforce(rs, &flag, bound)?.order(bound)?;
    let pointwise = pointwise_stabilizer(rs, &flag, bound)?.order(bound)?;
    if pointwise == 0 || stabilizer % pointwise != 0 {
        return Err(RootSysError::Internal(format!(
            "pointwise stabilizer order {pointwise} does not divide {stabilizer}"
        )));
    }
    Ok(QuotientOrder {
        stabilizer,
        pointwise,
        quotient: stabilizer / pointwise,
    })
}

/// `other` lies in the deformation space of `q`: every root keeps its pole order.
pub fn same_pole_orders(q: &IrregularType, other: &IrregularType) -> Result<bool> {
    Ok(pole_orders(q)? == pole_orders(other)?)
}
