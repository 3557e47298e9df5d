//! Ranked fission trees of type-A irregular types.
//!
//! Level `l` of the tree is the partition of `{0..n-1}` in which two indices
//! agree when every coefficient `A_k` with `k ≥ l` has equal entries there.
//! The top level is a single root; leaves form level 1. Ranks are block
//! sizes. Node ids run level by level from the leaves, each level ordered by
//! smallest contained index, so leaf ids are the natural leaf order.
//!
//! Permutation realizations use the canonical leaf order: children are
//! sorted by (canonical encoding, smallest leaf) at every node, which makes
//! isomorphic sibling subtrees contiguous and position-wise isomorphic.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Rational;
use crate::permgroup::{
    gamma_s, symmetric_generators, GroupExpr, PermError, PermGroup, Permutation,
};
use crate::rootsys::IrregularType;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FissionError {
    #[error("fission trees are only defined for type A")]
    NotTypeA,
    #[error("malformed tree: {0}")]
    Malformed(String),
    #[error("tree carries no index subsets, so it has no ambient realization")]
    MissingProvenance,
    #[error(transparent)]
    Perm(#[from] PermError),
}

pub type Result<T> = std::result::Result<T, FissionError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct TreeData {
    levels: Vec<Vec<usize>>,
    parents: Vec<Option<usize>>,
    ranks: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    indices: Option<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TreeData", into = "TreeData")]
pub struct RankedFissionTree {
    levels: Vec<Vec<usize>>,
    parents: Vec<Option<usize>>,
    ranks: Vec<usize>,
    indices: Option<Vec<Vec<usize>>>,
    children: Vec<Vec<usize>>,
    level_of: Vec<usize>,
}

impl From<RankedFissionTree> for TreeData {
    fn from(t: RankedFissionTree) -> Self {
        TreeData {
            levels: t.levels,
            parents: t.parents,
            ranks: t.ranks,
            indices: t.indices,
        }
    }
}

impl TryFrom<TreeData> for RankedFissionTree {
    type Error = FissionError;

    fn try_from(d: TreeData) -> Result<Self> {
        let bad = |m: String| Err(FissionError::Malformed(m));
        let count = d.parents.len();
        if d.ranks.len() != count {
            return bad(format!("{} parents but {} ranks", count, d.ranks.len()));
        }
        match d.levels.last() {
            Some(top) if top.len() == 1 => {}
            _ => return bad("the top level must hold exactly one root".into()),
        }
        let mut level_of = vec![usize::MAX; count];
        for (l, level) in d.levels.iter().enumerate() {
            for &v in level {
                if v >= count || level_of[v] != usize::MAX {
                    return bad(format!("node {v} is out of range or listed twice"));
                }
                level_of[v] = l;
            }
        }
        if level_of.contains(&usize::MAX) {
            return bad("some node is on no level".into());
        }
        let root = d.levels.last().unwrap()[0];
        let mut children = vec![Vec::new(); count];
        for v in 0..count {
            match d.parents[v] {
                None if v == root => {}
                None => return bad(format!("node {v} has no parent")),
                Some(_) if v == root => return bad("the root has a parent".into()),
                Some(u) if u >= count || level_of[u] != level_of[v] + 1 => {
                    return bad(format!("parent of node {v} is not one level up"))
                }
                Some(u) => children[u].push(v),
            }
        }
        for v in 0..count {
            if level_of[v] > 0 && children[v].is_empty() {
                return bad(format!("node {v} above the leaf level has no children"));
            }
            if level_of[v] == 0 && d.ranks[v] == 0 {
                return bad(format!("leaf {v} has rank 0"));
            }
            if level_of[v] > 0
                && children[v].iter().map(|&c| d.ranks[c]).sum::<usize>() != d.ranks[v]
            {
                return bad(format!(
                    "rank of node {v} is not the sum of its children's ranks"
                ));
            }
        }
        if let Some(indices) = &d.indices {
            if indices.len() != count {
                return bad("one index subset per node is required".into());
            }
            for v in 0..count {
                if indices[v].len() != d.ranks[v] || indices[v].windows(2).any(|w| w[0] >= w[1]) {
                    return bad(format!(
                        "index subset of node {v} is not sorted with size = rank"
                    ));
                }
                if level_of[v] > 0 {
                    let union: Vec<usize> = children[v]
                        .iter()
                        .flat_map(|&c| indices[c].iter().copied())
                        .sorted()
                        .collect();
                    if union != indices[v] {
                        return bad(format!(
                            "index subset of node {v} is not the union of its children"
                        ));
                    }
                }
            }
            if indices[root] != (0..d.ranks[root]).collect::<Vec<_>>() {
                return bad("root index subset must be 0..n".into());
            }
        }
        Ok(Self {
            levels: d.levels,
            parents: d.parents,
            ranks: d.ranks,
            indices: d.indices,
            children,
            level_of,
        })
    }
}

impl RankedFissionTree {
    /// Builds a tree from leaf ranks and one parent map per level:
    /// `parent_maps[l][i]` is the position, within level `l + 1`, of the
    /// parent of the `i`-th node of level `l`. The last map must send
    /// everything to position 0.
    pub fn from_parent_maps(leaf_ranks: &[usize], parent_maps: &[Vec<usize>]) -> Result<Self> {
        let mut sizes = vec![leaf_ranks.len()];
        for (l, map) in parent_maps.iter().enumerate() {
            if map.len() != sizes[l] {
                return Err(FissionError::Malformed(format!(
                    "parent map {l} has the wrong length"
                )));
            }
            sizes.push(map.iter().max().map_or(0, |m| m + 1));
        }
        if sizes.last() != Some(&1) {
            return Err(FissionError::Malformed(
                "the top level must hold exactly one root".into(),
            ));
        }
        let starts: Vec<usize> = sizes
            .iter()
            .scan(0, |acc, &s| Some(std::mem::replace(acc, *acc + s)))
            .collect();
        let total: usize = sizes.iter().sum();
        let levels = sizes
            .iter()
            .zip(&starts)
            .map(|(&s, &st)| (st..st + s).collect())
            .collect();
        let mut parents = vec![None; total];
        for (l, map) in parent_maps.iter().enumerate() {
            for (i, &p) in map.iter().enumerate() {
                parents[starts[l] + i] = Some(starts[l + 1] + p);
            }
        }
        let mut ranks = vec![0; total];
        ranks[..leaf_ranks.len()].copy_from_slice(leaf_ranks);
        for v in 0..total {
            if let Some(p) = parents[v] {
                ranks[p] += ranks[v];
            }
        }
        TreeData {
            levels,
            parents,
            ranks,
            indices: None,
        }
        .try_into()
    }

    pub fn height(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.parents.len()
    }

    pub fn root(&self) -> usize {
        self.levels[self.height()][0]
    }

    /// Nodes of level `l`, `1 ≤ l ≤ height + 1`.
    pub fn level(&self, l: usize) -> &[usize] {
        &self.levels[l - 1]
    }

    pub fn levels(&self) -> &[Vec<usize>] {
        &self.levels
    }

    pub fn level_ranks(&self, l: usize) -> Vec<usize> {
        self.level(l).iter().map(|&v| self.ranks[v]).collect()
    }

    /// 1-based level of a node.
    pub fn level_of(&self, v: usize) -> usize {
        self.level_of[v] + 1
    }

    pub fn leaves(&self) -> &[usize] {
        &self.levels[0]
    }

    pub fn rank(&self, v: usize) -> usize {
        self.ranks[v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parents[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.level_of[v] == 0
    }

    pub fn indices(&self, v: usize) -> Option<&[usize]> {
        self.indices.as_ref().map(|ix| ix[v].as_slice())
    }

    pub fn has_provenance(&self) -> bool {
        self.indices.is_some()
    }

    /// Leaves below `v`, in natural order.
    pub fn leaves_under(&self, v: usize) -> Vec<usize> {
        if self.is_leaf(v) {
            return vec![v];
        }
        self.children[v]
            .iter()
            .flat_map(|&c| self.leaves_under(c))
            .sorted()
            .collect()
    }

    pub fn leaf_count(&self, v: usize) -> usize {
        if self.is_leaf(v) {
            1
        } else {
            self.children[v].iter().map(|&c| self.leaf_count(c)).sum()
        }
    }

    fn min_leaf(&self, v: usize) -> usize {
        let mut v = v;
        while !self.is_leaf(v) {
            v = self.children[v][0];
        }
        v
    }

    /// Bottom-up encoding: a leaf is its rank, an internal node is
    /// `rank(children...)` with the child encodings sorted.
    pub fn encoding(&self, v: usize) -> String {
        if self.is_leaf(v) {
            return self.ranks[v].to_string();
        }
        let kids = self.children[v]
            .iter()
            .map(|&c| self.encoding(c))
            .sorted()
            .join(",");
        format!("{}({kids})", self.ranks[v])
    }

    /// Children sorted by (encoding, smallest leaf).
    pub fn canonical_children(&self, v: usize) -> Vec<usize> {
        self.children[v]
            .iter()
            .map(|&c| (self.encoding(c), self.min_leaf(c), c))
            .sorted()
            .map(|(_, _, c)| c)
            .collect()
    }

    /// Leaves under `v` in canonical order.
    pub fn canonical_leaves_under(&self, v: usize) -> Vec<usize> {
        if self.is_leaf(v) {
            return vec![v];
        }
        self.canonical_children(v)
            .into_iter()
            .flat_map(|c| self.canonical_leaves_under(c))
            .collect()
    }

    /// Sibling classes of `v`'s children: runs of equal encodings in
    /// canonical child order, as `(start, length)`.
    fn canonical_runs(&self, v: usize) -> Vec<(usize, usize)> {
        let kids = self.canonical_children(v);
        let codes: Vec<String> = kids.iter().map(|&c| self.encoding(c)).collect();
        let mut runs = Vec::new();
        let mut start = 0;
        for i in 1..=codes.len() {
            if i == codes.len() || codes[i] != codes[start] {
                runs.push((start, i - start));
                start = i;
            }
        }
        runs
    }

    pub fn to_dot(&self) -> String {
        let mut out =
            String::from("digraph fission_tree {\n  rankdir=TB;\n  node [shape=circle];\n");
        for l in (1..=self.height() + 1).rev() {
            let nodes = self
                .level(l)
                .iter()
                .map(|v| format!("n{v} [label=\"{}\"];", self.ranks[*v]))
                .join(" ");
            let _ = writeln!(out, "  {{ rank=same; {nodes} }}");
        }
        for l in (2..=self.height() + 1).rev() {
            for &v in self.level(l) {
                for &c in &self.children[v] {
                    let _ = writeln!(out, "  n{v} -> n{c};");
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

/// The ranked fission tree of a type-A irregular type.
pub fn build_tree(q: &IrregularType) -> Result<RankedFissionTree> {
    if !q.is_type_a() {
        return Err(FissionError::NotTypeA);
    }
    let n = q.root_system().dim();
    let p = q.p();
    // blocks[l] lists the level-(l+1) blocks, each sorted, ordered by first index.
    let mut blocks: Vec<Vec<Vec<usize>>> = Vec::with_capacity(p + 1);
    for l in 0..=p {
        let mut by_key: BTreeMap<Vec<Rational>, Vec<usize>> = BTreeMap::new();
        let mut order = Vec::new();
        for i in 0..n {
            let key: Vec<Rational> = q.coefficients()[l..].iter().map(|c| c[i]).collect();
            let entry = by_key.entry(key.clone()).or_default();
            if entry.is_empty() {
                order.push(key);
            }
            entry.push(i);
        }
        blocks.push(order.iter().map(|k| by_key[k].clone()).collect());
    }
    let starts: Vec<usize> = blocks
        .iter()
        .scan(0, |acc, b| Some(std::mem::replace(acc, *acc + b.len())))
        .collect();
    let total: usize = blocks.iter().map(Vec::len).sum();
    let mut parents = vec![None; total];
    let mut ranks = vec![0; total];
    let mut indices = vec![Vec::new(); total];
    let mut levels = Vec::new();
    for (l, level) in blocks.iter().enumerate() {
        levels.push((starts[l]..starts[l] + level.len()).collect());
        for (k, block) in level.iter().enumerate() {
            let v = starts[l] + k;
            ranks[v] = block.len();
            indices[v] = block.clone();
            if l < p {
                let up = blocks[l + 1]
                    .iter()
                    .position(|b| b.contains(&block[0]))
                    .expect("coarser level covers");
                parents[v] = Some(starts[l + 1] + up);
            }
        }
    }
    TreeData {
        levels,
        parents,
        ranks,
        indices: Some(indices),
    }
    .try_into()
}

/// Bottom-up isomorphism invariant of the whole ranked tree.
pub fn canonical_form(t: &RankedFissionTree) -> String {
    t.encoding(t.root())
}

/// An isomorphism class of maximal proper subtrees (children of the root).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubtreeClass {
    pub encoding: String,
    /// Member with the smallest leaf.
    pub representative: usize,
    pub multiplicity: usize,
    pub members: Vec<usize>,
}

/// Classes ordered by representative.
pub fn subtree_classes(t: &RankedFissionTree) -> Vec<SubtreeClass> {
    let root = t.root();
    if t.is_leaf(root) {
        return Vec::new();
    }
    let mut classes: Vec<SubtreeClass> = Vec::new();
    let kids = t
        .children(root)
        .iter()
        .copied()
        .sorted_by_key(|&c| t.min_leaf(c));
    for c in kids {
        let code = t.encoding(c);
        match classes.iter_mut().find(|k| k.encoding == code) {
            Some(k) => {
                k.multiplicity += 1;
                k.members.push(c);
            }
            None => classes.push(SubtreeClass {
                encoding: code,
                representative: c,
                multiplicity: 1,
                members: vec![c],
            }),
        }
    }
    classes
}

fn aut_expr_at(t: &RankedFissionTree, v: usize, extended: bool) -> GroupExpr {
    if t.is_leaf(v) {
        return if extended {
            GroupExpr::Symmetric(t.rank(v))
        } else {
            GroupExpr::Trivial
        };
    }
    let kids = t.canonical_children(v);
    let factors = t.canonical_runs(v).into_iter().map(|(start, len)| {
        GroupExpr::wreath(
            GroupExpr::Symmetric(len),
            aut_expr_at(t, kids[start], extended),
        )
    });
    GroupExpr::product(factors.collect::<Vec<_>>())
}

/// `Aut(T, r) = ∏_t S_{n(t)} ≀ Aut(t)` with trivial groups at the leaves.
pub fn aut_expr(t: &RankedFissionTree) -> GroupExpr {
    aut_expr_at(t, t.root(), false).canonical()
}

/// The same recursion with `S_{rank}` at each leaf.
pub fn extended_aut_expr(t: &RankedFissionTree) -> GroupExpr {
    aut_expr_at(t, t.root(), true).canonical()
}

/// Generators on the points under `v` in canonical order, where each leaf
/// owns `width(leaf)` consecutive points and contributes `leaf_gens`.
fn realize_at(
    t: &RankedFissionTree,
    v: usize,
    width: &dyn Fn(usize) -> usize,
    leaf_gens: &dyn Fn(usize) -> Vec<Permutation>,
) -> Result<(usize, Vec<Permutation>)> {
    if t.is_leaf(v) {
        return Ok((width(v), leaf_gens(v)));
    }
    let kids = t.canonical_children(v);
    let parts = kids
        .iter()
        .map(|&c| realize_at(t, c, width, leaf_gens))
        .collect::<Result<Vec<_>>>()?;
    let widths: Vec<usize> = parts.iter().map(|(w, _)| *w).collect();
    let ids: Vec<Permutation> = widths.iter().map(|&w| Permutation::identity(w)).collect();
    let k = kids.len();
    let mut gens = Vec::new();
    for (start, len) in t.canonical_runs(v) {
        for i in start..start + len - 1 {
            gens.push(gamma_s(&Permutation::transposition(k, i, i + 1), &ids)?);
        }
    }
    for (i, (_, inner)) in parts.iter().enumerate() {
        for g in inner {
            let mut slot = ids.clone();
            slot[i] = g.clone();
            gens.push(gamma_s(&Permutation::identity(k), &slot)?);
        }
    }
    Ok((widths.iter().sum(), gens))
}

/// Natural leaf ids in canonical order.
pub fn canonical_leaf_order(t: &RankedFissionTree) -> Vec<usize> {
    t.canonical_leaves_under(t.root())
}

/// Ambient indices in canonical order: leaf index subsets, each ascending,
/// concatenated along the canonical leaf order.
pub fn canonical_ambient_order(t: &RankedFissionTree) -> Result<Vec<usize>> {
    let ix = t.indices.as_ref().ok_or(FissionError::MissingProvenance)?;
    Ok(canonical_leaf_order(t)
        .into_iter()
        .flat_map(|l| ix[l].iter().copied())
        .collect())
}

fn relabeled(group_gens: Vec<Permutation>, degree: usize, order: &[usize]) -> Result<PermGroup> {
    let pi = Permutation::from_images(order.to_vec())?;
    Ok(PermGroup::new(
        degree,
        group_gens.iter().map(|g| pi.conjugate(g)).collect(),
    )?)
}

/// `Aut(T, r)` acting on leaves in canonical order.
pub fn aut_perm_leaves_canonical(t: &RankedFissionTree) -> Result<PermGroup> {
    let (deg, gens) = realize_at(t, t.root(), &|_| 1, &|_| Vec::new())?;
    Ok(PermGroup::new(deg, gens)?)
}

/// `Aut(T, r)` acting on leaves in natural order.
pub fn aut_perm_leaves(t: &RankedFissionTree) -> Result<PermGroup> {
    let (deg, gens) = realize_at(t, t.root(), &|_| 1, &|_| Vec::new())?;
    relabeled(gens, deg, &canonical_leaf_order(t))
}

/// Image of `Aut(T, r)` in `S_n`: every leaf is expanded to its index
/// block, elements kept in ascending order.
pub fn aut_perm_ambient(t: &RankedFissionTree) -> Result<PermGroup> {
    let order = canonical_ambient_order(t)?;
    let (deg, gens) = realize_at(t, t.root(), &|l| t.rank(l), &|_| Vec::new())?;
    relabeled(gens, deg, &order)
}

/// `Ãut(T, r)` in `S_n`: the ambient image plus the symmetric group of
/// every leaf block.
pub fn extended_aut_perm_ambient(t: &RankedFissionTree) -> Result<PermGroup> {
    let order = canonical_ambient_order(t)?;
    let (deg, gens) = realize_at(t, t.root(), &|l| t.rank(l), &|l| {
        symmetric_generators(t.rank(l))
    })?;
    relabeled(gens, deg, &order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::BruteForceBound;

    fn gl(coeffs: &[&[i64]]) -> RankedFissionTree {
        build_tree(&IrregularType::gl_integers(coeffs).unwrap()).unwrap()
    }

    fn first_gl9() -> RankedFissionTree {
        gl(&[
            &[4, 3, 2, 1, 0, -1, -2, -3, -4],
            &[4, 4, 3, 2, 1, 0, -3, -4, -7],
            &[2, 2, 1, 1, 1, 0, 0, 0, -7],
        ])
    }

    #[test]
    fn first_gl9_tree_shape() {
        let t = first_gl9();
        assert_eq!(t.height(), 3);
        assert_eq!(t.level_ranks(4), vec![9]);
        assert_eq!(t.level_ranks(3), vec![2, 3, 3, 1]);
        assert_eq!(t.level_ranks(2), vec![2, 1, 1, 1, 1, 1, 1, 1]);
        assert_eq!(t.level_ranks(1), vec![1; 9]);
        for l in 1..=4 {
            assert_eq!(t.level_ranks(l).iter().sum::<usize>(), 9);
        }
    }

    #[test]
    fn first_gl9_groups() {
        let t = first_gl9();
        let aut = aut_expr(&t);
        assert_eq!(aut.to_string(), "S2 x (S2 wr S3)");
        assert_eq!(aut.order(), 144);
        let b = BruteForceBound::default();
        assert_eq!(aut_perm_leaves(&t).unwrap().order(b).unwrap(), 144);
        assert_eq!(aut_perm_ambient(&t).unwrap().order(b).unwrap(), 144);
        let classes = subtree_classes(&t);
        let mults: Vec<(usize, usize)> = classes
            .iter()
            .map(|c| (t.rank(c.representative), c.multiplicity))
            .collect();
        assert_eq!(mults, vec![(2, 1), (3, 2), (1, 1)]);
    }

    #[test]
    fn chain_tree_for_one_index() {
        let t = gl(&[&[5], &[1], &[2]]);
        assert_eq!(t.node_count(), 4);
        assert!(aut_expr(&t).is_trivial());
        assert!(extended_aut_expr(&t).is_trivial());
    }

    #[test]
    fn height_zero_tree() {
        let t = RankedFissionTree::from_parent_maps(&[3], &[]).unwrap();
        assert_eq!(t.height(), 0);
        assert!(aut_expr(&t).is_trivial());
        assert_eq!(extended_aut_expr(&t), GroupExpr::Symmetric(3));
        assert!(subtree_classes(&t).is_empty());
    }

    #[test]
    fn mirror_trees_share_encodings() {
        let a =
            RankedFissionTree::from_parent_maps(&[1, 1, 2], &[vec![0, 0, 1], vec![0, 0]]).unwrap();
        let b =
            RankedFissionTree::from_parent_maps(&[2, 1, 1], &[vec![0, 1, 1], vec![0, 0]]).unwrap();
        assert_eq!(canonical_form(&a), canonical_form(&b));
        let c =
            RankedFissionTree::from_parent_maps(&[1, 1, 3], &[vec![0, 0, 1], vec![0, 0]]).unwrap();
        assert_ne!(canonical_form(&a), canonical_form(&c));
    }

    #[test]
    fn single_level_examples() {
        let t = gl(&[&[1, 1, 2, 2, 3, 3]]);
        assert_eq!(extended_aut_expr(&t).to_string(), "S3 wr S2");
        let t = gl(&[&[0, 1, 2, 2]]);
        let b = BruteForceBound::default();
        let g = aut_perm_leaves(&t).unwrap();
        assert_eq!(g.order(b).unwrap(), 2);
        assert!(g.contains(&Permutation::transposition(3, 0, 1), b).unwrap());
        let t = gl(&[&[1, 0]]);
        assert!(aut_perm_ambient(&t)
            .unwrap()
            .same_elements(&PermGroup::symmetric(2), b)
            .unwrap());
    }

    #[test]
    fn malformed_trees_are_rejected() {
        assert!(RankedFissionTree::from_parent_maps(&[1, 1], &[vec![0, 1]]).is_err());
        assert!(RankedFissionTree::from_parent_maps(&[0], &[vec![0]]).is_err());
        let json = r#"{"levels":[[0,1],[2]],"parents":[2,2,null],"ranks":[1,1,3]}"#;
        assert!(serde_json::from_str::<RankedFissionTree>(json).is_err());
    }

    #[test]
    fn json_round_trip() {
        let t = first_gl9();
        let text = serde_json::to_string(&t).unwrap();
        let back: RankedFissionTree = serde_json::from_str(&text).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn dot_output_lists_every_edge() {
        let t = first_gl9();
        let dot = t.to_dot();
        assert_eq!(dot.matches("->").count(), t.node_count() - 1);
        assert!(dot.contains("label=\"9\""));
    }
}
