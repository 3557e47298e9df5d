//! Assembly of the full analysis of an irregular type: fission tree, Weyl
//! data, cabled braid generators and the checks tying them together.
//!
//! Braid generators live on the leaves of the tree in canonical leaf order
//! (see [`crate::fission`]), one strand per leaf.

use std::time::Instant;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::{
    augmentation, cable, is_semipure, juxtapose, pure_generator, semipure_generators, BraidError,
    BraidWord, PartitionMap,
};
use crate::fission::{
    aut_expr, aut_perm_ambient, aut_perm_leaves_canonical, build_tree, canonical_leaf_order,
    extended_aut_expr, extended_aut_perm_ambient, FissionError, RankedFissionTree,
};
use crate::permgroup::{BruteForceBound, GroupExpr, Notation, PermError, PermGroup};
use crate::rootsys::{
    fission_filtration, fission_quotient_order, kernel_flag, pointwise_stabilizer,
    recursive_stabilizer, reflection_subgroup, setwise_stabilizer_bruteforce, IrregularType,
    IrregularTypeDoc, RootSysError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WmcgError {
    #[error(transparent)]
    RootSys(#[from] RootSysError),
    #[error(transparent)]
    Fission(#[from] FissionError),
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error(transparent)]
    Perm(#[from] PermError),
}

pub type Result<T> = std::result::Result<T, WmcgError>;

/// Strand count under `v`, its generators, and how many of them (at the
/// front) are lifted from `v`'s own children.
fn generators_at(
    t: &RankedFissionTree,
    v: usize,
    full: bool,
) -> Result<(usize, Vec<BraidWord>, usize)> {
    if t.is_leaf(v) {
        return Ok((1, Vec::new(), 0));
    }
    let kids = t.canonical_children(v);
    let parts = kids
        .iter()
        .map(|&c| generators_at(t, c, full))
        .collect::<Result<Vec<_>>>()?;
    let widths: Vec<usize> = parts.iter().map(|(w, _, _)| *w).collect();
    let ids: Vec<BraidWord> = widths.iter().map(|&w| BraidWord::identity(w)).collect();
    let k = kids.len();
    let base: Vec<BraidWord> = if full {
        let labels: Vec<String> = kids.iter().map(|&c| t.encoding(c)).collect();
        let firsts: Vec<usize> = labels
            .iter()
            .map(|l| labels.iter().position(|m| m == l).unwrap())
            .collect();
        semipure_generators(&PartitionMap::new(&firsts))
    } else {
        (1..=k)
            .tuple_combinations()
            .map(|(a, b)| pure_generator(a, b, k))
            .collect::<std::result::Result<_, _>>()?
    };
    let mut gens = Vec::new();
    for g in &base {
        gens.push(cable(g, &widths, &ids)?);
    }
    for (i, (_, inner, _)) in parts.iter().enumerate() {
        for g in inner {
            let mut slot = ids.clone();
            slot[i] = g.clone();
            gens.push(juxtapose(&slot)?);
        }
    }
    Ok((widths.iter().sum(), gens, base.len()))
}

/// Generators of the pure cabled braid group: at each internal node the
/// pure generators `A_ab` of its children, cabled along the child subtrees.
pub fn pure_cabled_generators(t: &RankedFissionTree) -> Result<Vec<BraidWord>> {
    Ok(generators_at(t, t.root(), false)?.1)
}

/// Generators of the cabled braid group: as the pure ones, but each node
/// uses the semipure generators for the partition of its children into
/// isomorphism classes.
pub fn cabled_generators(t: &RankedFissionTree) -> Result<Vec<BraidWord>> {
    Ok(generators_at(t, t.root(), true)?.1)
}

/// `Σ C(k, 2)` over internal nodes with `k` children.
pub fn expected_pure_generator_count(t: &RankedFissionTree) -> usize {
    (0..t.node_count())
        .map(|v| t.children(v).len())
        .map(|k| k * k.saturating_sub(1) / 2)
        .sum()
}

/// Strand permutations reached by the generators.
pub fn augmentation_closure(strands: usize, gens: &[BraidWord]) -> Result<PermGroup> {
    Ok(PermGroup::new(
        strands,
        gens.iter().map(augmentation).collect(),
    )?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub expr: Option<String>,
    pub order: Option<u128>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Groups {
    pub w_h1: GroupSummary,
    pub stab_flag: GroupSummary,
    pub aut: GroupSummary,
    pub ext_aut: GroupSummary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generators {
    pub pure: Vec<BraidWord>,
    pub full: Vec<BraidWord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub input: IrregularTypeDoc,
    pub tree: Option<RankedFissionTree>,
    /// Natural leaf ids in the order used for strands and permutations.
    pub leaf_order: Option<Vec<usize>>,
    pub groups: Groups,
    pub covering_degree: Option<u128>,
    pub pure: Option<bool>,
    pub generators: Option<Generators>,
    pub verifications: Vec<Verification>,
}

impl AnalysisReport {
    pub fn has_failures(&self) -> bool {
        self.verifications.iter().any(|v| v.status == Status::Fail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub bound: BruteForceBound,
    /// Run the Weyl-group oracles even above the bound.
    pub force_oracles: bool,
    pub notation: Notation,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            bound: BruteForceBound::default(),
            force_oracles: false,
            notation: Notation::Ascii,
        }
    }
}

struct Checks(Vec<Verification>);

impl Checks {
    fn record(&mut self, name: &str, outcome: Result<(bool, String)>) {
        let (status, detail) = match outcome {
            Ok((true, detail)) => (Status::Pass, detail),
            Ok((false, detail)) => (Status::Fail, detail),
            Err(WmcgError::Perm(PermError::BruteForceBound { max_n, .. }))
            | Err(WmcgError::RootSys(RootSysError::Perm(PermError::BruteForceBound {
                max_n,
                ..
            }))) => (
                Status::Skipped,
                format!("skipped: brute-force bound (max n = {max_n})"),
            ),
            Err(e) => (Status::Fail, format!("error: {e}")),
        };
        self.0.push(Verification {
            name: name.to_string(),
            status,
            detail,
        });
    }

    fn skip(&mut self, name: &str, reason: &str) {
        self.0.push(Verification {
            name: name.to_string(),
            status: Status::Skipped,
            detail: format!("skipped: {reason}"),
        });
    }
}

fn summary(expr: &GroupExpr, notation: Notation) -> GroupSummary {
    GroupSummary {
        expr: Some(expr.render(notation)),
        order: expr.checked_order(),
    }
}

pub fn analyze(q: &IrregularType, opts: &AnalyzeOptions) -> Result<AnalysisReport> {
    if q.is_type_a() {
        analyze_type_a(q, opts)
    } else {
        analyze_rank_two(q, opts)
    }
}

fn oracle_bound(q: &IrregularType, opts: &AnalyzeOptions) -> BruteForceBound {
    if opts.force_oracles {
        BruteForceBound::new(opts.bound.max_n.max(q.root_system().dim()))
    } else {
        opts.bound
    }
}

fn analyze_type_a(q: &IrregularType, opts: &AnalyzeOptions) -> Result<AnalysisReport> {
    let bound = opts.bound;
    let oracle = oracle_bound(q, opts);
    let rs = q.root_system();
    let tree = build_tree(q)?;
    let filtration = fission_filtration(q)?;
    let aut = aut_expr(&tree);
    let ext = extended_aut_expr(&tree);
    let w_h1 = GroupExpr::product(
        tree.leaves()
            .iter()
            .map(|&l| GroupExpr::Symmetric(tree.rank(l))),
    )
    .canonical();
    let pure_gens = pure_cabled_generators(&tree)?;
    let full_gens = cabled_generators(&tree)?;
    let strands = tree.leaves().len();
    let mut checks = Checks(Vec::new());

    checks.record(
        "tree ranks are conserved level by level",
        Ok({
            let n = rs.dim();
            let ok =
                (1..=tree.height() + 1).all(|l| tree.level_ranks(l).iter().sum::<usize>() == n);
            (ok, format!("every level sums to {n}"))
        }),
    );

    checks.record(
        "automorphism expression order equals leaf permutation group order",
        (|| {
            let g = aut_perm_leaves_canonical(&tree)?;
            let order = g.order(bound)? as u128;
            let expected = aut.checked_order();
            let shown = expected.map_or_else(|| "overflow".to_string(), |o| o.to_string());
            Ok((
                Some(order) == expected,
                format!("|group| = {order}, expression order = {shown}"),
            ))
        })(),
    );

    checks.record(
        "extended automorphisms equal the flag stabilizer",
        (|| {
            let flag = kernel_flag(rs, &filtration);
            let direct = setwise_stabilizer_bruteforce(rs, &flag, oracle)?;
            let recursive = recursive_stabilizer(rs, &filtration, oracle)?;
            let ambient = extended_aut_perm_ambient(&tree)?;
            let a = direct.same_elements(&recursive, oracle)?;
            let b = direct.same_elements(&ambient, oracle)?;
            let order = direct.order(oracle)? as u128;
            let c = Some(order) == ext.checked_order();
            Ok((
                a && b && c,
                format!("|Stab| = {order}; recursive agrees: {a}; tree realization agrees: {b}"),
            ))
        })(),
    );

    checks.record(
        "pointwise stabilizer is generated by level-one reflections",
        (|| {
            let flag = kernel_flag(rs, &filtration);
            let pw = pointwise_stabilizer(rs, &flag, oracle)?;
            let refl = reflection_subgroup(rs, filtration.level(1));
            let same = pw.same_elements(&refl, oracle)?;
            let order = pw.order(oracle)? as u128;
            Ok((
                same && Some(order) == w_h1.checked_order(),
                format!("|W_h1| = {order}"),
            ))
        })(),
    );

    checks.record("tree automorphisms split the flag stabilizer", (|| {
        let flag = kernel_flag(rs, &filtration);
        let stab = setwise_stabilizer_bruteforce(rs, &flag, oracle)?;
        let pw = pointwise_stabilizer(rs, &flag, oracle)?;
        let image = aut_perm_ambient(&tree)?;
        let meet = image.intersection(&pw, oracle)?.order(oracle)?;
        let (a, w, s) = (image.order(oracle)?, pw.order(oracle)?, stab.order(oracle)?);
        let generated = image.join(&pw)?.same_elements(&stab, oracle)?;
        let q = fission_quotient_order(rs, &filtration, oracle)?;
        Ok((
            meet == 1 && a * w == s && generated && q.quotient == a,
            format!("|Aut| = {a}, |W_h1| = {w}, |Stab| = {s}, intersection {meet}, generated: {generated}"),
        ))
    })());

    checks.record(
        "pure cabled generators augment to the identity",
        Ok({
            let count = pure_gens.len();
            let expected = expected_pure_generator_count(&tree);
            let pure = pure_gens.iter().all(|g| augmentation(g).is_identity());
            (
                pure && count == expected,
                format!("{count} generators, expected {expected}"),
            )
        }),
    );

    checks.record(
        "cabled generators augment onto the leaf automorphisms",
        (|| {
            let closure = augmentation_closure(strands, &full_gens)?;
            let leaves = aut_perm_leaves_canonical(&tree)?;
            let same = closure.same_elements(&leaves, bound)?;
            Ok((
                same,
                format!("augmentation closure of order {}", closure.order(bound)?),
            ))
        })(),
    );

    checks.record(
        "cabled generators preserve leaf ranks",
        (|| {
            let order = canonical_leaf_order(&tree);
            let ranks: Vec<usize> = order.iter().map(|&l| tree.rank(l)).collect();
            let phi = PartitionMap::new(&ranks);
            let ok = full_gens
                .iter()
                .map(|g| is_semipure(g, &phi))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            Ok((
                ok.iter().all(|&x| x),
                format!("{} generators checked", ok.len()),
            ))
        })(),
    );

    checks.record(
        "inner generators stay in their blocks under conjugation",
        (|| {
            let root = tree.root();
            if tree.is_leaf(root) {
                return Ok((true, "single node".to_string()));
            }
            let labels: Vec<usize> = tree
                .canonical_children(root)
                .iter()
                .enumerate()
                .flat_map(|(i, &c)| std::iter::repeat_n(i, tree.leaf_count(c)))
                .collect();
            let blocks = PartitionMap::new(&labels);
            let (_, _, lifted_count) = generators_at(&tree, root, true)?;
            let (lifted, inner) = full_gens.split_at(lifted_count);
            let mut checked = 0;
            for g in lifted {
                for h in inner {
                    let conj = g.concat(h)?.concat(&g.inverse())?;
                    if !is_semipure(&conj, &blocks)? {
                        return Ok((false, format!("{conj} leaves its block")));
                    }
                    checked += 1;
                }
            }
            Ok((true, format!("{checked} conjugates checked")))
        })(),
    );

    let covering = aut.checked_order();
    let ext_summary = summary(&ext, opts.notation);
    Ok(AnalysisReport {
        input: q.to_doc(),
        leaf_order: Some(canonical_leaf_order(&tree)),
        tree: Some(tree),
        groups: Groups {
            w_h1: summary(&w_h1, opts.notation),
            stab_flag: ext_summary.clone(),
            aut: summary(&aut, opts.notation),
            ext_aut: ext_summary,
        },
        covering_degree: covering,
        pure: Some(aut.is_trivial()),
        generators: Some(Generators {
            pure: pure_gens,
            full: full_gens,
        }),
        verifications: checks.0,
    })
}

fn analyze_rank_two(q: &IrregularType, _opts: &AnalyzeOptions) -> Result<AnalysisReport> {
    let rs = q.root_system();
    let bound = BruteForceBound::unbounded();
    let filtration = fission_filtration(q)?;
    let flag = kernel_flag(rs, &filtration);
    let stab = setwise_stabilizer_bruteforce(rs, &flag, bound)?;
    let pw = pointwise_stabilizer(rs, &flag, bound)?;
    let quotient = fission_quotient_order(rs, &filtration, bound)?;
    let mut checks = Checks(Vec::new());

    checks.record(
        "recursive stabilizer equals the flag stabilizer",
        (|| {
            let rec = recursive_stabilizer(rs, &filtration, bound)?;
            Ok((
                rec.same_elements(&stab, bound)?,
                format!("|Stab| = {}", quotient.stabilizer),
            ))
        })(),
    );
    checks.record(
        "pointwise stabilizer is generated by level-one reflections",
        (|| {
            let refl = reflection_subgroup(rs, filtration.level(1));
            Ok((
                refl.same_elements(&pw, bound)?,
                format!("|W_h1| = {}", quotient.pointwise),
            ))
        })(),
    );
    checks.record(
        "pointwise stabilizer is normal in the flag stabilizer",
        (|| {
            Ok((
                pw.is_normal_in(&stab, bound)?,
                format!("quotient order {}", quotient.quotient),
            ))
        })(),
    );
    for name in [
        "tree ranks are conserved level by level",
        "cabled generators augment onto the leaf automorphisms",
    ] {
        checks.skip(
            name,
            "fission trees and cabled braids are defined for type A only",
        );
    }

    let order_only = |o: usize| GroupSummary {
        expr: None,
        order: Some(o as u128),
    };
    Ok(AnalysisReport {
        input: q.to_doc(),
        tree: None,
        leaf_order: None,
        groups: Groups {
            w_h1: order_only(quotient.pointwise),
            stab_flag: order_only(quotient.stabilizer),
            aut: GroupSummary {
                expr: None,
                order: None,
            },
            ext_aut: GroupSummary {
                expr: None,
                order: None,
            },
        },
        covering_degree: Some(quotient.quotient as u128),
        pure: Some(quotient.quotient == 1),
        generators: None,
        verifications: checks.0,
    })
}

/// Times `analyze`, returning the report and elapsed seconds.
pub fn analyze_timed(q: &IrregularType, opts: &AnalyzeOptions) -> Result<(AnalysisReport, f64)> {
    let start = Instant::now();
    let report = analyze(q, opts)?;
    Ok((report, start.elapsed().as_secs_f64()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::word_equal;

    fn gl(coeffs: &[&[i64]]) -> IrregularType {
        IrregularType::gl_integers(coeffs).unwrap()
    }

    #[test]
    fn rank_one_generic() {
        let q = gl(&[&[1, 0]]);
        let r = analyze(&q, &AnalyzeOptions::default()).unwrap();
        assert_eq!(r.covering_degree, Some(2));
        assert_eq!(r.groups.aut.expr.as_deref(), Some("S2"));
        assert!(!r.has_failures());
        let gens = r.generators.unwrap();
        assert_eq!(
            gens.full,
            vec![
                BraidWord::new(2, vec![1, 1]).unwrap(),
                BraidWord::new(2, vec![1]).unwrap()
            ]
        );
        assert_eq!(gens.pure.len(), 1);
        assert!(word_equal(&gens.pure[0], &BraidWord::new(2, vec![1, 1]).unwrap()).unwrap());
    }

    #[test]
    fn nongeneric_a2_is_pure() {
        let r = analyze(&gl(&[&[1, 1, 0]]), &AnalyzeOptions::default()).unwrap();
        assert_eq!(r.covering_degree, Some(1));
        assert_eq!(r.pure, Some(true));
        assert!(
            r.verifications.iter().all(|v| v.status == Status::Pass),
            "{:?}",
            r.verifications
        );
    }

    #[test]
    fn two_level_generator_counts() {
        // Root children: a two-leaf subtree and a single leaf.
        let q = gl(&[&[1, 2, 3], &[0, 0, 1]]);
        let t = build_tree(&q).unwrap();
        let pure = pure_cabled_generators(&t).unwrap();
        assert_eq!(pure.len(), 2);
        assert!(pure.iter().all(|g| augmentation(g).is_identity()));
    }

    #[test]
    fn degenerate_chain_has_no_generators() {
        let r = analyze(&gl(&[&[3], &[1]]), &AnalyzeOptions::default()).unwrap();
        let gens = r.generators.unwrap();
        assert!(gens.pure.is_empty() && gens.full.is_empty());
        assert_eq!(r.covering_degree, Some(1));
    }

    #[test]
    fn gl9_skips_oracles_by_default() {
        let q = gl(&[
            &[4, 3, 2, 1, 0, -1, -2, -3, -4],
            &[4, 4, 3, 2, 1, 0, -3, -4, -7],
            &[2, 2, 1, 1, 1, 0, 0, 0, -7],
        ]);
        let r = analyze(&q, &AnalyzeOptions::default()).unwrap();
        assert_eq!(r.covering_degree, Some(144));
        assert!(!r.has_failures());
        let skipped = r
            .verifications
            .iter()
            .filter(|v| v.status == Status::Skipped)
            .count();
        assert!(skipped >= 2);
        assert!(r
            .verifications
            .iter()
            .filter(|v| v.status == Status::Skipped)
            .all(|v| v.detail.contains("brute-force bound")));
    }

    #[test]
    fn report_round_trips_through_json() {
        let r = analyze(
            &gl(&[&[1, 1, 2, 3], &[0, 0, 0, 1]]),
            &AnalyzeOptions::default(),
        )
        .unwrap();
        let text = serde_json::to_string_pretty(&r).unwrap();
        let back: AnalysisReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn rank_two_reports() {
        use crate::rootsys::{Algebra, RootSystem};
        use std::sync::Arc;
        let one = |x: i64| crate::linalg::Rational::from_integer(x);
        let b2 = IrregularType::new(
            Algebra::B2,
            Arc::new(RootSystem::b2()),
            vec![vec![one(0), one(1)]],
        )
        .unwrap();
        let r = analyze(&b2, &AnalyzeOptions::default()).unwrap();
        assert_eq!(
            (r.groups.stab_flag.order, r.covering_degree),
            (Some(4), Some(2))
        );
        let g2 = IrregularType::new(
            Algebra::G2,
            Arc::new(RootSystem::g2()),
            vec![vec![one(1), one(1)], vec![one(0), one(1)]],
        )
        .unwrap();
        let r = analyze(&g2, &AnalyzeOptions::default()).unwrap();
        assert_eq!(r.covering_degree, Some(4));
        assert!(!r.has_failures());
    }
}
