//! Braid words on `n` strands, their underlying permutations, and the
//! cabling (operadic composition) of braids.
//!
//! A word is a product of signed Artin generators; as group elements words
//! act right-to-left, matching [`Permutation::compose`], so
//! `augmentation(a·b) = augmentation(a) ∘ augmentation(b)`.
//!
//! Equality of braids is decided by Dehornoy's handle reduction, which is
//! complete: a word is trivial iff it reduces to the empty word.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::permgroup::{PermError, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BraidError {
    #[error("braids need at least one strand")]
    NoStrands,
    #[error("letter {letter} out of range for {strands} strands")]
    LetterOutOfRange { letter: i32, strands: usize },
    #[error("strand mismatch: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },
    #[error("need 1 <= i < j <= n, got i={i}, j={j}, n={n}")]
    BadIndices { i: usize, j: usize, n: usize },
    #[error("cabling: {0}")]
    Cabling(String),
    #[error("cannot parse braid word: {0}")]
    Parse(String),
    #[error(transparent)]
    Perm(#[from] PermError),
}

pub type Result<T> = std::result::Result<T, BraidError>;

/// A word in the Artin generators of `Br_n`. Letter `k > 0` is `σ_k`,
/// `-k` is `σ_k⁻¹`; generator `σ_k` crosses the strands at 1-based
/// positions `k` and `k+1`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if strands == 0 {
            return Err(BraidError::NoStrands);
        }
        if let Some(&bad) = letters
            .iter()
            .find(|&&l| l == 0 || l.unsigned_abs() as usize >= strands)
        {
            return Err(BraidError::LetterOutOfRange {
                letter: bad,
                strands,
            });
        }
        Ok(Self { strands, letters })
    }

    pub fn identity(strands: usize) -> Self {
        Self::new(strands, Vec::new()).expect("positive strand count")
    }

    pub fn generator(strands: usize, letter: i32) -> Result<Self> {
        Self::new(strands, vec![letter])
    }

    /// Parses whitespace-separated signed 1-based generator indices, e.g. `"1 2 -1"`.
    pub fn parse(strands: usize, text: &str) -> Result<Self> {
        let letters = text
            .split_whitespace()
            .map(|s| {
                s.parse::<i32>()
                    .map_err(|_| BraidError::Parse(format!("bad letter {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(strands, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &BraidWord) -> Result<BraidWord> {
        self.check_same(other)?;
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord {
            strands: self.strands,
            letters,
        })
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    /// The same word viewed on `strands` strands, acting on the block of
    /// strands starting at 0-based position `offset`.
    pub fn shifted(&self, offset: usize, strands: usize) -> Result<BraidWord> {
        if offset + self.strands > strands {
            return Err(BraidError::StrandMismatch {
                left: offset + self.strands,
                right: strands,
            });
        }
        let shift = offset as i32;
        let letters = self
            .letters
            .iter()
            .map(|&l| l.signum() * (l.abs() + shift))
            .collect();
        BraidWord::new(strands, letters)
    }

    fn check_same(&self, other: &BraidWord) -> Result<()> {
        if self.strands != other.strands {
            return Err(BraidError::StrandMismatch {
                left: self.strands,
                right: other.strands,
            });
        }
        Ok(())
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letters.iter().join(" "))
    }
}

impl fmt::Debug for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Br{}[{}]", self.strands, self)
    }
}

/// The underlying permutation: `σ_k ↦ (k, k+1)` regardless of sign.
pub fn augmentation(w: &BraidWord) -> Permutation {
    let mut images: Vec<usize> = (0..w.strands).collect();
    // Rightmost letter acts first: fold from the right, post-composing.
    for &l in w.letters.iter().rev() {
        let k = l.unsigned_abs() as usize;
        for x in images.iter_mut() {
            if *x == k - 1 {
                *x = k;
            } else if *x == k {
                *x = k - 1;
            }
        }
    }
    Permutation::from_images(images).expect("augmentation is a bijection")
}

fn check_pair(i: usize, j: usize, n: usize) -> Result<()> {
    if i == 0 || i >= j || j > n {
        return Err(BraidError::BadIndices { i, j, n });
    }
    Ok(())
}

/// `(σ_{j-1}…σ_{i+1}) core (σ_{i+1}⁻¹…σ_{j-1}⁻¹)` with 1-based `i < j`.
fn conjugated_by_descent(i: usize, j: usize, n: usize, core: &[i32]) -> Result<BraidWord> {
    check_pair(i, j, n)?;
    let prefix: Vec<i32> = (i + 1..j).rev().map(|k| k as i32).collect();
    let mut letters = prefix.clone();
    letters.extend_from_slice(core);
    letters.extend(prefix.iter().rev().map(|k| -k));
    BraidWord::new(n, letters)
}

/// Artin generator `A_{ij}` of the pure braid group (1-based, `i < j`).
pub fn pure_generator(i: usize, j: usize, n: usize) -> Result<BraidWord> {
    conjugated_by_descent(i, j, n, &[i as i32, i as i32])
}

/// Band generator lifting the transposition `(i j)`; its square is `A_{ij}`.
pub fn band_generator(i: usize, j: usize, n: usize) -> Result<BraidWord> {
    conjugated_by_descent(i, j, n, &[i as i32])
}

/// Dehornoy handle reduction to a handle-free word. The returned word is
/// empty iff the input represents the identity braid.
pub fn handle_reduce(w: &BraidWord) -> BraidWord {
    let mut letters = w.letters.clone();
    while let Some((start, end)) = leftmost_handle(&letters) {
        let head = letters[start];
        let i = head.abs();
        let e = head.signum();
        let mut replaced = Vec::with_capacity(end - start + 2);
        for &l in &letters[start + 1..end] {
            if l.abs() == i + 1 {
                // σ_{i+1}^d ↦ σ_{i+1}^{-e} σ_i^d σ_{i+1}^{e}
                replaced.extend([-e * (i + 1), l.signum() * i, e * (i + 1)]);
            } else {
                replaced.push(l);
            }
        }
        letters.splice(start..=end, free_reduce(replaced));
        letters = free_reduce(letters);
    }
    BraidWord {
        strands: w.strands,
        letters,
    }
}

fn free_reduce(letters: Vec<i32>) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(letters.len());
    for l in letters {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// The handle `σ_i^e u σ_i^{-e}` whose closing letter comes first. Its
/// interior contains no handle at all, so it is a permitted handle.
fn leftmost_handle(letters: &[i32]) -> Option<(usize, usize)> {
    for end in 1..letters.len() {
        let closing = letters[end];
        let i = closing.abs();
        for start in (0..end).rev() {
            let l = letters[start];
            if l.abs() == i {
                if l == -closing {
                    return Some((start, end));
                }
                break;
            }
            if l.abs() == i - 1 {
                break;
            }
        }
    }
    None
}

pub fn is_identity(w: &BraidWord) -> bool {
    handle_reduce(w).is_empty()
}

/// Decides equality in `Br_n` via `a · b⁻¹ = 1`.
pub fn word_equal(a: &BraidWord, b: &BraidWord) -> Result<bool> {
    Ok(is_identity(&a.concat(&b.inverse())?))
}

/// Word for the crossing of two adjacent ribbons: the left ribbon (width
/// `left`, starting at 0-based `offset`) passes over the right one (width
/// `right`) with positive crossings.
fn ribbon_crossing(offset: usize, left: usize, right: usize) -> Vec<i32> {
    // Time order: the rightmost strand of the left ribbon moves first.
    let mut timeline = Vec::with_capacity(left * right);
    for i in (0..left).rev() {
        for s in 0..right {
            timeline.push((offset + i + s + 1) as i32);
        }
    }
    // Words act right-to-left, so the first move in time is the last letter.
    timeline.reverse();
    timeline
}

/// Operadic composition of braids: every strand `i` of `base` becomes a
/// ribbon of `widths[i]` parallel strands, and `inner[i]` is braided on
/// ribbon `i` before the base braid acts. Written as a word this is
/// `translated(base) · (inner₁ ⊔ … ⊔ inner_d)`.
pub fn cable(base: &BraidWord, widths: &[usize], inner: &[BraidWord]) -> Result<BraidWord> {
    let d = base.strands;
    if widths.len() != d || inner.len() != d {
        return Err(BraidError::Cabling(format!(
            "base has {d} strands but {} widths and {} inner braids were given",
            widths.len(),
            inner.len()
        )));
    }
    if let Some((k, w)) = inner
        .iter()
        .enumerate()
        .find(|(k, w)| w.strands != widths[*k])
    {
        return Err(BraidError::Cabling(format!(
            "inner braid {k} has {} strands, width is {}",
            w.strands, widths[k]
        )));
    }
    if widths.contains(&0) {
        return Err(BraidError::Cabling("widths must be positive".into()));
    }
    let total: usize = widths.iter().sum();

    // Ribbon occupying each slot, tracked in time order (right to left).
    let mut slots: Vec<usize> = (0..d).collect();
    let mut translated: Vec<Vec<i32>> = vec![Vec::new(); base.len()];
    for (pos, &l) in base.letters.iter().enumerate().rev() {
        let k = l.unsigned_abs() as usize;
        let (a, b) = (widths[slots[k - 1]], widths[slots[k]]);
        let offset: usize = slots[..k - 1].iter().map(|&r| widths[r]).sum();
        translated[pos] = if l > 0 {
            ribbon_crossing(offset, a, b)
        } else {
            ribbon_crossing(offset, b, a)
                .iter()
                .rev()
                .map(|x| -x)
                .collect()
        };
        slots.swap(k - 1, k);
    }

    let mut letters: Vec<i32> = translated.concat();
    let mut offset = 0;
    for (w, &width) in inner.iter().zip(widths) {
        letters.extend(w.shifted(offset, total)?.letters);
        offset += width;
    }
    BraidWord::new(total, letters)
}

/// Places the braids side by side on consecutive strand blocks.
pub fn juxtapose(words: &[BraidWord]) -> Result<BraidWord> {
    let total: usize = words.iter().map(|w| w.strands).sum();
    let mut letters = Vec::new();
    let mut offset = 0;
    for w in words {
        letters.extend(w.shifted(offset, total)?.letters);
        offset += w.strands;
    }
    BraidWord::new(total, letters)
}

/// A surjection `φ: {0..d-1} ↠ labels`, stored as one label per point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionMap {
    labels: Vec<usize>,
}

impl PartitionMap {
    /// Labels are renumbered by first occurrence, so every label is hit.
    pub fn new(labels: &[usize]) -> Self {
        let mut seen: Vec<usize> = Vec::new();
        let labels = labels
            .iter()
            .map(|l| match seen.iter().position(|s| s == l) {
                Some(p) => p,
                None => {
                    seen.push(*l);
                    seen.len() - 1
                }
            })
            .collect();
        Self { labels }
    }

    /// From explicit parts given as 1-based point lists.
    pub fn from_parts(domain: usize, parts: &[Vec<usize>]) -> Result<Self> {
        let mut labels = vec![usize::MAX; domain];
        for (k, part) in parts.iter().enumerate() {
            for &p in part {
                if p == 0 || p > domain || labels[p - 1] != usize::MAX {
                    return Err(BraidError::Parse(format!("bad partition point {p}")));
                }
                labels[p - 1] = k;
            }
        }
        if labels.contains(&usize::MAX) {
            return Err(BraidError::Parse(
                "partition does not cover the domain".into(),
            ));
        }
        Ok(Self::new(&labels))
    }

    pub fn domain(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn part_count(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| m + 1)
    }
}

/// Generators of `Br_φ`: every pure generator `A_{ij}` plus the band
/// generators for pairs inside one part.
pub fn semipure_generators(phi: &PartitionMap) -> Vec<BraidWord> {
    let d = phi.domain();
    let mut out = Vec::new();
    for i in 1..=d {
        for j in i + 1..=d {
            out.push(pure_generator(i, j, d).expect("valid indices"));
        }
    }
    for i in 1..=d {
        for j in i + 1..=d {
            if phi.label(i - 1) == phi.label(j - 1) {
                out.push(band_generator(i, j, d).expect("valid indices"));
            }
        }
    }
    out
}

/// The underlying permutation maps every part of `φ` onto itself.
pub fn is_semipure(w: &BraidWord, phi: &PartitionMap) -> Result<bool> {
    if w.strands != phi.domain() {
        return Err(BraidError::StrandMismatch {
            left: w.strands,
            right: phi.domain(),
        });
    }
    let p = augmentation(w);
    Ok((0..w.strands).all(|i| phi.label(p.apply(i)) == phi.label(i)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::{gamma_s, BruteForceBound, PermGroup};

    fn w(n: usize, letters: &[i32]) -> BraidWord {
        BraidWord::new(n, letters.to_vec()).unwrap()
    }

    #[test]
    fn word_validation() {
        assert!(BraidWord::new(2, vec![2]).is_err());
        assert!(BraidWord::new(3, vec![0]).is_err());
        assert_eq!(BraidWord::new(0, vec![]), Err(BraidError::NoStrands));
        assert_eq!(BraidWord::parse(3, "1 2 -1").unwrap(), w(3, &[1, 2, -1]));
        assert!(BraidWord::parse(3, "1 x").is_err());
    }

    #[test]
    fn augmentation_examples() {
        assert_eq!(
            augmentation(&w(2, &[1])),
            Permutation::transposition(2, 0, 1)
        );
        assert!(augmentation(&w(2, &[1, 1])).is_identity());
        assert_eq!(
            augmentation(&w(3, &[1, 2, 1])),
            Permutation::transposition(3, 0, 2)
        );
        // σ₁σ₂ ↦ (12)∘(23)
        let expect = Permutation::transposition(3, 0, 1)
            .compose(&Permutation::transposition(3, 1, 2))
            .unwrap();
        assert_eq!(augmentation(&w(3, &[1, 2])), expect);
    }

    #[test]
    fn pure_and_band_generators() {
        assert_eq!(pure_generator(1, 2, 2).unwrap(), w(2, &[1, 1]));
        assert!(augmentation(&pure_generator(1, 3, 3).unwrap()).is_identity());
        assert_eq!(pure_generator(2, 3, 4).unwrap(), w(4, &[2, 2]));
        assert_eq!(pure_generator(1, 3, 3).unwrap(), w(3, &[2, 1, 1, -2]));
        assert_eq!(band_generator(1, 2, 3).unwrap(), w(3, &[1]));
        assert_eq!(
            augmentation(&band_generator(1, 3, 3).unwrap()),
            Permutation::transposition(3, 0, 2)
        );
        assert!(pure_generator(2, 2, 3).is_err());
        assert!(pure_generator(0, 2, 3).is_err());
        assert!(band_generator(1, 4, 3).is_err());
        for n in 2..=5 {
            for i in 1..=n {
                for j in i + 1..=n {
                    let band = band_generator(i, j, n).unwrap();
                    let sq = band.concat(&band).unwrap();
                    assert!(word_equal(&sq, &pure_generator(i, j, n).unwrap()).unwrap());
                }
            }
        }
    }

    #[test]
    fn word_problem_examples() {
        assert!(word_equal(&w(3, &[1, 2, 1]), &w(3, &[2, 1, 2])).unwrap());
        assert!(word_equal(&w(4, &[1, 3]), &w(4, &[3, 1])).unwrap());
        assert!(!word_equal(&w(2, &[1]), &w(2, &[-1])).unwrap());
        assert!(!word_equal(&w(3, &[1, 2]), &w(3, &[2, 1])).unwrap());
        assert!(word_equal(&w(2, &[1]), &w(3, &[1])).is_err());
        // σ₁σ₂σ₁σ₂⁻¹σ₁⁻¹σ₂⁻¹ = 1
        assert!(is_identity(&w(3, &[1, 2, 1, -2, -1, -2])));
        // Full twist is central in Br₃.
        let delta2 = w(3, &[1, 2, 1, 1, 2, 1]);
        for g in [1, 2, -1, -2] {
            let x = w(3, &[g]);
            assert!(word_equal(&delta2.concat(&x).unwrap(), &x.concat(&delta2).unwrap()).unwrap());
        }
        // Pure braid A₁₂ and A₂₃ do not commute.
        let a12 = pure_generator(1, 2, 3).unwrap();
        let a23 = pure_generator(2, 3, 3).unwrap();
        assert!(!word_equal(&a12.concat(&a23).unwrap(), &a23.concat(&a12).unwrap()).unwrap());
    }

    #[test]
    fn cabling_examples() {
        let empty = BraidWord::identity(3);
        let inner = vec![
            BraidWord::identity(2),
            BraidWord::identity(1),
            BraidWord::identity(2),
        ];
        assert!(cable(&empty, &[2, 1, 2], &inner).unwrap().is_empty());
        let s1 = w(2, &[1]);
        let ones = vec![BraidWord::identity(1); 2];
        assert_eq!(cable(&s1, &[1, 1], &ones).unwrap(), s1);
        assert!(cable(&s1, &[1], &ones).is_err());
        assert!(cable(&s1, &[2, 1], &ones).is_err());
    }

    #[test]
    fn cabling_is_compatible_with_gamma_s() {
        let base = w(3, &[1, -2, 1, 2]);
        let widths = [2, 1, 3];
        let inner = vec![w(2, &[1]), BraidWord::identity(1), w(3, &[2, -1])];
        let cabled = cable(&base, &widths, &inner).unwrap();
        let inner_perms: Vec<_> = inner.iter().map(augmentation).collect();
        assert_eq!(
            augmentation(&cabled),
            gamma_s(&augmentation(&base), &inner_perms).unwrap()
        );
    }

    #[test]
    fn cabling_respects_braid_relations() {
        let widths = [2, 1, 2];
        let ids: Vec<_> = widths.iter().map(|&k| BraidWord::identity(k)).collect();
        let lhs = cable(&w(3, &[1, 2, 1]), &widths, &ids).unwrap();
        let rhs = cable(&w(3, &[2, 1, 2]), &widths, &ids).unwrap();
        assert!(word_equal(&lhs, &rhs).unwrap());
        let trivial = cable(&w(3, &[1, -1, -2, 2]), &widths, &ids).unwrap();
        assert!(is_identity(&trivial));
        let far = [1, 2, 1, 2];
        let ids4: Vec<_> = far.iter().map(|&k| BraidWord::identity(k)).collect();
        let a = cable(&w(4, &[1, 3]), &far, &ids4).unwrap();
        let b = cable(&w(4, &[3, 1]), &far, &ids4).unwrap();
        assert!(word_equal(&a, &b).unwrap());
        // cabling σ₁ with widths (2,2) is not trivial
        let ids2 = vec![BraidWord::identity(2); 2];
        assert!(!is_identity(
            &cable(&w(2, &[1, 1]), &[2, 2], &ids2).unwrap()
        ));
    }

    #[test]
    fn semipure_examples() {
        let b = BruteForceBound::default();
        let closure_order = |gens: &[BraidWord], d: usize| {
            PermGroup::new(d, gens.iter().map(augmentation).collect())
                .unwrap()
                .order(b)
                .unwrap()
        };
        let split = PartitionMap::new(&[0, 1]);
        let gens = semipure_generators(&split);
        assert_eq!(gens, vec![w(2, &[1, 1])]);
        assert_eq!(closure_order(&gens, 2), 1);

        let whole = PartitionMap::new(&[0, 0]);
        let gens = semipure_generators(&whole);
        assert!(gens.contains(&w(2, &[1])));
        assert_eq!(closure_order(&gens, 2), 2);

        let phi = PartitionMap::from_parts(3, &[vec![1, 3], vec![2]]).unwrap();
        let gens = semipure_generators(&phi);
        assert_eq!(closure_order(&gens, 3), 2);
        for g in &gens {
            assert!(is_semipure(g, &phi).unwrap());
        }
    }

    #[test]
    fn is_semipure_examples() {
        assert!(is_semipure(&w(2, &[1]), &PartitionMap::new(&[0, 0])).unwrap());
        assert!(!is_semipure(&w(2, &[1]), &PartitionMap::new(&[0, 1])).unwrap());
        let a13 = pure_generator(1, 3, 3).unwrap();
        assert!(is_semipure(&a13, &PartitionMap::new(&[0, 1, 2])).unwrap());
        assert!(is_semipure(&a13, &PartitionMap::new(&[5, 5, 1])).unwrap());
        assert!(is_semipure(&a13, &PartitionMap::new(&[0, 0])).is_err());
    }

    #[test]
    fn partition_map_validation() {
        assert!(PartitionMap::from_parts(3, &[vec![1, 2]]).is_err());
        assert!(PartitionMap::from_parts(3, &[vec![1, 2], vec![2, 3]]).is_err());
        let phi = PartitionMap::new(&[7, 3, 7]);
        assert_eq!(phi.part_count(), 2);
        assert_eq!(phi.label(2), 0);
    }
}
