//! Brute force over a ball of the Cayley graph.
//!
//! Group elements are stored as matrices acting on coefficient vectors and
//! deduplicated by matrix, so no normal form for words is needed. These
//! routines are deliberately slow and definitional; they exist to check the
//! fast paths in [`crate::roots`] and [`crate::dominance`].

use std::collections::HashMap;



use crate::datum::CoxeterDatum;
use crate::error::{Error, Result};
use crate::roots::{key_digits, Root, RootKey, Sign, Word};
use crate::scalar::{Backend, Rational, Scalar};

/// Default cap on the number of ball elements.
pub const DEFAULT_BALL_CAP: usize = 200_000;

/// An element of the group, as a matrix on coefficient vectors (column `j`
/// is the image of `e_j`).
#[derive(Clone, Debug)]
pub struct GroupElement {
    pub matrix: Vec<Vec<Scalar>>,
    /// A shortest word for the element.
    pub word: Word,
    pub length: usize,
    parent: Option<usize>,
}

impl GroupElement {
    /// `g x` by matrix multiplication.
    pub fn apply(&self, x: &Root) -> Root {
        let n = x.dim();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = Scalar::zero(x.coeffs()[0].backend());
            for (j, c) in x.coeffs().iter().enumerate() {
                if c.is_zero_within(0.0) {
                    continue;
                }
                acc = acc + &self.matrix[i][j] * c;
            }
            out.push(acc);
        }
        Root::new(out)
    }

    /// Checks `Mᵀ B M = B` within `tol`.
    pub fn preserves_form(&self, d: &CoxeterDatum, tol: f64) -> bool {
        let n = d.rank();
        let b = d.gram();
        for i in 0..n {
            for j in 0..n {
                let mut acc = d.zero();
                for k in 0..n {
                    for l in 0..n {
                        acc = acc + &(&self.matrix[k][i] * &b[k][l]) * &self.matrix[l][j];
                    }
                }
                if !acc.approx_eq(&b[i][j], tol) {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum MatrixKey {
    Exact(Vec<Rational>),
    Rounded(Vec<i64>),
}

fn matrix_key(d: &CoxeterDatum, m: &[Vec<Scalar>]) -> MatrixKey {
    match d.backend() {
        Backend::Exact => MatrixKey::Exact(
            m.iter()
                .flatten()
                .map(|s| match s {
                    Scalar::Exact(r) => r.clone(),
                    Scalar::Approx(_) => unreachable!("approximate entry in exact datum"),
                })
                .collect(),
        ),
        Backend::Approx => {
            let scale = 10f64.powi(key_digits(d.eps()));
            MatrixKey::Rounded(m.iter().flatten().map(|s| (s.to_f64() * scale).round() as i64).collect())
        }
    }
}

/// All elements of length at most `radius`, in order of length.
#[derive(Clone, Debug)]
pub struct CayleyBall {
    pub elements: Vec<GroupElement>,
    /// Number of elements of each length `0..=radius`.
    pub layer_sizes: Vec<usize>,
    pub radius: usize,
}

/// Breadth-first enumeration of the ball of the given radius. Each new
/// element is `r_a g` for an element `g` of the previous layer.
pub fn cayley_ball(d: &CoxeterDatum, radius: usize) -> Result<CayleyBall> {
    cayley_ball_with_cap(d, radius, DEFAULT_BALL_CAP)
}

pub fn cayley_ball_with_cap(d: &CoxeterDatum, radius: usize, cap: usize) -> Result<CayleyBall> {
    let n = d.rank();
    let identity: Vec<Vec<Scalar>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { d.one() } else { d.zero() }).collect())
        .collect();
    let mut seen: HashMap<MatrixKey, usize> = HashMap::new();
    seen.insert(matrix_key(d, &identity), 0);
    let mut elements = vec![GroupElement { matrix: identity, word: Word::empty(), length: 0, parent: None }];
    let mut layer_sizes = vec![1];
    let mut layer_start = 0;
    let two = Scalar::from_int(2, d.backend());
    for length in 1..=radius {
        let layer_end = elements.len();
        for g in layer_start..layer_end {
            for a in 0..n {
                // row a of ρ_a M: M_aj − 2 Σ_k B_ka M_kj
                let mut m = elements[g].matrix.clone();
                for j in 0..n {
                    let mut acc = d.zero();
                    for k in 0..n {
                        let bk = &d.gram()[k][a];
                        if bk.is_zero_within(0.0) {
                            continue;
                        }
                        acc = acc + bk * &elements[g].matrix[k][j];
                    }
                    m[a][j] = &m[a][j] - &(&two * &acc);
                }
                let key = matrix_key(d, &m);
                if seen.contains_key(&key) {
                    continue;
                }
                seen.insert(key, elements.len());
                let mut letters = vec![a];
                letters.extend_from_slice(&elements[g].word.letters);
                elements.push(GroupElement {
                    matrix: m,
                    word: Word::new(letters, true),
                    length,
                    parent: Some(g),
                });
                if elements.len() > cap {
                    return Err(Error::Limit(format!("Cayley ball exceeds {cap} elements")));
                }
            }
        }
        layer_sizes.push(elements.len() - layer_end);
        layer_start = layer_end;
    }
    Ok(CayleyBall { elements, layer_sizes, radius })
}

impl CayleyBall {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Cumulative element counts by radius.
    pub fn cumulative_sizes(&self) -> Vec<usize> {
        self.layer_sizes
            .iter()
            .scan(0, |acc, &s| {
                *acc += s;
                Some(*acc)
            })
            .collect()
    }

    /// For each element `g` (in ball order), whether `g x` is negative.
    ///
    /// Images are propagated along the BFS tree: `(r_a g) x = r_a (g x)`.
    pub fn negative_mask(&self, d: &CoxeterDatum, x: &Root) -> Result<Vec<bool>> {
        if let Some(mask) = self.negative_mask_int(d, x) {
            return Ok(mask);
        }
        let mut images: Vec<Root> = Vec::with_capacity(self.elements.len());
        let mut mask = Vec::with_capacity(self.elements.len());
        for g in &self.elements {
            let image = match g.parent {
                None => x.clone(),
                Some(p) => crate::roots::reflect_simple(d, g.word.letters[0], &images[p])?,
            };
            mask.push(image.sign(d)? == Sign::Negative);
            images.push(image);
        }
        Ok(mask)
    }

    /// Same as `negative_mask` in machine integers; `None` when the datum or
    /// root is not integral or an intermediate value overflows.
    fn negative_mask_int(&self, d: &CoxeterDatum, x: &Root) -> Option<Vec<bool>> {
        let gram2 = doubled_gram_int(d)?;
        let x = root_int(x)?;
        let mut images: Vec<Vec<i64>> = Vec::with_capacity(self.elements.len());
        let mut mask = Vec::with_capacity(self.elements.len());
        for g in &self.elements {
            let image = match g.parent {
                None => x.clone(),
                Some(p) => {
                    let a = g.word.letters[0];
                    let src = &images[p];
                    let mut t: i64 = 0;
                    for (c, b) in src.iter().zip(&gram2) {
                        t = t.checked_add(c.checked_mul(b[a])?)?;
                    }
                    let mut out = src.clone();
                    out[a] = out[a].checked_sub(t)?;
                    out
                }
            };
            mask.push(int_sign(&image)? == Sign::Negative);
            images.push(image);
        }
        Some(mask)
    }
}

/// `2B` when all its entries are integers (exact backend only). Root
/// coefficients then stay integral under reflection.
fn doubled_gram_int(d: &CoxeterDatum) -> Option<Vec<Vec<i64>>> {
    d.gram()
        .iter()
        .map(|row| {
            row.iter()
                .map(|s| match s {
                    Scalar::Exact(r) => {
                        (r * &Rational::from_integer(2)).to_i64()
                    }
                    Scalar::Approx(_) => None,
                })
                .collect()
        })
        .collect()
}

fn scalar_int(s: &Scalar) -> Option<i64> {
    match s {
        Scalar::Exact(r) => r.to_i64(),
        _ => None,
    }
}

fn root_int(x: &Root) -> Option<Vec<i64>> {
    x.coeffs().iter().map(scalar_int).collect()
}

fn int_sign(v: &[i64]) -> Option<Sign> {
    let pos = v.iter().any(|&c| c > 0);
    let neg = v.iter().any(|&c| c < 0);
    match (pos, neg) {
        (true, false) => Some(Sign::Positive),
        (false, true) => Some(Sign::Negative),
        _ => None,
    }
}

/// Sign of `M x` in machine integers, if everything is integral and fits.
fn int_image_sign(m: &[Vec<i64>], x: &[i64]) -> Option<Sign> {
    let mut out = Vec::with_capacity(x.len());
    for row in m {
        let mut acc: i64 = 0;
        for (a, b) in row.iter().zip(x) {
            acc = acc.checked_add(a.checked_mul(*b)?)?;
        }
        out.push(acc);
    }
    int_sign(&out)
}

/// Outcome of the one-sided dominance check.
#[derive(Clone, Debug)]
pub enum Verdict {
    /// No ball element separates the two roots.
    Consistent,
    /// `witness` sends `x` negative and keeps `y` positive.
    Refuted { witness: GroupElement },
}

impl Verdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }
}

/// Checks whether any ball element sends `x` negative while keeping `y`
/// positive. Refutation disproves `x dom y`; consistency does not prove it.
pub fn dominance_oracle(d: &CoxeterDatum, ball: &CayleyBall, x: &Root, y: &Root) -> Result<Verdict> {
    let mx = ball.negative_mask(d, x)?;
    let my = ball.negative_mask(d, y)?;
    Ok(verdict_from_masks(ball, &mx, &my))
}

pub fn verdict_from_masks(ball: &CayleyBall, mx: &[bool], my: &[bool]) -> Verdict {
    match (0..ball.len()).find(|&g| mx[g] && !my[g]) {
        Some(g) => Verdict::Refuted { witness: ball.elements[g].clone() },
        None => Verdict::Consistent,
    }
}

/// Least length of a ball element sending `x` negative.
pub fn depth_oracle(d: &CoxeterDatum, ball: &CayleyBall, x: &Root) -> Result<Option<usize>> {
    let mask = ball.negative_mask(d, x)?;
    Ok(mask.iter().position(|&neg| neg).map(|g| ball.elements[g].length))
}

/// `N(g)`: the roots among `candidates` that `g` sends negative, using the
/// matrix of `g`.
pub fn nset_oracle(d: &CoxeterDatum, g: &GroupElement, candidates: &[Root]) -> Result<Vec<Root>> {
    let int_matrix: Option<Vec<Vec<i64>>> =
        g.matrix.iter().map(|row| row.iter().map(scalar_int).collect()).collect();
    let mut out = Vec::new();
    for x in candidates {
        let fast = int_matrix.as_ref().zip(root_int(x)).and_then(|(m, xi)| int_image_sign(m, &xi));
        let sign = match fast {
            Some(s) => s,
            None => g.apply(x).sign(d)?,
        };
        if sign == Sign::Negative {
            out.push(x.clone());
        }
    }
    Ok(out)
}

/// Cached negative masks for many roots against one ball.
pub struct MaskCache<'a> {
    d: &'a CoxeterDatum,
    ball: &'a CayleyBall,
    masks: HashMap<RootKey, Vec<bool>>,
}

impl<'a> MaskCache<'a> {
    pub fn new(d: &'a CoxeterDatum, ball: &'a CayleyBall) -> Self {
        MaskCache { d, ball, masks: HashMap::new() }
    }

    /// Precomputes masks for `roots` in parallel.
    pub fn warm(&mut self, roots: &[Root]) -> Result<()> {
        use rayon::prelude::*;
        let computed: Vec<(RootKey, Result<Vec<bool>>)> = roots
            .par_iter()
            .map(|x| (x.key(self.d), self.ball.negative_mask(self.d, x)))
            .collect();
        for (k, m) in computed {
            self.masks.insert(k, m?);
        }
        Ok(())
    }

    pub fn mask(&mut self, x: &Root) -> Result<&[bool]> {
        let key = x.key(self.d);
        if !self.masks.contains_key(&key) {
            let m = self.ball.negative_mask(self.d, x)?;
            self.masks.insert(key.clone(), m);
        }
        Ok(&self.masks[&key])
    }

    pub fn verdict(&mut self, x: &Root, y: &Root) -> Result<Verdict> {
        let ball = self.ball;
        let mx = self.mask(x)?.to_vec();
        let my = self.mask(y)?;
        Ok(verdict_from_masks(ball, &mx, my))
    }

    pub fn depth(&mut self, x: &Root) -> Result<Option<usize>> {
        let ball = self.ball;
        Ok(self.mask(x)?.iter().position(|&n| n).map(|g| ball.elements[g].length))
    }
}

/// Fast paths compared with the oracle over one ball.
#[derive(Clone, Debug, Default, serde::Serialize)]
pub struct AgreementReport {
    pub radius: usize,
    pub ball_size: usize,
    /// Roots up to this depth were compared pairwise.
    pub root_depth: usize,
    pub roots: usize,
    pub pairs: usize,
    /// Pairs declared dominant but refuted by the ball.
    pub false_positives: Vec<String>,
    /// Pairs declared non-dominant with no refuting element in the ball.
    pub missing_witnesses: Vec<String>,
    /// Longest shortest witness over all refuted pairs.
    pub max_witness_length: usize,
    /// Refuted pairs whose shortest witness is longer than `depth(x) + depth(y)`.
    pub witnesses_beyond_depth_sum: usize,
    pub depth_checked: usize,
    pub depth_mismatches: Vec<String>,
    pub nset_checked: usize,
    pub nset_mismatches: Vec<String>,
}

impl AgreementReport {
    pub fn passed(&self) -> bool {
        self.false_positives.is_empty()
            && self.missing_witnesses.is_empty()
            && self.depth_mismatches.is_empty()
            && self.nset_mismatches.is_empty()
    }
}

fn pack(mask: &[bool]) -> Vec<u64> {
    let mut out = vec![0u64; mask.len().div_ceil(64)];
    for (i, &b) in mask.iter().enumerate() {
        if b {
            out[i / 64] |= 1 << (i % 64);
        }
    }
    out
}

/// First element index sending `x` negative and `y` positive.
fn first_separating(mx: &[u64], my: &[u64]) -> Option<usize> {
    mx.iter()
        .zip(my)
        .enumerate()
        .find_map(|(i, (a, b))| {
            let w = a & !b;
            (w != 0).then(|| i * 64 + w.trailing_zeros() as usize)
        })
}

/// Compares dominance and depth on all positive roots of depth at most
/// `root_depth`, and inversion sets on all elements of length at most
/// `nset_length`.
pub fn agreement(
    d: &CoxeterDatum,
    ball: &CayleyBall,
    root_depth: usize,
    nset_length: usize,
) -> Result<AgreementReport> {
    use crate::dominance::dominates;
    use crate::roots::{depth, enumerate, inversion_set};
    use rayon::prelude::*;

    let roots: Vec<Root> = enumerate(d, root_depth)?.iter().cloned().collect();
    let depths: Vec<usize> = roots.iter().map(|x| depth(d, x)).collect::<Result<_>>()?;
    let masks: Vec<Vec<u64>> = roots
        .par_iter()
        .map(|x| ball.negative_mask(d, x).map(|m| pack(&m)))
        .collect::<Result<_>>()?;

    struct PairOutcome {
        false_positive: Option<String>,
        missing: Option<String>,
        witness_length: Option<usize>,
        beyond: bool,
    }
    let outcomes: Vec<PairOutcome> = (0..roots.len() * roots.len())
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / roots.len(), k % roots.len());
            let (x, y) = (&roots[i], &roots[j]);
            let fast = dominates(d, x, y)?;
            let sep = first_separating(&masks[i], &masks[j]);
            let witness_length = sep.map(|g| ball.elements[g].length);
            Ok(PairOutcome {
                false_positive: (fast && sep.is_some()).then(|| {
                    let w = &ball.elements[sep.unwrap()].word;
                    format!("{x} dom {y} refuted by {}", w.display(d))
                }),
                missing: (!fast && sep.is_none()).then(|| format!("{x} vs {y}")),
                witness_length,
                beyond: witness_length.is_some_and(|l| l > depths[i] + depths[j]),
            })
        })
        .collect::<Result<_>>()?;

    let mut report = AgreementReport {
        radius: ball.radius,
        ball_size: ball.len(),
        root_depth,
        roots: roots.len(),
        pairs: outcomes.len(),
        ..AgreementReport::default()
    };
    for o in outcomes {
        report.false_positives.extend(o.false_positive);
        report.missing_witnesses.extend(o.missing);
        report.max_witness_length = report.max_witness_length.max(o.witness_length.unwrap_or(0));
        report.witnesses_beyond_depth_sum += o.beyond as usize;
    }

    for (x, (&dx, m)) in roots.iter().zip(depths.iter().zip(&masks)) {
        if dx > ball.radius {
            continue;
        }
        report.depth_checked += 1;
        let found = m
            .iter()
            .enumerate()
            .find_map(|(i, w)| (*w != 0).then(|| i * 64 + w.trailing_zeros() as usize))
            .map(|g| ball.elements[g].length);
        if found != Some(dx) {
            report.depth_mismatches.push(format!("{x}: depth {dx}, oracle {found:?}"));
        }
    }

    let max_len = nset_length.min(ball.radius);
    let candidates: Vec<Root> = enumerate(d, max_len.max(1))?.iter().cloned().collect();
    let elements: Vec<&GroupElement> = ball.elements.iter().filter(|g| g.length <= max_len).collect();
    report.nset_checked = elements.len();
    let mismatches: Vec<Option<String>> = elements
        .par_iter()
        .map(|g| {
            let direct: Vec<RootKey> = nset_oracle(d, g, &candidates)?.iter().map(|r| r.key(d)).collect();
            let mut direct_sorted = direct.clone();
            direct_sorted.sort();
            let mut fast: Vec<RootKey> =
                inversion_set(d, &g.word.inverse())?.iter().map(|r| r.key(d)).collect();
            fast.sort();
            Ok((direct_sorted != fast || direct.len() != g.length)
                .then(|| format!("N({}) has {} roots by action", g.word.display(d), direct.len())))
        })
        .collect::<Result<_>>()?;
    report.nset_mismatches = mismatches.into_iter().flatten().collect();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::systems;
    use crate::roots::{depth, enumerate, inversion_set};

    fn r(d: &CoxeterDatum, c: &[i64]) -> Root {
        Root::from_ints(d, c)
    }

    #[test]
    fn ball_growth() {
        let d = systems::tilde_a1();
        assert_eq!(cayley_ball(&d, 0).unwrap().len(), 1);
        let ball = cayley_ball(&d, 5).unwrap();
        assert_eq!(ball.cumulative_sizes(), vec![1, 3, 5, 7, 9, 11]);
        let a2 = cayley_ball(&systems::a(2), 10).unwrap();
        assert_eq!(a2.len(), 6);
        assert_eq!(a2.layer_sizes, vec![1, 2, 2, 1, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(cayley_ball(&systems::a(3), 10).unwrap().len(), 24);
        assert!(matches!(cayley_ball_with_cap(&systems::universal(3), 6, 50), Err(Error::Limit(_))));
    }

    #[test]
    fn matrices_preserve_form() {
        for d in [systems::tilde_a2(), systems::hyperbolic_rank2(3, 2), systems::b(3)] {
            let ball = cayley_ball(&d, 4).unwrap();
            for g in &ball.elements {
                assert!(g.preserves_form(&d, 1e-9));
            }
        }
    }

    #[test]
    fn witness_words_match_matrices() {
        let d = systems::universal(3);
        let ball = cayley_ball(&d, 4).unwrap();
        let x = r(&d, &[1, 2, 3]);
        for g in &ball.elements {
            assert_eq!(g.word.len(), g.length);
            let via_word = crate::roots::apply_word(&d, &g.word, &x).unwrap();
            assert_eq!(g.apply(&x), via_word);
        }
    }

    #[test]
    fn dominance_verdicts() {
        let d = systems::tilde_a1();
        let ball = cayley_ball(&d, 12).unwrap();
        let x = r(&d, &[3, 2]);
        assert!(!dominance_oracle(&d, &ball, &x, &x).unwrap().is_refuted());
        assert!(!dominance_oracle(&d, &ball, &x, &r(&d, &[2, 1])).unwrap().is_refuted());
        match dominance_oracle(&d, &ball, &r(&d, &[1, 2]), &r(&d, &[2, 1])).unwrap() {
            Verdict::Refuted { witness } => {
                assert!(witness.length <= 3);
                assert_eq!(witness.apply(&r(&d, &[1, 2])).sign(&d).unwrap(), Sign::Negative);
                assert_eq!(witness.apply(&r(&d, &[2, 1])).sign(&d).unwrap(), Sign::Positive);
            }
            Verdict::Consistent => panic!("expected refutation"),
        }
    }

    #[test]
    fn depth_oracle_examples() {
        let d = systems::tilde_a1();
        let ball = cayley_ball(&d, 6).unwrap();
        assert_eq!(depth_oracle(&d, &ball, &r(&d, &[0, 1])).unwrap(), Some(1));
        assert_eq!(depth_oracle(&d, &ball, &r(&d, &[3, 2])).unwrap(), Some(3));
        assert_eq!(depth_oracle(&d, &ball, &r(&d, &[9, 8])).unwrap(), None);
        for x in enumerate(&d, 6).unwrap().iter() {
            assert_eq!(depth_oracle(&d, &ball, x).unwrap(), Some(depth(&d, x).unwrap()));
        }
    }

    #[test]
    fn nset_examples() {
        let d = systems::tilde_a1();
        let roots: Vec<Root> = enumerate(&d, 6).unwrap().iter().cloned().collect();
        let ball = cayley_ball(&d, 3).unwrap();
        assert!(nset_oracle(&d, &ball.elements[0], &roots).unwrap().is_empty());
        let rb_ra = ball.elements.iter().find(|g| g.word.letters == vec![1, 0]).unwrap();
        assert_eq!(nset_oracle(&d, rb_ra, &roots).unwrap(), vec![r(&d, &[1, 0]), r(&d, &[2, 1])]);
        for a in 0..2 {
            let g = ball.elements.iter().find(|g| g.word.letters == vec![a]).unwrap();
            assert_eq!(nset_oracle(&d, g, &roots).unwrap(), vec![Root::simple(&d, a)]);
        }
    }

    #[test]
    fn nset_matches_inversion_sets() {
        for d in [systems::tilde_a1(), systems::universal(3), systems::tilde_a2()] {
            let roots: Vec<Root> = enumerate(&d, 8).unwrap().iter().cloned().collect();
            let ball = cayley_ball(&d, 5).unwrap();
            for g in &ball.elements {
                let mut oracle: Vec<RootKey> =
                    nset_oracle(&d, g, &roots).unwrap().iter().map(|x| x.key(&d)).collect();
                // N(g) = N((g⁻¹)⁻¹): inversion_set of the word of g⁻¹
                let mut fast: Vec<RootKey> = inversion_set(&d, &g.word.inverse())
                    .unwrap()
                    .iter()
                    .map(|x| x.key(&d))
                    .collect();
                oracle.sort();
                fast.sort();
                assert_eq!(oracle, fast);
                assert_eq!(fast.len(), g.length);
            }
        }
    }

    #[test]
    fn subset_criterion() {
        // ℓ(w v⁻¹) + ℓ(v) = ℓ(w)  iff  N(v) ⊆ N(w)
        for d in [systems::tilde_a2(), systems::universal(3)] {
            let ball = cayley_ball(&d, 6).unwrap();
            let roots: Vec<Root> = enumerate(&d, 7).unwrap().iter().cloned().collect();
            let mut index = HashMap::new();
            for (i, g) in ball.elements.iter().enumerate() {
                index.insert(matrix_key(&d, &g.matrix), i);
            }
            let nsets: Vec<std::collections::HashSet<RootKey>> = ball
                .elements
                .iter()
                .map(|g| nset_oracle(&d, g, &roots).unwrap().iter().map(|x| x.key(&d)).collect())
                .collect();
            let sample: Vec<usize> = (0..ball.len()).step_by(7.max(ball.len() / 60)).collect();
            for &w in &sample {
                for &v in &sample {
                    let (gw, gv) = (&ball.elements[w], &ball.elements[v]);
                    // w v⁻¹ as a word: word(w) followed by word(v) reversed
                    let mut letters = gw.word.letters.clone();
                    letters.extend(gv.word.letters.iter().rev());
                    let m = word_matrix(&d, &letters);
                    let len_wv = index.get(&matrix_key(&d, &m)).map(|&i| ball.elements[i].length);
                    let Some(len_wv) = len_wv else { continue };
                    let lhs = len_wv + gv.length == gw.length;
                    let rhs = nsets[v].is_subset(&nsets[w]);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    fn word_matrix(d: &CoxeterDatum, letters: &[usize]) -> Vec<Vec<Scalar>> {
        let n = d.rank();
        let cols: Vec<Root> = (0..n)
            .map(|j| crate::roots::apply_word(d, &Word::new(letters.to_vec(), false), &Root::simple(d, j)).unwrap())
            .collect();
        (0..n).map(|i| (0..n).map(|j| cols[j].coeffs()[i].clone()).collect()).collect()
    }

    #[test]
    fn agreement_small_systems() {
        for (d, radius) in [(systems::tilde_a1(), 10), (systems::a(3), 8), (systems::universal(3), 6)] {
            let ball = cayley_ball(&d, radius).unwrap();
            let rep = agreement(&d, &ball, 3, 5).unwrap();
            assert!(rep.passed(), "{rep:?}");
            assert!(rep.pairs > 0 && rep.depth_checked > 0 && rep.nset_checked > 1);
        }
    }

    #[test]
    fn packed_masks() {
        let a = pack(&[false, true, false, true]);
        let b = pack(&[false, true, false, false]);
        assert_eq!(first_separating(&a, &b), Some(3));
        assert_eq!(first_separating(&b, &a), None);
    }

    #[test]
    fn integer_and_exact_masks_agree() {
        let d = systems::tilde_a2();
        assert!(doubled_gram_int(&d).is_some());
        assert!(doubled_gram_int(&systems::hyperbolic_rank2(3, 2)).is_some());
        assert!(doubled_gram_int(&systems::hyperbolic_rank2(4, 3)).is_none());
        let ball = cayley_ball(&d, 6).unwrap();
        for x in enumerate(&d, 4).unwrap().iter() {
            let fast = ball.negative_mask_int(&d, x).unwrap();
            let mut images = vec![];
            let mut slow = vec![];
            for g in &ball.elements {
                let image = match g.parent {
                    None => x.clone(),
                    Some(p) => crate::roots::reflect_simple(&d, g.word.letters[0], &images[p]).unwrap(),
                };
                slow.push(image.sign(&d).unwrap() == Sign::Negative);
                images.push(image);
            }
            assert_eq!(fast, slow);
        }
    }
}
