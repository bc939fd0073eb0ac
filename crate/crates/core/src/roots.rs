//! Roots, the reflection action on them, depth, descent words, inversion
//! sets and the layered enumeration of positive roots by depth.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;



use crate::datum::CoxeterDatum;
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar, ScalarClass};

/// Upper bound on descent steps before depth gives up.
pub const DEFAULT_DEPTH_CAP: usize = 10_000;
/// Upper bound on the size of a single enumeration layer.
pub const DEFAULT_LAYER_CAP: usize = 100_000;

/// A vector in the span of the simple roots, stored by its coefficients.
///
/// Nothing about the type guarantees the vector is a root; operations that
/// need one check it. Depth is memoised on first use.
#[derive(Clone, Debug)]
pub struct Root {
    coeffs: Vec<Scalar>,
    depth: OnceLock<usize>,
}

impl PartialEq for Root {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

/// Hashable identity of a root: exact coefficients, or coefficients rounded
/// to a fixed number of decimal digits in approximate mode.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootKey {
    Exact(Vec<Rational>),
    Rounded(Vec<i64>),
}

/// Decimal digits kept by the rounded key for tolerance `eps`.
pub fn key_digits(eps: f64) -> i32 {
    if eps <= 0.0 {
        return 12;
    }
    ((-eps.log10()).ceil() as i32 - 2).max(0)
}

impl Root {
    pub fn new(coeffs: Vec<Scalar>) -> Self {
        Root { coeffs, depth: OnceLock::new() }
    }

    /// The simple root `e_a`.
    pub fn simple(d: &CoxeterDatum, a: usize) -> Self {
        let mut coeffs = vec![d.zero(); d.rank()];
        coeffs[a] = d.one();
        let root = Root::new(coeffs);
        let _ = root.depth.set(1);
        root
    }

    pub fn from_ints(d: &CoxeterDatum, coeffs: &[i64]) -> Self {
        Root::new(coeffs.iter().map(|&c| Scalar::from_int(c, d.backend())).collect())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn key(&self, d: &CoxeterDatum) -> RootKey {
        match d.backend() {
            crate::scalar::Backend::Exact => RootKey::Exact(
                self.coeffs
                    .iter()
                    .map(|c| match c {
                        Scalar::Exact(r) => r.clone(),
                        Scalar::Approx(_) => unreachable!("approximate coefficient in exact datum"),
                    })
                    .collect(),
            ),
            crate::scalar::Backend::Approx => {
                let scale = 10f64.powi(key_digits(d.eps()));
                RootKey::Rounded(
                    self.coeffs.iter().map(|c| (c.to_f64() * scale).round() as i64).collect(),
                )
            }
        }
    }

    /// Indices with a nonzero coefficient.
    pub fn support(&self, eps: f64) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&i| !self.coeffs[i].is_zero_within(eps)).collect()
    }

    /// The generator index if this is a simple root.
    pub fn as_simple(&self, d: &CoxeterDatum) -> Option<usize> {
        match self.support(d.eps()).as_slice() {
            &[a] if self.coeffs[a].approx_eq(&d.one(), d.eps()) => Some(a),
            _ => None,
        }
    }

    pub fn scale(&self, s: &Scalar) -> Root {
        Root::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Root) -> Root {
        Root::new(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect())
    }

    /// Sign of a genuine root; mixed-sign coefficient vectors are rejected.
    pub fn sign(&self, d: &CoxeterDatum) -> Result<Sign> {
        let eps = d.eps();
        let mut pos = false;
        let mut neg = false;
        for c in &self.coeffs {
            match c.sign_within(eps) {
                std::cmp::Ordering::Greater => pos = true,
                std::cmp::Ordering::Less => neg = true,
                std::cmp::Ordering::Equal => {}
            }
        }
        match (pos, neg) {
            (true, false) => Ok(Sign::Positive),
            (false, true) => Ok(Sign::Negative),
            (true, true) => Err(Error::NotARoot(format!("mixed signs in {self}"))),
            (false, false) => Err(Error::NotARoot("zero vector".into())),
        }
    }

    /// The positive one of `±self`.
    pub fn positive_part(&self, d: &CoxeterDatum) -> Result<Root> {
        Ok(match self.sign(d)? {
            Sign::Positive => self.clone(),
            Sign::Negative => -self,
        })
    }

    /// Coefficients formatted as a comma-separated list.
    pub fn display_coeffs(&self) -> String {
        self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }

    /// Parses comma-separated coefficients ("3/2,1") in label order.
    pub fn parse(d: &CoxeterDatum, text: &str) -> Result<Root> {
        let coeffs = text
            .split(',')
            .map(|s| Scalar::parse(s, d.backend()))
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() != d.rank() {
            return Err(Error::Dimension { expected: d.rank(), got: coeffs.len() });
        }
        Ok(Root::new(coeffs))
    }
}

impl std::ops::Neg for &Root {
    type Output = Root;
    fn neg(self) -> Root {
        Root::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl std::ops::Neg for Root {
    type Output = Root;
    fn neg(self) -> Root {
        -&self
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.display_coeffs())
    }
}

/// A word in the simple reflections, `r_{letters[0]} r_{letters[1]} ⋯`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word {
    pub letters: Vec<usize>,
    pub reduced: bool,
}

impl Word {
    pub fn new(letters: Vec<usize>, reduced: bool) -> Self {
        Word { letters, reduced }
    }

    pub fn empty() -> Self {
        Word { letters: Vec::new(), reduced: true }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The word of the inverse element.
    pub fn inverse(&self) -> Word {
        let mut letters = self.letters.clone();
        letters.reverse();
        Word { letters, reduced: self.reduced }
    }

    pub fn display(&self, d: &CoxeterDatum) -> String {
        if self.letters.is_empty() {
            return "1".into();
        }
        self.letters
            .iter()
            .map(|&a| format!("r_{}", d.labels()[a]))
            .collect::<Vec<_>>()
            .join("·")
    }
}

fn check_dim(d: &CoxeterDatum, x: &Root) -> Result<()> {
    if x.dim() == d.rank() {
        Ok(())
    } else {
        Err(Error::Dimension { expected: d.rank(), got: x.dim() })
    }
}

/// `(x, e_a)`.
pub fn inner_simple(d: &CoxeterDatum, x: &Root, a: usize) -> Scalar {
    let gram = d.gram();
    let mut acc = d.zero();
    for (i, c) in x.coeffs.iter().enumerate() {
        let g = &gram[i][a];
        if c.is_zero_within(0.0) || g.is_zero_within(0.0) {
            continue;
        }
        acc = acc + c * g;
    }
    acc
}

/// The bilinear form `xᵀ B y`.
pub fn inner(d: &CoxeterDatum, x: &Root, y: &Root) -> Result<Scalar> {
    check_dim(d, x)?;
    check_dim(d, y)?;
    let mut acc = d.zero();
    for (j, c) in y.coeffs.iter().enumerate() {
        if c.is_zero_within(0.0) {
            continue;
        }
        acc = acc + inner_simple(d, x, j) * c;
    }
    Ok(acc)
}

fn reflect_simple_unchecked(d: &CoxeterDatum, a: usize, x: &Root, ip: &Scalar) -> Root {
    let mut coeffs = x.coeffs.clone();
    let two = Scalar::from_int(2, d.backend());
    coeffs[a] = &coeffs[a] - &(&two * ip);
    Root::new(coeffs)
}

/// `r_a x = x − 2(x, e_a) e_a`.
pub fn reflect_simple(d: &CoxeterDatum, a: usize, x: &Root) -> Result<Root> {
    d.check_index(a)?;
    check_dim(d, x)?;
    let ip = inner_simple(d, x, a);
    Ok(reflect_simple_unchecked(d, a, x, &ip))
}

/// Whether `(x, x) = 1` within tolerance.
pub fn is_unit(d: &CoxeterDatum, x: &Root) -> Result<bool> {
    let n = inner(d, x, x)?;
    Ok(n.approx_eq(&d.one(), d.eps().max(0.0) * 10.0))
}

/// `r_t x = x − 2(x, t) t` for a unit vector `t`.
pub fn reflect_root(d: &CoxeterDatum, t: &Root, x: &Root) -> Result<Root> {
    let norm = inner(d, t, t)?;
    if !norm.approx_eq(&d.one(), d.eps() * 10.0) {
        return Err(Error::NotUnit(norm.to_string()));
    }
    let ip = inner(d, x, t)?;
    let two_ip = &Scalar::from_int(2, d.backend()) * &ip;
    Ok(Root::new(
        x.coeffs.iter().zip(&t.coeffs).map(|(xc, tc)| xc - &(&two_ip * tc)).collect(),
    ))
}

/// Applies `w = r_{a_1} ⋯ r_{a_l}` to `x` (rightmost letter first).
pub fn apply_word(d: &CoxeterDatum, w: &Word, x: &Root) -> Result<Root> {
    let mut y = x.clone();
    for &a in w.letters.iter().rev() {
        y = reflect_simple(d, a, &y)?;
    }
    Ok(y)
}

pub fn is_positive(d: &CoxeterDatum, x: &Root) -> Result<bool> {
    Ok(x.sign(d)? == Sign::Positive)
}

/// Greedy descent of a positive root to a simple root.
#[derive(Clone, Debug, PartialEq)]
pub struct Descent {
    /// Generators applied, in order: `x_{k} = r_{letters[k-1]} x_{k-1}`.
    pub letters: Vec<usize>,
    /// The simple root reached.
    pub simple: usize,
}

fn check_positive_root(d: &CoxeterDatum, x: &Root) -> Result<()> {
    check_dim(d, x)?;
    if x.sign(d)? != Sign::Positive {
        return Err(Error::NotARoot(format!("{x} is not positive")));
    }
    if !is_unit(d, x)? {
        return Err(Error::NotARoot(format!("{x} does not have unit norm")));
    }
    Ok(())
}

/// Descends `x` by always reflecting in the least generator with a positive
/// inner product; each step lowers depth by exactly one.
pub fn descend(d: &CoxeterDatum, x: &Root) -> Result<Descent> {
    descend_with_cap(d, x, DEFAULT_DEPTH_CAP)
}

pub fn descend_with_cap(d: &CoxeterDatum, x: &Root, cap: usize) -> Result<Descent> {
    check_positive_root(d, x)?;
    let mut letters = Vec::new();
    let mut current = x.clone();
    loop {
        if let Some(a) = current.as_simple(d) {
            let _ = x.depth.set(letters.len() + 1);
            return Ok(Descent { letters, simple: a });
        }
        if letters.len() >= cap {
            return Err(Error::Limit(format!("descent of {x} exceeded {cap} steps")));
        }
        let step = (0..d.rank()).find_map(|a| {
            let ip = inner_simple(d, &current, a);
            d.classify(&ip).is_positive().then_some((a, ip))
        });
        let Some((a, ip)) = step else {
            return Err(Error::NotARoot(format!("{current} has no descent but is not simple")));
        };
        current = reflect_simple_unchecked(d, a, &current, &ip);
        if current.sign(d)? != Sign::Positive {
            return Err(Error::NotARoot(format!("descent of {x} left the positive cone")));
        }
        letters.push(a);
    }
}

/// Depth: the least length of a group element sending `x` negative.
pub fn depth(d: &CoxeterDatum, x: &Root) -> Result<usize> {
    if let Some(&k) = x.depth.get() {
        return Ok(k);
    }
    Ok(descend(d, x)?.letters.len() + 1)
}

/// A word `w` of length `depth(x) − 1` and the simple root `e_a` with
/// `w⁻¹ x = e_a`.
pub fn minimal_word(d: &CoxeterDatum, x: &Root) -> Result<(Word, usize)> {
    let descent = descend(d, x)?;
    Ok((Word::new(descent.letters, true), descent.simple))
}

/// Every reduced word of every element of minimal length taking `x` to a
/// simple root, found by following all depth-lowering branches.
///
/// Returns the words together with the simple root each one ends at.
pub fn all_minimal_words(d: &CoxeterDatum, x: &Root, cap: usize) -> Result<Vec<(Word, usize)>> {
    check_positive_root(d, x)?;
    let mut out = Vec::new();
    let mut stack = vec![(x.clone(), Vec::new())];
    while let Some((current, letters)) = stack.pop() {
        if let Some(a) = current.as_simple(d) {
            out.push((Word::new(letters, true), a));
            if out.len() > cap {
                return Err(Error::Limit(format!("more than {cap} descent branches for {x}")));
            }
            continue;
        }
        let mut any = false;
        for a in (0..d.rank()).rev() {
            let ip = inner_simple(d, &current, a);
            if d.classify(&ip).is_positive() {
                any = true;
                let mut next_letters = letters.clone();
                next_letters.push(a);
                stack.push((reflect_simple_unchecked(d, a, &current, &ip), next_letters));
            }
        }
        if !any {
            return Err(Error::NotARoot(format!("{current} has no descent but is not simple")));
        }
    }
    out.sort_by(|p, q| p.0.letters.cmp(&q.0.letters));
    Ok(out)
}

/// For a reduced word `w = r_{a_1} ⋯ r_{a_l}`, the set
/// `N(w⁻¹) = { r_{a_1} ⋯ r_{a_{i−1}} e_{a_i} }`, in order of `i`.
pub fn inversion_set(d: &CoxeterDatum, w: &Word) -> Result<Vec<Root>> {
    // Columns of the running product r_{a_1} ⋯ r_{a_{i−1}}.
    let rank = d.rank();
    let mut cols: Vec<Root> = (0..rank).map(|j| Root::simple(d, j)).collect();
    let two = Scalar::from_int(2, d.backend());
    let mut out: Vec<Root> = Vec::with_capacity(w.len());
    let mut seen = HashSet::new();
    for &a in &w.letters {
        d.check_index(a)?;
        let root = cols[a].clone();
        if root.sign(d)? != Sign::Positive || !seen.insert(root.key(d)) {
            return Err(Error::NotReduced(w.display(d)));
        }
        for j in (0..rank).filter(|&j| j != a) {
            let g = &d.gram()[a][j];
            if g.is_zero_within(0.0) {
                continue;
            }
            let k = &two * g;
            let col = Root::new(cols[j].coeffs.iter().zip(&root.coeffs).map(|(c, r)| c - &(&k * r)).collect());
            cols[j] = col;
        }
        cols[a] = Root::new(root.coeffs.iter().map(|c| -c).collect());
        out.push(root);
    }
    Ok(out)
}

/// Positive roots grouped by depth.
#[derive(Clone, Debug)]
pub struct Layers {
    /// `layers[k]` holds the roots of depth `k + 1`, in decreasing
    /// lexicographic order of coefficients (so layer 1 is in label order).
    pub layers: Vec<Vec<Root>>,
    /// Whether an empty layer was reached, i.e. the root system is finite
    /// and fully listed.
    pub exhausted: bool,
}

impl Layers {
    pub fn iter(&self) -> impl Iterator<Item = &Root> {
        self.layers.iter().flatten()
    }

    pub fn count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn max_depth(&self) -> usize {
        self.layers.len()
    }
}

/// Enumerates positive roots of depth `1..=max_depth`, layer by layer.
/// Stops early once a layer comes out empty.
pub fn enumerate(d: &CoxeterDatum, max_depth: usize) -> Result<Layers> {
    enumerate_with_cap(d, max_depth, DEFAULT_LAYER_CAP)
}

pub fn enumerate_with_cap(d: &CoxeterDatum, max_depth: usize, layer_cap: usize) -> Result<Layers> {
    if max_depth == 0 {
        return Err(Error::Domain("max_depth must be at least 1".into()));
    }
    let mut seen: HashSet<RootKey> = HashSet::new();
    let first: Vec<Root> = (0..d.rank()).map(|a| Root::simple(d, a)).collect();
    for r in &first {
        seen.insert(r.key(d));
    }
    let mut layers = vec![first];
    let mut exhausted = false;
    while layers.len() < max_depth {
        let depth_next = layers.len() + 1;
        let mut next: Vec<(RootKey, Root)> = Vec::new();
        for x in layers.last().expect("nonempty") {
            for a in 0..d.rank() {
                let ip = inner_simple(d, x, a);
                if d.classify(&ip).is_negative() {
                    let y = reflect_simple_unchecked(d, a, x, &ip);
                    let key = y.key(d);
                    if seen.insert(key.clone()) {
                        let _ = y.depth.set(depth_next);
                        next.push((key, y));
                    }
                }
            }
            if next.len() > layer_cap {
                return Err(Error::Limit(format!(
                    "layer {depth_next} exceeds {layer_cap} roots"
                )));
            }
        }
        if next.is_empty() {
            exhausted = true;
            break;
        }
        next.sort_by(|p, q| q.0.cmp(&p.0));
        layers.push(next.into_iter().map(|(_, r)| r).collect());
    }
    Ok(Layers { layers, exhausted })
}

/// Memoised precedence tests within one run.
#[derive(Default)]
pub struct Precedence {
    memo: HashMap<(RootKey, RootKey), bool>,
}

impl Precedence {
    pub fn new() -> Self {
        Self::default()
    }

    /// Whether `y ⪯ x`: `x = w y` with `depth(x) = ℓ(w) + depth(y)`.
    pub fn precedes(&mut self, d: &CoxeterDatum, y: &Root, x: &Root) -> Result<bool> {
        let key = (y.key(d), x.key(d));
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let v = precedes(d, y, x)?;
        self.memo.insert(key, v);
        Ok(v)
    }
}

/// Whether `y ⪯ x`, by searching depth-lowering simple-reflection paths
/// from `x` down to the depth of `y`.
pub fn precedes(d: &CoxeterDatum, y: &Root, x: &Root) -> Result<bool> {
    let (dy, dx) = (depth(d, y)?, depth(d, x)?);
    if dy > dx {
        return Ok(false);
    }
    let target = y.key(d);
    let mut frontier = vec![x.clone()];
    for _ in dy..dx {
        frontier = lower_neighbours(d, &frontier);
    }
    Ok(frontier.iter().any(|z| z.key(d) == target))
}

/// Distinct roots `r_a z` with `(z, e_a) > 0`, over all `z` in `frontier`.
pub fn lower_neighbours(d: &CoxeterDatum, frontier: &[Root]) -> Vec<Root> {
    let mut seen = HashSet::new();
    let mut next = Vec::new();
    for z in frontier {
        for a in 0..d.rank() {
            let ip = inner_simple(d, z, a);
            if d.classify(&ip).is_positive() {
                let y = reflect_simple_unchecked(d, a, z, &ip);
                if seen.insert(y.key(d)) {
                    next.push(y);
                }
            }
        }
    }
    next
}

/// All roots `y` with `y ≺ x` (strictly), each paired with its depth.
pub fn predecessors(d: &CoxeterDatum, x: &Root) -> Result<Vec<(Root, usize)>> {
    let dx = depth(d, x)?;
    let mut out = Vec::new();
    let mut frontier = vec![x.clone()];
    for k in (1..dx).rev() {
        frontier = lower_neighbours(d, &frontier);
        out.extend(frontier.iter().cloned().map(|r| (r, k)));
    }
    Ok(out)
}

/// Classification of `(x, e_a)` for each generator.
pub fn simple_classes(d: &CoxeterDatum, x: &Root) -> Vec<ScalarClass> {
    (0..d.rank()).map(|a| d.classify(&inner_simple(d, x, a))).collect()
}
