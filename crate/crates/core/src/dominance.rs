//! Dominance between roots, dominated sets `D(x)`, the elementary roots
//! `D_0`, and the level-by-level computation of `D_n`.
//!
//! For positive roots, `x` dominates `y` exactly when `(x, y) ≥ 1` and
//! `depth(x) ≥ depth(y)`, with equal depth only for `x = y`. The dominated
//! set of a positive root is read off a minimal descent word: writing
//! `x = w e_a` with `ℓ(w) = depth(x) − 1`, `D(x)` consists of those
//! `b ∈ N(w⁻¹)` with `(x, b) ≥ 1`.
//!
//! `D_n` for `n ≥ 1` is obtained from `D_{n−1}` in two phases: first every
//! `r_a x` with `x ∈ D_{n−1}` and `(e_a, x) ≤ −1`, then closure under `r_a`
//! whenever `(e_a, x) ∈ (−1, 0)`, repeated until nothing new appears.

use std::collections::{HashMap, HashSet};

use crate::datum::CoxeterDatum;
use crate::error::{Error, Result};
use crate::roots::{
    depth, enumerate, inner, inner_simple, inversion_set, minimal_word, reflect_simple, Root,
    RootKey, Sign, Word,
};
use crate::scalar::ScalarClass;

/// Default cap on the size of a computed level.
pub const DEFAULT_LEVEL_CAP: usize = 100_000;
/// Default depth bound for enumeration-based checks.
pub const DEFAULT_DEPTH_CAP: usize = 30;

/// A positive root with its dominated set.
#[derive(Clone, Debug, PartialEq)]
pub struct DominanceRecord {
    pub root: Root,
    pub depth: usize,
    /// `#D(x)`.
    pub n: usize,
    /// `D(x)`, ordered as the inversion set of the descent word.
    pub dominated: Vec<Root>,
}

/// The roots with `#D(x) = n`.
#[derive(Clone, Debug)]
pub struct HierarchyLevel {
    pub n: usize,
    pub roots: Vec<DominanceRecord>,
}

impl HierarchyLevel {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().map(|r| &r.root)
    }
}

#[derive(Clone, Debug)]
pub struct HierarchyOptions {
    /// Largest allowed level (and largest allowed `D_0` closure).
    pub level_cap: usize,
    /// Depth to which finite root systems are enumerated.
    pub depth_cap: usize,
}

impl Default for HierarchyOptions {
    fn default() -> Self {
        HierarchyOptions { level_cap: DEFAULT_LEVEL_CAP, depth_cap: DEFAULT_DEPTH_CAP }
    }
}

/// Levels `D_0 … D_{n_max}` with a membership index.
#[derive(Clone, Debug)]
pub struct Hierarchy {
    pub levels: Vec<HierarchyLevel>,
    /// Whether the group is finite, in which case `D_0 = Φ⁺`.
    pub finite: bool,
    index: HashMap<RootKey, usize>,
}

impl Hierarchy {
    /// The level containing `x`, if it was computed.
    pub fn level_of(&self, d: &CoxeterDatum, x: &Root) -> Option<usize> {
        self.index.get(&x.key(d)).copied()
    }

    pub fn contains_key(&self, key: &RootKey) -> bool {
        self.index.contains_key(key)
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.levels.iter().map(HierarchyLevel::len).collect()
    }

    pub fn n_max(&self) -> usize {
        self.levels.len() - 1
    }
}

/// Whether `x` dominates `y`. Both must be roots.
pub fn dominates(d: &CoxeterDatum, x: &Root, y: &Root) -> Result<bool> {
    let ip = inner(d, x, y)?;
    match (x.sign(d)?, y.sign(d)?) {
        (Sign::Positive, Sign::Positive) => {
            if x.key(d) == y.key(d) {
                return Ok(true);
            }
            Ok(d.classify(&ip).at_least_one() && depth(d, x)? > depth(d, y)?)
        }
        (Sign::Positive, Sign::Negative) => Ok(d.classify(&ip).at_least_one()),
        (Sign::Negative, Sign::Positive) => Ok(false),
        (Sign::Negative, Sign::Negative) => dominates(d, &-y, &-x),
    }
}

/// `D(x)` computed from the greedy descent word.
pub fn dominated_set(d: &CoxeterDatum, x: &Root) -> Result<DominanceRecord> {
    let (w, _) = minimal_word(d, x)?;
    dominated_set_via(d, x, &w)
}

/// `D(x)` computed from a given word `w` with `w⁻¹ x` simple and
/// `ℓ(w) = depth(x) − 1`.
pub fn dominated_set_via(d: &CoxeterDatum, x: &Root, w: &Word) -> Result<DominanceRecord> {
    let mut dominated = Vec::new();
    for b in inversion_set(d, w)? {
        if d.classify(&inner(d, x, &b)?).at_least_one() {
            dominated.push(b);
        }
    }
    Ok(DominanceRecord { root: x.clone(), depth: w.len() + 1, n: dominated.len(), dominated })
}

/// Keyed, insertion-ordered set of roots.
#[derive(Default)]
struct RootSet {
    keys: HashSet<RootKey>,
    roots: Vec<Root>,
}

impl RootSet {
    fn insert(&mut self, d: &CoxeterDatum, x: Root) -> bool {
        if self.keys.insert(x.key(d)) {
            self.roots.push(x);
            true
        } else {
            false
        }
    }
}

/// The elementary roots `D_0`, by closure of the simple roots under
/// `r_a` whenever `(x, e_a) ∈ (−1, 0)`. Every member is checked to have an
/// empty dominated set.
pub fn elementary_roots(d: &CoxeterDatum, size_cap: usize) -> Result<Vec<Root>> {
    let mut set = RootSet::default();
    for a in 0..d.rank() {
        set.insert(d, Root::simple(d, a));
    }
    let mut i = 0;
    while i < set.roots.len() {
        let x = set.roots[i].clone();
        for a in 0..d.rank() {
            // Edges with (x, e_a) ≤ −1 lead to roots dominating e_a.
            if d.classify(&inner_simple(d, &x, a)) == ScalarClass::OpenNegative {
                set.insert(d, reflect_simple(d, a, &x)?);
                if set.roots.len() > size_cap {
                    return Err(Error::Limit(format!(
                        "elementary root closure exceeds {size_cap} roots"
                    )));
                }
            }
        }
        i += 1;
    }
    for x in &set.roots {
        let rec = dominated_set(d, x)?;
        if rec.n != 0 {
            return Err(Error::SelfCheck(format!(
                "closure member {x} dominates {}",
                rec.dominated[0]
            )));
        }
    }
    let mut roots = set.roots;
    sort_roots(d, &mut roots)?;
    Ok(roots)
}

/// Sorts by depth, then by decreasing coefficients.
pub fn sort_roots(d: &CoxeterDatum, roots: &mut [Root]) -> Result<()> {
    let mut keyed = Vec::with_capacity(roots.len());
    for r in roots.iter() {
        keyed.push((depth(d, r)?, r.key(d)));
    }
    let mut order: Vec<usize> = (0..roots.len()).collect();
    order.sort_by(|&i, &j| keyed[i].0.cmp(&keyed[j].0).then_with(|| keyed[j].1.cmp(&keyed[i].1)));
    let sorted: Vec<Root> = order.iter().map(|&i| roots[i].clone()).collect();
    roots.clone_from_slice(&sorted);
    Ok(())
}

/// Whether some elementary root has a simple reflection edge with inner
/// product `≤ −1`. This happens exactly when the group is infinite.
pub fn has_infinite_edge(d: &CoxeterDatum, elementary: &[Root]) -> bool {
    elementary
        .iter()
        .any(|x| (0..d.rank()).any(|a| d.classify(&inner_simple(d, x, a)).at_most_minus_one()))
}

/// Computes `D_n` from `D_{n−1}`.
pub fn next_level(d: &CoxeterDatum, previous: &[Root], level_cap: usize) -> Result<Vec<Root>> {
    let mut set = RootSet::default();
    for x in previous {
        for a in 0..d.rank() {
            if d.classify(&inner_simple(d, x, a)).at_most_minus_one() {
                set.insert(d, reflect_simple(d, a, x)?);
            }
        }
    }
    loop {
        let before = set.roots.len();
        let snapshot = set.roots.clone();
        for x in &snapshot {
            for a in 0..d.rank() {
                if d.classify(&inner_simple(d, x, a)) == ScalarClass::OpenNegative {
                    set.insert(d, reflect_simple(d, a, x)?);
                }
            }
            if set.roots.len() > level_cap {
                return Err(Error::Limit(format!("level exceeds {level_cap} roots")));
            }
        }
        if set.roots.len() == before {
            break;
        }
    }
    Ok(set.roots)
}

/// Computes `D_0, …, D_{n_max}`. Every emitted root is classified again by
/// its own dominated set, and a mismatch is an error.
pub fn hierarchy(d: &CoxeterDatum, n_max: usize, options: &HierarchyOptions) -> Result<Hierarchy> {
    let elementary = elementary_roots(d, options.level_cap)?;
    let finite = !has_infinite_edge(d, &elementary);
    let mut raw_levels: Vec<Vec<Root>> = Vec::with_capacity(n_max + 1);
    if finite {
        let layers = enumerate(d, options.depth_cap)?;
        if !layers.exhausted {
            return Err(Error::Limit(format!(
                "finite root system not exhausted within depth {}",
                options.depth_cap
            )));
        }
        if layers.count() != elementary.len() {
            return Err(Error::SelfCheck(format!(
                "finite group has {} positive roots but {} elementary roots",
                layers.count(),
                elementary.len()
            )));
        }
        raw_levels.push(elementary);
        raw_levels.extend((0..n_max).map(|_| Vec::new()));
    } else {
        raw_levels.push(elementary);
        for _ in 0..n_max {
            let next = next_level(d, raw_levels.last().expect("nonempty"), options.level_cap)?;
            raw_levels.push(next);
        }
    }

    let mut levels = Vec::with_capacity(raw_levels.len());
    let mut index = HashMap::new();
    for (n, mut roots) in raw_levels.into_iter().enumerate() {
        sort_roots(d, &mut roots)?;
        let mut records = Vec::with_capacity(roots.len());
        for x in roots {
            let rec = dominated_set(d, &x)?;
            if rec.n != n {
                return Err(Error::SelfCheck(format!(
                    "{x} was placed in D_{n} but dominates {} roots",
                    rec.n
                )));
            }
            if index.insert(x.key(d), n).is_some() {
                return Err(Error::SelfCheck(format!("{x} appears in two levels")));
            }
            records.push(rec);
        }
        levels.push(HierarchyLevel { n, roots: records });
    }
    Ok(Hierarchy { levels, finite, index })
}
