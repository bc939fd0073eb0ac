//! Executable forms of the structural laws of the dominance hierarchy.
//!
//! Each law is checked over the positive roots up to a depth bound and over
//! the computed levels. A failing law is reported with witnesses; it is not
//! an error.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::datum::CoxeterDatum;
use crate::dominance::{dominated_set, dominated_set_via, dominates, DominanceRecord, Hierarchy};
use crate::error::Result;
use crate::roots::{
    all_minimal_words, apply_word, descend, enumerate, inner, inner_simple, inversion_set,
    predecessors, reflect_root, reflect_simple, Root, RootKey, Sign, Word,
};

#[derive(Clone, Debug)]
pub struct LawOptions {
    /// Roots of depth at most this are sampled.
    pub depth_cap: usize,
    /// Non-simple reflecting roots are taken up to this depth.
    pub reflect_depth: usize,
    /// Order axioms are checked on roots up to this depth.
    pub order_depth: usize,
    /// Cap on descent branches per root.
    pub word_cap: usize,
    /// Cap on the orbit set used for the short-word law.
    pub orbit_cap: usize,
    /// Witnesses kept per law.
    pub max_witnesses: usize,
}

impl Default for LawOptions {
    fn default() -> Self {
        LawOptions {
            depth_cap: 8,
            reflect_depth: 4,
            order_depth: 5,
            word_cap: 10_000,
            orbit_cap: 200_000,
            max_witnesses: 5,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LawOutcome {
    pub name: &'static str,
    pub description: &'static str,
    /// Number of instances examined.
    pub checked: usize,
    pub failed: usize,
    pub witnesses: Vec<String>,
}

impl LawOutcome {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LawReport {
    pub depth_cap: usize,
    pub sampled_roots: usize,
    pub outcomes: Vec<LawOutcome>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(LawOutcome::passed)
    }

    pub fn failures(&self) -> usize {
        self.outcomes.iter().map(|o| o.failed).sum()
    }

    pub fn outcome(&self, name: &str) -> Option<&LawOutcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }
}

struct Ctx<'a> {
    d: &'a CoxeterDatum,
    h: &'a Hierarchy,
    opts: &'a LawOptions,
    sample: Vec<Root>,
    records: HashMap<RootKey, DominanceRecord>,
    level_keys: Vec<HashSet<RootKey>>,
}

impl Ctx<'_> {
    fn n_of(&self, x: &Root) -> Result<usize> {
        match self.records.get(&x.key(self.d)) {
            Some(rec) => Ok(rec.n),
            None => Ok(dominated_set(self.d, x)?.n),
        }
    }

    fn record(&self, x: &Root) -> &DominanceRecord {
        &self.records[&x.key(self.d)]
    }

    fn keys<'r>(&self, roots: impl IntoIterator<Item = &'r Root>) -> HashSet<RootKey> {
        roots.into_iter().map(|r| r.key(self.d)).collect()
    }

    fn law<T: Sync>(
        &self,
        name: &'static str,
        description: &'static str,
        items: &[T],
        f: impl Fn(&T) -> Result<Vec<String>> + Sync,
    ) -> Result<LawOutcome> {
        let results: Vec<Vec<String>> = items.par_iter().map(&f).collect::<Result<_>>()?;
        let failures: Vec<String> = results.into_iter().flatten().collect();
        Ok(LawOutcome {
            name,
            description,
            checked: items.len(),
            failed: failures.len(),
            witnesses: failures.into_iter().take(self.opts.max_witnesses).collect(),
        })
    }

    fn level_roots(&self) -> Vec<(usize, &Root)> {
        self.h.levels.iter().flat_map(|l| l.iter().map(move |x| (l.n, x))).collect()
    }
}

/// Checks every law on `d` given its computed levels.
pub fn check_laws(d: &CoxeterDatum, h: &Hierarchy, opts: &LawOptions) -> Result<LawReport> {
    let layers = enumerate(d, opts.depth_cap)?;
    let sample: Vec<Root> = layers.iter().cloned().collect();
    let records: Vec<DominanceRecord> =
        sample.par_iter().map(|x| dominated_set(d, x)).collect::<Result<_>>()?;
    let records = records.into_iter().map(|r| (r.root.key(d), r)).collect();
    let level_keys = h.levels.iter().map(|l| l.iter().map(|x| x.key(d)).collect()).collect();
    let ctx = Ctx { d, h, opts, sample, records, level_keys };

    let outcomes = vec![
        level_one_from_elementary_pairs(&ctx)?,
        levels_from_elementary_reflections(&ctx)?,
        level_size_bound(&ctx)?,
        short_words_avoid_level(&ctx)?,
        simple_reflections_of_elementary(&ctx)?,
        simple_reflections_shift_by_one(&ctx)?,
        precedence_is_monotone(&ctx)?,
        simple_reflection_trichotomy(&ctx)?,
        root_reflection_direction(&ctx)?,
        descent_inversions_positive(&ctx)?,
        descent_choice_independence(&ctx)?,
        empty_level_persists(&ctx)?,
        levels_nonempty(&ctx)?,
        hierarchy_partition(&ctx)?,
        predecessor_in_previous_level(&ctx)?,
        dominance_partial_order(&ctx)?,
    ];
    Ok(LawReport { depth_cap: opts.depth_cap, sampled_roots: ctx.sample.len(), outcomes })
}

/// `{ r_a b : a ∈ D_0, b ∈ D_0 ∪ … ∪ D_{n−1} }`
fn reflected_products(ctx: &Ctx, upto: usize) -> Result<HashSet<RootKey>> {
    let d = ctx.d;
    let elementary: Vec<&Root> = ctx.h.levels[0].iter().collect();
    let mut out = HashSet::new();
    for level in &ctx.h.levels[..upto] {
        for b in level.iter() {
            for a in &elementary {
                out.insert(reflect_root(d, a, b)?.key(d));
            }
        }
    }
    Ok(out)
}

fn level_one_from_elementary_pairs(ctx: &Ctx) -> Result<LawOutcome> {
    let d = ctx.d;
    let name = "level_one_from_elementary_pairs";
    let desc = "D_1 ⊆ { r_a b : a, b ∈ D_0 } and #D_1 ≤ #D_0² − #D_0";
    if ctx.h.levels.len() < 2 {
        return ctx.law(name, desc, &[] as &[Root], |_| Ok(vec![]));
    }
    let products = reflected_products(ctx, 1)?;
    let level: Vec<&Root> = ctx.h.levels[1].iter().collect();
    let mut out = ctx.law(name, desc, &level, |x| {
        Ok(if products.contains(&x.key(d)) { vec![] } else { vec![format!("{x} ∈ D_1")] })
    })?;
    let k = ctx.h.levels[0].len();
    if level.len() > k * k - k {
        out.failed += 1;
        out.witnesses.push(format!("#D_1 = {} > {}", level.len(), k * k - k));
    }
    Ok(out)
}

fn levels_from_elementary_reflections(ctx: &Ctx) -> Result<LawOutcome> {
    let d = ctx.d;
    let mut items = Vec::new();
    for n in 1..ctx.h.levels.len() {
        let products = reflected_products(ctx, n)?;
        for x in ctx.h.levels[n].iter() {
            items.push((n, x, products.contains(&x.key(d))));
        }
    }
    ctx.law(
        "levels_from_elementary_reflections",
        "D_n ⊆ { r_a b : a ∈ D_0, b ∈ D_m, m < n }",
        &items,
        |(n, x, ok)| Ok(if *ok { vec![] } else { vec![format!("{x} ∈ D_{n}")] }),
    )
}

fn level_size_bound(ctx: &Ctx) -> Result<LawOutcome> {
    let k = ctx.h.levels[0].len() as u128;
    let items: Vec<(usize, usize)> =
        ctx.h.levels.iter().skip(1).map(|l| (l.n, l.len())).collect();
    ctx.law("level_size_bound", "#D_n ≤ (#D_0)^(n+1) − (#D_0)^n", &items, |&(n, size)| {
        let bound = k.checked_pow(n as u32 + 1).zip(k.checked_pow(n as u32)).map(|(p, q)| p - q);
        Ok(match bound {
            Some(b) if size as u128 > b => vec![format!("#D_{n} = {size} > {b}")],
            _ => vec![],
        })
    })
}

fn short_words_avoid_level(ctx: &Ctx) -> Result<LawOutcome> {
    let d = ctx.d;
    // orbit[k] = { w a : a ∈ D_0, ℓ(w) ≤ k }
    let mut orbit: HashMap<RootKey, Root> =
        ctx.h.levels[0].iter().map(|x| (x.key(d), x.clone())).collect();
    let mut frontier: Vec<Root> = orbit.values().cloned().collect();
    let mut items = Vec::new();
    for n in 1..ctx.h.levels.len() {
        if orbit.len() > ctx.opts.orbit_cap {
            break;
        }
        // orbit now holds words of length < n
        for x in ctx.h.levels[n].iter() {
            items.push((n, x.clone(), orbit.contains_key(&x.key(d))));
        }
        let mut next = Vec::new();
        for y in &frontier {
            for a in 0..d.rank() {
                let z = reflect_simple(d, a, y)?;
                let key = z.key(d);
                if !orbit.contains_key(&key) {
                    orbit.insert(key, z.clone());
                    next.push(z);
                }
            }
        }
        frontier = next;
    }
    ctx.law(
        "short_words_avoid_level",
        "{ w a : a ∈ D_0, ℓ(w) < n } ∩ D_n = ∅",
        &items,
        |(n, x, hit)| Ok(if *hit { vec![format!("{x} ∈ D_{n}")] } else { vec![] }),
    )
}

fn simple_reflections_of_elementary(ctx: &Ctx) -> Result<LawOutcome> {
    let d = ctx.d;
    let items: Vec<&Root> = ctx.h.levels[0].iter().collect();
    ctx.law("simple_reflections_of_elementary", "r_a D_0 ⊆ −D_0 ⊎ D_0 ⊎ D_1", &items, |x| {
        let mut bad = vec![];
        for a in 0..d.rank() {
            let y = reflect_simple(d, a, x)?;
            let ok = match y.sign(d)? {
                Sign::Negative => ctx.level_keys[0].contains(&(-&y).key(d)),
                Sign::Positive => ctx.n_of(&y)? <= 1,
            };
            if !ok {
                bad.push(format!("r_{} {x} = {y}", d.labels()[a]));
            }
        }
        Ok(bad)
    })
}

fn simple_reflections_shift_by_one(ctx: &Ctx) -> Result<LawOutcome> {
    let d = ctx.d;
    let items: Vec<&Root> = ctx.sample.iter().filter(|x| ctx.record(x).n >= 1).collect();
    ctx.law(
        "simple_reflections_shift_by_one",
        "r_a D_n ⊆ D_{n−1} ⊎ D_n ⊎ D_{n+1} for n ≥ 1",
        &items,
        |x| {
            let n = ctx.record(x).n;
            let mut bad = vec![];
            for a in 0..d.rank() {
                let y = reflect_simple(d, a, x)?;
                let m = ctx.n_of(&y)?;
                if m + 1 < n || m > n + 1 {
                    bad.push(format!("{x} ∈ D_{n} but r_{} of it lies in D_{m}", d.labels()[a]));
                }
            }
            Ok(bad)
        },
    )
}

fn precedence_is_monotone(ctx: &Ctx) -> Result<LawOutcome> {
    let d = ctx.d;
    let items: Vec<&Root> = ctx.sample.iter().collect();
    ctx.law(
        "precedence_is_monotone",
        "y ⪯ x with x = w y implies #D(y) ≤ #D(x) and w D(y) ⊆ D(x)",
        &items,
        |x| {
            let rec_x = ctx.record(x);
            let dx = ctx.keys(&rec_x.dominated);
            let mut pairs: Vec<(Word, Root)> = Vec::new();
            for a in 0..d.rank() {
                if d.classify(&inner_simple(d, x, a)).is_positive() && x.as_simple(d).is_none() {
                    pairs.push((Word::new(vec![a], true), reflect_simple(d, a, x)?));
                }
            }
            let descent = descend(d, x)?;
            let mut y: Root = (*x).clone();
            for k in 1..=descent.letters.len() {
                y = reflect_simple(d, descent.letters[k - 1], &y)?;
                pairs.push((Word::new(descent.letters[..k].to_vec(), true), y.clone()));
            }
            let mut bad = vec![];
            for (w, y) in pairs {
                let rec_y = dominated_set(d, &y)?;
                if rec_y.n > rec_x.n {
                    bad.push(format!("{y} ⪯ {x} but #D = {} > {}", rec_y.n, rec_x.n));
                }
                for z in &rec_y.dominated {
                    let wz = apply_word(d, &w, z)?;
                    if !dx.contains(&wz.key(d)) {
                        bad.push(format!("{} maps {z} ∈ D({y}) to {wz} ∉ D({x})", w.display(d)));
                    }
                }
            }
            Ok(bad)
        },
    )
}

fn simple_reflection_trichotomy(ctx: &Ctx) -> Result<LawOutcome> {
    let d = ctx.d;
    let items: Vec<&Root> = ctx.sample.iter().filter(|x| ctx.record(x).n >= 1).collect();
    ctx.law(
        "simple_reflection_trichotomy",
        "for x ∈ D_n, n ≥ 1: r_a x lies in D_{n−1}, D_n, D_{n+1} exactly as (x, a) ≥ 1, ∈ (−1, 1), ≤ −1",
        &items,
        |x| {
            let n = ctx.record(x).n;
            let mut bad = vec![];
            for a in 0..d.rank() {
                let class = d.classify(&inner_simple(d, x, a));
                let m = ctx.n_of(&reflect_simple(d, a, x)?)?;
                let expected = if class.at_least_one() {
                    n - 1
                } else if class.at_most_minus_one() {
                    n + 1
                } else {
                    n
                };
                if m != expected {
                    bad.push(format!("{x} ∈ D_{n}, a = {}: got D_{m}, expected D_{expected}", d.labels()[a]));
                }
            }
            Ok(bad)
        },
    )
}

fn root_reflection_direction(ctx: &Ctx) -> Result<LawOutcome> {
    let d = ctx.d;
    let reflecting: Vec<&Root> =
        ctx.sample.iter().filter(|t| ctx.record(t).depth <= ctx.opts.reflect_depth).collect();
    let items: Vec<&Root> = ctx.sample.iter().filter(|x| ctx.record(x).n >= 1).collect();
    ctx.law(
        "root_reflection_direction",
        "for x ∈ D_n, n ≥ 1, positive a: #D(r_a x) < n if (x, a) ≥ 1 and > n if (x, a) ≤ −1",
        &items,
        |x| {
            let n = ctx.record(x).n;
            let mut bad = vec![];
            for t in &reflecting {
                let class = d.classify(&inner(d, x, t)?);
                if !class.at_least_one() && !class.at_most_minus_one() {
                    continue;
                }
                let y = reflect_root(d, t, x)?;
                if y.sign(d)? == Sign::Negative {
                    continue;
                }
                let m = ctx.n_of(&y)?;
                let ok = if class.at_least_one() { m < n } else { m > n };
                if !ok {
                    bad.push(format!("x = {x} ∈ D_{n}, a = {t}: r_a x ∈ D_{m}"));
                }
            }
            Ok(bad)
        },
    )
}

fn descent_inversions_positive(ctx: &Ctx) -> Result<LawOutcome> {
    let d = ctx.d;
    let items: Vec<&Root> = ctx.sample.iter().collect();
    ctx.law(
        "descent_inversions_positive",
        "(b, x) > 0 for b ∈ N(w⁻¹), w ∈ S(x) or T(x)",
        &items,
        |x| {
            let mut bad = vec![];
            for (w, a) in all_minimal_words(d, x, ctx.opts.word_cap)? {
                let mut full = w.letters.clone();
                full.push(a);
                for word in [w, Word::new(full, true)] {
                    for b in inversion_set(d, &word)? {
                        if !d.classify(&inner(d, &b, x)?).is_positive() {
                            bad.push(format!("x = {x}, w = {}, b = {b}", word.display(d)));
                        }
                    }
                }
            }
            Ok(bad)
        },
    )
}

fn descent_choice_independence(ctx: &Ctx) -> Result<LawOutcome> {
    let d = ctx.d;
    let items: Vec<&Root> = ctx.sample.iter().collect();
    ctx.law(
        "descent_choice_independence",
        "every w ∈ S(x) yields the same D(x), and D(x) ⊆ ∩ N(w⁻¹)",
        &items,
        |x| {
            let rec = ctx.record(x);
            let reference = ctx.keys(&rec.dominated);
            let mut bad = vec![];
            for (w, _) in all_minimal_words(d, x, ctx.opts.word_cap)? {
                let other = dominated_set_via(d, x, &w)?;
                if ctx.keys(&other.dominated) != reference || other.n != rec.n {
                    bad.push(format!("x = {x}: w = {} gives n = {}", w.display(d), other.n));
                }
                let nset = ctx.keys(&inversion_set(d, &w)?);
                if !reference.is_subset(&nset) {
                    bad.push(format!("x = {x}: D(x) ⊄ N(w⁻¹) for w = {}", w.display(d)));
                }
            }
            Ok(bad)
        },
    )
}

fn empty_level_persists(ctx: &Ctx) -> Result<LawOutcome> {
    let sizes = ctx.h.sizes();
    let items: Vec<usize> = (1..sizes.len()).collect();
    ctx.law("empty_level_persists", "D_n = ∅ implies D_m = ∅ for m > n", &items, |&m| {
        Ok(if sizes[m] > 0 && sizes[..m].contains(&0) {
            vec![format!("D_{m} has {} roots after an empty level", sizes[m])]
        } else {
            vec![]
        })
    })
}

fn levels_nonempty(ctx: &Ctx) -> Result<LawOutcome> {
    let items: Vec<(usize, usize)> = ctx.h.levels.iter().map(|l| (l.n, l.len())).collect();
    let finite = ctx.h.finite;
    ctx.law(
        "levels_nonempty",
        "every D_n is nonempty for an infinite group; D_n = ∅ for n ≥ 1 otherwise",
        &items,
        |&(n, size)| {
            let ok = if finite { n == 0 || size == 0 } else { size > 0 };
            Ok(if ok { vec![] } else { vec![format!("#D_{n} = {size}")] })
        },
    )
}

fn hierarchy_partition(ctx: &Ctx) -> Result<LawOutcome> {
    let d = ctx.d;
    let n_max = ctx.h.n_max();
    let items: Vec<&Root> = ctx.sample.iter().collect();
    let mut out = ctx.law(
        "hierarchy_partition",
        "each sampled root lies in exactly the computed level given by #D(x)",
        &items,
        |x| {
            let n = ctx.record(x).n;
            let found = ctx.h.level_of(d, x);
            let expected = (n <= n_max).then_some(n);
            Ok(if found == expected {
                vec![]
            } else {
                vec![format!("{x} has #D = {n} but sits in level {found:?}")]
            })
        },
    )?;
    let total: usize = ctx.level_keys.iter().map(HashSet::len).sum();
    let union: HashSet<&RootKey> = ctx.level_keys.iter().flatten().collect();
    if union.len() != total {
        out.failed += 1;
        out.witnesses.push("computed levels overlap".into());
    }
    Ok(out)
}

fn predecessor_in_previous_level(ctx: &Ctx) -> Result<LawOutcome> {
    let d = ctx.d;
    let items: Vec<(usize, &Root)> = ctx.level_roots().into_iter().filter(|(n, _)| *n >= 1).collect();
    ctx.law(
        "predecessor_in_previous_level",
        "every x ∈ D_n, n ≥ 1, is preceded by some y ∈ D_{n−1}",
        &items,
        |(n, x)| {
            let found = predecessors(d, x)?
                .iter()
                .any(|(y, _)| ctx.level_keys[n - 1].contains(&y.key(d)));
            Ok(if found { vec![] } else { vec![format!("{x} ∈ D_{n}")] })
        },
    )
}

fn dominance_partial_order(ctx: &Ctx) -> Result<LawOutcome> {
    let d = ctx.d;
    let roots: Vec<&Root> =
        ctx.sample.iter().filter(|x| ctx.record(x).depth <= ctx.opts.order_depth).collect();
    let matrix: Vec<Vec<bool>> = roots
        .par_iter()
        .map(|x| roots.iter().map(|y| dominates(d, x, y)).collect::<Result<Vec<bool>>>())
        .collect::<Result<_>>()?;
    let idx: Vec<usize> = (0..roots.len()).collect();
    ctx.law(
        "dominance_partial_order",
        "dominance is reflexive, antisymmetric and transitive",
        &idx,
        |&i| {
            let mut bad = vec![];
            if !matrix[i][i] {
                bad.push(format!("{} does not dominate itself", roots[i]));
            }
            for j in 0..roots.len() {
                if !matrix[i][j] {
                    continue;
                }
                if i != j && matrix[j][i] {
                    bad.push(format!("{} and {} dominate each other", roots[i], roots[j]));
                }
                for k in 0..roots.len() {
                    if matrix[j][k] && !matrix[i][k] {
                        bad.push(format!("{} ≥ {} ≥ {} fails transitivity", roots[i], roots[j], roots[k]));
                    }
                }
            }
            Ok(bad)
        },
    )
}
