//! Infinite dihedral reflection subgroups.
//!
//! Given canonical roots `α, β` with `(α, β) = −q ≤ −1`, every root of the
//! subsystem is `c_i α + c_{i±1} β` where `c` is the c-sequence of `q`. We
//! call `c_i α + c_{i−1} β` the alpha-side root of index `i` and
//! `c_j α + c_{j+1} β` the beta-side root of index `j`; the positive roots
//! are the alpha-side ones with `i ≥ 1` and the beta-side ones with `j ≥ 0`.
//! Since `c_{−i} = −c_i`, negating an alpha-side root of index `i` gives the
//! beta-side root of index `−i` and vice versa.

use std::fmt;

use crate::datum::CoxeterDatum;
use crate::dominance::dominates;
use crate::error::{Error, Result};
use crate::roots::{depth, inner, reflect_root, Root, Sign};
use crate::scalar::{CSequence, Scalar};

/// Canonical pair of an infinite dihedral subsystem.
#[derive(Clone, Debug)]
pub struct DihedralFrame {
    pub alpha: Root,
    pub beta: Root,
    /// `−(α, β)`, at least 1.
    pub q: Scalar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Family {
    /// `c_i α + c_{i−1} β`
    AlphaSide,
    /// `c_i α + c_{i+1} β`
    BetaSide,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub struct ChainPosition {
    pub index: i64,
    pub family: Family,
}

impl ChainPosition {
    pub fn alpha(index: i64) -> Self {
        ChainPosition { index, family: Family::AlphaSide }
    }

    pub fn beta(index: i64) -> Self {
        ChainPosition { index, family: Family::BetaSide }
    }

    /// Indices `(i, k)` with the root equal to `c_i α + c_k β`.
    pub fn c_indices(self) -> (i64, i64) {
        match self.family {
            Family::AlphaSide => (self.index, self.index - 1),
            Family::BetaSide => (self.index, self.index + 1),
        }
    }

    /// Position of the negated root.
    pub fn negated(self) -> Self {
        match self.family {
            Family::AlphaSide => ChainPosition::beta(-self.index),
            Family::BetaSide => ChainPosition::alpha(-self.index),
        }
    }

    pub fn is_positive(self) -> bool {
        match self.family {
            Family::AlphaSide => self.index >= 1,
            Family::BetaSide => self.index >= 0,
        }
    }
}

impl fmt::Display for ChainPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.family {
            Family::AlphaSide => "alpha",
            Family::BetaSide => "beta",
        };
        write!(f, "{side}[{}]", self.index)
    }
}

impl DihedralFrame {
    /// Builds a frame from a pair already known to be canonical.
    pub fn new(d: &CoxeterDatum, alpha: Root, beta: Root) -> Result<Self> {
        let ip = inner(d, &alpha, &beta)?;
        if !d.classify(&ip).at_most_minus_one() {
            return Err(Error::FiniteDihedral(ip.to_string()));
        }
        Ok(DihedralFrame { alpha, beta, q: -ip })
    }

    pub fn c_sequence(&self, d: &CoxeterDatum) -> Result<CSequence> {
        CSequence::new(&self.q, d.eps())
    }

    /// The root at a chain position.
    pub fn root_at(&self, seq: &CSequence, pos: ChainPosition) -> Root {
        let (i, k) = pos.c_indices();
        self.alpha.scale(&seq.get(i)).add(&self.beta.scale(&seq.get(k)))
    }
}

fn check_infinite(d: &CoxeterDatum, x: &Root, y: &Root) -> Result<Scalar> {
    let ip = inner(d, x, y)?;
    if d.classify(&ip).inside_unit_interval() {
        return Err(Error::FiniteDihedral(ip.to_string()));
    }
    Ok(ip)
}

/// Orders a pair by depth, then by decreasing coefficients.
fn ordered(d: &CoxeterDatum, x: Root, y: Root) -> Result<(Root, Root)> {
    let kx = (depth(d, &x)?, std::cmp::Reverse(x.key(d)));
    let ky = (depth(d, &y)?, std::cmp::Reverse(y.key(d)));
    Ok(if kx <= ky { (x, y) } else { (y, x) })
}

/// Canonical roots of `⟨r_x, r_y⟩`, found by repeatedly replacing one root
/// with its reflection in the other whenever that lowers depth. Signs of the
/// inputs are irrelevant.
pub fn canonical_pair(d: &CoxeterDatum, x: &Root, y: &Root) -> Result<DihedralFrame> {
    check_infinite(d, x, y)?;
    let mut x = x.positive_part(d)?;
    let mut y = y.positive_part(d)?;
    if x.key(d) == y.key(d) {
        return Err(Error::Domain(format!("{x} and {y} generate a group of order 2")));
    }
    loop {
        let ip = inner(d, &x, &y)?;
        if d.classify(&ip).at_most_minus_one() {
            break;
        }
        let (dx, dy) = (depth(d, &x)?, depth(d, &y)?);
        let y2 = reflect_root(d, &x, &y)?.positive_part(d)?;
        if depth(d, &y2)? < dy {
            y = y2;
            continue;
        }
        let x2 = reflect_root(d, &y, &x)?.positive_part(d)?;
        if depth(d, &x2)? < dx {
            x = x2;
            continue;
        }
        return Err(Error::SelfCheck(format!(
            "no depth-lowering reflection for the non-canonical pair {x}, {y}"
        )));
    }
    let (alpha, beta) = ordered(d, x, y)?;
    DihedralFrame::new(d, alpha, beta)
}

/// Coordinates `(s, t)` with `z = s α + t β`.
pub fn frame_coordinates(d: &CoxeterDatum, frame: &DihedralFrame, z: &Root) -> Result<(Scalar, Scalar)> {
    let (a, b) = (frame.alpha.coeffs(), frame.beta.coeffs());
    let n = d.rank();
    if z.dim() != n {
        return Err(Error::Dimension { expected: n, got: z.dim() });
    }
    let mut best: Option<(usize, usize, Scalar)> = None;
    for i in 0..n {
        for j in i + 1..n {
            let det = &a[i] * &b[j] - &a[j] * &b[i];
            if det.is_zero_within(d.eps()) {
                continue;
            }
            let better = match &best {
                None => true,
                Some((_, _, prev)) => det.abs().to_f64() > prev.abs().to_f64(),
            };
            if better {
                best = Some((i, j, det));
            }
        }
    }
    let Some((i, j, det)) = best else {
        return Err(Error::Domain("frame roots are linearly dependent".into()));
    };
    let zc = z.coeffs();
    let s = (&zc[i] * &b[j] - &zc[j] * &b[i]).checked_div(&det)?;
    let t = (&a[i] * &zc[j] - &a[j] * &zc[i]).checked_div(&det)?;
    let rebuilt = frame.alpha.scale(&s).add(&frame.beta.scale(&t));
    let tol = d.eps() * 100.0;
    if rebuilt.coeffs().iter().zip(zc).any(|(p, q)| !p.approx_eq(q, tol * q.abs().to_f64().max(1.0))) {
        return Err(Error::NotInPlane(z.to_string()));
    }
    Ok((s, t))
}

/// Position of `z` in the chains of `frame`.
pub fn chain_position(d: &CoxeterDatum, frame: &DihedralFrame, z: &Root) -> Result<ChainPosition> {
    let (s, t) = frame_coordinates(d, frame, z)?;
    let seq = frame.c_sequence(d)?;
    let eps = d.eps();
    let sign_s = s.sign_within(eps);
    let sign_t = t.sign_within(eps);
    use std::cmp::Ordering::*;
    let negative = match (sign_s, sign_t) {
        (Greater | Equal, Greater | Equal) => false,
        (Less | Equal, Less | Equal) => true,
        _ => return Err(Error::NotInSubsystem(z.to_string())),
    };
    let (s, t) = if negative { (-s, -t) } else { (s, t) };
    let close = |u: &Scalar, v: &Scalar| u.approx_eq(v, eps * 100.0 * v.abs().to_f64().max(1.0));
    let mut i: i64 = 0;
    loop {
        let ci = seq.get(i);
        if ci.to_f64() > s.to_f64() + 1.0 || i > 100_000 {
            return Err(Error::NotInSubsystem(z.to_string()));
        }
        if close(&ci, &s) {
            let pos = if i >= 1 && close(&seq.get(i - 1), &t) {
                ChainPosition::alpha(i)
            } else if close(&seq.get(i + 1), &t) {
                ChainPosition::beta(i)
            } else {
                return Err(Error::NotInSubsystem(z.to_string()));
            };
            return Ok(if negative { pos.negated() } else { pos });
        }
        i += 1;
    }
}

/// Roots of both families for indices `i_min..=i_max`.
pub fn dihedral_roots(
    d: &CoxeterDatum,
    frame: &DihedralFrame,
    i_min: i64,
    i_max: i64,
) -> Result<Vec<(ChainPosition, Root)>> {
    let seq = frame.c_sequence(d)?;
    let mut out = Vec::new();
    for i in i_min..=i_max {
        for pos in [ChainPosition::alpha(i), ChainPosition::beta(i)] {
            out.push((pos, frame.root_at(&seq, pos)));
        }
    }
    Ok(out)
}

/// Canonical positions of `⟨r_x, r_y⟩` for two roots of the same family,
/// computed from their indices alone (smallest positive / non-negative
/// residues modulo the index difference).
pub fn canonical_by_index(x: ChainPosition, y: ChainPosition) -> Result<(ChainPosition, ChainPosition)> {
    if x.family != y.family || x.index == y.index {
        return Err(Error::Domain(format!("{x} and {y} are not distinct roots of one family")));
    }
    let (hi, lo) = if x.index > y.index { (x, y) } else { (y, x) };
    match hi.family {
        Family::BetaSide => {
            // c_m α + c_{m+1} β and c_n α + c_{n+1} β
            let (m, n) = (hi.index, lo.index);
            let diff = m - n;
            let i = smallest_positive_residue(-m, diff);
            let j = (m).rem_euclid(diff);
            Ok((ChainPosition::alpha(i), ChainPosition::beta(j)))
        }
        Family::AlphaSide => {
            // c_{m+1} α + c_m β and c_{n+1} α + c_n β
            let (m, n) = (hi.index - 1, lo.index - 1);
            let diff = m - n;
            let l1 = m.rem_euclid(diff);
            let l2 = smallest_positive_residue(-m, diff);
            Ok((ChainPosition::alpha(l1 + 1), ChainPosition::beta(l2 - 1)))
        }
    }
}

fn smallest_positive_residue(value: i64, modulus: i64) -> i64 {
    let r = value.rem_euclid(modulus);
    if r == 0 {
        modulus
    } else {
        r
    }
}

/// Structure of a dominance pair inside its dihedral subsystem.
#[derive(Clone, Debug)]
pub struct DominancePairReport {
    pub frame: DihedralFrame,
    pub x_position: ChainPosition,
    pub y_position: ChainPosition,
    pub inner_xy: Scalar,
    /// `(α, β) = −(x, y)`.
    pub opposite_inner: bool,
    /// Same family, index of `x` one more than index of `y`.
    pub consecutive: bool,
}

impl DominancePairReport {
    pub fn passed(&self) -> bool {
        self.opposite_inner && self.consecutive
    }
}

/// Locates a dominance pair `x dom y` (`x ≠ y`) in the chains of its
/// dihedral subsystem and checks both structural assertions.
pub fn verify_dominance_pair(d: &CoxeterDatum, x: &Root, y: &Root) -> Result<DominancePairReport> {
    if x.key(d) == y.key(d) || !dominates(d, x, y)? {
        return Err(Error::Domain(format!("{x} does not strictly dominate {y}")));
    }
    let frame = canonical_pair(d, x, y)?;
    let x_position = chain_position(d, &frame, x)?;
    let y_position = chain_position(d, &frame, y)?;
    let inner_xy = inner(d, x, y)?;
    let frame_inner = inner(d, &frame.alpha, &frame.beta)?;
    let opposite_inner = frame_inner.approx_eq(&-&inner_xy, d.eps().max(1e-12) * 10.0)
        || frame_inner.approx_eq(&-&inner_xy, 1e-9 * inner_xy.abs().to_f64().max(1.0));
    let consecutive =
        x_position.family == y_position.family && x_position.index == y_position.index + 1;
    Ok(DominancePairReport { frame, x_position, y_position, inner_xy, opposite_inner, consecutive })
}

/// Whether three positive roots of the subsystem can be pairwise canonical,
/// searching all positive positions with index at most `bound`.
pub fn find_three_canonical(d: &CoxeterDatum, frame: &DihedralFrame, bound: i64) -> Result<Option<[Root; 3]>> {
    let roots: Vec<Root> = dihedral_roots(d, frame, -bound, bound)?
        .into_iter()
        .filter(|(p, _)| p.is_positive())
        .map(|(_, r)| r)
        .collect();
    let canonical = |u: &Root, v: &Root| -> Result<bool> {
        Ok(d.classify(&inner(d, u, v)?).at_most_minus_one())
    };
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            if !canonical(&roots[i], &roots[j])? {
                continue;
            }
            for k in j + 1..roots.len() {
                if canonical(&roots[i], &roots[k])? && canonical(&roots[j], &roots[k])? {
                    return Ok(Some([roots[i].clone(), roots[j].clone(), roots[k].clone()]));
                }
            }
        }
    }
    Ok(None)
}

/// Frames of the form `{e_a, e_b}` for every infinite bond.
pub fn simple_frames(d: &CoxeterDatum) -> Vec<DihedralFrame> {
    let mut out = Vec::new();
    for a in 0..d.rank() {
        for b in a + 1..d.rank() {
            if let Ok(f) = DihedralFrame::new(d, Root::simple(d, a), Root::simple(d, b)) {
                out.push(f);
            }
        }
    }
    out
}

/// Sign helper for callers that only hold frame coordinates.
pub fn position_sign(pos: ChainPosition) -> Sign {
    if pos.is_positive() {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::systems;
    use crate::roots::{enumerate, reflect_simple};

    fn r(d: &CoxeterDatum, c: &[i64]) -> Root {
        Root::from_ints(d, c)
    }

    fn same_pair(d: &CoxeterDatum, f: &DihedralFrame, u: &Root, v: &Root) -> bool {
        let (a, b) = (f.alpha.key(d), f.beta.key(d));
        (a == u.key(d) && b == v.key(d)) || (a == v.key(d) && b == u.key(d))
    }

    #[test]
    fn canonical_pair_examples() {
        let d = systems::tilde_a1();
        let f = canonical_pair(&d, &r(&d, &[3, 2]), &r(&d, &[2, 1])).unwrap();
        assert!(same_pair(&d, &f, &r(&d, &[1, 0]), &r(&d, &[0, 1])));
        assert_eq!(f.q, d.one());
        let f = canonical_pair(&d, &r(&d, &[1, 0]), &r(&d, &[0, 1])).unwrap();
        assert_eq!((f.alpha.clone(), f.beta.clone()), (r(&d, &[1, 0]), r(&d, &[0, 1])));

        let h = systems::hyperbolic_rank2(3, 2);
        let rb_a = reflect_simple(&h, 1, &Root::simple(&h, 0)).unwrap();
        assert_eq!(rb_a, r(&h, &[1, 3]));
        let f = canonical_pair(&h, &rb_a, &Root::simple(&h, 1)).unwrap();
        assert!(same_pair(&h, &f, &r(&h, &[1, 0]), &r(&h, &[0, 1])));
        assert_eq!(f.q, Scalar::from_ratio(3, 2));
    }

    #[test]
    fn finite_pairs_are_rejected() {
        let d = systems::tilde_a2();
        let err = canonical_pair(&d, &Root::simple(&d, 0), &Root::simple(&d, 1)).unwrap_err();
        assert!(matches!(err, Error::FiniteDihedral(_)));
    }

    #[test]
    fn chain_positions() {
        let d = systems::tilde_a1();
        let f = simple_frames(&d).remove(0);
        assert_eq!(chain_position(&d, &f, &f.alpha).unwrap(), ChainPosition::alpha(1));
        assert_eq!(chain_position(&d, &f, &f.beta).unwrap(), ChainPosition::beta(0));
        assert_eq!(chain_position(&d, &f, &r(&d, &[3, 2])).unwrap(), ChainPosition::alpha(3));
        assert_eq!(chain_position(&d, &f, &r(&d, &[-3, -2])).unwrap(), ChainPosition::beta(-3));
        assert!(matches!(chain_position(&d, &f, &r(&d, &[5, 2])), Err(Error::NotInSubsystem(_))));

        let h = systems::hyperbolic_rank2(3, 2);
        let f = simple_frames(&h).remove(0);
        assert_eq!(chain_position(&h, &f, &r(&h, &[3, 1])).unwrap(), ChainPosition::alpha(2));

        let u = systems::universal(3);
        let f = simple_frames(&u).remove(0);
        assert!(matches!(chain_position(&u, &f, &r(&u, &[0, 0, 1])), Err(Error::NotInPlane(_))));
    }

    #[test]
    fn dihedral_root_lists() {
        let d = systems::tilde_a1();
        let f = simple_frames(&d).remove(0);
        for (pos, root) in dihedral_roots(&d, &f, 0, 3).unwrap() {
            let i = pos.index;
            let want = match pos.family {
                Family::AlphaSide => r(&d, &[i, i - 1]),
                Family::BetaSide => r(&d, &[i, i + 1]),
            };
            assert_eq!(root, want);
        }
        let h = systems::hyperbolic_rank2(3, 2);
        let f = simple_frames(&h).remove(0);
        let roots = dihedral_roots(&h, &f, 3, 3).unwrap();
        assert_eq!(roots[0], (ChainPosition::alpha(3), r(&h, &[8, 3])));
        let zero = dihedral_roots(&h, &f, 0, 0).unwrap();
        assert_eq!(zero[1].1, f.beta);
    }

    #[test]
    fn index_arithmetic_examples() {
        assert_eq!(
            canonical_by_index(ChainPosition::alpha(3), ChainPosition::alpha(2)).unwrap(),
            (ChainPosition::alpha(1), ChainPosition::beta(0))
        );
        assert_eq!(
            canonical_by_index(ChainPosition::alpha(3), ChainPosition::alpha(1)).unwrap(),
            (ChainPosition::alpha(1), ChainPosition::beta(1))
        );
        assert!(canonical_by_index(ChainPosition::alpha(3), ChainPosition::beta(1)).is_err());
    }

    #[test]
    fn dominance_pair_reports() {
        let d = systems::tilde_a1();
        let rep = verify_dominance_pair(&d, &r(&d, &[3, 2]), &r(&d, &[2, 1])).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.frame.q, d.one());
        assert_eq!((rep.x_position, rep.y_position), (ChainPosition::alpha(3), ChainPosition::alpha(2)));
        let rep = verify_dominance_pair(&d, &r(&d, &[2, 1]), &r(&d, &[1, 0])).unwrap();
        assert_eq!((rep.x_position, rep.y_position), (ChainPosition::alpha(2), ChainPosition::alpha(1)));
        assert!(verify_dominance_pair(&d, &r(&d, &[1, 2]), &r(&d, &[2, 1])).is_err());

        let h = systems::hyperbolic_rank2(3, 2);
        // x = r_b r_a e_b, y = r_b e_a
        let y = reflect_simple(&h, 1, &Root::simple(&h, 0)).unwrap();
        let x = reflect_simple(&h, 1, &reflect_simple(&h, 0, &Root::simple(&h, 1)).unwrap()).unwrap();
        assert_eq!((x.clone(), y.clone()), (r(&h, &[3, 8]), r(&h, &[1, 3])));
        let rep = verify_dominance_pair(&h, &x, &y).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.inner_xy, Scalar::from_ratio(3, 2));
    }

    fn test_frames(d: &CoxeterDatum) -> Vec<DihedralFrame> {
        let mut frames = simple_frames(d);
        let roots: Vec<Root> = enumerate(d, 4).unwrap().iter().cloned().collect();
        for x in &roots {
            for y in &roots {
                if x.key(d) != y.key(d) && dominates(d, x, y).unwrap() {
                    frames.push(canonical_pair(d, x, y).unwrap());
                }
            }
        }
        frames.truncate(12);
        frames
    }

    #[test]
    fn index_arithmetic_agrees_with_iteration() {
        for d in [systems::tilde_a1(), systems::tilde_a2(), systems::universal(3), systems::hyperbolic_rank2(3, 2)] {
            for f in test_frames(&d) {
                let seq = f.c_sequence(&d).unwrap();
                for family in [Family::AlphaSide, Family::BetaSide] {
                    for m in -6i64..=6 {
                        for n in -6i64..=6 {
                            if m == n {
                                continue;
                            }
                            let px = ChainPosition { index: m, family };
                            let py = ChainPosition { index: n, family };
                            let (ca, cb) = canonical_by_index(px, py).unwrap();
                            let x = f.root_at(&seq, px);
                            let y = f.root_at(&seq, py);
                            let it = canonical_pair(&d, &x, &y).unwrap();
                            let (ra, rb) = (f.root_at(&seq, ca), f.root_at(&seq, cb));
                            assert!(same_pair(&d, &it, &ra, &rb), "{px} {py}: {} {} vs {ra} {rb}", it.alpha, it.beta);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn frames_are_idempotent() {
        for d in [systems::tilde_a2(), systems::universal(3)] {
            for f in test_frames(&d) {
                let again = canonical_pair(&d, &f.alpha, &f.beta).unwrap();
                assert!(same_pair(&d, &again, &f.alpha, &f.beta));
            }
        }
    }

    #[test]
    fn subsystem_is_closed_under_its_reflections() {
        for d in [systems::tilde_a1(), systems::hyperbolic_rank2(3, 2), systems::universal(3)] {
            for f in test_frames(&d).into_iter().take(4) {
                let roots = dihedral_roots(&d, &f, -10, 10).unwrap();
                for (_, t) in roots.iter().step_by(3) {
                    for (_, z) in roots.iter().step_by(2) {
                        let image = reflect_root(&d, t, z).unwrap();
                        chain_position(&d, &f, &image).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn dominance_chains() {
        for d in [systems::tilde_a1(), systems::hyperbolic_rank2(3, 2), systems::universal(3)] {
            for f in simple_frames(&d) {
                let positive: Vec<(ChainPosition, Root)> = dihedral_roots(&d, &f, 0, 5)
                    .unwrap()
                    .into_iter()
                    .filter(|(p, _)| p.is_positive())
                    .collect();
                for (p, x) in &positive {
                    for (q, y) in &positive {
                        let expected = p.family == q.family && p.index >= q.index;
                        assert_eq!(dominates(&d, x, y).unwrap(), expected, "{p} vs {q}");
                    }
                }
            }
        }
    }

    #[test]
    fn at_most_two_canonical_roots() {
        for d in [systems::tilde_a1(), systems::hyperbolic_rank2(3, 2), systems::universal(3), systems::tilde_a2()] {
            for f in test_frames(&d) {
                assert!(find_three_canonical(&d, &f, 6).unwrap().is_none());
            }
        }
    }
}
