//! Coxeter data: generator labels, bond orders, infinite-bond weights and
//! the Gram matrix of the bilinear form on the simple roots.
//!
//! The simple roots are always taken to be a basis of the ambient space, so
//! a root is stored by its coefficients over them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::{classify, Backend, Scalar, ScalarClass, DEFAULT_TOLERANCE};

/// Default upper bound on the number of generators.
pub const DEFAULT_RANK_CAP: usize = 10;

/// Order `m` of the product of two generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BondOrder {
    Finite(u32),
    Infinite,
}

impl fmt::Display for BondOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BondOrder::Finite(m) => write!(f, "{m}"),
            BondOrder::Infinite => f.write_str("inf"),
        }
    }
}

/// Backend selection for a datum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ModeChoice {
    /// Exact whenever every Gram entry is rational.
    #[default]
    Auto,
    Exact,
    Approx,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericOptions {
    pub mode: ModeChoice,
    /// Tolerance for the floating-point backend; ignored in exact mode.
    pub tolerance: f64,
    pub rank_cap: usize,
}

impl Default for NumericOptions {
    fn default() -> Self {
        NumericOptions {
            mode: ModeChoice::Auto,
            tolerance: DEFAULT_TOLERANCE,
            rank_cap: DEFAULT_RANK_CAP,
        }
    }
}

/// A validated Coxeter datum. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CoxeterDatum {
    labels: Vec<String>,
    bonds: Vec<Vec<BondOrder>>,
    /// Weights of infinite bonds, keyed by `(i, j)` with `i < j`.
    weights: BTreeMap<(usize, usize), BigRational>,
    gram: Vec<Vec<Scalar>>,
    backend: Backend,
    eps: f64,
}

/// Incremental construction of a datum; `build` validates.
#[derive(Debug, Clone)]
pub struct DatumBuilder {
    labels: Vec<String>,
    declared: Vec<(usize, usize, BondOrder, Option<BigRational>)>,
    options: NumericOptions,
}

impl DatumBuilder {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Self {
        DatumBuilder {
            labels: labels.into_iter().map(Into::into).collect(),
            declared: Vec::new(),
            options: NumericOptions::default(),
        }
    }

    pub fn options(mut self, options: NumericOptions) -> Self {
        self.options = options;
        self
    }

    /// Finite bond of order `m` between generators `i` and `j`.
    pub fn bond(mut self, i: usize, j: usize, m: u32) -> Self {
        self.declared.push((i, j, BondOrder::Finite(m), None));
        self
    }

    /// Infinite bond with weight `−1`.
    pub fn infinite(mut self, i: usize, j: usize) -> Self {
        self.declared.push((i, j, BondOrder::Infinite, None));
        self
    }

    /// Infinite bond with the given weight (`≤ −1`).
    pub fn weighted(mut self, i: usize, j: usize, weight: BigRational) -> Self {
        self.declared.push((i, j, BondOrder::Infinite, Some(weight)));
        self
    }

    pub fn build(self) -> Result<CoxeterDatum> {
        let rank = self.labels.len();
        if rank == 0 {
            return Err(Error::Validation("a datum needs at least one generator".into()));
        }
        if rank > self.options.rank_cap {
            return Err(Error::Validation(format!(
                "rank {rank} exceeds the configured cap {}",
                self.options.rank_cap
            )));
        }
        for (k, label) in self.labels.iter().enumerate() {
            if label.is_empty() {
                return Err(Error::Validation("empty generator label".into()));
            }
            if self.labels[..k].contains(label) {
                return Err(Error::Validation(format!("duplicate label {label:?}")));
            }
        }
        if !(self.options.tolerance >= 0.0) {
            return Err(Error::Validation("tolerance must be non-negative".into()));
        }

        let mut bonds = vec![vec![BondOrder::Finite(2); rank]; rank];
        for (i, row) in bonds.iter_mut().enumerate() {
            row[i] = BondOrder::Finite(1);
        }
        let mut weights = BTreeMap::new();
        let mut seen: BTreeMap<(usize, usize), (BondOrder, Option<BigRational>)> = BTreeMap::new();
        let minus_one = -BigRational::one();
        for (i, j, m, weight) in self.declared {
            for idx in [i, j] {
                if idx >= rank {
                    return Err(Error::Index { index: idx, rank });
                }
            }
            if i == j {
                return Err(Error::Validation(format!(
                    "bond declared between {:?} and itself",
                    self.labels[i]
                )));
            }
            if let BondOrder::Finite(order) = m {
                if order < 2 {
                    return Err(Error::Validation(format!(
                        "bond order {order} between {:?} and {:?} is below 2",
                        self.labels[i], self.labels[j]
                    )));
                }
                if weight.is_some() {
                    return Err(Error::Validation(format!(
                        "weight given for finite bond between {:?} and {:?}",
                        self.labels[i], self.labels[j]
                    )));
                }
            }
            let weight = match m {
                BondOrder::Infinite => {
                    let w = weight.unwrap_or_else(|| minus_one.clone());
                    if w > minus_one {
                        return Err(Error::Validation(format!(
                            "infinite bond between {:?} and {:?} has weight {} > -1",
                            self.labels[i],
                            self.labels[j],
                            Scalar::Exact(w.into())
                        )));
                    }
                    Some(w)
                }
                BondOrder::Finite(_) => None,
            };
            let key = (i.min(j), i.max(j));
            if let Some(prev) = seen.get(&key) {
                if prev != &(m, weight.clone()) {
                    return Err(Error::Validation(format!(
                        "conflicting bond declarations between {:?} and {:?}",
                        self.labels[key.0], self.labels[key.1]
                    )));
                }
                continue;
            }
            seen.insert(key, (m, weight.clone()));
            bonds[i][j] = m;
            bonds[j][i] = m;
            if let Some(w) = weight {
                weights.insert(key, w);
            }
        }

        let rational = bonds
            .iter()
            .flatten()
            .all(|m| matches!(m, BondOrder::Finite(1..=3) | BondOrder::Infinite));
        let backend = match self.options.mode {
            ModeChoice::Auto if rational => Backend::Exact,
            ModeChoice::Auto | ModeChoice::Approx => Backend::Approx,
            ModeChoice::Exact if rational => Backend::Exact,
            ModeChoice::Exact => {
                return Err(Error::Validation(
                    "exact mode requested but some bond order is >= 4 (irrational Gram entry)"
                        .into(),
                ))
            }
        };
        let eps = match backend {
            Backend::Exact => 0.0,
            Backend::Approx => self.options.tolerance,
        };

        let mut gram = vec![vec![Scalar::zero(backend); rank]; rank];
        for i in 0..rank {
            for j in 0..rank {
                gram[i][j] = match bonds[i][j] {
                    BondOrder::Finite(m) => finite_bond_entry(m, backend),
                    BondOrder::Infinite => {
                        Scalar::Exact(weights[&(i.min(j), i.max(j))].clone().into()).to_backend(backend)?
                    }
                };
            }
        }
        let datum = CoxeterDatum { labels: self.labels, bonds, weights, gram, backend, eps };
        datum.check_gram()?;
        Ok(datum)
    }
}

/// `−cos(π/m)`, exact for `m ≤ 3`.
fn finite_bond_entry(m: u32, backend: Backend) -> Scalar {
    match (m, backend) {
        (1, _) => Scalar::one(backend),
        (2, _) => Scalar::zero(backend),
        (3, Backend::Exact) => Scalar::from_ratio(-1, 2),
        (3, Backend::Approx) => Scalar::Approx(-0.5),
        (m, _) => Scalar::Approx(-(std::f64::consts::PI / m as f64).cos()),
    }
}

impl CoxeterDatum {
    pub fn builder<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> DatumBuilder {
        DatumBuilder::new(labels)
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    /// Classification tolerance: 0 in exact mode.
    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn gram(&self) -> &[Vec<Scalar>] {
        &self.gram
    }

    pub fn bond(&self, i: usize, j: usize) -> Result<BondOrder> {
        self.check_index(i)?;
        self.check_index(j)?;
        Ok(self.bonds[i][j])
    }

    /// Weight of the infinite bond between `i` and `j`, if there is one.
    pub fn weight(&self, i: usize, j: usize) -> Option<&BigRational> {
        self.weights.get(&(i.min(j), i.max(j)))
    }

    /// Entry `B_ij` of the Gram matrix.
    pub fn gram_entry(&self, i: usize, j: usize) -> Result<&Scalar> {
        self.check_index(i)?;
        self.check_index(j)?;
        Ok(&self.gram[i][j])
    }

    pub fn classify(&self, t: &Scalar) -> ScalarClass {
        classify(t, self.eps)
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero(self.backend)
    }

    pub fn one(&self) -> Scalar {
        Scalar::one(self.backend)
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.rank() {
            Ok(())
        } else {
            Err(Error::Index { index: i, rank: self.rank() })
        }
    }

    fn check_gram(&self) -> Result<()> {
        let n = self.rank();
        for i in 0..n {
            if self.classify(&(&self.gram[i][i] - &self.one())) != ScalarClass::Zero {
                return Err(Error::Validation(format!("Gram diagonal at {i} is not 1")));
            }
            for j in 0..n {
                if !self.gram[i][j].approx_eq(&self.gram[j][i], self.eps) {
                    return Err(Error::Validation(format!("Gram matrix asymmetric at ({i},{j})")));
                }
                if i != j && self.bonds[i][j] == BondOrder::Infinite {
                    let c = self.classify(&self.gram[i][j]);
                    if !c.at_most_minus_one() {
                        return Err(Error::Validation(format!(
                            "infinite bond ({i},{j}) has Gram entry above -1"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Parses the JSON datum format with default numeric options.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with(text, NumericOptions::default())
    }

    pub fn parse_with(text: &str, options: NumericOptions) -> Result<Self> {
        let file: DatumFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut builder = DatumBuilder::new(file.labels.clone()).options(options);
        let lookup = |label: &str| {
            file.labels
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| Error::Validation(format!("bond references unknown label {label:?}")))
        };
        for bond in &file.bonds {
            let i = lookup(&bond.i)?;
            let j = lookup(&bond.j)?;
            let m = parse_order(&bond.m)?;
            let weight = match &bond.weight {
                None | Some(Value::Null) => None,
                Some(Value::String(s)) => Some(Scalar::parse_rational(s)?),
                Some(Value::Number(n)) => Some(Scalar::parse_rational(&n.to_string())?),
                Some(other) => return Err(Error::Parse(format!("bad weight {other}"))),
            };
            builder.declared.push((i, j, m, weight));
        }
        builder.build()
    }

    /// Serializes to the JSON datum format. Only non-commuting pairs are
    /// listed; infinite bonds always carry their weight.
    pub fn to_json(&self) -> String {
        let mut bonds = Vec::new();
        for i in 0..self.rank() {
            for j in i + 1..self.rank() {
                let m = self.bonds[i][j];
                if m == BondOrder::Finite(2) {
                    continue;
                }
                bonds.push(BondDecl {
                    i: self.labels[i].clone(),
                    j: self.labels[j].clone(),
                    m: match m {
                        BondOrder::Finite(m) => Value::from(m),
                        BondOrder::Infinite => Value::from("inf"),
                    },
                    weight: self
                        .weight(i, j)
                        .map(|w| Value::from(Scalar::Exact(w.clone().into()).to_string())),
                });
            }
        }
        let file = DatumFile { labels: self.labels.clone(), bonds };
        serde_json::to_string_pretty(&file).expect("datum serializes")
    }

    /// Whether every pair of generators is joined by an infinite bond of
    /// weight −1.
    pub fn is_universal(&self) -> bool {
        (0..self.rank()).all(|i| {
            (0..self.rank()).all(|j| {
                i == j || self.weight(i, j).is_some_and(|w| *w == -BigRational::one())
            })
        })
    }
}

fn parse_order(value: &Value) -> Result<BondOrder> {
    match value {
        Value::Number(n) => {
            let m = n
                .as_u64()
                .ok_or_else(|| Error::Validation(format!("bond order {n} is not a positive integer")))?;
            Ok(BondOrder::Finite(u32::try_from(m).map_err(|_| {
                Error::Validation(format!("bond order {m} too large"))
            })?))
        }
        Value::String(s) => match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" | "oo" => Ok(BondOrder::Infinite),
            other => other
                .parse::<u32>()
                .map(BondOrder::Finite)
                .map_err(|_| Error::Parse(format!("bad bond order {s:?}"))),
        },
        other => Err(Error::Parse(format!("bad bond order {other}"))),
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatumFile {
    labels: Vec<String>,
    #[serde(default)]
    bonds: Vec<BondDecl>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BondDecl {
    i: String,
    j: String,
    m: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weight: Option<Value>,
}

/// Small named data used throughout tests, examples and the CLI.
pub mod systems {
    use super::*;

    fn labels(rank: usize) -> Vec<String> {
        const NAMES: [&str; 10] = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j"];
        NAMES[..rank].iter().map(|s| s.to_string()).collect()
    }

    /// Finite type `A_n`: a path with bonds of order 3.
    pub fn a(n: usize) -> CoxeterDatum {
        (0..n.saturating_sub(1))
            .fold(CoxeterDatum::builder(labels(n)), |b, i| b.bond(i, i + 1, 3))
            .build()
            .expect("A_n is a valid datum")
    }

    /// Affine `Ã_1`: two generators joined by an infinite bond of weight −1.
    pub fn tilde_a1() -> CoxeterDatum {
        CoxeterDatum::builder(labels(2)).infinite(0, 1).build().expect("valid")
    }

    /// Affine `Ã_2`: a triangle of order-3 bonds.
    pub fn tilde_a2() -> CoxeterDatum {
        CoxeterDatum::builder(labels(3))
            .bond(0, 1, 3)
            .bond(1, 2, 3)
            .bond(0, 2, 3)
            .build()
            .expect("valid")
    }

    /// Universal Coxeter group of the given rank: all bonds infinite, weight −1.
    pub fn universal(rank: usize) -> CoxeterDatum {
        let mut b = CoxeterDatum::builder(labels(rank));
        for i in 0..rank {
            for j in i + 1..rank {
                b = b.infinite(i, j);
            }
        }
        b.build().expect("valid")
    }

    /// Rank-2 infinite dihedral datum with `(a, b) = −q`.
    pub fn hyperbolic_rank2(q_num: i64, q_den: i64) -> CoxeterDatum {
        let w = BigRational::new(BigInt::from(-q_num), BigInt::from(q_den));
        CoxeterDatum::builder(labels(2)).weighted(0, 1, w).build().expect("valid")
    }

    /// Non-simply-laced `B_n`, forcing the floating-point backend.
    pub fn b(n: usize) -> CoxeterDatum {
        let mut builder = CoxeterDatum::builder(labels(n));
        for i in 0..n.saturating_sub(1) {
            builder = builder.bond(i, i + 1, if i + 2 == n { 4 } else { 3 });
        }
        builder.build().expect("valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    const TILDE_A1: &str = r#"{"labels":["a","b"],"bonds":[{"i":"a","j":"b","m":"inf"}]}"#;

    fn ex(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    #[test]
    fn parses_tilde_a1() {
        let d = CoxeterDatum::parse(TILDE_A1).unwrap();
        assert_eq!(d.backend(), Backend::Exact);
        assert_eq!(d.gram_entry(0, 1).unwrap(), &ex(-1, 1));
        assert_eq!(d.gram_entry(1, 0).unwrap(), &ex(-1, 1));
        assert_eq!(d.gram_entry(0, 0).unwrap(), &ex(1, 1));
    }

    #[test]
    fn parses_a2() {
        let d = CoxeterDatum::parse(r#"{"labels":["a","b"],"bonds":[{"i":"a","j":"b","m":3}]}"#)
            .unwrap();
        assert_eq!(d.gram(), &[vec![ex(1, 1), ex(-1, 2)], vec![ex(-1, 2), ex(1, 1)]]);
    }

    #[test]
    fn tilde_a2_entry() {
        let d = systems::tilde_a2();
        assert_eq!(d.gram_entry(0, 2).unwrap(), &ex(-1, 2));
        assert!(matches!(d.gram_entry(0, 3), Err(Error::Index { index: 3, rank: 3 })));
    }

    #[test]
    fn unlisted_pairs_commute() {
        let d = CoxeterDatum::parse(r#"{"labels":["a","b","c"],"bonds":[{"i":"a","j":"b","m":3}]}"#)
            .unwrap();
        assert_eq!(d.gram_entry(0, 2).unwrap(), &ex(0, 1));
        assert_eq!(d.bond(1, 2).unwrap(), BondOrder::Finite(2));
    }

    #[test]
    fn rejects_weight_above_minus_one() {
        let text = r#"{"labels":["a","b"],"bonds":[{"i":"a","j":"b","m":"inf","weight":"-0.5"}]}"#;
        assert!(matches!(CoxeterDatum::parse(text), Err(Error::Validation(_))));
    }

    #[test]
    fn rejects_bad_inputs() {
        let cases = [
            r#"{"labels":["a","a"]}"#,
            r#"{"labels":["a","b"],"bonds":[{"i":"a","j":"b","m":1}]}"#,
            r#"{"labels":["a","b"],"bonds":[{"i":"a","j":"b","m":3},{"i":"b","j":"a","m":4}]}"#,
            r#"{"labels":["a","b"],"bonds":[{"i":"a","j":"z","m":3}]}"#,
            r#"{"labels":["a","b"],"bonds":[{"i":"a","j":"a","m":3}]}"#,
            r#"{"labels":["a","b"],"bonds":[{"i":"a","j":"b","m":3,"weight":"-2"}]}"#,
            r#"{"labels":[]}"#,
        ];
        for text in cases {
            assert!(
                matches!(CoxeterDatum::parse(text), Err(Error::Validation(_))),
                "accepted {text}"
            );
        }
        assert!(matches!(CoxeterDatum::parse("{not json"), Err(Error::Parse(_))));
        assert!(matches!(
            CoxeterDatum::parse(r#"{"labels":["a"],"extra":1}"#),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn symmetric_duplicates_are_accepted() {
        let text = r#"{"labels":["a","b"],"bonds":[{"i":"a","j":"b","m":"inf","weight":"-3/2"},{"i":"b","j":"a","m":"inf","weight":"-1.5"}]}"#;
        let d = CoxeterDatum::parse(text).unwrap();
        assert_eq!(d.gram_entry(0, 1).unwrap(), &ex(-3, 2));
    }

    #[test]
    fn rank_cap_is_enforced() {
        let opts = NumericOptions { rank_cap: 2, ..Default::default() };
        let text = r#"{"labels":["a","b","c"]}"#;
        assert!(matches!(CoxeterDatum::parse_with(text, opts), Err(Error::Validation(_))));
    }

    #[test]
    fn higher_orders_force_approx() {
        let d = systems::b(3);
        assert_eq!(d.backend(), Backend::Approx);
        let g = d.gram_entry(1, 2).unwrap().to_f64();
        assert!((g + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        let text = r#"{"labels":["a","b"],"bonds":[{"i":"a","j":"b","m":5}]}"#;
        let opts = NumericOptions { mode: ModeChoice::Exact, ..Default::default() };
        assert!(CoxeterDatum::parse_with(text, opts).is_err());
    }

    #[test]
    fn json_round_trip() {
        for d in [
            systems::tilde_a1(),
            systems::tilde_a2(),
            systems::universal(4),
            systems::hyperbolic_rank2(3, 2),
            systems::a(3),
            systems::b(3),
        ] {
            let again = CoxeterDatum::parse(&d.to_json()).unwrap();
            assert_eq!(again, d);
            assert_eq!(CoxeterDatum::parse(&again.to_json()).unwrap(), again);
        }
    }

    #[test]
    fn universal_detection() {
        assert!(systems::universal(3).is_universal());
        assert!(!systems::tilde_a2().is_universal());
        assert!(!systems::hyperbolic_rank2(3, 2).is_universal());
    }

    #[test]
    fn weight_sign_check_uses_negative() {
        // -1 itself is allowed
        let w = BigRational::new(BigInt::from(-1), BigInt::from(1));
        assert!(CoxeterDatum::builder(["a", "b"]).weighted(0, 1, w.clone()).build().is_ok());
        assert!(CoxeterDatum::builder(["a", "b"]).weighted(0, 1, w.abs()).build().is_err());
    }
}
