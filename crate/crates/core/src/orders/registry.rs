use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constructions::{self, is_prime};
use crate::error::{Error, Result};
use crate::exact::{is_hadamard, SignMatrix};

/// Every multiple of 4 up to this order is known to be a Hadamard order.
pub const KNOWN_ORDERS_LIMIT: usize = 664;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegistryMode {
    /// Orders reachable from Sylvester, Paley I/II (prime fields), Kronecker
    /// products and loaded matrices.
    Constructive,
    /// Constructive orders plus every multiple of 4 up to 664.
    KnownOrders,
    /// Every multiple of 4 (the Hadamard conjecture).
    Conjecture,
}

impl RegistryMode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Constructive => "constructive",
            Self::KnownOrders => "known-orders",
            Self::Conjecture => "conjecture",
        }
    }
}

impl fmt::Display for RegistryMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RegistryMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constructive" => Ok(Self::Constructive),
            "known-orders" | "known" => Ok(Self::KnownOrders),
            "conjecture" => Ok(Self::Conjecture),
            other => Err(Error::Parse(format!("unknown registry mode {other:?}"))),
        }
    }
}

/// How an order is realized.
///
/// Variants are listed in preference order: when several constructions
/// reach the same order the earliest one is recorded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Realization {
    Sylvester,
    Paley1(u64),
    Paley2(u64),
    Kronecker(usize, usize),
    Loaded(String),
    Assumed,
}

impl Realization {
    pub fn has_matrix(&self) -> bool {
        !matches!(self, Self::Assumed)
    }
}

impl fmt::Display for Realization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Sylvester => f.write_str("sylvester"),
            Self::Paley1(p) => write!(f, "paley1({p})"),
            Self::Paley2(p) => write!(f, "paley2({p})"),
            Self::Kronecker(a, b) => write!(f, "kronecker({a},{b})"),
            Self::Loaded(file) => write!(f, "loaded({file})"),
            Self::Assumed => f.write_str("assumed"),
        }
    }
}

impl Serialize for Realization {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The set `H` of Hadamard orders up to `cap`, under one assumption mode.
///
/// Built once, then read-only apart from [`OrderRegistry::load_matrix`].
#[derive(Clone, Debug)]
pub struct OrderRegistry {
    cap: usize,
    mode: RegistryMode,
    tags: BTreeMap<usize, Realization>,
    loaded: BTreeMap<usize, SignMatrix>,
}

#[derive(Serialize)]
struct OrderJson<'a> {
    order: usize,
    tag: &'a Realization,
}

#[derive(Serialize)]
struct RegistryJson<'a> {
    cap: usize,
    mode: RegistryMode,
    orders: Vec<OrderJson<'a>>,
}

fn constructive_tags(cap: usize) -> BTreeMap<usize, Realization> {
    let mut tags: BTreeMap<usize, Realization> = BTreeMap::new();
    for n in 1..=cap {
        let tag = if n.is_power_of_two() {
            Some(Realization::Sylvester)
        } else if n % 4 == 0 && (n as u64 - 1) % 4 == 3 && is_prime(n as u64 - 1) {
            Some(Realization::Paley1(n as u64 - 1))
        } else if n % 4 == 0 && (n as u64 / 2 - 1) % 4 == 1 && is_prime(n as u64 / 2 - 1) {
            Some(Realization::Paley2(n as u64 / 2 - 1))
        } else {
            (2..n)
                .take_while(|a| a * a <= n)
                .find(|&a| n % a == 0 && tags.contains_key(&a) && tags.contains_key(&(n / a)))
                .map(|a| Realization::Kronecker(a, n / a))
        };
        if let Some(t) = tag {
            tags.insert(n, t);
        }
    }
    tags
}

impl OrderRegistry {
    pub fn build(cap: usize, mode: RegistryMode) -> Result<Self> {
        if cap < 2 {
            return Err(Error::Precondition(format!("registry cap must be >= 2, got {cap}")));
        }
        let mut tags = constructive_tags(cap);
        let assumed_limit = match mode {
            RegistryMode::Constructive => 0,
            RegistryMode::KnownOrders => cap.min(KNOWN_ORDERS_LIMIT),
            RegistryMode::Conjecture => cap,
        };
        for n in (4..=assumed_limit).step_by(4) {
            tags.entry(n).or_insert(Realization::Assumed);
        }
        Ok(Self { cap, mode, tags, loaded: BTreeMap::new() })
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn mode(&self) -> RegistryMode {
        self.mode
    }

    pub fn contains(&self, n: usize) -> bool {
        self.tags.contains_key(&n)
    }

    pub fn orders(&self) -> impl Iterator<Item = usize> + '_ {
        self.tags.keys().copied()
    }

    pub fn tag(&self, n: usize) -> Option<&Realization> {
        self.tags.get(&n)
    }

    /// True if `n` is in the registry with a constructible or loaded matrix.
    pub fn has_matrix(&self, n: usize) -> bool {
        self.tags.get(&n).is_some_and(Realization::has_matrix)
    }

    /// Smallest order strictly greater than `n`.
    pub fn next_above(&self, n: usize) -> Option<usize> {
        self.tags.range(n + 1..).next().map(|(&k, _)| k)
    }

    /// Largest order strictly less than `n`.
    pub fn next_below(&self, n: usize) -> Option<usize> {
        self.tags.range(..n).next_back().map(|(&k, _)| k)
    }

    /// Replays the realization tag of `n` into an explicit Hadamard matrix.
    pub fn realize(&self, n: usize) -> Result<SignMatrix> {
        match self.tags.get(&n) {
            None | Some(Realization::Assumed) => Err(Error::NoMatrix(n)),
            Some(Realization::Sylvester) => constructions::sylvester(n.trailing_zeros(), usize::MAX),
            Some(Realization::Paley1(p)) => constructions::paley_one(*p),
            Some(Realization::Paley2(p)) => constructions::paley_two(*p),
            Some(Realization::Kronecker(a, b)) => {
                let (a, b) = (self.realize(*a)?, self.realize(*b)?);
                Ok(constructions::kronecker_product(&a, &b))
            }
            Some(Realization::Loaded(_)) => {
                self.loaded.get(&n).cloned().ok_or(Error::NoMatrix(n))
            }
        }
    }

    /// Adds a Hadamard matrix from the matrix text format under `label`.
    /// Rejected matrices leave the registry unchanged.
    pub fn load_matrix_text(&mut self, text: &str, label: &str) -> Result<usize> {
        let m = SignMatrix::parse(text)?;
        if !is_hadamard(&m) {
            return Err(Error::NotHadamard);
        }
        let n = m.order();
        if n > self.cap {
            return Err(Error::CapExceeded { order: n, cap: self.cap });
        }
        self.tags.insert(n, Realization::Loaded(label.to_owned()));
        self.loaded.insert(n, m);
        Ok(n)
    }

    pub fn load_matrix(&mut self, path: &Path) -> Result<usize> {
        let text = std::fs::read_to_string(path)?;
        let label = path.file_name().map_or_else(|| path.display().to_string(), |f| f.to_string_lossy().into_owned());
        self.load_matrix_text(&text, &label)
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = RegistryJson {
            cap: self.cap,
            mode: self.mode,
            orders: self.tags.iter().map(|(&order, tag)| OrderJson { order, tag }).collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }
}

/// Distance from `n` to the nearest registry order, with the orders that
/// attain it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Delta {
    pub n: usize,
    pub delta: usize,
    /// `n - delta`, when it is an order.
    pub below: Option<usize>,
    /// `n + delta`, when it is an order.
    pub above: Option<usize>,
}

impl Delta {
    /// The designated nearest order; ties go to the smaller one.
    pub fn primary(&self) -> usize {
        self.below.or(self.above).expect("at least one side attains delta")
    }
}

/// `delta(n) = min |n - h|` over registry orders `h`.
///
/// Requires `cap >= 2n` so the minimum cannot be clipped by the cap.
pub fn delta(n: usize, reg: &OrderRegistry) -> Result<Delta> {
    if n == 0 {
        return Err(Error::Precondition("delta needs n >= 1".into()));
    }
    if reg.cap() < 2 * n {
        return Err(Error::RegistryTooSmall { n, cap: reg.cap(), needed: 2 * n });
    }
    if reg.contains(n) {
        return Ok(Delta { n, delta: 0, below: Some(n), above: Some(n) });
    }
    let lo = reg.next_below(n);
    let hi = reg.next_above(n);
    let d_lo = lo.map(|h| n - h);
    let d_hi = hi.map(|h| h - n);
    let delta = match (d_lo, d_hi) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (None, None) => return Err(Error::Invariant("registry has no orders".into())),
    };
    Ok(Delta {
        n,
        delta,
        below: lo.filter(|_| d_lo == Some(delta)),
        above: hi.filter(|_| d_hi == Some(delta)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orders(reg: &OrderRegistry) -> Vec<usize> {
        reg.orders().collect()
    }

    #[test]
    fn constructive_small() {
        let reg = OrderRegistry::build(16, RegistryMode::Constructive).unwrap();
        assert_eq!(orders(&reg), vec![1, 2, 4, 8, 12, 16]);
        assert_eq!(reg.tag(12), Some(&Realization::Paley1(11)));
        assert_eq!(reg.tag(8), Some(&Realization::Sylvester));
    }

    #[test]
    fn conjecture_small() {
        let reg = OrderRegistry::build(12, RegistryMode::Conjecture).unwrap();
        assert_eq!(orders(&reg), vec![1, 2, 4, 8, 12]);
    }

    #[test]
    fn paley_two_reaches_28() {
        let reg = OrderRegistry::build(28, RegistryMode::Constructive).unwrap();
        assert!(reg.contains(28));
        assert_eq!(reg.tag(28), Some(&Realization::Paley2(13)));
    }

    #[test]
    fn constructive_gaps_below_100() {
        let reg = OrderRegistry::build(100, RegistryMode::Constructive).unwrap();
        let missing: Vec<usize> = (1..=25).map(|k| 4 * k).filter(|&n| !reg.contains(n)).collect();
        assert_eq!(missing, vec![52, 92, 100]);
    }

    #[test]
    fn invariants_hold() {
        for mode in [RegistryMode::Constructive, RegistryMode::KnownOrders, RegistryMode::Conjecture] {
            let reg = OrderRegistry::build(400, mode).unwrap();
            assert!(reg.contains(1) && reg.contains(2));
            assert!(reg.orders().all(|n| n <= 2 || n % 4 == 0));
            if mode == RegistryMode::Constructive {
                assert!(reg.orders().all(|n| reg.has_matrix(n)));
            }
            if mode == RegistryMode::Conjecture {
                let expected: Vec<usize> = [1, 2].into_iter().chain((4..=400).step_by(4)).collect();
                assert_eq!(orders(&reg), expected);
            }
        }
    }

    #[test]
    fn modes_are_nested() {
        let c = OrderRegistry::build(664, RegistryMode::Constructive).unwrap();
        let k = OrderRegistry::build(664, RegistryMode::KnownOrders).unwrap();
        let j = OrderRegistry::build(664, RegistryMode::Conjecture).unwrap();
        assert!(c.orders().all(|n| k.contains(n)));
        assert!(k.orders().all(|n| j.contains(n)));
        assert_eq!(orders(&k), orders(&j));
        let k2 = OrderRegistry::build(1000, RegistryMode::KnownOrders).unwrap();
        assert!(!k2.contains(668) || k2.has_matrix(668));
    }

    #[test]
    fn every_tag_replays_to_a_hadamard_matrix() {
        let reg = OrderRegistry::build(200, RegistryMode::Constructive).unwrap();
        for n in reg.orders() {
            let h = reg.realize(n).unwrap();
            assert_eq!(h.order(), n);
            assert!(is_hadamard(&h), "order {n} tag {}", reg.tag(n).unwrap());
        }
    }

    #[test]
    fn assumed_orders_have_no_matrix() {
        let reg = OrderRegistry::build(60, RegistryMode::Conjecture).unwrap();
        assert!(reg.contains(52));
        assert!(!reg.has_matrix(52));
        assert!(matches!(reg.realize(52), Err(Error::NoMatrix(52))));
    }

    #[test]
    fn delta_examples() {
        let reg = OrderRegistry::build(64, RegistryMode::Constructive).unwrap();
        assert_eq!(delta(12, &reg).unwrap().delta, 0);
        let d5 = delta(5, &reg).unwrap();
        assert_eq!((d5.delta, d5.primary()), (1, 4));
        let d6 = delta(6, &reg).unwrap();
        assert_eq!((d6.delta, d6.below, d6.above, d6.primary()), (2, Some(4), Some(8), 4));
        assert!(matches!(delta(40, &reg), Err(Error::RegistryTooSmall { .. })));
    }

    #[test]
    fn load_matrix_examples() {
        let mut reg = OrderRegistry::build(40, RegistryMode::Constructive).unwrap();
        let h20 = crate::constructions::paley_one(19).unwrap();
        let mut shuffled = h20.clone();
        shuffled.negate_row(3);
        assert_eq!(reg.load_matrix_text(&shuffled.to_text(), "h20.txt").unwrap(), 20);
        assert_eq!(reg.tag(20), Some(&Realization::Loaded("h20.txt".into())));
        assert_eq!(reg.realize(20).unwrap(), shuffled);

        let before: Vec<usize> = orders(&reg);
        assert!(matches!(
            reg.load_matrix_text(&SignMatrix::all_ones(4).to_text(), "ones"),
            Err(Error::NotHadamard)
        ));
        assert!(matches!(reg.load_matrix_text("4\n+++\n", "bad"), Err(Error::Parse(_))));
        assert_eq!(orders(&reg), before);
        assert_eq!(reg.tag(4), Some(&Realization::Sylvester));
    }

    #[test]
    fn json_export() {
        let reg = OrderRegistry::build(12, RegistryMode::Constructive).unwrap();
        let v: serde_json::Value = serde_json::from_str(&reg.to_json().unwrap()).unwrap();
        assert_eq!(v["cap"], 12);
        assert_eq!(v["mode"], "constructive");
        assert_eq!(v["orders"][4]["order"], 12);
        assert_eq!(v["orders"][4]["tag"], "paley1(11)");
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("known-orders".parse::<RegistryMode>().unwrap(), RegistryMode::KnownOrders);
        assert!("bogus".parse::<RegistryMode>().is_err());
    }
}
