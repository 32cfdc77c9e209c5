//! Ground truth at tiny orders: exhaustive `D(n)` and stored reference
//! values with provenance.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{bound_report, tolerance, EntryKind};
use crate::error::{Error, Result};
use crate::exact::ln_abs;
use crate::orders::{OrderRegistry, RegistryMode};

/// Largest `n` accepted by [`brute_force_d`].
pub const ORACLE_MAX_ORDER: usize = 6;

/// `D(13)`, the largest stored reference value.
pub const D13: u64 = 14_929_920;

const MAX_BITS: usize = ORACLE_MAX_ORDER - 1;

/// Determinant of a `{0,1}` matrix of order `m <= 5` packed row-major into
/// the low `m*m` bits of `mask`.
fn packed_det(mask: u32, m: usize) -> i64 {
    let mut a = [[0i64; MAX_BITS]; MAX_BITS];
    for (i, row) in a.iter_mut().enumerate().take(m) {
        for (j, x) in row.iter_mut().enumerate().take(m) {
            *x = ((mask >> (i * m + j)) & 1) as i64;
        }
    }
    let mut prev = 1i64;
    let mut sign = 1i64;
    for k in 0..m {
        let Some(p) = (k..m).find(|&i| a[i][k] != 0) else { return 0 };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..m {
            for j in k + 1..m {
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[m - 1][m - 1]
}

/// Maximal `|det|` over all `n x n` `{+1,-1}` matrices, by enumerating
/// every `{0,1}` matrix of order `n-1` and scaling by `2^(n-1)`.
///
/// Parallel over the first row; the result is a pure maximum.
pub fn brute_force_d(n: usize) -> Result<BigInt> {
    if n == 0 || n > ORACLE_MAX_ORDER {
        return Err(Error::Precondition(format!("brute force needs 1 <= n <= {ORACLE_MAX_ORDER}, got {n}")));
    }
    let m = n - 1;
    if m == 0 {
        return Ok(BigInt::from(1));
    }
    let rest = m * (m - 1);
    let best = (0u32..1 << m)
        .into_par_iter()
        .map(|first| {
            (0u32..1 << rest)
                .map(|tail| packed_det(first | (tail << m), m).abs())
                .max()
                .unwrap_or(0)
        })
        .max()
        .unwrap_or(0);
    Ok(BigInt::from(best) << m)
}

fn cached_oracle(n: usize) -> Option<BigInt> {
    static CACHE: [OnceLock<BigInt>; ORACLE_MAX_ORDER] = [const { OnceLock::new() }; ORACLE_MAX_ORDER];
    let slot = CACHE.get(n.checked_sub(1)?)?;
    Some(slot.get_or_init(|| brute_force_d(n).expect("order within oracle range")).clone())
}

/// One stored value of `D(n)` with its provenance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceEntry {
    pub n: usize,
    #[serde(rename = "D", with = "decimal")]
    pub d: BigInt,
    pub source: String,
}

mod decimal {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.trim().parse().map_err(|_| D::Error::custom(format!("not an integer: {s:?}")))
    }
}

/// Reference values of `D(n)`: the oracle for `n <= 6`, `D(13)`, and
/// anything ingested from CSV.
#[derive(Clone, Debug, Default)]
pub struct ReferenceTable {
    entries: BTreeMap<usize, ReferenceEntry>,
}

impl ReferenceTable {
    /// The built-in table, holding `D(13)` only. Oracle values are
    /// computed on demand by [`reference_d`].
    pub fn builtin() -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(
            13,
            ReferenceEntry { n: 13, d: BigInt::from(D13), source: "Raghavarao (1959)".into() },
        );
        Self { entries }
    }

    pub fn get(&self, n: usize) -> Option<&ReferenceEntry> {
        self.entries.get(&n)
    }

    pub fn entries(&self) -> impl Iterator<Item = &ReferenceEntry> {
        self.entries.values()
    }

    /// Checks `entry` against every lower bound for its order and adds it.
    pub fn insert(&mut self, entry: ReferenceEntry) -> Result<()> {
        validate(&entry)?;
        self.entries.insert(entry.n, entry);
        Ok(())
    }

    /// Ingests CSV with header `n,D,source`. The whole file is rejected if
    /// any row fails validation.
    pub fn ingest_csv<R: Read>(&mut self, reader: R) -> Result<usize> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut rows = Vec::new();
        for row in rdr.deserialize::<ReferenceEntry>() {
            let row = row?;
            validate(&row)?;
            rows.push(row);
        }
        let count = rows.len();
        for row in rows {
            self.entries.insert(row.n, row);
        }
        Ok(count)
    }

    /// Builtin values plus the rows of a CSV file.
    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut table = Self::builtin();
        table.ingest_csv(reader)?;
        Ok(table)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        write_entries(self.entries.values(), writer)
    }
}

fn validate(e: &ReferenceEntry) -> Result<()> {
    let reject = |why: String| Err(Error::Parse(format!("reference D({}) = {} rejected: {why}", e.n, e.d)));
    if e.n == 0 {
        return reject("n must be positive".into());
    }
    if e.source.trim().is_empty() {
        return reject("missing source".into());
    }
    if !e.d.is_positive() {
        return reject("D must be positive".into());
    }
    if !(&e.d % (BigInt::from(1) << (e.n - 1))).is_zero() {
        return reject(format!("not divisible by 2^{}", e.n - 1));
    }
    if &e.d * &e.d > BigInt::from(e.n).pow(e.n as u32) {
        return reject("exceeds the Hadamard bound".into());
    }
    if e.n < ORACLE_MAX_ORDER {
        if let Some(d) = cached_oracle(e.n).filter(|d| *d != e.d) {
            return reject(format!("exhaustive search gives {d}"));
        }
    }
    let reg = OrderRegistry::build(2 * e.n + 8, RegistryMode::Conjecture)?;
    let report = bound_report::<f64>(e.n, &reg, None)?;
    let ln_d = ln_abs(&e.d);
    for b in report.entries.iter().filter(|b| b.kind == EntryKind::Lower) {
        if b.ln_d > ln_d + tolerance(ln_d) {
            return reject(format!("lower bound {} gives ln D >= {}", b.name, b.ln_d));
        }
    }
    Ok(())
}

/// Reference `D(n)`: exhaustive for `n <= 6` (cached), otherwise the table.
pub fn reference_d(n: usize, table: &ReferenceTable) -> Option<BigInt> {
    if (1..=ORACLE_MAX_ORDER).contains(&n) {
        return cached_oracle(n);
    }
    table.get(n).map(|e| e.d.clone())
}

/// Provenance string matching [`reference_d`].
pub fn reference_source(n: usize, table: &ReferenceTable) -> Option<String> {
    if (1..=ORACLE_MAX_ORDER).contains(&n) {
        return Some("exhaustive search".into());
    }
    table.get(n).map(|e| e.source.clone())
}

/// Oracle values for `1..=max_n` as CSV `n,D,source`.
pub fn oracle_csv<W: Write>(max_n: usize, writer: W) -> Result<()> {
    let rows = (1..=max_n)
        .map(|n| Ok(ReferenceEntry { n, d: brute_force_d(n)?, source: "exhaustive search".into() }))
        .collect::<Result<Vec<_>>>()?;
    write_entries(rows.iter(), writer)
}

fn write_entries<'a, W: Write>(rows: impl Iterator<Item = &'a ReferenceEntry>, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_reference(n: usize) -> BigInt {
        // direct enumeration of all n x n sign matrices, no beta-map
        let mut best = BigInt::zero();
        for mask in 0u64..1 << (n * n) {
            let m = crate::SignMatrix::from_fn(n, |i, j| (mask >> (i * n + j)) & 1 == 1);
            best = best.max(crate::det_exact(&m).abs());
        }
        best
    }

    #[test]
    fn small_orders() {
        let got: Vec<BigInt> = (1..=5).map(|n| brute_force_d(n).unwrap()).collect();
        let want: Vec<BigInt> = [1, 2, 4, 16, 48].into_iter().map(BigInt::from).collect();
        assert_eq!(got, want);
        for n in 1..=4 {
            assert_eq!(brute_force_d(n).unwrap(), small_reference(n));
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(brute_force_d(0).is_err());
        assert!(brute_force_d(7).is_err());
    }

    #[test]
    fn packed_det_matches_bareiss() {
        for mask in (0u32..1 << 16).step_by(97) {
            let b = crate::BinMatrix::from_fn(4, |i, j| (mask >> (i * 4 + j)) & 1 == 1);
            assert_eq!(BigInt::from(packed_det(mask, 4)), crate::det_exact(&b));
        }
    }

    #[test]
    fn oracle_properties() {
        let vals: Vec<BigInt> = (1..=5).map(|n| brute_force_d(n).unwrap()).collect();
        for (i, d) in vals.iter().enumerate() {
            assert!((d % (BigInt::from(1) << i)).is_zero());
        }
        assert!(vals.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn order_six() {
        assert_eq!(brute_force_d(6).unwrap(), BigInt::from(160));
    }

    #[test]
    fn reference_values() {
        let t = ReferenceTable::builtin();
        assert_eq!(reference_d(13, &t), Some(BigInt::from(14_929_920)));
        assert_eq!(reference_d(5, &t), Some(BigInt::from(48)));
        assert_eq!(reference_d(94, &t), None);
        assert_eq!(reference_source(13, &t).as_deref(), Some("Raghavarao (1959)"));
    }

    #[test]
    fn csv_ingestion() {
        let ok = "n,D,source\n7,576,Williamson\n 8 , 4096 , sylvester\n";
        let t = ReferenceTable::from_csv(ok.as_bytes()).unwrap();
        assert_eq!(reference_d(7, &t), Some(BigInt::from(576)));
        assert_eq!(reference_d(8, &t), Some(BigInt::from(4096)));

        let mut out = Vec::new();
        t.write_csv(&mut out).unwrap();
        let again = ReferenceTable::from_csv(out.as_slice()).unwrap();
        assert_eq!(again.entries().count(), 3);

        // 64 is under the minor bound 8^3 for n = 7
        for bad in [
            "n,D,source\n7,64,made up\n",
            "n,D,source\n7,576,\n",
            "n,D,source\n5,32,wrong\n",
            "n,D,source\n7,577,odd\n",
            "n,D,source\n4,32,too big\n",
            "n,D\n7,576\n",
            "n,D,source\n7,abc,x\n",
        ] {
            assert!(ReferenceTable::from_csv(bad.as_bytes()).is_err(), "{bad}");
        }
    }

    #[test]
    fn lower_bounds_below_references() {
        let t = ReferenceTable::builtin();
        for n in [1, 2, 3, 4, 5, 13] {
            let reg = OrderRegistry::build(2 * n + 8, RegistryMode::Conjecture).unwrap();
            let d = reference_d(n, &t).unwrap();
            let report = bound_report::<f64>(n, &reg, Some(&d)).unwrap();
            let ln = ln_abs(&d);
            for b in report.lower_entries() {
                assert!(b.ln_d <= ln + 1e-9, "{} at n={n}", b.name);
            }
        }
    }

    #[test]
    fn oracle_csv_export() {
        let mut out = Vec::new();
        oracle_csv(4, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text, "n,D,source\n1,1,exhaustive search\n2,2,exhaustive search\n3,4,exhaustive search\n4,16,exhaustive search\n");
    }
}
