use std::fmt;

use crate::error::{Error, Result};

/// Read-only view of a square integer matrix.
pub trait IntegerMatrix {
    fn order(&self) -> usize;
    fn entry(&self, i: usize, j: usize) -> i64;

    fn to_rows<T: crate::ExactScalar>(&self) -> Vec<Vec<T>> {
        let n = self.order();
        (0..n)
            .map(|i| (0..n).map(|j| T::from_i64(self.entry(i, j))).collect())
            .collect()
    }
}

/// Dense square matrix with entries in `{+1, -1}`, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignMatrix {
    order: usize,
    entries: Vec<i8>,
}

impl SignMatrix {
    pub fn new(order: usize, entries: Vec<i8>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Precondition("order must be at least 1".into()));
        }
        if entries.len() != order * order {
            return Err(Error::Precondition(format!(
                "expected {} entries for order {order}, got {}",
                order * order,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|&&e| e != 1 && e != -1) {
            return Err(Error::Precondition(format!("entry {bad} is not +1 or -1")));
        }
        Ok(Self { order, entries })
    }

    pub fn from_rows(rows: &[Vec<i8>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Precondition("rows must form a square matrix".into()));
        }
        Self::new(n, rows.concat())
    }

    /// Builds a matrix from a sign predicate: `true` is `+1`, `false` is `-1`.
    pub fn from_fn(order: usize, mut positive: impl FnMut(usize, usize) -> bool) -> Self {
        assert!(order >= 1, "order must be at least 1");
        let mut entries = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                entries.push(if positive(i, j) { 1 } else { -1 });
            }
        }
        Self { order, entries }
    }

    pub fn all_ones(order: usize) -> Self {
        Self::from_fn(order, |_, _| true)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.order + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, positive: bool) {
        self.entries[i * self.order + j] = if positive { 1 } else { -1 };
    }

    pub fn row(&self, i: usize) -> &[i8] {
        &self.entries[i * self.order..(i + 1) * self.order]
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    pub fn negate_row(&mut self, i: usize) {
        let n = self.order;
        for e in &mut self.entries[i * n..(i + 1) * n] {
            *e = -*e;
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        let n = self.order;
        for i in 0..n {
            self.entries[i * n + j] = -self.entries[i * n + j];
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            order: self.order,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.order, |i, j| self.get(j, i) > 0)
    }

    /// `self[rows, cols]`; both index lists must have the same length.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        assert_eq!(rows.len(), cols.len(), "submatrix must be square");
        Self::from_fn(rows.len(), |i, j| self.get(rows[i], cols[j]) > 0)
    }

    /// Exact Gram matrix `M * M^T`, row-major.
    pub fn gram(&self) -> Vec<i64> {
        let n = self.order;
        let mut g = vec![0i64; n * n];
        for i in 0..n {
            let ri = self.row(i);
            for k in i..n {
                let rk = self.row(k);
                let dot: i64 = ri.iter().zip(rk).map(|(&a, &b)| i64::from(a * b)).sum();
                g[i * n + k] = dot;
                g[k * n + i] = dot;
            }
        }
        g
    }

    /// Matrix text format: the order on the first line, then one line per
    /// row with `+` for `+1` and `-` for `-1`.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for i in 0..self.order {
            out.extend(self.row(i).iter().map(|&e| if e > 0 { '+' } else { '-' }));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (order, cells) = parse_grid(text, |c| match c {
            '+' => Some(1i8),
            '-' => Some(-1i8),
            _ => None,
        })?;
        Self::new(order, cells)
    }

    pub fn rows_as_strings(&self) -> Vec<String> {
        (0..self.order)
            .map(|i| self.row(i).iter().map(|&e| if e > 0 { '+' } else { '-' }).collect())
            .collect()
    }
}

impl IntegerMatrix for SignMatrix {
    fn order(&self) -> usize {
        self.order
    }
    fn entry(&self, i: usize, j: usize) -> i64 {
        i64::from(self.get(i, j))
    }
}

impl fmt::Debug for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignMatrix({})", self.rows_as_strings().join("/"))
    }
}

impl fmt::Display for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Dense square `{0, 1}` matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinMatrix {
    order: usize,
    entries: Vec<u8>,
}

impl BinMatrix {
    pub fn new(order: usize, entries: Vec<u8>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Precondition("order must be at least 1".into()));
        }
        if entries.len() != order * order {
            return Err(Error::Precondition(format!(
                "expected {} entries for order {order}, got {}",
                order * order,
                entries.len()
            )));
        }
        if entries.iter().any(|&e| e > 1) {
            return Err(Error::Precondition("entries must be 0 or 1".into()));
        }
        Ok(Self { order, entries })
    }

    pub fn from_fn(order: usize, mut one: impl FnMut(usize, usize) -> bool) -> Self {
        assert!(order >= 1, "order must be at least 1");
        let mut entries = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                entries.push(u8::from(one(i, j)));
            }
        }
        Self { order, entries }
    }

    pub fn identity(order: usize) -> Self {
        Self::from_fn(order, |i, j| i == j)
    }

    pub fn zeros(order: usize) -> Self {
        Self::from_fn(order, |_, _| false)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.entries[i * self.order + j]
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.order);
        for i in 0..self.order {
            out.extend(
                self.entries[i * self.order..(i + 1) * self.order]
                    .iter()
                    .map(|&e| if e == 1 { '1' } else { '0' }),
            );
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (order, cells) = parse_grid(text, |c| match c {
            '1' => Some(1u8),
            '0' => Some(0u8),
            _ => None,
        })?;
        Self::new(order, cells)
    }
}

impl IntegerMatrix for BinMatrix {
    fn order(&self) -> usize {
        self.order
    }
    fn entry(&self, i: usize, j: usize) -> i64 {
        i64::from(self.get(i, j))
    }
}

impl fmt::Debug for BinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.to_text().lines().skip(1).map(str::to_owned).collect();
        write!(f, "BinMatrix({})", rows.join("/"))
    }
}

fn parse_grid<T>(text: &str, cell: impl Fn(char) -> Option<T>) -> Result<(usize, Vec<T>)> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty input".into()))?
        .trim();
    let order: usize = header
        .parse()
        .map_err(|_| Error::Parse(format!("bad order line {header:?}")))?;
    if order == 0 {
        return Err(Error::Parse("order must be at least 1".into()));
    }
    let mut cells = Vec::with_capacity(order * order);
    for r in 0..order {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {order} rows, found {r}")))?;
        let line = line.strip_suffix('\r').unwrap_or(line);
        let before = cells.len();
        for (c, ch) in line.chars().enumerate() {
            let v = cell(ch).ok_or_else(|| {
                Error::Parse(format!("row {}: bad character {ch:?} at column {}", r + 1, c + 1))
            })?;
            cells.push(v);
        }
        let width = cells.len() - before;
        if width != order {
            return Err(Error::Parse(format!(
                "row {} has length {width}, expected {order}",
                r + 1
            )));
        }
    }
    if lines.any(|l| !l.trim().is_empty()) {
        return Err(Error::Parse("trailing content after matrix".into()));
    }
    Ok((order, cells))
}
