//! Explicit `{+1,-1}` matrices certifying lower bounds on `D(n)`, each
//! checked with an exact determinant.

mod excess;

pub use excess::{exhaustive_excess, maximize_excess, search_excess, ExcessSearch, EXHAUSTIVE_EXCESS_MAX_ORDER};

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::bounds::{self, hadamard_ln, LogValue};
use crate::constructions::{kronecker_product, sylvester};
use crate::error::{Error, Result};
use crate::exact::{
    beta_inverse, beta_map, complementary_split, det_exact, is_hadamard, ln_abs, nonsingular_complement,
    BinMatrix, SignMatrix,
};
use crate::orders::{OrderRegistry, Realization};

/// Log-space slack allowed when comparing a determinant to its claim.
pub const CERTIFICATE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct WitnessConfig {
    /// Largest order for which exact determinants are computed.
    pub exact_cap: usize,
    /// Random restarts of the excess search.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for WitnessConfig {
    fn default() -> Self {
        Self { exact_cap: crate::DEFAULT_EXACT_CAP, restarts: 32, seed: 0 }
    }
}

/// How a witness matrix was produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Construction {
    /// Complement of the nonsingular `d x d` minor `H[rows, cols]`.
    Minor { h: usize, rows: Vec<usize>, cols: Vec<usize> },
    /// Order-`h` Hadamard matrix bordered through the beta-map.
    Major { h: usize },
    /// Excess-maximized order-`h` matrix, negated, under an all-`+1` border.
    ExcessBorder { h: usize, sigma: i64 },
    /// [`Construction::ExcessBorder`] bordered once more through the beta-map.
    DoubleBorder { h: usize, sigma: i64 },
    /// `[[+,+],[+,-]]` Kronecker the order-`h+1` excess-border witness.
    SylvesterDoubling { h: usize, sigma: i64 },
    Hadamard,
    Loaded { label: String },
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Minor { h, rows, cols } => write!(f, "minor(h={h}, rows={rows:?}, cols={cols:?})"),
            Self::Major { h } => write!(f, "major(h={h})"),
            Self::ExcessBorder { h, sigma } => write!(f, "excess-border(h={h}, sigma={sigma})"),
            Self::DoubleBorder { h, sigma } => write!(f, "double-border(h={h}, sigma={sigma})"),
            Self::SylvesterDoubling { h, sigma } => write!(f, "sylvester-doubling(h={h}, sigma={sigma})"),
            Self::Hadamard => f.write_str("hadamard"),
            Self::Loaded { label } => write!(f, "loaded({label})"),
        }
    }
}

/// An explicit matrix with its exact determinant and the bound it
/// certifies. Immutable once created; `det_abs` is always recomputed.
#[derive(Clone, Debug)]
pub struct WitnessCertificate {
    pub n: usize,
    pub matrix: SignMatrix,
    pub det_abs: BigInt,
    pub ln_det: f64,
    pub claimed_bound: LogValue<f64>,
    pub construction: Construction,
    pub sigma_achieved: Option<i64>,
    /// `(2/pi)^(1/2) h^(3/2)` for excess-based constructions.
    pub sigma_floor: Option<f64>,
    /// Hadamard matrix a minor witness was cut from.
    pub source: Option<SignMatrix>,
    pub verified: bool,
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    n: usize,
    det_abs: String,
    #[serde(rename = "ln_R")]
    ln_r: f64,
    #[serde(rename = "claimed_ln_D")]
    claimed_ln_d: f64,
    construction: Construction,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    sigma_achieved: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    sigma_floor: Option<f64>,
    verified: bool,
    matrix: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    source_matrix: Option<Vec<String>>,
}

fn matrix_from_rows(rows: &[String]) -> Result<SignMatrix> {
    SignMatrix::parse(&format!("{}\n{}\n", rows.len(), rows.join("\n")))
}

fn pow(base: usize, exp: usize) -> BigInt {
    BigInt::from(base).pow(exp as u32)
}

/// Exact identity tying the witness determinant to its construction.
fn construction_identity(
    det_abs: &BigInt,
    n: usize,
    construction: &Construction,
    source: Option<&SignMatrix>,
) -> bool {
    match construction {
        Construction::Hadamard | Construction::Loaded { .. } => det_abs * det_abs == pow(n, n),
        Construction::Major { h } => {
            let expected = if *h == 1 { BigInt::one() } else { pow(*h, h / 2) };
            *det_abs == expected << (n - h)
        }
        Construction::Minor { h, rows, cols } => {
            let Some(src) = source else { return false };
            if src.order() != *h || h - rows.len() != n {
                return false;
            }
            block_identity_holds(src, rows, cols).unwrap_or(false)
        }
        Construction::ExcessBorder { h, sigma } => {
            // |det| = h^(h/2) (1 + sigma/h)
            let rhs = pow(*h, h / 2) * BigInt::from(*h as i64 + sigma);
            det_abs * BigInt::from(*h) == rhs
        }
        Construction::DoubleBorder { h, sigma } => {
            let rhs = pow(*h, h / 2) * BigInt::from(*h as i64 + sigma) * 2;
            det_abs * BigInt::from(*h) == rhs
        }
        Construction::SylvesterDoubling { h, sigma } => {
            // 2^(h+1) (h^(h/2) (1 + sigma/h))^2
            let inner = pow(*h, h / 2) * BigInt::from(*h as i64 + sigma);
            det_abs * pow(*h, 2) == (&inner * &inner) << (h + 1)
        }
    }
}

impl WitnessCertificate {
    fn certify(
        matrix: SignMatrix,
        claimed_bound: LogValue<f64>,
        construction: Construction,
        sigma_achieved: Option<i64>,
        source: Option<SignMatrix>,
    ) -> Self {
        let n = matrix.order();
        let det_abs = det_exact(&matrix).abs();
        let ln_det = ln_abs(&det_abs);
        let sigma_floor = match construction {
            Construction::ExcessBorder { h, .. }
            | Construction::DoubleBorder { h, .. }
            | Construction::SylvesterDoubling { h, .. } => {
                bounds::excess_lower::<f64>(h).ok().map(|v| v.ln.exp())
            }
            _ => None,
        };
        let mut cert = Self {
            n,
            matrix,
            det_abs,
            ln_det,
            claimed_bound,
            construction,
            sigma_achieved,
            sigma_floor,
            source,
            verified: false,
        };
        cert.verified = cert.check();
        cert
    }

    fn check(&self) -> bool {
        if self.det_abs.is_zero() || self.matrix.order() != self.n {
            return false;
        }
        if self.ln_det < self.claimed_bound.ln - CERTIFICATE_TOLERANCE {
            return false;
        }
        if let Some(x) = &self.claimed_bound.exact {
            if &self.det_abs < x {
                return false;
            }
        }
        construction_identity(&self.det_abs, self.n, &self.construction, self.source.as_ref())
    }

    /// Recomputes the determinant from the matrix and re-runs every check.
    pub fn reverify(&self) -> bool {
        let det_abs = det_exact(&self.matrix).abs();
        det_abs == self.det_abs
            && (ln_abs(&det_abs) - self.ln_det).abs() <= CERTIFICATE_TOLERANCE * self.ln_det.abs().max(1.0)
            && self.check()
    }

    pub fn ln_r(&self) -> f64 {
        self.ln_det - hadamard_ln::<f64>(self.n)
    }

    /// Whether the achieved excess meets the guaranteed `(2/pi)^(1/2) h^(3/2)`.
    pub fn meets_sigma_floor(&self) -> Option<bool> {
        Some(self.sigma_achieved? as f64 >= self.sigma_floor?)
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = CertificateJson {
            n: self.n,
            det_abs: self.det_abs.to_string(),
            ln_r: self.ln_r(),
            claimed_ln_d: self.claimed_bound.ln,
            construction: self.construction.clone(),
            sigma_achieved: self.sigma_achieved,
            sigma_floor: self.sigma_floor,
            verified: self.verified,
            matrix: self.matrix.rows_as_strings(),
            source_matrix: self.source.as_ref().map(SignMatrix::rows_as_strings),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    /// Parses a certificate without trusting any stored verdict: `verified`
    /// is recomputed, and a stored determinant that disagrees with the
    /// matrix leaves it `false`.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CertificateJson = serde_json::from_str(text)?;
        let matrix = matrix_from_rows(&doc.matrix)?;
        let source = doc.source_matrix.as_deref().map(matrix_from_rows).transpose()?;
        let stored: BigInt = doc
            .det_abs
            .parse()
            .map_err(|_| Error::Parse(format!("bad det_abs {:?}", doc.det_abs)))?;
        let mut cert = Self::certify(
            matrix,
            LogValue::approx(doc.claimed_ln_d),
            doc.construction,
            doc.sigma_achieved,
            source,
        );
        if cert.n != doc.n || cert.det_abs != stored {
            cert.verified = false;
        }
        Ok(cert)
    }
}

fn check_cap(n: usize, cfg: &WitnessConfig) -> Result<()> {
    if n > cfg.exact_cap {
        return Err(Error::CapExceeded { order: n, cap: cfg.exact_cap });
    }
    Ok(())
}

/// Exact squared complementary-minor identity for Hadamard `h`:
/// `det(A)^2 h^(2d) = det(D)^2 h^h` with `D = h[rows, cols]` of order `d`
/// and `A` its complementary block.
pub fn verify_block_identity(h: &SignMatrix, rows: &[usize], cols: &[usize]) -> Result<bool> {
    if !is_hadamard(h) {
        return Err(Error::NotHadamard);
    }
    block_identity_holds(h, rows, cols)
}

fn block_identity_holds(h: &SignMatrix, rows: &[usize], cols: &[usize]) -> Result<bool> {
    let (minor, complement) = complementary_split(h, rows, cols)?;
    let order = h.order();
    let d = minor.order();
    let det_d = det_exact(&minor);
    let det_a = det_exact(&complement);
    Ok(&det_a * &det_a * pow(order, 2 * d) == &det_d * &det_d * pow(order, order))
}

/// Witness of order `n < h` from the complement of a nonsingular
/// `(h-n) x (h-n)` minor of the Hadamard matrix `h`.
pub fn witness_minor(h: &SignMatrix, n: usize, cfg: &WitnessConfig) -> Result<WitnessCertificate> {
    let order = h.order();
    if n == 0 || n >= order {
        return Err(Error::Precondition(format!("need 0 < n < h, got n={n}, h={order}")));
    }
    check_cap(order, cfg)?;
    if !is_hadamard(h) {
        return Err(Error::NotHadamard);
    }
    let d = order - n;
    let (rows, cols) = nonsingular_complement(h, d)?;
    let (_, witness) = complementary_split(h, &rows, &cols)?;
    let claim = bounds::minor_bound::<f64>(order, n)?;
    Ok(WitnessCertificate::certify(
        witness,
        claim,
        Construction::Minor { h: order, rows, cols },
        None,
        Some(h.clone()),
    ))
}

/// Embeds `a` (order `k`) into order `n > k` through the beta-map with an
/// identity border, so `|det| = 2^(n-k) |det a|`.
pub fn border_up(a: &SignMatrix, n: usize) -> Result<SignMatrix> {
    let k = a.order();
    if n <= k {
        return Err(Error::Precondition(format!("border_up needs n > {k}, got {n}")));
    }
    let inner = if k == 1 { None } else { Some(beta_map(a)?) };
    let inner_order = k - 1;
    let b = BinMatrix::from_fn(n - 1, |i, j| match &inner {
        Some(m) if i < inner_order && j < inner_order => m.get(i, j) == 1,
        _ if i < inner_order || j < inner_order => false,
        _ => i == j,
    });
    Ok(beta_inverse(&b))
}

/// Witness of order `n > h`: the Hadamard matrix `h` bordered with `n - h`
/// extra rows and columns. `|det| = 2^(n-h) h^(h/2)` exactly.
pub fn witness_major(h: &SignMatrix, n: usize, cfg: &WitnessConfig) -> Result<WitnessCertificate> {
    let order = h.order();
    check_cap(n, cfg)?;
    if !is_hadamard(h) {
        return Err(Error::NotHadamard);
    }
    let claim = bounds::major_bound::<f64>(order, n)?;
    Ok(WitnessCertificate::certify(border_up(h, n)?, claim, Construction::Major { h: order }, None, None))
}

fn excess_bordered(h: &SignMatrix, cfg: &WitnessConfig) -> Result<(SignMatrix, i64)> {
    let order = h.order();
    if order < 4 {
        return Err(Error::Precondition(format!("excess border needs h >= 4, got {order}")));
    }
    if !is_hadamard(h) {
        return Err(Error::NotHadamard);
    }
    let search = search_excess(h, cfg.restarts, cfg.seed);
    let m = search.matrix;
    // all-+1 border around -M: det = det(-M) (1 + sigma/h)
    let w = SignMatrix::from_fn(order + 1, |i, j| i == 0 || j == 0 || m.get(i - 1, j - 1) < 0);
    Ok((w, search.sigma))
}

/// Order `h+1` witness with `|det| = h^(h/2) (1 + sigma/h)`, `sigma` the
/// excess reached by the switching search.
pub fn witness_excess_border(h: &SignMatrix, cfg: &WitnessConfig) -> Result<WitnessCertificate> {
    let order = h.order();
    check_cap(order + 1, cfg)?;
    let (w, sigma) = excess_bordered(h, cfg)?;
    let claim = LogValue::approx(hadamard_ln::<f64>(order) + (1.0 + sigma as f64 / order as f64).ln());
    Ok(WitnessCertificate::certify(w, claim, Construction::ExcessBorder { h: order, sigma }, Some(sigma), None))
}

/// Order `h+2` witness: the excess-border witness bordered once more,
/// doubling its determinant.
pub fn witness_double_border(h: &SignMatrix, cfg: &WitnessConfig) -> Result<WitnessCertificate> {
    let order = h.order();
    check_cap(order + 2, cfg)?;
    let (w, sigma) = excess_bordered(h, cfg)?;
    let claim = LogValue::approx(
        std::f64::consts::LN_2 + hadamard_ln::<f64>(order) + (1.0 + sigma as f64 / order as f64).ln(),
    );
    Ok(WitnessCertificate::certify(
        border_up(&w, order + 2)?,
        claim,
        Construction::DoubleBorder { h: order, sigma },
        Some(sigma),
        None,
    ))
}

/// Order `2(h+1)` witness: `[[+,+],[+,-]]` Kronecker the excess-border
/// witness of order `h+1`, with `|det| = 2^(h+1) |det W|^2`.
pub fn witness_sylvester_doubling(h: &SignMatrix, cfg: &WitnessConfig) -> Result<WitnessCertificate> {
    let order = h.order();
    let m = order + 1;
    check_cap(2 * m, cfg)?;
    let (w, sigma) = excess_bordered(h, cfg)?;
    let inner_ln = hadamard_ln::<f64>(order) + (1.0 + sigma as f64 / order as f64).ln();
    let claim = LogValue::approx(m as f64 * std::f64::consts::LN_2 + 2.0 * inner_ln);
    let h2 = sylvester(1, 2)?;
    Ok(WitnessCertificate::certify(
        kronecker_product(&h2, &w),
        claim,
        Construction::SylvesterDoubling { h: order, sigma },
        Some(sigma),
        None,
    ))
}

/// The Hadamard (or loaded) matrix of order `n` itself.
pub fn witness_hadamard(reg: &OrderRegistry, n: usize, cfg: &WitnessConfig) -> Result<WitnessCertificate> {
    check_cap(n, cfg)?;
    let h = reg.realize(n)?;
    let construction = match reg.tag(n) {
        Some(Realization::Loaded(label)) => Construction::Loaded { label: label.clone() },
        _ => Construction::Hadamard,
    };
    let claim = LogValue::approx(hadamard_ln::<f64>(n));
    Ok(WitnessCertificate::certify(h, claim, construction, None, None))
}

/// Builds every applicable witness for `n` from registry orders with
/// explicit matrices and returns the verified one with the largest exact
/// determinant (earliest candidate on ties).
///
/// Candidates: the order-`n` Hadamard matrix; a minor of the nearest larger
/// order; the bordering of the nearest smaller order; the excess border
/// (`n ≡ 1 mod 4`); the double border (`n ≡ 2 mod 4`); Sylvester doubling
/// (`n ≡ 2 mod 8`).
pub fn best_witness(n: usize, reg: &OrderRegistry, cfg: &WitnessConfig) -> Result<WitnessCertificate> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    check_cap(n, cfg)?;
    let mut attempts: Vec<Result<WitnessCertificate>> = Vec::new();
    if reg.has_matrix(n) {
        attempts.push(witness_hadamard(reg, n, cfg));
    }
    let above = reg.orders().filter(|&h| h > n).find(|&h| reg.has_matrix(h));
    if let Some(h) = above.filter(|&h| h <= cfg.exact_cap) {
        attempts.push(reg.realize(h).and_then(|m| witness_minor(&m, n, cfg)));
    }
    let below = reg.orders().filter(|&h| h < n).filter(|&h| reg.has_matrix(h)).last();
    if let Some(h) = below {
        attempts.push(reg.realize(h).and_then(|m| witness_major(&m, n, cfg)));
    }
    if n >= 5 && n % 4 == 1 && reg.has_matrix(n - 1) {
        attempts.push(reg.realize(n - 1).and_then(|m| witness_excess_border(&m, cfg)));
    }
    if n >= 6 && n % 4 == 2 && reg.has_matrix(n - 2) {
        attempts.push(reg.realize(n - 2).and_then(|m| witness_double_border(&m, cfg)));
    }
    if n >= 10 && n % 8 == 2 && reg.has_matrix(n / 2 - 1) {
        attempts.push(reg.realize(n / 2 - 1).and_then(|m| witness_sylvester_doubling(&m, cfg)));
    }

    let mut best: Option<WitnessCertificate> = None;
    for attempt in attempts {
        match attempt {
            Ok(c) if c.verified => {
                if best.as_ref().is_none_or(|b| c.det_abs > b.det_abs) {
                    best = Some(c);
                }
            }
            Ok(_) | Err(Error::CapExceeded { .. }) | Err(Error::NoMatrix(_)) | Err(Error::Singular) => {}
            Err(e) => return Err(e),
        }
    }
    best.ok_or(Error::NoWitness(n))
}

#[cfg(test)]
mod tests;
