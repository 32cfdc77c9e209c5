use num_bigint::BigInt;
use serde::Serialize;

use super::*;
use crate::orders::RegistryMode;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryKind {
    Lower,
    Upper,
    Reference,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundEntry<F> {
    pub name: String,
    pub n: usize,
    #[serde(rename = "ln_D")]
    pub ln_d: F,
    #[serde(rename = "ln_R")]
    pub ln_r: F,
    #[serde(rename = "R_if_representable")]
    pub r: Option<F>,
    pub source: String,
    pub kind: EntryKind,
}

impl<F: Real> BoundEntry<F> {
    fn new(name: &str, n: usize, ln_d: F, kind: EntryKind, source: String) -> Self {
        let ln_r = ln_d - hadamard_ln::<F>(n);
        let r = Some(ln_r.exp()).filter(|r| r.is_normal());
        Self { name: name.to_owned(), n, ln_d, ln_r, r, source, kind }
    }
}

/// Every applicable named bound for one `n`.
#[derive(Clone, Debug)]
pub struct BoundReport<F> {
    pub n: usize,
    pub mode: RegistryMode,
    pub delta: usize,
    pub entries: Vec<BoundEntry<F>>,
}

impl<F: Real> BoundReport<F> {
    pub fn entry(&self, name: &str) -> Option<&BoundEntry<F>> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn lower_entries(&self) -> impl Iterator<Item = &BoundEntry<F>> {
        self.entries.iter().filter(|e| e.kind == EntryKind::Lower)
    }

    /// Largest lower bound on `ln D`.
    pub fn best_lower(&self) -> Option<&BoundEntry<F>> {
        self.lower_entries().max_by(|a, b| a.ln_d.partial_cmp(&b.ln_d).expect("finite"))
    }
}

impl<F: Real + Serialize> BoundReport<F> {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.entries)?)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["name", "n", "ln_D", "ln_R", "R_if_representable", "source", "kind"])?;
        for e in &self.entries {
            let kind = match e.kind {
                EntryKind::Lower => "lower",
                EntryKind::Upper => "upper",
                EntryKind::Reference => "reference",
            };
            w.write_record([
                e.name.clone(),
                e.n.to_string(),
                e.ln_d.to_string(),
                e.ln_r.to_string(),
                e.r.map(|r| r.to_string()).unwrap_or_default(),
                e.source.clone(),
                kind.to_owned(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Builds the full report for `n` against `reg`.
///
/// Bounds that rest on a particular Hadamard order appear only when the
/// registry contains that order. Fails if the registry cap is below `2n`.
pub fn bound_report<F: Real>(
    n: usize,
    reg: &OrderRegistry,
    reference: Option<&BigInt>,
) -> Result<BoundReport<F>> {
    let unc = unconditional_bound::<F>(n, reg)?;
    let mut entries = Vec::new();
    let how = match (unc.delta.delta, unc.winning_order) {
        (0, _) => "hadamard order".to_owned(),
        (_, h) if h > n => format!("complementary minor of order {h}"),
        (_, h) => format!("bordered Hadamard matrix of order {h}"),
    };
    entries.push(BoundEntry::new(
        "unconditional",
        n,
        unc.ln_d,
        EntryKind::Lower,
        format!("nearest Hadamard order, delta={}: {how}", unc.delta.delta),
    ));
    entries.push(BoundEntry::new(
        "unconditional-floor",
        n,
        unc.floor_ln_r + hadamard_ln::<F>(n),
        EntryKind::Lower,
        format!("(4/(ne))^(delta/2), delta={}", unc.delta.delta),
    ));

    let cond = conditional_bound::<F>(n)?;
    if cond.base_order.is_some_and(|h| reg.contains(h)) {
        let base = cond.base_order.unwrap_or(n);
        let source = match cond.residue {
            _ if n <= 2 => "R(1) = R(2) = 1".to_owned(),
            0 => "hadamard order".to_owned(),
            1 => format!("excess-bordered order {base}, simplified (2/(pi e))^(1/2)"),
            2 => format!("doubly bordered order {base}, simplified (8/(pi e^2 n))^(1/2)"),
            _ => format!("complementary minor of order {base}"),
        };
        entries.push(BoundEntry::new("conditional", n, cond.theorem_ln_d(), EntryKind::Lower, source));
        if n > 2 && matches!(cond.residue, 1 | 2) {
            entries.push(BoundEntry::new(
                "conditional-exact",
                n,
                cond.exact_ln_d,
                EntryKind::Lower,
                format!("h^(h/2)(1 + (2h/pi)^(1/2)) with h={base}{}", if cond.residue == 2 { ", doubled" } else { "" }),
            ));
        }
    }
    if let Some(v) = sylvester_doubling_bound::<F>(n).filter(|_| reg.contains(n / 2 - 1)) {
        entries.push(BoundEntry::new(
            "sylvester-doubling",
            n,
            v.ln,
            EntryKind::Lower,
            format!("[[+,+],[+,-]] tensor excess-bordered order {}", n / 2),
        ));
    }
    if !n.is_multiple_of(4) {
        let four_t = match n % 4 {
            3 => n + 1,
            2 => n + 2,
            _ => n + 3,
        };
        if reg.contains(four_t) {
            let v = kms_bound::<F>(n)?;
            entries.push(BoundEntry::new(
                "kms",
                n,
                v.ln,
                EntryKind::Lower,
                format!("Koukouvinos-Mitrouli-Seberry with 4t={four_t}"),
            ));
        }
    }
    if !reg.contains(n) {
        let v = ll_bound::<F>(n, reg)?;
        let above = reg.next_above(n).unwrap_or(n);
        entries.push(BoundEntry::new(
            "de-launey-levin",
            n,
            v.ln,
            EntryKind::Lower,
            format!("n^(-d/2) with d={}", above - n),
        ));
    }
    entries.push(BoundEntry::new(
        "clements-lindstrom",
        n,
        cl_bound::<F>(n).ln,
        EntryKind::Lower,
        "(3/4)^(n/2)".to_owned(),
    ));

    let up = upper_bounds::<F>(n);
    entries.push(BoundEntry::new("hadamard", n, up.hadamard, EntryKind::Upper, "n^(n/2)".to_owned()));
    if let Some(b) = up.barba {
        entries.push(BoundEntry::new("barba", n, b, EntryKind::Upper, "(2h+1)^(1/2) h^(h/2), h=n-1".to_owned()));
    }
    if let Some(d) = reference {
        entries.push(BoundEntry::new(
            "reference",
            n,
            ln_of::<F>(d),
            EntryKind::Reference,
            format!("D({n}) = {d}"),
        ));
    }

    for e in entries.iter().filter(|e| e.kind == EntryKind::Lower) {
        if e.ln_d > up.hadamard + tolerance(up.hadamard) {
            return Err(Error::Invariant(format!("{} exceeds the Hadamard bound at n={n}", e.name)));
        }
    }
    Ok(BoundReport { n, mode: reg.mode(), delta: unc.delta.delta, entries })
}
