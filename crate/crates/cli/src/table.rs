use std::io::Write;
use std::ops::RangeInclusive;

use anyhow::Result;
use maxdet_core::bounds::bound_report;
use maxdet_core::oracle::{reference_d, ReferenceTable};
use maxdet_core::{best_witness, Error, OrderRegistry, WitnessConfig};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Serialize)]
struct Row {
    n: usize,
    delta: usize,
    unconditional_r: f64,
    conditional_r: Option<f64>,
    conditional_exact_r: Option<f64>,
    sylvester_doubling_r: Option<f64>,
    kms_r: Option<f64>,
    de_launey_levin_r: Option<f64>,
    clements_lindstrom_r: f64,
    best_lower_r: f64,
    hadamard_ln_d: f64,
    barba_r: Option<f64>,
    witness_det: Option<String>,
    witness_r: Option<f64>,
    witness_construction: Option<String>,
    reference_d: Option<String>,
    reference_r: Option<f64>,
}

fn row(n: usize, reg: &OrderRegistry, refs: &ReferenceTable, cfg: &WitnessConfig, witness_max: usize) -> Result<Row> {
    let reference = reference_d(n, refs);
    let report = bound_report::<f64>(n, reg, reference.as_ref())?;
    let r = |name: &str| report.entry(name).map(|e| e.ln_r.exp());
    let witness = if n <= witness_max {
        match best_witness(n, reg, cfg) {
            Ok(c) => Some(c),
            Err(Error::NoWitness(_) | Error::CapExceeded { .. }) => None,
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    Ok(Row {
        n,
        delta: report.delta,
        unconditional_r: r("unconditional").unwrap_or(f64::NAN),
        conditional_r: r("conditional"),
        conditional_exact_r: r("conditional-exact"),
        sylvester_doubling_r: r("sylvester-doubling"),
        kms_r: r("kms"),
        de_launey_levin_r: r("de-launey-levin"),
        clements_lindstrom_r: r("clements-lindstrom").unwrap_or(f64::NAN),
        best_lower_r: report.best_lower().map_or(f64::NAN, |e| e.ln_r.exp()),
        hadamard_ln_d: report.entry("hadamard").map_or(f64::NAN, |e| e.ln_d),
        barba_r: r("barba"),
        witness_det: witness.as_ref().map(|c| c.det_abs.to_string()),
        witness_r: witness.as_ref().map(|c| c.ln_r().exp()),
        witness_construction: witness.as_ref().map(|c| c.construction.to_string()),
        reference_d: reference.as_ref().map(ToString::to_string),
        reference_r: r("reference"),
    })
}

/// Writes one CSV row per `n`, computed in parallel and ordered by `n`.
pub fn write<W: Write>(
    range: RangeInclusive<usize>,
    reg: &OrderRegistry,
    refs: &ReferenceTable,
    cfg: &WitnessConfig,
    witness_max: usize,
    out: W,
) -> Result<()> {
    let rows: Vec<Row> = range
        .into_par_iter()
        .map(|n| row(n, reg, refs, cfg, witness_max))
        .collect::<Result<_>>()?;
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
