//! Stable JSON rendering of reports.
//!
//! Integers and rationals are decimal strings (rationals as `"num/den"`),
//! booleans are plain, absent values are `null`. Object keys come out
//! sorted, so equal inputs give byte-identical output. Elapsed times are
//! never included.

use borsuk_core::arith::{ratio_string, to_decimal, ExactRatio, PrimePowerWitness};
use borsuk_core::bounds::{ChainReport, CoverPlan, QReport, RangeReport, SpectrumEntry};
use borsuk_core::construction::Params;
use borsuk_core::VerificationReport;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

fn num(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

fn ratio(x: &ExactRatio) -> Value {
    Value::String(ratio_string(x))
}

fn prime_power(w: &Option<PrimePowerWitness>) -> Value {
    match w {
        Some(w) => json!({ "base": num(w.base), "exponent": num(w.exponent) }),
        None => Value::Null,
    }
}

pub fn params(p: &Params) -> Value {
    json!({
        "k": num(p.k),
        "m": num(p.m),
        "w_size": num(p.w_size),
        "d": num(p.d),
        "prime_power": prime_power(&p.prime_power),
    })
}

pub fn q_report(r: &QReport) -> Value {
    json!({
        "k": num(r.k),
        "q": ratio(&r.q),
        "decimal": r.decimal,
        "digits": num(r.digits),
        "formula_values": r.formula_values.iter().map(ratio).collect::<Vec<_>>(),
        "lower": ratio(&r.lower),
        "upper": ratio(&r.upper),
        "prime_power": prime_power(&r.prime_power),
        "warnings": r.warnings.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
    })
}

pub fn range_report(r: &RangeReport, digits: u32) -> Value {
    json!({
        "k": num(r.k),
        "d": num(r.d),
        "q": ratio(&r.q),
        "q_decimal": to_decimal(&r.q, digits).expect("digits validated by caller"),
        "is_counterexample": r.is_counterexample,
        "d_low": r.d_low.map(num),
        "d_high": r.d_high.as_ref().map(num),
        "prime_power": prime_power(&r.prime_power),
    })
}

pub fn cover_plan(p: &CoverPlan) -> Value {
    json!({
        "target_dim": num(p.target_dim),
        "chosen_k": p.chosen_k.map(num),
        "d_low": p.range.as_ref().map(|(lo, _)| num(lo)),
        "d_high": p.range.as_ref().map(|(_, hi)| num(hi)),
    })
}

pub fn chain_report(r: &ChainReport) -> Value {
    let links: Vec<Value> = r
        .links
        .iter()
        .map(|l| {
            json!({
                "k": num(l.k),
                "next_k": num(l.next_k),
                "terminal": l.terminal,
                "d_low": num(l.d_low),
                "next_d": num(l.next_d),
                "certificate": l.certificate.to_string(),
                "reach": num(&l.reach),
                "passed": l.passed,
            })
        })
        .collect();
    let ratios: Vec<Value> = r
        .ratio_checks
        .iter()
        .map(|c| json!({ "k": num(c.k), "passed": c.passed }))
        .collect();
    json!({
        "suite": "chain",
        "passed": r.passed,
        "k_max": num(r.config.k_max),
        "start_dim": num(r.config.start_dim),
        "bridges": r.config.bridges.iter().map(num).collect::<Vec<_>>(),
        "through_dim": num(r.through_dim),
        "links": links,
        "ratio_checks": ratios,
        "failure": r.failure,
    })
}

pub fn spectrum(
    k: u64,
    entries: &[SpectrumEntry],
    brute: Option<(&BTreeMap<u64, u64>, bool)>,
) -> Value {
    let rows: Vec<Value> = entries
        .iter()
        .map(|e| {
            json!({
                "p": num(e.p),
                "p_complement": num(e.p_complement(k)),
                "dist_sq": num(e.dist_sq),
                "count": num(&e.count),
            })
        })
        .collect();
    let mut out = Map::new();
    out.insert("k".into(), num(k));
    out.insert("entries".into(), Value::Array(rows));
    if let Some((brute, matches)) = brute {
        let census: Map<String, Value> =
            brute.iter().map(|(d, c)| (d.to_string(), num(c))).collect();
        out.insert("bruteforce".into(), Value::Object(census));
        out.insert("matches".into(), Value::Bool(matches));
    }
    Value::Object(out)
}

pub fn verification(r: &VerificationReport) -> Value {
    json!({
        "suite": r.suite,
        "params": r.params,
        "passed": r.passed,
        "counters": r.counters,
        "witnesses": r.witnesses,
    })
}

pub fn import_summary(k: u64, points: usize) -> Value {
    json!({ "k": num(k), "points": num(points), "valid": true })
}
