//! End-to-end acceptance checks, one line of output per criterion.
//!
//! Runs without the libtest harness so the PASS/FAIL lines are always
//! printed. Exits non-zero if any criterion fails.

use std::collections::BTreeMap;
use std::fs;
use std::panic;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use borsuk::cli::{run, EXIT_FAILED, EXIT_OK};
use borsuk::pointset::read_pointset;
use borsuk_core::arith::{binomial, to_decimal, ExactInt, ExactRatio};
use borsuk_core::bounds::{
    counterexample_range, q_exact, q_lower_bound, q_upper_bound, q_value, spectrum_analytic,
    verify_chain, Certificate, ChainConfig,
};
use borsuk_core::construction::{enumerate_points, make_params};
use borsuk_core::oracle::{
    affine_rank, diameter_bruteforce, greedy_cover, max_conflict_free_family, spectrum_bruteforce,
    verify_identities, Caps, SearchStatus, DEFAULT_SEARCH_BUDGET,
};

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok_or<T, E: ToString>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn table_regression() -> Result<String, String> {
    let rows = [
        (11, 945, "548.70"),
        (13, 1325, "1561.91"),
        (16, 2015, "7502.65"),
        (17, 2277, "12659.44"),
        (29, 6669, "6745998.54"),
        (31, 7625, "19209098.12"),
        (32, 8127, "32414445.61"),
    ];
    for (k, d, decimal) in rows {
        let p = ok_or(make_params(k))?;
        ensure(p.d == d, || format!("k={k}: d={} expected {d}", p.d))?;
        let got = ok_or(to_decimal(&ok_or(q_value(k))?, 2))?;
        ensure(got == decimal, || {
            format!("k={k}: q={got} expected {decimal}")
        })?;
    }
    Ok(format!("{} rows", rows.len()))
}

fn range_regression() -> Result<String, String> {
    for (k, lo, hi) in [
        (13u64, 1325u64, 1560u64),
        (16, 2015, 7501),
        (17, 2277, 12658),
    ] {
        let r = ok_or(counterexample_range(k))?;
        ensure(r.is_counterexample, || {
            format!("k={k} not a counterexample")
        })?;
        ensure(r.d_low == Some(lo), || format!("k={k}: low {:?}", r.d_low))?;
        ensure(r.d_high == Some(ExactInt::from(hi)), || {
            format!("k={k}: high {:?}", r.d_high)
        })?;
    }
    let r = ok_or(counterexample_range(11))?;
    ensure(
        !r.is_counterexample && r.d_low.is_none() && r.d_high.is_none(),
        || "k=11 reported as a counterexample".into(),
    )?;
    Ok("13, 16, 17 exact; 11 none".into())
}

// The routes are recomputed here as unreduced fractions from binomials,
// so a shared bug in the library's own routes cannot hide.
fn four_formulas() -> Result<String, String> {
    let same = |x: &(ExactInt, ExactInt), y: &(ExactInt, ExactInt)| &x.0 * &y.1 == &y.0 * &x.1;
    for k in 1..=500u64 {
        let m = 4 * k;
        let a = (binomial(m, 2 * k), 2 * binomial(m - 1, k - 1));
        let b = (binomial(m - 1, 2 * k - 1), binomial(m - 1, k - 1));
        let c = (2 * binomial(m, 2 * k), binomial(m, k));
        let mut d = (ExactInt::from(2), ExactInt::from(1));
        for i in 1..=k {
            d.0 *= 2 * k + i;
            d.1 *= k + i;
        }
        for (name, route) in [("b", &b), ("c", &c), ("product", &d)] {
            ensure(same(route, &a), || format!("k={k}: route {name} differs"))?;
        }
        let q = ExactRatio::new(a.0, a.1);
        let report = ok_or(q_exact(k))?;
        ensure(report.q == q, || format!("k={k}: library q differs"))?;
        ensure(report.formula_values.iter().all(|v| v == &q), || {
            format!("k={k}: library routes disagree")
        })?;
        let lower = ok_or(q_lower_bound(k))?;
        let upper = ok_or(q_upper_bound(k))?;
        ensure(lower <= q && q <= upper, || {
            format!("k={k}: sandwich fails")
        })?;
        let ceiling = ExactRatio::from_integer(num_pow2(k + 1));
        ensure(upper < ceiling, || {
            format!("k={k}: upper bound not below 2^(k+1)")
        })?;
    }
    Ok("k = 1..500".into())
}

fn num_pow2(e: u64) -> ExactInt {
    ExactInt::from(1u8) << e as usize
}

fn identities() -> Result<String, String> {
    let caps = Caps::default();
    let mut pairs = Vec::new();
    for k in 1..=3 {
        let report = ok_or(verify_identities(k, &caps))?;
        ensure(report.passed, || format!("k={k}: {:?}", report.witnesses))?;
        ensure(
            report.params.get("mode").map(String::as_str) == Some("pairwise"),
            || format!("k={k}: not exhaustive"),
        )?;
        let expected = binomial(4 * k, 2 * k).pow(2u32);
        let got = report
            .counter_value("ordered_pairs")
            .unwrap_or_default()
            .to_string();
        ensure(got == expected.to_string(), || {
            format!("k={k}: {got} pairs")
        })?;
        pairs.push(got);
    }
    Ok(format!("ordered block pairs {}", pairs.join("/")))
}

fn diameter() -> Result<String, String> {
    let caps = Caps::default();
    for k in 1..=3 {
        let c = ok_or(diameter_bruteforce(k, &caps))?;
        ensure(c.diameter_sq == 4 * k * k, || {
            format!("k={k}: {}", c.diameter_sq)
        })?;
        ensure(c.max_implies_p_k, || format!("k={k}: max without p=k"))?;
        ensure(c.p_k_implies_max, || format!("k={k}: p=k without max"))?;
        ensure(c.passed(), || format!("k={k}: census failed"))?;
    }
    Ok("4k^2 at k=1,2,3, iff p=k".into())
}

fn conflict_free_family() -> Result<String, String> {
    let f = ok_or(max_conflict_free_family(
        2,
        &Caps::default(),
        DEFAULT_SEARCH_BUDGET,
    ))?;
    ensure(f.vertices == 70, || format!("{} vertices", f.vertices))?;
    ensure(f.status == SearchStatus::Optimal, || {
        format!("status {}", f.status)
    })?;
    ensure(f.bound == ExactInt::from(14), || {
        format!("bound {}", f.bound)
    })?;
    ensure(f.family_valid && f.within_bound(), || {
        format!("size {}", f.size())
    })?;
    Ok(format!("maximum {} <= 14", f.size()))
}

fn spectrum() -> Result<String, String> {
    let caps = Caps::default();
    for k in 1..=3u64 {
        let analytic: BTreeMap<u64, String> = ok_or(spectrum_analytic(k))?
            .into_iter()
            .map(|e| (e.dist_sq, e.count.to_string()))
            .collect();
        let brute: BTreeMap<u64, String> = ok_or(spectrum_bruteforce(k, &caps))?
            .into_iter()
            .map(|(d, c)| (d, c.to_string()))
            .collect();
        ensure(analytic == brute, || {
            format!("k={k}: {analytic:?} vs {brute:?}")
        })?;
    }
    let k2: BTreeMap<u64, u64> = ok_or(spectrum_bruteforce(2, &caps))?;
    let expected = BTreeMap::from([(12, 280), (16, 315)]);
    ensure(k2 == expected, || format!("k=2: {k2:?}"))?;
    ensure(k2.values().sum::<u64>() == 595, || "k=2 sum".into())?;
    Ok("k=1,2,3 agree; k=2 {12:280, 16:315}".into())
}

fn rank() -> Result<String, String> {
    let caps = Caps::default();
    let mut seen = Vec::new();
    for k in 1..=2 {
        let r = ok_or(affine_rank(k, &caps))?;
        ensure(r.rank as u64 <= r.d, || {
            format!("k={k}: rank {} > d {}", r.rank, r.d)
        })?;
        seen.push(format!("k={k} rank {} <= {}", r.rank, r.d));
    }
    Ok(seen.join(", "))
}

fn cover() -> Result<String, String> {
    let caps = Caps::default();
    let mut seen = Vec::new();
    for k in 1..=3 {
        let c = ok_or(greedy_cover(k, &caps))?;
        ensure(c.parts_valid(), || {
            format!("k={k}: a part keeps the diameter")
        })?;
        ensure(c.meets_lower_bound(), || {
            format!("k={k}: {} parts", c.parts.len())
        })?;
        seen.push(format!("k={k} {} parts", c.parts.len()));
    }
    let q2 = ok_or(q_value(2))?;
    ensure(q2 == ExactRatio::from_integer(5.into()), || {
        format!("q(2) = {q2}")
    })?;
    Ok(seen.join(", "))
}

fn chain() -> Result<String, String> {
    let report = ok_or(verify_chain(&ChainConfig::default()))?;
    ensure(report.passed, || report.failure.clone().unwrap_or_default())?;
    let d8192 = make_params(8192).map_err(|e| e.to_string())?.d;
    ensure(report.through_dim >= d8192, || {
        format!("through {}", report.through_dim)
    })?;
    let mut ks: Vec<u64> = report.links.iter().map(|l| l.k).collect();
    ks.sort_unstable();
    let mut expected = vec![16, 17];
    expected.extend((5..=12).map(|j| 1u64 << j));
    ensure(ks == expected, || format!("links {ks:?}"))?;
    let exact = report
        .links
        .iter()
        .filter(|l| l.certificate == Certificate::ExactQ)
        .count();
    let listing: Vec<String> = report
        .links
        .iter()
        .map(|l| format!("{}:{}", l.k, l.certificate))
        .collect();
    Ok(format!(
        "2015..{} ({} q_exact, {} lower_bound) [{}]",
        report.through_dim,
        exact,
        report.links.len() - exact,
        listing.join(" ")
    ))
}

fn round_trip() -> Result<String, String> {
    let dir = ok_or(tempfile::tempdir())?;
    let invoke = |args: &[&str]| {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("borsuk").chain(args.iter().copied());
        (
            run(argv, &mut out, &mut err),
            String::from_utf8_lossy(&err).into_owned(),
        )
    };
    for k in 1..=4u64 {
        let path = dir.path().join(format!("k{k}.txt"));
        let p = path.to_str().unwrap();
        let (code, err) = invoke(&["export", &k.to_string(), "--out", p]);
        ensure(code == EXIT_OK, || format!("export k={k}: {err}"))?;
        let (code, err) = invoke(&["import", p]);
        ensure(code == EXIT_OK, || format!("import k={k}: {err}"))?;

        let params = ok_or(make_params(k))?;
        let expected: Vec<_> = ok_or(enumerate_points(&params, 4))?
            .map(|(_, x)| x)
            .collect();
        let set = ok_or(read_pointset(ok_or(fs::read(&path))?.as_slice()))?;
        ensure(set.params == params, || format!("k={k}: params differ"))?;
        ensure(set.points == expected, || format!("k={k}: points differ"))?;
    }

    let path = dir.path().join("k2.txt");
    let text = ok_or(fs::read_to_string(&path))?;
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let width = lines[1].len();
    let value = ok_or(u128::from_str_radix(&lines[1], 16))? ^ 1;
    lines[1] = format!("{value:0width$x}");
    let corrupt = dir.path().join("corrupt.txt");
    ok_or(fs::write(&corrupt, lines.join("\n") + "\n"))?;
    let (code, err) = invoke(&["import", corrupt.to_str().unwrap()]);
    ensure(code == EXIT_FAILED, || {
        format!("corrupted file exit {code}")
    })?;
    ensure(err.contains("popcount"), || {
        format!("unexpected message: {err}")
    })?;
    Ok("k=1..4 lossless, bad popcount -> exit 1".into())
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, Check, Option<Duration>); 11] = [
        (
            1,
            "table regression",
            table_regression,
            Some(Duration::from_secs(1)),
        ),
        (2, "range regression", range_regression, None),
        (
            3,
            "four formulas and sandwich",
            four_formulas,
            Some(Duration::from_secs(10)),
        ),
        (
            4,
            "exhaustive identities",
            identities,
            Some(Duration::from_secs(120)),
        ),
        (5, "diameter census", diameter, None),
        (
            6,
            "conflict-free family at k=2",
            conflict_free_family,
            Some(Duration::from_secs(60)),
        ),
        (7, "spectrum equivalence", spectrum, None),
        (8, "affine rank", rank, None),
        (9, "greedy cover", cover, None),
        (10, "chain coverage", chain, Some(Duration::from_secs(30))),
        (11, "export/import round trip", round_trip, None),
    ];

    let mut failures = 0;
    for (id, name, check, limit) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(check)
            .unwrap_or_else(|_| Err("panicked".into()))
            .and_then(|detail| match limit {
                Some(limit) if start.elapsed() > limit => {
                    Err(format!("{detail}; took longer than {limit:?}"))
                }
                _ => Ok(detail),
            });
        let elapsed = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name} ({elapsed:.3}s): {detail}"),
            Err(why) => {
                failures += 1;
                println!("FAIL {id:>2} {name} ({elapsed:.3}s): {why}");
            }
        }
    }
    println!("{} of 11 criteria passed", 11 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
