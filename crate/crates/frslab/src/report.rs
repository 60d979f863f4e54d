//! CSV and Markdown rendering. Rationals are written as `num/den`, counts
//! in decimal; nothing time-dependent goes into data columns.

use std::fmt::Write;

use frslab_core::asymptotics::{ClassificationReport, Verdict};
use frslab_core::constructions::Cell;
use frslab_core::count::{CountRecord, HOutcome, HSequence};
use frslab_core::padic::{EccentricityRecord, RatioEntry};
use num_rational::BigRational;
use num_traits::ToPrimitive;

pub fn rat(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn csv_string(rows: Vec<Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for row in rows {
        w.write_record(&row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 fields")
}

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|s| s.to_string()).collect()
}

pub const COUNT_COLUMNS: [&str; 9] = ["scheme", "p", "r", "n", "count", "h_num", "h_den", "method", "seconds"];

/// One count row per record; `seconds` is `NA` unless timings were requested.
pub fn count_csv(scheme: &str, dim_q: u32, recs: &[CountRecord], timings: bool) -> String {
    let mut rows = vec![header(&COUNT_COLUMNS)];
    for rec in recs {
        let h = frslab_core::count::h_value(&rec.count, rec.p, rec.n, rec.r, dim_q);
        let secs = match (timings, rec.elapsed) {
            (true, Some(s)) => format!("{s:.6}"),
            _ => "NA".into(),
        };
        rows.push(vec![
            scheme.into(),
            rec.p.to_string(),
            rec.r.to_string(),
            rec.n.to_string(),
            rec.count.to_string(),
            h.numer().to_string(),
            h.denom().to_string(),
            rec.method.to_string(),
            secs,
        ]);
    }
    csv_string(rows)
}

pub const LIMIT: &str = "LIMIT";

pub fn hseq_csv(scheme: &str, seq: &HSequence) -> String {
    let mut rows = vec![header(&["scheme", "p", "r", "n", "count", "h_num", "h_den", "method"])];
    for e in &seq.entries {
        let mut row = vec![scheme.to_string(), seq.p.to_string(), seq.r.to_string(), e.n.to_string()];
        match &e.outcome {
            HOutcome::Value { count, h, method } => {
                row.extend([count.to_string(), h.numer().to_string(), h.denom().to_string(), method.to_string()])
            }
            HOutcome::Limit(_) => row.extend([LIMIT; 4].map(String::from)),
        }
        rows.push(row);
    }
    csv_string(rows)
}

fn cells_text(cells: &[Cell]) -> String {
    cells.iter().map(|c| format!("p{}r{}n{}", c.p, c.r, c.n)).collect::<Vec<_>>().join(" ")
}

fn dec(r: &BigRational) -> String {
    format!("{:.4}", r.to_f64().unwrap_or(f64::NAN))
}

/// One row per test result, each with the grid cells it used.
pub fn classify_csv(rep: &ClassificationReport) -> String {
    let mut rows = vec![header(&["scheme", "test", "p", "r", "verdict", "value", "cells"])];
    let name = rep.name.clone();
    let mut push = |test: &str, p: String, r: String, v: String, value: String, cells: String| {
        rows.push(vec![name.clone(), test.into(), p, r, v, value, cells]);
    };
    for b in &rep.cond_iv_prime {
        let sup = b.sup.as_ref().map(rat).unwrap_or_default();
        push("boundedness", b.p.to_string(), b.r.to_string(), b.verdict.to_string(), sup, cells_text(&b.cells));
    }
    for (p, v) in &rep.cond_v {
        let cells: Vec<Cell> = rep.cond_iv_prime.iter().filter(|b| b.p == *p && b.r == 1).flat_map(|b| b.cells.clone()).collect();
        push("bounded-per-prime", p.to_string(), "1".into(), v.to_string(), String::new(), cells_text(&cells));
    }
    let c2 = &rep.cond_ii;
    for (p, v) in &c2.per_prime {
        let cells: Vec<Cell> = c2.cells.iter().filter(|c| c.p == *p).copied().collect();
        push("envelope", p.to_string(), "1".into(), v.to_string(), rat(&c2.c_squared), cells_text(&cells));
    }
    push("envelope", "all".into(), "1".into(), c2.verdict.to_string(), rat(&c2.c_squared), cells_text(&c2.cells));
    if let Some(c1) = &rep.cond_i {
        let primes: Vec<String> = c1.cells.iter().map(|c| c.p.to_string()).collect();
        let last = c1.deviation.last().map(rat).unwrap_or_default();
        push("large-prime", primes.join(" "), "1".into(), c1.verdict.to_string(), last, cells_text(&c1.cells));
    }
    if let Some(s) = &rep.smooth {
        for e in &s.entries {
            let v = match e.first_failure {
                Some(n) => format!("exceptional at n={n}"),
                None => "stable".into(),
            };
            let h1 = e.h1.as_ref().map(rat).unwrap_or_default();
            push("smooth-stability", e.p.to_string(), "1".into(), v, h1, cells_text(&e.cells));
        }
    }
    for (seq, g) in rep.sequences.iter().zip(&rep.growth) {
        let cells: Vec<Cell> = seq.counts().iter().map(|(n, _)| Cell { p: seq.p, r: seq.r, n: *n }).collect();
        let (v, value) = match g {
            Some(g) => (if g.h_nondecreasing { "nondecreasing" } else { "not monotone" }.to_string(), rat(&g.alpha)),
            None => ("not fitted".into(), String::new()),
        };
        push("growth-fit", seq.p.to_string(), seq.r.to_string(), v, value, cells_text(&cells));
    }
    push("overall", String::new(), String::new(), rep.verdict.to_string(), rep.implication.clone(), String::new());
    csv_string(rows)
}

fn verdict_md(v: Verdict) -> String {
    format!("`{v}`")
}

pub fn classify_markdown(rep: &ClassificationReport) -> String {
    let mut s = String::new();
    let g = &rep.grid;
    let th = &rep.thresholds;
    let primes: Vec<String> = g.primes.iter().map(u64::to_string).collect();
    let rs: Vec<String> = g.rs.iter().map(u32::to_string).collect();
    let _ = writeln!(s, "# Classification of `{}`\n", rep.name);
    let _ = writeln!(s, "- scheme hash: `{}`", rep.scheme);
    let _ = writeln!(s, "- grid: p in {{{}}}, r in {{{}}}, n <= {}", primes.join(", "), rs.join(", "), g.n_max);
    let _ = writeln!(
        s,
        "- thresholds: tau = {}, tail length = {}, stability slack = {}\n",
        rat(&th.tau),
        th.tail_for(g.n_max),
        rat(&th.stable_eps)
    );
    let _ = writeln!(s, "**Verdict: {}**, {}.\n", rep.verdict, rep.implication);

    let _ = writeln!(s, "## h values\n");
    let ns: Vec<String> = (1..=g.n_max).map(|n| format!("n={n}")).collect();
    let _ = writeln!(s, "| p | r | {} |", ns.join(" | "));
    let _ = writeln!(s, "|---|---|{}", "---|".repeat(g.n_max as usize));
    for seq in &rep.sequences {
        let vals: Vec<String> = seq
            .entries
            .iter()
            .map(|e| match &e.outcome {
                HOutcome::Value { h, .. } => rat(h),
                HOutcome::Limit(_) => LIMIT.into(),
            })
            .collect();
        let _ = writeln!(s, "| {} | {} | {} |", seq.p, seq.r, vals.join(" | "));
    }

    let _ = writeln!(s, "\n## Boundedness in n\n");
    let _ = writeln!(s, "| p | r | sup h | running max stable from | verdict |");
    let _ = writeln!(s, "|---|---|---|---|---|");
    for b in &rep.cond_iv_prime {
        let sup = b.sup.as_ref().map(rat).unwrap_or_default();
        let st = b.stabilized_at.map(|i| format!("n={i}")).unwrap_or_else(|| "-".into());
        let _ = writeln!(s, "| {} | {} | {} | {} | {} |", b.p, b.r, sup, st, verdict_md(b.verdict));
    }
    let per_p: Vec<String> = rep.cond_v.iter().map(|(p, v)| format!("p={p}: {v}")).collect();
    let _ = writeln!(s, "\nPrime fields only (r = 1): {}.", per_p.join(", "));

    let c2 = &rep.cond_ii;
    let _ = writeln!(s, "\n## Envelope |h - 1| <= C p^(-1/2)\n");
    let worst = c2.worst.map(|c| format!(" at p={}, n={}", c.p, c.n)).unwrap_or_default();
    let _ = writeln!(s, "C_fit ~ {:.4} (C^2 = {}{worst}); verdict {}.", c2.c_fit, rat(&c2.c_squared), verdict_md(c2.verdict));
    let per_p: Vec<String> = c2.per_prime.iter().map(|(p, v)| format!("p={p}: {v}")).collect();
    let _ = writeln!(s, "Per prime: {}.", per_p.join(", "));

    let _ = writeln!(s, "\n## Large-prime limit\n");
    match &rep.cond_i {
        Some(c1) => {
            let rows: Vec<String> =
                c1.cells.iter().zip(&c1.deviation).map(|(c, d)| format!("p={}: |h-1| = {}", c.p, rat(d))).collect();
            let _ = writeln!(s, "At n = {}: {}; verdict {}.", c1.n, rows.join(", "), verdict_md(c1.verdict));
        }
        None => {
            let _ = writeln!(s, "Not run (needs at least 3 primes).");
        }
    }

    if let Some(sm) = &rep.smooth {
        let _ = writeln!(s, "\n## Smooth stability\n");
        for e in &sm.entries {
            let what = match e.first_failure {
                Some(n) => format!("h(n) differs from h(1) first at n={n}"),
                None => format!("h(n) = h(1) for n <= {}", sm.n_max),
            };
            let _ = writeln!(s, "- p={}: {what}", e.p);
        }
        let ex: Vec<String> = sm.exceptional.iter().map(u64::to_string).collect();
        let _ = writeln!(s, "\nExceptional primes: {{{}}}; verdict {}.", ex.join(", "), verdict_md(sm.verdict));
    }

    let _ = writeln!(s, "\n## Growth of counts\n");
    let _ = writeln!(s, "| p | r | alpha | max residual | exact logs | h nondecreasing |");
    let _ = writeln!(s, "|---|---|---|---|---|---|");
    for (seq, gf) in rep.sequences.iter().zip(&rep.growth) {
        match gf {
            Some(f) => {
                let _ = writeln!(
                    s,
                    "| {} | {} | {} | {:.4} | {} | {} |",
                    seq.p,
                    seq.r,
                    dec(&f.alpha),
                    f.max_residual,
                    f.exact,
                    f.h_nondecreasing
                );
            }
            None => {
                let _ = writeln!(s, "| {} | {} | - | - | - | - |", seq.p, seq.r);
            }
        }
    }

    let _ = writeln!(s, "\n## Caveats\n");
    for c in &rep.caveats {
        let _ = writeln!(s, "- {c}");
    }
    s
}

pub fn pushforward_csv(rows: &[(u32, BigRational, BigRational)]) -> String {
    let mut out = vec![header(&["n", "mass", "haar"])];
    out.extend(rows.iter().map(|(n, m, h)| vec![n.to_string(), rat(m), rat(h)]));
    csv_string(out)
}

/// `note` is `degenerate` where the listed balls overlap.
pub fn ratio_csv(rows: &[(RatioEntry, bool)]) -> String {
    let mut out = vec![header(&["n", "mass", "haar", "ratio", "note"])];
    out.extend(rows.iter().map(|(e, degenerate)| {
        vec![e.n.to_string(), rat(&e.mass), rat(&e.haar), rat(&e.ratio), if *degenerate { "degenerate" } else { "" }.into()]
    }));
    csv_string(out)
}

pub fn eccentricity_csv(recs: &[EccentricityRecord]) -> String {
    let mut out = vec![header(&["n", "min_enclosing_exp", "max_contained_exp", "ratio"])];
    out.extend(recs.iter().map(|r| {
        vec![r.index.to_string(), r.min_enclosing_exp.to_string(), r.max_contained_exp.to_string(), r.ratio.to_string()]
    }));
    csv_string(out)
}
