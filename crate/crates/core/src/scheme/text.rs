//! Canonical TOML text of a presentation. The std crate parses the same
//! layout; output here is written by hand so the bytes are fixed.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use super::SchemePresentation;

fn quote(s: &str) -> String {
    let mut out = String::from("\"");
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c if c.is_control() => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn list<I: IntoIterator<Item = String>>(items: I) -> String {
    let inner: Vec<String> = items.into_iter().map(|s| quote(&s)).collect();
    format!("[{}]", inner.join(", "))
}

pub fn canonical_text(x: &SchemePresentation) -> String {
    let vars = &x.vars;
    let mut out = String::new();
    let _ = writeln!(out, "name = {}", quote(&x.name));
    let _ = writeln!(out, "vars = {}", list(vars.iter().cloned()));
    let _ = writeln!(out, "dim_Q = {}", x.dim_q);
    let _ = writeln!(out, "generators = {}", list(x.generators.iter().map(|g| g.display(vars).to_string())));
    if !x.tags.is_empty() {
        let _ = writeln!(out, "tags = {}", list(x.tags.iter().cloned()));
    }
    if let Some(w) = &x.cia {
        let amb = &w.ambient_vars;
        out.push_str("\n[cia]\n");
        let _ = writeln!(out, "M = {}", w.ambient_dim());
        let _ = writeln!(out, "N = {}", w.equations());
        let _ = writeln!(out, "vars = {}", list(amb.iter().cloned()));
        let _ = writeln!(out, "phi = {}", list(w.phi.components().iter().map(|f| f.display(amb).to_string())));
        let _ = writeln!(out, "psi = {}", list(w.psi.iter().map(|f| f.display(vars).to_string())));
        if let Some(rows) = &w.membership {
            let rows: Vec<String> =
                rows.iter().map(|row| list(row.iter().map(|a| a.display(vars).to_string()))).collect();
            let _ = writeln!(out, "membership = [{}]", rows.join(", "));
        }
    }
    if let Some(cov) = &x.cover {
        out.push_str("\n[cover]\n");
        match i64::try_from(&cov.d) {
            Ok(d) => writeln!(out, "D = {d}"),
            Err(_) => writeln!(out, "D = {}", quote(&cov.d.to_string())),
        }
        .ok();
        let _ = writeln!(out, "syzygy = {}", list(cov.syzygy.iter().map(|h| h.display(vars).to_string())));
        for o in &cov.opens {
            out.push_str("\n[[cover.opens]]\n");
            let _ = writeln!(out, "g = {}", quote(&o.g.display(vars).to_string()));
            let _ = writeln!(out, "c = {}", quote(&o.c.display(vars).to_string()));
        }
    }
    out
}
