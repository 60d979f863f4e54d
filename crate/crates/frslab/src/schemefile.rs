//! Scheme files: TOML documents read through serde and written in the
//! canonical layout of [`canonical_text`].

use frslab_core::poly::{parse_int_poly, parse_rat_poly, IntPoly, PolyMap, RatPoly};
use frslab_core::scheme::{canonical_text, CiaWitness, CoverCertificate, CoverOpen, SchemePresentation};
use frslab_core::{Error, Result};
use num_bigint::BigInt;
use serde::Deserialize;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemeDoc {
    name: String,
    vars: Vec<String>,
    #[serde(rename = "dim_Q")]
    dim_q: u32,
    #[serde(default)]
    generators: Vec<String>,
    #[serde(default)]
    tags: Vec<String>,
    cia: Option<CiaDoc>,
    cover: Option<CoverDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CiaDoc {
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "N")]
    n: usize,
    vars: Option<Vec<String>>,
    phi: Vec<String>,
    psi: Vec<String>,
    membership: Option<Vec<Vec<String>>>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub(crate) enum IntText {
    Int(i64),
    Text(String),
}

impl IntText {
    pub(crate) fn to_bigint(&self, what: &str) -> Result<BigInt> {
        match self {
            IntText::Int(v) => Ok(BigInt::from(*v)),
            IntText::Text(s) => s.trim().parse().map_err(|_| Error::Parse(format!("{what}: {s:?} is not an integer"))),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoverDoc {
    #[serde(rename = "D")]
    d: IntText,
    #[serde(default)]
    syzygy: Vec<String>,
    #[serde(default)]
    opens: Vec<OpenDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct OpenDoc {
    g: String,
    c: String,
}

fn check_ident(v: &str) -> Result<()> {
    let mut chars = v.chars();
    let ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{v:?} is not a variable name")))
    }
}

fn check_vars(vars: &[String]) -> Result<()> {
    for (i, v) in vars.iter().enumerate() {
        check_ident(v)?;
        if vars[..i].contains(v) {
            return Err(Error::InvalidInput(format!("variable {v} listed twice")));
        }
    }
    Ok(())
}

fn ints(polys: &[String], vars: &[String]) -> Result<Vec<IntPoly>> {
    polys.iter().map(|s| parse_int_poly(s, vars)).collect()
}

fn rats(polys: &[String], vars: &[String]) -> Result<Vec<RatPoly>> {
    polys.iter().map(|s| parse_rat_poly(s, vars)).collect()
}

pub(crate) fn toml_error(e: toml::de::Error) -> Error {
    Error::Parse(e.message().to_string())
}

/// Parse a scheme file. Structural problems are errors; certificates are
/// only checked by the operations that rely on them.
pub fn parse_scheme(text: &str) -> Result<SchemePresentation> {
    let doc: SchemeDoc = toml::from_str(text).map_err(toml_error)?;
    check_vars(&doc.vars)?;
    let generators = ints(&doc.generators, &doc.vars)?;
    if doc.dim_q as usize > doc.vars.len() {
        return Err(Error::InvalidInput(format!("dim_Q = {} exceeds the {} variables", doc.dim_q, doc.vars.len())));
    }
    let cia = doc.cia.map(|c| cia_from(c, &doc.vars)).transpose()?;
    let cover = doc.cover.map(|c| cover_from(c, &doc.vars)).transpose()?;
    Ok(SchemePresentation { name: doc.name, vars: doc.vars, generators, dim_q: doc.dim_q, cia, cover, tags: doc.tags })
}

fn cia_from(c: CiaDoc, vars: &[String]) -> Result<CiaWitness> {
    let ambient_vars = c.vars.unwrap_or_else(|| (1..=c.m).map(|i| format!("u{i}")).collect());
    check_vars(&ambient_vars)?;
    if ambient_vars.len() != c.m {
        return Err(Error::InvalidInput(format!("cia: M = {} but {} ambient variables", c.m, ambient_vars.len())));
    }
    if c.phi.len() != c.n || c.n == 0 {
        return Err(Error::InvalidInput(format!("cia: N = {} but phi has {} components", c.n, c.phi.len())));
    }
    if c.psi.len() != c.m {
        return Err(Error::InvalidInput(format!("cia: psi has {} components, expected M = {}", c.psi.len(), c.m)));
    }
    let phi = PolyMap::new(c.m, rats(&c.phi, &ambient_vars)?)?;
    let psi = rats(&c.psi, vars)?;
    let membership = c.membership.map(|rows| rows.iter().map(|row| rats(row, vars)).collect::<Result<Vec<_>>>()).transpose()?;
    Ok(CiaWitness { ambient_vars, phi, psi, membership })
}

fn cover_from(c: CoverDoc, vars: &[String]) -> Result<CoverCertificate> {
    let opens = c
        .opens
        .iter()
        .map(|o| Ok(CoverOpen { g: parse_int_poly(&o.g, vars)?, c: parse_int_poly(&o.c, vars)? }))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoverCertificate { opens, d: c.d.to_bigint("cover.D")?, syzygy: ints(&c.syzygy, vars)? })
}

/// The canonical text of a presentation.
pub fn write_scheme(x: &SchemePresentation) -> String {
    canonical_text(x)
}

/// Parse and rewrite in canonical form.
pub fn canonicalize(text: &str) -> Result<String> {
    parse_scheme(text).map(|x| write_scheme(&x))
}
