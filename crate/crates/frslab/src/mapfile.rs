//! Map files: `vars` and `components` of a polynomial map `A^M -> A^N`.

use frslab_core::poly::{parse_rat_poly, PolyMap};
use frslab_core::{Error, Result};
use num_rational::BigRational;
use serde::Deserialize;

use crate::schemefile::toml_error;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapDoc {
    #[serde(default)]
    name: Option<String>,
    vars: Vec<String>,
    components: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapFile {
    pub name: Option<String>,
    pub vars: Vec<String>,
    pub map: PolyMap<BigRational>,
}

pub fn parse_map(text: &str) -> Result<MapFile> {
    let doc: MapDoc = toml::from_str(text).map_err(toml_error)?;
    if doc.components.is_empty() {
        return Err(Error::InvalidInput("a map needs at least one component".into()));
    }
    let comps = doc.components.iter().map(|c| parse_rat_poly(c, &doc.vars)).collect::<Result<Vec<_>>>()?;
    let map = PolyMap::new(doc.vars.len(), comps)?;
    Ok(MapFile { name: doc.name, vars: doc.vars, map })
}

fn quoted(items: impl Iterator<Item = String>) -> String {
    let v: Vec<String> = items.map(|s| format!("{s:?}")).collect();
    format!("[{}]", v.join(", "))
}

pub fn write_map(m: &MapFile) -> String {
    let mut out = String::new();
    if let Some(n) = &m.name {
        out.push_str(&format!("name = {n:?}\n"));
    }
    out.push_str(&format!("vars = {}\n", quoted(m.vars.iter().cloned())));
    out.push_str(&format!(
        "components = {}\n",
        quoted(m.map.components().iter().map(|c| c.display(&m.vars).to_string()))
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "name = \"square\"\nvars = [\"x\", \"y\"]\ncomponents = [\"x^2\", \"1/2*y\"]\n";
        let m = parse_map(text).unwrap();
        assert_eq!(m.map.source_vars(), 2);
        assert_eq!(m.map.target_dim(), 2);
        assert_eq!(write_map(&m), text);
        assert!(parse_map("vars = [\"x\"]\ncomponents = []\n").is_err());
        assert!(parse_map("vars = [\"x\"]\ncomponents = [\"z\"]\n").is_err());
    }
}
