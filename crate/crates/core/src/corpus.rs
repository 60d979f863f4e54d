//! Reference schemes used by tests, benchmarks and the CLI examples.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::poly::{parse_int_poly, parse_rat_poly, IntPoly, PolyMap, RatPoly};
use crate::scheme::{CiaWitness, CoverCertificate, CoverOpen, SchemePresentation};

pub const SMOOTH: &str = "smooth";
pub const RATIONAL_SING: &str = "known-rational-sing";
pub const NON_RATIONAL: &str = "known-non-rational";

fn names(vars: &[&str]) -> Vec<String> {
    vars.iter().map(|v| String::from(*v)).collect()
}

fn ip(s: &str, vars: &[&str]) -> IntPoly {
    parse_int_poly(s, &names(vars)).expect("corpus polynomial")
}

fn rp(s: &str, vars: &[&str]) -> RatPoly {
    parse_rat_poly(s, &names(vars)).expect("corpus polynomial")
}

fn hypersurface(name: &str, vars: &[&str], f: &str, tags: &[&str]) -> SchemePresentation {
    let dim = vars.len() as u32 - 1;
    SchemePresentation::new(name, vars, vec![ip(f, vars)], dim).with_tags(tags)
}

/// Affine space of dimension `d <= 3`.
pub fn affine(d: usize) -> SchemePresentation {
    let vars = &["x", "y", "z"][..d];
    SchemePresentation::new(&format!("A{d}"), vars, Vec::new(), d as u32).with_tags(&[SMOOTH, RATIONAL_SING])
}

/// `x^2 = 0`, non-reduced.
pub fn double_point() -> SchemePresentation {
    hypersurface("double-point", &["x"], "x^2", &[NON_RATIONAL])
}

/// `xy = 0`, two crossing lines.
pub fn node() -> SchemePresentation {
    hypersurface("node", &["x", "y"], "x*y", &[NON_RATIONAL])
}

/// `x^2 - 2`, two conjugate points.
pub fn quadratic_points() -> SchemePresentation {
    hypersurface("x2-minus-2", &["x"], "x^2 - 2", &[SMOOTH, RATIONAL_SING])
}

/// Quadric cone `x^2 + y^2 + z^2 = 0`.
pub fn cone() -> SchemePresentation {
    hypersurface("cone", &["x", "y", "z"], "x^2 + y^2 + z^2", &[RATIONAL_SING])
}

/// Cusp `y^2 = x^3`.
pub fn cusp() -> SchemePresentation {
    hypersurface("cusp", &["x", "y"], "y^2 - x^3", &[NON_RATIONAL])
}

/// Affine elliptic curve `y^2 = x^3 + x + 1`, discriminant `-496 = -2^4 * 31`.
pub fn elliptic() -> SchemePresentation {
    hypersurface("elliptic", &["x", "y"], "y^2 - x^3 - x - 1", &[SMOOTH, RATIONAL_SING])
}

/// `2x^2 - y` with the witness `phi = x^2 - y/2`, `psi = id`.
pub fn hat_base() -> SchemePresentation {
    let v = ["x", "y"];
    let mut x = hypersurface("hat-base", &v, "2*x^2 - y", &[SMOOTH, RATIONAL_SING]);
    x.cia = Some(CiaWitness {
        ambient_vars: names(&v),
        phi: PolyMap::new(2, vec![rp("x^2 - 1/2*y", &v)]).expect("one component"),
        psi: vec![rp("x", &v), rp("y", &v)],
        membership: Some(vec![vec![rp("1/2", &v)]]),
    });
    x
}

/// `A^1` covered by `D(x)` and `D(x - 1)`: `x - (x - 1) - 1 = 0`.
pub fn affine_line_cover() -> SchemePresentation {
    let v = ["x"];
    let mut x = SchemePresentation::new("A1-two-charts", &v, Vec::new(), 1).with_tags(&[SMOOTH, RATIONAL_SING]);
    x.cover = Some(CoverCertificate {
        opens: vec![CoverOpen { g: ip("x", &v), c: ip("1", &v) }, CoverOpen { g: ip("x - 1", &v), c: ip("-1", &v) }],
        d: BigInt::from(1),
        syzygy: Vec::new(),
    });
    x
}

pub fn all() -> Vec<SchemePresentation> {
    vec![
        affine(1),
        affine(2),
        affine(3),
        double_point(),
        node(),
        quadratic_points(),
        cone(),
        cusp(),
        elliptic(),
        hat_base(),
        affine_line_cover(),
    ]
}
