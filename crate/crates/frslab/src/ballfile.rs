//! Ball-union files. Each line is `c_1 ... c_N k` for the ball of centre
//! `c` and radius `p^-k`; `---` separates the members of a family; `#`
//! starts a comment.

use frslab_core::padic::{Ball, BallUnion};
use frslab_core::{Error, Result};
use num_bigint::BigInt;

pub fn parse_balls(text: &str, p: u64) -> Result<Vec<BallUnion>> {
    let mut members = Vec::new();
    let mut current: Vec<Ball> = Vec::new();
    let mut dim: Option<usize> = None;
    let mut finish = |balls: &mut Vec<Ball>, dim: Option<usize>| -> Result<()> {
        members.push(BallUnion::new(p, dim.unwrap_or(1), std::mem::take(balls))?);
        Ok(())
    };
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line == "---" {
            finish(&mut current, dim)?;
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = |what: &str| Error::Parse(format!("line {}: {what}", lineno + 1));
        if fields.len() < 2 {
            return Err(bad("expected centre coordinates followed by k"));
        }
        let k: u32 = fields[fields.len() - 1].parse().map_err(|_| bad("k must be a nonnegative integer"))?;
        let center = fields[..fields.len() - 1]
            .iter()
            .map(|f| f.parse::<BigInt>().map_err(|_| bad("centre coordinates must be integers")))
            .collect::<Result<Vec<_>>>()?;
        match dim {
            Some(d) if d != center.len() => return Err(bad("dimension differs from earlier lines")),
            _ => dim = Some(center.len()),
        }
        current.push(Ball::new(p, center, k));
    }
    finish(&mut current, dim)?;
    Ok(members)
}

pub fn write_balls(members: &[BallUnion]) -> String {
    let blocks: Vec<String> = members
        .iter()
        .map(|u| {
            u.balls()
                .iter()
                .map(|b| {
                    let mut fields: Vec<String> = b.center().iter().map(BigInt::to_string).collect();
                    fields.push(b.radius_exp().to_string());
                    fields.join(" ") + "\n"
                })
                .collect()
        })
        .collect();
    blocks.join("---\n")
}
