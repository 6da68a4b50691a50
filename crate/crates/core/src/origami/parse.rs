use serde::{Deserialize, Serialize};

use super::Origami;
use crate::error::{Error, Result};
use crate::perm::Permutation;

/// The one-line JSON encoding, 1-based.
#[derive(Serialize, Deserialize)]
struct OrigamiJson {
    n: usize,
    h: Vec<u32>,
    v: Vec<u32>,
}

/// Parses either the cycle format `h=(1 2 3)(4); v=(1 4)(2)(3)` or the
/// JSON one-line format `{"n":3,"h":[2,1,3],"v":[3,2,1]}`.
///
/// In the cycle format fixed points may be omitted; the square count is
/// the largest label mentioned.
pub fn parse_origami(text: &str) -> Result<Origami> {
    let t = text.trim();
    if t.starts_with('{') {
        parse_json(t)
    } else {
        parse_cycles(t)
    }
}

fn parse_json(t: &str) -> Result<Origami> {
    let raw: OrigamiJson = serde_json::from_str(t).map_err(|e| Error::Parse(format!("json: {e}")))?;
    if raw.h.len() != raw.n || raw.v.len() != raw.n {
        return Err(Error::Parse(format!("n = {} but h has {} and v has {} images", raw.n, raw.h.len(), raw.v.len())));
    }
    let to_zero = |xs: Vec<u32>| -> Result<Vec<u32>> {
        xs.into_iter()
            .map(|x| x.checked_sub(1).ok_or_else(|| Error::NotBijection("labels are 1-based".into())))
            .collect()
    };
    Origami::from_images(to_zero(raw.h)?, to_zero(raw.v)?)
}

fn parse_cycle_list(s: &str) -> Result<Vec<Vec<u32>>> {
    let mut cycles = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let inner_start = rest.strip_prefix('(').ok_or_else(|| Error::Parse(format!("expected '(' at {rest:?}")))?;
        let close = inner_start.find(')').ok_or_else(|| Error::Parse("unbalanced parenthesis".into()))?;
        let body = &inner_start[..close];
        let mut cycle = Vec::new();
        for tok in body.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let x: u32 = tok.parse().map_err(|_| Error::Parse(format!("bad label {tok:?}")))?;
            if x == 0 {
                return Err(Error::Parse("labels are 1-based".into()));
            }
            cycle.push(x - 1);
        }
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = inner_start[close + 1..].trim_start();
    }
    Ok(cycles)
}

fn parse_cycles(t: &str) -> Result<Origami> {
    let mut h = None;
    let mut v = None;
    for part in t.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, body) =
            part.split_once('=').ok_or_else(|| Error::Parse(format!("expected name=cycles, got {part:?}")))?;
        let cycles = parse_cycle_list(body)?;
        match name.trim() {
            "h" if h.is_none() => h = Some(cycles),
            "v" if v.is_none() => v = Some(cycles),
            other => return Err(Error::Parse(format!("unexpected or repeated key {other:?}"))),
        }
    }
    let h = h.ok_or_else(|| Error::Parse("missing h".into()))?;
    let v = v.ok_or_else(|| Error::Parse("missing v".into()))?;
    let n = h.iter().chain(v.iter()).flatten().map(|&x| x as usize + 1).max().unwrap_or(0);
    if n == 0 {
        return Err(Error::Parse("no squares".into()));
    }
    Origami::new(Permutation::from_cycles(n, &h)?, Permutation::from_cycles(n, &v)?)
}

fn cycle_string(p: &Permutation) -> String {
    let mut s = String::new();
    for c in p.cycles() {
        s.push('(');
        let labels: Vec<String> = c.iter().map(|x| (x + 1).to_string()).collect();
        s.push_str(&labels.join(" "));
        s.push(')');
    }
    s
}

impl Origami {
    /// `h=(..)(..); v=(..)`, every cycle listed (fixed points included),
    /// each cycle starting at its smallest label, cycles ordered by it.
    pub fn to_cycle_string(&self) -> String {
        format!("h={}; v={}", cycle_string(self.h()), cycle_string(self.v()))
    }

    /// Compact JSON, 1-based images.
    pub fn to_json_string(&self) -> String {
        let raw = OrigamiJson {
            n: self.n(),
            h: self.h().images().iter().map(|x| x + 1).collect(),
            v: self.v().images().iter().map(|x| x + 1).collect(),
        };
        serde_json::to_string(&raw).expect("plain struct serializes")
    }

    /// The JSON value form used inside larger documents.
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::from_str(&self.to_json_string()).expect("valid json")
    }
}
