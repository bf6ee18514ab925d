//! Text format for filtered complexes:
//!
//! ```text
//! fcx v1 <n_generators>
//! <id> <degree> <numerator>/<denominator>
//! ...
//! d <id_from> <id_to>
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use crate::error::{Error, Result};
use crate::rational::parse_rational;

use super::complex::{FilteredComplex, Generator};

pub fn parse_fcx(text: &str) -> Result<FilteredComplex> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        message: "empty input".into(),
    })?;
    let h: Vec<&str> = header.split_whitespace().collect();
    if h.len() != 3 || h[0] != "fcx" || h[1] != "v1" {
        return Err(Error::Parse {
            line: hline,
            message: format!("expected `fcx v1 <n>`, got {header:?}"),
        });
    }
    let n: usize = h[2].parse().map_err(|_| Error::Parse {
        line: hline,
        message: "bad generator count".into(),
    })?;
    let mut gens = Vec::with_capacity(n);
    let mut entries = Vec::new();
    for (line, l) in lines {
        let parts: Vec<&str> = l.split_whitespace().collect();
        let err = |message: String| Error::Parse { line, message };
        if parts.first() == Some(&"d") {
            if parts.len() != 3 {
                return Err(err("expected `d <from> <to>`".into()));
            }
            entries.push((parts[1].to_string(), parts[2].to_string()));
            continue;
        }
        if !entries.is_empty() {
            return Err(err("generator line after differential entries".into()));
        }
        if parts.len() != 3 {
            return Err(err("expected `<id> <degree> <action>`".into()));
        }
        let degree: u8 = parts[1]
            .parse()
            .ok()
            .filter(|d| *d <= 1)
            .ok_or_else(|| err(format!("degree must be 0 or 1, got {}", parts[1])))?;
        let action = parse_rational(parts[2]).map_err(|e| err(e.to_string()))?;
        gens.push(Generator::new(parts[0], degree, action));
    }
    if gens.len() != n {
        return Err(Error::Parse {
            line: hline,
            message: format!("header declares {n} generators, found {}", gens.len()),
        });
    }
    FilteredComplex::new(gens, &entries)
}

pub fn write_fcx(complex: &FilteredComplex) -> String {
    let mut out = format!("fcx v1 {}\n", complex.len());
    for g in complex.generators() {
        let a = &g.action;
        out.push_str(&format!(
            "{} {} {}/{}\n",
            g.id,
            g.degree,
            a.numer(),
            a.denom()
        ));
    }
    for (from, to) in complex.entries() {
        let gens = complex.generators();
        out.push_str(&format!("d {} {}\n", gens[from].id, gens[to].id));
    }
    out
}
