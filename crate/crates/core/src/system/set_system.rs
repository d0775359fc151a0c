use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A finite system of set equations `ς_i = {ς_{i,1}, …, ς_{i,m_i}}`.
///
/// `rhs[i]` lists the unknown indices on the right-hand side of equation `i`
/// (the flattened index map). Duplicates are removed on construction, keeping
/// the first occurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetSystem {
    rhs: Vec<Vec<usize>>,
    names: Vec<String>,
}

impl SetSystem {
    /// Builds a system with default names `s0, s1, …`.
    pub fn new(rhs: Vec<Vec<usize>>) -> Result<SetSystem> {
        let names = (0..rhs.len()).map(|i| format!("s{i}")).collect();
        SetSystem::with_names(rhs, names)
    }

    pub fn with_names(rhs: Vec<Vec<usize>>, names: Vec<String>) -> Result<SetSystem> {
        if names.len() != rhs.len() {
            return Err(Error::InvalidSystem(format!(
                "{} names for {} equations",
                names.len(),
                rhs.len()
            )));
        }
        let n = rhs.len();
        let mut cleaned = Vec::with_capacity(n);
        for (i, row) in rhs.into_iter().enumerate() {
            let mut seen = vec![false; n];
            let mut out = Vec::with_capacity(row.len());
            for u in row {
                if u >= n {
                    return Err(Error::InvalidSystem(format!(
                        "equation {i} refers to unknown {u}, but there are only {n}"
                    )));
                }
                if !std::mem::replace(&mut seen[u], true) {
                    out.push(u);
                }
            }
            cleaned.push(out);
        }
        Ok(SetSystem {
            rhs: cleaned,
            names,
        })
    }

    /// Number of unknowns.
    pub fn len(&self) -> usize {
        self.rhs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rhs.is_empty()
    }

    pub fn rhs(&self, i: usize) -> &[usize] {
        &self.rhs[i]
    }

    pub fn equations(&self) -> &[Vec<usize>] {
        &self.rhs
    }

    /// `m_i`, the number of members on the right of equation `i`.
    pub fn arity(&self, i: usize) -> usize {
        self.rhs[i].len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

impl fmt::Display for SetSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rhs.iter().enumerate() {
            let members: Vec<&str> = row.iter().map(|&u| self.names[u].as_str()).collect();
            if members.is_empty() {
                writeln!(f, "{} = {{}}", self.names[i])?;
            } else {
                writeln!(f, "{} = {{ {} }}", self.names[i], members.join(", "))?;
            }
        }
        Ok(())
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

/// Strips a trailing `#` comment and surrounding whitespace.
pub(crate) fn clean_line(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

impl FromStr for SetSystem {
    type Err = Error;

    /// Parses one equation per line: `name = { a, b, … }`, `{}` for empty.
    /// Blank lines and `#` comments are skipped. Equation order fixes the
    /// unknown order, so the first equation's unknown is index 0.
    fn from_str(text: &str) -> Result<SetSystem> {
        let mut names: Vec<String> = Vec::new();
        let mut bodies: Vec<(usize, Vec<String>)> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let lineno = lineno + 1;
            let line = clean_line(raw);
            if line.is_empty() {
                continue;
            }
            let (lhs, rhs) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(lineno, "expected `name = { … }`"))?;
            let lhs = lhs.trim();
            if !is_identifier(lhs) {
                return Err(Error::parse(
                    lineno,
                    format!("invalid unknown name '{lhs}'"),
                ));
            }
            let rhs = rhs.trim();
            let inner = rhs
                .strip_prefix('{')
                .and_then(|r| r.strip_suffix('}'))
                .ok_or_else(|| {
                    Error::parse(lineno, "right-hand side must be enclosed in braces")
                })?;
            let members = if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner
                    .split(',')
                    .map(|m| {
                        let m = m.trim();
                        if is_identifier(m) {
                            Ok(m.to_string())
                        } else {
                            Err(Error::parse(lineno, format!("invalid member name '{m}'")))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?
            };
            if index.insert(lhs.to_string(), names.len()).is_some() {
                return Err(Error::parse(
                    lineno,
                    format!("unknown '{lhs}' defined twice"),
                ));
            }
            names.push(lhs.to_string());
            bodies.push((lineno, members));
        }
        let rhs = bodies
            .into_iter()
            .map(|(lineno, members)| {
                members
                    .iter()
                    .map(|m| {
                        index
                            .get(m)
                            .copied()
                            .ok_or_else(|| Error::parse(lineno, format!("undefined unknown '{m}'")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        SetSystem::with_names(rhs, names)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_four_unknowns() {
        let s: SetSystem = "s1 = {s2, s3}\ns2 = {}\ns3 = {s3}\ns4 = {s2}\n"
            .parse()
            .unwrap();
        assert_eq!(s.equations(), &[vec![1, 2], vec![], vec![2], vec![1]]);
        assert_eq!(s.name(3), "s4");
        assert_eq!(
            s.to_string(),
            "s1 = { s2, s3 }\ns2 = {}\ns3 = { s3 }\ns4 = { s2 }\n"
        );
    }

    #[test]
    fn duplicates_removed_on_ingest() {
        let s: SetSystem = "a = { b, b, a }\nb = {}".parse().unwrap();
        assert_eq!(s.rhs(0), &[1, 0]);
        let t = SetSystem::new(vec![vec![0, 0, 0]]).unwrap();
        assert_eq!(t.arity(0), 1);
    }

    #[test]
    fn parse_errors() {
        assert!("a = {b}".parse::<SetSystem>().is_err());
        assert!("a = {}\na = {}".parse::<SetSystem>().is_err());
        assert!("a {}".parse::<SetSystem>().is_err());
        assert!("a = b".parse::<SetSystem>().is_err());
        assert!("1a = {}".parse::<SetSystem>().is_err());
        assert!(SetSystem::new(vec![vec![3]]).is_err());
        let err = "a = {}\nb = {c}".parse::<SetSystem>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn comments_and_blank_lines() {
        let s: SetSystem = "# omega\n\n  w = { w }  # self loop\n".parse().unwrap();
        assert_eq!(s.equations(), &[vec![0]]);
    }
}
