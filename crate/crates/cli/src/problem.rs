//! Line-oriented sectioned problem files.
//!
//! ```text
//! [alphabet]
//! generators = e1 e2 e3
//!
//! [endomorphism]
//! e1 = e2
//! e2 = e2^-1 e3 e2
//! e3 = e2 e1^-1 e2
//!
//! [subgroup]
//! gen = t
//! gen = e3^-1 e1
//!
//! [options]
//! depth = 8
//! ```
//!
//! Word values follow the shared token grammar (`name` or `name^-1`,
//! whitespace separated, `1` for the empty word) and may be double-quoted.
//! `#` starts a comment line. `t` names the stable letter in the subgroup
//! section.

use std::fmt;

use foldings::freegroup::{Alphabet, Endo, Word};
use foldings::mapping_torus::TorusWord;

/// Parse error with a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ProblemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ProblemError {}

/// A parsed problem: the alphabet, the endomorphism, the subgroup
/// generators, and options.
#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub alphabet: Alphabet,
    pub endo: Endo,
    pub subgroup: Vec<TorusWord>,
    pub depth: Option<usize>,
    pub trace: bool,
}

struct RawLine {
    line_no: usize,
    key: String,
    value: String,
    value_col: usize,
    text: String,
}

fn err(line: usize, col: usize, message: impl Into<String>) -> ProblemError {
    ProblemError { line, col, message: message.into() }
}

/// Strip one pair of surrounding double quotes, if present.
fn unquote(s: &str) -> &str {
    s.strip_prefix('"').and_then(|s| s.strip_suffix('"')).unwrap_or(s)
}

/// Column of `token` inside the raw line, for error reporting.
fn token_col(raw: &RawLine, token: &str) -> usize {
    raw.text.find(token).map(|i| i + 1).unwrap_or(raw.value_col)
}

pub fn parse_problem(input: &str) -> Result<ProblemFile, ProblemError> {
    let mut sections: Vec<(String, usize, Vec<RawLine>)> = Vec::new();
    for (i, raw) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| err(line_no, raw.len(), "unterminated section header"))?;
            sections.push((name.trim().to_string(), line_no, Vec::new()));
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(line_no, 1, "expected `key = value` or `[section]`"))?;
        let section = sections
            .last_mut()
            .ok_or_else(|| err(line_no, 1, "entry before any [section] header"))?;
        let value = value.trim();
        let value_col = raw.find(value).map(|i| i + 1).unwrap_or(1);
        section.2.push(RawLine {
            line_no,
            key: key.trim().to_string(),
            value: unquote(value).to_string(),
            value_col,
            text: raw.to_string(),
        });
    }

    let find = |name: &str| sections.iter().find(|(n, _, _)| n == name);
    for (name, line_no, _) in &sections {
        if !["alphabet", "endomorphism", "subgroup", "options"].contains(&name.as_str()) {
            return Err(err(*line_no, 1, format!("unknown section [{name}]")));
        }
    }

    // [alphabet]
    let (_, alpha_line, alpha_lines) =
        find("alphabet").ok_or_else(|| err(1, 1, "missing [alphabet] section"))?;
    let gens_line = alpha_lines
        .iter()
        .find(|l| l.key == "generators")
        .ok_or_else(|| err(*alpha_line, 1, "missing `generators = ...` in [alphabet]"))?;
    let names: Vec<&str> = gens_line.value.split_whitespace().collect();
    let alphabet = Alphabet::new(names).map_err(|e| {
        err(gens_line.line_no, gens_line.value_col, e.to_string())
    })?;

    // [endomorphism]
    let (_, endo_line, endo_lines) =
        find("endomorphism").ok_or_else(|| err(1, 1, "missing [endomorphism] section"))?;
    let mut images: Vec<Option<Word>> = vec![None; alphabet.rank()];
    for l in endo_lines {
        let gen = alphabet.index_of(&l.key).ok_or_else(|| {
            err(l.line_no, 1, format!("unknown generator {:?} in [endomorphism]", l.key))
        })?;
        if images[gen].is_some() {
            return Err(err(l.line_no, 1, format!("duplicate image for {:?}", l.key)));
        }
        let word = alphabet.parse_word(&l.value).map_err(|e| {
            let token = match &e {
                foldings::Error::UnknownToken(tok) => tok.clone(),
                _ => String::new(),
            };
            err(l.line_no, token_col(l, &token), e.to_string())
        })?;
        images[gen] = Some(word);
    }
    let images: Vec<Word> = images
        .into_iter()
        .enumerate()
        .map(|(g, img)| {
            img.ok_or_else(|| {
                err(*endo_line, 1, format!("missing image for generator {:?}", alphabet.name(g)))
            })
        })
        .collect::<Result<_, _>>()?;
    let endo = Endo::new(images).expect("images parsed over the same alphabet");

    // [subgroup]
    let mut subgroup = Vec::new();
    if let Some((_, _, sub_lines)) = find("subgroup") {
        for l in sub_lines {
            if l.key != "gen" {
                return Err(err(l.line_no, 1, format!("unexpected key {:?} in [subgroup]", l.key)));
            }
            let w = TorusWord::parse(&alphabet, "t", &l.value).map_err(|e| {
                let token = match &e {
                    foldings::Error::UnknownToken(tok) => tok.clone(),
                    _ => String::new(),
                };
                err(l.line_no, token_col(l, &token), e.to_string())
            })?;
            subgroup.push(w);
        }
    }

    // [options]
    let mut depth = None;
    let mut trace = false;
    if let Some((_, _, opt_lines)) = find("options") {
        for l in opt_lines {
            match l.key.as_str() {
                "depth" => {
                    let d: usize = l.value.parse().map_err(|_| {
                        err(l.line_no, l.value_col, "depth must be a positive integer")
                    })?;
                    if d == 0 {
                        return Err(err(l.line_no, l.value_col, "depth must be at least 1"));
                    }
                    depth = Some(d);
                }
                "trace" => {
                    trace = match l.value.as_str() {
                        "true" => true,
                        "false" => false,
                        _ => {
                            return Err(err(l.line_no, l.value_col, "trace must be true or false"))
                        }
                    };
                }
                other => {
                    return Err(err(l.line_no, 1, format!("unknown option {other:?}")));
                }
            }
        }
    }

    Ok(ProblemFile { alphabet, endo, subgroup, depth, trace })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# running example
[alphabet]
generators = e1 e2 e3

[endomorphism]
e1 = e2
e2 = \"e2^-1 e3 e2\"
e3 = e2 e1^-1 e2

[subgroup]
gen = t
gen = e3^-1 e1

[options]
depth = 6
trace = true
";

    #[test]
    fn parses_the_sample() {
        let p = parse_problem(SAMPLE).unwrap();
        assert_eq!(p.alphabet.rank(), 3);
        assert_eq!(p.endo.image(1), &p.alphabet.parse_word("e2^-1 e3 e2").unwrap());
        assert_eq!(p.subgroup.len(), 2);
        assert_eq!(p.depth, Some(6));
        assert!(p.trace);
    }

    #[test]
    fn reports_line_and_column() {
        let bad = "[alphabet]\ngenerators = e1\n[endomorphism]\ne1 = e1 bogus\n";
        let e = parse_problem(bad).unwrap_err();
        assert_eq!(e.line, 4);
        assert_eq!(e.col, 9);
        assert!(e.message.contains("bogus"));
    }

    #[test]
    fn missing_image_is_an_error() {
        let bad = "[alphabet]\ngenerators = e1 e2\n[endomorphism]\ne1 = e2\n";
        let e = parse_problem(bad).unwrap_err();
        assert!(e.message.contains("missing image"));
    }

    #[test]
    fn stable_letter_allowed_only_in_subgroup() {
        let bad = "[alphabet]\ngenerators = e1 t\n[endomorphism]\ne1 = e1\n";
        assert!(parse_problem(bad).is_err());
        let ok = "[alphabet]\ngenerators = e1\n[endomorphism]\ne1 = e1\n[subgroup]\ngen = t e1 t^-1\n";
        let p = parse_problem(ok).unwrap();
        assert_eq!(p.subgroup[0].p_hom(), 0);
    }
}
