//! Machine-readable JSON documents.
//!
//! Documents are single JSON objects with a `kind` tag and no timestamps,
//! so identical inputs serialize to identical bytes, and every emitted
//! presentation re-parses into the structures it was built from.

use serde::{Deserialize, Serialize};

use foldings::freegroup::{Alphabet, Letter, Word};
use foldings::presentation::{Certificate, CertificateLevel, Presentation};

use crate::CliError;

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct FoldDoc {
    pub kind: String,
    pub alphabet: Vec<String>,
    pub rank: usize,
    pub basis: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ReductionInfo {
    pub m: usize,
    pub p: usize,
    pub b: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct RelatorDoc {
    pub index: usize,
    pub w: String,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct LevelDoc {
    pub level: usize,
    pub free: bool,
    pub words: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct WitnessDoc {
    pub generator: String,
    pub q: usize,
    pub a_word: String,
    pub r: usize,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct PresentationDoc {
    pub kind: String,
    pub alphabet: Vec<String>,
    pub stable_letter: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reduction: Option<ReductionInfo>,
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub relators: Vec<RelatorDoc>,
    pub certified_depth: usize,
    pub restart_count: usize,
    pub certificate: Vec<LevelDoc>,
    pub witnesses: Vec<WitnessDoc>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct FreeSubgroupDoc {
    pub kind: String,
    pub alphabet: Vec<String>,
    pub k: usize,
    pub conjugated: Vec<String>,
    pub basis: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct StableReductionDoc {
    pub m: usize,
    pub p: usize,
    pub b: String,
    pub stable_letter: String,
    pub generators: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ReduceDoc {
    pub kind: String,
    pub alphabet: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub free: Option<FreeSubgroupDoc>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stable: Option<StableReductionDoc>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct NormalFormDoc {
    pub kind: String,
    pub q: usize,
    pub x: String,
    pub r: usize,
}

/// Render a relator or witness word over the presentation symbol names
/// `a1..am, b1..br`.
pub fn format_symbols(w: &Word, num_a: usize) -> String {
    foldings::freegroup::format_word_with(w, |g| {
        if g < num_a {
            format!("a{}", g + 1)
        } else {
            format!("b{}", g - num_a + 1)
        }
    })
}

/// Parse a word over the symbol names back into symbol indices.
pub fn parse_symbols(s: &str, num_a: usize, num_b: usize) -> Result<Word, CliError> {
    let mut letters = Vec::new();
    for token in s.split_whitespace() {
        if token == "1" {
            continue;
        }
        let (base, sign) = Alphabet::split_token(token);
        let bad = || CliError::Input(format!("unknown presentation symbol {token:?}"));
        let index: usize = base[1..].parse().map_err(|_| bad())?;
        let gen = match base.as_bytes().first() {
            Some(b'a') if (1..=num_a).contains(&index) => index - 1,
            Some(b'b') if (1..=num_b).contains(&index) => num_a + index - 1,
            _ => return Err(bad()),
        };
        letters.push(Letter::new(gen, sign));
    }
    Ok(Word::reduce(letters))
}

impl PresentationDoc {
    pub fn from_presentation(
        alphabet: &Alphabet,
        stable: &str,
        reduction: Option<ReductionInfo>,
        pres: &Presentation,
        witnesses: Vec<WitnessDoc>,
    ) -> PresentationDoc {
        let num_a = pres.a_words.len();
        PresentationDoc {
            kind: "presentation".into(),
            alphabet: alphabet.names().to_vec(),
            stable_letter: stable.into(),
            reduction,
            a: pres.a_words.iter().map(|w| alphabet.format_word(w)).collect(),
            b: pres.b_words.iter().map(|w| alphabet.format_word(w)).collect(),
            relators: pres
                .relators
                .iter()
                .enumerate()
                .map(|(j, w)| RelatorDoc { index: j + 1, w: format_symbols(w, num_a) })
                .collect(),
            certified_depth: pres.certified_depth(),
            restart_count: pres.restart_count,
            certificate: pres
                .certificate
                .levels
                .iter()
                .map(|l| LevelDoc {
                    level: l.level,
                    free: l.free,
                    words: l.words.iter().map(|w| alphabet.format_word(w)).collect(),
                })
                .collect(),
            witnesses,
        }
    }

    /// Rebuild the presentation this document describes.
    pub fn to_presentation(&self, alphabet: &Alphabet) -> Result<Presentation, CliError> {
        if self.alphabet != alphabet.names() {
            return Err(CliError::Input(
                "presentation document alphabet does not match the problem".into(),
            ));
        }
        let parse_word = |s: &str| {
            alphabet.parse_word(s).map_err(|e| CliError::Input(format!("bad word {s:?}: {e}")))
        };
        let a_words: Vec<Word> = self.a.iter().map(|s| parse_word(s)).collect::<Result<_, _>>()?;
        let b_words: Vec<Word> = self.b.iter().map(|s| parse_word(s)).collect::<Result<_, _>>()?;
        let relators = self
            .relators
            .iter()
            .map(|r| parse_symbols(&r.w, a_words.len(), b_words.len()))
            .collect::<Result<_, _>>()?;
        let levels = self
            .certificate
            .iter()
            .map(|l| {
                Ok(CertificateLevel {
                    level: l.level,
                    free: l.free,
                    words: l.words.iter().map(|s| parse_word(s)).collect::<Result<_, _>>()?,
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(Presentation {
            a_words,
            b_words,
            relators,
            certificate: Certificate { levels },
            restart_count: self.restart_count,
        })
    }
}

/// Deterministic pretty serialization.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("documents serialize");
    out.push('\n');
    out
}
