//! Freely reduced words over a finite basis, and endomorphisms given by
//! generator images.
//!
//! Words are kept in canonical reduced form at all times, so equality of
//! group elements is literal equality of letter sequences. Generators are
//! referenced by index everywhere; identifiers only appear at the I/O
//! boundary through [`Alphabet`].

use std::fmt;

use crate::error::Error;

/// Orientation of a letter: a generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// One signed generator occurrence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub sign: Sign,
}

impl Letter {
    pub fn new(gen: usize, sign: Sign) -> Letter {
        Letter { gen, sign }
    }

    pub fn plus(gen: usize) -> Letter {
        Letter::new(gen, Sign::Plus)
    }

    pub fn minus(gen: usize) -> Letter {
        Letter::new(gen, Sign::Minus)
    }

    pub fn inverse(self) -> Letter {
        Letter::new(self.gen, self.sign.flip())
    }

    fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.sign != other.sign
    }
}

/// A freely reduced word. The empty word is the identity.
///
/// The letter indices are not tied to a particular alphabet; the same type
/// carries words over free-group generators and words over basis symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Word {
        Word::default()
    }

    /// Freely reduce a raw letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Word {
        let mut letters: Vec<Letter> = Vec::new();
        for l in raw {
            match letters.last() {
                Some(&top) if top.cancels(l) => {
                    letters.pop();
                }
                _ => letters.push(l),
            }
        }
        Word { letters }
    }

    /// Freely reduce, rejecting letters whose generator index is out of range.
    pub fn reduce_checked<I: IntoIterator<Item = Letter>>(raw: I, rank: usize) -> Result<Word, Error> {
        let raw: Vec<Letter> = raw.into_iter().collect();
        for l in &raw {
            if l.gen >= rank {
                return Err(Error::GeneratorOutOfRange { index: l.gen, rank });
            }
        }
        Ok(Word::reduce(raw))
    }

    /// Single-letter word `gen`.
    pub fn generator(gen: usize) -> Word {
        Word { letters: vec![Letter::plus(gen)] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::reduce(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// Conjugate `b * self * b^-1`.
    pub fn conjugate(&self, b: &Word) -> Word {
        b.concat(self).concat(&b.inverse())
    }

    /// Largest generator index used, if any.
    pub fn max_gen(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.gen).max()
    }

    /// `self^n` for signed n.
    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }
}

const RESERVED: [&str; 2] = ["t", "s"];

/// Ordered list of distinct generator identifiers.
///
/// Identifiers match `[A-Za-z][A-Za-z0-9_]*`; `t` and `s` are reserved for
/// stable letters and rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

fn valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Alphabet {
    pub fn new<S: Into<String>, I: IntoIterator<Item = S>>(names: I) -> Result<Alphabet, Error> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if !valid_identifier(n) {
                return Err(Error::BadIdentifier(n.clone()));
            }
            if RESERVED.contains(&n.as_str()) {
                return Err(Error::ReservedIdentifier(n.clone()));
            }
            if names[..i].contains(n) {
                return Err(Error::DuplicateIdentifier(n.clone()));
            }
        }
        Ok(Alphabet { names })
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, gen: usize) -> &str {
        &self.names[gen]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Parse one token of the word grammar: an identifier with an optional
    /// `^-1` suffix. Returns the base identifier and the sign.
    pub fn split_token(token: &str) -> (&str, Sign) {
        match token.strip_suffix("^-1") {
            Some(base) => (base, Sign::Minus),
            None => (token, Sign::Plus),
        }
    }

    /// Parse a whitespace-separated word. The empty word is written `1`.
    pub fn parse_word(&self, s: &str) -> Result<Word, Error> {
        let mut letters = Vec::new();
        for token in s.split_whitespace() {
            if token == "1" {
                continue;
            }
            let (base, sign) = Alphabet::split_token(token);
            match self.index_of(base) {
                Some(gen) => letters.push(Letter::new(gen, sign)),
                None => return Err(Error::UnknownToken(token.to_string())),
            }
        }
        Ok(Word::reduce(letters))
    }

    pub fn format_word(&self, w: &Word) -> String {
        format_word_with(w, |g| self.name(g).to_string())
    }
}

/// Render a word with a caller-supplied symbol namer; empty words print as `1`.
pub fn format_word_with(w: &Word, name: impl Fn(usize) -> String) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    w.letters()
        .iter()
        .map(|l| match l.sign {
            Sign::Plus => name(l.gen),
            Sign::Minus => format!("{}^-1", name(l.gen)),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for Word {
    /// Indices rendered as `x0 x1^-1 ...`; prefer [`Alphabet::format_word`]
    /// when identifiers are available.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_word_with(self, |g| format!("x{g}")))
    }
}

/// An endomorphism of the free group of rank `images.len()`, given by one
/// image word per generator.
///
/// Injectivity is a property to be checked (see [`Endo::is_injective`]), not
/// an invariant of the type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endo {
    images: Vec<Word>,
}

impl Endo {
    /// Build from generator images; every image must be a word over the same
    /// rank-`images.len()` alphabet.
    pub fn new(images: Vec<Word>) -> Result<Endo, Error> {
        let rank = images.len();
        for w in &images {
            if let Some(g) = w.max_gen() {
                if g >= rank {
                    return Err(Error::GeneratorOutOfRange { index: g, rank });
                }
            }
        }
        Ok(Endo { images })
    }

    pub fn identity(rank: usize) -> Endo {
        Endo { images: (0..rank).map(Word::generator).collect() }
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, gen: usize) -> &Word {
        &self.images[gen]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// Homomorphic image of a word, freely reduced.
    ///
    /// Panics if the word uses a generator outside this endomorphism's rank;
    /// words and endomorphisms over mismatched alphabets must not be mixed.
    pub fn apply(&self, w: &Word) -> Word {
        let mut letters = Vec::new();
        for l in w.letters() {
            assert!(l.gen < self.rank(), "alphabet mismatch: generator {} vs rank {}", l.gen, self.rank());
            let img = &self.images[l.gen];
            match l.sign {
                Sign::Plus => letters.extend(img.letters().iter().copied()),
                Sign::Minus => letters.extend(img.letters().iter().rev().map(|m| m.inverse())),
            }
        }
        Word::reduce(letters)
    }

    /// `(self ∘ inner)(e) = self(inner(e))`.
    pub fn compose(&self, inner: &Endo) -> Endo {
        assert_eq!(self.rank(), inner.rank(), "alphabet mismatch");
        Endo { images: inner.images.iter().map(|w| self.apply(w)).collect() }
    }

    /// Iterated composition; `power(0)` is the identity.
    pub fn power(&self, m: usize) -> Endo {
        let mut out = Endo::identity(self.rank());
        for _ in 0..m {
            out = self.compose(&out);
        }
        out
    }

    /// Post-conjugation `e ↦ b · self(e) · b^-1`.
    pub fn twist(&self, b: &Word) -> Endo {
        Endo { images: self.images.iter().map(|w| w.conjugate(b)).collect() }
    }

    /// Whether the generator images freely generate, i.e. whether the
    /// endomorphism is injective.
    ///
    /// Decided by folding the wedge of image circles and checking that the
    /// rank is preserved; an empty image forces `false`.
    pub fn is_injective(&self) -> bool {
        if self.images.iter().any(|w| w.is_empty()) {
            return false;
        }
        if self.images.is_empty() {
            return true;
        }
        let sg = crate::labeled_graph::SubgroupGraph::new(self.rank(), &self.images)
            .expect("images checked nonempty");
        sg.freely_generates()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    fn w(alpha: &Alphabet, s: &str) -> Word {
        alpha.parse_word(s).unwrap()
    }

    fn rank3() -> Alphabet {
        Alphabet::new(["e1", "e2", "e3"]).unwrap()
    }

    /// The running automorphism used across the test suite:
    /// e1 ↦ e2, e2 ↦ e2^-1 e3 e2, e3 ↦ e2 e1^-1 e2.
    pub(crate) fn sample_automorphism() -> (Alphabet, Endo) {
        let a = rank3();
        let phi = Endo::new(vec![
            w(&a, "e2"),
            w(&a, "e2^-1 e3 e2"),
            w(&a, "e2 e1^-1 e2"),
        ])
        .unwrap();
        (a, phi)
    }

    #[test]
    fn reduce_cancels_adjacent_inverses() {
        let a = rank3();
        assert_eq!(w(&a, "e1 e1^-1"), Word::empty());
        assert_eq!(w(&a, "e2 e1 e1^-1 e3"), w(&a, "e2 e3"));
        assert_eq!(w(&a, "e2^-1 e3^-1 e2 e2^-1 e1"), w(&a, "e2^-1 e3^-1 e1"));
    }

    #[test]
    fn reduce_checked_rejects_out_of_range() {
        let err = Word::reduce_checked([Letter::plus(5)], 3).unwrap_err();
        assert_eq!(err, Error::GeneratorOutOfRange { index: 5, rank: 3 });
    }

    #[test]
    fn apply_sample_images() {
        let (a, phi) = sample_automorphism();
        assert_eq!(phi.apply(&w(&a, "e2^-1 e1")), w(&a, "e2^-1 e3^-1 e2 e2"));
        assert_eq!(phi.apply(&w(&a, "e3^-1 e1")), w(&a, "e2^-1 e1"));
        assert_eq!(
            phi.apply(&w(&a, "e2^-1 e3^-1 e1 e1 e3^-1 e1")),
            w(&a, "e2^-1 e3^-1 e1 e1")
        );
    }

    #[test]
    fn identity_applies_trivially() {
        let a = rank3();
        let id = Endo::identity(3);
        let word = w(&a, "e1 e2^-1 e3");
        assert_eq!(id.apply(&word), word);
    }

    #[test]
    fn power_and_twist_basics() {
        let (a, phi) = sample_automorphism();
        assert_eq!(phi.power(1), phi);
        assert_eq!(phi.twist(&Word::empty()), phi);
        // power(2)(e1) = phi(e2)
        assert_eq!(phi.power(2).image(0), &w(&a, "e2^-1 e3 e2"));
    }

    #[test]
    fn injectivity_examples() {
        let (_, phi) = sample_automorphism();
        assert!(Endo::identity(3).is_injective());
        assert!(phi.is_injective());
        let coincident =
            Endo::new(vec![Word::generator(0), Word::generator(0)]).unwrap();
        assert!(!coincident.is_injective());
        let with_empty = Endo::new(vec![Word::empty(), Word::generator(1)]).unwrap();
        assert!(!with_empty.is_injective());
    }

    #[test]
    fn reserved_and_bad_identifiers() {
        assert!(matches!(Alphabet::new(["t"]), Err(Error::ReservedIdentifier(_))));
        assert!(matches!(Alphabet::new(["s"]), Err(Error::ReservedIdentifier(_))));
        assert!(matches!(Alphabet::new(["1x"]), Err(Error::BadIdentifier(_))));
        assert!(matches!(Alphabet::new(["a", "a"]), Err(Error::DuplicateIdentifier(_))));
    }

    #[test]
    fn word_grammar_round_trip() {
        let a = rank3();
        let word = w(&a, "e2^-1 e3 e1");
        assert_eq!(a.parse_word(&a.format_word(&word)).unwrap(), word);
        assert_eq!(a.format_word(&Word::empty()), "1");
        assert_eq!(a.parse_word("1").unwrap(), Word::empty());
    }
}
