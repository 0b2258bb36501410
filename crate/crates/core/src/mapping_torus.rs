//! Elements of the ascending HNN extension `<t, E | t e t^-1 = phi(e)>`,
//! Britton-style normal forms, and reduction of a finitely generated
//! subgroup to one containing a stable letter.
//!
//! The two identities `t x = phi(x) t` and `x t^-1 = t^-1 phi(x)` move
//! positive powers of the stable letter right and negative powers left, so
//! every element has a representative `t^-q x t^r`. The canonical form also
//! maximizes Britton cancellation: while `q > 0`, `r > 0` and `x` lies in
//! the image subgroup, `x` is replaced by its preimage and both exponents
//! drop. Equality in the extension is then a syntactic check.

use std::fmt;

use crate::error::Error;
use crate::freegroup::{Alphabet, Endo, Letter, Sign, Word};
use crate::labeled_graph::SubgroupGraph;

/// One letter of a word over `{t} ∪ E`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorusLetter {
    Stable(Sign),
    Free(Letter),
}

impl TorusLetter {
    pub fn inverse(self) -> TorusLetter {
        match self {
            TorusLetter::Stable(s) => TorusLetter::Stable(s.flip()),
            TorusLetter::Free(l) => TorusLetter::Free(l.inverse()),
        }
    }
}

/// A word over the stable letter and the free generators. Not canonical;
/// see [`MappingTorus::normalize`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TorusWord {
    letters: Vec<TorusLetter>,
}

impl TorusWord {
    pub fn new(letters: Vec<TorusLetter>) -> TorusWord {
        TorusWord { letters }
    }

    pub fn empty() -> TorusWord {
        TorusWord::default()
    }

    /// `t^n` for signed `n`.
    pub fn stable_power(n: i64) -> TorusWord {
        let sign = if n < 0 { Sign::Minus } else { Sign::Plus };
        TorusWord { letters: vec![TorusLetter::Stable(sign); n.unsigned_abs() as usize] }
    }

    pub fn from_word(w: &Word) -> TorusWord {
        TorusWord { letters: w.letters().iter().map(|&l| TorusLetter::Free(l)).collect() }
    }

    pub fn letters(&self) -> &[TorusLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn concat(&self, other: &TorusWord) -> TorusWord {
        TorusWord {
            letters: self.letters.iter().chain(other.letters.iter()).copied().collect(),
        }
    }

    pub fn inverse(&self) -> TorusWord {
        TorusWord { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    /// `self^n` for signed `n`.
    pub fn pow(&self, n: i64) -> TorusWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = TorusWord::empty();
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Conjugation `t^k · self · t^-k`.
    pub fn conjugate_by_stable(&self, k: i64) -> TorusWord {
        TorusWord::stable_power(k).concat(self).concat(&TorusWord::stable_power(-k))
    }

    /// Signed exponent sum of the stable letter.
    pub fn p_hom(&self) -> i64 {
        self.letters
            .iter()
            .map(|l| match l {
                TorusLetter::Stable(Sign::Plus) => 1,
                TorusLetter::Stable(Sign::Minus) => -1,
                TorusLetter::Free(_) => 0,
            })
            .sum()
    }

    /// Substitute every stable letter by `replacement` (used to map a word
    /// over `{s} ∪ E` back into `{t} ∪ E`).
    pub fn substitute_stable(&self, replacement: &TorusWord) -> TorusWord {
        let mut out = Vec::new();
        let inv = replacement.inverse();
        for l in &self.letters {
            match l {
                TorusLetter::Stable(Sign::Plus) => out.extend(replacement.letters.iter().copied()),
                TorusLetter::Stable(Sign::Minus) => out.extend(inv.letters.iter().copied()),
                TorusLetter::Free(_) => out.push(*l),
            }
        }
        TorusWord { letters: out }
    }

    /// Parse a whitespace-separated token sequence; `stable` names the
    /// stable letter; `1` is the empty word.
    pub fn parse(alphabet: &Alphabet, stable: &str, s: &str) -> Result<TorusWord, Error> {
        let mut letters = Vec::new();
        for token in s.split_whitespace() {
            if token == "1" {
                continue;
            }
            let (base, sign) = Alphabet::split_token(token);
            if base == stable {
                letters.push(TorusLetter::Stable(sign));
            } else if let Some(gen) = alphabet.index_of(base) {
                letters.push(TorusLetter::Free(Letter::new(gen, sign)));
            } else {
                return Err(Error::UnknownToken(token.to_string()));
            }
        }
        Ok(TorusWord { letters })
    }

    pub fn format(&self, alphabet: &Alphabet, stable: &str) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        self.letters
            .iter()
            .map(|l| match l {
                TorusLetter::Stable(Sign::Plus) => stable.to_string(),
                TorusLetter::Stable(Sign::Minus) => format!("{stable}^-1"),
                TorusLetter::Free(Letter { gen, sign: Sign::Plus }) => {
                    alphabet.name(*gen).to_string()
                }
                TorusLetter::Free(Letter { gen, sign: Sign::Minus }) => {
                    format!("{}^-1", alphabet.name(*gen))
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// The canonical representative `t^-q · x · t^r`.
///
/// Canonicity: `q = 0`, or `r = 0`, or `x` is not in the image subgroup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub q: usize,
    pub x: Word,
    pub r: usize,
}

impl NormalForm {
    pub fn is_trivial(&self) -> bool {
        self.q == 0 && self.r == 0 && self.x.is_empty()
    }

    pub fn as_torus_word(&self) -> TorusWord {
        TorusWord::stable_power(-(self.q as i64))
            .concat(&TorusWord::from_word(&self.x))
            .concat(&TorusWord::stable_power(self.r as i64))
    }

    pub fn format(&self, alphabet: &Alphabet, stable: &str) -> String {
        format!(
            "{stable}^-{} · {} · {stable}^{}",
            self.q,
            alphabet.format_word(&self.x),
            self.r
        )
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t^-{} · {} · t^{}", self.q, self.x, self.r)
    }
}

/// Outcome of rewriting a finitely generated subgroup.
///
/// `Free`: the stable exponents all vanish; conjugating by `t^k` lands the
/// subgroup in the free fiber, whose basis is extracted by folding.
///
/// `StableLetter`: the exponent image is `m·Z`; after conjugating by `t^p`,
/// the substitution `t^m ↦ b^-1 s` carries the subgroup into the extension
/// of `theta = i_b ∘ phi^m` where it contains the new stable letter `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupReduction {
    Free {
        /// Conjugation exponent `k`.
        k: usize,
        /// The conjugated generators `phi^(k - q_i)(x_i)`.
        conjugated: Vec<Word>,
        /// Basis of the subgroup they generate.
        basis: Vec<Word>,
    },
    StableLetter {
        m: usize,
        /// Conjugation exponent `p`.
        p: usize,
        b: Word,
        theta: Endo,
        /// The generators rewritten over `{s} ∪ E`.
        rewritten: Vec<TorusWord>,
    },
}

/// The ambient extension for a fixed injective endomorphism, with the folded
/// image graph cached for Britton reduction.
#[derive(Clone, Debug)]
pub struct MappingTorus {
    phi: Endo,
    image: SubgroupGraph,
}

impl MappingTorus {
    /// Fails with [`Error::NonInjective`] unless the generator images freely
    /// generate.
    pub fn new(phi: Endo) -> Result<MappingTorus, Error> {
        if !phi.is_injective() {
            return Err(Error::NonInjective);
        }
        let image = SubgroupGraph::new(phi.rank(), phi.images())?;
        Ok(MappingTorus { phi, image })
    }

    pub fn phi(&self) -> &Endo {
        &self.phi
    }

    /// Unique preimage under `phi`, when `x` lies in the image subgroup.
    pub fn phi_preimage(&self, x: &Word) -> Option<Word> {
        self.image.express(x)
    }

    /// Canonical `t^-q x t^r` form. `r - q` always equals the stable
    /// exponent sum of the input.
    pub fn normalize(&self, w: &TorusWord) -> NormalForm {
        let mut powers: Vec<Endo> = vec![Endo::identity(self.phi.rank())];
        let mut q = 0usize;
        let mut x = Word::empty();
        let mut r = 0usize;
        for l in w.letters() {
            match l {
                TorusLetter::Stable(Sign::Plus) => r += 1,
                TorusLetter::Stable(Sign::Minus) => {
                    if r > 0 {
                        r -= 1;
                    } else {
                        q += 1;
                        x = self.phi.apply(&x);
                    }
                }
                TorusLetter::Free(letter) => {
                    while powers.len() <= r {
                        let next = self.phi.compose(powers.last().unwrap());
                        powers.push(next);
                    }
                    let moved = powers[r].apply(&Word::reduce([*letter]));
                    x = x.concat(&moved);
                }
            }
        }
        while q > 0 && r > 0 {
            match self.phi_preimage(&x) {
                Some(y) => {
                    x = y;
                    q -= 1;
                    r -= 1;
                }
                None => break,
            }
        }
        NormalForm { q, x, r }
    }

    /// Equality in the extension: `g h^-1` normalizes to the identity.
    pub fn equal(&self, g: &TorusWord, h: &TorusWord) -> bool {
        self.normalize(&g.concat(&h.inverse())).is_trivial()
    }

    /// Rewrite a finitely generated subgroup into one of the two shapes of
    /// [`SubgroupReduction`].
    pub fn reduce_subgroup(&self, gens: &[TorusWord]) -> Result<SubgroupReduction, Error> {
        if gens.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        let p_values: Vec<i64> = gens.iter().map(|g| g.p_hom()).collect();
        let m = p_values.iter().fold(0i64, |acc, &p| gcd(acc, p));
        if m == 0 {
            return self.reduce_free(gens);
        }
        let m = m as usize;

        // Bezout combination with p-value m, processed in input order.
        let mut combo: Option<(i64, TorusWord)> = None;
        for (g, &p) in gens.iter().zip(&p_values) {
            if p == 0 {
                continue;
            }
            combo = Some(match combo {
                None => {
                    if p < 0 {
                        (-p, g.inverse())
                    } else {
                        (p, g.clone())
                    }
                }
                Some((d, w)) => {
                    let (g0, alpha, beta) = extended_gcd(d, p);
                    if g0 == d {
                        (d, w)
                    } else {
                        (g0, w.pow(alpha).concat(&g.pow(beta)))
                    }
                }
            });
        }
        let (d, g_m) = combo.expect("m > 0 implies a generator with nonzero exponent");
        debug_assert_eq!(d, m as i64);

        // g_m = t^-p b t^(m+p)
        let nf = self.normalize(&g_m);
        debug_assert_eq!(nf.r as i64 - nf.q as i64, m as i64);
        let p = nf.q;
        let b = nf.x;
        let theta = self.phi.power(m).twist(&b);

        let b_inv_s = TorusWord::from_word(&b.inverse())
            .concat(&TorusWord::stable_power(1));
        let rewritten = gens
            .iter()
            .map(|g| {
                let conj = g.conjugate_by_stable(p as i64);
                let nf = self.normalize(&conj);
                // pad q to a multiple of m
                let j = (m - nf.q % m) % m;
                let x = self.phi.power(j).apply(&nf.x);
                let q = nf.q + j;
                let r = nf.r + j;
                debug_assert_eq!(q % m, 0);
                debug_assert_eq!(r % m, 0);
                b_inv_s
                    .pow(-((q / m) as i64))
                    .concat(&TorusWord::from_word(&x))
                    .concat(&b_inv_s.pow((r / m) as i64))
            })
            .collect();
        Ok(SubgroupReduction::StableLetter { m, p, b, theta, rewritten })
    }

    fn reduce_free(&self, gens: &[TorusWord]) -> Result<SubgroupReduction, Error> {
        let forms: Vec<NormalForm> = gens
            .iter()
            .map(|g| {
                let nf = self.normalize(g);
                debug_assert_eq!(nf.q, nf.r);
                nf
            })
            .filter(|nf| !nf.x.is_empty())
            .collect();
        if forms.is_empty() {
            return Err(Error::TrivialSubgroup);
        }
        let k = forms.iter().map(|nf| nf.q).max().unwrap();
        let conjugated: Vec<Word> =
            forms.iter().map(|nf| self.phi.power(k - nf.q).apply(&nf.x)).collect();
        let sg = SubgroupGraph::new(self.phi.rank(), &conjugated)?;
        Ok(SubgroupReduction::Free { k, conjugated, basis: sg.basis() })
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `(g, x, y)` with `x·a + y·b = g = gcd(|a|, |b|) > 0`.
fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        return if a < 0 { (-a, -1, 0) } else { (a, 1, 0) };
    }
    let (g, x, y) = extended_gcd(b, a % b);
    (g, y, x - (a / b) * y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::tests::sample_automorphism;

    fn torus() -> (Alphabet, MappingTorus) {
        let (a, phi) = sample_automorphism();
        (a, MappingTorus::new(phi).unwrap())
    }

    fn tw(a: &Alphabet, s: &str) -> TorusWord {
        TorusWord::parse(a, "t", s).unwrap()
    }

    #[test]
    fn p_hom_examples() {
        let (a, _) = torus();
        assert_eq!(tw(&a, "t").p_hom(), 1);
        assert_eq!(tw(&a, "e1").p_hom(), 0);
        assert_eq!(tw(&a, "t e1 t^-1 t^-1").p_hom(), -1);
    }

    #[test]
    fn non_injective_rejected() {
        let phi = Endo::new(vec![Word::generator(0), Word::generator(0)]).unwrap();
        assert_eq!(MappingTorus::new(phi).unwrap_err(), Error::NonInjective);
    }

    #[test]
    fn normalize_examples() {
        let (a, m) = torus();
        // x t^-1 = t^-1 phi(x)
        let nf = m.normalize(&tw(&a, "e1 t^-1"));
        assert_eq!(nf, NormalForm { q: 1, x: a.parse_word("e2").unwrap(), r: 0 });
        assert_eq!(nf.format(&a, "t"), "t^-1 · e2 · t^0");

        // Britton reduction inverts the defining relation
        let nf = m.normalize(&tw(&a, "t^-1 e2 t"));
        assert_eq!(nf, NormalForm { q: 0, x: a.parse_word("e1").unwrap(), r: 0 });

        let nf = m.normalize(&tw(&a, "t t t"));
        assert_eq!(nf, NormalForm { q: 0, x: Word::empty(), r: 3 });
    }

    #[test]
    fn equality_examples() {
        let (a, m) = torus();
        assert!(m.equal(&tw(&a, "t e1 t^-1"), &tw(&a, "e2")));
        assert!(!m.equal(&tw(&a, "t"), &tw(&a, "e1")));
        // the added-loop label of the running example, via the defining relation
        assert!(m.equal(&tw(&a, "e2^-1 e3^-1 e2 e2"), &tw(&a, "t e2^-1 e1 t^-1")));
    }

    #[test]
    fn reduce_with_t_squared() {
        let (a, m) = torus();
        let gens = [tw(&a, "t t"), tw(&a, "e1")];
        let red = m.reduce_subgroup(&gens).unwrap();
        let SubgroupReduction::StableLetter { m: mm, p, b, theta, rewritten } = red else {
            panic!("expected stable-letter case");
        };
        assert_eq!(mm, 2);
        assert_eq!(p, 0);
        assert!(b.is_empty());
        assert_eq!(theta, m.phi().power(2));
        assert_eq!(
            rewritten,
            vec![TorusWord::stable_power(1), TorusWord::from_word(&a.parse_word("e1").unwrap())]
        );
    }

    #[test]
    fn reduce_with_bezout_combination() {
        let (a, m) = torus();
        let gens = [tw(&a, "t t e1"), tw(&a, "t t t")];
        let red = m.reduce_subgroup(&gens).unwrap();
        let SubgroupReduction::StableLetter { m: mm, p, b, .. } = red else {
            panic!("expected stable-letter case");
        };
        // g_1 = (t^2 e1)^-1 t^3 normalizes to (0, e1^-1, 1)
        assert_eq!(mm, 1);
        assert_eq!(p, 0);
        assert_eq!(b, a.parse_word("e1^-1").unwrap());
    }

    #[test]
    fn reduce_free_case() {
        let (a, m) = torus();
        let gens = [tw(&a, "e1"), tw(&a, "t e2 t^-1")];
        let red = m.reduce_subgroup(&gens).unwrap();
        let SubgroupReduction::Free { k, conjugated, basis } = red else {
            panic!("expected free case");
        };
        // t e2 t^-1 normalizes into the fiber already, so k = 0
        assert_eq!(k, 0);
        assert_eq!(
            conjugated,
            vec![a.parse_word("e1").unwrap(), m.phi().apply(&a.parse_word("e2").unwrap())]
        );
        assert_eq!(basis.len(), 2);
        let sg = SubgroupGraph::new(3, &conjugated).unwrap();
        for w in &basis {
            assert!(sg.contains(w));
        }
    }

    #[test]
    fn reduce_rejects_degenerate_input() {
        let (a, m) = torus();
        assert_eq!(m.reduce_subgroup(&[]).unwrap_err(), Error::EmptyGenerators);
        let trivial = [tw(&a, "e1 e1^-1")];
        assert_eq!(m.reduce_subgroup(&trivial).unwrap_err(), Error::TrivialSubgroup);
    }

    #[test]
    fn substitution_round_trip() {
        let (a, m) = torus();
        let gens = [tw(&a, "t t e1"), tw(&a, "t t t")];
        let SubgroupReduction::StableLetter { m: mm, p, b, rewritten, .. } =
            m.reduce_subgroup(&gens).unwrap()
        else {
            panic!()
        };
        let s_to_t = TorusWord::from_word(&b).concat(&TorusWord::stable_power(mm as i64));
        for (g, rw) in gens.iter().zip(&rewritten) {
            let back = rw.substitute_stable(&s_to_t);
            let conj = g.conjugate_by_stable(p as i64);
            assert!(m.equal(&back, &conj));
        }
    }
}
