//! Alphabets, freely reduced words, and group presentations.
//!
//! Words are stored in run-length (syllable) form: a sequence of
//! (generator, nonzero exponent) pairs in which adjacent syllables carry
//! distinct generators. The empty sequence is the identity. All operations
//! keep words in this canonical form.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A named generator together with its position in the alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorSymbol {
    pub name: String,
    pub index: usize,
}

/// An ordered list of distinct generator names.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<GeneratorSymbol>,
}

impl Alphabet {
    /// Builds an alphabet from generator names, in declaration order.
    ///
    /// Names must match `[A-Za-z][A-Za-z0-9_]*` and be pairwise distinct.
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Arc<Alphabet>> {
        let mut symbols = Vec::with_capacity(names.len());
        for (index, name) in names.iter().enumerate() {
            let name = name.as_ref();
            if !valid_generator_name(name) {
                return Err(Error::InvalidGeneratorName(name.to_string()));
            }
            if symbols.iter().any(|s: &GeneratorSymbol| s.name == name) {
                return Err(Error::DuplicateGenerator(name.to_string()));
            }
            symbols.push(GeneratorSymbol {
                name: name.to_string(),
                index,
            });
        }
        Ok(Arc::new(Alphabet { symbols }))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[GeneratorSymbol] {
        &self.symbols
    }

    pub fn name(&self, index: usize) -> &str {
        &self.symbols[index].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }
}

fn valid_generator_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// One run of a single generator: `gen^exponent` with a nonzero exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Syllable {
    pub gen: usize,
    pub exponent: i64,
}

/// A single letter of a word: a generator index and a sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

/// A freely reduced word over an alphabet.
#[derive(Debug, Clone)]
pub struct Word {
    alphabet: Arc<Alphabet>,
    syllables: Vec<Syllable>,
}

impl PartialEq for Word {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.syllables == other.syllables
    }
}

impl Eq for Word {}

impl std::hash::Hash for Word {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.syllables.hash(state);
    }
}

impl Word {
    pub fn identity(alphabet: &Arc<Alphabet>) -> Word {
        Word {
            alphabet: Arc::clone(alphabet),
            syllables: Vec::new(),
        }
    }

    /// Builds the freely reduced word with the given raw syllables.
    ///
    /// Adjacent runs of the same generator are merged and zero exponents
    /// dropped, so the input need not be reduced.
    pub fn from_syllables<I>(alphabet: &Arc<Alphabet>, raw: I) -> Result<Word>
    where
        I: IntoIterator<Item = (usize, i64)>,
    {
        let mut reduced: Vec<Syllable> = Vec::new();
        for (gen, exponent) in raw {
            if gen >= alphabet.len() {
                return Err(Error::UnknownGenerator(format!("#{gen}")));
            }
            push_reduced(&mut reduced, gen, exponent);
        }
        Ok(Word {
            alphabet: Arc::clone(alphabet),
            syllables: reduced,
        })
    }

    /// Single-generator word `gen^exponent`.
    pub fn generator(alphabet: &Arc<Alphabet>, gen: usize, exponent: i64) -> Result<Word> {
        Word::from_syllables(alphabet, [(gen, exponent)])
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Number of letters: the sum of absolute exponents.
    pub fn letter_len(&self) -> usize {
        self.syllables
            .iter()
            .map(|s| s.exponent.unsigned_abs() as usize)
            .sum()
    }

    /// The letters of the word in reading order.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.syllables.iter().flat_map(|s| {
            let inverse = s.exponent < 0;
            (0..s.exponent.unsigned_abs()).map(move |_| Letter {
                gen: s.gen,
                inverse,
            })
        })
    }

    pub fn inverse(&self) -> Word {
        let syllables = self
            .syllables
            .iter()
            .rev()
            .map(|s| Syllable {
                gen: s.gen,
                exponent: -s.exponent,
            })
            .collect();
        Word {
            alphabet: Arc::clone(&self.alphabet),
            syllables,
        }
    }

    /// The reduced product `self · other`.
    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let mut reduced = self.syllables.clone();
        for s in &other.syllables {
            push_reduced(&mut reduced, s.gen, s.exponent);
        }
        Ok(Word {
            alphabet: Arc::clone(&self.alphabet),
            syllables: reduced,
        })
    }

    /// The conjugate `self^by = by⁻¹ · self · by`.
    pub fn conjugated_by(&self, by: &Word) -> Result<Word> {
        by.inverse().concat(self)?.concat(by)
    }

    /// The reduced power `self^n`.
    pub fn pow(&self, n: i64) -> Word {
        if n < 0 {
            return self.inverse().pow(-n);
        }
        let mut out = Word::identity(&self.alphabet);
        for _ in 0..n {
            out = out.concat(self).expect("same alphabet");
        }
        out
    }

    /// Removes matching prefix/suffix inverse pairs until the word is
    /// cyclically reduced.
    pub fn cyclically_reduced(&self) -> Word {
        let mut letters: Vec<(usize, i64)> = self
            .letters()
            .map(|l| (l.gen, if l.inverse { -1 } else { 1 }))
            .collect();
        while letters.len() >= 2 {
            let first = letters[0];
            let last = letters[letters.len() - 1];
            if first.0 == last.0 && first.1 == -last.1 {
                letters.pop();
                letters.remove(0);
            } else {
                break;
            }
        }
        Word::from_syllables(&self.alphabet, letters).expect("letters are in range")
    }
}

fn push_reduced(reduced: &mut Vec<Syllable>, gen: usize, exponent: i64) {
    if exponent == 0 {
        return;
    }
    if let Some(last) = reduced.last_mut() {
        if last.gen == gen {
            last.exponent += exponent;
            if last.exponent == 0 {
                reduced.pop();
            }
            return;
        }
    }
    reduced.push(Syllable { gen, exponent });
}

/// Merges a raw syllable sequence into canonical reduced form.
pub fn free_reduce(alphabet: &Arc<Alphabet>, raw: &[(usize, i64)]) -> Result<Word> {
    Word::from_syllables(alphabet, raw.iter().copied())
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in &self.syllables {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if s.exponent == 1 {
                write!(f, "{}", self.alphabet.name(s.gen))?;
            } else {
                write!(f, "{}^{}", self.alphabet.name(s.gen), s.exponent)?;
            }
        }
        Ok(())
    }
}

impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Parses a word in the whitespace-separated syllable grammar.
///
/// Each token is `name` or `name^k` with `k` a nonzero signed decimal
/// integer. The result is freely reduced; an empty string parses to the
/// identity.
pub fn parse_word(text: &str, alphabet: &Arc<Alphabet>) -> Result<Word> {
    let mut raw: Vec<(usize, i64)> = Vec::new();
    for token in text.split_whitespace() {
        let (name, exponent) = match token.split_once('^') {
            None => (token, 1),
            Some((name, exp)) => {
                let exponent: i64 = exp
                    .parse()
                    .map_err(|_| Error::MalformedExponent(token.to_string()))?;
                if exponent == 0 {
                    return Err(Error::ZeroExponent(token.to_string()));
                }
                (name, exponent)
            }
        };
        let gen = alphabet
            .index_of(name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
        raw.push((gen, exponent));
    }
    Word::from_syllables(alphabet, raw)
}

/// A finite presentation: an alphabet plus a list of relators.
#[derive(Debug, PartialEq, Eq)]
pub struct Presentation {
    alphabet: Arc<Alphabet>,
    relators: Vec<Word>,
}

impl Presentation {
    /// Builds a presentation, normalizing every relator to freely and
    /// cyclically reduced form. A relator that reduces to the identity is
    /// rejected.
    pub fn new(alphabet: Arc<Alphabet>, relators: Vec<Word>) -> Result<Arc<Presentation>> {
        let mut normalized = Vec::with_capacity(relators.len());
        for r in relators {
            if r.alphabet() != &alphabet {
                return Err(Error::AlphabetMismatch);
            }
            let r = r.cyclically_reduced();
            if r.is_identity() {
                return Err(Error::EmptyRelator);
            }
            normalized.push(r);
        }
        Ok(Arc::new(Presentation {
            alphabet,
            relators: normalized,
        }))
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_count(&self) -> usize {
        self.alphabet.len()
    }

    /// Parses the line-oriented presentation file format:
    ///
    /// ```text
    /// # comment
    /// generators: a b t
    /// relator: a^-1 b^-1 a b
    /// relator: t^-1 a t b^-1
    /// ```
    pub fn parse(text: &str) -> Result<Arc<Presentation>> {
        let mut alphabet: Option<Arc<Alphabet>> = None;
        let mut relators: Vec<Word> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("generators:") {
                if alphabet.is_some() {
                    return Err(Error::PresentationFormat(format!(
                        "line {}: repeated generators line",
                        lineno + 1
                    )));
                }
                let names: Vec<&str> = rest.split_whitespace().collect();
                if names.is_empty() {
                    return Err(Error::PresentationFormat(format!(
                        "line {}: no generators declared",
                        lineno + 1
                    )));
                }
                alphabet = Some(Alphabet::new(&names)?);
            } else if let Some(rest) = line.strip_prefix("relator:") {
                let alphabet = alphabet.as_ref().ok_or_else(|| {
                    Error::PresentationFormat(format!(
                        "line {}: relator before generators line",
                        lineno + 1
                    ))
                })?;
                relators.push(parse_word(rest, alphabet)?);
            } else {
                return Err(Error::PresentationFormat(format!(
                    "line {}: expected `generators:` or `relator:`",
                    lineno + 1
                )));
            }
        }
        let alphabet =
            alphabet.ok_or_else(|| Error::PresentationFormat("missing generators line".into()))?;
        Presentation::new(alphabet, relators)
    }
}

/// A finitely generated subgroup of the group a presentation defines,
/// given by a list of generating words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupSpec {
    ambient: Arc<Presentation>,
    generators: Vec<Word>,
}

impl SubgroupSpec {
    pub fn new(ambient: &Arc<Presentation>, generators: Vec<Word>) -> Result<SubgroupSpec> {
        if generators.is_empty() {
            return Err(Error::EmptySubgroup);
        }
        for w in &generators {
            if w.alphabet() != ambient.alphabet() {
                return Err(Error::AlphabetMismatch);
            }
        }
        Ok(SubgroupSpec {
            ambient: Arc::clone(ambient),
            generators,
        })
    }

    /// Parses a semicolon-separated list of generator words.
    pub fn parse(text: &str, ambient: &Arc<Presentation>) -> Result<SubgroupSpec> {
        let generators = text
            .split(';')
            .map(|part| parse_word(part, ambient.alphabet()))
            .collect::<Result<Vec<_>>>()?;
        SubgroupSpec::new(ambient, generators)
    }

    pub fn ambient(&self) -> &Arc<Presentation> {
        &self.ambient
    }

    pub fn generators(&self) -> &[Word] {
        &self.generators
    }
}

impl serde::Serialize for SubgroupSpec {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = serializer.serialize_seq(Some(self.generators.len()))?;
        for w in &self.generators {
            seq.serialize_element(w)?;
        }
        seq.end()
    }
}

/// The HNN presentation `⟨a, b, t | a⁻¹b⁻¹ab, t⁻¹atb⁻¹⟩`: a rank-2 free
/// abelian base with the stable letter conjugating `a` to `b`.
pub fn builtin_g() -> Arc<Presentation> {
    let alphabet = Alphabet::new(&["a", "b", "t"]).unwrap();
    let r1 = parse_word("a^-1 b^-1 a b", &alphabet).unwrap();
    let r2 = parse_word("t^-1 a t b^-1", &alphabet).unwrap();
    Presentation::new(alphabet, vec![r1, r2]).unwrap()
}

/// The Burns–Karrass–Solitar presentation
/// `⟨alpha, beta, y | y⁻¹·alpha·y·beta⁻¹·alpha⁻¹, y⁻¹·beta·y·beta⁻¹⟩`,
/// a free-by-cyclic group.
pub fn builtin_b() -> Arc<Presentation> {
    let alphabet = Alphabet::new(&["alpha", "beta", "y"]).unwrap();
    let r1 = parse_word("y^-1 alpha y beta^-1 alpha^-1", &alphabet).unwrap();
    let r2 = parse_word("y^-1 beta y beta^-1", &alphabet).unwrap();
    Presentation::new(alphabet, vec![r1, r2]).unwrap()
}

/// Both built-in presentations, `(G, B)`.
pub fn builtin_presentations() -> (Arc<Presentation>, Arc<Presentation>) {
    (builtin_g(), builtin_b())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g_alphabet() -> Arc<Alphabet> {
        Alphabet::new(&["a", "b", "t"]).unwrap()
    }

    #[test]
    fn parse_abb() {
        let al = g_alphabet();
        let w = parse_word("a b b", &al).unwrap();
        assert_eq!(
            w.syllables(),
            &[
                Syllable {
                    gen: 0,
                    exponent: 1
                },
                Syllable {
                    gen: 1,
                    exponent: 2
                }
            ]
        );
        assert_eq!(w.letter_len(), 3);
    }

    #[test]
    fn parse_cancels_to_identity() {
        let al = g_alphabet();
        let w = parse_word("a a^-1", &al).unwrap();
        assert!(w.is_identity());
    }

    #[test]
    fn parse_theorem_word() {
        let al = g_alphabet();
        let w = parse_word("b t a t^-1 b^-1", &al).unwrap();
        assert_eq!(w.letter_len(), 5);
        assert_eq!(w.syllables().len(), 5);
    }

    #[test]
    fn parse_errors() {
        let al = g_alphabet();
        assert_eq!(
            parse_word("a c", &al),
            Err(Error::UnknownGenerator("c".into()))
        );
        assert_eq!(
            parse_word("a^x", &al),
            Err(Error::MalformedExponent("a^x".into()))
        );
        assert_eq!(
            parse_word("a^0", &al),
            Err(Error::ZeroExponent("a^0".into()))
        );
    }

    #[test]
    fn free_reduce_examples() {
        let al = g_alphabet();
        // a b b⁻¹ a⁻¹ → empty
        let w = free_reduce(&al, &[(0, 1), (1, 1), (1, -1), (0, -1)]).unwrap();
        assert!(w.is_identity());
        // a b² b⁻¹ → a b
        let w = free_reduce(&al, &[(0, 1), (1, 2), (1, -1)]).unwrap();
        assert_eq!(w, parse_word("a b", &al).unwrap());
        // a² a³ → a⁵
        let w = free_reduce(&al, &[(0, 2), (0, 3)]).unwrap();
        assert_eq!(w, parse_word("a^5", &al).unwrap());
    }

    #[test]
    fn conjugate_convention() {
        let al = g_alphabet();
        let a = parse_word("a", &al).unwrap();
        let t = parse_word("t", &al).unwrap();
        // x^y = y⁻¹ x y
        assert_eq!(
            a.conjugated_by(&t).unwrap(),
            parse_word("t^-1 a t", &al).unwrap()
        );
        let g = parse_word("t^-1 b^-1", &al).unwrap();
        assert_eq!(
            a.conjugated_by(&g).unwrap(),
            parse_word("b t a t^-1 b^-1", &al).unwrap()
        );
    }

    #[test]
    fn cyclic_reduce() {
        let al = g_alphabet();
        let w = parse_word("t a t^-1", &al).unwrap();
        assert_eq!(w.cyclically_reduced(), parse_word("a", &al).unwrap());
        let already = parse_word("a b", &al).unwrap();
        assert_eq!(already.cyclically_reduced(), already);
    }

    #[test]
    fn builtin_shapes() {
        let g = builtin_g();
        assert_eq!(g.relators().len(), 2);
        let b = builtin_b();
        assert_eq!(b.relators().len(), 2);
        for p in [&g, &b] {
            for r in p.relators() {
                assert_eq!(r, &r.cyclically_reduced());
                assert!(!r.is_identity());
            }
        }
    }

    #[test]
    fn presentation_file_roundtrip() {
        let text = "# the HNN presentation\ngenerators: a b t\nrelator: a^-1 b^-1 a b\nrelator: t^-1 a t b^-1\n";
        let p = Presentation::parse(text).unwrap();
        assert_eq!(p, builtin_g());
    }

    #[test]
    fn presentation_file_errors() {
        assert!(matches!(
            Presentation::parse("relator: a"),
            Err(Error::PresentationFormat(_))
        ));
        assert!(matches!(
            Presentation::parse("generators: a\nrelator: a a^-1"),
            Err(Error::EmptyRelator)
        ));
        assert!(matches!(
            Presentation::parse("generators: a 1b"),
            Err(Error::InvalidGeneratorName(_))
        ));
        assert!(matches!(
            Presentation::parse("generators: a a"),
            Err(Error::DuplicateGenerator(_))
        ));
    }

    #[test]
    fn alphabet_mismatch_is_rejected() {
        let al1 = g_alphabet();
        let al2 = Alphabet::new(&["x", "y"]).unwrap();
        let u = parse_word("a", &al1).unwrap();
        let v = parse_word("x", &al2).unwrap();
        assert_eq!(u.concat(&v), Err(Error::AlphabetMismatch));
    }

    #[test]
    fn display_roundtrip_examples() {
        let al = g_alphabet();
        for text in ["a b^2", "t^-1 a t b^-1", "", "a^5 t^-3 b"] {
            let w = parse_word(text, &al).unwrap();
            assert_eq!(parse_word(&w.to_string(), &al).unwrap(), w);
        }
    }
}
