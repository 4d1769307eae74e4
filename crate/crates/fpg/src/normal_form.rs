//! Exact word problems for the two built-in groups.
//!
//! Elements of G are put into pinch-free HNN form over the commuting base
//! ⟨a, b⟩; a form with at least one stable letter and no pinch is never
//! trivial, so emptiness of the form decides the word problem. Elements of
//! B are split as (free word in alpha, beta) · y^k using the conjugation
//! action of y, which is a bijective normal form.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::words::{builtin_b, builtin_g, Alphabet, Presentation, SubgroupSpec, Word};

const GEN_A: usize = 0;
const GEN_B: usize = 1;
const GEN_T: usize = 2;

const GEN_ALPHA: usize = 0;
const GEN_BETA: usize = 1;
const GEN_Y: usize = 2;

/// An element `a^exp_a · b^exp_b` of the commuting base of G.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Z2Element {
    pub exp_a: i64,
    pub exp_b: i64,
}

impl Z2Element {
    pub fn identity() -> Z2Element {
        Z2Element { exp_a: 0, exp_b: 0 }
    }

    pub fn is_identity(&self) -> bool {
        self.exp_a == 0 && self.exp_b == 0
    }

    fn add(&mut self, exp_a: i64, exp_b: i64) {
        self.exp_a += exp_a;
        self.exp_b += exp_b;
    }
}

/// One `t^e · base` factor of a Britton form; `e` is never zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BrittonSyllable {
    pub t_exponent: i64,
    pub base: Z2Element,
}

/// A pinch-free form `prefix · t^{e₁} base₁ · t^{e₂} base₂ · …` for an
/// element of G. The form is empty exactly when the element is trivial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BrittonFormG {
    pub prefix: Z2Element,
    pub tail: Vec<BrittonSyllable>,
}

impl BrittonFormG {
    pub fn is_trivial(&self) -> bool {
        self.tail.is_empty() && self.prefix.is_identity()
    }

    /// Total number of stable letters in the form.
    pub fn t_length(&self) -> u64 {
        self.tail.iter().map(|s| s.t_exponent.unsigned_abs()).sum()
    }

    /// True when no `t⁻¹ aᵐ t` or `t bⁿ t⁻¹` pattern survives and no
    /// t-powers are mergeable.
    pub fn is_pinch_free(&self) -> bool {
        for (i, s) in self.tail.iter().enumerate() {
            if s.t_exponent == 0 {
                return false;
            }
            if i + 1 < self.tail.len() {
                let right = self.tail[i + 1].t_exponent;
                if s.base.is_identity() {
                    return false;
                }
                if s.t_exponent < 0 && right > 0 && s.base.exp_b == 0 {
                    return false;
                }
                if s.t_exponent > 0 && right < 0 && s.base.exp_a == 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Rewrites the form as a word over G's alphabet.
    pub fn to_word(&self, alphabet: &Arc<Alphabet>) -> Word {
        let mut raw: Vec<(usize, i64)> = Vec::new();
        raw.push((GEN_A, self.prefix.exp_a));
        raw.push((GEN_B, self.prefix.exp_b));
        for s in &self.tail {
            raw.push((GEN_T, s.t_exponent));
            raw.push((GEN_A, s.base.exp_a));
            raw.push((GEN_B, s.base.exp_b));
        }
        Word::from_syllables(alphabet, raw).expect("generators in range")
    }
}

fn require_alphabet(w: &Word, expected: &Arc<Presentation>) -> Result<()> {
    if w.alphabet() != expected.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    Ok(())
}

/// Puts a word over G's alphabet into pinch-free HNN form.
///
/// Pinches rewrite by `t⁻¹ aᵐ t ↦ bᵐ` and `t bⁿ t⁻¹ ↦ aⁿ`, merging
/// t-powers and base syllables as they arise. Innermost pinches are
/// consumed as the word is scanned, so a single left-to-right pass
/// suffices.
pub fn britton_reduce(w: &Word) -> Result<BrittonFormG> {
    require_alphabet(w, &builtin_g())?;
    let mut prefix = Z2Element::identity();
    let mut tail: Vec<BrittonSyllable> = Vec::new();
    for letter in w.letters() {
        let e: i64 = if letter.inverse { -1 } else { 1 };
        match letter.gen {
            GEN_A => current_base(&mut prefix, &mut tail).add(e, 0),
            GEN_B => current_base(&mut prefix, &mut tail).add(0, e),
            GEN_T => push_t(&mut prefix, &mut tail, e),
            _ => unreachable!("G has three generators"),
        }
    }
    let form = BrittonFormG { prefix, tail };
    debug_assert!(form.is_pinch_free());
    Ok(form)
}

fn current_base<'a>(
    prefix: &'a mut Z2Element,
    tail: &'a mut [BrittonSyllable],
) -> &'a mut Z2Element {
    match tail.last_mut() {
        Some(s) => &mut s.base,
        None => prefix,
    }
}

fn push_t(prefix: &mut Z2Element, tail: &mut Vec<BrittonSyllable>, e: i64) {
    let Some(last) = tail.last_mut() else {
        tail.push(BrittonSyllable {
            t_exponent: e,
            base: Z2Element::identity(),
        });
        return;
    };
    if last.base.is_identity() {
        last.t_exponent += e;
        if last.t_exponent == 0 {
            tail.pop();
        }
        return;
    }
    if e == 1 && last.t_exponent < 0 && last.base.exp_b == 0 {
        // t⁻¹ aᵐ t = bᵐ
        let m = last.base.exp_a;
        last.t_exponent += 1;
        if last.t_exponent == 0 {
            tail.pop();
            current_base(prefix, tail).add(0, m);
        } else {
            last.base = Z2Element { exp_a: 0, exp_b: m };
        }
        return;
    }
    if e == -1 && last.t_exponent > 0 && last.base.exp_a == 0 {
        // t bⁿ t⁻¹ = aⁿ
        let n = last.base.exp_b;
        last.t_exponent -= 1;
        if last.t_exponent == 0 {
            tail.pop();
            current_base(prefix, tail).add(n, 0);
        } else {
            last.base = Z2Element { exp_a: n, exp_b: 0 };
        }
        return;
    }
    tail.push(BrittonSyllable {
        t_exponent: e,
        base: Z2Element::identity(),
    });
}

/// The unique factorization `free_part · y^{y_exponent}` of an element
/// of B, with `free_part` a reduced word in alpha and beta.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalFormB {
    pub free_part: Word,
    pub y_exponent: i64,
}

impl NormalFormB {
    pub fn is_trivial(&self) -> bool {
        self.free_part.is_identity() && self.y_exponent == 0
    }

    pub fn to_word(&self) -> Word {
        let mut raw: Vec<(usize, i64)> = self
            .free_part
            .syllables()
            .iter()
            .map(|s| (s.gen, s.exponent))
            .collect();
        raw.push((GEN_Y, self.y_exponent));
        Word::from_syllables(self.free_part.alphabet(), raw).expect("generators in range")
    }
}

/// Computes the normal form of a word over B's alphabet by pushing all
/// y-powers to the right.
///
/// Passing a generator x leftward across y^k replaces it by the
/// conjugation-action image: alpha ↦ alpha·beta^k in closed form, beta
/// fixed. The closed form is validated against iterated substitution in
/// the tests.
pub fn normal_form_b(w: &Word) -> Result<NormalFormB> {
    let b = builtin_b();
    require_alphabet(w, &b)?;
    let mut free: Vec<(usize, i64)> = Vec::new();
    let mut y_exponent: i64 = 0;
    for letter in w.letters() {
        let e: i64 = if letter.inverse { -1 } else { 1 };
        match letter.gen {
            GEN_ALPHA => {
                // φ^{-k}(alpha) = alpha · beta^{-k}
                if e == 1 {
                    push_letter(&mut free, GEN_ALPHA, 1);
                    push_letter(&mut free, GEN_BETA, -y_exponent);
                } else {
                    push_letter(&mut free, GEN_BETA, y_exponent);
                    push_letter(&mut free, GEN_ALPHA, -1);
                }
            }
            GEN_BETA => push_letter(&mut free, GEN_BETA, e),
            GEN_Y => y_exponent += e,
            _ => unreachable!("B has three generators"),
        }
    }
    let free_part = Word::from_syllables(b.alphabet(), free).expect("generators in range");
    Ok(NormalFormB {
        free_part,
        y_exponent,
    })
}

fn push_letter(stack: &mut Vec<(usize, i64)>, gen: usize, exponent: i64) {
    if exponent == 0 {
        return;
    }
    if let Some(last) = stack.last_mut() {
        if last.0 == gen {
            last.1 += exponent;
            if last.1 == 0 {
                stack.pop();
            }
            return;
        }
    }
    stack.push((gen, exponent));
}

/// True iff the word represents the identity of G.
pub fn is_trivial_g(w: &Word) -> Result<bool> {
    Ok(britton_reduce(w)?.is_trivial())
}

/// True iff the word represents the identity of B.
pub fn is_trivial_b(w: &Word) -> Result<bool> {
    Ok(normal_form_b(w)?.is_trivial())
}

/// The built-in groups with implemented word problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinGroup {
    G,
    B,
}

/// Compares two relators as cyclic words, up to rotation and inversion.
fn relators_match(r: &Word, s: &Word) -> bool {
    let letters = |w: &Word| -> Vec<(usize, i64)> {
        w.letters()
            .map(|l| (l.gen, if l.inverse { -1 } else { 1 }))
            .collect()
    };
    let r_letters = letters(r);
    for candidate in [letters(s), letters(&s.inverse())] {
        if candidate.len() != r_letters.len() {
            continue;
        }
        let n = r_letters.len();
        for shift in 0..n.max(1) {
            if (0..n).all(|i| candidate[(i + shift) % n] == r_letters[i]) {
                return true;
            }
        }
    }
    false
}

/// Structural equality of presentations: same generator names, and the
/// same relators as cyclic words up to rotation, inversion, and order.
pub fn same_presentation(p: &Presentation, q: &Presentation) -> bool {
    let p_names: Vec<&str> = p
        .alphabet()
        .symbols()
        .iter()
        .map(|s| s.name.as_str())
        .collect();
    let q_names: Vec<&str> = q
        .alphabet()
        .symbols()
        .iter()
        .map(|s| s.name.as_str())
        .collect();
    if p_names != q_names || p.relators().len() != q.relators().len() {
        return false;
    }
    let mut used = vec![false; q.relators().len()];
    for r in p.relators() {
        let found = q
            .relators()
            .iter()
            .enumerate()
            .find(|(i, s)| !used[*i] && relators_match(r, s));
        match found {
            Some((i, _)) => used[i] = true,
            None => return false,
        }
    }
    true
}

/// Recognizes the built-in presentations structurally.
pub fn identify_builtin(pres: &Presentation) -> Option<BuiltinGroup> {
    if same_presentation(pres, &builtin_g()) {
        Some(BuiltinGroup::G)
    } else if same_presentation(pres, &builtin_b()) {
        Some(BuiltinGroup::B)
    } else {
        None
    }
}

/// Decides triviality in a presentation with an implemented word problem.
pub fn is_trivial_in(pres: &Arc<Presentation>, w: &Word) -> Result<bool> {
    match identify_builtin(pres) {
        Some(BuiltinGroup::G) => is_trivial_g(w),
        Some(BuiltinGroup::B) => is_trivial_b(w),
        None => Err(Error::NoWordProblemSolver),
    }
}

/// A map sending each source generator to a word over the target.
#[derive(Debug, Clone)]
pub struct GeneratorMap {
    source: Arc<Presentation>,
    target: Arc<Presentation>,
    images: Vec<Word>,
}

impl GeneratorMap {
    pub fn new(
        source: &Arc<Presentation>,
        target: &Arc<Presentation>,
        images: Vec<Word>,
    ) -> Result<GeneratorMap> {
        if images.len() != source.generator_count() {
            return Err(Error::InvalidGeneratorMap);
        }
        for w in &images {
            if w.alphabet() != target.alphabet() {
                return Err(Error::InvalidGeneratorMap);
            }
        }
        Ok(GeneratorMap {
            source: Arc::clone(source),
            target: Arc::clone(target),
            images,
        })
    }

    pub fn source(&self) -> &Arc<Presentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Presentation> {
        &self.target
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// The image of a source word under generator substitution.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        if w.alphabet() != self.source.alphabet() {
            return Err(Error::AlphabetMismatch);
        }
        let mut out = Word::identity(self.target.alphabet());
        for s in w.syllables() {
            out = out.concat(&self.images[s.gen].pow(s.exponent))?;
        }
        Ok(out)
    }
}

/// True iff every source relator maps to the identity of the target.
pub fn verify_homomorphism(map: &GeneratorMap) -> Result<bool> {
    for r in map.source().relators() {
        if !is_trivial_in(map.target(), &map.apply(r)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff `f` and `g` are homomorphisms composing to the identity in
/// both directions.
pub fn verify_mutually_inverse(f: &GeneratorMap, g: &GeneratorMap) -> Result<bool> {
    if f.source().alphabet() != g.target().alphabet()
        || f.target().alphabet() != g.source().alphabet()
    {
        return Err(Error::InvalidGeneratorMap);
    }
    if !verify_homomorphism(f)? || !verify_homomorphism(g)? {
        return Ok(false);
    }
    for (pres, first, second) in [(f.source(), f, g), (g.source(), g, f)] {
        for sym in pres.alphabet().symbols() {
            let x = Word::generator(pres.alphabet(), sym.index, 1)?;
            let round_trip = second.apply(&first.apply(&x)?)?;
            if !is_trivial_in(pres, &round_trip.concat(&x.inverse())?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The derived isomorphism G → B: a ↦ y, b ↦ alpha·beta·alpha⁻¹·y,
/// t ↦ alpha⁻¹.
pub fn builtin_iso_g_to_b() -> GeneratorMap {
    let (g, b) = (builtin_g(), builtin_b());
    let images = vec![
        crate::words::parse_word("y", b.alphabet()).unwrap(),
        crate::words::parse_word("alpha beta alpha^-1 y", b.alphabet()).unwrap(),
        crate::words::parse_word("alpha^-1", b.alphabet()).unwrap(),
    ];
    GeneratorMap::new(&g, &b, images).unwrap()
}

/// The derived isomorphism B → G: alpha ↦ t⁻¹, beta ↦ t·b·a⁻¹·t⁻¹, y ↦ a.
pub fn builtin_iso_b_to_g() -> GeneratorMap {
    let (g, b) = (builtin_g(), builtin_b());
    let images = vec![
        crate::words::parse_word("t^-1", g.alphabet()).unwrap(),
        crate::words::parse_word("t b a^-1 t^-1", g.alphabet()).unwrap(),
        crate::words::parse_word("a", g.alphabet()).unwrap(),
    ];
    GeneratorMap::new(&b, &g, images).unwrap()
}

/// Outcome of the bounded freeness probe on a subgroup of G.
#[derive(Debug, Clone, Serialize)]
pub struct FreenessReport {
    pub rank: usize,
    pub max_len: usize,
    /// Words evaluated at each length 1..=max_len.
    pub evaluated_by_length: Vec<u64>,
    /// Abstract words (over x1..xk) whose substitution is trivial in G.
    pub violations: Vec<Word>,
}

impl FreenessReport {
    pub fn total_evaluated(&self) -> u64 {
        self.evaluated_by_length.iter().sum()
    }
}

/// Evaluates every nonempty reduced abstract word of length ≤ `max_len`
/// on the subgroup's generators and reports those that collapse to the
/// identity of G. An empty violation list certifies freeness of the
/// generating set up to relation length `max_len`.
pub fn freeness_probe(sub: &SubgroupSpec, max_len: usize) -> Result<FreenessReport> {
    if identify_builtin(sub.ambient()) != Some(BuiltinGroup::G) {
        return Err(Error::NoWordProblemSolver);
    }
    let rank = sub.generators().len();
    let names: Vec<String> = (1..=rank).map(|i| format!("x{i}")).collect();
    let abstract_alphabet = Alphabet::new(&names)?;

    // Letters 2i and 2i+1 are xᵢ₊₁ and its inverse.
    let images: Vec<Word> = sub
        .generators()
        .iter()
        .flat_map(|w| [w.clone(), w.inverse()])
        .collect();

    // Depth-first walk over reduced abstract words, skipping immediate
    // inverse backtracking.
    struct Walk {
        rank: usize,
        max_len: usize,
        images: Vec<Word>,
        abstract_alphabet: Arc<Alphabet>,
        path: Vec<usize>,
        products: Vec<Word>,
        evaluated_by_length: Vec<u64>,
        violations: Vec<(Vec<usize>, Word)>,
    }

    impl Walk {
        fn run(&mut self) -> Result<()> {
            if self.path.len() == self.max_len {
                return Ok(());
            }
            for letter in 0..2 * self.rank {
                if let Some(&last) = self.path.last() {
                    if last ^ 1 == letter {
                        continue;
                    }
                }
                self.path.push(letter);
                let product = self.products.last().unwrap().concat(&self.images[letter])?;
                self.evaluated_by_length[self.path.len() - 1] += 1;
                if is_trivial_g(&product)? {
                    let raw: Vec<(usize, i64)> = self
                        .path
                        .iter()
                        .map(|&l| (l / 2, if l % 2 == 0 { 1 } else { -1 }))
                        .collect();
                    let abstract_word = Word::from_syllables(&self.abstract_alphabet, raw)?;
                    self.violations.push((self.path.clone(), abstract_word));
                }
                self.products.push(product);
                self.run()?;
                self.products.pop();
                self.path.pop();
            }
            Ok(())
        }
    }

    let mut walk = Walk {
        rank,
        max_len,
        images,
        abstract_alphabet,
        path: Vec::new(),
        products: vec![Word::identity(sub.ambient().alphabet())],
        evaluated_by_length: vec![0u64; max_len],
        violations: Vec::new(),
    };
    walk.run()?;

    let Walk {
        mut violations,
        evaluated_by_length,
        ..
    } = walk;
    violations.sort_by(|(p1, _), (p2, _)| p1.len().cmp(&p2.len()).then(p1.cmp(p2)));
    Ok(FreenessReport {
        rank,
        max_len,
        evaluated_by_length,
        violations: violations.into_iter().map(|(_, w)| w).collect(),
    })
}

/// Results of the randomized word-problem soundness trials.
#[derive(Debug, Clone, Serialize)]
pub struct SoundnessReport {
    pub group: String,
    pub trials: u64,
    pub seed: u64,
    pub insertion_failures: u64,
    pub inverse_failures: u64,
}

impl SoundnessReport {
    pub fn passed(&self) -> bool {
        self.insertion_failures == 0 && self.inverse_failures == 0
    }
}

/// Runs `trials` relator-insertion trials and `trials` inverse-law trials
/// against the group's word-problem solver, with a seeded generator.
///
/// Inserting a relator (or an inverse of one) at any position must not
/// change the triviality verdict, and w·w⁻¹ must always be trivial.
pub fn soundness_trials(
    pres: &Arc<Presentation>,
    trials: u64,
    seed: u64,
) -> Result<SoundnessReport> {
    let group = match identify_builtin(pres) {
        Some(BuiltinGroup::G) => "G",
        Some(BuiltinGroup::B) => "B",
        None => return Err(Error::NoWordProblemSolver),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens = pres.generator_count();
    let mut insertion_failures = 0;
    let mut inverse_failures = 0;

    let random_letters = |rng: &mut ChaCha8Rng| -> Vec<(usize, i64)> {
        let len = rng.gen_range(0..=24);
        (0..len)
            .map(|_| {
                (
                    rng.gen_range(0..gens),
                    if rng.gen_bool(0.5) { 1 } else { -1 },
                )
            })
            .collect()
    };

    for _ in 0..trials {
        let letters = random_letters(&mut rng);
        let w = Word::from_syllables(pres.alphabet(), letters.iter().copied())?;

        let relator = &pres.relators()[rng.gen_range(0..pres.relators().len())];
        let relator = if rng.gen_bool(0.5) {
            relator.clone()
        } else {
            relator.inverse()
        };
        let position = rng.gen_range(0..=letters.len());
        let mut inserted = letters[..position].to_vec();
        inserted.extend(
            relator
                .letters()
                .map(|l| (l.gen, if l.inverse { -1 } else { 1 })),
        );
        inserted.extend_from_slice(&letters[position..]);
        let w_inserted = Word::from_syllables(pres.alphabet(), inserted)?;
        if is_trivial_in(pres, &w)? != is_trivial_in(pres, &w_inserted)? {
            insertion_failures += 1;
        }

        let product = w.concat(&w.inverse())?;
        if !is_trivial_in(pres, &product)? {
            inverse_failures += 1;
        }
    }

    Ok(SoundnessReport {
        group: group.to_string(),
        trials,
        seed,
        insertion_failures,
        inverse_failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn g() -> Arc<Presentation> {
        builtin_g()
    }

    fn b() -> Arc<Presentation> {
        builtin_b()
    }

    fn gw(text: &str) -> Word {
        parse_word(text, g().alphabet()).unwrap()
    }

    fn bw(text: &str) -> Word {
        parse_word(text, b().alphabet()).unwrap()
    }

    #[test]
    fn relators_are_trivial() {
        assert!(is_trivial_g(&gw("t^-1 a t b^-1")).unwrap());
        assert!(is_trivial_g(&gw("a b a^-1 b^-1")).unwrap());
        assert!(is_trivial_b(&bw("y^-1 alpha y beta^-1 alpha^-1")).unwrap());
        assert!(is_trivial_b(&bw("y^-1 beta y beta^-1")).unwrap());
    }

    #[test]
    fn t_a_t_inverse_is_irreducible() {
        let form = britton_reduce(&gw("t a t^-1")).unwrap();
        assert_eq!(
            form,
            BrittonFormG {
                prefix: Z2Element::identity(),
                tail: vec![
                    BrittonSyllable {
                        t_exponent: 1,
                        base: Z2Element { exp_a: 1, exp_b: 0 }
                    },
                    BrittonSyllable {
                        t_exponent: -1,
                        base: Z2Element::identity()
                    },
                ],
            }
        );
        assert!(!form.is_trivial());
    }

    #[test]
    fn trivial_examples() {
        assert!(is_trivial_g(&gw("")).unwrap());
        assert!(!is_trivial_g(&gw("a")).unwrap());
    }

    #[test]
    fn base_commutes_with_conjugate() {
        // [a, t a t⁻¹] collapses even though t a t⁻¹ is not a base element.
        let w = gw("a^-1 t a^-1 t^-1 a t a t^-1");
        assert!(is_trivial_g(&w).unwrap());
        assert!(!britton_reduce(&gw("t a t^-1")).unwrap().tail.is_empty());
    }

    #[test]
    fn phi_closed_form_matches_iteration() {
        // Iterated substitution alpha ↦ alpha·beta (or its inverse) as the
        // oracle for the closed form alpha ↦ alpha·beta^m.
        let b = b();
        let apply_once = |w: &Word, inverse: bool| -> Word {
            let mut out = Word::identity(b.alphabet());
            for s in w.syllables() {
                let image = match s.gen {
                    GEN_ALPHA if !inverse => bw("alpha beta"),
                    GEN_ALPHA => bw("alpha beta^-1"),
                    GEN_BETA => bw("beta"),
                    _ => panic!("free part contains y"),
                };
                out = out.concat(&image.pow(s.exponent)).unwrap();
            }
            out
        };
        for m in -8i64..=8 {
            let mut iterated = bw("alpha");
            for _ in 0..m.unsigned_abs() {
                iterated = apply_once(&iterated, m < 0);
            }
            let closed = bw("alpha").concat(&bw("beta").pow(m)).unwrap();
            assert_eq!(iterated, closed, "phi^{m} mismatch");
        }
    }

    #[test]
    fn normal_form_b_roundtrip_examples() {
        for text in ["alpha y beta^-1", "y^2 alpha", "beta^-3 y^-1 alpha y"] {
            let nf = normal_form_b(&bw(text)).unwrap();
            let back = normal_form_b(&nf.to_word()).unwrap();
            assert_eq!(nf, back);
            assert!(is_trivial_b(&bw(text).concat(&nf.to_word().inverse()).unwrap()).unwrap());
        }
    }

    #[test]
    fn builtin_maps_are_inverse_isomorphisms() {
        let f = builtin_iso_g_to_b();
        let g_map = builtin_iso_b_to_g();
        assert!(verify_homomorphism(&f).unwrap());
        assert!(verify_homomorphism(&g_map).unwrap());
        assert!(verify_mutually_inverse(&f, &g_map).unwrap());
    }

    #[test]
    fn identity_map_is_isomorphism() {
        let g = g();
        let images = (0..3)
            .map(|i| Word::generator(g.alphabet(), i, 1).unwrap())
            .collect();
        let ident = GeneratorMap::new(&g, &g, images).unwrap();
        assert!(verify_homomorphism(&ident).unwrap());
        assert!(verify_mutually_inverse(&ident, &ident).unwrap());
    }

    #[test]
    fn wrong_inverse_fails() {
        let f = builtin_iso_g_to_b();
        let g_pres = g();
        let b_pres = b();
        let wrong = GeneratorMap::new(
            &b_pres,
            &g_pres,
            vec![gw("t"), gw("t b a^-1 t^-1"), gw("a")],
        )
        .unwrap();
        assert!(!verify_mutually_inverse(&f, &wrong).unwrap());
    }

    #[test]
    fn unknown_target_has_no_solver() {
        let free = Presentation::new(
            Alphabet::new(&["x", "y"]).unwrap(),
            vec![parse_word("x y x^-1 y^-1", &Alphabet::new(&["x", "y"]).unwrap()).unwrap()],
        )
        .unwrap();
        let w = parse_word("x", free.alphabet()).unwrap();
        assert_eq!(is_trivial_in(&free, &w), Err(Error::NoWordProblemSolver));
    }

    #[test]
    fn freeness_probe_flags_commuting_pair() {
        let sub = SubgroupSpec::new(&g(), vec![gw("a"), gw("b")]).unwrap();
        let report = freeness_probe(&sub, 4).unwrap();
        let names = ["x1", "x2"];
        let abstract_alphabet = Alphabet::new(&names).unwrap();
        let commutator = parse_word("x1 x2 x1^-1 x2^-1", &abstract_alphabet).unwrap();
        assert!(report
            .violations
            .iter()
            .any(|w| w.to_string() == commutator.to_string()));
    }

    #[test]
    fn freeness_probe_single_generator_is_free() {
        let sub = SubgroupSpec::new(&g(), vec![gw("a")]).unwrap();
        let report = freeness_probe(&sub, 6).unwrap();
        assert!(report.violations.is_empty());
    }

    #[test]
    fn freeness_probe_counts() {
        let sub =
            SubgroupSpec::new(&g(), vec![gw("a b b"), gw("t"), gw("b t a t^-1 b^-1")]).unwrap();
        let report = freeness_probe(&sub, 3).unwrap();
        assert_eq!(report.evaluated_by_length, vec![6, 30, 150]);
        assert!(report.violations.is_empty());
    }

    #[test]
    fn soundness_small_runs_clean() {
        for pres in [g(), b()] {
            let report = soundness_trials(&pres, 300, 7).unwrap();
            assert!(report.passed(), "{report:?}");
        }
    }

    #[test]
    fn builtin_identification() {
        assert_eq!(identify_builtin(&g()), Some(BuiltinGroup::G));
        assert_eq!(identify_builtin(&b()), Some(BuiltinGroup::B));
        // Rotated relator still identifies.
        let alphabet = Alphabet::new(&["a", "b", "t"]).unwrap();
        let r1 = parse_word("b^-1 a b a^-1", &alphabet).unwrap();
        let r2 = parse_word("b^-1 t^-1 a t", &alphabet).unwrap();
        let p = Presentation::new(alphabet, vec![r2, r1]).unwrap();
        assert_eq!(identify_builtin(&p), Some(BuiltinGroup::G));
    }
}
