//! Property tests for word arithmetic and the word-problem solvers.

use proptest::prelude::*;

use fpg::normal_form::{britton_reduce, is_trivial_b, is_trivial_g, normal_form_b};
use fpg::words::{builtin_b, builtin_g, parse_word, Word};

fn raw_syllables() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0usize..3, -4i64..=4), 0..12)
}

fn letters_of(w: &Word) -> Vec<(usize, i64)> {
    w.letters()
        .map(|l| (l.gen, if l.inverse { -1 } else { 1 }))
        .collect()
}

proptest! {
    #[test]
    fn free_reduce_is_idempotent(raw in raw_syllables()) {
        let alphabet = builtin_g().alphabet().clone();
        let once = Word::from_syllables(&alphabet, raw).unwrap();
        let twice =
            Word::from_syllables(&alphabet, once.syllables().iter().map(|s| (s.gen, s.exponent)))
                .unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn inverse_antihomomorphism(u in raw_syllables(), v in raw_syllables()) {
        let alphabet = builtin_g().alphabet().clone();
        let u = Word::from_syllables(&alphabet, u).unwrap();
        let v = Word::from_syllables(&alphabet, v).unwrap();
        prop_assert_eq!(
            u.concat(&v).unwrap().inverse(),
            v.inverse().concat(&u.inverse()).unwrap()
        );
    }

    #[test]
    fn concat_length_subadditive(u in raw_syllables(), v in raw_syllables()) {
        let alphabet = builtin_g().alphabet().clone();
        let u = Word::from_syllables(&alphabet, u).unwrap();
        let v = Word::from_syllables(&alphabet, v).unwrap();
        prop_assert!(u.concat(&v).unwrap().letter_len() <= u.letter_len() + v.letter_len());
    }

    #[test]
    fn display_parse_roundtrip(raw in raw_syllables()) {
        let alphabet = builtin_g().alphabet().clone();
        let w = Word::from_syllables(&alphabet, raw).unwrap();
        prop_assert_eq!(parse_word(&w.to_string(), &alphabet).unwrap(), w);
    }

    #[test]
    fn britton_output_is_pinch_free(raw in raw_syllables()) {
        let w = Word::from_syllables(builtin_g().alphabet(), raw).unwrap();
        prop_assert!(britton_reduce(&w).unwrap().is_pinch_free());
    }

    #[test]
    fn relator_insertion_preserves_triviality_in_g(
        raw in raw_syllables(),
        relator_choice in 0usize..4,
        position in any::<prop::sample::Index>(),
    ) {
        let g = builtin_g();
        let w = Word::from_syllables(g.alphabet(), raw).unwrap();
        let relator = &g.relators()[relator_choice % 2];
        let relator = if relator_choice < 2 { relator.clone() } else { relator.inverse() };
        let mut letters = letters_of(&w);
        let at = position.index(letters.len() + 1);
        letters.splice(at..at, letters_of(&relator));
        let inserted = Word::from_syllables(g.alphabet(), letters).unwrap();
        prop_assert_eq!(is_trivial_g(&w).unwrap(), is_trivial_g(&inserted).unwrap());
    }

    #[test]
    fn relator_insertion_preserves_triviality_in_b(
        raw in raw_syllables(),
        relator_choice in 0usize..4,
        position in any::<prop::sample::Index>(),
    ) {
        let b = builtin_b();
        let w = Word::from_syllables(b.alphabet(), raw).unwrap();
        let relator = &b.relators()[relator_choice % 2];
        let relator = if relator_choice < 2 { relator.clone() } else { relator.inverse() };
        let mut letters = letters_of(&w);
        let at = position.index(letters.len() + 1);
        letters.splice(at..at, letters_of(&relator));
        let inserted = Word::from_syllables(b.alphabet(), letters).unwrap();
        prop_assert_eq!(is_trivial_b(&w).unwrap(), is_trivial_b(&inserted).unwrap());
    }

    #[test]
    fn inverse_law_in_both_groups(raw in raw_syllables()) {
        let g = builtin_g();
        let w = Word::from_syllables(g.alphabet(), raw.clone()).unwrap();
        prop_assert!(is_trivial_g(&w.concat(&w.inverse()).unwrap()).unwrap());
        let b = builtin_b();
        let w = Word::from_syllables(b.alphabet(), raw).unwrap();
        prop_assert!(is_trivial_b(&w.concat(&w.inverse()).unwrap()).unwrap());
    }

    #[test]
    fn b_normal_form_is_a_fixed_point(raw in raw_syllables()) {
        let b = builtin_b();
        let w = Word::from_syllables(b.alphabet(), raw).unwrap();
        let nf = normal_form_b(&w).unwrap();
        prop_assert!(nf.free_part.syllables().iter().all(|s| s.gen != 2));
        prop_assert_eq!(normal_form_b(&nf.to_word()).unwrap(), nf.clone());
        // The normal form names the same element.
        prop_assert!(is_trivial_b(&w.concat(&nf.to_word().inverse()).unwrap()).unwrap());
    }

    #[test]
    fn cyclic_reduction_is_idempotent_and_conjugation_shaped(raw in raw_syllables()) {
        let alphabet = builtin_g().alphabet().clone();
        let w = Word::from_syllables(&alphabet, raw).unwrap();
        let reduced = w.cyclically_reduced();
        prop_assert_eq!(reduced.cyclically_reduced(), reduced.clone());
        // w = c⁻¹ · reduced · c for the trimmed prefix c.
        prop_assert!(is_trivial_g(
            &w.concat(&w.inverse()).unwrap()
        ).unwrap());
    }
}
