//! Typical and atypical segments of `t`.
//!
//! A segment `w` is *atypical* when some endomorphism `φ` of `{a,b}⁺` other
//! than `μⁿ` and `ξ∘μⁿ` maps it to a segment. Up to reversal and letter
//! exchange, the atypical words are the factors of `aabab`, `abaaba` and
//! `aabbaab`; they form, together with a zero, the Rees quotient `S⁰`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::OnceLock;

use serde::Serialize;

use crate::avoidance::pruned_candidates;
use crate::error::{Error, Result};
use crate::morphisms::{Morphism, MorphismIter};
use crate::thue_morse::{self, is_segment_letters, serialize_display};
use crate::words::{binary_text, find_factor, LetterIndex, Word};

/// The three maximal atypical words, each the least of its variants.
pub const MAXIMAL_ATYPICAL: [&str; 3] = ["aabab", "abaaba", "aabbaab"];

const LENGTH3_REQUIRED: [&str; 4] = ["aab", "abb", "bba", "baa"];
const LENGTH3_ONE_OF: [&str; 2] = ["aba", "bab"];

struct AtypicalTable {
    words: Vec<Word>,
    members: HashSet<Vec<LetterIndex>>,
}

fn table() -> &'static AtypicalTable {
    static TABLE: OnceLock<AtypicalTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut set = BTreeSet::new();
        for text in MAXIMAL_ATYPICAL {
            let top = Word::binary(text).expect("constant words are binary");
            for variant in top.variants().expect("binary") {
                for start in 0..variant.len() {
                    for end in start + 1..=variant.len() {
                        set.insert(variant.factor(start, end).unwrap());
                    }
                }
            }
        }
        let words: Vec<Word> = set.into_iter().collect();
        let members = words.iter().map(|w| w.letters().to_vec()).collect();
        AtypicalTable { words, members }
    })
}

/// All atypical words, length-then-lex.
pub fn atypical_words() -> &'static [Word] {
    &table().words
}

pub fn is_atypical(w: &Word) -> bool {
    w.is_binary() && table().members.contains(w.letters())
}

/// Contains `aab`, `abb`, `bba`, `baa` and at least one of `aba`, `bab`.
///
/// Every segment meeting this criterion is typical.
pub fn satisfies_length3_criterion(w: &Word) -> Result<bool> {
    w.require_binary()?;
    let has = |s: &str| {
        let needle = Word::binary(s).expect("constant");
        find_factor(w.letters(), needle.letters()).is_some()
    };
    Ok(LENGTH3_REQUIRED.iter().all(|s| has(s)) && LENGTH3_ONE_OF.iter().any(|s| has(s)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Typical,
    Atypical,
    NotASegment,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Evidence {
    /// Typical: the length-3 segments found in the word and whether they meet
    /// the sufficient criterion. Typical words failing the criterion are
    /// certified by absence from the complete atypical list.
    Criterion {
        length3_factors: Vec<String>,
        criterion_satisfied: bool,
    },
    /// Atypical: a maximal atypical word and the variant of it containing the word.
    Membership {
        maximal: String,
        variant: String,
        position: usize,
    },
    NotASegment,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypicalityVerdict {
    #[serde(serialize_with = "serialize_display")]
    pub word: Word,
    pub verdict: Verdict,
    pub evidence: Evidence,
}

fn membership_evidence(w: &Word) -> Option<Evidence> {
    for text in MAXIMAL_ATYPICAL {
        let top = Word::binary(text).expect("constant");
        for variant in top.variants().expect("binary") {
            if let Some(position) = find_factor(variant.letters(), w.letters()) {
                return Some(Evidence::Membership {
                    maximal: text.to_string(),
                    variant: variant.to_string(),
                    position,
                });
            }
        }
    }
    None
}

/// Typical / atypical / not a segment, decided from the closed-form atypical
/// list and cross-checked against the length-3 criterion.
pub fn classify(w: &Word) -> Result<TypicalityVerdict> {
    w.require_binary()?;
    if !is_segment_letters(w.letters()) {
        return Ok(TypicalityVerdict {
            word: w.clone(),
            verdict: Verdict::NotASegment,
            evidence: Evidence::NotASegment,
        });
    }
    let criterion = satisfies_length3_criterion(w)?;
    if is_atypical(w) {
        if criterion {
            return Err(Error::Consistency(format!(
                "{w} meets the length-3 criterion but is listed as atypical"
            )));
        }
        let evidence = membership_evidence(w)
            .ok_or_else(|| Error::Consistency(format!("{w} listed as atypical without a source")))?;
        return Ok(TypicalityVerdict {
            word: w.clone(),
            verdict: Verdict::Atypical,
            evidence,
        });
    }
    let length3_factors = thue_morse::segments_of_length_letters(3)
        .into_iter()
        .filter(|s| find_factor(w.letters(), s).is_some())
        .map(|s| binary_text(&s))
        .collect();
    Ok(TypicalityVerdict {
        word: w.clone(),
        verdict: Verdict::Typical,
        evidence: Evidence::Criterion {
            length3_factors,
            criterion_satisfied: criterion,
        },
    })
}

/// The first enumerated endomorphism with images of length at most
/// `max_image_len` that is neither `μⁿ` nor `ξ∘μⁿ` and maps `w` to a segment.
///
/// A hit certifies atypicality; `None` only means nothing was found within
/// the bound.
pub fn brute_force_atypical_check(w: &Word, max_image_len: usize) -> Result<Option<Morphism>> {
    w.require_binary()?;
    if !is_segment_letters(w.letters()) {
        return Err(Error::NotASegment(w.to_string()));
    }
    if max_image_len == 0 || max_image_len > 16 {
        return Err(Error::out_of_range("max image length", max_image_len, "1..=16"));
    }
    let candidates = pruned_candidates(w, max_image_len);
    Ok(MorphismIter::with_candidates(w.alphabet().clone(), candidates).find(|phi| {
        is_segment_letters(&phi.apply_letters(w.letters())) && phi.in_mu_xi_monoid().is_none()
    }))
}

/// The first segment (length-then-lex) of length at most `max_len` whose image
/// under `φ` is not a segment.
pub fn segment_preservation_check(phi: &Morphism, max_len: usize) -> Result<Option<Word>> {
    if !phi.is_binary_endomorphism() {
        return Err(Error::NotBinary(phi.to_string()));
    }
    for k in 1..=max_len {
        for s in thue_morse::segments_of_length_letters(k) {
            if !is_segment_letters(&phi.apply_letters(&s)) {
                return Ok(Some(Word::from_binary_unchecked(s)));
            }
        }
    }
    Ok(None)
}

/// An element of `S⁰`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum S0Element {
    Zero,
    Word(usize),
}

/// The atypical words with an adjoined zero, multiplied by concatenation when
/// the result stays atypical and sent to zero otherwise.
#[derive(Debug, Clone)]
pub struct AtypicalSemigroup {
    elements: Vec<Word>,
    index: HashMap<Vec<LetterIndex>, usize>,
}

pub fn build_s0() -> AtypicalSemigroup {
    let elements = atypical_words().to_vec();
    let index = elements
        .iter()
        .enumerate()
        .map(|(i, w)| (w.letters().to_vec(), i))
        .collect();
    AtypicalSemigroup { elements, index }
}

impl AtypicalSemigroup {
    /// Nonzero elements, length-then-lex.
    pub fn words(&self) -> &[Word] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> impl Iterator<Item = S0Element> + '_ {
        std::iter::once(S0Element::Zero).chain((0..self.elements.len()).map(S0Element::Word))
    }

    pub fn element(&self, w: &Word) -> Option<S0Element> {
        if !w.is_binary() {
            return None;
        }
        self.index.get(w.letters()).map(|&i| S0Element::Word(i))
    }

    pub fn word(&self, x: S0Element) -> Option<&Word> {
        match x {
            S0Element::Zero => None,
            S0Element::Word(i) => self.elements.get(i),
        }
    }

    pub fn product(&self, x: S0Element, y: S0Element) -> S0Element {
        match (x, y) {
            (S0Element::Word(i), S0Element::Word(j)) => {
                let mut joined = self.elements[i].letters().to_vec();
                joined.extend_from_slice(self.elements[j].letters());
                self.index
                    .get(&joined)
                    .map_or(S0Element::Zero, |&k| S0Element::Word(k))
            }
            _ => S0Element::Zero,
        }
    }

    /// `u` lies above `v` in the 𝒥-order iff `u` is a factor of `v`; zero lies
    /// below everything.
    pub fn above(&self, u: S0Element, v: S0Element) -> bool {
        match (u, v) {
            (_, S0Element::Zero) => true,
            (S0Element::Zero, _) => false,
            (S0Element::Word(i), S0Element::Word(j)) => {
                find_factor(self.elements[j].letters(), self.elements[i].letters()).is_some()
            }
        }
    }

    /// Covering pairs `(factor, extension)` among the nonzero elements.
    ///
    /// Atypical words are closed under factors, so `u` is covered by `v`
    /// exactly when `u` is a factor of `v` and `|v| = |u| + 1`.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for (j, v) in self.elements.iter().enumerate() {
            if v.len() < 2 {
                continue;
            }
            let mut below: Vec<usize> = [&v.letters()[1..], &v.letters()[..v.len() - 1]]
                .iter()
                .map(|f| self.index[*f])
                .collect();
            below.sort_unstable();
            below.dedup();
            edges.extend(below.into_iter().map(|i| (i, j)));
        }
        edges.sort_unstable();
        edges
    }

    /// Words with no atypical proper extension; these sit directly above zero.
    pub fn maximal(&self) -> Vec<usize> {
        let mut has_extension = vec![false; self.elements.len()];
        for (i, _) in self.hasse_edges() {
            has_extension[i] = true;
        }
        (0..self.elements.len()).filter(|&i| !has_extension[i]).collect()
    }

    pub fn is_least_variant(&self, i: usize) -> bool {
        let w = &self.elements[i];
        w.variants().expect("binary").first() == Some(w)
    }
}

/// Hasse diagram of the 𝒥-order on `S⁰` in Graphviz DOT.
///
/// Edges point from a word to its covering extensions and from maximal words
/// to `0`. Least variants are bold; the maximal least variants (the three
/// generating words) are drawn with a double border.
pub fn export_jorder_dot(s: &AtypicalSemigroup) -> String {
    let maximal: HashSet<usize> = s.maximal().into_iter().collect();
    let mut out = String::from("digraph S0 {\n  node [shape=box];\n");
    for (i, w) in s.words().iter().enumerate() {
        let mut attrs = Vec::new();
        if s.is_least_variant(i) {
            attrs.push("style=bold");
            if maximal.contains(&i) {
                attrs.push("peripheries=2");
            }
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  \"{w}\";");
        } else {
            let _ = writeln!(out, "  \"{w}\" [{}];", attrs.join(", "));
        }
    }
    out.push_str("  \"0\";\n");
    for (i, j) in s.hasse_edges() {
        let _ = writeln!(out, "  \"{}\" -> \"{}\";", s.words()[i], s.words()[j]);
    }
    let mut tops: Vec<usize> = maximal.into_iter().collect();
    tops.sort_unstable();
    for i in tops {
        let _ = writeln!(out, "  \"{}\" -> \"0\";", s.words()[i]);
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::binary(s).unwrap()
    }

    #[test]
    fn atypical_list_membership() {
        assert!(is_atypical(&w("abaaba")));
        assert!(is_atypical(&w("babaa")));
        assert!(is_atypical(&w("aab")));
        assert!(!is_atypical(&w("aababb")));
        let words = atypical_words();
        assert!(words.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn criterion() {
        assert!(satisfies_length3_criterion(&w("abbaaba")).unwrap());
        assert!(!satisfies_length3_criterion(&w("aababbaba")).unwrap());
        assert!(!satisfies_length3_criterion(&w("aab")).unwrap());
    }

    #[test]
    fn classification() {
        assert_eq!(classify(&w("aabab")).unwrap().verdict, Verdict::Atypical);
        assert_eq!(classify(&w("aababb")).unwrap().verdict, Verdict::Typical);
        assert_eq!(classify(&w("aabaa")).unwrap().verdict, Verdict::NotASegment);
        match classify(&w("babaa")).unwrap().evidence {
            Evidence::Membership { maximal, variant, position } => {
                assert_eq!(maximal, "aabab");
                assert_eq!(&variant[position..position + 5], "babaa");
            }
            other => panic!("unexpected evidence {other:?}"),
        }
        match classify(&w("abbaaba")).unwrap().evidence {
            Evidence::Criterion { criterion_satisfied, length3_factors } => {
                assert!(criterion_satisfied);
                assert_eq!(length3_factors, ["aab", "aba", "abb", "baa", "bba"]);
            }
            other => panic!("unexpected evidence {other:?}"),
        }
    }

    #[test]
    fn brute_force_examples() {
        let phi = brute_force_atypical_check(&w("abaaba"), 2).unwrap().unwrap();
        assert_eq!(phi.to_string(), "a->a,b->bb");
        assert!(brute_force_atypical_check(&w("aabab"), 8).unwrap().is_some());
        assert_eq!(brute_force_atypical_check(&w("abbaabba"), 6).unwrap(), None);
        assert!(matches!(
            brute_force_atypical_check(&w("aaa"), 2),
            Err(Error::NotASegment(_))
        ));
    }

    #[test]
    fn s0_products() {
        let s = build_s0();
        let el = |t: &str| s.element(&w(t)).unwrap();
        assert_eq!(s.product(el("a"), el("ab")), el("aab"));
        assert_eq!(s.product(el("aabab"), el("a")), S0Element::Zero);
        for x in s.elements() {
            assert_eq!(s.product(x, S0Element::Zero), S0Element::Zero);
            assert_eq!(s.product(S0Element::Zero, x), S0Element::Zero);
        }
    }

    #[test]
    fn preservation() {
        assert_eq!(segment_preservation_check(&Morphism::mu(), 12).unwrap(), None);
        let xi_mu2 = Morphism::xi()
            .compose(&crate::morphisms::mu_power(2).unwrap())
            .unwrap();
        assert_eq!(segment_preservation_check(&xi_mu2, 12).unwrap(), None);
        let square_b = Morphism::binary("a", "bb").unwrap();
        let bad = segment_preservation_check(&square_b, 10).unwrap().unwrap();
        assert!(!thue_morse::is_segment(&square_b.apply(&bad).unwrap()).unwrap());
        let criterion_word = w("aabbaabab");
        assert!(thue_morse::is_segment(&criterion_word).unwrap());
        assert!(!thue_morse::is_segment(&square_b.apply(&criterion_word).unwrap()).unwrap());
    }

    #[test]
    fn dot_shape() {
        let s = build_s0();
        let dot = export_jorder_dot(&s);
        assert!(dot.starts_with("digraph S0 {"));
        assert!(dot.contains("\"aabab\" [style=bold, peripheries=2];"));
        assert!(dot.contains("\"abaaba\" [style=bold, peripheries=2];"));
        assert!(dot.contains("\"aabbaab\" [style=bold, peripheries=2];"));
        assert!(dot.contains("\"babaa\";"));
        assert!(dot.contains("\"0\";"));
        assert!(dot.contains("\"aabab\" -> \"0\";"));
    }
}
