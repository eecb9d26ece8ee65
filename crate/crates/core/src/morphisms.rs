//! Nonerasing homomorphisms of free semigroups into `{a, b}⁺` and the
//! distinguished endomorphisms `μ` (a→ab, b→ba) and `ξ` (a↔b).

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::thue_morse;
use crate::words::{Alphabet, LetterIndex, Word, A, B};

/// Default ceiling on `n` for [`mu_power`]; images have length `2ⁿ`.
pub const DEFAULT_MAX_MU_POWER: u32 = 30;

/// A homomorphism `source⁺ → target⁺` given by one nonempty image per letter.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Morphism {
    source: Alphabet,
    target: Alphabet,
    images: Vec<Vec<LetterIndex>>,
}

/// Position of a morphism inside the monoid generated by `μ` and `ξ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MonoidForm {
    /// The exponent `n` of `μⁿ`.
    pub power: u32,
    /// Whether the morphism is `ξ∘μⁿ` rather than `μⁿ`.
    pub exchange: bool,
}

impl Morphism {
    pub fn new(source: Alphabet, target: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != source.len() {
            return Err(Error::MalformedMorphism {
                literal: images
                    .iter()
                    .map(|w| w.to_string())
                    .collect::<Vec<_>>()
                    .join(","),
                reason: format!(
                    "expected {} images for source alphabet {source}, got {}",
                    source.len(),
                    images.len()
                ),
            });
        }
        let images = images
            .into_iter()
            .map(|w| {
                if w.alphabet() != &target {
                    Err(Error::AlphabetMismatch {
                        expected: target.to_string(),
                        found: w.alphabet().to_string(),
                    })
                } else {
                    Ok(w.into_letters())
                }
            })
            .collect::<Result<_>>()?;
        Ok(Morphism {
            source,
            target,
            images,
        })
    }

    /// Endomorphism of `{a, b}⁺` with the given images of `a` and `b`.
    pub fn binary(image_a: &str, image_b: &str) -> Result<Self> {
        Morphism::new(
            Alphabet::binary(),
            Alphabet::binary(),
            vec![Word::binary(image_a)?, Word::binary(image_b)?],
        )
    }

    /// Images must be nonempty and within the binary alphabet.
    pub(crate) fn from_binary_images(source: Alphabet, images: Vec<Vec<LetterIndex>>) -> Self {
        debug_assert_eq!(source.len(), images.len());
        debug_assert!(images.iter().all(|i| !i.is_empty()));
        Morphism {
            source,
            target: Alphabet::binary(),
            images,
        }
    }

    pub fn identity(alphabet: &Alphabet) -> Self {
        Morphism {
            source: alphabet.clone(),
            target: alphabet.clone(),
            images: (0..alphabet.len()).map(|i| vec![i as LetterIndex]).collect(),
        }
    }

    /// `μ`: a→ab, b→ba.
    pub fn mu() -> Self {
        Morphism::from_binary_images(Alphabet::binary(), vec![vec![A, B], vec![B, A]])
    }

    /// `ξ`: a→b, b→a.
    pub fn xi() -> Self {
        Morphism::from_binary_images(Alphabet::binary(), vec![vec![B], vec![A]])
    }

    /// Parses `a->ab,b->ba` style literals. The source alphabet is the set of
    /// letters on the left-hand sides, in alphabetical order.
    pub fn parse(literal: &str, target: &Alphabet) -> Result<Self> {
        let malformed = |reason: &str| Error::MalformedMorphism {
            literal: literal.to_string(),
            reason: reason.to_string(),
        };
        let mut pairs: Vec<(char, Word)> = Vec::new();
        for part in literal.split(',') {
            let (lhs, rhs) = part
                .split_once("->")
                .ok_or_else(|| malformed("expected letter->image pairs"))?;
            let mut chars = lhs.chars();
            let letter = match (chars.next(), chars.next()) {
                (Some(c), None) => c,
                _ => return Err(malformed("left-hand side must be a single letter")),
            };
            if rhs.is_empty() {
                return Err(malformed("empty image"));
            }
            if pairs.iter().any(|(c, _)| *c == letter) {
                return Err(malformed("letter mapped twice"));
            }
            let image = Word::parse(rhs, target)
                .map_err(|e| malformed(&e.to_string()))?;
            pairs.push((letter, image));
        }
        pairs.sort_by_key(|(c, _)| *c);
        let letters: String = pairs.iter().map(|(c, _)| *c).collect();
        let source = Alphabet::new(&letters).map_err(|e| malformed(&e.to_string()))?;
        Morphism::new(source, target.clone(), pairs.into_iter().map(|(_, w)| w).collect())
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    pub fn image(&self, letter: LetterIndex) -> Word {
        Word::new(self.target.clone(), self.images[letter as usize].clone())
            .expect("images are nonempty by construction")
    }

    pub fn image_of(&self, symbol: char) -> Option<Word> {
        self.source.index_of(symbol).map(|l| self.image(l))
    }

    pub fn is_binary_endomorphism(&self) -> bool {
        self.source.is_binary() && self.target.is_binary()
    }

    pub fn apply(&self, word: &Word) -> Result<Word> {
        if word.alphabet() != &self.source {
            return Err(Error::AlphabetMismatch {
                expected: self.source.to_string(),
                found: word.alphabet().to_string(),
            });
        }
        Word::new(self.target.clone(), self.apply_letters(word.letters()))
    }

    pub(crate) fn apply_letters(&self, letters: &[LetterIndex]) -> Vec<LetterIndex> {
        let mut out = Vec::with_capacity(letters.len() * 2);
        for &l in letters {
            out.extend_from_slice(&self.images[l as usize]);
        }
        out
    }

    /// `self ∘ inner`: first apply `inner`, then `self`.
    pub fn compose(&self, inner: &Morphism) -> Result<Morphism> {
        if inner.target != self.source {
            return Err(Error::AlphabetMismatch {
                expected: self.source.to_string(),
                found: inner.target.to_string(),
            });
        }
        Ok(Morphism {
            source: inner.source.clone(),
            target: self.target.clone(),
            images: inner.images.iter().map(|img| self.apply_letters(img)).collect(),
        })
    }

    /// Returns `(n, false)` if `self = μⁿ` and `(n, true)` if `self = ξ∘μⁿ`.
    ///
    /// The monoid generated by `ξ` and `μ` is exactly `{μⁿ, ξ∘μⁿ}` because
    /// `ξ² = id` and `ξμ = μξ`, so the decision reduces to comparing the
    /// images with `μⁿ(a)` and `μⁿ(b)` for the unique `n` with `|φ(a)| = 2ⁿ`.
    pub fn in_mu_xi_monoid(&self) -> Option<MonoidForm> {
        if !self.is_binary_endomorphism() {
            return None;
        }
        let len = self.images[0].len();
        if len != self.images[1].len() || !len.is_power_of_two() {
            return None;
        }
        let power = len.trailing_zeros();
        let mu_a = thue_morse::mu_power_a(power);
        let image_a = &self.images[A as usize];
        let image_b = &self.images[B as usize];
        let is_complement = |x: &[LetterIndex], y: &[LetterIndex]| {
            x.iter().zip(y).all(|(p, q)| p != q)
        };
        if image_a[..] == mu_a[..] && is_complement(image_b, &mu_a) {
            Some(MonoidForm {
                power,
                exchange: false,
            })
        } else if image_b[..] == mu_a[..] && is_complement(image_a, &mu_a) {
            Some(MonoidForm {
                power,
                exchange: true,
            })
        } else {
            None
        }
    }
}

/// `μⁿ` as a morphism; `n` may not exceed [`DEFAULT_MAX_MU_POWER`].
pub fn mu_power(n: u32) -> Result<Morphism> {
    mu_power_with_limit(n, DEFAULT_MAX_MU_POWER)
}

pub fn mu_power_with_limit(n: u32, max: u32) -> Result<Morphism> {
    if n > max {
        return Err(Error::out_of_range("mu power", n, format!("0..={max}")));
    }
    let image_a = thue_morse::mu_power_a(n);
    let image_b = crate::words::exchange_letters(&image_a);
    Ok(Morphism::from_binary_images(
        Alphabet::binary(),
        vec![image_a.to_vec(), image_b],
    ))
}

impl fmt::Display for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, image) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}->", self.source.symbol(i as LetterIndex))?;
            for &l in image {
                write!(f, "{}", self.target.symbol(l))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism({self})")
    }
}

impl FromStr for Morphism {
    type Err = Error;

    /// Parses a literal whose images are over `{a, b}`.
    fn from_str(s: &str) -> Result<Self> {
        Morphism::parse(s, &Alphabet::binary())
    }
}

impl Serialize for Morphism {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Nonempty binary words of length at most `max_len`, length-then-lex.
pub(crate) fn binary_images_up_to(max_len: usize) -> Vec<Vec<LetterIndex>> {
    crate::words::binary_words_up_to(max_len)
        .map(Word::into_letters)
        .collect()
}

/// Iterator over every morphism `source⁺ → {a,b}⁺` built from per-letter
/// candidate image lists, in lexicographic order of image tuples with the
/// first source letter most significant.
pub struct MorphismIter {
    source: Alphabet,
    candidates: Vec<Vec<Vec<LetterIndex>>>,
    cursor: Vec<usize>,
    done: bool,
}

impl MorphismIter {
    pub(crate) fn with_candidates(source: Alphabet, candidates: Vec<Vec<Vec<LetterIndex>>>) -> Self {
        debug_assert_eq!(source.len(), candidates.len());
        let done = candidates.iter().any(Vec::is_empty);
        MorphismIter {
            cursor: vec![0; candidates.len()],
            source,
            candidates,
            done,
        }
    }
}

impl Iterator for MorphismIter {
    type Item = Morphism;

    fn next(&mut self) -> Option<Morphism> {
        if self.done {
            return None;
        }
        let images = self
            .cursor
            .iter()
            .zip(&self.candidates)
            .map(|(&i, c)| c[i].clone())
            .collect();
        let current = Morphism::from_binary_images(self.source.clone(), images);
        // odometer: last letter varies fastest
        let mut pos = self.cursor.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.cursor[pos] += 1;
            if self.cursor[pos] < self.candidates[pos].len() {
                break;
            }
            self.cursor[pos] = 0;
        }
        Some(current)
    }
}

/// All morphisms from `source` into `{a,b}⁺` whose images have length at most
/// `max_image_len`. There are `(2^(max_image_len+1) − 2)^|source|` of them.
pub fn enumerate_morphisms(source: &Alphabet, max_image_len: usize) -> Result<MorphismIter> {
    if max_image_len == 0 || max_image_len > 20 {
        return Err(Error::out_of_range("max image length", max_image_len, "1..=20"));
    }
    let images = binary_images_up_to(max_image_len);
    Ok(MorphismIter::with_candidates(
        source.clone(),
        vec![images; source.len()],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bin(a: &str, b: &str) -> Morphism {
        Morphism::binary(a, b).unwrap()
    }

    fn w(s: &str) -> Word {
        Word::binary(s).unwrap()
    }

    #[test]
    fn apply_examples() {
        assert_eq!(Morphism::mu().apply(&w("ab")).unwrap(), w("abba"));
        assert_eq!(bin("b", "aa").apply(&w("aabaab")).unwrap(), w("bbaabbaa"));
        assert_eq!(bin("a", "bb").apply(&w("abaaba")).unwrap(), w("abbaabba"));
    }

    #[test]
    fn apply_rejects_foreign_alphabet() {
        let xy = Alphabet::new("xy").unwrap();
        let word = Word::parse("xy", &xy).unwrap();
        assert!(matches!(
            Morphism::mu().apply(&word),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn compose_examples() {
        let xi = Morphism::xi();
        let mu = Morphism::mu();
        assert_eq!(xi.compose(&mu).unwrap(), bin("ba", "ab"));
        assert_eq!(mu.compose(&xi).unwrap(), bin("ba", "ab"));
        assert_eq!(
            xi.compose(&xi).unwrap(),
            Morphism::identity(&Alphabet::binary())
        );
    }

    #[test]
    fn compose_checks_alphabets() {
        let xy = Alphabet::new("xy").unwrap();
        let psi = Morphism::identity(&xy);
        assert!(Morphism::mu().compose(&psi).is_err());
    }

    #[test]
    fn mu_powers() {
        assert_eq!(mu_power(0).unwrap(), Morphism::identity(&Alphabet::binary()));
        assert_eq!(mu_power(3).unwrap(), bin("abbabaab", "baababba"));
        assert_eq!(mu_power(4).unwrap().image(A), w("abbabaabbaababba"));
        assert!(matches!(mu_power(31), Err(Error::OutOfRange { .. })));
        assert!(mu_power_with_limit(5, 4).is_err());
    }

    #[test]
    fn monoid_membership() {
        assert_eq!(
            bin("ab", "ba").in_mu_xi_monoid(),
            Some(MonoidForm { power: 1, exchange: false })
        );
        assert_eq!(
            bin("ba", "ab").in_mu_xi_monoid(),
            Some(MonoidForm { power: 1, exchange: true })
        );
        assert_eq!(bin("a", "bab").in_mu_xi_monoid(), None);
        assert_eq!(
            Morphism::xi().in_mu_xi_monoid(),
            Some(MonoidForm { power: 0, exchange: true })
        );
        assert_eq!(bin("ab", "ab").in_mu_xi_monoid(), None);
        assert_eq!(bin("aa", "bb").in_mu_xi_monoid(), None);
    }

    #[test]
    fn enumeration_counts_and_order() {
        let one = Alphabet::new("a").unwrap();
        let all: Vec<String> = enumerate_morphisms(&one, 1)
            .unwrap()
            .map(|m| m.to_string())
            .collect();
        assert_eq!(all, ["a->a", "a->b"]);
        let ab = Alphabet::binary();
        assert_eq!(enumerate_morphisms(&ab, 1).unwrap().count(), 4);
        assert_eq!(enumerate_morphisms(&ab, 2).unwrap().count(), 36);
        let first: Vec<String> = enumerate_morphisms(&ab, 2)
            .unwrap()
            .take(3)
            .map(|m| m.to_string())
            .collect();
        assert_eq!(first, ["a->a,b->a", "a->a,b->b", "a->a,b->aa"]);
        assert!(enumerate_morphisms(&ab, 0).is_err());
    }

    #[test]
    fn parse_and_display() {
        let m: Morphism = "a->ab,b->ba".parse().unwrap();
        assert_eq!(m, Morphism::mu());
        assert_eq!(m.to_string(), "a->ab,b->ba");
        let swapped: Morphism = "b->ba,a->ab".parse().unwrap();
        assert_eq!(swapped, m);
        let pattern = Morphism::parse("x->abb", &Alphabet::binary()).unwrap();
        assert_eq!(pattern.source().as_str(), "x");
        assert_eq!(pattern.image_of('x').unwrap(), w("abb"));
    }

    #[test]
    fn parse_rejects_malformed() {
        for bad in ["a->", "a->ab,b->", "a->ac", "ab->a", "a=ab", "a->ab,a->b", "", "A->a"] {
            assert!(
                matches!(bad.parse::<Morphism>(), Err(Error::MalformedMorphism { .. })),
                "{bad} should be rejected"
            );
        }
    }
}
