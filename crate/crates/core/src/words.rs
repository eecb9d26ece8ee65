//! Finite words over small ASCII alphabets.
//!
//! Letters are stored as indices into the word's [`Alphabet`]; for binary
//! words index `0` is `a` and index `1` is `b`. All orderings are
//! length-then-lexicographic with respect to the declared alphabet order.

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// Index of a letter within its alphabet.
pub type LetterIndex = u8;

/// Index of `a` in the binary alphabet.
pub const A: LetterIndex = 0;
/// Index of `b` in the binary alphabet.
pub const B: LetterIndex = 1;

const MAX_ALPHABET: usize = 26;

/// An ordered set of distinct lowercase ASCII letters.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet(Arc<[u8]>);

impl Alphabet {
    pub fn new(letters: &str) -> Result<Self> {
        let bytes = letters.as_bytes();
        if bytes.is_empty() || bytes.len() > MAX_ALPHABET {
            return Err(Error::InvalidAlphabet(letters.to_string()));
        }
        for (i, &c) in bytes.iter().enumerate() {
            if !c.is_ascii_lowercase() {
                return Err(Error::InvalidAlphabet(letters.to_string()));
            }
            if bytes[..i].contains(&c) {
                return Err(Error::DuplicateLetter(c as char));
            }
        }
        Ok(Alphabet(Arc::from(bytes)))
    }

    /// The alphabet `{a, b}`.
    pub fn binary() -> Self {
        static BINARY: OnceLock<Alphabet> = OnceLock::new();
        BINARY
            .get_or_init(|| Alphabet(Arc::from(&b"ab"[..])))
            .clone()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_binary(&self) -> bool {
        &*self.0 == b"ab"
    }

    pub fn symbol(&self, index: LetterIndex) -> char {
        self.0[index as usize] as char
    }

    pub fn index_of(&self, symbol: char) -> Option<LetterIndex> {
        self.0
            .iter()
            .position(|&c| c as char == symbol)
            .map(|i| i as LetterIndex)
    }

    pub fn symbols(&self) -> impl Iterator<Item = char> + '_ {
        self.0.iter().map(|&c| c as char)
    }

    pub fn as_str(&self) -> &str {
        // only ASCII letters are admitted at construction
        std::str::from_utf8(&self.0).unwrap()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Alphabet({:?})", self.as_str())
    }
}

/// A nonempty finite word.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    alphabet: Alphabet,
    letters: Vec<LetterIndex>,
}

impl Word {
    pub fn new(alphabet: Alphabet, letters: Vec<LetterIndex>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptyWord);
        }
        if let Some(&bad) = letters.iter().find(|&&l| l as usize >= alphabet.len()) {
            return Err(Error::InvalidLetterIndex(bad));
        }
        Ok(Word { alphabet, letters })
    }

    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self> {
        let letters = text
            .chars()
            .map(|c| {
                alphabet.index_of(c).ok_or_else(|| Error::UnknownLetter {
                    letter: c,
                    alphabet: alphabet.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(alphabet.clone(), letters)
    }

    /// Parses a word over `{a, b}`.
    pub fn binary(text: &str) -> Result<Self> {
        Word::parse(text, &Alphabet::binary())
    }

    /// Builds a binary word from letter indices already known to be 0 or 1.
    pub(crate) fn from_binary_unchecked(letters: Vec<LetterIndex>) -> Self {
        debug_assert!(!letters.is_empty() && letters.iter().all(|&l| l <= B));
        Word {
            alphabet: Alphabet::binary(),
            letters,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn letters(&self) -> &[LetterIndex] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<LetterIndex> {
        self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Always false; kept for API symmetry with slices.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_binary(&self) -> bool {
        self.alphabet.is_binary()
    }

    pub(crate) fn require_binary(&self) -> Result<()> {
        if self.is_binary() {
            Ok(())
        } else {
            Err(Error::NotBinary(self.to_string()))
        }
    }

    pub fn last_letter(&self) -> char {
        self.alphabet.symbol(*self.letters.last().unwrap())
    }

    /// Swaps `a` and `b` letterwise.
    pub fn exchange(&self) -> Result<Word> {
        self.require_binary()?;
        Ok(Word::from_binary_unchecked(exchange_letters(&self.letters)))
    }

    pub fn reverse(&self) -> Word {
        let mut letters = self.letters.clone();
        letters.reverse();
        Word {
            alphabet: self.alphabet.clone(),
            letters,
        }
    }

    /// The distinct words among `w`, its reversal, its exchange and the
    /// exchange of its reversal, sorted.
    pub fn variants(&self) -> Result<Vec<Word>> {
        let swapped = self.exchange()?;
        let mut all = vec![
            self.clone(),
            self.reverse(),
            swapped.reverse(),
            swapped,
        ];
        all.sort();
        all.dedup();
        Ok(all)
    }

    /// Smallest start index of `needle` in `self`.
    pub fn find(&self, needle: &Word) -> Result<Option<usize>> {
        if self.alphabet != needle.alphabet {
            return Err(Error::AlphabetMismatch {
                expected: self.alphabet.to_string(),
                found: needle.alphabet.to_string(),
            });
        }
        Ok(find_factor(&self.letters, &needle.letters))
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch {
                expected: self.alphabet.to_string(),
                found: other.alphabet.to_string(),
            });
        }
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Ok(Word {
            alphabet: self.alphabet.clone(),
            letters,
        })
    }

    /// The factor `self[start..end]`; `None` if the range is empty or out of bounds.
    pub fn factor(&self, start: usize, end: usize) -> Option<Word> {
        if start >= end || end > self.len() {
            return None;
        }
        Some(Word {
            alphabet: self.alphabet.clone(),
            letters: self.letters[start..end].to_vec(),
        })
    }

    pub fn has_cube(&self) -> bool {
        has_cube(&self.letters)
    }

    pub fn has_overlap(&self) -> bool {
        has_overlap(&self.letters)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
            .then_with(|| self.alphabet.as_str().cmp(other.alphabet.as_str()))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: String = self
            .letters
            .iter()
            .map(|&l| self.alphabet.symbol(l))
            .collect();
        f.write_str(&text)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

pub(crate) fn exchange_letters(letters: &[LetterIndex]) -> Vec<LetterIndex> {
    letters.iter().map(|&l| l ^ 1).collect()
}

/// Renders binary letter indices as text.
pub(crate) fn binary_text(letters: &[LetterIndex]) -> String {
    letters
        .iter()
        .map(|&l| if l == A { 'a' } else { 'b' })
        .collect()
}

pub(crate) fn find_factor(haystack: &[LetterIndex], needle: &[LetterIndex]) -> Option<usize> {
    if needle.len() > haystack.len() {
        return None;
    }
    let first = needle[0];
    (0..=haystack.len() - needle.len())
        .find(|&i| haystack[i] == first && &haystack[i..i + needle.len()] == needle)
}

/// Longest run of positions `j` with `w[j] == w[j + period]`.
///
/// A factor with period `p` and length `p + r` exists iff this run reaches `r`.
fn longest_period_run(w: &[LetterIndex], period: usize, target: usize) -> bool {
    let mut run = 0;
    for (x, y) in w.iter().zip(&w[period..]) {
        if x == y {
            run += 1;
            if run >= target {
                return true;
            }
        } else {
            run = 0;
        }
    }
    false
}

/// True if some `u³` (u nonempty) is a factor.
pub(crate) fn has_cube(w: &[LetterIndex]) -> bool {
    (1..=w.len() / 3).any(|p| longest_period_run(w, p, 2 * p))
}

/// True if some `c v c v c` (c a letter, v possibly empty) is a factor.
pub(crate) fn has_overlap(w: &[LetterIndex]) -> bool {
    (1..=w.len().saturating_sub(1) / 2).any(|p| longest_period_run(w, p, p + 1))
}

/// All binary words of length `len` in lexicographic order.
pub fn binary_words_of_length(len: usize) -> impl Iterator<Item = Word> {
    assert!((1..64).contains(&len));
    (0u64..1 << len).map(move |bits| {
        let letters = (0..len)
            .map(|i| ((bits >> (len - 1 - i)) & 1) as LetterIndex)
            .collect();
        Word::from_binary_unchecked(letters)
    })
}

/// All binary words of length `1..=max_len`, length-then-lex.
pub fn binary_words_up_to(max_len: usize) -> impl Iterator<Item = Word> {
    (1..=max_len).flat_map(binary_words_of_length)
}
