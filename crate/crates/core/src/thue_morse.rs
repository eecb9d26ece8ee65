//! The Thue-Morse word `t = abbabaabbaababba…`, the fixed point of `μ`
//! starting with `a`, together with the segment oracle built on it.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::morphisms::Morphism;
use crate::words::{self, binary_text, find_factor, LetterIndex, Word, A, B};

/// Default ceiling for [`tm_prefix`].
pub const DEFAULT_MAX_PREFIX: usize = 1 << 25;

/// Hard ceiling on cached generations (`2³⁰` letters).
const MAX_GENERATION: u32 = 30;

/// `GENERATIONS[g]` holds `μᵍ(a)`. Append-only.
static GENERATIONS: RwLock<Vec<Arc<[LetterIndex]>>> = RwLock::new(Vec::new());

/// `μⁿ(a)`, served from the append-only cache.
pub(crate) fn mu_power_a(n: u32) -> Arc<[LetterIndex]> {
    assert!(n <= MAX_GENERATION, "generation {n} exceeds {MAX_GENERATION}");
    {
        let cache = GENERATIONS.read().unwrap();
        if let Some(word) = cache.get(n as usize) {
            return word.clone();
        }
    }
    let mut cache = GENERATIONS.write().unwrap();
    if cache.is_empty() {
        cache.push(Arc::from(&[A][..]));
    }
    // another writer may have extended the cache while we waited
    while cache.len() <= n as usize {
        let prev = cache.last().unwrap();
        let mut next = Vec::with_capacity(prev.len() * 2);
        next.extend_from_slice(prev);
        next.extend(prev.iter().map(|&l| l ^ 1));
        cache.push(Arc::from(next));
    }
    cache[n as usize].clone()
}

/// Letter `i` of `t`: `a` iff the binary expansion of `i` has an even number of ones.
pub fn letter_by_parity(i: u64) -> LetterIndex {
    (i.count_ones() & 1) as LetterIndex
}

fn ceil_log2(x: usize) -> u32 {
    x.next_power_of_two().trailing_zeros()
}

/// A prefix of `t`, sharing storage with the generation cache.
#[derive(Clone)]
pub struct TmPrefix {
    length: usize,
    generation: u32,
    data: Arc<[LetterIndex]>,
}

impl TmPrefix {
    pub fn len(&self) -> usize {
        self.length
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    /// Number of `μ`-iterations whose image of `a` contains this prefix.
    pub fn generation(&self) -> u32 {
        self.generation
    }

    pub fn letters(&self) -> &[LetterIndex] {
        &self.data[..self.length]
    }

    pub fn word(&self) -> Word {
        Word::from_binary_unchecked(self.letters().to_vec())
    }

    pub fn find(&self, needle: &Word) -> Result<Option<usize>> {
        needle.require_binary()?;
        Ok(find_factor(self.letters(), needle.letters()))
    }
}

impl fmt::Display for TmPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&binary_text(self.letters()))
    }
}

impl fmt::Debug for TmPrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TmPrefix(len={}, generation={})", self.length, self.generation)
    }
}

/// The first `n` letters of `t`, for `1 ≤ n ≤ DEFAULT_MAX_PREFIX`.
pub fn tm_prefix(n: usize) -> Result<TmPrefix> {
    tm_prefix_with_limit(n, DEFAULT_MAX_PREFIX)
}

pub fn tm_prefix_with_limit(n: usize, max: usize) -> Result<TmPrefix> {
    let max = max.min(1 << MAX_GENERATION);
    if n == 0 || n > max {
        return Err(Error::out_of_range("prefix length", n, format!("1..={max}")));
    }
    let generation = ceil_log2(n);
    Ok(TmPrefix {
        length: n,
        generation,
        data: mu_power_a(generation),
    })
}

/// The smallest `n` such that every segment of length `k` is a factor of `μⁿ(a)`.
pub fn min_generation(k: usize) -> u32 {
    match k {
        0 | 1 => 1,
        2 => 3,
        _ => 2 + ceil_log2(k - 1),
    }
}

/// Longest word length served by the packed segment tables.
const PACKED_MAX: usize = 64;

fn pack(w: &[LetterIndex]) -> u64 {
    w.iter().fold(0, |code, &l| (code << 1) | l as u64)
}

/// `PACKED[k]` holds the sorted bit codes of all segments of length `k`.
fn packed_tables() -> &'static [Vec<u64>] {
    static PACKED: OnceLock<Vec<Vec<u64>>> = OnceLock::new();
    PACKED.get_or_init(|| {
        (0..=PACKED_MAX)
            .map(|k| {
                if k == 0 {
                    return Vec::new();
                }
                let host = mu_power_a(min_generation(k));
                let mut codes: Vec<u64> = host.windows(k).map(pack).collect();
                codes.sort_unstable();
                codes.dedup();
                codes
            })
            .collect()
    })
}

pub(crate) fn is_segment_letters(w: &[LetterIndex]) -> bool {
    if w.len() <= PACKED_MAX {
        return packed_tables()[w.len()].binary_search(&pack(w)).is_ok();
    }
    let generation = min_generation(w.len());
    if generation > MAX_GENERATION {
        return false;
    }
    find_factor(&mu_power_a(generation), w).is_some()
}

/// Whether `w` occurs in `t`, decided inside `μⁿ(a)` for `n = min_generation(|w|)`.
pub fn is_segment(w: &Word) -> Result<bool> {
    w.require_binary()?;
    Ok(is_segment_letters(w.letters()))
}

/// `t₁(μⁿ⁻³(b)) μⁿ⁻³(a) b`: a segment of length `2ⁿ⁻³ + 2` that is not a
/// factor of `μⁿ⁻¹(a)`.
pub fn minimality_witness(n: u32) -> Result<Word> {
    if !(3..=MAX_GENERATION).contains(&n) {
        return Err(Error::out_of_range("n", n, format!("3..={MAX_GENERATION}")));
    }
    let core = mu_power_a(n - 3);
    // last letter of μᵏ(b) is the exchange of the last letter of μᵏ(a)
    let mut letters = Vec::with_capacity(core.len() + 2);
    letters.push(core[core.len() - 1] ^ 1);
    letters.extend_from_slice(&core);
    letters.push(B);
    Ok(Word::from_binary_unchecked(letters))
}

pub(crate) fn segments_of_length_letters(k: usize) -> Vec<Vec<LetterIndex>> {
    let host = mu_power_a(min_generation(k));
    if k > host.len() {
        return Vec::new();
    }
    host.windows(k)
        .map(<[LetterIndex]>::to_vec)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// All segments of `t` of length `k`, sorted lexicographically.
pub fn segments_of_length(k: usize) -> Result<Vec<Word>> {
    if k == 0 || k > 1 << 20 {
        return Err(Error::out_of_range("segment length", k, "1..=1048576"));
    }
    Ok(segments_of_length_letters(k)
        .into_iter()
        .map(Word::from_binary_unchecked)
        .collect())
}

/// All segments of length `1..=max_len`, length-then-lex.
pub fn segments_up_to(max_len: usize) -> Result<Vec<Word>> {
    let mut all = Vec::new();
    for k in 1..=max_len {
        all.extend(segments_of_length(k)?);
    }
    Ok(all)
}

pub(crate) fn is_special_letters(u: &[LetterIndex]) -> bool {
    let mut extended = Vec::with_capacity(u.len() + 1);
    extended.extend_from_slice(u);
    extended.push(A);
    if !is_segment_letters(&extended) {
        return false;
    }
    *extended.last_mut().unwrap() = B;
    is_segment_letters(&extended)
}

/// A segment `u` is special when both `ua` and `ub` are segments.
pub fn is_special(u: &Word) -> Result<bool> {
    u.require_binary()?;
    Ok(is_special_letters(u.letters()))
}

/// `u = μⁿ(base)` with `base ∈ {a, b, aba, bab}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareRoot {
    #[serde(serialize_with = "serialize_display")]
    pub base: Word,
    pub power: u32,
}

pub(crate) fn serialize_display<T: fmt::Display, S: serde::Serializer>(
    value: &T,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

/// If `u²` is a segment, the unique `(x, n)` with `x ∈ {a, b, aba, bab}` and
/// `u = μⁿ(x)`; `None` otherwise.
///
/// A square segment whose root has none of these shapes is reported as
/// [`Error::Consistency`].
pub fn classify_square_root(u: &Word) -> Result<Option<SquareRoot>> {
    u.require_binary()?;
    if !is_segment_letters(u.letters()) {
        return Ok(None);
    }
    let mut square = u.letters().to_vec();
    square.extend_from_slice(u.letters());
    if !is_segment_letters(&square) {
        return Ok(None);
    }
    let len = u.len();
    let twos = len.trailing_zeros();
    let odd = len >> twos;
    let bases: &[&[LetterIndex]] = match odd {
        1 => &[&[A], &[B]],
        3 => &[&[A, B, A], &[B, A, B]],
        _ => &[],
    };
    let mu = crate::morphisms::mu_power(twos)?;
    for base in bases {
        if mu.apply_letters(base) == u.letters() {
            return Ok(Some(SquareRoot {
                base: Word::from_binary_unchecked(base.to_vec()),
                power: twos,
            }));
        }
    }
    Err(Error::Consistency(format!(
        "{u}{u} is a segment but {u} is not μⁿ of a, b, aba or bab"
    )))
}

/// The unique `v` with `μ(v) = w`, if any.
pub fn mu_preimage(w: &Word) -> Result<Option<Word>> {
    w.require_binary()?;
    if !w.len().is_multiple_of(2) {
        return Ok(None);
    }
    let preimage: Option<Vec<LetterIndex>> = w
        .letters()
        .chunks(2)
        .map(|block| match block {
            [A, B] => Some(A),
            [B, A] => Some(B),
            _ => None,
        })
        .collect();
    Ok(preimage.map(Word::from_binary_unchecked))
}

/// Start positions of `μⁿ⁺¹(x)` in the first `prefix_len` letters of `t`.
///
/// Every occurrence must start at a multiple of `2ⁿ`; an unaligned
/// occurrence is reported as [`Error::Consistency`].
pub fn aligned_occurrences(n: u32, x: char, prefix_len: usize) -> Result<Vec<usize>> {
    let letter = match x {
        'a' => A,
        'b' => B,
        other => {
            return Err(Error::UnknownLetter {
                letter: other,
                alphabet: "ab".into(),
            })
        }
    };
    if n + 1 > MAX_GENERATION || (1usize << (n + 1)) > prefix_len {
        return Err(Error::out_of_range(
            "block length 2^(n+1)",
            1u64.checked_shl(n + 1).unwrap_or(u64::MAX),
            format!("at most prefix length {prefix_len}"),
        ));
    }
    let prefix = tm_prefix(prefix_len)?;
    let mut block = mu_power_a(n + 1).to_vec();
    if letter == B {
        block = words::exchange_letters(&block);
    }
    let hay = prefix.letters();
    let positions: Vec<usize> = (0..=hay.len() - block.len())
        .filter(|&i| hay[i..i + block.len()] == block[..])
        .collect();
    let stride = 1usize << n;
    if let Some(bad) = positions.iter().find(|&&p| p % stride != 0) {
        return Err(Error::Consistency(format!(
            "occurrence of μ^{}({x}) at {bad} is not a multiple of {stride}",
            n + 1
        )));
    }
    Ok(positions)
}

/// The least `ℓ` such that every segment of length `ℓ` contains every segment
/// of length `k`: `ℓ = 9·2ʳ + k − 1` where `2ʳ + 2 ≤ k ≤ 2ʳ⁺¹ + 1`.
pub fn recurrence_window(k: usize) -> Result<usize> {
    if !(3..=1 << 40).contains(&k) {
        return Err(Error::out_of_range("k", k, "k >= 3"));
    }
    let r = ceil_log2(k - 1) - 1;
    debug_assert!((1usize << r) + 2 <= k && k <= (1usize << (r + 1)) + 1);
    Ok(9 * (1usize << r) + k - 1)
}

/// `μ` applied to a binary word.
pub fn mu(w: &Word) -> Result<Word> {
    Morphism::mu().apply(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::binary(s).unwrap()
    }

    #[test]
    fn prefixes() {
        assert_eq!(tm_prefix(8).unwrap().to_string(), "abbabaab");
        assert_eq!(tm_prefix(16).unwrap().to_string(), "abbabaabbaababba");
        assert_eq!(tm_prefix(1).unwrap().to_string(), "a");
        assert_eq!(tm_prefix(5).unwrap().generation(), 3);
        assert!(tm_prefix(0).is_err());
        assert!(tm_prefix(DEFAULT_MAX_PREFIX + 1).is_err());
        assert!(tm_prefix_with_limit(100, 64).is_err());
    }

    #[test]
    fn prefix_matches_parity_definition() {
        let p = tm_prefix(1 << 12).unwrap();
        for (i, &l) in p.letters().iter().enumerate() {
            assert_eq!(l, letter_by_parity(i as u64), "position {i}");
        }
    }

    #[test]
    fn generations() {
        assert_eq!(min_generation(1), 1);
        assert_eq!(min_generation(2), 3);
        assert_eq!(min_generation(3), 3);
        assert_eq!(min_generation(4), 4);
        assert_eq!(min_generation(5), 4);
        assert_eq!(min_generation(6), 5);
        assert_eq!(min_generation(9), 5);
        assert_eq!(min_generation(10), 6);
    }

    #[test]
    fn segment_examples() {
        assert!(is_segment(&w("aabb")).unwrap());
        assert!(!is_segment(&w("aabaa")).unwrap());
        assert!(is_segment(&w("bbaabb")).unwrap());
        assert!(!is_segment(&w("aaa")).unwrap());
        let abc = crate::words::Alphabet::new("abc").unwrap();
        assert!(is_segment(&Word::parse("ab", &abc).unwrap()).is_err());
    }

    #[test]
    fn packed_tables_agree_with_direct_search() {
        for k in 1..=12 {
            let host = mu_power_a(min_generation(k));
            for word in crate::words::binary_words_of_length(k) {
                assert_eq!(
                    is_segment_letters(word.letters()),
                    find_factor(&host, word.letters()).is_some(),
                    "{word}"
                );
            }
        }
        let long = tm_prefix(200).unwrap().letters()[37..137].to_vec();
        assert!(is_segment_letters(&long));
        let mut broken = long.clone();
        broken[50..53].copy_from_slice(&[A, A, A]);
        assert!(!is_segment_letters(&broken));
    }

    #[test]
    fn minimality_witnesses() {
        assert_eq!(minimality_witness(3).unwrap(), w("bab"));
        assert_eq!(minimality_witness(4).unwrap(), w("aabb"));
        assert_eq!(minimality_witness(5).unwrap(), w("babbab"));
        assert!(minimality_witness(2).is_err());
    }

    #[test]
    fn segment_lists() {
        let five: Vec<String> = segments_of_length(5)
            .unwrap()
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(
            five,
            [
                "aabab", "aabba", "abaab", "ababb", "abbaa", "abbab", "baaba", "baabb", "babaa",
                "babba", "bbaab", "bbaba"
            ]
        );
        let one: Vec<String> = segments_of_length(1).unwrap().iter().map(ToString::to_string).collect();
        assert_eq!(one, ["a", "b"]);
        let three: Vec<String> = segments_of_length(3).unwrap().iter().map(ToString::to_string).collect();
        assert_eq!(three, ["aab", "aba", "abb", "baa", "bab", "bba"]);
    }

    #[test]
    fn special_segments() {
        assert!(is_special(&w("aab")).unwrap());
        assert!(is_special(&w("bab")).unwrap());
        assert!(!is_special(&w("aa")).unwrap());
    }

    #[test]
    fn square_roots() {
        let ab = classify_square_root(&w("ab")).unwrap().unwrap();
        assert_eq!((ab.base, ab.power), (w("a"), 1));
        let aba = classify_square_root(&w("aba")).unwrap().unwrap();
        assert_eq!((aba.base, aba.power), (w("aba"), 0));
        assert_eq!(classify_square_root(&w("aab")).unwrap(), None);
        let big = classify_square_root(&w("abbaab")).unwrap().unwrap();
        assert_eq!((big.base, big.power), (w("aba"), 1));
    }

    #[test]
    fn preimages() {
        assert_eq!(mu_preimage(&w("abba")).unwrap(), Some(w("ab")));
        assert_eq!(mu_preimage(&w("abab")).unwrap(), Some(w("aa")));
        assert_eq!(mu_preimage(&w("aab")).unwrap(), None);
        assert_eq!(mu_preimage(&w("aabb")).unwrap(), None);
    }

    #[test]
    fn aligned() {
        assert_eq!(aligned_occurrences(1, 'a', 16).unwrap(), vec![0, 6, 12]);
        // abbabaab: ab starts at 0, 3 and 6
        assert_eq!(aligned_occurrences(0, 'a', 8).unwrap(), vec![0, 3, 6]);
        assert!(matches!(
            aligned_occurrences(2, 'b', 4),
            Err(Error::OutOfRange { .. })
        ));
        assert!(aligned_occurrences(0, 'c', 8).is_err());
    }

    #[test]
    fn recurrence() {
        assert_eq!(recurrence_window(3).unwrap(), 11);
        assert_eq!(recurrence_window(4).unwrap(), 21);
        assert_eq!(recurrence_window(5).unwrap(), 22);
        assert_eq!(recurrence_window(6).unwrap(), 41);
        assert_eq!(recurrence_window(9).unwrap(), 44);
        assert_eq!(recurrence_window(10).unwrap(), 81);
        assert!(recurrence_window(2).is_err());
    }

    #[test]
    fn concurrent_extension_is_consistent() {
        let handles: Vec<_> = (0..4)
            .map(|_| std::thread::spawn(|| mu_power_a(18).to_vec()))
            .collect();
        let results: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(results.windows(2).all(|p| p[0] == p[1]));
        assert_eq!(results[0].len(), 1 << 18);
    }
}
