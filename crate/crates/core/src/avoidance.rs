//! Avoidability of binary patterns in `t`.
//!
//! A word `p` over an alphabet `A` is *unavoidable* in `t` when some
//! nonerasing homomorphism `φ: A⁺ → {a,b}⁺` maps it onto a segment of `t`.
//! The binary words avoided by `t` form the fully invariant ideal generated
//! by Shur's set
//!
//! ```text
//! a³, ababa, a²ba²b, ab²ab², t₁(μᵏ(a))μᵏ(aba)a (k ≥ 1), t₁(μᵐ(a))μᵐ(bab)a (m ≥ 2)
//! ```
//!
//! and the unavoidable binary words are exactly the segments of `t` plus
//! `a²ba²` and `b²ab²`. Both descriptions are implemented here so they can be
//! checked against each other.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::morphisms::{binary_images_up_to, Morphism, MorphismIter};
use crate::thue_morse::{self, mu_power_a, serialize_display, tm_prefix};
use crate::words::{find_factor, Alphabet, LetterIndex, Word, A, B};

/// Which part of the generating set a generator belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "family", content = "parameter")]
pub enum GeneratorKind {
    Fixed,
    /// `t₁(μᵏ(a)) μᵏ(aba) a`
    Aba(u32),
    /// `t₁(μᵐ(a)) μᵐ(bab) a`
    Bab(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Generator {
    #[serde(serialize_with = "serialize_display")]
    pub word: Word,
    pub kind: GeneratorKind,
}

/// Shur's generators up to a length cutoff.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub fixed: Vec<Word>,
    pub family_k: Vec<(u32, Word)>,
    pub family_m: Vec<(u32, Word)>,
    pub cutoff_len: usize,
}

impl GeneratorSet {
    /// All generators, sorted length-then-lex.
    pub fn generators(&self) -> Vec<Generator> {
        let mut all: Vec<Generator> = self
            .fixed
            .iter()
            .map(|w| Generator {
                word: w.clone(),
                kind: GeneratorKind::Fixed,
            })
            .chain(self.family_k.iter().map(|(k, w)| Generator {
                word: w.clone(),
                kind: GeneratorKind::Aba(*k),
            }))
            .chain(self.family_m.iter().map(|(m, w)| Generator {
                word: w.clone(),
                kind: GeneratorKind::Bab(*m),
            }))
            .collect();
        all.sort_by(|x, y| x.word.cmp(&y.word));
        all
    }

    pub fn len(&self) -> usize {
        self.fixed.len() + self.family_k.len() + self.family_m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

const FIXED_GENERATORS: [&str; 4] = ["aaa", "ababa", "aabaab", "abbabb"];

/// `t₁(μⁿ(a)) μⁿ(core) a`.
fn family_member(n: u32, core: &[LetterIndex]) -> Word {
    let mu_a = mu_power_a(n);
    let mu_core = crate::morphisms::mu_power(n)
        .expect("family parameters stay below the mu power limit")
        .apply_letters(core);
    let mut letters = Vec::with_capacity(mu_core.len() + 2);
    letters.push(mu_a[mu_a.len() - 1]);
    letters.extend(mu_core);
    letters.push(A);
    Word::from_binary_unchecked(letters)
}

/// The `k`-th member of the `aba` family, of length `3·2ᵏ + 2`.
pub fn aba_generator(k: u32) -> Result<Word> {
    if !(1..=24).contains(&k) {
        return Err(Error::out_of_range("k", k, "1..=24"));
    }
    Ok(family_member(k, &[A, B, A]))
}

/// The `m`-th member of the `bab` family, of length `3·2ᵐ + 2`.
pub fn bab_generator(m: u32) -> Result<Word> {
    if !(2..=24).contains(&m) {
        return Err(Error::out_of_range("m", m, "2..=24"));
    }
    Ok(family_member(m, &[B, A, B]))
}

/// All generators of length at most `max_len`.
pub fn shur_generators(max_len: usize) -> Result<GeneratorSet> {
    if !(3..=1 << 24).contains(&max_len) {
        return Err(Error::out_of_range("max generator length", max_len, "3..=16777216"));
    }
    let fixed = FIXED_GENERATORS
        .iter()
        .filter(|g| g.len() <= max_len)
        .map(|g| Word::binary(g))
        .collect::<Result<Vec<_>>>()?;
    let fits = |n: u32| 3 * (1usize << n) + 2 <= max_len;
    let family_k = (1..)
        .take_while(|&k| fits(k))
        .map(|k| (k, family_member(k, &[A, B, A])))
        .collect();
    let family_m = (2..)
        .take_while(|&m| fits(m))
        .map(|m| (m, family_member(m, &[B, A, B])))
        .collect();
    Ok(GeneratorSet {
        fixed,
        family_k,
        family_m,
        cutoff_len: max_len,
    })
}

/// Backtracking search for an occurrence of `φ(pattern)` inside `text`.
///
/// Returns the start of the occurrence and, per pattern letter, the range in
/// `text` of its image (`None` for letters that do not occur in the pattern).
/// Starts are tried left to right and image lengths shortest first.
/// Image spans `(start, end)` in the text, per pattern letter.
pub(crate) type Assignment = Vec<Option<(usize, usize)>>;

pub(crate) fn match_pattern(
    text: &[LetterIndex],
    pattern: &[LetterIndex],
    alphabet_len: usize,
) -> Option<(usize, Assignment)> {
    if pattern.len() > text.len() {
        return None;
    }
    let mut assignment = vec![None; alphabet_len];
    for start in 0..=text.len() - pattern.len() {
        if extend_match(text, pattern, 0, start, &mut assignment) {
            return Some((start, assignment));
        }
    }
    None
}

fn extend_match(
    text: &[LetterIndex],
    pattern: &[LetterIndex],
    index: usize,
    pos: usize,
    assignment: &mut [Option<(usize, usize)>],
) -> bool {
    let Some(&var) = pattern.get(index) else {
        return true;
    };
    let rest = pattern.len() - index - 1;
    match assignment[var as usize] {
        Some((from, len)) => {
            pos + len + rest <= text.len()
                && text[pos..pos + len] == text[from..from + len]
                && extend_match(text, pattern, index + 1, pos + len, assignment)
        }
        None => {
            let max_len = text.len().saturating_sub(pos + rest);
            for len in 1..=max_len {
                assignment[var as usize] = Some((pos, len));
                if extend_match(text, pattern, index + 1, pos + len, assignment) {
                    return true;
                }
            }
            assignment[var as usize] = None;
            false
        }
    }
}

fn instance_morphism(
    text: &[LetterIndex],
    source: &Alphabet,
    assignment: &[Option<(usize, usize)>],
) -> Morphism {
    let images = assignment
        .iter()
        .map(|slot| match slot {
            Some((from, len)) => text[*from..from + len].to_vec(),
            None => vec![A],
        })
        .collect();
    Morphism::from_binary_images(source.clone(), images)
}

/// A nonerasing `φ` (pattern alphabet → `{a,b}`) such that `φ(p)` is a factor
/// of `w`. Letters of the alphabet that do not occur in `p` are mapped to `a`.
pub fn contains_pattern_instance(w: &Word, p: &Word) -> Result<Option<Morphism>> {
    Ok(pattern_instance_at(w, p)?.map(|(m, _)| m))
}

/// Like [`contains_pattern_instance`], also returning where the instance starts.
pub fn pattern_instance_at(w: &Word, p: &Word) -> Result<Option<(Morphism, usize)>> {
    w.require_binary()?;
    Ok(
        match_pattern(w.letters(), p.letters(), p.alphabet().len()).map(|(start, assignment)| {
            (instance_morphism(w.letters(), p.alphabet(), &assignment), start)
        }),
    )
}

/// Evidence that a binary word lies in the ideal of avoided words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AvoidanceCertificate {
    pub generator: Generator,
    pub morphism: Morphism,
    pub position: usize,
}

/// The first generator (length-then-lex) with an instance in `w`, if any.
///
/// Only generators with `|g| ≤ |w|` are tried: nonerasing images satisfy
/// `|φ(g)| ≥ |g|`, so longer generators cannot have an instance in `w`.
pub fn avoidance_certificate(w: &Word) -> Result<Option<AvoidanceCertificate>> {
    w.require_binary()?;
    if w.len() < 3 {
        return Ok(None);
    }
    for generator in shur_generators(w.len())?.generators() {
        if let Some((morphism, position)) = pattern_instance_at(w, &generator.word)? {
            return Ok(Some(AvoidanceCertificate {
                generator,
                morphism,
                position,
            }));
        }
    }
    Ok(None)
}

/// Membership in the fully invariant ideal generated by Shur's set.
pub fn is_avoided_via_ideal(w: &Word) -> Result<bool> {
    Ok(avoidance_certificate(w)?.is_some())
}

/// Why a binary word is or is not unavoidable in `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Unavoidability {
    /// `a²ba²` or `b²ab²`: unavoidable without being segments.
    ExceptionWord,
    Segment,
    Avoided,
}

impl Unavoidability {
    pub fn is_unavoidable(self) -> bool {
        !matches!(self, Unavoidability::Avoided)
    }
}

pub fn unavoidability(w: &Word) -> Result<Unavoidability> {
    w.require_binary()?;
    Ok(match w.letters() {
        [A, A, B, A, A] | [B, B, A, B, B] => Unavoidability::ExceptionWord,
        letters if thue_morse::is_segment_letters(letters) => Unavoidability::Segment,
        _ => Unavoidability::Avoided,
    })
}

/// Binary unavoidability: `w ∈ {aabaa, bbabb}` or `w` is a segment of `t`.
pub fn is_unavoidable_binary(w: &Word) -> Result<bool> {
    Ok(unavoidability(w)?.is_unavoidable())
}

/// A morphism mapping a pattern onto a segment of `t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub morphism: Morphism,
    #[serde(serialize_with = "serialize_display")]
    pub image: Word,
    pub position: usize,
}

/// Per-letter candidate images for an enumeration-order search over
/// morphisms applied to `pattern`.
///
/// Images of letters occurring in the pattern must themselves be segments,
/// since they are factors of the image. Letters absent from the pattern do
/// not affect the image, so only the first image is kept for them; the first
/// hit in the pruned order is the first hit in the full order.
pub(crate) fn pruned_candidates(
    pattern: &Word,
    max_image_len: usize,
) -> Vec<Vec<Vec<LetterIndex>>> {
    let all = binary_images_up_to(max_image_len);
    let segments: Vec<Vec<LetterIndex>> = all
        .iter()
        .filter(|img| thue_morse::is_segment_letters(img))
        .cloned()
        .collect();
    (0..pattern.alphabet().len())
        .map(|letter| {
            if pattern.letters().contains(&(letter as LetterIndex)) {
                segments.clone()
            } else {
                vec![all[0].clone()]
            }
        })
        .collect()
}

/// The first morphism, in enumeration order with images of length at most
/// `max_image_len`, mapping `p` onto a segment that occurs in the first
/// `prefix_len` letters of `t`.
///
/// This is a bounded search: `None` does not prove that `p` is avoided.
pub fn find_witness(p: &Word, max_image_len: usize, prefix_len: usize) -> Result<Option<Witness>> {
    if max_image_len == 0 || max_image_len > 16 {
        return Err(Error::out_of_range("max image length", max_image_len, "1..=16"));
    }
    let prefix = tm_prefix(prefix_len)?;
    let candidates = pruned_candidates(p, max_image_len);
    for morphism in MorphismIter::with_candidates(p.alphabet().clone(), candidates) {
        let image = morphism.apply_letters(p.letters());
        if !thue_morse::is_segment_letters(&image) {
            continue;
        }
        if let Some(position) = find_factor(prefix.letters(), &image) {
            return Ok(Some(Witness {
                morphism,
                image: Word::from_binary_unchecked(image),
                position,
            }));
        }
    }
    Ok(None)
}

/// The least `d < horizon` with `t[i+d] ≠ ξ(t)[j+d]`, or `None` if the two
/// windows agree throughout the horizon.
pub fn suffix_divergence(i: usize, j: usize, horizon: usize) -> Result<Option<usize>> {
    if horizon == 0 {
        return Err(Error::out_of_range("horizon", 0u64, "horizon >= 1"));
    }
    let prefix = tm_prefix(i.max(j) + horizon)?;
    let t = prefix.letters();
    Ok((0..horizon).find(|&d| t[i + d] != t[j + d] ^ 1))
}
