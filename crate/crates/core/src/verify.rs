//! Named verification suites.
//!
//! Each suite sweeps a finite, exhaustive case space and checks one family of
//! structural facts about `t` against an oracle that does not share the code
//! path under test (plain substring search in a long prefix, the bit-parity
//! definition of `t`, direct enumeration). Every suite has one size parameter
//! that `max_len` overrides.

use std::collections::HashSet;
use std::time::Instant;

use serde::Serialize;

use crate::avoidance::{self, find_witness, is_avoided_via_ideal, is_unavoidable_binary};
use crate::error::{Error, Result};
use crate::morphisms::{enumerate_morphisms, mu_power, Morphism};
use crate::thue_morse::{self, letter_by_parity, tm_prefix};
use crate::typicality::{self, S0Element};
use crate::words::{binary_words_of_length, binary_words_up_to, find_factor, Alphabet, LetterIndex, Word};

/// Suite names with the meaning of their size parameter and its default.
pub const SUITES: &[(&str, &str, usize)] = &[
    ("prop1", "segment oracle vs prefix search for all words up to length N; minimality witnesses", 16),
    ("repetitions", "prefix of length 2^N is cube- and overlap-free and matches the parity definition", 16),
    ("thm1-thm3-equiv", "ideal membership vs binary unavoidability for all words up to length N; generators", 14),
    ("lemma3", "mu maps special segments of length up to N to special segments", 32),
    ("prop5", "square roots of all words up to length N", 24),
    ("cor1", "occurrences of mu^(n+1)(x) in a 2^15 prefix are 2^n-aligned, n up to N", 6),
    ("thm6", "length-3 criterion soundness for segments up to length N; length-10 saturation", 12),
    ("thm7", "bounded witness search vs the atypical list for segments up to length N; S0 structure", 8),
    ("cor11", "endomorphisms with images up to length 4 preserving segments up to length N", 12),
    ("prop10", "t and its exchange diverge within 4096 letters for all shifts up to N", 64),
    ("recurrence", "recurrence window achieved and tight for 3 <= k <= N", 17),
];

const MAX_REPORTED_FAILURES: usize = 20;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub size: usize,
    pub cases: u64,
    pub failure_count: u64,
    /// The first few failure descriptions.
    pub failures: Vec<String>,
    pub elapsed_ms: u128,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

struct Tally {
    cases: u64,
    failure_count: u64,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            cases: 0,
            failure_count: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < MAX_REPORTED_FAILURES {
                self.failures.push(describe());
            }
        }
    }

    fn check_result(&mut self, outcome: Result<bool>, describe: impl FnOnce() -> String) {
        match outcome {
            Ok(ok) => self.check(ok, describe),
            Err(e) => self.check(false, || format!("{}: {e}", describe())),
        }
    }
}

/// The set of factors of `text` of each length up to `max_k`, as bitsets
/// indexed by the binary code of the factor.
pub struct FactorTable {
    tables: Vec<Vec<bool>>,
}

impl FactorTable {
    pub fn from_letters(text: &[LetterIndex], max_k: usize) -> Self {
        assert!(max_k < 32);
        let mut tables = vec![Vec::new()];
        for k in 1..=max_k {
            let mut seen = vec![false; 1 << k];
            let mask = (1u64 << k) - 1;
            let mut code = 0u64;
            for (i, &l) in text.iter().enumerate() {
                code = ((code << 1) | l as u64) & mask;
                if i + 1 >= k {
                    seen[code as usize] = true;
                }
            }
            tables.push(seen);
        }
        FactorTable { tables }
    }

    pub fn contains(&self, w: &[LetterIndex]) -> bool {
        let code = w.iter().fold(0usize, |c, &l| (c << 1) | l as usize);
        self.tables
            .get(w.len())
            .is_some_and(|table| table[code])
    }
}

/// First `n` letters of `t` from the bit-parity definition.
pub fn parity_prefix(n: usize) -> Vec<LetterIndex> {
    (0..n as u64).map(letter_by_parity).collect()
}

/// Runs one suite; `size` defaults to the suite's documented parameter.
pub fn run_suite(name: &str, size: Option<usize>) -> Result<SuiteReport> {
    let (name, _, default) = SUITES
        .iter()
        .find(|(n, _, _)| *n == name)
        .copied()
        .ok_or_else(|| Error::UnknownSuite {
            name: name.to_string(),
            known: SUITES.iter().map(|(n, _, _)| *n).collect::<Vec<_>>().join(", "),
        })?;
    let size = size.unwrap_or(default);
    let started = Instant::now();
    let tally = match name {
        "prop1" => prop1(size),
        "repetitions" => repetitions(size),
        "thm1-thm3-equiv" => thm1_thm3(size),
        "lemma3" => lemma3(size),
        "prop5" => prop5(size),
        "cor1" => cor1(size),
        "thm6" => thm6(size),
        "thm7" => thm7(size),
        "cor11" => cor11(size),
        "prop10" => prop10(size),
        "recurrence" => recurrence(size),
        _ => unreachable!(),
    }?;
    Ok(SuiteReport {
        name: name.to_string(),
        size,
        cases: tally.cases,
        failure_count: tally.failure_count,
        failures: tally.failures,
        elapsed_ms: started.elapsed().as_millis(),
    })
}

/// Runs every suite in order.
pub fn run_all(size: Option<usize>) -> Result<Vec<SuiteReport>> {
    SUITES.iter().map(|(name, _, _)| run_suite(name, size)).collect()
}

fn limit(what: &'static str, value: usize, range: std::ops::RangeInclusive<usize>) -> Result<()> {
    if range.contains(&value) {
        Ok(())
    } else {
        Err(Error::out_of_range(
            what,
            value,
            format!("{}..={}", range.start(), range.end()),
        ))
    }
}

fn prop1(max_len: usize) -> Result<Tally> {
    limit("prop1 word length", max_len, 1..=20)?;
    let mut t = Tally::new();
    let prefix = tm_prefix(1 << 20)?;
    let oracle = FactorTable::from_letters(prefix.letters(), max_len);
    for w in binary_words_up_to(max_len) {
        let expected = oracle.contains(w.letters());
        t.check_result(thue_morse::is_segment(&w).map(|got| got == expected), || {
            format!("is_segment({w}) disagrees with prefix search ({expected})")
        });
    }
    for n in 3..=12 {
        let w = thue_morse::minimality_witness(n)?;
        let host = mu_power(n - 1)?.image(crate::words::A);
        t.check(
            oracle_contains_long(prefix.letters(), &w) && host.find(&w)?.is_none(),
            || format!("minimality witness for n={n} ({w}) is not a segment outside mu^{}(a)", n - 1),
        );
    }
    Ok(t)
}

fn oracle_contains_long(prefix: &[LetterIndex], w: &Word) -> bool {
    find_factor(prefix, w.letters()).is_some()
}

fn repetitions(exponent: usize) -> Result<Tally> {
    limit("repetitions prefix exponent", exponent, 1..=20)?;
    let mut t = Tally::new();
    let prefix = tm_prefix(1 << exponent)?;
    let word = prefix.word();
    t.check(!word.has_cube(), || format!("prefix of length 2^{exponent} has a cube"));
    t.check(!word.has_overlap(), || format!("prefix of length 2^{exponent} has an overlap"));
    for n in 0..=exponent.min(20) {
        let generated = mu_power(n as u32)?.image(crate::words::A);
        t.check(generated.letters() == &parity_prefix(1 << n)[..], || {
            format!("mu^{n}(a) differs from the parity definition")
        });
    }
    Ok(t)
}

fn thm1_thm3(max_len: usize) -> Result<Tally> {
    limit("thm1-thm3 word length", max_len, 1..=18)?;
    let mut t = Tally::new();
    let mut exceptional = Vec::new();
    for w in binary_words_up_to(max_len) {
        let avoided = is_avoided_via_ideal(&w)?;
        let unavoidable = is_unavoidable_binary(&w)?;
        t.check(avoided != unavoidable, || {
            format!("{w}: avoided via ideal = {avoided}, unavoidable = {unavoidable}")
        });
        if !avoided && !thue_morse::is_segment(&w)? {
            exceptional.push(w.to_string());
        }
    }
    let expected: Vec<String> = ["aabaa", "bbabb"]
        .iter()
        .filter(|s| s.len() <= max_len)
        .map(|s| s.to_string())
        .collect();
    t.check(exceptional == expected, || {
        format!("non-segment words outside the ideal: {exceptional:?}")
    });
    generator_checks(&mut t)?;
    Ok(t)
}

fn generator_checks(t: &mut Tally) -> Result<()> {
    let expected = [
        (avoidance::aba_generator(1)?, "babbaaba"),
        (avoidance::aba_generator(2)?, "aabbabaababbaa"),
        (avoidance::bab_generator(2)?, "abaababbabaaba"),
    ];
    for (got, want) in expected {
        t.check(got.to_string() == want, || format!("family member {got} != {want}"));
    }
    let set = avoidance::shur_generators(200)?;
    let all = set.generators();
    for g in &all {
        let w = &g.word;
        t.check(!thue_morse::is_segment(w)?, || format!("generator {w} is a segment"));
        t.check(is_avoided_via_ideal(w)?, || format!("generator {w} not in the ideal"));
        t.check(find_witness(w, 3, 1 << 18)?.is_none(), || {
            format!("generator {w} has a witness with images of length <= 3")
        });
    }
    // minimality: no generator contains an instance of another
    for g in all.iter().map(|g| &g.word) {
        let others = all.iter().filter(|h| &h.word != g && h.word.len() <= g.len());
        let mut embedded = None;
        for h in others {
            if avoidance::contains_pattern_instance(g, &h.word)?.is_some() {
                embedded = Some(h.word.to_string());
                break;
            }
        }
        t.check(embedded.is_none(), || {
            format!("generator {g} contains an instance of {}", embedded.clone().unwrap_or_default())
        });
    }
    Ok(())
}

fn lemma3(max_len: usize) -> Result<Tally> {
    limit("lemma3 segment length", max_len, 1..=64)?;
    let mut t = Tally::new();
    let mu = Morphism::mu();
    for u in thue_morse::segments_up_to(max_len)? {
        if thue_morse::is_special(&u)? {
            let image = mu.apply(&u)?;
            t.check(thue_morse::is_special(&image)?, || {
                format!("{u} is special but mu({u}) = {image} is not")
            });
        }
    }
    Ok(t)
}

fn prop5(max_len: usize) -> Result<Tally> {
    limit("prop5 root length", max_len, 1..=26)?;
    let mut t = Tally::new();
    let prefix = tm_prefix(1 << 16)?;
    let oracle = FactorTable::from_letters(prefix.letters(), max_len);
    let mut roots = 0u64;
    for k in 1..=max_len {
        for u in binary_words_of_length(k) {
            let got = thue_morse::classify_square_root(&u);
            // a square segment has a segment root, so the long search only runs for segments
            let square_is_segment = oracle.contains(u.letters()) && {
                let mut square = u.letters().to_vec();
                square.extend_from_slice(u.letters());
                find_factor(prefix.letters(), &square).is_some()
            };
            match got {
                Ok(Some(root)) => {
                    roots += 1;
                    let rebuilt = mu_power(root.power)?.apply(&root.base)?;
                    t.check(square_is_segment && rebuilt == u, || {
                        format!("{u} classified as mu^{}({}) = {rebuilt}", root.power, root.base)
                    });
                }
                Ok(None) => t.check(!square_is_segment, || format!("{u}{u} is a segment but no root found")),
                Err(e) => t.check(false, || format!("classify_square_root({u}): {e}")),
            }
        }
    }
    t.check(roots > 0, || "no square roots found".into());
    Ok(t)
}

fn cor1(max_n: usize) -> Result<Tally> {
    limit("cor1 exponent", max_n, 0..=12)?;
    let mut t = Tally::new();
    let prefix_len = 1 << 15;
    let text = parity_prefix(prefix_len);
    for n in 0..=max_n as u32 {
        for x in ['a', 'b'] {
            let outcome = thue_morse::aligned_occurrences(n, x, prefix_len);
            let block = {
                let image = mu_power(n + 1)?.image_of(x).expect("binary letter");
                image.into_letters()
            };
            let expected: Vec<usize> = (0..=text.len() - block.len())
                .filter(|&i| text[i..i + block.len()] == block[..])
                .collect();
            t.check_result(
                outcome.map(|got| got == expected && got.iter().all(|p| p % (1 << n) == 0)),
                || format!("occurrences of mu^{}({x})", n + 1),
            );
        }
    }
    Ok(t)
}

fn thm6(max_len: usize) -> Result<Tally> {
    limit("thm6 segment length", max_len, 1..=16)?;
    let mut t = Tally::new();
    for w in thue_morse::segments_of_length(10)? {
        t.check(typicality::satisfies_length3_criterion(&w)?, || {
            format!("length-10 segment {w} fails the length-3 criterion")
        });
    }
    for w in thue_morse::segments_up_to(max_len)? {
        if !typicality::satisfies_length3_criterion(&w)? {
            continue;
        }
        t.check_result(
            typicality::classify(&w).map(|v| v.verdict == typicality::Verdict::Typical),
            || format!("{w} meets the criterion but is not classified typical"),
        );
        let witness = typicality::brute_force_atypical_check(&w, 6)?;
        t.check(witness.is_none(), || {
            format!("{w} meets the criterion but {} maps it to a segment", witness.clone().unwrap())
        });
    }
    Ok(t)
}

fn thm7(max_len: usize) -> Result<Tally> {
    limit("thm7 segment length", max_len, 1..=10)?;
    let mut t = Tally::new();
    for w in thue_morse::segments_up_to(max_len)? {
        let witness = typicality::brute_force_atypical_check(&w, 8)?;
        let listed = typicality::is_atypical(&w);
        t.check(witness.is_some() == listed, || {
            format!("{w}: witness {witness:?}, listed atypical = {listed}")
        });
    }
    for (word, phi) in [("aabab", "a->a,b->bbabaab"), ("abaaba", "a->a,b->bb"), ("aabbaab", "a->a,b->bab")] {
        let w = Word::binary(word)?;
        let phi: Morphism = phi.parse()?;
        let image = phi.apply(&w)?;
        t.check(
            thue_morse::is_segment(&w)? && thue_morse::is_segment(&image)? && phi.in_mu_xi_monoid().is_none(),
            || format!("known witness {phi} for {word} does not validate"),
        );
    }
    for word in ["aababb", "aabbab", "abbaabba", "ababba"] {
        let w = Word::binary(word)?;
        t.check(typicality::brute_force_atypical_check(&w, 8)?.is_none(), || {
            format!("{word} has an atypicality witness with images up to length 8")
        });
    }
    s0_checks(&mut t)?;
    Ok(t)
}

fn s0_checks(t: &mut Tally) -> Result<()> {
    let words = typicality::atypical_words();
    let members: HashSet<&Word> = words.iter().collect();
    for w in words {
        for start in 0..w.len() {
            for end in start + 1..=w.len() {
                let f = w.factor(start, end).unwrap();
                t.check(members.contains(&f), || format!("factor {f} of {w} is not atypical"));
            }
        }
        for v in w.variants()? {
            t.check(members.contains(&v), || format!("variant {v} of {w} is not atypical"));
        }
    }
    let s = typicality::build_s0();
    let elements: Vec<S0Element> = s.elements().collect();
    for &x in &elements {
        for &y in &elements {
            let xy = s.product(x, y);
            for &z in &elements {
                let left = s.product(xy, z);
                let right = s.product(x, s.product(y, z));
                t.check(left == right, || format!("({x:?}*{y:?})*{z:?} != {x:?}*({y:?}*{z:?})"));
            }
        }
    }
    for (i, u) in s.words().iter().enumerate() {
        for (j, v) in s.words().iter().enumerate() {
            let above = s.above(S0Element::Word(i), S0Element::Word(j));
            t.check(above == v.find(u)?.is_some(), || format!("J-order wrong for {u}, {v}"));
        }
    }
    Ok(())
}

fn cor11(max_len: usize) -> Result<Tally> {
    limit("cor11 segment length", max_len, 1..=16)?;
    let mut t = Tally::new();
    for phi in enumerate_morphisms(&Alphabet::binary(), 4)? {
        let counterexample = typicality::segment_preservation_check(&phi, max_len)?;
        let in_monoid = phi.in_mu_xi_monoid().is_some();
        t.check(counterexample.is_none() == in_monoid, || {
            format!("{phi}: in monoid = {in_monoid}, counterexample = {counterexample:?}")
        });
    }
    Ok(t)
}

fn prop10(max_shift: usize) -> Result<Tally> {
    limit("prop10 shift", max_shift, 0..=4096)?;
    let mut t = Tally::new();
    let horizon = 4096;
    let text = parity_prefix(max_shift + horizon);
    for i in 0..=max_shift {
        for j in 0..=max_shift {
            let expected = (0..horizon).find(|&d| text[i + d] == text[j + d]);
            t.check_result(
                avoidance::suffix_divergence(i, j, horizon).map(|got| got.is_some() && got == expected),
                || format!("divergence of shifts {i}, {j}"),
            );
        }
    }
    Ok(t)
}

fn recurrence(max_k: usize) -> Result<Tally> {
    limit("recurrence k", max_k, 3..=40)?;
    let mut t = Tally::new();
    let text = parity_prefix(1 << 14);
    for k in 3..=max_k {
        let ell = thue_morse::recurrence_window(k)?;
        let short: HashSet<&[LetterIndex]> = text.windows(k).collect();
        let covers = |window: &[LetterIndex]| {
            let found: HashSet<&[LetterIndex]> = window.windows(k).collect();
            found.len() == short.len()
        };
        let long: HashSet<&[LetterIndex]> = text.windows(ell).collect();
        t.check(long.iter().all(|w| covers(w)), || {
            format!("k={k}: some segment of length {ell} misses a length-{k} segment")
        });
        let shorter: HashSet<&[LetterIndex]> = text.windows(ell - 1).collect();
        t.check(shorter.iter().any(|w| !covers(w)), || {
            format!("k={k}: every segment of length {} already contains all length-{k} segments", ell - 1)
        });
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        for (name, size) in [
            ("prop1", 10),
            ("repetitions", 10),
            ("thm1-thm3-equiv", 9),
            ("lemma3", 12),
            ("prop5", 10),
            ("cor1", 3),
            ("thm6", 10),
            ("thm7", 6),
            ("cor11", 8),
            ("prop10", 8),
            ("recurrence", 6),
        ] {
            let report = run_suite(name, Some(size)).unwrap();
            assert!(report.passed(), "{name}: {:?}", report.failures);
            assert!(report.cases > 0, "{name} checked nothing");
        }
    }

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(run_suite("nope", None).is_err());
        assert!(run_suite("prop1", Some(40)).is_err());
    }

    #[test]
    fn factor_table() {
        let text = Word::binary("abbab").unwrap();
        let table = FactorTable::from_letters(text.letters(), 3);
        assert!(table.contains(Word::binary("bba").unwrap().letters()));
        assert!(!table.contains(Word::binary("aa").unwrap().letters()));
        assert!(!table.contains(Word::binary("abbaa").unwrap().letters()));
    }
}
