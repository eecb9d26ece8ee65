use proptest::prelude::*;

use tmpatterns::avoidance::pattern_instance_at;
use tmpatterns::morphisms::mu_power;
use tmpatterns::thue_morse::{is_segment, mu_preimage, tm_prefix};
use tmpatterns::typicality::{build_s0, export_jorder_dot, S0Element};
use tmpatterns::{Alphabet, Morphism, Word};

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0u8..2, 1..=max)
        .prop_map(|letters| Word::new(Alphabet::binary(), letters).unwrap())
}

fn morphism(max: usize) -> impl Strategy<Value = Morphism> {
    (word(max), word(max)).prop_map(|(a, b)| Morphism::binary(&a.to_string(), &b.to_string()).unwrap())
}

fn naive_power_run(w: &[u8], overlap: bool) -> bool {
    // cube: xxx; overlap: axaxa
    let n = w.len();
    for start in 0..n {
        for p in 1..=n {
            let need = if overlap { 2 * p + 1 } else { 3 * p };
            if start + need > n {
                break;
            }
            if (start..start + need - p).all(|i| w[i] == w[i + p]) {
                return true;
            }
        }
    }
    false
}

proptest! {
    #[test]
    fn exchange_and_reverse_are_involutions(w in word(40)) {
        prop_assert_eq!(w.exchange().unwrap().exchange().unwrap(), w.clone());
        prop_assert_eq!(w.reverse().reverse(), w);
    }

    #[test]
    fn repetition_detectors_match_definition(w in word(24)) {
        prop_assert_eq!(w.has_cube(), naive_power_run(w.letters(), false));
        prop_assert_eq!(w.has_overlap(), naive_power_run(w.letters(), true));
        if w.has_cube() {
            prop_assert!(w.has_overlap());
        }
    }

    #[test]
    fn compose_agrees_with_apply(f in morphism(4), g in morphism(4), w in word(10)) {
        let fg = f.compose(&g).unwrap();
        prop_assert_eq!(fg.apply(&w).unwrap(), f.apply(&g.apply(&w).unwrap()).unwrap());
    }

    #[test]
    fn mu_powers_commute_with_exchange(n in 0u32..6, w in word(16)) {
        let m = mu_power(n).unwrap();
        let image = m.apply(&w).unwrap();
        prop_assert_eq!(image.len(), w.len() << n);
        prop_assert_eq!(m.apply(&w.exchange().unwrap()).unwrap(), image.exchange().unwrap());
    }

    #[test]
    fn monoid_forms_are_recognised(n in 0u32..8, exchange in any::<bool>()) {
        let mut m = mu_power(n).unwrap();
        if exchange {
            m = Morphism::xi().compose(&m).unwrap();
        }
        let form = m.in_mu_xi_monoid().unwrap();
        prop_assert_eq!(form.power, n);
        prop_assert_eq!(form.exchange, exchange);
    }

    #[test]
    fn segments_closed_under_variants(w in word(20)) {
        let seg = is_segment(&w).unwrap();
        for v in w.variants().unwrap() {
            prop_assert_eq!(is_segment(&v).unwrap(), seg);
        }
    }

    #[test]
    fn mu_preimage_inverts_mu(w in word(20)) {
        let image = Morphism::mu().apply(&w).unwrap();
        prop_assert_eq!(mu_preimage(&image).unwrap(), Some(w));
    }

    #[test]
    fn segment_factors_are_segments(start in 0usize..5000, len in 1usize..40, cut in 0usize..40) {
        let prefix = tm_prefix(8192).unwrap().word();
        let s = prefix.factor(start, start + len).unwrap();
        prop_assert!(is_segment(&s).unwrap());
        let end = cut.min(len - 1) + 1;
        prop_assert!(is_segment(&s.factor(0, end).unwrap()).unwrap());
    }

    #[test]
    fn pattern_instances_are_sound(p in word(4), w in word(14)) {
        if let Some((phi, pos)) = pattern_instance_at(&w, &p).unwrap() {
            let image = phi.apply(&p).unwrap();
            prop_assert_eq!(w.factor(pos, pos + image.len()), Some(image));
        }
    }
}

#[test]
fn hasse_edges_are_the_transitive_reduction() {
    let s = build_s0();
    let n = s.words().len();
    let above = |u: usize, v: usize| s.above(S0Element::Word(u), S0Element::Word(v));
    let mut reduction = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u == v || !above(u, v) {
                continue;
            }
            let between = (0..n).any(|x| x != u && x != v && above(u, x) && above(x, v));
            if !between {
                reduction.push((u, v));
            }
        }
    }
    let mut edges = s.hasse_edges();
    edges.sort();
    reduction.sort();
    assert_eq!(edges, reduction);

    let dot = export_jorder_dot(&s);
    let word_edges = dot.lines().filter(|l| l.contains("->") && !l.contains("\"0\"")).count();
    assert_eq!(word_edges, reduction.len());
    assert_eq!(dot.lines().filter(|l| l.contains("-> \"0\"")).count(), s.maximal().len());
}
