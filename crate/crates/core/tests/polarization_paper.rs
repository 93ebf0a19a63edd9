//! Quasipolarization against hand-coded expected values: the colored
//! commutative relations, lift counts, restitution scaling, equivariance,
//! and the quadratic-form example with its foliations and unified foliation.

use num_traits::{One, Signed};
use operads::perm::Perm;
use operads::polarization::poly::{
    foliations, monomial_lifts, quasipolarize as poly_quasipolarize, spans_equal,
    unified_foliation, DecVar, OrderedPoly,
};
use operads::polarization::{
    color_words, lifts_of_type, quasipolarize, quasipolarize_all, restitute, type_of,
    WeakComposition,
};
use operads::presentations::{builtin, parse_monomial};
use operads::scalar::{int, rat};
use operads::trees::{act, colorize, enumerate_basis, Coloring, TreePoly};

fn coloring2(name: &str) -> (operads::presentations::Presentation, Coloring) {
    let p = builtin(name).unwrap();
    let col = colorize(&p.sig, &["w".to_string(), "b".to_string()]);
    (p, col)
}

fn poly(sig: &operads::trees::Signature, terms: &[(i64, &str)]) -> TreePoly {
    let mut out = TreePoly::zero();
    for (c, text) in terms {
        let (m, sign) = parse_monomial(sig, text).unwrap();
        out.add_term(m, int(*c) * sign);
    }
    out
}

#[test]
fn weak_compositions_enumerated_in_lex_order() {
    let all = WeakComposition::all(2, 2);
    let counts: Vec<&[u32]> = all.iter().map(|c| c.counts()).collect();
    assert_eq!(counts, vec![&[0, 2][..], &[1, 1], &[2, 0]]);
    assert_eq!(WeakComposition::all(3, 3).len(), 10);
}

#[test]
fn lift_counts_are_multinomials() {
    let (com, col) = coloring2("Com");
    for n in 1..=4u8 {
        for m in 1..=3u32 {
            for t in enumerate_basis(&com.sig, n, m) {
                for c in WeakComposition::all(m, 2) {
                    let lifts = lifts_of_type(&col, &t, &c).unwrap();
                    assert_eq!(int(lifts.len() as i64), c.multinomial());
                    for l in &lifts {
                        assert_eq!(type_of(&col, &l), c);
                    }
                }
            }
        }
    }
    // single color: exactly one lift
    let p = builtin("Com").unwrap();
    let c1 = colorize(&p.sig, &["only".to_string()]);
    let t = enumerate_basis(&p.sig, 3, 2)[0].clone();
    assert_eq!(lifts_of_type(&c1, &t, &WeakComposition::new(vec![2])).unwrap().len(), 1);
    // three lifts for m = 3, c = (2,1)
    let t3 = enumerate_basis(&p.sig, 4, 3)[0].clone();
    assert_eq!(lifts_of_type(&coloring2("Com").1, &t3, &WeakComposition::new(vec![2, 1])).unwrap().len(), 3);
}

#[test]
fn lift_order_is_preorder_lexicographic() {
    let (com, col) = coloring2("Com");
    let t = enumerate_basis(&com.sig, 3, 2)[0].clone();
    let words = color_words(&WeakComposition::new(vec![1, 1]));
    assert_eq!(words, vec![vec![0, 1], vec![1, 0]]);
    let lifts = lifts_of_type(&col, &t, &WeakComposition::new(vec![1, 1])).unwrap();
    // first lift: preorder word (w, b); second: (b, w)
    let pre0: Vec<Option<u8>> =
        lifts[0].preorder_symbols().iter().map(|&s| col.colored.symbols[s].color).collect();
    assert_eq!(pre0, vec![Some(0), Some(1)]);
    let pre1: Vec<Option<u8>> =
        lifts[1].preorder_symbols().iter().map(|&s| col.colored.symbols[s].color).collect();
    assert_eq!(pre1, vec![Some(1), Some(0)]);
}

/// The four-term colored commutative relation of type (1,1): the first
/// relation of Com quasipolarized over two colors, equal to the hand-coded
/// expansion with coefficients +-1.
#[test]
fn com_polarization_type_one_one_matches_display() {
    let (com, col) = coloring2("Com");
    let r = com.relations[0].clone(); // m(m(1,2),3) - m(m(2,3),1)
    let q = quasipolarize(&col, &r, &WeakComposition::new(vec![1, 1])).unwrap();
    let expected = poly(
        &col.colored,
        &[
            (1, "m@w(m@b(1,2),3)"),
            (1, "m@b(m@w(1,2),3)"),
            (-1, "m@w(m@b(2,3),1)"),
            (-1, "m@b(m@w(2,3),1)"),
        ],
    );
    assert_eq!(q, expected);
    assert_eq!(q.len(), 4);
    for (_, c) in q.iter() {
        assert!(c.clone().abs() == int(1).abs());
    }
}

#[test]
fn com_polarization_single_color_types() {
    let (com, col) = coloring2("Com");
    let r = com.relations[0].clone();
    let q20 = quasipolarize(&col, &r, &WeakComposition::new(vec![2, 0])).unwrap();
    assert_eq!(q20, poly(&col.colored, &[(1, "m@w(m@w(1,2),3)"), (-1, "m@w(m@w(2,3),1)")]));
    let q02 = quasipolarize(&col, &r, &WeakComposition::new(vec![0, 2])).unwrap();
    assert_eq!(q02, poly(&col.colored, &[(1, "m@b(m@b(1,2),3)"), (-1, "m@b(m@b(2,3),1)")]));
}

#[test]
fn restitution_scaling_law() {
    // restitute(quasipolarize(f, c)) = multinomial(c) * f, exactly
    for name in ["Com", "Lie", "Dend", "PreLie"] {
        let (p, col) = coloring2(name);
        for r in &p.relations {
            for (c, q) in quasipolarize_all(&col, r).unwrap() {
                let back = restitute(&col, &q).unwrap();
                assert_eq!(back, r.scale(&c.multinomial()), "{name} type {}", c.label());
            }
        }
    }
}

#[test]
fn single_color_polarization_is_recoloring() {
    let p = builtin("Lie").unwrap();
    let col = colorize(&p.sig, &["only".to_string()]);
    let r = p.relations[0].clone();
    let q = quasipolarize(&col, &r, &WeakComposition::new(vec![2])).unwrap();
    assert_eq!(restitute(&col, &q).unwrap(), r);
    assert_eq!(q.len(), r.len());
}

/// Full polarization is multilinear: with all multiplicities <= 1 every
/// colored symbol appears at most once per monomial.
#[test]
fn full_polarization_multilinear() {
    let p = builtin("Com").unwrap();
    let col = colorize(&p.sig, &["a".to_string(), "b".to_string(), "c".to_string()]);
    let r = p.relations[0].clone();
    let q = quasipolarize(&col, &r, &WeakComposition::new(vec![1, 1, 0])).unwrap();
    for (m, _) in q.iter() {
        let mut colors: Vec<Option<u8>> =
            m.preorder_symbols().iter().map(|&s| col.colored.symbols[s].color).collect();
        colors.sort();
        colors.dedup();
        assert_eq!(colors.len(), m.weight() as usize);
    }
}

/// Equivariance: quasipolarize(act(f, rho), c) = act(quasipolarize(f, c), rho).
#[test]
fn quasipolarization_commutes_with_the_symmetric_group() {
    for name in ["Com", "Dend", "PreLie"] {
        let (p, col) = coloring2(name);
        for r in &p.relations {
            for rho in Perm::all(3) {
                let lhs = quasipolarize(
                    &col,
                    &act(&p.sig, r, &rho).unwrap(),
                    &WeakComposition::new(vec![1, 1]),
                )
                .unwrap();
                let rhs = act(
                    &col.colored,
                    &quasipolarize(&col, r, &WeakComposition::new(vec![1, 1])).unwrap(),
                    &rho,
                )
                .unwrap();
                assert_eq!(lhs, rhs, "{name} rho={}", rho.cycles());
            }
        }
    }
}

/// Independent reconstruction oracle: expanding x -> sum_w lambda_w x_w by
/// direct enumeration of all colorings (walking each tree and choosing a
/// color per vertex, bucketing by exponent vector) must reproduce the
/// type-indexed quasipolarizations coefficientwise in lambda.
#[test]
fn reconstruction_against_lambda_expansion_oracle() {
    for name in ["Com", "Dend"] {
        let (p, col) = coloring2(name);
        let k = 2usize;
        for r in &p.relations {
            let m = r.weight().unwrap();
            // oracle buckets: exponent vector -> colored polynomial
            let mut buckets: std::collections::BTreeMap<Vec<u32>, TreePoly> =
                std::collections::BTreeMap::new();
            for (t, coeff) in r.iter() {
                let nverts = t.weight() as usize;
                // enumerate all k^nverts colorings by counting
                let total = k.pow(nverts as u32);
                for code in 0..total {
                    let mut word = Vec::with_capacity(nverts);
                    let mut x = code;
                    for _ in 0..nverts {
                        word.push((x % k) as u8);
                        x /= k;
                    }
                    // exponent vector of this coloring
                    let mut expo = vec![0u32; k];
                    for &w in &word {
                        expo[w as usize] += 1;
                    }
                    // color the tree along its preorder traversal
                    let syms = t.preorder_symbols();
                    let colored: Vec<usize> = syms
                        .iter()
                        .zip(word.iter())
                        .map(|(&s, &w)| col.colored_sym[s][w as usize])
                        .collect();
                    let lifted = t.with_preorder_symbols(&col.colored, &colored).unwrap();
                    buckets.entry(expo).or_insert_with(TreePoly::zero).add_term(lifted, coeff.clone());
                }
            }
            for c in WeakComposition::all(m, k) {
                let expected = buckets.remove(c.counts()).unwrap_or_else(TreePoly::zero);
                let got = quasipolarize(&col, r, &c).unwrap();
                assert_eq!(got, expected, "{name} type {}", c.label());
            }
            assert!(buckets.is_empty());
        }
    }
}

// ---------------------------------------------------------------------------
// Appendix: polynomial polarization
// ---------------------------------------------------------------------------

fn w(pairs: &[(u8, u8)]) -> Vec<DecVar> {
    pairs.iter().map(|&(var, copy)| DecVar { var, copy }).collect()
}

fn quadratic_form() -> OrderedPoly {
    // f(x1, x2) = 2 x1^2 + 3 x1 x2 + 4 x2^2
    OrderedPoly::commutative(&[(2, &[1, 1]), (3, &[1, 2]), (4, &[2, 2])])
}

fn poly_of(terms: &[(i64, &[(u8, u8)])]) -> OrderedPoly {
    let mut p = OrderedPoly::zero();
    for (c, pairs) in terms {
        p.add_term(w(pairs), int(*c));
    }
    p
}

#[test]
fn quadratic_form_quasipolarizations_match_display() {
    let f = quadratic_form();
    let f20 = poly_quasipolarize(&f, &WeakComposition::new(vec![2, 0])).unwrap();
    assert_eq!(
        f20,
        poly_of(&[
            (2, &[(1, 1), (1, 1)]),
            (3, &[(1, 1), (2, 1)]),
            (4, &[(2, 1), (2, 1)]),
        ])
    );
    let f02 = poly_quasipolarize(&f, &WeakComposition::new(vec![0, 2])).unwrap();
    assert_eq!(
        f02,
        poly_of(&[
            (2, &[(1, 2), (1, 2)]),
            (3, &[(1, 2), (2, 2)]),
            (4, &[(2, 2), (2, 2)]),
        ])
    );
    let f11 = poly_quasipolarize(&f, &WeakComposition::new(vec![1, 1])).unwrap();
    assert_eq!(
        f11,
        poly_of(&[
            (2, &[(1, 1), (1, 2)]),
            (2, &[(1, 2), (1, 1)]),
            (3, &[(1, 1), (2, 2)]),
            (3, &[(1, 2), (2, 1)]),
            (4, &[(2, 1), (2, 2)]),
            (4, &[(2, 2), (2, 1)]),
        ])
    );
    assert_eq!(f11.len(), 6);
    // restitution of the full polarization: F(x1,x2,x1,x2) = 2 f
    assert_eq!(f11.restitute(), f.scale(&int(2)));
    // monomial case: c = (m) keeps the polynomial with superscript 1
    let single = poly_quasipolarize(&f, &WeakComposition::new(vec![2])).unwrap();
    assert_eq!(single, f20);
}

#[test]
fn monomial_quasipolarization_has_unique_foliation() {
    let mono = OrderedPoly::commutative(&[(5, &[1, 2])]);
    let fol = foliations(&mono, &WeakComposition::new(vec![1, 1])).unwrap();
    assert_eq!(fol.len(), 1);
    assert_eq!(fol[0].len(), 2);
    for part in &fol[0] {
        assert_eq!(part.restitute(), mono);
    }
    let lifts = monomial_lifts(&w(&[(1, 0), (2, 0)]), &WeakComposition::new(vec![1, 1])).unwrap();
    assert_eq!(lifts, vec![w(&[(1, 1), (2, 2)]), w(&[(1, 2), (2, 1)])]);
}

#[test]
fn quadratic_form_has_exactly_four_foliations_matching_display() {
    let f = quadratic_form();
    let c = WeakComposition::new(vec![1, 1]);
    let fols = foliations(&f, &c).unwrap();
    assert_eq!(fols.len(), 4);
    // hand-coded displays; each foliation is a set of two parts
    let displays: Vec<Vec<OrderedPoly>> = vec![
        vec![
            poly_of(&[(2, &[(1, 1), (1, 2)]), (3, &[(1, 1), (2, 2)]), (4, &[(2, 1), (2, 2)])]),
            poly_of(&[(2, &[(1, 2), (1, 1)]), (3, &[(1, 2), (2, 1)]), (4, &[(2, 2), (2, 1)])]),
        ],
        vec![
            poly_of(&[(2, &[(1, 1), (1, 2)]), (3, &[(1, 2), (2, 1)]), (4, &[(2, 1), (2, 2)])]),
            poly_of(&[(2, &[(1, 2), (1, 1)]), (3, &[(1, 1), (2, 2)]), (4, &[(2, 2), (2, 1)])]),
        ],
        vec![
            poly_of(&[(2, &[(1, 1), (1, 2)]), (3, &[(1, 1), (2, 2)]), (4, &[(2, 2), (2, 1)])]),
            poly_of(&[(2, &[(1, 2), (1, 1)]), (3, &[(1, 2), (2, 1)]), (4, &[(2, 1), (2, 2)])]),
        ],
        vec![
            poly_of(&[(2, &[(1, 1), (1, 2)]), (3, &[(1, 2), (2, 1)]), (4, &[(2, 2), (2, 1)])]),
            poly_of(&[(2, &[(1, 2), (1, 1)]), (3, &[(1, 1), (2, 2)]), (4, &[(2, 1), (2, 2)])]),
        ],
    ];
    for disp in &displays {
        let found = fols.iter().any(|fol| {
            disp.iter().all(|part| fol.contains(part)) && fol.len() == disp.len()
        });
        assert!(found, "displayed foliation not produced");
    }
    // every part of every foliation restitutes to f, and parts sum to f_c
    let fc = poly_quasipolarize(&f, &c).unwrap();
    for fol in &fols {
        let mut sum = OrderedPoly::zero();
        for part in fol {
            assert_eq!(part.restitute(), f);
            sum = sum.add(part);
        }
        assert_eq!(sum, fc);
    }
}

#[test]
fn unified_foliation_differences_and_span_independence() {
    let f = quadratic_form();
    let c = WeakComposition::new(vec![1, 1]);
    let (standard, diffs) = unified_foliation(&f, &c).unwrap();
    let expected_diffs = vec![
        poly_of(&[(1, &[(1, 1), (1, 2)]), (-1, &[(1, 2), (1, 1)])]),
        poly_of(&[(1, &[(1, 1), (2, 2)]), (-1, &[(1, 2), (2, 1)])]),
        poly_of(&[(1, &[(2, 1), (2, 2)]), (-1, &[(2, 2), (2, 1)])]),
    ];
    assert_eq!(diffs, expected_diffs);
    // the span of (foliation + differences) is the same for all four
    // base foliations
    let fols = foliations(&f, &c).unwrap();
    let base: Vec<OrderedPoly> =
        standard.iter().cloned().chain(diffs.iter().cloned()).collect();
    for fol in &fols {
        let system: Vec<OrderedPoly> =
            fol.iter().cloned().chain(diffs.iter().cloned()).collect();
        assert!(spans_equal(&base, &system).unwrap());
    }
}

#[test]
fn weight_mismatch_rejected() {
    let (com, col) = coloring2("Com");
    let r = com.relations[0].clone();
    assert!(quasipolarize(&col, &r, &WeakComposition::new(vec![3, 0])).is_err());
    let f = quadratic_form();
    assert!(poly_quasipolarize(&f, &WeakComposition::new(vec![3, 0])).is_err());
    let _ = rat(1, 2);
    assert!(int(1).is_one());
}
