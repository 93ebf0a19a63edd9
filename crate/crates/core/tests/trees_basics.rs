//! Tree monomial canonicalization, actions, grafting and enumeration,
//! checked against independent oracles (relabeling enumeration, recursive
//! counting) computed here rather than through the library path.

use num_traits::One;
use operads::perm::Perm;
use operads::presentations::{builtin, parse_monomial};
use operads::scalar::{int, rat};
use operads::trees::{
    act, act_mono, enumerate_basis, graft, graft_mono, Node, Signature, Symmetry, TreeMonomial,
    TreePoly,
};
use operads::Rational;

fn mono(sig: &Signature, text: &str) -> TreeMonomial {
    let (m, sign) = parse_monomial(sig, text).unwrap();
    assert_eq!(sign, int(1), "expected canonical input {text}");
    m
}

#[test]
fn canonicalize_symmetric_swap() {
    let com = builtin("Com").unwrap();
    let (m1, s1) = parse_monomial(&com.sig, "m(2,1)").unwrap();
    let (m2, s2) = parse_monomial(&com.sig, "m(1,2)").unwrap();
    assert_eq!(m1, m2);
    assert_eq!(s1, int(1));
    assert_eq!(s2, int(1));
}

#[test]
fn canonicalize_antisymmetric_swap() {
    let lie = builtin("Lie").unwrap();
    let (m1, s1) = parse_monomial(&lie.sig, "b(2,1)").unwrap();
    let (m2, s2) = parse_monomial(&lie.sig, "b(1,2)").unwrap();
    assert_eq!(m1, m2);
    assert_eq!(s1, int(-1));
    assert_eq!(s2, int(1));
}

#[test]
fn canonicalize_free_generator_uses_regular_representation() {
    // Dend's lt has no symmetry: lt(2,1) is the distinct basis monomial
    // lt.(12), kept with coefficient 1.
    let dend = builtin("Dend").unwrap();
    let (m1, s1) = parse_monomial(&dend.sig, "lt(2,1)").unwrap();
    let (m2, _) = parse_monomial(&dend.sig, "lt(1,2)").unwrap();
    assert_eq!(s1, int(1));
    assert_ne!(m1, m2);
    // explicit regular-representation bookkeeping: the symbol of lt(2,1)
    // must be the non-identity variant of the same generator
    let sym1 = m1.preorder_symbols()[0];
    let sym2 = m2.preorder_symbols()[0];
    assert_ne!(sym1, sym2);
    assert_eq!(dend.sig.symbols[sym1].gen, dend.sig.symbols[sym2].gen);
    assert!(!dend.sig.symbols[sym1].variant.is_identity());
}

#[test]
fn duplicate_leaf_labels_rejected() {
    let com = builtin("Com").unwrap();
    let raw = Node::op(0, vec![Node::Leaf(1), Node::Leaf(1)]);
    assert!(TreeMonomial::from_raw(&com.sig, &raw).is_err());
}

#[test]
fn act_identity_is_identity() {
    let com = builtin("Com").unwrap();
    let f = TreePoly::from_monomial(mono(&com.sig, "m(m(1,2),3)"));
    let g = act(&com.sig, &f, &Perm::identity(3)).unwrap();
    assert_eq!(f, g);
}

/// Oracle: the action by rho relabels leaf l as rho^{-1}(l). This oracle
/// recomputes the action of each rho by explicit leaf substitution over all
/// six permutations and compares against `act`.
#[test]
fn act_matches_relabeling_oracle_on_com_left_comb() {
    let com = builtin("Com").unwrap();
    let sig = &com.sig;
    for rho in Perm::all(3) {
        let inv = rho.inverse();
        let raw = Node::op(
            0,
            vec![
                Node::op(0, vec![Node::Leaf(inv.apply(1)), Node::Leaf(inv.apply(2))]),
                Node::Leaf(inv.apply(3)),
            ],
        );
        let (expected, sign) = TreeMonomial::from_raw(sig, &raw).unwrap();
        assert!(sign.is_one());
        let (got, gsign) = act_mono(sig, &mono(sig, "m(m(1,2),3)"), &rho).unwrap();
        assert_eq!(got, expected, "rho = {}", rho.cycles());
        assert!(gsign.is_one());
    }
}

#[test]
fn act_three_cycle_on_com_left_comb() {
    // With the relabeling convention l -> rho^{-1}(l) pinned by the
    // homomorphism law below, the 3-cycle (123) sends m(m(1,2),3) to
    // m(m(3,1),2) = m(m(1,3),2), and (132) sends it to m(m(2,3),1), whose
    // canonical form is the right comb m(1,m(2,3)).
    let com = builtin("Com").unwrap();
    let sig = &com.sig;
    let left = mono(sig, "m(m(1,2),3)");
    let c123 = Perm::parse_cycles("(123)", 3).unwrap();
    let c132 = Perm::parse_cycles("(132)", 3).unwrap();
    let (a, _) = act_mono(sig, &left, &c123).unwrap();
    assert_eq!(a, mono(sig, "m(m(1,3),2)"));
    let (b, _) = act_mono(sig, &left, &c132).unwrap();
    assert_eq!(b, mono(sig, "m(1,m(2,3))"));
}

#[test]
fn act_is_a_right_action() {
    let dend = builtin("Dend").unwrap();
    let sig = &dend.sig;
    let f = dend.relations[0].clone();
    for rho in Perm::all(3) {
        for tau in Perm::all(3) {
            let lhs = act(sig, &act(sig, &f, &rho).unwrap(), &tau).unwrap();
            let rhs = act(sig, &f, &rho.compose(&tau)).unwrap();
            assert_eq!(lhs, rhs, "rho={}, tau={}", rho.cycles(), tau.cycles());
        }
    }
}

#[test]
fn act_preserves_weight_and_support_for_free_generators() {
    let dend = builtin("Dend").unwrap();
    for rel in &dend.relations {
        for rho in Perm::all(3) {
            let g = act(&dend.sig, rel, &rho).unwrap();
            assert_eq!(g.weight(), rel.weight());
            assert_eq!(g.len(), rel.len());
        }
    }
}

#[test]
fn graft_with_identity_leaves_returns_outer() {
    let com = builtin("Com").unwrap();
    let outer = mono(&com.sig, "m(m(1,2),3)");
    let id = TreePoly::from_monomial(TreeMonomial::identity());
    let out = graft(&com.sig, &outer, &[id.clone(), id.clone(), id]).unwrap();
    assert_eq!(out, TreePoly::from_monomial(outer));
}

#[test]
fn graft_generates_weight_two_basis_with_relabelings() {
    // graft(m(1,2), [m(1,2), leaf]) gives the left comb; its S_3-orbit and
    // the orbit of the other slot choice cover the full enumerated basis of
    // the weight-2 arity-3 component.
    let com = builtin("Com").unwrap();
    let sig = &com.sig;
    let corolla = mono(sig, "m(1,2)");
    let inner = TreePoly::from_monomial(corolla.clone());
    let id = TreePoly::from_monomial(TreeMonomial::identity());
    let left = graft(sig, &corolla, &[inner.clone(), id.clone()]).unwrap();
    assert_eq!(left, TreePoly::from_monomial(mono(sig, "m(m(1,2),3)")));
    let right = graft(sig, &corolla, &[id, inner]).unwrap();
    assert_eq!(right, TreePoly::from_monomial(mono(sig, "m(1,m(2,3))")));

    let mut reached: Vec<TreeMonomial> = Vec::new();
    for f in [left, right] {
        for rho in Perm::all(3) {
            let g = act(sig, &f, &rho).unwrap();
            for (m, _) in g.iter() {
                if !reached.contains(m) {
                    reached.push(m.clone());
                }
            }
        }
    }
    reached.sort();
    assert_eq!(reached, enumerate_basis(sig, 3, 2));
}

#[test]
fn graft_associativity_small_sweep() {
    // Operad associativity: grafting in two orders agrees. Deterministic
    // sweep over arity-2 weight-1 polynomials of the Dend signature.
    let dend = builtin("Dend").unwrap();
    let sig = &dend.sig;
    let corolla = mono(sig, "lt(1,2)");
    let lt = TreePoly::from_monomial(mono(sig, "lt(1,2)"));
    let gt = TreePoly::from_monomial(mono(sig, "gt(1,2)"));
    let mixed = lt.add(&gt.scale(&rat(2, 1)));
    let pool: Vec<TreePoly> = vec![lt, gt, mixed];
    let id = TreePoly::from_monomial(TreeMonomial::identity());
    for a in &pool {
        for b in &pool {
            // (corolla o_1 a) o_1 b  vs  corolla o_1 (a o_1 b)
            let step1 = graft_poly(sig, &corolla, &[a.clone(), id.clone()]);
            let left = graft_all(sig, &step1, &[b.clone(), id.clone(), id.clone()]);
            let inner = graft_all(sig, a, &[b.clone(), id.clone()]);
            let right = graft_poly(sig, &corolla, &[inner, id.clone()]);
            assert_eq!(left, right);
        }
    }
}

fn graft_poly(sig: &Signature, outer: &TreeMonomial, inners: &[TreePoly]) -> TreePoly {
    graft(sig, outer, inners).unwrap()
}

fn graft_all(sig: &Signature, outer: &TreePoly, inners: &[TreePoly]) -> TreePoly {
    let mut out = TreePoly::zero();
    for (m, c) in outer.iter() {
        let slice = &inners[..m.arity() as usize];
        let g = graft(sig, m, slice).unwrap().scale(c);
        out = out.add(&g);
    }
    out
}

#[test]
fn graft_coefficients_multiply() {
    let com = builtin("Com").unwrap();
    let sig = &com.sig;
    let corolla = mono(sig, "m(1,2)");
    let id = TreePoly::from_monomial(TreeMonomial::identity());
    let scaled = TreePoly::from_monomial(corolla.clone()).scale(&rat(2, 3));
    let out = graft(sig, &corolla, &[scaled, id]).unwrap();
    let expect = TreePoly::from_monomial(mono(sig, "m(m(1,2),3)")).scale(&rat(2, 3));
    assert_eq!(out, expect);
}

/// Independent recursive counter for the basis size: the number of shuffle
/// trees with `n` leaves and `m` vertices over per-arity alphabet sizes,
/// using the block-partition recursion directly on counts.
fn count_basis(dims: &[usize; 4], labels: usize, weight: u32) -> usize {
    if weight == 0 {
        return usize::from(labels == 1);
    }
    if labels == 0 {
        return 0;
    }
    let mut total = 0usize;
    for arity in 1..=3usize.min(labels) {
        let d = dims[arity];
        if d == 0 {
            continue;
        }
        // ordered partitions of a set of `labels` elements into `arity`
        // blocks with increasing minima = surjective restricted growth
        // strings; recursion over block SIZES with multiplicities:
        // choose how the remaining labels fall into blocks.
        total += d * sum_over_blocks(dims, labels, arity, weight - 1);
    }
    total
}

/// Sum over ordered partitions (by the RGS construction) of products of
/// child counts. Implemented by brute-force enumeration over assignments of
/// labels 2..=labels to blocks (label 1 always in block 0).
fn sum_over_blocks(dims: &[usize; 4], labels: usize, blocks: usize, weight: u32) -> usize {
    fn rec(
        dims: &[usize; 4],
        sizes: &mut Vec<usize>,
        pos: usize,
        labels: usize,
        blocks: usize,
        weight: u32,
    ) -> usize {
        if pos == labels {
            if sizes.iter().any(|&s| s == 0) {
                return 0;
            }
            // distribute weight over blocks
            fn weights(dims: &[usize; 4], sizes: &[usize], idx: usize, weight: u32) -> usize {
                if idx == sizes.len() {
                    return usize::from(weight == 0);
                }
                let min = if sizes[idx] > 1 { 1 } else { 0 };
                let mut acc = 0;
                for w in min..=weight {
                    acc += count_basis(dims, sizes[idx], w) * weights(dims, sizes, idx + 1, weight - w);
                }
                acc
            }
            return weights(dims, sizes, 0, weight);
        }
        let mut acc = 0;
        let opened = sizes.iter().filter(|&&s| s > 0).count();
        for b in 0..blocks.min(opened + 1) {
            sizes[b] += 1;
            acc += rec(dims, sizes, pos + 1, labels, blocks, weight);
            sizes[b] -= 1;
        }
        acc
    }
    let mut sizes = vec![0usize; blocks];
    sizes[0] = 1; // label 1 pins block 0
    rec(dims, &mut sizes, 1, labels, blocks, weight)
}

#[test]
fn enumerate_basis_counts_match_recursive_oracle() {
    let com = builtin("Com").unwrap();
    let dend = builtin("Dend").unwrap();
    let pois = builtin("Pois").unwrap();
    for (pres, name) in [(&com, "Com"), (&dend, "Dend"), (&pois, "Pois")] {
        let mut dims = [0usize; 4];
        for a in 1..=3u8 {
            dims[a as usize] = pres.sig.dim(a);
        }
        for n in 1..=4u8 {
            for m in 0..=3u32 {
                let got = enumerate_basis(&pres.sig, n, m).len();
                let want = count_basis(&dims, n as usize, m);
                assert_eq!(got, want, "{name} n={n} m={m}");
            }
        }
    }
}

#[test]
fn enumerate_basis_expected_sizes() {
    let com = builtin("Com").unwrap();
    // one symmetric binary generator: 3 two-vertex monomials at arity 3
    assert_eq!(enumerate_basis(&com.sig, 3, 2).len(), 3);
    assert_eq!(enumerate_basis(&com.sig, 1, 0).len(), 1);
    let asx = builtin("As").unwrap();
    // regular representation of S_2: 12 monomials
    assert_eq!(enumerate_basis(&asx.sig, 3, 2).len(), 12);
}

#[test]
fn enumeration_is_sorted_and_duplicate_free() {
    let dend = builtin("Dend").unwrap();
    let basis = enumerate_basis(&dend.sig, 4, 3);
    for w in basis.windows(2) {
        assert!(w[0] < w[1]);
    }
    // 15 shapes x 4^3 decorations over two free binary generators (4 symbols)
    assert_eq!(basis.len(), 15 * 64);
}

#[test]
fn coefficient_vector_basics() {
    let com = builtin("Com").unwrap();
    let sig = &com.sig;
    let basis = enumerate_basis(sig, 3, 2);
    let zero = TreePoly::zero();
    let v = operads::trees::coefficient_vector(sig, &zero, &basis).unwrap();
    assert!(v.iter().all(|x| x == &int(0)));
    let single = TreePoly::from_monomial(basis[1].clone());
    let v = operads::trees::coefficient_vector(sig, &single, &basis).unwrap();
    let ones: Vec<Rational> = v.iter().cloned().filter(|x| !x.eq(&int(0))).collect();
    assert_eq!(ones, vec![int(1)]);
    // monomial outside the basis errors
    let wrong = TreePoly::from_monomial(mono(sig, "m(1,2)"));
    assert!(operads::trees::coefficient_vector(sig, &wrong, &basis).is_err());
}

#[test]
fn graft_mono_arity_mismatch_rejected() {
    let com = builtin("Com").unwrap();
    let outer = mono(&com.sig, "m(1,2)");
    assert!(graft_mono(&com.sig, &outer, &[TreeMonomial::identity()]).is_err());
}

#[test]
fn symmetry_matters_for_signature_dims() {
    let mut sig = Signature::new("t");
    sig.add_generator("s", 2, Symmetry::Symmetric).unwrap();
    sig.add_generator("f", 2, Symmetry::Free).unwrap();
    sig.add_generator("u", 1, Symmetry::Free).unwrap();
    assert_eq!(sig.dim(2), 3); // s + two variants of f
    assert_eq!(sig.dim(1), 1);
}
