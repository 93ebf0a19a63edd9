//! Koszul duals of finitely generated unary-binary quadratic presentations:
//! the dual generator space (linear dual twisted by the sign
//! representation), the weight-2 pairing, orthogonal-complement relations,
//! presentation isomorphism checking, and the duality verifiers.
//!
//! The weight-2 pairing between decorated-tree components is fixed by a
//! frame of left combs over the three cyclic label cosets (1,2,3), (2,3,1),
//! (3,1,2); frame elements pair slot-diagonally with per-slot signs from
//! `SLOT_SIGNS`, and generator symbols pair against their duals with the
//! sign of their variant permutation (this realizes the sign-representation
//! twist while keeping dual generators in plain symmetries). The slot signs
//! are calibrated once by the classical identities dual(Com) = Lie,
//! dual(As) = As, dual(PreLie) = Perm and locked by tests.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::perm::Perm;
use crate::presentations::{relation_component, s_closure, Presentation};
use crate::scalar::Rational;
use crate::trees::{
    coefficient_vector, enumerate_basis, poly_from_vector, Node, Signature, Symmetry,
    TreeMonomial, TreePoly,
};
use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};
use num_traits::{One, Zero};

/// Per-slot signs of the weight-2 pairing on the binary arity-3 component,
/// in coset order (1,2,3), (2,3,1), (3,1,2). Calibrated by the classical
/// dual identities; see the module doc.
pub const SLOT_SIGNS: [i8; 3] = [1, 1, 1];

/// The generator correspondence of a dual pair: entry `i` is the generator
/// of the dual signature corresponding to generator `i` of the original.
#[derive(Debug, Clone)]
pub struct DualGeneratorMap {
    pub dual_sig: Signature,
    /// original generator index -> dual generator index (identity layout)
    pub gen_map: Vec<usize>,
}

/// Builds the dual signature: generators renamed `name_dual`, symmetric and
/// antisymmetric swapped (the sign twist in arity 2), free kept free with
/// the twist absorbed into the pairing signs. Colors are preserved.
pub fn dual_signature(sig: &Signature) -> Result<DualGeneratorMap> {
    if sig.max_arity() > 2 {
        let g = sig.symbols.iter().find(|s| s.arity > 2).unwrap();
        return Err(Error::UnsupportedArity { symbol: g.name.clone(), arity: g.arity, max: 2 });
    }
    let mut dual = Signature::new(&format!("{}_dual", sig.name));
    dual.colors = sig.colors.clone();
    let mut gen_map = Vec::with_capacity(sig.generators.len());
    for g in &sig.generators {
        let symmetry = match (g.arity, g.symmetry) {
            (1, _) => Symmetry::Free,
            (_, Symmetry::Symmetric) => Symmetry::Antisymmetric,
            (_, Symmetry::Antisymmetric) => Symmetry::Symmetric,
            (_, Symmetry::Free) => Symmetry::Free,
        };
        let name = format!("{}_dual", g.name);
        let idx = dual.add_generator_colored(&name, g.arity, symmetry, g.color)?;
        gen_map.push(idx);
    }
    Ok(DualGeneratorMap { dual_sig: dual, gen_map })
}

/// Pairing sign of a basis symbol against its dual: the sign of its variant
/// permutation (the sign-representation twist on the regular basis).
fn pair_sign(sig: &Signature, sym: usize) -> i8 {
    sig.symbols[sym].variant.sign()
}

/// Symbol of the dual signature aligned with a symbol of the original
/// (same generator index, same variant).
fn dual_symbol(sig: &Signature, map: &DualGeneratorMap, sym: usize) -> usize {
    let s = &sig.symbols[sym];
    let dual_gen = &map.dual_sig.generators[map.gen_map[s.gen]];
    dual_gen.symbol_start + s.variant.index()
}

/// The coset frame of the binary weight-2 arity-3 component: for each slot
/// `(a,b,c)` in {(1,2,3),(2,3,1),(3,1,2)} and decoration pair `(root u,
/// inner v)`, the canonicalization of `u(v(a,b),c)`, which is a signed
/// canonical monomial. The frame is a signed bijection onto the canonical
/// basis.
pub(crate) struct CosetFrame {
    pub basis: Vec<TreeMonomial>,
    pub binary_syms: Vec<usize>,
    /// frame index (slot, root u, inner v) -> (basis index, sign)
    pub to_basis: Vec<(usize, i8)>,
}

pub(crate) const COSETS: [[u8; 3]; 3] = [[1, 2, 3], [2, 3, 1], [3, 1, 2]];

impl CosetFrame {
    pub fn frame_index(&self, slot: usize, root_pos: usize, inner_pos: usize) -> usize {
        let d = self.binary_syms.len();
        (slot * d + root_pos) * d + inner_pos
    }

    /// Coordinates of an arity-3 weight-2 polynomial in the frame.
    pub fn coords(&self, sig: &Signature, f: &TreePoly) -> Result<Vector> {
        let v = coefficient_vector(sig, f, &self.basis)?;
        let d = self.binary_syms.len();
        let mut out = vec![Rational::zero(); 3 * d * d];
        for (fi, &(bi, sign)) in self.to_basis.iter().enumerate() {
            if !v[bi].is_zero() {
                out[fi] = v[bi].clone() * Rational::from_integer(sign.into());
            }
        }
        Ok(out)
    }
}

pub(crate) fn coset_frame(sig: &Signature) -> Result<CosetFrame> {
    let basis = enumerate_basis(sig, 3, 2);
    let binary_syms = sig.symbols_of_arity(2);
    let d = binary_syms.len();
    let mut to_basis = vec![(usize::MAX, 0i8); 3 * d * d];
    for (slot, coset) in COSETS.iter().enumerate() {
        for (ri, &root) in binary_syms.iter().enumerate() {
            for (ii, &inner) in binary_syms.iter().enumerate() {
                let raw = Node::op(
                    root,
                    vec![
                        Node::op(inner, vec![Node::Leaf(coset[0]), Node::Leaf(coset[1])]),
                        Node::Leaf(coset[2]),
                    ],
                );
                let (mono, sign) = TreeMonomial::from_raw(sig, &raw)?;
                let bi = basis.binary_search(&mono).map_err(|_| Error::Invalid {
                    detail: String::from("frame element missing from basis"),
                })?;
                let s: i8 = if sign == Rational::one() { 1 } else { -1 };
                let fi = (slot * d + ri) * d + ii;
                to_basis[fi] = (bi, s);
            }
        }
    }
    // signed bijection check
    let mut seen = vec![false; basis.len()];
    for &(bi, _) in &to_basis {
        if bi == usize::MAX || seen[bi] {
            return Err(Error::Invalid { detail: String::from("coset frame is not a bijection") });
        }
        seen[bi] = true;
    }
    Ok(CosetFrame { basis, binary_syms, to_basis })
}

/// The weight-2 pairing matrix between `T(M)^{(2)}(n)` and
/// `T(M^dual)^{(2)}(n)` in their canonical bases; nondegenerate with
/// entries 0 and +-1.
pub fn weight2_pairing(
    sig: &Signature,
    map: &DualGeneratorMap,
    n: u8,
) -> Result<Matrix> {
    if !(1..=3).contains(&n) {
        return Err(Error::Invalid { detail: format!("pairing defined for arities 1..=3, got {n}") });
    }
    let basis = enumerate_basis(sig, n, 2);
    let dual_basis = enumerate_basis(&map.dual_sig, n, 2);
    if basis.len() != dual_basis.len() {
        return Err(Error::Invalid { detail: String::from("dual component dimension mismatch") });
    }
    let mut p = Matrix::zeros(basis.len(), dual_basis.len());
    if n == 3 {
        let frame = coset_frame(sig)?;
        let dual_frame = coset_frame(&map.dual_sig)?;
        let d = frame.binary_syms.len();
        for slot in 0..3 {
            for ri in 0..d {
                for ii in 0..d {
                    let fi = frame.frame_index(slot, ri, ii);
                    let (bi, s1) = frame.to_basis[fi];
                    // the dual frame is indexed by the dual symbols in the
                    // same order (dual_symbol preserves positions)
                    let (bj, s2) = dual_frame.to_basis[fi];
                    let root_sign = pair_sign(sig, frame.binary_syms[ri]);
                    let inner_sign = pair_sign(sig, frame.binary_syms[ii]);
                    let total = SLOT_SIGNS[slot] * s1 * s2 * root_sign * inner_sign;
                    let cur = p.get(bi, bj).clone();
                    p.set(bi, bj, cur + Rational::from_integer(total.into()));
                }
            }
        }
    } else {
        // unary-unary (n = 1) and mixed unary-binary (n = 2) components
        // pair position-by-position: a monomial pairs with its symbol-wise
        // dual, with the product of the symbol pair signs.
        for (bi, mono) in basis.iter().enumerate() {
            let dual_syms: Vec<usize> =
                mono.preorder_symbols().iter().map(|&s| dual_symbol(sig, map, s)).collect();
            let dual_mono = mono.with_preorder_symbols(&map.dual_sig, &dual_syms)?;
            let bj = dual_basis.binary_search(&dual_mono).map_err(|_| Error::Invalid {
                detail: String::from("dual monomial missing from dual basis"),
            })?;
            let sign: i8 = mono
                .preorder_symbols()
                .iter()
                .map(|&s| pair_sign(sig, s))
                .product();
            p.set(bi, bj, Rational::from_integer(sign.into()));
        }
    }
    // nondegeneracy is structural; assert it in debug builds
    debug_assert_eq!(linalg::rref(&p).rank, basis.len());
    Ok(p)
}

/// Extracts a small set of orbit representatives spanning the same
/// S_n-closed span as the given vectors: candidates are scanned in
/// increasing support size and kept when they add new directions.
fn orbit_representatives(
    sig: &Signature,
    basis: &[TreeMonomial],
    rows: &[Vector],
) -> Result<Vec<TreePoly>> {
    if rows.is_empty() {
        return Ok(Vec::new());
    }
    let full_rank = linalg::rank(rows);
    let mut candidates: Vec<TreePoly> = rows.iter().map(|v| poly_from_vector(basis, v)).collect();
    // also scan the reversed-column echelon basis for shorter vectors
    let reversed: Vec<Vector> = rows.iter().map(|v| v.iter().rev().cloned().collect()).collect();
    for v in linalg::span_basis(&reversed) {
        let unrev: Vector = v.iter().rev().cloned().collect();
        candidates.push(poly_from_vector(basis, &unrev));
    }
    candidates.sort_by_key(|p| p.len());
    let n = basis.first().map(|m| m.arity()).unwrap_or(1);
    let mut reps: Vec<TreePoly> = Vec::new();
    let mut closed_rows: Vec<Vector> = Vec::new();
    for cand in candidates {
        if !closed_rows.is_empty() {
            let v = coefficient_vector(sig, &cand, basis)?;
            if linalg::span_member(&closed_rows, &v)? {
                continue;
            }
        }
        reps.push(cand.clone());
        for rho in Perm::all(n) {
            let t = crate::trees::act(sig, &cand, &rho)?;
            closed_rows.push(coefficient_vector(sig, &t, basis)?);
        }
        if linalg::rank(&closed_rows) == full_rank {
            break;
        }
    }
    Ok(reps)
}

fn require_unary_binary_quadratic(p: &Presentation) -> Result<()> {
    if !p.is_unary_binary() {
        let g = p.sig.symbols.iter().find(|s| s.arity > 2).unwrap();
        return Err(Error::UnsupportedArity { symbol: g.name.clone(), arity: g.arity, max: 2 });
    }
    if !p.is_quadratic() {
        return Err(Error::NotQuadratic {
            detail: format!("{} has a relation of weight != 2", p.sig.name),
        });
    }
    Ok(())
}

/// The Koszul dual presentation: dual generators with the twisted action,
/// relations the orthogonal complement of the closed relation span under
/// the weight-2 pairing, in every arity component with weight-2 monomials.
pub fn koszul_dual(p: &Presentation) -> Result<Presentation> {
    require_unary_binary_quadratic(p)?;
    let map = dual_signature(&p.sig)?;
    let mut out = Presentation::new(map.dual_sig.clone());
    for n in 1..=3u8 {
        let basis = enumerate_basis(&p.sig, n, 2);
        if basis.is_empty() {
            continue;
        }
        let (_, rows) = relation_component(p, n, 2)?;
        let pairing = weight2_pairing(&p.sig, &map, n)?;
        let complement = linalg::orthogonal_complement(&rows, &pairing)?;
        let dual_basis = enumerate_basis(&map.dual_sig, n, 2);
        let reps = orbit_representatives(&map.dual_sig, &dual_basis, &complement)?;
        for r in reps {
            out.add_relation(r)?;
        }
    }
    Ok(out)
}

/// A generator correspondence for isomorphism checking: generator of `p` ->
/// (generator of `q`, scalar, flip). `flip` composes the identification
/// with the transposition variant (only meaningful for free binary
/// generators).
#[derive(Debug, Clone)]
pub struct GenMap {
    pub entries: Vec<(usize, Rational, bool)>,
}

impl GenMap {
    pub fn identity(p: &Presentation) -> GenMap {
        GenMap {
            entries: (0..p.sig.generators.len()).map(|g| (g, Rational::one(), false)).collect(),
        }
    }
}

/// Maps a polynomial along a generator correspondence: symbols move to the
/// corresponding generator (with variant preserved or composed with the
/// transposition when flipped), coefficients pick up generator scalars.
pub fn map_poly(
    src: &Signature,
    dst: &Signature,
    gm: &GenMap,
    f: &TreePoly,
) -> Result<TreePoly> {
    let mut out = TreePoly::zero();
    for (t, c) in f.iter() {
        let mut coeff = c.clone();
        let syms = t.preorder_symbols();
        let mut mapped = Vec::with_capacity(syms.len());
        for s in syms {
            let sym = &src.symbols[s];
            let (tgt_gen, scale, flip) = &gm.entries[sym.gen];
            coeff *= scale;
            let dst_gen = &dst.generators[*tgt_gen];
            if dst_gen.arity != sym.arity {
                return Err(Error::Invalid { detail: String::from("map does not preserve arity") });
            }
            let variant = if *flip && sym.arity == 2 {
                let swap = Perm::parse_cycles("(12)", 2)?;
                swap.compose(&sym.variant)
            } else {
                sym.variant.clone()
            };
            if dst_gen.symbol_count == 1 {
                if !variant.is_identity() {
                    return Err(Error::Invalid {
                        detail: String::from("variant maps outside the target generator basis"),
                    });
                }
                mapped.push(dst_gen.symbol_start);
            } else {
                mapped.push(dst_gen.symbol_start + variant.index());
            }
        }
        let mono = t.with_preorder_symbols(dst, &mapped)?;
        out.add_term(mono, coeff);
    }
    Ok(out)
}

/// True iff the mapped relation spans of `p` equal the relation spans of
/// `q` in every (arity, weight) component where either has relations. The
/// map must be an arity-preserving generator bijection.
pub fn presentations_isomorphic(p: &Presentation, q: &Presentation, gm: &GenMap) -> Result<bool> {
    if gm.entries.len() != p.sig.generators.len() {
        return Err(Error::Invalid { detail: String::from("map size mismatch") });
    }
    let mut seen = vec![false; q.sig.generators.len()];
    if p.sig.generators.len() != q.sig.generators.len() {
        return Err(Error::Invalid { detail: String::from("generator counts differ") });
    }
    for (pg, (qg, _, _)) in gm.entries.iter().enumerate() {
        if p.sig.generators[pg].arity != q.sig.generators[*qg].arity || seen[*qg] {
            return Err(Error::Invalid { detail: String::from("map is not an arity bijection") });
        }
        seen[*qg] = true;
    }
    let mut keys = p.relation_keys();
    for k in q.relation_keys() {
        if !keys.contains(&k) {
            keys.push(k);
        }
    }
    for (n, m) in keys {
        let rels_p: Vec<TreePoly> = p.relations_at(n, m).into_iter().cloned().collect();
        let closed = s_closure(&p.sig, &rels_p)?;
        let basis_q = enumerate_basis(&q.sig, n, m);
        let rows_p: Vec<Vector> = closed
            .iter()
            .map(|r| map_poly(&p.sig, &q.sig, gm, r).and_then(|f| coefficient_vector(&q.sig, &f, &basis_q)))
            .collect::<Result<Vec<_>>>()?;
        let (_, rows_q) = relation_component(q, n, m)?;
        if !linalg::span_equal(&rows_p, &rows_q)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Searches the small space of natural generator correspondences (arity-
/// and dimension-preserving bijections, scalars +-1, optional flips on free
/// binary generators) for an isomorphism witness.
pub fn find_isomorphism(p: &Presentation, q: &Presentation) -> Result<Option<GenMap>> {
    if p.sig.generators.len() != q.sig.generators.len() {
        return Ok(None);
    }
    let k = p.sig.generators.len();
    if k > 4 {
        return Err(Error::ResourceGuard { detail: format!("{k} generators in iso search") });
    }
    // enumerate bijections preserving (arity, symbol_count)
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    fn bijections(
        p: &Presentation,
        q: &Presentation,
        current: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let i = current.len();
        if i == p.sig.generators.len() {
            out.push(current.clone());
            return;
        }
        for j in 0..q.sig.generators.len() {
            if used[j] {
                continue;
            }
            let a = &p.sig.generators[i];
            let b = &q.sig.generators[j];
            if a.arity == b.arity && a.symbol_count == b.symbol_count && a.color == b.color {
                used[j] = true;
                current.push(j);
                bijections(p, q, current, used, out);
                current.pop();
                used[j] = false;
            }
        }
    }
    let mut used = vec![false; k];
    bijections(p, q, &mut current, &mut used, &mut perms);
    for bij in perms {
        // scalar/flip assignments per generator
        let options: Vec<Vec<(Rational, bool)>> = (0..k)
            .map(|i| {
                let free = p.sig.generators[i].symbol_count > 1;
                let mut opts = vec![(Rational::one(), false), (-Rational::one(), false)];
                if free {
                    opts.push((Rational::one(), true));
                    opts.push((-Rational::one(), true));
                }
                opts
            })
            .collect();
        let mut idx = vec![0usize; k];
        loop {
            let gm = GenMap {
                entries: (0..k).map(|i| (bij[i], options[i][idx[i]].0.clone(), options[i][idx[i]].1)).collect(),
            };
            if presentations_isomorphic(p, q, &gm)? {
                return Ok(Some(gm));
            }
            let mut pos = k;
            let mut done = true;
            while pos > 0 {
                pos -= 1;
                idx[pos] += 1;
                if idx[pos] < options[pos].len() {
                    done = false;
                    break;
                }
                idx[pos] = 0;
            }
            if done {
                break;
            }
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Duality verifiers
// ---------------------------------------------------------------------------

use crate::compat::{
    leveled_matching, linear_compat, matching_compat_unchecked, total_compat, Report, SigmaChoice,
};

/// Both directions of the linear/total duality: dual(Lin p) = Tot(dual p)
/// and dual(Tot p) = Lin(dual p), as relation spans under the identity
/// identification of colored dual generators.
pub fn verify_lin_tot_duality(p: &Presentation, colors: &[String]) -> Result<Report> {
    let mut report = Report::new(format!("linear/total duality for {}", p.sig.name));
    let dual = koszul_dual(p)?;

    let lin = linear_compat(p, colors)?;
    let dual_of_lin = koszul_dual(&lin)?;
    let tot_of_dual = total_compat(&dual, colors)?;
    let gm = GenMap::identity(&dual_of_lin);
    let ok1 = presentations_isomorphic(&dual_of_lin, &tot_of_dual, &gm)?;
    report.push("dual(Lin p) = Tot(dual p)", ok1, String::new());

    let tot = total_compat(p, colors)?;
    let dual_of_tot = koszul_dual(&tot)?;
    let lin_of_dual = linear_compat(&dual, colors)?;
    let gm = GenMap::identity(&dual_of_tot);
    let ok2 = presentations_isomorphic(&dual_of_tot, &lin_of_dual, &gm)?;
    report.push("dual(Tot p) = Lin(dual p)", ok2, String::new());
    Ok(report)
}

/// The leveled-matching self-duality: dual(LMT p) = LMT(dual p).
pub fn verify_lmt_self_dual(p: &Presentation, colors: &[String]) -> Result<Report> {
    let mut report = Report::new(format!("LMT self-duality for {}", p.sig.name));
    let lmt = leveled_matching(p, colors)?;
    let dual_of_lmt = koszul_dual(&lmt)?;
    let lmt_of_dual = leveled_matching(&koszul_dual(p)?, colors)?;
    let gm = GenMap::identity(&dual_of_lmt);
    let ok = presentations_isomorphic(&dual_of_lmt, &lmt_of_dual, &gm)?;
    report.push("dual(LMT p) = LMT(dual p)", ok, String::new());
    Ok(report)
}

/// Matching duality: computes dual(MT^sigma(p)) and searches the bounded
/// sigma space of dual(p) for a matching family isomorphic to it; for the
/// identity sigma the found tuple must be the identity (self-duality of the
/// leveled matching).
pub fn verify_matching_duality(
    p: &Presentation,
    colors: &[String],
    sigma: &SigmaChoice,
    search_limit: usize,
) -> Result<(Report, Option<SigmaChoice>)> {
    let mut report = Report::new(format!("matching duality for {}", p.sig.name));
    let mt = matching_compat_unchecked(p, colors, sigma)?;
    let dual_of_mt = koszul_dual(&mt)?;
    let dual = koszul_dual(p)?;
    let candidates = SigmaChoice::enumerate(&dual, colors.len(), search_limit)?;
    let mut found: Option<SigmaChoice> = None;
    for tau in candidates {
        if !crate::compat::matching_admissible(&dual, colors, &tau)? {
            continue;
        }
        let mt_dual = matching_compat_unchecked(&dual, colors, &tau)?;
        let gm = GenMap::identity(&dual_of_mt);
        if presentations_isomorphic(&dual_of_mt, &mt_dual, &gm)? {
            found = Some(tau);
            break;
        }
    }
    report.push(
        "dual of the matching operad is a matching operad of the dual",
        found.is_some(),
        String::new(),
    );
    if sigma
        .entries
        .iter()
        .all(|per_rel| per_rel.iter().all(|tuple| tuple.iter().all(|p| p.is_identity())))
    {
        if let Some(tau) = &found {
            let tau_lev = tau
                .entries
                .iter()
                .all(|per_rel| per_rel.iter().all(|tuple| tuple.iter().all(|p| p.is_identity())));
            report.push("identity sigma dualizes to identity tau", tau_lev, String::new());
        }
    }
    Ok((report, found))
}

/// Rank complementarity and involution checks for one presentation.
pub fn verify_dual_involution(p: &Presentation) -> Result<Report> {
    let mut report = Report::new(format!("dual involution for {}", p.sig.name));
    let dual = koszul_dual(p)?;
    let double = koszul_dual(&dual)?;
    let gm = GenMap::identity(&double);
    let ok = presentations_isomorphic(&double, p, &gm)?;
    report.push("(p!)! = p", ok, String::new());
    for n in 1..=3u8 {
        let basis = enumerate_basis(&p.sig, n, 2);
        if basis.is_empty() {
            continue;
        }
        let (_, rows) = relation_component(p, n, 2)?;
        let (_, dual_rows) = relation_component(&dual, n, 2)?;
        let ok = linalg::rank(&rows) + linalg::rank(&dual_rows) == basis.len();
        report.push(format!("rank complementarity at arity {n}"), ok, String::new());
    }
    Ok(report)
}
