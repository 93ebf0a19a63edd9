//! Operadic quasipolarization: lifts of decorated trees by an ordered color
//! set, quasipolarizations of relations by type, and restitution. The `poly`
//! submodule carries the same constructions for ordinary homogeneous
//! polynomials (with ordered monomials, so foliations can tell variable
//! orders apart).

use crate::error::{Error, Result};
use crate::scalar::{multinomial, Rational};
use crate::trees::{Coloring, TreeMonomial, TreePoly};
use alloc::vec::Vec;
use alloc::{format, vec};

/// A weak composition of `m` over the ordered color set: per-color
/// multiplicities summing to `m`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct WeakComposition {
    counts: Vec<u32>,
}

impl WeakComposition {
    pub fn new(counts: Vec<u32>) -> Self {
        WeakComposition { counts }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn weight(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn colors(&self) -> usize {
        self.counts.len()
    }

    /// Multinomial coefficient `m! / prod c_i!` — the number of lifts of any
    /// weight-`m` monomial of this type.
    pub fn multinomial(&self) -> Rational {
        multinomial(&self.counts)
    }

    /// All weak compositions of `m` into `k` parts, in lexicographically
    /// increasing order of the count vectors.
    pub fn all(m: u32, k: usize) -> Vec<WeakComposition> {
        let mut out = Vec::new();
        let mut current = vec![0u32; k];
        fn rec(m: u32, k: usize, idx: usize, current: &mut Vec<u32>, out: &mut Vec<WeakComposition>) {
            if idx == k - 1 {
                current[idx] = m;
                out.push(WeakComposition { counts: current.clone() });
                return;
            }
            for v in 0..=m {
                current[idx] = v;
                rec(m - v, k, idx + 1, current, out);
            }
        }
        if k == 0 {
            return out;
        }
        rec(m, k, 0, &mut current, &mut out);
        out
    }

    pub fn label(&self) -> alloc::string::String {
        let parts: Vec<alloc::string::String> =
            self.counts.iter().map(|c| format!("{c}")).collect();
        format!("({})", parts.join(","))
    }
}

/// All color words of length `m` whose multiset of colors equals `c`, in
/// lexicographic order (colors compared by their index in the ordered set).
pub fn color_words(c: &WeakComposition) -> Vec<Vec<u8>> {
    let m = c.weight() as usize;
    let k = c.colors();
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(m);
    let mut remaining = c.counts.clone();
    fn rec(
        m: usize,
        k: usize,
        word: &mut Vec<u8>,
        remaining: &mut Vec<u32>,
        out: &mut Vec<Vec<u8>>,
    ) {
        if word.len() == m {
            out.push(word.clone());
            return;
        }
        for color in 0..k {
            if remaining[color] > 0 {
                remaining[color] -= 1;
                word.push(color as u8);
                rec(m, k, word, remaining, out);
                word.pop();
                remaining[color] += 1;
            }
        }
    }
    rec(m, k, &mut word, &mut remaining, &mut out);
    out
}

/// Recolors a base monomial along a color word indexed by the preorder
/// traversal of its internal vertices.
pub fn lift_by_word(
    coloring: &Coloring,
    t: &TreeMonomial,
    word: &[u8],
) -> Result<TreeMonomial> {
    let syms = t.preorder_symbols();
    if syms.len() != word.len() {
        return Err(Error::WeightMismatch { expected: syms.len() as u32, got: word.len() as u32 });
    }
    let colored: Vec<usize> = syms
        .iter()
        .zip(word.iter())
        .map(|(&s, &w)| coloring.colored_sym[s][w as usize])
        .collect();
    t.with_preorder_symbols(&coloring.colored, &colored)
}

/// All lifts of `t` of type `c`, ordered lexicographically by the color word
/// read along the preorder traversal. The count is the multinomial
/// coefficient of `c`.
pub fn lifts_of_type(
    coloring: &Coloring,
    t: &TreeMonomial,
    c: &WeakComposition,
) -> Result<Vec<TreeMonomial>> {
    if t.weight() != c.weight() {
        return Err(Error::WeightMismatch { expected: t.weight(), got: c.weight() });
    }
    color_words(c).iter().map(|w| lift_by_word(coloring, t, w)).collect()
}

/// The type of a lifted (colored) monomial: its color multiplicity vector.
pub fn type_of(coloring: &Coloring, t: &TreeMonomial) -> WeakComposition {
    let mut counts = vec![0u32; coloring.colored.colors.len()];
    for s in t.preorder_symbols() {
        let color = coloring.colored.symbols[s].color.expect("colored symbol");
        counts[color as usize] += 1;
    }
    WeakComposition::new(counts)
}

/// The quasipolarization of `f` of type `c`: each monomial replaced by the
/// sum of its lifts of type `c`.
pub fn quasipolarize(coloring: &Coloring, f: &TreePoly, c: &WeakComposition) -> Result<TreePoly> {
    let Some(weight) = f.weight() else {
        return Ok(TreePoly::zero());
    };
    if weight != c.weight() {
        return Err(Error::WeightMismatch { expected: weight, got: c.weight() });
    }
    let mut out = TreePoly::zero();
    for (t, coeff) in f.iter() {
        for lift in lifts_of_type(coloring, t, c)? {
            out.add_term(lift, coeff.clone());
        }
    }
    Ok(out)
}

/// All quasipolarizations of `f`, keyed by type in increasing type order.
pub fn quasipolarize_all(
    coloring: &Coloring,
    f: &TreePoly,
) -> Result<Vec<(WeakComposition, TreePoly)>> {
    let weight = f.weight().unwrap_or(0);
    WeakComposition::all(weight, coloring.colored.colors.len())
        .into_iter()
        .map(|c| quasipolarize(coloring, f, &c).map(|p| (c, p)))
        .collect()
}

/// Collapses every colored generator back to its base generator. Recoloring
/// never reorders children, so canonicity is preserved monomial by monomial.
pub fn restitute(coloring: &Coloring, g: &TreePoly) -> Result<TreePoly> {
    use crate::trees::Node;
    fn walk(node: &Node, syms: &[usize], pos: &mut usize) -> Node {
        match node {
            Node::Leaf(l) => Node::Leaf(*l),
            Node::Op { kids, .. } => {
                let sym = syms[*pos];
                *pos += 1;
                Node::Op { sym, kids: kids.iter().map(|k| walk(k, syms, pos)).collect() }
            }
        }
    }
    let mut out = TreePoly::zero();
    for (t, coeff) in g.iter() {
        let base: Vec<usize> =
            t.preorder_symbols().iter().map(|&s| coloring.base_sym[s]).collect();
        let mut pos = 0;
        let root = walk(t.root(), &base, &mut pos);
        out.add_term(TreeMonomial::from_canonical(t.arity(), root), coeff.clone());
    }
    Ok(out)
}

pub mod poly {
    //! Polarization of ordinary homogeneous polynomials, with ordered
    //! (word) monomials so that foliations distinguish variable orders, and
    //! the classification of foliations and unified foliations.

    use crate::error::{Error, Result};
    use crate::linalg::{self, Vector};
    use crate::perm::Perm;
    use crate::scalar::Rational;
    use alloc::collections::BTreeMap;
    use alloc::string::String;
    use alloc::vec::Vec;
    use alloc::{format, vec};
    use num_traits::{One, Signed, Zero};

    use super::WeakComposition;

    /// A decorated variable `x_var^(copy)`; `copy == 0` means undecorated.
    #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
    pub struct DecVar {
        pub var: u8,
        pub copy: u8,
    }

    /// An ordered monomial: a word of decorated variables.
    pub type Word = Vec<DecVar>;

    /// A homogeneous polynomial with ordered monomials.
    #[derive(Debug, Clone, PartialEq, Eq, Default)]
    pub struct OrderedPoly {
        terms: BTreeMap<Word, Rational>,
    }

    impl OrderedPoly {
        pub fn zero() -> Self {
            OrderedPoly { terms: BTreeMap::new() }
        }

        /// Builds a commutative polynomial: variable lists are sorted into
        /// canonical word order and copies are cleared.
        pub fn commutative(terms: &[(i64, &[u8])]) -> Self {
            let mut p = OrderedPoly::zero();
            for (coeff, vars) in terms {
                let mut word: Word = vars.iter().map(|&v| DecVar { var: v, copy: 0 }).collect();
                word.sort();
                p.add_term(word, Rational::from_integer((*coeff).into()));
            }
            p
        }

        pub fn add_term(&mut self, w: Word, c: Rational) {
            if c.is_zero() {
                return;
            }
            let entry = self.terms.entry(w);
            match entry {
                alloc::collections::btree_map::Entry::Vacant(v) => {
                    v.insert(c);
                }
                alloc::collections::btree_map::Entry::Occupied(mut o) => {
                    let sum = o.get().clone() + c;
                    if sum.is_zero() {
                        o.remove();
                    } else {
                        *o.get_mut() = sum;
                    }
                }
            }
        }

        pub fn add(&self, other: &OrderedPoly) -> OrderedPoly {
            let mut out = self.clone();
            for (w, c) in &other.terms {
                out.add_term(w.clone(), c.clone());
            }
            out
        }

        pub fn sub(&self, other: &OrderedPoly) -> OrderedPoly {
            let mut out = self.clone();
            for (w, c) in &other.terms {
                out.add_term(w.clone(), -c.clone());
            }
            out
        }

        pub fn scale(&self, k: &Rational) -> OrderedPoly {
            if k.is_zero() {
                return OrderedPoly::zero();
            }
            OrderedPoly { terms: self.terms.iter().map(|(w, c)| (w.clone(), c.clone() * k)).collect() }
        }

        pub fn is_zero(&self) -> bool {
            self.terms.is_empty()
        }

        pub fn len(&self) -> usize {
            self.terms.len()
        }

        pub fn is_empty(&self) -> bool {
            self.terms.is_empty()
        }

        pub fn degree(&self) -> Option<usize> {
            self.terms.keys().next().map(|w| w.len())
        }

        pub fn iter(&self) -> impl Iterator<Item = (&Word, &Rational)> {
            self.terms.iter()
        }

        pub fn coeff(&self, w: &Word) -> Rational {
            self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
        }

        /// Collapses copies and reorders each word (the commutative view).
        pub fn restitute(&self) -> OrderedPoly {
            let mut out = OrderedPoly::zero();
            for (w, c) in &self.terms {
                let mut word: Word = w.iter().map(|d| DecVar { var: d.var, copy: 0 }).collect();
                word.sort();
                out.add_term(word, c.clone());
            }
            out
        }

        pub fn render(&self) -> String {
            if self.terms.is_empty() {
                return String::from("0");
            }
            let mut out = String::new();
            for (i, (w, c)) in self.terms.iter().enumerate() {
                let mono: Vec<String> = w
                    .iter()
                    .map(|d| {
                        if d.copy == 0 {
                            format!("x{}", d.var)
                        } else {
                            format!("x{}^({})", d.var, d.copy)
                        }
                    })
                    .collect();
                let mono = mono.join("*");
                let (sign, mag) = if c.is_negative() { ("-", -c.clone()) } else { ("+", c.clone()) };
                let coeff = if mag.is_one() { String::new() } else { format!("{mag}*") };
                if i == 0 {
                    if sign == "-" {
                        out.push('-');
                    }
                    out.push_str(&format!("{coeff}{mono}"));
                } else {
                    out.push_str(&format!(" {sign} {coeff}{mono}"));
                }
            }
            out
        }
    }

    /// Copy-assignment words of a monomial of degree `m` for type `c`
    /// (copies are 1-based), in lexicographic order.
    fn copy_words(c: &WeakComposition) -> Vec<Vec<u8>> {
        super::color_words(c)
            .into_iter()
            .map(|w| w.into_iter().map(|x| x + 1).collect())
            .collect()
    }

    /// The lifts of a single ordered monomial for type `c`: position `j` of
    /// the word receives the copy index of the assignment word.
    pub fn monomial_lifts(word: &Word, c: &WeakComposition) -> Result<Vec<Word>> {
        if word.len() as u32 != c.weight() {
            return Err(Error::WeightMismatch { expected: word.len() as u32, got: c.weight() });
        }
        Ok(copy_words(c)
            .into_iter()
            .map(|assign| {
                word.iter()
                    .zip(assign.iter())
                    .map(|(d, &copy)| DecVar { var: d.var, copy })
                    .collect()
            })
            .collect())
    }

    /// Quasipolarization of type `c`: the coefficient of `prod lambda^c` in
    /// `f(lambda_1 x^(1) + ... + lambda_k x^(k))`, with ordered monomials
    /// kept distinct.
    pub fn quasipolarize(f: &OrderedPoly, c: &WeakComposition) -> Result<OrderedPoly> {
        let Some(degree) = f.degree() else {
            return Ok(OrderedPoly::zero());
        };
        if degree as u32 != c.weight() {
            return Err(Error::WeightMismatch { expected: degree as u32, got: c.weight() });
        }
        let mut out = OrderedPoly::zero();
        for (w, coeff) in f.iter() {
            for lift in monomial_lifts(w, c)? {
                out.add_term(lift, coeff.clone());
            }
        }
        Ok(out)
    }

    /// A foliation: `multinomial(c)` polynomials, each restituting to `f`.
    pub type Foliation = Vec<OrderedPoly>;

    fn support_and_lifts(
        f: &OrderedPoly,
        c: &WeakComposition,
    ) -> Result<(Vec<Rational>, Vec<Vec<Word>>, usize)> {
        let beta_rat = c.multinomial();
        let beta = beta_rat
            .to_integer()
            .try_into()
            .map_err(|_| Error::ResourceGuard { detail: String::from("multinomial too large") })?;
        let mut coeffs = Vec::new();
        let mut lifts = Vec::new();
        for (w, coeff) in f.iter() {
            coeffs.push(coeff.clone());
            lifts.push(monomial_lifts(w, c)?);
        }
        Ok((coeffs, lifts, beta))
    }

    /// The foliation of `f_c` with respect to a permutation tuple: column 0
    /// (the first monomial in word order) keeps the standard lift order and
    /// column `i >= 1` is permuted by `sigma[i-1]`.
    pub fn foliation_with(
        f: &OrderedPoly,
        c: &WeakComposition,
        sigma: &[Perm],
    ) -> Result<Foliation> {
        let (coeffs, lifts, beta) = support_and_lifts(f, c)?;
        let s = coeffs.len().saturating_sub(1);
        if sigma.len() != s {
            return Err(Error::MalformedSigma {
                detail: format!("expected {s} permutations, got {}", sigma.len()),
            });
        }
        for p in sigma {
            if p.degree() as usize != beta {
                return Err(Error::MalformedSigma {
                    detail: format!("permutation degree {} != {beta}", p.degree()),
                });
            }
        }
        let mut parts = Vec::with_capacity(beta);
        for j in 0..beta {
            let mut part = OrderedPoly::zero();
            for (i, coeff) in coeffs.iter().enumerate() {
                let jj = if i == 0 { j } else { sigma[i - 1].apply(j as u8 + 1) as usize - 1 };
                part.add_term(lifts[i][jj].clone(), coeff.clone());
            }
            parts.push(part);
        }
        Ok(parts)
    }

    /// All `(beta!)^s` foliations of `f_c`, indexed by permutation tuples in
    /// lexicographic order of `Perm::all(beta)` indices.
    pub fn foliations(f: &OrderedPoly, c: &WeakComposition) -> Result<Vec<Foliation>> {
        let (coeffs, _, beta) = support_and_lifts(f, c)?;
        let s = coeffs.len().saturating_sub(1);
        let perms = Perm::all(beta as u8);
        let total = perms.len().checked_pow(s as u32).ok_or(Error::ResourceGuard {
            detail: String::from("too many foliations"),
        })?;
        if total > 100_000 {
            return Err(Error::ResourceGuard {
                detail: format!("{total} foliations requested"),
            });
        }
        let mut out = Vec::with_capacity(total);
        let mut tuple = vec![0usize; s];
        loop {
            let sigma: Vec<Perm> = tuple.iter().map(|&i| perms[i].clone()).collect();
            out.push(foliation_with(f, c, &sigma)?);
            // increment the mixed-radix tuple
            let mut idx = s;
            loop {
                if idx == 0 {
                    return Ok(out);
                }
                idx -= 1;
                tuple[idx] += 1;
                if tuple[idx] < perms.len() {
                    break;
                }
                tuple[idx] = 0;
            }
        }
    }

    /// The unified foliation: one foliation (the standard one) plus all
    /// difference relations between lifts of each monomial. The span is
    /// independent of which foliation is chosen.
    pub fn unified_foliation(
        f: &OrderedPoly,
        c: &WeakComposition,
    ) -> Result<(Foliation, Vec<OrderedPoly>)> {
        let (coeffs, lifts, beta) = support_and_lifts(f, c)?;
        let s = coeffs.len().saturating_sub(1);
        let standard = foliation_with(f, c, &vec![Perm::identity(beta as u8); s])?;
        let mut diffs = Vec::new();
        for lift_row in &lifts {
            for j in 0..beta {
                for jj in (j + 1)..beta {
                    let mut d = OrderedPoly::zero();
                    d.add_term(lift_row[j].clone(), Rational::one());
                    d.add_term(lift_row[jj].clone(), -Rational::one());
                    if !d.is_zero() {
                        diffs.push(d);
                    }
                }
            }
        }
        Ok((standard, diffs))
    }

    /// Coefficient vectors of a family of ordered polynomials over their
    /// joint word basis (for span comparisons).
    pub fn to_vectors(polys: &[&OrderedPoly]) -> (Vec<Word>, Vec<Vector>) {
        let mut words: Vec<Word> = Vec::new();
        for p in polys {
            for (w, _) in p.iter() {
                if !words.contains(w) {
                    words.push(w.clone());
                }
            }
        }
        words.sort();
        let vectors = polys
            .iter()
            .map(|p| words.iter().map(|w| p.coeff(w)).collect::<Vector>())
            .collect();
        (words, vectors)
    }

    /// Span equality of two families of ordered polynomials.
    pub fn spans_equal(a: &[OrderedPoly], b: &[OrderedPoly]) -> Result<bool> {
        let all: Vec<&OrderedPoly> = a.iter().chain(b.iter()).collect();
        let (_, vectors) = to_vectors(&all);
        let (va, vb) = vectors.split_at(a.len());
        linalg::span_equal(va, vb)
    }
}
