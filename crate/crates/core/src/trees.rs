//! Decorated shuffle-tree monomials and polynomials.
//!
//! Monomials are planar rooted trees whose internal vertices carry basis
//! symbols of an S-module and whose leaves are labeled bijectively by
//! `1..=n`, kept in shuffle canonical form: at every vertex the children are
//! ordered by strictly increasing minimal leaf label. Reordering children is
//! paid for through the symmetric-group action on the decorating symbol,
//! which here is always a signed permutation of the symbol basis (generators
//! without symmetry are stored as their regular-representation orbit).

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::perm::Perm;
use crate::scalar::Rational;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};
use num_traits::Zero;

/// Declared symmetry of a generator in the presentation DSL.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
    /// No declared symmetry; the generator spans its regular representation.
    Free,
}

/// A declared generator. A free generator of arity `k` owns `k!` basis
/// symbols (its variants `g · tau`); a symmetric or antisymmetric generator
/// owns a single symbol.
#[derive(Debug, Clone)]
pub struct GenDecl {
    pub name: String,
    pub arity: u8,
    pub symmetry: Symmetry,
    pub color: Option<u8>,
    pub symbol_start: usize,
    pub symbol_count: usize,
}

/// One basis symbol of the S-module. `action[i]` is the image of this symbol
/// under the permutation `Perm::all(arity)[i]`, as a signed symbol.
#[derive(Debug, Clone)]
pub struct Symbol {
    pub name: String,
    pub arity: u8,
    pub gen: usize,
    pub variant: Perm,
    pub color: Option<u8>,
    pub action: Vec<(usize, i8)>,
}

/// An ordered collection of generators, their basis symbols, and an optional
/// ordered color set. Symbol order (declaration order, variants inside a
/// generator, colors appended base-major) is the decoration order used by
/// the deterministic monomial order.
#[derive(Debug, Clone)]
pub struct Signature {
    pub name: String,
    pub colors: Vec<String>,
    pub generators: Vec<GenDecl>,
    pub symbols: Vec<Symbol>,
}

pub const MAX_GEN_ARITY: u8 = 3;

impl Signature {
    pub fn new(name: &str) -> Self {
        Signature {
            name: name.to_string(),
            colors: Vec::new(),
            generators: Vec::new(),
            symbols: Vec::new(),
        }
    }

    /// Declares a generator and expands its symbol basis. Arity is limited
    /// to `MAX_GEN_ARITY`; unary generators are stored as `Free` since all
    /// symmetries coincide in arity 1.
    pub fn add_generator(&mut self, name: &str, arity: u8, symmetry: Symmetry) -> Result<usize> {
        self.add_generator_colored(name, arity, symmetry, None)
    }

    pub fn add_generator_colored(
        &mut self,
        name: &str,
        arity: u8,
        symmetry: Symmetry,
        color: Option<u8>,
    ) -> Result<usize> {
        if arity == 0 || arity > MAX_GEN_ARITY {
            return Err(Error::UnsupportedArity { symbol: name.to_string(), arity, max: MAX_GEN_ARITY });
        }
        if self.generators.iter().any(|g| g.name == name && g.color == color) {
            return Err(Error::Invalid { detail: format!("duplicate generator {name}") });
        }
        let symmetry = if arity == 1 { Symmetry::Free } else { symmetry };
        let gen_idx = self.generators.len();
        let symbol_start = self.symbols.len();
        let perms = Perm::all(arity);
        let variants: Vec<Perm> = match symmetry {
            Symmetry::Free => perms.clone(),
            _ => vec![Perm::identity(arity)],
        };
        let color_suffix = match color {
            Some(c) => format!("@{}", self.colors[c as usize]),
            None => String::new(),
        };
        for tau in &variants {
            let vname = if tau.is_identity() {
                format!("{name}{color_suffix}")
            } else {
                format!("{name}_p{}{color_suffix}", tau.index())
            };
            let action: Vec<(usize, i8)> = perms
                .iter()
                .map(|sigma| match symmetry {
                    Symmetry::Symmetric => (symbol_start, 1),
                    Symmetry::Antisymmetric => (symbol_start, sigma.sign()),
                    Symmetry::Free => {
                        let target = tau.compose(sigma);
                        (symbol_start + target.index(), 1)
                    }
                })
                .collect();
            self.symbols.push(Symbol {
                name: vname,
                arity,
                gen: gen_idx,
                variant: tau.clone(),
                color,
                action,
            });
        }
        self.generators.push(GenDecl {
            name: name.to_string(),
            arity,
            symmetry,
            color,
            symbol_start,
            symbol_count: variants.len(),
        });
        Ok(gen_idx)
    }

    pub fn symbol(&self, idx: usize) -> &Symbol {
        &self.symbols[idx]
    }

    /// Image of a symbol under `sigma` as `(symbol, sign)`.
    pub fn act_symbol(&self, sym: usize, sigma: &Perm) -> (usize, i8) {
        self.symbols[sym].action[sigma.index()]
    }

    pub fn symbols_of_arity(&self, arity: u8) -> Vec<usize> {
        (0..self.symbols.len()).filter(|&i| self.symbols[i].arity == arity).collect()
    }

    /// Dimension of the S-module in the given arity (number of basis symbols).
    pub fn dim(&self, arity: u8) -> usize {
        self.symbols_of_arity(arity).len()
    }

    pub fn max_arity(&self) -> u8 {
        self.symbols.iter().map(|s| s.arity).max().unwrap_or(0)
    }

    pub fn has_unary(&self) -> bool {
        self.symbols.iter().any(|s| s.arity == 1)
    }

    /// Display name of a generator, including its color suffix.
    pub fn gen_display(&self, gen: usize) -> String {
        let g = &self.generators[gen];
        match g.color {
            Some(c) => format!("{}@{}", g.name, self.colors[c as usize]),
            None => g.name.clone(),
        }
    }

    pub fn find_generator(&self, name: &str, color: Option<u8>) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name && g.color == color)
    }

    pub fn find_color(&self, name: &str) -> Option<u8> {
        self.colors.iter().position(|c| c == name).map(|i| i as u8)
    }

    /// Identity-variant symbol of a generator.
    pub fn gen_symbol(&self, gen: usize) -> usize {
        self.generators[gen].symbol_start
    }

    /// Renders a monomial in the canonical text form
    /// `name(@color)?(child, ...)`. Non-identity variants of free generators
    /// are printed as the base generator with permuted children, so text
    /// never mentions internal variant names and re-parsing canonicalizes
    /// back to the same monomial.
    pub fn render_monomial(&self, m: &TreeMonomial) -> String {
        self.render_node(&m.root)
    }

    fn render_node(&self, node: &Node) -> String {
        match node {
            Node::Leaf(l) => format!("{l}"),
            Node::Op { sym, kids } => {
                let s = &self.symbols[*sym];
                let head = self.gen_display(s.gen);
                let inv = s.variant.inverse();
                let parts: Vec<String> = (1..=kids.len() as u8)
                    .map(|i| self.render_node(&kids[inv.apply(i) as usize - 1]))
                    .collect();
                format!("{head}({})", parts.join(","))
            }
        }
    }
}

/// Maps a base signature to its colored copy and back.
#[derive(Debug, Clone)]
pub struct Coloring {
    pub colored: Signature,
    /// colored symbol index -> base symbol index
    pub base_sym: Vec<usize>,
    /// base symbol index, color -> colored symbol index
    pub colored_sym: Vec<Vec<usize>>,
}

/// Builds the signature with one copy of every generator per color,
/// base-major: all colors of generator 0, then of generator 1, and so on.
pub fn colorize(base: &Signature, colors: &[String]) -> Coloring {
    let mut sig = Signature::new(&base.name);
    sig.colors = colors.to_vec();
    let mut base_sym = Vec::new();
    let mut colored_sym = vec![vec![0usize; colors.len()]; base.symbols.len()];
    for (gi, g) in base.generators.iter().enumerate() {
        let base_name = match g.color {
            // already-colored signatures get a fresh color layer in the name
            Some(c) => format!("{}@{}", g.name, base.colors[c as usize]),
            None => g.name.clone(),
        };
        for c in 0..colors.len() as u8 {
            sig.add_generator_colored(&base_name, g.arity, g.symmetry, Some(c))
                .expect("colored generator");
            let new_gen = sig.generators.last().unwrap();
            for v in 0..new_gen.symbol_count {
                base_sym.push(g.symbol_start + v);
                colored_sym[g.symbol_start + v][c as usize] = new_gen.symbol_start + v;
            }
        }
        let _ = gi;
    }
    Coloring { colored: sig, base_sym, colored_sym }
}

/// A rooted planar tree node. Trees obtained from anywhere other than
/// canonicalization are "raw" and must go through `TreeMonomial::from_raw`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Leaf(u8),
    Op { sym: usize, kids: Vec<Node> },
}

impl Node {
    pub fn op(sym: usize, kids: Vec<Node>) -> Node {
        Node::Op { sym, kids }
    }

    fn min_leaf(&self) -> u8 {
        match self {
            Node::Leaf(l) => *l,
            Node::Op { kids, .. } => kids.iter().map(|k| k.min_leaf()).min().unwrap(),
        }
    }

    fn collect_leaves(&self, out: &mut Vec<u8>) {
        match self {
            Node::Leaf(l) => out.push(*l),
            Node::Op { kids, .. } => kids.iter().for_each(|k| k.collect_leaves(out)),
        }
    }

    fn weight(&self) -> u32 {
        match self {
            Node::Leaf(_) => 0,
            Node::Op { kids, .. } => 1 + kids.iter().map(|k| k.weight()).sum::<u32>(),
        }
    }

    fn keys(&self, shape: &mut Vec<u8>, decs: &mut Vec<usize>, leaves: &mut Vec<u8>) {
        match self {
            Node::Leaf(l) => {
                shape.push(0);
                leaves.push(*l);
            }
            Node::Op { sym, kids } => {
                shape.push(kids.len() as u8);
                decs.push(*sym);
                for k in kids {
                    k.keys(shape, decs, leaves);
                }
            }
        }
    }

    fn map_leaves(&self, f: &impl Fn(u8) -> u8) -> Node {
        match self {
            Node::Leaf(l) => Node::Leaf(f(*l)),
            Node::Op { sym, kids } => {
                Node::Op { sym: *sym, kids: kids.iter().map(|k| k.map_leaves(f)).collect() }
            }
        }
    }

    fn is_canonical(&self) -> bool {
        match self {
            Node::Leaf(_) => true,
            Node::Op { kids, .. } => {
                kids.windows(2).all(|w| w[0].min_leaf() < w[1].min_leaf())
                    && kids.iter().all(|k| k.is_canonical())
            }
        }
    }
}

/// A shuffle-tree monomial in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreeMonomial {
    arity: u8,
    weight: u32,
    root: Node,
}

impl TreeMonomial {
    /// The arity-1, weight-0 identity tree.
    pub fn identity() -> Self {
        TreeMonomial { arity: 1, weight: 0, root: Node::Leaf(1) }
    }

    /// Validates a raw tree (leaf bijection, decoration arities) and brings
    /// it to shuffle canonical form; the sign is the product of the action
    /// signs paid while sorting children.
    pub fn from_raw(sig: &Signature, raw: &Node) -> Result<(TreeMonomial, Rational)> {
        let mut leaves = Vec::new();
        raw.collect_leaves(&mut leaves);
        let n = leaves.len();
        if n == 0 || n > u8::MAX as usize {
            return Err(Error::BadLeafLabels { detail: format!("{n} leaves") });
        }
        let mut seen = vec![false; n];
        for &l in &leaves {
            if l == 0 || l as usize > n {
                return Err(Error::BadLeafLabels {
                    detail: format!("leaf label {l} outside 1..={n}"),
                });
            }
            if seen[l as usize - 1] {
                return Err(Error::BadLeafLabels { detail: format!("duplicate leaf label {l}") });
            }
            seen[l as usize - 1] = true;
        }
        let (node, sign) = canon_node(sig, raw)?;
        let weight = node.weight();
        Ok((
            TreeMonomial { arity: n as u8, weight, root: node },
            Rational::from_integer(sign.into()),
        ))
    }

    /// Wraps a node that is already canonical (internal fast path).
    pub(crate) fn from_canonical(arity: u8, root: Node) -> TreeMonomial {
        debug_assert!(root.is_canonical());
        let weight = root.weight();
        TreeMonomial { arity, weight, root }
    }

    pub fn arity(&self) -> u8 {
        self.arity
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    /// Symbols at internal vertices in preorder (root first, subtrees left
    /// to right).
    pub fn preorder_symbols(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight as usize);
        fn walk(node: &Node, out: &mut Vec<usize>) {
            if let Node::Op { sym, kids } = node {
                out.push(*sym);
                kids.iter().for_each(|k| walk(k, out));
            }
        }
        walk(&self.root, &mut out);
        out
    }

    /// Replaces the preorder symbol sequence. The replacement must preserve
    /// arities; child order is untouched, so the result stays canonical.
    pub fn with_preorder_symbols(&self, sig: &Signature, syms: &[usize]) -> Result<TreeMonomial> {
        if syms.len() != self.weight as usize {
            return Err(Error::Invalid {
                detail: format!("expected {} symbols, got {}", self.weight, syms.len()),
            });
        }
        fn walk(sig: &Signature, node: &Node, syms: &[usize], pos: &mut usize) -> Result<Node> {
            match node {
                Node::Leaf(l) => Ok(Node::Leaf(*l)),
                Node::Op { sym, kids } => {
                    let new_sym = syms[*pos];
                    *pos += 1;
                    if sig.symbols[new_sym].arity != sig.symbols[*sym].arity {
                        return Err(Error::ArityMismatch {
                            symbol: sig.symbols[new_sym].name.clone(),
                            expected: sig.symbols[*sym].arity,
                            got: sig.symbols[new_sym].arity,
                        });
                    }
                    let new_kids =
                        kids.iter().map(|k| walk(sig, k, syms, pos)).collect::<Result<Vec<_>>>()?;
                    Ok(Node::Op { sym: new_sym, kids: new_kids })
                }
            }
        }
        let mut pos = 0;
        let root = walk(sig, &self.root, syms, &mut pos)?;
        Ok(TreeMonomial::from_canonical(self.arity, root))
    }

    fn sort_key(&self) -> (Vec<u8>, Vec<usize>, Vec<u8>) {
        let mut shape = Vec::new();
        let mut decs = Vec::new();
        let mut leaves = Vec::new();
        self.root.keys(&mut shape, &mut decs, &mut leaves);
        (shape, decs, leaves)
    }
}

impl Ord for TreeMonomial {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        self.arity
            .cmp(&other.arity)
            .then_with(|| self.sort_key().cmp(&other.sort_key()))
    }
}

impl PartialOrd for TreeMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

fn canon_node(sig: &Signature, node: &Node) -> Result<(Node, i8)> {
    match node {
        Node::Leaf(l) => Ok((Node::Leaf(*l), 1)),
        Node::Op { sym, kids } => {
            if *sym >= sig.symbols.len() {
                return Err(Error::Invalid { detail: format!("unknown symbol index {sym}") });
            }
            let arity = sig.symbols[*sym].arity;
            if kids.len() != arity as usize {
                return Err(Error::ArityMismatch {
                    symbol: sig.symbols[*sym].name.clone(),
                    expected: arity,
                    got: kids.len() as u8,
                });
            }
            let mut sign = 1i8;
            let mut canon_kids = Vec::with_capacity(kids.len());
            for k in kids {
                let (ck, s) = canon_node(sig, k)?;
                sign *= s;
                canon_kids.push(ck);
            }
            // sigma(i) = index (1-based) of the child that must move to slot i
            let mut order: Vec<u8> = (1..=arity).collect();
            order.sort_by_key(|&i| canon_kids[i as usize - 1].min_leaf());
            let sigma = Perm::from_images(order).expect("sort permutation");
            let (new_sym, s) = sig.act_symbol(*sym, &sigma);
            sign *= s;
            let sorted: Vec<Node> =
                (1..=arity).map(|i| canon_kids[sigma.apply(i) as usize - 1].clone()).collect();
            Ok((Node::Op { sym: new_sym, kids: sorted }, sign))
        }
    }
}

/// A homogeneous tree polynomial: a finitely supported map from canonical
/// monomials to nonzero rationals, all of the same arity and weight.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TreePoly {
    terms: BTreeMap<TreeMonomial, Rational>,
}

impl TreePoly {
    pub fn zero() -> Self {
        TreePoly { terms: BTreeMap::new() }
    }

    pub fn from_monomial(m: TreeMonomial) -> Self {
        let mut p = TreePoly::zero();
        p.add_term(m, Rational::from_integer(1.into()));
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (TreeMonomial, Rational)>) -> Result<Self> {
        let mut p = TreePoly::zero();
        for (m, c) in terms {
            if let Some((first, _)) = p.terms.iter().next() {
                if first.arity() != m.arity() || first.weight() != m.weight() {
                    return Err(Error::NotHomogeneous {
                        detail: format!(
                            "({}, {}) vs ({}, {})",
                            first.arity(),
                            first.weight(),
                            m.arity(),
                            m.weight()
                        ),
                    });
                }
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn add_term(&mut self, m: TreeMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        if let Some((first, _)) = self.terms.iter().next() {
            debug_assert_eq!(first.arity(), m.arity());
            debug_assert_eq!(first.weight(), m.weight());
        }
        let entry = self.terms.entry(m);
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

    pub fn add(&self, other: &TreePoly) -> TreePoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &TreePoly) -> TreePoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Rational) -> TreePoly {
        if k.is_zero() {
            return TreePoly::zero();
        }
        TreePoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.clone() * k)).collect(),
        }
    }

    pub fn neg(&self) -> TreePoly {
        TreePoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
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

    pub fn arity(&self) -> Option<u8> {
        self.terms.keys().next().map(|m| m.arity())
    }

    pub fn weight(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.weight())
    }

    pub fn coeff(&self, m: &TreeMonomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Support in increasing monomial order.
    pub fn support(&self) -> impl Iterator<Item = &TreeMonomial> {
        self.terms.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TreeMonomial, &Rational)> {
        self.terms.iter()
    }

    /// Greatest monomial in the given total order.
    pub fn leading<'a>(
        &'a self,
        mut cmp: impl FnMut(&TreeMonomial, &TreeMonomial) -> core::cmp::Ordering,
    ) -> Option<&'a TreeMonomial> {
        let mut best: Option<&TreeMonomial> = None;
        for m in self.terms.keys() {
            best = match best {
                None => Some(m),
                Some(b) => {
                    if cmp(m, b) == core::cmp::Ordering::Greater {
                        Some(m)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        best
    }
}

/// Applies a leaf permutation per the free-operad action (labels are
/// relabeled by the inverse) and re-canonicalizes.
pub fn act_mono(sig: &Signature, m: &TreeMonomial, rho: &Perm) -> Result<(TreeMonomial, Rational)> {
    if rho.degree() != m.arity() {
        return Err(Error::DegreeMismatch { expected: m.arity(), got: rho.degree() });
    }
    let inv = rho.inverse();
    let raw = m.root.map_leaves(&|l| inv.apply(l));
    TreeMonomial::from_raw(sig, &raw)
}

pub fn act(sig: &Signature, f: &TreePoly, rho: &Perm) -> Result<TreePoly> {
    let mut out = TreePoly::zero();
    for (m, c) in f.iter() {
        let (m2, s) = act_mono(sig, m, rho)?;
        out.add_term(m2, c.clone() * s);
    }
    Ok(out)
}

/// Grafts monomials into the leaves of `outer` with consecutive label
/// blocks (the plain operad composition in the shuffle basis; other label
/// distributions are reached through the symmetric-group action). The
/// result is canonical without re-sorting, so monomial grafting multiplies
/// coefficients and nothing else.
pub fn graft_mono(
    sig: &Signature,
    outer: &TreeMonomial,
    inners: &[TreeMonomial],
) -> Result<TreeMonomial> {
    let _ = sig;
    if inners.len() != outer.arity() as usize {
        return Err(Error::ArityMismatch {
            symbol: String::from("graft"),
            expected: outer.arity(),
            got: inners.len() as u8,
        });
    }
    let mut offsets = vec![0u8; inners.len() + 1];
    for (i, inner) in inners.iter().enumerate() {
        offsets[i + 1] = offsets[i] + inner.arity();
    }
    let total = offsets[inners.len()];
    fn splice(node: &Node, inners: &[TreeMonomial], offsets: &[u8]) -> Node {
        match node {
            Node::Leaf(l) => {
                let idx = *l as usize - 1;
                let off = offsets[idx];
                inners[idx].root.map_leaves(&|x| x + off)
            }
            Node::Op { sym, kids } => Node::Op {
                sym: *sym,
                kids: kids.iter().map(|k| splice(k, inners, offsets)).collect(),
            },
        }
    }
    let root = splice(&outer.root, inners, &offsets);
    Ok(TreeMonomial::from_canonical(total, root))
}

/// Multilinear extension of `graft_mono` to polynomials.
pub fn graft(sig: &Signature, outer: &TreeMonomial, inners: &[TreePoly]) -> Result<TreePoly> {
    if inners.len() != outer.arity() as usize {
        return Err(Error::ArityMismatch {
            symbol: String::from("graft"),
            expected: outer.arity(),
            got: inners.len() as u8,
        });
    }
    // cartesian product over the supports
    let mut combos: Vec<(Vec<TreeMonomial>, Rational)> =
        vec![(Vec::new(), Rational::from_integer(1.into()))];
    for inner in inners {
        let mut next = Vec::new();
        for (prefix, coeff) in &combos {
            for (m, c) in inner.iter() {
                let mut p = prefix.clone();
                p.push(m.clone());
                next.push((p, coeff.clone() * c));
            }
        }
        combos = next;
    }
    let mut out = TreePoly::zero();
    for (monos, coeff) in combos {
        let m = graft_mono(sig, outer, &monos)?;
        out.add_term(m, coeff);
    }
    Ok(out)
}

/// Soft resource guard for basis enumeration; callers surface it as a
/// warning, never an error.
pub fn exceeds_guard(arity: u8, weight: u32) -> bool {
    arity > 5 || weight > 3
}

/// Enumerates the canonical basis of the weight-`m` arity-`n` component of
/// the free operad, in increasing monomial order.
pub fn enumerate_basis(sig: &Signature, n: u8, m: u32) -> Vec<TreeMonomial> {
    if n == 0 {
        return Vec::new();
    }
    let labels: Vec<u8> = (1..=n).collect();
    let mut out: Vec<TreeMonomial> = enumerate_nodes(sig, &labels, m)
        .into_iter()
        .map(|node| TreeMonomial::from_canonical(n, node))
        .collect();
    out.sort();
    out
}

fn enumerate_nodes(sig: &Signature, labels: &[u8], weight: u32) -> Vec<Node> {
    let mut out = Vec::new();
    if weight == 0 {
        if labels.len() == 1 {
            out.push(Node::Leaf(labels[0]));
        }
        return out;
    }
    if labels.is_empty() {
        return out;
    }
    for &sym in &sig.symbols_of_arity_bounded(labels.len()) {
        let k = sig.symbols[sym].arity as usize;
        for blocks in ordered_partitions(labels, k) {
            for weights in weight_splits(weight - 1, &blocks) {
                let kid_options: Vec<Vec<Node>> = blocks
                    .iter()
                    .zip(weights.iter())
                    .map(|(b, &w)| enumerate_nodes(sig, b, w))
                    .collect();
                if kid_options.iter().any(|o| o.is_empty()) {
                    continue;
                }
                let mut stack: Vec<Vec<Node>> = vec![Vec::new()];
                for opts in &kid_options {
                    let mut next = Vec::new();
                    for partial in &stack {
                        for o in opts {
                            let mut p = partial.clone();
                            p.push(o.clone());
                            next.push(p);
                        }
                    }
                    stack = next;
                }
                for kids in stack {
                    out.push(Node::Op { sym, kids });
                }
            }
        }
    }
    out
}

impl Signature {
    fn symbols_of_arity_bounded(&self, max_leaves: usize) -> Vec<usize> {
        (0..self.symbols.len())
            .filter(|&i| (self.symbols[i].arity as usize) <= max_leaves)
            .collect()
    }
}

/// Ordered partitions of a sorted label set into `k` nonempty blocks with
/// strictly increasing minima (restricted growth strings with `k` classes).
fn ordered_partitions(labels: &[u8], k: usize) -> Vec<Vec<Vec<u8>>> {
    let n = labels.len();
    let mut out = Vec::new();
    if k == 0 || k > n {
        return out;
    }
    let mut assignment = vec![0usize; n];
    fn rec(
        labels: &[u8],
        k: usize,
        pos: usize,
        used: usize,
        assignment: &mut Vec<usize>,
        out: &mut Vec<Vec<Vec<u8>>>,
    ) {
        let n = labels.len();
        if pos == n {
            if used == k {
                let mut blocks = vec![Vec::new(); k];
                for (i, &b) in assignment.iter().enumerate() {
                    blocks[b].push(labels[i]);
                }
                out.push(blocks);
            }
            return;
        }
        // cannot finish if too few positions remain to open the missing blocks
        if k - used > n - pos {
            return;
        }
        for b in 0..used.min(k) {
            assignment[pos] = b;
            rec(labels, k, pos + 1, used, assignment, out);
        }
        if used < k {
            assignment[pos] = used;
            rec(labels, k, pos + 1, used + 1, assignment, out);
        }
    }
    rec(labels, k, 0, 0, &mut assignment, &mut out);
    out
}

/// All ways to distribute `total` weight over the blocks, where a block of
/// size 1 may have weight 0 but a larger block needs at least 1.
fn weight_splits(total: u32, blocks: &[Vec<u8>]) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; blocks.len()];
    fn rec(total: u32, blocks: &[Vec<u8>], idx: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if idx == blocks.len() {
            if total == 0 {
                out.push(current.clone());
            }
            return;
        }
        let min = if blocks[idx].len() > 1 { 1 } else { 0 };
        for w in min..=total {
            current[idx] = w;
            rec(total - w, blocks, idx + 1, current, out);
        }
    }
    rec(total, blocks, 0, &mut current, &mut out);
    out
}

/// Exact coordinates of `f` in an ordered basis.
pub fn coefficient_vector(sig: &Signature, f: &TreePoly, basis: &[TreeMonomial]) -> Result<Vector> {
    let index: BTreeMap<&TreeMonomial, usize> =
        basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut v = vec![Rational::zero(); basis.len()];
    for (m, c) in f.iter() {
        match index.get(m) {
            Some(&i) => v[i] = c.clone(),
            None => {
                return Err(Error::MonomialOutsideBasis { monomial: sig.render_monomial(m) })
            }
        }
    }
    Ok(v)
}

/// Rebuilds a polynomial from coordinates.
pub fn poly_from_vector(basis: &[TreeMonomial], v: &[Rational]) -> TreePoly {
    let mut p = TreePoly::zero();
    for (m, c) in basis.iter().zip(v.iter()) {
        if !c.is_zero() {
            p.add_term(m.clone(), c.clone());
        }
    }
    p
}
