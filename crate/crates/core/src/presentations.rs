//! Presentations of operads by generators and homogeneous relations, the
//! text DSL (`.opd`) with its parser and renderer, the builtin catalog, and
//! S_n-closure of relation sets.

use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::perm::Perm;
use crate::scalar::Rational;
use crate::trees::{
    self, act, coefficient_vector, enumerate_basis, poly_from_vector, Node, Signature, Symmetry,
    TreeMonomial, TreePoly,
};
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{One, Signed};

/// A finitely presented operad: a signature plus a list of homogeneous
/// relations. The relation list is what the source file declares; S_n-closed
/// spans are computed on demand.
#[derive(Debug, Clone)]
pub struct Presentation {
    pub sig: Signature,
    pub relations: Vec<TreePoly>,
}

impl Presentation {
    pub fn new(sig: Signature) -> Self {
        Presentation { sig, relations: Vec::new() }
    }

    pub fn add_relation(&mut self, rel: TreePoly) -> Result<()> {
        if rel.is_zero() {
            return Err(Error::Invalid { detail: String::from("zero relation") });
        }
        self.relations.push(rel);
        Ok(())
    }

    /// Distinct (arity, weight) pairs carrying relations, sorted.
    pub fn relation_keys(&self) -> Vec<(u8, u32)> {
        let mut keys: BTreeSet<(u8, u32)> = BTreeSet::new();
        for r in &self.relations {
            keys.insert((r.arity().unwrap(), r.weight().unwrap()));
        }
        keys.into_iter().collect()
    }

    pub fn relations_at(&self, n: u8, m: u32) -> Vec<&TreePoly> {
        self.relations
            .iter()
            .filter(|r| r.arity() == Some(n) && r.weight() == Some(m))
            .collect()
    }

    /// True if every relation has weight 2.
    pub fn is_quadratic(&self) -> bool {
        self.relations.iter().all(|r| r.weight() == Some(2))
    }

    /// True if all generators have arity at most 2.
    pub fn is_unary_binary(&self) -> bool {
        self.sig.max_arity() <= 2
    }

    pub fn is_binary(&self) -> bool {
        self.sig.symbols.iter().all(|s| s.arity == 2)
    }
}

/// Spanning set of the S_n-submodule generated by homogeneous relations of a
/// common (arity, weight): the RREF basis of all translates, as polynomials.
pub fn s_closure(sig: &Signature, rels: &[TreePoly]) -> Result<Vec<TreePoly>> {
    if rels.is_empty() {
        return Ok(Vec::new());
    }
    let n = rels[0].arity().unwrap();
    let m = rels[0].weight().unwrap();
    for r in rels {
        if r.arity() != Some(n) || r.weight() != Some(m) {
            return Err(Error::NotHomogeneous {
                detail: String::from("s_closure needs a single (arity, weight) component"),
            });
        }
    }
    let basis = enumerate_basis(sig, n, m);
    let mut rows: Vec<Vector> = Vec::new();
    for r in rels {
        for rho in Perm::all(n) {
            let translated = act(sig, r, &rho)?;
            rows.push(coefficient_vector(sig, &translated, &basis)?);
        }
    }
    let reduced = linalg::span_basis(&rows);
    Ok(reduced.into_iter().map(|v| poly_from_vector(&basis, &v)).collect())
}

/// Coefficient vectors of the S_n-closed span of the presentation's
/// (arity, weight) relation component, in the enumerated basis.
pub fn relation_component(
    p: &Presentation,
    n: u8,
    m: u32,
) -> Result<(Vec<TreeMonomial>, Vec<Vector>)> {
    let basis = enumerate_basis(&p.sig, n, m);
    let rels: Vec<TreePoly> = p.relations_at(n, m).into_iter().cloned().collect();
    if rels.is_empty() {
        return Ok((basis, Vec::new()));
    }
    let closed = s_closure(&p.sig, &rels)?;
    let rows = closed
        .iter()
        .map(|r| coefficient_vector(&p.sig, r, &basis))
        .collect::<Result<Vec<_>>>()?;
    Ok((basis, rows))
}

// ---------------------------------------------------------------------------
// Builtin catalog
// ---------------------------------------------------------------------------

const BUILTINS: &[(&str, &str)] = &[
    (
        "Com",
        "operad Com {\n  gen m:2 symmetric;\n  rel m(m(1,2),3) - m(m(2,3),1);\n  rel m(m(1,2),3) - m(m(3,1),2);\n}\n",
    ),
    (
        "Lie",
        "operad Lie {\n  gen b:2 antisymmetric;\n  rel b(b(1,2),3) + b(b(2,3),1) + b(b(3,1),2);\n}\n",
    ),
    ("As", "operad As {\n  gen m:2;\n  rel m(m(1,2),3) - m(1,m(2,3));\n}\n"),
    (
        "PreLie",
        "operad PreLie {\n  gen m:2;\n  rel m(m(1,2),3) - m(1,m(2,3)) - m(m(2,1),3) + m(2,m(1,3));\n}\n",
    ),
    (
        "Perm",
        "operad Perm {\n  gen m:2;\n  rel m(m(1,2),3) - m(1,m(2,3));\n  rel m(m(1,2),3) - m(m(2,1),3);\n}\n",
    ),
    (
        "Nov",
        "operad Nov {\n  gen m:2;\n  rel m(m(1,2),3) - m(1,m(2,3)) - m(m(2,1),3) + m(2,m(1,3));\n  rel m(m(1,2),3) - m(m(1,3),2);\n}\n",
    ),
    (
        "Dend",
        "operad Dend {\n  gen lt:2;\n  gen gt:2;\n  rel lt(lt(1,2),3) - lt(1,lt(2,3)) - lt(1,gt(2,3));\n  rel lt(gt(1,2),3) - gt(1,lt(2,3));\n  rel gt(lt(1,2),3) + gt(gt(1,2),3) - gt(1,gt(2,3));\n}\n",
    ),
    (
        "Leib",
        "operad Leib {\n  gen m:2;\n  rel m(m(1,2),3) - m(m(1,3),2) - m(1,m(2,3));\n}\n",
    ),
    (
        "Zinb",
        "operad Zinb {\n  gen m:2;\n  rel m(m(1,2),3) - m(1,m(2,3)) - m(1,m(3,2));\n}\n",
    ),
    (
        "Pois",
        "operad Pois {\n  gen m:2 symmetric;\n  gen b:2 antisymmetric;\n  rel m(m(1,2),3) - m(m(2,3),1);\n  rel m(m(1,2),3) - m(m(3,1),2);\n  rel b(b(1,2),3) + b(b(2,3),1) + b(b(3,1),2);\n  rel b(m(1,2),3) - m(b(1,3),2) - m(1,b(2,3));\n}\n",
    ),
];

pub fn builtin_names() -> Vec<&'static str> {
    BUILTINS.iter().map(|(n, _)| *n).collect()
}

pub fn builtin(name: &str) -> Result<Presentation> {
    let src = BUILTINS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, s)| *s)
        .ok_or_else(|| Error::UnknownBuiltin(name.to_string()))?;
    parse(src)
}

// ---------------------------------------------------------------------------
// DSL parser
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Semi,
    Colon,
    Plus,
    Minus,
    Star,
    Slash,
    Eof,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.src.get(self.pos).copied()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws_and_comments(&mut self) {
        loop {
            while matches!(self.peek(), Some(c) if (c as char).is_ascii_whitespace()) {
                self.bump();
            }
            if self.peek() == Some(b'#') {
                while let Some(c) = self.peek() {
                    if c == b'\n' {
                        break;
                    }
                    self.bump();
                }
                continue;
            }
            break;
        }
    }

    fn next_token(&mut self) -> Result<Spanned> {
        self.skip_ws_and_comments();
        let line = self.line;
        let col = self.col;
        let Some(c) = self.peek() else {
            return Ok(Spanned { tok: Tok::Eof, line, col });
        };
        let tok = match c {
            b'{' => {
                self.bump();
                Tok::LBrace
            }
            b'}' => {
                self.bump();
                Tok::RBrace
            }
            b'(' => {
                self.bump();
                Tok::LParen
            }
            b')' => {
                self.bump();
                Tok::RParen
            }
            b',' => {
                self.bump();
                Tok::Comma
            }
            b';' => {
                self.bump();
                Tok::Semi
            }
            b':' => {
                self.bump();
                Tok::Colon
            }
            b'+' => {
                self.bump();
                Tok::Plus
            }
            b'-' => {
                self.bump();
                Tok::Minus
            }
            b'*' => {
                self.bump();
                Tok::Star
            }
            b'/' => {
                self.bump();
                Tok::Slash
            }
            b'0'..=b'9' => {
                let mut v: i64 = 0;
                while matches!(self.peek(), Some(c) if (c as char).is_ascii_digit()) {
                    v = v
                        .checked_mul(10)
                        .and_then(|x| x.checked_add((self.peek().unwrap() - b'0') as i64))
                        .ok_or(Error::Parse {
                            line,
                            col,
                            msg: String::from("integer literal overflows"),
                        })?;
                    self.bump();
                }
                Tok::Int(v)
            }
            c if (c as char).is_ascii_alphabetic() || c == b'_' => {
                let mut s = String::new();
                while let Some(c) = self.peek() {
                    let ch = c as char;
                    if ch.is_ascii_alphanumeric() || c == b'_' || c == b'@' || c == b'.' {
                        s.push(ch);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Tok::Ident(s)
            }
            other => {
                return Err(Error::Parse {
                    line,
                    col,
                    msg: format!("unexpected character '{}'", other as char),
                })
            }
        };
        Ok(Spanned { tok, line, col })
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    current: Spanned,
}

#[derive(Debug, Clone)]
struct RawTreeSrc {
    head: String,
    kids: Vec<RawChildSrc>,
}

#[derive(Debug, Clone)]
enum RawChildSrc {
    Leaf(u8),
    Tree(RawTreeSrc),
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self> {
        let mut lex = Lexer::new(src);
        let current = lex.next_token()?;
        Ok(Parser { lex, current })
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse { line: self.current.line, col: self.current.col, msg: msg.into() }
    }

    fn advance(&mut self) -> Result<Spanned> {
        let next = self.lex.next_token()?;
        Ok(core::mem::replace(&mut self.current, next))
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if self.current.tok == tok {
            self.advance()?;
            Ok(())
        } else {
            Err(self.err(format!("expected {:?}, found {:?}", tok, self.current.tok)))
        }
    }

    fn expect_ident(&mut self) -> Result<String> {
        match self.current.tok.clone() {
            Tok::Ident(s) => {
                self.advance()?;
                Ok(s)
            }
            other => Err(self.err(format!("expected identifier, found {other:?}"))),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        match &self.current.tok {
            Tok::Ident(s) if s == kw => {
                self.advance()?;
                Ok(())
            }
            other => Err(self.err(format!("expected '{kw}', found {other:?}"))),
        }
    }

    fn parse_presentation(&mut self) -> Result<Presentation> {
        self.expect_keyword("operad")?;
        let name = self.expect_ident()?;
        let mut sig = Signature::new(&name);
        self.expect(Tok::LBrace)?;
        struct PendingRel {
            line: usize,
            col: usize,
            terms: Vec<(Rational, RawTreeSrc)>,
        }
        let mut pending_gens: Vec<(String, u8, Symmetry, usize, usize)> = Vec::new();
        let mut pending_rels: Vec<PendingRel> = Vec::new();
        loop {
            match self.current.tok.clone() {
                Tok::RBrace => {
                    self.advance()?;
                    break;
                }
                Tok::Ident(kw) if kw == "colors" => {
                    self.advance()?;
                    if !sig.colors.is_empty() {
                        return Err(self.err("colors declared twice"));
                    }
                    loop {
                        let cname = self.expect_ident()?;
                        if cname.contains('@') {
                            return Err(self.err("color names cannot contain '@'"));
                        }
                        if sig.colors.contains(&cname) {
                            return Err(self.err(format!("duplicate color {cname}")));
                        }
                        sig.colors.push(cname);
                        if self.current.tok == Tok::Comma {
                            self.advance()?;
                        } else {
                            break;
                        }
                    }
                    self.expect(Tok::Semi)?;
                }
                Tok::Ident(kw) if kw == "gen" => {
                    let (line, col) = (self.current.line, self.current.col);
                    self.advance()?;
                    let gname = self.expect_ident()?;
                    self.expect(Tok::Colon)?;
                    let arity = match self.current.tok {
                        Tok::Int(v) if v >= 1 && v <= trees::MAX_GEN_ARITY as i64 => {
                            self.advance()?;
                            v as u8
                        }
                        Tok::Int(v) => {
                            return Err(self.err(format!(
                                "arity {v} unsupported (1..={})",
                                trees::MAX_GEN_ARITY
                            )))
                        }
                        _ => return Err(self.err("expected arity integer")),
                    };
                    let symmetry = match &self.current.tok {
                        Tok::Ident(s) if s == "symmetric" => {
                            self.advance()?;
                            Symmetry::Symmetric
                        }
                        Tok::Ident(s) if s == "antisymmetric" => {
                            self.advance()?;
                            Symmetry::Antisymmetric
                        }
                        _ => Symmetry::Free,
                    };
                    self.expect(Tok::Semi)?;
                    pending_gens.push((gname, arity, symmetry, line, col));
                }
                Tok::Ident(kw) if kw == "rel" => {
                    let (line, col) = (self.current.line, self.current.col);
                    self.advance()?;
                    let terms = self.parse_relation_terms()?;
                    self.expect(Tok::Semi)?;
                    pending_rels.push(PendingRel { line, col, terms });
                }
                other => return Err(self.err(format!("expected item, found {other:?}"))),
            }
        }
        if self.current.tok != Tok::Eof {
            return Err(self.err("trailing input after closing brace"));
        }
        for (gname, arity, symmetry, line, col) in pending_gens {
            let map_err = |e: Error| match e {
                Error::Parse { .. } => e,
                other => Error::Parse { line, col, msg: format!("{other}") },
            };
            if sig.colors.is_empty() {
                sig.add_generator(&gname, arity, symmetry).map_err(map_err)?;
            } else {
                for c in 0..sig.colors.len() as u8 {
                    sig.add_generator_colored(&gname, arity, symmetry, Some(c)).map_err(map_err)?;
                }
            }
        }
        let mut pres = Presentation::new(sig);
        for rel in pending_rels {
            let mut poly = TreePoly::zero();
            let mut shapes: BTreeSet<(u8, u32)> = BTreeSet::new();
            for (coeff, tree_src) in &rel.terms {
                let raw = resolve_tree(&pres.sig, tree_src)
                    .map_err(|msg| Error::Parse { line: rel.line, col: rel.col, msg })?;
                let (mono, sign) = TreeMonomial::from_raw(&pres.sig, &raw).map_err(|e| {
                    Error::Parse { line: rel.line, col: rel.col, msg: format!("{e}") }
                })?;
                shapes.insert((mono.arity(), mono.weight()));
                if shapes.len() > 1 {
                    let mut it = shapes.iter();
                    let a = *it.next().unwrap();
                    let b = *it.next().unwrap();
                    return Err(Error::Parse {
                        line: rel.line,
                        col: rel.col,
                        msg: format!(
                            "relation not homogeneous: mixes (arity, weight) {:?} and {:?}",
                            a, b
                        ),
                    });
                }
                poly.add_term(mono, coeff.clone() * sign);
            }
            if poly.is_zero() {
                return Err(Error::Parse {
                    line: rel.line,
                    col: rel.col,
                    msg: String::from("relation is zero after canonicalization"),
                });
            }
            pres.add_relation(poly)
                .map_err(|e| Error::Parse { line: rel.line, col: rel.col, msg: format!("{e}") })?;
        }
        Ok(pres)
    }

    fn parse_relation_terms(&mut self) -> Result<Vec<(Rational, RawTreeSrc)>> {
        let mut terms = Vec::new();
        let mut sign = Rational::one();
        if self.current.tok == Tok::Minus {
            self.advance()?;
            sign = -sign;
        } else if self.current.tok == Tok::Plus {
            self.advance()?;
        }
        loop {
            let (coeff, tree) = self.parse_term()?;
            terms.push((coeff * &sign, tree));
            match self.current.tok {
                Tok::Plus => {
                    self.advance()?;
                    sign = Rational::one();
                }
                Tok::Minus => {
                    self.advance()?;
                    sign = -Rational::one();
                }
                _ => break,
            }
        }
        Ok(terms)
    }

    fn parse_term(&mut self) -> Result<(Rational, RawTreeSrc)> {
        let mut coeff = Rational::one();
        if let Tok::Int(n) = self.current.tok {
            self.advance()?;
            let num = BigInt::from(n);
            let mut den = BigInt::one();
            if self.current.tok == Tok::Slash {
                self.advance()?;
                match self.current.tok {
                    Tok::Int(d) if d != 0 => {
                        den = BigInt::from(d);
                        self.advance()?;
                    }
                    _ => return Err(self.err("expected nonzero denominator")),
                }
            }
            coeff = Rational::new(num, den);
            if self.current.tok == Tok::Star {
                self.advance()?;
            }
        }
        let tree = self.parse_tree()?;
        Ok((coeff, tree))
    }

    fn parse_tree(&mut self) -> Result<RawTreeSrc> {
        let head = self.expect_ident()?;
        self.expect(Tok::LParen)?;
        let mut kids = Vec::new();
        loop {
            match self.current.tok.clone() {
                Tok::Int(v) if (1..=u8::MAX as i64).contains(&v) => {
                    self.advance()?;
                    kids.push(RawChildSrc::Leaf(v as u8));
                }
                Tok::Int(v) => return Err(self.err(format!("bad leaf label {v}"))),
                Tok::Ident(_) => {
                    kids.push(RawChildSrc::Tree(self.parse_tree()?));
                }
                other => {
                    return Err(self.err(format!("expected leaf or subtree, found {other:?}")))
                }
            }
            if self.current.tok == Tok::Comma {
                self.advance()?;
            } else {
                break;
            }
        }
        self.expect(Tok::RParen)?;
        Ok(RawTreeSrc { head, kids })
    }
}

/// Resolves a parsed tree against the signature: the head must be the
/// display name of a declared generator (base name plus optional `@color`).
fn resolve_tree(sig: &Signature, src: &RawTreeSrc) -> core::result::Result<Node, String> {
    let gen = (0..sig.generators.len())
        .find(|&g| sig.gen_display(g) == src.head)
        .ok_or_else(|| format!("unknown generator '{}'", src.head))?;
    let sym = sig.gen_symbol(gen);
    let expected = sig.generators[gen].arity as usize;
    if src.kids.len() != expected {
        return Err(format!(
            "generator '{}' takes {expected} arguments, got {}",
            src.head,
            src.kids.len()
        ));
    }
    let kids = src
        .kids
        .iter()
        .map(|k| match k {
            RawChildSrc::Leaf(l) => Ok(Node::Leaf(*l)),
            RawChildSrc::Tree(t) => resolve_tree(sig, t),
        })
        .collect::<core::result::Result<Vec<_>, String>>()?;
    Ok(Node::op(sym, kids))
}

/// Parses `.opd` source into a validated presentation.
pub fn parse(text: &str) -> Result<Presentation> {
    Parser::new(text)?.parse_presentation()
}

/// Parses a single monomial in the canonical text form against an existing
/// signature; the rational is the canonicalization sign.
pub fn parse_monomial(sig: &Signature, text: &str) -> Result<(TreeMonomial, Rational)> {
    let mut parser = Parser::new(text)?;
    let src = parser.parse_tree()?;
    if parser.current.tok != Tok::Eof {
        return Err(parser.err("trailing input after monomial"));
    }
    let raw = resolve_tree(sig, &src).map_err(|msg| Error::Parse { line: 1, col: 1, msg })?;
    TreeMonomial::from_raw(sig, &raw)
}

// ---------------------------------------------------------------------------
// Renderer
// ---------------------------------------------------------------------------

fn format_coeff(c: &Rational) -> String {
    if c.is_one() {
        String::new()
    } else if (-c.clone()).is_one() {
        String::from("-")
    } else if c.denom().is_one() {
        format!("{}*", c.numer())
    } else {
        format!("{}/{}*", c.numer(), c.denom())
    }
}

pub fn render_poly(sig: &Signature, poly: &TreePoly) -> String {
    let mut out = String::new();
    for (i, (m, c)) in poly.iter().enumerate() {
        let rendered = sig.render_monomial(m);
        if i == 0 {
            out.push_str(&format!("{}{}", format_coeff(c), rendered));
        } else if c.is_negative() {
            out.push_str(&format!(" - {}{}", format_coeff(&-c.clone()), rendered));
        } else {
            out.push_str(&format!(" + {}{}", format_coeff(c), rendered));
        }
    }
    out
}

/// Renders a presentation back to DSL source. Colored signatures print each
/// base generator once; parsing recreates the per-color copies.
pub fn render(p: &Presentation) -> String {
    let sig = &p.sig;
    let mut out = format!("operad {} {{\n", sig.name);
    if !sig.colors.is_empty() {
        out.push_str(&format!("  colors {};\n", sig.colors.join(", ")));
    }
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for g in &sig.generators {
        if !seen.insert(g.name.clone()) {
            continue;
        }
        let sym = match g.symmetry {
            Symmetry::Symmetric => " symmetric",
            Symmetry::Antisymmetric => " antisymmetric",
            Symmetry::Free => "",
        };
        out.push_str(&format!("  gen {}:{}{};\n", g.name, g.arity, sym));
    }
    for r in &p.relations {
        out.push_str(&format!("  rel {};\n", render_poly(sig, r)));
    }
    out.push_str("}\n");
    out
}
