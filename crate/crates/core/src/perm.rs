//! Permutations of `{1, ..., n}` with the composition convention
//! `(a * b)(i) = a(b(i))`. Acting on tree polynomials relabels leaves by the
//! inverse, which makes the action a right action:
//! `act(act(f, a), b) = act(f, a * b)`.

use crate::error::{Error, Result};
use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<u8>, // images[i-1] = sigma(i), 1-based values
}

impl Perm {
    pub fn identity(n: u8) -> Self {
        Perm { images: (1..=n).collect() }
    }

    /// Builds a permutation from 1-based images; validates bijectivity.
    pub fn from_images(images: Vec<u8>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v == 0 || v as usize > n || seen[v as usize - 1] {
                return Err(Error::Invalid { detail: format!("not a permutation: {images:?}") });
            }
            seen[v as usize - 1] = true;
        }
        Ok(Perm { images })
    }

    pub fn degree(&self) -> u8 {
        self.images.len() as u8
    }

    pub fn apply(&self, i: u8) -> u8 {
        self.images[i as usize - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &v)| v as usize == k + 1)
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u8; self.images.len()];
        for (k, &v) in self.images.iter().enumerate() {
            images[v as usize - 1] = k as u8 + 1;
        }
        Perm { images }
    }

    /// `(a.compose(b))(i) = a(b(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm { images: (1..=self.degree()).map(|i| self.apply(other.apply(i))).collect() }
    }

    pub fn sign(&self) -> i8 {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut sign = 1i8;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0usize;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = self.images[cur] as usize - 1;
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    /// All permutations of degree `n` in lexicographic order of their image
    /// words. This order indexes symbol action tables.
    pub fn all(n: u8) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut images: Vec<u8> = (1..=n).collect();
        loop {
            out.push(Perm { images: images.clone() });
            // next lexicographic permutation
            let len = images.len();
            if len < 2 {
                break;
            }
            let mut i = len - 1;
            while i > 0 && images[i - 1] >= images[i] {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            let mut j = len - 1;
            while images[j] <= images[i - 1] {
                j -= 1;
            }
            images.swap(i - 1, j);
            images[i..].reverse();
        }
        out
    }

    /// Index of this permutation in `Perm::all(n)`.
    pub fn index(&self) -> usize {
        // Lehmer code relative to lexicographic order of image words.
        let n = self.images.len();
        let mut idx = 0usize;
        let mut fact = 1usize;
        for k in 1..n {
            fact *= k;
        }
        let mut remaining: Vec<u8> = (1..=n as u8).collect();
        let mut f = fact;
        for k in 0..n {
            let pos = remaining.iter().position(|&v| v == self.images[k]).unwrap();
            idx += pos * f;
            remaining.remove(pos);
            if n - k > 1 {
                f /= n - k - 1;
            }
        }
        idx
    }

    /// Parses cycle notation: `e` (identity), `(12)`, `(123)(45)`, with
    /// single-digit points (degrees up to 9 suffice here).
    pub fn parse_cycles(text: &str, degree: u8) -> Result<Perm> {
        let text = text.trim();
        let mut images: Vec<u8> = (1..=degree).collect();
        if text == "e" || text == "()" || text.is_empty() {
            return Ok(Perm { images });
        }
        let bytes = text.as_bytes();
        let mut pos = 0usize;
        while pos < bytes.len() {
            if bytes[pos] != b'(' {
                return Err(Error::MalformedSigma {
                    detail: format!("expected '(' in cycle notation: {text}"),
                });
            }
            pos += 1;
            let mut cycle: Vec<u8> = Vec::new();
            while pos < bytes.len() && bytes[pos] != b')' {
                let c = bytes[pos];
                if !(c as char).is_ascii_digit() {
                    return Err(Error::MalformedSigma {
                        detail: format!("unexpected character '{}' in cycle: {text}", c as char),
                    });
                }
                let v = c - b'0';
                if v == 0 || v > degree {
                    return Err(Error::MalformedSigma {
                        detail: format!("point {v} out of range 1..={degree}"),
                    });
                }
                cycle.push(v);
                pos += 1;
            }
            if pos >= bytes.len() {
                return Err(Error::MalformedSigma { detail: format!("unclosed cycle: {text}") });
            }
            pos += 1; // skip ')'
            if cycle.len() > 1 {
                for w in 0..cycle.len() {
                    let from = cycle[w];
                    let to = cycle[(w + 1) % cycle.len()];
                    images[from as usize - 1] = to;
                }
            }
        }
        let mut seen = vec![false; degree as usize];
        for &v in &images {
            if seen[v as usize - 1] {
                return Err(Error::MalformedSigma {
                    detail: format!("cycles overlap in {text}"),
                });
            }
            seen[v as usize - 1] = true;
        }
        Ok(Perm { images })
    }

    /// Renders cycle notation (`e` for the identity).
    pub fn cycles(&self) -> String {
        if self.is_identity() {
            return String::from("e");
        }
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for start in 1..=n as u8 {
            if seen[start as usize - 1] || self.apply(start) == start {
                seen[start as usize - 1] = true;
                continue;
            }
            out.push('(');
            let mut cur = start;
            while !seen[cur as usize - 1] {
                seen[cur as usize - 1] = true;
                out.push_str(&format!("{cur}"));
                cur = self.apply(cur);
            }
            out.push(')');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_and_inverse() {
        let a = Perm::from_images(vec![2, 3, 1]).unwrap(); // (123)
        let b = Perm::from_images(vec![2, 1, 3]).unwrap(); // (12)
        let ab = a.compose(&b);
        for i in 1..=3 {
            assert_eq!(ab.apply(i), a.apply(b.apply(i)));
        }
        assert!(a.compose(&a.inverse()).is_identity());
        assert_eq!(a.sign(), 1);
        assert_eq!(b.sign(), -1);
    }

    #[test]
    fn all_enumerates_n_factorial() {
        assert_eq!(Perm::all(3).len(), 6);
        assert_eq!(Perm::all(4).len(), 24);
        for (i, p) in Perm::all(4).iter().enumerate() {
            assert_eq!(p.index(), i);
        }
    }

    #[test]
    fn cycle_parsing_round_trip() {
        for p in Perm::all(4) {
            let q = Perm::parse_cycles(&p.cycles(), 4).unwrap();
            assert_eq!(p, q);
        }
        let c = Perm::parse_cycles("(123)", 3).unwrap();
        assert_eq!(c, Perm::from_images(vec![2, 3, 1]).unwrap());
    }
}
