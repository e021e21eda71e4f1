//! Freely reduced words, their variations, and the constants `M(d, l)`.
//!
//! A word `w = x_1^{e_1} ... x_l^{e_l}` is stored as its letter sequence.
//! Words produced by [`parse_word`] and [`free_reduce`] are normalised: the
//! distinct variables are renamed `1..=d` in order of first occurrence.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn is_inverse(self) -> bool {
        self == Sign::Minus
    }

    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// One letter `x_var^{sign}`; variable indices start at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub var: u32,
    pub sign: Sign,
}

impl Letter {
    pub fn new(var: u32, sign: Sign) -> Letter {
        assert!(var >= 1, "variable indices start at 1");
        Letter { var, sign }
    }

    pub fn pos(var: u32) -> Letter {
        Letter::new(var, Sign::Plus)
    }

    pub fn neg(var: u32) -> Letter {
        Letter::new(var, Sign::Minus)
    }

    pub fn inverse(self) -> Letter {
        Letter {
            var: self.var,
            sign: self.sign.flip(),
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.var == other.var && self.sign != other.sign
    }
}

/// A freely reduced word.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReducedWord {
    letters: Vec<Letter>,
}

impl ReducedWord {
    pub fn empty() -> ReducedWord {
        ReducedWord {
            letters: Vec::new(),
        }
    }

    /// Reduces and normalises an arbitrary letter sequence.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> ReducedWord {
        free_reduce(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Word length `l`.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Number `d` of distinct variables.
    pub fn num_vars(&self) -> usize {
        let mut seen: Vec<u32> = self.letters.iter().map(|l| l.var).collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    /// Number of arguments an evaluation needs: the largest variable index.
    /// Equals [`num_vars`](Self::num_vars) for normalised words.
    pub fn arity(&self) -> usize {
        self.letters.iter().map(|l| l.var as usize).max().unwrap_or(0)
    }

    /// `iota(i)` for a 0-based position `i`: the variable at that position.
    pub fn iota(&self, i: usize) -> u32 {
        self.letters[i].var
    }

    pub fn signs(&self) -> impl Iterator<Item = Sign> + '_ {
        self.letters.iter().map(|l| l.sign)
    }

    /// Occurrence counts `a_k`, indexed by `k - 1` up to the arity.
    pub fn counts(&self) -> Vec<usize> {
        let mut a = vec![0; self.arity()];
        for l in &self.letters {
            a[l.var as usize - 1] += 1;
        }
        a
    }

    /// Errors with [`Error::EmptyWord`] when `l = 0`.
    pub fn require_nonempty(&self) -> Result<()> {
        if self.is_empty() {
            Err(Error::EmptyWord)
        } else {
            Ok(())
        }
    }

    pub fn inverse(&self) -> ReducedWord {
        ReducedWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match l.sign {
                Sign::Plus => write!(f, "x{}", l.var)?,
                Sign::Minus => write!(f, "x{}^-1", l.var)?,
            }
        }
        Ok(())
    }
}

/// Canonical text form, e.g. `x1 x2 x1^-1 x2^-1`.
pub fn format_word(w: &ReducedWord) -> String {
    w.to_string()
}

/// Free reduction followed by variable renaming to `1..=d` in order of first
/// occurrence. Idempotent.
pub fn free_reduce(letters: impl IntoIterator<Item = Letter>) -> ReducedWord {
    let mut stack: Vec<Letter> = Vec::new();
    for l in letters {
        match stack.last() {
            Some(top) if top.cancels(l) => {
                stack.pop();
            }
            _ => stack.push(l),
        }
    }
    let mut rename: HashMap<u32, u32> = HashMap::new();
    for l in &mut stack {
        let next = rename.len() as u32 + 1;
        l.var = *rename.entry(l.var).or_insert(next);
    }
    ReducedWord { letters: stack }
}

/// Parses a word expression.
///
/// Tokens are separated by whitespace or `*`. A token is `x<k>` with `k >= 1`,
/// optionally followed by `^<n>` for a nonzero signed integer `n`; `[E1,E2]`
/// expands to `E1 E2 E1^-1 E2^-1` and nests.
pub fn parse_word(text: &str) -> Result<ReducedWord> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let letters = p.sequence()?;
    p.skip_sep();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected character"));
    }
    Ok(free_reduce(letters))
}

/// Like [`parse_word`] but rejects words that reduce to the empty word.
pub fn parse_nonempty_word(text: &str) -> Result<ReducedWord> {
    let w = parse_word(text)?;
    w.require_nonempty()?;
    Ok(w)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_sep(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_ascii_whitespace() || c == b'*' {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn sequence(&mut self) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        loop {
            self.skip_sep();
            match self.peek() {
                Some(b'x') => out.extend(self.token()?),
                Some(b'[') => out.extend(self.commutator()?),
                _ => return Ok(out),
            }
        }
    }

    fn number(&mut self) -> Result<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a decimal number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| Error::Syntax {
                pos: start,
                msg: "number too large".into(),
            })
    }

    fn token(&mut self) -> Result<Vec<Letter>> {
        self.pos += 1; // 'x'
        let var_pos = self.pos;
        let var = self.number()?;
        if var == 0 || var > u32::MAX as u64 {
            return Err(Error::Syntax {
                pos: var_pos,
                msg: "variable index must be a positive integer".into(),
            });
        }
        let mut exp: i64 = 1;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = match self.peek() {
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                _ => false,
            };
            let exp_pos = self.pos;
            let n = self.number()?;
            if n == 0 {
                return Err(Error::Syntax {
                    pos: exp_pos,
                    msg: "exponent must be nonzero".into(),
                });
            }
            if n > 1 << 20 {
                return Err(Error::Syntax {
                    pos: exp_pos,
                    msg: "exponent too large".into(),
                });
            }
            exp = if neg { -(n as i64) } else { n as i64 };
        }
        let sign = if exp < 0 { Sign::Minus } else { Sign::Plus };
        Ok(vec![Letter::new(var as u32, sign); exp.unsigned_abs() as usize])
    }

    fn commutator(&mut self) -> Result<Vec<Letter>> {
        self.pos += 1; // '['
        let a = self.sequence()?;
        self.skip_sep();
        if self.peek() != Some(b',') {
            return Err(self.error("expected `,` in commutator"));
        }
        self.pos += 1;
        let b = self.sequence()?;
        self.skip_sep();
        if self.peek() != Some(b']') {
            return Err(self.error("expected `]` closing commutator"));
        }
        self.pos += 1;
        let inv = |s: &[Letter]| s.iter().rev().map(|l| l.inverse()).collect::<Vec<_>>();
        let mut out = a.clone();
        out.extend_from_slice(&b);
        out.extend(inv(&a));
        out.extend(inv(&b));
        Ok(out)
    }
}

/// `M(d, l) = ((2l(d+1))^{2l+3} - 1) / (2l(d+1) - 1)`.
pub fn m_constant(d: u64, l: u64) -> BigUint {
    assert!(d >= 1 && l >= 1, "m_constant needs d, l >= 1");
    let base = BigUint::from(2 * l * (d + 1));
    let top: BigUint = Pow::pow(&base, (2 * l + 3) as u32);
    (top - BigUint::one()) / (base - BigUint::one())
}

/// `M' = M(l, l)`.
pub fn m_prime(l: u64) -> BigUint {
    m_constant(l, l)
}

/// A word in doubly indexed variables `X_{k,t}` obtained from a parent word by
/// attaching a second index to every occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VariationWord {
    /// `(k, t, sign)` per position.
    pairs: Vec<(u32, u32, Sign)>,
    flattened: ReducedWord,
    /// `fresh[j - 1]` is the pair renamed to fresh variable `j`.
    fresh: Vec<(u32, u32)>,
}

impl VariationWord {
    /// Builds a variation-shaped word; fails if it is not freely reduced.
    pub fn from_pairs(pairs: Vec<(u32, u32, Sign)>) -> Result<VariationWord> {
        let mut index: HashMap<(u32, u32), u32> = HashMap::new();
        let mut fresh = Vec::new();
        let mut letters = Vec::with_capacity(pairs.len());
        for &(k, t, sign) in &pairs {
            if k == 0 || t == 0 {
                return Err(Error::Param("indices of X_{k,t} start at 1".into()));
            }
            let j = *index.entry((k, t)).or_insert_with(|| {
                fresh.push((k, t));
                fresh.len() as u32
            });
            letters.push(Letter::new(j, sign));
        }
        if letters.windows(2).any(|p| p[0].cancels(p[1])) {
            return Err(Error::Param("variation word is not freely reduced".into()));
        }
        Ok(VariationWord {
            pairs,
            flattened: ReducedWord { letters },
            fresh,
        })
    }

    pub fn pairs(&self) -> &[(u32, u32, Sign)] {
        &self.pairs
    }

    /// The same word over fresh contiguous variables, numbered by first
    /// occurrence of each pair.
    pub fn flattened(&self) -> &ReducedWord {
        &self.flattened
    }

    /// Pair `(k, t)` behind fresh variable `j` (1-based).
    pub fn pair_of_fresh(&self, j: u32) -> (u32, u32) {
        self.fresh[j as usize - 1]
    }

    pub fn second_indices(&self) -> Vec<u32> {
        self.pairs.iter().map(|p| p.1).collect()
    }
}

impl fmt::Display for VariationWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &(k, t, s)) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "X{k}_{t}")?;
            if s.is_inverse() {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

/// The variation of `w` with second indices `t` (1-based, one per position).
pub fn variation_with(w: &ReducedWord, t: &[u32]) -> Result<VariationWord> {
    if t.len() != w.len() {
        return Err(Error::Arity {
            expected: w.len(),
            got: t.len(),
        });
    }
    let pairs = w
        .letters()
        .iter()
        .zip(t)
        .map(|(l, &t)| (l.var, t, l.sign))
        .collect();
    VariationWord::from_pairs(pairs)
}

/// Streams all variations of `w` in lexicographic order of `(t_1, ..., t_l)`.
pub fn variations(w: &ReducedWord) -> Variations<'_> {
    let counts = w.counts();
    let bounds = w
        .letters()
        .iter()
        .map(|l| counts[l.var as usize - 1] as u32)
        .collect();
    Variations {
        word: w,
        bounds,
        next: if w.is_empty() {
            None
        } else {
            Some(vec![1; w.len()])
        },
    }
}

pub struct Variations<'a> {
    word: &'a ReducedWord,
    bounds: Vec<u32>,
    next: Option<Vec<u32>>,
}

impl Iterator for Variations<'_> {
    type Item = VariationWord;

    fn next(&mut self) -> Option<VariationWord> {
        let t = self.next.take()?;
        let mut succ = t.clone();
        let mut i = succ.len();
        let mut advanced = false;
        while i > 0 {
            i -= 1;
            if succ[i] < self.bounds[i] {
                succ[i] += 1;
                advanced = true;
                break;
            }
            succ[i] = 1;
        }
        if advanced {
            self.next = Some(succ);
        }
        Some(variation_with(self.word, &t).expect("variations of a reduced word are reduced"))
    }
}

/// `prod_k a_k^{a_k}`.
pub fn variation_count(w: &ReducedWord) -> BigUint {
    w.counts()
        .into_iter()
        .filter(|&a| a > 0)
        .map(|a| Pow::pow(&BigUint::from(a), a as u32))
        .product()
}

/// Whether `candidate` arises from `w` by a legal choice of second indices.
pub fn is_variation(candidate: &VariationWord, w: &ReducedWord) -> bool {
    if candidate.pairs.len() != w.len() {
        return false;
    }
    let counts = w.counts();
    candidate
        .pairs
        .iter()
        .zip(w.letters())
        .all(|(&(k, t, s), l)| {
            k == l.var && s == l.sign && t >= 1 && t as usize <= counts[k as usize - 1]
        })
}

/// Substitutes `X_k` for every `X_{k,t}`.
pub fn project_variation(v: &VariationWord) -> ReducedWord {
    ReducedWord::from_letters(v.pairs.iter().map(|&(k, _, s)| Letter::new(k, s)))
}

/// The suffix `u_j` consisting of the last `j` letters, without renaming.
pub fn terminal_segment(w: &ReducedWord, j: usize) -> Result<ReducedWord> {
    if j > w.len() {
        return Err(Error::OutOfRange {
            index: j,
            max: w.len(),
        });
    }
    Ok(ReducedWord {
        letters: w.letters[w.len() - j..].to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn w(s: &str) -> ReducedWord {
        parse_word(s).unwrap()
    }

    #[test]
    fn parse_commutator_forms() {
        let a = w("x1 x2 x1^-1 x2^-1");
        assert_eq!(a.len(), 4);
        assert_eq!(a.num_vars(), 2);
        assert_eq!(w("[x1,x2]"), a);
        assert_eq!(w("x1*x2*x1^-1*x2^-1"), a);
    }

    #[test]
    fn parse_reduces_and_renames() {
        let v = w("x1 x1^-1 x2");
        assert_eq!(v.len(), 1);
        assert_eq!(v.num_vars(), 1);
        assert_eq!(v.letters(), &[Letter::pos(1)]);
    }

    #[test]
    fn parse_exponents_and_nesting() {
        assert_eq!(w("x1^3").len(), 3);
        assert_eq!(w("x1^-2"), free_reduce([Letter::neg(1), Letter::neg(1)]));
        let nested = w("[[x1,x2],x3]");
        assert_eq!(nested.len(), 10);
        assert_eq!(w("[x1,x1]"), ReducedWord::empty());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_word("x0"), Err(Error::Syntax { pos: 1, .. })));
        assert!(matches!(parse_word("x1^0"), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse_word("y1"), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse_word("[x1 x2]"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_word("x"), Err(Error::Syntax { pos: 1, .. })));
        assert_eq!(parse_nonempty_word("x2 x2^-1"), Err(Error::EmptyWord));
    }

    #[test]
    fn free_reduce_examples() {
        assert!(free_reduce([Letter::pos(1), Letter::neg(1)]).is_empty());
        let r = free_reduce([
            Letter::pos(1),
            Letter::pos(2),
            Letter::neg(2),
            Letter::pos(1),
        ]);
        assert_eq!(r.letters(), &[Letter::pos(1), Letter::pos(1)]);
        let c = w("[x1,x2]");
        assert_eq!(free_reduce(c.letters().iter().copied()), c);
    }

    fn m_series(d: u64, l: u64) -> BigUint {
        let q = BigUint::from(2 * l * (d + 1));
        let mut term = BigUint::one();
        let mut sum = BigUint::from(0u32);
        for _ in 0..=(2 * l + 2) {
            sum += &term;
            term *= &q;
        }
        sum
    }

    #[test]
    fn m_constant_matches_series() {
        assert_eq!(m_constant(1, 1), BigUint::from(341u32));
        let expect = (Pow::pow(&BigUint::from(24u32), 11u32) - 1u32) / 23u32;
        assert_eq!(m_constant(2, 4), expect);
        for d in 1..=6 {
            for l in 1..=6 {
                assert_eq!(m_constant(d, l), m_series(d, l), "d={d} l={l}");
            }
        }
        assert_eq!(m_prime(3), m_constant(3, 3));
    }

    #[test]
    fn example_variations_of_commutator() {
        let c = w("[x1,x2]");
        let all: Vec<_> = variations(&c).collect();
        assert_eq!(all.len(), 16);
        assert_eq!(variation_count(&c), BigUint::from(16u32));
        let ex = VariationWord::from_pairs(vec![
            (1, 2, Sign::Plus),
            (2, 1, Sign::Plus),
            (1, 1, Sign::Minus),
            (2, 1, Sign::Minus),
        ])
        .unwrap();
        assert!(all.contains(&ex));
        assert!(is_variation(&ex, &c));
        assert_eq!(project_variation(&ex), c);
        let bad = VariationWord::from_pairs(vec![
            (1, 3, Sign::Plus),
            (2, 1, Sign::Plus),
            (1, 2, Sign::Minus),
            (2, 2, Sign::Minus),
        ])
        .unwrap();
        assert!(!is_variation(&bad, &c));
        // flattening numbers pairs by first occurrence
        assert_eq!(ex.flattened(), &w("x1 x2 x3^-1 x2^-1"));
        assert_eq!(ex.pair_of_fresh(1), (1, 2));
    }

    #[test]
    fn variation_small_cases() {
        let x1 = w("x1");
        let v: Vec<_> = variations(&x1).collect();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].second_indices(), vec![1]);
        let sq = w("x1^2");
        let ts: Vec<_> = variations(&sq).map(|v| v.second_indices()).collect();
        assert_eq!(ts, vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]);
        assert_eq!(variation_count(&w("x1 x2 x3")), BigUint::from(1u32));
        assert_eq!(variation_count(&w("x1^3")), BigUint::from(27u32));
        assert_eq!(variations(&w("x1^3")).count(), 27);
        let identity_t = variation_with(&sq, &[1, 1]).unwrap();
        assert!(is_variation(&identity_t, &sq));
        assert_eq!(variations(&ReducedWord::empty()).count(), 0);
    }

    #[test]
    fn variations_distinct_and_counted() {
        // all words with l <= 5 over few variables where a_k <= 3
        let samples = [
            "x1", "x1^2", "x1^3", "[x1,x2]", "x1 x2 x1", "x1^2 x2^-1 x1", "x1 x2 x3 x1^-1 x2",
            "x1^3 x2^2", "x1 x2^-1 x1 x2^-1 x3",
        ];
        for s in samples {
            let word = w(s);
            let set: HashSet<_> = variations(&word).map(|v| v.pairs().to_vec()).collect();
            assert_eq!(BigUint::from(set.len()), variation_count(&word), "{s}");
            for v in variations(&word) {
                assert!(is_variation(&v, &word));
                assert_eq!(project_variation(&v), word);
                assert_eq!(v.flattened().len(), word.len());
                assert_eq!(free_reduce(v.flattened().letters().iter().copied()), *v.flattened());
            }
        }
    }

    #[test]
    fn terminal_segments() {
        let c = w("[x1,x2]");
        assert_eq!(terminal_segment(&c, 1).unwrap().letters(), &[Letter::neg(2)]);
        assert!(terminal_segment(&c, 0).unwrap().is_empty());
        assert_eq!(terminal_segment(&c, 4).unwrap(), c);
        assert!(matches!(
            terminal_segment(&c, 5),
            Err(Error::OutOfRange { index: 5, max: 4 })
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn letters() -> impl Strategy<Value = Vec<Letter>> {
            prop::collection::vec((1u32..5, any::<bool>()), 0..30).prop_map(|v| {
                v.into_iter()
                    .map(|(k, s)| Letter::new(k, if s { Sign::Plus } else { Sign::Minus }))
                    .collect()
            })
        }

        proptest! {
            #[test]
            fn reduce_is_idempotent_and_reduced(ls in letters()) {
                let r = free_reduce(ls.clone());
                prop_assert!(r.len() <= ls.len());
                prop_assert!(!r.letters().windows(2).any(|p| p[0].cancels(p[1])));
                prop_assert_eq!(free_reduce(r.letters().iter().copied()), r.clone());
                let counts = r.counts();
                prop_assert_eq!(counts.iter().sum::<usize>(), r.len());
                prop_assert!(counts.iter().all(|&a| a > 0));
            }

            #[test]
            fn format_parse_round_trip(ls in letters()) {
                let r = free_reduce(ls);
                prop_assume!(r.len() <= 20);
                prop_assert_eq!(parse_word(&format_word(&r)).unwrap(), r);
            }
        }
    }
}
