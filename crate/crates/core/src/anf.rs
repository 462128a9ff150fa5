//! Algebraic normal form over GF(2).

use std::collections::BTreeSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::boolean::{bits_to_index, check_vars, BooleanFunction, Subset};
use crate::error::{Error, Result};
use crate::transform::moebius_gf2;

/// `xor_{S in monomials} prod_{i in S} x_i`; the empty set is the constant 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AnfPolynomial {
    n: usize,
    monomials: BTreeSet<Subset>,
}

impl AnfPolynomial {
    pub fn new(n: usize, monomials: impl IntoIterator<Item = Subset>) -> Result<Self> {
        check_vars(n)?;
        let mut set = BTreeSet::new();
        for m in monomials {
            if n < 32 && m >> n != 0 {
                return Err(Error::Parameter(format!(
                    "monomial {m:#b} uses variables beyond x{n}"
                )));
            }
            // Repeated monomials cancel.
            if !set.insert(m) {
                set.remove(&m);
            }
        }
        Ok(AnfPolynomial { n, monomials: set })
    }

    pub fn zero(n: usize) -> Self {
        AnfPolynomial {
            n,
            monomials: BTreeSet::new(),
        }
    }

    /// Möbius transform of the truth table.
    pub fn moebius(f: &BooleanFunction) -> Result<Self> {
        check_vars(f.n())?;
        let mut v = f.table().to_vec();
        moebius_gf2(&mut v);
        let monomials = v
            .iter()
            .enumerate()
            .filter(|(_, &c)| c)
            .map(|(s, _)| s as Subset)
            .collect();
        Ok(AnfPolynomial {
            n: f.n(),
            monomials,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn monomials(&self) -> &BTreeSet<Subset> {
        &self.monomials
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.monomials.contains(&s)
    }

    /// GF(2) degree; 0 for constants.
    pub fn degree(&self) -> usize {
        self.monomials
            .iter()
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, x: &[bool]) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::Arity {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(self.eval_index(bits_to_index(x)))
    }

    #[inline]
    pub fn eval_index(&self, index: usize) -> bool {
        let idx = index as Subset;
        self.monomials.iter().filter(|&&m| m & idx == m).count() % 2 == 1
    }

    /// Truth table by the inverse Möbius transform.
    pub fn to_function(&self) -> BooleanFunction {
        let mut v = vec![false; 1 << self.n];
        for &m in &self.monomials {
            v[m as usize] = true;
        }
        moebius_gf2(&mut v);
        BooleanFunction::from_truth_table(self.n, v).expect("size matches")
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::VariableCountMismatch(self.n, other.n));
        }
        Ok(AnfPolynomial {
            n: self.n,
            monomials: self
                .monomials
                .symmetric_difference(&other.monomials)
                .copied()
                .collect(),
        })
    }

    /// Parses the text form `x1x2+x3` (`⊕` is accepted for `+`, `1` is the
    /// constant monomial and `0` the empty polynomial).
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        AnfParser { text, pos: 0, n }.parse()
    }
}

/// `LSB^l` of the input weight as an ANF: the elementary symmetric polynomial
/// of degree `2^(l-1)`, i.e. all monomials of exactly that size.
pub fn lsb_symmetric(l: usize, n: usize) -> Result<AnfPolynomial> {
    if l == 0 {
        return Err(Error::Parameter("lsb index starts at 1".into()));
    }
    check_vars(n)?;
    if l > 32 || 1usize << (l - 1) > n {
        return Ok(AnfPolynomial::zero(n));
    }
    let size = 1u32 << (l - 1);
    let monomials = (0..(1u32 << n)).filter(|m| m.count_ones() == size);
    AnfPolynomial::new(n, monomials)
}

/// Serialized as its display string, e.g. `"x1x2+x3"`.
impl Serialize for AnfPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for AnfPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return write!(f, "0");
        }
        // Sort by degree, then lexicographically by variable index.
        let mut terms: Vec<Vec<usize>> = self
            .monomials
            .iter()
            .map(|&m| crate::boolean::subset_indices(m))
            .collect();
        terms.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let rendered: Vec<String> = terms
            .iter()
            .map(|t| {
                if t.is_empty() {
                    "1".to_string()
                } else {
                    t.iter().map(|i| format!("x{i}")).collect()
                }
            })
            .collect();
        write!(f, "{}", rendered.join("+"))
    }
}

struct AnfParser<'a> {
    text: &'a str,
    pos: usize,
    n: usize,
}

impl AnfParser<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    fn parse(mut self) -> Result<AnfPolynomial> {
        check_vars(self.n)?;
        let mut monomials = Vec::new();
        loop {
            self.skip_ws();
            monomials.extend(self.monomial()?);
            self.skip_ws();
            match self.peek() {
                None => break,
                Some('+') | Some('⊕') => {
                    self.bump();
                }
                Some(c) => return Err(self.err(format!("unexpected `{c}`"))),
            }
        }
        AnfPolynomial::new(self.n, monomials)
    }

    /// One product term; `None` for the literal `0`.
    fn monomial(&mut self) -> Result<Option<Subset>> {
        match self.peek() {
            Some('0') => {
                self.bump();
                return Ok(None);
            }
            Some('1') => {
                self.bump();
                return Ok(Some(0));
            }
            Some('x') => {}
            Some(c) => return Err(self.err(format!("expected a monomial, found `{c}`"))),
            None => return Err(self.err("expected a monomial")),
        }
        let mut mask: Subset = 0;
        while self.peek() == Some('x') {
            self.bump();
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.bump();
            }
            if start == self.pos {
                return Err(self.err("expected a variable index after `x`"));
            }
            let idx: usize = self.text[start..self.pos]
                .parse()
                .map_err(|_| self.err("variable index too large"))?;
            if idx == 0 || idx > self.n {
                self.pos = start;
                return Err(self.err(format!("variable x{idx} outside x1..x{}", self.n)));
            }
            // x_i^2 = x_i
            mask |= 1 << (idx - 1);
            if self.peek() == Some('*') {
                self.bump();
            }
        }
        Ok(Some(mask))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolean::{make_family, subset};

    fn set(sets: &[&[usize]]) -> BTreeSet<Subset> {
        sets.iter().map(|s| subset(s)).collect()
    }

    #[test]
    fn moebius_examples() {
        let maj3 = AnfPolynomial::moebius(&make_family("maj", &[3]).unwrap()).unwrap();
        assert_eq!(maj3.monomials(), &set(&[&[1, 2], &[2, 3], &[1, 3]]));
        let xor4 = AnfPolynomial::moebius(&make_family("xor", &[4]).unwrap()).unwrap();
        assert_eq!(xor4.monomials(), &set(&[&[1], &[2], &[3], &[4]]));
        let and2 = AnfPolynomial::moebius(&make_family("and", &[2]).unwrap()).unwrap();
        assert_eq!(and2.monomials(), &set(&[&[1, 2]]));
    }

    /// Direct `c_S = xor_{supp(x) ⊆ S} f(x)`.
    #[test]
    fn moebius_matches_subset_xor() {
        for hex in ["6b", "e8", "01", "fe", "96", "3c", "81"] {
            let f = BooleanFunction::from_hex(3, hex).unwrap();
            let anf = AnfPolynomial::moebius(&f).unwrap();
            for s in 0..8u32 {
                let c = (0..8u32)
                    .filter(|&m| m & s == m)
                    .filter(|&m| f.value(m as usize))
                    .count()
                    % 2
                    == 1;
                assert_eq!(anf.contains(s), c);
            }
        }
    }

    #[test]
    fn degrees() {
        let deg = |name: &str, p: &[usize]| {
            AnfPolynomial::moebius(&make_family(name, p).unwrap())
                .unwrap()
                .degree()
        };
        assert_eq!(deg("maj", &[3]), 2);
        assert_eq!(deg("and", &[5]), 5);
        assert_eq!(deg("mod", &[3, 3]), 2);
        for n in 3..=10 {
            let expected = if n % 3 == 0 { n - 1 } else { n };
            assert_eq!(deg("mod", &[3, n]), expected, "n = {n}");
        }
        assert_eq!(AnfPolynomial::zero(3).degree(), 0);
    }

    #[test]
    fn eval_examples() {
        let p = AnfPolynomial::new(2, [subset(&[1, 2])]).unwrap();
        assert!(p.eval(&[true, true]).unwrap());
        assert!(!p.eval(&[true, false]).unwrap());
        let maj3 = AnfPolynomial::moebius(&make_family("maj", &[3]).unwrap()).unwrap();
        assert!(maj3.eval(&[true, false, true]).unwrap());
        assert!(matches!(p.eval(&[true]), Err(Error::Arity { .. })));
    }

    #[test]
    fn round_trip_families() {
        for n in 1..=12usize {
            for f in [
                make_family("and", &[n]).unwrap(),
                make_family("or", &[n]).unwrap(),
                make_family("cq", &[n]).unwrap(),
                make_family("c3", &[n]).unwrap(),
                make_family("mod", &[3, n]).unwrap(),
                make_family("maj", &[n | 1]).unwrap(),
            ] {
                let anf = AnfPolynomial::moebius(&f).unwrap();
                assert_eq!(anf.to_function(), f);
                if n <= 8 {
                    for m in 0..f.len() {
                        assert_eq!(anf.eval_index(m), f.value(m));
                    }
                }
            }
        }
    }

    #[test]
    fn lsb_examples() {
        assert_eq!(
            lsb_symmetric(1, 4).unwrap().monomials(),
            &set(&[&[1], &[2], &[3], &[4]])
        );
        assert_eq!(
            lsb_symmetric(2, 3).unwrap().monomials(),
            &set(&[&[1, 2], &[2, 3], &[1, 3]])
        );
        assert!(lsb_symmetric(3, 3).unwrap().is_zero());
        assert!(lsb_symmetric(0, 3).is_err());
    }

    #[test]
    fn lsb_matches_weight_bits() {
        for n in 1..=12usize {
            for l in 1..=3usize {
                let p = lsb_symmetric(l, n).unwrap();
                for m in 0..(1usize << n) {
                    let w = m.count_ones() as usize;
                    assert_eq!(p.eval_index(m), w >> (l - 1) & 1 == 1, "l={l} n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn parse_and_display() {
        let p = AnfPolynomial::parse(3, "x1x2+x2x3+x1x3").unwrap();
        assert_eq!(p.to_function(), make_family("maj", &[3]).unwrap());
        assert_eq!(p.to_string(), "x1x2+x1x3+x2x3");
        let q = AnfPolynomial::parse(3, "1 ⊕ x1*x3 + x2 + x2").unwrap();
        assert_eq!(q.monomials(), &set(&[&[], &[1, 3]]));
        assert_eq!(q.to_string(), "1+x1x3");
        assert!(AnfPolynomial::parse(3, "0").unwrap().is_zero());
        match AnfPolynomial::parse(3, "x1+x4") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(AnfPolynomial::parse(3, "x1+").is_err());
        assert!(AnfPolynomial::parse(3, "x1 y").is_err());
    }
}
