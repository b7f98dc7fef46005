//! Noncommutative polynomials over a word monoid, with coefficients in an
//! abstract exact commutative ring.  Provides the concatenation, shuffle and
//! quasi-shuffle products and the word pairing.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use num::BigRational;

use crate::error::{Error, Result};
use crate::words::{Alphabet, Word};

/// Exact rational scalars.
pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub fn qz(n: i64) -> Q {
    Q::from_integer(n.into())
}

/// Exact commutative ring containing the rationals.
pub trait Ring: Clone + Eq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn from_rat(value: &Q) -> Self;
}

impl Ring for Q {
    fn zero() -> Self {
        num::Zero::zero()
    }
    fn one() -> Self {
        num::One::one()
    }
    fn is_zero(&self) -> bool {
        num::Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn from_rat(value: &Q) -> Self {
        value.clone()
    }
}

/// A noncommutative polynomial: finite association word -> coefficient,
/// canonical form (no stored zeros), deterministic term order
/// (weight, then lex).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NcPoly<C: Ring> {
    alphabet: Alphabet,
    terms: BTreeMap<Word, C>,
}

impl<C: Ring> NcPoly<C> {
    pub fn zero(alphabet: Alphabet) -> Self {
        NcPoly {
            alphabet,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alphabet: Alphabet) -> Self {
        let mut p = Self::zero(alphabet);
        p.add_term(Word::empty(alphabet), C::one());
        p
    }

    pub fn word(w: Word) -> Self {
        let mut p = Self::zero(w.alphabet());
        p.add_term(w, C::one());
        p
    }

    pub fn monomial(w: Word, c: C) -> Self {
        let mut p = Self::zero(w.alphabet());
        p.add_term(w, c);
        p
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> C {
        self.terms.get(w).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, w: Word, c: C) {
        debug_assert_eq!(w.alphabet(), self.alphabet);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().add(&c);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.alphabet, rhs.alphabet, "mixed alphabets in add");
        let mut out = self.clone();
        for (w, c) in rhs.terms() {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.alphabet);
        for (w, c) in self.terms() {
            out.terms.insert(w.clone(), c.neg());
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.alphabet);
        if c.is_zero() {
            return out;
        }
        for (w, k) in self.terms() {
            out.add_term(w.clone(), k.mul(c));
        }
        out
    }

    pub fn scale_rat(&self, c: &Q) -> Self {
        self.scale(&C::from_rat(c))
    }

    pub fn map_coeffs<D: Ring>(&self, f: impl Fn(&C) -> D) -> NcPoly<D> {
        let mut out = NcPoly::zero(self.alphabet);
        for (w, c) in self.terms() {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    /// Restriction to weight-k words.
    pub fn graded_component(&self, k: u32) -> Self {
        let mut out = Self::zero(self.alphabet);
        for (w, c) in self.terms() {
            if w.weight() == k {
                out.terms.insert(w.clone(), c.clone());
            }
        }
        out
    }

    pub fn max_weight(&self) -> u32 {
        self.terms.keys().map(|w| w.weight()).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut weights = self.terms.keys().map(|w| w.weight());
        match weights.next() {
            None => true,
            Some(first) => weights.all(|w| w == first),
        }
    }

    /// Concatenation product (bilinear extension of word concatenation).
    pub fn conc(&self, rhs: &Self) -> Self {
        assert_eq!(self.alphabet, rhs.alphabet, "mixed alphabets in conc");
        let mut out = Self::zero(self.alphabet);
        for (u, a) in self.terms() {
            for (v, b) in rhs.terms() {
                out.add_term(u.concat(v), a.mul(b));
            }
        }
        out
    }

    /// Lie bracket under concatenation: [p, q] = pq - qp.
    pub fn bracket(&self, rhs: &Self) -> Self {
        self.conc(rhs).sub(&rhs.conc(self))
    }

    fn bilinear(&self, rhs: &Self, word_product: impl Fn(&Word, &Word) -> Rc<NcPoly<Q>>) -> Self {
        let mut out = Self::zero(self.alphabet);
        for (u, a) in self.terms() {
            for (v, b) in rhs.terms() {
                let ab = a.mul(b);
                if ab.is_zero() {
                    continue;
                }
                for (w, n) in word_product(u, v).terms() {
                    out.add_term(w.clone(), ab.mul(&C::from_rat(n)));
                }
            }
        }
        out
    }

    pub fn shuffle(&self, rhs: &Self) -> Result<Self> {
        if self.alphabet != rhs.alphabet {
            return Err(Error::MixedAlphabets("shuffle".into()));
        }
        Ok(self.bilinear(rhs, word_shuffle))
    }

    pub fn stuffle(&self, rhs: &Self) -> Result<Self> {
        if self.alphabet != Alphabet::Y || rhs.alphabet != Alphabet::Y {
            return Err(Error::StuffleOnX);
        }
        Ok(self.bilinear(rhs, word_stuffle))
    }

    /// n-th shuffle (resp. stuffle) power; `p^0 = 1`.
    pub fn product_power(&self, n: u32, kind: ProductKind) -> Result<Self> {
        let mut out = Self::one(self.alphabet);
        for _ in 0..n {
            out = match kind {
                ProductKind::Shuffle => out.shuffle(self)?,
                ProductKind::Stuffle => out.stuffle(self)?,
                ProductKind::Conc => out.conc(self),
            };
        }
        Ok(out)
    }

    /// Sum over words of products of coefficients.
    pub fn pairing(&self, rhs: &Self) -> C {
        let mut acc = C::zero();
        // iterate over the smaller support
        let (small, large) = if self.terms.len() <= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        for (w, a) in small.terms() {
            if let Some(b) = large.terms.get(w) {
                acc = acc.add(&a.mul(b));
            }
        }
        acc
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ProductKind {
    Conc,
    Shuffle,
    Stuffle,
}

type MemoKey = (Word, Word, bool);

thread_local! {
    static PRODUCT_MEMO: RefCell<HashMap<MemoKey, Rc<NcPoly<Q>>>> = RefCell::new(HashMap::new());
}

const MEMO_CAP: usize = 1 << 20;

fn memoized(
    u: &Word,
    v: &Word,
    stuffle: bool,
    compute: impl FnOnce() -> NcPoly<Q>,
) -> Rc<NcPoly<Q>> {
    // both products are commutative: normalize the key
    let key = if u.lex_cmp(v) == Ordering::Greater {
        (v.clone(), u.clone(), stuffle)
    } else {
        (u.clone(), v.clone(), stuffle)
    };
    if let Some(hit) = PRODUCT_MEMO.with(|m| m.borrow().get(&key).cloned()) {
        return hit;
    }
    let value = Rc::new(compute());
    PRODUCT_MEMO.with(|m| {
        let mut m = m.borrow_mut();
        if m.len() < MEMO_CAP {
            m.insert(key, value.clone());
        }
    });
    value
}

/// Shuffle product of two words: xu ⧢ yv = x(u ⧢ yv) + y(xu ⧢ v).
pub fn word_shuffle(u: &Word, v: &Word) -> Rc<NcPoly<Q>> {
    if u.is_empty() {
        return Rc::new(NcPoly::word(v.clone()));
    }
    if v.is_empty() {
        return Rc::new(NcPoly::word(u.clone()));
    }
    memoized(u, v, false, || {
        let alphabet = u.alphabet();
        let mut out = NcPoly::zero(alphabet);
        let head_u = u.prefix(1);
        let head_v = v.prefix(1);
        for (w, c) in word_shuffle(&u.suffix(1), v).terms() {
            out.add_term(head_u.concat(w), c.clone());
        }
        for (w, c) in word_shuffle(u, &v.suffix(1)).terms() {
            out.add_term(head_v.concat(w), c.clone());
        }
        out
    })
}

/// Quasi-shuffle product of two Y-words:
/// y_i u ⬦ y_j v = y_i(u ⬦ y_j v) + y_j(y_i u ⬦ v) + y_{i+j}(u ⬦ v).
pub fn word_stuffle(u: &Word, v: &Word) -> Rc<NcPoly<Q>> {
    debug_assert_eq!(u.alphabet(), Alphabet::Y);
    if u.is_empty() {
        return Rc::new(NcPoly::word(v.clone()));
    }
    if v.is_empty() {
        return Rc::new(NcPoly::word(u.clone()));
    }
    memoized(u, v, true, || {
        let mut out = NcPoly::zero(Alphabet::Y);
        let i = u.letters()[0];
        let j = v.letters()[0];
        let head_u = u.prefix(1);
        let head_v = v.prefix(1);
        let contracted = Word::y_from_indices(&[i + j]);
        for (w, c) in word_stuffle(&u.suffix(1), v).terms() {
            out.add_term(head_u.concat(w), c.clone());
        }
        for (w, c) in word_stuffle(u, &v.suffix(1)).terms() {
            out.add_term(head_v.concat(w), c.clone());
        }
        for (w, c) in word_stuffle(&u.suffix(1), &v.suffix(1)).terms() {
            out.add_term(contracted.concat(w), c.clone());
        }
        out
    })
}

impl<C: Ring + fmt::Display> fmt::Display for NcPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = c.to_string();
            let ws = if w.is_empty() {
                "1".to_string()
            } else {
                format!("[{w}]")
            };
            if cs == "1" {
                write!(f, "{ws}")?;
            } else if w.is_empty() {
                write!(f, "{cs}")?;
            } else {
                write!(f, "{cs} {ws}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::words_of_weight;

    fn xw(s: &str) -> Word {
        Word::x_from_bits(s).unwrap()
    }
    fn yw(s: &str) -> Word {
        Word::y_from_indices_str(s).unwrap()
    }
    fn wp(w: Word) -> NcPoly<Q> {
        NcPoly::word(w)
    }

    /// Independent shuffle oracle: enumerate all interleavings by choosing
    /// which positions of the result come from `u`.
    fn shuffle_oracle(u: &Word, v: &Word) -> NcPoly<Q> {
        let n = u.len() + v.len();
        let mut out = NcPoly::zero(u.alphabet());
        for mask in 0..(1u64 << n) {
            if (mask.count_ones() as usize) != u.len() {
                continue;
            }
            let (mut iu, mut iv) = (0usize, 0usize);
            let mut letters = Vec::with_capacity(n);
            let mut ok = true;
            for pos in 0..n {
                if (mask >> pos) & 1 == 1 {
                    if iu >= u.len() {
                        ok = false;
                        break;
                    }
                    letters.push(u.letters()[iu]);
                    iu += 1;
                } else {
                    if iv >= v.len() {
                        ok = false;
                        break;
                    }
                    letters.push(v.letters()[iv]);
                    iv += 1;
                }
            }
            if ok {
                out.add_term(Word::from_letters(u.alphabet(), letters), qz(1));
            }
        }
        out
    }

    /// Independent quasi-shuffle oracle: plain recursion on slices, no
    /// memoization, no shared code path.
    fn stuffle_oracle(u: &[u8], v: &[u8]) -> NcPoly<Q> {
        if u.is_empty() {
            return wp(Word::y_from_indices(v));
        }
        if v.is_empty() {
            return wp(Word::y_from_indices(u));
        }
        let mut out = NcPoly::zero(Alphabet::Y);
        let a = stuffle_oracle(&u[1..], v);
        for (w, c) in a.terms() {
            out.add_term(Word::y_from_indices(&[u[0]]).concat(w), c.clone());
        }
        let b = stuffle_oracle(u, &v[1..]);
        for (w, c) in b.terms() {
            out.add_term(Word::y_from_indices(&[v[0]]).concat(w), c.clone());
        }
        let c0 = stuffle_oracle(&u[1..], &v[1..]);
        for (w, c) in c0.terms() {
            out.add_term(Word::y_from_indices(&[u[0] + v[0]]).concat(w), c.clone());
        }
        out
    }

    #[test]
    fn conc_examples() {
        assert_eq!(wp(xw("0")).conc(&wp(xw("1"))), wp(xw("01")));
        let p = wp(xw("01")).add(&wp(xw("10")).scale(&qz(2)));
        assert_eq!(NcPoly::one(Alphabet::X).conc(&p), p);
        let lhs = wp(yw("2")).add(&wp(yw("1")));
        let got = lhs.conc(&wp(yw("1")));
        let mut expected = NcPoly::zero(Alphabet::Y);
        expected.add_term(yw("2,1"), qz(1));
        expected.add_term(yw("1,1"), qz(1));
        assert_eq!(got, expected);
    }

    #[test]
    fn shuffle_examples() {
        let got = wp(xw("0")).shuffle(&wp(xw("1"))).unwrap();
        let mut expected = NcPoly::zero(Alphabet::X);
        expected.add_term(xw("01"), qz(1));
        expected.add_term(xw("10"), qz(1));
        assert_eq!(got, expected);

        // derived via the interleaving oracle
        let got = wp(xw("01")).shuffle(&wp(xw("1"))).unwrap();
        let expected = shuffle_oracle(&xw("01"), &xw("1"));
        assert_eq!(got, expected);
        assert_eq!(expected.coeff(&xw("011")), qz(2));
        assert_eq!(expected.coeff(&xw("101")), qz(1));

        let w = wp(xw("0110"));
        assert_eq!(w.shuffle(&NcPoly::one(Alphabet::X)).unwrap(), w);
    }

    #[test]
    fn shuffle_matches_oracle_smallish() {
        for (u, v) in [
            (xw("01"), xw("01")),
            (xw("001"), xw("01")),
            (xw("10"), xw("110")),
            (yw("2,1"), yw("1")),
        ] {
            let got = wp(u.clone()).shuffle(&wp(v.clone())).unwrap();
            assert_eq!(got, shuffle_oracle(&u, &v), "u={u} v={v}");
        }
    }

    #[test]
    fn stuffle_examples() {
        let got = wp(yw("1")).stuffle(&wp(yw("1"))).unwrap();
        let mut expected = NcPoly::zero(Alphabet::Y);
        expected.add_term(yw("1,1"), qz(2));
        expected.add_term(yw("2"), qz(1));
        assert_eq!(got, expected);

        // Euler: y_a ⬦ y_b = y_a y_b + y_b y_a + y_{a+b}
        for (a, b) in [(2u8, 3u8), (1, 4), (2, 2)] {
            let got = wp(yw(&a.to_string()))
                .stuffle(&wp(yw(&b.to_string())))
                .unwrap();
            let mut expected = NcPoly::zero(Alphabet::Y);
            expected.add_term(Word::y_from_indices(&[a, b]), qz(1));
            expected.add_term(Word::y_from_indices(&[b, a]), qz(1));
            expected.add_term(Word::y_from_indices(&[a + b]), qz(1));
            assert_eq!(got, expected);
        }

        // derived via the independent recursive oracle
        let got = wp(yw("2")).stuffle(&wp(yw("2,1"))).unwrap();
        let expected = stuffle_oracle(&[2], &[2, 1]);
        assert_eq!(got, expected);
        assert_eq!(expected.coeff(&yw("2,2,1")), qz(2));
        assert_eq!(expected.coeff(&yw("2,1,2")), qz(1));
        assert_eq!(expected.coeff(&yw("4,1")), qz(1));
        assert_eq!(expected.coeff(&yw("2,3")), qz(1));

        assert!(wp(xw("01")).stuffle(&wp(xw("1"))).is_err());
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(wp(xw("01")).pairing(&wp(xw("01"))), qz(1));
        assert_eq!(wp(xw("01")).pairing(&wp(xw("10"))), qz(0));
        let t = wp(yw("2")).scale(&qz(2)).add(&wp(yw("1")));
        let p = wp(yw("2")).add(&wp(yw("1")).scale(&qz(3)));
        assert_eq!(t.pairing(&p), qz(5));
    }

    #[test]
    fn graded_component_examples() {
        let p = wp(xw("0")).add(&wp(xw("01")));
        assert_eq!(p.graded_component(2), wp(xw("01")));
        let p = wp(yw("2")).add(&wp(yw("1,1")));
        assert_eq!(p.graded_component(2), p);
        let p = NcPoly::<Q>::one(Alphabet::X)
            .scale(&qz(7))
            .add(&wp(xw("0")));
        assert_eq!(
            p.graded_component(0),
            NcPoly::one(Alphabet::X).scale(&qz(7))
        );
    }

    #[test]
    fn products_weight_graded() {
        for weight_a in 1..=3u32 {
            for weight_b in 1..=3u32 {
                for u in words_of_weight(Alphabet::Y, weight_a) {
                    for v in words_of_weight(Alphabet::Y, weight_b) {
                        let st = wp(u.clone()).stuffle(&wp(v.clone())).unwrap();
                        for (w, _) in st.terms() {
                            assert_eq!(w.weight(), weight_a + weight_b);
                        }
                        let sh = wp(u.clone()).shuffle(&wp(v.clone())).unwrap();
                        for (w, _) in sh.terms() {
                            assert_eq!(w.weight(), weight_a + weight_b);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn distributivity_and_units() {
        let a = wp(yw("2")).add(&wp(yw("1,1")).scale(&q(1, 2)));
        let b = wp(yw("1")).sub(&wp(yw("3")));
        let c = wp(yw("2,1"));
        for kind in [
            ProductKind::Conc,
            ProductKind::Shuffle,
            ProductKind::Stuffle,
        ] {
            let prod = |x: &NcPoly<Q>, y: &NcPoly<Q>| match kind {
                ProductKind::Conc => x.conc(y),
                ProductKind::Shuffle => x.shuffle(y).unwrap(),
                ProductKind::Stuffle => x.stuffle(y).unwrap(),
            };
            let lhs = prod(&a.add(&b), &c);
            let rhs = prod(&a, &c).add(&prod(&b, &c));
            assert_eq!(lhs, rhs);
            assert_eq!(prod(&NcPoly::one(Alphabet::Y), &a), a);
            assert_eq!(prod(&a, &NcPoly::one(Alphabet::Y)), a);
        }
    }
}
