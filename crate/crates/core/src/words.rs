//! Alphabets, graded words, total orders and Lyndon-word machinery.
//!
//! Two alphabets are supported: `X = {x0, x1}` ordered `x0 < x1`, and the
//! graded alphabet `Y = {y1, y2, ...}` ordered `y1 > y2 > y3 > ...`.
//! The weight of an X-word is its length; the weight of a Y-word is the sum
//! of its letter indices.  Weight is additive under concatenation.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Alphabet {
    X,
    Y,
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alphabet::X => write!(f, "x"),
            Alphabet::Y => write!(f, "y"),
        }
    }
}

/// A single letter: for X the value is 0 or 1, for Y the value is the index
/// `k >= 1` of `y_k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Letter {
    pub alphabet: Alphabet,
    pub value: u8,
}

impl Letter {
    pub fn x0() -> Self {
        Letter {
            alphabet: Alphabet::X,
            value: 0,
        }
    }
    pub fn x1() -> Self {
        Letter {
            alphabet: Alphabet::X,
            value: 1,
        }
    }
    pub fn y(k: u8) -> Self {
        assert!(k >= 1, "Y letter index must be >= 1");
        Letter {
            alphabet: Alphabet::Y,
            value: k,
        }
    }
    pub fn weight(&self) -> u32 {
        match self.alphabet {
            Alphabet::X => 1,
            Alphabet::Y => self.value as u32,
        }
    }
}

/// Letter order: x0 < x1 on X, y1 > y2 > y3 > ... on Y.
fn letter_cmp(alphabet: Alphabet, a: u8, b: u8) -> Ordering {
    match alphabet {
        Alphabet::X => a.cmp(&b),
        Alphabet::Y => b.cmp(&a),
    }
}

/// A word over one of the two alphabets.  Immutable once built.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Word {
    alphabet: Alphabet,
    letters: Vec<u8>,
}

impl Word {
    pub fn empty(alphabet: Alphabet) -> Self {
        Word {
            alphabet,
            letters: Vec::new(),
        }
    }

    pub fn from_letters(alphabet: Alphabet, letters: Vec<u8>) -> Self {
        if alphabet == Alphabet::X {
            assert!(letters.iter().all(|&l| l <= 1), "X letters are 0 or 1");
        } else {
            assert!(
                letters.iter().all(|&l| l >= 1),
                "Y letter index must be >= 1"
            );
        }
        Word { alphabet, letters }
    }

    /// X-word from a 0/1 string, e.g. "001" = x0 x0 x1.
    pub fn x_from_bits(s: &str) -> Result<Self> {
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => letters.push(0),
                '1' => letters.push(1),
                _ => {
                    return Err(Error::Parse(format!(
                        "invalid X-word character {c:?} in {s:?}"
                    )))
                }
            }
        }
        Ok(Word {
            alphabet: Alphabet::X,
            letters,
        })
    }

    /// Y-word from comma-separated indices, e.g. "2,1" = y2 y1.
    pub fn y_from_indices_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Ok(Word::empty(Alphabet::Y));
        }
        let mut letters = Vec::new();
        for part in s.split(',') {
            let k: u8 = part
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("invalid Y index {part:?} in {s:?}")))?;
            if k == 0 {
                return Err(Error::Parse(format!("Y index must be >= 1 in {s:?}")));
            }
            letters.push(k);
        }
        Ok(Word {
            alphabet: Alphabet::Y,
            letters,
        })
    }

    pub fn y_from_indices(indices: &[u8]) -> Self {
        Word::from_letters(Alphabet::Y, indices.to_vec())
    }

    pub fn parse(alphabet: Alphabet, s: &str) -> Result<Self> {
        match alphabet {
            Alphabet::X => Word::x_from_bits(s),
            Alphabet::Y => Word::y_from_indices_str(s),
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn weight(&self) -> u32 {
        match self.alphabet {
            Alphabet::X => self.letters.len() as u32,
            Alphabet::Y => self.letters.iter().map(|&k| k as u32).sum(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        assert_eq!(
            self.alphabet, other.alphabet,
            "concat requires one alphabet"
        );
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word {
            alphabet: self.alphabet,
            letters,
        }
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().map(|&v| Letter {
            alphabet: self.alphabet,
            value: v,
        })
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().map(|&v| Letter {
            alphabet: self.alphabet,
            value: v,
        })
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word {
            alphabet: self.alphabet,
            letters: self.letters[..len].to_vec(),
        }
    }

    pub fn suffix(&self, from: usize) -> Word {
        Word {
            alphabet: self.alphabet,
            letters: self.letters[from..].to_vec(),
        }
    }

    /// Pure lexicographic comparison induced by the letter order, with a
    /// proper prefix comparing strictly smaller than its extensions.
    /// Both words must be over the same alphabet.
    pub fn lex_cmp(&self, other: &Word) -> Ordering {
        debug_assert_eq!(self.alphabet, other.alphabet);
        for (a, b) in self.letters.iter().zip(other.letters.iter()) {
            match letter_cmp(self.alphabet, *a, *b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.letters.len().cmp(&other.letters.len())
    }

    /// True iff the word is strictly smaller than each of its proper
    /// nontrivial right factors.
    pub fn is_lyndon(&self) -> bool {
        if self.letters.is_empty() {
            return false;
        }
        for i in 1..self.letters.len() {
            if self.lex_cmp(&self.suffix(i)) != Ordering::Less {
                return false;
            }
        }
        true
    }

    /// Convergence: `x0 X* x1` on X, `(Y \ {y1}) Y*` on Y; the empty word
    /// counts as convergent.
    pub fn is_convergent(&self) -> bool {
        if self.letters.is_empty() {
            return true;
        }
        match self.alphabet {
            Alphabet::X => self.letters[0] == 0 && *self.letters.last().unwrap() == 1,
            Alphabet::Y => self.letters[0] >= 2,
        }
    }

    pub fn classify(&self) -> WordClass {
        WordClass {
            convergent: self.is_convergent(),
            lyndon: self.is_lyndon(),
        }
    }

    /// Standard factorization of a Lyndon word of length >= 2: the right
    /// factor is the longest proper right factor that is itself Lyndon
    /// (equivalently the lexicographically smallest proper suffix).
    pub fn standard_factorization(&self) -> Result<(Word, Word)> {
        if self.letters.len() < 2 {
            return Err(Error::SingleLetter);
        }
        assert!(
            self.is_lyndon(),
            "standard factorization requires a Lyndon word"
        );
        for i in 1..self.letters.len() {
            let right = self.suffix(i);
            if right.is_lyndon() {
                let left = self.prefix(i);
                debug_assert!(left.is_lyndon());
                debug_assert_eq!(left.lex_cmp(&right), Ordering::Less);
                return Ok((left, right));
            }
        }
        unreachable!("a Lyndon word always has a Lyndon proper suffix");
    }

    /// Decreasing Lyndon factorization `w = l1^i1 ... lk^ik` with
    /// `l1 > l2 > ... > lk` (Duval's algorithm, any ordered alphabet).
    pub fn lyndon_factorization(&self) -> Vec<(Word, u32)> {
        let s = &self.letters;
        let n = s.len();
        let mut factors: Vec<Word> = Vec::new();
        let mut i = 0;
        while i < n {
            let (mut j, mut k) = (i + 1, i);
            while j < n && letter_cmp(self.alphabet, s[k], s[j]) != Ordering::Greater {
                if letter_cmp(self.alphabet, s[k], s[j]) == Ordering::Less {
                    k = i;
                } else {
                    k += 1;
                }
                j += 1;
            }
            while i <= k {
                factors.push(Word {
                    alphabet: self.alphabet,
                    letters: s[i..i + j - k].to_vec(),
                });
                i += j - k;
            }
        }
        let mut grouped: Vec<(Word, u32)> = Vec::new();
        for f in factors {
            match grouped.last_mut() {
                Some((w, mult)) if *w == f => *mult += 1,
                _ => grouped.push((f, 1)),
            }
        }
        grouped
    }
}

/// Storage order: (alphabet, weight, lexicographic).  This is the canonical
/// term-iteration order for polynomials and printed output; Lyndon-theoretic
/// comparisons use `lex_cmp` instead.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.alphabet
            .cmp(&other.alphabet)
            .then_with(|| self.weight().cmp(&other.weight()))
            .then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.alphabet {
            Alphabet::X => {
                for &l in &self.letters {
                    write!(f, "{}", l)?;
                }
                Ok(())
            }
            Alphabet::Y => {
                let parts: Vec<String> = self.letters.iter().map(|k| k.to_string()).collect();
                write!(f, "{}", parts.join(","))
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct WordClass {
    pub convergent: bool,
    pub lyndon: bool,
}

/// Word comparison across a checked common alphabet.
pub fn compare(u: &Word, v: &Word) -> Result<Ordering> {
    if u.alphabet() != v.alphabet() {
        return Err(Error::MixedAlphabets(format!("compare({u}, {v})")));
    }
    Ok(u.lex_cmp(v))
}

/// Checked Lyndon test; the empty word is a usage error.
pub fn is_lyndon(w: &Word) -> Result<bool> {
    if w.is_empty() {
        return Err(Error::EmptyWord("is_lyndon".into()));
    }
    Ok(w.is_lyndon())
}

/// All Lyndon words of weight <= `max_weight`, sorted by (weight, lex).
pub fn lyndon_enumerate(alphabet: Alphabet, max_weight: u32) -> Vec<Word> {
    assert!(max_weight >= 1);
    let mut out: Vec<Word> = match alphabet {
        Alphabet::X => duval_generate(max_weight as usize),
        Alphabet::Y => {
            let mut v = Vec::new();
            for w in 1..=max_weight {
                for word in compositions(w) {
                    if word.is_lyndon() {
                        v.push(word);
                    }
                }
            }
            v
        }
    };
    out.sort();
    out
}

/// Lyndon words of exactly the given weight, in lex order.
pub fn lyndon_of_weight(alphabet: Alphabet, weight: u32) -> Vec<Word> {
    lyndon_enumerate(alphabet, weight)
        .into_iter()
        .filter(|w| w.weight() == weight)
        .collect()
}

/// All Y-words of the given weight (compositions of `weight`), lex order.
pub fn compositions(weight: u32) -> Vec<Word> {
    let mut out = Vec::new();
    let mut current: Vec<u8> = Vec::new();
    fn rec(remaining: u32, current: &mut Vec<u8>, out: &mut Vec<Word>) {
        if remaining == 0 {
            out.push(Word::y_from_indices(current));
            return;
        }
        for k in 1..=remaining.min(255) {
            current.push(k as u8);
            rec(remaining - k, current, out);
            current.pop();
        }
    }
    rec(weight, &mut current, &mut out);
    out.sort_by(|a, b| a.lex_cmp(b));
    out
}

/// All words of the given weight over the alphabet, lex order.
pub fn words_of_weight(alphabet: Alphabet, weight: u32) -> Vec<Word> {
    match alphabet {
        Alphabet::X => {
            let n = weight as usize;
            let mut out = Vec::with_capacity(1 << n);
            for mask in 0..(1u64 << n) {
                let letters: Vec<u8> = (0..n).map(|i| ((mask >> (n - 1 - i)) & 1) as u8).collect();
                out.push(Word::from_letters(Alphabet::X, letters));
            }
            out.sort_by(|a, b| a.lex_cmp(b));
            out
        }
        Alphabet::Y => compositions(weight),
    }
}

/// Duval's generation of all binary Lyndon words of length <= n, lex order.
fn duval_generate(n: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut w: Vec<u8> = vec![0];
    loop {
        out.push(Word::from_letters(Alphabet::X, w.clone()));
        let mut t: Vec<u8> = (0..n).map(|i| w[i % w.len()]).collect();
        while t.last() == Some(&1) {
            t.pop();
        }
        if t.is_empty() {
            break;
        }
        *t.last_mut().unwrap() += 1;
        w = t;
    }
    out
}

/// `pi_X`: the monoid morphism sending `y_k` to `x0^{k-1} x1`.
pub fn pi_x(w: &Word) -> Word {
    assert_eq!(w.alphabet(), Alphabet::Y, "pi_X takes a Y-word");
    let mut letters = Vec::new();
    for &k in w.letters() {
        letters.resize(letters.len() + (k - 1) as usize, 0);
        letters.push(1);
    }
    Word::from_letters(Alphabet::X, letters)
}

/// `pi_Y`: inverse of `pi_X` on `X* x1` and the empty word; words ending in
/// `x0` are annihilated (None).
pub fn pi_y(w: &Word) -> Option<Word> {
    assert_eq!(w.alphabet(), Alphabet::X, "pi_Y takes an X-word");
    if w.is_empty() {
        return Some(Word::empty(Alphabet::Y));
    }
    if *w.letters().last().unwrap() == 0 {
        return None;
    }
    let mut indices = Vec::new();
    let mut run = 0u8;
    for &l in w.letters() {
        if l == 0 {
            run += 1;
        } else {
            indices.push(run + 1);
            run = 0;
        }
    }
    Some(Word::y_from_indices(&indices))
}

impl serde::Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xw(s: &str) -> Word {
        Word::x_from_bits(s).unwrap()
    }
    fn yw(s: &str) -> Word {
        Word::y_from_indices_str(s).unwrap()
    }

    /// Independent naive Lyndon test: compare against every proper suffix
    /// using a direct letter-by-letter scan (no shared code with is_lyndon).
    fn naive_lyndon(w: &Word) -> bool {
        if w.is_empty() {
            return false;
        }
        let ls = w.letters();
        for i in 1..ls.len() {
            let suffix = &ls[i..];
            // lexicographic compare w vs suffix under the alphabet order
            let mut decided = None;
            for (a, b) in ls.iter().zip(suffix.iter()) {
                let ord = match w.alphabet() {
                    Alphabet::X => a.cmp(b),
                    Alphabet::Y => b.cmp(a),
                };
                if ord != Ordering::Equal {
                    decided = Some(ord);
                    break;
                }
            }
            let ord = decided.unwrap_or(ls.len().cmp(&suffix.len()));
            if ord != Ordering::Less {
                return false;
            }
        }
        true
    }

    #[test]
    fn compare_examples() {
        assert_eq!(compare(&xw("0"), &xw("1")).unwrap(), Ordering::Less);
        assert_eq!(compare(&yw("2"), &yw("1")).unwrap(), Ordering::Less);
        assert_eq!(compare(&xw("0"), &xw("01")).unwrap(), Ordering::Less);
        assert!(compare(&xw("0"), &yw("1")).is_err());
    }

    #[test]
    fn lyndon_examples() {
        assert!(xw("01").is_lyndon());
        assert!(!xw("0101").is_lyndon());
        assert!(yw("2,1").is_lyndon());
        assert!(!yw("1,2").is_lyndon());
        assert!(is_lyndon(&xw("01")).unwrap());
        assert!(is_lyndon(&Word::empty(Alphabet::X)).is_err());
    }

    #[test]
    fn lyndon_enumerate_x3() {
        let words = lyndon_enumerate(Alphabet::X, 3);
        let expected: Vec<Word> = ["0", "1", "01", "001", "011"]
            .iter()
            .map(|s| xw(s))
            .collect();
        assert_eq!(words, expected);
    }

    #[test]
    fn lyndon_enumerate_y3() {
        let words = lyndon_enumerate(Alphabet::Y, 3);
        let expected: Vec<Word> = ["1", "2", "3", "2,1"].iter().map(|s| yw(s)).collect();
        assert_eq!(words, expected);
    }

    #[test]
    fn lyndon_weight5_y_count_vs_bruteforce() {
        // Brute-force oracle over all 16 compositions of 5.
        let brute: Vec<Word> = compositions(5).into_iter().filter(naive_lyndon).collect();
        assert_eq!(brute.len(), 6);
        let enumerated = lyndon_of_weight(Alphabet::Y, 5);
        assert_eq!(enumerated.len(), 6);
        let mut b = brute.clone();
        b.sort();
        let mut e = enumerated.clone();
        e.sort();
        assert_eq!(b, e);
    }

    #[test]
    fn enumerate_matches_bruteforce_both_alphabets() {
        for alphabet in [Alphabet::X, Alphabet::Y] {
            let enumerated = lyndon_enumerate(alphabet, 5);
            let mut seen = std::collections::BTreeSet::new();
            for w in &enumerated {
                assert!(w.is_lyndon());
                assert!(seen.insert(w.clone()), "duplicate {w}");
            }
            for weight in 1..=5 {
                for w in words_of_weight(alphabet, weight) {
                    assert_eq!(naive_lyndon(&w), seen.contains(&w), "mismatch on {w}");
                }
            }
        }
    }

    #[test]
    fn standard_factorization_examples() {
        let (l1, l2) = xw("00101").standard_factorization().unwrap();
        assert_eq!((l1, l2), (xw("001"), xw("01")));
        let (l1, l2) = xw("011").standard_factorization().unwrap();
        assert_eq!((l1, l2), (xw("01"), xw("1")));
        let (l1, l2) = yw("2,1").standard_factorization().unwrap();
        assert_eq!((l1, l2), (yw("2"), yw("1")));
        assert!(yw("3").standard_factorization().is_err());
    }

    #[test]
    fn factorization_parts_are_lyndon() {
        for alphabet in [Alphabet::X, Alphabet::Y] {
            for l in lyndon_enumerate(alphabet, 6) {
                if l.len() < 2 {
                    continue;
                }
                let (a, b) = l.standard_factorization().unwrap();
                assert!(a.is_lyndon() && b.is_lyndon());
                assert_eq!(a.concat(&b), l);
            }
        }
    }

    #[test]
    fn pi_maps() {
        assert_eq!(pi_x(&yw("3")), xw("001"));
        assert_eq!(pi_y(&xw("0101")).unwrap(), yw("2,2"));
        assert_eq!(pi_y(&xw("10")), None);
        assert_eq!(
            pi_y(&Word::empty(Alphabet::X)).unwrap(),
            Word::empty(Alphabet::Y)
        );
    }

    #[test]
    fn pi_roundtrip_and_weight() {
        for weight in 1..=6 {
            for w in compositions(weight) {
                let x = pi_x(&w);
                assert_eq!(x.weight(), w.weight());
                assert_eq!(pi_y(&x).unwrap(), w);
            }
        }
    }

    #[test]
    fn perrin_lyndon_preservation() {
        for l in lyndon_enumerate(Alphabet::X, 6) {
            if l == xw("0") {
                continue;
            }
            match pi_y(&l) {
                Some(y) => assert!(y.is_lyndon(), "pi_Y({l}) = {y} should be Lyndon"),
                None => panic!("Lyndon word {l} other than x0 ends in x1"),
            }
        }
        // and conversely
        for l in lyndon_enumerate(Alphabet::Y, 6) {
            assert!(pi_x(&l).is_lyndon(), "pi_X({l}) should be Lyndon");
        }
    }

    #[test]
    fn cfl_grouping() {
        let w = xw("0101");
        assert_eq!(w.lyndon_factorization(), vec![(xw("01"), 2)]);
        let w = yw("1,2,1");
        assert_eq!(w.lyndon_factorization(), vec![(yw("1"), 1), (yw("2,1"), 1)]);
        let w = xw("100");
        assert_eq!(w.lyndon_factorization(), vec![(xw("1"), 1), (xw("0"), 2)]);
    }

    #[test]
    fn render_roundtrip() {
        for weight in 0..=5 {
            for w in words_of_weight(Alphabet::X, weight) {
                assert_eq!(Word::x_from_bits(&w.to_string()).unwrap(), w);
            }
            for w in words_of_weight(Alphabet::Y, weight) {
                assert_eq!(Word::y_from_indices_str(&w.to_string()).unwrap(), w);
            }
        }
    }

    #[test]
    fn convergence_class() {
        assert!(xw("01").is_convergent());
        assert!(!xw("10").is_convergent());
        assert!(yw("2,1").is_convergent());
        assert!(!yw("1,2").is_convergent());
        assert!(Word::empty(Alphabet::Y).is_convergent());
        let c = yw("2,1").classify();
        assert!(c.convergent && c.lyndon);
    }
}
