//! Dual bases of the shuffle and quasi-shuffle bialgebras.
//!
//! On either alphabet the pair `{P_w}` / `{S_w}` is built by the classical
//! recursions over the Lyndon factorization.  On Y the quasi-shuffle pair
//! `{Pi_w}` / `{Sigma_w}` is built from the eulerian projector: `Pi` by
//! brackets of projected letters, `Sigma` as the exact pairing-dual computed
//! per weight by unitriangular back-substitution.
//!
//! Triangularity (all four families have unit leading coefficient at the
//! indexing word; `S`/`Sigma` spread onto lexicographically smaller words of
//! the same weight, `P`/`Pi` onto larger ones) is asserted during
//! construction.
//!
//! `decompose_shuffle`/`decompose_stuffle` write a polynomial as a
//! commutative polynomial in the Lyndon generators `{S_l}` resp. `{Sigma_l}`
//! by leading-term elimination.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use crate::ncpoly::{q, qz, NcPoly, ProductKind, Ring, Q};
use crate::symbols::{CPoly, Monomial, ZetaSymbol};
use crate::words::{compositions, words_of_weight, Alphabet, Word};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum BasisKind {
    P,
    S,
    Pi,
    Sigma,
}

/// Cached basis tables for one alphabet.
pub struct DualBases {
    alphabet: Alphabet,
    p_cache: HashMap<Word, NcPoly<Q>>,
    s_cache: HashMap<Word, NcPoly<Q>>,
    pi_cache: HashMap<Word, NcPoly<Q>>,
    sigma_weights: BTreeMap<u32, HashMap<Word, NcPoly<Q>>>,
    pi1_letters: HashMap<u8, NcPoly<Q>>,
}

impl DualBases {
    pub fn new(alphabet: Alphabet) -> Self {
        DualBases {
            alphabet,
            p_cache: HashMap::new(),
            s_cache: HashMap::new(),
            pi_cache: HashMap::new(),
            sigma_weights: BTreeMap::new(),
            pi1_letters: HashMap::new(),
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// P_w: letters map to themselves, Lyndon words to the bracket of their
    /// standard factorization, arbitrary words to the concatenation product
    /// along the decreasing Lyndon factorization.
    pub fn p_of(&mut self, w: &Word) -> NcPoly<Q> {
        assert_eq!(w.alphabet(), self.alphabet);
        if let Some(hit) = self.p_cache.get(w) {
            return hit.clone();
        }
        let result = if w.is_empty() {
            NcPoly::one(self.alphabet)
        } else if w.len() == 1 {
            NcPoly::word(w.clone())
        } else if w.is_lyndon() {
            let (l1, l2) = w.standard_factorization().expect("non-letter Lyndon word");
            self.p_of(&l1).bracket(&self.p_of(&l2))
        } else {
            let mut acc = NcPoly::one(self.alphabet);
            for (l, mult) in w.lyndon_factorization() {
                let base = self.p_of(&l);
                for _ in 0..mult {
                    acc = acc.conc(&base);
                }
            }
            acc
        };
        if !w.is_empty() {
            assert_triangular(w, &result, Ordering::Greater, "P");
        }
        self.p_cache.insert(w.clone(), result.clone());
        result
    }

    /// S_w: letters map to themselves; for Lyndon `l = y l'`,
    /// `S_l = y S_{l'}`; in general the divided shuffle power product over
    /// the Lyndon factorization.
    pub fn s_of(&mut self, w: &Word) -> NcPoly<Q> {
        assert_eq!(w.alphabet(), self.alphabet);
        if let Some(hit) = self.s_cache.get(w) {
            return hit.clone();
        }
        let result = if w.is_empty() {
            NcPoly::one(self.alphabet)
        } else if w.len() == 1 {
            NcPoly::word(w.clone())
        } else if w.is_lyndon() {
            let head = NcPoly::word(w.prefix(1));
            head.conc(&self.s_of(&w.suffix(1)))
        } else {
            let mut acc = NcPoly::one(self.alphabet);
            for (l, mult) in w.lyndon_factorization() {
                let base = self.s_of(&l);
                let power = base
                    .product_power(mult, ProductKind::Shuffle)
                    .expect("one alphabet");
                acc = acc.shuffle(&power).expect("one alphabet");
                acc = acc.scale(&q(1, factorial(mult)));
            }
            acc
        };
        if !w.is_empty() {
            assert_triangular(w, &result, Ordering::Less, "S");
        }
        self.s_cache.insert(w.clone(), result.clone());
        result
    }

    fn pi1_letter(&mut self, k: u8) -> NcPoly<Q> {
        if let Some(hit) = self.pi1_letters.get(&k) {
            return hit.clone();
        }
        let result = pi1(&NcPoly::word(Word::y_from_indices(&[k])));
        self.pi1_letters.insert(k, result.clone());
        result
    }

    /// Pi_w on Y: projected letters, brackets over the standard
    /// factorization for Lyndon words, concatenation products in general.
    pub fn pi_of(&mut self, w: &Word) -> NcPoly<Q> {
        assert_eq!(self.alphabet, Alphabet::Y, "Pi basis lives on Y");
        assert_eq!(w.alphabet(), Alphabet::Y);
        if let Some(hit) = self.pi_cache.get(w) {
            return hit.clone();
        }
        let result = if w.is_empty() {
            NcPoly::one(Alphabet::Y)
        } else if w.len() == 1 {
            self.pi1_letter(w.letters()[0])
        } else if w.is_lyndon() {
            let (l1, l2) = w.standard_factorization().expect("non-letter Lyndon word");
            self.pi_of(&l1).bracket(&self.pi_of(&l2))
        } else {
            let mut acc = NcPoly::one(Alphabet::Y);
            for (l, mult) in w.lyndon_factorization() {
                let base = self.pi_of(&l);
                for _ in 0..mult {
                    acc = acc.conc(&base);
                }
            }
            acc
        };
        if !w.is_empty() {
            assert_triangular(w, &result, Ordering::Greater, "Pi");
        }
        self.pi_cache.insert(w.clone(), result.clone());
        result
    }

    /// Sigma_w on Y: the unique family with pairing(Sigma_u, Pi_v) = delta,
    /// obtained per weight by inverting the unitriangular matrix of Pi
    /// coefficients.
    pub fn sigma_of(&mut self, w: &Word) -> NcPoly<Q> {
        assert_eq!(self.alphabet, Alphabet::Y, "Sigma basis lives on Y");
        assert_eq!(w.alphabet(), Alphabet::Y);
        if w.is_empty() {
            return NcPoly::one(Alphabet::Y);
        }
        let weight = w.weight();
        self.populate_sigma_weight(weight);
        self.sigma_weights[&weight]
            .get(w)
            .cloned()
            .expect("every word of the weight is populated")
    }

    #[allow(clippy::needless_range_loop)] // indexed back-substitution reads clearer
    fn populate_sigma_weight(&mut self, weight: u32) {
        if self.sigma_weights.contains_key(&weight) {
            return;
        }
        let words = compositions(weight);
        let n = words.len();
        let index: HashMap<Word, usize> = words
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, w)| (w, i))
            .collect();
        // m[u][v] = <Pi_u | v>, unit upper-triangular in lex order.
        let mut m: Vec<Vec<Q>> = vec![vec![qz(0); n]; n];
        for (i, u) in words.iter().enumerate() {
            let pi = self.pi_of(u);
            for (v, c) in pi.terms() {
                m[i][index[v]] = c.clone();
            }
            assert_eq!(m[i][i], qz(1), "Pi_{u} must be unitriangular");
        }
        // inv = m^{-1} by back-substitution; Sigma_u = sum_v inv[v][u] * v.
        let mut inv: Vec<Vec<Q>> = vec![vec![qz(0); n]; n];
        for i in (0..n).rev() {
            inv[i][i] = qz(1);
            for jj in i + 1..n {
                if Ring::is_zero(&m[i][jj]) {
                    continue;
                }
                let factor = m[i][jj].clone();
                for k in 0..n {
                    if Ring::is_zero(&inv[jj][k]) {
                        continue;
                    }
                    let delta = &factor * &inv[jj][k];
                    inv[i][k] = &inv[i][k] - &delta;
                }
            }
        }
        let mut table: HashMap<Word, NcPoly<Q>> = HashMap::new();
        for (uu, u) in words.iter().enumerate() {
            let mut sigma = NcPoly::zero(Alphabet::Y);
            for (vv, v) in words.iter().enumerate() {
                sigma.add_term(v.clone(), inv[vv][uu].clone());
            }
            assert_triangular(u, &sigma, Ordering::Less, "Sigma");
            table.insert(u.clone(), sigma);
        }
        self.sigma_weights.insert(weight, table);
    }

    pub fn basis_of(&mut self, kind: BasisKind, w: &Word) -> NcPoly<Q> {
        match kind {
            BasisKind::P => self.p_of(w),
            BasisKind::S => self.s_of(w),
            BasisKind::Pi => self.pi_of(w),
            BasisKind::Sigma => self.sigma_of(w),
        }
    }
}

pub(crate) fn factorial(n: u32) -> i64 {
    (1..=n as i64).product::<i64>().max(1)
}

/// Unit leading coefficient at `w`; every other word of the same weight lies
/// strictly on the given side of `w` in lex order.
fn assert_triangular(w: &Word, p: &NcPoly<Q>, side: Ordering, name: &str) {
    assert_eq!(
        p.coeff(w),
        qz(1),
        "{name}_{w} must have unit leading coefficient"
    );
    for (v, _) in p.terms() {
        assert_eq!(
            v.weight(),
            w.weight(),
            "{name}_{w} must be weight-homogeneous"
        );
        if v != w {
            assert_eq!(
                v.lex_cmp(w),
                side,
                "{name}_{w}: unexpected term {v} on the wrong side of the leading word"
            );
        }
    }
}

/// The eulerian projector, extended linearly:
/// `pi1(w) = w + sum_{k=2}^{(w)} ((-1)^{k-1}/k) sum <w | u1 ⬦ ... ⬦ uk> u1...uk`
/// over k-tuples of nonempty Y-words whose weights sum to the weight of `w`.
pub fn pi1(p: &NcPoly<Q>) -> NcPoly<Q> {
    assert_eq!(
        p.alphabet(),
        Alphabet::Y,
        "the eulerian projector acts on Y"
    );
    let mut out = NcPoly::zero(Alphabet::Y);
    for (w, c) in p.terms() {
        let image = pi1_word(w);
        out = out.add(&image.scale(c));
    }
    out
}

fn pi1_word(w: &Word) -> NcPoly<Q> {
    let weight = w.weight();
    let mut out = NcPoly::word(w.clone());
    if weight < 2 {
        return out;
    }
    // stuffle products memoized across tuples via sorted keys
    let mut products: HashMap<Vec<Word>, NcPoly<Q>> = HashMap::new();
    for k in 2..=weight {
        let coeff = q(if k % 2 == 0 { -1 } else { 1 }, k as i64);
        let mut tuple: Vec<Word> = Vec::with_capacity(k as usize);
        collect_tuples(w, weight, k, &mut tuple, &coeff, &mut products, &mut out);
    }
    out
}

fn collect_tuples(
    w: &Word,
    remaining: u32,
    parts: u32,
    tuple: &mut Vec<Word>,
    coeff: &Q,
    products: &mut HashMap<Vec<Word>, NcPoly<Q>>,
    out: &mut NcPoly<Q>,
) {
    if parts == 0 {
        if remaining != 0 {
            return;
        }
        let mut key: Vec<Word> = tuple.clone();
        key.sort();
        let product = products
            .entry(key)
            .or_insert_with(|| {
                let mut acc = NcPoly::one(Alphabet::Y);
                for u in tuple.iter() {
                    acc = acc.stuffle(&NcPoly::word(u.clone())).expect("Y alphabet");
                }
                acc
            })
            .clone();
        let scal = product.coeff(w);
        if Ring::is_zero(&scal) {
            return;
        }
        let mut concat = Word::empty(Alphabet::Y);
        for u in tuple.iter() {
            concat = concat.concat(u);
        }
        out.add_term(concat, &scal * coeff);
        return;
    }
    // each remaining part needs weight >= 1
    let max_here = remaining - (parts - 1);
    for part_weight in 1..=max_here {
        for u in compositions(part_weight) {
            tuple.push(u);
            collect_tuples(
                w,
                remaining - part_weight,
                parts - 1,
                tuple,
                coeff,
                products,
                out,
            );
            tuple.pop();
        }
    }
}

/// A commutative-polynomial expansion over the Lyndon generators of one
/// alphabet: monomial = multiset of Lyndon words, rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LyndonExpansion {
    alphabet: Alphabet,
    terms: BTreeMap<Vec<(Word, u32)>, Q>,
}

impl LyndonExpansion {
    fn zero(alphabet: Alphabet) -> Self {
        LyndonExpansion {
            alphabet,
            terms: BTreeMap::new(),
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<(Word, u32)>, &Q)> {
        self.terms.iter()
    }

    fn add_term(&mut self, mut mono: Vec<(Word, u32)>, c: Q) {
        if Ring::is_zero(&c) {
            return;
        }
        mono.sort();
        let entry = self.terms.entry(mono.clone()).or_insert_with(|| qz(0));
        *entry = &*entry + &c;
        if Ring::is_zero(entry) {
            self.terms.remove(&mono);
        }
    }

    /// Map the expansion onto zeta symbols: Lyndon generators indexed by a
    /// divergent letter (`x0`, `x1`, `y1`) are sent to zero, the rest to
    /// `zeta(S_l)` resp. `zeta(Sigma_l)`.
    pub fn to_symbols(&self) -> CPoly {
        let mut out = CPoly::zero();
        'term: for (mono, c) in self.terms() {
            let mut factors = Vec::with_capacity(mono.len());
            for (l, e) in mono {
                let divergent = match self.alphabet {
                    Alphabet::X => l.len() == 1,
                    Alphabet::Y => l.weight() == 1,
                };
                if divergent {
                    continue 'term;
                }
                let sym = match self.alphabet {
                    Alphabet::X => ZetaSymbol::s(l.clone()),
                    Alphabet::Y => ZetaSymbol::sigma(l.clone()),
                };
                factors.push((sym, *e));
            }
            out.add_term(Monomial::from_factors(factors), c.clone());
        }
        out
    }
}

/// Expand `p` as a commutative polynomial in `{S_l}` under the shuffle
/// product (alphabet X or Y).
pub fn decompose_shuffle(bases: &mut DualBases, p: &NcPoly<Q>) -> LyndonExpansion {
    decompose(bases, p, ProductKind::Shuffle)
}

/// Expand `p` (over Y) as a commutative polynomial in `{Sigma_l}` under the
/// quasi-shuffle product.
pub fn decompose_stuffle(bases: &mut DualBases, p: &NcPoly<Q>) -> LyndonExpansion {
    assert_eq!(
        p.alphabet(),
        Alphabet::Y,
        "stuffle decomposition lives on Y"
    );
    decompose(bases, p, ProductKind::Stuffle)
}

/// Leading-term elimination: the candidate basis element indexed by the
/// lex-largest remaining word has that word as its unit leading term, so
/// subtracting strictly decreases the maximum within each weight.
fn decompose(bases: &mut DualBases, p: &NcPoly<Q>, kind: ProductKind) -> LyndonExpansion {
    let mut out = LyndonExpansion::zero(p.alphabet());
    let mut rest = p.clone();
    let empty = Word::empty(p.alphabet());
    let c0 = rest.coeff(&empty);
    if !Ring::is_zero(&c0) {
        out.add_term(Vec::new(), c0.clone());
        rest.add_term(empty, -c0);
    }
    while !rest.is_zero() {
        let w = rest
            .terms()
            .map(|(w, _)| w.clone())
            .max_by(|a, b| a.weight().cmp(&b.weight()).then_with(|| a.lex_cmp(b)))
            .unwrap();
        let c = rest.coeff(&w);
        let factorization = w.lyndon_factorization();
        let mut candidate = NcPoly::one(p.alphabet());
        let mut denom = 1i64;
        for (l, mult) in &factorization {
            let base = match kind {
                ProductKind::Shuffle => bases.s_of(l),
                ProductKind::Stuffle => bases.sigma_of(l),
                ProductKind::Conc => unreachable!(),
            };
            let power = base.product_power(*mult, kind).expect("one alphabet");
            candidate = match kind {
                ProductKind::Shuffle => candidate.shuffle(&power).expect("one alphabet"),
                ProductKind::Stuffle => candidate.stuffle(&power).expect("one alphabet"),
                ProductKind::Conc => unreachable!(),
            };
            denom *= factorial(*mult);
        }
        let coeff = &c * &q(1, denom);
        rest = rest.sub(&candidate.scale(&coeff));
        out.add_term(factorization, coeff);
        debug_assert!(Ring::is_zero(&rest.coeff(&w)));
    }
    out
}

/// Re-expand a Lyndon expansion by explicit products; inverse of decompose.
pub fn expand(bases: &mut DualBases, e: &LyndonExpansion, kind: ProductKind) -> NcPoly<Q> {
    let mut out = NcPoly::zero(e.alphabet());
    for (mono, c) in e.terms() {
        let mut acc = NcPoly::one(e.alphabet());
        for (l, mult) in mono {
            let base = match kind {
                ProductKind::Shuffle => bases.s_of(l),
                ProductKind::Stuffle => bases.sigma_of(l),
                ProductKind::Conc => unreachable!(),
            };
            let power = base.product_power(*mult, kind).expect("one alphabet");
            acc = match kind {
                ProductKind::Shuffle => acc.shuffle(&power).expect("one alphabet"),
                ProductKind::Stuffle => acc.stuffle(&power).expect("one alphabet"),
                ProductKind::Conc => unreachable!(),
            };
        }
        out = out.add(&acc.scale(c));
    }
    out
}

/// The concatenation morphism sending each letter `y_k` to `pi1(y_k)`,
/// applied to a Y-polynomial.
pub fn phi_pi1(bases: &mut DualBases, p: &NcPoly<Q>) -> NcPoly<Q> {
    assert_eq!(p.alphabet(), Alphabet::Y);
    let mut out = NcPoly::zero(Alphabet::Y);
    for (w, c) in p.terms() {
        let mut acc = NcPoly::one(Alphabet::Y);
        for &k in w.letters() {
            acc = acc.conc(&bases.pi1_letter(k));
        }
        out = out.add(&acc.scale(c));
    }
    out
}

/// Per-weight duality check: pairing over all pairs of words of the weight
/// must be the identity matrix.  Returns the first offending pair.
pub fn duality_defect(
    bases: &mut DualBases,
    weight: u32,
    dual_kind: (BasisKind, BasisKind),
) -> Option<(Word, Word)> {
    let words = words_of_weight(bases.alphabet(), weight);
    let lefts: Vec<NcPoly<Q>> = words
        .iter()
        .map(|w| bases.basis_of(dual_kind.0, w))
        .collect();
    let rights: Vec<NcPoly<Q>> = words
        .iter()
        .map(|w| bases.basis_of(dual_kind.1, w))
        .collect();
    for (i, u) in words.iter().enumerate() {
        for (j, v) in words.iter().enumerate() {
            let got = lefts[i].pairing(&rights[j]);
            let expected = if i == j { qz(1) } else { qz(0) };
            if got != expected {
                return Some((u.clone(), v.clone()));
            }
        }
    }
    None
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
    fn wp(w: Word) -> NcPoly<Q> {
        NcPoly::word(w)
    }

    /// Bracket-expansion oracle for nested Lie brackets of letters.
    enum Tree {
        Leaf(Word),
        Node(Box<Tree>, Box<Tree>),
    }
    fn leaf(w: Word) -> Tree {
        Tree::Leaf(w)
    }
    fn node(a: Tree, b: Tree) -> Tree {
        Tree::Node(Box::new(a), Box::new(b))
    }
    fn expand_tree(t: &Tree) -> NcPoly<Q> {
        match t {
            Tree::Leaf(w) => wp(w.clone()),
            Tree::Node(a, b) => {
                let pa = expand_tree(a);
                let pb = expand_tree(b);
                pa.conc(&pb).sub(&pb.conc(&pa))
            }
        }
    }

    #[test]
    fn p_of_bracket_oracle() {
        let mut bases = DualBases::new(Alphabet::X);
        // P_{x0x1^2} = [[x0,x1],x1] = x0x1^2 - 2 x1x0x1 + x1^2x0
        let oracle = expand_tree(&node(node(leaf(xw("0")), leaf(xw("1"))), leaf(xw("1"))));
        let got = bases.p_of(&xw("011"));
        assert_eq!(got, oracle);
        let mut expected = NcPoly::zero(Alphabet::X);
        expected.add_term(xw("011"), qz(1));
        expected.add_term(xw("101"), qz(-2));
        expected.add_term(xw("110"), qz(1));
        assert_eq!(got, expected);
    }

    #[test]
    fn s_of_golden_rows() {
        let mut bases = DualBases::new(Alphabet::X);
        // S_{x0^2x1x0x1} = 2 x0^3x1^2 + x0^2x1x0x1
        let got = bases.s_of(&xw("00101"));
        let mut expected = NcPoly::zero(Alphabet::X);
        expected.add_term(xw("00011"), qz(2));
        expected.add_term(xw("00101"), qz(1));
        assert_eq!(got, expected);

        // S_{x0x1x0x1^2} = 3 x0^2x1^3 + x0x1x0x1^2
        let got = bases.s_of(&xw("01011"));
        let mut expected = NcPoly::zero(Alphabet::X);
        expected.add_term(xw("00111"), qz(3));
        expected.add_term(xw("01011"), qz(1));
        assert_eq!(got, expected);
    }

    #[test]
    fn pi1_golden() {
        let y2 = pi1(&wp(yw("2")));
        let mut expected = NcPoly::zero(Alphabet::Y);
        expected.add_term(yw("2"), qz(1));
        expected.add_term(yw("1,1"), q(-1, 2));
        assert_eq!(y2, expected);

        assert_eq!(pi1(&wp(yw("1"))), wp(yw("1")));

        let y3 = pi1(&wp(yw("3")));
        let mut expected = NcPoly::zero(Alphabet::Y);
        expected.add_term(yw("3"), qz(1));
        expected.add_term(yw("1,2"), q(-1, 2));
        expected.add_term(yw("2,1"), q(-1, 2));
        expected.add_term(yw("1,1,1"), q(1, 3));
        assert_eq!(y3, expected);
    }

    #[test]
    fn pi1_primitivity() {
        // <pi1(y_k) | u ⬦ v> = 0 for all nonempty u, v
        for k in 2..=5u8 {
            let p = pi1(&wp(Word::y_from_indices(&[k])));
            for wa in 1..k as u32 {
                let wb = k as u32 - wa;
                for u in compositions(wa) {
                    for v in compositions(wb) {
                        let uv = wp(u.clone()).stuffle(&wp(v.clone())).unwrap();
                        assert_eq!(p.pairing(&uv), qz(0), "k={k} u={u} v={v}");
                    }
                }
            }
        }
    }

    #[test]
    fn pi1_fixes_its_image() {
        for k in 2..=6u8 {
            let p = pi1(&wp(Word::y_from_indices(&[k])));
            assert_eq!(pi1(&p), p, "pi1 must fix pi1(y_{k})");
        }
    }

    #[test]
    fn pi_of_golden() {
        let mut bases = DualBases::new(Alphabet::Y);
        assert_eq!(bases.pi_of(&yw("1,1")), wp(yw("1,1")));

        // bracket oracle: Pi_{y2y1} = [pi1(y2), pi1(y1)] = y2y1 - y1y2
        let got = bases.pi_of(&yw("2,1"));
        let p2 = pi1(&wp(yw("2")));
        let p1 = wp(yw("1"));
        let oracle = p2.conc(&p1).sub(&p1.conc(&p2));
        assert_eq!(got, oracle);
        let mut expected = NcPoly::zero(Alphabet::Y);
        expected.add_term(yw("2,1"), qz(1));
        expected.add_term(yw("1,2"), qz(-1));
        assert_eq!(got, expected);

        // Pi_{y1y2} = pi1(y1) pi1(y2) = y1y2 - 1/2 y1^3
        let got = bases.pi_of(&yw("1,2"));
        let mut expected = NcPoly::zero(Alphabet::Y);
        expected.add_term(yw("1,2"), qz(1));
        expected.add_term(yw("1,1,1"), q(-1, 2));
        assert_eq!(got, expected);
    }

    #[test]
    fn sigma_golden() {
        let mut bases = DualBases::new(Alphabet::Y);
        // Sigma_{y1^2} = 1/2 y2 + y1^2
        let got = bases.sigma_of(&yw("1,1"));
        let mut expected = NcPoly::zero(Alphabet::Y);
        expected.add_term(yw("2"), q(1, 2));
        expected.add_term(yw("1,1"), qz(1));
        assert_eq!(got, expected);

        // Sigma_{y2y1} = 1/2 y3 + y2y1
        let got = bases.sigma_of(&yw("2,1"));
        let mut expected = NcPoly::zero(Alphabet::Y);
        expected.add_term(yw("3"), q(1, 2));
        expected.add_term(yw("2,1"), qz(1));
        assert_eq!(got, expected);

        // Sigma_{y1^3} = 1/6 y3 + 1/2 y2y1 + 1/2 y1y2 + y1^3
        let got = bases.sigma_of(&yw("1,1,1"));
        let mut expected = NcPoly::zero(Alphabet::Y);
        expected.add_term(yw("3"), q(1, 6));
        expected.add_term(yw("2,1"), q(1, 2));
        expected.add_term(yw("1,2"), q(1, 2));
        expected.add_term(yw("1,1,1"), qz(1));
        assert_eq!(got, expected);
    }

    #[test]
    fn duality_small_weights() {
        let mut bx = DualBases::new(Alphabet::X);
        for weight in 1..=4 {
            assert_eq!(
                duality_defect(&mut bx, weight, (BasisKind::S, BasisKind::P)),
                None
            );
        }
        let mut by = DualBases::new(Alphabet::Y);
        for weight in 1..=4 {
            assert_eq!(
                duality_defect(&mut by, weight, (BasisKind::Sigma, BasisKind::Pi)),
                None
            );
            assert_eq!(
                duality_defect(&mut by, weight, (BasisKind::S, BasisKind::P)),
                None
            );
        }
    }

    #[test]
    fn phi_pi1_reproduces_pi() {
        let mut bases = DualBases::new(Alphabet::Y);
        for weight in 1..=5 {
            for w in compositions(weight) {
                let p = bases.p_of(&w);
                let via_morphism = phi_pi1(&mut bases, &p);
                let direct = bases.pi_of(&w);
                assert_eq!(via_morphism, direct, "phi_pi1(P_{w}) != Pi_{w}");
            }
        }
    }

    #[test]
    fn decompose_examples() {
        let mut bases = DualBases::new(Alphabet::Y);
        // y2y1 = Sigma_{y2y1} - 1/2 Sigma_{y3}
        let e = decompose_stuffle(&mut bases, &wp(yw("2,1")));
        let mut expected = LyndonExpansion::zero(Alphabet::Y);
        expected.add_term(vec![(yw("2,1"), 1)], qz(1));
        expected.add_term(vec![(yw("3"), 1)], q(-1, 2));
        assert_eq!(e, expected);

        // Lyndon word of its own basis
        let mut bx = DualBases::new(Alphabet::X);
        let e = decompose_shuffle(&mut bx, &wp(xw("01")));
        let mut expected = LyndonExpansion::zero(Alphabet::X);
        expected.add_term(vec![(xw("01"), 1)], qz(1));
        assert_eq!(e, expected);

        // round trip on Sigma_{y3} as a polynomial
        let sigma3 = bases.sigma_of(&yw("3"));
        let e = decompose_stuffle(&mut bases, &sigma3);
        let mut expected = LyndonExpansion::zero(Alphabet::Y);
        expected.add_term(vec![(yw("3"), 1)], qz(1));
        assert_eq!(e, expected);
    }

    #[test]
    fn decompose_round_trip() {
        let mut bases = DualBases::new(Alphabet::Y);
        let p = wp(yw("2,2"))
            .add(&wp(yw("3,1")).scale(&q(2, 3)))
            .add(&wp(yw("1,1,2")).scale(&qz(-4)));
        let e = decompose_stuffle(&mut bases, &p);
        assert_eq!(expand(&mut bases, &e, ProductKind::Stuffle), p);

        let mut bx = DualBases::new(Alphabet::X);
        let p = wp(xw("0011")).add(&wp(xw("1010")).scale(&q(5, 7)));
        let e = decompose_shuffle(&mut bx, &p);
        assert_eq!(expand(&mut bx, &e, ProductKind::Shuffle), p);
    }

    #[test]
    fn decompose_symbols_for_zeta() {
        let mut bases = DualBases::new(Alphabet::Y);
        // zeta(2,2): y2y2 = 1/2 Sigma_{y2}^2 - 1/2 Sigma_{y4} under zeta
        let e = decompose_stuffle(&mut bases, &wp(yw("2,2")));
        let p = e.to_symbols();
        let mut expected = CPoly::zero();
        expected.add_term(
            Monomial::from_factors(vec![(ZetaSymbol::sigma(yw("2")), 2)]),
            q(1, 2),
        );
        expected.add_term(Monomial::symbol(ZetaSymbol::sigma(yw("4"))), q(-1, 2));
        assert_eq!(p, expected);
    }
}
