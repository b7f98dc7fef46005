//! Weight-truncated noncommutative series with symbol-polynomial
//! coefficients: concatenation calculus (product, exp, log), the
//! decreasing-ordered products of exponentials over Lyndon words, the
//! generating series of zeta values on both alphabets, and the single-letter
//! bridge series.

use std::collections::BTreeMap;

use crate::bases::{BasisKind, DualBases};
use crate::error::{Error, Result};
use crate::ncpoly::{q, NcPoly, ProductKind, Ring, Q};
use crate::symbols::{CPoly, ZetaSymbol};
use crate::words::{self, lyndon_enumerate, words_of_weight, Alphabet, Word};

/// A noncommutative series truncated at a weight bound, with `CPoly`
/// coefficients.  Arithmetic is exact modulo words of weight > `trunc`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NcSeries {
    alphabet: Alphabet,
    trunc: u32,
    terms: BTreeMap<Word, CPoly>,
}

impl NcSeries {
    pub fn zero(alphabet: Alphabet, trunc: u32) -> Self {
        NcSeries {
            alphabet,
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alphabet: Alphabet, trunc: u32) -> Self {
        let mut s = Self::zero(alphabet, trunc);
        s.add_term(Word::empty(alphabet), CPoly::one());
        s
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn trunc(&self) -> u32 {
        self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &CPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> CPoly {
        self.terms.get(w).cloned().unwrap_or_else(CPoly::zero)
    }

    pub fn add_term(&mut self, w: Word, c: CPoly) {
        debug_assert_eq!(w.alphabet(), self.alphabet);
        if w.weight() > self.trunc || Ring::is_zero(&c) {
            return;
        }
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = Ring::add(e.get(), &c);
                if Ring::is_zero(&sum) {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn from_poly(p: &NcPoly<CPoly>, trunc: u32) -> Self {
        let mut s = Self::zero(p.alphabet(), trunc);
        for (w, c) in p.terms() {
            s.add_term(w.clone(), c.clone());
        }
        s
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.alphabet, rhs.alphabet);
        let trunc = self.trunc.min(rhs.trunc);
        let mut out = Self::zero(self.alphabet, trunc);
        for (w, c) in self.terms().chain(rhs.terms()) {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &CPoly) -> Self {
        let mut out = Self::zero(self.alphabet, self.trunc);
        for (w, k) in self.terms() {
            out.add_term(w.clone(), Ring::mul(k, c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.alphabet, self.trunc);
        for (w, c) in self.terms() {
            out.add_term(w.clone(), Ring::neg(c));
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Concatenation-product convolution truncated at min(trunc).
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.alphabet, rhs.alphabet);
        let trunc = self.trunc.min(rhs.trunc);
        let mut out = Self::zero(self.alphabet, trunc);
        for (u, a) in self.terms() {
            let wu = u.weight();
            if wu > trunc {
                continue;
            }
            for (v, b) in rhs.terms() {
                if wu + v.weight() > trunc {
                    continue;
                }
                out.add_term(u.concat(v), Ring::mul(a, b));
            }
        }
        out
    }

    /// exp of a series with zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !Ring::is_zero(&self.coeff(&Word::empty(self.alphabet))) {
            return Err(Error::ConstantTerm("exp needs <a|1> = 0".into()));
        }
        let mut out = Self::one(self.alphabet, self.trunc);
        let mut power = Self::one(self.alphabet, self.trunc);
        for j in 1..=self.trunc {
            power = power.mul(self);
            if power.terms.is_empty() {
                break;
            }
            out = out.add(&power.scale(&CPoly::constant(q(1, crate::bases::factorial(j)))));
        }
        Ok(out)
    }

    /// log of a series with constant term one.
    pub fn log(&self) -> Result<Self> {
        if self.coeff(&Word::empty(self.alphabet)) != CPoly::one() {
            return Err(Error::ConstantTerm("log needs <a|1> = 1".into()));
        }
        let u = self.sub(&Self::one(self.alphabet, self.trunc));
        let mut out = Self::zero(self.alphabet, self.trunc);
        let mut power = Self::one(self.alphabet, self.trunc);
        for j in 1..=self.trunc as i64 {
            power = power.mul(&u);
            if power.terms.is_empty() {
                break;
            }
            let sign = if j % 2 == 1 { 1 } else { -1 };
            out = out.add(&power.scale(&CPoly::constant(q(sign, j))));
        }
        Ok(out)
    }

    /// Word-wise `pi_Y`, annihilating words that end in `x0`.
    pub fn project_y(&self) -> Self {
        assert_eq!(self.alphabet, Alphabet::X);
        let mut out = Self::zero(Alphabet::Y, self.trunc);
        for (w, c) in self.terms() {
            if let Some(yw) = words::pi_y(w) {
                out.add_term(yw, c.clone());
            }
        }
        out
    }

    /// Word-wise `pi_X`.
    pub fn project_x(&self) -> Self {
        assert_eq!(self.alphabet, Alphabet::Y);
        let mut out = Self::zero(Alphabet::X, self.trunc);
        for (w, c) in self.terms() {
            out.add_term(words::pi_x(w), c.clone());
        }
        out
    }

    /// Extend the pairing over a rational polynomial: sum of coeff * <s|w>.
    pub fn pair_poly(&self, p: &NcPoly<Q>) -> CPoly {
        let mut acc = CPoly::zero();
        for (w, c) in p.terms() {
            let term = self.coeff(w).scale(c);
            acc = Ring::add(&acc, &term);
        }
        acc
    }
}

/// The decreasing-ordered product of exponentials
/// `prod_{l} exp(coeff(l) * basis(l))` over the Lyndon keys of `coeffs`,
/// factors ordered by strictly decreasing lex order of `l`.
/// Every coefficient must be homogeneous of the weight of its word.
pub fn mrs_product(
    bases: &mut DualBases,
    coeffs: &BTreeMap<Word, CPoly>,
    kind: BasisKind,
    trunc: u32,
) -> Result<NcSeries> {
    let alphabet = bases.alphabet();
    let mut keys: Vec<&Word> = coeffs.keys().collect();
    for l in &keys {
        assert!(l.is_lyndon(), "mrs_product keys must be Lyndon words");
        let c = &coeffs[*l];
        if !Ring::is_zero(c) && !c.is_homogeneous_of(l.weight()) {
            return Err(Error::InhomogeneousRule(format!(
                "mrs coefficient of {l} is not homogeneous of weight {}",
                l.weight()
            )));
        }
    }
    keys.sort_by(|a, b| b.lex_cmp(a));
    let mut out = NcSeries::one(alphabet, trunc);
    for l in keys {
        if l.weight() > trunc {
            continue;
        }
        let c = &coeffs[l];
        if Ring::is_zero(c) {
            continue;
        }
        let basis = bases.basis_of(kind, l);
        let factor_arg =
            NcSeries::from_poly(&basis.map_coeffs(|k| CPoly::constant(k.clone())), trunc).scale(c);
        let factor = factor_arg.exp()?;
        out = out.mul(&factor);
    }
    Ok(out)
}

/// `Z_sh = prod_{l in LynX \ X} exp(zeta(S_l) P_l)` truncated at `trunc`.
pub fn build_z_shuffle(bases: &mut DualBases, trunc: u32) -> NcSeries {
    assert_eq!(bases.alphabet(), Alphabet::X);
    let mut coeffs = BTreeMap::new();
    for l in lyndon_enumerate(Alphabet::X, trunc) {
        if l.len() >= 2 {
            coeffs.insert(l.clone(), CPoly::symbol(ZetaSymbol::s(l)));
        }
    }
    mrs_product(bases, &coeffs, BasisKind::P, trunc).expect("homogeneous by construction")
}

/// `Z_st = prod_{l in LynY \ {y1}} exp(zeta(Sigma_l) Pi_l)`.
pub fn build_z_stuffle(bases: &mut DualBases, trunc: u32) -> NcSeries {
    assert_eq!(bases.alphabet(), Alphabet::Y);
    let mut coeffs = BTreeMap::new();
    for l in lyndon_enumerate(Alphabet::Y, trunc) {
        if l.weight() >= 2 {
            coeffs.insert(l.clone(), CPoly::symbol(ZetaSymbol::sigma(l)));
        }
    }
    mrs_product(bases, &coeffs, BasisKind::Pi, trunc).expect("homogeneous by construction")
}

/// `Z_gamma = exp(gamma y1) Z_st`.
pub fn build_z_gamma(z_stuffle: &NcSeries) -> NcSeries {
    assert_eq!(z_stuffle.alphabet(), Alphabet::Y);
    let trunc = z_stuffle.trunc();
    let mut arg = NcSeries::zero(Alphabet::Y, trunc);
    arg.add_term(Word::y_from_indices(&[1]), CPoly::symbol(ZetaSymbol::Gamma));
    let expg = arg.exp().expect("no constant term");
    expg.mul(z_stuffle)
}

/// Single-letter series `exp(±(gamma t - sum_{k>=2} zeta(k) (-t)^k / k))`
/// over the letter `t`.
fn single_letter_exp(
    alphabet: Alphabet,
    letter: u8,
    with_gamma: bool,
    invert: bool,
    trunc: u32,
) -> NcSeries {
    let mut arg = NcSeries::zero(alphabet, trunc);
    let letter_word = |j: u32| -> Word { Word::from_letters(alphabet, vec![letter; j as usize]) };
    if with_gamma {
        arg.add_term(letter_word(1), CPoly::symbol(ZetaSymbol::Gamma));
    }
    for k in 2..=trunc {
        // - zeta(k) (-t)^k / k  =  (-1)^{k+1}/k zeta(k) t^k
        let sign = if k % 2 == 0 { -1 } else { 1 };
        let c = CPoly::symbol(ZetaSymbol::zeta_int(k)).scale(&q(sign, k as i64));
        arg.add_term(letter_word(k), c);
    }
    let arg = if invert { arg.neg() } else { arg };
    arg.exp().expect("no constant term")
}

/// `B(y1) = exp(gamma y1 - sum_{k>=2} zeta(k) (-y1)^k / k)`.
pub fn b_series(trunc: u32) -> NcSeries {
    single_letter_exp(Alphabet::Y, 1, true, false, trunc)
}

/// `B'(y1)`: the same without the gamma term.
pub fn bprime_series(trunc: u32) -> NcSeries {
    single_letter_exp(Alphabet::Y, 1, false, false, trunc)
}

/// `B(x1)^{-1}` over the letter x1.
pub fn bx_inverse_series(trunc: u32) -> NcSeries {
    single_letter_exp(Alphabet::X, 1, true, true, trunc)
}

/// Friedrichs-style character test: `<s|1> = 1` and
/// `<s|u*v> = <s|u><s|v>` for all nonempty u, v with combined weight within
/// the truncation.
pub fn character_check(s: &NcSeries, product: ProductKind) -> bool {
    if s.coeff(&Word::empty(s.alphabet())) != CPoly::one() {
        return false;
    }
    let n = s.trunc();
    for wa in 1..n {
        for wb in wa..=(n.saturating_sub(wa)) {
            for u in words_of_weight(s.alphabet(), wa) {
                let pu = NcPoly::<Q>::word(u.clone());
                for v in words_of_weight(s.alphabet(), wb) {
                    let pv = NcPoly::<Q>::word(v.clone());
                    let uv = match product {
                        ProductKind::Shuffle => pu.shuffle(&pv).expect("one alphabet"),
                        ProductKind::Stuffle => pu.stuffle(&pv).expect("Y alphabet"),
                        ProductKind::Conc => pu.conc(&pv),
                    };
                    let lhs = s.pair_poly(&uv);
                    let rhs = Ring::mul(&s.coeff(&u), &s.coeff(&v));
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Cross-check of the two forms of the bridge.  The X-side form is derived
/// from the Y-side one by applying `pi_X` and inverting `B(x1)`; since
/// `pi_X(pi_Y(s))` restores exactly the x1-ending part of an X-series, the
/// derived form must reproduce `Z_sh` on `X* x1` and the empty word:
///
/// `<Z_sh|w> = <B(x1)^{-1} pi_X(B(y1) pi_Y(Z_sh)) | w>`  for w in X* x1.
///
/// Returns the disagreeing words (empty when the forms agree).
pub fn bridge_agreement_defects(z_shuffle: &NcSeries, max_weight: u32) -> Vec<Word> {
    let trunc = z_shuffle.trunc().min(max_weight);
    let y_side = b_series(trunc).mul(&z_shuffle.project_y());
    let rhs = bx_inverse_series(trunc).mul(&y_side.project_x());
    let mut defects = Vec::new();
    let empty = Word::empty(Alphabet::X);
    if z_shuffle.coeff(&empty) != rhs.coeff(&empty) {
        defects.push(empty);
    }
    for weight in 1..=trunc {
        for w in words_of_weight(Alphabet::X, weight) {
            if w.letters().last() != Some(&1) {
                continue;
            }
            if z_shuffle.coeff(&w) != rhs.coeff(&w) {
                defects.push(w);
            }
        }
    }
    defects
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::qz;
    use crate::symbols::Monomial;

    fn xw(s: &str) -> Word {
        Word::x_from_bits(s).unwrap()
    }
    fn yw(s: &str) -> Word {
        Word::y_from_indices_str(s).unwrap()
    }
    fn gamma() -> CPoly {
        CPoly::symbol(ZetaSymbol::Gamma)
    }

    #[test]
    fn exp_log_roundtrip() {
        let mut a = NcSeries::zero(Alphabet::X, 4);
        a.add_term(xw("0"), CPoly::constant(q(2, 3)));
        a.add_term(xw("01"), gamma());
        a.add_term(xw("1"), CPoly::constant(qz(-1)));
        let e = a.exp().unwrap();
        assert_eq!(e.log().unwrap(), a);

        // exp(0) = 1
        assert_eq!(
            NcSeries::zero(Alphabet::Y, 3).exp().unwrap(),
            NcSeries::one(Alphabet::Y, 3)
        );

        // log(exp(c x0)) = c x0
        let mut a = NcSeries::zero(Alphabet::X, 5);
        a.add_term(xw("0"), CPoly::constant(q(7, 2)));
        assert_eq!(a.exp().unwrap().log().unwrap(), a);
    }

    #[test]
    fn exp_gamma_y1() {
        let mut a = NcSeries::zero(Alphabet::Y, 3);
        a.add_term(yw("1"), gamma());
        let e = a.exp().unwrap();
        assert_eq!(e.coeff(&Word::empty(Alphabet::Y)), CPoly::one());
        assert_eq!(e.coeff(&yw("1")), gamma());
        assert_eq!(
            e.coeff(&yw("1,1")),
            CPoly::term(
                q(1, 2),
                Monomial::from_factors(vec![(ZetaSymbol::Gamma, 2)])
            )
        );
        assert_eq!(
            e.coeff(&yw("1,1,1")),
            CPoly::term(
                q(1, 6),
                Monomial::from_factors(vec![(ZetaSymbol::Gamma, 3)])
            )
        );
    }

    #[test]
    fn exp_rejects_constant_term() {
        let s = NcSeries::one(Alphabet::X, 3);
        assert!(s.exp().is_err());
        assert!(NcSeries::zero(Alphabet::X, 3).log().is_err());
    }

    #[test]
    fn mrs_single_factor() {
        let mut bases = DualBases::new(Alphabet::X);
        // weight-2 scalar c = gamma^2 on the weight-2 word x0x1
        let c = CPoly::term(
            q(1, 1),
            Monomial::from_factors(vec![(ZetaSymbol::Gamma, 2)]),
        );
        let mut coeffs = BTreeMap::new();
        coeffs.insert(xw("01"), c.clone());
        let s = mrs_product(&mut bases, &coeffs, BasisKind::P, 2).unwrap();
        // 1 + c (x0x1 - x1x0)
        assert_eq!(s.coeff(&Word::empty(Alphabet::X)), CPoly::one());
        assert_eq!(s.coeff(&xw("01")), c);
        assert_eq!(s.coeff(&xw("10")), Ring::neg(&c));
        assert_eq!(s.coeff(&xw("11")), CPoly::zero());

        // all coefficients zero -> 1
        let coeffs = BTreeMap::new();
        let s = mrs_product(&mut bases, &coeffs, BasisKind::P, 3).unwrap();
        assert_eq!(s, NcSeries::one(Alphabet::X, 3));

        // inhomogeneous coefficient rejected
        let mut coeffs = BTreeMap::new();
        coeffs.insert(xw("01"), CPoly::symbol(ZetaSymbol::zeta_int(3)));
        assert!(mrs_product(&mut bases, &coeffs, BasisKind::P, 3).is_err());
    }

    #[test]
    fn z_shuffle_small() {
        let mut bases = DualBases::new(Alphabet::X);
        let z = build_z_shuffle(&mut bases, 2);
        let z2 = CPoly::symbol(ZetaSymbol::s(xw("01")));
        assert_eq!(z.coeff(&xw("01")), z2);
        assert_eq!(z.coeff(&xw("10")), Ring::neg(&z2));
        assert_eq!(z.coeff(&xw("11")), CPoly::zero());
        assert_eq!(z.coeff(&xw("0")), CPoly::zero());
        assert_eq!(z.coeff(&xw("1")), CPoly::zero());
    }

    #[test]
    fn z_shuffle_x1x0x1_coefficient() {
        // Bracket oracle at weight 3: only P_{x0x1^2} = [[x0,x1],x1]
        // contributes the word x1x0x1, with coefficient -2.
        let mut bases = DualBases::new(Alphabet::X);
        let z = build_z_shuffle(&mut bases, 3);
        let expected = CPoly::symbol(ZetaSymbol::s(xw("011"))).scale(&qz(-2));
        assert_eq!(z.coeff(&xw("101")), expected);
    }

    #[test]
    fn z_stuffle_and_gamma_small() {
        let mut bases = DualBases::new(Alphabet::Y);
        let z = build_z_stuffle(&mut bases, 2);
        assert_eq!(z.coeff(&yw("2")), CPoly::symbol(ZetaSymbol::sigma(yw("2"))));
        assert_eq!(z.coeff(&yw("1")), CPoly::zero());
        // <Z_st|y1^2> = -1/2 zeta(Sigma_{y2})
        assert_eq!(
            z.coeff(&yw("1,1")),
            CPoly::symbol(ZetaSymbol::sigma(yw("2"))).scale(&q(-1, 2))
        );
        let zg = build_z_gamma(&z);
        assert_eq!(zg.coeff(&yw("1")), gamma());
    }

    #[test]
    fn b_series_coefficients() {
        let b = b_series(3);
        assert_eq!(b.coeff(&Word::empty(Alphabet::Y)), CPoly::one());
        // <B|y1^2> = gamma^2/2 - zeta(2)/2
        let mut expected = CPoly::term(
            q(1, 2),
            Monomial::from_factors(vec![(ZetaSymbol::Gamma, 2)]),
        );
        expected = expected.sub(&CPoly::symbol(ZetaSymbol::zeta_int(2)).scale(&q(1, 2)));
        assert_eq!(b.coeff(&yw("1,1")), expected);

        let bp = bprime_series(3);
        assert_eq!(bp.coeff(&yw("1")), CPoly::zero());
        assert_eq!(
            bp.coeff(&yw("1,1")),
            CPoly::symbol(ZetaSymbol::zeta_int(2)).scale(&q(-1, 2))
        );

        // B(x1)^{-1} * B(x1) = 1
        let bx = single_letter_exp(Alphabet::X, 1, true, false, 4);
        let bx_inv = bx_inverse_series(4);
        assert_eq!(bx.mul(&bx_inv), NcSeries::one(Alphabet::X, 4));
    }

    #[test]
    fn projections() {
        let mut s = NcSeries::zero(Alphabet::X, 2);
        s.add_term(xw("10"), CPoly::one());
        s.add_term(xw("01"), CPoly::one());
        let p = s.project_y();
        assert_eq!(p.coeff(&yw("2")), CPoly::one());
        assert_eq!(p.terms().count(), 1);

        let mut s = NcSeries::zero(Alphabet::Y, 3);
        s.add_term(yw("2,1"), gamma());
        let p = s.project_x();
        assert_eq!(p.coeff(&xw("011")), gamma());

        let one = NcSeries::one(Alphabet::X, 2);
        assert_eq!(one.project_y(), NcSeries::one(Alphabet::Y, 2));
    }

    #[test]
    fn character_checks() {
        let mut by = DualBases::new(Alphabet::Y);
        let z = build_z_stuffle(&mut by, 6);
        assert!(character_check(&z, ProductKind::Stuffle));

        let mut bx = DualBases::new(Alphabet::X);
        let z = build_z_shuffle(&mut bx, 6);
        assert!(character_check(&z, ProductKind::Shuffle));

        let mut s = NcSeries::one(Alphabet::Y, 2);
        s.add_term(yw("2"), CPoly::one());
        assert!(!character_check(&s, ProductKind::Stuffle));

        let mut arg = NcSeries::zero(Alphabet::Y, 4);
        arg.add_term(yw("1"), gamma());
        assert!(character_check(&arg.exp().unwrap(), ProductKind::Stuffle));
    }

    #[test]
    fn factor_order_matters() {
        // multiplying the weight-2 and weight-3 exponential factors in the
        // wrong order changes coefficients
        let mut bases = DualBases::new(Alphabet::X);
        let trunc = 5;
        let f1 = {
            let p = bases.p_of(&xw("01"));
            NcSeries::from_poly(&p.map_coeffs(|k| CPoly::constant(k.clone())), trunc)
                .scale(&CPoly::symbol(ZetaSymbol::s(xw("01"))))
                .exp()
                .unwrap()
        };
        let f2 = {
            let p = bases.p_of(&xw("001"));
            NcSeries::from_poly(&p.map_coeffs(|k| CPoly::constant(k.clone())), trunc)
                .scale(&CPoly::symbol(ZetaSymbol::s(xw("001"))))
                .exp()
                .unwrap()
        };
        assert_ne!(f1.mul(&f2), f2.mul(&f1));
    }

    #[test]
    fn bridge_forms_agree_to_weight_5() {
        let mut bx = DualBases::new(Alphabet::X);
        let z_sh = build_z_shuffle(&mut bx, 5);
        assert_eq!(bridge_agreement_defects(&z_sh, 5), Vec::<Word>::new());
    }
}
