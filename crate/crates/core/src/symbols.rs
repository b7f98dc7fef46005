//! The commutative ring of formal polyzeta symbols over exact rationals:
//! the Euler constant `gamma` (weight 1), shuffle-side generators
//! `zeta(S_l)` indexed by X-Lyndon words, and quasi-shuffle-side generators
//! `zeta(Sigma_l)` indexed by Y-Lyndon words.  Rewrite systems substitute
//! reducible generators by polynomials over irreducible ones.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::ser::SerializeSeq;

use crate::error::{Error, Result};
use crate::ncpoly::{Ring, Q};
use crate::words::{Alphabet, Word};

/// A formal symbol: `gamma`, `zeta(S_l)` for `l` X-Lyndon (not a letter), or
/// `zeta(Sigma_l)` for `l` Y-Lyndon (not `y1`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ZetaSymbol {
    Gamma,
    S(Word),
    Sigma(Word),
}

impl ZetaSymbol {
    pub fn s(w: Word) -> Self {
        debug_assert_eq!(w.alphabet(), Alphabet::X);
        debug_assert!(
            w.len() >= 2 && w.is_lyndon(),
            "zeta(S_l) needs a non-letter X-Lyndon word"
        );
        ZetaSymbol::S(w)
    }

    pub fn sigma(w: Word) -> Self {
        debug_assert_eq!(w.alphabet(), Alphabet::Y);
        debug_assert!(w.is_lyndon(), "zeta(Sigma_l) needs a Y-Lyndon word");
        debug_assert!(w.weight() >= 2, "zeta(Sigma_{{y1}}) is excluded");
        ZetaSymbol::Sigma(w)
    }

    /// zeta(k) is encoded on the shuffle side as zeta(S_{x0^{k-1} x1}).
    pub fn zeta_int(k: u32) -> Self {
        assert!(k >= 2);
        let mut letters = vec![0u8; (k - 1) as usize];
        letters.push(1);
        ZetaSymbol::S(Word::from_letters(Alphabet::X, letters))
    }

    pub fn weight(&self) -> u32 {
        match self {
            ZetaSymbol::Gamma => 1,
            ZetaSymbol::S(w) | ZetaSymbol::Sigma(w) => w.weight(),
        }
    }

    pub fn side(&self) -> Option<Alphabet> {
        match self {
            ZetaSymbol::Gamma => None,
            ZetaSymbol::S(_) => Some(Alphabet::X),
            ZetaSymbol::Sigma(_) => Some(Alphabet::Y),
        }
    }

    pub fn index_word(&self) -> Option<&Word> {
        match self {
            ZetaSymbol::Gamma => None,
            ZetaSymbol::S(w) | ZetaSymbol::Sigma(w) => Some(w),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            ZetaSymbol::Gamma => 0,
            ZetaSymbol::S(_) => 1,
            ZetaSymbol::Sigma(_) => 2,
        }
    }

    pub fn json_kind(&self) -> &'static str {
        match self {
            ZetaSymbol::Gamma => "gamma",
            ZetaSymbol::S(_) => "zeta_s",
            ZetaSymbol::Sigma(_) => "zeta_sigma",
        }
    }

    pub fn try_s(w: Word) -> Result<Self> {
        if w.alphabet() != Alphabet::X || w.len() < 2 || !w.is_lyndon() {
            return Err(Error::Parse(format!(
                "{w} is not a non-letter X-Lyndon word"
            )));
        }
        Ok(ZetaSymbol::S(w))
    }

    pub fn try_sigma(w: Word) -> Result<Self> {
        if w.alphabet() != Alphabet::Y || !w.is_lyndon() || w.weight() < 2 {
            return Err(Error::Parse(format!(
                "{w} is not an admissible Y-Lyndon word"
            )));
        }
        Ok(ZetaSymbol::Sigma(w))
    }

    pub fn from_kind_word(kind: &str, word: Option<&str>) -> Result<Self> {
        match kind {
            "gamma" => Ok(ZetaSymbol::Gamma),
            "zeta_s" => {
                let w = word.ok_or_else(|| Error::Parse("zeta_s needs a word".into()))?;
                ZetaSymbol::try_s(Word::x_from_bits(w)?)
            }
            "zeta_sigma" => {
                let w = word.ok_or_else(|| Error::Parse("zeta_sigma needs a word".into()))?;
                ZetaSymbol::try_sigma(Word::y_from_indices_str(w)?)
            }
            other => Err(Error::Parse(format!("unknown symbol kind {other:?}"))),
        }
    }
}

/// Symbol order: (weight, kind, index-word lex).  Fixes every printed and
/// serialized ordering in the crate.
impl Ord for ZetaSymbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.rank().cmp(&other.rank()))
            .then_with(|| match (self.index_word(), other.index_word()) {
                (Some(a), Some(b)) => a.lex_cmp(b),
                _ => Ordering::Equal,
            })
    }
}

impl PartialOrd for ZetaSymbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ZetaSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZetaSymbol::Gamma => write!(f, "gamma"),
            ZetaSymbol::S(w) => write!(f, "zeta(S[{w}])"),
            ZetaSymbol::Sigma(w) => {
                if w.len() == 1 {
                    write!(f, "zeta({})", w.letters()[0])
                } else {
                    write!(f, "zeta(Sigma[{w}])")
                }
            }
        }
    }
}

/// A commutative monomial: sorted multiset of symbols with exponents >= 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct Monomial(Vec<(ZetaSymbol, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn symbol(s: ZetaSymbol) -> Self {
        Monomial(vec![(s, 1)])
    }

    pub fn from_factors(mut factors: Vec<(ZetaSymbol, u32)>) -> Self {
        factors.retain(|(_, e)| *e > 0);
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(ZetaSymbol, u32)> = Vec::with_capacity(factors.len());
        for (s, e) in factors {
            match merged.last_mut() {
                Some((t, f)) if *t == s => *f += e,
                _ => merged.push((s, e)),
            }
        }
        Monomial(merged)
    }

    pub fn factors(&self) -> &[(ZetaSymbol, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(|(s, e)| s.weight() * e).sum()
    }

    pub fn degree_of(&self, s: &ZetaSymbol) -> u32 {
        self.0
            .iter()
            .find(|(t, _)| t == s)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        let mut factors = self.0.clone();
        factors.extend_from_slice(&rhs.0);
        Monomial::from_factors(factors)
    }

    pub fn contains(&self, s: &ZetaSymbol) -> bool {
        self.degree_of(s) > 0
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (s, e) in &self.0 {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Commutative polynomial in zeta symbols over exact rationals;
/// canonical form (no zero coefficients), graded by total weight.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CPoly {
    terms: BTreeMap<Monomial, Q>,
}

impl CPoly {
    pub fn zero() -> Self {
        CPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        CPoly::constant(crate::ncpoly::qz(1))
    }

    pub fn constant(c: Q) -> Self {
        let mut p = CPoly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn symbol(s: ZetaSymbol) -> Self {
        let mut p = CPoly::zero();
        p.add_term(Monomial::symbol(s), crate::ncpoly::qz(1));
        p
    }

    pub fn term(c: Q, m: Monomial) -> Self {
        let mut p = CPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(<Q as Ring>::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if Ring::is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if Ring::is_zero(&sum) {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Q) -> CPoly {
        let mut out = CPoly::zero();
        if Ring::is_zero(c) {
            return out;
        }
        for (m, k) in self.terms() {
            out.terms.insert(m.clone(), k * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> CPoly {
        let mut out = CPoly::one();
        for _ in 0..n {
            out = Ring::mul(&out, self);
        }
        out
    }

    /// Largest gamma exponent across monomials (0 for gamma-free).
    pub fn gamma_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.degree_of(&ZetaSymbol::Gamma))
            .max()
            .unwrap_or(0)
    }

    /// The weight of a homogeneous polynomial; None if mixed or zero.
    pub fn homogeneous_weight(&self) -> Option<u32> {
        let mut weights = self.terms.keys().map(|m| m.weight());
        let first = weights.next()?;
        weights.all(|w| w == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, weight: u32) -> bool {
        self.terms.keys().all(|m| m.weight() == weight)
    }

    pub fn graded_component(&self, weight: u32) -> CPoly {
        let mut out = CPoly::zero();
        for (m, c) in self.terms() {
            if m.weight() == weight {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    pub fn max_weight(&self) -> u32 {
        self.terms.keys().map(|m| m.weight()).max().unwrap_or(0)
    }

    /// All distinct symbols appearing in the polynomial.
    pub fn symbols(&self) -> BTreeSet<ZetaSymbol> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for (s, _) in m.factors() {
                out.insert(s.clone());
            }
        }
        out
    }

    pub fn contains_symbol(&self, s: &ZetaSymbol) -> bool {
        self.terms.keys().any(|m| m.contains(s))
    }

    /// Replace every occurrence of `lhs` by `rhs` and re-canonicalize.
    /// The rule must be weight-homogeneous.
    pub fn substitute(&self, lhs: &ZetaSymbol, rhs: &CPoly) -> Result<CPoly> {
        if !rhs.is_homogeneous_of(lhs.weight()) {
            return Err(Error::InhomogeneousRule(format!(
                "{lhs} (weight {}) -> polynomial of different weight",
                lhs.weight()
            )));
        }
        let mut out = CPoly::zero();
        for (m, c) in self.terms() {
            let e = m.degree_of(lhs);
            if e == 0 {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            let rest = Monomial::from_factors(
                m.factors()
                    .iter()
                    .filter(|(s, _)| s != lhs)
                    .cloned()
                    .collect(),
            );
            let replaced = rhs.pow(e);
            for (rm, rc) in replaced.terms() {
                out.add_term(rest.mul(rm), c * rc);
            }
        }
        Ok(out)
    }
}

impl Ring for CPoly {
    fn zero() -> Self {
        CPoly::zero()
    }
    fn one() -> Self {
        CPoly::one()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
    fn neg(&self) -> Self {
        let mut out = CPoly::zero();
        for (m, c) in self.terms() {
            out.terms.insert(m.clone(), -c);
        }
        out
    }
    fn mul(&self, rhs: &Self) -> Self {
        let mut out = CPoly::zero();
        for (ma, ca) in self.terms() {
            for (mb, cb) in rhs.terms() {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
    fn from_rat(value: &Q) -> Self {
        CPoly::constant(value.clone())
    }
}

impl CPoly {
    pub fn sub(&self, rhs: &CPoly) -> CPoly {
        Ring::add(self, &Ring::neg(rhs))
    }
}

impl fmt::Display for CPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if Ring::is_zero(self) {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            let negative = c < &<Q as Ring>::zero();
            let mag = if negative { -c } else { c.clone() };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let one = mag == <Q as Ring>::one();
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if one {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag} {m}")?;
            }
        }
        Ok(())
    }
}

/// JSON form: a list of `{coeff: "p/q", mono: [{kind, word}...]}` entries,
/// sorted canonically; exponents are expanded into repeated descriptors.
impl serde::Serialize for CPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(serde::Serialize)]
        struct SymDesc<'a> {
            kind: &'static str,
            #[serde(skip_serializing_if = "Option::is_none")]
            word: Option<&'a Word>,
        }
        #[derive(serde::Serialize)]
        struct Term<'a> {
            coeff: String,
            mono: Vec<SymDesc<'a>>,
        }
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (m, c) in self.terms() {
            let mut mono = Vec::new();
            for (sym, e) in m.factors() {
                for _ in 0..*e {
                    mono.push(SymDesc {
                        kind: sym.json_kind(),
                        word: sym.index_word(),
                    });
                }
            }
            let coeff = format!("{}/{}", c.numer(), c.denom());
            seq.serialize_element(&Term { coeff, mono })?;
        }
        seq.end()
    }
}

fn parse_rat(s: &str) -> Result<Q> {
    use num::BigInt;
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    let d: BigInt = den
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {s:?}")))?;
    if num::Zero::is_zero(&d) {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Q::new(n, d))
}

impl<'de> serde::Deserialize<'de> for CPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        struct SymDesc {
            kind: String,
            #[serde(default)]
            word: Option<String>,
        }
        #[derive(serde::Deserialize)]
        struct Term {
            coeff: String,
            mono: Vec<SymDesc>,
        }
        let terms: Vec<Term> = Vec::deserialize(d)?;
        let mut out = CPoly::zero();
        for t in terms {
            let coeff = parse_rat(&t.coeff).map_err(serde::de::Error::custom)?;
            let mut factors = Vec::with_capacity(t.mono.len());
            for desc in &t.mono {
                let sym = ZetaSymbol::from_kind_word(&desc.kind, desc.word.as_deref())
                    .map_err(serde::de::Error::custom)?;
                factors.push((sym, 1));
            }
            out.add_term(Monomial::from_factors(factors), coeff);
        }
        Ok(out)
    }
}

/// An ordered confluent rewriting system: rules `symbol -> CPoly` grouped by
/// weight plus the set of irreducible symbols of the same side.
///
/// Discipline enforced at construction: every rule is weight-homogeneous,
/// no rule left side occurs in any right side, and no symbol is both a rule
/// left side and irreducible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteSystem {
    side: Alphabet,
    rules: BTreeMap<ZetaSymbol, CPoly>,
    irreducibles: BTreeSet<ZetaSymbol>,
    max_weight: u32,
}

impl RewriteSystem {
    pub fn new(
        side: Alphabet,
        rules: Vec<(ZetaSymbol, CPoly)>,
        irreducibles: Vec<ZetaSymbol>,
        max_weight: u32,
    ) -> Result<Self> {
        let rule_map: BTreeMap<ZetaSymbol, CPoly> = rules.into_iter().collect();
        let irr: BTreeSet<ZetaSymbol> = irreducibles.into_iter().collect();
        for (lhs, rhs) in &rule_map {
            if !rhs.is_homogeneous_of(lhs.weight()) {
                return Err(Error::InhomogeneousRule(format!("{lhs} -> {rhs}")));
            }
            if irr.contains(lhs) {
                return Err(Error::RuleDiscipline(format!(
                    "{lhs} is both a rule and irreducible"
                )));
            }
        }
        for lhs in rule_map.keys() {
            for (other, rhs) in &rule_map {
                if rhs.contains_symbol(lhs) {
                    return Err(Error::RuleDiscipline(format!(
                        "left side {lhs} occurs in the right side of {other}"
                    )));
                }
            }
        }
        Ok(RewriteSystem {
            side,
            rules: rule_map,
            irreducibles: irr,
            max_weight,
        })
    }

    pub fn empty(side: Alphabet) -> Self {
        RewriteSystem {
            side,
            rules: BTreeMap::new(),
            irreducibles: BTreeSet::new(),
            max_weight: 1,
        }
    }

    pub fn side(&self) -> Alphabet {
        self.side
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    pub fn rules(&self) -> impl Iterator<Item = (&ZetaSymbol, &CPoly)> {
        self.rules.iter()
    }

    pub fn rule(&self, s: &ZetaSymbol) -> Option<&CPoly> {
        self.rules.get(s)
    }

    pub fn irreducibles(&self) -> impl Iterator<Item = &ZetaSymbol> {
        self.irreducibles.iter()
    }

    pub fn is_irreducible(&self, s: &ZetaSymbol) -> bool {
        self.irreducibles.contains(s)
    }

    pub fn rules_of_weight(&self, weight: u32) -> Vec<(&ZetaSymbol, &CPoly)> {
        self.rules
            .iter()
            .filter(|(s, _)| s.weight() == weight)
            .collect()
    }

    pub fn irreducibles_of_weight(&self, weight: u32) -> Vec<&ZetaSymbol> {
        self.irreducibles
            .iter()
            .filter(|s| s.weight() == weight)
            .collect()
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct SymbolRepr {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    word: Option<String>,
}

impl SymbolRepr {
    fn of(s: &ZetaSymbol) -> Self {
        SymbolRepr {
            kind: s.json_kind().to_string(),
            word: s.index_word().map(|w| w.to_string()),
        }
    }

    fn parse(&self) -> Result<ZetaSymbol> {
        ZetaSymbol::from_kind_word(&self.kind, self.word.as_deref())
    }
}

#[derive(serde::Serialize, serde::Deserialize)]
struct RewriteSystemRepr {
    side: String,
    max_weight: u32,
    rules: Vec<(SymbolRepr, CPoly)>,
    irreducibles: Vec<SymbolRepr>,
}

impl serde::Serialize for RewriteSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = RewriteSystemRepr {
            side: self.side.to_string(),
            max_weight: self.max_weight,
            rules: self
                .rules
                .iter()
                .map(|(l, r)| (SymbolRepr::of(l), r.clone()))
                .collect(),
            irreducibles: self.irreducibles.iter().map(SymbolRepr::of).collect(),
        };
        repr.serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for RewriteSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = RewriteSystemRepr::deserialize(d)?;
        let side = match repr.side.as_str() {
            "x" => Alphabet::X,
            "y" => Alphabet::Y,
            other => return Err(serde::de::Error::custom(format!("bad side {other:?}"))),
        };
        let rules: Vec<(ZetaSymbol, CPoly)> = repr
            .rules
            .into_iter()
            .map(|(l, r)| Ok((l.parse().map_err(serde::de::Error::custom)?, r)))
            .collect::<std::result::Result<_, D::Error>>()?;
        let irreducibles: Vec<ZetaSymbol> = repr
            .irreducibles
            .into_iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<_, D::Error>>()?;
        RewriteSystem::new(side, rules, irreducibles, repr.max_weight)
            .map_err(serde::de::Error::custom)
    }
}

/// Exhaustive substitution by every applicable rule of the given systems.
/// Because rule right sides contain no rule left sides, one substitution per
/// reducible symbol reaches the fixpoint; the loop guards regardless.
pub fn normal_form(p: &CPoly, systems: &[&RewriteSystem]) -> CPoly {
    let mut current = p.clone();
    loop {
        let mut reducible: Option<(ZetaSymbol, CPoly)> = None;
        'scan: for s in current.symbols() {
            for rs in systems {
                if let Some(rhs) = rs.rule(&s) {
                    reducible = Some((s, rhs.clone()));
                    break 'scan;
                }
            }
        }
        match reducible {
            None => return current,
            Some((s, rhs)) => {
                current = current.substitute(&s, &rhs).expect("rules are homogeneous");
            }
        }
    }
}
