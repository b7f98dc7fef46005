//! The local-coordinate identification pipeline.
//!
//! Per weight p, ascending:
//!  1. collect the bridge equations `<Z_gamma|w> = <B(y1) pi_Y(Z_sh)|w>`
//!     for every Y-word w of weight p, and
//!     `<Z_sh|w> = <B(x1)^{-1} pi_X(Z_gamma)|w>` for every X-word of
//!     length p ending in x1 (the X form of the bridge is the pi_X image of
//!     the Y form and carries no information on words ending in x0);
//!  2. normal-form each equation by the rules of weight < p and translate
//!     lower-weight Y-irreducibles to shuffle-side coordinates;
//!  3. the residue is linear over Q in the weight-p unknowns
//!     {zeta(Sigma_l)} and {zeta(S_m)}; run exact Gauss-Jordan elimination
//!     with columns ordered Y before X, larger Lyndon words first;
//!  4. pivoted X columns become shuffle-side rules, free X columns become
//!     irreducibles; quasi-shuffle rules are recovered by solving each
//!     zeta(Sigma_l) expression over the monomials in the Y-irreducibles.
//!
//! Derived relations must be weight-homogeneous and free of gamma; both are
//! hard assertions and abort the derivation when violated.

use std::collections::BTreeMap;

use crate::bases::{decompose_shuffle, decompose_stuffle, DualBases};
use crate::error::{Error, Result};
use crate::ncpoly::{q, qz, NcPoly, Ring, Q};
use crate::series::{
    b_series, build_z_gamma, build_z_shuffle, build_z_stuffle, bx_inverse_series, NcSeries,
};
use crate::symbols::{normal_form, CPoly, Monomial, RewriteSystem, ZetaSymbol};
use crate::words::{self, lyndon_of_weight, words_of_weight, Alphabet, Word};

#[derive(Clone, Copy, Debug, Default, serde::Serialize)]
pub struct WeightStats {
    pub lyndon_per_side: usize,
    pub rules_y: usize,
    pub rules_x: usize,
    pub irreducibles_y: usize,
    pub irreducibles_x: usize,
}

/// Derived rewrite systems plus everything needed to reduce zeta values.
pub struct Engine {
    max_weight: u32,
    bases_x: DualBases,
    bases_y: DualBases,
    z_shuffle: NcSeries,
    z_stuffle: NcSeries,
    z_gamma: NcSeries,
    /// B(y1) * pi_Y(Z_sh): right side of the Y bridge.
    bridge_y_rhs: NcSeries,
    /// B(x1)^{-1} * pi_X(Z_gamma): right side of the X bridge.
    bridge_x_rhs: NcSeries,
    rs_y: RewriteSystem,
    rs_x: RewriteSystem,
    /// Y-irreducible -> canonical polynomial over X-irreducibles.
    canon_y2x: BTreeMap<ZetaSymbol, CPoly>,
    /// X-irreducible -> canonical polynomial over Y-irreducibles.
    canon_x2y: BTreeMap<ZetaSymbol, CPoly>,
    stats: BTreeMap<u32, WeightStats>,
}

impl Engine {
    /// Build the series and derive both rewrite systems up to `max_weight`.
    pub fn derive(max_weight: u32) -> Result<Engine> {
        assert!(max_weight >= 2, "relation derivation starts at weight 2");
        let mut bases_x = DualBases::new(Alphabet::X);
        let mut bases_y = DualBases::new(Alphabet::Y);
        let z_shuffle = build_z_shuffle(&mut bases_x, max_weight);
        let z_stuffle = build_z_stuffle(&mut bases_y, max_weight);
        let z_gamma = build_z_gamma(&z_stuffle);
        let bridge_y_rhs = b_series(max_weight).mul(&z_shuffle.project_y());
        let bridge_x_rhs = bx_inverse_series(max_weight).mul(&z_gamma.project_x());
        let mut engine = Engine {
            max_weight,
            bases_x,
            bases_y,
            z_shuffle,
            z_stuffle,
            z_gamma,
            bridge_y_rhs,
            bridge_x_rhs,
            rs_y: RewriteSystem::empty(Alphabet::Y),
            rs_x: RewriteSystem::empty(Alphabet::X),
            canon_y2x: BTreeMap::new(),
            canon_x2y: BTreeMap::new(),
            stats: BTreeMap::new(),
        };
        for p in 2..=max_weight {
            engine.process_weight(p)?;
        }
        Ok(engine)
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    pub fn rewrite_system(&self, side: Alphabet) -> &RewriteSystem {
        match side {
            Alphabet::X => &self.rs_x,
            Alphabet::Y => &self.rs_y,
        }
    }

    pub fn stats(&self) -> &BTreeMap<u32, WeightStats> {
        &self.stats
    }

    pub fn z_shuffle(&self) -> &NcSeries {
        &self.z_shuffle
    }

    pub fn z_stuffle(&self) -> &NcSeries {
        &self.z_stuffle
    }

    pub fn z_gamma(&self) -> &NcSeries {
        &self.z_gamma
    }

    pub fn bases_mut(&mut self, alphabet: Alphabet) -> &mut DualBases {
        match alphabet {
            Alphabet::X => &mut self.bases_x,
            Alphabet::Y => &mut self.bases_y,
        }
    }

    pub fn cross_map(&self, from_side: Alphabet) -> &BTreeMap<ZetaSymbol, CPoly> {
        match from_side {
            Alphabet::Y => &self.canon_y2x,
            Alphabet::X => &self.canon_x2y,
        }
    }

    /// Raw bridge equations of the given weight, each a polynomial that the
    /// identification forces to zero.  Y-word equations first, then the
    /// x1-ending X-word equations.
    pub fn bridge_equations(&self, weight: u32) -> Vec<(Word, CPoly)> {
        assert!(weight <= self.max_weight);
        let mut out = Vec::new();
        for w in words_of_weight(Alphabet::Y, weight) {
            let eq = self.z_gamma.coeff(&w).sub(&self.bridge_y_rhs.coeff(&w));
            out.push((w, eq));
        }
        for w in words_of_weight(Alphabet::X, weight) {
            if w.letters().last() != Some(&1) {
                continue;
            }
            let eq = self.z_shuffle.coeff(&w).sub(&self.bridge_x_rhs.coeff(&w));
            out.push((w, eq));
        }
        out
    }

    /// Reduce lower-weight symbols by the derived rules, then translate the
    /// remaining lower-weight Y-irreducibles into shuffle-side coordinates.
    fn canonicalize_to_x(&self, p: &CPoly) -> CPoly {
        let mut current = normal_form(p, &[&self.rs_y, &self.rs_x]);
        loop {
            let mut replaced = false;
            for s in current.symbols() {
                if let Some(image) = self.canon_y2x.get(&s) {
                    current = current
                        .substitute(&s, image)
                        .expect("canonical maps homogeneous");
                    replaced = true;
                    break;
                }
            }
            if !replaced {
                return current;
            }
        }
    }

    #[allow(clippy::needless_range_loop)] // indexed elimination reads clearer
    fn process_weight(&mut self, p: u32) -> Result<()> {
        let lyndon_y = lyndon_of_weight(Alphabet::Y, p);
        let lyndon_x: Vec<Word> = lyndon_of_weight(Alphabet::X, p)
            .into_iter()
            .filter(|w| w.len() >= 2)
            .collect();
        // columns: Y symbols then X symbols, each in descending lex order
        let mut columns: Vec<ZetaSymbol> = Vec::new();
        for l in lyndon_y.iter().rev() {
            columns.push(ZetaSymbol::sigma(l.clone()));
        }
        for m in lyndon_x.iter().rev() {
            columns.push(ZetaSymbol::s(m.clone()));
        }
        let n_y = lyndon_y.len();
        let col_index: BTreeMap<ZetaSymbol, usize> = columns
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();

        struct Row {
            lin: Vec<Q>,
            aff: CPoly,
            word: Word,
        }
        let mut rows: Vec<Row> = Vec::new();
        for (word, raw) in self.bridge_equations(p) {
            let reduced = self.canonicalize_to_x(&raw);
            let mut lin = vec![qz(0); columns.len()];
            let mut aff = CPoly::zero();
            for (mono, c) in reduced.terms() {
                if mono.weight() != p {
                    return Err(Error::Inconsistent {
                        weight: p,
                        detail: format!("equation at {word} is not weight-homogeneous: {reduced}"),
                    });
                }
                let factors = mono.factors();
                if factors.len() == 1 && factors[0].1 == 1 && factors[0].0.weight() == p {
                    if let Some(&idx) = col_index.get(&factors[0].0) {
                        lin[idx] = &lin[idx] + c;
                        continue;
                    }
                }
                aff.add_term(mono.clone(), c.clone());
            }
            rows.push(Row { lin, aff, word });
        }

        // exact Gauss-Jordan over the ordered columns
        let mut pivot_of_col: Vec<Option<usize>> = vec![None; columns.len()];
        let mut used_row: Vec<bool> = vec![false; rows.len()];
        for col in 0..columns.len() {
            let Some(r) =
                (0..rows.len()).find(|&r| !used_row[r] && !Ring::is_zero(&rows[r].lin[col]))
            else {
                continue;
            };
            used_row[r] = true;
            pivot_of_col[col] = Some(r);
            let inv = qz(1) / rows[r].lin[col].clone();
            for c in &mut rows[r].lin {
                *c = &*c * &inv;
            }
            rows[r].aff = rows[r].aff.scale(&inv);
            for r2 in 0..rows.len() {
                if r2 == r || Ring::is_zero(&rows[r2].lin[col]) {
                    continue;
                }
                let factor = rows[r2].lin[col].clone();
                rows[r2].lin[col] = qz(0);
                for cc in col + 1..columns.len() {
                    if Ring::is_zero(&rows[r].lin[cc]) {
                        continue;
                    }
                    let delta = &factor * &rows[r].lin[cc];
                    rows[r2].lin[cc] = &rows[r2].lin[cc] - &delta;
                }
                // pivot row has zeros at earlier pivot columns already
                let delta = rows[r].aff.scale(&factor);
                if !Ring::is_zero(&delta) {
                    rows[r2].aff = rows[r2].aff.sub(&delta);
                }
            }
        }

        // consistency: unused rows must be identically zero
        for (r, row) in rows.iter().enumerate() {
            if used_row[r] {
                continue;
            }
            if row.lin.iter().any(|c| !Ring::is_zero(c)) || !Ring::is_zero(&row.aff) {
                return Err(Error::Inconsistent {
                    weight: p,
                    detail: format!(
                        "residual equation from word {} did not vanish: {}",
                        row.word, row.aff
                    ),
                });
            }
        }

        // read off each pivoted column as an expression over the free
        // columns (all on the X side) plus the affine part
        let free_cols: Vec<usize> = (0..columns.len())
            .filter(|&c| pivot_of_col[c].is_none())
            .collect();
        for c in &free_cols {
            if *c < n_y {
                return Err(Error::Inconsistent {
                    weight: p,
                    detail: format!(
                        "quasi-shuffle symbol {} could not be expressed across the bridge",
                        columns[*c]
                    ),
                });
            }
        }
        let mut expressions: BTreeMap<ZetaSymbol, CPoly> = BTreeMap::new();
        for (c, col_sym) in columns.iter().enumerate() {
            let Some(r) = pivot_of_col[c] else { continue };
            let mut expr = Ring::neg(&rows[r].aff);
            for &f in &free_cols {
                let coeff = &rows[r].lin[f];
                if !Ring::is_zero(coeff) {
                    expr.add_term(Monomial::symbol(columns[f].clone()), -coeff.clone());
                }
            }
            if expr.gamma_degree() > 0 {
                return Err(Error::Inconsistent {
                    weight: p,
                    detail: format!("gamma did not cancel in the relation for {col_sym}: {expr}"),
                });
            }
            if !expr.is_homogeneous_of(p) {
                return Err(Error::Inconsistent {
                    weight: p,
                    detail: format!("relation for {col_sym} is not homogeneous: {expr}"),
                });
            }
            expressions.insert(col_sym.clone(), expr);
        }

        // shuffle side: pivoted X columns are rules, free X columns are new
        // irreducibles
        let mut new_rules_x: Vec<(ZetaSymbol, CPoly)> = Vec::new();
        let mut new_irr_x: Vec<ZetaSymbol> = Vec::new();
        for (c, col_sym) in columns.iter().enumerate().skip(n_y) {
            match pivot_of_col[c] {
                Some(_) => new_rules_x.push((col_sym.clone(), expressions[col_sym].clone())),
                None => new_irr_x.push(col_sym.clone()),
            }
        }
        let mut all_rules_x: Vec<(ZetaSymbol, CPoly)> = self
            .rs_x
            .rules()
            .map(|(s, r)| (s.clone(), r.clone()))
            .collect();
        all_rules_x.extend(new_rules_x.iter().cloned());
        let mut all_irr_x: Vec<ZetaSymbol> = self.rs_x.irreducibles().cloned().collect();
        all_irr_x.extend(new_irr_x.iter().cloned());
        self.rs_x = RewriteSystem::new(Alphabet::X, all_rules_x, all_irr_x, p)?;

        // quasi-shuffle side, ascending Lyndon order: a symbol whose
        // shuffle-side expression lies in the span of the monomials over the
        // Y-irreducibles becomes a rule, otherwise a new irreducible
        let mut new_rules_y: Vec<(ZetaSymbol, CPoly)> = Vec::new();
        let mut new_irr_y: Vec<ZetaSymbol> = Vec::new();
        let mut irr_y_syms: Vec<ZetaSymbol> = self.rs_y.irreducibles().cloned().collect();
        for l in &lyndon_y {
            let sym = ZetaSymbol::sigma(l.clone());
            let target = expressions
                .get(&sym)
                .expect("every Y column pivots")
                .clone();
            let monos = monomials_of_weight(&irr_y_syms, p);
            let images: Vec<CPoly> = monos.iter().map(|m| self.canon_monomial_to_x(m)).collect();
            match solve_linear_combo(&images, &target) {
                Some(coeffs) => {
                    let mut rhs = CPoly::zero();
                    for (m, c) in monos.iter().zip(coeffs.iter()) {
                        rhs.add_term(m.clone(), c.clone());
                    }
                    new_rules_y.push((sym, rhs));
                }
                None => {
                    self.canon_y2x.insert(sym.clone(), target);
                    irr_y_syms.push(sym.clone());
                    new_irr_y.push(sym);
                }
            }
        }
        let mut all_rules_y: Vec<(ZetaSymbol, CPoly)> = self
            .rs_y
            .rules()
            .map(|(s, r)| (s.clone(), r.clone()))
            .collect();
        all_rules_y.extend(new_rules_y.iter().cloned());
        self.rs_y = RewriteSystem::new(Alphabet::Y, all_rules_y, irr_y_syms.clone(), p)?;

        // translate the new X-irreducibles back; both sides freely generate
        // the same graded algebra, so the solve must succeed
        if new_irr_x.len() != new_irr_y.len() {
            return Err(Error::Inconsistent {
                weight: p,
                detail: format!(
                    "irreducible counts differ across sides: {} vs {}",
                    new_irr_x.len(),
                    new_irr_y.len()
                ),
            });
        }
        for sym in &new_irr_x {
            let target = CPoly::symbol(sym.clone());
            let monos = monomials_of_weight(&irr_y_syms, p);
            let images: Vec<CPoly> = monos.iter().map(|m| self.canon_monomial_to_x(m)).collect();
            let coeffs =
                solve_linear_combo(&images, &target).ok_or_else(|| Error::Inconsistent {
                    weight: p,
                    detail: format!("no quasi-shuffle expression for irreducible {sym}"),
                })?;
            let mut image = CPoly::zero();
            for (m, c) in monos.iter().zip(coeffs.iter()) {
                image.add_term(m.clone(), c.clone());
            }
            self.canon_x2y.insert(sym.clone(), image);
        }

        self.stats.insert(
            p,
            WeightStats {
                lyndon_per_side: lyndon_y.len(),
                rules_y: new_rules_y.len(),
                rules_x: new_rules_x.len(),
                irreducibles_y: new_irr_y.len(),
                irreducibles_x: new_irr_x.len(),
            },
        );
        Ok(())
    }

    fn canon_monomial_to_x(&self, m: &Monomial) -> CPoly {
        let mut out = CPoly::one();
        for (s, e) in m.factors() {
            let image = self
                .canon_y2x
                .get(s)
                .expect("monomials over Y-irreducibles");
            out = Ring::mul(&out, &image.pow(*e));
        }
        out
    }

    /// Canonical form of a convergent zeta value given by a composition
    /// (s1,...,sr) with s1 >= 2.
    pub fn reduce_composition(&mut self, parts: &[u32]) -> Result<CPoly> {
        if parts.is_empty() || parts[0] < 2 || parts.contains(&0) {
            return Err(Error::Divergent(format!("{parts:?}")));
        }
        let letters: Vec<u8> = parts.iter().map(|&s| s as u8).collect();
        self.reduce_y_poly(&NcPoly::word(Word::y_from_indices(&letters)))
    }

    /// Reduce a polynomial supported on convergent Y-words.
    pub fn reduce_y_poly(&mut self, p: &NcPoly<Q>) -> Result<CPoly> {
        self.check_reducible(p)?;
        let expansion = decompose_stuffle(&mut self.bases_y, p);
        Ok(normal_form(&expansion.to_symbols(), &[&self.rs_y]))
    }

    /// Reduce a polynomial supported on convergent X-words through the
    /// shuffle side.
    pub fn reduce_x_poly(&mut self, p: &NcPoly<Q>) -> Result<CPoly> {
        self.check_reducible(p)?;
        let expansion = decompose_shuffle(&mut self.bases_x, p);
        Ok(normal_form(&expansion.to_symbols(), &[&self.rs_x]))
    }

    fn check_reducible(&self, p: &NcPoly<Q>) -> Result<()> {
        for (w, _) in p.terms() {
            if !w.is_empty() && !w.is_convergent() {
                return Err(Error::Divergent(w.to_string()));
            }
            if w.weight() > self.max_weight {
                return Err(Error::Parse(format!(
                    "weight {} exceeds the derived bound {}",
                    w.weight(),
                    self.max_weight
                )));
            }
        }
        Ok(())
    }

    /// The regularized constant `gamma_w = <Z_gamma|w>` in canonical form;
    /// contains gamma for divergent words.
    pub fn gamma_constant(&mut self, w: &Word) -> Result<CPoly> {
        assert_eq!(w.alphabet(), Alphabet::Y);
        if w.weight() > self.max_weight {
            return Err(Error::Parse(format!(
                "weight {} exceeds the derived bound {}",
                w.weight(),
                self.max_weight
            )));
        }
        Ok(normal_form(&self.z_gamma.coeff(w), &[&self.rs_y]))
    }

    /// Shuffle-regularized variant: `<Z_sh|pi_X(w)>` in canonical form.
    pub fn gamma_constant_shuffle(&mut self, w: &Word) -> Result<CPoly> {
        assert_eq!(w.alphabet(), Alphabet::Y);
        if w.weight() > self.max_weight {
            return Err(Error::Parse(format!(
                "weight {} exceeds the derived bound {}",
                w.weight(),
                self.max_weight
            )));
        }
        Ok(normal_form(
            &self.z_shuffle.coeff(&words::pi_x(w)),
            &[&self.rs_x],
        ))
    }

    /// Map a canonical X-side polynomial into Y-side coordinates through the
    /// weight-wise irreducible correspondence.
    pub fn x_to_y(&self, p: &CPoly) -> CPoly {
        let mut current = p.clone();
        loop {
            let mut replaced = false;
            for s in current.symbols() {
                if let Some(image) = self.canon_x2y.get(&s) {
                    current = current
                        .substitute(&s, image)
                        .expect("canonical maps homogeneous");
                    replaced = true;
                    break;
                }
            }
            if !replaced {
                return current;
            }
        }
    }

    /// Expansion of a symbol as a rational combination of convergent
    /// multiple zeta values given by compositions.
    pub fn symbol_mzv_expansion(&mut self, sym: &ZetaSymbol) -> Result<Vec<(Vec<u32>, Q)>> {
        match sym {
            ZetaSymbol::Gamma => Err(Error::Unresolvable("gamma".into())),
            ZetaSymbol::Sigma(l) => {
                let poly = self.bases_y.sigma_of(l);
                poly.terms()
                    .map(|(w, c)| {
                        if !w.is_convergent() {
                            return Err(Error::Unresolvable(format!(
                                "divergent word {w} in Sigma expansion"
                            )));
                        }
                        Ok((w.letters().iter().map(|&k| k as u32).collect(), c.clone()))
                    })
                    .collect()
            }
            ZetaSymbol::S(m) => {
                let poly = self.bases_x.s_of(m);
                poly.terms()
                    .map(|(w, c)| {
                        let y = words::pi_y(w).ok_or_else(|| {
                            Error::Unresolvable(format!("divergent word {w} in S expansion"))
                        })?;
                        if !y.is_convergent() {
                            return Err(Error::Unresolvable(format!(
                                "divergent word {w} in S expansion"
                            )));
                        }
                        Ok((y.letters().iter().map(|&k| k as u32).collect(), c.clone()))
                    })
                    .collect()
            }
        }
    }
}

/// Numeric check result for one derived rule.
#[derive(Clone, Debug, serde::Serialize)]
pub struct NumericCheck {
    pub side: String,
    pub lhs: String,
    pub residual: f64,
    pub pass: bool,
}

impl Engine {
    /// Evaluate a symbol numerically as a combination of partial-sum
    /// estimates (Richardson-refined) with a per-symbol cache.
    fn eval_symbol_numeric(
        &mut self,
        sym: &ZetaSymbol,
        n: u64,
        sym_cache: &mut BTreeMap<ZetaSymbol, crate::numcheck::Fixed>,
        comp_cache: &mut BTreeMap<Vec<u32>, crate::numcheck::Fixed>,
    ) -> Result<crate::numcheck::Fixed> {
        use crate::numcheck::{euler_gamma_estimate, mzv_estimate, Composition, Fixed};
        if let Some(hit) = sym_cache.get(sym) {
            return Ok(hit.clone());
        }
        let value = match sym {
            ZetaSymbol::Gamma => euler_gamma_estimate(n),
            _ => {
                let expansion = self.symbol_mzv_expansion(sym)?;
                let mut acc = Fixed::zero();
                for (parts, c) in expansion {
                    let v = match comp_cache.get(&parts) {
                        Some(v) => v.clone(),
                        None => {
                            let comp = Composition::new(parts.clone())?;
                            let est = mzv_estimate(&comp, n, true)?;
                            comp_cache.insert(parts.clone(), est.value.clone());
                            est.value
                        }
                    };
                    acc = acc.add(&Fixed::from_q(&c).mul(&v));
                }
                acc
            }
        };
        sym_cache.insert(sym.clone(), value.clone());
        Ok(value)
    }

    /// Numerically verify every derived rule of weight <= `max_weight` on
    /// both sides at the given partial-sum length and tolerance.
    pub fn verify_rules_numeric(
        &mut self,
        max_weight: u32,
        n: u64,
        tol: f64,
    ) -> Result<Vec<NumericCheck>> {
        let mut sym_cache = BTreeMap::new();
        let mut comp_cache = BTreeMap::new();
        let mut out = Vec::new();
        for side in [Alphabet::Y, Alphabet::X] {
            let rules: Vec<(ZetaSymbol, CPoly)> = self
                .rewrite_system(side)
                .rules()
                .filter(|(s, _)| s.weight() <= max_weight)
                .map(|(s, r)| (s.clone(), r.clone()))
                .collect();
            for (lhs, rhs) in rules {
                let eq = CPoly::symbol(lhs.clone()).sub(&rhs);
                let outcome = crate::numcheck::verify_equation(
                    &eq,
                    &mut |sym| self.eval_symbol_numeric(sym, n, &mut sym_cache, &mut comp_cache),
                    tol,
                )?;
                out.push(NumericCheck {
                    side: side.to_string(),
                    lhs: lhs.to_string(),
                    residual: outcome.residual,
                    pass: outcome.pass,
                });
            }
        }
        Ok(out)
    }
}

/// All monomials of the given total weight over the listed symbols.
pub fn monomials_of_weight(symbols: &[ZetaSymbol], weight: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current: Vec<(ZetaSymbol, u32)> = Vec::new();
    fn rec(
        symbols: &[ZetaSymbol],
        idx: usize,
        remaining: u32,
        current: &mut Vec<(ZetaSymbol, u32)>,
        out: &mut Vec<Monomial>,
    ) {
        if remaining == 0 {
            out.push(Monomial::from_factors(current.clone()));
            return;
        }
        if idx >= symbols.len() {
            return;
        }
        let w = symbols[idx].weight();
        let max_e = remaining / w;
        for e in (0..=max_e).rev() {
            if e > 0 {
                current.push((symbols[idx].clone(), e));
            }
            rec(symbols, idx + 1, remaining - e * w, current, out);
            if e > 0 {
                current.pop();
            }
        }
    }
    rec(symbols, 0, weight, &mut current, &mut out);
    out.sort();
    out.dedup();
    out
}

/// Solve `sum_j x_j gens[j] = target` exactly over Q; None when the target
/// is outside the span.
#[allow(clippy::needless_range_loop)]
pub fn solve_linear_combo(gens: &[CPoly], target: &CPoly) -> Option<Vec<Q>> {
    let mut monos: std::collections::BTreeSet<Monomial> = std::collections::BTreeSet::new();
    for g in gens {
        for (m, _) in g.terms() {
            monos.insert(m.clone());
        }
    }
    for (m, _) in target.terms() {
        monos.insert(m.clone());
    }
    let monos: Vec<Monomial> = monos.into_iter().collect();
    let rows = monos.len();
    let cols = gens.len();
    let mut a: Vec<Vec<Q>> = vec![vec![qz(0); cols + 1]; rows];
    for (i, m) in monos.iter().enumerate() {
        for (j, g) in gens.iter().enumerate() {
            a[i][j] = g.coeff(m);
        }
        a[i][cols] = target.coeff(m);
    }
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(r) = (rank..rows).find(|&r| !Ring::is_zero(&a[r][col])) else {
            continue;
        };
        a.swap(rank, r);
        let inv = qz(1) / a[rank][col].clone();
        for v in &mut a[rank] {
            *v = &*v * &inv;
        }
        for r2 in 0..rows {
            if r2 == rank || Ring::is_zero(&a[r2][col]) {
                continue;
            }
            let f = a[r2][col].clone();
            for cc in 0..=cols {
                if Ring::is_zero(&a[rank][cc]) {
                    continue;
                }
                let delta = &f * &a[rank][cc];
                a[r2][cc] = &a[r2][cc] - &delta;
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }
    for r in rank..rows {
        if !Ring::is_zero(&a[r][cols]) {
            return None;
        }
    }
    let mut x = vec![qz(0); cols];
    for (row, &col) in pivot_cols.iter().enumerate() {
        x[col] = a[row][cols].clone();
    }
    Some(x)
}

/// Confluence report for a rewrite system.
#[derive(Debug, Default, serde::Serialize)]
pub struct ConfluenceReport {
    pub violations: Vec<String>,
    pub samples_checked: usize,
}

impl ConfluenceReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Deterministic pseudo-random sequence for sampling (splitmix64).
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}

/// Verifies (a) normal-form-ness (no rule left side in any right side),
/// (b) homogeneity of every rule, (c) reduction determinism on random
/// polynomials reduced in random rule orders.
pub fn check_confluence(rs: &RewriteSystem, samples: usize, seed: u64) -> ConfluenceReport {
    let mut report = ConfluenceReport::default();
    let rules: Vec<(&ZetaSymbol, &CPoly)> = rs.rules().collect();
    for (lhs, rhs) in &rules {
        if !rhs.is_homogeneous_of(lhs.weight()) {
            report
                .violations
                .push(format!("inhomogeneous rule {lhs} -> {rhs}"));
        }
        for (other, rhs2) in &rules {
            if rhs2.contains_symbol(lhs) {
                report
                    .violations
                    .push(format!("{lhs} occurs in the right side of {other}"));
            }
        }
        if rs.is_irreducible(lhs) {
            report
                .violations
                .push(format!("{lhs} is both a rule and irreducible"));
        }
    }
    let mut rng = SplitMix64(seed);
    let symbols: Vec<ZetaSymbol> = rules
        .iter()
        .map(|(s, _)| (*s).clone())
        .chain(rs.irreducibles().cloned())
        .collect();
    if symbols.is_empty() {
        report.samples_checked = samples;
        return report;
    }
    for _ in 0..samples {
        // random polynomial: up to 4 monomials of up to 3 factors
        let mut p = CPoly::zero();
        for _ in 0..=rng.below(4) {
            let mut factors = Vec::new();
            for _ in 0..=rng.below(3) {
                factors.push((
                    symbols[rng.below(symbols.len())].clone(),
                    1 + rng.below(2) as u32,
                ));
            }
            let coeff = q(rng.below(19) as i64 - 9, 1 + rng.below(7) as i64);
            p.add_term(Monomial::from_factors(factors), coeff);
        }
        let reference = normal_form(&p, &[rs]);
        let randomized = reduce_random_order(&p, rs, &mut rng);
        if reference != randomized {
            report.violations.push(format!(
                "order-dependent reduction on sample {p}: {reference} vs {randomized}"
            ));
        }
    }
    report.samples_checked = samples;
    report
}

fn reduce_random_order(p: &CPoly, rs: &RewriteSystem, rng: &mut SplitMix64) -> CPoly {
    let mut current = p.clone();
    loop {
        let reducible: Vec<ZetaSymbol> = current
            .symbols()
            .into_iter()
            .filter(|s| rs.rule(s).is_some())
            .collect();
        if reducible.is_empty() {
            return current;
        }
        let pick = &reducible[rng.below(reducible.len())];
        let rhs = rs.rule(pick).expect("picked from reducible set").clone();
        current = current
            .substitute(pick, &rhs)
            .expect("rules are homogeneous");
    }
}

/// Per-weight bookkeeping: monomial counts over the derived irreducibles,
/// rule and irreducible counts, and the direct-sum check
/// rules + irreducibles = Lyndon words (per side).
#[derive(Debug, serde::Serialize)]
pub struct DimensionReport {
    pub max_weight: u32,
    pub rows: Vec<DimensionRow>,
}

#[derive(Debug, serde::Serialize)]
pub struct DimensionRow {
    pub weight: u32,
    pub lyndon_per_side: usize,
    pub rules_y: usize,
    pub rules_x: usize,
    pub irreducibles_y: usize,
    pub irreducibles_x: usize,
    pub monomials: u64,
    pub direct_sum_ok: bool,
}

impl Engine {
    pub fn dimension_report(&self) -> DimensionReport {
        let irr_weights: Vec<u32> = self.rs_y.irreducibles().map(|s| s.weight()).collect();
        let max = self.max_weight;
        // complete-knapsack count of monomials per weight
        let mut ways = vec![0u64; (max + 1) as usize];
        ways[0] = 1;
        for &w in &irr_weights {
            for j in w..=max {
                ways[j as usize] += ways[(j - w) as usize];
            }
        }
        let mut rows = Vec::new();
        for p in 2..=max {
            let st = self.stats.get(&p).copied().unwrap_or_default();
            let ok = st.rules_y + st.irreducibles_y == st.lyndon_per_side
                && st.rules_x + st.irreducibles_x == st.lyndon_per_side;
            rows.push(DimensionRow {
                weight: p,
                lyndon_per_side: st.lyndon_per_side,
                rules_y: st.rules_y,
                rules_x: st.rules_x,
                irreducibles_y: st.irreducibles_y,
                irreducibles_x: st.irreducibles_x,
                monomials: ways[p as usize],
                direct_sum_ok: ok,
            });
        }
        DimensionReport {
            max_weight: max,
            rows,
        }
    }
}
