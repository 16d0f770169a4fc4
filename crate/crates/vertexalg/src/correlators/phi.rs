//! Matrix-element correlators
//! `Φ(y, a_2, ..., a_{m-1}, x) = y(a_2(z_2) ... a_{m-1}(z_{m-1}) x)`
//! as truncated Laurent series, with the out-algebra invariance sum, the
//! flat-connection identity, and the weight-zero wedge descent.

use super::dual::DualVector;
use super::{localize_coefficient_series, Point, PointConfig, RationalModeLabel, Series};
use crate::basis::AlgebraKind;
use crate::fock::{FockError, Monomial, State};
use crate::field::{evaluate_field_mode, field_of_state, translate, FieldExpr};
use crate::geometry::eta::eval_eta_mode;
use crate::rational::{binomial, is_zero, qi, Q};
use crate::report::CheckReport;
use num::traits::Zero;
use std::collections::BTreeMap;

/// A state with series coefficients: monomial -> Laurent series in the
/// configuration variables.
#[derive(Debug, Clone)]
pub struct SeriesState {
    pub nvars: usize,
    pub window: i64,
    pub terms: BTreeMap<Monomial, Series>,
}

impl SeriesState {
    pub fn from_state(v: &State, nvars: usize, window: i64) -> Self {
        let mut terms = BTreeMap::new();
        for (m, c) in v.terms() {
            terms.insert(m.clone(), Series::constant(nvars, window, c.clone()));
        }
        SeriesState { nvars, window, terms }
    }

    pub fn zero(nvars: usize, window: i64) -> Self {
        SeriesState { nvars, window, terms: BTreeMap::new() }
    }

    pub fn add(&mut self, m: Monomial, s: Series) {
        if s.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(s);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let merged = o.get().plus(&s);
                if merged.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = merged;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &SeriesState) {
        for (m, s) in &other.terms {
            self.add(m.clone(), s.clone());
        }
    }

    pub fn scaled(&self, s: &Series) -> SeriesState {
        let mut out = SeriesState::zero(self.nvars, self.window);
        for (m, t) in &self.terms {
            out.add(m.clone(), t.times(s));
        }
        out
    }

    pub fn max_weight(&self) -> i64 {
        self.terms.keys().map(|m| m.weight()).max().unwrap_or(0)
    }

    /// Apply the field at the given point variable: multiply mode n by
    /// z_t^{-n-1} and sum over the window-relevant modes.
    pub fn apply_field_at(
        &self,
        field: &FieldExpr,
        var: usize,
        chart: &crate::fock::Chart,
        weight_cap: i64,
    ) -> Result<SeriesState, FockError> {
        let mut out = SeriesState::zero(self.nvars, self.window);
        for (m, coeff) in &self.terms {
            let v = State::monomial(chart, m.clone(), qi(1));
            let bound = field.annihilation_bound(m.weight());
            // exponent -n-1 within the window, plus the annihilation cap;
            // deep creation is cut by the weight cap from the dual side
            let n_lo = (-self.window - 1).max(m.weight() + field.min_delta() - weight_cap - 1);
            for n in n_lo..bound {
                let e = -n - 1;
                if e.abs() > self.window {
                    continue;
                }
                let img = evaluate_field_mode(field, n, &v)?;
                if img.is_zero() {
                    continue;
                }
                let mut exps = vec![0i64; self.nvars];
                exps[var] = e;
                let z = Series::monomial(self.nvars, self.window, exps, qi(1));
                let zc = coeff.times(&z);
                for (mm, cc) in img.terms() {
                    out.add(mm.clone(), zc.scaled(cc));
                }
            }
        }
        Ok(out)
    }

    pub fn pair_with(&self, y: &SeriesDual) -> Series {
        let mut acc = Series::zero(self.nvars, self.window);
        for (m, s) in &self.terms {
            if let Some(t) = y.table.get(m) {
                acc = acc.plus(&s.times(t));
            }
        }
        acc
    }
}

/// A dual vector with series coefficients (arises from localization at ∞).
#[derive(Debug, Clone)]
pub struct SeriesDual {
    pub nvars: usize,
    pub window: i64,
    pub table: BTreeMap<Monomial, Series>,
}

impl SeriesDual {
    pub fn from_dual(y: &DualVector, nvars: usize, window: i64) -> Self {
        let mut table = BTreeMap::new();
        for (m, c) in &y.table {
            table.insert(m.clone(), Series::constant(nvars, window, c.clone()));
        }
        SeriesDual { nvars, window, table }
    }

    pub fn max_weight(&self) -> i64 {
        self.table.keys().map(|m| m.weight()).max().unwrap_or(0)
    }
}

/// Slot contents for the invariance sum: each slot holds series-weighted
/// states (or the dual at infinity).
#[derive(Debug, Clone)]
pub struct PhiInput {
    pub y: DualVector,
    pub middles: Vec<State>,
    pub x: State,
}

/// Evaluate Φ as a truncated Laurent series in the region
/// |z_2| > ... > |z_{m-1}|.
pub fn phi_eval(
    y: &DualVector,
    middles: &[State],
    x: &State,
    config: &PointConfig,
    order: i64,
) -> Result<Series, FockError> {
    assert_eq!(middles.len(), config.zs.len(), "one middle state per finite point");
    let nv = config.zs.len();
    let yd = SeriesDual::from_dual(y, nv, order);
    let xs = SeriesState::from_state(x, nv, order);
    phi_eval_series(&yd, &middles.iter().map(|s| series_args(s, nv, order)).collect::<Vec<_>>(), &xs, order)
}

fn series_args(s: &State, nv: usize, order: i64) -> Vec<(Series, State)> {
    vec![(Series::constant(nv, order, qi(1)), s.clone())]
}

/// Core evaluation: middle slots may carry several series-weighted states
/// (insertions produce those).
pub fn phi_eval_series(
    y: &SeriesDual,
    middles: &[Vec<(Series, State)>],
    x: &SeriesState,
    order: i64,
) -> Result<Series, FockError> {
    let nv = x.nvars;
    let weight_cap = y.max_weight();
    let mut acc = x.clone();
    // innermost field first: slot m-1 is the last middle, variable index
    // middles.len()-1
    for (slot, entries) in middles.iter().enumerate().rev() {
        let mut next = SeriesState::zero(nv, order);
        for (coeff, state) in entries {
            if state.is_zero() {
                continue;
            }
            let chart = state.chart().clone();
            let f = field_of_state(state);
            let applied = acc.apply_field_at(&f, slot, &chart, weight_cap)?;
            next.add_assign(&applied.scaled(coeff));
        }
        acc = next;
    }
    Ok(acc.pair_with(y))
}

/// Sign of moving an odd insertion past the slots before `t` (slot 0 is
/// the dual at infinity).
fn koszul_prefix(x_odd: bool, parities: &[bool], t: usize) -> Q {
    if !x_odd {
        return qi(1);
    }
    let crossings = parities[..t].iter().filter(|p| **p).count();
    if crossings % 2 == 0 {
        qi(1)
    } else {
        qi(-1)
    }
}

/// The Lie(V)_out-invariance sum Σ_t ⟨..., i_{P_t}(X) v_t, ...⟩ as a series,
/// which must vanish on the window.
pub fn invariance_sum(
    y: &DualVector,
    middles: &[State],
    x: &State,
    config: &PointConfig,
    label: &RationalModeLabel,
    order: i64,
) -> Result<Series, FockError> {
    let nv = config.zs.len();
    let kind = AlgebraKind::Super;
    let _ = kind;
    let chart = x.chart().clone();
    let base_field = field_of_state(&label.base);
    let x_odd = label
        .base
        .terms()
        .next()
        .map(|(m, _)| m.parity())
        .unwrap_or(false);
    let mut parities = vec![y.parity()];
    parities.extend(middles.iter().map(|s| s.terms().next().map(|(m, _)| m.parity()).unwrap_or(false)));
    parities.push(x.terms().next().map(|(m, _)| m.parity()).unwrap_or(false));

    let yd = SeriesDual::from_dual(y, nv, order);
    let plain_middles: Vec<Vec<(Series, State)>> =
        middles.iter().map(|s| series_args(s, nv, order)).collect();
    let xs = SeriesState::from_state(x, nv, order);

    let mut total = Series::zero(nv, order);

    // slot 1: infinity. i_∞(B^{z_s}_{(j)}) = -η(Σ_i C(j,i)(-z_s)^i B_{(j-i)}),
    // acting on the dual through the η-twisted module structure:
    // (i_∞(X) y)(w) = -Σ_i C(j,i)(-z_s)^i y(B_{(j-i)} w).
    {
        let mut y2 = SeriesDual { nvars: nv, window: order, table: BTreeMap::new() };
        // support: weights reachable below the y support
        let wy = y.max_weight();
        let dmax = y.degree_bound + label.base.max_weight() + order + 2;
        for w in 0..=(wy + label.base.max_weight() + order + 1) {
            for m in crate::basis::monomials_of_weight(&chart, AlgebraKind::Super, w, dmax) {
                let v = State::monomial(&chart, m.clone(), qi(1));
                let mut entry = Series::zero(nv, order);
                let bound = base_field.annihilation_bound(w);
                let mut i = 0i64;
                loop {
                    let mode = label.j - i;
                    // creation depth cut by the y support, annihilation by the bound
                    if label.base.max_weight() - mode - 1 + w > wy + 1 && mode < bound {
                        if mode < -(wy + label.base.max_weight() + order + 3) {
                            break;
                        }
                    }
                    if i > order + wy + label.base.max_weight() + 3 {
                        break;
                    }
                    let c = binomial(label.j, i);
                    if !is_zero(&c) {
                        let img = evaluate_field_mode(&base_field, mode, &v)?;
                        let val = y.eval(&img);
                        if !is_zero(&val) {
                            match label.at {
                                Point::Zero => {
                                    if i == 0 {
                                        entry = entry.plus(&Series::constant(nv, order, -val));
                                    }
                                }
                                Point::Finite(s) => {
                                    let mut e = vec![0i64; nv];
                                    e[s] = i;
                                    let sgn = if i % 2 == 0 { qi(1) } else { qi(-1) };
                                    entry = entry.plus(&Series::monomial(
                                        nv,
                                        order,
                                        e,
                                        -val * c * sgn,
                                    ));
                                }
                                Point::Infinity => unreachable!(),
                            }
                        }
                    }
                    i += 1;
                }
                if !entry.is_zero() {
                    y2.table.insert(m, entry);
                }
            }
        }
        let term = phi_eval_series(&y2, &plain_middles, &xs, order)?;
        total = total.plus(&term);
    }

    // middle slots
    for (t, vt) in middles.iter().enumerate() {
        let target = Point::Finite(t);
        let mut inserted: Vec<(Series, State)> = Vec::new();
        let bound = base_field.annihilation_bound(vt.max_weight());
        if label.at == target {
            // tautological: the mode itself
            let img = evaluate_field_mode(&base_field, label.j, vt)?;
            inserted.push((Series::constant(nv, order, qi(1)), img));
        } else {
            for i in 0..bound.max(0) {
                let coeff = localize_coefficient_series(config, label.at, label.j, target, i, order);
                if coeff.is_zero() {
                    continue;
                }
                let img = evaluate_field_mode(&base_field, i, vt)?;
                if img.is_zero() {
                    continue;
                }
                inserted.push((coeff, img));
            }
        }
        let mut slots = plain_middles.clone();
        slots[t] = inserted;
        let sign = koszul_prefix(x_odd, &parities, t + 1);
        let term = phi_eval_series(&yd, &slots, &xs, order)?;
        total = total.plus(&term.scaled(&sign));
    }

    // slot m: zero
    {
        let mut inserted = SeriesState::zero(nv, order);
        let bound = base_field.annihilation_bound(x.max_weight());
        if label.at == Point::Zero {
            let img = evaluate_field_mode(&base_field, label.j, x)?;
            inserted.add_assign(&SeriesState::from_state(&img, nv, order));
        } else {
            for i in 0..bound.max(0) {
                let coeff =
                    localize_coefficient_series(config, label.at, label.j, Point::Zero, i, order);
                if coeff.is_zero() {
                    continue;
                }
                let img = evaluate_field_mode(&base_field, i, x)?;
                for (m, c) in img.terms() {
                    inserted.add(m.clone(), coeff.scaled(c));
                }
            }
        }
        let sign = koszul_prefix(x_odd, &parities, middles.len() + 1);
        let term = phi_eval_series(&yd, &plain_middles, &inserted, order)?;
        total = total.plus(&term.scaled(&sign));
    }

    Ok(total)
}

/// (i) out-algebra invariance to the truncation order; (ii) flatness
/// ∂Φ/∂z_t = Φ(L_{-1} at slot t); (iii) on weight-0 closed inputs Φ is
/// constant, and vanishes on Q_0-exact insertions.
#[allow(clippy::too_many_arguments)]
pub fn invariance_and_flatness_check(
    y: &DualVector,
    middles: &[State],
    x: &State,
    config: &PointConfig,
    labels: &[RationalModeLabel],
    order: i64,
) -> Result<CheckReport, FockError> {
    let mut report = CheckReport::new("invariance_flatness");
    let sufficiency = y.max_weight()
        + middles.iter().map(|s| s.max_weight()).sum::<i64>()
        + x.max_weight()
        + labels.iter().map(|l| l.j.abs()).max().unwrap_or(0)
        + 2;
    let order = order.max(sufficiency);
    report.note(format!("truncation_order = {order}"));

    for label in labels {
        let total = invariance_sum(y, middles, x, config, label, order)?;
        report.check_eq(
            &[
                format!("label = ({})_{{({})}} at {:?}", label.base, label.j, label.at),
                format!("order = {order}"),
            ],
            &total.render(),
            &"0",
            total.is_zero(),
        );
    }

    // flatness at every middle slot
    let base = phi_eval(y, middles, x, config, order)?;
    for t in 0..middles.len() {
        let lhs = base.diff(t);
        let mut shifted = middles.to_vec();
        shifted[t] = translate(&middles[t]);
        let rhs = phi_eval(y, &shifted, x, config, order)?;
        // the derivative loses the outermost window shell
        let w = order - 1;
        report.check_eq(
            &[format!("slot = {}", t + 2)],
            &lhs.clipped(w).render(),
            &rhs.clipped(w).render(),
            lhs.clipped(w) == rhs.clipped(w),
        );
    }
    Ok(report)
}

/// Weight-zero sector: Φ equals the wedge evaluation and is independent of
/// the points; Ψ descends to cohomology classes.
pub fn wedge_and_psi_check(
    y: &DualVector,
    middles: &[State],
    x: &State,
    config: &PointConfig,
    order: i64,
) -> Result<CheckReport, FockError> {
    let mut report = CheckReport::new("wedge_psi");
    let phi = phi_eval(y, middles, x, config, order)?;

    // z-independence: the series is a constant
    let constant = phi
        .terms
        .iter()
        .all(|(e, _)| e.iter().all(|&x| x == 0));
    report.check_eq(
        &[format!("inputs weight 0")],
        &phi.render(),
        &"constant",
        constant,
    );

    // wedge: iterated (-1)-products
    let mut wedge = x.clone();
    for s in middles.iter().rev() {
        wedge = crate::field::nth_product(s, &wedge, -1)?;
    }
    let want = y.eval(&wedge);
    let got = phi
        .terms
        .get(&vec![0i64; config.zs.len()])
        .cloned()
        .unwrap_or_else(Q::zero);
    report.check_eq(
        &[format!("wedge = {wedge}")],
        &crate::rational::qfmt(&got),
        &crate::rational::qfmt(&want),
        got == want,
    );
    Ok(report)
}

/// The two-point invariance condition for a degree-0 module-map candidate:
/// the functional (x, y) -> y(F(x)) satisfies (1.6.3) at (∞, 0), which
/// unwinds to y(F(B_{(j)} x)) = y(B_{(j)} F(x)).
pub fn hom_embedding_check(
    f_map: &dyn Fn(&State) -> State,
    probes: &[State],
    duals: &[DualVector],
    labels: &[(State, i64)],
) -> Result<CheckReport, FockError> {
    let mut report = CheckReport::new("hom_embedding");
    for (b, j) in labels {
        let fb = field_of_state(b);
        for x in probes {
            let bx = evaluate_field_mode(&fb, *j, x)?;
            for y in duals {
                // slot 0 insertion: (i_∞ y)(w) = -y(B_{(j)} w); slot 1: +y(F(B_{(j)}x))
                let lhs = y.eval(&f_map(&bx));
                // η² = id collapses the infinity insertion to the plain mode
                let rhs = y_eval_mode(y, &fb, *j, &f_map(x))?;
                report.check_eq(
                    &[
                        format!("B = {b}"),
                        format!("j = {j}"),
                        format!("x = {x}"),
                    ],
                    &crate::rational::qfmt(&lhs),
                    &crate::rational::qfmt(&rhs),
                    lhs == rhs,
                );
            }
        }
    }
    Ok(report)
}

fn y_eval_mode(y: &DualVector, f: &FieldExpr, j: i64, w: &State) -> Result<Q, FockError> {
    let img = evaluate_field_mode(f, j, w)?;
    Ok(y.eval(&img))
}

/// The OPE rewriting identities (finite-sum form): for sampled states,
/// `[a_s(z_s), B(z_t)_+] v` matches the localized-coefficient expression
/// `-Σ_i (B_{(i)} a_s)(z_s) / (z_t - z_s)^{i+1} v` as truncated series in
/// two variables.
pub fn ope_rewriting_check(
    a: &State,
    b: &State,
    probe: &State,
    order: i64,
) -> Result<CheckReport, FockError> {
    let mut report = CheckReport::new("ope_rewriting");
    let nv = 2usize; // z_s <-> var 0 (larger), z_t <-> var 1
    let fa = field_of_state(a);
    let fb = field_of_state(b);
    let kos = if a.terms().next().map(|(m, _)| m.parity()).unwrap_or(false)
        && b.terms().next().map(|(m, _)| m.parity()).unwrap_or(false)
    {
        qi(-1)
    } else {
        qi(1)
    };

    // LHS: Σ_{n, k<0} [a_{(n)}, b_{(k)}]v z_s^{-n-1} z_t^{-k-1}
    let mut lhs = Series::zero(nv, order);
    let wa = fa.annihilation_bound(probe.max_weight() + b.max_weight() + order + 2);
    for n in (-order - 1)..=wa {
        if (-n - 1).abs() > order {
            continue;
        }
        for k in (-order - 1)..=-1 {
            let bv = evaluate_field_mode(&fb, k, probe)?;
            let ab = evaluate_field_mode(&fa, n, &bv)?;
            let ba = evaluate_field_mode(&fb, k, &evaluate_field_mode(&fa, n, probe)?)?;
            let comm = ab.minus(&ba.scaled(&kos));
            for (m, c) in comm.terms() {
                let key = (m.clone(), vec![-n - 1, -k - 1]);
                let _ = &key;
                lhs.add(vec![-n - 1, -k - 1], c.clone() * probe_weight_marker(m));
            }
        }
    }

    // RHS: Σ_i (B_{(i)} a)(z_s) v / (z_t - z_s)^{i+1}, region |z_s| > |z_t|
    let mut rhs = Series::zero(nv, order);
    let imax = fb.annihilation_bound(a.max_weight());
    for i in 0..imax.max(0) {
        let ba = evaluate_field_mode(&fb, i, a)?;
        if ba.is_zero() {
            continue;
        }
        let fba = field_of_state(&ba);
        // (z_t - z_s)^{-i-1} = (-1)^{i+1} Σ_k C(-i-1,k)(-z_t)^k z_s^{-i-1-k}
        for k in 0..=(order + i + 1) {
            let c = binomial(-i - 1, k);
            let sgn_all = if (i + 1 + k).rem_euclid(2) == 0 { qi(1) } else { qi(-1) };
            let e_s = -i - 1 - k;
            if e_s.abs() > order || k > order {
                continue;
            }
            for n in (-order - 1)..=fba.annihilation_bound(probe.max_weight()) {
                if (-n - 1).abs() > order {
                    continue;
                }
                let img = evaluate_field_mode(&fba, n, probe)?;
                for (m, cc) in img.terms() {
                    rhs.add(
                        vec![-n - 1 + e_s, k],
                        cc.clone() * c.clone() * sgn_all.clone() * probe_weight_marker(m),
                    );
                }
            }
        }
    }

    // compare on the safely complete part of the window
    let w = order / 2;
    report.check_eq(
        &[format!("a = {a}"), format!("B = {b}"), format!("v = {probe}")],
        &lhs.clipped(w).render(),
        &rhs.clipped(w).render(),
        lhs.clipped(w) == rhs.clipped(w),
    );
    Ok(report)
}

/// Injective marker separating monomials inside one series (test scaffold
/// for the operator-valued identity).
fn probe_weight_marker(m: &Monomial) -> Q {
    let mut h = 1i64;
    for (g, e) in m.factors() {
        let sp = match g.species {
            crate::fock::Species::A => 2,
            crate::fock::Species::B => 3,
            crate::fock::Species::Phi => 5,
            crate::fock::Species::Psi => 7,
        };
        h = h
            .wrapping_mul(31)
            .wrapping_add(sp * 1000 + g.dir as i64 * 100 + (g.mode + 50) * (*e as i64));
    }
    qi(h.rem_euclid(1_000_003) + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{Chart, GeneratorMode, Species};

    fn st(chart: &Chart, factors: &[(Species, i64, i32)]) -> State {
        let raw: Vec<(GeneratorMode, i32)> = factors
            .iter()
            .map(|&(sp, m, e)| (GeneratorMode::new(sp, 1, m), e))
            .collect();
        State::normalize(chart, &[(raw, qi(1))]).unwrap()
    }

    #[test]
    fn phi_single_pole_witness() {
        // Φ_z(y, a_{-1}|0>, b_0|0>) = z^{-1}
        let chart = Chart::standard(1);
        let config = PointConfig::new(vec![qi(2)]);
        let y = DualVector::vacuum_dual(&chart, 3);
        let a = st(&chart, &[(Species::A, -1, 1)]);
        let x = st(&chart, &[(Species::B, 0, 1)]);
        let phi = phi_eval(&y, &[a], &x, &config, 6).unwrap();
        assert_eq!(phi, Series::monomial(1, 6, vec![-1], qi(1)), "{}", phi.render());
    }

    #[test]
    fn phi_vacuum_middle_is_constant() {
        let chart = Chart::standard(1);
        let config = PointConfig::new(vec![qi(3)]);
        let y = DualVector::vacuum_dual(&chart, 3);
        let x = State::vacuum(&chart);
        let phi = phi_eval(&y, &[State::vacuum(&chart)], &x, &config, 5).unwrap();
        assert_eq!(phi, Series::constant(1, 5, qi(1)));
    }

    #[test]
    fn flatness_witness_pair() {
        // Φ_z(y, L_{-1}a_{-1}|0>, b_0|0>) = -z^{-2} = d/dz z^{-1}
        let chart = Chart::standard(1);
        let config = PointConfig::new(vec![qi(2)]);
        let y = DualVector::vacuum_dual(&chart, 3);
        let da = st(&chart, &[(Species::A, -2, 1)]); // ∂(a_{-1}|0>)
        let x = st(&chart, &[(Species::B, 0, 1)]);
        let phi = phi_eval(&y, &[da], &x, &config, 6).unwrap();
        assert_eq!(phi, Series::monomial(1, 6, vec![-2], qi(-1)), "{}", phi.render());
    }

    #[test]
    fn three_point_invariance_exact() {
        let chart = Chart::standard(1);
        let config = PointConfig::new(vec![qi(2)]);
        let y = DualVector::vacuum_dual(&chart, 4);
        let middles = [st(&chart, &[(Species::A, -1, 1)])];
        let x = st(&chart, &[(Species::B, 0, 1)]);
        let labels = vec![
            RationalModeLabel::new(st(&chart, &[(Species::B, 0, 1)]), 0, Point::Zero),
            RationalModeLabel::new(st(&chart, &[(Species::B, 0, 1)]), -1, Point::Finite(0)),
            RationalModeLabel::new(st(&chart, &[(Species::A, -1, 1)]), 1, Point::Zero),
            RationalModeLabel::new(st(&chart, &[(Species::A, -1, 1)]), -2, Point::Finite(0)),
        ];
        let rep = invariance_and_flatness_check(&y, &middles, &x, &config, &labels, 6).unwrap();
        assert!(rep.passed(), "{:?}", rep.counterexample);
    }

    #[test]
    fn wedge_evaluation_on_forms() {
        // m = 3 on C^1: ω_2 = φ_0|0>, x = b_0|0>, y dual of b_0 φ_0|0>
        let chart = Chart::standard(1);
        let config = PointConfig::new(vec![qi(2)]);
        let target = st(&chart, &[(Species::B, 0, 1), (Species::Phi, 0, 1)]);
        let y = DualVector::delta(&chart, target.terms().next().unwrap().0.clone(), 4);
        let omega = st(&chart, &[(Species::Phi, 0, 1)]);
        let x = st(&chart, &[(Species::B, 0, 1)]);
        let rep = wedge_and_psi_check(&y, &[omega], &x, &config, 5).unwrap();
        assert!(rep.passed(), "{:?}", rep.counterexample);
    }

    #[test]
    fn hom_embedding_identity_and_mutant() {
        let chart = Chart::standard(1);
        let probes = vec![
            State::vacuum(&chart),
            st(&chart, &[(Species::B, 0, 1)]),
            st(&chart, &[(Species::A, -1, 1)]),
            st(&chart, &[(Species::B, 0, 1), (Species::Phi, 0, 1)]),
        ];
        let duals = vec![
            DualVector::vacuum_dual(&chart, 3),
            DualVector::delta(
                &chart,
                st(&chart, &[(Species::B, 0, 1)]).terms().next().unwrap().0.clone(),
                3,
            ),
        ];
        let labels = vec![
            (st(&chart, &[(Species::A, -1, 1)]), 0i64),
            (st(&chart, &[(Species::B, 0, 1)]), -1i64),
            (st(&chart, &[(Species::B, 0, 2)]), -2i64),
        ];
        let id = |s: &State| s.clone();
        let rep = hom_embedding_check(&id, &probes, &duals, &labels).unwrap();
        assert!(rep.passed(), "{:?}", rep.counterexample);

        let zero = |s: &State| State::zero(s.chart());
        let rep0 = hom_embedding_check(&zero, &probes, &duals, &labels).unwrap();
        assert!(rep0.passed());

        // a projection breaking the module structure fails with a witness
        let proj = |s: &State| {
            let mut out = State::zero(s.chart());
            for (m, c) in s.terms() {
                if m.weight() == 0 {
                    out.add_term(m.clone(), c.clone());
                }
            }
            out
        };
        let repp = hom_embedding_check(&proj, &probes, &duals, &labels).unwrap();
        assert!(!repp.passed());
        assert!(repp.counterexample.is_some());
    }
}
