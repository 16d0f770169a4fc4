//! The state-field correspondence: composite fields as syntax trees,
//! evaluated mode-by-mode against states.
//!
//! The math index is primary: `F_{(n)}` is the coefficient of `z^{-n-1}`.
//! The physics index of a homogeneous field of weight Δ is a derived view,
//! `F_m = F_{(m+Δ-1)}`. Composite-field modes are never materialized as
//! matrices; a mode is applied lazily to a target state and the split sums
//! terminate through the weight lower bound of the chart.

use crate::fock::{Chart, FockError, GeneratorMode, Monomial, Species, State};
use crate::poly::LaurentPoly;
use crate::rational::{factorial, qi, Q};
use num::traits::One;

/// Syntax tree of fields over a fixed chart family.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldExpr {
    /// The identity field `|0>(z) = Id`.
    Id,
    /// A generator field `a^i(z)`, `b^i(z)`, `φ^i(z)`, `ψ^i(z)`.
    Gen(Species, u8),
    /// z-derivative of a field.
    Deriv(Box<FieldExpr>),
    /// Normal-ordered product `:F G:`, right-nested in canonical use.
    Normal(Box<FieldExpr>, Box<FieldExpr>),
    /// A function of the b-fields, `g(b^1(z), ..., b^N(z))`; Laurent g only
    /// on localized charts.
    ZeroModeFn(LaurentPoly),
    /// Q-linear combination.
    Linear(Vec<(Q, FieldExpr)>),
}

impl FieldExpr {
    pub fn gen(species: Species, dir: u8) -> Self {
        FieldExpr::Gen(species, dir)
    }

    pub fn deriv(self) -> Self {
        FieldExpr::Deriv(Box::new(self))
    }

    pub fn deriv_n(self, k: u32) -> Self {
        let mut f = self;
        for _ in 0..k {
            f = f.deriv();
        }
        f
    }

    pub fn normal(self, g: FieldExpr) -> Self {
        FieldExpr::Normal(Box::new(self), Box::new(g))
    }

    pub fn scaled(self, c: Q) -> Self {
        FieldExpr::Linear(vec![(c, self)])
    }

    pub fn sum(terms: Vec<(Q, FieldExpr)>) -> Self {
        FieldExpr::Linear(terms)
    }

    /// Parity; `None` for a genuinely mixed linear combination.
    pub fn parity(&self) -> Option<bool> {
        match self {
            FieldExpr::Id | FieldExpr::ZeroModeFn(_) => Some(false),
            FieldExpr::Gen(sp, _) => Some(sp.is_odd()),
            FieldExpr::Deriv(f) => f.parity(),
            FieldExpr::Normal(f, g) => Some(f.parity()? ^ g.parity()?),
            FieldExpr::Linear(ts) => {
                let mut it = ts.iter().map(|(_, f)| f.parity());
                let first = it.next().unwrap_or(Some(false))?;
                for p in it {
                    if p? != first {
                        return None;
                    }
                }
                Some(first)
            }
        }
    }

    /// Conformal weight when homogeneous.
    pub fn delta(&self) -> Option<i64> {
        match self {
            FieldExpr::Id | FieldExpr::ZeroModeFn(_) => Some(0),
            FieldExpr::Gen(sp, _) => Some(sp.delta()),
            FieldExpr::Deriv(f) => Some(f.delta()? + 1),
            FieldExpr::Normal(f, g) => Some(f.delta()? + g.delta()?),
            FieldExpr::Linear(ts) => {
                let mut it = ts.iter().map(|(_, f)| f.delta());
                let first = it.next().unwrap_or(Some(0))?;
                for d in it {
                    if d? != first {
                        return None;
                    }
                }
                Some(first)
            }
        }
    }

    /// Upper bound on the weight the field can add to a state.
    pub fn max_delta(&self) -> i64 {
        match self {
            FieldExpr::Id | FieldExpr::ZeroModeFn(_) => 0,
            FieldExpr::Gen(sp, _) => sp.delta(),
            FieldExpr::Deriv(f) => f.max_delta() + 1,
            FieldExpr::Normal(f, g) => f.max_delta() + g.max_delta(),
            FieldExpr::Linear(ts) => ts.iter().map(|(_, f)| f.max_delta()).max().unwrap_or(0),
        }
    }

    /// Lower bound companion of `max_delta`.
    pub fn min_delta(&self) -> i64 {
        match self {
            FieldExpr::Id | FieldExpr::ZeroModeFn(_) => 0,
            FieldExpr::Gen(sp, _) => sp.delta(),
            FieldExpr::Deriv(f) => f.min_delta() + 1,
            FieldExpr::Normal(f, g) => f.min_delta() + g.min_delta(),
            FieldExpr::Linear(ts) => ts.iter().map(|(_, f)| f.min_delta()).min().unwrap_or(0),
        }
    }

    /// Annihilation bound: `F_{(n)} v = 0` for every `n >= bound` and every
    /// state of weight at most `w`. Each infinite mode sum in this crate
    /// terminates through this bound rather than a fixed cut.
    pub fn annihilation_bound(&self, w: i64) -> i64 {
        match self {
            FieldExpr::Id => 0,
            FieldExpr::Gen(sp, _) => sp.delta() + w,
            FieldExpr::ZeroModeFn(_) => w,
            FieldExpr::Deriv(f) => f.annihilation_bound(w) + 1,
            FieldExpr::Normal(f, g) => {
                let t1 = g.annihilation_bound(w);
                let t2 = g.annihilation_bound(w + f.max_delta().max(1) - 1)
                    + f.annihilation_bound(w).max(0);
                t1.max(t2)
            }
            FieldExpr::Linear(ts) => {
                ts.iter().map(|(_, f)| f.annihilation_bound(w)).max().unwrap_or(0)
            }
        }
    }

    /// Physics mode m as a math index, for a homogeneous field.
    pub fn math_index(&self, m: i64) -> i64 {
        let d = self.delta().expect("physics index needs a homogeneous field");
        m + d - 1
    }
}

/// Apply one generator mode (physics index) to a state. Total on valid
/// inputs: creation modes insert with the Koszul sign, annihilation modes
/// are walked through the monomial using
/// `[a^i_s, b^j_t] = δ_ij δ_{s,-t}` and its Clifford analogue, with `K = 1`.
pub fn apply_mode(g: GeneratorMode, v: &State) -> State {
    let chart = v.chart().clone();
    let mut out = State::zero(&chart);
    for (m, c) in v.terms() {
        if g.is_creation() {
            apply_creation(&chart, g, m, c, &mut out);
        } else {
            apply_annihilation(&chart, g, m, c, &mut out);
        }
    }
    out
}

fn apply_creation(chart: &Chart, g: GeneratorMode, m: &Monomial, c: &Q, out: &mut State) {
    let mut sign = 1i64;
    let mut pos = 0;
    for (f, _e) in m.factors() {
        if g < *f {
            break;
        }
        if *f == g {
            break;
        }
        if g.is_odd() && f.is_odd() {
            sign = -sign;
        }
        pos += 1;
    }
    let mut factors = m.factors().to_vec();
    if pos < factors.len() && factors[pos].0 == g {
        if g.is_odd() {
            return; // odd square vanishes
        }
        factors[pos].1 += 1;
        if factors[pos].1 == 0 {
            factors.remove(pos);
        }
    } else {
        factors.insert(pos, (g, 1));
    }
    let _ = chart;
    out.add_term(Monomial::from_sorted(factors), c.clone() * qi(sign));
}

fn apply_annihilation(chart: &Chart, g: GeneratorMode, m: &Monomial, c: &Q, out: &mut State) {
    let mut sign = 1i64;
    let factors = m.factors();
    for (i, (f, e)) in factors.iter().enumerate() {
        let contraction = g.contraction(*f);
        if contraction != 0 {
            let mut rest = factors.to_vec();
            rest[i].1 -= 1;
            if rest[i].1 == 0 {
                rest.remove(i);
            }
            let coeff = c.clone() * qi(sign * contraction * *e as i64);
            out.add_term(Monomial::from_sorted(rest), coeff);
        }
        if g.is_odd() && f.is_odd() {
            // odd factors here always carry exponent 1
            sign = -sign;
        }
        let _ = chart;
    }
    // g reaches the vacuum and annihilates it
}

/// Translation operator ∂, the derivation with `[∂, x_j] = -(j+Δ-1) x_{j-1}`
/// on every generator species.
pub fn translate(v: &State) -> State {
    let chart = v.chart().clone();
    let mut out = State::zero(&chart);
    for (m, c) in v.terms() {
        let factors = m.factors();
        for (i, (f, e)) in factors.iter().enumerate() {
            let coeff = -(f.mode + f.species.delta() - 1);
            if coeff == 0 {
                continue;
            }
            let mut raw = factors.to_vec();
            raw[i].1 -= 1;
            let lowered = GeneratorMode::new(f.species, f.dir, f.mode - 1);
            // insert adjacent to the original slot so no odd factor is crossed
            raw.insert(i + 1, (lowered, 1));
            if let Ok(Some((mono, sign))) = Monomial::normalize_factors(&chart, &raw) {
                out.add_term(mono, c.clone() * qi(coeff * *e as i64 * sign));
            }
        }
    }
    out
}

/// Divided power ∂^{(j)} = ∂^j / j!.
pub fn translate_divided(v: &State, j: i64) -> State {
    let mut out = v.clone();
    for _ in 0..j {
        out = translate(&out);
    }
    out.scaled(&factorial(j).recip())
}

/// Reconstruct the field of a state: a monomial `x^1_{(n_1)} ... x^k_{(n_k)}|0>`
/// maps to the right-nested normal product of the `∂^{(-n_i-1)} x^i(z)`,
/// extended linearly. Negative powers of a b-zero-mode become zero-mode
/// functions.
pub fn field_of_state(v: &State) -> FieldExpr {
    let nvars = v.chart().dims as usize;
    let mut terms: Vec<(Q, FieldExpr)> = Vec::new();
    for (m, c) in v.terms() {
        terms.push((c.clone(), field_of_monomial(nvars, m)));
    }
    match terms.len() {
        0 => FieldExpr::Linear(Vec::new()),
        1 if terms[0].0.is_one() => terms.pop().unwrap().1,
        _ => FieldExpr::Linear(terms),
    }
}

fn field_of_monomial(nvars: usize, m: &Monomial) -> FieldExpr {
    let mut parts: Vec<(Q, FieldExpr)> = Vec::new();
    for (g, e) in m.factors() {
        if g.species == Species::B && g.mode == 0 && *e < 0 {
            let f = LaurentPoly::var_pow(nvars, g.dir as usize - 1, *e);
            parts.push((Q::one(), FieldExpr::ZeroModeFn(f)));
            continue;
        }
        // math mode n = s + Δ - 1; the factor is ∂^{(-n-1)} of the generator
        let j = (-g.mode - g.species.delta()) as u32;
        let base = FieldExpr::gen(g.species, g.dir).deriv_n(j);
        let coeff = factorial(j as i64).recip();
        for _ in 0..*e {
            parts.push((coeff.clone(), base.clone()));
        }
    }
    let Some((c_last, f_last)) = parts.pop() else {
        return FieldExpr::Id;
    };
    let mut expr = f_last;
    let mut coeff = c_last;
    while let Some((c, f)) = parts.pop() {
        expr = f.normal(expr);
        coeff *= c;
    }
    if coeff.is_one() {
        expr
    } else {
        expr.scaled(coeff)
    }
}

/// Evaluate the math-indexed mode `F_{(n)}` on a state.
///
/// Normal products use the split sum
/// `:FG:_{(n)} = Σ_{k<=-1} F_{(k)} G_{(n-k-1)} + (-1)^{F̃G̃} Σ_{k>=0} G_{(n-k-1)} F_{(k)}`,
/// finite on each state because weights are bounded below.
pub fn evaluate_field_mode(f: &FieldExpr, n: i64, v: &State) -> Result<State, FockError> {
    let chart = v.chart().clone();
    if v.is_zero() {
        return Ok(State::zero(&chart));
    }
    match f {
        FieldExpr::Id => Ok(if n == -1 { v.clone() } else { State::zero(&chart) }),
        FieldExpr::Gen(sp, dir) => {
            let phys = n - sp.delta() + 1;
            Ok(apply_mode(GeneratorMode::new(*sp, *dir, phys), v))
        }
        FieldExpr::Deriv(inner) => {
            if n == 0 {
                return Ok(State::zero(&chart));
            }
            Ok(evaluate_field_mode(inner, n - 1, v)?.scaled(&qi(-n)))
        }
        FieldExpr::Normal(fa, fb) => {
            let w = v.max_weight();
            let sign = if fa.parity().expect("normal product of mixed-parity field")
                && fb.parity().expect("normal product of mixed-parity field")
            {
                qi(-1)
            } else {
                qi(1)
            };
            let mut acc = State::zero(&chart);
            // creation part of F first: k <= -1, G-mode n-k-1 below its bound
            let klo = n - fb.annihilation_bound(w);
            for k in klo..=-1 {
                let inner = evaluate_field_mode(fb, n - k - 1, v)?;
                if inner.is_zero() {
                    continue;
                }
                let outer = evaluate_field_mode(fa, k, &inner)?;
                acc.add_assign(&outer)?;
            }
            // annihilation part of F: k >= 0
            let khi = fa.annihilation_bound(w);
            for k in 0..khi {
                let inner = evaluate_field_mode(fa, k, v)?;
                if inner.is_zero() {
                    continue;
                }
                let outer = evaluate_field_mode(fb, n - k - 1, &inner)?;
                acc.add_assign(&outer.scaled(&sign))?;
            }
            Ok(acc)
        }
        FieldExpr::ZeroModeFn(g) => zero_mode_fn_eval(g, n, v),
        FieldExpr::Linear(ts) => {
            let mut acc = State::zero(&chart);
            for (c, sub) in ts {
                let part = evaluate_field_mode(sub, n, v)?;
                acc.add_assign(&part.scaled(c))?;
            }
            Ok(acc)
        }
    }
}

/// Modes of `g(b(z))`: the Taylor expansion of g around the zero modes,
/// `g(b(z)) = Σ_α (∂^α g)(b_0) Π (b(z)-b_0)^α / α!`. Each non-zero-mode
/// factor shifts weight, so the action on a fixed state truncates exactly.
fn zero_mode_fn_eval(g: &LaurentPoly, n: i64, v: &State) -> Result<State, FockError> {
    let chart = v.chart().clone();
    if g.has_negative_exponents() {
        for (e, _) in g.terms() {
            for (i, &ei) in e.iter().enumerate() {
                if ei < 0 && !chart.is_localized(i as u8 + 1) {
                    return Err(FockError::Divergent(chart.name.clone()));
                }
            }
        }
    }
    let mut out = State::zero(&chart);
    for (m, c) in v.terms() {
        let w = m.weight();
        let target = w - n - 1; // weight of any nonzero result
        if target < 0 {
            continue;
        }
        // candidate nonzero b-modes: annihilation budget w (each lowers
        // weight by its index), creation budget target
        let mut cands: Vec<(u8, i64)> = Vec::new();
        for dir in 1..=chart.dims {
            for s in 1..=w {
                cands.push((dir, s));
            }
            for s in 1..=target {
                cands.push((dir, -s));
            }
        }
        let mut picks: Vec<(u8, i64, u32)> = Vec::new();
        zmf_choose(g, &chart, m, c, &cands, 0, n + 1, w, target, &mut picks, &mut out)?;
    }
    Ok(out)
}

/// Choose a multiset of nonzero modes with index sum `need` and apply the
/// resulting Taylor term; budgets keep the enumeration finite.
#[allow(clippy::too_many_arguments)]
fn zmf_choose(
    g: &LaurentPoly,
    chart: &Chart,
    m: &Monomial,
    coeff: &Q,
    cands: &[(u8, i64)],
    idx: usize,
    need: i64,
    ann_budget: i64,
    cre_budget: i64,
    picks: &mut Vec<(u8, i64, u32)>,
    out: &mut State,
) -> Result<(), FockError> {
    if idx == cands.len() {
        if need == 0 {
            zmf_apply_term(g, chart, m, coeff, picks, out)?;
        }
        return Ok(());
    }
    let (dir, s) = cands[idx];
    let weight = s.abs();
    let budget = if s > 0 { ann_budget } else { cre_budget };
    let max_cnt = budget / weight;
    for cnt in 0..=max_cnt {
        let (na, nc) = if s > 0 {
            (ann_budget - weight * cnt, cre_budget)
        } else {
            (ann_budget, cre_budget - weight * cnt)
        };
        if cnt > 0 {
            picks.push((dir, s, cnt as u32));
        }
        zmf_choose(g, chart, m, coeff, cands, idx + 1, need - s * cnt, na, nc, picks, out)?;
        if cnt > 0 {
            picks.pop();
        }
    }
    Ok(())
}

fn zmf_apply_term(
    g: &LaurentPoly,
    chart: &Chart,
    m: &Monomial,
    coeff: &Q,
    picks: &[(u8, i64, u32)],
    out: &mut State,
) -> Result<(), FockError> {
    // α per variable; the multinomial collapse leaves Π 1/count!
    let mut alpha = vec![0u32; chart.dims as usize];
    let mut comb = Q::one();
    for &(d, _, cnt) in picks {
        alpha[d as usize - 1] += cnt;
        comb /= factorial(cnt as i64);
    }
    let dg = g.diff_multi(&alpha);
    if dg.is_zero() {
        return Ok(());
    }
    // multiply the zero-mode polynomial into the monomial, then apply the
    // chosen nonzero modes (all b's commute)
    let mut acc = State::zero(chart);
    for (e, pc) in dg.terms() {
        let mut raw = m.factors().to_vec();
        for (i, &ei) in e.iter().enumerate() {
            if ei != 0 {
                raw.push((GeneratorMode::new(Species::B, i as u8 + 1, 0), ei));
            }
        }
        if let Some((mono, sign)) = Monomial::normalize_factors(chart, &raw)? {
            acc.add_term(mono, coeff.clone() * pc.clone() * comb.clone() * qi(sign));
        }
    }
    for &(d, s, cnt) in picks {
        for _ in 0..cnt {
            acc = apply_mode(GeneratorMode::new(Species::B, d, s), &acc);
            if acc.is_zero() {
                return Ok(());
            }
        }
    }
    out.add_assign(&acc)
}

/// The n-th product `u_{(n)} v` through the reconstructed field of `u`.
pub fn nth_product(u: &State, v: &State, n: i64) -> Result<State, FockError> {
    evaluate_field_mode(&field_of_state(u), n, v)
}

/// All nonzero `u_{(j)} v` with `j >= 0`; finite by the grading bound.
pub fn ope_singular(u: &State, v: &State) -> Result<Vec<(i64, State)>, FockError> {
    let f = field_of_state(u);
    let hi = f.annihilation_bound(v.max_weight());
    let mut out = Vec::new();
    for j in 0..hi {
        let p = evaluate_field_mode(&f, j, v)?;
        if !p.is_zero() {
            out.push((j, p));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Bigrade;

    fn chart1() -> Chart {
        Chart::standard(1)
    }

    fn gm(sp: Species, mode: i64) -> GeneratorMode {
        GeneratorMode::new(sp, 1, mode)
    }

    fn st(chart: &Chart, factors: &[(Species, i64, i32)]) -> State {
        let raw: Vec<(GeneratorMode, i32)> =
            factors.iter().map(|&(sp, m, e)| (gm(sp, m), e)).collect();
        State::normalize(chart, &[(raw, qi(1))]).unwrap()
    }

    #[test]
    fn vacuum_annihilation() {
        let c = chart1();
        assert!(apply_mode(gm(Species::A, 0), &State::vacuum(&c)).is_zero());
        assert!(apply_mode(gm(Species::B, 1), &State::vacuum(&c)).is_zero());
        assert!(apply_mode(gm(Species::Psi, 0), &State::vacuum(&c)).is_zero());
        assert!(apply_mode(gm(Species::Phi, 1), &State::vacuum(&c)).is_zero());
    }

    #[test]
    fn heisenberg_pairing() {
        let c = chart1();
        let v = st(&c, &[(Species::B, -1, 1)]);
        assert_eq!(apply_mode(gm(Species::A, 1), &v), State::vacuum(&c));
    }

    #[test]
    fn laurent_derivative_action() {
        let c = Chart::localized("chart0*", 1, &[1]);
        let v = st(&c, &[(Species::B, 0, -2)]);
        let got = apply_mode(gm(Species::A, 0), &v);
        let want = st(&c, &[(Species::B, 0, -3)]).scaled(&qi(-2));
        assert_eq!(got, want);
    }

    #[test]
    fn translate_examples() {
        let c = chart1();
        assert!(translate(&State::vacuum(&c)).is_zero());
        assert_eq!(
            translate(&st(&c, &[(Species::B, 0, 1)])),
            st(&c, &[(Species::B, -1, 1)])
        );
        assert_eq!(
            translate(&st(&c, &[(Species::Phi, 0, 1)])),
            st(&c, &[(Species::Phi, -1, 1)])
        );
        assert_eq!(
            translate(&st(&c, &[(Species::A, -1, 1)])),
            st(&c, &[(Species::A, -2, 1)])
        );
    }

    #[test]
    fn nth_product_examples() {
        let c = chart1();
        let a = st(&c, &[(Species::A, -1, 1)]);
        let b = st(&c, &[(Species::B, 0, 1)]);
        assert_eq!(nth_product(&a, &b, 0).unwrap(), State::vacuum(&c));
        assert_eq!(
            nth_product(&b, &b, -1).unwrap(),
            st(&c, &[(Species::B, 0, 2)])
        );
        // u_{(-2)}|0> = ∂u
        let u = st(&c, &[(Species::B, 0, 1)]);
        assert_eq!(
            nth_product(&u, &State::vacuum(&c), -2).unwrap(),
            st(&c, &[(Species::B, -1, 1)])
        );
    }

    #[test]
    fn normal_product_mode_on_vacuum() {
        let c = chart1();
        let f = FieldExpr::gen(Species::B, 1).normal(FieldExpr::gen(Species::B, 1));
        let got = evaluate_field_mode(&f, -1, &State::vacuum(&c)).unwrap();
        assert_eq!(got, st(&c, &[(Species::B, 0, 2)]));
    }

    #[test]
    fn field_of_squared_zero_mode() {
        let c = chart1();
        let v = st(&c, &[(Species::B, 0, 2)]);
        let f = field_of_state(&v);
        // :b b: evaluated back at (-1) on vacuum returns the state
        let back = evaluate_field_mode(&f, -1, &State::vacuum(&c)).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn zero_mode_function_laurent() {
        let c = Chart::localized("chart0*", 1, &[1]);
        let f = FieldExpr::ZeroModeFn(LaurentPoly::var_pow(1, 0, -1));
        let got = evaluate_field_mode(&f, -1, &State::vacuum(&c)).unwrap();
        assert_eq!(got, st(&c, &[(Species::B, 0, -1)]));

        // divergent on a polynomial chart
        let bad = evaluate_field_mode(&f, -1, &State::vacuum(&chart1()));
        assert!(matches!(bad, Err(FockError::Divergent(_))));
    }

    #[test]
    fn zero_mode_function_matches_normal_product() {
        // g(b) = b^2 and b^3 as zero-mode functions equal iterated :bb:
        let c = chart1();
        let samples = vec![
            State::vacuum(&c),
            st(&c, &[(Species::A, -1, 1)]),
            st(&c, &[(Species::A, -1, 1), (Species::B, 0, 1)]),
            st(&c, &[(Species::A, -2, 1), (Species::B, -1, 1)]),
        ];
        for k in 2..=3u32 {
            let zmf = FieldExpr::ZeroModeFn(LaurentPoly::var(1, 0).pow(k));
            let mut np = FieldExpr::gen(Species::B, 1);
            for _ in 1..k {
                np = FieldExpr::gen(Species::B, 1).normal(np);
            }
            for v in &samples {
                for n in -4..3 {
                    assert_eq!(
                        evaluate_field_mode(&zmf, n, v).unwrap(),
                        evaluate_field_mode(&np, n, v).unwrap(),
                        "k={k} n={n} v={v}"
                    );
                }
            }
        }
    }

    #[test]
    fn ope_singular_heisenberg() {
        let c = chart1();
        let a = st(&c, &[(Species::A, -1, 1)]);
        let b = st(&c, &[(Species::B, 0, 1)]);
        let ope = ope_singular(&a, &b).unwrap();
        assert_eq!(ope.len(), 1);
        assert_eq!(ope[0].0, 0);
        assert_eq!(ope[0].1, State::vacuum(&c));

        assert!(ope_singular(&b, &b).unwrap().is_empty());
    }

    #[test]
    fn product_grading() {
        let c = chart1();
        let u = st(&c, &[(Species::A, -2, 1), (Species::B, 0, 1)]);
        let v = st(&c, &[(Species::B, -1, 1), (Species::Phi, 0, 1)]);
        let (du, dv) = (u.max_weight(), v.max_weight());
        for n in -4..4 {
            let p = nth_product(&u, &v, n).unwrap();
            if let Some(g) = p.is_homogeneous() {
                assert_eq!(g, Bigrade::new(du + dv - n - 1, 1));
            }
        }
    }

    #[test]
    fn generator_mode_agreement() {
        // evaluate_field_mode on Generator nodes equals apply_mode for
        // every mode in [-5, 5]
        let c = chart1();
        let v = st(&c, &[(Species::A, -1, 1), (Species::B, 0, 2), (Species::Phi, 0, 1)]);
        for sp in [Species::A, Species::B, Species::Phi, Species::Psi] {
            let f = FieldExpr::gen(sp, 1);
            for phys in -5..=5 {
                let math = phys + sp.delta() - 1;
                let lhs = evaluate_field_mode(&f, math, &v).unwrap();
                let rhs = apply_mode(gm(sp, phys), &v);
                assert_eq!(lhs, rhs, "{sp:?} mode {phys}");
            }
        }
    }

    #[test]
    fn iterated_translation() {
        // u_{(-1-j)}|0> = ∂^{(j)} u for j <= 4
        let c = chart1();
        let samples = vec![
            st(&c, &[(Species::B, 0, 1)]),
            st(&c, &[(Species::A, -1, 1)]),
            st(&c, &[(Species::Phi, 0, 1), (Species::B, 0, 1)]),
        ];
        for u in &samples {
            for j in 0..=4i64 {
                let lhs = nth_product(u, &State::vacuum(&c), -1 - j).unwrap();
                let rhs = translate_divided(u, j);
                assert_eq!(lhs, rhs, "j={j} u={u}");
            }
        }
    }

    #[test]
    fn commutativity_formula() {
        // u_{(n)}v = (-1)^{ũṽ} Σ_j (-1)^{j+n+1} ∂^{(j)}(v_{(n+j)}u)
        let c = chart1();
        let pairs = vec![
            (st(&c, &[(Species::B, 0, 1)]), st(&c, &[(Species::B, 0, 1)])),
            (st(&c, &[(Species::A, -1, 1)]), st(&c, &[(Species::B, 0, 1)])),
            (st(&c, &[(Species::Phi, 0, 1)]), st(&c, &[(Species::Phi, 0, 1)])),
            (
                st(&c, &[(Species::A, -1, 1), (Species::B, 0, 1)]),
                st(&c, &[(Species::Phi, 0, 1), (Species::Psi, -1, 1)]),
            ),
        ];
        for (u, v) in &pairs {
            let pu = u.terms().next().unwrap().0.parity();
            let pv = v.terms().next().unwrap().0.parity();
            let koszul = if pu && pv { qi(-1) } else { qi(1) };
            let fv = field_of_state(v);
            for n in -3..3 {
                let lhs = nth_product(u, v, n).unwrap();
                let mut rhs = State::zero(&c);
                let hi = fv.annihilation_bound(u.max_weight()) - n;
                for j in 0..=hi.max(0) {
                    let t = evaluate_field_mode(&fv, n + j, u).unwrap();
                    if t.is_zero() {
                        continue;
                    }
                    let s = if (j + n + 1).rem_euclid(2) == 0 { qi(1) } else { qi(-1) };
                    rhs.add_assign(&translate_divided(&t, j).scaled(&s)).unwrap();
                }
                assert_eq!(lhs, rhs.scaled(&koszul), "n={n} u={u} v={v}");
            }
        }
    }
}
