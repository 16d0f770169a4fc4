//! The duality functor on restricted modules: dual vectors are finitely
//! supported functional tables on graded pieces, with the module structure
//! `(b_{(n)} f)(x) = f(η(b_{(n)}) x)`.

use crate::basis::{monomials_of_weight, AlgebraKind};
use crate::fock::{Chart, FockError, Monomial, State};
use crate::field::{field_of_state, FieldExpr};
use crate::geometry::eta::eval_eta_mode;
use crate::rational::{is_zero, qi, Q};
use num::traits::Zero;
use std::collections::BTreeMap;

/// A functional on the Fock space supported on finitely many monomials,
/// with an explicit zero-mode degree bound for the infinite slices.
#[derive(Debug, Clone, PartialEq)]
pub struct DualVector {
    pub chart: Chart,
    pub table: BTreeMap<Monomial, Q>,
    pub degree_bound: i64,
}

impl DualVector {
    pub fn zero(chart: &Chart, degree_bound: i64) -> Self {
        DualVector { chart: chart.clone(), table: BTreeMap::new(), degree_bound }
    }

    /// The functional dual to one monomial.
    pub fn delta(chart: &Chart, m: Monomial, degree_bound: i64) -> Self {
        let mut d = Self::zero(chart, degree_bound);
        d.table.insert(m, qi(1));
        d
    }

    /// Dual of the vacuum: picks the coefficient of |0>.
    pub fn vacuum_dual(chart: &Chart, degree_bound: i64) -> Self {
        Self::delta(chart, Monomial::vacuum(), degree_bound)
    }

    pub fn eval(&self, v: &State) -> Q {
        let mut acc = Q::zero();
        for (m, c) in v.terms() {
            if let Some(t) = self.table.get(m) {
                acc += t.clone() * c.clone();
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    pub fn add_assign(&mut self, other: &DualVector, scale: &Q) {
        for (m, c) in &other.table {
            let entry = self.table.entry(m.clone()).or_insert_with(Q::zero);
            *entry += c.clone() * scale.clone();
        }
        self.table.retain(|_, c| !is_zero(c));
    }

    pub fn max_weight(&self) -> i64 {
        self.table.keys().map(|m| m.weight()).max().unwrap_or(0)
    }

    /// Parity of the support (asserted homogeneous).
    pub fn parity(&self) -> bool {
        self.table.keys().next().map(|m| m.parity()).unwrap_or(false)
    }
}

/// The module action of a field mode on a dual vector:
/// `(F_{(n)} f)(x) = f(η(F_{(n)}) x)`, materialized as a new table over the
/// weights and degrees that can reach the support of `f`.
pub fn dual_field_action(
    f: &DualVector,
    field: &FieldExpr,
    n: i64,
    kind: AlgebraKind,
) -> Result<DualVector, FockError> {
    // η(F_{(n)}) shifts weight by w -> w + k + 1 - Δ_c over components; the
    // support of the result is bounded by the reachable weights
    let mut out = DualVector::zero(&f.chart, f.degree_bound + field.max_delta() + n.abs() + 2);
    if f.is_zero() {
        return Ok(out);
    }
    let shift_lo = n + 1 - field.max_delta();
    let shift_hi = n + 1 - field.min_delta();
    let w_max = f.max_weight() - shift_lo;
    for w in 0..=w_max.max(0) {
        let reachable = (shift_lo..=shift_hi).any(|s| {
            let target = w + s;
            (0..=f.max_weight()).contains(&target)
        });
        if !reachable {
            continue;
        }
        for m in monomials_of_weight(&f.chart, kind, w, out.degree_bound) {
            let x = State::monomial(&f.chart, m.clone(), qi(1));
            let val = f.eval(&eval_eta_mode(field, n, &x)?);
            if !is_zero(&val) {
                out.table.insert(m, val);
            }
        }
    }
    Ok(out)
}

/// `(b_{(n)} f)(x) = f(η(b_{(n)}) x)` for a state b.
pub fn dual_action(
    f: &DualVector,
    b: &State,
    n: i64,
    kind: AlgebraKind,
) -> Result<DualVector, FockError> {
    dual_field_action(f, &field_of_state(b), n, kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{GeneratorMode, Species};
    use crate::rational::binomial;

    fn st(chart: &Chart, factors: &[(Species, i64, i32)]) -> State {
        let raw: Vec<(GeneratorMode, i32)> = factors
            .iter()
            .map(|&(sp, m, e)| (GeneratorMode::new(sp, 1, m), e))
            .collect();
        State::normalize(chart, &[(raw, qi(1))]).unwrap()
    }

    #[test]
    fn dual_pairing_example() {
        // f = dual of |0>, b the a-state, n = 0:
        // (b_{(0)} f)(b_0|0>) = f(η(a_0) b_0|0>) = -f(|0>) = -1
        let chart = Chart::standard(1);
        let f = DualVector::vacuum_dual(&chart, 3);
        let b = st(&chart, &[(Species::A, -1, 1)]);
        let bf = dual_action(&f, &b, 0, AlgebraKind::Super).unwrap();
        let x = st(&chart, &[(Species::B, 0, 1)]);
        assert_eq!(bf.eval(&x), qi(-1));
    }

    #[test]
    fn vacuum_acts_as_identity() {
        let chart = Chart::standard(1);
        let f = DualVector::delta(
            &chart,
            st(&chart, &[(Species::B, 0, 2)]).terms().next().unwrap().0.clone(),
            4,
        );
        let vf = dual_action(&f, &State::vacuum(&chart), -1, AlgebraKind::Super).unwrap();
        assert_eq!(vf.table, f.table);
    }

    #[test]
    fn dual_module_borcherds_spot_check() {
        // the Borcherds identity for the D(M) action on a sampled triple
        let chart = Chart::standard(1);
        let u = st(&chart, &[(Species::A, -1, 1)]);
        let v = st(&chart, &[(Species::B, 0, 1), (Species::Phi, 0, 1)]);
        let f = DualVector::delta(
            &chart,
            st(&chart, &[(Species::Psi, -1, 1)]).terms().next().unwrap().0.clone(),
            4,
        );
        let kind = AlgebraKind::Super;
        let (m, n, k) = (1i64, -1i64, 0i64);

        let fu = field_of_state(&u);
        let fv = field_of_state(&v);
        // LHS: Σ_j C(m,j) ((u_{(n+j)}v)_{(m+k-j)} f)
        let mut lhs = DualVector::zero(&chart, 8);
        for j in 0..=6i64 {
            let c = binomial(m, j);
            if is_zero(&c) {
                continue;
            }
            let uv = crate::field::evaluate_field_mode(&fu, n + j, &v).unwrap();
            if uv.is_zero() {
                continue;
            }
            let t = dual_action(&f, &uv, m + k - j, kind).unwrap();
            lhs.add_assign(&t, &c);
        }
        // RHS: Σ_j (-1)^j C(n,j) u_{(m+n-j)} (v_{(k+j)} f)
        //      - (-1)^{uv} Σ_j (-1)^{j+n} C(n,j) v_{(n+k-j)} (u_{(m+j)} f)
        let mut rhs = DualVector::zero(&chart, 8);
        for j in 0..=6i64 {
            let c = binomial(n, j);
            if is_zero(&c) {
                continue;
            }
            let sign = if j % 2 == 0 { qi(1) } else { qi(-1) };
            let vf = dual_field_action(&f, &fv, k + j, kind).unwrap();
            let t = dual_field_action(&vf, &fu, m + n - j, kind).unwrap();
            rhs.add_assign(&t, &(c * sign));
        }
        for j in 0..=6i64 {
            let c = binomial(n, j);
            if is_zero(&c) {
                continue;
            }
            let sign = if (j + n).rem_euclid(2) == 0 { qi(1) } else { qi(-1) };
            let uf = dual_field_action(&f, &fu, m + j, kind).unwrap();
            let t = dual_field_action(&uf, &fv, n + k - j, kind).unwrap();
            rhs.add_assign(&t, &(-c * sign));
        }

        // compare as functionals on a window
        let probe = crate::basis::monomials_up_to_weight(&chart, kind, 3, 4);
        for p in probe {
            let x = State::monomial(&chart, p, qi(1));
            assert_eq!(lhs.eval(&x), rhs.eval(&x), "x = {x}");
        }
    }
}
