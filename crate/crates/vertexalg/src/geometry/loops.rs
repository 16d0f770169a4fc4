//! The chiral lift of polynomial vector fields,
//!
//! ```text
//! τ = f^i(b) ∂_i   ↦   τ(z) = :a^i(z) f^i(b(z)): + :(∂f^j/∂b^s)(b(z)) φ^s(z) ψ^j(z):
//! ```
//!
//! the induced affine sl_{N+1} action on the big cell of CP^N, and the odd
//! vertex operators attached to the adjoint representation.

use crate::fock::{Chart, FockError, Species, State};
use crate::field::{evaluate_field_mode, FieldExpr};
use crate::poly::LaurentPoly;
use crate::rational::{qi, Q};
use crate::report::CheckReport;

/// A polynomial vector field Σ f^i ∂_i on the chart.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub components: Vec<LaurentPoly>,
}

impl VectorField {
    pub fn new(components: Vec<LaurentPoly>) -> Self {
        assert!(!components.is_empty());
        VectorField { components }
    }

    pub fn dims(&self) -> usize {
        self.components.len()
    }

    /// ∂_i as a vector field.
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut components = vec![LaurentPoly::zero(n); n];
        components[i] = LaurentPoly::one(n);
        VectorField { components }
    }

    pub fn zero(n: usize) -> Self {
        VectorField { components: vec![LaurentPoly::zero(n); n] }
    }

    pub fn plus(&self, other: &VectorField) -> VectorField {
        VectorField {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.plus(b))
                .collect(),
        }
    }

    pub fn scaled(&self, c: &Q) -> VectorField {
        VectorField { components: self.components.iter().map(|p| p.scaled(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|p| p.is_zero())
    }

    /// Action on a function.
    pub fn apply(&self, f: &LaurentPoly) -> LaurentPoly {
        let n = self.dims();
        let mut out = LaurentPoly::zero(n);
        for (i, fi) in self.components.iter().enumerate() {
            out = out.plus(&fi.times(&f.diff(i)));
        }
        out
    }

    /// Classical Lie bracket [τ, ξ]; this is the oracle the chiral lift is
    /// checked against.
    pub fn bracket(&self, other: &VectorField) -> VectorField {
        let n = self.dims();
        let mut components = Vec::with_capacity(n);
        for j in 0..n {
            components.push(self.apply(&other.components[j]).minus(&other.apply(&self.components[j])));
        }
        VectorField { components }
    }
}

/// The field τ(z) of a vector field, homogeneous of weight one.
pub fn pi_hat_field(tau: &VectorField) -> FieldExpr {
    let n = tau.dims();
    let mut terms = Vec::new();
    for (i, fi) in tau.components.iter().enumerate() {
        if fi.is_zero() {
            continue;
        }
        terms.push((
            qi(1),
            FieldExpr::gen(Species::A, i as u8 + 1).normal(FieldExpr::ZeroModeFn(fi.clone())),
        ));
    }
    for (j, fj) in tau.components.iter().enumerate() {
        for s in 0..n {
            let d = fj.diff(s);
            if d.is_zero() {
                continue;
            }
            terms.push((
                qi(1),
                FieldExpr::ZeroModeFn(d).normal(
                    FieldExpr::gen(Species::Phi, s as u8 + 1)
                        .normal(FieldExpr::gen(Species::Psi, j as u8 + 1)),
                ),
            ));
        }
    }
    FieldExpr::sum(terms)
}

/// Apply the loop mode τ_n = τ(z)_n (weight-one physics index).
pub fn pi_hat_mode(tau: &VectorField, n: i64, v: &State) -> Result<State, FockError> {
    evaluate_field_mode(&pi_hat_field(tau), n, v)
}

/// [π̂(τ_m), π̂(ξ_n)] = π̂([τ,ξ]_{m+n}) exactly on all basis states up to the
/// weight bound, against the classical bracket.
pub fn check_loop_hom(
    tau: &VectorField,
    xi: &VectorField,
    m: i64,
    n: i64,
    chart: &Chart,
    states: &[State],
) -> Result<CheckReport, FockError> {
    let mut report = CheckReport::new("loop_hom");
    let ft = pi_hat_field(tau);
    let fx = pi_hat_field(xi);
    let fb = pi_hat_field(&tau.bracket(xi));
    let _ = chart;
    for v in states {
        let lhs = evaluate_field_mode(&ft, m, &evaluate_field_mode(&fx, n, v)?)?
            .minus(&evaluate_field_mode(&fx, n, &evaluate_field_mode(&ft, m, v)?)?);
        let rhs = evaluate_field_mode(&fb, m + n, v)?;
        report.check_eq(
            &[format!("tau = {tau:?}"), format!("xi = {xi:?}"), format!("(m,n)=({m},{n})"), format!("v = {v}")],
            &lhs,
            &rhs,
            lhs == rhs,
        );
    }
    Ok(report)
}

/// ρ(E_pq) as a vector field on the big cell of CP^N, indices 1..=N+1.
pub fn sl_vector_field(n: u8, p: usize, q: usize) -> VectorField {
    let nv = n as usize;
    assert!((1..=nv + 1).contains(&p) && (1..=nv + 1).contains(&q));
    match (p == 1, q == 1) {
        // E_11: -Σ_k b^k ∂_k
        (true, true) => {
            let mut vf = VectorField::zero(nv);
            for k in 0..nv {
                vf.components[k] = LaurentPoly::var(nv, k).scaled(&qi(-1));
            }
            vf
        }
        // E_1q = ∂_{q-1}
        (true, false) => VectorField::coordinate(nv, q - 2),
        // E_p1 = -b^{p-1} Σ_l b^l ∂_l
        (false, true) => {
            let bp = LaurentPoly::var(nv, p - 2);
            let mut vf = VectorField::zero(nv);
            for l in 0..nv {
                vf.components[l] = bp.times(&LaurentPoly::var(nv, l)).scaled(&qi(-1));
            }
            vf
        }
        // E_pq = b^{p-1} ∂_{q-1}
        (false, false) => {
            let mut vf = VectorField::zero(nv);
            vf.components[q - 2] = LaurentPoly::var(nv, p - 2);
            vf
        }
    }
}

/// The loop-mode field of E_pq through the chiral lift.
pub fn sl_action_field(n: u8, p: usize, q: usize) -> FieldExpr {
    pi_hat_field(&sl_vector_field(n, p, q))
}

/// The odd vertex operators e_pq(z) attached to the adjoint representation.
pub fn vertex_operator_eij(n: u8, p: usize, q: usize) -> FieldExpr {
    let nv = n as usize;
    assert!((1..=nv + 1).contains(&p) && (1..=nv + 1).contains(&q));
    match (p == 1, q == 1) {
        (true, true) => {
            // diagonal partner of E_11: -Σ_l b^l ψ^l
            let terms = (0..nv)
                .map(|l| {
                    (
                        qi(-1),
                        FieldExpr::ZeroModeFn(LaurentPoly::var(nv, l))
                            .normal(FieldExpr::gen(Species::Psi, l as u8 + 1)),
                    )
                })
                .collect();
            FieldExpr::sum(terms)
        }
        (true, false) => FieldExpr::gen(Species::Psi, q as u8 - 1),
        (false, true) => {
            let bp = LaurentPoly::var(nv, p - 2);
            let terms = (0..nv)
                .map(|l| {
                    (
                        qi(-1),
                        FieldExpr::ZeroModeFn(bp.times(&LaurentPoly::var(nv, l)))
                            .normal(FieldExpr::gen(Species::Psi, l as u8 + 1)),
                    )
                })
                .collect();
            FieldExpr::sum(terms)
        }
        (false, false) => FieldExpr::ZeroModeFn(LaurentPoly::var(nv, p - 2))
            .normal(FieldExpr::gen(Species::Psi, q as u8 - 1)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{monomials_up_to_weight, AlgebraKind};
    use crate::fock::GeneratorMode;

    fn st(chart: &Chart, factors: &[(Species, u8, i64, i32)]) -> State {
        let raw: Vec<(GeneratorMode, i32)> = factors
            .iter()
            .map(|&(sp, d, m, e)| (GeneratorMode::new(sp, d, m), e))
            .collect();
        State::normalize(chart, &[(raw, qi(1))]).unwrap()
    }

    fn basis_states(chart: &Chart, w: i64, deg: i64) -> Vec<State> {
        monomials_up_to_weight(chart, AlgebraKind::Super, w, deg)
            .into_iter()
            .map(|m| State::monomial(chart, m, qi(1)))
            .collect()
    }

    #[test]
    fn constant_field_is_a_mode() {
        let chart = Chart::standard(1);
        let tau = VectorField::coordinate(1, 0);
        let v = st(&chart, &[(Species::B, 1, 0, 1)]);
        // τ = ∂: mode 0 differentiates the zero mode
        assert_eq!(pi_hat_mode(&tau, 0, &v).unwrap(), State::vacuum(&chart));
    }

    #[test]
    fn euler_field_fixes_degree() {
        let chart = Chart::standard(1);
        let tau = VectorField::new(vec![LaurentPoly::var(1, 0)]); // b∂
        let v = st(&chart, &[(Species::B, 1, 0, 1)]);
        assert_eq!(pi_hat_mode(&tau, 0, &v).unwrap(), v);
    }

    #[test]
    fn classical_bracket_oracle() {
        // [b∂, ∂] = -∂ by hand
        let b_d = VectorField::new(vec![LaurentPoly::var(1, 0)]);
        let d = VectorField::coordinate(1, 0);
        assert_eq!(b_d.bracket(&d), d.scaled(&qi(-1)));
    }

    #[test]
    fn loop_hom_on_line() {
        let chart = Chart::standard(1);
        let states = basis_states(&chart, 2, 2);
        let b_d = VectorField::new(vec![LaurentPoly::var(1, 0)]);
        let d = VectorField::coordinate(1, 0);
        let b2_d = VectorField::new(vec![LaurentPoly::var(1, 0).pow(2)]);
        for (t, x) in [(&b_d, &d), (&b2_d, &d), (&b2_d, &b_d)] {
            for m in -2..=2 {
                for n in -2..=2 {
                    let r = check_loop_hom(t, x, m, n, &chart, &states).unwrap();
                    assert!(r.passed(), "(m,n)=({m},{n}): {:?}", r.counterexample);
                }
            }
        }
    }

    #[test]
    fn loop_hom_cross_terms_in_plane() {
        // τ = b^1 ∂_2, ξ = b^2 ∂_1: exercises the φψ correction terms
        let chart = Chart::standard(2);
        let states = basis_states(&chart, 2, 1);
        let mut tau = VectorField::zero(2);
        tau.components[1] = LaurentPoly::var(2, 0);
        let mut xi = VectorField::zero(2);
        xi.components[0] = LaurentPoly::var(2, 1);
        for m in -1..=1 {
            for n in -1..=1 {
                let r = check_loop_hom(&tau, &xi, m, n, &chart, &states).unwrap();
                assert!(r.passed(), "(m,n)=({m},{n}): {:?}", r.counterexample);
            }
        }
    }

    #[test]
    fn sl2_realization_matches_paper() {
        // E_21 on the cell: -:b^2 a: - 2:b φψ:, whose state is
        // -a_{-1}b_0^2|0> - 2 b_0 φ_0 ψ_{-1}|0>
        let chart = Chart::standard(1);
        let f = sl_action_field(1, 2, 1);
        let state = evaluate_field_mode(&f, -1, &State::vacuum(&chart)).unwrap();
        let want = st(&chart, &[(Species::A, 1, -1, 1), (Species::B, 1, 0, 2)])
            .scaled(&qi(-1))
            .plus(
                &st(
                    &chart,
                    &[(Species::B, 1, 0, 1), (Species::Phi, 1, 0, 1), (Species::Psi, 1, -1, 1)],
                )
                .scaled(&qi(-2)),
            );
        assert_eq!(state, want);

        // E_12 is the a-field
        let f12 = sl_action_field(1, 1, 2);
        let s12 = evaluate_field_mode(&f12, -1, &State::vacuum(&chart)).unwrap();
        assert_eq!(s12, st(&chart, &[(Species::A, 1, -1, 1)]));
    }

    #[test]
    fn sl2_level_zero() {
        // [E_12 ⊗ t, E_21 ⊗ t^{-1}] - (E_11 - E_22) ⊗ t^0 annihilates states
        let chart = Chart::standard(1);
        let states = basis_states(&chart, 2, 2);
        let e = sl_vector_field(1, 1, 2);
        let f = sl_vector_field(1, 2, 1);
        let h = sl_vector_field(1, 1, 1).plus(&sl_vector_field(1, 2, 2).scaled(&qi(-1)));
        assert_eq!(e.bracket(&f), h);
        for v in &states {
            let lhs = pi_hat_mode(&e, 1, &pi_hat_mode(&f, -1, v).unwrap())
                .unwrap()
                .minus(&pi_hat_mode(&f, -1, &pi_hat_mode(&e, 1, v).unwrap()).unwrap());
            let rhs = pi_hat_mode(&h, 0, v).unwrap();
            assert_eq!(lhs, rhs, "v = {v}");
        }
    }

    #[test]
    fn e12_vertex_operator_is_psi() {
        let f = vertex_operator_eij(1, 1, 2);
        assert_eq!(f, FieldExpr::gen(Species::Psi, 1));
    }

    #[test]
    fn vertex_operators_transform_in_adjoint() {
        // [π̂ρ(E_pq)_m, e_ij(z)_n] = δ_{qi} e_pj - δ_{jp} e_iq at mode m+n
        let chart = Chart::standard(1);
        let states = basis_states(&chart, 1, 2);
        for (p, q) in [(1, 2), (2, 1), (1, 1), (2, 2)] {
            let act = sl_action_field(1, p, q);
            for (i, j) in [(1, 2), (2, 1), (1, 1), (2, 2)] {
                let e_ij = vertex_operator_eij(1, i, j);
                for m in -1..=1i64 {
                    for n in -1..=1i64 {
                        for v in &states {
                            let lhs = evaluate_field_mode(&act, m, &evaluate_field_mode(&e_ij, n, v).unwrap())
                                .unwrap()
                                .minus(
                                    &evaluate_field_mode(&e_ij, n, &evaluate_field_mode(&act, m, v).unwrap())
                                        .unwrap(),
                                );
                            let mut rhs = State::zero(&chart);
                            if q == i {
                                let t = evaluate_field_mode(&vertex_operator_eij(1, p, j), m + n, v).unwrap();
                                rhs.add_assign(&t).unwrap();
                            }
                            if j == p {
                                let t = evaluate_field_mode(&vertex_operator_eij(1, i, q), m + n, v).unwrap();
                                rhs.add_assign(&t.scaled(&qi(-1))).unwrap();
                            }
                            assert_eq!(lhs, rhs, "E_{p}{q}, e_{i}{j}, (m,n)=({m},{n}), v={v}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ee_anticommutators_vanish() {
        let chart = Chart::standard(1);
        let states = basis_states(&chart, 1, 2);
        for (i, j) in [(1, 2), (2, 1), (2, 2)] {
            for (k, l) in [(1, 2), (2, 1), (2, 2)] {
                let e1 = vertex_operator_eij(1, i, j);
                let e2 = vertex_operator_eij(1, k, l);
                for m in -1..=1 {
                    for n in -1..=1 {
                        for v in &states {
                            let lhs = evaluate_field_mode(&e1, m, &evaluate_field_mode(&e2, n, v).unwrap())
                                .unwrap()
                                .plus(
                                    &evaluate_field_mode(&e2, n, &evaluate_field_mode(&e1, m, v).unwrap())
                                        .unwrap(),
                                );
                            assert!(lhs.is_zero(), "e_{i}{j}, e_{k}{l} on {v}");
                        }
                    }
                }
            }
        }
    }
}
