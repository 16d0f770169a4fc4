//! Executable verifiers for the vertex-algebra axioms, applied to concrete
//! states of the free-field algebras. Every identity is checked exactly;
//! infinite mode sums terminate through per-term annihilation bounds, never
//! a fixed cut.

use crate::basis::{monomials_up_to_weight, AlgebraKind};
use crate::fock::{Chart, FockError, State};
use crate::field::{
    evaluate_field_mode, field_of_state, nth_product, ope_singular, translate, translate_divided,
};
use crate::rational::{binomial, is_zero, qi};
use crate::report::CheckReport;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn state_parity(v: &State) -> bool {
    let mut ps = v.terms().map(|(m, _)| m.parity());
    let first = ps.next().unwrap_or(false);
    debug_assert!(v.terms().all(|(m, _)| m.parity() == first), "mixed parity state");
    first
}

fn koszul(u: &State, v: &State) -> i64 {
    if state_parity(u) && state_parity(v) {
        -1
    } else {
        1
    }
}

/// Both sides of the Borcherds identity applied to `w`, for one triple of
/// integer indices. The j-sums run until annihilation forces zero.
pub fn check_borcherds(
    u: &State,
    v: &State,
    w: &State,
    m: i64,
    n: i64,
    k: i64,
) -> Result<CheckReport, FockError> {
    let chart = u.chart().clone();
    let mut report = CheckReport::new("borcherds");
    let fu = field_of_state(u);
    let fv = field_of_state(v);

    // LHS: Σ_j C(m,j) (u_{(n+j)} v)_{(m+k-j)} w
    let mut lhs = State::zero(&chart);
    let jmax = (fu.annihilation_bound(v.max_weight()) - n).max(0);
    for j in 0..=jmax {
        let c = binomial(m, j);
        if is_zero(&c) {
            continue;
        }
        let uv = evaluate_field_mode(&fu, n + j, v)?;
        if uv.is_zero() {
            continue;
        }
        let t = nth_product(&uv, w, m + k - j)?;
        lhs.add_assign(&t.scaled(&c))?;
    }

    // RHS: Σ_j (-1)^j C(n,j) u_{(m+n-j)} v_{(k+j)} w
    //      - (-1)^{ũṽ} Σ_j (-1)^{j+n} C(n,j) v_{(n+k-j)} u_{(m+j)} w
    let mut rhs = State::zero(&chart);
    let j1max = (fv.annihilation_bound(w.max_weight()) - k).max(0);
    for j in 0..=j1max {
        let c = binomial(n, j);
        if is_zero(&c) {
            continue;
        }
        let vw = evaluate_field_mode(&fv, k + j, w)?;
        if vw.is_zero() {
            continue;
        }
        let sign = if j % 2 == 0 { qi(1) } else { qi(-1) };
        let t = evaluate_field_mode(&fu, m + n - j, &vw)?;
        rhs.add_assign(&t.scaled(&(c * sign)))?;
    }
    let kos = qi(koszul(u, v));
    let j2max = (fu.annihilation_bound(w.max_weight()) - m).max(0);
    for j in 0..=j2max {
        let c = binomial(n, j);
        if is_zero(&c) {
            continue;
        }
        let uw = evaluate_field_mode(&fu, m + j, w)?;
        if uw.is_zero() {
            continue;
        }
        let sign = if (j + n).rem_euclid(2) == 0 { qi(1) } else { qi(-1) };
        let t = evaluate_field_mode(&fv, n + k - j, &uw)?;
        rhs.add_assign(&t.scaled(&(-kos.clone() * c * sign)))?;
    }

    report.check_eq(
        &[
            format!("u = {u}"),
            format!("v = {v}"),
            format!("w = {w}"),
            format!("(m,n,k) = ({m},{n},{k})"),
        ],
        &lhs,
        &rhs,
        lhs == rhs,
    );
    Ok(report)
}

/// Commutativity formula: u_{(n)}v against the ∂-twisted sum over v_{(n+j)}u.
pub fn check_skew(u: &State, v: &State, n: i64) -> Result<CheckReport, FockError> {
    let chart = u.chart().clone();
    let mut report = CheckReport::new("skew");
    let lhs = nth_product(u, v, n)?;
    let fv = field_of_state(v);
    let mut rhs = State::zero(&chart);
    let jmax = (fv.annihilation_bound(u.max_weight()) - n).max(0);
    for j in 0..=jmax {
        let t = evaluate_field_mode(&fv, n + j, u)?;
        if t.is_zero() {
            continue;
        }
        let sign = if (j + n + 1).rem_euclid(2) == 0 { qi(1) } else { qi(-1) };
        rhs.add_assign(&translate_divided(&t, j).scaled(&sign))?;
    }
    rhs = rhs.scaled(&qi(koszul(u, v)));
    report.check_eq(
        &[format!("u = {u}"), format!("v = {v}"), format!("n = {n}")],
        &lhs,
        &rhs,
        lhs == rhs,
    );
    Ok(report)
}

/// Locality order N = 1 + max{j >= 0 : u_{(j)}v != 0}, plus the Borcherds
/// commutator formula on a sampled basis.
pub fn check_commutator_and_locality(
    u: &State,
    v: &State,
    mode_range: std::ops::RangeInclusive<i64>,
    xs: &[State],
) -> Result<(i64, CheckReport), FockError> {
    let chart = u.chart().clone();
    let mut report = CheckReport::new("commutator_locality");
    let sing = ope_singular(u, v)?;
    let order = sing.last().map(|(j, _)| j + 1).unwrap_or(0);

    let fu = field_of_state(u);
    let fv = field_of_state(v);
    let kos = qi(koszul(u, v));
    for m in mode_range.clone() {
        for k in mode_range.clone() {
            for x in xs {
                let umv = evaluate_field_mode(&fv, k, x)?;
                let left1 = evaluate_field_mode(&fu, m, &umv)?;
                let vmu = evaluate_field_mode(&fu, m, x)?;
                let left2 = evaluate_field_mode(&fv, k, &vmu)?;
                let lhs = left1.minus(&left2.scaled(&kos));

                let mut rhs = State::zero(&chart);
                for (j, uv) in &sing {
                    let c = binomial(m, *j);
                    if is_zero(&c) {
                        continue;
                    }
                    let t = nth_product(uv, x, m + k - j)?;
                    rhs.add_assign(&t.scaled(&c))?;
                }
                report.check_eq(
                    &[
                        format!("u = {u}"),
                        format!("v = {v}"),
                        format!("x = {x}"),
                        format!("(m,k) = ({m},{k})"),
                    ],
                    &lhs,
                    &rhs,
                    lhs == rhs,
                );
            }
        }
    }
    Ok((order, report))
}

/// Vacuum and translation axioms on one state.
pub fn check_vacuum_translation(u: &State, xs: &[State]) -> Result<CheckReport, FockError> {
    let chart = u.chart().clone();
    let mut report = CheckReport::new("vacuum_translation");
    let fu = field_of_state(u);
    let vac = State::vacuum(&chart);
    let bound = fu.annihilation_bound(0).max(0) + 2;
    for n in 0..=bound {
        let t = evaluate_field_mode(&fu, n, &vac)?;
        report.check_eq(
            &[format!("u = {u}"), format!("n = {n}")],
            &t,
            &"0",
            t.is_zero(),
        );
    }
    let back = evaluate_field_mode(&fu, -1, &vac)?;
    report.check_eq(&[format!("u = {u}")], &back, u, back == *u);

    // [∂, u_{(n)}] = -n u_{(n-1)} on the sampled basis
    for x in xs {
        for n in -3..=3 {
            let lhs = translate(&evaluate_field_mode(&fu, n, x)?)
                .minus(&evaluate_field_mode(&fu, n, &translate(x))?);
            let rhs = evaluate_field_mode(&fu, n - 1, x)?.scaled(&qi(-n));
            report.check_eq(
                &[format!("u = {u}"), format!("x = {x}"), format!("n = {n}")],
                &lhs,
                &rhs,
                lhs == rhs,
            );
        }
    }
    Ok(report)
}

/// Conformal-algebra axioms (C0)–(C3) restricted to the n >= 0 products.
pub fn check_conformal_axioms(
    u: &State,
    v: &State,
    w: &State,
    range: std::ops::RangeInclusive<i64>,
) -> Result<CheckReport, FockError> {
    let mut report = CheckReport::new("conformal_axioms");
    let fu = field_of_state(u);
    let fv = field_of_state(v);

    // C0: vanishing for large n, witnessed beyond the annihilation bound
    let b = fu.annihilation_bound(v.max_weight()).max(0);
    for n in b..b + 3 {
        let t = evaluate_field_mode(&fu, n, v)?;
        report.check_eq(
            &[format!("u = {u}"), format!("v = {v}"), format!("n = {n}")],
            &t,
            &"0",
            t.is_zero(),
        );
    }

    // C1: (∂u)_{(n)} v = -n u_{(n-1)} v
    let du = translate(u);
    for n in range.clone() {
        if n < 0 {
            continue;
        }
        let lhs = nth_product(&du, v, n)?;
        let rhs = evaluate_field_mode(&fu, n - 1, v)?.scaled(&qi(-n));
        report.check_eq(
            &[format!("u = {u}"), format!("v = {v}"), format!("n = {n}")],
            &lhs,
            &rhs,
            lhs == rhs,
        );
    }

    // C2: the commutativity formula on the n >= 0 products
    for n in range.clone() {
        if n < 0 {
            continue;
        }
        let sub = check_skew(u, v, n)?;
        report.merge(sub);
    }

    // C3: u_{(m)}(v_{(n)}w) = Σ_j C(m,j)(u_{(j)}v)_{(m+n-j)}w
    //                         + (-1)^{ũṽ} v_{(n)}(u_{(m)}w)
    let kos = qi(koszul(u, v));
    let sing = ope_singular(u, v)?;
    for m in range.clone() {
        for n in range.clone() {
            if m < 0 || n < 0 {
                continue;
            }
            let lhs = evaluate_field_mode(&fu, m, &evaluate_field_mode(&fv, n, w)?)?;
            let mut rhs = evaluate_field_mode(&fv, n, &evaluate_field_mode(&fu, m, w)?)?
                .scaled(&kos);
            for (j, uv) in &sing {
                let c = binomial(m, *j);
                if is_zero(&c) {
                    continue;
                }
                rhs.add_assign(&nth_product(uv, w, m + n - j)?.scaled(&c))?;
            }
            report.check_eq(
                &[
                    format!("u = {u}"),
                    format!("v = {v}"),
                    format!("w = {w}"),
                    format!("(m,n) = ({m},{n})"),
                ],
                &lhs,
                &rhs,
                lhs == rhs,
            );
        }
    }
    Ok(report)
}

/// Derivation property of the zero modes:
/// u_{(0)}(v_{(k)}w) = (u_{(0)}v)_{(k)}w ± v_{(k)}(u_{(0)}w).
pub fn check_zero_mode_derivation(
    u: &State,
    v: &State,
    w: &State,
    k: i64,
) -> Result<CheckReport, FockError> {
    let mut report = CheckReport::new("zero_mode_derivation");
    let fu = field_of_state(u);
    let fv = field_of_state(v);
    let lhs = evaluate_field_mode(&fu, 0, &evaluate_field_mode(&fv, k, w)?)?;
    let u0v = evaluate_field_mode(&fu, 0, v)?;
    let mut rhs = nth_product(&u0v, w, k)?;
    let kos = qi(koszul(u, v));
    rhs.add_assign(&evaluate_field_mode(&fv, k, &evaluate_field_mode(&fu, 0, w)?)?.scaled(&kos))?;
    report.check_eq(
        &[
            format!("u = {u}"),
            format!("v = {v}"),
            format!("w = {w}"),
            format!("k = {k}"),
        ],
        &lhs,
        &rhs,
        lhs == rhs,
    );
    Ok(report)
}

/// Seeded Borcherds suite over random basis triples of Ω_N or 𝒪_N.
#[allow(clippy::too_many_arguments)]
pub fn borcherds_suite(
    chart: &Chart,
    kind: AlgebraKind,
    max_weight: i64,
    b0_degree: i64,
    samples: u64,
    seed: u64,
    index_range: std::ops::RangeInclusive<i64>,
) -> Result<CheckReport, FockError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = monomials_up_to_weight(chart, kind, max_weight, b0_degree);
    let mut report = CheckReport::with_seed("borcherds_suite", seed);
    for _ in 0..samples {
        let u = crate::basis::sample_state(&mut rng, chart, &pool);
        let v = crate::basis::sample_state(&mut rng, chart, &pool);
        let w = crate::basis::sample_state(&mut rng, chart, &pool);
        for m in index_range.clone() {
            for n in index_range.clone() {
                for k in index_range.clone() {
                    let sub = check_borcherds(&u, &v, &w, m, n, k)?;
                    report.merge(sub);
                    if !report.passed() {
                        return Ok(report);
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Seeded skew/commutativity suite.
pub fn skew_suite(
    chart: &Chart,
    kind: AlgebraKind,
    max_weight: i64,
    samples: u64,
    seed: u64,
    index_range: std::ops::RangeInclusive<i64>,
) -> Result<CheckReport, FockError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool = monomials_up_to_weight(chart, kind, max_weight, 2);
    let mut report = CheckReport::with_seed("skew_suite", seed);
    for _ in 0..samples {
        let u = crate::basis::sample_state(&mut rng, chart, &pool);
        let v = crate::basis::sample_state(&mut rng, chart, &pool);
        for n in index_range.clone() {
            report.merge(check_skew(&u, &v, n)?);
            if !report.passed() {
                return Ok(report);
            }
        }
    }
    Ok(report)
}
