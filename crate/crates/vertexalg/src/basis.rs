//! Enumeration of graded monomial bases, used by the verifier suites and
//! the slice computations. Output order is deterministic.

use crate::fock::{Chart, GeneratorMode, Monomial, Species, State};
use crate::rational::qi;
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraKind {
    /// 𝒪_N: the even βγ part only.
    Even,
    /// Ω_N: βγ together with the bc pair.
    Super,
}

impl AlgebraKind {
    pub fn species(self) -> &'static [Species] {
        match self {
            AlgebraKind::Even => &[Species::A, Species::B],
            AlgebraKind::Super => &[Species::A, Species::B, Species::Phi, Species::Psi],
        }
    }
}

/// All canonical monomials of the given conformal weight whose total
/// b-zero-mode degree (sum of |exponents|) is at most `b0_degree`; negative
/// b-zero exponents are included for localized directions.
pub fn monomials_of_weight(
    chart: &Chart,
    kind: AlgebraKind,
    weight: i64,
    b0_degree: i64,
) -> Vec<Monomial> {
    // nonzero-mode candidates, heaviest first for the recursion
    let mut cands: Vec<(GeneratorMode, bool)> = Vec::new(); // (mode, is_odd)
    for dir in 1..=chart.dims {
        for sp in kind.species() {
            let top = sp.creation_max();
            let mut s = top;
            loop {
                let g = GeneratorMode::new(*sp, dir, s);
                if g.weight() > weight {
                    break;
                }
                if g.weight() >= 1 {
                    cands.push((g, sp.is_odd()));
                }
                s -= 1;
                if top - s > weight + 1 {
                    break;
                }
            }
        }
    }
    let mut partial: Vec<(GeneratorMode, i32)> = Vec::new();
    let mut shapes: Vec<Vec<(GeneratorMode, i32)>> = Vec::new();
    fill_weight(&cands, 0, weight, &mut partial, &mut shapes);

    // zero-mode dressings
    let mut dressings: Vec<Vec<(GeneratorMode, i32)>> = vec![Vec::new()];
    for dir in 1..=chart.dims {
        let lo = if chart.is_localized(dir) { -b0_degree } else { 0 };
        let mut next = Vec::new();
        for base in &dressings {
            let used: i64 = base.iter().map(|(_, e)| (*e as i64).abs()).sum();
            for e in lo..=b0_degree {
                if e.abs() + used > b0_degree {
                    continue;
                }
                let mut d = base.clone();
                if e != 0 {
                    d.push((GeneratorMode::new(Species::B, dir, 0), e as i32));
                }
                next.push(d);
            }
        }
        dressings = next;
    }
    if kind == AlgebraKind::Super {
        for dir in 1..=chart.dims {
            let mut next = Vec::new();
            for base in &dressings {
                next.push(base.clone());
                let mut d = base.clone();
                d.push((GeneratorMode::new(Species::Phi, dir, 0), 1));
                next.push(d);
            }
            dressings = next;
        }
    }

    let mut out = Vec::new();
    for shape in &shapes {
        for dress in &dressings {
            let mut raw = shape.clone();
            raw.extend_from_slice(dress);
            if let Ok(Some((m, _sign))) = Monomial::normalize_factors(chart, &raw) {
                out.push(m);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn fill_weight(
    cands: &[(GeneratorMode, bool)],
    idx: usize,
    left: i64,
    partial: &mut Vec<(GeneratorMode, i32)>,
    out: &mut Vec<Vec<(GeneratorMode, i32)>>,
) {
    if left == 0 {
        out.push(partial.clone());
        return;
    }
    if idx == cands.len() {
        return;
    }
    let (g, odd) = cands[idx];
    let w = g.weight();
    let max_e = if odd { 1 } else { left / w };
    for e in 0..=max_e {
        if w * e > left {
            break;
        }
        if e > 0 {
            partial.push((g, e as i32));
        }
        fill_weight(cands, idx + 1, left - w * e, partial, out);
        if e > 0 {
            partial.pop();
        }
    }
}

/// All monomials of weight 0..=max_weight under the same degree bound.
pub fn monomials_up_to_weight(
    chart: &Chart,
    kind: AlgebraKind,
    max_weight: i64,
    b0_degree: i64,
) -> Vec<Monomial> {
    (0..=max_weight)
        .flat_map(|w| monomials_of_weight(chart, kind, w, b0_degree))
        .collect()
}

/// Restrict to a fermionic charge.
pub fn monomials_of_bigrade(
    chart: &Chart,
    kind: AlgebraKind,
    weight: i64,
    charge: i64,
    b0_degree: i64,
) -> Vec<Monomial> {
    monomials_of_weight(chart, kind, weight, b0_degree)
        .into_iter()
        .filter(|m| m.charge() == charge)
        .collect()
}

/// One random basis monomial as a state.
pub fn sample_state<R: Rng>(rng: &mut R, chart: &Chart, pool: &[Monomial]) -> State {
    let m = pool[rng.gen_range(0..pool.len())].clone();
    State::monomial(chart, m, qi(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_zero_even() {
        let c = Chart::standard(1);
        let ms = monomials_of_weight(&c, AlgebraKind::Even, 0, 3);
        // 1, b0, b0^2, b0^3
        assert_eq!(ms.len(), 4);
    }

    #[test]
    fn weight_one_super_counts() {
        let c = Chart::standard(1);
        let ms = monomials_of_weight(&c, AlgebraKind::Super, 1, 1);
        // shapes: a-1, b-1, phi-1, psi-1; dressings: 1, b0, phi0, b0 phi0
        // minus Pauli collisions (phi-1 phi0 is fine; phi0^2 impossible)
        assert!(ms.iter().all(|m| m.weight() == 1));
        assert!(ms.contains(
            &Monomial::normalize_factors(
                &c,
                &[(GeneratorMode::new(Species::Psi, 1, -1), 1)]
            )
            .unwrap()
            .unwrap()
            .0
        ));
        assert_eq!(ms.len(), 16);
    }

    #[test]
    fn localized_degrees() {
        let c = Chart::localized("u*", 1, &[1]);
        let ms = monomials_of_weight(&c, AlgebraKind::Even, 0, 2);
        // b0^-2 .. b0^2
        assert_eq!(ms.len(), 5);
    }
}
