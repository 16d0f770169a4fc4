//! The Lie-algebra antiinvolution η induced by z -> 1/z:
//!
//! ```text
//! η(a_j) = -a_{-j}   η(b_j) = b_{-j}   η(φ_j) = φ_{-j}   η(ψ_j) = -ψ_{-j}
//! ```
//!
//! extended to products as a super-antiautomorphism,
//! η(xy) = (-1)^{x̃ỹ} η(y) η(x), and to composite-field modes by recursion
//! over the field syntax tree.

use crate::fock::{FockError, GeneratorMode, Species, State};
use crate::field::{apply_mode, evaluate_field_mode, FieldExpr};
use crate::rational::{qi, Q};

/// η on one generator mode: the image mode and the sign.
pub fn eta_generator_mode(g: GeneratorMode) -> (GeneratorMode, i64) {
    let sign = match g.species {
        Species::A | Species::Psi => -1,
        Species::B | Species::Phi => 1,
    };
    (GeneratorMode::new(g.species, g.dir, -g.mode), sign)
}

/// A product of generator modes with a coefficient, leftmost applied last.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeMonomial {
    pub coeff: Q,
    pub factors: Vec<GeneratorMode>,
}

impl ModeMonomial {
    pub fn new(coeff: Q, factors: Vec<GeneratorMode>) -> Self {
        ModeMonomial { coeff, factors }
    }

    pub fn single(g: GeneratorMode) -> Self {
        ModeMonomial { coeff: qi(1), factors: vec![g] }
    }

    pub fn apply(&self, v: &State) -> State {
        let mut out = v.clone();
        for g in self.factors.iter().rev() {
            out = apply_mode(*g, &out);
            if out.is_zero() {
                break;
            }
        }
        out.scaled(&self.coeff)
    }

    /// η of the product: factors reversed, each mode flipped, with the
    /// Koszul sign of reversing the odd factors.
    pub fn eta(&self) -> ModeMonomial {
        let odd = self.factors.iter().filter(|g| g.is_odd()).count() as i64;
        let mut sign = if (odd * (odd - 1) / 2) % 2 == 0 { 1 } else { -1 };
        let mut factors = Vec::with_capacity(self.factors.len());
        for g in self.factors.iter().rev() {
            let (h, s) = eta_generator_mode(*g);
            sign *= s;
            factors.push(h);
        }
        ModeMonomial { coeff: self.coeff.clone() * qi(sign), factors }
    }
}

/// Apply η(F_{(n)}) to a state, recursively over the field tree.
///
/// For a normal product the split sum transforms into
/// `(-1)^{F̃G̃} Σ_{k<=-1} η(G_{(n-k-1)}) η(F_{(k)}) + Σ_{k>=0} η(F_{(k)}) η(G_{(n-k-1)})`,
/// finite because η of a deep-creation mode lowers weight.
pub fn eval_eta_mode(f: &FieldExpr, n: i64, v: &State) -> Result<State, FockError> {
    let chart = v.chart().clone();
    if v.is_zero() {
        return Ok(State::zero(&chart));
    }
    match f {
        FieldExpr::Id => Ok(if n == -1 { v.clone() } else { State::zero(&chart) }),
        FieldExpr::Gen(sp, dir) => {
            let phys = n - sp.delta() + 1;
            let (h, s) = eta_generator_mode(GeneratorMode::new(*sp, *dir, phys));
            Ok(apply_mode(h, v).scaled(&qi(s)))
        }
        FieldExpr::Deriv(inner) => {
            if n == 0 {
                return Ok(State::zero(&chart));
            }
            Ok(eval_eta_mode(inner, n - 1, v)?.scaled(&qi(-n)))
        }
        // η(g(b)_{(m)}) = g(b)_{(-m-2)}: the b-modes commute, so reversing
        // the product only flips every index
        FieldExpr::ZeroModeFn(_) => evaluate_field_mode(f, -n - 2, v),
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
            // k <= -1: η(F_{(k)}) has weight k + 1 - Δ_F <= -min_delta
            let klo = fa.min_delta() - w - 1;
            for k in klo..=-1 {
                let inner = eval_eta_mode(fa, k, v)?;
                if inner.is_zero() {
                    continue;
                }
                let outer = eval_eta_mode(fb, n - k - 1, &inner)?;
                acc.add_assign(&outer.scaled(&sign))?;
            }
            // k >= 0: η(G_{(n-k-1)}) vanishes once n-k-1 < min_delta - w - 1
            let khi = n - fb.min_delta() + w + 1;
            for k in 0..=khi.max(-1) {
                let inner = eval_eta_mode(fb, n - k - 1, v)?;
                if inner.is_zero() {
                    continue;
                }
                let outer = eval_eta_mode(fa, k, &inner)?;
                acc.add_assign(&outer)?;
            }
            Ok(acc)
        }
        FieldExpr::Linear(ts) => {
            let mut acc = State::zero(&chart);
            for (c, sub) in ts {
                acc.add_assign(&eval_eta_mode(sub, n, v)?.scaled(c))?;
            }
            Ok(acc)
        }
    }
}
