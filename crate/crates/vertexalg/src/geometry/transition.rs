//! Charts of CP^N and the operators lifting coordinate changes to the
//! localized Fock spaces:
//!
//! ```text
//! G(b̃^i(z)) = g^i(b)(z)
//! G(φ̃^i(z)) = (∂g^i/∂b^j φ^j)(z)
//! G(ψ̃^i(z)) = (∂f^i/∂b̃^j ψ^j)(z)
//! G(ã^i(z)) = a^j(∂f^i/∂b̃^j)(z) + (∂²f^k/∂b̃^i∂b̃^l ∂g^l/∂b^r φ^r ψ^k)(z)
//! ```
//!
//! A state is moved across by reconstructing its field, rewriting the tree
//! generator-by-generator, and evaluating the result at mode (-1) on the
//! target vacuum; this is exactly how a vertex-algebra morphism acts on
//! states.

use crate::fock::{Chart, FockError, Species, State};
use crate::field::{evaluate_field_mode, field_of_state, FieldExpr};
use crate::poly::LaurentPoly;
use crate::rational::{qi, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Affine(u8),
    Projective(u8),
}

/// Standard homogeneous-coordinate charts. Chart k of CP^N carries the
/// coordinates y_h / y_k for h != k, in increasing order of h.
#[derive(Debug, Clone)]
pub struct Atlas {
    pub space: Space,
    pub charts: Vec<Chart>,
}

impl Atlas {
    pub fn affine(n: u8) -> Self {
        Atlas { space: Space::Affine(n), charts: vec![Chart::standard(n)] }
    }

    pub fn cpn(n: u8) -> Self {
        let charts = (0..=n).map(|k| Chart::polynomial(&format!("chart{k}"), n)).collect();
        Atlas { space: Space::Projective(n), charts }
    }

    pub fn cp1() -> Self {
        Atlas::cpn(1)
    }

    fn dims(&self) -> u8 {
        match self.space {
            Space::Affine(n) | Space::Projective(n) => n,
        }
    }

    /// Homogeneous index carried by direction `d` of chart `k`.
    fn homog_index(&self, k: usize, d: u8) -> usize {
        let h = d as usize - 1;
        if h < k {
            h
        } else {
            h + 1
        }
    }

    /// Direction of chart `k` carrying the homogeneous index `h`.
    fn direction_of(&self, k: usize, h: usize) -> u8 {
        assert_ne!(k, h);
        if h < k {
            h as u8 + 1
        } else {
            h as u8
        }
    }

    /// The overlap chart of the pair (i, j): chart j localized in the
    /// direction that inverts on the overlap.
    pub fn overlap(&self, i: usize, j: usize) -> Chart {
        let n = self.dims();
        let dir = self.direction_of(j, i);
        Chart::localized(&format!("chart{j}[{i}]"), n, &[dir])
    }

    /// The transition operator re-expressing chart-i states over chart j.
    pub fn transition(&self, i: usize, j: usize) -> TransitionOp {
        let n = self.dims();
        assert!(matches!(self.space, Space::Projective(_)), "affine space has one chart");
        assert!(i != j && i < self.charts.len() && j < self.charts.len());
        let nv = n as usize;

        // g: chart-i coordinates as Laurent terms in chart-j coordinates
        // y_h/y_i = (y_h/y_j) / (y_i/y_j)
        let dji = self.direction_of(j, i) as usize - 1; // chart-j slot of y_i
        let g: Vec<(Q, Vec<i32>)> = (1..=n)
            .map(|d| {
                let h = self.homog_index(i, d);
                let mut e = vec![0i32; nv];
                e[dji] -= 1;
                if h != j {
                    e[self.direction_of(j, h) as usize - 1] += 1;
                }
                (qi(1), e)
            })
            .collect();
        // f: chart-j coordinates in chart-i coordinates (for the ψ/a legs)
        let dij = self.direction_of(i, j) as usize - 1;
        let f: Vec<(Q, Vec<i32>)> = (1..=n)
            .map(|d| {
                let h = self.homog_index(j, d);
                let mut e = vec![0i32; nv];
                e[dij] -= 1;
                if h != i {
                    e[self.direction_of(i, h) as usize - 1] += 1;
                }
                (qi(1), e)
            })
            .collect();
        TransitionOp::from_coordinate_maps(
            self.charts[i].clone(),
            self.overlap(i, j),
            &g,
            &f,
        )
    }
}

/// Operator carrying states of the source chart onto the overlap
/// localization of the target chart.
#[derive(Debug, Clone)]
pub struct TransitionOp {
    pub src: Chart,
    pub dst: Chart,
    /// images of the source generator fields over the target chart
    b_img: Vec<FieldExpr>,
    phi_img: Vec<FieldExpr>,
    psi_img: Vec<FieldExpr>,
    a_img: Vec<FieldExpr>,
    /// source coordinates as Laurent terms of target coordinates, for
    /// rewriting zero-mode functions
    subst: Vec<(Q, Vec<i32>)>,
}

impl TransitionOp {
    /// Build from the coordinate change: `g` expresses each source
    /// coordinate in target coordinates, `f` the converse; both must be
    /// Laurent terms (monomial up to scalar), which covers projective
    /// space.
    pub fn from_coordinate_maps(
        src: Chart,
        dst: Chart,
        g: &[(Q, Vec<i32>)],
        f: &[(Q, Vec<i32>)],
    ) -> Self {
        let n = src.dims as usize;
        let gp: Vec<LaurentPoly> =
            g.iter().map(|(c, e)| LaurentPoly::term(n, e.clone(), c.clone())).collect();
        let fp: Vec<LaurentPoly> =
            f.iter().map(|(c, e)| LaurentPoly::term(n, e.clone(), c.clone())).collect();

        let mut b_img = Vec::new();
        let mut phi_img = Vec::new();
        let mut psi_img = Vec::new();
        let mut a_img = Vec::new();
        for i in 0..n {
            b_img.push(FieldExpr::ZeroModeFn(gp[i].clone()));

            // (∂g^i/∂b^j φ^j)(z)
            let mut phi_terms = Vec::new();
            for j in 0..n {
                let dg = gp[i].diff(j);
                if !dg.is_zero() {
                    phi_terms.push((
                        qi(1),
                        FieldExpr::ZeroModeFn(dg).normal(FieldExpr::gen(Species::Phi, j as u8 + 1)),
                    ));
                }
            }
            phi_img.push(FieldExpr::sum(phi_terms));

            // ψ̃^i transforms as ∂/∂φ̃^i: coefficient ∂f^j/∂b̃^i ∘ g on ψ^j
            let mut psi_terms = Vec::new();
            for j in 0..n {
                let df = fp[j].diff(i).subst_terms(g);
                if !df.is_zero() {
                    psi_terms.push((
                        qi(1),
                        FieldExpr::ZeroModeFn(df).normal(FieldExpr::gen(Species::Psi, j as u8 + 1)),
                    ));
                }
            }
            psi_img.push(FieldExpr::sum(psi_terms));

            // ã^i transforms as ∂/∂b̃^i: a^j (∂f^j/∂b̃^i ∘ g)(z) plus the
            // second-derivative φψ correction
            let mut a_terms = Vec::new();
            for j in 0..n {
                let df = fp[j].diff(i).subst_terms(g);
                if !df.is_zero() {
                    a_terms.push((
                        qi(1),
                        FieldExpr::gen(Species::A, j as u8 + 1).normal(FieldExpr::ZeroModeFn(df)),
                    ));
                }
            }
            for k in 0..n {
                for l in 0..n {
                    let d2f = fp[k].diff(i).diff(l).subst_terms(g);
                    if d2f.is_zero() {
                        continue;
                    }
                    for r in 0..n {
                        let dg = gp[l].diff(r);
                        if dg.is_zero() {
                            continue;
                        }
                        let coeff_fn = d2f.times(&dg);
                        a_terms.push((
                            qi(1),
                            FieldExpr::ZeroModeFn(coeff_fn).normal(
                                FieldExpr::gen(Species::Phi, r as u8 + 1)
                                    .normal(FieldExpr::gen(Species::Psi, k as u8 + 1)),
                            ),
                        ));
                    }
                }
            }
            a_img.push(FieldExpr::sum(a_terms));
        }
        TransitionOp { src, dst, b_img, phi_img, psi_img, a_img, subst: g.to_vec() }
    }

    /// Image of a source generator field.
    pub fn generator_image(&self, sp: Species, dir: u8) -> &FieldExpr {
        let i = dir as usize - 1;
        match sp {
            Species::B => &self.b_img[i],
            Species::Phi => &self.phi_img[i],
            Species::Psi => &self.psi_img[i],
            Species::A => &self.a_img[i],
        }
    }

    /// Rewrite a field tree over the source chart into one over the target.
    pub fn map_field(&self, f: &FieldExpr) -> FieldExpr {
        match f {
            FieldExpr::Id => FieldExpr::Id,
            FieldExpr::Gen(sp, dir) => self.generator_image(*sp, *dir).clone(),
            FieldExpr::Deriv(inner) => self.map_field(inner).deriv(),
            FieldExpr::Normal(a, b) => self.map_field(a).normal(self.map_field(b)),
            FieldExpr::ZeroModeFn(g) => FieldExpr::ZeroModeFn(g.subst_terms(&self.subst)),
            FieldExpr::Linear(ts) => {
                FieldExpr::Linear(ts.iter().map(|(c, t)| (c.clone(), self.map_field(t))).collect())
            }
        }
    }

    /// Carry a state across: map its field and return the (-1)-mode value
    /// on the target vacuum.
    pub fn apply(&self, v: &State) -> Result<State, FockError> {
        if v.chart().name != self.src.name && !v.chart().name.starts_with(&self.src.name) {
            return Err(FockError::MixedCharts(
                v.chart().name.clone(),
                self.src.name.clone(),
            ));
        }
        let fld = self.map_field(&field_of_state(v));
        evaluate_field_mode(&fld, -1, &State::vacuum(&self.dst))
    }
}
