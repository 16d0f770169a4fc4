//! Coinvariant functionals on point configurations in CP¹: localization of
//! out-algebra elements, the duality functor, matrix-element correlators,
//! and their invariance, flatness, and descent properties.
//!
//! Points are (∞, z_2, ..., z_{m-1}, 0) with distinct nonzero rational z_t
//! and |z_2| > ... > |z_{m-1}|. Correlators are truncated multivariate
//! Laurent expansions in that region; every stored coefficient is an exact
//! rational computed by a finite sum, and identities are checked
//! coefficient-by-coefficient on the window.

pub mod dual;
pub mod phi;

pub use dual::{dual_action, DualVector};
pub use phi::{
    hom_embedding_check, invariance_and_flatness_check, phi_eval, wedge_and_psi_check, SeriesState,
};

use crate::fock::State;
use crate::rational::{binomial, is_zero, qabs, qfmt, qi, qpow, Q};
use num::traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;

/// Marked points (∞, z_2, ..., z_{m-1}, 0).
#[derive(Debug, Clone)]
pub struct PointConfig {
    /// the finite nonzero points z_2 > ... > z_{m-1} in absolute value
    pub zs: Vec<Q>,
}

/// A point of the configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Point {
    Infinity,
    /// index into `zs` (0-based: z_2 has index 0)
    Finite(usize),
    Zero,
}

impl PointConfig {
    pub fn new(zs: Vec<Q>) -> Self {
        assert!(zs.iter().all(|z| !is_zero(z)), "points must be nonzero");
        for w in zs.windows(2) {
            assert!(qabs(&w[0]) > qabs(&w[1]), "region |z_2| > ... > |z_{{m-1}}| violated");
        }
        let mut sorted = zs.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), zs.len(), "points must be distinct");
        PointConfig { zs }
    }

    pub fn num_points(&self) -> usize {
        self.zs.len() + 2
    }

    pub fn value(&self, p: Point) -> Option<Q> {
        match p {
            Point::Infinity => None,
            Point::Finite(i) => Some(self.zs[i].clone()),
            Point::Zero => Some(Q::zero()),
        }
    }

    /// Series variable index of a finite nonzero point.
    pub fn var_of(&self, p: Point) -> Option<usize> {
        match p {
            Point::Finite(i) => Some(i),
            _ => None,
        }
    }
}

/// The section B^{z_s}_{(j)} of the out-algebra: the mode of the state B
/// spread over the curve as the function (z - z_s)^j.
#[derive(Debug, Clone)]
pub struct RationalModeLabel {
    pub base: State,
    pub j: i64,
    pub at: Point,
}

impl RationalModeLabel {
    pub fn new(base: State, j: i64, at: Point) -> Self {
        assert!(!matches!(at, Point::Infinity), "labels attach at finite points");
        RationalModeLabel { base, j, at }
    }
}

/// Truncated multivariate Laurent series in the configuration variables,
/// exponents clipped to a symmetric window.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Series {
    pub nvars: usize,
    pub window: i64,
    pub terms: BTreeMap<Vec<i64>, Q>,
}

impl Series {
    pub fn zero(nvars: usize, window: i64) -> Self {
        Series { nvars, window, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, window: i64, c: Q) -> Self {
        let mut s = Self::zero(nvars, window);
        s.add(vec![0; nvars], c);
        s
    }

    pub fn monomial(nvars: usize, window: i64, exps: Vec<i64>, c: Q) -> Self {
        let mut s = Self::zero(nvars, window);
        s.add(exps, c);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&mut self, exps: Vec<i64>, c: Q) {
        if is_zero(&c) || exps.iter().any(|e| e.abs() > self.window) {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if is_zero(o.get()) {
                    o.remove();
                }
            }
        }
    }

    pub fn plus(&self, other: &Series) -> Series {
        let mut out = self.clone();
        out.window = out.window.min(other.window);
        out.terms.retain(|e, _| e.iter().all(|x| x.abs() <= out.window));
        for (e, c) in &other.terms {
            out.add(e.clone(), c.clone());
        }
        out
    }

    pub fn scaled(&self, c: &Q) -> Series {
        if is_zero(c) {
            return Series::zero(self.nvars, self.window);
        }
        Series {
            nvars: self.nvars,
            window: self.window,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v.clone() * c.clone())).collect(),
        }
    }

    pub fn times(&self, other: &Series) -> Series {
        let mut out = Series::zero(self.nvars, self.window.min(other.window));
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add(e, c1.clone() * c2.clone());
            }
        }
        out
    }

    /// d/d(var i), exact on coefficients.
    pub fn diff(&self, i: usize) -> Series {
        let mut out = Series::zero(self.nvars, self.window);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add(e2, c.clone() * qi(e[i]));
        }
        out
    }

    /// Restrict to a smaller comparison window.
    pub fn clipped(&self, window: i64) -> Series {
        let mut out = Series::zero(self.nvars, window);
        for (e, c) in &self.terms {
            out.add(e.clone(), c.clone());
        }
        out
    }

    /// Evaluate at the configuration (only sensible for series that are
    /// finite in every variable, e.g. three-point correlators).
    pub fn eval(&self, config: &PointConfig) -> Q {
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &ei) in e.iter().enumerate() {
                t *= qpow(&config.zs[i], ei);
            }
            acc += t;
        }
        acc
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (e, c) in &self.terms {
            let mut s = qfmt(c);
            for (i, &ei) in e.iter().enumerate() {
                if ei != 0 {
                    s.push_str(&format!(" z{}^{}", i + 2, ei));
                }
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

/// Expansion of (z - z_s)^p in the local variable at the target point,
/// with the point coordinates kept as series variables in the region
/// |z_2| > ... > |z_{m-1}|. The returned coefficients multiply the modes
/// B^{target}_{(i)} for i = 0, 1, ....
///
/// At a finite target the local variable is (z - z_t) and the coefficient
/// of B_{(i)} is C(p, i) (z_t - z_s)^{p-i}, region-expanded; at 0 the local
/// variable is z itself.
pub fn localize_coefficient_series(
    config: &PointConfig,
    s_at: Point,
    p: i64,
    target: Point,
    i: i64,
    window: i64,
) -> Series {
    let nv = config.zs.len();
    let c = binomial(p, i);
    if is_zero(&c) {
        return Series::zero(nv, window);
    }
    let power = p - i;
    match (target, s_at) {
        (Point::Zero, Point::Zero) => {
            // (z - 0)^p: only the tautological mode survives
            if i == p {
                Series::constant(nv, window, qi(1))
            } else {
                Series::zero(nv, window)
            }
        }
        (Point::Zero, Point::Finite(s)) => {
            // (0 - z_s)^{p-i}
            let mut e = vec![0i64; nv];
            e[s] = power;
            let sign = if power.rem_euclid(2) == 0 { qi(1) } else { qi(-1) };
            Series::monomial(nv, window, e, c * sign)
        }
        (Point::Finite(t), Point::Zero) => {
            // (z_t - 0)^{p-i}
            let mut e = vec![0i64; nv];
            e[t] = power;
            Series::monomial(nv, window, e, c)
        }
        (Point::Finite(t), Point::Finite(s)) => {
            if t == s {
                return if i == p {
                    Series::constant(nv, window, qi(1))
                } else {
                    Series::zero(nv, window)
                };
            }
            // (z_t - z_s)^{p-i}, expanded in the larger-modulus variable
            let (big, small, sign_flip) = if t < s { (t, s, false) } else { (s, t, true) };
            let mut out = Series::zero(nv, window);
            if power >= 0 {
                // finite binomial sum, no region subtlety
                for k in 0..=power {
                    let mut e = vec![0i64; nv];
                    e[t] = power - k;
                    e[s] = k;
                    let sgn = if k % 2 == 0 { qi(1) } else { qi(-1) };
                    out.add(e, c.clone() * binomial(power, k) * sgn);
                }
                return out;
            }
            // (z_big - z_small)^{power} = Σ_k C(power,k) (-z_small)^k z_big^{power-k}
            let overall = if sign_flip && power.rem_euclid(2) == 1 { qi(-1) } else { qi(1) };
            let mut k = 0;
            loop {
                let e_small = k;
                let e_big = power - k;
                if e_small > window {
                    break;
                }
                let mut e = vec![0i64; nv];
                e[big] += e_big;
                e[small] += e_small;
                let sgn = if k % 2 == 0 { qi(1) } else { qi(-1) };
                out.add(e, c.clone() * binomial(power, k) * sgn * overall.clone());
                k += 1;
            }
            out
        }
        (Point::Infinity, _) => unreachable!("handled by the eta branch"),
        (_, Point::Infinity) => unreachable!("labels attach at finite points"),
    }
}

/// Numeric localization coefficients at the rational configuration:
/// the expansion of (z - z_s)^j at the target point, coefficients of
/// B^{target}_{(i)} for i = 0..truncation.
pub fn localize(
    config: &PointConfig,
    label: &RationalModeLabel,
    target: Point,
    truncation: i64,
) -> Result<Vec<(i64, Q)>, String> {
    if label.at == target && label.j < 0 {
        return Err(format!(
            "pole label of order {} localized at its own attachment point",
            -label.j
        ));
    }
    let zs = config.value(label.at).expect("finite attachment");
    let zt = config.value(target).ok_or("use the eta branch at infinity")?;
    if label.at != target && zs == zt {
        return Err("coincident points".to_string());
    }
    let mut out = Vec::new();
    for i in 0..=truncation {
        let c = binomial(label.j, i);
        if is_zero(&c) {
            continue;
        }
        let diff = zt.clone() - zs.clone();
        if label.at == target {
            if i == label.j {
                out.push((i, qi(1)));
            }
            continue;
        }
        out.push((i, c * qpow(&diff, label.j - i)));
    }
    Ok(out)
}
