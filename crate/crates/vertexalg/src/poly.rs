//! Multivariate Laurent polynomials over `Q`, used both as zero-mode
//! functions of the b-fields and as the coefficient algebra of prevertex
//! data. Exponent vectors are dense and short (one slot per direction).

use crate::rational::{is_zero, qfmt, qi, qpow, Q};
use num::traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Vec<i32>, Q>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Q::one())
    }

    /// The monomial c * Π x_i^{e_i}.
    pub fn term(nvars: usize, exps: Vec<i32>, c: Q) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        p.add_term(exps, c);
        p
    }

    /// Variable x_i (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::term(nvars, e, qi(1))
    }

    /// x_i^k, k of either sign.
    pub fn var_pow(nvars: usize, i: usize, k: i32) -> Self {
        let mut e = vec![0; nvars];
        e[i] = k;
        Self::term(nvars, e, qi(1))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn has_negative_exponents(&self) -> bool {
        self.terms.keys().any(|e| e.iter().any(|&x| x < 0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &Q)> {
        self.terms.iter()
    }

    pub fn constant_coeff(&self) -> Q {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, exps: Vec<i32>, c: Q) {
        if is_zero(&c) {
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

    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scaled(&qi(-1)))
    }

    pub fn scaled(&self, c: &Q) -> Self {
        if is_zero(c) {
            return Self::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v.clone() * c.clone())).collect(),
        }
    }

    pub fn times(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = out.times(self);
        }
        out
    }

    /// ∂/∂x_i, valid on Laurent exponents.
    pub fn diff(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c.clone() * qi(e[i] as i64));
        }
        out
    }

    /// Iterated partial derivative by the multi-index `alpha`.
    pub fn diff_multi(&self, alpha: &[u32]) -> Self {
        let mut out = self.clone();
        for (i, &k) in alpha.iter().enumerate() {
            for _ in 0..k {
                out = out.diff(i);
                if out.is_zero() {
                    return out;
                }
            }
        }
        out
    }

    /// Substitute x_i -> c_i * Π x_j^{m_ij} (a Laurent term per variable).
    /// This covers the chart transitions of projective space, whose
    /// coordinate changes are monomial.
    pub fn subst_terms(&self, images: &[(Q, Vec<i32>)]) -> Self {
        assert_eq!(images.len(), self.nvars);
        let out_vars = images.first().map(|(_, e)| e.len()).unwrap_or(self.nvars);
        let mut out = Self::zero(out_vars);
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            let mut exps = vec![0i32; out_vars];
            for (i, &ei) in e.iter().enumerate() {
                if ei == 0 {
                    continue;
                }
                let (ci, mi) = &images[i];
                coeff *= qpow(ci, ei as i64);
                for (j, &mj) in mi.iter().enumerate() {
                    exps[j] += mj * ei;
                }
            }
            out.add_term(exps, coeff);
        }
        out
    }

    /// Evaluate at a rational point (requires nonzero coordinates when
    /// negative exponents are present).
    pub fn eval(&self, point: &[Q]) -> Q {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &ei) in e.iter().enumerate() {
                t *= qpow(&point[i], ei as i64);
            }
            acc += t;
        }
        acc
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", qfmt(c))?;
            for (i, &ei) in e.iter().enumerate() {
                if ei == 1 {
                    write!(f, "*x{}", i + 1)?;
                } else if ei != 0 {
                    write!(f, "*x{}^{}", i + 1, ei)?;
                }
            }
        }
        Ok(())
    }
}
