//! Super-graded Fock monomials and states over a chart, with canonical
//! normal forms.
//!
//! A state is an exact `Q`-linear combination of normal-ordered monomials in
//! the creation modes of the four generator species
//!
//! ```text
//! a^i(z) = Σ a^i_s z^{-s-1}   (even, Δ = 1)
//! b^i(z) = Σ b^i_s z^{-s}     (even, Δ = 0)
//! φ^i(z) = Σ φ^i_s z^{-s}     (odd,  Δ = 0)
//! ψ^i(z) = Σ ψ^i_s z^{-s-1}   (odd,  Δ = 1)
//! ```
//!
//! applied to the vacuum `|0>`. Creation modes are `a: s ≤ -1`, `b: s ≤ 0`,
//! `φ: s ≤ 0`, `ψ: s ≤ -1`; the zero mode `b^i_0` may carry negative
//! exponents only on charts localized in direction `i`. The mode index used
//! throughout this module is the physics index `s` of the expansions above.

use crate::rational::{is_zero, qfmt, qi, Q};
use num::traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Species {
    A,
    B,
    Phi,
    Psi,
}

impl Species {
    pub fn is_odd(self) -> bool {
        matches!(self, Species::Phi | Species::Psi)
    }

    /// Conformal weight of the generator state (a_{-1}|0>, b_0|0>, ...).
    pub fn delta(self) -> i64 {
        match self {
            Species::A | Species::Psi => 1,
            Species::B | Species::Phi => 0,
        }
    }

    /// Fermionic charge carried by one factor of this species.
    pub fn charge(self) -> i64 {
        match self {
            Species::Phi => 1,
            Species::Psi => -1,
            _ => 0,
        }
    }

    /// Largest annihilation mode ceiling: s is a creation mode iff s <= this.
    pub fn creation_max(self) -> i64 {
        match self {
            Species::A | Species::Psi => -1,
            Species::B | Species::Phi => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Species::A => "a",
            Species::B => "b",
            Species::Phi => "phi",
            Species::Psi => "psi",
        }
    }
}

/// One Fourier mode of one generator, physics index convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GeneratorMode {
    pub species: Species,
    pub dir: u8,
    pub mode: i64,
}

impl GeneratorMode {
    pub fn new(species: Species, dir: u8, mode: i64) -> Self {
        GeneratorMode { species, dir, mode }
    }

    pub fn is_odd(self) -> bool {
        self.species.is_odd()
    }

    /// Conformal weight of this mode as an operator: [L_0, x_j] = -j x_j.
    pub fn weight(self) -> i64 {
        -self.mode
    }

    pub fn is_creation(self) -> bool {
        self.mode <= self.species.creation_max()
    }

    /// Scalar part of the supercommutator [x, y] (with K = 1); zero unless
    /// the two modes form a conjugate Heisenberg or Clifford pair.
    pub fn contraction(self, other: GeneratorMode) -> i64 {
        if self.dir != other.dir || self.mode != -other.mode {
            return 0;
        }
        match (self.species, other.species) {
            (Species::A, Species::B) => 1,
            (Species::B, Species::A) => -1,
            // anticommutator, symmetric
            (Species::Phi, Species::Psi) | (Species::Psi, Species::Phi) => 1,
            _ => 0,
        }
    }
}

// Monomial factor order: species rank a < b < phi < psi, then direction,
// then mode descending. Any fixed order works; this one is the crate's.
impl Ord for GeneratorMode {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.species, self.dir, -self.mode).cmp(&(other.species, other.dir, -other.mode))
    }
}

impl PartialOrd for GeneratorMode {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GeneratorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}[{}]", self.species.name(), self.dir, self.mode)
    }
}

/// Chart identifier: a name, the number of directions, and the set of
/// directions whose b-zero-mode is inverted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chart {
    pub name: String,
    pub dims: u8,
    pub localized: Vec<u8>,
}

impl Chart {
    pub fn polynomial(name: &str, dims: u8) -> Self {
        Chart { name: name.to_string(), dims, localized: Vec::new() }
    }

    pub fn localized(name: &str, dims: u8, dirs: &[u8]) -> Self {
        let mut localized = dirs.to_vec();
        localized.sort_unstable();
        localized.dedup();
        Chart { name: name.to_string(), dims, localized }
    }

    pub fn standard(dims: u8) -> Self {
        Chart::polynomial("chart0", dims)
    }

    pub fn is_localized(&self, dir: u8) -> bool {
        self.localized.contains(&dir)
    }

    /// The same chart with extra inverted directions.
    pub fn localize(&self, dirs: &[u8]) -> Chart {
        let mut all = self.localized.clone();
        all.extend_from_slice(dirs);
        Chart::localized(&format!("{}*", self.name), self.dims, &all)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FockError {
    #[error("terms over mixed charts: {0} vs {1}")]
    MixedCharts(String, String),
    #[error("annihilation mode {0} cannot appear in a monomial")]
    AnnihilationMode(String),
    #[error("odd mode {0} with exponent {1}")]
    OddExponent(String, i32),
    #[error("negative exponent of {0} on chart {1} not localized in direction {2}")]
    NotLocalized(String, String, u8),
    #[error("direction {0} out of range for chart with {1} directions")]
    BadDirection(u8, u8),
    #[error("Laurent zero-mode function on non-localized chart {0}")]
    Divergent(String),
    #[error("{0}")]
    Parse(String),
}

/// Normal-ordered product of creation modes applied to the vacuum.
/// Factors are strictly sorted by the fixed mode order; odd factors carry
/// exponent 1; even exponents are nonzero, negative only for b-zero-modes
/// over localized directions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    factors: Vec<(GeneratorMode, i32)>,
}

impl Monomial {
    pub fn vacuum() -> Self {
        Monomial::default()
    }

    pub fn is_vacuum(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(GeneratorMode, i32)] {
        &self.factors
    }

    pub fn weight(&self) -> i64 {
        self.factors.iter().map(|(g, e)| g.weight() * *e as i64).sum()
    }

    pub fn charge(&self) -> i64 {
        self.factors.iter().map(|(g, e)| g.species.charge() * *e as i64).sum()
    }

    pub fn bigrade(&self) -> Bigrade {
        Bigrade { weight: self.weight(), charge: self.charge() }
    }

    pub fn parity(&self) -> bool {
        self.factors.iter().filter(|(g, _)| g.is_odd()).count() % 2 == 1
    }

    /// Total exponent of b-zero-modes, the degree bound used by slice
    /// computations.
    pub fn zero_mode_degree(&self) -> i64 {
        self.factors
            .iter()
            .filter(|(g, _)| g.species == Species::B && g.mode == 0)
            .map(|(_, e)| (*e as i64).abs())
            .sum()
    }

    pub fn b_degree(&self) -> i64 {
        self.factors
            .iter()
            .map(|(g, e)| match g.species {
                Species::B => *e as i64,
                Species::A => -(*e as i64),
                _ => 0,
            })
            .sum()
    }

    fn check_factor(chart: &Chart, g: GeneratorMode, e: i32) -> Result<(), FockError> {
        if g.dir == 0 || g.dir > chart.dims {
            return Err(FockError::BadDirection(g.dir, chart.dims));
        }
        if !g.is_creation() {
            return Err(FockError::AnnihilationMode(g.to_string()));
        }
        if g.is_odd() && e != 1 {
            return Err(FockError::OddExponent(g.to_string(), e));
        }
        if e < 0 {
            let laurent_ok = g.species == Species::B && g.mode == 0 && chart.is_localized(g.dir);
            if !laurent_ok {
                return Err(FockError::NotLocalized(g.to_string(), chart.name.clone(), g.dir));
            }
        }
        Ok(())
    }

    /// Sort an arbitrary factor sequence into canonical form, tracking the
    /// sign of odd transpositions. Returns `None` when an odd generator
    /// repeats or an even exponent cancels to a unit monomial factor.
    pub fn normalize_factors(
        chart: &Chart,
        raw: &[(GeneratorMode, i32)],
    ) -> Result<Option<(Monomial, i64)>, FockError> {
        let mut sign = 1i64;
        let mut sorted: Vec<(GeneratorMode, i32)> = Vec::with_capacity(raw.len());
        for &(g, e) in raw {
            if e == 0 {
                continue;
            }
            if g.is_odd() && e != 1 {
                return Err(FockError::OddExponent(g.to_string(), e));
            }
            // insertion sort, counting odd-odd transpositions
            let mut pos = sorted.len();
            while pos > 0 && g < sorted[pos - 1].0 {
                if g.is_odd() && sorted[pos - 1].0.is_odd() {
                    sign = -sign;
                }
                pos -= 1;
            }
            if pos > 0 && sorted[pos - 1].0 == g {
                if g.is_odd() {
                    return Ok(None); // odd square vanishes
                }
                sorted[pos - 1].1 += e;
                if sorted[pos - 1].1 == 0 {
                    sorted.remove(pos - 1);
                }
            } else {
                sorted.insert(pos, (g, e));
            }
        }
        for &(g, e) in &sorted {
            Self::check_factor(chart, g, e)?;
        }
        Ok(Some((Monomial { factors: sorted }, sign)))
    }

    /// Canonical monomial from already-sorted trusted factors (internal).
    pub(crate) fn from_sorted(factors: Vec<(GeneratorMode, i32)>) -> Self {
        Monomial { factors }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (g, e) in &self.factors {
            if *e == 1 {
                write!(f, "{} ", g)?;
            } else {
                write!(f, "{}^{} ", g, e)?;
            }
        }
        write!(f, "|0>")
    }
}

/// Conformal weight and fermionic charge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bigrade {
    pub weight: i64,
    pub charge: i64,
}

impl Bigrade {
    pub fn new(weight: i64, charge: i64) -> Self {
        Bigrade { weight, charge }
    }

    pub fn add(self, other: Bigrade) -> Bigrade {
        Bigrade { weight: self.weight + other.weight, charge: self.charge + other.charge }
    }
}

/// Exact linear combination of monomials over one chart. No zero
/// coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct State {
    chart: Chart,
    terms: BTreeMap<Monomial, Q>,
}

impl State {
    pub fn zero(chart: &Chart) -> Self {
        State { chart: chart.clone(), terms: BTreeMap::new() }
    }

    pub fn vacuum(chart: &Chart) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::vacuum(), qi(1));
        State { chart: chart.clone(), terms }
    }

    pub fn monomial(chart: &Chart, m: Monomial, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !is_zero(&c) {
            terms.insert(m, c);
        }
        State { chart: chart.clone(), terms }
    }

    /// Build a state from raw factor lists; the canonical form applies odd
    /// transposition signs, merges duplicates, and drops zero terms.
    pub fn normalize(
        chart: &Chart,
        raw_terms: &[(Vec<(GeneratorMode, i32)>, Q)],
    ) -> Result<State, FockError> {
        let mut st = State::zero(chart);
        for (factors, coeff) in raw_terms {
            if let Some((m, sign)) = Monomial::normalize_factors(chart, factors)? {
                st.add_term(m, coeff.clone() * qi(sign));
            }
        }
        Ok(st)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn coeff_vacuum(&self) -> Q {
        self.coeff(&Monomial::vacuum())
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn add_assign(&mut self, other: &State) -> Result<(), FockError> {
        if self.chart != other.chart {
            return Err(FockError::MixedCharts(self.chart.name.clone(), other.chart.name.clone()));
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
        Ok(())
    }

    pub fn plus(&self, other: &State) -> State {
        let mut out = self.clone();
        out.add_assign(other).expect("chart mismatch in plus");
        out
    }

    pub fn minus(&self, other: &State) -> State {
        self.plus(&other.scaled(&qi(-1)))
    }

    pub fn scaled(&self, c: &Q) -> State {
        if is_zero(c) {
            return State::zero(&self.chart);
        }
        State {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.clone() * c.clone())).collect(),
        }
    }

    /// Largest conformal weight among terms (0 for the zero state).
    pub fn max_weight(&self) -> i64 {
        self.terms.keys().map(|m| m.weight()).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> Option<Bigrade> {
        let mut grades = self.terms.keys().map(|m| m.bigrade());
        let first = grades.next()?;
        if grades.all(|g| g == first) {
            Some(first)
        } else {
            None
        }
    }

    /// Split into homogeneous components, keyed by bigrade.
    pub fn components(&self) -> BTreeMap<Bigrade, State> {
        let mut out: BTreeMap<Bigrade, State> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.bigrade())
                .or_insert_with(|| State::zero(&self.chart))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// Component of the given bigrade.
    pub fn component(&self, g: Bigrade) -> State {
        let mut out = State::zero(&self.chart);
        for (m, c) in &self.terms {
            if m.bigrade() == g {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    /// Reinterpret over another chart (used when widening to a localization).
    pub fn with_chart(&self, chart: &Chart) -> Result<State, FockError> {
        let mut out = State::zero(chart);
        for (m, c) in &self.terms {
            for &(g, e) in m.factors() {
                Monomial::check_factor(chart, g, e)?;
            }
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 @{}", self.chart.name);
        }
        let mut first = true;
        for (m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{} {}", qfmt(c), m)?;
        }
        write!(f, " @{}", self.chart.name)
    }
}
