//! Matrix representations of the quantum generators on a few modes.
//!
//! States are occupation tuples with total quanta up to a cap, grouped by
//! total. Every generator here is a bilinear `a†a`, so it maps each
//! total-quanta sector into itself and its commutators are exact on the
//! truncated space. Only the bare ladder operators feel the cap.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::spectrum::{ModeIndex, RobinSpectrum};
use crate::symmetry::MixingVariant;

pub type CMatrix = DMatrix<Complex64>;

/// Smallest and largest number of modes in a sector space.
pub const MODE_RANGE: (usize, usize) = (1, 4);

/// Largest total-quanta cap accepted.
pub const QUANTA_CAP: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FockError {
    #[error("a sector space takes {min}..={max} modes, got {got}")]
    ModeCount { got: usize, min: usize, max: usize },
    #[error("total-quanta cap {got} outside 1..={max}")]
    Cap { got: usize, max: usize },
    #[error("mode {0:?} listed twice")]
    DuplicateMode(ModeIndex),
    #[error("mode {0:?} is not in the sector space")]
    UnknownMode(ModeIndex),
    #[error("mode {0:?} has no (-l, n) partner in the sector space")]
    NoPartner(ModeIndex),
    #[error("modes {first:?} and {second:?} share the frequency {omega}")]
    DegeneratePair {
        first: ModeIndex,
        second: ModeIndex,
        omega: f64,
    },
    #[error("the paired generators need l > 0, got l = {0}")]
    NonPositiveOrder(i32),
    #[error("frequency {0} is not positive and finite")]
    Frequency(f64),
    #[error("operator {0} does not conserve total quanta")]
    NotNumberConserving(String),
}

/// One oscillator: its labels and frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FockMode {
    pub index: ModeIndex,
    pub omega: f64,
}

/// Occupation-number basis with total quanta `0..=cap`.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorSpace {
    modes: Vec<FockMode>,
    cap: usize,
    states: Vec<Vec<usize>>,
    lookup: BTreeMap<Vec<usize>, usize>,
}

fn compositions(total: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if parts == 1 {
        prefix.push(total);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in (0..=total).rev() {
        prefix.push(first);
        compositions(total - first, parts - 1, prefix, out);
        prefix.pop();
    }
}

impl SectorSpace {
    pub fn new(modes: Vec<FockMode>, cap: usize) -> Result<Self, FockError> {
        let (min, max) = MODE_RANGE;
        if !(min..=max).contains(&modes.len()) {
            return Err(FockError::ModeCount {
                got: modes.len(),
                min,
                max,
            });
        }
        if !(1..=QUANTA_CAP).contains(&cap) {
            return Err(FockError::Cap {
                got: cap,
                max: QUANTA_CAP,
            });
        }
        for (i, m) in modes.iter().enumerate() {
            if !(m.omega.is_finite() && m.omega > 0.0) {
                return Err(FockError::Frequency(m.omega));
            }
            if modes[..i].iter().any(|o| o.index == m.index) {
                return Err(FockError::DuplicateMode(m.index));
            }
        }
        let mut states = Vec::new();
        for total in 0..=cap {
            compositions(total, modes.len(), &mut Vec::new(), &mut states);
        }
        let lookup = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(Self {
            modes,
            cap,
            states,
            lookup,
        })
    }

    /// Modes taken from a spectrum, frequencies included.
    pub fn from_spectrum(
        spectrum: &RobinSpectrum,
        indices: &[ModeIndex],
        cap: usize,
    ) -> Result<Self, FockError> {
        let trunc = spectrum.truncation();
        let modes = indices
            .iter()
            .map(|&index| {
                if trunc.contains(index) {
                    Ok(FockMode {
                        index,
                        omega: spectrum.omega(index),
                    })
                } else {
                    Err(FockError::UnknownMode(index))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(modes, cap)
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn modes(&self) -> &[FockMode] {
        &self.modes
    }

    pub fn states(&self) -> &[Vec<usize>] {
        &self.states
    }

    pub fn total(&self, state: usize) -> usize {
        self.states[state].iter().sum()
    }

    /// Basis position of the zero-quanta state.
    pub fn vacuum(&self) -> usize {
        0
    }

    pub fn slot(&self, index: ModeIndex) -> Result<usize, FockError> {
        self.modes
            .iter()
            .position(|m| m.index == index)
            .ok_or(FockError::UnknownMode(index))
    }

    /// Basis positions of states with total quanta `total`.
    pub fn sector(&self, total: usize) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.total(i) == total)
            .collect()
    }

    /// Positions with total quanta below the cap, where `[a, a†] = 1`.
    pub fn guarded(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.total(i) < self.cap)
            .collect()
    }
}

/// A labelled matrix on a sector space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    pub label: String,
    pub matrix: CMatrix,
}

impl FockOperator {
    fn new(label: impl Into<String>, matrix: CMatrix) -> Self {
        Self {
            label: label.into(),
            matrix,
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::new(format!("{}†", self.label), self.matrix.adjoint())
    }
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Annihilator and creator of `mode`. The creator drops states that would
/// exceed the cap.
pub fn ladder(
    space: &SectorSpace,
    mode: ModeIndex,
) -> Result<(FockOperator, FockOperator), FockError> {
    let slot = space.slot(mode)?;
    let dim = space.dim();
    let mut a = CMatrix::zeros(dim, dim);
    for (col, occ) in space.states.iter().enumerate() {
        let n = occ[slot];
        if n == 0 {
            continue;
        }
        let mut lowered = occ.clone();
        lowered[slot] -= 1;
        let row = space.lookup[&lowered];
        a[(row, col)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    let name = format!("a({},{})", mode.l, mode.n);
    let annihilator = FockOperator::new(name.clone(), a);
    let creator = FockOperator::new(format!("{name}†"), annihilator.matrix.adjoint());
    Ok((annihilator, creator))
}

/// `N = a† a`, diagonal with the occupation numbers.
pub fn number(space: &SectorSpace, mode: ModeIndex) -> Result<FockOperator, FockError> {
    let slot = space.slot(mode)?;
    let diag = space
        .states
        .iter()
        .map(|s| Complex64::new(s[slot] as f64, 0.0));
    Ok(FockOperator::new(
        format!("N({},{})", mode.l, mode.n),
        CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(space.dim(), diag)),
    ))
}

/// `a†(first) a(second)`.
pub fn hop(space: &SectorSpace, first: ModeIndex, second: ModeIndex) -> Result<CMatrix, FockError> {
    let f = space.slot(first)?;
    let s = space.slot(second)?;
    let dim = space.dim();
    let mut m = CMatrix::zeros(dim, dim);
    for (col, occ) in space.states.iter().enumerate() {
        let ns = occ[s];
        if ns == 0 {
            continue;
        }
        let value = if f == s {
            ns as f64
        } else {
            (ns as f64 * (occ[f] + 1) as f64).sqrt()
        };
        let mut moved = occ.clone();
        moved[s] -= 1;
        moved[f] += 1;
        m[(space.lookup[&moved], col)] = Complex64::new(value, 0.0);
    }
    Ok(m)
}

/// `Q_{l,n} = a†(l,n) a(-l,n)`.
pub fn flip(space: &SectorSpace, mode: ModeIndex) -> Result<FockOperator, FockError> {
    let partner = mode.flipped();
    space
        .slot(partner)
        .map_err(|_| FockError::NoPartner(mode))?;
    Ok(FockOperator::new(
        format!("Q({},{})", mode.l, mode.n),
        hop(space, mode, partner)?,
    ))
}

/// `Ĥ = Σ ω N`.
pub fn hamiltonian(space: &SectorSpace) -> FockOperator {
    let diag = space.states.iter().map(|s| {
        let e: f64 = s
            .iter()
            .zip(&space.modes)
            .map(|(n, m)| *n as f64 * m.omega)
            .sum();
        Complex64::new(e, 0.0)
    });
    FockOperator::new(
        "H",
        CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(space.dim(), diag)),
    )
}

/// `L̂ = Σ l N`.
pub fn angular_momentum(space: &SectorSpace) -> FockOperator {
    let diag = space.states.iter().map(|s| {
        let l: f64 = s
            .iter()
            .zip(&space.modes)
            .map(|(n, m)| (*n as i64 * m.index.l as i64) as f64)
            .sum();
        Complex64::new(l, 0.0)
    });
    FockOperator::new(
        "L",
        CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(space.dim(), diag)),
    )
}

/// `T₀, T₁, T₂, T₃` of the `(±l, n)` pair, `l > 0`.
pub fn su2_generators(space: &SectorSpace, l: i32, n: u32) -> Result<[FockOperator; 4], FockError> {
    if l <= 0 {
        return Err(FockError::NonPositiveOrder(l));
    }
    let plus = ModeIndex::new(l, n);
    let minus = plus.flipped();
    let np = number(space, plus)?.matrix;
    let nm = number(space, minus)?.matrix;
    let tp = hop(space, plus, minus)?;
    let tm = hop(space, minus, plus)?;
    let half = Complex64::new(0.5, 0.0);
    let minus_half_i = Complex64::new(0.0, -0.5);
    Ok([
        FockOperator::new("T0", (&np + &nm) * half),
        FockOperator::new("T1", (&tp + &tm) * half),
        FockOperator::new("T2", (&tp - &tm) * minus_half_i),
        FockOperator::new("T3", (&np - &nm) * half),
    ])
}

/// `Q±(t)` of the two-frequency pair and its explicit time derivative.
pub fn mixing_generator(
    space: &SectorSpace,
    first: ModeIndex,
    second: ModeIndex,
    variant: MixingVariant,
    t: f64,
) -> Result<(FockOperator, CMatrix), FockError> {
    let w1 = space.modes[space.slot(first)?].omega;
    let w2 = space.modes[space.slot(second)?].omega;
    let dw = w2 - w1;
    // Q = e^{iΔωt} a†₁ a₂ and Q† = e^{-iΔωt} a†₂ a₁
    let q = hop(space, first, second)? * Complex64::from_polar(1.0, dw * t);
    let qd = q.adjoint();
    let i = Complex64::new(0.0, 1.0);
    let dq = &q * (i * dw);
    let dqd = &qd * (-i * dw);
    let (label, g, dg) = match variant {
        MixingVariant::Plus => {
            let c = Complex64::new(0.5, 0.0);
            ("Q+", (&q + &qd) * c, (&dq + &dqd) * c)
        }
        MixingVariant::Minus => {
            let c = Complex64::new(0.0, -0.5);
            ("Q-", (&q - &qd) * c, (&dq - &dqd) * c)
        }
    };
    Ok((FockOperator::new(label, g), dg))
}

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Matrix exponential by scaling and squaring with the degree-13 Padé
/// approximant.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let norm1 = (0..n)
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    const THETA13: f64 = 5.371920351148152;
    let s = if norm1 > THETA13 {
        (norm1 / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = a * Complex64::new(0.5f64.powi(s), 0.0);
    let id = CMatrix::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = |k: usize| Complex64::new(PADE13[k], 0.0);
    let u_inner = &a6 * (&a6 * b(13) + &a4 * b(11) + &a2 * b(9))
        + &a6 * b(7)
        + &a4 * b(5)
        + &a2 * b(3)
        + &id * b(1);
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b(12) + &a4 * b(10) + &a2 * b(8))
        + &a6 * b(6)
        + &a4 * b(4)
        + &a2 * b(2)
        + &id * b(0);
    let mut r = (&v - &u)
        .lu()
        .solve(&(&v + &u))
        .expect("Padé denominator is invertible for scaled arguments");
    for _ in 0..s {
        r = &r * &r;
    }
    r
}

/// `exp(iα G)` computed sector by sector for a generator that conserves
/// total quanta.
pub fn unitary(
    space: &SectorSpace,
    generator: &FockOperator,
    alpha: f64,
) -> Result<CMatrix, FockError> {
    if block_leakage(space, &generator.matrix) != 0.0 {
        return Err(FockError::NotNumberConserving(generator.label.clone()));
    }
    let dim = space.dim();
    let mut out = CMatrix::zeros(dim, dim);
    let i_alpha = Complex64::new(0.0, alpha);
    for total in 0..=space.cap {
        let idx = space.sector(total);
        let k = idx.len();
        let block = CMatrix::from_fn(k, k, |r, c| generator.matrix[(idx[r], idx[c])] * i_alpha);
        let e = expm(&block);
        for r in 0..k {
            for c in 0..k {
                out[(idx[r], idx[c])] = e[(r, c)];
            }
        }
    }
    Ok(out)
}

/// Largest entry coupling different total-quanta sectors.
pub fn block_leakage(space: &SectorSpace, m: &CMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..space.dim() {
        for c in 0..space.dim() {
            if space.total(r) != space.total(c) {
                worst = worst.max(m[(r, c)].norm());
            }
        }
    }
    worst
}

/// One checked identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    /// Whether the identity is expected to fail (residual above tolerance).
    pub expect_violation: bool,
    pub passed: bool,
}

impl IdentityCheck {
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
            expect_violation: false,
            passed: residual <= tolerance,
        }
    }

    pub fn violated(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
            expect_violation: true,
            passed: residual > tolerance,
        }
    }
}

/// Commutator identities of the bilinear generators and the ladder algebra.
pub fn algebra_report(space: &SectorSpace) -> Result<Vec<IdentityCheck>, FockError> {
    const TOL: f64 = 1e-12;
    let mut out = Vec::new();
    let modes: Vec<ModeIndex> = space.modes.iter().map(|m| m.index).collect();
    let dim = space.dim();
    let id = CMatrix::identity(dim, dim);
    let guarded = space.guarded();
    let ladders: Vec<_> = modes
        .iter()
        .map(|&m| ladder(space, m))
        .collect::<Result<_, _>>()?;
    let numbers: Vec<CMatrix> = modes
        .iter()
        .map(|&m| number(space, m).map(|o| o.matrix))
        .collect::<Result<_, _>>()?;
    let flips: Vec<Option<CMatrix>> = modes
        .iter()
        .map(|&m| flip(space, m).ok().map(|o| o.matrix))
        .collect();
    let h = hamiltonian(space).matrix;
    let l_op = angular_momentum(space).matrix;
    let zero = CMatrix::zeros(dim, dim);
    let label = |m: ModeIndex| format!("({},{})", m.l, m.n);
    let slot_of = |m: ModeIndex| modes.iter().position(|&x| x == m);

    // vacuum and ladder algebra
    let mut vac_worst: f64 = 0.0;
    let mut ccr_worst: f64 = 0.0;
    let mut number_worst: f64 = 0.0;
    for (i, (a, _)) in ladders.iter().enumerate() {
        vac_worst = vac_worst.max(
            a.matrix
                .column(space.vacuum())
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max),
        );
        number_worst = number_worst.max(max_abs(&(&ladders[i].1.matrix * &a.matrix - &numbers[i])));
        for (j, (_, c)) in ladders.iter().enumerate() {
            let comm =
                commutator(&a.matrix, &c.matrix) - if i == j { id.clone() } else { zero.clone() };
            for &r in &guarded {
                for &col in &guarded {
                    ccr_worst = ccr_worst.max(comm[(r, col)].norm());
                }
            }
        }
    }
    out.push(IdentityCheck::new("a|0> = 0", vac_worst, 0.0));
    out.push(IdentityCheck::new("a†a = N", number_worst, TOL));
    out.push(IdentityCheck::new(
        "[a, a†] = δ·1 below the cap",
        ccr_worst,
        TOL,
    ));
    out.push(IdentityCheck::new(
        "<0|H|0> = 0",
        h[(space.vacuum(), space.vacuum())].norm(),
        0.0,
    ));

    // conservation of total quanta and hermiticity
    let mut leak: f64 = 0.0;
    let mut herm: f64 = 0.0;
    let mut flip_adj: f64 = 0.0;
    for nm in &numbers {
        leak = leak.max(block_leakage(space, nm));
        herm = herm.max(max_abs(&(nm - nm.adjoint())));
    }
    for (i, q) in flips.iter().enumerate() {
        if let Some(q) = q {
            leak = leak.max(block_leakage(space, q));
            if let Some(j) = slot_of(modes[i].flipped()) {
                if let Some(qm) = &flips[j] {
                    flip_adj = flip_adj.max(max_abs(&(q.adjoint() - qm)));
                }
            }
        }
    }
    for op in [&h, &l_op] {
        leak = leak.max(block_leakage(space, op));
        herm = herm.max(max_abs(&(op - op.adjoint())));
    }
    out.push(IdentityCheck::new(
        "bilinears conserve total quanta",
        leak,
        0.0,
    ));
    out.push(IdentityCheck::new("N, H, L hermitian", herm, 0.0));
    out.push(IdentityCheck::new("Q(l,n)† = Q(-l,n)", flip_adj, 0.0));

    // [N, N], [N, Q], [Q, Q]
    let mut nn: f64 = 0.0;
    for a in &numbers {
        for b in &numbers {
            nn = nn.max(max_abs(&commutator(a, b)));
        }
    }
    out.push(IdentityCheck::new("[N, N] = 0", nn, TOL));
    let mut nq: f64 = 0.0;
    let mut qq: f64 = 0.0;
    for (i, &m1) in modes.iter().enumerate() {
        for (j, &m2) in modes.iter().enumerate() {
            let Some(q2) = &flips[j] else { continue };
            let mut want = zero.clone();
            if m1 == m2 {
                want += q2;
            }
            if m1 == m2.flipped() {
                if let Some(qm) = &flips[slot_of(m1.flipped()).expect("partner present")] {
                    want -= qm;
                }
            }
            nq = nq.max(max_abs(&(commutator(&numbers[i], q2) - want)));
            if let Some(q1) = &flips[i] {
                let mut want = zero.clone();
                if m1 == m2.flipped() {
                    want = &numbers[i] - &numbers[slot_of(m1.flipped()).expect("partner present")];
                }
                qq = qq.max(max_abs(&(commutator(q1, q2) - want)));
            }
        }
    }
    out.push(IdentityCheck::new("[N1, Q2] = δ Q1 - δ' Q(-1)", nq, TOL));
    out.push(IdentityCheck::new("[Q1, Q2] = δ' (N1 - N(-1))", qq, TOL));

    // H and L against the generators, relative to their largest entries
    let h_scale = max_abs(&h).max(1.0);
    let l_scale = max_abs(&l_op).max(1.0);
    let mut hn: f64 = 0.0;
    let mut ln: f64 = 0.0;
    let mut hq: f64 = 0.0;
    let mut lq: f64 = 0.0;
    for (i, nm) in numbers.iter().enumerate() {
        hn = hn.max(max_abs(&commutator(&h, nm)));
        ln = ln.max(max_abs(&commutator(&l_op, nm)));
        if let Some(q) = &flips[i] {
            hq = hq.max(max_abs(&commutator(&h, q)));
            let want = q * Complex64::new(2.0 * modes[i].l as f64, 0.0);
            lq = lq.max(max_abs(&(commutator(&l_op, q) - want)));
        }
    }
    out.push(IdentityCheck::new(
        "[H, N] = 0 (relative to |H|)",
        hn / h_scale,
        TOL,
    ));
    out.push(IdentityCheck::new(
        "[L, N] = 0 (relative to |L|)",
        ln / l_scale,
        TOL,
    ));
    out.push(IdentityCheck::new(
        "[H, Q] = 0 (relative to |H|)",
        hq / h_scale,
        TOL,
    ));
    out.push(IdentityCheck::new(
        "[L, Q(l,n)] = 2l Q(l,n) (relative to |L|)",
        lq / l_scale,
        TOL,
    ));

    // generators against ladders
    let mut na: f64 = 0.0;
    let mut qa: f64 = 0.0;
    for (i, &m1) in modes.iter().enumerate() {
        for (j, &m2) in modes.iter().enumerate() {
            let (a2, c2) = (&ladders[j].0.matrix, &ladders[j].1.matrix);
            let d = if i == j { 1.0 } else { 0.0 };
            na = na.max(max_abs(
                &(commutator(&numbers[i], a2) + a2 * Complex64::new(d, 0.0)),
            ));
            na = na.max(max_abs(
                &(commutator(&numbers[i], c2) - c2 * Complex64::new(d, 0.0)),
            ));
            if let Some(q1) = &flips[i] {
                let partner = slot_of(m1.flipped()).expect("partner present");
                let mut want_a = zero.clone();
                if m1 == m2 {
                    want_a -= &ladders[partner].0.matrix;
                }
                let mut want_c = zero.clone();
                if m1 == m2.flipped() {
                    want_c += &ladders[i].1.matrix;
                }
                qa = qa.max(max_abs(&(commutator(q1, a2) - want_a)));
                qa = qa.max(max_abs(&(commutator(q1, c2) - want_c)));
            }
        }
    }
    out.push(IdentityCheck::new(
        "[N1, a2] = -δ a1, [N1, a2†] = δ a1†",
        na,
        TOL,
    ));
    out.push(IdentityCheck::new(
        "[Q1, a2] = -δ a(-1), [Q1, a2†] = δ' a1†",
        qa,
        TOL,
    ));

    // SU(2) on every (±l, n) pair, and the regrouped H and L
    let mut h_split = zero.clone();
    let mut l_split = zero.clone();
    for (i, m) in modes.iter().enumerate() {
        if m.l == 0 || slot_of(m.flipped()).is_none() {
            h_split += &numbers[i] * Complex64::new(space.modes[i].omega, 0.0);
            l_split += &numbers[i] * Complex64::new(m.l as f64, 0.0);
            continue;
        }
        if m.l < 0 {
            continue;
        }
        let t = su2_generators(space, m.l, m.n)?;
        let [t0, t1, t2, t3] = [&t[0].matrix, &t[1].matrix, &t[2].matrix, &t[3].matrix];
        let tp = t1 + t2 * Complex64::new(0.0, 1.0);
        let tm = t1 - t2 * Complex64::new(0.0, 1.0);
        let i_c = Complex64::new(0.0, 1.0);
        let su2 = [
            max_abs(&(commutator(t1, t2) - t3 * i_c)),
            max_abs(&(commutator(t2, t3) - t1 * i_c)),
            max_abs(&(commutator(t3, t1) - t2 * i_c)),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        let ladder_form = [
            max_abs(&(commutator(t3, &tp) - &tp)),
            max_abs(&(commutator(t3, &tm) + &tm)),
            max_abs(&(commutator(&tp, &tm) - t3 * Complex64::new(2.0, 0.0))),
        ]
        .into_iter()
        .fold(0.0, f64::max);
        let central = [t1, t2, t3]
            .iter()
            .map(|t| max_abs(&commutator(t0, t)))
            .fold(0.0, f64::max);
        let herm = t
            .iter()
            .map(|o| max_abs(&(&o.matrix - o.matrix.adjoint())))
            .fold(0.0, f64::max);
        let lbl = label(*m);
        out.push(IdentityCheck::new(
            format!("[Ti, Tj] = i eps_ijk Tk on ±{lbl}"),
            su2,
            TOL,
        ));
        out.push(IdentityCheck::new(
            format!("[T3, T±] = ±T±, [T+, T-] = 2T3 on ±{lbl}"),
            ladder_form,
            TOL,
        ));
        out.push(IdentityCheck::new(
            format!("[T0, Ti] = 0 on ±{lbl}"),
            central,
            TOL,
        ));
        out.push(IdentityCheck::new(
            format!("T0..T3 hermitian on ±{lbl}"),
            herm,
            0.0,
        ));
        h_split += t0 * Complex64::new(2.0 * space.modes[i].omega, 0.0);
        l_split += t3 * Complex64::new(2.0 * m.l as f64, 0.0);
    }
    out.push(IdentityCheck::new(
        "H = Σ ω N(0,n) + Σ 2ω T0 (relative to |H|)",
        max_abs(&(&h - h_split)) / h_scale,
        TOL,
    ));
    out.push(IdentityCheck::new(
        "L = Σ 2l T3 (relative to |L|)",
        max_abs(&(&l_op - l_split)) / l_scale,
        TOL,
    ));
    Ok(out)
}

/// `[H, Q(l,n)]` after shifting `ω(-l,n)` by `shift`: nonzero, showing that
/// the `±l` degeneracy is what makes `Q` conserved.
pub fn broken_degeneracy_check(
    space: &SectorSpace,
    mode: ModeIndex,
    shift: f64,
) -> Result<IdentityCheck, FockError> {
    let q = flip(space, mode)?;
    let mut broken = space.clone();
    let partner = broken.slot(mode.flipped())?;
    broken.modes[partner].omega += shift;
    let h = hamiltonian(&broken).matrix;
    let residual = max_abs(&commutator(&h, &q.matrix)) / max_abs(&h).max(1.0);
    Ok(IdentityCheck::violated(
        format!(
            "[H, Q({},{})] != 0 once ω(-l,n) is shifted by {shift:e} (relative to |H|)",
            mode.l, mode.n
        ),
        residual,
        1e-12,
    ))
}

/// What a conjugation `exp(iαG) a exp(-iαG)` is compared against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConjugationCase {
    Number(ModeIndex),
    Pair {
        l: i32,
        n: u32,
        axis: crate::symmetry::Axis,
    },
    Mixing {
        first: ModeIndex,
        second: ModeIndex,
        variant: MixingVariant,
        t: f64,
    },
}

/// Outcome of one finite conjugation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConjugationOutcome {
    pub generator: String,
    pub angle: f64,
    /// Largest deviation of `U a U†` from the closed-form mixing, over all modes.
    pub deviation: f64,
    /// `‖U U† - 1‖`.
    pub unitarity: f64,
    /// `‖U|0> - |0>‖`.
    pub vacuum_shift: f64,
}

/// Builds `U = exp(iαG)` for the case and compares `U a(m) U†` with the
/// closed forms: `e^{-iα} a` for `N`; the paired rotations for `T₁, T₂, T₃`;
/// the time-dependent mixing for `Q±(t)`.
pub fn conjugation_report(
    space: &SectorSpace,
    case: ConjugationCase,
    alpha: f64,
) -> Result<ConjugationOutcome, FockError> {
    use crate::symmetry::Axis;
    let modes: Vec<ModeIndex> = space.modes.iter().map(|m| m.index).collect();
    let ladders: Vec<CMatrix> = modes
        .iter()
        .map(|&m| ladder(space, m).map(|l| l.0.matrix))
        .collect::<Result<_, _>>()?;
    let (s, c) = (0.5 * alpha).sin_cos();
    let i = Complex64::new(0.0, 1.0);
    let one = Complex64::new(1.0, 0.0);
    // expected[k] = Σ_j coeff[k][j] a_j
    let mut coeff = vec![vec![Complex64::new(0.0, 0.0); modes.len()]; modes.len()];
    for (k, row) in coeff.iter_mut().enumerate() {
        row[k] = one;
    }
    let generator = match case {
        ConjugationCase::Number(m) => {
            let k = space.slot(m)?;
            coeff[k][k] = Complex64::from_polar(1.0, -alpha);
            number(space, m)?
        }
        ConjugationCase::Pair { l, n, axis } => {
            let t = su2_generators(space, l, n)?;
            let p = space.slot(ModeIndex::new(l, n))?;
            let m = space.slot(ModeIndex::new(-l, n))?;
            match axis {
                Axis::One => {
                    coeff[p][p] = c * one;
                    coeff[p][m] = -i * s;
                    coeff[m][m] = c * one;
                    coeff[m][p] = -i * s;
                }
                Axis::Two => {
                    coeff[p][p] = c * one;
                    coeff[p][m] = -s * one;
                    coeff[m][m] = c * one;
                    coeff[m][p] = s * one;
                }
                Axis::Three => {
                    coeff[p][p] = Complex64::from_polar(1.0, -0.5 * alpha);
                    coeff[m][m] = Complex64::from_polar(1.0, 0.5 * alpha);
                }
            }
            let [_, t1, t2, t3] = t;
            match axis {
                Axis::One => t1,
                Axis::Two => t2,
                Axis::Three => t3,
            }
        }
        ConjugationCase::Mixing {
            first,
            second,
            variant,
            t,
        } => {
            let p1 = space.slot(first)?;
            let p2 = space.slot(second)?;
            let (w1, w2) = (space.modes[p1].omega, space.modes[p2].omega);
            if (w1 - w2).abs() <= 1e-12 * w1.max(w2) {
                return Err(FockError::DegeneratePair {
                    first,
                    second,
                    omega: w1,
                });
            }
            let e = Complex64::from_polar(1.0, (w2 - w1) * t);
            coeff[p1][p1] = c * one;
            coeff[p2][p2] = c * one;
            match variant {
                MixingVariant::Plus => {
                    coeff[p1][p2] = -i * s * e;
                    coeff[p2][p1] = -i * s * e.conj();
                }
                MixingVariant::Minus => {
                    coeff[p1][p2] = -s * e;
                    coeff[p2][p1] = s * e.conj();
                }
            }
            mixing_generator(space, first, second, variant, t)?.0
        }
    };
    let u = unitary(space, &generator, alpha)?;
    let ud = u.adjoint();
    let dim = space.dim();
    let mut deviation: f64 = 0.0;
    for (k, row) in coeff.iter().enumerate() {
        let got = &u * &ladders[k] * &ud;
        let mut want = CMatrix::zeros(dim, dim);
        for (j, cj) in row.iter().enumerate() {
            if *cj != Complex64::new(0.0, 0.0) {
                want += &ladders[j] * *cj;
            }
        }
        deviation = deviation.max(max_abs(&(got - want)));
    }
    let unitarity = max_abs(&(&u * &ud - CMatrix::identity(dim, dim)));
    let vac = space.vacuum();
    let vacuum_shift = (0..dim)
        .map(|r| {
            (u[(r, vac)]
                - if r == vac {
                    one
                } else {
                    Complex64::new(0.0, 0.0)
                })
            .norm()
        })
        .fold(0.0, f64::max);
    Ok(ConjugationOutcome {
        generator: generator.label,
        angle: alpha,
        deviation,
        unitarity,
        vacuum_shift,
    })
}

/// `‖i ∂_t Q±(t) + [Q±(t), Ĥ]‖` relative to the size of the two terms, and
/// `|<0|Q±(t)|0>|`.
pub fn heisenberg_conservation(
    space: &SectorSpace,
    first: ModeIndex,
    second: ModeIndex,
    variant: MixingVariant,
    t: f64,
) -> Result<(f64, f64), FockError> {
    let (q, dq) = mixing_generator(space, first, second, variant, t)?;
    let h = hamiltonian(space).matrix;
    let i_dq = dq * Complex64::new(0.0, 1.0);
    let comm = commutator(&q.matrix, &h);
    let scale = max_abs(&i_dq).max(max_abs(&comm)).max(f64::MIN_POSITIVE);
    let residual = max_abs(&(i_dq + comm)) / scale;
    let vac = space.vacuum();
    Ok((residual, q.matrix[(vac, vac)].norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::Axis;

    fn pair_space(cap: usize) -> SectorSpace {
        SectorSpace::new(
            vec![
                FockMode {
                    index: ModeIndex::new(1, 1),
                    omega: 2.7,
                },
                FockMode {
                    index: ModeIndex::new(-1, 1),
                    omega: 2.7,
                },
            ],
            cap,
        )
        .unwrap()
    }

    fn distinct_space() -> SectorSpace {
        SectorSpace::new(
            vec![
                FockMode {
                    index: ModeIndex::new(0, 1),
                    omega: 1.3,
                },
                FockMode {
                    index: ModeIndex::new(2, 1),
                    omega: 3.9,
                },
            ],
            6,
        )
        .unwrap()
    }

    fn mode(l: i32, n: u32, omega: f64) -> FockMode {
        FockMode {
            index: ModeIndex::new(l, n),
            omega,
        }
    }

    #[test]
    fn dimensions() {
        assert_eq!(pair_space(1).dim(), 3);
        assert_eq!(pair_space(2).dim(), 6);
        let three =
            SectorSpace::new(vec![mode(0, 1, 1.0), mode(1, 1, 2.0), mode(-1, 1, 2.0)], 2).unwrap();
        assert_eq!(three.dim(), 10);
        let mut seen = three.states().to_vec();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 10);
    }

    #[test]
    fn rejects_bad_spaces() {
        assert!(matches!(
            SectorSpace::new(vec![], 2),
            Err(FockError::ModeCount { .. })
        ));
        assert!(matches!(
            SectorSpace::new(vec![mode(0, 1, 1.0), mode(0, 1, 1.0)], 2),
            Err(FockError::DuplicateMode(_))
        ));
        assert!(matches!(
            SectorSpace::new(vec![mode(0, 1, 1.0)], 0),
            Err(FockError::Cap { .. })
        ));
        assert!(matches!(
            SectorSpace::new(vec![mode(0, 1, -1.0)], 1),
            Err(FockError::Frequency(_))
        ));
    }

    #[test]
    fn ladder_basics() {
        let s = pair_space(3);
        let (a, c) = ladder(&s, ModeIndex::new(1, 1)).unwrap();
        assert!(a.matrix.column(s.vacuum()).iter().all(|z| z.norm() == 0.0));
        let n = &c.matrix * &a.matrix;
        for (i, occ) in s.states().iter().enumerate() {
            assert!((n[(i, i)].re - occ[0] as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn algebra_holds() {
        for space in [
            pair_space(6),
            SectorSpace::new(
                vec![
                    mode(0, 1, 1.1),
                    mode(1, 1, 2.0),
                    mode(-1, 1, 2.0),
                    mode(2, 1, 3.3),
                ],
                4,
            )
            .unwrap(),
        ] {
            for check in algebra_report(&space).unwrap() {
                assert!(check.passed, "{check:?}");
            }
        }
    }

    #[test]
    fn broken_degeneracy_is_flagged() {
        let c = broken_degeneracy_check(&pair_space(3), ModeIndex::new(1, 1), 1e-3).unwrap();
        assert!(c.passed && c.residual > 1e-5);
    }

    #[test]
    fn flip_of_radial_mode_is_its_number() {
        let s = SectorSpace::new(vec![mode(0, 1, 1.0), mode(0, 2, 2.0)], 3).unwrap();
        let q = flip(&s, ModeIndex::new(0, 2)).unwrap();
        let n = number(&s, ModeIndex::new(0, 2)).unwrap();
        assert_eq!(max_abs(&(q.matrix - n.matrix)), 0.0);
        assert!(matches!(
            flip(&pair_space(2), ModeIndex::new(2, 1)),
            Err(FockError::UnknownMode(_)) | Err(FockError::NoPartner(_))
        ));
    }

    #[test]
    fn expm_matches_series_and_diagonal() {
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(0.0, 1.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(-30.0, 0.0),
        ]));
        let e = expm(&d);
        assert!((e[(0, 0)] - Complex64::from_polar(1.0, 1.0)).norm() < 1e-14);
        assert!((e[(1, 1)].re - 2f64.exp()).abs() < 1e-13 * 2f64.exp());
        assert!((e[(2, 2)].re - (-30f64).exp()).abs() < 1e-13 * (-30f64).exp());
        // nilpotent: exp([[0,1],[0,0]]) = [[1,1],[0,1]]
        let mut n = CMatrix::zeros(2, 2);
        n[(0, 1)] = Complex64::new(1.0, 0.0);
        let e = expm(&n);
        assert_eq!(e[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(e[(0, 0)], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn conjugations_match_closed_forms() {
        let s = pair_space(6);
        let pi = std::f64::consts::PI;
        let cases = [
            ConjugationCase::Number(ModeIndex::new(1, 1)),
            ConjugationCase::Pair {
                l: 1,
                n: 1,
                axis: Axis::One,
            },
            ConjugationCase::Pair {
                l: 1,
                n: 1,
                axis: Axis::Two,
            },
            ConjugationCase::Pair {
                l: 1,
                n: 1,
                axis: Axis::Three,
            },
        ];
        for case in cases {
            for alpha in [pi, 0.7, -2.3] {
                let o = conjugation_report(&s, case, alpha).unwrap();
                assert!(o.deviation < 1e-10, "{case:?} {o:?}");
                assert!(o.unitarity < 1e-12);
                assert_eq!(o.vacuum_shift, 0.0);
            }
        }
        let d = distinct_space();
        for variant in [MixingVariant::Plus, MixingVariant::Minus] {
            for t in [0.0, 0.4, 2.9] {
                let case = ConjugationCase::Mixing {
                    first: ModeIndex::new(0, 1),
                    second: ModeIndex::new(2, 1),
                    variant,
                    t,
                };
                let o = conjugation_report(&d, case, 1.1).unwrap();
                assert!(o.deviation < 1e-10, "{o:?}");
            }
        }
    }

    #[test]
    fn number_rotation_by_pi_negates() {
        let s = pair_space(4);
        let m = ModeIndex::new(-1, 1);
        let u = unitary(&s, &number(&s, m).unwrap(), std::f64::consts::PI).unwrap();
        let (a, _) = ladder(&s, m).unwrap();
        let got = &u * &a.matrix * u.adjoint();
        assert!(max_abs(&(got + &a.matrix)) < 1e-13);
    }

    #[test]
    fn mixing_generators_are_conserved() {
        let d = distinct_space();
        for variant in [MixingVariant::Plus, MixingVariant::Minus] {
            for t in [0.0, 1.0, 7.5] {
                let (r, vac) = heisenberg_conservation(
                    &d,
                    ModeIndex::new(0, 1),
                    ModeIndex::new(2, 1),
                    variant,
                    t,
                )
                .unwrap();
                assert!(r <= 1e-12, "{r:e}");
                assert_eq!(vac, 0.0);
            }
        }
        // equal frequencies: Q± is time independent and commutes with H
        let s = pair_space(3);
        let (q, dq) = mixing_generator(
            &s,
            ModeIndex::new(1, 1),
            ModeIndex::new(-1, 1),
            MixingVariant::Plus,
            3.0,
        )
        .unwrap();
        assert_eq!(max_abs(&dq), 0.0);
        assert!(max_abs(&commutator(&q.matrix, &hamiltonian(&s).matrix)) < 1e-12);
    }

    #[test]
    fn non_conserving_generators_are_refused() {
        let s = pair_space(2);
        let (a, c) = ladder(&s, ModeIndex::new(1, 1)).unwrap();
        let x = FockOperator::new("x", &a.matrix + &c.matrix);
        assert!(matches!(
            unitary(&s, &x, 1.0),
            Err(FockError::NotNumberConserving(_))
        ));
    }
}
