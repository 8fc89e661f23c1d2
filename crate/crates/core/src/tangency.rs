//! The tangency equation `f_{conj z1} + conj(A) f_{conj z2} = 0` on `C^2` for
//! weighted homogeneous `f`: layer solver, dilation and the psh sweep over
//! enumerated families.

use rayon::prelude::*;
use std::collections::BTreeMap;

use crate::coeff::GaussianRational;
use crate::poly::{Monomial, Poly, Var, WeightSystem};
use crate::psh::{self, Grid, PshError, PshVerdict};

const NZ: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TangencyError {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
    #[error("unexpected variable: {0}")]
    UnexpectedVariable(String),
    #[error("dilation factor is zero")]
    ZeroDilation,
    #[error(transparent)]
    Psh(#[from] PshError),
}

fn slot(v: Var) -> usize {
    v.index(NZ).unwrap()
}

fn only_z1(p: &Poly) -> Result<(), TangencyError> {
    if p.nz() != NZ {
        return Err(TangencyError::InvalidProblem(format!("expected 2 variables, got {}", p.nz())));
    }
    let ok = [slot(Var::Z(1)), slot(Var::Zbar(1))];
    match (0..p.nvars()).find(|s| !ok.contains(s) && p.involves_slot(*s)) {
        Some(s) => Err(TangencyError::UnexpectedVariable(Var::from_index(s, NZ).to_string())),
        None => Ok(()),
    }
}

/// `A(z1, conj z1)` with weights `z1 = 1`, `z2 = k` and target weighted degree `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangencyProblem {
    a: Poly,
    k: u32,
    m: u32,
}

impl TangencyProblem {
    pub fn new(a: Poly, k: u32, m: u32) -> Result<Self, TangencyError> {
        only_z1(&a)?;
        if k < 2 || m <= k {
            return Err(TangencyError::InvalidProblem(format!("need 1 < k < m, got k = {}, m = {}", k, m)));
        }
        if a.is_zero() {
            return Err(TangencyError::InvalidProblem("A is zero".into()));
        }
        if !a.is_homogeneous() || a.degree() != Some(k - 1) {
            return Err(TangencyError::InvalidProblem(format!("A must be homogeneous of degree {}", k - 1)));
        }
        if !a.holomorphic_part().is_zero() {
            return Err(TangencyError::InvalidProblem("A has holomorphic terms".into()));
        }
        Ok(TangencyProblem { a, k, m })
    }

    pub fn a(&self) -> &Poly {
        &self.a
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn weights(&self) -> WeightSystem {
        WeightSystem::new(vec![1, self.k], self.m)
    }

    /// Highest `z2`-layer, `floor(m / k)`.
    pub fn m0(&self) -> u32 {
        self.m / self.k
    }
}

/// `F(P)`, the term-wise antiderivative in `conj z1`.
pub fn antiderivative_zbar1(p: &Poly) -> Result<Poly, TangencyError> {
    only_z1(p)?;
    Ok(p.integrate_slot(slot(Var::Zbar(1))))
}

/// `f_{conj z1} + conj(A) f_{conj z2}`
pub fn residual(t: &TangencyProblem, f: &Poly) -> Poly {
    &f.derivative_slot(slot(Var::Zbar(1))) + &(&t.a.conj() * &f.derivative_slot(slot(Var::Zbar(2))))
}

/// Terms of total degree `j` in `(z2, conj z2)`.
pub fn z2_layer(f: &Poly, j: u32) -> Poly {
    let (a, b) = (slot(Var::Z(2)), slot(Var::Zbar(2)));
    f.filter(|mono| (mono.0[a] + mono.0[b]) as u32 == j)
}

/// `z2 -> delta z2`.
pub fn dilate(p: &Poly, delta: &GaussianRational) -> Result<Poly, TangencyError> {
    if delta.is_zero() {
        return Err(TangencyError::ZeroDilation);
    }
    let mut map = BTreeMap::new();
    map.insert(Var::Z(2), Poly::term(p.nz(), delta.clone(), &[(Var::Z(2), 1)]));
    Ok(p.substitute(&map).expect("dilation map is conjugation symmetric"))
}

/// The problem solved by the dilated solutions: `A -> A / delta`.
pub fn dilate_problem(t: &TangencyProblem, delta: &GaussianRational) -> Result<TangencyProblem, TangencyError> {
    let inv = delta.inv().ok_or(TangencyError::ZeroDilation)?;
    TangencyProblem::new(t.a.scale(&inv), t.k, t.m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    /// Layer of the seed.
    pub layer: u32,
    /// `z1^(m - k j) z2^b conj(z2)^(j - b)`
    pub seed: Poly,
    pub f: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionFamily {
    pub problem: TangencyProblem,
    pub basis: Vec<BasisElement>,
}

impl SolutionFamily {
    /// One line per free parameter: the seeds by layer.
    pub fn free_parameters(&self) -> Vec<String> {
        self.basis.iter().map(|e| format!("layer {}: {}", e.layer, e.seed)).collect()
    }

    /// `sum c_i basis_i`
    pub fn combine(&self, coeffs: &[GaussianRational]) -> Poly {
        let mut f = Poly::zero(NZ);
        for (c, e) in coeffs.iter().zip(&self.basis) {
            if !c.is_zero() {
                f = &f + &e.f.scale(c);
            }
        }
        f
    }
}

/// Every solution is a sum of seeds `h_j` (free of `conj z1`, layer `j`) each
/// completed downwards by `f^[i] = -F(conj(A) d_{conj z2} f^[i+1])`.
pub fn solution_space(t: &TangencyProblem) -> SolutionFamily {
    let abar = t.a.conj();
    let zb1 = slot(Var::Zbar(1));
    let zb2 = slot(Var::Zbar(2));
    let mut basis = Vec::new();
    for j in (0..=t.m0()).rev() {
        for b in 0..=j {
            let seed = Poly::term(
                NZ,
                GaussianRational::one(),
                &[(Var::Z(1), (t.m - t.k * j) as u16), (Var::Z(2), b as u16), (Var::Zbar(2), (j - b) as u16)],
            );
            let mut f = seed.clone();
            let mut layer = seed.clone();
            for _ in 0..j {
                layer = -&(&abar * &layer.derivative_slot(zb2)).integrate_slot(zb1);
                f = &f + &layer;
            }
            basis.push(BasisElement { layer: j, seed, f });
        }
    }
    SolutionFamily { problem: t.clone(), basis }
}

/// Monomials allowed in `A`: `z1^a conj(z1)^(k-1-a)`, `a < k - 1`.
pub fn a_monomials(k: u32) -> Vec<Poly> {
    (0..k - 1)
        .map(|a| Poly::term(NZ, GaussianRational::one(), &[(Var::Z(1), a as u16), (Var::Zbar(1), (k - 1 - a) as u16)]))
        .collect()
}

/// All nonzero coefficient vectors of length `len` over `set`, in base-`|set|` order.
fn combinations(set: &[GaussianRational], len: usize) -> Vec<Vec<GaussianRational>> {
    let base = set.len();
    let total = base.pow(len as u32);
    (0..total)
        .map(|mut idx| {
            (0..len)
                .map(|_| {
                    let c = set[idx % base].clone();
                    idx /= base;
                    c
                })
                .collect::<Vec<_>>()
        })
        .filter(|v| v.iter().any(|c| !c.is_zero()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Survivor {
    pub a: String,
    pub f: String,
    pub points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HarnessVerdict {
    Consistent,
    InconclusiveCandidate,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct HarnessReport {
    pub k: u32,
    pub m: u32,
    pub problems: usize,
    pub candidates: usize,
    /// `Re f = 0`.
    pub vacuous: usize,
    /// `Re f` has holomorphic terms.
    pub skipped: usize,
    pub refuted: usize,
    pub survivors: Vec<Survivor>,
    pub verdict: HarnessVerdict,
}

enum Outcome {
    Vacuous,
    Skipped,
    Refuted,
    Survivor(usize),
}

/// Enumerate `A` and `f` over `coeff_set` and refute psh of every admissible
/// nonzero `Re f`, densifying the grid up to [`psh::MAX_DOUBLINGS`] times.
pub fn tangency_harness(k: u32, m: u32, coeff_set: &[GaussianRational], grid: &Grid) -> Result<HarnessReport, TangencyError> {
    if k < 2 || m <= k {
        return Err(TangencyError::InvalidProblem(format!("need 1 < k < m, got k = {}, m = {}", k, m)));
    }
    let monos = a_monomials(k);
    let mut jobs = Vec::new();
    for ac in combinations(coeff_set, monos.len()) {
        let mut a = Poly::zero(NZ);
        for (c, mo) in ac.iter().zip(&monos) {
            a = &a + &mo.scale(c);
        }
        let fam = solution_space(&TangencyProblem::new(a, k, m)?);
        for fc in combinations(coeff_set, fam.basis.len()) {
            jobs.push((jobs.len(), fam.problem.a.clone(), fam.combine(&fc)));
        }
    }
    let problems = combinations(coeff_set, monos.len()).len();
    let outcomes: Vec<Result<Outcome, PshError>> = jobs
        .par_iter()
        .map(|(_, _, f)| {
            let re = f.real_part();
            if re.is_zero() {
                return Ok(Outcome::Vacuous);
            }
            if !re.holomorphic_part().is_zero() {
                return Ok(Outcome::Skipped);
            }
            Ok(match psh::sampled_psh_dense(&re, grid)? {
                PshVerdict::Refuted { .. } => Outcome::Refuted,
                PshVerdict::NotRefuted { points, .. } => Outcome::Survivor(points),
            })
        })
        .collect();
    let mut report = HarnessReport {
        k,
        m,
        problems,
        candidates: jobs.len(),
        vacuous: 0,
        skipped: 0,
        refuted: 0,
        survivors: Vec::new(),
        verdict: HarnessVerdict::Consistent,
    };
    for ((_, a, f), o) in jobs.iter().zip(outcomes) {
        match o? {
            Outcome::Vacuous => report.vacuous += 1,
            Outcome::Skipped => report.skipped += 1,
            Outcome::Refuted => report.refuted += 1,
            Outcome::Survivor(points) => report.survivors.push(Survivor { a: a.to_string(), f: f.to_string(), points }),
        }
    }
    if !report.survivors.is_empty() {
        report.verdict = HarnessVerdict::InconclusiveCandidate;
    }
    Ok(report)
}

/// Seeds have weighted degree `m`; used by tests.
pub fn is_weighted_degree(f: &Poly, t: &TangencyProblem) -> bool {
    let w = t.weights();
    f.terms().all(|(mono, _): (&Monomial, _)| w.weight(mono) == t.m)
}
