//! Plurisubharmonicity tests: exact Levi matrices, principal-minor checks on
//! exact grids, and checkers for the monomial, bidegree, independence and
//! product-form criteria.

use num_traits::Signed;
use rayon::prelude::*;

use crate::coeff::GaussianRational;
use crate::linalg;
use crate::poly::{Poly, Var, WeightSystem};

/// Densification levels tried after the base grid.
pub const MAX_DOUBLINGS: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PshError {
    #[error("polynomial is not real")]
    NotReal,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("unexpected variable: {0}")]
    UnexpectedVariable(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

/// Complex Hessian `d^2 p / dv_i d conj(v_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeviMatrix {
    pub vars: Vec<Var>,
    pub entries: Vec<Vec<Poly>>,
}

/// Over `z_1..z_{n-1}`, and `w` as well when `p` involves it.
pub fn levi_matrix(p: &Poly) -> Result<LeviMatrix, PshError> {
    if !p.is_real() {
        return Err(PshError::NotReal);
    }
    let nz = p.nz();
    let mut vars: Vec<Var> = (1..=nz).map(Var::Z).collect();
    if p.involves(Var::W) || p.involves(Var::Wbar) {
        vars.push(Var::W);
    }
    let entries = vars
        .iter()
        .map(|&a| {
            let da = p.derivative(a).unwrap();
            vars.iter().map(|&b| da.derivative(b.conj()).unwrap()).collect()
        })
        .collect();
    Ok(LeviMatrix { vars, entries })
}

fn principal_subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (1u32..(1 << n)).map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect()).collect();
    out.sort_by_key(|s: &Vec<usize>| s.len());
    out
}

impl LeviMatrix {
    fn point_for(&self, nz: usize, coords: &[GaussianRational]) -> Vec<GaussianRational> {
        let mut pt = vec![GaussianRational::zero(); nz + 1];
        for (v, c) in self.vars.iter().zip(coords) {
            pt[v.index(nz).unwrap()] = c.clone();
        }
        pt
    }

    /// First principal minor that is negative at `coords`, if any.
    fn negative_minor(&self, nz: usize, coords: &[GaussianRational]) -> Option<Vec<usize>> {
        let pt = self.point_for(nz, coords);
        let vals: Vec<Vec<GaussianRational>> =
            self.entries.iter().map(|r| r.iter().map(|e| e.eval(&pt).unwrap()).collect()).collect();
        for s in principal_subsets(self.vars.len()) {
            let sub: Vec<Vec<GaussianRational>> = s.iter().map(|&i| s.iter().map(|&j| vals[i][j].clone()).collect()).collect();
            let d = linalg::determinant(&sub);
            if d.re.is_negative() {
                return Some(s);
            }
        }
        None
    }
}

/// Whether the Levi matrix of the real polynomial `p` is positive semidefinite at
/// `coords` (one value per Levi variable), by all principal minors.
pub fn psd_at(p: &Poly, coords: &[GaussianRational]) -> Result<bool, PshError> {
    let lm = levi_matrix(p)?;
    if coords.len() != lm.vars.len() {
        return Err(PshError::Precondition(format!("expected {} coordinates", lm.vars.len())));
    }
    Ok(lm.negative_minor(p.nz(), coords).is_none())
}

/// Coordinate values shared by every axis of a sample grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    pub values: Vec<GaussianRational>,
    pub level: u32,
}

impl Default for Grid {
    /// `{0, +-1, +-i, +-1/2, 1+i, 1-i}`
    fn default() -> Self {
        let g = GaussianRational::gaussian_int;
        Grid {
            values: vec![
                g(0, 0),
                g(1, 0),
                g(-1, 0),
                g(0, 1),
                g(0, -1),
                GaussianRational::rational(1, 2),
                GaussianRational::rational(-1, 2),
                g(1, 1),
                g(1, -1),
            ],
            level: 0,
        }
    }
}

impl Grid {
    /// Scale every value by `scale`.
    pub fn scaled(&self, scale: &GaussianRational) -> Grid {
        Grid { values: self.values.iter().map(|v| v * scale).collect(), level: self.level }
    }

    /// Add the rotated and rescaled copy `v * (2 + i) / 3` of every nonzero value.
    pub fn densify(&self) -> Grid {
        let r = GaussianRational::from_parts(2, 3, 1, 3);
        let mut values = self.values.clone();
        for v in &self.values {
            if !v.is_zero() {
                let x = v * &r;
                if !values.contains(&x) {
                    values.push(x);
                }
            }
        }
        Grid { values, level: self.level + 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum PshVerdict {
    NotRefuted { points: usize, level: u32 },
    Refuted { point: Vec<GaussianRational>, minor: Vec<usize>, level: u32 },
}

impl PshVerdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, PshVerdict::Refuted { .. })
    }
}

/// Scan every grid point except the origin; the first failing point in
/// lexicographic grid order is reported.
pub fn sampled_psh(p: &Poly, grid: &Grid) -> Result<PshVerdict, PshError> {
    let lm = levi_matrix(p)?;
    let dim = lm.vars.len();
    let base = grid.values.len();
    let total = base.pow(dim as u32);
    let nz = p.nz();
    let coords = |mut idx: usize| -> Vec<GaussianRational> {
        let mut c = vec![GaussianRational::zero(); dim];
        for slot in (0..dim).rev() {
            c[slot] = grid.values[idx % base].clone();
            idx /= base;
        }
        c
    };
    let hit = (0..total).into_par_iter().find_map_first(|idx| {
        let c = coords(idx);
        if c.iter().all(|x| x.is_zero()) {
            return None;
        }
        lm.negative_minor(nz, &c).map(|minor| (c, minor))
    });
    Ok(match hit {
        Some((point, minor)) => PshVerdict::Refuted { point, minor, level: grid.level },
        None => PshVerdict::NotRefuted { points: total - 1, level: grid.level },
    })
}

/// [`sampled_psh`] on `grid`, densified up to [`MAX_DOUBLINGS`] times.
pub fn sampled_psh_dense(p: &Poly, grid: &Grid) -> Result<PshVerdict, PshError> {
    let mut g = grid.clone();
    loop {
        let v = sampled_psh(p, &g)?;
        if v.is_refuted() || g.level >= grid.level + MAX_DOUBLINGS {
            return Ok(v);
        }
        g = g.densify();
    }
}

fn only_slots(p: &Poly, allowed: &[usize]) -> Result<(), PshError> {
    for slot in 0..p.nvars() {
        if !allowed.contains(&slot) && p.involves_slot(slot) {
            return Err(PshError::UnexpectedVariable(Var::from_index(slot, p.nz()).to_string()));
        }
    }
    Ok(())
}

/// `h h_{xi conj xi} - h_xi h_{conj xi}` for homogeneous `h` in `z1` alone.
pub fn monomial_obstruction(h: &Poly) -> Result<Poly, PshError> {
    let nz = h.nz();
    let (a, b) = (Var::Z(1).index(nz).unwrap(), Var::Zbar(1).index(nz).unwrap());
    only_slots(h, &[a, b])?;
    if !h.is_homogeneous() {
        return Err(PshError::NotHomogeneous);
    }
    let hx = h.derivative_slot(a);
    let hxb = h.derivative_slot(b);
    Ok(&(h * &hx.derivative_slot(b)) - &(&hx * &hxb))
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BidegreeVerdict {
    Pass,
    Fail(String),
    NotApplicable,
}

/// Necessary condition for `h` real, of degree `k_l` in `(z_l, conj z_l)`,
/// to be psh when `h_{z1 conj z1} != 0`: every `k_l` even and the coefficient
/// of `prod |z_l|^{k_l}` positive.
pub fn bidegree_psh_check(h: &Poly, k: &[u32]) -> Result<BidegreeVerdict, PshError> {
    let nz = h.nz();
    if !h.is_real() {
        return Err(PshError::NotReal);
    }
    if k.is_empty() || k.len() > nz || k.contains(&0) {
        return Err(PshError::Precondition("k_l must be positive, one per variable".into()));
    }
    let slots: Vec<usize> = (1..=k.len()).flat_map(|l| [Var::Z(l).index(nz).unwrap(), Var::Zbar(l).index(nz).unwrap()]).collect();
    only_slots(h, &slots)?;
    for (mono, _) in h.terms() {
        for (l, &kl) in k.iter().enumerate() {
            if (mono.0[slots[2 * l]] + mono.0[slots[2 * l + 1]]) as u32 != kl {
                return Err(PshError::Precondition(format!("a term is not of degree {} in z{}", kl, l + 1)));
            }
        }
    }
    let (a, b) = (slots[0], slots[1]);
    if h.derivative_slot(a).derivative_slot(b).is_zero() {
        return Ok(BidegreeVerdict::NotApplicable);
    }
    if let Some(l) = k.iter().position(|x| x % 2 == 1) {
        return Ok(BidegreeVerdict::Fail(format!("k{} = {} is odd", l + 1, k[l])));
    }
    let factors: Vec<(Var, u16)> = (1..=k.len())
        .flat_map(|l| [(Var::Z(l), (k[l - 1] / 2) as u16), (Var::Zbar(l), (k[l - 1] / 2) as u16)])
        .collect();
    let c = h.coeff_of(&factors);
    if !c.is_positive_real() {
        return Ok(BidegreeVerdict::Fail(format!("coefficient of prod |z_l|^k_l is {}", c)));
    }
    Ok(BidegreeVerdict::Pass)
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum LemmaVerdict {
    Pass { note: Option<String> },
    /// The conclusion fails and so does a hypothesis.
    HypothesisRefuted { reason: String, point: Option<Vec<GaussianRational>> },
    /// The conclusion fails while every hypothesis survived the checks.
    Escalated { reason: String },
}

impl LemmaVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, LemmaVerdict::Pass { .. })
    }
}

/// When the conclusion fails, check the psh hypotheses on `re_f`.
fn diagnose(re_f: &Poly, grid: &Grid, failed: String) -> Result<LemmaVerdict, PshError> {
    if re_f.is_zero() {
        return Ok(LemmaVerdict::HypothesisRefuted { reason: "real part vanishes".into(), point: None });
    }
    if !re_f.holomorphic_part().is_zero() {
        return Ok(LemmaVerdict::HypothesisRefuted { reason: "real part has holomorphic terms".into(), point: None });
    }
    match sampled_psh_dense(re_f, grid)? {
        PshVerdict::Refuted { point, .. } => {
            Ok(LemmaVerdict::HypothesisRefuted { reason: "real part is not psh".into(), point: Some(point) })
        }
        PshVerdict::NotRefuted { .. } => Ok(LemmaVerdict::Escalated { reason: failed }),
    }
}

/// `f` weighted homogeneous, holomorphic in `z_1..z_k`, with `Re f` psh and free
/// of holomorphic terms, must not depend on `z_1..z_k`.
pub fn holo_independence_check(f: &Poly, k: usize, w: &WeightSystem, grid: &Grid) -> Result<LemmaVerdict, PshError> {
    if !f.is_weighted_homogeneous(w) {
        return Err(PshError::NotHomogeneous);
    }
    if k > f.nz() {
        return Err(PshError::Precondition("k exceeds the number of variables".into()));
    }
    let depends = (1..=k).find(|&j| f.involves(Var::Z(j)) || f.involves(Var::Zbar(j)));
    let Some(j) = depends else {
        return Ok(LemmaVerdict::Pass { note: None });
    };
    if let Some(b) = (1..=k).find(|&j| f.involves(Var::Zbar(j))) {
        return Ok(LemmaVerdict::HypothesisRefuted { reason: format!("f is not holomorphic in z{}", b), point: None });
    }
    diagnose(&f.real_part(), grid, format!("f depends on z{}", j))
}

/// For `B(z1)` of degree `k` and `f, g(z2)` of degree `m` with `Re(B f + z1^k g)`
/// psh and free of holomorphic terms: `k, m` even and
/// `Re(B f + z1^k g) = alpha |z1|^k |z2|^m`, `alpha > 0`.
pub fn product_form_check(b: &Poly, f: &Poly, g: &Poly, k: u32, m: u32, grid: &Grid) -> Result<LemmaVerdict, PshError> {
    let nz = b.nz();
    if nz < 2 {
        return Err(PshError::Precondition("needs z1 and z2".into()));
    }
    let s1 = [Var::Z(1).index(nz).unwrap(), Var::Zbar(1).index(nz).unwrap()];
    let s2 = [Var::Z(2).index(nz).unwrap(), Var::Zbar(2).index(nz).unwrap()];
    only_slots(b, &s1)?;
    only_slots(f, &s2)?;
    only_slots(g, &s2)?;
    if b.is_zero() || f.is_zero() {
        return Err(PshError::Precondition("B and f must be nonzero".into()));
    }
    if !b.is_homogeneous() || b.degree() != Some(k) {
        return Err(PshError::Precondition(format!("B must be homogeneous of degree {}", k)));
    }
    for p in [f, g] {
        if !p.is_zero() && (!p.is_homogeneous() || p.degree() != Some(m)) {
            return Err(PshError::Precondition(format!("f and g must be homogeneous of degree {}", m)));
        }
    }
    if !b.holomorphic_part().is_zero() || !b.conj().holomorphic_part().is_zero() {
        return Err(PshError::Precondition("B(z1, 0) and B(0, conj z1) must vanish".into()));
    }
    let z1k = Poly::term(nz, GaussianRational::one(), &[(Var::Z(1), k as u16)]);
    let re = (&(b * f) + &(&z1k * g)).real_part();
    if k.is_multiple_of(2) && m.is_multiple_of(2) {
        let (hk, hm) = ((k / 2) as u16, (m / 2) as u16);
        let alpha = re.coeff_of(&[(Var::Z(1), hk), (Var::Zbar(1), hk), (Var::Z(2), hm), (Var::Zbar(2), hm)]);
        let target = Poly::term(nz, alpha.clone(), &[(Var::Z(1), hk), (Var::Zbar(1), hk), (Var::Z(2), hm), (Var::Zbar(2), hm)]);
        if alpha.is_positive_real() && re == target {
            return Ok(LemmaVerdict::Pass { note: Some(format!("alpha = {}", alpha)) });
        }
    }
    diagnose(&re, grid, "Re F is not of product form".into())
}
