//! Finite type invariants: contact orders along holomorphic immersions,
//! commutator type, Levi-form type, weighted truncation and sweeps.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::coeff::GaussianRational;
use crate::grammar::{render, t_name};
use crate::linalg;
use crate::normalize::{self, Frame, NormalizeError};
use crate::poly::{Monomial, Order, Poly, Var, WeightSystem};
use crate::vfield::{Hypersurface, VectorField};

/// Upper bound on enumerated candidates in one search.
pub const SEARCH_LIMIT: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantError {
    #[error("invalid immersion: {0}")]
    Immersion(String),
    #[error("empty coefficient set")]
    EmptyCoeffSet,
    #[error("search space of {0} candidates exceeds the limit")]
    SearchTooLarge(usize),
    #[error("k = {k} is not below m = {m}{}", if *.contact_branch { " (l0 taken from the contact type)" } else { "" })]
    KNotBelowM { k: u32, m: u32, contact_branch: bool },
    #[error("weighted order m = {m} exceeds the contact type {a}")]
    MExceedsContact { m: u32, a: u32 },
    #[error("chi(z, conj z, 0) vanishes identically")]
    FlatChi,
    #[error("bad word '{0}'")]
    BadWord(String),
    #[error(transparent)]
    Frame(#[from] NormalizeError),
}

/// An exact value, or a report that the search cap was exceeded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeValue {
    Exact(u32),
    Exceeds(u32),
}

impl fmt::Display for TypeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeValue::Exact(k) => write!(f, "{}", k),
            TypeValue::Exceeds(c) => write!(f, ">{}", c),
        }
    }
}

impl serde::Serialize for TypeValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            TypeValue::Exact(k) => s.serialize_u32(*k),
            TypeValue::Exceeds(_) => s.serialize_str(&self.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct TypeReport {
    pub invariant: String,
    pub value: TypeValue,
    pub witness: Option<String>,
    pub cap: u32,
    /// `None` when every computation was exact.
    pub jet_order: Option<u32>,
}

/// Holomorphic `phi: (C^s, 0) -> (C^n, 0)`, components are polynomials in `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoloImmersion {
    comps: Vec<Poly>,
}

impl HoloImmersion {
    pub fn new(comps: Vec<Poly>) -> Result<Self, InvariantError> {
        let s = comps.first().map(|c| c.nz()).ok_or_else(|| InvariantError::Immersion("no components".into()))?;
        for c in &comps {
            if c.nz() != s || !c.is_holomorphic() || c.involves(Var::W) {
                return Err(InvariantError::Immersion(format!("component {} is not holomorphic in t", c)));
            }
            if !c.constant_term().is_zero() {
                return Err(InvariantError::Immersion("phi(0) != 0".into()));
            }
        }
        let jac: Vec<Vec<GaussianRational>> = comps
            .iter()
            .map(|c| (1..=s).map(|k| c.coeff_of(&[(Var::Z(k), 1)])).collect())
            .collect();
        if linalg::rank(&jac) != s {
            return Err(InvariantError::Immersion("Jacobian at 0 has rank below s".into()));
        }
        Ok(HoloImmersion { comps })
    }

    /// `t` in coordinate `coord` (0-based over `z_1..z_{n-1}, w`), zero elsewhere.
    pub fn axis(n: usize, coord: usize) -> Self {
        let comps = (0..n)
            .map(|i| if i == coord { Poly::var(1, Var::Z(1)) } else { Poly::zero(1) })
            .collect();
        HoloImmersion { comps }
    }

    pub fn s(&self) -> usize {
        self.comps[0].nz()
    }

    pub fn components(&self) -> &[Poly] {
        &self.comps
    }
}

impl fmt::Display for HoloImmersion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = t_name(self.s());
        let parts: Vec<String> = self.comps.iter().map(|c| render(c, &names)).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `ord_0 rho(phi(t), conj phi(t))`
pub fn order_of_contact(m: &Hypersurface, phi: &HoloImmersion) -> Result<Order, InvariantError> {
    if phi.comps.len() != m.n() {
        return Err(InvariantError::Immersion(format!("{} components for n = {}", phi.comps.len(), m.n())));
    }
    Ok(m.rho().compose(&phi.comps).vanishing_order())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Exponent vectors in `vars` variables with total degree in `lo..=hi`, ascending.
fn exponent_vectors(vars: usize, lo: u32, hi: u32) -> Vec<Vec<u16>> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
        if i == cur.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e as u16;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    for d in lo..=hi {
        rec(0, d, &mut vec![0; vars], &mut out);
    }
    out
}

fn mixed_radix(mut idx: usize, base: usize, len: usize) -> Vec<usize> {
    let mut digits = vec![0; len];
    for d in digits.iter_mut().rev() {
        *d = idx % base;
        idx /= base;
    }
    digits
}

/// Exhaustive lower bound for the contact type `a^(s)`: immersions are graphs
/// over each `s`-subset of coordinates, the other components being polynomials
/// of degree `1..=degree_cap` with coefficients in `coeff_set`.
pub fn contact_search(
    m: &Hypersurface,
    s: usize,
    degree_cap: u32,
    coeff_set: &[GaussianRational],
) -> Result<TypeReport, InvariantError> {
    let n = m.n();
    if s == 0 || s > n {
        return Err(InvariantError::Immersion(format!("s = {} out of range for n = {}", s, n)));
    }
    if coeff_set.is_empty() {
        return Err(InvariantError::EmptyCoeffSet);
    }
    let monos = exponent_vectors(s, 1, degree_cap);
    let free = n - s;
    let slots = free * monos.len();
    let per_pin = (coeff_set.len() as f64).powi(slots as i32);
    let pins = combinations(n, s);
    let total_f = per_pin * pins.len() as f64;
    if total_f > SEARCH_LIMIT as f64 {
        return Err(InvariantError::SearchTooLarge(total_f as usize));
    }
    let per_pin = per_pin as usize;
    let total = per_pin * pins.len();
    let build = |idx: usize| -> HoloImmersion {
        let pin = &pins[idx / per_pin];
        let digits = mixed_radix(idx % per_pin, coeff_set.len(), slots);
        let mut comps = Vec::with_capacity(n);
        let mut f = 0;
        for i in 0..n {
            if let Some(k) = pin.iter().position(|&p| p == i) {
                comps.push(Poly::var(s, Var::Z(k + 1)));
            } else {
                let mut terms = Vec::new();
                for (mi, e) in monos.iter().enumerate() {
                    let c = &coeff_set[digits[f * monos.len() + mi]];
                    if !c.is_zero() {
                        let mut ex = vec![0; 2 * (s + 1)];
                        ex[..s].copy_from_slice(e);
                        terms.push((Monomial(ex), c.clone()));
                    }
                }
                comps.push(Poly::from_terms(s, terms));
                f += 1;
            }
        }
        HoloImmersion { comps }
    };
    let rho = m.rho();
    let best = (0..total)
        .into_par_iter()
        .map(|idx| {
            let phi = build(idx);
            (rho.compose(&phi.comps).vanishing_order(), idx)
        })
        .reduce(
            || (Order::Finite(0), usize::MAX),
            |a, b| {
                if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                }
            },
        );
    let witness = build(best.1);
    let bound = rho.degree().unwrap_or(0) * degree_cap;
    let value = match best.0 {
        Order::Finite(k) => TypeValue::Exact(k),
        Order::Infinite => TypeValue::Exceeds(bound),
    };
    Ok(TypeReport {
        invariant: format!("contact a^({})", s),
        value,
        witness: Some(witness.to_string()),
        cap: degree_cap,
        jet_order: None,
    })
}

/// A generator `S_j` or its conjugate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen {
    pub index: usize,
    pub barred: bool,
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{}{}", self.index, if self.barred { "b" } else { "" })
    }
}

impl FromStr for Gen {
    type Err = InvariantError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || InvariantError::BadWord(s.to_string());
        let body = s.strip_prefix('S').ok_or_else(bad)?;
        let (num, barred) = match body.strip_suffix('b') {
            Some(x) => (x, true),
            None => (body, false),
        };
        let index: usize = num.parse().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        Ok(Gen { index, barred })
    }
}

/// Right-nested commutator `[Y_m, [.., [Y_2, Y_1]]]`, stored innermost first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BracketWord(pub Vec<Gen>);

impl fmt::Display for BracketWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = self.0[0].to_string();
        for g in &self.0[1..] {
            s = format!("[{},{}]", g, s);
        }
        f.write_str(&s)
    }
}

impl FromStr for BracketWord {
    type Err = InvariantError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut rest = s.trim();
        let mut outer = Vec::new();
        while let Some(inner) = rest.strip_prefix('[') {
            let inner = inner.strip_suffix(']').ok_or_else(|| InvariantError::BadWord(s.to_string()))?;
            let comma = inner.find(',').ok_or_else(|| InvariantError::BadWord(s.to_string()))?;
            outer.push(inner[..comma].trim().parse::<Gen>()?);
            rest = inner[comma + 1..].trim();
        }
        let mut gens = vec![rest.parse::<Gen>()?];
        gens.extend(outer.into_iter().rev());
        Ok(BracketWord(gens))
    }
}

/// Derivations `G_k .. G_1` applied to the Levi trace, `G_1` first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DerivationWord(pub Vec<Gen>);

impl fmt::Display for DerivationWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = "tr".to_string();
        for g in &self.0 {
            s = format!("{}({})", g, s);
        }
        f.write_str(&s)
    }
}

impl FromStr for DerivationWord {
    type Err = InvariantError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut rest = s.trim();
        let mut outer = Vec::new();
        while rest != "tr" {
            let open = rest.find('(').ok_or_else(|| InvariantError::BadWord(s.to_string()))?;
            let inner = rest[open + 1..].strip_suffix(')').ok_or_else(|| InvariantError::BadWord(s.to_string()))?;
            outer.push(rest[..open].parse::<Gen>()?);
            rest = inner.trim();
        }
        outer.reverse();
        Ok(DerivationWord(outer))
    }
}

/// `[S_1, conj S_1, S_2, conj S_2, ...]` over `m`.
pub fn generators(m: &Hypersurface, frame: &Frame, jet: u32) -> Vec<VectorField> {
    frame
        .fields(m, jet)
        .into_iter()
        .flat_map(|s| {
            let c = s.conj();
            [s, c]
        })
        .collect()
}

fn gen_list(rank: usize) -> Vec<Gen> {
    (1..=rank).flat_map(|j| [Gen { index: j, barred: false }, Gen { index: j, barred: true }]).collect()
}

fn gen_slot(g: Gen) -> usize {
    2 * (g.index - 1) + g.barred as usize
}

pub fn evaluate_bracket_word(gens: &[VectorField], word: &BracketWord) -> Result<VectorField, InvariantError> {
    let get = |g: Gen| gens.get(gen_slot(g)).ok_or_else(|| InvariantError::BadWord(word.to_string()));
    let mut x = get(word.0[0])?.clone();
    for g in &word.0[1..] {
        x = get(*g)?.lie_bracket(&x);
    }
    Ok(x)
}

pub fn evaluate_derivation_word(gens: &[VectorField], trace: &Poly, word: &DerivationWord) -> Result<Poly, InvariantError> {
    let mut p = trace.clone();
    for g in &word.0 {
        p = gens.get(gen_slot(*g)).ok_or_else(|| InvariantError::BadWord(word.to_string()))?.apply(&p);
    }
    Ok(p)
}

/// Breadth-first right-nested brackets; level `l` holds every nonzero word of
/// length `l`. `visit` returns `true` to stop early.
fn bracket_levels(
    gens: &[VectorField],
    names: &[Gen],
    cap: u32,
    mut visit: impl FnMut(u32, &[(Vec<Gen>, VectorField)]) -> bool,
) {
    let mut level: Vec<(Vec<Gen>, VectorField)> =
        names.iter().zip(gens).filter(|(_, x)| !x.is_zero()).map(|(g, x)| (vec![*g], x.clone())).collect();
    for len in 1..=cap {
        if visit(len, &level) || len == cap || level.is_empty() {
            return;
        }
        level = level
            .par_iter()
            .flat_map_iter(|(w, x)| {
                names.iter().zip(gens).filter_map(move |(g, y)| {
                    let b = y.lie_bracket(x);
                    if b.is_zero() {
                        None
                    } else {
                        let mut w2 = w.clone();
                        w2.push(*g);
                        Some((w2, b))
                    }
                })
            })
            .collect();
    }
}

fn jet_for(m: &Hypersurface, cap: u32) -> (u32, Option<u32>) {
    if m.is_rigid() {
        (0, None)
    } else {
        (cap, Some(cap))
    }
}

/// Least length `l` in `2..=cap` of a right-nested commutator over
/// `{S_j, conj S_j}` with `<G, d rho>(0) != 0`.
pub fn commutator_type(m: &Hypersurface, frame: &Frame, cap: u32) -> Result<TypeReport, InvariantError> {
    let (jet, jet_used) = jet_for(m, cap);
    let gens = generators(m, frame, jet);
    let names = gen_list(frame.rank());
    let mut found: Option<(u32, String)> = None;
    bracket_levels(&gens, &names, cap, |len, level| {
        if len < 2 {
            return false;
        }
        if let Some((w, _)) = level.iter().find(|(_, x)| !m.pair_at_origin(x).is_zero()) {
            found = Some((len, BracketWord(w.clone()).to_string()));
            return true;
        }
        false
    });
    Ok(match found {
        Some((len, w)) => TypeReport {
            invariant: "commutator t".into(),
            value: TypeValue::Exact(len),
            witness: Some(w),
            cap,
            jet_order: jet_used,
        },
        None => TypeReport { invariant: "commutator t".into(), value: TypeValue::Exceeds(cap), witness: None, cap, jet_order: jet_used },
    })
}

/// `sum_j <[S_j, conj S_j], d rho>`
pub fn levi_trace(m: &Hypersurface, frame: &Frame) -> Poly {
    levi_trace_with(m, &generators(m, frame, normalize::VERIFY_JET))
}

fn levi_trace_with(m: &Hypersurface, gens: &[VectorField]) -> Poly {
    let mut acc = Poly::zero(m.nz());
    for pair in gens.chunks(2) {
        let b = pair[0].lie_bracket(&pair[1]);
        let mut t = m.pair(&b);
        if let Order::Finite(j) = b.jet_order() {
            t = t.truncate(j);
        }
        acc = &acc + &t;
    }
    acc
}

fn derivation_levels(
    gens: &[VectorField],
    names: &[Gen],
    trace: &Poly,
    max_len: u32,
    mut visit: impl FnMut(u32, &[(Vec<Gen>, Poly)]) -> bool,
) {
    let mut level = vec![(Vec::new(), trace.clone())];
    if trace.is_zero() {
        level.clear();
    }
    for len in 0..=max_len {
        if visit(len, &level) || len == max_len || level.is_empty() {
            return;
        }
        level = level
            .par_iter()
            .flat_map_iter(|(w, p)| {
                names.iter().zip(gens).filter_map(move |(g, y)| {
                    let q = y.apply(p);
                    if q.is_zero() {
                        None
                    } else {
                        let mut w2 = w.clone();
                        w2.push(*g);
                        Some((w2, q))
                    }
                })
            })
            .collect();
    }
}

/// Least `m` in `2..=cap` such that some word of `m - 2` derivations from
/// `{S_j, conj S_j}` applied to the Levi trace is nonzero at 0.
pub fn levi_type(m: &Hypersurface, frame: &Frame, cap: u32) -> Result<TypeReport, InvariantError> {
    let (jet, jet_used) = jet_for(m, cap);
    let gens = generators(m, frame, jet);
    let names = gen_list(frame.rank());
    let trace = levi_trace_with(m, &gens);
    let mut found = None;
    derivation_levels(&gens, &names, &trace, cap.saturating_sub(2), |len, level| {
        if let Some((w, _)) = level.iter().find(|(_, p)| !p.constant_term().is_zero()) {
            found = Some((len + 2, DerivationWord(w.clone()).to_string()));
            return true;
        }
        false
    });
    Ok(match found {
        Some((v, w)) => TypeReport {
            invariant: "Levi c".into(),
            value: TypeValue::Exact(v),
            witness: Some(w),
            cap,
            jet_order: jet_used,
        },
        None => TypeReport { invariant: "Levi c".into(), value: TypeValue::Exceeds(cap), witness: None, cap, jet_order: jet_used },
    })
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct SweepReport {
    pub commutator: TypeReport,
    pub levi: TypeReport,
    pub frames_examined: usize,
    pub commutator_frame: Vec<Vec<Poly>>,
    pub levi_frame: Vec<Vec<Poly>>,
}

/// Sweep over `s`-frames in graph form: for each `s`-subset `P` of columns,
/// `a_{j,P_i} = delta_{ji}` and the other columns are polynomials in `z, conj z`
/// of degree `<= frame_degree_cap` with coefficients in `coeff_set`.
pub fn type_sweep(
    m: &Hypersurface,
    s: usize,
    frame_degree_cap: u32,
    coeff_set: &[GaussianRational],
    cap: u32,
) -> Result<SweepReport, InvariantError> {
    let nz = m.nz();
    if s == 0 || s > nz {
        return Err(InvariantError::Frame(NormalizeError::FrameShape(format!("s = {} out of range", s))));
    }
    if coeff_set.is_empty() {
        return Err(InvariantError::EmptyCoeffSet);
    }
    let zvars = exponent_vectors(2 * nz, 0, frame_degree_cap);
    let monos: Vec<Monomial> = zvars
        .iter()
        .map(|e| {
            let mut ex = vec![0; 2 * (nz + 1)];
            ex[..nz].copy_from_slice(&e[..nz]);
            ex[nz + 1..2 * nz + 1].copy_from_slice(&e[nz..]);
            Monomial(ex)
        })
        .collect();
    let pins = combinations(nz, s);
    let slots = s * (nz - s) * monos.len();
    let per_pin_f = (coeff_set.len() as f64).powi(slots as i32);
    if per_pin_f * pins.len() as f64 > SEARCH_LIMIT as f64 {
        return Err(InvariantError::SearchTooLarge((per_pin_f * pins.len() as f64) as usize));
    }
    let per_pin = per_pin_f as usize;
    let total = per_pin * pins.len();
    let build = |idx: usize| -> Frame {
        let pin = &pins[idx / per_pin];
        let digits = mixed_radix(idx % per_pin, coeff_set.len(), slots);
        let mut d = 0;
        let rows = (0..s)
            .map(|j| {
                (0..nz)
                    .map(|h| {
                        if let Some(k) = pin.iter().position(|&p| p == h) {
                            if k == j {
                                Poly::one(nz)
                            } else {
                                Poly::zero(nz)
                            }
                        } else {
                            let terms: Vec<(Monomial, GaussianRational)> = monos
                                .iter()
                                .map(|mo| {
                                    let c = coeff_set[digits[d]].clone();
                                    d += 1;
                                    (mo.clone(), c)
                                })
                                .collect();
                            Poly::from_terms(nz, terms)
                        }
                    })
                    .collect()
            })
            .collect();
        Frame::new(nz, rows).expect("sweep frame")
    };
    let results: Vec<(TypeReport, TypeReport)> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let f = build(idx);
            (commutator_type(m, &f, cap).unwrap(), levi_type(m, &f, cap).unwrap())
        })
        .collect();
    let pick = |sel: &dyn Fn(&(TypeReport, TypeReport)) -> &TypeReport| -> usize {
        let mut best = 0;
        for (i, r) in results.iter().enumerate() {
            if sel(r).value > sel(&results[best]).value {
                best = i;
            }
        }
        best
    };
    let ci = pick(&|r| &r.0);
    let li = pick(&|r| &r.1);
    Ok(SweepReport {
        commutator: results[ci].0.clone(),
        levi: results[li].1.clone(),
        frames_examined: total,
        commutator_frame: build(ci).rows().to_vec(),
        levi_frame: build(li).rows().to_vec(),
    })
}

/// Weights `(1, .., 1, k = l0 + 1)` and `m` = weighted order of `chi(z, conj z, 0)`.
pub fn assign_weights(m: &Hypersurface, frame: &Frame, a_contact: u32) -> Result<WeightSystem, InvariantError> {
    let nz = m.nz();
    let contact_branch = normalize::l0_star(frame) >= Order::Finite(a_contact);
    let k = normalize::l0(frame, a_contact) + 1;
    let mval = match m.chi_at_w0().weighted_vanishing_order(&WeightSystem::standard(nz, k, 1)) {
        Order::Finite(v) => v,
        Order::Infinite => return Err(InvariantError::FlatChi),
    };
    if k >= mval {
        return Err(InvariantError::KNotBelowM { k, m: mval, contact_branch });
    }
    if mval > a_contact {
        return Err(InvariantError::MExceedsContact { m: mval, a: a_contact });
    }
    Ok(WeightSystem::standard(nz, k, mval))
}

/// Keep in each coefficient the part making `X` weighted homogeneous of degree -1.
pub fn truncate_field(x: &VectorField, w: &WeightSystem) -> VectorField {
    x.map_coeffs(|slot, c| c.weighted_part(w.weight_of_slot(slot) - 1, w)).with_jet(Order::Infinite)
}

/// `a_{jh} -> a_{jh}^{[wt(z_h) - 1]}`
pub fn truncate_frame(frame: &Frame, w: &WeightSystem) -> Frame {
    let rows = frame
        .rows()
        .iter()
        .map(|r| r.iter().enumerate().map(|(h, a)| a.weighted_part(w.z[h] - 1, w)).collect())
        .collect();
    Frame::new(frame.nz(), rows).expect("truncated frame")
}

/// `rho^0 = -2 Re w + chi^[m](z, conj z, 0)`
pub fn truncated_model(m: &Hypersurface, w: &WeightSystem) -> Hypersurface {
    let nz = m.nz();
    let lin = -&(&Poly::var(nz, Var::W) + &Poly::var(nz, Var::Wbar));
    Hypersurface::new(&lin + &m.chi_at_w0().weighted_part(w.w, w)).expect("truncated model")
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum VanishingReport {
    Pass { words_checked: usize },
    Violation { word: String },
}

impl VanishingReport {
    pub fn passed(&self) -> bool {
        matches!(self, VanishingReport::Pass { .. })
    }
}

/// `<Y, d rho0>(0) = 0` for every right-nested word of length `<= cap`.
pub fn bracket_pairing_vanishing(m0: &Hypersurface, b0: &Frame, cap: u32) -> VanishingReport {
    let gens = generators(m0, b0, 0);
    let names = gen_list(b0.rank());
    let mut checked = 0;
    let mut bad = None;
    bracket_levels(&gens, &names, cap, |_, level| {
        checked += level.len();
        if let Some((w, _)) = level.iter().find(|(_, x)| !m0.pair_at_origin(x).is_zero()) {
            bad = Some(BracketWord(w.clone()).to_string());
            return true;
        }
        false
    });
    match bad {
        Some(word) => VanishingReport::Violation { word },
        None => VanishingReport::Pass { words_checked: checked },
    }
}

/// Every derivation word of length `<= cap - 2` applied to the Levi trace of
/// `b0` vanishes at 0.
pub fn levi_trace_vanishing(m0: &Hypersurface, b0: &Frame, cap: u32) -> VanishingReport {
    let gens = generators(m0, b0, 0);
    let names = gen_list(b0.rank());
    let trace = levi_trace_with(m0, &gens);
    let mut checked = 0;
    let mut bad = None;
    derivation_levels(&gens, &names, &trace, cap.saturating_sub(2), |_, level| {
        checked += level.len();
        if let Some((w, _)) = level.iter().find(|(_, p)| !p.constant_term().is_zero()) {
            bad = Some(DerivationWord(w.clone()).to_string());
            return true;
        }
        false
    });
    match bad {
        Some(word) => VanishingReport::Violation { word },
        None => VanishingReport::Pass { words_checked: checked },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct SpanReport {
    pub dim: usize,
    pub n: usize,
    pub class: String,
    pub words_checked: usize,
}

/// Real dimension at 0 of the span of `Re X, Im X` over bracket words of length
/// `<= cap`. The word set is closed under conjugation, so this is the complex
/// rank of the values at 0.
pub fn bracket_span_dim(m0: &Hypersurface, b0: &Frame, cap: u32) -> SpanReport {
    let gens = generators(m0, b0, 0);
    let names = gen_list(b0.rank());
    let mut vals: Vec<Vec<GaussianRational>> = Vec::new();
    let mut checked = 0;
    bracket_levels(&gens, &names, cap, |_, level| {
        checked += level.len();
        for (_, x) in level {
            let v = x.value_at_origin();
            if v.iter().any(|c| !c.is_zero()) {
                vals.push(v);
            }
        }
        vals = independent_rows(std::mem::take(&mut vals));
        false
    });
    let dim = linalg::rank(&vals);
    let n = m0.n();
    let class = match dim as i64 - 2 * n as i64 {
        -4 => "2n-4",
        -3 => "2n-3",
        -2 => "2n-2",
        _ => "other",
    };
    SpanReport { dim, n, class: class.into(), words_checked: checked }
}

/// Keep a maximal independent subset so the row list stays small.
fn independent_rows(rows: Vec<Vec<GaussianRational>>) -> Vec<Vec<GaussianRational>> {
    let mut kept: Vec<Vec<GaussianRational>> = Vec::new();
    for r in rows {
        kept.push(r);
        if linalg::rank(&kept) < kept.len() {
            kept.pop();
        }
    }
    kept
}
