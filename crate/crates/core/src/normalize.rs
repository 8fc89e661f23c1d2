//! Frames of Levi-null subbundles and the normalization of their coefficients
//! by holomorphic changes of coordinates.
//!
//! A frame is `S_j = sum_h a_{jh} L_h` for `j = 1..n-2`, with `a_{jh}(0) = delta_{jh}`
//! on the leading block. The pipeline removes low-order holomorphic terms,
//! shears `z_{n-1}`, splits into cases and emits a machine-checked certificate.

use std::fmt;

use crate::coeff::GaussianRational;
use crate::linalg;
use crate::poly::{Order, Poly, Var, WeightSystem};
use crate::vfield::{Hypersurface, VectorField, VfieldError};

/// Jet order used when frames over non-rigid hypersurfaces are compared.
pub const VERIFY_JET: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NormalizeError {
    #[error("frame shape: {0}")]
    FrameShape(String),
    #[error("frame is not normalized: {0}")]
    NotNormalized(String),
    #[error("degenerate frame: {0}")]
    Degenerate(String),
    #[error("coordinate change is not invertible: {0}")]
    NonInvertible(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("post-condition failed: {0}")]
    Check(String),
    #[error("no generic slide among {tried} trial values: {failing}")]
    SlideExhausted { tried: usize, failing: String },
    #[error(transparent)]
    Vfield(#[from] VfieldError),
}

/// Coefficient matrix `a_{jh}` (rows `j`, columns `h = 1..n-1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    nz: usize,
    rows: Vec<Vec<Poly>>,
}

impl Frame {
    pub fn new(nz: usize, rows: Vec<Vec<Poly>>) -> Result<Frame, NormalizeError> {
        if rows.is_empty() {
            return Err(NormalizeError::FrameShape("no rows".into()));
        }
        for (j, r) in rows.iter().enumerate() {
            if r.len() != nz {
                return Err(NormalizeError::FrameShape(format!(
                    "row {} has {} entries, expected {}",
                    j + 1,
                    r.len(),
                    nz
                )));
            }
            if r.iter().any(|p| p.nz() != nz) {
                return Err(NormalizeError::FrameShape(format!("row {} has wrong dimension", j + 1)));
            }
        }
        Ok(Frame { nz, rows })
    }

    /// `S_j = L_{cols[j]}`, columns 1-based.
    pub fn coordinate(nz: usize, cols: &[usize]) -> Frame {
        let rows = cols
            .iter()
            .map(|&c| (1..=nz).map(|h| if h == c { Poly::one(nz) } else { Poly::zero(nz) }).collect())
            .collect();
        Frame { nz, rows }
    }

    pub fn nz(&self) -> usize {
        self.nz
    }

    /// Number of generators `s`.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Poly>] {
        &self.rows
    }

    /// `a_{jh}`, 1-based.
    pub fn entry(&self, j: usize, h: usize) -> &Poly {
        &self.rows[j - 1][h - 1]
    }

    /// Column `n-1` of row `j`.
    pub fn last(&self, j: usize) -> &Poly {
        &self.rows[j - 1][self.nz - 1]
    }

    pub fn fields(&self, m: &Hypersurface, jet: u32) -> Vec<VectorField> {
        let ls = m.cr_frame(jet);
        self.rows
            .iter()
            .map(|row| {
                let mut acc = VectorField::zero(self.nz).with_jet(ls[0].jet_order());
                for (a, l) in row.iter().zip(&ls) {
                    if !a.is_zero() {
                        acc = acc.add(&l.mul_poly(a));
                    }
                }
                match acc.jet_order() {
                    Order::Finite(j) => acc.map_coeffs(|_, c| c.truncate(j)),
                    Order::Infinite => acc,
                }
            })
            .collect()
    }

    /// `n - 2` rows with `a_{jh}(0) = delta_{jh}` for `h <= n-2` and `a_{j(n-1)}(0) = 0`.
    pub fn check_normalized(&self) -> Result<(), NormalizeError> {
        if self.nz < 2 {
            return Err(NormalizeError::FrameShape("need n >= 3".into()));
        }
        if self.rows.len() != self.nz - 1 {
            return Err(NormalizeError::FrameShape(format!(
                "expected {} rows, got {}",
                self.nz - 1,
                self.rows.len()
            )));
        }
        for j in 1..self.nz {
            for h in 1..=self.nz {
                let c = self.entry(j, h).constant_term();
                let want = if h == j { GaussianRational::one() } else { GaussianRational::zero() };
                if c != want {
                    return Err(NormalizeError::NotNormalized(format!("a_({},{})(0) = {}", j, h, c)));
                }
            }
        }
        Ok(())
    }

    fn map(&self, f: impl Fn(&Poly) -> Poly) -> Frame {
        Frame { nz: self.nz, rows: self.rows.iter().map(|r| r.iter().map(&f).collect()).collect() }
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, r) in self.rows.iter().enumerate() {
            let parts: Vec<String> = r.iter().map(|p| p.to_string()).collect();
            writeln!(f, "S{}: [{}]", j + 1, parts.join(", "))?;
        }
        Ok(())
    }
}

/// An invertible polynomial change `z' = F(z)`, `w' = w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateChange {
    nz: usize,
    forward: Vec<Poly>,
    inverse: Vec<Poly>,
}

impl CoordinateChange {
    pub fn identity(nz: usize) -> Self {
        let id: Vec<Poly> = (1..=nz).map(|k| Poly::var(nz, Var::Z(k))).collect();
        CoordinateChange { nz, forward: id.clone(), inverse: id }
    }

    /// Both directions supplied; the round trip is verified.
    pub fn new(nz: usize, forward: Vec<Poly>, inverse: Vec<Poly>) -> Result<Self, NormalizeError> {
        let c = CoordinateChange { nz, forward, inverse };
        if c.forward.len() != nz || c.inverse.len() != nz {
            return Err(NormalizeError::FrameShape("change needs one image per z".into()));
        }
        for p in c.forward.iter().chain(&c.inverse) {
            if !p.is_holomorphic() || p.involves(Var::W) || !p.constant_term().is_zero() {
                return Err(NormalizeError::NonInvertible(format!("bad component {}", p)));
            }
        }
        let id = CoordinateChange::identity(nz);
        if c.compose_images(&c.forward, &c.inverse) != id.forward
            || c.compose_images(&c.inverse, &c.forward) != id.forward
        {
            return Err(NormalizeError::NonInvertible("round trip failed".into()));
        }
        Ok(c)
    }

    /// `z'_{n-1} = z_{n-1} - g(z_1..z_{n-2})`
    pub fn shear(nz: usize, g: &Poly) -> Result<Self, NormalizeError> {
        if !g.is_holomorphic() || g.involves(Var::Z(nz)) || g.involves(Var::W) {
            return Err(NormalizeError::Precondition(format!("shear potential {} must be holomorphic in z_1..z_(n-2)", g)));
        }
        let mut fwd = CoordinateChange::identity(nz).forward;
        let mut inv = fwd.clone();
        fwd[nz - 1] = &fwd[nz - 1] - g;
        inv[nz - 1] = &inv[nz - 1] + g;
        CoordinateChange::new(nz, fwd, inv)
    }

    /// `z' = U z`
    pub fn linear(u: &[Vec<GaussianRational>]) -> Result<Self, NormalizeError> {
        let nz = u.len();
        let inv = linalg::inverse(u).ok_or_else(|| NormalizeError::NonInvertible("singular linear part".into()))?;
        let lin = |mat: &[Vec<GaussianRational>]| -> Vec<Poly> {
            mat.iter()
                .map(|row| {
                    let mut p = Poly::zero(nz);
                    for (k, c) in row.iter().enumerate() {
                        p = &p + &Poly::var(nz, Var::Z(k + 1)).scale(c);
                    }
                    p
                })
                .collect()
        };
        CoordinateChange::new(nz, lin(u), lin(&inv))
    }

    /// Exchange `z_a` and `z_b`.
    pub fn swap(nz: usize, a: usize, b: usize) -> Self {
        let mut fwd = CoordinateChange::identity(nz).forward;
        fwd.swap(a - 1, b - 1);
        CoordinateChange { nz, forward: fwd.clone(), inverse: fwd }
    }

    pub fn forward(&self) -> &[Poly] {
        &self.forward
    }

    pub fn inverse(&self) -> &[Poly] {
        &self.inverse
    }

    pub fn is_identity(&self) -> bool {
        *self == CoordinateChange::identity(self.nz)
    }

    fn images(&self, comps: &[Poly]) -> Vec<Poly> {
        let mut v = comps.to_vec();
        v.push(Poly::var(self.nz, Var::W));
        v
    }

    fn compose_images(&self, outer: &[Poly], inner: &[Poly]) -> Vec<Poly> {
        let imgs = self.images(inner);
        outer.iter().map(|p| p.compose(&imgs)).collect()
    }

    /// `p o F^{-1}`
    pub fn pull_inverse(&self, p: &Poly) -> Poly {
        p.compose(&self.images(&self.inverse))
    }

    /// `J_{hl} = d z'_l / d z_h`
    pub fn jacobian(&self) -> Vec<Vec<Poly>> {
        (1..=self.nz)
            .map(|h| self.forward.iter().map(|f| f.derivative(Var::Z(h)).unwrap()).collect())
            .collect()
    }
}

impl fmt::Display for CoordinateChange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .forward
            .iter()
            .enumerate()
            .filter(|(k, p)| **p != Poly::var(self.nz, Var::Z(k + 1)))
            .map(|(k, p)| format!("z{}' = {}", k + 1, p))
            .collect();
        if parts.is_empty() {
            write!(f, "identity")
        } else {
            write!(f, "{}", parts.join("; "))
        }
    }
}

/// One step of a normalization, in the order applied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Substitution {
    /// `w' = w - h(z)`
    WShift(Poly),
    Change(CoordinateChange),
    /// Rows `a` and `b` exchanged together with `z_a`, `z_b`.
    Permute(usize, usize),
    /// `S_1 <- S_1 + sum alpha_l S_l` together with `z_l' = z_l - alpha_l z_1`.
    Slide(Vec<GaussianRational>),
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Substitution::WShift(h) => write!(f, "w' = w - ({})", h),
            Substitution::Change(c) => write!(f, "{}", c),
            Substitution::Permute(a, b) => write!(f, "swap z{} <-> z{} and S{} <-> S{}", a, b, a, b),
            Substitution::Slide(alpha) => {
                let parts: Vec<String> = alpha
                    .iter()
                    .enumerate()
                    .map(|(i, c)| format!("z{}' = z{} - ({})*z1", i + 2, i + 2, c))
                    .collect();
                write!(f, "slide {}", parts.join("; "))
            }
        }
    }
}

/// Push a frame and hypersurface forward by a change of the z-coordinates:
/// `F_*(L_i) = sum_j (dz'_j/dz_i) L'_j`, so `a' = (a J) o F^{-1}`. The new fields
/// are checked against the direct pushforward of the `dw` components.
pub fn pushforward_frame(
    frame: &Frame,
    m: &Hypersurface,
    change: &CoordinateChange,
) -> Result<(Frame, Hypersurface), NormalizeError> {
    let nz = frame.nz;
    let rho2 = change.pull_inverse(m.rho());
    let m2 = Hypersurface::new(rho2)?;
    let jac = change.jacobian();
    let rows2: Vec<Vec<Poly>> = frame
        .rows
        .iter()
        .map(|row| {
            (0..nz)
                .map(|l| {
                    let mut acc = Poly::zero(nz);
                    for h in 0..nz {
                        if !row[h].is_zero() && !jac[h][l].is_zero() {
                            acc = &acc + &(&row[h] * &jac[h][l]);
                        }
                    }
                    change.pull_inverse(&acc)
                })
                .collect()
        })
        .collect();
    let f2 = Frame { nz, rows: rows2 };
    let old = frame.fields(m, VERIFY_JET);
    let new = f2.fields(&m2, VERIFY_JET);
    for (j, (a, b)) in old.iter().zip(&new).enumerate() {
        let mut pushed = change.pull_inverse(a.coeff(Var::W));
        let mut got = b.coeff(Var::W).clone();
        if let Order::Finite(d) = a.jet_order().min(b.jet_order()) {
            pushed = pushed.truncate(d);
            got = got.truncate(d);
        }
        if pushed != got {
            return Err(NormalizeError::Check(format!("pushforward of S{} is not tangent", j + 1)));
        }
    }
    Ok((f2, m2))
}

/// Push forward by `w' = w - h(z)`: the L-coefficients only get composed.
pub fn pushforward_wshift(frame: &Frame, m: &Hypersurface, h: &Poly) -> Result<(Frame, Hypersurface), NormalizeError> {
    let nz = frame.nz;
    let mut imgs: Vec<Poly> = (1..=nz).map(|k| Poly::var(nz, Var::Z(k))).collect();
    imgs.push(&Poly::var(nz, Var::W) + h);
    let m2 = Hypersurface::new(m.rho().compose(&imgs))?;
    Ok((frame.map(|p| p.compose(&imgs)), m2))
}

/// Remove holomorphic terms of `chi(z, 0, 0)` through degree `order` by
/// `w' = w - h(z)`. Returns the new hypersurface and `h`.
pub fn kill_holomorphic_terms(m: &Hypersurface, order: u32) -> Result<(Hypersurface, Poly), NormalizeError> {
    let nz = m.nz();
    let mut cur = m.clone();
    let mut total = Poly::zero(nz);
    for _ in 0..=order {
        let off = cur.chi_at_w0().holomorphic_part().truncate(order);
        if off.is_zero() {
            return Ok((cur, total));
        }
        let (_, next) = pushforward_wshift(&Frame::coordinate(nz, &[1]), &cur, &off)?;
        total = &total + &off;
        cur = next;
    }
    Err(NormalizeError::Check("holomorphic terms did not terminate".into()))
}

fn slice(p: &Poly) -> Poly {
    p.restrict_zero(&[Var::Z(p.nz()), Var::W])
}

/// Degree `l0` part of `a_{j(n-1)}` on `z_{n-1} = w = 0`.
pub fn sliced_part(frame: &Frame, j: usize, l0: u32) -> Poly {
    slice(frame.last(j)).hom_part(l0)
}

/// `min_j ord_0 a_{j(n-1)}(z_1..z_{n-2}, 0, conj, 0)`.
pub fn l0_star(frame: &Frame) -> Order {
    (1..=frame.rank()).map(|j| slice(frame.last(j)).vanishing_order()).min().unwrap_or(Order::Infinite)
}

/// `min(l0_star, a_contact)`
pub fn l0(frame: &Frame, a_contact: u32) -> u32 {
    match l0_star(frame) {
        Order::Finite(k) => k.min(a_contact),
        Order::Infinite => a_contact,
    }
}

fn z_slots_before(nz: usize, j: usize) -> Vec<usize> {
    (1..j).map(|k| Var::Z(k).index(nz).unwrap()).collect()
}

/// Holomorphic degree-`l` part of row `j` with `z_1 = .. = z_{j-1} = 0`.
fn shear_residue(frame: &Frame, j: usize, l: u32) -> Poly {
    sliced_part(frame, j, l).holomorphic_part().set_zero_slots(&z_slots_before(frame.nz, j))
}

#[derive(Clone, Debug)]
pub struct ShearOutcome {
    pub frame: Frame,
    pub hypersurface: Hypersurface,
    pub changes: Vec<CoordinateChange>,
    pub l0_star_before: Order,
    pub l0_star_after: Order,
}

/// One pass `j = 1..n-2` of `z_{n-1} -> z_{n-1} - int_0^{z_j} a^{(l0*)}_{j(n-1)}(0,..,0,xi,z_{j+1},..) dxi`.
pub fn shear_normalize(frame: &Frame, m: &Hypersurface) -> Result<ShearOutcome, NormalizeError> {
    frame.check_normalized()?;
    let nz = frame.nz;
    let before = l0_star(frame);
    let mut f = frame.clone();
    let mut mm = m.clone();
    let mut changes = Vec::new();
    let l = match before {
        Order::Infinite => {
            return Ok(ShearOutcome { frame: f, hypersurface: mm, changes, l0_star_before: before, l0_star_after: before })
        }
        Order::Finite(0) => return Err(NormalizeError::Degenerate("a_(j,n-1)(0) != 0 on the slice".into())),
        Order::Finite(l) => l,
    };
    for j in 1..nz {
        let r = shear_residue(&f, j, l);
        if r.is_zero() {
            continue;
        }
        let g = r.integrate_slot(Var::Z(j).index(nz).unwrap());
        let c = CoordinateChange::shear(nz, &g)?;
        let (f2, m2) = pushforward_frame(&f, &mm, &c)?;
        f = f2;
        mm = m2;
        changes.push(c);
    }
    let after = l0_star(&f);
    if after < before {
        return Err(NormalizeError::Check(format!("l0* decreased from {} to {}", before, after)));
    }
    for j in 1..nz {
        if !shear_residue(&f, j, l).is_zero() {
            return Err(NormalizeError::Check(format!("holomorphic residue left in row {}", j)));
        }
    }
    Ok(ShearOutcome { frame: f, hypersurface: mm, changes, l0_star_before: before, l0_star_after: after })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseSplit {
    /// Every degree-`l0` part is holomorphic; the first nonzero row is `j0 >= 2`.
    Holomorphic { j0: usize },
    /// Row `j` is the first with a non-holomorphic degree-`l0` part.
    NonHolomorphic { j: usize },
}

pub fn case_split(frame: &Frame, l0: u32) -> Result<CaseSplit, NormalizeError> {
    let parts: Vec<Poly> = (1..=frame.rank()).map(|j| sliced_part(frame, j, l0)).collect();
    if let Some(j) = parts.iter().position(|p| !p.is_holomorphic()) {
        return Ok(CaseSplit::NonHolomorphic { j: j + 1 });
    }
    match parts.iter().position(|p| !p.is_zero()) {
        None => Err(NormalizeError::Degenerate(format!("no row attains l0 = {}", l0))),
        Some(0) => Err(NormalizeError::Precondition("row 1 keeps a holomorphic part; shear first".into())),
        Some(j) => Ok(CaseSplit::Holomorphic { j0: j + 1 }),
    }
}

/// Exchange `S_1, S_j` together with `z_1, z_j`.
pub fn permute_to_front(frame: &Frame, m: &Hypersurface, j: usize) -> Result<(Frame, Hypersurface), NormalizeError> {
    let (mut f, m2) = pushforward_frame(frame, m, &CoordinateChange::swap(frame.nz, 1, j))?;
    f.rows.swap(0, j - 1);
    f.check_normalized()?;
    Ok((f, m2))
}

/// `sum_l z_l a^{(l0)}_{l(n-1)}` on the slice.
pub fn euler_sum(frame: &Frame, l0: u32) -> Poly {
    let nz = frame.nz;
    let mut acc = Poly::zero(nz);
    for j in 1..=frame.rank() {
        acc = &acc + &(&Poly::var(nz, Var::Z(j)) * &sliced_part(frame, j, l0));
    }
    acc
}

/// The mixed condition: every coefficient of `z^H conj(z)^J`, `|J| != 0`, in
/// `sum_l z_l a^{(l0)}_l` vanishes.
pub fn mixed_condition_holds(frame: &Frame, l0: u32) -> bool {
    let s = euler_sum(frame, l0);
    (&s - &s.holomorphic_part()).is_zero()
}

/// Default trial values for slides: Gaussian integers with `|re|, |im| <= 2`,
/// smallest first.
pub fn default_slide_trials() -> Vec<GaussianRational> {
    let mut v: Vec<(i64, i64)> = (-2..=2).flat_map(|a| (-2..=2).map(move |b| (a, b))).collect();
    v.sort_by_key(|&(a, b)| (a.abs() + b.abs(), -a, -b));
    v.into_iter().map(|(a, b)| GaussianRational::gaussian_int(a, b)).collect()
}

#[derive(Clone, Debug)]
pub struct SlideOutcome {
    pub frame: Frame,
    pub hypersurface: Hypersurface,
    pub alpha: Vec<GaussianRational>,
}

fn slide_apply(
    frame: &Frame,
    m: &Hypersurface,
    alpha: &[GaussianRational],
) -> Result<(Frame, Hypersurface), NormalizeError> {
    let nz = frame.nz;
    let mut f = frame.clone();
    for (i, a) in alpha.iter().enumerate() {
        let lam = i + 2;
        for h in 0..nz {
            let add = frame.rows[lam - 1][h].scale(a);
            f.rows[0][h] = &f.rows[0][h] + &add;
        }
    }
    let mut u: Vec<Vec<GaussianRational>> = (0..nz)
        .map(|r| (0..nz).map(|c| if r == c { GaussianRational::one() } else { GaussianRational::zero() }).collect())
        .collect();
    for (i, a) in alpha.iter().enumerate() {
        u[i + 1][0] = -a;
    }
    let c = CoordinateChange::linear(&u)?;
    pushforward_frame(&f, m, &c)
}

/// Part of `sigma` on the `(z_1, z_{n-1})` slice.
fn two_var_slice(p: &Poly) -> Poly {
    let nz = p.nz();
    let vars: Vec<Var> = (2..nz).map(Var::Z).chain(std::iter::once(Var::W)).collect();
    p.restrict_zero(&vars)
}

fn slide_conditions(frame: &Frame, m: &Hypersurface, l0: u32, w: &WeightSystem) -> Result<(), String> {
    let mm = w.w;
    let rho_m = m.chi_at_w0().weighted_part(mm, w);
    if two_var_slice(&rho_m).is_zero() {
        return Err("rho^[m] vanishes on the (z1, z_(n-1)) slice".into());
    }
    let a1 = two_var_slice(&sliced_part(frame, 1, l0));
    if (&a1 - &a1.holomorphic_part()).is_zero() {
        return Err("a'_(1,n-1) has no non-holomorphic terms on the (z1, conj z1) slice".into());
    }
    Ok(())
}

/// Generic linear slide making both slide conditions hold; trial tuples are
/// visited in lexicographic order of `trials`.
pub fn generic_slide(
    frame: &Frame,
    m: &Hypersurface,
    l0: u32,
    w: &WeightSystem,
    trials: &[GaussianRational],
) -> Result<SlideOutcome, NormalizeError> {
    let count = frame.nz.saturating_sub(2);
    let total = trials.len().pow(count as u32);
    let mut last = String::new();
    for idx in 0..total {
        let mut rest = idx;
        let mut alpha = vec![GaussianRational::zero(); count];
        for slot in (0..count).rev() {
            alpha[slot] = trials[rest % trials.len()].clone();
            rest /= trials.len();
        }
        let (f2, m2) = slide_apply(frame, m, &alpha)?;
        match slide_conditions(&f2, &m2, l0, w) {
            Ok(()) => return Ok(SlideOutcome { frame: f2, hypersurface: m2, alpha }),
            Err(e) => last = e,
        }
    }
    Err(NormalizeError::SlideExhausted { tried: total, failing: last })
}

#[derive(Clone, Debug)]
pub struct EulerOutcome {
    pub frame: Frame,
    pub hypersurface: Hypersurface,
    pub g: Poly,
    pub change: CoordinateChange,
}

/// `g = -(1/(l0+1)) sum_l z_l a^{(l0)}_l(z, 0)` from the holomorphic parts.
pub fn euler_potential(frame: &Frame, l0: u32) -> Poly {
    euler_sum(frame, l0)
        .holomorphic_part()
        .scale(&GaussianRational::rational(-1, l0 as i64 + 1))
}

/// `z_{n-1} -> z_{n-1} + g`, after which `sum_l z_l a^{(l0)}_l = 0` exactly.
pub fn euler_shear(frame: &Frame, m: &Hypersurface, l0: u32) -> Result<EulerOutcome, NormalizeError> {
    if !mixed_condition_holds(frame, l0) {
        return Err(NormalizeError::Precondition("mixed coefficients of sum z_l a_l do not vanish".into()));
    }
    let g = euler_potential(frame, l0);
    let change = CoordinateChange::shear(frame.nz, &-&g)?;
    let (f2, m2) = pushforward_frame(frame, m, &change)?;
    if !euler_sum(&f2, l0).is_zero() {
        return Err(NormalizeError::Check("sum z_l a_l did not vanish".into()));
    }
    for j in 1..=frame.rank() {
        let before = sliced_part(frame, j, l0);
        let after = sliced_part(&f2, j, l0);
        if &before - &before.holomorphic_part() != &after - &after.holomorphic_part() {
            return Err(NormalizeError::Check(format!("mixed coefficients of row {} changed", j)));
        }
    }
    Ok(EulerOutcome { frame: f2, hypersurface: m2, g, change })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum NormalCase {
    #[serde(rename = "I")]
    I,
    #[serde(rename = "II")]
    II,
    #[serde(rename = "III")]
    III,
    #[serde(rename = "high-order")]
    HighOrder,
}

impl fmt::Display for NormalCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormalCase::I => "I",
            NormalCase::II => "II",
            NormalCase::III => "III",
            NormalCase::HighOrder => "high-order",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct NormalizationCertificate {
    pub case: NormalCase,
    pub l0: u32,
    pub a_contact: u32,
    pub k: Option<u32>,
    pub m: Option<u32>,
    pub j0: Option<usize>,
    pub permutation: Option<(usize, usize)>,
    pub alpha: Vec<GaussianRational>,
    pub euler_g: Option<Poly>,
    pub substitutions: Vec<String>,
    pub rho: Poly,
    pub frame: Vec<Vec<Poly>>,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub steps: Vec<Substitution>,
}

impl NormalizationCertificate {
    pub fn hypersurface(&self) -> Hypersurface {
        Hypersurface::new(self.rho.clone()).expect("certificate hypersurface")
    }

    pub fn frame(&self) -> Frame {
        Frame::new(self.rho.nz(), self.frame.clone()).expect("certificate frame")
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn check(out: &mut Vec<Check>, name: &str, passed: bool) {
    out.push(Check { name: name.to_string(), passed });
}

/// Checks of the three normal forms, recomputed from scratch.
pub fn verify_case(
    case: NormalCase,
    frame: &Frame,
    m: &Hypersurface,
    l0: u32,
    w: &WeightSystem,
    j0: Option<usize>,
) -> Vec<Check> {
    let nz = frame.nz;
    let mut out = Vec::new();
    let parts: Vec<Poly> = (1..=frame.rank()).map(|j| sliced_part(frame, j, l0)).collect();
    let rho_m = m.chi_at_w0().weighted_part(w.w, w);
    check(&mut out, "frame normalized at 0", frame.check_normalized().is_ok());
    match case {
        NormalCase::I => {
            let j0 = j0.unwrap_or(0);
            check(&mut out, "j0 in [2, n-2]", j0 >= 2 && j0 < nz);
            check(&mut out, "all a^(l0) holomorphic", parts.iter().all(|p| p.is_holomorphic()));
            check(&mut out, "a^(l0)_j = 0 for j < j0", parts.iter().take(j0.saturating_sub(1)).all(|p| p.is_zero()));
            if j0 >= 2 && j0 < nz {
                let p = &parts[j0 - 1];
                check(&mut out, "a^(l0)_j0 != 0", !p.is_zero());
                check(
                    &mut out,
                    "a^(l0)_j0(0,..,0,z_j0,..) = 0",
                    p.set_zero_slots(&z_slots_before(nz, j0)).is_zero(),
                );
            }
        }
        NormalCase::II => {
            let a1 = &parts[0];
            let a1_slice = two_var_slice(a1);
            check(&mut out, "a^(l0)_1(z1, conj z1) != 0", !a1_slice.is_zero());
            check(&mut out, "a^(l0)_1(z1, 0) = 0", a1_slice.holomorphic_part().is_zero());
            check(&mut out, "a^(l0)_1(z, 0) = 0", a1.holomorphic_part().is_zero());
            let r = two_var_slice(&rho_m);
            check(&mut out, "rho^[m](z1, z_(n-1)) != 0", !r.is_zero());
            check(&mut out, "rho^[m](z1, z_(n-1)) has no holomorphic terms", r.holomorphic_part().is_zero());
        }
        NormalCase::III => {
            check(&mut out, "some a^(l0)_j non-holomorphic", parts.iter().any(|p| !p.is_holomorphic()));
            check(&mut out, "sum z_j a^(l0)_j = 0", euler_sum(frame, l0).is_zero());
            check(&mut out, "rho^[m] != 0", !rho_m.is_zero());
            check(&mut out, "rho^[m] has no holomorphic terms", rho_m.holomorphic_part().is_zero());
        }
        NormalCase::HighOrder => {}
    }
    out
}

/// Full normalization. `a_contact` is the contact type `a^(n-2)(M, 0)`.
pub fn normalize_full(
    m: &Hypersurface,
    frame: &Frame,
    a_contact: u32,
) -> Result<NormalizationCertificate, NormalizeError> {
    normalize_with_trials(m, frame, a_contact, &default_slide_trials())
}

pub fn normalize_with_trials(
    m: &Hypersurface,
    frame: &Frame,
    a_contact: u32,
    trials: &[GaussianRational],
) -> Result<NormalizationCertificate, NormalizeError> {
    frame.check_normalized()?;
    if frame.nz != m.nz() {
        return Err(NormalizeError::FrameShape("frame and hypersurface dimensions differ".into()));
    }
    let nz = frame.nz;
    let mut steps = Vec::new();

    let (m1, h) = kill_holomorphic_terms(m, a_contact)?;
    let (mut f, mut mm) = if h.is_zero() {
        (frame.clone(), m1)
    } else {
        steps.push(Substitution::WShift(h.clone()));
        pushforward_wshift(frame, m, &h)?
    };

    let l0 = loop {
        let l = l0_star(&f);
        if l >= Order::Finite(a_contact) {
            let mut checks = Vec::new();
            check(&mut checks, "l0* >= a_contact", true);
            check(&mut checks, "frame normalized at 0", f.check_normalized().is_ok());
            return Ok(finish(NormalCase::HighOrder, a_contact, a_contact, None, None, None, Vec::new(), None, steps, &f, &mm, checks));
        }
        let out = shear_normalize(&f, &mm)?;
        steps.extend(out.changes.into_iter().map(Substitution::Change));
        f = out.frame;
        mm = out.hypersurface;
        if out.l0_star_after == out.l0_star_before {
            break out.l0_star_before.finite().unwrap();
        }
    };

    let mval = match mm.chi_at_w0().weighted_vanishing_order(&WeightSystem::standard(nz, l0 + 1, 1)) {
        Order::Finite(v) => v,
        Order::Infinite => return Err(NormalizeError::Degenerate("chi(z, conj z, 0) vanishes identically".into())),
    };
    let w = WeightSystem::standard(nz, l0 + 1, mval);
    let invariant = |f: &Frame, mm: &Hypersurface| -> Result<(), NormalizeError> {
        if l0_star(f) != Order::Finite(l0) {
            return Err(NormalizeError::Check(format!("l0 changed from {} to {}", l0, l0_star(f))));
        }
        if mm.chi_at_w0().weighted_vanishing_order(&w) != Order::Finite(mval) {
            return Err(NormalizeError::Check("weighted order m changed".into()));
        }
        Ok(())
    };

    let split = case_split(&f, l0)?;
    let (case, j0, perm, alpha, g) = match split {
        CaseSplit::Holomorphic { j0 } => (NormalCase::I, Some(j0), None, Vec::new(), None),
        CaseSplit::NonHolomorphic { j } => {
            let mut perm = None;
            if j != 1 {
                let (f2, m2) = permute_to_front(&f, &mm, j)?;
                steps.push(Substitution::Permute(1, j));
                perm = Some((1, j));
                let out = shear_normalize(&f2, &m2)?;
                steps.extend(out.changes.into_iter().map(Substitution::Change));
                f = out.frame;
                mm = out.hypersurface;
                invariant(&f, &mm)?;
            }
            if !mixed_condition_holds(&f, l0) {
                let s = generic_slide(&f, &mm, l0, &w, trials)?;
                if s.alpha.iter().any(|a| !a.is_zero()) {
                    steps.push(Substitution::Slide(s.alpha.clone()));
                }
                invariant(&s.frame, &s.hypersurface)?;
                let out = shear_normalize(&s.frame, &s.hypersurface)?;
                steps.extend(out.changes.into_iter().map(Substitution::Change));
                f = out.frame;
                mm = out.hypersurface;
                invariant(&f, &mm)?;
                (NormalCase::II, None, perm, s.alpha, None)
            } else {
                let e = euler_shear(&f, &mm, l0)?;
                if !e.change.is_identity() {
                    steps.push(Substitution::Change(e.change.clone()));
                }
                f = e.frame;
                mm = e.hypersurface;
                invariant(&f, &mm)?;
                (NormalCase::III, None, perm, Vec::new(), Some(e.g))
            }
        }
    };
    let checks = verify_case(case, &f, &mm, l0, &w, j0);
    if let Some(c) = checks.iter().find(|c| !c.passed) {
        return Err(NormalizeError::Check(format!("case {}: {}", case, c.name)));
    }
    Ok(finish(case, l0, a_contact, Some(w.w), j0, perm, alpha, g, steps, &f, &mm, checks))
}

#[allow(clippy::too_many_arguments)]
fn finish(
    case: NormalCase,
    l0: u32,
    a_contact: u32,
    m: Option<u32>,
    j0: Option<usize>,
    permutation: Option<(usize, usize)>,
    alpha: Vec<GaussianRational>,
    euler_g: Option<Poly>,
    steps: Vec<Substitution>,
    f: &Frame,
    mm: &Hypersurface,
    checks: Vec<Check>,
) -> NormalizationCertificate {
    NormalizationCertificate {
        case,
        l0,
        a_contact,
        k: m.map(|_| l0 + 1),
        m,
        j0,
        permutation,
        alpha,
        euler_g,
        substitutions: steps.iter().map(|s| s.to_string()).collect(),
        rho: mm.rho().clone(),
        frame: f.rows.clone(),
        checks,
        steps,
    }
}
