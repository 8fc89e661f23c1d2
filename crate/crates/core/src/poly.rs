//! Sparse polynomials in `z_1..z_{n-1}, w` and their conjugates, treated as
//! independent formal variables.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::coeff::GaussianRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("dimension mismatch: {0} vs {1} z-variables")]
    DimensionMismatch(usize, usize),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("substitution breaks conjugation symmetry at {0}")]
    ConjugationSymmetry(String),
    #[error("point has {got} coordinates, expected {expected}")]
    PointArity { got: usize, expected: usize },
}

/// Vanishing or jet order: a natural number or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(k) => Some(k),
            Order::Infinite => None,
        }
    }

    /// Jet order lost by one differentiation.
    pub fn dec(self) -> Order {
        match self {
            Order::Finite(k) => Order::Finite(k.saturating_sub(1)),
            Order::Infinite => Order::Infinite,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{}", k),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

/// A formal variable. Indices of `Z`/`Zbar` are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Z(usize),
    W,
    Zbar(usize),
    Wbar,
}

impl Var {
    /// Slot in an exponent vector of length `2(nz+1)`.
    pub fn index(self, nz: usize) -> Option<usize> {
        match self {
            Var::Z(k) if k >= 1 && k <= nz => Some(k - 1),
            Var::W => Some(nz),
            Var::Zbar(k) if k >= 1 && k <= nz => Some(nz + 1 + k - 1),
            Var::Wbar => Some(2 * nz + 1),
            _ => None,
        }
    }

    pub fn from_index(i: usize, nz: usize) -> Var {
        let n = nz + 1;
        match i {
            _ if i < nz => Var::Z(i + 1),
            _ if i == nz => Var::W,
            _ if i < n + nz => Var::Zbar(i - n + 1),
            _ => Var::Wbar,
        }
    }

    pub fn conj(self) -> Var {
        match self {
            Var::Z(k) => Var::Zbar(k),
            Var::W => Var::Wbar,
            Var::Zbar(k) => Var::Z(k),
            Var::Wbar => Var::W,
        }
    }

    pub fn is_barred(self) -> bool {
        matches!(self, Var::Zbar(_) | Var::Wbar)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Z(k) => write!(f, "z{}", k),
            Var::W => write!(f, "w"),
            Var::Zbar(k) => write!(f, "conj(z{})", k),
            Var::Wbar => write!(f, "conj(w)"),
        }
    }
}

/// Exponent vector ordered by total degree, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u16>);

impl Monomial {
    pub fn one(len: usize) -> Self {
        Monomial(vec![0; len])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    /// Swap the unbarred and barred halves.
    pub fn conj(&self) -> Monomial {
        let n = self.0.len() / 2;
        let mut v = self.0[n..].to_vec();
        v.extend_from_slice(&self.0[..n]);
        Monomial(v)
    }

    pub fn is_holomorphic(&self) -> bool {
        let n = self.0.len() / 2;
        self.0[n..].iter().all(|&e| e == 0)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Weights of `z_1..z_{n-1}` and of `w`; conjugates share the weight.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct WeightSystem {
    pub z: Vec<u32>,
    pub w: u32,
}

impl WeightSystem {
    pub fn new(z: Vec<u32>, w: u32) -> Self {
        assert!(z.iter().all(|&x| x > 0) && w > 0, "weights must be positive");
        WeightSystem { z, w }
    }

    /// `(1, ..., 1, k)` on the z-variables and `m` on `w`.
    pub fn standard(nz: usize, k: u32, m: u32) -> Self {
        let mut z = vec![1; nz];
        if nz > 0 {
            z[nz - 1] = k;
        }
        WeightSystem::new(z, m)
    }

    pub fn nz(&self) -> usize {
        self.z.len()
    }

    pub fn weight_of_slot(&self, i: usize) -> u32 {
        let nz = self.z.len();
        let half = i % (nz + 1);
        if half < nz {
            self.z[half]
        } else {
            self.w
        }
    }

    pub fn weight(&self, m: &Monomial) -> u32 {
        m.0.iter()
            .enumerate()
            .map(|(i, &e)| e as u32 * self.weight_of_slot(i))
            .sum()
    }
}

/// Polynomial with Gaussian rational coefficients in `2n` formal variables.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    nz: usize,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl Poly {
    pub fn zero(nz: usize) -> Self {
        Poly { nz, terms: BTreeMap::new() }
    }

    pub fn constant(nz: usize, c: GaussianRational) -> Self {
        let mut p = Poly::zero(nz);
        p.add_term(Monomial::one(2 * (nz + 1)), c);
        p
    }

    pub fn one(nz: usize) -> Self {
        Poly::constant(nz, GaussianRational::one())
    }

    pub fn var(nz: usize, v: Var) -> Self {
        let i = v.index(nz).expect("variable out of range");
        Poly::var_slot(nz, i)
    }

    pub(crate) fn var_slot(nz: usize, i: usize) -> Self {
        let mut e = vec![0; 2 * (nz + 1)];
        e[i] = 1;
        let mut p = Poly::zero(nz);
        p.add_term(Monomial(e), GaussianRational::one());
        p
    }

    /// Single term `c * prod var^e`.
    pub fn term(nz: usize, c: GaussianRational, factors: &[(Var, u16)]) -> Self {
        let mut e = vec![0; 2 * (nz + 1)];
        for (v, k) in factors {
            e[v.index(nz).expect("variable out of range")] += k;
        }
        let mut p = Poly::zero(nz);
        p.add_term(Monomial(e), c);
        p
    }

    pub fn from_terms(nz: usize, terms: impl IntoIterator<Item = (Monomial, GaussianRational)>) -> Self {
        let mut p = Poly::zero(nz);
        for (m, c) in terms {
            assert_eq!(m.0.len(), 2 * (nz + 1), "monomial length");
            p.add_term(m, c);
        }
        p
    }

    pub fn nz(&self) -> usize {
        self.nz
    }

    /// Complex dimension `n` of the ambient space.
    pub fn n(&self) -> usize {
        self.nz + 1
    }

    pub fn nvars(&self) -> usize {
        2 * (self.nz + 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn coeff_of(&self, factors: &[(Var, u16)]) -> GaussianRational {
        let mut e = vec![0; self.nvars()];
        for (v, k) in factors {
            e[v.index(self.nz).expect("variable out of range")] += k;
        }
        self.coeff(&Monomial(e))
    }

    pub fn constant_term(&self) -> GaussianRational {
        self.coeff(&Monomial::one(self.nvars()))
    }

    #[doc(hidden)]
    pub fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_dim(&self, o: &Poly) -> Result<(), PolyError> {
        if self.nz != o.nz {
            Err(PolyError::DimensionMismatch(self.nz, o.nz))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, o: &Poly) -> Result<Poly, PolyError> {
        self.check_dim(o)?;
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn checked_sub(&self, o: &Poly) -> Result<Poly, PolyError> {
        self.check_dim(o)?;
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c);
        }
        Ok(r)
    }

    pub fn checked_mul(&self, o: &Poly) -> Result<Poly, PolyError> {
        self.check_dim(o)?;
        let mut r = Poly::zero(self.nz);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(r)
    }

    /// Product dropping every term of total degree above `max_deg`.
    pub fn mul_truncated(&self, o: &Poly, max_deg: u32) -> Poly {
        assert_eq!(self.nz, o.nz, "dimension mismatch");
        let mut r = Poly::zero(self.nz);
        for (m1, c1) in &self.terms {
            let d1 = m1.degree();
            if d1 > max_deg {
                break;
            }
            for (m2, c2) in &o.terms {
                if d1 + m2.degree() > max_deg {
                    break;
                }
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn scale(&self, c: &GaussianRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nz);
        }
        Poly {
            nz: self.nz,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.nz);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Coefficient-conjugate and swap barred with unbarred variables.
    pub fn conj(&self) -> Poly {
        Poly {
            nz: self.nz,
            terms: self.terms.iter().map(|(m, c)| (m.conj(), c.conj())).collect(),
        }
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    /// `(p + conj p) / 2`
    pub fn real_part(&self) -> Poly {
        (self + &self.conj()).scale(&GaussianRational::rational(1, 2))
    }

    /// `(p - conj p) / 2i`
    pub fn imag_part(&self) -> Poly {
        (self - &self.conj()).scale(&GaussianRational::from_parts(0, 1, -1, 2))
    }

    /// Formal partial derivative in the variable at `slot`.
    pub fn derivative_slot(&self, slot: usize) -> Poly {
        let mut r = Poly::zero(self.nz);
        for (m, c) in &self.terms {
            let e = m.0[slot];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[slot] -= 1;
            r.add_term(m2, c * &GaussianRational::from_int(e as i64));
        }
        r
    }

    pub fn derivative(&self, v: Var) -> Result<Poly, PolyError> {
        let i = v.index(self.nz).ok_or_else(|| PolyError::UnknownVariable(v.to_string()))?;
        Ok(self.derivative_slot(i))
    }

    /// Wirtinger derivative `d/dv` for an unbarred variable `v`.
    pub fn wirtinger_dz(&self, v: Var) -> Result<Poly, PolyError> {
        if v.is_barred() {
            return Err(PolyError::UnknownVariable(v.to_string()));
        }
        self.derivative(v)
    }

    /// Wirtinger derivative `d/d conj(v)` for an unbarred variable `v`.
    pub fn wirtinger_dzbar(&self, v: Var) -> Result<Poly, PolyError> {
        if v.is_barred() {
            return Err(PolyError::UnknownVariable(v.to_string()));
        }
        self.derivative(v.conj())
    }

    /// Antiderivative in the variable at `slot`, with zero constant of integration.
    pub fn integrate_slot(&self, slot: usize) -> Poly {
        let mut r = Poly::zero(self.nz);
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            m2.0[slot] += 1;
            let e = m2.0[slot] as i64;
            r.add_term(m2, c * &GaussianRational::rational(1, e));
        }
        r
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    pub fn vanishing_order(&self) -> Order {
        match self.terms.keys().next() {
            Some(m) => Order::Finite(m.degree()),
            None => Order::Infinite,
        }
    }

    pub fn weighted_vanishing_order(&self, w: &WeightSystem) -> Order {
        self.terms
            .keys()
            .map(|m| w.weight(m))
            .min()
            .map(Order::Finite)
            .unwrap_or(Order::Infinite)
    }

    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Poly {
        Poly {
            nz: self.nz,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Part of ordinary total degree `d`.
    pub fn hom_part(&self, d: u32) -> Poly {
        self.filter(|m| m.degree() == d)
    }

    pub fn weighted_part(&self, sigma: u32, w: &WeightSystem) -> Poly {
        self.filter(|m| w.weight(m) == sigma)
    }

    pub fn truncate(&self, max_deg: u32) -> Poly {
        self.filter(|m| m.degree() <= max_deg)
    }

    /// Monomials free of every barred variable.
    pub fn holomorphic_part(&self) -> Poly {
        self.filter(|m| m.is_holomorphic())
    }

    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(|m| m.is_holomorphic())
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|m| m.degree());
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn is_weighted_homogeneous(&self, w: &WeightSystem) -> bool {
        let mut it = self.terms.keys().map(|m| w.weight(m));
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Whether the variable at `slot` occurs.
    pub fn involves_slot(&self, slot: usize) -> bool {
        self.terms.keys().any(|m| m.0[slot] > 0)
    }

    pub fn involves(&self, v: Var) -> bool {
        v.index(self.nz).map(|i| self.involves_slot(i)).unwrap_or(false)
    }

    /// Set the variables at the given slots to zero. Not conjugation symmetric
    /// unless the slot set is.
    pub fn set_zero_slots(&self, slots: &[usize]) -> Poly {
        self.filter(|m| slots.iter().all(|&s| m.0[s] == 0))
    }

    /// Set the listed variables and their conjugates to zero.
    pub fn restrict_zero(&self, vars: &[Var]) -> Poly {
        let mut slots = Vec::new();
        for v in vars {
            slots.push(v.index(self.nz).expect("variable out of range"));
            slots.push(v.conj().index(self.nz).expect("variable out of range"));
        }
        self.set_zero_slots(&slots)
    }

    /// Compose with images of every slot (all images share one target dimension).
    /// Terms above `max_deg` are dropped along the way when a bound is given.
    pub fn compose_slots(&self, images: &[Poly], max_deg: Option<u32>) -> Poly {
        assert_eq!(images.len(), self.nvars(), "one image per slot");
        let tnz = images[0].nz;
        let mut cache: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(tnz), p.clone()]).collect();
        let mul = |a: &Poly, b: &Poly| match max_deg {
            Some(d) => a.mul_truncated(b, d),
            None => a * b,
        };
        let mut out = Poly::zero(tnz);
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(tnz, c.clone());
            for (slot, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[slot].len() <= e as usize {
                    let next = mul(cache[slot].last().unwrap(), &images[slot]);
                    cache[slot].push(next);
                }
                acc = mul(&acc, &cache[slot][e as usize]);
                if acc.is_zero() {
                    break;
                }
            }
            for (m2, c2) in acc.terms {
                out.add_term(m2, c2);
            }
        }
        out
    }

    /// Compose with images of the unbarred variables `z_1..z_{n-1}, w`; barred
    /// variables go to the conjugate images.
    pub fn compose(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.n(), "one image per unbarred variable");
        let mut all: Vec<Poly> = images.to_vec();
        all.extend(images.iter().map(|p| p.conj()));
        self.compose_slots(&all, None)
    }

    /// Substitute selected variables, keeping the others. A barred entry must be
    /// the conjugate of the unbarred image.
    pub fn substitute(&self, map: &BTreeMap<Var, Poly>) -> Result<Poly, PolyError> {
        let n = self.n();
        let mut images: Vec<Poly> = (0..n).map(|i| Poly::var_slot(self.nz, i)).collect();
        for (v, p) in map {
            let i = v.index(self.nz).ok_or_else(|| PolyError::UnknownVariable(v.to_string()))?;
            self.check_dim(p)?;
            if !v.is_barred() {
                images[i] = p.clone();
            }
        }
        for (v, p) in map {
            if v.is_barred() {
                let i = v.conj().index(self.nz).unwrap();
                if images[i].conj() != *p {
                    return Err(PolyError::ConjugationSymmetry(v.to_string()));
                }
            }
        }
        Ok(self.compose(&images))
    }

    /// Evaluate at a point given by the values of `z_1..z_{n-1}, w`.
    pub fn eval(&self, point: &[GaussianRational]) -> Result<GaussianRational, PolyError> {
        if point.len() != self.n() {
            return Err(PolyError::PointArity { got: point.len(), expected: self.n() });
        }
        let mut vals: Vec<GaussianRational> = point.to_vec();
        vals.extend(point.iter().map(|x| x.conj()));
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (slot, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &vals[slot].pow(e as u32);
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Re-embed into a space with `nz2` z-variables by an explicit slot map.
    pub fn remap(&self, nz2: usize, slot_map: impl Fn(usize) -> usize) -> Poly {
        let mut r = Poly::zero(nz2);
        for (m, c) in &self.terms {
            let mut e = vec![0; 2 * (nz2 + 1)];
            for (i, &x) in m.0.iter().enumerate() {
                if x > 0 {
                    e[slot_map(i)] += x;
                }
            }
            r.add_term(Monomial(e), c.clone());
        }
        r
    }

    /// The largest denominator and numerator bit length, for diagnostics.
    pub fn coefficient_height(&self) -> u64 {
        self.terms
            .values()
            .map(|c| height(&c.re).max(height(&c.im)))
            .max()
            .unwrap_or(0)
    }
}

fn height(r: &BigRational) -> u64 {
    let a: &BigInt = r.numer();
    let b: &BigInt = r.denom();
    a.bits().max(b.bits())
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    /// Panics on a dimension mismatch; see [`Poly::checked_add`].
    fn add(self, o: &Poly) -> Poly {
        self.checked_add(o).expect("polynomial dimension mismatch")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self.checked_sub(o).expect("polynomial dimension mismatch")
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        self.checked_mul(o).expect("polynomial dimension mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&GaussianRational::from_int(-1))
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, o: Poly) -> Poly {
        &self + &o
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        &self - &o
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
