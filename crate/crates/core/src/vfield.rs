//! Complex vector fields with polynomial coefficients, hypersurfaces in the
//! form `rho = -2 Re w + chi`, and their CR frames.

use std::fmt;

use crate::coeff::GaussianRational;
use crate::poly::{Order, Poly, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VfieldError {
    #[error("defining function is not real")]
    NotReal,
    #[error("defining function is not in normal form: {0}")]
    NotNormalForm(String),
    #[error("dimension mismatch: {0} vs {1} z-variables")]
    DimensionMismatch(usize, usize),
    #[error("unknown direction '{0}'")]
    UnknownDirection(String),
}

/// `X = sum_d X^d d/d(var_d)` over the `2n` directions, in the same slot order
/// as polynomial variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    nz: usize,
    coeffs: Vec<Poly>,
    jet: Order,
}

impl VectorField {
    pub fn zero(nz: usize) -> Self {
        VectorField { nz, coeffs: vec![Poly::zero(nz); 2 * (nz + 1)], jet: Order::Infinite }
    }

    pub fn from_coeffs(nz: usize, coeffs: Vec<Poly>, jet: Order) -> Self {
        assert_eq!(coeffs.len(), 2 * (nz + 1), "one coefficient per direction");
        assert!(coeffs.iter().all(|c| c.nz() == nz), "coefficient dimension");
        VectorField { nz, coeffs, jet }
    }

    /// `d/dv` with unit coefficient.
    pub fn coordinate(nz: usize, v: Var) -> Self {
        let mut x = VectorField::zero(nz);
        x.set(v, Poly::one(nz));
        x
    }

    pub fn nz(&self) -> usize {
        self.nz
    }

    /// Certified jet order of the coefficients.
    pub fn jet_order(&self) -> Order {
        self.jet
    }

    pub fn with_jet(mut self, jet: Order) -> Self {
        self.jet = jet;
        self
    }

    pub fn coeff(&self, dir: Var) -> &Poly {
        &self.coeffs[dir.index(self.nz).expect("direction out of range")]
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn set(&mut self, dir: Var, p: Poly) {
        let i = dir.index(self.nz).expect("direction out of range");
        self.coeffs[i] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// `X(p)`
    pub fn apply(&self, p: &Poly) -> Poly {
        let mut acc = Poly::zero(self.nz);
        for (slot, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() || !p.involves_slot(slot) {
                continue;
            }
            acc = &acc + &(c * &p.derivative_slot(slot));
        }
        acc
    }

    /// `[X, Y]^d = X(Y^d) - Y(X^d)`; the jet order drops by one.
    pub fn lie_bracket(&self, other: &VectorField) -> VectorField {
        assert_eq!(self.nz, other.nz, "dimension mismatch");
        let jet = self.jet.min(other.jet).dec();
        let coeffs = (0..self.coeffs.len())
            .map(|d| {
                let c = &self.apply(&other.coeffs[d]) - &other.apply(&self.coeffs[d]);
                match jet {
                    Order::Finite(j) => c.truncate(j),
                    Order::Infinite => c,
                }
            })
            .collect();
        VectorField { nz: self.nz, coeffs, jet }
    }

    /// Swap `(1,0)` and `(0,1)` slots and conjugate coefficients.
    pub fn conj(&self) -> VectorField {
        let n = self.nz + 1;
        let mut coeffs: Vec<Poly> = self.coeffs[n..].iter().map(|p| p.conj()).collect();
        coeffs.extend(self.coeffs[..n].iter().map(|p| p.conj()));
        VectorField { nz: self.nz, coeffs, jet: self.jet }
    }

    pub fn add(&self, o: &VectorField) -> VectorField {
        VectorField {
            nz: self.nz,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
            jet: self.jet.min(o.jet),
        }
    }

    pub fn mul_poly(&self, f: &Poly) -> VectorField {
        VectorField {
            nz: self.nz,
            coeffs: self.coeffs.iter().map(|c| c * f).collect(),
            jet: self.jet,
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(usize, &Poly) -> Poly) -> VectorField {
        VectorField {
            nz: self.nz,
            coeffs: self.coeffs.iter().enumerate().map(|(i, c)| f(i, c)).collect(),
            jet: self.jet,
        }
    }

    pub fn value_at_origin(&self) -> Vec<GaussianRational> {
        self.coeffs.iter().map(|c| c.constant_term()).collect()
    }

    pub fn is_type_10(&self) -> bool {
        self.coeffs[self.nz + 1..].iter().all(|c| c.is_zero())
    }

    /// Nonzero coefficients keyed `dz<k>`, `dw`, `dzbar<k>`, `dwbar`.
    pub fn named_coeffs(&self) -> Vec<(String, &Poly)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (direction_name(Var::from_index(i, self.nz)), c))
            .collect()
    }

    pub fn from_named(nz: usize, entries: &[(String, Poly)]) -> Result<VectorField, VfieldError> {
        let mut x = VectorField::zero(nz);
        for (name, p) in entries {
            let v = parse_direction(name, nz).ok_or_else(|| VfieldError::UnknownDirection(name.clone()))?;
            if p.nz() != nz {
                return Err(VfieldError::DimensionMismatch(nz, p.nz()));
            }
            x.set(v, p.clone());
        }
        Ok(x)
    }
}

pub fn direction_name(v: Var) -> String {
    match v {
        Var::Z(k) => format!("dz{}", k),
        Var::W => "dw".to_string(),
        Var::Zbar(k) => format!("dzbar{}", k),
        Var::Wbar => "dwbar".to_string(),
    }
}

fn parse_direction(name: &str, nz: usize) -> Option<Var> {
    let v = match name {
        "dw" => Var::W,
        "dwbar" => Var::Wbar,
        _ => {
            if let Some(k) = name.strip_prefix("dzbar") {
                Var::Zbar(k.parse().ok()?)
            } else {
                Var::Z(name.strip_prefix("dz")?.parse().ok()?)
            }
        }
    };
    v.index(nz).map(|_| v)
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .named_coeffs()
            .into_iter()
            .map(|(n, c)| format!("({})*{}", c, n))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Real hypersurface `{rho = 0}` with `rho = -2 Re w + chi(z, zbar, Im w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypersurface {
    nz: usize,
    rho: Poly,
    notes: Vec<String>,
}

impl Hypersurface {
    /// Checks reality, `rho(0) = 0`, linear part `-w - conj(w)` and that `chi`
    /// has no pure `w` terms.
    pub fn new(rho: Poly) -> Result<Self, VfieldError> {
        let nz = rho.nz();
        if !rho.is_real() {
            return Err(VfieldError::NotReal);
        }
        if !rho.constant_term().is_zero() {
            return Err(VfieldError::NotNormalForm("rho(0) != 0".into()));
        }
        let minus_two_re_w = -&(&Poly::var(nz, Var::W) + &Poly::var(nz, Var::Wbar));
        if rho.hom_part(1) != minus_two_re_w {
            return Err(VfieldError::NotNormalForm("linear part must be -2Re(w)".into()));
        }
        let chi = &rho - &minus_two_re_w;
        if chi.terms().any(|(m, _)| (0..nz).all(|i| m.0[i] == 0 && m.0[nz + 1 + i] == 0)) {
            return Err(VfieldError::NotNormalForm("chi has terms in w alone".into()));
        }
        Ok(Hypersurface { nz, rho, notes: Vec::new() })
    }

    /// Like [`Hypersurface::new`], but a leading `+2Re(w)` is turned into
    /// `-2Re(w)` by `w -> -w`, with a note.
    pub fn from_raw(rho: Poly) -> Result<Self, VfieldError> {
        let nz = rho.nz();
        let plus = &Poly::var(nz, Var::W) + &Poly::var(nz, Var::Wbar);
        if rho.hom_part(1) == plus {
            let mut images: Vec<Poly> = (0..nz).map(|k| Poly::var(nz, Var::Z(k + 1))).collect();
            images.push(-&Poly::var(nz, Var::W));
            let mut m = Hypersurface::new(rho.compose(&images))?;
            m.notes.push("flipped w -> -w to reach the -2Re(w) convention".into());
            return Ok(m);
        }
        Hypersurface::new(rho)
    }

    pub fn nz(&self) -> usize {
        self.nz
    }

    pub fn n(&self) -> usize {
        self.nz + 1
    }

    pub fn rho(&self) -> &Poly {
        &self.rho
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    /// `chi = rho + 2 Re w`
    pub fn chi(&self) -> Poly {
        &self.rho + &(&Poly::var(self.nz, Var::W) + &Poly::var(self.nz, Var::Wbar))
    }

    /// `chi` with `w = conj(w) = 0`.
    pub fn chi_at_w0(&self) -> Poly {
        self.chi().restrict_zero(&[Var::W])
    }

    pub fn is_rigid(&self) -> bool {
        let chi = self.chi();
        !chi.involves(Var::W) && !chi.involves(Var::Wbar)
    }

    /// The CR frame `L_i = d/dz_i - (rho_{z_i}/rho_w) d/dw`. Exact for rigid
    /// `rho`; otherwise `1/rho_w` is a geometric series and the coefficients are
    /// certified through degree `jet_order`.
    pub fn cr_frame(&self, jet_order: u32) -> Vec<VectorField> {
        let nz = self.nz;
        let rigid = self.is_rigid();
        let inv = if rigid {
            Poly::constant(nz, GaussianRational::from_int(-1))
        } else {
            let r = self.chi().derivative(Var::W).unwrap();
            let mut sum = Poly::one(nz);
            let mut pw = Poly::one(nz);
            for _ in 0..jet_order {
                pw = pw.mul_truncated(&r, jet_order);
                if pw.is_zero() {
                    break;
                }
                sum = &sum + &pw;
            }
            -&sum
        };
        (1..=nz)
            .map(|i| {
                let rz = self.rho.derivative(Var::Z(i)).unwrap();
                let mut x = VectorField::coordinate(nz, Var::Z(i));
                if rigid {
                    x.set(Var::W, -&(&rz * &inv));
                    x
                } else {
                    x.set(Var::W, -&rz.mul_truncated(&inv, jet_order));
                    x.with_jet(Order::Finite(jet_order))
                }
            })
            .collect()
    }

    /// `<X, d rho> = sum X^{z_i} rho_{z_i} + X^w rho_w`
    pub fn pair(&self, x: &VectorField) -> Poly {
        let mut acc = Poly::zero(self.nz);
        for i in 1..=self.nz {
            let c = x.coeff(Var::Z(i));
            if !c.is_zero() {
                acc = &acc + &(c * &self.rho.derivative(Var::Z(i)).unwrap());
            }
        }
        let c = x.coeff(Var::W);
        if !c.is_zero() {
            acc = &acc + &(c * &self.rho.derivative(Var::W).unwrap());
        }
        acc
    }

    /// Constant term of [`Hypersurface::pair`].
    pub fn pair_at_origin(&self, x: &VectorField) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        let mut add = |c: &Poly, v: Var| {
            let a = c.constant_term();
            if !a.is_zero() {
                acc += &(&a * &self.rho.derivative(v).unwrap().constant_term());
            }
        };
        for i in 1..=self.nz {
            add(x.coeff(Var::Z(i)), Var::Z(i));
        }
        add(x.coeff(Var::W), Var::W);
        acc
    }

    /// `X(rho)` restricted to the certified jet of `X`.
    pub fn tangency_residual(&self, x: &VectorField) -> Poly {
        let r = x.apply(&self.rho);
        match x.jet_order() {
            Order::Finite(j) => r.truncate(j),
            Order::Infinite => r,
        }
    }
}
