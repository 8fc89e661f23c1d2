//! Reference models shipped with the toolkit.

use crate::grammar::parse_poly;
use crate::normalize::Frame;
use crate::poly::Poly;
use crate::tangency::TangencyProblem;
use crate::vfield::Hypersurface;

/// A hypersurface with an optional frame; strings use the polynomial grammar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelFixture {
    pub name: String,
    pub description: String,
    pub n: usize,
    pub rho: String,
    pub frame: Option<Vec<Vec<String>>>,
    pub a_contact: Option<u32>,
}

impl ModelFixture {
    pub fn nz(&self) -> usize {
        self.n - 1
    }

    pub fn rho_poly(&self) -> Poly {
        parse_poly(&self.rho, self.nz()).expect("fixture rho parses")
    }

    /// Loaded with the sign flip the loader applies to `+2 Re w`.
    pub fn hypersurface(&self) -> Hypersurface {
        Hypersurface::from_raw(self.rho_poly()).expect("fixture hypersurface")
    }

    pub fn frame(&self) -> Option<Frame> {
        let rows = self.frame.as_ref()?;
        let nz = self.nz();
        let rows = rows.iter().map(|r| r.iter().map(|s| parse_poly(s, nz).expect("fixture frame parses")).collect()).collect();
        Some(Frame::new(nz, rows).expect("fixture frame"))
    }
}

/// `2 Re w + (z2 + conj z2 + |z1|^2)^2` with the Levi-null field `L1 - conj(z1) L2`.
pub fn squared_quadric() -> ModelFixture {
    ModelFixture {
        name: "squared-quadric".into(),
        description: "non-pseudoconvex model with contact 4 and degenerate commutator and Levi types".into(),
        n: 3,
        rho: "2*Re(w) + (z2 + conj(z2) + z1*conj(z1))^2".into(),
        frame: Some(vec![vec!["1".into(), "-conj(z1)".into()]]),
        a_contact: Some(4),
    }
}

/// `-2 Re w + |z1|^(2p) + |z2|^(2q)` with the coordinate frame of the larger exponent.
pub fn diagonal(p: u32, q: u32) -> ModelFixture {
    let (one, two) = if p >= q { ("1", "0") } else { ("0", "1") };
    ModelFixture {
        name: format!("diagonal-{}-{}", p, q),
        description: format!("diagonal model with exponents {} and {}", 2 * p, 2 * q),
        n: 3,
        rho: format!("-2*Re(w) + (z1*conj(z1))^{} + (z2*conj(z2))^{}", p, q),
        frame: Some(vec![vec![one.into(), two.into()]]),
        a_contact: Some(2 * p.max(q)),
    }
}

/// `-2 Re w + |z1 - z2^2|^2 + |z2|^8`, where the curve `(t^2, t)` beats the axes.
pub fn osculating() -> ModelFixture {
    ModelFixture {
        name: "osculating".into(),
        description: "model whose best curve is (t^2, t, 0)".into(),
        n: 3,
        rho: "-2*Re(w) + (z1 - z2^2)*(conj(z1) - conj(z2)^2) + (z2*conj(z2))^4".into(),
        frame: None,
        a_contact: None,
    }
}

pub fn strongly_pseudoconvex() -> ModelFixture {
    ModelFixture {
        name: "sphere".into(),
        description: "strongly pseudoconvex quadric".into(),
        n: 3,
        rho: "-2*Re(w) + z1*conj(z1) + z2*conj(z2)".into(),
        frame: Some(vec![vec!["1".into(), "0".into()]]),
        a_contact: Some(2),
    }
}

pub fn models() -> Vec<ModelFixture> {
    let mut out = vec![squared_quadric(), strongly_pseudoconvex(), osculating()];
    for p in 1..=3 {
        for q in 1..=3 {
            out.push(diagonal(p, q));
        }
    }
    out
}

/// A tangency problem with a known solution `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangencyFixture {
    pub name: String,
    pub a: String,
    pub k: u32,
    pub m: u32,
    pub f: String,
}

impl TangencyFixture {
    pub fn problem(&self) -> TangencyProblem {
        TangencyProblem::new(parse_poly(&self.a, 2).expect("fixture A parses"), self.k, self.m).expect("fixture problem")
    }

    pub fn f_poly(&self) -> Poly {
        parse_poly(&self.f, 2).expect("fixture f parses")
    }
}

/// `conj(A) = -|z1|^2`, `f = z1 conj(z2) + |z1|^4 / 2`: a solution whose real
/// part is not psh.
pub fn tangency_3_4() -> TangencyFixture {
    TangencyFixture {
        name: "tangency-3-4".into(),
        a: "-z1*conj(z1)".into(),
        k: 3,
        m: 4,
        f: "z1*conj(z2) + 1/2*(z1*conj(z1))^2".into(),
    }
}

/// `A = kappa z1^(kappa-1) conj(z1)^kappa`, `f = i (z2 + conj z2 - |z1|^(2 kappa))^2`:
/// a solution with `Re f = 0`. Weight of `z2` is `2 kappa`.
pub fn tangency_family(kappa: u32) -> TangencyFixture {
    TangencyFixture {
        name: format!("tangency-family-k{}", kappa),
        a: format!("{}*z1^{}*conj(z1)^{}", kappa, kappa - 1, kappa),
        k: 2 * kappa,
        m: 4 * kappa,
        f: format!("i*(z2 + conj(z2) - (z1*conj(z1))^{})^2", kappa),
    }
}

/// The coefficient field as printed, with the exponents the other way round.
pub fn tangency_family_printed(kappa: u32) -> String {
    format!("{}*z1^{}*conj(z1)^{}", kappa, kappa, kappa - 1)
}

pub fn tangency() -> Vec<TangencyFixture> {
    vec![tangency_3_4(), tangency_family(1), tangency_family(2)]
}
