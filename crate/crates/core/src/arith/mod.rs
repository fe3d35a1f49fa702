//! Closed-form evaluators for Euler characteristics, δ, ε and multiplicity
//! bounds from supplied local and global dimension data.

use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::flmod::fp::is_prime;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldKind {
    Number,
    Function,
}

/// Which of the special simple modules A is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModuleKind {
    /// The trivial module F_ℓ.
    Trivial,
    /// The module μ_ℓ.
    RootsOfUnity,
    Other,
}

/// Local dimensions at one archimedean place v of the base field.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArchimedeanPlace {
    /// dim Ĥ⁰(Q_v, A′).
    pub hhat0_dim: u64,
    /// dim H⁰(Q_v, A′).
    pub h0_dim: u64,
}

/// An ℓ-adic place v with ord_v(#A), so that ‖#A‖_v = p^(−ord).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EllAdicPlace {
    pub residue_char: u32,
    pub ord: i64,
}

fn one() -> u64 {
    1
}

/// Every input of the evaluators. Dimensions are over F_ℓ; "gal" means
/// invariants under the full Galois group in question.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalData {
    pub ell: u32,
    pub field: FieldKind,
    pub module: ModuleKind,
    #[serde(default)]
    pub archimedean: Vec<ArchimedeanPlace>,
    #[serde(default)]
    pub r1: u64,
    #[serde(default)]
    pub r2: u64,
    /// ε given directly.
    #[serde(default)]
    pub epsilon: Option<i64>,
    /// ε given through the places in I.
    #[serde(default)]
    pub ell_adic_places: Vec<EllAdicPlace>,
    pub dim_a: u64,
    #[serde(default)]
    pub dim_a_gamma: u64,
    /// dim A^Gal.
    #[serde(default)]
    pub dim_a_gal: Option<u64>,
    /// dim (A′)^Gal.
    #[serde(default)]
    pub dim_dual_gal: Option<u64>,
    /// dim A_Gal, the coinvariants.
    #[serde(default)]
    pub dim_a_gal_coinvariants: Option<u64>,
    /// dim End(A).
    #[serde(default = "one")]
    pub endo_dim: u64,
    #[serde(default)]
    pub genus: Option<u64>,
    /// dim A^{Γ_v} for each real place v.
    #[serde(default)]
    pub real_place_fixed_dims: Vec<u64>,
    #[serde(default)]
    pub xi: Option<u64>,
    #[serde(default)]
    pub mu_ell_in_base: bool,
}

impl LocalData {
    /// Data for a module of dimension `dim_a` with everything else zero.
    pub fn new(ell: u32, field: FieldKind, module: ModuleKind, dim_a: u64) -> Self {
        LocalData {
            ell,
            field,
            module,
            archimedean: Vec::new(),
            r1: 0,
            r2: 0,
            epsilon: None,
            ell_adic_places: Vec::new(),
            dim_a,
            dim_a_gamma: 0,
            dim_a_gal: None,
            dim_dual_gal: None,
            dim_a_gal_coinvariants: None,
            endo_dim: 1,
            genus: None,
            real_place_fixed_dims: Vec::new(),
            xi: None,
            mu_ell_in_base: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidData(m.to_string()));
        if !is_prime(self.ell as u64) {
            return bad("ℓ must be prime");
        }
        if self.dim_a == 0 {
            return bad("dim A must be positive");
        }
        if self.endo_dim == 0 || self.endo_dim > self.dim_a * self.dim_a {
            return bad("dim End(A) must lie in 1..=dim A²");
        }
        let d = self.dim_a;
        let within = [Some(self.dim_a_gamma), self.dim_a_gal, self.dim_dual_gal, self.dim_a_gal_coinvariants, self.xi];
        if within.iter().flatten().any(|&x| x > d) || self.real_place_fixed_dims.iter().any(|&x| x > d) {
            return bad("an invariant dimension exceeds dim A");
        }
        if self.module != ModuleKind::Other && d != 1 {
            return bad("F_ℓ and μ_ℓ are one-dimensional");
        }
        if self.module == ModuleKind::Trivial && self.dim_a_gamma != 1 {
            return bad("F_ℓ has dim A^Γ = 1");
        }
        for p in &self.ell_adic_places {
            if p.residue_char != self.ell {
                return bad("places in I must lie over ℓ");
            }
        }
        let from_places = self.ell_adic_places.iter().map(|p| p.ord).sum::<i64>();
        if let Some(e) = self.epsilon {
            if !self.ell_adic_places.is_empty() && e != from_places {
                return bad("ε disagrees with the ord data");
            }
        }
        let e = self.epsilon();
        if e < 0 || e % d as i64 != 0 {
            return bad("ε must be a nonnegative multiple of dim A");
        }
        Ok(())
    }

    /// ε = −Σ_{v∈I} log_ℓ ‖#A‖_v, taken from the direct value when present.
    pub fn epsilon(&self) -> i64 {
        self.epsilon.unwrap_or_else(|| self.ell_adic_places.iter().map(|p| p.ord).sum())
    }
}

fn need(v: Option<u64>, what: &str) -> Result<i64> {
    v.map(|x| x as i64).ok_or_else(|| Error::InvalidData(format!("missing {what}")))
}

fn ratio(num: i64, den: u64) -> Rational64 {
    Rational64::new(num, den as i64)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogChi {
    pub value: i64,
    pub note: Option<String>,
}

/// log_ℓ χ = Σ_v (dim Ĥ⁰(Q_v, A′) − dim H⁰(Q_v, A′)) over archimedean v.
pub fn log_chi(data: &LocalData) -> Result<LogChi> {
    data.validate()?;
    if data.field == FieldKind::Function {
        return Ok(LogChi { value: 0, note: Some("no archimedean places over a function field".into()) });
    }
    let value = data.archimedean.iter().map(|p| p.hhat0_dim as i64 - p.h0_dim as i64).sum();
    Ok(LogChi { value, note: None })
}

/// δ with empty S over a function field: −dim A_Gal in genus 0, and
/// dim (A′)^Gal − dim A^Gal in positive genus.
pub fn delta_ff(data: &LocalData) -> Result<i64> {
    data.validate()?;
    if data.field != FieldKind::Function {
        return Err(Error::Precondition("delta_ff needs a function field".into()));
    }
    match data.genus {
        None => Err(Error::InvalidData("missing genus".into())),
        Some(0) => Ok(-need(data.dim_a_gal_coinvariants, "dim A_Gal")?),
        Some(_) => Ok(need(data.dim_dual_gal, "dim (A′)^Gal")? - need(data.dim_a_gal, "dim A^Gal")?),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaBound {
    pub value: i64,
    pub log_chi: i64,
    pub dim_dual_gal: i64,
    pub dim_a_gal: i64,
    pub epsilon: i64,
    /// Equality with empty S depends on global duality data that is never
    /// computed here.
    pub equality_decided: bool,
}

/// δ ≤ log_ℓ χ + dim (A′)^Gal − dim A^Gal + ε over a number field.
pub fn delta_nf_bound(data: &LocalData) -> Result<DeltaBound> {
    data.validate()?;
    if data.field != FieldKind::Number {
        return Err(Error::Precondition("delta_nf_bound needs a number field".into()));
    }
    let chi = log_chi(data)?.value;
    let dual = data.dim_dual_gal.unwrap_or(0) as i64;
    let gal = data.dim_a_gal.unwrap_or(0) as i64;
    let epsilon = data.epsilon();
    Ok(DeltaBound {
        value: chi + dual - gal + epsilon,
        log_chi: chi,
        dim_dual_gal: dual,
        dim_a_gal: gal,
        epsilon,
        equality_decided: false,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundCase {
    Nf,
    Ff,
    Admissible,
}

impl FromStr for BoundCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nf" => Ok(BoundCase::Nf),
            "ff" => Ok(BoundCase::Ff),
            "admissible" => Ok(BoundCase::Admissible),
            _ => Err(Error::InvalidData(format!("unknown case {s:?}; expected nf, ff or admissible"))),
        }
    }
}

/// ((n+1)·dim A − dim A^Γ)/h over ℚ, (n·dim A − dim A^Γ)/h over F_q(t) with
/// A ≠ μ_ℓ, and (n+1)(dim A − dim A^Γ)/h for admissible presentations.
pub fn mult_bound_main(n: u64, data: &LocalData, case: BoundCase) -> Result<Rational64> {
    data.validate()?;
    let (n, d, g) = (n as i64, data.dim_a as i64, data.dim_a_gamma as i64);
    let num = match case {
        BoundCase::Nf => (n + 1) * d - g,
        BoundCase::Ff => {
            if data.module == ModuleKind::RootsOfUnity {
                return Err(Error::Precondition("the function field bound excludes A = μ_ℓ".into()));
            }
            n * d - g
        }
        BoundCase::Admissible => (n + 1) * (d - g),
    };
    Ok(ratio(num, data.endo_dim))
}

/// The three-case bound for arbitrary signature: ε − r₂ − 1 for F_ℓ,
/// ε + n − r₁ − r₂ for μ_ℓ, and otherwise
/// (ε + (n − r₂)·dim A − Σ_real dim A/A^{Γ_v} − (n+1)·dim A^Γ)/h.
pub fn mult_bound_other_signatures(n: u64, data: &LocalData) -> Result<Rational64> {
    data.validate()?;
    if data.field != FieldKind::Number {
        return Err(Error::Precondition("other signatures need a number field".into()));
    }
    if data.real_place_fixed_dims.len() as u64 != data.r1 {
        return Err(Error::InvalidData(format!(
            "{} fixed-space dimensions for {} real places",
            data.real_place_fixed_dims.len(),
            data.r1
        )));
    }
    let (n, d, e) = (n as i64, data.dim_a as i64, data.epsilon());
    let (r1, r2) = (data.r1 as i64, data.r2 as i64);
    Ok(match data.module {
        ModuleKind::Trivial => Rational64::from_integer(e - r2 - 1),
        ModuleKind::RootsOfUnity => Rational64::from_integer(e + n - r1 - r2),
        ModuleKind::Other => {
            let real: i64 = data.real_place_fixed_dims.iter().map(|&f| d - f as i64).sum();
            let num = e + (n - r2) * d - real - (n + 1) * data.dim_a_gamma as i64;
            ratio(num, data.endo_dim)
        }
    })
}

/// Bound when μ_ℓ lies in the base: ((n+1)·dim A − ξ − n·dim A^Γ)/h over a
/// function field and ((n − r₂)·dim A + ε − ξ − n·dim A^Γ)/h over a number field.
pub fn mult_bound_roots_of_unity(n: u64, data: &LocalData) -> Result<Rational64> {
    data.validate()?;
    if !data.mu_ell_in_base {
        return Err(Error::Precondition("needs μ_ℓ in the base field".into()));
    }
    let (n, d, g) = (n as i64, data.dim_a as i64, data.dim_a_gamma as i64);
    let xi = data.xi.unwrap_or(0) as i64;
    let num = match data.field {
        FieldKind::Function => (n + 1) * d - xi - n * g,
        FieldKind::Number => (n - data.r2 as i64) * d + data.epsilon() - xi - n * g,
    };
    Ok(ratio(num, data.endo_dim))
}

/// Relations needed for an n-generated G_S(k): at most [k:ℚ] + n.
pub fn fin_pres_relation_bound(n: u64, degree: u64) -> Result<u64> {
    if degree == 0 {
        return Err(Error::InvalidData("degree must be at least 1".into()));
    }
    Ok(degree + n)
}

/// n + max(0, max ⌈δ/dim A⌉) over the listed (δ bound, dim A) pairs: the
/// relation count from bounds on δ with Γ trivial.
pub fn relation_bound_from_deltas(n: u64, deltas: &[(i64, u64)]) -> Result<u64> {
    let mut sup = 0i64;
    for &(delta, dim) in deltas {
        if dim == 0 {
            return Err(Error::InvalidData("dim A must be positive".into()));
        }
        sup = sup.max(delta.div_euclid(dim as i64) + i64::from(delta.rem_euclid(dim as i64) != 0));
    }
    Ok(n + sup as u64)
}

/// Largest m for which the abelian factor's term of the generation
/// probability is positive: ⌊(n+u)(dim A − dim A^Γ)/h⌋.
pub fn positivity_threshold(n_plus_u: u64, dim_a: u64, dim_a_gamma: u64, endo_dim: u64) -> Rational64 {
    ratio(n_plus_u as i64 * (dim_a as i64 - dim_a_gamma as i64), endo_dim)
}
