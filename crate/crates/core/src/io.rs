//! JSON formats for groups, Γ-groups, modules, covers and varieties, and
//! decimal-string serialization of rationals.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::group::catalog;
use crate::varieties::VarietySpec;
use crate::{Error, FiniteGroup, FpModule, GammaGroup, GroupHom, Limits, Matrix, Result};

/// A group given by table, by permutation generators or by catalog name.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    /// Images of 0..degree−1 under each generator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perm_generators: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalog: Option<String>,
}

/// Inline object or path to a JSON file, relative to the referring file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Ref<T> {
    Path(String),
    Inline(T),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaGroupJson {
    pub group: Ref<GroupJson>,
    pub gamma: Ref<GroupJson>,
    /// One element permutation per element of Γ, in Γ's element order.
    pub action: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleJson {
    pub prime: u32,
    pub dim: usize,
    /// The acting group; may be omitted when the caller supplies it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<Ref<GroupJson>>,
    /// A Γ-group whose semidirect product G ⋊ Γ is the acting group.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_group: Option<Ref<GammaGroupJson>>,
    /// Generator position → matrix acting on column vectors.
    pub matrices: BTreeMap<String, Vec<Vec<i64>>>,
}

/// An equivariant surjection ω: F → G, by images of the generators of F.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverJson {
    pub source: Ref<GammaGroupJson>,
    pub images: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarietyJson {
    pub members: Vec<Ref<GammaGroupJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub product_order_bound: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search_depth: Option<usize>,
}

/// Reads and parses a JSON file, naming the file in any diagnostic.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidData(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidData(format!("{}: {e}", path.display())))
}

/// Resolves file references relative to a base directory.
#[derive(Clone, Debug)]
pub struct Loader {
    base: PathBuf,
    limits: Limits,
}

impl Loader {
    pub fn new(base: impl Into<PathBuf>, limits: &Limits) -> Self {
        Loader { base: base.into(), limits: limits.clone() }
    }

    /// Loader for references inside `file`.
    pub fn for_file(file: &Path, limits: &Limits) -> Self {
        Self::new(file.parent().map(Path::to_path_buf).unwrap_or_default(), limits)
    }

    fn resolve<T: DeserializeOwned + Clone>(&self, r: &Ref<T>) -> Result<(T, Loader)> {
        match r {
            Ref::Inline(v) => Ok((v.clone(), self.clone())),
            Ref::Path(p) => {
                let path = self.base.join(p);
                Ok((read_json(&path)?, Loader::for_file(&path, &self.limits)))
            }
        }
    }

    pub fn group(&self, r: &Ref<GroupJson>) -> Result<FiniteGroup> {
        let (j, _) = self.resolve(r)?;
        group_from_json(&j, &self.limits)
    }

    pub fn gamma_group(&self, r: &Ref<GammaGroupJson>) -> Result<GammaGroup> {
        let (j, sub) = self.resolve(r)?;
        let g = sub.group(&j.group)?;
        let gamma = sub.group(&j.gamma)?;
        GammaGroup::new(g, gamma, j.action)
    }

    /// Builds a module over `acting` when given, otherwise over the group the
    /// JSON names.
    pub fn module(&self, r: &Ref<ModuleJson>, acting: Option<&FiniteGroup>) -> Result<FpModule> {
        let (j, sub) = self.resolve(r)?;
        let named = match (&j.group, &j.gamma_group) {
            (Some(_), Some(_)) => return Err(Error::InvalidData("module names both a group and a Γ-group".into())),
            (Some(g), None) => Some(sub.group(g)?),
            (None, Some(h)) => Some(sub.gamma_group(h)?.semidirect_product(&self.limits)?.group),
            (None, None) => None,
        };
        let group = match (acting, named) {
            (Some(a), Some(n)) if !a.same_table(&n) => {
                return Err(Error::InvalidData("module group differs from the supplied group".into()))
            }
            (Some(a), _) => a.clone(),
            (None, Some(n)) => n,
            (None, None) => return Err(Error::InvalidData("module JSON names no group".into())),
        };
        module_from_json(&j, &group, &self.limits)
    }

    pub fn cover(&self, r: &Ref<CoverJson>, target: &GammaGroup) -> Result<(GammaGroup, GroupHom)> {
        let (j, sub) = self.resolve(r)?;
        let f = sub.gamma_group(&j.source)?;
        let omega = GroupHom::from_generator_images(f.group(), target.group(), &j.images)?;
        crate::presentations::check_cover(&f, target, &omega)?;
        Ok((f, omega))
    }

    pub fn variety(&self, r: &Ref<VarietyJson>) -> Result<VarietySpec> {
        let (j, sub) = self.resolve(r)?;
        let members = j.members.iter().map(|m| sub.gamma_group(m)).collect::<Result<Vec<_>>>()?;
        VarietySpec::new(
            members,
            j.product_order_bound.unwrap_or(self.limits.variety_product_bound),
            j.search_depth.unwrap_or(4),
        )
    }
}

pub fn group_from_json(j: &GroupJson, limits: &Limits) -> Result<FiniteGroup> {
    let forms = [j.table.is_some(), j.perm_generators.is_some(), j.catalog.is_some()];
    if forms.iter().filter(|&&b| b).count() != 1 {
        return Err(Error::InvalidGroup("give exactly one of table, perm_generators or catalog".into()));
    }
    let g = if let Some(table) = &j.table {
        limits.check_order("group order", table.len(), limits.group_order)?;
        let gens = j.generators.clone().ok_or_else(|| Error::InvalidGroup("table form needs generators".into()))?;
        FiniteGroup::from_table(j.name.clone(), table, gens)?
    } else if let Some(perms) = &j.perm_generators {
        let degree = j.degree.ok_or_else(|| Error::InvalidGroup("permutation form needs degree".into()))?;
        FiniteGroup::from_permutations(j.name.clone(), degree, perms, limits.group_order)?
    } else {
        let name = j.catalog.as_deref().unwrap_or_default();
        let g = catalog::by_name(name)?;
        limits.check_order("group order", g.order(), limits.group_order)?;
        match &j.name {
            Some(n) => g.renamed(n.clone()),
            None => g,
        }
    };
    if let Some(order) = j.order {
        if order != g.order() {
            return Err(Error::InvalidGroup(format!("declared order {order}, actual {}", g.order())));
        }
    }
    Ok(g)
}

pub fn group_to_json(g: &FiniteGroup) -> GroupJson {
    let table = g.elements().map(|a| g.table_row(a).iter().map(|&x| x as usize).collect()).collect();
    GroupJson {
        name: g.name().map(str::to_string),
        order: Some(g.order()),
        table: Some(table),
        generators: Some(g.generators().to_vec()),
        ..GroupJson::default()
    }
}

pub fn gamma_group_to_json(h: &GammaGroup) -> GammaGroupJson {
    GammaGroupJson {
        group: Ref::Inline(group_to_json(h.group())),
        gamma: Ref::Inline(group_to_json(h.gamma())),
        action: h.action_table(),
    }
}

pub fn module_from_json(j: &ModuleJson, group: &FiniteGroup, limits: &Limits) -> Result<FpModule> {
    if j.dim > limits.module_dim {
        return Err(Error::capacity("module dimension", j.dim, limits.module_dim));
    }
    if j.prime > limits.prime_max {
        return Err(Error::capacity("prime", j.prime as usize, limits.prime_max as usize));
    }
    let ngens = group.generators().len();
    let mut mats = vec![None; ngens];
    for (key, rows) in &j.matrices {
        let i: usize = key
            .parse()
            .map_err(|_| Error::InvalidModule(format!("matrix key {key:?} is not a generator position")))?;
        if i >= ngens {
            return Err(Error::InvalidModule(format!("generator position {i} out of range for {ngens} generators")));
        }
        if rows.len() != j.dim || rows.iter().any(|r| r.len() != j.dim) {
            return Err(Error::InvalidModule(format!("matrix {i} is not {0}×{0}", j.dim)));
        }
        mats[i] = Matrix::from_rows(j.prime, rows);
    }
    let mats = mats
        .into_iter()
        .enumerate()
        .map(|(i, m)| m.ok_or_else(|| Error::InvalidModule(format!("missing matrix for generator {i}"))))
        .collect::<Result<Vec<_>>>()?;
    FpModule::with_dim(group, j.prime, j.dim, mats)
}

pub fn module_to_json(a: &FpModule) -> ModuleJson {
    let matrices = a
        .generator_matrices()
        .iter()
        .enumerate()
        .map(|(i, m)| (i.to_string(), (0..m.rows()).map(|r| (0..m.cols()).map(|c| m.get(r, c) as i64).collect()).collect()))
        .collect();
    ModuleJson { prime: a.prime(), dim: a.dim(), group: Some(Ref::Inline(group_to_json(a.group()))), gamma_group: None, matrices }
}

/// A rational as decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalString {
    pub numerator: String,
    pub denominator: String,
}

impl RationalString {
    pub fn big(r: &num_rational::BigRational) -> Self {
        RationalString { numerator: r.numer().to_string(), denominator: r.denom().to_string() }
    }

    pub fn small(r: &num_rational::Rational64) -> Self {
        RationalString { numerator: r.numer().to_string(), denominator: r.denom().to_string() }
    }

    fn parse<T: std::str::FromStr>(&self) -> std::result::Result<(T, T), String> {
        let n = self.numerator.parse().map_err(|_| format!("bad numerator {:?}", self.numerator))?;
        let d = self.denominator.parse().map_err(|_| format!("bad denominator {:?}", self.denominator))?;
        Ok((n, d))
    }
}

/// `#[serde(with = ...)]` adapters writing rationals as decimal strings.
pub mod ratio_serde {
    use num_bigint::BigInt;
    use num_rational::{BigRational, Rational64};
    use num_traits::Zero;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::RationalString;

    pub mod big {
        use super::*;

        pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
            RationalString::big(r).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
            let (n, den): (BigInt, BigInt) = RationalString::deserialize(d)?.parse().map_err(D::Error::custom)?;
            if den.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            Ok(BigRational::new(n, den))
        }
    }

    pub mod small {
        use super::*;

        pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
            RationalString::small(r).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational64, D::Error> {
            let (n, den): (i64, i64) = RationalString::deserialize(d)?.parse().map_err(D::Error::custom)?;
            if den == 0 {
                return Err(D::Error::custom("zero denominator"));
            }
            Ok(Rational64::new(n, den))
        }
    }

    pub mod small_opt {
        use super::*;

        pub fn serialize<S: Serializer>(r: &Option<Rational64>, s: S) -> Result<S::Ok, S::Error> {
            r.as_ref().map(RationalString::small).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational64>, D::Error> {
            match Option::<RationalString>::deserialize(d)? {
                None => Ok(None),
                Some(r) => {
                    let (n, den): (i64, i64) = r.parse().map_err(D::Error::custom)?;
                    if den == 0 {
                        return Err(D::Error::custom("zero denominator"));
                    }
                    Ok(Some(Rational64::new(n, den)))
                }
            }
        }
    }
}
