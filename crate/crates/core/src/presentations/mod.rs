//! Multiplicities of simple modules in presentation kernels: formula values,
//! oracle values on finite covers, admissible corrections and relator rank.

mod formula;
pub(crate) mod oracle;
pub mod truncation;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

pub use formula::{
    admissible_multiplicity, multiplicity_formula, multiplicity_terms, prime_divisors, relator_rank,
    AdmissibleMultiplicity, MultiplicityTerms, RankWitness, RelatorRank,
};
pub use oracle::{
    abelian_multiplicity_oracle, check_cover, msum_decompose, multiplicity_oracle, semidirect_map, MsumReport,
};

use crate::flmod::FpModule;
use crate::group::{GammaGroup, GroupHom};
use crate::{Limits, Result};

/// One module's row of a presentation report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationRow {
    pub module: usize,
    pub prime: u32,
    pub dim: usize,
    pub m_formula: Option<usize>,
    pub terms: Option<MultiplicityTerms>,
    pub formula_error: Option<String>,
    pub m_oracle: Option<usize>,
    pub oracle_error: Option<String>,
    #[serde(with = "crate::io::ratio_serde::small_opt")]
    pub m_admissible: Option<Rational64>,
    pub admissible_warning: Option<String>,
    /// Some(agreement) when both the formula and the oracle were evaluated.
    pub agree: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationReport {
    pub n: usize,
    pub gamma: String,
    pub target: String,
    pub target_order: usize,
    pub admissible: bool,
    pub rows: Vec<PresentationRow>,
    pub relator_rank: Option<RelatorRank>,
    pub relator_rank_error: Option<String>,
}

/// Evaluates every module against the formula, the admissible correction when
/// the target is admissible, and the oracle when a cover `(F, ω)` is given.
pub fn presentation_report(
    n: usize,
    h: &GammaGroup,
    modules: &[FpModule],
    cover: Option<(&GammaGroup, &GroupHom)>,
    limits: &Limits,
) -> Result<PresentationReport> {
    let admissible = h.is_admissible();
    let rows = modules
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let mut row = PresentationRow {
                module: i,
                prime: a.prime(),
                dim: a.dim(),
                m_formula: None,
                terms: None,
                formula_error: None,
                m_oracle: None,
                oracle_error: None,
                m_admissible: None,
                admissible_warning: None,
                agree: None,
            };
            match multiplicity_terms(n, h, a, limits) {
                Ok(t) => {
                    row.m_formula = Some(t.value);
                    if admissible && !t.divisible {
                        if let Ok(ad) = admissible_multiplicity(n, h, a, limits) {
                            row.m_admissible = Some(ad.value);
                            row.admissible_warning = ad.warning;
                        }
                    }
                    row.terms = Some(t);
                }
                Err(e) => row.formula_error = Some(e.to_string()),
            }
            if let Some((f, omega)) = cover {
                match multiplicity_oracle(f, h, omega, a, limits) {
                    Ok(m) => row.m_oracle = Some(m),
                    Err(e) => row.oracle_error = Some(e.to_string()),
                }
            }
            if let (Some(x), Some(y)) = (row.m_formula, row.m_oracle) {
                row.agree = Some(x == y);
            }
            row
        })
        .collect();
    let (relator_rank, relator_rank_error) = match relator_rank(n, h, Some(modules), None, limits) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(PresentationReport {
        n,
        gamma: h.gamma().name().unwrap_or("Γ").to_string(),
        target: h.group().name().unwrap_or("G").to_string(),
        target_order: h.order(),
        admissible,
        rows,
        relator_rank,
        relator_rank_error,
    })
}
