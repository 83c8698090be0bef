use serde::{Deserialize, Serialize};

use super::in_left_perp;
use crate::error::{Error, Result};
use crate::modcat::{extend_along, Module, ModuleMap, Universe};
use crate::recol::{canonical_ses, Functor, Recollement, SesKind, Universes};
use crate::report::Verdict;
use crate::subcat::{approximation, Direction, Subcat};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoresolutionStep {
    /// The `add X_A` term approximating `i*` of the current image.
    pub left_term: Vec<(String, usize)>,
    /// The `add X_C` term approximating `j*` of the current image.
    pub right_term: Vec<(String, usize)>,
    /// `i_*(left_term) ⊕ j_!(right_term)` decomposed in the middle universe.
    pub middle_term: Vec<(String, usize)>,
    pub cokernel: Vec<(String, usize)>,
    pub sequence_exact: bool,
    /// `j_!` of the right approximation extends along the counit.
    pub lifted: bool,
    pub injective: bool,
    pub middle_in_x: bool,
    pub cokernel_in_perp: Verdict,
}

/// Coresolution of a middle module by the glued class, built stepwise from
/// the canonical sequence `0 -> j_!j*M -> M -> i_*i*M -> 0` and the
/// approximations on both sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoresolutionCertificate {
    pub module: String,
    pub steps: Vec<CoresolutionStep>,
    /// Step at which a cokernel class repeats, closing the coresolution.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub period_from: Option<usize>,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure: Option<String>,
}

fn named(u: &Universe, parts: &[(usize, usize)]) -> Vec<(String, usize)> {
    parts.iter().map(|&(i, k)| (u.name(i).to_string(), k)).collect()
}

fn label(u: &Universe, m: &Module) -> Result<String> {
    let parts = u.identify(m)?;
    Ok(if parts.len() == 1 && parts[0].1 == 1 {
        u.name(parts[0].0).to_string()
    } else {
        format!("[{}]", m.dim_string())
    })
}

pub fn coresolution_certificate(
    r: &Recollement,
    u: &Universes,
    m: &Module,
    x_a: &Subcat,
    x_c: &Subcat,
    x: &Subcat,
    depth: usize,
) -> Result<CoresolutionCertificate> {
    let mut cert = CoresolutionCertificate {
        module: label(&u.middle, m)?,
        steps: Vec::new(),
        period_from: None,
        valid: false,
        failure: None,
    };
    let mut cur = m.clone();
    let mut cur_parts = u.middle.identify(m)?;
    let mut seen: Vec<Vec<(usize, usize)>> = Vec::new();
    for step in 0..=depth {
        if cur.is_zero() {
            cert.valid = true;
            return Ok(cert);
        }
        if let Some(k) = seen.iter().position(|s| *s == cur_parts) {
            cert.period_from = Some(k);
            cert.valid = true;
            return Ok(cert);
        }
        if step == depth {
            break;
        }
        seen.push(cur_parts.clone());

        let ses = match canonical_ses(r, &cur, SesKind::Left) {
            Ok(ses) => ses,
            Err(Error::Refused { hypothesis, detail }) => {
                cert.failure = Some(format!("step {step}: {hypothesis} fails ({detail})"));
                return Ok(cert);
            }
            Err(e) => return Err(e),
        };
        let left = r.apply(Functor::IStar, &cur)?;
        let right = r.apply(Functor::JStar, &cur)?;
        let d = approximation(&u.left, &left, x_a, Direction::Left)?;
        let q = approximation(&u.right, &right, x_c, Direction::Left)?;
        let eps_left = r.apply_map(Functor::ILowerStar, &d.map)?.after(&ses.epi)?;
        let jq = r.apply_map(Functor::JShriek, &q.map)?;
        let g = extend_along(&jq, &ses.mono);
        let (lifted, g) = match g {
            Some(g) => (true, g),
            None => (false, ModuleMap::zero(&cur, jq.target())),
        };
        let sum = Module::direct_sum(&[eps_left.target(), jq.target()], r.middle());
        let eps = ModuleMap::into_sum(&cur, &[eps_left, g], &sum);
        let middle_parts = u.middle.identify(&sum.module)?;
        let middle_in_x = middle_parts.iter().all(|&(i, _)| x.contains(i));
        let injective = eps.is_injective();
        let coker = eps.cokernel().module;
        let coker_parts = u.middle.identify(&coker)?;
        let cokernel_in_perp = in_left_perp(&u.middle, &coker_parts, x);
        cert.steps.push(CoresolutionStep {
            left_term: named(&u.left, &d.approximating),
            right_term: named(&u.right, &q.approximating),
            middle_term: named(&u.middle, &middle_parts),
            cokernel: named(&u.middle, &coker_parts),
            sequence_exact: ses.exact,
            lifted,
            injective,
            middle_in_x,
            cokernel_in_perp,
        });
        let problem = if !ses.exact {
            Some("canonical sequence is not exact")
        } else if !lifted {
            Some("j_! of the right approximation does not extend along the counit")
        } else if !injective {
            Some("assembled map is not injective")
        } else if !middle_in_x {
            Some("middle term is not in the glued class")
        } else if cokernel_in_perp != Verdict::Pass {
            Some("cokernel is not certified in the left Ext-orthogonal of the glued class")
        } else {
            None
        };
        if let Some(p) = problem {
            cert.failure = Some(format!("step {step}: {p}"));
            return Ok(cert);
        }
        cur = coker;
        cur_parts = coker_parts;
    }
    cert.failure = Some(format!("no closure within depth {depth}"));
    Ok(cert)
}
