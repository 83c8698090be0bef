//! Gluing subcategories of the outer categories into the middle one and
//! restricting them back, behind explicit hypothesis gates.

mod coresolution;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::modcat::{ExtVerdict, Module, Universe};
use crate::recol::{Functor, Recollement, Universes};
use crate::report::{CheckEntry, CheckReport, Hypothesis, Verdict};
use crate::subcat::{is_functorially_finite, perp, Direction, PerpKind, PerpSide, Subcat};
use crate::tilt::{
    is_tau_cotorsion_torsion_triple, is_wakamatsu_tilting, phi, psi, self_orthogonality, support_tau_report,
    tau_triple_report, wakamatsu_report, weak_support_tau_report, TauTriple,
};

pub use coresolution::{coresolution_certificate, CoresolutionCertificate, CoresolutionStep};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GlueOptions {
    /// Run the construction even when a hypothesis fails; the job is then marked unsound.
    pub force: bool,
    /// Depth bound for coresolutions; defaults to `2 * |universe| + 2`.
    pub depth: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum JobStatus {
    /// All hypotheses hold and every verification entry passed.
    Verified,
    /// The construction ran but some verification entry failed or is undecided.
    NotVerified,
    /// A hypothesis failed and the job was not forced.
    Refused,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GlueResult {
    Glued(Subcat),
    Restricted { left: Subcat, right: Subcat },
    GluedTriple { glued: Subcat, triple: TauTriple },
    RestrictedTriples { left: TauTriple, right: TauTriple },
}

/// Subcategories rendered by canonical module names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedTriple {
    pub l: Vec<String>,
    pub d: Vec<String>,
    pub f: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NamedResult {
    Glued { middle: Vec<String> },
    Restricted { left: Vec<String>, right: Vec<String> },
    GluedTriple { glued: Vec<String>, triple: NamedTriple },
    RestrictedTriples { left: NamedTriple, right: NamedTriple },
}

pub fn named_triple(u: &Universe, t: &TauTriple) -> NamedTriple {
    NamedTriple {
        l: t.l.names(u),
        d: t.d.names(u),
        f: t.f.names(u),
    }
}

impl GlueResult {
    pub fn named(&self, u: &Universes) -> NamedResult {
        match self {
            GlueResult::Glued(s) => NamedResult::Glued {
                middle: s.names(&u.middle),
            },
            GlueResult::Restricted { left, right } => NamedResult::Restricted {
                left: left.names(&u.left),
                right: right.names(&u.right),
            },
            GlueResult::GluedTriple { glued, triple } => NamedResult::GluedTriple {
                glued: glued.names(&u.middle),
                triple: named_triple(&u.middle, triple),
            },
            GlueResult::RestrictedTriples { left, right } => NamedResult::RestrictedTriples {
                left: named_triple(&u.left, left),
                right: named_triple(&u.right, right),
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct GlueJob {
    pub operation: &'static str,
    /// Functors whose images constrain membership (gluing operations only).
    pub probes: Vec<Functor>,
    pub hypotheses: Vec<Hypothesis>,
    pub status: JobStatus,
    /// Forced past a failed hypothesis.
    pub unsound: bool,
    pub result: Option<GlueResult>,
    pub verification: CheckReport,
    /// Facts recorded for the reader that are not asserted by the job.
    pub observations: Vec<CheckEntry>,
    pub certificates: Vec<CoresolutionCertificate>,
}

impl GlueJob {
    fn start(operation: &'static str, probes: &[Functor], hypotheses: Vec<Hypothesis>, opts: GlueOptions) -> Self {
        let failed = hypotheses.iter().any(|h| h.verdict != Verdict::Pass);
        Self {
            operation,
            probes: probes.to_vec(),
            hypotheses,
            status: if failed && !opts.force {
                JobStatus::Refused
            } else {
                JobStatus::NotVerified
            },
            unsound: failed && opts.force,
            result: None,
            verification: CheckReport::default(),
            observations: Vec::new(),
            certificates: Vec::new(),
        }
    }

    pub fn refused(&self) -> bool {
        self.status == JobStatus::Refused
    }

    /// The hypotheses that did not pass.
    pub fn failed_hypotheses(&self) -> impl Iterator<Item = &Hypothesis> {
        self.hypotheses.iter().filter(|h| h.verdict != Verdict::Pass)
    }

    fn finish(mut self, result: GlueResult, verification: CheckReport) -> Self {
        self.status = if verification.verdict() == Verdict::Pass {
            JobStatus::Verified
        } else {
            JobStatus::NotVerified
        };
        self.result = Some(result);
        self.verification = verification;
        self
    }
}

fn hypothesis(name: impl Into<String>, verdict: Verdict, witness: impl Into<String>) -> Hypothesis {
    Hypothesis {
        name: name.into(),
        verdict,
        witness: witness.into(),
    }
}

fn exactness_gates(r: &Recollement, need_star: bool, need_shriek: bool) -> Vec<Hypothesis> {
    let ex = r.exactness();
    let mut out = Vec::new();
    if need_star {
        out.push(hypothesis("i* exact", Verdict::from_bool(ex.i_star), ex.witnesses[0].clone()));
    }
    if need_shriek {
        out.push(hypothesis("i^! exact", Verdict::from_bool(ex.i_shriek), ex.witnesses[1].clone()));
    }
    out
}

fn report_gate(name: String, rep: &CheckReport) -> Hypothesis {
    let v = rep.verdict();
    let witness = match rep.failures().next() {
        Some(e) => format!(
            "{} fails for {}{}",
            e.condition,
            e.subject,
            e.detail.as_ref().map(|d| format!(" ({d})")).unwrap_or_default()
        ),
        None => format!("{} conditions checked", rep.entries.len()),
    };
    hypothesis(name, v, witness)
}

fn universe_of<'a>(u: &'a Universes, f: Functor) -> &'a Universe {
    match Recollement::codomain(f) {
        crate::recol::Side::Left => &u.left,
        crate::recol::Side::Middle => &u.middle,
        crate::recol::Side::Right => &u.right,
    }
}

/// Universe indices of the summands of `F(U_z)` for a middle object `z`.
pub fn image_of(r: &Recollement, u: &Universes, f: Functor, z: usize) -> Result<Vec<usize>> {
    let m = r.apply(f, u.middle.module(z))?;
    universe_of(u, f).support(&m)
}

/// `add F(S)` for a middle subcategory `S`, zero images dropped.
pub fn image_subcat(r: &Recollement, u: &Universes, f: Functor, s: &Subcat) -> Result<Subcat> {
    let mut out = Vec::new();
    for &z in s.members() {
        out.extend(image_of(r, u, f, z)?);
    }
    Ok(Subcat::new(out))
}

/// The middle objects whose probe images all lie in the designated subcategories.
pub fn glue_by_membership(
    r: &Recollement,
    u: &Universes,
    s_a: &Subcat,
    s_c: &Subcat,
    probes: &[Functor],
) -> Result<Subcat> {
    let mut out = Vec::new();
    'objects: for z in 0..u.middle.len() {
        for &f in probes {
            let target = match Recollement::codomain(f) {
                crate::recol::Side::Left => s_a,
                crate::recol::Side::Right => s_c,
                crate::recol::Side::Middle => continue,
            };
            if !image_of(r, u, f, z)?.iter().all(|&i| target.contains(i)) {
                continue 'objects;
            }
        }
        out.push(z);
    }
    Ok(Subcat::new(out))
}

/// `outer(inner(source)) ⊆ target` on the middle universe, with the first counterexample.
fn closure_gate(
    r: &Recollement,
    u: &Universes,
    outer: Functor,
    inner: Functor,
    source: &Subcat,
    target: &Subcat,
    source_name: &str,
    target_name: &str,
) -> Result<Hypothesis> {
    let name = format!("{outer}{inner}({source_name}) ⊆ {target_name}", inner = &inner.name()[..]);
    for &z in source.members() {
        let m = r.compose(&[outer, inner], u.middle.module(z))?;
        let parts = u.middle.support(&m)?;
        if let Some(&bad) = parts.iter().find(|&&i| !target.contains(i)) {
            return Ok(hypothesis(
                name,
                Verdict::Fail,
                format!(
                    "{outer}{}({}) has the summand {} outside {target_name}",
                    inner.name(),
                    u.middle.name(z),
                    u.middle.name(bad)
                ),
            ));
        }
    }
    Ok(hypothesis(name, Verdict::Pass, format!("checked on {} objects", source.len())))
}

fn prefixed(rep: CheckReport, prefix: &str) -> CheckReport {
    CheckReport {
        entries: rep
            .entries
            .into_iter()
            .map(|mut e| {
                e.subject = format!("{prefix}: {}", e.subject);
                e
            })
            .collect(),
    }
}

fn depth_for(opts: GlueOptions, u: &Universe) -> usize {
    opts.depth.unwrap_or_else(|| crate::tilt::default_depth(u))
}

/// Glues Wakamatsu tilting subcategories of the outer categories.
pub fn glue_wakamatsu(
    r: &Recollement,
    u: &Universes,
    x_a: &Subcat,
    x_c: &Subcat,
    opts: GlueOptions,
) -> Result<GlueJob> {
    let probes = [Functor::IShriek, Functor::JStar];
    let mut hyps = exactness_gates(r, true, true);
    hyps.push(report_gate("X_A is Wakamatsu tilting".into(), &wakamatsu_report(&u.left, x_a)?.0));
    hyps.push(report_gate("X_C is Wakamatsu tilting".into(), &wakamatsu_report(&u.right, x_c)?.0));
    let job = GlueJob::start("glue_wakamatsu", &probes, hyps, opts);
    if job.refused() {
        return Ok(job);
    }
    let x = glue_by_membership(r, u, x_a, x_c, &probes)?;
    let (rep, _) = wakamatsu_report(&u.middle, &x)?;
    let mut ver = prefixed(rep, "glued");
    let depth = depth_for(opts, &u.middle);
    let mut certs = Vec::new();
    for v in 0..r.middle().num_vertices() {
        let p = Module::projective(r.middle(), v);
        let c = coresolution_certificate(r, u, &p, x_a, x_c, &x, depth)?;
        ver.push(CheckEntry::new(
            "coresolution certificate valid",
            format!("P({})", r.middle().quiver().vertices[v]),
            Verdict::from_bool(c.valid),
        ));
        certs.push(c);
    }
    let mut job = job.finish(GlueResult::Glued(x), ver);
    job.certificates = certs;
    Ok(job)
}

/// Restricts a Wakamatsu tilting subcategory of the middle category along `i^!` and `j*`.
pub fn restrict_wakamatsu(r: &Recollement, u: &Universes, y: &Subcat, opts: GlueOptions) -> Result<GlueJob> {
    let mut hyps = exactness_gates(r, false, true);
    hyps.push(report_gate("Y is Wakamatsu tilting".into(), &wakamatsu_report(&u.middle, y)?.0));
    let lp = perp(&u.middle, y, PerpKind::All, PerpSide::Left);
    if lp.is_decided() {
        hyps.push(closure_gate(
            r,
            u,
            Functor::ILowerStar,
            Functor::IShriek,
            &lp.subcat,
            y,
            "⊥Y",
            "Y",
        )?);
    } else {
        hyps.push(hypothesis(
            "i_*i^!(⊥Y) ⊆ Y",
            Verdict::Unknown,
            format!("membership of {} objects in ⊥Y is only bounded", lp.undecided.len()),
        ));
    }
    hyps.push(closure_gate(r, u, Functor::JLowerStar, Functor::JStar, y, y, "Y", "Y")?);
    let job = GlueJob::start("restrict_wakamatsu", &[], hyps, opts);
    if job.refused() {
        return Ok(job);
    }
    let left = image_subcat(r, u, Functor::IShriek, y)?;
    let right = image_subcat(r, u, Functor::JStar, y)?;
    let mut ver = CheckReport::default();
    ver.extend(prefixed(self_orthogonality(&u.left, &left), "i^!(Y) self-orthogonal"));
    ver.extend(prefixed(self_orthogonality(&u.right, &right), "j*(Y) self-orthogonal"));
    for (name, uu, s) in [("i^!(Y)", &u.left, &left), ("j*(Y)", &u.right, &right)] {
        let v = is_wakamatsu_tilting(uu, s)?;
        ver.push(CheckEntry::new("Wakamatsu tilting", name, v));
    }
    Ok(job.finish(GlueResult::Restricted { left, right }, ver))
}

/// Glues weak support τ-tilting subcategories.
pub fn glue_weak_tau(r: &Recollement, u: &Universes, z_a: &Subcat, z_c: &Subcat, opts: GlueOptions) -> Result<GlueJob> {
    let probes = [Functor::IShriek, Functor::JStar];
    let mut hyps = exactness_gates(r, true, true);
    hyps.push(report_gate(
        "Z_A is weak support τ-tilting".into(),
        &weak_support_tau_report(&u.left, z_a)?,
    ));
    hyps.push(report_gate(
        "Z_C is weak support τ-tilting".into(),
        &weak_support_tau_report(&u.right, z_c)?,
    ));
    let job = GlueJob::start("glue_weak_tau", &probes, hyps, opts);
    if job.refused() {
        return Ok(job);
    }
    let z = glue_by_membership(r, u, z_a, z_c, &probes)?;
    let ver = prefixed(weak_support_tau_report(&u.middle, &z)?, "glued");
    Ok(job.finish(GlueResult::Glued(z), ver))
}

/// Restricts a weak support τ-tilting subcategory along `i*` and `j*`.
pub fn restrict_weak_tau(r: &Recollement, u: &Universes, y: &Subcat, opts: GlueOptions) -> Result<GlueJob> {
    let mut hyps = exactness_gates(r, true, true);
    hyps.push(report_gate(
        "Y is weak support τ-tilting".into(),
        &weak_support_tau_report(&u.middle, y)?,
    ));
    hyps.push(closure_gate(r, u, Functor::ILowerStar, Functor::IStar, y, y, "Y", "Y")?);
    hyps.push(closure_gate(r, u, Functor::JLowerStar, Functor::JStar, y, y, "Y", "Y")?);
    let job = GlueJob::start("restrict_weak_tau", &[], hyps, opts);
    if job.refused() {
        return Ok(job);
    }
    let left = image_subcat(r, u, Functor::IStar, y)?;
    let right = image_subcat(r, u, Functor::JStar, y)?;
    let mut ver = prefixed(weak_support_tau_report(&u.left, &left)?, "i*(Y)");
    ver.extend(prefixed(weak_support_tau_report(&u.right, &right)?, "j*(Y)"));
    Ok(job.finish(GlueResult::Restricted { left, right }, ver))
}

/// Glues support τ-tilting subcategories through the three-probe class.
pub fn glue_support_tau(
    r: &Recollement,
    u: &Universes,
    z_a: &Subcat,
    z_c: &Subcat,
    opts: GlueOptions,
) -> Result<GlueJob> {
    let probes = [Functor::IStar, Functor::IShriek, Functor::JStar];
    let mut hyps = exactness_gates(r, true, true);
    hyps.push(report_gate("Z_A is support τ-tilting".into(), &support_tau_report(&u.left, z_a)?));
    hyps.push(report_gate("Z_C is support τ-tilting".into(), &support_tau_report(&u.right, z_c)?));
    let mut job = GlueJob::start("glue_support_tau", &probes, hyps, opts);
    if job.refused() {
        return Ok(job);
    }
    let z = glue_by_membership(r, u, z_a, z_c, &probes)?;
    let mut ver = prefixed(support_tau_report(&u.middle, &z)?, "glued");
    let two = glue_by_membership(r, u, z_a, z_c, &[Functor::IStar, Functor::JStar])?;
    let fin = is_functorially_finite(&u.middle, &two, Direction::Right)?;
    ver.push(
        CheckEntry::new(
            "class cut out by i* and j* is contravariantly finite (within the universe)",
            "glued",
            Verdict::from_bool(fin.holds),
        )
        .with_detail(format!("{} certificates", fin.certificates.len())),
    );
    let weak = glue_by_membership(r, u, z_a, z_c, &[Functor::IShriek, Functor::JStar])?;
    job.observations.push(
        CheckEntry::new(
            "class cut out by i^! and j* coincides with the three-probe class",
            "glued",
            Verdict::from_bool(weak == z),
        )
        .with_detail(format!("{:?} vs {:?}", weak.names(&u.middle), z.names(&u.middle))),
    );
    Ok(job.finish(GlueResult::Glued(z), ver))
}

/// Restricts a support τ-tilting subcategory along `i*` and `j*`.
pub fn restrict_support_tau(r: &Recollement, u: &Universes, y: &Subcat, opts: GlueOptions) -> Result<GlueJob> {
    let mut hyps = exactness_gates(r, true, true);
    hyps.push(report_gate("Y is support τ-tilting".into(), &support_tau_report(&u.middle, y)?));
    hyps.extend(four_closures(r, u, y, "Y")?);
    let job = GlueJob::start("restrict_support_tau", &[], hyps, opts);
    if job.refused() {
        return Ok(job);
    }
    let left = image_subcat(r, u, Functor::IStar, y)?;
    let right = image_subcat(r, u, Functor::JStar, y)?;
    let mut ver = prefixed(support_tau_report(&u.left, &left)?, "i*(Y)");
    ver.extend(prefixed(support_tau_report(&u.right, &right)?, "j*(Y)"));
    Ok(job.finish(GlueResult::Restricted { left, right }, ver))
}

fn four_closures(r: &Recollement, u: &Universes, y: &Subcat, name: &str) -> Result<Vec<Hypothesis>> {
    [
        (Functor::ILowerStar, Functor::IShriek),
        (Functor::ILowerStar, Functor::IStar),
        (Functor::JShriek, Functor::JStar),
        (Functor::JLowerStar, Functor::JStar),
    ]
    .into_iter()
    .map(|(o, i)| closure_gate(r, u, o, i, y, y, name, name))
    .collect()
}

/// Glues τ-cotorsion torsion triples via Ψ, the three-probe class and Φ.
pub fn glue_triple(
    r: &Recollement,
    u: &Universes,
    t_a: &TauTriple,
    t_c: &TauTriple,
    opts: GlueOptions,
) -> Result<GlueJob> {
    let probes = [Functor::IStar, Functor::IShriek, Functor::JStar];
    let mut hyps = exactness_gates(r, true, true);
    hyps.push(report_gate(
        "T_A is a τ-cotorsion torsion triple".into(),
        &tau_triple_report(&u.left, t_a)?,
    ));
    hyps.push(report_gate(
        "T_C is a τ-cotorsion torsion triple".into(),
        &tau_triple_report(&u.right, t_c)?,
    ));
    let job = GlueJob::start("glue_triple", &probes, hyps, opts);
    if job.refused() {
        return Ok(job);
    }
    let z = glue_by_membership(r, u, &psi(t_a), &psi(t_c), &probes)?;
    let triple = phi(&u.middle, &z)?;
    let ver = prefixed(tau_triple_report(&u.middle, &triple)?, "glued triple");
    Ok(job.finish(GlueResult::GluedTriple { glued: z, triple }, ver))
}

/// Restricts a τ-cotorsion torsion triple of the middle category to both sides.
pub fn restrict_triple(r: &Recollement, u: &Universes, t: &TauTriple, opts: GlueOptions) -> Result<GlueJob> {
    let mut hyps = exactness_gates(r, true, true);
    hyps.push(report_gate(
        "T is a τ-cotorsion torsion triple".into(),
        &tau_triple_report(&u.middle, t)?,
    ));
    let core = psi(t);
    hyps.extend(four_closures(r, u, &core, "L∩D")?);
    let job = GlueJob::start("restrict_triple", &[], hyps, opts);
    if job.refused() {
        return Ok(job);
    }
    let left = phi(&u.left, &image_subcat(r, u, Functor::IStar, &core)?)?;
    let right = phi(&u.right, &image_subcat(r, u, Functor::JStar, &core)?)?;
    let mut ver = CheckReport::default();
    ver.push(CheckEntry::new(
        "τ-cotorsion torsion triple",
        "left",
        Verdict::from_bool(is_tau_cotorsion_torsion_triple(&u.left, &left)?),
    ));
    ver.push(CheckEntry::new(
        "τ-cotorsion torsion triple",
        "right",
        Verdict::from_bool(is_tau_cotorsion_torsion_triple(&u.right, &right)?),
    ));
    Ok(job.finish(GlueResult::RestrictedTriples { left, right }, ver))
}

/// `Ext^{>=1}(parts, X) = 0` as a verdict.
pub(crate) fn in_left_perp(u: &Universe, parts: &[(usize, usize)], x: &Subcat) -> Verdict {
    let mut out = Verdict::Pass;
    for &(i, _) in parts {
        for &t in x.members() {
            match u.ext_all(i, t) {
                ExtVerdict::Nonzero(_) => return Verdict::Fail,
                ExtVerdict::BoundedOnly(_) => out = Verdict::Unknown,
                ExtVerdict::VanishesAll => {}
            }
        }
    }
    out
}

#[cfg(test)]
mod tests;
