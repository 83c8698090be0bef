//! Pipeline: build algebra, recollement and universes, run the task, assemble the report.

use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use recollement::glue::{self, GlueJob, GlueOptions, JobStatus};
use recollement::modcat::Universe;
use recollement::recol::Universes;
use recollement::report::{CheckEntry, CheckReport, Verdict};
use recollement::subcat::Subcat;
use recollement::tilt::{self, TauTriple};
use recollement::{Algebra, Recollement};
use serde_json::{json, Value};

use crate::report::{algebra_hash, Certificate, Report, Status, UniverseSection, VerificationEntry};
use crate::spec::{JobSpec, Task};

/// Command-line overrides of the spec file.
#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub dmax: Option<usize>,
    pub depth: Option<usize>,
    pub n_max: Option<usize>,
    pub force: bool,
}

pub fn run_text(text: &str, opts: RunOptions) -> anyhow::Result<Report> {
    let spec = JobSpec::parse(text)?;
    run_spec(&spec, opts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SideArg {
    Left,
    Middle,
    Right,
}

struct Ctx<'a> {
    spec: &'a JobSpec,
    r: Recollement,
    u: Universes,
    depth: Option<usize>,
    n_max: usize,
    force: bool,
}

/// What a task produced before it is folded into a report.
#[derive(Default)]
struct Outcome {
    hypotheses: Vec<recollement::report::Hypothesis>,
    refused: bool,
    unsound: bool,
    result: Option<Value>,
    verification: Vec<VerificationEntry>,
    observations: Vec<CheckEntry>,
    certificates: Vec<Certificate>,
}

impl Outcome {
    fn checks(rep: CheckReport) -> Vec<VerificationEntry> {
        rep.entries.into_iter().map(VerificationEntry::from).collect()
    }
}

pub fn run_spec(spec: &JobSpec, opts: RunOptions) -> anyhow::Result<Report> {
    let algebra = Arc::new(Algebra::build(&spec.algebra).context("building the algebra")?);
    let names: Vec<&str> = spec.idempotent.iter().map(String::as_str).collect();
    let r = Recollement::build_named(algebra, &names).context("building the recollement")?;
    let dmax = opts.dmax.unwrap_or(spec.dmax);
    let u = r.universes(dmax).context("enumerating indecomposables")?;
    let universe = UniverseSection {
        algebra: spec.algebra.label.clone(),
        algebra_hash: algebra_hash(&spec.algebra),
        p: spec.algebra.field,
        dmax,
        idempotent: r.idempotent_names(),
        middle: u.middle.describe(),
        left: u.left.describe(),
        right: u.right.describe(),
    };
    let ctx = Ctx {
        spec,
        r,
        u,
        depth: opts.depth.or(spec.depth),
        n_max: opts.n_max.unwrap_or(spec.n_max),
        force: opts.force || spec.force,
    };
    let out = ctx.run()?;
    let rep = CheckReport {
        entries: out
            .verification
            .iter()
            .map(|e| CheckEntry::new(e.condition.clone(), e.subject.clone(), e.verdict))
            .collect(),
    };
    let status = if out.refused {
        Status::Refused
    } else if out.unsound {
        Status::Unsound
    } else if rep.verdict() == Verdict::Pass && out.hypotheses.iter().all(|h| h.verdict == Verdict::Pass) {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(Report {
        universe,
        task: spec.task.name().to_string(),
        status,
        hypotheses: out.hypotheses,
        result: out.result,
        verification: out.verification,
        observations: out.observations,
        certificates: out.certificates,
    })
}

fn names_json(u: &Universe, s: &Subcat) -> Value {
    json!(s.names(u))
}

fn triple_json(u: &Universe, t: &TauTriple) -> Value {
    serde_json::to_value(glue::named_triple(u, t)).expect("serializable")
}

impl Ctx<'_> {
    fn universe(&self, side: SideArg) -> &Universe {
        match side {
            SideArg::Left => &self.u.left,
            SideArg::Middle => &self.u.middle,
            SideArg::Right => &self.u.right,
        }
    }

    fn side(&self) -> anyhow::Result<SideArg> {
        match self.spec.args.get("side") {
            None => Ok(SideArg::Middle),
            Some(a) => match a.value.as_str() {
                "left" => Ok(SideArg::Left),
                "middle" => Ok(SideArg::Middle),
                "right" => Ok(SideArg::Right),
                v => bail!("line {}, column {}: side must be left, middle or right, found {v:?}", a.line, a.column),
            },
        }
    }

    fn subcat(&self, key: &str, side: SideArg) -> anyhow::Result<Subcat> {
        let arg = self
            .spec
            .args
            .get(key)
            .ok_or_else(|| anyhow!("task {} needs the argument `{key}`", self.spec.task))?;
        let u = self.universe(side);
        let mut members = Vec::new();
        for tok in arg.value.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            match tok {
                "@proj" => members.extend(u.projectives()?),
                "@all" => members.extend(0..u.len()),
                "@empty" => {}
                name => members.push(
                    u.index_of_name(name)
                        .with_context(|| format!("line {}, column {}: argument `{key}`", arg.line, arg.column))?,
                ),
            }
        }
        Ok(Subcat::new(members))
    }

    /// `key.phi = ...` or the three parts `key.l`, `key.d`, `key.f`.
    fn triple(&self, key: &str, side: SideArg) -> anyhow::Result<TauTriple> {
        let phi_key = format!("{key}.phi");
        if self.spec.args.contains_key(&phi_key) {
            let s = self.subcat(&phi_key, side)?;
            return Ok(tilt::phi(self.universe(side), &s)?);
        }
        Ok(TauTriple::new(
            self.subcat(&format!("{key}.l"), side)?,
            self.subcat(&format!("{key}.d"), side)?,
            self.subcat(&format!("{key}.f"), side)?,
        ))
    }

    fn glue_options(&self) -> GlueOptions {
        GlueOptions {
            force: self.force,
            depth: self.depth,
        }
    }

    fn run(&self) -> anyhow::Result<Outcome> {
        let (r, u) = (&self.r, &self.u);
        let opts = self.glue_options();
        match self.spec.task {
            Task::CheckAxioms => {
                let mut rep = r.check_axioms(u)?;
                rep.extend(r.ext_adjunction_check(u, self.n_max)?);
                Ok(Outcome {
                    result: Some(exactness_json(r)),
                    verification: Outcome::checks(rep),
                    ..Outcome::default()
                })
            }
            Task::Exactness => {
                let ex = r.exactness();
                Ok(Outcome {
                    result: Some(exactness_json(r)),
                    verification: vec![CheckEntry::new(
                        "exactness verdicts agree with the canonical sequences of radical layers",
                        "recollement",
                        Verdict::from_bool(ex.ses_consistent),
                    )
                    .into()],
                    ..Outcome::default()
                })
            }
            Task::EnumerateSupportTau | Task::EnumerateWeakSupportTau | Task::EnumerateWakamatsu => {
                let side = self.side()?;
                let uu = self.universe(side);
                let found = match self.spec.task {
                    Task::EnumerateSupportTau => tilt::enumerate_support_tau_tilting(uu)?,
                    Task::EnumerateWeakSupportTau => tilt::enumerate_weak_support_tau_tilting(uu)?,
                    _ => tilt::enumerate_wakamatsu_tilting(uu)?,
                };
                let checked = 1u64 << uu.len();
                Ok(Outcome {
                    result: Some(json!({
                        "side": side_name(side),
                        "count": found.len(),
                        "subcategories": found.iter().map(|s| names_json(uu, s)).collect::<Vec<_>>(),
                    })),
                    verification: vec![CheckEntry::new(
                        "every subset of the universe decided",
                        side_name(side),
                        Verdict::Pass,
                    )
                    .with_detail(format!("{checked} subsets"))
                    .into()],
                    ..Outcome::default()
                })
            }
            Task::EnumerateTriples => {
                let side = self.side()?;
                let uu = self.universe(side);
                let found = tilt::enumerate_tau_triples(uu)?;
                Ok(Outcome {
                    result: Some(json!({
                        "side": side_name(side),
                        "count": found.len(),
                        "triples": found.iter().map(|t| triple_json(uu, t)).collect::<Vec<_>>(),
                    })),
                    verification: vec![CheckEntry::new("every triple of subsets decided", side_name(side), Verdict::Pass).into()],
                    ..Outcome::default()
                })
            }
            Task::Bijection => self.bijection(),
            Task::IsWakamatsu | Task::IsSupportTau | Task::IsWeakSupportTau => {
                let side = self.side()?;
                let uu = self.universe(side);
                let s = self.subcat("subcat", side)?;
                let mut out = Outcome::default();
                let rep = match self.spec.task {
                    Task::IsWakamatsu => {
                        let (rep, certs) = tilt::wakamatsu_report(uu, &s)?;
                        let vertices = &uu.algebra().quiver().vertices;
                        for (v, c) in certs.into_iter().enumerate() {
                            out.certificates.push(Certificate {
                                id: format!("xw/P({})", vertices[v]),
                                kind: "x_w_coresolution".into(),
                                body: serde_json::to_value(&c)?,
                            });
                        }
                        rep
                    }
                    Task::IsSupportTau => tilt::support_tau_report(uu, &s)?,
                    _ => tilt::weak_support_tau_report(uu, &s)?,
                };
                out.result = Some(json!({
                    "side": side_name(side),
                    "subcat": names_json(uu, &s),
                    "verdict": rep.verdict(),
                }));
                out.verification = Outcome::checks(rep);
                link_certificates(&mut out, "xw/");
                Ok(out)
            }
            Task::GlueWakamatsu => {
                let job = glue::glue_wakamatsu(
                    r,
                    u,
                    &self.subcat("left", SideArg::Left)?,
                    &self.subcat("right", SideArg::Right)?,
                    opts,
                )?;
                Ok(self.from_job(job))
            }
            Task::RestrictWakamatsu => {
                let job = glue::restrict_wakamatsu(r, u, &self.subcat("middle", SideArg::Middle)?, opts)?;
                Ok(self.from_job(job))
            }
            Task::GlueWeakTau => {
                let job = glue::glue_weak_tau(
                    r,
                    u,
                    &self.subcat("left", SideArg::Left)?,
                    &self.subcat("right", SideArg::Right)?,
                    opts,
                )?;
                Ok(self.from_job(job))
            }
            Task::RestrictWeakTau => {
                let job = glue::restrict_weak_tau(r, u, &self.subcat("middle", SideArg::Middle)?, opts)?;
                Ok(self.from_job(job))
            }
            Task::GlueSupportTau => {
                let job = glue::glue_support_tau(
                    r,
                    u,
                    &self.subcat("left", SideArg::Left)?,
                    &self.subcat("right", SideArg::Right)?,
                    opts,
                )?;
                Ok(self.from_job(job))
            }
            Task::RestrictSupportTau => {
                let job = glue::restrict_support_tau(r, u, &self.subcat("middle", SideArg::Middle)?, opts)?;
                Ok(self.from_job(job))
            }
            Task::GlueTriple => {
                let job = glue::glue_triple(
                    r,
                    u,
                    &self.triple("left", SideArg::Left)?,
                    &self.triple("right", SideArg::Right)?,
                    opts,
                )?;
                Ok(self.from_job(job))
            }
            Task::RestrictTriple => {
                let job = glue::restrict_triple(r, u, &self.triple("middle", SideArg::Middle)?, opts)?;
                Ok(self.from_job(job))
            }
        }
    }

    fn bijection(&self) -> anyhow::Result<Outcome> {
        let side = self.side()?;
        let uu = self.universe(side);
        let mut rep = CheckReport::default();
        let taus = tilt::enumerate_support_tau_tilting(uu)?;
        for m in &taus {
            let t = tilt::phi(uu, m)?;
            rep.push(CheckEntry::new(
                "psi(phi(M)) = M",
                format!("{:?}", m.names(uu)),
                Verdict::from_bool(&tilt::psi(&t) == m),
            ));
        }
        let triples = tilt::enumerate_tau_triples(uu)?;
        for t in &triples {
            let back = tilt::phi(uu, &tilt::psi(t))?;
            rep.push(CheckEntry::new(
                "phi(psi(T)) = T",
                format!("{:?}", t.d.names(uu)),
                Verdict::from_bool(&back == t),
            ));
        }
        rep.push(CheckEntry::new(
            "as many triples as support τ-tilting subcategories",
            side_name(side),
            Verdict::from_bool(triples.len() == taus.len()),
        ));
        Ok(Outcome {
            result: Some(json!({
                "side": side_name(side),
                "support_tau_tilting": taus.len(),
                "triples": triples.len(),
            })),
            verification: Outcome::checks(rep),
            ..Outcome::default()
        })
    }

    fn from_job(&self, job: GlueJob) -> Outcome {
        let u = &self.u;
        let mut out = Outcome {
            refused: job.status == JobStatus::Refused,
            unsound: job.unsound,
            result: job
                .result
                .as_ref()
                .map(|r| serde_json::to_value(r.named(u)).expect("serializable")),
            verification: Outcome::checks(job.verification),
            observations: job.observations,
            ..Outcome::default()
        };
        out.hypotheses = job.hypotheses;
        if !job.probes.is_empty() {
            let probes: Vec<&str> = job.probes.iter().map(|f| f.name()).collect();
            if let Some(Value::Object(m)) = out.result.as_mut() {
                m.insert("probes".into(), json!(probes));
            }
        }
        for (v, c) in job.certificates.into_iter().enumerate() {
            let vertex = &self.r.middle().quiver().vertices[v];
            out.certificates.push(Certificate {
                id: format!("coresolution/P({vertex})"),
                kind: "coresolution".into(),
                body: serde_json::to_value(&c).expect("serializable"),
            });
        }
        link_certificates(&mut out, "coresolution/");
        out
    }
}

/// Points verification entries at the certificate carrying their subject.
fn link_certificates(out: &mut Outcome, prefix: &str) {
    for e in &mut out.verification {
        let id = format!("{prefix}{}", e.subject);
        if out.certificates.iter().any(|c| c.id == id) {
            e.certificate = Some(id);
        }
    }
}

fn side_name(s: SideArg) -> &'static str {
    match s {
        SideArg::Left => "left",
        SideArg::Middle => "middle",
        SideArg::Right => "right",
    }
}

fn exactness_json(r: &Recollement) -> Value {
    let ex = r.exactness();
    json!({
        "i*": ex.i_star,
        "i^!": ex.i_shriek,
        "j_!": ex.j_shriek,
        "j_*": ex.j_lower_star,
        "witnesses": ex.witnesses,
    })
}
