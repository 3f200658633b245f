use crate::spec::{Task, TaskSpec};
use serde::Serialize;
use serde_json::{json, Value};
use ssimp_core::basedring::{self, characters, formal_codegree, iso_search, BasedRing, IsoOptions};
use ssimp_core::char2::{char2_report, char2_ring, lucas_sweep, Variant};
use ssimp_core::error::Error;
use ssimp_core::exact_linalg::Fq;
use ssimp_core::groups::{self, GroupRef, Subgroup};
use ssimp_core::modrep::GModule;
use ssimp_core::qcase::{extract_ring, gl2_agreement, QOrder, QcaseGenerators, QcaseReport};
use ssimp_core::ssimp::Budget;
use ssimp_core::ssimp::{
    generator_module, restricted_run, semisimplify, sp_image_check, verify_equivalence,
    verify_restriction_descent, vertex_sweep, FusionRun, RunOptions,
};
use std::fmt::Write as _;
use std::time::Duration;

/// How a task ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    /// A verified mathematical check failed.
    Fail,
    /// A budget was hit or a search gave up.
    Undecided,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 2,
            Status::Undecided => 3,
        }
    }
}

pub struct Outcome {
    pub status: Status,
    pub artifact: Value,
    pub report: String,
    /// Extra artifact for ssimp-group: the run with provenance.
    pub run: Option<Value>,
    /// One-line explanation printed to stderr when the status is not Pass.
    pub note: Option<String>,
}

/// Errors carry the exit code they map to.
#[derive(Debug)]
pub struct TaskError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for TaskError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::OrderCapExceeded { .. }
            | Error::SylowTooLarge(_)
            | Error::IndecomposabilityUnresolved { .. }
            | Error::DimCapExceeded { .. }
            | Error::IsoUndecided
            | Error::ExtensionCapExceeded { .. }
            | Error::NeedsExtension(_)
            | Error::BudgetExceeded(_)
            | Error::ClusteringAmbiguous
            | Error::Timeout => 3,
            Error::NoSolution | Error::NotUnique { .. } => 2,
            _ => 1,
        };
        TaskError {
            code,
            message: e.to_string(),
        }
    }
}

fn malformed(msg: impl Into<String>) -> TaskError {
    TaskError {
        code: 1,
        message: msg.into(),
    }
}

type TResult<T> = Result<T, TaskError>;

fn need<T: Clone>(v: &Option<T>, flag: &str) -> TResult<T> {
    v.clone()
        .ok_or_else(|| malformed(format!("missing --{flag}")))
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("artifacts serialize")
}

fn status_of(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

pub fn run_task(task: Task, spec: &TaskSpec) -> TResult<Outcome> {
    match task {
        Task::SsimpGroup => ssimp_group(spec),
        Task::VerifyEquiv => verify_equiv(spec),
        Task::VerifyDescent => verify_descent(spec),
        Task::VertexSweep => vertex_sweep_task(spec),
        Task::SpCheck => sp_check(spec),
        Task::RingValidate => ring_validate(spec),
        Task::RingIso => ring_iso(spec),
        Task::RingCharacters => ring_characters(spec),
        Task::QcaseGeneric => qcase_generic(spec),
        Task::QcaseRoot => qcase_root(spec),
        Task::Char2 => char2(spec),
        Task::LucasSweep => lucas(spec),
    }
}

fn run_options(spec: &TaskSpec) -> TResult<RunOptions> {
    Ok(RunOptions {
        budget: spec.budget(),
        seed: spec.resolved_seed().map_err(malformed)?,
        jobs: spec.jobs(),
    })
}

fn group_run(spec: &TaskSpec) -> TResult<FusionRun> {
    let group: GroupRef = groups::catalog(&need(&spec.group, "group")?)?;
    let p = need(&spec.prime, "prime")?;
    let field = Fq::new(p, spec.degree.unwrap_or(1))?;
    if spec.generator.is_empty() {
        return Err(malformed("missing --generator"));
    }
    let gens = spec
        .generator
        .iter()
        .map(|g| Ok((g.clone(), generator_module(g, &group, &field)?)))
        .collect::<Result<Vec<(String, GModule)>, Error>>()?;
    Ok(semisimplify(&group, &field, &gens, &run_options(spec)?)?)
}

fn subgroup(spec: &TaskSpec, run: &FusionRun) -> TResult<Subgroup> {
    let p = run.field.p() as u64;
    let g = &run.group;
    match spec.subgroup.as_deref().unwrap_or("normalizer") {
        "normalizer" => Ok(g.normalizer(&g.sylow(p))),
        "sylow" => Ok(g.sylow(p)),
        other => Err(malformed(format!(
            "unknown subgroup {other:?}; use normalizer or sylow"
        ))),
    }
}

fn not_closed(run: &FusionRun) -> Option<String> {
    (!run.closed).then(|| {
        format!(
            "run not closed: {}",
            run.stop_reason
                .clone()
                .unwrap_or_else(|| "budget reached".into())
        )
    })
}

fn ssimp_group(spec: &TaskSpec) -> TResult<Outcome> {
    let run = group_run(spec)?;
    let ring = run.ring()?;
    let mut report = format!(
        "# Semisimplification of {} over GF({}^{})\n\n{} simples, closed: {}\n\n| simple | dim | word length | dual |\n|---|---|---|---|\n",
        run.group.name(),
        run.field.p(),
        run.field.degree(),
        run.num_simples(),
        run.closed
    );
    let dims = run.dims();
    for k in 0..ring.rank() {
        let _ = writeln!(
            report,
            "| {} | {} | {} | {} |",
            ring.label(k),
            dims[k],
            run.word_length[k],
            ring.label(ring.dual(k))
        );
    }
    let note = not_closed(&run);
    Ok(Outcome {
        status: if run.closed {
            Status::Pass
        } else {
            Status::Undecided
        },
        artifact: to_value(&ring.to_json()),
        run: Some(to_value(&run.to_json()?)),
        report,
        note,
    })
}

fn verify_equiv(spec: &TaskSpec) -> TResult<Outcome> {
    let run_g = group_run(spec)?;
    let n = subgroup(spec, &run_g)?;
    let run_n = restricted_run(&run_g, &n, "N")?;
    let rep = verify_equivalence(&run_g, &run_n, &n)?;
    let undecided = !run_g.closed || !run_n.closed;
    let status = match (rep.verdict, undecided) {
        (true, _) => Status::Pass,
        (false, true) => Status::Undecided,
        (false, false) => Status::Fail,
    };
    let mut report = format!(
        "# Green correspondence on simples\n\nG: {} simples, N: {} simples (|N| = {})\n\nverdict: {}\n\n| G-simple | N-simple |\n|---|---|\n",
        rep.simples_g,
        rep.simples_n,
        n.order(),
        rep.verdict
    );
    for (a, b) in &rep.labels {
        let _ = writeln!(report, "| {a} | {} |", b.as_deref().unwrap_or("-"));
    }
    for p in &rep.problems {
        let _ = writeln!(report, "\n- {p}");
    }
    Ok(Outcome {
        status,
        note: rep.problems.first().cloned().or_else(|| not_closed(&run_g)),
        artifact: to_value(&rep),
        report,
        run: None,
    })
}

fn verify_descent(spec: &TaskSpec) -> TResult<Outcome> {
    let run = group_run(spec)?;
    let h = subgroup(spec, &run)?;
    let rep = verify_restriction_descent(&run, &h, &run.options.decomp())?;
    let report = format!(
        "# Descent of negligibles under restriction\n\nindex {} (coprime to p: {}), simples checked {}, negligibles checked {}\n\nviolations: {}\n",
        rep.index,
        rep.index_coprime_to_p,
        rep.simples_checked,
        rep.negligibles_checked,
        rep.violations.len()
    );
    Ok(Outcome {
        status: status_of(rep.ok()),
        note: rep.violations.first().cloned(),
        artifact: to_value(&rep),
        report,
        run: None,
    })
}

fn vertex_sweep_task(spec: &TaskSpec) -> TResult<Outcome> {
    let run = group_run(spec)?;
    let rows = vertex_sweep(&run)?;
    let ok = rows.iter().all(|r| r.is_sylow);
    let mut report = String::from(
        "# Vertices of simples\n\n| simple | dim | vertex order | Sylow |\n|---|---|---|---|\n",
    );
    for r in &rows {
        let _ = writeln!(
            report,
            "| {} | {} | {} | {} |",
            r.simple, r.dim, r.vertex_order, r.is_sylow
        );
    }
    Ok(Outcome {
        status: status_of(ok),
        note: (!ok).then(|| "a simple has a vertex smaller than the Sylow subgroup".into()),
        artifact: json!({ "closed": run.closed, "vertices": rows }),
        report,
        run: None,
    })
}

fn sp_check(spec: &TaskSpec) -> TResult<Outcome> {
    let p = need(&spec.prime, "prime")?;
    let rep = sp_image_check(p, &run_options(spec)?)?;
    let status = match (rep.verdict, rep.closed) {
        (true, _) => Status::Pass,
        (false, false) => Status::Undecided,
        (false, true) => Status::Fail,
    };
    let report = format!(
        "# Image of S_{p} over GF({p})\n\n{} simples (expected {}), order of χ: {:?}, isomorphism found: {}\n",
        rep.simples,
        (p - 1) * (p - 1),
        rep.chi_order,
        rep.isomorphism.is_some()
    );
    Ok(Outcome {
        status,
        note: (!rep.verdict)
            .then(|| "ring does not match Ver_p^+ ⊠ Z[Z/2(p-1)] with the pinned generators".into()),
        artifact: to_value(&rep),
        report,
        run: None,
    })
}

/// A ring argument: `catalog:<name>`, a ring JSON file, or a run JSON file.
pub fn load_ring(arg: &str) -> TResult<BasedRing> {
    if let Some(name) = arg.strip_prefix("catalog:") {
        return Ok(basedring::catalog(name)?);
    }
    let text = std::fs::read_to_string(arg).map_err(|e| malformed(format!("{arg}: {e}")))?;
    match BasedRing::from_json_str(&text) {
        Ok(r) => Ok(r),
        Err(first) => {
            let run: ssimp_core::ssimp::FusionRunJson =
                serde_json::from_str(&text).map_err(|_| malformed(format!("{arg}: {first}")))?;
            Ok(run.ring()?)
        }
    }
}

fn ring_validate(spec: &TaskSpec) -> TResult<Outcome> {
    let ring = load_ring(&need(&spec.a, "a")?)?;
    let rep = ring.validate();
    let report = format!(
        "# Ring validation\n\nrank {}, truncated {}, ok {}, skipped triples {}\n\n{}",
        ring.rank(),
        ring.is_truncated(),
        rep.ok,
        rep.skipped,
        rep.violations
            .iter()
            .map(|v| format!("- {v}\n"))
            .collect::<String>()
    );
    Ok(Outcome {
        status: status_of(rep.ok),
        note: rep.violations.first().cloned(),
        artifact: to_value(&rep),
        report,
        run: None,
    })
}

fn ring_iso(spec: &TaskSpec) -> TResult<Outcome> {
    let a = load_ring(&need(&spec.a, "a")?)?;
    let b = load_ring(&need(&spec.b, "b")?)?;
    let opts = IsoOptions {
        timeout: Duration::from_secs(spec.timeout.unwrap_or(60)),
        ..Default::default()
    };
    let found = iso_search(&a, &b, &opts)?;
    let mut report = String::from("# Ring isomorphism\n\n");
    let artifact = match &found {
        Some(sigma) => {
            report.push_str("| a | b |\n|---|---|\n");
            let pairs: Vec<[&str; 2]> = sigma
                .iter()
                .enumerate()
                .map(|(i, &j)| [a.label(i), b.label(j)])
                .collect();
            for [x, y] in &pairs {
                let _ = writeln!(report, "| {x} | {y} |");
            }
            json!({ "isomorphic": true, "map": sigma, "bijection": pairs })
        }
        None => {
            report.push_str("no isomorphism\n");
            json!({ "isomorphic": false })
        }
    };
    Ok(Outcome {
        status: status_of(found.is_some()),
        note: found.is_none().then(|| "rings are not isomorphic".into()),
        artifact,
        report,
        run: None,
    })
}

fn round(x: f64) -> f64 {
    let r = (x * 1e10).round() / 1e10;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn ring_characters(spec: &TaskSpec) -> TResult<Outcome> {
    let ring = load_ring(&need(&spec.a, "a")?)?;
    let chars = characters(&ring)?;
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    let mut report =
        String::from("# Characters\n\n| # | values | formal codegree |\n|---|---|---|\n");
    for (k, c) in chars.iter().enumerate() {
        worst = worst.max(c.defect(&ring));
        let f = formal_codegree(&ring, c);
        let values: Vec<[f64; 2]> = c
            .values
            .iter()
            .map(|z| [round(z.re), round(z.im)])
            .collect();
        let _ = writeln!(
            report,
            "| {k} | {} | {:.6}{:+.6}i |",
            values
                .iter()
                .map(|[r, i]| format!("{r:.6}{i:+.6}i"))
                .collect::<Vec<_>>()
                .join(", "),
            f.re,
            f.im
        );
        rows.push(json!({ "values": values, "codegree": [round(f.re), round(f.im)] }));
    }
    let ok = chars.len() == ring.rank() && worst < 1e-8;
    Ok(Outcome {
        status: status_of(ok),
        note: (!ok).then(|| format!("{} characters for rank {}", chars.len(), ring.rank())),
        artifact: json!({ "rank": ring.rank(), "basis": ring.basis(), "characters": rows }),
        report,
        run: None,
    })
}

fn qcase_gens(spec: &TaskSpec, order: QOrder) -> TResult<QcaseGenerators> {
    if spec.extra.is_empty() {
        return Ok(QcaseGenerators::Standard);
    }
    let mut pairs: Vec<(i64, usize)> = QcaseGenerators::Standard
        .objects(order)?
        .iter()
        .map(|x| (x.m, x.d))
        .collect();
    for e in &spec.extra {
        let (m, d) = e
            .split_once(',')
            .ok_or_else(|| malformed(format!("extra generator {e:?} is not m,d")))?;
        let m = m
            .trim()
            .parse()
            .map_err(|_| malformed(format!("bad m in {e:?}")))?;
        let d = d
            .trim()
            .parse()
            .map_err(|_| malformed(format!("bad d in {e:?}")))?;
        pairs.push((m, d));
    }
    Ok(QcaseGenerators::Custom(pairs))
}

fn qcase_report_md(rep: &QcaseReport) -> String {
    let mut s = format!(
        "# Semisimplified ring of V(m,d)\n\nq: {}, level {}, {} simples, closed {}, products checked {}\n\ntarget: {}, embedding found: {}\n\nν additive {}, qdim multiplicative {}, θ homomorphism {}, θ injective on ν=0 {:?}, E nilpotent {}\n\nverdict: {}\n",
        rep.n.map(|n| format!("root of unity of order {n}")).unwrap_or_else(|| "generic".into()),
        rep.level,
        rep.simples.len(),
        rep.closed,
        rep.products_checked,
        rep.target,
        rep.embedding.is_some(),
        rep.nu_additive,
        rep.qdim_multiplicative,
        rep.theta_homomorphism,
        rep.theta_injective_nu0,
        rep.nilpotent,
        rep.verdict
    );
    if !rep.theta.is_empty() {
        s.push_str("\n| object | ν | θ | θ reduced |\n|---|---|---|---|\n");
        for r in &rep.theta {
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} |",
                r.label, r.nu, r.unreduced, r.reduced
            );
        }
    }
    for p in &rep.problems {
        let _ = writeln!(s, "\n- {p}");
    }
    s
}

fn qcase_status(rep: &QcaseReport) -> Status {
    if rep.verdict {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn qcase_generic(spec: &TaskSpec) -> TResult<Outcome> {
    let level = spec.level.unwrap_or(4);
    let order = QOrder::Generic;
    let budget = Budget {
        max_word_length: level,
        ..spec.budget()
    };
    let rep = extract_ring(order, level, &qcase_gens(spec, order)?, budget, spec.jobs())?;
    let agree = gl2_agreement(4, 4)?;
    let mut report = qcase_report_md(&rep);
    let _ = writeln!(
        report,
        "\nGL(2) rule against the oracle for 0 <= m <= 4, 1 <= d <= 4: {} products, {} mismatches",
        agree.checked,
        agree.mismatches.len()
    );
    let status = if agree.ok() {
        qcase_status(&rep)
    } else {
        Status::Fail
    };
    Ok(Outcome {
        status,
        note: rep.problems.first().cloned(),
        artifact: json!({ "extraction": rep, "gl2_agreement": agree }),
        report,
        run: None,
    })
}

fn qcase_root(spec: &TaskSpec) -> TResult<Outcome> {
    let n = need(&spec.n, "n")?;
    let level = spec.level.unwrap_or(4);
    if level > 6 {
        return Err(malformed("qcase level must be at most 6"));
    }
    let order = QOrder::root(n)?;
    let rep = extract_ring(
        order,
        level,
        &qcase_gens(spec, order)?,
        spec.budget(),
        spec.jobs(),
    )?;
    Ok(Outcome {
        status: qcase_status(&rep),
        note: rep.problems.first().cloned(),
        report: qcase_report_md(&rep),
        artifact: to_value(&rep),
        run: None,
    })
}

fn char2(spec: &TaskSpec) -> TResult<Outcome> {
    let n = need(&spec.n, "n")?;
    let level = spec.level.unwrap_or(3);
    match &spec.variant {
        None => {
            let rep = char2_report(n, level)?;
            Ok(Outcome {
                status: status_of(rep.ok),
                note: (!rep.ok).then(|| "a parity claim or ring check failed".into()),
                report: rep.markdown(),
                artifact: to_value(&rep),
                run: None,
            })
        }
        Some(v) => {
            let variant: Variant = v.parse()?;
            let r = char2_ring(n, variant, level)?;
            let ok = r.ring.validate().ok;
            let report = format!(
                "# {variant}({n}) in characteristic 2\n\nrank {}, generators {:?}, relation {}, {} simples up to word length {level}\n",
                r.rank,
                r.generators,
                r.relation.as_deref().unwrap_or("none"),
                r.ring.rank()
            );
            Ok(Outcome {
                status: status_of(ok),
                note: (!ok).then(|| "ring axioms fail".into()),
                report,
                artifact: to_value(&r),
                run: None,
            })
        }
    }
}

fn lucas(spec: &TaskSpec) -> TResult<Outcome> {
    let primes = if spec.primes.is_empty() {
        vec![2, 3, 5]
    } else {
        spec.primes.clone()
    };
    let rep = lucas_sweep(
        spec.max_a.unwrap_or(500),
        &primes,
        spec.parity_max.unwrap_or(512),
    )?;
    let report = format!(
        "# Lucas sweep\n\na, b <= {}, primes {:?}: {} residues compared, {} mismatches\n\nparity claims for 1 <= n <= {}: {} failures\n",
        rep.max_a,
        rep.primes,
        rep.checked,
        rep.mismatches.len(),
        rep.parity_max_n,
        rep.parity_failures.len()
    );
    Ok(Outcome {
        status: status_of(rep.ok),
        note: (!rep.ok).then(|| "Lucas residues or parity claims disagree".into()),
        artifact: to_value(&rep),
        report,
        run: None,
    })
}
