//! End-to-end construction and the self-verifying bundle.
//!
//! Stages: generate a net, verify it as an almost net, build the binary
//! almost net, verify q-goodness, embed and certify, perturb into general
//! position, and re-check hole-freeness of the final set.

mod config;

pub use config::{
    BaseChoice, ConfigEcho, PipelineConfig, ENV_MAX_CLASS_SUBSETS, ENV_MAX_DM,
    ENV_MAX_PREDICATE_CALLS, ENV_MAX_SUBSETS,
};

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::bits::PointKey;
use crate::embed::{
    build_schedule_kind, certify_with_escalation, default_base, embed, min_coordinate_gap,
    perturb_to_general_position, to_point_set, Certification, PerturbAttempt, PerturbOptions,
    ScheduleKind,
};
use crate::error::Error;
use crate::geom::{format_rational, GeneralPosition, PointSet};
use crate::goodset::{
    good_bound, hole_free_size, key_width, minimal_good_q, to_binary_almost_net, verify_good,
    GoodCaps, GoodStrategy, GoodVerdict,
};
use crate::holes::{decide_hole_free, Caps, HoleFreeMethod, HoleFreeVerdict};
use crate::io::{read_json, to_json, GoodFile, NetFile, PointFile};
use crate::netgen::{
    sequence_to_net, sobol_points, sobol_prefix, verify_almost_net, AlmostNetParams, NetPoint,
    NetVerdict, SOBOL_MAX_DIM,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Config,
    Generate,
    VerifyNet,
    BinaryNet,
    VerifyGood,
    Embed,
    Certify,
    Perturb,
    FinalCheck,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Violation,
    CapExceeded,
    Error,
}

impl Status {
    /// 0 pass, 1 mathematical violation, 2 usage or parse error, 3 cap.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Violation => 1,
            Status::Error => 2,
            Status::CapExceeded => 3,
        }
    }
}

fn status_of(e: &Error) -> Status {
    match e {
        Error::Parse { .. } | Error::Io(_) | Error::Json(_) => Status::Error,
        Error::PerturbationExhausted { .. } => Status::CapExceeded,
        _ => Status::Violation,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NetSection {
    pub source: String,
    pub digits: u32,
    pub points: usize,
    pub boxes_checked: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GoodSection {
    pub m: usize,
    #[serde(with = "crate::io::decimal")]
    pub q: BigInt,
    pub tuples_checked: u64,
    pub minimal_q: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertRound {
    #[serde(rename = "B")]
    pub base: String,
    pub outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<HoleFreeMethod>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empty_subset: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subsets_required: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertSection {
    pub kind: ScheduleKind,
    pub ell: usize,
    #[serde(rename = "final_B")]
    pub final_base: String,
    /// `certified`, or `deferred` when the oracle budget was too small and
    /// the final check on the perturbed set carries the certificate.
    pub status: &'static str,
    pub rounds: Vec<CertRound>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PerturbSection {
    pub seed: u64,
    pub min_gap: String,
    pub bound: String,
    pub max_offset: String,
    pub attempts: Vec<PerturbAttempt>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HoleFreeSection {
    pub ell: usize,
    pub method: HoleFreeMethod,
    pub verdict: Status,
    pub subsets_checked: u64,
    pub predicate_calls: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_stage: Option<Stage>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub config: ConfigEcho,
    pub net: Option<NetSection>,
    pub good: Option<GoodSection>,
    pub certification: Option<CertSection>,
    pub perturbation: Option<PerturbSection>,
    pub hole_free: Option<HoleFreeSection>,
    pub guarantee: Option<String>,
}

/// All files of a successful run.
#[derive(Clone, Debug)]
pub struct Bundle {
    pub net: NetFile,
    pub good: GoodFile,
    pub points: PointFile,
    pub perturbed: PointFile,
    pub report: Report,
}

impl Bundle {
    /// `(file name, contents)` in a fixed order.
    pub fn files(&self) -> crate::Result<Vec<(&'static str, String)>> {
        Ok(vec![
            ("net.json", to_json(&self.net)?),
            ("good.json", to_json(&self.good)?),
            ("points.json", to_json(&self.points)?),
            ("points.csv", self.points.to_csv()),
            ("perturbed.json", to_json(&self.perturbed)?),
            ("perturbed.csv", self.perturbed.to_csv()),
            ("report.json", to_json(&self.report)?),
        ])
    }

    pub fn write(&self, dir: &Path) -> crate::Result<()> {
        std::fs::create_dir_all(dir)?;
        for (name, text) in self.files()? {
            std::fs::write(dir.join(name), text)?;
        }
        Ok(())
    }
}

/// A stage failure with the report accumulated up to that point.
#[derive(Debug)]
pub struct PipelineError {
    pub report: Box<Report>,
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        self.report.status.exit_code()
    }
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "stage {} failed ({:?}): {}",
            self.report
                .failed_stage
                .map_or("?".into(), |s| s.to_string()),
            self.report.status,
            self.report.message.as_deref().unwrap_or("")
        )
    }
}

impl std::error::Error for PipelineError {}

/// The generated almost net and a label for its construction.
pub struct GeneratedNet {
    pub points: Vec<NetPoint>,
    pub source: String,
    pub digits: u32,
}

/// Candidate nets for `(T, eps)` with `2^n T` points, best first. For
/// `T = 2^t` these are the lifted `(d-1)`-dimensional Sobol' sequence and
/// the `d`-dimensional Sobol' net on `n + t` digits; otherwise a Sobol'
/// prefix of length `2^n T`.
pub fn candidate_nets(d: usize, n: u32, t_count: u64) -> crate::Result<Vec<GeneratedNet>> {
    let mut out = Vec::new();
    if t_count.is_power_of_two() {
        let t = t_count.trailing_zeros();
        let m = n + t;
        if d >= 2 && d - 1 <= SOBOL_MAX_DIM && n > 0 {
            let seq = sobol_points(d - 1, m)?;
            out.push(GeneratedNet {
                points: sequence_to_net(&seq, t, m)?,
                source: format!("sobol sequence in dimension {} lifted, m = {m}", d - 1),
                digits: m,
            });
        }
        if d <= SOBOL_MAX_DIM {
            out.push(GeneratedNet {
                points: sobol_points(d, m)?,
                source: format!("sobol net in dimension {d}, m = {m}"),
                digits: m,
            });
        }
    } else if d <= SOBOL_MAX_DIM {
        let count = usize::try_from(t_count << n)
            .map_err(|_| Error::Precondition("2^n T too large".into()))?;
        let params = AlmostNetParams::new(t_count, BigRational::from_integer(0.into()), n)?;
        let digits = key_width(&params) as u32;
        out.push(GeneratedNet {
            points: sobol_prefix(d, count, digits as usize)?,
            source: format!("sobol prefix of {count} points in dimension {d}"),
            digits,
        });
    }
    if out.is_empty() {
        return Err(Error::UnsupportedDimension {
            s: d,
            max: SOBOL_MAX_DIM,
        });
    }
    Ok(out)
}

struct Run {
    report: Report,
}

impl Run {
    fn fail(mut self, stage: Stage, status: Status, message: impl Into<String>) -> PipelineError {
        self.report.status = status;
        self.report.failed_stage = Some(stage);
        self.report.message = Some(message.into());
        PipelineError {
            report: Box::new(self.report),
        }
    }

    fn error(self, stage: Stage, e: Error) -> PipelineError {
        let status = status_of(&e);
        self.fail(stage, status, e.to_string())
    }
}

/// Runs every stage; deterministic for a fixed config.
pub fn run(cfg: &PipelineConfig) -> Result<Bundle, PipelineError> {
    let mut run = Run {
        report: Report {
            status: Status::Pass,
            failed_stage: None,
            message: None,
            config: cfg.into(),
            net: None,
            good: None,
            certification: None,
            perturbation: None,
            hole_free: None,
            guarantee: None,
        },
    };
    macro_rules! attempt {
        ($stage:expr, $e:expr) => {
            match $e {
                Ok(v) => v,
                Err(e) => return Err(run.error($stage, e)),
            }
        };
    }
    attempt!(Stage::Config, cfg.validate());
    let d = cfg.d;
    let params = attempt!(
        Stage::Config,
        AlmostNetParams::new(cfg.t_count, cfg.eps.clone(), cfg.n)
    );

    // generate and verify
    let candidates = attempt!(Stage::Generate, candidate_nets(d, cfg.n, cfg.t_count));
    let mut chosen = None;
    let mut last_violation = String::new();
    for c in candidates {
        match attempt!(Stage::VerifyNet, verify_almost_net(&c.points, &params)) {
            NetVerdict::Pass { boxes_checked } => {
                chosen = Some((c, boxes_checked));
                break;
            }
            NetVerdict::Violation { dyadic_box, count } => {
                last_violation = format!(
                    "{}: box {:?} holds {count} points",
                    c.source, dyadic_box.axes
                );
            }
        }
    }
    let Some((net, boxes_checked)) = chosen else {
        return Err(run.fail(
            Stage::VerifyNet,
            Status::Violation,
            format!(
                "no candidate is a ({}, {})-almost net; {last_violation}",
                cfg.t_count,
                format_rational(&cfg.eps)
            ),
        ));
    };
    run.report.net = Some(NetSection {
        source: net.source.clone(),
        digits: net.digits,
        points: net.points.len(),
        boxes_checked,
    });

    // binary almost net and goodness
    let y = attempt!(
        Stage::BinaryNet,
        to_binary_almost_net(&net.points, &params, d)
    );
    if let Some(defect) = y.check_invariants() {
        return Err(run.fail(
            Stage::BinaryNet,
            Status::Violation,
            format!("binary almost net invariant fails: {defect:?}"),
        ));
    }
    let q_big = good_bound(&BigInt::from(cfg.t_count), &cfg.eps, d as u32);
    let Some(q) = q_big.to_u64() else {
        return Err(run.fail(
            Stage::VerifyGood,
            Status::CapExceeded,
            format!("q = {q_big} too large"),
        ));
    };
    let tuples_checked = match attempt!(
        Stage::VerifyGood,
        verify_good(y.keys(), q, GoodStrategy::Sweep, &cfg.good_caps)
    ) {
        GoodVerdict::Pass { tuples_checked } => tuples_checked,
        GoodVerdict::CapExceeded { reason } => {
            return Err(run.fail(Stage::VerifyGood, Status::CapExceeded, reason))
        }
        other => {
            return Err(run.fail(
                Stage::VerifyGood,
                Status::Violation,
                format!("not {q}-good: {other:?}"),
            ))
        }
    };
    let minimal_q = minimal_good_q(y.keys(), &cfg.good_caps).ok().flatten();
    run.report.good = Some(GoodSection {
        m: y.m(),
        q: q_big.clone(),
        tuples_checked,
        minimal_q,
    });

    // embed and certify
    let m = y.m();
    let base = match &cfg.base {
        BaseChoice::Auto => default_base(m),
        BaseChoice::Fixed(b) => b.clone(),
    };
    let sched = attempt!(Stage::Embed, build_schedule_kind(cfg.schedule, d, m, base));
    let ell_big = hole_free_size(&q_big, d as u32);
    let Some(ell) = ell_big.to_usize() else {
        return Err(run.fail(
            Stage::Certify,
            Status::CapExceeded,
            format!("l = {ell_big} too large"),
        ));
    };
    let (sched, rounds) = attempt!(
        Stage::Certify,
        certify_with_escalation(y.keys(), q, sched, &cfg.caps, cfg.max_escalations + 1)
    );
    let cert_rounds: Vec<CertRound> = rounds
        .iter()
        .map(|(b, c)| match c {
            Certification::Certified { method, .. } => CertRound {
                base: b.to_string(),
                outcome: "certified",
                method: Some(*method),
                empty_subset: None,
                subsets_required: None,
            },
            Certification::Escalate { subset, .. } => CertRound {
                base: b.to_string(),
                outcome: "escalate",
                method: None,
                empty_subset: Some(subset.clone()),
                subsets_required: None,
            },
            Certification::CapExceeded { subsets_required } => CertRound {
                base: b.to_string(),
                outcome: "cap_exceeded",
                method: None,
                empty_subset: None,
                subsets_required: Some(subsets_required.to_string()),
            },
        })
        .collect();
    let last = rounds.last().map(|r| r.1.clone());
    let status = match last {
        Some(Certification::Certified { .. }) => "certified",
        Some(Certification::CapExceeded { .. }) => "deferred",
        _ => "escalation_exhausted",
    };
    run.report.certification = Some(CertSection {
        kind: sched.kind(),
        ell,
        final_base: sched.base().to_string(),
        status,
        rounds: cert_rounds,
    });
    if status == "escalation_exhausted" {
        return Err(run.fail(
            Stage::Certify,
            Status::Violation,
            format!("P(Y) not {ell}-hole-free after {} schedules", rounds.len()),
        ));
    }
    let lattice = attempt!(Stage::Embed, embed(y.keys(), &sched));
    let set = to_point_set(&lattice, d);

    // perturb and re-check
    let opts = PerturbOptions {
        max_attempts: cfg.perturb_attempts,
        recheck: Some((ell, cfg.caps)),
    };
    let (perturbed, prep) = attempt!(
        Stage::Perturb,
        perturb_to_general_position(&set, cfg.seed, &opts)
    );
    run.report.perturbation = Some(PerturbSection {
        seed: prep.seed,
        min_gap: prep.min_gap.to_string(),
        bound: format_rational(&prep.bound),
        max_offset: format_rational(&prep.max_offset),
        attempts: prep.attempts.clone(),
    });
    let final_set = attempt!(Stage::FinalCheck, PointSet::from_rationals(&perturbed));
    let (verdict, method) = decide_hole_free(&final_set, ell, &cfg.caps);
    match verdict {
        HoleFreeVerdict::Pass {
            subsets_checked,
            predicate_calls,
        } => {
            run.report.hole_free = Some(HoleFreeSection {
                ell,
                method,
                verdict: Status::Pass,
                subsets_checked,
                predicate_calls,
            });
        }
        HoleFreeVerdict::Violation { subset, .. } => {
            return Err(run.fail(
                Stage::FinalCheck,
                Status::Violation,
                format!("perturbed set has an empty {ell}-subset {subset:?}"),
            ))
        }
        HoleFreeVerdict::CapExceeded { subsets_required } => {
            return Err(run.fail(
                Stage::FinalCheck,
                Status::CapExceeded,
                format!(
                "max_subsets/max_predicate_calls: C(n, {ell}) = {subsets_required} subsets needed"
            ),
            ))
        }
    }
    run.report.guarantee = Some(guarantee(ell));

    Ok(Bundle {
        net: NetFile::new(d, net.digits, &net.points),
        good: GoodFile::new(&y),
        points: PointFile::from_lattice(&lattice, &sched),
        perturbed: PointFile::from_rationals(d, &perturbed),
        report: run.report,
    })
}

pub fn guarantee(ell: usize) -> String {
    format!("{ell}-hole-free: no holes of size greater than {}", ell - 1)
}

/// Outcome of one re-check in [`verify_bundle`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BundleVerdict {
    pub status: Status,
    pub checks: Vec<Check>,
}

impl BundleVerdict {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }
}

fn check(name: &'static str, ok: bool, detail: impl Into<String>) -> Check {
    Check {
        name,
        status: if ok { Status::Pass } else { Status::Violation },
        detail: detail.into(),
    }
}

/// Re-runs every verifier on the stored files without regenerating anything.
pub fn verify_bundle(dir: &Path, caps: &Caps, good_caps: &GoodCaps) -> BundleVerdict {
    let mut checks = Vec::new();
    let result = verify_bundle_inner(dir, caps, good_caps, &mut checks);
    if let Err(e) = result {
        checks.push(Check {
            name: "files",
            status: status_of(&e),
            detail: e.to_string(),
        });
    }
    let worst = checks
        .iter()
        .map(|c| c.status)
        .max_by_key(|s| match s {
            Status::Pass => 0,
            Status::CapExceeded => 1,
            Status::Violation => 2,
            Status::Error => 3,
        })
        .unwrap_or(Status::Pass);
    BundleVerdict {
        status: worst,
        checks,
    }
}

fn verify_bundle_inner(
    dir: &Path,
    caps: &Caps,
    good_caps: &GoodCaps,
    checks: &mut Vec<Check>,
) -> crate::Result<()> {
    let net: NetFile = read_json(&dir.join("net.json"), "net.json")?;
    let good: GoodFile = read_json(&dir.join("good.json"), "good.json")?;
    let points: PointFile = read_json(&dir.join("points.json"), "points.json")?;
    let perturbed: PointFile = read_json(&dir.join("perturbed.json"), "perturbed.json")?;
    let report: serde_json::Value = read_json(&dir.join("report.json"), "report.json")?;

    let params = good.params()?;
    let d = good.d;
    let net_points = net.to_points()?;
    let v = verify_almost_net(&net_points, &params)?;
    checks.push(check("net", v.is_pass(), format!("{v:?}")));

    let keys = good.keys()?;
    let rebuilt = to_binary_almost_net(&net_points, &params, d);
    let same = rebuilt
        .as_ref()
        .map(|y| y.keys() == keys.as_slice())
        .unwrap_or(false);
    checks.push(check("binary_net", same, "keys rebuilt from net.json"));
    let y = good.to_binary_almost_net()?;
    let defect = y.check_invariants();
    checks.push(check("invariants", defect.is_none(), format!("{defect:?}")));

    let q_big = good_bound(&BigInt::from(params.t_count), &params.eps, d as u32);
    let q = q_big
        .to_u64()
        .ok_or_else(|| Error::Precondition(format!("q = {q_big} too large")))?;
    let gv = verify_good(&keys, q, GoodStrategy::Sweep, good_caps)?;
    checks.push(match &gv {
        GoodVerdict::CapExceeded { reason } => Check {
            name: "good",
            status: Status::CapExceeded,
            detail: reason.clone(),
        },
        v => check("good", v.is_pass(), format!("q = {q}: {v:?}")),
    });

    let ell = hole_free_size(&q_big, d as u32)
        .to_usize()
        .ok_or_else(|| Error::Precondition("l too large".into()))?;
    let reported = report
        .pointer("/certification/ell")
        .and_then(serde_json::Value::as_u64);
    let reported_q = report
        .pointer("/good/q")
        .and_then(serde_json::Value::as_str);
    let guarantee_ok = report
        .pointer("/guarantee")
        .and_then(serde_json::Value::as_str)
        == Some(guarantee(ell).as_str());
    checks.push(check(
        "report",
        reported == Some(ell as u64)
            && reported_q == Some(q_big.to_string().as_str())
            && guarantee_ok,
        format!("expects q = {q_big}, l = {ell}"),
    ));

    let info = points
        .schedule
        .as_ref()
        .ok_or_else(|| Error::parse("points.json", "missing field `schedule`"))?;
    let base = points.schedule_base()?.expect("schedule present");
    let source = points.source_keys()?;
    let sched = build_schedule_kind(info.kind, d, info.m, base)?;
    let lattice = embed(&keys, &sched)?;
    let stored = points.point_set()?;
    let recomputed = to_point_set(&lattice, d);
    let embed_ok = source.as_deref() == Some(keys.as_slice())
        && stored.len() == recomputed.len()
        && (0..stored.len()).all(|i| stored.point(i) == recomputed.point(i));
    checks.push(check(
        "embedding",
        embed_ok,
        "coordinates recomputed from keys and schedule",
    ));

    let (cv, cm) = decide_hole_free(&stored, ell, caps);
    checks.push(match cv {
        HoleFreeVerdict::Pass { .. } => {
            check("certification", true, format!("{ell}-hole-free ({cm:?})"))
        }
        HoleFreeVerdict::Violation { subset, .. } => check(
            "certification",
            false,
            format!("empty {ell}-subset {subset:?}"),
        ),
        // the perturbed-set check below carries the certificate
        HoleFreeVerdict::CapExceeded { subsets_required } => check(
            "certification",
            true,
            format!("deferred: {subsets_required} subsets exceed the caps"),
        ),
    });

    let pert = perturbed.rationals()?;
    let pert_ok = pert.len() == stored.len();
    let gap = min_coordinate_gap(&stored).unwrap_or_else(|| BigInt::from(1));
    let n = stored.len().max(1);
    let bound = BigRational::new(gap, BigInt::from(4 * n * n));
    let within = pert_ok
        && lattice.iter().zip(&pert).all(|(l, p)| {
            l.coords
                .iter()
                .zip(p.coords())
                .all(|(x, y)| (y - BigRational::from_integer(x.clone())).abs() < bound)
        });
    checks.push(check(
        "perturbation_bound",
        within,
        format!("|offset| < {}", format_rational(&bound)),
    ));
    let final_set = perturbed.point_set()?;
    let gp = final_set.general_position();
    checks.push(check(
        "general_position",
        gp == GeneralPosition::Pass,
        format!("{gp:?}"),
    ));
    let (fv, fm) = decide_hole_free(&final_set, ell, caps);
    checks.push(match fv {
        HoleFreeVerdict::Pass { .. } => {
            check("hole_free", true, format!("{ell}-hole-free ({fm:?})"))
        }
        HoleFreeVerdict::Violation { subset, .. } => {
            check("hole_free", false, format!("empty {ell}-subset {subset:?}"))
        }
        HoleFreeVerdict::CapExceeded { subsets_required } => Check {
            name: "hole_free",
            status: Status::CapExceeded,
            detail: format!("{subsets_required} subsets exceed the caps"),
        },
    });
    Ok(())
}

/// Keys of a bundle's good set, for callers that want to re-embed.
pub fn bundle_keys(dir: &Path) -> crate::Result<Vec<PointKey>> {
    let good: GoodFile = read_json(&dir.join("good.json"), "good.json")?;
    good.keys()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_is_deterministic_and_verifies() {
        let cfg = PipelineConfig::new(2, 3);
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        assert_eq!(a.files().unwrap(), b.files().unwrap());
        assert_eq!(
            a.report.guarantee.as_deref(),
            Some("9-hole-free: no holes of size greater than 8")
        );
        let dir = tempfile::tempdir().unwrap();
        a.write(dir.path()).unwrap();
        let v = verify_bundle(dir.path(), &Caps::default(), &GoodCaps::default());
        assert_eq!(v.status, Status::Pass, "{:?}", v.checks);
    }

    #[test]
    fn tampered_bundle_fails() {
        let a = run(&PipelineConfig::new(2, 3)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        a.write(dir.path()).unwrap();
        let mut pf = a.points.clone();
        pf.coords[0][0] = "12345".into();
        std::fs::write(dir.path().join("points.json"), to_json(&pf).unwrap()).unwrap();
        let v = verify_bundle(dir.path(), &Caps::default(), &GoodCaps::default());
        assert_eq!(v.status, Status::Violation);
        assert!(v
            .checks
            .iter()
            .any(|c| c.name == "embedding" && c.status == Status::Violation));
    }

    #[test]
    fn bad_config_is_an_error() {
        let mut cfg = PipelineConfig::new(2, 3);
        cfg.d = 1;
        let e = run(&cfg).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert_eq!(e.report.failed_stage, Some(Stage::Config));
    }
}
