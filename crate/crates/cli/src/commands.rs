use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use heisenberg_lorentz::ledger::{self, LedgerEntry};
use heisenberg_lorentz::reachability::long_path_p1;
use heisenberg_lorentz::verification::{verify_family, SweepSettings};
use heisenberg_lorentz::{
    integrate_schedule, lorentz_distance_p1, lorentz_distance_p2, membership_p2, plan_reach_p1, sample_extremal,
    Distance, Error, ExtremalKind, ExtremalParams, ExtremalSpec, GroupPoint, IntegratorConfig, ProblemId,
    Trajectory,
};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::args::{Case, DistanceArgs, ExtremalArgs, Format, Problem, ReachArgs, VerifyArgs};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::LeftAdmissibleRegion { .. } | Error::NoConvergence { .. } | Error::GridMismatch(_) => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Echo of the invocation plus parameters and outputs; serialized as JSON.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    pub arguments: Vec<String>,
    pub parameters: Value,
    pub outputs: Value,
    pub max_deviation: Option<f64>,
    pub ledger_entries: Vec<&'static LedgerEntry>,
}

impl RunReport {
    fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn write_ledger(path: &Path) -> CliResult<()> {
    std::fs::write(path, ledger::to_json())
        .map_err(|e| CliError::Usage(format!("cannot write ledger {}: {e}", path.display())))
}

fn problem_id(p: Problem) -> ProblemId {
    match p {
        Problem::One => ProblemId::P1,
        Problem::Two => ProblemId::P2,
    }
}

fn kind(c: Case) -> ExtremalKind {
    match c {
        Case::Normal => ExtremalKind::Normal,
        Case::Abnormal => ExtremalKind::Abnormal,
    }
}

fn parse_params(text: &str) -> CliResult<BTreeMap<String, f64>> {
    let mut map = BTreeMap::new();
    for pair in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("parameter `{pair}` is not of the form key=value")))?;
        let value: f64 = v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("parameter `{k}` has non-numeric value `{v}`")))?;
        if map.insert(k.trim().to_string(), value).is_some() {
            return Err(CliError::Usage(format!("parameter `{k}` given twice")));
        }
    }
    Ok(map)
}

fn family_params(problem: ProblemId, kind: ExtremalKind, text: &str) -> CliResult<ExtremalParams> {
    let mut map = parse_params(text)?;
    let (required, optional): (&[&str], &[&str]) = match (problem, kind) {
        (ProblemId::P1, ExtremalKind::Abnormal) => (&["theta0"], &[]),
        (ProblemId::P1, ExtremalKind::Normal) => (&["theta0", "a"], &[]),
        (ProblemId::P2, ExtremalKind::Abnormal) => (&["h2_0", "h3"], &[]),
        (ProblemId::P2, ExtremalKind::Normal) => (&["h2_0", "h3"], &["h1_0"]),
    };
    let mut take = |key: &str| {
        map.remove(key)
            .ok_or_else(|| CliError::Usage(format!("missing required parameter `{key}`")))
    };
    let values: Vec<f64> = required.iter().map(|k| take(k)).collect::<CliResult<_>>()?;
    let extra: Vec<Option<f64>> = optional.iter().map(|k| map.remove(*k)).collect();
    if let Some(unknown) = map.keys().next() {
        return Err(CliError::Usage(format!("unknown parameter `{unknown}`")));
    }
    let params = match (problem, kind) {
        (ProblemId::P1, ExtremalKind::Abnormal) => ExtremalParams::P1Abnormal { theta0: values[0] },
        (ProblemId::P1, ExtremalKind::Normal) => ExtremalParams::P1Normal {
            theta0: values[0],
            a: values[1],
        },
        (ProblemId::P2, ExtremalKind::Abnormal) => ExtremalParams::P2Abnormal {
            h2_0: values[0],
            h3: values[1],
        },
        (ProblemId::P2, ExtremalKind::Normal) => match extra[0] {
            Some(h1_0) => ExtremalParams::P2Normal {
                h1_0,
                h2_0: values[0],
                h3: values[1],
            },
            None => ExtremalParams::p2_normal_from(values[0], values[1]),
        },
    };
    params.validate()?;
    Ok(params)
}

fn parse_point(text: &str) -> CliResult<GroupPoint> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!("point `{text}` must have three comma-separated coordinates")));
    }
    let mut c = [0.0; 3];
    for (slot, p) in c.iter_mut().zip(&parts) {
        *slot = p
            .parse()
            .map_err(|_| CliError::Usage(format!("coordinate `{p}` is not a number")))?;
    }
    let q = GroupPoint::from_array(c);
    if !q.is_finite() {
        return Err(CliError::Usage("point coordinates must be finite".into()));
    }
    Ok(q)
}

fn csv(tr: &Trajectory) -> String {
    let mut s = String::from("t,x,y,z,h1,h2,h3,u1,u2,u3,J\n");
    for smp in &tr.samples {
        let h = smp.h.map(|h| h.to_array()).unwrap_or([f64::NAN; 3]);
        let row = [
            smp.t, smp.q.x, smp.q.y, smp.q.z, h[0], h[1], h[2], smp.u.u1, smp.u.u2, smp.u.u3, smp.length,
        ];
        // `+ 0.0` folds −0 into 0
        let cells: Vec<String> = row.iter().map(|v| format!("{:.16e}", v + 0.0)).collect();
        let _ = writeln!(s, "{}", cells.join(","));
    }
    s
}

fn problem_label(p: ProblemId) -> u8 {
    match p {
        ProblemId::P1 => 1,
        ProblemId::P2 => 2,
    }
}

pub fn extremal(args: &ExtremalArgs, argv: &[String]) -> CliResult<()> {
    let (problem, kind) = (problem_id(args.problem), kind(args.case));
    let params = family_params(problem, kind, &args.params)?;
    if !(args.tmax > 0.0 && args.tmax.is_finite()) {
        return Err(CliError::Usage(format!("--tmax must be positive, got {}", args.tmax)));
    }
    if args.samples < 2 {
        return Err(CliError::Usage(format!("--samples must be at least 2, got {}", args.samples)));
    }
    let spec = ExtremalSpec::new(params, args.tmax);
    let tr = sample_extremal(&spec, args.samples)?;
    let text = match args.format {
        Format::Csv => csv(&tr),
        Format::Json => RunReport {
            command: "extremal",
            arguments: argv.to_vec(),
            parameters: json!({
                "problem": problem_label(problem),
                "case": kind,
                "params": params,
                "tmax": args.tmax,
                "samples": args.samples,
            }),
            outputs: json!({ "trajectory": tr }),
            max_deviation: None,
            ledger_entries: ledger::entries_for(problem, kind),
        }
        .to_json(),
    };
    emit(args.out.as_deref(), &text)
}

pub fn verify(args: &VerifyArgs, argv: &[String]) -> CliResult<()> {
    let (problem, kind) = (problem_id(args.problem), kind(args.case));
    if !(args.step > 0.0 && args.step.is_finite()) {
        return Err(CliError::Usage(format!("--step must be positive, got {}", args.step)));
    }
    let max_rapidity = match args.max_rapidity.as_str() {
        "none" => None,
        v => Some(
            v.parse::<f64>()
                .ok()
                .filter(|r| *r > 0.0)
                .ok_or_else(|| CliError::Usage(format!("--max-rapidity must be positive or `none`, got `{v}`")))?,
        ),
    };
    let mut settings = SweepSettings::new(problem, kind, args.sweeps, args.step, args.seed);
    settings.domain.max_rapidity = max_rapidity;
    let report = verify_family(&settings)?;
    let draws: Vec<Value> = report
        .draws
        .iter()
        .map(|d| {
            json!({
                "index": d.index,
                "params": d.spec.params,
                "duration": d.spec.duration,
                "deviation": d.deviation.state,
                "covector_deviation": d.deviation.covector,
            })
        })
        .collect();
    let text = RunReport {
        command: "verify",
        arguments: argv.to_vec(),
        parameters: json!({
            "problem": problem_label(problem),
            "case": kind,
            "sweeps": args.sweeps,
            "step": args.step,
            "seed": args.seed,
            "max_rapidity": max_rapidity,
            "domain": settings.domain,
        }),
        outputs: json!({
            "worst_deviation": report.worst_deviation,
            "worst_covector_deviation": report.worst_covector_deviation,
            "worst_index": report.worst_index,
            "budget": report.settings.budget,
            "within_budget": report.within_budget,
            "draws": draws,
        }),
        max_deviation: Some(report.worst_deviation),
        ledger_entries: ledger::entries_for(problem, kind),
    }
    .to_json();
    emit(args.out.as_deref(), &text)
}

pub fn reach(args: &ReachArgs, argv: &[String]) -> CliResult<()> {
    let q = parse_point(&args.point)?;
    let problem = problem_id(args.problem);
    let (parameters, outputs, max_deviation, entries) = match problem {
        ProblemId::P2 => {
            if args.plan || args.loop_length.is_some() {
                return Err(CliError::Usage("--plan and --loop-length apply to problem 1 only".into()));
            }
            let m = membership_p2(&q);
            let entries = ledger::ENTRIES.iter().filter(|e| e.scope == "attainable_set").collect();
            (json!({ "problem": 2, "point": q }), json!({ "verdict": m.verdict, "witness": m.witness }), None, entries)
        }
        ProblemId::P1 if !args.plan => {
            if args.loop_length.is_some() {
                return Err(CliError::Usage("--loop-length requires --plan".into()));
            }
            (json!({ "problem": 1, "point": q }), json!({ "verdict": "Reachable" }), None, Vec::new())
        }
        ProblemId::P1 => {
            let schedule = match args.loop_length {
                Some(l) => long_path_p1(&q, l)?,
                None => plan_reach_p1(&q)?,
            };
            let tr = integrate_schedule(ProblemId::P1, &GroupPoint::IDENTITY, &schedule, &IntegratorConfig::default())?;
            let endpoint = tr.endpoint();
            let err = endpoint.coordinate_distance(&q);
            (
                json!({ "problem": 1, "point": q, "plan": true, "loop_length": args.loop_length }),
                json!({
                    "verdict": "Reachable",
                    "schedule": schedule,
                    "duration": schedule.total_duration(),
                    "length": tr.total_length(),
                    "endpoint": endpoint,
                    "endpoint_error": err,
                }),
                Some(err),
                Vec::new(),
            )
        }
    };
    let text = RunReport {
        command: "reach",
        arguments: argv.to_vec(),
        parameters,
        outputs,
        max_deviation,
        ledger_entries: entries,
    }
    .to_json();
    emit(args.out.as_deref(), &text)
}

pub fn distance(args: &DistanceArgs, argv: &[String]) -> CliResult<()> {
    let q = parse_point(&args.point)?;
    let problem = problem_id(args.problem);
    let d = match problem {
        ProblemId::P1 => lorentz_distance_p1(&q),
        ProblemId::P2 => lorentz_distance_p2(&q)?,
    };
    let (outputs, err) = match &d {
        Distance::PositiveInfinity => (json!({ "verdict": "+infinity", "distance": null }), None),
        Distance::Undefined => (json!({ "verdict": "undefined", "distance": null }), None),
        Distance::Finite { value, maximizer } => {
            let mut o = json!({
                "verdict": "finite",
                "distance": value,
                "maximizer": maximizer.spec,
                "endpoint_error": maximizer.endpoint_error,
            });
            if args.verbose {
                o["iterations"] = json!(maximizer.iterations);
                o["converged_starts"] = json!(maximizer.converged_starts);
                o["alternatives"] = json!(maximizer.alternatives);
            }
            (o, Some(maximizer.endpoint_error))
        }
    };
    let text = RunReport {
        command: "distance",
        arguments: argv.to_vec(),
        parameters: json!({ "problem": problem_label(problem), "point": q, "verbose": args.verbose }),
        outputs,
        max_deviation: err,
        ledger_entries: Vec::new(),
    }
    .to_json();
    emit(args.out.as_deref(), &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_parse_and_validate() {
        let p = family_params(ProblemId::P2, ExtremalKind::Abnormal, "h2_0=0,h3=1").unwrap();
        assert_eq!(p, ExtremalParams::P2Abnormal { h2_0: 0.0, h3: 1.0 });
        let p = family_params(ProblemId::P1, ExtremalKind::Normal, "theta0=-1.5, a=2").unwrap();
        assert_eq!(p, ExtremalParams::P1Normal { theta0: -1.5, a: 2.0 });
        let p = family_params(ProblemId::P2, ExtremalKind::Normal, "h2_0=0,h3=1").unwrap();
        assert_eq!(p, ExtremalParams::p2_normal_from(0.0, 1.0));
    }

    #[test]
    fn params_errors_name_the_problem() {
        let e = family_params(ProblemId::P1, ExtremalKind::Normal, "theta0=0").unwrap_err();
        assert!(e.to_string().contains("`a`"), "{e}");
        let e = family_params(ProblemId::P1, ExtremalKind::Abnormal, "theta0=0,b=1").unwrap_err();
        assert!(e.to_string().contains("`b`"), "{e}");
        assert!(family_params(ProblemId::P2, ExtremalKind::Abnormal, "h2_0=0,h3=0").is_err());
        assert!(family_params(ProblemId::P2, ExtremalKind::Normal, "h1_0=-1,h2_0=1,h3=1").is_err());
        assert!(family_params(ProblemId::P1, ExtremalKind::Abnormal, "theta0=x").is_err());
        assert!(family_params(ProblemId::P1, ExtremalKind::Abnormal, "theta0=1,theta0=2").is_err());
    }

    #[test]
    fn points_parse() {
        assert_eq!(parse_point("0,0,-1").unwrap(), GroupPoint::new(0.0, 0.0, -1.0));
        assert!(parse_point("1,2").is_err());
        assert!(parse_point("1,inf,0").is_err());
    }

    #[test]
    fn csv_has_exact_header_and_lf() {
        let spec = ExtremalSpec::new(ExtremalParams::P1Normal { theta0: 0.0, a: 0.0 }, 5.0);
        let text = csv(&sample_extremal(&spec, 2).unwrap());
        let lines: Vec<&str> = text.split('\n').collect();
        assert_eq!(lines[0], "t,x,y,z,h1,h2,h3,u1,u2,u3,J");
        assert!(lines[2].starts_with("5.0000000000000000e0,0.0000000000000000e0,0.0000000000000000e0,5.0000000000000000e0"));
        assert!(!text.contains('\r'));
    }
}
