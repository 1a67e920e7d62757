//! The named experiments and the JSON report they produce.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use padic_potts::functions::ln_p;
use padic_potts::gibbs::{
    check_compatibility, cycle_to_measure, hgm_lower_bound, satisfies_recursion, ti_solve, tree_recursion_f,
    BoundaryFunction, CompatibilityReport, PottsModel, TiForm,
};
use padic_potts::potts::{basin_decide_with, BasinOutcome, MapRegime, PottsBetheMap, Region, Trap};
use padic_potts::sampling::{random_padic, seeded_rng};
use padic_potts::symbolic::{
    a_m_template, build_markov_partition, check_pi_conjugacy, count_periodic_points, incidence_from_dynamics,
    periodic_point_from_word, IncidenceMatrix, Itinerary, MarkovPartition,
};
use padic_potts::{Norm, OrdBound, PadicNumber};
use rand::Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::config::{ConfigError, Experiment, ExperimentConfig};
use crate::literal::parse_rational;

pub const SCHEMA_VERSION: u32 = 1;
/// Orbits count as converged once `|x - 1|_p <= p^-ATTRACTOR_ORD`.
const ATTRACTOR_ORD: i64 = 20;
/// Orbits that reach the pole within this many steps are not sampled.
const SINGULAR_DEPTH: usize = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Padic(#[from] padic_potts::Error),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Padic(_) => "computation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Undecided,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Error => 1,
            Status::Undecided => 2,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Undecided => "undecided",
            Status::Error => "error",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub status: Status,
    pub document: Value,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.document).expect("report serializes");
        s.push('\n');
        s
    }
}

type Outcome = Result<(Value, Status), CliError>;

fn ord_text(b: OrdBound) -> String {
    match b {
        OrdBound::Exact(v) => v.to_string(),
        OrdBound::AtLeast(k) => format!(">={k}"),
        OrdBound::Infinite => "inf".into(),
    }
}

fn norm_text(p: u32, n: Norm) -> String {
    match n {
        Norm::Zero => "0".into(),
        Norm::PPower(e) => format!("{p}^{e}"),
    }
}

fn rational(cfg: &ExperimentConfig, field: &str, text: &str) -> Result<BigRational, ConfigError> {
    parse_rational(text, cfg.prime).map_err(|e| ConfigError::new(field, e.to_string()))
}

fn build_map(cfg: &ExperimentConfig) -> Result<PottsBetheMap, CliError> {
    let theta = rational(cfg, "theta", &cfg.theta)?;
    let q = rational(cfg, "q", &cfg.q)?;
    Ok(PottsBetheMap::from_rationals(cfg.prime, &theta, &q, cfg.precision)?)
}

fn regime_json(cfg: &ExperimentConfig) -> Value {
    match build_map(cfg) {
        Ok(m) => json!({ "tag": m.regime().tag(), "inequality_chain": m.inequality_chain() }),
        Err(e) => json!({ "tag": "none", "inequality_chain": format!("regime not established: {e}") }),
    }
}

fn inputs_json(cfg: &ExperimentConfig) -> Value {
    json!({
        "prime": cfg.prime,
        "theta": cfg.theta,
        "q": cfg.q,
        "q_states": cfg.q_states,
        "precision": cfg.precision,
        "seed": cfg.seed,
        "max_iter": cfg.max_iter,
        "x": cfg.x,
        "word": cfg.word,
        "form": cfg.form,
        "m1": cfg.m1,
        "m2": cfg.m2,
        "m3": cfg.m3,
        "alpha_size": cfg.alpha_size,
        "m": cfg.m,
        "length": cfg.length,
        "samples": cfg.samples,
    })
}

/// Runs the configured experiment. Failures are reported inside the
/// document; the status selects the exit code.
pub fn run_experiment(cfg: &ExperimentConfig) -> Report {
    let start = Instant::now();
    let outcome = match cfg.experiment {
        Experiment::FixedPoints => fixed_points(cfg),
        Experiment::Classify => classify(cfg),
        Experiment::Orbit => orbit(cfg),
        Experiment::JuliaPartition => julia_partition(cfg),
        Experiment::Incidence => incidence(cfg),
        Experiment::Periodic => periodic(cfg),
        Experiment::Conjugacy => conjugacy(cfg),
        Experiment::GibbsCompat => gibbs_compat(cfg),
        Experiment::TiSolve => ti_solve_experiment(cfg),
        Experiment::HmConstruct => hm_construct(cfg),
        Experiment::CountBound => count_bound(cfg),
        Experiment::SmallPrime => small_prime(cfg),
    };
    let mut doc = json!({
        "schema_version": SCHEMA_VERSION,
        "experiment": cfg.experiment.name(),
        "inputs": inputs_json(cfg),
        "regime": regime_json(cfg),
    });
    let status = match outcome {
        Ok((results, status)) => {
            doc["status"] = json!(status.name());
            doc["results"] = results;
            status
        }
        Err(e) => {
            doc["status"] = json!(Status::Error.name());
            doc["error"] = json!({ "kind": e.kind(), "message": e.to_string() });
            Status::Error
        }
    };
    if cfg.timing {
        doc["timing_ms"] = json!(start.elapsed().as_millis() as u64);
    }
    Report { status, document: doc }
}

fn fixed_points(cfg: &ExperimentConfig) -> Outcome {
    let m = build_map(cfg)?;
    let p = m.prime();
    let mut points = Vec::new();
    for f in m.fixed_points() {
        let residual = m.eval(&f.point)?.diff_ord(&f.point);
        points.push(json!({
            "index": f.index,
            "point": f.point.render(),
            "multiplier": f.multiplier.render(),
            "multiplier_norm": norm_text(p, f.multiplier_norm),
            "class": f.class.name(),
            "residual_ord": ord_text(residual),
        }));
    }
    let relations: Vec<Value> = m
        .fixed_point_relations()?
        .into_iter()
        .map(|(name, holds)| json!({ "relation": name, "holds": holds }))
        .collect();
    let cubic = m.cubic_roots().map(|c| {
        json!({
            "newton_polygon": c.newton_polygon.segments.iter()
                .map(|s| json!({ "slope": s.slope.to_string(), "length": s.length }))
                .collect::<Vec<_>>(),
            "roots": c.roots.iter()
                .map(|r| json!({ "y": r.value.render(), "residue_class": r.residue_class, "residual_ord": r.residual_ord }))
                .collect::<Vec<_>>(),
        })
    });
    Ok((
        json!({ "count": points.len(), "fixed_points": points, "relations": relations, "cubic": cubic }),
        Status::Ok,
    ))
}

fn required_x(cfg: &ExperimentConfig) -> Result<PadicNumber, CliError> {
    let text = cfg.x.as_deref().ok_or_else(|| ConfigError::new("x", "this experiment needs a point"))?;
    Ok(crate::literal::parse_padic_literal(text, cfg.prime, cfg.precision)
        .map_err(|e| ConfigError::new("x", e.to_string()))?)
}

fn classify(cfg: &ExperimentConfig) -> Outcome {
    let m = build_map(cfg)?;
    let x = required_x(cfg)?;
    let region = m.classify_region(&x)?;
    Ok((
        json!({
            "x": x.render(),
            "region": region.tag(),
            "ord_x_minus_1": ord_text(x.diff_ord(&PadicNumber::one(cfg.prime, cfg.precision))),
            "ord_x_minus_pole": ord_text(x.diff_ord(m.singular_point())),
        }),
        Status::Ok,
    ))
}

fn basin_json(outcome: &BasinOutcome) -> (Value, Status) {
    match outcome {
        BasinOutcome::Converges(n) => (json!({ "outcome": "converges", "steps_to_A0": n }), Status::Ok),
        BasinOutcome::InJuliaPartition { symbol, label } => (
            json!({ "outcome": "julia_partition", "symbol": symbol, "label": label }),
            Status::Ok,
        ),
        BasinOutcome::HitsSingular(n) => (json!({ "outcome": "singular", "step": n }), Status::Ok),
        BasinOutcome::Undecided => (json!({ "outcome": "undecided" }), Status::Undecided),
    }
}

fn orbit(cfg: &ExperimentConfig) -> Outcome {
    let m = build_map(cfg)?;
    let x = required_x(cfg)?;
    let mut steps = Vec::new();
    let mut y = x.clone();
    for n in 0..=cfg.max_iter {
        let region = match m.classify_region(&y) {
            Ok(r) => r.tag().to_string(),
            Err(e) => format!("unclassified ({e})"),
        };
        steps.push(json!({ "n": n, "x": y.render(), "region": region }));
        if region == Region::Singular.tag() || n == cfg.max_iter {
            break;
        }
        y = match m.eval(&y) {
            Ok(v) => v,
            Err(_) => break,
        };
    }
    let part = build_markov_partition(&m).ok();
    let trap = part.as_ref().map(|p| p as &dyn Trap);
    let (basin, status) = basin_json(&basin_decide_with(&m, &x, cfg.max_iter, trap));
    let conv = m.steps_to_attractor(&x, ATTRACTOR_ORD, cfg.max_iter).ok().flatten();
    Ok((
        json!({ "orbit": steps, "basin": basin, "steps_to_attractor": conv, "attractor_ord": ATTRACTOR_ORD }),
        status,
    ))
}

fn partition_json(part: &MarkovPartition) -> Value {
    let p = part.balls.first().map(|b| b.center.prime()).unwrap_or(0);
    let balls: Vec<Value> = part
        .balls
        .iter()
        .enumerate()
        .map(|(i, b)| {
            json!({
                "label": part.labels[i],
                "center": b.center.render(),
                "radius": norm_text(p, Norm::PPower(b.radius_exp)),
                "tau": part.tau[i],
                "branch_residue": part.branch_residues()[i],
            })
        })
        .collect();
    let kappa: Vec<Vec<Value>> = part
        .kappa
        .iter()
        .map(|row| row.iter().map(|&k| if k == i64::MAX { Value::Null } else { json!(k) }).collect())
        .collect();
    json!({ "m": part.m, "balls": balls, "kappa": kappa })
}

fn julia_partition(cfg: &ExperimentConfig) -> Outcome {
    let m = build_map(cfg)?;
    let part = build_markov_partition(&m)?;
    let mut doc = partition_json(&part);
    doc["weak_repeller"] = json!(part.is_weak_repeller());
    doc["pairwise_disjoint"] = json!(part.is_pairwise_disjoint()?);
    Ok((doc, Status::Ok))
}

fn matrix_json(a: &IncidenceMatrix) -> Value {
    json!(a.rows())
}

fn incidence(cfg: &ExperimentConfig) -> Outcome {
    let m = build_map(cfg)?;
    let part = build_markov_partition(&m)?;
    let a = incidence_from_dynamics(&part, &m)?;
    let (template, matches) = match part.m {
        Some(k) => {
            let t = a_m_template(k)?;
            let same = t == a;
            (matrix_json(&t), same)
        }
        None => (matrix_json(&IncidenceMatrix::full(3)), a == IncidenceMatrix::full(3)),
    };
    let traces: Vec<String> = (1..=8).map(|n| count_periodic_points(&a, n).to_string()).collect();
    Ok((
        json!({
            "labels": part.labels,
            "matrix": matrix_json(&a),
            "template": template,
            "matches_template": matches,
            "irreducible": a.is_irreducible(),
            "periodic_point_counts": traces,
        }),
        Status::Ok,
    ))
}

fn cycle_words(a: &IncidenceMatrix, n: usize) -> Vec<Vec<usize>> {
    a.admissible_words(n)
        .into_iter()
        .filter(|w| {
            let mut c = w.clone();
            c.push(w[0]);
            a.is_admissible(&c)
        })
        .collect()
}

fn periodic(cfg: &ExperimentConfig) -> Outcome {
    let m = build_map(cfg)?;
    let part = build_markov_partition(&m)?;
    let a = incidence_from_dynamics(&part, &m)?;
    let words = match &cfg.word {
        Some(w) => vec![part.parse_word(w)?],
        None => {
            let n = cfg.length.min(4);
            cycle_words(&a, n)
        }
    };
    let hi = m.at_precision(cfg.precision + 8 * words.iter().map(Vec::len).max().unwrap_or(1) as i64 + 16);
    let mut out = Vec::new();
    let mut pts: Vec<PadicNumber> = Vec::new();
    for w in &words {
        let x = periodic_point_from_word(&m, &part, &a, w)?;
        let check = match &hi {
            Some(Ok(h)) => {
                let mut y = x.clone();
                for _ in 0..w.len() {
                    y = h.eval(&y)?;
                }
                ord_text(y.diff_ord(&x))
            }
            _ => "unchecked".into(),
        };
        out.push(json!({
            "word": Itinerary::finite(w.clone()).render(&part),
            "point": x.truncate_abs(cfg.precision).render(),
            "residual_ord": check,
        }));
        pts.push(x);
    }
    let mut distinct = true;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if !matches!(pts[i].diff_ord(&pts[j]), OrdBound::Exact(_)) {
                distinct = false;
            }
        }
    }
    Ok((json!({ "count": out.len(), "pairwise_distinct": distinct, "points": out }), Status::Ok))
}

fn chain_length(cfg: &ExperimentConfig) -> Result<usize, CliError> {
    if let Some(m) = cfg.m {
        return Ok(m as usize);
    }
    match build_map(cfg)?.regime() {
        MapRegime::Chain(m) => Ok(m as usize),
        other => Err(ConfigError::new("m", format!("regime {} has no A_m; pass --m", other.tag())).into()),
    }
}

fn conjugacy(cfg: &ExperimentConfig) -> Outcome {
    let m = chain_length(cfg)?;
    if cfg.length < m + 1 || cfg.length > 12 {
        return Err(ConfigError::new("length", format!("needs {}..=12", m + 1)).into());
    }
    let mut rows = Vec::new();
    let mut all = true;
    for len in m + 1..=cfg.length {
        let r = check_pi_conjugacy(m, len)?;
        all &= r.holds();
        rows.push(json!({
            "length": len,
            "words": r.words,
            "distinct_images": r.distinct_images,
            "admissible_words": r.admissible_words,
            "images_admissible": r.all_images_admissible,
            "prefix_recovered": r.prefix_recovered,
            "surjective": r.surjective,
            "unique_prefix_preimage": r.unique_prefix_preimage,
            "holds": r.holds(),
        }));
    }
    Ok((json!({ "m": m, "conjugacy_holds": all, "lengths": rows }), Status::Ok))
}

fn parse_form(cfg: &ExperimentConfig) -> Result<TiForm, ConfigError> {
    TiForm::parse(&cfg.form).ok_or_else(|| ConfigError::new("form", format!("`{}` is not one of A..E", cfg.form)))
}

fn compat_json(r: &CompatibilityReport) -> Value {
    json!({
        "n": r.n,
        "residuals": r.residuals.iter().map(|&b| ord_text(b)).collect::<Vec<_>>(),
        "min_residual": r.min_residual,
        "threshold": r.threshold,
        "passed": r.passed,
    })
}

fn gibbs_compat(cfg: &ExperimentConfig) -> Outcome {
    let theta = cfg.theta_value()?;
    let q = cfg.spin_states()?;
    let model = PottsModel::from_theta(theta.clone(), q)?;
    let form = parse_form(cfg)?;
    let sols = ti_solve(form, q, &theta, cfg.m1, cfg.m2, cfg.m3)?;
    let sol = sols
        .first()
        .ok_or_else(|| padic_potts::Error::InvalidArgument(format!("form {} has no solution here", cfg.form)))?;
    let bf = BoundaryFunction::from_z(&[sol.z.clone()])?;
    let rep = check_compatibility(3, &model, &bf, 1)?;
    Ok((
        json!({
            "form": cfg.form,
            "z": sol.z.iter().map(PadicNumber::render).collect::<Vec<_>>(),
            "compatibility": compat_json(&rep),
        }),
        Status::Ok,
    ))
}

fn ti_solve_experiment(cfg: &ExperimentConfig) -> Outcome {
    let theta = cfg.theta_value()?;
    let q = cfg.spin_states()?;
    let form = parse_form(cfg)?;
    let sols = ti_solve(form, q, &theta, cfg.m1, cfg.m2, cfg.m3)?;
    let mut rows = Vec::new();
    for s in &sols {
        let bf = BoundaryFunction::from_z(&[s.z.clone()])?;
        let h: Vec<PadicNumber> = s.z.iter().map(ln_p).collect::<Result<_, _>>()?;
        let f_defined = tree_recursion_f(&h, &theta).is_ok();
        rows.push(json!({
            "z": s.z.iter().map(PadicNumber::render).collect::<Vec<_>>(),
            "residual_ord": s.residual_ord,
            "distinct_entries": s.distinct,
            "satisfies_recursion": satisfies_recursion(&bf, &theta, 3, cfg.precision - 10)?,
            "log_recursion_defined": f_defined,
        }));
    }
    Ok((json!({ "form": cfg.form, "count": rows.len(), "solutions": rows }), Status::Ok))
}

fn hm_construct(cfg: &ExperimentConfig) -> Outcome {
    let theta_r = rational(cfg, "theta", &cfg.theta)?;
    let q_r = rational(cfg, "q", &cfg.q)?;
    let theta = cfg.theta_value()?;
    let q = cfg.spin_states()?;
    let alpha = BigRational::from_integer(BigInt::from(cfg.alpha_size));
    if cfg.alpha_size == 0 {
        return Err(ConfigError::new("alpha-size", "must be positive").into());
    }
    let one = BigRational::from_integer(BigInt::from(1));
    let big_theta = (&theta_r - &one) / &alpha + &one;
    let big_q = &q_r / &alpha;
    let m = PottsBetheMap::from_rationals(cfg.prime, &big_theta, &big_q, cfg.precision)?;
    let part = build_markov_partition(&m)?;
    let a = incidence_from_dynamics(&part, &m)?;
    let w = part.parse_word(cfg.word.as_deref().unwrap_or("12"))?;
    let orbit: Vec<PadicNumber> = (0..w.len())
        .map(|r| {
            let mut rot = w[r..].to_vec();
            rot.extend_from_slice(&w[..r]);
            periodic_point_from_word(&m, &part, &a, &rot)
        })
        .collect::<Result<_, _>>()?;
    let bf = cycle_to_measure(&orbit, cfg.alpha_size, q, &theta)?;
    let rec = satisfies_recursion(&bf, &theta, 3, cfg.precision - 10)?;
    let model = PottsModel::from_theta(theta.clone(), q)?;
    let compat = check_compatibility(3, &model, &bf, 1)?;
    let levels: Vec<Value> = (0..bf.period())
        .map(|j| Ok(json!(bf.z(j)?.iter().take(cfg.alpha_size).map(PadicNumber::render).collect::<Vec<_>>())))
        .collect::<Result<_, padic_potts::Error>>()?;
    Ok((
        json!({
            "reduced_map": { "theta": big_theta.to_string(), "q": big_q.to_string(), "regime": m.regime().tag() },
            "cycle_word": Itinerary::finite(w.clone()).render(&part),
            "period": bf.period(),
            "orbit": orbit.iter().map(|x| x.truncate_abs(cfg.precision).render()).collect::<Vec<_>>(),
            "alpha_components": levels,
            "satisfies_recursion": rec,
            "compatibility": compat_json(&compat),
        }),
        Status::Ok,
    ))
}

fn count_bound(cfg: &ExperimentConfig) -> Outcome {
    let q = cfg.spin_states()?;
    let m = cfg.m.unwrap_or(1);
    let b = hgm_lower_bound(m, q, cfg.prime)?;
    Ok((json!({ "m": m, "q_states": q, "prime": cfg.prime, "bound": b.to_string() }), Status::Ok))
}

fn small_prime(cfg: &ExperimentConfig) -> Outcome {
    let m = build_map(cfg)?;
    let p = m.prime();
    let cubic = m.cubic_roots();
    let nontrivial = m.fixed_points().len() - 1;
    let mut rng = seeded_rng(cfg.seed);
    let mut centers = vec![PadicNumber::zero(p), PadicNumber::one(p, cfg.precision), m.singular_point().clone()];
    centers.extend(m.fixed_point(1).cloned());
    let (mut converged, mut excluded, mut open, mut worst) = (0usize, 0usize, 0usize, 0usize);
    let mut tried = 0;
    while converged + open < cfg.samples {
        tried += 1;
        if tried > 20 * cfg.samples.max(1) {
            break;
        }
        let c = &centers[rng.gen_range(0..centers.len())];
        let x = c.add_approx(&random_padic(&mut rng, p, -4..=12, cfg.precision as u32));
        if m.fixed_points()[1..].iter().any(|f| !matches!(x.diff_ord(&f.point), OrdBound::Exact(_))) {
            excluded += 1;
            continue;
        }
        if let BasinOutcome::HitsSingular(_) = basin_decide_with(&m, &x, SINGULAR_DEPTH, None) {
            excluded += 1;
            continue;
        }
        match m.steps_to_attractor(&x, ATTRACTOR_ORD, cfg.max_iter) {
            Ok(Some(n)) => {
                converged += 1;
                worst = worst.max(n);
            }
            _ => open += 1,
        }
    }
    let all = open == 0 && converged == cfg.samples;
    let summary = match (nontrivial, all) {
        (0, true) => "no non-trivial fixed points; sampled orbits converge".to_string(),
        (n, true) => format!("{n} non-trivial fixed point(s); sampled orbits converge"),
        (n, false) => format!("{n} non-trivial fixed point(s); {open} sampled orbits undecided"),
    };
    let status = if all { Status::Ok } else { Status::Undecided };
    Ok((
        json!({
            "summary": summary,
            "cubic_roots": cubic.map(|c| c.count()),
            "newton_polygon": cubic.map(|c| c.newton_polygon.segments.iter()
                .map(|s| json!({ "slope": s.slope.to_string(), "length": s.length }))
                .collect::<Vec<_>>()),
            "fixed_points": m.fixed_points().iter().map(|f| json!({
                "point": f.point.render(),
                "multiplier_norm": norm_text(p, f.multiplier_norm),
                "class": f.class.name(),
            })).collect::<Vec<_>>(),
            "samples": { "converged": converged, "undecided": open, "excluded": excluded, "max_steps": worst, "attractor_ord": ATTRACTOR_ORD },
        }),
        status,
    ))
}
