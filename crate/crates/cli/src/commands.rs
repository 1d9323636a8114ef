//! Command implementations: each runs one analysis against a loaded
//! instance and produces the report payload plus the process exit code.
//!
//! Exit codes: 0 success (efficient / certificate found / saddle / certified),
//! 2 usage or input error, 3 not efficient, 4 no certificate, 5 uncertified
//! scalarization, 6 not a saddle point, 1 failed verification properties.

use crate::instance::LoadedInstance;
use crate::report::csv_number;
use crate::verify::{run_suite, PropertyOutcome, Suite};
use serde_json::{json, Value};
use sgop_core::problem::{
    brute_force_efficient, check_disjoint_h_k, evaluate_objective, image_cloud, transported_cone,
    GopInstance, Resolution,
};
use sgop_core::scalarization::{solve_gop_via_scalarization, ScalarizationConfig};
use sgop_core::separation::{
    certificate_search, duality_gap, is_saddle_point1, is_saddle_point2, CertificateKind,
    CertificateParams, GammaParam, LinearSepParams, NonlinearSepParams, SearchGrid,
};
use sgop_core::sphere::{SpherePoint, TangentVector};
use sgop_core::Vec3;

pub struct CommandError {
    pub message: String,
    pub exit: u8,
}

impl CommandError {
    pub fn usage(message: impl Into<String>) -> Self {
        CommandError { message: message.into(), exit: 2 }
    }
}

impl From<sgop_core::Error> for CommandError {
    fn from(e: sgop_core::Error) -> Self {
        CommandError { message: e.to_string(), exit: 2 }
    }
}

pub type CommandResult = Result<(Value, u8), CommandError>;

fn point_json(p: &SpherePoint) -> Value {
    json!(p.coords().to_array())
}

fn tangent_json(v: &TangentVector) -> Value {
    json!({ "base": v.base().coords().to_array(), "vec": v.vec().to_array() })
}

fn linear_params_json(p: &LinearSepParams) -> Value {
    json!({ "theta": tangent_json(&p.theta), "lambda": p.lambda })
}

fn nonlinear_params_json(p: &NonlinearSepParams) -> Value {
    let gamma = match &p.gamma {
        GammaParam::Zero => json!({ "kind": "zero" }),
        GammaParam::Interior(v) => json!({ "kind": "interior", "values": v }),
    };
    json!({ "phi": tangent_json(&p.phi), "gamma": gamma })
}

/// Parses `ref` or a comma-separated coordinate triple.
pub fn parse_y(spec: &str, inst: &GopInstance) -> Result<SpherePoint, CommandError> {
    if spec == "ref" {
        return Ok(inst.ref_point());
    }
    let coords = parse_triple(spec).map_err(|m| CommandError::usage(format!("--y: {m}")))?;
    SpherePoint::new(Vec3::from_array(coords))
        .map_err(|e| CommandError::usage(format!("--y: {e}")))
}

pub fn parse_triple(spec: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got {spec:?}"));
    }
    let mut out = [0.0; 3];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part.trim().parse::<f64>().map_err(|e| format!("{part:?}: {e}"))?;
    }
    Ok(out)
}

pub fn parse_vector(spec: &str) -> Result<Vec<f64>, String> {
    spec.split(',')
        .map(|part| part.trim().parse::<f64>().map_err(|e| format!("{part:?}: {e}")))
        .collect()
}

pub fn run_check_efficiency(
    loaded: &LoadedInstance,
    y: &SpherePoint,
    resolution: Resolution,
) -> CommandResult {
    let eff = brute_force_efficient(&loaded.instance, y, resolution)?;
    let dis = check_disjoint_h_k(&loaded.instance, y, resolution)?;
    let payload = json!({
        "efficient": eff.efficient,
        "witness": eff.witness.as_ref().map(point_json),
        "h_image_disjoint": dis.disjoint,
        "h_witness_source": dis.witness.as_ref().map(|w| point_json(&w.source)),
    });
    Ok((payload, if eff.efficient { 0 } else { 3 }))
}

pub fn run_separate(
    loaded: &LoadedInstance,
    y: &SpherePoint,
    kind: CertificateKind,
    grid: &SearchGrid,
    resolution: Resolution,
) -> CommandResult {
    let cloud = image_cloud(&loaded.instance, y, resolution)?;
    let cert = certificate_search(&loaded.instance, y, kind, &cloud, grid, resolution)?;
    let family = match kind {
        CertificateKind::Linear => "linear",
        CertificateKind::Nonlinear => "nonlinear",
    };
    match cert {
        Some(c) => {
            let params = match &c.params {
                CertificateParams::Linear(p) => linear_params_json(p),
                CertificateParams::Nonlinear(p) => nonlinear_params_json(p),
            };
            let payload = json!({
                "found": true,
                "family": family,
                "params": params,
                "max_omega_over_cloud": c.max_omega_over_cloud,
                "resolution": { "radial": c.resolution.radial, "angular": c.resolution.angular },
            });
            Ok((payload, 0))
        }
        None => Ok((json!({ "found": false, "family": family }), 4)),
    }
}

#[allow(clippy::too_many_arguments)]
pub fn run_saddle(
    loaded: &LoadedInstance,
    y: &SpherePoint,
    kind: CertificateKind,
    theta: Option<[f64; 3]>,
    lambda: Option<Vec<f64>>,
    phi: Option<[f64; 3]>,
    gamma: Option<String>,
    grid: &SearchGrid,
    resolution: Resolution,
) -> CommandResult {
    let inst = &loaded.instance;
    let cloud = image_cloud(inst, y, resolution)?;
    let fy = evaluate_objective(inst, y)?;
    let l = inst.constraint_len();
    match kind {
        CertificateKind::Linear => {
            let lambda_grid = grid.lambda_points(l);
            let (params, derived) = match (theta, lambda) {
                (Some(t), lam) => {
                    let theta = TangentVector::projected(fy, Vec3::from_array(t));
                    (LinearSepParams { theta, lambda: lam.unwrap_or(vec![0.0; l]) }, false)
                }
                (None, lam) => {
                    let cert = certificate_search(
                        inst,
                        y,
                        CertificateKind::Linear,
                        &cloud,
                        grid,
                        resolution,
                    )?;
                    match cert {
                        Some(c) => {
                            let CertificateParams::Linear(mut p) = c.params else {
                                unreachable!()
                            };
                            if let Some(lam) = lam {
                                p.lambda = lam;
                            }
                            (p, true)
                        }
                        None => {
                            let payload = json!({
                                "family": "linear",
                                "saddle": false,
                                "note": "no certificate parameters found to test",
                            });
                            return Ok((payload, 6));
                        }
                    }
                }
            };
            let saddle =
                is_saddle_point1(inst, y, &params.theta, &params.lambda, &cloud, &lambda_grid, 1e-9)?;
            let payload = json!({
                "family": "linear",
                "saddle": saddle,
                "derived_params": derived,
                "params": linear_params_json(&params),
            });
            Ok((payload, if saddle { 0 } else { 6 }))
        }
        CertificateKind::Nonlinear => {
            let gamma_grid = grid.gamma_points(l);
            let parsed_gamma = match gamma.as_deref() {
                None => None,
                Some("zero") => Some(GammaParam::Zero),
                Some(spec) => {
                    let values =
                        parse_vector(spec).map_err(|m| CommandError::usage(format!("--gamma: {m}")))?;
                    Some(GammaParam::Interior(values))
                }
            };
            let (params, derived) = match (phi, parsed_gamma) {
                (Some(p), g) => {
                    let phi = TangentVector::projected(fy, Vec3::from_array(p));
                    (NonlinearSepParams { phi, gamma: g.unwrap_or(GammaParam::Zero) }, false)
                }
                (None, g) => {
                    let cert = certificate_search(
                        inst,
                        y,
                        CertificateKind::Nonlinear,
                        &cloud,
                        grid,
                        resolution,
                    )?;
                    match cert {
                        Some(c) => {
                            let CertificateParams::Nonlinear(mut p) = c.params else {
                                unreachable!()
                            };
                            if let Some(g) = g {
                                p.gamma = g;
                            }
                            (p, true)
                        }
                        None => {
                            let payload = json!({
                                "family": "nonlinear",
                                "saddle": false,
                                "note": "no certificate parameters found to test",
                            });
                            return Ok((payload, 6));
                        }
                    }
                }
            };
            let saddle =
                is_saddle_point2(inst, y, &params.phi, &params.gamma, &cloud, &gamma_grid, 1e-9)?;
            let payload = json!({
                "family": "nonlinear",
                "saddle": saddle,
                "derived_params": derived,
                "params": nonlinear_params_json(&params),
            });
            Ok((payload, if saddle { 0 } else { 6 }))
        }
    }
}

pub fn run_gap(
    loaded: &LoadedInstance,
    y: &SpherePoint,
    fix_lambda: Option<Vec<f64>>,
    grid: &SearchGrid,
    resolution: Resolution,
) -> CommandResult {
    let inst = &loaded.instance;
    let cloud = image_cloud(inst, y, resolution)?;
    let fy = evaluate_objective(inst, y)?;
    let cone = transported_cone(inst, &fy)?;
    let thetas = grid.polar_directions(&cone)?;
    let lambdas = match &fix_lambda {
        Some(l) => {
            if l.len() != inst.constraint_len() {
                return Err(CommandError::usage(format!(
                    "--gap-fix-lambda needs {} components",
                    inst.constraint_len()
                )));
            }
            vec![l.clone()]
        }
        None => grid.lambda_points(inst.constraint_len()),
    };
    let gap = duality_gap(inst, y, &thetas, &lambdas, &cloud)?;
    let zero_gap = gap.omega <= inst.tolerances().certificate;
    let payload = json!({
        "omega": gap.omega,
        "zero_gap": zero_gap,
        "argmin": linear_params_json(&gap.argmin),
        "lambda_fixed": fix_lambda.is_some(),
    });
    Ok((payload, 0))
}

pub fn run_scalarize(loaded: &LoadedInstance) -> CommandResult {
    let settings = loaded
        .scalarization_settings()
        .map_err(|e| CommandError::usage(e.to_string()))?
        .ok_or_else(|| {
            CommandError::usage("instance file has no [scalarization] section".to_string())
        })?;
    let config = ScalarizationConfig {
        p_ref: settings.p_ref,
        y0: settings.y0,
        resolution: settings.resolution,
        tol: settings.tol,
    };
    let outcome = solve_gop_via_scalarization(&loaded.instance, &settings.y0, &config)?;
    let trace: Vec<Value> = outcome
        .trace
        .iter()
        .map(|t| {
            json!({
                "y": point_json(&t.y),
                "x_best": point_json(&t.x_best),
                "value": t.value,
                "feasible_count": t.feasible_count,
            })
        })
        .collect();
    let payload = json!({
        "x_star": point_json(&outcome.x_star),
        "certified": outcome.certified,
        "stability_warning": outcome.stability_warning,
        "trace": trace,
    });
    Ok((payload, if outcome.certified { 0 } else { 5 }))
}

pub enum SampleWhat {
    Patch,
    Image,
}

/// Builds the CSV rows for a sample dump (header + data lines, no preamble).
pub fn sample_csv(
    loaded: &LoadedInstance,
    y: &SpherePoint,
    what: &SampleWhat,
    resolution: Resolution,
) -> Result<Vec<String>, CommandError> {
    let mut rows = Vec::new();
    match what {
        SampleWhat::Patch => {
            let pts = sgop_core::sphere::sample_patch(
                loaded.instance.patch(),
                resolution.radial,
                resolution.angular,
            )?;
            rows.push("index,x,y,z".to_string());
            for (i, p) in pts.iter().enumerate() {
                let c = p.coords();
                rows.push(format!(
                    "{i},{},{},{}",
                    csv_number(c.x),
                    csv_number(c.y),
                    csv_number(c.z)
                ));
            }
        }
        SampleWhat::Image => {
            let cloud = image_cloud(&loaded.instance, y, resolution)?;
            let l = loaded.instance.constraint_len();
            let mut header = "index,src_x,src_y,src_z,u_x,u_y,u_z".to_string();
            for k in 1..=l {
                header.push_str(&format!(",v{k}"));
            }
            rows.push(header);
            for (i, sample) in cloud.iter().enumerate() {
                let s = sample.source.coords();
                let u = sample.image.u.vec();
                let mut row = format!(
                    "{i},{},{},{},{},{},{}",
                    csv_number(s.x),
                    csv_number(s.y),
                    csv_number(s.z),
                    csv_number(u.x),
                    csv_number(u.y),
                    csv_number(u.z)
                );
                for v in &sample.image.v {
                    row.push(',');
                    row.push_str(&csv_number(*v));
                }
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

pub fn run_verify(suite: Suite, seed: u64) -> (Value, u8, Vec<PropertyOutcome>) {
    let outcomes = run_suite(suite, seed);
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    let payload = json!({
        "suite": suite.name(),
        "seed": seed,
        "properties": serde_json::to_value(&outcomes).expect("outcomes serialize"),
        "failed": failed,
    });
    (payload, if failed == 0 { 0 } else { 1 }, outcomes)
}
