//! Seeded verification suites behind `sgop verify`.
//!
//! Each suite replays the library's invariant batteries with a reproducible
//! generator and reports one outcome per property, including a minimal
//! reproduction record for the first failing case.

use crate::gen::{
    cone_span, feasible_candidates, frame_dir, random_instance, random_point,
    random_scalarization_instance, random_tangent, rng_for,
};
use rand::Rng;
use serde::Serialize;
use sgop_core::problem::{
    brute_force_efficient, check_disjoint_h_k, evaluate_objective, image_cloud, in_extended_image,
    in_h, is_feasible, transported_cone, ImagePoint, Resolution,
};
use sgop_core::scalar::{
    gerstewitz, oriented_distance_halfline, oriented_distance_orthant, oriented_distance_sector,
    OrthantParams,
};
use sgop_core::scalarization::{in_g, in_gp, scalarizing_vector_at, solve_quasi_min};
use sgop_core::separation::{
    certificate_search, duality_gap, find_separator_omega1, find_separator_omega2,
    is_saddle_point1, omega1, omega2, polar_directions, CertificateKind, CertificateParams,
    GammaParam, LinearSepParams, NonlinearSepParams, SearchGrid,
};
use sgop_core::sphere::{
    distance, exp_map, log_map, parallel_transport, SpherePoint, TangentVector,
};
use sgop_core::Vec3;
use std::f64::consts::PI;

#[derive(Debug, Clone, Serialize)]
pub struct PropertyOutcome {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Geometry,
    Delta,
    Gerstewitz,
    Isa,
    Scalarization,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Suite> {
        Some(match s {
            "geometry" => Suite::Geometry,
            "delta" => Suite::Delta,
            "gerstewitz" => Suite::Gerstewitz,
            "isa" => Suite::Isa,
            "scalarization" => Suite::Scalarization,
            "all" => Suite::All,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Geometry => "geometry",
            Suite::Delta => "delta",
            Suite::Gerstewitz => "gerstewitz",
            Suite::Isa => "isa",
            Suite::Scalarization => "scalarization",
            Suite::All => "all",
        }
    }
}

fn property(
    name: &str,
    cases: usize,
    mut f: impl FnMut(usize) -> Result<(), String>,
) -> PropertyOutcome {
    for i in 0..cases {
        if let Err(msg) = f(i) {
            return PropertyOutcome {
                name: name.into(),
                passed: false,
                cases: i + 1,
                failure: Some(msg),
            };
        }
    }
    PropertyOutcome { name: name.into(), passed: true, cases, failure: None }
}

pub fn run_suite(suite: Suite, seed: u64) -> Vec<PropertyOutcome> {
    match suite {
        Suite::Geometry => geometry_suite(seed),
        Suite::Delta => delta_suite(seed),
        Suite::Gerstewitz => gerstewitz_suite(seed),
        Suite::Isa => isa_suite(seed),
        Suite::Scalarization => scalarization_suite(seed),
        Suite::All => {
            let mut all = geometry_suite(seed);
            all.extend(delta_suite(seed));
            all.extend(gerstewitz_suite(seed));
            all.extend(isa_suite(seed));
            all.extend(scalarization_suite(seed));
            all
        }
    }
}

fn geometry_suite(seed: u64) -> Vec<PropertyOutcome> {
    let mut out = Vec::new();

    out.push(property("geometry/exp-log round trip", 2000, {
        let mut rng = rng_for(seed, 1);
        move |_| {
            let p = random_point(&mut rng);
            let v = random_tangent(&mut rng, &p, PI - 0.1);
            let q = exp_map(&v).map_err(|e| e.to_string())?;
            let back = log_map(&p, &q).map_err(|e| e.to_string())?;
            let dev = (back.vec() - v.vec()).norm();
            if dev > 1e-9 {
                return Err(format!("p={:?} ‖v‖={} deviation={dev}", p.coords(), v.norm()));
            }
            Ok(())
        }
    }));

    out.push(property("geometry/log norm equals distance", 2000, {
        let mut rng = rng_for(seed, 2);
        move |_| {
            let p = random_point(&mut rng);
            let q = random_point(&mut rng);
            if distance(&p, &q) >= PI - 1e-6 {
                return Ok(());
            }
            let v = log_map(&q, &p).map_err(|e| e.to_string())?;
            let dev = (v.norm() - distance(&p, &q)).abs();
            if dev > 1e-12 {
                return Err(format!("p={:?} q={:?} dev={dev}", p.coords(), q.coords()));
            }
            Ok(())
        }
    }));

    out.push(property("geometry/distance axioms", 1000, {
        let mut rng = rng_for(seed, 3);
        move |_| {
            let p = random_point(&mut rng);
            let q = random_point(&mut rng);
            let d = distance(&p, &q);
            if !(0.0..=PI).contains(&d) || d != distance(&q, &p) || distance(&p, &p) != 0.0 {
                return Err(format!("p={:?} q={:?} d={d}", p.coords(), q.coords()));
            }
            Ok(())
        }
    }));

    out.push(property("geometry/transport isometry", 1000, {
        let mut rng = rng_for(seed, 4);
        move |_| {
            let p = random_point(&mut rng);
            let q = random_point(&mut rng);
            if distance(&p, &q) >= PI - 1e-6 {
                return Ok(());
            }
            let u = random_tangent(&mut rng, &p, 2.0);
            let v = random_tangent(&mut rng, &p, 2.0);
            let pu = parallel_transport(&u, &q).map_err(|e| e.to_string())?;
            let pv = parallel_transport(&v, &q).map_err(|e| e.to_string())?;
            let dev = (pu.vec().dot(pv.vec()) - u.vec().dot(v.vec())).abs();
            let tangency = pu.vec().dot(q.coords()).abs();
            if dev > 1e-9 || tangency > 1e-12 * (1.0 + pu.norm()) {
                return Err(format!("p={:?} q={:?} dev={dev} tangency={tangency}",
                    p.coords(), q.coords()));
            }
            Ok(())
        }
    }));

    out.push(property("geometry/transport round trip", 500, {
        let mut rng = rng_for(seed, 5);
        move |_| {
            let p = random_point(&mut rng);
            let q = random_point(&mut rng);
            if distance(&p, &q) >= PI - 1e-6 {
                return Ok(());
            }
            let v = random_tangent(&mut rng, &p, 2.0);
            let back = parallel_transport(&parallel_transport(&v, &q).map_err(|e| e.to_string())?, &p)
                .map_err(|e| e.to_string())?;
            let dev = (back.vec() - v.vec()).norm();
            if dev > 1e-9 {
                return Err(format!("p={:?} q={:?} dev={dev}", p.coords(), q.coords()));
            }
            Ok(())
        }
    }));

    out.push(property("geometry/transport vs ODE oracle", 20, {
        let mut rng = rng_for(seed, 6);
        move |_| {
            let (p, q) = loop {
                let p = random_point(&mut rng);
                let q = random_point(&mut rng);
                let d = distance(&p, &q);
                if d < PI - 1e-3 && d > 1e-3 {
                    break (p, q);
                }
            };
            let v = random_tangent(&mut rng, &p, 1.5);
            let closed = parallel_transport(&v, &q).map_err(|e| e.to_string())?;
            let integrated = transport_ode(&v, &q, 1000);
            let dev = (closed.vec() - integrated).norm();
            if dev > 1e-6 {
                return Err(format!("p={:?} q={:?} dev={dev}", p.coords(), q.coords()));
            }
            Ok(())
        }
    }));

    out.push(property("geometry/log continuity in the base", 20, {
        let mut rng = rng_for(seed, 7);
        move |_| {
            let x0 = random_point(&mut rng);
            let y = random_point(&mut rng);
            let d = distance(&x0, &y);
            if d >= PI - 0.3 || d < 0.1 {
                return Ok(());
            }
            let dir = random_tangent(&mut rng, &x0, 1.0);
            if dir.norm() < 1e-3 {
                return Ok(());
            }
            let dir = dir.scaled(1.0 / dir.norm());
            let at_limit = log_map(&x0, &y).map_err(|e| e.to_string())?;
            for n in 1..=20 {
                let t = 0.5_f64.powi(n);
                let xn = exp_map(&dir.scaled(t)).map_err(|e| e.to_string())?;
                let dev = (log_map(&xn, &y).map_err(|e| e.to_string())?.vec()
                    - at_limit.vec())
                .norm();
                let bound = 20.0 * t / (PI - d);
                if dev > bound {
                    return Err(format!("x0={:?} n={n} dev={dev} bound={bound}", x0.coords()));
                }
            }
            Ok(())
        }
    }));

    out
}

fn transport_ode(v: &TangentVector, to: &SpherePoint, steps: usize) -> Vec3 {
    let p = v.base();
    let d = distance(&p, to);
    let dir = log_map(&p, to).unwrap();
    let e = dir.vec() * (1.0 / d);
    let gamma = |t: f64| p.coords() * t.cos() + e * t.sin();
    let gamma_dot = |t: f64| p.coords() * (-t.sin()) + e * t.cos();
    let rhs = |t: f64, v_cur: Vec3| gamma(t) * (-(v_cur.dot(gamma_dot(t))));
    let h = d / steps as f64;
    let mut v_cur = v.vec();
    let mut t = 0.0;
    for _ in 0..steps {
        let k1 = rhs(t, v_cur);
        let k2 = rhs(t + h / 2.0, v_cur + k1 * (h / 2.0));
        let k3 = rhs(t + h / 2.0, v_cur + k2 * (h / 2.0));
        let k4 = rhs(t + h, v_cur + k3 * h);
        v_cur = v_cur + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        t += h;
    }
    v_cur
}

fn delta_suite(seed: u64) -> Vec<PropertyOutcome> {
    let mut out = Vec::new();

    out.push(property("delta/half-line property list", 500, {
        let mut rng = rng_for(seed, 11);
        move |_| {
            let s1: f64 = rng.gen_range(-5.0..5.0);
            let s2: f64 = rng.gen_range(-5.0..5.0);
            let d1 = oriented_distance_halfline(s1);
            let lip = (d1 - oriented_distance_halfline(s2)).abs() <= (s1 - s2).abs() + 1e-12;
            let signs = oriented_distance_halfline(s1.abs() + 0.1) < 0.0
                && oriented_distance_halfline(0.0) == 0.0
                && oriented_distance_halfline(-s1.abs() - 0.1) > 0.0;
            let homog = [0.5, 2.0, 10.0]
                .iter()
                .all(|t| (oriented_distance_halfline(t * s1) - t * d1).abs() <= 1e-9);
            let mono = oriented_distance_halfline(s2 + 1.0)
                <= oriented_distance_halfline(s2) + 1e-12;
            if !(lip && signs && homog && mono) {
                return Err(format!("s1={s1} s2={s2}"));
            }
            Ok(())
        }
    }));

    out.push(property("delta/orthant property list", 500, {
        let mut rng = rng_for(seed, 12);
        move |_| {
            let l = 3;
            let v1: Vec<f64> = (0..l).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let v2: Vec<f64> = (0..l).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let d1 = oriented_distance_orthant(&v1);
            let diff: f64 =
                v1.iter().zip(&v2).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            if (d1 - oriented_distance_orthant(&v2)).abs() > diff + 1e-12 {
                return Err(format!("lipschitz: v1={v1:?} v2={v2:?}"));
            }
            let interior: Vec<f64> = v1.iter().map(|c| c.abs() + 0.1).collect();
            if oriented_distance_orthant(&interior) >= 0.0 {
                return Err(format!("interior sign: {interior:?}"));
            }
            let above: Vec<f64> = v2.iter().map(|c| c + 0.5).collect();
            if oriented_distance_orthant(&above) > oriented_distance_orthant(&v2) + 1e-12 {
                return Err(format!("monotonicity: v2={v2:?}"));
            }
            Ok(())
        }
    }));

    out.push(property("delta/sector property list", 5, {
        let mut rng = rng_for(seed, 13);
        move |geom| {
            let half = [0.2, 0.5, PI / 4.0, 1.1, 1.45][geom];
            let tilt: f64 = rng.gen_range(0.0..2.0 * PI);
            let base = random_point(&mut rng);
            let cone = cone_span(base, tilt - half, tilt + half);
            for _ in 0..200 {
                let phi: f64 = rng.gen_range(-PI..PI);
                let r: f64 = rng.gen_range(0.0..3.0);
                let v = TangentVector::projected(base, frame_dir(&base, phi) * r);
                let d = oriented_distance_sector(&cone, &v).map_err(|e| e.to_string())?;
                if !d.is_finite() {
                    return Err(format!("not finite at phi={phi} r={r}"));
                }
                let w = TangentVector::projected(
                    base,
                    frame_dir(&base, rng.gen_range(-PI..PI)) * rng.gen_range(0.0..3.0),
                );
                let dw = oriented_distance_sector(&cone, &w).map_err(|e| e.to_string())?;
                if (d - dw).abs() > (v.vec() - w.vec()).norm() + 1e-12 {
                    return Err(format!("lipschitz: phi={phi} r={r}"));
                }
                for t in [0.5, 2.0, 10.0] {
                    let ds = oriented_distance_sector(&cone, &v.scaled(t))
                        .map_err(|e| e.to_string())?;
                    if (ds - t * d).abs() > 1e-9 * (1.0 + t * r) {
                        return Err(format!("homogeneity: phi={phi} r={r} t={t}"));
                    }
                }
                let on_edge = TangentVector::projected(
                    base,
                    frame_dir(&base, tilt + half) * (0.1 + r),
                );
                let de = oriented_distance_sector(&cone, &on_edge).map_err(|e| e.to_string())?;
                if de.abs() > 1e-9 {
                    return Err(format!("boundary: r={r} delta={de}"));
                }
            }
            Ok(())
        }
    }));

    out
}

fn gerstewitz_suite(seed: u64) -> Vec<PropertyOutcome> {
    let mut out = Vec::new();

    out.push(property("gerstewitz/level sets", 500, {
        let mut rng = rng_for(seed, 21);
        move |_| {
            let l = rng.gen_range(1..=4);
            let q: Vec<f64> = (0..l).map(|_| -rng.gen_range(0.1..3.0)).collect();
            let params = OrthantParams::new(q.clone()).map_err(|e| e.to_string())?;
            let v: Vec<f64> = (0..l).map(|_| rng.gen_range(-4.0..4.0)).collect();
            let xi = gerstewitz(&v, &params).map_err(|e| e.to_string())?;
            for dr in [-0.37, 0.41, 1.3] {
                let r = xi + dr;
                let strict = v.iter().zip(&q).all(|(vi, qi)| vi - r * qi > 0.0);
                let closed = v.iter().zip(&q).all(|(vi, qi)| vi - r * qi >= 0.0);
                if (xi < r) != strict || (xi <= r) != closed {
                    return Err(format!("v={v:?} q={q:?} r={r}"));
                }
            }
            Ok(())
        }
    }));

    out.push(property("gerstewitz/convex subadditive lipschitz", 500, {
        let mut rng = rng_for(seed, 22);
        move |_| {
            let l = rng.gen_range(1..=4);
            let q: Vec<f64> = (0..l).map(|_| -rng.gen_range(0.1..3.0)).collect();
            let params = OrthantParams::new(q.clone()).map_err(|e| e.to_string())?;
            let v: Vec<f64> = (0..l).map(|_| rng.gen_range(-4.0..4.0)).collect();
            let w: Vec<f64> = (0..l).map(|_| rng.gen_range(-4.0..4.0)).collect();
            let xi_v = gerstewitz(&v, &params).map_err(|e| e.to_string())?;
            let xi_w = gerstewitz(&w, &params).map_err(|e| e.to_string())?;
            let alpha: f64 = rng.gen_range(0.0..1.0);
            let mix: Vec<f64> =
                v.iter().zip(&w).map(|(a, b)| (1.0 - alpha) * a + alpha * b).collect();
            if gerstewitz(&mix, &params).map_err(|e| e.to_string())?
                > (1.0 - alpha) * xi_v + alpha * xi_w + 1e-12
            {
                return Err(format!("convexity: v={v:?} w={w:?} alpha={alpha}"));
            }
            let sum: Vec<f64> = v.iter().zip(&w).map(|(a, b)| a + b).collect();
            if gerstewitz(&sum, &params).map_err(|e| e.to_string())? > xi_v + xi_w + 1e-12 {
                return Err(format!("subadditivity: v={v:?} w={w:?}"));
            }
            let lip: f64 = q.iter().map(|qi| 1.0 / qi.abs()).fold(0.0, f64::max);
            let sup: f64 = v.iter().zip(&w).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            if (xi_v - xi_w).abs() > lip * sup + 1e-12 {
                return Err(format!("lipschitz: v={v:?} w={w:?}"));
            }
            Ok(())
        }
    }));

    out.push(property("gerstewitz/bisection oracle agreement", 1000, {
        let mut rng = rng_for(seed, 23);
        move |_| {
            let l = rng.gen_range(1..=4);
            let q: Vec<f64> = (0..l).map(|_| -rng.gen_range(0.1..3.0)).collect();
            let params = OrthantParams::new(q.clone()).map_err(|e| e.to_string())?;
            let v: Vec<f64> = (0..l).map(|_| rng.gen_range(-50.0..50.0)).collect();
            let closed = gerstewitz(&v, &params).map_err(|e| e.to_string())?;
            let feasible = |t: f64| v.iter().zip(&q).all(|(vi, qi)| vi - t * qi >= 0.0);
            let (mut lo, mut hi) = (-1e6, 1e6);
            while hi - lo > 1e-10 {
                let mid = 0.5 * (lo + hi);
                if feasible(mid) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            if (closed - hi).abs() > 1e-9 {
                return Err(format!("v={v:?} q={q:?} closed={closed} oracle={hi}"));
            }
            Ok(())
        }
    }));

    out
}

fn isa_suite(seed: u64) -> Vec<PropertyOutcome> {
    let mut out = Vec::new();
    let res = Resolution::new(10, 18);

    out.push(property("isa/efficiency decisions agree", 10, {
        let mut rng = rng_for(seed, 31);
        move |i| {
            let suite = random_instance(&mut rng, res);
            for y in &suite.candidates {
                let a = brute_force_efficient(&suite.instance, y, res)
                    .map_err(|e| e.to_string())?
                    .efficient;
                let b = check_disjoint_h_k(&suite.instance, y, res)
                    .map_err(|e| e.to_string())?
                    .disjoint;
                let cloud =
                    image_cloud(&suite.instance, y, res).map_err(|e| e.to_string())?;
                let mut c = true;
                for sample in &cloud {
                    if in_h(&suite.instance, y, &sample.image).map_err(|e| e.to_string())?
                        && in_extended_image(&suite.instance, y, &sample.image, &cloud)
                            .map_err(|e| e.to_string())?
                    {
                        c = false;
                        break;
                    }
                }
                if a != b || a != c {
                    return Err(format!(
                        "instance {i}: decisions disagree at y={:?}: {a}/{b}/{c}",
                        y.coords()
                    ));
                }
            }
            Ok(())
        }
    }));

    out.push(property("isa/separator construction", 200, {
        let mut rng = rng_for(seed, 32);
        move |_| {
            let base = random_point(&mut rng);
            let tilt: f64 = rng.gen_range(0.0..2.0 * PI);
            let half: f64 = rng.gen_range(0.2..1.4);
            let cone = cone_span(base, tilt - half, tilt + half);
            let l = 2;
            // Outside H on the u side or the v side.
            let pt = if rng.gen_bool(0.5) {
                let gap: f64 = rng.gen_range(0.05..(PI - half - 0.05));
                let side = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                let u = TangentVector::projected(
                    base,
                    frame_dir(&base, tilt + side * (half + gap)) * rng.gen_range(0.1..2.0),
                );
                ImagePoint { u, v: (0..l).map(|_| rng.gen_range(0.0..2.0)).collect() }
            } else {
                let u = TangentVector::projected(
                    base,
                    frame_dir(&base, tilt) * rng.gen_range(0.1..2.0),
                );
                let mut v: Vec<f64> = (0..l).map(|_| rng.gen_range(0.0..2.0)).collect();
                v[rng.gen_range(0..l)] = -rng.gen_range(0.05..2.0);
                ImagePoint { u, v }
            };
            let lin = find_separator_omega1(&pt, &cone, 1e-9).map_err(|e| e.to_string())?;
            let w1 = omega1(&pt, &lin).map_err(|e| e.to_string())?;
            let nl = find_separator_omega2(&pt, &cone, 1e-9).map_err(|e| e.to_string())?;
            let w2 = omega2(&pt, &nl).map_err(|e| e.to_string())?;
            if w1 > 1e-12 || w2 > 1e-12 {
                return Err(format!("omega1={w1} omega2={w2} u={:?} v={:?}", pt.u.vec(), pt.v));
            }
            // Points of H stay nonnegative under sampled parameters.
            let a: f64 = rng.gen_range(0.05..1.5);
            let b: f64 = rng.gen_range(0.05..1.5);
            let h_pt = ImagePoint {
                u: TangentVector::projected(
                    base,
                    cone.gen_a().vec() * a + cone.gen_b().vec() * b,
                ),
                v: (0..l).map(|_| rng.gen_range(0.0..2.0)).collect(),
            };
            for theta in polar_directions(&cone, 5).map_err(|e| e.to_string())? {
                let lin = LinearSepParams {
                    theta,
                    lambda: (0..l).map(|_| rng.gen_range(0.0..2.0)).collect(),
                };
                if omega1(&h_pt, &lin).map_err(|e| e.to_string())? < -1e-12 {
                    return Err(format!("H point separated: u={:?}", h_pt.u.vec()));
                }
                let nl = NonlinearSepParams {
                    phi: theta,
                    gamma: GammaParam::Interior(vec![-1.0; l]),
                };
                if omega2(&h_pt, &nl).map_err(|e| e.to_string())? < -1e-12 {
                    return Err(format!("H point separated by omega2: u={:?}", h_pt.u.vec()));
                }
            }
            Ok(())
        }
    }));

    out.push(property("isa/certificate soundness and zero gap", 10, {
        let mut rng = rng_for(seed, 33);
        let grid = SearchGrid { n_angle: 16, ..SearchGrid::default() };
        move |i| {
            let suite = random_instance(&mut rng, res);
            let inst = &suite.instance;
            for y in suite.candidates.iter().take(2) {
                let cloud = image_cloud(inst, y, res).map_err(|e| e.to_string())?;
                let cert = certificate_search(inst, y, CertificateKind::Linear, &cloud, &grid, res)
                    .map_err(|e| e.to_string())?;
                let efficient =
                    brute_force_efficient(inst, y, res).map_err(|e| e.to_string())?.efficient;
                if cert.is_some() && !efficient {
                    return Err(format!("instance {i}: false linear certificate"));
                }
                let nl_cert =
                    certificate_search(inst, y, CertificateKind::Nonlinear, &cloud, &grid, res)
                        .map_err(|e| e.to_string())?;
                if nl_cert.is_some() && !efficient {
                    return Err(format!("instance {i}: false nonlinear certificate"));
                }
                // Zero gap exactly when a linear certificate exists.
                let fy = evaluate_objective(inst, y).map_err(|e| e.to_string())?;
                let cone = transported_cone(inst, &fy).map_err(|e| e.to_string())?;
                let thetas = grid.polar_directions(&cone).map_err(|e| e.to_string())?;
                let lambdas = grid.lambda_points(inst.constraint_len());
                let gap = duality_gap(inst, y, &thetas, &lambdas, &cloud)
                    .map_err(|e| e.to_string())?;
                if (gap.omega <= inst.tolerances().certificate) != cert.is_some() {
                    return Err(format!("instance {i}: gap/certificate mismatch"));
                }
                // A found certificate's parameters form a saddle point.
                if let Some(c) = &cert {
                    let CertificateParams::Linear(p) = &c.params else { unreachable!() };
                    let lambda_grid = grid.lambda_points(inst.constraint_len());
                    if !is_saddle_point1(inst, y, &p.theta, &p.lambda, &cloud, &lambda_grid, 1e-9)
                        .map_err(|e| e.to_string())?
                    {
                        return Err(format!("instance {i}: certificate is not a saddle point"));
                    }
                }
            }
            Ok(())
        }
    }));

    out
}

fn scalarization_suite(seed: u64) -> Vec<PropertyOutcome> {
    let mut out = Vec::new();
    let res = Resolution::new(10, 18);

    out.push(property("scalarization/G and G_p containments", 10, {
        let mut rng = rng_for(seed, 41);
        move |i| {
            let suite = random_instance(&mut rng, res);
            let inst = &suite.instance;
            for y in suite.candidates.iter().take(3) {
                if !in_g(inst, y, y, 1e-9).map_err(|e| e.to_string())?
                    || !in_gp(inst, y, y, None, 1e-9).map_err(|e| e.to_string())?
                {
                    return Err(format!("instance {i}: y not in G(y) ∩ G_p(y)"));
                }
                let samples = feasible_candidates(inst, res, 25);
                for x in &samples {
                    if in_g(inst, y, x, 1e-9).map_err(|e| e.to_string())?
                        && !in_gp(inst, y, x, None, 1e-9).map_err(|e| e.to_string())?
                    {
                        return Err(format!(
                            "instance {i}: G ⊄ G_p at x={:?}",
                            x.coords()
                        ));
                    }
                }
            }
            Ok(())
        }
    }));

    out.push(property("scalarization/minimality matches efficiency", 20, {
        let mut rng = rng_for(seed, 42);
        move |i| {
            let (inst, y, expect) = random_scalarization_instance(&mut rng, res);
            let sol = solve_quasi_min(&inst, &y, None, res, 1e-9).map_err(|e| e.to_string())?;
            let minimal = sol.value >= -1e-9;
            let efficient =
                brute_force_efficient(&inst, &y, res).map_err(|e| e.to_string())?.efficient;
            // The impossibility scan: no feasible sample with a strictly
            // positive pairing inside the cone.
            let fy = evaluate_objective(&inst, &y).map_err(|e| e.to_string())?;
            let p = scalarizing_vector_at(&inst, None, &fy).map_err(|e| e.to_string())?;
            let cone = transported_cone(&inst, &fy).map_err(|e| e.to_string())?;
            let mut impossible = true;
            for x in sgop_core::problem::candidate_samples(&inst, &y, res)
                .map_err(|e| e.to_string())?
            {
                if !is_feasible(&inst, &x).map_err(|e| e.to_string())? {
                    continue;
                }
                let fx = evaluate_objective(&inst, &x).map_err(|e| e.to_string())?;
                let u = log_map(&fy, &fx).map_err(|e| e.to_string())?;
                if cone.contains(&u, inst.tolerances().membership).map_err(|e| e.to_string())?
                    && p.vec().dot(u.vec()) > 1e-9
                {
                    impossible = false;
                    break;
                }
            }
            if minimal != expect || efficient != expect || impossible != expect {
                return Err(format!(
                    "instance {i}: regime={expect} minimal={minimal} efficient={efficient} impossible={impossible}"
                ));
            }
            Ok(())
        }
    }));

    out.push(property("scalarization/solve certifies true-regime instances", 10, {
        let mut rng = rng_for(seed, 43);
        move |i| {
            let (inst, y0, expect) = random_scalarization_instance(&mut rng, res);
            if !expect {
                return Ok(());
            }
            let config = sgop_core::scalarization::ScalarizationConfig {
                p_ref: None,
                y0,
                resolution: res,
                tol: 1e-9,
            };
            let outcome =
                sgop_core::scalarization::solve_gop_via_scalarization(&inst, &y0, &config)
                    .map_err(|e| e.to_string())?;
            if !outcome.certified {
                return Err(format!("instance {i}: expected certification"));
            }
            if outcome.stability_warning.is_some() {
                return Err(format!("instance {i}: unstable re-solve"));
            }
            Ok(())
        }
    }));

    out
}
