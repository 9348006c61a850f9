//! Dispatch from a configuration to library calls and report rows.

use std::f64::consts::PI;

use affsurf::asa::{
    affine_image_asa, affine_surface_area, bpn_asa_closed_form, isoperimetric_bound, lutwak_functional,
    petty_ratio, psd_det_root_gap, valuation_defect, AsaMethod,
};
use affsurf::curvature::{curvature_graph_reparam, curvature_implicit, dupin_curvature, implicit_bordered};
use affsurf::floating::{asa_via_floating, cap_height, cap_volume, curvature_rolling_gap, sw1_profile};
use affsurf::functionals::steiner_asa_pair;
use affsurf::random::{
    asa_density, disk_best_approx, ranpol1_estimate, ranpol2_estimate, BoundaryDensity, RanPolEstimate,
};
use affsurf::{AffineMap, ClippedBody, ConvexBody, Halfspace, SmoothBody, SphereGrid};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::body_spec::BodySpec;
use crate::config::{Command, Density, ExperimentConfig, Mode, Suite};
use crate::error::CliError;
use crate::report::{Cell, Compare, Criterion, Provenance, Report, Table};

/// Slope and limit tolerances for random polytope fits. The limit also
/// allows 2% for the bias left after extrapolation.
const SLOPE_TOL: f64 = 0.05;
const LIMIT_BIAS: f64 = 0.02;
const DUPIN_DELTAS: [f64; 4] = [1e-4, 1e-5, 1e-6, 1e-7];

pub struct Outcome {
    pub report: Report,
    pub exit_code: u8,
}

/// Grid family used by the CLI: angles in the plane, a Gauss product rule
/// with about `m` nodes in space, random symmetric directions above.
pub fn grid_for(n: usize, m: usize) -> SphereGrid {
    match n {
        2 => SphereGrid::circle(m),
        3 => {
            let k = ((m as f64 / 2.0).sqrt().round() as usize).max(4);
            SphereGrid::gauss_product(k, 2 * k)
        }
        _ => SphereGrid::with_size(n, m),
    }
}

fn default_grid(n: usize) -> usize {
    if n == 2 {
        4096
    } else {
        9216
    }
}

fn f(v: f64) -> Cell {
    Cell::Float(v)
}

fn lead_columns(cmd: &Command) -> (&'static [&'static str], &'static str) {
    match cmd {
        Command::Asa { .. } => (&["experiment", "body", "dim", "method", "resolution", "estimate", "error"], "estimate"),
        Command::Curvature { .. } => (&["experiment", "body", "point", "method", "estimate"], "estimate"),
        Command::Floating { .. } => (&["experiment", "t", "deficit", "normalized", "asa_estimate"], "asa_estimate"),
        Command::Rolling { .. } => (&["experiment", "t", "m", "stderr"], "m"),
        Command::Randpoly { .. } => {
            (&["experiment", "N", "mean_deficit", "stderr", "normalized", "normalized_stderr", "estimate"], "estimate")
        }
        Command::Bestapprox { .. } => (&["experiment", "N", "deficit", "del1_estimate"], "del1_estimate"),
        Command::Check { .. } => (&["experiment", "inputs", "estimate"], "estimate"),
    }
}

/// Runs one experiment. Errors become error rows; the exit code is 0 iff
/// every pass-flagged row passed, 2 for usage errors (bad body spec) and 1
/// for everything else.
pub fn run(cfg: &ExperimentConfig, timestamp: u64) -> Outcome {
    let (lead, est) = lead_columns(&cfg.command);
    let mut table = Table::new(lead, est);
    let name = cfg.command.name();
    let mut exit_code = 0;
    if let Err(e) = dispatch(cfg, &mut table) {
        table.push_error(name, &e.code(), &e.to_string());
        exit_code = e.exit_code();
    }
    if exit_code == 0 && !table.passed() {
        exit_code = 1;
    }
    Outcome { report: Report { command: name.into(), seed: cfg.seed, timestamp, table }, exit_code }
}

fn body(cfg: &ExperimentConfig) -> Result<(BodySpec, ConvexBody, usize), CliError> {
    let s = cfg.body.as_deref().ok_or_else(|| CliError::Usage(format!("{} needs --body", cfg.command.name())))?;
    let spec = BodySpec::parse(s)?;
    let k = spec.build(cfg.dim)?;
    let n = k.dim();
    Ok((spec, k, n))
}

fn dispatch(cfg: &ExperimentConfig, t: &mut Table) -> Result<(), CliError> {
    match &cfg.command {
        Command::Asa { closed_form } => asa(cfg, *closed_form, t),
        Command::Curvature { point } => curvature(cfg, point, t),
        Command::Floating { t: ts } => floating(cfg, ts, t),
        Command::Rolling { tgrid, samples } => rolling(cfg, *tgrid, *samples, t),
        Command::Randpoly { mode, n, reps } => randpoly(cfg, *mode, n, *reps, t),
        Command::Bestapprox { n } => bestapprox(n, t),
        Command::Check { suite } => check(cfg, *suite, t),
    }
}

fn method_name(m: AsaMethod) -> &'static str {
    match m {
        AsaMethod::Quadrature => "quadrature",
        AsaMethod::ClosedForm => "closed_form",
        AsaMethod::DefinitionalZero => "definitional_zero",
    }
}

fn asa(cfg: &ExperimentConfig, closed_form: bool, t: &mut Table) -> Result<(), CliError> {
    let (spec, k, n) = body(cfg)?;
    let name: Cell = spec.to_string().into();
    let cf = spec.asa_closed_form(n);
    if closed_form {
        let v = cf.ok_or_else(|| CliError::Usage(format!("no closed form for {spec}")))?;
        t.push(vec!["asa".into(), name, n.into(), "closed_form".into(), Cell::Empty, f(v), f(0.0)], Compare::none());
        return Ok(());
    }
    let grid = grid_for(n, cfg.grid.unwrap_or(default_grid(n)));
    let r = affine_surface_area(&k, &grid)?;
    let cmp = match cf {
        Some(0.0) => Compare::test(0.0, Provenance::ClosedForm, 0.0, Criterion::Abs),
        Some(v) => Compare::test(v, Provenance::ClosedForm, 1e-4, Criterion::Rel),
        None => Compare::none(),
    };
    t.push(
        vec![
            "asa".into(),
            name.clone(),
            n.into(),
            method_name(r.method).into(),
            r.resolution.into(),
            f(r.value),
            f(r.error_estimate),
        ],
        cmp,
    );
    let iso = isoperimetric_bound(&k, &grid)?;
    t.push(
        vec!["isoperimetric".into(), name, n.into(), "ratio".into(), r.resolution.into(), f(iso.ratio), Cell::Empty],
        Compare::test(1.0, Provenance::ClosedForm, 1e-9, Criterion::Le).note("equality for ellipsoids"),
    );
    Ok(())
}

fn curvature(cfg: &ExperimentConfig, point: &[f64], t: &mut Table) -> Result<(), CliError> {
    let (spec, k, n) = body(cfg)?;
    if point.len() != n {
        return Err(CliError::Usage(format!("--point has {} coordinates, body dimension is {n}", point.len())));
    }
    let p0 = k.interior_point();
    let d: Vec<f64> = point.iter().zip(&p0).map(|(a, b)| a - b).collect();
    let len = d.iter().map(|v| v * v).sum::<f64>().sqrt();
    if len == 0.0 || !len.is_finite() {
        return Err(CliError::Usage("--point coincides with the body's center".into()));
    }
    let u: Vec<f64> = d.iter().map(|v| v / len).collect();
    let s = k.ray_exit(&p0, &u)?;
    let x: Vec<f64> = p0.iter().zip(&u).map(|(a, b)| a + s * b).collect();
    let bp = k.boundary_point(&x)?;
    let pt: Cell = x.iter().map(|v| format!("{v:e}")).collect::<Vec<_>>().join(";").into();
    let name: Cell = spec.to_string().into();
    let row = |m: &str, v: f64| vec!["curvature".into(), name.clone(), pt.clone(), m.into(), f(v)];

    let smooth = match &k {
        ConvexBody::Smooth(b) => Some(b),
        _ => None,
    };
    let (reference, prov) = match (spec.curvature_closed_form(&x), smooth) {
        (Some(v), _) => (v, Provenance::ClosedForm),
        (None, Some(b)) => (curvature_implicit(b, &x)?, Provenance::Oracle),
        (None, None) if k.is_polytope() => (0.0, Provenance::ClosedForm),
        (None, None) => return Err(CliError::Usage(format!("curvature is not available for {spec}"))),
    };
    let cmp = |tol: f64| {
        if reference == 0.0 {
            Compare::test(0.0, prov, tol, Criterion::Abs)
        } else {
            Compare::test(reference, prov, tol, Criterion::Rel)
        }
    };
    if let Some(b) = smooth {
        let e = b.eval(&x);
        t.push(row("implicit", curvature_implicit(b, &x)?), cmp(1e-8));
        t.push(row("bordered", implicit_bordered(&e.gradient, &e.hessian)?), cmp(1e-8));
        t.push(row("graph", curvature_graph_reparam(b, &x, 1e-4)?), cmp(1e-5));
    }
    let dupin = dupin_curvature(&k, &bp, &DUPIN_DELTAS)?;
    t.push(row("dupin", dupin.estimate()), cmp(1e-3).note(format!("depth {:e}", DUPIN_DELTAS[3])));
    Ok(())
}

fn asa_reference(spec: &BodySpec, k: &ConvexBody, n: usize) -> Result<(f64, Provenance), CliError> {
    match spec.asa_closed_form(n) {
        Some(v) => Ok((v, Provenance::ClosedForm)),
        None => Ok((affine_surface_area(k, &grid_for(n, default_grid(n)))?.value, Provenance::Oracle)),
    }
}

fn floating(cfg: &ExperimentConfig, ts: &[f64], t: &mut Table) -> Result<(), CliError> {
    let (spec, k, n) = body(cfg)?;
    let grid = grid_for(n, cfg.grid.unwrap_or(if n == 2 { 4096 } else { 288 }));
    let (reference, prov) = asa_reference(&spec, &k, n)?;
    let series = asa_via_floating(&k, ts, &grid)?;
    for r in &series.rows {
        t.push(
            vec!["floating".into(), f(r.t), f(r.deficit), f(r.normalized), f(r.asa_estimate)],
            Compare::reference(reference, prov),
        );
    }
    t.push(
        vec!["floating_trend".into(), Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty],
        Compare::flag(series.monotone, Provenance::Trend).note("estimates change monotonically in t"),
    );
    Ok(())
}

fn rolling(cfg: &ExperimentConfig, tgrid: usize, samples: usize, t: &mut Table) -> Result<(), CliError> {
    let (_, k, _) = body(cfg)?;
    if tgrid == 0 {
        return Err(CliError::Usage("--tgrid must be positive".into()));
    }
    let ts: Vec<f64> = (0..tgrid).map(|i| i as f64 / tgrid as f64).collect();
    let p = sw1_profile(&k, &ts, samples, cfg.seed)?;
    for i in 0..p.t.len() {
        let tol = 3.0 * p.stderr[i] + 1e-12 * p.boundary_area;
        t.push(
            vec!["rolling".into(), f(p.t[i]), f(p.m[i]), f(p.stderr[i])],
            Compare::test(p.reference[i], Provenance::ClosedForm, tol, Criterion::Ge).note("lower bound"),
        );
    }
    Ok(())
}

fn ranpol_rows(est: &RanPolEstimate, slope_ref: Option<f64>, t: &mut Table) {
    let c = &est.curve;
    let limit_ref = (est.reference > 0.0).then_some(est.reference);
    for i in 0..c.n_values.len() {
        let cmp = limit_ref.map_or(Compare::none(), |r| Compare::reference(r, Provenance::Oracle));
        t.push(
            vec![
                "deficit".into(),
                c.n_values[i].into(),
                f(c.mean_deficit[i]),
                f(c.stderr[i]),
                f(c.normalized[i]),
                f(c.normalized_stderr[i]),
                f(c.normalized[i]),
            ],
            cmp,
        );
    }
    let empty = || vec![Cell::Empty; 5];
    let mut slope = vec!["slope".into()];
    slope.extend(empty());
    slope.push(f(est.slope));
    t.push(
        slope,
        match slope_ref {
            Some(r) => Compare::test(r, Provenance::ClosedForm, SLOPE_TOL, Criterion::Abs),
            None => Compare::none(),
        },
    );
    let mut limit = vec!["limit".into(), Cell::Empty, Cell::Empty, Cell::Empty, f(est.limit), f(est.limit_stderr)];
    limit.push(f(est.limit));
    t.push(
        limit,
        match limit_ref {
            Some(r) => {
                Compare::test(r, Provenance::Trend, 4.0 * est.limit_stderr + LIMIT_BIAS * r, Criterion::Abs)
                    .note("extrapolated from the two largest N")
            }
            None => Compare::none(),
        },
    );
}

fn randpoly(cfg: &ExperimentConfig, mode: Mode, ns: &[usize], reps: usize, t: &mut Table) -> Result<(), CliError> {
    let (_, k, n) = body(cfg)?;
    let nf = n as f64;
    let smooth = !k.is_polytope();
    match mode {
        Mode::Interior => {
            let est = ranpol1_estimate(&k, ns, reps, cfg.seed)?;
            ranpol_rows(&est, smooth.then_some(-2.0 / (nf + 1.0)), t);
        }
        Mode::Boundary(d) => {
            let dens = match d {
                Density::Uniform => BoundaryDensity::uniform(&k)?,
                Density::Asa => asa_density(&k)?,
            };
            let est = ranpol2_estimate(&k, &dens, ns, reps, cfg.seed)?;
            ranpol_rows(&est, smooth.then_some(-2.0 / (nf - 1.0)), t);
        }
    }
    Ok(())
}

fn bestapprox(ns: &[usize], t: &mut Table) -> Result<(), CliError> {
    for r in disk_best_approx(ns)? {
        t.push(
            vec!["bestapprox".into(), r.n.into(), f(r.deficit), f(r.del1_estimate)],
            Compare::test(1.0 / 6.0, Provenance::ClosedForm, 0.0, Criterion::Le).note("increases to 1/6"),
        );
    }
    Ok(())
}

/// One suite item: rows of (inputs, estimate, comparison).
type Rows = Vec<(String, f64, Compare)>;

fn item(t: &mut Table, name: &str, rows: impl FnOnce() -> Result<Rows, CliError>) {
    match rows() {
        Ok(rows) => {
            for (inputs, est, cmp) in rows {
                t.push(vec![name.into(), inputs.into(), f(est)], cmp);
            }
        }
        Err(e) => t.push_error(name, &e.code(), &e.to_string()),
    }
}

fn unit(th: f64) -> Vec<f64> {
    vec![th.cos(), th.sin()]
}

fn check(cfg: &ExperimentConfig, suite: Suite, t: &mut Table) -> Result<(), CliError> {
    let g2 = SphereGrid::circle(4096);
    let seed = cfg.seed;

    item(t, "isoperimetric", || {
        let mut rows = Rows::new();
        for s in ["ball", "ellipsoid:2,0.5", "bpn:1.5", "bpn:3", "bpn:4", "cube"] {
            let k = BodySpec::parse(s)?.build(Some(2))?;
            let r = isoperimetric_bound(&k, &g2)?;
            rows.push((s.into(), r.ratio, Compare::test(1.0, Provenance::ClosedForm, 1e-9, Criterion::Le)));
            if s.starts_with("ball") || s.starts_with("ellipsoid") {
                rows.push((s.into(), r.ratio, Compare::test(1.0, Provenance::ClosedForm, 1e-8, Criterion::Rel).note("equality")));
            }
        }
        Ok(rows)
    });

    item(t, "petty", || {
        let mut rows = Rows::new();
        for s in ["ellipsoid:2,1", "bpn:1.5", "bpn:4", "cube"] {
            let k = BodySpec::parse(s)?.build(Some(2))?;
            let r = petty_ratio(&k, &g2, 0)?;
            let cmp = if s.starts_with("ellipsoid") {
                Compare::test(1.0, Provenance::ClosedForm, 1e-4, Criterion::Rel).note("equality")
            } else {
                Compare::test(1.0, Provenance::ClosedForm, 0.0, Criterion::Le)
            };
            rows.push((s.into(), r, cmp));
        }
        Ok(rows)
    });

    item(t, "lutwak", || {
        let mut rows = Rows::new();
        for ks in ["bpn:3", "ellipsoid:1.5,0.8"] {
            let k = BodySpec::parse(ks)?.build(Some(2))?;
            let a = affine_surface_area(&k, &g2)?.value;
            for ls in ["ball", "cube"] {
                let l = BodySpec::parse(ls)?.build(Some(2))?;
                let v = lutwak_functional(&k, &l, &g2)?;
                rows.push((format!("K={ks} L={ls}"), v, Compare::test(a, Provenance::Oracle, 1e-3, Criterion::Ge)));
            }
        }
        Ok(rows)
    });

    item(t, "psd_concavity", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = f64::INFINITY;
        for i in 0..1000 {
            let m = 1 + i % 3;
            let mut psd = || {
                let b = DMatrix::from_fn(m, m, |_, _| rng.random_range(-1.0..1.0));
                &b * b.transpose()
            };
            let (a, b) = (psd(), psd());
            worst = worst.min(psd_det_root_gap(&a, &b));
        }
        Ok(vec![("1000 pairs".into(), worst, Compare::test(0.0, Provenance::ClosedForm, 1e-12, Criterion::Ge))])
    });

    item(t, "steiner", || {
        let mut rows = Rows::new();
        for (s, b) in [("ellipsoid:2,1", SmoothBody::ellipsoid(&[2.0, 1.0])?), ("bpn:3", SmoothBody::lp_ball(3.0, 2)?)] {
            for th in [0.0, 0.5, 1.2] {
                let (a, st) = steiner_asa_pair(&b, &unit(th))?;
                rows.push((format!("{s} angle={th}"), st, Compare::test(a, Provenance::Oracle, 1e-2 * a, Criterion::Ge)));
            }
        }
        Ok(rows)
    });

    item(t, "rolling", || {
        let ts: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).collect();
        let mut rows = Rows::new();
        for s in ["ball", "cube", "bpn:4"] {
            let k = BodySpec::parse(s)?.build(Some(2))?;
            let p = sw1_profile(&k, &ts, 20000, seed)?;
            rows.push((s.into(), p.worst_margin(), Compare::test(0.0, Provenance::ClosedForm, 0.0, Criterion::Ge)));
        }
        Ok(rows)
    });

    item(t, "curvature_rolling", || {
        let mut rows = Rows::new();
        for s in ["ellipsoid:2,1", "bpn:4"] {
            let k = BodySpec::parse(s)?.build(Some(2))?;
            let gap = curvature_rolling_gap(&k, &SphereGrid::circle(256))?;
            rows.push((s.into(), gap, Compare::test(0.0, Provenance::ClosedForm, 1e-6, Criterion::Le)));
        }
        Ok(rows)
    });

    if suite == Suite::Inequalities {
        return Ok(());
    }

    item(t, "closed_form", || {
        let mut rows = Rows::new();
        for p in [1.5, 2.0, 3.0, 4.0] {
            let q = affine_surface_area(&ConvexBody::bpn(p, 2)?, &g2)?.value;
            let c = bpn_asa_closed_form(p, 2)?;
            rows.push((format!("bpn:{p}"), q, Compare::test(c, Provenance::ClosedForm, 1e-4, Criterion::Rel)));
        }
        Ok(rows)
    });

    item(t, "affine_covariance", || {
        let m = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.0, 0.7]);
        let map = AffineMap::new(m, vec![0.3, -0.2])?;
        let base = ConvexBody::bpn(3.0, 2)?;
        let direct = affine_surface_area(&base.affine_image(&map)?, &g2)?.value;
        let via = affine_image_asa(affine_surface_area(&base, &g2)?.value, &map)?;
        Ok(vec![("bpn:3 sheared".into(), direct, Compare::test(via, Provenance::Oracle, 1e-6, Criterion::Rel))])
    });

    item(t, "valuation", || {
        let mut rows = Rows::new();
        for (a, b, th) in [(0.3, -0.2, 0.0), (0.5, 0.0, 0.7)] {
            let u = unit(th);
            let neg: Vec<f64> = u.iter().map(|v| -v).collect();
            let base = SmoothBody::ball(2, 1.0)?;
            let k: ConvexBody = ClippedBody::new(base.clone(), vec![Halfspace::new(u, a)?])?.into();
            let c: ConvexBody = ClippedBody::new(base, vec![Halfspace::new(neg, -b)?])?.into();
            let d = valuation_defect(&k, &c, &g2)?;
            rows.push((format!("disk slabs {a},{b} angle={th}"), d, Compare::test(0.0, Provenance::ClosedForm, 1e-8, Criterion::Abs)));
        }
        Ok(rows)
    });

    item(t, "cap_inversion", || {
        let k = ConvexBody::ellipsoid(&[2.0, 0.7])?;
        let mut rows = Rows::new();
        for (th, tv) in [(0.0, 1e-6), (1.0, 1e-3), (2.5, 0.5)] {
            let c = cap_height(&k, &unit(th), tv)?;
            let v = cap_volume(&k, &unit(th), c)?;
            rows.push((format!("ellipsoid:2,0.7 angle={th} t={tv:e}"), v, Compare::test(tv, Provenance::ClosedForm, 1e-8, Criterion::Rel)));
        }
        Ok(rows)
    });

    item(t, "floating", || {
        let s = asa_via_floating(&ConvexBody::ball(2)?, &[1e-4, 1e-6], &g2)?;
        let last = s.rows.last().expect("two rows");
        Ok(vec![(format!("ball t={:e}", last.t), last.asa_estimate, Compare::test(2.0 * PI, Provenance::ClosedForm, 1e-2, Criterion::Rel))])
    });

    item(t, "bestapprox", || {
        let r = disk_best_approx(&[10_000])?;
        Ok(vec![("N=10000".into(), r[0].del1_estimate, Compare::test(1.0 / 6.0, Provenance::ClosedForm, 1e-6, Criterion::Rel))])
    });

    item(t, "ranpol_interior", || {
        let est = ranpol1_estimate(&ConvexBody::ball(2)?, &[250, 500, 1000], 400, seed)?;
        Ok(vec![
            ("ball slope".into(), est.slope, Compare::test(-2.0 / 3.0, Provenance::ClosedForm, SLOPE_TOL, Criterion::Abs)),
            (
                "ball limit".into(),
                est.limit,
                Compare::test(est.reference, Provenance::Trend, 4.0 * est.limit_stderr + LIMIT_BIAS * est.reference, Criterion::Abs),
            ),
        ])
    });

    Ok(())
}
