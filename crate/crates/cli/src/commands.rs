use std::collections::BTreeMap;
use std::path::Path;

use qmslab_core::darboux::{self, LadderSpec};
use qmslab_core::exact_algebra::parse_rational;
use qmslab_core::riccati;
use qmslab_core::semiclassical;
use qmslab_core::series::{cubic_p, gamma_poly, parabolic_p};
use qmslab_core::solver::{cubic_spot_checks, default_precision, shoot_cubic, shoot_parabolic, CubicOptions};
use qmslab_core::special::{bessel_ik, parse_real, pi, to_decimal, BesselKind};
use qmslab_core::tau::{self, build_u, Identity};
use qmslab_core::verify::{run_criterion, Depth, CRITERIA};
use rayon::prelude::*;
use rug::Float;
use serde_json::{json, Value};

use crate::args::*;
use crate::context::{parse_grid, parse_list, CliError, CliResult, Context};

pub enum Output {
    Json(Value),
    Text(String),
}

pub fn run(command: Command, ctx: &mut Context) -> CliResult<Output> {
    match command {
        Command::Parabolic { action: SolveAction::Solve(a) } => parabolic_solve(a, ctx),
        Command::Cubic { action: CubicAction::Solve(a) } => cubic_solve(a, ctx),
        Command::Poly { family } => poly(family, ctx),
        Command::Tau { action: TauCommand::Build(a) } => tau_build(a, ctx),
        Command::Bessel(a) => bessel(a, ctx),
        Command::Riccati { action: RiccatiCommand::Check(a) } => riccati_check(a, ctx),
        Command::Schrodinger { action } => match action {
            SchrodingerCommand::Potential(a) => potential(a, ctx),
            SchrodingerCommand::BoundaryTerm(a) => boundary_term(a, ctx),
        },
        Command::Darboux(a) => darboux_grid(a, ctx),
        Command::Semiclassical { action } => semiclassical_cmd(action, ctx),
        Command::VerifyPaper(a) => verify_paper(a, ctx),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serialisable")
}

fn real(raw: &str, prec: u32) -> CliResult<Float> {
    Ok(parse_real(raw, prec)?)
}

fn parabolic_solve(a: SolveArgs, ctx: &mut Context) -> CliResult<Output> {
    let eps_raw: String = ctx.required("eps", a.eps)?;
    let n = ctx.value("n", a.n, 40)?;
    let prec = ctx.precision(default_precision(n))?;
    let eps = real(&eps_raw, prec)?;
    let seq = shoot_parabolic(&eps, n, prec)?;
    Ok(Output::Json(to_json(&seq)))
}

fn cubic_solve(a: CubicSolveArgs, ctx: &mut Context) -> CliResult<Output> {
    let eps_raw: String = ctx.required("eps", a.base.eps)?;
    let n = ctx.value("n", a.base.n, 12)?;
    let defaults = CubicOptions::default();
    let opts = CubicOptions {
        series_order: ctx.value("series-order", a.series_order, defaults.series_order)?,
        max_newton: ctx.value("max-newton", a.max_newton, defaults.max_newton)?,
    };
    let prec = ctx.precision(256)?;
    let eps = real(&eps_raw, prec)?;
    let seq = shoot_cubic(&eps, n, prec, &opts)?;
    let mut out = to_json(&seq);
    let spots: BTreeMap<&str, String> = cubic_spot_checks(&eps, &seq.v)
        .into_iter()
        .map(|(k, v)| (k, to_decimal(&v)))
        .collect();
    out["spot_checks"] = to_json(&spots);
    Ok(Output::Json(out))
}

fn poly(family: PolyCommand, ctx: &mut Context) -> CliResult<Output> {
    let p = match family {
        PolyCommand::Pk { k, flavor } => {
            let k = ctx.required("k", k)?;
            match ctx.value("flavor", flavor, "parabolic".to_owned())?.as_str() {
                "parabolic" => parabolic_p(k),
                "cubic" => cubic_p(k),
                other => return Err(CliError::Usage(format!("unknown flavor {other:?}"))),
            }
        }
        PolyCommand::Gamma { l } => gamma_poly(ctx.required("l", l)?),
        PolyCommand::CubicPk { k } => cubic_p(ctx.required("k", k)?),
    };
    Ok(Output::Json(to_json(&p)))
}

fn selected_identities(raw: &str) -> CliResult<Vec<Identity>> {
    match raw.trim() {
        "all" => Ok(Identity::ALL.to_vec()),
        "none" | "" => Ok(Vec::new()),
        list => parse_list(list, "identity"),
    }
}

fn tau_build(a: TauArgs, ctx: &mut Context) -> CliResult<Output> {
    let n_max = ctx.value("n-max", a.n_max, 20)?;
    let verify = ctx.value("verify", a.verify, "none".to_owned())?;
    let dump = ctx.optional("dump", a.dump)?;
    let ids = selected_identities(&verify)?;
    let tower = build_u(n_max)?;

    let checks: Vec<(Identity, Vec<tau::IdentityCheck>)> = ids
        .par_iter()
        .map(|&id| tau::verify_all(&tower, id, n_max).map(|c| (id, c)))
        .collect::<Result<_, _>>()?;
    let mut identities = Vec::new();
    for (id, list) in &checks {
        let pass = list.iter().all(|c| c.pass);
        ctx.check(format!("identity {id}"), pass);
        identities.push(json!({"identity": id.name(), "pass": pass, "checks": to_json(list)}));
    }

    let mut out = json!({
        "n_max": n_max,
        "built_to": tower.built_to(),
        "certificates": to_json(&tower.certificates()),
        "identities": identities,
    });
    if verify.trim() == "all" {
        let mut transfer = Vec::new();
        for n in 1..=(n_max - 3) {
            let r = tau::transfer_verify(&tower, n)?;
            ctx.check(format!("transfer n={n}"), r.derived.iter().all(|c| c.pass));
            transfer.push(to_json(&r));
        }
        out["transfer"] = Value::Array(transfer);
    }
    if let Some(dump) = dump {
        let mut dumped = serde_json::Map::new();
        for what in dump.split(',').map(str::trim) {
            let mut table = serde_json::Map::new();
            let range = match what {
                "u" => -4..=n_max,
                "q" => -2..=n_max - 2,
                "p" => 0..=n_max - 3,
                "tau" => 1..=n_max + 1,
                other => return Err(CliError::Usage(format!("unknown dump table {other:?}"))),
            };
            for n in range {
                let poly = match what {
                    "u" => tower.u(n)?.clone(),
                    "q" => tower.q(n)?.clone(),
                    "p" => tower.p(n)?.clone(),
                    _ => tau::tau(&tower, n)?,
                };
                table.insert(n.to_string(), to_json(&poly));
            }
            dumped.insert(what.to_owned(), Value::Object(table));
        }
        out["dump"] = Value::Object(dumped);
    }
    Ok(Output::Json(out))
}

fn bessel(a: BesselArgs, ctx: &mut Context) -> CliResult<Output> {
    let kind: BesselKind = ctx.value("kind", a.kind, "K".to_owned())?.parse()?;
    let nu_raw: String = ctx.required("nu", a.nu)?;
    let x_raw: String = ctx.required("x", a.x)?;
    let prec = ctx.precision(256)?;
    let nu = parse_rational(&nu_raw).ok_or_else(|| CliError::Usage(format!("order {nu_raw:?} is not rational")))?;
    let x = real(&x_raw, prec)?;
    Ok(Output::Text(to_decimal(&bessel_ik(kind, &nu, &x, prec)?)))
}

fn riccati_check(a: RiccatiArgs, ctx: &mut Context) -> CliResult<Output> {
    let n = ctx.value("n", a.n, 5)?;
    let s_raw = ctx.value("s", a.s, "10".to_owned())?;
    let tol = ctx.value("tol", a.tol, 1e-20)?;
    let prec = ctx.precision(256)?;
    let s = real(&s_raw, prec)?;
    let prof = riccati::v_profile(n + 1, &s, prec)?;
    let mut rows = Vec::new();
    for k in 0..=n {
        let ric = riccati::riccati_residual(&prof, k)?;
        let rec = riccati::f_recursion_residual(&prof, k)?;
        ctx.check(format!("riccati n={k}"), ric < tol);
        ctx.check(format!("f-recursion n={k}"), rec < tol);
        rows.push(json!({
            "n": k,
            "v": to_decimal(&prof.v[k]),
            "dv": to_decimal(&prof.dv[k]),
            "f": to_decimal(&prof.f(k)),
            "g": to_decimal(&prof.g(k)),
            "riccati_residual": to_decimal(&ric),
            "f_recursion_residual": to_decimal(&rec),
        }));
    }
    let f2 = riccati::f2_log_derivative_residual(&s, prec)?;
    ctx.check("f2 = psi0'/psi0", f2 < tol);
    Ok(Output::Json(json!({
        "s": to_decimal(&s),
        "eps": to_decimal(&prof.eps),
        "rows": rows,
        "f2_log_derivative_residual": to_decimal(&f2),
        "tol": tol,
    })))
}

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    let mut text = header.join(",");
    text.push('\n');
    for r in rows {
        text.push_str(&r.join(","));
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn potential(a: PotentialArgs, ctx: &mut Context) -> CliResult<Output> {
    let n = ctx.value("n", a.n, 0)?;
    let grid_raw = ctx.value("s-grid", a.s_grid, "0.5:20:64".to_owned())?;
    let tol = ctx.value("tol", a.tol, 1e-10)?;
    let csv = ctx.optional("csv", a.csv.map(|p| p.display().to_string()))?;
    let prec = ctx.precision(256)?;
    let grid_f64 = parse_grid(&grid_raw)?;
    let grid: Vec<Float> = grid_f64.iter().map(|&s| Float::with_val(prec, s)).collect();

    let points: Vec<(Float, Option<Float>)> = grid
        .par_iter()
        .map(|s| Ok((riccati::potential_w(n, s, prec)?, riccati::potential_w_closed(n, s, prec)?)))
        .collect::<Result<_, qmslab_core::QmsError>>()?;
    let report = riccati::schrodinger_check(n, &grid, prec)?;
    ctx.check("schroedinger residual", report.max_residual < tol);

    let mut worst_closed: Option<Float> = None;
    let mut rows = Vec::new();
    let mut csv_rows = Vec::new();
    for (s, (w, closed)) in grid_f64.iter().zip(&points) {
        let mut row = json!({"s": format!("{s}"), "value": to_decimal(w)});
        if let Some(c) = closed {
            row["closed_form"] = json!(to_decimal(c));
            let d = Float::with_val(prec, w - c).abs() / Float::with_val(prec, w.abs_ref()).max(&Float::with_val(prec, 1));
            worst_closed = Some(worst_closed.map_or(d.clone(), |m: Float| m.max(&d)));
        }
        csv_rows.push(vec![format!("{s}"), to_decimal(w)]);
        rows.push(row);
    }
    let mut out = json!({"n": n, "grid": rows, "schrodinger": to_json(&report)});
    if let Some(d) = worst_closed {
        let tol_closed = Float::with_val(64, 1) >> (prec - 40);
        ctx.check("closed form", d <= tol_closed);
        out["closed_form_max_relative"] = json!(to_decimal(&d));
    }
    if let Some(path) = csv {
        write_csv(Path::new(&path), &["s", "value"], &csv_rows)?;
    }
    Ok(Output::Json(out))
}

fn boundary_term(a: BoundaryArgs, ctx: &mut Context) -> CliResult<Output> {
    let with_form = ctx.flag("quadratic-form", a.quadratic_form)?;
    let upper = ctx.value("upper", a.upper, 60.0)?;
    let prec = ctx.precision(128)?;
    let b = riccati::boundary_term(prec)?;
    let err = Float::with_val(prec, &b.value + pi(prec)).abs();
    ctx.check("boundary term negative", b.value < 0);
    ctx.check("boundary term = -pi", err < 1e-8);
    let mut out = json!({"boundary_term": to_json(&b), "distance_to_minus_pi": to_decimal(&err)});
    if with_form {
        let q = riccati::quadratic_form_identity(prec, upper)?;
        ctx.check("quadratic form", q.relative_mismatch < 1e-6);
        out["quadratic_form"] = to_json(&q);
    }
    Ok(Output::Json(out))
}

fn darboux_grid(a: DarbouxArgs, ctx: &mut Context) -> CliResult<Output> {
    let kappas_raw = ctx.value("kappas", a.kappas, "1,2,3".to_owned())?;
    let prec = ctx.precision(256)?;
    let kappas: Vec<String> = parse_list(&kappas_raw, "kappa")?;
    let kinds_raw = ctx.value("kinds", a.kinds, vec!["K"; kappas.len()].join(","))?;
    let kinds: Vec<BesselKind> = parse_list(&kinds_raw, "kind")?;
    if kinds.len() != kappas.len() {
        return Err(CliError::Usage("--kinds needs one entry per kappa".into()));
    }
    let checks_raw = ctx.value("check", a.check, "eigen,potential".to_owned())?;
    let checks: Vec<String> = parse_list(&checks_raw, "check")?;
    if let Some(bad) = checks.iter().find(|c| !["eigen", "potential"].contains(&c.as_str())) {
        return Err(CliError::Usage(format!("unknown check {bad:?}")));
    }
    let grid_raw = ctx.value("s-grid", a.s_grid, "0.3:30:64".to_owned())?;
    let tol = ctx.value("tol", a.tol, 1e-18)?;
    let csv = ctx.optional("csv", a.csv.map(|p| p.display().to_string()))?;
    let levels = kappas
        .iter()
        .zip(&kinds)
        .map(|(k, &kind)| Ok((real(k, prec)?, kind)))
        .collect::<CliResult<Vec<_>>>()?;
    let spec = LadderSpec::new(levels)?;
    let level = ctx.value("level", a.level, spec.len())?;
    if level == 0 || level > spec.len() {
        return Err(CliError::Usage(format!("--level must lie in 1..={}", spec.len())));
    }
    let do_eigen = checks.iter().any(|c| c == "eigen");
    let do_potential = checks.iter().any(|c| c == "potential");
    let grid = parse_grid(&grid_raw)?;

    struct Point {
        chi: Float,
        telescoped: Float,
        factorised: Float,
        eigen: Option<Float>,
    }
    let eval = |sv: f64| -> qmslab_core::Result<Point> {
        let s = Float::with_val(prec, sv);
        let chi = darboux::ladder_chi(&spec, level, &s, 0, prec)?.d[0].clone();
        let w = darboux::ladder_w_routes(&spec, level, &s, prec)?;
        let eigen = if do_eigen {
            let mut worst = Float::new(prec);
            for n in 1..=level {
                worst = worst.max(&darboux::eigen_residual(&spec, n, &s, prec)?);
            }
            Some(worst)
        } else {
            None
        };
        Ok(Point {
            chi,
            telescoped: w.telescoped,
            factorised: w.factorised,
            eigen,
        })
    };
    let results: Vec<qmslab_core::Result<Point>> = grid.par_iter().map(|&s| eval(s)).collect();

    let mut worst_eigen = Float::new(prec);
    let mut worst_routes = Float::new(prec);
    let mut failures = Vec::new();
    let mut csv_rows = Vec::new();
    for (&s, r) in grid.iter().zip(results) {
        match r {
            Ok(p) => {
                let routes = Float::with_val(prec, &p.telescoped - &p.factorised).abs();
                worst_routes = worst_routes.max(&routes);
                if let Some(e) = &p.eigen {
                    worst_eigen = worst_eigen.max(e);
                }
                csv_rows.push(vec![
                    format!("{s}"),
                    to_decimal(&p.chi),
                    to_decimal(&p.telescoped),
                    to_decimal(&p.factorised),
                    p.eigen.as_ref().map(to_decimal).unwrap_or_default(),
                ]);
            }
            Err(e) => failures.push(json!({"s": format!("{s}"), "error": e.to_string()})),
        }
    }
    ctx.check("all grid points evaluated", failures.is_empty());
    if do_eigen {
        ctx.check("eigen residual", worst_eigen < tol);
    }
    if do_potential {
        ctx.check("potential routes agree", worst_routes < tol);
    }
    if let Some(path) = csv {
        write_csv(
            Path::new(&path),
            &["s", "chi", "w_telescoped", "w_factorised", "eigen_residual"],
            &csv_rows,
        )?;
    }
    Ok(Output::Json(json!({
        "level": level,
        "points": grid.len(),
        "max_eigen_residual": do_eigen.then(|| to_decimal(&worst_eigen)),
        "max_route_difference": do_potential.then(|| to_decimal(&worst_routes)),
        "failures": failures,
        "tol": tol,
    })))
}

fn semiclassical_cmd(action: SemiCommand, ctx: &mut Context) -> CliResult<Output> {
    match action {
        SemiCommand::Compare { order } => {
            let order = ctx.value("order", order, 9)?;
            if order > 25 {
                return Err(CliError::Usage("--order above 25 is not supported".into()));
            }
            let table = semiclassical::quantum_compare(order);
            let series = semiclassical::semiclassical_series(order);
            Ok(Output::Json(json!({"table": to_json(&table), "series": to_json(&series)})))
        }
        SemiCommand::Invert { x, route } => {
            let x_raw: String = ctx.required("x", x)?;
            let route = ctx.value("route", route, "difference".to_owned())?;
            let prec = ctx.precision(128)?;
            let x = real(&x_raw, prec)?;
            let y = match route.as_str() {
                "difference" => semiclassical::invert_radial(&x)?,
                "cardano" => semiclassical::invert_radial_cardano(&x)?,
                "hyperbolic" => semiclassical::invert_radial_hyperbolic(&x)?,
                other => return Err(CliError::Usage(format!("unknown route {other:?}"))),
            };
            Ok(Output::Text(to_decimal(&y)))
        }
    }
}

fn verify_paper(a: VerifyArgs, ctx: &mut Context) -> CliResult<Output> {
    let quick = ctx.flag("quick", a.quick)?;
    let only = ctx.optional("only", a.only)?;
    let ids: Vec<u32> = match only {
        Some(list) => parse_list(&list, "criterion")?,
        None => CRITERIA.iter().map(|c| c.0).collect(),
    };
    let depth = if quick { Depth::Quick } else { Depth::Full };
    let mut reports = Vec::new();
    for id in ids {
        let r = run_criterion(id, depth).ok_or_else(|| CliError::Usage(format!("no criterion {id}")))?;
        eprintln!("{}", r.summary_line());
        ctx.check(format!("criterion {id}"), r.pass());
        reports.push(r);
    }
    Ok(Output::Json(json!({"depth": depth, "criteria": to_json(&reports)})))
}
