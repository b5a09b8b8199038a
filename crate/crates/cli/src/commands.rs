use crate::output::{check_at_least, check_at_most, CliResult, Failure, Record, Table};
use crate::{Field, Fields, Squeeze, Superposition};
use num_complex::Complex64;
use serde_json::{json, Value};
use squeezing::figures::{figure_data, hermite_sup_distance, interior_maxima, Figure};
use squeezing::oracle::element_oracle;
use squeezing::squeeze::{distribution_with, mean_energy, ElementResult, FockPair, SqueezeParam};
use squeezing::superpose::{
    coherent_closed_rhs, coherent_sum_lhs, gaussian_average, gaussian_average_quadrature, semiclassical_comparison,
    thermal_absorption, thermal_absorption_sum, thermal_emission, thermal_emission_sum, CoherentPair, ThermalField,
};
use squeezing::validate::{Tier, CLOSED_ROUTES, ORACLE_TOL, ROUTE_FLOOR};

fn tolerance(tol: f64) -> CliResult<f64> {
    if tol > 0.0 && tol < 1.0 {
        Ok(tol)
    } else {
        Err(Failure::Usage(format!("--tol {tol} must lie in (0, 1)")))
    }
}

fn param(sq: Squeeze) -> CliResult<SqueezeParam> {
    Ok(SqueezeParam::new(sq.r, sq.phi)?)
}

fn complex(z: Complex64) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn element_json(e: &ElementResult) -> Value {
    let mut v = json!({
        "re": e.value.re,
        "im": e.value.im,
        "probability": e.probability(),
        "log_abs": e.log_form.log_abs,
        "phase": e.log_form.phase,
    });
    if let Some(note) = &e.condition_note {
        v["condition_note"] = Value::from(note.as_str());
    }
    v
}

pub fn element(m: u64, n: u64, sq: Squeeze, tol: f64, with_oracle: bool) -> CliResult<Record> {
    let tol = tolerance(tol)?;
    let p = param(sq)?;
    let pair = FockPair::new(m, n);
    let values: Vec<(&str, ElementResult)> = CLOSED_ROUTES.iter().map(|&(name, f)| (name, f(pair, p))).collect();

    let mut table = Table::new(&["route", "re", "im", "probability"]);
    let mut routes = serde_json::Map::new();
    for (name, e) in &values {
        table.push(vec![(*name).into(), e.value.re.into(), e.value.im.into(), e.probability().into()]);
        routes.insert(name.to_string(), element_json(e));
    }

    let scale = values.iter().map(|v| v.1.value.norm()).fold(0.0, f64::max).max(ROUTE_FLOOR);
    let mut spread = 0.0f64;
    let mut worst = None;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            let d = (a.1.value - b.1.value).norm() / scale;
            if d > spread {
                spread = d;
                worst = Some(format!("{} vs {}", a.0, b.0));
            }
        }
    }
    let mut checks = vec![check_at_most("route_agreement", spread, tol, worst)];

    let mut outputs = json!({ "routes": Value::Object(routes) });
    if !pair.same_parity() {
        outputs["note"] = Value::from("m + n is odd: the element vanishes by parity");
    }
    if with_oracle {
        let o = element_oracle(pair, p, None)?;
        let dev = values.iter().map(|v| (v.1.value - o.result.value).norm()).fold(0.0, f64::max);
        table.push(vec![
            "oracle".into(),
            o.result.value.re.into(),
            o.result.value.im.into(),
            o.result.probability().into(),
        ]);
        outputs["oracle"] = json!({
            "re": o.result.value.re,
            "im": o.result.value.im,
            "error_estimate": o.error_estimate,
            "dim": o.dim,
        });
        checks.push(check_at_most("oracle_agreement", dev, ORACLE_TOL, Some(format!("dim={}", o.dim))));
    }
    Ok(Record {
        command: "element",
        inputs: json!({"m": m, "n": n, "r": sq.r, "phi": sq.phi, "tol": tol, "with_oracle": with_oracle}),
        outputs,
        checks,
        table,
        summary: None,
    })
}

fn points_table(points: &[(u64, f64)]) -> Table {
    let mut t = Table::new(&["m", "p"]);
    for &(m, p) in points {
        t.push(vec![m.into(), p.into()]);
    }
    t
}

fn points_json(points: &[(u64, f64)]) -> Value {
    Value::Array(points.iter().map(|&(m, p)| json!([m, p])).collect())
}

pub fn distribution(n: u64, sq: Squeeze, tol: f64, cap: u64) -> CliResult<Record> {
    let tol = tolerance(tol)?;
    let p = param(sq)?;
    let d = distribution_with(n, p, 1.0 - tol, cap)?;
    let closed = mean_energy(n, sq.r);
    let checks = vec![
        check_at_least("captured_mass", d.captured_mass, 1.0 - tol),
        check_at_most("mean_energy", (d.mean_energy - closed).abs() / closed, 1e-6, None),
    ];
    Ok(Record {
        command: "distribution",
        inputs: json!({"n": n, "r": sq.r, "phi": sq.phi, "tol": tol, "cap": cap}),
        outputs: json!({
            "cutoff": d.cutoff(),
            "captured_mass": d.captured_mass,
            "mean_energy": d.mean_energy,
            "mean_energy_closed_form": closed,
            "points": points_json(&d.probs),
        }),
        checks,
        table: points_table(&d.probs),
        summary: Some(format!(
            "n={n} r={} mean energy {:.4} captured mass {:.12}",
            sq.r, d.mean_energy, d.captured_mass
        )),
    })
}

pub fn figure(which: Figure, tol: f64) -> CliResult<Record> {
    let tol = tolerance(tol)?;
    let f = figure_data(which)?;
    let mut checks = Vec::new();
    let mut extra = serde_json::Map::new();
    match which {
        Figure::Fig1a | Figure::Fig1b | Figure::Fig2a => {
            let quoted = match which {
                Figure::Fig1a => 5.03,
                Figure::Fig1b => 15.1,
                _ => 55.4,
            };
            checks.push(check_at_most(
                "mean_energy",
                (f.mean_energy - quoted).abs(),
                0.05,
                Some(format!("quoted {quoted}")),
            ));
        }
        Figure::Fig2b => {
            let s = hermite_sup_distance(f.n, SqueezeParam::real(f.r)?)?;
            extra.insert("sup_distance_to_exact".into(), Value::from(s));
            checks.push(check_at_most("hermite_sup_distance", s, tol, None));
        }
        Figure::Fig3 => {
            let maxima = interior_maxima(&f.points, 0, 200);
            extra.insert("interior_maxima".into(), Value::from(maxima));
            checks.push(check_at_least("interior_maxima", maxima as f64, 5.0));
        }
    }
    let mut outputs = json!({
        "figure": which.name(),
        "n": f.n,
        "r": f.r,
        "scale": f.scale,
        "mean_energy": f.mean_energy,
        "captured_mass": f.captured_mass,
    });
    for (k, v) in extra {
        outputs[k] = v;
    }
    outputs["points"] = points_json(&f.points);
    Ok(Record {
        command: "figure",
        inputs: json!({"figure": which.name(), "tol": tol}),
        outputs,
        checks,
        table: points_table(&f.points),
        summary: Some(format!("{}: n={} r={} mean energy {:.4}", which.name(), f.n, f.r, f.mean_energy)),
    })
}

pub fn superpose(kind: Superposition) -> CliResult<Record> {
    match kind {
        Superposition::Coherent { k, alpha, alpha_arg, beta, beta_arg, sq, tol } => {
            let tol = tolerance(tol)?;
            if !(alpha >= 0.0 && beta >= 0.0) {
                return Err(Failure::Usage("--alpha and --beta are moduli and must be non-negative".into()));
            }
            let p = param(sq)?;
            let pair =
                CoherentPair::new(Complex64::from_polar(alpha, alpha_arg), Complex64::from_polar(beta, beta_arg));
            let lhs = coherent_sum_lhs(pair, k, p, tol * 1e-4)?;
            let rhs = coherent_closed_rhs(pair, k, p)?;
            let dev = (lhs - rhs).norm() / lhs.norm().max(1e-30);
            Ok(Record {
                command: "superpose",
                inputs: json!({
                    "kind": "coherent", "k": k, "alpha": alpha, "alpha_arg": alpha_arg,
                    "beta": beta, "beta_arg": beta_arg, "r": sq.r, "phi": sq.phi, "tol": tol,
                }),
                outputs: json!({"sum": complex(lhs), "closed_form": complex(rhs)}),
                checks: vec![check_at_most("coherent_identity", dev, tol, None)],
                table: Table::scalars(&[
                    ("sum_re", lhs.re),
                    ("sum_im", lhs.im),
                    ("closed_form_re", rhs.re),
                    ("closed_form_im", rhs.im),
                ]),
                summary: None,
            })
        }
        Superposition::Gaussian { k, gamma, i0, tol } => {
            let tol = tolerance(tol)?;
            let closed = gaussian_average(k, gamma, i0)?;
            let quad = gaussian_average_quadrature(k, gamma, i0)?;
            let dev = (quad - closed).abs() / closed.abs();
            Ok(Record {
                command: "superpose",
                inputs: json!({"kind": "gaussian", "k": k, "gamma": gamma, "i0": i0, "tol": tol}),
                outputs: json!({"closed_form": closed, "quadrature": quad}),
                checks: vec![check_at_most("gaussian_identity", dev, tol, None)],
                table: Table::scalars(&[("closed_form", closed), ("quadrature", quad)]),
                summary: None,
            })
        }
    }
}

fn thermal_field(f: Field) -> CliResult<ThermalField> {
    Ok(match (f.nbar, f.b, f.hv_over_kt) {
        (Some(x), _, _) => ThermalField::from_nbar(x)?,
        (_, Some(x), _) => ThermalField::from_b(x)?,
        (_, _, Some(x)) => ThermalField::from_hv_over_kt(x)?,
        _ => return Err(Failure::Usage("one of --nbar, --b, --hv-over-kt is required".into())),
    })
}

fn field_json(f: ThermalField) -> Value {
    json!({"nbar": f.nbar, "b": f.b, "hv_over_kt": f.hv_over_kt()})
}

pub fn thermal(k: u64, sq: Squeeze, field: Field, tol: f64) -> CliResult<Record> {
    let tol = tolerance(tol)?;
    let p = param(sq)?;
    let f = thermal_field(field)?;
    let sum_tol = (tol * 1e-4).max(1e-15);
    let emission = thermal_emission(k, f, p)?;
    let absorption = thermal_absorption(k, f, p)?;
    let emission_sum = thermal_emission_sum(k, f, p, sum_tol)?;
    let absorption_sum = thermal_absorption_sum(k, f, p, sum_tol)?;
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
    let mut checks = vec![
        check_at_most("emission_sum", rel(emission_sum, emission), tol, None),
        check_at_most("absorption_sum", rel(absorption_sum, absorption), tol, None),
    ];
    if f.b > 0.0 {
        let balance = emission / absorption * f.b.powi(2 * k as i32);
        checks.push(check_at_most("detailed_balance", (balance - 1.0).abs(), 1e-10, None));
    }
    Ok(Record {
        command: "thermal",
        inputs: json!({"k": k, "r": sq.r, "phi": sq.phi, "field": field_json(f), "tol": tol}),
        outputs: json!({
            "emission": emission,
            "absorption": absorption,
            "emission_sum": emission_sum,
            "absorption_sum": absorption_sum,
        }),
        checks,
        table: Table::scalars(&[
            ("emission", emission),
            ("absorption", absorption),
            ("emission_sum", emission_sum),
            ("absorption_sum", absorption_sum),
        ]),
        summary: None,
    })
}

pub fn compare(ks: &[u64], r: f64, fields: Fields, tol: f64) -> CliResult<Record> {
    let tol = tolerance(tol)?;
    let p = SqueezeParam::real(r)?;
    let list: Vec<ThermalField> = if !fields.nbar.is_empty() {
        fields.nbar.iter().map(|&x| ThermalField::from_nbar(x)).collect::<Result<_, _>>()?
    } else if !fields.b.is_empty() {
        fields.b.iter().map(|&x| ThermalField::from_b(x)).collect::<Result<_, _>>()?
    } else {
        fields.hv_over_kt.iter().map(|&x| ThermalField::from_hv_over_kt(x)).collect::<Result<_, _>>()?
    };
    let mut table = Table::new(&[
        "k",
        "b",
        "nbar",
        "hv_over_kt",
        "regime",
        "quantum_emission",
        "quantum_absorption",
        "semiclassical",
        "ratio",
    ]);
    let mut rows = Vec::new();
    let mut balance = 0.0f64;
    let mut worst = None;
    for &f in &list {
        for &k in ks {
            let c = semiclassical_comparison(k, f, p)?;
            let dev = (c.quantum_emission / c.quantum_absorption * f.b.powi(2 * k as i32) - 1.0).abs();
            if dev > balance {
                balance = dev;
                worst = Some(format!("k={k} b={}", f.b));
            }
            table.push(vec![
                k.into(),
                f.b.into(),
                f.nbar.into(),
                f.hv_over_kt().into(),
                c.regime.name().into(),
                c.quantum_emission.into(),
                c.quantum_absorption.into(),
                c.semiclassical.into(),
                c.ratio.into(),
            ]);
            let mut row = serde_json::to_value(&c).expect("report serializes");
            row["field"] = field_json(f);
            rows.push(row);
        }
    }
    Ok(Record {
        command: "compare",
        inputs: json!({
            "k": ks,
            "r": r,
            "fields": list.iter().map(|&f| field_json(f)).collect::<Vec<_>>(),
            "tol": tol,
        }),
        outputs: json!({ "rows": rows }),
        checks: vec![check_at_most("detailed_balance", balance, tol, worst)],
        table,
        summary: None,
    })
}

pub fn validate(tier: Tier, threads: Option<usize>) -> CliResult<Record> {
    if threads == Some(0) {
        return Err(Failure::Usage("thread count must be positive".into()));
    }
    let report = squeezing::validate::validate(tier, threads)?;
    let mut table = Table::new(&["name", "criterion", "passed", "value", "bound", "kind", "points", "worst_point"]);
    for c in &report.checks {
        table.push(vec![
            c.name.clone().into(),
            c.criterion.map_or(String::new(), |v| v.to_string()).into(),
            c.passed.into(),
            c.value.into(),
            c.bound.into(),
            match c.kind {
                squeezing::validate::Bound::AtMost => "at_most",
                squeezing::validate::Bound::AtLeast => "at_least",
            }
            .into(),
            (c.points as u64).into(),
            c.worst_point.clone().unwrap_or_default().into(),
        ]);
    }
    let failures: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
    Ok(Record {
        command: "validate",
        inputs: json!({"tier": tier, "threads": threads}),
        outputs: json!({"passed": report.passed, "checks_run": report.checks.len(), "failures": failures}),
        checks: report.checks,
        table,
        summary: None,
    })
}
