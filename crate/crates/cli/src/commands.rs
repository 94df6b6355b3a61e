use serde::Serialize;
use serde_json::json;
use siegel_core::density::{interpolate_f, series_f, series_f_at};
use siegel_core::eisenstein::{
    admissible_data, c4, cor52_bounds, cor52_datum, deg_z, thm12_decompose, thm51_value, triple_intersection,
    CoefficientReport, Cor52Report,
};
use siegel_core::exactnum::{fmt_q, prime_divisors, q, ExactScalar};
use siegel_core::gksiegel::{
    egk_odd, gk_bruteforce, gk_odd, quaternary_f_onestep, ternary_f, EgkDatum, SiegelPoly, ThirdSumLimit,
};
use siegel_core::localform::{chi_trivial_global, diff_set, local_invariants, HalfIntMat};
use siegel_core::siegelmass::{
    automorphism_count, build_maximal_order, mass_full, mass_maximal_order, rep_average_ternary, TernaryTarget,
};
use siegel_core::verify::{run_all, run_suite};
use siegel_core::{Error, Result};

use crate::output::{Outcome, Table};
use crate::{Command, Input, Limit, Method, RunConfig};

pub fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<Outcome> {
    match cmd {
        Command::Invariants(i) => invariants(i),
        Command::Gk { input, brute } => gk(input, *brute, cfg),
        Command::Egk(i) => egk(i),
        Command::Fpoly { input, method, k, limit } => fpoly(input, *method, *k, *limit, cfg),
        Command::C4(i) => c4_cmd(i, cfg),
        Command::Thm51(i) => thm51(i, cfg),
        Command::Degz(i) => degz(i, cfg),
        Command::Thm12(i) => thm12(i, cfg),
        Command::Cor52(i) => cor52(i, cfg),
        Command::Triple { m1, m2, m3 } => triple([*m1, *m2, *m3], cfg),
        Command::Mass { p, check } => mass(*p, *check, cfg),
        Command::Verify { suite } => verify(suite.as_deref(), cfg),
    }
}

fn matrix(i: &Input) -> Result<HalfIntMat> {
    let m = i
        .matrix
        .as_deref()
        .ok_or_else(|| Error::InvalidArgument("--matrix is required".into()))?;
    HalfIntMat::parse_json(m)
}

fn datum(i: &Input) -> Result<Option<EgkDatum>> {
    i.egk.as_deref().map(EgkDatum::parse).transpose()
}

/// --p, or the single prime of Diff(T).
fn prime(i: &Input, t: Option<&HalfIntMat>) -> Result<u64> {
    if let Some(p) = i.p {
        return Ok(p);
    }
    if let Some(t) = t {
        let d = diff_set(t)?;
        if d.len() == 1 {
            return Ok(d[0]);
        }
        return Err(Error::InvalidArgument(format!("Diff(T) = {d:?}; pass --p")));
    }
    Err(Error::InvalidArgument("--p is required".into()))
}

fn limit(l: Limit) -> ThirdSumLimit {
    match l {
        Limit::Display => ThirdSumLimit::Display,
        Limit::ClosedForm => ThirdSumLimit::ClosedForm,
    }
}

fn scalar_text(x: &ExactScalar) -> String {
    x.to_string()
}

fn invariants(i: &Input) -> Result<Outcome> {
    let t = matrix(i)?;
    let primes = match i.p {
        Some(p) => vec![p],
        None => {
            let mut ps = prime_divisors(&t.det2());
            if !ps.contains(&2) {
                ps.insert(0, 2);
            }
            ps
        }
    };
    let local = primes.iter().map(|&p| local_invariants(&t, p)).collect::<Result<Vec<_>>>()?;
    let positive = t.is_positive_definite();
    let diff = if positive { Some(diff_set(&t)?) } else { None };
    let mut table = Table::new(&["p", "d_t", "ord_d", "cond_ord", "e", "xi", "eta", "chi_trivial"]);
    for l in &local {
        table.push(vec![
            l.p.to_string(),
            l.d_t.to_string(),
            l.ord_d.to_string(),
            l.cond_ord.to_string(),
            l.e.to_string(),
            l.xi.to_string(),
            l.eta.to_string(),
            l.chi_trivial.to_string(),
        ]);
    }
    let v = json!({
        "matrix": t,
        "det2": t.det2().to_string(),
        "d_t": t.d_t().to_string(),
        "positive_definite": positive,
        "chi_trivial": chi_trivial_global(&t),
        "diff": diff,
        "local": local,
    });
    Ok(Outcome::new(&v).with_table(table))
}

fn gk(i: &Input, brute: bool, cfg: &RunConfig) -> Result<Outcome> {
    let t = matrix(i)?;
    let p = prime(i, None)?;
    let (a, method) = if brute || p == 2 {
        (gk_bruteforce(&t, p, cfg.max_ops)?, "brute_force")
    } else {
        (gk_odd(&t, p)?, "jordan")
    };
    Ok(Outcome::new(&json!({"p": p, "method": method, "gk": a})))
}

fn egk(i: &Input) -> Result<Outcome> {
    let t = matrix(i)?;
    let p = prime(i, None)?;
    if p == 2 {
        return Err(Error::unsupported("extended GK data from Jordan splittings", 2));
    }
    let h = egk_odd(&t, p)?;
    Ok(Outcome::new(&json!({"p": p, "egk": h, "text": h.to_string()})))
}

fn coeff_text(f: &SiegelPoly) -> Vec<String> {
    f.coeffs()
        .iter()
        .map(|c| {
            if c.b == Default::default() {
                fmt_q(&c.a)
            } else {
                format!("{} + {}*sqrt({})", fmt_q(&c.a), fmt_q(&c.b), f.q)
            }
        })
        .collect()
}

fn fpoly(i: &Input, method: Method, k: Option<u32>, lim: Limit, cfg: &RunConfig) -> Result<Outcome> {
    let (p, f) = match method {
        Method::Closed => {
            let h = match datum(i)? {
                Some(h) => h,
                None => {
                    let t = matrix(i)?;
                    egk_odd(&t, prime(i, None)?)?
                }
            };
            let p = prime(i, None)?;
            let f = match h.len() {
                3 => ternary_f(&h, p, limit(lim))?,
                4 => quaternary_f_onestep(&h, p, limit(lim))?,
                n => {
                    return Err(Error::InvalidArgument(format!(
                        "closed formulas cover sizes 3 and 4, got {n}"
                    )))
                }
            };
            (p, f)
        }
        Method::Interp => {
            let t = matrix(i)?;
            let p = prime(i, None)?;
            (p, interpolate_f(&t, p, cfg.max_ops)?)
        }
        Method::Series => {
            let t = matrix(i)?;
            let p = prime(i, None)?;
            let f = match k {
                Some(k) => series_f_at(&t, p, k, cfg.max_ops)?,
                None => series_f(&t, p, cfg.max_ops)?,
            };
            (p, f)
        }
    };
    let coeffs = coeff_text(&f);
    let mut table = Table::new(&["k", "coefficient"]);
    for (k, c) in coeffs.iter().enumerate() {
        table.push(vec![k.to_string(), c.clone()]);
    }
    let v = json!({
        "p": p,
        "method": format!("{method:?}").to_lowercase(),
        "e": f.e,
        "degree": f.degree(),
        "coefficients": coeffs,
        "functional_equation_sign": f.functional_equation_sign(),
        "poly": f,
    });
    Ok(Outcome::new(&v).with_table(table))
}

fn factor_table(r: &CoefficientReport) -> Table {
    let mut t = Table::new(&["factor", "value", "numeric"]);
    for f in &r.factors {
        t.push(vec![f.name.clone(), scalar_text(&f.value), format!("{:.12e}", f.value.to_f64())]);
    }
    t.push(vec!["C_4".into(), scalar_text(&r.c4), format!("{:.12e}", r.c4.to_f64())]);
    t
}

#[derive(Serialize)]
struct Coefficient<'a> {
    #[serde(flatten)]
    report: &'a CoefficientReport,
    c4_text: String,
    c4_numeric: f64,
}

fn coefficient(r: &CoefficientReport) -> Outcome {
    Outcome::new(&Coefficient { report: r, c4_text: scalar_text(&r.c4), c4_numeric: r.c4.to_f64() })
        .with_table(factor_table(r))
}

fn c4_cmd(i: &Input, cfg: &RunConfig) -> Result<Outcome> {
    let t = matrix(i)?;
    Ok(coefficient(&c4(&t, cfg.max_ops)?))
}

fn thm51(i: &Input, cfg: &RunConfig) -> Result<Outcome> {
    let t = matrix(i)?;
    let p = prime(i, Some(&t))?;
    let via_thm = thm51_value(&t, p, cfg.max_ops)?;
    let via_euler = c4(&t, cfg.max_ops)?.c4;
    let agree = via_thm == via_euler;
    let mut o = Outcome::new(&json!({
        "p": p,
        "thm51": via_thm,
        "thm51_text": scalar_text(&via_thm),
        "c4": via_euler,
        "agree": agree,
    }))
    .with_ok(agree);
    if !agree {
        o.diagnostics.push(format!("C_4 mismatch: {via_thm} vs {via_euler}"));
    }
    Ok(o)
}

fn degz(i: &Input, cfg: &RunConfig) -> Result<Outcome> {
    let target = match datum(i)? {
        Some(h) => TernaryTarget::from_datum(&h, prime(i, None)?)?,
        None => {
            let b = matrix(i)?;
            if b.size() != 3 {
                return Err(Error::InvalidArgument(format!("degz needs a ternary form, got size {}", b.size())));
            }
            let p = prime(i, Some(&b))?;
            TernaryTarget::from_matrix(&b, p, cfg.max_ops)?
        }
    };
    let dz = deg_z(&target)?;
    let r = rep_average_ternary(&target)?;
    Ok(Outcome::new(&json!({
        "p": target.p,
        "datum": target.datum,
        "f_p": target.f_p,
        "rep_average": fmt_q(&r),
        "deg_z": dz,
        "deg_z_text": scalar_text(&dz),
        "deg_z_numeric": dz.to_f64(),
    })))
}

fn thm12(i: &Input, cfg: &RunConfig) -> Result<Outcome> {
    let t = matrix(i)?;
    let r = thm12_decompose(&t, cfg.max_ops)?;
    let ok = r.identity == Some(true);
    let mut o = coefficient(&r).with_ok(ok);
    if let Some(t) = o.table.as_mut() {
        for (name, v) in [("deg_z", &r.deg_z), ("correction", &r.correction)] {
            if let Some(v) = v {
                t.push(vec![name.into(), scalar_text(v), format!("{:.12e}", v.to_f64())]);
            }
        }
        t.push(vec!["identity".into(), ok.to_string(), String::new()]);
    }
    if !ok {
        o.diagnostics.push("C_4/(-2^8 3^2) != deg Z + correction".into());
    }
    Ok(o)
}

fn cor52_row(r: &Cor52Report) -> Vec<String> {
    vec![
        r.p.to_string(),
        r.datum.to_string(),
        r.sigma.to_string(),
        fmt_q(&r.lhs),
        format!("{:.6e}", r.fine_rhs.to_f64()),
        format!("{:.6e}", r.crude_rhs.to_f64()),
        r.pass_fine.to_string(),
        r.pass_crude.to_string(),
        r.proof_inequality.to_string(),
        r.pipeline_agrees.map(|b| b.to_string()).unwrap_or_default(),
    ]
}

fn cor52(i: &Input, cfg: &RunConfig) -> Result<Outcome> {
    let reports = if i.matrix.is_some() {
        vec![cor52_bounds(&matrix(i)?, cfg.max_ops)?]
    } else if let Some(h) = datum(i)? {
        vec![cor52_datum(&h, prime(i, None)?)?]
    } else {
        let primes = match i.p {
            Some(p) => vec![p],
            None => cfg.primes.clone(),
        };
        let mut out = Vec::new();
        for p in primes {
            for h in admissible_data(p, cfg.max_a)? {
                out.push(cor52_datum(&h, p)?);
            }
        }
        out
    };
    let mut table = Table::new(&[
        "p", "datum", "sigma", "lhs", "fine_rhs", "crude_rhs", "pass_fine", "pass_crude", "proof_inequality",
        "pipeline_agrees",
    ]);
    let mut diagnostics = Vec::new();
    for r in &reports {
        table.push(cor52_row(r));
        if !(r.pass_fine && r.pass_crude && r.proof_inequality && r.pipeline_agrees != Some(false)) {
            diagnostics.push(format!("bound fails for {} at p={}", r.datum, r.p));
        }
    }
    let ok = diagnostics.is_empty();
    let mut o = Outcome::new(&reports).with_table(table).with_ok(ok);
    o.diagnostics = diagnostics;
    Ok(o)
}

fn triple(m: [i64; 3], cfg: &RunConfig) -> Result<Outcome> {
    let r = triple_intersection(m, cfg.max_ops)?;
    let mut table = Table::new(&["b12x2", "b13x2", "b23x2", "matrix", "p", "deg_z_log_coefficient", "deg_z"]);
    for e in &r.table {
        let b = e.b.twice();
        let p = e.diff.first().copied();
        let c = p.and_then(|p| e.deg_z.log_coefficient(p)).map(|c| fmt_q(&c)).unwrap_or_default();
        table.push(vec![
            b[0][1].to_string(),
            b[0][2].to_string(),
            b[1][2].to_string(),
            e.b.to_string(),
            p.map(|p| p.to_string()).unwrap_or_default(),
            c,
            scalar_text(&e.deg_z),
        ]);
    }
    Ok(Outcome::new(&r).with_table(table))
}

fn mass(p: u64, check: bool, cfg: &RunConfig) -> Result<Outcome> {
    let g = build_maximal_order(p)?;
    let m = mass_maximal_order(p)?;
    let mut v = json!({
        "p": p,
        "gram": g.gram,
        "mass_prime": fmt_q(&m),
        "mass": fmt_q(&mass_full(p)?),
    });
    let mut ok = true;
    if check {
        let aut = automorphism_count(&g.gram, cfg.max_ops)?;
        v["automorphisms"] = json!(aut);
        // with one class in the genus the mass is 1/|O(S_p)|
        if siegel_core::siegelmass::CLASS_NUMBER_ONE.contains(&p) {
            let agree = m * q(aut as i64) == q(1);
            v["matches_automorphisms"] = json!(agree);
            ok = agree;
        }
    }
    Ok(Outcome::new(&v).with_ok(ok))
}

fn verify(suite: Option<&str>, cfg: &RunConfig) -> Result<Outcome> {
    let vc = cfg.verify();
    let reports = match suite {
        Some("all") | None => run_all(&vc),
        Some(s) => vec![run_suite(s, &vc)?],
    };
    let mut table = Table::new(&["criterion", "name", "result", "checks", "failed"]);
    let mut diagnostics = vec![format!("seed {}", vc.seed)];
    for r in &reports {
        let result = if r.pass { "PASS" } else { "FAIL" };
        diagnostics.push(format!(
            "criterion {} [{}]: {result} ({} checks, {} failed, {} ms)",
            r.criterion, r.name, r.checks, r.failed, r.millis
        ));
        table.push(vec![
            r.criterion.to_string(),
            r.name.clone(),
            result.into(),
            r.checks.to_string(),
            r.failed.to_string(),
        ]);
    }
    let ok = reports.iter().all(|r| r.pass);
    let mut o = Outcome::new(&reports).with_table(table).with_ok(ok);
    o.diagnostics = diagnostics;
    Ok(o)
}
