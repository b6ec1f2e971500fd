use heisenmod_core::json::{point_to_json, PointJson};
use heisenmod_core::{
    dual_window, figa_check, format_rational, frame_bounds, frame_operator, janssen_frame_operator, module_frame_check,
    spectrum, verify_suite, CMatrix, Complex64, GaborSystem, ModuleContext, VerifyConfig,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::failure::Failure;
use crate::spec::Job;

/// A command result in both output forms, plus the process exit code.
pub struct Output {
    pub json: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub exit: i32,
}

impl Output {
    fn ok(json: Value, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        Self {
            json,
            header,
            rows,
            exit: 0,
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn pair(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}

/// Shortest round-trip form, with an exponent for very small or large values.
fn num(v: f64) -> String {
    format!("{v:?}")
}

fn coords(v: &[i64]) -> String {
    v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

fn matrix_json(m: &CMatrix) -> Value {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.rows()).map(|i| m.row(i).iter().map(|&c| pair(c)).collect()).collect();
    to_value(&rows)
}

fn matrix_rows(m: &CMatrix) -> Vec<Vec<String>> {
    let mut out = Vec::new();
    for i in 0..m.rows() {
        for (j, v) in m.row(i).iter().enumerate() {
            out.push(vec![i.to_string(), j.to_string(), num(v.re), num(v.im)]);
        }
    }
    out
}

fn system(job: &Job) -> Result<GaborSystem, Failure> {
    Ok(GaborSystem::new(job.delta.clone(), job.windows.clone())?)
}

pub fn adjoint(job: &Job) -> Result<Output, Failure> {
    let adj = job.delta.adjoint()?;
    let elements: Vec<PointJson> = adj.elements().iter().map(point_to_json).collect();
    let s = format_rational(&job.delta.size()?);
    let weight = format_rational(&adj.weight());
    let rows = elements.iter().map(|(x, w)| vec![coords(x), coords(w)]).collect();
    let json = json!({
        "group": job.delta.group().orders(),
        "order": adj.len(),
        "elements": elements,
        "weight": weight,
        "s": s,
    });
    Ok(Output::ok(json, vec!["x", "w"], rows))
}

pub fn frame_bounds_cmd(job: &Job) -> Result<Output, Failure> {
    let b = frame_bounds(&system(job)?)?;
    let frame = b.is_frame(job.tol);
    let json = json!({ "A": b.lower, "B": b.upper, "frame": frame });
    let rows = vec![vec![num(b.lower), num(b.upper), frame.to_string()]];
    Ok(Output::ok(json, vec!["A", "B", "frame"], rows))
}

pub fn dual_window_cmd(job: &Job) -> Result<Output, Failure> {
    let sys = system(job)?;
    let duals = dual_window(&sys)?;
    let values: Vec<Vec<[f64; 2]>> = duals.iter().map(|w| w.values().iter().map(|&c| pair(c)).collect()).collect();
    let mut rows = Vec::new();
    for (j, w) in duals.iter().enumerate() {
        for (i, v) in w.values().iter().enumerate() {
            rows.push(vec![j.to_string(), i.to_string(), num(v.re), num(v.im)]);
        }
    }
    Ok(Output::ok(json!({ "windows": values }), vec!["window", "index", "re", "im"], rows))
}

pub fn figa(job: &Job) -> Result<Output, Failure> {
    let [eta, gamma, xi, psi] = job.windows.as_slice() else {
        return Err(Failure::Parse(format!(
            "windows: figa needs exactly 4 windows (eta, gamma, xi, psi), got {}",
            job.windows.len()
        )));
    };
    let ctx = ModuleContext::new(job.delta.clone())?;
    let f = figa_check(eta, gamma, xi, psi, &ctx)?;
    let json = json!({ "lhs": pair(f.lhs), "rhs": pair(f.rhs), "gap": f.abs_gap, "rel_gap": f.rel_gap });
    let rows = vec![[f.lhs.re, f.lhs.im, f.rhs.re, f.rhs.im, f.abs_gap, f.rel_gap]
        .iter()
        .map(|&v| num(v))
        .collect()];
    Ok(Output::ok(json, vec!["lhs_re", "lhs_im", "rhs_re", "rhs_im", "gap", "rel_gap"], rows))
}

pub fn gen_check(job: &Job) -> Result<Output, Failure> {
    let ctx = ModuleContext::new(job.delta.clone())?;
    let chk = module_frame_check(&job.windows, &ctx, job.tol)?;
    let frame = frame_bounds(&system(job)?)?.is_frame(job.tol);
    let json = json!({
        "windows": job.windows.len(),
        "generating": chk.generating,
        "frame": frame,
        "agree": chk.generating == frame,
        "bounds": chk.bounds,
    });
    let rows = vec![vec![
        job.windows.len().to_string(),
        chk.generating.to_string(),
        frame.to_string(),
        num(chk.bounds.lower),
        num(chk.bounds.upper),
    ]];
    Ok(Output::ok(json, vec!["windows", "generating", "frame", "A", "B"], rows))
}

pub fn janssen(job: &Job) -> Result<Output, Failure> {
    let eta = &job.windows[0];
    let j = janssen_frame_operator(eta, &job.delta)?;
    let s = frame_operator(&GaborSystem::single(eta.clone(), job.delta.clone())?)?;
    let json = json!({
        "adjoint_order": job.delta.adjoint()?.len(),
        "max_abs_gap": j.max_abs_diff(&s),
        "operator": matrix_json(&j),
    });
    Ok(Output::ok(json, vec!["row", "col", "re", "im"], matrix_rows(&j)))
}

pub fn spectrum_cmd(job: &Job) -> Result<Output, Failure> {
    let ev = spectrum(&system(job)?)?;
    let rows = ev.iter().map(|&v| vec![num(v)]).collect();
    Ok(Output::ok(json!({ "spectrum": ev }), vec!["eigenvalue"], rows))
}

pub fn verify(job: &Job) -> Result<Output, Failure> {
    let cfg = VerifyConfig {
        seed: job.seed,
        cases: job.cases,
        frame_tol: job.tol,
    };
    let report = verify_suite(&job.delta, &cfg)?;
    let rows = report
        .identities
        .iter()
        .map(|r| {
            vec![
                r.name.clone(),
                r.cases.to_string(),
                num(r.max_abs_gap),
                num(r.max_rel_gap),
                r.pass.to_string(),
            ]
        })
        .collect();
    let exit = if report.pass { 0 } else { 1 };
    Ok(Output {
        json: to_value(&report),
        header: vec!["name", "cases", "max_abs_gap", "max_rel_gap", "pass"],
        rows,
        exit,
    })
}
