//! Command execution for the `ncu` binary: text and JSON rendering, exit codes.
//!
//! Exit codes: 0 success, 1 parse error, 2 domain error, 3 failed identity check.

pub mod parse;

use serde_json::{json, Value};

use crate::aext::{AElem, ClassElem, SkewExpr};
use crate::error::Error;
use crate::ncmaxwell::{div, monopole_residual, rot, VecField};
use crate::scalars::{CenterFun, GaussRat};
use crate::suites::{self, SuiteReport};
use crate::thetamat::{deriv_skew, theta_invert, theta_skew, SkewMat};
use crate::whcalc::{deriv, Wrt};

pub use parse::{parse, parse_aelem, Ast};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Norm(String),
    Deriv { wrt: Wrt, expr: String },
    Theta(String),
    Inv(String),
    Monopole { profile: String },
    Check { suite: String },
    Limit(String),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Norm(_) => "norm",
            Command::Deriv { .. } => "deriv",
            Command::Theta(_) => "theta",
            Command::Inv(_) => "inv",
            Command::Monopole { .. } => "monopole",
            Command::Check { .. } => "check",
            Command::Limit(_) => "limit",
        }
    }

    pub fn input(&self) -> &str {
        match self {
            Command::Norm(s) | Command::Theta(s) | Command::Inv(s) | Command::Limit(s) => s,
            Command::Deriv { expr, .. } => expr,
            Command::Monopole { profile } => profile,
            Command::Check { suite } => suite,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Options {
    /// Numeric value substituted for `ħ` in results; `None` keeps it formal.
    pub hbar: Option<GaussRat>,
    pub format: Format,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Payload {
    Elem(AElem),
    Skew(SkewExpr),
    Matrix(SkewMat),
    Inverse { matrix: SkewMat, derivs: [SkewExpr; 4] },
    Monopole { residual: CenterFun, div: AElem, rot: VecField },
    Suites(Vec<SuiteReport>),
    Classical(ClassElem),
}

enum Failure {
    Lib(Error),
    Invariant(String, Payload),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Run a command and render its output.
pub fn execute(cmd: &Command, opts: &Options) -> Outcome {
    let (code, payload, errors) = match compute(cmd, opts) {
        Ok(p) => (0, Some(p), Vec::new()),
        Err(Failure::Lib(e)) => (if matches!(e, Error::Parse { .. }) { 1 } else { 2 }, None, vec![e.to_string()]),
        Err(Failure::Invariant(msg, p)) => (3, Some(p), vec![msg]),
    };
    let stderr = if errors.is_empty() || opts.format == Format::Json { String::new() } else { format!("error: {}", errors.join("; ")) };
    let stdout = match opts.format {
        Format::Text => payload.as_ref().map(text).unwrap_or_default(),
        Format::Json => {
            let v = json!({
                "command": cmd.name(),
                "input": cmd.input(),
                "result": payload.as_ref().map(to_json).unwrap_or(Value::Null),
                "errors": errors,
            });
            serde_json::to_string_pretty(&v).expect("serializable")
        }
    };
    Outcome { code, stdout, stderr }
}

fn spec_elem(a: &AElem, hbar: &Option<GaussRat>) -> Result<AElem, Error> {
    match hbar {
        Some(v) => a.specialize_hbar(v),
        None => Ok(a.clone()),
    }
}

fn spec_skew(e: &SkewExpr, hbar: &Option<GaussRat>) -> Result<SkewExpr, Error> {
    Ok(match e {
        SkewExpr::Atom(a) => SkewExpr::atom(spec_elem(a, hbar)?),
        SkewExpr::Sum(v) => SkewExpr::sum(v.iter().map(|p| spec_skew(p, hbar)).collect::<Result<_, _>>()?),
        SkewExpr::Prod(v) => SkewExpr::prod(v.iter().map(|p| spec_skew(p, hbar)).collect::<Result<_, _>>()?),
        SkewExpr::Inv(p) => SkewExpr::Inv(Box::new(spec_skew(p, hbar)?)),
    })
}

fn spec_mat(m: &SkewMat, hbar: &Option<GaussRat>) -> Result<SkewMat, Error> {
    let mut out = m.clone();
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            out.set(i, j, spec_skew(m.get(i, j), hbar)?);
        }
    }
    Ok(out)
}

/// Collapse to an element of `A` when no inverse remains.
fn settle(e: SkewExpr) -> Payload {
    match e.as_aelem() {
        Some(a) => Payload::Elem(a),
        None => Payload::Skew(e),
    }
}

fn derivative(wrt: Wrt, e: &SkewExpr) -> Result<SkewExpr, Error> {
    if let Some(a) = e.as_aelem() {
        return Ok(SkewExpr::atom(deriv(wrt, &a)));
    }
    let d = deriv_skew(e)?;
    Ok(match wrt {
        Wrt::TTilde => d[0].clone(),
        Wrt::T => {
            let shift = SkewExpr::atom(AElem::central(-&CenterFun::two_over_h()));
            SkewExpr::sum(vec![d[0].clone(), SkewExpr::prod(vec![shift, e.clone()])])
        }
        _ => d[wrt.gen().idx()].clone(),
    })
}

fn compute(cmd: &Command, opts: &Options) -> Result<Payload, Failure> {
    let hb = &opts.hbar;
    match cmd {
        Command::Norm(src) => Ok(settle(spec_skew(&parse(src)?.eval()?, hb)?)),
        Command::Deriv { wrt, expr } => {
            let e = parse(expr)?.eval()?;
            Ok(settle(spec_skew(&derivative(*wrt, &e)?, hb)?))
        }
        Command::Theta(src) => {
            let e = parse(src)?.eval()?;
            Ok(Payload::Matrix(spec_mat(&theta_skew(&e)?, hb)?))
        }
        Command::Inv(src) => {
            let a = parse_aelem(src)?;
            let matrix = theta_invert(&a)?.to_skew();
            let inv = SkewExpr::inverse(SkewExpr::atom(a))?;
            let d = deriv_skew(&inv)?;
            let derivs = [spec_skew(&d[0], hb)?, spec_skew(&d[1], hb)?, spec_skew(&d[2], hb)?, spec_skew(&d[3], hb)?];
            Ok(Payload::Inverse { matrix: spec_mat(&matrix, hb)?, derivs })
        }
        Command::Monopole { profile } => {
            let f = parse_aelem(profile)?.as_central().ok_or_else(|| Error::Domain(format!("profile {profile} is not central")))?;
            let field = VecField::radial(&f);
            let residual = monopole_residual(&f)?;
            let d = div(&field);
            let r = rot(&field);
            let residual = match hb {
                Some(v) => residual.specialize_hbar(v)?,
                None => residual,
            };
            let r = VecField([spec_elem(&r.0[0], hb)?, spec_elem(&r.0[1], hb)?, spec_elem(&r.0[2], hb)?]);
            Ok(Payload::Monopole { residual, div: spec_elem(&d, hb)?, rot: r })
        }
        Command::Check { suite } => {
            let reports = suites::run(suite, opts.seed)
                .ok_or_else(|| Error::Domain(format!("unknown suite {suite}; expected one of {} or all", suites::SUITES.join(", "))))?;
            let failed: Vec<&str> = reports.iter().filter(|r| !r.pass).map(|r| r.name).collect();
            if failed.is_empty() {
                Ok(Payload::Suites(reports))
            } else {
                Err(Failure::Invariant(format!("failed suites: {}", failed.join(", ")), Payload::Suites(reports)))
            }
        }
        Command::Limit(src) => {
            let a = spec_elem(&parse_aelem(src)?, hb)?;
            Ok(Payload::Classical(a.classical_limit()?))
        }
    }
}

fn skew_string(e: &SkewExpr) -> String {
    match e.as_aelem() {
        Some(a) => a.to_string(),
        None => e.to_string(),
    }
}

fn matrix_rows(m: &SkewMat) -> Vec<Vec<String>> {
    (0..m.dim()).map(|i| (0..m.dim()).map(|j| skew_string(m.get(i, j))).collect()).collect()
}

fn matrix_text(m: &SkewMat) -> String {
    matrix_rows(m).iter().map(|r| format!("[{}]", r.join(", "))).collect::<Vec<_>>().join("\n")
}

const DERIV_NAMES: [&str; 4] = ["ttilde", "x", "y", "z"];

fn text(p: &Payload) -> String {
    match p {
        Payload::Elem(a) => a.to_string(),
        Payload::Skew(e) => e.to_string(),
        Payload::Matrix(m) => matrix_text(m),
        Payload::Inverse { matrix, derivs } => {
            let mut out = format!("inverse:\n{}\nderivatives of inverse:", matrix_text(matrix));
            for (n, d) in DERIV_NAMES.iter().zip(derivs) {
                out.push_str(&format!("\n{n}: {}", skew_string(d)));
            }
            out
        }
        Payload::Monopole { residual, div, rot } => {
            let r = rot.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
            format!("residual: {residual}  div: {div}  rot: ({r})")
        }
        Payload::Suites(rs) => {
            let passed = rs.iter().filter(|r| r.pass).count();
            let mut lines: Vec<String> = rs.iter().map(|r| r.to_string()).collect();
            lines.push(format!("{passed}/{} suites passed", rs.len()));
            lines.join("\n")
        }
        Payload::Classical(c) => c.to_string(),
    }
}

fn term_json(coeff: String, mono: String) -> Value {
    json!({ "coeff": coeff, "mono": if mono.is_empty() { "1".to_string() } else { mono } })
}

/// `{coeff, mono}` for a single term, otherwise an array of them in display order.
pub fn elem_json(a: &AElem) -> Value {
    let mut terms: Vec<Value> = a.terms().rev().map(|(m, c)| term_json(c.to_string(), m.to_string())).collect();
    match terms.len() {
        0 => term_json("0".into(), String::new()),
        1 => terms.pop().expect("one term"),
        _ => Value::Array(terms),
    }
}

fn to_json(p: &Payload) -> Value {
    match p {
        Payload::Elem(a) => elem_json(a),
        Payload::Skew(e) => json!(e.to_string()),
        Payload::Matrix(m) => json!(matrix_rows(m)),
        Payload::Inverse { matrix, derivs } => {
            let d: serde_json::Map<String, Value> =
                DERIV_NAMES.iter().zip(derivs).map(|(n, e)| (n.to_string(), json!(skew_string(e)))).collect();
            json!({ "matrix": matrix_rows(matrix), "derivatives": d })
        }
        Payload::Monopole { residual, div, rot } => json!({
            "residual": residual.to_string(),
            "div": elem_json(div),
            "rot": rot.0.iter().map(elem_json).collect::<Vec<_>>(),
        }),
        Payload::Suites(rs) => json!(rs
            .iter()
            .map(|r| json!({ "suite": r.name, "pass": r.pass, "checked": r.checked, "detail": r.detail }))
            .collect::<Vec<_>>()),
        Payload::Classical(c) => json!(c.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(cmd: Command) -> Outcome {
        execute(&cmd, &Options::default())
    }

    #[test]
    fn worked_derivative() {
        let out = run(Command::Deriv { wrt: Wrt::X, expr: "y*z".into() });
        assert_eq!(out, Outcome { code: 0, stdout: "h/2".into(), stderr: String::new() });
        let opts = Options { format: Format::Json, ..Options::default() };
        let out = execute(&Command::Deriv { wrt: Wrt::X, expr: "y*z".into() }, &opts);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["result"], json!({"coeff": "h/2", "mono": "1"}));
        assert_eq!(v["command"], "deriv");
        assert_eq!(v["errors"], json!([]));
    }

    #[test]
    fn monopole_line() {
        let out = run(Command::Monopole { profile: "g*inv(rho*(rho^2-hbar^2))".into() });
        assert_eq!(out.stdout, "residual: 0  div: 0  rot: (0,0,0)");
        assert_eq!(out.code, 0);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(Command::Norm("rho^-1".into())).code, 1);
        assert_eq!(run(Command::Inv("rho - x".into())).code, 2);
        assert_eq!(run(Command::Limit("1/hbar".into())).code, 2);
        assert_eq!(run(Command::Check { suite: "braid".into() }).code, 0);
    }

    #[test]
    fn specialization() {
        let opts = Options { hbar: Some(GaussRat::from_frac(1, 2)), ..Options::default() };
        let out = execute(&Command::Deriv { wrt: Wrt::X, expr: "y*z".into() }, &opts);
        assert_eq!(out.stdout, "i/2");
    }
}
