//! One handler per subcommand; each fills a [`RunReport`] or returns an input error.

use quadsum_core::backend::{Backend, Exact, Float};
use quadsum_core::gauss::{gauss_s, reciprocity_sides, u_value, u_reciprocity_residual, GaussSumSpec, UMode};
use quadsum_core::lattice::{int_matrix_to_json, reduced_form, signature, RatSymMatrix};
use quadsum_core::multidim::{
    cor_gr_residual, cor_gr_sides, landsberg_schaar_nd_residual, reciprocity_nd_sides, QuadSumProblem,
};
use quadsum_core::number::prec::{dist, float_to_decimal};
use quadsum_core::number::{format_rational, parse_rational, PrecComplex};
use quadsum_core::selftest::{run_criterion, Measure, SelftestConfig, CRITERIA};
use quadsum_core::theta::{
    jacobi_transform_sides, riemann_theta, riemann_transform_sides, theta_average_sides, theta_km_sides,
    thmb_finite_tau_sides, thmb_large_tau_limit, SiegelPoint,
};
use quadsum_core::zeta::{euler_product_residual, zeros_in_window, FiniteZeta};
use quadsum_core::Rational;
use serde_json::{json, Value};

use crate::input::{self, complex, complex_matrix, complex_vector, pick, rat_vector, require, sym_matrix, FileInput};
use crate::report::{NamedValue, RunReport};
use crate::{BackendArg, Cli, Command, Identity, NdForm};

type CmdResult<T> = Result<T, String>;

/// Theta series inside `theta-check` are summed to this fraction of `--tol`,
/// leaving room for the prefactors multiplying them.
const THETA_EVAL_FRACTION: f64 = 1e-4;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Exact form of a backend value, when the backend has one.
trait Describe: Backend {
    fn describe(&self, v: &Self::Value) -> Option<String>;

    fn named(&self, name: &str, v: &Self::Value) -> NamedValue {
        NamedValue::new(name, &self.embed(v)).with_exact(self.describe(v))
    }
}

impl Describe for Float {
    fn describe(&self, _: &PrecComplex) -> Option<String> {
        None
    }
}

impl Describe for Exact {
    fn describe(&self, v: &Self::Value) -> Option<String> {
        Some(v.to_string())
    }
}

pub fn run(cli: &Cli) -> CmdResult<RunReport> {
    let g = &cli.global;
    if !(g.tol > 0.0) {
        return Err("--tol must be positive".into());
    }
    if g.threads == 0 {
        return Err("--threads must be at least 1".into());
    }
    let backend = match g.backend {
        BackendArg::Exact => "exact",
        BackendArg::Float => "float",
    };
    let prec = quadsum_core::number::prec::clamp_prec(g.prec_bits);
    let file = FileInput::load(g.file.as_deref())?;
    let name = command_name(&cli.command);
    let mut rep = RunReport::new(name, backend, prec, g.tol);

    macro_rules! with_backend {
        ($f:ident ( $($arg:expr),* )) => {
            match g.backend {
                BackendArg::Float => $f(&Float::new(prec), $($arg),*),
                BackendArg::Exact => $f(&Exact::new(prec), $($arg),*),
            }
        };
    }
    let float_only = |what: &str| -> CmdResult<()> {
        if g.backend == BackendArg::Exact {
            return Err(format!("{what} is only available with --backend float"));
        }
        Ok(())
    };

    match &cli.command {
        Command::GaussSum { a, b, c } => {
            rep.input("a", a.to_string()).input("b", b.to_string()).input("c", c.to_string());
            with_backend!(gauss_sum(*a, *b, *c, g.tol, &mut rep))?;
        }
        Command::UValue { r } => {
            let r = parse_rational(r).map_err(err)?;
            rep.input("r", format_rational(&r));
            with_backend!(u_value_cmd(&r, g.tol, &mut rep))?;
        }
        Command::RecipCheck { a, b, c } => {
            rep.input("a", a.to_string()).input("b", b.to_string()).input("c", c.to_string());
            with_backend!(recip_check(*a, *b, *c, g.tol, &mut rep))?;
        }
        Command::Zeta { n, s, zeros } => {
            float_only("zeta")?;
            rep.input("n", n.to_string());
            zeta(*n, s, zeros.as_deref(), prec, g.tol, &mut rep)?;
        }
        Command::ReducedForm { matrix } => {
            let m = require(pick(matrix.as_deref(), &file, "matrix", true)?, "matrix")?;
            rep.input("matrix", m.clone());
            reduced(&input::rat_matrix(&m)?, &mut rep)?;
        }
        Command::NdRecip { t, s, c, form } => {
            let t_json = require(pick(t.as_deref(), &file, "t", true)?, "t")?;
            rep.input("t", t_json.clone());
            let t = sym_matrix(&t_json)?;
            let s = pick(s.as_deref(), &file, "s", false)?;
            let c = pick(c.as_deref(), &file, "c", false)?;
            with_backend!(nd_recip(&t, s, c, *form, g.tol, &mut rep))?;
        }
        Command::Theta { z, tau } => {
            float_only("theta")?;
            let z = require(pick(z.as_deref(), &file, "z", false)?, "z")?;
            let tau = require(pick(tau.as_deref(), &file, "tau", true)?, "tau")?;
            rep.input("z", z.clone()).input("tau", tau.clone());
            let point = SiegelPoint::new(complex_vector(&z, prec)?, complex_matrix(&tau, prec)?).map_err(err)?;
            let v = riemann_theta(&point, g.tol).map_err(err)?;
            rep.value(NamedValue::new("theta", &v.value));
            rep.details = json!({
                "truncation_radius": v.truncation_radius.to_string(),
                "tail_bound": format!("{:e}", v.tail_bound),
            });
        }
        Command::ThetaCheck { identity, z, tau, k, m, a, b, c, t, height } => {
            float_only("theta-check")?;
            let args = ThetaArgs { z, tau, k: *k, m: *m, a: *a, b: *b, c, t, height: *height };
            theta_check(*identity, &args, &file, prec, g.tol, &mut rep)?;
        }
        Command::Selftest { criterion, seed } => {
            float_only("selftest")?;
            selftest(criterion, *seed, prec, g.threads, &mut rep)?;
        }
    }
    Ok(rep)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::GaussSum { .. } => "gauss-sum",
        Command::UValue { .. } => "u-value",
        Command::RecipCheck { .. } => "recip-check",
        Command::Zeta { .. } => "zeta",
        Command::ReducedForm { .. } => "reduced-form",
        Command::NdRecip { .. } => "nd-recip",
        Command::Theta { .. } => "theta",
        Command::ThetaCheck { .. } => "theta-check",
        Command::Selftest { .. } => "selftest",
    }
}

fn gauss_sum<B: Describe>(be: &B, a: i64, b: i64, c: i64, tol: f64, rep: &mut RunReport) -> CmdResult<()> {
    let spec = GaussSumSpec::new(a, b, c).map_err(err)?;
    let s = gauss_s(be, &spec);
    rep.value(be.named("S", &s));
    // the reciprocity check needs a != 0; without it the sum is reported alone
    if a != 0 {
        let (lhs, rhs) = reciprocity_sides(be, a, b, c).map_err(err)?;
        rep.value(be.named("reciprocity_rhs", &rhs));
        let r = be.compare(&lhs, &rhs);
        rep.set_residual(r.value, r.exact, tol);
    }
    Ok(())
}

fn u_value_cmd<B: Describe>(be: &B, r: &Rational, tol: f64, rep: &mut RunReport) -> CmdResult<()> {
    let brute = u_value(be, r, UMode::Brute).map_err(err)?;
    rep.value(be.named("u", &brute));
    if *r != 0 {
        let closed = u_value(be, r, UMode::Closed).map_err(err)?;
        rep.value(be.named("u_closed", &closed));
        let res = be.compare(&brute, &closed).max(u_reciprocity_residual(be, r).map_err(err)?);
        rep.set_residual(res.value, res.exact, tol);
    }
    Ok(())
}

fn recip_check<B: Describe>(be: &B, a: i64, b: i64, c: i64, tol: f64, rep: &mut RunReport) -> CmdResult<()> {
    let (lhs, rhs) = reciprocity_sides(be, a, b, c).map_err(err)?;
    rep.value(be.named("lhs", &lhs)).value(be.named("rhs", &rhs));
    let r = be.compare(&lhs, &rhs);
    rep.set_residual(r.value, r.exact, tol);
    Ok(())
}

fn zeta(n: u64, points: &[String], zeros: Option<&[f64]>, prec: u32, tol: f64, rep: &mut RunReport) -> CmdResult<()> {
    let z = FiniteZeta::new(n, prec).map_err(err)?;
    if let Some(window) = zeros {
        let (t0, t1) = (window[0], window[1]);
        rep.input("zeros", json!([t0.to_string(), t1.to_string()]));
        let list = zeros_in_window(n, t0, t1, prec).map_err(err)?;
        let mut worst = 0.0f64;
        let mut details = Vec::new();
        for zero in &list {
            let size = z.eval(&zero.s).abs_f64();
            worst = worst.max(size);
            let t = float_to_decimal(zero.s.im());
            rep.csv_rows.push(vec![t.clone()]);
            details.push(json!({
                "t": t,
                "turns": format_rational(&zero.turns),
                "p": zero.p.to_string(),
                "multiplicity": zero.multiplicity.to_string(),
                "abs_z": format!("{size:e}"),
            }));
            rep.value(NamedValue::new("zero", &zero.s));
        }
        rep.details = json!({ "zeros": details });
        rep.set_residual(worst, None, tol);
        return Ok(());
    }
    let mut worst = 0.0f64;
    for (k, text) in points.iter().enumerate() {
        let s = complex(&Value::String(text.clone()), prec)?;
        rep.input(&format!("s{k}"), text.clone());
        rep.value(NamedValue::new("Z_n(s)", &z.eval(&s)));
        rep.value(NamedValue::new("L_n(s)", &z.completed(&s)));
        worst = worst.max(z.functional_equation_residual(&s)).max(euler_product_residual(n, &s).map_err(err)?);
    }
    rep.set_residual(worst, None, tol);
    Ok(())
}

fn reduced(m: &quadsum_core::lattice::RatMatrix, rep: &mut RunReport) -> CmdResult<()> {
    let rf = reduced_form(m).map_err(err)?;
    rf.validate(m).map_err(err)?;
    let mut details = json!({
        "U": int_matrix_to_json(&rf.u),
        "V": int_matrix_to_json(&rf.v),
        "P": int_matrix_to_json(&rf.p),
        "Q": int_matrix_to_json(&rf.q),
        "A": int_matrix_to_json(&rf.a),
        "B": int_matrix_to_json(&rf.b),
        "det_A": rf.a.det().to_string(),
        "det_B": rf.b.det().to_string(),
    });
    if let Ok(sym) = RatSymMatrix::new(m.clone()) {
        details["N"] = int_matrix_to_json(&rf.n_matrix());
        details["signature"] = Value::String(signature(&sym).map_err(err)?.to_string());
    }
    for key in ["U", "V", "P", "Q", "A", "B", "N", "det_A", "det_B", "signature"] {
        match details.get(key) {
            Some(Value::String(text)) => rep.csv_rows.push(vec![key.to_string(), text.clone()]),
            Some(v) => rep.csv_rows.push(vec![key.to_string(), v.to_string()]),
            None => {}
        }
    }
    rep.details = details;
    rep.passed = Some(true);
    Ok(())
}

fn rationals_json(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(format_rational(x))).collect())
}

fn problem_details(p: &QuadSumProblem) -> CmdResult<Value> {
    let rf = p.reduced_form();
    Ok(json!({
        "A": int_matrix_to_json(&rf.a),
        "B": int_matrix_to_json(&rf.b),
        "N": int_matrix_to_json(p.n_mat()),
        "s": rationals_json(p.s()),
        "c": rationals_json(p.c()),
        "signature": p.sigma().to_string(),
        "det_A": p.det_a().map_err(err)?.to_string(),
        "det_B": p.det_b().map_err(err)?.to_string(),
    }))
}

fn nd_recip<B: Describe>(
    be: &B,
    t: &RatSymMatrix,
    s: Option<Value>,
    c: Option<Value>,
    form: NdForm,
    tol: f64,
    rep: &mut RunReport,
) -> CmdResult<()> {
    let n = t.n();
    let (p, res, (lhs, rhs)) = match form {
        NdForm::S => {
            let s = rat_vector(&require(s, "s")?)?;
            rep.input("s", rationals_json(&s));
            let p = QuadSumProblem::new(t.clone(), s).map_err(err)?;
            let sides = reciprocity_nd_sides(be, &p).map_err(err)?;
            let r = be.compare(&sides.0, &sides.1);
            (p, r, sides)
        }
        NdForm::Dual => {
            let c = rat_vector(&require(c, "c")?)?;
            rep.input("c", rationals_json(&c));
            let p = QuadSumProblem::from_dual(t.clone(), c.clone()).map_err(err)?;
            let sides = cor_gr_sides(be, &p).map_err(err)?;
            (p, cor_gr_residual(be, t, &c).map_err(err)?, sides)
        }
        NdForm::Zero => {
            let p = QuadSumProblem::new(t.clone(), vec![Rational::new(); n]).map_err(err)?;
            let sides = reciprocity_nd_sides(be, &p).map_err(err)?;
            (p, landsberg_schaar_nd_residual(be, t).map_err(err)?, sides)
        }
    };
    rep.value(be.named("lhs", &lhs)).value(be.named("rhs", &rhs));
    rep.set_residual(res.value, res.exact, tol);
    rep.details = problem_details(&p)?;
    Ok(())
}

struct ThetaArgs<'a> {
    z: &'a Option<String>,
    tau: &'a Option<String>,
    k: Option<i64>,
    m: Option<i64>,
    a: Option<i64>,
    b: Option<i64>,
    c: &'a Option<String>,
    t: &'a Option<String>,
    height: Option<f64>,
}

fn need<T: Copy>(v: Option<T>, key: &str) -> CmdResult<T> {
    v.ok_or_else(|| format!("missing --{key}"))
}

fn theta_check(id: Identity, args: &ThetaArgs, file: &FileInput, prec: u32, tol: f64, rep: &mut RunReport) -> CmdResult<()> {
    let eval_tol = tol * THETA_EVAL_FRACTION;
    let name = match id {
        Identity::Jfe => "jfe",
        Identity::Tkm => "tkm",
        Identity::Average => "average",
        Identity::Rfe => "rfe",
        Identity::Thmb => "thmb",
    };
    rep.input("identity", name);
    let z_json = || -> CmdResult<Value> {
        let z = require(pick(args.z.as_deref(), file, "z", false)?, "z")?;
        Ok(z)
    };
    let tau_json = || -> CmdResult<Value> { require(pick(args.tau.as_deref(), file, "tau", false)?, "tau") };

    if id == Identity::Thmb {
        let t_json = require(pick(args.t.as_deref(), file, "t", false)?, "t")?;
        let c_json = require(pick(args.c.as_deref(), file, "c", false)?, "c")?;
        rep.input("t", t_json.clone()).input("c", c_json.clone());
        let t = sym_matrix(&t_json)?;
        let c = rat_vector(&c_json)?;
        if let Some(h) = args.height {
            rep.input("height", h.to_string());
            let lim = thmb_large_tau_limit(&t, &c, h, prec, eval_tol).map_err(err)?;
            rep.set_residual(lim.gap, None, tol);
            rep.passed = Some(lim.gap <= lim.bound);
            rep.csv_rows = vec![
                vec!["gap".into(), format!("{:e}", lim.gap)],
                vec!["bound".into(), format!("{:e}", lim.bound)],
                vec!["passed".into(), (lim.gap <= lim.bound).to_string()],
            ];
            rep.details = json!({
                "gap": format!("{:e}", lim.gap),
                "bound": format!("{:e}", lim.bound),
                "finite_tau_residual": format!("{:e}", lim.residual),
            });
            return Ok(());
        }
        let (z, tau) = (z_json()?, tau_json()?);
        rep.input("z", z.clone()).input("tau", tau.clone());
        let (l, r) = thmb_finite_tau_sides(&t, &c, &complex_vector(&z, prec)?, &complex_matrix(&tau, prec)?, eval_tol)
            .map_err(err)?;
        return finish_sides(rep, &l, &r, tol);
    }

    let (z, tau) = (z_json()?, tau_json()?);
    rep.input("z", z.clone()).input("tau", tau.clone());
    let (l, r) = match id {
        Identity::Jfe => jacobi_transform_sides(&complex(&z, prec)?, &complex(&tau, prec)?, eval_tol),
        Identity::Tkm => {
            let (k, m) = (need(args.k, "k")?, need(args.m, "m")?);
            rep.input("k", k.to_string()).input("m", m.to_string());
            theta_km_sides(k, m, &complex(&z, prec)?, &complex(&tau, prec)?, eval_tol)
        }
        Identity::Average => {
            let (a, b) = (need(args.a, "a")?, need(args.b, "b")?);
            let c_text = args.c.as_deref().ok_or("missing --c")?;
            let c: i64 = c_text.trim().parse().map_err(|_| format!("--c must be an integer for average, got {c_text:?}"))?;
            rep.input("a", a.to_string()).input("b", b.to_string()).input("c", c.to_string());
            theta_average_sides(a, b, c, &complex(&z, prec)?, &complex(&tau, prec)?, eval_tol)
        }
        Identity::Rfe => {
            let point = SiegelPoint::new(complex_vector(&z, prec)?, complex_matrix(&tau, prec)?).map_err(err)?;
            riemann_transform_sides(&point, eval_tol)
        }
        Identity::Thmb => unreachable!("handled above"),
    }
    .map_err(err)?;
    finish_sides(rep, &l, &r, tol)
}

fn finish_sides(rep: &mut RunReport, l: &PrecComplex, r: &PrecComplex, tol: f64) -> CmdResult<()> {
    rep.value(NamedValue::new("lhs", l)).value(NamedValue::new("rhs", r));
    rep.set_residual(dist(l, r), None, tol);
    Ok(())
}

fn selftest(ids: &[u32], seed: u64, prec: u32, threads: usize, rep: &mut RunReport) -> CmdResult<()> {
    let ids: Vec<u32> = if ids.is_empty() { CRITERIA.iter().map(|c| c.id).collect() } else { ids.to_vec() };
    let cfg = SelftestConfig { prec, threads, seed };
    rep.input("criteria", ids.iter().map(|i| i.to_string()).collect::<Vec<_>>());
    rep.input("seed", seed.to_string());
    let mut table = Vec::new();
    let mut all = true;
    for id in ids {
        let report = run_criterion(id, &cfg).map_err(err)?;
        eprintln!("{report}");
        for check in &report.checks {
            eprintln!("    {check}");
        }
        all &= report.passed();
        let checks: Vec<Value> = report
            .checks
            .iter()
            .map(|c| {
                let (kind, bound, worst) = match c.measure {
                    Measure::Below { bound, worst } => ("max", Some(bound), Some(worst)),
                    Measure::Above { bound, worst } => ("min", Some(bound), Some(worst)),
                    Measure::Exact => ("exact", None, None),
                };
                json!({
                    "label": c.label,
                    "passed": c.passed(),
                    "cases": c.cases.to_string(),
                    "failures": c.failures.to_string(),
                    "kind": kind,
                    "bound": bound.map(|b| format!("{b:e}")),
                    "worst": worst.map(|w| format!("{w:e}")),
                    "first_failure": c.first_failure,
                })
            })
            .collect();
        rep.csv_rows.push(vec![
            report.info.id.to_string(),
            report.info.key.to_string(),
            if report.passed() { "PASS" } else { "FAIL" }.to_string(),
            report.cases().to_string(),
            report.elapsed_ms.to_string(),
        ]);
        table.push(json!({
            "id": report.info.id.to_string(),
            "key": report.info.key,
            "title": report.info.title,
            "passed": report.passed(),
            "cases": report.cases().to_string(),
            "elapsed_ms": report.elapsed_ms.to_string(),
            "checks": checks,
        }));
    }
    rep.details = json!({ "criteria": table });
    rep.passed = Some(all);
    Ok(())
}
