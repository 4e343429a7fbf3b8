//! Task execution. Every task yields a JSON result, a one-line headline for the
//! text report, and a status.

use mfcalc::connection::{psi, Connection};
use mfcalc::invariants::{
    chern_character, ctop_vanishing_suite, dao_check_c1, functoriality_check, hc_and_etac, herbrand, hh0_adhoc,
    hom_lengths, jacobian_complex_check, milnor_algebra, pv_check, residue_functional, theta_with,
    top_classes_across_connections, Engine, HomologyOptions, ModuleData, PairingNormalization,
};
use mfcalc::mf::Validation;
use mfcalc::poly::render_rational;
use mfcalc::strata::{
    certify_point, check_assumptions, dw_regular_section_check, generic_hypersurface_search, PointSampler,
    DEFAULT_SEARCH_BOUND,
};
use mfcalc::{Poly, PolyMatrix, Rational};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::document::{EngineName, Problem, TaskDecl};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_CONNECTIONS: usize = 10;
pub const DEFAULT_PSI_CASES: usize = 10;
pub const DEFAULT_SUITE_TRIALS: usize = 20;
pub const DEFAULT_HC_POINTS: usize = 5;
pub const DEFAULT_SEARCH_TRIALS: usize = 100;

/// Command-line overrides applied to tasks that leave the parameter unset.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub degree_bound: Option<i64>,
    pub trials: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Failed,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Failed => "failed",
            Status::Error => "error",
        }
    }
}

#[derive(Debug, Clone)]
pub struct TaskOutcome {
    pub index: usize,
    pub kind: &'static str,
    pub status: Status,
    pub headline: String,
    pub result: Value,
    pub error: Option<String>,
}

struct Done {
    passed: bool,
    headline: String,
    result: Value,
}

fn done(passed: bool, headline: String, result: Value) -> anyhow::Result<Done> {
    Ok(Done { passed, headline, result })
}

pub fn q(r: &Rational) -> Value {
    Value::String(render_rational(r))
}

fn qs(rs: &[Rational]) -> Value {
    Value::Array(rs.iter().map(q).collect())
}

fn p(poly: &Poly) -> Value {
    Value::String(poly.render())
}

fn point_str(rs: &[Rational]) -> String {
    format!("({})", rs.iter().map(render_rational).collect::<Vec<_>>().join(", "))
}

fn validation_json(v: &Validation) -> Value {
    match &v.violation {
        None => Value::Null,
        Some(x) => json!({"product": x.product, "row": x.row, "col": x.col}),
    }
}

struct Ctx<'a> {
    problem: &'a Problem,
    norm: &'a PairingNormalization,
    over: Overrides,
    at: String,
}

impl Ctx<'_> {
    fn seed(&self, s: Option<u64>) -> u64 {
        s.or(self.over.seed).unwrap_or(DEFAULT_SEED)
    }

    fn trials(&self, t: Option<usize>, default: usize) -> usize {
        t.or(self.over.trials).unwrap_or(default)
    }

    fn homology(&self, engine: Engine) -> HomologyOptions {
        HomologyOptions { engine, degree_bound: self.over.degree_bound }
    }

    fn poly(&self, s: &str) -> anyhow::Result<Poly> {
        Ok(self.problem.base_poly(s, &self.at)?)
    }

    fn polys(&self, fs: &[String]) -> anyhow::Result<Vec<Poly>> {
        fs.iter().map(|f| self.poly(f)).collect()
    }

    fn presentation(&self, name: &str) -> anyhow::Result<&PolyMatrix> {
        match self.problem.module(name, &self.at)? {
            ModuleData::Presentation(m) => Ok(m),
            ModuleData::Twisted(_) => anyhow::bail!("module `{name}` must be given by a presentation matrix"),
        }
    }
}

fn engines(e: Option<EngineName>) -> Vec<(Engine, &'static str)> {
    match e.unwrap_or(EngineName::Auto) {
        EngineName::Auto => vec![(Engine::Auto, "auto")],
        EngineName::Graded => vec![(Engine::Graded, "graded")],
        EngineName::Groebner => vec![(Engine::Groebner, "groebner")],
        EngineName::Both => vec![(Engine::Graded, "graded"), (Engine::Groebner, "groebner")],
    }
}

/// Runs one engine or both; with both, the task fails unless they agree.
fn per_engine(
    ctx: &Ctx,
    which: Option<EngineName>,
    label: &str,
    f: impl Fn(&HomologyOptions) -> anyhow::Result<(i64, Value)>,
) -> anyhow::Result<Done> {
    let mut values = Vec::new();
    let mut by_engine = serde_json::Map::new();
    for (engine, name) in engines(which) {
        let (v, detail) = f(&ctx.homology(engine))?;
        values.push(v);
        by_engine.insert(name.to_string(), detail);
    }
    let agree = values.windows(2).all(|w| w[0] == w[1]);
    let headline = if agree {
        format!("{label} = {}", values[0])
    } else {
        format!("engines disagree on {label}: {values:?}")
    };
    done(agree, headline, json!({ label: values[0], "agree": agree, "engines": by_engine }))
}

fn run_task(ctx: &Ctx, task: &TaskDecl) -> anyhow::Result<Done> {
    let problem = ctx.problem;
    let at = ctx.at.as_str();
    match task {
        TaskDecl::Validate { mf, twisted } => {
            let (v, rank, potential) = match (mf, twisted) {
                (Some(m), _) => {
                    let e = problem.mf(m, at)?;
                    (e.validate()?, e.rank(), e.potential().clone())
                }
                (None, Some(t)) => {
                    let e = problem.twisted_mf(t, at)?;
                    (e.validate()?, e.rank(), e.potential().clone())
                }
                (None, None) => anyhow::bail!("nothing to validate"),
            };
            let ok = v.ok();
            let headline = match &v.violation {
                None => format!("rank {rank}, AB = BA = f*I"),
                Some(x) => format!("{} differs from f*I at ({}, {})", x.product, x.row, x.col),
            };
            done(ok, headline, json!({"ok": ok, "rank": rank, "potential": p(&potential), "violation": validation_json(&v)}))
        }
        TaskDecl::Milnor { poly } => {
            let f = ctx.poly(poly)?;
            let m = milnor_algebra(&f)?;
            let weights = f.ring().weights().to_vec();
            let basis: Vec<Value> = m.basis_polys().iter().map(p).collect();
            let homogeneous = f.homogeneous_degree().is_some();
            let socle = homogeneous.then(|| m.socle_degree(&weights));
            done(
                true,
                format!("mu = {}", m.mu),
                json!({"potential": p(&f), "mu": m.mu, "basis": basis, "weights": weights, "socle_degree": socle}),
            )
        }
        TaskDecl::JacobianComplex { poly, bound } => {
            let f = ctx.poly(poly)?;
            let weights = f.ring().weights().to_vec();
            let rep = jacobian_complex_check(&f, &weights, bound.or(ctx.over.degree_bound))?;
            let mu = milnor_algebra(&f)?.mu;
            let passed = rep.exact_below_top && rep.top_dimension == mu;
            let by_degree: Vec<Value> =
                rep.by_degree.iter().map(|&(k, d, dim)| json!({"form_degree": k, "degree": d, "dimension": dim})).collect();
            done(
                passed,
                format!("H = {:?}, exact below top: {}, dim H^top = {} (mu = {mu})", rep.homology, rep.exact_below_top, rep.top_dimension),
                json!({
                    "weights": rep.weights, "degree_f": rep.degree_f, "bound": rep.bound,
                    "homology": rep.homology, "by_degree": by_degree,
                    "exact_below_top": rep.exact_below_top, "top_dimension": rep.top_dimension, "mu": mu,
                }),
            )
        }
        TaskDecl::Hh0 { poly, bound } => {
            let f = ctx.poly(poly)?;
            let weights = f.ring().weights().to_vec();
            let rep = hh0_adhoc(&f, &weights, bound.or(ctx.over.degree_bound))?;
            let summands: Vec<Value> = rep.summands.iter().map(|&(j, d)| json!({"form_degree": j, "dimension": d})).collect();
            done(
                rep.only_top,
                format!("summands {:?}", rep.summands),
                json!({"summands": summands, "only_top": rep.only_top}),
            )
        }
        TaskDecl::Residue { poly } => {
            let f = ctx.poly(poly)?;
            let m = milnor_algebra(&f)?;
            let res = residue_functional(&m)?;
            let n = f.ring().n();
            let hess: Vec<Vec<Poly>> = (0..n)
                .map(|i| (0..n).map(|j| f.derivative(i)?.derivative(j)).collect::<mfcalc::Result<Vec<_>>>())
                .collect::<mfcalc::Result<_>>()?;
            let hess_res = res.residue(&PolyMatrix::from_rows(f.ring(), hess)?.det()?);
            let re_expansion = res.re_expansion_holds()?;
            let nondegenerate = res.is_nondegenerate();
            let gram: Vec<Value> = res.gram_matrix().iter().map(|row| qs(row)).collect();
            let basis: Vec<Value> = m.basis_polys().iter().map(p).collect();
            let passed = re_expansion && nondegenerate && hess_res == Rational::from_integer(m.mu.into());
            done(
                passed,
                format!("Res(hess) = {}, mu = {}, nondegenerate: {nondegenerate}", render_rational(&hess_res), m.mu),
                json!({
                    "mu": m.mu, "powers": res.powers, "det_t": p(&res.det_t), "basis": basis,
                    "gram_matrix": gram, "nondegenerate": nondegenerate,
                    "re_expansion_holds": re_expansion, "residue_of_hessian": q(&hess_res),
                }),
            )
        }
        TaskDecl::Ctop { mf, connections, seed } => {
            let e = problem.mf(mf, at)?;
            let m = milnor_algebra(e.potential())?;
            let cc = chern_character(e, &Connection::trivial(e), &m)?;
            let components: Vec<Value> =
                cc.components.iter().map(|(k, form)| json!({"degree": k, "form": form.render()})).collect();
            let count = ctx.trials(*connections, DEFAULT_CONNECTIONS);
            let (independent, checked) = match &cc.top_class {
                Some(_) => {
                    let classes = top_classes_across_connections(e, &m, count, ctx.seed(*seed))?;
                    (classes.iter().all(|c| c == &classes[0]), count)
                }
                None => (true, 0),
            };
            let top = cc.top_class.as_ref().map(p).unwrap_or(Value::Null);
            let headline = match &cc.top_class {
                Some(t) => format!("c_top = {t} in a Milnor algebra of dimension {}", m.mu),
                None => "odd number of variables, no top class".to_string(),
            };
            done(
                independent,
                headline,
                json!({
                    "mu": m.mu, "top_class": top, "components": components,
                    "random_connections": checked, "connection_independent": independent,
                }),
            )
        }
        TaskDecl::PsiStrictness { mf, cases, seed } => {
            let e = problem.mf(mf, at)?;
            let cases = ctx.trials(*cases, DEFAULT_PSI_CASES);
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed(*seed));
            let mut failures = Vec::new();
            for k in 0..cases {
                let c = Connection::random(e.ring(), e.rank(), (k % 2) as u32, &mut rng);
                let data = psi(e, &c)?;
                if !(data.is_strict()? && data.target_is_factorization(e.potential())?) {
                    failures.push(k);
                }
            }
            done(
                failures.is_empty(),
                format!("{} of {cases} random connections commute", cases - failures.len()),
                json!({"cases": cases, "failures": failures}),
            )
        }
        TaskDecl::Euler { e, g, engine } => {
            let (e, g) = (problem.mf(e, at)?, problem.mf(g, at)?);
            per_engine(ctx, *engine, "chi", |opts| {
                let l = hom_lengths(e, g, opts)?;
                let chi = l.even as i64 - l.odd as i64;
                Ok((chi, json!({"even": l.even, "odd": l.odd})))
            })
        }
        TaskDecl::Theta { e, module, engine } => {
            let e = problem.mf(e, at)?;
            let m = ctx.presentation(module)?;
            per_engine(ctx, *engine, "theta", |opts| Ok((theta_with(e, m, opts)?, Value::Null)))
        }
        TaskDecl::Herbrand { m, n, potential } => {
            let (m, n) = (ctx.presentation(m)?, ctx.presentation(n)?);
            let g = ctx.poly(potential)?;
            let rep = herbrand(m, n, &g, &ctx.homology(Engine::Auto))?;
            done(
                true,
                format!("h = {}, chi = {}", rep.h, rep.chi),
                json!({
                    "h": rep.h, "chi": rep.chi,
                    "syzygy_indices": [rep.m.syzygy_index, rep.n.syzygy_index],
                    "ranks": [rep.m.mf.rank(), rep.n.mf.rank()],
                }),
            )
        }
        TaskDecl::PvCheck { e, g } => {
            let (e, g) = (problem.mf(e, at)?, problem.mf(g, at)?);
            let rep = pv_check(e, g, ctx.norm, &ctx.homology(Engine::Auto))?;
            let opt = |c: &Option<Poly>| c.as_ref().map(p).unwrap_or(Value::Null);
            done(
                rep.equal,
                format!("chi = {}, <ch, ch> = {}", rep.chi, render_rational(&rep.pairing)),
                json!({
                    "n": rep.n, "chi": rep.chi, "pairing": q(&rep.pairing),
                    "ch_e": opt(&rep.ch_e), "ch_g": opt(&rep.ch_g), "equal": rep.equal,
                }),
            )
        }
        TaskDecl::DaoCheck { e, g } => {
            let (e, g) = (problem.mf(e, at)?, problem.mf(g, at)?);
            let rep = dao_check_c1(e, g, &ctx.homology(Engine::Auto))?;
            done(
                rep.holds,
                format!("theta = {}, h(M^v, N) = {}", rep.theta, rep.h_dual),
                json!({"theta": rep.theta, "h_dual": rep.h_dual, "holds": rep.holds}),
            )
        }
        TaskDecl::Hc { f, m, n, m_dual, points, count, seed } => {
            let f_list = ctx.polys(f)?;
            let (m, n) = (problem.module(m, at)?, problem.module(n, at)?);
            let m_dual = m_dual.as_ref().map(|d| problem.module(d, at)).transpose()?;
            let points = match points {
                Some(pts) => pts.iter().map(|pt| problem.point(pt, at)).collect::<Result<Vec<_>, _>>()?,
                None => {
                    let want = ctx.trials(*count, DEFAULT_HC_POINTS);
                    let mut out = Vec::new();
                    for pt in PointSampler::new(f_list.len(), ctx.seed(*seed), DEFAULT_SEARCH_BOUND).take(50 * want + 100) {
                        if out.len() == want {
                            break;
                        }
                        if certify_point(&f_list, &pt)?.is_some() {
                            out.push(pt);
                        }
                    }
                    anyhow::ensure!(out.len() == want, "found only {} admissible points", out.len());
                    out
                }
            };
            let opts = ctx.homology(Engine::Auto);
            let mut rows = Vec::new();
            let mut all_vanish = true;
            for pt in &points {
                let rep = hc_and_etac(&f_list, m, n, m_dual, pt, &opts)?;
                let vanish = rep.hc == Rational::from_integer(0.into()) && rep.etac.as_ref().is_none_or(|e| *e == Rational::from_integer(0.into()));
                all_vanish &= vanish;
                rows.push(json!({
                    "point": qs(&rep.point), "g": p(&rep.g), "h": rep.h, "hc": q(&rep.hc),
                    "etac": rep.etac.as_ref().map(q).unwrap_or(Value::Null),
                    "syzygy_indices": [rep.syzygy_indices.0, rep.syzygy_indices.1],
                }));
            }
            done(
                all_vanish,
                format!("h_c = 0 at {} of {} points", rows.iter().filter(|r| r["hc"] == "0").count(), points.len()),
                json!({"points": rows, "all_vanish": all_vanish}),
            )
        }
        TaskDecl::CtopVanishingSuite { f, twisted, trials, seed } => {
            let f_list = ctx.polys(f)?;
            let e = problem.twisted_mf(twisted, at)?;
            let trials = ctx.trials(*trials, DEFAULT_SUITE_TRIALS);
            let rep = ctop_vanishing_suite(&f_list, e, trials, ctx.seed(*seed))?;
            let rows: Vec<Value> = rep
                .trials
                .iter()
                .map(|t| json!({"point": qs(&t.point), "g": p(&t.g), "mu": t.mu, "top_class": p(&t.top_class), "vanishes": t.vanishes}))
                .collect();
            let vanishing = rep.trials.iter().filter(|t| t.vanishes).count();
            done(
                rep.all_vanish,
                format!("c_top = 0 at {vanishing} of {} points ({} draws)", rep.trials.len(), rep.attempts),
                json!({"trials": rows, "attempts": rep.attempts, "all_vanish": rep.all_vanish}),
            )
        }
        TaskDecl::Functoriality { twisted, point } => {
            let e = problem.twisted_mf(twisted, at)?;
            let pt = problem.point(point, at)?;
            let rep = functoriality_check(e, &pt)?;
            done(
                rep.equal,
                format!("at {}: {} vs {}", point_str(&pt), rep.specialized_first, rep.specialized_last),
                json!({
                    "point": qs(&pt), "specialized_first": p(&rep.specialized_first),
                    "specialized_last": p(&rep.specialized_last), "equal": rep.equal,
                }),
            )
        }
        TaskDecl::Strata { f } => {
            let f_list = ctx.polys(f)?;
            let rep = check_assumptions(&f_list)?;
            let strata: Vec<Value> = rep
                .strata
                .iter()
                .map(|(j, gens, d)| json!({"j": j, "generators": gens.iter().map(p).collect::<Vec<_>>(), "dimension": d}))
                .collect();
            let dims: Vec<i64> = rep.strata.iter().map(|s| s.2).collect();
            done(
                rep.all_ok(),
                format!(
                    "dim V_j = {dims:?}; regular sequence {}, isolated {}, strata {}",
                    rep.regular_sequence_ok, rep.isolated_ok, rep.strata_ok
                ),
                json!({
                    "strata": strata, "prefix_dimensions": rep.prefix_dimensions,
                    "singular_locus_dimension": rep.singular_locus_dimension,
                    "regular_sequence_ok": rep.regular_sequence_ok, "isolated_ok": rep.isolated_ok,
                    "strata_ok": rep.strata_ok,
                }),
            )
        }
        TaskDecl::DwCheck { f } => {
            let f_list = ctx.polys(f)?;
            let rep = dw_regular_section_check(&f_list)?;
            let charts: Vec<Value> = rep.charts.iter().map(|c| json!({"chart": c.chart, "dimension": c.dimension})).collect();
            done(
                rep.ok,
                format!("dim Z = {} (c - 1 = {})", rep.dimension, f_list.len() as i64 - 1),
                json!({"charts": charts, "dimension": rep.dimension, "ok": rep.ok}),
            )
        }
        TaskDecl::Search { f, trials, seed } => {
            let f_list = ctx.polys(f)?;
            let cert = generic_hypersurface_search(&f_list, ctx.trials(*trials, DEFAULT_SEARCH_TRIALS), ctx.seed(*seed))?;
            let reverified = cert.reverify(&f_list)?;
            done(
                reverified,
                format!("a = {}, g = {}", point_str(&cert.point), cert.g),
                json!({"point": qs(&cert.point), "g": p(&cert.g), "dimension": cert.dimension, "reverified": reverified}),
            )
        }
    }
}

pub fn execute(
    problem: &Problem,
    norm: &PairingNormalization,
    over: Overrides,
    index: usize,
    task: &TaskDecl,
) -> TaskOutcome {
    let ctx = Ctx { problem, norm, over, at: format!("tasks[{index}]") };
    let kind = task.kind();
    match run_task(&ctx, task) {
        Ok(d) => TaskOutcome {
            index,
            kind,
            status: if d.passed { Status::Ok } else { Status::Failed },
            headline: d.headline,
            result: d.result,
            error: None,
        },
        Err(e) => TaskOutcome {
            index,
            kind,
            status: Status::Error,
            headline: e.to_string(),
            result: Value::Null,
            error: Some(e.to_string()),
        },
    }
}
