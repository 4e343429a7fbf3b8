//! Problem documents: the JSON input format and its resolution into library
//! objects.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use mfcalc::invariants::ModuleData;
use mfcalc::mf::{
    direct_sum, dual, koszul_mf, koszul_twisted, module_dual, shift, specialize_twisted, tensor, tensor_twisted,
    MatrixFactorization, TwistedMf,
};
use mfcalc::{parse_poly, PolyMatrix, Poly, Rational, Ring};
use serde::Deserialize;

use crate::CliError;

pub const PROBLEM_SCHEMA: &str = "mfcalc-problem/1";

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub schema: String,
    pub ring: RingDecl,
    #[serde(default)]
    pub polys: BTreeMap<String, String>,
    #[serde(default)]
    pub matrices: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default)]
    pub mfs: BTreeMap<String, MfDecl>,
    #[serde(default)]
    pub twisted: BTreeMap<String, TwistedDecl>,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleDecl>,
    #[serde(default)]
    pub tasks: Vec<TaskDecl>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDecl {
    pub x: Vec<String>,
    #[serde(default)]
    pub weights: Option<Vec<u32>>,
    #[serde(default)]
    pub t: Vec<String>,
}

/// A declared matrix name or an inline array of rows.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum MatrixRef {
    Name(String),
    Inline(Vec<Vec<String>>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MfDecl {
    Matrices { potential: String, a: MatrixRef, b: MatrixRef },
    Koszul(Vec<(String, String)>),
    Tensor(String, String),
    Sum(String, String),
    Dual(String),
    Shift(String),
    ModuleDual(String),
    Specialize { twisted: String, point: Vec<String> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum TwistedDecl {
    Matrices { potential: String, a: MatrixRef, b: MatrixRef, twists0: Vec<i64>, twists1: Vec<i64> },
    Koszul(Vec<String>),
    Tensor(String, String),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleDecl {
    Presentation(MatrixRef),
    /// `coker A` of a declared factorization.
    Cokernel(String),
    Twisted(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EngineName {
    Auto,
    Graded,
    Groebner,
    /// graded and Gröbner, failing unless they agree
    Both,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TaskDecl {
    Validate {
        #[serde(default)]
        mf: Option<String>,
        #[serde(default)]
        twisted: Option<String>,
    },
    Milnor {
        poly: String,
    },
    JacobianComplex {
        poly: String,
        #[serde(default)]
        bound: Option<i64>,
    },
    Hh0 {
        poly: String,
        #[serde(default)]
        bound: Option<i64>,
    },
    Residue {
        poly: String,
    },
    Ctop {
        mf: String,
        #[serde(default)]
        connections: Option<usize>,
        #[serde(default)]
        seed: Option<u64>,
    },
    PsiStrictness {
        mf: String,
        #[serde(default)]
        cases: Option<usize>,
        #[serde(default)]
        seed: Option<u64>,
    },
    Euler {
        e: String,
        g: String,
        #[serde(default)]
        engine: Option<EngineName>,
    },
    Theta {
        e: String,
        module: String,
        #[serde(default)]
        engine: Option<EngineName>,
    },
    Herbrand {
        m: String,
        n: String,
        potential: String,
    },
    PvCheck {
        e: String,
        g: String,
    },
    DaoCheck {
        e: String,
        g: String,
    },
    Hc {
        f: Vec<String>,
        m: String,
        n: String,
        #[serde(default)]
        m_dual: Option<String>,
        #[serde(default)]
        points: Option<Vec<Vec<String>>>,
        #[serde(default)]
        count: Option<usize>,
        #[serde(default)]
        seed: Option<u64>,
    },
    CtopVanishingSuite {
        f: Vec<String>,
        twisted: String,
        #[serde(default)]
        trials: Option<usize>,
        #[serde(default)]
        seed: Option<u64>,
    },
    Functoriality {
        twisted: String,
        point: Vec<String>,
    },
    Strata {
        f: Vec<String>,
    },
    DwCheck {
        f: Vec<String>,
    },
    Search {
        f: Vec<String>,
        #[serde(default)]
        trials: Option<usize>,
        #[serde(default)]
        seed: Option<u64>,
    },
}

impl TaskDecl {
    pub fn kind(&self) -> &'static str {
        match self {
            TaskDecl::Validate { .. } => "validate",
            TaskDecl::Milnor { .. } => "milnor",
            TaskDecl::JacobianComplex { .. } => "jacobian_complex",
            TaskDecl::Hh0 { .. } => "hh0",
            TaskDecl::Residue { .. } => "residue",
            TaskDecl::Ctop { .. } => "ctop",
            TaskDecl::PsiStrictness { .. } => "psi_strictness",
            TaskDecl::Euler { .. } => "euler",
            TaskDecl::Theta { .. } => "theta",
            TaskDecl::Herbrand { .. } => "herbrand",
            TaskDecl::PvCheck { .. } => "pv_check",
            TaskDecl::DaoCheck { .. } => "dao_check",
            TaskDecl::Hc { .. } => "hc",
            TaskDecl::CtopVanishingSuite { .. } => "ctop_vanishing_suite",
            TaskDecl::Functoriality { .. } => "functoriality",
            TaskDecl::Strata { .. } => "strata",
            TaskDecl::DwCheck { .. } => "dw_check",
            TaskDecl::Search { .. } => "search",
        }
    }
}

/// A document with every declaration resolved.
#[derive(Debug, Clone)]
pub struct Problem {
    /// Ring with the auxiliary variables, if any.
    pub ring: Ring,
    /// Ring of the x-variables alone.
    pub base: Ring,
    pub polys: BTreeMap<String, Poly>,
    pub matrices: BTreeMap<String, Vec<Vec<String>>>,
    pub mfs: BTreeMap<String, MatrixFactorization>,
    pub twisted: BTreeMap<String, TwistedMf>,
    pub modules: BTreeMap<String, ModuleData>,
    pub tasks: Vec<TaskDecl>,
}

fn doc_err(at: impl Into<String>, msg: impl ToString) -> CliError {
    CliError::Document { at: at.into(), msg: msg.to_string() }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    Rational::from_str(s.trim()).ok()
}

impl Problem {
    pub fn from_json(text: &str) -> Result<Problem, CliError> {
        let doc: Document = serde_json::from_str(text)
            .map_err(|e| CliError::Json { line: e.line(), column: e.column(), msg: e.to_string() })?;
        Problem::from_document(doc)
    }

    pub fn from_document(doc: Document) -> Result<Problem, CliError> {
        if doc.schema != PROBLEM_SCHEMA {
            return Err(doc_err("schema", format!("expected \"{PROBLEM_SCHEMA}\", found \"{}\"", doc.schema)));
        }
        let x: Vec<&str> = doc.ring.x.iter().map(String::as_str).collect();
        let t: Vec<&str> = doc.ring.t.iter().map(String::as_str).collect();
        let ring = match &doc.ring.weights {
            Some(w) => Ring::with_weights(&x, &t, w),
            None => Ring::new(&x, &t),
        }
        .map_err(|e| doc_err("ring", e))?;
        let base = ring.base();
        let mut p = Problem {
            ring,
            base,
            polys: BTreeMap::new(),
            matrices: doc.matrices.clone(),
            mfs: BTreeMap::new(),
            twisted: BTreeMap::new(),
            modules: BTreeMap::new(),
            tasks: doc.tasks.clone(),
        };
        for (name, text) in &doc.polys {
            let poly = parse_poly(text, &p.ring).map_err(|e| doc_err(format!("polys.{name}"), e))?;
            p.polys.insert(name.clone(), poly);
        }
        for (name, rows) in &doc.matrices {
            p.matrix_rows(rows, &p.ring, &format!("matrices.{name}"))?;
        }
        let mut visiting = BTreeSet::new();
        for name in doc.twisted.keys() {
            p.resolve_twisted(&doc, name, &mut visiting)?;
        }
        for name in doc.mfs.keys() {
            p.resolve_mf(&doc, name, &mut visiting)?;
        }
        for (name, decl) in &doc.modules {
            let at = format!("modules.{name}");
            let m = match decl {
                ModuleDecl::Presentation(m) => ModuleData::Presentation(p.matrix(m, &p.base.clone(), &at)?),
                ModuleDecl::Cokernel(e) => ModuleData::Presentation(p.mf(e, &at)?.a().clone()),
                ModuleDecl::Twisted(e) => ModuleData::Twisted(p.twisted_mf(e, &at)?.clone()),
            };
            p.modules.insert(name.clone(), m);
        }
        p.check_task_refs()?;
        Ok(p)
    }

    /// A declared polynomial name or an expression, over `ring`.
    pub fn poly_in(&self, s: &str, ring: &Ring, at: &str) -> Result<Poly, CliError> {
        let p = match self.polys.get(s) {
            Some(p) => p.clone(),
            None => parse_poly(s, &self.ring).map_err(|e| doc_err(at, e))?,
        };
        if &self.ring == ring {
            return Ok(p);
        }
        if p.involves_t() {
            return Err(doc_err(at, format!("`{s}` involves the auxiliary variables")));
        }
        p.embed(ring).map_err(|e| doc_err(at, e))
    }

    pub fn base_poly(&self, s: &str, at: &str) -> Result<Poly, CliError> {
        self.poly_in(s, &self.base, at)
    }

    fn matrix_rows(&self, rows: &[Vec<String>], ring: &Ring, at: &str) -> Result<PolyMatrix, CliError> {
        let parsed = rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, s)| self.poly_in(s, ring, &format!("{at}[{i}][{j}]")))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        if parsed.is_empty() {
            return Err(doc_err(at, "matrix has no rows"));
        }
        PolyMatrix::from_rows(ring, parsed).map_err(|e| doc_err(at, e))
    }

    pub fn matrix(&self, m: &MatrixRef, ring: &Ring, at: &str) -> Result<PolyMatrix, CliError> {
        match m {
            MatrixRef::Name(n) => {
                let rows = self.matrices.get(n).ok_or_else(|| doc_err(at, format!("unknown matrix `{n}`")))?;
                self.matrix_rows(rows, ring, &format!("matrices.{n}"))
            }
            MatrixRef::Inline(rows) => self.matrix_rows(rows, ring, at),
        }
    }

    pub fn point(&self, values: &[String], at: &str) -> Result<Vec<Rational>, CliError> {
        values
            .iter()
            .map(|v| parse_rational(v).ok_or_else(|| doc_err(at, format!("`{v}` is not a rational number"))))
            .collect()
    }

    pub fn mf(&self, name: &str, at: &str) -> Result<&MatrixFactorization, CliError> {
        self.mfs.get(name).ok_or_else(|| doc_err(at, format!("unknown factorization `{name}`")))
    }

    pub fn twisted_mf(&self, name: &str, at: &str) -> Result<&TwistedMf, CliError> {
        self.twisted.get(name).ok_or_else(|| doc_err(at, format!("unknown twisted factorization `{name}`")))
    }

    pub fn module(&self, name: &str, at: &str) -> Result<&ModuleData, CliError> {
        self.modules.get(name).ok_or_else(|| doc_err(at, format!("unknown module `{name}`")))
    }

    fn resolve_mf(&mut self, doc: &Document, name: &str, visiting: &mut BTreeSet<String>) -> Result<(), CliError> {
        if self.mfs.contains_key(name) {
            return Ok(());
        }
        let at = format!("mfs.{name}");
        let decl = doc.mfs.get(name).ok_or_else(|| doc_err(&at, format!("unknown factorization `{name}`")))?;
        if !visiting.insert(format!("mf:{name}")) {
            return Err(doc_err(&at, "cyclic definition"));
        }
        let mut dep = |p: &mut Problem, n: &str| -> Result<MatrixFactorization, CliError> {
            p.resolve_mf(doc, n, visiting)?;
            Ok(p.mfs[n].clone())
        };
        let base = self.base.clone();
        let e = match decl {
            MfDecl::Matrices { potential, a, b } => MatrixFactorization::new(
                self.base_poly(potential, &at)?,
                self.matrix(a, &base, &format!("{at}.a"))?,
                self.matrix(b, &base, &format!("{at}.b"))?,
            ),
            MfDecl::Koszul(pairs) => {
                let pairs = pairs
                    .iter()
                    .map(|(a, b)| Ok((self.base_poly(a, &at)?, self.base_poly(b, &at)?)))
                    .collect::<Result<Vec<_>, CliError>>()?;
                koszul_mf(&pairs)
            }
            MfDecl::Tensor(a, b) => {
                let (a, b) = (dep(self, a)?, dep(self, b)?);
                tensor(&a, &b)
            }
            MfDecl::Sum(a, b) => {
                let (a, b) = (dep(self, a)?, dep(self, b)?);
                direct_sum(&a, &b)
            }
            MfDecl::Dual(a) => Ok(dual(&dep(self, a)?)),
            MfDecl::Shift(a) => Ok(shift(&dep(self, a)?)),
            MfDecl::ModuleDual(a) => Ok(module_dual(&dep(self, a)?)),
            MfDecl::Specialize { twisted, point } => {
                let point = self.point(point, &at)?;
                specialize_twisted(self.twisted_mf(twisted, &at)?, &point)
            }
        }
        .map_err(|e| doc_err(&at, e))?;
        visiting.remove(&format!("mf:{name}"));
        self.mfs.insert(name.to_string(), e);
        Ok(())
    }

    fn resolve_twisted(&mut self, doc: &Document, name: &str, visiting: &mut BTreeSet<String>) -> Result<(), CliError> {
        if self.twisted.contains_key(name) {
            return Ok(());
        }
        let at = format!("twisted.{name}");
        let decl = doc.twisted.get(name).ok_or_else(|| doc_err(&at, format!("unknown twisted factorization `{name}`")))?;
        if !visiting.insert(format!("twisted:{name}")) {
            return Err(doc_err(&at, "cyclic definition"));
        }
        let ring = self.ring.clone();
        let e = match decl {
            TwistedDecl::Matrices { potential, a, b, twists0, twists1 } => TwistedMf::new(
                self.poly_in(potential, &ring, &at)?,
                self.matrix(a, &ring, &format!("{at}.a"))?,
                self.matrix(b, &ring, &format!("{at}.b"))?,
                twists0.clone(),
                twists1.clone(),
            ),
            TwistedDecl::Koszul(fs) => {
                let fs = fs.iter().map(|f| self.poly_in(f, &ring, &at)).collect::<Result<Vec<_>, _>>()?;
                koszul_twisted(&ring, &fs)
            }
            TwistedDecl::Tensor(a, b) => {
                self.resolve_twisted(doc, a, visiting)?;
                self.resolve_twisted(doc, b, visiting)?;
                tensor_twisted(&self.twisted[a.as_str()], &self.twisted[b.as_str()])
            }
        }
        .map_err(|e| doc_err(&at, e))?;
        visiting.remove(&format!("twisted:{name}"));
        self.twisted.insert(name.to_string(), e);
        Ok(())
    }

    fn check_task_refs(&self) -> Result<(), CliError> {
        for (i, task) in self.tasks.iter().enumerate() {
            let at = format!("tasks[{i}]");
            let mfs = |names: &[&String]| names.iter().try_for_each(|n| self.mf(n, &at).map(|_| ()));
            let polys = |names: &[String]| names.iter().try_for_each(|n| self.base_poly(n, &at).map(|_| ()));
            match task {
                TaskDecl::Validate { mf, twisted } => {
                    match (mf, twisted) {
                        (Some(m), None) => mfs(&[m])?,
                        (None, Some(t)) => self.twisted_mf(t, &at).map(|_| ())?,
                        _ => return Err(doc_err(at, "validate takes exactly one of `mf` or `twisted`")),
                    };
                }
                TaskDecl::Milnor { poly }
                | TaskDecl::JacobianComplex { poly, .. }
                | TaskDecl::Hh0 { poly, .. }
                | TaskDecl::Residue { poly } => polys(std::slice::from_ref(poly))?,
                TaskDecl::Ctop { mf, .. } | TaskDecl::PsiStrictness { mf, .. } => mfs(&[mf])?,
                TaskDecl::Euler { e, g, .. } | TaskDecl::PvCheck { e, g } | TaskDecl::DaoCheck { e, g } => mfs(&[e, g])?,
                TaskDecl::Theta { e, module, .. } => {
                    mfs(&[e])?;
                    self.module(module, &at)?;
                }
                TaskDecl::Herbrand { m, n, potential } => {
                    self.module(m, &at)?;
                    self.module(n, &at)?;
                    polys(std::slice::from_ref(potential))?;
                }
                TaskDecl::Hc { f, m, n, m_dual, points, .. } => {
                    polys(f)?;
                    for name in [Some(m), Some(n), m_dual.as_ref()].into_iter().flatten() {
                        self.module(name, &at)?;
                    }
                    for p in points.iter().flatten() {
                        self.point(p, &at)?;
                    }
                }
                TaskDecl::CtopVanishingSuite { f, twisted, .. } => {
                    polys(f)?;
                    self.twisted_mf(twisted, &at)?;
                }
                TaskDecl::Functoriality { twisted, point } => {
                    self.twisted_mf(twisted, &at)?;
                    self.point(point, &at)?;
                }
                TaskDecl::Strata { f } | TaskDecl::DwCheck { f } | TaskDecl::Search { f, .. } => polys(f)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const NODE: &str = r#"{
        "schema": "mfcalc-problem/1",
        "ring": {"x": ["x", "y"]},
        "polys": {"f": "x*y"},
        "matrices": {"A": [["x"]]},
        "mfs": {"node": {"matrices": {"potential": "f", "a": "A", "b": [["y"]]}},
                "twice": {"tensor": ["node", "node"]}},
        "modules": {"M": {"cokernel": "node"}},
        "tasks": [{"kind": "euler", "e": "node", "g": "node"}]
    }"#;

    #[test]
    fn resolves_declarations() {
        let p = Problem::from_json(NODE).unwrap();
        assert_eq!(p.mfs["node"].rank(), 1);
        assert_eq!(p.mfs["twice"].rank(), 2);
        assert!(matches!(p.modules["M"], ModuleData::Presentation(_)));
    }

    #[test]
    fn reports_locations() {
        let bad = NODE.replace(r#""b": [["y"]]"#, r#""b": [["y", "x"]]"#);
        let err = Problem::from_json(&bad).unwrap_err();
        assert!(matches!(err, CliError::Document { ref at, .. } if at == "mfs.node"), "{err}");
        let bad = NODE.replace("x*y", "x*+y");
        assert!(matches!(Problem::from_json(&bad).unwrap_err(), CliError::Document { ref at, .. } if at == "polys.f"));
        let bad = NODE.replace(r#""g": "node""#, r#""g": "nope""#);
        assert!(matches!(Problem::from_json(&bad).unwrap_err(), CliError::Document { ref at, .. } if at == "tasks[0]"));
        let err = Problem::from_json("{\"schema\": 3").unwrap_err();
        assert!(matches!(err, CliError::Json { line: 1, .. }));
    }

    #[test]
    fn rejects_cycles_and_unknown_fields() {
        let cyc = NODE.replace(r#""twice": {"tensor": ["node", "node"]}"#, r#""twice": {"shift": "twice"}"#);
        assert!(Problem::from_json(&cyc).is_err());
        let extra = NODE.replace(r#""e": "node""#, r#""e": "node", "bogus": 1"#);
        assert!(matches!(Problem::from_json(&extra).unwrap_err(), CliError::Json { .. }));
    }
}
