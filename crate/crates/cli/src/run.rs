//! Executes scripts and builds reports.

use std::collections::HashMap;

use coverbench::cover::{analyze_branched_cover, complete_diamond, MeridianSpec};
use coverbench::pipeline::{theorem1_pipeline_with, CoverReport, PipelineOptions};
use coverbench::selftest::{run_selftest, SelftestConfig};
use coverbench::stallings::{graph_from_generators, kernel_graph, SubgroupGraph};
use coverbench::surface::chart::standard_gluing;
use coverbench::surface::complex::{
    build_surface, double_map, double_surface, doubling_involution, monodromy_map,
};
use coverbench::surface::curves::{branch_curves, distinct_heights, lift_link_curves};
use coverbench::surface::spin::SpinCheck;
use coverbench::word::{CyclicHom, Gen, Letter};
use serde::Deserialize;
use thiserror::Error;

use crate::report::{Report, Section, Value};
use crate::script::{Script, Stmt};

pub const EXPECTED_THEOREM1: &str = include_str!("../data/theorem1_expected.toml");

#[derive(Debug, Error)]
pub enum ExpectationError {
    #[error("expectation table: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("expectation `{section}.{key}`: unsupported value")]
    Value { section: String, key: String },
}

#[derive(Debug, Clone, Deserialize)]
struct RawTable {
    expect: Vec<RawExpectation>,
}

#[derive(Debug, Clone, Deserialize)]
struct RawExpectation {
    section: String,
    key: String,
    value: toml::Value,
    note: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expectation {
    pub section: String,
    pub key: String,
    pub value: Value,
    pub note: String,
}

fn from_toml(v: &toml::Value) -> Option<Value> {
    match v {
        toml::Value::Integer(i) => Some(Value::Int(*i)),
        toml::Value::Boolean(b) => Some(Value::Bool(*b)),
        toml::Value::String(s) => Some(Value::Text(s.clone())),
        toml::Value::Array(xs) => xs.iter().map(from_toml).collect::<Option<Vec<_>>>().map(Value::List),
        _ => None,
    }
}

pub fn parse_expectations(text: &str) -> Result<Vec<Expectation>, ExpectationError> {
    let raw: RawTable = toml::from_str(text)?;
    raw.expect
        .into_iter()
        .map(|e| {
            let value = from_toml(&e.value).ok_or_else(|| ExpectationError::Value {
                section: e.section.clone(),
                key: e.key.clone(),
            })?;
            Ok(Expectation {
                section: e.section,
                key: e.key,
                value,
                note: e.note,
            })
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub search_bound: usize,
    pub expected: Vec<Expectation>,
    pub selftest: Option<SelftestConfig>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            search_bound: PipelineOptions::default().search_bound,
            expected: parse_expectations(EXPECTED_THEOREM1).expect("bundled table parses"),
            selftest: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Mismatch = 1,
    Usage = 2,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub status: ExitStatus,
}

enum Binding {
    Group,
    Hom(CyclicHom),
    Sub(SubgroupGraph),
}

fn letter_for(name: &str) -> Option<Letter> {
    Gen::from_name(name).map(Letter::pos)
}

struct Runner<'a> {
    opts: &'a RunOptions,
    env: HashMap<String, Binding>,
    report: Report,
    failures: usize,
}

impl Runner<'_> {
    fn sub(&self, name: &str) -> &SubgroupGraph {
        match self.env.get(name) {
            Some(Binding::Sub(g)) => g,
            _ => unreachable!("scope checked"),
        }
    }

    fn fail(&mut self, section: &str, invariant: &str, detail: String) {
        self.failures += 1;
        let mut s = Section::new(section);
        s.set_noted("error", detail, Some(invariant));
        self.report.push(s);
    }

    fn exec(&mut self, stmt: &Stmt) {
        match stmt {
            Stmt::Group { id, .. } => {
                self.env.insert(id.name.clone(), Binding::Group);
            }
            Stmt::Hom {
                id,
                modulus,
                images,
                ..
            } => {
                let image = |g: &str| images.iter().find(|(n, _)| n.name == g).map_or(0, |(_, r)| *r);
                let f = CyclicHom::new(*modulus, image("x"), image("h"));
                self.env.insert(id.name.clone(), Binding::Hom(f));
            }
            Stmt::Kernel { id, hom } => {
                let Some(Binding::Hom(f)) = self.env.get(&hom.name) else {
                    unreachable!("scope checked")
                };
                match kernel_graph(f) {
                    Ok(g) => {
                        self.env.insert(id.name.clone(), Binding::Sub(g));
                    }
                    Err(e) => {
                        self.fail(&format!("sub {}", id.name), "kernel of a surjection", e.to_string());
                        // keep later statements meaningful
                        self.env.insert(id.name.clone(), Binding::Sub(SubgroupGraph::whole_group()));
                    }
                }
            }
            Stmt::Generated { id, words } => {
                let ws: Vec<_> = words
                    .iter()
                    .map(|w| w.expr.resolve(letter_for).expect("scope checked"))
                    .collect();
                self.env.insert(id.name.clone(), Binding::Sub(graph_from_generators(&ws)));
            }
            Stmt::Diamond { id, left, right } => {
                let (a, b) = (self.sub(&left.name).clone(), self.sub(&right.name).clone());
                match complete_diamond(&a, &b, &MeridianSpec::standard()) {
                    Ok(d) => {
                        self.env.insert(id.name.clone(), Binding::Sub(d.cover));
                    }
                    Err(e) => {
                        self.fail(&format!("diamond {}", id.name), "finite index", e.to_string());
                        self.env.insert(
                            id.name.clone(),
                            Binding::Sub(coverbench::stallings::intersect(&a, &b)),
                        );
                    }
                }
            }
            Stmt::Analyze { sub } => {
                let g = self.sub(&sub.name).clone();
                let name = format!("analyze {}", sub.name);
                match analyze_branched_cover(&g, &MeridianSpec::standard()) {
                    Ok(a) => {
                        let mut s = Section::new(name);
                        s.set("index", a.index);
                        for m in &a.meridians {
                            s.set(format!("meridian {}", m.name), m.datum.local_degrees.clone());
                        }
                        s.set("boundary orbits", a.boundary_orbits.clone())
                            .set("boundary components", a.boundary_components());
                        self.report.push(s);
                    }
                    Err(e) => self.fail(&name, "finite index", e.to_string()),
                }
            }
            Stmt::Surface { .. } => match surface_section() {
                Ok(s) => self.report.push(s),
                Err(e) => self.fail("surface", "surface construction", e),
            },
            Stmt::Verify { .. } => self.verify(),
        }
    }

    fn verify(&mut self) {
        let opts = PipelineOptions {
            search_bound: self.opts.search_bound,
        };
        match theorem1_pipeline_with(opts) {
            Ok(r) => {
                for s in cover_report_sections(&r) {
                    self.report.push(s);
                }
                let mut checks = Section::new("expectations");
                let mut all = true;
                for e in &self.opts.expected {
                    let got = self.report.get(&e.section, &e.key).cloned();
                    let ok = got.as_ref() == Some(&e.value);
                    all &= ok;
                    let note = if ok {
                        e.note.clone()
                    } else {
                        let got = got.map_or("nothing".into(), |g| format!("{g:?}"));
                        format!("expected {:?}, got {got}; {}", e.value, e.note)
                    };
                    checks.set_noted(format!("{}.{}", e.section, e.key), ok, Some(note));
                }
                checks.set("all met", all);
                if !all {
                    self.failures += 1;
                }
                self.report.push(checks);
            }
            Err(e) => {
                let invariant = match &e {
                    coverbench::pipeline::PipelineError::Invariant { invariant, .. } => invariant.to_string(),
                    _ => "pipeline stage".to_string(),
                };
                self.fail("verify theorem1", &invariant, e.to_string());
            }
        }
    }
}

fn surface_section() -> Result<Section, String> {
    let table = standard_gluing();
    let f = build_surface(&table).map_err(|e| e.to_string())?;
    let sigma = monodromy_map(&f).map_err(|e| e.to_string())?;
    let d = double_surface(&f).map_err(|e| e.to_string())?;
    let ds = double_map(&d, &sigma);
    let tau = doubling_involution(&d);
    let base = branch_curves(&table, &f, &d).map_err(|e| e.to_string())?;
    let order = sigma.order(64).unwrap_or(0);
    let lift = lift_link_curves(&d, &ds, &base, order).map_err(|e| e.to_string())?;
    let (ft, dt) = (f.topology(), d.topology());
    let mut s = Section::new("surface");
    s.set("fiber faces", ft.faces)
        .set("fiber edges", ft.edges)
        .set("fiber vertices", ft.vertices)
        .set("fiber chi", ft.chi)
        .set("fiber boundary components", ft.boundary_components)
        .set("fiber genus", ft.genus)
        .set("monodromy order", order)
        .set("double chi", dt.chi)
        .set("double genus", dt.genus)
        .set("involution fixed edges", tau.fixed_edges(&d).len())
        .set("branch curve chords", base.iter().map(|b| b.curve.len()).collect::<Vec<_>>())
        .set("link components", lift.components.len())
        .set("link heights", distinct_heights(&lift))
        .set("projected curves", lift.projected.len());
    Ok(s)
}

fn signs(xs: &[i8]) -> Value {
    Value::List(xs.iter().map(|&v| Value::Int(v as i64)).collect())
}

pub fn cover_report_sections(r: &CoverReport) -> Vec<Section> {
    let mut tower = Section::new("tower");
    for f in &r.indices {
        tower.set(format!("index {}:{}", f.group, f.subgroup), f.index);
    }
    tower
        .set("index F:Gamma_tilde via Gamma_4_1", r.tower_index.0)
        .set("index F:Gamma_tilde via Gamma_prime", r.tower_index.1)
        .set("cover degree", r.cover_degree)
        .set("filling compatible", r.filling_compatible);
    for l in &r.levels {
        let degs: Vec<Value> = l
            .analysis
            .meridians
            .iter()
            .map(|m| Value::from(m.datum.local_degrees.clone()))
            .collect();
        tower
            .set(format!("meridian degrees {}", l.name), Value::List(degs))
            .set(format!("boundary components {}", l.name), l.analysis.boundary_components())
            .set(format!("doubled index {}", l.name), l.doubled_index);
    }

    let mut boundary = Section::new("boundary");
    boundary
        .set("tetrus boundary genus", r.base_boundary_genus)
        .set("cover boundary connected", r.cover_boundary_connected)
        .set("cover boundary genus", r.cover_boundary_genus)
        .set("cover boundary genus direct", r.cover_boundary_genus_direct);
    for l in &r.levels {
        boundary.set(format!("boundary chi {}", l.name), l.boundary_chi);
    }

    let mut homology = Section::new("homology");
    homology.set("H1 double cover", Value::ints(&r.h1_double_cover));

    let s = &r.surface;
    let mut surface = Section::new("surface");
    surface
        .set("fiber chi", s.fiber.chi)
        .set("fiber boundary components", s.fiber.boundary_components)
        .set("fiber genus", s.fiber.genus)
        .set("monodromy order", s.monodromy_order)
        .set("double chi", s.double.chi)
        .set("double genus", s.double.genus)
        .set("involution fixed edges", s.involution_fixed_edges)
        .set("double monodromy order", s.double_monodromy_order)
        .set("link components", s.link_components)
        .set("link heights", s.link_heights)
        .set("projected curves", s.projected_curves)
        .set("cube fixes each curve", s.cube_fixes_each);

    let p = &r.spin;
    let mut spin = Section::new("spin");
    spin.set("search bound", p.bound)
        .set("candidates", p.candidates)
        .set("valid systems", p.valid)
        .set("min total intersection", p.min_total)
        .set("witness curves", p.witness.curves.len())
        .set("witness chords", p.witness.curves.iter().map(|c| c.len()).collect::<Vec<_>>());
    if let SpinCheck::Valid {
        gamma_signs,
        lambda_signs,
        pairs,
    } = &p.witness.check
    {
        let geo: Vec<Value> = pairs
            .iter()
            .map(|row| Value::from(row.iter().map(|&(g, _)| g).collect::<Vec<_>>()))
            .collect();
        let alg: Vec<Value> = pairs
            .iter()
            .map(|row| Value::ints(&row.iter().map(|&(_, a)| a).collect::<Vec<_>>()))
            .collect();
        spin.set("geometric intersections", Value::List(geo))
            .set("algebraic intersections", Value::List(alg))
            .set("system orientation", signs(gamma_signs))
            .set("link orientation", signs(lambda_signs));
    }
    spin.set("branch points", p.branch_points)
        .set("fiber chi", p.fiber_chi)
        .set("fiber genus", p.fiber_genus);

    let mut heegaard = Section::new("heegaard");
    heegaard
        .set("base splitting genus", r.base_splitting_genus)
        .set("lifted splitting genus", r.heegaard.0)
        .set("fiber splitting genus", r.heegaard.1);

    let mut checks = Section::new("checks");
    checks.set("alternate Bezout isomorphic", s.alternate_bezout_isomorphic);

    vec![tower, boundary, homology, surface, spin, heegaard, checks]
}

/// Runs the statements in order, then the self-test if requested.
pub fn run(script: &Script, opts: &RunOptions) -> Outcome {
    let mut runner = Runner {
        opts,
        env: HashMap::new(),
        report: Report::default(),
        failures: 0,
    };
    for stmt in &script.statements {
        runner.exec(stmt);
    }
    if let Some(cfg) = &opts.selftest {
        let mut s = Section::new("selftest");
        s.set("seed", cfg.seed as i64);
        for r in run_selftest(cfg) {
            if !r.passed() {
                runner.failures += 1;
            }
            let value = if r.passed() { Value::from("ok") } else { Value::from("FAILED") };
            s.set_noted(r.name, value, Some(match &r.witness {
                None => format!("{} cases", r.cases),
                Some(w) => format!("after {} cases: {w}", r.cases),
            }));
        }
        runner.report.push(s);
    }
    let status = if runner.failures == 0 {
        ExitStatus::Success
    } else {
        ExitStatus::Mismatch
    };
    let mut summary = Section::new("run");
    summary
        .set("statements", script.statements.len())
        .set("results", runner.report.sections.len())
        .set("status", status as i64);
    runner.report.push(summary);
    Outcome {
        report: runner.report,
        status,
    }
}
