//! One line per acceptance criterion. All comparisons are exact integer or
//! boolean equality; there are no floating point tolerances.

use std::process::ExitCode;

use coverbench::selftest::{run_selftest, SelftestConfig};
use coverbench_cli::report::{Report, Value};
use coverbench_cli::run::{run, ExitStatus, RunOptions};
use coverbench_cli::script::parse_script;

const SCRIPT: &str = include_str!("../scripts/theorem1.cbs");
const GOLDEN: &str = include_str!("golden/theorem1.txt");

struct Criterion {
    id: u32,
    title: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    fn new(id: u32, title: &'static str) -> Criterion {
        Criterion {
            id,
            title,
            failures: Vec::new(),
        }
    }

    fn expect(&mut self, r: &Report, section: &str, key: &str, want: impl Into<Value>) -> &mut Criterion {
        let want = want.into();
        match r.get(section, key) {
            Some(got) if *got == want => {}
            got => self.failures.push(format!("{section}.{key}: want {want:?}, got {got:?}")),
        }
        self
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) -> &mut Criterion {
        if !ok {
            self.failures.push(what.into());
        }
        self
    }

    fn finish(&self) -> bool {
        let verdict = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {} {verdict}: {} (tolerance: exact)", self.id, self.title);
        for f in &self.failures {
            println!("    {f}");
        }
        self.failures.is_empty()
    }
}

fn main() -> ExitCode {
    let script = parse_script(SCRIPT).expect("bundled script parses");
    let outcome = run(&script, &RunOptions::default());
    let r = &outcome.report;
    let mut all = Vec::new();

    let mut c = Criterion::new(1, "verify theorem1: degree 6, boundary genera 3 and 13, fiber genus 19, splittings 25 and 39");
    c.check(outcome.status == ExitStatus::Success, format!("exit status {:?}", outcome.status))
        .expect(r, "tower", "cover degree", 6usize)
        .expect(r, "boundary", "cover boundary connected", true)
        .expect(r, "boundary", "cover boundary genus", 13usize)
        .expect(r, "boundary", "cover boundary genus direct", 13usize)
        .expect(r, "spin", "fiber genus", 19usize)
        .expect(r, "heegaard", "lifted splitting genus", 25usize)
        .expect(r, "heegaard", "fiber splitting genus", 39usize)
        .expect(r, "boundary", "tetrus boundary genus", 3usize)
        .expect(r, "tower", "index Gamma_4_1:Gamma_tilde", 6usize)
        .expect(r, "tower", "index Gamma_prime:Gamma_tilde", 2usize)
        .expect(r, "expectations", "all met", true);
    all.push(c.finish());

    let mut c = Criterion::new(2, "surface pipeline: one-holed torus, order 6 monodromy, genus 2 double, 12 link components, 6 projections");
    c.expect(r, "surface", "fiber chi", -1i64)
        .expect(r, "surface", "fiber boundary components", 1usize)
        .expect(r, "surface", "monodromy order", 6usize)
        .expect(r, "surface", "double genus", 2usize)
        .expect(r, "surface", "double chi", -2i64)
        .expect(r, "surface", "link components", 12usize)
        .expect(r, "surface", "link heights", 12usize)
        .expect(r, "surface", "projected curves", 6usize)
        .expect(r, "surface", "cube fixes each curve", true);
    all.push(c.finish());

    let mut c = Criterion::new(3, "spin search, bound 2: valid system of total 16, 32 branch points, genus 19");
    c.expect(r, "spin", "search bound", 2usize)
        .expect(r, "spin", "min total intersection", 16usize)
        .expect(r, "spin", "branch points", 32usize)
        .expect(r, "spin", "fiber chi", -36i64)
        .expect(r, "spin", "fiber genus", 19usize);
    let valid = matches!(r.get("spin", "valid systems"), Some(Value::Int(n)) if *n > 0);
    c.check(valid, "no valid system reported");
    let witnessed = r.get("spin", "system orientation").is_some() && r.get("spin", "link orientation").is_some();
    c.check(witnessed, "orientation witness missing");
    all.push(c.finish());

    let mut c = Criterion::new(4, "property suites under the default selftest configuration");
    for s in run_selftest(&SelftestConfig::default()) {
        println!("    {s}");
        c.check(s.passed(), format!("suite `{}` failed", s.name));
    }
    all.push(c.finish());

    let mut c = Criterion::new(5, "cross-checks: index 24 by both towers, H1 of the double cover, alternate Bezout pair");
    c.expect(r, "tower", "index F:Gamma_tilde via Gamma_4_1", 24usize)
        .expect(r, "tower", "index F:Gamma_tilde via Gamma_prime", 24usize)
        .expect(r, "tower", "index F:Gamma_tilde", 24usize)
        .expect(r, "homology", "H1 double cover", Value::ints(&[0i64]))
        .expect(r, "checks", "alternate Bezout isomorphic", true);
    all.push(c.finish());

    let golden = r.to_text() == GOLDEN;
    println!("golden report {}", if golden { "matches" } else { "DIFFERS" });

    if all.iter().all(|&ok| ok) && golden {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
