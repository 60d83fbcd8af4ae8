//! One PASS/FAIL line per acceptance criterion. Every identity must hold with zero residual
//! and every criterion must finish within its time budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use tausys::verify::{run, CaseRecord, RunConfig, Selection, Suite};
use tausys::Window;

struct Timed {
    cases: Vec<CaseRecord>,
    elapsed: Duration,
    error: Option<String>,
}

fn run_suite(suite: Suite, config: &RunConfig) -> Timed {
    let start = Instant::now();
    match run(Selection::One(suite), config) {
        Ok(r) => Timed { cases: r.cases, elapsed: start.elapsed(), error: None },
        Err(e) => Timed { cases: Vec::new(), elapsed: start.elapsed(), error: Some(e.to_string()) },
    }
}

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Duration,
}

fn report(c: &Criterion, runs: &[&Timed], keep: impl Fn(&CaseRecord) -> bool) -> bool {
    let elapsed: Duration = runs.iter().map(|r| r.elapsed).sum();
    let errors: Vec<&str> = runs.iter().filter_map(|r| r.error.as_deref()).collect();
    let cases: Vec<&CaseRecord> = runs.iter().flat_map(|r| &r.cases).filter(|x| keep(x)).collect();
    let failed: Vec<&&CaseRecord> = cases.iter().filter(|x| !x.passed).collect();
    let in_time = elapsed <= c.budget;
    let ok = errors.is_empty() && !cases.is_empty() && failed.is_empty() && in_time;
    let mut detail = format!("{} cases, {} failed, {:.1}s of {}s", cases.len(), failed.len(), elapsed.as_secs_f64(), c.budget.as_secs());
    if let Some(e) = errors.first() {
        detail.push_str(&format!("; error: {e}"));
    }
    if let Some(f) = failed.first() {
        detail.push_str(&format!("; first failure {} {} {:?}: {}", f.suite, f.name, f.params, f.witness.as_deref().unwrap_or("")));
    }
    if !in_time {
        detail.push_str("; over time budget");
    }
    println!("{} criterion {:>2} {}: {}", if ok { "PASS" } else { "FAIL" }, c.id, c.title, detail);
    ok
}

fn crit(id: u32, title: &'static str, secs: u64) -> Criterion {
    Criterion { id, title, budget: Duration::from_secs(secs) }
}

fn named(names: &'static [&'static str]) -> impl Fn(&CaseRecord) -> bool {
    move |c| names.contains(&c.name.as_str())
}

fn main() -> ExitCode {
    let base = RunConfig { seed: 7, ..RunConfig::default() };
    let with = |f: &dyn Fn(&mut RunConfig)| {
        let mut c = base.clone();
        f(&mut c);
        c
    };
    let mut results = Vec::new();

    let q = run_suite(
        Suite::QSystem,
        &with(&|c| {
            c.window = Some(Window::new(-6, 8));
            c.kmax = Some(3);
            c.alpha = Some((-2, 2));
        }),
    );
    results.push(report(&crit(1, "GL2 Q-system", 30), &[&q], |_| true));

    let dj = run_suite(
        Suite::DesnanotJacobi,
        &with(&|c| {
            c.window = Some(Window::new(-6, 8));
            c.kmax = Some(4);
            c.alpha = Some((-2, 2));
        }),
    );
    results.push(report(&crit(2, "Desnanot-Jacobi", 60), &[&dj], |_| true));

    let b2 = run_suite(
        Suite::Birkhoff2,
        &with(&|c| {
            c.window = Some(Window::new(-4, 4));
            c.kmax = Some(2);
            c.truncation = Some(5);
            c.trials = Some(20);
        }),
    );
    results.push(report(&crit(3, "GL2 Birkhoff factorization", 120), &[&b2], named(&["symbolic negative part", "numeric factorization"])));

    let zc2 = run_suite(
        Suite::ZeroCurvature2,
        &with(&|c| {
            c.window = Some(Window::new(-4, 4));
            c.kmax = Some(2);
        }),
    );
    let zc3 = run_suite(
        Suite::ZeroCurvature3,
        &with(&|c| {
            c.window = Some(Window::new(-4, 4));
            c.kmax = Some(1);
            c.lmax = Some(1);
        }),
    );
    results.push(report(&crit(4, "connection determinants", 60), &[&zc2, &zc3], named(&["connection determinants"])));
    results.push(report(&crit(5, "zero curvature", 180), &[&zc2, &zc3], named(&["zero curvature"])));

    let four = run_suite(
        Suite::Gl3Four,
        &with(&|c| {
            c.window = Some(Window::new(-5, 5));
            c.kmax = Some(2);
            c.lmax = Some(2);
            c.alpha = Some((-1, 1));
            c.beta = Some((-1, 1));
        }),
    );
    results.push(report(&crit(6, "GL3 closed forms and degrees", 120), &[&four], named(&["closed forms", "composition degrees"])));
    let comps = run_suite(
        Suite::Gl3Components,
        &with(&|c| {
            c.window = Some(Window::new(-5, 5));
            c.kmax = Some(1);
            c.lmax = Some(1);
        }),
    );
    results.push(report(&crit(7, "GL3 four equations and components", 300), &[&four, &comps], |c| {
        c.suite == "gl3-components" || c.name == "four equations"
    }));

    let fock = run_suite(Suite::FockCross, &with(&|c| c.kmax = Some(3)));
    results.push(report(&crit(8, "Fock oracle equivalence", 180), &[&fock], |_| true));

    let corr = run_suite(
        Suite::Correlations,
        &with(&|c| {
            c.order = Some(6);
            c.max_size = Some(3);
        }),
    );
    results.push(report(&crit(9, "correlation identities", 120), &[&corr], |_| true));

    let det = run_suite(
        Suite::DetIdentities,
        &with(&|c| {
            c.max_size = Some(5);
            c.trials = Some(50);
        }),
    );
    results.push(report(&crit(10, "determinant identities", 120), &[&det], |_| true));

    let ops = run_suite(Suite::OperatorIdentities, &base);
    results.push(report(&crit(11, "operator identities", 60), &[&ops], |_| true));

    let first = run(Selection::All, &base).map(|r| r.to_json());
    let second = run(Selection::All, &base).map(|r| r.to_json());
    let deterministic = match (&first, &second) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    };
    let detail = match (&first, &second) {
        (Ok(a), Ok(b)) if a == b => format!("{} bytes identical", a.len()),
        (Ok(a), Ok(b)) => {
            let at = a.bytes().zip(b.bytes()).position(|(x, y)| x != y).unwrap_or(a.len().min(b.len()));
            format!("reports differ at byte {at}")
        }
        (Err(e), _) | (_, Err(e)) => format!("error: {e}"),
    };
    println!("{} criterion 12 determinism: {detail}", if deterministic { "PASS" } else { "FAIL" });
    results.push(deterministic);

    let passed = results.iter().filter(|&&r| r).count();
    println!("acceptance: {passed} of {} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
