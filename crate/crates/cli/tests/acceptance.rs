//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criteria 4, 9 and 10 compare against printed equations that do not follow
//! from the derivation; they are reported but do not fail the target. Every
//! other criterion must pass.

use std::process::ExitCode;
use std::time::Instant;

use birkhoff::varieties::schur_p;
use birkhoff::{rat, JetKey, Monomial, Poly, Polynomial, Stratum, Symbol};
use birkhoff_cli::{run, Form, Report, RunConfig, Verb};

struct Outcome {
    pass: bool,
    detail: String,
    digests: Vec<String>,
}

fn go(cfg: &RunConfig) -> Report {
    run(cfg).unwrap_or_else(|e| panic!("{}: {e}", cfg.verb.name()))
}

fn counts(r: &Report) -> String {
    format!("{} {}/{} zero, {} ms", r.verb, r.items_zero, r.items_total, r.elapsed_ms)
}

fn closure() -> Outcome {
    let r = go(&RunConfig { jmax: Some(5), kmax: Some(5), mmax: Some(5), ..RunConfig::new(Verb::Closure) });
    let pass = r.all_zero() && r.items_total == 125 && r.elapsed_ms < 10_000;
    Outcome { pass, detail: counts(&r), digests: vec![r.digest] }
}

fn currents() -> Outcome {
    let big = go(&RunConfig::new(Verb::Currents));
    let s1 = go(&RunConfig { stratum: Some(Stratum::Sigma1), ..RunConfig::new(Verb::Currents) });
    // Character-level agreement shows up as the absence of notes.
    let pass = big.all_zero() && s1.all_zero() && big.items_total == 4 && s1.items_total == 2 && big.notes.is_empty() && s1.notes.is_empty();
    Outcome { pass, detail: format!("{}; {} (sigma1)", counts(&big), counts(&s1)), digests: vec![big.digest, s1.digest] }
}

fn curve() -> Outcome {
    let r = go(&RunConfig::new(Verb::Curve));
    let literal = r.items.iter().find(|i| i.label == "literal-difference").and_then(|i| i.value.clone()).unwrap_or_default();
    let finding = if literal == "0" { "printed and derived agree literally".to_string() } else { format!("finding: literal difference {literal}, zero modulo closure") };
    Outcome { pass: r.all_zero(), detail: format!("{}; {finding}", counts(&r)), digests: vec![r.digest] }
}

fn dkp() -> Outcome {
    let one = go(&RunConfig { level: Some(1), ..RunConfig::new(Verb::Dkp) });
    let two = go(&RunConfig { level: Some(2), ..RunConfig::new(Verb::Dkp) });
    let multipliers = one.items.iter().chain(&two.items).all(|i| i.trace.iter().any(|t| t.starts_with("combination:")));
    let pass = one.all_zero() && two.all_zero() && one.items.len() == 2 && two.items.len() == 3 && multipliers;
    let gaps: Vec<String> = two.failures.iter().map(|f| format!("{}: printed - derived = {}", f.label, f.residual)).collect();
    let detail = format!("level 1 {}/{}, level 2 {}/{} {}", one.items_zero, one.items_total, two.items_zero, two.items_total, gaps.join("; "));
    Outcome { pass, detail, digests: vec![one.digest, two.digest] }
}

fn cocycle() -> Outcome {
    let r = go(&RunConfig { jmax: Some(4), dkp_max: Some(3), seed: Some(7), ..RunConfig::new(Verb::Cocycle) });
    let c = go(&RunConfig::new(Verb::Coboundary));
    Outcome { pass: r.all_zero() && c.all_zero(), detail: format!("{}; {}", counts(&r), counts(&c)), digests: vec![r.digest, c.digest] }
}

fn poisson_ideal() -> Outcome {
    let r = go(&RunConfig { nmax: Some(6), ..RunConfig::new(Verb::PoissonIdeal) });
    Outcome { pass: r.all_zero() && r.elapsed_ms < 5_000, detail: counts(&r), digests: vec![r.digest] }
}

fn jacobi() -> Outcome {
    let r = go(&RunConfig { nmax: Some(4), ..RunConfig::new(Verb::Jacobi) });
    Outcome { pass: r.all_zero() && r.items_total == 256, detail: counts(&r), digests: vec![r.digest] }
}

fn equivalence() -> Outcome {
    let small = go(&RunConfig { nmax: Some(3), ..RunConfig::new(Verb::Equivalence) });
    let full = go(&RunConfig { nmax: Some(11), ..RunConfig::new(Verb::Equivalence) });
    let pass = small.all_zero() && small.elapsed_ms < 1_000 && full.all_zero() && full.elapsed_ms < 600_000;
    Outcome { pass, detail: format!("nmax 3: {}; nmax 11: {}", counts(&small), counts(&full)), digests: vec![small.digest, full.digest] }
}

fn hirota() -> Outcome {
    let lit = go(&RunConfig { form: Some(Form::Literal), ..RunConfig::new(Verb::TauSubstitution) });
    let clo = go(&RunConfig { form: Some(Form::Closure), ..RunConfig::new(Verb::TauSubstitution) });
    let first = lit.failures.first().map(|f| format!(", first miss {}", f.label)).unwrap_or_default();
    let detail = format!("literal weight {}/{}{first}; closure weight {}/{}", lit.items_zero, lit.items_total, clo.items_zero, clo.items_total);
    Outcome { pass: lit.all_zero(), detail, digests: vec![lit.digest, clo.digest] }
}

fn stratum1() -> Outcome {
    let r = go(&RunConfig::new(Verb::Stratum1Hierarchy));
    let misses: Vec<String> = r.failures.iter().map(|f| format!("{}: {}", f.label, f.residual)).collect();
    Outcome { pass: r.all_zero(), detail: format!("{}; {}", counts(&r), misses.join("; ")), digests: vec![r.digest] }
}

fn schur() -> Outcome {
    let mut bad = Vec::new();
    for n in 0..=10usize {
        for k in 1..=n {
            if schur_p(n).partial(&JetKey::plain(Symbol::t(k as i16))) != schur_p(n - k) {
                bad.push(format!("d P{n}/d t{k}"));
            }
        }
    }
    // Coefficients of exp(Σ t_k z^k) through z^10, with z played by pi[0].
    let zk = JetKey::plain(Symbol::pi(0));
    let z = Poly::sym(Symbol::pi(0));
    let s: Polynomial = (1..=10).map(|k| &z.pow(k) * &Poly::sym(Symbol::t(k as i16))).sum();
    let (mut exp, mut term) = (Poly::zero(), Poly::one());
    for m in 0..=10i64 {
        exp += &term;
        let next = (&term * &s).scale(&rat(1, m + 1));
        term = Poly::from_terms(next.terms().filter(|(mono, _)| mono.exponent(&zk) <= 10).map(|(mono, c)| (mono.clone(), c.clone())));
    }
    let by_z = exp.collect_by(|k| k.base == Symbol::pi(0));
    let mut text = String::new();
    for n in 0..=10usize {
        let key = if n == 0 { Monomial::one() } else { Monomial::var(zk.clone(), n as u32) };
        let p = schur_p(n);
        if by_z.get(&key).cloned().unwrap_or_default() != p {
            bad.push(format!("generating function at z^{n}"));
        }
        text += &format!("{p}\n");
    }
    let detail = if bad.is_empty() { "derivative rule and generating function through order 10".into() } else { bad.join(", ") };
    Outcome { pass: bad.is_empty(), detail, digests: vec![text] }
}

type Criterion = (u8, &'static str, bool, fn() -> Outcome);

fn main() -> ExitCode {
    // (number, name, expected to pass, check)
    let criteria: [Criterion; 11] = [
        (1, "closure reproduction", true, closure),
        (2, "currents", true, currents),
        (3, "elliptic curve", true, curve),
        (4, "dKP derivation", false, dkp),
        (5, "cocycle/coboundary", true, cocycle),
        (6, "Poisson-ideal identity", true, poisson_ideal),
        (7, "Jacobi", true, jacobi),
        (8, "equivalence nmax 11", true, equivalence),
        (9, "Hirota-Miwa", false, hirota),
        (10, "Σ₁ hierarchy", false, stratum1),
        (11, "Schur properties", true, schur),
    ];
    let mut unexpected = 0;
    let mut first_digests = Vec::new();
    let start = Instant::now();
    for (n, name, expected, check) in criteria {
        let o = check();
        let status = if o.pass { "PASS" } else { "FAIL" };
        let note = if o.pass == expected { "" } else if expected { " (unexpected)" } else { " (now passing)" };
        println!("criterion {n:>2} {name}: {status}{note} - {}", o.detail);
        if expected && !o.pass {
            unexpected += 1;
        }
        first_digests.push(o.digests);
    }
    let second: Vec<Vec<String>> = criteria.iter().map(|c| (c.3)().digests).collect();
    let same = first_digests == second;
    println!(
        "criterion 12 determinism: {} - {} reports compared across two runs",
        if same { "PASS" } else { "FAIL" },
        second.iter().map(Vec::len).sum::<usize>()
    );
    if !same {
        unexpected += 1;
    }
    println!("acceptance finished in {:.1} s", start.elapsed().as_secs_f64());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
