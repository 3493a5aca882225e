//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Tolerances and sizes are fixed below.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use dsigma_core::logic::{
    archimedean, axiom_suite, check_equation, check_in, check_quasi_direct, check_quasi_in, compile_quasi,
    derived_lemmas, distributivity, premises_hold, random_quasi, CheckConfig, Reals, Verdict,
};
use dsigma_core::models::{
    check_homomorphism, check_sigma_continuity, compare_enrichments, normalize_unit, FiniteIndexSet, IdealOfSubsets,
    LatticeMap, ModelElement, QuotientModel,
};
use dsigma_core::rational::{self, frac, int, Q};
use dsigma_core::sample::{var_names, Sampler};
use dsigma_core::semantics::{eval, stabilization_index, Valuation};
use dsigma_core::term::{Family, IndexExpr, QuasiEquation, Signature, Term};

const SEED: u64 = 20_240_601;
const AXIOM_TRIALS: u64 = 10_000;
const AXIOM_TIME_LIMIT: Duration = Duration::from_secs(30);
const MODEL_AXIOM_TRIALS: u64 = 500;
const ORACLE_FAMILIES: u64 = 1_000;
const ENRICHMENT_TRIALS: u64 = 1_000;
const RANDOM_QUASI: u64 = 200;
const QUASI_TRIALS: u64 = 2_000;
const POINTWISE_TUPLES: u64 = 5_000;
const PIPELINE_PAIRS: u64 = 200;
const LEMMA_TRIALS: u64 = 10_000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 axiom validity in R", axioms_in_reals),
        ("2 axiom validity in models", axioms_in_models),
        ("3 supremum oracle equivalence", supremum_oracle),
        ("4 quotient-of-power equality", quotient_of_power),
        ("5 quasi-compiler equivalence", compiler_equivalence),
        ("6 pipeline correctness", pipeline),
        ("7 derived-lemma regression", derived),
        ("8 determinism", determinism),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let started = Instant::now();
        let (status, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{status} criterion {name}: {detail} [{:.1}s]", started.elapsed().as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criterion/criteria failed");
        std::process::exit(1);
    }
}

fn ground_sets(max: usize) -> impl Iterator<Item = FiniteIndexSet> {
    (0..=max).map(FiniteIndexSet::range)
}

fn describe<E: std::fmt::Debug>(v: &Verdict<E>) -> String {
    match v {
        Verdict::Counterexample { trial, valuation, lhs, rhs } => {
            format!("counterexample at trial {trial}: {valuation:?}, lhs {lhs:?}, rhs {rhs:?}")
        }
        other => other.kind().to_string(),
    }
}

fn axioms_in_reals() -> Outcome {
    let started = Instant::now();
    let mut count = 0;
    for sig in [Signature::Lg, Signature::Lgu, Signature::Rs, Signature::Rsu] {
        for ax in axiom_suite(sig).equations {
            let v = check_equation(&ax.equation, CheckConfig::new(AXIOM_TRIALS, SEED)).map_err(|e| e.to_string())?;
            if v.is_counterexample() {
                return Err(format!("{sig} {}: {}", ax.name, describe(&v)));
            }
            count += 1;
        }
    }
    let elapsed = started.elapsed();
    if elapsed >= AXIOM_TIME_LIMIT {
        return Err(format!("{count} equations passed but took {elapsed:?}, limit {AXIOM_TIME_LIMIT:?}"));
    }
    Ok(format!("{count} equations x {AXIOM_TRIALS} trials, 0 counterexamples, {:.1}s < 30s", elapsed.as_secs_f64()))
}

/// Enriched quotients with the all-ones unit and with a non-constant weak unit.
fn models_with_units(max: usize) -> Vec<(String, QuotientModel)> {
    let mut out = Vec::new();
    for ground in ground_sets(max) {
        for ideal in IdealOfSubsets::all(&ground) {
            let m = QuotientModel::new(&ground, &ideal, true);
            let unit = ModelElement((0..m.dim()).map(|j| frac(2 * j as i64 + 1, 2)).collect());
            let tag = format!("X={:?} I={}", ground.labels(), ideal);
            let other = m.clone().with_unit(unit.clone()).expect("positive entries give a weak unit");
            out.push((format!("{tag} unit=1"), m));
            out.push((format!("{tag} unit={}", unit.format()), other));
        }
    }
    out
}

fn axioms_in_models() -> Outcome {
    let suite = axiom_suite(Signature::Lgu);
    let models = models_with_units(3);
    for (tag, m) in &models {
        for ax in &suite.equations {
            let v = check_in(m, &ax.equation.lhs, &ax.equation.rhs, CheckConfig::new(MODEL_AXIOM_TRIALS, SEED))
                .map_err(|e| format!("{tag} {}: {e}", ax.name))?;
            if v.is_counterexample() {
                return Err(format!("{tag} {}: {}", ax.name, describe(&v)));
            }
        }
    }
    Ok(format!(
        "{} equations in {} enriched models (|X| <= 3, every ideal, two units), {MODEL_AXIOM_TRIALS} trials each",
        suite.equations.len(),
        models.len()
    ))
}

/// `max_{n <= n_max} (f_n ∧ g)`, evaluating each index-free member directly.
fn truncation_oracle(bound: &Term, family: &Family, v: &Valuation, n_max: u64) -> Q {
    let g = eval(bound, v).expect("bound evaluates");
    (1..=n_max)
        .map(|n| rational::min(&eval(&family.member(n), v).expect("member evaluates"), &g))
        .max()
        .expect("n_max >= 1")
}

fn supremum_oracle() -> Outcome {
    let vars = var_names(3);
    let var_set: BTreeSet<String> = vars.iter().cloned().collect();
    let (mut ec, mut indexed) = (0, 0);
    for trial in 0..ORACLE_FAMILIES {
        let mut s = Sampler::new(SEED ^ 3, trial);
        let sig = if s.chance(0.5) { Signature::Rs } else { Signature::Lg };
        let t = s.csup(&vars, sig);
        let v = s.valuation(&var_set, trial);
        let Term::CSup(bound, family) = &t else { unreachable!() };
        match family.as_ref() {
            Family::EventuallyConstant { .. } => ec += 1,
            Family::Indexed(_) => indexed += 1,
            Family::DoubleIndexed { .. } => return Err("sampler produced a double family".into()),
        }
        let value = eval(&t, &v).map_err(|e| format!("{t}: {e}"))?;
        let n = stabilization_index(&t, &v).map_err(|e| e.to_string())?.expect("single-index family");
        let at_n = truncation_oracle(bound, family, &v, n.max(1));
        let beyond = truncation_oracle(bound, family, &v, 2 * n + 16);
        if at_n != value || beyond != value {
            return Err(format!(
                "{t} at {v:?}: eval {}, oracle {} at N={n}, {} at N={}",
                rational::format(&value),
                rational::format(&at_n),
                rational::format(&beyond),
                2 * n + 16
            ));
        }
    }
    // Capped families with positive slope: csup[g](n : (αn+β)·x + y) with x > 0.
    for trial in 0..ORACLE_FAMILIES {
        let mut s = Sampler::new(SEED ^ 5, trial);
        let x = loop {
            let q = s.nonneg_rational();
            if q > rational::zero() {
                break q;
            }
        };
        let (y, g) = (s.rational(), s.rational());
        let e = s.index_expr();
        let e = if e.alpha == 0 { IndexExpr::new(1, e.beta).expect("valid") } else { e };
        let t = Term::csup(Term::var("g"), Family::Indexed(Term::nat(e, Term::var("x")) + Term::var("y")));
        let v: Valuation =
            [("x", x), ("y", y), ("g", g.clone())].into_iter().map(|(k, q)| (k.to_string(), q)).collect();
        let value = eval(&t, &v).map_err(|e| e.to_string())?;
        if value != g {
            return Err(format!("{t} at {v:?}: eval {} but cap {}", rational::format(&value), rational::format(&g)));
        }
    }
    Ok(format!(
        "{ORACLE_FAMILIES} random families ({ec} eventually constant, {indexed} indexed) match the truncation oracle; \
         {ORACLE_FAMILIES} capped positive-slope families equal the cap"
    ))
}

fn quotient_of_power() -> Outcome {
    let mut pairs = 0;
    for ground in ground_sets(4) {
        for ideal in IdealOfSubsets::all(&ground) {
            if let dsigma_core::models::Check::Failed(d) = compare_enrichments(&ground, &ideal, ENRICHMENT_TRIALS, SEED)
            {
                return Err(format!("X={:?} I={ideal}: {} differs at trial {}", ground.labels(), d.term, d.trial));
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} (X, I) pairs with |X| <= 4, {ENRICHMENT_TRIALS} trials each, 0 discrepancies"))
}

fn verdicts_agree(qe: &QuasiEquation, config: CheckConfig) -> Result<(bool, bool), String> {
    let compiled = compile_quasi(qe).map_err(|e| e.to_string())?;
    let via_compiler = check_equation(&compiled, config).map_err(|e| e.to_string())?;
    let direct = check_quasi_direct(qe, config).map_err(|e| e.to_string())?;
    Ok((via_compiler.is_counterexample() == direct.verdict.is_counterexample(), direct.verdict.is_counterexample()))
}

fn compiler_equivalence() -> Outcome {
    let config = CheckConfig::new(QUASI_TRIALS, SEED);
    for (name, qe) in [("archimedean", archimedean()), ("distributivity", distributivity())] {
        let (agree, refuted) = verdicts_agree(&qe, config)?;
        if !agree || refuted {
            return Err(format!("{name}: agree {agree}, refuted {refuted}"));
        }
    }
    let vars = var_names(3);
    let var_set: BTreeSet<String> = vars.iter().cloned().collect();
    let mut refuted = 0;
    for i in 0..RANDOM_QUASI {
        let mut s = Sampler::new(SEED ^ 7, i);
        let sig = if s.chance(0.5) { Signature::Rs } else { Signature::Lg };
        let qe = random_quasi(&mut s, &vars, sig);
        let (agree, r) = verdicts_agree(&qe, config)?;
        if !agree {
            return Err(format!("compiled and direct verdicts differ on {qe}"));
        }
        refuted += r as u64;
    }
    // Pointwise: the compiled equation holds at v iff (premises fail or the conclusion holds).
    let (mut held_equal, mut held_unequal, mut failed) = (0u64, 0u64, 0u64);
    let per_quasi = 25;
    for i in 0..POINTWISE_TUPLES {
        let mut s = Sampler::new(SEED ^ 11, i / per_quasi);
        let sig = if s.chance(0.5) { Signature::Rs } else { Signature::Lg };
        let qe = random_quasi(&mut s, &vars, sig);
        let v = Sampler::new(SEED ^ 13, i).valuation(&var_set, i % per_quasi);
        let compiled = compile_quasi(&qe).map_err(|e| e.to_string())?;
        let holds = eval(&compiled.lhs, &v).map_err(|e| e.to_string())?
            == eval(&compiled.rhs, &v).map_err(|e| e.to_string())?;
        let premises = premises_hold(&Reals, &qe, &v).map_err(|e| e.to_string())?;
        let conclusion = eval(&qe.conclusion.0, &v).map_err(|e| e.to_string())?
            == eval(&qe.conclusion.1, &v).map_err(|e| e.to_string())?;
        if holds != (!premises || conclusion) {
            return Err(format!("{qe} at {v:?}: compiled holds {holds}, premises {premises}, conclusion {conclusion}"));
        }
        match (premises, conclusion) {
            (true, true) => held_equal += 1,
            (true, false) => held_unequal += 1,
            (false, _) => failed += 1,
        }
    }
    if held_equal == 0 || held_unequal == 0 || failed == 0 {
        return Err(format!(
            "pointwise branches not all exercised: premises held with equal conclusion {held_equal}, \
             with unequal conclusion {held_unequal}, premises failed {failed}"
        ));
    }
    Ok(format!(
        "fixtures and {RANDOM_QUASI} random quasi-equations agree ({refuted} refuted by both); {POINTWISE_TUPLES} tuples: \
         premises held {} ({held_unequal} with unequal conclusion), premises failed {failed}",
        held_equal + held_unequal
    ))
}

/// Every tuple over `grid` on `n` coordinates.
fn grid_tuples(grid: &[Q], n: usize) -> Vec<Vec<Q>> {
    (0..n).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter().flat_map(|t| grid.iter().map(move |q| [t.clone(), vec![q.clone()]].concat())).collect()
    })
}

fn pipeline() -> Outcome {
    let grid = [frac(-1, 2), int(0), int(1)];
    let entries = [int(0), int(1), int(2), int(5)];
    let (mut cases, mut non_injective) = (0u64, 0u64);
    for y in ground_sets(5) {
        let fs = grid_tuples(&grid, y.len());
        for j in IdealOfSubsets::all(&y) {
            for u in grid_tuples(&entries, y.len()) {
                let tag =
                    || format!("Y={:?} J={j} u={:?}", y.labels(), u.iter().map(rational::format).collect::<Vec<_>>());
                let r = normalize_unit(&y, &j, &u).map_err(|e| format!("{}: {e}", tag()))?;
                let seed = SEED ^ cases;
                if !check_homomorphism(&r.phi, PIPELINE_PAIRS, seed).passed() {
                    return Err(format!("{}: phi is not a homomorphism", tag()));
                }
                if !check_sigma_continuity(&r.phi, PIPELINE_PAIRS, seed).passed() {
                    return Err(format!("{}: phi is not sigma-continuous", tag()));
                }
                if r.unit_image.values().iter().any(|q| *q != rational::one()) {
                    return Err(format!("{}: phi([u]) = {}", tag(), r.unit_image.format()));
                }
                let source = r.phi.source();
                let kernel_witness = fs.iter().find(|f| {
                    let class = source.class_of(f).expect("arity");
                    !class.is_zero() && r.phi.apply(&class).is_zero()
                });
                if kernel_witness.is_none() != r.injective {
                    return Err(format!(
                        "{}: injective {} but grid kernel witness {kernel_witness:?}",
                        tag(),
                        r.injective
                    ));
                }
                non_injective += !r.injective as u64;
                cases += 1;
            }
        }
    }
    Ok(format!(
        "{cases} (Y, J, u) cases with |Y| <= 5: homomorphism and sigma-continuity on {PIPELINE_PAIRS} samples, \
         unit image all ones, injectivity matches the grid kernel ({non_injective} non-injective)"
    ))
}

fn derived() -> Outcome {
    let lemmas = derived_lemmas();
    let config = CheckConfig::new(LEMMA_TRIALS, SEED);
    for l in &lemmas {
        let out = check_quasi_direct(&l.quasi, config).map_err(|e| format!("{}: {e}", l.name))?;
        if out.verdict.is_counterexample() {
            return Err(format!("{} in R: {}", l.name, describe(&out.verdict)));
        }
    }
    let mut checks = 0;
    for (tag, m) in models_with_units(3) {
        let unit_is_default = tag.ends_with("unit=1");
        for l in &lemmas {
            // Lemmas without the unit do not depend on it; check them once per quotient.
            if !unit_is_default && !l.quasi.signature.has_unit() {
                continue;
            }
            let out = check_quasi_in(&m, &l.quasi, config).map_err(|e| format!("{tag} {}: {e}", l.name))?;
            if out.verdict.is_counterexample() {
                return Err(format!("{tag} {}: {}", l.name, describe(&out.verdict)));
            }
            checks += 1;
        }
    }
    Ok(format!(
        "{} lemmas pass in R; {checks} lemma/model checks pass in enriched models with |X| <= 3, {LEMMA_TRIALS} trials each",
        lemmas.len()
    ))
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn run_bin(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_dsigma")).args(args).output().map_err(|e| e.to_string())?;
    if out.status.code() == Some(2) {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let model = fixture("model.json");
    let report = std::env::temp_dir().join(format!("dsigma-acceptance-{}.json", std::process::id()));
    let report = report.display().to_string();
    let failing =
        run_bin(&["check", "a /\\ b = a", "--model", &model, "--trials", "300", "--seed", "9", "--format", "json"])?;
    std::fs::write(&report, &failing).map_err(|e| e.to_string())?;
    let commands: Vec<Vec<&str>> = vec![
        vec!["check", "a /\\ (a \\/ b) = a", "--seed", "5", "--format", "json"],
        vec!["check", "a /\\ b = a", "--model", &model, "--trials", "300", "--seed", "9", "--format", "json"],
        vec!["check", "csup[g](n : n*x /\\ y) <= g", "--sig", "lg", "--format", "json"],
        vec!["axioms", "lgu", "--model", &model, "--trials", "300", "--seed", "1", "--format", "json"],
        vec!["compile", "a \\/ 0 = a; forall n : n*a <= b => a = 0", "--check", "--trials", "500", "--format", "json"],
        vec!["pipeline", &model, "--trials", "100", "--seed", "3", "--format", "json"],
        vec!["replay", &report, "--format", "json"],
    ];
    for args in &commands {
        let first = run_bin(args)?;
        let second = run_bin(args)?;
        if first != second {
            return Err(format!("{args:?} produced different output on a repeat"));
        }
        if first.is_empty() {
            return Err(format!("{args:?} produced no output"));
        }
    }
    let _ = std::fs::remove_file(&report);
    Ok(format!("{} commands produce byte-identical JSON on repeat", commands.len()))
}
