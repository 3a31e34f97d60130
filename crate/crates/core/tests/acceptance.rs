//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use wordperiod::cli::{batch, load_configs, ExperimentConfig};
use wordperiod::factorization::alpha_chain;
use wordperiod::periodicity::{
    critical_positions, h_of, local_period_oracle, period, profile, shortest_border,
};
use wordperiod::verify::{
    check_alpha_lemma, check_big, check_big_sharpness, check_block_position_complexity,
    check_cft_exhaustive, check_factor_monotonicity, check_h_superadditivity, check_lemma_b_step,
    check_lemma_h_alpha, check_letter_formula, check_occurrence_rigidity, check_oracle_equivalence,
    check_plus, check_return_time_bound, check_toeplitz, divergence_report, ExponentSource, Status,
    VerificationReport, DEFAULT_SEED,
};
use wordperiod::words::{
    nested_formula_word, nested_toeplitz, nested_word, Alphabet, Descriptor, FiniteWord,
    NestedParams, RepetitionBound, Tail, WordSource,
};
use wordperiod::Rational;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn sequences() -> Vec<NestedParams> {
    [vec![2, 2, 2], vec![2, 3, 4], vec![3, 3, 3]]
        .into_iter()
        .map(|n| NestedParams::new(n, Tail::Repeat).unwrap())
        .collect()
}

fn source(d: &str) -> WordSource {
    d.parse::<Descriptor>().unwrap().source().unwrap()
}

fn expect(report: &VerificationReport, wanted: &[Status]) -> Result<(), String> {
    if wanted.contains(&report.status) {
        Ok(())
    } else {
        Err(format!(
            "{} [{}] is {} ({} of {} instances failed; counterexample {:?}; notes {:?})",
            report.claim,
            report
                .parameters
                .iter()
                .map(|(k, v)| format!("{}={}", k, v))
                .collect::<Vec<_>>()
                .join(" "),
            report.status,
            report.failures,
            report.instances,
            report.counterexample,
            report.notes
        ))
    }
}

fn big_reproduction() -> Outcome {
    let mut checked = 0;
    for params in sequences() {
        let r = check_big(&params, 3, None);
        expect(&r, &[Status::Pass])?;
        let r1 = format!("{}a", "b".repeat(params.n(1)));
        let wanted = format!("j=1: d_j=1 p={} r_j={}", params.n(1) + 1, r1);
        if r.notes.first() != Some(&wanted) {
            return Err(format!(
                "{}: j=1 note {:?}, wanted {:?}",
                params,
                r.notes.first(),
                wanted
            ));
        }
        checked += r.instances;
    }
    Ok(format!(
        "{} exact comparisons, r_1 = b^n_1 a verbatim",
        checked
    ))
}

fn sharpness() -> Outcome {
    for params in sequences() {
        expect(&check_big_sharpness(&params, 3), &[Status::Pass])?;
    }
    Ok("cap-exceeded one below the closed form for j = 1..3".into())
}

fn triple_equivalence() -> Outcome {
    const N: usize = 10_000;
    for params in sequences() {
        expect(&check_letter_formula(&params, N), &[Status::Pass])?;
        expect(&check_toeplitz(&params, N), &[Status::Pass])?;
        let recursion = nested_word(&params).prefix(N);
        let formula = nested_formula_word(&params).prefix(N);
        let toeplitz = nested_toeplitz(&params, params.depth_for(N)).prefix(N);
        if recursion != formula || recursion != toeplitz {
            return Err(format!("{}: prefixes of length {} differ", params, N));
        }
    }
    Ok(format!("3 sequences agree letterwise on {} letters", N))
}

fn oracle_equivalence() -> Outcome {
    let r = check_oracle_equivalence(2, 12);
    expect(&r, &[Status::Pass])?;
    Ok(format!("{} positions", r.instances))
}

fn cft() -> Outcome {
    let r = check_cft_exhaustive(2, 12);
    expect(&r, &[Status::Pass])?;
    Ok(format!("{} words", r.instances))
}

fn known_profile() -> Outcome {
    let w = FiniteWord::binary("abaab").unwrap();
    let p = profile(&w);
    let lp = p.finite_values().unwrap();
    let chars: Vec<char> = "abaab".chars().collect();
    let oracle: Vec<usize> = (1..=5)
        .map(|i| local_period_oracle(&chars, i, &['a', 'b']).unwrap())
        .collect();
    let border = shortest_border(w.letters())
        .unwrap()
        .map(|b| Alphabet::binary().render(b));
    let got = (
        lp.clone(),
        h_of(w.letters()).unwrap(),
        period(w.letters()).unwrap(),
        critical_positions(w.letters()).unwrap(),
        border,
    );
    let wanted = (
        vec![2, 3, 1, 3, 1],
        Rational::from(2),
        3,
        vec![2, 4],
        Some("ab".to_string()),
    );
    if got != wanted || oracle != lp {
        return Err(format!("got {:?}, oracle {:?}", got, oracle));
    }
    Ok("[2,3,1,3,1], h = 2, p = 3, critical {2,4}, border ab".into())
}

fn inequalities() -> Outcome {
    let a = check_factor_monotonicity(10_000, DEFAULT_SEED);
    expect(&a, &[Status::Pass])?;
    let b = check_h_superadditivity(10_000, DEFAULT_SEED);
    expect(&b, &[Status::Pass])?;
    Ok(format!(
        "{} + {} trials, seed {:#x}",
        a.instances, b.instances, DEFAULT_SEED
    ))
}

fn alpha_on_fibonacci() -> Outcome {
    let fib = source("fibonacci");
    let chain =
        alpha_chain(&fib, 2, 10_000, Some(RepetitionBound(3))).map_err(|e| e.to_string())?;
    let ab = Alphabet::binary();
    let got: Vec<(String, usize)> = chain
        .entries
        .iter()
        .map(|e| (ab.render(&e.alpha), e.exponent))
        .collect();
    if ab.render(&chain.entries[0].alpha) != "a"
        || chain.entries[0].exponent != 2
        || ab.render(&chain.entries[1].alpha) != "aab"
    {
        return Err(format!("chain {:?}", got));
    }
    let least = fib.with_prefix(10_000, |t| ab.render(t.windows(3).min().unwrap()));
    if least != "aab" {
        return Err(format!("least factor of length 3 is {}", least));
    }
    let r = check_alpha_lemma(&fib, 2, 10_000, Some(RepetitionBound(3)));
    expect(&r, &[Status::WindowedPass])?;
    Ok(format!(
        "alpha_1 = a, e_1 = 2, alpha_2 = aab; {} checks",
        r.instances
    ))
}

fn lemma_h() -> Outcome {
    let fib = source("fibonacci");
    let mut summary = Vec::new();
    for k in [1, 2] {
        let r = check_lemma_h_alpha(&fib, k, None, 10_000, 0, Some(RepetitionBound(3)));
        expect(&r, &[Status::Pass])?;
        summary.push(format!(
            "k={} k'={} ({} checks)",
            k, r.parameters["k'"], r.instances
        ));
    }
    Ok(summary.join(", "))
}

fn lemma_b() -> Outcome {
    let tm = source("thue-morse");
    let window = 10_000 / 16 - 1;
    let r = check_lemma_b_step(&tm, 1, 4, window, ExponentSource::Certified(2));
    expect(&r, &[Status::WindowedPass])?;
    Ok(format!("{} blocks, {} checks", window, r.instances))
}

fn structure() -> Outcome {
    for params in sequences() {
        expect(&check_plus(&params, 4), &[Status::Pass])?;
        expect(
            &check_occurrence_rigidity(&params, 3, 10_000),
            &[Status::WindowedPass],
        )?;
        expect(
            &check_return_time_bound(&params, 2, 10_000, None),
            &[Status::WindowedPass],
        )?;
    }
    Ok("plus (i <= 4), rigidity (i <= 3), return time (i <= 2)".into())
}

fn divergence() -> Outcome {
    let checkpoints: Vec<usize> = (4..=12).map(|k| 1 << k).collect();
    let mut out = Vec::new();
    for word in ["fibonacci", "thue-morse"] {
        let d = divergence_report(&source(word), &checkpoints, 8192, 64);
        expect(&d.report, &[Status::WindowedPass])?;
        out.push(format!(
            "{} h(4096) = {}",
            word,
            d.rows.last().unwrap().h.unwrap()
        ));
    }
    let params = NestedParams::constant(2).unwrap();
    let r = check_block_position_complexity(&params, 3, None);
    expect(&r, &[Status::WindowedPass])?;
    Ok(out.join(", "))
}

fn run_suite(dir: &Path, configs: &[ExperimentConfig]) -> BTreeMap<String, Vec<u8>> {
    let configs: Vec<ExperimentConfig> = configs
        .iter()
        .map(|c| {
            let mut c = c.clone();
            let name = c.output.as_ref().unwrap().file_name().unwrap().to_owned();
            c.output = Some(dir.join(name));
            c
        })
        .collect();
    let summary = batch(&configs);
    let mut files = BTreeMap::new();
    files.insert("summary".to_string(), summary.render().into_bytes());
    for c in &configs {
        let path = c.output.as_ref().unwrap();
        let bytes = fs::read(path).unwrap_or_default();
        files.insert(
            path.file_name().unwrap().to_string_lossy().into_owned(),
            bytes,
        );
    }
    files
}

fn determinism() -> Outcome {
    let suite = Path::new(env!("CARGO_MANIFEST_DIR")).join("suites/acceptance.json");
    let configs = load_configs(&suite).map_err(|e| e.to_string())?;
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    let first = run_suite(a.path(), &configs);
    let second = run_suite(b.path(), &configs);
    if let Some(name) = first.keys().find(|k| first[*k] != second[*k]) {
        return Err(format!("{} differs between runs", name));
    }
    if let Some((name, _)) = first.iter().find(|(_, v)| v.is_empty()) {
        return Err(format!("{} was not written", name));
    }
    Ok(format!("{} artifacts byte-identical", first.len()))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("big reproduction", big_reproduction),
        ("sharpness probe", sharpness),
        ("formula/Toeplitz/recursion equivalence", triple_equivalence),
        ("oracle equivalence", oracle_equivalence),
        ("critical factorization exhaustive", cft),
        ("known profile abaab", known_profile),
        ("factor and hcka inequalities", inequalities),
        ("alpha chain on Fibonacci", alpha_on_fibonacci),
        ("lemma h per-instance chain", lemma_h),
        ("lemma b per-instance chain", lemma_b),
        ("nested-word structural claims", structure),
        ("divergence trends", divergence),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {} ({:.1}s): {}", k + 1, name, secs, detail),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {} ({:.1}s): {}", k + 1, name, secs, why);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
