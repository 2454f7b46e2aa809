//! Acceptance suite: every criterion runs, prints one pass/fail line with
//! its timing, and the test fails if any criterion failed.

mod common;

use std::thread;
use std::time::{Duration, Instant};

use d0l::cli::{report_json, verify};
use d0l::engine::{analyze, periodic_factor_graph, Source};
use d0l::oracle::{class_powers_up_to, FactorWindow, OracleParams};
use d0l::pushy::{build_side_graph, cycles, Side};
use d0l::simplify::{injective_simplification, StepKind};
use d0l::{bounded_letters, compose, D0LSystem, Morphism, Word};

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn system(alphabet: &[&str], rules: &[(&str, &str)], axiom: &str) -> D0LSystem {
    D0LSystem::parse(alphabet, rules, axiom).expect("valid system")
}

fn rendered_images(m: &Morphism) -> Vec<String> {
    m.images().iter().map(|w| m.target().render(w)).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// `m` equals `expected` after renaming letter `i` of `m` to `perm[i]`.
fn equal_up_to_renaming(m: &Morphism, expected: &Morphism) -> bool {
    let n = m.source().len();
    if n != expected.source().len() {
        return false;
    }
    permutations(n).into_iter().any(|perm| {
        m.images().iter().enumerate().all(|(i, img)| {
            let renamed = Word::from_ids(img.ids().map(|j| perm[j]));
            expected.images()[perm[i]] == renamed
        })
    })
}

fn code_reduction_example() -> Outcome {
    let f = system(
        &["a", "b", "c", "d"],
        &[("a", "aca"), ("b", "badc"), ("c", "acab"), ("d", "adc")],
        "a",
    );
    let chain = injective_simplification(&f).map_err(|e| e.to_string())?;
    check(
        chain.steps().len() == 1,
        format!("{} steps", chain.steps().len()),
    )?;
    let step = &chain.steps()[0];
    check(
        step.kind() == StepKind::CodeReduction,
        "step is not a code reduction",
    )?;
    let g = chain.final_system().morphism();
    check(
        g.source().len() == 3,
        "simplified alphabet is not three letters",
    )?;
    check(g.is_injective(), "simplified morphism is not injective")?;
    let kh = compose(step.k(), step.h()).map_err(|e| e.to_string())?;
    check(&kh == f.morphism(), "k∘h differs from f")?;
    let expected = system(
        &["x", "y", "z"],
        &[("x", "xxyx"), ("y", "yz"), ("z", "xzxy")],
        "x",
    );
    check(
        equal_up_to_renaming(g, expected.morphism()),
        format!("simplified morphism {:?}", rendered_images(g)),
    )?;
    Ok(format!("g = {}", rendered_images(g).join(", ")))
}

fn expect_single_class(s: &D0LSystem, conjugates: &[&str], source: Source) -> Result<(), String> {
    let r = analyze(s).map_err(|e| e.to_string())?;
    check(r.pushy && r.repetitive, "expected pushy and repetitive")?;
    check(r.classes.len() == 1, format!("{} classes", r.classes.len()))?;
    let a = s.alphabet();
    let found: Vec<String> = r.classes[0]
        .conjugates()
        .iter()
        .map(|w| a.render(w))
        .collect();
    check(found == conjugates, format!("conjugates {found:?}"))?;
    check(r.classes[0].source() == source, "wrong source")
}

fn system_g() -> Outcome {
    let g = system(
        &["0", "1", "2"],
        &[("0", "012"), ("1", "2"), ("2", "1")],
        "0",
    );
    expect_single_class(&g, &["1122", "1221", "2112", "2211"], Source::Bounded)?;
    Ok("class [1122], bounded".into())
}

fn system_h() -> Outcome {
    let h = system(
        &["0", "1", "2", "3"],
        &[("0", "0123"), ("1", "2"), ("2", "1"), ("3", "123")],
        "0",
    );
    expect_single_class(&h, &["1122", "1221", "2112", "2211"], Source::Bounded)?;
    let classes = bounded_letters(h.morphism()).map_err(|e| e.to_string())?;
    let ul = build_side_graph(&h, &classes, Side::Left).map_err(|e| e.to_string())?;
    let a = h.alphabet();
    let found: Vec<(Vec<String>, Vec<String>)> = cycles(&ul)
        .iter()
        .map(|c| {
            (
                c.vertices
                    .iter()
                    .map(|&v| a.symbol(v).to_string())
                    .collect(),
                c.labels.iter().map(|u| a.render(u)).collect(),
            )
        })
        .collect();
    let expected = vec![
        (vec!["0".to_string()], vec!["ε".to_string()]),
        (vec!["3".to_string()], vec!["12".to_string()]),
    ];
    check(found == expected, format!("left cycles {found:?}"))?;
    Ok("class [1122], left cycles at 0 (ε) and 3 (12)".into())
}

fn max_class_power(s: &D0LSystem, depth: usize, max_len: usize) -> Result<usize, String> {
    let params = OracleParams::new(depth, max_len, 2).map_err(|e| e.to_string())?;
    let by_depth = class_powers_up_to(s, &params).map_err(|e| e.to_string())?;
    Ok(by_depth[depth].values().copied().max().unwrap_or(0))
}

fn thue_morse() -> Outcome {
    let tm = system(&["0", "1"], &[("0", "01"), ("1", "10")], "0");
    let r = analyze(&tm).map_err(|e| e.to_string())?;
    check(
        !r.pushy && !r.repetitive && r.classes.is_empty(),
        "expected no classes",
    )?;
    let m = max_class_power(&tm, 12, 8)?;
    check(m <= 2, format!("a power {m} occurs"))?;
    Ok(format!(
        "largest power for periods up to 8 in 12 iterates: {m}"
    ))
}

fn fibonacci() -> Outcome {
    let fib = system(&["0", "1"], &[("0", "01"), ("1", "0")], "0");
    let r = analyze(&fib).map_err(|e| e.to_string())?;
    check(!r.repetitive && r.classes.is_empty(), "expected no classes")?;
    let m = max_class_power(&fib, 15, 8)?;
    check(m < 4, format!("a power {m} occurs"))?;
    Ok(format!(
        "largest power for periods up to 8 in 15 iterates: {m}"
    ))
}

fn trivial_periodic() -> Outcome {
    let x = system(&["x"], &[("x", "xx")], "x");
    let r = analyze(&x).map_err(|e| e.to_string())?;
    check(r.classes.len() == 1, "x -> xx: expected one class")?;
    check(
        x.alphabet().render(r.classes[0].representative()) == "x",
        "x -> xx: wrong class",
    )?;
    check(
        r.classes[0].source() == Source::Unbounded,
        "x -> xx: wrong source",
    )?;

    let ab = system(&["a", "b"], &[("a", "ab"), ("b", "ab")], "a");
    let r = analyze(&ab).map_err(|e| e.to_string())?;
    let kinds: Vec<StepKind> = r.chain.steps().iter().map(|s| s.kind()).collect();
    check(
        kinds == [StepKind::DuplicateMerge],
        format!("steps {kinds:?}"),
    )?;
    let reps: Vec<String> = r
        .classes
        .iter()
        .map(|c| ab.alphabet().render(c.representative()))
        .collect();
    check(reps == ["ab"], format!("classes {reps:?}"))?;
    Ok("[x] unbounded; [ab] after one merge".into())
}

pub const CORPUS_SIZE: usize = 600;
pub const CORPUS_SEED: u64 = 0x00d0_1a11;

/// Oracle settings for the corpus: periods up to 6, a factor window of
/// 16·6 = 96 letters, and iterates up to depth 12 within the length cap.
fn corpus_params() -> OracleParams {
    OracleParams {
        depth: 12,
        max_len: 6,
        power: 16,
        ..Default::default()
    }
}

/// Every check of the corpus criterion on one system.
fn corpus_case(s: &D0LSystem) -> Result<(), String> {
    let r = analyze(s).map_err(|e| format!("analyze: {e}"))?;

    let v = verify(&r, &corpus_params()).map_err(|e| format!("oracle: {e}"))?;
    if !v.agrees() {
        let a = s.alphabet();
        let list = |ws: &[Word]| ws.iter().map(|w| a.render(w)).collect::<Vec<_>>();
        return Err(format!(
            "oracle disagreement: unconfirmed {:?}, missing {:?}, not growing {:?}",
            list(&v.unconfirmed),
            list(&v.missing),
            list(&v.not_growing)
        ));
    }

    for c in &r.classes {
        let v = c.representative();
        if v.len() > corpus_params().max_len {
            let window = FactorWindow::new(s, 6 * v.len()).map_err(|e| e.to_string())?;
            check(
                window.contains(&v.pow(6)),
                format!("no sixth power of {}", s.alphabet().render(v)),
            )?;
        }
    }

    let simulated = common::simulated_bounded(s.morphism(), 100);
    check(
        simulated == r.classification.bounded,
        "bounded letters differ from simulation",
    )?;

    for (i, step) in r.chain.steps().iter().enumerate() {
        let f = r.chain.systems()[i].morphism();
        let kh = compose(step.k(), step.h()).map_err(|e| e.to_string())?;
        check(
            &kh == f,
            format!("step {}: k∘h differs from its input", i + 1),
        )?;
    }

    let graph = periodic_factor_graph(&r).map_err(|e| format!("graph: {e}"))?;
    let n = graph.vertices().len();
    let mut indegree = vec![0; n];
    for i in 0..n {
        indegree[graph.successor(i)] += 1;
    }
    check(
        indegree.iter().all(|&d| d == 1),
        "graph of periodic factors is not 1-regular",
    )
}

fn in_parallel<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = thread::available_parallelism()
        .map_or(4, |n| n.get())
        .min(items.len().max(1));
    let chunk = items.len().div_ceil(workers).max(1);
    thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| scope.spawn(|| part.iter().map(&f).collect::<Vec<R>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

fn corpus_properties(corpus: &[D0LSystem]) -> Outcome {
    let erasing = corpus.iter().filter(|s| s.morphism().is_erasing()).count();
    let non_injective = corpus
        .iter()
        .filter(|s| !s.morphism().is_injective())
        .count();
    check(
        erasing > 0 && non_injective > 0,
        "corpus lacks erasing or non-injective systems",
    )?;

    let failures: Vec<String> = in_parallel(corpus, corpus_case)
        .into_iter()
        .zip(corpus)
        .enumerate()
        .filter_map(|(i, (res, s))| {
            res.err()
                .map(|e| format!("#{i} {}: {e}", common::describe(s)))
        })
        .collect();
    if !failures.is_empty() {
        return Err(format!(
            "{} failures:\n    {}",
            failures.len(),
            failures.join("\n    ")
        ));
    }
    let repetitive = in_parallel(corpus, |s| {
        analyze(s).map(|r| r.repetitive).unwrap_or(false)
    })
    .into_iter()
    .filter(|&b| b)
    .count();
    Ok(format!(
        "{} systems ({erasing} erasing, {non_injective} non-injective, {repetitive} repetitive)",
        corpus.len()
    ))
}

fn determinism(corpus: &[D0LSystem]) -> Outcome {
    let diffs: Vec<usize> = in_parallel(corpus, |s| {
        let first = analyze(s)
            .map(|r| report_json(&r))
            .map_err(|e| e.to_string());
        let second = analyze(s)
            .map(|r| report_json(&r))
            .map_err(|e| e.to_string());
        first == second
    })
    .into_iter()
    .enumerate()
    .filter(|(_, same)| !same)
    .map(|(i, _)| i)
    .collect();
    check(
        diffs.is_empty(),
        format!("reports differ for systems {diffs:?}"),
    )?;
    Ok(format!("{} systems, identical JSON", corpus.len()))
}

struct Criterion {
    number: usize,
    name: &'static str,
    limit: Duration,
}

#[test]
fn acceptance() {
    let corpus = common::corpus(CORPUS_SIZE, CORPUS_SEED);
    let criteria: Vec<(Criterion, Box<dyn Fn() -> Outcome + '_>)> = vec![
        (
            Criterion {
                number: 1,
                name: "code-reduction simplification",
                limit: Duration::from_secs(1),
            },
            Box::new(code_reduction_example),
        ),
        (
            Criterion {
                number: 2,
                name: "system G",
                limit: Duration::from_secs(1),
            },
            Box::new(system_g),
        ),
        (
            Criterion {
                number: 3,
                name: "system H",
                limit: Duration::from_secs(1),
            },
            Box::new(system_h),
        ),
        (
            Criterion {
                number: 4,
                name: "Thue-Morse",
                limit: Duration::from_secs(5),
            },
            Box::new(thue_morse),
        ),
        (
            Criterion {
                number: 5,
                name: "Fibonacci",
                limit: Duration::from_secs(5),
            },
            Box::new(fibonacci),
        ),
        (
            Criterion {
                number: 6,
                name: "trivial periodic systems",
                limit: Duration::from_secs(1),
            },
            Box::new(trivial_periodic),
        ),
        (
            Criterion {
                number: 7,
                name: "random corpus",
                limit: Duration::from_secs(300),
            },
            Box::new(|| corpus_properties(&corpus)),
        ),
        (
            Criterion {
                number: 8,
                name: "determinism",
                limit: Duration::from_secs(300),
            },
            Box::new(|| determinism(&corpus)),
        ),
    ];

    let mut failed = Vec::new();
    for (c, run) in &criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > c.limit => {
                Err(format!("{detail}; took {elapsed:?}, limit {:?}", c.limit))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!(
                "criterion {} PASS {} ({:.0?}): {detail}",
                c.number, c.name, elapsed
            ),
            Err(why) => {
                println!(
                    "criterion {} FAIL {} ({:.0?}): {why}",
                    c.number, c.name, elapsed
                );
                failed.push(c.number);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
