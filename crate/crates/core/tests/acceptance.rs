//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Every check is exact (zero tolerance) except the simulation step cap,
//! which is pinned at 10,000 steps per run.

mod common;

use std::collections::{BTreeSet, HashSet};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use supergossip::explorer::*;
use supergossip::*;
use std::result::Result;

/// What a criterion established, plus published claims it found to be
/// contradicted. A hard error means the run itself went wrong.
struct Report {
    detail: String,
    contradicted: Vec<String>,
}

impl From<String> for Report {
    fn from(detail: String) -> Self {
        Report { detail, contradicted: Vec::new() }
    }
}

impl From<&str> for Report {
    fn from(detail: &str) -> Self {
        detail.to_string().into()
    }
}

type Check = Result<Report, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn verdict(v: supergossip::Result<Verdict>) -> Result<Verdict, String> {
    v.map_err(|e| e.to_string())
}

// ---------------------------------------------------------------- criterion 1

fn expect_table(ev: &Evaluator, sequence: &str, expected: &[[&str; 4]], secrets_only: bool) -> Result<(), String> {
    let table = ev.knowledge_table(&seq(sequence, 4)).map_err(|e| e.to_string())?;
    ensure(table.rows.len() == expected.len() + 1, || format!("{sequence}: {} rows", table.rows.len()))?;
    let initial: Vec<String> = table.rows[0].cells.iter().map(|c| c.to_string()).collect();
    ensure(initial == ["a", "b", "c", "d"], || format!("{sequence}: initial row {initial:?}"))?;
    for (i, want) in expected.iter().enumerate() {
        for (x, &cell) in want.iter().enumerate() {
            let got = table.cell(i + 1, x);
            let text = if secrets_only { got.secrets.letters() } else { got.to_string() };
            ensure(text == cell, || format!("{sequence}: row {} column {x}: got {text:?}, want {cell:?}", i + 1))?;
        }
    }
    Ok(())
}

fn criterion_1() -> Check {
    let plain = evaluator(4, Protocol::any(), Variant::Plain, true);
    let known = evaluator(4, Protocol::cmo(), Variant::Known, true);
    expect_table(
        &plain,
        "ab;cd;ac;bd",
        &[["ab", "ab", "c", "d"], ["ab", "ab", "cd", "cd"], ["abcd", "ab", "abcd", "cd"], ["abcd", "abcd", "abcd", "abcd"]],
        true,
    )?;
    expect_table(
        &plain,
        "ab;ac;cd;ab;bc;ab",
        &[
            ["ab", "ab", "c", "d"],
            ["abc", "ab", "abc", "d"],
            ["abc", "ab", "abcd CD", "abcd CD"],
            ["abc CD", "abc", "abcd CD", "abcd CD"],
            ["abc CD", "abcd BCD", "abcd BCD", "abcd CD"],
            ["abcd ABCD", "abcd ABCD", "abcd BCD", "abcd CD"],
        ],
        false,
    )?;
    expect_table(
        &plain,
        "ab;cd;ac;ad;bc;ba;bd",
        &[
            ["ab", "ab", "c", "d"],
            ["ab", "ab", "cd", "cd"],
            ["abcd AC", "ab", "abcd AC", "cd"],
            ["abcd ACD", "ab", "abcd AC", "abcd ACD"],
            ["abcd ACD", "abcd BC", "abcd ABCD", "abcd ACD"],
            ["abcd ABCD", "abcd ABC", "abcd ABCD", "abcd ACD"],
            ["abcd ABCD", "abcd ABCD", "abcd ABCD", "abcd ABCD"],
        ],
        false,
    )?;
    expect_table(
        &known,
        "ab;cd;bd;ac;bc",
        &[
            ["ab", "ab", "c", "d"],
            ["ab", "ab", "cd", "cd"],
            ["ab", "abcd BD", "cd D", "abcd BD"],
            ["abcd ABCD", "abcd ABD", "abcd ABCD", "abcd BCD"],
            ["abcd ABCD", "abcd ABCD", "abcd ABCD", "abcd ABCD"],
        ],
        false,
    )?;
    expect_table(
        &known,
        "ab;bc;cd;ad;bd;ac",
        &[
            ["ab", "ab", "c", "d"],
            ["ab", "abc", "abc", "d"],
            ["ab", "abc", "abcd CD", "abcd CD"],
            ["abcd AD", "abc", "abcd CD", "abcd ACD"],
            ["abcd ABCD", "abcd BD", "abcd ABCD", "abcd ABCD"],
            ["abcd ABCD", "abcd ABCD", "abcd ABCD", "abcd ABCD"],
        ],
        false,
    )?;
    Ok("5 tables cell-for-cell".into())
}

// ---------------------------------------------------------------- criterion 2

fn criterion_2() -> Check {
    let options = SearchOptions { canonical_first_call: true, undirected: true, workers: 1 };
    let mut found = Vec::new();
    for (n, sync, want) in [(3, true, 3), (4, true, 7), (3, false, 4), (4, false, 8)] {
        let ev = evaluator(n, Protocol::any(), Variant::Plain, sync);
        let r = ev.search_min_super_successful(want + 1, options).map_err(|e| e.to_string())?;
        let mode = if sync { "sync" } else { "async" };
        match r.outcome {
            SearchOutcome::FoundMinimal { length, sequence } => {
                ensure(length == want, || format!("{mode} n={n}: minimal length {length}, want {want}"))?;
                ensure(r.verified == Some(true), || format!("{mode} n={n}: {sequence} failed re-verification"))?;
                found.push(format!("{mode} n={n}: {length} ({sequence})"));
            }
            other => return Err(format!("{mode} n={n}: {other:?}")),
        }
    }
    // The three-agent asynchronous sequence from the literature works too.
    let ev = evaluator(3, Protocol::any(), Variant::Plain, false);
    let v = verdict(ev.everyone_super_expert(&seq("ab;ac;ab;cb", 3)))?;
    ensure(v.is_true(), || format!("async ab;ac;ab;cb: {v}"))?;
    Ok(found.join(", ").into())
}

// ---------------------------------------------------------------- criterion 3

fn criterion_3() -> Check {
    let known_cmo = evaluator(4, Protocol::cmo(), Variant::Known, true);
    let r = known_cmo.classify_protocol(8);
    ensure(r.verdict == Classification::SuperSuccessful && !r.truncated, || format!("known CMO: {:?}", r.verdict))?;
    ensure(r.maximal_lengths.keys().all(|&l| l == 5 || l == 6), || format!("known CMO lengths {:?}", r.maximal_lengths))?;
    // Disjoint first calls always end after five calls; the converse
    // (overlapping first calls end after six) is checked separately.
    let maximal = known_cmo.enumerate_maximal(8);
    let mut overlapping_short = Vec::new();
    for s in &maximal.sequences {
        let (x, y) = (s.nth(1).unwrap().as_call().unwrap(), s.nth(2).unwrap().as_call().unwrap());
        let disjoint = x.participants().intersection(y.participants()).is_empty();
        ensure(!disjoint || s.len() == 5, || format!("known CMO maximal {s}: length {}", s.len()))?;
        if !disjoint && s.len() == 5 {
            overlapping_short.push(s.clone());
        }
    }
    let mut contradicted = Vec::new();
    if let Some(first) = overlapping_short.first() {
        contradicted.push(format!(
            "overlapping first calls need six calls: {} maximal sequences of length 5 overlap, first {first}",
            overlapping_short.len()
        ));
    }

    let plain_cmo = evaluator(4, Protocol::cmo(), Variant::Plain, true).classify_protocol(8);
    ensure(plain_cmo.verdict == Classification::NotSuperSuccessful, || format!("plain CMO: {:?}", plain_cmo.verdict))?;

    let counter = seq("ab;bc;cd;ad;bd", 4);
    let known_lns = evaluator(4, Protocol::lns(), Variant::Known, true);
    let lns = known_lns.classify_protocol(8);
    ensure(lns.verdict == Classification::NotSuperSuccessful, || format!("known LNS: {:?}", lns.verdict))?;
    ensure(lns.counterexamples.iter().any(|c| c.sequence == counter), || "known LNS: ab;bc;cd;ad;bd not a counterexample".into())?;

    let engaged = evaluator(4, Protocol::cmo(), Variant::Engaged, true);
    let eng = engaged.classify_protocol(8);
    ensure(eng.verdict == Classification::NotSuperSuccessful, || format!("engaged CMO: {:?}", eng.verdict))?;
    ensure(verdict(engaged.is_maximal(&counter))?.is_true(), || "engaged CMO: ab;bc;cd;ad;bd not maximal".into())?;
    ensure(verdict(engaged.everyone_super_expert(&counter))?.is_false(), || "engaged CMO: ab;bc;cd;ad;bd successful".into())?;

    let skip = evaluator(4, Protocol::cmo(), Variant::Skip, true);
    let sk = skip.classify_protocol(8);
    ensure(sk.verdict == Classification::SuperSuccessful && !sk.truncated, || format!("skip CMO: {:?}", sk.verdict))?;
    let with_skip = seq("ab;bc;cd;da;bd;skip", 4);
    ensure(verdict(skip.is_permitted(&with_skip))?.is_true(), || "skip CMO: ab;bc;cd;da;bd;skip not permitted".into())?;
    ensure(verdict(skip.everyone_super_expert(&with_skip))?.is_true(), || "skip CMO: E ExpAll fails after skip".into())?;

    Ok(Report {
        detail: format!(
            "known CMO super-successful {:?}, disjoint starts end at 5; plain CMO, known LNS, engaged CMO not; skip CMO super-successful",
            r.maximal_lengths
        ),
        contradicted,
    })
}

// ---------------------------------------------------------------- criterion 4

fn criterion_4() -> Check {
    let mut done = Vec::new();
    for (pattern, variant, lengths) in [
        (Pattern::PairwiseQuadratic, Variant::Plain, [8, 13]),
        (Pattern::StarEngaged, Variant::Engaged, [8, 11]),
        (Pattern::Broadcast2n3, Variant::Plain, [5, 7]),
    ] {
        for (n, want) in [4, 5].into_iter().zip(lengths) {
            let s = construct(pattern, n).map_err(|e| e.to_string())?;
            ensure(s.len() == want, || format!("{pattern} n={n}: length {}, want {want}", s.len()))?;
            let ctx = EvalContext::asynchronous(n, Protocol::any(), variant, Some(want + 2 * n)).map_err(|e| e.to_string())?;
            let ev = Evaluator::new(ctx).map_err(|e| e.to_string())?;
            ensure(verdict(ev.is_permitted(&s))?.is_true(), || format!("{pattern} n={n}: {s} not permitted"))?;
            let v = if pattern == Pattern::Broadcast2n3 {
                verdict(ev.is_super_expert(&s, agent('a')))?
            } else {
                verdict(ev.everyone_super_expert(&s))?
            };
            ensure(v.is_true(), || format!("{pattern} n={n}: {s} gives {v}"))?;
            done.push(format!("{pattern}({n})={want}"));
        }
    }
    Ok(done.join(", ").into())
}

// ---------------------------------------------------------------- criterion 5

fn criterion_5() -> Check {
    let ev = evaluator(4, Protocol::any(), Variant::Plain, false);
    let prefix = seq("ac;ad;ac;bc;ac", 4);
    let v = verdict(ev.knows(&prefix, agent('a'), &Formula::exp(agent('b'), 4)))?;
    ensure(v.is_true(), || format!("K_a Exp(b): {v}"))?;
    let r = ev.search_extension(&prefix, 8, SearchOptions::default()).map_err(|e| e.to_string())?;
    ensure(r.outcome == SearchOutcome::NoneUpTo { max_len: 8 }, || format!("extension search: {:?}", r.outcome))?;
    Ok("K_a Exp(b) True; no super-successful extension up to 8 calls (plain async)".into())
}

// ---------------------------------------------------------------- criterion 6

/// Every protocol-permitted trace up to `max_len`, depth first.
fn permitted_traces(ev: &Evaluator, max_len: usize) -> Result<Vec<Trace>, String> {
    let mut out = Vec::new();
    let mut stack = vec![ev.root()];
    while let Some(t) = stack.pop() {
        if t.len() < max_len {
            let kids = ev.children(t.seq()).map_err(|e| e.to_string())?;
            ensure(kids.undetermined.is_empty(), || format!("undetermined children at {}", t.seq()))?;
            for &e in kids.permitted.iter().rev() {
                stack.push(ev.extend(&t, e));
            }
        }
        out.push(t);
    }
    Ok(out)
}

fn is_true(ev: &Evaluator, t: &Trace, f: &Formula) -> Result<bool, String> {
    let v = verdict(ev.eval_trace(t, f))?;
    v.definite().ok_or_else(|| format!("{} undetermined at {}", f_name(f), t.seq()))
}

fn f_name(f: &Formula) -> String {
    format!("{f:?}").chars().take(60).collect()
}

fn sync_contexts() -> Vec<(&'static str, Protocol, Variant)> {
    vec![
        ("plain ANY", Protocol::any(), Variant::Plain),
        ("known CMO", Protocol::cmo(), Variant::Known),
        ("engaged CMO", Protocol::cmo(), Variant::Engaged),
        ("skip CMO", Protocol::cmo(), Variant::Skip),
    ]
}

/// Truthfulness, introspection, secret transparency and violation collapse.
fn logic_laws() -> Result<usize, String> {
    let n = 4;
    let mut checked = 0;
    for (name, protocol, variant) in sync_contexts() {
        let ev = evaluator(n, protocol, variant, true);
        let facts = [Formula::exp_all(n), Formula::exp(agent('b'), n), Formula::secret(agent('c'), agent('d'))];
        for t in permitted_traces(&ev, 5)? {
            let m = matrix_secrets(n, t.seq());
            for a in agents(n) {
                for (i, phi) in facts.iter().enumerate() {
                    let k = Formula::knows(a, phi.clone());
                    let known = is_true(&ev, &t, &k)?;
                    ensure(!known || is_true(&ev, &t, phi)?, || format!("{name}: K_{a} φ{i} but not φ{i} at {}", t.seq()))?;
                    if i < 2 {
                        let pos = is_true(&ev, &t, &Formula::knows(a, k.clone()))?;
                        let neg = is_true(&ev, &t, &Formula::knows(a, Formula::not(k.clone())))?;
                        ensure(known == pos && known != neg, || format!("{name}: introspection for {a} at {}", t.seq()))?;
                    }
                }
                for b in agents(n) {
                    let s = Formula::secret(a, b);
                    let holds = is_true(&ev, &t, &s)?;
                    ensure(holds == m[a.index()][b.index()], || format!("{name}: S_{a}{b} at {} vs matrix", t.seq()))?;
                    ensure(holds == is_true(&ev, &t, &Formula::knows(a, s.clone()))?, || format!("{name}: K_{a} S_{a}{b} at {}", t.seq()))?;
                    ensure(!holds == is_true(&ev, &t, &Formula::knows(a, Formula::not(s)))?, || format!("{name}: K_{a} ¬S_{a}{b} at {}", t.seq()))?;
                }
                ensure(!is_true(&ev, &t, &Formula::knows(a, Formula::bot()))?, || format!("{name}: K_{a} ⊥ at permitted {}", t.seq()))?;
                checked += 1;
            }
            if variant != Variant::Plain && t.len() < 5 {
                for e in ev.children(t.seq()).map_err(|e| e.to_string())?.permitted.iter().copied().chain(Call::all(n).map(Event::Call)) {
                    let u = ev.extend(&t, e);
                    if u.relation_permitted().is_false() {
                        for a in agents(n) {
                            ensure(is_true(&ev, &u, &Formula::knows(a, Formula::bot()))?, || format!("{name}: no collapse at {}", u.seq()))?;
                        }
                    }
                }
            }
        }
    }
    Ok(checked)
}

fn pig_emptiness() -> Result<usize, String> {
    let n = 4;
    let ev = evaluator(n, Protocol::pig(), Variant::Plain, true);
    let some_pig = Formula::or(Call::all(n).map(|c| Formula::condition(c.caller, c.callee)));
    let everyone = Formula::everyone_super(n);
    let mut checked = 0;
    for t in permitted_traces(&ev, 5)? {
        ensure(is_true(&ev, &t, &some_pig)? != is_true(&ev, &t, &everyone)?, || format!("PIG emptiness at {}", t.seq()))?;
        checked += 1;
    }
    Ok(checked)
}

fn missed_call() -> Result<usize, String> {
    let n = 4;
    let mut checked = 0;
    for protocol in [Protocol::cmo(), Protocol::any()] {
        let ev = evaluator(n, protocol, Variant::Engaged, true);
        for t in permitted_traces(&ev, 5)? {
            for c in Call::all(n) {
                let callee_knows = is_true(&ev, &t, &Formula::super_expert(c.callee, n))?;
                let u = ev.extend(&t, Event::Call(c));
                if callee_knows && u.relation_permitted().is_true() {
                    ensure(is_true(&ev, &u, &Formula::super_expert(c.caller, n))?, || format!("missed call at {}", u.seq()))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(checked)
}

fn async_skip_preservation() -> Result<usize, String> {
    let n = 4;
    let ctx = EvalContext::asynchronous(n, Protocol::cmo(), Variant::Skip, Some(8)).map_err(|e| e.to_string())?;
    let ev = Evaluator::new(ctx).map_err(|e| e.to_string())?;
    let formulas = [Formula::exp_all(n), Formula::exp(agent('b'), n)];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    let mut seen = HashSet::new();
    for _ in 0..25 {
        let mut s = CallSequence::empty();
        while s.len() < 7 {
            let kids = ev.children(&s).map_err(|e| e.to_string())?;
            if kids.permitted.contains(&Event::Skip) {
                if seen.insert(s.clone()) {
                    let skipped = s.extended(Event::Skip);
                    for a in agents(n) {
                        for phi in &formulas {
                            let before = verdict(ev.knows(&s, a, phi))?;
                            let after = verdict(ev.knows(&skipped, a, phi))?;
                            ensure(before == after, || format!("skip changes K_{a} at {s}: {before} vs {after}"))?;
                            checked += 1;
                        }
                    }
                }
                break;
            }
            let calls: Vec<Event> = kids.permitted.into_iter().filter(|e| !e.is_skip()).collect();
            if calls.is_empty() {
                break;
            }
            s.push(calls[rng.gen_range(0..calls.len())]);
        }
    }
    ensure(checked > 0, || "no sampled sequence admitted a skip".into())?;
    Ok(checked)
}

fn sync_within_async() -> Result<usize, String> {
    let n = 4;
    let mut checked = 0;
    for (protocol, variant) in [(Protocol::any(), Variant::Plain), (Protocol::cmo(), Variant::Known)] {
        let sync = evaluator(n, protocol.clone(), variant, true);
        for t in permitted_traces(&sync, 3)? {
            let len = t.len();
            let ctx = EvalContext::asynchronous(n, protocol.clone(), variant, Some(len)).map_err(|e| e.to_string())?;
            let asy = Evaluator::new(ctx).map_err(|e| e.to_string())?;
            for a in agents(n) {
                let class = sync.indistinguishable(t.seq(), a).map_err(|e| e.to_string())?;
                for tau in &class.sequences {
                    let v = verdict(asy.are_related(t.seq(), tau, a))?;
                    ensure(v.is_true(), || format!("{} ≈_{a} {tau} but async {v}", t.seq()))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(checked)
}

fn closure_equality() -> Result<usize, String> {
    let mut checked = 0;
    for (variant, protocol) in [
        (Variant::Plain, OracleProtocol::Any),
        (Variant::Known, OracleProtocol::Cmo),
        (Variant::Known, OracleProtocol::Lns),
        (Variant::Known, OracleProtocol::Pig),
        (Variant::Engaged, OracleProtocol::Cmo),
        (Variant::Engaged, OracleProtocol::Any),
        (Variant::Skip, OracleProtocol::Cmo),
    ] {
        let oracle = ClosureOracle::build(4, variant, protocol, 5);
        checked += check_against_library(&oracle).map_err(|e| format!("{variant:?} {protocol:?}: {e}"))?;
    }
    Ok(checked)
}

fn extension(ev: &Evaluator, max_len: usize) -> Result<BTreeSet<CallSequence>, String> {
    Ok(permitted_traces(ev, max_len)?.into_iter().map(|t| t.seq().clone()).collect())
}

fn containments(contradicted: &mut Vec<String>) -> Result<usize, String> {
    let n = 4;
    let ext = |p: Protocol, v: Variant| extension(&evaluator(n, p, v, true), 5);
    let any = ext(Protocol::any(), Variant::Plain)?;
    let cmo = ext(Protocol::cmo(), Variant::Plain)?;
    let lns = ext(Protocol::lns(), Variant::Plain)?;
    let pig = ext(Protocol::pig(), Variant::Plain)?;
    ensure(lns.is_subset(&cmo), || "LNS ⊄ CMO".into())?;
    ensure(cmo.is_subset(&any), || "CMO ⊄ ANY".into())?;
    ensure(pig.is_subset(&any), || "PIG ⊄ ANY".into())?;
    let any_engaged = ext(Protocol::any(), Variant::Engaged)?;
    let pig_engaged = ext(Protocol::pig(), Variant::Engaged)?;
    ensure(pig_engaged.is_subset(&any_engaged), || "PIG ⊄ ANY under engaged agents".into())?;
    // What does hold: both protocols are stuck at exactly the same
    // PIG-permitted sequences.
    let any_ev = evaluator(n, Protocol::any(), Variant::Engaged, true);
    let pig_ev = evaluator(n, Protocol::pig(), Variant::Engaged, true);
    for s in pig_engaged.iter().filter(|s| s.len() < 5) {
        let a = any_ev.children(s).map_err(|e| e.to_string())?.permitted.is_empty();
        let p = pig_ev.children(s).map_err(|e| e.to_string())?.permitted.is_empty();
        ensure(a == p, || format!("engaged ANY and PIG disagree on termination at {s}"))?;
    }
    if let Some(first) = any_engaged.difference(&pig_engaged).min_by(|a, b| a.shortlex_cmp(b)) {
        contradicted.push(format!(
            "ANY and PIG coincide under engaged agents: {} ANY-only sequences up to length 5, shortest {first}",
            any_engaged.len() - pig_engaged.len()
        ));
    }

    // The final call ac is CMO-permitted, but judged with what a knows
    // under known CMO, the PIG condition for ac fails: a is a super expert.
    let witness = seq("ab;bc;cd;ad;bd;ac", n);
    let prefix = witness.prefix(5);
    let known_cmo = evaluator(n, Protocol::cmo(), Variant::Known, true);
    ensure(verdict(known_cmo.is_permitted(&witness))?.is_true(), || "witness not CMO-permitted".into())?;
    let (a, c) = (agent('a'), agent('c'));
    let differ = Formula::or(agents(n).map(|z| {
        Formula::or2(
            Formula::and2(Formula::secret(a, z), Formula::not(Formula::secret(c, z))),
            Formula::and2(Formula::not(Formula::secret(a, z)), Formula::secret(c, z)),
        )
    }));
    let pig_ac = verdict(known_cmo.eval(&prefix, &Formula::khat(a, differ)))?;
    ensure(pig_ac.is_false(), || format!("PIG_ac under known CMO knowledge: {pig_ac}"))?;
    // Inside a PIG context a cannot rule out that c still lacks d's secret.
    let known_pig = evaluator(n, Protocol::pig(), Variant::Known, true);
    let own = verdict(known_pig.call_permitted(&prefix, Event::Call(Call::new(a, c).unwrap())))?;
    if own.is_true() {
        contradicted.push(format!("ac is not PIG-permitted after {prefix} in a known PIG context: it is"));
    }
    Ok(any.len() + cmo.len() + lns.len() + pig.len() + any_engaged.len() + pig_engaged.len())
}

fn criterion_6() -> Check {
    let mut parts = Vec::new();
    let mut contradicted = Vec::new();
    let mut timed = |name: &str, run: &mut dyn FnMut() -> Result<usize, String>| -> Result<(), String> {
        let start = Instant::now();
        let count = run().map_err(|e| format!("{name}: {e}"))?;
        parts.push(format!("{name} {count} ({:.1}s)", start.elapsed().as_secs_f64()));
        Ok(())
    };
    timed("laws", &mut logic_laws)?;
    timed("pig-emptiness", &mut pig_emptiness)?;
    timed("missed-call", &mut missed_call)?;
    timed("async-skip", &mut async_skip_preservation)?;
    timed("sync⊆async", &mut sync_within_async)?;
    timed("closure", &mut closure_equality)?;
    timed("containments", &mut || containments(&mut contradicted))?;
    Ok(Report { detail: parts.join(", "), contradicted })
}

// ---------------------------------------------------------------- criterion 7

fn criterion_7() -> Check {
    let mut parts = Vec::new();
    for (name, protocol) in [("ANY", Protocol::any()), ("PIG", Protocol::pig())] {
        for n in [4, 5] {
            let ev = evaluator(n, protocol.clone(), Variant::Plain, true);
            let mut longest = 0;
            for seed in 0..100 {
                let run = ev.simulate_fair(seed, 10_000);
                ensure(run.terminated && !run.cutoff && run.everyone_super_expert.is_true(), || {
                    format!("{name} n={n} seed {seed}: {:?} after {} steps", run.everyone_super_expert, run.steps)
                })?;
                longest = longest.max(run.steps);
            }
            parts.push(format!("{name} n={n} max {longest} steps"));
        }
    }
    Ok(format!("100/100 runs each: {}", parts.join(", ")).into())
}

/// Criteria with a documented, reproducible counterexample to one of their
/// claims. Any other red criterion fails the test target.
const DOCUMENTED: [u32; 2] = [3, 6];

type Criterion = (u32, &'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 7] = [
        (1, "knowledge tables, exact", criterion_1),
        (2, "minimal lengths by search, exact", criterion_2),
        (3, "classification, exact", criterion_3),
        (4, "constructions at L = length + 2n, no Unknown", criterion_4),
        (5, "example extension search, exact", criterion_5),
        (6, "property suites, exact", criterion_6),
        (7, "fair simulation, cap 10000 steps", criterion_7),
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut failed = 0;
    for (i, title, run) in criteria {
        if only.is_some_and(|o| o != i) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(r) if r.contradicted.is_empty() => println!("criterion {i}: PASS [{title}] {} ({secs:.1}s)", r.detail),
            Ok(r) => {
                // Reproducible counterexamples to a published claim: the
                // criterion stays red, but the run itself is sound.
                println!("criterion {i}: FAIL [{title}] claim contradicted: {} ({secs:.1}s)", r.contradicted.join("; "));
                println!("    everything else held: {}", r.detail);
                if !DOCUMENTED.contains(&i) {
                    failed += 1;
                }
            }
            Err(why) => {
                failed += 1;
                println!("criterion {i}: FAIL [{title}] {why} ({secs:.1}s)");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
