//! One line per acceptance criterion, each with its wall-clock time and limit.

use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use joinframe::format::Workspace;
use joinframe::frames::{is_frame_generating, Method};
use joinframe::lattice::{is_modular, is_pentagon, FiniteOrder};
use joinframe::morphisms::lift;
use joinframe::mutants::{with_mutant, Mutant};
use joinframe::speclattices::{jf_top, jfplus_join, uminus};
use joinframe::verify::{verify_theorems, Suite, VerifyConfig, VerifyReport};
use joinframe::{IdealLattice, JoinSpec, Poset, PosetMap};

type Check = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Check);

fn load(name: &str) -> Workspace {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    Workspace::parse(&std::fs::read_to_string(&path).expect(&path)).expect(&path)
}

fn ensure(ok: bool, what: &str) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn fg(u: &JoinSpec) -> bool {
    is_frame_generating(u, &Method::ALL).map(|r| r.verdict).unwrap_or(false)
}

fn same(a: &JoinSpec, b: &JoinSpec) -> bool {
    a.is_subset(b) && b.is_subset(a)
}

fn labels(lat: &IdealLattice) -> Vec<String> {
    lat.ideals().iter().map(|s| lat.poset().format_set(s)).collect()
}

fn no_union() -> Check {
    let ws = load("nounion.poset");
    let p = ws.poset();
    let (u1, u2) = (ws.spec("U1").unwrap(), ws.spec("U2").unwrap());
    ensure(fg(&u1) && fg(&u2), "U1 and U2 frame-generating")?;
    let abc = p.set_of(&["a", "b", "c"]).unwrap();
    ensure(!u1.in_uplus(&abc) && !u2.in_uplus(&abc), "{a,b,c} outside U1+ and U2+")?;
    ensure(u1.union(&u2).unwrap().in_uplus(&abc), "{a,b,c} in (U1 ∪ U2)+")?;
    let (p1, p2) = (u1.uplus().unwrap(), u2.uplus().unwrap());
    let joined = jfplus_join(&[p1.clone(), p2.clone()]).unwrap();
    ensure(!joined.is_subset(&p1.union(&p2).unwrap()), "join of maximal specs exceeds their union")?;
    Ok("{a,b,c} ∉ U1+ ∪ U2+, ∈ (U1 ∪ U2)+".into())
}

fn strict() -> Check {
    let ws = load("strict.poset");
    let p = ws.poset();
    let (u1, u2) = (ws.spec("U1").unwrap(), ws.spec("U2").unwrap());
    ensure(fg(&u1) && fg(&u2), "U1 and U2 frame-generating")?;
    let meet = u1.intersection(&u2).unwrap();
    let report = is_frame_generating(&meet, &Method::ALL).map_err(|e| e.to_string())?;
    ensure(!report.verdict, "U1 ∩ U2 not frame-generating")?;
    let w = report.witness.ok_or("missing witness")?;
    ensure(p.format_set(&w.set) == "{a,b,c,d,e,g}", "witness set")?;
    let point = p.label(w.point).to_string();
    ensure(point == "h" || point == "i", "witness point in {h,i}")?;
    let expected = JoinSpec::from_labels(p.clone(), &[vec!["a", "b"], vec!["b", "c"], vec!["c", "d"]]).unwrap();
    ensure(same(&uminus(&meet), &expected), "uminus(U1 ∩ U2)")?;
    let abc = p.set_of(&["a", "b", "c"]).unwrap();
    ensure(u1.in_uplus(&abc) && u2.in_uplus(&abc) && !meet.in_uplus(&abc), "{a,b,c} membership")?;
    Ok(format!("witness S = {}, p = {point}; uminus = {}", p.format_set(&w.set), uminus(&meet)))
}

fn not_mod() -> Check {
    let ws = load("notmod.poset");
    let p = ws.poset();
    let uinf = ws.spec("Uinf").unwrap();
    let lat = IdealLattice::new(&uinf).unwrap();
    let find = |labels: &[&str]| lat.index_of(&p.set_of(labels).unwrap()).ok_or(format!("{labels:?} is not an ideal"));
    let down = |l: &str| lat.index_of(&p.principal_down(p.index_of(l).unwrap())).ok_or(format!("{l}↓ is not an ideal"));
    let five = [down("c")?, find(&["b", "c"])?, find(&["a", "b", "c"])?, down("d")?, down("e")?];
    ensure(is_pentagon(&lat, five[0], five[1], five[2], five[3], five[4]), "pentagon")?;
    ensure(!is_modular(&lat), "not modular")?;
    let top = jf_top(p.clone()).unwrap();
    ensure(top.is_subset(&uinf) && !uinf.is_subset(&top), "jf_top strictly inside u_infty")?;
    Ok(format!("{} ideals, pentagon c↓ < {{b,c}} < {{a,b,c}} < e↓ beside d↓; |jf_top| = {} < {}", lat.len(), top.len(), uinf.len()))
}

fn lifts() -> Check {
    let (ep, eq) = (load("emnec_p.poset"), load("emnec_q.poset"));
    let lp = IdealLattice::new(&ep.spec("Uinf").unwrap()).unwrap();
    let lq = IdealLattice::new(&eq.spec("Uinf").unwrap()).unwrap();
    ensure(labels(&lp) == ["{}", "{a}", "{b}", "{a,b}"], "antichain ideals")?;
    ensure(labels(&lq) == ["{c}", "{c,d}"], "two-chain ideals")?;
    let f = PosetMap::from_pairs(ep.poset().clone(), eq.poset().clone(), &[("a", "d"), ("b", "d")]).unwrap();
    let fp = lift(&f, &lp, &lq).map_err(|e| e.to_string())?;
    ensure(!fp.preserves_binary_meets(), "collapsing lift breaks binary meets")?;

    let (np, nq) = (load("notinj_p.poset"), load("notinj_q.poset"));
    let lp = IdealLattice::new(&np.spec("Uinf").unwrap()).unwrap();
    let lq = IdealLattice::new(&nq.spec("Uinf").unwrap()).unwrap();
    ensure(labels(&lq) == ["{}", "{a'}", "{b'}", "{c'}", "{a',b',c',t}"], "fan ideals")?;
    let pairs = [("a", "a'"), ("b", "b'"), ("c", "c'")];
    let f = PosetMap::from_pairs(np.poset().clone(), nq.poset().clone(), &pairs).unwrap();
    ensure(f.is_embedding(), "antichain map is an embedding")?;
    let fp = lift(&f, &lp, &lq).map_err(|e| e.to_string())?;
    ensure(!fp.is_injective(), "antichain lift is not injective")?;

    let p = Arc::new(Poset::antichain(2));
    let q = Arc::new(Poset::from_covers(&["a", "b", "t"], &[("a", "t"), ("b", "t")]).unwrap());
    let f = PosetMap::by_label(p.clone(), q.clone()).unwrap();
    let (up, uq) = (JoinSpec::u_max(p).unwrap(), JoinSpec::u_max(q).unwrap());
    ensure(fg(&up) && fg(&uq), "control sides frame-generating")?;
    let (lp, lq) = (IdealLattice::new(&up).unwrap(), IdealLattice::new(&uq).unwrap());
    let fp = lift(&f, &lp, &lq).map_err(|e| e.to_string())?;
    let reflects = (0..lp.len()).all(|c| (0..lp.len()).all(|d| lq.leq(fp.apply(c), fp.apply(d)) == lp.leq(c, d)));
    ensure(f.is_embedding() && reflects, "control lift is an order embedding")?;
    Ok("collapsing map breaks meets, embedding of the antichain identifies {a,b} and {b,c}, control lift embeds".into())
}

fn suite_line(report: &VerifyReport, suite: Suite) -> Check {
    let laws: Vec<_> = report.laws.iter().filter(|l| l.suite == suite).collect();
    let checks: usize = laws.iter().map(|l| l.pass).sum();
    if report.suite_passes(suite) {
        Ok(format!(
            "{} laws, {checks} passing checks over {} instances",
            laws.len(),
            report.fixture_instances + report.exhaustive_instances + report.random_instances
        ))
    } else {
        let bad: Vec<String> = laws
            .iter()
            .filter(|l| l.fail > 0 || l.pass == 0)
            .map(|l| match &l.failure {
                Some(f) => format!("{}: {}", l.name, f.message),
                None => format!("{}: no passing instance", l.name),
            })
            .collect();
        Err(bad.join("; "))
    }
}

fn acceptance_config() -> VerifyConfig {
    VerifyConfig { min_n: 5, n: 6, samples: 200, exhaustive_n: 4, ..VerifyConfig::default() }
}

fn mutation() -> Check {
    let config = acceptance_config();
    let mut found = Vec::new();
    for (mutant, name) in [(Mutant::GammaSkipsDownclose, "gamma without down-closure"), (Mutant::UpsilonOverU, "upsilon over U")] {
        let report = with_mutant(mutant, || verify_theorems(&config)).map_err(|e| e.to_string())?;
        let caught = report
            .laws
            .iter()
            .find(|l| l.fail > 0 && l.failure.is_some())
            .ok_or(format!("{name}: no suite failed"))?;
        let f = caught.failure.as_ref().unwrap();
        println!("      {name}: {} law(s) fail, first {} ({})", report.laws.iter().filter(|l| l.fail > 0).count(), caught.name, f.message);
        for line in f.poset.lines() {
            println!("        {line}");
        }
        println!("        U = {}", f.u);
        println!("        V = {}", f.v);
        found.push(name);
    }
    Ok(format!("both mutants caught: {}", found.join(", ")))
}

fn determinism() -> Check {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_joinframe"))
            .args(["verify", "--seed", "42"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.code() == Some(0), "verify exits 0")?;
    ensure(!a.stdout.is_empty() && a.stdout == b.stdout, "reports differ")?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}

fn report(index: usize, title: &str, limit: Duration, elapsed: Duration, outcome: &Check) -> bool {
    let ok = outcome.is_ok() && elapsed < limit;
    let detail = match outcome {
        Ok(d) if elapsed < limit => d.clone(),
        Ok(_) => format!("over time limit of {limit:?}"),
        Err(e) => e.clone(),
    };
    println!(
        "criterion {index} [{}] {title} ({:.2}s, limit {}s): {detail}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    ok
}

fn timed(f: impl FnOnce() -> Check) -> (Check, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn main() -> ExitCode {
    std::panic::set_hook(Box::new(|_| {}));
    let mut all = true;
    let simple: [Criterion; 4] = [
        ("union of frame-generating specs", 1, no_union),
        ("meet of frame-generating specs", 1, strict),
        ("non-modular ideal lattice", 5, not_mod),
        ("lifted maps", 1, lifts),
    ];
    for (i, (title, secs, f)) in simple.into_iter().enumerate() {
        let (out, t) = timed(f);
        all &= report(i + 1, title, Duration::from_secs(secs), t, &out);
    }

    let start = Instant::now();
    let verified = verify_theorems(&acceptance_config());
    let t_run = start.elapsed();
    let (gen, gal) = match &verified {
        Ok(r) => (suite_line(r, Suite::Generation), suite_line(r, Suite::Galois)),
        Err(e) => (Err(e.to_string()), Err(e.to_string())),
    };
    all &= report(5, "generation suite", Duration::from_secs(300), t_run, &gen);
    all &= report(6, "galois suite", Duration::from_secs(300), t_run, &gal);

    let (out, t) = timed(mutation);
    all &= report(7, "mutation sensitivity", Duration::from_secs(60), t, &out);
    let (out, t) = timed(determinism);
    all &= report(8, "deterministic verify report", Duration::from_secs(300), t, &out);

    println!("acceptance: {}", if all { "all criteria pass" } else { "some criteria fail" });
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
