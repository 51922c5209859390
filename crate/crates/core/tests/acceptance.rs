//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if
//! any fails. Run with `cargo test --test acceptance`.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use dynvis::decomposition::decompose;
use dynvis::domain::EditEvent;
use dynvis::dynamic_vp::entry_set;
use dynvis::engine::Session;
use dynvis::gen::{edit_keeps_general_position, propose_edit, random_query, random_scene};
use dynvis::oracle::{oracle_is_visible, oracle_vg, oracle_vp};
use dynvis::par::{self, Exec};
use dynvis::vistree::VisTree;
use dynvis::Scene;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn rng(tag: u64, i: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(tag.wrapping_mul(1_000_003).wrapping_add(i))
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn corridor_counts() -> Outcome {
    let cases: Vec<(usize, u64)> = (2..=5).flat_map(|h| (0..10).map(move |i| (h, i))).collect();
    let results = par::map(Exec::Sequential, &cases, |&(h, i)| {
        let s = random_scene(&mut rng(1, (h as u64) * 100 + i), h, 40);
        let t = Instant::now();
        let cc = decompose(&s).expect("valid scene");
        let took = t.elapsed();
        (cc.junction_count() == 2 * (h - 1) && cc.corridor_count() == 3 * (h - 1), took)
    });
    let exact = results.iter().filter(|r| r.0).count();
    let slowest = results.iter().map(|r| r.1).max().unwrap_or_default();
    Outcome {
        name: "corridor counts",
        pass: exact == results.len() && slowest < Duration::from_secs(1),
        detail: format!("{exact}/{} scenes exact, slowest {:.3} s (limit 1 s)", results.len(), secs(slowest)),
    }
}

fn static_vp() -> Outcome {
    let start = Instant::now();
    let seeds: Vec<u64> = (0..200).collect();
    let results = par::map(Exec::default(), &seeds, |&i| {
        let mut r = rng(2, i);
        let h = r.gen_range(1..=4);
        let s = random_scene(&mut r, h, 40);
        let cc = decompose(&s).expect("valid scene");
        let mut bad = Vec::new();
        for _ in 0..5 {
            let q = random_query(&mut r, &s);
            let got = VisTree::build(&s, &cc, &q, None).expect("free-space query").extract_vp();
            if !got.cyclic_eq(&oracle_vp(&s, &q).expect("free-space query")) {
                bad.push(format!("scene {i} q {q}"));
            }
        }
        bad
    });
    let bad: Vec<String> = results.into_iter().flatten().collect();
    let took = start.elapsed();
    Outcome {
        name: "static VP equivalence",
        pass: bad.is_empty() && took < Duration::from_secs(120),
        detail: format!(
            "{}/1000 queries exact over 200 scenes in {:.1} s (target 120 s){}",
            1000 - bad.len(),
            secs(took),
            bad.first().map(|b| format!("; first miss: {b}")).unwrap_or_default()
        ),
    }
}

#[derive(Default)]
struct ScriptResult {
    events: usize,
    inserts: usize,
    vp_miss: Vec<String>,
    vg_miss: Vec<String>,
    contiguity: usize,
    triangle: usize,
    stats_miss: usize,
    report: String,
    worst_ratio: f64,
    vp_time: Duration,
    vg_time: Duration,
}

fn run_script(i: u64) -> ScriptResult {
    let mut r = rng(3, i);
    let h = r.gen_range(1..=4);
    let scene = random_scene(&mut r, h, 40);
    let q = random_query(&mut r, &scene);
    let mut s = Session::new(scene).expect("valid scene");
    s.track(&q).expect("free-space query");
    s.enable_vg();
    let mut out = ScriptResult::default();
    let mut prev = entry_set(&oracle_vp(&s.scene, &q).expect("free-space query"));
    while out.events < 30 {
        let Some(e) = s.random_edit(&mut r, 400) else { break };
        let t = Instant::now();
        let rep = s.apply(&e).expect("edit was checked");
        let took = t.elapsed();
        out.events += 1;
        let st = rep.vp[0];
        out.inserts += usize::from(st.insert);
        out.contiguity += st.contiguity_violations;
        out.triangle += rep.vg_triangle_violations;

        let t = Instant::now();
        let want = oracle_vp(&s.scene, &q).expect("tracked point stays free");
        let vp_ok = s.tracked[0].vp().cyclic_eq(&want);
        out.vp_time += took / 2 + t.elapsed();
        if !vp_ok {
            out.vp_miss.push(format!("script {i} event {}: {e:?}", out.events));
        }
        let t = Instant::now();
        let vg_ok = s.vg.as_ref().is_some_and(|g| g.edges() == oracle_vg(&s.scene));
        out.vg_time += took / 2 + t.elapsed();
        if !vg_ok {
            out.vg_miss.push(format!("script {i} event {}: {e:?}", out.events));
        }

        let now = entry_set(&want);
        let (plus, minus) = (now.difference(&prev).count(), prev.difference(&now).count());
        if (plus, minus) != (st.rbt_plus, st.rbt_minus) {
            out.stats_miss += 1;
        }
        prev = now;
        let k = plus + minus;
        let ratio = st.nodes as f64 / (k + h) as f64;
        out.worst_ratio = out.worst_ratio.max(ratio);
        let _ = writeln!(
            out.report,
            "script {i} {} k {k} h {h} vg+ {} vg- {}",
            st.line(out.events),
            rep.vg_added,
            rep.vg_removed
        );
    }
    out
}

fn dynamic_suite(outcomes: &mut Vec<Outcome>) {
    let seeds: Vec<u64> = (0..50).collect();
    let start = Instant::now();
    let runs = par::map(Exec::default(), &seeds, |&i| run_script(i));
    let wall = start.elapsed();
    let events: usize = runs.iter().map(|r| r.events).sum();
    let short = runs.iter().filter(|r| r.events < 30).count();
    let vp_miss: Vec<&String> = runs.iter().flat_map(|r| r.vp_miss.iter()).collect();
    let vg_miss: Vec<&String> = runs.iter().flat_map(|r| r.vg_miss.iter()).collect();
    let vp_time: Duration = runs.iter().map(|r| r.vp_time).sum();
    let vg_time: Duration = runs.iter().map(|r| r.vg_time).sum();
    let first = |v: &[&String]| v.first().map(|m| format!("; first miss: {m}")).unwrap_or_default();

    outcomes.push(Outcome {
        name: "dynamic VP equivalence",
        pass: vp_miss.is_empty() && short == 0 && vp_time < Duration::from_secs(300),
        detail: format!(
            "{}/{events} events exact over 50 scripts ({short} scripts under 30 events), {:.1} s summed (target 300 s){}",
            events - vp_miss.len(),
            secs(vp_time),
            first(&vp_miss)
        ),
    });
    let inserts: usize = runs.iter().map(|r| r.inserts).sum();
    let contiguity: usize = runs.iter().map(|r| r.contiguity).sum();
    outcomes.push(Outcome {
        name: "contiguous removals",
        pass: contiguity == 0 && inserts > 0,
        detail: format!("{contiguity} non-contiguous removals over {inserts} inserts"),
    });
    let triangle: usize = runs.iter().map(|r| r.triangle).sum();
    outcomes.push(Outcome {
        name: "dynamic VG equivalence",
        pass: vg_miss.is_empty() && triangle == 0 && short == 0 && vg_time < Duration::from_secs(600),
        detail: format!(
            "{}/{events} events exact, {triangle} changed edges missing the open triangle, {:.1} s summed (target 600 s){}",
            events - vg_miss.len(),
            secs(vg_time),
            first(&vg_miss)
        ),
    });

    let stats_miss: usize = runs.iter().map(|r| r.stats_miss).sum();
    let worst = runs.iter().map(|r| r.worst_ratio).fold(0.0, f64::max);
    let mut report = String::new();
    let _ = writeln!(report, "# per-event stats; k = oracle symmetric difference, ratio = nodes / (k + h)");
    for r in &runs {
        report.push_str(&r.report);
    }
    let _ = writeln!(
        report,
        "# events {events}, stats mismatches {stats_miss}, max nodes/(k+h) {worst:.2}, wall {:.1} s",
        secs(wall)
    );
    let path = archive("sensitivity.txt", &report);
    outcomes.push(Outcome {
        name: "sensitivity instrumentation",
        pass: stats_miss == 0 && path.is_some(),
        detail: format!(
            "rbt+/rbt- equal the oracle symmetric difference on {}/{events} events; max nodes/(k+h) {worst:.2}; report {}",
            events - stats_miss,
            path.map(|p| p.display().to_string()).unwrap_or_else(|| "not written".into())
        ),
    });
}

fn archive(name: &str, text: &str) -> Option<PathBuf> {
    let target = std::env::var_os("CARGO_TARGET_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../target"));
    let dir = target.join("acceptance");
    std::fs::create_dir_all(&dir).ok()?;
    let path = dir.join(name);
    std::fs::write(&path, text).ok()?;
    path.canonicalize().ok()
}

/// An accepted edit whose vertex `q` cannot see and that leaves the
/// oracle's polygon unchanged.
fn hidden_edit(s: &Session, r: &mut ChaCha8Rng, q: &dynvis::Point) -> Option<(EditEvent, Scene)> {
    let before = oracle_vp(&s.scene, q).ok()?;
    for _ in 0..2000 {
        let e = propose_edit(r, &s.scene);
        let Ok((after, _)) = s.check_edit(&e) else { continue };
        if !edit_keeps_general_position(&after, &e, std::slice::from_ref(q)) {
            continue;
        }
        let tri = s.scene.edit_triangle(&e).ok()?;
        let judge = if tri.insert { &after } else { &s.scene };
        if oracle_is_visible(judge, q, &tri.v) {
            continue;
        }
        if oracle_vp(&after, q).ok()?.cyclic_eq(&before) {
            return Some((e, after));
        }
    }
    None
}

fn no_op() -> Outcome {
    let seeds: Vec<u64> = (0..100).collect();
    let results = par::map(Exec::default(), &seeds, |&i| {
        let mut r = rng(4, i);
        loop {
            let h = r.gen_range(2..=4);
            let s = random_scene(&mut r, h, 40);
            let q = random_query(&mut r, &s);
            let mut sess = Session::new(s).expect("valid scene");
            sess.track(&q).expect("free-space query");
            if let Some((e, _)) = hidden_edit(&sess, &mut r, &q) {
                let rep = sess.apply(&e).expect("edit was checked");
                return rep.vp[0].mutations;
            }
        }
    });
    let zero = results.iter().filter(|m| **m == 0).count();
    Outcome {
        name: "no-op property",
        pass: zero == 100,
        detail: format!("{zero}/100 hidden edits with zero tree mutations"),
    }
}

fn round_trips() -> Outcome {
    let seeds: Vec<u64> = (0..100).collect();
    let results = par::map(Exec::default(), &seeds, |&i| {
        let mut r = rng(5, i);
        loop {
            let h = r.gen_range(1..=4);
            let s = random_scene(&mut r, h, 40);
            let q = random_query(&mut r, &s);
            let mut sess = Session::new(s).expect("valid scene");
            sess.track(&q).expect("free-space query");
            sess.enable_vg();
            let vp0 = sess.tracked[0].vp();
            let vg0: BTreeSet<_> = sess.vg.as_ref().map(|g| g.edges()).unwrap_or_default();
            let qs = [q.clone()];
            let ins = (0..400).map(|_| propose_edit(&mut r, &sess.scene)).find(|e| {
                e.is_insert() && sess.check_edit(e).is_ok_and(|(after, _)| edit_keeps_general_position(&after, e, &qs))
            });
            let Some(ins @ EditEvent::Insert { obstacle, index, .. }) = ins else { continue };
            sess.apply(&ins).expect("edit was checked");
            let del = EditEvent::Delete { obstacle, index: index + 1 };
            if sess.apply(&del).is_err() {
                return false;
            }
            let vg1 = sess.vg.as_ref().map(|g| g.edges()).unwrap_or_default();
            return sess.tracked[0].vp().cyclic_eq(&vp0) && vg1 == vg0;
        }
    });
    let ok = results.iter().filter(|b| **b).count();
    Outcome {
        name: "round-trips",
        pass: ok == 100,
        detail: format!("{ok}/100 insert-then-delete pairs restore VP and VG"),
    }
}

fn main() {
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let mut outcomes = vec![corridor_counts(), static_vp()];
    dynamic_suite(&mut outcomes);
    outcomes.push(no_op());
    outcomes.push(round_trips());
    let mut failed = 0;
    for o in &outcomes {
        println!("{} {}: {}", if o.pass { "PASS" } else { "FAIL" }, o.name, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", outcomes.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
