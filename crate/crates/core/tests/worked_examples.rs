use std::sync::Arc;

use joinframe::format::{dot_ideals, dot_poset, Workspace};
use joinframe::frames::{descent_check, is_frame_generating, Method};
use joinframe::lattice::{is_distributive, is_modular, is_pentagon, FiniteLattice, FiniteOrder};
use joinframe::morphisms::lift;
use joinframe::speclattices::{jf_bottoms, jf_join, jf_meet, jf_top, jfplus_join, uminus};
use joinframe::{IdealLattice, JoinSpec, Poset, PosetMap};

fn load(name: &str) -> Workspace {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    Workspace::parse(&text).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn spec(p: &Arc<Poset>, sets: &[&[&str]]) -> JoinSpec {
    let sets: Vec<Vec<&str>> = sets.iter().map(|s| s.to_vec()).collect();
    JoinSpec::from_labels(p.clone(), &sets).unwrap()
}

fn same(a: &JoinSpec, b: &JoinSpec) -> bool {
    a.is_subset(b) && b.is_subset(a)
}

fn ideal_labels(lat: &IdealLattice) -> Vec<String> {
    lat.ideals().iter().map(|s| lat.poset().format_set(s)).collect()
}

#[test]
fn no_union_poset_and_specs() {
    let ws = load("nounion.poset");
    let p = ws.poset();
    assert_eq!(p.len(), 6);
    let i = |l: &str| p.index_of(l).unwrap();
    assert!(p.leq(i("a"), i("f")));
    let d = p.set_of(&["d"]).unwrap();
    assert_eq!(p.format_set(&p.downclose(&d).unwrap()), "{a,b,d}");
    assert_eq!(p.join(&p.set_of(&["a", "b"]).unwrap()).unwrap(), Some(i("d")));
    let u1 = ws.spec("U1").unwrap();
    assert!(same(&u1, &spec(p, &[&["a", "b"]])));
    assert_eq!(u1.radius(), 3);
}

#[test]
fn no_union_union_of_maximal_specs_is_not_maximal() {
    let ws = load("nounion.poset");
    let p = ws.poset();
    let (u1, u2) = (ws.spec("U1").unwrap(), ws.spec("U2").unwrap());
    for u in [&u1, &u2] {
        assert!(is_frame_generating(u, &Method::ALL).unwrap().verdict);
    }
    let abc = p.set_of(&["a", "b", "c"]).unwrap();
    assert!(!u1.in_uplus(&abc));
    assert!(!u2.in_uplus(&abc));
    let union = u1.union(&u2).unwrap();
    assert!(union.in_uplus(&abc));
    assert_eq!(p.format_set(&union.gamma(&abc)), "{a,b,c,d,e,f}");

    assert!(is_frame_generating(&jf_join(&[u1.clone(), u2.clone()]).unwrap(), &Method::ALL).unwrap().verdict);
    let (p1, p2) = (u1.uplus().unwrap(), u2.uplus().unwrap());
    let joined = jfplus_join(&[p1.clone(), p2.clone()]).unwrap();
    let plain = p1.union(&p2).unwrap();
    assert!(plain.is_subset(&joined) && !joined.is_subset(&plain));
    assert!(joined.contains(&abc));
}

#[test]
fn strict_meet_of_frame_generating_specs() {
    let ws = load("strict.poset");
    let p = ws.poset();
    let (u1, u2) = (ws.spec("U1").unwrap(), ws.spec("U2").unwrap());
    let meet = u1.intersection(&u2).unwrap();
    assert!(same(&meet, &ws.spec("U1meetU2").unwrap()));
    assert_eq!(u1.radius(), 7);

    assert!(is_frame_generating(&u1, &Method::ALL).unwrap().verdict);
    assert!(is_frame_generating(&u2, &Method::ALL).unwrap().verdict);
    let report = is_frame_generating(&meet, &Method::ALL).unwrap();
    assert!(!report.verdict);
    let w = report.witness.unwrap();
    assert_eq!(p.format_set(&w.set), "{a,b,c,d,e,g}");
    assert!(["h", "i"].contains(&p.label(w.point)));
    let descent = descent_check(&meet);
    assert!(!descent.verdict);
    assert_eq!(p.label(descent.witness.unwrap().point), "h");

    let s = p.set_of(&["a", "b", "c", "d", "e", "g"]).unwrap();
    let up = meet.upsilon(&s);
    assert!(!up.contains(p.index_of("h").unwrap()));
    assert!(!up.contains(p.index_of("i").unwrap()));

    let expected = spec(p, &[&["a", "b"], &["b", "c"], &["c", "d"]]);
    assert!(same(&uminus(&meet), &expected));
    assert!(same(&jf_meet(&[u1.clone(), u2.clone()]).unwrap(), &expected));

    let abc = p.set_of(&["a", "b", "c"]).unwrap();
    assert!(u1.in_uplus(&abc) && u2.in_uplus(&abc));
    assert!(!meet.in_uplus(&abc));
}

#[test]
fn not_mod_pentagon() {
    let ws = load("notmod.poset");
    let p = ws.poset();
    let uinf = ws.spec("Uinf").unwrap();
    let lat = IdealLattice::new(&uinf).unwrap();
    let idx = |labels: &[&str]| lat.index_of(&p.set_of(labels).unwrap()).unwrap();
    let down = |l: &str| lat.index_of(&p.principal_down(p.index_of(l).unwrap())).unwrap();
    let (c, d, e) = (down("c"), down("d"), down("e"));
    let (bc, abc) = (idx(&["b", "c"]), idx(&["a", "b", "c"]));
    assert!(is_pentagon(&lat, c, bc, abc, d, e));
    assert!(!is_modular(&lat));
    assert!(!is_frame_generating(&uinf, &[Method::DownClosed]).unwrap().verdict);

    let top = jf_top(p.clone()).unwrap();
    assert!(top.is_subset(&uinf) && !uinf.is_subset(&top));
    assert!(!same(&uminus(&uinf), &uinf));
}

#[test]
fn not_mod_full_figure_is_distributive() {
    let ws = load("notmod_full.poset");
    let lat = IdealLattice::new(&ws.spec("Uinf").unwrap()).unwrap();
    assert_eq!(lat.len(), 12);
    assert!(is_distributive(&lat));
}

#[test]
fn em_nec_lattices_and_lift() {
    let (wp, wq) = (load("emnec_p.poset"), load("emnec_q.poset"));
    let (p, q) = (wp.poset(), wq.poset());
    let up = wp.spec("Uinf").unwrap();
    assert!(same(&up, &JoinSpec::bp(p.clone())));
    let lp = IdealLattice::new(&up).unwrap();
    assert_eq!(ideal_labels(&lp), ["{}", "{a}", "{b}", "{a,b}"]);
    let uq = wq.spec("Uinf").unwrap();
    assert!(same(&uq, &wq.spec("Uall").unwrap()));
    assert!(!uq.is_ideal(&q.empty_set()).unwrap());
    let lq = IdealLattice::new(&uq).unwrap();
    assert_eq!(ideal_labels(&lq), ["{c}", "{c,d}"]);

    let f = PosetMap::from_pairs(p.clone(), q.clone(), &[("a", "d"), ("b", "d")]).unwrap();
    assert!(f.is_monotone() && !f.is_embedding());
    assert!(f.is_u_morphism(&up).unwrap());
    let fp = lift(&f, &lp, &lq).unwrap();
    let (a, b) = (lp.eta(0), lp.eta(1));
    assert_eq!(lq.element_label(fp.apply(lp.meet(a, b))), "{c}");
    assert_eq!(lq.element_label(lq.meet(fp.apply(a), fp.apply(b))), "{c,d}");
    assert!(!fp.preserves_binary_meets());
}

#[test]
fn not_inj_lattices_and_lift() {
    let (wp, wq) = (load("notinj_p.poset"), load("notinj_q.poset"));
    let (p, q) = (wp.poset(), wq.poset());
    let up = wp.spec("Uinf").unwrap();
    let uq = wq.spec("Uinf").unwrap();
    assert!(same(&uq, &JoinSpec::u_infty(q.clone()).unwrap()));
    let lq = IdealLattice::new(&uq).unwrap();
    assert_eq!(ideal_labels(&lq), ["{}", "{a'}", "{b'}", "{c'}", "{a',b',c',t}"]);

    let f = PosetMap::from_pairs(p.clone(), q.clone(), &[("a", "a'"), ("b", "b'"), ("c", "c'")]).unwrap();
    assert!(f.is_embedding());
    assert!(f.is_u_morphism(&up).unwrap());
    let lp = IdealLattice::new(&up).unwrap();
    let fp = lift(&f, &lp, &lq).unwrap();
    let ab = lp.index_of(&p.set_of(&["a", "b"]).unwrap()).unwrap();
    let bc = lp.index_of(&p.set_of(&["b", "c"]).unwrap()).unwrap();
    assert_eq!(fp.apply(ab), lq.top());
    assert_eq!(fp.apply(bc), lq.top());
    assert!(!fp.is_injective());
}

#[test]
fn embedding_lift_with_frame_generating_sides() {
    let p = Arc::new(Poset::antichain(2));
    let q = Arc::new(Poset::from_covers(&["a", "b", "t"], &[("a", "t"), ("b", "t")]).unwrap());
    let f = PosetMap::by_label(p.clone(), q.clone()).unwrap();
    let (up, uq) = (JoinSpec::u_max(p).unwrap(), JoinSpec::u_max(q).unwrap());
    assert!(is_frame_generating(&up, &Method::ALL).unwrap().verdict);
    assert!(is_frame_generating(&uq, &Method::ALL).unwrap().verdict);
    let (lp, lq) = (IdealLattice::new(&up).unwrap(), IdealLattice::new(&uq).unwrap());
    let fp = lift(&f, &lp, &lq).unwrap();
    for c in 0..lp.len() {
        for d in 0..lp.len() {
            assert_eq!(lq.leq(fp.apply(c), fp.apply(d)), lp.leq(c, d));
        }
    }
}

#[test]
fn two_antichain_base_spec() {
    let p = Arc::new(Poset::antichain(2));
    let b = JoinSpec::bp(p.clone());
    let members: Vec<String> = b.members().map(|s| p.format_set(&s)).collect();
    assert_eq!(members, ["{a}", "{b}"]);
}

#[test]
fn bottoms_and_base_ideals() {
    for name in ["nounion.poset", "strict.poset", "notmod.poset"] {
        let ws = load(name);
        let p = ws.poset();
        let b = JoinSpec::bp(p.clone());
        assert!(is_frame_generating(&b, &Method::ALL).unwrap().verdict);
        let (lo, lo_plus) = jf_bottoms(p.clone()).unwrap();
        assert!(same(&lo, &b));
        assert!(same(&lo_plus, &b.uplus().unwrap()));
        let lat = IdealLattice::new(&b).unwrap();
        assert_eq!(lat.ideals(), p.all_downsets().unwrap());
        assert!(is_distributive(&lat));
        for s in ws.specs() {
            let plus = s.spec.uplus().unwrap();
            assert!(same(&plus.uplus().unwrap(), &plus));
            assert!(s.spec.is_subset(&plus));
        }
    }
}

fn dot_nodes(dot: &str) -> usize {
    dot.lines().filter(|l| l.trim_start().starts_with('"') && !l.contains("->")).count()
}

#[test]
fn dot_exports() {
    let ws = load("nounion.poset");
    let dot = dot_poset(ws.poset());
    assert_eq!(dot_nodes(&dot), 6);
    assert_eq!(dot.matches("->").count(), 6);

    let q = load("emnec_q.poset");
    let dot = dot_ideals(&IdealLattice::new(&q.spec("Uinf").unwrap()).unwrap());
    assert_eq!(dot.matches("->").count(), 1);
    assert_eq!(dot_nodes(&dot), 2);
}

#[test]
fn fixture_files_round_trip() {
    for name in [
        "nounion.poset",
        "strict.poset",
        "notmod.poset",
        "notmod_full.poset",
        "emnec_p.poset",
        "emnec_q.poset",
        "notinj_p.poset",
        "notinj_q.poset",
    ] {
        let ws = load(name);
        let text = Workspace::parse(&ws.to_text()).unwrap();
        assert!(ws.same_content(&text), "{name} text");
        let json = Workspace::from_json(&ws.to_json()).unwrap();
        assert!(ws.same_content(&json), "{name} json");
    }
}
