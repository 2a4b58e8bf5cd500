use std::collections::BTreeMap;

use trkr::braid::BraidWord;
use trkr::homology::{
    cone_pi0_check, decompose_profile, sln_homology, stab_check, total_homology, unknot_homology,
    verify_structure_theorem, GradedQaModule, HomologyOptions, SlnDims,
};

fn braid(s: &str) -> BraidWord {
    s.parse().unwrap()
}

fn opts(kmax: i32) -> HomologyOptions {
    HomologyOptions {
        kmax: Some(kmax),
        ..HomologyOptions::default()
    }
}

/// `(i, k) → dim` of the sl(N) homology, forgetting `ε`.
fn poincare(d: &SlnDims) -> BTreeMap<(i32, i32), usize> {
    d.iter().map(|(&(_, i, k), &v)| ((i, k), v)).collect()
}

#[test]
fn unknot_is_quantum_integer() {
    for n in 1..=3u32 {
        let d = sln_homology(&BraidWord::unknot(0), n, 2 * n as i32 + 5, true).unwrap();
        let expected: SlnDims = (0..n as i32)
            .map(|l| ((1, 0, 1 - n as i32 + 2 * l), 1))
            .collect();
        assert_eq!(d, expected, "N={n}");
    }
}

#[test]
fn sl2_matches_khovanov_homology() {
    // Unreduced Khovanov homology over Q, with homological degree i = −t.
    let trefoil: BTreeMap<(i32, i32), usize> =
        [((0, 1), 1), ((0, 3), 1), ((-2, 5), 1), ((-3, 9), 1)].into();
    let d = sln_homology(&braid("b=2; 1 1 1"), 2, 13, true).unwrap();
    assert_eq!(poincare(&d), trefoil);
    let hopf: BTreeMap<(i32, i32), usize> =
        [((0, 0), 1), ((0, 2), 1), ((-2, 4), 1), ((-2, 6), 1)].into();
    let d = sln_homology(&braid("b=2; 1 1"), 2, 11, true).unwrap();
    assert_eq!(poincare(&d), hopf);
}

#[test]
fn small_unknots_match_closed_forms() {
    for (m, n) in [(0, 1), (0, 2), (0, 3), (1, 1), (1, 2)] {
        let kmax = 2 * n as i32 + 2 * m as i32 + 5;
        let r = total_homology(&BraidWord::unknot(m as usize), n, opts(kmax)).unwrap();
        assert_eq!(r.module, unknot_homology(m, n, kmax), "U{m} N={n}");
        assert!(r.audits.all_pass());
    }
}

#[test]
fn elimination_does_not_change_homology() {
    for (b, n) in [("b=2; 1", 2), ("b=3; 1 -2", 1), ("b=2; -1 -1", 1)] {
        let kmax = 2 * n + 7;
        let mut o = opts(kmax);
        let with = total_homology(&braid(b), n as u32, o).unwrap();
        o.eliminate = false;
        let without = total_homology(&braid(b), n as u32, o).unwrap();
        assert_eq!(with.module, without.module, "{b}");
        assert_eq!(with.sln_dims, without.sln_dims, "{b}");
    }
}

#[test]
fn reports_render_and_serialize() {
    let r = total_homology(&BraidWord::unknot(0), 2, opts(9)).unwrap();
    assert!(r
        .render_text()
        .contains("ε=1 i=0 free: τ⁻¹(q⁻¹+q); torsion: τ⁻¹ q³/(1−q²)"));
    let v = r.to_json();
    assert_eq!(v["sl"], -1);
    assert_eq!(v["components"][0]["free"].as_array().unwrap().len(), 2);
    let text = serde_json::to_string(&v).unwrap();
    assert_eq!(serde_json::from_str::<serde_json::Value>(&text).unwrap(), v);
    assert_eq!(GradedQaModule::new().to_json(), serde_json::json!([]));
}

#[test]
fn structure_audit_catches_violations() {
    let mut r = total_homology(&BraidWord::unknot(0), 1, opts(7)).unwrap();
    assert!(verify_structure_theorem(&r).pass);
    // A free generator at the wrong a-shift and a long torsion summand.
    r.module.add_free(1, 0, 3, 0, 1);
    r.module.add_torsion(1, 0, 2, -1, 4, 1);
    let audit = verify_structure_theorem(&r);
    assert!(!audit.pass);
    assert!(audit.failures.len() >= 3, "{:?}", audit.failures);
}

#[test]
fn profile_decomposition_recovers_generators() {
    // M = Q[a]{-3} ⊕ Q[a]/(a){-1} ⊕ Q[a]/(a²){-3} on the window -3..=3.
    let dim = |j: i32| -> usize {
        [(-3, 2), (-1, 3), (1, 1), (3, 1)]
            .into_iter()
            .find(|e| e.0 == j)
            .map_or(0, |e| e.1)
    };
    // Rank of a^{(t-s)/2}: M_s → M_t.
    let r = |s: i32, t: i32| -> usize {
        if s == t {
            return dim(s);
        }
        let free = 1;
        let long = usize::from(s == -3 && t == -1);
        free + long
    };
    let (free, torsion, stable) = decompose_profile(-3, 3, &r);
    assert_eq!(free, BTreeMap::from([(-3, 1)]));
    assert_eq!(torsion, BTreeMap::from([((1, -1), 1), ((2, -3), 1)]));
    assert!(stable);
}

#[test]
fn stabilization_and_cone_on_small_braids() {
    for b in ["b=1;", "b=2; 1"] {
        let v = stab_check(&braid(b), 1, None, true).unwrap();
        assert!(v.pass(), "{b}: {:?}", v.failures);
        let c = cone_pi0_check(&braid(b), 1, None, true).unwrap();
        assert!(c.pass, "{b}: {:?}", c.mismatches);
    }
}

#[test]
fn negative_stabilization_changes_the_module() {
    let u0 = total_homology(&BraidWord::unknot(0), 1, opts(9)).unwrap();
    let u1 = total_homology(&BraidWord::unknot(1), 1, opts(9)).unwrap();
    assert_ne!(u0.module, u1.module);
    // The sl(N) part only sees the topological unknot.
    assert_eq!(
        u0.sln_dims.values().sum::<usize>(),
        u1.sln_dims.values().sum::<usize>()
    );
}
