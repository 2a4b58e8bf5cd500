use std::collections::BTreeSet;

use proptest::prelude::*;
use trkr::braid::{
    cube, enumerate_resolved, induction_case, induction_case_with, replay, transverse_move,
    BraidWord, InductionCase, Move, ResolvedWord,
};

fn braid_word() -> impl Strategy<Value = BraidWord> {
    (2usize..=5).prop_flat_map(|b| {
        let letter = (1..b as i32).prop_flat_map(|i| prop_oneof![Just(i), Just(-i)]);
        proptest::collection::vec(letter, 0..8).prop_map(move |l| BraidWord::new(b, l).unwrap())
    })
}

fn resolved_word() -> impl Strategy<Value = ResolvedWord> {
    (2usize..=5).prop_flat_map(|b| {
        proptest::collection::vec(1..b, 0..9).prop_map(move |l| ResolvedWord::closed(b, l))
    })
}

/// Every word with letters `1..b` of total weight at most `w`, up to rotation.
fn necklaces(b: usize, w: usize) -> BTreeSet<Vec<usize>> {
    fn rec(b: usize, left: usize, cur: &mut Vec<usize>, out: &mut BTreeSet<Vec<usize>>) {
        let rot = (0..cur.len().max(1))
            .map(|k| {
                let mut r = cur.clone();
                r.rotate_left(k.min(cur.len()));
                r
            })
            .min()
            .unwrap();
        out.insert(rot);
        for l in 1..b {
            if l <= left {
                cur.push(l);
                rec(b, left - l, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    rec(b, w, &mut Vec::new(), &mut out);
    out
}

#[test]
fn enumeration_counts_match_necklaces() {
    let mut total = 0;
    for b in 1..=4 {
        let words = enumerate_resolved(b, 6);
        assert_eq!(words.len(), necklaces(b, 6).len(), "b={b}");
        assert!(words.iter().all(|g| g.weight() <= 6 && g.strands == b));
        total += words.len();
    }
    assert_eq!(total, 50);
}

#[test]
fn unknot_presentations() {
    for m in 0..4 {
        let u = BraidWord::unknot(m);
        assert_eq!(u.strands(), m + 1);
        assert_eq!(u.self_linking(), -1 - 2 * m as i32);
    }
    assert_eq!(BraidWord::unknot(0).to_string(), "b=1;");
    assert_eq!(BraidWord::unknot(2).to_string(), "b=3; -1 -2");
}

#[test]
fn malformed_input_is_rejected() {
    for s in ["", "b=2", "2; 1", "b=2; 0", "b=2; 2", "b=x; 1", "b=2; 1.5"] {
        assert!(s.parse::<BraidWord>().is_err(), "{s:?}");
    }
    assert!("b=3; t3".parse::<ResolvedWord>().is_err());
    assert!("b=3; t0".parse::<ResolvedWord>().is_err());
}

#[test]
fn cube_has_one_vertex_per_resolution() {
    let b: BraidWord = "b=3; 1 -2 1".parse().unwrap();
    let c = cube(&b);
    assert_eq!(c.len(), 8);
    let degrees: BTreeSet<i32> = c.iter().map(|v| v.homological_degree()).collect();
    assert_eq!(degrees.len(), 4);
}

proptest! {
    #[test]
    fn braid_text_round_trips(b in braid_word()) {
        let text = b.to_string();
        prop_assert_eq!(text.parse::<BraidWord>().unwrap(), b);
    }

    #[test]
    fn resolved_text_round_trips(g in resolved_word()) {
        prop_assert_eq!(g.to_string().parse::<ResolvedWord>().unwrap(), g);
    }

    #[test]
    fn transverse_moves_preserve_self_linking(b in braid_word(), eta in 1i32..4, site in 0usize..8) {
        let sl = b.self_linking();
        let eta = if eta < b.strands() as i32 { eta } else { 1 };
        for mv in [Move::StabPos, Move::Conjugate { eta }, Move::Conjugate { eta: -eta }, Move::InsertPair { site: site.min(b.letters().len()), letter: eta }] {
            let c = transverse_move(&b, &mv).unwrap();
            prop_assert_eq!(c.self_linking(), sl, "{:?}", mv);
        }
        if let Ok(c) = transverse_move(&b, &Move::BraidRelation { site }) {
            prop_assert_eq!(c.self_linking(), sl);
        }
        let neg = transverse_move(&b, &Move::StabNeg).unwrap();
        prop_assert_eq!(neg.self_linking(), sl - 2);
        let back = transverse_move(&transverse_move(&b, &Move::StabPos).unwrap(), &Move::DestabPos).unwrap();
        prop_assert_eq!(back, b);
    }

    #[test]
    fn induction_trace_reaches_the_normal_form(g in resolved_word(), picks in proptest::collection::vec(0usize..4, 16)) {
        let ind = induction_case(&g);
        prop_assert_eq!(replay(&g.letters, &ind.trace).unwrap(), ind.case.normalized());
        let mut it = picks.into_iter().cycle();
        let ind = induction_case_with(&g, &mut |n| it.next().unwrap() % n.max(1));
        let normal = ind.case.normalized();
        prop_assert_eq!(replay(&g.letters, &ind.trace).unwrap(), normal.clone());
        // The focus letter sits at the end in the prescribed pattern.
        match ind.case {
            InductionCase::Empty => prop_assert!(g.letters.is_empty()),
            InductionCase::CaseA { word, i } => prop_assert!(word.iter().all(|&l| l < i)),
            InductionCase::CaseB { j, .. } => prop_assert!(normal.ends_with(&[j, j])),
            InductionCase::CaseC { j, .. } => prop_assert!(normal.ends_with(&[j, j - 1, j])),
        }
    }

    #[test]
    fn cyclic_normal_form_is_rotation_invariant(g in resolved_word(), k in 0usize..9) {
        let mut r = g.letters.clone();
        if !r.is_empty() {
            let k = k % r.len();
            r.rotate_left(k);
        }
        let h = ResolvedWord::closed(g.strands, r);
        prop_assert_eq!(g.cyclic_normal_form(), h.cyclic_normal_form());
    }
}
