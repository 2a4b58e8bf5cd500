use proptest::prelude::*;
use trkr::braid::{BraidWord, ResolvedWord};
use trkr::exactalg::{Poly, Rat};
use trkr::mfcore::{
    arc_row, braid_complex, cached_chi_pair, crossing_complex, resolved_complex, ComplexOptions,
    Gamma0Form, MatrixFactorization,
};

/// `a (x_head^{N+1} − x_tail^{N+1})`, computed directly.
fn arc_potential(nvars: usize, n: u32, tail: usize, head: usize) -> Poly {
    let p = &Poly::var(nvars, head).pow(n + 1) - &Poly::var(nvars, tail).pow(n + 1);
    &Poly::a(nvars) * &p
}

#[test]
fn arc_rows_factor_the_arc_potential() {
    for n in 1..=4 {
        let r = arc_row(4, n, 1, 2);
        assert_eq!(&r.a0 * &r.a1, arc_potential(4, n, 1, 2));
        // A chain of arcs: the potential telescopes.
        let rows = [arc_row(4, n, 1, 2), arc_row(4, n, 2, 3)];
        let mf = MatrixFactorization::koszul(&rows, 4, n).unwrap();
        assert_eq!(mf.rank(), 4);
        assert_eq!(*mf.potential(), arc_potential(4, n, 1, 3));
        assert!(mf.check_square());
        assert!(mf.check_homogeneity().is_ok());
    }
}

#[test]
fn tensor_adds_potentials() {
    let n = 2;
    let a = MatrixFactorization::koszul(&[arc_row(5, n, 1, 2)], 5, n).unwrap();
    let b = MatrixFactorization::koszul(&[arc_row(5, n, 3, 4)], 5, n).unwrap();
    let t = a.tensor(&b).unwrap();
    assert_eq!(t.rank(), 4);
    assert_eq!(
        *t.potential(),
        &arc_potential(5, n, 1, 2) + &arc_potential(5, n, 3, 4)
    );
    assert!(t.check_square());
}

#[test]
fn crossing_complexes_are_chain_complexes() {
    for n in 1..=3 {
        for positive in [true, false] {
            let c = crossing_complex(positive, n).unwrap();
            c.check_all().unwrap();
        }
    }
}

#[test]
fn chi_maps_for_both_presentations() {
    for n in 1..=3 {
        for form in [Gamma0Form::Arcs, Gamma0Form::Linear] {
            let p = cached_chi_pair(n, form).unwrap();
            assert!(p.verify(), "N={n} {form:?}");
            assert_eq!(p.hmf_dims, (1, 1));
        }
    }
}

#[test]
fn resolved_complexes_have_the_expected_size() {
    // One wide edge contributes two Koszul rows; each closed strand one.
    for (w, rows) in [("b=1;", 1), ("b=2;", 2), ("b=2; t1", 2), ("b=3; t1 t2", 3)] {
        let g: ResolvedWord = w.parse().unwrap();
        let c = resolved_complex(&g, 2, ComplexOptions { eliminate: true }).unwrap();
        assert_eq!(c.vertices.len(), 1);
        assert!(c.vertices[0].mf.rank() >= 1 << rows, "{w}");
        c.check_all().unwrap();
    }
}

#[test]
fn cones_are_chain_complexes() {
    for b in ["b=1;", "b=2; 1", "b=2; -1"] {
        let c = braid_complex(&b.parse().unwrap(), 1, ComplexOptions { eliminate: true }).unwrap();
        c.cone_of_a_reduction().check_all().unwrap();
    }
}

fn small_braid() -> impl Strategy<Value = BraidWord> {
    (2usize..=3).prop_flat_map(|b| {
        let letter = (1..b as i32).prop_flat_map(|i| prop_oneof![Just(i), Just(-i)]);
        proptest::collection::vec(letter, 0..=3).prop_map(move |l| BraidWord::new(b, l).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn braid_complexes_satisfy_all_checks(b in small_braid(), n in 1u32..=3, eliminate in any::<bool>()) {
        let c = braid_complex(&b, n, ComplexOptions { eliminate }).unwrap();
        prop_assert_eq!(c.vertices.len(), 1 << b.crossings());
        prop_assert!(c.check_all().is_ok());
        let s = c.specialize(1);
        prop_assert!(s.check_all().is_ok());
        // Potential is zero on a closed braid.
        prop_assert!(c.vertices.iter().all(|v| v.mf.potential().is_zero()));
    }

    #[test]
    fn koszul_factorizations_square_to_their_potential(
        heads in proptest::collection::vec((1usize..5, 1usize..5), 1..4),
        n in 1u32..=3,
    ) {
        let rows: Vec<_> = heads.iter().map(|&(t, h)| arc_row(5, n, t, h)).collect();
        let mf = MatrixFactorization::koszul(&rows, 5, n).unwrap();
        let mut w = Poly::zero(5);
        for &(t, h) in &heads {
            w = &w + &arc_potential(5, n, t, h);
        }
        prop_assert_eq!(mf.potential(), &w);
        prop_assert!(mf.check_square());
        let at_one = mf.potential().set_a(&Rat::one());
        prop_assert_eq!(at_one, w.set_a(&Rat::one()));
    }
}
