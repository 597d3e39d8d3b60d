//! Polynomials, the W-action, Coxeter combinatorics and the Hecke algebra.

use proptest::prelude::*;
use soergel_core::coxeter::{coxeter_projection, negative_lift, positive_lift, writhe, Decoration};
use soergel_core::hecke::{b_s, bott_samelson_class, deodhar_sum, graded_rank_pairing, HeckeElt, LaurentInt};
use soergel_core::ring::int;
use soergel_core::{BraidLetter, CoxeterSystem, Element, Error, Polynomial, RealizationConfig};

fn sys(name: &str) -> CoxeterSystem {
    CoxeterSystem::preset(name).unwrap()
}

fn a(i: usize) -> Polynomial {
    Polynomial::var(i)
}

/// Random homogeneous-or-not polynomial in two variables with small integer coefficients.
fn poly2() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((0u32..3, 0u32..3, -3i64..4), 0..5).prop_map(|terms| {
        Polynomial::from_terms(terms.into_iter().map(|(x, y, c)| (soergel_core::Monomial::from_exponents(&[x, y]), int(c))))
    })
}

fn word(rank: usize, max: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..rank, 0..=max)
}

// ---------------------------------------------------------------- ring

#[test]
fn difference_of_squares() {
    let lhs = a(0).add(&a(1)).mul(&a(0).sub(&a(1)));
    let rhs = a(0).mul(&a(0)).sub(&a(1).mul(&a(1)));
    assert_eq!(lhs, rhs);
    assert_eq!(lhs.degree(), Some(4));
}

#[test]
fn exact_division_detects_remainders() {
    let f = a(0).mul(&a(0)).sub(&a(1).mul(&a(1)));
    assert_eq!(f.exact_div(&a(0).add(&a(1))).unwrap(), a(0).sub(&a(1)));
    assert_eq!(f.exact_div(&a(0)), Err(Error::NonDivisible));
}

#[test]
fn simple_reflections_act_on_roots() {
    let a2 = sys("A2");
    let s = a2.gen_element(0);
    assert_eq!(a2.act(s, &a(0)), a(0).neg());
    assert_eq!(a2.act(s, &a(1)), a(1).add(&a(0)));
    let a1a1 = sys("A1xA1");
    assert_eq!(a1a1.act(a1a1.gen_element(0), &a(1)), a(1));
}

#[test]
fn demazure_of_a_root_is_the_cartan_pairing() {
    for name in ["A2", "B2", "A1xA1", "G2"] {
        let w = sys(name);
        for s in 0..2 {
            for t in 0..2 {
                assert_eq!(w.demazure(s, &a(t)), Polynomial::constant(w.pairing(t, s).clone()), "{name} ∂_{s}(α_{t})");
            }
        }
    }
}

proptest! {
    #[test]
    fn multiplication_is_commutative_and_distributive(f in poly2(), g in poly2(), h in poly2()) {
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
    }

    #[test]
    fn product_divides_back(f in poly2(), g in poly2()) {
        prop_assume!(!g.is_zero());
        prop_assert_eq!(f.mul(&g).exact_div(&g).unwrap(), f);
    }

    #[test]
    fn demazure_squares_to_zero(f in poly2(), s in 0usize..2) {
        for name in ["A2", "B2"] {
            let w = sys(name);
            prop_assert!(w.demazure(s, &w.demazure(s, &f)).is_zero());
        }
    }

    #[test]
    fn demazure_twisted_leibniz(f in poly2(), g in poly2(), s in 0usize..2) {
        let w = sys("B2");
        let x = w.gen_element(s);
        let lhs = w.demazure(s, &f.mul(&g));
        let rhs = w.demazure(s, &f).mul(&g).add(&w.act(x, &f).mul(&w.demazure(s, &g)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn action_is_a_ring_homomorphism(f in poly2(), g in poly2(), x in 0u32..8) {
        let w = sys("B2");
        let x = Element(x);
        prop_assert_eq!(w.act(x, &f.mul(&g)), w.act(x, &f).mul(&w.act(x, &g)));
    }
}

// ---------------------------------------------------------------- coxeter

#[test]
fn braid_relation_and_longest_elements() {
    let a2 = sys("A2");
    assert_eq!(a2.element_of(&[0, 1, 0]), a2.element_of(&[1, 0, 1]));
    assert_eq!(a2.length(a2.longest()), 3);
    assert_eq!(sys("B2").length(sys("B2").longest()), 4);
    assert_eq!(sys("A3").length(sys("A3").longest()), 6);
    assert!(!a2.is_reduced(&[0, 0]));
    assert!(a2.is_reduced(&[0, 1, 0]));
}

#[test]
fn bruhat_order_examples() {
    let a2 = sys("A2");
    let sts = a2.element_of(&[0, 1, 0]);
    assert!(a2.bruhat_leq(a2.gen_element(0), sts));
    assert!(a2.elements().all(|w| a2.bruhat_leq(Element::IDENTITY, w)));
    assert_eq!(a2.elements().filter(|&x| a2.bruhat_leq(x, a2.longest())).count(), 6);
    assert!(!a2.bruhat_leq(a2.gen_element(0), a2.gen_element(1)));
}

#[test]
fn bruhat_graph_closure_agrees_with_subword_criterion() {
    for name in ["A2", "B2", "A1xA1", "A1xA2"] {
        let w = sys(name);
        for x in w.elements() {
            for y in w.elements() {
                assert_eq!(w.bruhat_leq(x, y), w.bruhat_leq_subword(x, y), "{name}: {x:?} ≤ {y:?}");
            }
        }
    }
}

#[test]
fn bruhat_order_is_a_partial_order() {
    let w = sys("B2");
    let els: Vec<Element> = w.elements().collect();
    for &x in &els {
        assert!(w.bruhat_leq(x, x));
        for &y in &els {
            if x != y && w.bruhat_leq(x, y) {
                assert!(!w.bruhat_leq(y, x));
            }
            for &z in &els {
                if w.bruhat_leq(x, y) && w.bruhat_leq(y, z) {
                    assert!(w.bruhat_leq(x, z));
                }
            }
        }
    }
}

#[test]
fn reduced_words_have_the_element_length() {
    for name in ["A2", "B2", "A3", "G2"] {
        let w = sys(name);
        for x in w.elements() {
            let words = w.reduced_words(x);
            assert!(!words.is_empty());
            for rw in words {
                assert_eq!(rw.len() as u32, w.length(x));
                assert_eq!(w.element_of(&rw), x);
            }
        }
    }
}

#[test]
fn stroll_decorations_of_the_worked_example() {
    // s t s u t s with u commuting with s and braiding with t.
    let w = sys("A3");
    let word = [0, 1, 0, 2, 1, 0];
    let d = w.decorate(&word, &[1, 1, 1, 0, 0, 1]).unwrap();
    use Decoration::*;
    assert_eq!(d.decorations, vec![U1, U1, U1, U0, D0, D1]);
    assert_eq!(d.defect(), 0);
    assert_eq!(w.decorate(&word, &[1, 1]), Err(Error::LengthMismatch { word: 6, bits: 2 }));
}

#[test]
fn trivial_strolls() {
    let w = sys("B2");
    let rw = [0, 1, 0, 1];
    assert!(w.decorate(&rw, &[1; 4]).unwrap().decorations.iter().all(|&d| d == Decoration::U1));
    assert!(w.decorate(&[0, 0, 1, 1, 0], &[0; 5]).unwrap().decorations.iter().all(|&d| d == Decoration::U0));
}

#[test]
fn full_subexpression_of_a_reduced_word_has_no_defect() {
    for name in ["A2", "B2", "A3"] {
        let w = sys(name);
        for x in w.elements() {
            for rw in w.reduced_words(x) {
                let full = (1u32 << rw.len()) - 1;
                assert_eq!(w.decorate_mask(&rw, full).defect(), 0);
            }
        }
    }
}

#[test]
fn matsumoto_paths_replay_for_every_pair_of_reduced_words() {
    for name in ["A2", "B2"] {
        let w = sys(name);
        for x in w.elements() {
            let words = w.reduced_words(x);
            for r1 in &words {
                for r2 in &words {
                    let path = w.matsumoto_path(r1, r2).unwrap();
                    assert_eq!(&w.apply_path(r1, &path).unwrap(), r2);
                    if r1 == r2 {
                        assert!(path.is_empty());
                    }
                }
            }
        }
    }
    let a2 = sys("A2");
    let path = a2.matsumoto_path(&[0, 1, 0], &[1, 0, 1]).unwrap();
    assert_eq!(path.len(), 1);
    assert_eq!(path[0].pos, 0);
    let b2 = sys("B2");
    assert_eq!(b2.matsumoto_path(&[0, 1, 0, 1], &[1, 0, 1, 0]).unwrap().len(), 1);
    assert_eq!(a2.matsumoto_path(&[0, 1], &[1, 0]), Err(Error::NotSameElement));
    assert_eq!(a2.matsumoto_path(&[0, 0], &[1, 1]), Err(Error::NotReduced));
}

#[test]
fn matsumoto_paths_are_deterministic() {
    let w = sys("A3");
    let x = w.longest();
    let words = w.reduced_words(x);
    let p1 = w.matsumoto_path(&words[0], words.last().unwrap()).unwrap();
    let p2 = w.matsumoto_path(&words[0], words.last().unwrap()).unwrap();
    assert_eq!(p1, p2);
}

#[test]
fn exchange_witness_ends_in_the_requested_letter() {
    let a2 = sys("A2");
    assert!(a2.exchange_witness(&[0], 0).unwrap().is_empty());
    assert!(a2.exchange_witness(&[0, 1, 0], 0).unwrap().is_empty());
    let p = a2.exchange_witness(&[0, 1, 0], 1).unwrap();
    assert_eq!(a2.apply_path(&[0, 1, 0], &p).unwrap(), vec![1, 0, 1]);
    let b2 = sys("B2");
    let p = b2.exchange_witness(&[0, 1, 0, 1], 0).unwrap();
    assert_eq!(b2.apply_path(&[0, 1, 0, 1], &p).unwrap(), vec![1, 0, 1, 0]);
    assert_eq!(a2.exchange_witness(&[0, 1], 0), Err(Error::NotInDescent));
    for x in b2.elements() {
        for s in 0..2 {
            if b2.is_right_descent(x, s) {
                let start = b2.lexmin_word(x).clone();
                let end = b2.apply_path(&start, &b2.exchange_witness(&start, s).unwrap()).unwrap();
                assert_eq!(end.last(), Some(&s));
                assert_eq!(b2.element_of(&end), x);
            }
        }
    }
}

#[test]
fn lifts_projection_and_writhe() {
    let w = [0usize, 1];
    let p = positive_lift(&w);
    assert!(p.iter().all(|l| l.positive));
    assert_eq!(coxeter_projection(&p), w.to_vec());
    assert_eq!(coxeter_projection(&negative_lift(&w)), w.to_vec());
    let b = [BraidLetter { gen: 0, positive: true }, BraidLetter { gen: 0, positive: true }, BraidLetter { gen: 1, positive: false }];
    assert_eq!(writhe(&b), 1);
    assert_eq!(writhe(&[]), 0);
}

#[test]
fn loader_rejects_bad_data() {
    let bad_cartan = r#"{"generators":["s","t"],"coxeter_matrix":[[1,3],[3,1]],"cartan":[[3,-1],[-1,2]]}"#;
    assert!(CoxeterSystem::from_config(&RealizationConfig::from_json(bad_cartan).unwrap()).is_err());
    let infinite = r#"{"generators":["s","t"],"coxeter_matrix":[[1,0],[0,1]],"cartan":[[2,-2],[-2,2]]}"#;
    assert!(RealizationConfig::from_json(infinite).and_then(|c| CoxeterSystem::from_config(&c)).is_err());
    let mismatch = r#"{"generators":["s","t"],"coxeter_matrix":[[1,3],[3,1]],"cartan":[[2,-1],[-2,2]]}"#;
    assert!(CoxeterSystem::from_config(&RealizationConfig::from_json(mismatch).unwrap()).is_err());
    let ok = r#"{"generators":["s","t"],"coxeter_matrix":[[1,3],[3,1]],"cartan":[[2,-1],[-1,2]]}"#;
    assert_eq!(CoxeterSystem::from_config(&RealizationConfig::from_json(ok).unwrap()).unwrap().order(), 6);
}

// ---------------------------------------------------------------- hecke

fn lv(pairs: &[(i32, i64)]) -> LaurentInt {
    pairs.iter().fold(LaurentInt::zero(), |acc, &(k, c)| acc.add(&LaurentInt::monomial(k, c)))
}

#[test]
fn quadratic_relation() {
    for name in ["A2", "B2", "A3"] {
        let w = sys(name);
        for s in 0..w.rank() {
            let ds = HeckeElt::delta(w.gen_element(s));
            let sq = ds.mul(&w, &ds);
            let expected = HeckeElt::one().add(&ds.scale(&lv(&[(-1, 1), (1, -1)])));
            assert_eq!(sq, expected);
            let lhs = ds.add(&HeckeElt::scalar(LaurentInt::v_pow(1)));
            let rhs = ds.sub(&HeckeElt::scalar(LaurentInt::v_pow(-1)));
            assert!(lhs.mul(&w, &rhs).is_zero());
        }
    }
}

#[test]
fn standard_basis_satisfies_the_braid_relation() {
    let w = sys("A2");
    let (s, t) = (HeckeElt::delta(w.gen_element(0)), HeckeElt::delta(w.gen_element(1)));
    assert_eq!(s.mul(&w, &t).mul(&w, &s), t.mul(&w, &s).mul(&w, &t));
    assert_eq!(HeckeElt::one().mul(&w, &s), s);
}

#[test]
fn bott_samelson_classes() {
    let w = sys("A2");
    assert_eq!(bott_samelson_class(&w, &[0]), b_s(&w, 0));
    assert_eq!(bott_samelson_class(&w, &[0, 0]), b_s(&w, 0).scale(&lv(&[(1, 1), (-1, 1)])));
}

#[test]
fn deodhar_property() {
    for name in ["A2", "B2", "A1xA1"] {
        let w = sys(name);
        for len in 0..=5 {
            for code in 0..(1usize << len) {
                let word: Vec<usize> = (0..len).map(|j| code >> j & 1).collect();
                assert_eq!(bott_samelson_class(&w, &word), deodhar_sum(&w, &word), "{name} {word:?}");
            }
        }
    }
}

#[test]
fn graded_rank_pairing_examples() {
    let w = sys("A2");
    assert_eq!(graded_rank_pairing(&w, &[0], &[0]), lv(&[(0, 1), (2, 1)]));
    assert_eq!(graded_rank_pairing(&w, &[0], &[1]), LaurentInt::v_pow(2));
    assert_eq!(graded_rank_pairing(&w, &[], &[]), LaurentInt::one());
    assert_eq!(graded_rank_pairing(&sys("A1xA1"), &[0], &[1]), LaurentInt::v_pow(2));
}

#[test]
fn standard_and_costandard_classes_are_inverse() {
    let w = sys("B2");
    for s in 0..2 {
        let fs = b_s(&w, s).sub(&HeckeElt::scalar(LaurentInt::v_pow(1)));
        let fsi = b_s(&w, s).sub(&HeckeElt::scalar(LaurentInt::v_pow(-1)));
        assert_eq!(fs, HeckeElt::delta(w.gen_element(s)));
        assert_eq!(fs.mul(&w, &fsi), HeckeElt::one());
    }
}

proptest! {
    #[test]
    fn hecke_multiplication_is_associative(x in word(2, 4), y in word(2, 4), z in word(2, 4)) {
        let w = sys("B2");
        let (bx, by, bz) = (bott_samelson_class(&w, &x), bott_samelson_class(&w, &y), deodhar_sum(&w, &z));
        prop_assert_eq!(bx.mul(&w, &by).mul(&w, &bz), bx.mul(&w, &by.mul(&w, &bz)));
    }

    #[test]
    fn bott_samelson_classes_multiply(x in word(3, 3), y in word(3, 3)) {
        let w = sys("A3");
        let xy: Vec<usize> = x.iter().chain(&y).copied().collect();
        prop_assert_eq!(bott_samelson_class(&w, &x).mul(&w, &bott_samelson_class(&w, &y)), bott_samelson_class(&w, &xy));
    }

    #[test]
    fn graded_rank_pairing_is_symmetric(x in word(2, 4), y in word(2, 4)) {
        let w = sys("A2");
        prop_assert_eq!(graded_rank_pairing(&w, &x, &y), graded_rank_pairing(&w, &y, &x));
    }
}
