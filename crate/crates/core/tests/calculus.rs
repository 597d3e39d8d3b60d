//! The localized morphism calculus, its generators and relations, and light leaves.

use std::sync::OnceLock;

use proptest::prelude::*;
use soergel_core::coxeter::Decoration;
use soergel_core::hecke::graded_rank_pairing;
use soergel_core::ring::int;
use soergel_core::soergel::{parse_bits, Calculus, LocalizedMorphism};
use soergel_core::{CoxeterSystem, Error, Polynomial, RationalFunction};

fn calc(name: &'static str) -> &'static Calculus {
    static A2: OnceLock<Calculus> = OnceLock::new();
    static B2: OnceLock<Calculus> = OnceLock::new();
    static A1A1: OnceLock<Calculus> = OnceLock::new();
    static A3: OnceLock<Calculus> = OnceLock::new();
    let cell = match name {
        "A2" => &A2,
        "B2" => &B2,
        "A1xA1" => &A1A1,
        "A3" => &A3,
        _ => unreachable!(),
    };
    cell.get_or_init(|| Calculus::new(CoxeterSystem::preset(name).unwrap()))
}

fn a(i: usize) -> Polynomial {
    Polynomial::var(i)
}

/// One layer applied on top of the current word.
#[derive(Clone, Debug)]
enum Layer {
    Unit(usize, usize),
    Counit(usize),
    Merge(usize),
    Split(usize),
    Vertex(usize),
    Poly(usize, usize),
}

/// Builds `layer_k ∘ … ∘ layer_1` starting from `B_start`, skipping layers
/// that do not fit the current word and keeping words at most four letters long.
fn composite(c: &Calculus, start: &[usize], layers: &[Layer]) -> LocalizedMorphism {
    let mut f = c.identity(start);
    for layer in layers {
        let w = f.tgt().clone();
        let n = w.len();
        let put = |pos: usize, width: usize, g: LocalizedMorphism| c.tensor_all(&[c.identity(&w[..pos]), g, c.identity(&w[pos + width..])]);
        let step = match *layer {
            Layer::Unit(pos, s) if n < 4 => {
                let pos = pos % (n + 1);
                Some(put(pos, 0, c.unit(s % c.sys().rank())))
            }
            Layer::Counit(pos) if n > 0 => Some(put(pos % n, 1, c.counit(w[pos % n]))),
            Layer::Merge(pos) if n > 1 => {
                let pos = pos % (n - 1);
                (w[pos] == w[pos + 1]).then(|| put(pos, 2, c.merge(w[pos])))
            }
            Layer::Split(pos) if n > 0 && n < 4 => Some(put(pos % n, 1, c.split(w[pos % n]))),
            Layer::Vertex(pos) => c.sys().braid_moves(&w).into_iter().nth(pos).map(|mv| c.braid_move_morphism(&w, &mv).unwrap()),
            Layer::Poly(pos, var) => Some(put(pos % (n + 1), 0, c.poly(&a(var % c.sys().rank())))),
            _ => None,
        };
        if let Some(g) = step {
            f = c.compose(&g, &f).unwrap();
        }
    }
    f
}

fn layer() -> impl Strategy<Value = Layer> {
    prop_oneof![
        (0usize..5, 0usize..3).prop_map(|(p, s)| Layer::Unit(p, s)),
        (0usize..5).prop_map(Layer::Counit),
        (0usize..5).prop_map(Layer::Merge),
        (0usize..5).prop_map(Layer::Split),
        (0usize..3).prop_map(Layer::Vertex),
        (0usize..5, 0usize..3).prop_map(|(p, v)| Layer::Poly(p, v)),
    ]
}

fn start_word() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..2, 0..=3)
}

// ---------------------------------------------------------------- generators and relations

#[test]
fn identities() {
    let c = calc("A2");
    let e = c.identity(&[]);
    assert_eq!(e.entries().len(), 1);
    assert_eq!(e.entry(0, 0), RationalFunction::one());
    let id = c.identity(&[0]);
    assert_eq!(id.entries().len(), 2);
    assert_eq!(c.tensor(&c.identity(&[0]), &c.identity(&[1])), c.identity(&[0, 1]));
}

#[test]
fn barbell_is_the_root() {
    for name in ["A2", "B2", "A1xA1"] {
        let c = calc(name);
        for s in 0..2 {
            let b = c.compose(&c.counit(s), &c.unit(s)).unwrap();
            assert_eq!(b.entry(0, 0), RationalFunction::from_poly(a(s)));
            assert_eq!(b.degree(), 2);
        }
    }
}

#[test]
fn unit_and_counit_normalization() {
    let c = calc("A2");
    assert_eq!(c.counit(0).entry(0, 0), RationalFunction::one());
    assert!(c.counit(0).entry(0, 1).is_zero());
    assert_eq!(c.unit(0).entry(0, 0), RationalFunction::from_poly(a(0)));
    assert!(c.unit(0).entry(1, 0).is_zero());
}

#[test]
fn frobenius_relations() {
    for name in ["A2", "B2"] {
        let c = calc(name);
        for s in 0..2 {
            let id = c.identity(&[s]);
            let (unit, merge, split) = (c.unit(s), c.merge(s), c.split(s));
            assert_eq!(c.compose(&merge, &c.tensor(&id, &unit)).unwrap(), id);
            assert_eq!(c.compose(&merge, &c.tensor(&unit, &id)).unwrap(), id);
            assert_eq!(c.compose(&c.tensor(&id, &c.counit(s)), &split).unwrap(), id);
            let left = c.compose(&merge, &c.tensor(&merge, &id)).unwrap();
            let right = c.compose(&merge, &c.tensor(&id, &merge)).unwrap();
            assert_eq!(left, right);
            let left = c.compose(&c.tensor(&split, &id), &split).unwrap();
            let right = c.compose(&c.tensor(&id, &split), &split).unwrap();
            assert_eq!(left, right);
            // Needle: splitting a strand and merging it back closes a loop, which vanishes.
            assert!(c.compose(&merge, &split).unwrap().is_zero());
            assert!(c.compose(&c.cap(s), &split).unwrap().is_zero());
            assert_eq!(merge.degree(), -1);
            assert_eq!(split.degree(), -1);
        }
    }
}

#[test]
fn trivalent_vertices_are_unique() {
    for name in ["A2", "B2", "A1xA1"] {
        let c = calc(name);
        for s in 0..2 {
            assert_eq!(c.trivalent_report(s).nullity_after_normalization, 0);
        }
    }
}

#[test]
fn sliding_relation() {
    let c = calc("B2");
    let polys = [a(0), a(1), a(0).mul(&a(1)), a(1).mul(&a(1)).add(&a(0).mul(&a(0)).scale(&int(3)))];
    for s in 0..2 {
        let id = c.identity(&[s]);
        let broken = c.compose(&c.unit(s), &c.counit(s)).unwrap();
        for f in &polys {
            let sf = c.sys().act(c.sys().gen_element(s), f);
            let lhs = c.region_multiply(&id, 0, f).unwrap();
            let rhs = c.region_multiply(&id, 1, &sf).unwrap().add(&c.left_multiply(&c.sys().demazure(s, f), &broken)).unwrap();
            assert_eq!(lhs, rhs);
        }
        assert_eq!(c.region_multiply(&id, 1, &Polynomial::one()).unwrap(), id);
    }
}

#[test]
fn barbell_between_strands_is_a_region_polynomial() {
    let c = calc("A2");
    let id = c.identity(&[0, 1]);
    let barbell = c.compose(&c.counit(0), &c.unit(0)).unwrap();
    let inserted = c.tensor_all(&[c.identity(&[0]), barbell, c.identity(&[1])]);
    assert_eq!(inserted, c.region_multiply(&id, 1, &a(0)).unwrap());
}

#[test]
fn four_valent_vertex() {
    let c = calc("A1xA1");
    let (x, y) = (c.vertex(0, 1).unwrap(), c.vertex(1, 0).unwrap());
    assert_eq!(c.compose(&y, &x).unwrap(), c.identity(&[0, 1]));
    assert_eq!(c.flip(&x).unwrap(), y);
    assert_eq!(x.entry(0b11, 0b11), RationalFunction::one());
    // A dot on one output slides through to a dot on the matching input.
    let dotted = c.compose(&c.tensor(&c.identity(&[1]), &c.counit(0)), &x).unwrap();
    assert_eq!(dotted, c.tensor(&c.counit(0), &c.identity(&[1])));
    assert_eq!(c.jones_wenzl(0, 1).unwrap(), c.compose(&c.unit(1), &c.counit(0)).unwrap());
    assert_eq!(c.vertex_report(0, 1).unwrap().nullity_after_normalization, 0);
}

#[test]
fn six_valent_vertex_dot_relation() {
    let c = calc("A2");
    for (s, t) in [(0, 1), (1, 0)] {
        let x = c.vertex(s, t).unwrap();
        assert_eq!(x.degree(), 0);
        assert_eq!(x.entry(0b111, 0b111), RationalFunction::one());
        assert_eq!(c.dot_relation_lhs(s, t).unwrap(), c.dot_relation_rhs(s, t).unwrap());
        let jw = c.jones_wenzl(s, t).unwrap();
        let through_t = c.compose(&c.tensor(&c.identity(&[t]), &c.unit(s)), &c.tensor(&c.counit(s), &c.identity(&[t]))).unwrap();
        let through_s = c.compose(&c.tensor(&c.unit(t), &c.identity(&[s])), &c.tensor(&c.identity(&[s]), &c.counit(t))).unwrap();
        assert_eq!(jw, through_t.add(&through_s).unwrap());
        assert_eq!(c.vertex_report(s, t).unwrap().nullity_after_normalization, 0);
    }
}

#[test]
fn eight_valent_vertex_is_not_supported() {
    assert_eq!(calc("B2").vertex(0, 1).unwrap_err(), Error::UnsupportedM(4));
    assert_eq!(calc("B2").jones_wenzl(0, 1).unwrap_err(), Error::UnsupportedM(4));
}

#[test]
fn relation_validator_passes_on_presets() {
    for name in ["A2", "A1xA1", "A3", "B2"] {
        let report = calc(name).validate_relations();
        assert!(report.all_passed(), "{name}: {:?}", report.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
        assert!(!report.checks.is_empty());
    }
}

#[test]
fn flip_of_generators() {
    let c = calc("A2");
    assert_eq!(c.flip(&c.unit(0)).unwrap(), c.counit(0));
    assert_eq!(c.flip(&c.counit(1)).unwrap(), c.unit(1));
    assert_eq!(c.flip(&c.merge(0)).unwrap(), c.split(0));
    assert_eq!(c.flip(&c.vertex(0, 1).unwrap()).unwrap(), c.vertex(1, 0).unwrap());
    assert_eq!(c.flip(&c.unit(0).without_tree()).unwrap_err(), Error::NoTree);
}

// ---------------------------------------------------------------- random composites

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composites_are_well_formed(start in start_word(), layers in prop::collection::vec(layer(), 0..6)) {
        let c = calc("A2");
        let f = composite(c, &start, &layers);
        prop_assert!(f.check_well_formed(c.sys()).is_ok());
        prop_assert!(c.denominators_are_roots(&f));
        prop_assert_eq!(c.eval(f.tree().unwrap()).unwrap(), f.clone());
    }

    #[test]
    fn identity_is_neutral(start in start_word(), layers in prop::collection::vec(layer(), 0..5)) {
        let c = calc("A2");
        let f = composite(c, &start, &layers);
        prop_assert_eq!(c.compose(&c.identity(f.tgt()), &f).unwrap(), f.clone());
        prop_assert_eq!(c.compose(&f, &c.identity(f.src())).unwrap(), f.clone());
        prop_assert_eq!(c.tensor(&c.identity(&[]), &f), f.clone());
    }

    #[test]
    fn flip_is_an_involution_and_agrees_with_the_twisted_transpose(start in start_word(), layers in prop::collection::vec(layer(), 0..5)) {
        let c = calc("A2");
        let f = composite(c, &start, &layers);
        let ff = c.flip(&f).unwrap();
        prop_assert_eq!(c.flip(&ff).unwrap(), f.clone());
        prop_assert_eq!(c.flip_by_twist(&f), ff);
    }

    #[test]
    fn flip_is_contravariant(start in start_word(), l1 in prop::collection::vec(layer(), 0..4), l2 in prop::collection::vec(layer(), 0..4)) {
        let c = calc("A1xA1");
        let f = composite(c, &start, &l1);
        let g = composite(c, f.tgt(), &l2);
        let gf = c.compose(&g, &f).unwrap();
        prop_assert_eq!(c.flip(&gf).unwrap(), c.compose(&c.flip(&f).unwrap(), &c.flip(&g).unwrap()).unwrap());
        prop_assert_eq!(gf.degree(), g.degree() + f.degree());
    }

    #[test]
    fn tensor_is_bifunctorial(s1 in start_word(), s2 in start_word(), l1 in prop::collection::vec(layer(), 0..3), l2 in prop::collection::vec(layer(), 0..3), l3 in prop::collection::vec(layer(), 0..3), l4 in prop::collection::vec(layer(), 0..3)) {
        let c = calc("A2");
        let h2 = composite(c, &s1, &l1);
        let h1 = composite(c, h2.tgt(), &l2);
        let k2 = composite(c, &s2, &l3);
        let k1 = composite(c, k2.tgt(), &l4);
        let lhs = c.tensor(&c.compose(&h1, &h2).unwrap(), &c.compose(&k1, &k2).unwrap());
        let rhs = c.compose(&c.tensor(&h1, &k1), &c.tensor(&h2, &k2)).unwrap();
        prop_assert_eq!(lhs.degree(), h1.degree() + h2.degree() + k1.degree() + k2.degree());
        prop_assert_eq!(lhs, rhs);
    }
}

// ---------------------------------------------------------------- light leaves

#[test]
fn plans_are_deterministic() {
    let c = calc("A2");
    let w = [0, 1, 0, 1, 1];
    for mask in 0..32 {
        assert_eq!(c.default_plan(&w, mask).unwrap(), c.default_plan(&w, mask).unwrap());
    }
    let plan = c.default_plan(&[0, 0], parse_bits("10").unwrap()).unwrap();
    assert_eq!(plan.steps[1].decoration, Decoration::D0);
    assert!(plan.steps[1].psi.is_empty());
    let plan = c.default_plan(&[0, 1, 0], 0b111).unwrap();
    assert!(plan.steps.iter().all(|s| s.phi.is_empty()));
}

#[test]
fn single_letter_leaves() {
    let c = calc("A2");
    assert_eq!(c.light_leaf(&[0], 1).unwrap(), c.identity(&[0]));
    assert_eq!(c.light_leaf(&[0], 0).unwrap(), c.counit(0));
}

#[test]
fn worked_example_leaf() {
    let c = calc("A3");
    let w = [0, 1, 0, 2, 1, 0];
    let mask = parse_bits("111001").unwrap();
    let leaf = c.light_leaf(&w, mask).unwrap();
    assert_eq!(leaf.degree(), 0);
    assert_eq!(leaf.tgt(), &vec![0, 1]);
    leaf.check_well_formed(c.sys()).unwrap();
    let basis = c.hom_basis(&w, &[0, 1]).unwrap();
    let coeffs = c.express_in_basis(&leaf, &basis).unwrap();
    assert_eq!(c.combine(&basis, &coeffs, 0).unwrap(), leaf);
}

#[test]
fn leaf_degree_is_the_defect() {
    let c = calc("A2");
    for len in 0..=5 {
        for code in 0..(1usize << len) {
            let w: Vec<usize> = (0..len).map(|j| code >> j & 1).collect();
            for mask in 0..(1u32 << len) {
                let leaf = c.light_leaf(&w, mask).unwrap();
                assert_eq!(leaf.degree(), c.sys().decorate_mask(&w, mask).defect(), "{w:?} {mask:b}");
                assert_eq!(leaf.tgt(), c.sys().lexmin_word(c.sys().element_of_sub(&w, mask)));
            }
        }
    }
}

/// B2 leaves whose plans need no 8-valent vertex.
#[test]
fn leaves_avoiding_long_braid_moves_work_in_b2() {
    let c = calc("B2");
    for w in [vec![0, 0, 1], vec![0, 1, 1, 0], vec![1, 0, 1]] {
        for mask in 0..(1u32 << w.len()) {
            let leaf = c.light_leaf(&w, mask).unwrap();
            assert_eq!(leaf.degree(), c.sys().decorate_mask(&w, mask).defect());
        }
    }
}

#[test]
fn double_leaves_examples() {
    let c = calc("A2");
    assert_eq!(c.double_leaf(&[0], 1, &[0], 1).unwrap(), c.identity(&[0]));
    let dd = c.double_leaf(&[0], 0, &[0], 0).unwrap();
    assert_eq!(dd, c.compose(&c.unit(0), &c.counit(0)).unwrap());
    assert_eq!(dd.degree(), 2);
    let top = c.double_leaf(&[0, 1, 0], 0b111, &[1, 0, 1], 0b111).unwrap();
    assert_eq!(top.entry(0b111, 0b111), RationalFunction::one());
    assert_eq!(c.double_leaf(&[0], 1, &[1], 1).unwrap_err(), Error::ElementMismatch);
}

#[test]
fn basis_sizes() {
    let c = calc("A2");
    let ss = c.hom_basis(&[0], &[0]).unwrap();
    assert_eq!(ss.len(), 2);
    assert_eq!(ss.leaves.iter().map(|l| l.degree).collect::<Vec<_>>(), vec![2, 0]);
    let st = c.hom_basis(&[0], &[1]).unwrap();
    assert_eq!(st.len(), 1);
    assert_eq!(st.leaves[0].degree, 2);
    // Subexpression elements of sts: 1 twice, s twice, t, st, ts, sts; of tst symmetrically.
    assert_eq!(c.hom_basis(&[0, 1, 0], &[1, 0, 1]).unwrap().len(), 11);
}

#[test]
fn graded_counts_and_independence() {
    let c = calc("A2");
    let mut words = vec![vec![]];
    for len in 1..=3 {
        for code in 0..(1usize << len) {
            words.push((0..len).map(|j| code >> j & 1).collect::<Vec<usize>>());
        }
    }
    for w1 in &words {
        for w2 in &words {
            if w1.len() + w2.len() > 5 {
                continue;
            }
            let basis = c.hom_basis(w1, w2).unwrap();
            assert_eq!(basis.graded_count(), graded_rank_pairing(c.sys(), w1, w2), "{w1:?} {w2:?}");
            assert!(c.basis_count_matches(&basis));
            assert!(c.check_independence(&basis), "{w1:?} {w2:?}");
        }
    }
    for (w1, w2) in [(vec![0], vec![0]), (vec![0, 1], vec![0, 1]), (vec![0, 0], vec![0]), (vec![0, 1, 0], vec![1, 0, 1])] {
        let basis = c.hom_basis(&w1, &w2).unwrap();
        let window = 2 * (w1.len() + w2.len()) as i32 + 4;
        assert!(c.check_independence_degreewise(&basis, window).unwrap(), "{w1:?} {w2:?}");
    }
}

#[test]
fn expressing_standard_morphisms() {
    let c = calc("A2");
    let basis = c.hom_basis(&[0], &[0]).unwrap();
    let coeffs = c.express_in_basis(&c.identity(&[0]), &basis).unwrap();
    let id_index = basis.index_of(1, 1).unwrap();
    for (k, p) in coeffs.iter().enumerate() {
        assert_eq!(*p == Polynomial::one(), k == id_index);
        if k != id_index {
            assert!(p.is_zero());
        }
    }
    let boxed = c.region_multiply(&c.identity(&[0]), 0, &a(0)).unwrap();
    let coeffs = c.express_in_basis(&boxed, &basis).unwrap();
    assert_eq!(c.combine(&basis, &coeffs, 2).unwrap(), boxed);
    let basis = c.hom_basis(&[0, 0], &[0, 0]).unwrap();
    let f = c.compose(&c.split(0), &c.merge(0)).unwrap();
    let coeffs = c.express_in_basis(&f, &basis).unwrap();
    assert_eq!(c.combine(&basis, &coeffs, -2).unwrap(), f);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn express_round_trips(coeffs in prop::collection::vec((-2i64..3, 0usize..3), 11)) {
        let c = calc("A2");
        let basis = c.hom_basis(&[0, 1, 0], &[1, 0, 1]).unwrap();
        // Homogeneous of degree 4: each leaf of degree d gets a polynomial of degree 4 − d.
        let target = 4;
        let polys: Vec<Polynomial> = basis
            .leaves
            .iter()
            .zip(&coeffs)
            .map(|(l, (k, v))| {
                let d = (target - l.degree) / 2;
                if (target - l.degree) % 2 != 0 || d < 0 {
                    return Polynomial::zero();
                }
                let var = if *v == 2 { a(0).add(&a(1)) } else { a(*v) };
                var.pow(d as u32).scale(&int(*k))
            })
            .collect();
        let f = c.combine(&basis, &polys, target).unwrap();
        let back = c.express_in_basis(&f, &basis).unwrap();
        prop_assert_eq!(back, polys);
    }
}
