mod common;

use common::arb_origami;
use origami_kz::cover::{optimal_degree, period_lattice, shear, ShearSide};
use origami_kz::cylinder::{
    check_rank_one_configuration, direction_cylinders, homology_basis_cyclic, horizontal_cylinders,
};
use origami_kz::homology::{absolute_homology, monodromy_generator, monodromy_horocycle};
use origami_kz::intmat::IntMatrix;
use origami_kz::origami::orbit;
use origami_kz::spectrum::exact_sum;
use origami_kz::{Generator, Origami};
use proptest::prelude::*;

const GENERATORS: [Generator; 4] = [Generator::T, Generator::S, Generator::TInv, Generator::SInv];

fn config() -> ProptestConfig {
    ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() }
}

fn arb_word() -> impl Strategy<Value = Vec<Generator>> {
    prop::collection::vec(prop::sample::select(GENERATORS.to_vec()), 0..12)
}

/// A cyclic stack of equal-width cylinders with random heights and twists.
fn arb_cyclic_origami() -> impl Strategy<Value = Origami> {
    (1usize..=4, prop::collection::vec((1usize..=3, 0usize..4), 1..=4))
        .prop_filter("at most ten squares", |(w, cyl)| w * cyl.iter().map(|c| c.0).sum::<usize>() <= 10)
        .prop_map(|(w, cyl)| {
            let mut start = vec![0];
            for c in &cyl {
                start.push(start.last().unwrap() + c.0 * w);
            }
            let n = *start.last().unwrap();
            let (mut h, mut v) = (vec![0u32; n], vec![0u32; n]);
            for (j, &(height, twist)) in cyl.iter().enumerate() {
                for r in 0..height {
                    for c in 0..w {
                        let i = start[j] + r * w + c;
                        h[i] = (start[j] + r * w + (c + 1) % w) as u32;
                        v[i] = if r + 1 < height {
                            (i + w) as u32
                        } else {
                            (start[(j + 1) % cyl.len()] + (c + twist) % w) as u32
                        };
                    }
                }
            }
            Origami::from_images(h, v).unwrap()
        })
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn generator_monodromy_is_symplectic(o in arb_origami(1, 10), g in prop::sample::select(GENERATORS.to_vec())) {
        let (m, image) = monodromy_generator(&o, g);
        let src = absolute_homology(&o);
        let dst = absolute_homology(&image);
        let e = &m.entries;
        prop_assert_eq!(&e.mul(dst.intersection_form()).mul(&e.transpose()), src.intersection_form());
    }

    #[test]
    fn loop_monodromy_preserves_the_form(o in arb_origami(1, 10), g in prop::sample::select(vec![Generator::T, Generator::S])) {
        // S^4 is the identity on labelled surfaces, and so is T^c for c the
        // lcm of the row lengths.
        let steps = match g {
            Generator::S => 4,
            _ => o.h().cycle_type().into_iter().fold(1, num_integer::lcm),
        };
        let model = absolute_homology(&o);
        let mut total = IntMatrix::identity(model.rank());
        let mut cur = o.clone();
        for _ in 0..steps {
            let (m, next) = monodromy_generator(&cur, g);
            total = total.mul(&m.entries);
            cur = next;
        }
        prop_assert_eq!(&cur, &o);
        prop_assert!(total.preserves_form(model.intersection_form()));
        prop_assert!(total.determinant() == 1.into());
        if g == Generator::S {
            prop_assert!(total.is_identity());
        }
    }

    #[test]
    fn homology_rank_is_twice_genus(o in arb_origami(1, 10)) {
        let m = absolute_homology(&o);
        prop_assert_eq!(m.rank(), 2 * o.genus());
        let w = m.intersection_form();
        prop_assert_eq!(w.transpose(), IntMatrix::zeros(w.rows(), w.rows()).sub(w));
        prop_assert!(w.determinant() == 1.into());
        for c in m.basis_chains() {
            prop_assert!(m.is_cycle(c));
        }
    }

    #[test]
    fn cylinders_account_for_area(o in arb_origami(1, 10), p in 0i64..4, q in 1i64..4) {
        prop_assert_eq!(horizontal_cylinders(&o).area(), o.n());
        prop_assume!(num_integer::gcd(p, q) == 1);
        let d = direction_cylinders(&o, p, q).unwrap();
        prop_assert_eq!(d.area(), o.n());
        let total: usize = d.cylinders.iter().map(|c| c.width * c.height).sum();
        prop_assert_eq!(total, o.n());
    }

    #[test]
    fn slope_zero_is_horizontal(o in arb_origami(1, 10)) {
        let a = horizontal_cylinders(&o);
        let b = direction_cylinders(&o, 0, 1).unwrap();
        prop_assert_eq!(a.widths(), b.widths());
        prop_assert_eq!(a.heights(), b.heights());
    }

    #[test]
    fn degree_times_covolume_is_area(o in arb_origami(1, 10), word in arb_word()) {
        let d = optimal_degree(&o).unwrap();
        prop_assert_eq!(d as i64 * period_lattice(&o).covolume(), o.n() as i64);
        prop_assert_eq!(optimal_degree(&o.act_word(&word)).unwrap(), d);
    }

    #[test]
    fn absolute_periods_lie_in_lattice(o in arb_origami(1, 10)) {
        let lat = period_lattice(&o);
        let m = absolute_homology(&o);
        for p in m.basis_periods() {
            prop_assert!(lat.contains(p));
        }
        for i in 0..o.n() {
            prop_assert!(lat.contains(m.chain_period(&m.row_chain(i))));
            prop_assert!(lat.contains(m.chain_period(&m.column_chain(i))));
        }
    }

    #[test]
    fn canonical_form_is_a_relabeling_invariant(o in arb_origami(1, 10), word in arb_word()) {
        let c = o.canonical_form();
        prop_assert!(c.is_canonical());
        prop_assert_eq!(c.canonical_form(), c.clone());
        let w = o.act_word(&word);
        prop_assert_eq!(w.stratum(), o.stratum());
    }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn exact_sum_is_constant_on_orbits(o in arb_origami(1, 10), word in arb_word()) {
        let a = exact_sum(&o).unwrap();
        let b = exact_sum(&o.act_word(&word)).unwrap();
        prop_assert_eq!(&a.value, &b.value);
        prop_assert_eq!(a.orbit_size, b.orbit_size);
        prop_assert!(a.value >= num_rational::BigRational::from_integer(1.into()) || o.genus() <= 1);
    }

    #[test]
    fn group_relations_hold_on_canonical_forms(o in arb_origami(1, 10)) {
        let c = o.canonical_form();
        let s4 = o.act_word(&[Generator::S; 4]);
        prop_assert_eq!(&s4, &o);
        let st6: Vec<Generator> = [Generator::S, Generator::T].repeat(6);
        prop_assert_eq!(o.act_word(&st6).canonical_form(), c.clone());
        prop_assert_eq!(o.act_word(&[Generator::T, Generator::TInv, Generator::S, Generator::SInv]).canonical_form(), c);
    }

    #[test]
    fn orbit_does_not_depend_on_base_point(o in arb_origami(1, 8), word in arb_word()) {
        let a = orbit(&o).unwrap();
        let w = o.act_word(&word);
        prop_assert!(a.contains(&w));
        let b = orbit(&w).unwrap();
        prop_assert_eq!(a.len(), b.len());
        prop_assert!(b.nodes().iter().all(|m| a.contains(m)));
        prop_assert_eq!(a.min_member(), b.min_member());
    }

    #[test]
    fn shears_stay_in_the_orbit(o in arb_origami(1, 8), m in -6i64..=6, upper in any::<bool>()) {
        let side = if upper { ShearSide::Upper } else { ShearSide::Lower };
        prop_assert!(orbit(&o).unwrap().contains(&shear(&o, m, side)));
    }

    #[test]
    fn horocycle_monodromy_is_symplectic_and_unipotent(o in arb_cyclic_origami()) {
        let d = horizontal_cylinders(&o);
        prop_assert!(check_rank_one_configuration(&d).holds());
        let model = absolute_homology(&o);
        let basis = homology_basis_cyclic(&model, &d).unwrap();
        let g = basis.genus();
        prop_assert!(basis.gram(model.intersection_form()) == IntMatrix::standard_symplectic(g));
        let h = monodromy_horocycle(&model, &basis).unwrap();
        let e = &h.matrix.entries;
        let j = IntMatrix::standard_symplectic(g);
        prop_assert!(e.mul(&j).mul(&e.transpose()) == j);
        prop_assert!(h.has_block_form());
        let id = IntMatrix::identity(2 * g);
        prop_assert!(e.sub(&id).mul(&e.sub(&id)).is_zero());
    }
}
