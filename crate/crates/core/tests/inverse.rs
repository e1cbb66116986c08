use davlab_core::davenport::{exact_davenport, zero_sum_free_sequences, SearchBudget};
use davlab_core::metacyclic::{has_product_one_subsequence, GSequence, GroupSpec, MetaElem};
use davlab_core::modring::{gcd, Modulus, WeightSet};
use davlab_core::zsfree::Weights;
use rand::{Rng, SeedableRng};

#[test]
fn long_free_sequences_over_cyclic_groups_repeat_an_element() {
    let b = SearchBudget::default();
    for n in 3..=12u64 {
        let md = Modulus::new(n).unwrap();
        let w = Weights::from(&WeightSet::one(md));
        let all = zero_sum_free_sequences(&w, n as usize, &b).unwrap();
        assert!(all.iter().all(|s| s.len() < n as usize));
        let mut longest = 0;
        for s in &all {
            if 2 * s.len() > n as usize {
                assert!(
                    s.max_multiplicity() + n as usize > 2 * s.len(),
                    "n={n}: {s}"
                );
            }
            if s.len() == n as usize - 1 {
                longest += 1;
                let g = s.elements()[0];
                assert!(s.elements().iter().all(|&x| x == g));
                assert_eq!(gcd(g, n), 1);
            }
        }
        assert_eq!(longest, md.units().len());
    }
}

#[test]
fn many_reflections_force_a_product_one() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(12);
    let b = SearchBudget::default();
    for s in [5u64, 7] {
        let md = Modulus::new(12).unwrap();
        let d = exact_davenport(&WeightSet::one_and(md, s).unwrap(), &b)
            .unwrap()
            .constant;
        let spec = GroupSpec::new(12, s).unwrap();
        for _ in 0..60 {
            let extra = rng.gen_range(0..=2);
            let mut els: Vec<MetaElem> =
                (0..2 * d).map(|_| MetaElem::xy(rng.gen_range(0..12))).collect();
            els.extend((0..extra).map(|_| MetaElem::y(rng.gen_range(0..12))));
            let seq = GSequence::new(spec, els).unwrap();
            let cert = has_product_one_subsequence(&seq).unwrap().expect("product one");
            assert!(cert.verify(&seq));
        }
    }
}
