mod common;

use proptest::prelude::*;

use common::random;
use common::{corpus, cyclic_cocycles, SMALL_CORPUS};
use entwine::cli::{CochainFile, StructureFile};
use entwine::complexes::{cyclic_basis, hochschild_delta, invariant_basis};
use entwine::linalg::{invert, kernel_basis, rank, span_contains, ExactField, Scalar, SparseMatrix};
use entwine::omega::{character, trace_from_cocycle, TruncatedOmega};

const Q: ExactField = ExactField::Rationals;

fn field() -> impl Strategy<Value = ExactField> {
    prop_oneof![Just(Q), Just(ExactField::prime(7).unwrap()), Just(ExactField::prime(2).unwrap())]
}

fn scalar(f: ExactField) -> impl Strategy<Value = Scalar> {
    (-20i64..=20, 1i64..=6)
        .prop_filter_map("denominator vanishes", move |(a, b)| f.parse_scalar(&format!("{a}/{b}")).ok())
}

fn matrix(f: ExactField) -> impl Strategy<Value = SparseMatrix> {
    (1usize..=5, 1usize..=5).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(-2i64..=2, r * c).prop_map(move |vals| {
            let entries = vals.iter().enumerate().map(|(k, v)| (k / c, k % c, f.from_i64(*v)));
            SparseMatrix::from_triplets(f, r, c, entries).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn scalars_form_a_field(f in field(), seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let (a, b, c) = (random::small(&mut rng, f), random::nonzero(&mut rng, Q), random::small(&mut rng, f));
        let b = b.convert(f).unwrap_or_else(|_| f.one());
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        if let Some(inv) = b.inv() {
            prop_assert!((&b * &inv).is_one());
        } else {
            prop_assert!(b.is_zero());
        }
    }

    #[test]
    fn scalar_strings_round_trip(s in field().prop_flat_map(scalar)) {
        let f = s.field();
        prop_assert_eq!(f.parse_scalar(&s.to_canonical_string()).unwrap(), s);
    }

    #[test]
    fn rank_plus_nullity_is_width(m in field().prop_flat_map(matrix)) {
        let kernel = kernel_basis(&m);
        prop_assert_eq!(rank(&m) + kernel.len(), m.cols());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).is_empty());
        }
    }

    #[test]
    fn inverse_is_two_sided(f in field(), d in 1usize..=4, seed in any::<u64>()) {
        let m = random::invertible(&mut random::rng(seed), f, d);
        let inv = invert(&m).unwrap();
        prop_assert_eq!(m.mul(&inv).unwrap(), SparseMatrix::identity(f, d));
        prop_assert_eq!(inv.mul(&m).unwrap(), SparseMatrix::identity(f, d));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_structures_are_complexes(seed in any::<u64>()) {
        let s = random::valid_structure(&mut random::rng(seed), Q);
        prop_assert!(s.is_valid());
        for n in 0..=2 {
            let d0 = hochschild_delta(&s, n).matrix;
            let d1 = hochschild_delta(&s, n + 1).matrix;
            prop_assert!(d1.mul(&d0).unwrap().is_zero());
            let image = d0.mul(&cyclic_basis(&s, n)).unwrap();
            prop_assert_eq!(span_contains(&cyclic_basis(&s, n + 1), &image).unwrap(), None);
            let image = d0.mul(&invariant_basis(&s, n)).unwrap();
            prop_assert_eq!(span_contains(&invariant_basis(&s, n + 1), &image).unwrap(), None);
        }
    }

    #[test]
    fn structure_files_round_trip(seed in any::<u64>()) {
        let s = random::valid_structure(&mut random::rng(seed), Q);
        let text = StructureFile::from_structure(&s).to_json();
        let back = StructureFile::parse(&text).and_then(|f| f.to_structure(None)).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn cochain_files_round_trip(k in 0..SMALL_CORPUS.len(), n in 0usize..=2, seed in any::<u64>()) {
        let s = corpus(SMALL_CORPUS[k]);
        let basis = cyclic_cocycles(&s, n);
        prop_assume!(!basis.is_empty());
        let g = random::combination(&mut random::rng(seed), &s, n, &basis);
        let text = CochainFile::from_cochain(&g).to_json();
        let back = CochainFile::parse(&text).and_then(|f| f.to_cochain(&s)).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn character_inverts_the_lift(k in 0..SMALL_CORPUS.len(), n in 0usize..=2, seed in any::<u64>()) {
        let s = corpus(SMALL_CORPUS[k]);
        let basis = cyclic_cocycles(&s, n);
        prop_assume!(!basis.is_empty());
        let g = random::combination(&mut random::rng(seed), &s, n, &basis);
        let omega = TruncatedOmega::new(&s, n).unwrap();
        let trace = trace_from_cocycle(&omega, &g).unwrap();
        prop_assert_eq!(character(&omega.to_dg(), &trace).unwrap(), g);
    }
}
