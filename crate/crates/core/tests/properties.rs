use dbrg::bigraph::IntersectionArray;
use dbrg::feasibility::CandidateArray;
use dbrg::gf::{qbinom, Field, Fq, Subspace};
use dbrg::perpsys::PerpFile;
use proptest::prelude::*;

const ORDERS: [u64; 10] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16];

fn field_and_elems() -> impl Strategy<Value = (u64, u32, u32, u32)> {
    prop::sample::select(ORDERS.to_vec())
        .prop_flat_map(|q| (Just(q), 0..q as u32, 0..q as u32, 0..q as u32))
}

fn vectors(q: u64, n: usize, count: usize) -> impl Strategy<Value = Vec<Vec<u32>>> {
    prop::collection::vec(prop::collection::vec(0..q as u32, n), 0..=count)
}

fn to_fq(vs: &[Vec<u32>]) -> Vec<Vec<Fq>> {
    vs.iter().map(|v| v.iter().map(|&x| Fq(x)).collect()).collect()
}

proptest! {
    #[test]
    fn field_ops_consistent((q, a, b, c) in field_and_elems()) {
        let f = Field::of_order(q).unwrap();
        let (a, b, c) = (Fq(a), Fq(b), Fq(c));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        if b != Fq::ZERO {
            prop_assert_eq!(f.mul(f.div(a, b).unwrap(), b), a);
        }
        prop_assert_eq!(f.pow(a, q), a);
    }

    #[test]
    fn qbinom_symmetric_and_pascal(q in prop::sample::select(vec![2u64, 3, 4, 5]), n in 1u32..8, m in 0u32..8) {
        prop_assume!(m <= n);
        prop_assert_eq!(qbinom(n, m, q).unwrap(), qbinom(n, n - m, q).unwrap());
        if m >= 1 && m < n {
            let pascal = qbinom(n - 1, m - 1, q).unwrap() + q.pow(m) as u128 * qbinom(n - 1, m, q).unwrap();
            prop_assert_eq!(qbinom(n, m, q).unwrap(), pascal);
        }
    }

    #[test]
    fn meet_join_dimensions(
        (q, u, w) in prop::sample::select(vec![2u64, 3, 4])
            .prop_flat_map(|q| (Just(q), vectors(q, 5, 4), vectors(q, 5, 4)))
    ) {
        let f = Field::of_order(q).unwrap();
        let u = Subspace::span(&f, 5, to_fq(&u)).unwrap();
        let w = Subspace::span(&f, 5, to_fq(&w)).unwrap();
        let meet = u.meet(&f, &w).unwrap();
        let join = u.join(&f, &w).unwrap();
        prop_assert_eq!(u.dim() + w.dim(), meet.dim() + join.dim());
        prop_assert!(u.contains_subspace(&f, &meet) && join.contains_subspace(&f, &u));
        prop_assert_eq!(u.orthogonal(&f).orthogonal(&f), u.clone());
        prop_assert_eq!(u.orthogonal(&f).dim(), 5 - u.dim());
    }

    #[test]
    fn echelon_form_is_canonical(
        (q, vs) in prop::sample::select(vec![2u64, 3, 4, 5]).prop_flat_map(|q| (Just(q), vectors(q, 4, 5)))
    ) {
        let f = Field::of_order(q).unwrap();
        let s = Subspace::span(&f, 4, to_fq(&vs)).unwrap();
        let again = Subspace::span(&f, 4, s.basis()).unwrap();
        prop_assert_eq!(&again, &s);
        let mut rev = to_fq(&vs);
        rev.reverse();
        prop_assert_eq!(Subspace::span(&f, 4, rev).unwrap(), s.clone());
        for v in to_fq(&vs) {
            prop_assert!(s.contains(&f, &v));
        }
    }

    #[test]
    fn perp_file_round_trip(
        (q, members) in prop::sample::select(vec![2u64, 3, 4])
            .prop_flat_map(|q| (Just(q), prop::collection::vec(vectors(q, 4, 2), 1..4)))
    ) {
        let f = Field::of_order(q).unwrap();
        let subs: Vec<Subspace> = members
            .iter()
            .map(|m| Subspace::span(&f, 4, to_fq(m)).unwrap())
            .filter(|s| s.dim() > 0)
            .collect();
        prop_assume!(!subs.is_empty());
        let file = PerpFile::from_subspaces(&f, 4, 2, &subs);
        let text = file.to_text();
        let back = PerpFile::parse(&text).unwrap();
        prop_assert_eq!(back.to_text(), text);
        prop_assert_eq!(back.subspaces().unwrap(), subs);
    }

    #[test]
    fn array_text_and_swap(k in 2u64..40, c2b in 1u64..6, c3b in 1u64..40, l in 2u64..40, c2c in 1u64..6, c3c in 1u64..40) {
        let a = CandidateArray::new(k, c2b, c3b, l, c2c, c3c);
        let arr = a.to_array();
        let parsed: IntersectionArray = arr.to_string().parse().unwrap();
        prop_assert_eq!(&parsed, &arr);
        prop_assert_eq!(a.swapped().swapped(), a);
        prop_assert_eq!(a.canonical(), a.swapped().canonical());
        prop_assert_eq!(arr.swapped().swapped(), arr);
    }
}
