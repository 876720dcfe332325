
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use signpat::census::dihedral_perms;
use signpat::pattern::parse_patterns;
use signpat::{ExtendedSign, Sign, SignPattern};

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Plus), Just(Sign::Minus), Just(Sign::Zero)]
}

fn pattern(max: usize) -> impl Strategy<Value = SignPattern> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec(sign(), n * n).prop_map(move |e| SignPattern::new(n, e).unwrap())
    })
}

fn square(n: usize) -> impl Strategy<Value = SignPattern> {
    prop::collection::vec(sign(), n * n).prop_map(move |e| SignPattern::new(n, e).unwrap())
}

proptest! {
    #[test]
    fn compact_round_trip(a in pattern(7)) {
        let text = a.to_compact();
        prop_assert_eq!(text.split('/').count(), a.n());
        prop_assert_eq!(SignPattern::from_compact(&text).unwrap(), a);
    }

    #[test]
    fn display_round_trip(a in pattern(7)) {
        let back: SignPattern = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn file_of_patterns(pats in prop::collection::vec(pattern(4), 1..5)) {
        let mut text = String::from("# header\n");
        let mut lines = Vec::new();
        let mut line = 2;
        for a in &pats {
            lines.push(line);
            text.push_str(&a.to_string());
            text.push_str("\n\n");
            line += a.n() + 1;
        }
        let got = parse_patterns(&text).unwrap();
        prop_assert_eq!(got.len(), pats.len());
        for ((l, a), (want_l, want)) in got.iter().zip(lines.iter().zip(&pats)) {
            prop_assert_eq!(l, want_l);
            prop_assert_eq!(a, want);
        }
    }

    #[test]
    fn involutions(a in pattern(6)) {
        prop_assert_eq!(a.transpose().transpose(), a.clone());
        prop_assert_eq!(a.negate().negate(), a.clone());
        prop_assert_eq!(a.negate().transpose(), a.transpose().negate());
    }

    #[test]
    fn dihedral_relabeling_is_invertible(a in (3usize..=6).prop_flat_map(square)) {
        let n = a.n();
        for p in dihedral_perms(n) {
            let mut inv = vec![0; n];
            for (k, &v) in p.iter().enumerate() {
                inv[v] = k;
            }
            let b = a.permute_similar(&p).unwrap();
            prop_assert_eq!(b.permute_similar(&inv).unwrap(), a.clone());
        }
    }

    #[test]
    fn samples_stay_in_class(a in pattern(6), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = a.sample_q_with(0.5, 2.0, &mut rng);
        prop_assert_eq!(b.sign_pattern(), a.clone());
        prop_assert_eq!(a.unit_matrix().sign_pattern(), a);
    }

    // Every sampled product lands in the qualitative product.
    #[test]
    fn qual_product_admits_products(
        (a, c) in (1usize..=5).prop_flat_map(|n| (square(n), square(n))),
        seed in any::<u64>(),
    ) {
        let q = a.qual_product(&c).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let p = a.sample_q_with(0.5, 2.0, &mut rng).mul(&c.sample_q_with(0.5, 2.0, &mut rng));
            for i in 0..a.n() {
                for j in 0..a.n() {
                    let s = Sign::of(p[(i, j)]);
                    let e = q.get(i, j);
                    prop_assert!(e == ExtendedSign::Any || e.admits(s), "({i},{j}) {e} vs {s}");
                }
            }
        }
    }

    #[test]
    fn split_parts_formula(a in pattern(6)) {
        let parts = a.split_parts();
        let n = a.n();
        for i in 0..n {
            for j in 0..n {
                let keep = |s: Sign| if a.get(i, j) == s { s } else { Sign::Zero };
                prop_assert_eq!(parts.plus.get(i, j), keep(Sign::Plus));
                prop_assert_eq!(parts.minus.get(i, j), keep(Sign::Minus));
                // A_+ and -A_-^T are both nonnegative, so the sum has no cancellation.
                let want = a.get(i, j) == Sign::Plus || a.get(j, i) == Sign::Minus;
                prop_assert_eq!(parts.b_a.get(i, j), if want { Sign::Plus } else { Sign::Zero });
            }
        }
    }
}

#[test]
fn rejects_bad_text() {
    assert!(SignPattern::from_compact("+0/0x").is_err());
    assert!(SignPattern::from_compact("+0/0").is_err());
    assert!(parse_patterns("+ 0\n0 +\n\n+ 0 0\n0 +").is_err());
    assert!(parse_patterns("# only comments\n").map(|v| v.is_empty()).unwrap_or(true));
}
