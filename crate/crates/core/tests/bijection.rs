use fockpath_core::{bijection_map, onto, verify_norm_multisets, PosSet, Sign, SignSequence};
use proptest::prelude::*;

fn subsets(s: &PosSet) -> Vec<PosSet> {
    let v: Vec<i64> = s.iter().copied().collect();
    (0..1u32 << v.len())
        .map(|m| v.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &x)| x).collect())
        .collect()
}

fn admissible(t: &SignSequence) -> Vec<(PosSet, PosSet)> {
    let mut out = Vec::new();
    for a in subsets(t.minus()) {
        for b in subsets(t.plus()) {
            if a.len() == b.len() + 1 && onto(&a, &b) {
                out.push((a.clone(), b));
            }
        }
    }
    out
}

fn word(n: usize, mask: u32) -> SignSequence {
    let signs: Vec<Sign> = (0..n).map(|i| if mask >> i & 1 == 1 { Sign::Plus } else { Sign::Minus }).collect();
    SignSequence::from_signs(&signs)
}

#[test]
fn exhaustive_up_to_eight() {
    let mut count = 0;
    for n in 0..=8 {
        for mask in 0..1u32 << n {
            let t = word(n, mask);
            for (a, b) in admissible(&t) {
                assert!(verify_norm_multisets(&t, &a, &b).unwrap(), "{t} {a:?} {b:?}");
                if let Err(e) = bijection_map(&t, &a, &b) {
                    panic!("{e}");
                }
                count += 1;
            }
        }
    }
    println!("{count} instances");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn map_is_norm_preserving_bijection(n in 1usize..=10, mask in any::<u32>(), pick in any::<u64>()) {
        let t = word(n, mask & ((1 << n) - 1));
        let adm = admissible(&t);
        prop_assume!(!adm.is_empty());
        let (a, b) = &adm[(pick % adm.len() as u64) as usize];
        let map = bijection_map(&t, a, b).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for (l, r) in &map {
            prop_assert_eq!(l.norm, r.norm);
            prop_assert!(seen.insert(r.clone()));
        }
    }
}

