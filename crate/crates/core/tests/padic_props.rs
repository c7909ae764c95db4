use hierq_core::padic::{PAdicLabel, PNorm};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn all_labels(p: u32, depth: usize) -> Vec<PAdicLabel> {
    let n = u128::from(p).pow(depth as u32);
    (0..n)
        .map(|i| PAdicLabel::from_integer(i, p, depth).unwrap())
        .collect()
}

#[test]
fn ultrametric_exhaustive_binary() {
    for depth in 1..=4 {
        let labels = all_labels(2, depth);
        for x in &labels {
            for y in &labels {
                let dxy = x.distance(y).unwrap();
                assert_eq!(dxy, y.distance(x).unwrap());
                assert_eq!(dxy.is_zero(), x == y);
                for z in &labels {
                    let dxz = x.distance(z).unwrap();
                    let dyz = y.distance(z).unwrap();
                    assert!(dxz <= dxy.max(dyz), "{x} {y} {z}");
                }
            }
        }
    }
}

#[test]
fn ultrametric_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for (p, depth) in [(3u32, 6usize), (5, 8), (7, 12), (97, 3), (2, 40)] {
        let draw = |rng: &mut ChaCha8Rng| {
            // cluster digits near the front so that deep agreements are common
            let shared: usize = rng.random_range(0..depth);
            let head: Vec<u8> = (0..shared).map(|k| (k as u32 % p) as u8).collect();
            let tail = (shared..depth).map(|_| rng.random_range(0..p) as u8);
            PAdicLabel::new(p, head.into_iter().chain(tail).collect()).unwrap()
        };
        for _ in 0..20_000 {
            let (x, y, z) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
            let dxz = x.distance(&z).unwrap();
            let bound = x.distance(&y).unwrap().max(y.distance(&z).unwrap());
            assert!(dxz <= bound);
        }
    }
}

#[test]
fn norm_is_distance_to_zero() {
    for (p, depth) in [(2u32, 6usize), (3, 4), (5, 3)] {
        let zero = PAdicLabel::zero(p, depth).unwrap();
        for x in all_labels(p, depth) {
            assert_eq!(x.norm(), x.distance(&zero).unwrap());
        }
    }
}

#[test]
fn norm_values_are_powers_below_depth() {
    for x in all_labels(3, 5) {
        let n = x.norm();
        match n.valuation() {
            None => assert!(x.is_zero()),
            Some(v) => {
                assert!((v as usize) < x.depth());
                assert_eq!(n, PNorm::power(3, v));
            }
        }
    }
}

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 5, 7, 11, 13, 31, 97])
}

proptest! {
    #[test]
    fn round_trip(p in prime(), depth in 1usize..=12, seed in any::<u64>()) {
        let limit = u128::from(p).checked_pow(depth as u32).unwrap_or(u128::MAX);
        let n = u128::from(seed) % limit;
        let x = PAdicLabel::from_integer(n, p, depth).unwrap();
        prop_assert_eq!(x.value(), num_bigint::BigUint::from(n));
        prop_assert!(x.digits().iter().all(|&d| u32::from(d) < p));
        let text = serde_json::to_string(&x).unwrap();
        prop_assert_eq!(serde_json::from_str::<PAdicLabel>(&text).unwrap(), x);
    }

    #[test]
    fn distance_matches_difference_valuation(a in 0u64..1 << 20, b in 0u64..1 << 20) {
        // |a - b|_2 from the trailing zeros of the integer difference
        let x = PAdicLabel::from_integer(a.into(), 2, 20).unwrap();
        let y = PAdicLabel::from_integer(b.into(), 2, 20).unwrap();
        let d = x.distance(&y).unwrap();
        if a == b {
            prop_assert!(d.is_zero());
        } else {
            prop_assert_eq!(d.valuation(), Some(a.abs_diff(b).trailing_zeros()));
        }
    }
}
