use std::cell::Cell;

use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use saddlepoint::select::{select_kth_by, select_kth_with_cutoff};

// Measured worst case over the inputs below is about 9 comparisons per
// element; the bound leaves headroom without hiding a quadratic blowup.
const C_SEL: f64 = 16.0;

fn inputs(n: usize, seed: u64) -> Vec<(&'static str, Vec<i64>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shuffled: Vec<i64> = (0..n as i64).collect();
    shuffled.shuffle(&mut rng);
    let few: Vec<i64> = (0..n).map(|_| rng.gen_range(0..4)).collect();
    let organ: Vec<i64> = (0..n as i64).map(|i| i.min(n as i64 - i)).collect();
    vec![
        ("shuffled", shuffled),
        ("sorted", (0..n as i64).collect()),
        ("reversed", (0..n as i64).rev().collect()),
        ("constant", vec![7; n]),
        ("few-values", few),
        ("organ-pipe", organ),
    ]
}

#[test]
fn comparisons_are_linear() {
    for n in [1_000usize, 10_000, 100_000] {
        for (name, base) in inputs(n, n as u64) {
            let mut sorted = base.clone();
            sorted.sort();
            for rank in [1, n / 4, n / 2, n] {
                let count = Cell::new(0u64);
                let mut items = base.clone();
                let got = select_kth_by(&mut items, rank, |a, b| {
                    count.set(count.get() + 1);
                    a.cmp(b)
                })
                .unwrap();
                assert_eq!(got, sorted[rank - 1], "{name} n={n} rank={rank}");
                let per = count.get() as f64 / n as f64;
                assert!(
                    per <= C_SEL,
                    "{name} n={n} rank={rank}: {per:.2} per element"
                );
            }
        }
    }
}

#[test]
fn cutoff_does_not_change_answers() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let len = rng.gen_range(1..300);
        let base: Vec<i64> = (0..len).map(|_| rng.gen_range(0..20)).collect();
        let rank = rng.gen_range(1..=len);
        let mut sorted = base.clone();
        sorted.sort();
        for cutoff in [5, 8, 32, 1000] {
            let mut items = base.clone();
            let got = select_kth_with_cutoff(&mut items, rank, cutoff, |a: &i64, b: &i64| a.cmp(b));
            assert_eq!(got.unwrap(), sorted[rank - 1]);
        }
    }
}
