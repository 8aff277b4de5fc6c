//! Worst-case linear selection (median of medians, groups of five).
//!
//! Partitioning is three-way, so runs of equal keys are settled in one pass
//! and the linear bound holds for multisets too.

use std::cmp::Ordering;

use thiserror::Error;

/// Slices at or below this length are insertion-sorted instead of recursed on.
pub const DEFAULT_CUTOFF: usize = 32;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("rank {rank} out of range 1..={len}")]
pub struct RankOutOfRange {
    pub rank: usize,
    pub len: usize,
}

/// Returns the `rank`-th smallest item (1-based, duplicates counted with
/// multiplicity). `items` is permuted in place.
pub fn select_kth<T: Copy + Ord>(items: &mut [T], rank: usize) -> Result<T, RankOutOfRange> {
    select_kth_by(items, rank, |a, b| a.cmp(b))
}

/// [`select_kth`] under a caller-supplied comparator; every comparison the
/// algorithm makes goes through `cmp` exactly once.
pub fn select_kth_by<T, F>(items: &mut [T], rank: usize, cmp: F) -> Result<T, RankOutOfRange>
where
    T: Copy,
    F: FnMut(&T, &T) -> Ordering,
{
    select_kth_with_cutoff(items, rank, DEFAULT_CUTOFF, cmp)
}

pub fn select_kth_with_cutoff<T, F>(
    items: &mut [T],
    rank: usize,
    cutoff: usize,
    mut cmp: F,
) -> Result<T, RankOutOfRange>
where
    T: Copy,
    F: FnMut(&T, &T) -> Ordering,
{
    if rank == 0 || rank > items.len() {
        return Err(RankOutOfRange {
            rank,
            len: items.len(),
        });
    }
    Ok(select_in_place(items, rank - 1, cutoff.max(5), &mut cmp))
}

fn select_in_place<T, F>(mut v: &mut [T], mut k: usize, cutoff: usize, cmp: &mut F) -> T
where
    T: Copy,
    F: FnMut(&T, &T) -> Ordering,
{
    loop {
        if v.len() <= cutoff {
            insertion_sort(v, cmp);
            return v[k];
        }

        // Medians of groups of five go to the front.
        let groups = v.len().div_ceil(5);
        for g in 0..groups {
            let lo = 5 * g;
            let hi = (lo + 5).min(v.len());
            insertion_sort(&mut v[lo..hi], cmp);
            v.swap(g, lo + (hi - lo - 1) / 2);
        }
        let pivot = select_in_place(&mut v[..groups], (groups - 1) / 2, cutoff, cmp);

        let (lt, gt) = partition3(v, pivot, cmp);
        if k < lt {
            v = &mut v[..lt];
        } else if k < gt {
            return pivot;
        } else {
            k -= gt;
            v = &mut v[gt..];
        }
    }
}

/// Dutch-flag partition: afterwards `v[..lt] < pivot`, `v[lt..gt] == pivot`,
/// `v[gt..] > pivot`. One comparison per element.
fn partition3<T, F>(v: &mut [T], pivot: T, cmp: &mut F) -> (usize, usize)
where
    T: Copy,
    F: FnMut(&T, &T) -> Ordering,
{
    let (mut lt, mut i, mut gt) = (0, 0, v.len());
    while i < gt {
        match cmp(&v[i], &pivot) {
            Ordering::Less => {
                v.swap(lt, i);
                lt += 1;
                i += 1;
            }
            Ordering::Greater => {
                gt -= 1;
                v.swap(i, gt);
            }
            Ordering::Equal => i += 1,
        }
    }
    (lt, gt)
}

fn insertion_sort<T, F>(v: &mut [T], cmp: &mut F)
where
    T: Copy,
    F: FnMut(&T, &T) -> Ordering,
{
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && cmp(&v[j - 1], &v[j]) == Ordering::Greater {
            v.swap(j - 1, j);
            j -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_examples() {
        assert_eq!(select_kth(&mut [3, 1, 2], 2), Ok(2));
        assert_eq!(select_kth(&mut [5], 1), Ok(5));
        assert_eq!(select_kth(&mut [4, 4, 1, 9], 3), Ok(4));
    }

    #[test]
    fn rank_out_of_range() {
        assert_eq!(
            select_kth(&mut [1, 2], 0),
            Err(RankOutOfRange { rank: 0, len: 2 })
        );
        assert_eq!(
            select_kth(&mut [1, 2], 3),
            Err(RankOutOfRange { rank: 3, len: 2 })
        );
        assert!(select_kth::<i32>(&mut [], 1).is_err());
    }

    #[test]
    fn all_equal_is_one_pass() {
        let mut v = vec![7u8; 10_000];
        let mut count = 0u64;
        let r = select_kth_by(&mut v, 5000, |a, b| {
            count += 1;
            a.cmp(b)
        });
        assert_eq!(r, Ok(7));
        assert!(count < 4 * 10_000, "{count}");
    }

    #[test]
    fn comparator_is_respected() {
        let mut v: Vec<i32> = (0..1000).collect();
        let r = select_kth_by(&mut v, 1, |a, b| b.cmp(a)).unwrap();
        assert_eq!(r, 999);
    }

    proptest! {
        #[test]
        fn matches_sorted_copy(
            items in proptest::collection::vec(0i64..20, 1..200),
            seed in any::<prop::sample::Index>(),
            cutoff in 5usize..40,
        ) {
            let rank = seed.index(items.len()) + 1;
            let mut sorted = items.clone();
            sorted.sort();
            let mut work = items.clone();
            let got = select_kth_with_cutoff(&mut work, rank, cutoff, |a, b| a.cmp(b)).unwrap();
            prop_assert_eq!(got, sorted[rank - 1]);
            work.sort();
            prop_assert_eq!(work, sorted);
        }
    }
}
