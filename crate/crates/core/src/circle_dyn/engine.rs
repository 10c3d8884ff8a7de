//! Gap of every prefix `{points with tag < n}` along a schedule, from one sort.
//!
//! Points are deleted in decreasing tag order from a doubly linked list over
//! the sorted values. Deleting a point only merges two neighbouring gaps, so
//! the largest gap is a running maximum.

const NONE: usize = usize::MAX;

/// Gaps (`d^H` to the whole space) for each `n` of an increasing schedule.
///
/// Periodic mode measures the circle (half the largest arc); otherwise the
/// unit interval, where the two edge gaps count in full.
pub(crate) fn nested_gaps(mut pts: Vec<(f64, u64)>, schedule: &[u64], periodic: bool) -> Vec<f64> {
    let len = pts.len();
    if len == 0 || schedule.is_empty() {
        return vec![if periodic { 0.5 } else { 1.0 }; schedule.len()];
    }
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let vals: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let mut prev: Vec<usize> = (0..len).map(|i| i.wrapping_sub(1)).collect();
    let mut next: Vec<usize> = (1..=len).collect();
    if periodic {
        prev[0] = len - 1;
        next[len - 1] = 0;
    } else {
        next[len - 1] = NONE;
    }
    let mut by_tag: Vec<usize> = (0..len).collect();
    by_tag.sort_by(|&a, &b| pts[b].1.cmp(&pts[a].1));

    let mut alive = len;
    let (mut head, mut tail) = (0usize, len - 1);
    let arc = |p: usize, q: usize| {
        if p == q {
            1.0
        } else if q > p {
            vals[q] - vals[p]
        } else {
            vals[q] - vals[p] + 1.0
        }
    };
    let mut widest = 0.0f64;
    if periodic {
        for i in 0..len {
            widest = widest.max(arc(i, next[i]));
        }
    } else {
        for i in 0..len - 1 {
            widest = widest.max(vals[i + 1] - vals[i]);
        }
    }

    let mut out = vec![0.0; schedule.len()];
    let mut cursor = 0;
    for (slot, &n) in schedule.iter().enumerate().rev() {
        while cursor < len && pts[by_tag[cursor]].1 >= n {
            let i = by_tag[cursor];
            cursor += 1;
            alive -= 1;
            if alive == 0 {
                break;
            }
            let (p, q) = (prev[i], next[i]);
            if periodic {
                next[p] = q;
                prev[q] = p;
                widest = widest.max(arc(p, q));
            } else {
                if p != NONE {
                    next[p] = q;
                } else {
                    head = q;
                }
                if q != NONE {
                    prev[q] = p;
                } else {
                    tail = p;
                }
                if p != NONE && q != NONE {
                    widest = widest.max(vals[q] - vals[p]);
                }
            }
        }
        out[slot] = if alive == 0 {
            if periodic {
                0.5
            } else {
                1.0
            }
        } else if periodic {
            widest / 2.0
        } else {
            (widest / 2.0).max(vals[head]).max(1.0 - vals[tail])
        };
    }
    out
}
