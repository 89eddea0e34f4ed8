//! Moore-tree sizes and the AHM lower bound on `f(r, 1, g)`.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("girth must be at least 1")]
    ZeroGirth,
    #[error("arithmetic overflow")]
    Overflow,
}

/// Number of vertices in an undirected Moore tree of degree `r` and depth
/// `d`: `1 + r * sum_{k<d} (r-1)^k`.
///
/// Summed level by level, so `r = 2` gives `2d + 1` and `r = 1` gives `2`
/// for any positive depth.
pub fn moore_bound(r: u64, d: u32) -> Result<u64, BoundsError> {
    if r == 0 {
        return Err(BoundsError::ZeroDegree);
    }
    let mut total: u64 = 1;
    let mut level: u64 = r;
    for _ in 0..d {
        total = total.checked_add(level).ok_or(BoundsError::Overflow)?;
        level = level.checked_mul(r - 1).ok_or(BoundsError::Overflow)?;
    }
    Ok(total)
}

/// Depth of the tree hung at position `i` of a directed path `v_0..v_{g-1}`.
pub fn ahm_depths(g: u32) -> Vec<u32> {
    (0..g).map(|i| i.min(g - 1 - i)).collect()
}

/// `sum_{i=0}^{g-1} moore_bound(r, min(i, g-1-i))`, a lower bound on the
/// order of any `(r, 1, g)`-graph.
pub fn ahm_bound(r: u64, g: u32) -> Result<u64, BoundsError> {
    if g == 0 {
        return Err(BoundsError::ZeroGirth);
    }
    ahm_depths(g).into_iter().try_fold(0u64, |acc, d| {
        acc.checked_add(moore_bound(r, d)?)
            .ok_or(BoundsError::Overflow)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moore_values() {
        assert_eq!(moore_bound(3, 0), Ok(1));
        assert_eq!(moore_bound(3, 1), Ok(4));
        assert_eq!(moore_bound(3, 2), Ok(10));
        assert_eq!(moore_bound(6, 2), Ok(37));
        assert_eq!(moore_bound(2, 5), Ok(11));
        assert_eq!(moore_bound(1, 4), Ok(2));
        assert_eq!(moore_bound(0, 1), Err(BoundsError::ZeroDegree));
        assert_eq!(moore_bound(1 << 40, 3), Err(BoundsError::Overflow));
    }

    #[test]
    fn ahm_values() {
        assert_eq!(ahm_bound(3, 6), Ok(30));
        assert_eq!(ahm_bound(6, 6), Ok(90));
        assert_eq!(ahm_bound(3, 1), Ok(1));
        assert_eq!(ahm_bound(3, 3), Ok(6));
        assert_eq!(ahm_bound(3, 0), Err(BoundsError::ZeroGirth));
    }

    #[test]
    fn closed_form_agrees_for_r_at_least_3() {
        for r in 3u64..=12 {
            for d in 0u32..=12 {
                let closed = (r * (r - 1).pow(d) - 2) / (r - 2);
                assert_eq!(moore_bound(r, d).unwrap(), closed, "r={r} d={d}");
            }
        }
    }

    #[test]
    fn depth_profile_is_palindromic() {
        for g in 1..20 {
            let d = ahm_depths(g);
            let mut rev = d.clone();
            rev.reverse();
            assert_eq!(d, rev);
            assert_eq!(*d.iter().max().unwrap(), (g - 1) / 2);
        }
        assert_eq!(ahm_depths(6), vec![0, 1, 2, 2, 1, 0]);
        assert_eq!(ahm_depths(5), vec![0, 1, 2, 1, 0]);
    }

    #[test]
    fn monotone() {
        for r in 3u64..10 {
            for d in 0u32..10 {
                assert!(moore_bound(r, d + 1).unwrap() > moore_bound(r, d).unwrap());
                if d >= 1 {
                    assert!(moore_bound(r + 1, d).unwrap() > moore_bound(r, d).unwrap());
                }
            }
        }
    }
}
