use super::mask::BinaryMask;
use crate::error::{invalid, Result};

/// One accumulator cell of the (ρ, θ) line parameterization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HoughPeak {
    pub theta_deg: f64,
    pub rho_px: f64,
    pub votes: u32,
}

/// Dense (θ, ρ) accumulator. θ covers `[0°, 180°)` in steps of
/// `theta_res_deg`; ρ covers `[-diag, +diag]` in steps of `rho_res_px`.
#[derive(Clone, Debug)]
pub struct HoughAccumulator {
    pub theta_res_deg: f64,
    pub rho_res_px: f64,
    pub diag: f64,
    pub n_theta: usize,
    pub n_rho: usize,
    pub votes: Vec<u32>,
}

impl HoughAccumulator {
    pub fn theta_deg(&self, t: usize) -> f64 {
        t as f64 * self.theta_res_deg
    }

    pub fn rho_px(&self, r: usize) -> f64 {
        r as f64 * self.rho_res_px - self.diag
    }

    /// Bin index of ρ, by rounding to the nearest bin center.
    pub fn rho_bin(&self, rho: f64) -> usize {
        (((rho + self.diag) / self.rho_res_px).round() as usize).min(self.n_rho - 1)
    }

    /// Votes at `(t, r)` with θ wrapping around 180°, where ρ changes sign.
    /// Cells off the ρ range read as zero.
    fn votes_wrapped(&self, t: i64, r: i64) -> u32 {
        let (nt, nr) = (self.n_theta as i64, self.n_rho as i64);
        let (t, r) = if t < 0 {
            (t + nt, nr - 1 - r)
        } else if t >= nt {
            (t - nt, nr - 1 - r)
        } else {
            (t, r)
        };
        if !(0..nt).contains(&t) || !(0..nr).contains(&r) {
            return 0;
        }
        self.votes[t as usize * self.n_rho + r as usize]
    }

    /// Cells with at least `min_votes` votes that dominate every cell within
    /// `theta_radius` θ bins and `rho_radius` ρ bins. On ties the cell that
    /// comes first in (θ, ρ) order wins. Strongest first.
    pub fn local_maxima(&self, min_votes: u32, theta_radius: usize, rho_radius: usize) -> Vec<HoughPeak> {
        let floor = min_votes.max(1);
        let (wt, wr) = (theta_radius as i64, rho_radius as i64);
        let mut out = Vec::new();
        for t in 0..self.n_theta as i64 {
            for r in 0..self.n_rho as i64 {
                let v = self.votes[t as usize * self.n_rho + r as usize];
                if v < floor {
                    continue;
                }
                let dominated = (-wt..=wt).any(|dt| {
                    (-wr..=wr).any(|dr| {
                        let n = self.votes_wrapped(t + dt, r + dr);
                        (dt, dr) != (0, 0) && (n > v || (n == v && (dt, dr) < (0, 0)))
                    })
                });
                if !dominated {
                    out.push(HoughPeak {
                        theta_deg: self.theta_deg(t as usize),
                        rho_px: self.rho_px(r as usize),
                        votes: v,
                    });
                }
            }
        }
        out.sort_by(|a, b| {
            b.votes
                .cmp(&a.votes)
                .then(a.theta_deg.total_cmp(&b.theta_deg))
                .then(a.rho_px.total_cmp(&b.rho_px))
        });
        out
    }
}

pub fn hough_accumulate(
    edges: &BinaryMask,
    theta_res_deg: f64,
    rho_res_px: f64,
) -> Result<HoughAccumulator> {
    if !(theta_res_deg > 0.0) || !(rho_res_px > 0.0) {
        return Err(invalid(format!(
            "hough resolutions must be positive (theta {theta_res_deg}, rho {rho_res_px})"
        )));
    }
    let (w, h) = edges.dims();
    let diag = ((w * w + h * h) as f64).sqrt().ceil();
    let n_theta = ((180.0 / theta_res_deg).round() as usize).max(1);
    let n_rho = (2.0 * diag / rho_res_px).round() as usize + 1;
    let mut acc = HoughAccumulator {
        theta_res_deg,
        rho_res_px,
        diag,
        n_theta,
        n_rho,
        votes: vec![0; n_theta * n_rho],
    };
    let trig: Vec<(f64, f64)> = (0..n_theta)
        .map(|t| {
            let th = acc.theta_deg(t).to_radians();
            (th.cos(), th.sin())
        })
        .collect();
    for (x, y) in edges.foreground() {
        let (xf, yf) = (x as f64, y as f64);
        for (t, &(c, s)) in trig.iter().enumerate() {
            let r = acc.rho_bin(xf * c + yf * s);
            acc.votes[t * n_rho + r] += 1;
        }
    }
    Ok(acc)
}

/// Every accumulator cell with at least `min_votes` votes, strongest first.
/// Equal votes are ordered by θ then ρ.
pub fn hough_peaks(
    edges: &BinaryMask,
    theta_res_deg: f64,
    rho_res_px: f64,
    min_votes: u32,
) -> Result<Vec<HoughPeak>> {
    let acc = hough_accumulate(edges, theta_res_deg, rho_res_px)?;
    let floor = min_votes.max(1);
    let mut cells: Vec<(u32, usize, usize)> = Vec::new();
    for t in 0..acc.n_theta {
        for r in 0..acc.n_rho {
            let v = acc.votes[t * acc.n_rho + r];
            if v >= floor {
                cells.push((v, t, r));
            }
        }
    }
    cells.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    Ok(cells
        .into_iter()
        .map(|(votes, t, r)| HoughPeak {
            theta_deg: acc.theta_deg(t),
            rho_px: acc.rho_px(r),
            votes,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Votes per (θ index, ρ index), straight from the definition.
    fn brute_votes(edges: &BinaryMask, theta_res: f64, rho_res: f64) -> Vec<(usize, usize, u32)> {
        let (w, h) = edges.dims();
        let diag = ((w * w + h * h) as f64).sqrt().ceil();
        let n_theta = (180.0 / theta_res).round() as usize;
        let n_rho = (2.0 * diag / rho_res).round() as usize + 1;
        let mut out = Vec::new();
        for t in 0..n_theta {
            let th = (t as f64 * theta_res).to_radians();
            for r in 0..n_rho {
                let mut v = 0;
                for (x, y) in edges.foreground() {
                    let rho = x as f64 * th.cos() + y as f64 * th.sin();
                    let bin = (((rho + diag) / rho_res).round() as usize).min(n_rho - 1);
                    if bin == r {
                        v += 1;
                    }
                }
                if v > 0 {
                    out.push((t, r, v));
                }
            }
        }
        out
    }

    #[test]
    fn empty_mask_has_no_peaks() {
        let m = BinaryMask::new(16, 16);
        assert!(hough_peaks(&m, 1.0, 1.0, 1).unwrap().is_empty());
    }

    #[test]
    fn horizontal_row_peaks_at_ninety() {
        let m = BinaryMask::from_fn(64, 64, |x, y| y == 20 && (10..50).contains(&x));
        let peaks = hough_peaks(&m, 1.0, 1.0, 1).unwrap();
        let top = peaks[0];
        assert!((top.theta_deg - 90.0).abs() <= 1.0, "{top:?}");
        assert!(top.votes >= 39 && top.votes <= 40, "{top:?}");
        assert!((top.rho_px - 20.0).abs() <= 1.0);
    }

    #[test]
    fn cross_gives_two_equal_peaks() {
        let m = BinaryMask::from_fn(64, 64, |x, y| {
            (y == 20 && (10..50).contains(&x)) || (x == 40 && (5..45).contains(&y))
        });
        let peaks = hough_peaks(&m, 1.0, 1.0, 30).unwrap();
        let best = |target: f64| {
            peaks
                .iter()
                .filter(|p| (p.theta_deg - target).abs() < 0.5)
                .map(|p| p.votes)
                .max()
                .unwrap()
        };
        let (h, v) = (best(90.0), best(0.0));
        assert!((h as i64 - v as i64).abs() <= 1, "h {h} v {v}");
        assert!(peaks[0].theta_deg == 0.0 || peaks[0].theta_deg == 90.0);
    }

    #[test]
    fn invalid_resolution_rejected() {
        let m = BinaryMask::new(4, 4);
        assert!(hough_peaks(&m, 0.0, 1.0, 1).is_err());
        assert!(hough_peaks(&m, 1.0, -1.0, 1).is_err());
    }

    #[test]
    fn full_size_matches_brute_force() {
        let m = BinaryMask::from_fn(64, 64, |x, y| (x * 7 + y * 13) % 11 == 0 || x == y);
        let acc = hough_accumulate(&m, 2.0, 1.5).unwrap();
        let expected = brute_votes(&m, 2.0, 1.5);
        let nonzero = acc.votes.iter().filter(|&&v| v > 0).count();
        assert_eq!(nonzero, expected.len());
        for (t, r, v) in expected {
            assert_eq!(acc.votes[t * acc.n_rho + r], v);
        }
    }

    #[test]
    fn local_maxima_of_a_row() {
        let m = BinaryMask::from_fn(64, 64, |x, y| y == 20 && (10..50).contains(&x));
        let acc = hough_accumulate(&m, 1.0, 1.0).unwrap();
        let peaks = acc.local_maxima(10, 2, 3);
        assert_eq!(peaks[0].theta_deg, 90.0);
        assert_eq!(peaks[0].votes, 40);
        // everything else is well below the line itself
        assert!(peaks[1..].iter().all(|p| p.votes < 20), "{peaks:?}");
    }

    #[test]
    fn local_maxima_wrap_theta() {
        // a vertical line peaks at θ = 0, next to θ = 179 across the wrap
        let m = BinaryMask::from_fn(64, 64, |x, y| x == 30 && (5..60).contains(&y));
        let acc = hough_accumulate(&m, 1.0, 1.0).unwrap();
        let peaks = acc.local_maxima(5, 2, 3);
        assert_eq!((peaks[0].theta_deg, peaks[0].votes), (0.0, 55));
        assert!(peaks.iter().all(|p| p.theta_deg != 179.0 || p.votes < 55));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn local_maxima_dominate_their_window(
            bits in proptest::collection::vec(proptest::bool::weighted(0.1), 256),
        ) {
            let m = BinaryMask::from_fn(16, 16, |x, y| bits[y * 16 + x]);
            let acc = hough_accumulate(&m, 5.0, 1.0).unwrap();
            let peaks = acc.local_maxima(2, 1, 2);
            let all = hough_peaks(&m, 5.0, 1.0, 2).unwrap();
            prop_assert!(peaks.len() <= all.len());
            for p in &peaks {
                let t = (p.theta_deg / 5.0).round() as usize;
                let r = acc.rho_bin(p.rho_px);
                for dt in [-1i64, 0, 1] {
                    for dr in -2i64..=2 {
                        prop_assert!(acc.votes_wrapped(t as i64 + dt, r as i64 + dr) <= p.votes);
                    }
                }
            }
            if let Some(top) = all.first() {
                prop_assert_eq!(peaks[0].votes, top.votes);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn matches_brute_force_accumulator(
            w in 1usize..20, h in 1usize..20,
            bits in proptest::collection::vec(proptest::bool::weighted(0.15), 400),
            theta_res in prop_oneof![Just(1.0f64), Just(3.0), Just(7.5)],
        ) {
            let m = BinaryMask::from_fn(w, h, |x, y| bits[y * 20 + x]);
            let acc = hough_accumulate(&m, theta_res, 1.0).unwrap();
            let expected = brute_votes(&m, theta_res, 1.0);
            let total: u32 = acc.votes.iter().sum();
            prop_assert_eq!(total as usize, m.count() * acc.n_theta);
            for (t, r, v) in expected {
                prop_assert_eq!(acc.votes[t * acc.n_rho + r], v);
            }
        }
    }
}
