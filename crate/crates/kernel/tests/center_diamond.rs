//! Green-site statistics of finite diamonds against enumeration and the plane limit.

use arctic_kernel::center::{
    aztec_point, green_prob_aztec, green_prob_aztec_with, green_prob_plane, limiting_kernel,
    GreenSiteSet,
};
use arctic_kernel::extended_kernel::AztecKernel;
use arctic_kernel::tiling::{enumerate_tilings, DEFAULT_ENUM_CAP};

#[test]
fn order_three_matches_enumeration() {
    let n = 3;
    let tilings = enumerate_tilings(n, 1.0, DEFAULT_ENUM_CAP).unwrap();
    assert_eq!(tilings.len(), 64);
    let z: f64 = tilings.iter().map(|(_, w)| w).sum();
    let candidates = [
        (0i64, 0i64),
        (1, 0),
        (-1, 0),
        (0, -1),
        (1, -1),
        (-1, -1),
        (2, 0),
        (0, 1),
    ];
    let mut sets: Vec<Vec<(i64, i64)>> = candidates.iter().map(|&c| vec![c]).collect();
    for (i, &c) in candidates.iter().enumerate() {
        for &d in &candidates[i + 1..] {
            sets.push(vec![c, d]);
        }
    }
    sets.push(vec![(0, 0), (0, -1), (-1, -1)]);
    sets.push(vec![(0, 0), (1, -1), (-1, 0)]);
    let mut checked = 0;
    for sites in sets {
        let s = GreenSiteSet::new(sites).unwrap();
        if s.sites()
            .iter()
            .any(|&(u, l)| aztec_point(u, l, n).is_err())
        {
            continue;
        }
        let brute: f64 = tilings
            .iter()
            .filter(|(t, _)| {
                (0..s.len()).all(|j| {
                    let (m, l) = s.square(j);
                    t.dominoes.iter().any(|d| d.x == m && d.y == l)
                })
            })
            .map(|(_, w)| w / z)
            .sum();
        let det = green_prob_aztec(&s, n).unwrap();
        assert!(
            (det - brute).abs() < 1e-8,
            "{:?}: {det} vs {brute}",
            s.sites()
        );
        checked += 1;
    }
    assert!(checked >= 10, "{checked}");
}

#[test]
fn single_site_density_tends_to_one_half() {
    // Some sites sit at exactly 1/2 for every n of one residue mod 4.
    for site in [(0, 1), (1, 1), (-2, -2)] {
        let s = GreenSiteSet::new(vec![site]).unwrap();
        let gaps: Vec<f64> = [11usize, 41, 101]
            .iter()
            .map(|&n| (green_prob_aztec(&s, n).unwrap() - 0.5).abs())
            .collect();
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{site:?}: {gaps:?}");
    }
}

#[test]
fn finite_kernel_tends_to_limit() {
    let pairs = [
        ((0i64, 0i64), (1i64, 0i64)),
        ((0, 0), (-1, 1)),
        ((1, 0), (0, -1)),
        ((-1, 0), (1, -1)),
    ];
    let kernels: Vec<AztecKernel> = [51usize, 101, 201]
        .iter()
        .map(|&n| AztecKernel::new(n, 1.0).unwrap())
        .collect();
    for ((uj, lj), (uk, lk)) in pairs {
        let lim = limiting_kernel(uj, lj, uk, lk).unwrap();
        assert!(lim.im.abs() < 1e-12);
        let errs: Vec<f64> = kernels
            .iter()
            .map(|k| {
                let (r, x) = aztec_point(uj, lj, k.n()).unwrap();
                let (s, y) = aztec_point(uk, lk, k.n()).unwrap();
                (k.kernel(r, x, s, y).unwrap() - lim.re).abs()
            })
            .collect();
        assert!(
            errs[0] > errs[1] && errs[1] > errs[2],
            "{:?}: {errs:?}",
            ((uj, lj), (uk, lk))
        );
    }
}

#[test]
fn diamond_probabilities_approach_the_plane() {
    let kernels: Vec<AztecKernel> = [51usize, 101, 201]
        .iter()
        .map(|&n| AztecKernel::new(n, 1.0).unwrap())
        .collect();
    for sites in [
        vec![(0, 0), (1, 0)],
        vec![(0, 0), (0, 1), (1, 1)],
        vec![(0, 0), (2, 1), (-1, 0)],
        vec![(1, -1), (0, 0), (2, 2)],
    ] {
        let s = GreenSiteSet::new(sites).unwrap();
        let plane = green_prob_plane(&s).unwrap();
        let errs: Vec<f64> = kernels
            .iter()
            .map(|k| (green_prob_aztec_with(k, &s).unwrap() - plane).abs())
            .collect();
        assert!(
            errs[0] > errs[1] && errs[1] > errs[2] && errs[2] < 0.02,
            "{:?}: {errs:?}",
            s.sites()
        );
    }
}
