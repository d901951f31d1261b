mod common;

use common::*;
use metric_pairs::counting::{family_certificate, CountKind, CountingProfile};
use metric_pairs::gluing::glue_from_constraints;
use metric_pairs::io::{
    profile_from_csv, profile_to_csv, space_doc_from_csv, space_doc_to_csv, ChainDoc, PairDoc, SpaceDoc, TupleDoc,
};
use metric_pairs::metric::{ball, closed_ball, diam, restrict, BallKind};
use metric_pairs::solver::pair_isometry_search;
use metric_pairs::{build_chain, limit_proxy, Error};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn balls_grow_with_radius(seed in any::<u64>(), n in 2usize..8, r1 in 0.0f64..6.0, extra in 0.0f64..3.0) {
        let mut r = rng(seed);
        let d = random_metric(&mut r, n, 0.1, 4.0);
        let (x, c) = (space(&d), subset(n, &random_subset(&mut r, n)));
        let small_open = ball(&x, &c, r1, BallKind::Open).unwrap();
        let small = ball(&x, &c, r1, BallKind::Closed).unwrap().unwrap();
        let big = closed_ball(&x, &c, r1 + extra).unwrap();
        prop_assert!(small.is_subset_of(&big));
        prop_assert!(c.is_subset_of(&small));
        if let Some(o) = small_open {
            prop_assert!(o.is_subset_of(&small));
        }
        prop_assert!(ball(&x, &c, 0.0, BallKind::Open).unwrap().is_none());
    }

    #[test]
    fn restriction_keeps_distances(seed in any::<u64>(), n in 1usize..8) {
        let mut r = rng(seed);
        let d = random_metric(&mut r, n, 0.1, 5.0);
        let s = random_subset(&mut r, n);
        let x = space(&d);
        let sub = restrict(&x, &subset(n, &s));
        prop_assert_eq!(sub.len(), s.len());
        for (i, &u) in s.iter().enumerate() {
            for (j, &v) in s.iter().enumerate() {
                prop_assert_eq!(sub.d(i, j), d[u][v]);
            }
        }
        let want = s.iter().flat_map(|&u| s.iter().map(move |&v| (u, v))).map(|(u, v)| d[u][v]).fold(0.0, f64::max);
        prop_assert_eq!(diam(&x, &subset(n, &s)), want);
        prop_assert_eq!(sub.diameter(), want);
    }

    /// Any gluing honouring the caps is dominated by the constructed one.
    #[test]
    fn constraint_gluing_is_maximal(seed in any::<u64>(), n in 1usize..5, m in 1usize..5) {
        let mut r = rng(seed);
        let whole = random_metric(&mut r, n + m, 0.2, 4.0);
        let l: Matrix = whole[..n].iter().map(|row| row[..n].to_vec()).collect();
        let rt: Matrix = whole[n..].iter().map(|row| row[n..].to_vec()).collect();
        let known: Matrix = whole[..n].iter().map(|row| row[n..].to_vec()).collect();
        let k = r.gen_range(1..=n * m);
        let mut cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).collect();
        cells.shuffle(&mut r);
        let edges: Vec<(usize, usize, f64)> = cells[..k].iter().map(|&(i, j)| (i, j, known[i][j])).collect();
        let g = glue_from_constraints(&space(&l), &space(&rt), &edges, false).unwrap();
        for i in 0..n {
            for j in 0..m {
                prop_assert!(g.cross(i, j) >= known[i][j] - 1e-9);
            }
        }
        for &(i, j, cap) in &edges {
            prop_assert!(g.cross(i, j) <= cap + 1e-9);
        }
        prop_assert!(gluing_is_valid(&l, &rt, &g.cross_matrix(), 1e-9));
    }

    #[test]
    fn space_documents_round_trip(seed in any::<u64>(), n in 1usize..7) {
        let mut r = rng(seed);
        let d = random_metric(&mut r, n, 0.1, 9.0);
        let p = pair(&d, &random_subset(&mut r, n));
        let doc = SpaceDoc::from_space(&p.space);
        let back: SpaceDoc = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        prop_assert_eq!(back.to_space().unwrap().matrix(), d.clone());
        let csv = space_doc_from_csv(&space_doc_to_csv(&doc)).unwrap();
        prop_assert_eq!(csv.to_space().unwrap().matrix(), d.clone());

        let pd: PairDoc = serde_json::from_str(&serde_json::to_string(&PairDoc::from_pair(&p)).unwrap()).unwrap();
        prop_assert_eq!(pd.to_pair().unwrap(), p);

        let t = tuple(&d, &random_chain(&mut r, n, 3));
        let td: TupleDoc = serde_json::from_str(&serde_json::to_string(&TupleDoc::from_tuple(&t)).unwrap()).unwrap();
        prop_assert_eq!(td.to_tuple().unwrap(), t);
    }

    #[test]
    fn chain_documents_round_trip(seed in any::<u64>(), n in 1usize..4, k in 2usize..4) {
        let mut r = rng(seed);
        let d = random_metric(&mut r, n, 0.5, 3.0);
        let members: Vec<_> = (0..k).map(|_| pair(&d, &random_subset(&mut r, n))).collect();
        let blocks: Vec<Matrix> = (1..k).map(|_| d.iter().map(|row| row.iter().map(|v| v + 0.25).collect()).collect()).collect();
        let chain = build_chain(members, blocks, vec![1.0; k - 1]).unwrap();
        let text = serde_json::to_string(&ChainDoc::from_chain(&chain)).unwrap();
        let back = serde_json::from_str::<ChainDoc>(&text).unwrap().to_chain().unwrap();
        prop_assert_eq!(back.ambient().matrix(), chain.ambient().matrix());
        prop_assert_eq!(back.pairs(), chain.pairs());
    }

    #[test]
    fn profiles_round_trip(values in proptest::collection::vec((0.01f64..10.0, 0usize..50), 0..6)) {
        for kind in [CountKind::M, CountKind::N, CountKind::P, CountKind::S, CountKind::Pi, CountKind::Nu] {
            let p = CountingProfile { kind, samples: values.clone() };
            prop_assert_eq!(profile_from_csv(&profile_to_csv(&p)).unwrap(), p);
        }
    }
}

#[test]
fn limit_set_matches_path_enumeration() {
    let mut r = rng(31);
    let mut checked = 0;
    for _ in 0..200 {
        let k = r.gen_range(2..=4);
        let members: Vec<_> = (0..k)
            .map(|_| {
                let n = r.gen_range(1..=3);
                pair(&random_metric(&mut r, n, 0.3, 2.0), &random_subset(&mut r, n))
            })
            .collect();
        let blocks: Vec<Matrix> = members
            .windows(2)
            .map(|w| {
                let (a, b) = (w[0].space.diameter(), w[1].space.diameter());
                let base = a.max(b) / 2.0 + 0.05;
                (0..w[0].space.len())
                    .map(|_| (0..w[1].space.len()).map(|_| base + r.gen_range(0.0..1.0)).collect())
                    .collect()
            })
            .collect();
        let budgets: Vec<f64> = (1..k).map(|_| r.gen_range(0.5..1.6)).collect();
        let chain = build_chain(members.clone(), blocks, budgets.clone()).unwrap();
        let layers: Vec<Vec<usize>> =
            members.iter().enumerate().map(|(m, p)| p.a.iter().map(|i| chain.global(m, i)).collect()).collect();
        let paths = chain_paths_oracle(&chain.ambient().matrix(), &layers, &budgets, chain.ambient().tolerance());
        let mut ends: Vec<usize> = paths.iter().map(|p| *p.last().unwrap()).collect();
        ends.sort_unstable();
        ends.dedup();
        match limit_proxy(&chain) {
            Err(Error::EmptyLimit) => assert!(ends.is_empty()),
            Ok(proxy) => {
                let last = k - 1;
                let w: Vec<usize> = proxy.z_pair.a.iter().map(|i| chain.global(last, i)).collect();
                assert_eq!(w, ends);
                for (path, &end) in proxy.chains.iter().zip(&ends) {
                    let global: Vec<usize> = path.iter().enumerate().map(|(m, &i)| chain.global(m, i)).collect();
                    let first = paths.iter().filter(|p| *p.last().unwrap() == end).min().unwrap();
                    assert_eq!(&global, first);
                }
                checked += 1;
            }
            Err(e) => panic!("{e}"),
        }
    }
    assert!(checked > 20, "only {checked} nonempty limits");
}

#[test]
fn family_profiles_are_member_maxima() {
    let mut r = rng(32);
    for _ in 0..30 {
        let family: Vec<_> = (0..r.gen_range(1..=4))
            .map(|_| {
                let n = r.gen_range(1..=6);
                pair(&random_grid_metric(&mut r, n, 30), &random_subset(&mut r, n))
            })
            .collect();
        let grid = [0.25, 0.45, 0.8, 1.3];
        let (pi, nu) = family_certificate(&family, &grid).unwrap();
        for (s, &eps) in grid.iter().enumerate() {
            let (mut p_max, mut n_max) = (0, 0);
            for p in &family {
                let d = p.space.matrix();
                let set: Vec<usize> = (0..d.len()).filter(|&x| p.a.iter().any(|a| d[a][x] <= 1.0 / eps)).collect();
                p_max = p_max.max(packing_oracle(&d, &set, eps));
                n_max = n_max.max(inner_cover_oracle(&d, &set, eps));
            }
            assert_eq!(pi.samples[s], (eps, p_max));
            assert_eq!(nu.samples[s], (eps, n_max));
        }
    }
}

#[test]
fn relabelled_pairs_are_recognised() {
    let mut r = rng(33);
    for _ in 0..100 {
        let n = r.gen_range(1..=6);
        let d = random_metric(&mut r, n, 0.1, 5.0);
        let a = random_subset(&mut r, n);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut r);
        // point i of the copy is point perm[i] of the original
        let e: Matrix = (0..n).map(|i| (0..n).map(|j| d[perm[i]][perm[j]]).collect()).collect();
        let b: Vec<usize> = (0..n).filter(|&i| a.contains(&perm[i])).collect();
        let (p, q) = (pair(&d, &a), pair(&e, &b));
        let f = pair_isometry_search(&p, &q).expect("copy is isometric");
        let mut seen = vec![false; n];
        for i in 0..n {
            assert!(!std::mem::replace(&mut seen[f[i]], true), "not injective");
            for j in 0..n {
                assert_eq!(d[i][j], e[f[i]][f[j]]);
            }
            assert_eq!(a.contains(&i), b.contains(&f[i]));
        }
        if n > 1 {
            let mut far = e.clone();
            far[0][1] *= 1.5;
            far[1][0] = far[0][1];
            if let Ok(y) = metric_pairs::FiniteMetricSpace::from_matrix(&far) {
                let q2 = metric_pairs::hausdorff::MetricPair::new(y, subset(n, &b)).unwrap();
                assert!(pair_isometry_search(&p, &q2).is_none());
            }
        }
    }
}
