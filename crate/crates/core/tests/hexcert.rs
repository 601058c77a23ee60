mod common;

use homline::gauge::{BuiltinId, Gauge};
use homline::hexcert::{
    hex_winner, lift_loop, lipschitz_check, plan_instance, pullback_coloring,
    rotated_loop_intersection, rotated_pairs, winding_number, CertifyError, Color, Coloring, Cover, CylinderGrid,
    HexError, PlanOverrides,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn f_map_on_small_grid() {
    let g = CylinderGrid::new(2, 1).unwrap();
    assert_eq!((g.period(), g.width(), g.height()), (3, 7, 2));
    let row0: Vec<f64> = (0..7).map(|i| g.f_map((i, 0)).unwrap()).collect();
    assert_eq!(row0, vec![0.0, 0.5, 1.0, 0.0, 0.5, 1.0, 0.0]);
    assert_eq!(g.f_map((2, 1)).unwrap(), 2.0);
    assert_eq!(g.f_map((7, 0)), Err(HexError::OutOfGrid((7, 0))));
}

#[test]
fn exhaustive_small_board() {
    let grid = CylinderGrid::new(1, 1).unwrap();
    assert_eq!(grid.len(), 10);
    for bits in 0u32..1 << grid.len() {
        let cells = (0..grid.len()).map(|i| if bits >> i & 1 == 1 { Color::Black } else { Color::White }).collect();
        let col = Coloring::explicit(&grid, cells).unwrap();
        let black = common::crosses(&grid, &col, Color::Black);
        let white = common::crosses(&grid, &col, Color::White);
        assert!(black ^ white, "{bits:010b}");
        let cert = hex_winner(&grid, &col);
        assert_eq!(cert.winner == Color::Black, black);
        cert.validate(&grid, &col).unwrap();
        assert_eq!(Some(cert.chain.len()), common::shortest_chain(&grid, &col, cert.winner));
    }
}

#[test]
fn random_boards_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (m, k) in [(4, 3), (3, 5), (6, 2)] {
        let grid = CylinderGrid::new(m, k).unwrap();
        for _ in 0..300 {
            let col = common::random_coloring(&grid, &mut rng, 0.5);
            let cert = hex_winner(&grid, &col);
            cert.validate(&grid, &col).unwrap();
            assert_eq!(cert.winner == Color::Black, common::crosses(&grid, &col, Color::Black));
            assert_eq!(Some(cert.chain.len()), common::shortest_chain(&grid, &col, cert.winner));
        }
    }
}

#[test]
fn uniform_colorings() {
    let grid = CylinderGrid::new(3, 2).unwrap();
    let black = Coloring::from_fn(&grid, |_| Color::Black);
    assert_eq!(hex_winner(&grid, &black).chain, vec![(0, 0), (0, 1), (0, 2)]);
    let white = Coloring::from_fn(&grid, |_| Color::White);
    let c = hex_winner(&grid, &white);
    assert_eq!(c.winner, Color::White);
    assert_eq!(c.chain.len(), grid.width());
}

#[test]
fn tampered_chain_fails_validation() {
    let grid = CylinderGrid::new(3, 2).unwrap();
    let white = Coloring::from_fn(&grid, |_| Color::White);
    let mut c = hex_winner(&grid, &white);
    c.chain.remove(3);
    assert!(c.validate(&grid, &white).is_err());
    let mut c = hex_winner(&grid, &white);
    c.chain.pop();
    assert!(c.validate(&grid, &white).is_err());
}

#[test]
fn staircase_loops_have_rotated_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for m in 2..=8usize {
        let t = m as i64 + 1;
        for _ in 0..20 {
            let lp = common::staircase_loop(t, 3, &mut rng);
            assert_eq!(winding_number(&lp, t), Ok(1));
            for l in 1..m as i64 {
                let p = rotated_loop_intersection(&lp, t, l).unwrap();
                assert_eq!((p.p_prime.0 - p.p.0).rem_euclid(t), l);
                assert!((p.p_prime.1 - p.p.1).abs() <= 1);
                assert_eq!(lp[p.i], p.p);
                assert_eq!(lp[p.j], p.p_prime);
                let all = rotated_pairs(&lp, t, l).unwrap();
                assert_eq!(all[0], p);
            }
        }
    }
}

#[test]
fn null_loops_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let mut lp = common::staircase_loop(6, 2, &mut rng);
        let half = lp.len() / 2;
        lp.truncate(half + 1);
        let back: Vec<_> = lp.iter().rev().skip(1).copied().collect();
        lp.extend(back);
        assert_eq!(winding_number(&lp, 6), Ok(0));
        assert_eq!(rotated_loop_intersection(&lp, 6, 2), Err(HexError::NullHomotopic));
    }
    let cyl = vec![(0, 0), (1, 0), (2, 0), (3, 0), (0, 0)];
    assert_eq!(winding_number(&lift_loop(&cyl, 4), 4), Ok(1));
}

#[test]
fn lipschitz_on_grids() {
    let grid = CylinderGrid::new(4, 2).unwrap();
    assert!(lipschitz_check(&grid, &Gauge::builtin(BuiltinId::Euclidean).unwrap(), 1.0).pass);
    assert!(!lipschitz_check(&grid, &Gauge::builtin(BuiltinId::Euclidean).unwrap(), 0.1).pass);
}

#[test]
fn pullback_and_gaps() {
    let grid = CylinderGrid::new(2, 2).unwrap();
    let cover = Cover { label: String::new(), black: vec![(-1.0, 0.6)], white: vec![(0.4, 3.0)] };
    let col = pullback_coloring(&grid, &cover).unwrap();
    assert_eq!(col.get((0, 0)), Color::Black);
    assert_eq!(col.get((1, 0)), Color::Black);
    assert_eq!(col.get((2, 0)), Color::White);
    assert_eq!(col, pullback_coloring(&grid, &cover).unwrap());
    let gap = Cover { label: String::new(), black: vec![(-1.0, 0.3)], white: vec![(0.6, 3.0)] };
    assert!(matches!(pullback_coloring(&grid, &gap), Err(HexError::CoverageGap { .. })));
}

#[test]
fn certification_refuses_lc_gauges() {
    let g = Gauge::builtin(BuiltinId::Sqrt).unwrap();
    assert!(matches!(plan_instance(&g, 1.0, PlanOverrides::default()), Err(CertifyError::NotApplicable { .. })));
}
