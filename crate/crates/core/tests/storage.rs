use robustcolor_core::harness::{run_game, GameConfig, RandomAdversary};
use robustcolor_core::RobustCubic;

#[test]
fn cubic_stored_degree_is_polylogarithmic() {
    let (n, l) = (256, 32);
    let cap = 64.0 * 8f64.powi(3);
    for seed in 0..5 {
        let mut alg = RobustCubic::new(n, l, seed);
        let mut adv = RandomAdversary::new(n, l, 0.0, 500 + seed);
        let cfg = GameConfig { n, degree_bound: l, max_tokens: n * l / 2, query_every_token: false, keep_colorings: false };
        let tr = run_game(&mut alg, &mut adv, &cfg).unwrap();
        assert!(!tr.failed());
        let stored = alg.stored();
        assert!((stored.max_degree() as f64) <= cap);
        let inserted: std::collections::BTreeSet<_> = tr.tokens().map(|t| t.edge).collect();
        assert!(stored.edges().all(|e| inserted.contains(&e)));
    }
}
