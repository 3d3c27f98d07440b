use robustcolor_core::cubic::color_universe;
use robustcolor_core::harness::{run_game, Adversary, FloodAdversary, GameConfig, MonoAdversary, RandomAdversary};
use robustcolor_core::sketch::{ColoringSketch, SketchKind};
use robustcolor_core::{Coloring, EdgeToken, ExactBufferSketch, RobustCubic, SketchError, StreamConfig, SwitchingColorer, SwitchingConfig};

fn adversaries(n: usize, l: usize, seed: u64) -> Vec<Box<dyn Adversary>> {
    vec![
        Box::new(MonoAdversary::new(n, l)),
        Box::new(FloodAdversary::new(n, l)),
        Box::new(RandomAdversary::new(n, l, 0.0, seed)),
    ]
}

fn game(n: usize, l: usize, m: usize) -> GameConfig {
    GameConfig { n, degree_bound: l, max_tokens: m, query_every_token: true, keep_colorings: true }
}

#[test]
fn cubic_stays_proper_and_in_universe() {
    let (n, l) = (64, 16);
    for seed in 0..8 {
        for mut adv in adversaries(n, l, seed) {
            let mut alg = RobustCubic::new(n, l, seed);
            let tr = run_game(&mut alg, adv.as_mut(), &game(n, l, n * l)).unwrap();
            assert!(!tr.failed(), "seed {seed}: {:?}", tr.failure);
            assert_eq!(tr.improper_count(), 0);
            for (step, c) in tr.steps.iter().zip(tr.colorings.iter().skip(1)) {
                let delta = step.max_degree as u64;
                let universe = color_universe(delta);
                assert!(c.iter().all(|t| {
                    let (d, p) = (t[0] as u64, t[1] as u64);
                    d <= delta && if d == 0 { p == 0 } else { p >= 1 && p <= 2 * d * d }
                }));
                assert!(step.query.unwrap().colors_used as u64 <= universe.min(3 * delta.pow(3)).max(1));
            }
        }
    }
}

#[test]
fn switching_exact_inner_respects_quadratic_bound() {
    let (n, l) = (48, 8);
    let m = 4 * n * l;
    for seed in 0..4 {
        for mut adv in [
            Box::new(RandomAdversary::new(n, l, 0.3, seed)) as Box<dyn Adversary>,
            Box::new(MonoAdversary::new(n, l)),
        ] {
            let cfg = StreamConfig::new(n, m, l, 2, 0.01, seed).unwrap();
            let mut alg = SwitchingColorer::new(SwitchingConfig::new(&cfg), SketchKind::Exact { n }).unwrap();
            let tr = run_game(&mut alg, adv.as_mut(), &game(n, l, m)).unwrap();
            assert!(!tr.failed(), "{:?}", tr.failure);
            assert_eq!(tr.improper_count(), 0);
            for s in &tr.steps {
                let d = s.max_degree;
                assert!(s.query.unwrap().colors_used <= (2 * d + 1) * (d + 1));
            }
        }
    }
}

#[test]
fn switching_palette_survives_adaptive_attacks() {
    let (n, l) = (64, 8);
    let m = 8 * n * l;
    for k in [2, 3] {
        for seed in 0..2 {
            for mut adv in adversaries(n, l, seed) {
                let cfg = StreamConfig::new(n, m, l, k, 0.01, seed).unwrap();
                let inner = SketchKind::Palette(robustcolor_core::sketch::PaletteSketchConfig::new(n, l));
                let mut alg = SwitchingColorer::new(SwitchingConfig::new(&cfg), inner).unwrap();
                let tr = run_game(&mut alg, adv.as_mut(), &game(n, l, m)).unwrap();
                assert!(!tr.failed(), "k={k} seed={seed}: {:?}", tr.failure);
                assert_eq!(tr.improper_count(), 0);
            }
        }
    }
}

/// Answers with one fixed coloring whatever the stream does.
struct Frozen(Coloring);

impl ColoringSketch for Frozen {
    fn process(&mut self, _: EdgeToken) -> Result<(), SketchError> {
        Ok(())
    }

    fn query(&mut self) -> Result<Coloring, SketchError> {
        Ok(self.0.clone())
    }

    fn space_proxy(&self) -> usize {
        0
    }
}

#[test]
fn mono_adversary_breaks_a_static_coloring_immediately() {
    let n = 20;
    let mut alg = Frozen(Coloring::from_scalars((0..n as u32).map(|v| v % 3).collect()));
    let mut adv = MonoAdversary::new(n, 4);
    let tr = run_game(&mut alg, &mut adv, &game(n, 4, 10)).unwrap();
    assert!(!tr.steps[0].query.unwrap().proper);
    assert_eq!(tr.improper_count(), tr.steps.len());
}

#[test]
fn exact_buffer_is_proper_under_deletions() {
    let (n, l) = (40, 6);
    let mut alg = ExactBufferSketch::new(n);
    let mut adv = RandomAdversary::new(n, l, 0.4, 9);
    let tr = run_game(&mut alg, &mut adv, &game(n, l, 2000)).unwrap();
    assert_eq!(tr.steps.len(), 2000);
    assert!(tr.steps.iter().any(|s| !s.token.is_insert()));
    assert_eq!(tr.improper_count(), 0);
}
