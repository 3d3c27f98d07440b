use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use robustcolor_core::avoid::{avoid_lower_bound, AvoidError, ReductionParams, ReductionSetup};
use robustcolor_core::sketch::{PaletteSketchConfig, SketchKind};
use robustcolor_core::{is_proper, Graph, StreamConfig, SwitchingColorer, SwitchingConfig};

type Colorer = SwitchingColorer<SketchKind>;

fn colorer(setup: &ReductionSetup, seed: u64) -> Colorer {
    let p = setup.params();
    let cfg = StreamConfig::new(p.n, setup.stream_len(), p.degree, 2, 0.05, seed).unwrap();
    let mut sc = SwitchingConfig::new(&cfg);
    sc.insert_only = true;
    SwitchingColorer::new(sc, SketchKind::Palette(PaletteSketchConfig::new(p.n, p.degree))).unwrap()
}

#[test]
fn switching_blackbox_recovers_disjoint_fresh_elements() {
    let mut successes = 0;
    for seed in 0..20u64 {
        let setup = ReductionSetup::new(ReductionParams::new(64, 8, 4, seed)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let sets: Vec<Vec<u32>> = (0..setup.blocks())
            .map(|_| {
                let mut all: Vec<u32> = (0..setup.universe()).collect();
                all.partial_shuffle(&mut rng, setup.alice_size()).0.to_vec()
            })
            .collect();
        let alice = match setup.alice_encode(&sets, colorer(&setup, seed)) {
            Ok(a) => a,
            Err(AvoidError::DegreeOverflow { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        let mut g = Graph::from_edges(64, alice.inserted.iter().map(|e| (e.u(), e.v()))).unwrap();
        assert!(g.max_degree() <= 2);
        let bob = setup.bob_recover::<Colorer>(&alice.bytes).unwrap();
        successes += 1;
        for (b, rec) in bob.recovered.iter().enumerate() {
            assert_eq!(rec.len(), setup.bob_size());
            for x in rec {
                assert!(!sets[b].contains(x), "seed {seed}: element {x} is in Alice's block {b}");
            }
        }
        // a proper coloring only pairs vertices with no edge between them
        for (q, round) in bob.queries.iter().zip(&bob.rounds) {
            assert!(is_proper(q, &g));
            assert!(!round.is_empty());
            for &e in round {
                assert_eq!(q.get(e.u() as usize), q.get(e.v() as usize));
                assert!(g.insert(e), "seed {seed}: edge {e:?} was already present");
            }
        }
        assert!(g.max_degree() <= 4);
        let bound = avoid_lower_bound(&setup.instance(0.0).unwrap(), true);
        assert!(alice.communication_bits() as f64 >= bound);
    }
    assert!(successes >= 18);
}
