//! The experiments behind each subcommand. Everything here is a pure
//! function of its settings and seed; output order never depends on thread
//! scheduling.

use std::io::Write;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

use robustcolor_core::avoid::{avoid_lower_bound, AvoidError, ReductionParams, ReductionSetup};
use robustcolor_core::harness::random_graph::{random_graph_check, RandomGraphReport};
use robustcolor_core::harness::{run_game, Adversary, FloodAdversary, GameConfig, GameTranscript, MonoAdversary, RandomAdversary, ScriptedAdversary};
use robustcolor_core::prf::{tag, Prf};
use robustcolor_core::sketch::{AlgEvent, CheckpointKind, ColoringSketch, PaletteSketchConfig, SketchKind};
use robustcolor_core::{EdgeToken, ExactBufferSketch, Graph, PaletteSketch, RobustCubic, StreamConfig, SwitchingColorer, SwitchingConfig};

use crate::config::{AdversaryKind, Algorithm, Inner, Settings};
use crate::error::CliError;
use crate::format::{implied_n, parse_stream, validate_stream, Located};

pub type BoxedSketch = Box<dyn ColoringSketch + Send>;

/// Seed of trial `i` under master seed `seed`.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    Prf::new(seed).child_seed(tag::TRIAL, trial as u32, 0)
}

fn adversary_seed(trial_seed: u64) -> u64 {
    Prf::new(trial_seed).child_seed(tag::ADVERSARY, 0, 0)
}

pub fn build_algorithm(s: &Settings, seed: u64, insert_only: bool) -> Result<BoxedSketch, CliError> {
    Ok(match s.algorithm {
        Algorithm::Cubic => Box::new(RobustCubic::new(s.n, s.l, seed)),
        Algorithm::Exact => Box::new(ExactBufferSketch::new(s.n)),
        Algorithm::Palette => Box::new(PaletteSketch::new(PaletteSketchConfig::new(s.n, s.l), seed)),
        Algorithm::Switching { k } => Box::new(switching(s, k, seed, insert_only)?),
    })
}

fn switching(s: &Settings, k: usize, seed: u64, insert_only: bool) -> Result<SwitchingColorer<SketchKind>, CliError> {
    let cfg = StreamConfig::new(s.n, s.m, s.l, k, s.delta, seed).map_err(|e| CliError::invalid(e.to_string()))?;
    let mut sc = SwitchingConfig::new(&cfg);
    sc.insert_only = insert_only;
    let inner = match s.inner {
        Inner::Palette => SketchKind::Palette(PaletteSketchConfig::new(s.n, s.l)),
        Inner::Exact => SketchKind::Exact { n: s.n },
    };
    SwitchingColorer::new(sc, inner).map_err(|e| CliError::invalid(e.to_string()))
}

pub fn load_stream(path: &Path) -> Result<Vec<Located>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))?;
    parse_stream(&text)
}

fn build_adversary(s: &Settings, seed: u64, script: &[EdgeToken]) -> Box<dyn Adversary + Send> {
    match s.adversary {
        AdversaryKind::Mono => Box::new(MonoAdversary::new(s.n, s.l)),
        AdversaryKind::Flood => Box::new(FloodAdversary::new(s.n, s.l)),
        AdversaryKind::Random => Box::new(RandomAdversary::new(s.n, s.l, s.delete_prob, adversary_seed(seed))),
        AdversaryKind::File => Box::new(ScriptedAdversary::new(script.to_vec())),
    }
}

fn describe(e: &AlgEvent) -> String {
    match e {
        AlgEvent::Checkpoint { level, kind, sketch, max_degree } => {
            let kind = match kind {
                CheckpointKind::Fixed => "fixed",
                CheckpointKind::AdHoc => "adhoc",
                CheckpointKind::Vacuous => "vacuous",
            };
            let sketch = sketch.map_or("-".to_string(), |i| i.to_string());
            format!("checkpoint(level={level},kind={kind},sketch={sketch},maxdeg={max_degree})")
        }
        AlgEvent::PoolReset { level } => format!("pool-reset(level={level})"),
        AlgEvent::AdHocInProcess { level } => format!("adhoc-in-process(level={level})"),
    }
}

pub const TRANSCRIPT_HEADER: [&str; 10] = ["trial", "step", "op", "u", "v", "queried", "proper", "colorsUsed", "spaceProxy", "event"];

pub fn write_transcript<W: Write>(w: &mut csv::Writer<W>, trial: usize, tr: &GameTranscript) -> Result<(), CliError> {
    for s in &tr.steps {
        let mut events: Vec<String> = s.events.iter().map(describe).collect();
        if let Some((step, e)) = &tr.failure {
            if *step == s.step {
                events.push(format!("fail({e})"));
            }
        }
        let (queried, proper, colors) = match s.query {
            Some(q) => ("1", if q.proper { "1" } else { "0" }.to_string(), q.colors_used.to_string()),
            None => ("0", String::new(), String::new()),
        };
        w.write_record([
            trial.to_string(),
            s.step.to_string(),
            if s.token.is_insert() { "i" } else { "d" }.to_string(),
            s.token.edge.u().to_string(),
            s.token.edge.v().to_string(),
            queried.to_string(),
            proper,
            colors,
            s.space_proxy.to_string(),
            events.join(";"),
        ])?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialSummary {
    pub trial: usize,
    pub seed: u64,
    pub tokens: usize,
    pub queries: usize,
    pub improper: usize,
    pub failure: Option<String>,
    pub max_colors: usize,
    pub peak_space: usize,
    pub checkpoints: usize,
}

impl TrialSummary {
    fn from_transcript(trial: usize, seed: u64, tr: &GameTranscript) -> Self {
        TrialSummary {
            trial,
            seed,
            tokens: tr.steps.len(),
            queries: tr.queries().count(),
            improper: tr.improper_count(),
            failure: tr.failure.as_ref().map(|(step, e)| format!("step {step}: {e}")),
            max_colors: tr.queries().map(|q| q.colors_used).max().unwrap_or(0),
            peak_space: tr.peak_space(),
            checkpoints: tr.steps.iter().flat_map(|s| &s.events).filter(|e| matches!(e, AlgEvent::Checkpoint { .. })).count(),
        }
    }

    pub fn line(&self) -> String {
        format!(
            "trial {} seed {} tokens {} queries {} improper {} max_colors {} peak_space {} checkpoints {} status {}",
            self.trial,
            self.seed,
            self.tokens,
            self.queries,
            self.improper,
            self.max_colors,
            self.peak_space,
            self.checkpoints,
            self.failure.as_deref().map_or("ok".to_string(), |f| format!("FAIL ({f})"))
        )
    }
}

pub const SUMMARY_HEADER: [&str; 9] = ["trial", "seed", "tokens", "queries", "improper", "failure", "maxColors", "peakSpace", "checkpoints"];

fn write_summary<W: Write>(w: &mut csv::Writer<W>, s: &TrialSummary) -> Result<(), CliError> {
    w.write_record([
        s.trial.to_string(),
        s.seed.to_string(),
        s.tokens.to_string(),
        s.queries.to_string(),
        s.improper.to_string(),
        s.failure.clone().unwrap_or_default(),
        s.max_colors.to_string(),
        s.peak_space.to_string(),
        s.checkpoints.to_string(),
    ])?;
    Ok(())
}

/// `run.csv` → `run.summary.csv`.
pub fn summary_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.summary.csv"))
}

fn game_config(s: &Settings) -> GameConfig {
    GameConfig { n: s.n, degree_bound: s.l, max_tokens: s.m, query_every_token: s.query_every_token, keep_colorings: false }
}

fn stream_is_insert_only(s: &Settings, script: &[EdgeToken]) -> bool {
    match s.adversary {
        AdversaryKind::Mono | AdversaryKind::Flood => true,
        AdversaryKind::Random => s.delete_prob == 0.0,
        AdversaryKind::File => script.iter().all(|t| t.is_insert()),
    }
}

/// One adaptive game per trial.
pub fn play(s: &Settings, trial: usize, script: &[EdgeToken]) -> Result<(TrialSummary, GameTranscript), CliError> {
    let seed = trial_seed(s.seed, trial);
    let mut alg = build_algorithm(s, seed, stream_is_insert_only(s, script))?;
    let mut adv = build_adversary(s, seed, script);
    let tr = run_game(alg.as_mut(), adv.as_mut(), &game_config(s)).map_err(|e| CliError::invalid(format!("trial {trial}: adversary broke a promise: {e}")))?;
    Ok((TrialSummary::from_transcript(trial, seed, &tr), tr))
}

pub struct AttackReport {
    pub summaries: Vec<TrialSummary>,
}

impl AttackReport {
    pub fn improper(&self) -> usize {
        self.summaries.iter().map(|s| s.improper).sum()
    }

    pub fn failures(&self) -> usize {
        self.summaries.iter().filter(|s| s.failure.is_some()).count()
    }
}

pub fn attack<W: Write>(s: &Settings, mut log: W) -> Result<AttackReport, CliError> {
    let script: Vec<EdgeToken> = match (&s.adversary, &s.stream) {
        (AdversaryKind::File, Some(p)) => load_stream(p)?.into_iter().map(|t| t.token).collect(),
        _ => Vec::new(),
    };
    let keep = s.out.is_some();
    let results: Vec<Result<(TrialSummary, Option<GameTranscript>), CliError>> = (0..s.trials)
        .into_par_iter()
        .map(|t| play(s, t, &script).map(|(sum, tr)| (sum, keep.then_some(tr))))
        .collect();
    let mut summaries = Vec::with_capacity(s.trials);
    let mut transcripts = Vec::new();
    for r in results {
        let (sum, tr) = r?;
        writeln!(log, "{}", sum.line())?;
        summaries.push(sum);
        transcripts.extend(tr);
    }
    if let Some(out) = &s.out {
        let mut w = csv::Writer::from_path(out)?;
        w.write_record(TRANSCRIPT_HEADER)?;
        for (i, tr) in transcripts.iter().enumerate() {
            write_transcript(&mut w, i, tr)?;
        }
        w.flush()?;
        let mut w = csv::Writer::from_path(summary_path(out))?;
        w.write_record(SUMMARY_HEADER)?;
        for sum in &summaries {
            write_summary(&mut w, sum)?;
        }
        w.flush()?;
    }
    let report = AttackReport { summaries };
    writeln!(
        log,
        "attack: trials {} improper {} failed {} ({:.2}%)",
        s.trials,
        report.improper(),
        report.failures(),
        100.0 * report.failures() as f64 / s.trials as f64
    )?;
    if s.assert {
        if report.improper() > 0 {
            return Err(CliError::Failed(format!("{} improper colorings", report.improper())));
        }
        if report.failures() * 100 > s.trials {
            return Err(CliError::Failed(format!("failure rate {}/{} exceeds 1%", report.failures(), s.trials)));
        }
    }
    Ok(report)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpacePoint {
    pub degree: usize,
    pub trial: usize,
    pub tokens: usize,
    pub peak_space: usize,
    pub failed: bool,
}

/// Insert-only random streams with `n·d/2` tokens for each degree bound
/// `d`; records peak space. Returns the points and the log-log slope of the
/// per-degree mean.
pub fn bench_space<W: Write>(s: &Settings, degrees: &[usize], mut log: W) -> Result<(Vec<SpacePoint>, f64), CliError> {
    if degrees.len() < 2 || degrees.iter().any(|&d| d == 0 || d >= s.n) {
        return Err(CliError::invalid("--degrees needs at least two values in 1..n"));
    }
    let jobs: Vec<(usize, usize)> = degrees.iter().flat_map(|&d| (0..s.trials).map(move |t| (d, t))).collect();
    let points: Vec<Result<SpacePoint, CliError>> = jobs
        .into_par_iter()
        .map(|(d, t)| {
            let run = Settings { l: d, m: s.n * d / 2, delete_prob: 0.0, adversary: AdversaryKind::Random, ..s.clone() };
            let seed = trial_seed(s.seed, t);
            let mut alg = build_algorithm(&run, seed, true)?;
            let mut adv = RandomAdversary::new(run.n, d, 0.0, adversary_seed(seed));
            let tr = run_game(alg.as_mut(), &mut adv, &game_config(&run)).map_err(|e| CliError::invalid(e.to_string()))?;
            Ok(SpacePoint { degree: d, trial: t, tokens: tr.steps.len(), peak_space: tr.peak_space(), failed: tr.failed() })
        })
        .collect();
    let points = points.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut means = Vec::new();
    for &d in degrees {
        let here: Vec<&SpacePoint> = points.iter().filter(|p| p.degree == d).collect();
        let mean = here.iter().map(|p| p.peak_space as f64).sum::<f64>() / here.len() as f64;
        writeln!(log, "degree {d} mean_peak_space {mean:.1} failed {}", here.iter().filter(|p| p.failed).count())?;
        means.push((d as f64, mean));
    }
    let slope = log_log_slope(&means);
    writeln!(log, "bench-space: slope {slope:.4}")?;
    if let Some(out) = &s.out {
        let mut w = csv::Writer::from_path(out)?;
        w.write_record(["algorithm", "k", "n", "L", "trial", "tokens", "peakSpace", "failed"])?;
        let name = algorithm_name(s.algorithm);
        for p in &points {
            w.write_record([
                name.clone(),
                s.k.to_string(),
                s.n.to_string(),
                p.degree.to_string(),
                p.trial.to_string(),
                p.tokens.to_string(),
                p.peak_space.to_string(),
                (p.failed as u8).to_string(),
            ])?;
        }
        w.flush()?;
    }
    if s.assert && points.iter().any(|p| p.failed) {
        return Err(CliError::Failed("an algorithm run failed".into()));
    }
    Ok((points, slope))
}

pub fn algorithm_name(a: Algorithm) -> String {
    match a {
        Algorithm::Cubic => "cubic".into(),
        Algorithm::Exact => "exact".into(),
        Algorithm::Palette => "palette".into(),
        Algorithm::Switching { k } => format!("switching-{k}"),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AvoidRow {
    pub trial: usize,
    pub n: usize,
    pub colors: usize,
    pub degree: usize,
    pub blocks: usize,
    pub bytes_sent: usize,
    pub comm_bits: usize,
    pub elements_recovered: usize,
    pub lower_bound_bits: f64,
    pub success: bool,
    pub note: String,
}

/// Alice's uniformly random `a`-subsets, one per block.
pub fn alice_sets(setup: &ReductionSetup, seed: u64) -> Vec<Vec<u32>> {
    let mut rng = ChaCha8Rng::seed_from_u64(Prf::new(seed).child_seed(tag::COVERING, 1, 0));
    let mut all: Vec<u32> = (0..setup.universe()).collect();
    (0..setup.blocks())
        .map(|_| {
            let (chosen, _) = all.partial_shuffle(&mut rng, setup.alice_size());
            let mut v = chosen.to_vec();
            v.sort_unstable();
            v
        })
        .collect()
}

fn reduction_trial<A>(setup: &ReductionSetup, sets: &[Vec<u32>], alg: A) -> Result<(usize, usize, usize), AvoidError>
where
    A: ColoringSketch + Serialize + DeserializeOwned,
{
    let alice = setup.alice_encode(sets, alg)?;
    let bob = setup.bob_recover::<A>(&alice.bytes)?;
    let mut g = Graph::from_edges(setup.params().n, alice.inserted.iter().map(|e| (e.u(), e.v()))).map_err(|_| AvoidError::Invalid("Alice's edges"))?;
    for e in bob.inserted() {
        if !g.insert(e) {
            return Err(AvoidError::Invalid("Bob inserted an edge that was already present"));
        }
    }
    if g.max_degree() > setup.params().degree {
        return Err(AvoidError::Invalid("degree bound exceeded"));
    }
    for (rec, set) in bob.recovered.iter().zip(sets) {
        if rec.iter().any(|x| set.contains(x)) {
            return Err(AvoidError::Invalid("recovered an element of Alice's set"));
        }
    }
    let recovered = bob.recovered.iter().map(Vec::len).sum();
    Ok((alice.bytes.len(), alice.communication_bits(), recovered))
}

/// One end-to-end reduction per trial with the configured algorithm.
pub fn avoid_trial(s: &Settings, colors: usize, trial: usize) -> Result<AvoidRow, CliError> {
    let seed = trial_seed(s.seed, trial);
    let setup = ReductionSetup::new(ReductionParams::new(s.n, colors, s.l, seed)).map_err(|e| CliError::invalid(e.to_string()))?;
    let sets = alice_sets(&setup, seed);
    let run = Settings { m: setup.stream_len().max(1), ..s.clone() };
    let result = match s.algorithm {
        Algorithm::Cubic => reduction_trial(&setup, &sets, RobustCubic::new(s.n, s.l, seed)),
        Algorithm::Exact => reduction_trial(&setup, &sets, ExactBufferSketch::new(s.n)),
        Algorithm::Palette => reduction_trial(&setup, &sets, PaletteSketch::new(PaletteSketchConfig::new(s.n, s.l), seed)),
        Algorithm::Switching { k } => reduction_trial(&setup, &sets, switching(&run, k, seed, true)?),
    };
    let bound = avoid_lower_bound(&setup.instance(0.0).map_err(|e| CliError::invalid(e.to_string()))?, true);
    let mut row = AvoidRow {
        trial,
        n: s.n,
        colors,
        degree: s.l,
        blocks: setup.blocks(),
        bytes_sent: 0,
        comm_bits: 0,
        elements_recovered: 0,
        lower_bound_bits: bound,
        success: false,
        note: String::new(),
    };
    match result {
        Ok((bytes, bits, recovered)) => {
            row.bytes_sent = bytes;
            row.comm_bits = bits;
            row.elements_recovered = recovered;
            row.success = true;
        }
        Err(e) => row.note = e.to_string(),
    }
    Ok(row)
}

pub fn avoid_demo<W: Write>(s: &Settings, colors: usize, mut log: W) -> Result<Vec<AvoidRow>, CliError> {
    let rows: Vec<Result<AvoidRow, CliError>> = (0..s.trials).into_par_iter().map(|t| avoid_trial(s, colors, t)).collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
    for r in &rows {
        writeln!(
            log,
            "trial {} blocks {} bytes {} comm_bits {} recovered {} lower_bound {:.4} {}",
            r.trial,
            r.blocks,
            r.bytes_sent,
            r.comm_bits,
            r.elements_recovered,
            r.lower_bound_bits,
            if r.success { "ok".to_string() } else { format!("FAIL ({})", r.note) }
        )?;
    }
    let ok = rows.iter().filter(|r| r.success).count();
    writeln!(log, "avoid-demo: {ok}/{} successful", rows.len())?;
    if let Some(out) = &s.out {
        let mut w = csv::Writer::from_path(out)?;
        w.write_record(["trial", "n", "K", "L", "s", "bytesSent", "commBits", "elementsRecovered", "lowerBoundBits", "success"])?;
        for r in &rows {
            w.write_record([
                r.trial.to_string(),
                r.n.to_string(),
                r.colors.to_string(),
                r.degree.to_string(),
                r.blocks.to_string(),
                r.bytes_sent.to_string(),
                r.comm_bits.to_string(),
                r.elements_recovered.to_string(),
                format!("{:.6}", r.lower_bound_bits),
                (r.success as u8).to_string(),
            ])?;
        }
        w.flush()?;
    }
    if s.assert {
        if ok * 100 < 95 * rows.len() {
            return Err(CliError::Failed(format!("only {ok}/{} trials succeeded", rows.len())));
        }
        if let Some(r) = rows.iter().find(|r| r.success && (r.comm_bits as f64) < r.lower_bound_bits) {
            return Err(CliError::Failed(format!("trial {} sent {} bits, below the {:.4}-bit lower bound", r.trial, r.comm_bits, r.lower_bound_bits)));
        }
    }
    Ok(rows)
}

pub fn random_graph<W: Write>(s: &Settings, edges: usize, eps: f64, mut log: W) -> Result<RandomGraphReport, CliError> {
    let r = random_graph_check(s.n, edges, eps, s.trials, s.seed).map_err(|e| CliError::invalid(e.to_string()))?;
    writeln!(
        log,
        "random-graph-check: n {} M {} eps {} trials {} hits {} freq {:.6} wilson99 [{:.3e}, {:.3e}] bound {:.3e} {}",
        r.n,
        r.edges,
        r.eps,
        r.trials,
        r.hits,
        r.frequency(),
        r.wilson_lower,
        r.wilson_upper,
        r.bound,
        if r.consistent() { "consistent" } else { "INCONSISTENT" }
    )?;
    if let Some(out) = &s.out {
        let mut w = csv::Writer::from_path(out)?;
        w.write_record(["n", "M", "eps", "trials", "hits", "frequency", "wilsonLower", "wilsonUpper", "bound", "consistent"])?;
        w.write_record([
            r.n.to_string(),
            r.edges.to_string(),
            r.eps.to_string(),
            r.trials.to_string(),
            r.hits.to_string(),
            format!("{:.6}", r.frequency()),
            format!("{:.6e}", r.wilson_lower),
            format!("{:.6e}", r.wilson_upper),
            format!("{:.6e}", r.bound),
            (r.consistent() as u8).to_string(),
        ])?;
        w.flush()?;
    }
    if s.assert && !r.consistent() {
        return Err(CliError::Failed("empirical tail frequency exceeds the bound".into()));
    }
    Ok(r)
}

/// Feeds a stream file to one algorithm and writes its transcript.
pub fn replay<W: Write>(s: &Settings, tokens: &[Located], out: W) -> Result<GameTranscript, CliError> {
    let script: Vec<EdgeToken> = tokens.iter().map(|t| t.token).collect();
    let run = Settings { adversary: AdversaryKind::File, m: script.len().max(1), ..s.clone() };
    let seed = trial_seed(s.seed, 0);
    let mut alg = build_algorithm(&run, seed, script.iter().all(|t| t.is_insert()))?;
    let mut adv = ScriptedAdversary::new(script);
    let tr = run_game(alg.as_mut(), &mut adv, &game_config(&run)).map_err(|e| CliError::invalid(format!("stream breaks a promise: {e}")))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRANSCRIPT_HEADER)?;
    write_transcript(&mut w, 0, &tr)?;
    w.flush()?;
    Ok(tr)
}

/// `n` and `L` for a stream file: given values, or the smallest that fit.
pub fn stream_shape(tokens: &[Located], n: Option<usize>, l: Option<usize>) -> Result<(usize, usize), CliError> {
    let n = n.unwrap_or_else(|| implied_n(tokens));
    let stats = validate_stream(tokens, n, l)?;
    Ok((n, l.unwrap_or(stats.max_degree.max(1)).min(n - 1)))
}
