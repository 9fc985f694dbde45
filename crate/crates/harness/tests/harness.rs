//! Match, tournament, sweep and curve behaviour.

use mxz_games::{Action, GameConfig, GameState};
use mxz_harness::tournament::{outcomes_csv, outcomes_table};
use mxz_harness::{
    play_match, run_tournament, sweep, Agent, AgentSpec, HarnessError, MatchResult,
    SweepParameter, TournamentSpec,
};
use mxz_search::{SearchBudget, SearchReport};

fn hex(n: u8) -> GameConfig {
    GameConfig::hex(n).unwrap()
}

#[test]
fn random_hex_match_has_a_winner() {
    let game = hex(5);
    for seed in 0..10 {
        let mut a = AgentSpec::parse("random").unwrap().build(&game, SearchBudget::Iterations(1)).unwrap();
        let mut b = AgentSpec::parse("random").unwrap().build(&game, SearchBudget::Iterations(1)).unwrap();
        let record = play_match(a.as_mut(), b.as_mut(), &game, seed).unwrap();
        assert_ne!(record.result, MatchResult::Draw, "hex has no draws");
        record.validate(&game).unwrap();
    }
}

#[test]
fn oracle_first_beats_random_on_hex3() {
    // Hex 3 is a first-player win; the exhaustive-negamax agent converts
    // every time.
    let game = hex(3);
    let budget = SearchBudget::Iterations(1);
    let mut oracle = AgentSpec::parse("oracle").unwrap().build(&game, budget).unwrap();
    let mut random = AgentSpec::parse("random").unwrap().build(&game, budget).unwrap();
    for seed in 0..20 {
        let record = play_match(oracle.as_mut(), random.as_mut(), &game, seed).unwrap();
        assert_eq!(record.result, MatchResult::FirstWins, "seed {seed}");
        record.validate(&game).unwrap();
    }
}

#[test]
fn matches_are_deterministic_under_iteration_budgets() {
    let game = GameConfig::othello(4).unwrap();
    let budget = SearchBudget::Iterations(16);
    let run = |seed: u64| {
        let mut a = AgentSpec::parse("ubfms?eval=noise:5")
            .unwrap()
            .build(&game, budget)
            .unwrap();
        let mut b = AgentSpec::parse("mcts?c=0.5&eval=noise:9")
            .unwrap()
            .build(&game, budget)
            .unwrap();
        let mut record = play_match(a.as_mut(), b.as_mut(), &game, seed).unwrap();
        record.move_millis.clear(); // wall-clock timing is the one non-deterministic field
        record.to_json_line()
    };
    assert_eq!(run(3), run(3));
    assert_ne!(run(3), run(4), "distinct seeds give independent games");
}

struct IllegalAgent;

impl Agent for IllegalAgent {
    fn name(&self) -> &str {
        "illegal"
    }
    fn reset(&mut self, _seed: u64) {}
    fn choose(
        &mut self,
        _state: &GameState,
    ) -> Result<(Action, Option<SearchReport>), HarnessError> {
        Ok(("a1".parse().unwrap(), None)) // eventually occupied -> illegal
    }
}

#[test]
fn illegal_move_forfeits_with_diagnostic() {
    let game = hex(3);
    let mut bad = IllegalAgent;
    let mut random = AgentSpec::parse("random")
        .unwrap()
        .build(&game, SearchBudget::Iterations(1))
        .unwrap();
    let record = play_match(&mut bad, random.as_mut(), &game, 1).unwrap();
    assert_eq!(record.result, MatchResult::SecondWins);
    let diag = record.forfeit.as_ref().expect("forfeit recorded");
    assert!(diag.contains("illegal") && diag.contains("a1"), "{diag}");
    record.validate(&game).unwrap();
}

#[test]
fn tournament_percentages_and_self_mirror() {
    let game = hex(4);
    let spec = TournamentSpec {
        game,
        agents: vec![AgentSpec::parse("random").unwrap(), AgentSpec::parse("random").unwrap()],
        matches_per_color: 20,
        budget: SearchBudget::Iterations(1),
        seed: 11,
    };
    let outcomes = run_tournament(&spec).unwrap();
    assert_eq!(outcomes.len(), 1);
    let o = &outcomes[0];
    assert_eq!(o.games(), 40, "counts sum to 2x matches-per-color");
    assert_eq!(o.a_wins + o.b_wins + o.draws, o.games());
    let total_pct = o.a_win_rate() + o.draw_rate() + (o.b_wins as f64 / o.games() as f64);
    assert!((total_pct - 1.0).abs() < 1e-12);
    // Same-agent pairing: aggregate first-player win rate equals the
    // second player's loss rate by the counting identity.
    let first_wins = o
        .records
        .iter()
        .filter(|r| r.result == MatchResult::FirstWins)
        .count();
    let second_losses = o
        .records
        .iter()
        .filter(|r| r.result == MatchResult::FirstWins)
        .count();
    assert_eq!(first_wins, second_losses);
    for r in &o.records {
        r.validate(&game).unwrap();
    }
    // Table and CSV render with consistent arithmetic.
    let csv = outcomes_csv(&outcomes);
    assert!(csv.lines().count() == 2);
    let table = outcomes_table(&outcomes);
    assert!(table.contains("win") && table.contains("draw"));
}

#[test]
fn tournament_aborts_on_unresolvable_agent() {
    let spec = TournamentSpec {
        game: hex(3),
        agents: vec![
            AgentSpec::parse("random").unwrap(),
            AgentSpec::parse("ubfms?net=/nonexistent/path.mxz").unwrap(),
        ],
        matches_per_color: 1,
        budget: SearchBudget::Iterations(1),
        seed: 0,
    };
    assert!(run_tournament(&spec).is_err());
}

#[test]
fn sweep_rows_and_single_value_reduction() {
    let game = GameConfig::othello(4).unwrap();
    let subject = AgentSpec::parse("mcts?c=0&eval=noise:2").unwrap();
    let reference = AgentSpec::parse("ubfm?eval=noise:3").unwrap();
    let values: Vec<String> = ["0", "1", "5"].iter().map(|s| s.to_string()).collect();
    let rows = sweep(
        &game,
        &subject,
        &reference,
        SweepParameter::ExplorationC,
        &values,
        3,
        SearchBudget::Iterations(12),
        21,
    )
    .unwrap();
    assert_eq!(rows.len(), 3, "one row per value");
    for row in &rows {
        assert_eq!(row.outcome.games(), 6);
    }
    // A single-value sweep is exactly one tournament.
    let single = sweep(
        &game,
        &subject,
        &reference,
        SweepParameter::ExplorationC,
        &values[..1],
        3,
        SearchBudget::Iterations(12),
        mxz_learn::mix_seed(21, 0).wrapping_sub(0), // same derived seed as the sweep's first row
    );
    // Seeds differ in derivation; compare via a direct tournament instead.
    let direct = run_tournament(&TournamentSpec {
        game,
        agents: vec![subject.with_option("c", "0"), reference.clone()],
        matches_per_color: 3,
        budget: SearchBudget::Iterations(12),
        seed: mxz_learn::mix_seed(21, 0),
    })
    .unwrap();
    let single = single.unwrap();
    assert_eq!(single[0].outcome.a_wins, direct[0].a_wins);
    assert_eq!(single[0].outcome.draws, direct[0].draws);
}

#[test]
fn agent_spec_parsing() {
    assert!(AgentSpec::parse("ubfm").is_ok());
    assert!(AgentSpec::parse("mcts?c=0.5&b=4&fpu=on").is_ok());
    assert!(AgentSpec::parse("warp-drive").is_err());
    assert!(AgentSpec::parse("mcts?c").is_err());
    let spec = AgentSpec::parse("mcts?c=1").unwrap().with_option("c", "7");
    assert_eq!(spec.spec, "mcts?c=7");
    // puct without a policy evaluator fails at match time with a config
    // error surfaced through the search.
    let game = hex(3);
    let mut a = AgentSpec::parse("mcts?puct=on")
        .unwrap()
        .build(&game, SearchBudget::Iterations(4))
        .unwrap();
    let mut b = AgentSpec::parse("random")
        .unwrap()
        .build(&game, SearchBudget::Iterations(4))
        .unwrap();
    assert!(play_match(a.as_mut(), b.as_mut(), &game, 0).is_err());
}

#[test]
fn curve_from_a_single_checkpoint() {
    use mxz_harness::curve::{curve_csv, ProbeSpec};
    let dir = std::env::temp_dir().join(format!("mxz-curve-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let game = hex(4);
    let spec = mxz_eval::NetworkSpec::for_game(
        mxz_eval::Architecture::C,
        &game,
        mxz_games::Encoding::default(),
        mxz_games::TerminalHeuristic::ClassicGain,
    )
    .unwrap()
    .with_widths(4, 8);
    let net = mxz_eval::ValueNetwork::new(spec, 3).unwrap();
    let path = dir.join("ckpt_00000010.mxz");
    mxz_eval::save_checkpoint(&net, &path, "t").unwrap();
    let points = mxz_harness::learning_curve(
        &[(10, path.clone()), (20, dir.join("missing.mxz"))],
        &ProbeSpec {
            game,
            baseline: AgentSpec::parse("random").unwrap(),
            matches_per_color: 3,
            budget: SearchBudget::Iterations(8),
            seed: 5,
            engine: "ubfms".into(),
        },
    )
    .unwrap();
    // One data row; the missing checkpoint was skipped with a warning.
    assert_eq!(points.len(), 1);
    assert_eq!(points[0].games_trained, 10);
    assert!(points[0].win_rate >= 0.0 && points[0].win_rate <= 1.0);
    assert_eq!(points[0].games, 6);
    let csv = curve_csv(&points);
    assert_eq!(csv.lines().count(), 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn cli_selfcheck_exits_zero() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_mxz"))
        .arg("selfcheck")
        .output()
        .expect("binary runs");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("selfcheck complete"));
}
