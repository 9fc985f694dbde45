//! MCTS behaviour: greedy degeneracy at c=0, mandatory first visits, visit
//! accounting under batching with virtual loss, FPU, PUCT validation and
//! determinism.

use mxz_games::{GameConfig, GameState, TerminalHeuristic};
use mxz_search::{
    mcts_decide, Evaluator, FnEvaluator, HashNoiseEvaluator, LeafEval, MctsConfig, SearchBudget,
    SearchError, TranspositionTable,
};

fn othello6() -> GameState {
    GameConfig::othello(6).unwrap().initial_state()
}

#[test]
fn greedy_at_c_zero_after_initialization() {
    let state = othello6();
    let eval = HashNoiseEvaluator { bound: 36.0, seed: 9 };
    let cfg = MctsConfig { c: 0.0, log_selections: true, ..MctsConfig::default() };
    let mut table = TranspositionTable::new();
    let report = mcts_decide(
        &mut table,
        &state,
        SearchBudget::iterations(200),
        &eval,
        TerminalHeuristic::Scoring,
        &cfg,
    )
    .unwrap();
    let log = report.selections.as_ref().expect("instrumented run");
    let mut checked = 0;
    for event in log {
        if !event.all_visited {
            continue;
        }
        checked += 1;
        let best = event
            .mover_q
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        // Ties break to the lowest index; the recorded argmax scan returns
        // the first maximum, so equality suffices.
        assert_eq!(
            event.mover_q[event.chosen], event.mover_q[best],
            "selection is not greedy over Q"
        );
    }
    assert!(checked > 0, "no post-initialization selections recorded");
}

#[test]
fn each_root_child_visited_once_without_fpu() {
    let state = othello6();
    let k = state.legal_actions().len() as u64;
    let eval = HashNoiseEvaluator { bound: 36.0, seed: 2 };
    let cfg = MctsConfig::default();
    let mut table = TranspositionTable::new();
    let report = mcts_decide(
        &mut table,
        &state,
        SearchBudget::iterations(k),
        &eval,
        TerminalHeuristic::Scoring,
        &cfg,
    )
    .unwrap();
    for stat in &report.root {
        assert_eq!(stat.visits, 1);
    }
    // Chosen move = best single evaluation (ties by Q since all visits are 1).
    let children: Vec<GameState> =
        state.legal_actions().iter().map(|&a| state.apply(a).unwrap()).collect();
    let evals = eval.evaluate(&children).unwrap();
    let best = evals
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.value.partial_cmp(&b.1.value).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    assert_eq!(report.action, state.legal_actions()[best]);
}

#[test]
fn visit_accounting_is_conserved_under_batching() {
    let state = othello6();
    let eval = HashNoiseEvaluator { bound: 36.0, seed: 17 };
    for b in [1usize, 4] {
        let cfg = MctsConfig { batch: b, ..MctsConfig::default() };
        let mut table = TranspositionTable::new();
        let report = mcts_decide(
            &mut table,
            &state,
            SearchBudget::iterations(64),
            &eval,
            TerminalHeuristic::Scoring,
            &cfg,
        )
        .unwrap();
        let total: u64 = report.root.iter().map(|s| u64::from(s.visits)).sum();
        assert_eq!(total, 64, "b={b}");
        assert_eq!(report.iterations, 64);
        // Virtual losses restored everywhere.
        for (_, entry) in table.iter() {
            assert_eq!(entry.pending_total, 0);
            assert!(entry.pending.iter().all(|&p| p == 0));
        }
    }
}

#[test]
fn monotone_counters_across_budgets() {
    let state = othello6();
    let eval = HashNoiseEvaluator { bound: 36.0, seed: 23 };
    let cfg = MctsConfig::default();
    let mut prev: Option<Vec<u32>> = None;
    // Reuse one table across growing budgets: per-action visit counts only
    // ever grow.
    let mut table = TranspositionTable::new();
    for extra in [8u64, 8, 8, 8] {
        mcts_decide(
            &mut table,
            &state,
            SearchBudget::iterations(extra),
            &eval,
            TerminalHeuristic::Scoring,
            &cfg,
        )
        .unwrap();
        let visits: Vec<u32> = table.get(&state).unwrap().visits.clone();
        if let Some(p) = prev {
            assert!(p.iter().zip(&visits).all(|(a, b)| a <= b));
        }
        prev = Some(visits);
    }
}

#[test]
fn fpu_lets_urgent_children_repeat_before_initialization() {
    // One child evaluates far above the rest; with FPU at a pessimistic
    // substitute value and small c, the urgent child is selected again
    // while siblings are still unvisited.
    let state = othello6();
    let target = state.legal_actions()[0];
    let marked = state.apply(target).unwrap();
    let eval = FnEvaluator {
        bound: 36.0,
        f: move |s: &GameState| if *s == marked { 30.0 } else { -5.0 },
    };
    let cfg = MctsConfig {
        c: 0.25,
        use_fpu: true,
        fpu_value: Some(-0.5),
        log_selections: true,
        ..MctsConfig::default()
    };
    let mut table = TranspositionTable::new();
    let report = mcts_decide(
        &mut table,
        &state,
        SearchBudget::iterations(6),
        &eval,
        TerminalHeuristic::Scoring,
        &cfg,
    )
    .unwrap();
    let visits: Vec<u32> = report.root.iter().map(|s| s.visits).collect();
    assert!(visits[0] > 1, "urgent child revisited: {visits:?}");
    assert!(visits.iter().filter(|&&v| v == 0).count() > 0, "some siblings left unvisited");
}

#[test]
fn puct_without_policy_is_a_configuration_error() {
    let state = othello6();
    let eval = HashNoiseEvaluator { bound: 36.0, seed: 1 };
    let cfg = MctsConfig { use_puct: true, ..MctsConfig::default() };
    let mut table = TranspositionTable::new();
    let err = mcts_decide(
        &mut table,
        &state,
        SearchBudget::iterations(8),
        &eval,
        TerminalHeuristic::Scoring,
        &cfg,
    )
    .unwrap_err();
    assert!(matches!(err, SearchError::Config(_)));
}

#[test]
fn puct_with_uniform_policy_runs() {
    struct UniformPolicyEval;
    impl Evaluator for UniformPolicyEval {
        fn bound(&self) -> f64 {
            36.0
        }
        fn has_policy(&self) -> bool {
            true
        }
        fn evaluate(&self, states: &[GameState]) -> Result<Vec<LeafEval>, mxz_search::EvalError> {
            Ok(states
                .iter()
                .map(|s| {
                    let k = s.legal_actions().len();
                    LeafEval { value: 0.0, priors: Some(vec![1.0 / k as f64; k]) }
                })
                .collect())
        }
    }
    let state = othello6();
    let cfg = MctsConfig { use_puct: true, use_fpu: true, c: 1.5, ..MctsConfig::default() };
    let mut table = TranspositionTable::new();
    let report = mcts_decide(
        &mut table,
        &state,
        SearchBudget::iterations(50),
        &UniformPolicyEval,
        TerminalHeuristic::Scoring,
        &cfg,
    )
    .unwrap();
    let total: u64 = report.root.iter().map(|s| u64::from(s.visits)).sum();
    assert_eq!(total, 50);
}

#[test]
fn deterministic_reports() {
    let state = othello6();
    let eval = HashNoiseEvaluator { bound: 36.0, seed: 77 };
    let run = |b: usize| {
        let cfg = MctsConfig { batch: b, c: 0.5, ..MctsConfig::default() };
        let mut table = TranspositionTable::new();
        mcts_decide(
            &mut table,
            &state,
            SearchBudget::iterations(48),
            &eval,
            TerminalHeuristic::Scoring,
            &cfg,
        )
        .unwrap()
        .to_json_line()
    };
    assert_eq!(run(1), run(1));
    assert_eq!(run(4), run(4));
    // Batched and unbatched runs may legitimately differ; record only.
    let _ = (run(1), run(4));
}
