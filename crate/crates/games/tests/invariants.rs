//! Rule-level invariants checked over seeded random playouts, plus the
//! brute-force flip oracle for Othello and notation round-trips.

use mxz_games::playout::{random_action, random_playout};
use mxz_games::{Action, Coord, GameConfig, GameState, Player};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn desk_configs() -> Vec<GameConfig> {
    vec![
        GameConfig::hex(5).unwrap(),
        GameConfig::othello(6).unwrap(),
        GameConfig::breakthrough(5, 5).unwrap(),
    ]
}

#[test]
fn playouts_terminate_within_l_max() {
    for cfg in desk_configs() {
        let l_max = cfg.l_max();
        let mut rng = ChaCha8Rng::seed_from_u64(0xA11CE);
        for _ in 0..10_000 {
            let end = random_playout(&cfg.initial_state(), &mut rng);
            assert!(end.is_terminal());
            assert!(end.move_count() <= l_max, "{cfg}: {} > {l_max}", end.move_count());
        }
    }
}

#[test]
fn hex_has_no_draws() {
    let cfg = GameConfig::hex(5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xBEEF);
    for _ in 0..10_000 {
        let end = random_playout(&cfg.initial_state(), &mut rng);
        assert_ne!(end.gain(), 0.0);
    }
}

#[test]
fn breakthrough_has_no_draws_and_pieces_shrink() {
    let cfg = GameConfig::breakthrough(5, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xB00);
    for _ in 0..2_000 {
        let end = random_playout(&cfg.initial_state(), &mut rng);
        assert_ne!(end.gain(), 0.0);
    }
}

/// Independent flip oracle: for a placement, rescan all 8 directions from
/// scratch and collect enclosed runs of enemy discs.
fn oracle_flips(state: &GameState, at: Coord) -> Vec<usize> {
    let (n, _) = state.dims();
    let n = n as isize;
    let cells = state.cells();
    let own = match state.to_move() {
        Player::First => 1u8,
        Player::Second => 2u8,
    };
    let mut flips = Vec::new();
    for dr in -1isize..=1 {
        for dc in -1isize..=1 {
            if dr == 0 && dc == 0 {
                continue;
            }
            let mut run = Vec::new();
            let (mut r, mut c) = (at.row as isize + dr, at.col as isize + dc);
            loop {
                if r < 0 || r >= n || c < 0 || c >= n {
                    run.clear();
                    break;
                }
                let cell = cells[(r * n + c) as usize];
                if cell == 0 {
                    run.clear();
                    break;
                }
                if cell == own {
                    break;
                }
                run.push((r * n + c) as usize);
                r += dr;
                c += dc;
            }
            flips.extend(run);
        }
    }
    flips.sort_unstable();
    flips
}

#[test]
fn othello_apply_matches_flip_oracle() {
    let cfg = GameConfig::othello(6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0xF11B);
    let mut tested = 0;
    while tested < 1_000 {
        // Random midgame position.
        let mut s = cfg.initial_state();
        let depth = rng.random_range(0..24);
        for _ in 0..depth {
            if s.is_terminal() {
                break;
            }
            let a = random_action(&s, &mut rng);
            s = s.apply(a).unwrap();
        }
        if s.is_terminal() {
            continue;
        }
        for action in s.legal_actions() {
            let Action::Place(at) = action else { continue };
            let expected = oracle_flips(&s, at);
            assert!(!expected.is_empty(), "legal placement must flip");
            let next = s.apply(action).unwrap();
            // Every oracle flip now belongs to the mover; the total disc
            // delta is flips + 1 placed.
            let own = match s.to_move() {
                Player::First => 1u8,
                Player::Second => 2,
            };
            for &idx in &expected {
                assert_eq!(next.cells()[idx], own, "disc {idx} not flipped");
            }
            let flipped = s
                .cells()
                .iter()
                .zip(next.cells())
                .enumerate()
                .filter(|(i, (a, b))| {
                    a != b && **a != 0 && *i != (at.row as usize * 6 + at.col as usize)
                })
                .count();
            assert_eq!(flipped, expected.len(), "flip count mismatch");
            tested += 1;
        }
    }
}

#[test]
fn gain_is_zero_sum_between_perspectives() {
    // gain() is from the first player's perspective; the second player's
    // view is its negation by construction. Check sign bookkeeping via
    // terminal examples from both winners.
    let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
    for cfg in desk_configs() {
        for _ in 0..200 {
            let end = random_playout(&cfg.initial_state(), &mut rng);
            let g = end.gain();
            assert!((-1.0..=1.0).contains(&g));
            assert_eq!(g * Player::First.sign(), g);
            assert_eq!(g * Player::Second.sign(), -g);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn action_notation_round_trips(seed in 0u64..1_000, steps in 0usize..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for cfg in desk_configs() {
            let mut s = cfg.initial_state();
            for _ in 0..steps {
                if s.is_terminal() {
                    break;
                }
                let a = random_action(&s, &mut rng);
                let text = a.to_string();
                let back: Action = text.parse().unwrap();
                prop_assert_eq!(a, back);
                s = s.apply(a).unwrap();
            }
        }
    }

    #[test]
    fn board_text_round_trips(seed in 0u64..1_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for cfg in desk_configs() {
            let mut s = cfg.initial_state();
            let depth = rng.random_range(0..10usize);
            for _ in 0..depth {
                if s.is_terminal() {
                    break;
                }
                let a = random_action(&s, &mut rng);
                s = s.apply(a).unwrap();
            }
            let text = s.board_text();
            let back = GameState::from_text_at(
                &cfg, &text, s.to_move(), s.move_count(), s.pass_streak()).unwrap();
            prop_assert_eq!(&s, &back);
        }
    }
}
