//! The monochromatic-edge repair game.
//!
//! The environment holds a hidden k-uniform hypergraph and a board that
//! starts all color 1. Each turn it reports the vertex sets of every
//! monochromatic edge; the player answers with at most `k` recolorings.
//! The game is won once the report is empty.
//!
//! The player only ever sees `(report, n, k)` and its own generator, which
//! the types below enforce: [`Player`] has no access to the hypergraph.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::instance::{is_monochromatic, Coloring, Hypergraph};
use crate::lll::check_condition;
use crate::prng::Prng;

/// Smallest edge size for which the turn bound is checked.
pub const MIN_BOUND_K: usize = 6;

/// Recolorings sent by the player in one turn.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Move {
    changes: Vec<(usize, u32)>,
}

impl Move {
    /// Validates the per-turn budget, vertex range and distinctness, and
    /// that every new color is 1 or 2.
    pub fn new(changes: Vec<(usize, u32)>, n: usize, k: usize) -> Result<Self> {
        if changes.len() > k {
            return Err(Error::Protocol(format!(
                "move changes {} vertices, budget is {k}",
                changes.len()
            )));
        }
        let mut seen = Vec::with_capacity(changes.len());
        for &(v, color) in &changes {
            if v >= n {
                return Err(Error::Protocol(format!("vertex {v} out of range")));
            }
            if !(1..=2).contains(&color) {
                return Err(Error::Protocol(format!("color {color} is not 1 or 2")));
            }
            if seen.contains(&v) {
                return Err(Error::Protocol(format!("vertex {v} changed twice")));
            }
            seen.push(v);
        }
        Ok(Move { changes })
    }

    pub fn changes(&self) -> &[(usize, u32)] {
        &self.changes
    }

    pub fn len(&self) -> usize {
        self.changes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.changes.is_empty()
    }
}

/// Environment side of the game.
#[derive(Debug, Clone)]
pub struct GameState {
    h: Hypergraph,
    board: Coloring,
    turn: usize,
}

impl GameState {
    pub fn new(h: Hypergraph) -> Self {
        let board = Coloring::uniform(h.n(), 1, 2).expect("color 1 is in the palette");
        GameState { h, board, turn: 0 }
    }

    pub fn public_n(&self) -> usize {
        self.h.n()
    }

    pub fn public_k(&self) -> usize {
        self.h.k()
    }

    pub fn board(&self) -> &Coloring {
        &self.board
    }

    pub fn turn(&self) -> usize {
        self.turn
    }

    pub fn finished(&self) -> bool {
        !self
            .h
            .edges()
            .iter()
            .any(|e| is_monochromatic(e, self.board.colors()))
    }

    /// Vertex sets of all monochromatic edges, sorted and deduplicated.
    /// Edge indices are not revealed.
    pub fn report(&self) -> Vec<Vec<usize>> {
        let mut sets: Vec<Vec<usize>> = self
            .h
            .edges()
            .iter()
            .filter(|e| is_monochromatic(e, self.board.colors()))
            .cloned()
            .collect();
        sets.sort();
        sets.dedup();
        sets
    }

    pub fn apply(&mut self, mv: &Move) -> Result<()> {
        let mv = Move::new(mv.changes.clone(), self.h.n(), self.h.k())?;
        for &(v, color) in mv.changes() {
            self.board.set(v, color);
        }
        self.turn += 1;
        Ok(())
    }
}

pub fn env_report(state: &GameState) -> Vec<Vec<usize>> {
    state.report()
}

/// One resampling move: redraw every vertex of the first reported set
/// uniformly from {1, 2}; vertices whose color did not change are left out.
///
/// `board` is the player's own record of the colors it has set.
pub fn player_move(
    report: &[Vec<usize>],
    board: &[u32],
    k: usize,
    prng: &mut Prng,
) -> Result<Move> {
    let target = report
        .first()
        .ok_or_else(|| Error::Protocol("player invoked with an empty report".into()))?;
    if target.len() > k {
        return Err(Error::Protocol(format!(
            "reported set has {} vertices, more than k = {k}",
            target.len()
        )));
    }
    let mut changes = Vec::with_capacity(target.len());
    for &v in target {
        let color = 1 + prng.below(2) as u32;
        let current = *board
            .get(v)
            .ok_or_else(|| Error::Protocol(format!("reported vertex {v} out of range")))?;
        if color != current {
            changes.push((v, color));
        }
    }
    Move::new(changes, board.len(), k)
}

/// The resampling player. Knows `n`, `k`, its generator, and the board
/// implied by its own moves.
#[derive(Debug, Clone)]
pub struct Player {
    k: usize,
    board: Vec<u32>,
    prng: Prng,
}

impl Player {
    pub fn new(public_n: usize, public_k: usize, rng_seed: u64) -> Self {
        Player {
            k: public_k,
            board: vec![1; public_n],
            prng: Prng::new(rng_seed),
        }
    }

    pub fn respond(&mut self, report: &[Vec<usize>]) -> Result<Move> {
        let mv = player_move(report, &self.board, self.k, &mut self.prng)?;
        for &(v, color) in mv.changes() {
            self.board[v] = color;
        }
        Ok(mv)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TurnRecord {
    pub report: Vec<Vec<usize>>,
    pub mv: Move,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameTranscript {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub epsilon: f64,
    pub seed: u64,
    /// `(1 + epsilon) * n / k`.
    pub bound: f64,
    pub hard_cap: usize,
    pub turns: Vec<TurnRecord>,
    pub won: bool,
    /// `None` when the bound is not checked: `k < 6`, or the instance
    /// violates the overlap condition.
    pub within_bound: Option<bool>,
}

impl GameTranscript {
    pub fn total_turns(&self) -> usize {
        self.turns.len()
    }

    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        let header = json!({
            "n": self.n, "m": self.m, "k": self.k,
            "epsilon": self.epsilon, "seed": self.seed, "bound": self.bound,
        });
        let _ = writeln!(out, "{header}");
        for (i, t) in self.turns.iter().enumerate() {
            let line = json!({"turn": i + 1, "report": t.report, "move": t.mv.changes()});
            let _ = writeln!(out, "{line}");
        }
        let footer = json!({
            "turns": self.total_turns(), "won": self.won, "within_bound": self.within_bound,
        });
        let _ = writeln!(out, "{footer}");
        out
    }
}

pub fn turn_bound(n: usize, k: usize, epsilon: f64) -> f64 {
    (1.0 + epsilon) * n as f64 / k as f64
}

/// `ceil(10 n / k)`.
pub fn default_hard_cap(n: usize, k: usize) -> usize {
    (10 * n).div_ceil(k.max(1))
}

/// Plays the resampling player against an honest environment until the
/// board is valid or `hard_cap_turns` turns have been played.
pub fn run_game(
    h: &Hypergraph,
    epsilon: f64,
    rng_seed: u64,
    hard_cap_turns: usize,
) -> Result<GameTranscript> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Precondition(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )));
    }
    let mut state = GameState::new(h.clone());
    let mut player = Player::new(state.public_n(), state.public_k(), rng_seed);
    let mut turns = Vec::new();
    let won = loop {
        let report = env_report(&state);
        if report.is_empty() {
            break true;
        }
        if turns.len() >= hard_cap_turns {
            break false;
        }
        let mv = player.respond(&report)?;
        state.apply(&mv)?;
        turns.push(TurnRecord { report, mv });
    };

    let bound = turn_bound(h.n(), h.k(), epsilon);
    let checked = h.k() >= MIN_BOUND_K && check_condition(h).satisfied;
    let within_bound = checked.then_some(won && turns.len() as f64 <= bound);
    Ok(GameTranscript {
        n: h.n(),
        m: h.m(),
        k: h.k(),
        epsilon,
        seed: rng_seed,
        bound,
        hard_cap: hard_cap_turns,
        turns,
        won,
        within_bound,
    })
}

/// Re-runs the recorded moves against a fresh environment and checks every
/// report and the final verdict.
pub fn replay(h: &Hypergraph, transcript: &GameTranscript) -> Result<()> {
    let mut state = GameState::new(h.clone());
    for (i, turn) in transcript.turns.iter().enumerate() {
        if state.report() != turn.report {
            return Err(Error::Protocol(format!(
                "report mismatch at turn {}",
                i + 1
            )));
        }
        state.apply(&turn.mv)?;
    }
    if state.finished() != transcript.won {
        return Err(Error::Protocol("final verdict does not match".into()));
    }
    Ok(())
}
