//! Cooperative sequential Coin Game on a 3x3 grid.
//!
//! Agent 0 is red, agent 1 is blue. Agents move alternately starting with
//! agent 0; coordinates are `(row, col)` with north = `row - 1`. Agents may
//! share a cell. Stepping onto the coin collects it: the collector gets +1 and,
//! if the coin has the other agent's color, the other agent gets -2. A new coin
//! then spawns uniformly on a cell no agent occupies, with a uniform color.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const GRID: usize = 3;
pub const CELLS: usize = GRID * GRID;
pub const N_AGENTS: usize = 2;
pub const N_ACTIONS: usize = 4;
/// Four 9-cell planes.
pub const OBS_DIM: usize = 4 * CELLS;
pub const DEFAULT_EPISODE_LEN: usize = 50;

pub const OWN_COIN_REWARD: f64 = 1.0;
pub const STOLEN_COIN_PENALTY: f64 = -2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pos {
    pub row: usize,
    pub col: usize,
}

impl Pos {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    pub fn cell(self) -> usize {
        GRID * self.row + self.col
    }

    fn from_cell(cell: usize) -> Self {
        Self::new(cell / GRID, cell % GRID)
    }

    /// The neighbouring cell in the direction of `action`, if it is on the grid.
    pub fn moved(self, action: Action) -> Option<Pos> {
        let Pos { row, col } = self;
        match action {
            Action::North => row.checked_sub(1).map(|r| Pos::new(r, col)),
            Action::South => (row + 1 < GRID).then(|| Pos::new(row + 1, col)),
            Action::West => col.checked_sub(1).map(|c| Pos::new(row, c)),
            Action::East => (col + 1 < GRID).then(|| Pos::new(row, col + 1)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Action {
    North = 0,
    South = 1,
    West = 2,
    East = 3,
}

impl Action {
    pub const ALL: [Action; N_ACTIONS] = [Action::North, Action::South, Action::West, Action::East];

    pub fn from_index(index: usize) -> Option<Action> {
        Self::ALL.get(index).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoinColor {
    Red,
    Blue,
}

impl CoinColor {
    /// Color owned by an agent: 0 is red, 1 is blue.
    pub fn of_agent(agent: usize) -> CoinColor {
        if agent == 0 {
            CoinColor::Red
        } else {
            CoinColor::Blue
        }
    }

    pub fn owner(self) -> usize {
        match self {
            CoinColor::Red => 0,
            CoinColor::Blue => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Collection {
    pub collector: usize,
    pub own_color: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepOutcome {
    pub rewards: [f64; N_AGENTS],
    pub collected: Option<Collection>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoinGameState {
    pub positions: [Pos; N_AGENTS],
    pub coin_pos: Pos,
    pub coin_color: CoinColor,
    pub active_agent: usize,
    pub step_count: usize,
}

fn random_color<R: Rng + ?Sized>(rng: &mut R) -> CoinColor {
    if rng.random_bool(0.5) {
        CoinColor::Red
    } else {
        CoinColor::Blue
    }
}

impl CoinGameState {
    /// Agents on two distinct random cells, coin on one of the other seven.
    pub fn reset<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let first = rng.random_range(0..CELLS);
        let mut second = rng.random_range(0..CELLS - 1);
        if second >= first {
            second += 1;
        }
        let positions = [Pos::from_cell(first), Pos::from_cell(second)];
        let coin_pos = free_cell(&positions, rng);
        Self {
            positions,
            coin_pos,
            coin_color: random_color(rng),
            active_agent: 0,
            step_count: 0,
        }
    }

    pub fn is_done(&self, episode_len: usize) -> bool {
        self.step_count >= episode_len
    }

    /// Legality of each action for the active agent: a move is legal iff it
    /// stays on the grid.
    pub fn legal_mask(&self) -> [bool; N_ACTIONS] {
        let pos = self.positions[self.active_agent];
        Action::ALL.map(|a| pos.moved(a).is_some())
    }

    /// Binary planes `[agent 0, agent 1, red coin, blue coin]`, each row-major.
    pub fn observe(&self) -> [f64; OBS_DIM] {
        let mut obs = [0.0; OBS_DIM];
        obs[self.positions[0].cell()] = 1.0;
        obs[CELLS + self.positions[1].cell()] = 1.0;
        let coin_plane = 2 + self.coin_color.owner();
        obs[coin_plane * CELLS + self.coin_pos.cell()] = 1.0;
        obs
    }

    /// Planes from `agent`'s point of view:
    /// `[agent, other agent, agent's coin color, other color]`.
    ///
    /// Identical to [`observe`](Self::observe) for agent 0. Policies act on this
    /// view, so one genome can drive either agent in self-play.
    pub fn observe_for(&self, agent: usize) -> [f64; OBS_DIM] {
        let me = agent;
        let mut obs = [0.0; OBS_DIM];
        obs[self.positions[me].cell()] = 1.0;
        obs[CELLS + self.positions[1 - me].cell()] = 1.0;
        let plane = if self.coin_color.owner() == me { 2 } else { 3 };
        obs[plane * CELLS + self.coin_pos.cell()] = 1.0;
        obs
    }

    /// Moves the active agent, resolves a coin pickup and hands the turn over.
    pub fn step<R: Rng + ?Sized>(&self, action: usize, rng: &mut R) -> Result<(Self, StepOutcome)> {
        let agent = self.active_agent;
        let from = self.positions[agent];
        let to = Action::from_index(action)
            .and_then(|a| from.moved(a))
            .ok_or(Error::IllegalAction {
                agent,
                action,
                position: (from.row, from.col),
            })?;

        let mut next = self.clone();
        next.positions[agent] = to;
        let mut outcome = StepOutcome {
            rewards: [0.0; N_AGENTS],
            collected: None,
        };
        if to == self.coin_pos {
            let owner = self.coin_color.owner();
            let own_color = owner == agent;
            outcome.rewards[agent] = OWN_COIN_REWARD;
            if !own_color {
                outcome.rewards[owner] = STOLEN_COIN_PENALTY;
            }
            outcome.collected = Some(Collection {
                collector: agent,
                own_color,
            });
            next.coin_pos = free_cell(&next.positions, rng);
            next.coin_color = random_color(rng);
        }
        next.active_agent = 1 - agent;
        next.step_count += 1;
        Ok((next, outcome))
    }
}

/// Uniform random cell not occupied by any agent.
fn free_cell<R: Rng + ?Sized>(positions: &[Pos; N_AGENTS], rng: &mut R) -> Pos {
    let free: Vec<usize> = (0..CELLS)
        .filter(|&c| positions.iter().all(|p| p.cell() != c))
        .collect();
    Pos::from_cell(free[rng.random_range(0..free.len())])
}

/// One line of an episode trace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: usize,
    pub agent: usize,
    pub action: usize,
    pub outcome: StepOutcome,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let event = match self.outcome.collected {
            None => "-".to_string(),
            Some(c) if c.own_color => format!("agent{} own coin", c.collector),
            Some(c) => format!("agent{} other coin", c.collector),
        };
        write!(
            f,
            "{} {} {} {} {} {}",
            self.step,
            self.agent,
            self.action,
            self.outcome.rewards[0],
            self.outcome.rewards[1],
            event
        )
    }
}
