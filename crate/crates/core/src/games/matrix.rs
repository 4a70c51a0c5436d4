use crate::game::{Game, GameError, GameTree, Player};

/// Payoff matrix for P1, who picks a row; P2 picks a column and receives the negation.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixGameSpec {
    rows: Vec<Vec<f64>>,
}

impl MatrixGameSpec {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, GameError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || cols == 0 {
            return Err(GameError::Spec("payoff matrix is empty".into()));
        }
        if rows.iter().any(|r| r.len() != cols) {
            return Err(GameError::Spec("payoff matrix rows have different lengths".into()));
        }
        if rows.iter().flatten().any(|x| !x.is_finite()) {
            return Err(GameError::Spec("payoff matrix has a non-finite entry".into()));
        }
        Ok(Self { rows })
    }

    /// Accepts either a JSON array of rows or one row per line with comma or
    /// whitespace separated entries.
    pub fn parse(text: &str) -> Result<Self, GameError> {
        let trimmed = text.trim_start();
        if trimmed.starts_with('[') {
            return Self::new(serde_json::from_str(trimmed)?);
        }
        let rows = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|line| {
                line.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|t| !t.is_empty())
                    .map(|t| {
                        t.parse::<f64>()
                            .map_err(|_| GameError::Spec(format!("bad matrix entry {t:?}")))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(rows)
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.rows[0].len()
    }
}

/// Encodes a simultaneous-move matrix game: P1 moves first, and P2's single
/// infoset hides which row was chosen.
pub fn build_matrix_game(spec: &MatrixGameSpec) -> Result<Game, GameError> {
    let mut tree = GameTree::new();
    let mut row_nodes = Vec::with_capacity(spec.num_rows());
    for (r, row) in spec.rows().iter().enumerate() {
        let cols: Vec<_> = row
            .iter()
            .enumerate()
            .map(|(c, &payoff)| (format!("c{c}"), tree.terminal(payoff)))
            .collect();
        row_nodes.push((format!("r{r}"), tree.decision(Player::Two, "col", cols)));
    }
    tree.decision(Player::One, "row", row_nodes);
    Game::new("matrix", tree)
}

/// A single decision for P1 with a fixed payoff per action. P2 never moves.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditSpec {
    payoffs: Vec<f64>,
}

impl BanditSpec {
    pub fn new(payoffs: Vec<f64>) -> Result<Self, GameError> {
        if payoffs.len() < 2 {
            return Err(GameError::Spec("a bandit needs at least 2 actions".into()));
        }
        if payoffs.iter().any(|x| !x.is_finite()) {
            return Err(GameError::Spec("bandit payoffs must be finite".into()));
        }
        Ok(Self { payoffs })
    }

    /// Parses a comma-separated payoff list such as `0,1,-1000000`.
    pub fn parse(list: &str) -> Result<Self, GameError> {
        let payoffs = list
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| GameError::Spec(format!("bad bandit payoff {t:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(payoffs)
    }

    pub fn payoffs(&self) -> &[f64] {
        &self.payoffs
    }
}

pub fn build_bandit(spec: &BanditSpec) -> Result<Game, GameError> {
    let mut tree = GameTree::new();
    let arms: Vec<_> = spec
        .payoffs()
        .iter()
        .enumerate()
        .map(|(k, &p)| (format!("a{k}"), tree.terminal(p)))
        .collect();
    tree.decision(Player::One, "bandit", arms);
    Game::new("bandit", tree)
}
