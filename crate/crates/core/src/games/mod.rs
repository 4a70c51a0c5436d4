//! Built-in benchmark games and the name catalog used by the CLI.

mod goofspiel;
mod matrix;
mod poker;

use std::path::Path;

pub use goofspiel::{build_goofspiel5, goofspiel_card_label};
pub use matrix::{build_bandit, build_matrix_game, BanditSpec, MatrixGameSpec};
pub use poker::{build_kuhn, build_leduc};

use crate::game::{load_game_file, Game, GameError};

/// Names accepted by [`game_by_name`], with placeholders for parameterized forms.
pub const GAME_NAMES: &[&str] =
    &["kuhn", "leduc", "goofspiel5", "matrix:<path>", "bandit:<payoffs>", "file:<path>"];

/// Whether `name` has the shape of a game name. Parameterized forms are not
/// opened or parsed.
pub fn is_game_name(name: &str) -> bool {
    matches!(name, "kuhn" | "leduc" | "goofspiel5")
        || ["matrix:", "bandit:", "file:"]
            .iter()
            .any(|p| name.strip_prefix(p).is_some_and(|rest| !rest.is_empty()))
}

pub(crate) fn unknown_game_message(name: &str) -> String {
    format!("unknown game {name:?}; valid names: {}", GAME_NAMES.join(", "))
}

/// Resolves a CLI game name.
///
/// `matrix:<path>` reads a payoff matrix for P1 (see [`MatrixGameSpec::parse`]),
/// `bandit:0,1,-1000000` builds a one-shot decision with the listed payoffs and
/// `file:<path>` loads a JSON game description.
pub fn game_by_name(name: &str) -> Result<Game, GameError> {
    match name {
        "kuhn" => return Ok(build_kuhn()),
        "leduc" => return Ok(build_leduc()),
        "goofspiel5" => return Ok(build_goofspiel5()),
        _ => {}
    }
    if let Some(path) = name.strip_prefix("matrix:") {
        let text = std::fs::read_to_string(Path::new(path))
            .map_err(|source| GameError::Io { path: path.to_owned(), source })?;
        let spec = MatrixGameSpec::parse(&text)?;
        return build_matrix_game(&spec).map(|g| g.renamed(name));
    }
    if let Some(list) = name.strip_prefix("bandit:") {
        let spec = BanditSpec::parse(list)?;
        return build_bandit(&spec).map(|g| g.renamed(name));
    }
    if let Some(path) = name.strip_prefix("file:") {
        return load_game_file(path).map(|g| g.renamed(name));
    }
    Err(GameError::Spec(unknown_game_message(name)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn name_shapes() {
        for ok in ["kuhn", "leduc", "goofspiel5", "bandit:0,1", "matrix:m.txt", "file:g.json"] {
            assert!(is_game_name(ok), "{ok}");
        }
        for bad in ["nosuch", "bandit:", "Kuhn", "goofspiel"] {
            assert!(!is_game_name(bad), "{bad}");
        }
    }

    #[test]
    fn unknown_name_lists_valid_ones() {
        let err = game_by_name("nosuch").unwrap_err().to_string();
        assert!(err.contains("kuhn") && err.contains("goofspiel5") && err.contains("bandit:"));
    }

    #[test]
    fn bandit_by_name() {
        let g = game_by_name("bandit:0,1,-1000000").unwrap();
        assert_eq!(g.name(), "bandit:0,1,-1000000");
        assert_eq!(g.payoff_range(), 1_000_001.0);
    }

    #[test]
    fn matrix_by_name() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.txt");
        std::fs::write(&path, "1, 0.9\n-0.7, 1\n").unwrap();
        let g = game_by_name(&format!("matrix:{}", path.display())).unwrap();
        assert!((g.payoff_range() - 1.7).abs() < 1e-12);
    }

    #[test]
    fn every_builtin_validates() {
        for g in [build_kuhn(), build_leduc(), build_goofspiel5()] {
            assert!(crate::game::validate_game(g.tree()).is_ok(), "{}", g.name());
        }
    }
}
