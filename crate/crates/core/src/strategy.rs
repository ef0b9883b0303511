//! Game-sequence strategies over the two-token alphabet {A, B}.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StrategyError {
    #[error("strategy must be a nonempty sequence over {{A, B}}")]
    Empty,
    #[error("invalid strategy token {0:?}; only A and B are allowed")]
    InvalidToken(char),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GameToken {
    A,
    B,
}

/// A finite token sequence, repeated cyclically by the runners.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Strategy {
    tokens: Vec<GameToken>,
}

impl Strategy {
    pub fn new(tokens: Vec<GameToken>) -> Result<Self, StrategyError> {
        if tokens.is_empty() {
            return Err(StrategyError::Empty);
        }
        Ok(Self { tokens })
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        false // nonempty by construction
    }

    pub fn tokens(&self) -> &[GameToken] {
        &self.tokens
    }

    /// Token for the 0-based elementary-game index, cycling.
    pub fn token_at(&self, step: usize) -> GameToken {
        self.tokens[step % self.tokens.len()]
    }
}

impl FromStr for Strategy {
    type Err = StrategyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut tokens = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch.to_ascii_uppercase() {
                'A' => tokens.push(GameToken::A),
                'B' => tokens.push(GameToken::B),
                _ => return Err(StrategyError::InvalidToken(ch)),
            }
        }
        Strategy::new(tokens)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for token in &self.tokens {
            match token {
                GameToken::A => write!(f, "A")?,
                GameToken::B => write!(f, "B")?,
            }
        }
        Ok(())
    }
}
