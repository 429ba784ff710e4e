use std::fmt;

use serde::Serialize;

/// Number of indeterminates known to the engine.
pub const NVARS: usize = 12;

/// Indeterminates of the coefficient algebra.
///
/// The order of the variants fixes the monomial order used for canonical
/// forms (lexicographic, `Gamma` most significant).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Var {
    Gamma,
    A,
    B,
    Beta,
    K,
    Eps,
    Lambda,
    Q,
    N,
    X,
    Y,
    Lambda1,
}

impl Var {
    pub const ALL: [Var; NVARS] = [
        Var::Gamma,
        Var::A,
        Var::B,
        Var::Beta,
        Var::K,
        Var::Eps,
        Var::Lambda,
        Var::Q,
        Var::N,
        Var::X,
        Var::Y,
        Var::Lambda1,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Var {
        Var::ALL[i]
    }

    /// ASCII name used by the parser and in rendered output.
    pub fn name(self) -> &'static str {
        match self {
            Var::Gamma => "gamma",
            Var::A => "a",
            Var::B => "b",
            Var::Beta => "beta",
            Var::K => "k",
            Var::Eps => "eps",
            Var::Lambda => "lambda",
            Var::Q => "q",
            Var::N => "n",
            Var::X => "x",
            Var::Y => "y",
            Var::Lambda1 => "lambda1",
        }
    }

    pub fn parse(name: &str) -> Option<Var> {
        Some(match name {
            "gamma" | "γ" => Var::Gamma,
            "a" => Var::A,
            "b" => Var::B,
            "beta" | "β" => Var::Beta,
            "k" => Var::K,
            "eps" | "ε" => Var::Eps,
            "lambda" | "λ" => Var::Lambda,
            "q" => Var::Q,
            "n" => Var::N,
            "x" => Var::X,
            "y" => Var::Y,
            "lambda1" | "λ₁" => Var::Lambda1,
            _ => return None,
        })
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
