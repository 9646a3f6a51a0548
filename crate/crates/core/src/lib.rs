pub mod cli;
pub mod error;
pub mod game;
pub mod lp;
pub mod martingale;
pub mod matrix_game;
pub mod metric;
pub mod nonrevealing;
pub mod piecewise;
pub mod rational;
pub mod recursion;

pub use error::{Error, Result};
pub use game::{Belief, Builtin, GameFamily, Matrix, MixedAction, Segment};
pub use rational::Rational;
