//! Active learning of deterministic one-clock timed automata.
//!
//! The learners query a teacher for memberships and equivalences. With a
//! smart teacher the resets along each word are revealed; with a normal
//! teacher they are guessed and the learner searches over table instances.

pub mod alphabet;
pub mod automaton;
pub mod cli;
pub mod generator;
pub mod guard;
pub mod hypothesis;
pub mod io;
pub mod learner;
pub mod region;
pub mod table;
pub mod teacher;
pub mod time;
pub mod word;

pub use alphabet::{Action, Alphabet};
pub use automaton::{LocationId, Ota, OtaBuilder, Transition, Verdict};
pub use guard::Guard;
pub use learner::{learn_normal, learn_smart, LearnError, LearnResult, LearnStats, NormalConfig, SmartConfig};
pub use table::ObservationTable;
pub use teacher::{equivalent, Oracle};
pub use time::TimeValue;
pub use word::{DelayWord, LogicalWord, ResetAction, ResetDelayWord, ResetLogicalWord, TimedAction};
