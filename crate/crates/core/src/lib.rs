pub mod exactla;
pub mod algebra;
pub mod cli;
pub mod modules;
pub mod homalg;
pub mod endo;
pub mod ktheory;
pub mod settings;
pub mod strat;
pub mod verdict;

pub use settings::Settings;
pub use verdict::Verdict;
