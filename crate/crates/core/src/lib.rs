pub mod checkers;
pub mod crypto;
pub mod evidence;
pub mod kernel;
pub mod machine;
pub mod spec_order;
pub mod tape;
pub mod value;
pub mod scenarios;
pub mod cli;
