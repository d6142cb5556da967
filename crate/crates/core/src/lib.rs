pub mod cli;
pub mod discourse;
pub mod drs;
pub mod executor;
pub mod features;
pub mod inference;
pub mod kb;
pub mod lexicon;
pub mod logic;
pub mod paraphrase;
pub mod parser;
pub mod session;
pub mod translator;
