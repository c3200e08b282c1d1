pub mod augment;
pub mod cli;
pub mod coloring;
pub mod driver;
pub mod error;
pub mod graph;
pub mod hierarchy;
pub mod io;
pub mod kempe;
pub mod oracle;
pub mod series;
pub mod trace;
pub mod tree;
