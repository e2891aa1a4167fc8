pub mod ast;
pub mod fixdim;
pub mod parser;
pub mod metrics;
pub mod slope;
pub mod geom;
pub mod scene;
pub mod svg;
pub mod dump;
pub mod pipeline;
pub mod cli;
