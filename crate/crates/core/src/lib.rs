//! Fractional list coloring of plane graphs of girth five: plane maps,
//! exact list-coloring search, criticality checks and canvas potentials.

pub mod canvas;
pub mod color;
pub mod coloring;
pub mod graph;
pub mod harness;
pub mod instance;
pub mod planar_map;
pub mod solver;
