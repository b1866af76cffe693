//! Command-line front end: argument parsing, caching, exports, reference
//! verification, and SVG rendering on top of the `kronload` library.

pub mod args;
pub mod cache;
pub mod commands;
pub mod export;
pub mod fixtures;
pub mod svg;
pub mod verify;
