//! Footprint separation, tracking, and evaluation for pressure-sensing floor mats.
//!
//! The toolkit covers the full desk-scale loop for multi-person footprint
//! tracking on a grid of pressure cells:
//!
//! * [`geometry`]: axis-aligned box algebra, including the union-over-enclosure
//!   similarity used for footprint association;
//! * [`assign`]: minimum-cost assignment on gated rectangular cost matrices;
//! * [`tracker`]: the streaming association engine with interchangeable
//!   strategies (`uoe` and the `ioukalman` baseline) and per-track crop
//!   extraction;
//! * [`labelgen`]: per-person bounding-box label generation from raw pressure
//!   frames plus projected foot joints;
//! * [`simulate`]: a deterministic multi-person gait synthesizer and detector
//!   noise model that stand in for sensor hardware;
//! * [`metrics`]: CLEARMOT/identity tracking metrics and root-trajectory
//!   errors with rigid segment alignment;
//! * [`io`]: bit-exact readers and writers for every interchange format;
//! * [`render`]: pressure-frame visualization with per-id box colors;
//! * [`cli`]: the `presstrack` command-line front end.

pub mod assign;
pub mod cli;
pub mod geometry;
pub mod io;
pub mod labelgen;
pub mod metrics;
pub mod render;
pub mod simulate;
pub mod tracker;
