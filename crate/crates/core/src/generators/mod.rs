//! Families of transition matrices with engineered emergence profiles.

mod garden;
mod pinpoint;
mod preferential;

pub use garden::{garden_example, garden_examples, GardenFixture, GARDEN_NAMES};
pub use pinpoint::{pinpoint_tpm, PinpointSpec, DEFAULT_STAY_PROB, DEFAULT_STEP_PROB};
pub use preferential::{grow_pa_network, grow_pa_tpm, GrowthConfig, Network, Orientation};
