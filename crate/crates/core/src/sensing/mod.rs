//! Fading measurements, properness checks and equivalent second-order models.

mod equivalent;
mod laws;
mod network;
mod noise;
mod verify;

pub use equivalent::{build_equivalent_model, build_wl_equivalent_model, wl_gain_mean, wl_sigma, EquivalentModel};
pub use laws::{ComponentFading, FadingLaw, PartLaw};
pub use network::{check_properness, tk_pattern_excess, ProperReport, SensorNetwork};
pub use noise::NoiseLaw;
pub use verify::{verify_second_order_equivalence, EquivalenceReport, MomentComparison};
