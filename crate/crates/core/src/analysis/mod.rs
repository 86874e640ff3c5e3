//! Post-processing: visibility, channel capacity, profiles and fits.

pub mod capacity;
pub mod efficiency;
pub mod fit;
pub mod oracle;
pub mod profile;
pub mod special;
pub mod visibility;

pub use capacity::{buffer_width, channel_density};
pub use efficiency::retrieval_efficiency;
pub use fit::{fit_exponential, ExpFit};
pub use oracle::{brute_force_visibility, visibility_decay_curve, DecayPoint};
pub use profile::{edge_width_10_90, extract_profile};
pub use special::{erf, erf_inv, erfc};
pub use visibility::{
    relative_fringe_visibility, visibility, visibility_approx, visibility_approx_with_background,
    ChannelGeometry, Profile, VisibilityResult,
};
