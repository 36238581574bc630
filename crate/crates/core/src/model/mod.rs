//! Source, channel and policy parameters, the joint `(X, X̂)` chain, and its
//! stationary distribution.

mod chain;
mod params;
mod stationary;
mod three_state;

pub use chain::{
    JointChain, build_joint_chain_change_aware, build_joint_chain_rs, build_joint_chain_rs3,
    build_joint_chain_semantics,
};
pub use params::{
    ChannelParams, ChannelParams3, CostWeights, EffectiveRates, PolicyKind, RsPolicy, RsPolicy3, SourceParams,
    SourceParams3,
};
pub use stationary::{
    JointStationary, phi, stationary_change_aware, stationary_change_aware_numeric, stationary_numeric,
    stationary_rs, stationary_rs_numeric, stationary_semantics, stationary_semantics_numeric,
};
pub use three_state::{
    CLOSED_FORM_TOLERANCE, JointStationary3, ThreeStateCheck, check_three_state_closed_form,
    stationary_three_state, stationary_three_state_closed,
};
