//! Deterministic simulator for survivability of elastic optical networks
//! under dual link failure.
//!
//! The library provisions connection requests on a slotted spectrum grid
//! under the continuity and contiguity constraints, protects each accepted
//! connection with one of three schemes — dedicated backup ([`Scheme::Dpp`]),
//! shared backup ([`Scheme::Spp`]), or shared backup with an intermediate
//! node and a standby restoration route ([`Scheme::Incb`]) — then injects
//! every (or a sampled set of) dual link failures and evaluates recovery
//! against a recovery-time constraint.
//!
//! # Module map
//!
//! - [`topology`]: graphs, deterministic shortest paths, disjoint pairs,
//!   and the two built-in reference networks.
//! - [`spectrum`]: the slot grid, first-fit search, and allocation with
//!   backup sharing.
//! - [`timing`]: analytic recovery-time formulas and the recovery-time
//!   constraint.
//! - [`workload`]: seeded random request generation and CSV exchange.
//! - [`protection`]: provisioning of the three schemes over a network
//!   state.
//! - [`failure`]: dual-failure scenario enumeration, impact
//!   classification, and recovery evaluation.
//! - [`metrics`]: blocking probability, provisioning ratio, and recovery
//!   time aggregation.
//! - [`config`] / [`harness`]: experiment configuration, sweep execution,
//!   and artifact emission.
//!
//! # Example
//!
//! ```
//! use eonsim::protection::{NetworkState, Provisioner, Scheme};
//! use eonsim::timing::TimingParams;
//! use eonsim::topology::{NodeId, Topology};
//! use eonsim::workload::Request;
//!
//! let t = Topology::load_builtin("cost239")?;
//! let mut state = NetworkState::new(&t);
//! let provisioner = Provisioner::new(&t, Scheme::Incb, TimingParams::default());
//! let outcome = provisioner.provision(
//!     &mut state,
//!     &Request { id: 0, source: NodeId(0), destination: NodeId(6), fr: 4 },
//! );
//! assert!(outcome.is_accepted());
//! # Ok::<(), eonsim::Error>(())
//! ```

pub mod config;
pub mod error;
pub mod failure;
pub mod harness;
pub mod metrics;
pub mod protection;
pub mod rng;
pub mod spectrum;
pub mod timing;
pub mod topology;
pub mod workload;

pub use error::{Error, Result};
pub use protection::Scheme;
pub use topology::Topology;
